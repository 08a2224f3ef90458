from .config import Config
from .errors import ErrorCode, StateFiberError
from .graph_model import EdgeLabel, PlanarStateGraph, VertexSign, parse_graph, serialize_graph, validate
from .ingest import parse_pd, parse_state, resolve, seifert_state
from .stallings import FreeWord, Verdict, decide_piece, fold
from .verdict import Decision, decide, verify_decision
