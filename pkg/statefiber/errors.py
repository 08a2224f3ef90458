from enum import Enum
from typing import Optional


class ErrorCode(str, Enum):
    # graph_model
    DISCONNECTED = 'DISCONNECTED'
    MALFORMED_ROTATION = 'MALFORMED_ROTATION'
    NON_SPHERICAL = 'NON_SPHERICAL'
    NON_BIPARTITE = 'NON_BIPARTITE'
    UNSIGNED = 'UNSIGNED'
    HAS_CUT_VERTEX = 'HAS_CUT_VERTEX'
    # ingest
    SYNTAX = 'SYNTAX'
    ARC_COUNT = 'ARC_COUNT'
    INCONSISTENT_ORIENTATION = 'INCONSISTENT_ORIENTATION'
    STATE_LENGTH = 'STATE_LENGTH'
    # stallings
    PATH_NOT_CLOSED = 'PATH_NOT_CLOSED'
    NON_SQUARE = 'NON_SQUARE'
    # families
    ODD_CYCLE = 'ODD_CYCLE'
    PARITY = 'PARITY'
    UNREDUCED = 'UNREDUCED'
    TOO_FEW_STRANDS = 'TOO_FEW_STRANDS'
    INVALID_CF = 'INVALID_CF'
    # should never surface
    INTERNAL_MISMATCH = 'INTERNAL_MISMATCH'
    BAD_CERTIFICATE = 'BAD_CERTIFICATE'


class StateFiberError(Exception):
    '''
    Root of every error raised on purpose by statefiber

    `code` is stable and machine readable, the message is for humans
    '''
    code: ErrorCode = ErrorCode.INTERNAL_MISMATCH

    def __init__(self, message: str, code: Optional[ErrorCode] = None):
        if code is not None:
            self.code = code
        super().__init__(message)

    def __str__(self) -> str:
        return f'{self.code.value}: {super().__str__()}'


class GraphError(StateFiberError):
    code = ErrorCode.MALFORMED_ROTATION


class ParseError(StateFiberError):
    code = ErrorCode.SYNTAX


class AlgebraError(StateFiberError):
    code = ErrorCode.PATH_NOT_CLOSED


class FamilyError(StateFiberError):
    code = ErrorCode.INVALID_CF


class CertificateError(StateFiberError):
    code = ErrorCode.BAD_CERTIFICATE


class InternalMismatch(StateFiberError):
    code = ErrorCode.INTERNAL_MISMATCH
