import os
from dataclasses import dataclass, fields, replace
from typing import Any, Mapping

_PREFIX = 'STATEFIBER_'

GENERATOR_MODES = ('tree', 'regions')


@dataclass(frozen=True)
class Config:
    '''
    Knobs shared by the library, the CLI and the Flask app

    Read from a mapping of upper-case `STATEFIBER_*` keys, which is what both
    `app.config` and `os.environ` look like
    '''
    seed: int = 20210829
    workers: int = 4
    generator_mode: str = 'tree'
    fold_trace: bool = True
    check_unimodular: bool = True

    def __post_init__(self):
        if self.generator_mode not in GENERATOR_MODES:
            raise ValueError(f'generator_mode must be one of {GENERATOR_MODES}, got {self.generator_mode!r}')
        if self.workers < 1:
            raise ValueError(f'workers must be positive, got {self.workers}')

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any]) -> 'Config':
        values = {}
        for field in fields(cls):
            key = _PREFIX + field.name.upper()
            if key in mapping:
                values[field.name] = _coerce(mapping[key], field.type)
        return cls(**values)

    @classmethod
    def from_env(cls) -> 'Config':
        return cls.from_mapping(os.environ)

    def override(self, **changes) -> 'Config':
        # None means "flag not given"
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def as_mapping(self) -> dict:
        return {_PREFIX + field.name.upper(): getattr(self, field.name) for field in fields(self)}


def _coerce(value: Any, kind) -> Any:
    if kind in (bool, 'bool'):
        if isinstance(value, str):
            return value.strip().lower() in ('1', 'true', 'yes', 'on')
        return bool(value)
    if kind in (int, 'int'):
        return int(value)
    return str(value)
