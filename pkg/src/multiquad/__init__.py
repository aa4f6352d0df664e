"""Exact counting of multi-quadratic number fields by discriminant."""

__version__ = "0.1.0"

from .errors import MultiquadError
from .fields import FieldKey, Mod4Class, Presentation, discriminant, field_key, normalize
from .countform import CountFamily, ExpPoly, Kind, derive_family, eval_count
from .globalcount import count_N, count_N_many
from .kernels import BACKEND

__all__ = [
    "BACKEND",
    "CountFamily",
    "ExpPoly",
    "FieldKey",
    "Kind",
    "Mod4Class",
    "MultiquadError",
    "Presentation",
    "count_N",
    "count_N_many",
    "derive_family",
    "discriminant",
    "eval_count",
    "field_key",
    "normalize",
    "__version__",
]
