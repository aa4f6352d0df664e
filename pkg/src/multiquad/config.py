"""Runtime configuration: sieve bound, segment size, worker count."""

import os

from .errors import BoundExceededError

DEFAULT_SIEVE_BOUND = 10**8
DEFAULT_SEGMENT_SIZE = 1 << 22
# radicals and spf entries are int64 in the kernels
HARD_LIMIT = 2**62

_threads = 1


def sieve_bound() -> int:
    """Largest integer the sieve may cover; ``MULTIQUAD_SIEVE_BOUND`` overrides the default."""
    raw = os.environ.get("MULTIQUAD_SIEVE_BOUND")
    bound = DEFAULT_SIEVE_BOUND if raw is None else int(float(raw))
    if bound < 2 or bound > HARD_LIMIT:
        raise BoundExceededError(f"sieve bound {bound} outside [2, 2**62]")
    return bound


def segment_size() -> int:
    raw = os.environ.get("MULTIQUAD_SEGMENT_SIZE")
    return DEFAULT_SEGMENT_SIZE if raw is None else max(1024, int(raw))


def threads() -> int:
    return _threads


def set_threads(n: int) -> None:
    global _threads
    _threads = max(1, int(n))
