"""Game values: non-negative integers plus a distinguished infinity."""

from __future__ import annotations

from functools import total_ordering


@total_ordering
class _Infinity:
    """Singleton standing for an unbounded game value.

    Compares above every int. Adding an int yields infinity again.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("graphdef.INF")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_finite(value) -> bool:
    return value is not INF


def to_json(value):
    """Encode a game value for JSON output (infinity as the string "inf")."""
    return "inf" if value is INF else value


def from_json(value):
    return INF if value == "inf" else int(value)


def vmin(values):
    """min() that treats INF correctly and returns INF on an empty input."""
    best = INF
    for v in values:
        if v is not INF and (best is INF or v < best):
            best = v
    return best
