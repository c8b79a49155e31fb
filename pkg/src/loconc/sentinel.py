"""Typed "+infinity" sentinel used for vacuous bounds and absent LCDs.

A dedicated singleton (instead of float('inf')) keeps CSV/JSON reports
clean and makes "this bound carries no information" distinguishable from
a huge finite value.
"""

from __future__ import annotations


class Infinite:
    """Singleton marker for an infinite / vacuous quantity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    def __float__(self) -> float:
        return float("inf")

    # Comparisons against real numbers: the sentinel dominates everything.
    def __gt__(self, other) -> bool:
        return not isinstance(other, Infinite)

    def __ge__(self, other) -> bool:
        return True

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return isinstance(other, Infinite)


INFINITE = Infinite()


def is_infinite(value) -> bool:
    return isinstance(value, Infinite)
