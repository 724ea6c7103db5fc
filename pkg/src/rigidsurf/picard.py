"""Divisor classes on the blowup of the plane at the singular points.

Classes live in the free lattice spanned by the pullback of a general
line H and the exceptional divisors E_1..E_m over the blown-up points,
with intersection form H^2 = 1, E_k^2 = -1, H.E_k = 0.  Coefficients
are stored with their written sign: the class is h*H + sum(e_k * E_k).
"""

from __future__ import annotations

from dataclasses import dataclass

from .arrangement import IncidenceTable


@dataclass(frozen=True)
class DivisorClass:
    h: int
    e: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "e", tuple(int(x) for x in self.e))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check_rank(other)
        return DivisorClass(self.h + other.h, tuple(a + b for a, b in zip(self.e, other.e)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._check_rank(other)
        return DivisorClass(self.h - other.h, tuple(a - b for a, b in zip(self.e, other.e)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.h, tuple(-a for a in self.e))

    def __rmul__(self, k: int) -> "DivisorClass":
        return DivisorClass(k * self.h, tuple(k * a for a in self.e))

    def _check_rank(self, other):
        if len(self.e) != len(other.e):
            raise ValueError("divisor classes live in lattices of different rank")

    @property
    def rank(self) -> int:
        return len(self.e) + 1


def intersect(a: DivisorClass, b: DivisorClass) -> int:
    """Intersection number: a.h*b.h - sum over exceptional coefficients."""
    if len(a.e) != len(b.e):
        raise ValueError("divisor classes live in lattices of different rank")
    return a.h * b.h - sum(x * y for x, y in zip(a.e, b.e))


def zero(m: int) -> DivisorClass:
    return DivisorClass(0, (0,) * m)


def hyperplane(m: int) -> DivisorClass:
    """Pullback of a general line."""
    return DivisorClass(1, (0,) * m)


def exceptional(nu: int, m: int) -> DivisorClass:
    if not 0 <= nu < m:
        raise IndexError(f"exceptional index {nu} out of range for {m} points")
    return DivisorClass(0, tuple(1 if k == nu else 0 for k in range(m)))


def strict_transform(i: int, table: IncidenceTable) -> DivisorClass:
    """Class of the strict transform of line i: H minus the E_k it meets."""
    m = table.num_points
    lines = table.arrangement.lines
    if not 0 <= i < len(lines):
        raise IndexError(f"line index {i} out of range")
    e = [0] * m
    for k in table.points_on[i]:
        e[k] = -1
    return DivisorClass(1, tuple(e))


def canonical_class(m: int) -> DivisorClass:
    """-3H plus the sum of all exceptional divisors."""
    return DivisorClass(-3, (1,) * m)


def branch_class(table: IncidenceTable) -> DivisorClass:
    """Class of the total branch divisor: all strict transforms plus all E_k.

    Equals n*H - sum (mu_k - 1) E_k for an arrangement of n lines.
    """
    n = len(table.arrangement.lines)
    return DivisorClass(n, tuple(-(mu - 1) for mu in table.mu))


__all__ = [
    "DivisorClass",
    "branch_class",
    "canonical_class",
    "exceptional",
    "hyperplane",
    "intersect",
    "strict_transform",
    "zero",
]
