"""Exact projective points and lines over the rationals.

Points and lines of the projective plane are stored as primitive integer
triples with a canonical sign, so that projective equality is plain
structural equality and dictionaries/sets behave as expected.  All
arithmetic is integer arithmetic; nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

Triple = tuple[int, int, int]


def normalize_triple(v) -> Triple:
    """Unique primitive, sign-canonical representative of a nonzero triple.

    Divides by the gcd of the entries and flips signs so that the first
    nonzero entry is positive.  Rejects the zero vector.
    """
    a, b, c = (int(x) for x in v)
    g = gcd(gcd(abs(a), abs(b)), abs(c))
    if g == 0:
        raise ValueError("cannot normalize the zero triple")
    a, b, c = a // g, b // g, c // g
    for x in (a, b, c):
        if x:
            return (a, b, c) if x > 0 else (-a, -b, -c)
    raise AssertionError("unreachable")


@dataclass(frozen=True, order=True)
class ProjectivePoint:
    """A point of P^2 with primitive, sign-canonical integer coordinates."""

    coords: Triple

    def __str__(self) -> str:
        return "({}:{}:{})".format(*self.coords)


@dataclass(frozen=True, order=True)
class ProjectiveLine:
    """A line of P^2, stored by its primitive dual coordinates."""

    coeffs: Triple

    def __str__(self) -> str:
        return "[{}:{}:{}]".format(*self.coeffs)


def point(a, b=None, c=None) -> ProjectivePoint:
    v = a if b is None and c is None else (a, b, c)
    return ProjectivePoint(normalize_triple(v))


def line(a, b=None, c=None) -> ProjectiveLine:
    v = a if b is None and c is None else (a, b, c)
    return ProjectiveLine(normalize_triple(v))


def dot(u, v) -> int:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def cross(u, v) -> Triple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def incident(p: ProjectivePoint, l: ProjectiveLine) -> bool:
    """True iff the point lies on the line (exact dot product test)."""
    return dot(p.coords, l.coeffs) == 0


def join(p: ProjectivePoint, q: ProjectivePoint) -> ProjectiveLine:
    """The unique line through two distinct points."""
    if p == q:
        raise ValueError(f"join of equal points {p}")
    return ProjectiveLine(normalize_triple(cross(p.coords, q.coords)))


def meet(l: ProjectiveLine, m: ProjectiveLine) -> ProjectivePoint:
    """The unique intersection point of two distinct lines."""
    if l == m:
        raise ValueError(f"meet of equal lines {l}")
    return ProjectivePoint(normalize_triple(cross(l.coeffs, m.coeffs)))


def height(x) -> int:
    """Largest absolute entry of the primitive representative.

    Used only for heuristics and sanity reports, never for correctness.
    """
    return max(abs(v) for v in _triple_of(x))


def min_entry_height(x) -> int:
    """Smallest absolute entry of the primitive representative.

    Alternative size reading kept alongside :func:`height` so sanity
    reports can show both; note it is 0 for coordinate points.
    """
    return min(abs(v) for v in _triple_of(x))


def _triple_of(x) -> Triple:
    if isinstance(x, ProjectivePoint):
        return x.coords
    if isinstance(x, ProjectiveLine):
        return x.coeffs
    return normalize_triple(x)
