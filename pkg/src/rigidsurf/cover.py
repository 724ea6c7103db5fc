"""Building data for abelian covers branched over an arrangement.

The covering group is (Z/p)^r for a prime p.  A label map assigns a
nonzero group element to every strict transform and every exceptional
divisor; divisibility fixes the labels of the last line and of the
exceptional divisors from the first n-1 line labels, injectivity asks
that all labels be distinct points of P^{r-1}(F_p), and spanning that
they generate the group.  Each character chi then determines a divisor
class, the twist datum driving all downstream cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .arrangement import IncidenceTable
from .picard import DivisorClass

Vector = tuple[int, ...]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def pairing_lift(chi: Vector, g: Vector, p: int) -> int:
    """The character pairing lifted to the integer range 0..p-1."""
    return sum(c * x for c, x in zip(chi, g)) % p


def all_characters(p: int, r: int) -> list[Vector]:
    """All p^r characters in lexicographic order."""
    return [tuple(c) for c in product(range(p), repeat=r)]


@dataclass(frozen=True)
class LabelMap:
    """Labels for the strict transforms and exceptional divisors."""

    p: int
    r: int
    line_labels: tuple[Vector, ...]
    point_labels: tuple[Vector, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"group order base {self.p} must be prime")
        for lab in (*self.line_labels, *self.point_labels):
            if len(lab) != self.r or any(not 0 <= x < self.p for x in lab):
                raise ValueError(f"label {lab} is not a reduced vector of length {self.r}")

    @property
    def all_labels(self) -> tuple[Vector, ...]:
        return self.line_labels + self.point_labels


def projective_label(lab: Vector, p: int) -> Vector | None:
    """Canonical representative in P^{r-1}(F_p), or None for the zero label."""
    for x in lab:
        if x:
            inv = pow(x, p - 2, p)
            return tuple((inv * y) % p for y in lab)
    return None


def complete_labels(partial, table: IncidenceTable, p: int, r: int) -> LabelMap:
    """Extend labels on all lines but the last to a divisible label map.

    The last line label is minus the sum of the others; each exceptional
    label is the sum of the labels of the lines through its point.  The
    divisibility condition then holds by construction (and is re-checked
    by :func:`validate_labels`).  Completed labels may come out zero;
    such maps simply fail the injectivity validation.
    """
    n = len(table.arrangement.lines)
    partial = [tuple(int(x) % p for x in lab) for lab in partial]
    if len(partial) != n - 1:
        raise ValueError(f"expected {n - 1} line labels, got {len(partial)}")
    if any(all(x == 0 for x in lab) for lab in partial):
        raise ValueError("prescribed line labels must be nonzero")
    last = tuple((-sum(col)) % p for col in zip(*partial))
    line_labels = (*partial, last)
    point_labels = tuple(
        tuple(sum(col) % p for col in zip(*(line_labels[i] for i in through)))
        for through in table.lines_through
    )
    return LabelMap(p, r, line_labels, point_labels)


@dataclass(frozen=True)
class ValidationReport:
    divisibility: bool
    injectivity: bool
    spanning: bool
    smoothness: bool
    distinct_projective_labels: int
    projective_space_size: int
    details: dict

    @property
    def all_ok(self) -> bool:
        return self.divisibility and self.injectivity and self.spanning and self.smoothness


def validate_labels(labels: LabelMap, table: IncidenceTable) -> ValidationReport:
    """Check divisibility, injectivity, spanning, and cover smoothness.

    Divisibility is checked literally for every character: the labelled
    sum of divisor classes must be divisible by p coordinatewise in the
    blowup lattice.  Smoothness needs the branch divisor to have normal
    crossings (automatic once every point on >= 3 lines is blown up:
    verified) and independent labels wherever two branch components
    meet: at a double point of the arrangement, or where a strict
    transform crosses an exceptional divisor.
    """
    p, r = labels.p, labels.r
    n = len(table.arrangement.lines)
    m = table.num_points
    details: dict = {}

    line_arr = np.array(labels.line_labels, dtype=np.int64)
    point_arr = (
        np.array(labels.point_labels, dtype=np.int64)
        if m
        else np.zeros((0, r), dtype=np.int64)
    )
    chars = np.array(all_characters(p, r), dtype=np.int64)
    pl = (chars @ line_arr.T) % p
    pe = (chars @ point_arr.T) % p if m else np.zeros((len(chars), 0), dtype=np.int64)

    inc = np.zeros((m, n), dtype=np.int64)
    for nu in range(m):
        inc[nu, list(table.lines_through[nu])] = 1
    h_coeff = pl.sum(axis=1)
    e_coeff = -(pl @ inc.T) + pe
    divisibility = bool((h_coeff % p == 0).all() and (e_coeff % p == 0).all())
    if not divisibility:
        bad = np.nonzero(h_coeff % p)[0]
        details["divisibility_failures"] = [tuple(chars[i]) for i in bad[:5]]

    proj = [projective_label(lab, p) for lab in labels.all_labels]
    zero_labels = proj.count(None)
    distinct = len(set(proj) - {None})
    injectivity = zero_labels == 0 and distinct == len(proj)
    if not injectivity:
        details["zero_labels"] = zero_labels
        details["duplicate_projective_classes"] = len(proj) - zero_labels - distinct

    spanning = _span_rank(labels.all_labels, p) == r

    snc = all(mu >= 3 for mu in table.mu)
    label_pairs_ok = True
    crossings: list[tuple] = []
    sing = set(table.points)
    from .projective import meet

    lines = table.arrangement.lines
    for i in range(n):
        for j in range(i + 1, n):
            x = meet(lines[i], lines[j])
            if x not in sing:
                crossings.append((labels.line_labels[i], labels.line_labels[j], i, j))
    for nu in range(m):
        for i in table.lines_through[nu]:
            crossings.append((labels.point_labels[nu], labels.line_labels[i], ("E", nu), i))
    for a, b, ia, ib in crossings:
        if not _independent_pair(a, b, p):
            label_pairs_ok = False
            details.setdefault("dependent_label_pairs", []).append((ia, ib))
    smoothness = snc and label_pairs_ok

    return ValidationReport(
        divisibility=divisibility,
        injectivity=injectivity,
        spanning=spanning,
        smoothness=smoothness,
        distinct_projective_labels=distinct,
        projective_space_size=(p**r - 1) // (p - 1),
        details=details,
    )


def _span_rank(labels, p: int) -> int:
    rows = [list(lab) for lab in labels]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], p - 2, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _independent_pair(a: Vector, b: Vector, p: int) -> bool:
    pa, pb = projective_label(a, p), projective_label(b, p)
    return pa is not None and pb is not None and pa != pb


def chi_class(labels: LabelMap, table: IncidenceTable, chi: Vector) -> DivisorClass:
    """Divisor class attached to a character.

    The coefficient of H is the p-th of the summed line pairings (an
    integer precisely because of divisibility); each exceptional
    coefficient is minus the floor of the p-th of the pairings over the
    incident lines, hence never positive.
    """
    p = labels.p
    line_pairings = [pairing_lift(chi, lab, p) for lab in labels.line_labels]
    total = sum(line_pairings)
    if total % p:
        raise ArithmeticError(
            f"divisibility violated for chi={chi}: line pairing sum {total}"
        )
    e = tuple(
        -(sum(line_pairings[i] for i in through) // p)
        for through in table.lines_through
    )
    return DivisorClass(total // p, e)


# ---------------------------------------------------------------------------
# seeded random search


@dataclass(frozen=True)
class SearchResult:
    labels: LabelMap
    attempts: int
    accepted: bool


def _draw_distinct_projective(rng: np.random.Generator, count: int, p: int, r: int):
    """Draw nonzero labels representing pairwise distinct projective points."""
    out: list[Vector] = []
    seen: set[Vector] = set()
    while len(out) < count:
        lab = tuple(int(x) for x in rng.integers(0, p, size=r))
        key = projective_label(lab, p)
        if key is None or key in seen:
            continue
        seen.add(key)
        out.append(lab)
    return out


def random_label_search(
    table: IncidenceTable, p: int, r: int, seed: int, max_attempts: int = 1_000_000
) -> SearchResult:
    """Draw line labels until the completed map passes validation.

    Injectivity of the completed labels is the expensive filter and is
    checked first; the full validation runs only on candidates that
    survive it.  Deterministic for a given seed; the attempt count is
    reported so acceptance rates can be compared with the birthday
    estimate.
    """
    rng = np.random.default_rng(seed)
    n = len(table.arrangement.lines)
    for attempt in range(1, max_attempts + 1):
        partial = _draw_distinct_projective(rng, n - 1, p, r)
        labels = complete_labels(partial, table, p, r)
        proj = [projective_label(lab, p) for lab in labels.all_labels]
        if None in proj or len(set(proj)) != len(proj):
            continue
        if validate_labels(labels, table).all_ok:
            return SearchResult(labels, attempt, True)
    raise RuntimeError(f"no valid label map found in {max_attempts} attempts")


def acceptance_estimate(n: int, m: int, p: int, r: int) -> Fraction:
    """Birthday-style success estimate for the random search.

    The n-1 drawn labels are distinct by construction; the n-th and the
    m exceptional labels are modelled as uniform draws that must all
    land on fresh projective classes.
    """
    size = (p**r - 1) // (p - 1)
    prob = Fraction(1)
    for k in range(n - 1, n + m):
        prob *= Fraction(size - k, size)
    return prob


def empirical_acceptance(
    table: IncidenceTable, p: int, r: int, seed: int, attempts: int
) -> tuple[int, int]:
    """Vectorized acceptance counting over many seeded attempts.

    An attempt draws n-1 projectively distinct line labels (in bulk:
    uniform draws filtered for distinctness), completes them, and
    succeeds when all completed labels are nonzero and pairwise distinct
    in P^{r-1}(F_p).  Returns (successes, attempts).
    """
    rng = np.random.default_rng(seed)
    n = len(table.arrangement.lines)
    m = table.num_points
    inc = np.zeros((m, n), dtype=np.int64)
    for nu in range(m):
        inc[nu, list(table.lines_through[nu])] = 1

    # canonical projective keys: scale so the first nonzero entry is 1,
    # then encode base p; zero labels encode as -1
    pow_base = p ** np.arange(r - 1, -1, -1, dtype=np.int64)
    inv_table = np.array([0] + [pow(x, p - 2, p) for x in range(1, p)], dtype=np.int64)

    def keys(block):
        k, width, _ = block.shape
        flat = block.reshape(k * width, r)
        lead = np.argmax(flat != 0, axis=1)
        zero = ~(flat != 0).any(axis=1)
        lead_vals = flat[np.arange(flat.shape[0]), lead]
        scaled = (flat * inv_table[lead_vals][:, None]) % p
        enc = scaled @ pow_base
        enc[zero] = -1
        return enc.reshape(k, width)

    def all_distinct_nonzero(enc):
        enc = np.sort(enc, axis=1)
        return (enc[:, 0] >= 0) & (np.diff(enc, axis=1) != 0).all(axis=1)

    successes = 0
    done = 0
    while done < attempts:
        draws = rng.integers(0, p, size=(50_000, n - 1, r), dtype=np.int64)
        draws = draws[all_distinct_nonzero(keys(draws))]
        draws = draws[: attempts - done]
        if draws.shape[0] == 0:
            continue
        last = (-draws.sum(axis=1)) % p
        lines_all = np.concatenate([draws, last[:, None, :]], axis=1)
        points = (lines_all.transpose(0, 2, 1) @ inc.T).transpose(0, 2, 1) % p
        everything = np.concatenate([lines_all, points], axis=1)
        successes += int(all_distinct_nonzero(keys(everything)).sum())
        done += draws.shape[0]
    return successes, attempts


# ---------------------------------------------------------------------------
# the critical character systems at a triple point


@dataclass(frozen=True)
class AffineSolutionSet:
    """Solutions of a linear system mod p: particular + span of basis."""

    particular: Vector
    basis: tuple[Vector, ...]

    def count(self, p: int) -> int:
        return p ** len(self.basis)

    def enumerate(self, p: int):
        sols = []
        for coeffs in product(range(p), repeat=len(self.basis)):
            v = list(self.particular)
            for c, b in zip(coeffs, self.basis):
                v = [(x + c * y) % p for x, y in zip(v, b)]
            sols.append(tuple(v))
        return sols


def critical_chi_solutions(line_labels, p: int) -> list[AffineSolutionSet | None]:
    """Characters vanishing on two of three labels and hitting p-1 on one.

    For each choice of distinguished label (the one paired to p-1),
    solves the 3xr system over F_p; entry k of the result is the
    solution set with label k distinguished, or None if inconsistent.
    """
    if len(line_labels) != 3:
        raise ValueError("exactly three line labels required")
    if not is_prime(p):
        raise ValueError("p must be prime")
    out = []
    for k in range(3):
        rhs = [0, 0, 0]
        rhs[k] = p - 1
        rows = [list(lab) for lab in line_labels]
        out.append(_solve_mod(rows, rhs, p))
    return out


def _solve_mod(rows, rhs, p: int) -> AffineSolutionSet | None:
    """Gaussian elimination over F_p; returns particular + kernel basis."""
    m = len(rows)
    cols = len(rows[0])
    aug = [[x % p for x in row] + [b % p] for row, b in zip(rows, rhs)]
    pivots = []
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, m) if aug[i][c]), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = pow(aug[rank][c], p - 2, p)
        aug[rank] = [(x * inv) % p for x in aug[rank]]
        for i in range(m):
            if i != rank and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[rank])]
        pivots.append(c)
        rank += 1
    for i in range(rank, m):
        if aug[i][cols]:
            return None
    particular = [0] * cols
    for i, c in enumerate(pivots):
        particular[c] = aug[i][cols]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-aug[i][f]) % p
        basis.append(tuple(v))
    return AffineSolutionSet(tuple(particular), tuple(basis))


__all__ = [
    "AffineSolutionSet",
    "LabelMap",
    "SearchResult",
    "ValidationReport",
    "acceptance_estimate",
    "all_characters",
    "chi_class",
    "complete_labels",
    "critical_chi_solutions",
    "empirical_acceptance",
    "is_prime",
    "pairing_lift",
    "projective_label",
    "random_label_search",
    "validate_labels",
]
