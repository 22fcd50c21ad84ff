"""Orbit index monomials and the rigid pattern-inventory polynomial.

``qrig_*`` computes, by three independent routes, the polynomial whose x^m
coefficient is the number of affine classes of rigid m-subsets of Z/nZ:

* ``qrig_via_moebius``: Möbius expansion over the subgroup lattice,
  (1/|G|) sum_H mu(1,H) * prod_{orbits O of H} (1 + x^|O|).
* ``qrig_via_tom``: orbit-type counts through the inverse of the table of
  marks; the free-orbit coordinate of the fixed-subset vector.
* ``qrig_bruteforce``: direct scan of all 2^n subsets, grouping rigid ones
  into orbits.

All three agree coefficient-for-coefficient; the test suite pins this.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .affine import affine_group
from .cache import AffineClassData, load_or_build
from .errors import BudgetExceeded, InternalCheckError
from .lattice import (
    SubgroupLattice,
    TableOfMarks,
    bottom_moebius_full,
    enumerate_subgroups,
    invert_lower_triangular,
)
from .perms import DEFAULT_MAX_ORDER, PermutationGroup, orbit_sizes
from .utils import chunk_ranges, parallel_map

#: Largest n whose 2^n subset scan the brute-force oracle will attempt.
DEFAULT_BRUTEFORCE_CUTOFF = 14

#: Below this modulus the Möbius route sums over every individual subgroup
#: (via the generic poset machinery); above it, over conjugacy classes.
FULL_LATTICE_MAX_N = 26


@dataclass(frozen=True)
class IntegerPolynomial:
    """Univariate polynomial with exact integer coefficients, low degree first."""

    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(int(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs or (0,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, d: int) -> int:
        return self.coefficients[d] if 0 <= d < len(self.coefficients) else 0

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def is_palindromic(self, n: int | None = None) -> bool:
        """True iff coefficient(d) == coefficient(n - d) for all d."""
        top = self.degree if n is None else n
        return all(
            self.coefficient(d) == self.coefficient(top - d) for d in range(top + 1)
        )

    def __add__(self, other: IntegerPolynomial) -> IntegerPolynomial:
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        return IntegerPolynomial(
            tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))
        )

    def __mul__(self, other: IntegerPolynomial) -> IntegerPolynomial:
        a, b = self.coefficients, other.coefficients
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntegerPolynomial(tuple(out))

    def scaled(self, factor: int) -> IntegerPolynomial:
        return IntegerPolynomial(tuple(factor * c for c in self.coefficients))

    @staticmethod
    def one_plus_power(r: int) -> IntegerPolynomial:
        return IntegerPolynomial((1,) + (0,) * (r - 1) + (1,))


def eval_at_minus_one(p: IntegerPolynomial) -> int:
    """The exact alternating sum of coefficients."""
    return sum(c if d % 2 == 0 else -c for d, c in enumerate(p.coefficients))


@dataclass(frozen=True)
class OrbitIndexMonomial:
    """Per orbit size d = 1..n, how many orbits of that size a subgroup has."""

    exponents: tuple[int, ...]  # index d; entry 0 is unused and zero

    def __post_init__(self) -> None:
        exps = tuple(int(e) for e in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if not exps or exps[0] != 0:
            raise ValueError("exponents[0] must exist and be zero")
        if any(e < 0 for e in exps):
            raise ValueError("orbit counts cannot be negative")

    @property
    def n(self) -> int:
        return sum(d * e for d, e in enumerate(self.exponents))

    @staticmethod
    def from_orbit_sizes(sizes: Iterable[int], n: int) -> OrbitIndexMonomial:
        exps = [0] * (n + 1)
        for s in sizes:
            exps[s] += 1
        return OrbitIndexMonomial(tuple(exps))

    def substitute_one_plus_powers(self) -> IntegerPolynomial:
        """The image under z_r -> 1 + x^r: the invariant-subset polynomial."""
        out = IntegerPolynomial((1,))
        for d, e in enumerate(self.exponents):
            for _ in range(e):
                out = out * IntegerPolynomial.one_plus_power(d)
        return out


def orbit_index_monomial(subgroup: PermutationGroup) -> OrbitIndexMonomial:
    return OrbitIndexMonomial.from_orbit_sizes(orbit_sizes(subgroup), subgroup.degree)


def poly_from_orbit_sizes(sizes: Iterable[int]) -> IntegerPolynomial:
    """prod over orbit sizes s of (1 + x^s): the generating function of the
    subsets invariant under a subgroup with those orbits."""
    out = IntegerPolynomial((1,))
    for s in sizes:
        out = out * IntegerPolynomial.one_plus_power(s)
    return out


def invariant_subset_poly(subgroup: PermutationGroup) -> IntegerPolynomial:
    """sum over subsets A fixed setwise by the subgroup of x^|A|."""
    return poly_from_orbit_sizes(orbit_sizes(subgroup))


def _require_even(n: int) -> None:
    if n < 2 or n % 2:
        raise ValueError(f"the rigid inventory is defined over Z/2kZ; got n={n}")


def _divide_exactly(raw: Sequence[int], divisor: int, what: str) -> IntegerPolynomial:
    out = []
    for d, c in enumerate(raw):
        q, r = divmod(c, divisor)
        if r:
            raise InternalCheckError(
                f"{what}: coefficient of x^{d} is {c}, not divisible by {divisor}"
            )
        out.append(q)
    return IntegerPolynomial(tuple(out))


def qrig_via_moebius(
    n: int,
    *,
    data: AffineClassData | None = None,
    lattice: SubgroupLattice | None = None,
    method: str = "auto",
    cache_dir=None,
    max_order: int = DEFAULT_MAX_ORDER,
    use_cache: bool = True,
) -> IntegerPolynomial:
    """Q_rig by Möbius expansion: (1/|G|) sum_H mu(1,H) sum_{A: HA=A} x^|A|.

    ``method`` selects the summation granularity: "full" runs over every
    individual subgroup (exercises the generic poset Möbius machinery),
    "classes" runs over conjugacy classes weighted by class length, and
    "auto" picks "full" for small n and "classes" otherwise.  Both give the
    same exact polynomial.
    """
    _require_even(n)
    if method == "auto":
        method = "full" if lattice is not None or (data is None and n <= FULL_LATTICE_MAX_N) else "classes"
    raw = [0] * (n + 1)
    if method == "full":
        if lattice is None:
            lattice = enumerate_subgroups(affine_group(n, max_order), max_order)
        mu = bottom_moebius_full(lattice)
        ig = lattice.indexed
        group_order = lattice.group.order
        for sid in range(lattice.subgroup_count):
            if mu[sid] == 0:
                continue
            poly = poly_from_orbit_sizes(ig.orbit_sizes_of(lattice.indices_of(sid)))
            for d, c in enumerate(poly.coefficients):
                raw[d] += mu[sid] * c
    elif method == "classes":
        if data is None:
            data = load_or_build(n, cache_dir=cache_dir, max_order=max_order, use_cache=use_cache)
        group_order = data.group_order
        for rec in data.classes:
            if rec.mu == 0:
                continue
            poly = poly_from_orbit_sizes(rec.orbit_sizes)
            weight = rec.length * rec.mu
            for d, c in enumerate(poly.coefficients):
                raw[d] += weight * c
    else:
        raise ValueError(f"unknown method {method!r}")
    return _divide_exactly(raw, group_order, "Möbius inventory sum")


def qrig_via_tom(
    n: int,
    *,
    data: AffineClassData | None = None,
    tom: TableOfMarks | None = None,
    cache_dir=None,
    max_order: int = DEFAULT_MAX_ORDER,
    use_cache: bool = True,
) -> IntegerPolynomial:
    """Q_rig through the inverse of the table of marks.

    The fixed-subset vector f (per class j, the polynomial counting subsets
    fixed by the representative) satisfies f = a * M with a the orbit-type
    counts and M the marks matrix, so the free-orbit coordinate is
    a_triv = sum_j f_j * (M^-1)[j][trivial].  In the ascending convention the
    trivial class is column 0; the n=2 case forces this orientation and the
    tests pin it.
    """
    _require_even(n)
    if tom is not None:
        marks: Sequence[Sequence[int]] = tom.marks
        orbit_size_lists = [tom.classes.orbit_sizes(ci) for ci in range(len(tom))]
    else:
        if data is None:
            data = load_or_build(n, cache_dir=cache_dir, max_order=max_order, use_cache=use_cache)
        marks = data.marks
        orbit_size_lists = [rec.orbit_sizes for rec in data.classes]
    inverse = invert_lower_triangular(marks)
    acc = [Fraction(0)] * (n + 1)
    for j, sizes in enumerate(orbit_size_lists):
        coeff = inverse[j][0]
        if coeff == 0:
            continue
        poly = poly_from_orbit_sizes(sizes)
        for d, c in enumerate(poly.coefficients):
            acc[d] += coeff * c
    out = []
    for d, value in enumerate(acc):
        if value.denominator != 1:
            raise InternalCheckError(
                f"tom-route inventory: coefficient of x^{d} is non-integral "
                f"({value}); marks orientation is inconsistent"
            )
        out.append(int(value))
    return IntegerPolynomial(tuple(out))


def qrig_bruteforce(
    n: int,
    *,
    cutoff: int = DEFAULT_BRUTEFORCE_CUTOFF,
    jobs: int = 1,
    max_order: int = DEFAULT_MAX_ORDER,
) -> IntegerPolynomial:
    """Q_rig by scanning all 2^n subsets and grouping rigid ones into orbits.

    Every rigid orbit must contain exactly |G| distinct subsets; that is
    checked, not assumed.
    """
    if n < 1:
        raise ValueError("modulus must be >= 1")
    if n > cutoff:
        raise BudgetExceeded(f"2^{n} subsets exceed the brute-force cutoff n <= {cutoff}")
    group = affine_group(n, max_order)
    order = group.order
    num = 1 << n
    inv_images = np.array(
        [g.inverse().images for g in group.elements], dtype=np.int64
    )
    pow2 = 1 << np.arange(n, dtype=np.uint64)

    def scan(rng: tuple[int, int]) -> tuple[int, int, np.ndarray]:
        lo, hi = rng
        vals = np.arange(lo, hi, dtype=np.uint64)
        block = ((vals[:, None] >> np.arange(n, dtype=np.uint64)) & 1).astype(bool)
        alive = np.ones(hi - lo, dtype=bool)
        repmin = vals.copy()
        for gi in range(1, order):
            permuted = block[:, inv_images[gi]]
            alive &= (permuted != block).any(axis=1)
            gv = (permuted * pow2).sum(axis=1, dtype=np.uint64)
            np.minimum(repmin, gv, out=repmin)
        rep_rows = alive & (repmin == vals)
        sizes = block[rep_rows].sum(axis=1)
        counts = np.bincount(sizes, minlength=n + 1)
        return int(alive.sum()), int(rep_rows.sum()), counts

    results = parallel_map(scan, chunk_ranges(num, jobs), jobs)
    rigid_total = sum(r[0] for r in results)
    rep_total = sum(r[1] for r in results)
    coeffs = np.sum([r[2] for r in results], axis=0)
    if rep_total * order != rigid_total:
        raise InternalCheckError(
            f"rigid orbits are not free: {rigid_total} rigid subsets in "
            f"{rep_total} orbits under a group of order {order}"
        )
    return IntegerPolynomial(tuple(int(c) for c in coeffs))
