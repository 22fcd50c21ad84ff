"""Strong dichotomy counting: brute force, the closed formula, and the
lemma-level combinatorics connecting them.

A dichotomy splits Z/2kZ into a k-set and its complement; it is *strong*
when some affine involution without fixed points (a quasipolarity) swaps the
halves and no nonidentity affine map preserves the k-set.  ``s(2k)`` counts
affine classes of strong dichotomies.  The closed formula, valid for odd k,
is

    s(2k) = -(1/|G|) * sum over subgroups H not inside K0 of mu(1,H) 2^(#orbits of H)

summed over conjugacy classes weighted by class length.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .affine import AffineMap, affine_group, is_quasipolarity, k0_subgroup, quasipolarities
from .cache import AffineClassData, load_or_build
from .errors import BudgetExceeded, InternalCheckError
from .inventory import eval_at_minus_one, qrig_via_moebius, qrig_via_tom
from .lattice import SubgroupLattice, _mask_from_indices, bottom_moebius_full
from .perms import (
    DEFAULT_MAX_ORDER,
    PermutationGroup,
    is_subgroup,
    join,
    orbit_sizes,
)
from .utils import parallel_map

#: Largest k the 2^k-per-quasipolarity scan will attempt by default.
DEFAULT_BF_CUTOFF = 19

#: Cross-checking quasipolarity uniqueness needs all rigid sets in memory;
#: past this k the check is skipped.
_UNIQUENESS_CHECK_MAX_K = 13


@dataclass(frozen=True)
class Dichotomy:
    """A k-subset of Z/2kZ, optionally tagged with a quasipolarity that
    swaps it with its complement."""

    n: int
    members: frozenset[int]
    quasipolarity: AffineMap | None = None

    def __post_init__(self) -> None:
        members = frozenset(int(x) for x in self.members)
        object.__setattr__(self, "members", members)
        if self.n < 2 or self.n % 2:
            raise ValueError(f"a dichotomy needs an even modulus, got {self.n}")
        if not members <= set(range(self.n)):
            raise ValueError("members must be residues mod n")
        if len(members) != self.n // 2:
            raise ValueError(
                f"a dichotomy of Z/{self.n}Z needs {self.n // 2} members, "
                f"got {len(members)}"
            )
        q = self.quasipolarity
        if q is not None:
            if q.modulus != self.n:
                raise ValueError("quasipolarity modulus mismatch")
            if frozenset(q(x) for x in members) != self.complement:
                raise ValueError("attached map does not swap the dichotomy halves")

    @property
    def complement(self) -> frozenset[int]:
        return frozenset(range(self.n)) - self.members

    def as_mask(self) -> int:
        return sum(1 << x for x in self.members)


def mq_elements(q: AffineMap) -> Iterator[Dichotomy]:
    """All 2^k dichotomies with quasipolarity ``q``, in index order.

    The transpositions of ``q`` are listed by least endpoint; bit i of the
    running index picks the larger endpoint of transposition i.
    """
    pairs = _transpositions(q)
    k = len(pairs)
    n = q.modulus
    for t in range(1 << k):
        members = frozenset(
            b if (t >> i) & 1 else a for i, (a, b) in enumerate(pairs)
        )
        yield Dichotomy(n, members, quasipolarity=q)


def _transpositions(q: AffineMap) -> list[tuple[int, int]]:
    if not is_quasipolarity(q):
        raise ValueError(f"{q} is not a quasipolarity")
    cycles = q.as_permutation().cycles()
    pairs = [(min(c), max(c)) for c in cycles]
    if any(len(c) != 2 for c in cycles) or 2 * len(pairs) != q.modulus:
        raise AssertionError("a quasipolarity must consist of k transpositions")
    return sorted(pairs)


def _mq_matrix(q: AffineMap) -> np.ndarray:
    """Boolean membership matrix of all 2^k dichotomies in M_q (rows) over
    the n points (columns)."""
    pairs = _transpositions(q)
    k = len(pairs)
    num = 1 << k
    bits = ((np.arange(num, dtype=np.uint64)[:, None] >> np.arange(k, dtype=np.uint64)) & 1).astype(bool)
    rows = np.zeros((num, q.modulus), dtype=bool)
    for i, (a, b) in enumerate(pairs):
        rows[:, a] = ~bits[:, i]
        rows[:, b] = bits[:, i]
    return rows


def is_rigid(d: Dichotomy, group: PermutationGroup) -> bool:
    """True iff only the identity of ``group`` preserves the member set."""
    if group.degree != d.n:
        raise ValueError("degree mismatch between dichotomy and group")
    members = d.members
    for g in group.elements:
        if g.is_identity():
            continue
        if g.image_of_set(members) == members:
            return False
    return True


def has_only_even_orbits(subgroup: PermutationGroup) -> bool:
    """True iff every orbit of the subgroup on the points has even size."""
    return all(s % 2 == 0 for s in orbit_sizes(subgroup))


def strong_count_bruteforce(
    k: int,
    *,
    allow_even: bool = False,
    cutoff: int = DEFAULT_BF_CUTOFF,
    jobs: int = 1,
    max_order: int = DEFAULT_MAX_ORDER,
) -> int:
    """s(2k) by direct search: for each quasipolarity q, scan all 2^k members
    of M_q for rigidity, then divide the raw hit count by |G|.

    For even k this is exploration outside the proven theorem; it runs only
    with ``allow_even=True``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k % 2 == 0 and not allow_even:
        raise ValueError(
            f"k={k} is even; the strong-dichotomy theorem covers odd k only "
            "(pass allow_even=True to explore anyway)"
        )
    if k > cutoff:
        raise BudgetExceeded(f"brute force scans 2^k dichotomies; k={k} > cutoff {cutoff}")
    n = 2 * k
    group = affine_group(n, max_order)
    order = group.order
    inv_images = np.array([g.inverse().images for g in group.elements], dtype=np.int64)
    qs = quasipolarities(n)
    check_unique = k <= _UNIQUENESS_CHECK_MAX_K
    pow2 = 1 << np.arange(n, dtype=np.uint64)

    def survivors(q: AffineMap) -> tuple[int, set[int]]:
        rows = _mq_matrix(q)
        alive = np.ones(rows.shape[0], dtype=bool)
        for gi in range(1, order):
            alive &= (rows[:, inv_images[gi]] != rows).any(axis=1)
        count = int(alive.sum())
        masks: set[int] = set()
        if check_unique and count:
            vals = (rows[alive] * pow2).sum(axis=1, dtype=np.uint64)
            masks = {int(v) for v in vals}
        return count, masks

    results = parallel_map(survivors, qs, jobs)
    total = sum(c for c, _ in results)
    if check_unique:
        all_masks: set[int] = set()
        for c, masks in results:
            if len(masks) != c or all_masks & masks:
                raise InternalCheckError(
                    "a rigid dichotomy was reached from two distinct quasipolarities"
                )
            all_masks |= masks
    if total % order:
        raise InternalCheckError(
            f"raw rigid count {total} is not divisible by |G| = {order}"
        )
    return total // order


def strong_count_formula(
    k: int,
    *,
    data: AffineClassData | None = None,
    cache_dir=None,
    max_order: int = DEFAULT_MAX_ORDER,
    use_cache: bool = True,
) -> int:
    """s(2k) by the closed formula over subgroup classes outside K0 (odd k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k % 2 == 0:
        raise ValueError(f"k={k} is even; the closed-form count requires odd k")
    n = 2 * k
    if data is None:
        data = load_or_build(n, cache_dir=cache_dir, max_order=max_order, use_cache=use_cache)
    if data.n != n:
        raise ValueError(f"class data is for n={data.n}, expected {n}")
    total = 0
    for rec in data.classes:
        if rec.in_k0 is None:
            raise ValueError("class data lacks K0 membership; rebuild the cache")
        if rec.in_k0:
            continue
        total += rec.length * rec.mu * (1 << len(rec.orbit_sizes))
    if (-total) % data.group_order:
        raise InternalCheckError(
            f"formula total {-total} is not divisible by |G| = {data.group_order}"
        )
    return -total // data.group_order


def mq_h_count(
    q: AffineMap,
    subgroup: PermutationGroup,
    *,
    method: str = "direct",
    max_order: int = DEFAULT_MAX_ORDER,
) -> int:
    """|{D in M_q : D is fixed setwise by the subgroup}|.

    ``method="direct"`` filters all 2^k members of M_q.  ``method="closed"``
    uses the odd-k closed form: 0 unless the subgroup lies in K0, else
    2^(#orbits of <subgroup, q>).
    """
    n = q.modulus
    if subgroup.degree != n:
        raise ValueError("degree mismatch between quasipolarity and subgroup")
    if method == "direct":
        rows = _mq_matrix(q)
        ig_inv = [g.inverse().images for g in subgroup.elements if not g.is_identity()]
        invariant = np.ones(rows.shape[0], dtype=bool)
        for inv in ig_inv:
            invariant &= (rows[:, list(inv)] == rows).all(axis=1)
        return int(invariant.sum())
    if method == "closed":
        if (n // 2) % 2 == 0:
            raise ValueError("the closed form for |M_q^H| is proven for odd k only")
        k0 = k0_subgroup(n, max_order)
        if not is_subgroup(k0, subgroup):
            return 0
        lgrp = join(subgroup, [q.as_permutation()], max_order)
        return 1 << len(orbit_sizes(lgrp))
    raise ValueError(f"unknown method {method!r}")


def c_of_l(
    lgroup: PermutationGroup,
    lattice: SubgroupLattice,
    *,
    mu_full: list[int] | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
) -> int:
    """C(L) = sum over quasipolarities q and subgroups H <= K0 with
    <H, q> = L of mu(1, H); defined for L not contained in K0."""
    group = lattice.group
    n = group.degree
    k0 = k0_subgroup(n, max_order)
    if not is_subgroup(group, lgroup):
        raise ValueError("L is not a subgroup of the lattice's group")
    if is_subgroup(k0, lgroup):
        raise ValueError("C(L) is defined for subgroups not contained in K0")
    ig = lattice.indexed
    k0_mask = _mask_from_indices(ig.indices_of(k0.elements), ig.order)
    l_mask = _mask_from_indices(ig.indices_of(lgroup.elements), ig.order)
    if mu_full is None:
        mu_full = bottom_moebius_full(lattice)
    q_idx = [ig.index_of(q.as_permutation()) for q in quasipolarities(n)]
    total = 0
    for sid, mask in enumerate(lattice.masks):
        if mask & k0_mask != mask or mu_full[sid] == 0:
            continue
        helems = lattice.indices_of(sid)
        for qi in q_idx:
            joined = ig.close(np.append(helems, qi))
            if _mask_from_indices(joined, ig.order) == l_mask:
                total += mu_full[sid]
    return total


@dataclass
class StrongCountReport:
    """Outcome of a theorem verification or a strong-count run."""

    k: int
    s_value: int
    method: str
    group_order: int
    qrig_at_minus_one: int | None = None
    theorem_holds: bool | None = None
    s_bruteforce: int | None = None
    num_classes: int | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def to_json_dict(self, *, include_timing: bool = True) -> dict:
        out: dict = {
            "k": str(self.k),
            "n": str(2 * self.k),
            "s_value": str(self.s_value),
            "method": self.method,
            "group_order": str(self.group_order),
        }
        if self.qrig_at_minus_one is not None:
            out["qrig_at_minus_one"] = str(self.qrig_at_minus_one)
        if self.theorem_holds is not None:
            out["theorem_holds"] = self.theorem_holds
        if self.s_bruteforce is not None:
            out["s_bruteforce"] = str(self.s_bruteforce)
        if self.num_classes is not None:
            out["num_classes"] = str(self.num_classes)
        if include_timing:
            out["timing_seconds"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out


def verify_theorem(
    k: int,
    *,
    data: AffineClassData | None = None,
    cache_dir=None,
    max_order: int = DEFAULT_MAX_ORDER,
    use_cache: bool = True,
    bf_cutoff: int = DEFAULT_BF_CUTOFF,
    run_bruteforce: bool | None = None,
    jobs: int = 1,
) -> StrongCountReport:
    """Check Q_rig(-1) = -s(2k) for odd k, with Q_rig from both the Möbius
    and the marks routes, and the brute-force count when within budget."""
    if k < 1 or k % 2 == 0:
        raise ValueError(f"the theorem is stated for odd k; got k={k}")
    n = 2 * k
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    if data is None:
        data = load_or_build(n, cache_dir=cache_dir, max_order=max_order, use_cache=use_cache)
    timings["class_data"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    s_formula = strong_count_formula(k, data=data)
    timings["formula"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    q_moebius = qrig_via_moebius(n, data=data, method="classes")
    q_tom = qrig_via_tom(n, data=data)
    timings["inventory"] = time.perf_counter() - t0
    if q_moebius != q_tom:
        raise InternalCheckError(
            "the Möbius and marks routes disagree on the inventory polynomial"
        )
    q_at = eval_at_minus_one(q_moebius)

    s_bf: int | None = None
    if run_bruteforce is None:
        run_bruteforce = k <= bf_cutoff
    if run_bruteforce:
        t0 = time.perf_counter()
        s_bf = strong_count_bruteforce(k, cutoff=bf_cutoff, jobs=jobs, max_order=max_order)
        timings["bruteforce"] = time.perf_counter() - t0

    holds = q_at == -s_formula and (s_bf is None or s_bf == s_formula)
    return StrongCountReport(
        k=k,
        s_value=s_formula,
        method="formula",
        group_order=data.group_order,
        qrig_at_minus_one=q_at,
        theorem_holds=holds,
        s_bruteforce=s_bf,
        num_classes=data.num_classes,
        timings=timings,
    )
