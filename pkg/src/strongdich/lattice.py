"""Subgroup lattices of small groups, conjugacy classes, and tables of marks.

Everything here is exact.  The pipeline is:

    enumerate_subgroups -> conjugacy_classes -> table_of_marks -> invert_marks
                                            \\-> bottom_moebius

Indexing convention: classes (and subgroups) are stored **ascending** by
order, trivial subgroup first, ties broken lexicographically on the sorted
element list of the canonical class representative.  The marks matrix is
lower triangular in this convention; ``TableOfMarks.descending_view`` exposes
the reversed (upper-triangular) layout used when reporting.

Subgroups are represented internally as sorted index arrays into the parent
group's element list, plus a bitmask over those indices; the bitmask is the
canonical deduplication key.  ``PermutationGroup`` views are materialized
lazily because large lattices never need them.
"""

from __future__ import annotations

from bisect import bisect_left
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import OrderCapExceeded
from .perms import DEFAULT_MAX_ORDER, Permutation, PermutationGroup
from .posets import FinitePoset, moebius


def _mask_from_bools(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _mask_from_indices(indices: np.ndarray, order: int) -> int:
    bits = np.zeros(order, dtype=bool)
    bits[indices] = True
    return _mask_from_bools(bits)


def _indices_from_mask(mask: int, order: int) -> np.ndarray:
    nbytes = (order + 7) // 8
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    bits = np.unpackbits(raw, bitorder="little", count=order)
    return np.flatnonzero(bits).astype(np.int32)


class _IndexedGroup:
    """Dense-index view of a materialized group: a Cayley table over 0..N-1.

    Index i corresponds to ``group.elements[i]``; index 0 is the identity
    (the identity permutation is lexicographically least).  ``table[a, b]``
    is the index of ``elements[a] ∘ elements[b]`` (b acts first).
    """

    def __init__(self, group: PermutationGroup):
        self.group = group
        self.degree = group.degree
        order = group.order
        self.order = order
        images = np.array([e.images for e in group.elements], dtype=np.int32)
        self.images = images
        if not np.array_equal(images[0], np.arange(self.degree)):
            raise AssertionError("identity permutation is not at index 0")
        key_of = {images[j].tobytes(): j for j in range(order)}
        self._key_of = key_of
        table = np.empty((order, order), dtype=np.int32)
        for i in range(order):
            composed = np.ascontiguousarray(images[i][images])
            table[i] = [key_of[composed[j].tobytes()] for j in range(order)]
        self.table = table
        inv = np.empty(order, dtype=np.int32)
        rows, cols = np.nonzero(table == 0)
        inv[rows] = cols
        self.inv = inv
        self._divisors = sorted(d for d in range(1, order + 1) if order % d == 0)

    def _min_divisor_geq(self, size: int) -> int:
        return self._divisors[bisect_left(self._divisors, size)]

    def index_of(self, perm: Permutation) -> int:
        key = np.asarray(perm.images, dtype=np.int32).tobytes()
        try:
            return self._key_of[key]
        except KeyError:
            raise ValueError(f"{perm!r} is not an element of the indexed group") from None

    def indices_of(self, perms: Iterable[Permutation]) -> np.ndarray:
        return np.array(sorted(self.index_of(p) for p in perms), dtype=np.int32)

    def close(self, seed: Iterable[int]) -> np.ndarray:
        """Sorted indices of the subgroup generated by ``seed``."""
        order = self.order
        member = np.zeros(order, dtype=bool)
        member[0] = True
        seed_arr = np.asarray(list(seed), dtype=np.int64)
        member[seed_arr] = True
        frontier = np.flatnonzero(member)
        table = self.table
        while frontier.size:
            current = np.flatnonzero(member)
            # The closure's order divides |G| and is >= the current size; if
            # the least such divisor is |G| itself the result is forced.
            if self._min_divisor_geq(current.size) == order:
                return np.arange(order, dtype=np.int32)
            prods = np.concatenate(
                [
                    table[np.ix_(current, frontier)].ravel(),
                    table[np.ix_(frontier, current)].ravel(),
                ]
            )
            cand = np.unique(prods)
            new = cand[~member[cand]]
            if new.size == 0:
                break
            member[new] = True
            frontier = new
        return np.flatnonzero(member).astype(np.int32)

    def cyclic(self, g: int) -> np.ndarray:
        out = [0]
        x = g
        while x != 0:
            out.append(x)
            x = int(self.table[x, g])
        return np.unique(np.array(out, dtype=np.int32))

    def conjugate(self, elems: np.ndarray, g: int) -> np.ndarray:
        """Sorted indices of g H g^-1."""
        return np.sort(self.table[g, self.table[elems, self.inv[g]]])

    def orbit_sizes_of(self, elems: np.ndarray) -> tuple[int, ...]:
        """Orbit sizes of the subgroup on the points, ordered by least point."""
        imgs = self.images[elems]
        seen = np.zeros(self.degree, dtype=bool)
        sizes = []
        for p in range(self.degree):
            if seen[p]:
                continue
            orb = np.unique(imgs[:, p])
            seen[orb] = True
            sizes.append(int(orb.size))
        return tuple(sizes)

    def small_generating_set(self, elems: np.ndarray) -> list[int]:
        """A short generating list for the subgroup, grown greedily."""
        member = np.zeros(self.order, dtype=bool)
        member[elems] = True
        gens: list[int] = []
        current = np.array([0], dtype=np.int32)
        have = np.zeros(self.order, dtype=bool)
        have[0] = True
        while current.size < elems.size:
            missing = member & ~have
            g = int(np.flatnonzero(missing)[0])
            gens.append(g)
            current = self.close(np.append(current, g))
            have[:] = False
            have[current] = True
        return gens

    def coset_table(self, sub_elems: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Left cosets of the subgroup: (coset id per element, coset reps)."""
        cid = np.full(self.order, -1, dtype=np.int32)
        reps = []
        for g in range(self.order):
            if cid[g] < 0:
                cid[self.table[g, sub_elems]] = len(reps)
                reps.append(g)
        return cid, np.array(reps, dtype=np.int32)

    def materialize(self, elems: np.ndarray) -> PermutationGroup:
        perms = [Permutation(tuple(int(x) for x in self.images[i])) for i in elems]
        gens = [perms[list(elems).index(g)] for g in self.small_generating_set(elems)] or [
            perms[0]
        ]
        return PermutationGroup(perms, generators=gens)


class SubgroupLattice:
    """All subgroups of a small group, with containment and class data.

    Subgroup ids run 0..m-1 ascending by (order, element list); id 0 is the
    trivial subgroup and id m-1 the full group.
    """

    def __init__(
        self,
        group: PermutationGroup,
        indexed: _IndexedGroup,
        masks: Sequence[int],
        class_member_ids: Sequence[Sequence[int]],
    ):
        self.group = group
        self.indexed = indexed
        self.masks = tuple(masks)
        self.class_member_ids = tuple(tuple(c) for c in class_member_ids)
        self._id_of_mask = {m: i for i, m in enumerate(self.masks)}
        self._indices_cache: dict[int, np.ndarray] = {}
        self._groups_cache: dict[int, PermutationGroup] = {}
        self._containment: np.ndarray | None = None
        if self.order_of(0) != 1:
            raise AssertionError("subgroup 0 is not the trivial subgroup")
        if self.order_of(len(self.masks) - 1) != group.order:
            raise AssertionError("last subgroup is not the full group")

    @property
    def subgroup_count(self) -> int:
        return len(self.masks)

    @property
    def trivial_id(self) -> int:
        return 0

    @property
    def full_id(self) -> int:
        return len(self.masks) - 1

    def order_of(self, sid: int) -> int:
        return self.masks[sid].bit_count()

    def indices_of(self, sid: int) -> np.ndarray:
        arr = self._indices_cache.get(sid)
        if arr is None:
            arr = _indices_from_mask(self.masks[sid], self.indexed.order)
            self._indices_cache[sid] = arr
        return arr

    def id_of_mask(self, mask: int) -> int:
        return self._id_of_mask[mask]

    def id_of_group(self, subgroup: PermutationGroup) -> int:
        idx = self.indexed.indices_of(subgroup.elements)
        return self.id_of_mask(_mask_from_indices(idx, self.indexed.order))

    def subgroup(self, sid: int) -> PermutationGroup:
        grp = self._groups_cache.get(sid)
        if grp is None:
            grp = self.indexed.materialize(self.indices_of(sid))
            self._groups_cache[sid] = grp
        return grp

    @property
    def subgroups(self) -> tuple[PermutationGroup, ...]:
        return tuple(self.subgroup(i) for i in range(self.subgroup_count))

    @property
    def containment(self) -> np.ndarray:
        """Boolean table: containment[i, j] iff subgroup i <= subgroup j."""
        if self._containment is None:
            m = self.subgroup_count
            table = np.zeros((m, m), dtype=bool)
            for i, mi in enumerate(self.masks):
                for j, mj in enumerate(self.masks):
                    table[i, j] = mi & mj == mi
            table.setflags(write=False)
            self._containment = table
        return self._containment

    def as_poset(self) -> FinitePoset:
        """The lattice as a poset over subgroup ids."""
        return FinitePoset(tuple(range(self.subgroup_count)), self.containment.copy())

    def class_of(self, sid: int) -> int:
        for ci, members in enumerate(self.class_member_ids):
            if sid in members:
                return ci
        raise KeyError(sid)

    def __repr__(self) -> str:
        return (
            f"<SubgroupLattice of order-{self.group.order} group: "
            f"{self.subgroup_count} subgroups, {len(self.class_member_ids)} classes>"
        )


def enumerate_subgroups(
    group: PermutationGroup, max_order: int = DEFAULT_MAX_ORDER
) -> SubgroupLattice:
    """Enumerate every subgroup of ``group`` exactly once.

    Strategy: seed with all cyclic subgroups, then repeatedly join class
    representatives with cyclic subgroups until no new subgroup appears.
    Whenever a new subgroup is found its whole conjugacy class is added, so
    joins only ever start from class representatives.  This finds everything:
    any non-cyclic K has a maximal subgroup M with K = <M, g>, and the class
    of M is found by induction on order.
    """
    if group.order > max_order:
        raise OrderCapExceeded(
            f"group order {group.order} exceeds the subgroup-enumeration cap {max_order}"
        )
    ig = _IndexedGroup(group)
    order = ig.order

    cyclics: dict[int, np.ndarray] = {}
    for g in range(order):
        elems = ig.cyclic(g)
        cyclics.setdefault(_mask_from_indices(elems, order), elems)
    cyclic_items = sorted(cyclics.items(), key=lambda kv: (kv[1].size, tuple(kv[1])))

    group_gens = ig.small_generating_set(np.arange(order, dtype=np.int32))

    seen: dict[int, int] = {}
    class_members: list[list[int]] = []
    class_reps: list[np.ndarray] = []

    def add_class(elems: np.ndarray) -> None:
        mask0 = _mask_from_indices(elems, order)
        if mask0 in seen:
            return
        ci = len(class_members)
        seen[mask0] = ci
        members = [mask0]
        best = elems
        best_key = tuple(elems.tolist())
        frontier = [elems]
        while frontier:
            nxt = []
            for el in frontier:
                for g in group_gens:
                    conj = ig.conjugate(el, g)
                    cmask = _mask_from_indices(conj, order)
                    if cmask not in seen:
                        seen[cmask] = ci
                        members.append(cmask)
                        nxt.append(conj)
                        key = tuple(conj.tolist())
                        if key < best_key:
                            best, best_key = conj, key
            frontier = nxt
        class_members.append(members)
        class_reps.append(best)

    for _, elems in cyclic_items:
        add_class(elems)

    ci = 0
    while ci < len(class_reps):
        rep = class_reps[ci]
        if rep.size < order:
            rep_mask = _mask_from_indices(rep, order)
            for cmask, celems in cyclic_items:
                if cmask | rep_mask == rep_mask:
                    continue
                joined = ig.close(np.concatenate([rep, celems]))
                jmask = _mask_from_indices(joined, order)
                if jmask not in seen:
                    add_class(joined)
        ci += 1

    all_masks = sorted(
        seen, key=lambda m: (m.bit_count(), tuple(_indices_from_mask(m, order).tolist()))
    )
    id_of = {m: i for i, m in enumerate(all_masks)}
    members_by_class = [
        sorted(id_of[m] for m in members) for members in class_members
    ]
    members_by_class.sort(key=lambda ids: ids[0])
    return SubgroupLattice(group, ig, all_masks, members_by_class)


class ConjugacyClassTable:
    """Conjugacy classes of subgroups, ascending by order.

    ``subs[i]`` lists the class ids j having at least one conjugate inside
    the representative of class i, and ``nrsubs[i]`` the matching counts of
    such conjugates (GAP's SubsTom/NrSubsTom layout).
    """

    def __init__(self, lattice: SubgroupLattice):
        self.lattice = lattice
        ids_by_class = lattice.class_member_ids
        self.rep_ids = tuple(min(ids) for ids in ids_by_class)
        self.lengths = tuple(len(ids) for ids in ids_by_class)
        self.orders = tuple(lattice.order_of(r) for r in self.rep_ids)
        if list(self.orders) != sorted(self.orders):
            raise AssertionError("classes are not sorted ascending by order")
        if sum(self.lengths) != lattice.subgroup_count:
            raise AssertionError("class lengths do not sum to the subgroup count")

        class_of = np.empty(lattice.subgroup_count, dtype=np.int64)
        for ci, ids in enumerate(ids_by_class):
            for sid in ids:
                class_of[sid] = ci
        n_classes = len(ids_by_class)
        subs: list[tuple[int, ...]] = []
        nrsubs: list[tuple[int, ...]] = []
        for ci in range(n_classes):
            rep_mask = lattice.masks[self.rep_ids[ci]]
            counts = [0] * n_classes
            for sid, mask in enumerate(lattice.masks):
                if mask & rep_mask == mask:
                    counts[class_of[sid]] += 1
            present = [j for j in range(n_classes) if counts[j]]
            subs.append(tuple(present))
            nrsubs.append(tuple(counts[j] for j in present))
        self.subs = tuple(subs)
        self.nrsubs = tuple(nrsubs)

    def __len__(self) -> int:
        return len(self.rep_ids)

    def representative(self, ci: int) -> PermutationGroup:
        return self.lattice.subgroup(self.rep_ids[ci])

    @property
    def representatives(self) -> tuple[PermutationGroup, ...]:
        return tuple(self.representative(ci) for ci in range(len(self)))

    def rep_indices(self, ci: int) -> np.ndarray:
        return self.lattice.indices_of(self.rep_ids[ci])

    def orbit_sizes(self, ci: int) -> tuple[int, ...]:
        return self.lattice.indexed.orbit_sizes_of(self.rep_indices(ci))

    def contained_count(self, ci: int, cj: int) -> int:
        """How many conjugates of class cj lie inside the representative of ci."""
        try:
            pos = self.subs[ci].index(cj)
        except ValueError:
            return 0
        return self.nrsubs[ci][pos]


def conjugacy_classes(lattice: SubgroupLattice) -> ConjugacyClassTable:
    """Classes of subgroups under conjugation, with containment multiplicities."""
    return ConjugacyClassTable(lattice)


class TableOfMarks:
    """The integer marks matrix over class representatives (ascending)."""

    def __init__(self, classes: ConjugacyClassTable, marks: Sequence[Sequence[int]]):
        self.classes = classes
        self.marks = tuple(tuple(int(x) for x in row) for row in marks)
        self.convention = "ascending"

    def __len__(self) -> int:
        return len(self.marks)

    def descending_view(self) -> list[list[int]]:
        """The matrix in the |G_1| >= ... >= |G_N| = 1 indexing."""
        return [list(reversed(row)) for row in reversed(self.marks)]


def table_of_marks(classes: ConjugacyClassTable) -> TableOfMarks:
    """Marks by direct coset action: entry (i, j) counts cosets of G/G_i fixed
    by G_j.  Pairs with no conjugate of G_j inside G_i are zero and skipped."""
    ig = classes.lattice.indexed
    n_classes = len(classes)
    gens = [ig.small_generating_set(classes.rep_indices(j)) for j in range(n_classes)]
    marks = [[0] * n_classes for _ in range(n_classes)]
    for i in range(n_classes):
        cid, reps = ig.coset_table(classes.rep_indices(i))
        ncos = reps.size
        base = np.arange(ncos)
        for j in classes.subs[i]:
            fixed = np.ones(ncos, dtype=bool)
            for g in gens[j]:
                fixed &= cid[ig.table[g, reps]] == base
            marks[i][j] = int(fixed.sum())
    return TableOfMarks(classes, marks)


def invert_lower_triangular(matrix: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Exact inverse of a lower-triangular integer matrix by forward substitution."""
    n = len(matrix)
    rows = [[Fraction(x) for x in row] for row in matrix]
    for i in range(n):
        if rows[i][i] == 0:
            raise ValueError(f"zero diagonal entry at index {i}")
        for j in range(i + 1, n):
            if rows[i][j]:
                raise ValueError(f"matrix is not lower triangular at ({i}, {j})")
    support = [[k for k in range(i) if rows[i][k]] for i in range(n)]
    inv = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        for i in range(j, n):
            acc = Fraction(int(i == j))
            for k in support[i]:
                if k >= j:
                    acc -= rows[i][k] * inv[k][j]
            inv[i][j] = acc / rows[i][i]
    return inv


class MarksInverse:
    """Exact rational inverse of a table of marks (ascending convention)."""

    def __init__(self, tom: TableOfMarks):
        self.tom = tom
        self.entries = tuple(
            tuple(row) for row in invert_lower_triangular(tom.marks)
        )

    def __len__(self) -> int:
        return len(self.entries)

    def descending_view(self) -> list[list[Fraction]]:
        return [list(reversed(row)) for row in reversed(self.entries)]


def invert_marks(tom: TableOfMarks) -> MarksInverse:
    return MarksInverse(tom)


def bottom_moebius(classes: ConjugacyClassTable) -> list[int]:
    """mu(1, H_i) for one representative per class, by the ascending recursion:
    mu(trivial) = 1 and mu(i) = -sum over proper subgroup classes j of
    (conjugates of j inside G_i) * mu(j)."""
    n_classes = len(classes)
    mu = [0] * n_classes
    for i in range(n_classes):
        if classes.orders[i] == 1:
            mu[i] = 1
        else:
            mu[i] = -sum(
                cnt * mu[j]
                for j, cnt in zip(classes.subs[i], classes.nrsubs[i])
                if j != i
            )
    return mu


def bottom_moebius_full(lattice: SubgroupLattice) -> list[int]:
    """mu(1, H) for every individual subgroup, via the generic poset machinery."""
    mu = moebius(lattice.as_poset())
    row = mu.values[lattice.trivial_id]
    out = []
    for value in row:
        if value.denominator != 1:
            raise AssertionError("Möbius value of a lattice must be an integer")
        out.append(int(value))
    return out
