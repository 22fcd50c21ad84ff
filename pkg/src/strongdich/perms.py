"""Permutations on {0,...,n-1} and fully materialized permutation groups.

Composition order is fixed everywhere in this package as "right factor acts
first": ``compose(p, q)`` maps ``x`` to ``p(q(x))``.  Groups are small (a few
thousand elements at most), so they are stored as complete sorted element
lists; equality and hashing use that canonical form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import OrderCapExceeded

#: Default cap on materialized group orders.  Aff(Z/2kZ) has order 2k*phi(2k),
#: so the default covers the k=29 target (order 1624) with headroom.
DEFAULT_MAX_ORDER = 2000


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of {0,...,degree-1}, stored as its tuple of images."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(
                f"images {images!r} are not a bijection of {{0,...,{len(images) - 1}}}"
            )

    @staticmethod
    def identity(degree: int) -> Permutation:
        if degree < 1:
            raise ValueError("degree must be >= 1")
        return Permutation(tuple(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def image_of_set(self, points: Iterable[int]) -> frozenset[int]:
        return frozenset(self.images[p] for p in points)

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point, sorted."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)!r})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """The permutation x -> p(q(x)); the right factor acts first."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    qi = q.images
    pi = p.images
    return Permutation(tuple(pi[qi[x]] for x in range(p.degree)))


class PermutationGroup:
    """A permutation group with its complete element list materialized.

    The canonical form of a group (used for equality, hashing and subgroup
    deduplication) is its sorted element tuple.  Instances are immutable;
    sharing them across threads is safe.
    """

    __slots__ = ("degree", "generators", "elements", "_element_set")

    def __init__(
        self,
        elements: Iterable[Permutation],
        generators: Sequence[Permutation] | None = None,
        *,
        check: bool = False,
    ):
        elems = tuple(sorted(set(elements)))
        if not elems:
            raise ValueError("a group needs at least the identity element")
        degree = elems[0].degree
        if any(e.degree != degree for e in elems):
            raise ValueError("all elements of a group must share one degree")
        element_set = frozenset(elems)
        if Permutation.identity(degree) not in element_set:
            raise ValueError("element list lacks the identity permutation")
        gens = tuple(generators) if generators is not None else elems
        if any(g not in element_set for g in gens):
            raise ValueError("generators must be contained in the element list")
        if check:
            for a in elems:
                if a.inverse() not in element_set:
                    raise ValueError(f"element list not closed under inverse at {a!r}")
                for b in elems:
                    if compose(a, b) not in element_set:
                        raise ValueError(
                            f"element list not closed under composition at {a!r}*{b!r}"
                        )
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "_element_set", element_set)

    def __setattr__(self, name, value):  # noqa: ANN001 - immutability guard
        raise AttributeError("PermutationGroup is immutable")

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Permutation:
        return self.elements[0]

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def element_set(self) -> frozenset[Permutation]:
        return self._element_set

    def __contains__(self, perm: Permutation) -> bool:
        return perm in self._element_set

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermutationGroup):
            return NotImplemented
        return self.degree == other.degree and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.degree, self.elements))

    def __repr__(self) -> str:
        return f"<PermutationGroup degree={self.degree} order={self.order}>"


def generate_group(
    degree: int,
    generators: Iterable[Permutation],
    max_order: int = DEFAULT_MAX_ORDER,
) -> PermutationGroup:
    """Close ``generators`` under composition by breadth-first multiplication.

    Inverses come for free in a finite group; no inverse closure is needed.
    Raises OrderCapExceeded as soon as the closure passes ``max_order``.
    """
    gens = tuple(generators)
    for g in gens:
        if g.degree != degree:
            raise ValueError(f"generator degree {g.degree} does not match {degree}")
    ident = Permutation.identity(degree)
    known: set[Permutation] = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for f in frontier:
            for g in gens:
                p = compose(f, g)
                if p not in known:
                    known.add(p)
                    if len(known) > max_order:
                        raise OrderCapExceeded(
                            f"group closure exceeded the order cap {max_order}"
                        )
                    new.append(p)
        frontier = new
    return PermutationGroup(known, generators=gens)


def orbits(group: PermutationGroup) -> list[list[int]]:
    """Partition of {0,...,n-1} into group orbits, ordered by least element."""
    seen = [False] * group.degree
    parts = []
    for p in range(group.degree):
        if seen[p]:
            continue
        orbit = sorted({e.images[p] for e in group.elements})
        for x in orbit:
            seen[x] = True
        parts.append(orbit)
    return parts


def orbit_sizes(group: PermutationGroup) -> list[int]:
    return [len(o) for o in orbits(group)]


def setwise_stabilizer(group: PermutationGroup, points: Iterable[int]) -> PermutationGroup:
    """The subgroup {g in group : g(points) == points} as a set."""
    target = frozenset(points)
    if any(p < 0 or p >= group.degree for p in target):
        raise ValueError("points must lie in {0,...,degree-1}")
    stab = [g for g in group.elements if g.image_of_set(target) == target]
    return PermutationGroup(stab)


def is_subgroup(big: PermutationGroup, small: PermutationGroup) -> bool:
    """True iff every element of ``small`` lies in ``big``."""
    if big.degree != small.degree:
        raise ValueError(f"degree mismatch: {big.degree} vs {small.degree}")
    return small.element_set() <= big.element_set()


def join(
    group: PermutationGroup,
    extra: Iterable[Permutation],
    max_order: int = DEFAULT_MAX_ORDER,
) -> PermutationGroup:
    """The closure of ``group`` together with the ``extra`` permutations."""
    extra = tuple(extra)
    for p in extra:
        if p.degree != group.degree:
            raise ValueError(f"degree mismatch: {p.degree} vs {group.degree}")
    if not extra:
        return group
    return generate_group(group.degree, group.generators + extra, max_order)
