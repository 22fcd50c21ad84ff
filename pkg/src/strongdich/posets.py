"""Incidence algebra of a finite poset: zeta, Möbius, convolution, inversion.

All values are exact rationals (``fractions.Fraction``); no floating point
appears anywhere.  Posets are dense tables over at most a few hundred
elements, which covers every subgroup lattice this package touches.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Sequence

import numpy as np


class PosetError(ValueError):
    """Raised when a relation fails the partial-order axioms."""


class FinitePoset:
    """A finite poset given by its element list and a dense <= table.

    The partial-order axioms are verified at construction; violations are
    reported with the offending element pair.
    """

    __slots__ = ("elements", "leq", "_index", "_extension")

    def __init__(self, elements: Sequence[Hashable], leq: np.ndarray):
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise PosetError("poset elements must be distinct")
        m = len(elements)
        leq = np.array(leq, dtype=bool)
        if leq.shape != (m, m):
            raise PosetError(f"leq table must be {m}x{m}, got {leq.shape}")
        diag = np.diagonal(leq)
        if not diag.all():
            x = elements[int(np.flatnonzero(~diag)[0])]
            raise PosetError(f"reflexivity fails: {x!r} <= {x!r} is missing")
        both = leq & leq.T
        both[np.diag_indices(m)] = False
        if both.any():
            i, j = map(int, np.argwhere(both)[0])
            raise PosetError(
                f"antisymmetry fails: {elements[i]!r} <= {elements[j]!r} and back"
            )
        reach = (leq.astype(np.uint32) @ leq.astype(np.uint32)) > 0
        missing = reach & ~leq
        if missing.any():
            i, j = map(int, np.argwhere(missing)[0])
            raise PosetError(
                f"transitivity fails: {elements[i]!r} <= {elements[j]!r} is missing"
            )
        leq.setflags(write=False)
        self.elements = elements
        self.leq = leq
        self._index = {x: i for i, x in enumerate(elements)}
        # Linear extension: sort by down-set size, ties by original position.
        below = leq.sum(axis=0)
        self._extension = tuple(sorted(range(m), key=lambda i: (int(below[i]), i)))

    @classmethod
    def from_relation(
        cls, elements: Sequence[Hashable], relation: Callable[[Hashable, Hashable], bool]
    ) -> FinitePoset:
        m = len(elements)
        leq = np.zeros((m, m), dtype=bool)
        for i, x in enumerate(elements):
            for j, y in enumerate(elements):
                leq[i, j] = bool(relation(x, y))
        return cls(elements, leq)

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, x: Hashable) -> int:
        return self._index[x]

    def le(self, x: Hashable, y: Hashable) -> bool:
        return bool(self.leq[self._index[x], self._index[y]])

    def linear_extension(self) -> tuple[int, ...]:
        """Element indices in an order compatible with <=."""
        return self._extension


class IncidenceFunction:
    """A rational-valued function on pairs, supported on x <= y."""

    __slots__ = ("poset", "values")

    def __init__(self, poset: FinitePoset, values: Sequence[Sequence[Fraction | int]]):
        m = len(poset)
        table = [[Fraction(values[i][j]) for j in range(m)] for i in range(m)]
        for i in range(m):
            for j in range(m):
                if table[i][j] and not poset.leq[i, j]:
                    raise ValueError(
                        f"support violation: nonzero value at "
                        f"{poset.elements[i]!r} !<= {poset.elements[j]!r}"
                    )
        self.poset = poset
        self.values = table

    def at(self, i: int, j: int) -> Fraction:
        return self.values[i][j]

    def __call__(self, x: Hashable, y: Hashable) -> Fraction:
        return self.values[self.poset.index(x)][self.poset.index(y)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IncidenceFunction):
            return NotImplemented
        return self.poset is other.poset and self.values == other.values


def identity_function(poset: FinitePoset) -> IncidenceFunction:
    """I(x,y) = [x == y]."""
    m = len(poset)
    return IncidenceFunction(
        poset, [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    )


def zeta(poset: FinitePoset) -> IncidenceFunction:
    """zeta(x,y) = [x <= y]."""
    m = len(poset)
    return IncidenceFunction(
        poset, [[Fraction(int(poset.leq[i, j])) for j in range(m)] for i in range(m)]
    )


def moebius(poset: FinitePoset) -> IncidenceFunction:
    """The Möbius function: mu(x,x)=1 and mu(x,y) = -sum_{x<=z<y} mu(x,z)."""
    m = len(poset)
    leq = poset.leq
    order = poset.linear_extension()
    table = [[Fraction(0)] * m for _ in range(m)]
    for x in range(m):
        ups = [z for z in order if leq[x, z]]
        row = table[x]
        for y in ups:
            if y == x:
                row[x] = Fraction(1)
            else:
                row[y] = -sum((row[z] for z in ups if leq[z, y] and z != y), Fraction(0))
    return IncidenceFunction(poset, table)


def convolve(alpha: IncidenceFunction, beta: IncidenceFunction) -> IncidenceFunction:
    """(alpha*beta)(x,y) = sum_z alpha(x,z) beta(z,y); only z in [x,y] contribute."""
    if alpha.poset is not beta.poset:
        raise ValueError("incidence functions live on different posets")
    poset = alpha.poset
    m = len(poset)
    leq = poset.leq
    out = [[Fraction(0)] * m for _ in range(m)]
    for x in range(m):
        ups = np.flatnonzero(leq[x])
        for y in ups:
            total = Fraction(0)
            for z in ups:
                if leq[z, y]:
                    total += alpha.values[x][z] * beta.values[z][y]
            out[x][y] = total
    return IncidenceFunction(poset, out)


def moebius_invert(beta: IncidenceFunction) -> IncidenceFunction:
    """Return beta * mu, the alpha solving alpha * zeta = beta."""
    return convolve(beta, moebius(beta.poset))


def random_poset(size: int, rng) -> FinitePoset:
    """A random poset: transitive closure of a random DAG on 0..size-1.

    Edges only point from smaller to larger labels, so the closure is
    automatically antisymmetric.
    """
    leq = np.eye(size, dtype=bool)
    for i in range(size):
        for j in range(i + 1, size):
            if rng.random() < 0.4:
                leq[i, j] = True
    for k in range(size):  # Floyd-Warshall transitive closure
        leq |= np.outer(leq[:, k], leq[k, :])
    return FinitePoset(list(range(size)), leq)
