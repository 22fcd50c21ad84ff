"""The affine group Aff(Z/nZ), its parity-preserving subgroup, quasipolarities.

An affine map ``e^u.v`` sends ``x`` to ``v*x + u (mod n)`` with ``v`` a unit.
Under the package-wide "right factor acts first" convention,
``e^u1.v1 ∘ e^u2.v2 = e^(v1*u2 + u1).(v1*v2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OrderCapExceeded
from .perms import DEFAULT_MAX_ORDER, Permutation, PermutationGroup, generate_group


def units(n: int) -> list[int]:
    """The units of Z/nZ in ascending order (for n=1 this is [0])."""
    if n < 1:
        raise ValueError("modulus must be >= 1")
    return [v for v in range(n) if math.gcd(v, n) == 1]


def euler_phi(n: int) -> int:
    return len(units(n))


@dataclass(frozen=True, order=True)
class AffineMap:
    """The map x -> multiplier*x + translation on Z/modulus, multiplier a unit."""

    modulus: int
    translation: int
    multiplier: int

    def __post_init__(self) -> None:
        n, u, v = self.modulus, self.translation, self.multiplier
        if n < 1:
            raise ValueError("modulus must be >= 1")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"residues out of range for modulus {n}: u={u}, v={v}")
        if math.gcd(v, n) != 1:
            raise ValueError(f"multiplier {v} is not a unit mod {n}")

    @staticmethod
    def identity(n: int) -> AffineMap:
        return AffineMap(n, 0, 1 % n)

    def __call__(self, x: int) -> int:
        return (self.multiplier * x + self.translation) % self.modulus

    def compose(self, other: AffineMap) -> AffineMap:
        """self after other (other acts first)."""
        if self.modulus != other.modulus:
            raise ValueError("modulus mismatch")
        n = self.modulus
        u = (self.multiplier * other.translation + self.translation) % n
        v = (self.multiplier * other.multiplier) % n
        return AffineMap(n, u, v)

    def inverse(self) -> AffineMap:
        n = self.modulus
        w = pow(self.multiplier, -1, n)
        return AffineMap(n, (-w * self.translation) % n, w)

    def is_identity(self) -> bool:
        return self.translation == 0 and self.multiplier == 1 % self.modulus

    def as_permutation(self) -> Permutation:
        return affine_to_perm(self)

    def __str__(self) -> str:
        return f"e^{self.translation}.{self.multiplier} mod {self.modulus}"


def affine_to_perm(m: AffineMap) -> Permutation:
    """The permutation of the residues 0..n-1 induced by ``m``."""
    n = m.modulus
    return Permutation(tuple((m.multiplier * x + m.translation) % n for x in range(n)))


def affine_from_perm(p: Permutation) -> AffineMap:
    """Recover (u, v) from the permutation of an affine map; ValueError if none."""
    n = p.degree
    u = p.images[0]
    v = (p.images[1] - u) % n if n > 1 else 0
    m = AffineMap(n, u, v)
    if affine_to_perm(m) != p:
        raise ValueError(f"{p!r} is not an affine permutation mod {n}")
    return m


def all_affine_maps(n: int) -> list[AffineMap]:
    """All n*phi(n) affine maps, sorted by (translation, multiplier)."""
    return [AffineMap(n, u, v) for u in range(n) for v in units(n)]


def affine_group(n: int, max_order: int = DEFAULT_MAX_ORDER) -> PermutationGroup:
    """Aff(Z/nZ) generated by the unit translation and all unit multiplications."""
    if n < 1:
        raise ValueError("modulus must be >= 1")
    if n == 1:
        return PermutationGroup([Permutation.identity(1)])
    expected = n * euler_phi(n)
    if expected > max_order:
        raise OrderCapExceeded(
            f"|Aff(Z/{n}Z)| = {expected} exceeds the order cap {max_order}"
        )
    gens = [affine_to_perm(AffineMap(n, 1, 1))]
    gens += [affine_to_perm(AffineMap(n, 0, v)) for v in units(n)]
    group = generate_group(n, gens, max_order)
    if group.order != expected:
        raise AssertionError(
            f"Aff(Z/{n}Z) closure has order {group.order}, expected {expected}"
        )
    return group


def k0_subgroup(n: int, max_order: int = DEFAULT_MAX_ORDER) -> PermutationGroup:
    """The index-2 subgroup of Aff(Z/nZ) with even translation part (n even)."""
    if n < 2 or n % 2:
        raise ValueError(f"the parity-preserving subgroup needs an even modulus, got {n}")
    expected = (n // 2) * euler_phi(n)
    if expected > max_order:
        raise OrderCapExceeded(f"|K0| = {expected} exceeds the order cap {max_order}")
    gens = [affine_to_perm(AffineMap(n, 2 % n, 1))]
    gens += [affine_to_perm(AffineMap(n, 0, v)) for v in units(n)]
    group = generate_group(n, gens, max_order)
    if group.order != expected:
        raise AssertionError(f"K0 closure has order {group.order}, expected {expected}")
    return group


def is_quasipolarity(m: AffineMap) -> bool:
    """True iff ``m`` is a fixed-point-free involution (tested on its permutation)."""
    p = affine_to_perm(m)
    n = m.modulus
    if any(p.images[x] == x for x in range(n)):
        return False
    return all(p.images[p.images[x]] == x for x in range(n))


def quasipolarities(n: int) -> list[AffineMap]:
    """All affine involutions without fixed points, sorted by (u, v).

    These only exist for even n; an odd modulus is rejected.
    """
    if n < 2 or n % 2:
        raise ValueError(f"quasipolarities are only supported for even moduli, got {n}")
    return [m for m in all_affine_maps(n) if is_quasipolarity(m)]
