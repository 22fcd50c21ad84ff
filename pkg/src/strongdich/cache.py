"""Per-modulus class data for Aff(Z/nZ) and its on-disk JSON cache.

The class data is the complete input the counting formulas need: one record
per conjugacy class of subgroups (order, class length, bottom Möbius value,
orbit sizes of a representative, K0 membership) plus the marks matrix in the
ascending convention.  All integers are serialized as decimal strings so that
values beyond 64 bits survive any JSON reader.

A ``schema_version`` field guards the format; files with a different version
are recomputed.  ``in_k0`` records true containment of the representative in
the parity-preserving subgroup (``null`` for odd n, where K0 is undefined).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .affine import affine_group, k0_subgroup
from .lattice import (
    SubgroupLattice,
    _mask_from_indices,
    bottom_moebius,
    conjugacy_classes,
    enumerate_subgroups,
    table_of_marks,
)
from .perms import DEFAULT_MAX_ORDER

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ClassRecord:
    """One conjugacy class of subgroups of Aff(Z/nZ)."""

    order: int
    length: int
    mu: int
    orbit_sizes: tuple[int, ...]
    in_k0: bool | None


@dataclass(frozen=True)
class AffineClassData:
    """Class-level summary of Aff(Z/nZ), ascending by subgroup order."""

    n: int
    group_order: int
    classes: tuple[ClassRecord, ...]
    marks: tuple[tuple[int, ...], ...]
    convention: str = "ascending"

    def __post_init__(self) -> None:
        if self.convention != "ascending":
            raise ValueError(f"unsupported convention {self.convention!r}")
        if not self.classes or self.classes[0].order != 1:
            raise ValueError("class data must start with the trivial class")

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    @property
    def trivial_index(self) -> int:
        return 0


def build_class_data(
    n: int,
    max_order: int = DEFAULT_MAX_ORDER,
    *,
    lattice: SubgroupLattice | None = None,
) -> AffineClassData:
    """Compute the class data for Aff(Z/nZ) from scratch."""
    if lattice is None:
        lattice = enumerate_subgroups(affine_group(n, max_order), max_order)
    classes = conjugacy_classes(lattice)
    tom = table_of_marks(classes)
    mu = bottom_moebius(classes)
    ig = lattice.indexed

    k0_mask: int | None = None
    if n % 2 == 0:
        k0 = k0_subgroup(n, max_order)
        k0_mask = _mask_from_indices(ig.indices_of(k0.elements), ig.order)

    records = []
    for ci in range(len(classes)):
        rep_mask = lattice.masks[classes.rep_ids[ci]]
        in_k0 = None if k0_mask is None else (rep_mask & k0_mask == rep_mask)
        records.append(
            ClassRecord(
                order=classes.orders[ci],
                length=classes.lengths[ci],
                mu=mu[ci],
                orbit_sizes=classes.orbit_sizes(ci),
                in_k0=in_k0,
            )
        )
    return AffineClassData(
        n=n,
        group_order=lattice.group.order,
        classes=tuple(records),
        marks=tom.marks,
    )


def default_cache_dir() -> Path:
    env = os.environ.get("STRONGDICH_CACHE_DIR")
    if env:
        return Path(env)
    xdg = os.environ.get("XDG_CACHE_HOME")
    base = Path(xdg) if xdg else Path.home() / ".cache"
    return base / "strongdich"


def cache_path(cache_dir: Path, n: int) -> Path:
    return Path(cache_dir) / f"affine-classes-n{n}.json"


def _to_json(data: AffineClassData) -> dict:
    return {
        "schema_version": str(SCHEMA_VERSION),
        "n": str(data.n),
        "group_order": str(data.group_order),
        "convention": data.convention,
        "classes": [
            {
                "order": str(c.order),
                "length": str(c.length),
                "mu": str(c.mu),
                "orbit_sizes": [str(s) for s in c.orbit_sizes],
                "in_k0": c.in_k0,
            }
            for c in data.classes
        ],
        "marks": [[str(x) for x in row] for row in data.marks],
    }


def _from_json(obj: dict) -> AffineClassData:
    classes = tuple(
        ClassRecord(
            order=int(c["order"]),
            length=int(c["length"]),
            mu=int(c["mu"]),
            orbit_sizes=tuple(int(s) for s in c["orbit_sizes"]),
            in_k0=c["in_k0"],
        )
        for c in obj["classes"]
    )
    marks = tuple(tuple(int(x) for x in row) for row in obj["marks"])
    return AffineClassData(
        n=int(obj["n"]),
        group_order=int(obj["group_order"]),
        classes=classes,
        marks=marks,
        convention=obj["convention"],
    )


def save_class_data(data: AffineClassData, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(_to_json(data), indent=1) + "\n")
    tmp.replace(path)


def load_class_data(path: Path) -> AffineClassData | None:
    """Load a cache file; None on a missing file or a schema-version mismatch."""
    path = Path(path)
    if not path.is_file():
        return None
    try:
        obj = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    if obj.get("schema_version") != str(SCHEMA_VERSION):
        return None
    return _from_json(obj)


def load_or_build(
    n: int,
    *,
    cache_dir: Path | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
    use_cache: bool = True,
) -> AffineClassData:
    """Return the class data for Aff(Z/nZ), reusing the disk cache when valid."""
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    path = cache_path(cache_dir, n)
    if use_cache:
        cached = load_class_data(path)
        if cached is not None and cached.n == n:
            return cached
    data = build_class_data(n, max_order)
    if use_cache:
        save_class_data(data, path)
    return data
