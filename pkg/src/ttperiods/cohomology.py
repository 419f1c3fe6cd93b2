"""Catalog of group cohomology rings, reduced modulo nilpotents.

Keyed by isomorphism-type keys from groups.identify, plus a few named
entries for groups too large to enumerate.  Each entry ships the reduced
presentation over the working prime, together with certified witness
patterns whenever the relations are not monomial.  Unrecognized types
are refused loudly; the catalog never guesses a ring.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graded import (
    GradedRingPresentation,
    PrimePattern,
    SpechModel,
    enumerate_patterns,
    make_ring,
)
from .groups import FiniteGroup, identify


class GroupNotInCatalog(Exception):
    """No cohomology entry for this group type at this prime."""


class WeylNotInCatalog(GroupNotInCatalog):
    """A stratum's Weyl group fell outside the catalog."""


@dataclass(frozen=True)
class CatalogEntry:
    key: tuple
    group_order: int
    prime: int
    presentation: GradedRingPresentation
    witnesses: "tuple[tuple[PrimePattern, str], ...] | None"
    note: str

    def spech(self) -> SpechModel:
        return enumerate_patterns(self.presentation, self.witnesses)


def catalog_key(group: "FiniteGroup | str | tuple") -> tuple:
    if isinstance(group, FiniteGroup):
        key = identify(group)
        if key is None:
            raise GroupNotInCatalog(
                f"unidentified isomorphism type (order {group.order})"
            )
        return key
    if isinstance(group, str):
        return (group,)
    return tuple(group)


def _key_order(key: tuple) -> int:
    kind = key[0]
    if kind == "trivial":
        return 1
    if kind == "cyclic":
        return key[1]
    if kind == "elem_abelian":
        return key[1] ** key[2]
    if kind == "dihedral" or kind == "quaternion":
        return key[1]
    if kind == "abelian":
        n = 1
        for d in key[1]:
            n *= d
        return n
    if kind == "M11":
        return 7920
    raise GroupNotInCatalog(f"unknown catalog key {key!r}")


def _field(p: int, note: str) -> "tuple[GradedRingPresentation, None, str]":
    return make_ring(p, []), None, note


def _p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def cohomology_entry(group: "FiniteGroup | str | tuple", p: int) -> CatalogEntry:
    """The reduced cohomology presentation of the group at the prime p."""
    if isinstance(group, FiniteGroup) and identify(group) is None:
        # Unknown isomorphism type: still fine when p is coprime to the
        # order, because then the reduced cohomology is just the field.
        if group.order % p != 0:
            ring, wits, note = _field(
                p, "coprime order, reduced cohomology is the base field"
            )
            return CatalogEntry(
                ("unidentified", group.order), group.order, p, ring, wits, note
            )
        raise GroupNotInCatalog(
            f"unidentified isomorphism type (order {group.order}) at p={p}"
        )
    key = catalog_key(group)
    order = _key_order(key)
    kind = key[0]
    if order % p != 0:
        ring, wits, note = _field(p, "coprime order, reduced cohomology is the base field")
    elif kind == "cyclic":
        q = _p_part(key[1], p)
        if q == 2:
            ring = make_ring(2, [("x", 1)])
            wits, note = None, "order-two cyclic part, polynomial on one degree-1 class"
        else:
            ring = make_ring(p, [("y", 2)])
            wits, note = None, "cyclic part of order at least 3, polynomial on one degree-2 class"
    elif kind == "elem_abelian":
        r = key[2]
        if p == 2:
            names = ["x"] if r == 1 else [f"x{i}" for i in range(1, r + 1)]
            ring = make_ring(2, [(n, 1) for n in names])
        else:
            names = ["y"] if r == 1 else [f"y{i}" for i in range(1, r + 1)]
            ring = make_ring(p, [(n, 2) for n in names])
        wits, note = None, f"rank-{r} elementary abelian, polynomial ring"
    elif kind == "quaternion" and p == 2:
        ring = make_ring(2, [("e", 4)])
        wits, note = None, "generalized quaternion, polynomial on one degree-4 class"
    elif kind == "dihedral" and key[1] == 8 and p == 2:
        ring = make_ring(
            2,
            [("α0", 1), ("α1", 1), ("β", 2)],
            [[(1, {"α0": 1, "α1": 1})]],
        )
        wits, note = None, "order-8 dihedral, two projective lines meeting in a point"
    elif kind == "M11" and p == 3:
        ring = make_ring(
            3,
            [("a", 8), ("b", 12), ("c", 16)],
            [[(1, {"b": 2}), (1, {"a": 1, "c": 1}), (-1, {"a": 3})]],
        )
        wits = (
            (PrimePattern.of(), "witness"),
            (PrimePattern.of("b"), "witness"),
            (PrimePattern.of("c"), "witness"),
            (PrimePattern.of("a", "b"), "witness"),
            (PrimePattern.of("a", "b", "c"), "witness"),
        )
        note = "Mathieu group of order 7920 at 3, reduced to one hypersurface"
    else:
        raise GroupNotInCatalog(f"{key!r} at p={p}")
    return CatalogEntry(key, order, p, ring, wits, note)
