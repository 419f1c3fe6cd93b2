"""Tabulated graded commutative 2-rings and their spectra.

A 2-ring here is a finite preadditive symmetric monoidal category with
every object tensor-invertible, stored as explicit tables: objects
labeled by a finite abelian group, hom components as vector spaces over
a prime field, bilinear composition and tensor tables, and a symmetry
element for each object pair.  On top of the datum sit categorical
ideals and their primes, a Zariski-style spectrum, twisted-commutation
oracles, tightening validation against a graded ring, the executable
ideal correspondence between the two sides, localization by a two-sided
calculus of fractions, and restriction to a support submonoid.
Everything is decided by exhaustive enumeration over the finite tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .diagnostics import Diagnosis, PASS, failure
from .multigraded import (
    MAX_COMPONENT_DIM,
    AbelianGroup,
    IdealLattice,
    MultigradedRing,
    RingShapeError,
    SizeBound,
    additive_span,
    all_vectors,
    mg_mul,
    mult_system_ring,
    render_combo,
    ring_ideals,
    is_ring_prime,
    spech_multigraded,
    validate_multigraded,
    vec_add,
    vec_scale,
    vec_zero,
)
from .spaces import FiniteSpectralModel

MAX_OBJECTS = 12


class BadShapes(Exception):
    """Morphism endpoints do not fit the requested operation."""


class ShapeMismatch(Exception):
    """Tightening data whose shapes do not match the 2-ring."""


class NotSubmonoid(Exception):
    """Restriction set is not a submonoid of the grading group."""


# -- the datum --------------------------------------------------------
#
# A morphism is a triple (src, dst, vec).  compose_tables[(a, b, c)]
# maps basis index i of Hom(a, b) and j of Hom(b, c) to the vector of
# basis_j composed after basis_i.  tensor_tables[(a, b, c, d)] maps
# basis i of Hom(a, b) and j of Hom(c, d) to the vector of their tensor
# inside Hom(a tensor c, b tensor d).


@dataclass
class TwoRingDatum:
    name: str
    group: AbelianGroup
    char: int
    objects: tuple
    labels: dict
    unit: str
    support: frozenset
    dims: dict
    basis_names: dict
    compose_tables: dict
    tensor_obj: dict
    tensor_tables: dict
    identities: dict
    symmetry: dict
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def hom_dim(self, a, b) -> int:
        return self.dims.get((a, b), 0)

    def zero_mor(self, a, b):
        return (a, b, vec_zero(self.hom_dim(a, b)))

    def identity(self, a):
        return (a, a, self.identities[a])

    def homs(self, a, b, include_zero: bool = False):
        for vec in all_vectors(self.char, self.hom_dim(a, b)):
            if include_zero or any(vec):
                yield (a, b, vec)

    def morphisms(self, include_zero: bool = False):
        for a in self.objects:
            for b in self.objects:
                yield from self.homs(a, b, include_zero)

    def basis_morphisms(self):
        for a in self.objects:
            for b in self.objects:
                d = self.hom_dim(a, b)
                for i in range(d):
                    yield (a, b, tuple(1 if k == i else 0 for k in range(d)))

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims.values())

    def render(self, mor) -> str:
        a, b, vec = mor
        body = render_combo(self.basis_names[(a, b)], vec)
        if a == self.unit:
            return body
        return f"{body}@{a}→{b}"


def compose(R2: TwoRingDatum, g, f):
    """g after f; endpoints must chain."""
    a, b, u = f
    b2, c, v = g
    if b != b2:
        raise BadShapes(f"cannot compose {R2.render(g)} after {R2.render(f)}")
    p = R2.char
    out = [0] * R2.hom_dim(a, c)
    table = R2.compose_tables.get((a, b, c))
    if table is not None:
        for i, ci in enumerate(u):
            if ci == 0:
                continue
            for j, cj in enumerate(v):
                if cj == 0:
                    continue
                w = table[i][j]
                for k in range(len(out)):
                    out[k] = (out[k] + ci * cj * w[k]) % p
    return (a, c, tuple(out))


def tensor(R2: TwoRingDatum, f, g):
    """Tensor product of two morphisms."""
    a, b, u = f
    c, d, v = g
    src = R2.tensor_obj[(a, c)]
    dst = R2.tensor_obj[(b, d)]
    p = R2.char
    out = [0] * R2.hom_dim(src, dst)
    table = R2.tensor_tables.get((a, b, c, d))
    if table is not None:
        for i, ci in enumerate(u):
            if ci == 0:
                continue
            for j, cj in enumerate(v):
                if cj == 0:
                    continue
                w = table[i][j]
                for k in range(len(out)):
                    out[k] = (out[k] + ci * cj * w[k]) % p
    return (src, dst, tuple(out))


def mor_add(R2: TwoRingDatum, f, g):
    if (f[0], f[1]) != (g[0], g[1]):
        raise BadShapes("cannot add morphisms with different endpoints")
    return (f[0], f[1], vec_add(R2.char, f[2], g[2]))


def mor_scale(R2: TwoRingDatum, c: int, f):
    return (f[0], f[1], vec_scale(R2.char, c, f[2]))


def isomorphisms(R2: TwoRingDatum, a, b) -> tuple:
    """All invertible morphisms from a to b, cached per datum."""
    key = ("isos", a, b)
    if key in R2._cache:
        return R2._cache[key]
    out = []
    ida, idb = R2.identity(a), R2.identity(b)
    for f in R2.homs(a, b, include_zero=True):
        for g in R2.homs(b, a, include_zero=True):
            if compose(R2, g, f) == ida and compose(R2, f, g) == idb:
                out.append(f)
                break
    out = tuple(out)
    R2._cache[key] = out
    return out


def inverse_of(R2: TwoRingDatum, f):
    a, b, _ = f
    for g in R2.homs(b, a, include_zero=True):
        if compose(R2, g, f) == R2.identity(a) and compose(R2, f, g) == R2.identity(b):
            return g
    raise BadShapes(f"{R2.render(f)} is not invertible")


def has_iso(R2: TwoRingDatum, a, b) -> bool:
    return bool(isomorphisms(R2, a, b))


# -- construction from a graded ring ----------------------------------


def object_name(group: AbelianGroup, label) -> str:
    label = group.canon(label)
    if len(label) == 1:
        return str(label[0])
    return ",".join(str(k) for k in label)


def two_ring_from_multigraded(
    ring: MultigradedRing,
    name: str | None = None,
    support=None,
    extra_objects: Sequence = (),
) -> TwoRingDatum:
    """One object per grading element, homs given by degree difference.

    Composition is the ring product; the tensor of morphisms picks up a
    transposition factor against the source label, which makes the
    interchange law hold whenever every transposition value squares to
    the identity (enforced here).  extra_objects adds duplicate objects
    (name, label) to exercise non-skeletal behavior; object-level tensor
    always lands on the original representative of the sum label.
    """
    group = ring.group
    zero = group.zero
    one = (zero, ring.one)
    for x in group.elements():
        for y in group.elements():
            t = (zero, ring.tau[(x, y)])
            if not ring.is_zero_ring() and mg_mul(ring, t, t) != one:
                raise RingShapeError("transposition value does not square to one")

    labels = {object_name(group, x): x for x in group.elements()}
    objects = [object_name(group, x) for x in group.elements()]
    for nm, lab in extra_objects:
        if nm in labels:
            raise RingShapeError(f"duplicate object name {nm!r}")
        labels[nm] = group.canon(lab)
        objects.append(nm)
    if len(objects) > MAX_OBJECTS:
        raise SizeBound("too many objects")
    unit = object_name(group, zero)
    if support is None:
        supp = frozenset(group.elements())
    else:
        supp = group.submonoid_closure(support)

    def deg(a, b):
        return group.sub(labels[b], labels[a])

    dims = {}
    basis_names = {}
    for a in objects:
        for b in objects:
            d = deg(a, b)
            n = ring.dims[d] if d in supp else 0
            dims[(a, b)] = n
            basis_names[(a, b)] = ring.basis_names[d][:n]

    def ring_vec(a, b, vec):
        return (deg(a, b), vec)

    compose_tables = {}
    for a in objects:
        for b in objects:
            for c in objects:
                if dims[(a, b)] == 0 or dims[(b, c)] == 0:
                    continue
                rows = []
                for i in range(dims[(a, b)]):
                    row = []
                    f = (deg(a, b), tuple(1 if k == i else 0 for k in range(dims[(a, b)])))
                    for j in range(dims[(b, c)]):
                        g = (deg(b, c), tuple(1 if k == j else 0 for k in range(dims[(b, c)])))
                        prod = mg_mul(ring, g, f)
                        row.append(prod[1][: dims[(a, c)]])
                    rows.append(tuple(row))
                compose_tables[(a, b, c)] = tuple(rows)

    tensor_obj = {}
    for a in objects:
        for b in objects:
            tensor_obj[(a, b)] = object_name(group, group.add(labels[a], labels[b]))

    tensor_tables = {}
    for a in objects:
        for b in objects:
            for c in objects:
                for d in objects:
                    if dims[(a, b)] == 0 or dims[(c, d)] == 0:
                        continue
                    src = tensor_obj[(a, c)]
                    dst = tensor_obj[(b, d)]
                    factor = (zero, ring.tau[(deg(c, d), labels[a])])
                    rows = []
                    for i in range(dims[(a, b)]):
                        f = (deg(a, b), tuple(1 if k == i else 0 for k in range(dims[(a, b)])))
                        row = []
                        for j in range(dims[(c, d)]):
                            g = (deg(c, d), tuple(1 if k == j else 0 for k in range(dims[(c, d)])))
                            prod = mg_mul(ring, factor, mg_mul(ring, f, g))
                            row.append(prod[1][: dims[(src, dst)]])
                        rows.append(tuple(row))
                    tensor_tables[(a, b, c, d)] = tuple(rows)

    identities = {a: ring.one for a in objects}
    symmetry = {}
    for a in objects:
        for b in objects:
            symmetry[(a, b)] = ring.tau[(labels[a], labels[b])]

    return TwoRingDatum(
        name=name or ring.name,
        group=group,
        char=ring.char,
        objects=tuple(objects),
        labels=labels,
        unit=unit,
        support=supp,
        dims=dims,
        basis_names=basis_names,
        compose_tables=compose_tables,
        tensor_obj=tensor_obj,
        tensor_tables=tensor_tables,
        identities=identities,
        symmetry=symmetry,
    )


# -- validation -------------------------------------------------------


def validate_two_ring(R2: TwoRingDatum) -> Diagnosis:
    """Exhaustive check of the category, tensor, and symmetry axioms.

    Additivity in each variable is free from the table representation.
    Unit behavior of the tensor is required only up to isomorphism, so
    duplicate objects with chosen isomorphisms are allowed.
    """
    p = R2.char
    if p < 2 or any(p % k == 0 for k in range(2, p)):
        return failure("characteristic_not_prime", p)
    # shapes
    for a in R2.objects:
        if a not in R2.labels:
            return failure("object_without_label", a)
        if len(R2.identities.get(a, ())) != R2.hom_dim(a, a):
            return failure("bad_identity_shape", a)
    if R2.labels.get(R2.unit) != R2.group.zero:
        return failure("unit_not_labeled_zero")
    zero = R2.group.zero
    if zero not in R2.support:
        return failure("support_without_identity")
    for x in R2.support:
        for y in R2.support:
            if R2.group.add(x, y) not in R2.support:
                return failure("support_not_submonoid", x, y)
    for a in R2.objects:
        for b in R2.objects:
            diff = R2.group.sub(R2.labels[b], R2.labels[a])
            if R2.hom_dim(a, b) > 0 and diff not in R2.support:
                return failure("component_outside_support", a, b)
            if len(R2.basis_names[(a, b)]) != R2.hom_dim(a, b):
                return failure("bad_basis_names", a, b)

    # composition: associative and unital
    basis = list(R2.basis_morphisms())
    for f in basis:
        if compose(R2, R2.identity(f[1]), f) != f or compose(R2, f, R2.identity(f[0])) != f:
            return failure("composition_not_unital", R2.render(f))
    for f in basis:
        for g in basis:
            if g[0] != f[1]:
                continue
            gf = compose(R2, g, f)
            for h in basis:
                if h[0] != g[1]:
                    continue
                if compose(R2, h, gf) != compose(R2, compose(R2, h, g), f):
                    return failure("composition_not_associative",
                                   R2.render(f), R2.render(g), R2.render(h))

    # object-level tensor
    for a in R2.objects:
        for b in R2.objects:
            t = R2.tensor_obj.get((a, b))
            if t not in R2.labels:
                return failure("tensor_object_missing", a, b)
            if R2.labels[t] != R2.group.add(R2.labels[a], R2.labels[b]):
                return failure("tensor_label_mismatch", a, b)
    for a in R2.objects:
        for b in R2.objects:
            for c in R2.objects:
                if R2.tensor_obj[(R2.tensor_obj[(a, b)], c)] != R2.tensor_obj[(a, R2.tensor_obj[(b, c)])]:
                    return failure("tensor_object_not_associative", a, b, c)

    # tensor on morphisms: identities and interchange
    for a in R2.objects:
        for b in R2.objects:
            ab = R2.tensor_obj[(a, b)]
            if tensor(R2, R2.identity(a), R2.identity(b)) != R2.identity(ab):
                return failure("tensor_of_identities", a, b)
    for f in basis:
        for f2 in basis:
            if f2[0] != f[1]:
                continue
            for g in basis:
                for g2 in basis:
                    if g2[0] != g[1]:
                        continue
                    lhs = compose(R2, tensor(R2, f2, g2), tensor(R2, f, g))
                    rhs = tensor(R2, compose(R2, f2, f), compose(R2, g2, g))
                    if lhs != rhs:
                        return failure("interchange_fails",
                                       R2.render(f), R2.render(f2), R2.render(g), R2.render(g2))

    # invertibility of objects, including unit coherence up to iso
    for a in R2.objects:
        if not any(has_iso(R2, R2.tensor_obj[(a, b)], R2.unit) for b in R2.objects):
            return failure("object_not_invertible", a)
        if not has_iso(R2, R2.tensor_obj[(a, R2.unit)], a):
            return failure("unit_tensor_not_isomorphic", a)
        if not has_iso(R2, R2.tensor_obj[(R2.unit, a)], a):
            return failure("unit_tensor_not_isomorphic", a)

    # symmetry: isomorphism, involutive, natural, and multiplicative
    for a in R2.objects:
        for b in R2.objects:
            ab = R2.tensor_obj[(a, b)]
            ba = R2.tensor_obj[(b, a)]
            s = (ab, ba, R2.symmetry[(a, b)])
            if len(s[2]) != R2.hom_dim(ab, ba):
                return failure("symmetry_bad_shape", a, b)
            sb = (ba, ab, R2.symmetry[(b, a)])
            if compose(R2, sb, s) != R2.identity(ab):
                return failure("symmetry_not_involutive", a, b)
    for f in basis:
        for g in basis:
            a, a2 = f[0], f[1]
            b, b2 = g[0], g[1]
            s1 = (R2.tensor_obj[(a, b)], R2.tensor_obj[(b, a)], R2.symmetry[(a, b)])
            s2 = (R2.tensor_obj[(a2, b2)], R2.tensor_obj[(b2, a2)], R2.symmetry[(a2, b2)])
            if compose(R2, s2, tensor(R2, f, g)) != compose(R2, tensor(R2, g, f), s1):
                return failure("symmetry_not_natural", R2.render(f), R2.render(g))
    for a in R2.objects:
        for b in R2.objects:
            for c in R2.objects:
                bc = R2.tensor_obj[(b, c)]
                lhs = (R2.tensor_obj[(a, bc)], R2.tensor_obj[(bc, a)], R2.symmetry[(a, bc)])
                first = tensor(R2, (R2.tensor_obj[(a, b)], R2.tensor_obj[(b, a)], R2.symmetry[(a, b)]),
                               R2.identity(c))
                second = tensor(R2, R2.identity(b),
                                (R2.tensor_obj[(a, c)], R2.tensor_obj[(c, a)], R2.symmetry[(a, c)]))
                if compose(R2, second, first) != lhs:
                    return failure("symmetry_not_multiplicative", a, b, c)
    return PASS


# -- translation oracle -----------------------------------------------


def is_translate(R2: TwoRingDatum, r, s) -> bool:
    """Whether s equals some twist of r framed by isomorphisms.

    Decided by exhaustive search: one object-level twist suffices, so s
    must factor as v after (g tensor r) after u with u, v invertible.
    """
    for g in R2.objects:
        tw = tensor(R2, R2.identity(g), r)
        for u in isomorphisms(R2, s[0], tw[0]):
            left = compose(R2, tw, u)
            for v in isomorphisms(R2, tw[1], s[1]):
                if compose(R2, v, left) == s:
                    return True
    return False


def translate_closure(R2: TwoRingDatum, base: Iterable) -> frozenset:
    """All morphisms that are translates of some member of base."""
    base = list(base)
    out = set()
    for m in R2.morphisms(include_zero=True):
        if any(is_translate(R2, b, m) for b in base):
            out.add(m)
    return frozenset(out)


def commutes_up_to_translate(R2: TwoRingDatum, r, s) -> bool:
    """The swapped composite of suitable translates recovers s after r."""
    target = compose(R2, s, r)
    for s2 in R2.morphisms(include_zero=True):
        if s2[0] != target[0] or not is_translate(R2, s, s2):
            continue
        for r2 in R2.homs(s2[1], target[1], include_zero=True):
            if is_translate(R2, r, r2) and compose(R2, r2, s2) == target:
                return True
    return False


def lemma_magic_check(R2: TwoRingDatum, a, b, w) -> bool:
    """Two-sided exchange of a unit endomorphism across a twist.

    For a, b from the unit into the same object and w an endomorphism
    of that object, composing with w on the target side agrees with
    composing on the source side with the conjugated unit endomorphism.
    Returns whether the two conditions have the same truth value.
    """
    if a[0] != R2.unit or b[0] != R2.unit or a[1] != b[1]:
        raise BadShapes("need two morphisms from the unit into one object")
    g = a[1]
    if w[0] != g or w[1] != g:
        raise BadShapes("need an endomorphism of the shared target")
    gi = None
    for cand in R2.objects:
        if R2.tensor_obj[(cand, g)] == R2.unit:
            gi = cand
            break
    if gi is None:
        for cand in R2.objects:
            if has_iso(R2, R2.tensor_obj[(cand, g)], R2.unit):
                gi = cand
                break
    if gi is None:
        raise BadShapes("no tensor inverse object found")
    tw = tensor(R2, R2.identity(gi), w)
    if tw[0] == R2.unit:
        w_unit = tw
    else:
        e = isomorphisms(R2, tw[0], R2.unit)[0]
        w_unit = compose(R2, e, compose(R2, tw, inverse_of(R2, e)))
    return (compose(R2, w, a) == b) == (compose(R2, a, w_unit) == b)


# -- categorical ideals and the spectrum ------------------------------


def _guard_size(R2: TwoRingDatum) -> None:
    if len(R2.objects) > MAX_OBJECTS:
        raise SizeBound("too many objects")
    if any(d > MAX_COMPONENT_DIM for d in R2.dims.values()):
        raise SizeBound("component dimension above the configured cap")


def ideal_generated_two(R2: TwoRingDatum, gens: Iterable) -> frozenset:
    """Smallest morphism class closed under sums, composition with
    anything on either side, and twists by every object."""
    by_comp: dict = {(a, b): set() for a in R2.objects for b in R2.objects}
    for (a, b, vec) in gens:
        if any(vec):
            by_comp[(a, b)].add(tuple(vec))
    basis = list(R2.basis_morphisms())
    changed = True
    while changed:
        changed = False
        for comp in by_comp:
            spanned = additive_span(R2.char, by_comp[comp], R2.dims[comp])
            nonzero = {v for v in spanned if any(v)}
            if nonzero != by_comp[comp]:
                by_comp[comp] = set(nonzero)
                changed = True
        for (a, b) in list(by_comp):
            for vec in list(by_comp[(a, b)]):
                m = (a, b, vec)
                produced = []
                for f in basis:
                    if f[0] == b:
                        produced.append(compose(R2, f, m))
                    if f[1] == a:
                        produced.append(compose(R2, m, f))
                for g in R2.objects:
                    produced.append(tensor(R2, R2.identity(g), m))
                    produced.append(tensor(R2, m, R2.identity(g)))
                for (x, y, w) in produced:
                    if any(w) and w not in by_comp[(x, y)]:
                        by_comp[(x, y)].add(w)
                        changed = True
    return frozenset((a, b, v) for (a, b), vs in by_comp.items() for v in vs)


def homogeneous_ideals(R2: TwoRingDatum) -> IdealLattice:
    """Every categorical ideal, generated as joins of principal ones."""
    _guard_size(R2)
    ideals = {frozenset()}
    for m in R2.morphisms():
        ideals.add(ideal_generated_two(R2, [m]))
    changed = True
    while changed:
        changed = False
        current = list(ideals)
        for a in current:
            for b in current:
                j = ideal_generated_two(R2, a | b)
                if j not in ideals:
                    ideals.add(j)
                    changed = True
    return IdealLattice(tuple(sorted(ideals, key=lambda i: (len(i), sorted(i)))))


def total_ideal_two(R2: TwoRingDatum) -> frozenset:
    return frozenset(R2.morphisms())


def is_prime_two(R2: TwoRingDatum, ideal: frozenset) -> bool:
    """Proper, and a composite inside forces a factor inside."""
    if ideal == total_ideal_two(R2):
        return False
    for r in R2.morphisms():
        if r in ideal:
            continue
        for s in R2.morphisms():
            if s in ideal or s[0] != r[1]:
                continue
            sr = compose(R2, s, r)
            if (not any(sr[2])) or sr in ideal:
                return False
    return True


def _mor_sort_key(R2: TwoRingDatum, m):
    a, b, vec = m
    oi = {o: k for k, o in enumerate(R2.objects)}
    return (0 if a == R2.unit else 1, oi[a], oi[b], vec)


def canonical_generators_two(R2: TwoRingDatum, ideal: frozenset) -> list:
    gens: list = []
    have: frozenset = frozenset()
    for m in sorted(ideal, key=lambda m: _mor_sort_key(R2, m)):
        if m not in have:
            gens.append(m)
            have = ideal_generated_two(R2, gens)
    return gens


def ideal_name_two(R2: TwoRingDatum, ideal: frozenset) -> str:
    gens = canonical_generators_two(R2, ideal)
    return "⟨" + ",".join(R2.render(g) for g in gens) + "⟩"


def spc_with_primes(R2: TwoRingDatum):
    """Prime spectrum with the name-to-ideal mapping."""
    primes = [i for i in homogeneous_ideals(R2) if is_prime_two(R2, i)]
    names = {ideal_name_two(R2, i): i for i in primes}
    if len(names) != len(primes):
        raise RingShapeError("prime naming collision")
    edges = [
        (a, b)
        for a, i in names.items()
        for b, j in names.items()
        if a != b and i < j
    ]
    return FiniteSpectralModel(names, edges), names


def spc(R2: TwoRingDatum) -> FiniteSpectralModel:
    """Prime spectrum as a finite spectral model; an edge p -> q means
    q lies in the closure of p, which here is inclusion of ideals."""
    model, _ = spc_with_primes(R2)
    return model


# -- tightenings ------------------------------------------------------


@dataclass
class Tightening:
    """A graded ring presented as the unit-sourced homs of a 2-ring.

    projection maps ring degrees onto object labels; representatives
    chooses one object per label in the image, the unit for the zero
    label; phi[x] is the matrix (rows index ring basis vectors of the
    degree-x component) of the identification of that component with
    the homs from the unit into the chosen representative.
    """

    name: str
    ring: MultigradedRing
    projection: dict
    representatives: dict
    phi: dict


def _matrix_invertible(p: int, rows: Sequence[Sequence[int]]) -> bool:
    n = len(rows)
    if any(len(r) != n for r in rows):
        return False
    m = [list(r) for r in rows]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] % p), None)
        if pivot is None:
            return False
        m[col], m[pivot] = m[pivot], m[col]
        inv = pow(m[col][col], p - 2, p)
        m[col] = [(inv * v) % p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                c = m[r][col]
                m[r] = [(v - c * w) % p for v, w in zip(m[r], m[col])]
    return True


def phi_apply(T: Tightening, R2: TwoRingDatum, elt):
    """Image of a homogeneous ring element as a unit-sourced morphism."""
    x, vec = elt
    target = T.representatives[T.projection[x]]
    rows = T.phi[x]
    out = vec_zero(R2.hom_dim(R2.unit, target))
    for c, row in zip(vec, rows):
        out = vec_add(R2.char, out, vec_scale(R2.char, c, row))
    return (R2.unit, target, out)


def _check_tightening_shapes(T: Tightening, R2: TwoRingDatum) -> None:
    ring = T.ring
    G = ring.group
    labels_present = {R2.labels[o] for o in R2.objects}
    for x in G.elements():
        if x not in T.projection:
            raise ShapeMismatch(f"projection misses degree {x}")
        if tuple(T.projection[x]) not in labels_present:
            raise ShapeMismatch(f"projection of {x} is not an object label")
    for x in G.elements():
        for y in G.elements():
            if T.projection[G.add(x, y)] != R2.group.add(T.projection[x], T.projection[y]):
                raise ShapeMismatch("projection is not a homomorphism")
    if {tuple(v) for v in T.projection.values()} != labels_present:
        raise ShapeMismatch("projection is not surjective onto the object labels")
    for lab in labels_present:
        if lab not in T.representatives:
            raise ShapeMismatch(f"no representative for label {lab}")
        rep = T.representatives[lab]
        if rep not in R2.labels or R2.labels[rep] != lab:
            raise ShapeMismatch(f"representative {rep!r} has the wrong label")
    if T.representatives[R2.group.zero] != R2.unit:
        raise ShapeMismatch("zero label must be represented by the unit object")
    for x in G.elements():
        rows = T.phi.get(x)
        if rows is None:
            raise ShapeMismatch(f"no component identification at degree {x}")
        target = T.representatives[T.projection[x]]
        want = R2.hom_dim(R2.unit, target)
        if len(rows) != ring.dims[x] or any(len(r) != want for r in rows):
            raise ShapeMismatch(f"identification at degree {x} has wrong shape")
        if ring.dims[x] != want or not (
            ring.dims[x] == 0 or _matrix_invertible(R2.char, rows)
        ):
            raise ShapeMismatch(f"identification at degree {x} is not bijective")


def _unit_mediator(R2: TwoRingDatum, g):
    """Canonical isomorphism from g to g tensor unit."""
    target = R2.tensor_obj[(g, R2.unit)]
    if target == g:
        return R2.identity(g)
    isos = isomorphisms(R2, g, target)
    if not isos:
        raise ShapeMismatch(f"no isomorphism from {g!r} to its unit tensor")
    return isos[0]


def validate_tightening(T: Tightening, R2: TwoRingDatum) -> Diagnosis:
    """Exhaustively check the two compatibility axioms.

    The first axiom asks the identification to turn products with a
    degree-zero element into composition with its unit endomorphism.
    The second asks the twisted composite of two identified elements to
    be a translate of the identified product; when the chosen
    representative is not strictly unital for the tensor, a canonical
    mediating isomorphism is inserted first.
    """
    d = validate_multigraded(T.ring)
    if not d:
        return d
    _check_tightening_shapes(T, R2)
    ring = T.ring
    G = ring.group
    zero = G.zero

    for x in G.elements():
        for r_vec in all_vectors(ring.char, ring.dims[x]):
            r = (x, r_vec)
            fr = phi_apply(T, R2, r)
            for s_vec in all_vectors(ring.char, ring.dims[zero]):
                s = (zero, s_vec)
                lhs = phi_apply(T, R2, mg_mul(ring, r, s))
                rhs = compose(R2, fr, phi_apply(T, R2, s))
                if lhs != rhs:
                    return failure("axiom1", x, ring.render(r), ring.render(s))

    for x in G.elements():
        for y in G.elements():
            for r_vec in all_vectors(ring.char, ring.dims[x]):
                if not any(r_vec):
                    continue
                r = (x, r_vec)
                fr = phi_apply(T, R2, r)
                g = T.representatives[T.projection[x]]
                med = _unit_mediator(R2, g)
                for s_vec in all_vectors(ring.char, ring.dims[y]):
                    if not any(s_vec):
                        continue
                    s = (y, s_vec)
                    fs = phi_apply(T, R2, s)
                    lhs = compose(R2, tensor(R2, R2.identity(g), fs),
                                  compose(R2, med, fr))
                    rhs = phi_apply(T, R2, mg_mul(ring, r, s))
                    if not is_translate(R2, lhs, rhs):
                        return failure("axiom2", x, y, ring.render(r), ring.render(s))
    return PASS


# -- the ideal correspondence -----------------------------------------


def extend_ideal(T: Tightening, R2: TwoRingDatum, ring_ideal: frozenset) -> frozenset:
    return ideal_generated_two(R2, [phi_apply(T, R2, e) for e in ring_ideal])


def restrict_ideal(T: Tightening, R2: TwoRingDatum, two_ideal: frozenset) -> frozenset:
    out = set()
    for e in T.ring.homogeneous_elements():
        if phi_apply(T, R2, e) in two_ideal:
            out.add(e)
    return frozenset(out)


def agreement(T: Tightening, R2: TwoRingDatum) -> Diagnosis:
    """Executable two-way ideal correspondence.

    Extension and restriction must be mutually inverse inclusion
    preserving bijections between the homogeneous ideal lattices, match
    primes with primes, and induce an order isomorphism of the two
    spectra, which for finite spectral models is a homeomorphism.
    """
    d = validate_tightening(T, R2)
    if not d:
        return d
    ring = T.ring
    lattice_r = ring_ideals(ring)
    lattice_2 = homogeneous_ideals(R2)
    set_2 = set(lattice_2.ideals)
    set_r = set(lattice_r.ideals)

    ext = {i: extend_ideal(T, R2, i) for i in lattice_r.ideals}
    res = {j: restrict_ideal(T, R2, j) for j in lattice_2.ideals}

    for i, j in ext.items():
        if j not in set_2:
            return failure("extension_not_ideal", sorted(i))
        if res[j] != i:
            return failure("round_trip_ring", sorted(i))
    for j, i in res.items():
        if i not in set_r:
            return failure("restriction_not_ideal", sorted(j))
        if ext[i] != j:
            return failure("round_trip_two", sorted(j))
    for i1 in lattice_r.ideals:
        for i2 in lattice_r.ideals:
            if (i1 <= i2) != (ext[i1] <= ext[i2]):
                return failure("inclusion_not_preserved", sorted(i1), sorted(i2))
    for i in lattice_r.ideals:
        if is_ring_prime(ring, i) != is_prime_two(R2, ext[i]):
            return failure("prime_not_preserved", sorted(i))

    model_r, names_r = spech_multigraded(ring)
    model_2, names_2 = spc_with_primes(R2)
    back_2 = {ideal: nm for nm, ideal in names_2.items()}
    point_map = {}
    for nm, ideal in names_r.items():
        image = ext[ideal]
        if image not in back_2:
            return failure("spectra_mismatch", nm)
        point_map[nm] = back_2[image]
    if len(set(point_map.values())) != len(model_2.points) or len(point_map) != len(model_r.points):
        return failure("spectra_mismatch", "point count")
    for p in model_r.points:
        for q in model_r.points:
            if model_r.specializes(p, q) != model_2.specializes(point_map[p], point_map[q]):
                return failure("spectra_mismatch", p, q)
    return PASS


# -- localization -----------------------------------------------------


def mult_closure_two(R2: TwoRingDatum, gens: Iterable = ()) -> frozenset:
    """Smallest morphism class with all isomorphisms, closed under
    composition and twists by every object."""
    members = set()
    for a in R2.objects:
        for b in R2.objects:
            members.update(isomorphisms(R2, a, b))
    members.update(tuple(m) for m in gens)
    changed = True
    while changed:
        changed = False
        for f in list(members):
            for g in list(members):
                if g[0] == f[1]:
                    c = compose(R2, g, f)
                    if c not in members:
                        members.add(c)
                        changed = True
            for obj in R2.objects:
                for t in (tensor(R2, R2.identity(obj), f), tensor(R2, f, R2.identity(obj))):
                    if t not in members:
                        members.add(t)
                        changed = True
    return frozenset(members)


@dataclass
class LocalizedTwoRing:
    """Fraction 2-ring together with its bookkeeping.

    datum is the resulting tabulated 2-ring.  classes maps a component
    to the ordered list of span classes; coords maps a component to a
    dict from class to coefficient tuple in the chosen basis; embed
    sends an original morphism to its class.
    """

    datum: TwoRingDatum
    system: frozenset
    classes: dict
    coords: dict

    def class_of_span(self, comp, span):
        for cls in self.classes[comp]:
            if span in cls:
                return cls
        raise RingShapeError("span not found in any class")

    def embed(self, mor):
        a, b, _ = mor
        return self.class_of_span((a, b), ((a, a, self.datum.identities[a]), mor))


def _span_classes(R2: TwoRingDatum, system: frozenset, max_spans: int):
    """Group spans by the dilation equivalence, per component."""
    spans = []
    for s in system:
        k, a, _ = s
        for b in R2.objects:
            for f in R2.homs(k, b, include_zero=True):
                spans.append(((a, b), (s, f)))
    if len(spans) > max_spans:
        raise SizeBound("too many spans")

    index = {}
    comp_spans: dict = {}
    for comp, sp in spans:
        comp_spans.setdefault(comp, []).append(sp)
        index[sp] = len(index)
    parent = list(range(len(index)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for comp, sp in spans:
        s, f = sp
        k = s[0]
        for k2 in R2.objects:
            for u in R2.homs(k2, k, include_zero=True):
                su = compose(R2, s, u)
                if su in system:
                    union(index[sp], index[(su, compose(R2, f, u))])

    classes: dict = {}
    for comp, sps in comp_spans.items():
        groups: dict = {}
        for sp in sps:
            groups.setdefault(find(index[sp]), set()).add(sp)
        ordered = sorted((frozenset(g) for g in groups.values()), key=lambda c: sorted(c))
        classes[comp] = ordered
    for a in R2.objects:
        for b in R2.objects:
            classes.setdefault((a, b), [])
    return classes


def _find_class(classes, comp, span):
    for cls in classes[comp]:
        if span in cls:
            return cls
    raise RingShapeError(f"span {span!r} missing from component {comp}")


def _span_add(R2: TwoRingDatum, system: frozenset, classes, comp, cls_a, cls_b):
    """Add two span classes via an exhaustively found common dilation."""
    (s, f) = min(cls_a)
    (t, g) = min(cls_b)
    k, l = s[0], t[0]
    for m in R2.objects:
        for u in R2.homs(m, k, include_zero=True):
            su = compose(R2, s, u)
            if su not in system:
                continue
            for v in R2.homs(m, l, include_zero=True):
                if compose(R2, t, v) != su:
                    continue
                summed = (su, mor_add(R2, compose(R2, f, u), compose(R2, g, v)))
                return _find_class(classes, comp, summed)
    raise RingShapeError("no common dilation for span addition")


def _span_scale(R2: TwoRingDatum, classes, comp, c: int, cls):
    (s, f) = min(cls)
    return _find_class(classes, comp, (s, mor_scale(R2, c, f)))


def _span_compose(R2: TwoRingDatum, system: frozenset, classes, first, second):
    """Composite of spans (second after first) via an exchange square."""
    (s, f) = first    # from a: s: k -> a, f: k -> b
    (t, g) = second   # from b: t: l -> b, g: l -> c
    k, l = s[0], t[0]
    for m in R2.objects:
        for t2 in R2.homs(m, k, include_zero=True):
            if t2 not in system:
                continue
            ft2 = compose(R2, f, t2)
            st2 = compose(R2, s, t2)
            if st2 not in system:
                continue
            for f2 in R2.homs(m, l, include_zero=True):
                if compose(R2, t, f2) != ft2:
                    continue
                comp = (st2[1], compose(R2, g, f2)[1])
                return _find_class(classes, comp, (st2, compose(R2, g, f2)))
    raise RingShapeError("no exchange square for span composition")


def localize_with_classes(R2: TwoRingDatum, S: Iterable, max_spans: int = 20000) -> LocalizedTwoRing:
    """Fraction 2-ring at the closure of S, with bookkeeping retained."""
    _guard_size(R2)
    system = mult_closure_two(R2, S)
    classes = _span_classes(R2, system, max_spans)

    p = R2.char
    dims = {}
    coords: dict = {}
    basis_classes: dict = {}
    for comp, cls_list in classes.items():
        a, b = comp
        zero_cls = _find_class(classes, comp, (R2.identity(a), R2.zero_mor(a, b))) if cls_list else None
        n = len(cls_list)
        d = 0
        while p ** d < n:
            d += 1
        if n and p ** d != n:
            raise RingShapeError(f"component {comp} has {n} classes, not a power of {p}")
        chosen: list = []
        span_map = {(): zero_cls} if cls_list else {}
        for cls in cls_list:
            if len(chosen) == d:
                break
            if cls in span_map.values():
                continue
            trial = chosen + [cls]
            new_map = {}
            ok = True
            for coeffs in itertools.product(range(p), repeat=len(trial)):
                acc = zero_cls
                for c, bc in zip(coeffs, trial):
                    if c:
                        acc = _span_add(R2, system, classes, comp, acc,
                                        _span_scale(R2, classes, comp, c, bc))
                if acc in new_map.values():
                    ok = False
                    break
                new_map[coeffs] = acc
            if ok:
                chosen = trial
                span_map = new_map
        if len(chosen) != d:
            raise RingShapeError(f"no basis found for component {comp}")
        dims[comp] = d
        basis_classes[comp] = chosen
        coords[comp] = {cls: coeffs for coeffs, cls in span_map.items()}

    def coords_of(comp, cls):
        return coords[comp][cls]

    objects = R2.objects
    compose_tables = {}
    for a in objects:
        for b in objects:
            for c in objects:
                if dims[(a, b)] == 0 or dims[(b, c)] == 0:
                    continue
                rows = []
                for cls_f in basis_classes[(a, b)]:
                    row = []
                    for cls_g in basis_classes[(b, c)]:
                        out = _span_compose(R2, system, classes, min(cls_f), min(cls_g))
                        row.append(coords_of((a, c), out))
                    rows.append(tuple(row))
                compose_tables[(a, b, c)] = tuple(rows)

    tensor_tables = {}
    for a in objects:
        for b in objects:
            for c in objects:
                for d_ in objects:
                    if dims[(a, b)] == 0 or dims[(c, d_)] == 0:
                        continue
                    src = R2.tensor_obj[(a, c)]
                    dst = R2.tensor_obj[(b, d_)]
                    rows = []
                    for cls_f in basis_classes[(a, b)]:
                        (s, f) = min(cls_f)
                        row = []
                        for cls_g in basis_classes[(c, d_)]:
                            (t, g) = min(cls_g)
                            sp = (tensor(R2, s, t), tensor(R2, f, g))
                            if sp[0] not in system:
                                raise RingShapeError("tensor of denominators left the system")
                            out = _find_class(classes, (src, dst), sp)
                            row.append(coords_of((src, dst), out))
                        rows.append(tuple(row))
                    tensor_tables[(a, b, c, d_)] = tuple(rows)

    identities = {}
    for a in objects:
        cls = _find_class(classes, (a, a), (R2.identity(a), R2.identity(a)))
        identities[a] = coords_of((a, a), cls)
    symmetry = {}
    for a in objects:
        for b in objects:
            ab = R2.tensor_obj[(a, b)]
            ba = R2.tensor_obj[(b, a)]
            s_old = (ab, ba, R2.symmetry[(a, b)])
            cls = _find_class(classes, (ab, ba), (R2.identity(ab), s_old))
            symmetry[(a, b)] = coords_of((ab, ba), cls)

    realized = {
        R2.group.sub(R2.labels[b], R2.labels[a])
        for (a, b), d in dims.items()
        if d > 0
    }
    support = R2.group.submonoid_closure(realized)

    basis_names = {
        comp: tuple(f"q{i}" for i in range(dims[comp]))
        for comp in dims
    }
    datum = TwoRingDatum(
        name=f"{R2.name}_loc",
        group=R2.group,
        char=R2.char,
        objects=objects,
        labels=dict(R2.labels),
        unit=R2.unit,
        support=support,
        dims=dims,
        basis_names=basis_names,
        compose_tables=compose_tables,
        tensor_obj=dict(R2.tensor_obj),
        tensor_tables=tensor_tables,
        identities=identities,
        symmetry=symmetry,
    )
    return LocalizedTwoRing(datum=datum, system=system, classes=classes, coords=coords)


def localize(R2: TwoRingDatum, S: Iterable, max_spans: int = 20000) -> TwoRingDatum:
    """Fraction 2-ring of R2 at the multiplicative closure of S.

    Homs are dilation classes of spans with the backward leg in the
    closed system; the result is returned as a plain datum.
    """
    return localize_with_classes(R2, S, max_spans).datum


# -- localization against the ring side -------------------------------


def extend_system(T: Tightening, R2: TwoRingDatum, ring_system: Iterable) -> frozenset:
    return mult_closure_two(R2, (phi_apply(T, R2, e) for e in ring_system))


def restrict_system(T: Tightening, R2: TwoRingDatum, two_system: frozenset) -> frozenset:
    # Zero elements matter here: a closed system that contains zero
    # (inverting a nilpotent) restricts to one that contains zero too.
    out = set()
    for e in T.ring.homogeneous_elements(include_zero=True):
        if phi_apply(T, R2, e) in two_system:
            out.add(e)
    return frozenset(out)


def localization_agreement(T: Tightening, R2: TwoRingDatum, S: Iterable) -> Diagnosis:
    """Fractions on the ring side match fractions on the 2-ring side.

    Checks three things exhaustively: the generated system equals the
    translate closure of the identified generators; restriction after
    extension recovers the ring system; and for every degree the
    identification carries ring fraction classes bijectively and
    additively onto the localized unit-sourced homs.
    """
    d = validate_tightening(T, R2)
    if not d:
        return d
    from .multigraded import ring_fractions  # local import to keep the top tidy

    ring = T.ring
    Sr = mult_system_ring(ring, S)
    e_gen = extend_system(T, R2, Sr)
    e_tr = translate_closure(R2, [phi_apply(T, R2, e) for e in Sr])
    if e_gen != e_tr:
        return failure("translate_closure_differs",
                       len(e_gen), len(e_tr))
    if restrict_system(T, R2, e_gen) != Sr:
        return failure("system_round_trip")

    loc = localize_with_classes(R2, e_gen)
    fr = ring_fractions(ring, Sr)

    for x in ring.group.elements():
        gx = T.representatives[T.projection[x]]
        comp = (R2.unit, gx)
        mapped: dict = {}
        for cls in fr.classes[x]:
            images = set()
            for (num, den) in cls:
                images.add(_identify_fraction(T, R2, loc, num, den))
            if len(images) != 1:
                return failure("identification_not_well_defined", x)
            mapped[cls] = images.pop()
        if len(set(mapped.values())) != len(mapped):
            return failure("identification_not_injective", x)
        if set(mapped.values()) != set(loc.classes[comp]):
            return failure("identification_not_surjective", x)
        for c1 in fr.classes[x]:
            for c2 in fr.classes[x]:
                lhs = mapped[fr.add(c1, c2)]
                rhs = _span_add(R2, loc.system, loc.classes, comp, mapped[c1], mapped[c2])
                if lhs != rhs:
                    return failure("identification_not_additive", x)
    return PASS


def _identify_fraction(T: Tightening, R2: TwoRingDatum, loc: LocalizedTwoRing, num, den):
    """Span class of a ring fraction under the tightened identification."""
    ring = T.ring
    y, z = num[0], den[0]
    x = ring.group.sub(y, z)
    gz = T.representatives[T.projection[z]]
    gzinv = None
    for cand in R2.objects:
        if R2.tensor_obj[(cand, gz)] == R2.unit:
            gzinv = cand
            break
    if gzinv is None:
        raise ShapeMismatch(f"no strict tensor inverse for {gz!r}")
    s_leg = tensor(R2, R2.identity(gzinv), phi_apply(T, R2, den))
    r_leg = tensor(R2, R2.identity(gzinv), phi_apply(T, R2, num))
    gx = T.representatives[T.projection[x]]
    if r_leg[1] != gx:
        key = ("mediator", r_leg[1], gx)
        if key not in R2._cache:
            isos = isomorphisms(R2, r_leg[1], gx)
            if not isos:
                raise ShapeMismatch(f"no isomorphism from {r_leg[1]!r} to {gx!r}")
            R2._cache[key] = isos[0]
        r_leg = compose(R2, R2._cache[key], r_leg)
    if s_leg not in loc.system:
        raise RingShapeError("identified denominator left the system")
    return loc.class_of_span((R2.unit, gx), (s_leg, r_leg))


# -- restriction to a support submonoid -------------------------------


def restrict_submonoid(R2: TwoRingDatum, M: Iterable):
    """Sub-2-ring on the objects labeled inside M, with the trace map.

    Returns the restricted datum and the mapping from each spectrum
    point of the input to the point of the restriction cut out by
    intersecting the prime with the restricted morphisms.  In a finite
    grading group every submonoid is a subgroup, so the restriction
    keeps every hom between the objects it keeps.
    """
    try:
        mset = {R2.group.canon(m) for m in M}
    except (RingShapeError, TypeError) as exc:
        raise NotSubmonoid(str(exc))
    if R2.group.zero not in mset:
        raise NotSubmonoid("missing the identity label")
    for a in mset:
        for b in mset:
            if R2.group.add(a, b) not in mset:
                raise NotSubmonoid(f"not closed under addition at {a} + {b}")

    keep = tuple(o for o in R2.objects if R2.labels[o] in mset)
    keepset = set(keep)
    restricted = TwoRingDatum(
        name=f"{R2.name}_res",
        group=R2.group,
        char=R2.char,
        objects=keep,
        labels={o: R2.labels[o] for o in keep},
        unit=R2.unit,
        support=R2.support & frozenset(mset),
        dims={(a, b): R2.dims[(a, b)] for a in keep for b in keep},
        basis_names={(a, b): R2.basis_names[(a, b)] for a in keep for b in keep},
        compose_tables={k: v for k, v in R2.compose_tables.items() if set(k) <= keepset},
        tensor_obj={k: v for k, v in R2.tensor_obj.items() if set(k) <= keepset},
        tensor_tables={k: v for k, v in R2.tensor_tables.items() if set(k) <= keepset},
        identities={o: R2.identities[o] for o in keep},
        symmetry={k: v for k, v in R2.symmetry.items() if set(k) <= keepset},
    )

    _, full_primes = spc_with_primes(R2)
    _, res_primes = spc_with_primes(restricted)
    back = {ideal: nm for nm, ideal in res_primes.items()}
    point_map = {}
    for nm, ideal in full_primes.items():
        trace = frozenset(m for m in ideal if m[0] in keepset and m[1] in keepset)
        if trace not in back:
            raise RingShapeError(f"trace of {nm} is not a prime of the restriction")
        point_map[nm] = back[trace]
    return restricted, point_map


def restriction_localization_check(R2: TwoRingDatum, M: Iterable, S: Iterable) -> Diagnosis:
    """Restriction commutes with localization on the kept components.

    S must consist of morphisms of the restriction.  Both sides are
    localized and the canonical span-to-span comparison must be
    bijective on every kept component; since finite submonoids are
    subgroups, every kept label difference stays in the localized
    support, so full components must match exactly.
    """
    restricted, _ = restrict_submonoid(R2, M)
    S = [tuple(m) for m in S]
    for m in S:
        if m[0] not in restricted.objects or m[1] not in restricted.objects:
            return failure("system_outside_restriction", m)
    loc_res = localize_with_classes(restricted, S)
    loc_full = localize_with_classes(R2, S)
    for a in restricted.objects:
        for b in restricted.objects:
            sub_classes = loc_res.classes[(a, b)]
            full_classes = loc_full.classes[(a, b)]
            image = []
            for cls in sub_classes:
                rep = min(cls)
                image.append(_find_class(loc_full.classes, (a, b), rep))
            if len(set(image)) != len(sub_classes):
                return failure("restricted_localization_not_injective", a, b)
            if len(sub_classes) != len(full_classes):
                return failure("restricted_localization_dims", a, b,
                               len(sub_classes), len(full_classes))
    return PASS
