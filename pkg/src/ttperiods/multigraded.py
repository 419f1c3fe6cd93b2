"""Commutative rings graded by a finite abelian group, with sign tables.

A ring here is a finite tabulated object: each graded component is a
finite dimensional vector space over a prime field, multiplication is
given by structure constants, and commutativity is twisted by a
symmetric bilinear transposition table valued in the units of the
degree-zero component.  Everything downstream (ideal lattices, spectra,
fraction localization) is decided by exhaustive enumeration, so
component dimensions are capped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .diagnostics import Diagnosis, PASS, failure
from .spaces import FiniteSpectralModel

MAX_COMPONENT_DIM = 3


class SizeBound(Exception):
    """Enumeration would exceed the configured finite limits."""


class RingShapeError(Exception):
    """Structurally malformed ring data (bad tables, unknown names)."""


# -- the grading group ------------------------------------------------


@dataclass(frozen=True)
class AbelianGroup:
    """Finite abelian group presented as a product of cyclic factors."""

    orders: tuple[int, ...]

    def __post_init__(self):
        if not self.orders or any(n < 1 for n in self.orders):
            raise RingShapeError("cyclic factor orders must be positive")

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.orders)

    def canon(self, x) -> tuple[int, ...]:
        """Accept an int (single factor) or a tuple, reduce mod orders."""
        if isinstance(x, int):
            x = (x,)
        x = tuple(x)
        if len(x) != len(self.orders):
            raise RingShapeError(f"degree {x!r} has wrong rank")
        return tuple(a % n for a, n in zip(x, self.orders))

    def elements(self) -> list[tuple[int, ...]]:
        return [tuple(t) for t in itertools.product(*(range(n) for n in self.orders))]

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def neg(self, a) -> tuple[int, ...]:
        return tuple((-x) % n for x, n in zip(a, self.orders))

    def sub(self, a, b) -> tuple[int, ...]:
        return tuple((x - y) % n for x, y, n in zip(a, b, self.orders))

    def order(self) -> int:
        n = 1
        for k in self.orders:
            n *= k
        return n

    def submonoid_closure(self, gens: Iterable[tuple[int, ...]]) -> frozenset:
        """Smallest subset containing zero and closed under addition.

        In a finite group this is automatically a subgroup.
        """
        out = {self.zero}
        frontier = [self.canon(g) for g in gens]
        out.update(frontier)
        changed = True
        while changed:
            changed = False
            for a in list(out):
                for b in list(out):
                    c = self.add(a, b)
                    if c not in out:
                        out.add(c)
                        changed = True
        return frozenset(out)


# -- vectors over the prime field -------------------------------------


def vec_zero(dim: int) -> tuple[int, ...]:
    return (0,) * dim

def vec_add(p: int, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    return tuple((a + b) % p for a, b in zip(u, v))

def vec_scale(p: int, c: int, u: Sequence[int]) -> tuple[int, ...]:
    return tuple((c * a) % p for a in u)

def all_vectors(p: int, dim: int):
    return itertools.product(range(p), repeat=dim)


def additive_span(p: int, vectors: Iterable[Sequence[int]], dim: int) -> frozenset:
    """All sums of the given vectors; includes zero."""
    out = {vec_zero(dim)}
    gens = [tuple(v) for v in vectors]
    changed = True
    while changed:
        changed = False
        for v in list(out):
            for g in gens:
                w = vec_add(p, v, g)
                if w not in out:
                    out.add(w)
                    changed = True
    return frozenset(out)


def render_combo(names: Sequence[str], vec: Sequence[int]) -> str:
    """Linear combination as a short string: "x", "2y", "x+2y", "0"."""
    parts = []
    for c, nm in zip(vec, names):
        if c == 0:
            continue
        parts.append(nm if c == 1 else f"{c}{nm}")
    return "+".join(parts) if parts else "0"


# -- the ring ---------------------------------------------------------


@dataclass
class MultigradedRing:
    """Tabulated graded-commutative ring over a prime field.

    dims, basis_names and tau are total over the group; products carries
    a table for every degree pair whose two components are nonzero.  The
    table entry products[(x, y)][i][j] is the coefficient vector of
    (basis_i of R_x) * (basis_j of R_y) inside R_{x+y}.  one is the
    multiplicative identity inside the degree-zero component, the empty
    vector for the zero ring.
    """

    name: str
    group: AbelianGroup
    char: int
    dims: dict
    basis_names: dict
    products: dict
    tau: dict
    one: tuple[int, ...]

    def degree_dim(self, x) -> int:
        return self.dims.get(tuple(x), 0)

    def is_zero_ring(self) -> bool:
        return all(d == 0 for d in self.dims.values())

    def homogeneous_elements(self, include_zero: bool = False):
        """All (degree, vector) pairs, nonzero vectors unless asked."""
        for x in self.group.elements():
            for vec in all_vectors(self.char, self.dims[x]):
                if include_zero or any(vec):
                    yield (x, vec)

    def render(self, elt) -> str:
        x, vec = elt
        return render_combo(self.basis_names[tuple(x)], vec)


def mg_mul(ring: MultigradedRing, a, b):
    """Product of homogeneous elements, as (degree, vector)."""
    (x, u), (y, v) = a, b
    z = ring.group.add(x, y)
    p = ring.char
    out = [0] * ring.dims[z]
    table = ring.products.get((x, y))
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
    return (z, tuple(out))


def mg_scale(ring: MultigradedRing, c: int, a):
    x, u = a
    return (x, vec_scale(ring.char, c, u))


def _tau_scalar_mul(ring: MultigradedRing, t, a):
    """Multiply a homogeneous element by a degree-zero value."""
    return mg_mul(ring, ((ring.group.zero), t), a)


def make_multigraded(
    name: str,
    orders: Sequence[int],
    char: int,
    components: Mapping = (),
    products: Mapping = (),
    tau_eps=1,
    one_name: str = "1",
) -> MultigradedRing:
    """Build a ring from sparse, human-readable tables.

    components maps a degree to its basis names; basis names must be
    globally unique.  products maps unordered non-identity name pairs to
    a combination (None for zero, a name, or a name-to-coefficient
    mapping); products with the identity are filled in automatically and
    the transposed entries come from the transposition table.  tau_eps
    gives the transposition sign on each pair of cyclic generators,
    either a single unit for rank-one groups or a mapping on factor
    index pairs; it is extended bilinearly.
    """
    group = AbelianGroup(tuple(orders))
    comp = {}
    for deg, names in dict(components).items():
        d = group.canon(deg)
        if d in comp:
            raise RingShapeError(f"degree {d} listed twice")
        comp[d] = tuple(names)
    dims = {x: len(comp.get(x, ())) for x in group.elements()}
    basis_names = {x: comp.get(x, ()) for x in group.elements()}
    if any(d > MAX_COMPONENT_DIM for d in dims.values()):
        raise SizeBound("component dimension above the configured cap")

    where = {}
    for x, names in basis_names.items():
        for i, nm in enumerate(names):
            if nm in where:
                raise RingShapeError(f"basis name {nm!r} reused")
            where[nm] = (x, i)

    def combo_vec(degree, spec) -> tuple[int, ...]:
        out = [0] * dims[degree]
        if spec is None or spec == 0:
            return tuple(out)
        if isinstance(spec, str):
            spec = {spec: 1}
        for nm, c in dict(spec).items():
            x, i = where[nm]
            if x != degree:
                raise RingShapeError(f"{nm!r} is not in degree {degree}")
            out[i] = c % char
        return tuple(out)

    # Transposition table, extended bilinearly from generator signs.
    rank = len(group.orders)
    if isinstance(tau_eps, int):
        eps = {(i, j): (tau_eps if i == j == 0 else 1) for i in range(rank) for j in range(rank)}
        if rank > 1 and tau_eps != 1:
            raise RingShapeError("give tau_eps as a mapping for rank above one")
    else:
        eps = {(i, j): 1 for i in range(rank) for j in range(rank)}
        for (i, j), e in dict(tau_eps).items():
            eps[(i, j)] = e
            eps[(j, i)] = e
    for (i, j), e in eps.items():
        if pow(e % char, group.orders[i], char) != 1 % char:
            raise RingShapeError("transposition sign incompatible with factor order")

    def tau_scalar(x, y) -> int:
        s = 1
        for i, xi in enumerate(x):
            for j, yj in enumerate(y):
                s = (s * pow(eps[(i, j)] % char, xi * yj, char)) % char
        return s

    zero_deg = group.zero
    if one_name in where:
        ox, oi = where[one_name]
        if ox != zero_deg:
            raise RingShapeError("identity must sit in degree zero")
        one = tuple(1 if i == oi else 0 for i in range(dims[zero_deg]))
    elif dims[zero_deg] == 0:
        one = ()
    else:
        raise RingShapeError("no identity named in degree zero")

    tau = {}
    for x in group.elements():
        for y in group.elements():
            tau[(x, y)] = vec_scale(char, tau_scalar(x, y), one)

    # Raw pair products: identity entries are implied, the rest must be
    # given in at least one order; the other order follows from tau.
    given = {}
    for (na, nb), spec in dict(products).items():
        for nm in (na, nb):
            if nm not in where:
                raise RingShapeError(f"unknown name {nm!r} in products")
        target = group.add(where[na][0], where[nb][0])
        given[(na, nb)] = combo_vec(target, spec)

    def pair_product(na, nb) -> tuple[int, ...]:
        xa, ia = where[na]
        xb, ib = where[nb]
        target = group.add(xa, xb)
        if na == one_name:
            return tuple(1 if i == ib else 0 for i in range(dims[target]))
        if nb == one_name:
            return tuple(1 if i == ia else 0 for i in range(dims[target]))
        if (na, nb) in given:
            return given[(na, nb)]
        if (nb, na) in given:
            # a*b = tau(|a|,|b|) * (b*a)
            return vec_scale(char, tau_scalar(xa, xb), given[(nb, na)])
        raise RingShapeError(f"product of {na!r} and {nb!r} not specified")

    tables = {}
    for x in group.elements():
        for y in group.elements():
            if dims[x] == 0 or dims[y] == 0:
                continue
            tables[(x, y)] = tuple(
                tuple(pair_product(basis_names[x][i], basis_names[y][j]) for j in range(dims[y]))
                for i in range(dims[x])
            )

    return MultigradedRing(
        name=name, group=group, char=char, dims=dims,
        basis_names=basis_names, products=tables, tau=tau, one=one,
    )


# -- validation -------------------------------------------------------


def _is_prime_int(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def degree_zero_units(ring: MultigradedRing) -> list:
    """Invertible elements of the degree-zero component."""
    z = ring.group.zero
    one = (z, ring.one)
    out = []
    for u in all_vectors(ring.char, ring.dims[z]):
        for v in all_vectors(ring.char, ring.dims[z]):
            if mg_mul(ring, (z, u), (z, v)) == one:
                out.append((z, u))
                break
    return out


def validate_multigraded(ring: MultigradedRing) -> Diagnosis:
    """Exhaustive structural check of the ring tables.

    Checks the identity, associativity, and the transposition table:
    unit values, symmetry, bilinearity, and the twisted commutation law
    on every homogeneous pair.  Components are already additive by
    construction, so bilinearity of the product tables is free.
    """
    if not _is_prime_int(ring.char):
        return failure("char_not_prime", ring.char)
    z = ring.group.zero
    if len(ring.one) != ring.dims[z]:
        return failure("bad_identity_shape")
    if ring.is_zero_ring():
        return PASS

    one = (z, ring.one)
    elements = list(ring.homogeneous_elements())
    for e in elements:
        if mg_mul(ring, one, e) != e or mg_mul(ring, e, one) != e:
            return failure("identity_fails_on", ring.render(e))

    basis = []
    for x in ring.group.elements():
        for i in range(ring.dims[x]):
            basis.append((x, tuple(1 if k == i else 0 for k in range(ring.dims[x]))))
    for a in basis:
        for b in basis:
            for c in basis:
                if mg_mul(ring, mg_mul(ring, a, b), c) != mg_mul(ring, a, mg_mul(ring, b, c)):
                    return failure("not_associative", ring.render(a), ring.render(b), ring.render(c))

    units = {e for e in degree_zero_units(ring)}
    for x in ring.group.elements():
        for y in ring.group.elements():
            t = ring.tau[(x, y)]
            if (z, t) not in units:
                return failure("transposition_not_unit", x, y)
            if ring.tau[(y, x)] != t:
                return failure("transposition_not_symmetric", x, y)
    for x in ring.group.elements():
        for y in ring.group.elements():
            for w in ring.group.elements():
                lhs = (z, ring.tau[(ring.group.add(x, y), w)])
                rhs = mg_mul(ring, (z, ring.tau[(x, w)]), (z, ring.tau[(y, w)]))
                if lhs != rhs:
                    return failure("transposition_not_bilinear", x, y, w)
    if ring.tau[(z, z)] != ring.one:
        return failure("transposition_not_unital")

    for a in basis:
        for b in basis:
            lhs = mg_mul(ring, a, b)
            rhs = _tau_scalar_mul(ring, ring.tau[(a[0], b[0])], mg_mul(ring, b, a))
            if lhs != rhs:
                return failure("commutation_fails", ring.render(a), ring.render(b))
    return PASS


# -- homogeneous ideals -----------------------------------------------
#
# An ideal is stored as the frozenset of its nonzero homogeneous
# members (degree, vector); componentwise these are subspaces closed
# under multiplication by every homogeneous element.


def ideal_generated_ring(ring: MultigradedRing, gens: Iterable) -> frozenset:
    by_degree: dict = {x: set() for x in ring.group.elements()}
    for (x, vec) in gens:
        if any(vec):
            by_degree[tuple(x)].add(tuple(vec))
    basis = list(ring.homogeneous_elements())
    changed = True
    while changed:
        changed = False
        for x in ring.group.elements():
            spanned = additive_span(ring.char, by_degree[x], ring.dims[x])
            nonzero = {v for v in spanned if any(v)}
            if nonzero != by_degree[x]:
                by_degree[x] = set(nonzero)
                changed = True
        for x in list(ring.group.elements()):
            for vec in list(by_degree[x]):
                m = (x, vec)
                for b in basis:
                    for prod in (mg_mul(ring, b, m), mg_mul(ring, m, b)):
                        (y, w) = prod
                        if any(w) and w not in by_degree[y]:
                            by_degree[y].add(w)
                            changed = True
    return frozenset((x, v) for x, vs in by_degree.items() for v in vs)


def _ideal_sort_key(ideal: frozenset):
    return (len(ideal), sorted(ideal))


@dataclass(frozen=True)
class IdealLattice:
    """All ideals of a finite tabulated ring or 2-ring, ordered by size.

    Each ideal is a frozenset of members, so inclusion is subset order;
    the full lattice structure (joins, covers, maximal elements) is
    recovered from that.
    """

    ideals: tuple

    def __iter__(self):
        return iter(self.ideals)

    def __len__(self):
        return len(self.ideals)

    def bottom(self) -> frozenset:
        return self.ideals[0]

    def top(self) -> frozenset:
        return self.ideals[-1]

    def leq_pairs(self) -> list:
        out = []
        for a in self.ideals:
            for b in self.ideals:
                if a <= b:
                    out.append((a, b))
        return out

    def maximal_proper(self) -> list:
        top = self.top()
        proper = [i for i in self.ideals if i != top]
        return [i for i in proper if not any(i < j for j in proper)]


def ring_ideals(ring: MultigradedRing) -> IdealLattice:
    """Every homogeneous ideal, as joins of principal ideals."""
    if any(d > MAX_COMPONENT_DIM for d in ring.dims.values()):
        raise SizeBound("component dimension above the configured cap")
    ideals = {frozenset()}
    for e in ring.homogeneous_elements():
        ideals.add(ideal_generated_ring(ring, [e]))
    changed = True
    while changed:
        changed = False
        current = list(ideals)
        for a in current:
            for b in current:
                j = ideal_generated_ring(ring, a | b)
                if j not in ideals:
                    ideals.add(j)
                    changed = True
    return IdealLattice(tuple(sorted(ideals, key=_ideal_sort_key)))


def ring_total_ideal(ring: MultigradedRing) -> frozenset:
    return frozenset(ring.homogeneous_elements())


def is_ring_prime(ring: MultigradedRing, ideal: frozenset) -> bool:
    """Proper, and rs inside forces r or s inside (homogeneous pairs)."""
    if ideal == ring_total_ideal(ring):
        return False
    for r in ring.homogeneous_elements():
        if r in ideal:
            continue
        for s in ring.homogeneous_elements():
            if s in ideal:
                continue
            prod = mg_mul(ring, r, s)
            if (not any(prod[1])) or prod in ideal:
                return False
    return True


def ring_primes(ring: MultigradedRing) -> list:
    return [i for i in ring_ideals(ring) if is_ring_prime(ring, i)]


def canonical_generators_ring(ring: MultigradedRing, ideal: frozenset) -> list:
    """Deterministic small generating set, scanned in element order."""
    gens: list = []
    have: frozenset = frozenset()
    for e in sorted(ideal):
        if e not in have:
            gens.append(e)
            have = ideal_generated_ring(ring, gens)
    return gens


def ideal_name_ring(ring: MultigradedRing, ideal: frozenset) -> str:
    gens = canonical_generators_ring(ring, ideal)
    return "⟨" + ",".join(ring.render(g) for g in gens) + "⟩"


def spech_multigraded(ring: MultigradedRing):
    """Homogeneous prime spectrum as a finite spectral model.

    Returns the model plus the point-name-to-ideal mapping.  An edge
    p -> q means q lies in the closure of p, which for primes is the
    inclusion p inside q.
    """
    primes = ring_primes(ring)
    names = {ideal_name_ring(ring, i): i for i in primes}
    if len(names) != len(primes):
        raise RingShapeError("prime naming collision")
    edges = [
        (a, b)
        for a, i in names.items()
        for b, j in names.items()
        if a != b and i < j
    ]
    return FiniteSpectralModel(names, edges), names


# -- multiplicative systems and fractions -----------------------------


def homogeneous_units(ring: MultigradedRing) -> list:
    z = ring.group.zero
    one = (z, ring.one)
    out = []
    if ring.is_zero_ring():
        return out
    for u in ring.homogeneous_elements():
        for v in ring.homogeneous_elements():
            if mg_mul(ring, u, v) == one and mg_mul(ring, v, u) == one:
                out.append(u)
                break
    return out


def mult_system_ring(ring: MultigradedRing, gens: Iterable = ()) -> frozenset:
    """Close the generators and all homogeneous units under products."""
    members = set(homogeneous_units(ring))
    members.update((tuple(x), tuple(v)) for x, v in gens)
    changed = True
    while changed:
        changed = False
        for a in list(members):
            for b in list(members):
                c = mg_mul(ring, a, b)
                if c not in members:
                    members.add(c)
                    changed = True
    return frozenset(members)


@dataclass
class RingFractions:
    """Degreewise fraction classes of a ring at a multiplicative system.

    A fraction is a pair (numerator, denominator) of homogeneous
    elements with the denominator in the system; its degree is the
    difference.  Two fractions are identified when a chain of common
    dilations connects them.  classes maps each degree to the list of
    classes, each class a frozenset of fraction pairs.
    """

    ring: MultigradedRing
    system: frozenset
    classes: dict

    def class_of(self, frac):
        x = self.ring.group.sub(frac[0][0], frac[1][0])
        for cls in self.classes[x]:
            if frac in cls:
                return cls
        raise RingShapeError(f"fraction {frac!r} not found")

    def zero_class(self, degree):
        s = min(self.system)
        num_deg = self.ring.group.add(tuple(degree), s[0])
        return self.class_of(((num_deg, vec_zero(self.ring.dims[num_deg])), s))

    def add(self, cls_a, cls_b):
        """Class addition via an exhaustively found common denominator."""
        ra, sa = min(cls_a)
        rb, sb = min(cls_b)
        for t in self.ring.homogeneous_elements(include_zero=True):
            for t2 in self.ring.homogeneous_elements(include_zero=True):
                da = mg_mul(self.ring, sa, t)
                if da not in self.system:
                    continue
                if mg_mul(self.ring, sb, t2) != da:
                    continue
                na = mg_mul(self.ring, ra, t)
                nb = mg_mul(self.ring, rb, t2)
                if na[0] != nb[0]:
                    continue
                return self.class_of(((na[0], vec_add(self.ring.char, na[1], nb[1])), da))
        raise RingShapeError("no common denominator found")


def ring_fractions(ring: MultigradedRing, system: frozenset, max_pairs: int = 20000) -> RingFractions:
    fractions = []
    for s in system:
        for x in ring.group.elements():
            for vec in all_vectors(ring.char, ring.dims[x]):
                fractions.append(((x, vec), s))
    if len(fractions) > max_pairs:
        raise SizeBound("too many fraction pairs")

    index = {f: k for k, f in enumerate(fractions)}
    parent = list(range(len(fractions)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    # Elementary dilation: (r, s) ~ (r t, s t) whenever s t stays in
    # the system; the union-find closure is the full equivalence.
    for (r, s) in fractions:
        for t in ring.homogeneous_elements():
            st = mg_mul(ring, s, t)
            if st in system:
                rt = mg_mul(ring, r, t)
                union(index[(r, s)], index[(rt, st)])

    groups: dict = {}
    for f, k in index.items():
        groups.setdefault(find(k), set()).add(f)
    classes: dict = {x: [] for x in ring.group.elements()}
    seen = set()
    for members in groups.values():
        cls = frozenset(members)
        rep = min(cls)
        deg = ring.group.sub(rep[0][0], rep[1][0])
        # One orbit can only mix fractions of a single degree.
        assert all(ring.group.sub(r[0], s[0]) == deg for (r, s) in cls)
        if cls not in seen:
            classes[deg].append(cls)
            seen.add(cls)
    for x in classes:
        classes[x].sort(key=lambda c: sorted(c))
    return RingFractions(ring=ring, system=frozenset(system), classes=classes)
