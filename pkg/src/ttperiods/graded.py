"""Finitely presented graded-commutative rings and their vanishing-pattern spectra.

A homogeneous prime is represented by its trace on the generators: the set
of generator names it contains.  For monomial quotients that trace data is
a complete description and the whole spectrum can be enumerated as a
hitting-set problem; for other presentations, supplied witness patterns
are validated against sound necessary conditions instead.

Local periods come from the gcd formula: the period at a pattern is the
gcd of the degrees of the generators outside it, with gcd of nothing
being 0 (non-periodic).  oracle_local_period is the deliberately dumb
monomial-enumeration counterpart used to keep that reduction honest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .diagnostics import Diagnosis, PASS, failure
from .spaces import ALL, FiniteSpectralModel, divides


class GradedError(Exception):
    """Malformed ring or pattern data."""


class NonMonomialWithoutWitnesses(GradedError):
    """Pattern enumeration needs monomial relations or explicit witnesses."""


class InvalidPattern(GradedError):
    """A supplied pattern violates a soundness constraint."""


class BoundTooSmall(GradedError):
    """The brute-force degree bound admits no qualifying monomial."""


class NotLaurentForm(GradedError):
    """The presentation is not a degree-0 part extended by one unit."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    invertible: bool = False
    nilpotent: bool = False


@dataclass(frozen=True)
class Term:
    """coeff * product of generators with positive exponents."""

    coeff: int
    monomial: tuple[tuple[str, int], ...]

    def variables(self) -> frozenset[str]:
        return frozenset(n for n, _ in self.monomial)


Relation = tuple[Term, ...]


@dataclass(frozen=True)
class TauTable:
    """Finite transposition table: degree pair -> unit scalar."""

    entries: Mapping[tuple[int, int], int]


@dataclass(frozen=True)
class GradedRingPresentation:
    char: int
    generators: tuple[Generator, ...]
    relations: tuple[Relation, ...] = ()
    constraint: "str | TauTable" = "koszul"

    def generator(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise GradedError(f"unknown generator {name!r}")

    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def term_degree(self, term: Term) -> int:
        return sum(self.generator(n).degree * e for n, e in term.monomial)


def make_ring(
    char: int,
    generators: Sequence[tuple],
    relations: Sequence[Sequence[tuple[int, Mapping[str, int]]]] = (),
    constraint: "str | TauTable" = "koszul",
) -> GradedRingPresentation:
    """Convenience constructor with coefficient canonicalization.

    generators: (name, degree[, invertible[, nilpotent]]) tuples.
    relations: lists of (coeff, {name: exponent}) terms; like terms are
    merged and coefficients reduced mod char, so formally zero relations
    vanish here rather than confusing the pattern constraints later.
    """
    gens = tuple(Generator(*g) for g in generators)
    rels = []
    for raw in relations:
        acc: dict[tuple[tuple[str, int], ...], int] = {}
        for coeff, mono in raw:
            key = tuple(sorted((n, int(e)) for n, e in mono.items() if int(e) > 0))
            acc[key] = acc.get(key, 0) + int(coeff)
        terms = []
        for key, coeff in sorted(acc.items()):
            if char:
                coeff %= char
            if coeff != 0:
                terms.append(Term(coeff, key))
        if terms:
            rels.append(tuple(terms))
    return GradedRingPresentation(char, gens, tuple(rels), constraint)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n**0.5) + 1))


def validate_presentation(ring: GradedRingPresentation) -> Diagnosis:
    """Homogeneity, transposition axioms, and the odd-unit constraint."""
    names = ring.names()
    if len(set(names)) != len(names):
        return failure("duplicate-generator", names)
    if ring.char != 0 and not _is_prime(ring.char):
        return failure("char-not-prime", ring.char)
    for g in ring.generators:
        if g.nilpotent and g.invertible:
            return failure("nilpotent-unit", g.name)
    known = set(names)
    for rel in ring.relations:
        degs = set()
        for term in rel:
            if not term.variables() <= known:
                return failure("unknown-generator", rel)
            degs.add(ring.term_degree(term))
        if len(degs) > 1:
            return failure("inhomogeneous", rel)
    if isinstance(ring.constraint, TauTable):
        tau = dict(ring.constraint.entries)
        for (a, b), u in tau.items():
            if ring.char and u % ring.char == 0:
                return failure("tau-not-unit", (a, b))
            if u == 0:
                return failure("tau-not-unit", (a, b))
            if (b, a) in tau and tau[(b, a)] != u:
                return failure("tau-not-symmetric", (a, b))
        for (a, b), u in tau.items():
            for (c, d), v in tau.items():
                if d == b and (a + c, b) in tau:
                    lhs = tau[(a + c, b)]
                    rhs = u * v
                    if ring.char:
                        lhs, rhs = lhs % ring.char, rhs % ring.char
                    if lhs != rhs:
                        return failure("tau-not-bilinear", (a, c, b))
    elif ring.constraint not in ("koszul", "trivial"):
        return failure("unknown-constraint", ring.constraint)
    if ring.constraint == "koszul":
        # An invertible element of odd degree forces 2 = 0 under the
        # Koszul sign rule: u*u = -u*u gives 2u^2 = 0 with u^2 a unit.
        for g in ring.generators:
            if g.invertible and g.degree % 2 != 0 and ring.char != 2:
                return failure("odd-period", g.name)
    return PASS


@dataclass(frozen=True)
class PrimePattern:
    """Trace of a homogeneous prime on the generators."""

    contains: frozenset[str]

    @staticmethod
    def of(*names: str) -> "PrimePattern":
        return PrimePattern(frozenset(names))


def pattern_name(ring: GradedRingPresentation, pattern: PrimePattern) -> str:
    ordered = [n for n in ring.names() if n in pattern.contains]
    return "⟨" + ",".join(ordered) + "⟩"


def pattern_diagnosis(ring: GradedRingPresentation, pattern: PrimePattern) -> Diagnosis:
    """Sound necessary conditions for a generator subset to trace a prime."""
    if not pattern.contains <= set(ring.names()):
        return failure("unknown-generator", sorted(pattern.contains - set(ring.names())))
    for g in ring.generators:
        if g.nilpotent and g.name not in pattern.contains:
            return failure("nilpotent-outside", g.name)
        if g.invertible and g.name in pattern.contains:
            return failure("invertible-inside", g.name)
    for rel in ring.relations:
        hit = [bool(t.variables() & pattern.contains) for t in rel]
        if len(rel) == 1:
            if not hit[0]:
                return failure("monomial-not-hit", rel)
        elif hit.count(False) == 1:
            # All monomials but one lie in the prime, so their sum forces
            # the last one in as well; primality then hits a variable.
            return failure("propagation", rel)
    return PASS


@dataclass(frozen=True)
class SpechModel:
    """Finite poset of named pattern points over one presentation."""

    ring: GradedRingPresentation
    space: FiniteSpectralModel
    patterns: Mapping[str, PrimePattern]
    certified: Mapping[str, str]
    includes_irrelevant: bool

    def pattern(self, point: str) -> PrimePattern:
        return self.patterns[point]

    def check(self) -> Diagnosis:
        for point in self.space.points:
            diag = pattern_diagnosis(self.ring, self.patterns[point])
            if not diag:
                return failure("invalid-pattern", point, diag.reason)
        for p in self.space.points:
            for q in self.space.specializations(p):
                if not self.patterns[p].contains <= self.patterns[q].contains:
                    return failure("order-vs-inclusion", p, q)
        return PASS


_CERT_TAGS = ("enumerated", "witness", "paper")


def _build_spech(ring, pats: list[tuple[PrimePattern, str]]) -> SpechModel:
    names = {}
    for pattern, cert in pats:
        name = pattern_name(ring, pattern)
        if name in names and names[name][0] != pattern:
            raise InvalidPattern(name, "duplicate name")
        names[name] = (pattern, cert)
    edges = [
        (a, b)
        for a in names
        for b in names
        if a != b and names[a][0].contains < names[b][0].contains
    ]
    space = FiniteSpectralModel(names, edges)
    full = frozenset(g.name for g in ring.generators if not g.invertible)
    return SpechModel(
        ring=ring,
        space=space,
        patterns={n: names[n][0] for n in space.points},
        certified={n: names[n][1] for n in space.points},
        includes_irrelevant=any(p.contains == full for p, _ in pats),
    )


def enumerate_patterns(
    ring: GradedRingPresentation,
    witnesses: "Iterable[tuple[PrimePattern, str]] | None" = None,
) -> SpechModel:
    """Spectrum model: exhaustive for monomial quotients, validated otherwise.

    Monomial mode enumerates every subset of the non-invertible generators
    that contains the nilpotents and hits each relation monomial; that is
    the complete list of pattern points.  With witnesses supplied, the
    given patterns are validated and used as-is; completeness is then the
    caller's responsibility.
    """
    if witnesses is not None:
        pats = []
        for pattern, cert in witnesses:
            if cert not in _CERT_TAGS:
                raise InvalidPattern(pattern_name(ring, pattern), f"bad tag {cert!r}")
            diag = pattern_diagnosis(ring, pattern)
            if not diag:
                raise InvalidPattern(pattern_name(ring, pattern), diag.reason)
            pats.append((pattern, cert))
        return _build_spech(ring, pats)
    if any(len(rel) > 1 for rel in ring.relations):
        raise NonMonomialWithoutWitnesses(
            "non-monomial relations need witness patterns"
        )
    free = [g.name for g in ring.generators if not g.invertible]
    forced = frozenset(g.name for g in ring.generators if g.nilpotent)
    hitting = [rel[0].variables() for rel in ring.relations]
    pats = []
    for r in range(len(free) + 1):
        for combo in combinations(free, r):
            chosen = frozenset(combo)
            if not forced <= chosen:
                continue
            if any(not (vs & chosen) for vs in hitting):
                continue
            pats.append((PrimePattern(chosen), "enumerated"))
    return _build_spech(ring, pats)


def local_period(ring: GradedRingPresentation, pattern: PrimePattern) -> int:
    """gcd of generator degrees outside the pattern; gcd of nothing is 0."""
    g = 0
    for gen in ring.generators:
        if gen.name not in pattern.contains and gen.degree != 0:
            g = math.gcd(g, abs(gen.degree))
    return g


def ring_period(ring: GradedRingPresentation) -> int:
    """Smallest positive unit degree, from declared invertible generators only.

    The degrees of units form the subgroup of the integers generated by
    the invertible generators' degrees, so the gcd is that smallest
    positive degree; 0 when there are no invertible generators.  Unit
    detection beyond the declared generators is out of scope by design.
    """
    g = 0
    for gen in ring.generators:
        if gen.invertible and gen.degree != 0:
            g = math.gcd(g, abs(gen.degree))
    return g


def periodic_locus(ring: GradedRingPresentation, model: SpechModel, d) -> frozenset[str]:
    """Points of positive period (d = ALL) or of period dividing d.

    Two routes are compared: the gcd formula pointwise, and the union of
    principal loci D(x) over nonzero-degree generators x.
    """
    periods = {p: local_period(ring, model.patterns[p]) for p in model.space.points}
    if d == ALL:
        via_formula = frozenset(p for p, v in periods.items() if v > 0)
        via_loci: set[str] = set()
        for gen in ring.generators:
            if gen.degree != 0:
                via_loci |= {
                    p
                    for p in model.space.points
                    if gen.name not in model.patterns[p].contains
                }
        if via_formula != frozenset(via_loci):
            raise GradedError("periodic locus cross-check failed")
        return via_formula
    if not isinstance(d, int) or d < 0:
        raise GradedError(f"bad period bound {d!r}")
    for gen in ring.generators:
        if gen.degree != 0:
            locus = {
                p
                for p in model.space.points
                if gen.name not in model.patterns[p].contains
            }
            if not all(divides(periods[p], abs(gen.degree)) for p in locus):
                raise GradedError("principal locus period bound failed")
    return frozenset(p for p, v in periods.items() if divides(v, d))


def oracle_local_period(
    ring: GradedRingPresentation, pattern: PrimePattern, degree_bound: int
) -> int:
    """Brute-force gcd over degrees of pattern-avoiding monomials.

    Enumerates every monomial in the generators outside the pattern with
    total degree in (0, degree_bound] and takes the gcd of the degrees.
    This is the independent check of the generator-degree reduction.
    """
    if degree_bound <= 0:
        raise GradedError("degree bound must be positive")
    if any(g.degree < 0 for g in ring.generators):
        raise GradedError("oracle needs nonnegative degrees")
    outside = [g for g in ring.generators if g.name not in pattern.contains]
    # A monomial's degree is a nonnegative combination of the outside
    # generators' degrees, so the achievable degrees are exactly the
    # reachable sums; duplicates add nothing and are collapsed.
    positive = sorted({g.degree for g in outside if g.degree > 0})
    reachable = [False] * (degree_bound + 1)
    reachable[0] = True
    for d in positive:
        for total in range(d, degree_bound + 1):
            if reachable[total - d]:
                reachable[total] = True
    degrees = [total for total in range(1, degree_bound + 1) if reachable[total]]
    if not degrees:
        if outside:
            raise BoundTooSmall(degree_bound)
        return 0
    return math.gcd(*degrees)


def degree_zero_reduction_check(ring: GradedRingPresentation) -> Diagnosis:
    """A Laurent extension R0[u, u^-1] has the same pattern set as R0."""
    units = [g for g in ring.generators if g.invertible and g.degree != 0]
    others = [g for g in ring.generators if not (g.invertible and g.degree != 0)]
    if len(units) != 1 or any(g.degree != 0 for g in others):
        raise NotLaurentForm("expected exactly one nonzero-degree unit over a degree-0 part")
    u = units[0]
    for rel in ring.relations:
        for term in rel:
            if u.name in term.variables():
                raise NotLaurentForm(f"unit {u.name!r} appears in a relation")
    sub = GradedRingPresentation(
        ring.char, tuple(others), ring.relations, ring.constraint
    )
    big = enumerate_patterns(ring)
    small = enumerate_patterns(sub)
    big_set = {big.patterns[p].contains for p in big.space.points}
    small_set = {small.patterns[p].contains for p in small.space.points}
    if any(u.name in c for c in big_set):
        return failure("unit-in-pattern", u.name)
    if big_set != small_set:
        return failure("pattern-sets-differ", len(big_set), len(small_set))
    # Identity on traces is inclusion-preserving both ways by construction.
    return Diagnosis(True, "bijection", (len(big_set),))


# -- serialization -----------------------------------------------------

def ring_to_obj(ring: GradedRingPresentation) -> dict:
    if isinstance(ring.constraint, TauTable):
        raise GradedError("tau tables have no JSON form; use koszul or trivial")
    return {
        "char": ring.char,
        "constraint": ring.constraint,
        "generators": [
            {
                "name": g.name,
                "degree": g.degree,
                "invertible": g.invertible,
                "nilpotent": g.nilpotent,
            }
            for g in ring.generators
        ],
        "relations": [
            [{"coeff": t.coeff, "monomial": dict(t.monomial)} for t in rel]
            for rel in ring.relations
        ],
    }


def ring_from_obj(obj: Mapping) -> GradedRingPresentation:
    try:
        gens = [
            (
                g["name"],
                int(g["degree"]),
                bool(g.get("invertible", False)),
                bool(g.get("nilpotent", False)),
            )
            for g in obj["generators"]
        ]
        rels = [
            [(int(t["coeff"]), dict(t["monomial"])) for t in rel]
            for rel in obj.get("relations", [])
        ]
        return make_ring(
            int(obj["char"]), gens, rels, obj.get("constraint", "koszul")
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise GradedError(f"malformed ring object: {exc}") from exc


def spech_to_obj(model: SpechModel, periods: "Mapping[str, int] | None" = None) -> dict:
    obj = {
        "points": list(model.space.points),
        "specializes": [list(e) for e in model.space.cover_pairs()],
        "pattern": {
            p: [n for n in model.ring.names() if n in model.patterns[p].contains]
            for p in model.space.points
        },
        "certified": {p: model.certified[p] for p in model.space.points},
    }
    if periods is not None:
        obj["periods"] = {p: periods[p] for p in model.space.points}
    return obj
