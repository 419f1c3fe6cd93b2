"""Comparison maps built from support data over finite spectral models.

A section table records finitely many sections of invertible objects
together with the open locus where each section is invertible.  Sending
a point to the set of sections vanishing there yields a map into the
pattern model of the section ring; the operations here decide when that
map is a basis-giving embedding, move period data across it, and cut
the model into charts along covering sections.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .diagnostics import Diagnosis, PASS, failure
from .graded import GradedRingPresentation, PrimePattern, SpechModel, local_period
from .spaces import FiniteSpectralModel, PeriodAssignment, _values, divides

MAX_POINTS = 16


class ComparisonError(Exception):
    pass


class NotBaseFree(ComparisonError):
    """No finite set of sections of the bundle covers the space."""

    def __init__(self, bundle: str):
        self.bundle = bundle
        super().__init__(f"bundle {bundle!r} has no covering family of sections")


@dataclass(frozen=True)
class Section:
    """One section with its invertibility locus."""

    name: str
    bundle: str
    degree: int
    locus: frozenset[str]


@dataclass(frozen=True)
class SectionTable:
    """Finite support datum: a space, graded bundles, sections with loci.

    bundles maps each bundle label to its integer degree; a section's
    degree must agree with its bundle's.  products records those pairs
    whose product is again a tabulated section.
    """

    space: FiniteSpectralModel
    bundles: Mapping[str, int]
    sections: tuple[Section, ...]
    products: Mapping[tuple[str, str], str]

    def section(self, name: str) -> Section:
        for s in self.sections:
            if s.name == name:
                return s
        raise ComparisonError(f"unknown section {name!r}")

    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.sections)


def make_table(space, bundles, sections, products=()) -> SectionTable:
    secs = []
    for item in sections:
        if isinstance(item, Section):
            secs.append(item)
        else:
            name, bundle, degree, locus = item
            secs.append(Section(name, bundle, int(degree), frozenset(locus)))
    if isinstance(products, Mapping):
        prods = {tuple(k): v for k, v in products.items()}
    else:
        prods = {(a, b): ab for a, b, ab in products}
    return SectionTable(space, dict(bundles), tuple(secs), prods)


def validate_section_table(table: SectionTable) -> Diagnosis:
    points = set(table.space.points)
    for label, degree in table.bundles.items():
        if not isinstance(label, str) or not isinstance(degree, int):
            return failure("bad-bundle", label)
    seen: dict[str, Section] = {}
    for s in table.sections:
        if not s.name or s.name in seen:
            return failure("section-name", s.name)
        seen[s.name] = s
        if s.bundle not in table.bundles:
            return failure("unknown-bundle", s.name, s.bundle)
        if s.degree != table.bundles[s.bundle]:
            return failure("degree-vs-bundle", s.name, s.degree, s.bundle)
        if not s.locus <= points:
            return failure("locus-outside-space", s.name)
        if not table.space.is_open(s.locus):
            return failure("locus-not-open", s.name)
    for (a, b), ab in table.products.items():
        if a not in seen or b not in seen or ab not in seen:
            return failure("product-unknown-section", a, b, ab)
        if seen[ab].degree != seen[a].degree + seen[b].degree:
            return failure("product-degree", a, b, ab)
        # Invertibility of both factors forces invertibility of the product.
        if not seen[a].locus & seen[b].locus <= seen[ab].locus:
            return failure("product-locus", a, b, ab)
    return PASS


def _require_valid(table: SectionTable) -> None:
    diag = validate_section_table(table)
    if not diag:
        raise ComparisonError(f"invalid section table: {diag.describe()}")
    if len(table.space.points) > MAX_POINTS:
        raise ComparisonError("space too large for open-set enumeration")


def comp_map(table: SectionTable) -> dict[str, PrimePattern]:
    """Point to the pattern of sections vanishing there."""
    _require_valid(table)
    out = {}
    for p in table.space.points:
        out[p] = PrimePattern(
            frozenset(s.name for s in table.sections if p not in s.locus)
        )
    return out


def is_ample(table: SectionTable) -> bool:
    """Do the section loci form a basis of the topology?

    Literal finite-model criterion: every point of every open set sits
    inside some locus contained in that open set.
    """
    _require_valid(table)
    loci = [s.locus for s in table.sections]
    for v in table.space.open_sets():
        for p in v:
            if not any(p in u and u <= v for u in loci):
                return False
    return True


def homeo_onto_image(table: SectionTable) -> bool:
    """Is the comparison map injective and open onto its image?

    Computed directly from the map, not via the basis criterion: the
    image carries the pattern-inclusion order, and every open of the
    source must map onto a generalization-closed subset of the image.
    """
    _require_valid(table)
    comp = comp_map(table)
    patterns = {p: comp[p].contains for p in table.space.points}
    image = set(patterns.values())
    if len(image) != len(table.space.points):
        return False
    for v in table.space.open_sets():
        hit = {patterns[p] for p in v}
        for a in hit:
            for b in image:
                if b <= a and b not in hit:
                    return False
    return True


def ample_homeo_consistency(table: SectionTable) -> Diagnosis:
    """Cross-check the two independent embedding criteria."""
    ample = is_ample(table)
    homeo = homeo_onto_image(table)
    if ample != homeo:
        return failure("routes-differ", ample, homeo)
    return PASS


def _period_labels(table: SectionTable, per) -> dict[str, int]:
    vals = _values(per)
    missing = set(table.space.points) - set(vals)
    if missing:
        raise ComparisonError(f"no period for point {sorted(missing)[0]!r}")
    return vals


def _check_generator_sections(table: SectionTable, ring: GradedRingPresentation):
    # Only sections that vanish somewhere feed the pattern; a section
    # invertible everywhere acts like a unit and needs no generator.
    degrees = {g.name: g.degree for g in ring.generators}
    everywhere = frozenset(table.space.points)
    for s in table.sections:
        if s.locus == everywhere:
            continue
        if s.name not in degrees:
            raise ComparisonError(f"section {s.name!r} is not a ring generator")
        if degrees[s.name] != s.degree:
            raise ComparisonError(f"section {s.name!r} degree differs from the ring")


def transfer_periods(
    table: SectionTable, ring: GradedRingPresentation, per
) -> Diagnosis:
    """Match point periods with local periods at the image patterns.

    Requires an embedding whose sections are ring generators; checks the
    pointwise equality and, per occurring label, equality of the
    divides-d sublevel set with the preimage of the ring-side one.
    """
    _require_valid(table)
    if not homeo_onto_image(table):
        raise ComparisonError("comparison map is not an embedding")
    _check_generator_sections(table, ring)
    vals = _period_labels(table, per)
    comp = comp_map(table)
    for p in table.space.points:
        want = local_period(ring, comp[p])
        if vals[p] != want:
            return failure("period-mismatch", p, vals[p], want)
    for d in sorted(set(vals.values())):
        sub = {p for p in table.space.points if divides(vals[p], d)}
        pre = {
            p
            for p in table.space.points
            if divides(local_period(ring, comp[p]), d)
        }
        if sub != pre:
            return failure("sublevel-preimage", d, tuple(sorted(sub ^ pre)))
    return PASS


def divisor_constraint(
    table: SectionTable, ring: GradedRingPresentation, per
) -> Diagnosis:
    """Point period divides the local period at the image pattern.

    Holds for every table, embedding or not; section names that are not
    ring generators simply never knock a generator out of the gcd.
    """
    _require_valid(table)
    vals = _period_labels(table, per)
    comp = comp_map(table)
    for p in table.space.points:
        bound = local_period(ring, comp[p])
        if not divides(vals[p], bound):
            return failure("period-not-divisor", p, vals[p], bound)
    return PASS


def restrict_table(table: SectionTable, subset: Iterable[str]) -> SectionTable:
    """Induced table on an open subset; loci restrict literally."""
    sub = frozenset(subset)
    if not table.space.is_open(sub):
        raise ComparisonError("restriction target is not open")
    return SectionTable(
        space=table.space.restrict(sub),
        bundles=dict(table.bundles),
        sections=tuple(
            Section(s.name, s.bundle, s.degree, s.locus & sub)
            for s in table.sections
        ),
        products=dict(table.products),
    )


@dataclass(frozen=True)
class Chart:
    """One covering section's locus with the restricted table."""

    section: str
    points: frozenset[str]
    table: SectionTable


def base_free_cover(table: SectionTable, bundle: str) -> list[Chart]:
    """Charts from the sections of one bundle whose loci cover the space.

    Each chart is verified against the pullback description: its points
    are exactly the points whose pattern omits the chosen section.
    """
    _require_valid(table)
    if bundle not in table.bundles:
        raise ComparisonError(f"unknown bundle {bundle!r}")
    chosen = [s for s in table.sections if s.bundle == bundle and s.locus]
    covered: set[str] = set()
    for s in chosen:
        covered |= s.locus
    if covered != set(table.space.points):
        raise NotBaseFree(bundle)
    comp = comp_map(table)
    charts = []
    for s in chosen:
        omits = frozenset(
            p for p in table.space.points if s.name not in comp[p].contains
        )
        if omits != s.locus:
            raise ComparisonError(f"chart of {s.name!r} fails the pullback check")
        charts.append(Chart(s.name, s.locus, restrict_table(table, s.locus)))
    return charts


def central_localization(
    table: SectionTable, names: Iterable[str]
) -> tuple[frozenset[str], SectionTable]:
    """Open subspace where the given sections are invertible, with its table."""
    _require_valid(table)
    wanted = frozenset(names)
    known = set(table.names())
    if not wanted <= known:
        raise ComparisonError(f"unknown section {sorted(wanted - known)[0]!r}")
    region = frozenset(table.space.points)
    for s in table.sections:
        if s.name in wanted:
            region &= s.locus
    return region, restrict_table(table, region)


def central_loc_pullback(table: SectionTable, names: Iterable[str]) -> Diagnosis:
    """Inverting sections cuts out exactly the pattern-avoiding points.

    Two routes to the subspace (locus intersection versus pattern trace)
    must agree, the subspace must be open, and the comparison map of the
    restricted table must be the restriction of the full one.
    """
    wanted = frozenset(names)
    region, restricted = central_localization(table, wanted)
    comp = comp_map(table)
    via_patterns = frozenset(
        p for p in table.space.points if not (comp[p].contains & wanted)
    )
    if region != via_patterns:
        return failure("locus-vs-pattern", tuple(sorted(region ^ via_patterns)))
    if not table.space.is_open(region):
        return failure("region-not-open", tuple(sorted(region)))
    sub = comp_map(restricted)
    for p in restricted.space.points:
        if sub[p].contains != comp[p].contains:
            return failure("restriction-mismatch", p)
    return PASS


def image_open_in_model(table: SectionTable, model: SpechModel) -> bool:
    """Is the comparison image open inside an ambient pattern model?

    Reported as a diagnostic only; an embedding needs no open image.
    Every image pattern must name a point of the ambient model.
    """
    _require_valid(table)
    comp = comp_map(table)
    by_pattern = {model.patterns[q].contains: q for q in model.space.points}
    hit = set()
    for p in table.space.points:
        key = comp[p].contains
        if key not in by_pattern:
            raise ComparisonError(f"image pattern of {p!r} is not an ambient point")
        hit.add(by_pattern[key])
    return model.space.is_open(hit)


# -- serialization -----------------------------------------------------

def table_to_obj(table: SectionTable) -> dict:
    return {
        "format": 1,
        "bundles": {b: table.bundles[b] for b in sorted(table.bundles)},
        "sections": [
            {
                "name": s.name,
                "bundle": s.bundle,
                "degree": s.degree,
                "locus": sorted(s.locus),
            }
            for s in sorted(table.sections, key=lambda s: s.name)
        ],
        "products": sorted(
            [a, b, ab] for (a, b), ab in table.products.items()
        ),
    }


def table_from_obj(obj: Mapping, space: FiniteSpectralModel) -> SectionTable:
    try:
        if obj.get("format") != 1:
            raise ComparisonError(f"unsupported format {obj.get('format')!r}")
        bundles = {str(b): int(d) for b, d in obj["bundles"].items()}
        sections = [
            (row["name"], row["bundle"], int(row["degree"]), row["locus"])
            for row in obj["sections"]
        ]
        products = [tuple(entry) for entry in obj.get("products", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise ComparisonError(f"malformed section table: {exc}") from exc
    for entry in products:
        if len(entry) != 3:
            raise ComparisonError(f"malformed product entry {entry!r}")
    table = make_table(space, bundles, sections, products)
    diag = validate_section_table(table)
    if not diag:
        raise ComparisonError(f"invalid section table: {diag.describe()}")
    return table
