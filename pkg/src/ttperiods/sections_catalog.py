"""Named section-table fixtures with their expected embedding behavior.

Registry entries are product complete: every tabulated pair of sections
with jointly invertible locus has its product tabulated too, which is
what makes the basis criterion and the direct embedding check agree.
Generator-only tables truncate the section list and can split the two
checks, so they live outside the registry and serve the period-transfer
and chart operations instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .comparison import SectionTable, make_table, table_to_obj
from .graded import (
    GradedRingPresentation,
    SpechModel,
    enumerate_patterns,
    local_period,
    make_ring,
    ring_to_obj,
)
from .spaces import (
    FiniteSpectralModel,
    PeriodAssignment,
    dumps_canonical,
    model_to_obj,
    restrict_to_open,
)

__all__ = [
    "ComparisonFixture",
    "FIXTURE_NAMES",
    "build_fixture",
    "stmod_d8_fixture",
    "write_all",
]


@dataclass(frozen=True)
class ComparisonFixture:
    name: str
    table: SectionTable
    ample: bool
    ring: GradedRingPresentation | None = None
    per: PeriodAssignment | None = None
    image_model: SpechModel | None = None
    image_open: bool | None = None


def _d8_presentation() -> GradedRingPresentation:
    # Two degree-one generators with vanishing product, one in degree two.
    return make_ring(
        2, [("α0", 1), ("α1", 1), ("β", 2)], [[(1, {"α0": 1, "α1": 1})]]
    )


def _monomial_locus(model: SpechModel, variables: frozenset[str]) -> frozenset[str]:
    return frozenset(
        q
        for q in model.space.points
        if not (variables & model.patterns[q].contains)
    )


def _local_periods(model: SpechModel) -> PeriodAssignment:
    return PeriodAssignment(
        {q: local_period(model.ring, model.patterns[q]) for q in model.space.points}
    )


def _point_with_unit() -> ComparisonFixture:
    ring = make_ring(2, [("x", 1)])
    space = FiniteSpectralModel(["pt"])
    table = make_table(
        space,
        {"L0": 0, "L1": 1},
        [("1", "L0", 0, ["pt"]), ("x", "L1", 1, [])],
    )
    return ComparisonFixture(
        name="point_with_unit",
        table=table,
        ample=True,
        ring=ring,
        per=PeriodAssignment({"pt": 0}),
        image_model=enumerate_patterns(ring),
        image_open=False,
    )


def _chain_principal() -> ComparisonFixture:
    ring = make_ring(2, [("t", 1)])
    space = FiniteSpectralModel(["g", "s"], [("g", "s")])
    table = make_table(
        space,
        {"L0": 0, "L1": 1},
        [("1", "L0", 0, ["g", "s"]), ("t", "L1", 1, ["g"])],
    )
    return ComparisonFixture(
        name="chain_principal",
        table=table,
        ample=True,
        ring=ring,
        per=PeriodAssignment({"g": 1, "s": 0}),
        image_model=enumerate_patterns(ring),
        image_open=True,
    )


def _whole_space_only() -> ComparisonFixture:
    space = FiniteSpectralModel(["g", "s"], [("g", "s")])
    table = make_table(space, {"L0": 0}, [("1", "L0", 0, ["g", "s"])])
    return ComparisonFixture(name="whole_space_only", table=table, ample=False)


def _rep_d8_monomials() -> ComparisonFixture:
    ring = _d8_presentation()
    model = enumerate_patterns(ring)
    monomials = {
        "1": frozenset(),
        "α0": frozenset({"α0"}),
        "α1": frozenset({"α1"}),
        "β": frozenset({"β"}),
        "α0·α1": frozenset({"α0", "α1"}),
        "α0·β": frozenset({"α0", "β"}),
        "α1·β": frozenset({"α1", "β"}),
    }
    degrees = {"α0": 1, "α1": 1, "β": 2}
    sections = []
    for name, variables in monomials.items():
        d = sum(degrees[v] for v in variables)
        sections.append((name, f"L{d}", d, _monomial_locus(model, variables)))
    products = [
        ("α0", "α1", "α0·α1"),
        ("α0", "β", "α0·β"),
        ("α1", "β", "α1·β"),
    ]
    table = make_table(
        model.space,
        {f"L{d}": d for d in (0, 1, 2, 3)},
        sections,
        products,
    )
    return ComparisonFixture(
        name="rep_d8_monomials",
        table=table,
        ample=True,
        ring=ring,
        per=_local_periods(model),
    )


def _dperm_cover() -> ComparisonFixture:
    space = FiniteSpectralModel(["m", "c1", "c2"], [("m", "c1"), ("m", "c2")])
    table = make_table(
        space,
        {"L0": 0, "L1": 1, "L2": 2},
        [
            ("1", "L0", 0, ["m", "c1", "c2"]),
            ("s1", "L1", 1, ["m", "c1"]),
            ("s2", "L1", 1, ["m", "c2"]),
            ("s1·s2", "L2", 2, ["m"]),
        ],
        [("s1", "s2", "s1·s2")],
    )
    return ComparisonFixture(name="dperm_cover", table=table, ample=True)


_FIXTURE_BUILDERS = {
    "chain_principal": _chain_principal,
    "dperm_cover": _dperm_cover,
    "point_with_unit": _point_with_unit,
    "rep_d8_monomials": _rep_d8_monomials,
    "whole_space_only": _whole_space_only,
}

FIXTURE_NAMES = tuple(sorted(_FIXTURE_BUILDERS))


def build_fixture(name: str) -> ComparisonFixture:
    if name not in _FIXTURE_BUILDERS:
        raise KeyError(f"unknown comparison fixture {name!r}")
    return _FIXTURE_BUILDERS[name]()


def stmod_d8_fixture() -> ComparisonFixture:
    """Generator sections over the five-point projective model.

    Truncated on purpose: the three generators alone are not a basis,
    but the map is still an embedding, which is all period transfer
    needs.  The full six-point model is the ambient for the image.
    """
    ring = _d8_presentation()
    full = enumerate_patterns(ring)
    irrelevant = max(
        full.space.points, key=lambda q: len(full.patterns[q].contains)
    )
    keep = frozenset(q for q in full.space.points if q != irrelevant)
    space, per = restrict_to_open(full.space, _local_periods(full), keep)
    sections = []
    for name, d in (("α0", 1), ("α1", 1), ("β", 2)):
        locus = frozenset(
            q for q in space.points if name not in full.patterns[q].contains
        )
        sections.append((name, f"L{d}", d, locus))
    table = make_table(space, {"L1": 1, "L2": 2}, sections)
    return ComparisonFixture(
        name="stmod_d8_generators",
        table=table,
        ample=False,
        ring=ring,
        per=per,
        image_model=full,
        image_open=True,
    )


def write_all(directory: "Path | None" = None) -> list[Path]:
    """Ship the projective model demo as three JSON files."""
    out = Path(directory) if directory else Path(__file__).parent / "data" / "sections"
    out.mkdir(parents=True, exist_ok=True)
    fix = stmod_d8_fixture()
    written = []
    for stem, obj in (
        ("stmod_d8_sections", table_to_obj(fix.table)),
        ("stmod_d8_space", model_to_obj(fix.table.space, fix.per)),
        ("d8_ring", ring_to_obj(fix.ring)),
    ):
        path = out / f"{stem}.json"
        path.write_text(dumps_canonical(obj), encoding="utf-8")
        written.append(path)
    return written


if __name__ == "__main__":
    for path in write_all():
        print(path)
