"""Group spectra assembly: catalog, strata, towers, shipped figures."""

import pytest

from ttperiods.cohomology import (
    CatalogEntry,
    GroupNotInCatalog,
    WeylNotInCatalog,
    cohomology_entry,
)
from ttperiods.datasets import (
    DATASET_NAMES,
    UnknownDataset,
    build_dperm_d8,
    build_dperm_q8,
    build_ratm_r,
    build_stmod_d8,
    dperm_overrides,
    load_figure_dataset,
    load_figure_record,
)
from ttperiods.graded import validate_presentation
from ttperiods.groups import (
    FiniteGroup,
    cyclic,
    dihedral,
    elementary_abelian,
    quaternion,
    subgroups,
    symmetric,
)
from ttperiods.spaces import check_period_map, model_from_obj
from ttperiods.spectra import (
    TAG_BOUND,
    TAG_COMPUTED,
    TAG_DATASET,
    artin_tower,
    dperm_period_map,
    dperm_strata,
    perm_module_in_closed_point,
    rep_period_map,
    stmod_discrepancies,
    stmod_period_map,
    very_closed_point_check,
)


class TestCatalog:
    CASES = [
        ("trivial", 2),
        (cyclic(2), 2),
        (cyclic(4), 2),
        (cyclic(8), 2),
        (cyclic(9), 3),
        (elementary_abelian(2, 1), 2),
        (elementary_abelian(2, 3), 2),
        (elementary_abelian(3, 2), 3),
        (quaternion(8), 2),
        (dihedral(8), 2),
        ("M11", 3),
        (symmetric(3), 5),
    ]

    @pytest.mark.parametrize("group,p", CASES)
    def test_entries_validate(self, group, p):
        entry = cohomology_entry(group, p)
        assert isinstance(entry, CatalogEntry)
        assert entry.presentation.char == p
        assert validate_presentation(entry.presentation)

    def test_coprime_order_is_field(self):
        entry = cohomology_entry(cyclic(3), 2)
        assert entry.presentation.generators == ()

    def test_c2_is_polynomial_degree_one(self):
        entry = cohomology_entry(cyclic(2), 2)
        (gen,) = entry.presentation.generators
        assert (gen.name, gen.degree) == ("x", 1)

    def test_c4_is_polynomial_degree_two(self):
        entry = cohomology_entry(cyclic(4), 2)
        (gen,) = entry.presentation.generators
        assert (gen.name, gen.degree) == ("y", 2)

    def test_odd_cyclic_degree_two(self):
        entry = cohomology_entry(cyclic(9), 3)
        (gen,) = entry.presentation.generators
        assert gen.degree == 2

    def test_quaternion_degree_four(self):
        entry = cohomology_entry(quaternion(8), 2)
        (gen,) = entry.presentation.generators
        assert (gen.name, gen.degree) == ("e", 4)

    def test_rank_three_names(self):
        entry = cohomology_entry(elementary_abelian(2, 3), 2)
        assert [g.name for g in entry.presentation.generators] == ["x1", "x2", "x3"]
        assert all(g.degree == 1 for g in entry.presentation.generators)

    def test_odd_elementary_degree_two(self):
        entry = cohomology_entry(elementary_abelian(3, 2), 3)
        assert all(g.degree == 2 for g in entry.presentation.generators)

    def test_dihedral_has_relation(self):
        entry = cohomology_entry(dihedral(8), 2)
        assert len(entry.presentation.relations) == 1

    def test_sporadic_witnesses_cover_five_points(self):
        entry = cohomology_entry("M11", 3)
        assert len(entry.spech().space.points) == 5

    def test_unknown_group_raises(self):
        with pytest.raises(GroupNotInCatalog):
            cohomology_entry(symmetric(4), 2)

    def test_unidentified_coprime_falls_back_to_field(self):
        entry = cohomology_entry(symmetric(3), 5)
        assert entry.key == ("unidentified", 6)
        assert entry.presentation.generators == ()


class TestRepPeriodMap:
    def test_elementary_rank_two(self):
        model, per = rep_period_map(elementary_abelian(2, 2), 2)
        closed = "⟨x1,x2⟩"
        assert per[closed] == 0
        for q in model.space.points:
            if q != closed:
                assert per[q] == 1

    def test_quaternion_single_point_four(self):
        model, per = rep_period_map(quaternion(8), 2)
        assert {q: per[q] for q in model.space.points} == {"⟨⟩": 4, "⟨e⟩": 0}

    def test_trivial_group_single_point_zero(self):
        model, per = rep_period_map("trivial", 2)
        assert [per[q] for q in model.space.points] == [0]

    def test_irrelevant_point_always_zero(self):
        model, per = rep_period_map(dihedral(8), 2)
        assert per["⟨α0,α1,β⟩"] == 0


class TestStmodPeriodMap:
    def test_d8_two_at_crossing(self):
        model, per = stmod_period_map(dihedral(8), 2)
        values = {q: per[q] for q in model.space.points}
        assert values == {
            "⟨α0⟩": 1,
            "⟨α1⟩": 1,
            "⟨α0,β⟩": 1,
            "⟨α1,β⟩": 1,
            "⟨α0,α1⟩": 2,
        }

    def test_c2n_single_point_two(self):
        for n in (4, 8):
            model, per = stmod_period_map(cyclic(n), 2)
            assert [per[q] for q in model.space.points] == [2]

    def test_c2_single_point_one(self):
        model, per = stmod_period_map(cyclic(2), 2)
        assert [per[q] for q in model.space.points] == [1]

    def test_trivial_group_empty(self):
        model, per = stmod_period_map("trivial", 2)
        assert model.space.points == ()

    def test_restriction_drops_exactly_one_point(self):
        full, _ = rep_period_map(quaternion(8), 2)
        res, _ = stmod_period_map(quaternion(8), 2)
        assert len(full.space.points) == len(res.space.points) + 1


class TestStatedTable:
    def test_sporadic_blanket_clash_is_flagged(self):
        assert stmod_discrepancies("M11", 3) == {"⟨b⟩": (8, 4)}

    def test_named_points_are_not_flagged(self):
        # The two exactly-named points agree, so only the blanket
        # default can clash; the clash list never contains them.
        clashes = stmod_discrepancies("M11", 3)
        assert "⟨⟩" not in clashes and "⟨a,b⟩" not in clashes

    def test_groups_without_a_table_report_nothing(self):
        assert stmod_discrepancies(cyclic(8), 2) == {}
        assert stmod_discrepancies(symmetric(4), 5) == {}


class TestDPermStrata:
    def test_q8_has_six_strata(self):
        strata = dperm_strata(quaternion(8), 2)
        assert len(strata) == 6
        weyls = sorted(s.weyl.name for s in strata)
        assert weyls == sorted(["Q8", "C2^2", "C2", "C2", "C2", "1"])

    def test_q8_labels_disambiguated(self):
        labels = [s.label for s in dperm_strata(quaternion(8), 2)]
        assert labels == ["1", "C2", "C4a", "C4b", "C4c", "Q8"]

    def test_c2_has_two_strata(self):
        strata = dperm_strata(cyclic(2), 2)
        assert [(s.label, s.weyl.name) for s in strata] == [("1", "C2"), ("C2", "1")]

    def test_coprime_prime_single_stratum(self):
        strata = dperm_strata(cyclic(3), 2)
        assert len(strata) == 1
        assert strata[0].subgroup_class.order == 1

    def test_normality_flags(self):
        by_label = {s.label: s.normal for s in dperm_strata(dihedral(8), 2)}
        assert by_label["C2a"] is False
        assert by_label["C2b"] is False
        assert by_label["C2c"] is True
        assert by_label["D8"] is True

    def test_unidentifiable_weyl_raises(self):
        with pytest.raises(WeylNotInCatalog):
            dperm_strata(symmetric(4), 2)

    def test_stratum_count_matches_class_count(self):
        for G, p in [(quaternion(8), 2), (dihedral(8), 2), (cyclic(6), 2), (cyclic(6), 3)]:
            strata = dperm_strata(G, p)
            asm = dperm_period_map(G, p, overrides=dperm_overrides(G.name, p))
            assert len(asm.closed_points) == len(strata)


class TestDPermPeriodMap:
    def test_q8_values(self):
        asm = dperm_period_map(quaternion(8), 2)
        values = {q: asm.periods[q] for q in asm.space.points}
        assert values["1:⟨⟩"] == 4
        for q in ("C2:⟨⟩", "C2:⟨x1⟩", "C2:⟨x2⟩", "C4a:⟨⟩", "C4b:⟨⟩", "C4c:⟨⟩"):
            assert values[q] == 1
        assert len(asm.closed_points) == 6
        for q in asm.closed_points:
            assert values[q] == 0

    def test_q8_all_tags_computed(self):
        asm = dperm_period_map(quaternion(8), 2)
        assert set(asm.tags.values()) == {TAG_COMPUTED}

    def test_d8_override_applied(self):
        asm = dperm_period_map(dihedral(8), 2)
        for q in ("C2a:⟨⟩", "C2b:⟨⟩"):
            assert asm.periods[q] == 1
            assert asm.tags[q] == TAG_DATASET

    def test_d8_without_override_reports_bound(self):
        asm = dperm_period_map(dihedral(8), 2, overrides={})
        for q in ("C2a:⟨⟩", "C2b:⟨⟩"):
            assert asm.periods[q] == 1
            assert asm.tags[q] == TAG_BOUND

    def test_trivial_group_single_closed_point(self):
        asm = dperm_period_map(cyclic(1), 2)
        assert asm.space.points == ("m(1)",)
        assert asm.periods["m(1)"] == 0

    def test_assembly_is_period_map(self):
        for G, p in [(quaternion(8), 2), (dihedral(8), 2), (cyclic(8), 2), (cyclic(6), 3)]:
            asm = dperm_period_map(G, p, overrides=dperm_overrides(G.name, p))
            assert check_period_map(asm.space, asm.periods)

    def test_p_group_zero_exactly_on_closed(self):
        for G in (quaternion(8), dihedral(8), cyclic(4), elementary_abelian(2, 2)):
            asm = dperm_period_map(G, 2, overrides=dperm_overrides(G.name, 2))
            for q in asm.space.points:
                if q in asm.closed_points:
                    assert asm.periods[q] == 0
                else:
                    assert asm.periods[q] > 0

    def test_dedekind_strata_match_weyl_stmod(self):
        for G in (quaternion(8), cyclic(8), elementary_abelian(2, 2)):
            asm = dperm_period_map(G, 2)
            for s in asm.strata:
                _, stper = stmod_period_map(s.weyl, 2)
                for q in s.variety.space.points:
                    if q == s.irrelevant:
                        continue
                    assert asm.periods[s.point_name(q)] == stper[q]

    def test_stratum_points_partition_space(self):
        asm = dperm_period_map(quaternion(8), 2)
        named = sorted(q for pts in asm.stratum_points().values() for q in pts)
        assert named == sorted(asm.space.points)


class TestClosedPointMembership:
    def test_q8_c4_in_very_closed(self):
        G = quaternion(8)
        c4 = next(H for H in subgroups(G) if len(H) == 4)
        assert perm_module_in_closed_point(G, 2, c4, G.elements) is True

    def test_trivial_h_never_inside(self):
        from ttperiods.groups import identity

        G = quaternion(8)
        triv = frozenset({identity(G.degree)})
        for Hp in subgroups(G):
            assert perm_module_in_closed_point(G, 2, Hp, triv) is False

    def test_s3_c3_against_c2(self):
        G = symmetric(3)
        c3 = next(H for H in subgroups(G) if len(H) == 3)
        c2 = next(H for H in subgroups(G) if len(H) == 2)
        assert perm_module_in_closed_point(G, 2, c3, c2) is True

    def test_very_closed_point_examples(self):
        assert very_closed_point_check(quaternion(8), 2)
        assert very_closed_point_check(symmetric(3), 3)
        assert very_closed_point_check(symmetric(3), 2)
        assert very_closed_point_check(cyclic(5), 3)

    def test_very_closed_point_exhaustive_small(self):
        for G in (cyclic(6), dihedral(8), elementary_abelian(3, 1), symmetric(4)):
            for p in (2, 3):
                assert very_closed_point_check(G, p)


class TestArtinTower:
    def test_p2_depth_four(self):
        rep = artin_tower(2, 4)
        by_index = {s.index: s for s in rep.strata}
        assert by_index[1].proj_eventual is None
        assert by_index[2].proj_eventual == 1
        for idx in (4, 8, 16):
            assert by_index[idx].proj_eventual == 2
        limit = by_index[None]
        assert limit.proj_sequence == (1, 2, 2, 2)
        assert limit.proj_eventual == 2
        for s in rep.strata:
            assert all(v == 0 for v in s.closed_sequence)

    def test_p3_depth_three(self):
        rep = artin_tower(3, 3)
        for s in rep.strata:
            if s.proj_eventual is not None:
                assert s.proj_eventual == 2

    def test_chain_periods(self):
        rep = artin_tower(2, 3)
        values = {q: rep.chain_periods[q] for q in rep.chain.points}
        assert values == {
            "m0": 0, "m1": 0, "m2": 0, "m3": 0,
            "s1": 1, "s2": 2, "s3": 2,
        }
        assert check_period_map(rep.chain, rep.chain_periods)

    def test_depth_zero(self):
        rep = artin_tower(5, 0)
        assert rep.chain.points == ("m0",)
        assert rep.chain_periods["m0"] == 0

    def test_depth_bound(self):
        with pytest.raises(ValueError):
            artin_tower(2, 7)


class TestDatasets:
    @pytest.mark.parametrize("name", DATASET_NAMES)
    def test_loads_and_validates(self, name):
        model, per = load_figure_dataset(name)
        assert check_period_map(model, per)

    @pytest.mark.parametrize(
        "name,builder",
        [
            ("stmod_d8", build_stmod_d8),
            ("dperm_q8", build_dperm_q8),
            ("dperm_d8", build_dperm_d8),
            ("ratm_r", build_ratm_r),
        ],
    )
    def test_shipped_files_match_builders(self, name, builder):
        assert load_figure_record(name) == builder()

    def test_unknown_name(self):
        with pytest.raises(UnknownDataset):
            load_figure_dataset("dperm_s4")

    def test_ratm_r_period_multiset(self):
        model, per = load_figure_dataset("ratm_r")
        counts = sorted(per[q] for q in model.points)
        assert counts == [0, 0, 0, 0, 1, 1]

    def test_ratm_r_has_nonclosed_aperiodic_points(self):
        model, per = load_figure_dataset("ratm_r")
        closed = model.closed_points()
        aperiodic = {q for q in model.points if per[q] == 0}
        assert len(closed) == 2
        assert closed < aperiodic

    def test_stmod_d8_equals_engine_output(self):
        model, per = load_figure_dataset("stmod_d8")
        engine, eper = stmod_period_map(dihedral(8), 2)
        assert model == engine.space
        assert {q: per[q] for q in model.points} == {
            q: eper[q] for q in engine.space.points
        }

    def test_dperm_d8_matches_engine_on_derivable_points(self):
        rec = load_figure_record("dperm_d8")
        asm = dperm_period_map(dihedral(8), 2)
        for q in asm.space.points:
            assert rec["periods"][q] == asm.periods[q]
            assert rec["tags"][q] == asm.tags[q]

    def test_dperm_q8_point_count(self):
        model, per = load_figure_dataset("dperm_q8")
        assert len(model.points) == 14
        assert len(model.closed_points()) == 6

    def test_dperm_q8_witness_point(self):
        model, per = load_figure_dataset("dperm_q8")
        assert per["C2:⟨x1+x2⟩"] == 1
        assert model.specializes("C2:⟨⟩", "C2:⟨x1+x2⟩")
        assert model.specializes("C2:⟨x1+x2⟩", "m(C4c)")

    def test_dataset_edges_merge_cleanly(self):
        # figure edges must be real edges of the stored relation
        for name in DATASET_NAMES:
            rec = load_figure_record(name)
            model, _ = model_from_obj(rec)
            for a, b in rec.get("figure_edges", []):
                assert model.specializes(a, b)

    def test_strata_grouping_partitions_points(self):
        for name in DATASET_NAMES:
            rec = load_figure_record(name)
            grouped = sorted(q for pts in rec["strata"].values() for q in pts)
            assert grouped == sorted(rec["points"])

    def test_overrides_lookup(self):
        assert dperm_overrides("D8", 2) == {"C2a:⟨⟩": 1, "C2b:⟨⟩": 1}
        assert dperm_overrides("D8", 3) == {}
        assert dperm_overrides("Q8", 2) == {}
        assert dperm_overrides(None, 2) == {}
