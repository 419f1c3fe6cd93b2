"""Group-graded tabulated rings: validation, ideals, primes, fractions."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ttperiods.multigraded import (
    AbelianGroup,
    RingShapeError,
    SizeBound,
    additive_span,
    all_vectors,
    degree_zero_units,
    homogeneous_units,
    ideal_generated_ring,
    ideal_name_ring,
    is_ring_prime,
    make_multigraded,
    mg_mul,
    mult_system_ring,
    ring_fractions,
    ring_ideals,
    ring_primes,
    ring_total_ideal,
    spech_multigraded,
    validate_multigraded,
)
from ttperiods.tworing_catalog import RING_NAMES, build_ring


class TestAbelianGroup:
    def test_canon_accepts_ints_for_rank_one(self):
        g = AbelianGroup((4,))
        assert g.canon(7) == (3,)
        assert g.canon((-1,)) == (3,)

    def test_canon_rejects_wrong_rank(self):
        with pytest.raises(RingShapeError):
            AbelianGroup((2, 2)).canon((1,))

    def test_arithmetic(self):
        g = AbelianGroup((2, 3))
        assert g.add((1, 2), (1, 2)) == (0, 1)
        assert g.sub((0, 0), (1, 1)) == (1, 2)
        assert g.order() == 6

    def test_submonoid_closure_is_a_subgroup(self):
        # In a finite group, closing under addition alone already gives
        # the subgroup generated by the elements.
        g = AbelianGroup((6,))
        closed = g.submonoid_closure([(2,)])
        assert closed == {(0,), (2,), (4,)}
        assert all(g.neg(x) in closed for x in closed)

    def test_bad_orders_rejected(self):
        with pytest.raises(RingShapeError):
            AbelianGroup(())
        with pytest.raises(RingShapeError):
            AbelianGroup((0,))


def rank_two_signed():
    # Two anticommuting order-two units over F3; c spans their product.
    return make_multigraded(
        "rank2", (2, 2), 3,
        components={(0, 0): ("1",), (1, 0): ("a",), (0, 1): ("b",), (1, 1): ("c",)},
        products={
            ("a", "a"): "1",
            ("b", "b"): "1",
            ("a", "b"): "c",
            ("a", "c"): "b",
            ("b", "c"): {"a": -1},
            ("c", "c"): {"1": -1},
        },
        tau_eps={(0, 1): -1},
    )


class TestMakeMultigraded:
    def test_catalog_rings_validate(self):
        for name in RING_NAMES:
            assert validate_multigraded(build_ring(name)).ok, name

    def test_identity_products_are_implicit(self):
        ring = build_ring("laurent_f2_z2")
        one = ((0,), ring.one)
        u = ((1,), (1,))
        assert mg_mul(ring, one, u) == u
        assert mg_mul(ring, u, u) == one

    def test_transposed_products_follow_the_sign_table(self):
        ring = build_ring("koszul_f3_z2")
        th = ((1,), (1,))
        assert mg_mul(ring, th, th) == ((0,), (0,))

    def test_missing_product_rejected(self):
        with pytest.raises(RingShapeError):
            make_multigraded(
                "m", (2,), 2,
                components={0: ("1",), 1: ("a", "b")},
                products={("a", "a"): None, ("a", "b"): None},
            )

    def test_reused_basis_name_rejected(self):
        with pytest.raises(RingShapeError):
            make_multigraded(
                "m", (2,), 2,
                components={0: ("1", "x"), 1: ("x",)},
            )

    def test_component_cap_enforced(self):
        with pytest.raises(SizeBound):
            make_multigraded(
                "m", (2,), 2,
                components={0: ("1", "a", "b", "c")},
            )

    def test_tau_sign_must_fit_the_factor_order(self):
        # An order-3 factor cannot carry the sign -1 in char 5.
        with pytest.raises(RingShapeError):
            make_multigraded(
                "m", (3,), 5,
                components={0: ("1",)},
                tau_eps=-1,
            )

    def test_rank_two_needs_a_sign_mapping(self):
        with pytest.raises(RingShapeError):
            make_multigraded("m", (2, 2), 3, components={(0, 0): ("1",)}, tau_eps=-1)

    def test_rank_two_sign_mapping_accepted(self):
        ring = rank_two_signed()
        assert validate_multigraded(ring).ok
        a = ((1, 0), (1,))
        b = ((0, 1), (1,))
        # b*a = -a*b = -c under the chosen sign.
        assert mg_mul(ring, b, a) == ((1, 1), (2,))

    def test_zero_ring(self):
        ring = build_ring("zero")
        assert ring.is_zero_ring()
        assert ring.one == ()
        assert validate_multigraded(ring).ok


class TestValidateMultigraded:
    def test_composite_characteristic_fails(self):
        ring = build_ring("laurent_f2_z2")
        ring.char = 4
        assert validate_multigraded(ring).reason == "char_not_prime"

    def test_broken_associativity_detected(self):
        ring = build_ring("laurent_f2_z4")
        tables = dict(ring.products)
        tables[((1,), (2,))] = (((0,),),)  # t1*t2 = 0 clashes with t1*t1*t1
        ring.products = tables
        assert validate_multigraded(ring).reason == "not_associative"

    def test_asymmetric_transposition_detected(self):
        # Asymmetry needs two distinct degrees, so rank two.
        ring = rank_two_signed()
        tau = dict(ring.tau)
        tau[((1, 0), (0, 1))] = (1,)
        ring.tau = tau
        diag = validate_multigraded(ring)
        assert not diag.ok
        assert diag.reason in ("transposition_not_symmetric", "commutation_fails")

    def test_nonunit_transposition_detected(self):
        ring = build_ring("laurent_f3_z4")
        tau = dict(ring.tau)
        for y in ring.group.elements():
            tau[((1,), y)] = (0,)
            tau[(y, (1,))] = (0,)
        ring.tau = tau
        assert validate_multigraded(ring).reason == "transposition_not_unit"

    def test_commutation_failure_detected(self):
        ring = build_ring("dual_laurent_f2_z2")
        tables = {k: [list(r) for r in v] for k, v in ring.products.items()}
        # e*u and u*e must agree in char 2; break one side only.
        tables[((0,), (1,))][1][0] = (1, 0)
        ring.products = {k: tuple(tuple(r) for r in v) for k, v in tables.items()}
        diag = validate_multigraded(ring)
        assert not diag.ok


def subspaces(p, dim):
    """Every additive subspace, as a frozenset including zero."""
    vecs = [v for v in all_vectors(p, dim) if any(v)]
    out = set()
    for r in range(3):
        for gens in itertools.combinations(vecs, r):
            out.add(additive_span(p, gens, dim))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def oracle_ring_ideals(ring):
    """Brute force over componentwise subspace families.

    Independent of the principal-join route: a family is an ideal
    exactly when it absorbs multiplication by every homogeneous
    element.  Only viable for tiny instances.
    """
    degrees = ring.group.elements()
    per_degree = [subspaces(ring.char, ring.dims[x]) for x in degrees]
    elements = list(ring.homogeneous_elements())
    found = set()
    for choice in itertools.product(*per_degree):
        members = {
            (x, v) for x, sub in zip(degrees, choice) for v in sub if any(v)
        }
        ok = True
        for m in members:
            for b in elements:
                for prod in (mg_mul(ring, b, m), mg_mul(ring, m, b)):
                    if any(prod[1]) and prod not in members:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            found.add(frozenset(members))
    return found


class TestIdeals:
    def test_lattice_sizes(self):
        expected = {
            "zero": 1,
            "laurent_f2_z2": 2,
            "laurent_f2_z4": 2,
            "laurent_f3_z4": 2,
            "nilpotent_f2_z2": 3,
            "dual_laurent_f2_z2": 3,
            "koszul_f3_z2": 3,
        }
        for name, n in expected.items():
            assert len(ring_ideals(build_ring(name))) == n, name

    def test_lattice_matches_brute_force(self):
        for name in ("laurent_f2_z2", "nilpotent_f2_z2", "dual_laurent_f2_z2",
                     "koszul_f3_z2", "laurent_f2_z4"):
            ring = build_ring(name)
            assert set(ring_ideals(ring).ideals) == oracle_ring_ideals(ring), name

    def test_bottom_and_top(self):
        lat = ring_ideals(build_ring("nilpotent_f2_z2"))
        assert lat.bottom() == frozenset()
        assert lat.top() == ring_total_ideal(build_ring("nilpotent_f2_z2"))

    def test_nilpotent_zero_ideal_is_not_prime(self):
        # x*x lands in the zero ideal while x stays outside.
        ring = build_ring("nilpotent_f2_z2")
        assert not is_ring_prime(ring, frozenset())

    def test_primes(self):
        ring = build_ring("dual_laurent_f2_z2")
        primes = ring_primes(ring)
        assert [ideal_name_ring(ring, i) for i in primes] == ["⟨e⟩"]
        ring = build_ring("laurent_f3_z4")
        primes = ring_primes(ring)
        assert [ideal_name_ring(ring, i) for i in primes] == ["⟨⟩"]

    def test_zero_ring_has_no_primes(self):
        # The only ideal is empty, which equals the total one, so the
        # spectrum is empty.
        ring = build_ring("zero")
        model, names = spech_multigraded(ring)
        assert model.points == () and names == {}

    def test_spectrum_model_edges_follow_inclusion(self):
        ring = build_ring("koszul_f3_z2")
        model, names = spech_multigraded(ring)
        assert set(model.points) == {"⟨th⟩"}

    def test_maximal_proper(self):
        ring = build_ring("dual_laurent_f2_z2")
        lat = ring_ideals(ring)
        tops = lat.maximal_proper()
        assert len(tops) == 1 and ideal_name_ring(ring, tops[0]) == "⟨e⟩"

    def test_closure_is_idempotent(self):
        ring = build_ring("dual_laurent_f2_z2")
        gens = [((1,), (0, 1))]
        once = ideal_generated_ring(ring, gens)
        assert ideal_generated_ring(ring, once) == once


class TestSystemsAndFractions:
    def test_units(self):
        ring = build_ring("dual_laurent_f2_z2")
        units = {ring.render(u) for u in homogeneous_units(ring)}
        assert units == {"1", "1+e", "u", "u+eu"}
        assert {ring.render(u) for u in degree_zero_units(ring)} == {"1", "1+e"}

    def test_system_closes_units(self):
        ring = build_ring("laurent_f2_z4")
        sys = mult_system_ring(ring)
        assert len(sys) == 4

    def test_nilpotent_system_reaches_zero(self):
        ring = build_ring("nilpotent_f2_z2")
        sys = mult_system_ring(ring, [((1,), (1,))])
        assert ((0,), (0,)) in sys

    def test_fraction_classes_at_units(self):
        ring = build_ring("laurent_f2_z2")
        fr = ring_fractions(ring, mult_system_ring(ring))
        assert all(len(fr.classes[x]) == 2 for x in ring.group.elements())

    def test_fraction_addition(self):
        ring = build_ring("laurent_f2_z2")
        fr = ring_fractions(ring, mult_system_ring(ring))
        one = ((0,), (1,))
        u = ((1,), (1,))
        cls_u = fr.class_of((u, one))
        assert fr.add(cls_u, cls_u) == fr.zero_class((1,))
        assert fr.add(cls_u, fr.zero_class((1,))) == cls_u

    def test_inverting_a_nilpotent_collapses_everything(self):
        ring = build_ring("nilpotent_f2_z2")
        sys = mult_system_ring(ring, [((1,), (1,))])
        fr = ring_fractions(ring, sys)
        assert all(len(fr.classes[x]) == 1 for x in ring.group.elements())

    def test_fractions_separate_what_units_cannot_merge(self):
        ring = build_ring("dual_laurent_f2_z2")
        fr = ring_fractions(ring, mult_system_ring(ring))
        # e and 0 stay apart: no unit multiple of e vanishes.
        e = ((0,), (0, 1))
        one = ((0,), (1, 0))
        assert fr.class_of((e, one)) != fr.zero_class((0,))


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(min_value=0, max_value=7), max_size=4))
def test_ring_closure_idempotent_on_random_generators(picks):
    ring = build_ring("dual_laurent_f2_z2")
    elements = list(ring.homogeneous_elements())
    gens = [elements[i % len(elements)] for i in picks]
    once = ideal_generated_ring(ring, gens)
    assert ideal_generated_ring(ring, once) == once
    lat = set(ring_ideals(ring).ideals)
    assert once in lat


@settings(max_examples=30, deadline=None)
@given(
    st.sets(st.integers(min_value=0, max_value=7), max_size=3),
    st.sets(st.integers(min_value=0, max_value=7), max_size=3),
)
def test_join_is_commutative(a_picks, b_picks):
    ring = build_ring("koszul_f3_z2")
    elements = list(ring.homogeneous_elements())
    ga = [elements[i % len(elements)] for i in a_picks]
    gb = [elements[i % len(elements)] for i in b_picks]
    ia = ideal_generated_ring(ring, ga)
    ib = ideal_generated_ring(ring, gb)
    assert ideal_generated_ring(ring, ia | ib) == ideal_generated_ring(ring, ib | ia)
