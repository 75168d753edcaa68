import itertools
import random

import pytest
from hypothesis import given, strategies as st

from afp.errors import CapExceeded, NotPMonotone, ShapeMismatch
from afp.io import morphism_from_json, morphism_to_json
from afp.lattice import TERMINAL, ProductShape, chain, power, two
from afp.morphism import (
    BY_CONSTRUCTION,
    EXHAUSTIVE,
    ApproxMorphism,
    base_morphism,
    bilattice_points,
    classify,
    compose,
    constant,
    count_morphisms,
    diagonal,
    enumerate_morphisms,
    from_function,
    identity,
    invert_permutation,
    is_consistent,
    leq_p,
    make_morphism,
    p_monotonicity_witness,
    product_morphism,
    projection,
    random_morphism,
    spot_check,
    symmetric_morphism,
    tupling,
)

L2 = ProductShape((two(),))
L22 = power(two(), 2)
ALL_22 = list(enumerate_morphisms(L2, L2))


def brute_force_count(domain, codomain):
    """Count precision-monotone pair functions by testing every function."""
    pts = list(bilattice_points(domain))
    outs = list(bilattice_points(codomain))
    pairs = [(i, j) for i, p in enumerate(pts) for j, q in enumerate(pts) if leq_p(domain, p, q)]
    return sum(
        all(leq_p(codomain, vals[i], vals[j]) for i, j in pairs)
        for vals in itertools.product(outs, repeat=len(pts))
    )


def test_count_2_to_2_is_36_and_matches_brute_force():
    assert count_morphisms(L2, L2) == 36 == len(ALL_22) == len(set(ALL_22))
    assert brute_force_count(L2, L2) == 36


def test_count_terminal_to_2_is_4():
    assert count_morphisms(TERMINAL, L2) == 4 == brute_force_count(TERMINAL, L2)


def test_count_2x2_to_2_is_168_squared():
    # 168 monotone maps from the 16-point precision poset to 2
    assert count_morphisms(L22, L2) == 168 ** 2 == 28224


def test_count_chain3_matches_brute_force():
    C3 = ProductShape((chain(3),))
    assert count_morphisms(TERMINAL, C3) == 9
    # 9^9 whole functions is too many; count each component by brute force
    # (lower components: monotone in x, antitone in x', 3^9 candidates)
    pts = list(itertools.product(range(3), repeat=2))
    lower = sum(
        all(v[i] <= v[j] for i, (x, xp) in enumerate(pts) for j, (y, yp) in enumerate(pts)
            if x <= y and yp <= xp)
        for v in itertools.product(range(3), repeat=9)
    )
    assert count_morphisms(C3, C3) == lower ** 2


def test_enumeration_order_starts_with_constant_zero_zero():
    first = ALL_22[0]
    assert all(first(p) == (0, 0) for p in bilattice_points(L2))
    assert all(ALL_22[-1](p) == (1, 1) for p in bilattice_points(L2))


def test_every_enumerated_morphism_is_certified():
    for f in ALL_22:
        assert f.certificate == EXHAUSTIVE
        assert p_monotonicity_witness(f) is None


def test_make_morphism_rejects_non_monotone_with_witness():
    table = {p: (1 - p[0], p[1]) for p in bilattice_points(L2)}
    with pytest.raises(NotPMonotone) as err:
        make_morphism(L2, L2, table)
    p, q = err.value.witness
    assert leq_p(L2, p, q) and not leq_p(L2, table[p], table[q])


def test_make_morphism_rejects_bad_tables():
    table = {p: p for p in bilattice_points(L2)}
    with pytest.raises(ShapeMismatch):
        make_morphism(L2, L2, {k: v for k, v in list(table.items())[1:]})
    with pytest.raises(ShapeMismatch):
        make_morphism(L2, L2, {**table, (0, 1): (0, 2)})
    with pytest.raises(ShapeMismatch):
        make_morphism(L2, L2, {**table, (0, 0): (0,)})


def test_category_laws_exhaustive_on_2():
    idm = identity(L2)
    for f in ALL_22:
        assert compose(f, idm) == f == compose(idm, f)
    sample = ALL_22[::5]
    for f, g, h in itertools.product(sample, repeat=3):
        assert compose(h, compose(g, f)) == compose(compose(h, g), f)


def test_projections_after_tupling_recover_components():
    for f, g in itertools.product(ALL_22[::3], repeat=2):
        t = tupling(f, g)
        assert t.codomain == L22
        assert compose(projection(L22, 0), t) == f
        assert compose(projection(L22, 1), t) == g


def test_tupling_is_unique():
    # any morphism into 2x2 with the same projections equals the tupling
    f, g = ALL_22[7], ALL_22[20]
    t = tupling(f, g).materialized()
    rng = random.Random(3)
    for _ in range(300):
        h = random_morphism(L2, L22, rng)
        same = compose(projection(L22, 0), h) == f and compose(projection(L22, 1), h) == g
        assert same == (h == t)


def test_tupling_layout_is_lower_then_upper():
    f = constant(L2, L2, (0, 1))
    g = constant(L2, L2, (1, 1))
    assert tupling(f, g)((0, 0)) == (0, 1, 1, 1)


def test_product_morphism_interleaves_blocks():
    neg = from_function(L2, L2, lambda x, xp: (1 - xp, 1 - x))
    idm = identity(L2)
    fx = product_morphism(neg, idm)
    # input (x, y, x', y') = (0, 1, 0, 1): neg sees (0, 0), id sees (1, 1)
    assert fx((0, 1, 0, 1)) == (1, 1, 1, 1)
    assert fx == tupling(compose(neg, projection(L22, 0)), projection(L22, 1))


def test_base_morphisms_and_diagonal():
    swap = base_morphism((1, 0), L22)
    assert swap((0, 1, 1, 0)) == (1, 0, 0, 1)
    assert compose(swap, swap) == identity(L22)
    d = diagonal(L2, 3)
    assert d((0, 1)) == (0, 0, 0, 1, 1, 1)
    assert invert_permutation((2, 0, 1)) == (1, 2, 0)
    with pytest.raises(ValueError):
        invert_permutation((0, 0))


def test_base_morphism_composition_law():
    blocks = [two()] * 3
    for rho, sigma in itertools.product(itertools.permutations(range(3)), repeat=2):
        # b_sigma after b_rho reindexes output k by rho[sigma[k]]
        lhs = compose(base_morphism(sigma, blocks), base_morphism(rho, blocks))
        rhs = base_morphism(tuple(rho[s] for s in sigma), blocks)
        assert lhs == rhs


def test_compose_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        compose(identity(L2), identity(L22))
    with pytest.raises(ShapeMismatch):
        tupling(identity(L2), identity(L22))


def test_classify_reference_morphisms():
    neg = from_function(L2, L2, lambda x, xp: (1 - xp, 1 - x))
    prof = classify(neg)
    assert prof.consistent and prof.symmetric and prof.a_class and prof.as_class
    odd = from_function(L2, L2, lambda x, xp: (1, max(1 - x, xp)))
    prof = classify(odd)
    assert prof.consistent and prof.as_class and not prof.symmetric
    top = constant(TERMINAL, L2, (1, 0))
    assert not classify(top).consistent and not classify(top).a_class


def test_symmetric_implies_equal_on_diagonal():
    for f in ALL_22:
        if classify(f).symmetric:
            assert all(f((x, x))[0] == f((x, x))[1] for x in (0, 1))


def test_identities_and_projections_are_consistent_and_symmetric():
    for m in (identity(L2), identity(L22), projection(L22, 0), projection(L22, 1),
              diagonal(L2, 2)):
        prof = classify(m)
        assert prof.consistent and prof.symmetric


def test_consistent_and_symmetric_closed_under_composition_and_tupling():
    cons = [f for f in ALL_22 if classify(f).consistent]
    sym = [f for f in ALL_22 if classify(f).symmetric]
    assert cons and sym
    for f, g in itertools.product(cons, repeat=2):
        assert classify(compose(g, f)).consistent
        assert classify(tupling(f, g)).consistent
    for f, g in itertools.product(sym, repeat=2):
        assert classify(compose(g, f)).symmetric
        assert classify(tupling(f, g)).symmetric


def test_symmetric_morphism_constructor():
    f = symmetric_morphism(L2, L2, lambda p: (1 - p[1],))
    assert classify(f).symmetric and f((0, 0)) == (1, 1)


def test_rule_backed_morphism_memoises():
    calls = []

    def rule(p):
        calls.append(p)
        return p

    f = ApproxMorphism(L2, L2, rule)
    f((0, 1))
    f((0, 1))
    assert calls == [(0, 1)] and f.certificate == BY_CONSTRUCTION and f.backing == "rule"
    assert f.materialized().backing == "table"


def test_spot_check_catches_flipped_map():
    bad = ApproxMorphism(L2, L2, lambda p: (1 - p[0], p[1]))
    assert spot_check(bad, seed=0, k=64) is not None
    assert spot_check(identity(L2), seed=0, k=64) is None


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        count_morphisms(power(two(), 4), ProductShape((two(),)))


def test_json_round_trip():
    for f in ALL_22[::4]:
        assert morphism_from_json(morphism_to_json(f)) == f


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([(L2, L2), (L22, L2), (L2, L22)]))
def test_random_morphisms_are_monotone(seed, shapes):
    f = random_morphism(*shapes, random.Random(seed))
    assert p_monotonicity_witness(f) is None


@given(st.integers(0, 2 ** 32 - 1))
def test_random_chain3_morphisms_are_monotone(seed):
    C3 = ProductShape((chain(3),))
    f = random_morphism(C3, C3, random.Random(seed))
    assert p_monotonicity_witness(f) is None


@given(st.sampled_from(ALL_22), st.sampled_from(ALL_22))
def test_consistent_pairs_map_to_consistent_pairs(f, g):
    h = compose(g, f)
    if classify(f).consistent and classify(g).consistent:
        assert all(is_consistent(L2, h(p)) for p in bilattice_points(L2) if is_consistent(L2, p))
