import random

import pytest

from afp.errors import ShapeMismatch
from afp.fixpoint import well_founded
from afp.identities import (
    SCHEMAS,
    check,
    collapses,
    cyclic_group,
    double_dagger_sides,
    instance_space,
    lift_along_diagonal,
    pairing_intermediate,
    pairing_special_sides,
    parameter_sides,
    search_counterexample,
)
from afp.lattice import ProductShape, chain, power, two
from afp.morphism import (
    bilattice_points,
    compose,
    diagonal,
    from_function,
    identity,
    product_morphism,
    random_morphism,
    tupling,
)

L2 = ProductShape((two(),))
L22 = power(two(), 2)


def neg_swap():
    return from_function(L2, L2, lambda x, xp: (1 - xp, 1 - x))


def cross():
    return from_function(L22, L2, lambda x, y, xp, yp: (1 - yp, 1 - y))


def self_neg():
    return from_function(L22, L2, lambda x, y, xp, yp: (1 - xp, 1 - x))


def test_composition_simple_and_squaring_fail_with_exact_values():
    r = check("composition_simple", neg_swap())
    assert (r.holds, r.lhs, r.rhs) == (False, (1, 1), (0, 0))
    r = check("squaring", neg_swap())
    assert (r.holds, r.lhs, r.rhs) == (False, (0, 0), (0, 1))


def test_pairing_fails_with_exact_layout():
    r = check("pairing", cross(), self_neg())
    assert (r.holds, r.lhs, r.rhs) == (False, (0, 0, 1, 1), (1, 0, 1, 0))
    h = pairing_intermediate(cross(), self_neg())
    assert h == identity(L2) and well_founded(h).point() == (0, 0)


def test_double_dagger_fails_with_exact_values():
    g = from_function(L22, L2, lambda x, y, xp, yp: (1 - yp, 1 - x))
    r = check("double_dagger", g)
    assert (r.holds, r.lhs, r.rhs) == (False, (1, 0), (0, 1))


def test_double_dagger_holds_when_only_first_block_matters():
    g = from_function(L22, L2, lambda x, y, xp, yp: (1 - xp, 1 - x))
    assert check("double_dagger", g).holds
    rng = random.Random(4)
    for _ in range(30):
        f = random_morphism(L2, L2, rng)
        lifted = compose(f, from_function(L22, L2, lambda x, y, xp, yp: (x, xp)))
        assert check("double_dagger", lifted).holds


def test_pairing_special_hand_example():
    g = from_function(L2, L2, lambda y, yp: (1 - yp, 1 - y))
    r = check("pairing_special", cross(), g)
    assert r.holds
    lhs, rhs = pairing_special_sides(cross(), g)
    assert lhs.point() == rhs.point() == (0, 0, 1, 1)


def test_parameter_examples():
    assert check("parameter", cross(), identity(L2)).holds
    lhs, rhs = parameter_sides(cross(), identity(L2))
    assert all(lhs((z, zp)) == rhs((z, zp)) == (1 - zp, 1 - z) for z, zp in bilattice_points(L2))


def test_permutation_examples():
    f = tupling(cross(), self_neg())  # the pairing left side, 2x2 -o 2x2
    assert check("permutation", f, rho=(1, 0)).holds
    assert check("permutation", f, rho=(0, 1)).holds
    with pytest.raises(ShapeMismatch):
        check("permutation", f, rho=(0, 1, 2))


def test_group_trivial_and_cyclic():
    rng = random.Random(9)
    for _ in range(20):
        f = random_morphism(L2, L2, rng)
        assert check("group", f, cayley=[[0]]).holds
    with pytest.raises(ValueError):
        check("group", cross(), cayley=[[0, 0], [1, 1]])
    assert search_counterexample("group", two(), mode="sample", samples=60, seed=1,
                                 cayley=cyclic_group(3)).counterexample is None


def test_weak_functorial_premise_and_conclusion():
    g = neg_swap()
    cs = collapses(L2, 2)
    f = lift_along_diagonal(g, [cs[0], cs[3]])
    assert check("weak_functorial", f, g).holds
    other = from_function(L22, L22, lambda x, y, xp, yp: (x, y, xp, yp))
    r = check("weak_functorial", other, g)
    assert r.holds is None and r.status == "premise not satisfied"
    # n = 1: f = g
    assert check("weak_functorial", g, g).holds


def test_collapses_are_retractions_of_the_diagonal():
    for c in collapses(L2, 3):
        assert compose(c, diagonal(L2, 3)) == identity(L2)


def test_witness_is_first_in_canonical_order_and_reproducible():
    g = from_function(L22, L2, lambda x, y, xp, yp: (1 - yp, 1 - x))
    r = check("double_dagger", g)
    lhs, rhs = double_dagger_sides(g)
    assert lhs(r.witness) == r.lhs and rhs(r.witness) == r.rhs
    assert r.to_dict()["lhs"] == [[1], [0]]


@pytest.mark.parametrize("schema", ["squaring", "composition_simple", "double_dagger", "pairing"])
def test_invalid_schemas_have_counterexamples_over_2(schema):
    out = search_counterexample(schema, two(), mode="sample", samples=3000, seed=0)
    assert out.found
    r = out.counterexample
    lhs, rhs = SCHEMAS[schema].sides(*[r.instance[s] for s in SCHEMAS[schema].slots])
    assert (lhs(r.witness), rhs(r.witness)) == (r.lhs, r.rhs)


def test_squaring_first_counterexample_in_enumeration_order():
    out = search_counterexample("squaring", two(), mode="exhaustive")
    assert out.checked == 22 and (out.counterexample.lhs, out.counterexample.rhs) == ((0, 0), (0, 1))


@pytest.mark.parametrize("schema", ["fixed_point", "weak_functorial"])
def test_small_valid_schemas_exhaustive(schema):
    out = search_counterexample(schema, two(), mode="exhaustive")
    assert not out.found and out.checked == out.space


@pytest.mark.parametrize("schema,extra", [("parameter", {}), ("permutation", {"n": 2}),
                                          ("pairing_special", {}), ("group", {}),
                                          ("fixed_point", {})])
def test_valid_schemas_sampled_over_chain3(schema, extra):
    out = search_counterexample(schema, chain(3), mode="sample", samples=40, seed=3, **extra)
    assert not out.found


def test_permutation_of_three_blocks_sampled():
    out = search_counterexample("permutation", two(), mode="sample", samples=40, seed=0, n=3)
    assert not out.found


def test_search_is_deterministic():
    a = search_counterexample("parameter", two(), mode="sample", samples=50, seed=8).to_dict()
    b = search_counterexample("parameter", two(), mode="sample", samples=50, seed=8).to_dict()
    assert a == b and a["seed"] == 8


def test_auto_mode_picks_exhaustive_for_small_spaces():
    assert search_counterexample("fixed_point", two()).mode == "exhaustive"
    assert instance_space("permutation", two()).count() == 28224 ** 2


def test_unknown_schema():
    with pytest.raises(ValueError):
        check("nope")
    with pytest.raises(ValueError):
        instance_space("nope", two())


def test_product_with_identity_leaves_parameter_alone():
    f = product_morphism(neg_swap(), identity(L2))
    assert f((0, 1, 1, 0)) == (0, 1, 1, 0)
