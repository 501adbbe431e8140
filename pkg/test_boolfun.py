import random

import pytest

from boolfun import (
    BooleanFunction, GraphPropertySpec, adversary_strategy, bnh_complex, bnh_slots,
    check_adversary, decision_tree_complexity, enumerate_monotone_properties, is_evasive,
    isomorphism_classes, make_property, naive_decision_tree_complexity, property_to_function,
    restricted_function_bnh, sensitivity, subgraph_copy_masks, validate_property,
)
from errors import BadShape, BudgetExceeded, NotDownwardClosed, TooLarge
from hgraph import named
from scomplex import euler_characteristic


def address(n_address):
    """Selector function: the address bits pick one of the data bits."""
    n = n_address + (1 << n_address)
    return BooleanFunction.from_callable(
        n, lambda x: x >> (n_address + (x & ((1 << n_address) - 1))) & 1)


@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_closed_forms(n):
    assert decision_tree_complexity(BooleanFunction.and_(n)).value == n
    assert decision_tree_complexity(BooleanFunction.or_(n)).value == n
    assert decision_tree_complexity(BooleanFunction.parity(n)).value == n
    assert decision_tree_complexity(BooleanFunction.constant(n, 0)).value == 0
    assert decision_tree_complexity(BooleanFunction.dictator(n, n - 1)).value == 1


def test_non_evasive_functions():
    f = address(1)
    assert f.n_vars == 3
    assert decision_tree_complexity(f).value == 2
    assert not is_evasive(f)
    assert decision_tree_complexity(address(2)).value == 3

    majority = BooleanFunction.from_callable(3, lambda x: bin(x).count("1") >= 2)
    assert is_evasive(majority)


def test_minimax_matches_reference_recursion():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(1, 5)
        f = BooleanFunction(n, rng.getrandbits(1 << n))
        want = naive_decision_tree_complexity(f)
        assert decision_tree_complexity(f).value == want
        assert decision_tree_complexity(f, memo_key="table").value == want


def test_budget_reports_bounds():
    with pytest.raises(BudgetExceeded) as info:
        decision_tree_complexity(BooleanFunction.parity(6), budget=1)
    assert (info.value.lo, info.value.hi) == (6, 6)

    # two address bits and one data bit are sensitive at once
    with pytest.raises(BudgetExceeded) as info:
        decision_tree_complexity(address(2), budget=1)
    assert (info.value.lo, info.value.hi) == (3, 6)


def test_sensitivity():
    assert sensitivity(BooleanFunction.and_(4)) == 4
    assert sensitivity(BooleanFunction.constant(3, 1)) == 0
    assert sensitivity(address(1)) == 2
    majority = BooleanFunction.from_callable(3, lambda x: bin(x).count("1") >= 2)
    assert sensitivity(majority) == 2


def test_adversary_certificate():
    f = BooleanFunction.and_(3)
    result = decision_tree_complexity(f, certificate=True)
    assert result.adversary["value"] == 3
    assert check_adversary(f, result.adversary)
    assert not check_adversary(f, dict(result.adversary, value=4))
    assert not check_adversary(f, {"value": 3, "answers": {}})
    with pytest.raises(TooLarge):
        adversary_strategy(BooleanFunction.and_(13))


def test_table_structure():
    f = BooleanFunction.and_(3)
    assert f.weight() == 1
    assert f.restrict(0, 0).is_constant()
    assert BooleanFunction.dictator(4, 2).relevant_vars() == [2]
    moved = BooleanFunction.dictator(3, 0).permute_vars([2, 0, 1])
    assert moved.table == BooleanFunction.dictator(3, 1).table
    assert BooleanFunction.from_bits(3, f.to_bits()).table == f.table
    assert BooleanFunction.from_dict(f.to_dict()) == f
    with pytest.raises(BadShape):
        BooleanFunction(2, 1 << 5)
    with pytest.raises(TooLarge):
        BooleanFunction(25, 0)


@pytest.mark.parametrize("name", ["triangle-free", "contains-triangle", "connectivity",
                                  "max-edges:2", "no-edges"])
def test_properties_on_four_vertices_are_evasive(name):
    f = property_to_function(make_property(name, 4))
    assert f.n_vars == 6
    assert f.order_tag == "lex-pairs"
    assert decision_tree_complexity(f).value == 6


def test_property_tables():
    f = property_to_function(make_property("triangle-free", 4))
    assert f.weight() == 41
    assert property_to_function(make_property("empty", 3)).table == 0
    forbid_p3 = property_to_function(make_property("forbid:P3", 3))
    assert forbid_p3.weight() == 4
    with pytest.raises(BadShape):
        make_property("planar", 4)


def test_validate_property():
    spec = make_property("triangle-free", 4)
    assert validate_property(spec) is spec

    labelled = GraphPropertySpec(3, lambda G: G.has_edge(0, 1))
    with pytest.raises(BadShape):
        validate_property(labelled)

    nonempty = GraphPropertySpec(3, lambda G: len(G.edges()) >= 1, monotone=True)
    with pytest.raises(NotDownwardClosed):
        validate_property(nonempty)


def test_isomorphism_classes():
    assert len(isomorphism_classes(3)[0]) == 4
    assert len(isomorphism_classes(4)[0]) == 11


def test_enumerate_monotone_properties_on_three_vertices():
    specs = list(enumerate_monotone_properties(3))
    assert len(specs) == 5
    assert sum(s.trivial for s in specs) == 2
    for spec in specs:
        validate_property(spec)
        if not spec.trivial:
            assert is_evasive(property_to_function(spec))
    with pytest.raises(TooLarge):
        next(enumerate_monotone_properties(6))


def test_restricted_function_with_single_vertex_tail():
    f = restricted_function_bnh(4, 1, named("K3"))
    assert f.n_vars == 6
    assert f.table == property_to_function(make_property("triangle-free", 4)).table

    g = restricted_function_bnh(4, 2, named("K3"))
    assert g.n_vars == 5
    assert bnh_slots(4, 2) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]
    with pytest.raises(BadShape):
        restricted_function_bnh(4, 5, named("K3"))


def test_bnh_complex_membership():
    K, slots = bnh_complex(4, 1, named("K3"))
    assert len(slots) == 6
    faces = K.materialize()
    assert len(faces) == 41
    assert euler_characteristic(faces) == 4


@pytest.mark.parametrize("name,weight", [("P3", 10), ("C4", 54)])
def test_restricted_function_forbids_subgraph_copies(name, weight):
    H = named(name)
    f = restricted_function_bnh(4, 0, H)
    assert f.weight() == weight
    assert f.table == property_to_function(make_property(f"forbid:{name}", 4)).table

    K, _ = bnh_complex(4, 0, H)
    assert len(K.materialize()) == weight


def test_restricted_function_drops_copies_through_the_tail():
    index = {s: k for k, s in enumerate(bnh_slots(4, 2))}
    assert len(subgraph_copy_masks(4, named("P3"))) == 12
    assert len(subgraph_copy_masks(4, named("P3"), slots=index)) == 8
    # matchings on the five free slots
    assert restricted_function_bnh(4, 2, named("P3")).weight() == 8
