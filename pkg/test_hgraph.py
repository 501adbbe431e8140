import random

import networkx as nx
import pytest

from errors import BadShape, NonPrime, NotDivisor, OddD, TooLarge
from hgraph import (
    PaleyOracle, SmallGraph, cks_parity_check, clique_number, exists_hom, has_clique,
    has_subgraph, hom_free_chi, hom_image_masks, named, orbital_paley_isomorphism, paley,
    paley_clique_check, q_hom_complex, slot_index, t_of_h, weil_count_check,
)
from scomplex import euler_characteristic


def to_networkx(G):
    g = nx.Graph()
    g.add_nodes_from(range(G.n))
    g.add_edges_from(G.edges())
    return g


def random_graph(rng, n, density):
    return SmallGraph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)
                                     if rng.random() < density])


def test_named_graphs():
    assert len(named("K3").edges()) == 3
    P3 = named("P3")
    assert (P3.n, len(P3.edges())) == (3, 2)
    assert named("S5").n == 6
    assert named("E2").edges() == []
    petersen = named("petersen")
    assert len(petersen.edges()) == 15
    assert all(petersen.degree(v) == 3 for v in range(10))


def test_graph6_matches_networkx():
    assert named("K3").to_graph6() == "Bw"
    for G in (named("petersen"), named("C5"), named("S4"), SmallGraph.empty(3)):
        want = nx.to_graph6_bytes(to_networkx(G), header=False).decode().strip()
        assert G.to_graph6() == want
        assert SmallGraph.from_graph6(want) == G
    with pytest.raises(BadShape):
        SmallGraph.from_graph6("")


def test_small_graph_rejects_bad_adjacency():
    with pytest.raises(BadShape):
        SmallGraph(2, (0b10, 0))
    with pytest.raises(BadShape):
        SmallGraph.from_edges(2, [(1, 1)])
    with pytest.raises(TooLarge):
        SmallGraph.empty(65)


def test_homomorphisms():
    assert exists_hom(named("K3"), named("C5")) is None
    witness = exists_hom(named("C5"), named("K3"))
    assert witness.check(named("C5"), named("K3"))
    assert exists_hom(named("E2"), named("K3")) is not None


def test_subgraphs():
    petersen = named("petersen")
    found = has_subgraph(petersen, named("C5"))
    assert found.check(named("C5"), petersen)
    assert has_subgraph(petersen, named("K3")) is None
    assert has_subgraph(petersen, named("C4")) is None
    assert has_subgraph(named("K3"), named("K4")) is None


def test_clique_number_matches_networkx():
    rng = random.Random(11)
    for _ in range(25):
        G = random_graph(rng, rng.randint(2, 14), rng.choice([0.3, 0.5, 0.8]))
        want = max(len(c) for c in nx.find_cliques(to_networkx(G)))
        assert clique_number(G) == want
        clique = has_clique(G, want)
        assert all(G.has_edge(a, b) for a in clique for b in clique if a != b)


def test_paley_graphs():
    P17 = paley(17, 8)
    assert isinstance(P17, SmallGraph)
    assert all(P17.degree(v) == 8 for v in range(17))
    assert clique_number(P17) == 3
    assert has_clique(P17, 4) is None

    P9 = paley(9, 4)
    assert len(P9.edges()) == 18
    assert clique_number(P9) == 3

    assert paley(8, 7).is_complete()
    with pytest.raises(OddD):
        paley(7, 3)
    with pytest.raises(NotDivisor):
        paley(7, 4)
    with pytest.raises(NotDivisor):
        paley(7, 0)


def test_paley_oracle_above_explicit_cap():
    G = paley(101, 50)
    assert isinstance(G, PaleyOracle)
    assert len(G.neighbors(0)) == 50
    assert G.has_edge(0, 1) and G.has_edge(1, 0)
    clique = has_clique(G, 3)
    assert all(G.has_edge(a, b) for a in clique for b in clique if a != b)


def test_paley_clique_check():
    out = paley_clique_check(17, 8, 3)
    assert out["hypothesis_holds"] is False
    assert out["consistent"]
    complete = paley_clique_check(17, 16, 3)
    assert complete["hypothesis_holds"] and complete["clique_found"]


@pytest.mark.parametrize("q,l,a_list", [(13, 2, [0, 1]), (31, 3, [0, 2, 7]), (97, 4, [5]), (11, 1, [])])
def test_weil_count_against_direct_count(q, l, a_list):
    powers = {pow(x, l, q) for x in range(1, q)}
    direct = sum(1 for x in range(q) if all((a + x) % q in powers for a in a_list))
    out = weil_count_check(q, l, a_list)
    assert out["count"] == direct
    assert out["within"]
    assert out["bound_lo"] <= out["count"] <= out["bound_hi"]


def test_weil_count_errors():
    with pytest.raises(NonPrime):
        weil_count_check(15, 2, [0])
    with pytest.raises(NotDivisor):
        weil_count_check(13, 5, [0])
    with pytest.raises(BadShape):
        weil_count_check(13, 2, [1, 14])


def test_orbital_paley_isomorphism():
    results = orbital_paley_isomorphism(13, 4)
    assert len(results) == 3
    assert all(x["isomorphic"] for x in results)


def test_hom_images():
    assert slot_index(3) == {(0, 1): 0, (0, 2): 1, (1, 2): 2}
    assert hom_image_masks(3, named("K3")) == [0b111]
    assert hom_image_masks(3, named("E2")) == [0]
    # P3 folds onto a single edge
    assert hom_image_masks(3, named("P3")) == [0b001, 0b010, 0b100]


def test_hom_free_complex_and_parity():
    Q = q_hom_complex(4, named("K3"))
    assert len(Q) == 41
    assert hom_free_chi(4, named("K3")) == euler_characteristic(Q) == 4
    assert t_of_h(named("K3")) == 3

    res = cks_parity_check(4, named("K3"))
    assert res.verdict == "holds" and res.chi == 4
    assert cks_parity_check(5, named("K3")).verdict == "inapplicable"
    with pytest.raises(TooLarge):
        q_hom_complex(8, named("K3"))
