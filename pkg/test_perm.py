import json
import logging

import pytest

from errors import BadPartition, BadShape, DomainTooLarge, NotAnAction, NotDivisor, OrderTooLarge
from perm import (
    OliverCertificate, Permutation, PermGroup, compose, conjugate, cyclic_group, delta_k_vinogradov,
    direct_product, gamma0, gamma_pqr, gamma_qd, induced_pair_action, invert, lambda1, lambda2,
    lambda_neareva, near_fermat_group, oliver_certificate_checks, oliver_condition, perm_power,
    semidirect, symmetric_group, trivial_group, u_orbitals, verify_oliver_certificate,
)


def test_composition_reads_left_to_right():
    a, b = (1, 2, 0), (0, 2, 1)
    assert compose(a, b) == (2, 1, 0)
    assert compose(a, invert(a)) == (0, 1, 2)
    p = Permutation.from_cycles(4, [[0, 1, 2]])
    assert p.order() == 3
    assert (p * p.inverse()).is_identity()
    assert p.cycles() == [[0, 1, 2]]
    assert perm_power(p.image, 2) == compose(p.image, p.image)
    with pytest.raises(BadShape):
        Permutation((0, 0, 1))


def test_basic_groups():
    assert symmetric_group(4).order() == 24
    assert cyclic_group(6).order() == 6
    assert cyclic_group(3, 5).orbits() == [[0, 1, 2], [3], [4]]
    assert trivial_group(3).order() == 1
    G = direct_product([cyclic_group(2), cyclic_group(3)])
    assert G.n == 5 and G.order() == 6
    assert G.clusters == ((0, 1), (2, 3, 4))
    with pytest.raises(OrderTooLarge):
        symmetric_group(6).elements(cap=100)


def test_group_json_round_trip():
    G = gamma_qd(7, 2)
    again = PermGroup.from_dict(json.loads(G.to_json()))
    assert again.images == G.images
    assert again.order() == 14


@pytest.mark.parametrize("q,d,order,orbitals", [
    (7, 2, 14, [7, 7, 7]),
    (7, 6, 42, [21]),
    (4, 3, 12, [6]),
    (9, 4, 36, [18, 18]),
])
def test_gamma_qd(q, d, order, orbitals):
    G = gamma_qd(q, d)
    assert G.order() == order
    assert G.orbits() == [list(range(q))]
    assert sorted(u_orbitals(G).sizes) == orbitals


def test_gamma_qd_rejects_non_divisor():
    with pytest.raises(NotDivisor):
        gamma_qd(7, 4)


def test_gamma0_orbital_minima():
    G = gamma0(5, 1, trivial_group(2))
    assert G.order() == 100
    report = u_orbitals(G)
    assert (report.m_intra, report.m_inter) == (10, 25)
    assert (report.m_k_prime, report.m_k_dblprime) == (1, 1)
    assert report.m_star == 10
    assert report.tsv_rows()[0] == ("i", "j", "size", "tag")


def test_gamma0_extension_chain():
    G = gamma0(7, 1, delta_k_vinogradov(3, [3]))
    assert "submultiplier" in G.roles and "block-top" in G.roles
    assert G.oliver_hint.q == 3
    cert = oliver_condition(G, hint="auto")
    assert cert is not None
    assert cert.orders == (7 ** 3, 7 ** 3 * 2, 7 ** 3 * 6 * 3)


def test_gamma0_cyclic_chain():
    G = gamma0(5, 1, delta_k_vinogradov(3, [3]))
    cert = oliver_condition(G, hint="auto")
    assert cert is not None and (cert.p, cert.q) == (5, 2)


def test_delta_k_vinogradov():
    D = delta_k_vinogradov(5, [2, 3])
    assert D.order() == 6
    assert D.factors == (2, 3)
    with pytest.raises(BadPartition):
        delta_k_vinogradov(5, [2, 2])
    with pytest.raises(BadPartition):
        delta_k_vinogradov(4, [4])


def test_gamma_pqr():
    G = gamma_pqr(3, 2, 7, 3, [2])
    assert G.n == 13
    assert G.order() == 756
    assert u_orbitals(G).m_star == 6
    with pytest.raises(NotDivisor):
        gamma_pqr(3, 2, 7, 5, [2])


def test_semidirect_by_conjugation_is_s3():
    rotation = cyclic_group(3)
    reflection = PermGroup(3, (Permutation.from_cycles(3, [[1, 2]]),))
    theta = semidirect(rotation, reflection)
    assert theta.order() == 6


def test_semidirect_regular_action():
    rotation = cyclic_group(3)
    reflection = PermGroup(3, (Permutation.from_cycles(3, [[1, 2]]),))
    theta = semidirect(rotation, reflection, psi=lambda d, g: conjugate(g, d))
    assert theta.n == 6
    assert theta.order() == 6
    assert theta.orbits() == [list(range(6))]


def test_semidirect_rejects_non_action():
    rotation = cyclic_group(3)
    reflection = PermGroup(3, (Permutation.from_cycles(3, [[1, 2]]),))
    identity = (0, 1, 2)
    with pytest.raises(NotAnAction):
        semidirect(rotation, reflection, psi=lambda d, g: g if d == identity else identity)


def test_lambda_groups():
    L1 = lambda1(3, 1, 4)
    assert L1.n == 12
    assert L1.order() == 216
    assert [len(c) for c in L1.clusters] == [9, 3]
    assert lambda1(3, 1, 4, "power").order() == 216

    L2 = lambda2([5, 17])
    assert L2.n == 22
    assert L2.order() == 20 * 272
    with pytest.raises(BadShape):
        lambda1(3, 2, 4)


def test_near_fermat_group_chain():
    G = near_fermat_group(3, 0, 3, [5])
    cert = oliver_condition(G, hint="auto")
    assert cert is not None
    assert (cert.p, cert.q) == (3, 2)
    assert cert.orders == (27, 270, 1080)


def test_lambda_neareva_warns_on_non_cyclic_top(caplog):
    with caplog.at_level(logging.WARNING):
        G = lambda_neareva(5, 3, 2)
    assert "non-cyclic" in G.structure_tag
    assert G.oliver_hint is None
    assert "not cyclic" in caplog.text

    H = lambda_neareva(5, 3, 1)
    assert H.n == 16
    assert len(H.clusters) == 4


def test_lambda_neareva_order_hint():
    G = lambda_neareva(3, 2, 1)
    assert G.order() == G.order_hint == 18

    tail_only = lambda_neareva(5, 0, 3)
    assert tail_only.n == 3
    assert tail_only.order() == tail_only.order_hint == 3
    assert tail_only.oliver_hint is None


def test_induced_pair_action():
    G = symmetric_group(4)
    slots = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    P = induced_pair_action(G, slots)
    assert P.n == 6
    assert P.orbits() == [list(range(6))]
    with pytest.raises(BadShape):
        induced_pair_action(G, slots[:3])


def test_oliver_search():
    cert = oliver_condition(symmetric_group(4))
    assert (cert.p, cert.q, cert.orders) == (2, 2, (4, 12, 24))

    z6 = oliver_condition(cyclic_group(6))
    assert (z6.p, z6.q) == (3, 2)

    a5 = PermGroup(5, (Permutation.from_cycles(5, [[0, 1, 2]]),
                       Permutation.from_cycles(5, [[0, 1, 2, 3, 4]])))
    assert a5.order() == 60
    assert oliver_condition(a5) is None


def test_oliver_certificate_round_trip_and_tamper():
    G = gamma_qd(7, 2)
    cert = oliver_condition(G, hint="auto")
    again = OliverCertificate.from_dict(json.loads(json.dumps(cert.to_dict())))
    assert verify_oliver_certificate(G, again)

    forged = OliverCertificate(cert.p, cert.q, cert.gens_gamma2, cert.gens_gamma1,
                               cert.coset_generator, (1, 1, 1))
    failed = [name for name, ok in oliver_certificate_checks(G, forged) if not ok]
    assert failed == ["orders"]


def test_domain_cap():
    with pytest.raises(DomainTooLarge):
        gamma0(101, 1, trivial_group(100))
