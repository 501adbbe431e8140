import pytest

from errors import BadShape, EmptyComplex, NotDownwardClosed, TooManyOrbits
from perm import cyclic_group, symmetric_group, trivial_group
from scomplex import (
    ExplicitComplex, OracleComplex, cone, dim_complex, euler_characteristic,
    fixed_point_complex, from_maximal_faces, gamma_closure, is_collapsible, mask_of,
    popcount, read_binary, read_faces, vertices_of, write_binary, write_faces,
)


def simplex(n):
    return from_maximal_faces(n, [list(range(n))])


def triangle_boundary():
    return from_maximal_faces(3, [[0, 1], [1, 2], [0, 2]])


def test_mask_helpers():
    assert mask_of([0, 2, 5]) == 0b100101
    assert vertices_of(0b100101) == [0, 2, 5]
    assert popcount(0b1011) == 3


def test_explicit_complex_validates():
    K = triangle_boundary()
    assert len(K) == 7
    assert K.f_vector() == [1, 3, 3]
    assert K.facets() == [0b011, 0b101, 0b110]
    with pytest.raises(NotDownwardClosed):
        ExplicitComplex(3, [0, 0b011])
    with pytest.raises(BadShape):
        ExplicitComplex(2, [0, 0b100])


def test_euler_characteristic_and_dim():
    assert euler_characteristic(simplex(4)) == 1
    assert euler_characteristic(triangle_boundary()) == 0
    assert euler_characteristic(from_maximal_faces(2, [[0], [1]])) == 2
    assert euler_characteristic(ExplicitComplex(3, [])) == 0
    assert dim_complex(simplex(4)) == 3
    with pytest.raises(EmptyComplex):
        dim_complex(ExplicitComplex(3, []))


def test_oracle_complex_materializes():
    K = OracleComplex(4, lambda m: popcount(m) <= 2)
    faces = K.materialize()
    assert len(faces) == 1 + 4 + 6
    assert euler_characteristic(K) == 4 - 6


def test_oracle_spot_check_catches_missing_subface():
    with pytest.raises(NotDownwardClosed):
        OracleComplex(3, lambda m: m != 0b001)


def test_fixed_point_complex():
    fixed = fixed_point_complex(simplex(3), cyclic_group(3))
    assert fixed.orbit_count == 1
    assert sorted(fixed.faces.faces) == [0, 1]
    assert euler_characteristic(fixed.faces) == 1

    hollow = fixed_point_complex(triangle_boundary(), cyclic_group(3))
    assert sorted(hollow.faces.faces) == [0]
    assert euler_characteristic(hollow.faces) == 0


def test_grow_and_scan_agree():
    K = gamma_closure(4, [[0, 1, 2]], symmetric_group(4).images)
    G = cyclic_group(2, 4)
    grown = fixed_point_complex(K, G, strategy="grow")
    scanned = fixed_point_complex(K, G, strategy="scan")
    assert grown.faces.faces == scanned.faces.faces
    assert grown.orbit_count == 3
    with pytest.raises(BadShape):
        fixed_point_complex(K, G, strategy="bfs")


def test_orbit_cap_and_shape():
    with pytest.raises(TooManyOrbits):
        fixed_point_complex(simplex(6), trivial_group(6), max_orbits=5)
    with pytest.raises(BadShape):
        fixed_point_complex(simplex(3), trivial_group(4))


def test_collapsibility():
    outcome = is_collapsible(simplex(3))
    assert outcome.collapsible
    assert len(outcome.pairs) == 3

    assert is_collapsible(from_maximal_faces(4, [[0, 1], [1, 2], [2, 3]])).collapsible
    assert is_collapsible(from_maximal_faces(1, [[0]])).collapsible

    hollow = is_collapsible(triangle_boundary())
    assert not hollow.collapsible
    assert not hollow.exhausted

    assert not is_collapsible(ExplicitComplex(2, [])).collapsible


def test_cone_is_collapsible():
    K = cone(triangle_boundary())
    assert K.ground == 4
    assert euler_characteristic(K) == 1
    assert is_collapsible(K).collapsible


def test_gamma_closure():
    K = gamma_closure(3, [[0, 1]], cyclic_group(3).images)
    assert K.faces == triangle_boundary().faces


def test_face_file_round_trip(tmp_path):
    K = triangle_boundary()
    path = tmp_path / "boundary.faces"
    write_faces(K, str(path))
    assert read_faces(str(path)).faces == K.faces

    path.write_text("[0, 1, 2]\n\n[3]\n")
    L = read_faces(str(path))
    assert L.ground == 4
    assert L.f_vector() == [1, 4, 3, 1]

    path.write_text("{oops}\n")
    with pytest.raises(BadShape):
        read_faces(str(path))


def test_binary_file(tmp_path):
    K = simplex(4)
    path = tmp_path / "simplex.evsc"
    write_binary(K, str(path))
    again = read_binary(str(path))
    assert again.ground == 4 and again.faces == K.faces

    bad = tmp_path / "bad.evsc"
    bad.write_bytes(b"NOPE" + bytes(12))
    with pytest.raises(BadShape):
        read_binary(str(bad))
