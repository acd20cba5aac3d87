import json
import random

import pytest

from equihom.errors import (AlternatingSimplexError, CapacityExceededError,
                            InvalidParameterError, NotEquivariantError)
from equihom.simplicial import (BLUE, YELLOW, ModTwoChain, SimplicialMap,
                                SimplicialSet, boundary, gamma, gamma_power,
                                map_from_colouring, mod2_homology_ranks,
                                normalize_simplex, order_complex, sigma,
                                sproduct)

from oracles import strict_chains


def test_sigma2_structure():
    s2 = sigma(2)
    assert [s2.n_cells(d) for d in (0, 1, 2, 3)] == [2, 2, 2, 0]
    assert s2.euler_characteristic() == 2
    assert s2.cells(1) == frozenset({(YELLOW, BLUE), (BLUE, YELLOW)})
    assert s2.has_free_involution()


def test_sigma2_rejects_three_alternations():
    s2 = sigma(2)
    assert not s2.has_simplex((BLUE, YELLOW, BLUE, YELLOW))
    assert s2.has_simplex((BLUE, YELLOW, YELLOW, BLUE))
    assert s2.has_simplex((BLUE, BLUE, BLUE, BLUE))


def test_sigma_chain():
    assert sigma(0).n_cells(1) == 0
    assert sigma(1).cells(1) == frozenset({(YELLOW, BLUE), (BLUE, YELLOW)})
    assert sigma(3).n_cells(3) == 2


def test_sigma2_mod2_homology():
    assert mod2_homology_ranks(sigma(2), top=2) == (1, 0, 1)


def test_gamma_structure():
    g12 = gamma(12)
    assert len(g12.vertices) == 12 and g12.n_cells(1) == 12
    g4 = gamma(4)
    assert g4.cells(1) == frozenset({(0, 1), (2, 1), (2, 3), (0, 3)})
    for L in (4, 8, 12):
        assert gamma(L).euler_characteristic() == 0
    with pytest.raises(InvalidParameterError):
        gamma(6)
    with pytest.raises(InvalidParameterError):
        gamma(0)


def test_gamma_involution_free():
    for L in (4, 8):
        assert gamma(L).has_free_involution()


def test_product_torus_counts():
    # oracle: cells of the product are strict chains of the product poset
    t = sproduct([gamma(4), gamma(4)])
    assert len(t.vertices) == 16
    assert t.n_cells(1) == len(strict_chains(4, 2, 2)) == 48
    assert t.n_cells(2) == len(strict_chains(4, 2, 3)) == 32
    assert t.n_cells(3) == 0
    assert t.euler_characteristic() == 0


def test_product_two_triangles_per_square():
    t = sproduct([gamma(4), gamma(8)])
    assert t.n_cells(2) == 2 * 4 * 8
    diagonals = {}
    for cell in t.cells(2):
        low, high = cell[0], cell[2]
        assert low[0] % 2 == 0 and low[1] % 2 == 0
        assert high[0] % 2 == 1 and high[1] % 2 == 1
        diagonals.setdefault((low, high), 0)
        diagonals[(low, high)] += 1
    assert set(diagonals.values()) == {2}


def test_product_closure_explicit():
    t = sproduct([gamma(4), gamma(8)])
    for d in (1, 2):
        for cell in t.cells(d):
            for i in range(d + 1):
                face = cell[:i] + cell[i + 1:]
                assert t.has_simplex(face)


def test_product_of_zero_spheres():
    p = sproduct([sigma(0), sigma(0)], cap=3)
    assert len(p.vertices) == 4
    assert p.n_cells(1) == 0


def test_unary_product_is_identity():
    g = gamma(4)
    assert sproduct([g]) is g


def test_product_capacity():
    with pytest.raises(CapacityExceededError):
        sproduct([gamma(12), gamma(12), gamma(12)], max_cells=1000)


def test_product_involution_mismatch():
    plain = SimplicialSet([0, 1], {1: [(0, 1), (1, 0)]}, cap=2)
    with pytest.raises(InvalidParameterError):
        sproduct([gamma(4), plain])


def test_closure_checked():
    with pytest.raises(InvalidParameterError):
        SimplicialSet([0, 1, 2], {2: [(0, 1, 2)]}, cap=2)


def test_gamma_powers_euler_zero():
    for n in (1, 2, 3):
        assert gamma_power(4, n).euler_characteristic() == 0


def test_map_from_colouring_constant_valid():
    t = gamma_power(4, 2)
    col = {v: BLUE for v in t.vertices}
    gmap = map_from_colouring(t, col)
    assert not gmap.is_equivariant()  # valid as a map, but never equivariant
    with pytest.raises(NotEquivariantError):
        map_from_colouring(t, col, check_equivariance=True)


def test_map_from_colouring_any_equivariant_on_2d_torus():
    # no non-degenerate 3-simplices exist in a product of two height-2 posets
    t = gamma_power(4, 2)
    assert t.n_cells(3) == 0
    rng = random.Random(1)
    nu = t.involution
    for _ in range(20):
        col = {}
        for v in t.vertices:
            if v in col:
                continue
            bit = rng.random() < 0.5
            col[v] = BLUE if bit else YELLOW
            col[nu[v]] = YELLOW if bit else BLUE
        gmap = map_from_colouring(t, col, check_equivariance=True)
        assert gmap.is_equivariant()


def test_map_from_colouring_alternation_witness():
    t3 = gamma_power(4, 3)
    col = {v: (BLUE if (v[0] + v[1] + v[2]) % 4 < 2 else YELLOW)
           for v in t3.vertices}
    with pytest.raises(AlternatingSimplexError) as err:
        map_from_colouring(t3, col)
    witness = err.value.witness
    assert witness in t3.cells(3)
    images = [col[v] for v in witness]
    assert sum(1 for a, b in zip(images, images[1:]) if a != b) == 3


def test_boundary_of_triangle():
    t = gamma_power(4, 2)
    cell = sorted(t.cells(2))[0]
    chain = ModTwoChain(2, {cell})
    faces = boundary(chain)
    assert faces.dimension == 1 and len(faces) == 3
    assert all(f in t.cells(1) for f in faces.cells)


def test_boundary_squared_zero():
    t = gamma_power(4, 2)
    rng = random.Random(7)
    cells = sorted(t.cells(2))
    for _ in range(10):
        pick = {c for c in cells if rng.random() < 0.4}
        if not pick:
            continue
        assert not boundary(boundary(ModTwoChain(2, pick)))


def test_simplicial_map_validity():
    g4 = gamma(4)
    sq = sproduct([g4, g4])
    proj = SimplicialMap(sq, g4, {v: v[0] for v in sq.vertices})
    assert proj.is_equivariant()
    with pytest.raises(InvalidParameterError):
        SimplicialMap(g4, g4, {v: (v + 1) % 4 for v in g4.vertices})


def test_order_complex_matches_gamma():
    def less(a, b):
        return a % 2 == 0 and b % 2 == 1 and (a - b) % 8 in (1, 7)

    oc = order_complex(range(8), less, cap=3)
    g8 = gamma(8)
    assert oc.cells(1) == g8.cells(1)


def test_json_roundtrip():
    for x in (sigma(2), gamma(8), gamma_power(4, 2)):
        data = json.loads(json.dumps(x.to_json()))
        back = SimplicialSet.from_json(data)
        assert back.vertices == x.vertices
        for d in range(x.cap + 1):
            assert back.cells(d) == x.cells(d)
        if x.involution:
            assert back.involution == x.involution


def test_normalize_simplex():
    assert normalize_simplex((1, 1, 2, 2, 3)) == (1, 2, 3)
    assert normalize_simplex((1, 2, 1)) == (1, 2, 1)


def test_weak_simplices_count():
    g4 = gamma(4)
    # L vertices each giving C(d,0) degeneracies plus L edges giving C(d,1)
    assert sum(1 for _ in g4.weak_simplices(3)) == g4.count_weak_simplices(3) == 16
