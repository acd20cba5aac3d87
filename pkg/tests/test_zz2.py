import pytest

from equihom.errors import (InvalidInputError, InvalidParameterError,
                            NotFreeActionError)
from equihom.graphs import complete_graph
from equihom.homcomplexes import hom_complex
from equihom.simplicial import (SimplicialSet, gamma, gamma_power, sigma)
from equihom.snf import SparseMat
from equihom.zz2 import (CohomologyGroup, EquivariantChainComplex, bredon_torus,
                         cohomology, equivariant_complex, expected_bredon,
                         ordinary_cohomology, quotient_by_first_shift,
                         quotient_pstar_check, specialize)


def test_orbit_ranks():
    assert [equivariant_complex(gamma(4), 1).rank(d) for d in (0, 1)] == [2, 2]
    cx = equivariant_complex(sigma(2), 2)
    assert [cx.rank(d) for d in (0, 1, 2)] == [1, 1, 1]
    cx2 = equivariant_complex(gamma_power(4, 2), 2)
    # cell counts 16/48/32 halved (the 2-torus has 48 one-cells)
    assert [cx2.rank(d) for d in (0, 1, 2)] == [8, 24, 16]


def test_not_free_action_detected():
    fixed = SimplicialSet([0, 1], {1: [(0, 1), (1, 0)]}, cap=1,
                          involution={0: 0, 1: 1})
    with pytest.raises(NotFreeActionError):
        equivariant_complex(fixed, 1)


def test_specialization_rules():
    # a single orbit pair with boundary entry 1 + nu
    cx = EquivariantChainComplex(reps=[["v"], ["e"]],
                                 boundaries=[{(0, 0): (1, 1)}])
    minus = specialize(cx, "Zminus")[0]
    assert minus.to_dense() == [[0]]
    plus = specialize(cx, "Zplus")[0]
    assert plus.to_dense() == [[2]]
    ring = specialize(cx, "ZZ2")[0]
    assert ring.to_dense() == [[1, 1], [1, 1]]
    cx2 = EquivariantChainComplex(reps=[["v"], ["e"]],
                                  boundaries=[{(0, 0): (1, -1)}])
    assert specialize(cx2, "Zminus")[0].to_dense() == [[2]]
    with pytest.raises(InvalidParameterError):
        specialize(cx, "Zother")


def test_cohomology_rejects_non_complex():
    bad = [SparseMat.from_dense([[1]]), SparseMat.from_dense([[1]])]
    with pytest.raises(InvalidInputError):
        cohomology(bad, 1)


def test_point_cohomology():
    point = SimplicialSet([0], {}, cap=1)
    assert ordinary_cohomology(point, 0, max_dim=1) == CohomologyGroup(1, ())


def test_ordinary_cohomology_torus_and_sphere():
    t = gamma_power(4, 2)
    assert [ordinary_cohomology(t, d) for d in (0, 1, 2)] == [
        CohomologyGroup(1, ()), CohomologyGroup(2, ()), CohomologyGroup(1, ())]
    sphere = hom_complex(complete_graph(4))
    assert [ordinary_cohomology(sphere, d, max_dim=2) for d in (0, 1, 2)] == [
        CohomologyGroup(1, ()), CohomologyGroup(0, ()), CohomologyGroup(1, ())]


def test_group_ring_coefficients_give_total_space():
    cx = equivariant_complex(gamma_power(4, 2), 2)
    for d in (0, 1, 2):
        assert (cohomology(specialize(cx, "ZZ2"), d)
                == ordinary_cohomology(gamma_power(4, 2), d))


def test_trivial_coefficients_give_quotient_space():
    # the quotient of the first-shift action on gamma(8) is gamma(4), a circle
    x = gamma(8)
    cx = equivariant_complex(x, 1)
    for d in (0, 1):
        assert (cohomology(specialize(cx, "Zplus"), d)
                == ordinary_cohomology(gamma(4), d))


def test_ordinary_cohomology_three_torus():
    x = gamma_power(4, 3)
    got = [ordinary_cohomology(x, d) for d in range(4)]
    assert [g.free_rank for g in got] == [1, 3, 3, 1]
    assert all(g.torsion == () for g in got)


def test_bredon_examples():
    assert bredon_torus(2, 4, 1) == CohomologyGroup(0, (2,))
    assert bredon_torus(2, 4, 2) == CohomologyGroup(0, (2,))
    assert bredon_torus(3, 4, 2) == CohomologyGroup(0, (2, 2))


def test_bredon_table_small():
    for n in (1, 2, 3):
        for d in range(1, n + 1):
            assert bredon_torus(n, 4, d) == expected_bredon(n, d)


def test_bredon_independent_of_l_at_n2():
    for d in (1, 2):
        assert bredon_torus(2, 4, d) == bredon_torus(2, 8, d)


def test_bredon_above_dimension_vanishes():
    assert bredon_torus(1, 4, 2) == CohomologyGroup(0, ())


def test_quotient_construction_oracle():
    # independent orbit-complex construction: reduce labels mod 4 by hand
    g8 = gamma(8)
    image_vertices = {v % 4 for v in g8.vertices}
    image_edges = {tuple(v % 4 for v in c) for c in g8.cells(1)}
    g4 = gamma(4)
    assert image_vertices == set(g4.vertices)
    assert image_edges == g4.cells(1)
    q, proj = quotient_by_first_shift(8, 1)
    for d in (0, 1):
        assert q.cells(d) == g4.cells(d)
    with pytest.raises(InvalidParameterError):
        quotient_by_first_shift(4, 1)


def test_quotient_pstar_check_n2():
    for d in (1, 2):
        rec = quotient_pstar_check(2, 8, d)
        assert rec["pstar_injective"]
        assert rec["matches_expected"]
        assert rec["cokernel"] == {"free_rank": 0, "torsion": [2]}
    rec = quotient_pstar_check(2, 8, 1)
    assert sorted(rec["pstar_invariant_factors"]) == [1, 2]


def test_dd_zero_is_verified():
    cx = equivariant_complex(gamma_power(4, 2), 2)
    cx.verify_dd_zero()  # must not raise
