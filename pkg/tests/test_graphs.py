import json

import pytest

from equihom.errors import CapacityExceededError, InvalidParameterError
from equihom.graphs import (Graph, GraphHom, MinorSpec, complete_graph,
                            cycle_graph, enumerate_homs, hom_from_json,
                            hom_to_json, make_template, minor, power,
                            sample_homs)

from oracles import cycle_hom_count


def test_templates():
    c3 = make_template("cycle", 3)
    assert c3.vertex_count == 3 and len(c3.edges) == 6
    assert c3 == complete_graph(3)
    k4 = make_template("complete", 4)
    assert k4.vertex_count == 4 and len(k4.edges) == 12
    c5 = make_template("cycle", 5)
    assert c5.vertex_count == 5 and len(c5.edges) == 10
    assert all(c5.degree(v) == 2 for v in c5.vertices())


@pytest.mark.parametrize("kind,size", [("cycle", 2), ("complete", 0), ("nonsense", 3)])
def test_template_rejects(kind, size):
    with pytest.raises(InvalidParameterError):
        make_template(kind, size)


def test_power_identity_and_degrees():
    c3 = cycle_graph(3)
    assert power(c3, 1) == c3
    sq = power(c3, 2)
    # product-degree oracle: deg(u, v) = deg(u) * deg(v)
    assert sq.vertex_count == 9
    assert all(sq.degree(v) == 4 for v in sq.vertices())


def test_power_k2_squared_exhaustive():
    # oracle: edges of K2^2 are exactly the pairs of base edges, one per combo
    k2 = complete_graph(2)
    base_edges = sorted(k2.edges)
    expected = set()
    for e1 in base_edges:
        for e2 in base_edges:
            u = e1[0] * 2 + e2[0]
            v = e1[1] * 2 + e2[1]
            expected.add((u, v))
    sq = power(k2, 2)
    assert sq.vertex_count == 4
    assert sq.edges == frozenset(expected)
    assert len(sq.edges) == 4


def test_power_capacity():
    with pytest.raises(CapacityExceededError):
        power(complete_graph(4), 3, max_vertices=10)


def test_power_encoding_row_major():
    p = power(cycle_graph(5), 3)
    assert p.encode((1, 0, 0)) == 25  # first coordinate most significant
    assert p.decode(25) == (1, 0, 0)
    assert p.decode(p.encode((2, 4, 3))) == (2, 4, 3)


def test_enumerate_homs_counts_and_order():
    assert sum(1 for _ in enumerate_homs(complete_graph(3), complete_graph(4))) == 24
    assert (sum(1 for _ in enumerate_homs(cycle_graph(5), complete_graph(3)))
            == cycle_hom_count(5, 3) == 30)
    assert sum(1 for _ in enumerate_homs(cycle_graph(5), complete_graph(2))) == 0
    values = [f.values for f in enumerate_homs(complete_graph(3), complete_graph(4))]
    assert values == sorted(values)


def test_enumerate_homs_edge_preservation_exhaustive():
    dom, cod = power(cycle_graph(3), 2), complete_graph(4)
    for f in enumerate_homs(dom, cod):
        assert all((f.values[u], f.values[v]) in cod.edges for (u, v) in dom.edges)


def test_hom_count_cross_check_cycles():
    for ell in (3, 5):
        for k in (3, 4):
            got = sum(1 for _ in enumerate_homs(cycle_graph(ell), complete_graph(k)))
            assert got == cycle_hom_count(ell, k)


def test_truncation_flag():
    stream = enumerate_homs(complete_graph(3), complete_graph(4), limit=5)
    got = list(stream)
    assert len(got) == 5 and stream.truncated
    stream = enumerate_homs(complete_graph(3), complete_graph(4), limit=24)
    assert len(list(stream)) == 24 and not stream.truncated


def test_minor_diagonal_and_swap():
    c3, k4 = cycle_graph(3), complete_graph(4)
    f = next(iter(enumerate_homs(power(c3, 2), k4)))
    diag = minor(f, MinorSpec(2, 1, (1, 1)))
    p1 = f.domain
    assert all(diag.values[x] == f.values[p1.encode((x, x))] for x in range(3))
    proj1_vals = [k4.vertices()[0]] * 9
    p2 = power(c3, 2)
    proj1 = GraphHom(p2, k4, [p2.decode(i)[0] for i in range(9)])
    swapped = minor(proj1, MinorSpec(2, 2, (2, 1)))
    assert swapped.values == tuple(p2.decode(i)[1] for i in range(9))


def test_minor_composition_oracle():
    # (f^pi)^sigma = f^(pi then sigma), checked by direct evaluation
    c3, k4 = cycle_graph(3), complete_graph(4)
    polys = list(enumerate_homs(power(c3, 2), k4, limit=40))
    pi = MinorSpec(2, 3, (3, 1))
    sigma = MinorSpec(3, 2, (2, 2, 1))
    for f in polys[::7]:
        lhs = minor(minor(f, pi), sigma)
        rhs = minor(f, pi.then(sigma))
        assert lhs.values == rhs.values


def test_minor_identity():
    c3, k4 = cycle_graph(3), complete_graph(4)
    f = next(iter(enumerate_homs(power(c3, 2), k4)))
    assert minor(f, MinorSpec(2, 2, (1, 2))).values == f.values


def test_minor_arity_mismatch():
    c3, k4 = cycle_graph(3), complete_graph(4)
    f = next(iter(enumerate_homs(power(c3, 2), k4)))
    with pytest.raises(InvalidParameterError):
        minor(f, MinorSpec(3, 1, (1, 1, 1)))


def test_hom_json_roundtrip():
    c3, k4 = cycle_graph(3), complete_graph(4)
    f = next(iter(enumerate_homs(power(c3, 2), k4)))
    obj = hom_to_json(f)
    assert obj == {"domain_base": 3, "arity": 2, "codomain": 4,
                   "values": list(f.values)}
    back = hom_from_json(json.loads(json.dumps(obj)))
    assert back.values == f.values


def test_graph_json_symmetry_warning():
    obj = {"vertices": 3, "edges": [[0, 1]]}
    with pytest.warns(UserWarning):
        g = Graph.from_json(obj)
    assert (1, 0) in g.edges
    sym = Graph.from_json(cycle_graph(3).to_json())
    assert sym == cycle_graph(3)


def test_invalid_hom_rejected():
    with pytest.raises(InvalidParameterError):
        GraphHom(cycle_graph(3), complete_graph(2), (0, 0, 1))


def test_sample_homs_reproducible():
    import random
    dom, cod = power(cycle_graph(3), 2), complete_graph(4)
    a = sample_homs(dom, cod, 10, random.Random(5))
    b = sample_homs(dom, cod, 10, random.Random(5))
    assert [f.values for f in a] == [f.values for f in b]
    assert all(f.is_valid() for f in a)
