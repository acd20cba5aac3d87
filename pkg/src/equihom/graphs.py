"""Finite graphs as symmetric binary relations, products, and homomorphisms.

Graphs live on the vertex set ``range(vertex_count)`` with an edge set of
ordered pairs closed under swapping.  Powers use the categorical product rule
and encode vertex tuples in mixed radix, row-major, with the first coordinate
most significant, so serialized polymorphisms are portable.
"""

import json
import random
import warnings
from itertools import product

from .errors import CapacityExceededError, InvalidParameterError

DEFAULT_MAX_POWER_VERTICES = 1 << 24


class Graph:
    """A finite graph with loops allowed; edges are symmetric ordered pairs."""

    def __init__(self, vertex_count, edges):
        if vertex_count <= 0:
            raise InvalidParameterError("vertex_count must be positive")
        closed = set()
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InvalidParameterError(f"edge ({u},{v}) out of range")
            closed.add((u, v))
            closed.add((v, u))
        self.vertex_count = vertex_count
        self.edges = frozenset(closed)
        adj = [set() for _ in range(vertex_count)]
        for u, v in self.edges:
            adj[u].add(v)
        self._adj = tuple(frozenset(s) for s in adj)

    def vertices(self):
        return range(self.vertex_count)

    def neighbours(self, v):
        return self._adj[v]

    def has_edge(self, u, v):
        return (u, v) in self.edges

    def degree(self, v):
        return len(self._adj[v])

    def is_loopless(self):
        return all((v, v) not in self.edges for v in self.vertices())

    def __eq__(self, other):
        return (isinstance(other, Graph)
                and self.vertex_count == other.vertex_count
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.vertex_count, self.edges))

    def __repr__(self):
        return f"Graph({self.vertex_count}, {len(self.edges)} ordered edges)"

    def to_json(self):
        return {"vertices": self.vertex_count,
                "edges": sorted([u, v] for (u, v) in self.edges)}

    @classmethod
    def from_json(cls, obj):
        n = obj["vertices"]
        pairs = {(u, v) for u, v in obj["edges"]}
        if any((v, u) not in pairs for (u, v) in pairs):
            warnings.warn("edge list was not symmetric; applying symmetric closure")
        return cls(n, pairs)


class PowerGraph(Graph):
    """The n-fold categorical power of a base graph, with tuple codecs."""

    def __init__(self, base, exponent, max_vertices=DEFAULT_MAX_POWER_VERTICES):
        if exponent < 1:
            raise InvalidParameterError("exponent must be >= 1")
        count = base.vertex_count ** exponent
        if count > max_vertices:
            raise CapacityExceededError(
                f"{base.vertex_count}^{exponent} = {count} vertices exceeds the limit {max_vertices}")
        self.base = base
        self.exponent = exponent
        edges = set()
        base_edges = sorted(base.edges)
        for combo in product(base_edges, repeat=exponent):
            u = _encode(tuple(e[0] for e in combo), base.vertex_count)
            v = _encode(tuple(e[1] for e in combo), base.vertex_count)
            edges.add((u, v))
        super().__init__(count, edges)

    def encode(self, tup):
        return _encode(tup, self.base.vertex_count)

    def decode(self, index):
        return _decode(index, self.base.vertex_count, self.exponent)


def _encode(tup, radix):
    """Row-major mixed radix; coordinate 1 is most significant."""
    out = 0
    for x in tup:
        out = out * radix + x
    return out


def _decode(index, radix, length):
    out = [0] * length
    for i in range(length - 1, -1, -1):
        index, out[i] = divmod(index, radix)
    return tuple(out)


def make_template(kind, size):
    """The cycle C_size or the complete loopless graph K_size."""
    if kind == "cycle":
        if size < 3:
            raise InvalidParameterError("cycles need size >= 3")
        return Graph(size, {(i, (i + 1) % size) for i in range(size)})
    if kind == "complete":
        if size < 1:
            raise InvalidParameterError("complete graphs need size >= 1")
        return Graph(size, {(i, j) for i in range(size) for j in range(size) if i != j})
    raise InvalidParameterError(f"unknown template kind {kind!r}")


def cycle_graph(size):
    return make_template("cycle", size)


def complete_graph(size):
    return make_template("complete", size)


def power(g, n, max_vertices=DEFAULT_MAX_POWER_VERTICES):
    """The categorical power g^n; for n = 1 a PowerGraph equal to g."""
    if n < 1:
        raise InvalidParameterError("power exponent must be >= 1")
    return PowerGraph(g, n, max_vertices=max_vertices)


class MinorSpec:
    """A function pi: [n] -> [m] along which minors are taken (1-based)."""

    def __init__(self, n, m, mapping):
        mapping = tuple(mapping)
        if n < 1 or m < 1 or len(mapping) != n:
            raise InvalidParameterError("minor spec shape mismatch")
        if any(not (1 <= x <= m) for x in mapping):
            raise InvalidParameterError("minor spec entries must lie in [1..m]")
        self.n = n
        self.m = m
        self.mapping = mapping

    def __call__(self, i):
        return self.mapping[i - 1]

    def then(self, sigma):
        """The composite sigma(pi(.)): [n] -> [sigma.m]."""
        if sigma.n != self.m:
            raise InvalidParameterError("minor specs do not compose")
        return MinorSpec(self.n, sigma.m, tuple(sigma(self(i)) for i in range(1, self.n + 1)))

    def preimage(self, j):
        return [i for i in range(1, self.n + 1) if self(i) == j]

    def __eq__(self, other):
        return (isinstance(other, MinorSpec)
                and (self.n, self.m, self.mapping) == (other.n, other.m, other.mapping))

    def __repr__(self):
        return f"MinorSpec({self.n}->{self.m}, {self.mapping})"


class GraphHom:
    """A graph homomorphism given by its vertex value array."""

    def __init__(self, domain, codomain, values, check=True):
        values = tuple(values)
        if len(values) != domain.vertex_count:
            raise InvalidParameterError("value array length mismatch")
        if check:
            for (u, v) in domain.edges:
                if (values[u], values[v]) not in codomain.edges:
                    raise InvalidParameterError(
                        f"edge ({u},{v}) not preserved: ({values[u]},{values[v]}) missing")
        self.domain = domain
        self.codomain = codomain
        self.values = values

    def __call__(self, v):
        return self.values[v]

    def __eq__(self, other):
        return (isinstance(other, GraphHom)
                and self.domain == other.domain
                and self.codomain == other.codomain
                and self.values == other.values)

    def __hash__(self):
        return hash((self.domain, self.codomain, self.values))

    def __repr__(self):
        return f"GraphHom({self.values})"

    def is_valid(self):
        return all((self.values[u], self.values[v]) in self.codomain.edges
                   for (u, v) in self.domain.edges)


def minor(f, pi):
    """The pi-minor of a polymorphism: substitute variables along pi."""
    dom = f.domain
    if not isinstance(dom, PowerGraph) or dom.exponent != pi.n:
        raise InvalidParameterError("minor arity does not match the domain power")
    base = dom.base
    target = power(base, pi.m)
    values = []
    for idx in range(target.vertex_count):
        ys = target.decode(idx)
        xs = tuple(ys[pi(i) - 1] for i in range(1, pi.n + 1))
        values.append(f.values[dom.encode(xs)])
    return GraphHom(target, f.codomain, values)


class HomStream:
    """Iterator over homomorphisms with a truncation flag.

    ``truncated`` becomes True when a limit cut the enumeration short; it is
    reliable once iteration has finished.
    """

    def __init__(self, dom, cod, limit=None, rng=None):
        self.truncated = False
        self._gen = self._run(dom, cod, limit, rng)

    def __iter__(self):
        return self._gen

    def _run(self, dom, cod, limit, rng):
        n = dom.vertex_count
        emitted = 0
        all_values = sorted(cod.vertices())
        neighbours = [sorted(dom.neighbours(v)) for v in range(n)]

        def ac3(domains, queue):
            # arcs are directed pairs (x, y) with y adjacent to x
            while queue:
                x, y = queue.pop()
                dy = domains[y]
                keep = [a for a in domains[x]
                        if any((a, b) in cod.edges for b in dy)]
                if len(keep) != len(domains[x]):
                    domains[x] = keep
                    if not keep:
                        return False
                    for z in neighbours[x]:
                        if z != y:
                            queue.add((z, x))
            return True

        domains = [list(all_values) for _ in range(n)]
        for v in range(n):
            if dom.has_edge(v, v):
                domains[v] = [a for a in domains[v] if (a, a) in cod.edges]
        if not ac3(domains, {(x, y) for x in range(n) for y in neighbours[x]}):
            return

        assignment = [None] * n

        def extend(v, domains):
            nonlocal emitted
            if v == n:
                if limit is not None and emitted >= limit:
                    self.truncated = True
                    return False
                emitted += 1
                yield GraphHom(dom, cod, tuple(assignment), check=False)
                return
            order = list(domains[v])
            if rng is not None:
                rng.shuffle(order)
            for a in order:
                assignment[v] = a
                nxt = [d if w <= v else list(d) for w, d in enumerate(domains)]
                nxt[v] = [a]
                ok = ac3(nxt, {(w, v) for w in neighbours[v] if w > v})
                if ok:
                    result = yield from extend(v + 1, nxt)
                    if result is False:
                        assignment[v] = None
                        return False
            assignment[v] = None

        yield from extend(0, domains)


def enumerate_homs(dom, cod, limit=None):
    """All homomorphisms dom -> cod in lexicographic order of the value array."""
    return HomStream(dom, cod, limit=limit)


def polymorphisms(base, arity, cod, limit=None):
    """Stream of arity-ary polymorphisms base^arity -> cod."""
    return enumerate_homs(power(base, arity), cod, limit=limit)


def sample_homs(dom, cod, count, rng):
    """Distinct homomorphisms found by randomized backtracking restarts.

    Used when the full enumeration is too large; the rng drives the value
    order of each restart, so results are reproducible from the seed.
    """
    found = {}
    attempts = 0
    while len(found) < count and attempts < 50 * count:
        attempts += 1
        sub = random.Random(rng.getrandbits(64))
        for hom in HomStream(dom, cod, limit=1, rng=sub):
            found[hom.values] = hom
            break
    return list(found.values())


def hom_to_json(f):
    """Serialize a polymorphism over a cycle power (the wire format)."""
    dom = f.domain
    if not isinstance(dom, PowerGraph):
        raise InvalidParameterError("only power-domain homomorphisms serialize")
    return {"domain_base": dom.base.vertex_count,
            "arity": dom.exponent,
            "codomain": f.codomain.vertex_count,
            "values": list(f.values)}


def hom_from_json(obj):
    base = cycle_graph(obj["domain_base"])
    cod = complete_graph(obj["codomain"])
    return GraphHom(power(base, obj["arity"]), cod, obj["values"])


def graph_to_json_str(g):
    return json.dumps(g.to_json(), sort_keys=True)
