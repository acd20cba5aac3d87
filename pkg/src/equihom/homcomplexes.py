"""Multihomomorphism posets, the complexes Hom(K_2, G), and the map pipeline.

A multihomomorphism K_2 -> G is an ordered pair of non-empty vertex subsets
spanning a complete bipartite subgraph of G; the poset of these under
componentwise inclusion has the homomorphism complex as its order complex,
with the free involution swapping the two sides.  For an odd cycle the complex
is a circle with 4*ell vertices; for the complete graph on four vertices it is
a 2-sphere on 50 vertices, and any equivariant 2-colouring of it gives the
structure map into the two-vertex sphere used by the degree pipeline.
"""

import hashlib
import json
import os
from functools import lru_cache
from itertools import combinations, product
from pathlib import Path
from typing import NamedTuple

from .errors import (InternalError, InvalidParameterError,
                     UnsupportedInputError)
from .graphs import PowerGraph, complete_graph, cycle_graph, power
from .simplicial import (BLUE, YELLOW, SimplicialMap, gamma, map_from_colouring,
                         order_complex, sproduct)

CACHE_ENV_VAR = "EQUIHOM_CACHE"
T_FILE_NAME = "t_colouring_hom_k2_k4.json"


class Multihom(NamedTuple):
    """An ordered pair of vertex subsets, stored as sorted tuples."""

    left: tuple
    right: tuple

    def swap(self):
        return Multihom(self.right, self.left)

    def le(self, other):
        return set(self.left) <= set(other.left) and set(self.right) <= set(other.right)

    def lt(self, other):
        return self.le(other) and self != other

    def is_valid_for(self, g):
        if not self.left or not self.right:
            return False
        if g.is_loopless() and set(self.left) & set(self.right):
            return False
        return all(g.has_edge(a, b) for a in self.left for b in self.right)

    def sort_key(self):
        lmask = sum(1 << v for v in self.left)
        rmask = sum(1 << v for v in self.right)
        return (len(self.left) + len(self.right), lmask, rmask)


def multihoms(g):
    """All multihomomorphisms K_2 -> g, in the canonical order."""
    if not g.is_loopless():
        raise UnsupportedInputError("multihomomorphism enumeration needs a loopless graph")
    verts = list(g.vertices())
    out = []
    for r in range(1, len(verts) + 1):
        for left in combinations(verts, r):
            common = set(verts)
            for a in left:
                common &= g.neighbours(a)
            common -= set(left)
            if not common:
                continue
            members = sorted(common)
            for k in range(1, len(members) + 1):
                for right in combinations(members, k):
                    out.append(Multihom(tuple(left), tuple(right)))
    out.sort(key=Multihom.sort_key)
    return out


@lru_cache(maxsize=16)
def hom_complex(g, cap=3):
    """The order complex of mhom(K_2, g) with the swap involution."""
    if not g.is_loopless():
        raise UnsupportedInputError("hom_complex needs a loopless graph")
    elements = multihoms(g)
    involution = {m: m.swap() for m in elements}
    x = order_complex(elements, Multihom.lt, cap, involution=involution)
    if not x.has_free_involution():
        raise InternalError("swap involution is not free on a loopless graph")
    return x


def canonical_cycle_iso(ell, cap=3):
    """The equivariant isomorphism gamma(4*ell) -> hom_complex(C_ell).

    Seeds at the multihomomorphism ({0},{1}) and walks the 4*ell-cycle of the
    poset's comparability graph, taking the canonically smaller neighbour
    first; verified bijective on vertices and edges and equivariant.
    """
    if ell < 3 or ell % 2 == 0:
        raise InvalidParameterError("need an odd cycle length >= 3")
    g = cycle_graph(ell)
    target = hom_complex(g, cap=cap)
    elements = multihoms(g)
    neighbours = {m: [] for m in elements}
    for a in elements:
        for b in elements:
            if a.lt(b):
                neighbours[a].append(b)
                neighbours[b].append(a)
    seed = Multihom((0,), (1,))
    walk = [seed]
    visited = {seed}
    while len(walk) < 4 * ell:
        options = [m for m in neighbours[walk[-1]] if m not in visited]
        if not options:
            raise InternalError("comparability walk got stuck before closing")
        nxt = min(options, key=Multihom.sort_key)
        walk.append(nxt)
        visited.add(nxt)
    if walk[0] not in neighbours[walk[-1]]:
        raise InternalError("comparability walk did not close into a cycle")
    vertex_map = {k: walk[k] for k in range(4 * ell)}
    for k in range(4 * ell):
        if vertex_map[(k + 2 * ell) % (4 * ell)] != vertex_map[k].swap():
            raise InternalError("walk does not conjugate the shift to the swap")
    iso = SimplicialMap(gamma(4 * ell, cap=cap), target, vertex_map)
    if len(set(vertex_map.values())) != 4 * ell:
        raise InternalError("walk is not injective on vertices")
    edge_images = {iso.image_simplex(e) for e in iso.domain.cells(1)}
    if edge_images != target.cells(1):
        raise InternalError("walk is not bijective on edges")
    if not iso.is_equivariant():
        raise InternalError("walk is not equivariant")
    return iso


def iota(ms, base):
    """Bundle an n-tuple of multihomomorphisms over G into one over G^n.

    Each side becomes the product set, encoded in the power graph's mixed
    radix.  Monotone, injective, and equivariant as a map of posets.
    """
    ms = tuple(ms)
    if not ms:
        raise InvalidParameterError("iota needs at least one multihomomorphism")
    pw = power(base, len(ms))
    left = tuple(sorted(pw.encode(c) for c in product(*[m.left for m in ms])))
    right = tuple(sorted(pw.encode(c) for c in product(*[m.right for m in ms])))
    return Multihom(left, right)


def mu_prime(f, ms):
    """Push an n-tuple of multihomomorphisms over G through f: G^n -> H.

    Each side u maps to { f(v_1..v_n) : v_i in m_i(u) }.  This is iota
    followed by the map induced by f, and it is lax with respect to minors:
    mu_prime(f^pi)(ms) is contained in mu_prime(f)(ms o pi) componentwise.
    """
    dom = f.domain
    if not isinstance(dom, PowerGraph) or dom.exponent != len(ms):
        raise InvalidParameterError("arity of f and the multihom tuple differ")
    left = tuple(sorted({f.values[dom.encode(c)] for c in product(*[m.left for m in ms])}))
    right = tuple(sorted({f.values[dom.encode(c)] for c in product(*[m.right for m in ms])}))
    return Multihom(left, right)


class TColouring:
    """A persisted equivariant 2-colouring of Hom(K_2, K_4).

    ``colours`` holds one bit per vertex in the canonical order
    (0 = yellow, 1 = blue); the fingerprint identifies the choice in reports.
    """

    COMPLEX_ID = "HomK2K4"
    ORDER_ID = "canonical-v1"

    def __init__(self, colours):
        self.colours = tuple(int(b) for b in colours)
        self.labels = tuple(multihoms(complete_graph(4)))
        if len(self.colours) != len(self.labels):
            raise InvalidParameterError("colour vector length mismatch")

    def as_vertex_map(self):
        return {m: (BLUE if b else YELLOW) for m, b in zip(self.labels, self.colours)}

    def to_json(self):
        return {"complex": self.COMPLEX_ID, "order": self.ORDER_ID,
                "colours": list(self.colours)}

    def fingerprint(self):
        payload = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json(), sort_keys=True, indent=1))

    @classmethod
    def from_json(cls, obj):
        if obj.get("complex") != cls.COMPLEX_ID or obj.get("order") != cls.ORDER_ID:
            raise InvalidParameterError("unrecognized colouring file header")
        return cls(obj["colours"])

    @classmethod
    def load(cls, path):
        return cls.from_json(json.loads(Path(path).read_text()))


def default_cache_dir():
    root = os.environ.get(CACHE_ENV_VAR)
    return Path(root) if root else None


def search_t_colouring(persist=None):
    """Find (or reload) an equivariant colouring of Hom(K_2, K_4) into sigma(2).

    Backtracks over the 25 antipodal orbit pairs in canonical vertex order
    with the first orbit's colour fixed, rejecting partial assignments that
    complete a 3-alternating 3-simplex; the first solution is persisted to
    ``persist`` (a file path) and reloaded verbatim on later runs.
    """
    if persist is not None:
        persist = Path(persist)
        if persist.suffix != ".json":  # directories hold the default file name
            persist = persist / T_FILE_NAME
        if persist.exists():
            t = TColouring.load(persist)
            map_from_colouring(hom_complex(complete_graph(4)), t.as_vertex_map(),
                               check_equivariance=True)
            return t

    x = hom_complex(complete_graph(4))
    labels = list(multihoms(complete_graph(4)))
    index = {m: i for i, m in enumerate(labels)}
    partner = {i: index[m.swap()] for i, m in enumerate(labels)}
    three_cells = [tuple(index[v] for v in s) for s in x.cells(3)]
    by_vertex = {}
    for cell in three_cells:
        for i in cell:
            by_vertex.setdefault(i, []).append(cell)

    colours = [None] * len(labels)

    def consistent(i):
        for cell in by_vertex.get(i, ()):
            cs = [colours[j] for j in cell]
            if None in cs:
                continue
            if cs[0] != cs[1] and cs[1] != cs[2] and cs[2] != cs[3]:
                return False
        return True

    def assign(i, bit):
        colours[i] = bit
        colours[partner[i]] = 1 - bit
        if consistent(i) and consistent(partner[i]):
            return True
        colours[i] = colours[partner[i]] = None
        return False

    def search(pos, first):
        while pos < len(labels) and colours[pos] is not None:
            pos += 1
        if pos == len(labels):
            return True
        for bit in ((0,) if first else (0, 1)):
            if assign(pos, bit):
                if search(pos + 1, False):
                    return True
                colours[pos] = colours[partner[pos]] = None
        return False

    if not search(0, True):
        raise InternalError("exhausted the colouring search; this cannot happen")
    t = TColouring(colours)
    map_from_colouring(x, t.as_vertex_map(), check_equivariance=True)
    if persist is not None:
        persist.parent.mkdir(parents=True, exist_ok=True)
        t.save(persist)
    return t


class CyclePipeline:
    """Everything needed to turn polymorphisms of (C_ell, K_4) into torus maps.

    Holds the cycle's homomorphism complex, the canonical circle isomorphism,
    the chosen structure colouring t, and cached torus triangulations.
    """

    def __init__(self, ell, t=None, cap=3):
        self.ell = ell
        self.base = cycle_graph(ell)
        self.codomain = complete_graph(4)
        self.iso = canonical_cycle_iso(ell, cap=cap)
        self.iso_map = dict(self.iso.vertex_map)
        self.t = t if t is not None else search_t_colouring(default_cache_dir())
        self.t_map = self.t.as_vertex_map()
        self.cap = cap
        self._tori = {}

    @property
    def period(self):
        return 4 * self.ell

    def torus(self, n):
        if n not in self._tori:
            if n == 1:
                self._tori[n] = self.iso.domain
            else:
                self._tori[n] = sproduct([gamma(self.period) for _ in range(n)],
                                         cap=self.cap)
        return self._tori[n]

    def check_polymorphism(self, f):
        dom = f.domain
        if not isinstance(dom, PowerGraph) or dom.base != self.base:
            raise InvalidParameterError("not a polymorphism over this cycle")
        if f.codomain != self.codomain:
            raise InvalidParameterError("codomain must be the 4-clique")
        return dom.exponent

    def mu_colours(self, f):
        """Vertex colouring of gamma(4*ell)^n induced by the polymorphism f."""
        n = self.check_polymorphism(f)
        iso_map = self.iso_map
        t_map = self.t_map
        colours = {}
        if n == 1:
            for v in range(self.period):
                colours[v] = t_map[mu_prime(f, (iso_map[v],))]
        else:
            for v in self.torus(n).vertices:
                colours[v] = t_map[mu_prime(f, tuple(iso_map[c] for c in v))]
        return colours

    def mu(self, f):
        """The verified equivariant simplicial map gamma(4*ell)^n -> sigma(2)."""
        n = self.check_polymorphism(f)
        colours = self.mu_colours(f)
        try:
            return map_from_colouring(self.torus(n), colours, check_equivariance=True)
        except Exception as exc:  # the composite is simplicial by construction
            raise InternalError(f"mu(f) failed validity: {exc}") from exc
