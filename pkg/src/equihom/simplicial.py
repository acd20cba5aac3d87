"""Relational simplicial sets: spheres, triangulated circles, products.

A relational simplicial set stores, per dimension up to a cap, the set of
non-degenerate simplices as ordered vertex tuples.  Degenerate simplices are
reconstructed on demand: a tuple is a simplex exactly when collapsing its
consecutive repeats leaves a stored tuple, and it is degenerate exactly when
it has a consecutive repeat.
"""

from functools import lru_cache
from itertools import product

from .errors import (AlternatingSimplexError, CapacityExceededError,
                     InvalidParameterError, NotEquivariantError)
from .snf import gf2_rank

YELLOW = "yellow"
BLUE = "blue"

# process-wide budget for product construction; the CLI can override it
MAX_CELLS = 1 << 22


def normalize_simplex(tup):
    """Collapse consecutive repeats, leaving the non-degenerate core."""
    out = [tup[0]]
    for x in tup[1:]:
        if x != out[-1]:
            out.append(x)
    return tuple(out)


def alternations(tup):
    return sum(1 for a, b in zip(tup, tup[1:]) if a != b)


def _compositions(total, parts):
    """All ways to write total as an ordered sum of ``parts`` positive ints."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class SimplicialSet:
    """A relational simplicial set with an optional vertex involution."""

    def __init__(self, vertices, simplices, cap, involution=None, check=True):
        self.vertices = tuple(vertices)
        self.vertex_set = frozenset(self.vertices)
        if len(self.vertex_set) != len(self.vertices):
            raise InvalidParameterError("duplicate vertex labels")
        if cap < 1:
            raise InvalidParameterError("dimension cap must be >= 1")
        self.cap = cap
        cells = {0: frozenset((v,) for v in self.vertices)}
        for d in range(1, cap + 1):
            cells[d] = frozenset(tuple(s) for s in simplices.get(d, ()))
        self._cells = cells
        self.involution = dict(involution) if involution is not None else None
        if check:
            self._check(closure=True)
        elif self.involution is not None:
            self._check(closure=False)

    def _check(self, closure):
        for d in range(1, self.cap + 1):
            for s in self._cells[d]:
                if len(s) != d + 1:
                    raise InvalidParameterError(f"stored {d}-simplex of wrong length: {s}")
                if any(a == b for a, b in zip(s, s[1:])):
                    raise InvalidParameterError(f"stored simplex is degenerate: {s}")
                if any(v not in self.vertex_set for v in s):
                    raise InvalidParameterError(f"simplex uses unknown vertex: {s}")
                if closure:
                    for i in range(d + 1):
                        face = s[:i] + s[i + 1:]
                        if not self.has_simplex(face):
                            raise InvalidParameterError(
                                f"closure violated: face {face} of {s} missing")
        nu = self.involution
        if nu is not None:
            if set(nu) != self.vertex_set or set(nu.values()) != self.vertex_set:
                raise InvalidParameterError("involution is not a vertex permutation")
            for v in self.vertices:
                if nu[nu[v]] != v:
                    raise InvalidParameterError("involution is not self-inverse")
            for d in range(1, self.cap + 1):
                for s in self._cells[d]:
                    if self.involution_simplex(s) not in self._cells[d]:
                        raise InvalidParameterError(
                            f"involution does not preserve simplices: {s}")

    def cells(self, d):
        """Non-degenerate d-simplices (empty beyond the stored range)."""
        return self._cells.get(d, frozenset())

    def n_cells(self, d):
        return len(self.cells(d))

    def dimension(self):
        return max((d for d in range(self.cap + 1) if self._cells.get(d)), default=0)

    def euler_characteristic(self):
        return sum((-1) ** d * self.n_cells(d) for d in range(self.cap + 1))

    def has_simplex(self, tup):
        if not tup or any(v not in self.vertex_set for v in tup):
            return False
        core = normalize_simplex(tup)
        return core in self.cells(len(core) - 1)

    def weak_simplices(self, d):
        """All d-simplices including degenerate ones."""
        for k in range(min(d, self.cap) + 1):
            for core in self._cells[k]:
                if k == d:
                    yield core
                else:
                    for mult in _compositions(d + 1, k + 1):
                        out = []
                        for v, m in zip(core, mult):
                            out.extend([v] * m)
                        yield tuple(out)

    def count_weak_simplices(self, d):
        from math import comb
        return sum(comb(d, k) * len(self._cells[k]) for k in range(min(d, self.cap) + 1))

    def involution_vertex(self, v):
        return self.involution[v]

    def involution_simplex(self, tup):
        nu = self.involution
        return tuple(nu[v] for v in tup)

    def has_free_involution(self):
        # freeness on vertices implies freeness on all cells
        return self.involution is not None and all(
            self.involution[v] != v for v in self.vertices)

    def to_json(self):
        index = {v: i for i, v in enumerate(self.vertices)}
        obj = {"vertices": [_label_to_json(v) for v in self.vertices],
               "cap": self.cap,
               "simplices": {str(d): sorted([index[v] for v in s] for s in self.cells(d))
                             for d in range(1, self.cap + 1)}}
        if self.involution is not None:
            obj["involution"] = [index[self.involution[v]] for v in self.vertices]
        return obj

    @classmethod
    def from_json(cls, obj):
        vertices = [_label_from_json(v) for v in obj["vertices"]]
        simplices = {int(d): [tuple(vertices[i] for i in s) for s in ss]
                     for d, ss in obj["simplices"].items()}
        involution = None
        if "involution" in obj:
            involution = {vertices[i]: vertices[j] for i, j in enumerate(obj["involution"])}
        return cls(vertices, simplices, obj["cap"], involution)


def _label_to_json(v):
    if isinstance(v, tuple):
        return [_label_to_json(x) for x in v]
    return v


def _label_from_json(v):
    if isinstance(v, list):
        return tuple(_label_from_json(x) for x in v)
    return v


def sigma(k, cap=None):
    """The two-vertex sphere model: simplices are tuples with <= k alternations.

    Carries the free involution swapping the two vertices.  Non-degenerate
    d-simplices exist for d <= k only, two per dimension.
    """
    if not 0 <= k <= 3:
        raise InvalidParameterError("sigma(k) supports 0 <= k <= 3")
    if cap is None:
        cap = max(3, k)
    if cap < k:
        raise InvalidParameterError("cap must cover the sphere dimension")
    simplices = {}
    for d in range(1, min(k, cap) + 1):
        a = tuple(YELLOW if i % 2 == 0 else BLUE for i in range(d + 1))
        b = tuple(BLUE if i % 2 == 0 else YELLOW for i in range(d + 1))
        simplices[d] = [a, b]
    return SimplicialSet([YELLOW, BLUE], simplices, cap,
                         involution={YELLOW: BLUE, BLUE: YELLOW})


@lru_cache(maxsize=None)
def sigma2():
    return sigma(2)


def gamma(L, cap=3):
    """Order complex of the alternating cyclic poset on Z_L.

    a < b iff a is even, b is odd and a - b = +-1 mod L; the involution is the
    shift by L/2.  A triangulated circle with L vertices and L edges.
    """
    if L < 4 or L % 4:
        raise InvalidParameterError("gamma(L) needs L >= 4 divisible by 4")
    edges = []
    for a in range(0, L, 2):
        edges.append((a, (a + 1) % L))
        edges.append((a, (a - 1) % L))
    involution = {v: (v + L // 2) % L for v in range(L)}
    return SimplicialSet(range(L), {1: edges}, cap, involution=involution)


def order_complex(elements, less_than, cap, involution=None):
    """Order complex of a finite strict order: simplices are strict chains."""
    elements = list(elements)
    ups = {a: [b for b in elements if less_than(a, b)] for a in elements}
    simplices = {}
    chains = [(a,) for a in elements]
    for d in range(1, cap + 1):
        nxt = []
        for chain in chains:
            for b in ups[chain[-1]]:
                nxt.append(chain + (b,))
        if not nxt:
            break
        simplices[d] = nxt
        chains = nxt
    return SimplicialSet(elements, simplices, cap, involution=involution)


def sproduct(factors, cap=None, max_cells=None, check=True):
    """Product of simplicial sets; simplices are taken dimension-wise.

    The involution (present on all factors or none) acts diagonally.  A
    product simplex is non-degenerate iff no two consecutive vertex tuples
    coincide, which can happen even when some components are degenerate.
    """
    if max_cells is None:
        max_cells = MAX_CELLS
    factors = list(factors)
    if not factors:
        raise InvalidParameterError("sproduct needs at least one factor")
    if len(factors) == 1:
        return factors[0]
    with_inv = [f.involution is not None for f in factors]
    if any(with_inv) and not all(with_inv):
        raise InvalidParameterError("involutions must be present on all factors or none")
    if cap is None:
        cap = min(f.cap for f in factors)
    total = 0
    for d in range(cap + 1):
        counts = 1
        for f in factors:
            counts *= f.count_weak_simplices(d)
        total += counts
    if total > max_cells:
        raise CapacityExceededError(
            f"product would scan {total} candidate cells (limit {max_cells})")

    vertices = [tuple(vs) for vs in product(*[f.vertices for f in factors])]
    simplices = {}
    for d in range(1, cap + 1):
        found = []
        for combo in product(*[list(f.weak_simplices(d)) for f in factors]):
            cell = tuple(zip(*combo))
            if any(a == b for a, b in zip(cell, cell[1:])):
                continue
            found.append(cell)
        simplices[d] = found
    involution = None
    if all(with_inv):
        involution = {v: tuple(f.involution[x] for f, x in zip(factors, v))
                      for v in vertices}
    return SimplicialSet(vertices, simplices, cap, involution=involution, check=check)


@lru_cache(maxsize=16)
def gamma_power(L, n, cap=None):
    """Cached torus triangulation gamma(L)^n with the diagonal involution."""
    if cap is None:
        cap = max(3, n)
    if n == 1:
        return gamma(L, cap=cap)
    return sproduct([gamma(L) for _ in range(n)], cap=cap)


def replace_involution(x, mapping):
    """Copy of x with a different involution (validated)."""
    simplices = {d: x.cells(d) for d in range(1, x.cap + 1)}
    return SimplicialSet(x.vertices, simplices, x.cap, involution=mapping, check=False)


class SimplicialMap:
    """A simplicial map given by its vertex map; image simplices are checked."""

    def __init__(self, domain, codomain, vertex_map, check=True):
        self.domain = domain
        self.codomain = codomain
        self.vertex_map = dict(vertex_map)
        if check:
            missing = [v for v in domain.vertices if v not in self.vertex_map]
            if missing:
                raise InvalidParameterError(f"vertex map misses {missing[:3]}...")
            for d in range(domain.cap + 1):
                for s in domain.cells(d):
                    img = self.image_simplex(s)
                    if not codomain.has_simplex(img):
                        raise InvalidParameterError(
                            f"image of {s} is not a simplex: {img}")

    def __call__(self, v):
        return self.vertex_map[v]

    def image_simplex(self, tup):
        vm = self.vertex_map
        return tuple(vm[v] for v in tup)

    def is_equivariant(self):
        nu_x = self.domain.involution
        nu_y = self.codomain.involution
        if nu_x is None or nu_y is None:
            return False
        vm = self.vertex_map
        return all(vm[nu_x[v]] == nu_y[vm[v]] for v in self.domain.vertices)


def map_from_colouring(x, colouring, check_equivariance=False):
    """The simplicial map into sigma(2) described by a yellow/blue colouring.

    Valid iff no non-degenerate 3-simplex of x maps to a 3-alternating tuple;
    degenerate ones never do, and faces of stored simplices are stored, so
    scanning the stored 3-simplices suffices.  With ``check_equivariance``,
    antipodal vertices must receive opposite colours.
    """
    if x.cap < 3:
        raise InvalidParameterError("need the 3-simplices: construct x with cap >= 3")
    target = sigma2()
    col = dict(colouring) if not isinstance(colouring, dict) else colouring
    for v in x.vertices:
        if col.get(v) not in (YELLOW, BLUE):
            raise InvalidParameterError(f"vertex {v} lacks a yellow/blue colour")
    for s in x.cells(3):
        img = tuple(col[v] for v in s)
        if alternations(img) == 3:
            raise AlternatingSimplexError(
                f"3-simplex {s} has a 3-alternating image", witness=s)
    if check_equivariance:
        if x.involution is None:
            raise InvalidParameterError("domain has no involution")
        for v in x.vertices:
            if col[x.involution[v]] == col[v]:
                raise NotEquivariantError(
                    f"vertex {v} and its antipode share a colour", witness=v)
    return SimplicialMap(x, target, col, check=False)


class ModTwoChain:
    """A mod-2 cellular chain: a set of non-degenerate cells of one dimension."""

    def __init__(self, dimension, cells):
        self.dimension = dimension
        self.cells = frozenset(cells)
        if any(len(c) != dimension + 1 for c in self.cells):
            raise InvalidParameterError("cell of wrong dimension in chain")
        if any(a == b for c in self.cells for a, b in zip(c, c[1:])):
            raise InvalidParameterError("degenerate cell in chain")

    def __add__(self, other):
        if other.dimension != self.dimension:
            raise InvalidParameterError("chain dimensions differ")
        return ModTwoChain(self.dimension, self.cells ^ other.cells)

    def __eq__(self, other):
        return (isinstance(other, ModTwoChain)
                and self.dimension == other.dimension
                and self.cells == other.cells)

    def __len__(self):
        return len(self.cells)

    def __bool__(self):
        return bool(self.cells)

    def __repr__(self):
        return f"ModTwoChain(dim={self.dimension}, {len(self.cells)} cells)"

    def apply_involution(self, x):
        return ModTwoChain(self.dimension, {x.involution_simplex(c) for c in self.cells})


def boundary(chain):
    """Mod-2 sum of codimension-1 faces; degenerate faces are discarded."""
    if chain.dimension < 1:
        raise InvalidParameterError("boundary needs dimension >= 1")
    acc = set()
    for cell in chain.cells:
        for i in range(len(cell)):
            face = cell[:i] + cell[i + 1:]
            if any(a == b for a, b in zip(face, face[1:])):
                continue
            acc ^= {face}
    return ModTwoChain(chain.dimension - 1, acc)


def mod2_homology_ranks(x, top=None):
    """Ranks of the mod-2 cellular homology computed from non-degenerate cells."""
    if top is None:
        top = x.dimension()
    cells = [sorted(x.cells(d)) for d in range(top + 2)]
    index = [{c: i for i, c in enumerate(cs)} for cs in cells]
    ranks = []
    bnd_rank = [0] * (top + 3)
    for d in range(1, top + 2):
        rows = []
        for cell in cells[d]:
            mask = 0
            for i in range(len(cell)):
                face = cell[:i] + cell[i + 1:]
                if any(a == b for a, b in zip(face, face[1:])):
                    continue
                mask ^= 1 << index[d - 1][face]
            rows.append(mask)
        bnd_rank[d] = gf2_rank(rows)
    for d in range(top + 1):
        ranks.append(len(cells[d]) - bnd_rank[d] - bnd_rank[d + 1])
    return tuple(ranks)
