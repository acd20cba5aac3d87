"""Mod-2 degree invariants of equivariant torus maps, and the minion of odd vectors.

The degree of a map from a 2-torus counts, mod 2, the horizontal edges whose
image is the non-degenerate edge [blue, yellow] plus the band triangles whose
image is [blue, yellow, blue].  Degrees in each coordinate direction of an
n-torus come from 2-variable minors, assemble into a vector of odd weight, and
composing with the polymorphism pipeline realizes the minion homomorphism into
odd Z_2-vectors.
"""

from functools import lru_cache

from .errors import (InvalidParameterError, InvariantViolationError,
                     NotEquivariantError)
from .graphs import MinorSpec
from .homcomplexes import CyclePipeline
from .simplicial import (BLUE, YELLOW, ModTwoChain, SimplicialMap, boundary,
                         gamma_power, map_from_colouring)


class TorusComplex:
    """The triangulated 2-torus gamma(L) x gamma(L') with its cycle and band.

    ``x1`` is the chain of horizontal edges at second coordinate 0; ``b1`` is
    the band of all non-degenerate triangles whose second coordinates lie in
    [0, L'/2], whose boundary is x1 plus its antipodal translate.
    """

    def __init__(self, L, Lp, cap=3):
        for value in (L, Lp):
            if value < 4 or value % 4:
                raise InvalidParameterError("torus sides must be multiples of 4, >= 4")
        self.L = L
        self.Lp = Lp
        if L == Lp:
            self.sset = gamma_power(L, 2, cap=max(3, cap))
        else:
            from .simplicial import gamma, sproduct
            self.sset = sproduct([gamma(L), gamma(Lp)], cap=cap)
        x1_cells = {((a, 0), (b, 0)) for (a, b) in
                    (e for e in _circle_edges(L))}
        self.x1 = ModTwoChain(1, x1_cells)
        half = Lp // 2
        band = {cell for cell in self.sset.cells(2)
                if all(v[1] <= half for v in cell)}
        self.b1 = ModTwoChain(2, band)
        expected = self.x1 + self.x1.apply_involution(self.sset)
        if boundary(self.b1) != expected:
            raise InvariantViolationError("band boundary != cycle + antipodal cycle")

    def colour_of(self, colouring):
        if isinstance(colouring, SimplicialMap):
            if colouring.domain.vertex_set != self.sset.vertex_set:
                raise InvalidParameterError("map domain is not this torus")
            return colouring.vertex_map.__getitem__
        return colouring.__getitem__

    def deg1(self, colouring):
        """Edge crossings on the coordinate cycle plus alternating band triangles."""
        col = self.colour_of(colouring)
        count = 0
        for (u, v) in self.x1.cells:
            if col(u) == BLUE and col(v) == YELLOW:
                count += 1
        for (p, q, r) in self.b1.cells:
            if col(p) == BLUE and col(q) == YELLOW and col(r) == BLUE:
                count += 1
        return count % 2


@lru_cache(maxsize=16)
def torus_complex(L, Lp):
    return TorusComplex(L, Lp)


def _circle_edges(L):
    for a in range(0, L, 2):
        yield (a, (a + 1) % L)
        yield (a, (a - 1) % L)


def deg1(g, torus):
    """deg1 of a simplicial map (or colouring) on the given 2-torus."""
    return torus.deg1(g)


class OddVector:
    """An element of the odd-weight Z_2-vector minion."""

    def __init__(self, bits):
        self.bits = tuple(int(b) % 2 for b in bits)
        self.n = len(self.bits)
        if self.n < 1:
            raise InvalidParameterError("odd vectors need positive arity")
        if sum(self.bits) % 2 != 1:
            raise InvariantViolationError(f"vector {self.bits} has even weight")

    @property
    def weight(self):
        return sum(self.bits)

    def minor(self, pi):
        """Sum coordinates over the preimage blocks of pi, mod 2."""
        if pi.n != self.n:
            raise InvalidParameterError("minor arity mismatch")
        return OddVector(tuple(sum(self.bits[i - 1] for i in pi.preimage(j)) % 2
                               for j in range(1, pi.m + 1)))

    def __eq__(self, other):
        return isinstance(other, OddVector) and self.bits == other.bits

    def __hash__(self):
        return hash(self.bits)

    def __repr__(self):
        return f"OddVector{self.bits}"


def oddvector_minor(a, pi):
    return a.minor(pi)


def _torus_params(g, L=None, n=None):
    """Recover (L, n) from a map on gamma(L)^n; explicit arguments win."""
    vertices = g.domain.vertices if isinstance(g, SimplicialMap) else None
    if L is None or n is None:
        if vertices is None:
            raise InvalidParameterError("pass L and n explicitly for raw colourings")
        sample = vertices[0]
        if isinstance(sample, tuple):
            inferred_n = len(sample)
            inferred_l = max(max(v) for v in vertices) + 1
        else:
            inferred_n = 1
            inferred_l = max(vertices) + 1
        L = inferred_l if L is None else L
        n = inferred_n if n is None else n
    return L, n


def _vertex_colours(g):
    return g.vertex_map if isinstance(g, SimplicialMap) else dict(g)


def sigma_minor(n, i):
    """The 2-variable minor sending slot i to coordinate 1, the rest to 2."""
    return MinorSpec(n, 2, tuple(1 if j == i else 2 for j in range(1, n + 1)))


def minor_map(g, pi, L=None, n=None):
    """Precompose a torus map with the coordinate-duplication along pi.

    The result colours vertex (y_1..y_m) by g(y_{pi(1)}, ..., y_{pi(n)}); it
    is a valid simplicial map on gamma(L)^m.
    """
    L, n = _torus_params(g, L, n)
    if pi.n != n:
        raise InvalidParameterError("minor arity does not match the map")
    colours = _vertex_colours(g)
    target = gamma_power(L, pi.m)
    out = {}
    if pi.m == 1:
        for y in range(L):
            src = tuple(y for _ in range(n))
            out[y] = colours[src if n > 1 else y]
    else:
        for y in target.vertices:
            src = tuple(y[pi(i) - 1] for i in range(1, n + 1))
            out[y] = colours[src if n > 1 else src[0]]
    return map_from_colouring(target, out)


def deg_vector(g, L=None, n=None):
    """The vector (deg_1, ..., deg_n) of an equivariant torus map; odd weight.

    Raises if the input is not equivariant or if the computed weight comes out
    even, which would indicate a bug or an invalid input.
    """
    L, n = _torus_params(g, L, n)
    colours = _vertex_colours(g)
    domain = gamma_power(L, n)
    nu = domain.involution
    for v in domain.vertices:
        if colours[nu[v]] == colours[v]:
            raise NotEquivariantError("degree vectors need equivariant maps", witness=v)
    torus = torus_complex(L, L)
    bits = []
    for i in range(1, n + 1):
        mm = minor_map(g, sigma_minor(n, i), L=L, n=n)
        bits.append(torus.deg1(mm))
    return OddVector(bits)


def phi(f, pipeline):
    """The odd vector attached to a polymorphism: the degree vector of mu(f)."""
    if not isinstance(pipeline, CyclePipeline):
        raise InvalidParameterError("phi needs a CyclePipeline")
    n = pipeline.check_polymorphism(f)
    g = pipeline.mu(f)
    return deg_vector(g, L=pipeline.period, n=n)


def find_colour_swapping_edge(g, torus):
    """A horizontal edge with differently coloured endpoints; needs deg1 = 1."""
    if torus.deg1(g) != 1:
        raise InvalidParameterError("colour-swapping edges are guaranteed only for deg1 = 1")
    col = torus.colour_of(g)
    L, Lp = torus.L, torus.Lp
    for b in range(Lp):
        for a in range(L):
            u, v = (a, b), ((a + 1) % L, b)
            if col(u) != col(v):
                return u, v
    raise InvariantViolationError("no colour-swapping edge on a deg1 = 1 map")


def winding_colouring(L, n, j):
    """Colour blue exactly when coordinate j lies in the lower half [0, L/2)."""
    if not 1 <= j <= n:
        raise InvalidParameterError("coordinate out of range")
    half = L // 2
    if n == 1:
        return {v: (BLUE if v < half else YELLOW) for v in range(L)}
    return {v: (BLUE if v[j - 1] < half else YELLOW)
            for v in gamma_power(L, n).vertices}


def monomial_colouring(L, n, support):
    """An equivariant simplicial map whose degree vector is the support pattern.

    Sums the round-up-to-even reparametrization u(x) = x + (x mod 2) over the
    support coordinates and colours by the half the sum lands in.  Along any
    chain each step moves the sum forward by 0 or 2 per raised coordinate, so
    with |support| <= 3 and L >= 8 no 3-simplex image can alternate three
    times.  The support must have odd size (degree vectors have odd weight).
    """
    support = tuple(sorted(set(support)))
    if any(not 1 <= j <= n for j in support):
        raise InvalidParameterError("support out of range")
    if len(support) % 2 == 0 or not support:
        raise InvalidParameterError("support must have odd size")
    if len(support) > 3:
        raise InvalidParameterError("supports larger than 3 are not constructed here")
    if len(support) == 3 and L < 8:
        raise InvalidParameterError("weight-3 patterns need L >= 8")
    half = L // 2

    def level(v):
        coords = (v,) if n == 1 else v
        return sum((coords[j - 1] + coords[j - 1] % 2) for j in support) % L

    verts = range(L) if n == 1 else gamma_power(L, n).vertices
    return {v: (BLUE if level(v) < half else YELLOW) for v in verts}
