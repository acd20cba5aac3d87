"""Heights, coordinate edge classes, generalized diagonals, and experiments.

The height of a torus-grid vertex is its number of odd coordinates; every
edge raises height, and coordinate edges raise it by exactly one.  A
generalized diagonal is a cyclic path in a torus power whose vertices sit at
two complementary heights; pairing it with a free coordinate embeds a 2-torus
(a slice) along which colour-swapping edges can be located.
"""

import random
from fractions import Fraction
from itertools import combinations, product

from . import __version__
from .errors import (InvalidParameterError, InvariantViolationError)
from .graphs import complete_graph, power, sample_homs, enumerate_homs
from .degrees import deg_vector, torus_complex
from .homcomplexes import CyclePipeline


def height(v):
    """Number of odd coordinates of a torus-grid vertex (int or tuple)."""
    if isinstance(v, tuple):
        return sum(x % 2 for x in v)
    return v % 2


def _is_edge(u, v, L):
    """Is [u, v] an edge of gamma(L)^m, i.e. v raises a set of even coordinates."""
    changed = [i for i in range(len(u)) if u[i] != v[i]]
    if not changed:
        return False
    for i in changed:
        if u[i] % 2 != 0:
            return False
        if (v[i] - u[i]) % L not in (1, L - 1):
            return False
    return True


class GeneralizedDiagonal:
    """A cyclic path in gamma(L)^(ambient) at two complementary heights.

    ``path`` has one vertex per vertex of gamma(period); consecutive vertices
    are joined by an edge, the vertex half a period along is the antipode, and
    the heights h and ambient - h alternate (even path positions low).
    """

    def __init__(self, L, ambient, path):
        self.L = L
        self.ambient = ambient
        self.path = tuple(tuple(v) for v in path)
        self.period = len(self.path)
        self.validate()

    @property
    def low_height(self):
        return height(self.path[0])

    def validate(self):
        L, m, path = self.L, self.ambient, self.path
        if self.period < 4 or self.period % 4:
            raise InvariantViolationError("period must be a positive multiple of 4")
        if any(len(v) != m for v in path):
            raise InvariantViolationError("path vertex of wrong length")
        h = height(path[0])
        hi = m - h
        if not h < hi:
            raise InvariantViolationError("low height must be below its complement")
        for k, v in enumerate(path):
            expect = h if k % 2 == 0 else hi
            if height(v) != expect:
                raise InvariantViolationError(
                    f"height {height(v)} at position {k}, expected {expect}")
        for k in range(self.period):
            a, b = path[k], path[(k + 1) % self.period]
            low, high = (a, b) if k % 2 == 0 else (b, a)
            if not _is_edge(low, high, L):
                raise InvariantViolationError(f"positions {k},{k+1} are not an edge")
        half = self.period // 2
        for k in range(self.period):
            shifted = tuple((x + L // 2) % L for x in path[k])
            if path[(k + half) % self.period] != shifted:
                raise InvariantViolationError(f"antipodality fails at position {k}")


def zeta0(n, h, L):
    """The explicit generalized diagonal of period 3L in gamma(L)^(n-1).

    Built from the three-step block: raise the third and fourth coordinate
    blocks, then raise the first and lower the fourth, then raise the second
    and fourth; every three steps the whole vertex advances by one along the
    diagonal.  Valid whenever 3h <= n-1 and 2h < n-1.
    """
    if L < 4 or L % 4:
        raise InvalidParameterError("L must be a multiple of 4")
    m = n - 1
    if n < 2 or h < 0 or 3 * h > m or 2 * h >= m:
        raise InvalidParameterError("need 3h <= n-1 and 2h < n-1")
    tail = m - 3 * h

    def block(a, b, c, d):
        return (a,) * h + (b,) * h + (c,) * h + (d,) * tail

    base = [block(1, 0, 0, 0), block(1, 0, 1, 1), block(2, 0, 1, 0)]
    path = []
    for k in range(3 * L):
        q, r = divmod(k, 3)
        path.append(tuple((x + q) % L for x in base[r]))
    return GeneralizedDiagonal(L, m, path)


def standard_diagonal(n, L):
    """The diagonal embedding y -> (y, ..., y) as a period-L diagonal."""
    if n < 2:
        raise InvalidParameterError("need at least one ambient coordinate")
    path = [tuple(y for _ in range(n - 1)) for y in range(L)]
    return GeneralizedDiagonal(L, n - 1, path)


class EdgeClass:
    """The coordinate edges in direction i whose lower endpoint has height h."""

    def __init__(self, i, h, members):
        self.i = i
        self.h = h
        self.members = tuple(members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def iter_coordinate_edges(L, n, i, h):
    """Stream the edges of E_i(h): lower endpoint u with u_i even, height h."""
    if not 1 <= i <= n:
        raise InvalidParameterError("coordinate direction out of range")
    if not 0 <= h <= n - 1:
        raise InvalidParameterError("height out of range")
    others = [j for j in range(n) if j != i - 1]
    evens = range(0, L, 2)
    odds = range(1, L, 2)
    for odd_positions in combinations(others, h):
        odd_set = set(odd_positions)
        pools = []
        for j in range(n):
            if j == i - 1:
                pools.append(evens)
            elif j in odd_set:
                pools.append(odds)
            else:
                pools.append(evens)
        for u in product(*pools):
            for sign in (1, -1):
                v = list(u)
                v[i - 1] = (v[i - 1] + sign) % L
                yield (tuple(u), tuple(v))


def edge_classes(L, n, i, h):
    """Materialized E_i(h); stream with iter_coordinate_edges above n = 4."""
    if n > 4:
        raise InvalidParameterError("materializing above n = 4 is not supported; stream instead")
    return EdgeClass(i, h, iter_coordinate_edges(L, n, i, h))


def swap_fraction(colours, L, n, i, h):
    """Fraction of colour-swapping edges in E_i(h) together with E_i(n-1-h)."""
    col = colours.vertex_map if hasattr(colours, "vertex_map") else colours
    heights = {h, n - 1 - h}
    total = swaps = 0
    for hh in sorted(heights):
        for (u, v) in iter_coordinate_edges(L, n, i, hh):
            total += 1
            cu = col[u if n > 1 else u[0]]
            cv = col[v if n > 1 else v[0]]
            if cu != cv:
                swaps += 1
    return Fraction(swaps, total)


def slice_check(colours, L, n, zeta):
    """A colour-swapping coordinate-1 edge inside the image of the slice.

    The slice pairs the free first coordinate with the diagonal; the map must
    restrict to degree 1 on it (checked, a precondition), and then a swapping
    edge must exist by the degree argument.
    """
    col = colours.vertex_map if hasattr(colours, "vertex_map") else colours
    if zeta.ambient != n - 1 or zeta.L != L:
        raise InvalidParameterError("diagonal does not match the ambient torus")

    def full(x, y):
        return (x,) + zeta.path[y]

    restricted = {(x, y): col[full(x, y)]
                  for x in range(L) for y in range(zeta.period)}
    torus = torus_complex(L, zeta.period)
    if torus.deg1(restricted) != 1:
        raise InvalidParameterError("slice restriction must have degree 1")
    for y in range(zeta.period):
        for x in range(L):
            u, v = full(x, y), full((x + 1) % L, y)
            if col[u] != col[v]:
                return u, v
    raise InvariantViolationError("no swapping edge on a degree-1 slice")


def permute_coordinates(v, perm):
    """The automorphism a_perm of a torus power (perm is 1-based)."""
    return tuple(v[perm[j] - 1] for j in range(len(v)))


def shift_coordinate(v, i, L):
    """The automorphism b_i shifting coordinate i by 2 (1-based)."""
    return tuple((x + 2) % L if j == i - 1 else x for j, x in enumerate(v))


def sample_maximal_chain(L, n, rng):
    """A uniformly random maximal chain (top simplex) of gamma(L)^n."""
    base = tuple(rng.randrange(0, L, 2) for _ in range(n))
    order = list(range(n))
    rng.shuffle(order)
    chain = [base]
    cur = list(base)
    for j in order:
        cur[j] = (cur[j] + rng.choice((1, -1))) % L
        chain.append(tuple(cur))
    return chain


def chain_alternations(colours, chain):
    col = colours.vertex_map if hasattr(colours, "vertex_map") else colours
    labels = [col[v if len(v) > 1 else v[0]] for v in chain]
    return sum(1 for a, b in zip(labels, labels[1:]) if a != b)


def arity_experiment(ell, n_max, seed=0, sample_size=40, chain_samples=4000,
                     enumerate_cutoff=3000, swap_stat_maps=3):
    """Survey polymorphism degree weights and chain alternations up to n_max.

    Enumerates polymorphisms exhaustively while the count stays below the
    cutoff and falls back to seeded random sampling beyond; for each map it
    records the weight of its degree vector, counts colour alternations along
    sampled maximal chains of the torus (the sphere target caps these at two),
    and tabulates swap fractions per coordinate and height for a few maps.
    """
    if ell < 3 or ell % 2 == 0:
        raise InvalidParameterError("need an odd cycle length >= 3")
    rng = random.Random(seed)
    pipeline = CyclePipeline(ell)
    k4 = complete_graph(4)
    report = {
        "tool": "equihom",
        "version": __version__,
        "seed": seed,
        "t_fingerprint": pipeline.t.fingerprint(),
        "parameters": {"ell": ell, "n_max": n_max, "sample_size": sample_size,
                       "chain_samples": chain_samples,
                       "enumerate_cutoff": enumerate_cutoff},
        "per_n": [],
        "truncated": False,
    }
    L = pipeline.period
    for n in range(1, n_max + 1):
        dom = power(pipeline.base, n)
        stream = enumerate_homs(dom, k4, limit=enumerate_cutoff)
        polys = list(stream)
        mode = "exhaustive"
        if stream.truncated:
            mode = "sampled"
            report["truncated"] = True
            polys = sample_homs(dom, k4, sample_size, rng)
        inspected = polys if mode == "exhaustive" else polys[:sample_size]
        weights = {}
        alpha_by_values = {}
        colour_cache = []
        for f in inspected:
            colours = pipeline.mu_colours(f)
            alpha = deg_vector(colours, L=L, n=n)
            weights[alpha.weight] = weights.get(alpha.weight, 0) + 1
            alpha_by_values[f.values] = alpha.bits
            colour_cache.append((f, colours))
        max_alts = 0
        violations = 0
        chains_done = 0
        while chains_done < chain_samples and colour_cache:
            f, colours = colour_cache[chains_done % len(colour_cache)]
            chain = sample_maximal_chain(L, n, rng)
            alts = chain_alternations(colours, chain)
            max_alts = max(max_alts, alts)
            if alts > 2:
                violations += 1
            chains_done += 1
        swap_stats = {}
        for f, colours in colour_cache[:swap_stat_maps]:
            alpha = alpha_by_values[f.values]
            for i in range(1, n + 1):
                if alpha[i - 1] != 1:
                    continue
                for h in range(0, (n - 1) // 2 + 1):
                    frac = swap_fraction(colours, L, n, i, h)
                    key = f"i={i},h={h}"
                    entry = swap_stats.setdefault(key, [])
                    entry.append(str(frac))
        report["per_n"].append({
            "n": n,
            "mode": mode,
            "maps_inspected": len(inspected),
            "weight_histogram": {str(k): v for k, v in sorted(weights.items())},
            "max_weight": max(weights) if weights else 0,
            "chains_sampled": chains_done,
            "max_chain_alternations": max_alts,
            "alternation_violations": violations,
            "swap_fractions": swap_stats,
        })
    return report
