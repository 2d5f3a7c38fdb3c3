"""Colored bipartite and directed multigraphs.

A graph has vertices ``0..n-1`` with a side (0 for the A/black side,
1 for the B/white side; always 0 for directed graphs), a color per vertex
and a tuple of edges ``(src, dst, color)``.  In the bipartite case ``src``
is black and ``dst`` is white.

Two enumerations are provided.  The labeled one walks over pairs of types
and bijections between their slots; this is what the convolution formulas
use.  The edge-based one builds graphs edge by edge and is only used as an
independent check on the first.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial, gcd, prod

from .arith import LaurentPoly, RationalFn, to_laurent, var
from .partitions import (
    aut_count,
    double_types,
    flatten,
    flatten1,
    flatten2,
    partitions_of_size,
    types_of_degree,
)
from .symfunc import p_of


def prime_factors(n: int) -> list:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def phi(k: int, n: int) -> Fraction:
    """prod over primes p | n of (1 - p^-k)."""
    if n < 1 or k < 0:
        raise ValueError("phi needs k >= 0 and n >= 1")
    out = Fraction(1)
    for p in prime_factors(n):
        out *= 1 - Fraction(1, p ** k)
    return out


def fmt_partition(lam) -> str:
    return "(" + ",".join(map(str, lam)) + ")"


def gen_name(base: str, lam, mu=None) -> str:
    if mu is None:
        return f"{base}_{fmt_partition(lam)}"
    return f"{base}_({fmt_partition(lam)},{fmt_partition(mu)})"


def c_gamma_colors(edge_colors, vertex_colors, S) -> object:
    """S prod_e p_m(e)[S] / prod_v p_m(v)[S]."""
    if isinstance(S, int) or isinstance(S, Fraction):
        return Fraction(S) ** (1 + len(edge_colors) - len(vertex_colors))
    num = S * p_of(S, tuple(sorted(edge_colors, reverse=True)))
    den = p_of(S, tuple(sorted(vertex_colors, reverse=True)))
    return to_laurent(RationalFn(num, den))


@dataclass(frozen=True)
class ColoredGraph:
    directed: bool
    sides: tuple
    colors: tuple
    edges: tuple

    @property
    def n_vertices(self) -> int:
        return len(self.colors)

    def degree(self) -> int:
        return sum(c for _, _, c in self.edges)

    def betti(self) -> int:
        return len(self.edges) - len(self.colors) + 1

    def gcd_color(self) -> int:
        g = 0
        for c in self.colors:
            g = gcd(g, c)
        for _, _, c in self.edges:
            g = gcd(g, c)
        return g

    def is_connected(self) -> bool:
        return _connected(len(self.colors), [(a, b) for a, b, _ in self.edges])

    def is_admissible(self) -> bool:
        return all(c % self.colors[a] == 0 and c % self.colors[b] == 0 for a, b, c in self.edges)

    def vertex_partitions(self, v: int) -> tuple:
        """(lam, mu): outgoing and incoming edge colors divided by m(v).

        For bipartite graphs lam collects all incident edges and mu is empty.
        """
        m = self.colors[v]
        out = sorted((c // m for a, _, c in self.edges if a == v), reverse=True)
        inc = sorted((c // m for _, b, c in self.edges if b == v), reverse=True)
        if not self.directed:
            return tuple(sorted(out + inc, reverse=True)), ()
        return tuple(out), tuple(inc)

    def aut_vertices(self) -> int:
        return prod(aut_count(lam) * aut_count(mu) for lam, mu in map(self.vertex_partitions, range(self.n_vertices)))

    def weight_factor(self) -> Fraction:
        """#Aut(V) prod m(e) / prod m(v)."""
        return Fraction(self.aut_vertices() * prod(c for _, _, c in self.edges), prod(self.colors))

    def generator_monomial(self) -> LaurentPoly:
        """prod_v p_m(v)[A_lam(v)] in free generators (B on the white side)."""
        out = LaurentPoly(1)
        for v in range(self.n_vertices):
            lam, mu = self.vertex_partitions(v)
            if self.directed:
                name = gen_name("A", lam, mu)
            else:
                name = gen_name("A" if self.sides[v] == 0 else "B", lam)
            out = out * var(name).adams(self.colors[v])
        return out

    def weight(self) -> LaurentPoly:
        return self.generator_monomial() * self.weight_factor()

    def c_gamma(self, S) -> object:
        return c_gamma_colors([c for _, _, c in self.edges], list(self.colors), S)

    def aut_count(self) -> int:
        return _canonical(self)[1]

    def canonical(self) -> "ColoredGraph":
        return _canonical(self)[0]

    def to_json(self) -> dict:
        return {
            "directed": self.directed,
            "vertices": [{"side": s, "color": c} for s, c in zip(self.sides, self.colors)],
            "edges": [list(e) for e in self.edges],
        }

    def describe(self) -> str:
        names = []
        black = white = 0
        for s in self.sides:
            if self.directed:
                names.append(f"v{len(names)}")
            elif s == 0:
                names.append(f"a{black}")
                black += 1
            else:
                names.append(f"b{white}")
                white += 1
        verts = " ".join(f"{nm}:{c}" for nm, c in zip(names, self.colors))
        arrow = "->" if self.directed else "--"
        edges = " ".join(f"{names[a]}{arrow}{names[b]}:{c}" for a, b, c in self.edges)
        return f"vertices [{verts}] edges [{edges}]"


def _connected(n: int, pairs) -> bool:
    if n == 0:
        return False
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n
    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return comps == 1


@lru_cache(maxsize=None)
def _canonical(g: ColoredGraph):
    """Canonical relabeling and automorphism count.

    Vertices are split into classes by a local invariant, then every
    ordering inside the classes is tried.  The canonical form is the
    smallest relabeled edge tuple; the number of orderings reaching it is
    the number of vertex automorphisms.
    """
    n = g.n_vertices
    sig = []
    for v in range(n):
        out = tuple(sorted(c for a, _, c in g.edges if a == v))
        inc = tuple(sorted(c for _, b, c in g.edges if b == v))
        loops = tuple(sorted(c for a, b, c in g.edges if a == b == v))
        sig.append((g.sides[v], g.colors[v], len(out) + len(inc), out, inc, loops))
    order = sorted(range(n), key=lambda v: sig[v])
    classes = []
    for v in order:
        if classes and sig[classes[-1][0]] == sig[v]:
            classes[-1].append(v)
        else:
            classes.append([v])
    best = None
    hits = 0
    for choice in product(*(permutations(c) for c in classes)):
        new = {}
        for block in choice:
            for v in block:
                new[v] = len(new)
        edges = tuple(sorted((new[a], new[b], c) for a, b, c in g.edges))
        if best is None or edges < best:
            best, hits = edges, 1
        elif edges == best:
            hits += 1
    sides = tuple(g.sides[v] for v in order)
    colors = tuple(g.colors[v] for v in order)
    canon = ColoredGraph(g.directed, sides, colors, best)
    edge_aut = prod(factorial(m) for m in Counter(best).values())
    return canon, hits * edge_aut


# labeled enumeration


def _slots(tau, which=1):
    """(owner, color) for every part of every pair."""
    out = []
    for i, pair in enumerate(tau):
        k = pair[0]
        for part in pair[which]:
            out.append((i, k * part))
    return out


def _bijections(slots_a, slots_b):
    """All color-preserving bijections, as lists of (owner_a, owner_b, color)."""
    by_color_a: dict = {}
    by_color_b: dict = {}
    for owner, c in slots_a:
        by_color_a.setdefault(c, []).append(owner)
    for owner, c in slots_b:
        by_color_b.setdefault(c, []).append(owner)
    colors = sorted(by_color_a)
    if sorted(by_color_b) != colors or any(len(by_color_a[c]) != len(by_color_b[c]) for c in colors):
        return
    choices = [list(permutations(by_color_b[c])) for c in colors]
    for pick in product(*choices):
        edges = []
        for c, perm in zip(colors, pick):
            edges.extend((a, b, c) for a, b in zip(by_color_a[c], perm))
        yield edges


@lru_cache(maxsize=None)
def connected_bijection_count(tau, tau2) -> int:
    """Number of slot bijections between types tau and tau2 giving a connected graph."""
    na = len(tau)
    count = 0
    for edges in _bijections(_slots(tau), _slots(tau2)):
        if _connected(na + len(tau2), [(a, na + b) for a, b, _ in edges]):
            count += 1
    return count


@lru_cache(maxsize=None)
def connected_cycle_count(tau) -> int:
    """Number of out-slot to in-slot bijections of a double type giving a connected graph."""
    count = 0
    for edges in _bijections(_slots(tau, 1), _slots(tau, 2)):
        if _connected(len(tau), [(a, b) for a, b, _ in edges]):
            count += 1
    return count


def pair_coefficient(tau, tau2, S=1):
    """phi_b(g) * c_Gamma[S] * (sum of bijection weights over connected bijections)
    for a pair of types; this is the coefficient of A^tau B^tau2 in L^S."""
    return _pair_coefficient(tau, tau2, S)


@lru_cache(maxsize=None)
def _pair_coefficient(tau, tau2, S):
    flat = flatten(tau)
    if flat != flatten(tau2):
        return 0
    nconn = connected_bijection_count(tau, tau2)
    if not nconn:
        return 0
    ks = [k for k, _ in tau] + [k for k, _ in tau2]
    g = 0
    for x in ks + list(flat):
        g = gcd(g, x)
    b = len(flat) - len(ks) + 1
    ph = phi(b, g)
    if not ph:
        return 0
    w = Fraction(nconn * prod(flat), aut_count(tau) * aut_count(tau2) * prod(ks))
    return c_gamma_colors(flat, ks, S) * (ph * w)


def trace_coefficient(tau, S=1):
    """Coefficient of A^tau in the directed (trace) convolution."""
    return _trace_coefficient(tau, S)


@lru_cache(maxsize=None)
def _trace_coefficient(tau, S):
    f1 = flatten1(tau)
    if f1 != flatten2(tau):
        return 0
    nconn = connected_cycle_count(tau)
    if not nconn:
        return 0
    ks = [k for k, _, _ in tau]
    g = 0
    for x in ks + list(f1):
        g = gcd(g, x)
    b = len(f1) - len(ks) + 1
    ph = phi(b, g)
    if not ph:
        return 0
    w = Fraction(nconn * prod(f1), aut_count(tau) * prod(ks))
    return c_gamma_colors(f1, ks, S) * (ph * w)


def labeled_bipartite(d: int):
    """Yield (graph, bijection weight) for every connected labeled
    bipartite graph of degree d with nonzero phi factor."""
    taus = types_of_degree(d)
    by_flat: dict = {}
    for tau in taus:
        by_flat.setdefault(flatten(tau), []).append(tau)
    for flat, group in by_flat.items():
        for tau in group:
            for tau2 in group:
                ks = [k for k, _ in tau] + [k for k, _ in tau2]
                base = Fraction(prod(flat), aut_count(tau) * aut_count(tau2) * prod(ks))
                na = len(tau)
                for edges in _bijections(_slots(tau), _slots(tau2)):
                    e = tuple((a, na + b, c) for a, b, c in edges)
                    g = ColoredGraph(False, (0,) * na + (1,) * len(tau2), tuple(ks), e)
                    if g.is_connected() and phi(g.betti(), g.gcd_color()):
                        yield g, base


def labeled_directed(d: int):
    for tau in double_types(2 * d):
        f1 = flatten1(tau)
        if f1 != flatten2(tau):
            continue
        ks = [k for k, _, _ in tau]
        base = Fraction(prod(f1), aut_count(tau) * prod(ks))
        for edges in _bijections(_slots(tau, 1), _slots(tau, 2)):
            g = ColoredGraph(True, (0,) * len(tau), tuple(ks), tuple(edges))
            if g.is_connected() and phi(g.betti(), g.gcd_color()):
                yield g, base


def _singletons(directed: bool):
    if directed:
        return [ColoredGraph(True, (0,), (1,), ())]
    return [ColoredGraph(False, (0,), (1,), ()), ColoredGraph(False, (1,), (1,), ())]


def _sorted_graphs(graphs):
    return sorted(graphs, key=lambda g: (g.n_vertices, len(g.edges), g.sides, g.colors, g.edges))


def enumerate_bipartite(d: int) -> list:
    """Connected admissible bipartite graphs of degree d up to isomorphism,
    skipping trees with g > 1.  Degree 0 gives the two single vertices."""
    if d == 0:
        return _singletons(False)
    return _sorted_graphs({g.canonical() for g, _ in labeled_bipartite(d)})


def enumerate_directed(d: int) -> list:
    if d == 0:
        return _singletons(True)
    return _sorted_graphs({g.canonical() for g, _ in labeled_directed(d)})


def labeled_weight_sums(d: int, directed=False) -> dict:
    """Sum of bijection weights per isomorphism class."""
    out: dict = {}
    source = labeled_directed(d) if directed else labeled_bipartite(d)
    for g, w in source:
        c = g.canonical()
        out[c] = out.get(c, 0) + w
    return out


def _divisors(n: int) -> list:
    return [k for k in range(1, n + 1) if n % k == 0]


def enumerate_by_edges(d: int, directed=False) -> list:
    """Independent enumeration: place edges with given colors between
    vertices, then color vertices by divisors.  Slow, for checking only."""
    if d == 0:
        return _singletons(directed)
    found = set()
    for colors in partitions_of_size(d):
        e = len(colors)
        for nv in range(1, e + 2):
            splits = [(nv, 0)] if directed else [(nb, nv - nb) for nb in range(1, nv)]
            for nb, nw in splits:
                if directed:
                    ends = [(a, b) for a in range(nv) for b in range(nv)]
                else:
                    ends = [(a, nb + b) for a in range(nb) for b in range(nw)]
                for pick in product(ends, repeat=e):
                    if not _connected(nv, pick):
                        continue
                    edges = [(a, b, c) for (a, b), c in zip(pick, colors)]
                    vg = []
                    for v in range(nv):
                        x = 0
                        for a, b, c in edges:
                            if v in (a, b):
                                x = gcd(x, c)
                        vg.append(_divisors(x))
                    sides = (0,) * nv if directed else (0,) * nb + (1,) * nw
                    for vc in product(*vg):
                        g = ColoredGraph(directed, sides, tuple(vc), tuple(sorted(edges)))
                        if phi(g.betti(), g.gcd_color()):
                            found.add(g.canonical())
    return _sorted_graphs(found)
