"""Logarithmic convolutions as sums over colored graphs.

``log_convolution(A, B, S)`` returns L^S with

    pExp[L^S / S] = (pExp[A[X]/S], pExp[B[X]/S])^S_X,
    A[X] = sum_lam A_lam p_lam[X],  B[X] = sum_lam B_lam p_lam[X],

and ``trace_convolution(A, S)`` the directed analogue for
A[X, X*] = sum A_{lam,mu} p_lam[X] p_mu[X*].  The families are dicts from
partitions (pairs of partitions) to scalars or SymSeries.  Graph sums are
organized by pairs of types: each type pair contributes
phi_b(g) c_Gamma[S] (sum of bijection weights) A^tau B^tau'.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import LaurentPoly, RationalFn, scalar_adams, var
from .graphs import gen_name, pair_coefficient, trace_coefficient
from .partitions import flatten, flatten1, flatten2, pair_key
from .symfunc import SymSeries, bound


def _is_zero(x) -> bool:
    return not x


def _adams(x, k):
    if isinstance(x, SymSeries):
        return x.adams(k)
    return scalar_adams(x, k)


def _bounded_multisets(items, weights, caps):
    """Sorted multisets of ``items`` whose weight vectors sum within ``caps``.

    Every item must have a positive weight in some capped coordinate.
    """
    for it, w in zip(items, weights):
        if not any(x > 0 and c is not None for x, c in zip(w, caps)):
            raise ValueError(f"item {it} has no positive cost under the given bounds")
    order = sorted(range(len(items)), key=lambda i: pair_key(items[i]))
    items = [items[i] for i in order]
    weights = [weights[i] for i in order]
    out = []
    dims = range(len(caps))

    def rec(start, used, acc):
        out.append(tuple(acc))
        for i in range(start, len(items)):
            w = weights[i]
            new = [used[j] + w[j] for j in dims]
            if any(caps[j] is not None and new[j] > caps[j] for j in dims):
                continue
            acc.append(items[i])
            rec(i, new, acc)
            acc.pop()

    rec(0, [0] * len(caps), [])
    return out


def _min_cost(x, name):
    """Smallest degree of ``name`` among the terms of x (scalars: 0)."""
    if isinstance(x, SymSeries):
        if name in x.graded:
            i = len(x.alphabets) + x.graded.index(name)
            return min(k[i] for k in x.terms)
        if name in x.alphabets:
            i = x.alphabets.index(name)
            return min(sum(k[i]) for k in x.terms)
        return 0
    if isinstance(x, (LaurentPoly, RationalFn)):
        num = x if isinstance(x, LaurentPoly) else x.num
        return num.min_degree(name)
    return 0


class _Product:
    """Cached products prod p_k[family[key]] over a multiset of (k, key)."""

    def __init__(self, family):
        self.family = family
        self.cache = {(): 1}
        self.adams = {}

    def get(self, tau):
        if tau in self.cache:
            return self.cache[tau]
        head = self.get(tau[:-1])
        k = tau[-1][0]
        key = tau[-1][1:] if len(tau[-1]) > 2 else tau[-1][1]
        if (k, key) not in self.adams:
            self.adams[k, key] = _adams(self.family[key], k)
        val = self.adams[k, key]
        out = val if (isinstance(head, int) and head == 1) else head * val
        self.cache[tau] = out
        return out


def _mul(coef, val):
    if isinstance(val, SymSeries):
        return val.scale(coef)
    return coef * val


def _items(fam, size, cap, cost, budget):
    """Candidate (k, key) pairs with weight vectors (k * size, k * cost)."""
    items, weights = [], []
    for key, val in fam.items():
        d = size(key)
        if d == 0:
            continue
        c = _min_cost(val, cost) if cost else 0
        if cap is None and (budget is None or c <= 0):
            raise ValueError(f"entry {key} is not bounded; give a degree cap or a positive cost")
        k = 1
        while (cap is None or k * d <= cap) and (budget is None or k * c <= budget):
            items.append((k,) + (key if size is _double_size else (key,)))
            weights.append((k * d, k * c))
            k += 1
    return items, weights


def _single_size(lam):
    return sum(lam)


def _double_size(key):
    return sum(key[0]) + sum(key[1])


def log_convolution(A: dict, B: dict, S=1, D=None, cost=None, budget=None):
    """L^S(A, B) summed over connected admissible bipartite graphs.

    ``D`` caps the graph degree (sum of edge colors).  ``cost`` names a
    graded variable or alphabet and ``budget`` caps the total
    sum_v m(v) * (lowest degree of the vertex entry in ``cost``).
    """
    A = {tuple(k): v for k, v in A.items() if not _is_zero(v)}
    B = {tuple(k): v for k, v in B.items() if not _is_zero(v)}
    total = _add(A.get(()), B.get(()))
    sides = []
    for fam in (A, B):
        items, weights = _items(fam, _single_size, D, cost, budget)
        sides.append(_bounded_multisets(items, weights, (D, budget)))
    groups: dict = {}
    for tau in sides[1]:
        if tau:
            groups.setdefault(flatten(tau), []).append(tau)
    pa, pb = _Product(A), _Product(B)
    for tau in sides[0]:
        if not tau:
            continue
        ca = sum(k * _min_cost(A[lam], cost) for k, lam in tau) if budget is not None else 0
        for tau2 in groups.get(flatten(tau), ()):
            if budget is not None and ca + sum(k * _min_cost(B[lam], cost) for k, lam in tau2) > budget:
                continue
            coef = pair_coefficient(tau, tau2, S)
            if _is_zero(coef):
                continue
            total = _add(total, _mul(coef, _times(pa.get(tau), pb.get(tau2))))
    return 0 if total is None else total


def trace_convolution(A: dict, S=1, D=None, cost=None, budget=None):
    """Directed-graph convolution: pExp[result/S] = int^S_X pExp[A[X,X*]/S].

    ``D`` caps the graph degree; ``cost``/``budget`` work as in
    :func:`log_convolution`.
    """
    A = {(tuple(k[0]), tuple(k[1])): v for k, v in A.items() if not _is_zero(v)}
    total = _add(A.get(((), ())), None)
    items, weights = _items(A, _double_size, None if D is None else 2 * D, cost, budget)
    prod_ = _Product(A)
    for tau in _bounded_multisets(items, weights, (None if D is None else 2 * D, budget)):
        if not tau or flatten1(tau) != flatten2(tau):
            continue
        coef = trace_coefficient(tau, S)
        if _is_zero(coef):
            continue
        total = _add(total, _mul(coef, prod_.get(tau)))
    return 0 if total is None else total


def _times(a, b):
    if isinstance(a, int) and a == 1:
        return b
    if isinstance(b, int) and b == 1:
        return a
    if isinstance(b, SymSeries) and not isinstance(a, SymSeries):
        return b.scale(a)
    return a * b


def _add(a, b):
    if a is None or (not isinstance(a, SymSeries) and _is_zero(a)):
        return b
    if b is None or (not isinstance(b, SymSeries) and _is_zero(b)):
        return a
    return a + b


# free generators


def free_family(base: str, D: int, with_constant=True) -> dict:
    """{lam: generator A_lam} for |lam| <= D."""
    from .partitions import partitions_up_to

    fam = {lam: var(gen_name(base, lam)) for lam in partitions_up_to(D) if lam or with_constant}
    return fam


def free_double_family(base: str, D: int) -> dict:
    from .partitions import partitions_up_to

    return {
        (lam, mu): var(gen_name(base, lam, mu))
        for a in range(D + 1)
        for lam in partitions_up_to(a)
        if sum(lam) == a
        for mu in partitions_up_to(D)
    }


def generator_degree(poly: LaurentPoly) -> dict:
    """Split a polynomial in free A/B generators by graph degree (half the
    total generator degree); other variables such as q, t carry no degree."""
    import re

    out: dict = {}
    for key, c in poly.terms().items():
        deg = 0
        for nm, e in key:
            m = re.match(r"(?:p(\d+)\[)?[A-Z]_(.*?)\]?\Z", nm)
            if m is None:
                continue
            k = int(m.group(1)) if m.group(1) else 1
            inner = m.group(2)
            parts = [int(x) for x in re.findall(r"\d+", inner)]
            deg += e * k * sum(parts)
        deg //= 2
        out[deg] = out.get(deg, LaurentPoly(0)) + LaurentPoly.from_terms({key: c})
    return out


# brute-force oracles


def brute_force_log_conv(A: dict, B: dict, S, D: int, grade="T", tcap=None):
    """S * pLog((pExp[A[X]/S], pExp[B[X]/S])^S) computed directly.

    The families are scalars whose grading variable ``grade`` makes the
    exponentials truncatable: entries are assumed to be multiples of
    grade^(|lam|) (and grade^1 for the empty partition).  The result is
    truncated at grade-degree ``tcap`` (default 2D).
    """
    tcap = 2 * D if tcap is None else tcap
    bounds = (bound(D, "X"), bound(tcap, grade))

    def fam_series(fam, left):
        terms = {}
        for lam, c in fam.items():
            lam = tuple(lam)
            if _is_zero(c):
                continue
            w = c * _p_of_scalar(S, lam) if left else c
            terms[(lam, 0)] = RationalFn(w, S) if not isinstance(S, int) else Fraction(1, S) * w
        return SymSeries(("X",), (grade,), bounds, terms)

    left = fam_series(A, True).pexp()
    right = fam_series(B, False).pexp()
    C = left.pair(right, "X")
    L = C.plog().scale(S)
    return L


def brute_force_trace(A: dict, S, D: int, grade="T", tcap=None):
    """S * pLog(int^S_X pExp[A[X,X*]/S]) computed directly."""
    tcap = 2 * D if tcap is None else tcap
    bounds = (bound(D, "X"), bound(D, "Xs"), bound(tcap, grade))
    terms = {}
    for (lam, mu), c in A.items():
        if _is_zero(c):
            continue
        w = c * _p_of_scalar(S, tuple(lam))
        terms[(tuple(lam), tuple(mu), 0)] = RationalFn(w, S) if not isinstance(S, int) else Fraction(1, S) * w
    E = SymSeries(("X", "Xs"), (grade,), bounds, terms).pexp()
    C = E.trace("X", "Xs")
    return C.plog().scale(S)


def _p_of_scalar(S, lam):
    from .symfunc import p_of

    return p_of(S, lam)
