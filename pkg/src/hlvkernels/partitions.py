"""Partitions, cells, diagram statistics and types.

Partitions are plain tuples of weakly decreasing positive integers.
Cells are ``(col, row)`` pairs counted from 0, so that the cell in the
corner contributes ``q^0 t^0``.  A type is a sorted tuple of pairs
``(k, lam)`` and a double type a sorted tuple of triples ``(k, lam, mu)``.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import factorial, prod
from typing import Iterator

Partition = tuple
Cell = tuple
Type = tuple
DoubleType = tuple


def make_partition(parts) -> Partition:
    lam = tuple(sorted((int(p) for p in parts if p), reverse=True))
    if any(p < 0 for p in lam):
        raise ValueError(f"negative part in {parts}")
    return lam


def is_partition(lam) -> bool:
    return all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1)) and all(p > 0 for p in lam)


def size(lam: Partition) -> int:
    return sum(lam)


@lru_cache(maxsize=None)
def partitions_of_size(n: int) -> tuple:
    """All partitions of n, in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []

    def rec(rem, maxpart, acc):
        if rem == 0:
            out.append(tuple(acc))
            return
        for p in range(min(rem, maxpart), 0, -1):
            acc.append(p)
            rec(rem - p, p, acc)
            acc.pop()

    rec(n, n, [])
    return tuple(out)


def partitions_up_to(n: int) -> Iterator[Partition]:
    for k in range(n + 1):
        yield from partitions_of_size(k)


@lru_cache(maxsize=None)
def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def cells(lam: Partition) -> Iterator[Cell]:
    for r, part in enumerate(lam):
        for c in range(part):
            yield (c, r)


def arm_leg(lam: Partition, cell: Cell) -> tuple:
    c, r = cell
    if not (0 <= r < len(lam) and 0 <= c < lam[r]):
        raise ValueError(f"cell {cell} is outside the diagram of {lam}")
    return lam[r] - c - 1, conjugate(lam)[c] - r - 1


def stat_n(lam: Partition) -> int:
    return sum(i * p for i, p in enumerate(lam))


def stat_n_conj(lam: Partition) -> int:
    return stat_n(conjugate(lam))


def aut_count(items) -> int:
    """Product of factorials of multiplicities; works for partitions and types."""
    return prod(factorial(m) for m in Counter(items).values())


def z(lam: Partition) -> int:
    return aut_count(lam) * prod(lam)


def dominates(lam: Partition, mu: Partition) -> bool:
    """lam >= mu in dominance order (same size assumed)."""
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a < b:
            return False
    return True


def merge(a: Partition, b: Partition) -> Partition:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, reverse=True))


def scale(lam: Partition, k: int) -> Partition:
    return tuple(k * p for p in lam)


# types


def pair_key(pair):
    """Total order on (k, lam) pairs and (k, lam, mu) triples."""
    if len(pair) == 2:
        k, lam = pair
        return (k, sum(lam), lam)
    k, lam, mu = pair
    return (k, sum(lam) + sum(mu), sum(lam), lam, mu)


def make_type(pairs) -> Type:
    return tuple(sorted((tuple(p) for p in pairs), key=pair_key))


def type_degree(tau: Type) -> int:
    return sum(p[0] * (sum(p[1]) + (sum(p[2]) if len(p) == 3 else 0)) for p in tau)


def flatten(tau: Type) -> Partition:
    return tuple(sorted((k * x for k, lam in tau for x in lam), reverse=True))


def flatten1(tau: DoubleType) -> Partition:
    return tuple(sorted((k * x for k, lam, _ in tau for x in lam), reverse=True))


def flatten2(tau: DoubleType) -> Partition:
    return tuple(sorted((k * x for k, _, mu in tau for x in mu), reverse=True))


def _multisets(items: list, degree_of, n: int) -> list:
    """Multisets of ``items`` (sorted by key) with total degree n."""
    out = []
    m = len(items)

    def rec(start, rem, acc):
        if rem == 0:
            out.append(tuple(acc))
            return
        for i in range(start, m):
            d = degree_of(items[i])
            if d <= rem:
                acc.append(items[i])
                rec(i, rem - d, acc)
                acc.pop()

    rec(0, n, [])
    return out


@lru_cache(maxsize=None)
def types_of_degree(n: int) -> tuple:
    """All types of degree n, each sorted by :func:`pair_key`."""
    pairs = sorted(
        ((k, lam) for k in range(1, n + 1) for d in range(1, n // k + 1) for lam in partitions_of_size(d)),
        key=pair_key,
    )
    return tuple(_multisets(pairs, lambda p: p[0] * sum(p[1]), n))


@lru_cache(maxsize=None)
def double_types(n: int) -> tuple:
    """Double types with k(|lam| + |mu|) = n."""
    triples = sorted(
        (
            (k, lam, mu)
            for k in range(1, n + 1)
            for d in range(1, n // k + 1)
            for a in range(d + 1)
            for lam in partitions_of_size(a)
            for mu in partitions_of_size(d - a)
        ),
        key=pair_key,
    )
    return tuple(_multisets(triples, lambda p: p[0] * (sum(p[1]) + sum(p[2])), n))


def num_types(n: int) -> int:
    """Number of types of degree n from the product formula
    prod_m (1 - x^m)^(-c_m) with c_m = sum_{k | m} p(m/k)."""
    c = [0] * (n + 1)
    for m in range(1, n + 1):
        c[m] = sum(len(partitions_of_size(m // k)) for k in range(1, m + 1) if m % k == 0)
    series = [1] + [0] * n
    for m in range(1, n + 1):
        for _ in range(c[m]):
            for i in range(m, n + 1):
                series[i] += series[i - m]
    return series[n]


def type_to_json(tau: Type) -> list:
    return [[p[0]] + [list(x) for x in p[1:]] for p in tau]


def type_from_json(data) -> Type:
    return make_type(tuple([row[0]] + [tuple(x) for x in row[1:]]) for row in data)
