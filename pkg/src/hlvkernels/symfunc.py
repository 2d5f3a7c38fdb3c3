"""Truncated symmetric series in several alphabets.

A series is stored in the power-sum basis.  Each term is indexed by one
partition per alphabet followed by the exponents of the *graded* scalar
variables (for instance T or u), which are pulled out of the coefficients
so that degree bounds can see them.  Coefficients are rationals,
LaurentPoly or RationalFn values and never involve graded variables.

A bound is a weighted linear constraint ``sum w_x deg_x <= cap`` over
alphabet and graded-variable names.  Every product, substitution,
exponential and logarithm is exact below the bounds it carries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import LaurentPoly, RationalFn, scalar_adams
from .partitions import merge, partitions_of_size, scale, z


def mobius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


@dataclass(frozen=True)
class Bound:
    """``sum(w * deg(name)) <= cap``."""

    weights: tuple
    cap: int

    def names(self):
        return tuple(nm for nm, _ in self.weights)


def bound(cap: int, *names, **weights) -> Bound:
    """``bound(3, 'X')`` caps deg X at 3; ``bound(3, 'X', 'u')`` caps the sum."""
    w = {nm: 1 for nm in names}
    w.update(weights)
    return Bound(tuple(sorted(w.items())), cap)


def _merge_bounds(*groups) -> tuple:
    best = {}
    for group in groups:
        for b in group:
            if b.weights not in best or b.cap < best[b.weights]:
                best[b.weights] = b.cap
    return tuple(Bound(w, c) for w, c in sorted(best.items()))


def _scalar_zero(c) -> bool:
    return not c


class SymSeries:
    """An immutable truncated symmetric series (power-sum basis)."""

    __slots__ = ("alphabets", "graded", "bounds", "terms", "_checker")

    def __init__(self, alphabets=(), graded=(), bounds=(), terms=None):
        self.alphabets = tuple(alphabets)
        self.graded = tuple(graded)
        self.bounds = _merge_bounds(bounds)
        self._checker = None
        if len(set(self.alphabets + self.graded)) != len(self.alphabets) + len(self.graded):
            raise ValueError("repeated alphabet or graded variable name")
        self.terms = {}
        if terms:
            self.terms = self._settle(terms)

    @classmethod
    def _raw(cls, alphabets, graded, bounds, terms):
        obj = object.__new__(cls)
        obj.alphabets = alphabets
        obj.graded = graded
        obj.bounds = bounds
        obj.terms = terms
        obj._checker = None
        return obj

    # construction helpers

    @classmethod
    def scalar(cls, c, graded=(), bounds=()) -> "SymSeries":
        return cls((), graded, bounds, {(0,) * len(graded): c})

    @classmethod
    def power_sum(cls, lam, alphabet: str, coeff=1, bounds=(), graded=()) -> "SymSeries":
        lam = tuple(sorted(lam, reverse=True))
        return cls((alphabet,), graded, bounds, {(lam,) + (0,) * len(graded): coeff})

    @classmethod
    def alphabet(cls, name: str, bounds=()) -> "SymSeries":
        """p_1[name]."""
        return cls.power_sum((1,), name, bounds=bounds)

    @classmethod
    def graded_var(cls, name: str, bounds=()) -> "SymSeries":
        return cls((), (name,), bounds, {(1,): 1})

    def with_bounds(self, *bounds) -> "SymSeries":
        """Add constraints and drop terms that break them."""
        out = SymSeries._raw(self.alphabets, self.graded, _merge_bounds(self.bounds, bounds), {})
        ok = out.checker()
        out.terms = {k: c for k, c in self.terms.items() if ok(out.degrees(k))}
        return out

    def with_space(self, alphabets, graded) -> "SymSeries":
        """Re-index into a larger space."""
        alphabets = tuple(alphabets)
        graded = tuple(graded)
        if alphabets == self.alphabets and graded == self.graded:
            return self
        amap = [alphabets.index(a) for a in self.alphabets]
        gmap = [graded.index(g) for g in self.graded]
        na, ng = len(alphabets), len(graded)
        terms = {}
        for key, c in self.terms.items():
            k = [()] * na + [0] * ng
            for i, j in enumerate(amap):
                k[j] = key[i]
            for i, j in enumerate(gmap):
                k[na + j] = key[len(self.alphabets) + i]
            terms[tuple(k)] = c
        return SymSeries._raw(alphabets, graded, self.bounds, terms)

    # bookkeeping

    def degrees(self, key) -> tuple:
        na = len(self.alphabets)
        return tuple(sum(p) for p in key[:na]) + tuple(key[na:])

    def checker(self):
        """A predicate on degree vectors enforcing this series' bounds."""
        if self._checker is None:
            names = self.alphabets + self.graded
            pos = {nm: i for i, nm in enumerate(names)}
            rules = []
            for b in self.bounds:
                idx = [(pos[nm], w) for nm, w in b.weights if nm in pos]
                if idx:
                    rules.append((idx, b.cap))
            if not rules:
                self._checker = lambda d: True
            else:

                def ok(d, rules=rules):
                    for idx, cap in rules:
                        s = 0
                        for i, w in idx:
                            s += w * d[i]
                        if s > cap:
                            return False
                    return True

                self._checker = ok
        return self._checker

    def _settle(self, terms: dict) -> dict:
        """Lift graded variables out of coefficients, truncate, drop zeros."""
        out = {}
        na = len(self.alphabets)
        ng = len(self.graded)
        ok = self.checker()
        for key, c in terms.items():
            if len(key) != na + ng:
                raise ValueError(f"bad index {key}")
            if _scalar_zero(c):
                continue
            parts = [(key, c)]
            if ng and not isinstance(c, (int, Fraction)) and c.involves(self.graded):
                parts = []
                for e, cc in c.split(self.graded).items():
                    if any(x < 0 for x in e):
                        raise ValueError("negative power of a graded variable")
                    parts.append((key[:na] + tuple(a + b for a, b in zip(key[na:], e)), cc))
            for k, cc in parts:
                if not ok(self.degrees(k)):
                    continue
                if k in out:
                    s = out[k] + cc
                    if _scalar_zero(s):
                        del out[k]
                    else:
                        out[k] = s
                elif not _scalar_zero(cc):
                    out[k] = cc
        return out

    def _like(self, terms: dict, settle=False) -> "SymSeries":
        out = SymSeries._raw(self.alphabets, self.graded, self.bounds, {})
        out._checker = self._checker
        out.terms = out._settle(terms) if settle else {k: c for k, c in terms.items() if not _scalar_zero(c)}
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def constant_term(self):
        key = ((),) * len(self.alphabets) + (0,) * len(self.graded)
        return self.terms.get(key, 0)

    def coefficient(self, **index):
        """Coefficient at ``alphabet=partition`` / ``graded=exponent``."""
        key = tuple(tuple(index.get(a, ())) for a in self.alphabets) + tuple(index.get(g, 0) for g in self.graded)
        return self.terms.get(key, 0)

    # arithmetic

    @staticmethod
    def _unify(a: "SymSeries", b: "SymSeries"):
        if a.alphabets == b.alphabets and a.graded == b.graded:
            bounds = a.bounds if a.bounds == b.bounds else _merge_bounds(a.bounds, b.bounds)
            return a, b, bounds
        alph = a.alphabets + tuple(x for x in b.alphabets if x not in a.alphabets)
        grad = a.graded + tuple(x for x in b.graded if x not in a.graded)
        return a.with_space(alph, grad), b.with_space(alph, grad), _merge_bounds(a.bounds, b.bounds)

    @staticmethod
    def _coerce(x):
        if isinstance(x, SymSeries):
            return x
        if isinstance(x, (int, Fraction, LaurentPoly, RationalFn)):
            return SymSeries.scalar(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(other, (LaurentPoly, RationalFn)) and self.graded and other.involves(self.graded):
            o = SymSeries((), self.graded, (), {(0,) * len(self.graded): other})
        a, b, bounds = self._unify(self, o)
        out = SymSeries._raw(a.alphabets, a.graded, bounds, {})
        ok = out.checker()
        terms = dict(a.terms) if bounds == a.bounds else {k: c for k, c in a.terms.items() if ok(out.degrees(k))}
        for k, c in b.terms.items():
            if k in terms:
                s = terms[k] + c
                if _scalar_zero(s):
                    del terms[k]
                else:
                    terms[k] = s
            elif bounds == b.bounds or ok(out.degrees(k)):
                terms[k] = c
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "SymSeries":
        """Multiply every coefficient by a scalar."""
        if isinstance(c, (int, Fraction)):
            if c == 0:
                return self._like({})
            return self._like({k: v * c for k, v in self.terms.items()})
        if self.graded and c.involves(self.graded):
            return self * SymSeries((), self.graded, (), {(0,) * len(self.graded): c})
        return self._like({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly, RationalFn)):
            return self.scale(other)
        if not isinstance(other, SymSeries):
            return NotImplemented
        a, b, bounds = self._unify(self, other)
        out = SymSeries._raw(a.alphabets, a.graded, bounds, {})
        na = len(a.alphabets)
        ok = out.checker()
        A = [(k, c, a.degrees(k)) for k, c in a.terms.items()]
        B = [(k, c, b.degrees(k)) for k, c in b.terms.items()]
        acc = {}
        width = range(len(a.alphabets) + len(a.graded))
        for k1, c1, d1 in A:
            for k2, c2, d2 in B:
                d = tuple(d1[i] + d2[i] for i in width)
                if not ok(d):
                    continue
                key = tuple(merge(k1[i], k2[i]) for i in range(na)) + d[na:]
                c = c1 * c2
                if key in acc:
                    acc[key] = acc[key] + c
                else:
                    acc[key] = c
        out.terms = {k: c for k, c in acc.items() if not _scalar_zero(c)}
        return out

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly, RationalFn)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1, 1) / other)
        if isinstance(other, LaurentPoly):
            if other.is_monomial():
                return self.scale(other ** -1)
            return self.scale(RationalFn(1, other))
        if isinstance(other, RationalFn):
            return self.scale(other.inverse())
        return NotImplemented

    def __pow__(self, n: int):
        result = self.one_like()
        for _ in range(n):
            result = result * self
        return result

    def one_like(self) -> "SymSeries":
        key = ((),) * len(self.alphabets) + (0,) * len(self.graded)
        return SymSeries._raw(self.alphabets, self.graded, self.bounds, {key: 1})

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, _ = self._unify(self, o)
        if a.terms.keys() != b.terms.keys():
            return False
        return all(a.terms[k] == b.terms[k] for k in a.terms)

    def __hash__(self):
        return hash(frozenset(self.terms))

    def agrees_with(self, other: "SymSeries", *bounds) -> bool:
        """Equality after truncating both sides to the given bounds."""
        return self.with_bounds(*bounds) == other.with_bounds(*bounds)

    # lambda-ring operations

    def adams(self, n: int) -> "SymSeries":
        """p_n applied to the whole series (alphabets, graded variables and coefficients)."""
        if n == 1:
            return self
        na = len(self.alphabets)
        ok = self.checker()
        terms = {}
        for key, c in self.terms.items():
            k = tuple(scale(p, n) for p in key[:na]) + tuple(n * e for e in key[na:])
            if ok(self.degrees(k)):
                terms[k] = scalar_adams(c, n)
        return self._like(terms)

    def map_coefficients(self, f) -> "SymSeries":
        return self._like({k: f(c) for k, c in self.terms.items()}, settle=True)

    def subs_coefficients(self, mapping: dict) -> "SymSeries":
        """Substitute scalar variables inside coefficients (e.g. q -> 1/q)."""

        def f(c):
            if isinstance(c, (int, Fraction)):
                return c
            return c.subs(mapping)

        return self.map_coefficients(f)

    def set_graded(self, name: str, value) -> "SymSeries":
        """Substitute a scalar for a graded variable, removing it from the space."""
        i = self.graded.index(name)
        na = len(self.alphabets)
        graded = self.graded[:i] + self.graded[i + 1 :]
        bounds = tuple(b for b in self.bounds if name not in b.names())
        out = SymSeries._raw(self.alphabets, graded, bounds, {})
        terms = {}
        for key, c in self.terms.items():
            e = key[na + i]
            k = key[: na + i] + key[na + i + 1 :]
            terms[k] = terms.get(k, 0) + c * value ** e
        out.terms = out._settle(terms)
        return out

    def pick(self, pred) -> "SymSeries":
        """Keep the terms whose degree vector satisfies ``pred(dict)``."""
        names = self.alphabets + self.graded
        keep = {}
        for k, c in self.terms.items():
            if pred(dict(zip(names, self.degrees(k)))):
                keep[k] = c
        return self._like(keep)

    def rename(self, mapping: dict) -> "SymSeries":
        alph = tuple(mapping.get(a, a) for a in self.alphabets)
        grad = tuple(mapping.get(g, g) for g in self.graded)
        bounds = tuple(Bound(tuple(sorted((mapping.get(nm, nm), w) for nm, w in b.weights)), b.cap) for b in self.bounds)
        return SymSeries(alph, grad, bounds, self.terms)

    def drop_alphabet(self, name: str) -> "SymSeries":
        """Forget an alphabet on which the series is constant."""
        i = self.alphabets.index(name)
        terms = {}
        for k, c in self.terms.items():
            if k[i]:
                raise ValueError(f"series depends on {name}")
            terms[k[:i] + k[i + 1 :]] = c
        bounds = tuple(b for b in self.bounds if name not in b.names())
        return SymSeries._raw(self.alphabets[:i] + self.alphabets[i + 1 :], self.graded, bounds, terms)

    def slot_split(self, name: str) -> dict:
        """``{partition: series without that alphabet}`` for alphabet ``name``."""
        i = self.alphabets.index(name)
        alph = self.alphabets[:i] + self.alphabets[i + 1 :]
        bounds = tuple(b for b in self.bounds if name not in b.names())
        groups: dict = {}
        for k, c in self.terms.items():
            groups.setdefault(k[i], {})[k[:i] + k[i + 1 :]] = c
        return {lam: SymSeries._raw(alph, self.graded, bounds, t) for lam, t in groups.items()}

    def substitute(self, name: str, E: "SymSeries", bounds=None) -> "SymSeries":
        """Plethystic substitution p_n[name] -> p_n[E].

        The result carries the bounds of ``E``, the bounds of ``self`` not
        mentioning ``name`` (or all of them if ``E`` still uses ``name``),
        and any extra ``bounds``.
        """
        if name not in self.alphabets:
            return self
        keep = tuple(b for b in self.bounds if name not in b.names() or name in E.alphabets)
        result_bounds = _merge_bounds(keep, E.bounds, bounds or ())
        groups = self.slot_split(name)
        rest_alph = self.alphabets[:]
        rest_alph = tuple(a for a in rest_alph if a != name)
        rest_alph = rest_alph + tuple(a for a in E.alphabets if a not in rest_alph)
        rest_grad = self.graded + tuple(g for g in E.graded if g not in self.graded)
        E = SymSeries._raw(E.alphabets, E.graded, result_bounds, E.terms)
        powers: dict = {(): E.one_like()}
        adams: dict = {}

        def power(lam):
            if lam not in powers:
                n = lam[-1]
                if n not in adams:
                    adams[n] = E.adams(n)
                powers[lam] = power(lam[:-1]) * adams[n]
            return powers[lam]

        total = SymSeries._raw(rest_alph, rest_grad, result_bounds, {})
        for lam in sorted(groups, key=lambda p: (sum(p), p)):
            part = SymSeries._raw(groups[lam].alphabets, groups[lam].graded, result_bounds, groups[lam].terms)
            total = total + part * power(lam)
        return total.with_space(rest_alph, rest_grad) if total.alphabets != rest_alph else total

    def _check_truncatable(self):
        names = self.alphabets + self.graded
        pos = {nm: i for i, nm in enumerate(names)}
        rules = [[(pos[nm], w) for nm, w in b.weights if nm in pos] for b in self.bounds]
        for key in self.terms:
            d = self.degrees(key)
            if not any(sum(w * d[i] for i, w in r) > 0 for r in rules):
                raise ValueError(f"term {key} has no degree under any bound, cannot exponentiate")

    def pexp(self) -> "SymSeries":
        """exp(sum_n p_n[F] / n), truncated."""
        self._check_truncatable()
        P = self._like({})
        n = 1
        while True:
            An = self.adams(n)
            if not An:
                break
            P = P + An.scale(Fraction(1, n))
            n += 1
        return P._exp()

    def _exp(self) -> "SymSeries":
        result = self.one_like()
        term = self.one_like()
        k = 1
        while True:
            term = (term * self).scale(Fraction(1, k))
            if not term:
                break
            result = result + term
            k += 1
        return result

    def plog(self) -> "SymSeries":
        """Inverse of :meth:`pexp`; the constant term must be 1."""
        c0 = self.constant_term()
        if c0 != 1:
            raise ValueError("plog needs constant term 1")
        key0 = ((),) * len(self.alphabets) + (0,) * len(self.graded)
        H = self._like({k: c for k, c in self.terms.items() if k != key0})
        H._check_truncatable()
        log = self._like({})
        power = self.one_like()
        k = 1
        while True:
            power = power * H
            if not power:
                break
            log = log + power.scale(Fraction((-1) ** (k + 1), k))
            k += 1
        out = self._like({})
        n = 1
        while True:
            An = log.adams(n)
            if not An:
                break
            mu = mobius(n)
            if mu:
                out = out + An.scale(Fraction(mu, n))
            n += 1
        return out

    # pairings

    def pair(self, other: "SymSeries", name: str, S=None) -> "SymSeries":
        """Hall pairing in alphabet ``name``; with ``S`` the modified pairing
        (F, G)^S = (F[SX], G[X])."""
        if name not in self.alphabets or name not in other.alphabets:
            raise ValueError(f"alphabet {name} missing from a pairing argument")
        F = self.slot_split(name)
        G = other.slot_split(name)
        total = None
        for lam in sorted(F, key=lambda p: (sum(p), p)):
            if lam not in G:
                continue
            w = z(lam) * p_of(S, lam) if S is not None else z(lam)
            part = F[lam] * G[lam]
            part = part.scale(w)
            total = part if total is None else total + part
        if total is None:
            a, b, bounds = self._unify(self, other)
            alph = tuple(x for x in a.alphabets if x != name)
            return SymSeries._raw(alph, a.graded, tuple(bd for bd in bounds if name not in bd.names()), {})
        return total

    def trace(self, a: str, b: str, S=None) -> "SymSeries":
        """Contract alphabets ``a`` and ``b`` against each other:
        p_lam[a] p_mu[b] -> delta * z_lam p_lam[S]."""
        i, j = self.alphabets.index(a), self.alphabets.index(b)
        keep = [x for x in range(len(self.alphabets)) if x not in (i, j)]
        alph = tuple(self.alphabets[x] for x in keep)
        bounds = tuple(bd for bd in self.bounds if a not in bd.names() and b not in bd.names())
        na = len(self.alphabets)
        terms = {}
        for k, c in self.terms.items():
            if k[i] != k[j]:
                continue
            lam = k[i]
            w = z(lam) * p_of(S, lam) if S is not None else z(lam)
            nk = tuple(k[x] for x in keep) + k[na:]
            terms[nk] = terms[nk] + c * w if nk in terms else c * w
        out = SymSeries._raw(alph, self.graded, bounds, {})
        out.terms = {k: c for k, c in terms.items() if not _scalar_zero(c)}
        return out

    # output

    def to_json(self) -> dict:
        rows = []
        na = len(self.alphabets)
        for key in sorted(self.terms, key=lambda k: (self.degrees(k), k)):
            c = self.terms[key]
            rows.append({"index": [list(p) for p in key[:na]] + list(key[na:]), "coeff": coeff_json(c)})
        return {
            "alphabets": list(self.alphabets),
            "graded": list(self.graded),
            "bounds": [{"weights": dict(b.weights), "cap": b.cap} for b in self.bounds],
            "terms": rows,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SymSeries":
        na = len(data["alphabets"])
        bounds = tuple(Bound(tuple(sorted(b["weights"].items())), b["cap"]) for b in data["bounds"])
        terms = {}
        for row in data["terms"]:
            idx = row["index"]
            key = tuple(tuple(p) for p in idx[:na]) + tuple(idx[na:])
            terms[key] = coeff_from_json(row["coeff"])
        return cls(data["alphabets"], data["graded"], bounds, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        na = len(self.alphabets)
        parts = []
        for key in sorted(self.terms, key=lambda k: (self.degrees(k), k)):
            mono = []
            for a, lam in zip(self.alphabets, key[:na]):
                if lam:
                    mono.append(f"p{list(lam)}[{a}]")
            for g, e in zip(self.graded, key[na:]):
                if e:
                    mono.append(g if e == 1 else f"{g}^{e}")
            parts.append(f"({self.terms[key]})" + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"SymSeries({self})"


def coeff_json(c) -> dict:
    if isinstance(c, RationalFn):
        return c.to_json()
    if isinstance(c, LaurentPoly):
        return {"num": c.to_json(), "den": LaurentPoly(1).to_json()}
    return {"num": LaurentPoly(c).to_json(), "den": LaurentPoly(1).to_json()}


def coeff_from_json(data):
    r = RationalFn.from_json(data)
    return r.num if r.den.is_one() else r


_P_CACHE: dict = {}


def p_of(S, lam) -> object:
    """p_lam[S] for a scalar S."""
    if isinstance(S, (int, Fraction)):
        return S ** len(lam)
    key = (S, lam)
    hit = _P_CACHE.get(key)
    if hit is None:
        hit = 1
        for n in lam:
            hit = hit * scalar_adams(S, n)
        if len(_P_CACHE) > 20000:
            _P_CACHE.clear()
        _P_CACHE[key] = hit
    return hit


# bases


@lru_cache(maxsize=None)
def p_to_m(n: int) -> dict:
    """p_rho = sum_mu P[rho][mu] m_mu."""
    parts = partitions_of_size(n)
    table = {}
    for rho in parts:
        row = {}
        for mu in parts:
            c = _count_fillings(rho, mu)
            if c:
                row[mu] = c
        table[rho] = row
    return table


def _count_fillings(rho, mu) -> int:
    @lru_cache(maxsize=None)
    def rec(i, caps):
        if i == len(rho):
            return 1 if not any(caps) else 0
        total = 0
        for j, c in enumerate(caps):
            if c >= rho[i]:
                total += rec(i + 1, caps[:j] + (c - rho[i],) + caps[j + 1 :])
        return total

    return rec(0, tuple(mu))


def _invert(matrix: dict, keys) -> dict:
    """Inverse of a square rational matrix given as nested dicts."""
    keys = list(keys)
    n = len(keys)
    idx = {k: i for i, k in enumerate(keys)}
    a = [[Fraction(0)] * (2 * n) for _ in range(n)]
    for r, row in matrix.items():
        for c, v in row.items():
            a[idx[r]][idx[c]] = Fraction(v)
    for i in range(n):
        a[i][n + i] = Fraction(1)
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return {keys[i]: {keys[j]: a[i][n + j] for j in range(n) if a[i][n + j] != 0} for i in range(n)}


@lru_cache(maxsize=None)
def m_to_p(n: int) -> dict:
    """m_mu = sum_rho M[mu][rho] p_rho."""
    parts = partitions_of_size(n)
    inv = _invert(p_to_m(n), parts)
    # inv[mu][rho]: coefficient of p_rho in m_mu
    return inv


@lru_cache(maxsize=None)
def character(lam, rho) -> int:
    """chi^lam(rho) by the Murnaghan-Nakayama rule on beta-sets."""
    if not rho:
        return 1 if not lam else 0
    k = rho[0]
    rest = rho[1:]
    ell = len(lam)
    beta = [lam[i] + ell - 1 - i for i in range(ell)]
    bset = set(beta)
    total = 0
    for b in beta:
        nb = b - k
        if nb < 0 or nb in bset:
            continue
        sign = (-1) ** sum(1 for x in beta if nb < x < b)
        newbeta = sorted((bset - {b}) | {nb}, reverse=True)
        new = tuple(x - (ell - 1 - i) for i, x in enumerate(newbeta))
        new = tuple(p for p in new if p > 0)
        total += sign * character(new, rest)
    return total


@lru_cache(maxsize=None)
def basis_in_p(basis: str, lam) -> dict:
    """Expansion of b_lam (b in p, m, e, h, s) in the power-sum basis."""
    lam = tuple(lam)
    n = sum(lam)
    if basis == "p":
        return {lam: Fraction(1)}
    if basis == "m":
        return dict(m_to_p(n)[lam])
    if basis == "s":
        return {rho: Fraction(character(lam, rho), z(rho)) for rho in partitions_of_size(n) if character(lam, rho)}
    if basis in ("e", "h"):
        out = {(): Fraction(1)}
        for part in lam:
            single = {}
            for rho in partitions_of_size(part):
                sign = (-1) ** (part - len(rho)) if basis == "e" else 1
                single[rho] = Fraction(sign, z(rho))
            new = {}
            for r1, c1 in out.items():
                for r2, c2 in single.items():
                    k = merge(r1, r2)
                    new[k] = new.get(k, 0) + c1 * c2
            out = {k: v for k, v in new.items() if v}
        return out
    raise ValueError(f"unknown basis {basis!r}")


@lru_cache(maxsize=None)
def p_in_basis(basis: str, n: int) -> dict:
    """P[rho][lam]: p_rho = sum_lam P[rho][lam] b_lam."""
    parts = partitions_of_size(n)
    if basis == "p":
        return {rho: {rho: Fraction(1)} for rho in parts}
    if basis == "m":
        return {rho: {mu: Fraction(c) for mu, c in row.items()} for rho, row in p_to_m(n).items()}
    if basis == "s":
        return {rho: {lam: Fraction(character(lam, rho)) for lam in parts if character(lam, rho)} for rho in parts}
    forward = {lam: basis_in_p(basis, lam) for lam in parts}
    return _invert_transpose(forward, parts)


def _invert_transpose(forward: dict, parts) -> dict:
    inv = _invert(forward, parts)
    # forward[lam][rho]: b_lam in p; inv[rho][lam] gives p_rho in b
    return inv


def sym(basis: str, lam, alphabet: str = "X", coeff=1, bounds=()) -> SymSeries:
    """The basis element b_lam[alphabet] as a series."""
    return SymSeries((alphabet,), (), bounds, {(rho,): coeff * c for rho, c in basis_in_p(basis, tuple(lam)).items()})


def to_basis(F: SymSeries, alphabet: str, basis: str) -> dict:
    """Coefficient table of F with the ``alphabet`` slot re-expressed in ``basis``."""
    i = F.alphabets.index(alphabet)
    out: dict = {}
    for key, c in F.terms.items():
        rho = key[i]
        for lam, w in p_in_basis(basis, sum(rho))[rho].items():
            k = key[:i] + (lam,) + key[i + 1 :]
            out[k] = out[k] + c * w if k in out else c * w
    return {k: v for k, v in out.items() if not _scalar_zero(v)}


def from_basis(table: dict, like: SymSeries, alphabet: str, basis: str) -> SymSeries:
    """Inverse of :func:`to_basis`; ``like`` supplies the space and bounds."""
    i = like.alphabets.index(alphabet)
    terms: dict = {}
    for key, c in table.items():
        for rho, w in basis_in_p(basis, key[i]).items():
            k = key[:i] + (rho,) + key[i + 1 :]
            terms[k] = terms[k] + c * w if k in terms else c * w
    return SymSeries(like.alphabets, like.graded, like.bounds, terms)


def monomial_table(F: SymSeries, basis: str = "m") -> dict:
    """Coefficients of F with every alphabet expressed in ``basis``."""
    table = dict(F.terms)
    for a in F.alphabets:
        tmp = SymSeries._raw(F.alphabets, F.graded, (), table)
        table = to_basis(tmp, a, basis)
    return table


def kernel_xy(S, bounds, x: str = "X", y: str = "Y") -> SymSeries:
    """pExp[XY/S] = sum_lam p_lam[X] p_lam[Y] / (z_lam p_lam[S])."""
    terms = {}
    top = max(b.cap for b in bounds)
    for n in range(top + 1):
        for lam in partitions_of_size(n):
            w = z(lam) * p_of(S, lam) if S is not None else z(lam)
            terms[(lam, lam)] = RationalFn(1, w) if not isinstance(w, (int, Fraction)) else Fraction(1) / w
    return SymSeries((x, y), (), bounds, terms)
