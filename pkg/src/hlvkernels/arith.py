"""Exact Laurent polynomials and rational functions over Q.

Polynomials live in a single growing flint context.  The standard
variables come first, in the canonical order q < t < u < u1 < ... < u9 <
T < v; any other symbol (free generators such as ``A_(2,1)`` or
``p2[B_(1)]``) is appended the first time it is used.  Negative exponents
are only allowed for q, t and the u variables and are carried as a
monomial shift next to a genuine polynomial.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction
from numbers import Rational

import flint

BASE_NAMES = ("q", "t", "u") + tuple(f"u{i}" for i in range(1, 10)) + ("T", "v")
_BASE_RANK = {n: i for i, n in enumerate(BASE_NAMES)}
_LAURENT_RE = re.compile(r"(q|t|u\d*)\Z")
_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_(),\[\]]*\Z")


def is_generator_name(name: str) -> bool:
    """Free generators are opaque: p_n acts on them by renaming."""
    return "_(" in name


def generator_pn(name: str, n: int) -> str:
    """Name of p_n applied to the generator called ``name``."""
    m = re.match(r"p(\d+)\[(.*)\]\Z", name)
    if m:
        return f"p{int(m.group(1)) * n}[{m.group(2)}]"
    return name if n == 1 else f"p{n}[{name}]"


def name_key(name: str):
    """Sort key giving the canonical variable order."""
    if name in _BASE_RANK:
        return (0, _BASE_RANK[name], "")
    return (1, 0, name)


class _Registry:
    def __init__(self, names):
        self.names = tuple(names)
        self.n = len(self.names)
        self.ctx = flint.fmpq_mpoly_ctx.get(self.names, "lex")
        self.index = {nm: i for i, nm in enumerate(self.names)}
        self.laurent = tuple(bool(_LAURENT_RE.match(nm)) for nm in self.names)
        self.generators = tuple(i for i, nm in enumerate(self.names) if is_generator_name(nm))
        self.zero_exp = (0,) * self.n


_R = _Registry(BASE_NAMES)
_LOCK = threading.Lock()


def _register(names) -> _Registry:
    global _R
    missing = [nm for nm in names if nm not in _R.index]
    if not missing:
        return _R
    with _LOCK:
        missing = [nm for nm in dict.fromkeys(names) if nm not in _R.index]
        for nm in missing:
            if not _NAME_RE.match(nm):
                raise ValueError(f"bad variable name {nm!r}")
        if missing:
            _R = _Registry(_R.names + tuple(missing))
    return _R


def _fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, int):
        return flint.fmpq(c)
    if isinstance(c, Rational):
        return flint.fmpq(c.numerator, c.denominator)
    if isinstance(c, str):
        f = Fraction(c)
        return flint.fmpq(f.numerator, f.denominator)
    raise TypeError(f"not a rational number: {c!r}")


def _frac(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _is_number(x) -> bool:
    return isinstance(x, (int, Rational, flint.fmpq)) and not isinstance(x, bool)


class LaurentPoly:
    """An immutable Laurent polynomial with rational coefficients.

    The value is ``_p * x^_s`` where ``_p`` is a flint polynomial and ``_s``
    is either None or an exponent shift, nonzero only on Laurent variables.
    """

    __slots__ = ("_p", "_s")

    def __init__(self, value=0):
        if isinstance(value, LaurentPoly):
            self._p, self._s = value._p, value._s
        else:
            self._p = _R.ctx.constant(_fmpq(value))
            self._s = None

    @classmethod
    def _new(cls, p, s):
        obj = object.__new__(cls)
        obj._p = p
        obj._s = s
        return obj

    # construction

    @classmethod
    def var(cls, name: str, power: int = 1) -> "LaurentPoly":
        return cls.monomial(1, {name: power})

    @classmethod
    def monomial(cls, coeff, exps: dict) -> "LaurentPoly":
        return cls.from_terms({tuple(exps.items()): coeff})

    @classmethod
    def from_terms(cls, terms: dict) -> "LaurentPoly":
        """Build from ``{((name, exp), ...): coeff}``."""
        names = {nm for key in terms for nm, _ in key}
        R = _register(sorted(names, key=name_key))
        shift = [0] * R.n
        rows = []
        for key, c in terms.items():
            e = [0] * R.n
            for nm, k in key:
                e[R.index[nm]] += k
            rows.append((e, _fmpq(c)))
        for e, _ in rows:
            for i, k in enumerate(e):
                if k < shift[i]:
                    if not R.laurent[i]:
                        raise ValueError(f"negative power of {R.names[i]} is not allowed")
                    shift[i] = k
        d = {}
        for e, c in rows:
            ee = tuple(k - s for k, s in zip(e, shift))
            d[ee] = d.get(ee, 0) + c
        p = R.ctx.from_dict({k: c for k, c in d.items() if c != 0})
        return cls._norm(p, tuple(shift))

    @classmethod
    def _norm(cls, p, s):
        if s is None:
            return cls._new(p, None)
        if p.is_zero():
            return cls._new(p, None)
        R = _R
        if len(s) < R.n:
            s = s + (0,) * (R.n - len(s))
        if any(s):
            tc = p.term_content()
            e = tuple(map(int, tc.monoms()[0])) if not tc.is_zero() else R.zero_exp
            if any(e[i] and R.laurent[i] for i in range(R.n)):
                e = tuple(k if R.laurent[i] else 0 for i, k in enumerate(e))
                p = p / R.ctx.term(exp_vec=e)
                s = tuple(a + b for a, b in zip(s, e))
        if not any(s):
            s = None
        return cls._new(p, s)

    def _cur(self):
        R = _R
        p = self._p
        if p.context() is R.ctx:
            return p, self._s
        p = p.project_to_context(R.ctx)
        s = self._s
        if s is not None:
            s = s + (0,) * (R.n - len(s))
        self._p, self._s = p, s
        return p, s

    @staticmethod
    def _coerce(x):
        if isinstance(x, LaurentPoly):
            return x
        if _is_number(x):
            return LaurentPoly(x)
        return None

    # arithmetic

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p1, s1 = self._cur()
        p2, s2 = o._cur()
        if s1 is None and s2 is None:
            return LaurentPoly._new(p1 + p2, None)
        ctx = _R.ctx
        z = _R.zero_exp
        s1 = s1 or z
        s2 = s2 or z
        s = tuple(min(a, b) for a, b in zip(s1, s2))
        if s1 != s:
            p1 = p1 * ctx.term(exp_vec=tuple(a - b for a, b in zip(s1, s)))
        if s2 != s:
            p2 = p2 * ctx.term(exp_vec=tuple(a - b for a, b in zip(s2, s)))
        return LaurentPoly._norm(p1 + p2, s)

    __radd__ = __add__

    def __neg__(self):
        p, s = self._cur()
        return LaurentPoly._new(-p, s)

    def __pos__(self):
        return self

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

    def __mul__(self, other):
        if _is_number(other):
            if other == 0:
                return LaurentPoly(0)
            p, s = self._cur()
            return LaurentPoly._new(p * _fmpq(other), s)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        p1, s1 = self._cur()
        p2, s2 = other._cur()
        p = p1 * p2
        if s1 is None and s2 is None:
            return LaurentPoly._new(p, None)
        if s1 is None:
            return LaurentPoly._norm(p, s2)
        if s2 is None:
            return LaurentPoly._norm(p, s1)
        return LaurentPoly._norm(p, tuple(a + b for a, b in zip(s1, s2)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if self.is_monomial():
                (key, c), = self.terms().items()
                if all(_LAURENT_RE.match(nm) for nm, _ in key):
                    return LaurentPoly.monomial(c ** n, {nm: k * n for nm, k in key})
            return RationalFn(1, self ** (-n))
        p, s = self._cur()
        return LaurentPoly._norm(p ** n, s and tuple(n * a for a in s))

    def __truediv__(self, other):
        if _is_number(other):
            return self * (1 / Fraction(_frac(_fmpq(other))))
        if isinstance(other, LaurentPoly):
            inv = other ** -1
            if isinstance(inv, LaurentPoly):
                return self * inv
            return RationalFn(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_number(other):
            return RationalFn(other, self)
        return NotImplemented

    def exact_div(self, other) -> "LaurentPoly":
        """Exact quotient, raising ArithmeticError if ``other`` does not divide."""
        o = self._coerce(other)
        if o is None:
            raise TypeError(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        p1, s1 = self._cur()
        p2, s2 = o._cur()
        try:
            p = p1 / p2
        except Exception as exc:
            raise ArithmeticError("inexact division") from exc
        z = _R.zero_exp
        s = tuple(a - b for a, b in zip(s1 or z, s2 or z))
        if any(k < 0 and not _R.laurent[i] for i, k in enumerate(s)):
            raise ArithmeticError("inexact division")
        return LaurentPoly._norm(p, s)

    # comparison

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, RationalFn):
                return other == self
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash(tuple(sorted(self.terms().items())))

    def __bool__(self):
        return not self._p.is_zero()

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_one(self) -> bool:
        return self._s is None and self._p.is_one()

    def is_constant(self) -> bool:
        return self._s is None and self._p.is_constant()

    def is_monomial(self) -> bool:
        return len(self._p) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return _frac(self._p.leading_coefficient()) if not self._p.is_zero() else Fraction(0)

    # structure

    def terms(self) -> dict:
        """``{((name, exp), ...): Fraction}`` with names in canonical order."""
        p, s = self._cur()
        names = _R.names
        out = {}
        for e, c in p.to_dict().items():
            e = tuple(map(int, e))
            if s is not None:
                e = tuple(a + b for a, b in zip(e, s))
            key = tuple(sorted(((names[i], k) for i, k in enumerate(e) if k), key=lambda x: name_key(x[0])))
            out[key] = _frac(c)
        return out

    @property
    def variables(self) -> tuple:
        """Names of the variables that actually occur, in canonical order."""
        found = set()
        for key in self.terms():
            found.update(nm for nm, _ in key)
        return tuple(sorted(found, key=name_key))

    def degree(self, name: str) -> int:
        return max((dict(k).get(name, 0) for k in self.terms()), default=0)

    def min_degree(self, name: str) -> int:
        return min((dict(k).get(name, 0) for k in self.terms()), default=0)

    def degrees(self) -> dict:
        """Maximum exponent of each variable present."""
        p, s = self._cur()
        d = p.degrees()
        out = {}
        for i, nm in enumerate(_R.names):
            k = int(d[i]) + (s[i] if s else 0)
            if d[i] > 0 or (s and s[i]):
                out[nm] = k
        return out

    def involves(self, names) -> bool:
        p, s = self._cur()
        d = p.degrees()
        idx = _R.index
        for nm in names:
            i = idx.get(nm)
            if i is not None and (d[i] > 0 or (s and s[i])):
                return True
        return False

    def is_integral(self) -> bool:
        return all(c.q == 1 for c in self._p.coeffs())

    def adams(self, n: int) -> "LaurentPoly":
        """p_n applied to the polynomial: monomial variables are raised to
        the n-th power and free generators are renamed."""
        if n == 1:
            return self
        p, s = self._cur()
        R = _R
        if R.generators:
            d = p.degrees()
            if any(d[i] for i in R.generators):
                terms = {}
                for key, c in self.terms().items():
                    nk = tuple((generator_pn(nm, n), k) if is_generator_name(nm) else (nm, n * k) for nm, k in key)
                    terms[nk] = terms.get(nk, 0) + c
                return LaurentPoly.from_terms(terms)
        p = p.inflate([n] * R.n) if not p.is_constant() else p
        return LaurentPoly._new(p, s and tuple(n * a for a in s))

    pn_substitute = adams

    def subs(self, mapping: dict) -> "LaurentPoly":
        """Substitute variables by Laurent polynomials (monomials stay fast)."""
        if not self.involves(mapping):
            return self
        mono = {}
        general = {}
        for nm, val in mapping.items():
            val = LaurentPoly._coerce(val)
            if val is None:
                raise TypeError("substitution values must be Laurent polynomials")
            if val.is_monomial():
                ((key, c),) = val.terms().items()
                mono[nm] = (c, key)
            else:
                general[nm] = val
        terms = {}
        rest = LaurentPoly(0)
        for key, c in self.terms().items():
            e = {}
            coeff = c
            gen = []
            for nm, k in key:
                if nm in mono:
                    mc, mkey = mono[nm]
                    coeff *= mc ** k
                    for nm2, k2 in mkey:
                        e[nm2] = e.get(nm2, 0) + k2 * k
                elif nm in general:
                    gen.append((nm, k))
                else:
                    e[nm] = e.get(nm, 0) + k
            nk = tuple((nm, k) for nm, k in e.items() if k)
            if gen:
                part = LaurentPoly.monomial(coeff, dict(nk))
                for nm, k in gen:
                    part = part * general[nm] ** k
                rest = rest + part
            else:
                nk = tuple(sorted(nk, key=lambda x: name_key(x[0])))
                terms[nk] = terms.get(nk, 0) + coeff
        return LaurentPoly.from_terms(terms) + rest

    def split(self, names) -> dict:
        """Split by the exponents of ``names``: ``{exps: coefficient}``."""
        names = tuple(names)
        if not self.involves(names):
            return {(0,) * len(names): self}
        groups: dict = {}
        for key, c in self.terms().items():
            d = dict(key)
            e = tuple(d.pop(nm, 0) for nm in names)
            groups.setdefault(e, {})[tuple(d.items())] = c
        return {e: LaurentPoly.from_terms(t) for e, t in groups.items()}

    def evaluate(self, values: dict) -> Fraction:
        """Evaluate at rational values for every variable present."""
        total = Fraction(0)
        for key, c in self.terms().items():
            term = c
            for nm, k in key:
                term *= Fraction(values[nm]) ** k
            total += term
        return total

    # serialization

    def to_json(self) -> dict:
        vs = self.variables
        pos = {nm: i for i, nm in enumerate(vs)}
        rows = []
        for key, c in self.terms().items():
            e = [0] * len(vs)
            for nm, k in key:
                e[pos[nm]] = k
            rows.append((e, c))
        rows.sort(key=lambda r: r[0])
        return {"vars": list(vs), "terms": [{"exp": e, "coeff": str(c)} for e, c in rows]}

    @classmethod
    def from_json(cls, data: dict) -> "LaurentPoly":
        vs = data["vars"]
        terms = {}
        for row in data["terms"]:
            key = tuple((nm, k) for nm, k in zip(vs, row["exp"]) if k)
            terms[key] = terms.get(key, 0) + Fraction(row["coeff"])
        return cls.from_terms(terms)

    def __str__(self):
        vs = self.variables
        items = sorted(self.terms().items(), key=lambda kv: [-dict(kv[0]).get(nm, 0) for nm in vs])
        if not items:
            return "0"
        parts = []
        for key, c in items:
            mono = "*".join(nm if k == 1 else f"{nm}^{k}" for nm, k in key)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                cs = f"({c})" if c.denominator != 1 else str(c)
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for part in parts[1:]:
            out += " - " + part[1:] if part.startswith("-") else " + " + part
        return out

    def __repr__(self):
        return f"LaurentPoly({self})"


def var(name: str) -> LaurentPoly:
    return LaurentPoly.var(name)


class NotPolynomial(ArithmeticError):
    """Raised when a rational function is not a Laurent polynomial.

    ``witness`` is the reduced fraction and ``remainder`` the remainder of
    dividing its numerator by its denominator.
    """

    def __init__(self, witness: "RationalFn", remainder: LaurentPoly):
        super().__init__(f"not a Laurent polynomial: {witness} (remainder {remainder})")
        self.witness = witness
        self.remainder = remainder


class RationalFn:
    """A reduced quotient of Laurent polynomials.

    The denominator is a genuine polynomial, coprime to the numerator,
    not divisible by any Laurent variable, and monic for the flint lex
    order.  These rules make the representation canonical.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        num = LaurentPoly._coerce(num) if not isinstance(num, RationalFn) else num
        den = LaurentPoly._coerce(den) if not isinstance(den, RationalFn) else den
        if num is None or den is None:
            raise TypeError("RationalFn needs polynomial arguments")
        if isinstance(num, RationalFn) or isinstance(den, RationalFn):
            r = RationalFn._wrap(num) / RationalFn._wrap(den)
            self.num, self.den = r.num, r.den
            return
        self.num, self.den = _reduce(num, den)

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @staticmethod
    def _wrap(x):
        if isinstance(x, RationalFn):
            return x
        if isinstance(x, LaurentPoly):
            return RationalFn._raw(x, _ONE)
        if _is_number(x):
            return RationalFn._raw(LaurentPoly(x), _ONE)
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return RationalFn._raw(self.num + o.num, _ONE)
        if o.den.is_one():
            return RationalFn._raw(self.num + o.num * self.den, self.den)
        if self.den.is_one():
            return RationalFn._raw(o.num + self.num * o.den, o.den)
        if self.den == o.den:
            return RationalFn(self.num + o.num, self.den)
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn._raw(-self.num, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if _is_number(other):
            if other == 0:
                return RationalFn._raw(LaurentPoly(0), _ONE)
            return RationalFn._raw(self.num * other, self.den)
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return RationalFn._raw(self.num * o.num, _ONE)
        a, b = _reduce(self.num, o.den)
        c, d = _reduce(o.num, self.den)
        return RationalFn._raw(a * c, _monic(b * d))

    __rmul__ = __mul__

    def inverse(self) -> "RationalFn":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFn(self.den, self.num)

    def __truediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFn._raw(self.num ** n, self.den ** n)

    def __eq__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):
        if self.den.is_one():
            return hash(self.num)
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def adams(self, n: int) -> "RationalFn":
        if n == 1:
            return self
        if self.den.is_one():
            return RationalFn._raw(self.num.adams(n), _ONE)
        return RationalFn(self.num.adams(n), self.den.adams(n))

    pn_substitute = adams

    def subs(self, mapping: dict) -> "RationalFn":
        return RationalFn(self.num.subs(mapping), self.den.subs(mapping))

    def involves(self, names) -> bool:
        return self.num.involves(names) or self.den.involves(names)

    def split(self, names) -> dict:
        if self.den.involves(names):
            raise ValueError(f"denominator depends on {names}")
        if self.den.is_one():
            return {e: RationalFn._raw(p, _ONE) for e, p in self.num.split(names).items()}
        return {e: RationalFn(p, self.den) for e, p in self.num.split(names).items()}

    def evaluate(self, values: dict) -> Fraction:
        return self.num.evaluate(values) / self.den.evaluate(values)

    def to_laurent(self) -> LaurentPoly:
        return to_laurent(self)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RationalFn":
        return cls(LaurentPoly.from_json(data["num"]), LaurentPoly.from_json(data["den"]))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFn({self})"


_ONE = LaurentPoly(1)


def _monic(den: LaurentPoly) -> LaurentPoly:
    lc = den._p.leading_coefficient()
    if lc == 1:
        return den
    return LaurentPoly._new(den._p / lc, den._s)


def _reduce(num: LaurentPoly, den: LaurentPoly):
    """Cancel common factors; return (num, den) in canonical form."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return LaurentPoly(0), _ONE
    if den.is_constant():
        return num * (1 / den.constant_value()), _ONE
    pn, sn = num._cur()
    pd, sd = den._cur()
    R = _R
    if sd is not None:
        sn = tuple(a - b for a, b in zip(sn or R.zero_exp, sd))
        sd = None
    tc = pd.term_content()
    e = tuple(map(int, tc.monoms()[0]))
    if any(e):
        lau = tuple(k if R.laurent[i] else 0 for i, k in enumerate(e))
        if any(lau):
            pd = pd / R.ctx.term(exp_vec=lau)
            sn = tuple(a - b for a, b in zip(sn or R.zero_exp, lau))
    g = pn.gcd(pd)
    if not g.is_one():
        pn = pn / g
        pd = pd / g
    lc = pd.leading_coefficient()
    if lc != 1:
        pn = pn / lc
        pd = pd / lc
    if pd.is_one():
        return LaurentPoly._norm(pn, sn), _ONE
    return LaurentPoly._norm(pn, sn), LaurentPoly._new(pd, None)


def to_laurent(x) -> LaurentPoly:
    """Return ``x`` as a Laurent polynomial or raise NotPolynomial."""
    if isinstance(x, LaurentPoly):
        return x
    if _is_number(x):
        return LaurentPoly(x)
    if x.den.is_one():
        return x.num
    pn, sn = x.num._cur()
    pd, _ = x.den._cur()
    quo, rem = divmod(pn, pd)
    raise NotPolynomial(x, LaurentPoly._norm(rem, sn))


def is_laurent(x) -> bool:
    return _is_number(x) or isinstance(x, LaurentPoly) or x.den.is_one()


def scalar_adams(c, n: int):
    """p_n on a scalar coefficient of any supported type."""
    if n == 1 or _is_number(c):
        return c
    return c.adams(n)


def scalar_is_zero(c) -> bool:
    return not c


def as_fraction_if_constant(c):
    if isinstance(c, RationalFn) and c.den.is_one():
        c = c.num
    if isinstance(c, LaurentPoly) and c.is_constant():
        return c.constant_value()
    return c
