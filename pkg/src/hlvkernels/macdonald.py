"""Modified Macdonald polynomials and the operators diagonal in them.

The table of H~_mu is obtained by solving the characterization

    H~_mu[X(1-q)] in span{s_lam : lam >= mu}
    H~_mu[X(1-t)] in span{s_lam : lam >= mu'}
    <H~_mu, s_(n)> = 1

for the Schur coefficients over Q(q, t).  Operators act on series in a
chosen alphabet through cached power-sum matrices built from the table and
its inverse, which comes from orthogonality for the modified pairing with
S = -(1-q)(1-t).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import LaurentPoly, NotPolynomial, RationalFn, to_laurent, var
from .partitions import (
    arm_leg,
    cells,
    conjugate,
    dominates,
    partitions_of_size,
    stat_n,
    stat_n_conj,
    z,
)
from .symfunc import SymSeries, character, kernel_xy, p_of, p_to_m

q = var("q")
t = var("t")
S_DEFAULT = -(1 - q) * (1 - t)


def default_modifier() -> LaurentPoly:
    return S_DEFAULT


# cell statistics


def b_lambda(lam) -> LaurentPoly:
    out = LaurentPoly(0)
    for c, r in cells(lam):
        out = out + LaurentPoly.monomial(1, {"q": c, "t": r})
    return out


def d_lambda(lam, S=S_DEFAULT) -> LaurentPoly:
    return -1 - S * b_lambda(lam)


def d_bar_lambda(lam, S=S_DEFAULT) -> LaurentPoly:
    return d_lambda(lam, S).subs({"q": q ** -1, "t": t ** -1})


def mac_norm_sq(lam) -> LaurentPoly:
    """(H~_lam, H~_lam)^S = prod_s (q^a - t^(l+1)) (q^(a+1) - t^l)."""
    out = LaurentPoly(1)
    for s in cells(lam):
        a, l = arm_leg(lam, s)
        out = out * (q ** a - t ** (l + 1)) * (q ** (a + 1) - t ** l)
    return out


def n_lambda_product(lam, u="u") -> LaurentPoly:
    """N_lam(u) = prod_s (q^a - u t^(l+1)) (q^(a+1) - u^-1 t^l)."""
    u = var(u) if isinstance(u, str) else u
    out = LaurentPoly(1)
    for s in cells(lam):
        a, l = arm_leg(lam, s)
        out = out * (q ** a - u * t ** (l + 1)) * (q ** (a + 1) - u ** -1 * t ** l)
    return out


def n_lambda_product_alt(lam, u="u") -> LaurentPoly:
    """The same quantity written as
    (-u)^(-|lam|) q^n(lam') t^n(lam) prod_s (1 - u q^-a t^(l+1)) (1 - u t^-l q^(a+1))."""
    u = var(u) if isinstance(u, str) else u
    out = (-u) ** -sum(lam) * q ** stat_n_conj(lam) * t ** stat_n(lam) if lam else LaurentPoly(1)
    for s in cells(lam):
        a, l = arm_leg(lam, s)
        out = out * (1 - u * q ** -a * t ** (l + 1)) * (1 - u * t ** -l * q ** (a + 1))
    return out


def nabla_eigenvalue(lam) -> LaurentPoly:
    return (-1) ** sum(lam) * q ** stat_n_conj(lam) * t ** stat_n(lam)


def delta_eigenvalue(lam, v="v") -> LaurentPoly:
    """prod over cells of (1 - v q^c t^r)."""
    v = var(v) if isinstance(v, str) else v
    out = LaurentPoly(1)
    for c, r in cells(lam):
        out = out * (1 - v * LaurentPoly.monomial(1, {"q": c, "t": r}))
    return out


# building the table


def _solve(rows, n_unknowns):
    """Gauss-Jordan over Q(q,t); rows are (coefficients, rhs)."""
    rows = [[RationalFn(c) for c in coeffs] + [RationalFn(rhs)] for coeffs, rhs in rows]
    pivots = []
    r = 0
    for col in range(n_unknowns):
        piv = None
        best = None
        for i in range(r, len(rows)):
            if rows[i][col]:
                size = len(rows[i][col].num._p) + len(rows[i][col].den._p)
                if best is None or size < best:
                    piv, best = i, size
        if piv is None:
            raise ArithmeticError("singular Macdonald system")
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [x * inv if x else x for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][-1]:
            raise ArithmeticError("inconsistent Macdonald system")
    return [rows[i][-1] for i in range(n_unknowns)]


def _schur_plethysm_matrix(n, z_factor):
    """M[nu][lam] = <s_nu, s_lam[X * z]> for the scalar z."""
    parts = partitions_of_size(n)
    mat = {}
    for nu in parts:
        for lam in parts:
            tot = LaurentPoly(0)
            for rho in parts:
                c = character(lam, rho) * character(nu, rho)
                if c:
                    tot = tot + p_of(z_factor, rho) * Fraction(c, z(rho))
            mat[nu, lam] = tot
    return mat


def _solve_degree(n: int) -> dict:
    """Schur expansion {mu: {lam: coeff}} of H~_mu for all mu of size n."""
    parts = partitions_of_size(n)
    if n == 0:
        return {(): {(): LaurentPoly(1)}}
    mq = _schur_plethysm_matrix(n, 1 - q)
    mt = _schur_plethysm_matrix(n, 1 - t)
    out = {}
    for mu in parts:
        muc = conjugate(mu)
        rows = []
        for nu in parts:
            if not dominates(nu, mu):
                rows.append(([mq[nu, lam] for lam in parts], 0))
            if not dominates(nu, muc):
                rows.append(([mt[nu, lam] for lam in parts], 0))
        rows.append(([1 if lam == (n,) else 0 for lam in parts], 1))
        sol = _solve(rows, len(parts))
        out[mu] = {lam: to_laurent(c) for lam, c in zip(parts, sol) if c}
    return out


def _cache_path(n: int):
    d = os.environ.get("HLV_CACHE_DIR")
    if not d:
        return None
    return os.path.join(d, f"macdonald_schur_{n}.json")


@lru_cache(maxsize=None)
def schur_expansion(n: int) -> dict:
    path = _cache_path(n)
    if path and os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
        return {
            tuple(row["mu"]): {tuple(c["lambda"]): LaurentPoly.from_json(c["poly"]) for c in row["schur"]}
            for row in data
        }
    out = _solve_degree(n)
    if path:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        data = [
            {"mu": list(mu), "schur": [{"lambda": list(lam), "poly": c.to_json()} for lam, c in sorted(row.items())]}
            for mu, row in sorted(out.items())
        ]
        tmp = path + f".{os.getpid()}.tmp"
        with open(tmp, "w") as fh:
            json.dump(data, fh, sort_keys=True)
        os.replace(tmp, path)
    return out


class MacdonaldTable:
    """H~_lam for |lam| <= D in the power-sum and monomial bases."""

    def __init__(self, D: int, schur=None):
        self.D = D
        self.schur = {}
        for n in range(D + 1):
            self.schur.update(schur_expansion(n) if schur is None else {k: v for k, v in schur.items() if sum(k) == n})
        self.p = {}
        self.m = {}
        for mu, row in self.schur.items():
            n = sum(mu)
            pexp = {}
            for lam, c in row.items():
                for rho in partitions_of_size(n):
                    ch = character(lam, rho)
                    if ch:
                        w = Fraction(ch, z(rho))
                        pexp[rho] = pexp[rho] + c * w if rho in pexp else c * w
            self.p[mu] = {rho: c for rho, c in pexp.items() if c}
            mexp = {}
            for rho, c in self.p[mu].items():
                for nu, k in p_to_m(n)[rho].items():
                    mexp[nu] = mexp[nu] + c * k if nu in mexp else c * k
            self.m[mu] = {nu: c for nu, c in mexp.items() if c}
        self._inverse = {}
        self._matrices = {}

    def series(self, lam, alphabet: str = "X", bounds=()) -> SymSeries:
        return SymSeries((alphabet,), (), bounds, {(rho,): c for rho, c in self.p[tuple(lam)].items()})

    def perturbed(self, lam, nu, delta) -> "MacdonaldTable":
        """A copy with the Schur coefficient of s_nu in H~_lam shifted by delta."""
        schur = {k: dict(v) for k, v in self.schur.items()}
        row = schur[tuple(lam)]
        row[tuple(nu)] = row.get(tuple(nu), LaurentPoly(0)) + delta
        return MacdonaldTable(self.D, schur)

    def inverse(self, n: int, S=S_DEFAULT) -> dict:
        """Ainv[rho][mu] with p_rho = sum_mu Ainv[rho][mu] H~_mu."""
        key = (n, S)
        if key not in self._inverse:
            if n > self.D:
                raise ValueError(f"degree {n} exceeds table bound {self.D}")
            inv = {}
            parts = partitions_of_size(n)
            norms = {mu: mac_norm_sq(mu) for mu in parts}
            for rho in parts:
                w = z(rho) * p_of(S, rho)
                row = {}
                for mu in parts:
                    a = self.p[mu].get(rho)
                    if a:
                        row[mu] = RationalFn(w * a, norms[mu])
                inv[rho] = row
            self._inverse[key] = inv
        return self._inverse[key]

    def eigen_matrix(self, name, eigen, n: int, S=S_DEFAULT) -> dict:
        """M[rho][sigma]: U p_rho = sum_sigma M[rho][sigma] p_sigma."""
        key = (name, n, S)
        if key not in self._matrices:
            inv = self.inverse(n, S)
            ev = {mu: eigen(mu) for mu in partitions_of_size(n)}
            mat = {}
            for rho, row in inv.items():
                out = {}
                for mu, c in row.items():
                    ce = c * ev[mu]
                    for sigma, a in self.p[mu].items():
                        term = ce * a
                        out[sigma] = out[sigma] + term if sigma in out else term
                mat[rho] = {k: _simplify(v) for k, v in out.items() if v}
            self._matrices[key] = mat
        return self._matrices[key]

    def to_json(self) -> dict:
        return {
            "degree": self.D,
            "basis": "m",
            "polynomials": [
                {
                    "lambda": list(mu),
                    "coefficients": [
                        {"mu": list(nu), "poly": to_laurent(c).to_json()} for nu, c in sorted(self.m[mu].items())
                    ],
                }
                for mu in sorted(self.m, key=lambda k: (sum(k), k))
            ],
        }


def _simplify(c):
    if isinstance(c, RationalFn) and c.den.is_one():
        return c.num
    return c


_TABLES: dict = {}


def build_macdonald_table(D: int) -> MacdonaldTable:
    """Shared table for degrees up to D."""
    if D < 0:
        raise ValueError("D must be nonnegative")
    for have in sorted(_TABLES):
        if have >= D:
            return _TABLES[have]
    _TABLES[D] = MacdonaldTable(D)
    return _TABLES[D]


# operators


class Operator:
    """An operator acting on one alphabet of a series.

    ``(U @ V)(F)`` means U(V(F)): the right factor acts first.
    """

    name = "op"

    def __call__(self, F: SymSeries, alphabet: str = "X") -> SymSeries:
        return self.apply(F, alphabet)

    def apply(self, F, alphabet="X"):
        raise NotImplementedError

    def __matmul__(self, other: "Operator") -> "Operator":
        return Compose(self, other)


class Compose(Operator):
    def __init__(self, *ops):
        self.ops = ops
        self.name = " . ".join(str(op.name) for op in ops)

    def apply(self, F, alphabet="X"):
        for op in reversed(self.ops):
            F = op.apply(F, alphabet)
        return F


class Identity(Operator):
    name = "id"

    def apply(self, F, alphabet="X"):
        return F


class Eigen(Operator):
    """Diagonal in the H~ basis with eigenvalue ``eigen(lam)``."""

    def __init__(self, name, eigen, table: MacdonaldTable = None, S=S_DEFAULT):
        self.name = name
        self.eigen = eigen
        self.table = table
        self.S = S

    def apply(self, F, alphabet="X"):
        if alphabet not in F.alphabets:
            return F.scale(self.eigen(()))
        i = F.alphabets.index(alphabet)
        top = max((sum(k[i]) for k in F.terms), default=0)
        table = self.table if self.table is not None and self.table.D >= top else build_macdonald_table(max(top, self.table.D if self.table else 0))
        self.table = table
        terms: dict = {}
        for key, c in F.terms.items():
            rho = key[i]
            mat = table.eigen_matrix(self.name, self.eigen, sum(rho), self.S)
            for sigma, w in mat[rho].items():
                k = key[:i] + (sigma,) + key[i + 1 :]
                v = w * c
                terms[k] = terms[k] + v if k in terms else v
        return SymSeries(F.alphabets, F.graded, F.bounds, terms)


def nabla(table=None, S=S_DEFAULT) -> Eigen:
    return Eigen("nabla", nabla_eigenvalue, table, S)


def nabla_inv(table=None, S=S_DEFAULT) -> Eigen:
    return Eigen("nabla_inv", lambda lam: nabla_eigenvalue(lam) ** -1, table, S)


def delta_v(v="v", table=None, S=S_DEFAULT) -> Eigen:
    return Eigen(("delta", str(v)), lambda lam: delta_eigenvalue(lam, v), table, S)


def delta_f(F: SymSeries, table=None, S=S_DEFAULT) -> Eigen:
    """Delta_F with eigenvalue F[B_lam]; F is a series in one alphabet."""
    (alpha,) = F.alphabets
    na = 1

    def eigen(lam):
        b = b_lambda(lam)
        out = LaurentPoly(0)
        for key, c in F.terms.items():
            term = c
            for part in key[0]:
                term = term * b.adams(part)
            for g, e in zip(F.graded, key[na:]):
                term = term * var(g) ** e
            out = out + term
        return out

    return Eigen(("deltaF", tuple(sorted(F.terms.items(), key=lambda kv: kv[0]))), eigen, table, S)


def delta_u_inverse(u="u", order=3, table=None, S=S_DEFAULT) -> Eigen:
    """sum_{n <= order} u^n Delta_{h_n}, the inverse of Delta_u up to u^order."""
    uu = var(u)

    def eigen(lam):
        b = b_lambda(lam)
        total = LaurentPoly(0)
        for n in range(order + 1):
            hn = LaurentPoly(0)
            for rho in partitions_of_size(n):
                term = Fraction(1, z(rho))
                for part in rho:
                    term = term * b.adams(part)
                hn = hn + term
            total = total + uu ** n * hn
        return total

    return Eigen(("delta_inv", u, order), eigen, table, S)


class Shift(Operator):
    """tau_c: F[X] -> F[X + c]."""

    def __init__(self, c, graded=()):
        self.c = c
        self.graded = tuple(graded)
        self.name = f"tau[{c}]"

    def apply(self, F, alphabet="X"):
        E = SymSeries.alphabet(alphabet) + SymSeries((), self.graded, (), {(0,) * len(self.graded): self.c})
        return F.substitute(alphabet, E)


class StarShift(Operator):
    """tau*_c: F[X] -> F[X] pExp[cX/S]."""

    def __init__(self, c, S=S_DEFAULT, graded=()):
        self.c = c
        self.S = S
        self.graded = tuple(graded)
        self.name = f"tau*[{c}]"

    def apply(self, F, alphabet="X"):
        bounds = tuple(b for b in F.bounds if alphabet in b.names())
        if not bounds:
            raise ValueError(f"tau* needs a degree bound on {alphabet}")
        g = SymSeries((alphabet,), self.graded, bounds, {((1,),) + (0,) * len(self.graded): self.c / self.S if not isinstance(self.S, int) else Fraction(1, self.S) * self.c})
        return F * g.pexp()


def tesler(table=None, S=S_DEFAULT) -> Operator:
    """nabla tau* tau with unit shifts."""
    return Compose(nabla(table, S), StarShift(1, S), Shift(1))


def tesler_eigen_series(lam, S=S_DEFAULT, bounds=(), alphabet="X") -> SymSeries:
    """pExp[D_lam X / S], the image of H~_lam under the Tesler operator."""
    d = d_lambda(lam, S)
    return SymSeries((alphabet,), (), bounds, {((1,),): RationalFn(d, S)}).pexp()


# pairings and kernels


def n_lambda_via_pairing(lam, u="u", table=None, S=S_DEFAULT) -> LaurentPoly:
    """(tau_{u^-1 - qt} H~_lam, tau_{u-1} H~_lam)^S."""
    lam = tuple(lam)
    table = table or build_macdonald_table(sum(lam))
    uu = var(u)
    H = table.series(lam)
    left = Shift(uu ** -1 - q * t)(H)
    right = Shift(uu - 1)(H)
    val = left.pair(right, "X", S).constant_term()
    return to_laurent(val)


@dataclass
class OperatorKernel:
    """L with pExp[L/S] equal to U pExp[XY/S] below the bounds."""

    L: SymSeries
    S: object
    bounds: tuple

    def kernel(self) -> SymSeries:
        return self.L.scale(RationalFn(1, self.S)).pexp()


def operator_kernel_log(U: Operator, S=S_DEFAULT, D: int = 3, bounds=None, admissible=True) -> OperatorKernel:
    """S * pLog(U pExp[XY/S]) with U acting on X.

    With ``admissible`` every coefficient must be a Laurent polynomial;
    otherwise NotPolynomial propagates.
    """
    from .symfunc import bound

    bounds = tuple(bounds) if bounds is not None else (bound(D, "X"), bound(D, "Y"))
    K = kernel_xy(S, bounds)
    K = U(K, "X")
    L = K.plog().scale(S)
    if admissible:
        L = L.map_coefficients(to_laurent)
    return OperatorKernel(L, S, bounds)


__all__ = [
    "MacdonaldTable",
    "NotPolynomial",
    "OperatorKernel",
    "b_lambda",
    "build_macdonald_table",
    "d_bar_lambda",
    "d_lambda",
    "delta_f",
    "delta_u_inverse",
    "delta_v",
    "mac_norm_sq",
    "n_lambda_product",
    "n_lambda_product_alt",
    "n_lambda_via_pairing",
    "nabla",
    "nabla_inv",
    "operator_kernel_log",
    "tesler",
]
