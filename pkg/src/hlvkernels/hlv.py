"""HLV kernels Omega and H, integrality checks, and two reconstructions.

Omega is summed directly over partitions.  H = S pLog(Omega) with
S = -(1-q)(1-t).  The Delta_v kernel is rebuilt degree by degree from the
five-term relation and the graph convolution, and Omega itself is rebuilt
from the Tesler kernel by substitution, grading filter, shifts and traces.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .arith import LaurentPoly, NotPolynomial, RationalFn, to_laurent, var
from .convolution import log_convolution, trace_convolution
from .macdonald import (
    S_DEFAULT,
    Shift,
    StarShift,
    build_macdonald_table,
    mac_norm_sq,
    n_lambda_product,
    nabla_inv,
    tesler,
)
from .partitions import partitions_of_size
from .symfunc import SymSeries, bound, coeff_from_json, coeff_json, from_basis, kernel_xy, monomial_table, to_basis

q = var("q")
t = var("t")


@dataclass(frozen=True)
class HLVConfig:
    genus: int
    punctures: int
    degree: int

    def __post_init__(self):
        if min(self.genus, self.punctures, self.degree) < 0:
            raise ValueError("genus, punctures and degree must be nonnegative")
        if self.genus > 9:
            raise ValueError("at most 9 u-variables are supported")

    @property
    def u_names(self) -> tuple:
        return tuple(f"u{i}" for i in range(1, self.genus + 1))

    @property
    def alphabets(self) -> tuple:
        return tuple(f"X{i}" for i in range(1, self.punctures + 1))

    def to_json(self) -> dict:
        return {"genus": self.genus, "punctures": self.punctures, "degree": self.degree}


def _simplify(c):
    if isinstance(c, RationalFn) and c.den.is_one():
        return c.num
    return c


# direct sum over partitions


def _omega_terms(lam, cfg: HLVConfig, table) -> dict:
    weight = RationalFn(1, mac_norm_sq(lam)) if lam else Fraction(1)
    for u in cfg.u_names:
        weight = weight * n_lambda_product(lam, u)
    weight = _simplify(weight)
    rows = [table.p[lam].items()] * cfg.punctures
    out = {}
    for combo in product(*rows):
        c = weight
        for _, a in combo:
            c = c * a
        out[tuple(rho for rho, _ in combo) + (sum(lam),)] = c
    return out


def _omega_terms_json(args):
    lam, cfg = args
    table = build_macdonald_table(sum(lam))
    return [(key, coeff_json(c)) for key, c in _omega_terms(lam, cfg, table).items()]


def _accumulate(terms: dict, items) -> None:
    for key, c in items:
        terms[key] = terms[key] + c if key in terms else c


def omega_direct(cfg: HLVConfig, table=None, jobs: int = 1) -> SymSeries:
    """Omega to T-degree ``cfg.degree`` in alphabets X1..Xn and graded T."""
    lams = [lam for d in range(cfg.degree + 1) for lam in partitions_of_size(d)]
    terms: dict = {}
    if jobs > 1 and table is None and len(lams) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rows in pool.map(_omega_terms_json, [(lam, cfg) for lam in lams]):
                _accumulate(terms, ((tuple(tuple(p) for p in key[:-1]) + (key[-1],), coeff_from_json(c)) for key, c in rows))
    else:
        table = table or build_macdonald_table(cfg.degree)
        for lam in lams:
            _accumulate(terms, _omega_terms(lam, cfg, table).items())
    return SymSeries(cfg.alphabets, ("T",), (bound(cfg.degree, "T"),), terms)


def h_from_omega(omega: SymSeries, S=S_DEFAULT) -> SymSeries:
    """H = S pLog(Omega); coefficients that are polynomial come back as LaurentPoly."""
    return omega.plog().scale(S).map_coefficients(_simplify)


def compute_hlv(cfg: HLVConfig, table=None, jobs: int = 1) -> SymSeries:
    return h_from_omega(omega_direct(cfg, table, jobs))


def monomial_coefficients(H: SymSeries) -> dict:
    """{(lam_1, ..., lam_n, tdeg): coefficient} in the monomial basis."""
    return monomial_table(H, "m")


def coefficient_at(H: SymSeries, lams, tdeg: int | None = None):
    """Coefficient of prod_i m_{lam_i}[X_i] T^tdeg in H.

    With punctures the T-degree is the common size of the partitions and
    unequal sizes give 0.  Without punctures ``tdeg`` is required.
    """
    lams = tuple(tuple(l) for l in lams)
    if len(lams) != len(H.alphabets):
        raise ValueError(f"expected {len(H.alphabets)} partitions, got {len(lams)}")
    if lams:
        sizes = {sum(l) for l in lams}
        if len(sizes) > 1:
            return LaurentPoly(0)
        d = sizes.pop()
        if tdeg is not None and tdeg != d:
            return LaurentPoly(0)
        tdeg = d
    elif tdeg is None:
        raise ValueError("tdeg is required without punctures")
    cap = min((b.cap for b in H.bounds if "T" in b.names()), default=None)
    if cap is not None and tdeg > cap:
        raise ValueError(f"T-degree {tdeg} is beyond the truncation {cap}")
    if tdeg == 0:
        return LaurentPoly(0)
    part = H.pick(lambda deg: deg["T"] == tdeg)
    c = monomial_table(part, "m").get(lams + (tdeg,), 0)
    return to_laurent(c)


@dataclass
class IntegralityReport:
    config: HLVConfig
    coefficients: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    symmetries: dict = field(default_factory=dict)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "coefficients": [
                {"lambda_tuple": [list(l) for l in lams], "tdeg": d, "poly": c.to_json()}
                for lams, d, c in self.coefficients
            ],
            "integrality": {"pass": self.passed, "failures": self.failures},
            "symmetries": self.symmetries,
        }


def _check_coefficient(c):
    """(LaurentPoly or None, reason or None)."""
    try:
        p = to_laurent(c)
    except NotPolynomial as exc:
        return None, f"not a Laurent polynomial (remainder {exc.remainder})"
    if not p.is_integral():
        return p, "non-integer coefficient"
    bad = [nm for nm in p.variables if nm in ("q", "t") and p.min_degree(nm) < 0]
    if bad:
        return p, f"negative power of {','.join(bad)}"
    return p, None


def _sort_key(key):
    return (key[-1], key[:-1])


def integrality_report(cfg: HLVConfig, table=None, jobs: int = 1, H: SymSeries | None = None) -> IntegralityReport:
    """Check every monomial coefficient of H lies in Z[q, t, u_i, u_i^-1]."""
    if H is None:
        H = compute_hlv(cfg, table, jobs)
    rep = IntegralityReport(cfg)
    table_m = monomial_coefficients(H)
    rep.checked = len(table_m)
    for key in sorted(table_m, key=_sort_key):
        c = table_m[key]
        p, reason = _check_coefficient(c)
        lams, d = key[:-1], key[-1]
        if reason:
            rep.failures.append(
                {"lambda_tuple": [list(l) for l in lams], "tdeg": d, "reason": reason, "value": str(c)}
            )
        if p is not None:
            rep.coefficients.append((lams, d, p))
    rep.symmetries = observed_symmetries([c for _, _, c in rep.coefficients], cfg.u_names)
    return rep


def observed_symmetries(polys, u_names) -> dict:
    """Which of u -> 1/u and u -> 1/(q t u) fix every coefficient (reported only)."""
    out = {}
    for u in u_names:
        uu = var(u)
        out[f"{u}->1/{u}"] = all(p.subs({u: uu ** -1}) == p for p in polys)
        out[f"{u}->1/(qt{u})"] = all(p.subs({u: (q * t * uu) ** -1}) == p for p in polys)
    return out


# symmetric recursion and the Delta_v kernel


def sym_rec_solve(G: SymSeries, alphabet: str, k: int) -> SymSeries:
    """The F, homogeneous of degree k in ``alphabet``, with F[X+1] - F[X] = G.

    Uses the monomial left inverse m_nu -> m_(k-|nu|, nu) (when k - |nu| is at
    least the largest part of nu) and verifies the result.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if alphabet not in G.alphabets:
        G = G.with_space(G.alphabets + (alphabet,), G.graded)
    i = G.alphabets.index(alphabet)
    table = to_basis(G, alphabet, "m")
    F_table: dict = {}
    for key, c in table.items():
        nu = key[i]
        if sum(nu) >= k:
            raise ValueError(f"G has degree {sum(nu)} >= {k} in {alphabet}")
        a = k - sum(nu)
        if nu and a < nu[0]:
            continue
        nk = key[:i] + ((a,) + nu,) + key[i + 1 :]
        F_table[nk] = c
    like = SymSeries._raw(G.alphabets, G.graded, tuple(b for b in G.bounds if alphabet not in b.names()), {})
    F = from_basis(F_table, like, alphabet, "m")
    diff = Shift(1)(F, alphabet) - F
    if not _same(diff, G):
        raise ValueError("G is not in the image of the difference map")
    return F


def _same(a: SymSeries, b: SymSeries) -> bool:
    a = a.with_space(b.alphabets, b.graded) if set(a.alphabets) <= set(b.alphabets) else a
    d = a - b
    return all(not _simplify(c) for c in d.terms.values())


def _coeff_poly(c):
    return to_laurent(_simplify(c))


def delta_v_kernel_recursion(K: int, S=S_DEFAULT, v: str = "v") -> list:
    """[L_v^(1), ..., L_v^(K)] from the five-term relation.

    Each step builds A_{v,lam}[X] from L_v[X, Z+1], convolves it with its
    v -> uv copy in Y, keeps the terms of total degree k in X and u (u at
    least once, Y below k), sets u = 1 and solves two symmetric recursions.
    """
    vv = var(v)
    u = "u"
    uu = var(u)
    parts: list = []
    for k in range(1, K + 1):
        cur = SymSeries(("X", "Y"), (), (), {})
        for L in parts:
            cur = cur + L
        # L_v[X, Z+1] split by the Z index
        shifted = cur.substitute("Y", SymSeries.alphabet("Z") + 1)
        if "Z" not in shifted.alphabets:
            shifted = shifted.with_space(shifted.alphabets + ("Z",), shifted.graded)
        groups = shifted.slot_split("Z")
        caps = (bound(k, "X", "u"), bound(k - 1, "Y"))
        A, B = {}, {}
        for lam, ser in groups.items():
            ser = ser.with_space(("X",), ("u",))
            A[lam] = SymSeries(("X",), ("u",), caps, ser.terms)
            Bt = {key: (c.subs({v: uu * vv}) if not isinstance(c, (int, Fraction)) else c) for key, c in ser.terms.items()}
            B[lam] = SymSeries(("Y",), ("u",), caps, Bt)
        base = SymSeries(("X", "Y"), ("u",), caps, {})
        Y = SymSeries.alphabet("Y")
        extra = Y * (uu - 1) + SymSeries.scalar(uu * (1 - vv), ("u",))
        rhs = base + extra
        if A or B:
            rhs = rhs + log_convolution(A, B, S, D=k - 1)
        Tk = rhs.pick(lambda d: d["X"] + d["u"] == k and d["u"] >= 1 and d["Y"] <= k - 1)
        Tk = Tk.set_graded("u", 1).map_coefficients(_coeff_poly)
        Lp = sym_rec_solve(Tk, "X", k)
        Lk = sym_rec_solve(Lp, "Y", k).with_space(("X", "Y"), ())
        parts.append(SymSeries(("X", "Y"), (), (), Lk.terms).map_coefficients(_coeff_poly))
    return parts


def split_by_degree(L: SymSeries, K: int) -> list:
    """Homogeneous pieces of a kernel log in X, Y for degrees 1..K."""
    return [
        SymSeries(("X", "Y"), (), (), L.pick(lambda d, k=k: d["X"] == k and d["Y"] == k).terms) for k in range(1, K + 1)
    ]


def m_basis_table(F: SymSeries) -> dict:
    """Coefficients in the monomial basis of every alphabet, simplified."""
    return {k: _simplify(c) for k, c in monomial_table(F, "m").items()}


# Omega rebuilt from operators


def grading_filter(F: SymSeries, alphabets, graded: str = "T") -> SymSeries:
    """Drop the terms whose degree in some alphabet is below the degree in ``graded``."""
    return F.pick(lambda d: all(d[a] >= d[graded] for a in alphabets))


def omega_via_operators(cfg: HLVConfig, S=S_DEFAULT, table=None) -> dict:
    """Omega rebuilt from the Tesler kernel.

    Returns {"direct": series from the plain trace, "graphs": series from the
    directed-graph trace convolution}; without genus both are the same object.
    """
    g, n, D = cfg.genus, cfg.punctures, cfg.degree
    m = n + 2 * g
    if m == 0:
        raise ValueError("the operator route needs at least one alphabet")
    table = table or build_macdonald_table(max(m * D, 1))
    names = tuple(f"X{i}" for i in range(1, m + 1))
    K = kernel_xy(S, (bound(m * D, "X"), bound(D, "Y")))
    K = tesler(table, S)(K, "X")
    # X = X1 + ... + Xm, Y = T
    E = SymSeries.alphabet(names[0])
    for nm in names[1:]:
        E = E + SymSeries.alphabet(nm)
    caps = tuple(bound(D, nm) for nm in names) + (bound(D, "T"),)
    E = SymSeries(E.alphabets, (), caps, E.terms)
    K = K.substitute("X", E)
    K = K.substitute("Y", SymSeries((), ("T",), caps, {(1,): 1}))
    ninv = nabla_inv(table, S)
    star = StarShift(-1, S)
    for nm in names:
        K = star(ninv(K, nm), nm)
    K = grading_filter(K, names)
    K = K.map_coefficients(_simplify)
    us = cfg.u_names
    for i, u in enumerate(us):
        uu = var(u)
        a, b = names[n + 2 * i], names[n + 2 * i + 1]
        K = Shift(uu ** -1 - q * t)(K, a)
        K = Shift(uu - 1)(K, b)
    direct = K
    for i in range(g):
        a, b = names[n + 2 * i], names[n + 2 * i + 1]
        direct = direct.trace(a, b, S)
    direct = direct.map_coefficients(_simplify)
    if g == 0:
        return {"direct": direct, "graphs": direct}
    graphs = K
    for i in range(g):
        a, b = names[n + 2 * i], names[n + 2 * i + 1]
        L = graphs.plog().scale(S).map_coefficients(_simplify)
        rest = tuple(x for x in L.alphabets if x not in (a, b))
        fam: dict = {}
        ia, ib = L.alphabets.index(a), L.alphabets.index(b)
        keep = [j for j in range(len(L.alphabets)) if j not in (ia, ib)]
        na = len(L.alphabets)
        for key, c in L.terms.items():
            lam, mu = key[ia], key[ib]
            nk = tuple(key[j] for j in keep) + key[na:]
            fam.setdefault((lam, mu), {})[nk] = c
        bounds = tuple(bd for bd in L.bounds if a not in bd.names() and b not in bd.names())
        family = {lm: SymSeries(rest, L.graded, bounds, terms) for lm, terms in fam.items()}
        traced = trace_convolution(family, S, cost="T", budget=D)
        if not isinstance(traced, SymSeries):
            traced = SymSeries(rest, L.graded, bounds, {((),) * len(rest) + (0,) * len(L.graded): traced})
        graphs = traced.scale(RationalFn(1, S)).pexp().map_coefficients(_simplify)
    return {"direct": direct, "graphs": graphs}


__all__ = [
    "HLVConfig",
    "IntegralityReport",
    "coefficient_at",
    "compute_hlv",
    "delta_v_kernel_recursion",
    "grading_filter",
    "h_from_omega",
    "integrality_report",
    "m_basis_table",
    "monomial_coefficients",
    "observed_symmetries",
    "omega_direct",
    "omega_via_operators",
    "split_by_degree",
    "sym_rec_solve",
]
