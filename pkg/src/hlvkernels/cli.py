"""Command line front end: ``hlvkernels <command> [flags]``.

Exit codes: 0 success, 1 failed integrality report, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .arith import LaurentPoly, var
from .symfunc import coeff_json

EXIT_OK, EXIT_INTEGRALITY, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {n}")
    return n


def _positive(text):
    n = _nonneg(text)
    if n == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hlvkernels", description="HLV kernels, Macdonald operators and graph convolutions.")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def common(sp):
        sp.add_argument("--json", action="store_true", help="print JSON instead of text")
        sp.add_argument("--out", metavar="FILE", help="write output to FILE")
        sp.add_argument("--jobs", type=_positive, default=1, metavar="N", help="worker processes")

    for name, helptext in (
        ("compute-hlv", "coefficients of the logarithmic HLV kernel"),
        ("check-integrality", "integrality report for the logarithmic HLV kernel"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--genus", type=_nonneg, default=0)
        sp.add_argument("--punctures", type=_nonneg, default=0)
        sp.add_argument("--tdeg", type=_nonneg, required=True, help="truncation degree in T")
        sp.add_argument(
            "--inject-fault",
            action="store_true",
            help="perturb one Macdonald coefficient first (self-test of the checker)",
        )
        common(sp)

    sp = sub.add_parser("delta-kernel", help="homogeneous pieces of the Delta_v kernel log")
    sp.add_argument("--k", type=_positive, required=True, help="highest degree")
    sp.add_argument("--route", choices=("recursion", "operator"), default="recursion")
    common(sp)

    sp = sub.add_parser("graphs", help="connected admissible colored graphs of a degree")
    sp.add_argument("--degree", type=_nonneg, required=True)
    sp.add_argument("--directed", action="store_true")
    sp.add_argument("--modifier", choices=("hall", "S"), default="S")
    common(sp)

    sp = sub.add_parser("convolve", help="logarithmic convolution in free generators")
    sp.add_argument("--deg", "--degree", dest="deg", type=_nonneg, required=True)
    sp.add_argument("--directed", action="store_true")
    sp.add_argument("--modifier", choices=("hall", "S"), default="hall")
    common(sp)

    sp = sub.add_parser("dump-macdonald", help="modified Macdonald polynomials in the monomial basis")
    sp.add_argument("--degree", "--deg", dest="degree", type=_nonneg, required=True)
    common(sp)
    return p


# formatting


def fmt_parts(lam) -> str:
    return "(" + ",".join(map(str, lam)) + ")"


def fmt_m(table_key, alphabets) -> str:
    return " ".join(f"m_{fmt_parts(lam)}[{a}]" for a, lam in zip(alphabets, table_key) if lam)


def _modifier(name):
    from .macdonald import S_DEFAULT

    return 1 if name == "hall" else S_DEFAULT


def _sort_m(key):
    return tuple((sum(l), tuple(-x for x in l)) for l in key)


# commands


def cmd_hlv(args, check_only: bool):
    from .hlv import HLVConfig, integrality_report
    from .macdonald import build_macdonald_table

    try:
        cfg = HLVConfig(args.genus, args.punctures, args.tdeg)
    except ValueError as exc:
        raise _Usage(str(exc))
    table = None
    if args.inject_fault:
        if args.tdeg < 2 or args.punctures < 1:
            raise _Usage("--inject-fault needs --tdeg >= 2 and --punctures >= 1")
        table = build_macdonald_table(args.tdeg).perturbed((2,), (1, 1), var("q"))
    rep = integrality_report(cfg, table=table, jobs=args.jobs)
    code = EXIT_OK if rep.passed else EXIT_INTEGRALITY
    if args.json:
        data = rep.to_json()
        data.pop("symmetries")
        if check_only:
            data = {"config": data["config"], "integrality": data["integrality"], "observed_symmetries": rep.symmetries}
        return json.dumps(data, indent=1, sort_keys=True) + "\n", code
    lines = [f"genus {cfg.genus}, punctures {cfg.punctures}, T-degree <= {cfg.degree}"]
    if not check_only:
        alph = cfg.alphabets
        for lams, d, c in rep.coefficients:
            mono = fmt_m(lams, alph)
            lines.append(f"[{mono + ' ' if mono else ''}T^{d}] {c}")
    lines.append(f"coefficients checked: {rep.checked}")
    lines.append("integrality: " + ("pass" if rep.passed else f"FAIL ({len(rep.failures)} failures)"))
    for f in rep.failures:
        lines.append(f"  {f['lambda_tuple']} T^{f['tdeg']}: {f['reason']}: {f['value']}")
    for name, ok in rep.symmetries.items():
        lines.append(f"observed symmetry {name}: {'yes' if ok else 'no'}")
    return "\n".join(lines) + "\n", code


def cmd_delta(args):
    from .hlv import delta_v_kernel_recursion, m_basis_table, split_by_degree
    from .macdonald import delta_v, operator_kernel_log

    if args.route == "recursion":
        parts = delta_v_kernel_recursion(args.k)
    else:
        parts = split_by_degree(operator_kernel_log(delta_v("v"), D=args.k).L, args.k)
    if args.json:
        out = []
        for k, P in enumerate(parts, 1):
            tab = m_basis_table(P)
            out.append(
                {
                    "k": k,
                    "terms": [
                        {"X": list(key[0]), "Y": list(key[1]), "poly": LaurentPoly(tab[key]).to_json()}
                        for key in sorted(tab, key=_sort_m)
                    ],
                }
            )
        return json.dumps({"basis": "m", "route": args.route, "pieces": out}, indent=1, sort_keys=True) + "\n", EXIT_OK
    lines = []
    for k, P in enumerate(parts, 1):
        tab = m_basis_table(P)
        lines.append(f"L_v^({k}) =")
        for key in sorted(tab, key=_sort_m):
            lines.append(f"  ({tab[key]}) {fmt_m(key, ('X', 'Y'))}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_graphs(args):
    from .graphs import enumerate_bipartite, enumerate_directed, phi

    S = _modifier(args.modifier)
    graphs = enumerate_directed(args.degree) if args.directed else enumerate_bipartite(args.degree)
    rows = []
    for g in graphs:
        aut = g.aut_count()
        b, gc = g.betti(), g.gcd_color()
        w = g.weight()
        contrib = w * (phi(b, gc) / aut) if g.edges else w
        cg = g.c_gamma(S) if g.edges else None
        rows.append((g, aut, b, gc, w, contrib, cg))
    if args.json:
        data = [
            {
                "graph": g.to_json(),
                "aut": aut,
                "betti": b,
                "gcd": gc,
                "weight": w.to_json(),
                "contribution": contrib.to_json(),
                "c_gamma": None if cg is None else coeff_json(cg),
            }
            for g, aut, b, gc, w, contrib, cg in rows
        ]
        return json.dumps({"degree": args.degree, "directed": args.directed, "modifier": args.modifier, "graphs": data}, indent=1, sort_keys=True) + "\n", EXIT_OK
    lines = [f"{len(rows)} graphs of degree {args.degree}" + (" (directed)" if args.directed else "")]
    for i, (g, aut, b, gc, w, contrib, cg) in enumerate(rows, 1):
        lines.append(f"G{i}: {g.describe()}")
        lines.append(f"    #Aut {aut}  b {b}  g {gc}  weight {_fmt_gen(w)}  c_Gamma {cg if cg is not None else '-'}")
    return "\n".join(lines) + "\n", EXIT_OK


def _fmt_gen(p) -> str:
    return str(p).replace("*", " ")


def cmd_convolve(args):
    from .convolution import free_double_family, free_family, generator_degree, log_convolution, trace_convolution

    S = _modifier(args.modifier)
    D = args.deg
    if args.directed:
        total = trace_convolution(free_double_family("A", D), S=S, D=D)
    else:
        total = log_convolution(free_family("A", D), free_family("B", D), S=S, D=D)
    by_deg = generator_degree(total)
    if args.json:
        data = {str(d): by_deg[d].to_json() for d in sorted(by_deg)}
        return json.dumps({"degree": D, "directed": args.directed, "modifier": args.modifier, "by_degree": data}, indent=1, sort_keys=True) + "\n", EXIT_OK
    lines = []
    for d in sorted(by_deg):
        terms = by_deg[d].terms()
        lines.append(f"degree {d}: {len(terms)} terms")
        lines.append(f"  {_fmt_gen(by_deg[d])}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_dump(args):
    from .macdonald import build_macdonald_table

    table = build_macdonald_table(args.degree)
    data = table.to_json()
    data["polynomials"] = [row for row in data["polynomials"] if sum(row["lambda"]) <= args.degree]
    data["degree"] = args.degree
    if args.json:
        return json.dumps(data, indent=1, sort_keys=True) + "\n", EXIT_OK
    lines = []
    for row in data["polynomials"]:
        terms = " + ".join(f"({LaurentPoly.from_json(c['poly'])}) m_{fmt_parts(c['mu'])}" for c in row["coefficients"])
        lines.append(f"H~_{fmt_parts(row['lambda'])} = {terms or '1'}")
    return "\n".join(lines) + "\n", EXIT_OK


class _Usage(Exception):
    pass


def run(argv=None) -> tuple:
    """(exit code, text, output path); usage errors raise SystemExit(2)."""
    args = build_parser().parse_args(argv)
    if args.command == "compute-hlv":
        text, code = cmd_hlv(args, False)
    elif args.command == "check-integrality":
        text, code = cmd_hlv(args, True)
    elif args.command == "delta-kernel":
        text, code = cmd_delta(args)
    elif args.command == "graphs":
        text, code = cmd_graphs(args)
    elif args.command == "convolve":
        text, code = cmd_convolve(args)
    else:
        text, code = cmd_dump(args)
    return code, text, args.out


def main(argv=None) -> int:
    try:
        code, text, out = run(argv)
    except _Usage as exc:
        print(f"hlvkernels: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
