"""Command-line entry point wiring every module together.

Couplings are parsed as exact rationals (p/q); floats are accepted only by
the crit subcommands.  All emission orders are sorted, so identical
invocations produce identical output.  Exit codes: 0 success, 1 a
verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bridge, criticality, grassmann, ising, kasteleyn, spinnet
from .errors import SpinIsingError
from .graphs import PlanarGraph, generate, load_graph

SCHEMA_VERSION = 1


def _parse_rational(text: str) -> Fraction:
    if text.startswith("Y="):
        text = text[2:]
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as ex:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from ex


def _load(args) -> PlanarGraph:
    if getattr(args, "generate", None):
        return generate(args.generate)
    with open(args.graph) as f:
        return load_graph(f.read())


def _add_graph_source(sub):
    grp = sub.add_mutually_exclusive_group(required=True)
    grp.add_argument("--graph", help="graph file to load")
    grp.add_argument("--generate", help="named generator (theta, k4, prism3, cube, dodecahedron)")


def _emit(args, report: dict, lines: list[str]) -> None:
    if args.json:
        doc = {"schema_version": SCHEMA_VERSION}
        doc.update(report)
        print(json.dumps(doc, sort_keys=True, default=str))
    else:
        for line in lines:
            print(line)


def _frac_str(x) -> str:
    return str(Fraction(x))


# -- subcommand handlers --------------------------------------------------------


def cmd_graph(args) -> int:
    g = _load(args)
    report = {"vertices": g.num_vertices, "edges": g.num_edges,
              "faces": g.num_faces, "canonical": g.canonical_code()}
    lines = [f"vertices {g.num_vertices}", f"edges {g.num_edges}",
             f"faces {g.num_faces}", f"canonical {report['canonical']}"]
    _emit(args, report, lines)
    return 0


def cmd_kasteleyn(args) -> int:
    g = _load(args)
    o = kasteleyn.make_kasteleyn(g)
    ok, counts = kasteleyn.is_kasteleyn(g, o)
    lines = []
    edges = []
    for e in range(g.num_edges):
        s, t = kasteleyn.oriented_endpoints(g, o, e)
        edges.append({"edge": e, "src": s, "dst": t})
        lines.append(f"edge {e} {s} {t}")
    lines.append(f"kasteleyn {'true' if ok else 'false'}")
    _emit(args, {"edges": edges, "kasteleyn": ok, "face_counts": counts}, lines)
    return 0 if ok else 1


def cmd_ising(args) -> int:
    g = _load(args)
    Y = args.coupling
    if args.what == "z":
        val = ising.z_ising_bruteforce(g, Y)
        _emit(args, {"z": _frac_str(val)}, [f"z {val}"])
        return 0
    if args.edge is None:
        print("ising corr requires --edge", file=sys.stderr)
        return 2
    val = ising.nn_correlation(g, Y, args.edge)
    _emit(args, {"correlation": _frac_str(val), "edge": args.edge},
          [f"corr {args.edge} {val}"])
    return 0


def cmd_grassmann(args) -> int:
    g = _load(args)
    o = kasteleyn.make_kasteleyn(g)
    form = {"real": grassmann.z_f, "complex": grassmann.z_f_complex,
            "squared": grassmann.z_f_complex_squared}[args.form]
    poly = form(g, o)
    ref = ising.p_gamma(g)
    if args.form == "squared":
        ref = ref * ref
    match = poly == ref
    _emit(args, {"form": args.form, "polynomial": poly.to_text(), "matches_loop_sum": match},
          [f"polynomial {poly.to_text()}", f"matches_loop_sum {'true' if match else 'false'}"])
    return 0 if match else 1


def cmd_spinnet(args) -> int:
    g = _load(args)
    if args.what == "series":
        series = spinnet.z_spin_series(g, args.degree)
        terms = sorted(series.poly.terms.items())
        lines = [f"{' '.join(map(str, exp))} {coeff}" for exp, coeff in terms]
        _emit(args, {"degree": args.degree,
                     "coefficients": [{"exponents": list(e), "value": _frac_str(c)}
                                      for e, c in terms]}, lines)
        return 0
    colors = [int(c) for c in args.colors.split(",")]
    o = kasteleyn.make_kasteleyn(g)
    res = spinnet.evaluate_tensor(g, o, colors)
    if args.norm == "integral":
        res = spinnet.to_integral(res, g)
    elif args.norm == "unitary":
        res = spinnet.to_unitary(res)
    elif args.norm == "skein":
        res = spinnet.to_skein(spinnet.to_integral(res, g), g)
    _emit(args, {"norm": res.norm, "colors": list(res.colors),
                 "value": res.value, "error_bound": res.error_bound},
          [f"value {res.value:.12g}", f"error_bound {res.error_bound:.3g}"])
    return 0


def cmd_bridge(args) -> int:
    g = _load(args)
    Y = args.Y
    checks = [
        ("fundamental_equality", lambda: bridge.verify_fundamental_equality(g, Y)["ok"]),
        ("loop_products", lambda: bridge.check_loop_products(g, Y)["ok"]),
        ("mean_spin", lambda: all(bridge.verify_mean_spin_bridge(g, Y, e)["ok"]
                                  for e in range(g.num_edges))),
        ("first_derivative", lambda: all(bridge.verify_first_derivative(g, Y, e)["ok"]
                                         for e in range(g.num_edges))),
        ("moment_theorem", lambda: bridge.moment_theorem(g, Y, 0)["ok"]),
    ]
    return _run_checks(args, checks)


def cmd_crit(args) -> int:
    if args.what == "hex":
        rows = criticality.emit_curve(args.start, args.to, args.step, args.out)
        _emit(args, {"rows": rows, "out": args.out}, [f"rows {rows}", f"out {args.out}"])
        return 0
    # stationary: file holds a graph source line then one length per edge
    with open(args.triangles) as f:
        tokens = f.read().split()
    if tokens[0] == "generate":
        g = generate(tokens[1])
    else:
        with open(tokens[1]) as f:
            g = load_graph(f.read())
    lengths = [float(t) for t in tokens[2:]]
    if len(lengths) != g.num_edges:
        print(f"need {g.num_edges} lengths, got {len(lengths)}", file=sys.stderr)
        return 2
    res = criticality.stationary_couplings(g, lengths)
    lines = [f"Y {e} {y:.12g}" for e, y in enumerate(res["Y"])]
    lines.append(f"max_form_difference {res['max_form_difference']:.3g}")
    _emit(args, res, lines)
    return 0


def cmd_verify_all(args) -> int:
    g = _load(args)
    Y = args.Y
    o = kasteleyn.make_kasteleyn(g)

    def westbury():
        series = spinnet.z_spin_series(g, args.degree)
        p = ising.p_gamma(g)
        from .algebra import TruncatedSeries
        ps = TruncatedSeries(p, args.degree)
        one = TruncatedSeries(p.constant(g.num_edges, 1), args.degree)
        return series * ps * ps == one

    checks = [
        ("fundamental_equality", lambda: bridge.verify_fundamental_equality(g, Y)["ok"]),
        ("westbury_series", westbury),
        ("grassmann_loop_sum", lambda: grassmann.z_f(g, o) == ising.p_gamma(g)),
        ("dimer_pfaffian", lambda: ising.dimer_p_gamma(g, o) == ising.p_gamma(g)),
        ("kasteleyn_cycles", lambda: kasteleyn.check_cycle_lemma(g, o)["ok"]),
        ("mean_spin", lambda: all(bridge.verify_mean_spin_bridge(g, Y, e)["ok"]
                                  for e in range(g.num_edges))),
        ("moment_theorem", lambda: bridge.moment_theorem(g, Y, 0)["ok"]),
    ]
    return _run_checks(args, checks)


def _run_checks(args, checks) -> int:
    results = []
    all_ok = True
    for name, fn in checks:
        try:
            ok = bool(fn())
        except SpinIsingError as ex:
            ok = False
            results.append({"identity": name, "ok": False, "error": str(ex)})
        else:
            results.append({"identity": name, "ok": ok})
        all_ok = all_ok and ok
    lines = [f"{'PASS' if r['ok'] else 'FAIL'} {r['identity']}" for r in results]
    _emit(args, {"checks": results, "ok": all_ok}, lines)
    if not all_ok:
        failing = ", ".join(r["identity"] for r in results if not r["ok"])
        print(f"failed: {failing}", file=sys.stderr)
    return 0 if all_ok else 1


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinising")
    parser.add_argument("--json", action="store_true", help="emit machine-readable reports")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("graph", help="inspect a graph")
    _add_graph_source(sub)
    sub.set_defaults(handler=cmd_graph)

    sub = subs.add_parser("kasteleyn", help="construct a valid orientation")
    _add_graph_source(sub)
    sub.set_defaults(handler=cmd_kasteleyn)

    sub = subs.add_parser("ising", help="partition function and correlations")
    sub.add_argument("what", choices=["z", "corr"])
    _add_graph_source(sub)
    sub.add_argument("--coupling", type=_parse_rational, required=True,
                     help="uniform coupling Y as p/q")
    sub.add_argument("--edge", type=int)
    sub.set_defaults(handler=cmd_ising)

    sub = subs.add_parser("grassmann", help="fermionic integral representations")
    _add_graph_source(sub)
    sub.add_argument("--form", choices=["real", "complex", "squared"], default="real")
    sub.set_defaults(handler=cmd_grassmann)

    sub = subs.add_parser("spinnet", help="evaluations and generating series")
    sub.add_argument("what", choices=["eval", "series"])
    _add_graph_source(sub)
    sub.add_argument("--colors", help="comma-separated edge colors (eval)")
    sub.add_argument("--norm", choices=["tensor", "integral", "unitary", "skein"],
                     default="integral")
    sub.add_argument("--degree", type=int, default=8, help="series cutoff")
    sub.set_defaults(handler=cmd_spinnet)

    sub = subs.add_parser("bridge", help="correlation/moment identities")
    sub.add_argument("what", choices=["verify"])
    _add_graph_source(sub)
    sub.add_argument("--Y", type=_parse_rational, required=True)
    sub.set_defaults(handler=cmd_bridge)

    sub = subs.add_parser("crit", help="criticality and stationary geometry")
    crit_subs = sub.add_subparsers(dest="what", required=True)
    hexp = crit_subs.add_parser("hex")
    hexp.add_argument("--from", dest="start", type=float, default=0.05)
    hexp.add_argument("--to", type=float, default=1.7)
    hexp.add_argument("--step", type=float, default=0.01)
    hexp.add_argument("--out", required=True)
    hexp.set_defaults(handler=cmd_crit)
    stat = crit_subs.add_parser("stationary")
    stat.add_argument("--triangles", required=True,
                      help="file: graph source then one length per edge")
    stat.set_defaults(handler=cmd_crit)

    sub = subs.add_parser("verify-all", help="run the full identity suite")
    _add_graph_source(sub)
    sub.add_argument("--Y", type=_parse_rational, default=Fraction(1, 3))
    sub.add_argument("--degree", type=int, default=6)
    sub.set_defaults(handler=cmd_verify_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except SpinIsingError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1
    except OSError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
