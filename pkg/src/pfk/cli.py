"""``pfk`` command line.

::

    pfk eval --method brute|pfaffian|both [--order-file F] NET
    pfk order NET
    pfk ideal (--gate EXPR | --cogate EXPR | --net NET) --mode hom|het
              [--fix K=MATRIX] [--reduce-scalars] --format singular|neutral [-o OUT]
    pfk gb [--order degrevlex|lex] [--max-pairs N] [--timeout SECS] IDEAL
    pfk certify (--suite paper | --net NET)
    pfk census --arity N --basis hadamard|FILE [--kind gate|cogate] [--jobs J]
    pfk decompose --target EXPR --cert FILE --fragment NET --order-file F

Exit codes: 0 success, 1 a check failed, 2 usage or input error,
3 a work/time budget ran out.  ``PFK_EPS`` overrides the tolerance.
"""

import argparse
import sys

from .errors import BudgetExceeded, ParseError, PfkError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise PfkError(f"{path}: {exc.strerror}") from None


def _show(x, digits=12):
    c = complex(x)
    re_, im = float(f"{c.real:.{digits}g}"), float(f"{c.imag:.{digits}g}")
    if abs(im) <= 1e-12 * max(1.0, abs(re_)):
        return f"{re_:.{digits}g}"
    return f"{re_:.{digits}g}{im:+.{digits}g}i"


def _basis_arg(text):
    from .registry import NAMED_BASES
    from .tensor import BasisMatrix

    text = text.strip()
    if text in NAMED_BASES:
        return NAMED_BASES[text]
    if text.startswith("["):
        return BasisMatrix.parse(text)
    body = "\n".join(ln.split("#", 1)[0] for ln in _read(text).splitlines())
    return BasisMatrix.parse(" ".join(body.split()))


def _order_for(nf, order_file):
    from .netfile import parse_order
    from .network import planar_spanning_tree_edge_order

    if order_file:
        return parse_order(_read(order_file), source=order_file)
    return nf.network.order or planar_spanning_tree_edge_order(nf.network)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_eval(args, out):
    from .netfile import load_network
    from .network import brute_force_value, pfaffian_value
    from .scalars import get_eps

    nf = load_network(args.net)
    vals = {}
    if args.method in ("brute", "both"):
        vals["brute"] = brute_force_value(nf.network)
        print(f"brute {_show(vals['brute'])}", file=out)
    if args.method in ("pfaffian", "both"):
        sigma = _order_for(nf, args.order_file)
        vals["pfaffian"] = pfaffian_value(nf.certified(), sigma)
        print(f"pfaffian {_show(vals['pfaffian'])}", file=out)
    if len(vals) == 2:
        diff = abs(complex(vals["brute"]) - complex(vals["pfaffian"]))
        print(f"diff {diff:.3e}", file=out)
        tol = max(get_eps(), 1e-6 * max(1.0, abs(complex(vals["brute"]))))
        return EXIT_OK if diff <= tol else EXIT_FAIL
    return EXIT_OK


def cmd_order(args, out):
    from .netfile import load_network
    from .network import planar_spanning_tree_edge_order

    nf = load_network(args.net)
    print(" ".join(map(str, planar_spanning_tree_edge_order(nf.network))), file=out)
    return EXIT_OK


def _fixed(items):
    fixed = {}
    for item in items or []:
        k, sep, m = item.partition("=")
        if not sep or not k.strip().isdigit():
            raise PfkError(f"--fix expects K=MATRIX, got {item!r}")
        fixed[int(k)] = _basis_arg(m)
    return fixed


def cmd_ideal(args, out):
    from .netfile import load_network
    from .polysys import circuit_ideal, cogate_ideal, export, gate_ideal
    from .tensor import parse_tensor

    mode = {"hom": "homogeneous", "het": "heterogeneous"}[args.mode]
    fixed = _fixed(args.fix)
    if args.gate:
        s = gate_ideal(parse_tensor(args.gate, kind="gate"), mode, fixed,
                       reduce_scalars=args.reduce_scalars)
    elif args.cogate:
        s = cogate_ideal(parse_tensor(args.cogate, kind="cogate"), mode, fixed,
                         reduce_scalars=args.reduce_scalars)
    else:
        net = load_network(args.net).network
        index = {e: k for k, e in enumerate(sorted(net.edges), 1)}
        tensors = [(t, {w: index[w] for w in t.wires}) for t in net.tensors.values()]
        s = circuit_ideal(tensors, mode, fixed, reduce_scalars=args.reduce_scalars)
    text = export(s, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"{len(s.variables)} variables, {len(s)} generators -> {args.output}",
              file=out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_gb(args, out):
    from .groebner import buchberger, is_trivial
    from .polysys import PolySystem, export, parse_neutral

    s = parse_neutral(_read(args.ideal), source=args.ideal)
    try:
        gb = buchberger(s, args.order, max_pairs=args.max_pairs, timeout=args.timeout)
        verdict, code = ("TRIVIAL" if is_trivial(gb) else "NONTRIVIAL"), EXIT_OK
    except BudgetExceeded as exc:
        gb, verdict, code = exc.partial, "BUDGET", EXIT_BUDGET
    basis = PolySystem(list(gb.order.variables), list(gb.generators),
                       ["basis"] * len(gb.generators))
    out.write(export(basis, "neutral"))
    print(f"basis size {len(gb.generators)}", file=out)
    print(verdict, file=out)
    return code


def cmd_certify(args, out):
    from .certify import SuiteLine, certificate_residual, run_paper_suite
    from .netfile import load_network
    from .scalars import get_eps

    if args.suite:
        lines = run_paper_suite()
    else:
        cn = load_network(args.net).certified()
        eps = get_eps()
        lines = []
        for name, t in cn.network.tensors.items():
            r = certificate_residual(t, cn.certificates[name])
            lines.append(SuiteLine(name, r <= eps, r))
    for ln in lines:
        print(ln.format(), file=out)
    failed = sum(not ln.ok for ln in lines)
    print(f"{len(lines) - failed}/{len(lines)} passed", file=out)
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_census(args, out):
    from .certify import census_under_fixed_bases
    from .tensor import format_tensor

    basis = _basis_arg(args.basis)
    bases = [basis] * args.arity
    if args.kind == "gate":
        found = census_under_fixed_bases(args.arity, gate_bases=bases, jobs=args.jobs)
    else:
        found = census_under_fixed_bases(args.arity, cogate_bases=bases, jobs=args.jobs)
    for t in found:
        print(format_tensor(t), file=out)
    print(f"{len(found)} {args.kind}s", file=out)
    return EXIT_OK


def cmd_decompose(args, out):
    from .certify import decomposition_report
    from .netfile import load_network, parse_certificate_file, parse_order
    from .tensor import parse_tensor

    target = parse_tensor(args.target, kind="gate")
    cert = parse_certificate_file(_read(args.cert), target.wires, source=args.cert)
    frag = load_network(args.fragment).certified()
    sigma = parse_order(_read(args.order_file), source=args.order_file)
    rep = decomposition_report(target, cert, frag, sigma)
    print(f"{'PASS' if rep.ok else 'FAIL'} decomposition {rep.residual:.3e}", file=out)
    if not rep.certificates_ok:
        print("a certificate of the target or the fragment does not verify", file=out)
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="pfk", description="Pfaffian circuit toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("eval", help="evaluate a closed network")
    q.add_argument("--method", choices=("brute", "pfaffian", "both"), default="both")
    q.add_argument("--order-file")
    q.add_argument("net")
    q.set_defaults(func=cmd_eval)

    q = sub.add_parser("order", help="print a planar spanning-tree edge order")
    q.add_argument("net")
    q.set_defaults(func=cmd_order)

    q = sub.add_parser("ideal", help="generate a change-of-basis polynomial system")
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--gate")
    src.add_argument("--cogate")
    src.add_argument("--net")
    q.add_argument("--mode", choices=("hom", "het"), required=True)
    q.add_argument("--fix", action="append", metavar="K=MATRIX")
    q.add_argument("--reduce-scalars", action="store_true")
    q.add_argument("--format", choices=("singular", "neutral"), default="neutral")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_ideal)

    q = sub.add_parser("gb", help="Groebner basis of a neutral-format system")
    q.add_argument("--order", choices=("degrevlex", "lex"), default="degrevlex")
    q.add_argument("--max-pairs", type=int)
    q.add_argument("--timeout", type=float)
    q.add_argument("ideal")
    q.set_defaults(func=cmd_gb)

    q = sub.add_parser("certify", help="verify certificates")
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--suite", choices=("paper",))
    src.add_argument("--net")
    q.set_defaults(func=cmd_certify)

    q = sub.add_parser("census", help="0/1 tensors Pfaffian under a fixed basis")
    q.add_argument("--arity", type=int, required=True)
    q.add_argument("--basis", required=True)
    q.add_argument("--kind", choices=("gate", "cogate"), default="gate")
    q.add_argument("--jobs", type=int, default=1)
    q.set_defaults(func=cmd_census)

    q = sub.add_parser("decompose", help="check a gate decomposition")
    q.add_argument("--target", required=True)
    q.add_argument("--cert", required=True)
    q.add_argument("--fragment", required=True)
    q.add_argument("--order-file", required=True)
    q.set_defaults(func=cmd_decompose)
    return p


def run(argv=None, out=None, err=None):
    """Run one command; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=err)
        return EXIT_BUDGET
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_USAGE
    except PfkError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc.filename}: {exc.strerror}", file=err)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
