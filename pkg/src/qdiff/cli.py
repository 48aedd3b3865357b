"""Command-line front end.

Exit status: 0 when the command succeeds and every check passes, 1 when a
check fails (the report is still printed), 2 on usage or input errors.
"""

import argparse
import sys
from fractions import Fraction

from . import algebra, catalog, diffop, dual, qsym
from .errors import ParseError, QDiffError
from .report import Report
from .tensor import parse_tensor

SUITES = ("stars", "braid", "closed-forms", "paths", "opposite-relations", "lifts", "all")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _q_value(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--q-at expects a rational number, got {text!r}") from None


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--max-degree", type=int, default=4)
    common.add_argument("--scheme", choices=("f1", "f2"), default="f2")
    common.add_argument("--q-at", type=_q_value, default=None, help="print coefficients evaluated at this q")
    common.add_argument("--force", action="store_true", help="ignore the degree budget")

    parser = _Parser(prog="qdiff", description="q-symmetrization, star products and quantized derivatives")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = verb("check", "run the scaling and overlap checks on an algebra")
    p.add_argument("qalg")
    p = verb("normal-form", "reduce a tensor to sorted words")
    p.add_argument("qalg")
    p.add_argument("expr")
    p = verb("qsym", "q-symmetrize a tensor")
    p.add_argument("qalg")
    p.add_argument("expr")
    p.add_argument("--method", choices=("normal_form", "iterate"), default="normal_form")
    p = verb("pair", "pair a dual element with a tensor")
    p.add_argument("qalg")
    p.add_argument("dual")
    p.add_argument("expr")
    p.add_argument("--symmetrized", action="store_true", help="use n! <w, P(t)> instead of <w, t>")
    p = verb("star", "star product of two polynomials")
    p.add_argument("qalg")
    p.add_argument("f")
    p.add_argument("g")
    p = verb("dual-relations", "q-commutation exponents of the dual generators")
    p.add_argument("qalg")
    p = verb("derive", "quantized partial derivative of a polynomial")
    p.add_argument("qalg")
    p.add_argument("generator", type=int)
    p.add_argument("poly", nargs="?")
    p.add_argument("--export", type=int, metavar="DEGREE", help="print the matrix on this degree instead")
    p = verb("wave-check", "wave operator identities on the 2 x 2 quantum matrices")
    p.add_argument("qalg")
    p = verb("poisson", "Poisson bracket of two polynomials, or the coordinate checks")
    p.add_argument("qalg")
    p.add_argument("f", nargs="?")
    p.add_argument("g", nargs="?")
    p = verb("path-op", "path formula for the derivative along Z_{i,j}")
    p.add_argument("qalg")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("--printed", action="store_true", help="use the printed index sets and exponents")
    p = verb("lift-check", "covariant lift identity of the fourth derivative")
    p.add_argument("qalg")
    p.add_argument("version", choices=("AF", "BG"))
    p.add_argument("poly", nargs="?")
    p = verb("verify", "run a verification suite")
    p.add_argument("qalg")
    p.add_argument("--suite", choices=SUITES, default="all")
    p = verb("catalog", "print a built-in algebra in .qalg format")
    p.add_argument("family")
    p.add_argument("param", nargs="?")
    p = verb("projector", "export the projector matrix of one degree")
    p.add_argument("qalg")
    p.add_argument("degree", type=int)
    p.add_argument("--method", choices=("normal_form", "iterate"), default="normal_form")
    return parser


# -- formatting -----------------------------------------------------------


def _fmt_coeff(c, q_at):
    return str(c) if q_at is None else str(c.eval_at(q_at))


def _fmt_tensor(t, q_at):
    if q_at is None:
        return str(t)
    if not t.terms:
        return "0"
    keys = sorted(t.terms, key=lambda w: (len(w), w))
    return " + ".join(f"{t.terms[w].eval_at(q_at)} * {t._format_word(w)}" for w in keys)


def _fmt_poly(f, q_at):
    if q_at is None:
        return str(f)
    if not f.terms:
        return "0"
    return " + ".join(f"{f.terms[b].eval_at(q_at)} * {dual.format_monomial(b)}" for b in sorted(f.terms))


def _emit(out, report):
    out.write(str(report) + "\n")
    return 0 if report.passed else 1


# -- verbs ----------------------------------------------------------------


def _cmd_check(spec, args, out):
    merged = Report(f"checks of {spec.name}")
    merged.extend(algebra.dcp_check(spec))
    merged.extend(algebra.diamond_check(spec))
    return _emit(out, merged)


def _cmd_normal_form(spec, args, out):
    t = parse_tensor(args.expr, spec.n)
    out.write(_fmt_tensor(algebra.normal_form(spec, t), args.q_at) + "\n")
    return 0


def _cmd_qsym(spec, args, out):
    t = parse_tensor(args.expr, spec.n)
    for n in t.degrees():
        qsym.check_budget(spec, n, args.force)
    out.write(_fmt_tensor(qsym.q_symmetrize(spec, t, method=args.method), args.q_at) + "\n")
    return 0


def _cmd_pair(spec, args, out):
    w = dual.parse_dual(args.dual, spec.n)
    t = parse_tensor(args.expr, spec.n)
    value = dual.pair_symmetrized(spec, w, t) if args.symmetrized else dual.pair(w, t)
    out.write(_fmt_coeff(value, args.q_at) + "\n")
    return 0


def _cmd_star(spec, args, out):
    f = dual.parse_poly(args.f, spec.n)
    g = dual.parse_poly(args.g, spec.n)
    _budget_poly(spec, max(f.degrees(), default=0) + max(g.degrees(), default=0), args)
    out.write(_fmt_poly(dual.star_unlabeled(spec, f, g, args.scheme), args.q_at) + "\n")
    return 0


def _budget_poly(spec, degree, args):
    if degree:
        qsym.check_budget(spec, degree, args.force)


def _cmd_dual_relations(spec, args, out):
    for i, j, c in dual.dual_relations(spec):
        out.write(f"X{i}*.X{j}* = 1q^{c} * X{j}*.X{i}*\n")
    return 0


def _cmd_derive(spec, args, out):
    op = diffop.derivative_operator(spec, args.generator, scheme=args.scheme)
    if args.export is not None:
        qsym.check_budget(spec, args.export, args.force)
        out.write(op.export(args.export))
        return 0
    if args.poly is None:
        raise UsageError("derive needs a polynomial or --export DEGREE")
    f = dual.parse_poly(args.poly, spec.n)
    _budget_poly(spec, max(f.degrees(), default=0), args)
    out.write(_fmt_poly(op.apply(f), args.q_at) + "\n")
    return 0


def _cmd_wave_check(spec, args, out):
    return _emit(out, diffop.wave_operator_check(spec, args.max_degree))


def _cmd_poisson(spec, args, out):
    if args.f is None:
        return _emit(out, diffop.poisson_check(spec, args.scheme))
    if args.g is None:
        raise UsageError("poisson needs two polynomials or none")
    f = dual.parse_poly(args.f, spec.n)
    g = dual.parse_poly(args.g, spec.n)
    out.write(str(diffop.poisson_bracket(spec, f, g, args.scheme)) + "\n")
    return 0


def _cmd_path_op(spec, args, out):
    n = diffop._matrix_size(spec)
    if n is None:
        raise QDiffError(f"{spec.name} is not a quantum matrix algebra in row-major order")
    if not (1 <= args.i <= n and 1 <= args.j <= n):
        raise UsageError(f"position ({args.i},{args.j}) outside a {n} x {n} matrix")
    struct = diffop.path_structure(n, args.i, args.j, literal=args.printed)
    out.write(str(struct) + "\n")
    op = diffop.derivative_operator(spec, catalog.aiii_index(args.i, args.j, n))
    report = Report(f"path formula for ({args.i},{args.j}) against duality")
    bad = []
    for d in range(args.max_degree + 1):
        for beta in algebra.pbw_basis(spec, d):
            f = dual.PolyRep.monomial(beta)
            if struct.apply(f) != op.apply(f):
                bad.append(beta)
    report.add(f"all monomials of degree <= {args.max_degree}", not bad, diffop._few(bad, 3))
    return _emit(out, report)


def _cmd_lift_check(spec, args, out):
    if args.poly is not None:
        f = dual.parse_poly(args.poly, spec.n)
        return _emit(out, diffop.covariant_lift_check(spec, args.version, f))
    return _emit(out, _lift_suite(spec, args.max_degree, (args.version,)))


def _lift_suite(spec, max_degree, versions=("AF", "BG")):
    report = Report(f"covariant lifts of {spec.name}, monomials of degree <= {max_degree}")
    for version in versions:
        bad, total = [], 0
        for d in range(max_degree + 1):
            for beta in algebra.pbw_basis(spec, d):
                total += 1
                if not diffop.covariant_lift_check(spec, version, dual.PolyRep.monomial(beta)).passed:
                    bad.append(beta)
        report.add(f"{version} identity holds componentwise on {total} monomials", not bad, diffop._few(bad, 3))
    return report


def _cmd_verify(spec, args, out):
    suites = SUITES[:-1] if args.suite == "all" else (args.suite,)
    status = 0
    for suite in suites:
        report = _run_suite(spec, suite, args)
        if report is None:
            out.write(f"== {suite}\nSKIP {suite}: needs the 2 x 2 or n x n quantum matrices\n")
            continue
        status = max(status, _emit(out, report))
    return status


def _run_suite(spec, suite, args):
    d = args.max_degree
    n_mat = diffop._matrix_size(spec)
    if suite == "stars":
        report = Report(f"sandwich identities of {spec.name} up to degree {d}")
        for n in range(1, d + 1):
            qsym.check_budget(spec, n, args.force)
            for r in range(n + 1):
                for k in range(n - r + 1):
                    report.extend(qsym.star_identities_check(spec, n, r, k, n - r - k))
        return report
    if suite == "braid":
        report = Report(f"swap representation of {spec.name} up to degree {d}")
        for n in range(2, d + 1):
            qsym.check_budget(spec, n, args.force)
            report.extend(qsym.braid_check(spec, n))
            report.extend(qsym.scheme_independence_check(spec, n))
        return report
    if suite == "closed-forms":
        return diffop.closed_form_check(spec, d) if n_mat == 2 else None
    if suite == "paths":
        return diffop.path_check(spec, d) if n_mat is not None else None
    if suite == "opposite-relations":
        return diffop.opposite_relations_check(spec, d) if n_mat == 2 else None
    if suite == "lifts":
        return _lift_suite(spec, d) if n_mat == 2 else None
    raise UsageError(f"unknown suite {suite}")


def _cmd_catalog(args, out):
    spec = catalog.make_family(args.family, args.param)
    out.write(algebra.format_qalg(spec))
    report = spec.diamond_report
    if report is not None and not report.passed:
        sys.stderr.write(f"warning: {spec.name} fails {len(report.failures)} overlap checks\n")
    return 0


def _cmd_projector(spec, args, out):
    proj = qsym.projector_matrix(spec, args.degree, method=args.method, force=args.force)
    out.write(proj.export())
    return 0


COMMANDS = {
    "check": _cmd_check,
    "normal-form": _cmd_normal_form,
    "qsym": _cmd_qsym,
    "pair": _cmd_pair,
    "star": _cmd_star,
    "dual-relations": _cmd_dual_relations,
    "derive": _cmd_derive,
    "wave-check": _cmd_wave_check,
    "poisson": _cmd_poisson,
    "path-op": _cmd_path_op,
    "lift-check": _cmd_lift_check,
    "verify": _cmd_verify,
    "projector": _cmd_projector,
}


def run(argv, out=None, err=None):
    """Run one command; returns the exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.max_degree < 0:
            raise UsageError("--max-degree must be nonnegative")
        if args.verb == "catalog":
            return _cmd_catalog(args, out)
        spec = algebra.load_qalg(args.qalg)
        return COMMANDS[args.verb](spec, args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return 2
    except QDiffError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (OSError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 2


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
