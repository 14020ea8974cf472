"""Command-line front end: ``weylrank {commute,solveq,curve,ode,verify,eval}``.

Exit codes: 0 success (or a completed finding), 1 verification failure,
2 solver failure, 3 usage error. Parameters take a rational value or the
literal ``symbolic``. If ``--output`` is not given and ``WEYLRANK_OUTPUT_DIR``
is set, the output is also written to a file in that directory.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog
from .rank2 import (
    CurveError,
    OperatorData,
    QSolveError,
    eigen_ode,
    q_residual,
    solve_q,
    spectral_curve,
)
from .ring import ParamRing, parse_xpoly
from .specfun import HeunParams, bessel_j, bessel_y, gamma, heun_c
from .jet import Jet
from . import verify as verify_mod

EXIT_OK, EXIT_FAIL, EXIT_SOLVER, EXIT_USAGE = 0, 1, 2, 3
OUTPUT_ENV = "WEYLRANK_OUTPUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _param(text: str):
    if text == catalog.SYMBOLIC:
        return text
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational or 'symbolic', got {text!r}") from None


def _number(text: str) -> complex:
    try:
        return complex(Fraction(text))
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None


def _family_args(p: argparse.ArgumentParser):
    p.add_argument("family", choices=["oganesyan", "mironov", "custom"])
    p.add_argument("--g", type=int, default=1, help="genus")
    p.add_argument("--A", type=_param, default=catalog.SYMBOLIC)
    p.add_argument("--B", type=_param, default=Fraction(0))
    p.add_argument("--variant", choices=["x4", "x2"], default="x4", help="oganesyan: B x^4 or B x^2")
    for k in range(4):
        p.add_argument(f"--A{k}", type=_param, default=catalog.SYMBOLIC)
    p.add_argument("--V", help="custom: polynomial text for V(x)")
    p.add_argument("--W", help="custom: polynomial text for W(x)")


def _common(p: argparse.ArgumentParser, default_format="text"):
    p.add_argument("--format", choices=["text", "json"], default=default_format)
    p.add_argument("--output", help="also write the output to this file")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="weylrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("commute", help="check a Dixmier pair commutes and satisfies M^2 = L^3 - alpha")
    p.add_argument("family", choices=["dixmier2", "dixmier3"])
    p.add_argument("--alpha", type=_param, default=catalog.SYMBOLIC)
    p.add_argument("--perturb", action="store_true", help="add x to M")
    p.add_argument("--as-printed", action="store_true", help="dixmier2: use the 3x(x^2+alpha) term")
    _common(p)

    for name, help_ in (
        ("solveq", "solve for the polynomial Q of genus g"),
        ("curve", "spectral curve w^2 = P(z)/4"),
        ("ode", "second-order equation for the common eigenfunctions"),
    ):
        p = sub.add_parser(name, help=help_)
        _family_args(p)
        p.add_argument("--deg-bound", type=int, default=None)
        p.add_argument("--method", choices=["exact", "interpolate"], default="exact")
        if name == "ode":
            p.add_argument("--z", type=_param, default=catalog.SYMBOLIC)
            p.add_argument("--w", type=_param, default=catalog.SYMBOLIC)
        _common(p)

    p = sub.add_parser("verify", help="numerically verify a candidate eigenfunction")
    p.add_argument("candidate", choices=list(verify_mod.CANDIDATES))
    p.add_argument("--A", type=_number, default=1)
    p.add_argument("--alpha", type=_param, default=Fraction(1, 8), help="bessel-heun-identity order")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--z-sign", choices=["+", "-"], default="+")
    p.add_argument("--relation", choices=["ode", "eigen"], default="ode")
    p.add_argument("--order", type=int, default=6, help="jet order")
    _common(p, default_format="json")

    p = sub.add_parser("eval", help="evaluate a special function and its derivatives")
    p.add_argument("function", choices=["besselj", "bessely", "heunc", "gamma"])
    p.add_argument("--nu", type=_param, default=Fraction(0), help="Bessel order")
    p.add_argument("--params", default="0,0,0,0,0", help="heunc: alpha,beta,gamma,delta,eta")
    p.add_argument("--x", type=_number, required=True)
    p.add_argument("--K", type=int, default=0, help="number of derivatives")
    _common(p)
    return parser


def _family_data(args) -> OperatorData:
    if args.g < 1:
        raise UsageError("--g must be >= 1")
    if args.family == "oganesyan":
        return catalog.oganesyan_data(args.A, args.B, args.g, variant=args.variant)
    if args.family == "mironov":
        return catalog.mironov_data(args.A0, args.A1, args.A2, args.A3, args.g)
    if args.V is None or args.W is None:
        raise UsageError("custom family needs --V and --W")
    names = sorted({n for t in (args.V, args.W) for n in re.findall(r"[A-Za-z_][A-Za-z_0-9]*", t)} - {"x"})
    ring = ParamRing(tuple(names))
    return OperatorData(parse_xpoly(args.V, ring), parse_xpoly(args.W, ring))


def _params_json(args) -> dict:
    keys = {"oganesyan": ("A", "B"), "mironov": ("A0", "A1", "A2", "A3"), "custom": ("V", "W")}[args.family]
    out = {"g": args.g}
    for k in keys:
        v = getattr(args, k)
        out[k] = str(v)
    if args.family == "oganesyan":
        out["variant"] = args.variant
    return out


def _fmt_c(v: complex) -> str:
    v = complex(v)
    return f"{v.real:.14e} {v.imag:+.14e}i"


def _cmd_commute(args):
    if args.as_printed and args.family != "dixmier2":
        raise UsageError("--as-printed only applies to dixmier2")
    if args.family == "dixmier2":
        L, M = catalog.dixmier_rank2(args.alpha, as_printed=args.as_printed)
    else:
        L, M = catalog.dixmier_rank3(args.alpha)
    ring = L.ring
    alpha = ring.gen("alpha") if args.alpha == catalog.SYMBOLIC else ring.const(args.alpha)
    if args.perturb:
        from .ring import XPoly
        from .weyl import DiffOp

        M = M + DiffOp.mult(XPoly.x(ring))
    comm = L * M - M * L
    ident = catalog.burchnall_chaundy_residual(L, M, alpha)
    ok = comm.is_zero() and ident.is_zero()
    payload = {
        "family": args.family,
        "alpha": str(args.alpha),
        "L": str(L),
        "M": str(M),
        "commutator": str(comm),
        "identity": "M^2 - L^3 + alpha",
        "identity_residual": str(ident),
        "commutes": comm.is_zero(),
    }
    text = "\n".join(
        [
            f"L = {L}",
            f"M = {M}",
            f"commutator: {comm}",
            f"M^2 - L^3 + alpha: {ident}",
        ]
    )
    return (EXIT_OK if ok else EXIT_FAIL), text, payload


def _cmd_solveq(args):
    data = _family_data(args)
    Q = solve_q(data, args.g, args.deg_bound, method=args.method)
    res = q_residual(data, Q)
    lines = [f"Q = {Q}", f"residual: {res}"]
    payload = {
        "family": args.family,
        "parameters": _params_json(args),
        "Q": str(Q),
        "a": [str(a) for a in Q.a],
        "residual": str(res),
    }
    if Q.g:
        content, prim = Q.a[-1].primitive()
        lines.append(f"Q(z=0) = ({content})*({prim})")
        payload["Q_at_z0"] = {"content": str(content), "primitive": str(prim)}
    return (EXIT_OK if res.is_zero() else EXIT_SOLVER), "\n".join(lines), payload


def _cmd_curve(args):
    data = _family_data(args)
    Q = solve_q(data, args.g, args.deg_bound, method=args.method)
    curve = spectral_curve(data, Q)
    payload = {"family": args.family, "parameters": _params_json(args), "Q": str(Q), "curve": curve.to_json(), "w2": str(curve)}
    return EXIT_OK, str(curve), payload


def _cmd_ode(args):
    data = _family_data(args)
    Q = solve_q(data, args.g, args.deg_bound, method=args.method)
    ode = eigen_ode(data, Q)
    values = {k: getattr(args, k) for k in ("z", "w") if getattr(args, k) != catalog.SYMBOLIC}
    if len(values) == 2:
        curve = spectral_curve(data, Q)
        defect = sum((c * values["z"] ** k for k, c in enumerate(curve.p)), data.ring.zero) - 4 * values["w"] ** 2
        if not defect.is_zero():
            raise UsageError(f"(z, w) = ({values['z']}, {values['w']}) is off the curve: P(z) - 4w^2 = {defect}")
    if values:
        ode = ode.subs(values)
    p2, p1, p0 = ode.cleared()
    text = "\n".join(
        [
            f"chi1 = ({ode.chi1_num})/({ode.chi1_den})",
            f"chi0 = ({ode.chi0_num})/({ode.chi0_den})",
            f"({p2})*psi'' + ({p1})*psi' + ({p0})*psi = 0",
        ]
    )
    payload = {"family": args.family, "parameters": _params_json(args), "Q": str(Q), "ode": ode.to_json()}
    if values:
        payload["ode"]["substituted"] = {k: str(v) for k, v in values.items()}
    return EXIT_OK, text, payload


def _cmd_verify(args):
    if args.tol is not None and not args.tol > 0:
        raise UsageError("--tol must be positive")
    rep = verify_mod.run_candidate(
        args.candidate,
        A=args.A,
        tol=args.tol,
        seed=args.seed,
        count=args.count,
        z_sign=1 if args.z_sign == "+" else -1,
        order=args.order,
        relation=args.relation,
        alpha=args.alpha,
    )
    payload = rep.to_json()
    if args.candidate == "bessel-heun-identity":
        payload["finding"] = "identity holds" if rep.passed else "identity fails at the stated tolerance"
        return EXIT_OK, rep.summary(), payload
    return (EXIT_OK if rep.passed else EXIT_FAIL), rep.summary(), payload


def _cmd_eval(args):
    K = args.K
    if K < 0:
        raise UsageError("--K must be >= 0")
    t = Jet.variable(args.x, K)
    if args.function == "besselj":
        jet, label = bessel_j(args.nu, t), f"J_{args.nu}"
    elif args.function == "bessely":
        jet, label = bessel_y(args.nu, t), f"Y_{args.nu}"
    elif args.function == "heunc":
        vals = []
        for item in args.params.split(","):
            item = item.strip()
            try:
                vals.append(Fraction(item))
            except ValueError:
                vals.append(_number(item))
        if len(vals) != 5:
            raise UsageError("--params needs five comma-separated values")
        jet, label = heun_c(HeunParams(*vals), t), f"CH({args.params})"
    else:
        if K:
            raise UsageError("gamma prints the value only (--K 0)")
        x = args.x if args.x.imag else args.x.real
        jet, label = Jet.constant(gamma(x), args.x, 0), "Gamma"
    derivs = jet.derivatives()
    lines = [f"{label} at x = {_fmt_c(args.x)}"] + [f"d^{k}: {_fmt_c(d)}" for k, d in enumerate(derivs)]
    payload = {
        "function": label,
        "x": verify_mod._num(args.x),
        "derivatives": [[float(f"{d.real:.15g}"), float(f"{d.imag:.15g}")] for d in derivs],
    }
    return EXIT_OK, "\n".join(lines), payload


_COMMANDS = {
    "commute": _cmd_commute,
    "solveq": _cmd_solveq,
    "curve": _cmd_curve,
    "ode": _cmd_ode,
    "verify": _cmd_verify,
    "eval": _cmd_eval,
}


def _target(args) -> str:
    for attr in ("family", "candidate", "function"):
        if hasattr(args, attr):
            return getattr(args, attr)
    return "out"


def _emit(args, text: str, payload: dict, stdout):
    out = json.dumps(payload, indent=2, sort_keys=False) if args.format == "json" else text
    print(out, file=stdout)
    path = args.output
    if path is None and os.environ.get(OUTPUT_ENV):
        ext = "json" if args.format == "json" else "txt"
        path = Path(os.environ[OUTPUT_ENV]) / f"{args.command}-{_target(args)}.{ext}"
    if path is not None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(out + "\n", encoding="utf-8")


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as err:  # --help
        return int(err.code or 0)
    try:
        code, text, payload = _COMMANDS[args.command](args)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (QSolveError, CurveError) as err:
        payload = {"error": str(err)}
        cert = getattr(err, "certificate", None)
        if cert:
            (j, k), residual = cert
            payload["certificate"] = {"x_power": j, "z_power": k, "residual": str(residual)}
        if args.format == "json":
            print(json.dumps(payload, indent=2), file=stdout)
        print(f"solver failure: {err}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    _emit(args, text, payload, stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
