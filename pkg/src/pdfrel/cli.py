"""Command-line front end.

Verbs: ``eval``, ``curve``, ``order``, ``verify``, ``info``, ``oracle`` and
``selftest``.  Results go to standard output as JSON (curves as CSV by
default).  Exit status: 0 on success, 2 for usage errors and violated
preconditions, 1 for numerical failures.  Non-finite floats are written as
the strings ``"Infinity"``, ``"-Infinity"`` and ``"NaN"`` so the output is
strict JSON.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .distributions import GridConfig, make_family
from .errors import NumericalError, PdfRelError, PreconditionError, PreconditionViolated
from .inverses import im_plus
from .pdf_related import PdfRelatedLaw, format_csv, k_curve, pdf_related_cdf
from .rearrange import (
    RearrangedLaw,
    level_measure,
    pdf_related_quantile_via_rearrangement,
    rearranged_cdf_by_quadrature,
)
from .residual import (
    cumulative_hazard_at,
    gt_layout,
    hazard_at,
    kt_curve,
    mean_residual_at,
    residual,
    residual_pdf_related_cdf,
    residual_pdf_related_inverse,
    shifted_pdf_related_pdf,
    shifted_pdf_related_point,
    gbar_clipped,
)

LAW_CHOICES = ("X", "K", "Kt", "Gt", "gt", "L", "Xstar")


class UsageError(PdfRelError):
    """Flag combination that parses but makes no sense."""


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return x
    return obj


def _emit(payload, out=None):
    text = json.dumps(_clean(payload), indent=2, sort_keys=False) + "\n"
    _write(text, out)


def _write(text, out):
    if out:
        with open(out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _grid(args):
    grid = GridConfig()
    if getattr(args, "grid_n", None):
        grid = replace(grid, n_points=args.grid_n)
    if getattr(args, "eps", None) is not None:
        grid = replace(grid, eps_boundary=args.eps)
    return grid


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise UsageError("missing required flag(s): " + ", ".join("--" + m for m in missing))


def _describe(d):
    rng = im_plus(d)
    return {
        "dist": d.spec_string(),
        "support": [d.support.lower, d.support.upper],
        "shape": d.mono.kind.value,
        "mode": d.mono.mode,
        "symmetric": d.mono.symmetric,
        "median": d.median,
        "im_plus": rng.to_dict(),
    }


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------


def cmd_eval(args):
    _need(args, "dist")
    d = make_family(args.dist)
    law = args.law or "X"
    out = {"law": law, "dist": d.spec_string()}
    if law == "X":
        if args.t is not None:
            r = residual(d, args.t)
            out.update(t=args.t, hazard=hazard_at(d, args.t),
                       cumulative_hazard=cumulative_hazard_at(d, args.t),
                       residual_shape=r.mono.kind.value, residual_mode=r.mono.mode)
            try:
                out["mean_residual"] = mean_residual_at(d, args.t)
            except NumericalError as exc:
                out["mean_residual"] = None
                out["mean_residual_error"] = str(exc)
            if args.p is not None:
                out.update(p=args.p, residual_quantile=r.quantile(args.p))
        elif args.p is not None:
            x = d.quantile(args.p)
            out.update(p=args.p, quantile=x, pdf=d.pdf(x), cdf=d.cdf(x))
        elif args.y_value is not None:
            x = args.y_value
            out.update(x=x, pdf=d.pdf(x), dpdf=d.dpdf(x), cdf=d.cdf(x), sf=d.sf(x))
        else:
            out.update(_describe(d))
    elif law == "K":
        if args.y_value is not None:
            out.update(y=args.y_value, cdf=pdf_related_cdf(d, args.y_value))
        elif args.p is not None:
            out.update(p=args.p, quantile=PdfRelatedLaw(d).quantile(args.p))
            if not d.flat:
                out["quantile_via_rearrangement"] = pdf_related_quantile_via_rearrangement(d, args.p)
        else:
            raise UsageError("law K needs --y-value or --p")
    elif law == "Kt":
        _need(args, "t")
        out["t"] = args.t
        if args.y_value is not None:
            out.update(y=args.y_value, cdf=residual_pdf_related_cdf(d, args.t, args.y_value))
        elif args.p is not None:
            out.update(p=args.p, y=residual_pdf_related_inverse(d, args.t, args.p))
        else:
            raise UsageError("law Kt needs --y-value or --p")
    elif law in ("Gt", "gt"):
        _need(args, "t", "y_value")
        out.update(t=args.t, y=args.y_value)
        if law == "Gt":
            pt = shifted_pdf_related_point(d, args.t, args.y_value)
            out.update(survival=pt.survival, case_tag=pt.case_tag)
        else:
            out.update(density=shifted_pdf_related_pdf(d, args.t, args.y_value, strict=args.strict),
                       case_tag=gt_layout(d, args.t).case_tag)
    elif law == "L":
        from .info import ic_cdf

        _need(args, "y_value")
        out.update(x=args.y_value, cdf=ic_cdf(d, args.y_value))
    else:  # Xstar
        law_obj = RearrangedLaw(d)
        if args.y_value is not None:
            x = args.y_value
            out.update(x=x, fstar=law_obj.fstar(x), cdf=law_obj.cdf(x),
                       cdf_by_quadrature=rearranged_cdf_by_quadrature(d, x),
                       level_measure_at_fstar=level_measure(d, law_obj.fstar(x)))
        elif args.p is not None:
            out.update(p=args.p, quantile=law_obj.quantile(args.p))
        else:
            out.update(support_length=law_obj.support_len, route=law_obj.route)
    _emit(out, args.out)


def _curve_data(d, law, t, n):
    if law == "K":
        y, k = k_curve(d, n)
        return ("y", "K"), (y, k)
    if law == "Kt":
        if t is None:
            raise UsageError("law Kt needs --t")
        y, k = kt_curve(d, t, n)
        return ("y", "Kt"), (y, k)
    if law in ("Gt", "gt"):
        if t is None:
            raise UsageError(f"law {law} needs --t")
        layout = gt_layout(d, t)
        lo, hi = layout.branches[0].y_lo, layout.branches[-1].y_hi
        y = np.linspace(lo, hi, n + 2)[1:-1]
        if law == "Gt":
            return ("y", "Gbar_t"), (y, gbar_clipped(d, t, y, layout))
        return ("y", "g_t"), (y, np.array([shifted_pdf_related_pdf(d, t, v) for v in y]))
    if law == "L":
        from .info import ic_cdf

        q = PdfRelatedLaw(d).quantile(np.array([1e-6, 1 - 1e-6]))
        x = np.linspace(-math.log(q[1]), -math.log(q[0]), n)
        return ("x", "L"), (x, ic_cdf(d, x))
    if law == "Xstar":
        r = RearrangedLaw(d)
        top = r.support_len if math.isfinite(r.support_len) else float(r.quantile(1 - 1e-6))
        x = np.linspace(0.0, top, n + 1)[1:]
        return ("x", "fstar", "cdf"), (x, r.fstar(x), r.cdf(x))
    if law == "X":
        p = GridConfig(n_points=n).probabilities()
        x = d.quantile(p)
        return ("x", "pdf", "cdf"), (x, d.pdf(x), d.cdf(x))
    raise UsageError(f"unknown law {law!r}")


def cmd_curve(args):
    _need(args, "law", "dist")
    d = make_family(args.dist)
    header, cols = _curve_data(d, args.law, args.t, args.grid_n or GridConfig().n_points)
    if args.format == "json":
        _emit({"law": args.law, "dist": d.spec_string(), "t": args.t,
               "columns": {h: c for h, c in zip(header, cols)}}, args.out)
    else:
        _write(format_csv(header, cols), args.out)


def cmd_order(args):
    from .orders import check_mapping_conditions, check_order

    _need(args, "kind", "x", "y")
    x, y = make_family(args.x), make_family(args.y)
    grid = _grid(args)
    verdict = check_order(args.kind, x, y, grid)
    out = verdict.to_dict()
    out.update(x=x.spec_string(), y=y.spec_string())
    if args.kind in ("st", "disp"):
        out["mapping"] = check_mapping_conditions(x, y, grid).to_dict()
    _emit(out, args.out)


def cmd_verify(args):
    from .orders import verify_theorem

    _need(args, "theorem")
    if args.x is not None or args.y is not None:
        _need(args, "x", "y")
        inputs = (make_family(args.x), make_family(args.y))
    else:
        _need(args, "dist")
        inputs = (make_family(args.dist),)
    params = {}
    if args.t is not None:
        params["t"] = args.t
    if args.a is not None:
        params["a"] = args.a
    if args.b is not None:
        params["b"] = args.b
    rep = verify_theorem(args.theorem, inputs, _grid(args), **params)
    out = {
        "theorem": rep.name,
        "kind": rep.kind,
        "premise": bool(rep.premise.get("holds")),
        "conclusion": bool(rep.conclusion.get("holds")),
        "implication_respected": rep.implication_respected,
        "premise_detail": rep.premise,
        "conclusion_detail": rep.conclusion,
    }
    if "V" in rep.conclusion and "t" in rep.conclusion:
        out["V_t"] = rep.conclusion["V"]
    _emit(out, args.out)


def cmd_info(args):
    from .info import info_report, residual_entropy, residual_varentropy

    _need(args, "dist")
    d = make_family(args.dist)
    rep = info_report(d, args.method)
    out = {"dist": d.spec_string(), **rep.to_dict()}
    if args.t is not None:
        out["residual"] = {"t": args.t, "H": residual_entropy(d, args.t),
                           "V": residual_varentropy(d, args.t)}
    _emit(out, args.out)


def cmd_oracle(args):
    from .oracle import oracle_check

    _need(args, "dist")
    d = make_family(args.dist)
    law = args.law or "K"
    if law not in ("X", "K", "Kt", "Gt", "L"):
        raise UsageError(f"the oracle has no sampler for law {law!r}")
    _emit(oracle_check(d, law, args.n, args.seed, args.t), args.out)


def cmd_selftest(args):
    from .acceptance import run_all

    chosen = set(args.only) if args.only else None
    results = run_all(chosen)
    for r in results:
        sys.stderr.write(r.line() + "\n")
    _emit({"all_passed": all(r.passed for r in results),
           "criteria": [{"number": r.number, "title": r.title, "passed": r.passed,
                         "seconds": r.seconds} for r in results]}, args.out)
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stdout.write(json.dumps({"error": {"type": "UsageError", "message": message}}) + "\n")
        raise SystemExit(2)


def build_parser():
    parser = _Parser(prog="pdfrel", description="Pdf-related distributions, residual lifetimes, "
                     "stochastic orders and varentropy.")
    parser.add_argument("--version", action="version", version=f"pdfrel {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(p, dist=True):
        if dist:
            p.add_argument("--dist", help="distribution, e.g. 'weibull:k=2,lambda=1'")
        p.add_argument("--t", type=float, help="age for residual quantities")
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--grid-n", type=int, help="grid size (default 999 or $PDFREL_GRID_N)")
        p.add_argument("--eps", type=float, help="grid boundary trim (default 1e-3)")
        p.add_argument("--format", choices=("json", "csv"), default=None)

    p = sub.add_parser("eval", help="evaluate one quantity")
    common(p)
    p.add_argument("--law", choices=LAW_CHOICES)
    p.add_argument("--p", type=float, help="probability level")
    p.add_argument("--y-value", type=float, help="point of evaluation (density value or x)")
    p.add_argument("--strict", action="store_true", help="g_t: refuse branch boundary points")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("curve", help="tabulate a cdf or density on a grid")
    common(p)
    p.add_argument("--law", choices=LAW_CHOICES)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("order", help="decide a stochastic order on the probability grid")
    common(p, dist=False)
    p.add_argument("--kind", choices=("st", "disp", "convex", "star", "kurtosis"))
    p.add_argument("--x")
    p.add_argument("--y")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("verify", help="check one instance of a named result")
    common(p)
    p.add_argument("--theorem")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--a", type=float, help="scale for affine_star_equality")
    p.add_argument("--b", type=float, help="shift for affine_star_equality")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("info", help="entropy and varentropy")
    common(p)
    p.add_argument("--method", choices=("auto", "quadrature", "closed_form"), default="auto")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("oracle", help="Monte Carlo KS check of an analytic law")
    common(p)
    p.add_argument("--law", choices=LAW_CHOICES)
    p.add_argument("--n", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    p.add_argument("--out")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "format", None) == "csv" and args.verb != "curve":
        parser.error("--format csv is only available for 'curve'")
    if getattr(args, "grid_n", None) is not None and args.grid_n < 2:
        parser.error("--grid-n must be >= 2")
    try:
        status = args.func(args)
    except (PreconditionError, UsageError) as exc:
        err = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, PreconditionViolated) and exc.precondition:
            err["precondition"] = exc.precondition
        _emit({"error": err})
        return 2
    except (NumericalError, ArithmeticError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return 1
    return int(status or 0)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
