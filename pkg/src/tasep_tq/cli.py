"""Command-line front end: ``tasep-tq <command> ...`` or ``python3 -m tasep_tq``.

Every command prints a JSON document whose ``runspec`` field echoes the fully
resolved arguments. Rationals are accepted only as ``p/q`` strings. Exit codes:
0 success, 2 invalid input, 3 inconsistent exact system, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import charges as ch
from . import mc, numerics, operators, tq
from .algebra import Poly, as_rational, encode, encode_rational, series_compose, series_reversion
from .errors import PreconditionError, SizeLimitError, TasepError

WORKERS_ENV = "TASEP_TQ_WORKERS"


class _ArgError(PreconditionError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except PreconditionError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _complex_json(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


# ---------------------------------------------------------------------------
# commands; each returns a JSON-serialisable dict (or a str for raw CSV)

def cmd_solve(args):
    params = operators.ModelParams(args.L, args.a, args.b)
    flavors = ["original", "equivalent"] if args.flavor == "both" else [args.flavor]
    out = {"denominator": encode(params.denominator())}
    for fl in flavors:
        solver = tq.solve_tq_original if fl == "original" else tq.solve_tq_equivalent
        sol = solver(params, args.order)
        out[fl] = {
            "lambda_numerator": encode(sol.lam),
            "q": encode(sol.q),
            "lambda_of_mu": encode(tq.lambda_of_mu(sol)),
        }
    return out


def _equiv_job(job):
    L, a, b, order = job
    rep = tq.check_equivalence(operators.ModelParams(L, a, b), order)
    return {"L": L, **rep.to_json()}


def cmd_equiv_check(args):
    jobs = [(L, args.a, args.b, args.order) for L in args.L]
    workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_equiv_job, jobs))
    else:
        reports = [_equiv_job(j) for j in jobs]
    return {"agreement": all(r["agreement"] for r in reports), "reports": reports}


def _series_value(series, mu: Fraction) -> float:
    return float(sum(c * mu**j for j, c in enumerate(series)))


def cmd_lambda(args):
    if args.via == "perron":
        if args.mu is None:
            raise PreconditionError("--via perron needs --mu")
        g = Fraction(math.exp(args.mu))
        m = operators.markov_matrix(operators.ModelParams(args.L, args.a, args.b, g))
        return {"value": numerics.perron_eigenvalue(m)}
    if args.via == "tq":
        sol = tq.solve_tq_original(operators.ModelParams(args.L, args.a, args.b), args.order)
        series = tq.lambda_of_mu(sol)
    else:
        series = ch.lambda_mu_composed(args.L, args.a, args.b, args.order)
    out = {"series": encode(series)}
    if args.mu is not None:
        out["value"] = _series_value(series, args.mu)
    return out


def cmd_charges(args):
    out = {}
    closed_ok = args.a == 0 and args.b == 0 and 1 <= args.r <= 2 * args.L + 1
    method = args.method
    if method == "auto":
        method = "closed" if closed_ok else "residue"
    if method == "closed":
        if args.a != 0 or args.b != 0:
            raise PreconditionError("closed forms need a = b = 0")
        cs = ch.i_r_closed(args.L, args.r, args.order)
        mu_b = ch.mu_closed(args.L, args.order)
    else:
        ctx = ch.make_context(args.L, args.a, args.b, args.order)
        cs = ch.residue_series(ctx, args.r)
        mu_b = ch.mu_constraint_series(ctx)
    out["charge_b_series"] = encode(cs.terms)
    out["provenance"] = cs.provenance
    out["mu_b_series"] = encode(mu_b)
    if args.compose:
        out["charge_mu_series"] = encode(series_compose(cs.terms, series_reversion(mu_b)))
    return out


def cmd_transfer_check(args):
    params = operators.ModelParams(args.L, args.a, args.b, args.g)
    t = operators.build_transfer(params)
    t0, t1 = t.taylor_at(1, 1)
    ident = bool((t0 == operators.identity(params.dim)).all())
    markov = bool((t1 * Fraction(-1, 2) == operators.markov_matrix(params)).all())
    rng = random.Random(args.seed)
    pairs = []
    for _ in range(args.pairs):
        x = Fraction(rng.randint(-20, 20), rng.randint(1, 20))
        y = Fraction(rng.randint(-20, 20), rng.randint(1, 20))
        try:
            ok, defect = operators.check_commutativity(params, x, y)
        except PreconditionError:
            continue   # landed on a pole of the denominator
        pairs.append({"x": encode_rational(x), "y": encode_rational(y), "commute": ok,
                      "defect": encode_rational(defect)})
    return {
        "t1_is_identity": ident,
        "markov_recovered": markov,
        "commutativity": pairs,
        "all_pass": ident and markov and all(p["commute"] for p in pairs),
    }


def cmd_spectrum(args):
    if args.twisted:
        n = 2 * args.L + 4
        m = operators.build_twisted_periodic(args.L, args.g, args.x)
        m, _ = operators.particle_sector(m, n, args.L + 2)
    else:
        m = operators.transfer_at(operators.ModelParams(args.L, args.a, args.b, args.g), args.x)
    if m.shape[0] > 64:
        raise SizeLimitError("spectrum limited to dimension <= 64")
    eigs = numerics.spectrum_via_charpoly(m, args.tol)
    out = {"dimension": m.shape[0], "eigenvalues": [_complex_json(z) for z in eigs]}
    if args.lambda_order is not None:
        mu = math.log(args.g)
        p = operators.ModelParams(args.L, args.a, args.b)
        solver = tq.solve_tq_equivalent if args.twisted else tq.solve_tq_original
        lam = float(solver(p, args.lambda_order).lambda_at(args.x, Fraction(mu)))
        out["lambda_series_value"] = lam
        out["nearest_distance"] = numerics.nearest_distance(lam, eigs)
    if args.matrix_out:
        with open(args.matrix_out, "w") as fh:
            json.dump(operators.to_json_matrix(m), fh)
    return out


def _roots_of(args) -> Poly:
    # at mu = 0 the original Q does not depend on a
    if args.mu == 0 and args.flavor == "original":
        return tq.q0_closed(args.L, args.b)
    p = operators.ModelParams(args.L, args.a, args.b)
    solver = tq.solve_tq_original if args.flavor == "original" else tq.solve_tq_equivalent
    return Poly(solver(p, args.order).q_at_mu(args.mu))


def cmd_residuals(args):
    rep = numerics.aberth_roots(_roots_of(args), args.tol)
    roots = tq.BetheRootSet(tuple(rep.roots), args.flavor)
    res = tq.bethe_residual(roots, operators.ModelParams(args.L, args.a, args.b), float(args.mu))
    return {
        "roots": [_complex_json(z) for z in res.roots],
        "log_residuals": list(res.residuals),
        "max_log_residual": res.max_residual,
        "conjugate_closed": rep.is_conjugate_closed(),
    }


def _svg_scatter(roots: np.ndarray, path: str, title: str):
    w, h, pad = 640, 480, 48
    xs, ys = roots.real, roots.imag
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    sx = (w - 2 * pad) / ((x1 - x0) or 1.0)
    sy = (h - 2 * pad) / ((y1 - y0) or 1.0)
    def px(x): return pad + (x - x0) * sx
    def py(y): return h - pad - (y - y0) * sy
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<rect x="{pad}" y="{pad}" width="{w - 2 * pad}" height="{h - 2 * pad}" fill="none" stroke="black"/>',
        f'<text x="{w / 2}" y="{pad / 2}" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{w / 2}" y="{h - 12}" text-anchor="middle" font-size="12">Re u</text>',
        f'<text x="14" y="{h / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 14 {h / 2})">Im u</text>',
    ]
    for v, anchor in ((x0, "start"), (x1, "end")):
        parts.append(f'<text x="{px(v):.1f}" y="{h - pad + 16}" text-anchor="{anchor}" font-size="10">{v:.3g}</text>')
    for v in (y0, y1):
        parts.append(f'<text x="{pad - 4}" y="{py(v):.1f}" text-anchor="end" font-size="10">{v:.3g}</text>')
    for x, y in zip(xs, ys):
        parts.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="2.5" fill="steelblue"/>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def cmd_roots(args):
    poly = _roots_of(args)
    rep = numerics.aberth_roots(poly, args.tol)
    order = np.lexsort((rep.roots.imag, rep.roots.real))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for k in order:
        z = rep.roots[k]
        writer.writerow([repr(float(z.real)), repr(float(z.imag)), repr(float(rep.residuals[k]))])
    if args.svg:
        _svg_scatter(rep.roots, args.svg, f"Bethe roots, L={args.L}, b={encode_rational(args.b)}")
    summary = {
        "count": len(rep.roots),
        "max_residual": rep.max_residual,
        "conjugate_closed": rep.is_conjugate_closed(),
        "iterations": rep.iterations,
    }
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
        return summary
    return buf.getvalue()


def cmd_mc(args):
    cfg = mc.SimConfig.from_boundary(args.L, args.a, args.b, horizon=args.horizon,
                                     seed=args.seed, burn_in=args.burn_in)
    stats = mc.simulate(cfg, kernel=args.kernel)
    out = {"stats": stats.to_json(), "alpha": cfg.alpha, "beta": cfg.beta}
    if args.predict is not None:
        pred = args.predict
        if pred == "series":
            sol = tq.solve_tq_original(operators.ModelParams(args.L, args.a, args.b), 1)
            pred = tq.lambda_of_mu(sol)[1]
        else:
            pred = as_rational(pred)
        out["validation"] = mc.validate_first_cumulant(cfg, pred, stats).to_json()
    return out


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tasep-tq", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def model(sp, L_nargs=None, with_g=False):
        sp.add_argument("--L", type=_nonneg_int, required=True, nargs=L_nargs)
        sp.add_argument("--a", type=_rational, default=Fraction(0))
        sp.add_argument("--b", type=_rational, default=Fraction(0))
        if with_g:
            sp.add_argument("--g", type=_rational, default=Fraction(1), help="e^mu as p/q")

    def out(sp):
        sp.add_argument("--out", help="write output here instead of stdout")

    sp = sub.add_parser("solve", help="solve a T-Q relation order by order")
    model(sp)
    sp.add_argument("--order", type=_nonneg_int, default=4)
    sp.add_argument("--flavor", choices=["original", "equivalent", "both"], default="original")
    out(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("equiv-check", help="compare Lambda from both relations exactly")
    model(sp, L_nargs="+")
    sp.add_argument("--order", type=_nonneg_int, default=5)
    out(sp)
    sp.set_defaults(func=cmd_equiv_check)

    sp = sub.add_parser("lambda", help="largest eigenvalue of the deformed generator")
    model(sp)
    sp.add_argument("--order", type=_nonneg_int, default=6)
    sp.add_argument("--via", choices=["tq", "charges", "perron"], default="tq")
    sp.add_argument("--mu", type=_rational, help="evaluate at this mu (p/q)")
    out(sp)
    sp.set_defaults(func=cmd_lambda)

    sp = sub.add_parser("charges", help="charge eigenvalue and mu as series in B")
    model(sp)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--order", type=int, default=4, help="number of B terms")
    sp.add_argument("--method", choices=["auto", "closed", "residue"], default="auto")
    sp.add_argument("--compose", action="store_true", help="also give the charge as a mu-series")
    out(sp)
    sp.set_defaults(func=cmd_charges)

    sp = sub.add_parser("transfer-check", help="exact transfer-matrix identities")
    model(sp, with_g=True)
    sp.add_argument("--pairs", type=_nonneg_int, default=20)
    sp.add_argument("--seed", type=_nonneg_int, default=0)
    out(sp)
    sp.set_defaults(func=cmd_transfer_check)

    sp = sub.add_parser("spectrum", help="spectrum of t(x) or of the twisted periodic matrix")
    model(sp, with_g=True)
    sp.add_argument("--x", type=_rational, default=Fraction(1, 2))
    sp.add_argument("--twisted", action="store_true", help="use the (L+2)-particle sector of the twisted chain")
    sp.add_argument("--lambda-order", type=_nonneg_int, help="also locate the truncated Lambda(x)")
    sp.add_argument("--tol", type=float, default=numerics.DEFAULT_TOL)
    sp.add_argument("--matrix-out", help="dump the exact matrix as JSON")
    out(sp)
    sp.set_defaults(func=cmd_spectrum)

    for name, func, hlp in (("residuals", cmd_residuals, "Bethe-equation residuals of computed roots"),
                            ("roots", cmd_roots, "roots of the Q-polynomial as CSV re,im,residual")):
        sp = sub.add_parser(name, help=hlp)
        model(sp)
        sp.add_argument("--mu", type=_rational, default=Fraction(0))
        sp.add_argument("--order", type=_nonneg_int, default=8, help="series order when mu != 0")
        sp.add_argument("--flavor", choices=["original", "equivalent"], default="original")
        sp.add_argument("--tol", type=float, default=numerics.DEFAULT_TOL)
        if name == "roots":
            sp.add_argument("--svg", help="also write a scatter plot")
        out(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("mc", help="Monte Carlo estimate of the entering current")
    model(sp)
    sp.add_argument("--horizon", type=float, default=1e6)
    sp.add_argument("--seed", type=_nonneg_int, default=0)
    sp.add_argument("--burn-in", type=float, default=0.1)
    sp.add_argument("--kernel", choices=sorted(mc.KERNELS), default=mc.KERNEL)
    sp.add_argument("--predict", help="p/q prediction, or 'series' for the exact first cumulant")
    out(sp)
    sp.set_defaults(func=cmd_mc)
    return p


def _runspec(args) -> dict:
    runspec = {"subcommand": args.command}
    for k, v in sorted(vars(args).items()):
        if k in ("func", "command"):
            continue
        if isinstance(v, Fraction):
            v = encode_rational(v)
        elif isinstance(v, list):
            v = [encode_rational(x) if isinstance(x, Fraction) else x for x in v]
        runspec[k] = v
    return runspec


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        runspec = _runspec(args)
        result = args.func(args)
    except TasepError as exc:
        err = {"error": {"type": type(exc).__name__.lstrip("_"), "message": str(exc),
                         "exit_code": exc.exit_code}}
        sys.stdout.write(json.dumps(err, sort_keys=True) + "\n")
        return exc.exit_code
    if isinstance(result, str):
        # raw CSV: the run spec goes on a comment line ahead of the data
        sys.stdout.write("# runspec: " + json.dumps(runspec, sort_keys=True) + "\n" + result)
        return 0
    doc = {"runspec": runspec, **result}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    _emit(text, None if args.command == "roots" else getattr(args, "out", None))
    return 0


if __name__ == "__main__":
    sys.exit(main())
