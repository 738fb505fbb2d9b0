"""The ``gfermat`` command line: JSON curve spec in, JSON report out.

Exit codes: 0 success, 2 invalid input (including unreachable roots), 3 a
checked property failed, 4 a budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import linalg
from .aut import full_linear_group, is_linear_automorphism, monomial_search, qform_check
from .curve import (
    CurveSpec,
    all_fixed_points,
    branch_values,
    canonical_degree,
    jacobian_rank_at,
    p1_json,
    riemann_hurwitz_genus,
)
from .errors import BudgetExceeded, GFermatError, PropertyViolation, ValidationError
from .fields import make_field
from .osculation import (
    DEFAULT_SAMPLES,
    _prepare,
    expected_fixed_b,
    expected_fixed_h,
    hermite_at,
    hyperosc_survey,
    local_expansion,
    hermite_invariants,
    pluecker_from_hermite,
    pluecker_solve,
)
from .points import DEFAULT_BUDGET, census, census_work

SCHEMA = "gfermat/1"
EXIT_OK, EXIT_VALIDATION, EXIT_PROPERTY, EXIT_BUDGET = 0, 2, 3, 4


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}", path=str(path)) from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc.msg}", path=str(path)) from None


def load_curve(path) -> CurveSpec:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ValidationError("curve spec must be a JSON object")
    return CurveSpec.from_json(data)


def _report(c: CurveSpec, **body) -> dict:
    return {"schema": SCHEMA, "curve": c.hash, **body}


# -- subcommands -------------------------------------------------------------


def cmd_genus(c, args):
    return _report(c, genus=c.genus)


def cmd_describe(c, args):
    return _report(
        c,
        spec=c.to_json(),
        genus=c.genus,
        forms=[str(f) for f in c.forms],
        branch_values=[p1_json(v) for v in branch_values(c)],
        canonical_degree=canonical_degree(c),
        hyperbolic=c.is_hyperbolic,
    )


def cmd_smooth(c, args):
    cc = c.with_fixed_point_roots()
    rows = [{"point": P.to_json(), "rank": jacobian_rank_at(cc, P)} for P in all_fixed_points(cc)]
    smooth = all(r["rank"] == c.n - 1 for r in rows)
    out = _report(c, field=cc.field.to_json(), points=rows, smooth=smooth)
    if not smooth:
        raise _Failed(out)
    return out


def cmd_aut(c, args):
    return full_linear_group(c).to_json()


def cmd_qform(c, args):
    data = _load_json(args.matrix)
    F = c.field
    rows = data
    if isinstance(data, dict):
        if "field" in data:
            F = make_field(data["field"])
        rows = data.get("matrix")
    if not isinstance(rows, list):
        raise ValidationError("matrix file must hold a list of rows or {'matrix': ...}")
    cc = c.over(F) if F != c.field else c
    A = linalg.matrix_from_json(F, rows)
    cert = qform_check(cc, A)
    lin = is_linear_automorphism(cc, A)
    return _report(
        c,
        field=F.to_json(),
        qform=cert.to_json(),
        linear_automorphism=lin is not None,
        consistent=cert.passed == (lin is not None),
    )


def _samples(args):
    return DEFAULT_SAMPLES if args.samples is None else args.samples


def cmd_osculate(c, args):
    if args.point is None and not args.all_fixed:
        rep = hyperosc_survey(c, samples=_samples(args), seed=args.seed, N=args.truncation)
        out = rep.to_json()
        out["pluecker"] = pluecker_from_hermite(rep.curve, rep.fixed, c.hash).to_json()
        if not rep.passed:
            raise _Failed(out)
        return out
    cc = _prepare(c)
    pts = all_fixed_points(cc)
    if args.point is not None:
        if not 0 <= args.point < len(pts):
            raise ValidationError(f"--point must lie in 0..{len(pts) - 1}", count=len(pts))
        chart = local_expansion(cc, pts[args.point], args.truncation)
        hd = hermite_invariants(chart)
        return _report(c, field=cc.field.to_json(), chart=chart.to_json(), hermite=hd.to_json())
    data = [hermite_at(cc, P, args.truncation) for P in pts]
    return _report(
        c,
        field=cc.field.to_json(),
        points=[hd.to_json() for hd in data],
        pluecker=pluecker_from_hermite(cc, data, c.hash).to_json(),
    )


def cmd_pluecker(c, args):
    out = pluecker_solve(c, N=args.truncation).to_json()
    if not out["passed"]:
        raise _Failed(out)
    return out


def cmd_points(c, args):
    qs = args.q or [None]
    reports = [census(c, q, budget=args.budget or DEFAULT_BUDGET).to_json() for q in qs]
    out = reports[0] if len(reports) == 1 else _report(c, censuses=reports)
    if not all(r["passed"] for r in reports):
        raise _Failed(out)
    return out


# -- verify ------------------------------------------------------------------


def _check(name, fn):
    try:
        ok, detail = fn()
        return {"name": name, "status": "pass" if ok else "fail", "detail": detail}
    except BudgetExceeded as exc:
        return {"name": name, "status": "skipped", "detail": exc.message}
    except GFermatError as exc:
        return {"name": name, "status": "error", "detail": {"code": exc.code, "message": exc.message}}


def _skip(name, reason):
    return {"name": name, "status": "skipped", "detail": reason}


def verify_curve(c: CurveSpec, samples: int = DEFAULT_SAMPLES, seed=None, budget=None) -> list:
    """Every applicable property check for one curve; failures stay visible."""
    budget = budget or DEFAULT_BUDGET
    checks = []
    g = c.genus
    checks.append(
        _check(
            "genus",
            lambda: (
                g == riemann_hurwitz_genus(c.k, c.n) and canonical_degree(c) == 2 * g - 2,
                {"genus": g, "canonical_degree": canonical_degree(c)},
            ),
        )
    )

    def smooth():
        cc = c.with_fixed_point_roots()
        ranks = {jacobian_rank_at(cc, P) for P in all_fixed_points(cc)}
        return ranks == {c.n - 1}, {"ranks": sorted(ranks)}

    checks.append(_check("smooth_fixed_points", smooth))
    if not c.is_hyperbolic:
        for name in ("automorphisms", "hyperosculation", "pluecker"):
            checks.append(_skip(name, "genus <= 1"))
    else:
        report = {}

        def aut():
            rep = full_linear_group(c)
            report["aut"] = rep
            ok = rep.closure_ok and rep.L_order == c.k**c.n * rep.g0_order
            if not rep.qform_applicable:
                ok = ok and rep.h0_normal
            return ok, {"g0_order": rep.g0_order, "L_order": rep.L_order, "h0_normal": rep.h0_normal}

        checks.append(_check("automorphisms", aut))
        if "aut" in report:
            rep = report["aut"]

            def search():
                found = monomial_search(rep.curve, budget=budget)
                return len(found) == rep.L_order, {"found": len(found), "L_order": rep.L_order}

            checks.append(_check("monomial_search_oracle", search))
            if rep.qform_applicable and c.k > 2:

                def qforms():
                    cc = rep.curve
                    bad = [A.to_json() for A in rep.lifts if not qform_check(cc, A.matrix()).passed]
                    return not bad, {"violations": bad}

                checks.append(_check("qform_lifts", qforms))
        p = c.field.p
        if p and p <= c.k ** (c.n - 1):
            checks.append(_skip("hyperosculation", f"p = {p} <= k^(n-1)"))
            checks.append(_skip("pluecker", f"p = {p} <= k^(n-1)"))
        else:

            def survey():
                rep = hyperosc_survey(c, samples=samples, seed=seed)
                report["survey"] = rep
                cc = rep.curve
                exact = all(
                    hd.h == expected_fixed_h(cc) and hd.b == expected_fixed_b(cc) for hd in rep.fixed
                )
                return rep.passed and exact, {
                    "fixed_points": len(rep.fixed),
                    "samples": len(rep.samples),
                    "counterexamples": rep.counterexamples,
                }

            checks.append(_check("hyperosculation", survey))

            def pluecker():
                if "survey" in report:
                    rep = report["survey"]
                    pr = pluecker_from_hermite(rep.curve, rep.fixed, c.hash)
                else:
                    pr = pluecker_solve(c)
                return pr.passed, {"d": list(pr.d), "b": list(pr.b_totals)}

            checks.append(_check("pluecker", pluecker))
    if c.field.is_finite:
        if census_work(c) > budget:
            checks.append(_skip("census", "over budget"))
        else:

            def points():
                rep = census(c, budget=budget)
                return rep.passed, rep.to_json()

            checks.append(_check("census", points))
    else:
        checks.append(_skip("census", "characteristic 0"))
    return checks


def cmd_verify(c, args):
    checks = verify_curve(c, samples=_samples(args), seed=args.seed, budget=args.budget)
    ok = all(ch["status"] in ("pass", "skipped") for ch in checks)
    out = _report(c, checks=checks, passed=ok)
    if not ok:
        raise _Failed(out)
    return out


COMMANDS = {
    "genus": cmd_genus,
    "describe": cmd_describe,
    "smooth": cmd_smooth,
    "aut": cmd_aut,
    "qform": cmd_qform,
    "osculate": cmd_osculate,
    "pluecker": cmd_pluecker,
    "points": cmd_points,
    "verify": cmd_verify,
}


class _Failed(Exception):
    """A report was produced but a checked property failed."""

    def __init__(self, report):
        super().__init__("property failed")
        self.report = report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--curve", required=True, help="curve spec JSON file")
    common.add_argument("--truncation", type=int, help="series truncation order N")
    common.add_argument("--samples", type=int, help="random non-fixed sample points")
    common.add_argument("--seed", type=int, help="seed (default: derived from the curve hash)")
    common.add_argument("--budget", type=int, help="work budget for exhaustive searches")
    common.add_argument("--out", help="also write the JSON report to this path")
    parser = argparse.ArgumentParser(prog="gfermat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "qform":
            sp.add_argument("--matrix", required=True, help="matrix JSON file")
        elif name == "osculate":
            grp = sp.add_mutually_exclusive_group()
            grp.add_argument("--point", type=int, help="index into the fixed-point listing")
            grp.add_argument("--all-fixed", action="store_true")
        elif name == "points":
            sp.add_argument("--q", type=int, nargs="+", help="field orders to census")
    return parser


def _emit(obj, out_path, stream):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    stream.write(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _error_json(exc: GFermatError) -> dict:
    context = {k: (v if isinstance(v, (int, str, float, bool, list, dict, type(None))) else repr(v))
               for k, v in exc.context.items()}
    if getattr(exc, "required", None):
        context["required"] = [[x.to_json(), k] for x, k in exc.required]
    return {"error": {"code": exc.code, "message": exc.message, "context": context}}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        c = load_curve(args.curve)
        result = COMMANDS[args.command](c, args)
    except _Failed as failed:
        _emit(failed.report, args.out, stdout)
        return EXIT_PROPERTY
    except BudgetExceeded as exc:
        _emit(_error_json(exc), args.out, stdout)
        return EXIT_BUDGET
    except PropertyViolation as exc:
        _emit(_error_json(exc), args.out, stdout)
        return EXIT_PROPERTY
    except GFermatError as exc:
        _emit(_error_json(exc), args.out, stdout)
        return EXIT_VALIDATION
    _emit(result, args.out, stdout)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
