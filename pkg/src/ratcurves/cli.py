"""Command-line interface.

Exit codes: 0 ok, 2 usage, 3 parse error, 4 validation error, 5 budget
refusal, 6 certificate failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report
from .certify import (
    auto_line_components, bound_formula, default_dimZ, lang_weil_fit, mor_bound, theorem_check,
)
from .field import FieldError, parse_field
from .forms import FormError, parse_form
from .geometry import (
    GeometryError, PreconditionError, classify_line, eckardt_cone_oracle, eckardt_scan,
    eckardt_test, enumerate_lines, line_contains_point, lines_through_point, normalize_at_point,
)
from .morspace import DEFAULT_BUDGET, BudgetExceeded, NodeShortage, count_mor, count_points_bounded_height
from .variety import (
    SpecError, VarietySpec, bezout_constant, cone_degree_bound, expected_dims, load_spec,
    render_spec, threshold_degree, validate_spec,
)

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_VALIDATION, EXIT_BUDGET, EXIT_CERT = 0, 2, 3, 4, 5, 6


class CliError(Exception):
    def __init__(self, code, msg):
        super().__init__(msg)
        self.code = code


def _load(args) -> VarietySpec:
    try:
        spec = load_spec(args.spec)
        if getattr(args, "field", None):
            F = parse_field(args.field)
            spec = load_spec_with_field(args.spec, F)
    except FileNotFoundError:
        raise CliError(EXIT_PARSE, f"cli.spec: cannot read {args.spec}")
    except (SpecError, FormError, FieldError) as exc:
        raise CliError(EXIT_PARSE, f"parse: {exc}")
    diags = validate_spec(spec)
    if diags:
        raise CliError(EXIT_VALIDATION, "; ".join(map(str, diags)))
    return spec


def load_spec_with_field(path, F):
    from .variety import spec_from_mapping

    data = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    data["field"] = str(F)
    return spec_from_mapping(data)


def _exclusions(args, spec):
    mode = args.exclusions
    if mode == "none":
        return []
    if mode == "auto-lines":
        if spec.weighted:
            raise CliError(EXIT_VALIDATION, "cli.exclusions: auto-lines needs an ordinary projective ambient")
        return auto_line_components(spec, args.threads)
    if mode.startswith("file:"):
        path = mode[5:]
        try:
            data = tomllib.loads(Path(path).read_text(encoding="utf-8"))
            if "field" in data and parse_field(data["field"]) != spec.field:
                raise CliError(EXIT_VALIDATION, "cli.exclusions: exclusion field differs from the variety field")
            comps = data["components"]
            return [[parse_form(t, spec.field, weights=spec.weights, names=spec.names) for t in comp]
                    for comp in comps]
        except FileNotFoundError:
            raise CliError(EXIT_PARSE, f"cli.exclusions: cannot read {path}")
        except (KeyError, tomllib.TOMLDecodeError, FormError, FieldError) as exc:
            raise CliError(EXIT_PARSE, f"cli.exclusions: {exc}")
    raise CliError(EXIT_USAGE, f"cli.exclusions: unknown mode {mode!r}")


def _point(text, spec, m):
    F = spec.field.extension(m)
    from .field import parse_element

    try:
        vals = [parse_element(t.strip(), F) for t in text.split(",")]
    except FieldError as exc:
        raise CliError(EXIT_PARSE, f"cli.point: {exc}")
    if len(vals) != spec.N + 1:
        raise CliError(EXIT_VALIDATION, f"cli.point: need {spec.N + 1} coordinates")
    return tuple(vals)


def _lines_dicts(lines):
    return [L.as_dict() for L in lines]


def cmd_validate(args):
    try:
        spec = load_spec(args.spec)
    except FileNotFoundError:
        raise CliError(EXIT_PARSE, f"cli.spec: cannot read {args.spec}")
    except (SpecError, FormError, FieldError) as exc:
        return {"ok": False, "diagnostics": [str(exc)]}, EXIT_VALIDATION
    diags = validate_spec(spec)
    res = {"ok": not diags, "diagnostics": [str(d) for d in diags], "canonical": render_spec(spec),
           "N": spec.N, "R": spec.R, "degrees": list(spec.degrees), "dimX": spec.dimX}
    return res, EXIT_OK if not diags else EXIT_VALIDATION


def cmd_count_mor(args):
    spec = _load(args)
    excl = _exclusions(args, spec)
    rep = count_mor(spec, args.e, args.q_ext, args.strategy, excl, args.budget, args.threads)
    return rep.as_dict(), EXIT_OK


def cmd_count_points(args):
    spec = _load(args)
    excl = _exclusions(args, spec)
    reps = count_points_bounded_height(spec, args.e_max, excl, args.q_ext, args.strategy,
                                       args.budget, args.threads)
    return {"series": [r.as_dict() for r in reps]}, EXIT_OK


def cmd_find_lines(args):
    spec = _load(args)
    lines = enumerate_lines(spec, args.q_ext, threads=args.threads)
    return {"count": len(lines), "lines": _lines_dicts(lines)}, EXIT_OK


def cmd_eckardt_scan(args):
    spec = _load(args)
    pts = eckardt_scan(spec, args.q_ext, threads=args.threads)
    S = spec.base_change(args.q_ext)
    out = []
    for p in pts:
        entry = {"point": list(p), "normal_form": normalize_at_point(S, p).digest()}
        if args.certify:
            entry["cone_oracle"] = eckardt_cone_oracle(S, p)
        out.append(entry)
    code = EXIT_OK
    if args.certify and not all(e["cone_oracle"] for e in out):
        code = EXIT_CERT
    return {"count": len(pts), "points": out}, code


def cmd_classify_lines(args):
    spec = _load(args)
    lines = enumerate_lines(spec, args.q_ext, threads=args.threads)
    S = spec.base_change(args.q_ext)
    eck = eckardt_scan(spec, args.q_ext, threads=args.threads) if args.check_eckardt else []
    rows, code = [], EXIT_OK
    for L in lines:
        cls = classify_line(spec, L)
        through = [list(p) for p in eck if line_contains_point(L, p, S.field)]
        row = {"line": L.as_dict(), "rank": cls.rank, "type": cls.kind, "eckardt_points": through}
        if cls.kind == "anomaly" or (through and cls.kind != "TypeII"):
            code = EXIT_CERT
        rows.append(row)
    return {"count": len(rows), "lines": rows}, code


def cmd_fano_fibre(args):
    spec = _load(args)
    x = _point(args.point, spec, 1)
    out = []
    for m in range(1, args.m_max + 1):
        res = lines_through_point(spec, x, m)
        out.append({"m": m, "count": len(res), "directions": [list(d) for d in res.directions],
                    "lines": _lines_dicts(res.lines)})
    return {"point": list(x), "eckardt": eckardt_test(spec, x) if spec.degrees == (3,) else None,
            "fibres": out}, EXIT_OK


def cmd_bounds(args):
    spec = _load(args)
    q = spec.field.q ** args.q_ext
    dimZ = args.dimZ if args.dimZ is not None else default_dimZ(spec, args.e)
    cert = mor_bound(spec, args.e, dimZ, q)
    res = {"label": spec.label, "e": args.e, "q": q, "dimZ": dimZ, "C": bezout_constant(spec),
           "cone_degree_bound": cone_degree_bound(spec, args.e) if args.e >= 1 else None,
           "formula": bound_formula(spec, args.e, dimZ), "bound": cert.bound}
    if spec.slack >= 1:
        res["expected_dims"] = expected_dims(spec, args.e)
        th = threshold_degree(spec)
        res["threshold"] = {"e0": th.e0, "inequality_holds": th.inequality_holds, "slack_ok": th.slack_ok}
    return res, EXIT_OK


def cmd_dim_estimate(args):
    spec = _load(args)
    samples = []
    for lit in args.fields.split(";"):
        F = parse_field(lit.strip())
        S = load_spec_with_field(args.spec, F)
        rep = count_mor(S, args.e, 1, args.strategy, None, args.budget, args.threads)
        samples.append((F.q, rep.orbits))
    expected = expected_dims(spec, args.e)["mor"]
    fit = lang_weil_fit(samples, expected, args.tol)
    return fit.as_dict(), EXIT_OK if fit.verdict == "consistent" else EXIT_CERT


def cmd_theorem1_check(args):
    spec = _load(args)
    excl = args.exclusions
    if excl.startswith("file:"):
        excl = _exclusions(args, spec)
    elif excl == "auto-lines" and spec.weighted:
        raise CliError(EXIT_VALIDATION, "cli.exclusions: auto-lines needs an ordinary projective ambient")
    reps = []
    tr = theorem_check(spec, args.e_max, args.q_ext, excl, args.strategy, args.threads, args.budget,
                       reports_out=reps)
    res = tr.as_dict()
    res["counts"] = [r.as_dict() for r in reps]
    return res, EXIT_OK if tr.all_pass else EXIT_CERT


COMMANDS = {
    "validate": cmd_validate, "count-mor": cmd_count_mor, "count-points": cmd_count_points,
    "find-lines": cmd_find_lines, "eckardt-scan": cmd_eckardt_scan, "classify-lines": cmd_classify_lines,
    "fano-fibre": cmd_fano_fibre, "bounds": cmd_bounds, "dim-estimate": cmd_dim_estimate,
    "theorem1-check": cmd_theorem1_check,
}


def build_parser():
    p = argparse.ArgumentParser(prog="ratcurves", description="Rational curves on Fano varieties over F_q.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, enum=False):
        sp.add_argument("--spec", required=True, help="spec file (TOML)")
        sp.add_argument("--field", help="override the field of the spec file, e.g. p=11")
        sp.add_argument("--q-ext", type=int, default=1, dest="q_ext", help="extension degree m")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--output", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=["report-struct", "csv"], default="report-struct")
        if enum:
            sp.add_argument("--strategy", choices=["naive", "interpolation", "auto"], default="auto")
            sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
            sp.add_argument("--exclusions", default="none", help="none | auto-lines | file:<path>")

    sp = sub.add_parser("validate")
    common(sp)
    sp = sub.add_parser("count-mor")
    common(sp, True)
    sp.add_argument("--e", type=int, required=True)
    sp = sub.add_parser("count-points")
    common(sp, True)
    sp.add_argument("--e-max", type=int, required=True, dest="e_max")
    sp = sub.add_parser("find-lines")
    common(sp)
    sp = sub.add_parser("eckardt-scan")
    common(sp)
    sp.add_argument("--certify", action="store_true", help="confirm each point with the cone oracle")
    sp = sub.add_parser("classify-lines")
    common(sp)
    sp.add_argument("--check-eckardt", action="store_true", dest="check_eckardt")
    sp = sub.add_parser("fano-fibre")
    common(sp)
    sp.add_argument("--point", required=True, help="comma-separated coordinates")
    sp.add_argument("--m-max", type=int, default=2, dest="m_max")
    sp = sub.add_parser("bounds")
    common(sp)
    sp.add_argument("--e", type=int, required=True)
    sp.add_argument("--dimZ", type=int, default=None)
    sp = sub.add_parser("dim-estimate")
    common(sp, True)
    sp.add_argument("--e", type=int, required=True)
    sp.add_argument("--fields", required=True, help="semicolon-separated field literals, e.g. 'p=7;p=11'")
    sp.add_argument("--tol", type=float, default=0.6)
    sp = sub.add_parser("theorem1-check")
    common(sp, True)
    sp.add_argument("--e-max", type=int, required=True, dest="e_max")
    return p


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("threads", "output", "format")}
    return cfg


def _rows_for_csv(command, result):
    for key in ("series", "lines", "points", "per_degree", "fibres", "counts"):
        if isinstance(result.get(key), list):
            return result[key]
    return [result]


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads < 1:
        print("cli.threads: must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        result, code = COMMANDS[args.command](args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except BudgetExceeded as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BUDGET
    except NodeShortage as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION
    except PreconditionError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION
    except GeometryError as exc:
        msg = str(exc)
        print(msg, file=sys.stderr)
        return EXIT_BUDGET if "budget" in msg else EXIT_VALIDATION
    except (SpecError, FormError, FieldError) as exc:
        print(f"parse: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.format == "csv":
        text = report.to_csv(_rows_for_csv(args.command, result))
    else:
        text = report.dumps(args.command, _config(args), result)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
