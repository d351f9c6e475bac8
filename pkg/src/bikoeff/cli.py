"""Command-line front end: bounds, verification runs, expansions, sweeps.

Exit codes: 0 success, 1 usage or configuration error, 2 a certified
bound violation was found.  Reports serialize as JSON (schema_version
"1"), RFC-4180 CSV, or aligned text tables; numbers carry 15
significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .bounds import (
    SS_BETA_A5_VARIANTS,
    ST_RHO_A5_VARIANTS,
    DegenerateBoundError,
    class_bounds,
    ss_beta_a5,
    st_rho_a5,
)
from .classes import ClassSpec, SpecParseError, apply_operator, parse_spec
from .oracle import OracleError, SearchConfig, check_a5_system, max_coeff
from .series import TruncatedSeries, revert

SCHEMA_VERSION = "1"
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2

COEFF_NAMES = ("a2", "a3", "a4", "a5")


class CliError(Exception):
    """Usage-level failure; maps to exit code 1."""


def _sig15(x) -> float:
    return float(f"{float(x):.15g}")


@dataclass
class ReportDocument:
    spec: str
    rows: list
    provenance: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_json(self) -> str:
        def clean(obj):
            if isinstance(obj, dict):
                return {k: clean(v) for k, v in obj.items()}
            if isinstance(obj, (list, tuple)):
                return [clean(v) for v in obj]
            if isinstance(obj, complex):
                return {"re": _sig15(obj.real), "im": _sig15(obj.imag)}
            if isinstance(obj, float):
                return _sig15(obj)
            return obj

        payload = {
            "schema_version": self.schema_version,
            "spec": self.spec,
            "rows": clean(self.rows),
            "provenance": clean(self.provenance),
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        payload = json.loads(text)
        return cls(
            spec=payload["spec"],
            rows=payload["rows"],
            provenance=payload.get("provenance", {}),
            schema_version=payload["schema_version"],
        )

    def _columns(self):
        cols = []
        for row in self.rows:
            for key in row:
                if key not in cols:
                    cols.append(key)
        return cols

    def to_csv(self) -> str:
        cols = self._columns()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(cols)
        for row in self.rows:
            writer.writerow([_cell(row.get(c, "")) for c in cols])
        return buf.getvalue()

    def to_table(self) -> str:
        cols = self._columns()
        grid = [cols] + [[_cell(row.get(c, "")) for c in cols] for row in self.rows]
        widths = [max(len(r[i]) for r in grid) for i in range(len(cols))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in grid]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return f"spec: {self.spec}\n" + "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json() + "\n"
        if fmt == "csv":
            return self.to_csv()
        return self.to_table()


def _cell(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.15g}"
    if isinstance(value, dict):
        return ";".join(f"{k}={_cell(v)}" for k, v in value.items())
    return str(value)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def _a5_family(spec: ClassSpec):
    if spec.operator == "st" and float(spec.lam) == 0 and spec.generator.family == "order":
        return "order", float(spec.generator.params["rho"])
    if spec.operator == "st" and float(spec.lam) == 0 and spec.generator.family == "strong":
        return "strong", float(spec.generator.params["beta"])
    return None, None


def _a5_rows(spec: ClassSpec):
    fam, param = _a5_family(spec)
    if fam is None:
        raise CliError("a5 bound is only available for st:lambda=0 with the order or strong generator")
    if fam == "order":
        pairs = [(v, st_rho_a5(param, v)) for v in ST_RHO_A5_VARIANTS]
    else:
        pairs = [(v, ss_beta_a5(param, v)) for v in SS_BETA_A5_VARIANTS]
    return [
        {"coefficient": "a5", "bound": _sig15(b), "branch": "", "route": "", "variant": v}
        for v, b in pairs
    ]


def bounds_rows(spec: ClassSpec, coeffs):
    rows = []
    want_abc = [c for c in coeffs if c != "a5"]
    if want_abc:
        try:
            breakdowns = class_bounds(spec)
        except DegenerateBoundError as exc:
            raise CliError(str(exc))
        by_name = dict(zip(("a2", "a3", "a4"), breakdowns))
        for name in coeffs:
            if name == "a5":
                continue
            b = by_name[name]
            row = {
                "coefficient": name,
                "bound": _sig15(b.value),
                "branch": b.branch,
                "route": b.route,
                "variant": "",
            }
            if b.constants:
                row["constants"] = {k: _sig15(v) for k, v in b.constants.items()}
            rows.append(row)
    if "a5" in coeffs:
        rows.extend(_a5_rows(spec))
    return rows


def cmd_bounds(args) -> int:
    spec = parse_spec(args.spec)
    coeffs = _parse_coeffs(args.coeffs)
    doc = ReportDocument(spec.text(), bounds_rows(spec, coeffs))
    _emit(doc.render(args.format), args.out)
    return EXIT_OK


def _parse_coeffs(text):
    names = [t.strip() for t in text.split(",") if t.strip()]
    for n in names:
        if n not in COEFF_NAMES:
            raise CliError(f"unknown coefficient {n!r} (choose from {', '.join(COEFF_NAMES)})")
    if not names:
        raise CliError("empty coefficient list")
    return names


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

PROVEN_A5_VARIANTS = {"order": "proof", "strong": "rederived"}


def _search_config(args) -> SearchConfig:
    return SearchConfig(
        seed=args.seed,
        samples=args.samples,
        refine_top=args.refine_top,
        refine_steps=args.refine_steps,
        tol_feasible=args.tol_feasible,
        tol_violation=args.tol_violation,
        restrict_real=args.restrict_real,
        max_atoms=args.max_atoms,
    )


def verify_rows(spec: ClassSpec, targets, config: SearchConfig):
    rows = []
    violated_proven = False
    witnesses = []
    for target in targets:
        if target == "a5":
            rep = check_a5_system(spec, config)
            proven = PROVEN_A5_VARIANTS[spec.generator.family]
            for name, v in rep.variants.items():
                rows.append({
                    "coefficient": "a5",
                    "bound": _sig15(v["bound"]),
                    "branch": "",
                    "route": "",
                    "variant": name,
                    "oracle_best": _sig15(rep.best_value),
                    "slack": _sig15(v["slack"]),
                    "violated": bool(v["violated"]),
                    "proven": name == proven,
                })
                if v["violated"] and name == proven:
                    violated_proven = True
                    witnesses.append(rep.argmax)
        else:
            rep = max_coeff(spec, target, config)
            breakdown = class_bounds(spec)[("a2", "a3", "a4").index(target)]
            rows.append({
                "coefficient": target,
                "bound": _sig15(rep.bound),
                "branch": breakdown.branch,
                "route": breakdown.route,
                "variant": "",
                "oracle_best": _sig15(rep.best_value),
                "slack": _sig15(rep.slack),
                "violated": bool(rep.violated),
                "proven": True,
            })
            if rep.violated:
                violated_proven = True
                witnesses.append(rep.argmax)
    return rows, violated_proven, witnesses


def cmd_verify(args) -> int:
    spec = parse_spec(args.spec)
    if args.target == "all":
        targets = ["a2", "a3", "a4"]
        if _a5_family(spec)[0] is not None:
            targets.append("a5")
    else:
        targets = [args.target]
        if "a5" in targets and _a5_family(spec)[0] is None:
            raise CliError("a5 verification is only available for st:lambda=0 with the order or strong generator")
    config = _search_config(args)
    rows, violated, witnesses = verify_rows(spec, targets, config)
    doc = ReportDocument(spec.text(), rows, {"seed": config.seed, "samples": config.samples})
    _emit(doc.render(args.format), args.out)
    if violated:
        for w in witnesses:
            print(f"violation witness: {w}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# expand
# ---------------------------------------------------------------------------


def _series_text(s: TruncatedSeries, var="z") -> str:
    parts = []
    for n, c in enumerate(s.coeffs):
        if c == 0:
            continue
        try:
            text = str(Fraction(c))
            text = f"({text})" if "/" in text or "-" in text else text
        except (TypeError, ValueError):
            text = f"({c})"
        mono = "" if n == 0 else (var if n == 1 else f"{var}^{n}")
        parts.append(text if not mono else (mono if text == "1" else f"{text} {mono}"))
    return " + ".join(parts) if parts else "0"


def _symbolic_f(order):
    import sympy

    a = sympy.symbols(f"a2:{order + 1}")
    return TruncatedSeries([sympy.Integer(0), sympy.Integer(1), *a], order), a


def cmd_expand(args) -> int:
    import sympy

    spec = parse_spec(args.spec)
    order = args.order
    if args.what == "generator":
        out = _series_text(spec.generator.series(order))
    elif args.what == "operator":
        f, _ = _symbolic_f(order + 1)
        expanded = apply_operator(spec, f)
        lines = []
        for n in range(1, min(order, expanded.order) + 1):
            c = sympy.expand(sympy.cancel(sympy.together(expanded.coeffs[n])))
            lines.append(f"z^{n}: {c}")
        out = "\n".join(lines)
    else:  # inverse
        f, _ = _symbolic_f(order)
        g = revert(f)
        lines = []
        for n in range(2, order + 1):
            c = sympy.expand(g.coeffs[n])
            lines.append(f"w^{n}: {c}")
        out = "\n".join(lines)
    _emit(out + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _parse_range(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise CliError("range must be lo:hi:steps")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise CliError(f"bad range {text!r}") from exc
    if steps < 1:
        raise CliError("range needs at least one step")
    return lo, hi, steps


def sweep_rows(template: str, param: str, grid, coeffs):
    if template.count("{}") != 1:
        raise CliError("spec template must contain exactly one {} placeholder")
    rows = []
    for value in grid:
        spec = parse_spec(template.replace("{}", f"{value:.17g}"))
        for row in bounds_rows(spec, coeffs):
            rows.append({
                "param": _sig15(value),
                "coeff": row["coefficient"],
                "bound": row["bound"],
                "branch": row["branch"] if row["coefficient"] != "a5" else "",
                "variant": row.get("variant", ""),
            })
    return rows


def cmd_sweep(args) -> int:
    lo, hi, steps = _parse_range(args.range)
    grid = [lo + (hi - lo) * i / (steps - 1) for i in range(steps)] if steps > 1 else [lo]
    rows = sweep_rows(args.spec_template, args.param, grid, _parse_coeffs(args.coeffs))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["param", "coeff", "bound", "branch", "variant"])
    for row in rows:
        writer.writerow([_cell(row[c]) for c in ("param", "coeff", "bound", "branch", "variant")])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

GRID_LAMBDAS = (Fraction(0), Fraction(1, 2), Fraction(1))
GRID_RHOS = (Fraction(0), Fraction(1, 4), Fraction(1, 2))
GRID_BETAS = (Fraction(1, 2), Fraction(3, 4), Fraction(1))


def cmd_report(args) -> int:
    config = _search_config(args)
    rows = []
    violated = False
    for op in ("st", "m"):
        for lam in GRID_LAMBDAS:
            for rho in GRID_RHOS:
                spec = parse_spec(f"{op}:lambda={lam}:order:rho={rho}")
                sub, bad, _ = verify_rows(spec, ["a2", "a3", "a4"], config)
                for row in sub:
                    row["spec"] = spec.text()
                rows.extend(sub)
                violated = violated or bad
    for rho in GRID_RHOS:
        spec = parse_spec(f"st:lambda=0:order:rho={rho}")
        sub, bad, _ = verify_rows(spec, ["a5"], config)
        for row in sub:
            row["spec"] = spec.text()
        rows.extend(sub)
        violated = violated or bad
    for beta in GRID_BETAS:
        spec = parse_spec(f"ss:beta={beta}")
        sub, bad, _ = verify_rows(spec, ["a5"], config)
        for row in sub:
            row["spec"] = spec.text()
        rows.extend(sub)
        violated = violated or bad
    doc = ReportDocument(
        "acceptance-grid",
        rows,
        {"seed": config.seed, "samples": config.samples},
    )
    _emit(doc.render(args.format), args.out)
    return EXIT_VIOLATION if violated else EXIT_OK


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract reserves 2 for violations
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_config_file(path):
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise CliError(f"{path}:{lineno}: expected key = value")
                key, value = (part.strip() for part in line.split("=", 1))
                values[key.replace("-", "_")] = value
    except OSError as exc:
        raise CliError(f"cannot read config file: {exc}")
    return values


_CONFIG_CASTS = {
    "samples": int,
    "seed": int,
    "refine_top": int,
    "refine_steps": int,
    "max_atoms": int,
    "tol_feasible": float,
    "tol_violation": float,
    "restrict_real": lambda v: v.lower() in ("1", "true", "yes"),
    "format": str,
}


def _apply_defaults(args):
    """Fill unset oracle options: flags > config file > BIKOEFF_SEED > defaults."""
    file_values = _load_config_file(args.config) if getattr(args, "config", None) else {}
    for key, value in file_values.items():
        if key not in _CONFIG_CASTS:
            raise CliError(f"unknown config key {key!r}")
    defaults = {
        "samples": 2000,
        "seed": None,
        "refine_top": 3,
        "refine_steps": 150,
        "max_atoms": 5,
        "tol_feasible": 1e-7,
        "tol_violation": 1e-8,
        "restrict_real": False,
        "format": "table",
    }
    for key, cast in _CONFIG_CASTS.items():
        if not hasattr(args, key):
            continue
        if getattr(args, key) is None:
            if key in file_values:
                setattr(args, key, cast(file_values[key]))
            else:
                setattr(args, key, defaults[key])
    if getattr(args, "seed", "absent") is None:
        env = os.environ.get("BIKOEFF_SEED")
        try:
            args.seed = int(env) if env else 0
        except ValueError:
            raise CliError(f"BIKOEFF_SEED must be an integer, got {env!r}")


def _add_oracle_flags(p):
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--refine-top", dest="refine_top", type=int, default=None)
    p.add_argument("--refine-steps", dest="refine_steps", type=int, default=None)
    p.add_argument("--max-atoms", dest="max_atoms", type=int, default=None)
    p.add_argument("--tol-feasible", dest="tol_feasible", type=float, default=None)
    p.add_argument("--tol-violation", dest="tol_violation", type=float, default=None)
    p.add_argument("--restrict-real", dest="restrict_real", action="store_const", const=True, default=None)
    p.add_argument("--config", default=None)


def _add_output_flags(p):
    p.add_argument("--format", choices=("table", "json", "csv"), default=None)
    p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bikoeff", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", help="closed-form coefficient bounds for a class")
    p.add_argument("spec")
    p.add_argument("--coeffs", default="a2,a3,a4")
    _add_output_flags(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="stress-test bounds against the sampling oracle")
    p.add_argument("spec")
    p.add_argument("--target", choices=("a2", "a3", "a4", "a5", "all"), default="all")
    _add_oracle_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("expand", help="print series expansions (generator, operator, inverse)")
    p.add_argument("spec")
    p.add_argument("--what", choices=("generator", "operator", "inverse"), default="generator")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("sweep", help="tabulate bounds over a parameter grid (CSV)")
    p.add_argument("spec_template")
    p.add_argument("--param", required=True)
    p.add_argument("--range", required=True, help="lo:hi:steps")
    p.add_argument("--coeffs", default="a2,a3,a4")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="run the full verification grid, one document")
    _add_oracle_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_defaults(args)
        return args.func(args)
    except (CliError, SpecParseError, OracleError, ValueError) as exc:
        print(f"bikoeff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
