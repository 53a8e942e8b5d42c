"""Command line interface: ``gdof sweep | figure | validate | regimes``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import report, suites
from .channel import SymmetricConfig
from .errors import GdofDomainError, ValidationError
from .inner import active_scheme_regimes
from .outer import active_bound_regimes
from .report import fmt_decimal, fmt_rational

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

DEFAULTS = {
    "K": None,
    "M": None,
    "N": None,
    "alpha": "0:3:0.01",
    "schemes": "all",
    "format": "csv",
    "out": None,
    "out_dir": ".",
    "constant_channel": False,
    "seed": None,
}


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    return {k.replace("-", "_"): v for k, v in data.items()}


def _settings(args: argparse.Namespace) -> dict:
    """Defaults, then the TOML file, then explicit flags."""
    merged = dict(DEFAULTS)
    merged.update(_load_config(getattr(args, "config", None)))
    for key, value in vars(args).items():
        if value is not None and key not in ("config", "command", "func"):
            merged[key] = value
    if merged.get("seed") is None:
        merged["seed"] = int(os.environ.get("GDOF_SEED", "0"))
    return merged


def _config(s: dict) -> SymmetricConfig:
    missing = [k for k in ("K", "M", "N") if s.get(k) is None]
    if missing:
        raise ValidationError(f"missing {', '.join(missing)}")
    return SymmetricConfig(int(s["K"]), int(s["M"]), int(s["N"]))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_sweep(s: dict) -> int:
    spec = report.SweepSpec(
        _config(s),
        tuple(report.parse_alpha_range(str(s["alpha"]))),
        report.parse_schemes(s["schemes"]),
        constant_channel=bool(s["constant_channel"]),
    )
    rows = report.sweep_rows(spec)
    text = report.to_json(spec, rows) if s["format"] == "json" else report.to_csv(spec, rows)
    _emit(text, s["out"])
    return 0


def cmd_figure(s: dict) -> int:
    out_dir = Path(s["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = "json" if s["format"] == "json" else "csv"
    for spec in report.figure_specs(s["name"]):
        rows = report.sweep_rows(spec)
        text = report.to_json(spec, rows) if ext == "json" else report.to_csv(spec, rows)
        path = out_dir / report.figure_filename(s["name"], spec, ext)
        path.write_text(text)
        print(path)
    return 0


def cmd_validate(s: dict) -> int:
    failures = total = 0
    lines = []
    for rec in suites.run(s["suite"], int(s["seed"])):
        total += 1
        failures += not rec["pass"]
        lines.append(json.dumps(rec, sort_keys=True, default=str))
    _emit("\n".join(lines) + "\n", s["out"])
    print(f"{s['suite']}: {total - failures}/{total} passed", file=sys.stderr)
    return 1 if failures else 0


def _regime_record(r) -> dict:
    return {
        "lo": fmt_rational(r.lo),
        "hi": None if r.hi is None else fmt_rational(r.hi),
        "active": sorted(str(a) for a in r.active),
        "slope": fmt_rational(r.slope),
        "intercept": fmt_rational(r.intercept),
    }


def _regime_line(table: str, r) -> str:
    hi = "inf" if r.hi is None else fmt_decimal(r.hi)
    hi_pq = "" if r.hi is None else fmt_rational(r.hi)
    active = "+".join(sorted(str(a) for a in r.active))
    return (
        f"{table},{fmt_decimal(r.lo)},{fmt_rational(r.lo)},{hi},{hi_pq},{active},"
        f"{fmt_rational(r.slope)},{fmt_rational(r.intercept)}"
    )


def cmd_regimes(s: dict) -> int:
    """Inner table lists active schemes, outer table lists active bounds."""
    config = _config(s)
    tables = {}
    try:
        tables["inner"] = active_scheme_regimes(config, bool(s["constant_channel"]))
    except GdofDomainError as exc:
        print(f"gdof: inner table skipped: {exc}", file=sys.stderr)
        tables["inner"] = []
    tables["outer"] = active_bound_regimes(config)
    if s["format"] == "json":
        doc = {name: [_regime_record(r) for r in rs] for name, rs in tables.items()}
        _emit(json.dumps(doc, indent=1) + "\n", s["out"])
        return 0
    lines = ["table,lo,lo_pq,hi,hi_pq,active,slope_pq,intercept_pq"]
    for name, rs in tables.items():
        lines += [_regime_line(name, r) for r in rs]
    _emit("\n".join(lines) + "\n", s["out"])
    return 0


def _add_common(p: argparse.ArgumentParser, dims: bool = True) -> None:
    p.add_argument("--config", help="TOML file with default option values")
    p.add_argument("--out", help="write to this file instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    if dims:
        p.add_argument("--K", type=int, default=None)
        p.add_argument("--M", type=int, default=None)
        p.add_argument("--N", type=int, default=None)
        p.add_argument("--constant-channel", dest="constant_channel", action="store_true",
                       default=None, help="exclude interference alignment")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gdof", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="tabulate schemes and bounds over alpha")
    _add_common(p)
    p.add_argument("--alpha", default=None, help="start:stop:step or comma list (exact)")
    p.add_argument("--schemes", default=None, help="'all', 'none' or e.g. NOISE,HK")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="write the tables behind a preset figure")
    p.add_argument("name", choices=sorted(report.FIGURES))
    p.add_argument("--out-dir", dest="out_dir", default=None)
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--config", help="TOML file with default option values")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("validate", help="run consistency suites, one JSON record per line")
    p.add_argument("suite", choices=("lemmas", "slopes", "tightness", "theorem4", "zchannel", "all"))
    p.add_argument("--seed", type=int, default=None, help="defaults to $GDOF_SEED or 0")
    p.add_argument("--out", help="write to this file instead of stdout")
    p.add_argument("--config", help="TOML file with default option values")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("regimes", help="list alpha intervals with their best schemes and active bounds")
    _add_common(p)
    p.set_defaults(func=cmd_regimes)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(_settings(args))
    except (GdofDomainError, ValidationError, ValueError) as exc:
        print(f"gdof: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
