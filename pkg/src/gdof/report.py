"""Tabular sweeps of inner and outer bounds over alpha, with figure presets."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import inner, outer
from .channel import SymmetricConfig
from .errors import GdofDomainError
from .inner import Scheme
from .outer import Bound

SCHEME_ORDER = (Scheme.NOISE, Scheme.ZF, Scheme.IA, Scheme.HK)
BOUND_COLUMNS = ("LEMMA1", "LEMMA2", "LEMMA3", "OUTER")


def parse_alpha_range(spec: str) -> list:
    """``"start:stop:step"`` (stop inclusive) or a comma list, all parsed exactly."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"alpha range must be start:stop:step, got {spec!r}")
        start, stop, step = (Fraction(p) for p in parts)
        if step <= 0:
            raise ValueError("alpha step must be positive")
        if start < 0 or stop < start:
            raise ValueError("alpha range must satisfy 0 <= start <= stop")
        count = int((stop - start) / step)
        return [start + k * step for k in range(count + 1)]
    return [Fraction(p) for p in spec.split(",") if p.strip()]


def parse_schemes(spec: str | Sequence[str]) -> tuple:
    if isinstance(spec, str):
        if spec.strip().lower() == "all":
            return SCHEME_ORDER
        if spec.strip().lower() == "none":
            return ()
        spec = [s for s in spec.split(",") if s.strip()]
    chosen = {Scheme(s.strip().upper()) for s in spec}
    return tuple(s for s in SCHEME_ORDER if s in chosen)


def fmt_decimal(x: Fraction) -> str:
    return format(float(x), ".12g")


def fmt_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _label(items: Iterable) -> str:
    return "+".join(sorted(str(i) for i in items))


@dataclass(frozen=True)
class SweepSpec:
    config: SymmetricConfig
    alphas: tuple
    schemes: tuple = SCHEME_ORDER
    bounds: tuple = BOUND_COLUMNS
    constant_channel: bool = False
    inner: bool = True


def header(spec: SweepSpec) -> list:
    cols = ["alpha", "alpha_pq"]
    inner_col = ["INNER"] if spec.inner else []
    for name in [s.value for s in spec.schemes] + inner_col + list(spec.bounds):
        cols += [name, f"{name}_pq"]
    return cols + ["active_inner", "active_outer", "reason"]


def sweep_rows(spec: SweepSpec) -> list:
    """One dict per alpha; values are exact ``Fraction`` or ``None`` with a reason."""
    c = spec.config
    rows = []
    for a in spec.alphas:
        row: dict = {"alpha": a}
        reasons = []
        for s in spec.schemes:
            if s is Scheme.IA and spec.constant_channel:
                row[s.value] = None
                reasons.append("IA: needs time-varying channel")
                continue
            try:
                row[s.value] = inner.scheme_value(s, c, a)
            except GdofDomainError as exc:
                row[s.value] = None
                reasons.append(f"{s.value}: {exc}")
        try:
            best = inner.gdof_inner_combined(c, a, spec.constant_channel)
            row["INNER"] = best.value
            row["active_inner"] = _label(best.active)
        except GdofDomainError as exc:
            row["INNER"] = None
            row["active_inner"] = ""
            reasons.append(f"INNER: {exc}")
        report = outer.outer_combined(c, a)
        bound_vals = {
            "LEMMA1": outer.lemma1_bound(c, a).value,
            "LEMMA2": outer.lemma2_bound(c, a),
            "OUTER": report.value,
        }
        if outer.lemma3_applicable(c):
            bound_vals["LEMMA3"] = outer.lemma3_bound(c, a)
        for b in spec.bounds:
            row[b] = bound_vals.get(b)
            if row[b] is None:
                reasons.append(f"{b}: requires N/M < K <= N/M + 1")
        row["active_outer"] = _label(report.active)
        row["reason"] = "; ".join(reasons)
        rows.append(row)
    return rows


def _flat(spec: SweepSpec, rows: list) -> list:
    cols = header(spec)
    out = []
    for row in rows:
        rec = {}
        for col in cols:
            if col.endswith("_pq"):
                v = row.get(col[:-3])
                rec[col] = "" if v is None else fmt_rational(v)
            elif col in ("active_inner", "active_outer", "reason"):
                rec[col] = row.get(col, "")
            else:
                v = row.get(col)
                rec[col] = "" if v is None else fmt_decimal(v)
        out.append(rec)
    return out


def to_csv(spec: SweepSpec, rows: list) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header(spec), lineterminator="\n")
    writer.writeheader()
    writer.writerows(_flat(spec, rows))
    return buf.getvalue()


def to_json(spec: SweepSpec, rows: list) -> str:
    c = spec.config
    doc = {"config": {"K": c.K, "M": c.M, "N": c.N}, "rows": _flat(spec, rows)}
    return json.dumps(doc, indent=1) + "\n"


# --------------------------------------------------------------------------
# figure presets

_ALPHAS = tuple(parse_alpha_range("0:3:0.01"))


def _k3(pairs, **kw) -> list:
    return [SweepSpec(SymmetricConfig(3, m, n), _ALPHAS, **kw) for m, n in pairs]


def _k4(pairs, **kw) -> list:
    return [SweepSpec(SymmetricConfig(4, m, n), _ALPHAS, **kw) for m, n in pairs]


# each preset emits the curves its figure plots
_OUTER = ("OUTER",)

FIGURES = {
    "fig2": _k3([(2, 2), (2, 4)], schemes=(), inner=False),
    "fig3": _k3([(2, 2)], bounds=_OUTER),
    "fig4": _k3(
        [(1, 1), (1, 2), (2, 3), (2, 4), (2, 5), (2, 6)],
        schemes=(), bounds=_OUTER, constant_channel=True,
    ),
    "fig5": _k4([(1, 1), (1, 2), (1, 3), (2, 3), (2, 5), (2, 6)], schemes=(), bounds=_OUTER),
    "fig6": _k3([(1, 6), (2, 5), (3, 4)], schemes=(), bounds=()),
    "fig7": _k3([(1, 9), (2, 8), (3, 7), (4, 6), (5, 5)], schemes=(), bounds=()),
}


def figure_specs(name: str) -> list:
    try:
        return FIGURES[name]
    except KeyError:
        raise ValueError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}") from None


def figure_filename(name: str, spec: SweepSpec, ext: str = "csv") -> str:
    c = spec.config
    return f"{name}_K{c.K}_M{c.M}_N{c.N}.{ext}"
