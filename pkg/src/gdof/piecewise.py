"""Exact piecewise-linear functions on ``[0, inf)`` with rational breakpoints."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

Line = tuple  # (slope, intercept)


def _line_at(line: Line, x: Fraction) -> Fraction:
    return line[0] * x + line[1]


def _crossing(a: Line, b: Line, lo: Fraction, hi: Fraction | None) -> Fraction | None:
    """Point strictly inside ``(lo, hi)`` where two lines cross, if any."""
    ds = a[0] - b[0]
    if ds == 0:
        return None
    x = (b[1] - a[1]) / ds
    if x > lo and (hi is None or x < hi):
        return x
    return None


@dataclass(frozen=True)
class PiecewiseLinear:
    """``starts[k]`` is where ``lines[k]`` takes over; ``starts[0] == 0``.

    The last piece extends to infinity.
    """

    starts: tuple
    lines: tuple

    @classmethod
    def constant(cls, c) -> "PiecewiseLinear":
        return cls((Fraction(0),), ((Fraction(0), Fraction(c)),))

    @classmethod
    def linear(cls, slope, intercept) -> "PiecewiseLinear":
        return cls((Fraction(0),), ((Fraction(slope), Fraction(intercept)),))

    @classmethod
    def splice(cls, parts: Sequence[tuple]) -> "PiecewiseLinear":
        """Use ``f_k`` on ``[start_k, start_{k+1}]`` for ``parts = [(start_k, f_k), ...]``."""
        starts, lines = [], []
        for k, (start, f) in enumerate(parts):
            start = Fraction(start)
            end = Fraction(parts[k + 1][0]) if k + 1 < len(parts) else None
            if end is not None and end <= start:
                continue
            for s, line in f.restrict(start, end):
                starts.append(s)
                lines.append(line)
        if not starts or starts[0] != 0:
            raise ValueError("spliced function must start at 0")
        return cls(tuple(starts), tuple(lines)).simplify()

    def restrict(self, lo: Fraction, hi: Fraction | None):
        """Pieces of ``self`` overlapping ``[lo, hi)`` as ``(start, line)`` pairs."""
        out = []
        for k, line in enumerate(self.lines):
            s = self.starts[k]
            e = self.starts[k + 1] if k + 1 < len(self.starts) else None
            if e is not None and e <= lo:
                continue
            if hi is not None and s >= hi:
                break
            out.append((max(s, lo), line))
        return out

    def piece_index(self, x) -> int:
        k = 0
        while k + 1 < len(self.starts) and self.starts[k + 1] <= x:
            k += 1
        return k

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        return _line_at(self.lines[self.piece_index(x)], x)

    def breakpoints(self) -> tuple:
        return self.starts[1:]

    def simplify(self) -> "PiecewiseLinear":
        starts, lines = [self.starts[0]], [self.lines[0]]
        for s, line in zip(self.starts[1:], self.lines[1:]):
            if line == lines[-1]:
                continue
            starts.append(s)
            lines.append(line)
        return PiecewiseLinear(tuple(starts), tuple(lines))

    def _combine(self, other: "PiecewiseLinear", pick) -> "PiecewiseLinear":
        cuts = sorted(set(self.starts) | set(other.starts))
        starts, lines = [], []
        for k, lo in enumerate(cuts):
            hi = cuts[k + 1] if k + 1 < len(cuts) else None
            a = self.lines[self.piece_index(lo)]
            b = other.lines[other.piece_index(lo)]
            x = _crossing(a, b, lo, hi)
            sub = [lo] if x is None else [lo, x]
            for j, s in enumerate(sub):
                probe = sub[j + 1] if j + 1 < len(sub) else (hi if hi is not None else s + 1)
                mid = (s + probe) / 2 if probe != s else s
                starts.append(s)
                lines.append(pick(a, b, mid))
        return PiecewiseLinear(tuple(starts), tuple(lines)).simplify()

    def minimum(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        return self._combine(other, lambda a, b, m: a if _line_at(a, m) <= _line_at(b, m) else b)

    def maximum(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        return self._combine(other, lambda a, b, m: a if _line_at(a, m) >= _line_at(b, m) else b)

    def add(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        cuts = sorted(set(self.starts) | set(other.starts))
        lines = []
        for lo in cuts:
            a = self.lines[self.piece_index(lo)]
            b = other.lines[other.piece_index(lo)]
            lines.append((a[0] + b[0], a[1] + b[1]))
        return PiecewiseLinear(tuple(cuts), tuple(lines)).simplify()


def pl_min(fs: Iterable[PiecewiseLinear]) -> PiecewiseLinear:
    fs = list(fs)
    out = fs[0]
    for f in fs[1:]:
        out = out.minimum(f)
    return out


def pl_max(fs: Iterable[PiecewiseLinear]) -> PiecewiseLinear:
    fs = list(fs)
    out = fs[0]
    for f in fs[1:]:
        out = out.maximum(f)
    return out


@dataclass(frozen=True)
class Segment:
    """``[lo, hi]`` (``hi`` is ``None`` for an unbounded tail) with its maximizers."""

    lo: Fraction
    hi: Fraction | None
    active: frozenset
    value: Line


def argmax_segments(named: dict) -> list:
    """Partition ``[0, inf)`` by which named functions attain the pointwise maximum.

    Adjacent intervals with the same maximizer set are merged. At a shared
    endpoint the left and right segments both list their own maximizers.
    """
    cuts = set()
    for f in named.values():
        cuts.update(f.starts)
    cuts = sorted(cuts)
    # add every pairwise crossing so each elementary interval has fixed order
    extra = set()
    for k, lo in enumerate(cuts):
        hi = cuts[k + 1] if k + 1 < len(cuts) else None
        lines = [f.lines[f.piece_index(lo)] for f in named.values()]
        for a, b in combinations(lines, 2):
            x = _crossing(a, b, lo, hi)
            if x is not None:
                extra.add(x)
    cuts = sorted(set(cuts) | extra)

    segments: list[Segment] = []
    for k, lo in enumerate(cuts):
        hi = cuts[k + 1] if k + 1 < len(cuts) else None
        mid = (lo + hi) / 2 if hi is not None else lo + 1
        vals = {name: f(mid) for name, f in named.items()}
        best = max(vals.values())
        active = frozenset(n for n, v in vals.items() if v == best)
        name0 = sorted(active)[0]
        f0 = named[name0]
        line = f0.lines[f0.piece_index(mid)]
        if segments and segments[-1].active == active and segments[-1].value == line:
            prev = segments[-1]
            segments[-1] = Segment(prev.lo, hi, active, line)
        else:
            segments.append(Segment(lo, hi, active, line))
    return segments
