"""Parameter scans, log-log exponent fits and plot-data files."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .arith import certified_floor_frac, parse_c
from .bounds import DEFAULT_PAIR, error_bound_lsz, error_bound_theorem, tau_lsz, tau_new
from .counting import count_Qfrak
from .errors import DegenerateFit, PreconditionError
from .exppairs import ExponentPair

COLUMNS = (
    "c_num",
    "c_den",
    "N",
    "S",
    "exact_count",
    "main_term",
    "deviation",
    "bound_total",
    "bound_argmin",
    "seconds",
)
INT_COLUMNS = ("c_num", "c_den", "N", "S", "exact_count")
REAL_COLUMNS = ("main_term", "deviation", "bound_total")


def fmt_real(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class SRule:
    """Either a fixed ``S`` or ``S = [N^beta]`` (at least 1)."""

    fixed: Optional[int] = None
    beta: Optional[Fraction] = None

    def __post_init__(self):
        if (self.fixed is None) == (self.beta is None):
            raise PreconditionError("give exactly one of fixed S or beta")
        if self.fixed is not None and self.fixed < 1:
            raise PreconditionError(f"S must be >= 1, got {self.fixed}")
        if self.beta is not None and self.beta < 0:
            raise PreconditionError(f"beta must be >= 0, got {self.beta}")

    @classmethod
    def parse(cls, text: str) -> "SRule":
        """``"10"`` or ``"N^1/2"``."""
        text = text.strip().replace(" ", "")
        try:
            if text.upper().startswith("N^"):
                return cls(beta=Fraction(text[2:].strip("()")))
            return cls(fixed=int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"cannot parse S rule {text!r}") from exc

    def S_for(self, N: int) -> int:
        if self.fixed is not None:
            return self.fixed
        if self.beta == 0:
            return 1
        return max(1, certified_floor_frac(N, self.beta)[0])

    @property
    def exponent(self) -> Fraction:
        return Fraction(0) if self.beta is None else self.beta


@dataclass(frozen=True)
class ScanConfig:
    cs: tuple[Fraction, ...]
    Ns: tuple[int, ...]
    s_rule: SRule
    pair: ExponentPair = DEFAULT_PAIR
    out: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "cs", tuple(parse_c(c) for c in self.cs))
        object.__setattr__(self, "Ns", tuple(int(n) for n in self.Ns))
        if not self.cs or not self.Ns:
            raise PreconditionError("scan needs at least one c and one N")
        if any(b <= a for a, b in zip(self.Ns, self.Ns[1:])) or self.Ns[0] < 1:
            raise PreconditionError("N grid must be positive and strictly increasing")
        if self.s_rule.beta is not None and any(self.s_rule.beta > c for c in self.cs):
            raise PreconditionError("S = N^beta needs beta <= c")


@dataclass(frozen=True)
class ScanRow:
    c_num: int
    c_den: int
    N: int
    S: int
    exact_count: int
    main_term: float
    deviation: float
    bound_total: float
    bound_argmin: str
    seconds: float = field(default=0.0, compare=False)

    @property
    def c(self) -> Fraction:
        return Fraction(self.c_num, self.c_den)


def geometric_grid(lo_exp: float, hi_exp: float, per_decade: int = 1) -> tuple[int, ...]:
    """Distinct integers ``round(10^t)`` for ``t`` from ``lo_exp`` to ``hi_exp``."""
    steps = int(round((hi_exp - lo_exp) * per_decade))
    vals = sorted({int(round(10 ** (lo_exp + i / per_decade))) for i in range(steps + 1)})
    return tuple(vals)


def _scan_row(job) -> ScanRow:
    c, N, S, pair = job
    start = time.perf_counter()
    rep = count_Qfrak(c, S, N, pair)
    return ScanRow(
        c.numerator,
        c.denominator,
        N,
        rep.s_or_S,
        rep.exact_count,
        rep.main_term,
        rep.deviation,
        rep.bound.total,
        rep.bound.min_label,
        time.perf_counter() - start,
    )


def run_scan(config: ScanConfig) -> list[ScanRow]:
    """One row per ``(c, N)`` in config order; written as CSV when ``out`` is set."""
    jobs = [(c, N, config.s_rule.S_for(N), config.pair) for c in config.cs for N in config.Ns]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            rows = list(pool.map(_scan_row, jobs))
    else:
        rows = [_scan_row(j) for j in jobs]
    if config.out:
        write_csv(rows, config.out)
    return rows


def rows_to_csv(rows: Iterable[ScanRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow(
            [
                r.c_num,
                r.c_den,
                r.N,
                r.S,
                r.exact_count,
                fmt_real(r.main_term),
                fmt_real(r.deviation),
                fmt_real(r.bound_total),
                r.bound_argmin,
                f"{r.seconds:.6f}",
            ]
        )
    return buf.getvalue()


def write_csv(rows: Iterable[ScanRow], path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(rows_to_csv(rows))


def parse_csv(text: str) -> list[ScanRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise PreconditionError(f"unexpected CSV columns {reader.fieldnames}")
    rows = []
    for rec in reader:
        rows.append(
            ScanRow(
                *(int(rec[k]) for k in INT_COLUMNS),
                *(float(rec[k]) for k in REAL_COLUMNS),
                rec["bound_argmin"],
                float(rec["seconds"]),
            )
        )
    return rows


def read_csv(path: str) -> list[ScanRow]:
    with open(path, newline="") as fh:
        return parse_csv(fh.read())


def mask_seconds(text: str) -> str:
    """CSV text with the wall-clock column blanked, for determinism checks."""
    lines = text.splitlines()
    return "\n".join([lines[0]] + [ln.rsplit(",", 1)[0] + "," for ln in lines[1:]]) + "\n"


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    predicted_exponent: float
    margin: float
    argmin_label: str
    n_points: int
    excluded: tuple[int, ...] = ()


def log_log_fit(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, float]:
    """Least squares of ``ln y`` on ``ln x``; returns slope, intercept, R^2."""
    lx, ly = np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), min(max(r2, 0.0), 1.0)


def _infer_beta(rows: Sequence[ScanRow]) -> Fraction:
    if len({r.S for r in rows}) == 1:
        return Fraction(0)
    last = rows[-1]
    return Fraction(math.log(last.S) / math.log(last.N)).limit_denominator(20)


def fit_error_exponent(
    rows: Sequence[ScanRow],
    against: str = "theorem",
    beta: Optional[Fraction] = None,
    pair: ExponentPair = DEFAULT_PAIR,
) -> FitResult:
    """Fit ``ln|deviation|`` against ``ln N`` and compare with the bound's exponent.

    The predicted exponent is the N-exponent, under ``S = N^beta``, of the
    argmin term at the largest ``N`` (plus the additive ``S N^(1-c)`` term
    for the theorem).  Rows with zero deviation are excluded.
    """
    if against not in ("theorem", "lsz"):
        raise PreconditionError(f"against must be 'theorem' or 'lsz', got {against!r}")
    if len(rows) < 3:
        raise DegenerateFit(f"need at least 3 rows, got {len(rows)}")
    if len({(r.c_num, r.c_den) for r in rows}) != 1:
        raise PreconditionError("rows must share a common c")
    rows = sorted(rows, key=lambda r: r.N)
    excluded = tuple(r.N for r in rows if r.deviation == 0)
    used = [r for r in rows if r.deviation != 0]
    if len(used) < 3:
        raise DegenerateFit(f"only {len(used)} rows with nonzero deviation (excluded N={excluded})")
    slope, intercept, r2 = log_log_fit([r.N for r in used], [abs(r.deviation) for r in used])
    if beta is None:
        beta = _infer_beta(rows)
    last = rows[-1]
    if against == "theorem":
        prof = error_bound_theorem(last.c, last.S, last.N, pair)
        predicted = prof.n_exponent(beta, prof.min_label)
    else:
        prof = error_bound_lsz(last.c, last.S, last.N)
        predicted = prof.n_exponent(beta)
    predicted = float(predicted)
    return FitResult(slope, intercept, r2, predicted, slope - predicted, prof.min_label, len(used), excluded)


def tau_grid(lo: int = 101, hi: int = 199, den: int = 100) -> list[Fraction]:
    return [Fraction(k, den) for k in range(lo, hi + 1)]


def emit_plotdata(rows: Sequence[ScanRow], kind: str, path: Optional[str] = None) -> str:
    """Columnar text for external plotting; returns the text and writes ``path``."""
    lines = []
    if kind == "deviation":
        lines.append("# N deviation")
        lines += [f"{r.N} {fmt_real(r.deviation)}" for r in rows]
    elif kind == "ratio":
        lines.append("# N deviation/bound_total")
        lines += [f"{r.N} {fmt_real(r.deviation / r.bound_total)}" for r in rows]
    elif kind == "tau":
        lines.append("# tau_lsz is continuous with a kink at c = 12/7 (both branches 4/7)")
        lines.append("# tau_new jumps at c = 18/11: c - eps below, 3(2 - c) above")
        lines.append("# c tau_lsz tau_new")
        lines += [f"{fmt_real(c)} {fmt_real(tau_lsz(c))} {fmt_real(tau_new(c))}" for c in tau_grid()]
    else:
        raise PreconditionError(f"unknown plot kind {kind!r}")
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text
