"""Two-sample t-test, one-way ANOVA and same/different response arithmetic.

p-values come from a continued-fraction evaluation of the regularized
incomplete beta function; no scipy dependency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterable, Sequence

_CF_TOL = 1e-15
_CF_MAX_ITER = 10000
_TINY = 1e-300


@dataclass(frozen=True)
class StatResult:
    kind: str
    statistic: float
    df1: float
    df2: float
    p_value: float

    def csv_row(self) -> str:
        return f"{self.kind},{self.statistic!r},{self.df1!r},{self.df2!r},{self.p_value!r}"

    def describe(self) -> str:
        if self.kind == "t_test":
            return (f"t({self.df2:g}) = {self.statistic:.4f}, p = {self.p_value:.4g}"
                    f"  [F(1, {self.df2:g}) = {self.statistic ** 2:.4f}]")
        return f"F({self.df1:g}, {self.df2:g}) = {self.statistic:.4f}, p = {self.p_value:.4g}"


CSV_HEADER = "kind,statistic,df1,df2,p"


def _betacf(a: float, b: float, x: float) -> float:
    # modified Lentz evaluation of the incomplete beta continued fraction
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_TOL:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_two_sided_p(t: float, df: float) -> float:
    if math.isnan(t):
        raise ValueError("t is NaN")
    if math.isinf(t):
        return 0.0
    return min(1.0, betainc(df / 2.0, 0.5, df / (df + t * t)))


def f_upper_p(f: float, df1: float, df2: float) -> float:
    if f <= 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    return min(1.0, betainc(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f)))


def _mean_ss(values: Sequence[float]) -> tuple[float, float]:
    m = math.fsum(values) / len(values)
    return m, math.fsum((v - m) ** 2 for v in values)


def two_sample_t(a: Sequence[float], b: Sequence[float], pooled: bool = True) -> StatResult:
    """Student (pooled) or Welch t for mean(a) - mean(b), two-sided p.

    Reported as ``df1 = 1``, ``df2 = df`` so the result reads like F(1, df).
    """
    a, b = [float(v) for v in a], [float(v) for v in b]
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise ValueError("each group needs at least 2 values")
    ma, ssa = _mean_ss(a)
    mb, ssb = _mean_ss(b)
    diff = ma - mb
    if pooled:
        df = float(na + nb - 2)
        se = math.sqrt((ssa + ssb) / df * (1.0 / na + 1.0 / nb))
    else:
        va, vb = ssa / (na - 1) / na, ssb / (nb - 1) / nb
        se = math.sqrt(va + vb)
        df = (va + vb) ** 2 / (va ** 2 / (na - 1) + vb ** 2 / (nb - 1)) if se > 0 else float(na + nb - 2)
    if se == 0.0:
        t = 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
    else:
        t = diff / se
    return StatResult("t_test", t, 1.0, df, t_two_sided_p(t, df))


def one_way_anova(groups: Iterable[Sequence[float]]) -> StatResult:
    groups = [[float(v) for v in g] for g in groups]
    k = len(groups)
    if k < 2 or any(len(g) < 2 for g in groups):
        raise ValueError("need at least 2 groups with at least 2 values each")
    n = sum(len(g) for g in groups)
    grand = math.fsum(v for g in groups for v in g) / n
    stats = [_mean_ss(g) for g in groups]
    ss_between = math.fsum(len(g) * (m - grand) ** 2 for g, (m, _) in zip(groups, stats))
    ss_within = math.fsum(ss for _, ss in stats)
    df1, df2 = float(k - 1), float(n - k)
    if ss_within == 0.0:
        f = 0.0 if ss_between == 0.0 else math.inf
    else:
        f = (ss_between / df1) / (ss_within / df2)
    return StatResult("anova", f, df1, df2, f_upper_p(f, df1, df2))


def describe(values: Sequence[float]) -> tuple[float, float, float]:
    """Mean, sample standard deviation and standard error of the mean."""
    n = len(values)
    if n == 0:
        raise ValueError("no values")
    m, ss = _mean_ss(values)
    sd = math.sqrt(ss / (n - 1)) if n > 1 else 0.0
    return m, sd, sd / math.sqrt(n)


# --- same/different task ---------------------------------------------------

@dataclass(frozen=True)
class ConfusionTable:
    """Response rates in percent for a same/different discrimination task."""

    cn: float
    fn: float
    fp: float
    cp: float

    def __post_init__(self):
        for name in ("cn", "fn", "fp", "cp"):
            if not 0.0 <= getattr(self, name) <= 100.0:
                raise ValueError(f"{name} must be a percentage")
        # printed rates carry one decimal, allow its rounding
        if abs(self.cn + self.fp - 100.0) > 0.1 + 1e-9 or abs(self.fn + self.cp - 100.0) > 0.1 + 1e-9:
            raise ValueError("cn+fp and fn+cp must each sum to 100")

    @property
    def detectability(self) -> float:
        return detectability(self.cp, self.fp)


def detectability(cp: float, fp: float) -> float:
    """Hit rate minus guess rate, in percentage points, in decimal arithmetic."""
    for v in (cp, fp):
        if not 0.0 <= v <= 100.0:
            raise ValueError("rates must be percentages")
    return float(Decimal(repr(float(cp))) - Decimal(repr(float(fp))))


def confusion_from_log(trials: Iterable[tuple[str, str]]) -> ConfusionTable:
    """Tally (pair_kind, response) trials, both from {"same", "different"}."""
    counts = {(p, r): 0 for p in ("same", "different") for r in ("same", "different")}
    for pair, response in trials:
        if (pair, response) not in counts:
            raise ValueError(f"bad trial {(pair, response)!r}")
        counts[pair, response] += 1
    n_same = counts["same", "same"] + counts["same", "different"]
    n_diff = counts["different", "same"] + counts["different", "different"]
    if n_same == 0 or n_diff == 0:
        raise ValueError("log needs at least one same-pair and one different-pair trial")
    return ConfusionTable(
        cn=100.0 * counts["same", "same"] / n_same,
        fn=100.0 * counts["different", "same"] / n_diff,
        fp=100.0 * counts["same", "different"] / n_same,
        cp=100.0 * counts["different", "different"] / n_diff,
    )
