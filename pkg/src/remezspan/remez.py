"""Chebyshev polynomials and closed-form Remez factors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidParameterError, NotApplicableError
from .pointset import make_grid_1d
from .span import omega

# switch to log space beyond this value of d * arccosh(x)
LOG_SWITCH = 700.0


def chebyshev_eval(d, x):
    """T_d(x); cosine form inside [-1, 1], hyperbolic form outside."""
    if d < 0:
        raise InvalidParameterError("degree must be nonnegative")
    x = float(x)
    if abs(x) <= 1.0:
        return math.cos(d * math.acos(x))
    t = d * math.acosh(abs(x))
    if t > LOG_SWITCH:
        mag = math.inf
    else:
        mag = math.cosh(t)
    return -mag if (x < 0 and d % 2) else mag


def chebyshev_log(d, x):
    """log T_d(x) for x >= 1, without overflow."""
    if x < 1:
        raise InvalidParameterError("log form needs x >= 1")
    t = d * math.acosh(x)
    # cosh t = e^t (1 + e^-2t) / 2
    return t + math.log1p(math.exp(-2.0 * t)) - math.log(2.0)


def chebyshev_recurrence(d, x):
    """T_d(x) by the three-term recurrence (reference evaluation)."""
    t0, t1 = 1.0, float(x)
    if d == 0:
        return t0
    for _ in range(d - 1):
        t0, t1 = t1, 2.0 * x * t1 - t0
    return t1


@dataclass(frozen=True)
class BoundReport:
    n: int
    d: int
    lam: float
    factor: float
    source: str
    omega_used: Optional[float] = None
    log_factor: Optional[float] = None
    overflow: bool = False

    def to_dict(self):
        return {"n": self.n, "d": self.d, "lambda": self.lam, "factor": self.factor,
                "log_factor": self.log_factor, "overflow": self.overflow,
                "source": self.source, "omega_used": self.omega_used}


def _report(n, d, lam, x, source, omega_used=None):
    log_f = chebyshev_log(d, x)
    overflow = d * math.acosh(x) > LOG_SWITCH
    factor = math.inf if overflow else chebyshev_eval(d, x)
    return BoundReport(n, d, lam, factor, source, omega_used, log_f, overflow)


def remez_factor_1d(mu, d):
    """Classical factor T_d((4 - mu)/mu) for a subset of measure mu of [-1, 1]."""
    if not 0 < mu <= 2:
        raise InvalidParameterError("mu must lie in (0, 2]")
    return _report(1, d, mu / 2.0, (4.0 - mu) / mu, "remez-classical")


def brudnyi_ganzburg_factor(n, d, lam, source="brudnyi-ganzburg"):
    """T_d((1 + (1-lam)^(1/n)) / (1 - (1-lam)^(1/n))) for a measure ratio lam."""
    if not 0 < lam <= 1:
        raise InvalidParameterError("lambda must lie in (0, 1]")
    if lam == 1:
        return BoundReport(n, d, 1.0, 1.0, source, None, 0.0, False)
    # 1 - (1 - lam)^(1/n) without cancellation for small lam
    g = -math.expm1(math.log1p(-lam) / n)
    return _report(n, d, lam, (2.0 - g) / g, source)


def remez_span_bound(Z, d, model=None, normalization="box"):
    """Bound on R_d(Z) from the certified lower d-span.

    ``normalization="box"`` uses lambda = omega / vol(box) (sound for any box);
    ``"unit"`` uses lambda = omega directly, as for a unit-volume cube.
    """
    res = omega(Z, d, model)
    w = res.omega_lo
    if not w > 0:
        raise NotApplicableError("d-span is zero; no bound from the metric span")
    if normalization == "box":
        lam = min(1.0, w / Z.box.volume)
    elif normalization == "unit":
        lam = min(1.0, w)
    else:
        raise InvalidParameterError(f"unknown normalization {normalization!r}")
    rep = brudnyi_ganzburg_factor(Z.dim, d, lam, source=f"span-bound/{normalization}")
    return BoundReport(rep.n, rep.d, rep.lam, rep.factor, rep.source, w,
                       rep.log_factor, rep.overflow)


def grid_product_bound(n, s, d):
    """[bound for the 1D grid]^n, valid for the n-dimensional tensor grid."""
    if s <= d:
        raise NotApplicableError("grid bound needs s > d")
    return remez_span_bound(make_grid_1d(s), d).factor ** n
