"""The damped-wave solution operator and its decay-estimate verifiers.

Per Fourier mode the flow solves v'' + v' + |xi|^2 v = 0.  Its kernel
L(t, xi) is sinh(t*w)/w below the threshold |xi| = 1/2 (w^2 = 1/4 - |xi|^2)
and sin(t*w)/w above it; a short even Taylor series in |xi|^2 - 1/4 bridges
the removable singularity.  The damped operator multiplies by exp(-t/2),
which is always fused into the symbol so large times neither overflow nor
lose the bounded product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from besov_wave_lab.grid import GridField, apply_symbol
from besov_wave_lab.littlewood_paley import DyadicBlocks, make_blocks
from besov_wave_lab.norms import besov_seminorm, lebesgue_norm, time_bracket
from besov_wave_lab.reporting import ExperimentReport, Table

__all__ = [
    "DELTA_BAND",
    "PropagatorSymbol",
    "symbol_L",
    "symbol_dtL",
    "damped_L",
    "damped_dtL",
    "apply_D",
    "apply_dtD",
    "linear_solution",
    "pair_flow",
    "fit_power_law",
    "verify_lp_lq",
    "BlockEstimateReport",
    "verify_block_estimate",
]

DELTA_BAND = 1e-3
_SERIES_TERMS = 9  # degree 8 in z = |xi|^2 - 1/4
_X_SERIES_MAX = 1.0

_L_COEFFS = np.array(
    [(-1.0) ** m / math.factorial(2 * m + 1) for m in range(_SERIES_TERMS)]
)
_DTL_COEFFS = np.array(
    [(-1.0) ** m / math.factorial(2 * m) for m in range(_SERIES_TERMS)]
)


def _poly(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = np.full_like(x, coeffs[-1])
    for c in coeffs[-2::-1]:
        out = out * x + c
    return out


def _branch_masks(t: float, xi: np.ndarray):
    z = (xi - 0.5) * (xi + 0.5)
    band = np.abs(xi - 0.5) <= DELTA_BAND
    series = band & (np.abs(t * t * z) <= _X_SERIES_MAX)
    low = (xi < 0.5) & ~series
    high = ~series & ~low
    return z, series, low, high


def symbol_L(t: float, xi_abs) -> np.ndarray:
    """Raw kernel L(t, |xi|); even in t*sqrt(|1/4 - xi^2|) across branches."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    scalar = np.isscalar(xi_abs)
    xi = np.atleast_1d(np.asarray(xi_abs, dtype=float))
    z, series, low, high = _branch_masks(t, xi)
    out = np.empty_like(xi)
    if np.any(series):
        x = t * t * z[series]
        out[series] = t * _poly(_L_COEFFS, x)
    if np.any(low):
        w = np.sqrt(-z[low])
        out[low] = np.sinh(t * w) / w
    if np.any(high):
        w = np.sqrt(z[high])
        out[high] = np.sin(t * w) / w
    return float(out[0]) if scalar else out


def symbol_dtL(t: float, xi_abs) -> np.ndarray:
    """Raw time derivative of the kernel: cosh/cos branches plus the series."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    scalar = np.isscalar(xi_abs)
    xi = np.atleast_1d(np.asarray(xi_abs, dtype=float))
    z, series, low, high = _branch_masks(t, xi)
    out = np.empty_like(xi)
    if np.any(series):
        x = t * t * z[series]
        out[series] = _poly(_DTL_COEFFS, x)
    if np.any(low):
        out[low] = np.cosh(t * np.sqrt(-z[low]))
    if np.any(high):
        out[high] = np.cos(t * np.sqrt(z[high]))
    return float(out[0]) if scalar else out


def damped_L(t: float, xi_abs) -> np.ndarray:
    """exp(-t/2) * L(t, |xi|) in one fused expression (no overflow for any t)."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    scalar = np.isscalar(xi_abs)
    xi = np.atleast_1d(np.asarray(xi_abs, dtype=float))
    z, series, low, high = _branch_masks(t, xi)
    out = np.empty_like(xi)
    if np.any(series):
        x = t * t * z[series]
        out[series] = math.exp(-t / 2.0) * t * _poly(_L_COEFFS, x)
    if np.any(low):
        w = np.sqrt(-z[low])
        out[low] = (np.exp(t * (w - 0.5)) - np.exp(-t * (w + 0.5))) / (2.0 * w)
    if np.any(high):
        w = np.sqrt(z[high])
        out[high] = math.exp(-t / 2.0) * np.sin(t * w) / w
    return float(out[0]) if scalar else out


def damped_dtL(t: float, xi_abs) -> np.ndarray:
    """exp(-t/2) * (dL/dt - L/2), the symbol of the differentiated flow."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    scalar = np.isscalar(xi_abs)
    xi = np.atleast_1d(np.asarray(xi_abs, dtype=float))
    z, series, low, high = _branch_masks(t, xi)
    out = np.empty_like(xi)
    if np.any(series):
        x = t * t * z[series]
        out[series] = math.exp(-t / 2.0) * (
            _poly(_DTL_COEFFS, x) - 0.5 * t * _poly(_L_COEFFS, x)
        )
    if np.any(low):
        w = np.sqrt(-z[low])
        ep = np.exp(t * (w - 0.5))
        em = np.exp(-t * (w + 0.5))
        out[low] = 0.5 * (ep + em) - 0.25 * (ep - em) / w
    if np.any(high):
        w = np.sqrt(z[high])
        damp = math.exp(-t / 2.0)
        out[high] = damp * (np.cos(t * w) - 0.5 * np.sin(t * w) / w)
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class PropagatorSymbol:
    """Scalar view of the kernel for inspection and branch-consistency tests."""

    threshold_band_halfwidth: float = DELTA_BAND

    def eval_L(self, t: float, xi_abs: float) -> float:
        return symbol_L(t, xi_abs)

    def eval_dtL(self, t: float, xi_abs: float) -> float:
        return symbol_dtL(t, xi_abs)


def apply_D(t: float, g: GridField) -> GridField:
    """Damped-wave flow applied to data (0, g)."""
    return apply_symbol(damped_L(t, g.grid.freq_abs), g)


def apply_dtD(t: float, g: GridField) -> GridField:
    """Time derivative of the damped-wave flow applied to (0, g)."""
    return apply_symbol(damped_dtL(t, g.grid.freq_abs), g)


def linear_solution(u0: GridField, u1: GridField, t: float) -> GridField:
    """Flow of the homogeneous problem from data (u0, u1)."""
    if u0.grid != u1.grid:
        raise ValueError("initial data live on different grids")
    return apply_D(t, u0 + u1) + apply_dtD(t, u0)


def pair_flow(u: GridField, v: GridField, t: float) -> tuple[GridField, GridField]:
    """One application of the two-component linear flow to the state (u, u_t)."""
    if u.grid != v.grid:
        raise ValueError("state components live on different grids")
    xi = u.grid.freq_abs
    e12 = damped_L(t, xi)
    e22 = damped_dtL(t, xi)
    e11 = e22 + e12  # exp(-t/2) * (dL/dt + L/2)
    e21 = -(xi**2) * e12
    new_u = apply_symbol(e11, u) + apply_symbol(e12, v)
    new_v = apply_symbol(e21, u) + apply_symbol(e22, v)
    return new_u, new_v


def fit_power_law(
    ts: np.ndarray,
    values: np.ndarray,
    *,
    window: tuple[float, float] | None = None,
) -> tuple[float, float, float]:
    """Least-squares fit of log10(value) against log10(<t>).

    window restricts the fit to t in [lo, hi]; the default is the last
    decade of the grid.  Returns (slope, intercept, max residual in log10).
    """
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    if window is None:
        window = (ts[-1] / 10.0, ts[-1])
    mask = (ts >= window[0]) & (ts <= window[1]) & (values > 0)
    if np.count_nonzero(mask) < 2:
        raise ValueError("fit window contains fewer than two positive samples")
    x = np.log10(time_bracket(ts[mask]))
    y = np.log10(values[mask])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(y - (slope * x + intercept))))
    return float(slope), float(intercept), resid


def _fit_high_growth(
    ts: np.ndarray, high_vals: np.ndarray, high_norm: float
) -> tuple[float, float]:
    """Nonnegative exponent delta and constant so that
    high_vals <= C * exp(-t/2) * <t>^delta * high_norm on the grid."""
    mask = (high_vals > 0) & (ts > 0)
    if high_norm <= 0 or np.count_nonzero(mask) < 2:
        return 0.0, 1.0
    excess = np.log10(high_vals[mask]) + ts[mask] / (2.0 * math.log(10.0)) - math.log10(
        high_norm
    )
    x = np.log10(time_bracket(ts[mask]))
    slope, _ = np.polyfit(x, excess, 1)
    delta = max(0.0, float(slope))
    const = 10.0 ** float(np.max(excess - delta * x))
    return delta, const


def verify_lp_lq(
    g: GridField,
    p: float,
    q: float,
    s1: float,
    s2: float,
    t_grid: np.ndarray,
    *,
    blocks: DyadicBlocks | None = None,
    fit_window: tuple[float, float] | None = None,
) -> ExperimentReport:
    """Measure the Besov-norm decay of the flow against its two-sided bound.

    Tabulates ||D(t)g||_{B^{s1}_{p,2}}, the low-frequency bound with rate
    -(n/2)(1/q - 1/p) - (s1 - s2)/2, the exponentially damped high-frequency
    bound with a fitted nonnegative log-growth exponent, and their ratio.
    """
    if not (1.0 <= q <= p) or math.isinf(p) or p == 1.0:
        raise ValueError("need 1 <= q <= p < inf with p != 1")
    if s1 < s2:
        raise ValueError("need s1 >= s2")
    if blocks is None:
        blocks = make_blocks(g.grid)
    n = g.grid.n
    beta = (n - 1) * abs(0.5 - 1.0 / p)
    low_exponent = -(n / 2.0) * (1.0 / q - 1.0 / p) - (s1 - s2) / 2.0

    g_low = blocks.low_pass(g, 1.0)
    g_high = blocks.high_pass(g, 1.0)
    low_norm = besov_seminorm(g_low, s2, q, blocks=blocks)
    high_norm = besov_seminorm(g_high, s1 + beta - 1.0, p, blocks=blocks)

    ts = np.asarray(t_grid, dtype=float)
    lhs = np.empty_like(ts)
    lhs_low = np.empty_like(ts)
    lhs_high = np.empty_like(ts)
    for i, t in enumerate(ts):
        lhs[i] = besov_seminorm(apply_D(t, g), s1, p, blocks=blocks)
        lhs_low[i] = besov_seminorm(apply_D(t, g_low), s1, p, blocks=blocks)
        lhs_high[i] = besov_seminorm(apply_D(t, g_high), s1, p, blocks=blocks)

    delta_hat, high_const = _fit_high_growth(ts, lhs_high, high_norm)
    bracket = time_bracket(ts)
    low_bound = bracket**low_exponent * low_norm
    high_bound = high_const * np.exp(-ts / 2.0) * bracket**delta_hat * high_norm
    denom = low_bound + high_bound
    ratio = np.divide(lhs, denom, out=np.zeros_like(lhs), where=denom > 0)

    scalars: dict[str, float] = {
        "expected_low_exponent": low_exponent,
        "delta_hat": delta_hat,
        "high_const": high_const,
        "max_ratio": float(np.max(ratio)),
        "low_norm": low_norm,
        "high_norm": high_norm,
        "beta": beta,
    }
    if low_norm > 0 and np.any(lhs_low > 0):
        slope, _, _ = fit_power_law(ts, lhs_low, window=fit_window)
        scalars["fitted_low_exponent"] = slope
    table = Table(
        columns=["t", "lhs", "lhs_low", "lhs_high", "low_bound", "high_bound", "ratio"],
        rows=[
            [float(ts[i]), float(lhs[i]), float(lhs_low[i]), float(lhs_high[i]),
             float(low_bound[i]), float(high_bound[i]), float(ratio[i])]
            for i in range(ts.size)
        ],
    )
    return ExperimentReport(
        kind="verify-lp-lq",
        scalars=scalars,
        tables={"decay": table},
        meta={"p": p, "q": q, "s1": s1, "s2": s2, "n": n},
    )


@dataclass
class BlockEstimateReport:
    k: int
    side: str
    ts: np.ndarray
    ratios: np.ndarray
    max_ratio: float
    fitted_exponent: float | None

    def __post_init__(self) -> None:
        finite = np.isfinite(self.ratios)
        if not np.all(finite):
            raise ValueError("block-estimate ratios must be finite")


def verify_block_estimate(
    g: GridField,
    k: int,
    t_grid: np.ndarray,
    *,
    p: float = 2.0,
    q: float = 2.0,
    s1: float = 0.0,
    s2: float = 0.0,
    blocks: DyadicBlocks | None = None,
) -> BlockEstimateReport:
    """Per-block decay ratio at dyadic index k.

    k <= 0 compares 2^(k*s1) ||block_k D(t) g||_p with the polynomially
    decaying bound; k >= 1 compares against exp(-t/2) 2^(k(s1+beta-1)) with
    a fitted log-growth exponent of the exp(t/2)-compensated ratio.
    """
    if blocks is None:
        blocks = make_blocks(g.grid)
    if not (blocks.j_min <= k <= blocks.j_max):
        raise ValueError(f"block index {k} outside [{blocks.j_min}, {blocks.j_max}]")
    n = g.grid.n
    beta = (n - 1) * abs(0.5 - 1.0 / p)
    ts = np.asarray(t_grid, dtype=float)
    gk = blocks.block(g, k)
    lhs = np.array(
        [2.0 ** (k * s1) * lebesgue_norm(apply_D(t, gk), p) for t in ts]
    )
    if k <= 0:
        rate = -(n / 2.0) * (1.0 / q - 1.0 / p) - (s1 - s2) / 2.0
        rhs = time_bracket(ts) ** rate * 2.0 ** (k * s2) * lebesgue_norm(gk, q)
        side = "low"
        fitted = None
    else:
        rhs = np.exp(-ts / 2.0) * 2.0 ** (k * (s1 + beta - 1.0)) * lebesgue_norm(gk, p)
        side = "high"
        compensated = np.divide(lhs, rhs, out=np.zeros_like(lhs), where=rhs > 0)
        pos = compensated > 0
        if np.count_nonzero(pos) >= 2:
            slope, _ = np.polyfit(
                np.log10(time_bracket(ts[pos])), np.log10(compensated[pos]), 1
            )
            fitted = float(slope)
        else:
            fitted = 0.0
    ratios = np.divide(lhs, rhs, out=np.zeros_like(lhs), where=rhs > 0)
    return BlockEstimateReport(
        k=k,
        side=side,
        ts=ts,
        ratios=ratios,
        max_ratio=float(np.max(ratios)),
        fitted_exponent=fitted,
    )
