"""Machine-checkable hypotheses for local and global existence.

Each condition is evaluated with its exact strict/non-strict sense and
reported with the numeric slack, so experiment configs can stay safely
interior to the admissible region.  An exact-rational path (Fractions built
from the binary float inputs) double-checks every verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

__all__ = [
    "ConditionResult",
    "AdmissibilityVerdict",
    "check_lwp",
    "check_gwp",
    "suggest_s",
]

Number = Union[float, Fraction]


@dataclass(frozen=True)
class ConditionResult:
    name: str
    status: str  # pass | fail | not-applicable
    margin: float
    detail: str

    @property
    def ok(self) -> bool:
        return self.status != "fail"


@dataclass(frozen=True)
class AdmissibilityVerdict:
    condition_i: ConditionResult
    condition_ii: ConditionResult
    condition_iii: ConditionResult
    integer_p: ConditionResult
    gwp_threshold: ConditionResult | None
    beta: float
    fujita: float
    two_s_branch: str
    iii_disjunct: str | None

    @property
    def conditions(self) -> list[ConditionResult]:
        out = [self.condition_i, self.condition_ii, self.condition_iii, self.integer_p]
        if self.gwp_threshold is not None:
            out.append(self.gwp_threshold)
        return out

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.conditions)

    def failed_conditions(self) -> list[str]:
        return [f"{c.name}: {c.detail}" for c in self.conditions if not c.ok]

    def statuses(self) -> dict[str, str]:
        return {c.name: c.status for c in self.conditions}


def _validate_domain(n, r, p) -> None:
    if int(n) != n or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n}")
    if not (r > 2 and math.isfinite(float(r))):
        raise ValueError(f"decay integrability r must lie in (2, inf), got {r}")
    if int(p) != p:
        raise ValueError(f"nonlinearity power must be an integer, got {p}")


def _exactify(x: float) -> Fraction:
    # Exact rational value of the binary float, not a decimal approximation.
    return Fraction(*float(x).as_integer_ratio())


def _cond(name: str, margin: Number, strict: bool, detail: str) -> ConditionResult:
    satisfied = margin > 0 if strict else margin >= 0
    return ConditionResult(
        name=name,
        status="pass" if satisfied else "fail",
        margin=float(margin),
        detail=detail,
    )


def check_lwp(
    n: int, r: float, s: float, p: int, *, exact: bool = False
) -> AdmissibilityVerdict:
    """Evaluate the three local-existence conditions plus the integer-power one.

    With exact=True every inequality is re-evaluated in rational arithmetic
    on the exact binary values of the inputs.
    """
    _validate_domain(n, r, p)
    if exact:
        n_, r_, s_, p_ = Fraction(int(n)), _exactify(r), _exactify(s), Fraction(int(p))
        half = Fraction(1, 2)
    else:
        n_, r_, s_, p_ = float(n), float(r), float(s), int(p)
        half = 0.5

    beta = (n_ - 1) * (half - 1 / r_)
    fujita = 1 + 2 * r_ / n_
    two_s_branch = "2s>=n" if 2 * s_ >= n_ else "2s<n"

    # (i) smoothness above the scaling line, strict.
    bound_i = n_ * (half - 1 / r_)
    cond_i = _cond(
        "condition_i", s_ - bound_i, True, f"requires s > {float(bound_i):.6g}, s = {float(s_):.6g}"
    )

    # (ii) the power window.
    if s_ <= 0:
        cond_ii = ConditionResult(
            "condition_ii", "fail", -math.inf, "requires s > 0 for the lower bound"
        )
    else:
        lower = min(r_ / 2, 1 + r_ / (2 * s_) - 1 / s_)
        margins = [(p_ - lower, False, f"lower bound {float(lower):.6g} <= p")]
        if 2 * s_ < n_:
            window = 1 + n_ / (n_ - 2 * s_)
            upper = 1 + 2 / (n_ - 2 * s_)
            margins.append((window - p_, True, f"p < {float(window):.6g}"))
            margins.append((upper - p_, False, f"p <= {float(upper):.6g}"))
        ok = all((m > 0 if strict else m >= 0) for m, strict, _ in margins)
        cond_ii = ConditionResult(
            "condition_ii",
            "pass" if ok else "fail",
            float(min(m for m, _, _ in margins)),
            "; ".join(d for _, _, d in margins),
        )

    # (iii) either enough smoothness, or beta <= 1 with a power cap.
    bound_a = (2 * n_ - 1) * (half - 1 / r_)
    disj_a = _cond("iii_a", s_ - bound_a, False, f"(2n-1)(1/2-1/r) = {float(bound_a):.6g} <= s")
    beta_margin = 1 - beta
    if 2 * s_ < n_:
        cap = (2 * n_ / (n_ - 2 * s_)) * (1 / r_ + (1 - beta) / n_)
        b_margin: Number = min(beta_margin, cap - p_)
        b_detail = f"beta <= 1 and p <= {float(cap):.6g}"
    else:
        b_margin = beta_margin
        b_detail = "beta <= 1 (no power cap since 2s >= n)"
    disj_b = _cond("iii_b", b_margin, False, b_detail)
    if disj_a.ok and disj_b.ok:
        iii_disjunct = "both"
    elif disj_a.ok:
        iii_disjunct = "smoothness"
    elif disj_b.ok:
        iii_disjunct = "beta-window"
    else:
        iii_disjunct = None
    cond_iii = ConditionResult(
        "condition_iii",
        "pass" if (disj_a.ok or disj_b.ok) else "fail",
        max(disj_a.margin, disj_b.margin),
        f"{disj_a.detail} OR {disj_b.detail}",
    )

    cond_p = _cond("integer_p", p_ - 2, False, f"integer power p >= 2, p = {int(p_)}")

    return AdmissibilityVerdict(
        condition_i=cond_i,
        condition_ii=cond_ii,
        condition_iii=cond_iii,
        integer_p=cond_p,
        gwp_threshold=None,
        beta=float(beta),
        fujita=float(fujita),
        two_s_branch=two_s_branch,
        iii_disjunct=iii_disjunct,
    )


def check_gwp(
    n: int, r: float, s: float, p: int, *, exact: bool = False
) -> AdmissibilityVerdict:
    """Local conditions plus the global-existence threshold p >= 1 + 2r/n."""
    base = check_lwp(n, r, s, p, exact=exact)
    if exact:
        n_, r_, p_ = Fraction(int(n)), _exactify(r), Fraction(int(p))
        threshold = 1 + 2 * r_ / n_
    else:
        threshold = 1.0 + 2.0 * float(r) / float(n)
    cond = _cond(
        "gwp_threshold",
        (Fraction(int(p)) - threshold) if exact else (p - threshold),
        False,
        f"p >= 1 + 2r/n = {float(threshold):.6g} (critical case included)",
    )
    return AdmissibilityVerdict(
        condition_i=base.condition_i,
        condition_ii=base.condition_ii,
        condition_iii=base.condition_iii,
        integer_p=base.integer_p,
        gwp_threshold=cond,
        beta=base.beta,
        fujita=base.fujita,
        two_s_branch=base.two_s_branch,
        iii_disjunct=base.iii_disjunct,
    )


def suggest_s(
    n: int, r: float, p: int, *, s_max: float | None = None, step: float = 1.0 / 16.0
) -> tuple[float | None, str | None]:
    """Smallest grid value of s passing the local conditions.

    Returns (s, None) on success or (None, binding condition name) if the
    scan is exhausted; large enough s always passes, so failures indicate
    too small an s_max.
    """
    _validate_domain(n, r, p)
    if s_max is None:
        s_max = max(2.0 * n, (2 * n - 1) * (0.5 - 1.0 / r)) + 4.0
    binding: str | None = None
    for s in np.arange(step, s_max + step / 2, step):
        verdict = check_lwp(n, r, float(s), p)
        if verdict.passed:
            return float(s), None
        for cond in verdict.conditions:
            if not cond.ok:
                binding = cond.name
                break
    return None, binding
