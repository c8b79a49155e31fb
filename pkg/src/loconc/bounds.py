"""Right-hand sides of the concentration inequalities, with explicit constants.

Every unspecified absolute constant becomes a parameter of ConstantSet
(all default 1) so the harness can fit them on a corpus and check the
fitted values on holdouts.  Degenerate inputs (p = 0, M = 0, zero
denominators) yield the typed INFINITE sentinel: the bound is vacuous,
never violated.

Shapes:

  kr_bound           C * lam * (sum lam_k^2 (1 - q_k))^(-1/2)
  esseen_prop_bound  C * lam * (sum lam_k^2 M_k)^(-1/2)
  fs_bound           C1/(||a|| D sqrt(p)) + C2 exp(-c p^e alpha^2),  e in {1, 2}
  rv_bound           C1/(gamma D ||a|| sqrt(p)) + C2 exp(-2 p alpha^2)
  thm1_bound         C1/(||a|| sqrt(M1)) + C2 exp(-c alpha^2 M1)
  thm2_bound         C1/(||a|| gamma sqrt(M1)) + C2 exp(-c alpha^2 M1)
  corollary_bound    C1/(||a|| D [gamma] sqrt(M_tau)) + C2 exp(-c alpha^2 M_tau),
                     bounding Q at window width tau / D
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .sentinel import INFINITE, Infinite, is_infinite


@dataclass(frozen=True)
class ConstantSet:
    """Multipliers and rate for a two-term bound.

    C_front scales the algebraic term, C_exp the exponential term, and
    c_exp is the rate inside the exponential.  p_exponent picks the
    power of p in the Friedland-Sodin exponential (2 for the original
    statement, 1 for the strengthened form).
    """

    C_front: float = 1.0
    C_exp: float = 1.0
    c_exp: float = 1.0
    p_exponent: int = 2

    def __post_init__(self):
        if self.C_front <= 0 or self.C_exp <= 0 or self.c_exp <= 0:
            raise ValueError("constants must be positive")
        if self.p_exponent not in (1, 2):
            raise ValueError("p_exponent must be 1 or 2")


UNIT_CONSTANTS = ConstantSet()


@dataclass(frozen=True)
class BoundReport:
    """One inequality instance: measured LHS against a formula RHS."""

    inequality: str
    lhs: float
    lhs_method: str
    rhs: float | Infinite
    rhs_alg: float | Infinite
    rhs_exp: float
    inputs: dict
    constants: ConstantSet
    satisfied: bool
    vacuous: bool
    ratio: float
    lhs_ci: float = 0.0


def make_report(
    inequality: str,
    lhs: float,
    lhs_method: str,
    rhs_alg: float | Infinite,
    rhs_exp: float,
    inputs: dict,
    constants: ConstantSet,
    lhs_ci: float = 0.0,
) -> BoundReport:
    """Assemble a BoundReport; a sentinel RHS is vacuous, never violated."""
    vacuous = is_infinite(rhs_alg)
    rhs = INFINITE if vacuous else rhs_alg + rhs_exp
    satisfied = True if vacuous else bool(lhs <= rhs)
    ratio = 0.0 if vacuous else lhs / rhs
    return BoundReport(
        inequality=inequality,
        lhs=lhs,
        lhs_method=lhs_method,
        rhs=rhs,
        rhs_alg=rhs_alg,
        rhs_exp=rhs_exp,
        inputs=dict(inputs),
        constants=constants,
        satisfied=satisfied,
        vacuous=vacuous,
        ratio=ratio,
        lhs_ci=lhs_ci,
    )


def _inverse_sqrt_sum(lam: float, lam_k: Sequence[float], weights: Sequence[float], C: float):
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if len(lam_k) != len(weights) or not lam_k:
        raise ValueError("need matching nonempty lambda_k and weight lists")
    denom = 0.0
    for lk, w in zip(lam_k, weights):
        if lk <= 0 or lk > lam * (1.0 + 1e-12):
            raise ValueError("each lambda_k must satisfy 0 < lambda_k <= lambda")
        denom += lk * lk * w
    if denom <= 0.0:
        return INFINITE
    return C * lam / math.sqrt(denom)


def kr_bound(
    lam: float, lam_k: Sequence[float], q_k: Sequence[float], C: float = 1.0
) -> float | Infinite:
    """Kolmogorov-Rogozin shape: C*lam*(sum lam_k^2 (1 - Q_k))^(-1/2).

    All Q_k = 1 makes the denominator vanish; the sentinel is returned.
    """
    if any(not 0.0 <= q <= 1.0 for q in q_k):
        raise ValueError("each q_k must lie in [0, 1]")
    return _inverse_sqrt_sum(lam, lam_k, [1.0 - q for q in q_k], C)


def esseen_prop_bound(
    lam: float, lam_k: Sequence[float], m_k: Sequence[float], C: float = 1.0
) -> float | Infinite:
    """Esseen refinement: C*lam*(sum lam_k^2 M_k(lam_k))^(-1/2).

    In the i.i.d. equal-lambda case this is C / sqrt(n * M(tau)).
    """
    if any(m < 0 for m in m_k):
        raise ValueError("each M_k must be nonnegative")
    return _inverse_sqrt_sum(lam, lam_k, list(m_k), C)


def _check_p(p: float) -> bool:
    """Validate p; True means the bound is vacuous (p = 0)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return p == 0.0


def fs_bound(
    a_norm: float, D: float, alpha: float, p: float, consts: ConstantSet = UNIT_CONSTANTS
) -> float | Infinite:
    """Friedland-Sodin shape for Q(F_a, 1/D) under the interval condition."""
    if a_norm <= 0 or D <= 0:
        raise ValueError("a_norm and D must be positive")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if _check_p(p):
        return INFINITE
    alg = consts.C_front / (a_norm * D * math.sqrt(p))
    expo = consts.C_exp * math.exp(-consts.c_exp * p**consts.p_exponent * alpha * alpha)
    return alg + expo


def rv_bound(
    a_norm: float,
    D: float,
    gamma: float,
    alpha: float,
    p: float,
    consts: ConstantSet = UNIT_CONSTANTS,
) -> float | Infinite:
    """Rudelson-Vershynin shape; the exponential rate 2 is part of the statement."""
    if a_norm <= 0 or D <= 0:
        raise ValueError("a_norm and D must be positive")
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if _check_p(p):
        return INFINITE
    alg = consts.C_front / (gamma * D * a_norm * math.sqrt(p))
    expo = consts.C_exp * math.exp(-2.0 * p * alpha * alpha)
    return alg + expo


def thm1_parts(
    a_norm: float, alpha: float, M1: float, consts: ConstantSet = UNIT_CONSTANTS
):
    """(algebraic, exponential) parts of the M(1)-based bound at D = 1."""
    if a_norm <= 0:
        raise ValueError("a_norm must be positive")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if not 0.0 <= M1 <= 1.0:
        raise ValueError("M1 must lie in [0, 1]")
    if M1 == 0.0:
        return INFINITE, 0.0
    alg = consts.C_front / (a_norm * math.sqrt(M1))
    expo = consts.C_exp * math.exp(-consts.c_exp * alpha * alpha * M1)
    return alg, expo


def thm1_bound(
    a_norm: float, alpha: float, M1: float, consts: ConstantSet = UNIT_CONSTANTS
) -> float | Infinite:
    """C/(||a|| sqrt(M1)) + C exp(-c alpha^2 M1); sentinel when M1 = 0."""
    alg, expo = thm1_parts(a_norm, alpha, M1, consts)
    return INFINITE if is_infinite(alg) else alg + expo


def thm2_bound(
    a_norm: float,
    gamma: float,
    alpha: float,
    M1: float,
    consts: ConstantSet = UNIT_CONSTANTS,
) -> float | Infinite:
    """As thm1_bound with gamma dividing the algebraic term."""
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    alg, expo = thm1_parts(a_norm, alpha, M1, consts)
    return INFINITE if is_infinite(alg) else alg / gamma + expo


class CorollaryBound(NamedTuple):
    """RHS value, its two components, and the window width it bounds Q at."""

    value: float | Infinite
    rhs_alg: float | Infinite
    rhs_exp: float
    lam: float


def corollary_bound(
    a_norm: float,
    D: float,
    tau: float,
    alpha: float | None,
    gamma: float | None,
    M_tau: float,
    consts: ConstantSet = UNIT_CONSTANTS,
) -> CorollaryBound:
    """Rescaled bound: C/(||a|| D [gamma] sqrt(M(tau))) + C exp(-c alpha^2 M(tau)).

    Bounds Q(F_a, tau / D); the window width tau/D is returned alongside.
    gamma = None selects the interval-condition family (no gamma factor);
    alpha = None drops the exponential term, the unconditional shape used
    at D = 1/(2 max|a_k|) and in the small-D regime.
    """
    if a_norm <= 0 or D <= 0 or tau <= 0:
        raise ValueError("a_norm, D and tau must be positive")
    if gamma is not None and not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1) when given")
    if alpha is not None and alpha < 0:
        raise ValueError("alpha must be nonnegative when given")
    if not 0.0 <= M_tau <= 1.0:
        raise ValueError("M_tau must lie in [0, 1]")
    lam = tau / D
    if M_tau == 0.0:
        return CorollaryBound(INFINITE, INFINITE, 0.0, lam)
    g = 1.0 if gamma is None else gamma
    alg = consts.C_front / (a_norm * D * g * math.sqrt(M_tau))
    expo = (
        0.0
        if alpha is None
        else consts.C_exp * math.exp(-consts.c_exp * alpha * alpha * M_tau)
    )
    return CorollaryBound(alg + expo, alg, expo, lam)
