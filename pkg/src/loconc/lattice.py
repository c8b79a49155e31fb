"""Arithmetic structure of a coefficient vector a.

lattice_dist(a, t) is the Euclidean distance from t*a to the nearest
integer point; it separates by coordinate and equals |t| * ||a|| exactly
while every |t * a_k| stays at or below 1/2.  On top of it:

  * alpha_over_interval: certified infimum of the distance over a
    t-interval (the map is ||a||-Lipschitz, so a fine grid brackets it);
  * check_condition_3b: is the distance >= alpha on
    [1/(2 max|a_k|), D]?
  * check_condition_4d: is the distance >= min(gamma*t*||a||, alpha)
    on [0, D]?
  * essential_lcd: the essential least common denominator, the first
    t > 0 where the distance drops to min(gamma*t*||a||, alpha), found
    by a Lipschitz forward march plus bisection.  When no such t exists
    below the horizon the typed INFINITE sentinel is returned, never an
    exception.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .sentinel import INFINITE, Infinite, is_infinite

_SCAN_CHUNK = 1 << 16
_MARCH_EVAL_BUDGET = 5_000_000


@dataclass(frozen=True)
class ConditionCheck:
    """Certified yes/no with a borderline flag.

    ``holds`` is False only when a witness point violates the condition
    by more than the scan tolerance; certification gaps smaller than the
    tolerance are reported as holds=True with indeterminate=True.
    """

    holds: bool
    indeterminate: bool = False
    witness_t: float | None = None
    margin: float = 0.0

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class ArithmeticProfile:
    """Lattice-distance infimum and essential LCD of one vector."""

    alpha_inf: float
    interval: tuple[float, float]
    lcd: float | Infinite
    gamma: float
    alpha: float
    lipschitz: float
    bracket_width: float


def _coeffs(a) -> np.ndarray:
    arr = np.asarray(a, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("coefficient vector must be nonempty")
    return arr


def _norms(arr: np.ndarray) -> tuple[float, float]:
    norm = float(np.linalg.norm(arr))
    sup = float(np.max(np.abs(arr)))
    if norm == 0.0:
        raise ValueError("coefficient vector must be nonzero")
    return norm, sup


def lattice_dist(a, t: float) -> float:
    """Distance from t*a to the nearest point of the integer lattice.

    sqrt(sum_k (t a_k - round(t a_k))^2) with round-half-to-even; the
    minimization over integer points separates by coordinate, so this is
    min over m in Z^n of ||t a - m||.
    """
    x = _coeffs(a) * float(t)
    r = x - np.rint(x)
    return float(math.sqrt(np.dot(r, r)))


def _lattice_dist_batch(arr: np.ndarray, ts: np.ndarray) -> np.ndarray:
    x = np.multiply.outer(ts, arr)
    r = x - np.rint(x)
    return np.sqrt(np.einsum("ij,ij->i", r, r))


def _scan_min(arr: np.ndarray, t_lo: float, t_hi: float, step: float):
    """Grid minimum of the lattice distance with spacing <= step."""
    n_pts = max(2, int(math.ceil((t_hi - t_lo) / step)) + 1)
    best_val = math.inf
    best_t = t_lo
    spacing = (t_hi - t_lo) / (n_pts - 1)
    for start in range(0, n_pts, _SCAN_CHUNK):
        stop = min(start + _SCAN_CHUNK, n_pts)
        ts = t_lo + spacing * np.arange(start, stop)
        vals = _lattice_dist_batch(arr, ts)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_t = float(ts[i])
    return best_val, best_t, spacing


def alpha_over_interval(a, t_lo: float, t_hi: float, tol: float) -> float:
    """Certified infimum of t -> dist(t a, Z^n) over [t_lo, t_hi].

    The map is Lipschitz with constant ||a||, so a grid of spacing
    tol/||a|| sees the infimum to within ||a|| * spacing / 2 <= tol/2.
    The returned value v satisfies inf in [v, v + tol].
    """
    arr = _coeffs(a)
    norm, _ = _norms(arr)
    if not 0 < t_lo <= t_hi:
        raise ValueError("need 0 < t_lo <= t_hi")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if t_lo == t_hi:
        return lattice_dist(arr, t_lo)
    best_val, _, spacing = _scan_min(arr, t_lo, t_hi, tol / norm)
    return max(0.0, best_val - 0.5 * norm * spacing)


def check_condition_3b(a, D: float, alpha: float, tol: float) -> ConditionCheck:
    """Does dist(t a, Z^n) >= alpha hold for all t in [1/(2 max|a_k|), D]?

    D below 1/(2 max|a_k|) is outside the stated regime and rejected.
    Returns holds=False only on a witness with distance < alpha - tol;
    gaps within tol come back as indeterminate-true.
    """
    arr = _coeffs(a)
    norm, sup = _norms(arr)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if tol <= 0:
        raise ValueError("tol must be positive")
    t_star = 1.0 / (2.0 * sup)
    if D < t_star * (1.0 - 1e-12):
        raise ValueError("D must be at least 1/(2 max|a_k|)")
    D = max(D, t_star)
    if D == t_star:
        val = lattice_dist(arr, t_star)
        return ConditionCheck(
            holds=val >= alpha, witness_t=t_star, margin=val - alpha
        )
    best_val, best_t, spacing = _scan_min(arr, t_star, D, tol / norm)
    slack = 0.5 * norm * spacing
    if best_val < alpha - tol:
        return ConditionCheck(holds=False, witness_t=best_t, margin=best_val - alpha)
    if best_val - slack >= alpha:
        return ConditionCheck(holds=True, margin=best_val - slack - alpha)
    return ConditionCheck(
        holds=True, indeterminate=True, witness_t=best_t, margin=best_val - alpha
    )


def _ramp_gap_batch(arr, norm, gamma, alpha, ts):
    """dist(t a, Z^n) - min(gamma * t * ||a||, alpha) on an array of t."""
    return _lattice_dist_batch(arr, ts) - np.minimum(gamma * ts * norm, alpha)


def check_condition_4d(a, D: float, gamma: float, alpha: float, tol: float) -> ConditionCheck:
    """Does dist(t a, Z^n) >= min(gamma*t*||a||, alpha) hold on [0, D]?

    On [0, 1/(2 max|a_k|)] the distance equals t*||a|| exactly, which
    beats gamma*t*||a|| for gamma < 1, so only the remainder is scanned
    (Lipschitz constant ||a|| * (1 + gamma)).
    """
    arr = _coeffs(a)
    norm, sup = _norms(arr)
    if D <= 0:
        raise ValueError("D must be positive")
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if tol <= 0:
        raise ValueError("tol must be positive")
    t_star = 1.0 / (2.0 * sup)
    if D <= t_star:
        return ConditionCheck(holds=True)
    lip = norm * (1.0 + gamma)
    n_pts = max(2, int(math.ceil((D - t_star) / (tol / lip))) + 1)
    spacing = (D - t_star) / (n_pts - 1)
    best_val = math.inf
    best_t = t_star
    for start in range(0, n_pts, _SCAN_CHUNK):
        stop = min(start + _SCAN_CHUNK, n_pts)
        ts = t_star + spacing * np.arange(start, stop)
        vals = _ramp_gap_batch(arr, norm, gamma, alpha, ts)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_t = float(ts[i])
    slack = 0.5 * lip * spacing
    if best_val < -tol:
        return ConditionCheck(holds=False, witness_t=best_t, margin=best_val)
    if best_val - slack >= 0.0:
        return ConditionCheck(holds=True, margin=best_val - slack)
    return ConditionCheck(holds=True, indeterminate=True, witness_t=best_t, margin=best_val)


def essential_lcd(
    a,
    gamma: float,
    alpha: float,
    t_max: float | None = None,
    tol: float = 1e-6,
) -> float | Infinite:
    """Essential least common denominator of the vector a.

    The infimum of t in (0, t_max] with
    dist(t a, Z^n) <= min(gamma * t * ||a||, alpha), located within tol.
    Returns INFINITE when no such t exists below the horizon (default
    horizon: 1000 * max|a_k| / alpha).
    """
    value, _ = _essential_lcd_full(a, gamma, alpha, t_max, tol)
    return value


def _essential_lcd_full(a, gamma, alpha, t_max, tol):
    arr = _coeffs(a)
    norm, sup = _norms(arr)
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if t_max is None:
        t_max = 1e3 * sup / alpha
    if t_max <= 0:
        raise ValueError("t_max must be positive")

    def gap(t: float) -> float:
        r = arr * t - np.rint(arr * t)
        return math.sqrt(np.dot(r, r)) - min(gamma * t * norm, alpha)

    # The gap is strictly positive on (0, 1/(2 max|a_k|)]: there the
    # distance is t*||a|| exactly and the threshold is strictly smaller.
    t_star = 1.0 / (2.0 * sup)
    if t_star >= t_max:
        return INFINITE, 0.0
    lip = norm * (1.0 + gamma)
    # March forward: from a point with gap v > 0 no crossing can occur
    # before t + v/lip.  The step floor (tol/20) guarantees progress
    # near flat minima; dips narrower than the floor are below the
    # certification resolution.
    floor = tol / 20.0
    t = t_star
    v = gap(t)
    if v <= 0.0:
        return t_star, 0.0
    evals = 1
    while True:
        t_next = min(t + max(v / lip, floor), t_max)
        v_next = gap(t_next)
        evals += 1
        if evals > _MARCH_EVAL_BUDGET:
            raise RuntimeError("essential_lcd search exceeded its evaluation budget")
        if v_next <= 0.0:
            lo, hi = t, t_next
            break
        if t_next >= t_max:
            return INFINITE, 0.0
        t, v = t_next, v_next
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) <= 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi), hi - lo


def arithmetic_profile(
    a,
    gamma: float,
    alpha: float,
    t_lo: float,
    t_hi: float,
    t_max: float | None = None,
    tol: float = 1e-6,
) -> ArithmeticProfile:
    """Bundle of the certified infimum and the essential LCD of a vector."""
    arr = _coeffs(a)
    norm, _ = _norms(arr)
    alpha_inf = alpha_over_interval(arr, t_lo, t_hi, tol)
    lcd, bracket = _essential_lcd_full(arr, gamma, alpha, t_max, tol)
    return ArithmeticProfile(
        alpha_inf=alpha_inf,
        interval=(float(t_lo), float(t_hi)),
        lcd=lcd,
        gamma=float(gamma),
        alpha=float(alpha),
        lipschitz=norm * (1.0 + gamma),
        bracket_width=float(bracket),
    )


def coeffs_from_json(obj) -> tuple[float, ...]:
    """Parse {"coeffs": [...]} or {"type": "arith", "n", "base", "step"}."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if isinstance(obj, (list, tuple)):
        return tuple(float(v) for v in obj)
    if not isinstance(obj, dict):
        raise ValueError("coefficient JSON must be a list or an object")
    if "coeffs" in obj:
        return tuple(float(v) for v in obj["coeffs"])
    if obj.get("type") == "arith":
        n = int(obj["n"])
        if n < 1:
            raise ValueError("arith generator needs n >= 1")
        base = float(obj["base"])
        step = float(obj["step"])
        return tuple(base + k * step for k in range(n))
    raise ValueError("unknown coefficient specification")
