"""One-dimensional laws and the scalar functionals built on them.

The finite-discrete representation (sorted atoms + probabilities) is the
exact core: symmetrization, convolution and windowed masses are computed
on it without approximation.  Analytic families (rademacher, bernoulli,
uniform, pointmass) exist to supply closed-form characteristic functions;
sampler-backed laws are only consumed by Monte-Carlo paths.

Also provides the truncated-second-moment functional

    m_tau(G, tau) = E min(Xtilde^2 / tau^2, 1)

of a symmetric law G, and its dyadic-shell decomposition with the weight
beta = sum_j 2^(-2j) * P(Xtilde in shell j), which always dominates
m_tau(G, 1) / 4.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

ATOM_MERGE_TOL = 1e-12
PROB_SUM_TOL = 1e-9
SHELL_FLOOR = 60  # shells below 2**-60 are folded into the mass at zero

_ANALYTIC_FAMILIES = ("rademacher", "bernoulli", "uniform", "pointmass")
_SAMPLER_IDS = ("gaussian",)
_SAMPLE_CHUNK = 1 << 20


@dataclass(frozen=True)
class Distribution:
    """A one-dimensional law.

    kind is one of "discrete", "rademacher", "bernoulli", "uniform",
    "pointmass", "sampler".  Discrete laws carry sorted atoms with
    positive probabilities summing to 1; analytic families carry their
    parameters in ``params``; sampler-backed laws carry a generator id.
    Instances are immutable and safe to share across threads.
    """

    kind: str
    atoms: tuple[float, ...] = ()
    probs: tuple[float, ...] = ()
    params: tuple[float, ...] = ()
    sampler_id: str = ""

    @property
    def is_discrete(self) -> bool:
        return self.kind == "discrete"

    @property
    def is_analytic(self) -> bool:
        return self.kind in _ANALYTIC_FAMILIES

    @property
    def is_sampler(self) -> bool:
        return self.kind == "sampler"


@dataclass(frozen=True)
class DyadicProfile:
    """Dyadic-shell decomposition of a symmetric law.

    q is the mass at zero; shell_masses[j] is the mass of shell j, where
    shell 0 is {|x| > 1} and shell j >= 1 is (2^-j, 2^(-j+1)].  beta_js
    are the weights 2^(-2j) * shell_masses[j], beta is their sum and
    mu_js = beta_js / beta (all zero when beta = 0).
    """

    q: float
    shell_masses: tuple[float, ...]
    beta_js: tuple[float, ...]
    beta: float
    mu_js: tuple[float, ...]

    @property
    def max_shell(self) -> int:
        return len(self.shell_masses) - 1


@dataclass(frozen=True)
class SumSpec:
    """The law of sum_k a_k X_k: coefficients plus summand distributions.

    ``distributions`` holds either one law (i.i.d. summands) or one law
    per coefficient.
    """

    coefficients: tuple[float, ...]
    distributions: tuple[Distribution, ...]

    def __post_init__(self):
        if len(self.coefficients) < 1:
            raise ValueError("need at least one coefficient")
        if len(self.distributions) not in (1, len(self.coefficients)):
            raise ValueError(
                "distributions must be a single law or one per coefficient"
            )

    @classmethod
    def iid(cls, coefficients: Sequence[float], dist: Distribution) -> "SumSpec":
        return cls(tuple(float(a) for a in coefficients), (dist,))

    @property
    def n(self) -> int:
        return len(self.coefficients)

    @property
    def is_iid(self) -> bool:
        return len(self.distributions) == 1

    def summand(self, k: int) -> Distribution:
        return self.distributions[0] if self.is_iid else self.distributions[k]

    @property
    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(np.linalg.norm(np.asarray(self.coefficients)))

    @property
    def sup_norm(self) -> float:
        """Max absolute coefficient."""
        return float(np.max(np.abs(np.asarray(self.coefficients))))

    def scaled_by(self, factor: float) -> "SumSpec":
        """Spec with every coefficient multiplied by ``factor``.

        Scaling by 1/tau turns the law of sum a_k X_k into the law of
        sum a_k X_k / tau.
        """
        if factor == 0:
            raise ValueError("scale factor must be nonzero")
        return SumSpec(
            tuple(a * factor for a in self.coefficients), self.distributions
        )


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def _merge_sorted(atoms: np.ndarray, probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort atoms, merge values within ATOM_MERGE_TOL, drop zero mass."""
    order = np.argsort(atoms, kind="stable")
    atoms = atoms[order]
    probs = probs[order]
    if atoms.size > 1:
        new_group = np.empty(atoms.size, dtype=bool)
        new_group[0] = True
        new_group[1:] = np.diff(atoms) > ATOM_MERGE_TOL
        idx = np.flatnonzero(new_group)
        merged_atoms = atoms[idx]
        merged_probs = np.add.reduceat(probs, idx)
    else:
        merged_atoms, merged_probs = atoms, probs
    keep = merged_probs > 0.0
    return merged_atoms[keep], merged_probs[keep]


def _discrete_from_arrays(atoms: np.ndarray, probs: np.ndarray) -> Distribution:
    atoms, probs = _merge_sorted(atoms, probs)
    total = float(probs.sum())
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise ValueError(f"probabilities sum to {total!r}, expected 1")
    probs = probs / total
    return Distribution(
        kind="discrete", atoms=tuple(map(float, atoms)), probs=tuple(map(float, probs))
    )


def make_discrete(atoms: Sequence[float], probs: Sequence[float]) -> Distribution:
    """Finite-discrete law from atom values and probabilities.

    Atoms within 1e-12 of each other are merged (probabilities added),
    the result is sorted, and probabilities are normalized after checking
    that they are nonnegative and sum to 1 within 1e-9.
    """
    a = np.asarray(atoms, dtype=float)
    p = np.asarray(probs, dtype=float)
    if a.ndim != 1 or p.ndim != 1 or a.size != p.size:
        raise ValueError("atoms and probs must be 1-d sequences of equal length")
    if a.size < 1:
        raise ValueError("need at least one atom")
    if not np.all(np.isfinite(a)):
        raise ValueError("atoms must be finite")
    if np.any(p < 0):
        raise ValueError("negative probability")
    return _discrete_from_arrays(a, p)


def rademacher() -> Distribution:
    return Distribution(kind="rademacher")


def bernoulli(p: float) -> Distribution:
    if not 0.0 <= p <= 1.0:
        raise ValueError("bernoulli parameter must lie in [0, 1]")
    return Distribution(kind="bernoulli", params=(float(p),))


def uniform(a: float, b: float) -> Distribution:
    if not b > a:
        raise ValueError("uniform requires a < b")
    return Distribution(kind="uniform", params=(float(a), float(b)))


def pointmass(x: float) -> Distribution:
    return Distribution(kind="pointmass", params=(float(x),))


def gaussian_sampler(mu: float = 0.0, sigma: float = 1.0) -> Distribution:
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return Distribution(kind="sampler", sampler_id="gaussian", params=(float(mu), float(sigma)))


def as_discrete(dist: Distribution) -> Distribution:
    """Exact finite-discrete form of a law, where one exists.

    rademacher, bernoulli and pointmass convert exactly; uniform and
    sampler-backed laws do not and raise ValueError.
    """
    if dist.is_discrete:
        return dist
    if dist.kind == "rademacher":
        return make_discrete([-1.0, 1.0], [0.5, 0.5])
    if dist.kind == "bernoulli":
        p = dist.params[0]
        if p == 0.0:
            return make_discrete([0.0], [1.0])
        if p == 1.0:
            return make_discrete([1.0], [1.0])
        return make_discrete([0.0, 1.0], [1.0 - p, p])
    if dist.kind == "pointmass":
        return make_discrete([dist.params[0]], [1.0])
    raise ValueError(f"no exact finite-discrete form for kind {dist.kind!r}")


def scale(dist: Distribution, s: float) -> Distribution:
    """Pushforward of a law by x -> s*x, s nonzero."""
    if s == 0:
        raise ValueError("scale factor must be nonzero")
    if dist.is_discrete:
        atoms = np.asarray(dist.atoms) * s
        return _discrete_from_arrays(atoms, np.asarray(dist.probs))
    if dist.kind == "rademacher":
        return make_discrete([-s, s], [0.5, 0.5])
    if dist.kind == "bernoulli":
        return scale(as_discrete(dist), s)
    if dist.kind == "pointmass":
        return pointmass(dist.params[0] * s)
    if dist.kind == "uniform":
        a, b = dist.params
        return uniform(min(a * s, b * s), max(a * s, b * s))
    raise ValueError(f"cannot scale kind {dist.kind!r}")


def shift(dist: Distribution, b: float) -> Distribution:
    """Pushforward of a law by x -> x + b."""
    if dist.is_discrete:
        return _discrete_from_arrays(
            np.asarray(dist.atoms) + b, np.asarray(dist.probs)
        )
    if dist.kind == "pointmass":
        return pointmass(dist.params[0] + b)
    if dist.kind == "uniform":
        lo, hi = dist.params
        return uniform(lo + b, hi + b)
    return shift(as_discrete(dist), b)


# ---------------------------------------------------------------------------
# Structural helpers
# ---------------------------------------------------------------------------

def is_symmetric(dist: Distribution, tol: float = 1e-12) -> bool:
    """True when the law is symmetric about zero."""
    if dist.kind == "rademacher":
        return True
    if dist.kind == "pointmass":
        return dist.params[0] == 0.0
    if dist.kind == "uniform":
        return abs(dist.params[0] + dist.params[1]) <= tol
    if not dist.is_discrete:
        return False
    atoms = np.asarray(dist.atoms)
    probs = np.asarray(dist.probs)
    return bool(
        np.all(np.abs(atoms + atoms[::-1]) <= tol)
        and np.all(np.abs(probs - probs[::-1]) <= tol)
    )


def support_bound(dist: Distribution) -> float:
    """Largest |x| in the support (used for oscillation-aware quadrature)."""
    if dist.is_discrete:
        return float(np.max(np.abs(np.asarray(dist.atoms))))
    if dist.kind == "rademacher":
        return 1.0
    if dist.kind == "bernoulli":
        return 1.0
    if dist.kind == "uniform":
        return max(abs(dist.params[0]), abs(dist.params[1]))
    if dist.kind == "pointmass":
        return abs(dist.params[0])
    raise ValueError(f"no support bound for kind {dist.kind!r}")


def abs_mean(dist: Distribution) -> float:
    """E|X|, finite for every supported family."""
    if dist.is_discrete:
        return float(np.dot(np.abs(np.asarray(dist.atoms)), np.asarray(dist.probs)))
    if dist.kind == "rademacher":
        return 1.0
    if dist.kind == "bernoulli":
        return dist.params[0]
    if dist.kind == "pointmass":
        return abs(dist.params[0])
    if dist.kind == "uniform":
        a, b = dist.params
        if a >= 0:
            return (a + b) / 2.0
        if b <= 0:
            return -(a + b) / 2.0
        return (a * a + b * b) / (2.0 * (b - a))
    raise ValueError(f"no absolute mean for kind {dist.kind!r}")


# ---------------------------------------------------------------------------
# Symmetrization and scalar functionals
# ---------------------------------------------------------------------------

def symmetrize(dist: Distribution) -> Distribution:
    """Law of X1 - X2 for independent copies X1, X2 of the given law.

    Exact convolution of the law with its reflection; the result is
    symmetric about 0 by construction (mirror masses are identical
    floats) and its characteristic function equals |char_fn|^2.
    Sampler-backed laws are rejected: symmetrize them by sampling.
    """
    if dist.is_sampler:
        raise ValueError(
            "cannot symmetrize a sampler-backed law exactly; "
            "draw paired samples on the Monte-Carlo path instead"
        )
    base = as_discrete(dist)
    atoms = np.asarray(base.atoms)
    probs = np.asarray(base.probs)
    diffs = (atoms[:, None] - atoms[None, :]).ravel()
    weights = (probs[:, None] * probs[None, :]).ravel()
    # Fold onto |difference| first and mirror afterwards, so that the
    # two sides carry exactly equal floats and no merge group can
    # straddle the sign boundary.
    near_zero = np.abs(diffs) <= ATOM_MERGE_TOL
    zero_mass = float(weights[near_zero].sum())
    folded, folded_w = _merge_sorted(np.abs(diffs[~near_zero]), weights[~near_zero])
    half = 0.5 * folded_w
    out_atoms = np.concatenate([-folded[::-1], [0.0], folded])
    out_probs = np.concatenate([half[::-1], [zero_mass], half])
    return _discrete_from_arrays(out_atoms, out_probs)


def _require_symmetric_discrete(dist: Distribution, what: str) -> Distribution:
    d = as_discrete(dist)
    if not is_symmetric(d):
        raise ValueError(f"{what} requires a symmetric law")
    return d


def m_tau(dist: Distribution, tau: float) -> float:
    """Truncated second moment E min(X^2 / tau^2, 1) of a symmetric law.

    Zero exactly when the law is the point mass at 0; always in [0, 1].
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    d = _require_symmetric_discrete(dist, "m_tau")
    x = np.asarray(d.atoms)
    p = np.asarray(d.probs)
    return float(np.dot(p, np.minimum(x * x / (tau * tau), 1.0)))


def _shell_index(x: float) -> int | None:
    """Shell of |x|: 0 for |x| > 1, j for 2^-j < |x| <= 2^(-j+1).

    Uses exact power-of-two comparisons; returns None for values at or
    below 2**-SHELL_FLOOR (folded into the zero mass).
    """
    ax = abs(x)
    if ax > 1.0:
        return 0
    hi = 1.0
    j = 1
    while ax <= hi / 2.0:
        hi /= 2.0
        j += 1
        if j > SHELL_FLOOR:
            return None
    return j


def dyadic_profile(dist: Distribution, max_shell: int = 0) -> DyadicProfile:
    """Dyadic-shell masses of a symmetric finite-discrete law.

    The number of shells grows automatically to cover every atom above
    the 2**-60 floor; ``max_shell`` only sets a lower bound on how many
    shells are reported.
    """
    d = _require_symmetric_discrete(dist, "dyadic_profile")
    deepest = max(0, int(max_shell))
    assignments: list[tuple[int, float]] = []
    q = 0.0
    for x, p in zip(d.atoms, d.probs):
        if x == 0.0:
            q += p
            continue
        j = _shell_index(x)
        if j is None:
            q += p
            continue
        deepest = max(deepest, j)
        assignments.append((j, p))
    masses = np.zeros(deepest + 1)
    for j, p in assignments:
        masses[j] += p
    beta_js = masses * np.power(4.0, -np.arange(deepest + 1))
    beta = float(beta_js.sum())
    mu_js = beta_js / beta if beta > 0 else np.zeros_like(beta_js)
    profile = DyadicProfile(
        q=float(q),
        shell_masses=tuple(map(float, masses)),
        beta_js=tuple(map(float, beta_js)),
        beta=beta,
        mu_js=tuple(map(float, mu_js)),
    )
    total = profile.q + sum(profile.shell_masses)
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"shell masses sum to {total!r}, expected 1")
    return profile


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def _draw(dist: Distribution, rng: np.random.Generator, size: int) -> np.ndarray:
    if dist.is_discrete:
        cum = np.cumsum(np.asarray(dist.probs))
        u = rng.random(size)
        idx = np.searchsorted(cum, u, side="left")
        idx = np.minimum(idx, len(dist.atoms) - 1)
        return np.asarray(dist.atoms)[idx]
    if dist.kind == "rademacher":
        return (rng.integers(0, 2, size) * 2 - 1).astype(float)
    if dist.kind == "bernoulli":
        return (rng.random(size) < dist.params[0]).astype(float)
    if dist.kind == "uniform":
        return rng.uniform(dist.params[0], dist.params[1], size)
    if dist.kind == "pointmass":
        return np.full(size, dist.params[0])
    if dist.kind == "sampler":
        if dist.sampler_id == "gaussian":
            return rng.normal(dist.params[0], dist.params[1], size)
        raise ValueError(f"unknown sampler id {dist.sampler_id!r}")
    raise ValueError(f"cannot sample kind {dist.kind!r}")


def draw_chunked(
    dist: Distribution, count: int, seed: int, stream: int = 0
) -> np.ndarray:
    """``count`` samples, deterministic and parallelism-independent.

    Samples are produced in fixed-size chunks, each seeded from
    SeedSequence(seed, spawn_key=(stream, chunk)), so the result does
    not depend on how chunks would be scheduled across workers.
    """
    out = np.empty(count)
    pos = 0
    chunk = 0
    while pos < count:
        size = min(_SAMPLE_CHUNK, count - pos)
        ss = np.random.SeedSequence(seed, spawn_key=(stream, chunk))
        rng = np.random.default_rng(ss)
        out[pos : pos + size] = _draw(dist, rng, size)
        pos += size
        chunk += 1
    return out


def sample(dist: Distribution, count: int, seed: int) -> np.ndarray:
    """Deterministic samples from a law (inverse-CDF for discrete laws)."""
    if count < 1:
        raise ValueError("count must be at least 1")
    return draw_chunked(dist, count, seed, stream=0)


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------

def dist_from_json(obj) -> Distribution:
    """Parse {"type": ...} distribution descriptions (dict or JSON text)."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "type" not in obj:
        raise ValueError("distribution JSON must be an object with a 'type' key")
    kind = obj["type"]
    if kind == "discrete":
        return make_discrete(obj["atoms"], obj["probs"])
    if kind == "rademacher":
        return rademacher()
    if kind == "bernoulli":
        return bernoulli(obj["p"])
    if kind == "uniform":
        return uniform(obj["a"], obj["b"])
    if kind == "pointmass":
        return pointmass(obj["x"])
    if kind == "sampler":
        if obj.get("id") == "gaussian":
            return gaussian_sampler(obj.get("mu", 0.0), obj.get("sigma", 1.0))
        raise ValueError(f"unknown sampler id {obj.get('id')!r}")
    raise ValueError(f"unknown distribution type {kind!r}")


def dist_to_json(dist: Distribution) -> dict:
    if dist.is_discrete:
        return {"type": "discrete", "atoms": list(dist.atoms), "probs": list(dist.probs)}
    if dist.kind == "rademacher":
        return {"type": "rademacher"}
    if dist.kind == "bernoulli":
        return {"type": "bernoulli", "p": dist.params[0]}
    if dist.kind == "uniform":
        return {"type": "uniform", "a": dist.params[0], "b": dist.params[1]}
    if dist.kind == "pointmass":
        return {"type": "pointmass", "x": dist.params[0]}
    if dist.kind == "sampler":
        return {
            "type": "sampler",
            "id": dist.sampler_id,
            "mu": dist.params[0],
            "sigma": dist.params[1],
        }
    raise ValueError(f"cannot serialize kind {dist.kind!r}")
