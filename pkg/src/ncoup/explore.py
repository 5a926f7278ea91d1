"""Randomized search for probe states whose commutative BAE noise matrix
violates the matrix OUP while satisfying its noncommutative counterpart,
and gain sweeps of the two symplectic tests.

A useful fact drives the search. With ``K^C = Pi_C W Pi_C`` one has
``Xi_eff = -Pi_C Omega Pi_C`` and ``hbar J = -Pi_C (hbar J) Pi_C``, so by
congruence ``lambda1_Xi(K^C) = lambda1_Omega(W)`` and
``lambda1_J(K^C) = lambda1_hbarJ(W)`` for every gain. The ratio
``lambda1_Xi / lambda1_J`` is scale invariant; any W with ratio above one
becomes a witness after rescaling it so that the two values straddle 1.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import matcore
from .certify import check_form
from .errors import InputError, InvalidRange, NoConvergence, SingularForm
from .models import bae_model, noise_matrix
from .symplectic import NCParams, build_Omega, is_singular, standard_J, symplectic_spectrum

SAMPLE_BUDGET = 1000
#: relative slack used to push a rescaled matrix strictly inside/outside a test
SCALE_MARGIN = 1e-6
#: minimal ratio lambda1_Xi / lambda1_J accepted as a violation candidate
MIN_RATIO = 1.0 + 1e-6
SWEEP_HEADER = ("G", "lambda1_J", "lambda1_Xi", "holds_J", "holds_Xi")


@dataclass(frozen=True)
class SearchConfig:
    p: NCParams
    gain: float
    samples: int
    seed: int
    refine_steps: int = 20
    start: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.samples) != self.samples or self.samples < 1:
            raise InputError("samples must be a positive integer")
        if int(self.refine_steps) != self.refine_steps or self.refine_steps < 0:
            raise InputError("refine_steps must be a nonnegative integer")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise InputError("seed must be a 64-bit nonnegative integer")


@dataclass(frozen=True)
class ViolationWitness:
    W_cov: np.ndarray
    K_cov: np.ndarray
    lambda1_J: float
    lambda1_Xi: float
    physical: bool
    source: str  # "sample i", "start" or "refined"


class SweepRow(NamedTuple):
    G: float
    lambda1_J: float
    lambda1_Xi: float
    holds_J: bool
    holds_Xi: bool
    theta_term: float  # coefficient of -R11 in Xi_eff, theta / G^2
    eta_term: float  # coefficient of -R22 in Xi_eff, eta G^2


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Private RNG stream of sample ``index`` for a given seed."""
    return np.random.default_rng([int(seed), int(index)])


def lambda1(A, Xi) -> float:
    return float(symplectic_spectrum(A, Xi).values[0])


def sample_probe_cov(rng: np.random.Generator, p: NCParams) -> np.ndarray:
    """Random probe covariance ``W = M M^T + 0.01 I`` that is physical for Omega.

    Entries of M are uniform on [-1, 1]. When ``W + (i/2) Omega`` is not
    positive semidefinite, W is scaled up so that its smallest
    Omega-symplectic value sits just above one.

    Raises:
        NoConvergence: no physical sample within the rejection budget.
    """
    Om = build_Omega(p)
    for _ in range(SAMPLE_BUDGET):
        M = rng.uniform(-1.0, 1.0, size=(4, 4))
        W = M @ M.T + 0.01 * np.eye(4)
        lam = lambda1(W, Om)
        if lam < 1.0:
            W = W * ((1.0 + SCALE_MARGIN) / lam)
        W = 0.5 * (W + W.T)
        if matcore.is_psd(W + 0.5j * Om).flag:
            return W
    raise NoConvergence("no physical probe covariance within the sampling budget")


class _Problem:
    def __init__(self, p: NCParams, gain: float):
        self.p = p
        self.model = bae_model(p, gain)
        self.Xi = self.model.Xi_eff
        if is_singular(self.Xi):
            raise SingularForm("effective form is singular")
        self.hJ = p.hbar * standard_J(2)
        self.Om = build_Omega(p)

    def K(self, W) -> np.ndarray:
        return noise_matrix(self.model, None, W, commutative=True)

    def lambdas(self, W):
        K = self.K(W)
        lam_x = lambda1(K, self.Xi)
        lam_j = lam_x if np.array_equal(self.Xi, self.hJ) else lambda1(K, self.hJ)
        return lam_j, lam_x

    def verify(self, W, source: str) -> Optional[ViolationWitness]:
        """Independent recomputation of both verdicts and of physicality."""
        K = self.K(W)
        on_xi = check_form(K, self.Xi)
        on_j = check_form(K, self.hJ)
        physical = check_form(W, self.Om).holds
        if not (on_xi.holds and not on_j.holds and physical):
            return None
        lam_j, lam_x = on_j.symplectic_lambda1, on_xi.symplectic_lambda1
        if lam_j is None or lam_x is None or not lam_j < 1.0 <= lam_x:
            return None
        return ViolationWitness(W, K, lam_j, lam_x, physical, source)

    def straddle(self, W, lam_j: float, lam_x: float, source: str):
        # rescale so that lambda1_J < 1 < lambda1_Xi; needs lam_x / lam_j > 1
        if lam_x < MIN_RATIO * lam_j:
            return None
        return self.verify(W / math.sqrt(lam_j * lam_x), source)


def _log_ratio(prob: _Problem, L: np.ndarray) -> float:
    W = L @ L.T
    try:
        lam_j, lam_x = prob.lambdas(W)
    except (InputError, NoConvergence):
        return -math.inf
    if lam_j <= 0 or lam_x <= 0:
        return -math.inf
    return math.log(lam_x) - math.log(lam_j)


def _refine(prob: _Problem, W: np.ndarray, steps: int) -> np.ndarray:
    """Coordinate ascent on ``log(lambda1_Xi / lambda1_J)`` over a Cholesky factor."""
    L = np.linalg.cholesky(W)
    idx = [(i, j) for i in range(4) for j in range(i + 1)]
    best = _log_ratio(prob, L)
    h = 0.1 * float(np.max(np.abs(L)))
    for _ in range(steps):
        improved = False
        for i, j in idx:
            for sign in (1.0, -1.0):
                trial = L.copy()
                trial[i, j] += sign * h
                value = _log_ratio(prob, trial)
                if value > best:
                    L, best, improved = trial, value, True
                    break
        if not improved:
            h *= 0.5
    return L @ L.T


def find_violation(cfg: SearchConfig) -> Optional[ViolationWitness]:
    """Search for W with ``K^C`` passing ``Xi_eff`` but failing ``hbar J``.

    Samples are drawn from private per-index RNG streams and scanned in
    index order; the first verified hit is returned. Without a direct hit
    the most promising sample is refined by coordinate ascent on the
    scale-free ratio of the two symplectic values and then rescaled.
    Returns None when the budget is exhausted.

    Raises:
        SingularForm: the effective form is singular.
    """
    prob = _Problem(cfg.p, cfg.gain)
    best_W, best_ratio = None, -math.inf

    def consider(W, source):
        nonlocal best_W, best_ratio
        lam_j, lam_x = prob.lambdas(W)
        if lam_x >= 1.0 > lam_j:
            hit = prob.verify(W, source)
            if hit is not None:
                return hit
        hit = prob.straddle(W, lam_j, lam_x, source)
        if hit is not None:
            return hit
        ratio = lam_x / lam_j
        if ratio > best_ratio:
            best_W, best_ratio = W, ratio
        return None

    if cfg.start is not None:
        start = np.asarray(cfg.start, dtype=float)
        hit = consider(0.5 * (start + start.T), "start")
        if hit is not None:
            return hit
    for i in range(cfg.samples):
        W = sample_probe_cov(sample_rng(cfg.seed, i), cfg.p)
        hit = consider(W, f"sample {i}")
        if hit is not None:
            return hit
    if best_W is None or cfg.refine_steps == 0:
        return None
    if matcore.herm_eigen(best_W).eigenvalues[0] <= 0:
        return None
    W = _refine(prob, best_W, cfg.refine_steps)
    lam_j, lam_x = prob.lambdas(W)
    return prob.straddle(W, lam_j, lam_x, "refined")


class GridHit(NamedTuple):
    theta: float
    eta: float
    gain: float
    witness: Optional[ViolationWitness]


def grid_search(
    thetas: Sequence[float],
    etas: Sequence[float],
    gains: Sequence[float],
    samples: int,
    seed: int,
    hbar: float = 1.0,
    refine_steps: int = 20,
) -> list[GridHit]:
    """Run :func:`find_violation` on every (theta, eta, G) grid point."""
    out = []
    for th in thetas:
        for et in etas:
            p = NCParams(th, et, hbar)
            for G in gains:
                cfg = SearchConfig(p, G, samples, seed, refine_steps)
                out.append(GridHit(th, et, G, find_violation(cfg)))
    return out


def gain_sweep(p: NCParams, W_cov, g_from: float, g_to: float, steps: int) -> list[SweepRow]:
    """Both symplectic tests of ``K^C`` on a geometric grid of gains.

    Raises:
        InvalidRange: unless ``0 < g_from < g_to`` and ``steps >= 2``.
    """
    if not (np.isfinite(g_from) and np.isfinite(g_to) and 0 < g_from < g_to):
        raise InvalidRange("need 0 < g_from < g_to")
    if int(steps) != steps or steps < 2:
        raise InvalidRange("steps must be an integer >= 2")
    W = np.asarray(W_cov, dtype=float)
    hJ = p.hbar * standard_J(2)
    rows = []
    for G in np.geomspace(g_from, g_to, int(steps)):
        G = float(G)
        model = bae_model(p, G)
        K = noise_matrix(model, None, W, commutative=True)
        on_j = check_form(K, hJ)
        on_x = check_form(K, model.Xi_eff)
        lam_j = on_j.symplectic_lambda1 if on_j.symplectic_lambda1 is not None else lambda1(K, hJ)
        lam_x = on_x.symplectic_lambda1 if on_x.symplectic_lambda1 is not None else lambda1(K, model.Xi_eff)
        rows.append(SweepRow(G, lam_j, lam_x, on_j.holds, on_x.holds, p.theta / G**2, p.eta * G**2))
    return rows


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return repr(float(x))


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow([_fmt(getattr(row, name)) for name in SWEEP_HEADER])
    return buf.getvalue()


def write_sweep_csv(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(sweep_csv(rows))
