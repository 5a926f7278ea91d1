"""Heisenberg-picture evolution of linear observables under quadratic
Hamiltonians on the deformed (noncommutative) phase space.

Coefficients are first-order jets in the deformation parameters,
``c0 + c_theta * theta + c_eta * eta``; products drop ``theta**2``,
``eta**2`` and ``theta*eta``. The composite basis is::

    z = (X_a, Y_a, P_Xa, P_Ya, X_b, Y_b, P_Xb, P_Yb)

with ``a`` the object and ``b`` the probe. For ``H = z^T B z / 2`` and
``[z_k, z_l] = i W_kl`` the coefficient row of ``A = a^T z`` obeys
``da^T/dt = a^T W B / hbar``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, InputError, NonFiniteResult, NonLinearModel
from .symplectic import NCParams, R11, R22, build_Omega, check_symmetric, standard_J

BASIS = ("X_a", "Y_a", "P_Xa", "P_Ya", "X_b", "Y_b", "P_Xb", "P_Yb")
_INDEX = {name: k for k, name in enumerate(BASIS)}


def basis_index(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise InputError(f"unknown basis operator {name!r}; expected one of {BASIS}") from None


# ---------------------------------------------------------------- jets


@dataclass(frozen=True)
class Jet:
    """Scalar ``c0 + c_theta*theta + c_eta*eta`` truncated at first order."""

    c0: float = 0.0
    c_theta: float = 0.0
    c_eta: float = 0.0

    def __add__(self, other):
        other = _as_jet(other)
        return Jet(self.c0 + other.c0, self.c_theta + other.c_theta, self.c_eta + other.c_eta)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c0, -self.c_theta, -self.c_eta)

    def __sub__(self, other):
        return self + (-_as_jet(other))

    def __rsub__(self, other):
        return _as_jet(other) - self

    def __mul__(self, other):
        other = _as_jet(other)
        return Jet(
            self.c0 * other.c0,
            self.c0 * other.c_theta + self.c_theta * other.c0,
            self.c0 * other.c_eta + self.c_eta * other.c0,
        )

    __rmul__ = __mul__

    def value(self, theta: float, eta: float) -> float:
        return self.c0 + self.c_theta * theta + self.c_eta * eta

    def close_to(self, other, atol: float) -> bool:
        other = _as_jet(other)
        return (
            abs(self.c0 - other.c0) <= atol
            and abs(self.c_theta - other.c_theta) <= atol
            and abs(self.c_eta - other.c_eta) <= atol
        )


def _as_jet(x) -> Jet:
    if isinstance(x, Jet):
        return x
    return Jet(float(x))


@dataclass(frozen=True)
class JetArray:
    """Array-valued jet: three real arrays of identical shape."""

    # make numpy defer to the reflected operators below
    __array_ufunc__ = None

    c0: np.ndarray
    c_theta: np.ndarray = field(default=None)
    c_eta: np.ndarray = field(default=None)

    def __post_init__(self):
        c0 = np.asarray(self.c0, dtype=float)
        object.__setattr__(self, "c0", c0)
        for name in ("c_theta", "c_eta"):
            part = getattr(self, name)
            part = np.zeros_like(c0) if part is None else np.asarray(part, dtype=float)
            if part.shape != c0.shape:
                raise DimensionMismatch(f"{name} has shape {part.shape}, expected {c0.shape}")
            object.__setattr__(self, name, part)

    @classmethod
    def zeros(cls, shape) -> "JetArray":
        return cls(np.zeros(shape))

    @classmethod
    def eye(cls, n: int) -> "JetArray":
        return cls(np.eye(n))

    @property
    def shape(self):
        return self.c0.shape

    @property
    def T(self) -> "JetArray":
        return JetArray(self.c0.T, self.c_theta.T, self.c_eta.T)

    def parts(self):
        return self.c0, self.c_theta, self.c_eta

    def __getitem__(self, key):
        c0, ct, ce = self.c0[key], self.c_theta[key], self.c_eta[key]
        if np.ndim(c0) == 0:
            return Jet(float(c0), float(ct), float(ce))
        return JetArray(c0, ct, ce)

    def __add__(self, other):
        other = as_jet_array(other)
        return JetArray(self.c0 + other.c0, self.c_theta + other.c_theta, self.c_eta + other.c_eta)

    __radd__ = __add__

    def __neg__(self):
        return JetArray(-self.c0, -self.c_theta, -self.c_eta)

    def __sub__(self, other):
        return self + (-as_jet_array(other))

    def __rsub__(self, other):
        return as_jet_array(other) - self

    def __mul__(self, k):
        if isinstance(k, Jet):
            return JetArray(
                self.c0 * k.c0,
                self.c0 * k.c_theta + self.c_theta * k.c0,
                self.c0 * k.c_eta + self.c_eta * k.c0,
            )
        k = float(k)
        return JetArray(self.c0 * k, self.c_theta * k, self.c_eta * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (1.0 / float(k))

    def __matmul__(self, other):
        other = as_jet_array(other)
        return JetArray(
            self.c0 @ other.c0,
            self.c0 @ other.c_theta + self.c_theta @ other.c0,
            self.c0 @ other.c_eta + self.c_eta @ other.c0,
        )

    def __rmatmul__(self, other):
        return as_jet_array(other) @ self

    def value(self, theta: float, eta: float) -> np.ndarray:
        return self.c0 + theta * self.c_theta + eta * self.c_eta

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(p)) if p.size else 0.0 for p in self.parts()))

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.parts())


def as_jet_array(x) -> JetArray:
    if isinstance(x, JetArray):
        return x
    return JetArray(np.asarray(x, dtype=float))


def _block_norm(L: JetArray) -> float:
    # 1-norm of the block-triangular real representation of the jet matrix
    return float(sum(np.max(np.sum(np.abs(p), axis=0)) for p in L.parts()))


def _taylor(L: JetArray, max_terms: int, stop_on_zero_only: bool = False):
    n = L.shape[0]
    result = JetArray.eye(n)
    term = JetArray.eye(n)
    for k in range(1, max_terms + 1):
        term = (term @ L) / k
        size = term.max_abs()
        if size == 0.0:
            return result, k - 1
        result = result + term
        if not stop_on_zero_only and size <= 2.0**-60 * result.max_abs():
            return result, k
    return None, max_terms


def jet_expm_terms(L) -> tuple[JetArray, int]:
    """``exp(L)`` for a jet matrix, plus the number of Taylor terms used.

    A nilpotent generator is summed exactly (the series stops at the first
    vanishing term). Otherwise scaling and squaring is applied, with the
    reduced series summed to machine precision.
    """
    L = as_jet_array(L)
    if L.c0.ndim != 2 or L.shape[0] != L.shape[1]:
        raise DimensionMismatch("generator must be square")
    if not L.is_finite():
        raise NonFiniteResult("generator has non-finite entries")
    n = L.shape[0]
    exact, terms = _taylor(L, 3 * n + 1, stop_on_zero_only=True)
    if exact is not None:
        return exact, terms
    norm = _block_norm(L)
    s = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    X, terms = _taylor(L / 2.0**s, 60)
    if X is None:
        raise NonFiniteResult("exponential series did not converge")
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            X = X @ X
    if not X.is_finite():
        raise NonFiniteResult("matrix exponential overflowed")
    return X, terms


def jet_expm(L) -> JetArray:
    return jet_expm_terms(L)[0]


# ---------------------------------------------------------------- observables


@dataclass(frozen=True)
class Observable:
    """Linear observable ``sum_k coeffs[k] * z_k + constant``."""

    coeffs: JetArray
    constant: Jet = Jet()

    def __post_init__(self):
        coeffs = as_jet_array(self.coeffs)
        if coeffs.shape != (len(BASIS),):
            raise DimensionMismatch(f"observable needs {len(BASIS)} coefficients, got {coeffs.shape}")
        if not coeffs.is_finite():
            raise NonFiniteResult("observable has non-finite coefficients")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "constant", _as_jet(self.constant))

    @classmethod
    def basis(cls, name: str) -> "Observable":
        c = np.zeros(len(BASIS))
        c[basis_index(name)] = 1.0
        return cls(JetArray(c))

    def coeff(self, name: str) -> Jet:
        return self.coeffs[basis_index(name)]

    def __add__(self, other: "Observable") -> "Observable":
        return Observable(self.coeffs + other.coeffs, self.constant + other.constant)

    def __sub__(self, other: "Observable") -> "Observable":
        return Observable(self.coeffs - other.coeffs, self.constant - other.constant)

    def __neg__(self):
        return Observable(-self.coeffs, -self.constant)

    def __mul__(self, k):
        return Observable(self.coeffs * k, self.constant * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (1.0 / float(k))

    def value(self, theta: float, eta: float) -> np.ndarray:
        """Numeric coefficient vector at the given deformation."""
        return self.coeffs.value(theta, eta)


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """``H = z^T B z / 2`` acting for ``duration`` time units."""

    B: np.ndarray
    duration: float

    def __post_init__(self):
        B = check_symmetric(self.B, "B")
        if B.shape != (len(BASIS), len(BASIS)):
            raise DimensionMismatch(f"B must be 8x8, got {B.shape}")
        if not (np.isfinite(self.duration) and self.duration > 0):
            raise InputError("duration must be positive")
        object.__setattr__(self, "B", B)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[float, str, str]], duration: float):
        """Build from ``(coef, op1, op2)`` triples meaning ``coef * op1 * op2``.

        Only the symmetrised product is represented, which is all the
        Heisenberg dynamics sees (the commutator part is a c-number).
        """
        B = np.zeros((len(BASIS), len(BASIS)))
        for coef, left, right in terms:
            i, j = basis_index(left), basis_index(right)
            B[i, j] += coef
            B[j, i] += coef
        return cls(B, duration)


def bae_hamiltonian(alpha: float, duration: float) -> QuadraticHamiltonian:
    """Amplifier coupling ``alpha (P_Xb X_a + P_Yb Y_a)``; gain ``alpha*duration``."""
    return QuadraticHamiltonian.from_terms(
        [(alpha, "P_Xb", "X_a"), (alpha, "P_Yb", "Y_a")], duration
    )


def nqt_hamiltonians(t1: float = 1.0, t2: float = 2.0) -> list[QuadraticHamiltonian]:
    """The two stages of the transducer: ``[0, t1]`` then ``[t1, t2]``."""
    if not 0 < t1 < t2:
        raise InputError("need 0 < t1 < t2")
    t = t2 - t1
    first = QuadraticHamiltonian.from_terms(
        [(1.0 / t1, "P_Xb", "X_a"), (1.0 / t1, "P_Yb", "Y_a")], t1
    )
    second = QuadraticHamiltonian.from_terms(
        [(-1.0 / t, "P_Xa", "X_b"), (-1.0 / t, "P_Ya", "Y_b")], t
    )
    return [first, second]


# ---------------------------------------------------------------- forms


def composite_omega(p: NCParams) -> np.ndarray:
    """8x8 commutator matrix of object + probe (no cross commutators)."""
    Om = build_Omega(p)
    W = np.zeros((8, 8))
    W[:4, :4] = Om
    W[4:, 4:] = Om
    return W


def composite_omega_jet(hbar: float = 1.0) -> JetArray:
    """Jet version of :func:`composite_omega`, linear in (theta, eta)."""

    def blockdiag(M):
        out = np.zeros((8, 8))
        out[:4, :4] = M
        out[4:, 4:] = M
        return out

    return JetArray(blockdiag(hbar * standard_J(2)), blockdiag(R11), blockdiag(R22))


def omega_jet(hbar: float = 1.0) -> JetArray:
    """4x4 single-system commutator matrix as a jet."""
    return JetArray(hbar * standard_J(2), R11, R22)


def commutator(a: Observable, b: Observable, W8) -> Jet:
    """Real ``gamma`` with ``[a, b] = i gamma``."""
    W8 = as_jet_array(W8)
    if W8.shape != (len(BASIS), len(BASIS)):
        raise DimensionMismatch("commutator matrix must be 8x8")
    col = W8 @ JetArray(*(p[:, None] for p in b.coeffs.parts()))
    row = JetArray(*(p[None, :] for p in a.coeffs.parts()))
    return (row @ col)[0, 0]


def generator(H: QuadraticHamiltonian, W8, hbar: float) -> JetArray:
    """Row-action generator ``duration * W B / hbar`` of one stage."""
    return (as_jet_array(W8) @ H.B) * (H.duration / hbar)


def propagator(stages: Sequence[QuadraticHamiltonian], W8, hbar: float) -> JetArray:
    """Matrix M with ``a_out^T = a_in^T M``; stages applied in time order."""
    if not stages:
        raise InputError("need at least one stage")
    M = JetArray.eye(len(BASIS))
    for H in stages:
        M = M @ jet_expm(generator(H, W8, hbar))
    return M


def _resolve_form(W8, p: NCParams):
    return composite_omega_jet(p.hbar) if W8 is None else as_jet_array(W8)


def evolve(a0: Observable, H: QuadraticHamiltonian, W8, p: NCParams) -> Observable:
    """Evolve ``a0`` through one Hamiltonian stage.

    ``W8`` may be a jet matrix (first-order evolution in theta, eta), a
    plain 8x8 array (exact evolution at fixed numeric deformation), or
    ``None`` for ``composite_omega_jet(p.hbar)``.
    """
    return evolve_piecewise(a0, [H], W8, p)


def evolve_piecewise(
    a0: Observable, stages: Sequence[QuadraticHamiltonian], W8, p: NCParams
) -> Observable:
    M = propagator(stages, _resolve_form(W8, p), p.hbar)
    row = JetArray(*(c[None, :] for c in a0.coeffs.parts()))
    out = (row @ M)[0]
    return Observable(out, a0.constant)


def output_commutators(v_out: Sequence[Observable], W8) -> JetArray:
    """Matrix ``T`` of ``[V_a, V_b] = i T_ab`` for a list of observables."""
    m = len(v_out)
    parts = np.zeros((3, m, m))
    for i in range(m):
        for j in range(m):
            g = commutator(v_out[i], v_out[j], W8)
            parts[:, i, j] = (g.c0, g.c_theta, g.c_eta)
    return JetArray(*parts)


class LinearModel(NamedTuple):
    Lambda: JetArray
    Pi: JetArray


def extract_linear_model(v_out: Sequence[Observable]) -> LinearModel:
    """Read ``K = V_out - Z_in = Lambda Z_in + Pi W_in`` off the coefficients."""
    if len(v_out) != 4:
        raise DimensionMismatch("expected 4 output observables")
    rows = [v.coeffs for v in v_out]
    for v in v_out:
        c = v.constant
        if (c.c0, c.c_theta, c.c_eta) != (0.0, 0.0, 0.0):
            raise NonLinearModel("output observables carry a constant offset")
    C = JetArray(*(np.stack([r.parts()[k] for r in rows]) for k in range(3)))
    if not C.is_finite():
        raise NonLinearModel("non-finite coefficient in output observables")
    Lambda = C[:, :4] - np.eye(4)
    Pi = C[:, 4:]
    return LinearModel(Lambda, Pi)


# ---------------------------------------------------------------- measurement oracles


class Oracle(NamedTuple):
    propagator: JetArray  # rows: (X_a, ..., P_Yb)^out in terms of z_in
    outputs: list  # full list of 8 evolved basis observables
    v_out: list  # (M_1, M_2, B_1, B_2) outputs
    model: LinearModel
    T: JetArray


def _oracle(stages, v_index_scale, hbar):
    W8 = composite_omega_jet(hbar)
    M = propagator(stages, W8, hbar)
    outs = [Observable(M[k]) for k in range(len(BASIS))]
    raw = [outs[basis_index(name)] for name, _ in v_index_scale]
    scale = np.array([s for _, s in v_index_scale])
    v_out = [v * s for v, s in zip(raw, scale)]
    model = extract_linear_model(v_out)
    # commutators of the unscaled outputs, rescaled afterwards, so that exact
    # cancellations in the commutative part survive rounding
    T = output_commutators(raw, W8)
    S = np.outer(scale, scale)
    T = JetArray(T.c0 * S, T.c_theta * S, T.c_eta * S)
    return Oracle(M, outs, v_out, model, T)


def bae_oracle(gain: float, hbar: float = 1.0, duration: float = 1.0) -> Oracle:
    """First-order jet evolution of the amplifier with ``G = alpha*duration``."""
    if gain <= 0:
        raise InputError("gain must be positive")
    H = bae_hamiltonian(gain / duration, duration)
    pairs = [("X_b", 1.0 / gain), ("Y_b", 1.0 / gain), ("P_Xa", 1.0), ("P_Ya", 1.0)]
    return _oracle([H], pairs, hbar)


def nqt_oracle(hbar: float = 1.0, t1: float = 1.0, t2: float = 2.0) -> Oracle:
    """First-order jet evolution of the two-stage transducer."""
    pairs = [("X_b", 1.0), ("Y_b", 1.0), ("P_Xa", 1.0), ("P_Ya", 1.0)]
    return _oracle(nqt_hamiltonians(t1, t2), pairs, hbar)
