"""Gegenbauer (ultraspherical) polynomials for the weight (1-x^2)^(lambda-1/2).

Evaluation by three-term recurrence, closed-form values at x = 1, L2 norms,
the normalized family W^lam_n = C^lam_n / C^lam_n(1), Gauss quadrature for
the measure dOmega_lam = (1-x^2)^(lambda-1/2) dx, and the Fourier-Gegenbauer
transform / series reconstruction built on top of it.

The index lambda = (d-1)/2 ties the family to the sphere S^d.  lambda = 0 is
handled as an explicit Chebyshev branch, C^0_n = (2/n) T_n for n > 0 and
C^0_0 = 1, rather than by taking numerical limits.

All functions are pure; QuadratureRule and SeriesCoeffs are immutable and
safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .errors import EvaluationError, ResourceLimitError

__all__ = [
    "GegenbauerParams",
    "SeriesCoeffs",
    "QuadratureRule",
    "clamp_x",
    "eval_gegenbauer",
    "eval_gegenbauer_derivative",
    "gegenbauer_at_one",
    "norm_h",
    "weight_w",
    "quadrature_rule",
    "fourier_coeff",
    "transform",
    "series_eval",
    "moment",
]

#: Inputs this far outside [-1, 1] are clamped; anything further is an error.
X_CLAMP_SLACK = 1e-12

MAX_QUAD_ORDER = 100_000


def clamp_x(x):
    """Snap values within 1e-12 of [-1, 1] back onto the interval.

    Dot products of unit vectors routinely land a few ulp outside; values
    beyond the slack raise ValueError.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < -1.0 - X_CLAMP_SLACK) or np.any(x > 1.0 + X_CLAMP_SLACK):
        raise ValueError("argument outside [-1, 1] by more than 1e-12")
    return np.clip(x, -1.0, 1.0)


@dataclass(frozen=True)
class GegenbauerParams:
    """Index lambda >= 0 of the ultraspherical family; lambda=(d-1)/2 for S^d."""

    lam: float

    def __post_init__(self):
        if not (self.lam >= 0.0) or not math.isfinite(self.lam):
            raise ValueError(f"lambda must be a finite nonnegative real, got {self.lam}")

    @classmethod
    def for_sphere(cls, d: int) -> "GegenbauerParams":
        if d < 1:
            raise ValueError("sphere dimension must be >= 1")
        return cls((d - 1) / 2.0)

    @property
    def sphere_dim(self) -> float:
        return 2.0 * self.lam + 1.0


def _chebyshev_t(n: int, x: np.ndarray) -> np.ndarray:
    if n == 0:
        return np.ones_like(x)
    t_prev, t = np.ones_like(x), x.copy()
    for _ in range(2, n + 1):
        t_prev, t = t, 2.0 * x * t - t_prev
    return t


def eval_gegenbauer(params: GegenbauerParams, n: int, x) -> np.ndarray | float:
    """Evaluate C^lam_n(x) by the three-term recurrence.

    lambda = 0 uses the limit convention C^0_n = (2/n) T_n for n > 0.
    Inputs within 1e-12 of [-1, 1] are clamped first.
    """
    if n < 0:
        raise ValueError("degree n must be nonnegative")
    scalar = np.isscalar(x)
    x = clamp_x(x)
    lam = params.lam
    if n == 0:
        out = np.ones_like(x)
    elif lam == 0.0:
        out = (2.0 / n) * _chebyshev_t(n, x)
    else:
        c_prev = np.ones_like(x)
        c = 2.0 * lam * x
        for k in range(2, n + 1):
            c_prev, c = c, (2.0 * (k + lam - 1.0) * x * c - (k + 2.0 * lam - 2.0) * c_prev) / k
        out = c
    return float(out) if scalar else out


def eval_gegenbauer_derivative(params: GegenbauerParams, n: int, x) -> np.ndarray | float:
    """d/dx C^lam_n(x) via the differentiated three-term recurrence.

    Independent of the order-raising identity, so it can serve as one side
    of cross-checks against 2*mu*C^(lam+1)_(n-1).
    """
    if n < 0:
        raise ValueError("degree n must be nonnegative")
    scalar = np.isscalar(x)
    x = clamp_x(x)
    lam = params.lam
    if n == 0:
        out = np.zeros_like(x)
    elif lam == 0.0:
        # T'_n from the differentiated Chebyshev recurrence, scaled by 2/n.
        t_prev, t = np.ones_like(x), x.copy()
        d_prev, d = np.zeros_like(x), np.ones_like(x)
        for _ in range(2, n + 1):
            t_prev, t, d_prev, d = t, 2.0 * x * t - t_prev, d, 2.0 * t + 2.0 * x * d - d_prev
        out = (2.0 / n) * d
    else:
        c_prev = np.ones_like(x)
        c = 2.0 * lam * x
        d_prev = np.zeros_like(x)
        d = np.full_like(x, 2.0 * lam)
        if n == 1:
            out = d
        else:
            for k in range(2, n + 1):
                c_new = (2.0 * (k + lam - 1.0) * x * c - (k + 2.0 * lam - 2.0) * c_prev) / k
                d_new = (2.0 * (k + lam - 1.0) * (c + x * d) - (k + 2.0 * lam - 2.0) * d_prev) / k
                c_prev, c, d_prev, d = c, c_new, d, d_new
            out = d
    return float(out) if scalar else out


def gegenbauer_at_one(params: GegenbauerParams, n: int) -> float:
    """C^lam_n(1), i.e. binom(n + 2*lam - 1, n) for lam > 0, 2/n for lam = 0."""
    if n < 0:
        raise ValueError("degree n must be nonnegative")
    if n == 0:
        return 1.0
    if params.lam == 0.0:
        return 2.0 / n
    # Gamma ratio through log-gamma so n up to ~1e4 cannot overflow.
    return math.exp(gammaln(n + 2.0 * params.lam) - gammaln(2.0 * params.lam) - gammaln(n + 1.0))


def norm_h(params: GegenbauerParams, n: int) -> float:
    """Squared L2 norm h^lam_n = int (C^lam_n)^2 dOmega_lam, lambda > 0 only."""
    if n < 0:
        raise ValueError("degree n must be nonnegative")
    lam = params.lam
    if lam == 0.0:
        raise ValueError("norm_h is not defined at lambda = 0; use weight_w for the Chebyshev branch")
    log_h = (
        math.log(math.pi)
        + gammaln(n + 2.0 * lam)
        - (2.0 * lam - 1.0) * math.log(2.0)
        - gammaln(n + 1.0)
        - math.log(n + lam)
        - 2.0 * gammaln(lam)
    )
    return math.exp(log_h)


def weight_w(params: GegenbauerParams, n: int) -> float:
    """Dual weight w_lam(n): int W^lam_n W^lam_m dOmega_lam = delta_nm / w_lam(n)."""
    if n < 0:
        raise ValueError("degree n must be nonnegative")
    lam = params.lam
    if lam == 0.0:
        return 1.0 / math.pi if n == 0 else 2.0 / math.pi
    log_w = (
        gammaln(lam)
        + math.log(n + lam)
        + gammaln(n + 2.0 * lam)
        - 0.5 * math.log(math.pi)
        - gammaln(lam + 0.5)
        - gammaln(2.0 * lam)
        - gammaln(n + 1.0)
    )
    return math.exp(log_w)


def total_mass(params: GegenbauerParams) -> float:
    """int_{-1}^{1} dOmega_lam = sqrt(pi) Gamma(lam + 1/2) / Gamma(lam + 1)."""
    return math.sqrt(math.pi) * math.exp(gammaln(params.lam + 0.5) - gammaln(params.lam + 1.0))


def moment(params: GegenbauerParams, k: int) -> float:
    """Exact int x^k dOmega_lam; vanishes for odd k (quadrature oracle)."""
    if k % 2 == 1:
        return 0.0
    return math.exp(
        gammaln((k + 1) / 2.0) + gammaln(params.lam + 0.5) - gammaln((k + 2) / 2.0 + params.lam)
    )


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for int f(x) (1-x^2)^(lambda-1/2) dx on [-1, 1].

    Exact for polynomials of degree <= 2*order - 1; nodes strictly increasing,
    weights positive.  Immutable and shareable.
    """

    nodes: np.ndarray
    weights: np.ndarray
    params: GegenbauerParams
    order: int

    def integrate(self, f) -> float:
        """Integrate a callable (or an array of node values) against dOmega."""
        vals = f(self.nodes) if callable(f) else np.asarray(f, dtype=float)
        return float(self.weights @ vals)


def quadrature_rule(params: GegenbauerParams, order: int) -> QuadratureRule:
    """Golub-Welsch rule for the symmetric Jacobi weight alpha=beta=lambda-1/2.

    The Jacobi matrix for this weight has zero diagonal and off-diagonal
    entries sqrt(beta_k) with beta_k = k(k+2a) / ((2k+2a+1)(2k+2a-1)),
    a = lambda - 1/2; the k=1 entry is taken in the cancelled form 1/(3+2a)
    so the Chebyshev case a = -1/2 stays finite.
    """
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    if order > MAX_QUAD_ORDER:
        raise ResourceLimitError(f"quadrature order {order} exceeds {MAX_QUAD_ORDER}")
    a = params.lam - 0.5
    mass = total_mass(params)
    if order == 1:
        return QuadratureRule(np.zeros(1), np.array([mass]), params, 1)
    k = np.arange(2.0, order)
    beta = np.empty(order - 1)
    beta[0] = 1.0 / (3.0 + 2.0 * a)  # k = 1 in cancelled form; raw is 0/0 at a = -1/2
    beta[1:] = k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0))
    nodes, vecs = eigh_tridiagonal(np.zeros(order), np.sqrt(beta))
    weights = mass * vecs[0] ** 2
    return QuadratureRule(nodes, weights, params, order)


def _w_table(params: GegenbauerParams, n_max: int, x: np.ndarray) -> np.ndarray:
    """Rows n = 0..n_max of W^lam_n(x) = C^lam_n(x) / C^lam_n(1)."""
    lam = params.lam
    out = np.empty((n_max + 1, x.size))
    out[0] = 1.0
    if n_max == 0:
        return out
    if lam == 0.0:
        # W^0_n = T_n for every n.
        t_prev = np.ones_like(x)
        t = x.copy()
        out[1] = t
        for n in range(2, n_max + 1):
            t_prev, t = t, 2.0 * x * t - t_prev
            out[n] = t
        return out
    c_prev = np.ones_like(x)
    c = 2.0 * lam * x
    out[1] = c / gegenbauer_at_one(params, 1)
    for n in range(2, n_max + 1):
        c_prev, c = c, (2.0 * (n + lam - 1.0) * x * c - (n + 2.0 * lam - 2.0) * c_prev) / n
        out[n] = c / gegenbauer_at_one(params, n)
    return out


@lru_cache(maxsize=64)
def _leggauss_cached(order: int):
    return np.polynomial.legendre.leggauss(order)


def _theta_panel_rule(breakpoints, order: int):
    """Gauss-Legendre panels in theta on [0, pi], split at arccos(breakpoints).

    Integrating in theta keeps the integrand smooth per panel even when the
    kernel has sqrt-type behaviour at x = +-1, since dOmega_lam pulls back to
    sin(theta)^(2*lambda) d(theta).
    """
    edges = {0.0, math.pi}
    for b in breakpoints:
        if -1.0 <= b <= 1.0:
            edges.add(math.acos(float(np.clip(b, -1.0, 1.0))))
    edges = sorted(edges)
    gl_nodes, gl_weights = _leggauss_cached(order)
    thetas, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        if half <= 0.0:
            continue
        thetas.append(0.5 * (hi + lo) + half * gl_nodes)
        weights.append(half * gl_weights)
    return np.concatenate(thetas), np.concatenate(weights)


def transform(f, params: GegenbauerParams, n_max: int, order: int = 256) -> "SeriesCoeffs":
    """Fourier-Gegenbauer coefficients fhat_lam(n) = int f W^lam_n dOmega, n <= n_max.

    Smooth kernels use the Gauss-Gegenbauer rule directly; kernels that
    declare breakpoints are integrated by Gauss-Legendre panels in theta
    split at the breakpoints (`order` nodes per panel).
    """
    if n_max < 0:
        raise ValueError("truncation must be nonnegative")
    breakpoints = tuple(getattr(f, "breakpoints", ()))
    if breakpoints:
        theta, wq = _theta_panel_rule(breakpoints, order)
        x = np.cos(theta)
        wq = wq * np.sin(theta) ** (2.0 * params.lam)
    else:
        rule = quadrature_rule(params, max(order, n_max + 1))
        x, wq = rule.nodes, rule.weights
    fx = np.asarray(f(x), dtype=float)
    if not np.all(np.isfinite(fx)):
        raise EvaluationError("kernel produced non-finite samples on the quadrature grid")
    table = _w_table(params, n_max, x)
    coeffs = table @ (wq * fx)
    return SeriesCoeffs(params=params, coeffs=coeffs, truncation=n_max)


def fourier_coeff(f, params: GegenbauerParams, n: int, order: int = 256) -> float:
    """Single Fourier-Gegenbauer coefficient fhat_lam(n)."""
    return float(transform(f, params, n, order=order).coeffs[n])


@dataclass(frozen=True)
class SeriesCoeffs:
    """Truncated Fourier-Gegenbauer coefficient vector of a zonal function.

    `coeffs[n]` holds fhat_lam(n) for n = 0..truncation; the function is
    reconstructed as sum_n w_lam(n) fhat_lam(n) W^lam_n.
    """

    params: GegenbauerParams
    coeffs: np.ndarray
    truncation: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))
        if self.coeffs.shape != (self.truncation + 1,):
            raise ValueError("coefficient vector must have length truncation + 1")

    def weights(self) -> np.ndarray:
        return np.array([weight_w(self.params, n) for n in range(self.truncation + 1)])

    def expansion_coeffs(self) -> np.ndarray:
        """Coefficients a_n of f ~ sum a_n C^lam_n (same signs as fhat)."""
        at_one = np.array([gegenbauer_at_one(self.params, n) for n in range(self.truncation + 1)])
        return self.weights() * self.coeffs / at_one


def _cesaro_factors(n_max: int, delta: float) -> np.ndarray:
    # (C, delta) factors A_{N-n}^delta / A_N^delta with A_k = binom(k+delta, k).
    k = np.arange(n_max + 1.0)
    log_a = gammaln(k + delta + 1.0) - gammaln(delta + 1.0) - gammaln(k + 1.0)
    return np.exp(log_a[::-1] - log_a[-1])


def series_eval(s: SeriesCoeffs, x, cesaro: float | None = None) -> np.ndarray | float:
    """Partial sum sum_{n<=N} w_lam(n) fhat(n) W^lam_n(x).

    `cesaro` (an order delta > 0) optionally applies Cesaro smoothing factors,
    purely as a de-Gibbs device for rough kernels.  Accepts arrays of any
    shape (Gram matrices included).
    """
    scalar = np.isscalar(x)
    x = np.atleast_1d(clamp_x(x))
    shape = x.shape
    table = _w_table(s.params, s.truncation, x.ravel())
    terms = s.weights() * s.coeffs
    if cesaro is not None:
        terms = terms * _cesaro_factors(s.truncation, cesaro)
    out = (terms @ table).reshape(shape)
    return float(out.ravel()[0]) if scalar else out
