"""Closed-form locally supported kernel families.

Three groups live here:

* truncated angular powers f_m(cos theta) = (t - theta)^m_+, strictly
  positive definite on S^(2m-1) for m = 2, 3, 4;
* their montee iterates I^k f_m, with the printed closed forms for
  I f_2, I f_3, I^2 f_3, I f_4, I^2 f_4, a recurrence evaluator for a single
  montee of any order m, and numeric composition beyond that;
* the cap self-convolution kernels N_3, N_5, N_7, N_9, supported on
  geodesic balls of radius 2s and normalized to 1 at x = 1.

Kernels are immutable value objects; evaluation is pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateCapError
from .gegenbauer import GegenbauerParams, SeriesCoeffs, clamp_x, series_eval
from .zonal import ZonalKernel

__all__ = [
    "TruncatedPower",
    "MonteeIterate",
    "CapConvKernel",
    "CapCoeffs",
    "eval_truncated_power",
    "eval_montee_closed_form",
    "eval_montee_recurrence",
    "cap_kernel_coefficients",
    "eval_cap_kernel",
    "kernel_from_descriptor",
    "CLOSED_FORM_TAGS",
]

CLOSED_FORM_TAGS = ("If2", "If3", "I2f3", "If4", "I2f4")

_CLOSED_FORM_KEYS = {"If2": (2, 1), "If3": (3, 1), "I2f3": (3, 2), "If4": (4, 1), "I2f4": (4, 2)}
_KEY_TO_TAG = {v: k for k, v in _CLOSED_FORM_KEYS.items()}


def _check_support_angle(t: float):
    if not (0.0 < t < math.pi):
        raise ValueError(f"support angle must lie in (0, pi), got {t}")


@dataclass(frozen=True)
class TruncatedPower:
    """f_m(cos theta) = (t - theta)^m_+ with support angle t in (0, pi)."""

    m: int
    t: float

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("exponent m must be a positive integer")
        _check_support_angle(self.t)

    def as_kernel(self) -> ZonalKernel:
        m, t = self.m, self.t
        return ZonalKernel(
            fn=lambda x: eval_truncated_power(self, x),
            name=f"f_{m}(t={t:g})",
            breakpoints=(math.cos(t), 1.0),
            antiderivative_fn=lambda: MonteeIterate(self, 1).as_kernel(),
            descriptor={"family": "truncated_power", "m": m, "t": t},
        )


def eval_truncated_power(k: TruncatedPower, x):
    """(t - arccos x)^m_+ for a TruncatedPower k."""
    scalar = np.isscalar(x)
    theta = np.arccos(np.atleast_1d(clamp_x(x)))
    out = np.maximum(k.t - theta, 0.0) ** k.m
    return float(out[0]) if scalar else out


def eval_montee_closed_form(which: str, t: float, x):
    """Evaluate one of the printed montee closed forms.

    `which` is one of 'If2', 'If3', 'I2f3', 'If4', 'I2f4'.  The value is 0
    for theta >= t.
    """
    if which not in _CLOSED_FORM_KEYS:
        raise ValueError(f"unknown family tag {which!r}; expected one of {CLOSED_FORM_TAGS}")
    _check_support_angle(t)
    scalar = np.isscalar(x)
    theta = np.arccos(np.atleast_1d(clamp_x(x)))
    u = t - theta
    ct, st = np.cos(theta), np.sin(theta)
    if which == "If2":
        val = ct * (u**2 - 2.0) + 2.0 * st * u + 2.0 * math.cos(t)
    elif which == "If3":
        val = ct * (u**3 - 6.0 * u) + st * (3.0 * u**2 - 6.0) + 6.0 * math.sin(t)
    elif which == "I2f3":
        a7, a6, a5, a4 = 0.25, -21.0 / 8.0, 9.0 / 8.0, -45.0 / 16.0
        a3, a2, a1 = 6.0 * math.sin(t), 0.5, -3.0
        a0 = -(3.0 / 16.0) * math.sin(2.0 * t)
        val = (
            np.cos(2.0 * theta) * (a7 * u**3 + a6 * u)
            + np.sin(2.0 * theta) * (a5 * u**2 + a4)
            + ct * a3
            + a2 * u**3
            + a1 * u
            + a0
        )
    elif which == "If4":
        val = ct * (u**4 - 12.0 * u**2 + 24.0) + st * (4.0 * u**3 - 24.0 * u) - 24.0 * math.cos(t)
    else:  # I2f4
        b8, b7, b6, b5, b4 = 0.25, -21.0 / 4.0, 93.0 / 8.0, 1.5, -45.0 / 4.0
        b3, b2, b1 = -24.0 * math.cos(t), 0.5, -6.0
        b0 = 0.75 * math.cos(t) ** 2 + 93.0 / 8.0
        val = (
            np.cos(2.0 * theta) * (b8 * u**4 + b7 * u**2 + b6)
            + np.sin(2.0 * theta) * (b5 * u**3 + b4 * u)
            + ct * b3
            + (b2 * u**4 + b1 * u**2 + b0)
        )
    out = np.where(theta < t, val, 0.0)
    return float(out[0]) if scalar else out


def _montee_recurrence_theta(m: int, t: float, theta: np.ndarray) -> np.ndarray:
    if m == 1:
        u = t - theta
        val = np.cos(theta) * u + np.sin(theta) - math.sin(t)
        return np.where(theta < t, val, 0.0)
    if m == 2:
        up = np.maximum(t - theta, 0.0)
        return np.cos(theta) * up**2 + 2.0 * np.sin(theta) * up - 2.0 * np.maximum(np.cos(theta) - math.cos(t), 0.0)
    up = np.maximum(t - theta, 0.0)
    return (
        np.cos(theta) * up**m
        + m * np.sin(theta) * up ** (m - 1)
        - m * (m - 1.0) * _montee_recurrence_theta(m - 2, t, theta)
    )


def eval_montee_recurrence(m: int, t: float, x, k: int = 1):
    """Single montee I f_m via the double integration-by-parts recurrence.

    Chains down to the printed base cases I f_1 and I f_2; only k = 1 is
    supported here (higher iterates compose montee_numeric, see
    MonteeIterate).
    """
    if m <= 0:
        raise ValueError("exponent m must be a positive integer")
    if k != 1:
        raise ValueError("the recurrence evaluates a single montee; use MonteeIterate for k > 1")
    _check_support_angle(t)
    scalar = np.isscalar(x)
    theta = np.arccos(np.atleast_1d(clamp_x(x)))
    out = _montee_recurrence_theta(m, t, theta)
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class MonteeIterate:
    """I^k f_m: k-fold montee of a truncated power, supported like its base.

    Closed forms are used when available, the recurrence for any single
    montee, and numeric montee composition beyond that (I^3 f_4 has no
    closed-form expansion here and is realized numerically on top of
    I^2 f_4).
    """

    base: TruncatedPower
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("montee count k must be >= 1")

    @cached_property
    def _evaluator(self):
        m, t, k = self.base.m, self.base.t, self.k
        tag = _KEY_TO_TAG.get((m, k))
        if tag is not None:
            return lambda x: eval_montee_closed_form(tag, t, x)
        if k == 1:
            return lambda x: eval_montee_recurrence(m, t, x)
        # Compose numeric montees on top of the deepest exact iterate.
        from .operators import montee_numeric

        k_exact = max([kk for (mm, kk) in _KEY_TO_TAG if mm == m and kk < k] + [1])
        kernel = MonteeIterate(self.base, k_exact).as_kernel()
        for _ in range(k - k_exact):
            kernel = montee_numeric(kernel, tol=1e-12).as_kernel()
        return kernel

    def as_kernel(self) -> ZonalKernel:
        m, t, k = self.base.m, self.base.t, self.k
        if k == 1:
            derivative = self.base.as_kernel()
        else:
            derivative = MonteeIterate(self.base, k - 1).as_kernel()
        anti = None
        if (m, k + 1) in _KEY_TO_TAG:
            anti = lambda: MonteeIterate(self.base, k + 1).as_kernel()  # noqa: E731
        return ZonalKernel(
            fn=lambda x: np.asarray(self._evaluator(x), dtype=float),
            name=f"I^{k} f_{m}(t={t:g})",
            breakpoints=(math.cos(t), 1.0),
            derivative=derivative,
            antiderivative_fn=anti,
            descriptor={"family": "montee", "m": m, "k": k, "t": t},
        )

    def __call__(self, x):
        return self._evaluator(x)


# ---------------------------------------------------------------------------
# cap self-convolution kernels N_d


@dataclass(frozen=True)
class CapCoeffs:
    """Coefficients of N_d, stored as the printed products and divided by a.

    The products ab, ad, ... are kept exactly as printed so their provenance
    stays auditable; the ratios b, d, ... are derived at construction.
    """

    dim: int
    s: float
    a: float
    products: dict

    def ratio(self, key: str) -> float:
        return self.products[key] / self.a

    @property
    def b(self) -> float:
        return self.ratio("ab")

    @property
    def d(self) -> float:
        return self.ratio("ad")

    @property
    def e(self) -> float:
        return self.ratio("ae")

    @property
    def f(self) -> float:
        return self.ratio("af")

    @property
    def h(self) -> float:
        return self.ratio("ah")


def cap_kernel_coefficients(d: int, s: float) -> CapCoeffs:
    """Coefficient set of N_d for d in {3, 5, 7, 9} and cap angle s in (0, pi/2).

    a = (g *_mu g)(1) with g the cap indicator and mu = (d-1)/2; the returned
    products follow the printed closed forms.
    """
    if d not in (3, 5, 7, 9):
        raise ValueError(f"cap kernels exist for d in {{3, 5, 7, 9}}, got {d}")
    if not (0.0 < s < math.pi / 2.0):
        raise ValueError(f"cap angle must lie in (0, pi/2), got {s}")
    c = math.cos(s)
    sn = math.sin(s)
    if d == 3:
        a = 0.5 * s - 0.25 * math.sin(2.0 * s)
        products = {"ab": -0.25, "ad": 0.25 * (1.0 + math.cos(2.0 * s))}
    elif d == 5:
        a = 0.25 * sn * c**3 - (5.0 / 8.0) * sn * c + (3.0 / 8.0) * s
        products = {
            "ab": -3.0 / 16.0,
            "ad": 0.75 * c**2 - 0.25 * c**4,
            "ae": -0.25 * c**4,
        }
    elif d == 7:
        a = (5.0 / 16.0) * s - (11.0 / 16.0) * sn * c + (13.0 / 24.0) * sn * c**3 - (1.0 / 6.0) * sn * c**5
        products = {
            "ab": -5.0 / 32.0,
            "ad": (15.0 / 16.0) * c**2 - (5.0 / 8.0) * c**4 + (1.0 / 6.0) * c**6,
            "ae": -(5.0 / 8.0) * c**4 + (1.0 / 6.0) * c**6,
            "af": 0.25 * c**6,
        }
    else:
        a = (
            (35.0 / 128.0) * s
            - (93.0 / 128.0) * sn * c
            + (163.0 / 192.0) * sn * c**3
            - (25.0 / 48.0) * sn * c**5
            + 0.125 * sn * c**7
        )
        products = {
            "ab": -35.0 / 256.0,
            "ad": (105.0 * c**2 - 105.0 * c**4 + 56.0 * c**6 - 12.0 * c**8) / 96.0,
            "ae": (-105.0 * c**4 + 56.0 * c**6 - 12.0 * c**8) / 96.0,
            "af": (84.0 * c**6 - 18.0 * c**8) / 96.0,
            "ah": -30.0 * c**8 / 96.0,
        }
    if not a > 0.0:
        raise DegenerateCapError(f"cap normalizer a = {a} is not positive for d={d}, s={s}")
    return CapCoeffs(dim=d, s=s, a=a, products=products)


def _half_angle_tan(x: np.ndarray) -> np.ndarray:
    # sqrt((1-x)/(1+x)) = tan(arccos(x)/2); the tan form avoids cancellation
    # in 1-x near the normalization point x = 1.
    out = np.empty_like(x)
    near_one = x > 0.9
    out[near_one] = np.tan(0.5 * np.arccos(x[near_one]))
    rest = ~near_one
    out[rest] = np.sqrt((1.0 - x[rest]) / (1.0 + x[rest]))
    return out


def eval_cap_kernel(d: int, s: float, x):
    """N_d(x): zero for x <= cos(2s), exactly 1 at x = 1."""
    coeffs = cap_kernel_coefficients(d, s)
    scalar = np.isscalar(x)
    x = np.atleast_1d(clamp_x(x))
    out = np.zeros_like(x)
    edge = math.cos(2.0 * s)
    idx = x > edge
    if np.any(idx):
        xi = x[idx]
        q = _half_angle_tan(xi)
        v = 1.0 + xi
        poly = np.full_like(xi, coeffs.d)
        if d >= 5:
            poly = poly + coeffs.e / v
        if d >= 7:
            poly = poly + coeffs.f / v**2
        if d >= 9:
            poly = poly + coeffs.h / v**3
        out[idx] = 1.0 + coeffs.b * np.arccos(xi) + q * poly
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class CapConvKernel:
    """N_d as a kernel object, d in {3, 5, 7, 9}, support radius 2s."""

    d: int
    s: float

    @cached_property
    def coeffs(self) -> CapCoeffs:
        return cap_kernel_coefficients(self.d, self.s)

    def as_kernel(self) -> ZonalKernel:
        d, s = self.d, self.s
        self.coeffs  # validate range and positivity before returning
        return ZonalKernel(
            fn=lambda x: eval_cap_kernel(d, s, x),
            name=f"N_{d}(s={s:g})",
            breakpoints=(math.cos(2.0 * s), 1.0),
            descriptor={"family": "cap_conv", "d": d, "s": s},
        )

    def __call__(self, x):
        return eval_cap_kernel(self.d, self.s, x)


# ---------------------------------------------------------------------------
# descriptor factory (the JSON schema consumed by the CLI)


def kernel_from_descriptor(desc: dict, params: GegenbauerParams | None = None) -> ZonalKernel:
    """Build a kernel from {"family": ..., ...}.

    Families: truncated_power {m, t}, montee {m, k, t}, cap_conv {d, s},
    series {coeffs, lambda?}.  A series descriptor without "lambda" uses the
    `params` argument.
    """
    if not isinstance(desc, dict) or "family" not in desc:
        raise ValueError("kernel descriptor must be a mapping with a 'family' key")
    family = desc["family"]
    try:
        if family == "truncated_power":
            return TruncatedPower(int(desc["m"]), float(desc["t"])).as_kernel()
        if family == "montee":
            return MonteeIterate(TruncatedPower(int(desc["m"]), float(desc["t"])), int(desc["k"])).as_kernel()
        if family == "cap_conv":
            return CapConvKernel(int(desc["d"]), float(desc["s"])).as_kernel()
        if family == "series":
            lam = desc.get("lambda")
            if lam is None:
                if params is None:
                    raise ValueError("series descriptor needs 'lambda' or explicit params")
                p = params
            else:
                p = GegenbauerParams(float(lam))
            coeffs = np.asarray(desc["coeffs"], dtype=float)
            series = SeriesCoeffs(params=p, coeffs=coeffs, truncation=coeffs.size - 1)
            return ZonalKernel(
                fn=lambda x: np.asarray(series_eval(series, x)),
                name=f"series(lam={p.lam:g}, N={series.truncation})",
                descriptor={"family": "series", "coeffs": coeffs.tolist(), "lambda": p.lam},
            )
    except KeyError as exc:
        raise ValueError(f"descriptor for family {family!r} is missing key {exc}") from exc
    raise ValueError(f"unknown kernel family {family!r}")
