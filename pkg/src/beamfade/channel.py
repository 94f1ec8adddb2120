"""Geometry of a wandering Gaussian beam clipped by a circular aperture.

A Gaussian beam of spot radius W, displaced by r from the aperture center,
loses the power that falls outside the receiving aperture of radius a.  All
lengths here (offset r, spot radius w = W/a, Weibull scale, beam-center
standard deviation) are expressed in units of the aperture radius, so the
single geometry knob is the ratio a/W together with the beam-center position
variance sigma_b^2.

Conventions: T denotes the (amplitude) transmission coefficient and
eta = T^2 the intensity transmittance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad
from scipy.special import i0e, i1e

# Absolute tolerance demanded of the clipping integral; downstream moment
# integrals need >= 6 significant digits.
QUAD_ABS_TOL = 1e-10

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved tolerance {achieved:.3e})")
        self.achieved = achieved


@dataclass(frozen=True)
class BeamGeometry:
    """Channel configuration: aperture-to-beam-size ratio and wandering strength.

    Attributes
    ----------
    a_over_W : float
        Ratio of the aperture radius to the beam-spot radius, > 0.
    sigma_b2 : float
        Beam-center position variance, in aperture-radius^2 units, >= 0.
    """

    a_over_W: float
    sigma_b2: float

    def __post_init__(self):
        if not (math.isfinite(self.a_over_W) and self.a_over_W > 0):
            raise ValueError(f"a_over_W must be finite and > 0, got {self.a_over_W}")
        if not (math.isfinite(self.sigma_b2) and self.sigma_b2 >= 0):
            raise ValueError(f"sigma_b2 must be finite and >= 0, got {self.sigma_b2}")


@dataclass(frozen=True)
class WeibullParams:
    """Parameters of the log-negative Weibull law for the transmission coefficient.

    T follows T(r) = t0 * exp(-(1/2) * (r/scale)**lam) for a beam-center
    offset r, where t0 is the maximum transmission coefficient, lam the shape
    and scale the scale parameter (aperture-radius units).
    """

    t0: float
    lam: float
    scale: float

    def __post_init__(self):
        if not (0 < self.t0 <= 1):
            raise ValueError(f"t0 must lie in (0, 1], got {self.t0}")
        if self.lam <= 0 or self.scale <= 0:
            raise ValueError(f"lam and scale must be > 0, got {self.lam}, {self.scale}")


def max_transmission_coefficient(a_over_W: float) -> float:
    """Transmission coefficient of a perfectly centered beam.

    Parameters
    ----------
    a_over_W : float
        Aperture-to-beam-size ratio, > 0.

    Returns
    -------
    float
        t0 = sqrt(1 - exp(-2 (a/W)^2)), in (0, 1).
    """
    if not (math.isfinite(a_over_W) and a_over_W > 0):
        raise ValueError(f"a_over_W must be finite and > 0, got {a_over_W}")
    return math.sqrt(-math.expm1(-2.0 * a_over_W**2))


def _clip_integrand(rho, r, w):
    # exp(-2 r^2/w^2) * I0(4 r rho / w^2) computed as a jointly scaled
    # product: the exponent collapses to -2 (r - rho)^2 / w^2, which never
    # overflows, and i0e supplies the exponentially scaled Bessel factor.
    pref = 4.0 / w**2
    return pref * rho * np.exp(-2.0 * (r - rho) ** 2 / w**2) * i0e(4.0 * r * rho / w**2)


def exact_eta_at_offset(r: float, a_over_W: float) -> float:
    """Intensity transmittance of a displaced Gaussian beam, by adaptive quadrature.

    Power fraction of a beam of spot radius w = W/a, displaced by r
    (aperture-radius units), passing the unit-radius aperture:

        eta(r) = (4/w^2) exp(-2 r^2/w^2)
                 * integral_0^1 rho exp(-2 rho^2/w^2) I0(4 r rho / w^2) drho

    Parameters
    ----------
    r : float
        Beam-center offset, >= 0.
    a_over_W : float
        Aperture-to-beam-size ratio, > 0.

    Returns
    -------
    float
        eta in [0, 1 - exp(-2 (a/W)^2)].

    Raises
    ------
    QuadratureError
        If the integrator cannot certify absolute error <= 1e-10.
    """
    if not (math.isfinite(r) and r >= 0):
        raise ValueError(f"offset r must be finite and >= 0, got {r}")
    if not (math.isfinite(a_over_W) and a_over_W > 0):
        raise ValueError(f"a_over_W must be finite and > 0, got {a_over_W}")
    w = 1.0 / a_over_W
    points = [r] if 0.0 < r < 1.0 else None
    val, err = quad(_clip_integrand, 0.0, 1.0, args=(r, w),
                    epsabs=1e-12, epsrel=1e-12, limit=200, points=points)
    if err > QUAD_ABS_TOL:
        raise QuadratureError("transmittance integral did not converge", achieved=err)
    return float(min(max(val, 0.0), 1.0))


def _eta_exact_many(r: np.ndarray, a_over_W: float, nodes: int | None = None) -> np.ndarray:
    """Vectorized fixed-order Gauss-Legendre version of `exact_eta_at_offset`.

    Used where the exact model must be evaluated at many offsets (sampling,
    moment integrals); agrees with the adaptive quadrature to ~1e-12.
    """
    w = 1.0 / a_over_W
    if nodes is None:
        # integrand width ~ w/2 on [0, 1]; keep >= ~25 nodes per width
        nodes = max(201, int(100 * a_over_W))
    if nodes not in _GL_CACHE:
        x, wt = leggauss(nodes)
        _GL_CACHE[nodes] = (0.5 * (x + 1.0), 0.5 * wt)
    rho, wts = _GL_CACHE[nodes]

    r = np.asarray(r, dtype=float)
    out = np.empty(r.shape, dtype=float)
    flat_r = r.reshape(-1)
    flat_out = out.reshape(-1)
    chunk = 16384
    for lo in range(0, flat_r.size, chunk):
        rr = flat_r[lo:lo + chunk, None]
        flat_out[lo:lo + chunk] = _clip_integrand(rho, rr, w) @ wts
    return np.clip(out, 0.0, 1.0)


def _deta_dr(r: float, a_over_W: float) -> float:
    """d eta / dr of the exact clipping integral (Bessel identity I0' = I1)."""
    w = 1.0 / a_over_W

    def integrand(rho):
        z = 4.0 * r * rho / w**2
        scale = np.exp(-2.0 * (r - rho) ** 2 / w**2)
        return (16.0 / w**4) * rho * scale * (rho * i1e(z) - r * i0e(z))

    points = [r] if 0.0 < r < 1.0 else None
    val, err = quad(integrand, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12,
                    limit=200, points=points)
    if err > QUAD_ABS_TOL:
        raise QuadratureError("transmittance derivative did not converge", achieved=err)
    return float(val)


def weibull_params(a_over_W: float) -> WeibullParams:
    """Fit the Weibull-form approximation to the exact clipping integral.

    The approximation eta(r) ~ t0^2 exp(-(r/scale)**lam) is pinned to the
    exact transmittance by matching the value and the logarithmic derivative
    at r = 1 (beam center on the aperture rim):

        G = ln(t0^2 / eta_exact(1)),  D = -(d ln eta_exact / dr)|_{r=1},
        lam = D / G,  scale = G**(-1/lam).
    """
    t0 = max_transmission_coefficient(a_over_W)
    eta1 = exact_eta_at_offset(1.0, a_over_W)
    g = math.log(t0**2 / eta1)
    d = -_deta_dr(1.0, a_over_W) / eta1
    if g <= 0 or d <= 0:
        raise QuadratureError(
            f"degenerate matching conditions G={g:.3e}, D={d:.3e}", achieved=math.nan)
    lam = d / g
    return WeibullParams(t0=t0, lam=lam, scale=g ** (-1.0 / lam))


def eta_approx(r, params: WeibullParams):
    """Weibull-form transmittance t0^2 * exp(-(r/scale)**lam) at offset r."""
    r = np.asarray(r, dtype=float)
    out = params.t0**2 * np.exp(-((r / params.scale) ** params.lam))
    return out if out.ndim else float(out)


def _offset_of_transmission(t, params: WeibullParams):
    """Inverse of T(r) = t0 exp(-(1/2)(r/scale)**lam) on (0, t0)."""
    return params.scale * (2.0 * np.log(params.t0 / t)) ** (1.0 / params.lam)


def pdt_density(t, params: WeibullParams, sigma_b2: float):
    """Probability density of the transmission coefficient T.

    Built by change of variables from the Rayleigh-distributed beam-center
    offset r (density r/sigma_b2 * exp(-r^2 / (2 sigma_b2))) through the
    strictly decreasing map T(r) = t0 exp(-(1/2)(r/scale)**lam):

        p(T) = f(r(T)) * |dr/dT|,  r(T) = scale * (2 ln(t0/T))**(1/lam)

    Zero outside the support (0, t0).

    Parameters
    ----------
    t : float or array_like
        Transmission coefficient value(s).
    params : WeibullParams
    sigma_b2 : float
        Beam-center position variance, > 0.

    Returns
    -------
    float or ndarray
        Density per unit T, >= 0.
    """
    if sigma_b2 <= 0:
        raise ValueError(f"sigma_b2 must be > 0, got {sigma_b2}")
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.zeros_like(t)
    inside = (t > 0.0) & (t < params.t0)
    if np.any(inside):
        ti = t[inside]
        u = 2.0 * np.log(params.t0 / ti)
        r = params.scale * u ** (1.0 / params.lam)
        rayleigh = (r / sigma_b2) * np.exp(-(r**2) / (2.0 * sigma_b2))
        # |dr/dT| from the inverse map; diverges integrably at T -> t0 for lam > 1
        with np.errstate(divide="ignore", over="ignore"):
            jac = (2.0 * params.scale / (params.lam * ti)) * u ** (1.0 / params.lam - 1.0)
        out[inside] = rayleigh * jac
    return float(out[0]) if scalar else out


def pdt_cdf(t, params: WeibullParams, sigma_b2: float):
    """Cumulative distribution of T under the same change of variables.

    P(T <= t) = P(r >= r(t)) = exp(-r(t)^2 / (2 sigma_b2)); closed form, so
    it serves as an independent check on `pdt_density` and as the model side
    of distribution fitting.
    """
    if sigma_b2 <= 0:
        raise ValueError(f"sigma_b2 must be > 0, got {sigma_b2}")
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.where(t >= params.t0, 1.0, 0.0)
    inside = (t > 0.0) & (t < params.t0)
    if np.any(inside):
        r = _offset_of_transmission(t[inside], params)
        out[inside] = np.exp(-(r**2) / (2.0 * sigma_b2))
    return float(out[0]) if scalar else out


def sample_transmittance(geometry: BeamGeometry, seed: int, n: int,
                         model: str = "approx") -> np.ndarray:
    """Monte-Carlo sample of intensity transmittances eta.

    Draws the beam-center coordinates x, y independently from a zero-mean
    normal with variance sigma_b2, sets r = sqrt(x^2 + y^2) and maps each
    offset through the Weibull approximation (default) or the exact clipping
    integral.  Identical seed and parameters give an identical sequence.

    Parameters
    ----------
    geometry : BeamGeometry
    seed : int
        Seed for the pseudo-random generator.
    n : int
        Number of samples, >= 1.
    model : {"approx", "exact"}

    Returns
    -------
    ndarray
        n intensity transmittance values in [0, 1].
    """
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    if model not in ("approx", "exact"):
        raise ValueError(f"model must be 'approx' or 'exact', got {model!r}")
    rng = np.random.default_rng(seed)
    sigma = math.sqrt(geometry.sigma_b2)
    x = rng.normal(0.0, sigma, size=n)
    y = rng.normal(0.0, sigma, size=n)
    r = np.hypot(x, y)
    if model == "approx":
        return eta_approx(r, weibull_params(geometry.a_over_W))
    return _eta_exact_many(r, geometry.a_over_W)
