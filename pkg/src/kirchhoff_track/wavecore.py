"""Background medium and the cylindrical special functions used throughout.

Bessel functions of the first kind are evaluated by their power series for
small arguments and by Miller's backward recurrence otherwise; the Hankel
function H0^(1) combines those with a Neumann series for Y0 below
``HANKEL_ASYMPTOTIC_SWITCH`` and the Hankel asymptotic expansion above it.
Everything accepts complex arguments because the lossy background wavenumber
is complex.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, SingularityError

EPS0 = 8.854e-12
MU0 = 4.0e-7 * math.pi
EULER_GAMMA = 0.57721566490153286061

#: |z| bound for :func:`bessel_j` / :func:`bessel_j_orders`.
BESSEL_MAX_ARG = 60.0
#: below this modulus the power series is used, above it Miller's recurrence.
SERIES_SWITCH = 4.0
#: H0 uses the asymptotic expansion for |z| at or above this value.
HANKEL_ASYMPTOTIC_SWITCH = 17.0
LOW_LOSS_RATIO = 10.0

_SERIES_TERMS = 40
_ASYMPTOTIC_TERMS = 30
_MILLER_MARGIN = 40
_HANKEL_MARGIN = 30
_RESCALE_AT = 1e200


@dataclass(frozen=True)
class BackgroundMedium:
    """Homogeneous background characterised at a single frequency.

    ``rel_permittivity`` is in multiples of :data:`EPS0`. Set
    ``conjugate_wavenumber`` to report k_b with a negative imaginary part
    (the sign written in some references) instead of the principal root.
    """

    frequency_hz: float
    rel_permittivity: float
    conductivity_s_per_m: float = 0.0
    permeability_h_per_m: float = MU0
    conjugate_wavenumber: bool = False

    def __post_init__(self):
        vals = (self.frequency_hz, self.rel_permittivity,
                self.conductivity_s_per_m, self.permeability_h_per_m)
        if not all(math.isfinite(v) for v in vals):
            raise ConfigError(f"invalid medium: non-finite field in {vals}")
        if self.frequency_hz <= 0 or self.rel_permittivity <= 0 or self.permeability_h_per_m <= 0:
            raise ConfigError("invalid medium: frequency, permittivity and permeability must be > 0")
        if self.conductivity_s_per_m < 0:
            raise ConfigError("invalid medium: conductivity must be >= 0")
        if not self.low_loss_ok:
            warnings.warn(
                f"background is not low-loss: omega*eps_b/sigma_b = {self.low_loss_ratio:.3g} < {LOW_LOSS_RATIO}",
                stacklevel=2,
            )

    @property
    def omega(self) -> float:
        return 2.0 * math.pi * self.frequency_hz

    @property
    def eps_b(self) -> float:
        return self.rel_permittivity * EPS0

    @property
    def low_loss_ratio(self) -> float:
        if self.conductivity_s_per_m == 0:
            return math.inf
        return self.omega * self.eps_b / self.conductivity_s_per_m

    @property
    def low_loss_ok(self) -> bool:
        return self.low_loss_ratio >= LOW_LOSS_RATIO

    @property
    def k0_squared(self) -> float:
        """Lossless wavenumber squared, omega^2 eps_b mu_b."""
        return self.omega ** 2 * self.eps_b * self.permeability_h_per_m

    @property
    def wavenumber(self) -> "Wavenumber":
        return complex_wavenumber(self)

    @property
    def wavelength(self) -> float:
        return self.wavenumber.wavelength


@dataclass(frozen=True)
class Wavenumber:
    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)) or v.real <= 0:
            raise ConfigError(f"wavenumber must have finite positive real part, got {v}")
        object.__setattr__(self, "value", v)

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi / self.value.real

    def __complex__(self):
        return self.value

    def __abs__(self):
        return abs(self.value)

    def scaled(self, factor: float) -> "Wavenumber":
        return Wavenumber(self.value * factor)


def as_complex(k) -> complex:
    """Accept a :class:`Wavenumber` or any number."""
    return complex(k.value if isinstance(k, Wavenumber) else k)


def complex_wavenumber(medium: BackgroundMedium) -> Wavenumber:
    """Principal root of omega^2 mu_b (eps_b + i sigma_b / omega)."""
    w = medium.omega
    k2 = w * w * medium.permeability_h_per_m * complex(medium.eps_b, medium.conductivity_s_per_m / w)
    k = complex(np.sqrt(k2))
    if medium.conjugate_wavenumber:
        k = k.conjugate()
    return Wavenumber(k)


# ---------------------------------------------------------------- Bessel J_s


def _series_orders(s_max: int, z: np.ndarray) -> np.ndarray:
    out = np.empty((s_max + 1,) + z.shape, dtype=complex)
    q = -0.25 * z * z
    lead = np.ones_like(z)
    half = 0.5 * z
    for s in range(s_max + 1):
        if s:
            lead = lead * half / s
        term = np.ones_like(z)
        acc = np.ones_like(z)
        for m in range(1, _SERIES_TERMS):
            term = term * q / (m * (m + s))
            acc = acc + term
        out[s] = lead * acc
    return out


def _miller_normalise(z, j0_raw, even, odd):
    """Scale factor from exp(-iz) (Im z >= 0) or exp(iz) (Im z < 0) = J0 + 2 sum (-+i)^s J_s.

    ``even`` holds 2 sum (-1)^(s/2) J_s over even s >= 2 and ``odd`` holds
    2 sum (-1)^((s-1)/2) J_s over odd s, both unnormalised.
    """
    upper = z.imag >= 0
    norm = j0_raw + even + np.where(upper, -1j, 1j) * odd
    target = np.exp(np.where(upper, -1j, 1j) * z)
    scale = target / norm
    return j0_raw * scale, scale


def _miller_orders(s_max: int, z: np.ndarray) -> np.ndarray:
    """Orders 0..s_max by backward recurrence (per-element start, rescaled against overflow)."""
    n = z.size
    out = np.zeros((s_max + 1, n), dtype=complex)
    start = np.maximum(s_max, np.ceil(np.abs(z)).astype(int)) + _MILLER_MARGIN
    start += start % 2
    top = int(start.max())
    inv2 = 2.0 / z
    cur = np.zeros(n, dtype=complex)
    nxt = np.zeros(n, dtype=complex)
    even = np.zeros(n, dtype=complex)
    odd = np.zeros(n, dtype=complex)
    for s in range(top, 0, -1):
        seed = start == s
        if seed.any():
            cur[seed] = 1e-30
        if s <= s_max:
            out[s] = cur
        if s % 2 == 0:
            even += (-2.0 if (s // 2) % 2 else 2.0) * cur
        else:
            odd += (2.0 if (s // 2) % 2 == 0 else -2.0) * cur
        nxt = (s * inv2) * cur - nxt
        cur, nxt = nxt, cur
        big = np.abs(cur) > _RESCALE_AT
        if big.any():
            for arr in (cur, nxt, even, odd):
                arr[big] /= _RESCALE_AT
            out[:, big] /= _RESCALE_AT
    out[0] = cur
    _, scale = _miller_normalise(z, cur, even, odd)
    return out * scale


def bessel_j_orders(s_max: int, z) -> np.ndarray:
    """J_0..J_{s_max} at every element of ``z``; result shape ``(s_max+1,) + z.shape``."""
    if s_max < 0:
        raise ConfigError("s_max must be >= 0")
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    flat = z.ravel()
    mag = np.abs(flat)
    if not np.all(np.isfinite(flat)):
        raise DomainError("non-finite Bessel argument")
    if mag.size and mag.max() > BESSEL_MAX_ARG * (1 + 1e-12):
        raise DomainError(f"|z| = {mag.max():.3g} exceeds supported range {BESSEL_MAX_ARG}")
    out = np.empty((s_max + 1, flat.size), dtype=complex)
    small = mag <= SERIES_SWITCH
    if small.any():
        out[:, small] = _series_orders(s_max, flat[small])
    if (~small).any():
        out[:, ~small] = _miller_orders(s_max, flat[~small])
    return out.reshape((s_max + 1,) + shape)


def bessel_j(order: int, z):
    """J_order(z) for integer order (negative orders via J_{-s} = (-1)^s J_s)."""
    order = int(order)
    s = abs(order)
    vals = bessel_j_orders(s, z)[s]
    if order < 0 and s % 2:
        vals = -vals
    return vals[()] if vals.ndim == 0 else vals


# ------------------------------------------------------------ Hankel H0^(1)


def _hankel_small(z: np.ndarray) -> np.ndarray:
    j0 = _series_orders(0, z)[0]
    q = 0.25 * z * z
    term = np.ones_like(z)
    harmonic = 0.0
    acc = np.zeros_like(z)
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * k)
        harmonic += 1.0 / k
        acc = acc + (-1) ** (k + 1) * harmonic * term
    y0 = (2.0 / math.pi) * ((np.log(z / 2.0) + EULER_GAMMA) * j0 + acc)
    return j0 + 1j * y0


def _hankel_mid(z: np.ndarray) -> np.ndarray:
    # Miller recurrence from one common start; J0 and the Neumann sum for Y0
    # are accumulated on the fly. |z| > SERIES_SWITCH keeps the growth finite.
    top = int(np.ceil(np.abs(z).max())) + _HANKEL_MARGIN
    top += top % 2
    inv2 = 2.0 / z
    cur = np.full(z.shape, 1e-30, dtype=complex)
    nxt = np.zeros_like(cur)
    even = np.zeros_like(cur)
    odd = np.zeros_like(cur)
    neumann = np.zeros_like(cur)
    for s in range(top, 0, -1):
        if s % 2 == 0:
            h = s // 2
            sign = -1.0 if h % 2 else 1.0
            even += (2.0 * sign) * cur
            neumann += (sign / h) * cur
        else:
            odd += (2.0 if (s // 2) % 2 == 0 else -2.0) * cur
        nxt = (s * inv2) * cur - nxt
        cur, nxt = nxt, cur
    j0, scale = _miller_normalise(z, cur, even, odd)
    neumann *= scale
    y0 = (2.0 / math.pi) * (np.log(z / 2.0) + EULER_GAMMA) * j0 - (4.0 / math.pi) * neumann
    return j0 + 1j * y0


def _hankel_large(z: np.ndarray) -> np.ndarray:
    acc = np.ones_like(z)
    a = 1.0
    inv = 1j / z
    pw = np.ones_like(z)
    for k in range(1, _ASYMPTOTIC_TERMS):
        a *= -((2 * k - 1) ** 2) / (8.0 * k)
        pw = pw * inv
        acc = acc + a * pw
    return np.sqrt(2.0 / (math.pi * z)) * np.exp(1j * (z - math.pi / 4)) * acc


def hankel1_0(z):
    """H0^(1)(z) = J0(z) + i Y0(z). Raises :class:`SingularityError` at z = 0."""
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    mag = np.abs(flat)
    if np.any(mag == 0):
        raise SingularityError("H0^(1) is singular at z = 0")
    if not np.all(np.isfinite(flat)):
        raise DomainError("non-finite Hankel argument")
    out = np.empty_like(flat)
    small = mag <= SERIES_SWITCH
    large = mag >= HANKEL_ASYMPTOTIC_SWITCH
    mid = ~(small | large)
    if small.any():
        out[small] = _hankel_small(flat[small])
    if mid.any():
        out[mid] = _hankel_mid(flat[mid])
    if large.any():
        out[large] = _hankel_large(flat[large])
    out = out.reshape(z.shape)
    return out[()] if out.ndim == 0 else out


def hankel_farfield(k, radius_m: float, theta_n, r_prime):
    """Far-field form of H0^(1)(k|a_n - r'|) for an antenna at radius_m * theta_n.

    ``theta_n`` is a unit vector (or array of them, last axis 2); ``r_prime``
    broadcasts against it. Returns (1-i) e^{ikR} / sqrt(k pi R) e^{-ik theta_n.r'}.
    """
    kv = as_complex(k)
    if not radius_m > 0:
        raise ConfigError("antenna radius must be > 0")
    if abs(kv) * radius_m < 0.25:
        raise DomainError(f"|k|R = {abs(kv) * radius_m:.3g} < 0.25, far-field form not valid")
    theta_n = np.asarray(theta_n, dtype=float)
    r_prime = np.asarray(r_prime, dtype=float)
    proj = (theta_n * r_prime).sum(axis=-1)
    amp = (1 - 1j) * np.exp(1j * kv * radius_m) / np.sqrt(kv * math.pi * radius_m)
    out = amp * np.exp(-1j * kv * proj)
    return out[()] if np.ndim(out) == 0 else out
