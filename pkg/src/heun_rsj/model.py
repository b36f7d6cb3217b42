"""Parameter records tying the driven junction to its polynomial reduction.

The overdamped junction phase obeys ``phi' + sin(phi) = B + A*cos(omega*t)``.
Writing ``z = exp(i*omega*t)`` and peeling off an exponential prefactor turns
the problem into a second order equation of double confluent Heun type whose
polynomial solutions are governed by the triplet

    n      = -(B/omega + 1)        (candidate polynomial degree)
    mu     = A / (2*omega)         (drive strength in the rotated frame)
    lambda = 1/(4*omega**2) - mu**2

The maps below convert between the physical record ``(A, B, omega)`` and the
reduced record ``(n, mu, lambda)``.  They are exact inverses of each other on
their shared domain and always satisfy ``4*omega**2*(lambda + mu**2) = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidParams,
    NonIntegralDegree,
    NonPositiveDiscriminant,
)

__all__ = [
    "RsjParams",
    "DcheParams",
    "DcheCandidate",
    "HeunPolynomial",
    "Trajectory",
    "params_to_dche",
    "dche_to_params",
]


@dataclass(frozen=True)
class RsjParams:
    """Harmonic bias ``q(t) = B + A*cos(omega*t)`` for the phase equation.

    The constant and first-harmonic amplitudes are unconstrained apart from
    ``A != 0``; ``omega != 0`` so the drive period is finite.
    """

    A: float
    B: float
    omega: float

    def __post_init__(self):
        for name in ("A", "B", "omega"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidParams(f"{name} must be a finite real, got {value!r}")
        if self.A == 0:
            raise InvalidParams("bias amplitude A must be nonzero")
        if self.omega == 0:
            raise InvalidParams("drive frequency omega must be nonzero")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / abs(self.omega)


@dataclass(frozen=True)
class DcheParams:
    """Reduced triplet ``(n, mu, lambda)`` of the polynomial-form equation.

    ``n`` is the candidate polynomial degree and must be a non-negative
    integer.  ``mu = 0`` is admitted so the drive-free degenerate spectrum can
    be studied; the map back to physical parameters then has no valid image
    (it would need bias amplitude ``A = 0``).
    """

    n: int
    mu: float
    lam: float

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise InvalidParams(f"degree n must be an int, got {self.n!r}")
        if self.n < 0:
            raise InvalidParams(f"degree n must be >= 0, got {self.n}")
        for name in ("mu", "lam"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidParams(f"{name} must be a finite real, got {value!r}")


@dataclass(frozen=True)
class DcheCandidate:
    """Result of mapping physical parameters toward a reduced triplet.

    ``n_real`` is the un-rounded degree ``-(B/omega + 1)``.  The candidate is
    ``integral`` when ``n_real`` sits within ``tol_int`` of a non-negative
    integer; only then does :meth:`params` produce a usable triplet.
    """

    n_real: float
    mu: float
    lam: float
    integral: bool

    def params(self) -> DcheParams:
        if not self.integral:
            raise NonIntegralDegree(
                f"reduced degree {self.n_real!r} is not a non-negative integer"
            )
        return DcheParams(n=round(self.n_real), mu=self.mu, lam=self.lam)


def params_to_dche(p: RsjParams, tol_int: float = 1e-9) -> DcheCandidate:
    """Map ``(A, B, omega)`` to the reduced triplet, flagging integral degree.

    Never raises on a non-integral degree: the caller inspects the flag.
    """
    n_real = -(p.B / p.omega + 1.0)
    mu = p.A / (2.0 * p.omega)
    lam = 1.0 / (4.0 * p.omega**2) - mu**2
    integral = abs(n_real - round(n_real)) <= tol_int and round(n_real) >= 0
    return DcheCandidate(n_real=n_real, mu=mu, lam=lam, integral=integral)


def dche_to_params(d: DcheParams) -> RsjParams:
    """Invert the reduction, picking the canonical ``omega > 0`` branch.

    Requires ``lambda + mu**2 > 0`` (real drive frequency) and ``mu != 0``
    (nonzero bias amplitude).
    """
    disc = d.lam + d.mu**2
    if disc <= 0:
        raise NonPositiveDiscriminant(
            f"lambda + mu**2 = {disc!r} <= 0: no real drive frequency exists"
        )
    omega = 1.0 / (2.0 * math.sqrt(disc))
    return RsjParams(A=2.0 * d.mu * omega, B=-(d.n + 1.0) * omega, omega=omega)


@dataclass(frozen=True)
class HeunPolynomial:
    """Polynomial ``P(z) = sum a_k z^k`` attached to its reduced triplet.

    ``coeffs`` is ascending, length ``n + 1``, with ``a_n != 0`` so the degree
    is exact.  Construction from the determinant gate normalises ``a_n = 1``;
    derived objects (e.g. the reflected polynomial) may carry another leading
    coefficient.
    """

    n: int
    coeffs: tuple[float, ...]
    params: DcheParams

    def __post_init__(self):
        if self.n != self.params.n:
            raise InvalidParams(
                f"degree field {self.n} disagrees with params.n = {self.params.n}"
            )
        if len(self.coeffs) != self.n + 1:
            raise InvalidParams(
                f"need {self.n + 1} coefficients for degree {self.n}, "
                f"got {len(self.coeffs)}"
            )
        if not all(math.isfinite(c) for c in self.coeffs):
            raise InvalidParams("coefficients must all be finite")
        if self.coeffs[-1] == 0:
            raise InvalidParams("leading coefficient must be nonzero")

    def value(self, z):
        """Evaluate P(z); scalar or array, real or complex."""
        return np.polynomial.polynomial.polyval(z, np.asarray(self.coeffs))

    def deriv1(self, z):
        """Evaluate P'(z) exactly from the coefficients."""
        c = np.polynomial.polynomial.polyder(np.asarray(self.coeffs))
        return np.polynomial.polynomial.polyval(z, c)

    def deriv2(self, z):
        """Evaluate P''(z) exactly from the coefficients."""
        c = np.polynomial.polynomial.polyder(np.asarray(self.coeffs), 2)
        return np.polynomial.polynomial.polyval(z, c)

    def norm_l1(self) -> float:
        """Coefficient l1 norm; bounds |P| on the closed unit disc."""
        return float(sum(abs(c) for c in self.coeffs))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution: ``values[i]`` is the state at ``times[i]``.

    ``values`` has one column for a phase trajectory and two columns (x, y)
    for the companion system.
    """

    times: np.ndarray
    values: np.ndarray
    kind: str = field(default="phase")

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if times.ndim != 1 or len(times) < 1:
            raise InvalidParams("times must be a non-empty 1-d array")
        if np.any(np.diff(times) <= 0):
            raise InvalidParams("times must be strictly increasing")
        if values.shape[0] != times.shape[0]:
            raise InvalidParams(
                f"values rows {values.shape[0]} != samples {times.shape[0]}"
            )
        if values.shape[1] not in (1, 2):
            raise InvalidParams(f"values must have 1 or 2 columns, got {values.shape[1]}")
        if self.kind not in ("phase", "xy"):
            raise InvalidParams(f"kind must be 'phase' or 'xy', got {self.kind!r}")
        if not np.all(np.isfinite(times)) or not np.all(np.isfinite(values)):
            raise InvalidParams("trajectory samples must be finite")

    def __len__(self) -> int:
        return len(self.times)
