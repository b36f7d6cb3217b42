"""Structure theory of the polynomial solutions.

Every polynomial solution P of degree n enjoys a reflection symmetry

    P'(z) - mu*P(z) = eps * c * z**n * P(1/z),      eps**2 = 1,

with ``c = sqrt(lambda + mu**2)`` the positive inverse of twice the drive
frequency.  The symmetry fixes the phase trajectory in closed form,

    exp(-i*phi(t)) = i*eps * z**(n+1) * P(1/z) / P(z),   z = exp(i*omega*t),

pairs P with a second, non-polynomial solution through a quadrature with an
exact Wronskian, and yields a finite-interval-free orthogonality relation on
(0, inf) between solutions of different degree sharing the same mu.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

from .errors import (
    InvalidParams,
    MuNotPositive,
    NonPositiveArgument,
    NonPositiveDiscriminant,
    NotUnimodular,
    PolynomialZeroOnPath,
    QuadratureFailure,
    ZeroAtOne,
    ZeroOnUnitCircle,
)
from .heun_poly import SAMPLE_POINTS
from .model import DcheParams, HeunPolynomial, dche_to_params

__all__ = [
    "reflected_polynomial",
    "symmetry_sign",
    "symmetry_residual",
    "coeff_relations_residual",
    "second_solution",
    "second_solution_jet",
    "phase_from_poly",
    "phase_series",
    "orthogonality_weight",
    "weight_divergence_residual",
    "orthogonality_integral",
    "norm_integral",
]


def _c_scale(d: DcheParams) -> float:
    disc = d.lam + d.mu**2
    if disc <= 0:
        raise NonPositiveDiscriminant(
            f"lambda + mu**2 = {disc!r} <= 0: no real frequency scale"
        )
    return math.sqrt(disc)


def reflected_polynomial(P: HeunPolynomial) -> HeunPolynomial:
    """The reflection image z**n * [P'(1/z) - mu*P(1/z)] as a polynomial.

    Coefficient shuffle ``a_k -> (n+1-k)*a_{n+1-k} - mu*a_{n-k}`` (with
    ``a_{n+1} = 0``).  Solves the same equation exactly when P does; at a
    spectral point it is proportional to P itself.
    """
    n, mu = P.n, P.params.mu
    a = P.coeffs
    c = [0.0] * (n + 1)
    for m in range(n + 1):
        val = -mu * a[n - m]
        if m >= 1:
            val += (n + 1.0 - m) * a[n + 1 - m]
        c[m] = val
    if c[n] == 0:
        raise InvalidParams("reflection dropped the degree (leading coefficient 0)")
    return HeunPolynomial(n=n, coeffs=tuple(c), params=P.params)


def symmetry_sign(P: HeunPolynomial, strict: bool = True) -> int:
    """Sign eps read off the reflection relation at z = 1.

    ``strict`` additionally certifies that the ratio is +-1 to 1e-8, which
    holds only for genuine solutions.
    """
    c = _c_scale(P.params)
    p1 = float(P.value(1.0))
    if abs(p1) <= 1e-12 * P.norm_l1():
        raise ZeroAtOne("P(1) is numerically zero; sign undefined there")
    ratio = (float(P.deriv1(1.0)) - P.params.mu * p1) / (c * p1)
    if ratio == 0.0:
        raise NotUnimodular("reflection ratio vanished at z = 1")
    if strict and abs(abs(ratio) - 1.0) > 1e-8:
        raise NotUnimodular(
            f"reflection ratio {ratio!r} at z = 1 is not +-1: not a solution"
        )
    return 1 if ratio > 0 else -1


def symmetry_residual(P: HeunPolynomial) -> float:
    """Worst relative defect of the reflection relation over the sample set.

    Each point contributes ``|P'(z) - mu*P(z) - eps*c*z**n*P(1/z)|`` divided
    by the largest of its three summand magnitudes.  The sign is read off
    non-strictly so near-solutions report a large residual instead of
    raising.
    """
    eps = symmetry_sign(P, strict=False)
    c = _c_scale(P.params)
    n, mu = P.n, P.params.mu
    worst = 0.0
    for z in SAMPLE_POINTS:
        t1 = complex(P.deriv1(z))
        t2 = -mu * complex(P.value(z))
        t3 = -eps * c * z**n * complex(P.value(1.0 / z))
        scale = max(abs(t1), abs(t2), abs(t3))
        if scale == 0.0:
            continue
        worst = max(worst, abs(t1 + t2 + t3) / scale)
    return worst


def coeff_relations_residual(P: HeunPolynomial) -> np.ndarray:
    """Residuals of the coefficient form of the reflection relation.

    Entry k is ``eps*c*a_k - (n+1-k)*a_{n+1-k} + mu*a_{n-k}`` for k = 0..n
    (the k = 0 entry degenerates to ``eps*c*a_0 + mu*a_n``).
    """
    eps = symmetry_sign(P, strict=False)
    c = _c_scale(P.params)
    n, mu = P.n, P.params.mu
    a = P.coeffs
    out = np.empty(n + 1)
    for k in range(n + 1):
        val = eps * c * a[k] + mu * a[n - k]
        if k >= 1:
            val -= (n + 1.0 - k) * a[n + 1 - k]
        out[k] = val
    return out


def _check_path_clear(P: HeunPolynomial, base: complex, z: complex) -> None:
    roots = np.roots(np.asarray(P.coeffs)[::-1]) if P.n >= 1 else np.empty(0)
    seg = z - base
    seg_len2 = abs(seg) ** 2
    for r in roots:
        if seg_len2 == 0.0:
            dist = abs(r - base)
        else:
            s = np.clip(((r - base) * np.conj(seg)).real / seg_len2, 0.0, 1.0)
            dist = abs(base + s * seg - r)
        if dist < 1e-8 * (1.0 + abs(r)):
            raise PolynomialZeroOnPath(
                f"zero of P at {complex(r):.6g} lies on the integration path"
            )


def _quad_complex(f, a: float, b: float) -> complex:
    parts = []
    for pick in (lambda w: w.real, lambda w: w.imag):
        res = quad(
            lambda s: pick(f(s)), a, b, epsabs=1e-10, epsrel=1e-10,
            limit=400, full_output=1,
        )
        if len(res) > 3:
            raise QuadratureFailure(f"quadrature did not converge: {res[3]}")
        parts.append(res[0])
    return complex(parts[0], parts[1])


def second_solution_jet(
    P: HeunPolynomial, z: complex, base: float = 1.0
) -> tuple[complex, complex, complex]:
    """Value and first two derivatives of the accompanying second solution.

    ``Q(z) = P(z) * integral_base^z s**n * exp(mu*(s + 1/s)) / P(s)**2 ds``
    along the straight path from base.  Q solves the same equation as P when
    P is a genuine solution, and satisfies the exact Wronskian
    ``P*Q' - P'*Q = z**n * exp(mu*(z + 1/z))`` for any P.
    """
    if not (isinstance(base, (int, float)) and base > 0):
        raise NonPositiveArgument(f"base must be a positive real, got {base!r}")
    zc = complex(z)
    if zc == 0:
        raise NonPositiveArgument("z = 0 is an essential singularity")
    n, mu = P.n, P.params.mu
    _check_path_clear(P, complex(base), zc)

    def integrand(s: float) -> complex:
        w = complex(base) + s * (zc - complex(base))
        return w**n * np.exp(mu * (w + 1.0 / w)) / complex(P.value(w)) ** 2 * (
            zc - complex(base)
        )

    integral = _quad_complex(integrand, 0.0, 1.0)
    pv = complex(P.value(zc))
    d1 = complex(P.deriv1(zc))
    d2 = complex(P.deriv2(zc))
    kernel = zc**n * np.exp(mu * (zc + 1.0 / zc))
    q = pv * integral
    dq = d1 * integral + kernel / pv
    d2q = d2 * integral + kernel / (zc * pv) * (n + mu * (zc - 1.0 / zc))
    return q, dq, d2q


def second_solution(P: HeunPolynomial, z: complex, base: float = 1.0) -> complex:
    """Value of the second solution; see :func:`second_solution_jet`."""
    return second_solution_jet(P, z, base)[0]


def _unit_circle_clear(P: HeunPolynomial) -> None:
    angles = np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False)
    vals = np.abs(P.value(np.exp(1j * angles)))
    if float(vals.min()) < 1e-10 * P.norm_l1():
        raise ZeroOnUnitCircle(
            "P has a (numerical) zero on |z| = 1; the phase formula degenerates"
        )


def _phase_on_grid(P: HeunPolynomial, times: np.ndarray) -> np.ndarray:
    p = dche_to_params(P.params)
    eps = symmetry_sign(P)
    z = np.exp(1j * p.omega * times)
    w = 1j * eps * z ** (P.n + 1) * P.value(1.0 / z) / P.value(z)
    if float(np.max(np.abs(np.abs(w) - 1.0))) > 1e-12:
        raise NotUnimodular("phase factor drifted off the unit circle")
    return -np.unwrap(np.angle(w))


def phase_series(P: HeunPolynomial, times) -> np.ndarray:
    """Closed-form phase at the given increasing times, branch-continuous.

    Internally refines the grid so that no step advances the phase by more
    than a small fraction of pi before unwrapping.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) < 1:
        raise InvalidParams("times must be a non-empty 1-d array")
    if np.any(np.diff(times) <= 0):
        raise InvalidParams("times must be strictly increasing")
    _unit_circle_clear(P)
    p = dche_to_params(P.params)
    max_step = p.period / (64.0 * (P.n + 2))
    factor = 1
    if len(times) > 1:
        widest = float(np.max(np.diff(times)))
        factor = max(1, math.ceil(widest / max_step))
    if factor == 1:
        grid = times
        idx = np.arange(len(times))
    else:
        pieces = [times[:1]]
        for i in range(len(times) - 1):
            pieces.append(np.linspace(times[i], times[i + 1], factor + 1)[1:])
        grid = np.concatenate(pieces)
        idx = np.arange(0, len(grid), factor)
    phi = _phase_on_grid(P, grid)
    return phi[idx]


def phase_from_poly(P: HeunPolynomial, t: float) -> float:
    """Closed-form phase at time t, unwrapped continuously from t = 0.

    At t = 0 the phase is the principal value -arg(i*eps) = -eps*pi/2.
    """
    _unit_circle_clear(P)
    p = dche_to_params(P.params)
    if t == 0.0:
        return float(_phase_on_grid(P, np.array([0.0]))[0])
    steps = max(2, math.ceil(abs(t) / p.period * 64.0 * (P.n + 2)))
    grid = np.linspace(0.0, float(t), steps + 1)
    if t < 0:  # unwrap still walks the samples in order
        phi = _phase_on_grid(P, grid[::-1])[::-1]
    else:
        phi = _phase_on_grid(P, grid)
    return float(phi[-1])


def _shared_mu(P1: HeunPolynomial, P2: HeunPolynomial) -> float:
    if P1.params.mu != P2.params.mu:
        raise InvalidParams(
            f"polynomials carry different mu: {P1.params.mu} vs {P2.params.mu}"
        )
    return P1.params.mu


def orthogonality_weight(z, P1: HeunPolynomial, P2: HeunPolynomial):
    """Weight pairing solutions of degrees n1, n2 at shared mu, for z > 0.

    ``z**(-(n1+n2)/2) * exp(-mu*(z+1/z)) * [(lam1 - lam2
    - (n1-n2)*(n1+n2+2)/4)/z**2 + mu*(n1-n2)*(1 + 1/z**2)/(2*z)]``.
    Vanishes identically when both triplets coincide.
    """
    mu = _shared_mu(P1, P2)
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise NonPositiveArgument("the weight is defined for z > 0")
    n1, n2 = P1.n, P2.n
    lam1, lam2 = P1.params.lam, P2.params.lam
    bracket = (lam1 - lam2 - 0.25 * (n1 - n2) * (n1 + n2 + 2.0)) / z**2
    bracket = bracket + 0.5 * mu * (n1 - n2) * (1.0 + 1.0 / z**2) / z
    return z ** (-(n1 + n2) / 2.0) * np.exp(-mu * (z + 1.0 / z)) * bracket


def weight_divergence_residual(
    z: float, P1: HeunPolynomial, P2: HeunPolynomial
) -> tuple[float, float]:
    """Pointwise defect of the divergence identity behind the orthogonality.

    Returns ``(residual, scale)`` where residual = d/dz[boundary term]
    + weight * P1 * P2, evaluated with exact derivatives, and scale is the
    larger of the two summand magnitudes.  Zero (to roundoff) when both
    polynomials are genuine solutions.
    """
    mu = _shared_mu(P1, P2)
    if z <= 0:
        raise NonPositiveArgument("the identity is checked on z > 0")
    n1, n2 = P1.n, P2.n
    pw = -(n1 + n2) / 2.0
    v1, v2 = float(P1.value(z)), float(P2.value(z))
    d1, d2 = float(P1.deriv1(z)), float(P2.deriv1(z))
    dd1, dd2 = float(P1.deriv2(z)), float(P2.deriv2(z))
    s = v2 * d1 - v1 * d2 - 0.5 * (n1 - n2) * v1 * v2 / z
    ds = (
        v2 * dd1
        - v1 * dd2
        - 0.5 * (n1 - n2) * ((d1 * v2 + v1 * d2) / z - v1 * v2 / z**2)
    )
    front = z**pw * math.exp(-mu * (z + 1.0 / z))
    dw = front * ((pw / z - mu * (1.0 - 1.0 / z**2)) * s + ds)
    pair = float(orthogonality_weight(z, P1, P2)) * v1 * v2
    return dw + pair, max(abs(dw), abs(pair))


def _decay_halfwidth(mu: float, growth: float) -> float:
    u = 4.0
    while 2.0 * mu * (math.cosh(u) - 1.0) < 46.0 + growth * u:
        u += 0.5
        if u > 700.0:
            raise QuadratureFailure("could not find a decaying truncation point")
    return u


def _quad_real(f, a: float, b: float, noise_floor: float = 0.0) -> float:
    """Adaptive quadrature that tolerates pure-roundoff non-convergence.

    When the true integral is zero up to cancellation (the orthogonality
    case), the integrator cannot meet a relative target and flags roundoff;
    the value is still good to its reported absolute error, so a warning is
    accepted whenever that error is below ``1e-9 * max(noise_floor, 1)``.
    """
    res = quad(f, a, b, epsabs=1e-10, epsrel=1e-10, limit=400, full_output=1)
    if len(res) > 3 and res[1] > 1e-9 * max(noise_floor, 1.0):
        raise QuadratureFailure(f"quadrature did not converge: {res[3]}")
    return float(res[0])


def orthogonality_integral(
    P1: HeunPolynomial, P2: HeunPolynomial
) -> tuple[float, float]:
    """Weighted pairing integral over (0, inf) and its absolute-value scale.

    Substituting ``z = exp(u)`` turns the measure into a doubly exponentially
    decaying one (``exp(-2*mu*cosh(u))``), integrated adaptively on a
    truncated symmetric interval.  For different degrees and mu > 0 the value
    vanishes; ``scale`` is the same integral of the absolute integrand.
    """
    mu = _shared_mu(P1, P2)
    if mu <= 0:
        raise MuNotPositive(f"orthogonality needs mu > 0, got {mu}")

    def f(u: float) -> float:
        z = math.exp(u)
        return float(orthogonality_weight(z, P1, P2)) * float(
            P1.value(z)
        ) * float(P2.value(z)) * z

    half = _decay_halfwidth(mu, (P1.n + P2.n) / 2.0 + 2.0)
    grid = np.linspace(-half, half, 8193)
    z_grid = np.exp(grid)
    dense = (
        orthogonality_weight(z_grid, P1, P2)
        * np.asarray(P1.value(z_grid), dtype=float)
        * np.asarray(P2.value(z_grid), dtype=float)
        * z_grid
    )
    scale = float(np.trapezoid(np.abs(dense), grid))
    value = _quad_real(f, -half, half, noise_floor=scale)
    return value, scale


def norm_integral(P: HeunPolynomial) -> float:
    """Self-pairing ``integral_0^inf z**-n * exp(-mu*(z+1/z)) * P(z)**2 dz``.

    Finite and strictly positive for mu > 0.
    """
    mu = P.params.mu
    if mu <= 0:
        raise MuNotPositive(f"the norm integral needs mu > 0, got {mu}")
    n = P.n

    def f(u: float) -> float:
        z = math.exp(u)
        return z ** (-n) * math.exp(-mu * (z + 1.0 / z)) * float(P.value(z)) ** 2 * z

    half = _decay_halfwidth(mu, n + 1.0)
    return _quad_real(f, -half, half)
