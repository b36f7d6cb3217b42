"""Complexification of the companion system and its equation transforms.

On ``z = exp(i*omega*t)`` the companion pair (x, y) combines into

    v       = i * z**(-B/(2*omega)) * exp((A/(4*omega))*(1/z - z)) * (x - i*y)
    v_check = (2*omega*z)**-1 * z**(-B/(2*omega))
              * exp((A/(4*omega))*(1/z - z)) * (x + i*y)

and the companion equations are equivalent to ``v' = v_check`` together with
a second order linear equation for ``v`` (``residual_v_equation``).  Moebius
maps ``zeta = (z + alpha)/(z - alpha)`` with ``alpha = 1`` and ``alpha = i``
recast that equation into a symmetric form and into the double confluent
Heun form; the corresponding residual evaluators act on a value/derivative
jet supplied by the caller, so any candidate solution can be tested.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidParams,
    OriginUndefined,
    PoleAtAlpha,
    SingularPoint,
    ZeroArgument,
)
from .model import RsjParams, Trajectory

__all__ = [
    "z_of_t",
    "xy_to_v",
    "v_pair_on_circle",
    "residual_v_equation",
    "mobius",
    "mobius_inverse",
    "transport",
    "residual_symmetric_form",
    "residual_dche_form",
    "CanonicalDche",
    "canonical_dche_params",
]


def z_of_t(t, omega: float):
    """Unit-circle coordinate exp(i*omega*t); scalar or array."""
    if omega == 0:
        raise ZeroArgument("omega must be nonzero for z = exp(i*omega*t)")
    return np.exp(1j * omega * np.asarray(t, dtype=float))


def xy_to_v(z: complex, x: float, y: float, p: RsjParams) -> tuple[complex, complex]:
    """Pointwise (v, v_check) from a companion state at the point z.

    Uses the principal branch of ``z**(-B/(2*omega))``; for branch-continuous
    values along a trajectory use :func:`v_pair_on_circle`.
    """
    z = complex(z)
    if z == 0:
        raise OriginUndefined("z = 0 is outside the domain of the substitution")
    w = p.omega
    pref = z ** (-p.B / (2.0 * w)) * cmath.exp((p.A / (4.0 * w)) * (1.0 / z - z))
    v = 1j * pref * (x - 1j * y)
    v_check = pref * (x + 1j * y) / (2.0 * w * z)
    return v, v_check


def v_pair_on_circle(traj: Trajectory, p: RsjParams) -> tuple[np.ndarray, np.ndarray]:
    """(v, v_check) along an xy trajectory with branch-continuous prefactor.

    On ``z = exp(i*omega*t)`` the prefactor reduces to the unimodular
    ``exp(-i*(B*t/2 + (A/(2*omega))*sin(omega*t)))``, which is continuous in t
    and avoids the principal-branch jumps of ``z**(-B/(2*omega))``.
    """
    if traj.kind != "xy":
        raise InvalidParams("v_pair_on_circle needs an 'xy' trajectory")
    t = traj.times
    x = traj.values[:, 0]
    y = traj.values[:, 1]
    w = p.omega
    pref = np.exp(-1j * (p.B * t / 2.0 + (p.A / (2.0 * w)) * np.sin(w * t)))
    z = np.exp(1j * w * t)
    v = 1j * pref * (x - 1j * y)
    v_check = pref * (x + 1j * y) / (2.0 * w * z)
    return v, v_check


def residual_v_equation(z, v, dv, d2v, p: RsjParams):
    """Residual of the second order equation for v at z, given its 2-jet.

    Returns ``z**2*v'' + [(A/(2w))*(z**2+1) + (B/w+1)*z]*v' + v/(4w**2)``;
    zero exactly on solutions.
    """
    z = np.asarray(z)
    w = p.omega
    return (
        z**2 * np.asarray(d2v)
        + ((p.A / (2.0 * w)) * (z**2 + 1.0) + (p.B / w + 1.0) * z) * np.asarray(dv)
        + np.asarray(v) / (4.0 * w**2)
    )


def mobius(z: complex, alpha: complex) -> complex:
    """zeta = (z + alpha)/(z - alpha)."""
    if alpha == 0:
        raise InvalidParams("alpha must be nonzero")
    z = complex(z)
    if z == complex(alpha):
        raise PoleAtAlpha(f"mobius map has its pole at z = alpha = {alpha!r}")
    return (z + alpha) / (z - alpha)


def mobius_inverse(zeta: complex, alpha: complex) -> complex:
    """z = alpha*(zeta + 1)/(zeta - 1), the inverse of :func:`mobius`."""
    if alpha == 0:
        raise InvalidParams("alpha must be nonzero")
    zeta = complex(zeta)
    if zeta == 1:
        raise SingularPoint("zeta = 1 is the image of z = infinity")
    return complex(alpha) * (zeta + 1.0) / (zeta - 1.0)


def transport(
    z: complex, v: complex, dv: complex, d2v: complex, alpha: complex
) -> tuple[complex, complex, complex, complex]:
    """Push the 2-jet of v(z) through the Moebius map.

    Returns ``(zeta, u, u', u'')`` for ``u(zeta) = v(z(zeta))`` evaluated at
    ``zeta = mobius(z, alpha)``, using ``dz/dzeta = -2*alpha/(zeta-1)**2`` and
    ``d2z/dzeta2 = 4*alpha/(zeta-1)**3``.
    """
    zeta = mobius(z, alpha)
    dz = -2.0 * complex(alpha) / (zeta - 1.0) ** 2
    d2z = 4.0 * complex(alpha) / (zeta - 1.0) ** 3
    return zeta, v, dv * dz, d2v * dz**2 + dv * d2z


def residual_symmetric_form(zeta, u, du, d2u, p: RsjParams):
    """Residual of the alpha = 1 transformed equation at zeta, given the 2-jet.

    The operator is ``(1-zeta^2) d (1-zeta^2) d + 2[(B/w)(1-zeta^2)
    - (A/w)(1+zeta^2)] d + 1/w^2`` acting on u.
    """
    zeta = np.asarray(zeta)
    w = p.omega
    one = 1.0 - zeta**2
    return (
        one**2 * np.asarray(d2u)
        + (-2.0 * zeta * one + 2.0 * ((p.B / w) * one - (p.A / w) * (1.0 + zeta**2)))
        * np.asarray(du)
        + np.asarray(u) / w**2
    )


def residual_dche_form(zeta, u, du, d2u, p: RsjParams):
    """Residual of the alpha = i transformed (double confluent Heun) equation.

    The operator is ``(1-zeta^2)^2 d^2 + 2[(B/w - zeta)(1-zeta^2)
    - 2i(A/w)*zeta] d + 1/w^2`` acting on u.
    """
    zeta = np.asarray(zeta)
    w = p.omega
    one = 1.0 - zeta**2
    return (
        one**2 * np.asarray(d2u)
        + 2.0 * ((p.B / w - zeta) * one - 2.0j * (p.A / w) * zeta) * np.asarray(du)
        + np.asarray(u) / w**2
    )


@dataclass(frozen=True)
class CanonicalDche:
    """One published parameterisation of the double confluent Heun equation."""

    form: str
    a: complex
    c: complex
    t: complex
    lam: complex


def canonical_dche_params(p: RsjParams) -> tuple[CanonicalDche, CanonicalDche]:
    """Both standard parameter sets realised by the transformed equation.

    The first record parameterises the alpha = i form directly; the second is
    its rescaled canonical variant with real parameters.
    """
    w = p.omega
    first = CanonicalDche(
        form="mobius_alpha_i",
        a=0j,
        c=complex(-(p.B / w + 1.0)),
        t=1j * p.A / (2.0 * w),
        lam=1.0 / (2j * w * p.A),
    )
    second = CanonicalDche(
        form="canonical_rescaled",
        a=0j,
        c=complex(p.B / w + 1.0),
        t=complex(-((p.A / (2.0 * w)) ** 2)),
        lam=complex(1.0 / (4.0 * w**2)),
    )
    return first, second
