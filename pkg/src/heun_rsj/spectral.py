"""Spectrum of the determinant gate and its symmetry-matrix factorisation.

For fixed degree n and drive strength mu the determinant of the coefficient
system is a monic polynomial of degree n + 1 in lambda.  Its roots are the
eigenvalues of a tridiagonal matrix ``T`` with ``T[j][j] = j*(n+1-j)`` and
off-diagonal pair products ``mu**2*(j+1)*(n-j)``; since those products are
non-negative, ``T`` is similar to a real symmetric tridiagonal matrix and the
whole spectrum is real.  ``lambda_spectrum`` solves the symmetric problem and
then polishes each root on the determinant recurrence itself.

The reflection symmetry of the solutions induces two (n+1) x (n+1) matrices
(one per sign) whose product reproduces the coefficient matrix up to an
overall factor of -1 in its transposed orientation -- re-derived by brute
force on small n in the test-suite -- so the determinant splits into two
factors and every spectral lambda kills one of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import (
    ConvergenceFailure,
    IndexOutOfRange,
    InvalidParams,
    NonPositiveDiscriminant,
)
from .heun_poly import _det_newton_extended, _det_scan, coefficient_matrix
from .model import DcheParams, RsjParams, dche_to_params

__all__ = [
    "DISC_MARGIN",
    "SpectralSet",
    "lambda_spectrum",
    "SymmetryMatrix",
    "symmetry_matrix",
    "check_factorization",
    "spectral_condition",
    "physical_point",
]

#: Smallest lambda + mu**2 at which the reflection-symmetry certifications
#: are numerically meaningful in double precision.  The lowest spectral root
#: approaches -mu**2 super-exponentially in n, and once the gap falls below
#: ~1e-10 the frequency scale sqrt(lambda + mu**2) carries too few accurate
#: bits for any c-dependent identity to verify at its stated tolerance
#: (residual floor ~ 1e-16/sqrt(gap)).  Roots above this margin pass with
#: orders of magnitude to spare; roots below it are reported but excluded
#: from symmetry certification.
DISC_MARGIN = 1e-9


@dataclass(frozen=True)
class SpectralSet:
    """All n + 1 real roots of the determinant gate, ascending."""

    n: int
    mu: float
    lambdas: tuple[float, ...]


def _refine_ratio(
    det: float, ddet: float, lam: float, smax: float, e: int
) -> float:
    """|det| over the local determinant scale, evaluated safely in log2 space.

    The scale is the largest of 1, the recurrence's largest summand, and the
    first-variation magnitude |lam * d(det)/d(lam)|.  The variation term makes
    the criterion a *relative root-location* test: at a polished simple root
    the smallest representable |det| is about |ddet| * ulp(lam), which can
    dwarf ``refine_tol * smax`` at large n and |mu| even though lam itself is
    accurate to the last bit.  All three mantissas share the 2**e frame, so
    only the constant 1 needs the frame correction.
    """
    if det == 0.0:
        return 0.0
    x = math.log2(abs(det)) + e
    log_scale = 0.0
    if smax > 0.0:
        log_scale = max(log_scale, math.log2(smax) + e)
    if lam != 0.0 and ddet != 0.0:
        log_scale = max(
            log_scale, math.log2(abs(lam)) + math.log2(abs(ddet)) + e
        )
    x -= log_scale
    if x < -1074.0:
        return 0.0
    if x > 1023.0:
        return math.inf
    return 2.0**x


def lambda_spectrum(n: int, mu: float, refine_tol: float = 1e-10) -> SpectralSet:
    """All roots of the determinant gate at (n, mu), polished by Newton.

    Eigenvalues of the symmetrised tridiagonal matrix seed the roots; each is
    then refined on the determinant recurrence until its magnitude drops
    below ``refine_tol`` times the local determinant scale (largest recurrence
    summand or first-variation magnitude, whichever is bigger).
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InvalidParams(f"degree n must be a non-negative int, got {n!r}")
    if not (isinstance(mu, (int, float)) and math.isfinite(mu)):
        raise InvalidParams(f"mu must be a finite real, got {mu!r}")

    diag = np.array([j * (n + 1.0 - j) for j in range(n + 1)])
    if n == 0:
        seeds = np.array([0.0])
    else:
        off = np.array(
            [abs(mu) * math.sqrt((j + 1.0) * (n - j)) for j in range(n)]
        )
        seeds = eigh_tridiagonal(diag, off, eigvals_only=True)

    roots = []
    for i, seed in enumerate(seeds):
        lam = float(seed)
        best, best_ratio = lam, math.inf
        visited: set[float] = set()
        for _ in range(60):
            det, ddet, smax, e = _det_scan(n, mu, lam)
            ratio = _refine_ratio(det, ddet, lam, smax, e)
            if ratio < best_ratio:
                best, best_ratio = lam, ratio
            if ratio <= refine_tol or det == 0.0 or ddet == 0.0:
                break
            visited.add(lam)
            lam = lam - det / ddet
            if lam in visited:
                break  # sub-ulp oscillation between adjacent floats
        if best_ratio > refine_tol:
            raise ConvergenceFailure(
                i,
                f"root {i} of (n={n}, mu={mu}) stalled at relative "
                f"determinant {best_ratio:.3e} > {refine_tol:g}",
            )
        roots.append(_polish_extended(n, mu, best))

    return SpectralSet(n=n, mu=float(mu), lambdas=tuple(sorted(roots)))


def _polish_extended(n: int, mu: float, lam: float) -> float:
    """Final Newton steps on the determinant in extended precision.

    The double recurrence's cancellation noise near a root can misplace it by
    tens of ulps, which downstream coefficient relations amplify.  A few
    extended-precision steps land within an ulp of the true zero.  Falls back
    to the double result on any sign of trouble (non-finite values, a zero
    derivative, or a correction larger than the noise radius could explain).
    """
    cap = 1e-8 * max(1.0, abs(lam))
    cur = np.longdouble(lam)
    for _ in range(8):
        det, ddet = _det_newton_extended(n, mu, cur)
        if not (np.isfinite(det) and np.isfinite(ddet)) or ddet == 0:
            return lam
        step = det / ddet
        if abs(float(cur - step) - lam) > cap:
            return lam
        nxt = cur - step
        if nxt == cur:
            break
        cur = nxt
    out = float(cur)
    return out if math.isfinite(out) else lam


@dataclass(frozen=True, eq=False)
class SymmetryMatrix:
    """Matrix of the reflection-symmetry relations for one sign epsilon.

    Entries ``eps*c*delta(j,k) + mu*delta(j,n-k) - j*delta(j,n+1-k)`` with
    ``c = sqrt(lambda + mu**2)`` the positive inverse of twice the drive
    frequency.
    """

    epsilon: int
    n: int
    entries: np.ndarray


def symmetry_matrix(epsilon: int, d: DcheParams) -> SymmetryMatrix:
    """Build the reflection-relation matrix for epsilon in {+1, -1}."""
    if epsilon not in (1, -1):
        raise InvalidParams(f"epsilon must be +1 or -1, got {epsilon!r}")
    disc = d.lam + d.mu**2
    if disc <= 0:
        raise NonPositiveDiscriminant(
            f"lambda + mu**2 = {disc!r} <= 0: no real frequency scale"
        )
    c = math.sqrt(disc)
    n = d.n
    g = epsilon * c * np.eye(n + 1)
    for j in range(n + 1):
        g[j, n - j] += d.mu
        if 1 <= j:  # column n+1-j exists only for j >= 1
            g[j, n + 1 - j] -= j
    return SymmetryMatrix(epsilon=epsilon, n=n, entries=g)


def check_factorization(d: DcheParams) -> tuple[float, int]:
    """Compare the product of the two symmetry matrices against the system matrix.

    Returns ``(max_entry_deviation, sign)`` where sign in {+1, -1} marks the
    better of ``G+ G- = +Phi`` / ``G+ G- = -Phi`` in the transposed
    orientation.  The consistent outcome is sign = -1.
    """
    prod = symmetry_matrix(1, d).entries @ symmetry_matrix(-1, d).entries
    phi_t = coefficient_matrix(d).dense_t()
    dev_minus = float(np.max(np.abs(prod + phi_t)))
    dev_plus = float(np.max(np.abs(prod - phi_t)))
    if dev_minus <= dev_plus:
        return dev_minus, -1
    return dev_plus, 1


def spectral_condition(d: DcheParams) -> tuple[float, float]:
    """Determinants of the two symmetry matrices.

    Their product matches the gate determinant in magnitude, so lambda is
    spectral iff one of the pair (numerically) vanishes.
    """
    det_plus = float(np.linalg.det(symmetry_matrix(1, d).entries))
    det_minus = float(np.linalg.det(symmetry_matrix(-1, d).entries))
    return det_plus, det_minus


def physical_point(
    n: int, mu: float, root_index: int
) -> tuple[RsjParams, DcheParams]:
    """Bias parameters realising one spectral root, with its triplet.

    The recovered record has ``B = -(n+1)*omega`` exactly and positive
    drive frequency.
    """
    spectrum = lambda_spectrum(n, mu)
    if not 0 <= root_index < len(spectrum.lambdas):
        raise IndexOutOfRange(
            f"root_index {root_index} outside [0, {len(spectrum.lambdas) - 1}]"
        )
    d = DcheParams(n=n, mu=float(mu), lam=spectrum.lambdas[root_index])
    return dche_to_params(d), d
