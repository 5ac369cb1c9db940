"""A toy outer parametrix with an explicit solution.

The 2x2 function

    N(eta, z) = A ((eta-1)/(eta+1))**(sigma3/4) A**-1 exp(-i z (eta - R(eta)) sigma3),

with ``A = [[1, i], [i, 1]] / sqrt(2)`` and ``R(eta)**2 = eta**2 - 1``
(``R ~ eta`` at infinity), is analytic off [-1, 1], tends to I at infinity
and jumps across the cut by ``[[0, e^{2iz eta}], [-e^{-2iz eta}, 0]]``.  The
checks here treat it as a black box: boundary values come from small
offsets off the cut and Laurent coefficients from contour quadrature.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import IdentityViolation, OnCut, QuadratureFailure

__all__ = [
    "Matrix2",
    "SIGMA3",
    "R",
    "toy_solution",
    "toy_jump",
    "toy_jump_residual",
    "toy_laurent_coefficient",
    "toy_G",
    "toy_identity_check",
    "toy_ode_residual",
    "toy_nls_amplitude",
]

# 2x2 complex numpy arrays
Matrix2 = np.ndarray

SIGMA3 = np.diag([1.0 + 0j, -1.0 + 0j])
_A = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)
_A_INV = np.array([[1, -1j], [-1j, 1]]) / math.sqrt(2)


def _on_cut(eta):
    return eta.imag == 0 and -1 <= eta.real <= 1


def R(eta: complex) -> complex:
    """``sqrt(eta^2 - 1)`` with the cut on [-1, 1] and ``R ~ eta`` at infinity."""
    eta = complex(eta)
    return cmath.sqrt(eta - 1) * cmath.sqrt(eta + 1)


def toy_solution(eta: complex, z: complex) -> Matrix2:
    """The exact toy solution at ``eta`` off the cut.

    Raises
    ------
    OnCut
        If ``eta`` lies on [-1, 1].
    """
    eta = complex(eta)
    if _on_cut(eta):
        raise OnCut(f"eta = {eta} lies on the cut [-1, 1]")
    q = ((eta - 1) / (eta + 1)) ** 0.25
    phase = cmath.exp(-1j * complex(z) * (eta - R(eta)))
    return _A @ np.diag([q, 1 / q]) @ _A_INV @ np.diag([phase, 1 / phase])


def toy_jump(eta: float, z: complex) -> Matrix2:
    z = complex(z)
    return np.array([[0, cmath.exp(2j * z * eta)], [-cmath.exp(-2j * z * eta), 0]])


def _boundary_value(eta, z, sign, delta):
    # Richardson over two offsets: N(eta +- i delta) is smooth in delta
    n1 = toy_solution(eta + sign * 1j * delta, z)
    n2 = toy_solution(eta + sign * 1j * delta / 2, z)
    return 2 * n2 - n1


def toy_jump_residual(eta_on_cut: float, z: complex, delta=1e-8) -> float:
    """``||N_+ - N_- J||`` at an interior point of the cut (max-entry norm)."""
    eta = float(eta_on_cut)
    if not abs(eta) < 1:
        raise ValueError("the point must lie strictly inside (-1, 1)")
    Np = _boundary_value(eta, z, +1, delta)
    Nm = _boundary_value(eta, z, -1, delta)
    return float(np.max(np.abs(Np - Nm @ toy_jump(eta, z))))


def toy_laurent_coefficient(k: int, z: complex, radius=3.0, nodes=128, tol=1e-12) -> Matrix2:
    """Coefficient ``N^{(k)}`` of ``eta^{-k}`` at infinity.

    Trapezoid rule for ``(1/2 pi i) \\oint N eta^{k-1} d eta`` on ``|eta| = radius``;
    the identity term integrates to zero for ``k >= 1``.  The rule is
    repeated with half the nodes as a convergence check.

    Raises
    ------
    QuadratureFailure
        If the two node counts disagree by more than ``tol`` (relative).
    """
    if k < 1:
        raise ValueError("k must be >= 1")

    def rule(m):
        theta = 2 * math.pi * (np.arange(m) + 0.5) / m
        etas = radius * np.exp(1j * theta)
        acc = np.zeros((2, 2), complex)
        for e in etas:
            acc += toy_solution(e, z) * e ** k
        return acc / m

    full = rule(nodes)
    half = rule(nodes // 2)
    scale = max(1.0, float(np.max(np.abs(full))))
    if np.max(np.abs(full - half)) > tol * scale:
        raise QuadratureFailure(f"Laurent coefficient {k} not converged at z = {z}")
    return full


def toy_G(eta: complex, z: complex) -> Matrix2:
    """``G = R(eta) N sigma3 N^{-1}`` assembled directly."""
    N = toy_solution(eta, z)
    return R(eta) * N @ SIGMA3 @ np.linalg.inv(N)


def toy_identity_check(z: complex, N1: Matrix2 | None = None, tol=1e-9, samples=5, seed=0):
    """Check the algebraic identities closing the toy system.

    (a) ``4 N1_12 N1_21 = 1``; (b) ``G = eta sigma3 + [N1, sigma3]`` at
    ``samples`` random points; (c) ``G^2 = (eta^2 - 1) I``.

    Parameters
    ----------
    N1 : array, optional
        First Laurent coefficient to test; computed by quadrature if omitted.

    Returns
    -------
    dict
        Deviation of each identity.

    Raises
    ------
    IdentityViolation
        Naming the first identity whose deviation exceeds ``tol``.
    """
    if N1 is None:
        N1 = toy_laurent_coefficient(1, z)
    rng = np.random.default_rng(seed)
    a = abs(4 * N1[0, 1] * N1[1, 0] - 1)
    comm = N1 @ SIGMA3 - SIGMA3 @ N1
    b = c = 0.0
    for _ in range(samples):
        eta = complex(*(rng.uniform(-2.5, 2.5, 2)))
        if abs(eta.imag) < 0.1:
            eta += 0.5j
        G = toy_G(eta, z)
        b = max(b, float(np.max(np.abs(G - (eta * SIGMA3 + comm)))))
        c = max(c, float(np.max(np.abs(G @ G - (eta * eta - 1) * np.eye(2)))))
    report = {"four_n12_n21": a, "G_formula": b, "G_squared": c}
    for name, value in report.items():
        if not value <= tol:
            raise IdentityViolation(name, value)
    return report


def toy_ode_residual(z: complex, dz=1e-4) -> float:
    """Central-difference check of ``dN1_11/dz = -i/2 = -2i N1_12 N1_21`` (and ``dN1_22/dz = i/2``)."""
    z = complex(z)
    Np = toy_laurent_coefficient(1, z + dz)
    Nm = toy_laurent_coefficient(1, z - dz)
    N0 = toy_laurent_coefficient(1, z)
    d11 = (Np[0, 0] - Nm[0, 0]) / (2 * dz)
    d22 = (Np[1, 1] - Nm[1, 1]) / (2 * dz)
    product = -2j * N0[0, 1] * N0[1, 0]
    return max(abs(d11 + 0.5j), abs(d22 - 0.5j), abs(d11 - product))


def toy_nls_amplitude(z: complex) -> complex:
    """``q = 2i N1_12(z)``."""
    return 2j * toy_laurent_coefficient(1, z)[0, 1]
