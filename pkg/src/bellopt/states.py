"""Two-qubit density matrices and their anti-diagonal ("X") coherence pattern.

Conventions used throughout the package:

* Two-qubit basis ordering is {|11>, |10>, |01>, |00>}; the first label is
  qubit 1, the second qubit 2, and within each qubit the excited state |1>
  comes before the ground state |0>.
* Pauli matrices are written in the single-qubit basis {|1>, |0>}, so
  sigma_z |1> = +|1>.
* The spin correlation matrix is t[m][n] = Tr(rho (sigma_n (x) sigma_m)),
  with the first Kronecker factor acting on qubit 1.

All types are immutable values and all operations are pure functions, so the
module is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
DEFAULT_OFF_X_TOL = 1e-9

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# Transposed Pauli products, laid out so that
# t[m][n] = sum_ij rho_ij * _PAULI_PRODUCTS_T[m, n, i, j].
_PAULI_PRODUCTS_T = np.array(
    [[np.kron(PAULIS[n], PAULIS[m]).T for n in range(3)] for m in range(3)]
)

# Index pairs that must vanish for the X pattern (everything off the main
# diagonal and the anti-diagonal).
_OFF_X_INDICES = (
    (0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2),
)


class StateValidationError(ValueError):
    """A candidate state violates one of the density-matrix invariants."""


class NotHermitian(StateValidationError):
    pass


class TraceNotOne(StateValidationError):
    pass


class NotPositive(StateValidationError):
    pass


class NotXStructured(StateValidationError):
    """An entry outside the X pattern exceeds the allowed tolerance."""

    def __init__(self, magnitude: float, index: tuple[int, int]):
        self.magnitude = magnitude
        self.index = index
        super().__init__(
            f"off-pattern entry {index} has magnitude {magnitude:.3e}"
        )


@dataclass(frozen=True, eq=False)
class DensityMatrix4:
    """Validated 4x4 two-qubit state: Hermitian, unit trace, PSD."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (4, 4):
            raise StateValidationError(f"expected a 4x4 matrix, got {m.shape}")
        herm = np.abs(m - m.conj().T).max()
        if herm > HERMITICITY_TOL:
            raise NotHermitian(f"worst Hermiticity defect {herm:.3e}")
        tr = m.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise TraceNotOne(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
        lam_min = float(np.linalg.eigvalsh(m).min())
        if lam_min < -POSITIVITY_TOL:
            raise NotPositive(f"smallest eigenvalue {lam_min:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)


def validate_density_matrix(entries) -> DensityMatrix4:
    """Validate a raw 4x4 complex array as a two-qubit density matrix.

    Raises NotHermitian, TraceNotOne or NotPositive naming the violated
    invariant together with the worst offending magnitude.
    """
    return DensityMatrix4(np.asarray(entries, dtype=complex))


@dataclass(frozen=True)
class XState:
    """The 7 free parameters of an X-patterned two-qubit density matrix.

    Populations follow the basis ordering (|11>, |10>, |01>, |00>); rho14 is
    the |11><00| coherence and rho23 the |10><01| coherence.
    """

    rho11: float
    rho22: float
    rho33: float
    rho44: float
    rho14: complex
    rho23: complex

    def __post_init__(self):
        object.__setattr__(self, "rho11", float(self.rho11))
        object.__setattr__(self, "rho22", float(self.rho22))
        object.__setattr__(self, "rho33", float(self.rho33))
        object.__setattr__(self, "rho44", float(self.rho44))
        object.__setattr__(self, "rho14", complex(self.rho14))
        object.__setattr__(self, "rho23", complex(self.rho23))
        pops = (self.rho11, self.rho22, self.rho33, self.rho44)
        total = sum(pops)
        if abs(total - 1.0) > TRACE_TOL:
            raise TraceNotOne(f"populations sum deviates from 1 by {abs(total - 1.0):.3e}")
        for i, p in enumerate(pops):
            if p < -POSITIVITY_TOL or p > 1.0 + POSITIVITY_TOL:
                raise NotPositive(f"population {i + 1} out of [0, 1]: {p!r}")
        if self.rho11 * self.rho44 < abs(self.rho14) ** 2 - POSITIVITY_TOL:
            raise NotPositive(
                f"outer 2x2 block not PSD: rho11*rho44={self.rho11 * self.rho44:.3e} "
                f"< |rho14|^2={abs(self.rho14) ** 2:.3e}"
            )
        if self.rho22 * self.rho33 < abs(self.rho23) ** 2 - POSITIVITY_TOL:
            raise NotPositive(
                f"inner 2x2 block not PSD: rho22*rho33={self.rho22 * self.rho33:.3e} "
                f"< |rho23|^2={abs(self.rho23) ** 2:.3e}"
            )

    @property
    def diagonal_gap(self) -> float:
        """rho11 + rho44 - rho22 - rho33, the z-z spin correlation."""
        return self.rho11 + self.rho44 - self.rho22 - self.rho33


def as_x_state(rho: DensityMatrix4, off_x_tol: float = DEFAULT_OFF_X_TOL) -> XState:
    """Extract the 7 X parameters, requiring off-pattern entries <= off_x_tol."""
    if off_x_tol < 0:
        raise ValueError("off_x_tol must be >= 0")
    m = rho.entries
    worst, worst_idx = 0.0, (0, 0)
    for i, j in _OFF_X_INDICES:
        mag = abs(m[i, j])
        if mag > worst:
            worst, worst_idx = mag, (i, j)
    if worst > off_x_tol:
        raise NotXStructured(worst, worst_idx)
    return XState(
        m[0, 0].real, m[1, 1].real, m[2, 2].real, m[3, 3].real,
        m[0, 3], m[1, 2],
    )


def x_to_dense(x: XState) -> DensityMatrix4:
    """Hermitian completion of an XState back into a full density matrix."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0], m[1, 1], m[2, 2], m[3, 3] = x.rho11, x.rho22, x.rho33, x.rho44
    m[0, 3], m[3, 0] = x.rho14, x.rho14.conjugate()
    m[1, 2], m[2, 1] = x.rho23, x.rho23.conjugate()
    return DensityMatrix4(m)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """3x3 real matrix of two-qubit Pauli correlations."""

    t: np.ndarray

    def __post_init__(self):
        m = np.array(self.t, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got {m.shape}")
        if np.abs(m).max() > 1.0 + 1e-9:
            raise ValueError("correlation entries must lie in [-1, 1]")
        m.setflags(write=False)
        object.__setattr__(self, "t", m)


def pauli_correlation_matrix(rho: DensityMatrix4) -> CorrelationMatrix:
    """t[m][n] = Tr(rho (sigma_n (x) sigma_m)), first factor on qubit 1."""
    t = np.einsum("ij,mnij->mn", rho.entries, _PAULI_PRODUCTS_T)
    imag = np.abs(t.imag).max()
    if imag > 1e-12:
        raise StateValidationError(f"correlation has imaginary residue {imag:.3e}")
    return CorrelationMatrix(t.real)


@dataclass(frozen=True)
class ObservableDirection:
    """Measurement direction on the Bloch sphere, theta in [0, pi], phi in (-pi, pi]."""

    theta: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "phi", float(self.phi))
        if not (-1e-12 <= self.theta <= math.pi + 1e-12):
            raise ValueError(f"theta out of [0, pi]: {self.theta!r}")
        if not (-math.pi - 1e-12 < self.phi <= math.pi + 1e-12):
            raise ValueError(f"phi out of (-pi, pi]: {self.phi!r}")

    @property
    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi),
                         math.cos(self.theta)])


def normalize_direction(theta: float, phi: float) -> tuple[float, float]:
    """Canonicalize raw angles to theta in [0, pi], phi in (-pi, pi].

    A theta outside [0, pi] is reflected through the antipode (phi shifted by
    pi), which leaves the physical direction unchanged.
    """
    theta = math.fmod(theta, 2.0 * math.pi)
    if theta < 0.0:
        theta += 2.0 * math.pi
    if theta > math.pi:
        theta = 2.0 * math.pi - theta
        phi += math.pi
    phi = math.fmod(phi, 2.0 * math.pi)
    if phi > math.pi:
        phi -= 2.0 * math.pi
    elif phi <= -math.pi:
        phi += 2.0 * math.pi
    return theta + 0.0, phi + 0.0  # +0.0 turns -0.0 into 0.0
