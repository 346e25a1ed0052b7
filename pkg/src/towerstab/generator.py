"""Semi-discrete generators with an energy Gram matrix.

A :class:`DiscreteGenerator` is a square real matrix ``A`` together with a
symmetric positive-definite Gram matrix ``M`` defining the state norm
``|z|^2 = z^T M z`` (twice the physical energy).  All stability notions in
this toolkit (dissipativity, resolvent norms, spectra) are taken with
respect to that norm.

Generators are kept in descriptor form internally: alongside the explicit
``A`` they carry ``flux = M A`` as assembled (skew blocks are stored once,
so they cancel exactly in floating point).  Deriving ``M A`` by multiplying
the explicit ``A`` would amplify mass-solve roundoff by the stiffness norm
and swamp the 1e-10 dissipativity tolerances on fine meshes; all energy
balance computations therefore go through ``flux``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError, NumericalError, ValidationError

SYMMETRY_RTOL = 1e-12
DISSIPATIVITY_TOL = 1e-10


class DampingChannel(NamedTuple):
    """One term of a closed-form dissipation identity.

    The generator satisfies ``Re <A z, z>_M = -sum_i gain_i * (vector_i . z)^2``.
    Channels with ``gain == 0`` are kept so the signal is still recorded
    during simulation.
    """

    name: str
    gain: float
    vector: np.ndarray


def check_spd(M: np.ndarray, name: str = "gram") -> np.ndarray:
    """Validate that ``M`` is symmetric positive definite.

    Returns the upper Cholesky factor ``U`` with ``M = U^T U``.  Raises
    :class:`ValidationError` if ``M`` is not symmetric to within
    ``SYMMETRY_RTOL`` relative or if any Cholesky pivot fails.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    scale = np.abs(M).max() or 1.0
    if np.abs(M - M.T).max() > SYMMETRY_RTOL * scale:
        raise ValidationError(f"{name} is not symmetric to {SYMMETRY_RTOL} relative")
    try:
        return sla.cholesky(M, lower=False)
    except sla.LinAlgError as exc:
        raise ValidationError(f"{name} is not positive definite: {exc}") from exc


def energy(z: np.ndarray, gram: np.ndarray) -> float:
    """Energy ``(1/2) z^T M z`` of a state in the Gram norm."""
    z = np.asarray(z)
    gram = np.asarray(gram)
    if gram.shape != (z.shape[0], z.shape[0]):
        raise DimensionError(
            f"state dimension {z.shape[0]} does not match gram {gram.shape}"
        )
    return 0.5 * float(np.real(np.conj(z) @ gram @ z))


def symmetric_part(F: np.ndarray) -> np.ndarray:
    return 0.5 * (F + F.conj().T)


@dataclass(eq=False)
class DiscreteGenerator:
    """Square generator ``A`` with energy Gram ``gram`` and coordinate labels.

    ``flux`` is the assembled product ``gram @ A`` (defaults to the plain
    matrix product); ``damping_channels`` carries the model's closed-form
    dissipation identity so that ``sym(flux) = -sum gain_i v_i v_i^T``.
    Instances are immutable by convention and safe to share read-only
    across parallel workers.
    """

    A: np.ndarray
    gram: np.ndarray
    labels: Sequence[str]
    damping_channels: tuple[DampingChannel, ...] = field(default_factory=tuple)
    flux: np.ndarray | None = None

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=float)
        n = self.A.shape[0]
        if self.A.shape != (n, n):
            raise DimensionError(f"A must be square, got {self.A.shape}")
        check_spd(self.gram, "gram")
        self.gram = np.asarray(self.gram, dtype=float)
        if self.gram.shape != (n, n):
            raise DimensionError("gram shape does not match A")
        if self.flux is None:
            self.flux = self.gram @ self.A
        else:
            self.flux = np.asarray(self.flux, dtype=float)
            if self.flux.shape != (n, n):
                raise DimensionError("flux shape does not match A")
        self.labels = tuple(self.labels)
        if len(self.labels) != n:
            raise DimensionError(f"expected {n} labels, got {len(self.labels)}")
        if len(set(self.labels)) != n:
            raise ValidationError("coordinate labels must be unique")

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def index(self, label: str) -> int:
        """Coordinate index of a labelled state component."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no coordinate labelled {label!r}") from None

    def unit_state(self, label: str) -> np.ndarray:
        z = np.zeros(self.dim)
        z[self.index(label)] = 1.0
        return z

    def energy(self, z: np.ndarray) -> float:
        return energy(z, self.gram)

    def dissipation_defect(self) -> float:
        """Largest eigenvalue of ``sym(gram A)``; <= 0 means Gram-dissipative."""
        return float(sla.eigvalsh(symmetric_part(self.flux))[-1])

    def is_dissipative(self, tol: float = DISSIPATIVITY_TOL) -> bool:
        return self.dissipation_defect() <= tol


class EnergyCoordinates(NamedTuple):
    """Generator transformed to coordinates where the Gram is the identity.

    ``T = U A U^{-1}`` with ``M = U^T U``; energy operator norms of functions
    of ``A`` equal Euclidean norms of the same functions of ``T``.
    """

    T: np.ndarray
    U: np.ndarray
    norm_A: float


def transform_flux(flux: np.ndarray, U: np.ndarray) -> np.ndarray:
    """``U^{-T} flux U^{-1}``, the generator in energy coordinates.

    Equals ``U A U^{-1}`` for ``flux = gram A`` and ``gram = U^T U``, but the
    congruence-style evaluation preserves the assembled symmetric part.
    """
    try:
        left = sla.solve_triangular(U.T, flux, lower=True)
        return sla.solve_triangular(U.T, left.T, lower=True).T
    except sla.LinAlgError as exc:  # pragma: no cover - U is an SPD factor
        raise NumericalError(f"energy transform failed: {exc}") from exc


def energy_coordinates(gen: DiscreteGenerator) -> EnergyCoordinates:
    """Similarity transform of the generator by the Cholesky factor of the Gram."""
    U = check_spd(gen.gram)
    T = transform_flux(gen.flux, U)
    norm_A = float(sla.svdvals(T)[0])
    return EnergyCoordinates(T=T, U=U, norm_A=norm_A)
