"""Pure qubit states on the Poincare sphere.

A qubit is stored by its polar and azimuthal angles; amplitudes are derived
on demand as ``(cos(theta/2), exp(i phi) sin(theta/2))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

TWO_PI = 2.0 * math.pi

#: Name of the bit generator behind :func:`sample_uniform` (recorded in reports).
GENERATOR_NAME = "numpy.random.PCG64"


@dataclass(frozen=True)
class Qubit:
    """Point on the Poincare sphere; ``phi`` is reduced mod 2 pi."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError(f"non-finite angles: theta={self.theta}, phi={self.phi}")
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)

    @classmethod
    def up(cls) -> "Qubit":
        return cls(0.0, 0.0)

    @classmethod
    def down(cls) -> "Qubit":
        return cls(math.pi, 0.0)

    def conjugated(self) -> "Qubit":
        """The qubit whose amplitudes are the complex conjugates of ours."""
        return Qubit(self.theta, -self.phi)


class AmplitudePair(NamedTuple):
    up: complex
    down: complex

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.up, self.down], dtype=complex)


def amplitudes(psi: Qubit) -> AmplitudePair:
    c, s = math.cos(psi.theta / 2), math.sin(psi.theta / 2)
    return AmplitudePair(complex(c), complex(math.cos(psi.phi) * s, math.sin(psi.phi) * s))


def orthogonal(psi: Qubit) -> AmplitudePair:
    """Orthogonal partner with the fixed phase ``(-exp(-i phi) sin, cos)``.

    With this choice the 2x2 matrix ``[psi, psi_perp]`` (as columns) lies in
    SU(2), which is what makes rotated Dicke bases line up with the cloner's
    ancilla states.
    """
    c, s = math.cos(psi.theta / 2), math.sin(psi.theta / 2)
    return AmplitudePair(complex(-math.cos(psi.phi) * s, math.sin(psi.phi) * s), complex(c))


def conjugate(psi: Qubit) -> AmplitudePair:
    return amplitudes(psi.conjugated())


def su2_frame(psi: Qubit) -> np.ndarray:
    """SU(2) matrix with columns ``psi`` and ``orthogonal(psi)``."""
    return np.column_stack([amplitudes(psi).vector, orthogonal(psi).vector])


def overlap(a: AmplitudePair, b: AmplitudePair) -> complex:
    """Inner product <a|b>."""
    return a.up.conjugate() * b.up + a.down.conjugate() * b.down


def sample_angles(seed: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform sphere samples as ``(theta, phi)`` arrays.

    ``cos(theta)`` is drawn uniformly on [-1, 1] (inverse CDF), ``phi``
    uniformly on [0, 2 pi).
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(n)
    phi = TWO_PI * rng.random(n)
    theta = np.arccos(1.0 - 2.0 * u)
    return theta, phi


def sample_uniform(seed: int, n: int) -> list[Qubit]:
    if n < 0:
        raise ValueError(f"sample count must be non-negative, got {n}")
    if n == 0:
        return []
    theta, phi = sample_angles(seed, n)
    return [Qubit(t, p) for t, p in zip(theta.tolist(), phi.tolist())]
