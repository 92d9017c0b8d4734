"""Classical (measure-and-prepare) copying machine for a single input qubit.

The machine measures the input along a uniformly random axis ``phi`` and
prepares ``M`` copies of whichever of ``phi`` / ``phi_perp`` was found.
Averaged over the axis, its output is diagonal in the rotated Dicke basis of
the input with weights ``2(M+1-s)/((M+1)(M+2))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .bloch import TWO_PI, Qubit
from .errors import DomainError
from .qcm import alpha_one_to_m, clone_density
from .symspace import coherent_amplitudes, rotation


def ccm_weights(m: int) -> tuple[Fraction, ...]:
    if m < 1:
        raise DomainError(f"need m >= 1, got {m}")
    return tuple(Fraction(2 * (m + 1 - s), (m + 1) * (m + 2)) for s in range(m + 1))


def ccm_density_analytic(psi: Qubit, m: int) -> np.ndarray:
    w = np.array([float(x) for x in ccm_weights(m)])
    basis = rotation(psi, m)
    return (basis * w) @ basis.conj().T


def ccm_fidelity_exact(m: int) -> Fraction:
    """Single-clone fidelity of the averaged CCM output."""
    return sum((Fraction(m - s, m) * w for s, w in enumerate(ccm_weights(m))), Fraction(0))


class DensityEstimate(NamedTuple):
    rho: np.ndarray
    stderr: np.ndarray  # per entry, combining real and imaginary parts
    trials: int


def ccm_density_montecarlo(
    psi: Qubit, m: int, trials: int, seed: int, chunk: int = 100_000
) -> DensityEstimate:
    """Stern-Gerlach simulation of the CCM, averaged over random measurement axes.

    Each trial draws an axis uniformly on the sphere, draws the outcome with
    the Born probability ``|<psi|phi>|**2``, and records the projector onto
    ``m`` copies of the outcome state.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.Generator(np.random.PCG64(seed))
    a = np.array([math.cos(psi.theta / 2), np.exp(1j * psi.phi) * math.sin(psi.theta / 2)])
    total = np.zeros((m + 1, m + 1), dtype=complex)
    sq_re = np.zeros((m + 1, m + 1))
    sq_im = np.zeros((m + 1, m + 1))
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        cos_t = 1.0 - 2.0 * rng.random(size)
        az = TWO_PI * rng.random(size)
        draw = rng.random(size)
        c = np.sqrt((1.0 + cos_t) / 2)
        s = np.sqrt((1.0 - cos_t) / 2)
        e = np.exp(1j * az)
        phi_up, phi_down = c + 0j, e * s
        perp_up, perp_down = -e.conj() * s, c + 0j
        p_phi = np.abs(a[0].conjugate() * phi_up + a[1].conjugate() * phi_down) ** 2
        hit = draw < p_phi
        up = np.where(hit, phi_up, perp_up)
        down = np.where(hit, phi_down, perp_down)
        v = coherent_amplitudes(up, down, m)
        outer = v[:, :, None] * v.conj()[:, None, :]
        total += outer.sum(axis=0)
        sq_re += (outer.real**2).sum(axis=0)
        sq_im += (outer.imag**2).sum(axis=0)
        done += size
    mean = total / trials
    var = (sq_re / trials - mean.real**2) + (sq_im / trials - mean.imag**2)
    var = np.clip(var, 0.0, None) * trials / max(trials - 1, 1)
    return DensityEstimate(mean, np.sqrt(var / trials), trials)


# -- QCM vs CCM -------------------------------------------------------------------

def _weight_difference(m: int) -> list[Fraction]:
    qcm = list(alpha_one_to_m(m)) + [Fraction(0)]
    return [q - c for q, c in zip(qcm, ccm_weights(m))]


def qcm_ccm_distance_exact(m: int) -> Fraction:
    """``Tr[(rho_QCM - rho_CCM)**2]`` for one input qubit, as a rational.

    Both outputs are diagonal in the same rotated Dicke basis, so the distance
    is a sum over weight differences and does not depend on the input.
    """
    if m < 2:
        raise DomainError(f"need m >= 2, got {m}")
    return sum((d * d for d in _weight_difference(m)), Fraction(0))


def qcm_ccm_trace_distance_exact(m: int) -> Fraction:
    """Half the trace norm of ``rho_QCM - rho_CCM``."""
    if m < 2:
        raise DomainError(f"need m >= 2, got {m}")
    return sum((abs(d) for d in _weight_difference(m)), Fraction(0)) / 2


def qcm_ccm_distance(m: int, psi: Qubit | None = None) -> float:
    """Hilbert-Schmidt distance computed from the two density matrices."""
    if m < 2:
        raise DomainError(f"need m >= 2, got {m}")
    psi = Qubit.up() if psi is None else psi
    delta = clone_density(psi, 1, m) - ccm_density_analytic(psi, m)
    return float(np.real(np.trace(delta @ delta)))


@dataclass(frozen=True)
class ScalingReport:
    m_values: list[int]
    distances: list[float]
    fitted_slope: float
    fit_residual: float  # RMS residual in log space
    intercept: float = 0.0
    m_min: int | None = None
    excluded: list[int] = field(default_factory=list)


def fit_scaling(m_values: Sequence[int], distances: Sequence[float]) -> ScalingReport:
    """Least-squares line through ``(log m, log d)``."""
    m_arr = np.asarray(m_values, dtype=float)
    d_arr = np.asarray(distances, dtype=float)
    if m_arr.shape != d_arr.shape or m_arr.size < 3:
        raise ValueError("need at least three (m, distance) pairs of equal length")
    if np.any(d_arr <= 0) or np.any(m_arr <= 0):
        raise DomainError("log-log fit needs positive m and distances")
    if np.any(np.diff(m_arr) <= 0):
        raise ValueError("m values must be strictly increasing")
    x, y = np.log(m_arr), np.log(d_arr)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return ScalingReport(
        [int(v) for v in m_values], [float(v) for v in distances],
        float(slope), float(np.sqrt(np.mean(resid**2))), float(intercept),
    )


def scaling_study(m_values: Sequence[int], m_min: int = 8) -> ScalingReport:
    """Fit the QCM -> CCM distance against ``m``, dropping the pre-asymptotic ``m < m_min``."""
    kept = [m for m in m_values if m >= m_min]
    report = fit_scaling(kept, [float(qcm_ccm_distance_exact(m)) for m in kept])
    return ScalingReport(
        report.m_values, report.distances, report.fitted_slope, report.fit_residual,
        report.intercept, m_min, [m for m in m_values if m < m_min],
    )
