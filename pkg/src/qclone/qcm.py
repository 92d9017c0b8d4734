"""Optimal universal N -> M cloner.

The cloner maps ``|N psi>`` to ``sum_j alpha_j |(M-j) psi, j psi_perp> (x) R_j(psi)``
with ``j = 0 .. M-N``. The ancilla states ``R_j(psi)`` are realized as Dicke
states ``|(M-N-j) psi*, j psi*_perp>`` of ``M - N`` conjugate qubits; for
``N = 1`` this is the ``M - 1`` qubit ancilla of the 1 -> M machine.

Joint states are stored as ``(M+1, M-N+1)`` matrices: clone Dicke index by
ancilla Dicke index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bloch import Qubit, amplitudes, sample_angles
from .errors import DomainError
from .symspace import reduce_one_qubit, rotation, rotation_batch


def _check_counts(n: int, m: int) -> None:
    if n < 1 or m <= n:
        raise DomainError(f"cloner needs 1 <= n < m, got n={n}, m={m}")


def alpha_squared(n: int, m: int) -> tuple[Fraction, ...]:
    """Exact ``alpha_j**2``; the ratio of consecutive terms is ``(m-n-j)/(m-j)``."""
    _check_counts(n, m)
    out = [Fraction(n + 1, m + 1)]
    for j in range(m - n):
        out.append(out[-1] * Fraction(m - n - j, m - j))
    return tuple(out)


@dataclass(frozen=True)
class CloneCoefficients:
    n: int
    m: int
    weights: tuple[Fraction, ...]

    @property
    def alpha(self) -> np.ndarray:
        return np.sqrt(np.array([float(w) for w in self.weights]))


def alpha(n: int, m: int) -> CloneCoefficients:
    return CloneCoefficients(n, m, alpha_squared(n, m))


def alpha_one_to_m(m: int) -> tuple[Fraction, ...]:
    """The 1 -> M coefficients written directly as ``2(M-j)/(M(M+1))``."""
    return tuple(Fraction(2 * (m - j), m * (m + 1)) for j in range(m))


def error_distribution(n: int, m: int) -> tuple[Fraction, ...]:
    """Probability of ``j`` erroneous clones, ``j = 0 .. m-n``."""
    return alpha_squared(n, m)


def fidelity_formula(n: int, m: int) -> Fraction:
    if n < 1 or m < n:
        raise DomainError(f"fidelity needs 1 <= n <= m, got n={n}, m={m}")
    return Fraction(m * (n + 1) + n, m * (n + 2))


def fidelity_limit(n: int) -> Fraction:
    """Large-``m`` limit of the clone fidelity, equal to the best measurement fidelity."""
    return Fraction(n + 1, n + 2)


def fidelity_from_errors(n: int, m: int) -> Fraction:
    """``sum_j (m-j)/m alpha_j**2``: the chance the first clone is not among the errors."""
    return sum((Fraction(m - j, m) * w for j, w in enumerate(alpha_squared(n, m))), Fraction(0))


# -- states ---------------------------------------------------------------------

@dataclass(frozen=True)
class JointState:
    """Clones (x) ancilla; ``matrix[k, l]`` is the amplitude on ``|D_k> (x) |A_l>``."""

    n: int
    m: int
    coefficients: CloneCoefficients
    clone_blocks: np.ndarray  # column j: |(m-j) psi, j psi_perp>
    ancilla_blocks: np.ndarray  # column j: R_j(psi)

    @property
    def matrix(self) -> np.ndarray:
        return (self.clone_blocks * self.coefficients.alpha) @ self.ancilla_blocks.T

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    def clone_density(self) -> np.ndarray:
        """Blockwise trace over the ancilla."""
        mat = self.matrix
        return mat @ mat.conj().T


def clone(psi: Qubit, n: int, m: int) -> JointState:
    coeffs = alpha(n, m)
    blocks = rotation(psi, m)[:, : m - n + 1]
    ancilla = rotation(psi.conjugated(), m - n)
    return JointState(n, m, coeffs, blocks, ancilla)


def clone_density(psi: Qubit, n: int, m: int) -> np.ndarray:
    """Density matrix of the ``m`` clones: ``sum_j alpha_j**2 P_j``."""
    coeffs = alpha(n, m)
    blocks = rotation(psi, m)[:, : m - n + 1]
    weights = np.array([float(w) for w in coeffs.weights])
    return (blocks * weights) @ blocks.conj().T


def single_clone_density(psi: Qubit, n: int, m: int) -> np.ndarray:
    return reduce_one_qubit(clone_density(psi, n, m), m)


def single_clone_fidelity(psi: Qubit, n: int, m: int) -> float:
    v = amplitudes(psi).vector
    return float(np.real(v.conj() @ single_clone_density(psi, n, m) @ v))


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    return np.array([2 * rho[0, 1].real, -2 * rho[0, 1].imag, (rho[0, 0] - rho[1, 1]).real])


def single_clone_fidelities(theta: np.ndarray, phi: np.ndarray, n: int, m: int) -> np.ndarray:
    """Vectorized :func:`single_clone_fidelity` over a batch of input angles."""
    weights = np.array([float(w) for w in alpha(n, m).weights])
    blocks = rotation_batch(theta, phi, m)[:, :, : m - n + 1]
    rho = np.einsum("bkj,j,blj->bkl", blocks, weights, blocks.conj())
    k = np.arange(m + 1)
    diag = np.real(np.diagonal(rho, axis1=1, axis2=2))
    up = diag @ (m - k) / m
    down = diag @ k / m
    kk = np.arange(m)
    ud = np.diagonal(rho, offset=1, axis1=1, axis2=2) @ (np.sqrt((m - kk) * (kk + 1.0)) / m)
    a = np.cos(np.asarray(theta) / 2)
    b = np.exp(1j * np.asarray(phi)) * np.sin(np.asarray(theta) / 2)
    # <psi| rho_1 |psi> with rho_1 = [[up, ud], [conj(ud), down]]
    return up * a**2 + down * np.abs(b) ** 2 + 2 * np.real(a * ud * b)


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    trials: int
    spread: float  # max |sample - mean|


def average_fidelity_mc(
    n: int, m: int, trials: int, seed: int, chunk: int = 20_000
) -> MonteCarloEstimate:
    """Sphere average of the single-clone fidelity.

    Samples are processed in chunks whose (count, mean, M2) statistics are
    merged with the pairwise Welford update, so the result does not depend
    on how the work is split.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    _check_counts(n, m)
    theta, phi = sample_angles(seed, trials)
    count, mean, m2 = 0, 0.0, 0.0
    lo, hi = math.inf, -math.inf
    for start in range(0, trials, chunk):
        f = single_clone_fidelities(theta[start:start + chunk], phi[start:start + chunk], n, m)
        c_n, c_mean = f.size, float(f.mean())
        c_m2 = float(((f - c_mean) ** 2).sum())
        delta = c_mean - mean
        total = count + c_n
        mean += delta * c_n / total
        m2 += c_m2 + delta**2 * count * c_n / total
        count = total
        lo, hi = min(lo, float(f.min())), max(hi, float(f.max()))
    var = m2 / (trials - 1) if trials > 1 else 0.0
    return MonteCarloEstimate(mean, math.sqrt(var / trials), trials, max(hi - mean, mean - lo))


# -- isometry checks ------------------------------------------------------------

def basis_images(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Images of ``|up>`` and ``|down>`` under the 1 -> M machine, as joint matrices.

    The ancilla basis is the computational Dicke basis of ``m - 1`` qubits,
    standing for the conjugate-frame states ``|(M-1-j) up*, j down*>``.
    """
    if m < 2:
        raise DomainError(f"1 -> M cloner needs m >= 2, got {m}")
    a = np.sqrt([float(w) for w in alpha_one_to_m(m)])
    up = np.zeros((m + 1, m), dtype=complex)
    down = np.zeros((m + 1, m), dtype=complex)
    for j in range(m):
        up[j, j] = a[j]
        down[j + 1, j] = a[m - 1 - j]
    return up, down


def symmetric_input(psi: Qubit, n: int) -> np.ndarray:
    """``|N psi>`` in the Dicke basis of the ``n`` input qubits."""
    return rotation(psi, n)[:, 0]


def isometry(n: int, m: int, seed: int = 0) -> np.ndarray:
    """Matrix of the cloner on the symmetric input span, shape ``((m+1)(m-n+1), n+1)``.

    Recovered by linear interpolation from ``clone`` on ``3(n+1)`` random
    inputs; a residual check guards that ``clone`` really is linear in
    ``|N psi>``.
    """
    _check_counts(n, m)
    theta, phi = sample_angles(seed, 3 * (n + 1))
    psis = [Qubit(t, p) for t, p in zip(theta, phi)]
    x = np.column_stack([symmetric_input(p, n) for p in psis])
    y = np.column_stack([clone(p, n, m).matrix.reshape(-1) for p in psis])
    sol, *_ = np.linalg.lstsq(x.T, y.T, rcond=None)
    u = sol.T
    residual = np.abs(u @ x - y).max()
    if residual > 1e-9:
        raise ArithmeticError(f"cloner is not linear on the input span (residual {residual:.3e})")
    return u


@dataclass(frozen=True)
class UnitarityReport:
    m: int
    norm_defect: float  # max | ||image|| - 1 |
    overlap: float  # | <image(up)|image(down)> |

    @property
    def max_defect(self) -> float:
        return max(self.norm_defect, self.overlap)


def unitarity_check(m: int) -> UnitarityReport:
    up, down = basis_images(m)
    norms = [np.linalg.norm(up), np.linalg.norm(down)]
    inner = np.vdot(up, down)
    return UnitarityReport(m, float(max(abs(x - 1) for x in norms)), float(abs(inner)))


def isometry_defect(n: int, m: int) -> float:
    """``max |U^dag U - 1|`` for the cloner on the symmetric input basis."""
    u = isometry(n, m)
    return float(np.abs(u.conj().T @ u - np.eye(n + 1)).max())


def gram_defect(n: int, m: int, psis: list[Qubit]) -> float:
    """``max |<out_a|out_b> - <psi_a|psi_b>**n|`` over all pairs."""
    outs = np.column_stack([clone(p, n, m).matrix.reshape(-1) for p in psis])
    ins = np.column_stack([amplitudes(p).vector for p in psis])
    g_out = outs.conj().T @ outs
    g_in = (ins.conj().T @ ins) ** n
    return float(np.abs(g_out - g_in).max())
