"""Upper bound on cloning fidelity from the eigenvalues of the fidelity matrix A.

A general symmetric-output machine sends the input basis state ``|j>`` to
``sum_k |D_k> (x) |R_jk>``. Its average single-clone fidelity is the bilinear
form ``sum <R_j'k'|R_jk> A[(j',k'), (j,k)]`` and unitarity fixes the trace
``sum_jk <R_jk|R_jk> = n + 1``. Maximizing under that one constraint gives
``F <= (n + 1) * lambda_max(A)``.

Composite labels are packed row-major: ``index = j * (m + 1) + k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, ValidationError
from .qcm import fidelity_formula, isometry
from .symspace import coherent_amplitudes, reduce_one_qubit, single_qubit_operator_tensor

#: Quadrature grid: Gauss-Legendre nodes in cos(theta) by trapezoid nodes in phi.
QUAD_THETA_NODES = 64
QUAD_PHI_NODES = 128

UP, DOWN = 0, 1


@lru_cache(maxsize=None)
def _sphere_grid(n_theta: int = QUAD_THETA_NODES, n_phi: int = QUAD_PHI_NODES):
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    # dOmega = dphi dcos(theta) / (4 pi)
    weights = np.outer(wx, np.full(n_phi, 2 * math.pi / n_phi)).ravel() / (4 * math.pi)
    xx, pp = np.meshgrid(x, phi, indexing="ij")
    up = np.sqrt((1 + xx.ravel()) / 2) + 0j
    down = np.exp(1j * pp.ravel()) * np.sqrt((1 - xx.ravel()) / 2)
    return up, down, weights


@lru_cache(maxsize=None)
def haar_kernel(n: int) -> np.ndarray:
    """``K[j', i', i, j] = integral of conj(O_j') psi_i' conj(psi_i) O_j dOmega``.

    ``O_j`` is the amplitude of ``|n psi>`` on the input Dicke state ``j`` and
    ``psi_i`` the amplitude of the single qubit ``psi``; for ``n = 1`` this is
    the fourth moment of the rotation-matrix row ``O_{up, j}``.
    """
    up, down, w = _sphere_grid()
    o = coherent_amplitudes(up, down, n)
    psi = np.column_stack([up, down])
    k = np.einsum("q,qa,qb,qc,qd->abcd", w, o.conj(), psi, psi.conj(), o)
    k.setflags(write=False)
    return k


def haar_fourth_moment(jp: int, ip: int, i: int, j: int) -> complex:
    """Sphere average of ``conj(O_j') O_i' conj(O_i) O_j`` by quadrature (0 = up, 1 = down)."""
    return complex(haar_kernel(1)[jp, ip, i, j])


def haar_fourth_moment_exact(jp: int, ip: int, i: int, j: int) -> Fraction:
    """Closed form ``(delta_{j'i'} delta_{ij} + delta_{j'j} delta_{i'i}) / 6``."""
    return Fraction(int(jp == ip and i == j) + int(jp == j and ip == i), 6)


def single_clone_overlap_trace(kp: int, ip: int, i: int, k: int, m: int) -> float:
    """``<D_k'| (|i'><i| (x) 1) |D_k>`` via the one-qubit reduction of ``|D_k><D_k'|``."""
    if not (0 <= k <= m and 0 <= kp <= m):
        raise IndexError(f"Dicke labels must lie in 0..{m}")
    e = np.zeros((m + 1, m + 1))
    e[k, kp] = 1.0
    return float(reduce_one_qubit(e, m)[i, ip].real)


@dataclass(frozen=True)
class AMatrix:
    n: int
    m: int
    entries: np.ndarray

    def index(self, j: int, k: int) -> int:
        return j * (self.m + 1) + k


def build_A_general(n: int, m: int) -> AMatrix:
    if n < 1 or m < 1:
        raise DomainError(f"need n, m >= 1, got n={n}, m={m}")
    kern = haar_kernel(n)
    t = single_qubit_operator_tensor(m)
    a = np.einsum("abcd,ebcf->aedf", kern, t)
    dim = (n + 1) * (m + 1)
    return AMatrix(n, m, a.reshape(dim, dim))


def build_A(m: int) -> AMatrix:
    """Fidelity matrix of the 1 -> m problem, size ``2(m+1)``."""
    if m < 2:
        raise DomainError(f"need m >= 2, got {m}")
    return build_A_general(1, m)


def closed_form_block(m: int, shift: int) -> np.ndarray:
    """Closed-form block of A on the labels with ``k - j = shift``.

    Interior shifts ``0 <= K < m`` couple ``(up, K)`` with ``(down, K + 1)``;
    the edge shifts ``-1`` and ``m`` leave a single label.
    """
    if shift == -1:
        return np.array([[1 / 6]])
    if shift == m:
        return np.array([[1 / 6]])
    if not 0 <= shift < m:
        raise IndexError(f"shift {shift} outside -1..{m}")
    kk = shift
    off = math.sqrt((m - kk) * (kk + 1))
    return np.array([[2 * m - kk, off], [off, m + kk + 1]]) / (6 * m)


def block_labels(m: int, shift: int) -> list[int]:
    labels = [(UP, shift), (DOWN, shift + 1)]
    return [j * (m + 1) + k for j, k in labels if 0 <= k <= m]


def assembled_block(a: AMatrix, shift: int) -> np.ndarray:
    idx = block_labels(a.m, shift)
    return a.entries[np.ix_(idx, idx)]


def block_structure_defect(a: AMatrix) -> float:
    """Largest entry of A that couples labels with different ``k - j``."""
    n, m = a.n, a.m
    j = np.repeat(np.arange(n + 1), m + 1)
    k = np.tile(np.arange(m + 1), n + 1)
    shift = k - j
    mask = shift[:, None] != shift[None, :]
    return float(np.abs(a.entries[mask]).max()) if mask.any() else 0.0


def _entries(a) -> np.ndarray:
    return a.entries if isinstance(a, AMatrix) else np.asarray(a)


def lambda_max(a, tol: float = 1e-12) -> float:
    mat = _entries(a)
    defect = np.abs(mat - mat.conj().T).max()
    if defect > tol * max(1.0, np.abs(mat).max()):
        raise ValidationError(f"matrix is not Hermitian (defect {defect:.3e})")
    return float(np.linalg.eigvalsh(mat)[-1])


def spectrum(a) -> np.ndarray:
    mat = _entries(a)
    return np.linalg.eigvalsh((mat + mat.conj().T) / 2)


@dataclass(frozen=True)
class BoundReport:
    n: int
    m: int
    lambda_max: float
    bound: float
    achieved: Fraction
    gap: float


def optimal_bound(n: int, m: int) -> BoundReport:
    if n < 1 or m <= n:
        raise DomainError(f"need 1 <= n < m, got n={n}, m={m}")
    lam = lambda_max(build_A_general(n, m))
    bound = (n + 1) * lam
    achieved = fidelity_formula(n, m)
    return BoundReport(n, m, lam, bound, achieved, bound - float(achieved))


# -- the optimal machine in the A-matrix picture ------------------------------------

def machine_states(n: int, m: int) -> np.ndarray:
    """Final ancilla states of the optimal cloner, row ``j*(m+1)+k`` holding ``R_jk``."""
    u = isometry(n, m)
    return u.T.reshape((n + 1) * (m + 1), -1)


def fidelity_of_states(a: AMatrix, r: np.ndarray) -> float:
    """``sum <R_j'k'|R_jk> A[(j'k'), (jk)]``."""
    return float(np.real(np.trace(r.conj().T @ a.entries @ r)))


def constraint_gram(r: np.ndarray, n: int, m: int) -> np.ndarray:
    """``G[j', j] = sum_k <R_j'k|R_jk>``; unitarity demands the identity."""
    blocks = r.reshape(n + 1, m + 1, -1)
    return np.einsum("akl,bkl->ab", blocks.conj(), blocks)


def eigen_residual(a: AMatrix, r: np.ndarray) -> float:
    """``max |(A - lambda_max) R|`` over all components of the machine states."""
    lam = lambda_max(a)
    return float(np.abs(a.entries @ r - lam * r).max())
