"""Symmetric (Dicke) subspace of ``m`` qubits.

Vectors are length ``m + 1`` complex arrays over the computational Dicke basis
``|D_k> = |(m-k) up, k down>`` (``k`` counts down spins), and density matrices
are dense ``(m+1, m+1)`` arrays over the same basis. Brute-force routines that
work in the full ``2**m`` tensor space are kept here as verification oracles.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

from .bloch import Qubit, amplitudes, orthogonal
from .errors import CapacityError

#: Largest qubit count the full-tensor oracle will expand.
ORACLE_MAX_QUBITS = 12


@lru_cache(maxsize=None)
def _jy_eigensystem(m: int) -> tuple[np.ndarray, np.ndarray]:
    # J+ |D_k> = sqrt(k (m - k + 1)) |D_{k-1}>
    k = np.arange(1, m + 1)
    jplus = np.zeros((m + 1, m + 1))
    jplus[k - 1, k] = np.sqrt(k * (m - k + 1.0))
    jy = (jplus - jplus.T) / 2j
    vals, vecs = np.linalg.eigh(jy)
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return vals, vecs


def wigner_small_d(m: int, theta: float) -> np.ndarray:
    """Real matrix ``exp(-i theta J_y)`` in the spin-``m/2`` Dicke basis.

    Computed from the eigendecomposition of ``J_y`` rather than the
    factorial sum, which cancels badly once ``m`` reaches the hundreds.
    """
    vals, vecs = _jy_eigensystem(m)
    d = (vecs * np.exp(-1j * theta * vals)) @ vecs.conj().T
    return d.real


def rotation(psi: Qubit, m: int) -> np.ndarray:
    """Action of ``su2_frame(psi)`` on the symmetric subspace of ``m`` qubits.

    Column ``j`` is ``|(m-j) psi, j psi_perp>``. The frame equals
    ``Rz(phi) Ry(theta) Rz(-phi)``, so entry ``(k, j)`` is
    ``exp(i phi (k - j)) d_kj(theta)``.
    """
    k = np.arange(m + 1)
    phase = np.exp(1j * psi.phi * k)
    return phase[:, None] * wigner_small_d(m, psi.theta) * phase.conj()[None, :]


def rotation_batch(theta: np.ndarray, phi: np.ndarray, m: int) -> np.ndarray:
    """Stack of :func:`rotation` matrices, shape ``(batch, m+1, m+1)``."""
    vals, vecs = _jy_eigensystem(m)
    theta = np.asarray(theta, dtype=float)
    phase_t = np.exp(-1j * theta[:, None] * vals[None, :])
    d = np.einsum("ka,ba,ja->bkj", vecs, phase_t, vecs.conj()).real
    k = np.arange(m + 1)
    phase = np.exp(1j * np.asarray(phi, dtype=float)[:, None] * k[None, :])
    return phase[:, :, None] * d * phase.conj()[:, None, :]


def dicke_in_computational(psi: Qubit, m: int, j: int) -> np.ndarray:
    if not 0 <= j <= m:
        raise IndexError(f"Dicke index j={j} outside 0..{m}")
    return rotation(psi, m)[:, j]


def computational_dicke(m: int, k: int) -> np.ndarray:
    v = np.zeros(m + 1, dtype=complex)
    v[k] = 1.0
    return v


def coherent_amplitudes(up: np.ndarray, down: np.ndarray, m: int) -> np.ndarray:
    """Dicke amplitudes of ``|m phi>`` for a batch of single-qubit states.

    Returns shape ``(batch, m+1)`` with entries ``sqrt(C(m,k)) up**(m-k) down**k``.
    """
    k = np.arange(m + 1)
    binom = np.sqrt([math.comb(m, int(x)) for x in k])
    return binom * up[:, None] ** (m - k) * down[:, None] ** k


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


# -- single-qubit partial trace ------------------------------------------------

def reduce_one_qubit(rho: np.ndarray, m: int) -> np.ndarray:
    """Reduced state of one qubit of a symmetric ``m``-qubit density matrix.

    Uses ``|D_k> = sqrt((m-k)/m) |up>|D'_k> + sqrt(k/m) |down>|D'_{k-1}>``
    with ``D'`` the Dicke states of the remaining ``m - 1`` qubits.
    """
    rho = np.asarray(rho)
    if rho.shape != (m + 1, m + 1):
        raise ValueError(f"expected a {(m + 1, m + 1)} matrix, got {rho.shape}")
    k = np.arange(m + 1)
    diag = np.diagonal(rho)
    up = np.sum(diag * (m - k)) / m
    down = np.sum(diag * k) / m
    kk = np.arange(m)
    coupling = np.sqrt((m - kk) * (kk + 1.0)) / m
    # <up| rho_1 |down> collects rho[k, k+1]
    ud = np.sum(np.diagonal(rho, offset=1) * coupling)
    du = np.sum(np.diagonal(rho, offset=-1) * coupling)
    return np.array([[up, ud], [du, down]], dtype=complex)


def single_qubit_operator_tensor(m: int) -> np.ndarray:
    """Tensor ``T[k', i', i, k] = <D_k'| (|i'><i| (x) 1) |D_k>``.

    Equivalently ``T[k', i', i, k] = reduce_one_qubit(|D_k><D_k'|)[i, i']``.
    """
    t = np.zeros((m + 1, 2, 2, m + 1))
    k = np.arange(m + 1)
    t[k, 0, 0, k] = (m - k) / m
    t[k, 1, 1, k] = k / m
    kk = np.arange(m)
    coupling = np.sqrt((m - kk) * (kk + 1.0)) / m
    # |up><down| maps D_{k+1} onto D_k
    t[kk, 0, 1, kk + 1] = coupling
    t[kk + 1, 1, 0, kk] = coupling
    return t


# -- full tensor oracles -------------------------------------------------------

def _guard(m: int) -> None:
    if m > ORACLE_MAX_QUBITS:
        raise CapacityError(f"full-tensor oracle limited to {ORACLE_MAX_QUBITS} qubits, got {m}")


def full_tensor_oracle(psi: Qubit, m: int, j: int) -> np.ndarray:
    """``|(m-j) psi, j psi_perp>`` built by explicit symmetrization in ``2**m`` dims."""
    _guard(m)
    if not 0 <= j <= m:
        raise IndexError(f"Dicke index j={j} outside 0..{m}")
    a, b = amplitudes(psi).vector, orthogonal(psi).vector
    out = np.zeros(2**m, dtype=complex)
    for placement in itertools.combinations(range(m), j):
        chosen = set(placement)
        term = np.ones(1, dtype=complex)
        for q in range(m):
            term = np.kron(term, b if q in chosen else a)
        out += term
    return out / math.sqrt(math.comb(m, j))


def embed(v: np.ndarray) -> np.ndarray:
    """Map a Dicke-basis vector into the ``2**m`` computational space.

    Qubit 0 is the most significant bit; bit value 1 means down.
    """
    v = np.asarray(v, dtype=complex)
    m = v.size - 1
    _guard(m)
    idx = np.arange(2**m)
    weight = np.array([bin(i).count("1") for i in idx])
    return v[weight] / np.sqrt([math.comb(m, int(w)) for w in weight])


def embed_operator(rho: np.ndarray) -> np.ndarray:
    """Embed a Dicke-basis operator into the full tensor space."""
    m = rho.shape[0] - 1
    _guard(m)
    basis = np.column_stack([embed(computational_dicke(m, k)) for k in range(m + 1)])
    return basis @ rho @ basis.conj().T


def full_tensor_reduce_first(rho_full: np.ndarray) -> np.ndarray:
    """Brute-force partial trace of a ``2**m`` operator onto qubit 0."""
    dim = rho_full.shape[0]
    r = np.asarray(rho_full).reshape(2, dim // 2, 2, dim // 2)
    return np.einsum("iaja->ij", r)


def swap_qubits(state: np.ndarray, a: int, b: int) -> np.ndarray:
    """Exchange qubits ``a`` and ``b`` of a ``2**m`` state vector."""
    m = int(round(math.log2(state.size)))
    t = np.asarray(state).reshape((2,) * m)
    return np.swapaxes(t, a, b).reshape(-1)
