import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qclone.bloch import Qubit, amplitudes, sample_uniform, su2_frame
from qclone.errors import CapacityError
from qclone.symspace import (
    coherent_amplitudes,
    computational_dicke,
    dicke_in_computational,
    embed,
    embed_operator,
    full_tensor_oracle,
    full_tensor_reduce_first,
    projector,
    reduce_one_qubit,
    rotation,
    rotation_batch,
    single_qubit_operator_tensor,
    swap_qubits,
    wigner_small_d,
)


def random_density(m, rng):
    g = rng.normal(size=(m + 1, m + 1)) + 1j * rng.normal(size=(m + 1, m + 1))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def test_dicke_north_pole_is_computational():
    for m in (1, 3, 5):
        for j in range(m + 1):
            np.testing.assert_allclose(dicke_in_computational(Qubit.up(), m, j),
                                       computational_dicke(m, j), atol=1e-15)


def test_dicke_single_qubit():
    psi = Qubit(0.7, 2.2)
    np.testing.assert_allclose(dicke_in_computational(psi, 1, 0), amplitudes(psi).vector, atol=1e-15)


def test_dicke_two_qubit_equator():
    psi = Qubit(math.pi / 2, 0)
    oracle = full_tensor_oracle(psi, 2, 0)
    projected = [np.vdot(embed(computational_dicke(2, k)), oracle) for k in range(3)]
    expected = [0.5, 1 / math.sqrt(2), 0.5]
    np.testing.assert_allclose(projected, expected, atol=1e-15)
    np.testing.assert_allclose(dicke_in_computational(psi, 2, 0), expected, atol=1e-15)


def test_oracle_example():
    v = full_tensor_oracle(Qubit.up(), 2, 1)
    np.testing.assert_allclose(v, [0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0], atol=1e-15)


def test_dicke_matches_oracle():
    rng = np.random.default_rng(5)
    for psi in sample_uniform(6, 50):
        m = int(rng.integers(1, 7))
        j = int(rng.integers(0, m + 1))
        a = embed(dicke_in_computational(psi, m, j))
        b = full_tensor_oracle(psi, m, j)
        assert abs(abs(np.vdot(a, b)) - 1) < 1e-12
        np.testing.assert_allclose(a, b, atol=1e-12)  # phases agree too


def test_oracle_orthonormal():
    psi = Qubit(1.2, 0.4)
    m = 5
    vs = np.column_stack([full_tensor_oracle(psi, m, j) for j in range(m + 1)])
    np.testing.assert_allclose(vs.conj().T @ vs, np.eye(m + 1), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, math.pi), st.floats(0, 2 * math.pi), st.integers(1, 40))
def test_rotated_family_orthonormal(theta, phi, m):
    r = rotation(Qubit(theta, phi), m)
    np.testing.assert_allclose(r.conj().T @ r, np.eye(m + 1), atol=1e-12)


def test_rotation_covariance_against_tensor_power():
    # U^{(x) m} acting on the embedded computational Dicke state
    for psi in sample_uniform(8, 5):
        u = su2_frame(psi)
        for m in (2, 4):
            um = reduce(np.kron, [u] * m)
            for j in range(m + 1):
                np.testing.assert_allclose(um @ embed(computational_dicke(m, j)),
                                           embed(dicke_in_computational(psi, m, j)), atol=1e-12)


def test_wigner_d_spin_half():
    t = 0.83
    np.testing.assert_allclose(wigner_small_d(1, t),
                               [[math.cos(t / 2), -math.sin(t / 2)], [math.sin(t / 2), math.cos(t / 2)]],
                               atol=1e-15)


def test_wigner_d_large_m_unitary():
    d = wigner_small_d(256, 1.9)
    np.testing.assert_allclose(d @ d.T, np.eye(257), atol=1e-11)


def test_rotation_batch_matches_single():
    t = np.array([0.1, 1.3, 2.9])
    p = np.array([0.0, 4.0, 1.1])
    batch = rotation_batch(t, p, 6)
    for i in range(3):
        np.testing.assert_allclose(batch[i], rotation(Qubit(t[i], p[i]), 6), atol=1e-14)


def test_coherent_amplitudes_match_rotation():
    psi = Qubit(1.0, 0.3)
    a = amplitudes(psi)
    v = coherent_amplitudes(np.array([a.up]), np.array([a.down]), 7)[0]
    np.testing.assert_allclose(v, dicke_in_computational(psi, 7, 0), atol=1e-14)


def test_index_and_capacity_errors():
    with pytest.raises(IndexError):
        dicke_in_computational(Qubit.up(), 3, 4)
    with pytest.raises(IndexError):
        full_tensor_oracle(Qubit.up(), 3, -1)
    with pytest.raises(CapacityError):
        full_tensor_oracle(Qubit.up(), 13, 0)


# -- partial trace ----------------------------------------------------------------

def test_reduce_examples():
    np.testing.assert_allclose(reduce_one_qubit(projector(computational_dicke(3, 0)), 3),
                               [[1, 0], [0, 0]], atol=1e-15)
    np.testing.assert_allclose(reduce_one_qubit(projector(computational_dicke(2, 1)), 2),
                               np.eye(2) / 2, atol=1e-15)


def test_reduce_shape_error():
    with pytest.raises(ValueError):
        reduce_one_qubit(np.eye(3) / 3, 3)


def test_reduce_six_qubits_against_full_tensor():
    rng = np.random.default_rng(0)
    rho = random_density(6, rng)
    full = full_tensor_reduce_first(embed_operator(rho))
    np.testing.assert_allclose(reduce_one_qubit(rho, 6), full, atol=1e-12)


@pytest.mark.parametrize("m", range(1, 9))
def test_reduce_closed_form_equals_oracle(m):
    rng = np.random.default_rng(100 + m)
    for _ in range(5):
        rho = random_density(m, rng)
        closed = reduce_one_qubit(rho, m)
        full = full_tensor_reduce_first(embed_operator(rho))
        assert np.abs(closed - full).max() < 1e-12
        assert abs(np.trace(closed) - 1) < 1e-12
        assert np.linalg.eigvalsh(closed).min() >= -1e-10


def test_reduce_is_qubit_symmetric():
    # any qubit gives the same marginal for a symmetric state
    rng = np.random.default_rng(3)
    rho = embed_operator(random_density(4, rng))
    first = full_tensor_reduce_first(rho)
    perm = np.column_stack([swap_qubits(col, 0, 2) for col in np.eye(16)])
    third = full_tensor_reduce_first(perm @ rho @ perm.T)
    np.testing.assert_allclose(first, third, atol=1e-12)


def test_operator_tensor_against_full_tensor():
    m = 4
    t = single_qubit_operator_tensor(m)
    ops = {(a, b): np.kron(np.outer(np.eye(2)[a], np.eye(2)[b]), np.eye(2 ** (m - 1)))
           for a in range(2) for b in range(2)}
    for kp in range(m + 1):
        for k in range(m + 1):
            for ip in range(2):
                for i in range(2):
                    ref = np.vdot(embed(computational_dicke(m, kp)), ops[ip, i] @ embed(computational_dicke(m, k)))
                    assert abs(t[kp, ip, i, k] - ref) < 1e-12


def test_projector_properties():
    v = dicke_in_computational(Qubit(0.4, 1.0), 5, 2)
    p = projector(v)
    assert abs(np.trace(p) - 1) < 1e-12
    np.testing.assert_allclose(p @ p, p, atol=1e-12)
    w = dicke_in_computational(Qubit(0.4, 1.0), 5, 3)
    assert np.linalg.norm(p @ w) < 1e-14
