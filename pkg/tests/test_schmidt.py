import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from statemaps.duality import TwistedChoiOperator, twisted_jamiolkowski_inverse
from statemaps.operator_core import ShapeError, permute_factors
from statemaps.positivity import DensityState
from statemaps.sampling import haar_unitary, isometry, rng_for, unit_vector
from statemaps.schmidt import (
    BipartiteVector,
    schmidt_measure,
    schmidt_rank_state,
    schmidt_rank_vector,
)

from conftest import seeds


def rank_m_vector(rng, m, d1=3, d2=3):
    u, v = isometry(rng, d1, m), isometry(rng, d2, m)
    c = rng.random(m) + 0.1
    return BipartiteVector(d1, d2, ((u * c) @ v.T).ravel())


def bell():
    return BipartiteVector(2, 2, np.array([1, 0, 0, 1]) / np.sqrt(2))


def test_product_vector_rank_one(rng):
    assert schmidt_rank_vector(BipartiteVector.product(unit_vector(rng, 3), unit_vector(rng, 2))) == 1


def test_two_term_vector(rng):
    u, v = isometry(rng, 3, 2), isometry(rng, 3, 2)
    phi = BipartiteVector(3, 3, np.kron(u[:, 0], v[:, 0]) + np.kron(u[:, 1], v[:, 1]))
    assert schmidt_rank_vector(phi.normalized()) == 2


def test_maximally_entangled_rank():
    assert schmidt_rank_vector(BipartiteVector(3, 3, np.eye(3).ravel() / np.sqrt(3))) == 3


def test_zero_vector_rejected():
    with pytest.raises(ValueError):
        schmidt_rank_vector(BipartiteVector(2, 2, np.zeros(4)))
    with pytest.raises(ShapeError):
        BipartiteVector(2, 2, np.zeros(3))


@given(st.integers(1, 3), seeds)
def test_schmidt_rank_local_unitary_invariance(m, seed):
    rng = rng_for(seed)
    phi = rank_m_vector(rng, m)
    u1, u2 = haar_unitary(rng, 3), haar_unitary(rng, 3)
    moved = BipartiteVector(3, 3, np.kron(u1, u2) @ phi.amplitudes)
    assert schmidt_rank_vector(moved) == schmidt_rank_vector(phi) == m


@given(st.integers(1, 3), seeds)
def test_pure_state_rank_is_m_squared(m, seed):
    phi = rank_m_vector(rng_for(seed), m)
    assert schmidt_rank_state(phi.projector(), tol=1e-10) == m * m


def test_product_state_rank_one(rng):
    phi = BipartiteVector.product(unit_vector(rng, 2), unit_vector(rng, 3))
    assert schmidt_rank_state(phi.projector()) == 1


def test_maximally_mixed_state_rank_brute_force():
    rho = TwistedChoiOperator(2, 2, np.eye(4) / 4)
    flat = permute_factors(rho.matrix.ravel(), (2, 2, 2, 2), (0, 2, 3, 1)).reshape(4, 4)
    expected = np.linalg.matrix_rank(flat, tol=1e-10 * np.linalg.norm(flat, 2))
    assert np.array_equal(twisted_jamiolkowski_inverse(rho).matrix, flat)
    assert schmidt_rank_state(rho) == expected


def test_measure_separable_pure(rng):
    phi = BipartiteVector.product(unit_vector(rng, 2), unit_vector(rng, 2))
    res = schmidt_measure(DensityState(phi.projector().matrix), 2, 2)
    assert res.value == 1.0
    assert res.shifted == 0.0


def test_measure_bell_state():
    res = schmidt_measure(DensityState(bell().projector().matrix), 2, 2)
    assert res.value == pytest.approx(2.0, abs=1e-12)


@given(st.integers(1, 3), seeds)
def test_measure_equals_rank_on_pure_states(m, seed):
    phi = rank_m_vector(rng_for(seed), m)
    res = schmidt_measure(DensityState(phi.projector().matrix), 3, 3)
    assert res.value == pytest.approx(schmidt_rank_vector(phi), abs=1e-12)


def test_measure_two_term_separable_mixture(rng):
    vecs = [np.kron(unit_vector(rng, 2), unit_vector(rng, 2)) for _ in range(2)]
    rho = sum(0.5 * np.outer(v, v.conj()) for v in vecs)
    res = schmidt_measure(DensityState(rho), 2, 2)
    assert res.value == pytest.approx(1.0, abs=1e-12)
    recon = sum(w * np.outer(v, v.conj()) for w, v in zip(res.weights, res.vectors.T))
    assert np.allclose(recon, rho, atol=1e-10)


def test_measure_bounds_and_monotone(rng):
    vecs = [unit_vector(rng, 9) for _ in range(3)]
    rho = sum(np.outer(v, v.conj()) for v in vecs) / 3
    values = [schmidt_measure(DensityState(rho), 3, 3, restarts=r).value for r in (1, 2, 4)]
    assert all(1.0 <= v <= 3.0 for v in values)
    assert values[0] >= values[1] >= values[2]


def test_measure_shape_and_args():
    rho = DensityState(np.eye(4) / 4)
    with pytest.raises(ShapeError):
        schmidt_measure(rho, 2, 3)
    with pytest.raises(ValueError):
        schmidt_measure(rho, 2, 2, mix_dim=2)
    with pytest.raises(ValueError):
        schmidt_measure(rho, 2, 2, restarts=0)


def test_bipartite_json_roundtrip(rng):
    phi = rank_m_vector(rng, 2)
    back = BipartiteVector.from_json(phi.to_json())
    assert np.array_equal(back.amplitudes, phi.amplitudes)
