import numpy as np
import pytest
from hypothesis import given

from statemaps.channels import kraus_map, make_map, zero_map
from statemaps.duality import (
    ChoiOperator,
    SuperOperator,
    TwistedChoiOperator,
    check_intertwining,
    choi_from_json,
    from_lambda_tensor,
    gl_action,
    jamiolkowski,
    jamiolkowski_inverse,
    lambda_asymmetry,
    lambda_tensor,
    superoperator_hs_inner,
    twisted_jamiolkowski,
    twisted_jamiolkowski_inverse,
    verify_characterizing_identity,
)
from statemaps.operator_core import ShapeError, hs_inner, norm, permute_factors
from statemaps.sampling import ginibre, haar_unitary, rng_for

from conftest import brute_force_j, brute_force_jt, random_superop, seeds, superops


def test_superoperator_shape_checked():
    with pytest.raises(ShapeError):
        SuperOperator(2, 2, np.zeros((4, 3)))


def test_superoperator_is_read_only(rng):
    phi = random_superop(rng, 2, 2)
    with pytest.raises(ValueError):
        phi.matrix[0, 0] = 1


def test_j_of_make_map_is_outer_product(rng):
    a, b = ginibre(rng, 2, 3), ginibre(rng, 2, 3)
    c = jamiolkowski(make_map(a, b))
    assert np.linalg.norm(c.matrix - np.outer(a.ravel(), b.ravel().conj())) <= 1e-13


def test_trivial_dims_unchanged():
    phi = SuperOperator(1, 1, np.array([[2 - 1j]]))
    assert np.array_equal(jamiolkowski(phi).matrix, phi.matrix)
    assert np.array_equal(twisted_jamiolkowski(phi).matrix, phi.matrix)


def test_j_against_permute_factors_oracle(rng):
    d1, d2 = 2, 3
    phi = random_superop(rng, d2, d1)
    oracle = permute_factors(phi.matrix.ravel(), (d1, d1, d2, d2), (0, 2, 1, 3)).reshape(d1 * d2, d1 * d2)
    assert np.array_equal(jamiolkowski(phi).matrix, oracle)
    assert np.array_equal(jamiolkowski(phi).matrix, brute_force_j(phi.matrix, d1, d2))


def test_jt_against_permute_factors_oracle(rng):
    d1, d2 = 2, 3
    phi = random_superop(rng, d2, d1)
    oracle = permute_factors(phi.matrix.ravel(), (d1, d1, d2, d2), (0, 3, 1, 2)).reshape(d1 * d2, d1 * d2)
    assert np.array_equal(twisted_jamiolkowski(phi).matrix, oracle)
    assert np.array_equal(twisted_jamiolkowski(phi).matrix, brute_force_jt(phi.matrix, d1, d2))


@given(superops())
def test_roundtrips_bit_exact(phi):
    back = jamiolkowski_inverse(jamiolkowski(phi))
    assert back.matrix.tobytes() == phi.matrix.tobytes()
    back = twisted_jamiolkowski_inverse(twisted_jamiolkowski(phi))
    assert back.matrix.tobytes() == phi.matrix.tobytes()


def test_inverse_of_unit_projector_is_kraus_map(rng):
    a = ginibre(rng, 2, 3)
    a /= np.linalg.norm(a)
    c = ChoiOperator(2, 3, np.outer(a.ravel(), a.ravel().conj()))
    assert np.allclose(jamiolkowski_inverse(c).matrix, kraus_map(a).matrix, atol=1e-15)


def test_inverse_of_identity_is_trace_times_identity(rng):
    d1, d2 = 2, 3
    phi = jamiolkowski_inverse(ChoiOperator(d1, d2, np.eye(d1 * d2)))
    oracle = permute_factors(np.eye(d1 * d2).ravel(), (d1, d2, d1, d2), (0, 2, 1, 3)).reshape(d1 * d1, d2 * d2)
    assert np.array_equal(phi.matrix, oracle)
    rho = ginibre(rng, d2, d2)
    assert np.allclose(phi.apply(rho), np.trace(rho) * np.eye(d1))


@given(superops(), superops())
def test_unitarity(phi, psi):
    if (phi.dim_in, phi.dim_out) != (psi.dim_in, psi.dim_out):
        psi = random_superop(rng_for(0), phi.dim_in, phi.dim_out)
    lhs = hs_inner(jamiolkowski(phi).matrix, jamiolkowski(psi).matrix)
    rhs = superoperator_hs_inner(phi, psi)
    assert abs(lhs - rhs) <= 1e-13 * norm(phi.matrix) * norm(psi.matrix)


@given(superops(max_dim=3), seeds)
def test_characterizing_identities(phi, seed):
    assert verify_characterizing_identity(phi, samples=20, seed=seed) <= 1e-12


def test_characterizing_identity_zero_map():
    assert verify_characterizing_identity(zero_map(2, 3), samples=10) == 0.0


def test_corrupted_reshuffle_is_detected(rng):
    phi = random_superop(rng, 2, 2)

    def wrong(p):
        m = p.matrix.reshape(2, 2, 2, 2).transpose(0, 3, 1, 2).reshape(4, 4)
        return ChoiOperator(2, 2, m)

    assert verify_characterizing_identity(phi, samples=50, j_map=wrong) > 0.1


def test_lambda_tensor_roundtrip(rng):
    phi = random_superop(rng, 3, 2)
    lam = lambda_tensor(phi)
    assert lam[1, 0, 2, 1] == phi.matrix[1 * 2 + 0, 1 * 3 + 2]
    assert np.array_equal(from_lambda_tensor(lam).matrix, phi.matrix)


def test_gl_action_identity(rng):
    t = ginibre(rng, 4, 9).reshape(2, 2, 3, 3)
    i2, i3 = np.eye(2), np.eye(3)
    assert np.array_equal(gl_action(t, i2, i2, i3, i3), t)


def test_gl_action_simple_tensor(rng):
    x1, x2 = ginibre(rng, 2, 1).ravel(), ginibre(rng, 2, 1).ravel()
    y1, y2 = ginibre(rng, 3, 1).ravel(), ginibre(rng, 3, 1).ravel()
    a, ap, b, bp = ginibre(rng, 2, 2), ginibre(rng, 2, 2), ginibre(rng, 3, 3), ginibre(rng, 3, 3)
    t = np.einsum("i,j,a,b->ijab", x1, x2.conj(), y1, y2.conj())
    want = np.einsum("i,j,a,b->ijab", a @ x1, (ap @ x2).conj(), b @ y1, (bp @ y2).conj())
    assert np.allclose(gl_action(t, a, ap, b, bp), want, atol=1e-12)


def test_gl_action_shape_mismatch(rng):
    with pytest.raises(ShapeError):
        gl_action(np.zeros((2, 2, 3, 3)), np.eye(2), np.eye(2), np.eye(2), np.eye(3))


def test_gl_action_unitary_preserves_norm(rng):
    t = ginibre(rng, 4, 9).reshape(2, 2, 3, 3)
    us = [haar_unitary(rng, d) for d in (2, 2, 3, 3)]
    assert abs(np.linalg.norm(gl_action(t, *us)) - np.linalg.norm(t)) <= 1e-12


def test_intertwining_identities_exact(rng):
    phi = random_superop(rng, 3, 2)
    assert check_intertwining(np.eye(2), np.eye(2), np.eye(3), np.eye(3), phi) == 0.0


@given(seeds)
def test_intertwining_random_invertible(seed):
    rng = rng_for(seed)
    phi = random_superop(rng, 2, 2)
    quad = [ginibre(rng, 2, 2) for _ in range(4)]
    assert check_intertwining(*quad, phi) <= 1e-12 * max(1.0, norm(phi.matrix) * np.prod([norm(q, "operator") for q in quad]))


def test_intertwining_unitary_preserves_norm(rng):
    phi = random_superop(rng, 2, 2)
    us = [haar_unitary(rng, 2) for _ in range(4)]
    assert check_intertwining(*us, phi) <= 1e-12
    moved = from_lambda_tensor(gl_action(lambda_tensor(phi), *us))
    assert abs(norm(jamiolkowski(moved).matrix) - norm(phi.matrix)) <= 1e-12


def test_lambda_symmetry_iff_hermitian_choi(rng):
    a = ginibre(rng, 2, 3)
    herm = kraus_map(a)
    assert lambda_asymmetry(herm) <= 1e-14
    c = jamiolkowski(herm).matrix
    assert np.allclose(c, c.conj().T)
    other = make_map(a, ginibre(rng, 2, 3))
    assert lambda_asymmetry(other) > 1e-3


def test_choi_json_twisted_flag(rng):
    phi = random_superop(rng, 2, 2)
    jt = twisted_jamiolkowski(phi)
    back = choi_from_json(jt.to_json())
    assert isinstance(back, TwistedChoiOperator)
    assert np.array_equal(back.matrix, jt.matrix)
    assert not choi_from_json(jamiolkowski(phi).to_json()).twisted
    assert SuperOperator.from_json(phi.to_json()).matrix.tobytes() == phi.matrix.tobytes()
