import numpy as np
import pytest
from hypothesis import given, strategies as st

from tempcert.exceptions import DimensionError, NumericError, PreconditionError, ValidationError
from tempcert.numerics import haar_unitary
from tempcert.observables import build_t, build_z, canonical_quartet
from tempcert.sequential import (
    ALL_PAIRS,
    JointTable,
    Povm,
    conditional_second,
    first_marginal,
    luders_joint,
    maximally_mixed,
    povm_from_observable,
    projectivity_check,
    pure_state,
    quartet_tables,
    random_povm,
    repeatability_residuals,
    smoothed_povm,
)


def test_luders_z2_then_z2_is_diagonal():
    m = povm_from_observable(build_z(2))
    t = luders_joint(maximally_mixed(2), m, m)
    assert np.allclose(t.probs, np.eye(2) / 2)


def test_luders_z_then_t_d2_uniform():
    t = luders_joint(maximally_mixed(2), povm_from_observable(build_z(2)), povm_from_observable(build_t(2)))
    assert np.allclose(t.probs, 0.25)


def test_luders_pure_state_first_marginal():
    psi = np.array([np.cos(0.3), np.sin(0.3)])
    m = povm_from_observable(build_z(2))
    t = luders_joint(pure_state(psi), m, m)
    assert np.allclose(first_marginal(t), [np.cos(0.3) ** 2, np.sin(0.3) ** 2])


def test_luders_dimension_mismatch():
    with pytest.raises(DimensionError):
        luders_joint(maximally_mixed(3), povm_from_observable(build_z(2)), povm_from_observable(build_z(2)))


def test_kraus_unitaries_change_post_state():
    z = build_z(2)
    x = np.array([[0, 1], [1, 0]], complex)
    flipped = povm_from_observable(z, kraus_unitaries=(x, x))
    t = luders_joint(maximally_mixed(2), flipped, povm_from_observable(z))
    assert np.allclose(t.probs, [[0, 0.5], [0.5, 0]])


def test_joint_table_checked():
    assert JointTable.checked([[0.5, -1e-12], [0.0, 0.5]]).probs.min() == 0.0
    with pytest.raises(NumericError):
        JointTable.checked([[0.6, -0.1], [0.0, 0.5]])
    with pytest.raises(NumericError):
        JointTable.checked([[0.5, 0.0], [0.0, 0.4]])
    with pytest.raises(DimensionError):
        JointTable.checked([[1.0, 0.0]])


def test_conditional_zero_marginal_flagged():
    t = JointTable(np.array([[1.0, 0.0], [0.0, 0.0]]))
    cond, flagged = conditional_second(t)
    assert list(flagged) == [False, True]
    assert np.allclose(cond[1], 0.5)


def test_povm_validate():
    with pytest.raises(ValidationError):
        Povm((np.eye(2), np.eye(2))).validate()
    povm_from_observable(build_t(3)).validate()


def test_repeatability_requires_mixed_state():
    m = povm_from_observable(build_z(2))
    with pytest.raises(PreconditionError):
        repeatability_residuals(m, pure_state([1, 0]))


def test_projective_t4_passes_both_criteria():
    r = projectivity_check(povm_from_observable(build_t(4)))
    assert r.projective and r.idempotent and r.criteria_agree


def test_smoothed_d2_fails_both_criteria():
    r = projectivity_check(smoothed_povm(build_z(2), 0.95))
    assert not r.projective and not r.idempotent
    # p(a) - p(a, a) = 1/2 - Tr[M_a^2]/2 = (1 - lam^2)/4
    assert max(r.repeatability_residuals) == pytest.approx(0.024375, rel=1e-6)


def test_smoothed_z3_residual():
    res = repeatability_residuals(smoothed_povm(build_z(3), 0.9), maximally_mixed(3))
    assert res.max() > 0.01


@given(st.integers(2, 4), st.integers(1, 5), st.booleans(), st.integers(0, 2**32))
def test_criterion_matches_idempotency(d, D, projective, seed):
    m = random_povm(d, D, np.random.default_rng(seed), projective)
    assert projectivity_check(m).criteria_agree


@given(st.integers(2, 4), st.integers(0, 2**32))
def test_tables_normalised_and_conditionals_sum_to_one(d, seed):
    q = canonical_quartet(d).conjugated(haar_unitary(d, seed))
    tables = quartet_tables(q, maximally_mixed(d))
    assert set(tables) == set(ALL_PAIRS)
    for t in tables.values():
        assert t.probs.sum() == pytest.approx(1.0, abs=1e-12)
        cond, _ = conditional_second(t)
        assert np.allclose(cond.sum(axis=1), 1.0)
