import numpy as np
import pytest
from hypothesis import given, strategies as st

from tempcert.exceptions import DomainError, NonUniformOverlapError, PreconditionError
from tempcert.numerics import haar_unitary, hs_norm
from tempcert.observables import build_t, build_z, canonical_quartet, observable_from_projectors
from tempcert.randomness import (
    averaged_pair_entropy,
    entropy_closed_form,
    entropy_sweep,
    overlap_matrix,
    pair_entropy,
    t_eigenvector,
    zt_overlap,
)
from tempcert.sequential import first_marginal, luders_joint, maximally_mixed, povm_from_observable


def test_same_observable_gives_zero():
    q = canonical_quartet(3)
    assert pair_entropy(q.a1, q.a1) == 0.0


def test_binary_entropy_one_bit():
    q = canonical_quartet(2)
    assert pair_entropy(q.a1, q.a2) == pytest.approx(1.0, abs=1e-12)


def test_closed_form_values():
    assert entropy_closed_form(2) == pytest.approx(1.0, abs=1e-12)
    assert entropy_closed_form(3) == pytest.approx(2 * np.log2(3) - 16 / 9, abs=1e-12)
    assert entropy_closed_form(3) == pytest.approx(1.3921, abs=1e-4)


@pytest.mark.parametrize("d", range(2, 9))
def test_closed_form_matches_overlaps(d):
    q = canonical_quartet(d)
    h = entropy_closed_form(d, check=True)
    for i, j in ((1, 2), (2, 1), (3, 4), (4, 3)):
        assert abs(pair_entropy(q[i], q[j]) - h) < 1e-9


def test_zt_overlap_values():
    assert all(zt_overlap(a, b, 2) == pytest.approx(0.5) for a in range(2) for b in range(2))
    vals = sorted(zt_overlap(0, b, 3) for b in range(3))
    assert vals == pytest.approx([1 / 9, 4 / 9, 4 / 9])


@pytest.mark.parametrize("d", range(2, 13))
def test_zt_overlap_rows_sum_to_one(d):
    for a in range(d):
        assert sum(zt_overlap(a, b, d) for b in range(d)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("d", range(2, 13))
def test_overlap_formula_matches_eigenvectors(d):
    t = build_t(d).unitary
    w = np.exp(2j * np.pi / d)
    for r in range(d):
        v = t_eigenvector(r, d)
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
        assert hs_norm((t @ v - w**r * v)[:, None]) < 1e-9
        for a in range(d):
            assert abs(abs(v[a]) ** 2 - zt_overlap(a, r, d)) < 1e-9


@pytest.mark.parametrize("d", range(2, 9))
def test_overlap_formula_matches_spectral_projectors(d):
    o = overlap_matrix(build_z(d), build_t(d))
    formula = np.array([[zt_overlap(a, b, d) for b in range(d)] for a in range(d)])
    assert np.max(np.abs(o - formula)) < 1e-9


def test_domain_errors():
    with pytest.raises(DomainError):
        zt_overlap(3, 0, 3)
    with pytest.raises(DomainError):
        t_eigenvector(-1, 3)
    with pytest.raises(DomainError):
        entropy_sweep(1, 4)
    with pytest.raises(DomainError):
        entropy_sweep(4, 33)


def test_rank_one_required():
    p = np.diag([1.0, 1.0, 0.0])
    o = observable_from_projectors([p, np.eye(3) - p], 2)
    with pytest.raises(PreconditionError):
        pair_entropy(o, o)


def test_outcome_dependence_rejected():
    # second basis is rotated only inside one block, so rows differ
    c, s = np.cos(0.4), np.sin(0.4)
    u = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    z = build_z(3)
    rotated = observable_from_projectors([u @ p @ u.T for p in z.projectors], 3)
    with pytest.raises(NonUniformOverlapError):
        pair_entropy(z, rotated)
    assert 0 < averaged_pair_entropy(z, rotated) < np.log2(3)


def test_sweep_properties():
    table = entropy_sweep(2, 8)
    h = table.values()
    assert all(h[d + 1] > h[d] for d in range(2, 8))
    for d, pair, value, method in table.rows:
        assert 0 <= value <= np.log2(d) + 1e-12
    for d in range(2, 9):
        vals = [v for dd, p, v, m in table.rows if dd == d]
        assert max(vals) - min(vals) < 1e-9
    assert table.unreferenced and all(m == "overlap_averaged" for *_, m in table.unreferenced)


@given(st.integers(2, 6), st.integers(0, 2**32))
def test_unitary_invariance(d, seed):
    q = canonical_quartet(d)
    u = haar_unitary(d, seed)
    assert abs(pair_entropy(q.a1.conjugated(u), q.a2.conjugated(u)) - pair_entropy(q.a1, q.a2)) < 1e-9


@pytest.mark.parametrize("d", range(2, 7))
def test_first_marginal_uniform(d):
    q = canonical_quartet(d)
    t = luders_joint(maximally_mixed(d), povm_from_observable(q.a1), povm_from_observable(q.a2))
    assert np.allclose(first_marginal(t), 1 / d, atol=1e-12)
