import numpy as np
import pytest
from hypothesis import given, strategies as st

from tempcert.certification import (
    algebraic_residuals,
    certify,
    fingerprint_distance,
    lemma2_demo,
    lemma2_quartets,
    overlap_fingerprint,
    perturb_quartet,
    printed_form_comparison,
    robustness_check,
    robustness_trials,
)
from tempcert.exceptions import DomainError, NumericError, PreconditionError
from tempcert.inequality import tau_from_stats
from tempcert.numerics import haar_unitary, hs_norm
from tempcert.observables import Quartet, canonical_quartet, observable_from_projectors
from tempcert.sequential import maximally_mixed, povm_from_observable, projectivity_check, pure_state, quartet_tables


@pytest.mark.parametrize("d", range(2, 7))
def test_canonical_conditions_hold(d):
    res = algebraic_residuals(canonical_quartet(d))
    assert set(res) == {"p5n", "p9", "p10", "p11"}
    assert max(res.values()) < 1e-9


def test_adjoint_fourth_breaks_commutation():
    q = canonical_quartet(3)
    q = q.replace(4, q.a4.relabeled([0, 2, 1]))
    assert algebraic_residuals(q)["p10"] > 0.1


def test_conditions_require_mixed_state():
    with pytest.raises(PreconditionError):
        algebraic_residuals(canonical_quartet(2), pure_state([1, 0]).density)


def test_fingerprint_unitary_invariance():
    q = canonical_quartet(3)
    assert fingerprint_distance(q.conjugated(haar_unitary(3, 7))) < 1e-9


def test_fingerprint_label_invariance():
    q = canonical_quartet(3)
    shuffled = Quartet(*(o.relabeled([2, 0, 1]) for o in q))
    assert fingerprint_distance(shuffled) < 1e-9


def test_fingerprint_length():
    assert len(overlap_fingerprint(canonical_quartet(4))) == 6 * 16


@pytest.mark.parametrize("d", [2, 3, 4])
def test_certify_canonical_and_rotated(d):
    assert certify(canonical_quartet(d)).verdict == "certified"
    r = certify(canonical_quartet(d).conjugated(haar_unitary(d, 99)))
    assert r.verdict == "certified"
    assert all(r.lemma1_pass)
    assert abs(r.epsilon) < 1e-9


def test_certify_suboptimal_not_certified():
    q = canonical_quartet(3)
    q = q.replace(4, q.a4.relabeled([0, 2, 1]))
    assert certify(q).verdict == "not_certified"


def test_certify_embedding_inconclusive():
    # canonical d = 2 quartet tensored with a qubit identity
    q = canonical_quartet(2)
    big = Quartet(*(observable_from_projectors([np.kron(p, np.eye(2)) for p in o.projectors], 2) for o in q))
    r = certify(big)
    assert r.verdict == "inconclusive"
    assert r.ranks[0] == [2, 2]


def test_certified_reproduces_canonical_tables():
    d = 3
    q = canonical_quartet(d).conjugated(haar_unitary(d, 5))
    assert certify(q).verdict == "certified"
    ta = quartet_tables(q, maximally_mixed(d))
    tb = quartet_tables(canonical_quartet(d), maximally_mixed(d))
    for p in ta:
        assert np.max(np.abs(ta[p].probs - tb[p].probs)) < 1e-9


def test_lemma2_strategy1_reaches_four():
    rng = np.random.default_rng(1)
    for _ in range(10):
        rep = lemma2_demo(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        assert rep.strategy1_tau == pytest.approx(4.0, abs=1e-9)


def test_lemma2_reported_values():
    rep = lemma2_demo()
    assert rep.strategy1_tau == pytest.approx(4.0, abs=1e-9)
    # outcomes of the fourth observable as listed give zero
    assert abs(rep.strategy1_tau_printed) < 1e-9
    assert rep.overlap_u13 == pytest.approx(np.cos(np.pi / 8))
    assert rep.overlap_v13 == pytest.approx(np.sqrt(0.5))
    assert rep.overlap_gap > 0.2
    assert rep.fingerprint_distance > 0.1
    # no state reaches 4 with the second strategy's observables
    assert rep.strategy2_beta_max < 3.0


def test_lemma2_fingerprints_show_overlaps():
    rep = lemma2_demo()
    f1, f2 = rep.fingerprints["strategy1"], rep.fingerprints["strategy2"]
    assert np.any(np.isclose(f1, np.cos(np.pi / 8) ** 2))
    assert np.any(np.isclose(f2, 0.5))


def test_lemma2_quartets_projective():
    for q in lemma2_quartets():
        assert q.D == 3 and q.d == 2
        assert all(projectivity_check(povm_from_observable(o)).projective for o in q)


def test_perturb_zero_is_canonical():
    q0 = perturb_quartet(3, 0.0, 1)
    c = canonical_quartet(3)
    assert all(np.array_equal(a, b) for a, b in zip(q0.unitaries, c.unitaries))


def test_perturb_domain():
    with pytest.raises(DomainError):
        perturb_quartet(2, 0.6, 0)


@given(st.integers(2, 4), st.floats(1e-4, 0.5), st.integers(0, 2**32))
def test_perturbed_quartets_stay_projective(d, delta, seed):
    q = perturb_quartet(d, delta, seed)
    for o in q:
        assert projectivity_check(povm_from_observable(o)).projective
        assert o.ranks == [1] * d


def test_perturbation_epsilon_scale():
    q = perturb_quartet(3, 1e-3, 4)
    eps = 8 - tau_from_stats(quartet_tables(q, maximally_mixed(3)), 3).real
    assert 0 <= eps <= 1e-3


def test_robustness_identity():
    r = robustness_check(None, canonical_quartet(3))
    assert r.epsilon == pytest.approx(0, abs=1e-9)
    assert max(r.lhs_i, r.lhs_ii, r.lhs_iii, r.lhs_iv) < 1e-9
    assert r.all_bounds_hold and r.sharp_bounds_hold


def test_robustness_preconditions():
    q = canonical_quartet(2)
    with pytest.raises(PreconditionError):
        robustness_check(None, q, pure_state([1, 0]).density)


def test_robustness_rejects_non_projective():
    q = canonical_quartet(2)
    bad = q.a1.__class__(2, q.a1.unitary, (0.9 * q.a1.projectors[0] + 0.05 * np.eye(2), 0.9 * q.a1.projectors[1] + 0.05 * np.eye(2)))
    with pytest.raises(PreconditionError):
        robustness_check(None, q.replace(1, bad))


def test_robustness_rejects_super_quantum(monkeypatch):
    # valid quartets cannot exceed the maximum, so corrupt the statistics path
    import tempcert.certification as cert

    monkeypatch.setattr(cert, "tau_from_stats", lambda tables, d: complex(4 * (d - 1) + 1e-3))
    with pytest.raises(NumericError):
        robustness_check(None, canonical_quartet(2))


def test_robustness_trials_small():
    s = robustness_trials(45, base_seed=3)
    assert s.trials == 45 and s.failures == 0 and s.sharp_failures == 0
    assert [r[3] for r in s.rows] == list(range(3, 48))


def test_epsilon_monotone_in_delta():
    for d in (2, 3, 4):
        means = []
        for delta in (1e-4, 1e-3, 1e-2):
            means.append(np.mean([robustness_check(None, perturb_quartet(d, delta, s)).epsilon for s in range(10)]))
        assert means == sorted(means)


def test_printed_form_comparison():
    c = printed_form_comparison(2)
    assert c["tau_canonical"].real == pytest.approx(4)
    assert abs(c["tau_printed"]) < 1e-9
    assert c["a4_sign_flip_distance"] < 1e-12
    c3 = printed_form_comparison(3)
    assert abs(c3["tau_printed"] - (2 + 2 * np.sqrt(3) * 1j)) < 1e-9
