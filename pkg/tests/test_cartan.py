import pytest
from hypothesis import given, strategies as st

from kmatlab.cartan import (RootDatum, SatakeDatum, InvalidSatakeDatum)

A1 = RootDatum.finite("A", 1)
A2 = RootDatum.finite("A", 2)
AFF = RootDatum.affine_sl2()

SD_CASES = [
    (A1, (), (0,)),
    (A2, (), (1, 0)),
    (A2, (0, 1), (1, 0)),
    (AFF, (), (0, 1)),
    (AFF, (), (1, 0)),
]


def wts(rd):
    return st.tuples(*[st.integers(-3, 3) for _ in rd.I])


@pytest.mark.parametrize("rd,X,tau", SD_CASES)
def test_theta_is_weight_involution(rd, X, tau):
    sd = SatakeDatum(rd, X, tau)

    @given(wts(rd))
    def inner(wt):
        assert sd.theta_wt(sd.theta_wt(wt)) == wt

    inner()


@pytest.mark.parametrize("rd,X,tau", SD_CASES)
def test_theta_root_involution_and_X_fixed(rd, X, tau):
    sd = SatakeDatum(rd, X, tau)
    for i in rd.I:
        c = sd.theta_root({i: 1})
        c2 = sd.theta_root(c)
        assert {k: v for k, v in c2.items() if v} == {i: 1}
        if i in X:
            assert {k: v for k, v in c.items() if v} == {i: 1}


@pytest.mark.parametrize("rd,X,tau", [c for c in SD_CASES if not c[0].affine])
def test_theta_preserves_pairing(rd, X, tau):
    sd = SatakeDatum(rd, X, tau)

    @given(wts(rd), wts(rd))
    def inner(a, b):
        assert rd.pairing(sd.theta_wt(a), sd.theta_wt(b)) == rd.pairing(a, b)

    inner()


def test_pairing_symmetric_and_matches_cartan():
    for rd in (A1, A2):
        for i in rd.I:
            for j in rd.I:
                ai, aj = rd.alpha(i), rd.alpha(j)
                assert rd.pairing(ai, aj) == rd.pairing(aj, ai)
                assert rd.pairing(ai, aj) == rd.d[i] * rd.A[i][j]
                # fundamental weights are dual to coroots
                assert rd.pairing(rd.fundamental(i), aj) == \
                    (rd.d[j] if i == j else 0)


def test_reflections_are_involutions():
    for rd in (A1, A2, AFF):
        @given(wts(rd))
        def inner(wt):
            for i in rd.I:
                assert rd.reflect_wt(i, rd.reflect_wt(i, wt)) == wt

        inner()


def test_longest_word_negates_positives():
    w0 = A2.longest_word((0, 1))
    assert len(w0) == 3
    for beta in A2.positive_roots((0, 1)):
        img = A2.word_on_wt(w0, A2.root_shift(A2.zero_wt(), beta))
        coords = A2.classical_root_coords(img)
        assert all(v <= 0 for v in coords.values())


def test_weyl_dims():
    assert A2.weyl_dim((1, 0)) == 3
    assert A2.weyl_dim((0, 1)) == 3
    assert A2.weyl_dim((1, 1)) == 8
    assert A1.weyl_dim((2,)) == 3


# -- admissibility ----------------------------------------------------------

def test_rejects_non_involution():
    rd = RootDatum.finite("A", 3)
    with pytest.raises(InvalidSatakeDatum):
        SatakeDatum(rd, (), (1, 2, 0))


def test_rejects_tau_not_preserving_X():
    rd = RootDatum.finite("A", 3)
    with pytest.raises(InvalidSatakeDatum):
        SatakeDatum(rd, (0,), (2, 1, 0))


def test_rejects_generalized_satake_violation():
    # a single interior fixed node adjacent to X breaks admissibility
    with pytest.raises(InvalidSatakeDatum):
        SatakeDatum(A2, (1,), (0, 1))


def test_rejects_tau_X_not_opposition():
    with pytest.raises(InvalidSatakeDatum):
        SatakeDatum(A2, (0, 1), (0, 1))


def test_rejects_affine_full_X():
    with pytest.raises(InvalidSatakeDatum):
        SatakeDatum(AFF, (0, 1), (0, 1))


# -- restricted-weight classes ----------------------------------------------

def test_weight_class_quotient():
    sd = SatakeDatum(A2, (), (1, 0))
    lam = A2.fundamental(0)
    mu = A2.fundamental(1)
    # the class only sees the theta-symmetrized part of the weight
    assert sd.qsp_weight_class(lam) == sd.qsp_weight_class(sd.theta_wt(lam))
    assert sd.qsp_weight_class(lam) != sd.qsp_weight_class(mu) or lam == mu
    shifted = sd.qsp_weight_class(lam).shifted({0: 1})
    assert isinstance(hash(shifted), int)


def test_sigma_allowed_flags():
    sd_id = SatakeDatum(AFF, (), (0, 1))
    sd_fl = SatakeDatum(AFF, (), (1, 0))
    assert all(sd_id.sigma_allowed(i) for i in AFF.I)
    assert not any(sd_fl.sigma_allowed(i) for i in AFF.I)


def test_gamma_constraints_pair_swapped_nodes():
    sd = SatakeDatum(A2, (), (1, 0))
    assert sd.gamma_constraints() == []
    sdq = SatakeDatum(AFF, (), (0, 1))
    assert sdq.gamma_constraints() == []
