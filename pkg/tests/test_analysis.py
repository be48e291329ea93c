import numpy as np
import pytest
from scipy.stats import unitary_group

from homogop import analysis
from homogop.kernels import b_origin, shift_matrix
from homogop.params import ParameterError, ParameterSet
from homogop.series import bs_constant, bs_geometric, bs_mul, max_relative_deviation


def params(m, lam, seed=0):
    rng = np.random.default_rng(seed)
    return ParameterSet(m, lam, (1.0,) + tuple(rng.uniform(0.5, 2, m)))


@pytest.mark.parametrize("m", range(4))
def test_hat_kernel_normalized(m):
    p = params(m, m / 2 + 0.6)
    k = analysis.hat_kernel(p)
    for s in range(k.degree + 1):
        expected = np.eye(m + 1) if s == 0 else np.zeros((m + 1, m + 1))
        assert np.allclose(k.coeffs[s, 0], expected, atol=1e-12)
        assert np.allclose(k.coeffs[0, s], expected, atol=1e-12)


def test_hat_kernel_scalar():
    p = ParameterSet(0, 1.3, (1.0,))
    assert max_relative_deviation(analysis.hat_kernel(p, 8), bs_geometric(2.6, 0, 8)) < 1e-12


@pytest.mark.parametrize("m", [1, 2, 3])
def test_hat_kernel_factorization(m):
    p = params(m, m / 2 + 0.9, seed=m)
    deg = 2 * m + 2
    half = np.sqrt(b_origin(p))
    rhs = bs_mul(
        bs_geometric(2 * p.lam + m, m, deg),
        bs_mul(bs_mul(bs_constant(half, deg), analysis.a_series(p, deg)), bs_constant(half, deg)),
    )
    lhs = analysis.hat_kernel(p, deg).coeffs
    # several coefficients vanish exactly, so compare against the overall scale
    assert np.abs(lhs - rhs.coeffs).max() <= 1e-12 * np.abs(lhs).max()


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_a_pattern(m):
    p = params(m, m / 2 + 0.5, seed=m)
    for ell in range(m):
        ok, corner = analysis.a_pattern_ok(ell, p)
        assert ok and corner.real < 0


@pytest.mark.parametrize("m", [1, 2, 3])
def test_a_poly_matches_term_sum(m):
    p = params(m, m / 2 + 1.1, seed=m)
    for ell in range(m):
        assert np.allclose(analysis.a_poly(ell, p), analysis.a_from_terms(ell, p), atol=1e-12)


def test_a_poly_m1_single_entry():
    a = analysis.a_poly(0, ParameterSet(1, 1.0, (1.0, 1.0)))
    mask = np.ones((2, 2), bool)
    mask[0, 1] = False
    assert np.allclose(a[mask], 0) and a[0, 1].real < 0


def test_a_poly_range():
    with pytest.raises(ValueError):
        analysis.a_poly(2, params(2, 2.0))


@pytest.mark.parametrize("m", range(4))
def test_commutant_examples(m):
    assert analysis.commutant_dimension([np.eye(m + 1)]) == (m + 1) ** 2
    assert analysis.commutant_dimension([shift_matrix(m)]) == m + 1


def test_commutant_of_reducible_family():
    blocks = [np.diag([1.0, 2.0, 3.0]), np.array([[0, 1, 0], [1, 0, 0], [0, 0, 5.0]])]
    assert analysis.commutant_dimension(blocks) == 2


def test_commutant_unitary_invariance():
    u = unitary_group.rvs(3, random_state=1)
    fam = analysis.hat_kernel(params(2, 1.5), 6).coefficient_list()
    rotated = [u @ c @ u.conj().T for c in fam]
    assert analysis.commutant_dimension(fam) == analysis.commutant_dimension(rotated) == 1


def test_irreducibility_examples():
    assert analysis.irreducibility_check(ParameterSet(0, 1.0, (1.0,))).commutant_dim == 1
    assert analysis.irreducibility_check(ParameterSet(1, 1.0, (1.0, 1.0))).commutant_dim == 1
    report = analysis.irreducibility_check(params(2, 2.0, seed=4))
    assert report.commutant_dim == 1 and not report.reducible
    with pytest.raises(ValueError):
        analysis.irreducibility_check(params(2, 2.0), 4)


def test_equivalence_examples():
    p = ParameterSet(1, 1.0, (1.0, 1.0))
    q = ParameterSet(1, 1.0, (1.0, 2.0))
    assert analysis.equivalence_check(p, p)
    assert not analysis.equivalence_check(p, q)
    assert np.allclose(np.diag(b_origin(p)), [1, 2]) and np.allclose(np.diag(b_origin(q)), [1, 5])
    assert not analysis.equivalence_check(p, ParameterSet(1, 1.5, (1.0, 1.0)))
    with pytest.raises(ParameterError):
        analysis.equivalence_check(p, ParameterSet(0, 1.0, (1.0,)))


def test_equivalence_is_an_equivalence_relation():
    sets = [params(2, lam, seed) for lam in (1.3, 2.0) for seed in (0, 1)] + [params(2, 1.3, 0)]
    eq = np.array([[analysis.equivalence_check(a, b) for b in sets] for a in sets])
    assert np.all(np.diag(eq)) and np.array_equal(eq, eq.T)
    assert np.array_equal(eq @ eq > 0, eq)


def test_invariants():
    inv = analysis.invariants(ParameterSet(2, 1.5, (1.0, 0.7, 1.2)))
    assert inv.lam == 1.5 and inv.mu == (0.7, 1.2)


def test_lemma_product_examples():
    m = 3
    p = params(m, 2.0)
    for i in range(1, m + 1):
        assert not analysis.lemma_product_matrix(p, i, 0, m, 0, 0, 0).any()
    base = analysis.lemma_product_matrix(p, 0, 0, 0, 0, 0, 0)
    assert np.allclose(base, b_origin(p) @ np.diag(1 / np.diag(b_origin(p))) ** 2)
    assert analysis.lemma_product_check(p, 0, 0, 0, 0, 0, 0)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_lemma_product_sweep(m):
    checked, failures = analysis.lemma_product_sweep(params(m, m / 2 + 0.4))
    assert checked == (m + 1) ** 6 and failures == 0
