import math

import numpy as np
import pytest
from scipy.integrate import quad

from parset import (
    EntropyMethod,
    GaussianMixture,
    InvalidArgumentError,
    Verdict,
    convolve_mixtures,
    de_bruijn_check,
    entropy_mc,
    entropy_quadrature,
    fisher_information_mc,
    mixture_density,
    pointwise_lemma_check,
    reverse_epi_check,
)
from parset.entropy import pointwise_lemma_log_ratio


def gaussian_entropy(var, dim=1):
    return 0.5 * dim * math.log(2.0 * math.pi * math.e * var)


def test_density_single_atom():
    gm = GaussianMixture(atoms=[[0.0]], weights=[1.0], variance=1.0)
    assert mixture_density(gm, [0.0]) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi))


def test_density_symmetry():
    gm = GaussianMixture(atoms=[[-1.0], [1.0]], weights=[0.5, 0.5], variance=0.5)
    single = GaussianMixture(atoms=[[1.0]], weights=[1.0], variance=0.5)
    # at the midpoint, each symmetric atom contributes the single-atom value
    assert mixture_density(gm, [0.0]) == pytest.approx(mixture_density(single, [0.0]))


def test_density_matches_naive_sum():
    rng = np.random.default_rng(1)
    atoms = rng.standard_normal((5, 3))
    w = rng.random(5) + 0.1
    w /= w.sum()
    var = 0.7
    gm = GaussianMixture(atoms=atoms, weights=w, variance=var)
    for x in rng.standard_normal((10, 3)):
        naive = sum(
            wi * math.exp(-np.sum((x - ai) ** 2) / (2 * var)) / (2 * math.pi * var) ** 1.5
            for wi, ai in zip(w, atoms)
        )
        assert mixture_density(gm, x) == pytest.approx(naive, rel=1e-12)


def test_convolve_single_atoms():
    a = GaussianMixture(atoms=[[1.0, 2.0]], weights=[1.0], variance=0.3)
    b = GaussianMixture(atoms=[[-0.5, 1.0]], weights=[1.0], variance=0.4)
    c = convolve_mixtures(a, b)
    np.testing.assert_allclose(c.atoms, [[0.5, 3.0]])
    assert c.variance == pytest.approx(0.7)
    assert c.weights.sum() == pytest.approx(1.0, abs=1e-15)


def test_convolve_merges_duplicates():
    a = GaussianMixture(atoms=[[0.0], [1.0]], weights=[0.5, 0.5], variance=0.2)
    b = GaussianMixture(atoms=[[0.0], [1.0]], weights=[0.5, 0.5], variance=0.2)
    c = convolve_mixtures(a, b)
    assert len(c.weights) == 3  # sums 0, 1, 2 with the middle atom merged
    assert c.weights.sum() == pytest.approx(1.0, abs=1e-12)
    mid = np.where(np.isclose(c.atoms[:, 0], 1.0))[0]
    assert c.weights[mid[0]] == pytest.approx(0.5)


def test_convolve_density_matches_quadrature():
    a = GaussianMixture(atoms=[[0.0], [1.5]], weights=[0.3, 0.7], variance=0.4)
    b = GaussianMixture(atoms=[[-1.0]], weights=[1.0], variance=0.6)
    c = convolve_mixtures(a, b)
    for t in [-1.0, 0.0, 0.4, 1.2, 2.0]:
        integrand = lambda tau: mixture_density(a, [tau]) * mixture_density(b, [t - tau])
        want, _ = quad(integrand, -15, 15, limit=200)
        assert mixture_density(c, [t]) == pytest.approx(want, rel=1e-8)


def test_entropy_mc_single_gaussian():
    gm = GaussianMixture(atoms=[[0.0, 0.0]], weights=[1.0], variance=0.8)
    est = entropy_mc(gm, n=200_000, seed=2)
    assert est.method is EntropyMethod.MC
    assert abs(est.value - gaussian_entropy(0.8, dim=2)) <= 3.0 * est.std_error


def test_entropy_mc_far_separated():
    sep = 50.0
    gm = GaussianMixture(
        atoms=[[0.0], [sep], [2 * sep]], weights=[1 / 3] * 3, variance=0.5
    )
    est = entropy_mc(gm, n=200_000, seed=3)
    want = math.log(3.0) + gaussian_entropy(0.5)
    assert abs(est.value - want) <= 3.0 * est.std_error + 1e-6


def test_entropy_mc_matches_quadrature():
    rng = np.random.default_rng(4)
    for k in range(3):
        n_atoms = int(rng.integers(1, 5))
        w = rng.random(n_atoms) + 0.1
        gm = GaussianMixture(
            atoms=rng.uniform(-2, 2, (n_atoms, 1)),
            weights=w / w.sum(),
            variance=float(rng.uniform(0.2, 1.5)),
        )
        mc = entropy_mc(gm, n=150_000, seed=5 + k)
        qd = entropy_quadrature(gm)
        assert abs(mc.value - qd.value) <= 3.0 * mc.std_error + qd.std_error


def test_entropy_mc_pooled_unbiasedness():
    gm = GaussianMixture(atoms=[[0.0], [1.8]], weights=[0.6, 0.4], variance=0.5)
    want = entropy_quadrature(gm).value
    vals, ses = [], []
    for s in range(6):
        est = entropy_mc(gm, n=60_000, seed=300 + s)
        vals.append(est.value)
        ses.append(est.std_error)
    pooled_mean = float(np.mean(vals))
    pooled_se = float(np.sqrt(np.sum(np.square(ses)))) / len(vals)
    assert abs(pooled_mean - want) <= 3.0 * pooled_se


def test_entropy_quadrature_single_gaussian():
    gm = GaussianMixture(atoms=[[0.3]], weights=[1.0], variance=0.6)
    est = entropy_quadrature(gm)
    assert est.method is EntropyMethod.QUADRATURE
    assert est.value == pytest.approx(gaussian_entropy(0.6), abs=1e-8)


def test_entropy_quadrature_separated_limit():
    gm = GaussianMixture(atoms=[[0.0], [60.0]], weights=[0.5, 0.5], variance=0.5)
    want = math.log(2.0) + gaussian_entropy(0.5)
    assert entropy_quadrature(gm).value == pytest.approx(want, abs=1e-8)


def test_entropy_quadrature_refinement():
    gm = GaussianMixture(atoms=[[0.0], [2.0]], weights=[0.4, 0.6], variance=0.3)
    coarse = entropy_quadrature(gm, points=8193).value
    fine = entropy_quadrature(gm, points=16385).value
    assert abs(coarse - fine) < 1e-8


def test_entropy_quadrature_dim_guard():
    gm = GaussianMixture(atoms=[[0.0, 0.0]], weights=[1.0], variance=1.0)
    with pytest.raises(InvalidArgumentError):
        entropy_quadrature(gm)


def test_convolution_entropy_dominates_inputs():
    # adding independent noise cannot reduce entropy
    rng = np.random.default_rng(6)
    for k in range(3):
        wa = rng.random(2) + 0.1
        wb = rng.random(3) + 0.1
        a = GaussianMixture(
            atoms=rng.uniform(-2, 2, (2, 1)), weights=wa / wa.sum(), variance=0.5
        )
        b = GaussianMixture(
            atoms=rng.uniform(-2, 2, (3, 1)), weights=wb / wb.sum(), variance=0.5
        )
        h_sum = entropy_quadrature(convolve_mixtures(a, b)).value
        assert h_sum >= max(entropy_quadrature(a).value, entropy_quadrature(b).value) - 1e-9


def test_reverse_epi_analytic_single_atoms():
    # deterministic variables: every entropy in closed form, inequality strict
    for d, r in [(1, 0.5), (2, 0.7), (3, 1.3)]:
        lhs = gaussian_entropy(2.0 * r, dim=d)
        rhs = 2.0 * gaussian_entropy(r, dim=d) - 0.5 * d * math.log(math.pi * r)
        assert lhs <= rhs
        assert rhs - lhs == pytest.approx(d / 2.0)  # constant slack for point masses


def test_reverse_epi_check_random():
    rng = np.random.default_rng(7)
    for k in range(5):
        kx = int(rng.integers(1, 4))
        ky = int(rng.integers(1, 4))
        wx = rng.random(kx) + 0.1
        wy = rng.random(ky) + 0.1
        rep = reverse_epi_check(
            x_atoms=rng.uniform(-3, 3, (kx, 1)),
            x_weights=wx / wx.sum(),
            y_atoms=rng.uniform(-3, 3, (ky, 1)),
            y_weights=wy / wy.sum(),
            r=float(rng.uniform(0.2, 1.5)),
        )
        assert rep.verdict is Verdict.PASS


def test_reverse_epi_far_separated_gap():
    r = 0.3
    sep = 40.0 * math.sqrt(r)
    gm_x = GaussianMixture(atoms=[[0.0], [sep]], weights=[0.5, 0.5], variance=r)
    gm_y = GaussianMixture(atoms=[[0.0], [3 * sep]], weights=[0.5, 0.5], variance=r)
    h_x = entropy_quadrature(gm_x).value
    h_y = entropy_quadrature(gm_y).value
    h_sum = entropy_quadrature(convolve_mixtures(gm_x, gm_y)).value
    gap = h_sum - h_x - h_y
    assert gap == pytest.approx(-0.5 * math.log(math.pi * math.e * r), abs=0.02)


def test_pointwise_lemma_equality_case():
    log_ratio, log_threshold = pointwise_lemma_log_ratio([0.7, -0.2], [0.7, -0.2], 0.9)
    assert log_ratio == pytest.approx(log_threshold, abs=1e-12)
    assert pointwise_lemma_check([0.7, -0.2], [0.7, -0.2], 0.9)


def test_pointwise_lemma_strict_case():
    log_ratio, log_threshold = pointwise_lemma_log_ratio([1.0], [-1.0], 0.5)
    assert log_ratio > log_threshold + 1.0  # |a-b|^2/(4r) = 2


def test_pointwise_lemma_sweep():
    rng = np.random.default_rng(8)
    for _ in range(1000):
        d = int(rng.integers(1, 5))
        a = rng.standard_normal(d) * 3
        b = rng.standard_normal(d) * 3
        r = float(rng.uniform(0.05, 5.0))
        assert pointwise_lemma_check(a, b, r)


def test_fisher_single_gaussian():
    gm = GaussianMixture(atoms=[[0.0, 0.0, 0.0]], weights=[1.0], variance=0.7)
    est = fisher_information_mc(gm, n=200_000, seed=9)
    assert abs(est.value - 3.0 / 0.7) <= 4.0 * est.std_error


def test_fisher_mixture_below_bound():
    gm = GaussianMixture(atoms=[[-1.0], [1.0]], weights=[0.5, 0.5], variance=0.4)
    est = fisher_information_mc(gm, n=200_000, seed=10)
    assert est.value < 1.0 / 0.4  # strictly smoother than one Gaussian
    # quadrature oracle for the score integral: J = integral p'(x)^2 / p(x)
    dx = 1e-5

    def score_sq(x):
        p = mixture_density(gm, [x])
        dp = (mixture_density(gm, [x + dx]) - mixture_density(gm, [x - dx])) / (2 * dx)
        return dp * dp / p

    want, _ = quad(score_sq, -8, 8, limit=400)
    assert abs(est.value - want) <= 4.0 * est.std_error + 1e-4


def test_fisher_translation_invariance():
    atoms = np.array([[0.0], [1.5]])
    w = np.array([0.3, 0.7])
    a = fisher_information_mc(GaussianMixture(atoms=atoms, weights=w, variance=0.5), n=50_000, seed=11)
    b = fisher_information_mc(
        GaussianMixture(atoms=atoms + 10.0, weights=w, variance=0.5), n=50_000, seed=11
    )
    # same samples up to the rounding of the shift itself
    assert b.value == pytest.approx(a.value, rel=1e-12)


def test_fisher_bound_sweep():
    rng = np.random.default_rng(12)
    for k in range(10):
        d = int(rng.integers(1, 4))
        n_atoms = int(rng.integers(1, 5))
        w = rng.random(n_atoms) + 0.1
        gm = GaussianMixture(
            atoms=rng.uniform(-2, 2, (n_atoms, d)),
            weights=w / w.sum(),
            variance=float(rng.uniform(0.3, 1.5)),
        )
        est = fisher_information_mc(gm, n=100_000, seed=13 + k)
        assert est.value <= gm.dim / gm.variance + 4.0 * est.std_error


def test_de_bruijn_single_gaussian():
    rep = de_bruijn_check([[0.0]], [1.0], t0=0.8, dt=1e-3, n=150_000, seed=14)
    assert rep.verdict is Verdict.PASS
    # analytic slope: d/dt (1/2) ln(2 pi e t) = 1/(2t) = J/2
    gm = GaussianMixture(atoms=[[0.0]], weights=[1.0], variance=0.8)
    est = fisher_information_mc(gm, n=100_000, seed=15)
    assert est.value / 2.0 == pytest.approx(1.0 / (2.0 * 0.8), abs=4 * est.std_error)


def test_de_bruijn_two_atom_quadrature_oracle():
    atoms = [[0.0], [2.0]]
    w = [0.5, 0.5]
    t0 = 1.0
    rep = de_bruijn_check(atoms, w, t0=t0, dt=1e-3, n=200_000, seed=16)
    assert rep.verdict is Verdict.PASS
    # independent oracle: quadrature entropies at t0 +- dt
    dt = 1e-3
    h = lambda t: entropy_quadrature(
        GaussianMixture(atoms=atoms, weights=w, variance=t)
    ).value
    fd = (h(t0 + dt) - h(t0 - dt)) / (2 * dt)
    est = fisher_information_mc(
        GaussianMixture(atoms=atoms, weights=w, variance=t0), n=200_000, seed=17
    )
    assert abs(fd - est.value / 2.0) <= 4.0 * est.std_error + 1e-4


def test_de_bruijn_dt_halving():
    atoms = [[0.0], [1.2]]
    w = [0.5, 0.5]
    t0 = 0.9
    h = lambda t: entropy_quadrature(
        GaussianMixture(atoms=atoms, weights=w, variance=t), points=32769
    ).value
    gm = GaussianMixture(atoms=atoms, weights=w, variance=t0)
    dx = 1e-5

    def score_sq(x):
        p = mixture_density(gm, [x])
        dp = (mixture_density(gm, [x + dx]) - mixture_density(gm, [x - dx])) / (2 * dx)
        return dp * dp / p

    j_exact, _ = quad(score_sq, -10, 10, limit=400)
    errs = []
    for dt in (2e-2, 1e-2):
        fd = (h(t0 + dt) - h(t0 - dt)) / (2 * dt)
        errs.append(abs(fd - j_exact / 2.0))
    assert errs[1] < errs[0]


def test_mixture_validation():
    with pytest.raises(InvalidArgumentError):
        GaussianMixture(atoms=[[0.0]], weights=[0.5], variance=1.0)
    with pytest.raises(InvalidArgumentError):
        GaussianMixture(atoms=[[0.0]], weights=[1.0], variance=0.0)
    with pytest.raises(InvalidArgumentError):
        GaussianMixture(atoms=[[0.0], [1.0]], weights=[1.0], variance=1.0)
