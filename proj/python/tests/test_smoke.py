import json
import math

import numpy as np
import pytest

import tailcausal as tc


def diamond(kind="maxlinear", w=1.0):
    return tc.WeightedDag(4, [(0, 1, w), (0, 2, w), (1, 3, w), (2, 3, w)], kind)


def test_dag_and_closure():
    g = tc.Dag(3, [(0, 1), (1, 2)])
    assert g.edges == [(0, 1), (1, 2)]
    assert tc.topological_order(g) == [0, 1, 2]
    np.testing.assert_array_equal(tc.reachability(g), np.triu(np.ones((3, 3))))
    with pytest.raises(tc.CycleError):
        tc.Dag(2, [(0, 1), (1, 0)])
    with pytest.raises(tc.Error):
        tc.Dag(2, [(0, 5)])


def test_diamond_matrices():
    m = tc.WeightedDag(4, [(0, 1, 0.5), (0, 2, 0.25), (1, 3, 2.0), (2, 3, 0.5)])
    b = tc.ml_coefficient_matrix(m)
    assert b[0, 3] == max(0.5 * 2.0, 0.25 * 0.5)
    lin = tc.WeightedDag(4, [(0, 1, 0.5), (0, 2, -1.0), (1, 3, 2.0), (2, 3, 0.5)], "linear")
    assert tc.linear_noise_coefficients(lin)[0, 3] == pytest.approx(0.5)


def test_sampling_is_seeded():
    a = tc.sample(diamond(), "frechet:2", 1000, 3)
    b = tc.sample(diamond(), "frechet:2", 1000, 3)
    assert a.shape == (1000, 4)
    np.testing.assert_array_equal(a, b)
    assert np.all(a[:, 3] >= a[:, 0])


def test_tail_fits():
    rng = np.random.default_rng(1)
    x = rng.pareto(2.0, 20000) + 1.0
    assert tc.hill_estimate(x.tolist(), 1000) == pytest.approx(0.5, abs=0.1)
    fit = tc.fit_gpd(rng.exponential(size=2000).tolist())
    assert abs(fit.xi) < 0.15
    with pytest.raises(tc.Error):
        tc.fit_gpd([1.0, 2.0])


def test_ease_on_linear_diamond():
    x = tc.sample(diamond("linear"), "pareto:2.5", 50000, 7)
    g = tc.gamma_matrix(x)
    assert math.isnan(g[0, 0])
    assert g[0, 3] > 0.9
    order = tc.ease_order(g)
    assert order[0] == 0 and order[-1] == 3
    r = tc.ease_reachability(g, order)
    d, _ = tc.reachability_distance(r, tc.reachability(diamond().dag))
    assert d == 0


def test_causev_complementary():
    x = tc.sample(tc.WeightedDag(2, [(0, 1, 1.0)]), "frechet:2", 20000, 5)
    s = tc.causev_score(x[:, 0].tolist(), x[:, 1].tolist())
    assert s.s_xy + s.s_yx == pytest.approx(1.0, abs=1e-12)
    assert s.s_xy > 0.5


def test_scalings_roundtrip():
    b = tc.standardize_ml(tc.ml_coefficient_matrix(diamond()), 2.0)
    np.testing.assert_allclose(tc.reconstruct_ml(b.T @ b), b, atol=1e-8)
    x = tc.sample(diamond(), "frechet:2", 50000, 2)
    rec = tc.reconstruct_ml(tc.spectral_scalings(x))
    assert np.max(np.abs(rec - b)) <= 0.1


def test_arborescence():
    w = np.array([[np.nan, 5.0, 5.0], [1.0, np.nan, 5.0], [5.0, 1.0, np.nan]])
    tree = tc.min_arborescence(w, 2)
    assert tree.edges == [(0, 1), (1, 2)]


def test_qte():
    rng = np.random.default_rng(4)
    n = 20000
    d = (rng.uniform(size=n) < 0.5).astype(int)
    u = rng.uniform(size=n)
    y = np.where(d == 1, u ** -0.5, u ** -0.25)
    x = rng.normal(size=(n, 1))
    e = tc.extremal_qte(y.tolist(), d.tolist(), x)
    truth = 0.005 ** -0.5 - 0.005 ** -0.25
    assert abs(e.qte - truth) <= 0.25 * truth
    assert e.ci is None


def test_run_is_deterministic(tmp_path):
    dag = tmp_path / "d.dag"
    dag.write_text("1 -> 2 1\n2 -> 3 0.5\n")
    cfg = f"input = {dag}\nseed = 4\nn = 2000\n"
    a = tc.run("simulate", cfg)
    assert a == tc.run("simulate", cfg)
    assert json.loads(a)["method"] == "simulate"
    with pytest.raises(tc.ArgumentError):
        tc.run("nonsense")
