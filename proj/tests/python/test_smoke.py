import math

import numpy as np
import pytest

import cbe


def naive_circulant(r):
    d = len(r)
    return np.array([[r[(i - j) % d] for j in range(d)] for i in range(d)])


def test_dft_matches_numpy():
    x = np.random.default_rng(0).standard_normal(33)
    np.testing.assert_allclose(cbe.dft(x), np.fft.fft(x), atol=1e-10)


def test_circulant_multiply_matches_dense():
    rng = np.random.default_rng(1)
    r, x = rng.standard_normal(17), rng.standard_normal(17)
    np.testing.assert_allclose(cbe.circulant_multiply(r, x), naive_circulant(r) @ x, atol=1e-10)


def test_encode_matches_dense_signs():
    model = cbe.sample_params(64, 40, seed=3)
    x = np.random.default_rng(2).standard_normal((50, 64))
    proj = (naive_circulant(model.r) @ (x * model.signs).T).T[:, :40]
    codes = model.encode(x)
    assert codes.shape == (50, 40)
    keep = np.abs(proj) > 1e-8
    np.testing.assert_array_equal(codes[keep], np.where(proj >= 0, 1, -1)[keep])
    assert model.encode_packed(x).shape == (50, 1)


def test_train_is_monotone_and_round_trips(tmp_path):
    x = np.random.default_rng(4).standard_normal((100, 32))
    out = cbe.train(x, k=32, iters=5, seed=7, rel_tolerance=0.0)
    objs = [h["objective"] for h in out["history"]]
    assert all(b <= a + 1e-9 for a, b in zip(objs, objs[1:]))
    model = out["model"]
    assert model.kind == "optimized"
    path = tmp_path / "m.cbe"
    model.save(str(path))
    assert cbe.load_model(str(path)) == model
    assert cbe.model_from_bytes(model.to_bytes()) == model
    assert path.read_bytes()[:4] == b"CBE1"


def test_zero_mu_matches_plain_training():
    x = np.random.default_rng(5).standard_normal((60, 16))
    plain = cbe.train(x, k=8, seed=1)["model"]
    semi = cbe.train(x, k=8, seed=1, mu=0.0, similar=[(0, 1)])["model"]
    assert plain == semi


def test_variance_at_right_angle():
    rep = cbe.simulate_variance(math.pi / 2, k=25, d=128, inner=100, outer=50, seed=2)
    assert rep["analytic_var"] == pytest.approx(0.01)
    assert rep["sample_mean"] == pytest.approx(0.5, abs=0.02)
    assert rep["sample_var"] == pytest.approx(0.01, rel=0.25)


def test_recall_curve_is_monotone():
    rng = np.random.default_rng(6)
    db, q = rng.standard_normal((300, 32)), rng.standard_normal((10, 32))
    curve = cbe.recall(cbe.sample_params(32, 32, seed=1), db, q, r_max=50)
    assert len(curve) == 50
    assert np.all(np.diff(curve) >= 0)
    assert curve[-1] > 0


def test_errors_map_to_python_exceptions():
    model = cbe.sample_params(16, 8)
    with pytest.raises(ValueError, match="d=16"):
        model.encode(np.ones((2, 32)))
    with pytest.raises(ValueError):
        cbe.sample_params(8, 9)
    with pytest.raises(ValueError):
        cbe.model_from_bytes(b"XXXXgarbage")
    with pytest.raises(OSError):
        cbe.load_model("/nonexistent/model.cbe")
    assert cbe.hamming(np.array([1, -1, 1]), np.array([1, 1, -1])) == 2
