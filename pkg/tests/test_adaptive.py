import numpy as np
import pytest

from awlssvm import adaptive
from awlssvm.adaptive import (
    TrainConfig,
    encode_one_vs_all,
    fit,
    mask_misclassified,
    predict,
    update_weights,
    view_coupling,
)
from awlssvm.data import MultiViewDataset, make_complementary_views, stratified_split
from awlssvm.errors import ConfigError, DegenerateLabelsError, InputShapeError
from awlssvm.kernels import KernelSpec, gram_matrix, labeled_kernel
from awlssvm.lssvm_solver import WeightedProblem, solve_dual
from awlssvm.stats import balanced_accuracy

from oracles import weight_update_loops


def test_encode_three_classes():
    Y = encode_one_vs_all([0, 1, 2], 3)
    np.testing.assert_array_equal(Y, [[1, -1, -1], [-1, 1, -1], [-1, -1, 1]])


def test_encode_binary():
    Y = encode_one_vs_all([0, 1, 1], 2)
    np.testing.assert_array_equal(Y[:, 0], [1, -1, -1])


def test_encode_column_sums(rng):
    for _ in range(50):
        C = rng.integers(2, 6)
        labels = np.concatenate([np.arange(C), rng.integers(0, C, size=rng.integers(0, 30))])
        Y = encode_one_vs_all(labels, C)
        for c in range(C):
            assert Y[:, c].sum() == 2 * np.sum(labels == c) - labels.size


def test_encode_missing_class():
    with pytest.raises(DegenerateLabelsError):
        encode_one_vs_all([0, 0, 2], 3)


def test_mask_misclassified():
    np.testing.assert_array_equal(mask_misclassified([0.5, 1.5, -0.3]), [0, 1.5, 0])
    np.testing.assert_array_equal(mask_misclassified([0.9, -0.99, 0.0]), [0, 0, 0])
    np.testing.assert_array_equal(mask_misclassified([1.0]), [1.0])


def test_update_weights_hand():
    E = np.array([[0.0, 4.0, 0.0], [1.0, 0.0, 0.0]])
    w = view_coupling(E, 0)
    np.testing.assert_allclose(w, [0.0, 1.0])
    np.testing.assert_allclose(update_weights(E, np.zeros(3), 0.7, 2, 0), [1.0, 0.0, 0.0])


def test_update_weights_zero_denominator():
    s_prev = np.array([0.3, 0.0, 1.2])
    np.testing.assert_array_equal(update_weights(np.zeros((3, 3)), s_prev, 0.7, 3, 1), s_prev)
    same = np.tile([0.0, 2.0, 5.0], (4, 1))
    np.testing.assert_array_equal(update_weights(same, s_prev, 0.7, 4, 2), s_prev)


def test_update_weights_matches_loops(rng):
    for _ in range(200):
        V, N = rng.integers(1, 7), rng.integers(1, 51)
        E = mask_misclassified(rng.uniform(-1, 3, size=(V, N))) ** 2
        s_prev = rng.uniform(0, 2, size=N)
        beta, t, v = rng.uniform(0.05, 0.95), int(rng.integers(2, 7)), int(rng.integers(V))
        got = update_weights(E, s_prev, beta, t, v)
        want = weight_update_loops(E.tolist(), s_prev.tolist(), beta, t, v)
        np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)


def test_coupling_properties(rng):
    E = rng.uniform(0, 3, size=(5, 12))
    for v in range(5):
        w = view_coupling(E, v)
        assert w[v] == 0 and np.all(w >= 0)
        assert w.sum() == pytest.approx(1.0, abs=1e-12)


def test_update_weights_argument_errors():
    with pytest.raises(ConfigError):
        update_weights(np.zeros((2, 3)), np.zeros(3), 0.7, 1, 0)
    with pytest.raises(InputShapeError):
        update_weights(np.zeros((2, 3)), np.zeros(4), 0.7, 2, 0)


@pytest.mark.parametrize("kwargs", [dict(beta=1.5), dict(beta=0.0), dict(iterations=0),
                                    dict(gamma=0.0), dict(rho=-1.0)])
def test_train_config_validation(kwargs):
    with pytest.raises(ConfigError):
        TrainConfig(**kwargs)


def plain_lssvm(X, labels, C, cfg):
    K = gram_matrix(cfg.kernel, X, X)
    Y = encode_one_vs_all(labels, C)
    return [solve_dual(WeightedProblem(labeled_kernel(K, Y[:, c]), Y[:, c], cfg.gamma, 0.0,
                                       np.zeros(len(labels)))) for c in range(C)]


@pytest.fixture
def complementary():
    return make_complementary_views(20, 0.8, seed=3)


def test_single_view_is_plain_lssvm(complementary):
    ds = complementary.select_views([0])
    cfg = TrainConfig(gamma=5.0, rho=10.0, iterations=4, standardize=False)
    model = fit(ds, cfg)
    ref = plain_lssvm(ds.views[0], ds.labels, 3, cfg)
    for c in range(3):
        np.testing.assert_allclose(model.solutions[0][c].alpha, ref[c].alpha, rtol=0, atol=1e-12)
        assert abs(model.solutions[0][c].b - ref[c].b) <= 1e-12
    assert all(np.all(s == 0) for s in model.weight_history)


def test_duplicate_views_keep_zero_weights(complementary):
    X = complementary.views[0]
    ds = MultiViewDataset([X, X.copy()], complementary.labels, 3)
    model = fit(ds, TrainConfig(gamma=5.0, rho=10.0, iterations=4))
    assert len(model.weight_history) == 4
    assert all(np.all(s == 0) for s in model.weight_history)
    for c in range(3):
        np.testing.assert_array_equal(model.solutions[0][c].alpha, model.solutions[1][c].alpha)


def test_weights_nondecreasing_and_bounded(complementary):
    cfg = TrainConfig(gamma=2.0, rho=5.0, beta=0.7, iterations=5)
    model = fit(complementary, cfg)
    hist = model.weight_history
    assert np.all(hist[0] == 0)
    assert any(np.any(h > 0) for h in hist)
    for t in range(1, len(hist)):
        assert np.all(hist[t] >= hist[t - 1])


def test_fit_is_deterministic(complementary):
    cfg = TrainConfig(gamma=2.0, rho=5.0, iterations=3)
    a, b = fit(complementary, cfg), fit(complementary, cfg)
    for v in range(2):
        for c in range(3):
            np.testing.assert_array_equal(a.solutions[v][c].alpha, b.solutions[v][c].alpha)
    pa, sa = predict(a, complementary)
    pb, sb = predict(b, complementary)
    np.testing.assert_array_equal(sa, sb)


def test_hand_instance_as_model():
    ds = MultiViewDataset([np.eye(2)], [0, 1], 2)
    cfg = TrainConfig(gamma=1.0, rho=0.0, iterations=1, kernel=KernelSpec("linear"), standardize=False)
    model = fit(ds, cfg)
    labels, scores = predict(model, ds)
    np.testing.assert_allclose(scores[:, 0], [0.5, -0.5], atol=1e-12)
    np.testing.assert_allclose(scores[:, 1], [-0.5, 0.5], atol=1e-12)
    np.testing.assert_array_equal(labels, [0, 1])


def test_binary_argmax_equals_sign(complementary):
    ds = MultiViewDataset(complementary.views, (complementary.labels == 0).astype(int), 2)
    model = fit(ds, TrainConfig(gamma=3.0, rho=1.0, iterations=3))
    labels, scores = predict(model, ds)
    np.testing.assert_allclose(scores[:, 0], -scores[:, 1], atol=1e-9)
    np.testing.assert_array_equal(labels, np.where(scores[:, 0] >= 0, 0, 1))


def test_single_view_prediction_matches_view(complementary):
    ds = complementary.select_views([1])
    model = fit(ds, TrainConfig(iterations=3))
    labels, scores = predict(model, ds)
    per_view = model.view_scores(ds)
    np.testing.assert_array_equal(scores, per_view[0])
    np.testing.assert_array_equal(labels, np.argmax(per_view[0], axis=1))


def test_identical_views_fused_equals_view(complementary):
    X = complementary.views[0]
    ds = MultiViewDataset([X, X], complementary.labels, 3)
    model = fit(ds, TrainConfig(iterations=2))
    _, scores = predict(model, ds)
    np.testing.assert_allclose(scores, model.view_scores(ds)[0], rtol=1e-15, atol=1e-15)


def test_argmax_tie_lowest_class():
    class Stub(adaptive.AwModel):
        def view_scores(self, views):
            return np.array([[[0.2, 0.2, 0.1], [0.0, 0.3, 0.3]]])
    m = Stub(TrainConfig(), 3, [np.zeros((1, 1))], np.ones((1, 3)), [])
    labels, _ = predict(m, [np.zeros((2, 1))])
    np.testing.assert_array_equal(labels, [0, 1])


def test_argmax_shift_invariance(complementary):
    model = fit(complementary, TrainConfig(iterations=2))
    _, scores = predict(model, complementary)
    shifted = scores + np.linspace(-3, 3, scores.shape[0])[:, None]
    np.testing.assert_array_equal(np.argmax(scores, axis=1), np.argmax(shifted, axis=1))


def test_predict_shape_errors(complementary):
    model = fit(complementary, TrainConfig(iterations=1))
    with pytest.raises(InputShapeError):
        predict(model, [complementary.views[0]])
    with pytest.raises(InputShapeError):
        predict(model, [complementary.views[0], np.zeros((60, 3))])


def test_fused_beats_single_views_on_training():
    ds = make_complementary_views(30, 0.6, seed=1)
    cfg = TrainConfig(gamma=10.0, rho=10.0, beta=0.7, iterations=3)
    fused, _ = predict(fit(ds, cfg), ds)
    fused_ba = balanced_accuracy(ds.labels, fused)
    for v in range(2):
        single = ds.select_views([v])
        pv, _ = predict(fit(single, cfg.with_(iterations=1)), single)
        assert fused_ba >= balanced_accuracy(ds.labels, pv)


def test_standardization_applied_to_test(complementary):
    tr, te = stratified_split(complementary, 0.25, 0)
    model = fit(tr, TrainConfig(iterations=2))
    shifted = [X * 100.0 + 5.0 for X in tr.views]
    tr_scaled = MultiViewDataset(shifted, tr.labels, 3)
    model2 = fit(tr_scaled, TrainConfig(iterations=2))
    _, s1 = predict(model, te)
    _, s2 = predict(model2, [X * 100.0 + 5.0 for X in te.views])
    np.testing.assert_allclose(s1, s2, atol=1e-8)
