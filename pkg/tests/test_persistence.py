import numpy as np
import pytest

from awlssvm.adaptive import TrainConfig
from awlssvm.data import make_complementary_views, stratified_split
from awlssvm.evaluation import fit_method, predict_any
from awlssvm.persistence import load_model, model_from_dict, save_model


@pytest.mark.parametrize("method", ["aw", "aw_t4", "bsv", "early", "late"])
def test_roundtrip_bit_identical(method, tmp_path):
    ds = make_complementary_views(12, 0.7, seed=2)
    tr, te = stratified_split(ds, 0.25, 0)
    model = fit_method(method, tr, TrainConfig(gamma=4.0, rho=3.0, iterations=2))
    path = tmp_path / "model.json"
    save_model(model, path)
    back = load_model(path)
    l1, s1 = predict_any(model, te.views)
    l2, s2 = predict_any(back, te.views)
    np.testing.assert_array_equal(l1, l2)
    assert s1.tobytes() == s2.tobytes()


def test_rejects_unknown_version():
    with pytest.raises(ValueError):
        model_from_dict({"format_version": 99, "kind": "aw_lssvm", "model": {}})
