import json

import pytest

import genie


def test_generate_train_simulate():
    market, logs = genie.generate(300, 3)
    assert market["advertisers"]
    stats = genie.validate_and_convert(logs)
    assert stats["conversion_success"] == 1.0
    assert genie.replay_accuracy(logs) == 1.0
    model = genie.train_click_model(logs)
    p = genie.click_predict(model, "mainline", 0.1, 1, 0)
    assert 0.0 < p < 1.0
    report = genie.simulate_report(
        logs, model, [{"reserve_score": 0.1}], ["grid_point_id"], 1)
    assert "reserve_score=0.1" in report


def test_metrics_and_errors():
    assert genie.eval_logloss([0.5, 0.5], [0.0, 1.0]) == pytest.approx(0.6931471805599453)
    with pytest.raises(genie.UndefinedMetricError):
        genie.eval_cumulative_error([0.1], [0.0])
    assert genie.poly_features([2.0, 3.0], 2) == [1, 2, 3, 4, 6, 9]
    with pytest.raises(genie.GenieError):
        genie.train_click_model("", json.dumps({"kind": "forest"}))


def test_regression_and_optimize():
    xs = [[0.1 * i] for i in range(11)]
    ys = [-(x[0] - 0.3) ** 2 for x in xs]
    coef = genie.fit_regression(xs, ys, "linear", 0.0, 2)
    assert coef[2] == pytest.approx(-1.0, abs=1e-9)
    with pytest.raises(genie.SingularityError):
        genie.fit_regression([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]], [1, 2, 3],
                             "linear", 0.0, 1)
    feasible, top, best = genie.optimize(
        xs, {"rpm": ys}, "max:rpm", [(0.0, 1.0)], 2, 3, 200, 2, 1)
    assert feasible
    assert top[0][0] == pytest.approx(0.3, abs=0.02)
