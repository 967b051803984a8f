"""End-to-end smoke tests for the Python module, cross-checked against numpy
and (when installed) scikit-learn."""

import json
import math

import numpy as np
import pytest

wsnids = pytest.importorskip("wsnids")


def make_blobs(counts, n_features, spread, sigma, seed):
    rng = np.random.default_rng(seed)
    xs, ys = [], []
    for c, n in enumerate(counts):
        xs.append(rng.normal(c * spread, sigma, size=(n, n_features)))
        ys += [c] * n
    return np.vstack(xs), np.array(ys, dtype=np.int32)


def test_load_csv_and_encode(tmp_path):
    path = tmp_path / "toy.csv"
    path.write_text("a,b,Attack type\n1,2,Normal\n3,4,Blackhole\n5,6,Grayhole\n")
    loaded = wsnids.load_csv(str(path))
    assert loaded["features"].shape == (3, 2)
    assert loaded["feature_names"] == ["a", "b"]
    codes, names = wsnids.encode_labels(loaded["raw_labels"], "multiclass")
    assert list(codes) == [0, 2, 1]
    assert names == ["Normal", "Grayhole", "Blackhole", "TDMA", "Flooding"]
    dist = wsnids.class_distribution(list(codes), 5)
    assert dist["counts"] == [1, 1, 1, 0, 0]


def test_standardizer_matches_numpy():
    rng = np.random.default_rng(0)
    x = rng.normal(3.0, 2.5, size=(200, 4))
    scaler = wsnids.Standardizer(x)
    np.testing.assert_allclose(scaler.mean, x.mean(axis=0), rtol=1e-12)
    np.testing.assert_allclose(scaler.stdev, x.std(axis=0), rtol=1e-12)
    np.testing.assert_allclose(
        scaler.transform(x), (x - x.mean(axis=0)) / x.std(axis=0), rtol=1e-12
    )


def test_smote_tomek_balances():
    x, y = make_blobs([120, 30], 3, 5.0, 1.0, 1)
    result = wsnids.smote_tomek(x, list(y), seed=9)
    counts = result["report"]["after"]["counts"]
    assert counts[0] == counts[1] == 120 - 0 or abs(counts[0] - counts[1]) <= 4
    assert result["features"].shape[0] == sum(counts)


def test_smote_segment_geometry():
    x, y = make_blobs([40, 12], 3, 4.0, 1.0, 3)
    result = wsnids.smote(x, list(y), k_neighbors=3, seed=5)
    feats = result["features"]
    for row, base, neighbor, delta in result["provenance"]:
        assert 0.0 <= delta < 1.0
        lo = np.minimum(x[base], x[neighbor])
        hi = np.maximum(x[base], x[neighbor])
        assert np.all(feats[row] >= lo) and np.all(feats[row] <= hi)


def test_train_predict_save_load(tmp_path):
    x, y = make_blobs([60, 60], 4, 4.0, 1.0, 7)
    for kind in ["dt", "rf", "knn", "xgb", "lgb"]:
        config = wsnids.TrainConfig()
        config.rf.n_trees = 10
        config.gbt.rounds = 10
        model = wsnids.train(kind, x, list(y), 2, config)
        pred = model.predict(x)
        assert (pred == y).mean() > 0.95, kind
        scores = model.predict_scores(x)
        np.testing.assert_allclose(scores.sum(axis=1), 1.0, atol=1e-9)
        path = tmp_path / f"{kind}.json"
        model.save(str(path))
        loaded = wsnids.load_model(str(path))
        np.testing.assert_array_equal(loaded.predict(x), pred)


def test_metrics_against_sklearn():
    sk = pytest.importorskip("sklearn.metrics")
    rng = np.random.default_rng(11)
    y_true = rng.integers(0, 3, 500)
    y_pred = rng.integers(0, 3, 500)

    cm = wsnids.confusion_matrix(list(y_true), list(y_pred), 3)
    np.testing.assert_array_equal(cm, sk.confusion_matrix(y_true, y_pred))

    ours = wsnids.basic_metrics(cm, "macro")
    assert ours["accuracy"] == pytest.approx(100 * sk.accuracy_score(y_true, y_pred))
    assert ours["precision"] == pytest.approx(
        100 * sk.precision_score(y_true, y_pred, average="macro", zero_division=0)
    )
    assert ours["recall"] == pytest.approx(
        100 * sk.recall_score(y_true, y_pred, average="macro", zero_division=0)
    )

    scores = rng.random(500)
    y_bin = rng.integers(0, 2, 500)
    curve = wsnids.roc_curve(list(y_bin), list(scores))
    assert curve["auc"] == pytest.approx(sk.roc_auc_score(y_bin, scores), abs=1e-12)

    err = wsnids.regression_errors(list(y_true), list(y_pred))
    assert err["mae"] == pytest.approx(sk.mean_absolute_error(y_true, y_pred))
    assert err["mse"] == pytest.approx(sk.mean_squared_error(y_true, y_pred))
    assert err["rmse"] == pytest.approx(math.sqrt(sk.mean_squared_error(y_true, y_pred)))


def test_split_folds_partition():
    splits = wsnids.split_folds(25, 5, shuffle=True, seed=3)
    seen = sorted(i for _, test in splits for i in test)
    assert seen == list(range(25))


def test_run_experiment(tmp_path):
    x, y = make_blobs([150, 60], 4, 4.0, 1.0, 13)
    names = np.array(["Normal", "Blackhole"])
    path = tmp_path / "blobs.csv"
    header = ",".join(f"f{j}" for j in range(4)) + ",Attack type"
    rows = [",".join(str(v) for v in x[i]) + "," + names[y[i]] for i in range(len(y))]
    path.write_text(header + "\n" + "\n".join(rows) + "\n")

    report = wsnids.run_experiment(
        {
            "data": str(path),
            "task": "binary",
            "balance": "smotetomek",
            "models": ["dt", "knn"],
            "folds": 4,
            "seed": 42,
            "threads": 2,
        }
    )
    assert report["dataset"]["rows"] == 210
    assert report["resample"]["before"]["Attack"] == 60
    for name in ["dt", "knn"]:
        assert report["fold_means"][name]["accuracy"] > 95.0
    # the echoed config reproduces the run
    assert report["config"]["seed"] == 42
    assert json.dumps(report["config"])  # serializable
