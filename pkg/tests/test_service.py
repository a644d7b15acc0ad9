import pytest
from fastapi.testclient import TestClient

from subvoc.service.app import app

from .fixtures import COLUMN_GROUPS, PUBLISHED_SCORES


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "ok"
    assert body["version"]


def test_configs_list(client):
    resp = client.get("/configs")
    assert resp.status_code == 200
    configs = resp.json()["configs"]
    assert len(configs) == 11
    by_id = {c["config_id"]: c for c in configs}
    assert by_id["C3"] == {"config_id": "C3", "x": "D", "y": "E", "z": "D"}


def test_validate_config(client):
    ok = client.post("/configs/validate", json={"x": "D", "y": "E", "z": "D"})
    assert ok.json() == {"valid": True, "config_id": "C3"}
    bad = client.post("/configs/validate", json={"x": "DE", "y": "D", "z": "D"})
    assert bad.json() == {"valid": False, "config_id": None}
    unknown = client.post("/configs/validate", json={"x": "Q", "y": "D", "z": "D"})
    assert unknown.status_code == 400


def test_plan_endpoint(client, tmp_path):
    files = {}
    for name in ("d.src", "d.tgt", "e.src", "e.tgt"):
        path = tmp_path / name
        path.write_text("a b c\nd e f\n", encoding="utf-8")
        files[name] = str(path)
    resp = client.post(
        "/plan",
        json={
            "d_source": files["d.src"],
            "d_target": files["d.tgt"],
            "e_source": files["e.src"],
            "e_target": files["e.tgt"],
            "out_dir": str(tmp_path / "out"),
            "merges": 10,
        },
    )
    assert resp.status_code == 200
    manifests = resp.json()["manifests"]
    assert [m["config_id"] for m in manifests] == [f"C{i}" for i in range(1, 12)]
    missing = client.post(
        "/plan",
        json={
            "d_source": str(tmp_path / "nope.src"),
            "d_target": files["d.tgt"],
            "e_source": files["e.src"],
            "e_target": files["e.tgt"],
            "out_dir": str(tmp_path / "out"),
        },
    )
    assert missing.status_code == 400


def test_bpe_learn_and_apply(client):
    lines = ["low low low low low", "lower lower newest newest", "newest newest newest newest widest widest widest"]
    learned = client.post("/bpe/learn", json={"lines": lines, "merges": 4})
    assert learned.status_code == 200
    rules = learned.json()["rules"]
    assert learned.json()["count"] == len(rules) == 4
    assert rules[0] == ["e", "s"]
    applied = client.post("/bpe/apply", json={"rules": rules, "lines": ["lowest"]})
    assert applied.status_code == 200
    assert applied.json()["segmented"] == ["lo@@ w@@ est"]


def test_bpe_learn_empty_is_error(client):
    resp = client.post("/bpe/learn", json={"lines": [], "merges": 5})
    assert resp.status_code == 400


def test_vocab_build_and_coverage(client):
    built = client.post("/vocab/build", json={"segmented_lines": ["a@@ b", "a@@ c"]})
    assert built.status_code == 200
    assert built.json()["entries"] == [["a@@", 2], ["b", 1], ["c", 1]]
    assert built.json()["total_count"] == 4
    cov = client.post(
        "/vocab/coverage",
        json={"entries": [["a@@", 2], ["b", 1]], "segmented_lines": ["a@@ b c"]},
    )
    assert cov.status_code == 200
    body = cov.json()
    assert body["token_coverage"] == pytest.approx(2 / 3)
    assert body["oov_types"] == [["c", 1]]


def test_score_endpoint(client):
    resp = client.post(
        "/score",
        json={
            "hypotheses": ["The cat sat on the mat today."] * 3,
            "references": ["The cat sat on the mat today."] * 3,
            "label": "sys",
            "test_set": "dev",
        },
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["scores"]["bleu"] == pytest.approx(100.0)
    assert body["scores"]["ter"] == 0.0
    assert len(body["bleu_segments"]) == 3
    slim = client.post(
        "/score",
        json={
            "hypotheses": ["a b"],
            "references": ["a b"],
            "include_segments": False,
        },
    )
    assert "bleu_segments" not in slim.json()
    mismatch = client.post(
        "/score", json={"hypotheses": ["a"], "references": ["a", "b"]}
    )
    assert mismatch.status_code == 400


def test_compare_endpoint(client):
    report = client.post(
        "/score",
        json={
            "hypotheses": ["the cat sat on a mat", "a dog ran home"] * 10,
            "references": ["the cat sat on the mat", "the dog ran home fast"] * 10,
        },
    ).json()
    resp = client.post(
        "/compare",
        json={
            "report_a": report,
            "report_b": report,
            "metric": "bleu",
            "iterations": 100,
            "sample_size": 20,
            "seed": 9,
        },
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["significant"] is False
    assert body["p_value"] == 1.0
    assert body["rng_algorithm"] == "numpy-pcg64"
    bad_metric = client.post(
        "/compare", json={"report_a": report, "report_b": report, "metric": "wer"}
    )
    assert bad_metric.status_code == 400


def test_rank_endpoint(client):
    records = []
    for label, groups in PUBLISHED_SCORES.items():
        for (_, test_set), (bleu_v, ter_v, chrf_v) in zip(COLUMN_GROUPS, groups):
            records.append({"label": label, "test_set": test_set, "metric": "bleu", "value": bleu_v})
            records.append({"label": label, "test_set": test_set, "metric": "ter", "value": ter_v})
            records.append({"label": label, "test_set": test_set, "metric": "chrf2", "value": chrf_v})
    resp = client.post("/rank", json={"records": records})
    assert resp.status_code == 200
    body = resp.json()
    assert body["ordering"][:3] == ["C3", "C1", "C9"]
    assert "mean rank" in body["aggregation"]
