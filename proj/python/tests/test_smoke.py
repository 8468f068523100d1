import json
import math
import random
from pathlib import Path

import pytest

import fundtext

FIXTURE = Path(__file__).resolve().parents[2] / "tests" / "data" / "documents_small.jsonl"


def test_chunk_paragraph_windows():
    assert fundtext.chunk_paragraph(420) == [(0, 400), (350, 420)]
    assert fundtext.chunk_paragraph(30) == []
    assert fundtext.chunk_paragraph(60) == [(0, 60)]


def test_normalize_and_language_filter():
    tokens = fundtext.normalize_for_lda("The fund's performance was strong in the quarter.")
    assert "the" not in tokens
    assert all(len(t) >= 3 for t in tokens)
    assert fundtext.filter_language("the fund and the manager of the strategy")
    assert not fundtext.filter_language("der Fonds und die Strategie sind gut")


def test_fit_lda_separates_planted_themes():
    rng = random.Random(3)
    themes = [["equity", "hedge", "short", "long", "alpha"], ["audit", "custody", "legal", "risk", "notice"]]
    docs, truth = [], []
    for i in range(40):
        k = i % 2
        docs.append([rng.choice(themes[k]) for _ in range(40)])
        truth.append(k)
    out = fundtext.fit_lda(docs, num_topics=2, iterations=60, seed=5)
    assert len(out["phi"]) == 2
    for row in out["phi"]:
        assert math.isclose(sum(row), 1.0, rel_tol=1e-9)
    for row in out["theta"]:
        assert math.isclose(sum(row), 1.0, rel_tol=1e-9)
    labels = out["assignments"]
    mapping = {t: l for t, l in zip(truth, labels)}
    assert len(set(mapping.values())) == 2
    assert all(mapping[t] == l for t, l in zip(truth, labels))
    assert len(out["log_likelihood"]) == 60


def test_coherence_bounds():
    streams = [["alpha", "beta", "gamma"], ["alpha", "beta"], ["delta", "gamma"]]
    umass = fundtext.coherence_umass([["alpha", "beta"]], streams, top_n=2)
    # D(alpha, beta) = 2, D(alpha) = 2, epsilon 1
    assert umass["aggregate"] == pytest.approx(math.log(3 / 2))
    cv = fundtext.coherence_cv([["alpha", "beta", "gamma"]], streams, top_n=3, window=3)
    assert -1.0 <= cv["aggregate"] <= 1.0
    assert cv["metric"] == "c_v"


def test_disclosure_prf():
    csv = (
        "model_id,topic_id,category,percent,n_samples,n_members\n"
        "m,0,Disclosure,10,20,100\n"
        "m,0,Market Update,90,20,100\n"
        "m,1,Disclosure,90,20,100\n"
        "m,1,Market Update,10,20,100\n"
    )
    r = fundtext.disclosure_prf(csv, "m")
    assert r["precision"] == pytest.approx(0.9)
    assert r["recall"] == pytest.approx(0.9)
    assert r["f1"] == pytest.approx(fundtext.f1_from_pr(0.9, 0.9))
    with pytest.raises(fundtext.ValidationError):
        fundtext.disclosure_prf("a,b\n", "m")


def test_stability_counts_excludes_outliers():
    ids = ["a", "b", "c", "d"]
    counts = fundtext.stability_counts(ids, [0, 0, 1, fundtext.OUTLIER], ids, [1, 1, 0, 0])
    assert counts == [[0, 2], [1, 0]]


def test_statistics():
    assert fundtext.pearson_r([1, 2, 3], [1, 2, 3]) is None
    assert fundtext.pearson_r([1, 2, 3, 4, 5, 6], [2, 4, 6, 8, 10, 12]) == pytest.approx(1.0)
    t = fundtext.t_test([0.1, 0.2, 0.3])
    assert t["t"] == pytest.approx(2 * math.sqrt(3))
    assert t["df"] == 2
    assert t["p_value"] == pytest.approx(0.0741799, abs=1e-6)
    assert fundtext.t_test([0.5])["p_value"] is None
    assert fundtext.boxplot_stats([1, 2, 3, 4]) == pytest.approx([1, 1.75, 2.5, 3.25, 4])


def test_run_command_chunk(tmp_path):
    cfg = tmp_path / "c.json"
    out_dir = tmp_path / "out"
    cfg.write_text(json.dumps({"paths": {"corpus": str(FIXTURE), "output_dir": str(out_dir)}}))
    code, _, err = fundtext.run_command(["--config", str(cfg), "chunk"])
    assert code == 0, err
    ids = [json.loads(l)["chunk_id"] for l in (out_dir / "chunks.jsonl").read_text().splitlines()]
    assert ids == ["alpha:0:0", "alpha:0:1", "gamma:1:0"]
    assert (out_dir / "manifest_chunk.json").exists()


def test_run_command_exit_codes(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"paths": {"output_dir": str(tmp_path / "out")}}))
    code, _, err = fundtext.run_command(["--config", str(cfg), "ingest"])
    assert code == 2
    assert "paths.corpus" in err
    assert "report" in fundtext.subcommands()
