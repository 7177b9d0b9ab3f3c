import math
import os
from pathlib import Path

import numpy as np
import pytest

import coword_map as cm

SOURCE = Path(os.environ.get("COWORD_SOURCE_DIR", Path(__file__).resolve().parents[2]))


def test_tokenize():
    assert cm.tokenize("The Impact Factor.", stopwords={"the"}, min_token_length=1) == [
        "impact",
        "factor",
    ]
    assert cm.tokenize("A1 B2 c", stopwords=set()) == ["a1", "b2"]
    assert cm.tokenize("") == []


def test_word_doc_matrix_and_statistics():
    m = cm.word_doc_matrix(["a a b", "b"], min_token_length=1, stopwords=set())
    assert m.col_labels == ["a", "b"]
    assert m.counts.tolist() == [[2, 1], [0, 1]]
    assert m.total == 4

    table = cm.WordDocMatrix(np.array([[10, 20], [30, 40]], dtype=np.int64), ["d1", "d2"], ["a", "b"])
    assert np.allclose(cm.expected_matrix(table), [[12, 18], [28, 42]])
    chi = cm.chi_square(table, yates=False)
    assert chi["total"] == pytest.approx(4 / 12 + 4 / 18 + 4 / 28 + 4 / 42)
    assert sum(chi["per_term"]) == pytest.approx(chi["total"])
    values, sums = cm.obs_exp(table)
    assert values[0, 0] == pytest.approx(10 / 12)
    assert len(sums) == 2
    assert cm.select_terms(table, "freq", top=1) == ["b"]


def test_tfidf():
    counts = np.ones((8, 2), dtype=np.int64)
    counts[:, 0] = 0
    counts[4, 0] = 3
    m = cm.WordDocMatrix(counts, [f"d{i}" for i in range(8)], ["rare", "all"])
    assert cm.tfidf_per_term(m) == [9.0, 0.0]
    assert cm.tfidf_matrix(m)[4, 0] == 9.0


def test_similarity_and_cooccurrence():
    x = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 2.0], [3.0, 6.0, 1.0]])
    cos = cm.cosine_matrix(x)
    assert cos.shape == (3, 3)
    assert np.allclose(np.diag(cos), 1.0)
    corr, labels, dropped = cm.pearson_matrix(x)
    assert corr[0, 1] == pytest.approx(1.0)
    assert corr[0, 2] == pytest.approx(-1.0)
    assert dropped == []
    m = cm.WordDocMatrix(np.array([[2, 1], [0, 1]], dtype=np.int64), ["d1", "d2"], ["a", "b"])
    assert cm.cooccurrence(m).tolist() == [[4, 2], [2, 2]]


def test_factors():
    rng = np.random.default_rng(3)
    data = rng.normal(size=(20, 8))
    sol = cm.factor_analyze(data, factors=8)
    corr = np.corrcoef(data, rowvar=False)
    assert np.allclose(sol.loadings @ sol.loadings.T, corr, atol=1e-8)
    rotated, rotation, criterion = cm.varimax(cm.factor_analyze(data, factors=3))
    assert np.allclose(rotation.T @ rotation, np.eye(3), atol=1e-10)
    assert rotated.rotated
    assert all(b >= a - 1e-12 for a, b in zip(criterion, criterion[1:]))
    assert len(cm.assign_factors(rotated)) == 8
    u, s, v = cm.truncated_svd(np.diag([3.0, 1.0]), 2)
    assert np.allclose(s, [3.0, 1.0])


def test_layouts_and_pajek():
    pos = cm.fruchterman_reingold(["a", "b", "c"], [(0, 1, 1.0), (1, 2, 1.0)], seed=5)
    again = cm.fruchterman_reingold(["a", "b", "c"], [(0, 1, 1.0), (1, 2, 1.0)], seed=5)
    assert np.array_equal(pos, again)
    assert ((pos >= 0) & (pos <= 1)).all()
    kk = cm.kamada_kawai(["a", "b", "c"], [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    sides = [math.dist(kk[i], kk[j]) for i, j in ((0, 1), (1, 2), (0, 2))]
    assert max(sides) - min(sides) < 1e-3
    text = cm.format_pajek_net(["a", "b"], [(0, 1, 0.25)])
    assert text == (
        '*Vertices 2\n1 "a" 0.5000 0.5000 0.5000\n2 "b" 0.5000 0.5000 0.5000\n*Edges\n1 2 0.2500\n'
    )
    assert cm.parse_pajek_net(text) == (["a", "b"], [(0, 1, 0.25)])


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError, match="obsexp"):
        cm.select_terms(cm.word_doc_matrix(["alpha beta"]), "bogus")
    with pytest.raises(cm.CowordError, match="empty"):
        cm.word_doc_matrix([])


def test_pipeline(tmp_path):
    out = tmp_path / "out"
    options = {"config": str(SOURCE / "data" / "micro.conf"), "out": str(out)}
    cm.run_pipeline(options)
    for name in cm.ARTIFACTS:
        assert (out / name).exists(), name
    golden = SOURCE / "tests" / "golden" / "micro" / "map.net"
    assert (out / "map.net").read_bytes() == golden.read_bytes()
    assert cm.run_stage("terms", options) is True
