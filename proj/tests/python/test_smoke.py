"""Smoke tests for the Python bindings, plus independent re-derivations of
CLI tables from corpus.jsonl using only the standard library."""
import collections
import csv
import datetime as dt
import json
import os
import pathlib
import subprocess
import sys

import numpy as np
import pytest

import wpforensics as wpf

ROOT = pathlib.Path(__file__).resolve().parents[2]
FIXTURE = ROOT / "tests" / "data" / "fixture"
DATA = ROOT / "data"


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    work = tmp_path_factory.mktemp("pipeline")
    corpus = work / "corpus.jsonl"
    code, out, err = wpf.run_cli(["extract", "--snapshot", str(FIXTURE / "snapshot"),
                                  "--config", str(DATA / "extraction.conf"), "--out", str(corpus)])
    assert code == 0, err
    for verb in (["report", "--out", str(work / "report")],
                 ["backdate", "--out", str(work / "backdate.csv")]):
        code, out, err = wpf.run_cli(["analyze", verb[0], "--corpus", str(corpus)] + verb[1:])
        assert code == 0, err
    records = [json.loads(line) for line in corpus.read_text(encoding="utf-8").splitlines()]
    return work, corpus, records


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def msk(iso):
    return dt.datetime.fromisoformat(iso)


def test_import_and_timezone():
    assert wpf.to_moscow("2022-03-04T21:30:00Z") == "2022-03-05T00:30:00+03:00"


def test_cli_usage_error_exit_code():
    code, _, _ = wpf.run_cli(["analyze", "nope"])
    assert code == 2


def test_monthly_counts_csv_is_a_projection(pipeline):
    work, _, records = pipeline
    expected = collections.Counter(
        (r["site_id"], r["language"], r["date_msk"][:7]) for r in records)
    rows = read_csv(work / "report" / "monthly_counts.csv")
    got = {(r["site"], r["language"], r["month"]): int(r["count"]) for r in rows}
    assert got == dict(expected)
    per_site = collections.Counter(r["site_id"] for r in records)
    for site, total in per_site.items():
        assert sum(v for k, v in got.items() if k[0] == site) == total


def test_weekend_share_csv_is_a_projection(pipeline):
    work, _, records = pipeline
    rows = {r["site"]: r for r in read_csv(work / "report" / "weekend_share.csv")}
    for site in {r["site_id"] for r in records} | {"All"}:
        sel = [r for r in records if site in ("All", r["site_id"])]
        pub = sum(msk(r["date_msk"]).weekday() >= 5 for r in sel) / len(sel)
        mod = sum(msk(r["modified_msk"]).weekday() >= 5 for r in sel) / len(sel)
        assert int(rows[site]["posts"]) == len(sel)
        assert float(rows[site]["publication_share"]) == pytest.approx(pub, abs=1e-6)
        assert float(rows[site]["modification_share"]) == pytest.approx(mod, abs=1e-6)


def test_backdate_csv_matches_pairwise_definition(pipeline):
    work, _, records = pipeline
    expected = set()
    for a in records:
        for b in records:
            if (a["site_id"] == b["site_id"] and b["post_id"] < a["post_id"]
                    and b["date_gmt"] > a["date_gmt"]):
                expected.add((a["site_id"], a["post_id"]))
    got = {(r["site"], int(r["post_id"])) for r in read_csv(work / "backdate.csv")}
    assert got == expected
    assert got == {("wof", 112)}


def test_translation_groups_csv_matches_union_find(pipeline):
    work, _, records = pipeline
    by_url = {r["url"]: (r["site_id"], r["post_id"]) for r in records}
    parent = {k: k for k in by_url.values()}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for r in records:
        for ref in r["translation_refs"]:
            if ref["url"] in by_url:
                parent[find((r["site_id"], r["post_id"]))] = find(by_url[ref["url"]])
    components = collections.defaultdict(set)
    for k in parent:
        components[find(k)].add(k)
    expected = sorted(sorted(c) for c in components.values())

    groups = collections.defaultdict(set)
    for row in read_csv(work / "report" / "translation_groups.csv"):
        groups[row["group_id"]].add((row["site"], int(row["post_id"])))
    assert sorted(sorted(g) for g in groups.values()) == expected


def test_corpus_binding_matches_file(pipeline):
    _, corpus, records = pipeline
    assert wpf.load_corpus(corpus) == records
    rows = wpf.monthly_counts(str(corpus))
    assert sum(r[3] for r in rows) == len(records)


def test_hdbscan_agrees_with_reference_implementation():
    from sklearn.cluster import HDBSCAN
    from sklearn.metrics import adjusted_rand_score

    rng = np.random.default_rng(5)
    centers = np.array([[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]])
    x = np.concatenate([c + rng.standard_normal((60, 2)) for c in centers])
    ours = np.array(wpf.hdbscan(x, min_cluster_size=25))
    ref = HDBSCAN(min_cluster_size=25).fit(x).labels_
    assert len(set(ours) - {-1}) == 3
    assert adjusted_rand_score(ref, ours) >= 0.95


def test_pca_recovers_planted_plane():
    rng = np.random.default_rng(2)
    basis = np.linalg.qr(rng.standard_normal((10, 2)))[0].T
    x = rng.standard_normal((30, 2)) @ basis + 3.0
    y = wpf.pca(x, 2)
    assert y.shape == (30, 2)
    # distances are preserved by a projection onto the containing plane
    d_x = np.linalg.norm(x[:, None] - x[None], axis=2)
    d_y = np.linalg.norm(y[:, None] - y[None], axis=2)
    assert np.max(np.abs(d_x - d_y)) < 1e-6


def test_embedding_round_trip(tmp_path):
    v = np.array([[1, 0, 0], [0, 0.6, 0.8]], dtype=np.float32)
    wpf.save_embeddings(str(tmp_path / "m"), ["a", "b"], v)
    header = json.loads((tmp_path / "m.json").read_text())
    assert header["dtype"] == "f32le" and header["count"] == 2 and header["dim"] == 3
    assert (tmp_path / "m.bin").stat().st_size == 2 * 3 * 4
    ids, back = wpf.load_embeddings(str(tmp_path / "m"))
    assert ids == ["a", "b"]
    assert back.tobytes() == v.tobytes()


def test_toy_embedder_output_loads(tmp_path):
    sents = tmp_path / "s.jsonl"
    sents.write_text('{"id":"x/1/0","text":"Gas prices rose again in Europe."}\n'
                     '{"id":"x/1/1","text":"Grain ships left the port."}\n')
    subprocess.run([sys.executable, str(FIXTURE / "gen_embeddings.py"), "--in", str(sents),
                    "--out", str(tmp_path / "e")], check=True)
    ids, m = wpf.load_embeddings(str(tmp_path / "e"))
    assert ids == ["x/1/0", "x/1/1"]
    assert np.allclose(np.linalg.norm(m, axis=1), 1.0, atol=1e-4)


def test_checked_in_embedding_fixture():
    ids, m = wpf.load_embeddings(str(FIXTURE / "sentences"))
    assert len(ids) == 40 and m.shape == (40, 32)
    lines = (FIXTURE / "sentences.jsonl").read_text(encoding="utf-8").splitlines()
    assert ids == [json.loads(line)["id"] for line in lines]


def test_text_helpers():
    sents = wpf.split_sentences("One two three four five. Six seven.")
    assert [s for s, _ in sents] == ["One two three four five.", "Six seven."]
    assert wpf.tokenize("The Red Dog", analysis=True) == ["red", "dog"]
    rows = wpf.top_ngrams([["red", "big", "dog"], ["red", "big", "dog"]], 10)
    assert rows[0][1] == "red big dog"


def test_backdate_binding():
    flags = wpf.detect_backdated([(1, "2022-03-10T00:00:00"), (2, "2022-03-01T00:00:00"),
                                  (3, "2022-03-11T00:00:00")])
    assert flags == [(2, "2022-03-10T00:00:00Z", 9)]


def test_lexicon_binding():
    scores = wpf.lexicon_scores(str(DATA / "demo_lexicon.txt"), "we love peace")
    assert scores["posemo"] == pytest.approx(200 / 3)
    assert wpf.lexicon_scores(str(DATA / "demo_lexicon.txt"), "") is None
