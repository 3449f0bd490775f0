"""Acceptance gate: one test per criterion, summarised as PASS/FAIL lines
at the end of the run (see conftest.py)."""

import contextlib
import io
import re
import time

import numpy as np
import pytest

from eigensign.classifier import (
    DistanceRow,
    euclid,
    level1_decision,
    level2_decision,
    score,
    stack_templates,
    weighted_term,
)
from eigensign.cli import main
from eigensign.evaluator import build_db, leave_one_out
from eigensign.imaging import BinaryMask, GrayImage, RgbImage, read_pnm, write_pnm
from eigensign.linalg import eigen_symmetric
from eigensign.model_store import TemplateDb, load_db, save_db
from eigensign.pipeline import features_of
from eigensign.synth import IMAGE_SIDE, MARGIN, colorize, make_archetypes, place, render_mask

from conftest import random_templates
from oracles import char_poly, det_cofactor, euclid_loop, real_roots, weighted_loop
from reference_tables import PLAIN, plain_rows, weighted_rows

criterion = pytest.mark.criterion


@pytest.fixture(scope="module")
def loo_run(corpus_dir):
    start = time.perf_counter()
    build = build_db(corpus_dir)
    report = leave_one_out(build.db, pipeline_seconds=build.seconds)
    return build, report, time.perf_counter() - start


@criterion(1, "level 2 >= level 1 and level 2 >= 0.90 under leave-one-out, <= 60 s")
def test_trend_on_synthetic_corpus(loo_run):
    build, report, seconds = loo_run
    l1, l2 = report.overall_level1, report.overall_level2
    print(f"\nleave-one-out on {report.total} images: level 1 {l1:.4f}, level 2 {l2:.4f}, {seconds:.1f} s")
    assert not build.skipped and report.total == 240
    assert l2 >= l1
    assert l2 >= 0.90
    assert seconds <= 60.0


@criterion(2, "eigensolver matches characteristic-polynomial roots, residual, trace and det, <= 5 s")
def test_eigensolver_oracle_suite():
    start = time.perf_counter()
    worst_root = worst_det = 0.0
    for n in (2, 3, 4):
        rng = np.random.default_rng(1000 + n)
        for _ in range(100):
            m = rng.normal(size=(n, n)) * rng.uniform(0.1, 10.0)
            a = (m + m.T) / 2
            d = eigen_symmetric(a)
            vals = d.values
            roots = real_roots(char_poly(a.tolist()))
            assert len(roots) == n
            worst_root = max(worst_root, float(np.max(np.abs(vals - np.array(roots)))))
            assert np.allclose(vals, roots, rtol=0.0, atol=1e-8)
            norm_inf = float(np.abs(a).sum(axis=1).max())
            for lam, v in zip(vals, d.vectors):
                assert np.abs(a @ v - lam * v).max() <= 1e-9 * (1.0 + norm_inf)
            tr = float(np.trace(a))
            assert abs(vals.sum() - tr) <= 1e-8 * (1.0 + abs(tr))
            det = det_cofactor(a.tolist())
            err = abs(float(np.prod(vals)) - det)
            worst_det = max(worst_det, err / max(abs(det), 1e-300))
            assert err <= 1e-6 * abs(det) + 1e-14
    seconds = time.perf_counter() - start
    print(f"\nworst root error {worst_root:.2e}, worst relative det error {worst_det:.2e}, {seconds:.2f} s")
    assert seconds <= 5.0


@criterion(3, "distance formulas match brute-force loops within 1e-12 on 1000 pairs")
def test_formula_oracles():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        a, b = rng.normal(size=50), rng.normal(size=50)
        ed = euclid(a, b)
        assert abs(ed - euclid_loop(a.tolist(), b.tolist())) <= 1e-12
        e1, e2 = rng.uniform(0, 10, size=2)
        assert abs(weighted_term(ed, e1, e2) - weighted_loop(ed, e1, e2)) <= 1e-12


@criterion(4, "reference distance tables recognise A at both levels")
def test_reference_tables():
    assert level2_decision(weighted_rows()) == "A"
    rows = plain_rows()
    labels = list(PLAIN)
    votes = [labels[i] for i in np.array(list(PLAIN.values())).argmin(axis=0)]
    assert votes.count("A") == 3
    assert level1_decision(rows, "vote") == "A"


def _self_match(templates):
    values, vectors = stack_templates(templates)
    for i, t in enumerate(templates):
        per_vector, weighted = score(t.features, values, vectors)
        sums = weighted.sum(axis=1)
        assert sums[i] == 0.0
        rows = [DistanceRow.from_terms(u.label, pv, w) for u, pv, w in zip(templates, per_vector, weighted)]
        assert level2_decision(rows) == t.label
        assert rows[i].weighted_sum == 0.0


@criterion(5, "every template classifies as itself with weighted sum exactly 0")
def test_self_match(corpus_build):
    _self_match(corpus_build.db.templates)
    rng = np.random.default_rng(5)
    for _ in range(10):
        _self_match(random_templates(rng, int(rng.integers(1, 40)), labels="ABCDEFGHIJKLMNOP"))


@criterion(6, "translating the foreground leaves the FeatureSet bit-identical (50 scenes)")
def test_translation_invariance():
    archetypes = make_archetypes(6, 24)
    for seed in range(50):
        rng = np.random.default_rng([6, seed])
        arch = archetypes[seed % len(archetypes)]
        shape = render_mask(arch, scale=float(rng.uniform(0.95, 1.05)))
        h, w = shape.shape
        feats = []
        for _ in range(3):
            r = int(rng.integers(MARGIN, IMAGE_SIDE - h - MARGIN + 1))
            c = int(rng.integers(MARGIN, IMAGE_SIDE - w - MARGIN + 1))
            feats.append(features_of(RgbImage(colorize(place(shape, (r, c))))))
        for f in feats[1:]:
            assert f == feats[0]
            assert f.values.tobytes() == feats[0].values.tobytes()
            assert f.vectors.tobytes() == feats[0].vectors.tobytes()


@criterion(7, "mean latency from the eval command is <= 0.5 s (soft target 0.05 s)")
def test_latency(corpus_dir):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        assert main(["eval", str(corpus_dir)]) == 0
    match = re.search(r"^mean latency: ([0-9.]+) s/image$", buf.getvalue(), re.M)
    assert match, "no latency line in eval output"
    latency = float(match.group(1))
    verdict = "within" if latency <= 0.05 else "ABOVE"
    print(f"\nmean latency {latency:.4f} s/image ({verdict} the 0.05 s soft target)")
    assert latency <= 0.5


@criterion(8, "PNM and model round trips are bit-exact (200 cases each)")
def test_round_trips():
    rng = np.random.default_rng(8)
    for i in range(200):
        w, h = (int(x) for x in rng.integers(1, 64, size=2))
        kind = i % 3
        if kind == 0:
            img = RgbImage(rng.integers(0, 256, (h, w, 3), dtype=np.uint8))
        elif kind == 1:
            img = GrayImage(rng.integers(0, 256, (h, w), dtype=np.uint8))
        else:
            img = BinaryMask(rng.random((h, w)) < rng.random())
        data = write_pnm(img)
        back = read_pnm(data)
        assert type(back) is type(img) and back == img
        assert write_pnm(back) == data
    for _ in range(200):
        k = int(rng.integers(1, 6))
        n = int(rng.integers(k, 60))
        db = TemplateDb(k, n, random_templates(rng, int(rng.integers(0, 8)), k=k, n=n))
        data = save_db(db)
        back = load_db(data)
        assert back == db
        assert save_db(back) == data
        for a, b in zip(db, back):
            assert a.features.values.tobytes() == b.features.values.tobytes()
            assert a.features.vectors.tobytes() == b.features.vectors.tobytes()
