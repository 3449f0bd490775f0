import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eigensign.classifier import Template  # noqa: E402
from eigensign.features import FeatureSet  # noqa: E402
from eigensign.linalg import canonical_sign  # noqa: E402

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key = (marker.args[0], marker.args[1])
    failed = report.failed
    if report.when == "call" or failed:
        _criteria[key] = _criteria.get(key, True) and not failed


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), ok in sorted(_criteria.items(), key=lambda kv: kv[0][0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}")


def random_features(rng, k=5, n=50):
    """A valid FeatureSet: sorted non-negative values, unit sign-canonical vectors."""
    values = np.sort(rng.uniform(0.0, 5.0, k))[::-1]
    vectors = []
    for _ in range(k):
        v = rng.normal(size=n)
        vectors.append(canonical_sign(v / np.linalg.norm(v)))
    return FeatureSet(values, np.array(vectors))


def random_templates(rng, count, labels="ABCDEFGH", k=5, n=50):
    return [Template(labels[i % len(labels)], random_features(rng, k, n), f"seed-{i}") for i in range(count)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """The default 24-class x 10-sample synthetic corpus, seed 0."""
    from eigensign.synth import synth_corpus

    out = tmp_path_factory.mktemp("corpus")
    synth_corpus(out, seed=0)
    return out


@pytest.fixture(scope="session")
def corpus_build(corpus_dir):
    from eigensign.evaluator import build_db

    return build_db(corpus_dir)
