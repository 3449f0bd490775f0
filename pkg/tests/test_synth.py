import numpy as np
import pytest

from eigensign.imaging import load_image
from eigensign.synth import (
    ALPHABET,
    Jitter,
    class_labels,
    make_archetypes,
    render_mask,
    render_sample,
    synth_corpus,
)

from oracles import flood_components


def test_labels():
    assert class_labels(24) == list(ALPHABET)
    assert len(set(class_labels(30))) == 30


def test_same_seed_same_corpus(tmp_path):
    a = synth_corpus(tmp_path / "a", seed=3, classes=3, samples=2)
    b = synth_corpus(tmp_path / "b", seed=3, classes=3, samples=2)
    assert [p.relative_to(tmp_path / "a") for p in a] == [p.relative_to(tmp_path / "b") for p in b]
    assert all(x.read_bytes() == y.read_bytes() for x, y in zip(a, b))


def test_different_seeds_differ(tmp_path):
    a = synth_corpus(tmp_path / "a", seed=1, classes=2, samples=1)
    b = synth_corpus(tmp_path / "b", seed=2, classes=2, samples=1)
    assert any(x.read_bytes() != y.read_bytes() for x, y in zip(a, b))


def test_zero_jitter_samples_are_identical(tmp_path):
    paths = synth_corpus(tmp_path, seed=0, classes=2, samples=3, jitter=Jitter.none())
    for label in ("A", "B"):
        blobs = [p.read_bytes() for p in paths if p.parent.name == label]
        assert len(blobs) == 3 and len(set(blobs)) == 1


def test_layout(tmp_path):
    paths = synth_corpus(tmp_path, seed=0, classes=2, samples=2)
    assert [p.relative_to(tmp_path).as_posix() for p in paths] == ["A/A_00.ppm", "A/A_01.ppm", "B/B_00.ppm", "B/B_01.ppm"]
    img = load_image(paths[0])
    assert (img.width, img.height) == (128, 128)


def test_archetypes_are_distinct_connected_shapes():
    masks = [render_mask(a) for a in make_archetypes(0, 24)]
    assert len({m.tobytes() + bytes(m.shape) for m in masks}) == 24
    for m in masks:
        assert len(flood_components(m.tolist())) == 1


def test_noise_is_bounded():
    arch = make_archetypes(0, 2)[0]
    rng = np.random.default_rng(0)
    clean = render_sample(arch, np.random.default_rng(0), Jitter(translate=0, scale=0, noise=0)).pixels
    noisy = render_sample(arch, rng, Jitter(translate=0, scale=0, noise=0.02)).pixels
    changed = np.any(clean != noisy, axis=2).mean()
    assert 0 < changed <= 0.03


@pytest.mark.parametrize("kwargs", [{"scale": 0.06}, {"noise": 0.03}, {"translate": -1}])
def test_jitter_limits(kwargs):
    with pytest.raises(ValueError):
        Jitter(**kwargs)


def test_corpus_size_guard(tmp_path):
    with pytest.raises(ValueError):
        synth_corpus(tmp_path, classes=1)
