import math

import numpy as np
import pytest

from somqe import synth
from somqe.imageio import ImageBuffer
from somqe.synth import DotFieldSpec, LesionSpec

# brute-force scan of (x/22)^2 + (y/13)^2 <= 1 over the 45x27 bounding box
ELLIPSE_LATTICE_COUNT = 891


def flat(value=200, size=(80, 100), depth=8):
    return ImageBuffer(np.full(size, value, dtype=np.uint16 if depth == 16 else np.uint8), depth)


def test_lattice_count_oracle():
    n = sum(1 for y in range(-13, 14) for x in range(-22, 23) if (x / 22) ** 2 + (y / 13) ** 2 <= 1)
    assert n == ELLIPSE_LATTICE_COUNT
    assert abs(n - math.pi * 22 * 13) < 10


def test_lesion_modifies_exactly_the_ellipse():
    img = flat()
    spec = LesionSpec(center=(50, 40))
    out = synth.inject_lesion(img, spec)
    changed = out.gray() != img.gray()
    assert changed.sum() == ELLIPSE_LATTICE_COUNT
    for y, x in zip(*np.nonzero(changed)):
        assert ((x - 50) / 22) ** 2 + ((y - 40) / 13) ** 2 <= 1
    assert changed[40, 50]
    assert not changed[:, :28].any() and not changed[:, 73:].any()
    assert not changed[:27].any() and not changed[54:].any()


def test_checker_pattern_uses_both_levels():
    out = synth.inject_lesion(flat(), LesionSpec(center=(50, 40)))
    vals = out.gray()[synth.ellipse_mask(80, 100, LesionSpec(center=(50, 40)))]
    assert set(vals.tolist()) == {96, 160}
    # 2x2 blocks
    assert out.gray()[40, 50] == out.gray()[40, 51] == out.gray()[41, 50] == out.gray()[41, 51]
    assert out.gray()[40, 52] != out.gray()[40, 50]


def test_lesion_idempotent():
    spec = LesionSpec(center=(50, 40))
    once = synth.inject_lesion(flat(), spec)
    assert synth.inject_lesion(once, spec) == once


def test_solid_lesion():
    out = synth.inject_lesion(flat(), LesionSpec(center=(50, 40), pattern="solid", gray_levels=(30, 30)))
    assert (out.gray() == 30).sum() == ELLIPSE_LATTICE_COUNT


def test_lesion_errors():
    with pytest.raises(ValueError, match="does not fit"):
        synth.inject_lesion(flat(), LesionSpec(center=(10, 40)))
    with pytest.raises(ValueError, match="grayscale"):
        synth.inject_lesion(ImageBuffer(np.zeros((80, 100, 3), dtype=np.uint8)), LesionSpec(center=(50, 40)))


def test_poisson_zero_stays_zero():
    out = synth.add_poisson_noise(flat(0), seed=3)
    assert not out.pixels.any()


def test_poisson_deterministic_and_shape():
    img = flat(120)
    a, b = synth.add_poisson_noise(img, 5), synth.add_poisson_noise(img, 5)
    assert a == b
    assert a.pixels.shape == img.pixels.shape
    assert a != synth.add_poisson_noise(img, 6)


@pytest.mark.parametrize("lam", [3.0, 12.0, 100.0])
def test_poisson_moments(lam):
    draws = synth.poisson_draws(np.full(100_000, lam), np.random.Generator(np.random.PCG64(1)))
    # 3 sigma of the mean is 3*sqrt(lam/1e5), widened a little
    tol = 3.2 * math.sqrt(lam / 1e5)
    assert abs(draws.mean() - lam) <= tol
    assert abs(draws.var() - lam) <= 0.03 * lam
    assert draws.min() >= 0


def test_poisson_lambda_100_bounds():
    d = synth.poisson_draws(np.full(100_000, 100.0), np.random.Generator(np.random.PCG64(2024)))
    assert 99.7 <= d.mean() <= 100.3
    assert 97 <= d.var() <= 103


def test_poisson_clamps_to_range():
    out = synth.add_poisson_noise(flat(250), seed=0)
    assert out.pixels.max() == 255
    out16 = synth.add_poisson_noise(flat(65530, depth=16), seed=0)
    assert out16.pixels.max() == 65535


def test_dot_intensity():
    assert synth.dot_intensity(255, 0.7) == 45
    assert (255 - 45) / (255 + 45) == pytest.approx(0.7)


def test_dot_field_deterministic():
    spec = DotFieldSpec()
    assert synth.generate_dot_field(spec, 4) == synth.generate_dot_field(spec, 4)


def test_dot_field_levels_and_count():
    spec = DotFieldSpec(width=200, height=200, n_dots=10)
    img = synth.generate_dot_field(spec, 1).gray()
    assert set(np.unique(img).tolist()) == {45, 255}
    assert abs((img == 45).sum() - 10 * math.pi * 25) < 60


def _target_pixels(spec, seed):
    cx, cy = synth.place_dots(spec, seed)[spec.target_index]
    r = spec.base_radius * spec.scale
    return sum(1 for y in range(spec.height) for x in range(spec.width)
               if (x - cx) ** 2 + (y - cy) ** 2 <= r * r)


def test_target_area_scales_quadratically():
    base = DotFieldSpec(width=96, height=96, n_dots=4, base_radius=10.0)
    from dataclasses import replace
    ratio = _target_pixels(replace(base, scale=1.3), 2) / _target_pixels(base, 2)
    assert ratio == pytest.approx(1.69, rel=0.10)


def test_scales_differ_only_inside_target_disc():
    from dataclasses import replace
    spec = DotFieldSpec()
    imgs = [synth.generate_dot_field(replace(spec, scale=s), 11).gray() for s in (1.0, 1.05, 1.1, 1.3)]
    cx, cy = synth.place_dots(spec, 11)[0]
    y, x = np.mgrid[0:spec.height, 0:spec.width]
    outside = (x - cx) ** 2 + (y - cy) ** 2 > (spec.base_radius * spec.max_scale) ** 2
    for img in imgs[1:]:
        assert np.array_equal(img[outside], imgs[0][outside])
        assert (img != imgs[0]).any()


def test_dots_do_not_overlap_and_stay_inside():
    spec = DotFieldSpec()
    c = synth.place_dots(spec, 8)
    r = np.full(len(c), spec.base_radius)
    r[0] *= spec.max_scale
    assert np.all(c - r[:, None] >= 0)
    assert np.all(c[:, 0] + r <= spec.width - 1) and np.all(c[:, 1] + r <= spec.height - 1)
    for i in range(len(c)):
        for j in range(i):
            assert math.dist(c[i], c[j]) >= r[i] + r[j] + spec.min_gap


def test_dot_placement_budget():
    with pytest.raises(ValueError, match="could not place"):
        synth.place_dots(DotFieldSpec(width=40, height=40, n_dots=30), 0)


def test_phantom_is_deterministic_8bit():
    a = synth.phantom(synth.PhantomSpec(), 3)
    assert a == synth.phantom(synth.PhantomSpec(), 3)
    assert a.bit_depth == 8 and a.pixels.shape == (128, 128, 1)
    assert a.gray()[64, 64] > 100 > a.gray()[2, 2]
