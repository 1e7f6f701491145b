import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strokes.engine import (
    ConfigurationError,
    Palette,
    PaletteSet,
    Style,
    StrokesConfig,
    bundled_palettes,
    generate,
)

PALETTES = bundled_palettes()


def cfg(**kw):
    base = dict(palette_id="default", density=6, thickness=4, style=Style.CURVED, seed=1)
    base.update(kw)
    return StrokesConfig(**base)


class TestTypes:
    def test_bundled_palettes_has_six_including_study_three(self):
        assert len(PALETTES) == 6
        for pid in ("default", "gray", "bright"):
            assert pid in PALETTES

    def test_palette_rejects_background_in_fills(self):
        with pytest.raises(ConfigurationError):
            Palette(id="x", background="#FFFFFF", fills=("#FFFFFF", "#000000"))

    def test_palette_rejects_empty_fills(self):
        with pytest.raises(ConfigurationError):
            Palette(id="x", background="#FFFFFF", fills=())

    def test_duplicate_palette_ids_rejected(self):
        p = Palette(id="x", background="#FFFFFF", fills=("#000000",))
        with pytest.raises(ConfigurationError):
            PaletteSet([p, p])

    @pytest.mark.parametrize("density", [0, 12, -1])
    def test_density_out_of_range(self, density):
        with pytest.raises(ConfigurationError):
            cfg(density=density)

    @pytest.mark.parametrize("thickness", [0, 16])
    def test_thickness_out_of_range(self, thickness):
        with pytest.raises(ConfigurationError):
            cfg(thickness=thickness)

    def test_curve_count_is_power_of_density(self):
        assert cfg(density=1).curve_count == 2
        assert cfg(density=11).curve_count == 2048

    def test_thickness_maps_monotonically_to_width(self):
        widths = [cfg(thickness=t).stroke_width for t in range(1, 16)]
        assert all(w > 0 for w in widths)
        assert widths == sorted(widths)


class TestGenerate:
    def test_unknown_palette_is_configuration_error(self):
        with pytest.raises(ConfigurationError):
            generate(cfg(palette_id="nope"), PALETTES)

    @pytest.mark.parametrize("density", range(1, 12))
    def test_curve_count_law(self, density):
        piece = generate(cfg(density=density, seed=99), PALETTES)
        assert piece.curve_count == 2**density

    def test_density_one_gives_two_curves(self):
        for seed in (0, 5, 123456):
            assert generate(cfg(density=1, seed=seed), PALETTES).curve_count == 2

    def test_determinism(self):
        a = generate(cfg(seed=7), PALETTES)
        b = generate(cfg(seed=7), PALETTES)
        assert a == b

    @given(seed=st.integers(min_value=0, max_value=2**64 - 1))
    @settings(max_examples=30, deadline=None)
    def test_chaining_and_bounds(self, seed):
        piece = generate(cfg(seed=seed, density=5), PALETTES)
        for shape in piece.shapes:
            assert shape.curves
            for a, b in zip(shape.curves, shape.curves[1:]):
                assert a.end == b.start
            for c in shape.curves:
                for p in (c.start, c.end):
                    assert 0.0 <= p[0] < 1.0 and 0.0 <= p[1] < 1.0

    @given(seed=st.integers(min_value=0, max_value=2**64 - 1))
    @settings(max_examples=30, deadline=None)
    def test_control_point_offsets(self, seed):
        piece = generate(cfg(seed=seed, density=5), PALETTES)
        for shape in piece.shapes:
            for c in shape.curves:
                mid = ((c.start[0] + c.end[0]) / 2, (c.start[1] + c.end[1]) / 2)
                dx = abs(c.control[0] - mid[0])
                dy = abs(c.control[1] - mid[1])
                assert dx == pytest.approx(dy, abs=1e-12)
                assert 0.10 <= dx < 0.20

    def test_straight_style_has_no_control_points(self):
        piece = generate(cfg(style=Style.STRAIGHT, seed=3), PALETTES)
        assert all(c.control is None for s in piece.shapes for c in s.curves)

    def test_fills_come_from_palette(self):
        piece = generate(cfg(seed=8), PALETTES)
        fills = set(PALETTES.get("default").fills)
        assert all(s.fill in fills for s in piece.shapes)


def skeleton(piece):
    """Geometry without control points: endpoints and shape boundaries."""
    return tuple(tuple((c.start, c.end) for c in s.curves) for s in piece.shapes)


class TestParameterIsolation:
    def test_palette_change_keeps_geometry(self):
        a = generate(cfg(palette_id="default", seed=42), PALETTES)
        b = generate(cfg(palette_id="gray", seed=42), PALETTES)
        assert [s.curves for s in a.shapes] == [s.curves for s in b.shapes]

    def test_thickness_change_keeps_geometry_and_fills(self):
        a = generate(cfg(thickness=2, seed=42), PALETTES)
        b = generate(cfg(thickness=12, seed=42), PALETTES)
        assert a.shapes == b.shapes

    def test_style_change_keeps_endpoints_boundaries_and_fills(self):
        a = generate(cfg(style=Style.CURVED, seed=42), PALETTES)
        b = generate(cfg(style=Style.STRAIGHT, seed=42), PALETTES)
        assert skeleton(a) == skeleton(b)
        assert [s.fill for s in a.shapes] == [s.fill for s in b.shapes]
        assert all(c.control is not None for s in a.shapes for c in s.curves)
        assert all(c.control is None for s in b.shapes for c in s.curves)


class TestStoppingStatistics:
    # closed-form oracle: shape count = 1 + Binomial(N - 1, 1 - P)
    def test_mean_shape_count_matches_expectation(self):
        n_seeds = 10_000
        n = 64
        expected = 1 + (n - 1) * 0.5
        se = math.sqrt((n - 1) * 0.25) / math.sqrt(n_seeds)
        total = sum(
            len(generate(cfg(density=6, seed=s), PALETTES).shapes) for s in range(n_seeds)
        )
        mean = total / n_seeds
        assert abs(mean - expected) < 3 * se

    def test_sign_combinations_each_quarter(self):
        counts = {(1, 1): 0, (1, -1): 0, (-1, 1): 0, (-1, -1): 0}
        draws = 0
        for seed in range(2_000):
            piece = generate(cfg(density=5, seed=seed), PALETTES)
            for shape in piece.shapes:
                for c in shape.curves:
                    mid = ((c.start[0] + c.end[0]) / 2, (c.start[1] + c.end[1]) / 2)
                    sx = 1 if c.control[0] > mid[0] else -1
                    sy = 1 if c.control[1] > mid[1] else -1
                    counts[(sx, sy)] += 1
                    draws += 1
        se = math.sqrt(0.25 * 0.75 / draws)
        for combo, count in counts.items():
            assert abs(count / draws - 0.25) < 3 * se, combo
