"""Generative engine for Strokes pieces.

A piece is a series of overlaid shapes on the unit square.  Each shape
is a chain of curves between random points; after every curve the shape
either continues or closes (probability 0.5 each), and a closed shape is
flood-filled with a random palette color.  Curves are straight segments
or quadratic Beziers whose control point is the segment midpoint nudged
by (+/-m, +/-m) with m uniform in [0.10, 0.20).

All randomness comes from two SplitMix64 substreams of the config seed:

* skeleton stream (seeded with the seed itself): start points, end
  points, continue/stop decisions, fill color indices — in that order;
* noise stream (seeded with seed XOR GAMMA): one (magnitude, sign
  combination) pair per curve, consumed only in curved style.

Keeping Bezier noise on its own substream means toggling any single
option — palette, thickness, or curved/straight — never moves a point
or shape boundary, so a pair of pieces differing in one option differs
by exactly that one cause.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Optional

from .rng import GAMMA, MASK64, RandomStream, derive_rng, substream_seed

DENSITY_RANGE = (1, 11)
THICKNESS_RANGE = (1, 15)

# thickness index -> stroke width in canvas units (monotone)
THICKNESS_UNIT = 0.002

# sign combinations for the control-point nudge, each drawn with p=0.25
SIGN_COMBINATIONS = ((1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0))

NOISE_STREAM_SALT = GAMMA


class ConfigurationError(ValueError):
    """A StrokesConfig or palette reference is out of range."""


class Style(str, Enum):
    CURVED = "curved"
    STRAIGHT = "straight"


def _check_color(color: str) -> None:
    if len(color) != 7 or color[0] != "#":
        raise ConfigurationError(f"colors must be '#RRGGBB', got {color!r}")
    try:
        int(color[1:], 16)
    except ValueError:
        raise ConfigurationError(f"colors must be '#RRGGBB', got {color!r}") from None


@dataclass(frozen=True)
class Palette:
    """Background color (also the stroke color) plus fillable colors."""

    id: str
    background: str
    fills: tuple[str, ...]

    def __post_init__(self):
        _check_color(self.background)
        if not self.fills:
            raise ConfigurationError(f"palette {self.id!r} has no fill colors")
        for c in self.fills:
            _check_color(c)
        if self.background in self.fills:
            raise ConfigurationError(
                f"palette {self.id!r} repeats its background {self.background} in fills"
            )


class PaletteSet:
    """Palettes keyed by unique id."""

    def __init__(self, palettes: list[Palette]):
        self._by_id: dict[str, Palette] = {}
        for p in palettes:
            if p.id in self._by_id:
                raise ConfigurationError(f"duplicate palette id {p.id!r}")
            self._by_id[p.id] = p

    def __contains__(self, palette_id: str) -> bool:
        return palette_id in self._by_id

    def __len__(self) -> int:
        return len(self._by_id)

    def ids(self) -> list[str]:
        return list(self._by_id)

    def get(self, palette_id: str) -> Palette:
        try:
            return self._by_id[palette_id]
        except KeyError:
            raise ConfigurationError(f"unknown palette {palette_id!r}") from None

    @classmethod
    def from_json(cls, text: str) -> "PaletteSet":
        raw = json.loads(text)
        return cls([
            Palette(id=pid, background=spec["background"], fills=tuple(spec["fills"]))
            for pid, spec in raw.items()
        ])

    @classmethod
    def from_file(cls, path) -> "PaletteSet":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def bundled_palettes() -> PaletteSet:
    """The six palettes shipped with the package (repo-defined colors)."""
    text = resources.files("strokes").joinpath("data/palettes.json").read_text("utf-8")
    return PaletteSet.from_json(text)


@dataclass(frozen=True)
class StrokesConfig:
    """The four free parameters plus seed that fully determine a piece."""

    palette_id: str
    density: int
    thickness: int
    style: Style
    seed: int

    def __post_init__(self):
        if not DENSITY_RANGE[0] <= self.density <= DENSITY_RANGE[1]:
            raise ConfigurationError(f"density must be in [1, 11], got {self.density}")
        if not THICKNESS_RANGE[0] <= self.thickness <= THICKNESS_RANGE[1]:
            raise ConfigurationError(f"thickness must be in [1, 15], got {self.thickness}")
        if not isinstance(self.style, Style):
            object.__setattr__(self, "style", Style(self.style))
        if not 0 <= self.seed <= MASK64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def curve_count(self) -> int:
        return 2 ** self.density

    @property
    def stroke_width(self) -> float:
        return THICKNESS_UNIT * self.thickness


@dataclass(frozen=True)
class EngineConstants:
    """Artist-chosen process constants."""

    continue_probability: float = 0.5
    noise_low: float = 0.10
    noise_high: float = 0.20
    direction_probability: float = 0.25

    def __post_init__(self):
        if not 0.0 < self.continue_probability < 1.0:
            raise ConfigurationError("continue probability must be in (0, 1)")
        if not self.noise_low < self.noise_high:
            raise ConfigurationError("noise range must have low < high")
        if abs(4.0 * self.direction_probability - 1.0) > 1e-12:
            raise ConfigurationError("the four sign combinations must sum to probability 1")


DEFAULT_CONSTANTS = EngineConstants()

Point = tuple[float, float]


@dataclass(frozen=True)
class Curve:
    start: Point
    end: Point
    control: Optional[Point] = None


@dataclass(frozen=True)
class Shape:
    curves: tuple[Curve, ...]
    fill: str


@dataclass(frozen=True)
class Piece:
    config: StrokesConfig
    shapes: tuple[Shape, ...]

    @property
    def curve_count(self) -> int:
        return sum(len(s.curves) for s in self.shapes)


def _point(rng: RandomStream) -> Point:
    x = rng.next_float()
    y = rng.next_float()
    return (x, y)


def generate(
    config: StrokesConfig,
    palettes: PaletteSet,
    constants: EngineConstants = DEFAULT_CONSTANTS,
) -> Piece:
    """Generate the piece determined by ``config``.

    Pure function: equal inputs give structurally equal pieces.
    """
    palette = palettes.get(config.palette_id)
    skeleton = derive_rng(config.seed)
    noise = derive_rng(substream_seed(config.seed, NOISE_STREAM_SALT))
    curved = config.style is Style.CURVED
    stop_probability = 1.0 - constants.continue_probability

    n = config.curve_count
    shapes: list[Shape] = []
    curves: list[Curve] = []
    current = _point(skeleton)

    for i in range(1, n + 1):
        end = _point(skeleton)
        control = None
        if curved:
            m = noise.uniform(constants.noise_low, constants.noise_high)
            sx, sy = SIGN_COMBINATIONS[noise.randrange(4)]
            mid_x = (current[0] + end[0]) / 2.0
            mid_y = (current[1] + end[1]) / 2.0
            control = (mid_x + sx * m, mid_y + sy * m)
        curves.append(Curve(start=current, end=end, control=control))

        stop = i == n or skeleton.next_float() < stop_probability
        if stop:
            fill = palette.fills[skeleton.randrange(len(palette.fills))]
            shapes.append(Shape(curves=tuple(curves), fill=fill))
            curves = []
            if i < n:
                current = _point(skeleton)
        else:
            current = end

    return Piece(config=config, shapes=tuple(shapes))


def _fmt(value: float) -> str:
    """Fixed decimal formatting: 6 fractional digits, no exponent."""
    return f"{value:.6f}"


def render_svg(piece: Piece, palettes: PaletteSet, size_px: int) -> bytes:
    """Render ``piece`` to a byte-deterministic SVG document.

    Shapes are emitted in paint order, each as one closed path (the Z
    command supplies the straight line back to the shape's first point),
    filled with the shape color under the nonzero rule and stroked in
    the palette background at the configured thickness.
    """
    if size_px <= 0:
        raise ConfigurationError(f"size_px must be positive, got {size_px}")
    palette = palettes.get(piece.config.palette_id)
    stroke = _fmt(piece.config.stroke_width)

    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{size_px}" height="{size_px}" viewBox="0 0 1 1">',
        f'<rect x="0" y="0" width="1" height="1" fill="{palette.background}"/>',
    ]
    for shape in piece.shapes:
        first = shape.curves[0].start
        parts = [f"M {_fmt(first[0])} {_fmt(first[1])}"]
        for curve in shape.curves:
            if curve.control is not None:
                parts.append(
                    f"Q {_fmt(curve.control[0])} {_fmt(curve.control[1])} "
                    f"{_fmt(curve.end[0])} {_fmt(curve.end[1])}"
                )
            else:
                parts.append(f"L {_fmt(curve.end[0])} {_fmt(curve.end[1])}")
        parts.append("Z")
        d = " ".join(parts)
        lines.append(
            f'<path d="{d}" fill="{shape.fill}" fill-rule="nonzero" '
            f'stroke="{palette.background}" stroke-width="{stroke}"/>'
        )
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")
