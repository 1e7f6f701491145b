"""Strokes: seeded generative art, preference surveys, and predictors."""

from .engine import (
    ConfigurationError,
    EngineConstants,
    Palette,
    PaletteSet,
    Piece,
    StrokesConfig,
    Style,
    bundled_palettes,
    generate,
    render_svg,
)
from .rng import RandomStream, derive_rng
from .survey import (
    ART_ORDER,
    LIFE_ORDER,
    ArtChoice,
    Comparison,
    ComparisonSpec,
    Dataset,
    Group,
    LifeChoice,
    LifeItem,
    SubjectRecord,
    SurveyPlan,
    build_survey_plan,
    encode_features,
)

__version__ = "0.1.0"
