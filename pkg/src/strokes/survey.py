"""Survey schema: 24 art comparisons, 12 life questions, subject records.

The art side presents 8 two-way comparisons (default configuration vs.
one edited option) repeated over 3 seed sets, each set generated from
one piece seed shared by all 8 comparisons in that set.  The life side
asks 12 fixed two-way questions.  A complete record therefore holds
24 + 12 = 36 binary answers.

Feature sign convention (frozen): choosing the Alternative art version
or the Positive life option encodes as +1, Default/Negative as -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .engine import Style, StrokesConfig
from .rng import MASK64, derive_rng

PAIR_PROMPT = "Which visual pattern appeals to you more?"

SEED_SETS = (0, 1, 2)


class Comparison(str, Enum):
    GRAY_PALETTE = "gray_palette"
    BRIGHT_PALETTE = "bright_palette"
    SPARSER = "sparser"
    SPARSEST = "sparsest"
    THIN = "thin"
    THICKER = "thicker"
    THICKEST = "thickest"
    STRAIGHT_LINES = "straight_lines"


class LifeItem(str, Enum):
    REFLECT = "reflect"
    MILK_CHOCOLATE = "milk_chocolate"
    WINE = "wine"
    COUNTRY_MUSIC = "country_music"
    DESIGN_EXPOSURE = "design_exposure"
    ARTISTIC = "artistic"
    MALE = "male"
    INTROVERT = "introvert"
    SWEET_FOOD = "sweet_food"
    CUBISM = "cubism"
    MODERN_INTERIOR = "modern_interior"
    BOHEMIAN = "bohemian"


ART_ORDER = tuple(Comparison)
LIFE_ORDER = tuple(LifeItem)


class ArtChoice(str, Enum):
    DEFAULT = "default"
    ALTERNATIVE = "alternative"


class LifeChoice(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class Group(str, Enum):
    """Feature groups: the 8 art items, the 12 life items, or all 20."""

    ART = "A"
    LIFE = "L"
    UNION = "U"


class ValidationError(ValueError):
    pass


# Baseline configuration and the single-parameter edit for each comparison.
DEFAULT_PIECE = dict(palette_id="default", density=6, thickness=4, style=Style.CURVED)

_EDITS: dict[Comparison, dict] = {
    Comparison.GRAY_PALETTE: dict(palette_id="gray"),
    Comparison.BRIGHT_PALETTE: dict(palette_id="bright"),
    Comparison.SPARSER: dict(density=4),
    Comparison.SPARSEST: dict(density=2),
    Comparison.THIN: dict(thickness=2),
    Comparison.THICKER: dict(thickness=8),
    Comparison.THICKEST: dict(thickness=12),
    Comparison.STRAIGHT_LINES: dict(style=Style.STRAIGHT),
}


@dataclass(frozen=True)
class ComparisonSpec:
    """One art comparison: the default piece vs. a one-edit variant."""

    id: Comparison
    default_config: StrokesConfig
    alternative_config: StrokesConfig

    def __post_init__(self):
        if self.default_config.seed != self.alternative_config.seed:
            raise ValidationError("both sides of a comparison must share one seed")
        diffs = sum(
            getattr(self.default_config, f) != getattr(self.alternative_config, f)
            for f in ("palette_id", "density", "thickness", "style")
        )
        if diffs != 1:
            raise ValidationError(f"comparison must differ in exactly one parameter, got {diffs}")

    @classmethod
    def build(cls, comparison: Comparison, piece_seed: int) -> "ComparisonSpec":
        default = StrokesConfig(seed=piece_seed, **DEFAULT_PIECE)
        alternative = replace(default, **_EDITS[comparison])
        return cls(id=comparison, default_config=default, alternative_config=alternative)


@dataclass(frozen=True)
class LifeQuestion:
    id: LifeItem
    prompt: str
    positive_option: str
    negative_option: str


LIFE_QUESTIONS: dict[LifeItem, LifeQuestion] = {
    q.id: q
    for q in (
        LifeQuestion(LifeItem.REFLECT, "Do you reflect on a regular basis (e.g. keep a journal)?", "Yes", "No"),
        LifeQuestion(LifeItem.MILK_CHOCOLATE, "Which chocolate do you prefer?", "Milk", "Dark"),
        LifeQuestion(LifeItem.WINE, "Which drink do you prefer?", "Wine", "Beer"),
        LifeQuestion(LifeItem.COUNTRY_MUSIC, "Which music do you prefer?", "Country", "Rock"),
        LifeQuestion(LifeItem.DESIGN_EXPOSURE, "Do you have any exposure to design principles?", "Yes", "No"),
        LifeQuestion(LifeItem.ARTISTIC, "Are you artistically inclined?", "Yes", "No"),
        LifeQuestion(LifeItem.MALE, "Which gender do you associate with more?", "Male", "Female"),
        LifeQuestion(LifeItem.INTROVERT, "What personality type do you associate with more?", "Introvert", "Extrovert"),
        LifeQuestion(LifeItem.SWEET_FOOD, "Which food do you prefer?", "Sweet", "Savory"),
        LifeQuestion(LifeItem.CUBISM, "Which style of painting appeals to you more?", "Cubism", "Renaissance"),
        LifeQuestion(LifeItem.MODERN_INTERIOR, "If you could set up your home however you liked, which style would you go with?", "Modern", "Traditional"),
        LifeQuestion(LifeItem.BOHEMIAN, "Irrespective of your gender, which fashion style do you relate to more?", "Bohemian chic", "Business casual"),
    )
}


@dataclass(frozen=True)
class PairPresentation:
    """One screen of the art survey: which comparison, which seed set,
    and whether the default piece is shown on the left."""

    comparison: Comparison
    seed_set: int
    default_on_left: bool


@dataclass(frozen=True)
class SurveyPlan:
    session_seed: int
    piece_seeds: tuple[int, int, int]
    pairs: tuple[PairPresentation, ...]
    life_order: tuple[LifeItem, ...]

    def piece_seed_for(self, seed_set: int) -> int:
        return self.piece_seeds[seed_set]


def build_survey_plan(session_seed: int, piece_seeds: tuple[int, int, int]) -> SurveyPlan:
    """Deterministic presentation plan for one survey session.

    Within each of the 3 seed sets the 8 comparisons are shuffled and
    each pair gets a left/right coin flip; the 12 life questions are
    shuffled once.  All ordering randomness comes from the session seed,
    so equal inputs give equal plans.
    """
    if len(piece_seeds) != 3 or len(set(piece_seeds)) != 3:
        raise ValidationError("exactly 3 pairwise-distinct piece seeds are required")
    for s in piece_seeds:
        if not 0 <= s <= MASK64:
            raise ValidationError(f"piece seed out of 64-bit range: {s}")

    rng = derive_rng(session_seed)
    pairs: list[PairPresentation] = []
    for seed_set in SEED_SETS:
        comparisons = list(ART_ORDER)
        rng.shuffle(comparisons)
        for comparison in comparisons:
            pairs.append(
                PairPresentation(
                    comparison=comparison,
                    seed_set=seed_set,
                    default_on_left=rng.next_float() < 0.5,
                )
            )
    life = list(LIFE_ORDER)
    rng.shuffle(life)
    return SurveyPlan(
        session_seed=session_seed,
        piece_seeds=tuple(piece_seeds),
        pairs=tuple(pairs),
        life_order=tuple(life),
    )


ArtKey = tuple[Comparison, int]


@dataclass
class SubjectRecord:
    """One person's 24 art answers and 12 life answers plus timestamps."""

    subject_id: str
    art_answers: dict[ArtKey, ArtChoice] = field(default_factory=dict)
    life_answers: dict[LifeItem, LifeChoice] = field(default_factory=dict)
    timestamps: dict[str, float] = field(default_factory=dict)

    def is_complete(self) -> bool:
        art_ok = all((c, s) in self.art_answers for c in ART_ORDER for s in SEED_SETS)
        life_ok = all(q in self.life_answers for q in LIFE_ORDER)
        return art_ok and life_ok

    def require_complete(self) -> None:
        if not self.is_complete():
            raise ValidationError(
                f"record {self.subject_id!r} is incomplete "
                f"({len(self.art_answers)}/24 art, {len(self.life_answers)}/12 life)"
            )

    def art_sign(self, comparison: Comparison, seed_set: int) -> int:
        return +1 if self.art_answers[(comparison, seed_set)] is ArtChoice.ALTERNATIVE else -1

    def life_sign(self, item: LifeItem) -> int:
        return +1 if self.life_answers[item] is LifeChoice.POSITIVE else -1

    def art_majority_sign(self, comparison: Comparison) -> int:
        """Majority over the 3 seed sets; ties resolve to Default (-1)."""
        total = sum(self.art_sign(comparison, s) for s in SEED_SETS)
        return +1 if total > 0 else -1

    def to_json_dict(self) -> dict:
        return {
            "subject_id": self.subject_id,
            "art_answers": {
                f"{c.value}:{s}": self.art_answers[(c, s)].value
                for c in ART_ORDER
                for s in SEED_SETS
                if (c, s) in self.art_answers
            },
            "life_answers": {
                q.value: self.life_answers[q].value for q in LIFE_ORDER if q in self.life_answers
            },
            "timestamps": dict(sorted(self.timestamps.items())),
        }

    @classmethod
    def from_json_dict(cls, raw: dict) -> "SubjectRecord":
        art = {}
        for key, val in raw.get("art_answers", {}).items():
            comp, _, seed_set = key.partition(":")
            art[(Comparison(comp), int(seed_set))] = ArtChoice(val)
        life = {LifeItem(k): LifeChoice(v) for k, v in raw.get("life_answers", {}).items()}
        return cls(
            subject_id=raw["subject_id"],
            art_answers=art,
            life_answers=life,
            timestamps={k: float(v) for k, v in raw.get("timestamps", {}).items()},
        )


SCHEMA_VERSION = 1


@dataclass
class Dataset:
    subjects: list[SubjectRecord]
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        seen = set()
        for record in self.subjects:
            if record.subject_id in seen:
                raise ValidationError(f"duplicate subject id {record.subject_id!r}")
            seen.add(record.subject_id)
            record.require_complete()

    def __len__(self) -> int:
        return len(self.subjects)


def feature_names(group: Group, target: Comparison | LifeItem | None = None) -> tuple[str, ...]:
    """Frozen feature ordering: art items in ART_ORDER then life items in
    LIFE_ORDER, with the target (when it belongs to the group) excluded."""
    names: list[str] = []
    if group in (Group.ART, Group.UNION):
        names.extend(c.value for c in ART_ORDER if c != target)
    if group in (Group.LIFE, Group.UNION):
        names.extend(q.value for q in LIFE_ORDER if q != target)
    return tuple(names)


def encode_features(
    record: SubjectRecord,
    group: Group,
    target: Comparison | LifeItem | None = None,
    seed_set: int | None = None,
) -> list[int]:
    """Encode a record as a +/-1 feature vector in feature_names() order.

    With ``seed_set`` given, art features are that set's responses (the
    per-instance encoding used when the target is an art item).  Without
    it, each art feature is the majority over the 3 sets with ties to
    Default — the per-subject encoding used for life targets.
    """
    record.require_complete()
    values: list[int] = []
    if group in (Group.ART, Group.UNION):
        for comparison in ART_ORDER:
            if comparison == target:
                continue
            if seed_set is None:
                values.append(record.art_majority_sign(comparison))
            else:
                values.append(record.art_sign(comparison, seed_set))
    if group in (Group.LIFE, Group.UNION):
        for item in LIFE_ORDER:
            if item == target:
                continue
            values.append(record.life_sign(item))
    return values


def feature_value_label(item_name: str, sign: int) -> str:
    """Human-readable choice label for a +/-1 value of a named item."""
    art_names = {c.value for c in ART_ORDER}
    if item_name in art_names:
        return ArtChoice.ALTERNATIVE.value if sign > 0 else ArtChoice.DEFAULT.value
    return LifeChoice.POSITIVE.value if sign > 0 else LifeChoice.NEGATIVE.value
