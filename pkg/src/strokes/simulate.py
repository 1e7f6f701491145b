"""Synthetic subject populations with planted correlation structure.

Each subject gets latent +/-1 answers for the 20 preference items:
rule-free items are drawn from their marginal positive rates, then rule
targets are computed from their sources in dependency order and flipped
with the rule's noise rate.  Life responses equal the latent answers;
each art item is answered 3 times (once per seed set), repeating the
latent answer with probability ``seed_consistency`` and flipping it
otherwise.

Because rules are an explicit acyclic list, every planted dependency is
also an exact test oracle for the analytics and learning pipeline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .rng import MASK64, derive_rng, mix64
from .survey import (
    ART_ORDER,
    LIFE_ORDER,
    SEED_SETS,
    ArtChoice,
    Comparison,
    Dataset,
    LifeChoice,
    LifeItem,
    SubjectRecord,
)

ITEM_IDS: tuple[str, ...] = tuple(c.value for c in ART_ORDER) + tuple(q.value for q in LIFE_ORDER)

RULE_KINDS = ("copy", "negate", "majority", "linear_threshold")


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    """Planted dependency: target is a function of sources plus noise."""

    target: str
    sources: tuple[str, ...]
    kind: str = "copy"
    noise_rate: float = 0.0
    weights: tuple[float, ...] | None = None
    threshold: float = 0.0

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise SimulationError(f"unknown rule kind {self.kind!r}")
        if self.kind in ("copy", "negate") and len(self.sources) != 1:
            raise SimulationError(f"{self.kind} rule takes exactly one source")
        if not 0.0 <= self.noise_rate < 0.5:
            raise SimulationError(f"noise_rate must be in [0, 0.5), got {self.noise_rate}")
        if self.kind == "linear_threshold":
            if self.weights is None or len(self.weights) != len(self.sources):
                raise SimulationError("linear_threshold needs one weight per source")

    def apply(self, values: dict[str, int]) -> int:
        inputs = [values[s] for s in self.sources]
        if self.kind == "copy":
            return inputs[0]
        if self.kind == "negate":
            return -inputs[0]
        if self.kind == "majority":
            return +1 if sum(inputs) > 0 else -1
        score = sum(w * v for w, v in zip(self.weights, inputs))
        return +1 if score > self.threshold else -1


@dataclass(frozen=True)
class CorrelationSpecification:
    """Marginal positive rates plus an acyclic list of planted rules."""

    marginals: dict[str, float]
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        for item in self.marginals:
            if item not in ITEM_IDS:
                raise SimulationError(f"unknown item {item!r}")
        for item, rate in self.marginals.items():
            if not 0.0 <= rate <= 1.0:
                raise SimulationError(f"marginal for {item!r} out of [0, 1]")
        targets = [r.target for r in self.rules]
        if len(targets) != len(set(targets)):
            raise SimulationError("each item may be the target of at most one rule")
        for rule in self.rules:
            for s in (rule.target, *rule.sources):
                if s not in ITEM_IDS:
                    raise SimulationError(f"unknown item {s!r} in rule")
        self.evaluation_order()  # raises on cycles

    def evaluation_order(self) -> tuple[Rule, ...]:
        """Rules sorted so every source precedes its dependents."""
        by_target = {r.target: r for r in self.rules}
        ordered: list[Rule] = []
        state: dict[str, int] = {}  # 1 = visiting, 2 = done

        def visit(item: str, stack: tuple[str, ...]):
            if state.get(item) == 2:
                return
            if state.get(item) == 1:
                raise SimulationError(f"cyclic rules involving {item!r}")
            state[item] = 1
            rule = by_target.get(item)
            if rule is not None:
                for source in rule.sources:
                    visit(source, stack + (item,))
                ordered.append(rule)
            state[item] = 2

        for item in by_target:
            visit(item, ())
        return tuple(ordered)

    def to_json_dict(self) -> dict:
        return {
            "marginals": dict(self.marginals),
            "rules": [
                {
                    "target": r.target,
                    "sources": list(r.sources),
                    "kind": r.kind,
                    "noise_rate": r.noise_rate,
                    **({"weights": list(r.weights)} if r.weights is not None else {}),
                    **({"threshold": r.threshold} if r.kind == "linear_threshold" else {}),
                }
                for r in self.rules
            ],
        }

    @classmethod
    def from_json_dict(cls, raw: dict) -> "CorrelationSpecification":
        rules = tuple(
            Rule(
                target=r["target"],
                sources=tuple(r["sources"]),
                kind=r.get("kind", "copy"),
                noise_rate=r.get("noise_rate", 0.0),
                weights=tuple(r["weights"]) if "weights" in r else None,
                threshold=r.get("threshold", 0.0),
            )
            for r in raw.get("rules", [])
        )
        return cls(marginals=dict(raw["marginals"]), rules=rules)

    @classmethod
    def from_file(cls, path) -> "CorrelationSpecification":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class SimConfig:
    n_subjects: int
    seed: int
    spec: CorrelationSpecification
    seed_consistency: float = 1.0

    def __post_init__(self):
        if self.n_subjects < 1:
            raise SimulationError("n_subjects must be >= 1")
        if not 0.5 <= self.seed_consistency <= 1.0:
            raise SimulationError("seed_consistency must be in [0.5, 1]")
        if not 0 <= self.seed <= MASK64:
            raise SimulationError("seed must be a 64-bit unsigned integer")


_SUBJECT_SALT = 0xA076_1D64_78BD_642F  # keeps per-subject streams independent


def _subject_stream(master_seed: int, index: int):
    return derive_rng(mix64((master_seed ^ _SUBJECT_SALT) + index))


def simulate(config: SimConfig) -> Dataset:
    """Generate a deterministic synthetic dataset.

    Subject i's record depends only on (seed, i), so permuting subject
    indices permutes records.
    """
    ordered_rules = config.spec.evaluation_order()
    rule_targets = {r.target for r in config.spec.rules}
    subjects = []
    for i in range(config.n_subjects):
        rng = _subject_stream(config.seed, i)
        latent: dict[str, int] = {}
        for item in ITEM_IDS:
            if item in rule_targets:
                continue
            marginal = config.spec.marginals.get(item, 0.5)
            latent[item] = +1 if rng.next_float() < marginal else -1
        for rule in ordered_rules:
            value = rule.apply(latent)
            if rule.noise_rate > 0.0 and rng.next_float() < rule.noise_rate:
                value = -value
            latent[rule.target] = value

        record = SubjectRecord(subject_id=f"sim-{config.seed:016x}-{i:05d}")
        base_time = 1_700_000_000.0 + i * 60.0
        tick = 0
        for comparison in ART_ORDER:
            for seed_set in SEED_SETS:
                value = latent[comparison.value]
                if rng.next_float() >= config.seed_consistency:
                    value = -value
                choice = ArtChoice.ALTERNATIVE if value > 0 else ArtChoice.DEFAULT
                record.art_answers[(comparison, seed_set)] = choice
                record.timestamps[f"art:{comparison.value}:{seed_set}"] = base_time + tick
                tick += 1
        for item in LIFE_ORDER:
            choice = LifeChoice.POSITIVE if latent[item.value] > 0 else LifeChoice.NEGATIVE
            record.life_answers[item] = choice
            record.timestamps[f"life:{item.value}"] = base_time + tick
            tick += 1
        subjects.append(record)
    return Dataset(subjects=subjects)


# ---------------------------------------------------------------------------
# bundled population


BUNDLED_SEED = 0x5EED_2024_0311_0001
BUNDLED_N_SUBJECTS = 311
BUNDLED_SEED_CONSISTENCY = 0.9


def bundled_spec() -> CorrelationSpecification:
    """Correlation structure of the bundled population (repo-defined).

    Within-art dependencies are planted; the 12 life items are mutually
    independent and independent of every art item.
    """
    text = resources.files("strokes").joinpath("data/population_spec.json").read_text("utf-8")
    return CorrelationSpecification.from_json_dict(json.loads(text))


def bundled_sim_config() -> SimConfig:
    return SimConfig(
        n_subjects=BUNDLED_N_SUBJECTS,
        seed=BUNDLED_SEED,
        spec=bundled_spec(),
        seed_consistency=BUNDLED_SEED_CONSISTENCY,
    )


def bundled_population() -> Dataset:
    """The frozen 311-subject dataset shipped with the package."""
    from .store import RecordStore

    path = resources.files("strokes").joinpath("data/population.jsonl")
    with resources.as_file(path) as p:
        return RecordStore(p).load_dataset()


def independence_spec() -> CorrelationSpecification:
    """Within-art structure like the bundled population, but with art and
    life strictly independent by construction (null-preservation checks)."""
    bundled = bundled_spec()
    life_ids = {q.value for q in LIFE_ORDER}
    replacements = {"modern_interior": "bright_palette", "sweet_food": "gray_palette",
                    "cubism": "sparser"}
    art_only = []
    for rule in bundled.rules:
        if not any(s in life_ids for s in rule.sources):
            art_only.append(rule)
            continue
        sources = tuple(replacements.get(s, s) for s in rule.sources)
        art_only.append(
            Rule(
                target=rule.target,
                sources=sources,
                kind=rule.kind,
                noise_rate=rule.noise_rate,
                weights=rule.weights,
                threshold=rule.threshold,
            )
        )
    return CorrelationSpecification(marginals=bundled.marginals, rules=tuple(art_only))


def independence_sim_config(n_subjects: int = 311, seed: int = 0x1D_EA11_0F_1122) -> SimConfig:
    return SimConfig(
        n_subjects=n_subjects,
        seed=seed,
        spec=independence_spec(),
        seed_consistency=BUNDLED_SEED_CONSISTENCY,
    )
