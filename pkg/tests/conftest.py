import pytest

from strokes.survey import (
    ART_ORDER,
    LIFE_ORDER,
    SEED_SETS,
    ArtChoice,
    Dataset,
    LifeChoice,
    SubjectRecord,
)


def make_record(subject_id="s0", art=None, life=None, default_art=ArtChoice.DEFAULT,
                default_life=LifeChoice.NEGATIVE):
    """Complete record with given overrides.

    art: {(Comparison, seed_set): ArtChoice} or {Comparison: [3 choices]}
    life: {LifeItem: LifeChoice}
    """
    record = SubjectRecord(subject_id=subject_id)
    art = art or {}
    flat = {}
    for key, val in art.items():
        if isinstance(key, tuple):
            flat[key] = val
        else:
            for s, choice in zip(SEED_SETS, val):
                flat[(key, s)] = choice
    for c in ART_ORDER:
        for s in SEED_SETS:
            record.art_answers[(c, s)] = flat.get((c, s), default_art)
    life = life or {}
    for q in LIFE_ORDER:
        record.life_answers[q] = life.get(q, default_life)
    for i, key in enumerate(sorted(record.to_json_dict()["art_answers"])):
        record.timestamps[f"art:{key}"] = 1_700_000_000.0 + i
    return record


def make_dataset(n=4, **kw):
    return Dataset(subjects=[make_record(subject_id=f"s{i}", **kw) for i in range(n)])


@pytest.fixture
def complete_record():
    return make_record()
