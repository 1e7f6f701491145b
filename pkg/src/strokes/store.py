"""Append-only JSON-lines storage for subject records.

Line 1 is a header carrying the schema version; every following line is
one complete subject record.  Appends are serialized by a lock and each
record is written with a single write call, so a reader never sees a
torn line and a crash leaves a record either fully present or absent.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from .survey import SCHEMA_VERSION, Dataset, SubjectRecord, ValidationError


class DuplicateSubjectError(ValueError):
    pass


class StoreParseError(ValueError):
    def __init__(self, path, line_number: int, reason: str):
        self.line_number = line_number
        super().__init__(f"{path}:{line_number}: {reason}")


class RecordStore:
    """One-writer append log of complete subject records."""

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._known_ids: set[str] | None = None

    def _load_ids(self) -> set[str]:
        if self._known_ids is None:
            self._known_ids = {r.subject_id for r in self.load_dataset().subjects}
        return self._known_ids

    def append(self, record: SubjectRecord) -> None:
        record.require_complete()
        with self._lock:
            ids = self._load_ids()
            if record.subject_id in ids:
                raise DuplicateSubjectError(f"subject id {record.subject_id!r} already stored")
            line = json.dumps(record.to_json_dict(), sort_keys=True, separators=(",", ":"))
            fresh = not self.path.exists() or self.path.stat().st_size == 0
            with open(self.path, "a", encoding="utf-8") as fh:
                if fresh:
                    fh.write(json.dumps({"schema_version": SCHEMA_VERSION}) + "\n")
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            ids.add(record.subject_id)

    def load_dataset(self) -> Dataset:
        """Parse every stored record; malformed input names its line."""
        if not self.path.exists() or self.path.stat().st_size == 0:
            return Dataset(subjects=[])
        records: list[SubjectRecord] = []
        with open(self.path, encoding="utf-8") as fh:
            for number, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    raw = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise StoreParseError(self.path, number, f"invalid JSON ({exc.msg})") from None
                if number == 1:
                    if "schema_version" not in raw:
                        raise StoreParseError(self.path, 1, "missing schema_version header")
                    if raw["schema_version"] != SCHEMA_VERSION:
                        raise StoreParseError(
                            self.path, 1, f"unsupported schema_version {raw['schema_version']}"
                        )
                    continue
                try:
                    records.append(SubjectRecord.from_json_dict(raw))
                except (KeyError, ValueError) as exc:
                    raise StoreParseError(self.path, number, f"invalid record ({exc})") from None
        try:
            return Dataset(subjects=records)
        except ValidationError as exc:
            raise StoreParseError(self.path, 0, str(exc)) from None


def write_dataset(dataset: Dataset, path: str | os.PathLike) -> None:
    """Serialize a whole dataset as a fresh store file."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"schema_version": dataset.schema_version}) + "\n")
        for record in dataset.subjects:
            fh.write(json.dumps(record.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n")


def dataset_to_csv(dataset: Dataset, path: str | os.PathLike) -> None:
    """Flat +/-1 export: one row per subject, one column per response."""
    import csv

    from .survey import ART_ORDER, LIFE_ORDER, SEED_SETS

    art_cols = [f"{c.value}:{s}" for c in ART_ORDER for s in SEED_SETS]
    life_cols = [q.value for q in LIFE_ORDER]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["subject_id"] + art_cols + life_cols)
        for record in dataset.subjects:
            row = [record.subject_id]
            row += [record.art_sign(c, s) for c in ART_ORDER for s in SEED_SETS]
            row += [record.life_sign(q) for q in LIFE_ORDER]
            writer.writerow(row)
