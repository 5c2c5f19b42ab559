"""Data records produced per analyzed query: QueryResult and AmbiguityRecord.

These are plain containers with stable JSON shapes. Anything that computes
them lives in query_processor / conversation / resolver; keeping the records
dumb keeps serialization byte-deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

ATTRIBUTE_KIND = "attribute"
VALUE_KIND = "value"

CONFIDENCE_LEVELS = ("high", "low", "none")


@dataclass
class AmbiguityRecord:
    """One query phrase matching several dataset entities.

    For kind="attribute" the options are attribute names; for kind="value"
    they are {"attribute", "value"} pairs. Options and scores run parallel,
    ordered by where the candidate was first met scanning the schema/domains.
    `selected` stays None until resolved.
    """

    kind: str
    query_phrase: str
    options: list = field(default_factory=list)
    scores: list = field(default_factory=list)
    selected: list | None = None

    @property
    def is_open(self) -> bool:
        return self.selected is None

    def option_labels(self) -> list[str]:
        if self.kind == VALUE_KIND:
            return [opt["value"] for opt in self.options]
        return list(self.options)

    def to_dict(self) -> dict:
        return {
            "options": [dict(o) if isinstance(o, dict) else o for o in self.options],
            "scores": list(self.scores),
            "selected": None if self.selected is None else [
                dict(s) if isinstance(s, dict) else s for s in self.selected
            ],
        }

    @classmethod
    def from_dict(cls, kind: str, query_phrase: str, raw: dict) -> "AmbiguityRecord":
        return cls(
            kind=kind,
            query_phrase=query_phrase,
            options=[dict(o) if isinstance(o, dict) else o for o in raw.get("options", [])],
            scores=list(raw.get("scores", [])),
            selected=None if raw.get("selected") is None else [
                dict(s) if isinstance(s, dict) else s for s in raw["selected"]
            ],
        )


def serialize_ambiguities(records: list[AmbiguityRecord]) -> dict:
    """Group records as {"attribute": {phrase: {...}}, "value": {phrase: {...}}}."""
    out: dict = {}
    for record in records:
        out.setdefault(record.kind, {})[record.query_phrase] = record.to_dict()
    return out


def deserialize_ambiguities(raw: dict) -> list[AmbiguityRecord]:
    records = []
    for kind in (ATTRIBUTE_KIND, VALUE_KIND):
        for phrase, entry in raw.get(kind, {}).items():
            records.append(AmbiguityRecord.from_dict(kind, phrase, entry))
    return records


@dataclass
class QueryResult:
    """The full output record for one analyzed query."""

    query: str
    dialog_id: str
    query_id: str
    follow_up_confidence: str
    attribute_map: dict = field(default_factory=dict)
    task_map: dict = field(default_factory=dict)
    vis_list: list = field(default_factory=list)
    ambiguities: list = field(default_factory=list)
    parent_ref: tuple | None = None

    def open_ambiguities(self) -> list[AmbiguityRecord]:
        return [r for r in self.ambiguities if r.is_open]

    @property
    def has_open_ambiguities(self) -> bool:
        return any(r.is_open for r in self.ambiguities)

    def to_dict(self) -> dict:
        return {
            "query": self.query,
            "dialogId": self.dialog_id,
            "queryId": self.query_id,
            "followUpConfidence": self.follow_up_confidence,
            "parentRef": None if self.parent_ref is None else {
                "dialogId": self.parent_ref[0],
                "queryId": self.parent_ref[1],
            },
            "attributeMap": {
                name: dict(entry) for name, entry in self.attribute_map.items()
            },
            "taskMap": {
                task: [dict(e) for e in entries] for task, entries in self.task_map.items()
            },
            "visList": [
                {**vis, "grammarSpec": json.loads(json.dumps(vis["grammarSpec"]))}
                for vis in self.vis_list
            ],
            "ambiguities": serialize_ambiguities(self.ambiguities),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    @classmethod
    def from_dict(cls, raw: dict) -> "QueryResult":
        parent = raw.get("parentRef")
        return cls(
            query=raw["query"],
            dialog_id=raw["dialogId"],
            query_id=raw["queryId"],
            follow_up_confidence=raw["followUpConfidence"],
            attribute_map={k: dict(v) for k, v in raw.get("attributeMap", {}).items()},
            task_map={k: [dict(e) for e in v] for k, v in raw.get("taskMap", {}).items()},
            vis_list=[json.loads(json.dumps(v)) for v in raw.get("visList", [])],
            ambiguities=deserialize_ambiguities(raw.get("ambiguities", {})),
            parent_ref=None if parent is None else (parent["dialogId"], parent["queryId"]),
        )
