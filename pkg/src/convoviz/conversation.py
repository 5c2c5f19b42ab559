"""Conversation management: dialog bookkeeping and follow-up query handling.

A dialog is an ordered list of analyzed queries. Follow-ups on the latest
query extend the dialog; follow-ups on an earlier query branch it, and the
branch becomes a dialog of its own named "{dialog}.{query}.{branch}". The
grammar nests, so branches of branches work without special cases.

The Engine at the bottom ties everything together behind one lock: mode
selection (standalone / explicit follow-up / detection), classification of
what a follow-up wants changed, application against the parent's maps, and
the resolution hook for ambiguous queries.
"""

from __future__ import annotations

import copy
import logging
import threading
from dataclasses import dataclass, field

from . import resolver
from .dataset import Dataset
from .errors import (
    IllegalChartOverride,
    NoConversationToFollowUp,
    TargetNotFound,
    TargetNotInParent,
    UnclassifiableFollowUp,
    UnknownDialogOrQueryId,
    UnresolvedAmbiguities,
)
from .lexicon import (
    KeywordMaps,
    TokenSequence,
    find_chart_mentions,
    match_keywords,
    tokenize,
)
from .query_processor import (
    AttributeExtraction,
    analyze_standalone,
    generate_vis_list,
    identify_attributes,
    identify_tasks,
    keyword_task_families,
    lawful_marks,
    merge_attribute_entry,
)
from .result import QueryResult

logger = logging.getLogger(__name__)

CONFIDENCE_HIGH = "high"
CONFIDENCE_LOW = "low"
CONFIDENCE_NONE = "none"

FOLLOW_UP_ACTIONS = ("add", "remove", "replace")
FOLLOW_UP_TARGETS = ("attributes", "tasks", "visualizations")

# fresh-query word budget for the "short refinement" detection rule
_SHORT_QUERY_TOKENS = 6


# ---------------------------------------------------------------------------
# dialog store

class DialogStore:
    """All analyzed queries, grouped into dialogs, plus id bookkeeping.

    Identifiers follow ``id := int | id "." int "." int``: top-level dialogs
    count up from "0"; a branch under query q of dialog d is "d.q.b" with b
    dense from 0 per branch point. Query ids restart at "0" inside every
    dialog, so store[d][i].query_id == str(i) always holds.
    """

    def __init__(self) -> None:
        self.dialogs: dict[str, list[QueryResult]] = {}
        self._next_top_level = 0
        self._branch_counters: dict[tuple[str, str], int] = {}
        self._most_recent: tuple[str, str] | None = None

    def __len__(self) -> int:
        return sum(len(results) for results in self.dialogs.values())

    @property
    def is_empty(self) -> bool:
        return len(self) == 0

    def new_dialog(self) -> str:
        dialog_id = str(self._next_top_level)
        self._next_top_level += 1
        self.dialogs[dialog_id] = []
        return dialog_id

    def new_branch(self, dialog_id: str, query_id: str) -> str:
        self.get(dialog_id, query_id)  # must exist
        key = (dialog_id, query_id)
        branch = self._branch_counters.get(key, 0)
        self._branch_counters[key] = branch + 1
        branch_id = f"{dialog_id}.{query_id}.{branch}"
        self.dialogs[branch_id] = []
        return branch_id

    def append(self, dialog_id: str, result: QueryResult) -> None:
        if dialog_id not in self.dialogs:
            raise UnknownDialogOrQueryId(f"unknown dialog: {dialog_id!r}")
        expected = str(len(self.dialogs[dialog_id]))
        if result.query_id != expected:
            raise ValueError(
                f"query id {result.query_id!r} breaks dialog {dialog_id!r} "
                f"numbering (expected {expected!r})")
        self.dialogs[dialog_id].append(result)
        self._most_recent = (dialog_id, result.query_id)

    def get(self, dialog_id: str, query_id: str) -> QueryResult:
        try:
            results = self.dialogs[dialog_id]
        except KeyError:
            raise UnknownDialogOrQueryId(f"unknown dialog: {dialog_id!r}") from None
        try:
            index = int(query_id)
        except (TypeError, ValueError):
            raise UnknownDialogOrQueryId(f"malformed query id: {query_id!r}") from None
        if index < 0 or index >= len(results):
            raise UnknownDialogOrQueryId(
                f"dialog {dialog_id!r} has no query {query_id!r}")
        return results[index]

    def last(self, dialog_id: str) -> QueryResult:
        if dialog_id not in self.dialogs:
            raise UnknownDialogOrQueryId(f"unknown dialog: {dialog_id!r}")
        results = self.dialogs[dialog_id]
        if not results:
            raise UnknownDialogOrQueryId(f"dialog {dialog_id!r} is empty")
        return results[-1]

    def most_recent(self) -> QueryResult | None:
        if self._most_recent is None:
            return None
        return self.get(*self._most_recent)

    def most_recent_ids(self) -> tuple[str, str] | None:
        return self._most_recent

    def has_branches(self, dialog_id: str, query_id: str | None = None) -> bool:
        prefix = f"{dialog_id}." if query_id is None else f"{dialog_id}.{query_id}."
        return any(other.startswith(prefix) for other in self.dialogs)

    def delete(self, dialog_id: str, query_id: str | None = None) -> None:
        """Remove the last query of a dialog, or a whole dialog subtree.

        Mid-dialog deletion would renumber later queries and orphan their
        branches, so only the tail (with no branches of its own) or the
        entire dialog (with its branch dialogs) can go.
        """
        if dialog_id not in self.dialogs:
            raise UnknownDialogOrQueryId(f"unknown dialog: {dialog_id!r}")
        if query_id is None:
            victims = [dialog_id] + [d for d in self.dialogs if d.startswith(f"{dialog_id}.")]
            for victim in victims:
                del self.dialogs[victim]
                self._branch_counters = {
                    key: count for key, count in self._branch_counters.items()
                    if key[0] != victim
                }
        else:
            results = self.dialogs[dialog_id]
            target = self.get(dialog_id, query_id)
            if target is not results[-1]:
                raise ValueError(
                    "only the last query of a dialog can be deleted "
                    f"({dialog_id!r} currently ends at {len(results) - 1})")
            if self.has_branches(dialog_id, query_id):
                raise ValueError(
                    f"query {query_id!r} of dialog {dialog_id!r} has branches; "
                    "delete those first")
            results.pop()
        if (self._most_recent is not None
                and (self._most_recent[0] not in self.dialogs
                     or int(self._most_recent[1]) >= len(self.dialogs[self._most_recent[0]]))):
            self._most_recent = None

    def to_dict(self) -> dict:
        """Map of dialog id to its query results, nothing else.

        Counters are derivable from the ids, so they are rebuilt on load
        rather than persisted.
        """
        return {
            dialog_id: [result.to_dict() for result in results]
            for dialog_id, results in self.dialogs.items()
        }

    @classmethod
    def from_dict(cls, raw: dict, most_recent: tuple[str, str] | None = None) -> "DialogStore":
        store = cls()
        for dialog_id, raw_results in raw.items():
            results = [QueryResult.from_dict(entry) for entry in raw_results]
            for index, result in enumerate(results):
                if result.query_id != str(index):
                    raise ValueError(
                        f"dialog {dialog_id!r} entry {index} carries query id "
                        f"{result.query_id!r}")
            store.dialogs[dialog_id] = results
        for dialog_id in store.dialogs:
            parts = dialog_id.rsplit(".", 2)
            if len(parts) == 1:
                store._next_top_level = max(store._next_top_level, int(dialog_id) + 1)
            else:
                root, query, branch = parts
                key = (root, query)
                store._branch_counters[key] = max(
                    store._branch_counters.get(key, 0), int(branch) + 1)
        if most_recent is not None:
            store.get(*most_recent)
            store._most_recent = tuple(most_recent)
        return store


# ---------------------------------------------------------------------------
# follow-up detection

@dataclass
class FreshAnalysis:
    """The entity/task reading of a query before any dialog context applies."""

    seq: TokenSequence
    extraction: AttributeExtraction
    task_map: dict
    hits: list = field(default_factory=list)
    chart_mentions: list = field(default_factory=list)


def analyze_fresh(query: str, dataset: Dataset, maps: KeywordMaps) -> FreshAnalysis:
    seq = tokenize(query)
    extraction = identify_attributes(seq, dataset)
    task_map = identify_tasks(seq, extraction, dataset)
    return FreshAnalysis(
        seq=seq,
        extraction=extraction,
        task_map=task_map,
        hits=match_keywords(seq, maps),
        chart_mentions=find_chart_mentions(seq),
    )


def _mentioned_attributes(fresh: FreshAnalysis) -> set[str]:
    return set(fresh.extraction.attribute_map)


def detect_follow_up(fresh: FreshAnalysis, previous: QueryResult | None,
                     dataset: Dataset) -> str:
    """Decide whether a query continues the previous one.

    Keyword evidence wins outright: explicit and non-ambiguous implicit
    markers give high confidence, ambiguous ones low. Without keywords a
    small decision tree looks at what the query holds on its own: task words
    with no data entities, a short query naming only already-used
    attributes, or swapping one summary statistic for another all read as
    refinements of what is on screen.
    """
    if previous is None:
        return CONFIDENCE_NONE
    for hit in fresh.hits:
        if hit.kind in ("explicit", "implicitNonAmbiguous"):
            return CONFIDENCE_HIGH
    if any(hit.kind == "implicitAmbiguous" for hit in fresh.hits):
        return CONFIDENCE_LOW

    attrs = _mentioned_attributes(fresh)
    has_ambiguity = bool(fresh.extraction.ambiguities)
    previous_attrs = set(previous.attribute_map)

    if fresh.task_map and not attrs and not has_ambiguity:
        return CONFIDENCE_LOW
    if (attrs and attrs <= previous_attrs
            and len(fresh.seq) <= _SHORT_QUERY_TOKENS):
        return CONFIDENCE_LOW
    if (set(fresh.task_map) == {"derived_value"}
            and attrs <= previous_attrs
            and previous.task_map.get("derived_value")):
        fresh_ops = {e["operator"] for e in fresh.task_map["derived_value"]}
        previous_ops = {e["operator"] for e in previous.task_map["derived_value"]}
        if fresh_ops and fresh_ops != previous_ops:
            return CONFIDENCE_LOW
    return CONFIDENCE_NONE


# ---------------------------------------------------------------------------
# follow-up classification

@dataclass(frozen=True)
class FollowUpClassification:
    action: str                    # add | remove | replace
    target: str                    # attributes | tasks | visualizations
    keep_only: bool = False
    marks: tuple = ()              # chart marks named by the query, in order
    warning: str | None = None


def _task_keyword_families(fresh: FreshAnalysis) -> list[str]:
    return keyword_task_families(fresh.seq, fresh.extraction.consumed)


def _has_value_terms(fresh: FreshAnalysis) -> bool:
    if any(entry["impliedValues"] for entry in fresh.extraction.attribute_map.values()):
        return True
    return any(r.kind == "value" for r in fresh.extraction.ambiguities)


def _narrow_targets(targets: frozenset, fresh: FreshAnalysis, marks: tuple) -> str:
    if "visualizations" in targets and marks:
        return "visualizations"
    if "tasks" in targets and _task_keyword_families(fresh):
        return "tasks"
    if "attributes" in targets:
        return "attributes"
    for candidate in ("visualizations", "tasks", "attributes"):
        if candidate in targets:
            return candidate
    raise ValueError(f"keyword rule has no usable target: {sorted(targets)}")


def classify_follow_up(fresh: FreshAnalysis, parent: QueryResult | None = None,
                       strict: bool = False) -> FollowUpClassification:
    """Work out what a follow-up wants changed: which action, which target.

    Explicit keywords fix the action; the target is narrowed inside the
    keyword's allowed set by what the query actually contains (a chart noun
    beats task words beats attributes). Without an explicit keyword the
    content decides, with "only"/"just" style restriction words steering
    toward removal.
    """
    marks = tuple(m.mark for m in fresh.chart_mentions if m.mark is not None)
    explicit = next((h for h in fresh.hits if h.kind == "explicit"), None)
    restriction = any(h.phrase in ("only", "just") for h in fresh.hits
                      if h.kind == "implicitAmbiguous")

    if explicit is not None:
        target = _narrow_targets(explicit.targets, fresh, marks)
        keep_only = explicit.action == "remove" and restriction
        return FollowUpClassification(explicit.action, target, keep_only, marks)

    if marks:
        return FollowUpClassification("replace", "visualizations", False, marks)
    if restriction and _has_value_terms(fresh):
        return FollowUpClassification("remove", "tasks", True, marks)
    if restriction and _mentioned_attributes(fresh):
        return FollowUpClassification("remove", "attributes", True, marks)
    families = _task_keyword_families(fresh)
    if families:
        action = "add"
        if parent is not None and any(f in parent.task_map for f in families):
            action = "replace"
        return FollowUpClassification(action, "tasks", False, marks)
    if _mentioned_attributes(fresh) or fresh.extraction.ambiguities:
        return FollowUpClassification("add", "attributes", False, marks)

    message = f"cannot tell what the follow-up changes: {fresh.seq.query!r}"
    if strict:
        raise UnclassifiableFollowUp(message)
    logger.warning(message)
    return FollowUpClassification("add", "attributes", False, marks, warning=message)


# ---------------------------------------------------------------------------
# follow-up application

@dataclass
class AppliedFollowUp:
    attribute_map: dict
    task_map: dict
    ambiguities: list
    vis_list: list
    force_mark: str | None


def _drop_orphaned_tasks(task_map: dict, surviving: set[str]) -> None:
    for task in list(task_map):
        entries = []
        for entry in task_map[task]:
            kept = [a for a in entry["attributes"] if a in surviving]
            if not entry["attributes"] or kept:
                entry["attributes"] = kept
                entries.append(entry)
        if entries:
            task_map[task] = entries
        else:
            del task_map[task]


def _union_attributes(base: dict, fresh_map: dict) -> None:
    for name, entry in fresh_map.items():
        merge_attribute_entry(
            base, name, entry["queryPhrase"][0], entry["matchKind"],
            entry["score"], grouping=entry["grouping"],
            is_ambiguous=entry["isAmbiguous"],
        )
        for phrase in entry["queryPhrase"][1:]:
            if phrase not in base[name]["queryPhrase"]:
                base[name]["queryPhrase"].append(phrase)
        for value in entry["impliedValues"]:
            if value not in base[name]["impliedValues"]:
                base[name]["impliedValues"].append(value)


def _union_tasks(base: dict, fresh_tasks: dict) -> None:
    for task, entries in fresh_tasks.items():
        existing = base.setdefault(task, [])
        for entry in entries:
            if entry not in existing:
                existing.append(entry)


def _retained_mark(parent: QueryResult, attribute_map: dict, dataset: Dataset) -> str | None:
    """Keep the parent's chart type across a refinement when it still fits."""
    if not parent.vis_list:
        return None
    mark = parent.vis_list[0]["markType"]
    if mark in lawful_marks(attribute_map, dataset):
        return mark
    return None


def apply_follow_up(parent: QueryResult, classification: FollowUpClassification,
                    fresh: FreshAnalysis, dataset: Dataset) -> AppliedFollowUp:
    """Merge a classified follow-up into a copy of the parent's analysis.

    The parent is never mutated. Raises UnresolvedAmbiguities when the
    parent still has open records, TargetNotInParent when an explicit
    removal names something the parent does not hold, IllegalChartOverride
    when a requested chart cannot encode the attribute combination.
    """
    if parent.has_open_ambiguities:
        raise UnresolvedAmbiguities(
            f"query {parent.query_id!r} of dialog {parent.dialog_id!r} has "
            "unresolved ambiguities; resolve them before following up")

    attribute_map = copy.deepcopy(parent.attribute_map)
    task_map = copy.deepcopy(parent.task_map)
    fresh_attr_map = copy.deepcopy(fresh.extraction.attribute_map)
    fresh_tasks = copy.deepcopy(fresh.task_map)
    ambiguities = copy.deepcopy(fresh.extraction.ambiguities)
    force_mark: str | None = None

    action, target = classification.action, classification.target

    if target == "visualizations":
        if not classification.marks:
            raise UnclassifiableFollowUp(
                f"no chart type named in {fresh.seq.query!r}")
        current = parent.vis_list[0]["markType"] if parent.vis_list else None
        requested = next((m for m in classification.marks if m != current),
                         classification.marks[-1])
        lawful = lawful_marks(attribute_map, dataset)
        if requested not in lawful:
            raise IllegalChartOverride(
                f"{requested} charts cannot encode {', '.join(attribute_map)} "
                f"(lawful: {', '.join(lawful)})")
        force_mark = requested

    elif target == "attributes":
        mentioned = set(fresh_attr_map)
        if action == "remove" and classification.keep_only:
            kept = {name: attribute_map.get(name, fresh_attr_map[name])
                    for name in attribute_map if name in mentioned}
            for name in mentioned - set(kept):
                kept[name] = fresh_attr_map[name]
            attribute_map = kept
            _drop_orphaned_tasks(task_map, set(attribute_map))
        elif action == "remove":
            missing = mentioned - set(attribute_map)
            if missing:
                raise TargetNotInParent(
                    "cannot remove attribute(s) not in the previous query: "
                    + ", ".join(sorted(missing)))
            for name in mentioned:
                del attribute_map[name]
            _drop_orphaned_tasks(task_map, set(attribute_map))
        elif action == "replace":
            old = [n for n in mentioned if n in attribute_map]
            new = [n for n in fresh_attr_map if n not in attribute_map]
            for name in old:
                del attribute_map[name]
            for name in new:
                attribute_map[name] = fresh_attr_map[name]
            substitution = dict(zip(old, new))
            for entries in task_map.values():
                for entry in entries:
                    entry["attributes"] = [
                        substitution.get(a, a) for a in entry["attributes"]
                        if a in attribute_map or a in substitution
                    ]
            _drop_orphaned_tasks(task_map, set(attribute_map))
        else:  # add
            _union_attributes(attribute_map, fresh_attr_map)
            _union_tasks(task_map, fresh_tasks)
        force_mark = _retained_mark(parent, attribute_map, dataset)

    else:  # tasks
        if action == "remove" and classification.keep_only:
            # "only X" on values: the named values replace the previous
            # filter on that attribute instead of stacking onto it
            for name, entry in fresh_attr_map.items():
                if not entry["impliedValues"]:
                    continue
                if name in attribute_map:
                    attribute_map[name]["impliedValues"] = list(entry["impliedValues"])
                    for phrase in entry["queryPhrase"]:
                        if phrase not in attribute_map[name]["queryPhrase"]:
                            attribute_map[name]["queryPhrase"].append(phrase)
                else:
                    attribute_map[name] = entry
            resolver.rebuild_filters(task_map, attribute_map)
        elif action == "remove":
            families = set(fresh_tasks) - {"filter"}
            missing = families - set(task_map)
            if missing:
                raise TargetNotInParent(
                    "cannot remove task(s) not in the previous query: "
                    + ", ".join(sorted(missing)))
            for family in families:
                del task_map[family]
        elif action == "replace":
            for family, entries in fresh_tasks.items():
                if family == "filter":
                    continue
                # "replace average with sum" names both operators; the ones
                # the parent already holds mark what is being swapped out.
                # A parent lacking the family degrades replace to add.
                parent_shapes = {(e["operator"], e["direction"])
                                 for e in task_map.get(family, [])}
                new_entries = [e for e in entries
                               if (e["operator"], e["direction"]) not in parent_shapes]
                task_map[family] = new_entries or entries
        else:  # add
            _union_attributes(attribute_map, fresh_attr_map)
            _union_tasks(task_map, fresh_tasks)
        force_mark = _retained_mark(parent, attribute_map, dataset)

    resolver.rebind_task_attributes(task_map, attribute_map, dataset)
    task_map = resolver.reorder_task_map(task_map)

    open_records = [r for r in ambiguities if r.is_open]
    if open_records or not attribute_map:
        vis_list: list = []
        if not attribute_map and not open_records:
            raise TargetNotInParent(
                "the follow-up removed every attribute; nothing left to show")
    else:
        vis_list = generate_vis_list(attribute_map, task_map, dataset,
                                     force_mark=force_mark)
    return AppliedFollowUp(attribute_map, task_map, ambiguities, vis_list, force_mark)


# ---------------------------------------------------------------------------
# engine

class Engine:
    """Analyze queries against one dataset while tracking conversations.

    ``dialog`` on analyze_query:
      * None or False: standalone query, starts a fresh dialog.
      * True: explicit follow-up. Targets (dialog_id, query_id) when given,
        a dialog's last query when only dialog_id is given, the most recent
        query otherwise.
      * "auto": run follow-up detection against the most recent query.

    When a query comes back ambiguous the engine either invokes the
    registered resolution callback (return selections shaped like
    update_query's argument, or None to leave it open) or, by default,
    auto-resolves by score.
    """

    def __init__(self, dataset: Dataset, *, keywords: KeywordMaps | None = None,
                 auto_resolve: bool = True, strict_classification: bool = False):
        self.dataset = dataset
        self.keywords = keywords or KeywordMaps.load_default()
        self.store = DialogStore()
        self.auto_resolve_enabled = auto_resolve
        self.strict_classification = strict_classification
        self.resolution_callback = None
        self._lock = threading.Lock()

    def set_resolution_callback(self, callback) -> None:
        """callback(QueryResult) -> selections dict or None; disables auto."""
        self.resolution_callback = callback

    # -- public API ---------------------------------------------------

    def analyze_query(self, query: str, dialog=None, dialog_id: str | None = None,
                      query_id: str | None = None) -> QueryResult:
        with self._lock:
            return self._analyze(query, dialog, dialog_id, query_id)

    def update_query(self, resolutions: dict, dialog_id: str | None = None,
                     query_id: str | None = None) -> QueryResult:
        """Apply ambiguity selections to a stored result, newest by default."""
        with self._lock:
            result = self._locate(dialog_id, query_id)
            force_mark = self._resolution_mark(result)
            return resolver.apply_resolutions(
                result, resolutions, self.dataset, force_mark=force_mark)

    def delete(self, dialog_id: str, query_id: str | None = None) -> None:
        with self._lock:
            self.store.delete(dialog_id, query_id)

    def conversations(self) -> dict:
        return self.store.to_dict()

    # -- internals ----------------------------------------------------

    def _locate(self, dialog_id: str | None, query_id: str | None) -> QueryResult:
        if query_id is not None and dialog_id is None:
            raise ValueError("query_id requires dialog_id")
        if dialog_id is not None:
            if query_id is not None:
                return self.store.get(dialog_id, query_id)
            return self.store.last(dialog_id)
        result = self.store.most_recent()
        if result is None:
            raise TargetNotFound("no analyzed queries yet")
        return result

    def _resolution_mark(self, result: QueryResult) -> str | None:
        if result.parent_ref is None:
            return None
        try:
            parent = self.store.get(*result.parent_ref)
        except UnknownDialogOrQueryId:
            return None
        return _retained_mark(parent, result.attribute_map, self.dataset)

    def _analyze(self, query: str, dialog, dialog_id: str | None,
                 query_id: str | None) -> QueryResult:
        if dialog not in (None, False, True, "auto"):
            raise ValueError(f"dialog must be True, False, None or 'auto', got {dialog!r}")
        if (dialog_id is not None or query_id is not None) and dialog is not True:
            raise ValueError("dialog_id/query_id are only valid with dialog=True")
        if query_id is not None and dialog_id is None:
            raise ValueError("query_id requires dialog_id")

        if dialog is True:
            if self.store.is_empty:
                raise NoConversationToFollowUp(
                    "dialog=True needs at least one previous query")
            parent = self._follow_up_target(dialog_id, query_id)
            fresh = analyze_fresh(query, self.dataset, self.keywords)
            return self._follow_up(query, fresh, parent, CONFIDENCE_HIGH)

        if dialog == "auto":
            previous = self.store.most_recent()
            if previous is not None:
                fresh = analyze_fresh(query, self.dataset, self.keywords)
                confidence = detect_follow_up(fresh, previous, self.dataset)
                if confidence != CONFIDENCE_NONE:
                    return self._follow_up(query, fresh, previous, confidence)

        return self._standalone(query)

    def _follow_up_target(self, dialog_id: str | None, query_id: str | None) -> QueryResult:
        if dialog_id is not None and query_id is not None:
            return self.store.get(dialog_id, query_id)
        if dialog_id is not None:
            return self.store.last(dialog_id)
        return self.store.most_recent()

    def _standalone(self, query: str) -> QueryResult:
        result = analyze_standalone(query, self.dataset)
        result.dialog_id = self.store.new_dialog()
        result.query_id = "0"
        self.store.append(result.dialog_id, result)
        self._resolve_if_needed(result)
        return result

    def _follow_up(self, query: str, fresh: FreshAnalysis, parent: QueryResult,
                   confidence: str) -> QueryResult:
        classification = classify_follow_up(fresh, parent,
                                            strict=self.strict_classification)
        applied = apply_follow_up(parent, classification, fresh, self.dataset)

        dialog = self.store.dialogs[parent.dialog_id]
        if parent is dialog[-1]:
            dialog_id = parent.dialog_id
            query_id = str(len(dialog))
        else:
            dialog_id = self.store.new_branch(parent.dialog_id, parent.query_id)
            query_id = "0"

        result = QueryResult(
            query=query,
            dialog_id=dialog_id,
            query_id=query_id,
            follow_up_confidence=confidence,
            attribute_map=applied.attribute_map,
            task_map=applied.task_map,
            vis_list=applied.vis_list,
            ambiguities=applied.ambiguities,
            parent_ref=(parent.dialog_id, parent.query_id),
        )
        self.store.append(dialog_id, result)
        self._resolve_if_needed(result, applied.force_mark)
        return result

    def _resolve_if_needed(self, result: QueryResult, force_mark: str | None = None) -> None:
        if not result.has_open_ambiguities:
            return
        if self.resolution_callback is not None:
            selections = self.resolution_callback(result)
            if selections:
                resolver.apply_resolutions(result, selections, self.dataset,
                                           force_mark=force_mark)
        elif self.auto_resolve_enabled:
            resolver.auto_resolve(result, self.dataset, force_mark=force_mark)
