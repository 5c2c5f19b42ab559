"""Single-query analysis: attributes, tasks, and ranked chart recommendations.

The pipeline is tokenize -> identify_attributes -> identify_tasks ->
generate_vis_list. Attribute extraction scans query n-grams against the
dataset's schema and nominal value vocabulary; any phrase matching more than
one entity at or above the similarity threshold becomes an AmbiguityRecord
instead of a silent guess, and a query with open ambiguities keeps an empty
visList until someone (or auto-resolution) settles it.

Chart ranking is driven by a versioned scoring table (data/vis_scoring.json)
rather than code so the heuristics stay inspectable.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from importlib import resources

from .dataset import Dataset
from .errors import IllegalChartOverride, NoResolvableAttributes
from .lexicon import (
    SIMILARITY_THRESHOLD,
    STOPWORDS,
    TokenSequence,
    semantic_similarity,
    similarity,
    tokenize,
)
from .result import ATTRIBUTE_KIND, VALUE_KIND, AmbiguityRecord, QueryResult

logger = logging.getLogger(__name__)

TASK_NAMES = ("correlation", "distribution", "derived_value", "trend",
              "filter", "find_extremum", "sort")

# Canonical serialization order for the task map.
TASK_ORDER = ("filter", "derived_value", "trend", "correlation",
              "distribution", "find_extremum", "sort")

MATCH_KINDS = ("exactName", "syntactic", "semantic", "alias", "valueImplied")

EXTREMUM_WORDS = {
    "highest": "max", "largest": "max", "biggest": "max", "top": "max",
    "smallest": "min", "lowest": "min",
}
DERIVED_WORDS = {
    "average": "avg", "mean": "avg", "avg": "avg",
    "sum": "sum", "total": "sum",
    "count": "count", "median": "median",
    "maximum": "max", "minimum": "min",
}
CORRELATION_WORDS = frozenset({"correlate", "correlated", "correlation", "relationship", "versus", "vs"})
SORT_WORDS = frozenset({"sort", "sorted", "order", "ordered", "arrange", "arranged", "rank"})
SORT_DIRECTION_WORDS = {
    "ascending": "asc", "asc": "asc", "increasing": "asc",
    "descending": "desc", "desc": "desc", "decreasing": "desc",
}
DISTRIBUTION_WORDS = frozenset({"distribution", "histogram", "spread"})
TREND_PHRASES = (
    ("over", "the", "years"), ("over", "years"), ("over", "time"),
    ("over", "the", "months"), ("trend",), ("trends",),
)

_NUMERIC_GT_WORDS = frozenset({"over", "above", "exceeding"})
_NUMERIC_LT_WORDS = frozenset({"under", "below"})

_VEGA_AGGREGATE = {"avg": "mean", "sum": "sum", "min": "min", "max": "max",
                   "count": "count", "median": "median"}

_RANK_FIELD = "__rank"


def _load_packaged_json(relpath: str) -> dict:
    return json.loads(resources.files("convoviz").joinpath(relpath).read_text("utf-8"))


_scoring_table: dict | None = None
_chart_schema: dict | None = None


def load_scoring_table() -> dict:
    global _scoring_table
    if _scoring_table is None:
        _scoring_table = _load_packaged_json("data/vis_scoring.json")
    return _scoring_table


def load_chart_schema() -> dict:
    global _chart_schema
    if _chart_schema is None:
        _chart_schema = _load_packaged_json("data/chart_grammar.schema.json")
    return _chart_schema


def validate_grammar_spec(spec: dict) -> None:
    """Raise jsonschema.ValidationError if a grammarSpec leaves the subset."""
    import jsonschema

    jsonschema.validate(instance=spec, schema=load_chart_schema())


# ---------------------------------------------------------------------------
# attribute identification

@dataclass(frozen=True)
class VocabEntry:
    kind: str       # attribute | alias | value
    attribute: str
    text: str
    order: int      # detection order scanning schema then domains


def build_vocabulary(dataset: Dataset) -> list[VocabEntry]:
    entries: list[VocabEntry] = []
    order = 0
    for attr in dataset.attributes:
        entries.append(VocabEntry("attribute", attr.name, attr.name, order))
        order += 1
        for alias in attr.aliases:
            entries.append(VocabEntry("alias", attr.name, str(alias), order))
            order += 1
    for attr in dataset.attributes:
        if attr.data_type in ("nominal", "ordinal"):
            for value in attr.domain:
                entries.append(VocabEntry("value", attr.name, str(value), order))
                order += 1
    return entries


@dataclass
class _PhraseMatch:
    ngram_start: int
    ngram_end: int
    surface: str
    candidates: list  # (VocabEntry, score) in vocabulary order
    top: float


@dataclass
class AttributeExtraction:
    """identify_attributes output: the map plus bookkeeping for later stages."""

    attribute_map: dict = field(default_factory=dict)
    ambiguities: list = field(default_factory=list)
    consumed: set = field(default_factory=set)  # token indexes bound to entities


def _new_entry(phrase: str, kind: str, score: float, grouping: bool) -> dict:
    return {
        "queryPhrase": [phrase],
        "matchKind": kind,
        "score": round(score, 6),
        "isAmbiguous": False,
        "impliedValues": [],
        "grouping": grouping,
    }


_KIND_PRIORITY = {"exactName": 0, "alias": 1, "semantic": 2, "syntactic": 3, "valueImplied": 4}


def merge_attribute_entry(attribute_map: dict, name: str, phrase: str, kind: str,
                          score: float, *, grouping: bool = False,
                          implied_value: str | None = None,
                          is_ambiguous: bool = False) -> None:
    entry = attribute_map.get(name)
    if entry is None:
        entry = _new_entry(phrase, kind, score, grouping)
        attribute_map[name] = entry
    else:
        if phrase not in entry["queryPhrase"]:
            entry["queryPhrase"].append(phrase)
        if _KIND_PRIORITY[kind] < _KIND_PRIORITY[entry["matchKind"]]:
            entry["matchKind"] = kind
        entry["score"] = round(max(entry["score"], score), 6)
        entry["grouping"] = entry["grouping"] or grouping
    if implied_value is not None and implied_value not in entry["impliedValues"]:
        entry["impliedValues"].append(implied_value)
    if is_ambiguous:
        entry["isAmbiguous"] = True


def match_kind_for(phrase: str, entry: VocabEntry) -> str:
    if entry.kind == "value":
        return "valueImplied"
    if entry.kind == "alias":
        return "alias"
    if phrase.strip().lower() == entry.text.strip().lower():
        return "exactName"
    if semantic_similarity(phrase, entry.text) >= 1.0:
        return "semantic"
    return "syntactic"


def identify_attributes(seq: TokenSequence, dataset: Dataset,
                        threshold: float = SIMILARITY_THRESHOLD) -> AttributeExtraction:
    """Scan query n-grams against the schema and nominal domains.

    Overlapping candidate phrases are resolved greedily by (top score,
    span length, position). Within one surviving phrase, attribute-kind and
    value-kind candidates are examined separately: a single candidate binds
    directly, two or more become an AmbiguityRecord.
    """
    vocabulary = build_vocabulary(dataset)
    words = seq.normalized

    matches: list[_PhraseMatch] = []
    for ngram in seq.ngrams:
        if words[ngram.start] in STOPWORDS or words[ngram.end - 1] in STOPWORDS:
            continue
        candidates = []
        for entry in vocabulary:
            score = similarity(ngram.surface, entry.text)
            if score >= threshold:
                candidates.append((entry, round(score, 6)))
        if candidates:
            matches.append(_PhraseMatch(
                ngram.start, ngram.end, ngram.surface,
                candidates, max(s for _, s in candidates),
            ))

    matches.sort(key=lambda m: (-m.top, -(m.ngram_end - m.ngram_start), m.ngram_start))
    claimed: set[int] = set()
    kept: list[_PhraseMatch] = []
    for match in matches:
        span = range(match.ngram_start, match.ngram_end)
        if any(i in claimed for i in span):
            continue
        claimed.update(span)
        kept.append(match)
    kept.sort(key=lambda m: m.ngram_start)

    extraction = AttributeExtraction()
    for match in kept:
        extraction.consumed.update(range(match.ngram_start, match.ngram_end))
        grouping = match.ngram_start > 0 and words[match.ngram_start - 1] == "by"

        attribute_candidates = [(e, s) for e, s in match.candidates if e.kind in ("attribute", "alias")]
        value_candidates = [(e, s) for e, s in match.candidates if e.kind == "value"]

        if len(attribute_candidates) == 1:
            entry, score = attribute_candidates[0]
            merge_attribute_entry(
                extraction.attribute_map, entry.attribute, match.surface,
                match_kind_for(match.surface, entry), score, grouping=grouping,
            )
        elif len(attribute_candidates) > 1:
            extraction.ambiguities.append(AmbiguityRecord(
                kind=ATTRIBUTE_KIND,
                query_phrase=match.surface,
                options=[e.attribute for e, _ in attribute_candidates],
                scores=[s for _, s in attribute_candidates],
            ))

        if len(value_candidates) == 1:
            entry, score = value_candidates[0]
            merge_attribute_entry(
                extraction.attribute_map, entry.attribute, match.surface,
                "valueImplied", score, grouping=grouping, implied_value=entry.text,
            )
        elif len(value_candidates) > 1:
            extraction.ambiguities.append(AmbiguityRecord(
                kind=VALUE_KIND,
                query_phrase=match.surface,
                options=[{"attribute": e.attribute, "value": e.text} for e, _ in value_candidates],
                scores=[s for _, s in value_candidates],
            ))

    return extraction


# ---------------------------------------------------------------------------
# task identification

def _attrs_of_type(attribute_map: dict, dataset: Dataset, *data_types: str) -> list[str]:
    names = []
    for name in attribute_map:
        attr = dataset.attribute(name)
        if attr is not None and attr.data_type in data_types:
            names.append(name)
    return names


def _task_entry(attributes: list[str], *, operator: str | None = None,
                values: list | None = None, direction: str | None = None) -> dict:
    return {
        "attributes": list(attributes),
        "operator": operator,
        "values": list(values or []),
        "direction": direction,
    }


def _parse_number(word: str):
    try:
        value = float(word)
    except ValueError:
        return None
    return int(value) if value.is_integer() else value


@dataclass
class _TaskKeywordScan:
    trend: bool = False
    derived_ops: list = field(default_factory=list)
    extremum: tuple | None = None           # (direction, limit)
    correlation: bool = False
    distribution: bool = False
    sort: bool = False
    sort_direction: str | None = None
    numeric_filters: list = field(default_factory=list)  # (operator, values)

    def families(self) -> list[str]:
        found = []
        if self.derived_ops:
            found.append("derived_value")
        if self.trend:
            found.append("trend")
        if self.correlation:
            found.append("correlation")
        if self.distribution:
            found.append("distribution")
        if self.extremum is not None:
            found.append("find_extremum")
        if self.sort:
            found.append("sort")
        return found


def _scan_task_keywords(words: tuple, consumed: set) -> _TaskKeywordScan:
    """Find analytic task words among tokens not bound to data entities.

    Trend phrases are the one exception to the consumed-token rule: "over
    the years" legitimately shares its noun with a temporal attribute match,
    so trend detection runs on the raw stream.
    """
    scan = _TaskKeywordScan()
    for phrase in TREND_PHRASES:
        n = len(phrase)
        if any(tuple(words[i:i + n]) == phrase for i in range(len(words) - n + 1)):
            scan.trend = True
            break

    for i, word in enumerate(words):
        if i in consumed:
            continue
        if word in EXTREMUM_WORDS:
            limit = 1
            if i + 1 < len(words):
                number = _parse_number(words[i + 1])
                if number is not None and number == int(number) and number > 0:
                    limit = int(number)
            scan.extremum = (EXTREMUM_WORDS[word], limit)
        elif word in DERIVED_WORDS:
            if DERIVED_WORDS[word] not in scan.derived_ops:
                scan.derived_ops.append(DERIVED_WORDS[word])
        elif word in CORRELATION_WORDS:
            scan.correlation = True
        elif word in SORT_WORDS:
            scan.sort = True
        elif word in SORT_DIRECTION_WORDS:
            scan.sort = True
            scan.sort_direction = SORT_DIRECTION_WORDS[word]
        elif word in DISTRIBUTION_WORDS:
            scan.distribution = True
        elif word in _NUMERIC_GT_WORDS or word in _NUMERIC_LT_WORDS:
            if i + 1 < len(words):
                number = _parse_number(words[i + 1])
                if number is not None:
                    operator = "GT" if word in _NUMERIC_GT_WORDS else "LT"
                    scan.numeric_filters.append((operator, [number]))
        elif word == "between" and i + 3 < len(words) and words[i + 2] == "and":
            low = _parse_number(words[i + 1])
            high = _parse_number(words[i + 3])
            if low is not None and high is not None:
                scan.numeric_filters.append(("RANGE", [low, high]))
    return scan


def keyword_task_families(seq: TokenSequence, consumed: set) -> list[str]:
    """Task families actually named by the query, ignoring rule-table defaults."""
    return _scan_task_keywords(seq.normalized, consumed).families()


def identify_tasks(seq: TokenSequence, extraction: AttributeExtraction,
                   dataset: Dataset) -> dict:
    """Task inference: keyword scan first, then rule-table defaults."""
    attribute_map = extraction.attribute_map
    scan = _scan_task_keywords(seq.normalized, extraction.consumed)

    q_attrs = _attrs_of_type(attribute_map, dataset, "quantitative")
    t_attrs = _attrs_of_type(attribute_map, dataset, "temporal")
    n_attrs = _attrs_of_type(attribute_map, dataset, "nominal", "ordinal")

    tasks: dict[str, list[dict]] = {}

    def add(task: str, entry: dict) -> None:
        tasks.setdefault(task, []).append(entry)

    # value filters carried by the attribute matches themselves
    for name, entry in attribute_map.items():
        if entry["impliedValues"]:
            add("filter", _task_entry([name], operator="IN", values=entry["impliedValues"]))
    for operator, values in scan.numeric_filters:
        if q_attrs:
            add("filter", _task_entry(q_attrs[:1], operator=operator, values=values))

    if scan.trend:
        add("trend", _task_entry(t_attrs[:1]))
    for op in scan.derived_ops:
        add("derived_value", _task_entry(q_attrs[:1], operator=op))
    if scan.correlation:
        add("correlation", _task_entry(q_attrs[:2]))
    if scan.distribution:
        add("distribution", _task_entry(q_attrs[:1]))
    if scan.extremum is not None:
        direction, limit = scan.extremum
        entry = _task_entry(q_attrs[:1], direction=direction)
        entry["limit"] = limit
        add("find_extremum", entry)
    if scan.sort:
        by_attrs = [n for n, e in attribute_map.items() if e["grouping"]]
        sort_attrs = (by_attrs or q_attrs)[:1]
        add("sort", _task_entry(sort_attrs, direction=scan.sort_direction or "asc"))

    # rule-table defaults when the query names attributes but no analytic task
    analytic = [t for t in tasks if t != "filter"]
    if not analytic:
        encodable_q = [n for n in q_attrs if attribute_map[n]["matchKind"] != "valueImplied"]
        encodable_n = [n for n in n_attrs if attribute_map[n]["matchKind"] != "valueImplied"]
        if len(encodable_q) == 2:
            add("correlation", _task_entry(encodable_q[:2]))
        elif len(encodable_q) == 1 and encodable_n:
            add("derived_value", _task_entry(encodable_q[:1], operator="avg"))

    return {task: tasks[task] for task in TASK_ORDER if task in tasks}


# ---------------------------------------------------------------------------
# visualization generation

_COMBO_LETTER = {"quantitative": "Q", "nominal": "N", "ordinal": "N", "temporal": "T"}


def encodable_attributes(attribute_map: dict) -> list[str]:
    """Attributes that belong on encoding channels.

    Purely value-implied matches act as filters, not encodings, unless they
    are all the query has.
    """
    names = [n for n, e in attribute_map.items() if e["matchKind"] != "valueImplied"]
    return names or list(attribute_map)


def _combo_key(names: list[str], dataset: Dataset) -> str:
    return "".join(sorted(_COMBO_LETTER[dataset.attribute(n).data_type] for n in names))


def lawful_marks(attribute_map: dict, dataset: Dataset) -> list[str]:
    """Mark types the scoring table allows for this attribute combination."""
    table = load_scoring_table()["comboMarks"]
    names = list(encodable_attributes(attribute_map))
    while names:
        key = _combo_key(names, dataset)
        if key in table:
            return list(table[key])
        names.pop()
    return []


def _channel(dataset: Dataset, name: str, **extra) -> dict:
    attr = dataset.attribute(name)
    channel = {"field": name, "type": attr.data_type}
    channel.update(extra)
    return channel


def _filter_transforms(task_map: dict) -> list[dict]:
    transforms = []
    for entry in task_map.get("filter", []):
        if not entry["attributes"]:
            continue
        fieldname = entry["attributes"][0]
        operator = entry["operator"]
        values = entry["values"]
        if operator == "IN":
            transforms.append({"filter": {"field": fieldname, "oneOf": list(values)}})
        elif operator == "GT":
            transforms.append({"filter": {"field": fieldname, "gt": values[0]}})
        elif operator == "LT":
            transforms.append({"filter": {"field": fieldname, "lt": values[0]}})
        elif operator == "RANGE":
            transforms.append({"filter": {"field": fieldname, "range": [values[0], values[1]]}})
    return transforms


def _build_grammar_spec(mark: str, attribute_map: dict, task_map: dict,
                        dataset: Dataset) -> dict:
    """Assemble one Vega-Lite-compatible spec for the given mark type."""
    encodable = encodable_attributes(attribute_map)
    q_attrs = [n for n in encodable if dataset.attribute(n).data_type == "quantitative"]
    t_attrs = [n for n in encodable if dataset.attribute(n).data_type == "temporal"]
    n_attrs = [n for n in encodable if dataset.attribute(n).data_type in ("nominal", "ordinal")]
    # grouping-flagged nominals ("by country") take the categorical slot first
    n_attrs.sort(key=lambda n: 0 if attribute_map[n]["grouping"] else 1)

    derived = task_map.get("derived_value", [])
    aggregate_op = _VEGA_AGGREGATE[derived[0]["operator"]] if derived else None
    extremum = task_map.get("find_extremum", [])
    sort_entries = task_map.get("sort", [])

    transforms = _filter_transforms(task_map)
    encoding: dict[str, dict] = {}
    vega_mark = mark

    q = q_attrs[0] if q_attrs else None
    t = t_attrs[0] if t_attrs else None
    n = n_attrs[0] if n_attrs else None

    if mark == "histogram-bar":
        vega_mark = "bar"
        encoding["x"] = _channel(dataset, q, bin=True)
        encoding["y"] = {"aggregate": "count", "type": "quantitative"}
    elif mark == "tick":
        encoding["x"] = _channel(dataset, q)
    elif mark == "boxplot":
        if n is not None:
            encoding["x"] = _channel(dataset, n)
        encoding["y"] = _channel(dataset, q)
    elif mark == "arc":
        measure = _channel(dataset, q, aggregate=aggregate_op or "sum") if q else {"aggregate": "count", "type": "quantitative"}
        encoding["theta"] = measure
        if n is not None:
            encoding["color"] = _channel(dataset, n)
    elif mark == "point":
        if len(q_attrs) >= 2:
            encoding["x"] = _channel(dataset, q_attrs[0])
            encoding["y"] = _channel(dataset, q_attrs[1])
        elif t is not None and q is not None:
            encoding["x"] = _channel(dataset, t)
            encoding["y"] = _channel(dataset, q)
        elif n is not None and q is not None:
            encoding["x"] = _channel(dataset, n)
            encoding["y"] = _channel(dataset, q)
        elif q is not None:
            encoding["x"] = _channel(dataset, q)
        if n is not None and "x" in encoding and encoding["x"].get("field") != n:
            encoding["color"] = _channel(dataset, n)
    elif mark in ("line", "area"):
        x_attr = t or n or q
        encoding["x"] = _channel(dataset, x_attr)
        if q is not None and x_attr != q:
            encoding["y"] = _channel(dataset, q, **({"aggregate": aggregate_op} if aggregate_op else {}))
        else:
            encoding["y"] = {"aggregate": "count", "type": "quantitative"}
        if n is not None and x_attr != n:
            encoding["color"] = _channel(dataset, n)
    elif mark == "bar":
        x_attr = None
        color_attr = None
        if t is not None and n is not None:
            x_attr, color_attr = t, n
        elif n is not None:
            x_attr = n
            color_attr = n_attrs[1] if len(n_attrs) > 1 else None
        elif t is not None:
            x_attr = t
        if x_attr is not None:
            encoding["x"] = _channel(dataset, x_attr)
        if q is not None:
            aggregated = aggregate_op if (x_attr is not None and not extremum) else None
            encoding["y"] = _channel(dataset, q, **({"aggregate": aggregated} if aggregated else {}))
        else:
            encoding["y"] = {"aggregate": "count", "type": "quantitative"}
        if color_attr is not None:
            encoding["color"] = _channel(dataset, color_attr)
    else:  # pragma: no cover - the scoring table is the gatekeeper
        raise IllegalChartOverride(f"unknown mark type: {mark}")

    if extremum and q is not None:
        direction = extremum[0]["direction"]
        limit = extremum[0].get("limit", 1)
        order = "descending" if direction == "max" else "ascending"
        if n is not None and mark == "bar":
            agg = aggregate_op or "mean"
            transforms.append({
                "aggregate": [{"op": agg, "field": q, "as": q}],
                "groupby": [n],
            })
        transforms.append({
            "window": [{"op": "rank", "as": _RANK_FIELD}],
            "sort": [{"field": q, "order": order}],
        })
        transforms.append({"filter": {"field": _RANK_FIELD, "lte": limit}})
    elif sort_entries and "x" in encoding and "y" in encoding and mark in ("bar", "line"):
        direction = sort_entries[0]["direction"] or "asc"
        if encoding["y"].get("field") or encoding["y"].get("aggregate"):
            encoding["x"]["sort"] = "y" if direction == "asc" else "-y"

    spec = {
        "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
        "data": {"values": [dict(row) for row in dataset.rows]},
        "mark": vega_mark,
        "encoding": encoding,
    }
    if transforms:
        spec["transform"] = transforms
    return spec


def _spec_attributes(spec: dict) -> list[str]:
    """Fields a grammarSpec references: encoding channels, then filters."""
    names: list[str] = []
    for channel in spec["encoding"].values():
        fieldname = channel.get("field")
        if fieldname and not fieldname.startswith("__") and fieldname not in names:
            names.append(fieldname)
    for transform in spec.get("transform", []):
        fieldname = transform.get("filter", {}).get("field")
        if fieldname and not fieldname.startswith("__") and fieldname not in names:
            names.append(fieldname)
    return names


def generate_vis_list(attribute_map: dict, task_map: dict, dataset: Dataset,
                      force_mark: str | None = None) -> list[dict]:
    """Score every lawful mark for the attribute combo and rank the specs.

    ``force_mark`` pins a mark to the top of the list (score = natural max
    + 1); it must be lawful for the combo or IllegalChartOverride is raised.
    """
    if not attribute_map:
        raise NoResolvableAttributes("no attributes to visualize")
    table = load_scoring_table()
    marks = lawful_marks(attribute_map, dataset)
    if not marks:
        raise NoResolvableAttributes(
            "no lawful chart for attributes: %s" % ", ".join(attribute_map))
    if force_mark is not None and force_mark not in marks:
        raise IllegalChartOverride(
            f"mark {force_mark!r} cannot encode this attribute combination "
            f"(lawful: {', '.join(marks)})")

    combo = load_scoring_table()["comboMarks"]
    names = list(encodable_attributes(attribute_map))
    while names and _combo_key(names, dataset) not in combo:
        names.pop()
    base_scores = combo[_combo_key(names, dataset)]

    affinity = table["taskAffinity"]
    precedence = table["tiePrecedence"]
    task_names = [t for t in TASK_ORDER if t in task_map]

    scored: list[tuple[float, str]] = []
    for mark in marks:
        score = base_scores[mark]
        for task in task_names:
            score += affinity.get(task, {}).get(mark, 0.0)
        scored.append((round(score, 6), mark))

    natural_max = max(score for score, _ in scored)
    if force_mark is not None:
        scored = [(round(natural_max + 1.0, 6), mark) if mark == force_mark else (score, mark)
                  for score, mark in scored]

    scored.sort(key=lambda pair: (-pair[0], precedence.index(pair[1])))

    vis_list = []
    for score, mark in scored:
        spec = _build_grammar_spec(mark, attribute_map, task_map, dataset)
        vis_list.append({
            "score": score,
            "markType": mark,
            "attributes": _spec_attributes(spec),
            "tasks": task_names,
            "grammarSpec": spec,
        })
    return vis_list


def analyze_standalone(query: str, dataset: Dataset,
                       threshold: float = SIMILARITY_THRESHOLD) -> QueryResult:
    """Full single-query pipeline; dialog fields are left for the caller.

    Raises EmptyQuery for blank input and NoResolvableAttributes when neither
    an attribute nor an ambiguity candidate was found. Open ambiguities leave
    the visList empty.
    """
    seq = tokenize(query)
    extraction = identify_attributes(seq, dataset, threshold)
    task_map = identify_tasks(seq, extraction, dataset)
    if not extraction.attribute_map and not extraction.ambiguities:
        raise NoResolvableAttributes(
            f"no dataset attribute or value matches the query: {query!r}")
    if extraction.ambiguities:
        vis_list: list[dict] = []
        if not any(r.is_open for r in extraction.ambiguities):  # pragma: no cover
            vis_list = generate_vis_list(extraction.attribute_map, task_map, dataset)
    else:
        vis_list = generate_vis_list(extraction.attribute_map, task_map, dataset)
    logger.debug("analyzed %r: %d attributes, %d tasks, %d ambiguities",
                 query, len(extraction.attribute_map), len(task_map),
                 len(extraction.ambiguities))
    return QueryResult(
        query=query,
        dialog_id="",
        query_id="",
        follow_up_confidence="none",
        attribute_map=extraction.attribute_map,
        task_map=task_map,
        vis_list=vis_list,
        ambiguities=extraction.ambiguities,
    )
