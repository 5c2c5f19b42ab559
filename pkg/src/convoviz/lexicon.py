"""Tokenization, string similarity, and the follow-up keyword maps.

Everything in here is a pure function over immutable inputs, which keeps the
modules above it (attribute extraction, follow-up detection) safe to call
concurrently. Similarity scoring is deliberately dependency-free: a normalized
edit distance with a containment bonus covers the syntactic side, and a small
bundled synonym table covers the semantic side.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import EmptyQuery

SIMILARITY_THRESHOLD = 0.75

# Containment (one phrase's stemmed tokens appearing contiguously inside the
# other's) earns at least this much, plus a share proportional to how much of
# the longer string is covered. Capped just under 1 so only true
# case-insensitive equality ever reaches 1.0.
_CONTAINMENT_BASE = 0.8
_CONTAINMENT_SPAN = 0.2
_CONTAINMENT_CAP = 0.995

MAX_NGRAM = 4

ACTIONS = ("add", "remove", "replace")
TARGETS = ("attributes", "tasks", "visualizations")

_WORD_RE = re.compile(r"\d+(?:\.\d+)?|[A-Za-z][\w'-]*")

# Used only to prune entity-candidate n-grams at their boundaries; keyword and
# task matching always works on the raw token stream.
STOPWORDS = frozenset({
    "a", "an", "the", "this", "that", "these", "those",
    "of", "in", "on", "at", "by", "for", "to", "from", "with",
    "and", "or", "as", "is", "are", "was", "were", "be", "been", "being",
    "do", "does", "did", "has", "have", "had",
    "it", "its", "me", "my", "i", "we", "our", "us", "you", "your",
    "what", "which", "who", "whom", "whose", "when", "where", "how", "why",
    "show", "display", "plot", "visualize", "give", "find", "tell", "please",
    "can", "could", "would", "should",
    "about", "over", "under", "between", "across", "per", "each", "every",
    "all", "any", "some", "only", "just", "now", "more", "most", "less",
    "least", "than", "then", "instead", "rather", "also", "too", "very",
    "different", "various", "versus", "vs",
})

# Chart-type vocabulary. A specific noun next to a generic one ("bar chart")
# or a recognized standalone noun ("histogram") names a mark type; a generic
# noun alone ("chart") counts as a chart mention without naming a mark.
_SPECIFIC_CHART_NOUNS = {
    "bar": "bar",
    "line": "line",
    "area": "area",
    "pie": "arc",
    "donut": "arc",
    "scatter": "point",
    "point": "point",
    "box": "boxplot",
    "strip": "tick",
    "tick": "tick",
    "histogram": "histogram-bar",
}
_STANDALONE_CHART_NOUNS = {
    "histogram": "histogram-bar",
    "scatterplot": "point",
    "boxplot": "boxplot",
    "piechart": "arc",
}
_GENERIC_CHART_NOUNS = frozenset({
    "chart", "charts", "plot", "plots", "graph", "graphs",
    "visualization", "visualisation", "viz",
})

_CHART_NOUN_WINDOW = 3


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    position: int  # character offset into the original query


@dataclass(frozen=True)
class NGram:
    start: int  # token index, inclusive
    end: int     # token index, exclusive
    surface: str
    normalized: str

    def __len__(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class TokenSequence:
    query: str
    tokens: tuple[Token, ...]
    ngrams: tuple[NGram, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def normalized(self) -> tuple[str, ...]:
        return tuple(t.normalized for t in self.tokens)


def tokenize(query: str) -> TokenSequence:
    """Split a query into word tokens and precompute n-grams up to length 4.

    Punctuation never survives at token boundaries; hyphens and apostrophes
    inside a word ("PG-13") do. Raises EmptyQuery when nothing word-like
    remains.
    """
    if query is None or not query.strip():
        raise EmptyQuery("query is empty")
    tokens = tuple(
        Token(m.group(0), m.group(0).lower(), m.start())
        for m in _WORD_RE.finditer(query)
    )
    if not tokens:
        raise EmptyQuery("query contains no words: %r" % query)
    ngrams = []
    for start in range(len(tokens)):
        for n in range(1, MAX_NGRAM + 1):
            end = start + n
            if end > len(tokens):
                break
            ngrams.append(NGram(
                start,
                end,
                " ".join(t.surface for t in tokens[start:end]),
                " ".join(t.normalized for t in tokens[start:end]),
            ))
    return TokenSequence(query, tokens, tuple(ngrams))


def levenshtein(a: str, b: str) -> int:
    """Plain edit distance, two-row DP."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


def stem(word: str) -> str:
    """A small rule stemmer tuned for column headers and query words.

    Handles the usual plural endings plus "-ing" on longer words so that
    "grossing" lines up with "Gross" and "skating" with "Skating". Not a
    general-purpose stemmer and not meant to be one.
    """
    w = word.lower()
    if len(w) > 4 and w.endswith("ies"):
        return w[:-3] + "y"
    if len(w) > 4 and w.endswith(("sses", "xes", "zes", "ches", "shes")):
        return w[:-2]
    if len(w) > 3 and w.endswith("s") and not w.endswith(("ss", "us", "is")):
        return w[:-1]
    if len(w) > 5 and w.endswith("ing"):
        return w[:-3]
    return w


def stem_tokens(text: str) -> tuple[str, ...]:
    return tuple(stem(m.group(0)) for m in _WORD_RE.finditer(text))


def _contains_contiguous(needle: tuple[str, ...], haystack: tuple[str, ...]) -> bool:
    n = len(needle)
    if n == 0 or n > len(haystack):
        return False
    return any(haystack[i:i + n] == needle for i in range(len(haystack) - n + 1))


def syntactic_similarity(a: str, b: str) -> float:
    """String-shape similarity in [0, 1]; exactly 1.0 iff equal ignoring case.

    Base score is 1 - normalized edit distance. When the stemmed tokens of one
    side appear contiguously inside the other's ("medals" in "Gold Medals"),
    a containment bonus of at least 0.8 applies, growing with the share of the
    longer string covered.
    """
    la = a.strip().lower()
    lb = b.strip().lower()
    if not la or not lb:
        return 0.0
    if la == lb:
        return 1.0
    base = 1.0 - levenshtein(la, lb) / max(len(la), len(lb))
    sa = stem_tokens(la)
    sb = stem_tokens(lb)
    bonus = 0.0
    if sa and sb and (_contains_contiguous(sa, sb) or _contains_contiguous(sb, sa)):
        shorter, longer = sorted((len(la), len(lb)))
        bonus = min(_CONTAINMENT_BASE + _CONTAINMENT_SPAN * (shorter / longer),
                    _CONTAINMENT_CAP)
    return max(base, bonus, 0.0)


def _load_synonym_index() -> dict[str, int]:
    raw = json.loads(
        resources.files("convoviz").joinpath("data/synonyms.json").read_text("utf-8")
    )
    index: dict[str, int] = {}
    for group_id, group in enumerate(raw["groups"]):
        for word in group:
            index[stem(word)] = group_id
    return index


_SYNONYM_INDEX: dict[str, int] | None = None


def _default_semantic(a: str, b: str) -> float:
    global _SYNONYM_INDEX
    if _SYNONYM_INDEX is None:
        _SYNONYM_INDEX = _load_synonym_index()
    sa = stem_tokens(a)
    sb = stem_tokens(b)
    if not sa or not sb:
        return 0.0
    if sa == sb:
        return 1.0
    if len(sa) == 1 and len(sb) == 1:
        ga = _SYNONYM_INDEX.get(sa[0])
        if ga is not None and ga == _SYNONYM_INDEX.get(sb[0]):
            return 1.0
    return 0.0


_semantic_provider = _default_semantic


def set_semantic_provider(provider) -> None:
    """Swap in a richer semantic scorer (same (a, b) -> [0, 1] contract).

    Passing None restores the bundled synonym-table provider.
    """
    global _semantic_provider
    _semantic_provider = provider if provider is not None else _default_semantic


def semantic_similarity(a: str, b: str) -> float:
    return _semantic_provider(a, b)


def similarity(a: str, b: str) -> float:
    """The score used for entity matching: best of both similarity flavors."""
    return max(syntactic_similarity(a, b), semantic_similarity(a, b))


@dataclass(frozen=True)
class ExplicitRule:
    phrase: str
    action: str
    targets: frozenset[str]
    requires_chart_noun: bool = False


@dataclass
class KeywordMaps:
    """The three configurable keyword sets driving follow-up handling."""

    explicit: dict[str, ExplicitRule]
    implicit_non_ambiguous: tuple[str, ...]
    implicit_ambiguous: tuple[str, ...]

    def validate(self) -> None:
        explicit = set(self.explicit)
        non_ambiguous = set(self.implicit_non_ambiguous)
        ambiguous = set(self.implicit_ambiguous)
        overlap = (explicit & non_ambiguous) | (explicit & ambiguous) | (non_ambiguous & ambiguous)
        if overlap:
            raise ValueError("keyword phrase(s) appear in more than one map: %s"
                             % ", ".join(sorted(overlap)))
        for phrase, rule in self.explicit.items():
            if not phrase.strip():
                raise ValueError("empty explicit keyword phrase")
            if rule.action not in ACTIONS:
                raise ValueError("unknown action %r for keyword %r" % (rule.action, phrase))
            if not rule.targets or not rule.targets <= set(TARGETS):
                raise ValueError("keyword %r needs a non-empty subset of %s as targets"
                                 % (phrase, list(TARGETS)))
            if len(phrase.split()) > MAX_NGRAM:
                raise ValueError("keyword phrase %r longer than %d tokens" % (phrase, MAX_NGRAM))
        for phrase in list(non_ambiguous | ambiguous):
            if not phrase.strip():
                raise ValueError("empty implicit keyword phrase")
            if len(phrase.split()) > MAX_NGRAM:
                raise ValueError("keyword phrase %r longer than %d tokens" % (phrase, MAX_NGRAM))

    @classmethod
    def from_dict(cls, raw: dict) -> "KeywordMaps":
        explicit = {}
        for phrase, entry in raw.get("explicit", {}).items():
            key = phrase.strip().lower()
            explicit[key] = ExplicitRule(
                phrase=key,
                action=entry["action"],
                targets=frozenset(entry["targets"]),
                requires_chart_noun=bool(entry.get("requiresChartNoun", False)),
            )
        maps = cls(
            explicit=explicit,
            implicit_non_ambiguous=tuple(p.strip().lower() for p in raw.get("implicitNonAmbiguous", [])),
            implicit_ambiguous=tuple(p.strip().lower() for p in raw.get("implicitAmbiguous", [])),
        )
        maps.validate()
        return maps

    def to_dict(self) -> dict:
        return {
            "explicit": {
                phrase: {
                    "action": rule.action,
                    "targets": sorted(rule.targets),
                    **({"requiresChartNoun": True} if rule.requires_chart_noun else {}),
                }
                for phrase, rule in self.explicit.items()
            },
            "implicitNonAmbiguous": list(self.implicit_non_ambiguous),
            "implicitAmbiguous": list(self.implicit_ambiguous),
        }

    @classmethod
    def load_default(cls) -> "KeywordMaps":
        raw = json.loads(
            resources.files("convoviz").joinpath("data/default_keywords.json").read_text("utf-8")
        )
        return cls.from_dict(raw)


@dataclass(frozen=True)
class KeywordHit:
    phrase: str
    kind: str  # explicit | implicitNonAmbiguous | implicitAmbiguous
    start: int
    end: int
    action: str | None = None
    targets: frozenset[str] | None = None


@dataclass(frozen=True)
class ChartMention:
    mark: str | None  # None for generic nouns like "chart"
    start: int
    end: int


def find_chart_mentions(seq: TokenSequence) -> list[ChartMention]:
    """Locate chart-type vocabulary in the token stream.

    "bar chart" style pairs and standalone nouns like "histogram" carry a
    mark type; bare "chart"/"plot"/"graph" count as generic mentions. Words
    like "area" or "line" on their own are deliberately NOT treated as chart
    nouns since they collide with ordinary data vocabulary.
    """
    mentions = []
    words = seq.normalized
    i = 0
    while i < len(words):
        word = words[i]
        if (word in _SPECIFIC_CHART_NOUNS
                and i + 1 < len(words)
                and words[i + 1] in _GENERIC_CHART_NOUNS):
            mentions.append(ChartMention(_SPECIFIC_CHART_NOUNS[word], i, i + 2))
            i += 2
            continue
        if word in _STANDALONE_CHART_NOUNS:
            mentions.append(ChartMention(_STANDALONE_CHART_NOUNS[word], i, i + 1))
        elif word in _GENERIC_CHART_NOUNS:
            mentions.append(ChartMention(None, i, i + 1))
        i += 1
    return mentions


def _near_chart_mention(start: int, end: int, mentions: list[ChartMention]) -> bool:
    for mention in mentions:
        if mention.start < end + _CHART_NOUN_WINDOW and mention.end > start - _CHART_NOUN_WINDOW:
            return True
    return False


def match_keywords(seq: TokenSequence, maps: KeywordMaps) -> list[KeywordHit]:
    """Longest-match-first keyword scan; each token joins at most one hit."""
    table: dict[tuple[str, ...], tuple[str, ExplicitRule | None]] = {}
    for phrase, rule in maps.explicit.items():
        table[tuple(phrase.split())] = ("explicit", rule)
    for phrase in maps.implicit_non_ambiguous:
        table[tuple(phrase.split())] = ("implicitNonAmbiguous", None)
    for phrase in maps.implicit_ambiguous:
        table[tuple(phrase.split())] = ("implicitAmbiguous", None)
    if not table:
        return []

    mentions = find_chart_mentions(seq)
    words = seq.normalized
    longest = max(len(k) for k in table)
    claimed: set[int] = set()
    hits = []
    for n in range(min(longest, len(words)), 0, -1):
        for start in range(0, len(words) - n + 1):
            end = start + n
            if any(i in claimed for i in range(start, end)):
                continue
            entry = table.get(words[start:end])
            if entry is None:
                continue
            kind, rule = entry
            if rule is not None and rule.requires_chart_noun:
                if not _near_chart_mention(start, end, mentions):
                    continue
            claimed.update(range(start, end))
            hits.append(KeywordHit(
                phrase=" ".join(words[start:end]),
                kind=kind,
                start=start,
                end=end,
                action=rule.action if rule else None,
                targets=rule.targets if rule else None,
            ))
    hits.sort(key=lambda h: h.start)
    return hits
