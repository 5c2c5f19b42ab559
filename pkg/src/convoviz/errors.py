"""Exception types raised by the engine.

Every error carries a stable ``code`` string so the HTTP layer and the CLI
can map failures without string-matching messages.
"""


class ConvovizError(Exception):
    """Base class for all engine errors."""

    code = "engine_error"


class UnreadableSource(ConvovizError):
    """The dataset source does not exist or cannot be read."""

    code = "unreadable_source"


class MalformedTable(ConvovizError):
    """The table has ragged rows, duplicate headers, or unparseable content."""

    code = "malformed_table"


class EmptyTable(ConvovizError):
    """The table has no columns or no data rows."""

    code = "empty_table"


class EmptyQuery(ConvovizError):
    """The query is empty after trimming whitespace."""

    code = "empty_query"


class NoResolvableAttributes(ConvovizError):
    """No query phrase matched any attribute or value in the dataset."""

    code = "no_resolvable_attributes"


class NoConversationToFollowUp(ConvovizError):
    """A follow-up was requested but the conversation store is empty."""

    code = "no_conversation_to_follow_up"


class UnknownDialogOrQueryId(ConvovizError):
    """The given dialog/query identifier does not exist in the store."""

    code = "unknown_dialog_or_query_id"


class TargetNotInParent(ConvovizError):
    """A follow-up tried to remove or replace an item the parent lacks."""

    code = "target_not_in_parent"


class IllegalChartOverride(ConvovizError):
    """The requested mark type cannot encode the current attribute set."""

    code = "illegal_chart_override"


class UnresolvedAmbiguities(ConvovizError):
    """A follow-up targeted a query whose ambiguities are still open."""

    code = "unresolved_ambiguities"


class UnknownAmbiguityKeyword(ConvovizError):
    """A resolution referenced a query phrase with no open ambiguity."""

    code = "unknown_ambiguity_keyword"


class SelectionNotAnOption(ConvovizError):
    """A resolution selected an entity outside the recorded options."""

    code = "selection_not_an_option"


class TargetNotFound(ConvovizError):
    """update_query targeted a (dialog_id, query_id) that does not exist."""

    code = "target_not_found"


class UnclassifiableFollowUp(ConvovizError):
    """The follow-up query matched no classification rule."""

    code = "unclassifiable_follow_up"
