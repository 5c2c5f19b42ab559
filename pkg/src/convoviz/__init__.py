"""convoviz: natural language to chart specifications, with conversation state.

Typical use:

    import convoviz

    dataset = convoviz.load_dataset("homes.csv")
    engine = convoviz.Engine(dataset)
    result = engine.analyze_query("average price by home type")
    print(result.to_json())
"""

from .conversation import DialogStore, Engine
from .dataset import Dataset, load_dataset, load_sample
from .errors import (
    ConvovizError,
    EmptyQuery,
    EmptyTable,
    IllegalChartOverride,
    MalformedTable,
    NoConversationToFollowUp,
    NoResolvableAttributes,
    SelectionNotAnOption,
    TargetNotFound,
    TargetNotInParent,
    UnclassifiableFollowUp,
    UnknownAmbiguityKeyword,
    UnknownDialogOrQueryId,
    UnreadableSource,
    UnresolvedAmbiguities,
)
from .lexicon import KeywordMaps, set_semantic_provider, similarity
from .result import AmbiguityRecord, QueryResult

__version__ = "1.0.0"

__all__ = [
    "AmbiguityRecord",
    "ConvovizError",
    "Dataset",
    "DialogStore",
    "EmptyQuery",
    "EmptyTable",
    "Engine",
    "IllegalChartOverride",
    "KeywordMaps",
    "MalformedTable",
    "NoConversationToFollowUp",
    "NoResolvableAttributes",
    "QueryResult",
    "SelectionNotAnOption",
    "TargetNotFound",
    "TargetNotInParent",
    "UnclassifiableFollowUp",
    "UnknownAmbiguityKeyword",
    "UnknownDialogOrQueryId",
    "UnreadableSource",
    "UnresolvedAmbiguities",
    "__version__",
    "load_dataset",
    "load_sample",
    "set_semantic_provider",
    "similarity",
]
