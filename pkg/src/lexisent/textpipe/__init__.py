from lexisent.textpipe.pipeline import (
    DEFAULT_STRIP_RULES,
    TOKEN_RE,
    PipelineConfig,
    ProcessedDoc,
    ReductionMode,
    expand_slang,
    load_lemmas,
    load_slang,
    load_stopwords,
    normalize,
    preprocess,
    preprocess_text,
    reduce,
    remove_stopwords,
    tokenize,
)
from lexisent.textpipe.porter import stem

__all__ = [
    "DEFAULT_STRIP_RULES",
    "TOKEN_RE",
    "PipelineConfig",
    "ProcessedDoc",
    "ReductionMode",
    "expand_slang",
    "load_lemmas",
    "load_slang",
    "load_stopwords",
    "normalize",
    "preprocess",
    "preprocess_text",
    "reduce",
    "remove_stopwords",
    "stem",
    "tokenize",
]
