import re
import string

import pytest
from hypothesis import given, strategies as st

from lexisent.corpus import TweetRecord
from lexisent.textpipe import (
    PipelineConfig, ReductionMode, expand_slang, load_lemmas, load_slang, load_stopwords, normalize,
    preprocess, reduce, remove_stopwords, stem, tokenize,
)

TOKEN = re.compile(r"[a-z']+")
nltk_porter = pytest.importorskip("nltk.stem.porter")


def test_normalize_strips_urls_mentions_numbers_symbols():
    # every strip rule applied in order leaves the plain word "check" in place
    assert normalize("@user check http://t.co/x 123 GREAT!!!") == "check great"


@pytest.mark.parametrize("raw,expected", [
    ("", ""),
    ("hello world", "hello world"),
    ("#Monday   blues", "monday blues"),
    ("www.example.com is down", "is down"),
    ("I'm here", "i'm here"),
    ("it’s fine", "it's fine"),
    ("'quoted' words", "quoted words"),
    ("abc123 456", "abc"),
    ("r2d2 :) <3", "r d"),
])
def test_normalize_cases(raw, expected):
    assert normalize(raw) == expected


@given(st.text(alphabet=string.printable + "’‘ñé😀#@", max_size=80))
def test_normalize_idempotent_and_grammar(raw):
    once = normalize(raw)
    assert normalize(once) == once
    assert all(TOKEN.fullmatch(t) for t in tokenize(once))


@pytest.mark.parametrize("text,tokens", [("good day", ["good", "day"]), ("", []), ("  a   b ", ["a", "b"])])
def test_tokenize(text, tokens):
    assert tokenize(text) == tokens


def test_remove_stopwords():
    assert remove_stopwords(["the", "movie", "was", "good"], {"the", "was"}) == ["movie", "good"]
    assert remove_stopwords([], {"x"}) == []
    assert remove_stopwords(["good"], set()) == ["good"]


@given(st.lists(st.sampled_from(["a", "b", "the", "lol", "x"]), max_size=20))
def test_stopword_and_slang_laws(tokens):
    out = remove_stopwords(tokens, {"the"})
    assert len(out) <= len(tokens)
    expanded = expand_slang(tokens, {"lol": ("laugh",)})
    assert [t for t in expanded if t != "laugh"] == [t for t in tokens if t != "lol"]


def test_expand_slang():
    assert expand_slang(["omg", "nice"], {"omg": ("oh", "my", "god")}) == ["oh", "my", "god", "nice"]
    assert expand_slang(["a", "b"], {"omg": ("oh",)}) == ["a", "b"]
    assert expand_slang(["lol", "lol"], {"lol": ("laugh",)}) == ["laugh", "laugh"]


def test_bundled_slang_table():
    slang = load_slang()
    assert slang["omg"] == ("oh", "my", "god")
    assert all(k == k.lower() for k in slang)


def test_reduce_modes():
    assert reduce(["running"], ReductionMode.STEM) == ["run"]
    assert reduce(["sky"], ReductionMode.STEM) == ["sky"]
    assert reduce(["died"], ReductionMode.LEMMATIZE, load_lemmas()) == ["die"]
    assert reduce(["unlisted"], ReductionMode.LEMMATIZE, {}) == ["unlisted"]
    assert reduce(["running"], ReductionMode.NONE) == ["running"]


def test_stemmer_matches_reference_on_word_list():
    oracle = nltk_porter.PorterStemmer(mode=nltk_porter.PorterStemmer.ORIGINAL_ALGORITHM)
    from lexisent.lexicon import load_lexicon
    words = [w for w in load_lexicon().entries if w.isalpha()]
    words += ["caresses", "ponies", "ties", "caress", "cats", "feed", "agreed", "plastered", "bled",
              "motoring", "sing", "conflated", "troubled", "sized", "hopping", "tanned", "falling",
              "hissing", "fizzed", "failing", "filing", "happy", "sky", "relational", "conditional",
              "rational", "valenci", "hesitanci", "digitizer", "conformabli", "radicalli", "differentli",
              "vileli", "analogousli", "vietnamization", "predication", "operator", "feudalism",
              "decisiveness", "hopefulness", "callousness", "formaliti", "sensitiviti", "sensibiliti",
              "triplicate", "formative", "formalize", "electriciti", "electrical", "hopeful", "goodness",
              "revival", "allowance", "inference", "airliner", "gyroscopic", "adjustable", "defensible",
              "irritant", "replacement", "adjustment", "dependent", "adoption", "homologou", "communism",
              "activate", "angulariti", "homologous", "effective", "bowdlerize", "probate", "rate",
              "cease", "controll", "roll", "generalizations", "oscillators"]
    mismatches = [(w, stem(w), oracle.stem(w)) for w in words if stem(w) != oracle.stem(w)]
    assert not mismatches[:10]


def test_stem_short_words_unchanged():
    assert stem("as") == "as" and stem("is") == "is" and stem("a") == "a"


def test_preprocess_examples():
    cfg = PipelineConfig.default()
    doc = preprocess(TweetRecord("1", "@u I'm LOVING it! http://x"), cfg)
    assert doc.tokens == ("love",)
    empty = preprocess(TweetRecord("2", "12345 @a http://b"), cfg)
    assert empty.tokens == () and empty.dropped_all


@given(st.text(alphabet=string.ascii_letters + " '@#:/.0123456789!", max_size=60))
def test_preprocess_deterministic_and_lowercase(raw):
    cfg = PipelineConfig.default()
    a = preprocess(TweetRecord("x", raw), cfg)
    assert a == preprocess(TweetRecord("x", raw), cfg)
    assert all(TOKEN.fullmatch(t) for t in a.tokens)
    assert a.dropped_all == (len(a.tokens) == 0)


def test_pipeline_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(strip_rules=())
    with pytest.raises(ValueError):
        PipelineConfig(strip_rules=("nope",))
    with pytest.raises(ValueError):
        PipelineConfig(slang={"OMG": ("oh",)})


def test_stopword_list_keeps_negators_and_boosters():
    stop = load_stopwords()
    assert {"not", "no", "very"}.isdisjoint(stop)
    assert {"the", "i'm", "it"} <= stop
