import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from borrowkit.patterns import (
    AdaptationPattern,
    Edit,
    PatternClass,
    PatternIndex,
    PatternSyntaxError,
    Position,
    RegistryError,
    compile_index,
    donor_candidates,
    fold,
    matches,
    parse_pattern,
    read_registry,
)


def test_parse_suffix_and_prefix():
    p = parse_pattern("on>oun")
    assert p.edits == (Edit(Position.SUFFIX, "on", "oun"),)
    q = parse_pattern("^É>E")
    assert q.edits[0].position is Position.PREFIX
    assert q.edits[0].case_sensitive
    assert parse_pattern("-e").edits == (Edit(Position.SUFFIX, "e", ""),)
    assert parse_pattern("exact").klass is PatternClass.LEXICAL


def test_parse_compound_round_trips():
    p = parse_pattern("on>oun+c>k")
    assert len(p.edits) == 2
    assert p.spec == "on>oun+c>k"


@pytest.mark.parametrize("bad", ["", "on", "a>b>c", "on>on", "on>oun+", "+c>k", "on>oun+-c"])
def test_parse_rejects(bad):
    with pytest.raises(PatternSyntaxError):
        parse_pattern(bad)


def test_syntax_error_carries_position():
    with pytest.raises(PatternSyntaxError) as info:
        parse_pattern("on>oun+a>b>c")
    assert info.value.position >= 7


def test_lexical_iff_no_edits():
    with pytest.raises(ValueError):
        AdaptationPattern("x", (), PatternClass.MORPHOLOGICAL)
    with pytest.raises(PatternSyntaxError):
        parse_pattern("on>oun", klass="LEXICAL")


@pytest.mark.parametrize(
    "spec, lu, donor, expected",
    [
        ("er>éieren", "ajustéieren", "ajuster", True),
        ("on>oun", "Motivatioun", "motivation", True),
        ("on>oun", "Motivatioun", "motive", False),
        ("exact", "Haus", "Haus", True),
        ("exact", "Eclat", "éclat", False),
        ("^É>E", "Eclat", "éclat", True),
        ("^É>E", "eclat", "éclat", False),
        ("le>el", "Decapotabel", "décapotable", True),
        ("-e", "Karwoch", "Karwoche", True),
        ("on>oun+c>k", "Kollektioun", "collection", True),
        ("on>oun+c>k", "Motivatioun", "motivation", False),
    ],
)
def test_matches_examples(spec, lu, donor, expected):
    assert matches(parse_pattern(spec), lu, donor) is expected


def test_donor_candidates_examples():
    assert "ajuster" in donor_candidates(parse_pattern("er>éieren"), "ajustéieren")
    assert donor_candidates(parse_pattern("exact"), "Vignette") == ["vignette"]
    assert donor_candidates(parse_pattern("on>oun"), "Haus") == []
    assert "collection" in donor_candidates(parse_pattern("on>oun+c>k"), "Kollektioun")


def test_registry_loads_with_version_and_classes(registry):
    version, rows = read_registry()
    assert version == "1"
    ids = [r.pattern.id for r in rows]
    assert len(ids) == len(set(ids))
    klass = {r.pattern.id: r.pattern.klass for r in rows}
    assert {k for k, v in klass.items() if v is PatternClass.ORTHOGRAPHIC} == {"on>oun", "le>el", "que>ck", "É>E"}
    assert klass["exact"] is PatternClass.LEXICAL


def test_registry_rejects_duplicates_and_bad_rows(tmp_path):
    path = tmp_path / "r.tsv"
    path.write_text("id\tspec\tklass\tdonor_langs\na\ton>oun\tMORPHOLOGICAL\tFR\na\ter>éieren\tMORPHOLOGICAL\tFR\n",
                    encoding="utf-8")
    _, rows = read_registry(path)
    with pytest.raises(RegistryError):
        PatternIndex([r.pattern for r in rows])
    path.write_text("id\tspec\tklass\tdonor_langs\nb\ton>>oun\tMORPHOLOGICAL\tFR\n", encoding="utf-8")
    with pytest.raises(RegistryError):
        read_registry(path)
    path.write_text("id\tspec\nb\ton>oun\n", encoding="utf-8")
    with pytest.raises(RegistryError):
        read_registry(path)


def test_index_respects_donor_langs(pattern_index):
    hits = pattern_index.match_all("Karwoch", "Karwoche", "FR")
    assert hits == []
    assert [p.id for p in pattern_index.match_all("Karwoch", "Karwoche", "DE")] == ["-e"]


# --- properties -------------------------------------------------------------

letters = st.text(alphabet="abcdeiklnoqrstuéèäü", min_size=1, max_size=10)


@settings(max_examples=300, deadline=None)
@given(lu=letters, donor=letters)
def test_index_equals_brute_force(registry, pattern_index, lu, donor):
    brute = [p for p in registry if matches(p, lu, donor)]
    assert pattern_index.match_all(lu, donor) == brute


@settings(max_examples=300, deadline=None)
@given(stem=letters)
def test_donor_candidates_match(registry, stem):
    for p in registry:
        for lu in (stem, stem + "oun", stem + "éieren", "E" + stem, stem + "kioun"):
            for cand in donor_candidates(p, lu):
                assert matches(p, lu, cand), (p.id, lu, cand)


@settings(max_examples=200, deadline=None)
@given(lu=letters, donor=letters)
def test_matching_is_case_insensitive_for_lowercase_patterns(registry, lu, donor):
    for p in registry:
        if p.edits and any(e.case_sensitive for e in p.edits):
            continue
        assert matches(p, lu, donor) == matches(p, lu.upper(), donor.capitalize())


def test_fold_is_nfc_casefold():
    assert fold("ÉCLAT") == fold("Éclat") == "éclat"


def test_empty_index_lookups():
    idx = compile_index([])
    assert idx.lookup("abc") == []
    assert len(idx) == 0
