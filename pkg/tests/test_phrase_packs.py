import pytest

from core.errors import ConfigError, SourceReadError
from data.phrase_packs import GENERIC_PACK, GPT_STYLE_PACK, load_phrase_pack, parse_phrase_pack


def test_headers_and_comments():
    pack = parse_phrase_pack("# name: house\n# version: 2.1\n# a comment\n\n\\bfoo\\b\nbar baz\n")
    assert pack.name == "house"
    assert pack.version == "2.1"
    assert pack.patterns == ("\\bfoo\\b", "bar baz")
    assert len(pack) == 2


def test_defaults_without_headers():
    pack = parse_phrase_pack("alpha\n", default_name="custom")
    assert (pack.name, pack.version) == ("custom", "unversioned")


def test_matches_are_case_insensitive_and_ordered_by_position():
    pack = parse_phrase_pack("zeta\nalpha\n")
    found = pack.matches("ALPHA comes before Zeta")
    assert [m.text for m in found] == ["ALPHA", "Zeta"]
    assert [m.position for m in found] == [0, 19]
    assert pack.first_match("nothing here") is None


def test_invalid_pattern_is_a_config_error():
    with pytest.raises(ConfigError, match="line 2"):
        parse_phrase_pack("fine\n(unclosed\n")


def test_missing_pack_file(tmp_path):
    with pytest.raises(SourceReadError):
        load_phrase_pack(tmp_path / "absent.txt")


def test_custom_pack_file(tmp_path):
    path = tmp_path / "team.txt"
    path.write_text("# version: 0.3\nsynergy\n", encoding="utf-8")
    pack = load_phrase_pack(path)
    assert (pack.name, pack.version, pack.patterns) == ("team", "0.3", ("synergy",))


@pytest.mark.parametrize("path", [GPT_STYLE_PACK, GENERIC_PACK])
def test_shipped_packs_load(path):
    pack = load_phrase_pack(path)
    assert pack.version == "1.0.0"
    assert len(pack) >= 10
