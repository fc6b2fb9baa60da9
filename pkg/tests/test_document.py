from fractions import Fraction as F
from pathlib import Path

import pytest

from desir.document import ParseError, emit_document, parse_document
from desir.errors import InputError, ModelError

DATA = Path(__file__).parent / "data"
COIN_TEXT = (DATA / "coin.txt").read_text()


def test_coin_document_parses():
    doc = parse_document(COIN_TEXT)
    assert doc.space.omega == ("h", "t")
    assert doc.space.worst == "z"
    assert doc.gambles["f"].values == ((F(-1),), (F(1),))
    assert [v.mass for v in doc.credals["uniform"].vertices] == [(F(1, 2), F(1, 2))]
    assert doc.desirsets["R2"].kind == "augmented"
    assert doc.desirsets["R1"].kind == "strict"
    assert doc.relations["vacuousRel"].pairs == ()
    assert not doc.relations["vacuousRel"].bare
    assert doc.events["H"].cells == ((0, 0),)


def test_coin_round_trips_byte_identically():
    assert emit_document(parse_document(COIN_TEXT)) == COIN_TEXT


def test_parse_emit_is_fixed_point():
    text = COIN_TEXT.replace("1/2", "2/4")  # non-canonical spellings survive
    once = emit_document(parse_document(text))
    assert emit_document(parse_document(once)) == once


def test_float_rejected_with_position():
    bad = COIN_TEXT.replace("-1\n1\nend\n\ngamble fneg", "-0.5\n1\nend\n\ngamble fneg")
    with pytest.raises(ParseError) as err:
        parse_document(bad)
    assert "float" in str(err.value)
    assert "line" in str(err.value)


def test_empty_gamble_table_rejected():
    bad = "space\nomega h t\nprizes x\nend\n\ngamble f\nend\n"
    with pytest.raises(ParseError) as err:
        parse_document(bad)
    assert "2 row(s)" in str(err.value)


def test_dangling_reference():
    bad = "space\nomega h t\nprizes x\nend\n\ndesirset D strict nosuch\n"
    with pytest.raises(InputError):
        parse_document(bad)


def test_duplicate_name_rejected():
    bad = (
        "space\nomega h\nprizes x\nend\n\n"
        "gamble f\n1\nend\n\ngamble f\n2\nend\n"
    )
    with pytest.raises(ParseError):
        parse_document(bad)


def test_incoherent_desirset_is_model_error():
    bad = (
        "space\nomega h t\nprizes x\nend\n\n"
        "gamble a\n1\n-1\nend\n\ngamble b\n-1\n1\nend\n\n"
        "desirset D fg a b\n"
    )
    with pytest.raises(ModelError):
        parse_document(bad)


def test_missing_end_reported():
    bad = "space\nomega h\nprizes x\n"
    with pytest.raises(ParseError) as err:
        parse_document(bad)
    assert "end" in str(err.value)


def test_factor_blocks_parse():
    text = (
        "space\nomega h t\nprizes x0 x1\nend\n\n"
        "gamble go on omega\n1\n-1\nend\n\n"
        "gamble gx on prizes\n2 -1\nend\n\n"
        "credal MO on omega\nconstraint 1 -1\nend\n"
    )
    doc = parse_document(text)
    assert doc.gambles["go"].space.prizes == ("_",)
    assert doc.gambles["gx"].space.omega == ("_",)
    assert doc.credals["MO"].space.prizes == ("_",)
    assert emit_document(parse_document(emit_document(doc))) == emit_document(doc)
