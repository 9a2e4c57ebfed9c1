import pytest

from termbeat.source import EDITABLE_MARKER, SourceError, find_marker_line
from termbeat.tokens import TokenKind, tokenize


def kinds_and_texts(text):
    return [(t.kind, t.text) for t in tokenize(text)]


def test_declaration_line_with_comment():
    toks = tokenize("qn = 200 ;  -- quarter note")
    assert [(t.kind, t.text) for t in toks] == [
        (TokenKind.IDENT, "qn"),
        (TokenKind.OP, "="),
        (TokenKind.INT, "200"),
        (TokenKind.OP, ";"),
    ]


def test_empty_input():
    assert tokenize("") == []


def test_unterminated_text_literal():
    with pytest.raises(SourceError) as exc:
        tokenize('"abc')
    d = exc.value.diagnostics[0]
    assert d.line == 1
    assert "unterminated" in d.message


def test_text_literal():
    toks = tokenize('"hello there"')
    assert toks[0].kind is TokenKind.TEXT
    assert toks[0].text == "hello there"


def test_multi_char_operators_are_single_tokens():
    ops = [t.text for t in tokenize("a =:= b ++ c == d /= e <= f >= g -> h") if t.kind is TokenKind.OP]
    assert ops == ["=:=", "++", "==", "/=", "<=", ">=", "->"]


def test_ellipsis_is_one_token():
    toks = tokenize("...")
    assert [(t.kind, t.text) for t in toks] == [(TokenKind.OP, "...")]


def test_glued_operator_splits_from_digits():
    assert kinds_and_texts("2*qn") == [
        (TokenKind.INT, "2"),
        (TokenKind.OP, "*"),
        (TokenKind.IDENT, "qn"),
    ]


def test_identifier_shapes():
    toks = tokenize("x x' _eq foldr mergeWait")
    assert all(t.kind is TokenKind.IDENT for t in toks)
    assert [t.text for t in toks] == ["x", "x'", "_eq", "foldr", "mergeWait"]


def test_constructor_names():
    toks = tokenize("Wait Event On True")
    assert all(t.kind is TokenKind.CONID for t in toks)


def test_keywords():
    toks = tokenize("module Melody where import Prelude ;")
    assert toks[0].kind is TokenKind.KW_MODULE
    assert toks[2].kind is TokenKind.KW_WHERE
    assert toks[3].kind is TokenKind.KW_IMPORT


def test_positions_are_one_based_and_end_inclusive():
    toks = tokenize("ab cd\n ef")
    assert (toks[0].line, toks[0].col, toks[0].end_col) == (1, 1, 2)
    assert (toks[1].line, toks[1].col) == (1, 4)
    assert (toks[2].line, toks[2].col) == (2, 2)


def test_comment_swallows_rest_of_line():
    toks = tokenize("a -- b c d\ne")
    assert [t.text for t in toks] == ["a", "e"]


def test_bad_character_diagnostic():
    with pytest.raises(SourceError) as exc:
        tokenize("a ? b")
    d = exc.value.diagnostics[0]
    assert (d.line, d.col) == (1, 3)


def test_marker_line_is_detectable():
    text = f"module M where\n\n{EDITABLE_MARKER}\nmain = [] ;\n"
    assert find_marker_line(text) == 3
    # tokens themselves drop all comments
    assert all(t.text != EDITABLE_MARKER for t in tokenize(text))


def test_marker_detection_allows_surrounding_whitespace():
    assert find_marker_line(f"  {EDITABLE_MARKER}  \n") == 1
    assert find_marker_line("-- %% EDITABLE %%\n") is None
