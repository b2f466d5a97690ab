import pytest
from hypothesis import given, settings, strategies as st

from src.core.services.permgroup import Perm, PermGroup, symmetric, trivial
from src.shared.exceptions import ParseError
from src.shared.utils.group_spec import format_group_spec, group_to_json, parse_group_spec


def test_parse_text_form():
    group = parse_group_spec("3; (1 2); (1 2 3)")
    assert group.degree == 3
    assert group.order() == 6


@pytest.mark.parametrize(
    "text, position",
    [
        ("3; (1 4)", 6),
        ("x; (1 2)", 0),
        ("3; (1 2", 7),
        ("3; (1 1)", 6),
        ("3;", 2),
    ],
)
def test_parse_error_positions(text, position):
    with pytest.raises(ParseError) as excinfo:
        parse_group_spec(text)
    assert excinfo.value.position == position


def test_out_of_range_message():
    with pytest.raises(ParseError) as excinfo:
        parse_group_spec("3; (1 4)")
    assert "out of range 1..3" in excinfo.value.message
    assert excinfo.value.to_response().error_code == "PARSE_ERROR"


def test_parse_json_form():
    group = parse_group_spec('{"degree": 3, "generators": [[[1, 2]], [[1, 2, 3]]]}')
    assert group.order() == 6
    assert parse_group_spec('{"degree": 2}').order() == 1


@pytest.mark.parametrize(
    "text",
    ['{"degree": 0}', '{"degree": 3, "extra": 1}', '{"generators": []}', "{bad", '{"degree": 3, "generators": [[[1, 4]]]}'],
)
def test_parse_json_rejects(text):
    with pytest.raises(ParseError):
        parse_group_spec(text)


def test_format_group_spec():
    assert format_group_spec(symmetric(3)) == "3; (1 2 3); (1 2)"
    assert format_group_spec(trivial(3)) == "3"
    assert group_to_json(symmetric(3)).generators == [[[1, 2, 3]], [[1, 2]]]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.permutations(range(n)), max_size=3)))
def test_format_then_parse(images):
    degree = len(images[0]) if images else 3
    group = PermGroup(degree, tuple(Perm(tuple(p)) for p in images))
    assert parse_group_spec(format_group_spec(group)).generators == group.generators
