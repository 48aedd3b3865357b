import pytest

from qdiff.errors import DegreeMismatch, ParseError
from qdiff.ring import ONE, Q
from qdiff.tensor import (
    TensorElement,
    concat,
    misordering_index,
    order_compare,
    parse_tensor,
    parse_word,
)

X1, X2 = TensorElement.word(1), TensorElement.word(2)


def test_concat_examples():
    assert concat(X1, X2) == TensorElement.word(1, 2)
    assert concat(X1 + X2, X1) == TensorElement.word(1, 1) + TensorElement.word(2, 1)
    assert concat(X1.scale(Q), X1.scale(Q ** -1)) == TensorElement.word(1, 1)


def test_concat_with_unit():
    assert concat(TensorElement.one(), X2) == X2


def test_order_compare_examples():
    assert order_compare((1, 1), (1, 2)) == "less"
    assert order_compare((2, 1), (1, 2)) == "greater"
    assert order_compare((2, 1), (2, 1)) == "equal"


def test_order_compare_incomparable_and_mismatch():
    assert order_compare((1, 3, 2), (2, 1, 3)) == "incomparable"
    with pytest.raises(DegreeMismatch):
        order_compare((1,), (1, 2))


def test_misordering_index():
    assert misordering_index((3, 2, 1)) == 3
    assert misordering_index((1, 2, 2)) == 0


def test_zero_coefficients_are_dropped():
    t = X1 - X1
    assert not t and t.terms == {}


def test_graded_component_and_degrees():
    t = X1 + TensorElement.word(1, 2) + TensorElement.one()
    assert t.degrees() == [0, 1, 2]
    assert t.graded_component(2) == TensorElement.word(1, 2)


@pytest.mark.parametrize(
    "text",
    ["1q^0 * X1.X4 + -1q^1+1q^-1 * X2.X3", "X2.X1", "1/2q^0 * X1.X2 + 1/2q^-1 * X2.X1", "1q^0 * 1", "0"],
)
def test_text_round_trip(text):
    t = parse_tensor(text, 4)
    assert parse_tensor(str(t), 4) == t


def test_parse_shorthand():
    assert parse_tensor("X2.X1 - X1.X2") == TensorElement.word(2, 1) - TensorElement.word(1, 2)
    assert parse_tensor("1") == TensorElement.one()
    assert parse_word("X3.X1") == (3, 1)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as info:
        parse_tensor("X1.X5", 4)
    assert (info.value.line, info.value.column) == (1, 6)
    with pytest.raises(ParseError):
        parse_tensor("X1 X2")


def test_display_order_is_canonical():
    t = TensorElement.word(2, 1) + TensorElement.word(1) + TensorElement.word(1, 2).scale(ONE / 2)
    assert str(t) == "1q^0 * X1 + 1/2q^0 * X1.X2 + 1q^0 * X2.X1"
