import pytest

from src.core.errors import EmptyInputError, ExprSyntaxError, LengthMismatchError, TooManyConditionsError
from src.core.expr import (
    Condition,
    Conjunction,
    Disjunction,
    Literal,
    Negation,
    compile_expr,
    evaluate,
    normalize,
    parse,
    reachable_values,
    render,
    to_expr,
    vector_from_int,
    vector_to_int,
)
from conftest import vec


# ---------- parse ----------
def test_precedence_and_binds_tighter_than_or():
    assert parse("a && b || c") == Disjunction((Conjunction((Condition("a"), Condition("b"))), Condition("c")))


def test_negated_group():
    assert parse("!(a || b)") == Negation(Disjunction((Condition("a"), Condition("b"))))


def test_same_operator_chain_flattens():
    assert parse("a && b && c") == Conjunction((Condition("a"), Condition("b"), Condition("c")))
    assert parse("a || b || c || d").children == tuple(Condition(x) for x in "abcd")


def test_children_keep_source_order():
    e = parse("z || y && x || w")
    assert [type(c).__name__ for c in e.children] == ["Condition", "Conjunction", "Condition"]
    assert e.children[0] == Condition("z")
    assert e.children[2] == Condition("w")


def test_whitespace_is_insignificant():
    assert parse("(a||b)&&c") == parse("  ( a ||  b )\n&&\tc ")


def test_incomplete_production_reports_end_of_input():
    with pytest.raises(ExprSyntaxError) as info:
        parse("a &&")
    assert info.value.position == 4
    assert "end of input" in str(info.value)


@pytest.mark.parametrize("text, position", [
    ("a & b", 2),
    ("a | b", 2),
    ("(a || b", 7),
    ("a b", 2),
    ("a && )", 5),
    ("1 && a", 0),
    ("a && é", 5),
])
def test_syntax_errors_carry_position(text, position):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text)
    assert info.value.position == position


@pytest.mark.parametrize("text", ["true", "a && FALSE", "!True || b"])
def test_constants_are_rejected(text):
    with pytest.raises(ExprSyntaxError, match="constant"):
        parse(text)


@pytest.mark.parametrize("text", ["", "   ", "\n\t"])
def test_empty_input(text):
    with pytest.raises(EmptyInputError):
        parse(text)


def test_identifiers_allow_underscores_and_digits():
    assert parse("_flag && x_2") == Conjunction((Condition("_flag"), Condition("x_2")))


# ---------- normalize ----------
def test_de_morgan_pushes_negation_to_leaves():
    ie = normalize(parse("!(a || b)"))
    assert ie.root == Conjunction((Literal("a", 1, True), Literal("b", 2, True)))
    assert ie.n == 2


def test_nothing_to_push():
    ie = normalize(parse("a && b"))
    assert ie.root == Conjunction((Literal("a", 1), Literal("b", 2)))


def test_double_negation():
    ie = normalize(parse("!!a"))
    assert ie.root == Literal("a", 1, False)


def test_push_down_flattens_same_operator_nesting():
    ie = normalize(parse("a && !(b || c)"))
    assert ie.root == Conjunction((Literal("a", 1), Literal("b", 2, True), Literal("c", 3, True)))


def test_repeated_labels_are_distinct_conditions():
    ie = compile_expr("a && b || a")
    assert ie.n == 3
    assert ie.labels == ("a", "b", "a")
    assert [lit.index for lit in ie.literals] == [1, 2, 3]


def test_condition_limit():
    chain = " && ".join(f"c{i}" for i in range(1, 65))
    assert compile_expr(chain).n == 64
    with pytest.raises(TooManyConditionsError) as info:
        compile_expr(chain + " && c65")
    assert info.value.count == 65


def test_render_round_trips():
    for text in ["(a || b) && (c || d) && e", "!a || b && !c", "a"]:
        ie = compile_expr(text)
        assert compile_expr(render(ie)) == ie


def test_to_expr_then_normalize_is_identity():
    ie = compile_expr("!(a && (b || !c)) || d")
    assert normalize(to_expr(ie)) == ie


# ---------- evaluate ----------
def test_evaluate_running_example():
    ie = compile_expr("(a || b) && (c || d) && e")
    assert evaluate(ie, vec("01001")) is False
    assert evaluate(ie, vec("01101")) is True


def test_evaluate_or_truth_table():
    ie = compile_expr("a || b")
    assert [evaluate(ie, vec(v)) for v in ("00", "01", "10", "11")] == [False, True, True, True]


def test_evaluate_uses_outcomes_not_raw_values():
    ie = compile_expr("!a")
    assert evaluate(ie, (False,)) is False
    assert evaluate(ie, (True,)) is True


def test_evaluate_length_mismatch():
    with pytest.raises(LengthMismatchError):
        evaluate(compile_expr("a && b"), vec("1"))


def test_vector_int_conversion_puts_condition_one_first():
    assert vector_from_int(0b100, 3) == (True, False, False)
    assert vector_to_int(vec("011")) == 3


def test_reachable_values_leave_unpinned_conditions_free():
    ie = compile_expr("a && (b || c)")
    assert reachable_values(ie, {1: True}) == {False, True}
    assert reachable_values(ie, {1: False}) == {False}
    assert reachable_values(ie, {1: True, 2: False, 3: False}) == {False}
    assert reachable_values(ie, {}) == {False, True}
