"""
Property-based tests: the instrumented coverage, the BDD and the normalizer
must agree with plain evaluation on arbitrary decisions.
"""

from hypothesis import given, settings, strategies as st

from src.core.bdd import T0, T1, Edge, Terminal, path
from src.core.expr import compile_expr, evaluate, evaluate_expr, normalize, outcomes_from_assignment, parse, render
from src.core.oracle import flip_covered, random_expr
from src.core.runtime import execute, merge
from src.engine.decision import setup_decision

MAX_CONDITIONS = 8


@st.composite
def decision_texts(draw, max_conditions=MAX_CONDITIONS):
    n = draw(st.integers(min_value=1, max_value=max_conditions))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_expr(seed, n)


@st.composite
def decisions_with_vectors(draw, count=1):
    decision = setup_decision(draw(decision_texts()))
    vector = st.lists(st.booleans(), min_size=decision.n, max_size=decision.n).map(tuple)
    return decision, draw(st.lists(vector, min_size=count, max_size=max(count, 6)))


def swap(target):
    if isinstance(target, Terminal):
        return T1 if target is T0 else T0
    return target


class TestSemantics:
    @settings(max_examples=200, deadline=None)
    @given(decisions_with_vectors())
    def test_path_terminal_matches_evaluation(self, case):
        decision, vectors = case
        for v in vectors:
            assert (path(decision.bdd, v).terminal is T1) == evaluate(decision.expr, v)

    @settings(max_examples=200, deadline=None)
    @given(decision_texts(), st.data())
    def test_normalization_preserves_meaning(self, text, data):
        tree = parse(text)
        ie = normalize(tree)
        assignment = {label: data.draw(st.booleans()) for label in ie.labels}
        assert evaluate(ie, outcomes_from_assignment(ie, assignment)) == evaluate_expr(tree, assignment)

    @settings(max_examples=200, deadline=None)
    @given(decision_texts())
    def test_normalization_is_idempotent(self, text):
        ie = compile_expr(text)
        assert compile_expr(render(ie)) == ie

    @settings(max_examples=300, deadline=None)
    @given(decisions_with_vectors())
    def test_instrumented_coverage_matches_flip_oracle(self, case):
        decision, vectors = case
        for v in vectors:
            assert execute(decision.bdd, decision.table, v).covered() == flip_covered(decision.expr, decision.bdd, v)


class TestStructure:
    @settings(max_examples=150, deadline=None)
    @given(decision_texts())
    def test_negating_the_decision_mirrors_the_bdd(self, text):
        """Negating the whole decision swaps branches and terminals at every vertex."""
        plain = setup_decision(text)
        negated = setup_decision(f"!({text})")
        assert negated.n == plain.n
        for i in plain.bdd.vertices:
            assert negated.bdd.is_negated(i) != plain.bdd.is_negated(i)
            assert negated.bdd.then_succ[i - 1] == swap(plain.bdd.else_succ[i - 1])
            assert negated.bdd.else_succ[i - 1] == swap(plain.bdd.then_succ[i - 1])
        mirrored = {
            Edge(e.source, not e.outcome, swap(e.target)): mask for e, mask in plain.table.entries.items()
        }
        assert negated.table.entries == mirrored

    @settings(max_examples=150, deadline=None)
    @given(decision_texts())
    def test_masks_stay_below_their_edge(self, text):
        table = setup_decision(text).table
        for edge, mask in table.entries.items():
            assert mask >> (edge.source - 1) == 0


class TestAccumulation:
    @settings(max_examples=150, deadline=None)
    @given(decisions_with_vectors(count=2), st.integers(min_value=0, max_value=6))
    def test_merge_matches_single_pass(self, case, cut):
        decision, vectors = case
        whole = decision.run(vectors)
        split = merge(decision.run(vectors[:cut]), decision.run(vectors[cut:]))
        assert split.same_coverage(whole)

    @settings(max_examples=150, deadline=None)
    @given(decisions_with_vectors())
    def test_mcdc_implies_condition_coverage(self, case):
        decision, vectors = case
        result = decision.report(decision.run(vectors))
        for row in result.conditions:
            assert not row.covered_true or row.evaluated_true
            assert not row.covered_false or row.evaluated_false
        assert result.mcdc_covered <= result.edges_covered
