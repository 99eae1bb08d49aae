from __future__ import annotations

import itertools
import logging

import pytest
from hypothesis import given, settings, strategies as st

from mcproof.arith import (
    Arithmetizer,
    AssignmentError,
    DegreeBoundError,
    InterpolationError,
    MatrixEvaluator,
    Operator,
    OpKind,
    UnivariatePoly,
    atom_eval,
    build_schedule,
    chain_eval,
    eq_eval,
    format_poly,
    interpolate,
    matrix_eval,
    op_apply,
    parse_poly,
    restrict_univariate,
)
from mcproof.field import ExtElement
from mcproof.fo import And, Equal, Not, Quantifier, Rel, Structure, Vocabulary, eval_matrix_bool, model_check
from mcproof.protocol import ProverStrategy, run_protocol

from .conftest import EXISTS_EDGE, TOTAL_EDGE, binary_relations, make_instance, matrices_over


coords5 = st.tuples(*[st.integers(0, 4)] * 4).map(ExtElement)


def test_eq_eval(ctx5, rng):
    assert eq_eval(ctx5.embed(2), ctx5.embed(2), ctx5) == ctx5.one
    assert eq_eval(ctx5.embed(1), ctx5.embed(3), ctx5) == ctx5.zero
    theta = ctx5.random_element(rng)
    assert eq_eval(theta, theta, ctx5) == ctx5.one


def test_atom_eval(ctx5, true_instance):
    e = ctx5.embed
    assert atom_eval(true_instance.structure, Rel("E", (1, 2)), {1: e(0), 2: e(1)}, ctx5) == ctx5.one
    assert atom_eval(true_instance.structure, Rel("E", (1, 2)), {1: e(1), 2: e(0)}, ctx5) == ctx5.zero
    assert atom_eval(true_instance.structure, Rel("E", (1, 1)), {1: e(0)}, ctx5) == ctx5.zero
    assert atom_eval(true_instance.structure, Rel("E", (1, 1)), {1: e(1)}, ctx5) == ctx5.zero
    empty = make_instance("vocab E/2\nuniverse 2\nformula: EX x . E(x,x)\n")
    assert atom_eval(empty.structure, Rel("E", (1, 1)), {1: e(0)}, ctx5) == ctx5.zero


def test_atom_eval_needs_assigned_variables(ctx5, true_instance):
    with pytest.raises(AssignmentError):
        atom_eval(true_instance.structure, Equal(1, 2), {1: ctx5.one}, ctx5)


def test_matrix_eval(ctx5, true_instance, rng):
    e = ctx5.embed
    both = And(Rel("E", (1, 2)), Not(Equal(1, 2)))
    assert matrix_eval(true_instance.structure, both, {1: e(0), 2: e(1)}, ctx5) == ctx5.one
    asg = {1: ctx5.random_element(rng), 2: ctx5.random_element(rng)}
    v = matrix_eval(true_instance.structure, Rel("E", (1, 2)), asg, ctx5)
    assert matrix_eval(true_instance.structure, Not(Rel("E", (1, 2))), asg, ctx5) == ctx5.sub(ctx5.one, v)


def test_matrix_eval_agrees_with_truth_on_universe(ctx5, worked):
    m = worked.formula.matrix
    arith = Arithmetizer(worked, ctx5)
    for a, b in itertools.product(range(2), repeat=2):
        expected = ctx5.one if (a, b) in {(0, 1)} or a == b else ctx5.zero
        assert arith.matrix_eval(m, (ctx5.embed(a), ctx5.embed(b))) == expected


@pytest.mark.parametrize(
    "prefix, expected",
    [
        ((Quantifier.EXISTS,), "E1 R1"),
        ((Quantifier.EXISTS, Quantifier.FORALL), "E1 R1 A2 R1 R2"),
        ((Quantifier.FORALL, Quantifier.FORALL, Quantifier.EXISTS), "A1 R1 A2 R1 R2 E3 R1 R2 R3"),
        ((), ""),
    ],
)
def test_build_schedule(prefix, expected):
    schedule = build_schedule(len(prefix), prefix)
    assert str(schedule) == expected
    assert len(schedule) == (len(prefix) ** 2 + 3 * len(prefix)) // 2


def test_schedule_free_variables():
    schedule = build_schedule(2, (Quantifier.EXISTS, Quantifier.FORALL))
    assert [schedule.free_variables(t) for t in range(6)] == [(), (1,), (1,), (1, 2), (1, 2), (1, 2)]
    assert Operator.parse("R2") == Operator(OpKind.REDUCE, 2)
    with pytest.raises(ValueError):
        Operator.parse("Q1")


@pytest.mark.parametrize("text, truth", [(EXISTS_EDGE, True), (TOTAL_EDGE, False)])
def test_chain_eval_at_zero_is_truth(ctx5, text, truth):
    inst = make_instance(text)
    schedule = build_schedule(inst.k, inst.formula.quantifiers)
    assert model_check(inst) is truth
    expected = ctx5.one if truth else ctx5.zero
    assert chain_eval(inst, ctx5, schedule, 0, {}) == expected
    assert chain_eval(inst, ctx5, schedule, 0, {}, memoize=False) == expected


def test_chain_eval_at_end_is_matrix(ctx5, worked, rng):
    schedule = build_schedule(2, worked.formula.quantifiers)
    asg = {1: ctx5.random_element(rng), 2: ctx5.random_element(rng)}
    assert chain_eval(worked, ctx5, schedule, len(schedule), asg) == matrix_eval(worked.structure, worked.formula.matrix, asg, ctx5)


def test_memo_agrees_with_uncached_path(ctx5, worked, rng):
    schedule = build_schedule(2, worked.formula.quantifiers)
    cached = Arithmetizer(worked, ctx5, schedule)
    plain = Arithmetizer(worked, ctx5, schedule, memoize=False)
    for t in range(len(schedule) + 1):
        asg = {v: ctx5.random_element(rng) for v in schedule.free_variables(t)}
        assert cached.chain_eval(t, asg) == plain.chain_eval(t, asg)
    assert cached.cache_info().currsize > 0


def test_reduce_identity_on_universe(ctx5, worked):
    schedule = build_schedule(2, worked.formula.quantifiers)
    arith = Arithmetizer(worked, ctx5, schedule)
    for t, op in enumerate(schedule):
        if op.kind is not OpKind.REDUCE:
            continue
        free = schedule.free_variables(t)
        for point in itertools.product(range(2), repeat=len(free)):
            asg = {v: ctx5.embed(a) for v, a in zip(free, point)}
            assert arith.chain_eval(t, asg) == arith.chain_eval(t + 1, asg)


def test_chain_eval_rejects_wrong_variables(ctx5, worked):
    schedule = build_schedule(2, worked.formula.quantifiers)
    with pytest.raises(AssignmentError):
        chain_eval(worked, ctx5, schedule, 1, {})
    with pytest.raises(AssignmentError):
        chain_eval(worked, ctx5, schedule, 0, {1: ctx5.one})
    with pytest.raises(AssignmentError):
        chain_eval(worked, ctx5, schedule, 9, {})


def test_interpolate_examples(ctx5):
    e = ctx5.embed
    constant = interpolate([(e(0), e(1)), (e(1), e(1))], ctx5)
    assert constant.coeffs == (ctx5.one,)
    identity = interpolate([(e(0), e(0)), (e(1), e(1)), (e(2), e(2))], ctx5)
    assert identity.coeffs == (ctx5.zero, ctx5.one)
    with pytest.raises(InterpolationError):
        interpolate([(e(0), e(1)), (e(0), e(2))], ctx5)


@settings(max_examples=60, deadline=None)
@given(coeffs=st.lists(coords5, min_size=1, max_size=8))
def test_interpolation_recovers_polynomial(ctx5, coeffs):
    poly = UnivariatePoly(1, tuple(coeffs))
    xs = list(ctx5.elements(len(coeffs)))
    back = interpolate(((x, poly.evaluate(x, ctx5)) for x in xs), ctx5, variable=1)
    assert back == poly


def test_poly_text_form(ctx5):
    zero = UnivariatePoly(1, ())
    assert format_poly(zero) == "var=1; deg=0; coeffs=0,0,0,0"
    assert parse_poly(format_poly(zero), ctx5) == zero
    p = UnivariatePoly(2, (ctx5.one, ctx5.embed(3)))
    assert format_poly(p) == "var=2; deg=1; coeffs=1,0,0,0|3,0,0,0"
    assert parse_poly(format_poly(p), ctx5) == p


def test_op_apply_examples(ctx5, rng):
    ones = UnivariatePoly.constant(1, ctx5.one)
    zeros = UnivariatePoly(1, ())
    assert op_apply(Operator(OpKind.FORALL, 1), ones, None, ctx5, 2) == ctx5.one
    assert op_apply(Operator(OpKind.EXISTS, 1), zeros, None, ctx5, 2) == ctx5.zero
    s = UnivariatePoly(1, tuple(ctx5.random_element(rng) for _ in range(4)))
    reduce_ = Operator(OpKind.REDUCE, 1)
    assert op_apply(reduce_, s, ctx5.embed(1), ctx5, 3) == s.evaluate(ctx5.embed(1), ctx5)
    with pytest.raises(AssignmentError):
        op_apply(reduce_, s, None, ctx5, 3)


def test_restriction_is_consistent(ctx5, worked, rng):
    schedule = build_schedule(2, worked.formula.quantifiers)
    arith = Arithmetizer(worked, ctx5, schedule)
    asg: dict[int, ExtElement] = {}
    for t, op in enumerate(schedule, start=1):
        poly = restrict_univariate(worked, ctx5, schedule, t, asg, op.var)
        assert poly.degree <= ctx5.q**2
        assert poly.variable == op.var
        current = asg.get(op.var)
        assert arith.op_apply(op, poly, current) == arith.chain_eval(t - 1, asg)
        challenge = ctx5.random_element(rng)
        asg = {**asg, op.var: challenge}
        assert poly.evaluate(challenge, ctx5) == arith.chain_eval(t, asg)


def test_restriction_rejects_wrong_variable(ctx5, worked):
    schedule = build_schedule(2, worked.formula.quantifiers)
    with pytest.raises(AssignmentError):
        restrict_univariate(worked, ctx5, schedule, 1, {}, 2)


@settings(max_examples=80, deadline=None)
@given(data=st.data(), relation=binary_relations(), k=st.integers(1, 3))
def test_matrix_eval_on_universe_is_boolean(ctx5, data, relation, k):
    n, edges = relation
    matrix = data.draw(matrices_over(k))
    s = Structure.from_tuples(n, Vocabulary((("E", 2),)), {"E": edges})
    evaluator = MatrixEvaluator(s, ctx5)
    for point in itertools.product(range(n), repeat=k):
        value = evaluator.matrix_eval(matrix, tuple(ctx5.embed(a) for a in point))
        assert value in (ctx5.zero, ctx5.one)
        assert value == ctx5.embed(eval_matrix_bool(s, matrix, dict(enumerate(point, start=1))))


def test_restriction_matches_chain_at_random_points(ctx5, worked, rng):
    schedule = build_schedule(2, worked.formula.quantifiers)
    arith = Arithmetizer(worked, ctx5, schedule)
    for t, op in enumerate(schedule, start=1):
        fixed = {v: ctx5.random_element(rng) for v in schedule.free_variables(t) if v != op.var}
        poly = arith.restrict_univariate(t, fixed, op.var)
        for _ in range(20):
            x = ctx5.random_element(rng)
            assert poly.evaluate(x, ctx5) == arith.chain_eval(t, {**fixed, op.var: x})


@pytest.mark.parametrize("formula", ["EX x . x = x", "ALL x . ALL y . x = x", "ALL x . EX y . y = y"])
def test_tautology_messages_are_constant_one(formula):
    # sum of Eq(X, z) over all of GF(q) is identically 1, so the universe fills GF(5)
    inst = make_instance(f"vocab E/2\nuniverse 5\nformula: {formula}\n")
    tr = run_protocol(inst, ProverStrategy.HONEST, 0)
    assert tr.header.q == 5
    assert tr.accepted
    one = ExtElement((1, 0, 0, 0))
    assert all(r.msg == UnivariatePoly.constant(r.op.var, one) for r in tr.rounds)


def test_restriction_over_degree_bound_aborts(ctx2, worked, caplog):
    arith = Arithmetizer(worked, ctx2)
    # X1^(q^2 + 1) is one degree past what q^2 + 1 abscissae determine
    arith._value = lambda t, key: ctx2.pow(key[0], ctx2.q**2 + 1)
    with caplog.at_level(logging.ERROR, logger="mcproof.arith"), pytest.raises(DegreeBoundError):
        arith.restrict_univariate(1, {}, 1)
    assert "Stage:degree_bound" in caplog.text


def test_restriction_vanishing_at_first_extra_abscissa_aborts(ctx2, worked):
    arith = Arithmetizer(worked, ctx2)
    roots = list(ctx2.elements(ctx2.q**2 + 2))
    # zero on the interpolation points and on the first extra abscissa, nonzero on the second
    arith._value = lambda t, key: ctx2.prod(ctx2.sub(key[0], r) for r in roots)
    with pytest.raises(DegreeBoundError):
        arith.restrict_univariate(1, {}, 1)
