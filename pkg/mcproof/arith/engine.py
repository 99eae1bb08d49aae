from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from ..config import settings
from ..field import ExtContext, ExtElement
from ..fo import And, Const, Equal, Instance, Matrix, Not, Or, Quantifier, Rel, Structure
from .poly import UnivariatePoly, interpolate


log = logging.getLogger("mcproof.arith")

# values of variables 1..m, in order
PartialAssignment = Mapping[int, ExtElement]


class AssignmentError(ValueError):
    pass


class DegreeBoundError(RuntimeError):
    pass


class OpKind(str, Enum):
    EXISTS = "E"
    FORALL = "A"
    REDUCE = "R"


@dataclass(frozen=True)
class Operator:
    kind: OpKind
    var: int

    @property
    def is_quantifier(self) -> bool:
        return self.kind is not OpKind.REDUCE

    def __str__(self) -> str:
        return f"{self.kind.value}{self.var}"

    @classmethod
    def parse(cls, text: str) -> Operator:
        try:
            return cls(OpKind(text[0]), int(text[1:]))
        except (IndexError, ValueError):
            raise ValueError(f"malformed operator tag {text!r}") from None


@dataclass(frozen=True)
class OperatorSchedule:
    ops: tuple[Operator, ...]

    def __len__(self) -> int:
        return len(self.ops)

    def __getitem__(self, index: int) -> Operator:
        return self.ops[index]

    def __iter__(self):
        return iter(self.ops)

    def free_count(self, t: int) -> int:
        """P_t is a polynomial in X_1..X_m, m = quantifier operators among the first t."""
        return sum(1 for op in self.ops[:t] if op.is_quantifier)

    def free_variables(self, t: int) -> tuple[int, ...]:
        return tuple(range(1, self.free_count(t) + 1))

    def __str__(self) -> str:
        return " ".join(str(op) for op in self.ops)


def build_schedule(k: int, prefix: Sequence[Quantifier]) -> OperatorSchedule:
    """Q1 X1, R X1, Q2 X2, R X1, R X2, ...: (k^2 + 3k) / 2 operators."""
    if len(prefix) != k:
        raise ValueError(f"prefix has {len(prefix)} quantifiers, expected {k}")
    ops: list[Operator] = []
    for i, quantifier in enumerate(prefix, start=1):
        ops.append(Operator(OpKind.EXISTS if quantifier is Quantifier.EXISTS else OpKind.FORALL, i))
        ops.extend(Operator(OpKind.REDUCE, j) for j in range(1, i + 1))
    return OperatorSchedule(tuple(ops))


def eq_eval(x: ExtElement, y: ExtElement, ctx: ExtContext) -> ExtElement:
    """Eq(X, Y) = 1 - (X - Y)^(q-1)."""
    return ctx.sub(ctx.one, ctx.pow(ctx.sub(x, y), ctx.q - 1))


def _combine(kind: OpKind, values: Sequence[ExtElement], ctx: ExtContext, weight: Callable[[int], ExtElement]) -> ExtElement:
    if kind is OpKind.FORALL:
        return ctx.prod(values)
    if kind is OpKind.EXISTS:
        return ctx.sub(ctx.one, ctx.prod(ctx.sub(ctx.one, v) for v in values))
    return ctx.sum(ctx.mul(weight(z), v) for z, v in enumerate(values))


def op_apply(
    op: Operator,
    poly: UnivariatePoly,
    current: ExtElement | None,
    ctx: ExtContext,
    universe_size: int,
) -> ExtElement:
    """Q X S for the round's operator; a Reduce is evaluated at the variable's current value."""
    if op.kind is OpKind.REDUCE and current is None:
        raise AssignmentError(f"{op} needs the current value of X{op.var}")
    values = [poly.evaluate(ctx.embed(z), ctx) for z in range(universe_size)]
    return _combine(op.kind, values, ctx, lambda z: eq_eval(current, ctx.embed(z), ctx))


class MatrixEvaluator:
    """Arithmetized atoms and matrices over one structure: the polynomial P_T at a point."""

    def __init__(self, structure: Structure, ctx: ExtContext) -> None:
        self.structure = structure
        self.ctx = ctx
        self.universe = tuple(ctx.embed(a) for a in range(structure.universe_size))
        self._patterns: dict[Rel, tuple[tuple[tuple[int, int], ...], ...]] = {}
        self._eq = lru_cache(maxsize=4096)(self._eq_uncached)

    def _eq_uncached(self, x: ExtElement, y: ExtElement) -> ExtElement:
        return eq_eval(x, y, self.ctx)

    def _pattern(self, atom: Rel) -> tuple[tuple[tuple[int, int], ...], ...]:
        # tuples consistent with the atom's repeated variables, as (var, entry) per distinct variable
        cached = self._patterns.get(atom)
        if cached is not None:
            return cached
        order: list[int] = []
        for v in atom.args:
            if v not in order:
                order.append(v)
        rows = []
        for tup in self.structure.tuples(atom.symbol):
            picked: dict[int, int] = {}
            if all(picked.setdefault(v, e) == e for v, e in zip(atom.args, tup)):
                rows.append(tuple((v, picked[v]) for v in order))
        self._patterns[atom] = tuple(rows)
        return self._patterns[atom]

    def atom_eval(self, atom: Matrix, asg: Sequence[ExtElement | None]) -> ExtElement:
        ctx = self.ctx
        if isinstance(atom, Equal):
            return self._eq(_get(asg, atom.left), _get(asg, atom.right))
        if isinstance(atom, Const):
            return ctx.one if atom.value else ctx.zero
        if isinstance(atom, Rel):
            total = ctx.zero
            for row in self._pattern(atom):
                term = ctx.one
                for v, entry in row:
                    term = ctx.mul(term, self._eq(_get(asg, v), self.universe[entry]))
                    if term.is_zero():
                        break
                total = ctx.add(total, term)
            return total
        raise TypeError(f"not an atom: {atom!r}")

    def matrix_eval(self, m: Matrix, asg: Sequence[ExtElement | None]) -> ExtElement:
        ctx = self.ctx
        if isinstance(m, Not):
            return ctx.sub(ctx.one, self.matrix_eval(m.body, asg))
        if isinstance(m, And):
            left = self.matrix_eval(m.left, asg)
            return left if left.is_zero() else ctx.mul(left, self.matrix_eval(m.right, asg))
        if isinstance(m, Or):
            a = self.matrix_eval(m.left, asg)
            b = self.matrix_eval(m.right, asg)
            return ctx.sub(ctx.add(a, b), ctx.mul(a, b))
        return self.atom_eval(m, asg)


class Arithmetizer(MatrixEvaluator):
    """Point evaluation of the polynomial tower P_0 .. P_T of one instance.

    P_T is the matrix polynomial and P_{t} = schedule[t] P_{t+1}. With memoize=True
    values are cached per (t, values of X_1..X_m); the uncached path is the reference.
    """

    def __init__(
        self,
        inst: Instance,
        ctx: ExtContext,
        schedule: OperatorSchedule | None = None,
        memoize: bool = True,
        cache_size: int | None = None,
    ) -> None:
        super().__init__(inst.structure, ctx)
        self.inst = inst
        self.schedule = schedule or build_schedule(inst.k, inst.formula.quantifiers)
        if self.schedule.free_count(len(self.schedule)) != inst.k:
            raise ValueError(f"schedule {self.schedule} does not bind all {inst.k} variables")
        if memoize:
            self._value = lru_cache(maxsize=cache_size or settings.chain_cache_size)(self._compute)
        else:
            self._value = self._compute

    @property
    def rounds(self) -> int:
        return len(self.schedule)

    def _compute(self, t: int, key: tuple[ExtElement, ...]) -> ExtElement:
        if t == len(self.schedule):
            return self.matrix_eval(self.inst.formula.matrix, key)
        op = self.schedule[t]
        if op.is_quantifier:
            values = [self._value(t + 1, key + (z,)) for z in self.universe]
        else:
            i = op.var - 1
            values = [self._value(t + 1, key[:i] + (z,) + key[i + 1:]) for z in self.universe]
        return _combine(op.kind, values, self.ctx, lambda z: self._eq(key[op.var - 1], self.universe[z]))

    def _key(self, t: int, asg: PartialAssignment) -> tuple[ExtElement, ...]:
        if not 0 <= t <= len(self.schedule):
            raise AssignmentError(f"position {t} outside [0, {len(self.schedule)}]")
        free = self.schedule.free_variables(t)
        if set(asg) != set(free):
            raise AssignmentError(f"P_{t} is a polynomial in {list(free)}, got values for {sorted(asg)}")
        return tuple(self.ctx.check(asg[v]) for v in free)

    def chain_eval(self, t: int, asg: PartialAssignment) -> ExtElement:
        return self._value(t, self._key(t, asg))

    def restrict_univariate(self, t: int, asg: PartialAssignment, var: int) -> UnivariatePoly:
        """P_t(a_1, .., X_var, ..) by interpolation through the first q^2 + 1 enumerated abscissae.

        Raises DegreeBoundError when the restriction disagrees with the interpolant at
        either of the next two abscissae; the degree bound is checked, not proven.
        """
        if not 1 <= t <= len(self.schedule):
            raise AssignmentError(f"round {t} outside [1, {len(self.schedule)}]")
        if self.schedule[t - 1].var != var:
            raise AssignmentError(f"round {t} operates on X{self.schedule[t - 1].var}, not X{var}")
        ctx = self.ctx
        bound = ctx.q**2
        base = dict(asg)
        base.pop(var, None)
        free = self.schedule.free_variables(t)
        if set(base) != set(free) - {var}:
            raise AssignmentError(f"round {t} needs values for {sorted(set(free) - {var})}, got {sorted(asg)}")

        def at(x: ExtElement) -> ExtElement:
            return self._value(t, tuple(x if v == var else ctx.check(base[v]) for v in free))

        xs = list(ctx.elements(bound + 1))
        poly = interpolate(((x, at(x)) for x in xs), ctx, variable=var)
        # a restriction of higher degree that matches at both of these goes unnoticed
        for index in (bound + 1, bound + 2):
            check = ctx.element_at(index)
            if poly.evaluate(check, ctx) != at(check):
                log.error("Stage:degree_bound t=%s var=%s bound=%s abscissa=%s", t, var, bound, index)
                raise DegreeBoundError(f"P_{t} has degree > {bound} in X{var}")
        return poly

    def op_apply(self, op: Operator, poly: UnivariatePoly, current: ExtElement | None = None) -> ExtElement:
        return op_apply(op, poly, current, self.ctx, self.structure.universe_size)

    def cache_info(self):
        return getattr(self._value, "cache_info", lambda: None)()


def _get(asg: Sequence[ExtElement | None], var: int) -> ExtElement:
    value = asg[var - 1] if 0 < var <= len(asg) else None
    if value is None:
        raise AssignmentError(f"X{var} is not assigned")
    return value


def atom_eval(s: Structure, atom: Matrix, asg: PartialAssignment, ctx: ExtContext) -> ExtElement:
    return MatrixEvaluator(s, ctx).atom_eval(atom, _as_sequence(asg))


def matrix_eval(s: Structure, m: Matrix, asg: PartialAssignment, ctx: ExtContext) -> ExtElement:
    return MatrixEvaluator(s, ctx).matrix_eval(m, _as_sequence(asg))


def chain_eval(
    inst: Instance,
    ctx: ExtContext,
    schedule: OperatorSchedule,
    t: int,
    asg: PartialAssignment,
    memoize: bool = True,
) -> ExtElement:
    return Arithmetizer(inst, ctx, schedule, memoize=memoize).chain_eval(t, asg)


def restrict_univariate(
    inst: Instance,
    ctx: ExtContext,
    schedule: OperatorSchedule,
    t: int,
    asg: PartialAssignment,
    var: int,
) -> UnivariatePoly:
    return Arithmetizer(inst, ctx, schedule).restrict_univariate(t, asg, var)


def _as_sequence(asg: PartialAssignment) -> tuple[ExtElement | None, ...]:
    # unassigned slots stay None and fail only if the matrix reads them
    return tuple(asg.get(v) for v in range(1, max(asg, default=0) + 1))
