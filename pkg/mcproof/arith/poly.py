from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from ..field import ExtContext, ExtElement, FieldError, format_element, parse_element


class InterpolationError(ValueError):
    pass


@dataclass(frozen=True)
class UnivariatePoly:
    """Polynomial in X_variable with GF(q^4) coefficients, lowest degree first."""

    variable: int
    coeffs: tuple[ExtElement, ...]

    def __post_init__(self) -> None:
        coeffs = list(self.coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def constant(cls, variable: int, value: ExtElement) -> UnivariatePoly:
        return cls(variable, (value,))

    @property
    def degree(self) -> int:
        # the zero polynomial reports degree 0
        return max(len(self.coeffs) - 1, 0)

    def evaluate(self, x: ExtElement, ctx: ExtContext) -> ExtElement:
        acc = ctx.zero
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    def shifted(self, delta: ExtElement, ctx: ExtContext) -> UnivariatePoly:
        coeffs = list(self.coeffs) or [ctx.zero]
        coeffs[0] = ctx.add(coeffs[0], delta)
        return UnivariatePoly(self.variable, tuple(coeffs))

    def __str__(self) -> str:
        return format_poly(self)


def format_poly(poly: UnivariatePoly) -> str:
    coeffs = poly.coeffs or (ExtElement((0, 0, 0, 0)),)
    return f"var={poly.variable}; deg={poly.degree}; coeffs={'|'.join(format_element(c) for c in coeffs)}"


_POLY = re.compile(r"var=(\d+); deg=(\d+); coeffs=(\S+)$")


def parse_poly(text: str, ctx: ExtContext) -> UnivariatePoly:
    m = _POLY.match(text.strip())
    if m is None:
        raise FieldError(f"malformed polynomial {text!r}")
    coeffs = tuple(parse_element(c, ctx) for c in m.group(3).split("|"))
    if int(m.group(2)) != len(coeffs) - 1:
        raise FieldError(f"polynomial {text!r} declares deg={m.group(2)} but lists {len(coeffs)} coefficients")
    return UnivariatePoly(int(m.group(1)), coeffs)


def _poly_mul_linear(ctx: ExtContext, poly: list[ExtElement], root: ExtElement) -> list[ExtElement]:
    # poly * (X - root)
    out = [ctx.zero] * (len(poly) + 1)
    neg_root = ctx.neg(root)
    for j, c in enumerate(poly):
        out[j + 1] = ctx.add(out[j + 1], c)
        out[j] = ctx.add(out[j], ctx.mul(c, neg_root))
    return out


def _poly_div_linear(ctx: ExtContext, poly: list[ExtElement], root: ExtElement) -> list[ExtElement]:
    # exact synthetic division by (X - root)
    out = [ctx.zero] * (len(poly) - 1)
    carry = ctx.zero
    for j in range(len(poly) - 1, 0, -1):
        carry = ctx.add(poly[j], ctx.mul(carry, root))
        out[j - 1] = carry
    return out


@lru_cache(maxsize=16)
def lagrange_basis(ctx: ExtContext, xs: tuple[ExtElement, ...]) -> tuple[tuple[ExtElement, ...], ...]:
    """Coefficients of every Lagrange basis polynomial for the abscissae xs."""
    if len(set(xs)) != len(xs):
        raise InterpolationError("duplicate abscissa")
    if len(xs) > ctx.order:
        raise InterpolationError(f"{len(xs)} points exceed the field order {ctx.order}")
    master = [ctx.one]
    for x in xs:
        master = _poly_mul_linear(ctx, master, x)
    basis = []
    for x in xs:
        numerator = _poly_div_linear(ctx, master, x)
        denominator = UnivariatePoly(0, tuple(numerator)).evaluate(x, ctx)
        scale = ctx.inv(denominator)
        basis.append(tuple(ctx.mul(c, scale) for c in numerator))
    return tuple(basis)


def interpolate(
    points: Iterable[tuple[ExtElement, ExtElement]],
    ctx: ExtContext,
    variable: int = 0,
) -> UnivariatePoly:
    """Unique polynomial of degree < len(points) through all points."""
    pts = list(points)
    if not pts:
        return UnivariatePoly(variable, ())
    xs = tuple(x for x, _ in pts)
    basis = lagrange_basis(ctx, xs)
    coeffs = [ctx.zero] * len(pts)
    for (_, y), row in zip(pts, basis):
        if y.is_zero():
            continue
        for j, c in enumerate(row):
            coeffs[j] = ctx.add(coeffs[j], ctx.mul(y, c))
    return UnivariatePoly(variable, tuple(coeffs))
