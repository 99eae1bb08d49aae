from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from sympy import primefactors
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcd, gf_gcdex, gf_mul, gf_pow_mod, gf_rem, gf_strip, gf_sub

from ..config import settings
from .primes import is_prime


# Extension degree of GF(q^4) over GF(q); the soundness margin q^2/q^4 assumes it.
EXT_DEGREE = 4

log = logging.getLogger("mcproof.field")


class FieldError(ValueError):
    pass


class ContextMismatchError(FieldError):
    pass


class FieldDivisionError(FieldError, ZeroDivisionError):
    pass


def _to_gf(coeffs: Sequence[int]) -> list[int]:
    # galoistools keeps the leading coefficient first
    return gf_strip([int(c) for c in reversed(coeffs)])


def _from_gf(poly: Sequence[int], length: int = EXT_DEGREE) -> tuple[int, ...]:
    low_first = [int(c) for c in reversed(poly)]
    return tuple(low_first + [0] * (length - len(low_first)))


def _digits(index: int, q: int, length: int = EXT_DEGREE) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        index, digit = divmod(index, q)
        out.append(digit)
    return tuple(out)


@dataclass(frozen=True)
class ExtElement:
    """c0 + c1*t + c2*t^2 + c3*t^3, t a root of the context's modulus."""

    coords: tuple[int, int, int, int]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return format_element(self)


@dataclass(frozen=True)
class IrreduciblePoly:
    # a0, a1, a2, a3, 1
    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) != EXT_DEGREE + 1 or self.coefficients[-1] != 1:
            raise FieldError(f"expected a monic quartic a0,a1,a2,a3,1, got {self.coefficients}")

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coefficients)


def _check_quartic(q: int, f: Sequence[int] | IrreduciblePoly) -> tuple[int, ...]:
    coeffs = tuple(int(c) for c in (f.coefficients if isinstance(f, IrreduciblePoly) else f))
    if len(coeffs) != EXT_DEGREE + 1:
        raise FieldError(f"polynomial must have degree exactly {EXT_DEGREE}, got {len(coeffs) - 1}")
    if coeffs[-1] % q != 1:
        raise FieldError("polynomial must be monic")
    return tuple(c % q for c in coeffs)


def is_irreducible(q: int, f: Sequence[int] | IrreduciblePoly) -> bool:
    """Rabin's test for a monic quartic: x^(q^4) = x mod f and gcd(x^(q^2) - x, f) = 1."""
    modulus = _to_gf(_check_quartic(q, f))
    x = [1, 0]
    if gf_pow_mod(x, q**4, modulus, q, ZZ) != x:
        return False
    h = gf_sub(gf_pow_mod(x, q**2, modulus, q, ZZ), x, q, ZZ)
    return gf_gcd(h, modulus, q, ZZ) == [1]


def find_irreducible(q: int, rng: np.random.Generator, attempts: int | None = None) -> IrreduciblePoly:
    attempts = settings.irreducible_attempts if attempts is None else attempts
    for _ in range(attempts):
        candidate = (*(int(c) for c in rng.integers(0, q, size=EXT_DEGREE)), 1)
        if is_irreducible(q, candidate):
            return IrreduciblePoly(candidate)
    log.warning("Stage:irreducible_fallback q=%s attempts=%s", q, attempts)
    for index in range(q**EXT_DEGREE):
        candidate = (*_digits(index, q), 1)
        if is_irreducible(q, candidate):
            return IrreduciblePoly(candidate)
    raise RuntimeError(f"no irreducible quartic over GF({q})")


def _index(coords: Sequence[int], q: int) -> int:
    c0, c1, c2, c3 = coords
    return c0 + q * (c1 + q * (c2 + q * c3))


@dataclass(frozen=True)
class _LogTables:
    """Discrete logs to a fixed generator; exp is stored twice over so log a + log b needs no reduction."""

    log: list[int]
    exp: list[int]
    elements: tuple[ExtElement, ...]


def _build_tables(q: int, modulus: list[int]) -> _LogTables:
    order = q**EXT_DEGREE
    group = order - 1
    factors = primefactors(group)
    elements = tuple(ExtElement(_digits(index, q)) for index in range(order))
    for index in range(2, order):
        g = _to_gf(elements[index].coords)
        if all(gf_pow_mod(g, group // p, modulus, q, ZZ) != [1] for p in factors):
            break
    else:
        raise RuntimeError(f"no generator of GF({q}^{EXT_DEGREE})*")
    exp = np.empty(group, dtype=np.int64)
    power = [1]
    for e in range(group):
        exp[e] = _index(_from_gf(power), q)
        power = gf_rem(gf_mul(power, g, q, ZZ), modulus, q, ZZ)
    logs = np.zeros(order, dtype=np.int64)
    logs[exp] = np.arange(group, dtype=np.int64)
    return _LogTables(logs.tolist(), np.concatenate((exp, exp)).tolist(), elements)


@dataclass(frozen=True)
class ExtContext:
    """GF(q^4) as GF(q)[t] / (irr).

    Multiplication, powers and inverses go through log/antilog tables when q^4 is at most
    settings.field_table_limit; larger fields fall back to galoistools polynomial arithmetic.
    """

    q: int
    irr: IrreduciblePoly
    _modulus: list[int] = field(init=False, repr=False, compare=False)
    _tables: _LogTables | None = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not is_prime(self.q):
            raise FieldError(f"modulus {self.q} is not prime")
        if any(not 0 <= c < self.q for c in self.irr.coefficients):
            raise FieldError(f"coefficients of {self.irr} are not residues mod {self.q}")
        if not is_irreducible(self.q, self.irr):
            raise FieldError(f"{self.irr} is reducible over GF({self.q})")
        modulus = _to_gf(self.irr.coefficients)
        object.__setattr__(self, "_modulus", modulus)
        tables = _build_tables(self.q, modulus) if self.order <= settings.field_table_limit else None
        object.__setattr__(self, "_tables", tables)
        log.debug("Stage:field q=%s irr=%s tables=%s", self.q, self.irr, tables is not None)

    @property
    def order(self) -> int:
        return self.q**EXT_DEGREE

    @property
    def zero(self) -> ExtElement:
        return ExtElement((0, 0, 0, 0))

    @property
    def one(self) -> ExtElement:
        return ExtElement((1, 0, 0, 0))

    def check(self, a: ExtElement) -> ExtElement:
        """Range check on the coordinates.

        Elements carry no reference to their context: an element built under another
        modulus with the same q passes and is read as coordinates over this one.
        """
        coords = getattr(a, "coords", None)
        if coords is None or len(coords) != EXT_DEGREE or any(not 0 <= c < self.q for c in coords):
            raise ContextMismatchError(f"{a!r} is not an element of GF({self.q}^{EXT_DEGREE})")
        return a

    def element(self, coords: Sequence[int]) -> ExtElement:
        return self.check(ExtElement(tuple(int(c) for c in coords)))

    def embed(self, a: int) -> ExtElement:
        if not 0 <= a < self.q:
            raise FieldError(f"universe element {a} does not fit in GF({self.q})")
        return ExtElement((a, 0, 0, 0))

    def element_at(self, index: int) -> ExtElement:
        """Fixed enumeration of the field; indices 0..q-1 are the embedded GF(q)."""
        if not 0 <= index < self.order:
            raise FieldError(f"enumeration index {index} outside [0, {self.order})")
        if self._tables is not None:
            return self._tables.elements[index]
        return ExtElement(_digits(index, self.q))

    def elements(self, count: int) -> Iterator[ExtElement]:
        for index in range(count):
            yield self.element_at(index)

    def random_element(self, rng: np.random.Generator) -> ExtElement:
        return ExtElement(tuple(int(c) for c in rng.integers(0, self.q, size=EXT_DEGREE)))

    def add(self, a: ExtElement, b: ExtElement) -> ExtElement:
        q = self.q
        return ExtElement(tuple((x + y) % q for x, y in zip(a.coords, b.coords)))

    def sub(self, a: ExtElement, b: ExtElement) -> ExtElement:
        q = self.q
        return ExtElement(tuple((x - y) % q for x, y in zip(a.coords, b.coords)))

    def neg(self, a: ExtElement) -> ExtElement:
        q = self.q
        return ExtElement(tuple(-x % q for x in a.coords))

    def mul(self, a: ExtElement, b: ExtElement) -> ExtElement:
        tables = self._tables
        if tables is None:
            product = gf_mul(_to_gf(a.coords), _to_gf(b.coords), self.q, ZZ)
            return ExtElement(_from_gf(gf_rem(product, self._modulus, self.q, ZZ)))
        ia, ib = _index(a.coords, self.q), _index(b.coords, self.q)
        if not ia or not ib:
            return tables.elements[0]
        return tables.elements[tables.exp[tables.log[ia] + tables.log[ib]]]

    def pow(self, a: ExtElement, e: int) -> ExtElement:
        if e < 0:
            return self.pow(self.inv(a), -e)
        tables = self._tables
        if tables is None:
            # square-and-multiply modulo the irreducible quartic
            return ExtElement(_from_gf(gf_pow_mod(_to_gf(a.coords), e, self._modulus, self.q, ZZ)))
        ia = _index(a.coords, self.q)
        if not ia:
            return tables.elements[0 if e else 1]
        return tables.elements[tables.exp[tables.log[ia] * e % (self.order - 1)]]

    def inv(self, a: ExtElement) -> ExtElement:
        if a.is_zero():
            raise FieldDivisionError("zero has no inverse")
        tables = self._tables
        if tables is not None:
            group = self.order - 1
            return tables.elements[tables.exp[(group - tables.log[_index(a.coords, self.q)]) % group]]
        s, _, h = gf_gcdex(_to_gf(a.coords), self._modulus, self.q, ZZ)
        if h != [1]:
            raise RuntimeError(f"gcd with the modulus is {h}, expected 1")
        return ExtElement(_from_gf(gf_rem(s, self._modulus, self.q, ZZ)))

    def div(self, a: ExtElement, b: ExtElement) -> ExtElement:
        return self.mul(a, self.inv(b))

    def sum(self, items) -> ExtElement:
        total = self.zero
        for item in items:
            total = self.add(total, item)
        return total

    def prod(self, items) -> ExtElement:
        total = self.one
        for item in items:
            total = self.mul(total, item)
        return total


def ext_mul(a: ExtElement, b: ExtElement, ctx: ExtContext) -> ExtElement:
    return ctx.mul(ctx.check(a), ctx.check(b))


def ext_inv(a: ExtElement, ctx: ExtContext) -> ExtElement:
    return ctx.inv(ctx.check(a))


def embed(a: int, ctx: ExtContext) -> ExtElement:
    return ctx.embed(a)


def format_element(a: ExtElement) -> str:
    return ",".join(str(c) for c in a.coords)


def parse_element(text: str, ctx: ExtContext) -> ExtElement:
    parts = text.strip().split(",")
    if len(parts) != EXT_DEGREE:
        raise FieldError(f"element {text!r} must have {EXT_DEGREE} comma-separated coordinates")
    try:
        coords = [int(p) for p in parts]
    except ValueError:
        raise FieldError(f"element {text!r} has a non-integer coordinate") from None
    return ctx.element(coords)


def parse_irreducible(text: str, q: int) -> IrreduciblePoly:
    try:
        coeffs = tuple(int(p) for p in text.strip().split(","))
    except ValueError:
        raise FieldError(f"polynomial {text!r} has a non-integer coefficient") from None
    if any(not 0 <= c < q for c in coeffs):
        raise FieldError(f"coefficients of {text!r} are not residues mod {q}")
    return IrreduciblePoly(coeffs)
