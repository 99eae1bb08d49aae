from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, TextIO

import parsy as p

from .formula import And, Const, Equal, Instance, Matrix, Not, Or, PNFFormula, Quantifier, Rel
from .structure import InstanceError, Structure, Vocabulary


class ParseError(InstanceError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


RESERVED = {"EX", "ALL", "true", "false"}

_VOCAB_ENTRY = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)/(\d+)$")
_REL_HEAD = re.compile(r"rel\s+([A-Za-z_][A-Za-z0-9_]*)\s*:")


# --- formula grammar (parsy) ---

_ws = p.regex(r"\s*")


def _lexeme(parser: p.Parser) -> p.Parser:
    return parser << _ws


def _token(s: str) -> p.Parser:
    return _lexeme(p.string(s))


_ident = p.regex(r"[A-Za-z_][A-Za-z0-9_]*")
# ((line, col), name, (line, col))
_name = _lexeme(_ident.mark())

_rel_atom = p.seq(_name, _token("(") >> _name.sep_by(_token(","), min=1) << _token(")")).combine(
    lambda sym, args: ("rel", sym, args)
)
_eq_atom = p.seq(_name << _token("="), _name).combine(lambda left, right: ("eq", left, right))
_const = _lexeme(p.regex(r"(true|false)\b").mark()).map(lambda m: ("const", m))


@p.generate
def _disjunction():
    node = yield _conjunction
    for rhs in (yield (_token("|") >> _conjunction).many()):
        node = ("or", node, rhs)
    return node


@p.generate
def _conjunction():
    node = yield _unary
    for rhs in (yield (_token("&") >> _unary).many()):
        node = ("and", node, rhs)
    return node


@p.generate
def _unary():
    bang = yield _token("!").optional()
    if bang is not None:
        body = yield _unary
        return ("not", body)
    return (yield _primary)


_primary = (_token("(") >> _disjunction << _token(")")) | _const | _rel_atom | _eq_atom

_binder = p.seq(_lexeme(p.regex(r"(EX|ALL)\b")), _name << _token("."))
_formula = _ws >> p.seq(_binder.many(), _disjunction) << p.eof

_tuple = _token("(") >> _lexeme(p.regex(r"\d+").map(int)).sep_by(_token(","), min=1) << _token(")")
_tuple_list = _ws >> (_tuple.mark() << _token(",").optional()).many() << p.eof


@dataclass
class _Line:
    number: int
    text: str


def parse_instance(source: str | TextIO) -> Instance:
    text = source if isinstance(source, str) else source.read()
    lines = [_Line(i, raw.split("#", 1)[0].rstrip()) for i, raw in enumerate(text.splitlines(), start=1)]
    lines = [ln for ln in lines if ln.text.strip()]

    vocab_line: _Line | None = None
    universe_line: _Line | None = None
    formula_line: _Line | None = None
    rel_lines: dict[str, _Line] = {}

    for ln in lines:
        stripped = ln.text.lstrip()
        keyword = stripped.split(None, 1)[0].split(":", 1)[0]
        col = len(ln.text) - len(stripped) + 1
        if keyword == "vocab":
            if vocab_line is not None:
                raise ParseError("duplicate vocab line", ln.number, col)
            vocab_line = ln
        elif keyword == "universe":
            if universe_line is not None:
                raise ParseError("duplicate universe line", ln.number, col)
            universe_line = ln
        elif keyword == "formula":
            if formula_line is not None:
                raise ParseError("duplicate formula line", ln.number, col)
            formula_line = ln
        elif keyword == "rel":
            head = _REL_HEAD.match(stripped)
            if head is None:
                raise ParseError("expected 'rel SYMBOL:'", ln.number, col)
            symbol = head.group(1)
            if symbol in rel_lines:
                raise ParseError(f"duplicate relation block for {symbol}", ln.number, col)
            rel_lines[symbol] = ln
        else:
            raise ParseError(f"unknown directive {keyword!r}", ln.number, col)

    end_line = (lines[-1].number + 1) if lines else 1
    vocabulary = _parse_vocab(vocab_line) if vocab_line else Vocabulary(())
    if universe_line is None:
        raise ParseError("missing universe line", end_line, 1)
    n = _parse_universe(universe_line)

    tuples: dict[str, list[tuple[int, ...]]] = {}
    for symbol, ln in rel_lines.items():
        tuples[symbol] = _parse_rel(ln, symbol, vocabulary, n)
    structure = Structure.from_tuples(n, vocabulary, tuples)

    if formula_line is None:
        raise ParseError("missing formula line", end_line, 1)
    formula = _parse_formula(formula_line, vocabulary)
    return Instance(structure, formula)


def _parse_vocab(ln: _Line) -> Vocabulary:
    entries: list[tuple[str, int]] = []
    for m in re.finditer(r"\S+", ln.text):
        if m.start() == ln.text.index("vocab"):
            continue
        entry = _VOCAB_ENTRY.match(m.group())
        if entry is None:
            raise ParseError(f"expected SYMBOL/ARITY, got {m.group()!r}", ln.number, m.start() + 1)
        if entry.group(1) in RESERVED:
            raise ParseError(f"{entry.group(1)} is a reserved word", ln.number, m.start() + 1)
        entries.append((entry.group(1), int(entry.group(2))))
    try:
        return Vocabulary(tuple(entries))
    except InstanceError as e:
        raise ParseError(str(e), ln.number, ln.text.index("vocab") + 1) from None


def _parse_universe(ln: _Line) -> int:
    m = re.match(r"\s*universe\s+(\d+)\s*$", ln.text)
    if m is None or int(m.group(1)) < 1:
        raise ParseError("expected 'universe N' with N >= 1", ln.number, 1)
    return int(m.group(1))


def _parse_rel(ln: _Line, symbol: str, vocabulary: Vocabulary, n: int) -> list[tuple[int, ...]]:
    head = _REL_HEAD.search(ln.text)
    assert head is not None
    if symbol not in vocabulary:
        raise ParseError(f"unknown relation symbol {symbol}", ln.number, head.start(1) + 1)
    arity = vocabulary.arity(symbol)
    offset = head.end()
    try:
        marked = _tuple_list.parse(ln.text[offset:])
    except p.ParseError as e:
        raise ParseError(f"expected a tuple like (0,1), found {_expected(e)}", ln.number, offset + e.index + 1) from None
    out: list[tuple[int, ...]] = []
    for (_, start_col), entries, _ in marked:
        col = offset + start_col + 1
        if len(entries) != arity:
            raise ParseError(
                f"arity mismatch: {symbol} has arity {arity}, tuple has {len(entries)} entries", ln.number, col
            )
        for entry in entries:
            if entry >= n:
                raise ParseError(f"universe element {entry} out of range [0, {n})", ln.number, col)
        out.append(tuple(entries))
    return out


def _parse_formula(ln: _Line, vocabulary: Vocabulary) -> PNFFormula:
    head = re.match(r"\s*formula\s*:", ln.text)
    if head is None:
        raise ParseError("expected 'formula:'", ln.number, 1)
    offset = head.end()
    body = ln.text[offset:]
    try:
        binders, tree = _formula.parse(body)
    except p.ParseError as e:
        raise ParseError(f"syntax error, found {_expected(e)}", ln.number, offset + e.index + 1) from None

    names: list[str] = []
    prefix: list[tuple[Quantifier, int]] = []
    for quant, ((_, col), name, _) in binders:
        if name in RESERVED:
            raise ParseError(f"{name} is a reserved word", ln.number, offset + col + 1)
        if name in names:
            raise ParseError(f"variable {name} quantified twice", ln.number, offset + col + 1)
        names.append(name)
        prefix.append((Quantifier(quant), len(names)))

    def resolve(marked) -> int:
        (_, col), name, _ = marked
        if name not in names:
            raise ParseError(f"unbound variable {name}", ln.number, offset + col + 1)
        return names.index(name) + 1

    def build(node) -> Matrix:
        tag = node[0]
        if tag == "const":
            return Const(node[1][1] == "true")
        if tag == "eq":
            return Equal(resolve(node[1]), resolve(node[2]))
        if tag == "rel":
            (_, col), symbol, _ = node[1]
            if symbol not in vocabulary:
                raise ParseError(f"unknown relation symbol {symbol}", ln.number, offset + col + 1)
            args = tuple(resolve(a) for a in node[2])
            if len(args) != vocabulary.arity(symbol):
                raise ParseError(
                    f"arity mismatch: {symbol} has arity {vocabulary.arity(symbol)}, used with {len(args)} arguments",
                    ln.number,
                    offset + col + 1,
                )
            return Rel(symbol, args)
        if tag == "not":
            return Not(build(node[1]))
        if tag == "and":
            return And(build(node[1]), build(node[2]))
        return Or(build(node[1]), build(node[2]))

    return PNFFormula(tuple(prefix), build(tree), tuple(names))


def _expected(e: p.ParseError) -> str:
    remaining = e.stream[e.index:e.index + 12]
    return repr(remaining) if remaining else "end of line"


# --- unparse ---

_PREC = {Or: 1, And: 2, Not: 3}


def format_matrix(m: Matrix, names: Iterable[str]) -> str:
    names = tuple(names)

    def fmt(node: Matrix, need: int) -> str:
        prec = _PREC.get(type(node), 4)
        if isinstance(node, Equal):
            text = f"{names[node.left - 1]} = {names[node.right - 1]}"
        elif isinstance(node, Rel):
            text = f"{node.symbol}({','.join(names[v - 1] for v in node.args)})"
        elif isinstance(node, Const):
            text = "true" if node.value else "false"
        elif isinstance(node, Not):
            text = f"!{fmt(node.body, 3)}"
        elif isinstance(node, And):
            # left-assoc: a & b & c parses as (a & b) & c
            text = f"{fmt(node.left, 2)} & {fmt(node.right, 3)}"
        else:
            text = f"{fmt(node.left, 1)} | {fmt(node.right, 2)}"
        return f"( {text} )" if prec < need else text

    return fmt(m, 0)


def format_instance(inst: Instance) -> str:
    s, f = inst.structure, inst.formula
    out = ["vocab " + " ".join(f"{sym}/{r}" for sym, r in s.vocabulary.entries) if len(s.vocabulary) else "vocab"]
    out.append(f"universe {s.universe_size}")
    for symbol in s.vocabulary.symbols:
        listed = " ".join("(" + ",".join(str(e) for e in tup) + ")" for tup in s.tuples(symbol))
        out.append(f"rel {symbol}: {listed}".rstrip())
    binders = "".join(f"{q.value} {f.name(v)} . " for q, v in f.prefix)
    out.append(f"formula: {binders}{format_matrix(f.matrix, f.names)}")
    return "\n".join(out) + "\n"
