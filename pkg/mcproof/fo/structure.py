from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..config import settings


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    entries: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for symbol, arity in self.entries:
            if symbol in seen:
                raise InstanceError(f"relation symbol {symbol} declared twice")
            seen.add(symbol)
            if arity < 1:
                raise InstanceError(f"relation symbol {symbol} needs arity >= 1, got {arity}")
            if arity > settings.arity_cap:
                raise InstanceError(f"arity {arity} of {symbol} exceeds the cap {settings.arity_cap}")

    def __contains__(self, symbol: object) -> bool:
        return any(symbol == s for s, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.entries)

    def arity(self, symbol: str) -> int:
        for s, r in self.entries:
            if s == symbol:
                return r
        raise InstanceError(f"unknown relation symbol {symbol}")


@dataclass(frozen=True, eq=False)
class Structure:
    """Universe {0, ..., n-1} plus one dense row-major bit array per relation symbol."""

    universe_size: int
    vocabulary: Vocabulary
    relations: Mapping[str, np.ndarray]

    def __post_init__(self) -> None:
        n = self.universe_size
        if n < 1:
            raise InstanceError(f"universe size must be >= 1, got {n}")
        extra = set(self.relations) - set(self.vocabulary.symbols)
        if extra:
            raise InstanceError(f"relations {sorted(extra)} are not in the vocabulary")
        frozen: dict[str, np.ndarray] = {}
        for symbol, arity in self.vocabulary.entries:
            cells = self.relations.get(symbol)
            if cells is None:
                cells = np.zeros(n**arity, dtype=np.uint8)
            cells = np.array(cells, dtype=np.uint8).reshape(-1)
            if cells.size != n**arity:
                raise InstanceError(f"relation {symbol} needs {n**arity} cells, got {cells.size}")
            cells.flags.writeable = False
            frozen[symbol] = cells
        object.__setattr__(self, "relations", frozen)

    @classmethod
    def from_tuples(
        cls,
        universe_size: int,
        vocabulary: Vocabulary,
        tuples: Mapping[str, Iterable[Sequence[int]]] | None = None,
    ) -> Structure:
        n = universe_size
        if n < 1:
            raise InstanceError(f"universe size must be >= 1, got {n}")
        relations: dict[str, np.ndarray] = {}
        for symbol, listed in (tuples or {}).items():
            arity = vocabulary.arity(symbol)
            cells = np.zeros(n**arity, dtype=np.uint8)
            for tup in listed:
                cells[_offset(n, arity, symbol, tup)] = 1
            relations[symbol] = cells
        return cls(n, vocabulary, relations)

    @property
    def u(self) -> int:
        return self.universe_size - 1

    def membership(self, symbol: str, tup: Sequence[int]) -> int:
        arity = self.vocabulary.arity(symbol)
        return int(self.relations[symbol][_offset(self.universe_size, arity, symbol, tup)])

    @cached_property
    def _tuple_lists(self) -> dict[str, tuple[tuple[int, ...], ...]]:
        n = self.universe_size
        out: dict[str, tuple[tuple[int, ...], ...]] = {}
        for symbol, arity in self.vocabulary.entries:
            flat = np.flatnonzero(self.relations[symbol])
            coords = np.unravel_index(flat, (n,) * arity)
            out[symbol] = tuple(tuple(int(c[i]) for c in coords) for i in range(flat.size))
        return out

    def tuples(self, symbol: str) -> tuple[tuple[int, ...], ...]:
        """Members of the relation in lexicographic order."""
        self.vocabulary.arity(symbol)
        return self._tuple_lists[symbol]

    def structure_size(self) -> int:
        # |A| + |tau| + sum over symbols of |R| * arity
        return (
            self.universe_size
            + len(self.vocabulary)
            + sum(len(self.tuples(s)) * r for s, r in self.vocabulary.entries)
        )

    def with_tuple(self, symbol: str, tup: Sequence[int]) -> Structure:
        arity = self.vocabulary.arity(symbol)
        relations = {s: cells.copy() for s, cells in self.relations.items()}
        relations[symbol][_offset(self.universe_size, arity, symbol, tup)] = 1
        return Structure(self.universe_size, self.vocabulary, relations)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Structure):
            return NotImplemented
        return (
            self.universe_size == other.universe_size
            and self.vocabulary == other.vocabulary
            and all(np.array_equal(self.relations[s], other.relations[s]) for s in self.vocabulary.symbols)
        )

    __hash__ = object.__hash__


def _offset(n: int, arity: int, symbol: str, tup: Sequence[int]) -> int:
    if len(tup) != arity:
        raise InstanceError(f"arity mismatch: {symbol} has arity {arity}, tuple has {len(tup)} entries")
    index = 0
    for entry in tup:
        if not 0 <= entry < n:
            raise InstanceError(f"universe element {entry} out of range [0, {n})")
        index = index * n + entry
    return index


def membership(s: Structure, symbol: str, tup: Sequence[int]) -> int:
    return s.membership(symbol, tup)


def structure_size(s: Structure) -> int:
    return s.structure_size()
