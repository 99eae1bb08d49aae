from __future__ import annotations

from .formula import Instance, Quantifier, eval_matrix_bool


def model_check(inst: Instance) -> bool:
    """Brute-force truth of the sentence: plain depth-first recursion over the prefix, no memo."""
    s, f = inst.structure, inst.formula

    def satisfied(position: int, assignment: dict[int, int]) -> bool:
        if position == f.k:
            return bool(eval_matrix_bool(s, f.matrix, assignment))
        quantifier, var = f.prefix[position]
        branches = (satisfied(position + 1, {**assignment, var: a}) for a in range(s.universe_size))
        if quantifier is Quantifier.EXISTS:
            return any(branches)
        return all(branches)

    return satisfied(0, {})
