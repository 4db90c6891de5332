"""Hypothesis strategies shared across the test modules."""

import hypothesis.strategies as st

from expertlogic.formula import (
    And,
    Atom,
    BOT,
    Iff,
    Imp,
    ModalA,
    ModalE,
    ModalK,
    ModalS,
    Not,
    Or,
    TOP,
)


def formulas(atoms=("p", "q", "r"), with_k=True, with_consts=True, max_leaves=12):
    """Random core trees built through both raw constructors and sugar."""
    leaves = st.sampled_from([Atom(a) for a in atoms])
    if with_consts:
        leaves = leaves | st.sampled_from([TOP, BOT])
    modal_ops = [ModalE, ModalS, ModalA] + ([ModalK] if with_k else [])

    def extend(children):
        branches = [st.builds(Not, children)]
        branches += [st.builds(op, children) for op in modal_ops]
        for binop in (And, Or, Imp, Iff):
            branches.append(st.builds(binop, children, children))
        return st.one_of(branches)

    return st.recursive(leaves, extend, max_leaves=max_leaves)
