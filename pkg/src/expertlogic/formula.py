"""Syntax of the expertise/soundness modal language.

Concrete grammar (the contract for every CLI argument and file field that
holds a formula)::

    formula := iff
    iff     := imp ( '<->' imp )?            non-associative
    imp     := or ( '->' imp )?              right-associative
    or      := and ( '|' and )*              left-associative
    and     := unary ( '&' unary )*          left-associative
    unary   := ('~' | 'E' | 'S' | 'A' | 'K' | 'E^' | 'S^' | 'A^' | 'K^') unary
             | 'T' | 'F' | atom | '(' formula ')'
    atom    := /[a-z][a-z0-9_]*/

Unary operators bind tightest, then '&', then '|', then '->', then '<->'.
Whitespace is insignificant between tokens.  An unknown capital letter in
operator position ('B p') raises UnknownOperatorError rather than a generic
syntax error.

Everything is desugared at parse time onto seven core constructors: Atom,
Not, And, ModalE (objective expertise), ModalS (soundness), ModalA
(universal quantification over states) and ModalK (knowledge, used only on
the relational side of the translation).  Derived forms::

    a | b    ==  ~(~a & ~b)
    a -> b   ==  ~(a & ~b)
    a <-> b  ==  (a -> b) & (b -> a)
    T        ==  top | ~top         (reserved-but-ordinary atom 'top';
    F        ==  ~T                  a user atom 'top' collides harmlessly)
    Op^ a    ==  ~Op ~a             for Op in E, S, A, K

render() inverts the sugar for T, F, '|', '->' and '<->' but never for the
duals, and prints the minimal spacing/parenthesisation used throughout the
docs; parse(render(f)) == f for every core tree f.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class Formula:
    """Base class of the seven core syntax-tree node types."""

    __slots__ = ()

    def __post_init__(self):
        fields = tuple(getattr(self, name) for name in self.__dataclass_fields__)
        object.__setattr__(self, "_hash", hash((type(self).__name__, *fields)))


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ModalE(Formula):
    child: Formula


@dataclass(frozen=True)
class ModalS(Formula):
    child: Formula


@dataclass(frozen=True)
class ModalA(Formula):
    child: Formula


@dataclass(frozen=True)
class ModalK(Formula):
    child: Formula


def _cached_hash(self) -> int:
    return self._hash


# dataclass() generates a fresh tuple-hash per class, which re-hashes the
# whole subtree on every dict lookup; memoised evaluators do that constantly.
# Swap in the hash computed once at construction (children are already built,
# so each node costs O(1)).
for _node in (Atom, Not, And, ModalE, ModalS, ModalA, ModalK):
    _node.__hash__ = _cached_hash


_MODAL_TYPES = (ModalE, ModalS, ModalA, ModalK)
_MODAL_LETTER = {ModalE: "E", ModalS: "S", ModalA: "A", ModalK: "K"}


# --- derived connectives -------------------------------------------------

def Or(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def Imp(left: Formula, right: Formula) -> Formula:
    return Not(And(left, Not(right)))


def Iff(left: Formula, right: Formula) -> Formula:
    return And(Imp(left, right), Imp(right, left))


RESERVED_TOP_ATOM = "top"
TOP: Formula = Or(Atom(RESERVED_TOP_ATOM), Not(Atom(RESERVED_TOP_ATOM)))
BOT: Formula = Not(TOP)


# --- errors ---------------------------------------------------------------

class FormulaSyntaxError(ValueError):
    """Malformed formula text.  .position is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (column {position + 1})")
        self.position = position


class UnknownOperatorError(FormulaSyntaxError):
    """A capital letter other than E, S, A, K, T, F in operator position."""


# --- tokenizer ------------------------------------------------------------

_TOKEN_ATOM = re.compile(r"[a-z][a-z0-9_]*")


def is_atom_name(text: str) -> bool:
    """True when `text` is a legal atom token."""
    return _TOKEN_ATOM.fullmatch(text) is not None

_OPERATOR_LETTERS = {"E": ModalE, "S": ModalS, "A": ModalA, "K": ModalK}


@dataclass(frozen=True)
class _Token:
    kind: str  # one of ( ) ~ & | -> <-> modal const atom eof
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "()~&|":
            tokens.append(_Token(c if c in "()" else c, c, i))
            i += 1
            continue
        if c == "-":
            if text.startswith("->", i):
                tokens.append(_Token("->", "->", i))
                i += 2
                continue
            raise FormulaSyntaxError("expected '->'", i)
        if c == "<":
            if text.startswith("<->", i):
                tokens.append(_Token("<->", "<->", i))
                i += 3
                continue
            raise FormulaSyntaxError("expected '<->'", i)
        if c in _OPERATOR_LETTERS:
            if i + 1 < n and text[i + 1] == "^":
                tokens.append(_Token("modal", c + "^", i))
                i += 2
            else:
                tokens.append(_Token("modal", c, i))
                i += 1
            continue
        if c in ("T", "F"):
            tokens.append(_Token("const", c, i))
            i += 1
            continue
        if c.isupper():
            raise UnknownOperatorError(f"unknown operator {c!r}", i)
        m = _TOKEN_ATOM.match(text, i)
        if m:
            tokens.append(_Token("atom", m.group(), i))
            i = m.end()
            continue
        raise FormulaSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(_Token("eof", "", n))
    return tokens


# --- parser ---------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        tok = self.peek()
        if tok.kind != "eof":
            raise FormulaSyntaxError(f"unexpected {tok.text!r} after formula", tok.pos)
        return f

    def iff(self) -> Formula:
        left = self.imp()
        if self.peek().kind == "<->":
            self.next()
            right = self.imp()
            tok = self.peek()
            if tok.kind == "<->":
                raise FormulaSyntaxError(
                    "'<->' is non-associative, parenthesise one side", tok.pos
                )
            return Iff(left, right)
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek().kind == "->":
            self.next()
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().kind == "|":
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek().kind == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.next()
        if tok.kind == "~":
            return Not(self.unary())
        if tok.kind == "modal":
            ctor = _OPERATOR_LETTERS[tok.text[0]]
            child = self.unary()
            if tok.text.endswith("^"):
                return Not(ctor(Not(child)))
            return ctor(child)
        if tok.kind == "const":
            return TOP if tok.text == "T" else BOT
        if tok.kind == "atom":
            return Atom(tok.text)
        if tok.kind == "(":
            f = self.iff()
            tok = self.next()
            if tok.kind != ")":
                raise FormulaSyntaxError("expected ')'", tok.pos)
            return f
        if tok.kind == "eof":
            raise FormulaSyntaxError("unexpected end of input", tok.pos)
        raise FormulaSyntaxError(f"unexpected {tok.text!r}", tok.pos)


def parse(text: str) -> Formula:
    """Parse concrete syntax into a core tree (all sugar eliminated)."""
    return _Parser(text).parse()


# --- renderer ---------------------------------------------------------------

# precedence of a printed form, higher binds tighter
_P_IFF, _P_IMP, _P_OR, _P_AND, _P_UNARY, _P_ATOM = range(6)


def split_imp(f: Formula) -> tuple[Formula, Formula] | None:
    """Recognise the desugared a -> b, returning (a, b)."""
    if isinstance(f, Not) and isinstance(f.child, And) and isinstance(f.child.right, Not):
        return f.child.left, f.child.right.child
    return None


def split_or(f: Formula) -> tuple[Formula, Formula] | None:
    if (
        isinstance(f, Not)
        and isinstance(f.child, And)
        and isinstance(f.child.left, Not)
        and isinstance(f.child.right, Not)
    ):
        return f.child.left.child, f.child.right.child
    return None


def split_iff(f: Formula) -> tuple[Formula, Formula] | None:
    if not isinstance(f, And):
        return None
    fwd = split_imp(f.left)
    bwd = split_imp(f.right)
    if fwd is not None and bwd is not None and fwd == (bwd[1], bwd[0]):
        return fwd
    return None


def _wrap(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def _render(f: Formula) -> tuple[str, int]:
    if f == TOP:
        return "T", _P_ATOM
    if f == BOT:
        return "F", _P_ATOM
    if isinstance(f, Atom):
        return f.name, _P_ATOM
    if isinstance(f, And):
        pair = split_iff(f)
        if pair is not None:
            ls, lp = _render(pair[0])
            rs, rp = _render(pair[1])
            return (
                f"{_wrap(ls, lp <= _P_IFF)} <-> {_wrap(rs, rp <= _P_IFF)}",
                _P_IFF,
            )
        ls, lp = _render(f.left)
        rs, rp = _render(f.right)
        return f"{_wrap(ls, lp < _P_AND)} & {_wrap(rs, rp <= _P_AND)}", _P_AND
    if isinstance(f, Not):
        pair = split_or(f)
        if pair is not None:
            ls, lp = _render(pair[0])
            rs, rp = _render(pair[1])
            return f"{_wrap(ls, lp < _P_OR)} | {_wrap(rs, rp <= _P_OR)}", _P_OR
        pair = split_imp(f)
        if pair is not None:
            ls, lp = _render(pair[0])
            rs, rp = _render(pair[1])
            return f"{_wrap(ls, lp <= _P_IMP)} -> {_wrap(rs, rp < _P_IMP)}", _P_IMP
        cs, cp = _render(f.child)
        return f"~{_wrap(cs, cp < _P_UNARY)}", _P_UNARY
    if isinstance(f, _MODAL_TYPES):
        cs, cp = _render(f.child)
        needed = cp < _P_UNARY or isinstance(f.child, _MODAL_TYPES)
        return f"{_MODAL_LETTER[type(f)]} {_wrap(cs, needed)}", _P_UNARY
    raise TypeError(f"not a formula node: {f!r}")


def render(f: Formula) -> str:
    """Concrete syntax for a core tree; parse(render(f)) == f."""
    return _render(f)[0]


# --- structural helpers ------------------------------------------------------

def atom_names(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset((f.name,))
    if isinstance(f, Not):
        return atom_names(f.child)
    if isinstance(f, And):
        return atom_names(f.left) | atom_names(f.right)
    return atom_names(f.child)


def modal_depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.child)
    if isinstance(f, And):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 1 + modal_depth(f.child)


def subformulas(f: Formula):
    """Yield every node of the tree, children before parents."""
    if isinstance(f, Not):
        yield from subformulas(f.child)
    elif isinstance(f, And):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, _MODAL_TYPES):
        yield from subformulas(f.child)
    yield f


def _operators(f: Formula) -> set[type]:
    return {type(g) for g in subformulas(f) if isinstance(g, _MODAL_TYPES)}


def in_expertise_language(f: Formula) -> bool:
    """True when f uses only E, S and A (evaluable on expertise models)."""
    return ModalK not in _operators(f)


def in_sa_fragment(f: Formula) -> bool:
    """True when f uses only S and A (no expertise or knowledge operator)."""
    return not ({ModalE, ModalK} & _operators(f))


def in_ka_fragment(f: Formula) -> bool:
    """True when f uses only K and A (evaluable on relational models)."""
    return not ({ModalE, ModalS} & _operators(f))


# --- translations ----------------------------------------------------------

def to_knowledge_form(f: Formula) -> Formula:
    """Rewrite an E/S/A formula into the K/A fragment.

    Expertise about a formula becomes 'wherever it holds, it is known'
    (A (f -> K f)); soundness becomes compatibility with knowledge (~K ~f).
    Together with to_s5_model this preserves truth state by state.
    """
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(to_knowledge_form(f.child))
    if isinstance(f, And):
        return And(to_knowledge_form(f.left), to_knowledge_form(f.right))
    if isinstance(f, ModalA):
        return ModalA(to_knowledge_form(f.child))
    if isinstance(f, ModalE):
        t = to_knowledge_form(f.child)
        return ModalA(Imp(t, ModalK(t)))
    if isinstance(f, ModalS):
        return Not(ModalK(Not(to_knowledge_form(f.child))))
    raise ValueError("formula already mentions K; nothing to translate")


def eliminate_expertise(f: Formula) -> Formula:
    """Rewrite E away inside the source language itself.

    Each E g becomes A (S g' -> g'): a formula is a matter of expertise
    exactly when every state whose soundness claim for it holds actually
    satisfies it.  S, A and the propositional structure are untouched, so
    the result lands in the S/A fragment.
    """
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(eliminate_expertise(f.child))
    if isinstance(f, And):
        return And(eliminate_expertise(f.left), eliminate_expertise(f.right))
    if isinstance(f, ModalS):
        return ModalS(eliminate_expertise(f.child))
    if isinstance(f, ModalA):
        return ModalA(eliminate_expertise(f.child))
    if isinstance(f, ModalE):
        g = eliminate_expertise(f.child)
        return ModalA(Imp(ModalS(g), g))
    raise ValueError("K has no expertise reading; formula must be K-free")
