"""Hilbert-style proof checking for the expertise logic.

The calculus has eight axiom schemas over metavariables phi/psi::

    K_S   S phi & ~S psi -> S (phi & ~psi)
    T_S   phi -> S phi
    5_S   S ~S phi -> ~S phi
    K_A   A (phi -> psi) -> (A phi -> A psi)
    T_A   A phi -> phi
    5_A   ~A phi -> A ~A phi
    ES    E phi <-> A (S phi -> phi)
    Inc   A phi -> ~S ~phi

plus three rules: modus ponens, A-necessitation (from phi infer A phi) and
S-replacement (from phi <-> psi infer S phi <-> S psi).  The propositional
base is folded in as a 'taut' justification that abstracts maximal modal
subformulas to letters and checks a truth table.

Proof files are plain text, one step per line::

    # derives soundness-compatibility of a tautology
    1. p -> p ; taut
    2. A (p -> p) ; necA 1
    3. A (p -> p) -> ~S ~(p -> p) ; axiom Inc
    4. ~S ~(p -> p) ; mp 2 3

Justifications: `taut`, `axiom <name>`, `mp <i> <j>` (step j must be
step i -> this step), `necA <i>`, `rs <i>`.  Indices are 1-based and must
reference earlier steps.  `#` starts a comment, blank lines are ignored,
and steps must be numbered consecutively from 1.

soundness_sweep closes the loop with the semantics: it instantiates schemas
over a formula corpus and hands every instance to the bounded countermodel
search, reporting any falsified instance.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from typing import Mapping

from .formula import (
    And,
    Atom,
    Formula,
    Iff,
    Imp,
    ModalA,
    ModalE,
    ModalK,
    ModalS,
    Not,
    in_expertise_language,
    parse,
    render,
    split_iff,
    FormulaSyntaxError,
)
from .validity import EnumerationSpec, Verdict, find_countermodel


@dataclass(frozen=True)
class Meta(Formula):
    """Schema metavariable; instantiation replaces it by a formula."""

    name: str


PHI = Meta("phi")
PSI = Meta("psi")


@dataclass(frozen=True)
class AxiomSchema:
    name: str
    template: Formula

    def metavariables(self) -> tuple[str, ...]:
        """Names in order of first occurrence in the template."""
        seen: list[str] = []

        def walk(g: Formula) -> None:
            if isinstance(g, Meta):
                if g.name not in seen:
                    seen.append(g.name)
            elif isinstance(g, And):
                walk(g.left)
                walk(g.right)
            elif isinstance(g, (Not, ModalE, ModalS, ModalA, ModalK)):
                walk(g.child)

        walk(self.template)
        return tuple(seen)


SCHEMAS: dict[str, AxiomSchema] = {
    s.name: s
    for s in (
        AxiomSchema("K_S", Imp(And(ModalS(PHI), Not(ModalS(PSI))), ModalS(And(PHI, Not(PSI))))),
        AxiomSchema("T_S", Imp(PHI, ModalS(PHI))),
        AxiomSchema("5_S", Imp(ModalS(Not(ModalS(PHI))), Not(ModalS(PHI)))),
        AxiomSchema("K_A", Imp(ModalA(Imp(PHI, PSI)), Imp(ModalA(PHI), ModalA(PSI)))),
        AxiomSchema("T_A", Imp(ModalA(PHI), PHI)),
        AxiomSchema("5_A", Imp(Not(ModalA(PHI)), ModalA(Not(ModalA(PHI))))),
        AxiomSchema("ES", Iff(ModalE(PHI), ModalA(Imp(ModalS(PHI), PHI)))),
        AxiomSchema("Inc", Imp(ModalA(PHI), Not(ModalS(Not(PHI))))),
    )
}

# Deliberately NOT an axiom: expertise does not distribute over implication.
# Kept around so sweeps can demonstrate that a bogus schema is caught.
E_DISTRIBUTION = AxiomSchema(
    "E_dist", Imp(ModalE(Imp(PHI, PSI)), Imp(ModalE(PHI), ModalE(PSI)))
)


def instantiate(template: Formula, subst: Mapping[str, Formula]) -> Formula:
    if isinstance(template, Meta):
        try:
            return subst[template.name]
        except KeyError:
            raise ValueError(f"no substitution for metavariable {template.name}") from None
    if isinstance(template, (Atom,)):
        return template
    if isinstance(template, Not):
        return Not(instantiate(template.child, subst))
    if isinstance(template, And):
        return And(instantiate(template.left, subst), instantiate(template.right, subst))
    ctor = type(template)
    return ctor(instantiate(template.child, subst))


def match_schema(schema: AxiomSchema, f: Formula) -> dict[str, Formula] | None:
    """The unique substitution instantiating the schema to f, if any.

    Purely structural on desugared trees; repeated metavariables must bind
    the same subformula.
    """
    binding: dict[str, Formula] = {}

    def walk(t: Formula, g: Formula) -> bool:
        if isinstance(t, Meta):
            bound = binding.get(t.name)
            if bound is None:
                binding[t.name] = g
                return True
            return bound == g
        if type(t) is not type(g):
            return False
        if isinstance(t, Atom):
            return t.name == g.name
        if isinstance(t, And):
            return walk(t.left, g.left) and walk(t.right, g.right)
        return walk(t.child, g.child)

    return binding if walk(schema.template, f) else None


# --- propositional base ------------------------------------------------------

MAX_TAUT_LETTERS = 20


class TautologyLimitError(ValueError):
    pass


def check_taut(f: Formula) -> bool:
    """Truth-table tautology after abstracting modal subtrees to letters.

    Maximal modal subformulas and atoms become propositional letters; the
    table is evaluated column-wise on big-int bit vectors (bit a = row a).
    More than 20 distinct letters is refused outright.
    """
    letters: dict[Formula, int] = {}

    def collect(g: Formula) -> None:
        if isinstance(g, Not):
            collect(g.child)
        elif isinstance(g, And):
            collect(g.left)
            collect(g.right)
        else:
            letters.setdefault(g, len(letters))

    collect(f)
    count = len(letters)
    if count > MAX_TAUT_LETTERS:
        raise TautologyLimitError(
            f"abstraction has {count} distinct letters; refusing to enumerate "
            f"2^{count} truth-table rows (cap is {MAX_TAUT_LETTERS}, "
            f"i.e. {1 << MAX_TAUT_LETTERS} rows)"
        )
    rows = 1 << count
    table_full = (1 << rows) - 1
    columns: dict[int, int] = {}
    for idx in range(count):
        half = 1 << idx
        unit = ((1 << half) - 1) << half
        repeat = table_full // ((1 << (half << 1)) - 1)
        columns[idx] = unit * repeat

    memo: dict[Formula, int] = {}

    def ev(g: Formula) -> int:
        got = memo.get(g)
        if got is not None:
            return got
        if isinstance(g, Not):
            out = table_full ^ ev(g.child)
        elif isinstance(g, And):
            out = ev(g.left) & ev(g.right)
        else:
            out = columns[letters[g]]
        memo[g] = out
        return out

    return ev(f) == table_full


# --- derivations -------------------------------------------------------------

@dataclass(frozen=True)
class Taut:
    pass


@dataclass(frozen=True)
class Axiom:
    name: str
    substitution: tuple[tuple[str, Formula], ...] | None = None


@dataclass(frozen=True)
class MP:
    premise: int
    implication: int


@dataclass(frozen=True)
class NecA:
    premise: int


@dataclass(frozen=True)
class RS:
    premise: int


Justification = Taut | Axiom | MP | NecA | RS


@dataclass(frozen=True)
class Step:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Derivation:
    steps: tuple[Step, ...]

    @property
    def theorem(self) -> Formula:
        return self.steps[-1].formula


@dataclass(frozen=True)
class DerivationVerdict:
    ok: bool
    step: int | None = None
    reason: str | None = None

    def __str__(self) -> str:
        return "ok" if self.ok else f"bad step {self.step}: {self.reason}"


def check_derivation(derivation: Derivation) -> DerivationVerdict:
    """First unjustified step, if any.

    Every step must be in the E/S/A language and carry a justification that
    actually produces its formula; rule references must point at earlier
    steps (1-based).
    """
    steps = derivation.steps
    for k, step in enumerate(steps, start=1):
        reason = _check_step(steps, k, step)
        if reason is not None:
            return DerivationVerdict(False, k, reason)
    return DerivationVerdict(True)


def _earlier(steps, k: int, i: int) -> Formula | str:
    if not 1 <= i < k:
        return f"reference to step {i}, which does not precede step {k}"
    return steps[i - 1].formula


def _check_step(steps, k: int, step: Step) -> str | None:
    f = step.formula
    if not in_expertise_language(f):
        return "knowledge operator is outside the proof language"
    j = step.justification
    if isinstance(j, Taut):
        return None if check_taut(f) else "not a propositional tautology"
    if isinstance(j, Axiom):
        schema = SCHEMAS.get(j.name)
        if schema is None:
            return f"unknown axiom {j.name!r}"
        if j.substitution is not None:
            try:
                produced = instantiate(schema.template, dict(j.substitution))
            except ValueError as e:
                return str(e)
            if produced != f:
                return f"given substitution does not instantiate {j.name} to this formula"
            return None
        if match_schema(schema, f) is None:
            return f"formula is not an instance of axiom {j.name}"
        return None
    if isinstance(j, MP):
        premise = _earlier(steps, k, j.premise)
        if isinstance(premise, str):
            return premise
        implication = _earlier(steps, k, j.implication)
        if isinstance(implication, str):
            return implication
        if implication != Imp(premise, f):
            return (
                f"step {j.implication} is not the implication "
                f"(step {j.premise} -> this formula)"
            )
        return None
    if isinstance(j, NecA):
        premise = _earlier(steps, k, j.premise)
        if isinstance(premise, str):
            return premise
        if f != ModalA(premise):
            return f"formula is not A applied to step {j.premise}"
        return None
    if isinstance(j, RS):
        premise = _earlier(steps, k, j.premise)
        if isinstance(premise, str):
            return premise
        pair = split_iff(premise)
        if pair is None:
            return f"step {j.premise} is not a biconditional"
        if f != Iff(ModalS(pair[0]), ModalS(pair[1])):
            return (
                f"formula is not S applied to both sides of step {j.premise}"
            )
        return None
    return f"unsupported justification {j!r}"


# --- proof files -------------------------------------------------------------

class DerivationFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


_STEP_LINE = re.compile(r"^(\d+)\.\s*(.*?)\s*;\s*(\S.*)$")


def parse_derivation(text: str) -> Derivation:
    """Parse the proof file format described in the module docstring."""
    steps: list[Step] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _STEP_LINE.match(line)
        if m is None:
            raise DerivationFormatError(
                "expected '<index>. <formula> ; <justification>'", line_no
            )
        index, formula_text, just_text = m.groups()
        if int(index) != len(steps) + 1:
            raise DerivationFormatError(
                f"step numbered {index}, expected {len(steps) + 1}", line_no
            )
        try:
            formula = parse(formula_text)
        except FormulaSyntaxError as e:
            raise DerivationFormatError(f"bad formula: {e}", line_no) from None
        steps.append(Step(formula, _parse_justification(just_text, line_no)))
    if not steps:
        raise DerivationFormatError("no steps")
    return Derivation(tuple(steps))


def _parse_justification(text: str, line_no: int) -> Justification:
    parts = text.split()
    kind = parts[0]
    try:
        if kind == "taut" and len(parts) == 1:
            return Taut()
        if kind == "axiom" and len(parts) == 2:
            return Axiom(parts[1])
        if kind == "mp" and len(parts) == 3:
            return MP(int(parts[1]), int(parts[2]))
        if kind == "necA" and len(parts) == 2:
            return NecA(int(parts[1]))
        if kind == "rs" and len(parts) == 2:
            return RS(int(parts[1]))
    except ValueError:
        raise DerivationFormatError(
            f"justification {text!r} has a non-numeric step reference", line_no
        ) from None
    raise DerivationFormatError(f"unknown justification {text!r}", line_no)


def load_derivation(path: str) -> Derivation:
    with open(path, encoding="utf-8") as fh:
        return parse_derivation(fh.read())


# --- soundness sweeps --------------------------------------------------------

@dataclass(frozen=True)
class SweepViolation:
    schema: str
    substitution: tuple[tuple[str, Formula], ...]
    verdict: Verdict


@dataclass(frozen=True)
class SweepReport:
    schemas: tuple[str, ...]
    corpus: tuple[Formula, ...]
    spec: EnumerationSpec
    engine: str
    instances_checked: int
    violations: tuple[SweepViolation, ...] = field(default=())
    elapsed_s: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_report(self, include_timing: bool = False) -> dict:
        doc = {
            "schemas": list(self.schemas),
            "corpus": [render(f) for f in self.corpus],
            "bound": {
                "n_states": self.spec.n_states,
                "atoms": list(self.spec.atoms),
            },
            "engine": self.engine,
            "instances_checked": self.instances_checked,
            "violations": [
                {
                    "schema": v.schema,
                    "substitution": {
                        name: render(g) for name, g in v.substitution
                    },
                    "instance": render(v.verdict.formula),
                    "witness": v.verdict.to_report()["witness"],
                }
                for v in self.violations
            ],
        }
        if include_timing:
            doc["elapsed_s"] = self.elapsed_s
        return doc


def schema_instances(schema: AxiomSchema, corpus):
    """(substitution, instance) pairs over the corpus, in corpus order."""
    names = schema.metavariables()
    picks = [corpus] * len(names)

    def rec(prefix):
        depth = len(prefix)
        if depth == len(names):
            subst = dict(zip(names, prefix))
            yield tuple(subst.items()), instantiate(schema.template, subst)
            return
        for f in picks[depth]:
            yield from rec(prefix + (f,))

    yield from rec(())


def soundness_sweep(
    schemas,
    corpus,
    spec: EnumerationSpec,
    engine: str | None = None,
) -> SweepReport:
    """Bounded-search every corpus instantiation of every schema.

    A sound schema produces no violation; any countermodel-found verdict is
    collected with its substitution and witness.
    """
    started = time.perf_counter()
    schemas = list(schemas)
    corpus = tuple(corpus)
    checked = 0
    violations = []
    resolved = None
    for schema in schemas:
        for substitution, instance in schema_instances(schema, corpus):
            verdict = find_countermodel(instance, spec, engine)
            resolved = verdict.stats.engine
            checked += 1
            if verdict.status == "countermodel-found":
                violations.append(SweepViolation(schema.name, substitution, verdict))
    return SweepReport(
        schemas=tuple(s.name for s in schemas),
        corpus=corpus,
        spec=spec,
        engine=resolved or "none",
        instances_checked=checked,
        violations=tuple(violations),
        elapsed_s=time.perf_counter() - started,
    )
