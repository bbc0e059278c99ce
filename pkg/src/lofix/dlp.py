"""Disjunctive logic programming: fixpoint semantics, SLO-resolution, and
the set-abstraction bridge from the flat LO fragment.

Positive clauses are plain sets of atoms.  Interpretations are kept as
inclusion-minimal antichains whose members generate an upward-closed family
(anything implied by a member counts as known); the consequence step is
computed directly on the generators.  The abstraction collapses a multiset
to its underlying set, which is sound for every flat program and exact when
no clause body has more than one conjunct.

Concrete syntax: ``p ; q <- r , s.`` (``;`` disjunction, ``,`` conjunction),
unit clauses ``p ; q.``, comments with ``%``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterable, Optional, Sequence

from .multiset import Fact, Signature
from .symbolic import Antichain, saturate, sp_step
from .syntax import (
    Atom,
    Par,
    ParseError,
    Program,
    Clause,
    TOP,
    Top,
    With,
    LO,
    _Parser,
    flat_conjuncts,
    goal_atoms,
    is_flat,
)

PositiveClause = frozenset  # of atom indices

REFUTED = "refuted"
EXHAUSTED = "exhausted"
DEPTH_LIMIT = "depth_limit"


class TranslationError(ValueError):
    pass


@dataclass(frozen=True)
class DlpClause:
    head: PositiveClause
    body: tuple[PositiveClause, ...]

    def __post_init__(self):
        if not self.head:
            raise ValueError("DLP clause heads must be non-empty")


@dataclass(frozen=True)
class DlpProgram:
    sig: Signature
    clauses: tuple[DlpClause, ...]


def minimize(clauses: Iterable[PositiveClause]) -> frozenset[PositiveClause]:
    """Inclusion-minimal members (the canonical interpretation form)."""
    pool = set(clauses)
    return frozenset(
        c for c in pool if not any(d < c for d in pool)
    )


def dlp_subsumed(i: Iterable[PositiveClause], j: Iterable[PositiveClause]) -> bool:
    """Every member of i is implied by (i.e. contains) some member of j."""
    j = list(j)
    return all(any(b <= a for b in j) for a in i)


def clause_text(c: PositiveClause, sig: Signature) -> str:
    return " ; ".join(sig.names[i] for i in sorted(c)) if c else "<empty>"


def sorted_interp(i: Iterable[PositiveClause]) -> list[PositiveClause]:
    return sorted(i, key=lambda c: (len(c), sorted(c)))


# ---------------------------------------------------------------------------
# Parsing and printing
# ---------------------------------------------------------------------------

def parse_dlp(text: str) -> DlpProgram:
    p = _Parser(text)
    raw: list[tuple[list[str], list[list[str]]]] = []
    order: list[str] = []
    seen: set[str] = set()

    def note(name: str):
        if name not in seen:
            seen.add(name)
            order.append(name)

    # optional header fixing the signature (and admitting goal-only atoms)
    declared = False
    if p.peek().kind == "ident" and p.peek().text == "atoms":
        declared = True
        p.next()
        while p.peek().kind == "ident":
            note(p.next().text)
        p.expect("dot", "'.'")
        if not order:
            p.fail("atoms header declares no atoms")

    def atom_list(sep: str) -> list[str]:
        names = [p.expect("ident", "an atom").text]
        while p.peek().kind == sep:
            p.next()
            names.append(p.expect("ident", "an atom").text)
        return names

    while p.peek().kind != "eof":
        head = atom_list("semi")
        body: list[list[str]] = []
        if p.peek().kind == "arrow":
            p.next()
            body.append(atom_list("semi"))
            while p.peek().kind == "comma":
                p.next()
                body.append(atom_list("semi"))
        p.expect("dot", "'.'")
        for a in head:
            note(a)
        for disj in body:
            for a in disj:
                note(a)
        raw.append((head, body))

    if not order:
        raise ParseError("program declares no atoms", 1, 1)
    sig = Signature(order)
    clauses = []
    for head, body in raw:
        head_set = frozenset(sig.index(a) for a in head)
        if len(head_set) != len(head):
            raise ParseError("repeated atom in a clause head", 1, 1)
        disjuncts = []
        for disj in body:
            d = frozenset(sig.index(a) for a in disj)
            if len(d) != len(disj):
                raise ParseError("repeated atom in a body disjunct", 1, 1)
            disjuncts.append(d)
        clauses.append(DlpClause(head_set, tuple(disjuncts)))
    return DlpProgram(sig, tuple(clauses))


def parse_dlp_goal(text: str, sig: Signature) -> tuple[PositiveClause, ...]:
    """A ','-separated sequence of ';'-disjunctions of atoms."""
    p = _Parser(text)
    goal = []
    while True:
        atoms = [p.expect("ident", "an atom").text]
        while p.peek().kind == "semi":
            p.next()
            atoms.append(p.expect("ident", "an atom").text)
        goal.append(frozenset(sig.index(a) for a in atoms))
        if p.peek().kind != "comma":
            break
        p.next()
    p.expect("eof", "end of input")
    return tuple(goal)


def dlp_to_text(program: DlpProgram) -> str:
    lines = []
    for c in program.clauses:
        head = " ; ".join(program.sig.names[i] for i in sorted(c.head))
        if c.body:
            body = " , ".join(
                " ; ".join(program.sig.names[i] for i in sorted(d)) for d in c.body
            )
            lines.append(f"{head} <- {body}.")
        else:
            lines.append(f"{head}.")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Translation to and from the flat LO fragment
# ---------------------------------------------------------------------------

def translate(program: Program) -> DlpProgram:
    """Connective-for-connective image of a flat LO program.

    Fails on non-flat bodies and on repeated atoms in a head or body
    disjunct (head multisets must already be sets).
    """
    if not is_flat(program):
        raise TranslationError("program is not in the flat fragment")
    clauses = []
    for k, clause in enumerate(program.clauses, start=1):
        if any(n > 1 for n in clause.head.occ):
            raise TranslationError(
                f"clause {k}: repeated atom in head "
                f"({', '.join(program.sig.names[i] for i in clause.head.atoms())})"
            )
        disjuncts = []
        for conj in flat_conjuncts(clause.body):
            atoms = list(goal_atoms(conj))
            d = frozenset(atoms)
            if len(d) != len(atoms):
                raise TranslationError(f"clause {k}: repeated atom in a body disjunct")
            disjuncts.append(d)
        clauses.append(DlpClause(frozenset(clause.head.support()), tuple(disjuncts)))
    return DlpProgram(program.sig, tuple(clauses))


def untranslate(program: DlpProgram) -> Program:
    """The inverse embedding; translate(untranslate(d)) is the identity."""
    sig = program.sig
    clauses = []
    for c in program.clauses:
        occ = [0] * len(sig)
        for i in c.head:
            occ[i] = 1
        head = Fact(sig, tuple(occ))
        if not c.body:
            body = TOP
        else:
            disjuncts = [
                reduce(Par, [Atom(i) for i in sorted(d)])
                for d in c.body
            ]
            body = reduce(With, disjuncts)
        clauses.append(Clause(head, body))
    return Program(sig, tuple(clauses), LO)


# ---------------------------------------------------------------------------
# Fixpoint semantics
# ---------------------------------------------------------------------------

def tpd_step(program: DlpProgram,
             interp: Iterable[PositiveClause]) -> frozenset[PositiveClause]:
    """One consequence step on antichain generators, minimized.

    For each body disjunct D the interpretation supplies any known clause E;
    the contribution is E minus D (the atoms E needs beyond what D grants),
    matching membership of D-or-anything in the upward closure of E.  Unit
    clauses contribute their heads outright.
    """
    gens = sorted_interp(interp)
    out: set[PositiveClause] = set()
    for clause in program.clauses:
        if not clause.body:
            out.add(clause.head)
            continue
        pools = [[e - d for e in gens] for d in clause.body]
        for combo in product(*pools):
            out.add(clause.head.union(*combo))
    return minimize(out)


def dlp_lfp(program: DlpProgram) -> tuple[frozenset[PositiveClause], int]:
    """Least fixpoint by accumulate-and-minimize; always terminates."""
    interp: frozenset[PositiveClause] = frozenset()
    rounds = 0
    while True:
        new = tpd_step(program, interp)
        rounds += 1
        if dlp_subsumed(new, interp):
            return interp, rounds
        interp = minimize(interp | new)


# ---------------------------------------------------------------------------
# SLO-resolution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SloResult:
    status: str
    steps: Optional[int] = None


def slo_refute(program: DlpProgram, goal: Sequence[PositiveClause],
               depth: int = 25) -> SloResult:
    """Top-down refutation search by iterative deepening on resolution steps.

    The selected clause is the leftmost one with an applicable program
    clause; program clauses are tried in order.  A refutation discharges
    every goal clause (a unit step removes the selected clause outright).
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    goal = tuple(goal)
    for bound in range(0, depth + 1):
        found, hit = _slo_search(program, goal, bound, frozenset())
        if found is not None:
            return SloResult(REFUTED, found)
        if not hit:
            return SloResult(EXHAUSTED)
    return SloResult(DEPTH_LIMIT)


def _slo_search(program: DlpProgram, goal: tuple[PositiveClause, ...],
                depth: int, on_path: frozenset,
                ) -> tuple[Optional[int], bool]:
    if not goal:
        return 0, False
    if depth <= 0:
        return None, True
    # A goal clause only ever grows, so one without an applicable program
    # clause now can never be discharged: the goal is irrefutable.
    for cm in goal:
        if not any(c.head <= cm for c in program.clauses):
            return None, False
    cm = goal[0]   # leftmost selection; every clause is applicable here
    hit_any = False
    for clause in program.clauses:
        if not clause.head <= cm:
            continue
        new_goal = (
            tuple(d | cm for d in clause.body) + tuple(goal[1:])
        )
        if new_goal in on_path:     # no progress; revisiting loops forever
            continue
        sub, hit = _slo_search(program, new_goal, depth - 1,
                               on_path | {new_goal})
        if sub is not None:
            return sub + 1, False
        hit_any = hit_any or hit
    return None, hit_any


# ---------------------------------------------------------------------------
# Abstraction from LO
# ---------------------------------------------------------------------------

def abstract(fact: Fact) -> PositiveClause:
    """Forget multiplicities: the underlying set of a multiset."""
    return fact.support()


def abstract_interp(i: Antichain) -> frozenset[PositiveClause]:
    return minimize(abstract(f) for f in i)


@dataclass(frozen=True)
class CompareReport:
    sound: bool
    complete: Optional[bool]       # None when some body has 2+ conjuncts
    witness: Optional[str] = None


def compare(program: Program) -> CompareReport:
    """Check the abstraction's soundness (always expected) and, for
    programs without body conjunctions, exactness of the fixpoints."""
    dlp = translate(program)
    alpha = abstract_interp(saturate(program).fixpoint)
    lfp, _ = dlp_lfp(dlp)

    sound = dlp_subsumed(alpha, lfp)
    witness = None
    if not sound:
        bad = next(c for c in sorted_interp(alpha)
                   if not any(b <= c for b in lfp))
        witness = f"unabstracted consequence {clause_text(bad, program.sig)}"

    one_conjunct = all(
        len(flat_conjuncts(c.body)) <= 1 for c in program.clauses
    )
    complete: Optional[bool] = None
    if one_conjunct:
        complete = alpha == lfp
        if not complete and witness is None:
            extra = sorted_interp(lfp - alpha) or sorted_interp(alpha - lfp)
            witness = f"fixpoints differ at {clause_text(extra[0], program.sig)}"
    return CompareReport(sound, complete, witness)
