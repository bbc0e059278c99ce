"""Ground bottom-up semantics over explicitly enumerated interpretations.

This module executes the satisfiability judgment and the one-step consequence
operator on finite, size-capped sets of facts.  It is deliberately slow and
direct: candidate output facts are enumerated and *checked*, never solved
for, so it stays independent of the symbolic engines it validates.

A capped least fixpoint may omit small provable facts whose only derivations
pass through intermediate facts larger than the cap; callers comparing
against the symbolic engine must account for that boundary (see
``tests/test_acceptance.py``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .multiset import Fact, enumerate_facts
from .syntax import Atom, Context, One, Par, Program, Top, With


@dataclass(frozen=True)
class GroundInterp:
    """A finite set of facts, all of total size <= cap."""

    facts: frozenset[Fact]
    cap: int

    def __post_init__(self):
        for f in self.facts:
            if f.total() > self.cap:
                raise ValueError(f"fact {f} exceeds the size cap {self.cap}")

    def __contains__(self, fact: Fact) -> bool:
        return fact in self.facts

    def __len__(self) -> int:
        return len(self.facts)

    def sorted_facts(self) -> list[Fact]:
        return sorted(self.facts)


def sat_ground(facts: frozenset[Fact], delta: Context, a: Fact,
               dialect: str = "lo1") -> bool:
    """The checking judgment: does a + delta hold in the interpretation?

    Rules: top absorbs everything; an all-atomic context holds iff its fact
    plus the output fact is a member; par flattens; with needs both branches
    with the same output; '1' (LO1) holds only in the lone-'1' context with
    the empty output.
    """
    if delta.contains_top():
        return True
    if delta.is_fact():
        return delta.to_fact().union(a) in facts
    if delta.is_one_only():
        return a.is_empty()
    g = delta.first_compound()
    if g is None:
        # a mixture of atoms and '1': no rule applies
        return False
    if isinstance(g, Par):
        return sat_ground(facts, delta.replace(g, g.left, g.right), a, dialect)
    assert isinstance(g, With)
    rest = delta.replace(g, g.left)
    if not sat_ground(facts, rest, a, dialect):
        return False
    return sat_ground(facts, delta.replace(g, g.right), a, dialect)


def tp_step(program: Program, interp: GroundInterp) -> GroundInterp:
    """One cumulative step of the immediate-consequence operator.

    Candidate outputs range over every fact of size <= cap; results whose
    head extension exceeds the cap are dropped.  The result includes the
    input so iteration is a Kleene chain on a finite lattice; the
    non-cumulative step is recovered as ``tp_step(p, i).facts - i.facts``.
    """
    out = set(interp.facts)
    candidates = enumerate_facts(program.sig, interp.cap)
    for clause in program.clauses:
        body = Context(program.sig, [clause.body])
        for a in candidates:
            if clause.head.total() + a.total() > interp.cap:
                continue
            if sat_ground(interp.facts, body, a):
                out.add(clause.head.union(a))
    return GroundInterp(frozenset(out), interp.cap)


def lfp_bounded(program: Program, cap: int) -> GroundInterp:
    """Least fixpoint of tp_step on the lattice of fact sets of size <= cap."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    interp = GroundInterp(frozenset(), cap)
    while True:
        nxt = tp_step(program, interp)
        if nxt.facts == interp.facts:
            return interp
        interp = nxt
