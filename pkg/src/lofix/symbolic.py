"""Symbolic LO semantics: antichains of minimal facts and their saturation.

An antichain of pairwise-incomparable facts finitely represents the
upward-closed set generated by its members.  The judgment ``judge`` computes
every output fact derivable for a context (outputs need not all be minimal;
pruning happens once, in ``sp_step``), and ``saturate`` iterates the
symbolic step to the always-reachable fixpoint.  ``query`` then decides LO
provability of an arbitrary goal context.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .multiset import Fact
from .syntax import Context, Par, Program, With, LO


class Antichain:
    """A set of pairwise incomparable facts, kept in deterministic order."""

    __slots__ = ("elems",)

    def __init__(self, elems: Iterable[Fact] = ()):
        self.elems = _minimal(elems)

    def __iter__(self) -> Iterator[Fact]:
        return iter(self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Antichain) and self.elems == other.elems

    def __hash__(self) -> int:
        return hash(self.elems)

    def __str__(self) -> str:
        return "{" + ", ".join(str(f) for f in self.elems) + "}"

    __repr__ = __str__

    def contains_leq(self, fact: Fact) -> bool:
        """Membership of fact in the denoted upward-closed set."""
        return any(a.leq(fact) for a in self.elems)

    def union(self, facts: Iterable[Fact]) -> "Antichain":
        return Antichain(tuple(self.elems) + tuple(facts))


def _minimal(facts: Iterable[Fact]) -> tuple[Fact, ...]:
    """The unique set of minimal elements, sorted for determinism."""
    pool = sorted(set(facts))
    keep = []
    for f in pool:
        if not any(g.leq(f) for g in pool if g != f):
            keep.append(f)
    return tuple(keep)


def insert_minimal(i: Antichain, a: Fact) -> Antichain:
    """Add a fact, dropping it if covered and evicting anything it covers."""
    if i.contains_leq(a):
        return i
    return Antichain([e for e in i.elems if not a.leq(e)] + [a])


def subsumed(i: Antichain, j: Antichain) -> bool:
    """The interpretation order: every element of i is covered by some of j."""
    return all(j.contains_leq(b) for b in i.elems)


def judge(i: Antichain, delta: Context) -> frozenset[Fact]:
    """All output facts derivable for the context from the interpretation.

    top yields the empty fact; an all-atomic context yields each member
    minus the context's fact; par flattens; with combines the two branch
    outputs with the pointwise least upper bound.
    """
    sig = delta.sig
    if delta.contains_top():
        return frozenset([sig.empty()])
    if delta.is_fact():
        fact = delta.to_fact()
        return frozenset(b.diff(fact) for b in i.elems)
    g = delta.first_compound()
    if g is None:
        raise ValueError(f"context {delta} has no LO rule (is this an LO1 goal?)")
    if isinstance(g, Par):
        return judge(i, delta.replace(g, g.left, g.right))
    assert isinstance(g, With)
    left = judge(i, delta.replace(g, g.left))
    if not left:
        return frozenset()
    right = judge(i, delta.replace(g, g.right))
    return frozenset(x.lub(y) for x in left for y in right)


def sp_step(program: Program, i: Antichain) -> Antichain:
    """One symbolic step: heads plus judged outputs, antichain-normalized."""
    if program.dialect != LO:
        raise ValueError("sp_step handles LO programs only; use the LO1 engine")
    out: list[Fact] = []
    for clause in program.clauses:
        body = Context(program.sig, [clause.body])
        for a in judge(i, body):
            out.append(clause.head.union(a))
    return Antichain(out)


@dataclass(frozen=True)
class SaturationResult:
    fixpoint: Antichain
    iterations: int
    trace: tuple[Antichain, ...]   # accumulated antichain after each round


def saturate(program: Program, max_rounds: int = 10**6) -> SaturationResult:
    """Iterate sp_step on the accumulated antichain until nothing new appears.

    Each round applies the step to the whole accumulated interpretation (an
    increasing chain, so this reaches the same fixpoint as stepping only the
    newest layer) and stops when the step output is subsumed.  Termination
    is guaranteed: multiset inclusion is a well-quasi-order, so no infinite
    strictly-growing chain of antichains exists.  The round limit is a
    watchdog only.
    """
    acc = Antichain()
    trace: list[Antichain] = []
    rounds = 0
    while rounds < max_rounds:
        new = sp_step(program, acc)
        rounds += 1
        if subsumed(new, acc):
            return SaturationResult(acc, rounds, tuple(trace))
        acc = acc.union(new)
        trace.append(acc)
    raise RuntimeError(f"saturation watchdog tripped after {max_rounds} rounds")


def query(sat: Antichain, goal: Context) -> bool:
    """Provability of a goal context against a saturated interpretation."""
    empty = goal.sig.empty()
    return empty in judge(sat, goal)
