"""Counting-constraint semantics for LO1.

A symbolic state is a conjunction of per-atom counting atoms, one per
signature position, each either an equality (count = c) or a lower bound
(count >= c).  This class is closed under the three operations the LO1
rules need:

    conj        pointwise conjunction   (the role the pointwise max had in LO)
    shift_down  remove a fact's occurrences from every solution
    shift_up    add a fact's occurrences to every solution

Unsatisfiability is signalled by returning None, never stored.  Bounded
saturation prunes with the subsumption order and reports honestly whether
the fixpoint was reached: LO1 provability is only semi-decidable, so an
iteration bound is a normal outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .multiset import MAX_COUNT, CountLimitError, Fact, Signature
from .syntax import Context, Par, Program, With

EQ = "eq"
GEQ = "geq"

FIXPOINT = "fixpoint"
ITERATION_BOUND = "iteration_bound"

PROVABLE = "provable"
NOT_PROVABLE = "not_provable"
UNKNOWN = "unknown"


class CountConstraint:
    """A satisfiable conjunction of per-atom EQ/GEQ counting atoms."""

    __slots__ = ("sig", "entries", "_hash")

    def __init__(self, sig: Signature, entries: Iterable[tuple[str, int]]):
        entries = tuple(entries)
        if len(entries) != len(sig):
            raise ValueError("constraint must have one entry per atom")
        for mode, value in entries:
            if mode not in (EQ, GEQ):
                raise ValueError(f"unknown mode {mode!r}")
            if value < 0:
                raise ValueError("constraint values must be non-negative")
            if value > MAX_COUNT:
                raise CountLimitError(f"constraint value {value} exceeds {MAX_COUNT}")
        self.sig = sig
        self.entries = entries
        self._hash = hash(entries)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CountConstraint)
            and self.entries == other.entries
            and self.sig == other.sig
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "CountConstraint") -> bool:
        # Deterministic output order only.
        return self._key() < other._key()

    def _key(self):
        return tuple((0 if m == EQ else 1, v) for m, v in self.entries)

    def __str__(self) -> str:
        ops = {EQ: "=", GEQ: ">="}
        return " & ".join(
            f"{name}{ops[m]}{v}"
            for name, (m, v) in zip(self.sig.names, self.entries)
        )

    __repr__ = __str__

    def to_json(self) -> list[dict]:
        return [
            {"atom": name, "op": m, "value": v}
            for name, (m, v) in zip(self.sig.names, self.entries)
        ]

    # -- constructors -------------------------------------------------------

    @classmethod
    def exact(cls, fact: Fact) -> "CountConstraint":
        """All-equalities constraint whose unique solution is the fact."""
        return cls(fact.sig, tuple((EQ, k) for k in fact.occ))

    @classmethod
    def upward(cls, fact: Fact) -> "CountConstraint":
        """All-lower-bounds constraint denoting the fact's upward closure."""
        return cls(fact.sig, tuple((GEQ, k) for k in fact.occ))

    @classmethod
    def anything(cls, sig: Signature) -> "CountConstraint":
        """The trivial constraint (every count >= 0); the top rule's output."""
        return cls(sig, tuple((GEQ, 0) for _ in sig.names))

    @classmethod
    def only_empty(cls, sig: Signature) -> "CountConstraint":
        """Every count = 0; the '1' rule's output."""
        return cls(sig, tuple((EQ, 0) for _ in sig.names))


def conj(phi: CountConstraint, psi: CountConstraint) -> Optional[CountConstraint]:
    """Pointwise conjunction; None when some atom becomes unsatisfiable."""
    out = []
    for (m1, v1), (m2, v2) in zip(phi.entries, psi.entries):
        if m1 == GEQ and m2 == GEQ:
            out.append((GEQ, max(v1, v2)))
        elif m1 == EQ and m2 == EQ:
            if v1 != v2:
                return None
            out.append((EQ, v1))
        else:
            eq_v = v1 if m1 == EQ else v2
            geq_v = v2 if m1 == EQ else v1
            if eq_v < geq_v:
                return None
            out.append((EQ, eq_v))
    return CountConstraint(phi.sig, out)


def shift_down(phi: CountConstraint, a: Fact) -> Optional[CountConstraint]:
    """Remove a's occurrences from every solution; None if nothing survives.

    An equality drops below zero only when the removed count exceeds it; a
    lower bound just clamps at zero (larger solutions absorb the removal).
    """
    out = []
    for (m, v), k in zip(phi.entries, a.occ):
        if m == EQ:
            if v < k:
                return None
            out.append((EQ, v - k))
        else:
            out.append((GEQ, max(0, v - k)))
    return CountConstraint(phi.sig, out)


def shift_up(phi: CountConstraint, a: Fact) -> CountConstraint:
    """Add a's occurrences to every solution (total; mode is preserved)."""
    return CountConstraint(
        phi.sig,
        tuple((m, v + k) for (m, v), k in zip(phi.entries, a.occ)),
    )


def entails(phi: CountConstraint, psi: CountConstraint) -> bool:
    """True iff phi subsumes psi, i.e. every solution of psi solves phi."""
    for (m1, v1), (m2, v2) in zip(phi.entries, psi.entries):
        if m1 == GEQ:
            if v2 < v1:   # covers both psi modes: its values start at v2
                return False
        else:
            if m2 != EQ or v2 != v1:
                return False
    return True


def member(phi: CountConstraint, a: Fact) -> bool:
    """Pointwise solution check."""
    for (m, v), k in zip(phi.entries, a.occ):
        if m == EQ:
            if k != v:
                return False
        elif k < v:
            return False
    return True


def admits_empty(phi: CountConstraint) -> bool:
    return all(v == 0 for _, v in phi.entries)


class ConstraintSet:
    """A subsumption-pruned, deterministically ordered set of constraints."""

    __slots__ = ("elems",)

    def __init__(self, elems: Iterable[CountConstraint] = ()):
        self.elems = _pruned(elems)

    def __iter__(self) -> Iterator[CountConstraint]:
        return iter(self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ConstraintSet) and self.elems == other.elems

    def __hash__(self) -> int:
        return hash(self.elems)

    def __str__(self) -> str:
        return "{" + "; ".join(str(c) for c in self.elems) + "}"

    __repr__ = __str__

    def union(self, extra: Iterable[CountConstraint]) -> "ConstraintSet":
        return ConstraintSet(tuple(self.elems) + tuple(extra))

    def admits(self, fact: Fact) -> bool:
        return any(member(phi, fact) for phi in self.elems)


def _pruned(elems: Iterable[CountConstraint]) -> tuple[CountConstraint, ...]:
    pool = sorted(set(elems))
    keep = []
    for phi in pool:
        if not any(entails(other, phi) for other in pool if other != phi):
            keep.append(phi)
    return tuple(keep)


def set_subsumed(i: ConstraintSet, j: ConstraintSet) -> bool:
    """Pointwise subsumption of constraint sets (the saturation stop test)."""
    return all(any(entails(psi, phi) for psi in j.elems) for phi in i.elems)


# ---------------------------------------------------------------------------
# The LO1 judgment and saturation
# ---------------------------------------------------------------------------

def judge_one(i: ConstraintSet, delta: Context) -> list[CountConstraint]:
    """All satisfiable constraints derivable for the context.

    Mirrors the LO judgment with constraints in place of facts: '1' yields
    the all-zero equalities (only in the lone-'1' context), top yields the
    trivial constraint, an atomic context shifts every member down, par
    flattens, and with conjoins branch results (dropping unsatisfiable
    combinations).
    """
    sig = delta.sig
    if delta.contains_top():
        return [CountConstraint.anything(sig)]
    if delta.is_one_only():
        return [CountConstraint.only_empty(sig)]
    if delta.is_fact():
        fact = delta.to_fact()
        out = []
        for psi in i.elems:
            phi = shift_down(psi, fact)
            if phi is not None:
                out.append(phi)
        return _dedup(out)
    g = delta.first_compound()
    if g is None:
        return []   # '1' mixed with other goals: no rule applies
    if isinstance(g, Par):
        return judge_one(i, delta.replace(g, g.left, g.right))
    assert isinstance(g, With)
    left = judge_one(i, delta.replace(g, g.left))
    if not left:
        return []
    right = judge_one(i, delta.replace(g, g.right))
    out = []
    for phi1 in left:
        for phi2 in right:
            phi = conj(phi1, phi2)
            if phi is not None:
                out.append(phi)
    return _dedup(out)


def _dedup(elems: list[CountConstraint]) -> list[CountConstraint]:
    return sorted(set(elems))


def sp1_step(program: Program, i: ConstraintSet) -> ConstraintSet:
    """One symbolic LO1 step: judged bodies shifted up by their heads."""
    out: list[CountConstraint] = []
    for clause in program.clauses:
        body = Context(program.sig, [clause.body])
        for psi in judge_one(i, body):
            out.append(shift_up(psi, clause.head))
    return ConstraintSet(out)


@dataclass(frozen=True)
class Lo1Result:
    status: str                    # FIXPOINT or ITERATION_BOUND
    constraints: ConstraintSet
    iterations: int
    trace: tuple[ConstraintSet, ...]


def saturate_one(program: Program, max_iters: int = 100) -> Lo1Result:
    """Bounded saturation with subsumption pruning.

    Reports FIXPOINT when a step adds nothing new (the result then denotes
    the least fixpoint exactly) and ITERATION_BOUND otherwise (the result
    under-approximates).  There is no termination guarantee to be had: LO1
    can count, and its set of provable facts is not computable in general.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    acc = ConstraintSet()
    trace: list[ConstraintSet] = []
    rounds = 0
    while rounds < max_iters:
        new = sp1_step(program, acc)
        rounds += 1
        if set_subsumed(new, acc):
            return Lo1Result(FIXPOINT, acc, rounds, tuple(trace))
        acc = acc.union(new)
        trace.append(acc)
    return Lo1Result(ITERATION_BOUND, acc, rounds, tuple(trace))


def query_one(result: Lo1Result, goal: Context) -> str:
    """Three-valued provability: provable / not_provable / unknown.

    A goal is provable when some judged constraint admits the all-zero
    solution.  A negative answer is definite only on a true fixpoint;
    against a truncated result it degrades to unknown.
    """
    for phi in judge_one(result.constraints, goal):
        if admits_empty(phi):
            return PROVABLE
    return NOT_PROVABLE if result.status == FIXPOINT else UNKNOWN
