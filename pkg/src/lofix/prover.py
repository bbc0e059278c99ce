"""Goal-driven sequent prover for LO and LO1, with an independent checker.

The search follows the uniform-proof discipline: compound goals are fully
decomposed (top and '1' axioms first, then par, then with) before any
backchaining step, and backchaining applies only to all-atomic contexts.
Iterative deepening on tree height separates a genuinely exhausted finite
search space from one cut off by the depth bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .syntax import Atom, Context, Par, Program, With, LO1, goal_to_text

PROVED = "proved"
EXHAUSTED = "exhausted"
DEPTH_LIMIT = "depth_limit"

TOP_R = "top"
ONE_R = "one"
PAR_R = "par"
WITH_R = "with"
BC = "bc"


@dataclass(frozen=True)
class ProofTree:
    conclusion: Context
    rule: str
    clause: Optional[int]          # 0-based program clause, for BC nodes
    premises: tuple["ProofTree", ...]

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def to_text(self, indent: int = 0) -> str:
        label = self.rule if self.clause is None else f"bc({self.clause + 1})"
        lines = ["  " * indent + f"{label} |- {self.conclusion}"]
        lines.extend(p.to_text(indent + 1) for p in self.premises)
        return "\n".join(lines)

    def to_json(self) -> dict:
        node: dict = {"rule": self.rule, "conclusion": str(self.conclusion)}
        if self.clause is not None:
            node["clause"] = self.clause + 1
        node["premises"] = [p.to_json() for p in self.premises]
        return node


@dataclass(frozen=True)
class ProveResult:
    status: str
    tree: Optional[ProofTree] = None
    depth: Optional[int] = None    # depth at which the proof was found


def prove(program: Program, goal: Context, depth_limit: int = 20) -> ProveResult:
    """Search for a proof by iterative deepening up to depth_limit."""
    if depth_limit < 1:
        raise ValueError("depth_limit must be at least 1")
    for depth in range(1, depth_limit + 1):
        tree, hit_bound = _search(program, goal, depth)
        if tree is not None:
            return ProveResult(PROVED, tree, depth)
        if not hit_bound:
            # The whole finite space fit under this bound: a true negative.
            return ProveResult(EXHAUSTED)
    return ProveResult(DEPTH_LIMIT)


def _search(program: Program, delta: Context,
            depth: int) -> tuple[Optional[ProofTree], bool]:
    """Depth-bounded search; the flag reports whether the bound cut a branch."""
    if depth <= 0:
        return None, True
    if delta.contains_top():
        return ProofTree(delta, TOP_R, None, ()), False
    if program.dialect == LO1 and delta.is_one_only():
        return ProofTree(delta, ONE_R, None, ()), False

    g = delta.first_compound()
    if g is not None:
        if isinstance(g, Par):
            sub, hit = _search(program, delta.replace(g, g.left, g.right), depth - 1)
            if sub is None:
                return None, hit
            return ProofTree(delta, PAR_R, None, (sub,)), False
        assert isinstance(g, With)
        left, hit_l = _search(program, delta.replace(g, g.left), depth - 1)
        if left is None:
            return None, hit_l
        right, hit_r = _search(program, delta.replace(g, g.right), depth - 1)
        if right is None:
            return None, hit_l or hit_r
        return ProofTree(delta, WITH_R, None, (left, right)), False

    if not delta.is_fact():
        return None, False   # '1' mixed with other goals: no rule applies
    fact = delta.to_fact()
    hit_any = False
    for idx, clause in enumerate(program.clauses):
        if not clause.head.leq(fact):
            continue
        remainder = fact.diff(clause.head)
        premise_ctx = Context(
            delta.sig, [clause.body] + [Atom(i) for i in remainder.atoms()]
        )
        sub, hit = _search(program, premise_ctx, depth - 1)
        if sub is not None:
            return ProofTree(delta, BC, idx, (sub,)), False
        hit_any = hit_any or hit
    return None, hit_any


# ---------------------------------------------------------------------------
# Independent proof checking
# ---------------------------------------------------------------------------

def check(program: Program, tree: ProofTree) -> bool:
    """Local validity of every node, leaves included."""
    return why_invalid(program, tree) is None


def why_invalid(program: Program, tree: ProofTree,
                path: str = "root") -> Optional[str]:
    """The first invalid node's path and reason, or None for a valid tree."""
    delta = tree.conclusion
    if tree.rule == TOP_R:
        if not delta.contains_top():
            return f"{path}: top axiom on a context without top"
        if tree.premises:
            return f"{path}: top axiom with premises"
    elif tree.rule == ONE_R:
        if program.dialect != LO1:
            return f"{path}: '1' axiom in an LO program"
        if not delta.is_one_only():
            return f"{path}: '1' axiom needs the lone-'1' context"
        if tree.premises:
            return f"{path}: '1' axiom with premises"
    elif tree.rule == PAR_R:
        if len(tree.premises) != 1:
            return f"{path}: par rule needs exactly one premise"
        if not _matches_par(delta, tree.premises[0].conclusion):
            return f"{path}: premise does not flatten any par goal"
    elif tree.rule == WITH_R:
        if len(tree.premises) != 2:
            return f"{path}: with rule needs exactly two premises"
        if not _matches_with(delta, tree.premises[0].conclusion,
                             tree.premises[1].conclusion):
            return f"{path}: premises do not split any with goal"
    elif tree.rule == BC:
        if tree.clause is None or not 0 <= tree.clause < len(program.clauses):
            return f"{path}: backchaining on a missing clause"
        clause = program.clauses[tree.clause]
        if not delta.is_fact():
            return f"{path}: backchaining on a non-atomic context"
        fact = delta.to_fact()
        if not clause.head.leq(fact):
            return f"{path}: clause head is not contained in the context"
        if len(tree.premises) != 1:
            return f"{path}: backchaining needs exactly one premise"
        remainder = fact.diff(clause.head)
        expected = Context(
            delta.sig, [clause.body] + [Atom(i) for i in remainder.atoms()]
        )
        if tree.premises[0].conclusion != expected:
            return f"{path}: premise is not body plus remainder"
    else:
        return f"{path}: unknown rule {tree.rule!r}"

    for k, premise in enumerate(tree.premises):
        err = why_invalid(program, premise, f"{path}.{k}")
        if err is not None:
            return err
    return None


def _matches_par(delta: Context, premise: Context) -> bool:
    for g in set(delta.goals):
        if isinstance(g, Par) and delta.replace(g, g.left, g.right) == premise:
            return True
    return False


def _matches_with(delta: Context, left: Context, right: Context) -> bool:
    for g in set(delta.goals):
        if (isinstance(g, With)
                and delta.replace(g, g.left) == left
                and delta.replace(g, g.right) == right):
            return True
    return False
