"""Petri nets with optional transfer arcs, encoded as LO / LO1 programs.

Coverability is answered by backward saturation: transitions become clauses
whose head is the pre-set and whose body is the post-set, each target fact
becomes a unit clause (its upward closure is the bad-state set), and the
initial marking is tested for membership in the saturated result.  A bounded
forward exploration serves as the independent oracle.

A transfer arc (move *all* tokens from one place to another) needs LO1: the
arc expands to a token-by-token move loop guarded by a completion check that
consumes every other place and then certifies emptiness with '1'.  Fresh
control atoms trans_k / check_k / done_k drive the protocol.  Two caveats
are inherent to that encoding and documented here rather than hidden: the
done_k token left behind by a completed transfer blocks the emptiness check
of any *later* transfer firing (backward answers are exact only up to one
firing per trace), and a target can be observed mid-transfer, which is the
token-by-token rather than the atomic reading of the arc.

Net file format (one directive per line, '#' or '%' comments):

    place a b c lock
    trans t1 pre a:1 lock:1 post c:2
    transfer t2 from a to b
    init a:2 c:1
    target c:3
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Optional

from .constraints import FIXPOINT, saturate_one
from .multiset import Fact, Signature
from .symbolic import saturate
from .syntax import Atom, Clause, Context, ONE, Par, Program, TOP, With, LO, LO1

COVERED = "covered"
NOT_COVERED = "not_covered"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Transition:
    name: str
    pre: Fact
    post: Fact


@dataclass(frozen=True)
class Transfer:
    name: str
    source: int
    target: int

    def __post_init__(self):
        if self.source == self.target:
            raise ValueError(f"transfer {self.name} moves a place onto itself")


@dataclass(frozen=True)
class PetriNet:
    places: Signature
    transitions: tuple[Transition, ...]
    transfers: tuple[Transfer, ...]
    initial: Fact
    targets: tuple[Fact, ...]


class NetFormatError(ValueError):
    pass


def parse_net(text: str) -> PetriNet:
    places: Optional[Signature] = None
    transitions: list[Transition] = []
    transfers: list[Transfer] = []
    initial: Optional[Fact] = None
    targets: list[Fact] = []

    def fact_from_pairs(tokens: list[str], lineno: int) -> Fact:
        assert places is not None
        counts: dict[str, int] = {}
        for tok in tokens:
            name, _, num = tok.partition(":")
            if name not in places:
                raise NetFormatError(f"line {lineno}: unknown place {name!r}")
            k = 1
            if num:
                if not num.isdigit():
                    raise NetFormatError(f"line {lineno}: bad count in {tok!r}")
                k = int(num)
            counts[name] = counts.get(name, 0) + k
        return places.fact_of(counts)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split("%", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        kind = words[0]
        if kind == "place":
            if places is not None:
                raise NetFormatError(f"line {lineno}: duplicate place directive")
            if len(words) < 2:
                raise NetFormatError(f"line {lineno}: place directive names no places")
            places = Signature(words[1:])
            continue
        if places is None:
            raise NetFormatError(f"line {lineno}: places must be declared first")
        if kind == "trans":
            if len(words) < 3 or words[2] != "pre" or "post" not in words:
                raise NetFormatError(
                    f"line {lineno}: expected 'trans NAME pre ... post ...'"
                )
            split = words.index("post")
            pre = fact_from_pairs(words[3:split], lineno)
            post = fact_from_pairs(words[split + 1:], lineno)
            transitions.append(Transition(words[1], pre, post))
        elif kind == "transfer":
            if len(words) != 6 or words[2] != "from" or words[4] != "to":
                raise NetFormatError(
                    f"line {lineno}: expected 'transfer NAME from P to Q'"
                )
            for p in (words[3], words[5]):
                if p not in places:
                    raise NetFormatError(f"line {lineno}: unknown place {p!r}")
            transfers.append(
                Transfer(words[1], places.index(words[3]), places.index(words[5]))
            )
        elif kind == "init":
            if initial is not None:
                raise NetFormatError(f"line {lineno}: duplicate init directive")
            initial = fact_from_pairs(words[1:], lineno)
        elif kind == "target":
            targets.append(fact_from_pairs(words[1:], lineno))
        else:
            raise NetFormatError(f"line {lineno}: unknown directive {kind!r}")

    if places is None:
        raise NetFormatError("net declares no places")
    if initial is None:
        initial = places.empty()
    return PetriNet(places, tuple(transitions), tuple(transfers),
                    initial, tuple(targets))


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

def _par_of(fact: Fact):
    return reduce(Par, [Atom(i) for i in fact.atoms()])


def encode(net: PetriNet, *, strict: bool = False,
           done_closure: bool = True) -> Program:
    """The LO / LO1 image of a net, targets included as unit clauses.

    Empty pre-sets are rejected (clause heads cannot be empty).  Empty
    post-sets are rejected unless strict consumption is requested, in which
    case the body is '1' (the firing must consume the whole marking); a top
    body would instead succeed in any context and misread the transition.
    done_closure controls the ``done_k <- top`` clauses that let a proof
    stop once a transfer completes; coverability turns them off, since with
    them every transfer-completing marking is provable no matter the target.
    """
    sig, n_places = _encoded_signature(net)
    clauses: list[Clause] = []
    dialect = LO

    def embed(fact: Fact) -> Fact:
        return Fact(sig, fact.occ + (0,) * (len(sig) - n_places))

    for t in net.transitions:
        if t.pre.is_empty():
            raise ValueError(
                f"transition {t.name}: empty pre-set has no clause head"
            )
        if t.post.is_empty():
            if not strict:
                raise ValueError(
                    f"transition {t.name}: empty post-set; body top would "
                    "succeed anywhere and body 1 demands an empty remainder "
                    "-- re-run with strict consumption to choose the latter"
                )
            clauses.append(Clause(embed(t.pre), ONE))
            dialect = LO1
        else:
            clauses.append(Clause(embed(t.pre), _par_of(embed(t.post))))

    for k, tr in enumerate(net.transfers, start=1):
        dialect = LO1
        trans_i = sig.index(f"trans_{k}")
        check_i = sig.index(f"check_{k}")
        done_i = sig.index(f"done_{k}")
        dst = Atom(tr.target)
        move_head = sig.fact(net.places.names[tr.source], f"trans_{k}")
        clauses.append(Clause(move_head, Par(dst, Atom(trans_i))))
        clauses.append(
            Clause(sig.fact(f"trans_{k}"), With(Atom(done_i), Atom(check_i)))
        )
        for p in range(n_places):
            if p == tr.source:
                continue
            head = sig.fact(f"check_{k}", net.places.names[p])
            clauses.append(Clause(head, Atom(check_i)))
        clauses.append(Clause(sig.fact(f"check_{k}"), ONE))
        if done_closure:
            clauses.append(Clause(sig.fact(f"done_{k}"), TOP))

    for f in net.targets:
        if f.is_empty():
            raise ValueError("target markings must be non-empty")
        clauses.append(Clause(embed(f), TOP))

    return Program(sig, tuple(clauses), dialect)


def _encoded_signature(net: PetriNet) -> tuple[Signature, int]:
    names = list(net.places.names)
    for k in range(1, len(net.transfers) + 1):
        for fresh in (f"trans_{k}", f"check_{k}", f"done_{k}"):
            if fresh in net.places:
                raise ValueError(
                    f"place name {fresh!r} collides with a control atom"
                )
            names.append(fresh)
    return Signature(names), len(net.places)


def embed_marking(net: PetriNet, program: Program, marking: Fact,
                  *controls: str) -> Fact:
    """A place marking as a fact of the encoded program's signature."""
    pad = Fact(program.sig, marking.occ + (0,) * (len(program.sig) - len(net.places)))
    return pad.union(program.sig.fact(*controls)) if controls else pad


# ---------------------------------------------------------------------------
# Coverability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverResult:
    status: str
    iterations: int


def cover(net: PetriNet, max_iters: int = 200, *, strict: bool = False) -> CoverResult:
    """Backward coverability of the targets from the initial marking.

    Transfer-free nets saturate in the LO engine, which always terminates,
    so the answer is definite.  With transfers (or strict empty posts) the
    LO1 engine runs under an iteration bound: a positive answer is still
    definite (the symbolic states under-approximate), a negative one is
    definite only at a true fixpoint, and unknown otherwise.  Each transfer
    is additionally probed with its trans_k token alongside the plain
    marking, since nothing else can put the encoding into transfer mode.
    """
    if not net.targets:
        raise ValueError("cover needs at least one target marking")
    program = encode(net, strict=strict, done_closure=False)

    if program.dialect == LO:
        res = saturate(program)
        init = embed_marking(net, program, net.initial)
        status = COVERED if res.fixpoint.contains_leq(init) else NOT_COVERED
        return CoverResult(status, res.iterations)

    res1 = saturate_one(program, max_iters)
    probes = [embed_marking(net, program, net.initial)]
    for k in range(1, len(net.transfers) + 1):
        probes.append(embed_marking(net, program, net.initial, f"trans_{k}"))
    if any(res1.constraints.admits(p) for p in probes):
        return CoverResult(COVERED, res1.iterations)
    if res1.status == FIXPOINT:
        return CoverResult(NOT_COVERED, res1.iterations)
    return CoverResult(UNKNOWN, res1.iterations)


# ---------------------------------------------------------------------------
# Forward oracle
# ---------------------------------------------------------------------------

def forward_explore(net: PetriNet, step_bound: int = 12,
                    size_bound: int = 10) -> frozenset[Fact]:
    """Markings reachable within step_bound firings, sizes capped.

    Transfer arcs fire atomically here (all tokens move at once); this is
    the reference semantics the backward engine is compared against.
    """
    if step_bound < 0 or size_bound < 0:
        raise ValueError("bounds must be non-negative")
    seen = {net.initial}
    frontier = [net.initial]
    for _ in range(step_bound):
        nxt = []
        for m in frontier:
            for succ in _successors(net, m):
                if succ.total() <= size_bound and succ not in seen:
                    seen.add(succ)
                    nxt.append(succ)
        if not nxt:
            break
        frontier = nxt
    return frozenset(seen)


def _successors(net: PetriNet, m: Fact):
    for t in net.transitions:
        if t.pre.leq(m):
            yield m.diff(t.pre).union(t.post)
    for tr in net.transfers:
        if m.occ[tr.source] > 0:
            occ = list(m.occ)
            occ[tr.target] += occ[tr.source]
            occ[tr.source] = 0
            yield Fact(net.places, tuple(occ))


def forward_covers(net: PetriNet, markings: frozenset[Fact]) -> bool:
    """Does any explored marking dominate some target?"""
    return any(t.leq(m) for m in markings for t in net.targets)
