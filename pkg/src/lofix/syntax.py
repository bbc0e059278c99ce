"""AST, parser and pretty-printer for LO / LO1 programs and goals.

Concrete syntax (ASCII):

    dialect lo1.            % optional header, 'lo' or 'lo1'
    atoms a b c.            % optional header fixing the signature order
    a <- b | c.             % clause: head '<-' body '.'
    b <- (d | e) & f.       % '&' binds looser than '|'
    c | d <- top.           % 'top' succeeds in any context
    a <- 1.                 % '1' (LO1 only) succeeds in the empty context
    % '%' starts a comment

Heads are '|'-disjunctions of atoms and may repeat an atom (heads are
multisets).  A statement may also join several parenthesized clauses with
'&': ``(a <- b) & (c <- top).`` yields two clauses.  Without a header the
signature is the atoms in order of first occurrence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

from .multiset import Fact, Signature

LO = "lo"
LO1 = "lo1"

_KEYWORDS = {"top", "dialect", "atoms", "lo", "lo1"}


# ---------------------------------------------------------------------------
# Goal AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    index: int


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Par:
    left: "Goal"
    right: "Goal"


@dataclass(frozen=True)
class With:
    left: "Goal"
    right: "Goal"


Goal = Union[Atom, Top, One, Par, With]

TOP = Top()
ONE = One()


def goal_key(g: Goal):
    """Structural sort key giving goals (and contexts) a canonical order."""
    if isinstance(g, Atom):
        return (0, g.index)
    if isinstance(g, Top):
        return (1,)
    if isinstance(g, One):
        return (2,)
    if isinstance(g, Par):
        return (3, goal_key(g.left), goal_key(g.right))
    return (4, goal_key(g.left), goal_key(g.right))


def goal_atoms(g: Goal) -> Iterator[int]:
    if isinstance(g, Atom):
        yield g.index
    elif isinstance(g, (Par, With)):
        yield from goal_atoms(g.left)
        yield from goal_atoms(g.right)


def has_one(g: Goal) -> bool:
    if isinstance(g, One):
        return True
    if isinstance(g, (Par, With)):
        return has_one(g.left) or has_one(g.right)
    return False


class Context:
    """A multiset of goal formulas, kept in canonical order.

    A context in which every goal is an atom coincides with a fact.
    """

    __slots__ = ("sig", "goals")

    def __init__(self, sig: Signature, goals: Iterable[Goal]):
        self.sig = sig
        self.goals = tuple(sorted(goals, key=goal_key))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Context)
            and self.goals == other.goals
            and self.sig == other.sig
        )

    def __hash__(self) -> int:
        return hash(self.goals)

    def __iter__(self) -> Iterator[Goal]:
        return iter(self.goals)

    def __len__(self) -> int:
        return len(self.goals)

    def is_fact(self) -> bool:
        return all(isinstance(g, Atom) for g in self.goals)

    def to_fact(self) -> Fact:
        if not self.is_fact():
            raise ValueError("context contains compound goals")
        occ = [0] * len(self.sig)
        for g in self.goals:
            occ[g.index] += 1  # type: ignore[union-attr]
        return Fact(self.sig, tuple(occ))

    def contains_top(self) -> bool:
        return any(isinstance(g, Top) for g in self.goals)

    def is_one_only(self) -> bool:
        return len(self.goals) == 1 and isinstance(self.goals[0], One)

    def first_compound(self) -> Optional[Goal]:
        """The first Par (preferred) or With goal, in canonical order."""
        for g in self.goals:
            if isinstance(g, Par):
                return g
        for g in self.goals:
            if isinstance(g, With):
                return g
        return None

    def replace(self, old: Goal, *new: Goal) -> "Context":
        """Remove one occurrence of old and add the new goals."""
        goals = list(self.goals)
        goals.remove(old)
        goals.extend(new)
        return Context(self.sig, goals)

    def add(self, *new: Goal) -> "Context":
        return Context(self.sig, self.goals + tuple(new))

    @classmethod
    def of_fact(cls, fact: Fact) -> "Context":
        return cls(fact.sig, [Atom(i) for i in fact.atoms()])

    def __str__(self) -> str:
        if not self.goals:
            return "<empty>"
        return ", ".join(goal_to_text(g, self.sig) for g in self.goals)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Clauses and programs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Clause:
    head: Fact          # the multiset of the head disjunction; never empty
    body: Goal

    def __post_init__(self):
        if self.head.is_empty():
            raise ValueError("clause head must be a non-empty disjunction")


@dataclass(frozen=True)
class Program:
    sig: Signature
    clauses: tuple[Clause, ...]
    dialect: str = LO

    def __post_init__(self):
        if self.dialect not in (LO, LO1):
            raise ValueError(f"unknown dialect {self.dialect!r}")
        if self.dialect == LO:
            for i, c in enumerate(self.clauses):
                if has_one(c.body):
                    raise ValueError(f"clause {i + 1} uses '1' in an LO program")


def is_flat(program: Program) -> bool:
    """True iff every body is top or a '&'-conjunction of atom disjunctions."""
    return all(_flat_body(c.body) for c in program.clauses)


def _flat_body(g: Goal) -> bool:
    if isinstance(g, Top):
        return True
    return _flat_conj(g)


def _flat_conj(g: Goal) -> bool:
    if isinstance(g, With):
        return _flat_conj(g.left) and _flat_conj(g.right)
    return _atom_disjunction(g)


def _atom_disjunction(g: Goal) -> bool:
    if isinstance(g, Atom):
        return True
    if isinstance(g, Par):
        return _atom_disjunction(g.left) and _atom_disjunction(g.right)
    return False


def flat_conjuncts(g: Goal) -> list[Goal]:
    """The '&'-leaves of a flat body (the empty list for top)."""
    if isinstance(g, Top):
        return []
    if isinstance(g, With):
        return flat_conjuncts(g.left) + flat_conjuncts(g.right)
    return [g]


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class _Token:
    kind: str       # 'ident', 'one', 'arrow', 'pipe', 'amp', 'lpar', 'rpar',
                    # 'dot', 'comma', 'eof'
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if c == "<" and i + 1 < n and text[i + 1] == "-":
            tokens.append(_Token("arrow", "<-", line, start_col))
            i += 2
            col += 2
            continue
        simple = {"|": "pipe", "&": "amp", "(": "lpar", ")": "rpar",
                  ".": "dot", ",": "comma", ";": "semi"}
        if c in simple:
            tokens.append(_Token(simple[c], c, line, start_col))
            i += 1
            col += 1
            continue
        if c == "1" and (i + 1 >= n or not (text[i + 1].isalnum() or text[i + 1] == "_")):
            tokens.append(_Token("one", "1", line, start_col))
            i += 1
            col += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", line, start_col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    """Recursive-descent parser shared by program and goal syntax."""

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    # -- token plumbing ---------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"expected {what}, found {tok.text or 'end of input'!r}", tok)
        return self.next()

    def fail(self, message: str, tok: Optional[_Token] = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    # -- program ------------------------------------------------------------

    def parse_program(self) -> Program:
        declared_dialect: Optional[str] = None
        declared_atoms: Optional[list[str]] = None
        raw_clauses: list[tuple[list[str], "_RawGoal", _Token]] = []
        atom_order: list[str] = []
        atom_seen: set[str] = set()

        def note_atom(name: str):
            if name not in atom_seen:
                atom_seen.add(name)
                atom_order.append(name)

        # headers
        while self.peek().kind == "ident" and self.peek().text in ("dialect", "atoms"):
            tok = self.next()
            if tok.text == "dialect":
                d = self.expect("ident", "'lo' or 'lo1'")
                if d.text not in (LO, LO1):
                    self.fail(f"unknown dialect {d.text!r}", d)
                if declared_dialect is not None:
                    self.fail("duplicate dialect header", tok)
                declared_dialect = d.text
            else:
                if declared_atoms is not None:
                    self.fail("duplicate atoms header", tok)
                declared_atoms = []
                while self.peek().kind == "ident":
                    name = self.next()
                    if name.text in _KEYWORDS:
                        self.fail(f"{name.text!r} cannot be used as an atom", name)
                    if name.text in declared_atoms:
                        self.fail(f"duplicate atom {name.text!r}", name)
                    declared_atoms.append(name.text)
                if not declared_atoms:
                    self.fail("atoms header declares no atoms")
            self.expect("dot", "'.'")

        # statements
        while self.peek().kind != "eof":
            for head, body, tok in self.parse_statement():
                for a in head:
                    note_atom(a)
                body.note_atoms(note_atom)
                raw_clauses.append((head, body, tok))

        if declared_atoms is not None:
            for name in atom_order:
                if name not in declared_atoms:
                    raise ParseError(
                        f"atom {name!r} is not declared in the atoms header", 1, 1
                    )
            sig = Signature(declared_atoms)
        else:
            if not atom_order:
                self.fail("program declares no atoms and has no clauses")
            sig = Signature(atom_order)

        clauses = []
        uses_one = False
        for head, raw_body, tok in raw_clauses:
            body = raw_body.resolve(sig)
            if has_one(body):
                uses_one = True
                if declared_dialect == LO:
                    raise ParseError(
                        "'1' used but the dialect header says 'lo'", tok.line, tok.col
                    )
            occ = [0] * len(sig)
            for a in head:
                occ[sig.index(a)] += 1
            clauses.append(Clause(Fact(sig, tuple(occ)), body))

        dialect = declared_dialect or (LO1 if uses_one else LO)
        return Program(sig, tuple(clauses), dialect)

    def parse_statement(self) -> list[tuple[list[str], "_RawGoal", _Token]]:
        """One '.'-terminated statement; '&' may join parenthesized clauses."""
        first = self.peek()
        if first.kind == "lpar":
            clauses = [self.parse_paren_implication()]
            while self.peek().kind == "amp":
                self.next()
                clauses.append(self.parse_paren_implication())
            self.expect("dot", "'.'")
            return clauses
        head, body, tok = self.parse_implication()
        self.expect("dot", "'.'")
        return [(head, body, tok)]

    def parse_paren_implication(self):
        self.expect("lpar", "'('")
        result = self.parse_implication()
        self.expect("rpar", "')'")
        return result

    def parse_implication(self) -> tuple[list[str], "_RawGoal", _Token]:
        tok = self.peek()
        head = self.parse_head()
        self.expect("arrow", "'<-'")
        if self.peek().kind == "one":
            self.next()
            return head, _RawOne(), tok
        body = self.parse_with()
        if self.peek().kind == "arrow":
            self.fail("implication nested inside a body")
        return head, body, tok

    def parse_head(self) -> list[str]:
        atoms = [self.parse_head_atom()]
        while self.peek().kind == "pipe":
            self.next()
            atoms.append(self.parse_head_atom())
        return atoms

    def parse_head_atom(self) -> str:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in _KEYWORDS:
            self.fail("non-atomic head disjunct (heads are '|'-joined atoms)")
        return self.next().text

    # -- goals ---------------------------------------------------------------
    # '&' binds looser than '|'; parentheses group freely inside bodies.

    def parse_with(self) -> "_RawGoal":
        left = self.parse_par()
        while self.peek().kind == "amp":
            self.next()
            left = _RawBin(With, left, self.parse_par())
        return left

    def parse_par(self) -> "_RawGoal":
        left = self.parse_unit()
        while self.peek().kind == "pipe":
            self.next()
            left = _RawBin(Par, left, self.parse_unit())
        return left

    def parse_unit(self) -> "_RawGoal":
        tok = self.peek()
        if tok.kind == "lpar":
            self.next()
            inner = self.parse_with()
            if self.peek().kind == "arrow":
                self.fail("implication nested inside a body")
            self.expect("rpar", "')'")
            return inner
        if tok.kind == "ident":
            if tok.text == "top":
                self.next()
                return _RawTop()
            if tok.text in _KEYWORDS:
                self.fail(f"{tok.text!r} cannot be used as an atom")
            return _RawAtom(self.next().text)
        if tok.kind == "one":
            self.fail("'1' is only allowed as an entire clause body")
        self.fail(f"expected a goal, found {tok.text or 'end of input'!r}")
        raise AssertionError  # unreachable

    # -- goal contexts ---------------------------------------------------------

    def parse_context(self, sig: Signature) -> Context:
        goals = [self.parse_context_goal(sig)]
        while self.peek().kind == "comma":
            self.next()
            goals.append(self.parse_context_goal(sig))
        self.expect("eof", "end of input")
        return Context(sig, goals)

    def parse_context_goal(self, sig: Signature) -> Goal:
        if self.peek().kind == "one":
            self.next()
            return ONE
        tok = self.peek()
        raw = self.parse_with()
        try:
            return raw.resolve(sig)
        except KeyError as e:
            raise ParseError(str(e.args[0]), tok.line, tok.col) from None


# Raw goals defer atom-index resolution until the signature is known.

class _RawGoal:
    def note_atoms(self, note):
        raise NotImplementedError

    def resolve(self, sig: Signature) -> Goal:
        raise NotImplementedError


class _RawAtom(_RawGoal):
    def __init__(self, name: str):
        self.name = name

    def note_atoms(self, note):
        note(self.name)

    def resolve(self, sig: Signature) -> Goal:
        return Atom(sig.index(self.name))


class _RawTop(_RawGoal):
    def note_atoms(self, note):
        pass

    def resolve(self, sig: Signature) -> Goal:
        return TOP


class _RawOne(_RawGoal):
    def note_atoms(self, note):
        pass

    def resolve(self, sig: Signature) -> Goal:
        return ONE


class _RawBin(_RawGoal):
    def __init__(self, ctor, left: _RawGoal, right: _RawGoal):
        self.ctor = ctor
        self.left = left
        self.right = right

    def note_atoms(self, note):
        self.left.note_atoms(note)
        self.right.note_atoms(note)

    def resolve(self, sig: Signature) -> Goal:
        return self.ctor(self.left.resolve(sig), self.right.resolve(sig))


def parse_program(text: str) -> Program:
    return _Parser(text).parse_program()


def parse_goal(text: str, sig: Signature) -> Context:
    return _Parser(text).parse_context(sig)


# ---------------------------------------------------------------------------
# Pretty-printer (deterministic; parse . pretty is the identity on ASTs)
# ---------------------------------------------------------------------------

def goal_to_text(g: Goal, sig: Signature) -> str:
    return _render(g, sig)


def _render(g: Goal, sig: Signature) -> str:
    if isinstance(g, Atom):
        return sig.names[g.index]
    if isinstance(g, Top):
        return "top"
    if isinstance(g, One):
        return "1"
    if isinstance(g, Par):
        # '|' binds tighter than '&': parenthesize '&'-children, and
        # right-nested '|' so associativity survives the round trip.
        left = _render(g.left, sig)
        if isinstance(g.left, With):
            left = f"({left})"
        right = _render(g.right, sig)
        if isinstance(g.right, (With, Par)):
            right = f"({right})"
        return f"{left} | {right}"
    left = _render(g.left, sig)
    right = _render(g.right, sig)
    if isinstance(g.right, With):
        right = f"({right})"
    return f"{left} & {right}"


def head_to_text(head: Fact) -> str:
    return " | ".join(head.sig.names[i] for i in head.atoms())


def clause_to_text(clause: Clause, sig: Signature) -> str:
    return f"{head_to_text(clause.head)} <- {_render(clause.body, sig)}."


def program_to_text(program: Program) -> str:
    lines = [f"dialect {program.dialect}.",
             "atoms " + " ".join(program.sig.names) + "."]
    lines.extend(clause_to_text(c, program.sig) for c in program.clauses)
    return "\n".join(lines) + "\n"
