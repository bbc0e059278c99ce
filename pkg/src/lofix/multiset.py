"""Multiset (fact) algebra over a fixed finite signature.

A *fact* is a multiset of propositional atoms, stored as a dense vector of
occurrence counts indexed by signature position.  Facts are immutable values
with structural equality; the lexicographic ordering on the count vector is
used only to make output deterministic, never for semantics.  The semantic
order is multiset inclusion ``leq`` (pointwise <=).
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping

# Counts are conceptually machine words; the engine aborts with a diagnostic
# rather than silently producing astronomically large states.
MAX_COUNT = 2**31 - 1


class CountLimitError(OverflowError):
    """An occurrence count exceeded MAX_COUNT (pathological LO1 iteration)."""


class Signature:
    """An ordered, duplicate-free set of atom names, fixed for a whole run."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("signature must contain at least one atom")
        index: dict[str, int] = {}
        for i, name in enumerate(names):
            if name in index:
                raise ValueError(f"duplicate atom {name!r} in signature")
            index[name] = i
        self.names = names
        self._index = index

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Signature) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"Signature({list(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown atom {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    # -- fact construction helpers -------------------------------------

    def empty(self) -> Fact:
        """The empty multiset (the unit of union)."""
        return Fact(self, (0,) * len(self.names))

    def fact(self, *atoms: str) -> Fact:
        """Build a fact from atom names, with multiplicity by repetition."""
        occ = [0] * len(self.names)
        for a in atoms:
            occ[self.index(a)] += 1
        return Fact(self, tuple(occ))

    def fact_of(self, counts: Mapping[str, int]) -> Fact:
        occ = [0] * len(self.names)
        for a, k in counts.items():
            occ[self.index(a)] = k
        return Fact(self, tuple(occ))


class Fact:
    """An immutable multiset over a signature, as an occurrence vector."""

    __slots__ = ("sig", "occ", "_hash")

    def __init__(self, sig: Signature, occ: Iterable[int]):
        occ = tuple(occ)
        if len(occ) != len(sig):
            raise ValueError(
                f"occurrence vector has length {len(occ)}, signature has {len(sig)}"
            )
        for k in occ:
            if k < 0:
                raise ValueError("occurrence counts must be non-negative")
            if k > MAX_COUNT:
                raise CountLimitError(f"occurrence count {k} exceeds {MAX_COUNT}")
        self.sig = sig
        self.occ = occ
        self._hash = hash(occ)

    # -- value semantics ------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Fact) and self.occ == other.occ and self.sig == other.sig

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Fact") -> bool:
        # Deterministic output order only; use leq() for the semantic order.
        self._check(other)
        return self.occ < other.occ

    def _check(self, other: "Fact") -> None:
        if self.sig != other.sig:
            raise ValueError("facts belong to different signatures")

    # -- the multiset algebra --------------------------------------------

    def leq(self, other: "Fact") -> bool:
        """Multiset inclusion: every count pointwise <= the other's."""
        self._check(other)
        return all(x <= y for x, y in zip(self.occ, other.occ))

    def union(self, other: "Fact") -> Fact:
        """Multiset union (pointwise sum)."""
        self._check(other)
        return Fact(self.sig, tuple(x + y for x, y in zip(self.occ, other.occ)))

    __add__ = union

    def diff(self, other: "Fact") -> Fact:
        """Multiset difference, clamped at zero."""
        self._check(other)
        return Fact(self.sig, tuple(max(0, x - y) for x, y in zip(self.occ, other.occ)))

    def lub(self, other: "Fact") -> Fact:
        """Least upper bound w.r.t. inclusion (pointwise max)."""
        self._check(other)
        return Fact(self.sig, tuple(max(x, y) for x, y in zip(self.occ, other.occ)))

    def power(self, k: int) -> Fact:
        """k-fold union of self with itself; power(0) is the empty fact."""
        if k < 0:
            raise ValueError("exponent must be non-negative")
        return Fact(self.sig, tuple(x * k for x in self.occ))

    # -- queries ----------------------------------------------------------

    def is_empty(self) -> bool:
        return not any(self.occ)

    def total(self) -> int:
        """Total number of occurrences (the size of the multiset)."""
        return sum(self.occ)

    def count(self, name: str) -> int:
        return self.occ[self.sig.index(name)]

    def support(self) -> frozenset[int]:
        """Indices of atoms occurring at least once."""
        return frozenset(i for i, k in enumerate(self.occ) if k > 0)

    def atoms(self) -> Iterator[int]:
        """Atom indices with multiplicity, in signature order."""
        for i, k in enumerate(self.occ):
            for _ in range(k):
                yield i

    # -- canonical text form ----------------------------------------------

    def __str__(self) -> str:
        parts = [
            f"{name}:{k}" for name, k in zip(self.sig.names, self.occ) if k > 0
        ]
        return "{" + ", ".join(parts) + "}"

    __repr__ = __str__


def enumerate_facts(sig: Signature, max_total: int) -> list[Fact]:
    """All facts over sig with total size <= max_total, in lexicographic order.

    Used by the ground oracle and by exhaustive tests; the count is
    C(n + max_total, n), which stays small at desk scale.
    """
    n = len(sig)
    facts = []
    for total in range(max_total + 1):
        for combo in combinations_with_replacement(range(n), total):
            occ = [0] * n
            for i in combo:
                occ[i] += 1
            facts.append(Fact(sig, tuple(occ)))
    return sorted(facts)
