"""
Downset and ideal lattices of finite posets.

A DownsetLattice keeps its members as bitsets over the base poset, sorted by
integer value (which is also a linear extension of inclusion). The lattice's
own order is only materialised on request.
"""
import enum
import itertools
import logging
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

from .config import LabConfig, get_config
from .core import (
    JoinTable,
    Poset,
    Semilattice,
    as_join_semilattice,
    format_bitset,
    iter_bits,
    mask_of,
)
from .exceptions import NotLattice, SizeLimit

logger = logging.getLogger(__name__)


class DownsetKind(enum.Enum):
    ALL = "all"
    IDEALS = "ideals"
    FINGEN = "fingen"


@dataclass(frozen=True)
class DownsetLattice:
    base: Poset
    downsets: tuple[int, ...]
    kind: DownsetKind
    # FINGEN only: every principal downset of the base is stable under stage growth
    faithful: bool = True

    def __len__(self) -> int:
        return len(self.downsets)

    @cached_property
    def _index(self) -> dict[int, int]:
        return {d: i for i, d in enumerate(self.downsets)}

    def index_of(self, downset: int) -> int:
        return self._index[downset]

    def __contains__(self, downset: int) -> bool:
        return downset in self._index

    @cached_property
    def poset(self) -> Poset:
        return self.as_poset()

    def as_poset(self) -> Poset:
        """Inclusion order on the members, labelled by bitset strings."""
        members = self.downsets
        up = []
        for d in members:
            up.append(mask_of(j for j, e in enumerate(members) if d & ~e == 0))
        return Poset(len(members), up, [format_bitset(d) for d in members])

    def as_semilattice(self) -> Semilattice:
        """Union is the join for ALL and FINGEN; ideals fall back to least upper bounds."""
        poset = self.poset
        if self.kind is DownsetKind.IDEALS:
            return Semilattice.of(poset)
        index = self._index
        rows = tuple(tuple(index[a | b] for b in self.downsets) for a in self.downsets)
        return Semilattice(poset, JoinTable(rows, index.get(0)))

    def is_distributive(self) -> bool:
        members = self._index
        return all(
            (a | b) in members and (a & b) in members
            for a, b in itertools.combinations(self.downsets, 2)
        )


def all_downsets(P: Poset, config: LabConfig | None = None) -> DownsetLattice:
    """Every downward closed subset of P.

    Raises:
        SizeLimit: more downsets than ``config.max_downsets``.
    """
    bound = get_config(config).max_downsets
    order = P.topological_order()
    found: list[int] = []

    # include/exclude along a linear extension; an element may join only once
    # its whole strict down-set is in
    stack = [(0, 0)]
    while stack:
        i, current = stack.pop()
        if i == P.size:
            found.append(current)
            if len(found) > bound:
                raise SizeLimit("downset lattice", len(found), bound)
            continue
        x = order[i]
        if P.down[x] & ~current == 1 << x:
            stack.append((i + 1, current | (1 << x)))
        stack.append((i + 1, current))

    logger.debug(f"Enumerated {len(found)} downsets of a {P.size}-element poset")
    return DownsetLattice(P, tuple(sorted(found)), DownsetKind.ALL)


def ideals_of(P: Poset, config: LabConfig | None = None) -> DownsetLattice:
    """Non-empty up-directed downsets; for a finite poset these are the principal ones."""
    if P.size > get_config(config).max_downsets:
        raise SizeLimit("ideal lattice", P.size, get_config(config).max_downsets)
    return DownsetLattice(P, tuple(sorted(set(P.down))), DownsetKind.IDEALS)


def is_up_directed(P: Poset, downset: int) -> bool:
    members = list(iter_bits(downset))
    return bool(members) and all(
        P.up[x] & P.up[y] & downset for x, y in itertools.combinations(members, 2)
    )


def fin_gen_downsets(
    P: Poset, faithful: bool = True, config: LabConfig | None = None
) -> DownsetLattice:
    """All ↓F for finite F, as the union-closure of the principal downsets and ∅."""
    bound = get_config(config).max_downsets
    principal = sorted(set(P.down))
    seen = {0, *principal}
    frontier = list(seen)
    while frontier:
        fresh = []
        for d in frontier:
            for p in principal:
                u = d | p
                if u not in seen:
                    seen.add(u)
                    fresh.append(u)
        if len(seen) > bound:
            raise SizeLimit("finitely generated downsets", len(seen), bound)
        frontier = fresh
    return DownsetLattice(P, tuple(sorted(seen)), DownsetKind.FINGEN, faithful)


def principal_map(P: Poset) -> tuple[int, ...]:
    """x -> index of ↓x in ideals_of(P)."""
    ideals = ideals_of(P)
    return tuple(ideals.index_of(P.down[x]) for x in range(P.size))


def generated_ideal(S: Semilattice, A: Iterable[int]) -> int:
    """The least ideal containing A, as an element bitset of S."""
    A = list(A)
    if not A:
        if S.bottom is None:
            raise ValueError("The empty set generates an ideal only when there is a bottom")
        return 1 << S.bottom
    return S.poset.down[S.join_all(A)]


def compact_elements(L: Poset) -> list[int]:
    """All elements: in a finite lattice every element is compact."""
    result = as_join_semilattice(L)
    if not isinstance(result, JoinTable) or L.bottom is None:
        raise NotLattice(f"Poset with {L.size} elements is not a lattice")
    return list(range(L.size))


@dataclass(frozen=True)
class MaximalChains:
    chains: tuple[tuple[int, ...], ...]
    total: int | None


def maximal_chains(L: DownsetLattice, limit: int) -> MaximalChains:
    """Maximal chains of the inclusion order, as index tuples, in lexicographic order."""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    poset = L.poset
    upper: dict[int, list[int]] = {x: [] for x in range(poset.size)}
    for x, y in poset.covers():
        upper[x].append(y)

    def walk(path: list[int]):
        tip = path[-1]
        if not upper[tip]:
            yield tuple(path)
            return
        for y in upper[tip]:
            path.append(y)
            yield from walk(path)
            path.pop()

    def all_chains():
        for start in poset.minimal_elements():
            yield from walk([start])

    found = list(itertools.islice(all_chains(), limit + 1))
    if len(found) > limit:
        return MaximalChains(tuple(found[:limit]), None)
    return MaximalChains(tuple(found), len(found))
