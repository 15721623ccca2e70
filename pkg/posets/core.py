"""
Finite posets.

A Poset on elements 0..n-1 stores its reflexive order as one bitset row per
element: ``up[x]`` has bit y set iff x <= y. Rows are Python integers, so
posets wider than a machine word need no special handling.

Everything here is immutable after construction, and every search breaks
ties by element index so results are reproducible.
"""
import itertools
import logging
import random
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import reduce

import networkx as nx
from opentelemetry import trace

from .exceptions import CycleError, NotJoinSemilattice, OrderAxiomViolated, SizeLimit
from .metrics import record_search

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

BOTTOM_LABEL = "⊥"
# largest size all_posets enumerates (318 isomorphism types)
CATALOGUE_LIMIT = 6


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits(mask: int) -> list[int]:
    return list(iter_bits(mask))


def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for x in elements:
        mask |= 1 << x
    return mask


def format_bitset(mask: int) -> str:
    return "{" + ",".join(str(x) for x in iter_bits(mask)) + "}"


class Poset:
    """A finite partial order on 0..size-1."""

    def __init__(self, size: int, up: Sequence[int], labels: Sequence[str] | None = None):
        up = tuple(up)
        if len(up) != size:
            raise ValueError(f"Expected {size} rows, got {len(up)}")
        if labels is not None and len(labels) != size:
            raise ValueError(f"Expected {size} labels, got {len(labels)}")
        down = [0] * size
        for x in range(size):
            for y in iter_bits(up[x]):
                down[y] |= 1 << x
        self.size = size
        self.up = up
        self.down = tuple(down)
        self.labels = tuple(labels) if labels is not None else None
        self._check_axioms()
        self._topological = tuple(
            sorted(range(size), key=lambda x: (self.down[x].bit_count(), x))
        )

    def _check_axioms(self) -> None:
        full = self.full_mask
        for x in range(self.size):
            row = self.up[x]
            if row & ~full:
                raise OrderAxiomViolated("within range", (x,))
            if not (row >> x) & 1:
                raise OrderAxiomViolated("reflexive", (x,))
            if row & self.down[x] != 1 << x:
                y = next(y for y in iter_bits(row & self.down[x]) if y != x)
                raise OrderAxiomViolated("antisymmetric", (x, y))
            for y in iter_bits(row):
                if self.up[y] & ~row:
                    z = next(iter_bits(self.up[y] & ~row))
                    raise OrderAxiomViolated("transitive", (x, y, z))

    # ------------------------------------------------------------------
    # basic queries

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def __len__(self) -> int:
        return self.size

    def leq(self, x: int, y: int) -> bool:
        return bool((self.up[x] >> y) & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x: int, y: int) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def comparable_mask(self, x: int) -> int:
        return self.up[x] | self.down[x]

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    def topological_order(self) -> tuple[int, ...]:
        """A linear extension: elements sorted by down-set size, then index."""
        return self._topological

    def covers(self) -> list[tuple[int, int]]:
        """The Hasse relation as sorted (lower, upper) pairs."""
        result = []
        for x in range(self.size):
            strict_up = self.up[x] & ~(1 << x)
            for y in iter_bits(strict_up):
                if not strict_up & self.down[y] & ~(1 << y):
                    result.append((x, y))
        return result

    def minimal_elements(self, mask: int | None = None) -> list[int]:
        mask = self.full_mask if mask is None else mask
        return [x for x in iter_bits(mask) if self.down[x] & mask == 1 << x]

    def maximal_elements(self, mask: int | None = None) -> list[int]:
        mask = self.full_mask if mask is None else mask
        return [x for x in iter_bits(mask) if self.up[x] & mask == 1 << x]

    @property
    def bottom(self) -> int | None:
        full = self.full_mask
        return next((x for x in range(self.size) if self.up[x] == full), None)

    @property
    def top(self) -> int | None:
        full = self.full_mask
        return next((x for x in range(self.size) if self.down[x] == full), None)

    def has_bottom(self) -> bool:
        return self.bottom is not None

    def down_closure(self, mask: int) -> int:
        return reduce(lambda acc, x: acc | self.down[x], iter_bits(mask), 0)

    def up_closure(self, mask: int) -> int:
        return reduce(lambda acc, x: acc | self.up[x], iter_bits(mask), 0)

    def is_downset(self, mask: int) -> bool:
        return self.down_closure(mask) == mask

    # ------------------------------------------------------------------
    # derived posets

    def induced(self, elements: Sequence[int]) -> "Poset":
        """The subposet on ``elements``; new index i stands for elements[i]."""
        position = {x: i for i, x in enumerate(elements)}
        up = [
            mask_of(position[y] for y in iter_bits(self.up[x]) if y in position) for x in elements
        ]
        labels = [self.label(x) for x in elements] if self.labels is not None else None
        return Poset(len(elements), up, labels)

    def dual(self) -> "Poset":
        return Poset(self.size, self.down, self.labels)

    def with_labels(self, labels: Sequence[str] | None) -> "Poset":
        return Poset(self.size, self.up, labels)

    def to_networkx(self) -> nx.DiGraph:
        """Hasse diagram as a DiGraph with edges lower -> upper."""
        graph = nx.DiGraph()
        graph.add_nodes_from((x, {"label": self.label(x)}) for x in range(self.size))
        graph.add_edges_from(self.covers())
        return graph

    def __eq__(self, other) -> bool:
        return isinstance(other, Poset) and self.size == other.size and self.up == other.up

    def __hash__(self) -> int:
        return hash((self.size, self.up))

    def __repr__(self) -> str:
        return f"Poset(size={self.size}, covers={self.covers()})"


def from_covers(
    size: int, covers: Iterable[tuple[int, int]], labels: Sequence[str] | None = None
) -> Poset:
    """Build a poset from a generating relation by reflexive-transitive closure.

    Raises:
        CycleError: the closure relates two distinct elements both ways.
    """
    up = [1 << x for x in range(size)]
    for x, y in covers:
        if not (0 <= x < size and 0 <= y < size):
            raise ValueError(f"Pair ({x}, {y}) references an element outside 0..{size - 1}")
        up[x] |= 1 << y
    # Warshall on bitset rows
    for k in range(size):
        bit = 1 << k
        row_k = up[k]
        for i in range(size):
            if up[i] & bit:
                up[i] |= row_k
    for x in range(size):
        for y in iter_bits(up[x] & ~((1 << (x + 1)) - 1)):
            if (up[y] >> x) & 1:
                raise CycleError(x, y)
    return Poset(size, up, labels)


def from_leq(
    size: int, leq: Callable[[int, int], bool], labels: Sequence[str] | None = None
) -> Poset:
    up = [mask_of(y for y in range(size) if x == y or leq(x, y)) for x in range(size)]
    return Poset(size, up, labels)


def chain(n: int) -> Poset:
    return Poset(n, [((1 << n) - 1) & ~((1 << x) - 1) for x in range(n)])


def antichain(n: int) -> Poset:
    return Poset(n, [1 << x for x in range(n)])


# ----------------------------------------------------------------------
# joins


@dataclass(frozen=True)
class JoinTable:
    join_rows: tuple[tuple[int, ...], ...]
    bottom: int | None

    def join(self, x: int, y: int) -> int:
        return self.join_rows[x][y]

    def join_all(self, elements: Iterable[int]) -> int:
        elements = list(elements)
        if not elements:
            if self.bottom is None:
                raise ValueError("Empty join needs a bottom element")
            return self.bottom
        return reduce(self.join, elements)


@dataclass(frozen=True)
class Semilattice:
    """A poset together with its join table."""

    poset: Poset
    table: JoinTable

    @classmethod
    def of(cls, poset: Poset) -> "Semilattice":
        result = as_join_semilattice(poset)
        if not isinstance(result, JoinTable):
            raise NotJoinSemilattice(result)
        return cls(poset, result)

    @property
    def size(self) -> int:
        return self.poset.size

    @property
    def bottom(self) -> int | None:
        return self.table.bottom

    def join(self, x: int, y: int) -> int:
        return self.table.join(x, y)

    def join_all(self, elements: Iterable[int]) -> int:
        return self.table.join_all(elements)


def least_upper_bound(P: Poset, x: int, y: int) -> int | None:
    common = P.up[x] & P.up[y]
    return next((z for z in iter_bits(common) if not common & ~P.up[z]), None)


def as_join_semilattice(P: Poset) -> JoinTable | tuple[int, int]:
    """Return the join table of P, or the lexicographically least pair without a join."""
    rows = [[0] * P.size for _ in range(P.size)]
    for x in range(P.size):
        rows[x][x] = x
        for y in range(x + 1, P.size):
            z = least_upper_bound(P, x, y)
            if z is None:
                logger.debug(f"No join for ({x}, {y})")
                return (x, y)
            rows[x][y] = rows[y][x] = z
    return JoinTable(tuple(tuple(r) for r in rows), P.bottom)


# ----------------------------------------------------------------------
# height and width


@dataclass(frozen=True)
class HeightWidth:
    height: int
    width: int
    chain: tuple[int, ...]
    antichain: tuple[int, ...]


def _longest_chain(P: Poset, allowed: int) -> int:
    best: dict[int, int] = {}
    for z in P.topological_order():
        if (allowed >> z) & 1:
            below = P.down[z] & allowed & ~(1 << z)
            best[z] = 1 + max((best[w] for w in iter_bits(below)), default=0)
    return max(best.values(), default=0)


def _max_antichain(P: Poset, allowed: int) -> int:
    # Dilworth: width = |allowed| - maximum matching of the strict comparability graph
    nodes = bits(allowed)
    if not nodes:
        return 0
    graph = nx.Graph()
    left = [("lo", x) for x in nodes]
    graph.add_nodes_from(left)
    graph.add_nodes_from(("hi", x) for x in nodes)
    for x in nodes:
        for y in iter_bits(P.up[x] & allowed & ~(1 << x)):
            graph.add_edge(("lo", x), ("hi", y))
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=left)
    return len(nodes) - len(matching) // 2


def height(P: Poset) -> int:
    return _longest_chain(P, P.full_mask)


def width(P: Poset) -> int:
    return _max_antichain(P, P.full_mask)


def _lex_least(P: Poset, target: int, measure, compatible) -> tuple[int, ...]:
    chosen: list[int] = []
    allowed = P.full_mask
    while len(chosen) < target:
        for z in iter_bits(allowed):
            rest = allowed & compatible(z) & ~((1 << (z + 1)) - 1)
            if 1 + measure(P, rest) >= target - len(chosen):
                chosen.append(z)
                allowed = rest
                break
    return tuple(chosen)


def height_width(P: Poset) -> HeightWidth:
    """Height, width and the lexicographically least longest chain and largest antichain."""
    h = height(P)
    w = width(P)
    return HeightWidth(
        height=h,
        width=w,
        chain=_lex_least(P, h, _longest_chain, P.comparable_mask),
        antichain=_lex_least(P, w, _max_antichain, lambda z: P.full_mask & ~P.comparable_mask(z)),
    )


# ----------------------------------------------------------------------
# linear extensions


@dataclass(frozen=True)
class LinearExtensions:
    extensions: tuple[tuple[int, ...], ...]
    total: int | None

    @property
    def truncated(self) -> bool:
        return self.total is None


def iter_linear_extensions(P: Poset) -> Iterator[tuple[int, ...]]:
    """Linear extensions in lexicographic order."""
    prefix: list[int] = []

    def extend(placed: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == P.size:
            yield tuple(prefix)
            return
        for x in range(P.size):
            if not (placed >> x) & 1 and P.down[x] & ~placed == 1 << x:
                prefix.append(x)
                yield from extend(placed | (1 << x))
                prefix.pop()

    yield from extend(0)


def linear_extensions(P: Poset, limit: int) -> LinearExtensions:
    if limit < 1:
        raise ValueError("limit must be at least 1")
    found = list(itertools.islice(iter_linear_extensions(P), limit + 1))
    if len(found) > limit:
        return LinearExtensions(tuple(found[:limit]), None)
    return LinearExtensions(tuple(found), len(found))


# ----------------------------------------------------------------------
# embedding search


def order_embeddings(
    source: Poset,
    target: Poset,
    *,
    accept: Callable[[list[int], int, int], bool] | None = None,
    fixed: dict[int, int] | None = None,
    exact: bool = False,
    search: str = "order",
) -> Iterator[tuple[int, ...]]:
    """Yield order embeddings of ``source`` into ``target`` in lexicographic order.

    Source elements are assigned in index order and target candidates are
    tried ascending, so the first map yielded is the lexicographically least.

    Args:
        accept: extra check called as accept(assignment, s, t) once s -> t is
            known to be order-compatible with the assigned prefix.
        fixed: pre-assigned images.
        exact: require equal up/down set sizes (isomorphism search).
    """
    m, n = source.size, target.size
    if m > n:
        return
    fixed = fixed or {}
    candidates = []
    for s in range(m):
        if s in fixed:
            candidates.append([fixed[s]])
            continue
        up_s, down_s = source.up[s].bit_count(), source.down[s].bit_count()
        if exact:
            fits = [
                t
                for t in range(n)
                if target.up[t].bit_count() == up_s and target.down[t].bit_count() == down_s
            ]
        else:
            fits = [
                t
                for t in range(n)
                if target.up[t].bit_count() >= up_s and target.down[t].bit_count() >= down_s
            ]
        candidates.append(fits)

    assignment = [-1] * m
    nodes = 0
    found = False

    def place(s: int, used: int) -> Iterator[tuple[int, ...]]:
        nonlocal nodes, found
        if s == m:
            found = True
            yield tuple(assignment)
            return
        for t in candidates[s]:
            if (used >> t) & 1:
                continue
            nodes += 1
            if any(
                source.leq(p, s) != target.leq(assignment[p], t)
                or source.leq(s, p) != target.leq(t, assignment[p])
                for p in range(s)
            ):
                continue
            assignment[s] = t
            if accept is None or accept(assignment, s, t):
                yield from place(s + 1, used | (1 << t))
            assignment[s] = -1

    try:
        yield from place(0, 0)
    finally:
        record_search(search, nodes, found)
        logger.debug(f"{search} search on {m} -> {n} elements visited {nodes} nodes")


def isomorphic(P: Poset, Q: Poset) -> tuple[int, ...] | None:
    """The lexicographically least isomorphism P -> Q, or None."""
    if P.size != Q.size:
        return None
    if sorted(r.bit_count() for r in P.up) != sorted(r.bit_count() for r in Q.up):
        return None
    if sorted(r.bit_count() for r in P.down) != sorted(r.bit_count() for r in Q.down):
        return None
    with tracer.start_as_current_span("isomorphic") as span:
        span.set_attribute("size", P.size)
        return next(order_embeddings(P, Q, exact=True, search="isomorphism"), None)


# ----------------------------------------------------------------------
# sums and products


def _labels_or_none(*parts: tuple[Poset, str]) -> list[str] | None:
    if all(P.labels is None for P, _ in parts):
        return None
    return [f"{prefix}{P.label(x)}" for P, prefix in parts for x in range(P.size)]


def direct_sum(P: Poset, Q: Poset) -> Poset:
    """Disjoint union without cross comparabilities; Q's elements follow P's."""
    up = list(P.up) + [row << P.size for row in Q.up]
    return Poset(P.size + Q.size, up, _labels_or_none((P, ""), (Q, "")))


def lex_sum(index: Poset, parts: Sequence[Poset]) -> Poset:
    """Disjoint union of ``parts`` with part i below part j whenever i < j in ``index``."""
    if len(parts) != index.size:
        raise ValueError(f"lex_sum needs {index.size} parts, got {len(parts)}")
    offsets = list(itertools.accumulate((p.size for p in parts), initial=0))
    blocks = [((1 << p.size) - 1) << offsets[i] for i, p in enumerate(parts)]
    up = []
    for i, part in enumerate(parts):
        above = reduce(
            lambda acc, j: acc | blocks[j], iter_bits(index.up[i] & ~(1 << i)), 0
        )
        up.extend((row << offsets[i]) | above for row in part.up)
    labels = _labels_or_none(*((p, "") for p in parts))
    return Poset(offsets[-1], up, labels)


def product(P: Poset, Q: Poset) -> Poset:
    """Componentwise order; (p, q) has index p * |Q| + q."""
    up = []
    for p in range(P.size):
        for q in range(Q.size):
            row = 0
            for p2 in iter_bits(P.up[p]):
                row |= Q.up[q] << (p2 * Q.size)
            up.append(row)
    labels = None
    if P.labels is not None or Q.labels is not None:
        labels = [f"({P.label(p)},{Q.label(q)})" for p in range(P.size) for q in range(Q.size)]
    return Poset(P.size * Q.size, up, labels)


def add_bottom(P: Poset) -> Poset:
    """Adjoin a new least element at index 0, always."""
    up = [(1 << (P.size + 1)) - 1] + [row << 1 for row in P.up]
    labels = [BOTTOM_LABEL, *P.labels] if P.labels is not None else None
    return Poset(P.size + 1, up, labels)


def underline(P: Poset) -> Poset:
    """Adjoin a least element only when P has none."""
    return P if P.has_bottom() else add_bottom(P)


# ----------------------------------------------------------------------
# catalogues


def _canonical_code(size: int, up: Sequence[int]) -> int:
    pairs = [(x, y) for x in range(size) for y in iter_bits(up[x]) if x != y]
    return min(
        sum(1 << (perm[x] * size + perm[y]) for x, y in pairs)
        for perm in itertools.permutations(range(size))
    )


def _invariant(size: int, up: Sequence[int]) -> tuple:
    down = [0] * size
    for x in range(size):
        for y in iter_bits(up[x]):
            down[y] |= 1 << x
    return tuple(sorted((up[x].bit_count(), down[x].bit_count()) for x in range(size)))


def all_posets(size: int) -> list[Poset]:
    """One naturally labelled representative of every isomorphism type on ``size`` elements."""
    if size > CATALOGUE_LIMIT:
        raise SizeLimit("poset catalogue", size, CATALOGUE_LIMIT)
    pairs = list(itertools.combinations(range(size), 2))
    buckets: dict[tuple, list[Poset]] = {}
    for chosen in itertools.product((False, True), repeat=len(pairs)):
        up = [1 << x for x in range(size)]
        for (x, y), keep in zip(pairs, chosen):
            if keep:
                up[x] |= 1 << y
        # natural labelling, so one backward sweep closes the relation
        for x in reversed(range(size)):
            for y in iter_bits(up[x] & ~(1 << x)):
                up[x] |= up[y]
        if any(keep != bool((up[x] >> y) & 1) for (x, y), keep in zip(pairs, chosen)):
            continue
        P = Poset(size, up)
        bucket = buckets.setdefault(_invariant(size, up), [])
        if not any(isomorphic(P, Q) is not None for Q in bucket):
            bucket.append(P)
    representatives = [P for bucket in buckets.values() for P in bucket]
    logger.debug(f"Catalogue of size {size}: {len(representatives)} isomorphism types")
    return sorted(representatives, key=lambda P: _canonical_code(size, P.up))


def random_poset(size: int, density: float = 0.3, seed: int = 0) -> Poset:
    """A seeded random poset: random natural DAG, closed, then relabelled at random."""
    rnd = random.Random(seed)
    relation = [(i, j) for i, j in itertools.combinations(range(size), 2) if rnd.random() < density]
    perm = list(range(size))
    rnd.shuffle(perm)
    return from_covers(size, [(perm[i], perm[j]) for i, j in relation])
