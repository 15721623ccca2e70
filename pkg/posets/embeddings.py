"""
Embedding searches and the map constructions between downset lattices, ideal
lattices and join-semilattices.

Maps between lattices of sets are handled as dicts keyed by bitsets; maps out
of a poset are tuples indexed by element. Every choice a construction has to
make resolves to the least admissible index, so results are reproducible.
"""
import enum
import itertools
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace

from opentelemetry import trace

from .config import LabConfig, get_config
from .constructions import PowersetRepresentation, powerset_representation
from .core import (
    JoinTable,
    Poset,
    Semilattice,
    as_join_semilattice,
    format_bitset,
    from_covers,
    from_leq,
    iter_bits,
    mask_of,
    order_embeddings,
)
from .exceptions import (
    ChainNotStrict,
    ClaimViolation,
    ConstructionInvariantViolated,
    ModeUnsupported,
    NotJoinPreserving,
    PreconditionFailed,
)
from .ideals import all_downsets, fin_gen_downsets, generated_ideal, ideals_of, is_up_directed

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


class EmbeddingMode(enum.Enum):
    ORDER = "order"
    JOIN = "join"
    JOIN_BOTTOM = "join-bottom"

    @property
    def needs_joins(self) -> bool:
        return self is not EmbeddingMode.ORDER


def _join_table(P: Poset, role: str, mode: EmbeddingMode) -> JoinTable:
    table = as_join_semilattice(P)
    if not isinstance(table, JoinTable):
        raise ModeUnsupported(
            f"Mode {mode.value} needs the {role} to be a join-semilattice; "
            f"elements {table[0]} and {table[1]} have no join"
        )
    if mode is EmbeddingMode.JOIN_BOTTOM and table.bottom is None:
        raise ModeUnsupported(f"Mode {mode.value} needs the {role} to have a least element")
    return table


@dataclass(frozen=True)
class EmbeddingWitness:
    source: Poset
    target: Poset
    map: tuple[int, ...]
    mode: EmbeddingMode
    verified: bool = False

    def is_valid(self) -> bool:
        """Injective, order-preserving and order-reflecting, plus the join laws of the mode."""
        f = self.map
        if len(f) != self.source.size or len(set(f)) != len(f):
            return False
        if any(not 0 <= t < self.target.size for t in f):
            return False
        for x, y in itertools.product(range(self.source.size), repeat=2):
            if self.source.leq(x, y) != self.target.leq(f[x], f[y]):
                return False
        if not self.mode.needs_joins:
            return True
        source_table = as_join_semilattice(self.source)
        target_table = as_join_semilattice(self.target)
        if not isinstance(source_table, JoinTable) or not isinstance(target_table, JoinTable):
            return False
        for x, y in itertools.combinations(range(self.source.size), 2):
            if f[source_table.join(x, y)] != target_table.join(f[x], f[y]):
                return False
        if self.mode is EmbeddingMode.JOIN_BOTTOM:
            if source_table.bottom is None or target_table.bottom is None:
                return False
            return f[source_table.bottom] == target_table.bottom
        return True

    def verify(self) -> "EmbeddingWitness":
        return replace(self, verified=self.is_valid())

    def to_dict(self) -> dict:
        return {"mode": self.mode.value, "map": list(self.map), "verified": self.verified}


def find_embedding(
    Q: Poset,
    P: Poset,
    mode: EmbeddingMode = EmbeddingMode.ORDER,
) -> EmbeddingWitness | None:
    """The lexicographically least embedding of Q into P in the given mode.

    ``None`` is definitive: the backtracking search is complete.

    Raises:
        ModeUnsupported: a join mode was requested on a poset without joins.
    """
    fixed: dict[int, int] = {}
    accept = None
    if mode.needs_joins:
        source_table = _join_table(Q, "source", mode)
        target_table = _join_table(P, "target", mode)
        if mode is EmbeddingMode.JOIN_BOTTOM:
            fixed[source_table.bottom] = target_table.bottom

        # each join law is checked as soon as its three elements are all placed
        laws: list[list[tuple[int, int, int]]] = [[] for _ in range(Q.size)]
        for a, b in itertools.combinations(range(Q.size), 2):
            c = source_table.join(a, b)
            laws[max(a, b, c)].append((a, b, c))

        def accept(assignment: list[int], s: int, t: int) -> bool:
            return all(
                assignment[c] == target_table.join(assignment[a], assignment[b])
                for a, b, c in laws[s]
            )

    if Q.size > P.size:
        logger.debug(f"No {mode.value} embedding: source has {Q.size} > {P.size} elements")
        return None

    with tracer.start_as_current_span("find_embedding") as span:
        span.set_attribute("mode", mode.value)
        span.set_attribute("source_size", Q.size)
        span.set_attribute("target_size", P.size)
        found = next(
            order_embeddings(Q, P, accept=accept, fixed=fixed, search=mode.value), None
        )
        span.set_attribute("found", found is not None)

    if found is None:
        logger.info(f"No {mode.value} embedding of {Q.size} into {P.size} elements")
        return None
    witness = EmbeddingWitness(Q, P, found, mode).verify()
    if not witness.verified:
        raise ConstructionInvariantViolated("embedding search", f"map {found} failed verification")
    logger.info(f"Found {mode.value} embedding {found}")
    return witness


def repair_bottom(witness: EmbeddingWitness) -> EmbeddingWitness:
    """Send bottom to bottom, turning a join-preserving embedding into a finite-join one."""
    source_table = _join_table(witness.source, "source", EmbeddingMode.JOIN_BOTTOM)
    target_table = _join_table(witness.target, "target", EmbeddingMode.JOIN_BOTTOM)
    repaired = list(witness.map)
    repaired[source_table.bottom] = target_table.bottom
    return EmbeddingWitness(
        witness.source, witness.target, tuple(repaired), EmbeddingMode.JOIN_BOTTOM
    ).verify()


def ideal_extension(witness: EmbeddingWitness) -> EmbeddingWitness:
    """Lift f: Q -> P to ideals, I -> ↓{f(x) : x in I}."""
    source_ideals = ideals_of(witness.source)
    target_ideals = ideals_of(witness.target)
    f = witness.map
    lifted = []
    for ideal in source_ideals.downsets:
        image = witness.target.down_closure(mask_of(f[x] for x in iter_bits(ideal)))
        lifted.append(target_ideals.index_of(image))
    return EmbeddingWitness(
        source_ideals.poset, target_ideals.poset, tuple(lifted), witness.mode
    ).verify()


def fin_gen_join_map(R: Poset, P: Semilattice, f: Mapping[int, int]) -> EmbeddingWitness:
    """From an order embedding f of the finitely generated downsets of R into P, build
    g(∅) = bottom and g(I) = join of f(↓x) over x in I, which preserves finite unions."""
    if P.bottom is None:
        raise ModeUnsupported("The target needs a least element")
    lattice = fin_gen_downsets(R)
    g = []
    for downset in lattice.downsets:
        if downset == 0:
            g.append(P.bottom)
        else:
            g.append(P.join_all(f[R.down[x]] for x in iter_bits(downset)))
    return EmbeddingWitness(lattice.poset, P.poset, tuple(g), EmbeddingMode.JOIN_BOTTOM).verify()


# ----------------------------------------------------------------------
# separation conditions


@dataclass(frozen=True)
class SeparationVerdict:
    passed: bool
    counterexample: tuple | None
    checked: int

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "checked": self.checked,
        }


def _join_of(P: Semilattice, elements) -> int | None:
    elements = list(elements)
    if not elements and P.bottom is None:
        return None
    return P.join_all(elements)


def check_downset_separation(
    R: Poset, P: Semilattice, g: Mapping[int, int], bound: int | None = None
) -> SeparationVerdict:
    """Check that X ⊄ Y1 ∪ ... ∪ Yn implies g(X) ≰ g(Y1) ∨ ... ∨ g(Yn), for n <= bound.

    g is keyed by the finitely generated downsets of R. The first violation in
    lexicographic order (X, then n, then the Y tuple) is returned.
    """
    bound = get_config().tuple_bound if bound is None else bound
    downsets = fin_gen_downsets(R).downsets
    checked = 0
    for X in downsets:
        for n in range(bound + 1):
            for Ys in itertools.combinations_with_replacement(downsets, n):
                union = 0
                for Y in Ys:
                    union |= Y
                if X & ~union == 0:
                    continue
                joined = _join_of(P, (g[Y] for Y in Ys))
                if joined is None:
                    continue
                checked += 1
                if P.poset.leq(g[X], joined):
                    logger.debug(f"Downset separation fails at {format_bitset(X)} against {Ys}")
                    return SeparationVerdict(False, (X, Ys), checked)
    return SeparationVerdict(True, None, checked)


def check_element_separation(
    R: Poset, P: Semilattice, h: Sequence[int], bound: int | None = None
) -> SeparationVerdict:
    """Check that x ≰ y_i for every i implies h(x) ≰ h(y1) ∨ ... ∨ h(yn), for n <= bound."""
    bound = get_config().tuple_bound if bound is None else bound
    checked = 0
    for x in range(R.size):
        for n in range(bound + 1):
            for ys in itertools.combinations_with_replacement(range(R.size), n):
                if any(R.leq(x, y) for y in ys):
                    continue
                joined = _join_of(P, (h[y] for y in ys))
                if joined is None:
                    continue
                checked += 1
                if P.poset.leq(h[x], joined):
                    logger.debug(f"Element separation fails at {x} against {ys}")
                    return SeparationVerdict(False, (x, ys), checked)
    return SeparationVerdict(True, None, checked)


def _separating_search(domain: Sequence[int], P: Semilattice, bound: int, separated, violates):
    """Backtrack over maps domain -> P, checking each tuple as soon as it is fully assigned."""
    values = range(P.size)
    assignment: list[int] = []

    def fails_at(k: int) -> bool:
        for i in range(k + 1):
            for n in range(bound + 1):
                for js in itertools.combinations_with_replacement(range(k + 1), n):
                    if i != k and k not in js:
                        continue
                    if not separated(domain[i], [domain[j] for j in js]):
                        continue
                    joined = _join_of(P, (assignment[j] for j in js))
                    if joined is not None and violates(assignment[i], joined):
                        return True
        return False

    def extend(k: int) -> tuple[int, ...] | None:
        if k == len(domain):
            return tuple(assignment)
        for v in values:
            assignment.append(v)
            if not fails_at(k):
                result = extend(k + 1)
                if result is not None:
                    return result
            assignment.pop()
        return None

    return extend(0)


def find_downset_separating_map(
    R: Poset, P: Semilattice, bound: int | None = None
) -> dict[int, int] | None:
    """Lexicographically least g on the finitely generated downsets of R that separates."""
    bound = get_config().tuple_bound if bound is None else bound
    downsets = fin_gen_downsets(R).downsets

    def separated(X: int, Ys: list[int]) -> bool:
        union = 0
        for Y in Ys:
            union |= Y
        return X & ~union != 0

    found = _separating_search(downsets, P, bound, separated, P.poset.leq)
    return dict(zip(downsets, found)) if found is not None else None


def find_element_separating_map(
    R: Poset, P: Semilattice, bound: int | None = None
) -> tuple[int, ...] | None:
    bound = get_config().tuple_bound if bound is None else bound

    def separated(x: int, ys: list[int]) -> bool:
        return not any(R.leq(x, y) for y in ys)

    return _separating_search(range(R.size), P, bound, separated, P.poset.leq)


# ----------------------------------------------------------------------
# f -> g -> h -> f'


def witness_to_downset_map(R: Poset, P: Poset, witness: EmbeddingWitness) -> dict[int, int]:
    """Read an embedding of all_downsets(R) into ideals_of(P) as a map of bitsets."""
    downsets = all_downsets(R).downsets
    ideals = ideals_of(P).downsets
    return {d: ideals[witness.map[i]] for i, d in enumerate(downsets)}


def derive_g_from_f(R: Poset, P: Semilattice, f: Mapping[int, int]) -> dict[int, int]:
    """g(X) = least element of f(X) minus the union of f(R ∖ ↑a) over the maximal a of X.

    Raises:
        ClaimViolation: the difference is empty, so f was not an embedding.
    """
    full = R.full_mask
    g = {}
    for X in fin_gen_downsets(R).downsets:
        covered = 0
        for a in R.maximal_elements(X):
            covered |= f[full & ~R.up[a]]
        remaining = f[X] & ~covered
        if not remaining:
            raise ClaimViolation(
                f"No element of f({format_bitset(X)}) escapes the images below it", downset=X
            )
        g[X] = next(iter_bits(remaining))
    return g


def derive_h_from_g(
    R: Poset, P: Semilattice, g: Mapping[int, int], bound: int | None = None
) -> tuple[int, ...]:
    """h(x) = g(↓x).

    Raises:
        PreconditionFailed: g does not pass downset separation.
    """
    verdict = check_downset_separation(R, P, g, bound)
    if not verdict.passed:
        raise PreconditionFailed("downset separation", verdict.counterexample)
    return tuple(g[R.down[x]] for x in range(R.size))


def build_f_from_h(
    R: Poset, P: Semilattice, h: Sequence[int], bound: int | None = None
) -> EmbeddingWitness:
    """f'(I) = the ideal generated by h(I), as an embedding of all_downsets(R) into ideals_of(P).

    Raises:
        PreconditionFailed: h does not pass element separation.
    """
    verdict = check_element_separation(R, P, h, bound)
    if not verdict.passed:
        raise PreconditionFailed("element separation", verdict.counterexample)
    downsets = all_downsets(R)
    ideals = ideals_of(P.poset)
    rebuilt = tuple(
        ideals.index_of(generated_ideal(P, (h[x] for x in iter_bits(I)))) for I in downsets.downsets
    )
    witness = EmbeddingWitness(
        downsets.poset, ideals.poset, rebuilt, EmbeddingMode.JOIN_BOTTOM
    ).verify()
    if not witness.verified:
        raise ConstructionInvariantViolated(
            "rebuilt embedding", f"map {rebuilt} failed verification"
        )
    return witness


@dataclass(frozen=True)
class RoundTripReport:
    embedding: EmbeddingWitness | None
    g: dict[int, int] = field(default_factory=dict)
    h: tuple[int, ...] = ()
    downset_separation: SeparationVerdict | None = None
    element_separation: SeparationVerdict | None = None
    rebuilt: EmbeddingWitness | None = None

    @property
    def found(self) -> bool:
        return self.embedding is not None

    def to_dict(self) -> dict:
        if self.embedding is None:
            return {"found": False}
        return {
            "found": True,
            "f": self.embedding.to_dict(),
            "g": [[format_bitset(X), v] for X, v in sorted(self.g.items())],
            "h": list(self.h),
            "downset_separation": self.downset_separation.to_dict(),
            "element_separation": self.element_separation.to_dict(),
            "f_rebuilt": self.rebuilt.to_dict(),
        }


def embedding_round_trip(
    R: Poset, P: Semilattice, bound: int | None = None, config: LabConfig | None = None
) -> RoundTripReport:
    """Embed all_downsets(R) into ideals_of(P), then run the map through g, h and back."""
    config = get_config(config)
    bound = config.tuple_bound if bound is None else bound
    if P.bottom is None:
        raise ModeUnsupported("The round trip needs a join-semilattice with a least element")
    with tracer.start_as_current_span("embedding_round_trip"):
        source = all_downsets(R, config)
        target = ideals_of(P.poset, config)
        witness = find_embedding(source.poset, target.poset, EmbeddingMode.ORDER)
        if witness is None:
            return RoundTripReport(None)
        f = witness_to_downset_map(R, P.poset, witness)
        g = derive_g_from_f(R, P, f)
        downset_verdict = check_downset_separation(R, P, g, bound)
        h = derive_h_from_g(R, P, g, bound)
        element_verdict = check_element_separation(R, P, h, bound)
        rebuilt = build_f_from_h(R, P, h, bound)
    logger.info(f"Round trip on {R.size} -> {P.size} elements: h = {h}")
    return RoundTripReport(witness, g, h, downset_verdict, element_verdict, rebuilt)


# ----------------------------------------------------------------------
# extension to ideals and generated subsemilattices


@dataclass(frozen=True)
class IdealExtension:
    source: Semilattice
    target: Semilattice
    ideals: tuple[int, ...]
    values: tuple[int, ...]

    def __call__(self, ideal: int) -> int:
        return self.values[self.ideals.index(ideal)]


def extend_to_ideals(
    Q: Semilattice, L: Semilattice, g: Sequence[int], subset_cap: int = 10
) -> IdealExtension:
    """ḡ(I) = join of g over I, for a map g preserving finite joins.

    The result is checked to preserve joins of ideals, and to agree with the
    join of g over every generating set of ideals with at most ``subset_cap``
    members.

    Raises:
        NotJoinPreserving: with the offending pair, or () for the empty join.
    """
    if Q.bottom is None or L.bottom is None or g[Q.bottom] != L.bottom:
        raise NotJoinPreserving(())
    for x, y in itertools.combinations(range(Q.size), 2):
        if g[Q.join(x, y)] != L.join(g[x], g[y]):
            raise NotJoinPreserving((x, y))

    ideals = ideals_of(Q.poset).downsets
    values = tuple(L.join_all(g[x] for x in iter_bits(I)) for I in ideals)
    extension = IdealExtension(Q, L, ideals, values)

    for I, J in itertools.combinations(ideals, 2):
        generated = generated_ideal(Q, (Q.poset.maximal_elements(I) + Q.poset.maximal_elements(J)))
        if extension(generated) != L.join(extension(I), extension(J)):
            raise NotJoinPreserving((I, J))

    for I in ideals:
        if I.bit_count() > subset_cap:
            continue
        members = list(iter_bits(I))
        for r in range(len(members) + 1):
            for A in itertools.combinations(members, r):
                if generated_ideal(Q, A) != I:
                    continue
                if L.join_all(g[a] for a in A) != extension(I):
                    raise NotJoinPreserving((I, A))
    return extension


def join_closure(S: Semilattice, A, include_bottom: bool = False) -> int:
    """Bitset of the closure of A under binary join, with the bottom when requested."""
    closed = mask_of(A)
    if include_bottom and S.bottom is not None:
        closed |= 1 << S.bottom
    frontier = list(iter_bits(closed))
    while frontier:
        fresh = []
        for x in frontier:
            for y in iter_bits(closed):
                z = S.join(x, y)
                if not (closed >> z) & 1:
                    closed |= 1 << z
                    fresh.append(z)
        frontier = fresh
    return closed


def generated_subsemilattice(S: Semilattice, A, include_bottom: bool = False) -> Semilattice:
    elements = list(iter_bits(join_closure(S, A, include_bottom)))
    position = {x: i for i, x in enumerate(elements)}
    rows = tuple(tuple(position[S.join(x, y)] for y in elements) for x in elements)
    sub = S.poset.induced(elements)
    return Semilattice(sub, JoinTable(rows, sub.bottom))


# ----------------------------------------------------------------------
# sierpinskisation extraction from an ideal chain


@dataclass(frozen=True)
class ExtractionReport:
    points: tuple[int, ...]
    f_sets: tuple[int, ...]
    rho: tuple[tuple[int, int], ...]
    R: Poset
    keys: tuple[int, ...]
    S: Poset
    claims: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "points": list(self.points),
            "f_sets": list(self.f_sets),
            "rho": [list(p) for p in self.rho],
            "R_covers": [list(c) for c in self.R.covers()],
            "keys": list(self.keys),
            "S_covers": [list(c) for c in self.S.covers()],
            "size": self.S.size,
            "claims": list(self.claims),
        }


def _claim(passed: bool, name: str, detail: str, ledger: list[str]) -> None:
    if not passed:
        raise ConstructionInvariantViolated(name, detail)
    ledger.append(name)


def extract_sierp(
    P: Semilattice, ideal_chain: Sequence[int], rep: PowersetRepresentation | None = None
) -> ExtractionReport:
    """Read a sierpinskisation off a strictly increasing chain of ideals of P.

    For each step pick x, the least ground point that the next ideal adds under
    the powerset representation, and F, the least element of P whose set holds
    x and lies inside the next ideal's union.

    Raises:
        NotPowersetEmbeddable: P has no least element and no representation was given.
        ChainNotStrict: two consecutive ideals are equal or out of order.
        ConstructionInvariantViolated: one of the structural checks failed.
    """
    rep = rep if rep is not None else powerset_representation(P)
    poset = P.poset
    for i, ideal in enumerate(ideal_chain):
        if ideal >> poset.size:
            raise PreconditionFailed("chain members are subsets of P", format_bitset(ideal))
        if not (poset.is_downset(ideal) and is_up_directed(poset, ideal)):
            raise PreconditionFailed("chain members are ideals", format_bitset(ideal))
        if i and (ideal_chain[i - 1] & ~ideal or ideal_chain[i - 1] == ideal):
            raise ChainNotStrict(i)

    unions = [rep.union(iter_bits(ideal)) for ideal in ideal_chain]
    points, f_sets = [], []
    for beta in range(len(ideal_chain) - 1):
        fresh = unions[beta + 1] & ~unions[beta]
        if not fresh:
            raise ChainNotStrict(beta + 1)
        x = next(iter_bits(fresh))
        F = next(
            p
            for p in range(P.size)
            if (rep.sets[p] >> x) & 1 and rep.sets[p] & ~unions[beta + 1] == 0
        )
        points.append(x)
        f_sets.append(F)

    size = len(points)
    rho = tuple(
        (b1, b2)
        for b1, b2 in itertools.combinations(range(size), 2)
        if (rep.sets[f_sets[b2]] >> points[b1]) & 1
    )
    R = from_covers(size, rho)
    ledger: list[str] = []

    _claim(
        all(a <= b for a in range(size) for b in iter_bits(R.up[a])),
        "chain-extends",
        "the step order does not extend the closure",
        ledger,
    )
    _claim(
        all(R.down[b] >> (b + 1) == 0 for b in range(size)),
        "finite-downsets",
        "a principal downset reaches a later step",
        ledger,
    )

    def phi(downset: int) -> int:
        return rep.union(f_sets[b] for b in iter_bits(downset))

    downsets = all_downsets(R).downsets
    images = {d: phi(d) for d in downsets}
    represented = set(rep.sets)
    _claim(
        all(
            (images[a] & ~images[b] == 0) == (a & ~b == 0)
            for a, b in itertools.product(downsets, repeat=2)
        )
        and all(image in represented for image in images.values()),
        "union-embedding",
        "the union map is not an embedding into the representation",
        ledger,
    )

    keys = tuple(images[R.down[b]] for b in range(size))
    _claim(
        len(set(keys)) == size
        and all(keys[a] <= keys[b] for a in range(size) for b in iter_bits(R.up[a])),
        "linear-extension",
        f"keys {keys} do not extend the closure",
        ledger,
    )

    S = from_leq(size, lambda a, b: a <= b and keys[a] <= keys[b])
    _claim(
        all(R.is_downset(d) for d in all_downsets(S).downsets),
        "downsets-inherited",
        "a downset of the extracted poset is not a downset of the closure",
        ledger,
    )
    logger.info(f"Extracted a {size}-element sierpinskisation with {len(rho)} generating pairs")
    return ExtractionReport(tuple(points), tuple(f_sets), rho, R, keys, S, tuple(ledger))
