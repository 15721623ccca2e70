"""
Generators for the named posets of the lab.

Sierpinskisations are built on the first ``stage`` points of an order type:
element x is the x-th point on the ω side, and x <= y iff x <= y as integers
and phi(x) <= phi(y) in the truncated chain.
"""
import logging
import random
from collections.abc import Callable
from dataclasses import dataclass, field
from itertools import combinations

from .config import LabConfig, get_config
from .core import (
    BOTTOM_LABEL,
    JoinTable,
    Poset,
    Semilattice,
    antichain,
    chain,
    direct_sum,
    format_bitset,
    from_leq,
    lex_sum,
)
from .exceptions import ConfigError, NotOrdinal, NotPowersetEmbeddable, SizeLimit, UnknownGenerator
from .order_types import (
    FiniteCase,
    FirstBlocked,
    Fin,
    OmegaDot,
    OmegaHead,
    OrderTypeExpr,
    PCase,
    Sum,
    TruncatedChain,
    classify_for_P,
    decompose_omega,
    format_key,
    has_first_element,
    is_ordinal,
    normalize,
    parse_order_type,
    truncate,
)

logger = logging.getLogger(__name__)

PHI_STRATEGIES = ("identity", "reverse", "diagonal", "random", "shuffle")


def _check_size(what: str, size: int, config: LabConfig) -> None:
    if size > config.max_elements:
        raise SizeLimit(what, size, config.max_elements)


# ----------------------------------------------------------------------
# sierpinskisations


@dataclass(frozen=True)
class SierpinskisationSpec:
    alpha: OrderTypeExpr
    stage: int
    phi: str | tuple[int, ...] = "identity"
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.phi, str) and self.phi not in PHI_STRATEGIES:
            raise ConfigError(
                f"Unknown phi strategy '{self.phi}', expected one of {PHI_STRATEGIES}"
            )
        if not isinstance(self.phi, str):
            object.__setattr__(self, "phi", tuple(self.phi))


def _grid_coordinates(alpha: OrderTypeExpr, key) -> tuple[int, int] | None:
    """(row i, column key) of a point of an ω·β summand, or None for other points."""
    match alpha:
        case OmegaDot():
            return key[1], key[0]
        case Sum(parts):
            j, inner = key
            coords = _grid_coordinates(parts[j], inner)
            return None if coords is None else (coords[0], (j, coords[1]))
    return None


def _diagonal_order(alpha: OrderTypeExpr, tc: TruncatedChain) -> list[int]:
    # tail points first, then grid points by diagonal
    column_rank: dict = {}
    ranked = []
    for e, key in enumerate(tc.enumeration):
        coords = _grid_coordinates(alpha, key)
        if coords is None:
            ranked.append(((0, e, 0), e))
        else:
            row, column = coords
            rank = column_rank.setdefault(column, len(column_rank))
            ranked.append(((1, row + rank, rank), e))
    return [e for _, e in sorted(ranked)]


def _shuffled_order(tc: TruncatedChain, seed: int) -> list[int]:
    order = list(range(tc.size))
    random.Random(seed).shuffle(order)
    return order


def _random_order(alpha: OrderTypeExpr, tc: TruncatedChain, seed: int) -> list[int]:
    """A seeded admissible order; for ω·α' it is column-monotone and fair.

    Rows increase along every column and the live columns interleave in rounds,
    each round visiting every column once in a shuffled order. Other order
    types get a uniform shuffle.
    """
    if not isinstance(alpha, OmegaDot):
        return _shuffled_order(tc, seed)
    rnd = random.Random(seed)
    columns: dict = {}
    for e, (beta, row) in enumerate(tc.enumeration):
        columns.setdefault(beta, []).append((row, e))
    queues = [sorted(points) for _, points in sorted(columns.items())]
    order: list[int] = []
    while any(queues):
        live = [q for q in queues if q]
        rnd.shuffle(live)
        for queue in live:
            order.append(queue.pop(0)[1])
    return order


def resolve_phi(spec: SierpinskisationSpec, tc: TruncatedChain) -> tuple[int, ...]:
    """Chain position of each ω-side element."""
    m = tc.size
    match spec.phi:
        case "identity":
            order = list(range(m))
        case "reverse":
            order = list(reversed(range(m)))
        case "diagonal":
            order = _diagonal_order(spec.alpha, tc)
        case "random":
            order = _random_order(spec.alpha, tc, spec.seed)
        case "shuffle":
            order = _shuffled_order(tc, spec.seed)
        case explicit:
            if sorted(explicit) != list(range(m)):
                raise ConfigError(f"phi must be a permutation of 0..{m - 1}, got {list(explicit)}")
            return tuple(explicit)
    return tuple(tc.positions[e] for e in order)


def sierpinskisation(spec: SierpinskisationSpec, config: LabConfig | None = None) -> Poset:
    config = get_config(config)
    tc = truncate(spec.alpha, spec.stage)
    _check_size("sierpinskisation", tc.size, config)
    phi = resolve_phi(spec, tc)
    labels = [tc.position_labels[p] for p in phi]
    return from_leq(tc.size, lambda x, y: x <= y and phi[x] <= phi[y], labels)


def monotonic_sierp(
    alpha_prime: OrderTypeExpr, stage: int, config: LabConfig | None = None
) -> Poset:
    """The canonical Ω(α') stage: ω·α' enumerated along diagonals."""
    alpha = OmegaDot(alpha_prime)
    tc = truncate(alpha, stage)
    last_row: dict = {}
    for beta, row in tc.enumeration:
        if last_row.get(beta, -1) >= row:
            raise AssertionError(f"Enumeration is not monotone in column {beta}")
        last_row[beta] = row
    return sierpinskisation(SierpinskisationSpec(alpha, stage), config)


def lattice_sierp(alpha: OrderTypeExpr, stage: int, config: LabConfig | None = None) -> Semilattice:
    """Join-closure of Ω(α) inside ω × α, where point x of column β sits at (x, β)."""
    config = get_config(config)
    tc = truncate(OmegaDot(alpha), stage)
    points = {(x, beta) for x, (beta, _) in enumerate(tc.enumeration)}
    frontier = set(points)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in points:
                joined = (max(a[0], b[0]), max(a[1], b[1]))
                if joined not in points:
                    fresh.add(joined)
        if len(points) + len(fresh) > config.max_elements:
            raise SizeLimit(
                "lattice sierpinskisation", len(points) + len(fresh), config.max_elements
            )
        points |= fresh
        frontier = fresh
    elements = sorted(points)
    index = {p: i for i, p in enumerate(elements)}
    labels = [f"({x},{format_key(beta)})" for x, beta in elements]
    poset = from_leq(
        len(elements),
        lambda i, j: elements[i][0] <= elements[j][0] and elements[i][1] <= elements[j][1],
        labels,
    )
    rows = tuple(
        tuple(index[(max(a[0], b[0]), max(a[1], b[1]))] for b in elements) for a in elements
    )
    return Semilattice(poset, JoinTable(rows, poset.bottom))


def add_bottom_semilattice(S: Semilattice) -> Semilattice:
    n = S.size
    up = [(1 << (n + 1)) - 1] + [row << 1 for row in S.poset.up]
    labels = [BOTTOM_LABEL, *(S.poset.label(x) for x in range(n))]
    rows = [tuple(range(n + 1))]
    for x in range(n):
        rows.append((x + 1, *(S.join(x, y) + 1 for y in range(n))))
    return Semilattice(Poset(n + 1, up, labels), JoinTable(tuple(rows), 0))


def underline_for(S: Semilattice, alpha: OrderTypeExpr) -> Semilattice:
    """Stage-wise underlining that agrees with underlining the whole family.

    A least element is adjoined unless this stage has one and alpha has a first
    element. Early stages of a family without a least element can have one;
    they still get a fresh bottom here, so the stages stay
    bottom-preserving sub-semilattices of one another. Plain ``underline``
    looks at the stage alone.
    """
    if S.bottom is not None and has_first_element(alpha):
        return S
    return add_bottom_semilattice(S)


# ----------------------------------------------------------------------
# named posets


def omega_star_poset(n: int) -> Poset:
    """Bottom plus all pairs i < j < n, with (i,j) <= (i',j') iff i' <= i and j <= j'."""
    if n < 2:
        raise ConfigError(f"omega-star poset needs n >= 2, got {n}")
    pairs = list(combinations(range(n), 2))
    labels = [BOTTOM_LABEL] + [f"({i},{j})" for i, j in pairs]

    def leq(a: int, b: int) -> bool:
        if a == 0:
            return True
        if b == 0:
            return False
        (i, j), (k, m) = pairs[a - 1], pairs[b - 1]
        return k <= i and j <= m

    return from_leq(len(pairs) + 1, leq, labels)


def eta_poset(n: int, config: LabConfig | None = None) -> Poset:
    """Lattice sierpinskisation of η with a new least element."""
    if n < 1:
        raise ConfigError(f"eta poset needs n >= 1, got {n}")
    return add_bottom_semilattice(lattice_sierp(parse_order_type("eta"), n, config)).poset


def powerset_semilattice(k: int, config: LabConfig | None = None) -> Semilattice:
    """Subsets of {0..k-1} by inclusion; element index is the subset bitmask."""
    config = get_config(config)
    if k > config.max_powerset_k:
        raise SizeLimit("powerset ground set", k, config.max_powerset_k)
    size = 1 << k
    _check_size("powerset", size, config)
    up = [sum(1 << t for t in range(size) if t & s == s) for s in range(size)]
    rows = tuple(tuple(s | t for t in range(size)) for s in range(size))
    poset = Poset(size, up, [format_bitset(s) for s in range(size)])
    return Semilattice(poset, JoinTable(rows, 0))


@dataclass(frozen=True)
class PowersetRepresentation:
    """Union-preserving embedding of a finite lattice into subsets of its meet-irreducibles."""

    irreducibles: tuple[int, ...]
    sets: tuple[int, ...]

    @property
    def ground_size(self) -> int:
        return len(self.irreducibles)

    def union(self, elements) -> int:
        result = 0
        for x in elements:
            result |= self.sets[x]
        return result


def powerset_representation(S: Semilattice) -> PowersetRepresentation:
    """Send x to the set of meet-irreducibles it is not below.

    Raises:
        NotPowersetEmbeddable: S has no least element.
    """
    P = S.poset
    if S.bottom is None:
        raise NotPowersetEmbeddable(
            "A join-semilattice without a least element has no such embedding"
        )
    upper_covers = [0] * P.size
    for x, y in P.covers():
        upper_covers[x] += 1
    irreducibles = tuple(x for x in range(P.size) if upper_covers[x] == 1)
    sets = tuple(
        sum(1 << i for i, m in enumerate(irreducibles) if not P.leq(x, m)) for x in range(P.size)
    )
    return PowersetRepresentation(irreducibles, sets)


# ----------------------------------------------------------------------
# S_alpha, P_alpha, Q_alpha


def build_S_alpha(alpha: OrderTypeExpr, stage: int, config: LabConfig | None = None) -> Poset:
    if not is_ordinal(alpha):
        raise NotOrdinal(f"{alpha} is not an ordinal")
    decomposition = decompose_omega(alpha)
    if isinstance(decomposition, FiniteCase):
        return truncate(alpha, stage).chain
    tail = chain(decomposition.n).with_labels([f"t{i}" for i in range(decomposition.n)])
    return direct_sum(monotonic_sierp(decomposition.alpha_prime, stage, config), tail)


def build_P_alpha(
    alpha: OrderTypeExpr, stage: int, config: LabConfig | None = None, case: PCase | None = None
) -> Poset:
    case = case if case is not None else classify_for_P(alpha)
    match case:
        case FirstBlocked(n, alpha_prime):
            top = underline_for(lattice_sierp(alpha_prime, stage, config), alpha_prime).poset
            return lex_sum(chain(2), [chain(n).with_labels([f"c{i}" for i in range(n)]), top])
        case OmegaHead(alpha_prime):
            shifted = normalize(Sum((Fin(1), alpha_prime)))
            return underline_for(lattice_sierp(shifted, stage, config), shifted).poset
    raise TypeError(f"Unknown case {case!r}")


def build_Q_alpha(alpha: OrderTypeExpr, stage: int, config: LabConfig | None = None) -> Semilattice:
    from .ideals import fin_gen_downsets

    return fin_gen_downsets(build_S_alpha(alpha, stage, config), config=config).as_semilattice()


# ----------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Generator:
    name: str
    params: tuple[str, ...]
    build: Callable[..., Poset | Semilattice]
    defaults: dict = field(default_factory=dict)

    def __call__(self, config: LabConfig | None = None, **params) -> Poset:
        missing = [p for p in self.params if params.get(p) is None and p not in self.defaults]
        if missing:
            raise ConfigError(f"Generator '{self.name}' needs --{' --'.join(missing)}")
        values = {
            p: params[p] if params.get(p) is not None else self.defaults[p] for p in self.params
        }
        for p in ("n", "k", "stage"):
            if isinstance(values.get(p), int) and values[p] < 0:
                raise ConfigError(f"Generator '{self.name}' needs --{p} >= 0, got {values[p]}")
        if isinstance(values.get("alpha"), str):
            values["alpha"] = parse_order_type(values["alpha"])
        result = self.build(config=config, **values)
        poset = result.poset if isinstance(result, Semilattice) else result
        _check_size(self.name, poset.size, get_config(config))
        logger.info(f"Generated {self.name} {values}: {poset.size} elements")
        return poset


def _sierp(config=None, alpha=None, stage=None, phi="identity", seed=0) -> Poset:
    if isinstance(phi, str) and phi not in PHI_STRATEGIES:
        try:
            phi = tuple(int(p) for p in phi.split(","))
        except ValueError:
            raise ConfigError(
                f"phi must be one of {PHI_STRATEGIES} or a comma-separated permutation, got '{phi}'"
            ) from None
    return sierpinskisation(SierpinskisationSpec(alpha, stage, phi, seed), config)


def _omega_star(config=None, n=None) -> Poset:
    return omega_star_poset(n)


def _eta(config=None, n=None) -> Poset:
    return eta_poset(n, config)


def _mono_sierp(config=None, alpha=None, stage=None) -> Poset:
    return monotonic_sierp(alpha, stage, config)


def _lattice_sierp(config=None, alpha=None, stage=None) -> Semilattice:
    return lattice_sierp(alpha, stage, config)


def _powerset(config=None, k=None) -> Semilattice:
    return powerset_semilattice(k, config)


def _s_alpha(config=None, alpha=None, stage=None) -> Poset:
    return build_S_alpha(alpha, stage, config)


def _p_alpha(config=None, alpha=None, stage=None) -> Poset:
    return build_P_alpha(alpha, stage, config)


def _q_alpha(config=None, alpha=None, stage=None) -> Semilattice:
    return build_Q_alpha(alpha, stage, config)


def _chain(config=None, n=None) -> Poset:
    return chain(n)


def _antichain(config=None, n=None) -> Poset:
    return antichain(n)


GENERATORS: dict[str, Generator] = {
    g.name: g
    for g in (
        Generator("omega-star-fig", ("n",), _omega_star),
        Generator("eta-fig", ("n",), _eta),
        Generator(
            "sierp", ("alpha", "stage", "phi", "seed"), _sierp, {"phi": "identity", "seed": 0}
        ),
        Generator("mono-sierp", ("alpha", "stage"), _mono_sierp),
        Generator("lattice-sierp", ("alpha", "stage"), _lattice_sierp),
        Generator("powerset", ("k",), _powerset),
        Generator("S-alpha", ("alpha", "stage"), _s_alpha),
        Generator("P-alpha", ("alpha", "stage"), _p_alpha),
        Generator("Q-alpha", ("alpha", "stage"), _q_alpha),
        Generator("chain", ("n",), _chain),
        Generator("antichain", ("n",), _antichain),
    )
}


def generate(name: str, config: LabConfig | None = None, **params) -> Poset:
    try:
        generator = GENERATORS[name]
    except KeyError:
        raise UnknownGenerator(name, GENERATORS) from None
    return generator(config=config, **params)


def tail_positions(alpha: OrderTypeExpr, stage: int) -> list[int]:
    """ω-side positions of the points of a trailing finite summand, under identity phi."""
    if not isinstance(alpha, Sum) or not isinstance(alpha.parts[-1], Fin):
        return []
    last = len(alpha.parts) - 1
    return [e for e, key in enumerate(truncate(alpha, stage).enumeration) if key[0] == last]
