"""
Probes over truncation families.

A truncation family is a sequence of finite posets indexed by stage, each
embedded in the next. Probes run searches stage by stage and summarise the
profile. Every verdict is evidence bounded by the stages examined, never a
statement about the infinite object.
"""
import itertools
import logging
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from opentelemetry import trace

from .config import LabConfig, get_config
from .constructions import (
    SierpinskisationSpec,
    build_P_alpha,
    build_Q_alpha,
    build_S_alpha,
    eta_poset,
    lattice_sierp,
    monotonic_sierp,
    omega_star_poset,
    powerset_representation,
    powerset_semilattice,
    sierpinskisation,
    tail_positions,
)
from .core import (
    Poset,
    Semilattice,
    chain,
    direct_sum,
    from_covers,
    isomorphic,
    iter_linear_extensions,
    product,
    width,
)
from .embeddings import EmbeddingMode, EmbeddingWitness, find_embedding
from .exceptions import (
    ConfigError,
    ConstructionInvariantViolated,
    CycleError,
    NotOrdinal,
    NotPowersetEmbeddable,
    SizeLimit,
    UnknownGenerator,
)
from .ideals import fin_gen_downsets
from .metrics import PROBE_STAGE_SECONDS
from .order_types import (
    FiniteCase,
    Fin,
    OmegaDot,
    OrderTypeExpr,
    decompose_omega,
    parse_order_type,
    truncate,
)

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

WQO_CONSISTENT = "wqo-consistent"
NOT_WQO_EVIDENCE = "not-wqo-evidence"
POWERSET_HORN = "powerset-horn"
WQO_HORN = "wqo-horn"
INCONCLUSIVE = "inconclusive"


def _profile_shape(values: list[int]) -> str:
    """'plateau', 'growth' or 'unknown' for a stage profile."""
    if len(values) < 3:
        return "unknown"
    tail = values[-max(3, len(values) // 3) :]
    if len(set(tail)) == 1:
        return "plateau"
    if values[-1] > values[len(values) // 2]:
        return "growth"
    return "unknown"


# ----------------------------------------------------------------------
# families


@dataclass
class TruncationFamily:
    name: str
    first_stage: int
    generator: Callable[[int], Poset]
    join_mode: bool = False
    params: dict = field(default_factory=dict)
    _stages: dict[int, Poset] = field(default_factory=dict, repr=False)
    _inclusions: dict[int, EmbeddingWitness] = field(default_factory=dict, repr=False)

    @property
    def mode(self) -> EmbeddingMode:
        return EmbeddingMode.JOIN_BOTTOM if self.join_mode else EmbeddingMode.ORDER

    def stage(self, n: int) -> Poset:
        if n < self.first_stage:
            raise ValueError(f"Family {self.name} starts at stage {self.first_stage}, got {n}")
        if n not in self._stages:
            self._stages[n] = self.generator(n)
        return self._stages[n]

    def semilattice(self, n: int) -> Semilattice:
        return Semilattice.of(self.stage(n))

    def inclusion(self, n: int) -> EmbeddingWitness:
        """Embedding of stage n into stage n + 1: matched by labels, else searched."""
        if n in self._inclusions:
            return self._inclusions[n]
        small, large = self.stage(n), self.stage(n + 1)
        witness = None
        if small.labels is not None and large.labels is not None:
            position = {label: i for i, label in enumerate(large.labels)}
            if len(position) == large.size and all(label in position for label in small.labels):
                candidate = EmbeddingWitness(
                    small, large, tuple(position[label] for label in small.labels), self.mode
                ).verify()
                witness = candidate if candidate.verified else None
        if witness is None:
            witness = find_embedding(small, large, self.mode)
        if witness is None:
            raise ConstructionInvariantViolated(
                "family inclusion", f"stage {n} of {self.name} does not embed in stage {n + 1}"
            )
        self._inclusions[n] = witness
        return witness

    def compose_inclusions(self, start: int, stop: int) -> tuple[int, ...]:
        """The map stage ``start`` -> stage ``stop`` obtained by chaining inclusions."""
        current = tuple(range(self.stage(start).size))
        for n in range(start, stop):
            step = self.inclusion(n).map
            current = tuple(step[x] for x in current)
        return current


def _alpha(params: dict) -> OrderTypeExpr:
    alpha = params.get("alpha")
    if alpha is None:
        raise ConfigError("This family needs --alpha")
    return parse_order_type(alpha) if isinstance(alpha, str) else alpha


def _family(name, config, params) -> TruncationFamily:
    match name:
        case "chain":
            return TruncationFamily(name, 1, chain, True)
        case "powerset":
            return TruncationFamily(
                name, 0, lambda k: powerset_semilattice(k, config).poset, True
            )
        case "omega-star-fig":
            return TruncationFamily(name, 2, omega_star_poset, True)
        case "eta-fig":
            return TruncationFamily(name, 1, lambda n: eta_poset(n, config), True)
        case "alpha":
            alpha = _alpha(params)
            return TruncationFamily(name, 1, lambda n: truncate(alpha, n).chain, True, params)
        case "sierp":
            alpha = _alpha(params)
            phi, seed = params.get("phi") or "identity", params.get("seed") or 0
            return TruncationFamily(
                name,
                1,
                lambda n: sierpinskisation(SierpinskisationSpec(alpha, n, phi, seed), config),
                False,
                params,
            )
        case "mono-sierp":
            alpha = _alpha(params)
            return TruncationFamily(
                name, 1, lambda n: monotonic_sierp(alpha, n, config), False, params
            )
        case "lattice-sierp":
            alpha = _alpha(params)
            return TruncationFamily(
                name, 1, lambda n: lattice_sierp(alpha, n, config).poset, False, params
            )
        case "S-alpha":
            alpha = _alpha(params)
            return TruncationFamily(
                name, 1, lambda n: build_S_alpha(alpha, n, config), False, params
            )
        case "P-alpha":
            alpha = _alpha(params)
            return TruncationFamily(
                name, 1, lambda n: build_P_alpha(alpha, n, config), True, params
            )
        case "Q-alpha":
            alpha = _alpha(params)
            return TruncationFamily(
                name, 1, lambda n: build_Q_alpha(alpha, n, config).poset, True, params
            )
        case "fin-gen":
            alpha = _alpha(params)
            phi, seed = params.get("phi") or "identity", params.get("seed") or 0

            def fin_gen_stage(n: int) -> Poset:
                base = sierpinskisation(SierpinskisationSpec(alpha, n, phi, seed), config)
                return fin_gen_downsets(base, config=config).as_semilattice().poset

            return TruncationFamily(name, 1, fin_gen_stage, True, params)
    raise UnknownGenerator(name, FAMILIES)


FAMILIES = (
    "chain",
    "powerset",
    "omega-star-fig",
    "eta-fig",
    "alpha",
    "sierp",
    "mono-sierp",
    "lattice-sierp",
    "S-alpha",
    "P-alpha",
    "Q-alpha",
    "fin-gen",
)


def make_family(name: str, config: LabConfig | None = None, **params) -> TruncationFamily:
    """Build a named family; alpha-parametrised families need ``alpha``."""
    return _family(name, get_config(config), {k: v for k, v in params.items() if v is not None})


@dataclass(frozen=True)
class ObstructionSet:
    families: tuple[TruncationFamily, ...]

    @classmethod
    def default(cls, config: LabConfig | None = None) -> "ObstructionSet":
        return cls((make_family("powerset", config), make_family("omega-star-fig", config)))

    @classmethod
    def for_alpha(cls, alpha: str | OrderTypeExpr, config: LabConfig | None = None):
        """α as chains, P_α, Q_α, and the powerset and ω* families."""
        return cls(
            tuple(
                make_family(name, config, alpha=alpha)
                for name in ("alpha", "P-alpha", "Q-alpha")
            )
            + cls.default(config).families
        )


# ----------------------------------------------------------------------
# width growth


@dataclass(frozen=True)
class WidthReport:
    family: str
    stages: tuple[int, ...]
    widths: tuple[int, ...]
    verdict: str
    bound: int
    seed: int
    evidence: bool = True

    def to_dict(self) -> dict:
        return {
            "probe": "width",
            "family": self.family,
            "stages": list(self.stages),
            "widths": list(self.widths),
            "verdict": self.verdict,
            "evidence": self.evidence,
            "budget": self.bound,
            "seed": self.seed,
        }


def _stage_width(F: TruncationFamily, n: int) -> int:
    started = time.perf_counter()
    with tracer.start_as_current_span("width_stage") as span:
        span.set_attribute("family", F.name)
        span.set_attribute("stage", n)
        result = width(F.stage(n))
    PROBE_STAGE_SECONDS.labels(probe="width").observe(time.perf_counter() - started)
    return result


def width_growth(F: TruncationFamily, N: int, config: LabConfig | None = None) -> WidthReport:
    """Widths of stages first_stage .. N - 1.

    Raises:
        ConstructionInvariantViolated: the widths are not monotone.
    """
    config = get_config(config)
    stages = tuple(range(F.first_stage, N))
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            widths = tuple(pool.map(lambda n: _stage_width(F, n), stages))
    else:
        widths = tuple(_stage_width(F, n) for n in stages)

    for (a, wa), (b, wb) in itertools.pairwise(zip(stages, widths)):
        if wb < wa:
            raise ConstructionInvariantViolated(
                "width monotone", f"{F.name} width drops from {wa} at stage {a} to {wb} at {b}"
            )
    match _profile_shape(list(widths)):
        case "plateau":
            verdict = WQO_CONSISTENT
        case "growth":
            verdict = NOT_WQO_EVIDENCE
        case _:
            verdict = INCONCLUSIVE
    logger.warning(f"Width profile of {F.name} up to stage {N - 1} is evidence only: {verdict}")
    return WidthReport(F.name, stages, widths, verdict, N, config.seed)


# ----------------------------------------------------------------------
# obstruction scan


@dataclass(frozen=True)
class FamilyScan:
    family: str
    stages_checked: tuple[int, ...]
    stage_max: int | None
    witness: EmbeddingWitness | None

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "stages_checked": list(self.stages_checked),
            "stage_max": self.stage_max,
            "witness": self.witness.to_dict() if self.witness else None,
        }


@dataclass(frozen=True)
class ObstructionReport:
    scans: tuple[FamilyScan, ...]
    budget: int
    seed: int

    def stage_max(self, family: str) -> int | None:
        return next(s.stage_max for s in self.scans if s.family == family)

    def to_dict(self) -> dict:
        return {
            "probe": "obstruction",
            "families": [s.to_dict() for s in self.scans],
            "budget": self.budget,
            "seed": self.seed,
            "evidence": True,
        }


def _scan_family(P: Poset, F: TruncationFamily, budget: int) -> FamilyScan:
    checked, best, best_stage = [], None, None
    for n in range(F.first_stage, budget + 1):
        try:
            stage = F.stage(n)
        except SizeLimit as e:
            logger.info(f"Scan of {F.name} stops at stage {n}: {e}")
            break
        checked.append(n)
        started = time.perf_counter()
        witness = find_embedding(stage, P, F.mode)
        PROBE_STAGE_SECONDS.labels(probe="obstruction").observe(time.perf_counter() - started)
        if witness is None:
            break
        best, best_stage = witness, n

    # lower stages embed through the family inclusions composed with the witness
    if best_stage is not None:
        for n in range(F.first_stage, best_stage):
            inner = F.compose_inclusions(n, best_stage)
            composed = EmbeddingWitness(
                F.stage(n), P, tuple(best.map[x] for x in inner), F.mode
            ).verify()
            if not composed.verified:
                raise ConstructionInvariantViolated(
                    "scan monotone", f"stage {n} of {F.name} fails through the inclusions"
                )
    return FamilyScan(F.name, tuple(checked), best_stage, best)


def obstruction_scan(
    P: Poset | Semilattice,
    O: ObstructionSet,
    budget: int | None = None,
    config: LabConfig | None = None,
) -> ObstructionReport:
    """For each family, the largest stage up to ``budget`` that embeds into P."""
    config = get_config(config)
    budget = config.obstruction_budget if budget is None else budget
    P = P.poset if isinstance(P, Semilattice) else P
    with tracer.start_as_current_span("obstruction_scan") as span:
        span.set_attribute("target_size", P.size)
        scans = tuple(_scan_family(P, F, budget) for F in O.families)
    for scan in scans:
        logger.info(f"Obstruction {scan.family}: stage max {scan.stage_max} (budget {budget})")
    return ObstructionReport(scans, budget, config.seed)


# ----------------------------------------------------------------------
# dimension


@dataclass(frozen=True)
class Realizer:
    extensions: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.extensions)

    def realizes(self, P: Poset) -> bool:
        positions = [{x: i for i, x in enumerate(ext)} for ext in self.extensions]
        return all(
            P.leq(x, y) == all(pos[x] <= pos[y] for pos in positions)
            for x, y in itertools.product(range(P.size), repeat=2)
        )


def critical_pairs(P: Poset) -> list[tuple[int, int]]:
    """Incomparable (a, b) with everything below a below b and everything above b above a."""
    pairs = []
    for a, b in itertools.permutations(range(P.size), 2):
        if P.comparable(a, b):
            continue
        below_a = P.down[a] & ~(1 << a)
        above_b = P.up[b] & ~(1 << b)
        if below_a & ~P.down[b] == 0 and above_b & ~P.up[a] == 0:
            pairs.append((a, b))
    return sorted(pairs)


def _reversed_extension(P: Poset, reversed_pairs: list[tuple[int, int]]) -> Poset | None:
    """P with b below a for every (a, b), or None when that creates a cycle."""
    try:
        return from_covers(P.size, P.covers() + [(b, a) for a, b in reversed_pairs])
    except CycleError:
        return None


def order_dimension(P: Poset, k: int) -> Realizer | None:
    """A realizer of k linear extensions, or None when none exists.

    Critical pairs are coloured with k colours so that each colour class can be
    reversed in one linear extension; colours are opened in order.
    """
    if k < 1:
        return None
    pairs = critical_pairs(P)
    classes: list[list[tuple[int, int]]] = [[] for _ in range(k)]

    def colour(i: int, opened: int) -> bool:
        if i == len(pairs):
            return True
        for c in range(min(opened + 1, k)):
            classes[c].append(pairs[i])
            if _reversed_extension(P, classes[c]) is not None:
                if colour(i + 1, max(opened, c + 1)):
                    return True
            classes[c].pop()
        return False

    with tracer.start_as_current_span("order_dimension") as span:
        span.set_attribute("size", P.size)
        span.set_attribute("k", k)
        found = colour(0, 0)
    if not found:
        logger.debug(f"No realizer with {k} extensions for {P.size} elements")
        return None
    extensions = tuple(
        next(iter_linear_extensions(_reversed_extension(P, members))) for members in classes
    )
    realizer = Realizer(extensions)
    if not realizer.realizes(P):
        raise ConstructionInvariantViolated("realizer", f"{extensions} does not realize the order")
    return realizer


def dimension_exact(
    P: Poset, kmax: int | None = None, config: LabConfig | None = None
) -> int | None:
    """The least k <= kmax with a realizer, or None (unknown within kmax)."""
    config = get_config(config)
    kmax = config.dimension_budget if kmax is None else kmax
    if P.size > config.max_dimension_elements:
        raise SizeLimit("dimension search", P.size, config.max_dimension_elements)
    if P.size == 0:
        return 0
    for k in range(1, kmax + 1):
        if order_dimension(P, k) is not None:
            logger.info(f"Dimension of a {P.size}-element poset is {k}")
            return k
    logger.info(f"Dimension of a {P.size}-element poset exceeds {kmax}")
    return None


# ----------------------------------------------------------------------
# dichotomy


@dataclass(frozen=True)
class DichotomyReport:
    family: str
    stages: tuple[int, ...]
    powerset_maxima: tuple[int | None, ...]
    widths: tuple[int, ...]
    verdict: str
    budget: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "probe": "dichotomy",
            "family": self.family,
            "stages": list(self.stages),
            "stage_maxima": list(self.powerset_maxima),
            "widths": list(self.widths),
            "verdict": self.verdict,
            "evidence": True,
            "budget": self.budget,
            "seed": self.seed,
        }


def _check_powerset_embedding(S: Semilattice) -> None:
    rep = powerset_representation(S)
    sets = rep.sets
    if len(set(sets)) != S.size or sets[S.bottom] != 0:
        raise NotPowersetEmbeddable("Representation is not injective on the stage")
    for x, y in itertools.combinations(range(S.size), 2):
        if sets[S.join(x, y)] != sets[x] | sets[y]:
            raise NotPowersetEmbeddable(f"Representation does not preserve the join of {x}, {y}")


def dichotomy_probe(
    F: TruncationFamily, budget: int | None = None, config: LabConfig | None = None
) -> DichotomyReport:
    """Which horn the stages up to ``budget`` point to: powersets keep fitting, or they stop.

    Stage widths are reported too, but the verdict reads only the powerset maxima.
    """
    config = get_config(config)
    budget = config.family_budget if budget is None else budget
    powerset = ObstructionSet((make_family("powerset", config),))
    stages = tuple(range(F.first_stage, budget + 1))
    maxima, widths = [], []
    for n in stages:
        S = F.semilattice(n)
        _check_powerset_embedding(S)
        scan = obstruction_scan(S, powerset, config.max_powerset_k, config)
        maxima.append(scan.stage_max("powerset"))
        widths.append(width(S.poset))

    match _profile_shape([m or 0 for m in maxima]):
        case "plateau":
            verdict = WQO_HORN
        case "growth":
            verdict = POWERSET_HORN
        case _:
            verdict = INCONCLUSIVE
    logger.warning(f"Dichotomy for {F.name} up to stage {budget} is evidence only: {verdict}")
    return DichotomyReport(
        F.name, stages, tuple(maxima), tuple(widths), verdict, budget, config.seed
    )


# ----------------------------------------------------------------------
# structural probes on sierpinskisations


@dataclass(frozen=True)
class ContainmentReport:
    target: Poset
    stage: int
    samples: int
    seed: int
    failures: tuple[int, ...]
    phi: str = "random"

    def to_dict(self) -> dict:
        return {
            "probe": "containment",
            "target_size": self.target.size,
            "stage": self.stage,
            "phi": self.phi,
            "samples": self.samples,
            "failures": list(self.failures),
            "seed": self.seed,
            "evidence": True,
        }


def monotonic_containment(
    alpha_prime: OrderTypeExpr = Fin(2),
    stage: int = 8,
    m: int = 4,
    samples: int = 100,
    seed: int = 0,
    config: LabConfig | None = None,
    phi: str = "random",
) -> ContainmentReport:
    """Check that seeded sierpinskisations of ω·α' contain the monotonic one of size m.

    With the default admissible phi the answer is fixed by the sampler: for
    α' = 2 at stage 8 the rounds always hold two points of column 0, a later
    point of column 1 and a still later point of column 0, which is a copy of
    the 4-element core. ``phi="shuffle"`` drops the admissibility rule.
    """
    target = monotonic_sierp(alpha_prime, m, config)
    alpha = OmegaDot(alpha_prime)
    failures = []
    for s in range(seed, seed + samples):
        P = sierpinskisation(SierpinskisationSpec(alpha, stage, phi, s), config)
        if find_embedding(target, P) is None:
            logger.warning(f"Sample {s} of {alpha} at stage {stage} misses the monotonic core")
            failures.append(s)
    return ContainmentReport(target, stage, samples, seed, tuple(failures), phi)


@dataclass(frozen=True)
class SplitReport:
    poset: Poset
    rest: tuple[int, ...]
    tail: tuple[int, ...]

    @property
    def found(self) -> bool:
        return bool(self.tail) and len(self.rest) >= 2

    def to_dict(self) -> dict:
        return {
            "probe": "split",
            "found": self.found,
            "rest": list(self.rest),
            "tail": list(self.tail),
        }


def direct_sum_split(
    alpha: OrderTypeExpr, stage: int, config: LabConfig | None = None
) -> SplitReport:
    """Find the trailing finite points together with everything incomparable to all of them.

    The two parts induce a direct sum; the split counts as found once the
    finite part is complete and the other part has at least two points.
    """
    P = sierpinskisation(SierpinskisationSpec(alpha, stage), config)
    finite = decompose_omega(alpha)
    n = 0 if isinstance(finite, FiniteCase) else finite.n
    tail = tuple(tail_positions(alpha, stage))
    if len(tail) < n or not tail:
        return SplitReport(P, (), ())
    tail_mask = sum(1 << t for t in tail)
    rest = tuple(
        x for x in range(P.size) if x not in tail and not P.comparable_mask(x) & tail_mask
    )
    combined = P.induced(rest + tail)
    if combined != direct_sum(P.induced(rest), P.induced(tail)):
        raise ConstructionInvariantViolated("direct sum", f"parts {rest} and {tail} interact")
    return SplitReport(P, rest, tail)


@dataclass(frozen=True)
class ProductReport:
    stage: int
    q_size: int
    product_size: int
    isomorphism: tuple[int, ...] | None

    def to_dict(self) -> dict:
        return {
            "probe": "product",
            "stage": self.stage,
            "q_size": self.q_size,
            "product_size": self.product_size,
            "isomorphic": self.isomorphism is not None,
            "isomorphism": list(self.isomorphism) if self.isomorphism else None,
        }


def product_decomposition(
    alpha: OrderTypeExpr, stage: int, config: LabConfig | None = None
) -> ProductReport:
    """Compare Q_α with I_<ω(Ω(α')) × (n + 1) for α = ω·α' + n."""
    decomposition = decompose_omega(alpha)
    if isinstance(decomposition, FiniteCase):
        raise NotOrdinal(f"{alpha} has no ω·α' part to split off")
    Q = build_Q_alpha(alpha, stage, config).poset
    core = monotonic_sierp(decomposition.alpha_prime, stage, config)
    base = fin_gen_downsets(core, config=config)
    target = product(base.poset, chain(decomposition.n + 1))
    iso = isomorphic(Q, target)
    logger.info(f"Q at stage {stage}: {Q.size} vs {target.size} elements, iso {iso is not None}")
    return ProductReport(stage, Q.size, target.size, iso)
