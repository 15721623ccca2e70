import pytest

from posets.config import LabConfig
from posets.constructions import (
    SierpinskisationSpec,
    monotonic_sierp,
    omega_star_poset,
    powerset_semilattice,
    sierpinskisation,
)
from posets.core import antichain, chain, from_covers, width
from posets.embeddings import find_embedding
from posets.exceptions import (
    ConfigError,
    ConstructionInvariantViolated,
    NotOrdinal,
    SizeLimit,
    UnknownGenerator,
)
from posets.order_types import Fin, OmegaDot, parse_order_type
from posets.probes import (
    INCONCLUSIVE,
    NOT_WQO_EVIDENCE,
    POWERSET_HORN,
    WQO_CONSISTENT,
    WQO_HORN,
    ObstructionSet,
    Realizer,
    TruncationFamily,
    critical_pairs,
    dichotomy_probe,
    dimension_exact,
    direct_sum_split,
    make_family,
    monotonic_containment,
    obstruction_scan,
    order_dimension,
    product_decomposition,
    width_growth,
)


def test_powerset_widths_are_central_binomials():
    report = width_growth(make_family("powerset"), 6)
    assert report.stages == (0, 1, 2, 3, 4, 5)
    assert report.widths == (1, 1, 2, 3, 6, 10)
    assert report.verdict == NOT_WQO_EVIDENCE
    assert report.to_dict()["evidence"] is True


@pytest.mark.parametrize("phi", ["identity", "diagonal"])
def test_omega_two_family_width_stays_two(phi):
    report = width_growth(make_family("sierp", alpha="w.(2)", phi=phi), 9)
    assert max(report.widths) == 2
    assert report.verdict == WQO_CONSISTENT


def test_eta_family_widths():
    report = width_growth(make_family("sierp", alpha="eta"), 9)
    assert report.widths[2:] == (2, 3, 3, 3, 3, 4)
    assert report.verdict == NOT_WQO_EVIDENCE


def test_width_growth_is_independent_of_workers():
    single = width_growth(make_family("powerset"), 5, LabConfig(workers=1))
    threaded = width_growth(make_family("powerset"), 5, LabConfig(workers=3))
    assert single.to_dict() == threaded.to_dict()


def test_width_growth_rejects_shrinking_families():
    shrinking = TruncationFamily("shrinking", 1, lambda n: antichain(4 - n))
    with pytest.raises(ConstructionInvariantViolated):
        width_growth(shrinking, 4)


def test_short_profiles_are_inconclusive():
    assert width_growth(make_family("chain"), 3).verdict == INCONCLUSIVE


def test_family_inclusions_compose():
    F = make_family("omega-star-fig")
    assert F.inclusion(3).map == (0, 1, 2, 4)
    assert F.inclusion(3).verified
    assert F.compose_inclusions(2, 4) == (0, 1)
    with pytest.raises(ValueError):
        F.stage(1)


def test_family_errors():
    with pytest.raises(ConfigError):
        make_family("sierp")
    with pytest.raises(UnknownGenerator):
        make_family("figure9")


def test_obstruction_set_for_alpha():
    names = [F.name for F in ObstructionSet.for_alpha("w").families]
    assert names == ["alpha", "P-alpha", "Q-alpha", "powerset", "omega-star-fig"]


def test_powersets_in_a_chain():
    report = obstruction_scan(chain(10), ObstructionSet((make_family("powerset"),)), 5)
    assert report.stage_max("powerset") == 1
    assert report.scans[0].stages_checked == (0, 1, 2)
    assert report.to_dict()["families"][0]["witness"]["mode"] == "join-bottom"


@pytest.mark.slow
def test_omega_star_stages_in_powerset_four():
    O = ObstructionSet((make_family("omega-star-fig"),))
    report = obstruction_scan(powerset_semilattice(4), O, 5)
    assert report.stage_max("omega-star-fig") == 4
    assert report.scans[0].stages_checked == (2, 3, 4, 5)


@pytest.mark.slow
def test_powersets_in_omega_star_six():
    report = obstruction_scan(omega_star_poset(6), ObstructionSet.default(), 4)
    assert report.stage_max("powerset") == 2
    assert report.stage_max("omega-star-fig") == 4


def test_obstruction_scan_stops_at_size_limit():
    config = LabConfig(max_powerset_k=2)
    O = ObstructionSet((make_family("powerset", config),))
    report = obstruction_scan(powerset_semilattice(3), O, 5, config)
    assert report.scans[0].stages_checked == (0, 1, 2)
    assert report.stage_max("powerset") == 2


def test_critical_pairs():
    assert critical_pairs(antichain(2)) == [(0, 1), (1, 0)]
    assert critical_pairs(chain(3)) == []
    assert critical_pairs(powerset_semilattice(3).poset) == [(1, 6), (2, 5), (4, 3)]


@pytest.mark.parametrize(
    "P,expected",
    [
        (chain(4), 1),
        (antichain(2), 2),
        (antichain(0), 0),
        (from_covers(3, [(0, 2), (1, 2)]), 2),
        (powerset_semilattice(2).poset, 2),
        (powerset_semilattice(3).poset, 3),
    ],
)
def test_dimension_exact(P, expected):
    assert dimension_exact(P) == expected


def test_realizer_intersects_to_the_order():
    P = powerset_semilattice(3).poset
    realizer = order_dimension(P, 3)
    assert realizer.k == 3
    assert realizer.realizes(P)
    assert order_dimension(P, 2) is None
    assert not Realizer(((0, 1, 2, 3, 4, 5, 6, 7),)).realizes(P)


def test_powerset_four_needs_four_extensions():
    P = powerset_semilattice(4).poset
    assert order_dimension(P, 3) is None
    with pytest.raises(SizeLimit):
        dimension_exact(P)
    assert dimension_exact(P, 3, LabConfig(max_dimension_elements=16)) is None


def test_dichotomy_on_powersets():
    report = dichotomy_probe(make_family("powerset"), 4)
    assert report.powerset_maxima == (0, 1, 2, 3, 4)
    assert report.verdict == POWERSET_HORN


def test_dichotomy_on_chains():
    report = dichotomy_probe(make_family("chain"), 6)
    assert report.powerset_maxima == (0, 1, 1, 1, 1, 1)
    assert report.verdict == WQO_HORN
    assert report.to_dict()["stage_maxima"] == [0, 1, 1, 1, 1, 1]


@pytest.mark.slow
def test_dichotomy_on_finitely_generated_downsets_of_omega_two():
    report = dichotomy_probe(make_family("fin-gen", alpha="w.(2)"), 8)
    assert report.powerset_maxima == (1, 1, 1, 2, 2, 2, 2, 2)
    assert report.verdict == WQO_HORN
    # widths grow without moving the verdict
    assert report.widths[0] < report.widths[-1]


def test_random_sierpinskisations_contain_the_monotonic_core():
    report = monotonic_containment(Fin(2), stage=8, m=4, samples=100, seed=0)
    assert report.failures == ()
    assert report.target.size == 4


def test_containment_rests_on_the_admissible_sampler():
    core = monotonic_sierp(Fin(2), 4)
    omega_two = OmegaDot(Fin(2))
    # column-monotone but unfair: all of column 0 first gives a chain
    unfair = sierpinskisation(SierpinskisationSpec(omega_two, 8, tuple(range(8))))
    assert width(unfair) == 1
    assert find_embedding(core, unfair) is None
    decreasing = sierpinskisation(SierpinskisationSpec(omega_two, 8, tuple(reversed(range(8)))))
    assert width(decreasing) == 8
    assert find_embedding(core, decreasing) is None

    report = monotonic_containment(Fin(2), stage=8, m=4, samples=100, seed=0, phi="shuffle")
    assert report.failures
    assert report.to_dict()["phi"] == "shuffle"


def test_direct_sum_split():
    alpha = parse_order_type("w.(2)+2")
    report = direct_sum_split(alpha, 6)
    assert report.found
    assert report.tail == (1, 3)
    assert report.rest == (4, 5)
    assert not direct_sum_split(alpha, 5).found


def test_product_decomposition():
    report = product_decomposition(parse_order_type("w.(2)+1"), 4)
    assert report.q_size == report.product_size == 12
    assert report.isomorphism is not None
    with pytest.raises(NotOrdinal):
        product_decomposition(Fin(3), 4)
