import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posets.core import (
    JoinTable,
    Poset,
    Semilattice,
    add_bottom,
    all_posets,
    antichain,
    as_join_semilattice,
    chain,
    direct_sum,
    from_covers,
    height_width,
    isomorphic,
    iter_bits,
    lex_sum,
    linear_extensions,
    product,
    random_poset,
    underline,
)
from posets.exceptions import CycleError, NotJoinSemilattice, OrderAxiomViolated, SizeLimit
from tests.strategies import posets


def vee():
    return from_covers(3, [(0, 2), (1, 2)])


def brute_width(P):
    for r in range(P.size, 0, -1):
        for subset in itertools.combinations(range(P.size), r):
            if not any(P.comparable(x, y) for x, y in itertools.combinations(subset, 2)):
                return r
    return 0


def brute_extension_count(P):
    count = 0
    for perm in itertools.permutations(range(P.size)):
        position = {x: i for i, x in enumerate(perm)}
        if all(position[x] <= position[y] for x in range(P.size) for y in iter_bits(P.up[x])):
            count += 1
    return count


def test_from_covers_closes_relation():
    P = from_covers(4, [(0, 1), (1, 2), (2, 3)])
    assert P == chain(4)
    assert P.covers() == [(0, 1), (1, 2), (2, 3)]


def test_from_covers_rejects_cycle():
    with pytest.raises(CycleError) as exc:
        from_covers(3, [(0, 1), (1, 2), (2, 0)])
    assert exc.value.pair == (0, 1)


def test_from_covers_rejects_out_of_range_pair():
    with pytest.raises(ValueError):
        from_covers(2, [(0, 2)])


def test_constructor_checks_axioms():
    with pytest.raises(OrderAxiomViolated) as exc:
        Poset(2, [0b01, 0b00])
    assert exc.value.axiom == "reflexive"
    with pytest.raises(OrderAxiomViolated) as exc:
        Poset(3, [0b011, 0b110, 0b100])
    assert exc.value.axiom == "transitive"


@settings(max_examples=60, deadline=None)
@given(posets(max_size=7))
def test_order_matches_networkx_closure(P):
    graph = nx.DiGraph()
    graph.add_nodes_from(range(P.size))
    graph.add_edges_from(P.covers())
    closure = nx.transitive_closure_dag(graph)
    for x, y in itertools.product(range(P.size), repeat=2):
        assert P.leq(x, y) == (x == y or closure.has_edge(x, y))


@settings(max_examples=60, deadline=None)
@given(posets(max_size=6))
def test_height_width_witnesses(P):
    hw = height_width(P)
    assert hw.width == brute_width(P)
    assert len(hw.chain) == hw.height
    assert len(hw.antichain) == hw.width
    assert all(P.comparable(x, y) for x, y in itertools.combinations(hw.chain, 2))
    assert not any(P.comparable(x, y) for x, y in itertools.combinations(hw.antichain, 2))


def test_height_width_lexicographically_least():
    hw = height_width(vee())
    assert (hw.height, hw.width) == (2, 2)
    assert hw.chain == (0, 2)
    assert hw.antichain == (0, 1)
    assert height_width(antichain(3)).chain == (0,)


@settings(max_examples=40, deadline=None)
@given(posets(max_size=5))
def test_linear_extension_count_matches_permutations(P):
    result = linear_extensions(P, 1000)
    assert result.total == brute_extension_count(P)
    assert list(result.extensions) == sorted(result.extensions)


def test_linear_extensions_truncate_at_limit():
    result = linear_extensions(antichain(3), 4)
    assert result.truncated
    assert result.extensions[0] == (0, 1, 2)
    assert linear_extensions(antichain(3), 10).total == 6


def test_join_table_or_failing_pair():
    assert as_join_semilattice(antichain(2)) == (0, 1)
    table = as_join_semilattice(chain(3))
    assert isinstance(table, JoinTable)
    assert table.join(0, 2) == 2
    assert table.bottom == 0
    with pytest.raises(NotJoinSemilattice) as exc:
        Semilattice.of(antichain(3))
    assert exc.value.pair == (0, 1)


def test_vee_has_joins_but_no_bottom():
    S = Semilattice.of(vee())
    assert S.join(0, 1) == 2
    assert S.bottom is None
    with pytest.raises(ValueError):
        S.join_all([])


@settings(max_examples=40, deadline=None)
@given(posets(max_size=6), st.randoms(use_true_random=False))
def test_isomorphic_finds_relabelling(P, rnd):
    perm = list(range(P.size))
    rnd.shuffle(perm)
    Q = from_covers(P.size, [(perm[x], perm[y]) for x, y in P.covers()])
    iso = isomorphic(P, Q)
    assert iso is not None
    assert all(
        P.leq(x, y) == Q.leq(iso[x], iso[y]) for x, y in itertools.product(range(P.size), repeat=2)
    )


def test_isomorphic_rejects_different_shapes():
    assert isomorphic(chain(3), antichain(3)) is None
    assert isomorphic(chain(3), chain(4)) is None


def test_sums_and_products():
    boolean = product(chain(2), chain(2))
    assert boolean.size == 4
    assert isomorphic(boolean, from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)])) is not None

    S = direct_sum(chain(2), chain(1))
    assert S.leq(0, 1) and not S.comparable(1, 2)

    L = lex_sum(chain(2), [antichain(2), chain(1)])
    assert L.leq(0, 2) and L.leq(1, 2) and not L.comparable(0, 1)


def test_add_bottom_and_underline():
    P = add_bottom(antichain(2))
    assert P.bottom == 0
    assert P.size == 3
    assert underline(chain(3)) is not None and underline(chain(3)).size == 3
    assert underline(antichain(2)).size == 3


def test_dual_and_induced():
    P = vee()
    assert P.dual().dual() == P
    assert P.dual().bottom == 2
    sub = P.induced([2, 0])
    assert sub.leq(1, 0)


def test_to_networkx_uses_covers():
    graph = chain(3).to_networkx()
    assert sorted(graph.edges) == [(0, 1), (1, 2)]


@pytest.mark.parametrize("size,count", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 16)])
def test_catalogue_counts(size, count):
    assert len(all_posets(size)) == count


@pytest.mark.slow
@pytest.mark.parametrize("size,count", [(5, 63), (6, 318)])
def test_catalogue_larger_sizes(size, count):
    assert len(all_posets(size)) == count


def test_catalogue_bound():
    with pytest.raises(SizeLimit):
        all_posets(7)


def test_random_poset_is_seeded():
    assert random_poset(7, 0.4, seed=3) == random_poset(7, 0.4, seed=3)


def brute_join_table(P):
    """Least upper bounds by exhaustive search, or the first pair without one."""
    joins = {}
    for x, y in itertools.combinations_with_replacement(range(P.size), 2):
        bounds = [z for z in range(P.size) if P.leq(x, z) and P.leq(y, z)]
        least = [u for u in bounds if all(P.leq(u, v) for v in bounds)]
        if not least:
            return (x, y)
        joins[x, y] = least[0]
    return joins


def brute_isomorphism(P, Q):
    for perm in itertools.permutations(range(Q.size)):
        if all(
            P.leq(x, y) == Q.leq(perm[x], perm[y])
            for x, y in itertools.product(range(P.size), repeat=2)
        ):
            return perm
    return None


@settings(max_examples=80, deadline=None)
@given(posets(max_size=6))
def test_join_table_matches_brute_force(P):
    expected = brute_join_table(P)
    result = as_join_semilattice(P)
    if isinstance(expected, tuple):
        assert result == expected
    else:
        assert isinstance(result, JoinTable)
        for (x, y), z in expected.items():
            assert result.join(x, y) == result.join(y, x) == z


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 6),
    st.sampled_from([0.2, 0.4, 0.7]),
    st.integers(0, 2**16),
    st.integers(0, 2**16),
)
def test_isomorphic_matches_brute_force(size, density, seed_p, seed_q):
    P, Q = random_poset(size, density, seed_p), random_poset(size, density, seed_q)
    iso = isomorphic(P, Q)
    assert iso == brute_isomorphism(P, Q)
    assert (isomorphic(Q, P) is None) == (iso is None)
    assert isomorphic(P, P) == tuple(range(size))


@pytest.mark.parametrize("a,b", [(1, 1), (2, 3), (3, 4), (4, 2)])
def test_product_of_chains_height(a, b):
    assert height_width(product(chain(a), chain(b))).height == a + b - 1


@settings(max_examples=40, deadline=None)
@given(posets(max_size=5), posets(max_size=5))
def test_direct_sum_width_adds(P, Q):
    assert height_width(direct_sum(P, Q)).width == height_width(P).width + height_width(Q).width
