import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posets.constructions import omega_star_poset, powerset_semilattice
from posets.core import (
    JoinTable,
    Semilattice,
    all_posets,
    antichain,
    as_join_semilattice,
    chain,
    from_covers,
    iter_bits,
)
from posets.embeddings import (
    EmbeddingMode,
    EmbeddingWitness,
    build_f_from_h,
    check_downset_separation,
    check_element_separation,
    derive_g_from_f,
    derive_h_from_g,
    embedding_round_trip,
    extend_to_ideals,
    extract_sierp,
    fin_gen_join_map,
    find_downset_separating_map,
    find_element_separating_map,
    find_embedding,
    generated_subsemilattice,
    ideal_extension,
    join_closure,
    repair_bottom,
)
from posets.exceptions import (
    ChainNotStrict,
    ClaimViolation,
    ModeUnsupported,
    NotJoinPreserving,
    PreconditionFailed,
)
from posets.ideals import all_downsets, fin_gen_downsets, ideals_of, maximal_chains
from tests.strategies import posets

CLAIMS = (
    "chain-extends",
    "finite-downsets",
    "union-embedding",
    "linear-extension",
    "downsets-inherited",
)


def vee():
    return from_covers(3, [(0, 2), (1, 2)])


def test_order_embedding_is_lexicographically_least():
    witness = find_embedding(chain(2), powerset_semilattice(2).poset)
    assert witness.map == (0, 1)
    assert witness.verified


def test_no_embedding_is_definitive():
    assert find_embedding(antichain(2), chain(3)) is None
    assert find_embedding(chain(4), chain(3)) is None


def test_join_bottom_embedding_of_diamond():
    witness = find_embedding(omega_star_poset(3), omega_star_poset(4), EmbeddingMode.JOIN_BOTTOM)
    assert witness.map == (0, 1, 2, 4)
    assert witness.to_dict() == {"mode": "join-bottom", "map": [0, 1, 2, 4], "verified": True}


def test_join_modes_need_joins():
    with pytest.raises(ModeUnsupported):
        find_embedding(antichain(2), chain(3), EmbeddingMode.JOIN)
    with pytest.raises(ModeUnsupported):
        find_embedding(chain(1), vee(), EmbeddingMode.JOIN_BOTTOM)


def test_join_mode_is_stricter_than_order_mode():
    # a 3-chain sits in the diamond, the diamond sits in no chain
    diamond = powerset_semilattice(2).poset
    assert find_embedding(chain(3), diamond).map == (0, 1, 3)
    assert find_embedding(diamond, chain(4), EmbeddingMode.JOIN) is None


def test_witness_validation():
    P = powerset_semilattice(2).poset
    assert not EmbeddingWitness(chain(2), P, (1, 2), EmbeddingMode.ORDER).is_valid()
    assert not EmbeddingWitness(chain(2), P, (0, 0), EmbeddingMode.ORDER).is_valid()
    assert EmbeddingWitness(chain(2), P, (1, 3), EmbeddingMode.JOIN).is_valid()
    assert not EmbeddingWitness(chain(2), P, (1, 3), EmbeddingMode.JOIN_BOTTOM).is_valid()


def test_repair_bottom():
    witness = EmbeddingWitness(chain(2), chain(3), (1, 2), EmbeddingMode.JOIN).verify()
    assert witness.verified
    repaired = repair_bottom(witness)
    assert repaired.map == (0, 2)
    assert repaired.mode is EmbeddingMode.JOIN_BOTTOM
    assert repaired.verified


def test_ideal_extension():
    witness = find_embedding(chain(2), chain(3))
    lifted = ideal_extension(witness)
    assert lifted.map == (0, 1)
    assert lifted.verified


def test_fin_gen_join_map():
    R = antichain(2)
    P = powerset_semilattice(2)
    witness = fin_gen_join_map(R, P, {0b01: 0b01, 0b10: 0b10})
    assert witness.map == (0, 1, 2, 3)
    assert witness.mode is EmbeddingMode.JOIN_BOTTOM
    assert witness.verified


def test_downset_separation_counterexample():
    R, P = antichain(2), Semilattice.of(chain(2))
    verdict = check_downset_separation(R, P, {0: 0, 1: 1, 2: 1, 3: 1}, bound=3)
    assert not verdict.passed
    assert verdict.counterexample == (0b01, (0b10,))


def test_element_separation():
    P = powerset_semilattice(2)
    assert check_element_separation(antichain(2), P, (1, 2), bound=3).passed
    assert find_element_separating_map(antichain(2), Semilattice.of(chain(2)), 3) is None
    assert find_element_separating_map(antichain(2), P, 3) == (1, 2)


def test_derive_g_from_f():
    R = antichain(1)
    P = Semilattice.of(chain(2))
    assert derive_g_from_f(R, P, {0: 0b01, 1: 0b11}) == {0: 0, 1: 1}
    with pytest.raises(ClaimViolation) as exc:
        derive_g_from_f(R, P, {0: 0b11, 1: 0b11})
    assert exc.value.downset == 1


def test_derive_h_and_rebuild_reject_bad_maps():
    R, P = antichain(2), Semilattice.of(chain(2))
    with pytest.raises(PreconditionFailed) as exc:
        derive_h_from_g(R, P, {0: 0, 1: 1, 2: 1, 3: 1}, bound=3)
    assert exc.value.condition == "downset separation"
    with pytest.raises(PreconditionFailed) as exc:
        build_f_from_h(R, P, (1, 1), bound=3)
    assert exc.value.condition == "element separation"


def test_round_trip_on_two_point_antichain():
    report = embedding_round_trip(antichain(2), powerset_semilattice(2))
    assert report.found
    assert report.g == {0: 0, 1: 1, 2: 2, 3: 3}
    assert report.h == (1, 2)
    assert report.downset_separation.passed
    assert report.element_separation.passed
    assert report.rebuilt.verified
    assert report.to_dict()["found"] is True


def test_round_trip_without_embedding():
    report = embedding_round_trip(antichain(2), Semilattice.of(chain(3)))
    assert not report.found
    assert report.to_dict() == {"found": False}


def test_round_trip_needs_bottom():
    with pytest.raises(ModeUnsupported):
        embedding_round_trip(chain(1), Semilattice.of(vee()))


def semilattices_with_bottom(max_size):
    result = []
    for size in range(1, max_size + 1):
        for P in all_posets(size):
            table = as_join_semilattice(P)
            if isinstance(table, JoinTable) and table.bottom is not None:
                result.append(Semilattice(P, table))
    return result


@pytest.mark.slow
def test_round_trip_and_separating_maps_agree():
    targets = semilattices_with_bottom(6)
    for R in (P for size in range(4) for P in all_posets(size)):
        for P in targets:
            report = embedding_round_trip(R, P, bound=3)
            downset_map = find_downset_separating_map(R, P, 3)
            element_map = find_element_separating_map(R, P, 3)
            assert report.found == (downset_map is not None) == (element_map is not None)
            if report.found:
                assert report.downset_separation.passed
                assert report.element_separation.passed
                assert report.rebuilt.verified
                assert check_downset_separation(R, P, downset_map, 3).passed
                assert check_element_separation(R, P, element_map, 3).passed


def test_extend_to_ideals():
    Q = L = powerset_semilattice(2)
    extension = extend_to_ideals(Q, L, (0, 1, 2, 3))
    assert extension.values == (0, 1, 2, 3)
    assert extension(0b1111) == 3


def test_extend_to_ideals_rejects_non_join_maps():
    Q = powerset_semilattice(2)
    with pytest.raises(NotJoinPreserving) as exc:
        extend_to_ideals(Q, Q, (0, 1, 2, 2))
    assert exc.value.pair == (1, 2)
    with pytest.raises(NotJoinPreserving) as exc:
        extend_to_ideals(Q, Q, (1, 1, 2, 3))
    assert exc.value.pair == ()


def test_join_closure_and_generated_subsemilattice():
    S = powerset_semilattice(2)
    assert join_closure(S, [1, 2]) == 0b1110
    assert join_closure(S, [1, 2], include_bottom=True) == 0b1111
    sub = generated_subsemilattice(S, [1, 2])
    assert sub.size == 3
    assert sub.bottom is None
    assert sub.join(0, 1) == 2
    assert generated_subsemilattice(S, [1, 2], include_bottom=True).bottom == 0
    # the closure has its own least element even without the bottom of S
    assert generated_subsemilattice(S, [1]).bottom == 0
    assert generated_subsemilattice(S, [1, 3]).bottom == 0
    assert generated_subsemilattice(S, []).size == 0


def test_extract_from_powerset_two():
    report = extract_sierp(powerset_semilattice(2), [0b1, 0b11, 0b1111])
    assert report.points == (1, 0)
    assert report.f_sets == (1, 2)
    assert report.rho == ()
    assert report.keys == (2, 1)
    assert report.S == antichain(2)
    assert report.claims == CLAIMS


def test_extract_from_chain():
    report = extract_sierp(Semilattice.of(chain(3)), [0b1, 0b11, 0b111])
    assert report.points == (0, 1)
    assert report.f_sets == (1, 2)
    assert report.rho == ((0, 1),)
    assert report.S == chain(2)


def test_extract_from_powerset_three_first_maximal_chain():
    S = powerset_semilattice(3)
    ideals = ideals_of(S.poset)
    first = maximal_chains(ideals, 1).chains[0]
    chain_masks = [ideals.downsets[i] for i in first]
    assert chain_masks == [0b1, 0b11, 0b1111, 0xFF]
    report = extract_sierp(S, chain_masks)
    assert report.points == (2, 1, 0)
    assert report.f_sets == (1, 2, 4)
    assert report.keys == (4, 2, 1)
    assert report.S == antichain(3)
    assert report.claims == CLAIMS
    assert report.to_dict() == extract_sierp(S, chain_masks).to_dict()


def test_extract_rejects_bad_chains():
    S = powerset_semilattice(2)
    with pytest.raises(PreconditionFailed):
        extract_sierp(S, [0b1, 0b0110])
    with pytest.raises(ChainNotStrict) as exc:
        extract_sierp(S, [0b11, 0b11])
    assert exc.value.index == 1
    with pytest.raises(ChainNotStrict):
        extract_sierp(S, [0b11, 0b1])
    with pytest.raises(PreconditionFailed) as exc:
        extract_sierp(S, [0b1, 0b10001])
    assert exc.value.condition == "chain members are subsets of P"


@pytest.mark.parametrize("mode", list(EmbeddingMode))
def test_found_embeddings_verify_in_every_mode(mode):
    source = powerset_semilattice(2).poset
    for target in (powerset_semilattice(3).poset, omega_star_poset(4)):
        witness = find_embedding(source, target, mode)
        if witness is not None:
            assert witness.is_valid()
            for x, y in itertools.product(range(source.size), repeat=2):
                assert source.leq(x, y) == target.leq(witness.map[x], witness.map[y])


def first_injection(Q, P):
    for f in itertools.permutations(range(P.size), Q.size):
        if all(
            Q.leq(x, y) == P.leq(f[x], f[y]) for x, y in itertools.product(range(Q.size), repeat=2)
        ):
            return f
    return None


@settings(max_examples=60, deadline=None)
@given(posets(max_size=4), posets(max_size=6))
def test_order_embedding_search_is_complete(Q, P):
    witness = find_embedding(Q, P)
    expected = first_injection(Q, P)
    if expected is None:
        assert witness is None
    else:
        assert witness.map == expected


@pytest.mark.slow
def test_fin_gen_downsets_embed_iff_downsets_embed_into_ideals():
    targets = [P for size in range(1, 7) for P in all_posets(size)]
    for R in (R for size in range(1, 5) for R in all_posets(size)):
        source = fin_gen_downsets(R).poset
        whole = all_downsets(R).poset
        for P in targets:
            direct = find_embedding(source, P)
            through_ideals = find_embedding(whole, ideals_of(P).poset)
            assert (direct is None) == (through_ideals is None)


closure_targets = [powerset_semilattice(3), Semilattice.of(omega_star_poset(4))]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(closure_targets), st.data())
def test_join_closure_is_a_closure_operator(S, data):
    A = data.draw(st.sets(st.integers(0, S.size - 1)))
    B = A | data.draw(st.sets(st.integers(0, S.size - 1)))
    closed = join_closure(S, A)
    assert all((closed >> a) & 1 for a in A)
    assert join_closure(S, iter_bits(closed)) == closed
    assert closed & ~join_closure(S, B) == 0
    sub = generated_subsemilattice(S, A)
    assert sub.size == closed.bit_count()
