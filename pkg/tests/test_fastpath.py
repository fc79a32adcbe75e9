"""Cross-engine checks: the compiled kernels must reproduce the reference
engine exactly (same seeds, same tallies) and their building blocks must
agree with the pure-Python semantics on arbitrary states."""

import numpy as np
import pytest

import geoweave as gw
from geoweave import fastpath
from geoweave.features import EMPTY, Feature, FeatureAction, FeatureSet, PatternElement
from geoweave.rng import SplitMix64
from geoweave.search import AgentSpec, BiasConfig, biased_scores, compile_feature_set, play_match
from geoweave.walks import make_walk

pytestmark = pytest.mark.skipif(not fastpath.NUMBA_AVAILABLE, reason="numba missing")


def lowered_for(fs, rules):
    indexes = compile_feature_set(fs, rules)
    ncells = rules.graph.cell_count
    nwords = (ncells * rules.chunk_bits + 63) // 64
    return indexes, fastpath.lower_indexes(indexes, ncells, nwords, rules.chunk_bits)


def random_position(rules, rng, plies):
    state = rules.initial_state()
    for _ in range(plies):
        if rules.status(state) is not None:
            break
        legal = rules.legal_moves(state)
        state = rules.apply(state, legal[rng.next_u64() % len(legal)])
    return state


@pytest.mark.parametrize("fixture_name,game", [
    ("bridge_fs", "hex5"),
    ("group3_fs", "hex5"),
    ("line4_fs", "line4-5x5"),
])
def test_kernel_scores_equal_reference_scores(fixture_name, game, request):
    fs = request.getfixturevalue(fixture_name)
    rules = gw.game_from_name(game)
    indexes, pack = lowered_for(fs, rules)
    ncells = rules.graph.cell_count
    nwords = (ncells * rules.chunk_bits + 63) // 64
    rng = SplitMix64(77)
    bias = BiasConfig()
    for trial in range(40):
        state = random_position(rules, rng, int(rng.next_u64() % 12))
        if rules.status(state) is not None:
            continue
        legal = rules.legal_moves(state)
        want = biased_scores(state, legal, indexes[state.mover], bias)
        values = np.array(state.board.values(), dtype=np.int8)
        words = np.array([w for w in state.board.words], dtype=np.uint64)
        scores = np.zeros(ncells, dtype=np.float64)
        last = state.last_move.to if state.last_move else -1
        fastpath._score_moves(
            scores, values, words, state.mover, last, *pack,
            bias.base_score, bias.floor, ncells, nwords,
        )
        got = [scores[m.to] for m in legal]
        assert got == want  # bitwise float equality, not approx


def test_kernel_hex_win_matches_reference():
    rules = gw.hex_rules(5)
    nbrs = fastpath._neighbor_array(rules)
    ncells = rules.graph.cell_count
    nwords = (ncells * rules.chunk_bits + 63) // 64
    rng = SplitMix64(3)
    for _ in range(200):
        values = np.zeros(ncells, dtype=np.int8)
        words = np.zeros(nwords, dtype=np.uint64)
        parent = np.arange(ncells + 4, dtype=np.int32)
        state = rules.initial_state()
        mover = 1
        kernel_winner = 0
        while rules.status(state) is None:
            legal = rules.legal_moves(state)
            move = legal[rng.next_u64() % len(legal)]
            won = fastpath._apply_move(
                values, words, parent, nbrs, move.to, mover, 0,
                rules.size, rules.size, ncells, rules.chunk_bits,
            )
            state = rules.apply(state, move)
            if won:
                kernel_winner = mover
                break
            mover = 3 - mover
        assert kernel_winner == rules.status(state)
        assert list(words) == [w for w in state.board.words]


def test_kernel_line4_win_matches_reference():
    rules = gw.line4_rules(5, 4)
    nbrs = fastpath._neighbor_array(rules)
    ncells = rules.graph.cell_count
    rng = SplitMix64(8)
    for _ in range(200):
        values = np.zeros(ncells, dtype=np.int8)
        words = np.zeros((ncells * 2 + 63) // 64, dtype=np.uint64)
        parent = np.arange(ncells + 4, dtype=np.int32)
        state = rules.initial_state()
        mover = 1
        kernel_winner = None
        while rules.status(state) is None:
            legal = rules.legal_moves(state)
            move = legal[rng.next_u64() % len(legal)]
            won = fastpath._apply_move(
                values, words, parent, nbrs, move.to, mover, 1,
                rules.width, rules.height, ncells, rules.chunk_bits,
            )
            state = rules.apply(state, move)
            if won:
                kernel_winner = mover
                break
            mover = 3 - mover
        if kernel_winner is None:
            kernel_winner = 0
        assert kernel_winner == rules.status(state)


@pytest.mark.parametrize("game,playouts,games,seed", [
    ("hex5", 30, 6, 101),
    ("hex5", 0, 60, 102),
    ("line4-5x5", 25, 6, 103),
    ("line4-4x4", 0, 60, 104),
])
def test_match_parity_uniform_agents(game, playouts, games, seed):
    rules = gw.game_from_name(game)
    a, b = AgentSpec(playouts=playouts), AgentSpec(playouts=playouts)
    py = play_match(rules, a, b, games, seed, engine="python")
    nb = play_match(rules, a, b, games, seed, engine="numba")
    assert py.to_dict() == nb.to_dict()


def test_match_parity_biased_agents(bridge_fs, line4_fs):
    rules = gw.hex_rules(5)
    a = AgentSpec(feature_set=bridge_fs, playouts=20)
    b = AgentSpec(playouts=20)
    py = play_match(rules, a, b, 4, 31, engine="python")
    nb = play_match(rules, a, b, 4, 31, engine="numba")
    assert py.to_dict() == nb.to_dict()

    rules4 = gw.line4_rules(5, 5)
    a2 = AgentSpec(feature_set=line4_fs, playouts=0)
    b2 = AgentSpec(playouts=0)
    py2 = play_match(rules4, a2, b2, 40, 32, engine="python")
    nb2 = play_match(rules4, a2, b2, 40, 32, engine="numba")
    assert py2.to_dict() == nb2.to_dict()


def test_match_parity_with_workers(bridge_fs):
    rules = gw.hex_rules(4)
    a = AgentSpec(feature_set=bridge_fs, playouts=16)
    b = AgentSpec(playouts=16)
    py = play_match(rules, a, b, 2, 41, workers=3, engine="python")
    nb = play_match(rules, a, b, 2, 41, workers=3, engine="numba")
    assert py.to_dict() == nb.to_dict()


def test_auto_engine_falls_back_for_move_from_actions():
    rules = gw.line4_rules(4, 4)
    feature = Feature(
        elements=(PatternElement((), (EMPTY,)),),
        action=FeatureAction(to=(), from_=make_walk([0])),
        rotations=(0,),
    )
    fs = FeatureSet((feature,))
    agent = AgentSpec(feature_set=fs, playouts=4)
    result = play_match(rules, agent, AgentSpec(playouts=4), 2, 5, engine="auto")
    reference = play_match(rules, agent, AgentSpec(playouts=4), 2, 5, engine="python")
    assert result.to_dict() == reference.to_dict()
    with pytest.raises(ValueError, match="numba engine unavailable"):
        play_match(rules, agent, AgentSpec(playouts=4), 2, 5, engine="numba")


def test_numba_engine_rejects_selection_bias(bridge_fs):
    rules = gw.hex_rules(4)
    agent = AgentSpec(feature_set=bridge_fs, playouts=4, bias=BiasConfig(use_in_selection=True))
    with pytest.raises(ValueError, match="numba engine unavailable"):
        play_match(rules, agent, AgentSpec(playouts=4), 2, 5, engine="numba")
