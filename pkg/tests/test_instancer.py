from fractions import Fraction as F

import pytest

import geoweave as gw
from geoweave.chunkset import ChunkSet
from geoweave.features import (
    EMPTY,
    ENEMY,
    FRIEND,
    OFF,
    Constraint,
    ElementKind,
    Feature,
    FeatureAction,
    FeatureSet,
    PatternElement,
    item,
    negate,
)
from geoweave.instancer import InstancerError, instantiate, match_instance
from geoweave.rng import SplitMix64
from geoweave.walks import make_walk
from oracles import interpret_instance

KNIGHT = make_walk([0, 0, F(1, 4)])


def knight_feature(**kw):
    defaults = dict(
        elements=(PatternElement((), (EMPTY,)),),
        action=FeatureAction(KNIGHT),
        weight=1.0,
        reflections=True,
    )
    defaults.update(kw)
    return Feature(**defaults)


def knight_star(x, y):
    return {
        (x + dx, y + dy)
        for dx, dy in ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2))
    }


def test_knight_instances_form_the_star():
    g = gw.build_board(gw.Square(8, 8))
    idx = instantiate(FeatureSet((knight_feature(),)), g, 2, 1)
    anchor = gw.square_cell(g, 4, 4)
    mine = [i for i in idx.instances if i.anchor == anchor]
    assert len(mine) == 8  # 4 rotations x 2 reflections, all distinct
    got = {i.action_to for i in mine}
    want = {gw.square_cell(g, x, y) for x, y in knight_star(4, 4)}
    assert got == want


def test_knight_instance_count_bound():
    g = gw.build_board(gw.Square(8, 8))
    idx = instantiate(FeatureSet((knight_feature(),)), g, 2, 1)
    bound = g.cell_count * 4 * 2
    discarded = 0
    for x in range(8):
        for y in range(8):
            discarded += sum(
                1 for (dx, dy) in knight_star(0, 0)
                if not (0 <= x + dx < 8 and 0 <= y + dy < 8)
            )
    assert len(idx.instances) == bound - discarded
    assert len(idx.instances) <= bound


def test_semi3464_knight_splits_into_two_instances(semi3):
    fs = FeatureSet((knight_feature(reflections=False, rotations=()),))
    # Pick a central square cell and aim it at a triangle, then a hexagon.
    centre_sq = min(
        (c for c in range(semi3.cell_count) if semi3.sides[c] == 4),
        key=lambda c: semi3.centers[c][0] ** 2 + semi3.centers[c][1] ** 2,
    )
    tri_dir = next(d for d, n in enumerate(semi3.neighbors[centre_sq]) if semi3.sides[n] == 3)
    hex_dir = next(d for d, n in enumerate(semi3.neighbors[centre_sq]) if semi3.sides[n] == 6)

    def instances_for(start_dir):
        feature = knight_feature(reflections=False, rotations=(F(start_dir, 4),))
        idx = instantiate(FeatureSet((feature,)), semi3, 2, 1)
        return [i for i in idx.instances if i.anchor == centre_sq]

    through_triangle = instances_for(tri_dir)
    assert len(through_triangle) == 2  # ambiguous quarter turn, two destinations
    assert through_triangle[0].action_to != through_triangle[1].action_to
    assert all(i.weight == 1.0 for i in through_triangle)

    through_hexagon = instances_for(hex_dir)
    # Both branches land on the same cell: merged instance, summed weight.
    assert len(through_hexagon) == 1
    assert through_hexagon[0].weight == 2.0


def test_off_board_element_forces_edge_anchors():
    g = gw.build_board(gw.Square(6, 6))
    feature = Feature(
        elements=(PatternElement((), (EMPTY,)), PatternElement(make_walk([0]), (OFF,))),
        action=FeatureAction(()),
        rotations=(F(0),),  # keep facing north only
    )
    idx = instantiate(FeatureSet((feature,)), g, 2, 1)
    anchors = {i.anchor for i in idx.instances}
    top_row = {gw.square_cell(g, x, 5) for x in range(6)}
    assert anchors == top_row


def test_negated_off_requires_on_board():
    g = gw.build_board(gw.Square(4, 4))
    feature = Feature(
        elements=(PatternElement(make_walk([0]), (negate(OFF),)),),
        action=FeatureAction(()),
        rotations=(F(0),),
    )
    idx = instantiate(FeatureSet((feature,)), g, 2, 1)
    anchors = {i.anchor for i in idx.instances}
    assert anchors == {gw.square_cell(g, x, y) for x in range(4) for y in range(3)}


def hex_bridge_position(rules):
    """Fig-1 style position: white bridge (1,1)-(2,2), black intrudes (1,2)."""
    g = rules.graph
    state = rules.initial_state()
    state.board.set(gw.hex_cell(g, 1, 1), 2)
    state.board.set(gw.hex_cell(g, 2, 2), 2)
    state.board.set(gw.hex_cell(g, 1, 2), 1)
    return state, gw.hex_cell(g, 1, 2), gw.hex_cell(g, 2, 1)


def test_bridge_instance_matches_fig1_position(bridge_fs):
    rules = gw.hex_rules(7)
    idx = instantiate(bridge_fs, rules.graph, 2, mover=2)
    state, intrusion, completion = hex_bridge_position(rules)
    hits = [i for i in idx.reactive_for(intrusion) if match_instance(i, state.board)]
    assert len(hits) == 1
    assert hits[0].action_to == completion
    # The same instance fails on an empty board: no enemy stone to react to.
    empty = rules.initial_state()
    assert not match_instance(hits[0], empty.board)


def test_reactive_indexing_partitions_instances(bridge_fs):
    rules = gw.hex_rules(5)
    idx = instantiate(bridge_fs, rules.graph, 2, 1)
    assert not idx.proactive
    assert sum(len(v) for v in idx.reactive_by_last_move.values()) == len(idx.instances)
    for cell, bucket in idx.reactive_by_last_move.items():
        for inst in bucket:
            assert inst.last_move_cell == cell


def test_enemy_not_item3_negative_test():
    g = gw.build_board(gw.Square(4, 4))
    feature = Feature(
        elements=(PatternElement((), (EMPTY,)), PatternElement(make_walk([0]), (ENEMY, item(3, True)))),
        action=FeatureAction(()),
        rotations=(F(0),),
    )
    idx = instantiate(FeatureSet((feature,)), g, 3, mover=1)  # three players
    anchor = gw.square_cell(g, 1, 1)
    inst = next(i for i in idx.instances if i.anchor == anchor)
    north = gw.square_cell(g, 1, 2)
    # Enemy means "neither empty nor mine": a pair of negative probes.
    assert set(inst.negative_tests) == {(north, 0), (north, 1), (north, 3)}
    board = ChunkSet(2, g.cell_count)
    board.set(north, 2)
    assert match_instance(inst, board)
    board.set(north, 3)  # an enemy piece, but with the excluded index
    assert not match_instance(inst, board)
    board.set(north, 1)  # friendly piece is not an enemy
    assert not match_instance(inst, board)


def test_enemy_two_player_compiles_positively(bridge_fs):
    rules = gw.hex_rules(5)
    idx = instantiate(bridge_fs, rules.graph, 2, mover=2)
    inst = idx.instances[0]
    assert inst.negative_tests == ()  # pure mask/target fast path


def test_negated_enemy_multiplayer_rejected():
    g = gw.build_board(gw.Square(4, 4))
    feature = Feature(
        elements=(PatternElement((), (negate(ENEMY),)),),
        action=FeatureAction(()),
    )
    with pytest.raises(InstancerError, match="2 players"):
        instantiate(FeatureSet((feature,)), g, 3, 1)


def test_player_index_out_of_range():
    g = gw.build_board(gw.Square(4, 4))
    feature = Feature(
        elements=(PatternElement((), (Constraint(ElementKind.PLAYER, 3),)),),
        action=FeatureAction(()),
    )
    with pytest.raises(InstancerError, match="out of range"):
        instantiate(FeatureSet((feature,)), g, 2, 1)


def test_move_from_actions_resolve_both_cells():
    # No shipped game moves pieces, but the action channel must compile.
    g = gw.build_board(gw.Square(5, 5))
    feature = Feature(
        elements=(PatternElement((), (FRIEND,)), PatternElement(make_walk([0]), (EMPTY,))),
        action=FeatureAction(to=make_walk([0]), from_=()),
        rotations=(F(0),),
    )
    idx = instantiate(FeatureSet((feature,)), g, 2, 1)
    anchor = gw.square_cell(g, 2, 2)
    inst = next(i for i in idx.instances if i.anchor == anchor)
    assert inst.action_from == anchor
    assert inst.action_to == gw.square_cell(g, 2, 3)
    board = ChunkSet(2, g.cell_count)
    board.set(anchor, 1)
    assert match_instance(inst, board)


def test_absolute_feature_symmetry_expansion():
    g = gw.build_board(gw.Square(5, 5))
    corner = gw.square_cell(g, 0, 0)
    feature = Feature(
        elements=(PatternElement((), (EMPTY,)), PatternElement(make_walk([0]), (FRIEND,))),
        action=FeatureAction(()),
        anchor=corner,
        reflections=True,
    )
    idx = instantiate(FeatureSet((feature,)), g, 2, 1)
    anchors = {i.anchor for i in idx.instances}
    assert anchors == {gw.square_cell(g, x, y) for x in (0, 4) for y in (0, 4)}
    # Rotations only (no reflections) still visits every corner.
    feature_rot = Feature(
        elements=feature.elements, action=feature.action, anchor=corner, reflections=False
    )
    idx_rot = instantiate(FeatureSet((feature_rot,)), g, 2, 1)
    assert {i.anchor for i in idx_rot.instances} == anchors


def test_absolute_explicit_rotations_stay_at_anchor():
    g = gw.build_board(gw.Square(5, 5))
    centre = gw.square_cell(g, 2, 2)
    feature = Feature(
        elements=(PatternElement(make_walk([0]), (FRIEND,)),),
        action=FeatureAction(()),
        anchor=centre,
        rotations=make_walk([0, F(1, 2)]),
    )
    idx = instantiate(FeatureSet((feature,)), g, 2, 1)
    assert {i.anchor for i in idx.instances} == {centre}
    assert len(idx.instances) == 2


def test_absolute_symmetry_unsupported_on_semi(semi3):
    feature = Feature(
        elements=(PatternElement((), (EMPTY,)),),
        action=FeatureAction(()),
        anchor=0,
    )
    with pytest.raises(InstancerError, match="symmetry"):
        instantiate(FeatureSet((feature,)), semi3, 2, 1)


def test_instantiation_is_deterministic(line4_fs, line4_7_rules):
    g = line4_7_rules.graph
    a = instantiate(line4_fs, g, 2, 1)
    b = instantiate(line4_fs, g, 2, 1)
    assert len(a.instances) == len(b.instances)
    for x, y in zip(a.instances, b.instances):
        assert x.anchor == y.anchor
        assert x.action_to == y.action_to
        assert x.weight == y.weight
        assert x.mask.words == y.mask.words
        assert x.target.words == y.target.words
        assert x.negative_tests == y.negative_tests


def random_board(rng, chunk_bits, cells, values_range):
    board = ChunkSet(chunk_bits, cells)
    for c in range(cells):
        board.set(c, rng.next_u64() % values_range)
    return board


@pytest.mark.parametrize("fixture_name,game", [
    ("bridge_fs", "hex"), ("group3_fs", "hex"), ("thin_group_fs", "hex"), ("line4_fs", "line4"),
])
def test_compiled_matching_agrees_with_interpreter(fixture_name, game, request):
    fs = request.getfixturevalue(fixture_name)
    rules = gw.hex_rules(5) if game == "hex" else gw.line4_rules(5, 5)
    rng = SplitMix64(7)
    for mover in (1, 2):
        idx = instantiate(fs, rules.graph, 2, mover)
        assert idx.instances
        for _ in range(60):
            board = random_board(rng, rules.chunk_bits, rules.graph.cell_count, 3)
            values = board.values()
            for inst in idx.instances:
                assert match_instance(inst, board) == interpret_instance(inst, values, mover, 2)
