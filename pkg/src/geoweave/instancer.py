"""Pre-generation of feature instances and their compiled bit tests.

Every feature is expanded once at load time into all of its concrete
placements: one candidate per anchor cell, rotation, reflection and
ambiguity branch.  Each surviving candidate is compiled into a word-level
mask/target pair for the positive constraints plus a short list of
per-cell forbidden-value tests for the negated ones, so the playout inner
loop does no walk resolution at all.

Friend/enemy constraints are resolved against a concrete mover when
instantiating, so an engine holds one instance index per player.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .board import OFF_BOARD, BoardGraph
from .chunkset import ChunkSet, matches, required_bits
from .features import Constraint, ElementKind, Feature, FeatureSet
from .walks import mirror_walk, resolve_walk_branches, round_turn


class InstancerError(ValueError):
    pass


@dataclass
class FeatureInstance:
    feature: Feature
    anchor: int
    start_dir: int
    reflected: bool
    mask: ChunkSet
    target: ChunkSet
    negative_tests: tuple[tuple[int, int], ...]  # (cell, forbidden chunk value)
    element_sites: tuple[tuple[int, tuple[Constraint, ...]], ...]
    action_to: int
    action_from: int | None
    last_move_cell: int | None
    weight: float

    @property
    def reactive(self) -> bool:
        return self.last_move_cell is not None


@dataclass
class InstanceIndex:
    graph: BoardGraph
    mover: int
    player_count: int
    chunk_bits: int
    instances: list[FeatureInstance] = field(default_factory=list)
    proactive: list[FeatureInstance] = field(default_factory=list)
    reactive_by_last_move: dict[int, list[FeatureInstance]] = field(default_factory=dict)

    def reactive_for(self, cell: int) -> list[FeatureInstance]:
        return self.reactive_by_last_move.get(cell, [])


def match_instance(inst: FeatureInstance, state: ChunkSet, counter: list[int] | None = None) -> bool:
    """Compiled instance test: word mask/target plus negated-value probes."""
    if not matches(state, inst.mask, inst.target, counter):
        return False
    for cell, forbidden in inst.negative_tests:
        if state.get(cell) == forbidden:
            return False
    return True


def _orientations(feature: Feature, graph: BoardGraph, anchor: int) -> list[tuple[int, bool]]:
    sides = graph.sides[anchor]
    if feature.rotations is None:
        dirs = list(range(sides))
    else:
        dirs = []
        for rot in feature.rotations:
            d = round_turn(rot, sides) % sides
            if d not in dirs:
                dirs.append(d)
    out = [(d, False) for d in dirs]
    if feature.reflections:
        out.extend((d, True) for d in dirs)
    return out


def _absolute_placements(feature: Feature, graph: BoardGraph) -> list[tuple[int, int, bool]]:
    anchor = feature.anchor
    if not 0 <= anchor < graph.cell_count:
        raise InstancerError(f"absolute anchor {anchor} outside board")
    if feature.rotations is not None:
        # Explicit rotation lists turn the pattern in place at its anchor.
        placements = [(anchor, d, refl) for d, refl in _orientations(feature, graph, anchor)]
        return placements
    if not graph.symmetries:
        raise InstancerError(
            f"board {type(graph.kind).__name__} has no symmetry maps; "
            "absolute patterns with rot=all/refl=yes are unsupported here"
        )
    placements = []
    for sym in graph.symmetries:
        if sym.mirror and not feature.reflections:
            continue
        placements.append((sym.cell_map[anchor], sym.dir_maps[anchor][0], sym.mirror))
    seen = set()
    unique = []
    for p in placements:
        if p not in seen:
            seen.add(p)
            unique.append(p)
    return unique


def _compile_constraints(
    constraints: tuple[Constraint, ...],
    site: int,
    mover: int,
    player_count: int,
) -> tuple[dict[int, int], set[tuple[int, int]]] | None:
    """Positive chunk assignments and negative tests for one element.

    Returns None when the element can never hold at this site (walk landed
    on/off board against the constraint's requirement), which discards the
    whole candidate.
    """
    positives: dict[int, int] = {}
    negatives: set[tuple[int, int]] = set()
    enemy_value = None if player_count != 2 else 3 - mover

    has_positive_off = any(c.kind is ElementKind.OFF and not c.negated for c in constraints)
    if has_positive_off:
        return (positives, negatives) if site == OFF_BOARD else None
    if site == OFF_BOARD:
        return None

    for c in constraints:
        if c.kind is ElementKind.OFF:
            continue  # negated OFF just demands an on-board site, already true
        if c.kind is ElementKind.EMPTY:
            value = 0
        elif c.kind is ElementKind.FRIEND:
            value = mover
        elif c.kind is ElementKind.ENEMY:
            if enemy_value is None:
                if c.negated:
                    raise InstancerError(
                        "negated enemy constraints need exactly 2 players "
                        "(not-enemy is a disjunction the compiled tests cannot express)"
                    )
                negatives.add((site, 0))
                negatives.add((site, mover))
                continue
            value = enemy_value
        elif c.kind is ElementKind.PLAYER:
            if not 1 <= c.index <= player_count:
                raise InstancerError(f"player index {c.index} out of range 1..{player_count}")
            value = c.index
        else:  # ITEM: the built-in games equip one piece type per player
            if not 0 <= c.index <= player_count:
                raise InstancerError(f"item index {c.index} out of range 0..{player_count}")
            value = c.index
        if c.negated:
            negatives.add((site, value))
        else:
            if site in positives and positives[site] != value:
                return None
            positives[site] = value
    return positives, negatives


def instantiate(
    fs: FeatureSet,
    graph: BoardGraph,
    player_count: int,
    mover: int,
) -> InstanceIndex:
    """Expand a feature set into its full per-board instance index.

    Duplicate instances (identical compiled tests and action) are merged
    with their weights summed, which preserves the additive application
    semantics when symmetry expansion or ambiguity branches overlap.
    """
    if not 1 <= mover <= player_count:
        raise InstancerError(f"mover {mover} out of range 1..{player_count}")
    chunk_bits = required_bits(player_count + 1)
    index = InstanceIndex(graph, mover, player_count, chunk_bits)
    dedup: dict[tuple, FeatureInstance] = {}

    for feature in fs:
        if feature.relative:
            placements = [
                (anchor, d, refl)
                for anchor in range(graph.cell_count)
                for d, refl in _orientations(feature, graph, anchor)
            ]
        else:
            placements = _absolute_placements(feature, graph)

        for anchor, start_dir, reflected in placements:
            walk_of = (lambda w: mirror_walk(w)) if reflected else (lambda w: w)
            element_branches = [
                resolve_walk_branches(graph, anchor, start_dir, walk_of(el.walk))
                for el in feature.elements
            ]
            to_branches = resolve_walk_branches(graph, anchor, start_dir, walk_of(feature.action.to))
            from_branches = (
                resolve_walk_branches(graph, anchor, start_dir, walk_of(feature.action.from_))
                if feature.action.from_ is not None
                else [None]
            )
            last_branches = (
                resolve_walk_branches(graph, anchor, start_dir, walk_of(feature.last_move))
                if feature.last_move is not None
                else [None]
            )

            for combo in itertools.product(*element_branches, to_branches, from_branches, last_branches):
                sites = combo[: len(feature.elements)]
                action_to, action_from, last_cell = combo[-3], combo[-2], combo[-1]
                if action_to == OFF_BOARD or action_from == OFF_BOARD or last_cell == OFF_BOARD:
                    continue

                positives: dict[int, int] = {}
                negatives: set[tuple[int, int]] = set()
                ok = True
                for el, site in zip(feature.elements, sites):
                    compiled = _compile_constraints(el.constraints, site, mover, player_count)
                    if compiled is None:
                        ok = False
                        break
                    pos, neg = compiled
                    for cell, value in pos.items():
                        if positives.get(cell, value) != value:
                            ok = False
                            break
                        positives[cell] = value
                    if not ok:
                        break
                    negatives |= neg
                if not ok:
                    continue
                # A forbidden value equal to a required one can never match.
                if any(positives.get(cell) == v for cell, v in negatives):
                    continue
                # Required values subsume negative tests on the same cell.
                negatives = {(cell, v) for cell, v in negatives if cell not in positives}

                mask = ChunkSet(chunk_bits, graph.cell_count)
                target = ChunkSet(chunk_bits, graph.cell_count)
                full = (1 << chunk_bits) - 1
                for cell, value in positives.items():
                    mask.set(cell, full)
                    target.set(cell, value)

                neg_sorted = tuple(sorted(negatives))
                key = (
                    tuple(mask.words),
                    tuple(target.words),
                    neg_sorted,
                    action_to,
                    action_from,
                    last_cell,
                )
                existing = dedup.get(key)
                if existing is not None:
                    existing.weight += feature.weight
                    continue
                inst = FeatureInstance(
                    feature=feature,
                    anchor=anchor,
                    start_dir=start_dir,
                    reflected=reflected,
                    mask=mask,
                    target=target,
                    negative_tests=neg_sorted,
                    element_sites=tuple(
                        (site, el.constraints) for el, site in zip(feature.elements, sites)
                    ),
                    action_to=action_to,
                    action_from=action_from,
                    last_move_cell=last_cell,
                    weight=feature.weight,
                )
                dedup[key] = inst
                index.instances.append(inst)
                if last_cell is None:
                    index.proactive.append(inst)
                else:
                    index.reactive_by_last_move.setdefault(last_cell, []).append(inst)

    return index
