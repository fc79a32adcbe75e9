"""Feature-biased playouts and UCT search (reference engine).

Playout biasing follows a four-step scheme per move: every legal move
starts at a uniform base score; matching reactive instances indexed under
the previous move add their weights to their action's score; matching
proactive instances do the same; scores are clamped to a small positive
floor (weights may be negative but can only discourage, never forbid) and
the move is sampled from the resulting distribution.

This module is written to be mirrored operation-for-operation by the
compiled kernels in :mod:`geoweave.fastpath`; keep accumulation order,
tie-breaking and RNG usage in sync or the cross-engine parity tests fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .features import FeatureSet
from .games import GameRules, GameState, Move
from .instancer import InstanceIndex, instantiate, match_instance
from .rng import SplitMix64, derive_seed
from .stats import wilson_interval


@dataclass
class BiasConfig:
    floor: float = 0.01
    base_score: float = 1.0
    use_in_selection: bool = False

    def __post_init__(self):
        if self.floor <= 0 or self.base_score <= 0:
            raise ValueError("floor and base_score must be positive")


@dataclass
class SearchConfig:
    playouts_per_move: int = 100
    uct_exploration: float = math.sqrt(2.0)
    seed: int = 0
    max_playout_length: int | None = None  # None: 4 x cell count
    workers: int = 1

    def __post_init__(self):
        if self.playouts_per_move < 1:
            raise ValueError("playouts_per_move must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class MatchCounters:
    """Instrumentation for the reactive fast-path guarantee."""

    calls: int = 0
    reactive_tests: int = 0
    proactive_tests: int = 0


PlayerIndexes = dict[int, InstanceIndex]


def compile_feature_set(fs: FeatureSet | None, rules: GameRules) -> PlayerIndexes | None:
    """One instance index per player, resolved against that player's view."""
    if fs is None:
        return None
    return {
        p: instantiate(fs, rules.graph, rules.player_count, p)
        for p in range(1, rules.player_count + 1)
    }


def biased_scores(
    state: GameState,
    legal: list[Move],
    idx: InstanceIndex | None,
    bias: BiasConfig,
    counters: MatchCounters | None = None,
) -> list[float]:
    """Per-move selection scores after weight accumulation and flooring."""
    scores = [bias.base_score] * len(legal)
    if idx is None:
        return scores
    slot = {(m.to, m.from_): i for i, m in enumerate(legal)}
    if counters is not None:
        counters.calls += 1

    if state.last_move is not None:
        bucket = idx.reactive_for(state.last_move.to)
        if counters is not None:
            counters.reactive_tests += len(bucket)
        for inst in bucket:
            if match_instance(inst, state.board):
                i = slot.get((inst.action_to, inst.action_from))
                if i is not None:
                    scores[i] += inst.weight
    if counters is not None:
        counters.proactive_tests += len(idx.proactive)
    for inst in idx.proactive:
        if match_instance(inst, state.board):
            i = slot.get((inst.action_to, inst.action_from))
            if i is not None:
                scores[i] += inst.weight
    return [s if s > bias.floor else bias.floor for s in scores]


def biased_move_distribution(
    state: GameState,
    legal: list[Move],
    idx: InstanceIndex | None,
    bias: BiasConfig | None = None,
    counters: MatchCounters | None = None,
) -> list[float]:
    """Probability of selecting each legal move, aligned with ``legal``."""
    if not legal:
        raise ValueError("no legal moves")
    bias = bias or BiasConfig()
    scores = biased_scores(state, legal, idx, bias, counters)
    total = 0.0
    for s in scores:
        total += s
    return [s / total for s in scores]


def _sample(scores: list[float], rng: SplitMix64) -> int:
    total = 0.0
    for s in scores:
        total += s
    r = rng.random() * total
    acc = 0.0
    for i, s in enumerate(scores):
        acc += s
        if r < acc:
            return i
    return len(scores) - 1


def run_playout(
    state: GameState,
    rules: GameRules,
    indexes: PlayerIndexes | None,
    rng: SplitMix64,
    cfg: SearchConfig,
    bias: BiasConfig | None = None,
    counters: MatchCounters | None = None,
) -> int:
    """Play to the end with the biased policy; returns winner id or 0 (draw).

    Exceeding the playout length cap counts as a draw.
    """
    bias = bias or BiasConfig()
    result = rules.status(state)
    if result is not None:
        raise ValueError("playout requires a non-terminal state")
    max_len = cfg.max_playout_length or 4 * rules.graph.cell_count
    plies = 0
    while result is None:
        if plies >= max_len:
            return 0
        legal = rules.legal_moves(state)
        idx = indexes[state.mover] if indexes is not None else None
        scores = biased_scores(state, legal, idx, bias, counters)
        state = rules.apply(state, legal[_sample(scores, rng)])
        plies += 1
        result = rules.status(state)
    return result


class _Node:
    __slots__ = ("move", "parent", "children", "legal", "visits", "value",
                 "mover_who_moved", "terminal_result", "priors")

    def __init__(self, move: Move | None, parent: "_Node | None", mover_who_moved: int):
        self.move = move
        self.parent = parent
        self.children: list[_Node] = []
        self.legal: list[Move] | None = None
        self.visits = 0
        self.value = 0.0
        self.mover_who_moved = mover_who_moved
        self.terminal_result: int | None = None
        self.priors: list[float] | None = None


def _backup(node: _Node, winner: int) -> None:
    while node is not None:
        node.visits += 1
        if winner == 0:
            node.value += 0.5
        elif winner == node.mover_who_moved:
            node.value += 1.0
        node = node.parent


def mcts_best_move(
    state: GameState,
    rules: GameRules,
    indexes: PlayerIndexes | None,
    cfg: SearchConfig,
    bias: BiasConfig | None = None,
    counters: MatchCounters | None = None,
) -> Move:
    """UCT with mean-value backup; playouts biased when indexes are given.

    Runs ``cfg.workers`` independent trees (root parallel contract) and
    returns the move with the highest aggregated root visit count; with a
    single worker this is plain UCT.  Deterministic for a given seed.
    """
    if rules.status(state) is not None:
        raise ValueError("search requires a non-terminal state")
    bias = bias or BiasConfig()
    root_legal = rules.legal_moves(state)
    tallies = [0] * len(root_legal)
    for worker in range(cfg.workers):
        rng = SplitMix64(derive_seed(cfg.seed, worker))
        visits = _search_tree(state, rules, indexes, cfg, bias, rng, counters)
        for i, v in enumerate(visits):
            tallies[i] += v
    best = 0
    for i in range(1, len(tallies)):
        if tallies[i] > tallies[best]:
            best = i
    return root_legal[best]


def _search_tree(
    state: GameState,
    rules: GameRules,
    indexes: PlayerIndexes | None,
    cfg: SearchConfig,
    bias: BiasConfig,
    rng: SplitMix64,
    counters: MatchCounters | None,
) -> list[int]:
    """One UCT tree; returns per-root-move visit counts in legal order."""
    c = cfg.uct_exploration
    root = _Node(None, None, 3 - state.mover)
    root.legal = rules.legal_moves(state)
    if bias.use_in_selection:
        idx = indexes[state.mover] if indexes is not None else None
        root.priors = biased_move_distribution(state, root.legal, idx, bias)

    for _ in range(cfg.playouts_per_move):
        node = root
        cur = state
        # Selection: descend while fully expanded.
        while node.terminal_result is None and node.legal is not None and len(node.children) == len(node.legal):
            if not node.children:
                break  # no-legal-move dead end, backed up as a draw below
            log_n = math.log(node.visits)
            best_child = None
            best_score = -math.inf
            for k, child in enumerate(node.children):
                score = (
                    child.value / child.visits
                    + c * math.sqrt(log_n / child.visits)
                )
                if node.priors is not None:
                    score += node.priors[k] / (child.visits + 1.0)
                if score > best_score:
                    best_score = score
                    best_child = child
            node = best_child
            cur = rules.apply(cur, node.move)
            if node.legal is None:
                result = rules.status(cur)
                if result is not None:
                    node.terminal_result = result
                    node.legal = []
                else:
                    node.legal = rules.legal_moves(cur)
                    if bias.use_in_selection:
                        idx = indexes[cur.mover] if indexes is not None else None
                        node.priors = biased_move_distribution(cur, node.legal, idx, bias)

        if node.terminal_result is not None:
            _backup(node, node.terminal_result)
            continue
        if not node.legal:
            _backup(node, 0)
            continue

        # Expansion: next untried move in legal order, then one playout.
        move = node.legal[len(node.children)]
        child = _Node(move, node, cur.mover)
        node.children.append(child)
        cur = rules.apply(cur, move)
        result = rules.status(cur)
        if result is not None:
            child.terminal_result = result
            child.legal = []
            winner = result
        else:
            winner = run_playout(cur, rules, indexes, rng, cfg, bias, counters)
        _backup(child, winner)

    visits = [0] * len(root.legal)
    by_move = {child.move: child.visits for child in root.children}
    for i, m in enumerate(root.legal):
        visits[i] = by_move.get(m, 0)
    return visits


# --- match play -------------------------------------------------------------


@dataclass
class AgentSpec:
    """A player: optional feature set, and search effort.

    ``playouts == 0`` plays directly from the biased policy (no tree),
    which is the random-player baseline; otherwise the agent runs UCT with
    that many playouts per move.
    """

    feature_set: FeatureSet | None = None
    playouts: int = 0
    bias: BiasConfig = field(default_factory=BiasConfig)
    uct_exploration: float = math.sqrt(2.0)

    def label(self) -> str:
        kind = f"mcts{self.playouts}" if self.playouts else "policy"
        feats = self.feature_set.name or "features" if self.feature_set else "uniform"
        return f"{kind}:{feats}"


@dataclass
class MatchResult:
    games: int
    wins_a: int
    wins_b: int
    draws: int
    wins_a_as_first: int
    wins_a_as_second: int
    seed: int
    win_rate_a: float = 0.0
    ci_low: float = 0.0
    ci_high: float = 0.0

    def finalize(self) -> "MatchResult":
        successes = self.wins_a + 0.5 * self.draws
        self.win_rate_a = successes / self.games
        self.ci_low, self.ci_high = wilson_interval(successes, self.games)
        return self

    def to_dict(self) -> dict:
        return {
            "games": self.games,
            "wins_a": self.wins_a,
            "wins_b": self.wins_b,
            "draws": self.draws,
            "wins_a_as_first": self.wins_a_as_first,
            "wins_a_as_second": self.wins_a_as_second,
            "win_rate_a": self.win_rate_a,
            "ci95_low": self.ci_low,
            "ci95_high": self.ci_high,
            "seed": self.seed,
        }


def _play_one_game(
    rules: GameRules,
    agents: dict[int, tuple[AgentSpec, PlayerIndexes | None]],
    game_seed: int,
    workers: int,
    max_moves: int,
) -> int:
    state = rules.initial_state()
    ply = 0
    result = rules.status(state)
    while result is None and ply < max_moves:
        spec, indexes = agents[state.mover]
        ply_seed = derive_seed(game_seed, ply)
        if spec.playouts == 0:
            legal = rules.legal_moves(state)
            idx = indexes[state.mover] if indexes is not None else None
            scores = biased_scores(state, legal, idx, spec.bias)
            move = legal[_sample(scores, SplitMix64(ply_seed))]
        else:
            cfg = SearchConfig(
                playouts_per_move=spec.playouts,
                uct_exploration=spec.uct_exploration,
                seed=ply_seed,
                workers=workers,
            )
            move = mcts_best_move(state, rules, indexes, cfg, spec.bias)
        state = rules.apply(state, move)
        ply += 1
        result = rules.status(state)
    return result if result is not None else 0


def play_match(
    rules: GameRules,
    agent_a: AgentSpec,
    agent_b: AgentSpec,
    games: int,
    seed: int,
    workers: int = 1,
    engine: str = "auto",
) -> MatchResult:
    """Seeded match with side swapping each game and paired opening seeds.

    ``engine`` selects the reference implementation ("python"), the
    compiled kernels ("numba"), or lets the library choose ("auto").
    Both engines produce identical results for identical arguments.
    """
    if games < 2 or games % 2 != 0:
        raise ValueError("games must be even (sides are swapped each game)")
    if engine not in ("auto", "python", "numba"):
        raise ValueError(f"unknown engine {engine!r}")

    if engine != "python":
        try:
            from . import fastpath
        except ImportError as exc:
            if engine == "numba":
                raise ValueError(f"numba engine unavailable: {exc}") from exc
            fastpath = None
        if fastpath is not None:
            try:
                return fastpath.play_match(rules, agent_a, agent_b, games, seed, workers)
            except fastpath.FastpathUnsupported as exc:
                if engine == "numba":
                    raise ValueError(f"numba engine unavailable: {exc}") from exc

    compiled_a = compile_feature_set(agent_a.feature_set, rules)
    compiled_b = compile_feature_set(agent_b.feature_set, rules)
    max_moves = 4 * rules.graph.cell_count
    result = MatchResult(games, 0, 0, 0, 0, 0, seed)
    for g in range(games):
        game_seed = derive_seed(seed, g // 2)
        a_first = g % 2 == 0
        if a_first:
            agents = {1: (agent_a, compiled_a), 2: (agent_b, compiled_b)}
        else:
            agents = {1: (agent_b, compiled_b), 2: (agent_a, compiled_a)}
        winner = _play_one_game(rules, agents, game_seed, workers, max_moves)
        if winner == 0:
            result.draws += 1
        elif (winner == 1) == a_first:
            result.wins_a += 1
            if a_first:
                result.wins_a_as_first += 1
            else:
                result.wins_a_as_second += 1
        else:
            result.wins_b += 1
    return result.finalize()
