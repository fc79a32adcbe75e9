"""Built-in games: Hex on the rhombus board and Line4 on the square board.

Both are placement games for two players; every feature mechanism the
engine supports (reactive/proactive, rotations, off-board elements, the
move-from action channel) is exercised against these rules in the tests.

``status`` returns None while the game is ongoing, 0 for a draw and the
winning player id otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .board import BoardGraph, HexRhombus, Square, build_board, hex_cell
from .chunkset import ChunkSet, required_bits


class IllegalMove(ValueError):
    pass


@dataclass(frozen=True)
class Move:
    to: int
    from_: int | None = None


@dataclass(frozen=True)
class GameState:
    board: ChunkSet
    mover: int
    last_move: Move | None
    move_number: int


class GameRules:
    """Shared plumbing for two-player placement games."""

    name: str
    player_count = 2

    def __init__(self, graph: BoardGraph):
        self.graph = graph
        self.state_count = self.player_count + 1
        self.chunk_bits = required_bits(self.state_count)

    def initial_state(self) -> GameState:
        return GameState(
            board=ChunkSet(self.chunk_bits, self.graph.cell_count),
            mover=1,
            last_move=None,
            move_number=0,
        )

    def legal_moves(self, state: GameState) -> list[Move]:
        if self.status(state) is not None:
            return []
        return [
            Move(c) for c in range(self.graph.cell_count) if state.board.get(c) == 0
        ]

    def apply(self, state: GameState, move: Move) -> GameState:
        if move.from_ is not None:
            raise IllegalMove("placement games take no move-from location")
        if not 0 <= move.to < self.graph.cell_count:
            raise IllegalMove(f"cell {move.to} outside board")
        if state.board.get(move.to) != 0:
            raise IllegalMove(f"cell {move.to} is occupied")
        if self.status(state) is not None:
            raise IllegalMove("game is over")
        board = state.board.copy()
        board.set(move.to, state.mover)
        return GameState(
            board=board,
            mover=3 - state.mover,
            last_move=move,
            move_number=state.move_number + 1,
        )

    def status(self, state: GameState) -> int | None:
        raise NotImplementedError


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[ri] = rj


class HexRules(GameRules):
    """Hex: player 1 connects the r=0 and r=n-1 edges, player 2 the q=0 and
    q=n-1 edges.  No swap rule; drawless by the usual Hex argument."""

    def __init__(self, size: int):
        if size < 2:
            raise ValueError("hex board needs size >= 2")
        super().__init__(build_board(HexRhombus(size)))
        self.size = size
        self.name = f"hex{size}"
        n = size
        self._edges = {
            1: ([hex_cell(self.graph, q, 0) for q in range(n)],
                [hex_cell(self.graph, q, n - 1) for q in range(n)]),
            2: ([hex_cell(self.graph, 0, r) for r in range(n)],
                [hex_cell(self.graph, n - 1, r) for r in range(n)]),
        }

    def status(self, state: GameState) -> int | None:
        board = state.board
        for player in (1, 2):
            uf = _UnionFind(self.graph.cell_count + 2)
            side_a, side_b = self.graph.cell_count, self.graph.cell_count + 1
            first, second = self._edges[player]
            for c in range(self.graph.cell_count):
                if board.get(c) != player:
                    continue
                for n in self.graph.neighbors[c]:
                    if n >= 0 and n > c and board.get(n) == player:
                        uf.union(c, n)
            for c in first:
                if board.get(c) == player:
                    uf.union(c, side_a)
            for c in second:
                if board.get(c) == player:
                    uf.union(c, side_b)
            if uf.find(side_a) == uf.find(side_b):
                return player
        return None


# Line directions: E, N, NE, NW as (dx, dy) on the square grid.  Wins may
# be diagonal even though the board graph itself only has orthogonal edges.
_LINE4_DIRS = ((1, 0), (0, 1), (1, 1), (-1, 1))


class Line4Rules(GameRules):
    """Place-to-make-4-in-a-row on a square board; full board is a draw."""

    def __init__(self, width: int, height: int):
        if width < 4 or height < 4:
            raise ValueError("line4 board needs width and height >= 4")
        super().__init__(build_board(Square(width, height)))
        self.width = width
        self.height = height
        self.name = f"line4-{width}x{height}"

    def _value(self, board: ChunkSet, x: int, y: int) -> int:
        if not (0 <= x < self.width and 0 <= y < self.height):
            return 0
        return board.get(y * self.width + x)

    def status(self, state: GameState) -> int | None:
        board = state.board
        for y in range(self.height):
            for x in range(self.width):
                v = board.get(y * self.width + x)
                if v == 0:
                    continue
                for dx, dy in _LINE4_DIRS:
                    if all(self._value(board, x + k * dx, y + k * dy) == v for k in range(1, 4)):
                        return v
        if state.move_number >= self.graph.cell_count:
            return 0
        return None


def hex_rules(size: int) -> HexRules:
    return HexRules(size)


def line4_rules(width: int, height: int) -> Line4Rules:
    return Line4Rules(width, height)


def game_from_name(name: str) -> GameRules:
    """Registry lookup: ``hexN`` or ``line4-WxH`` (``line4`` = 7x7)."""
    name = name.strip().lower()
    if name.startswith("hex"):
        try:
            return hex_rules(int(name[3:]))
        except ValueError:
            raise ValueError(f"bad hex board name {name!r}; use e.g. hex7") from None
    if name == "line4":
        return line4_rules(7, 7)
    if name.startswith("line4-"):
        dims = name[6:].split("x")
        if len(dims) == 2:
            try:
                return line4_rules(int(dims[0]), int(dims[1]))
            except ValueError:
                pass
        raise ValueError(f"bad line4 board name {name!r}; use e.g. line4-7x7")
    raise ValueError(f"unknown game {name!r}; known: hexN, line4-WxH")
