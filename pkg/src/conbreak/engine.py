"""Biased connectivity game engine.

Two players alternately claim free edges of a fixed graph. Connector may
claim up to m edges per round and must keep her claimed edge set connected
at all times; Breaker may claim up to b arbitrary free edges. A round is
one Connector move followed by one Breaker move. Connector wins the moment
her edges form a connected spanning subgraph; if the board runs out of free
edges first, Breaker wins. Either side loses immediately by making an
illegal move or by resigning (a forfeit move).

"Up to" is literal: partial moves, including empty ones, are legal. To keep
degenerate stand-offs finite, a full round in which both players claim
nothing while free edges remain ends the game in Breaker's favour (the
board is exhausted for all practical purposes; Connector can never span
from a position she refuses to play).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Protocol, Tuple

from .errors import ConnectivityError, IllegalMoveError, ParameterError
from .graph import Edge, Graph, edge

CONNECTOR = "C"
BREAKER = "B"

REASON_SPANNED = "spanned"
REASON_EXHAUSTED = "board-exhausted"
REASON_FORFEIT = "forfeit"


@dataclass(frozen=True)
class Move:
    """A single player's move: an ordered tuple of edges to claim.

    For Connector the order matters: each edge must touch her territory as
    it stands when that edge is claimed, and territory grows edge by edge
    within the move. `flags` carries strategy diagnostics (for example a
    blown violation budget) into the game record. A forfeit move resigns.
    """

    edges: Tuple[Edge, ...] = ()
    flags: Tuple[str, ...] = ()
    forfeit: bool = False

    @staticmethod
    def of(*pairs) -> "Move":
        return Move(tuple(edge(u, v) for u, v in pairs))


class GameState:
    """Snapshot of a game in progress.

    `v_c` is Connector's territory: the endpoints of her claimed edges,
    plus the start vertex when one is fixed. `round` counts from 1 and
    increments after Breaker's reply, so within one round Connector moves
    first and both moves share the round number.
    """

    __slots__ = (
        "graph",
        "connector_edges",
        "breaker_edges",
        "v_c",
        "m",
        "b",
        "round",
        "to_move",
        "start_vertex",
    )

    def __init__(
        self,
        graph: Graph,
        m: int = 2,
        b: int = 2,
        start_vertex: Optional[int] = None,
        connector_edges: Iterable[Edge] = (),
        breaker_edges: Iterable[Edge] = (),
        round: int = 1,
        to_move: str = CONNECTOR,
    ):
        if m < 1 or b < 1:
            raise ParameterError(f"bias must be at least 1, got m={m} b={b}")
        if start_vertex is not None and not (0 <= start_vertex < graph.n):
            raise ParameterError(f"start vertex {start_vertex} out of range")
        if to_move not in (CONNECTOR, BREAKER):
            raise ParameterError(f"to_move must be 'C' or 'B', got {to_move!r}")
        self.graph = graph
        self.m = m
        self.b = b
        self.start_vertex = start_vertex
        self.connector_edges = set(connector_edges)
        self.breaker_edges = set(breaker_edges)
        self.round = round
        self.to_move = to_move
        vc = set()
        if start_vertex is not None:
            vc.add(start_vertex)
        for u, v in self.connector_edges:
            vc.add(u)
            vc.add(v)
        self.v_c = vc

    def copy(self) -> "GameState":
        s = GameState.__new__(GameState)
        s.graph = self.graph
        s.m = self.m
        s.b = self.b
        s.start_vertex = self.start_vertex
        s.connector_edges = set(self.connector_edges)
        s.breaker_edges = set(self.breaker_edges)
        s.round = self.round
        s.to_move = self.to_move
        s.v_c = set(self.v_c)
        return s

    def bias(self, role: str) -> int:
        return self.m if role == CONNECTOR else self.b

    def is_free(self, e: Edge) -> bool:
        return (
            e in self.graph.edges
            and e not in self.connector_edges
            and e not in self.breaker_edges
        )

    def free_edges(self) -> List[Edge]:
        """Free edges in ascending order. O(|E|); avoid in hot loops."""
        claimed = self.connector_edges
        blocked = self.breaker_edges
        return [e for e in self.graph.sorted_edges() if e not in claimed and e not in blocked]

    def free_edge_count(self) -> int:
        return (
            self.graph.edge_count()
            - len(self.connector_edges)
            - len(self.breaker_edges)
        )

    def connector_has_spanned(self) -> bool:
        """Connector's edges are kept connected by the rules, so she spans
        exactly when her territory covers every vertex."""
        if self.graph.n <= 1:
            return True
        return len(self.v_c) == self.graph.n

    def breaker_degree(self, v: int) -> int:
        """Number of Breaker edges incident to v. O(|E_B|)."""
        return sum(1 for e in self.breaker_edges if v in e)

    def snapshot_key(self):
        return (
            frozenset(self.connector_edges),
            frozenset(self.breaker_edges),
            self.round,
            self.to_move,
        )


def _check_move(state: GameState, move: Move) -> None:
    """Raise if `move` is illegal for state.to_move in `state`."""
    role = state.to_move
    limit = state.bias(role)
    if len(move.edges) > limit:
        raise IllegalMoveError(
            f"{role} claimed {len(move.edges)} edges, bias allows {limit}"
        )
    seen = set()
    vc = set(state.v_c)
    for e in move.edges:
        e = edge(*e)
        if e in seen:
            raise IllegalMoveError(f"edge {e} claimed twice in one move", edge=e)
        seen.add(e)
        if e not in state.graph.edges:
            raise IllegalMoveError(f"edge {e} is not an edge of the board", edge=e)
        if e in state.connector_edges or e in state.breaker_edges:
            raise IllegalMoveError(f"edge {e} is already claimed", edge=e)
        if role == CONNECTOR:
            if vc and e[0] not in vc and e[1] not in vc:
                raise ConnectivityError(
                    f"edge {e} does not touch Connector territory", edge=e
                )
            vc.add(e[0])
            vc.add(e[1])


def _apply_in_place(state: GameState, move: Move) -> None:
    """Apply a checked move. Mutates `state`; used by the game loop."""
    role = state.to_move
    if role == CONNECTOR:
        for e in move.edges:
            e = edge(*e)
            state.connector_edges.add(e)
            state.v_c.add(e[0])
            state.v_c.add(e[1])
        state.to_move = BREAKER
    else:
        for e in move.edges:
            state.breaker_edges.add(edge(*e))
        state.to_move = CONNECTOR
        state.round += 1


def validate_and_apply(state: GameState, move: Move) -> GameState:
    """Check `move` for the player to move and return the resulting state.

    The input state is not modified. Raises IllegalMoveError (naming the
    offending edge) or ConnectivityError on a bad move.
    """
    if move.forfeit:
        raise IllegalMoveError("a forfeit move cannot be applied to a state")
    _check_move(state, move)
    out = state.copy()
    _apply_in_place(out, move)
    return out


class Strategy(Protocol):
    """A decision procedure for one side of one game.

    Instances are per-game: `start` is called once with the board, the role
    ('C' or 'B') and a seed, then `propose` once per turn. Given the same
    board, role, seed and state sequence, a strategy must produce the same
    moves. Strategies may keep per-game caches but must treat the passed
    state as read-only.
    """

    def start(self, graph: Graph, role: str, seed: int) -> None: ...

    def propose(self, state: GameState) -> Move: ...


@dataclass
class GameResult:
    """Outcome plus a replayable transcript.

    `transcript` holds one (round, role, edges) entry per move in play
    order. Replaying the moves through validate_and_apply from the initial
    state reproduces `final_state`. `rounds` is the round number of the
    last recorded move, 0 when the game ended before any move.
    """

    winner: str
    reason: str
    rounds: int
    transcript: Tuple[Tuple[int, str, Tuple[Edge, ...]], ...]
    flags: Tuple[str, ...]
    final_state: GameState
    m: int
    b: int
    start_vertex: Optional[int]
    seed: int

    def transcript_jsonl(self) -> str:
        import json

        lines = []
        for rnd, role, edges in self.transcript:
            lines.append(
                json.dumps(
                    {"round": rnd, "player": role, "edges": [list(e) for e in edges]},
                    separators=(",", ":"),
                )
            )
        lines.append(
            json.dumps(
                {"winner": self.winner, "reason": self.reason},
                separators=(",", ":"),
            )
        )
        return "\n".join(lines) + "\n"


# Tags for the per-role sub-streams drawn from a game seed.
_TAG_CONNECTOR = 0xC0
_TAG_BREAKER = 0xB0


def run_game(
    graph: Graph,
    connector: Strategy,
    breaker: Strategy,
    m: int = 2,
    b: int = 2,
    start_vertex: Optional[int] = None,
    seed: int = 0,
) -> GameResult:
    """Play one game to the end and return its result.

    Connector moves first. Each strategy gets an independent sub-seed
    derived from `seed` (tags 0xC0 and 0xB0 through the documented derive
    function), so a single game seed pins the whole transcript. An illegal
    move or a forfeit move ends the game against its author.
    """
    from .rng import derive

    state = GameState(graph, m=m, b=b, start_vertex=start_vertex)
    connector.start(graph, CONNECTOR, derive(seed, _TAG_CONNECTOR))
    breaker.start(graph, BREAKER, derive(seed, _TAG_BREAKER))
    strategies = {CONNECTOR: connector, BREAKER: breaker}

    transcript: list = []
    flags: list = []
    total_edges = graph.edge_count()
    winner = reason = None
    last_was_empty = False

    if state.connector_has_spanned():
        winner, reason = CONNECTOR, REASON_SPANNED

    while winner is None:
        role = state.to_move
        move = strategies[role].propose(state)
        if move.forfeit:
            winner = BREAKER if role == CONNECTOR else CONNECTOR
            reason = REASON_FORFEIT
            flags.extend(move.flags)
            break
        try:
            _check_move(state, move)
        except IllegalMoveError:
            winner = BREAKER if role == CONNECTOR else CONNECTOR
            reason = REASON_FORFEIT
            flags.extend(move.flags)
            break
        transcript.append((state.round, role, tuple(edge(*e) for e in move.edges)))
        flags.extend(move.flags)
        _apply_in_place(state, move)
        if role == CONNECTOR and state.connector_has_spanned():
            winner, reason = CONNECTOR, REASON_SPANNED
            break
        claimed = len(state.connector_edges) + len(state.breaker_edges)
        if claimed == total_edges:
            winner, reason = BREAKER, REASON_EXHAUSTED
            break
        if not move.edges:
            if last_was_empty:
                winner, reason = BREAKER, REASON_EXHAUSTED
                break
            last_was_empty = True
        else:
            last_was_empty = False

    rounds = transcript[-1][0] if transcript else 0
    return GameResult(
        winner=winner,
        reason=reason,
        rounds=rounds,
        transcript=tuple(transcript),
        flags=tuple(flags),
        final_state=state,
        m=m,
        b=b,
        start_vertex=start_vertex,
        seed=seed,
    )


def replay(result: GameResult, graph: Graph) -> GameState:
    """Re-derive the final state of a recorded game through the functional
    path. Used to check transcript integrity."""
    state = GameState(
        graph, m=result.m, b=result.b, start_vertex=result.start_vertex
    )
    for rnd, role, edges in result.transcript:
        if role != state.to_move:
            raise ParameterError(
                f"transcript out of turn at round {rnd}: {role} cannot move"
            )
        state = validate_and_apply(state, Move(edges))
    return state
