"""Finite deterministic systems as maps on {0, ..., N-1}.

A map table sends every state to a unique successor, so each trajectory
is a tail followed by a limit cycle. This module builds tables
(explicit, seeded-random, cellular-automaton), evolves states, detects
cycles with constant memory, decomposes the whole functional graph into
cycles with basins and per-state (cycle, phase) classes, and projects
the dynamics onto the recurrent states, where it is a permutation.
"""

from __future__ import annotations

import re
import struct
import zlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import rng

OMAP_MAGIC = b"OMAP"
OMAP_VERSION = 1

# Moore neighborhood offsets, torus wrap; on tiny grids offsets can alias
# onto the same cell and are then counted with multiplicity
_MOORE = tuple((dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if (dx, dy) != (0, 0))


@dataclass(frozen=True, eq=False)
class MapTable:
    """Evolution law next: {0..n_states-1} -> {0..n_states-1}."""

    n_states: int
    next: np.ndarray
    provenance: str = "explicit"

    def __post_init__(self):
        if self.n_states < 1:
            raise ValueError("n_states must be positive")
        arr = np.array(self.next, dtype=np.int64, copy=True)
        if arr.shape != (self.n_states,):
            raise ValueError("next must be a flat array of length n_states")
        if arr.min() < 0 or arr.max() >= self.n_states:
            raise ValueError("next entries must lie in [0, n_states)")
        arr.setflags(write=False)
        object.__setattr__(self, "next", arr)

    @cached_property
    def next_list(self) -> list:
        """Plain-list view of the table; much faster for scalar walks."""
        return self.next.tolist()


@dataclass(frozen=True)
class CycleInfo:
    """Tail and cycle data of one trajectory."""

    start_state: int
    tail_length: int
    period: int
    entry_state: int

    def __post_init__(self):
        if self.tail_length < 0:
            raise ValueError("tail_length must be non-negative")
        if self.period < 1:
            raise ValueError("period must be positive")


@dataclass(frozen=True, eq=False)
class CycleOrbit:
    """One limit cycle; members in cyclic order starting at the smallest."""

    cycle_id: int
    members: tuple
    period: int


@dataclass(frozen=True, eq=False)
class CycleDecomposition:
    """Full functional-graph decomposition of a map.

    cycles are ordered by their smallest member; cycle_id_of and phase_of
    give each state's class: the cycle it ends on and the position on
    that cycle its trajectory locks into (entry position shifted back by
    the tail length, mod period).
    """

    n_states: int
    cycles: tuple
    basin_size: np.ndarray
    cycle_id_of: np.ndarray
    phase_of: np.ndarray

    def class_of(self, s: int) -> tuple:
        return (int(self.cycle_id_of[s]), int(self.phase_of[s]))

    def recurrent_states(self) -> np.ndarray:
        if not self.cycles:
            return np.empty(0, dtype=np.int64)
        flat = np.concatenate([np.asarray(c.members, dtype=np.int64) for c in self.cycles])
        return np.sort(flat)

    def projection(self) -> np.ndarray:
        """Array sending every state to the cycle member it locks onto."""
        flat = np.concatenate([np.asarray(c.members, dtype=np.int64) for c in self.cycles])
        periods = np.array([c.period for c in self.cycles], dtype=np.int64)
        offsets = np.concatenate(([0], np.cumsum(periods)[:-1]))
        return flat[offsets[self.cycle_id_of] + self.phase_of]


def explicit_map(table) -> MapTable:
    """MapTable from any explicit successor sequence."""
    arr = np.asarray(table, dtype=np.int64)
    return MapTable(arr.size, arr, "explicit")


def random_map(n_states: int, seed: int) -> MapTable:
    """Uniform random map: every successor drawn independently from [0, N).

    Deterministic in (n_states, seed); the draw stream is documented in
    the rng module.
    """
    if n_states < 1:
        raise ValueError("n_states must be positive")
    table = rng.uniform_below(seed, n_states, n_states)
    return MapTable(n_states, table, f"seeded-random(seed={seed})")


@dataclass(frozen=True)
class TotalisticRule:
    """Outer-totalistic birth/survival rule on the Moore neighborhood."""

    born: frozenset
    survive: frozenset

    @classmethod
    def parse(cls, text: str) -> "TotalisticRule":
        m = re.fullmatch(r"[Bb]([0-8]*)/[Ss]([0-8]*)", text.strip())
        if not m:
            raise ValueError(f"unrecognized rule descriptor: {text!r}")
        return cls(frozenset(int(c) for c in m.group(1)),
                   frozenset(int(c) for c in m.group(2)))


def ca_map(width: int, height: int, rule, max_bits: int = 24) -> MapTable:
    """Explicit map of a synchronous totalistic automaton on a w x h torus.

    States are bit-packed grids (cell (x, y) is bit y*width + x), so the
    table has 2^(w*h) entries; grids above `max_bits` cells are refused.
    """
    if isinstance(rule, str):
        rule = TotalisticRule.parse(rule)
    if width < 1 or height < 1:
        raise ValueError("grid dimensions must be positive")
    n_cells = width * height
    if n_cells > max_bits:
        raise ValueError(f"grid needs {n_cells} state bits, budget is {max_bits}")
    n = 1 << n_cells
    states = np.arange(n, dtype=np.uint64)
    one = np.uint64(1)
    nxt = np.zeros(n, dtype=np.uint64)
    born = np.array(sorted(rule.born), dtype=np.uint8)
    survive = np.array(sorted(rule.survive), dtype=np.uint8)
    for y in range(height):
        for x in range(width):
            i = y * width + x
            count = np.zeros(n, dtype=np.uint8)
            for dx, dy in _MOORE:
                j = ((y + dy) % height) * width + ((x + dx) % width)
                count += ((states >> np.uint64(j)) & one).astype(np.uint8)
            alive = ((states >> np.uint64(i)) & one).astype(bool)
            new_bit = np.where(alive, np.isin(count, survive), np.isin(count, born))
            nxt |= new_bit.astype(np.uint64) << np.uint64(i)
    prov = f"cellular-automaton(width={width}, height={height}, " \
           f"born={sorted(rule.born)}, survive={sorted(rule.survive)})"
    return MapTable(n, nxt.astype(np.int64), prov)


def _check_state(m: MapTable, s: int) -> None:
    if not 0 <= s < m.n_states:
        raise ValueError(f"state {s} out of range [0, {m.n_states})")


def step(m: MapTable, s: int) -> int:
    """One application of the map."""
    _check_state(m, s)
    return int(m.next[s])


def evolve(m: MapTable, s: int, t: int) -> int:
    """t-fold application of the map; O(t) time, constant memory."""
    _check_state(m, s)
    if t < 0:
        raise ValueError("t must be non-negative")
    nxt = m.next_list
    for _ in range(t):
        s = nxt[s]
    return s


def find_cycle(m: MapTable, start: int) -> CycleInfo:
    """Minimal (tail_length, period) of the trajectory from `start`.

    Brent's method: constant memory, and the power-of-two restarts keep
    the number of map evaluations low. The result does not depend on the
    detection algorithm, only on the trajectory.
    """
    _check_state(m, start)
    nxt = m.next_list
    power = 1
    period = 1
    tortoise = start
    hare = nxt[start]
    while tortoise != hare:
        if power == period:
            tortoise = hare
            power *= 2
            period = 0
        hare = nxt[hare]
        period += 1
    tortoise = hare = start
    for _ in range(period):
        hare = nxt[hare]
    tail = 0
    while tortoise != hare:
        tortoise = nxt[tortoise]
        hare = nxt[hare]
        tail += 1
    return CycleInfo(start_state=start, tail_length=tail, period=period,
                     entry_state=tortoise)


def decompose(m: MapTable) -> CycleDecomposition:
    """Every cycle, basin size, and per-state class of the map, in O(N).

    Iterative path coloring: walk unvisited states until hitting either a
    fresh cycle (the path closes on itself) or an already-colored state,
    then unwind the tail assigning phases backwards.
    """
    n = m.n_states
    nxt = m.next_list
    cid = [-1] * n
    phase = [0] * n
    cycles = []
    for s0 in range(n):
        if cid[s0] != -1:
            continue
        path = []
        u = s0
        while cid[u] == -1:
            cid[u] = -2
            path.append(u)
            u = nxt[u]
        if cid[u] == -2:
            # path closed on itself: path[k:] is a new cycle
            k = path.index(u)
            cyc = path[k:]
            rot = min(range(len(cyc)), key=cyc.__getitem__)
            cyc = cyc[rot:] + cyc[:rot]
            ci = len(cycles)
            for i, v in enumerate(cyc):
                cid[v] = ci
                phase[v] = i
            cycles.append(CycleOrbit(cycle_id=ci, members=tuple(cyc), period=len(cyc)))
            tail = path[:k]
        else:
            tail = path
        if tail:
            entry = nxt[tail[-1]]
            ci = cid[entry]
            p = cycles[ci].period
            ph = phase[entry]
            for v in reversed(tail):
                ph = (ph - 1) % p
                cid[v] = ci
                phase[v] = ph
    # cycles were appended in order of first discovery, which scans states
    # upward, so they are already ordered by smallest member
    cid_arr = np.array(cid, dtype=np.int64)
    phase_arr = np.array(phase, dtype=np.int64)
    basins = np.bincount(cid_arr, minlength=len(cycles)).astype(np.int64)
    return CycleDecomposition(n_states=n, cycles=tuple(cycles), basin_size=basins,
                              cycle_id_of=cid_arr, phase_of=phase_arr)


def quotient(m: MapTable):
    """Restrict the map to its recurrent states.

    Returns (permutation, projection): the permutation is `next` on the
    union of cycle members as a dict, and projection is an array sending
    each state to the cycle member its trajectory locks onto, satisfying
    projection[next[s]] = permutation[projection[s]] for every s.
    """
    dec = decompose(m)
    perm = {}
    for orbit in dec.cycles:
        mem = orbit.members
        for i, u in enumerate(mem):
            perm[u] = mem[(i + 1) % orbit.period]
    return perm, dec.projection()


def map_to_bytes(m: MapTable) -> bytes:
    """Binary serialization: magic, u16 version, u64 N, N u64 entries (LE)."""
    header = OMAP_MAGIC + struct.pack("<H", OMAP_VERSION) + struct.pack("<Q", m.n_states)
    return header + m.next.astype("<u8").tobytes()


def map_from_bytes(data: bytes) -> MapTable:
    if data[:4] != OMAP_MAGIC:
        raise ValueError("not a map file: bad magic")
    (version,) = struct.unpack_from("<H", data, 4)
    if version != OMAP_VERSION:
        raise ValueError(f"unsupported map format version {version}")
    (n,) = struct.unpack_from("<Q", data, 6)
    body = data[14:]
    if len(body) != 8 * n:
        raise ValueError("map file length does not match header")
    table = np.frombuffer(body, dtype="<u8").astype(np.int64)
    return MapTable(n, table, "explicit")


def save_map(m: MapTable, path) -> None:
    with open(path, "wb") as f:
        f.write(map_to_bytes(m))


def load_map(path) -> MapTable:
    with open(path, "rb") as f:
        return map_from_bytes(f.read())


def decomposition_json(m: MapTable, dec: CycleDecomposition | None = None) -> dict:
    """JSON-ready decomposition record; checksum is CRC32 of the map bytes."""
    if dec is None:
        dec = decompose(m)
    return {
        "n_states": m.n_states,
        "cycles": [
            {
                "id": c.cycle_id,
                "period": c.period,
                "members": [int(v) for v in c.members],
                "basin": int(dec.basin_size[c.cycle_id]),
            }
            for c in dec.cycles
        ],
        "checksum": zlib.crc32(map_to_bytes(m)),
    }
