"""Finite map machinery: cycle finding, decomposition, quotients, file I/O."""

import json
import pathlib
import zlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontoq.automaton import (
    CycleDecomposition,
    MapTable,
    TotalisticRule,
    ca_map,
    decompose,
    decomposition_json,
    evolve,
    explicit_map,
    find_cycle,
    load_map,
    map_from_bytes,
    map_to_bytes,
    quotient,
    random_map,
    save_map,
    step,
)

DATA = pathlib.Path(__file__).parent / "data"


def trajectory_oracle(m, s):
    """First-repeat scan with a hash map: (tail_length, period)."""
    seen = {}
    x, t = s, 0
    nxt = m.next_list
    while x not in seen:
        seen[x] = t
        x = nxt[x]
        t += 1
    return seen[x], t - seen[x]


small_maps = st.integers(min_value=1, max_value=64).flatmap(
    lambda n: st.lists(
        st.integers(min_value=0, max_value=n - 1), min_size=n, max_size=n
    )
)


# ---------------------------------------------------------------- tables


def test_explicit_map_basic():
    m = explicit_map([1, 2, 0])
    assert m.n_states == 3
    assert m.next.tolist() == [1, 2, 0]
    assert m.provenance == "explicit"


def test_table_rejects_out_of_range():
    with pytest.raises(ValueError):
        explicit_map([0, 3, 1])
    with pytest.raises(ValueError):
        explicit_map([-1, 0])
    with pytest.raises(ValueError):
        explicit_map([])


def test_table_is_read_only():
    m = explicit_map([1, 0])
    with pytest.raises(ValueError):
        m.next[0] = 1


def test_random_map_golden():
    ref = json.loads((DATA / "random_map_4_seed42.json").read_text())
    m = random_map(ref["n_states"], ref["seed"])
    assert m.next.tolist() == ref["next"]
    assert "42" in m.provenance


def test_random_map_deterministic():
    a = random_map(1000, 5)
    b = random_map(1000, 5)
    assert np.array_equal(a.next, b.next)
    assert not np.array_equal(a.next, random_map(1000, 6).next)


def test_random_map_single_state():
    assert random_map(1, 0).next.tolist() == [0]


# ---------------------------------------------------------------- stepping


def test_step_and_evolve():
    m = explicit_map([1, 2, 0])
    assert step(m, 0) == 1
    assert evolve(m, 0, 0) == 0
    assert evolve(m, 0, 3) == 0
    assert evolve(m, 2, 4) == 0


def test_evolve_matches_repeated_step():
    m = random_map(4096, 1)
    s = 17
    for t in range(200):
        assert evolve(m, s, t) == _iterate(m, s, t)


def _iterate(m, s, t):
    for _ in range(t):
        s = step(m, s)
    return s


def test_step_rejects_bad_state():
    m = explicit_map([0])
    with pytest.raises(ValueError):
        step(m, 1)
    with pytest.raises(ValueError):
        evolve(m, -1, 2)
    with pytest.raises(ValueError):
        evolve(m, 0, -1)


# ---------------------------------------------------------------- cycles


def test_find_cycle_pure_cycle():
    m = explicit_map([1, 2, 0])
    info = find_cycle(m, 0)
    assert (info.tail_length, info.period) == (0, 3)
    assert info.entry_state == 0


def test_find_cycle_tail():
    m = explicit_map([0, 0, 0])
    info = find_cycle(m, 2)
    assert (info.tail_length, info.period) == (1, 1)
    assert info.entry_state == 0


def test_find_cycle_matches_oracle_everywhere():
    for seed in (9, 10, 11):
        m = random_map(512, seed)
        for s in range(512):
            info = find_cycle(m, s)
            assert (info.tail_length, info.period) == trajectory_oracle(m, s)
            # entry state is where the trajectory first becomes recurrent
            assert info.entry_state == evolve(m, s, info.tail_length)


def test_find_cycle_period_minimal():
    # the reported period must be the least t with f^t fixing the entry state
    m = random_map(256, 3)
    for s in range(0, 256, 7):
        info = find_cycle(m, s)
        e = info.entry_state
        for t in range(1, info.period):
            assert evolve(m, e, t) != e
        assert evolve(m, e, info.period) == e


# ---------------------------------------------------------------- decompose


def test_decompose_identity():
    d = decompose(explicit_map([0, 1, 2, 3, 4]))
    assert len(d.cycles) == 5
    assert all(c.period == 1 for c in d.cycles)
    assert d.basin_size.tolist() == [1, 1, 1, 1, 1]


def test_decompose_single_cycle_with_tail():
    d = decompose(explicit_map([1, 2, 0, 0]))
    assert len(d.cycles) == 1
    assert d.cycles[0].members == (0, 1, 2)
    assert d.cycles[0].period == 3
    assert d.basin_size.tolist() == [4]
    assert d.cycle_id_of.tolist() == [0, 0, 0, 0]


def test_cycles_listed_from_smallest_member():
    d = decompose(explicit_map([1, 0, 3, 2]))
    assert [c.members for c in d.cycles] == [(0, 1), (2, 3)]
    assert [c.cycle_id for c in d.cycles] == [0, 1]


def test_cycle_ids_ordered_by_smallest_member():
    # two 2-cycles listed against state order of their smallest members
    d = decompose(explicit_map([3, 2, 1, 0]))
    assert [min(c.members) for c in d.cycles] == sorted(
        min(c.members) for c in d.cycles
    )


def test_decompose_invariants_random():
    m = random_map(2048, 13)
    d = decompose(m)
    assert d.basin_size.sum() == 2048
    members = [s for c in d.cycles for s in c.members]
    assert len(members) == len(set(members))
    assert set(members) == set(d.recurrent_states())
    # recurrent states are permuted among themselves
    rec = set(members)
    assert {step(m, s) for s in rec} == rec


def test_decompose_agrees_with_per_start_walks():
    m = random_map(777, 4)
    d = decompose(m)
    for s in range(777):
        info = find_cycle(m, s)
        cid = d.cycle_id_of[s]
        assert d.cycles[cid].period == info.period
        assert info.entry_state in d.cycles[cid].members


def test_phase_tracks_evolution():
    m = random_map(300, 8)
    d = decompose(m)
    for s in range(0, 300, 11):
        info = find_cycle(m, s)
        c = d.cycles[d.cycle_id_of[s]]
        for extra in (0, 1, 5):
            t = info.tail_length + extra
            expect = c.members[(d.phase_of[s] + t) % c.period]
            assert evolve(m, s, t) == expect


def test_class_of_constant_along_tail():
    m = explicit_map([1, 2, 0, 2, 3])
    d = decompose(m)
    # state 4 leads 4 -> 3 -> 2; class must advance with the dynamics
    assert d.class_of(3) == d.class_of(step(m, 4))


def test_projection_intertwines():
    m = random_map(512, 5)
    d = decompose(m)
    proj = d.projection()
    perm, _ = quotient(m)
    for s in range(512):
        assert perm[proj[s]] == proj[step(m, s)]


def test_quotient_of_pure_cycle_is_itself():
    m = explicit_map([1, 2, 0])
    perm, proj = quotient(m)
    assert perm == {0: 1, 1: 2, 2: 0}
    assert proj.tolist() == [0, 1, 2]


def test_quotient_collapses_tails():
    perm, proj = quotient(explicit_map([0, 0, 0]))
    assert perm == {0: 0}
    assert proj.tolist() == [0, 0, 0]


# ---------------------------------------------------------------- automata


def naive_ca_step(bits, width, height, rule):
    """Single automaton update, one cell at a time, torus wrap."""
    out = 0
    for y in range(height):
        for x in range(width):
            live = 0
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    if dx == 0 and dy == 0:
                        continue
                    nx, ny = (x + dx) % width, (y + dy) % height
                    live += (bits >> (ny * width + nx)) & 1
            alive = (bits >> (y * width + x)) & 1
            if alive and live in rule.survive:
                out |= 1 << (y * width + x)
            if not alive and live in rule.born:
                out |= 1 << (y * width + x)
    return out


@pytest.mark.parametrize("width,height", [(1, 1), (2, 2), (3, 3), (2, 3)])
def test_ca_map_matches_naive(width, height):
    rule = TotalisticRule.parse("B3/S23")
    m = ca_map(width, height, rule)
    n = 1 << (width * height)
    assert m.n_states == n
    for bits in range(n):
        assert m.next[bits] == naive_ca_step(bits, width, height, rule)


def test_ca_map_dead_grid_stays_dead():
    m = ca_map(3, 3, TotalisticRule.parse("B3/S23"))
    assert m.next[0] == 0


def test_ca_rule_parse():
    r = TotalisticRule.parse("B36/S23")
    assert r.born == frozenset({3, 6})
    assert r.survive == frozenset({2, 3})
    assert TotalisticRule.parse("b3/s23") == TotalisticRule.parse("B3/S23")


@pytest.mark.parametrize("text", ["B3S23", "B9/S2", "3/23", ""])
def test_ca_rule_parse_rejects(text):
    with pytest.raises(ValueError):
        TotalisticRule.parse(text)


def test_ca_map_bit_budget():
    with pytest.raises(ValueError):
        ca_map(6, 5, TotalisticRule.parse("B3/S23"), max_bits=24)


# ---------------------------------------------------------------- file I/O


def test_map_bytes_round_trip():
    m = random_map(100, 7)
    again = map_from_bytes(map_to_bytes(m))
    assert again.n_states == 100
    assert np.array_equal(again.next, m.next)


def test_map_bytes_layout():
    raw = map_to_bytes(explicit_map([1, 0]))
    assert raw[:4] == b"OMAP"
    assert int.from_bytes(raw[4:6], "little") == 1
    assert int.from_bytes(raw[6:14], "little") == 2
    assert len(raw) == 14 + 2 * 8


def test_map_bytes_rejects_garbage():
    good = map_to_bytes(explicit_map([1, 0]))
    with pytest.raises(ValueError):
        map_from_bytes(b"XMAP" + good[4:])
    with pytest.raises(ValueError):
        map_from_bytes(good[:-3])
    bad_version = good[:4] + (9).to_bytes(2, "little") + good[6:]
    with pytest.raises(ValueError):
        map_from_bytes(bad_version)


def test_save_and_load_map(tmp_path):
    m = random_map(64, 2)
    path = tmp_path / "m.omap"
    save_map(m, path)
    again = load_map(path)
    assert np.array_equal(again.next, m.next)


def test_decomposition_json_fields():
    m = explicit_map([1, 2, 0, 0])
    doc = decomposition_json(m)
    assert doc["n_states"] == 4
    assert doc["checksum"] == zlib.crc32(map_to_bytes(m))
    (cyc,) = doc["cycles"]
    assert cyc == {"id": 0, "period": 3, "members": [0, 1, 2], "basin": 4}


def test_decomposition_json_accepts_precomputed():
    m = random_map(50, 1)
    d = decompose(m)
    assert decomposition_json(m, d) == decomposition_json(m)


# ---------------------------------------------------------------- property


@settings(max_examples=150)
@given(small_maps)
def test_find_cycle_matches_oracle_property(table):
    m = explicit_map(table)
    for s in range(m.n_states):
        info = find_cycle(m, s)
        assert (info.tail_length, info.period) == trajectory_oracle(m, s)


@settings(max_examples=150)
@given(small_maps)
def test_decompose_invariants_property(table):
    m = explicit_map(table)
    d = decompose(m)
    assert isinstance(d, CycleDecomposition)
    assert d.basin_size.sum() == m.n_states
    members = [s for c in d.cycles for s in c.members]
    assert len(members) == len(set(members))
    rec = set(members)
    assert {step(m, s) for s in rec} == rec
    proj = d.projection()
    perm, _ = quotient(m)
    for s in range(m.n_states):
        assert perm[proj[s]] == proj[step(m, s)]
        info = find_cycle(m, s)
        assert d.cycles[d.cycle_id_of[s]].period == info.period
