"""Quantum spectra of limit cycles.

A cycle of period P stepped once per dt is a clock with energy quantum
E = h/(P dt). One step of the quotient dynamics is a permutation whose
eigenvalues are roots of unity, so each P-cycle contributes eigenphases
{2 pi k/P}. Operators diagonal in the state basis stay diagonal under
that evolution and commute exactly at all times; energy ladders carry
the half-quantum ground offset, with a flag for the plain integer
convention, and a bra sector that mirrors the ket energies with a sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SECTORS = ("ket", "bra")

SPECTRUM_COLUMNS = ("cycle_id", "P", "k", "phase", "E", "n", "H_value", "sector")


@dataclass(frozen=True)
class EnergyLevel:
    """One level of the ladder H = +-(n + offset) E."""

    E: float
    n: int
    H_value: float
    sector: str

    def __post_init__(self):
        if self.E <= 0:
            raise ValueError("E must be positive")
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.sector not in SECTORS:
            raise ValueError(f"sector must be one of {SECTORS}")
        if self.sector == "ket" and self.H_value < 0:
            raise ValueError("ket levels must have non-negative H_value")
        if self.sector == "bra" and self.H_value > 0:
            raise ValueError("bra levels must have non-positive H_value")


@dataclass(frozen=True)
class CyclePhases:
    """Eigenphases contributed by one cycle: {2 pi k / period}."""

    cycle_id: int
    period: int
    phases: tuple


@dataclass(frozen=True)
class EigenphaseSpectrum:
    cycles: tuple

    def all_phases(self) -> np.ndarray:
        """Every eigenphase of the evolution, cycle by cycle."""
        if not self.cycles:
            return np.empty(0)
        return np.concatenate([np.asarray(c.phases) for c in self.cycles])


@dataclass(frozen=True, eq=False)
class BeableOperator:
    """Operator diagonal in the state basis: a function of the state.

    The diagonal is kept as a tuple so integer-valued operators stay
    exact under evolution and commutator arithmetic.
    """

    diagonal: tuple

    def __init__(self, diagonal):
        object.__setattr__(self, "diagonal", tuple(diagonal))


def cycle_energy(period: int, h: float = 1.0, dt: float = 1.0) -> float:
    """Energy quantum of a P-cycle: E = h / (P dt)."""
    if period < 1:
        raise ValueError("period must be positive")
    if h <= 0 or dt <= 0:
        raise ValueError("h and dt must be positive")
    return h / (period * dt)


def hamiltonian_levels(E: float, n_max: int, sector: str = "ket",
                       half_offset: bool = True) -> list:
    """Ladder of levels (n + 1/2) E for n = 0..n_max, negated in the bra sector.

    half_offset=False gives the plain integer ladder n E instead.
    """
    if E <= 0:
        raise ValueError("E must be positive")
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if sector not in SECTORS:
        raise ValueError(f"sector must be one of {SECTORS}")
    sign = 1.0 if sector == "ket" else -1.0
    offset = 0.5 if half_offset else 0.0
    return [EnergyLevel(E=E, n=n, H_value=sign * (n + offset) * E, sector=sector)
            for n in range(n_max + 1)]


def _permutation_cycles(perm: dict) -> list:
    """Cycles of a permutation dict, each starting at its smallest member."""
    keys = set(perm)
    values = set(perm.values())
    if values != keys:
        raise ValueError("input is not a bijection on its domain")
    seen = set()
    cycles = []
    for s in sorted(keys):
        if s in seen:
            continue
        members = [s]
        seen.add(s)
        u = perm[s]
        while u != s:
            members.append(u)
            seen.add(u)
            u = perm[u]
        cycles.append(tuple(members))
    return cycles


def evolution_eigenphases(perm: dict) -> EigenphaseSpectrum:
    """Eigenphases of the one-step evolution restricted to recurrent states.

    The evolution is a permutation matrix; a cycle of length P contributes
    the P-th roots of unity, i.e. phases {2 pi k / P : k = 0..P-1}.
    """
    cycles = _permutation_cycles(dict(perm))
    out = []
    for cid, members in enumerate(cycles):
        p = len(members)
        phases = tuple(2.0 * math.pi * k / p for k in range(p))
        out.append(CyclePhases(cycle_id=cid, period=p, phases=phases))
    return EigenphaseSpectrum(cycles=tuple(out))


def _evolved_diagonal(diag: tuple, perm: dict, domain: list, t: int) -> list:
    """Diagonal of the operator evolved t steps under the permutation.

    Conjugating a diagonal operator by the permutation matrix U (one step
    of evolution) yields another diagonal: the entries are permuted, with
    entry at s coming from the t-fold preimage of s. Negative t uses the
    forward map.
    """
    index_of = {s: i for i, s in enumerate(domain)}
    if t >= 0:
        move = [index_of[perm[s]] for s in domain]     # i -> index of sigma(domain[i])
        steps = t
    else:
        inv = {v: k for k, v in perm.items()}
        move = [index_of[inv[s]] for s in domain]
        steps = -t
    out = list(diag)
    for _ in range(steps):
        out = [out[i] for i in move]
    return out


def beable_commutator_norm(A: BeableOperator, B: BeableOperator, perm: dict,
                           t1: int, t2: int):
    """Max-norm of [A(t1), B(t2)] with both operators evolved by the permutation.

    Both evolved operators are diagonal, so the commutator has no
    off-diagonal entries; the norm is the largest |a b - b a| over the
    diagonal, computed literally so integer inputs give an exact 0.
    """
    domain = sorted(perm)
    if len(A.diagonal) != len(domain) or len(B.diagonal) != len(domain):
        raise ValueError("operator dimensions do not match the permutation domain")
    a = _evolved_diagonal(A.diagonal, perm, domain, t1)
    b = _evolved_diagonal(B.diagonal, perm, domain, t2)
    return max((abs(x * y - y * x) for x, y in zip(a, b)), default=0)


def cycle_position(mode_weights, members: tuple):
    """Most likely cycle position of a superposition of one cycle's modes.

    mode_weights are complex amplitudes over the P eigenmodes of a single
    cycle (indexed by the phase integer k); the inverse transform gives
    the amplitude at each cycle position, and the member with the largest
    magnitude is returned. Only meaningful for one cycle at a time.
    """
    w = np.asarray(mode_weights, dtype=complex)
    if w.size != len(members):
        raise ValueError("need one weight per eigenmode of the cycle")
    amplitudes = np.fft.ifft(w)
    return members[int(np.argmax(np.abs(amplitudes)))]


def spectrum_rows(spectrum: EigenphaseSpectrum, h: float = 1.0, dt: float = 1.0):
    """Tabular export: one row per (cycle, eigenphase, sector).

    Columns follow SPECTRUM_COLUMNS; the level index n is identified with
    the phase integer k of the same cycle, H_value = +-(n + 1/2) E.
    """
    for cp in spectrum.cycles:
        e = cycle_energy(cp.period, h, dt)
        for k, phase in enumerate(cp.phases):
            for sector, sign in (("ket", 1.0), ("bra", -1.0)):
                yield (cp.cycle_id, cp.period, k, phase, e, k,
                       sign * (k + 0.5) * e, sector)
