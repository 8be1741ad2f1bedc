"""Composition of periodic systems: spectra, series labels, and phases.

Two oscillators with positive rational frequencies have joint ket states
(n1, n2); the odd integers 2n1+1 and 2n2+1 reduce to a unique triple
(p, q, n) with p, q odd coprime, and the state's energy sits on the
ladder (n + 1/2) (p w1 + q w2). All spectrum arithmetic is exact over
rationals. Phases p q1 + q q2 label the joint equivalence classes, time
shifts within a class satisfy sum E_a dt_a = 0, and weakly coupled
periods compose harmonically: 1/P12 = 1/P1 + 1/P2. A physical-units
helper estimates the recurrence period h-bar style from SI inputs.

Frequencies and periods are fractions.Fraction values (auto-reduced,
positive denominator), which is exactly the reduced-rational invariant
the operations rely on.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

SECTORS = ("ket", "bra")

# SI constants for vacuum_cycle_period
PLANCK_SI = 6.62607015e-34      # J s
NEWTON_G_SI = 6.67430e-11       # m^3 kg^-1 s^-2
LIGHT_SPEED_SI = 299792458.0    # m s^-1

TWO_PI = 2.0 * math.pi


class PositivityViolation(ValueError):
    """Raised when corrected energies drop to zero or below."""

    def __init__(self, pairs):
        self.pairs = tuple(pairs)
        super().__init__(f"non-positive corrected energy at (i, j) pairs: {list(self.pairs)}")


def _as_fraction(value, name: str) -> Fraction:
    try:
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} must be rational, got {value!r}") from exc


def _positive_fraction(value, name: str) -> Fraction:
    f = _as_fraction(value, name)
    if f <= 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    return f


@dataclass(frozen=True)
class PairState:
    """Joint excitation (n1, n2); mixed-sign sectors are unrepresentable."""

    n1: int
    n2: int
    sector: str = "ket"

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("excitation numbers must be non-negative")
        if self.sector not in SECTORS:
            raise ValueError(f"sector must be one of {SECTORS}")


@dataclass(frozen=True)
class SeriesLabel:
    """Spectral series (p, q, n): p, q odd coprime, n the ladder index."""

    p: int
    q: int
    n: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be positive")
        if self.p % 2 == 0 or self.q % 2 == 0:
            raise ValueError("p and q must be odd")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError("p and q must be coprime")
        if self.n < 0:
            raise ValueError("n must be non-negative")


@dataclass(frozen=True)
class InteractionTable:
    """Base energies of two subsystems plus pairwise corrections dE[i][j]."""

    E1: tuple
    E2: tuple
    dE: tuple

    def __init__(self, E1, E2, dE):
        e1 = tuple(Fraction(v) if isinstance(v, (int, Fraction)) else float(v) for v in E1)
        e2 = tuple(Fraction(v) if isinstance(v, (int, Fraction)) else float(v) for v in E2)
        rows = tuple(tuple(Fraction(v) if isinstance(v, (int, Fraction)) else float(v)
                           for v in row) for row in dE)
        if not e1 or not e2:
            raise ValueError("E1 and E2 must be non-empty")
        if any(v <= 0 for v in e1) or any(v <= 0 for v in e2):
            raise ValueError("base energies must be positive")
        if len(rows) != len(e1) or any(len(r) != len(e2) for r in rows):
            raise ValueError("dE must be a len(E1) x len(E2) matrix")
        for row in rows:
            for v in row:
                if isinstance(v, float) and not math.isfinite(v):
                    raise ValueError("dE entries must be finite")
        object.__setattr__(self, "E1", e1)
        object.__setattr__(self, "E2", e2)
        object.__setattr__(self, "dE", rows)


def single_levels(w, n_max: int, convention: str = "half", sector: str = "ket") -> list:
    """Ladder w*(n + 1/2) (or w*n) for n = 0..n_max, negated for bras; exact."""
    freq = _positive_fraction(w, "frequency")
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if convention not in ("half", "integer"):
        raise ValueError("convention must be 'half' or 'integer'")
    if sector not in SECTORS:
        raise ValueError(f"sector must be one of {SECTORS}")
    offset = Fraction(1, 2) if convention == "half" else Fraction(0)
    sign = 1 if sector == "ket" else -1
    return [sign * freq * (n + offset) for n in range(n_max + 1)]


def classify(state: PairState) -> SeriesLabel:
    """Series label of a ket state: reduce (2n1+1)/(2n2+1) to odd coprime p/q.

    g = gcd(2n1+1, 2n2+1) is odd, so n = (g-1)/2 is the integer ladder
    index and p = (2n1+1)/g, q = (2n2+1)/g are odd and coprime.
    """
    if state.sector != "ket":
        raise ValueError("only ket states carry a series label; mirror bras by sign")
    a = 2 * state.n1 + 1
    b = 2 * state.n2 + 1
    g = math.gcd(a, b)
    return SeriesLabel(p=a // g, q=b // g, n=(g - 1) // 2)


def unclassify(label: SeriesLabel) -> PairState:
    """Inverse of classify: n1 = (p(2n+1)-1)/2, n2 = (q(2n+1)-1)/2."""
    odd = 2 * label.n + 1
    return PairState(n1=(label.p * odd - 1) // 2, n2=(label.q * odd - 1) // 2)


def series_frequency(p: int, q: int, w1, w2) -> Fraction:
    """Ladder spacing of the (p, q) series: w_pq = p w1 + q w2, exact."""
    SeriesLabel(p=p, q=q, n=0)
    return p * _positive_fraction(w1, "w1") + q * _positive_fraction(w2, "w2")


def pair_energy(state: PairState, w1, w2) -> Fraction:
    """(n1 + 1/2) w1 + (n2 + 1/2) w2, negated in the bra sector; exact."""
    f1 = _positive_fraction(w1, "w1")
    f2 = _positive_fraction(w2, "w2")
    e = (state.n1 + Fraction(1, 2)) * f1 + (state.n2 + Fraction(1, 2)) * f2
    return e if state.sector == "ket" else -e


def pair_spectrum(w1, w2, n1_max: int, n2_max: int) -> list:
    """Ket-quadrant spectrum: (state, label, energy) for the whole grid.

    Each energy is computed both per oscillator and through the series
    ladder (n + 1/2) w_pq; the two rational forms agree identically, and
    that identity is asserted. Bra energies are the negated mirror and
    mixed quadrants are never emitted.
    """
    if n1_max < 0 or n2_max < 0:
        raise ValueError("grid maxima must be non-negative")
    f1 = _positive_fraction(w1, "w1")
    f2 = _positive_fraction(w2, "w2")
    out = []
    for n1 in range(n1_max + 1):
        for n2 in range(n2_max + 1):
            state = PairState(n1=n1, n2=n2)
            label = classify(state)
            energy = (n1 + Fraction(1, 2)) * f1 + (n2 + Fraction(1, 2)) * f2
            ladder = (label.n + Fraction(1, 2)) * (label.p * f1 + label.q * f2)
            assert energy == ladder
            out.append((state, label, energy))
    return out


def equivalence_phase(p: int, q: int, q1: float, q2: float) -> float:
    """Class phase (p q1 + q q2) mod 2pi; equal phases, same class."""
    SeriesLabel(p=p, q=q, n=0)
    return (p * q1 + q * q2) % TWO_PI


def pair_wavefunction_phase(label: SeriesLabel, q1: float, q2: float, t: float,
                            w1, w2, include_vacuum_term: bool = False) -> float:
    """Phase of the joint plane-wave state on the (q1, q2) torus.

    (n + 1/2)(p q1 + q q2 - w_pq t), minus (q1 + q2)/2 when the vacuum
    term is kept (it is usually an ignorable common factor).
    """
    w_pq = float(series_frequency(label.p, label.q, w1, w2))
    phase = (label.n + 0.5) * (label.p * q1 + label.q * q2 - w_pq * t)
    if include_vacuum_term:
        phase -= 0.5 * (q1 + q2)
    return phase


def pair_wavefunction(label: SeriesLabel, q1: float, q2: float, t: float,
                      w1, w2, include_vacuum_term: bool = False) -> complex:
    """exp(i phase) for the joint state; unit modulus everywhere."""
    return cmath.exp(1j * pair_wavefunction_phase(label, q1, q2, t, w1, w2,
                                                  include_vacuum_term))


def timeshift_residual(energies, shifts):
    """sum E_a dt_a; zero exactly when the shift stays inside one class."""
    energies = list(energies)
    shifts = list(shifts)
    if len(energies) != len(shifts):
        raise ValueError("energies and shifts must have equal length")
    if any(e <= 0 for e in energies):
        raise ValueError("energies must be positive")
    return sum(e * d for e, d in zip(energies, shifts))


def total_class_residual(energies, times, t):
    """sum E_a t_a - (sum E_a) t; zero on the single class at common time t."""
    energies = list(energies)
    times = list(times)
    if len(energies) != len(times):
        raise ValueError("energies and times must have equal length")
    if any(e <= 0 for e in energies):
        raise ValueError("energies must be positive")
    return sum(e * ta for e, ta in zip(energies, times)) - sum(energies) * t


def interacting_spectrum(table: InteractionTable, n_max: int) -> list:
    """Levels (i, j, n, (n + 1/2)(E1[i] + E2[j] + dE[i][j])) for the full grid.

    Every corrected spacing must stay positive; offenders are collected
    and reported together in a PositivityViolation.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    bad = [(i, j)
           for i in range(len(table.E1))
           for j in range(len(table.E2))
           if table.E1[i] + table.E2[j] + table.dE[i][j] <= 0]
    if bad:
        raise PositivityViolation(bad)
    out = []
    for i, e1 in enumerate(table.E1):
        for j, e2 in enumerate(table.E2):
            spacing = e1 + e2 + table.dE[i][j]
            half = Fraction(1, 2) if isinstance(spacing, Fraction) else 0.5
            for n in range(n_max + 1):
                out.append((i, j, n, (n + half) * spacing))
    return out


def compose_periods(p1, p2) -> Fraction:
    """Harmonic composition P1 P2 / (P1 + P2); frequencies add exactly."""
    f1 = _positive_fraction(p1, "P1")
    f2 = _positive_fraction(p2, "P2")
    return f1 * f2 / (f1 + f2)


def vacuum_cycle_period(lam: float, volume: float, h: float = PLANCK_SI,
                        G: float = NEWTON_G_SI, c: float = LIGHT_SPEED_SI) -> float:
    """Recurrence period 8 pi h G / (lam volume c^4), in seconds for SI inputs.

    lam is an inverse area (m^-2), volume a volume (m^3). The c^4 factor
    restores dimensional consistency in SI units and reproduces the
    microsecond scale for lam ~ 1.1e-52 m^-2 and a cubic micron. A zero
    lam means no recurrence: the period is reported as infinity.
    """
    if lam < 0:
        raise ValueError("lam must be non-negative")
    if volume <= 0:
        raise ValueError("volume must be positive")
    if h <= 0 or G <= 0 or c <= 0:
        raise ValueError("physical constants must be positive")
    if lam == 0:
        return math.inf
    return 8.0 * math.pi * h * G / (lam * volume * c ** 4)
