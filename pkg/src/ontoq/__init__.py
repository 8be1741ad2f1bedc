"""Deterministic pre-quantization toolkit.

Finite deterministic maps evolve into limit cycles; quotienting onto the
recurrent states gives a permutation whose spectrum is quantum-like, with
cycle energy E = h/(P dt). The package also constructs positive-mode
wave functions from positive circle densities, composes rational
oscillator spectra through odd-coprime series labels, and measures
random-map cycle statistics against exact combinatorial laws.
"""

from .automaton import (
    CycleDecomposition,
    CycleInfo,
    CycleOrbit,
    MapTable,
    TotalisticRule,
    ca_map,
    decompose,
    decomposition_json,
    evolve,
    explicit_map,
    find_cycle,
    load_map,
    quotient,
    random_map,
    save_map,
    step,
)
from .census import (
    CycleCensus,
    PeriodModel,
    approx_expected_cycles,
    census_json,
    energy_histogram,
    exact_expected_cycles,
    exact_expected_cycles_fraction,
    exact_survival,
    gof_compare,
    period_density,
    recurrent_mean,
    run_census,
    sampled_period_pmf,
    survival_Q,
    survival_fractions,
)
from .oscillators import (
    InteractionTable,
    PairState,
    PositivityViolation,
    SeriesLabel,
    classify,
    compose_periods,
    equivalence_phase,
    interacting_spectrum,
    pair_spectrum,
    pair_wavefunction,
    series_frequency,
    single_levels,
    timeshift_residual,
    total_class_residual,
    unclassify,
    vacuum_cycle_period,
)
from .prequantize import (
    CircleDensity,
    CircleGrid,
    CircleWaveFunction,
    conjugate_phase_fourier,
    conjugate_phase_pv,
    log_amplitude,
    spectrum_report,
    synthesize,
)
from .spectral import (
    BeableOperator,
    EigenphaseSpectrum,
    EnergyLevel,
    beable_commutator_norm,
    cycle_energy,
    evolution_eigenphases,
    hamiltonian_levels,
)

__version__ = "0.1.0"
