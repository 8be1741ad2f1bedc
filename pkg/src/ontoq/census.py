"""Monte Carlo census of limit-cycle periods over seeded random maps.

Two sampling modes with different laws, both provided in exact finite-N
form and in the Gaussian approximation:

* full decomposition counts every cycle of every map once; the expected
  number of P-cycles is (1/P) prod_{i<P}(1 - i/N), approximately
  (1/P) exp(-P^2/2N), so cycle energies E = h/(P dt) fill log-E bins
  uniformly between cutoffs near h/(sqrt(2N) dt) and h/dt.
* sampled starts follow the trajectory from k uniform starts per map; a
  cycle is then hit in proportion to its basin, and the period law is
  the survival-sum law derived below from the same collision argument.
  Starts within one map share that map's cycles, so their periods are
  clustered: Pearson statistics over raw sampled counts are only valid
  at one start per map, while per-map averages stay valid for any k.

Census generation is deterministic in the master seed and independent of
the worker count: map index i uses substream 2i for its table and 2i+1
for its start states, and results merge in index order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.stats import chi2 as _chi2_dist

from . import automaton, rng
from .spectral import cycle_energy

MODES = ("full", "sampled")

MIN_EXPECTED_PER_BIN = 5.0


@dataclass(frozen=True, eq=False)
class CycleCensus:
    """Aggregated period counts plus the per-map data they came from.

    In full mode per_map holds one {period: cycle count} dict per map and
    histogram sums them. In sampled mode per_map holds one tuple of
    (tail_length, period) pairs per map and histogram counts periods, so
    each trajectory contributes once (basin-weighted, see module note).
    """

    n_states: int
    num_maps: int
    mode: str
    master_seed: int
    histogram: dict
    per_map: tuple
    samples_per_map: int | None = None


@dataclass(frozen=True)
class PeriodModel:
    """Reference law for gof_compare: exact product or Gaussian approximation."""

    n_states: int
    kind: str = "exact"

    def __post_init__(self):
        if self.n_states < 2:
            raise ValueError("n_states must be at least 2")
        if self.kind not in ("exact", "gaussian-approx"):
            raise ValueError("kind must be 'exact' or 'gaussian-approx'")


def exact_expected_cycles(period: int, n_states: int) -> float:
    """Expected number of P-cycles of a uniform random map, exactly.

    A P-cycle through a given start survives P collision-free steps and
    then closes: probability prod_{i=0}^{P-1}(1 - i/N) * (1/N), and there
    are N starts with each cycle counted P times, giving
    (1/P) prod_{i=0}^{P-1}(1 - i/N). Zero for P > N by convention.
    """
    if period < 1:
        raise ValueError("period must be positive")
    if n_states < 1:
        raise ValueError("n_states must be positive")
    if period > n_states:
        return 0.0
    prod = 1.0
    for i in range(period):
        prod *= 1.0 - i / n_states
    return prod / period


def exact_expected_cycles_fraction(period: int, n_states: int) -> Fraction:
    """exact_expected_cycles as an exact rational."""
    if period < 1:
        raise ValueError("period must be positive")
    if n_states < 1:
        raise ValueError("n_states must be positive")
    if period > n_states:
        return Fraction(0)
    prod = Fraction(1)
    for i in range(period):
        prod *= Fraction(n_states - i, n_states)
    return prod / period


def approx_expected_cycles(period: int, n_states: int) -> float:
    """Gaussian-cutoff approximation (1/P) exp(-P^2 / 2N)."""
    if period < 1 or n_states < 1:
        raise ValueError("period and n_states must be positive")
    return math.exp(-period * period / (2.0 * n_states)) / period


def period_density(period: int, n_states: int) -> float:
    """Density of cycle periods, (1/P) exp(-P^2/2N).

    Identical to approx_expected_cycles: the expected count per unit
    period is the density of the period distribution per map.
    """
    return approx_expected_cycles(period, n_states)


def survival_Q(x: float, n_states: int) -> float:
    """Gaussian survival law Q(x) = exp(-x^2 / 2N), Q(0) = 1.

    Approximate probability that a trajectory from a uniform start has
    not yet collided with itself after x steps.
    """
    if x < 0:
        raise ValueError("x must be non-negative")
    if n_states < 1:
        raise ValueError("n_states must be positive")
    return math.exp(-x * x / (2.0 * n_states))


def exact_survival(x: int, n_states: int) -> float:
    """Exact survival: prod_{i=1}^{x} (1 - i/N), zero once x >= N."""
    if x < 0:
        raise ValueError("x must be non-negative")
    if n_states < 1:
        raise ValueError("n_states must be positive")
    if x >= n_states:
        return 0.0
    prod = 1.0
    for i in range(1, x + 1):
        prod *= 1.0 - i / n_states
    return prod


@lru_cache(maxsize=8)
def _exact_rate_table(n_states: int) -> np.ndarray:
    """rate[p] = exact_expected_cycles(p, N) for p = 0..N (index 0 unused)."""
    factors = 1.0 - np.arange(n_states, dtype=float) / n_states
    prods = np.cumprod(factors)
    return np.concatenate(([0.0], prods / np.arange(1, n_states + 1, dtype=float)))


@lru_cache(maxsize=8)
def _survival_table(n_states: int) -> np.ndarray:
    """pi[m] = exact_survival(m, N) for m = 0..N-1."""
    factors = 1.0 - np.arange(1, n_states, dtype=float) / n_states
    return np.concatenate(([1.0], np.cumprod(factors)))


@lru_cache(maxsize=8)
def _sampled_pmf_table(n_states: int) -> np.ndarray:
    """pmf[p] for p = 0..N (index 0 unused): exact sampled-period law.

    From a uniform start the walk visits T distinct states and then hits
    a uniformly random one of them, so the trajectory period is p with
    probability (1/N) sum_{m >= p-1} pi[m]; pi is the exact survival.
    The table sums to 1 over p = 1..N.
    """
    pi = _survival_table(n_states)
    tail = np.cumsum(pi[::-1])[::-1]
    return np.concatenate(([0.0], tail / n_states))


@lru_cache(maxsize=8)
def _approx_sampled_pmf_table(n_states: int) -> np.ndarray:
    """Sampled-period law with the Gaussian survival in place of the exact one."""
    m = np.arange(n_states, dtype=float)
    g = np.exp(-m * m / (2.0 * n_states))
    tail = np.cumsum(g[::-1])[::-1]
    return np.concatenate(([0.0], tail / n_states))


def sampled_period_pmf(period: int, n_states: int) -> float:
    """Exact probability that one sampled trajectory has the given period."""
    if period < 1:
        raise ValueError("period must be positive")
    if n_states < 1:
        raise ValueError("n_states must be positive")
    if period > n_states:
        return 0.0
    return float(_sampled_pmf_table(n_states)[period])


def _full_map_histogram(table: np.ndarray) -> dict:
    """{period: cycle count} of one map, without a full decomposition.

    Pointer doubling squares the map until every state has moved at least
    N steps, which lands all of them on recurrent states; the unique
    values are exactly the cycle members, and a short walk splits them
    into cycles. Agrees with automaton.decompose (cross-checked in tests)
    but touches only O(sqrt N) states in the slow scalar phase.
    """
    n = table.size
    g = table
    steps = 1
    while steps < n:
        g = g[g]
        steps *= 2
    recurrent = np.unique(g)
    counts: dict = {}
    seen = set()
    for s in recurrent.tolist():
        if s in seen:
            continue
        p = 0
        u = s
        while True:
            seen.add(u)
            p += 1
            u = int(table[u])
            if u == s:
                break
        counts[p] = counts.get(p, 0) + 1
    return counts


def _census_chunk(n_states: int, mode: str, master_seed: int,
                  samples_per_map: int, indices: list) -> list:
    out = []
    for i in indices:
        m = automaton.random_map(n_states, rng.substream_seed(master_seed, 2 * i))
        if mode == "full":
            out.append((i, _full_map_histogram(m.next)))
        else:
            starts = rng.uniform_below(rng.substream_seed(master_seed, 2 * i + 1),
                                       n_states, samples_per_map)
            pairs = []
            for s in starts.tolist():
                info = automaton.find_cycle(m, s)
                pairs.append((info.tail_length, info.period))
            out.append((i, tuple(pairs)))
    return out


def _census_worker(args):
    return _census_chunk(*args)


def run_census(n_states: int, num_maps: int, mode: str = "full",
               master_seed: int = 0, samples_per_map: int = 64,
               workers: int | None = None) -> CycleCensus:
    """Census over `num_maps` seeded random maps on N states.

    Deterministic in master_seed; the worker count changes speed only,
    never results, because every map's streams depend only on
    (master_seed, map index) and merging follows map index.
    """
    if n_states < 2:
        raise ValueError("n_states must be at least 2")
    if num_maps < 1:
        raise ValueError("num_maps must be positive")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == "sampled" and samples_per_map < 1:
        raise ValueError("samples_per_map must be positive")
    if workers is not None and workers > 1 and num_maps > 1:
        chunk = max(1, -(-num_maps // (workers * 4)))
        chunks = [list(range(a, min(a + chunk, num_maps)))
                  for a in range(0, num_maps, chunk)]
        args = [(n_states, mode, master_seed, samples_per_map, c) for c in chunks]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_census_worker, args))
        collected = [item for part in parts for item in part]
    else:
        collected = _census_chunk(n_states, mode, master_seed, samples_per_map,
                                  list(range(num_maps)))
    collected.sort(key=lambda kv: kv[0])
    per_map = tuple(data for _, data in collected)
    histogram: dict = {}
    if mode == "full":
        for d in per_map:
            for p, c in d.items():
                histogram[p] = histogram.get(p, 0) + c
    else:
        for pairs in per_map:
            for _, p in pairs:
                histogram[p] = histogram.get(p, 0) + 1
    return CycleCensus(n_states=n_states, num_maps=num_maps, mode=mode,
                       master_seed=master_seed, histogram=histogram,
                       per_map=per_map,
                       samples_per_map=samples_per_map if mode == "sampled" else None)


def _octave_edges(p_max: int) -> list:
    edges = [1]
    while edges[-1] <= p_max:
        edges.append(edges[-1] * 2)
    return edges


def _law_bin_masses(census: CycleCensus, edges: list) -> np.ndarray:
    """Expected relative mass per period bin under the census's own law."""
    n = census.n_states
    table = _exact_rate_table(n) if census.mode == "full" else _sampled_pmf_table(n)
    masses = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        hi_c = min(hi, n + 1)
        masses.append(float(table[lo:hi_c].sum()) if lo <= n else 0.0)
    return np.asarray(masses)


def energy_histogram(census: CycleCensus, h: float = 1.0, dt: float = 1.0,
                     bins: list | None = None) -> dict:
    """Log-spaced energy histogram of the census, with cutoff diagnostics.

    Each period P maps to E = h/(P dt); octave bins in P are octave bins
    in E. For a full census the per-cycle law (1/P with Gaussian cutoff)
    puts equal mass ~ln 2 into every octave well below sqrt(N), which is
    the flat log-E spectrum; the flatness entry reports a chi-square of
    the windowed counts against the law's exact per-bin masses (discrete
    periods make small-P octaves slightly heavier than ln 2, so the exact
    masses are the sharp null). Sampled counts are basin-weighted and are
    compared against the sampled-period law instead.

    Cutoff flags: emin_within_order checks min E against h/(sqrt(2N) dt)
    within one order of magnitude; emax_ok checks max E <= h/dt. Both are
    reported, not raised, so degenerate censuses (one cycle length) can
    still be inspected. The flatness entry is None when no valid window
    exists, and for sampled censuses with more than one start per map,
    whose within-map clustering breaks the chi-square assumptions.
    """
    if not census.histogram:
        raise ValueError("census is empty")
    if h <= 0 or dt <= 0:
        raise ValueError("h and dt must be positive")
    periods = sorted(census.histogram)
    p_min, p_max = periods[0], periods[-1]
    edges = bins if bins is not None else _octave_edges(p_max)
    if len(edges) < 2 or any(b >= c for b, c in zip(edges[:-1], edges[1:])):
        raise ValueError("bins must be at least two increasing period edges")
    counts = np.zeros(len(edges) - 1, dtype=np.int64)
    for p, c in census.histogram.items():
        for k in range(len(edges) - 1):
            if edges[k] <= p < edges[k + 1]:
                counts[k] += c
                break
    e_min = cycle_energy(p_max, h, dt)
    e_max = cycle_energy(p_min, h, dt)
    e_min_ref = h / (math.sqrt(2.0 * census.n_states) * dt)
    ratio = e_min / e_min_ref
    result = {
        "mode": census.mode,
        "period_bin_edges": list(edges),
        "counts": counts.tolist(),
        "energy_bin_edges": [h / (edge * dt) for edge in edges],
        "E_min": e_min,
        "E_max": e_max,
        "E_min_reference": e_min_ref,
        "emin_within_order": bool(0.1 <= ratio <= 10.0),
        "emax_ok": bool(e_max <= h / dt * (1.0 + 1e-12)),
        "flatness": None,
    }
    # flatness window: full octaves up to ~sqrt(N)/4, where the cutoff
    # factor is still within a few percent of 1
    p_hi = max(8, math.isqrt(census.n_states) // 4)
    window_edges = [e for e in _octave_edges(p_hi)[:-1] if e <= p_hi]
    independent = census.mode == "full" or census.samples_per_map == 1
    if bins is None and independent and len(window_edges) >= 3:
        obs = np.zeros(len(window_edges) - 1)
        for p, c in census.histogram.items():
            for k in range(len(window_edges) - 1):
                if window_edges[k] <= p < window_edges[k + 1]:
                    obs[k] += c
                    break
        masses = _law_bin_masses(census, window_edges)
        total = obs.sum()
        if total > 0 and masses.min() > 0:
            expected = masses / masses.sum() * total
            merged = _merge_low_bins(obs, expected)
            if merged is not None and len(merged[0]) >= 3:
                obs_m, exp_m = merged
                stat = float(((obs_m - exp_m) ** 2 / exp_m).sum())
                dof = len(obs_m) - 1
                result["flatness"] = {
                    "chi2": stat,
                    "dof": dof,
                    "p": float(_chi2_dist.sf(stat, dof)),
                    "window_max_period": window_edges[-1],
                }
    return result


def _merge_low_bins(obs, expected):
    """Pool adjacent bins left to right until each pooled bin expects at
    least MIN_EXPECTED_PER_BIN counts; a light trailing remainder joins the
    last pooled bin. Returns (obs, expected) arrays, or None if everything
    pools into fewer than two bins."""
    obs_m, exp_m = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(obs, expected):
        acc_o += o
        acc_e += e
        if acc_e >= MIN_EXPECTED_PER_BIN:
            obs_m.append(acc_o)
            exp_m.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if not obs_m:
            return None
        obs_m[-1] += acc_o
        exp_m[-1] += acc_e
    if len(obs_m) < 2:
        return None
    return np.asarray(obs_m), np.asarray(exp_m)


def _gof_bin_edges(limit: int) -> list:
    """Unit bins through 64, octaves above, covering periods up to `limit`."""
    edges = list(range(1, min(64, limit) + 2))
    while edges[-1] <= limit:
        edges.append((edges[-1] - 1) * 2 + 1)
    return edges


def gof_compare(census: CycleCensus, model: PeriodModel):
    """Pearson chi-square of the census against a period-law model.

    Returns (statistic, degrees of freedom, p-value). Bins are unit wide
    through P = 64 and octave wide above, merged left to right until each
    expected count reaches 5. Full-mode counts are independent Poisson
    bins (dof = number of bins); sampled-mode counts are multinomial over
    a fixed number of trajectories (dof = bins - 1), which requires
    independent trajectories and hence one start per map.
    """
    if not census.histogram:
        raise ValueError("census is empty")
    if census.mode == "sampled" and (census.samples_per_map or 0) > 1:
        raise ValueError("sampled-census gof needs samples_per_map == 1: "
                         "starts sharing a map have clustered periods")
    n_model = model.n_states
    p_max_obs = max(census.histogram)
    limit = max(n_model, p_max_obs)
    edges = _gof_bin_edges(limit)
    if census.mode == "full":
        scale = census.num_maps
        if model.kind == "exact":
            table = _exact_rate_table(n_model)
        else:
            p = np.arange(n_model + 1, dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                table = np.exp(-p * p / (2.0 * n_model)) / p
            table[0] = 0.0
    else:
        scale = census.num_maps * (census.samples_per_map or 0)
        table = (_sampled_pmf_table(n_model) if model.kind == "exact"
                 else _approx_sampled_pmf_table(n_model))
    expected_raw = []
    observed_raw = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        hi_c = min(hi, n_model + 1)
        mass = float(table[lo:hi_c].sum()) if lo <= n_model else 0.0
        expected_raw.append(mass * scale)
        observed_raw.append(sum(c for p, c in census.histogram.items()
                                if lo <= p < hi))
    merged = _merge_low_bins(np.asarray(observed_raw, dtype=float),
                             np.asarray(expected_raw, dtype=float))
    if merged is None:
        raise ValueError("fewer than 2 usable bins after merging")
    obs_arr, exp_arr = merged
    stat = float(((obs_arr - exp_arr) ** 2 / exp_arr).sum())
    dof = len(obs_arr) if census.mode == "full" else len(obs_arr) - 1
    return stat, dof, float(_chi2_dist.sf(stat, dof))


def survival_fractions(census: CycleCensus, x: int) -> np.ndarray:
    """Per-map fraction of sampled trajectories with tail + period > x.

    The per-map fractions are independent across maps, so their mean and
    standard error give a clustering-safe empirical check of the survival
    law for any number of starts per map.
    """
    if census.mode != "sampled":
        raise ValueError("survival fractions need a sampled census")
    if x < 0:
        raise ValueError("x must be non-negative")
    return np.array([
        sum(1 for tail, period in pairs if tail + period > x) / len(pairs)
        for pairs in census.per_map
    ])


def recurrent_mean(census: CycleCensus) -> float | None:
    """Mean number of recurrent states per map; None for sampled censuses."""
    if census.mode != "full":
        return None
    totals = [sum(p * c for p, c in d.items()) for d in census.per_map]
    return float(np.mean(totals))


def census_json(census: CycleCensus, h: float = 1.0, dt: float = 1.0) -> dict:
    """JSON-ready census record with derived statistics and a gof entry."""
    hist = [{"P": int(p), "count": int(c)} for p, c in sorted(census.histogram.items())]
    eh = energy_histogram(census, h, dt)
    try:
        stat, dof, p = gof_compare(census, PeriodModel(census.n_states, "exact"))
        gof = {"chi2": stat, "dof": dof, "p": p}
    except ValueError:
        gof = None
    return {
        "schema_version": 1,
        "params": {
            "n_states": census.n_states,
            "num_maps": census.num_maps,
            "mode": census.mode,
            "samples_per_map": census.samples_per_map,
            "master_seed": census.master_seed,
            "h": h,
            "dt": dt,
        },
        "histogram": hist,
        "derived": {
            "recurrent_mean": recurrent_mean(census),
            "E_min": eh["E_min"],
            "E_max": eh["E_max"],
        },
        "gof": gof,
    }
