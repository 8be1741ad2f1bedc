"""Command-line entry point: one subcommand per module surface.

Outputs are reproducible: identical argv and seeds give identical bytes.
File outputs echo the fully resolved run configuration, JSON under a
"params" key and CSV in a leading "# config: {...}" comment line that
the bundled readers skip. The worker count for the census comes from the
ONTOQ_WORKERS environment variable and can only change speed, never
results.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import automaton, census, oscillators, prequantize, spectral

SCHEMA_VERSION = 1

WAVEFUNCTION_COLUMNS = ("q", "W", "alpha", "beta", "re_psi", "im_psi")
PAIR_SPECTRUM_COLUMNS = ("n1", "n2", "p", "q", "n", "energy_num", "energy_den")


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _csv_text(config: dict, columns, rows) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _data_rows(path: str) -> list:
    """CSV rows with '#' comment lines and the header row stripped."""
    with open(path, newline="", encoding="utf-8") as f:
        rows = [r for r in csv.reader(f) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise ValueError(f"no data rows in {path}")
    return rows[1:]


def read_density_csv(path: str) -> prequantize.CircleDensity:
    """Density from a (q, W) CSV; wavefunction CSVs are accepted too."""
    rows = _data_rows(path)
    q = np.array([float(r[0]) for r in rows])
    w = np.array([float(r[1]) for r in rows])
    m = q.size
    if m < 4 or m % 2:
        raise ValueError("density must have an even number of samples, at least 4")
    expected = 2.0 * math.pi * np.arange(m) / m
    if np.max(np.abs(q - expected)) > 1e-9:
        raise ValueError("density samples must lie on the uniform grid 2 pi k / M")
    return prequantize.density_from_samples(w)


def read_wavefunction_csv(path: str):
    """(q, W, alpha, beta, psi) arrays from a wavefunction CSV."""
    rows = _data_rows(path)
    cols = np.array([[float(v) for v in r] for r in rows]).T
    q, w, alpha, beta, re_psi, im_psi = cols
    return q, w, alpha, beta, re_psi + 1j * im_psi

def read_spectrum_csv(path: str) -> list:
    """Rows of a spectrum CSV, typed as (int, int, int, float, float, int, float, str)."""
    out = []
    for r in _data_rows(path):
        out.append((int(r[0]), int(r[1]), int(r[2]), float(r[3]), float(r[4]),
                    int(r[5]), float(r[6]), r[7]))
    return out


def read_pair_spectrum_csv(path: str) -> list:
    """Rows of a pair-spectrum CSV as (n1, n2, p, q, n, Fraction energy)."""
    out = []
    for r in _data_rows(path):
        out.append((int(r[0]), int(r[1]), int(r[2]), int(r[3]), int(r[4]),
                    Fraction(int(r[5]), int(r[6]))))
    return out


def read_census_json(path: str) -> dict:
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    if "histogram" not in doc or "params" not in doc:
        raise ValueError(f"{path} is not a census record")
    return doc


def read_decomposition_json(path: str) -> dict:
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    if "cycles" not in doc or "n_states" not in doc:
        raise ValueError(f"{path} is not a decomposition record")
    return doc


def _map_from_args(args) -> automaton.MapTable:
    if args.map is not None:
        return automaton.load_map(args.map)
    if args.n_states is None or args.seed is None:
        raise ValueError("provide either --map or both --n-states and --seed")
    return automaton.random_map(args.n_states, args.seed)


def _cmd_census(args) -> int:
    workers = int(os.environ.get("ONTOQ_WORKERS", "1"))
    result = census.run_census(args.n_states, args.num_maps, mode=args.mode,
                               master_seed=args.seed,
                               samples_per_map=args.samples_per_map,
                               workers=workers)
    doc = census.census_json(result, h=args.h, dt=args.dt)
    _write_text(args.out, _json_text(doc))
    return 0


def _cmd_prequantize(args) -> int:
    density = read_density_csv(args.density)
    wf = prequantize.synthesize(density, k_zeros=args.zeros, beta0=args.beta0)
    alpha = prequantize.log_amplitude(density)
    beta = prequantize.conjugate_phase_fourier(alpha)
    q = density.grid.points()
    config = {
        "subcommand": "prequantize",
        "density": args.density,
        "zeros": args.zeros,
        "beta0": args.beta0,
        "schema_version": SCHEMA_VERSION,
    }
    rows = zip(q, density.w, alpha, beta, wf.psi.real, wf.psi.imag)
    _write_text(args.out, _csv_text(config, WAVEFUNCTION_COLUMNS,
                                    ([repr(float(v)) for v in row] for row in rows)))
    if args.report is not None:
        report = dict(spectrum_report=prequantize.spectrum_report(wf),
                      params=config, schema_version=SCHEMA_VERSION)
        _write_text(args.report, _json_text(report))
    return 0


def _cmd_pair_spectrum(args) -> int:
    w1 = Fraction(args.w1)
    w2 = Fraction(args.w2)
    entries = oscillators.pair_spectrum(w1, w2, args.n1_max, args.n2_max)
    config = {
        "subcommand": "pair-spectrum",
        "w1": str(w1),
        "w2": str(w2),
        "n1_max": args.n1_max,
        "n2_max": args.n2_max,
        "schema_version": SCHEMA_VERSION,
    }
    rows = [(s.n1, s.n2, lab.p, lab.q, lab.n, e.numerator, e.denominator)
            for s, lab, e in entries]
    _write_text(args.out, _csv_text(config, PAIR_SPECTRUM_COLUMNS, rows))
    return 0


def _cmd_classify(args) -> int:
    label = oscillators.classify(oscillators.PairState(n1=args.n1, n2=args.n2))
    print(f"p={label.p} q={label.q} n={label.n}")
    return 0


def _cmd_quotient(args) -> int:
    m = _map_from_args(args)
    doc = automaton.decomposition_json(m)
    doc["schema_version"] = SCHEMA_VERSION
    doc["params"] = {
        "subcommand": "quotient",
        "map": args.map,
        "n_states": args.n_states,
        "seed": args.seed,
    }
    _write_text(args.out, _json_text(doc))
    return 0


def _cmd_spectrum(args) -> int:
    m = _map_from_args(args)
    perm, _ = automaton.quotient(m)
    spec = spectral.evolution_eigenphases(perm)
    config = {
        "subcommand": "spectrum",
        "map": args.map,
        "n_states": args.n_states,
        "seed": args.seed,
        "h": args.h,
        "dt": args.dt,
        "schema_version": SCHEMA_VERSION,
    }
    rows = ([str(r[0]), str(r[1]), str(r[2]), repr(r[3]), repr(r[4]),
             str(r[5]), repr(r[6]), r[7]]
            for r in spectral.spectrum_rows(spec, h=args.h, dt=args.dt))
    _write_text(args.out, _csv_text(config, spectral.SPECTRUM_COLUMNS, rows))
    return 0


def _cmd_compose(args) -> int:
    combined = oscillators.compose_periods(Fraction(args.p1), Fraction(args.p2))
    print(combined)
    return 0


def _cmd_vacuum_period(args) -> int:
    period = oscillators.vacuum_cycle_period(args.lam, args.volume)
    print("inf" if math.isinf(period) else repr(period))
    return 0


def _add_map_source(sub) -> None:
    sub.add_argument("--map", help="path to a binary map file")
    sub.add_argument("--n-states", type=int, help="states of a seeded random map")
    sub.add_argument("--seed", type=int, help="seed of the random map")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontoq",
        description="Deterministic maps, limit cycles, and their quantum spectra.")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser(
        "census",
        help="cycle-period census over random maps",
        description="Monte Carlo census of limit-cycle periods over seeded "
                    "random maps; full mode counts every cycle per map, "
                    "sampled mode follows trajectories from uniform starts. "
                    "Writes a JSON record with the histogram, energy cutoffs "
                    "for E = h/(P dt), and a goodness-of-fit entry against "
                    "the exact period law.")
    p.add_argument("--n-states", type=int, required=True)
    p.add_argument("--num-maps", type=int, required=True)
    p.add_argument("--mode", choices=census.MODES, default="full")
    p.add_argument("--samples-per-map", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--h", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_census)

    p = subs.add_parser(
        "prequantize",
        help="wave function from a positive circle density",
        description="Build psi = exp(alpha + i beta) with |psi|^2 = W and no "
                    "negative Fourier modes from a strictly positive density "
                    "W(q) sampled on the uniform circle grid; --zeros k "
                    "multiplies by e^{ikq}, shifting the lowest occupied mode.")
    p.add_argument("--density", required=True, help="CSV with columns q, W")
    p.add_argument("--zeros", type=int, default=0)
    p.add_argument("--beta0", type=float, default=0.0)
    p.add_argument("--out", default="-")
    p.add_argument("--report", default=None, help="optional JSON mode-content report")
    p.set_defaults(func=_cmd_prequantize)

    p = subs.add_parser(
        "pair-spectrum",
        help="joint spectrum of two rational-frequency oscillators",
        description="Ket-grid spectrum with exact rational energies "
                    "(n1+1/2) w1 + (n2+1/2) w2 = (n+1/2)(p w1 + q w2) and the "
                    "odd-coprime series label (p, q, n) of every state.")
    p.add_argument("--w1", required=True, help="rational frequency, e.g. 2/3")
    p.add_argument("--w2", required=True, help="rational frequency, e.g. 1/7")
    p.add_argument("--n1-max", type=int, required=True)
    p.add_argument("--n2-max", type=int, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_pair_spectrum)

    p = subs.add_parser(
        "classify",
        help="odd-coprime series label of a joint state",
        description="Reduce (2 n1 + 1)/(2 n2 + 1) to odd coprime p/q and "
                    "report the series label p, q, n.")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.set_defaults(func=_cmd_classify)

    p = subs.add_parser(
        "quotient",
        help="cycle decomposition of a map",
        description="Decompose a map into limit cycles with basin sizes; "
                    "the recurrent restriction is the permutation the "
                    "spectrum subcommand diagonalizes. Writes JSON.")
    _add_map_source(p)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_quotient)

    p = subs.add_parser(
        "spectrum",
        help="eigenphases and energy levels of a map's cycles",
        description="Eigenphases {2 pi k/P} of every limit cycle and the "
                    "ladder H = +-(n+1/2) E with E = h/(P dt), as CSV.")
    _add_map_source(p)
    p.add_argument("--h", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_spectrum)

    p = subs.add_parser(
        "compose",
        help="harmonic composition of two periods",
        description="P12 = P1 P2 / (P1 + P2), the exact statement that "
                    "frequencies of weakly coupled systems add.")
    p.add_argument("--p1", required=True, help="rational period")
    p.add_argument("--p2", required=True, help="rational period")
    p.set_defaults(func=_cmd_compose)

    p = subs.add_parser(
        "vacuum-period",
        help="recurrence period from SI curvature and volume",
        description="P = 8 pi h G / (lam V c^4) seconds; lam in 1/m^2, "
                    "V in m^3. A zero lam prints inf.")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--volume", type=float, required=True)
    p.set_defaults(func=_cmd_vacuum_period)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
