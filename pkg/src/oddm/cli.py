"""Command-line front end: pulse export, orthogonality reports, the
approximation-error sweep, and a loopback harness.

Every randomized command takes a ``--seed`` and is deterministic under it;
sweep points run in parallel with per-point seeds derived as seed XOR point
index, and rows are always written in (Q, rho, trial) order.  The
``ODDM_THREADS`` environment variable caps worker threads.

Exit codes: 0 success, 2 validation failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import ChannelSpec, NoiseSpec, add_noise, apply_channel, noise_density
from .fileio import write_frame_json, write_iq
from .grid import OddmParams, ParameterError, SymbolFrame, nmse_db
from .modem import demodulate, modulate_exact, modulate_filtered, random_qpsk_frame
from .pulse import (
    build_ddop_fourier,
    build_ddop_timedomain,
    canonical_kind,
    ddop_spectrum_analytic,
    make_elementary_pulse,
    orthogonality_scan,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3

SWEEP_HEADER = "q,rho,trial,nmse_db"
ORTHO_HEADER = "m,n,abs_ambiguity"
SPECTRUM_HEADER = "freq_hz,abs_u"

DEFAULT_Q_LIST = (16, 32, 64)
DEFAULT_RHO_LIST = (0.1, 0.3, 0.5, 0.7, 0.9)


def _worker_count() -> int:
    env = os.environ.get("ODDM_THREADS")
    if env is not None:
        try:
            value = int(env)
        except ValueError as exc:
            raise ParameterError(f"ODDM_THREADS must be an integer, got {env!r}") from exc
        if value < 1:
            raise ParameterError("ODDM_THREADS must be >= 1")
        return value
    return min(4, os.cpu_count() or 1)


@dataclass(frozen=True)
class SweepSpec:
    """Parameter matrix for the exact-vs-filtered comparison sweep."""

    M: int
    N: int
    T0: float
    kappa: int
    q_list: tuple[int, ...]
    rho_list: tuple[float, ...]
    trials: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.q_list or not self.rho_list:
            raise ParameterError("q_list and rho_list must be non-empty")
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if self.seed < 0:
            raise ParameterError("seed must be non-negative")
        for q in self.q_list:
            for rho in self.rho_list:
                # raises ParameterError if any combination is invalid
                OddmParams(M=self.M, N=self.N, T0=self.T0, Q=q, rho=rho, kappa=self.kappa)

    def points(self) -> list[tuple[int, int, float, int]]:
        """Enumerated (index, q, rho, trial) tuples in output order."""
        out = []
        idx = 0
        for q in self.q_list:
            for rho in self.rho_list:
                for trial in range(self.trials):
                    out.append((idx, q, rho, trial))
                    idx += 1
        return out


@dataclass(frozen=True)
class ReportRow:
    q: int
    rho: float
    trial: int
    nmse_db: float
    wall_ms: float


@dataclass(frozen=True)
class SweepSummary:
    q: int
    rho: float
    mean_nmse_db: float


def _sweep_point(spec: SweepSpec, idx: int, q: int, rho: float, trial: int) -> ReportRow:
    begin = time.perf_counter()
    params = OddmParams(M=spec.M, N=spec.N, T0=spec.T0, Q=q, rho=rho, kappa=spec.kappa)
    frame = random_qpsk_frame(params, seed=spec.seed ^ idx)
    pulse = make_elementary_pulse(params)
    train = build_ddop_timedomain(pulse, params, normalized=True)
    exact = modulate_exact(frame, train)
    filtered = modulate_filtered(frame, pulse, params)
    value = nmse_db(exact.waveform, filtered.waveform)
    wall_ms = (time.perf_counter() - begin) * 1e3
    return ReportRow(q=q, rho=rho, trial=trial, nmse_db=value, wall_ms=wall_ms)


def run_nmse_sweep(
    spec: SweepSpec, threads: int | None = None
) -> tuple[list[ReportRow], list[SweepSummary]]:
    """Run every sweep point and reduce per-(Q, rho) means.

    Points are independent and run on a thread pool; results are gathered in
    deterministic (Q, rho, trial) order regardless of completion order.  The
    mean is taken over the linear error ratios, then converted to dB.
    """
    points = spec.points()
    workers = threads if threads is not None else _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_sweep_point, spec, idx, q, rho, trial)
                for idx, q, rho, trial in points
            ]
            rows = [f.result() for f in futures]
    else:
        rows = [_sweep_point(spec, idx, q, rho, trial) for idx, q, rho, trial in points]
    summaries = []
    for q in spec.q_list:
        for rho in spec.rho_list:
            ratios = [
                10.0 ** (r.nmse_db / 10.0) for r in rows if r.q == q and r.rho == rho
            ]
            summaries.append(
                SweepSummary(q=q, rho=rho, mean_nmse_db=10.0 * math.log10(sum(ratios) / len(ratios)))
            )
    return rows, summaries


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def write_sweep_csv(
    path: str, rows: list[ReportRow], summaries: list[SweepSummary], timing: bool = False
) -> None:
    header = SWEEP_HEADER + (",wall_ms" if timing else "")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        by_key: dict[tuple[int, float], list[ReportRow]] = {}
        for row in rows:
            by_key.setdefault((row.q, row.rho), []).append(row)
        for summary in summaries:
            for row in by_key.get((summary.q, summary.rho), []):
                line = f"{row.q},{row.rho:g},{row.trial},{_fmt(row.nmse_db)}"
                if timing:
                    line += f",{row.wall_ms:.3f}"
                fh.write(line + "\n")
            line = f"{summary.q},{summary.rho:g},mean,{_fmt(summary.mean_nmse_db)}"
            if timing:
                line += ","
            fh.write(line + "\n")


def _params_from_args(args: argparse.Namespace) -> OddmParams:
    return OddmParams(
        M=args.M,
        N=args.N,
        T0=args.T0,
        Q=args.Q,
        rho=args.rho,
        kappa=args.kappa,
        force=getattr(args, "force", False),
    )


def cmd_ddop(args: argparse.Namespace) -> int:
    """Write the sampled pulse train (and optionally its alternative
    construction and analytic spectrum magnitude)."""
    params = _params_from_args(args)
    kind = canonical_kind(args.kind)
    pulse = make_elementary_pulse(params, kind)
    train = build_ddop_timedomain(pulse, params, normalized=args.normalized)
    write_iq(args.out, train.as_waveform())
    print(f"wrote {args.out}: {len(train.samples)} samples at {train.rate:g} Hz")
    if args.fourier_out:
        alt = build_ddop_fourier(params, kind, normalized=args.normalized)
        write_iq(args.fourier_out, alt.as_waveform())
        print(f"wrote {args.fourier_out}: {len(alt.samples)} samples at {alt.rate:g} Hz")
    if args.spectrum:
        spectrum = ddop_spectrum_analytic(params, kind)
        with open(args.spectrum, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(SPECTRUM_HEADER + "\n")
            for f, v in zip(spectrum.freqs, np.abs(spectrum.values)):
                fh.write(f"{f:.12g},{v:.12g}\n")
        print(f"wrote {args.spectrum}: {len(spectrum.freqs)} rows")
    return EXIT_OK


def cmd_orthogonality(args: argparse.Namespace) -> int:
    """Scan the ambiguity function over the index grid and report the
    worst off-origin magnitude."""
    params = _params_from_args(args)
    pulse = make_elementary_pulse(params, canonical_kind(args.kind))
    train = build_ddop_timedomain(pulse, params, normalized=True)
    report = orthogonality_scan(train)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(ORTHO_HEADER + "\n")
        for i, m in enumerate(report.delay_steps):
            for j, n in enumerate(report.doppler_steps):
                fh.write(f"{m},{n},{report.magnitudes[i, j]:.12e}\n")
    loc = report.max_location
    print(
        f"origin |A(0,0)| = {abs(report.origin_value):.12f}; "
        f"max off-origin |A| = {report.max_off_origin:.6e} "
        f"({report.max_off_origin_db:.2f} dB) at (m={loc[0]}, n={loc[1]})"
    )
    return EXIT_OK


def cmd_nmse_sweep(args: argparse.Namespace) -> int:
    """Compare the filtered against the exact modulator over a (Q, rho)
    matrix of seeded random frames."""
    spec = SweepSpec(
        M=args.M,
        N=args.N,
        T0=args.T0,
        kappa=args.kappa,
        q_list=tuple(args.q_list),
        rho_list=tuple(args.rho_list),
        trials=args.trials,
        seed=args.seed,
    )
    rows, summaries = run_nmse_sweep(spec)
    write_sweep_csv(args.out, rows, summaries, timing=args.timing)
    for summary in summaries:
        print(f"Q={summary.q} rho={summary.rho:g}: mean NMSE {summary.mean_nmse_db:.2f} dB")
    print(f"wrote {args.out}: {len(rows)} trial rows, {len(summaries)} summary rows")
    return EXIT_OK


def cmd_loopback(args: argparse.Namespace) -> int:
    """Modulate, pass through the optional channel and noise, demodulate,
    and report symbol-error statistics."""
    params = _params_from_args(args)
    kind = canonical_kind(args.kind)
    if args.zero_frame:
        frame = SymbolFrame.zeros(params.M, params.N)
    else:
        frame = random_qpsk_frame(params, seed=args.seed)
    degenerate = not np.any(frame.data)
    pulse = make_elementary_pulse(params, kind)
    train = build_ddop_timedomain(pulse, params, normalized=True)
    tx = modulate_exact(frame, train)

    channel_spec = None
    if args.channel:
        with open(args.channel, "r", encoding="utf-8") as fh:
            channel_spec = ChannelSpec.loads(fh.read())
        rx = apply_channel(tx.waveform, channel_spec)
    else:
        rx = tx.waveform

    noise_spec = None
    if args.n0 is not None and args.ebn0_db is not None:
        raise ParameterError("set at most one of --n0 and --ebn0-db")
    if args.n0 is not None:
        noise_spec = NoiseSpec(n0=args.n0)
    elif args.ebn0_db is not None:
        noise_spec = NoiseSpec(ebn0_db=args.ebn0_db)

    frame_bits = 2 * params.M * params.N  # QPSK carries 2 bits per symbol
    report: dict = {
        "params": {
            "M": params.M,
            "N": params.N,
            "T0": params.T0,
            "Q": params.Q,
            "rho": params.rho,
            "kappa": params.kappa,
        },
        "kind": kind,
        "seed": args.seed,
        "zero_frame": bool(args.zero_frame),
        "degenerate_input": bool(degenerate),
        "channel": channel_spec.to_json_dict() if channel_spec else None,
        "noise": None,
        "noise_variance": None,
    }

    noisy = rx
    if noise_spec is not None:
        n0 = noise_density(noise_spec, tx.waveform, frame_bits)
        noise_seed = channel_spec.seed if channel_spec is not None else args.seed
        noisy = add_noise(rx, noise_spec, frame_bits=frame_bits, seed=noise_seed)
        measured = float(np.mean(np.abs(noisy.samples - rx.samples) ** 2))
        report["noise"] = {
            "n0": n0,
            "ebn0_db": args.ebn0_db,
            "frame_bits": frame_bits,
            "seed": noise_seed,
        }
        report["noise_variance"] = {
            "measured": measured,
            "expected": n0 * rx.rate,
            "samples": len(noisy.samples),
        }

    decoded = demodulate(noisy, train)
    err = np.abs(decoded.data - frame.data)
    if channel_spec is None and noise_spec is None:
        report["max_symbol_error"] = float(err.max())
        report["interior"] = None
    else:
        max_delay = max((p.delay_s for p in channel_spec.paths), default=0.0) if channel_spec else 0.0
        margin = math.ceil(max_delay / params.delta_t)
        interior = err[margin : params.M - margin, :] if params.M > 2 * margin else err[:0, :]
        report["max_symbol_error"] = float(err.max())
        report["interior"] = {
            "margin_delay_bins": margin,
            "max_symbol_error": float(interior.max()) if interior.size else None,
            "rms_symbol_error": float(np.sqrt(np.mean(interior**2))) if interior.size else None,
        }

    if args.frame_out:
        write_frame_json(args.frame_out, decoded)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out}: max symbol error {report['max_symbol_error']:.6e}")
    return EXIT_OK


def _add_geometry(parser: argparse.ArgumentParser, with_pulse: bool = True) -> None:
    parser.add_argument("--M", type=int, required=True, help="delay bins per T0")
    parser.add_argument("--N", type=int, required=True, help="Doppler bins (even)")
    parser.add_argument("--T0", type=float, default=1.0, help="pulse spacing in seconds")
    parser.add_argument("--kappa", type=int, default=8, help="oversampling multiplier")
    if with_pulse:
        parser.add_argument("--Q", type=int, required=True, help="pulse half length in T0/M units")
        parser.add_argument("--rho", type=float, default=0.3, help="roll-off factor in [0,1]")
        parser.add_argument(
            "--kind",
            default="rrc",
            choices=["rrc", "rc", "sinc", "root-raised-cosine", "raised-cosine"],
            help="elementary pulse family",
        )
        parser.add_argument(
            "--force",
            action="store_true",
            help="skip the 2Q <= M/4 and even-N validation guards",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oddm",
        description="Delay-Doppler orthogonal pulse and waveform toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ddop", help="write the sampled pulse train and spectrum")
    _add_geometry(p)
    p.add_argument("--out", required=True, help="output IQ file (time-domain build)")
    p.add_argument("--fourier-out", default=None, help="also write the Fourier-series build")
    p.add_argument("--spectrum", default=None, help="write |U(f)| CSV")
    p.add_argument("--normalized", action="store_true", help="write the unit-energy form")
    p.set_defaults(func=cmd_ddop)

    p = sub.add_parser("orthogonality", help="ambiguity scan over the index grid")
    _add_geometry(p)
    p.add_argument("--out", required=True, help="output CSV (m,n,abs_ambiguity)")
    p.set_defaults(func=cmd_orthogonality)

    p = sub.add_parser("nmse-sweep", help="filtered vs exact modulator error sweep")
    _add_geometry(p, with_pulse=False)
    p.add_argument(
        "--q-list",
        type=lambda s: [int(v) for v in s.split(",")],
        default=list(DEFAULT_Q_LIST),
        help="comma-separated pulse half lengths (default 16,32,64)",
    )
    p.add_argument(
        "--rho-list",
        type=lambda s: [float(v) for v in s.split(",")],
        default=list(DEFAULT_RHO_LIST),
        help="comma-separated roll-offs (default 0.1,0.3,0.5,0.7,0.9)",
    )
    p.add_argument("--trials", type=int, default=4, help="random frames per point")
    p.add_argument("--seed", type=int, default=0, help="base seed for frame draws")
    p.add_argument("--timing", action="store_true", help="include wall_ms in the CSV")
    p.add_argument("--out", required=True, help="output CSV")
    p.set_defaults(func=cmd_nmse_sweep)

    p = sub.add_parser("loopback", help="modulate, channel, noise, demodulate")
    _add_geometry(p)
    p.add_argument("--seed", type=int, default=0, help="frame seed (and noise seed without a channel file)")
    p.add_argument("--channel", default=None, help="channel spec JSON file")
    p.add_argument("--n0", type=float, default=None, help="one-sided noise density")
    p.add_argument("--ebn0-db", type=float, default=None, help="Eb/N0 operating point in dB")
    p.add_argument("--zero-frame", action="store_true", help="use an all-zero frame")
    p.add_argument("--frame-out", default=None, help="write the demodulated frame JSON")
    p.add_argument("--out", required=True, help="output report JSON")
    p.set_defaults(func=cmd_loopback)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
