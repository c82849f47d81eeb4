"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 design error. Warnings go to stderr;
machine-readable artifacts are written to files only.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path


from . import export
from .bank_layout import FindingKind, all_presets, load_preset, validate_preset
from .errors import DesignError, DomainError, FeasibilityWarning, PresetLookupError
from .fir_design import (
    DEFAULT_SAMPLE_RATE, DEFAULT_TAPS, design_bank, frequency_response, is_well_conditioned,
    transition_width,
)
from .quant_coe import RADICES, FixedPointFormat, quantize, write_coe
from .sim_engine import DdsConfig, compare_banks, dds_sine, run_bank

EXIT_OK, EXIT_USAGE, EXIT_DESIGN = 0, 1, 2
LARGE_SIMULATION = 10**7


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    scale: str
    variant: int
    n_taps: int
    sample_rate_hz: float
    total_bits: int
    fraction_bits: int
    radix: int
    out_dir: Path

    def __post_init__(self):
        if self.n_taps < 3 or self.n_taps % 2 == 0:
            raise UsageError(f"--taps must be odd and >= 3, got {self.n_taps}")
        if not (self.sample_rate_hz > 0 and math.isfinite(self.sample_rate_hz)):
            raise UsageError("--sample-rate must be positive")
        if self.radix not in RADICES:
            raise UsageError(f"--radix must be one of {RADICES}")
        try:
            FixedPointFormat(self.total_bits, self.fraction_bits)
        except DomainError as exc:
            raise UsageError(str(exc)) from None

    @property
    def fmt(self) -> FixedPointFormat:
        return FixedPointFormat(self.total_bits, self.fraction_bits)

    def report_lines(self):
        for key, value in asdict(self).items():
            yield f"{key} = {value}"


def _config(args) -> RunConfig:
    return RunConfig(
        scale=args.scale, variant=args.variant, n_taps=args.taps,
        sample_rate_hz=args.sample_rate, total_bits=args.total_bits,
        fraction_bits=args.fraction_bits, radix=args.radix, out_dir=Path(args.out),
    )


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _design(cfg: RunConfig, preset=None):
    preset = preset or load_preset(cfg.scale, cfg.variant)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FeasibilityWarning)
        filters = design_bank(preset, cfg.n_taps, cfg.sample_rate_hz)
    notes = []
    for i, band in enumerate(preset.bands, start=1):
        if not is_well_conditioned(band, preset.window_kind, cfg.n_taps, cfg.sample_rate_hz):
            tw = transition_width(preset.window_kind, cfg.n_taps, cfg.sample_rate_hz)
            notes.append(
                f"band {i}: bandwidth {band.bandwidth:g} Hz < {preset.window_kind.value} "
                f"transition width {tw:g} Hz"
            )
    for note in notes:
        print(f"warning: {note}", file=sys.stderr)
    return preset, filters, notes


def cmd_presets(args):
    if args.variant is not None and args.scale is None:
        raise UsageError("--variant needs --scale")
    if args.scale is None:
        presets = all_presets()
    elif args.variant is None:
        presets = [load_preset(args.scale, v) for v in (1, 2, 3)]
    else:
        presets = [load_preset(args.scale, args.variant)]
    for preset in presets:
        print(f"# {preset.name} ({preset.window_kind.value} window), kHz")
        print(f"{'band':>4} {'lower':>8} {'upper':>8} {'bw':>8} {'nominal':>8}")
        for i, b in enumerate(preset.bands, start=1):
            print(f"{i:>4} {b.lower_cutoff / 1e3:>8g} {b.upper_cutoff / 1e3:>8g} "
                  f"{b.bandwidth / 1e3:>8g} {b.nominal_bandwidth / 1e3:>8g}")
        for f in validate_preset(preset):
            print(f"  ! {f.kind.value} band {f.band}: {f.details}")
        if args.export:
            target = Path(args.export)
            if len(presets) > 1:
                target = target / f"{preset.name}.csv"
            _write(target, export.preset_csv(preset))
    return EXIT_OK


def cmd_design(args):
    cfg = _config(args)
    preset = None
    if args.preset_file:
        preset = export.read_preset_csv(Path(args.preset_file).read_text(), cfg.scale)
    preset, filters, notes = _design(cfg, preset)
    lines = [f"design report: {preset.name}", *cfg.report_lines(), f"format = {cfg.fmt}"]
    for k, filt in enumerate(filters):
        q = quantize(filt.coefficients, cfg.fmt)
        _write(cfg.out_dir / f"band_{k:02d}.csv", export.coefficients_csv(filt))
        _write(cfg.out_dir / f"band_{k:02d}.coe", write_coe(q, cfg.radix))
        lines.append(f"band {k + 1}: {filt.band.lower_cutoff:g}-{filt.band.upper_cutoff:g} Hz "
                     f"sha256 {q.source_hash[:16]}")
    lines.append(f"feasibility warnings: {len(notes)}")
    lines.extend(f"  {n}" for n in notes)
    _write(cfg.out_dir / "design_report.txt", "\n".join(lines) + "\n")
    print(f"wrote {2 * len(filters) + 1} files to {cfg.out_dir}")
    return EXIT_OK


_DURATION = re.compile(r"^\s*([0-9.eE+-]+)\s*(s|ms|us|ns)?\s*$")
_UNITS = {None: 1.0, "s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9}


def parse_duration(text: str) -> float:
    m = _DURATION.match(text)
    if not m:
        raise UsageError(f"cannot parse duration {text!r}")
    try:
        value = float(m.group(1)) * _UNITS[m.group(2)]
    except ValueError:
        raise UsageError(f"cannot parse duration {text!r}") from None
    if not value > 0:
        raise UsageError("duration must be positive")
    return value


def cmd_simulate(args):
    cfg = _config(args)
    if args.n_samples is not None:
        n_samples = args.n_samples
    else:
        n_samples = int(round(parse_duration(args.duration) * cfg.sample_rate_hz))
    if n_samples < 1:
        raise UsageError("simulation must cover at least one sample")
    if n_samples > LARGE_SIMULATION and not args.allow_large:
        raise UsageError(
            f"{n_samples} samples requested; pass --allow-large to run more than {LARGE_SIMULATION}"
        )
    try:
        dds = DdsConfig(cfg.sample_rate_hz, args.target_hz, args.accumulator_bits, args.amplitude)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    print(f"samples = {n_samples}")
    print(f"tuning_word = {dds.tuning_word} (actual {dds.actual_hz!r} Hz)")
    if args.dry_run:
        return EXIT_OK
    preset, filters, _ = _design(cfg)
    result = run_bank(filters, dds_sine(dds, n_samples))
    _write(cfg.out_dir / "outputs.csv", export.run_csv(result))
    _write(cfg.out_dir / "energies.csv", export.energies_csv(result.band_energies))
    print(f"argmax band = {result.loudest_band}")
    return EXIT_OK


def cmd_response(args):
    cfg = _config(args)
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    _, filters, _ = _design(cfg)
    responses = [frequency_response(f, args.points) for f in filters]
    for k, resp in enumerate(responses):
        _write(cfg.out_dir / f"band_{k:02d}_response.csv", export.response_csv(resp))
    _write(cfg.out_dir / "response_all.csv", export.combined_response_csv(responses))
    return EXIT_OK


def cmd_compare(args):
    common = dict(n_taps=args.taps, sample_rate_hz=args.sample_rate, total_bits=args.total_bits,
                  fraction_bits=args.fraction_bits, radix=args.radix, out_dir=Path(args.out))
    cfg_a = RunConfig(scale=args.scale_a, variant=args.variant_a, **common)
    cfg_b = RunConfig(scale=args.scale_b, variant=args.variant_b, **common)
    _, bank_a, _ = _design(cfg_a)
    _, bank_b, _ = _design(cfg_b)
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    cmp = compare_banks(bank_a, bank_b, args.points)
    _write(cfg_a.out_dir / "comparison.csv", export.comparison_csv(cmp))
    print(f"{args.scale_a}-{args.variant_a} vs {args.scale_b}-{args.variant_b}")
    print(f"mean cosine = {cmp.mean_cosine:.12g}")
    print(f"mean response rms diff (dB) = {cmp.mean_response_rms_diff_db:.12g}")
    return EXIT_OK


def _add_design_flags(p, scale=True):
    if scale:
        p.add_argument("--scale", choices=["mel", "bark"], required=True)
        p.add_argument("--variant", type=int, choices=[1, 2, 3], default=1)
    p.add_argument("--taps", type=int, default=DEFAULT_TAPS)
    p.add_argument("--sample-rate", "--clock", dest="sample_rate", type=float,
                   default=DEFAULT_SAMPLE_RATE, help="sample rate / DDS clock in Hz")
    p.add_argument("--total-bits", type=int, default=16)
    p.add_argument("--fraction-bits", type=int, default=15)
    p.add_argument("--radix", type=int, default=16)
    p.add_argument("--out", default="out")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="percepbank", description="Mel/Bark FIR filter-bank toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("presets", help="print the built-in band tables")
    p.add_argument("--scale", choices=["mel", "bark"])
    p.add_argument("--variant", type=int, choices=[1, 2, 3])
    p.add_argument("--export", help="CSV file (one preset) or directory (several)")
    p.set_defaults(func=cmd_presets)

    p = sub.add_parser("design", help="write coefficient CSV and COE files")
    _add_design_flags(p)
    p.add_argument("--preset-file", help="CSV band table to use instead of a built-in preset")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", help="drive the bank with a DDS sine")
    _add_design_flags(p)
    p.add_argument("--target-hz", type=float, required=True)
    length = p.add_mutually_exclusive_group(required=True)
    length.add_argument("--n-samples", type=int)
    length.add_argument("--duration", help="e.g. 1200us, 2ms, 0.5s")
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--accumulator-bits", type=int, default=32)
    p.add_argument("--allow-large", action="store_true",
                   help=f"permit more than {LARGE_SIMULATION} samples")
    p.add_argument("--dry-run", action="store_true", help="validate and report size only")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("response", help="write per-band frequency responses")
    _add_design_flags(p)
    p.add_argument("--points", type=int, default=1024)
    p.set_defaults(func=cmd_response)

    p = sub.add_parser("compare", help="compare two banks band by band")
    _add_design_flags(p, scale=False)
    p.add_argument("--scale-a", choices=["mel", "bark"], required=True)
    p.add_argument("--variant-a", type=int, choices=[1, 2, 3], required=True)
    p.add_argument("--scale-b", choices=["mel", "bark"], required=True)
    p.add_argument("--variant-b", type=int, choices=[1, 2, 3], required=True)
    p.add_argument("--points", type=int, default=512)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, PresetLookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DesignError as exc:
        print(f"design error: {exc}", file=sys.stderr)
        return EXIT_DESIGN


if __name__ == "__main__":
    sys.exit(main())
