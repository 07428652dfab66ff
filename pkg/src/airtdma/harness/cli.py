"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 runtime or protocol violation.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields

from ..airsim import trace_to_csv
from ..codec import SpecialWeather, WeatherReport, weather_from_hex, weather_to_hex
from ..exceptions import AirTdmaError, CodecError, ConfigError, ProtocolViolationError
from .runner import compare, simulate, summary_lines
from .scenario import parse_scenario, preset_names, serialize_scenario
from .sweep import Quantity, SweepSpec, sweep

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_run_flags(p):
    p.add_argument("scenario", help="scenario JSON path, or preset:<name>")
    p.add_argument("--frames", type=int, help="traffic frames to simulate")
    p.add_argument("--seed", type=int, help="override the scenario RNG seed")
    p.add_argument("--out", help="write the CSV here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="airtdma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="closed-form sweeps as CSV")
    an.add_argument("quantity", choices=[q.value for q in Quantity])
    an.add_argument("--min", type=float, dest="axis_min")
    an.add_argument("--max", type=float, dest="axis_max")
    an.add_argument("--step", type=float, dest="axis_step")
    an.add_argument("--rho", type=float, action="append", help="repeatable; default 0 and 0.1")
    an.add_argument("--variant", action="append", choices=["proposed", "legacy"])
    an.add_argument("--frame-duration", type=float, default=2.0)
    an.add_argument("--data-rate", type=float, default=31_500)
    an.add_argument("--speed", type=float, default=3.0e8, help="propagation speed, m/s")
    an.add_argument("--d-gs", type=float, default=4900.0)
    an.add_argument("--d-int-min", type=float, default=90.0)
    an.add_argument("--d-int-max", type=float, default=678.0)
    an.add_argument("--max-range", type=float, default=678.0)
    an.add_argument("--hop-rounding", choices=["fractional", "ceiling"], default="fractional")
    an.add_argument("--out")

    sim = sub.add_parser("simulate", help="run the relay-chain simulator")
    _add_run_flags(sim)
    sim.add_argument("--trace", help="write the per-transmission event trace CSV here")

    cmp_ = sub.add_parser("compare", help="simulated versus analytical delay and throughput")
    _add_run_flags(cmp_)
    cmp_.add_argument("--hop-rounding", choices=["fractional", "ceiling"], default="ceiling")

    val = sub.add_parser("validate", help="check a scenario file and print it with defaults")
    val.add_argument("scenario")

    sub.add_parser("presets", help="list shipped scenario presets")

    wx = sub.add_parser("weather", help="weather block codec")
    wsub = wx.add_subparsers(dest="action", required=True)
    enc = wsub.add_parser("encode", help="fields -> 18-char hex")
    for f in fields(WeatherReport):
        if f.name == "special":
            enc.add_argument("--special", default="", help="comma list, e.g. hail,icing")
        else:
            enc.add_argument(f"--{f.name.replace('_', '-')}", type=int, default=0)
    dec = wsub.add_parser("decode", help="18-char hex -> fields as JSON")
    dec.add_argument("hex")
    return parser


def _analyze(args):
    kwargs = dict(
        quantity=args.quantity, axis_min=args.axis_min, axis_max=args.axis_max,
        axis_step=args.axis_step, frame_duration=args.frame_duration,
        propagation_speed=args.speed, data_rate=args.data_rate, d_gs=args.d_gs,
        d_int_min=args.d_int_min, d_int_max=args.d_int_max, max_range_km=args.max_range,
        hop_rounding=args.hop_rounding,
    )
    if args.rho:
        kwargs["rhos"] = tuple(args.rho)
    if args.variant:
        kwargs["variants"] = tuple(args.variant)
    _emit(sweep(SweepSpec(**kwargs)).to_csv(), args.out)


def _simulate(args):
    cfg = parse_scenario(args.scenario)
    table, metrics, state = simulate(cfg, args.frames, args.seed, trace=bool(args.trace))
    _emit(table.to_csv(), args.out)
    if args.trace:
        _emit(trace_to_csv(state.trace), args.trace)
    stream = sys.stderr if not args.out else sys.stdout
    for line in summary_lines(state.cfg, metrics):
        print(line, file=stream)


def _compare(args):
    cfg = parse_scenario(args.scenario)
    table, notes, _ = compare(cfg, args.frames, args.seed, args.hop_rounding)
    _emit(table.to_csv(), args.out)
    stream = sys.stderr if not args.out else sys.stdout
    for note in notes:
        print(f"note: {note}", file=stream)


def _weather(args):
    if args.action == "encode":
        try:
            special = SpecialWeather.from_names(args.special)
        except ValueError as exc:
            raise CodecError(str(exc)) from None
        values = {f.name: getattr(args, f.name) for f in fields(WeatherReport) if f.name != "special"}
        print(weather_to_hex(WeatherReport(**values, special=special)))
    else:
        print(json.dumps(weather_from_hex(args.hex).to_dict()))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            _analyze(args)
        elif args.command == "simulate":
            _simulate(args)
        elif args.command == "compare":
            _compare(args)
        elif args.command == "validate":
            sys.stdout.write(serialize_scenario(parse_scenario(args.scenario)))
        elif args.command == "presets":
            print("\n".join(preset_names()))
        elif args.command == "weather":
            _weather(args)
    except (ConfigError, CodecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ProtocolViolationError as exc:
        print(f"protocol violation: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except AirTdmaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
