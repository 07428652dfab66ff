"""Scenario files: JSON objects mapping onto :class:`ScenarioConfig`.

Every key is optional; omitted keys take the documented defaults and
unknown keys are rejected.
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from ..airsim import ScenarioConfig
from ..exceptions import ConfigError, InvalidArgumentError
from ..timing import FrameLayout, MacVariant

DEFAULTS = {
    "variant": "proposed",
    "slots_per_frame": 256,
    "slot_duration_ms": 7.8125,
    "random_access_slots": 16,
    "guard_ms": 2.3,
    "payload_bits": None,
    "chain_length_km": 4900.0,
    "node_interval_km": 678.0,
    "rho": 0.0,
    "report_interval_frames": 3,
    "sim_frames": 300,
    "seed": 0,
    "aircraft_speed_kmh": 1000.0,
    "weather_enabled": True,
    "retry_limit": 8,
    "originators": "tail",
    "max_range_km": 678.0,
    "propagation_speed": 3.0e8,
    "queue_limit": None,
    "slot_assignment": None,
    "drain": True,
}

PRESET_PREFIX = "preset:"


def scenario_from_dict(data: dict) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("scenario must be a JSON object")
    unknown = sorted(set(data) - set(DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown scenario key(s): {', '.join(unknown)}")
    merged = {**DEFAULTS, **data}
    try:
        frame = FrameLayout.from_ms(merged["slots_per_frame"], merged["slot_duration_ms"],
                                    merged["random_access_slots"])
        return ScenarioConfig(
            variant=MacVariant.parse(merged["variant"]),
            frame=frame,
            guard_ms=merged["guard_ms"],
            payload_bits=merged["payload_bits"],
            chain_length_km=merged["chain_length_km"],
            node_interval_km=merged["node_interval_km"],
            rho=merged["rho"],
            report_interval_frames=merged["report_interval_frames"],
            sim_frames=merged["sim_frames"],
            rng_seed=merged["seed"],
            aircraft_speed_kmh=merged["aircraft_speed_kmh"],
            weather_enabled=bool(merged["weather_enabled"]),
            retry_limit=merged["retry_limit"],
            originators=merged["originators"],
            max_range_km=merged["max_range_km"],
            propagation_speed=merged["propagation_speed"],
            queue_limit=merged["queue_limit"],
            slot_assignment=merged["slot_assignment"],
            drain=bool(merged["drain"]),
        )
    except InvalidArgumentError as exc:
        raise ConfigError(str(exc)) from None
    except (TypeError, AttributeError) as exc:
        raise ConfigError(f"malformed scenario value: {exc}") from None


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    return {
        "variant": cfg.variant.value,
        "slots_per_frame": cfg.frame.slots_per_frame,
        "slot_duration_ms": cfg.frame.slot_duration,
        "random_access_slots": cfg.frame.random_access_slots,
        "guard_ms": cfg.guard_ms,
        "payload_bits": cfg.payload_bits,
        "chain_length_km": cfg.chain_length_km,
        "node_interval_km": cfg.node_interval_km,
        "rho": cfg.rho,
        "report_interval_frames": cfg.report_interval_frames,
        "sim_frames": cfg.sim_frames,
        "seed": cfg.rng_seed,
        "aircraft_speed_kmh": cfg.aircraft_speed_kmh,
        "weather_enabled": cfg.weather_enabled,
        "retry_limit": cfg.retry_limit,
        "originators": cfg.originators,
        "max_range_km": cfg.max_range_km,
        "propagation_speed": cfg.propagation_speed,
        "queue_limit": cfg.queue_limit,
        "slot_assignment": ({str(k): v for k, v in sorted(cfg.slot_assignment.items())}
                            if cfg.slot_assignment else None),
        "drain": cfg.drain,
    }


def serialize_scenario(cfg: ScenarioConfig) -> str:
    return json.dumps(scenario_to_dict(cfg), indent=2) + "\n"


def loads_scenario(text: str, source: str = "<string>") -> ScenarioConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return scenario_from_dict(data)
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def preset_names() -> list[str]:
    root = resources.files("airtdma") / "presets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def preset_text(name: str) -> str:
    path = resources.files("airtdma") / "presets" / f"{name}.json"
    if not path.is_file():
        raise ConfigError(f"no preset named {name!r}; available: {', '.join(preset_names())}")
    return path.read_text()


def parse_scenario(path) -> ScenarioConfig:
    """Load a scenario from a JSON file, or ``preset:<name>`` for a shipped one."""
    path = str(path)
    if path.startswith(PRESET_PREFIX):
        name = path[len(PRESET_PREFIX):]
        return loads_scenario(preset_text(name), path)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc.strerror}") from None
    return loads_scenario(text, path)
