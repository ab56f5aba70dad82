"""Experiment configuration: strict YAML schema and sweep expansion.

A config file has four scalar sections (channel, cache, policy, run) plus an
optional sweep section whose axes override the scalar values pointwise.
Unknown keys anywhere are rejected.  Runs expand in deterministic order:
policies, then num_users, then v, then fairness_alpha, then seeds.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import product
from pathlib import Path
import re

import yaml

from .caching import CacheParams
from .channel import ChannelParams, db_to_linear
from .engine import POLICIES, RunSpec
from .policy import PolicyParams
from .subsets import MAX_USERS


class ConfigError(ValueError):
    pass


def _check_keys(section: dict, where: str, allowed: set[str],
                required: set[str]) -> None:
    if not isinstance(section, dict):
        raise ConfigError(f"{where}: expected a mapping")
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {unknown}; "
                          f"allowed: {sorted(allowed)}")
    missing = sorted(required - set(section))
    if missing:
        raise ConfigError(f"{where}: missing required key(s) {missing}")


def _as_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    return value


def _as_list(value, where: str) -> list:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where}: expected a nonempty list, got {value!r}")
    return value


def _parse_power(value, where: str) -> float:
    """Linear power from a number, or from a string like '10dB'."""
    if isinstance(value, str):
        match = re.fullmatch(r"\s*([-+]?[0-9.eE+-]+)\s*dBW?\s*", value,
                             flags=re.IGNORECASE)
        if not match:
            raise ConfigError(f"{where}: cannot parse power {value!r}; "
                              "use a linear number or e.g. '10dB'")
        return db_to_linear(float(match.group(1)))
    return _as_number(value, where)


@dataclass(frozen=True)
class PathlossSpec:
    """Either an explicit per-user list or a strong/weak two-class split."""

    explicit: tuple[float, ...] | None
    strong: float | None
    weak: float | None

    def resolve(self, num_users: int) -> tuple[float, ...]:
        if self.explicit is not None:
            if len(self.explicit) != num_users:
                raise ConfigError(
                    f"channel.pathloss lists {len(self.explicit)} users but "
                    f"num_users is {num_users}; use the strong/weak form "
                    "when sweeping num_users")
            return self.explicit
        if num_users % 2:
            raise ConfigError("two-class pathloss needs an even num_users")
        half = num_users // 2
        return (self.strong,) * half + (self.weak,) * half


@dataclass(frozen=True)
class ExperimentConfig:
    num_users: int
    pathloss: PathlossSpec
    power: float
    slot_length: int
    cache: CacheParams
    policy_name: str
    control: PolicyParams
    slots: int
    seed: int
    warmup_fraction: float
    window: int
    sweep_policies: tuple[str, ...]
    sweep_num_users: tuple[int, ...]
    sweep_v: tuple[float, ...]
    sweep_alpha: tuple[float, ...]
    sweep_seeds: tuple[int, ...]


def load_config(path) -> ExperimentConfig:
    raw = yaml.safe_load(Path(path).read_text())
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be a mapping")
    return parse_config(raw)


def parse_config(raw: dict) -> ExperimentConfig:
    _check_keys(raw, "config", {"channel", "cache", "policy", "run", "sweep"},
                {"channel", "cache", "policy", "run"})

    chan = raw["channel"]
    _check_keys(chan, "channel", {"num_users", "pathloss", "power",
                                  "slot_length"},
                {"num_users", "pathloss", "power", "slot_length"})
    num_users = _as_int(chan["num_users"], "channel.num_users")
    if not 1 <= num_users <= MAX_USERS:
        raise ConfigError(f"channel.num_users: must be in [1, {MAX_USERS}]")
    pl = chan["pathloss"]
    if isinstance(pl, dict):
        _check_keys(pl, "channel.pathloss", {"strong", "weak"},
                    {"strong", "weak"})
        pathloss = PathlossSpec(None, _as_number(pl["strong"],
                                                 "channel.pathloss.strong"),
                                _as_number(pl["weak"], "channel.pathloss.weak"))
    else:
        values = [_as_number(x, "channel.pathloss[]")
                  for x in _as_list(pl, "channel.pathloss")]
        pathloss = PathlossSpec(tuple(values), None, None)
    power = _parse_power(chan["power"], "channel.power")
    slot_length = _as_int(chan["slot_length"], "channel.slot_length")

    cache_raw = raw["cache"]
    _check_keys(cache_raw, "cache", {"memory_fraction", "file_bits"},
                {"memory_fraction", "file_bits"})
    try:
        cache = CacheParams(
            memory_fraction=_as_number(cache_raw["memory_fraction"],
                                       "cache.memory_fraction"),
            file_bits=_as_int(cache_raw["file_bits"], "cache.file_bits"))
    except ValueError as exc:
        raise ConfigError(f"cache: {exc}") from exc

    pol = raw["policy"]
    _check_keys(pol, "policy", {"name", "fairness_alpha", "v", "domain_shift",
                                "admit_cap", "combine_cap"},
                {"name", "fairness_alpha", "v"})
    name = pol["name"]
    if name not in POLICIES:
        raise ConfigError(f"policy.name: {name!r} is not one of {POLICIES}")
    try:
        control = PolicyParams(
            fairness_alpha=_as_number(pol["fairness_alpha"],
                                      "policy.fairness_alpha"),
            v=_as_number(pol["v"], "policy.v"),
            domain_shift=_as_number(pol.get("domain_shift", 0.01),
                                    "policy.domain_shift"),
            admit_cap=_as_number(pol.get("admit_cap", 2.0), "policy.admit_cap"),
            combine_cap=_as_int(pol.get("combine_cap", 1), "policy.combine_cap"))
    except ValueError as exc:
        raise ConfigError(f"policy: {exc}") from exc

    run = raw["run"]
    _check_keys(run, "run", {"slots", "seed", "warmup_fraction", "window"},
                {"slots"})
    slots = _as_int(run["slots"], "run.slots")
    seed = _as_int(run.get("seed", 1), "run.seed")
    warmup = _as_number(run.get("warmup_fraction", 0.1), "run.warmup_fraction")
    window = _as_int(run.get("window", 1000), "run.window")

    sweep = raw.get("sweep", {})
    _check_keys(sweep, "sweep", {"policies", "num_users", "v",
                                 "fairness_alpha", "seeds"}, set())
    policies = tuple(sweep.get("policies", [name]))
    for p in policies:
        if p not in POLICIES:
            raise ConfigError(f"sweep.policies: {p!r} is not one of {POLICIES}")
    users = tuple(_as_int(x, "sweep.num_users[]")
                  for x in sweep.get("num_users", [num_users]))
    vs = tuple(_as_number(x, "sweep.v[]") for x in sweep.get("v", [control.v]))
    alphas = tuple(_as_number(x, "sweep.fairness_alpha[]")
                   for x in sweep.get("fairness_alpha",
                                      [control.fairness_alpha]))
    seeds = tuple(_as_int(x, "sweep.seeds[]") for x in sweep.get("seeds", [seed]))

    cfg = ExperimentConfig(
        num_users=num_users, pathloss=pathloss, power=power,
        slot_length=slot_length, cache=cache, policy_name=name,
        control=control, slots=slots, seed=seed, warmup_fraction=warmup,
        window=window, sweep_policies=policies, sweep_num_users=users,
        sweep_v=vs, sweep_alpha=alphas, sweep_seeds=seeds)
    for spec in expand_runs(cfg):  # validate every grid point eagerly
        del spec
    return cfg


def expand_runs(cfg: ExperimentConfig, policy: str | None = None,
                seed: int | None = None) -> list[RunSpec]:
    """All grid points as RunSpecs, optionally restricted to one policy or
    one seed from the command line."""
    policies = cfg.sweep_policies if policy is None else (policy,)
    seeds = cfg.sweep_seeds if seed is None else (seed,)
    specs = []
    for pol, k, v, alpha, sd in product(policies, cfg.sweep_num_users,
                                        cfg.sweep_v, cfg.sweep_alpha, seeds):
        try:
            channel = ChannelParams(num_users=k,
                                    pathloss=cfg.pathloss.resolve(k),
                                    power=cfg.power,
                                    slot_length=cfg.slot_length)
            control = replace(cfg.control, v=v, fairness_alpha=alpha)
            specs.append(RunSpec(policy=pol, channel=channel, cache=cfg.cache,
                                 control=control, slots=cfg.slots, seed=sd,
                                 warmup_fraction=cfg.warmup_fraction,
                                 window=cfg.window))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    return specs


def resolved_dict(cfg: ExperimentConfig) -> dict:
    """Plain-dict echo of the fully defaulted configuration."""
    if cfg.pathloss.explicit is not None:
        pathloss = list(cfg.pathloss.explicit)
    else:
        pathloss = {"strong": cfg.pathloss.strong, "weak": cfg.pathloss.weak}
    return {
        "channel": {"num_users": cfg.num_users, "pathloss": pathloss,
                    "power": cfg.power, "slot_length": cfg.slot_length},
        "cache": {"memory_fraction": cfg.cache.memory_fraction,
                  "file_bits": cfg.cache.file_bits},
        "policy": {"name": cfg.policy_name,
                   "fairness_alpha": cfg.control.fairness_alpha,
                   "v": cfg.control.v,
                   "domain_shift": cfg.control.domain_shift,
                   "admit_cap": cfg.control.admit_cap,
                   "combine_cap": cfg.control.combine_cap},
        "run": {"slots": cfg.slots, "seed": cfg.seed,
                "warmup_fraction": cfg.warmup_fraction, "window": cfg.window},
        "sweep": {"policies": list(cfg.sweep_policies),
                  "num_users": list(cfg.sweep_num_users),
                  "v": list(cfg.sweep_v),
                  "fairness_alpha": list(cfg.sweep_alpha),
                  "seeds": list(cfg.sweep_seeds)},
    }
