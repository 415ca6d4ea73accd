"""Experiment config parsing: strict JSON schemas with rejected unknown keys.

Each CLI command has a fixed key set; anything unrecognized, mistyped or
missing raises :class:`ConfigError` before any output file is touched.
Complex numbers are written as plain numbers or two-element [re, im] lists.
"""

from __future__ import annotations

import json

import numpy as np

from . import linalg
from .arrow import Bipartition, diagonal_coupling_demo
from .universe import HERMITIAN_KIND, POVM_KIND, SystemSpec


class ConfigError(ValueError):
    """Raised for any malformed or incomplete experiment config."""


# Default asserted tolerances per command; --tolerance-scale multiplies the
# residual bounds (order windows are structural and stay fixed).
TOLERANCES = {
    "clock-verify": {
        "gram_error": 1e-10,
        "identity_error": 1e-10,
        "shift_time_error": 1e-10,
        "shift_energy_error": 1e-10,
        "eigenstate_age_rate": 1e-12,
        "superposition_age_rate": 1e-3,
    },
    "povm-verify": {
        "identity_error": 1e-10,
        "delta_paired_error": 1e-10,
        "delta_unpaired_magnitude": 1e-10,
    },
    "universe-evolve": {
        "constraint_residual": 1e-10,
        "max_infidelity": 1e-10,
        "norm_error": 1e-10,
        "history_error": 1e-10,
    },
    "universe-born": {
        "constraint_residual": 1e-10,
        "born_error": 1e-10,
    },
    "arrow-entropy": {
        "constraint_residual": 1e-9,
        "initial_entropy": 1e-10,
        "entropy_range_error": 1e-10,
    },
    "continuum-check": {
        "quadrature_residual": 1e-12,
        "order_window_low": 1.8,
        "order_window_high": 2.2,
    },
}


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    return raw


def _check_keys(obj: dict, required: set[str], optional: set[str], where: str) -> None:
    keys = set(obj)
    unknown = keys - required - optional
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - keys
    if missing:
        raise ConfigError(f"{where}: missing keys {sorted(missing)}")


def _number(obj: dict, key: str, where: str, default=None, *, positive=False):
    if key not in obj:
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{where}: {key} must be a number")
    if positive and not val > 0:
        raise ConfigError(f"{where}: {key} must be positive")
    return float(val)


def _integer(obj: dict, key: str, where: str, default=None, *, minimum=None):
    if key not in obj:
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(f"{where}: {key} must be an integer")
    if minimum is not None and val < minimum:
        raise ConfigError(f"{where}: {key} must be at least {minimum}")
    return int(val)


def _boolean(obj: dict, key: str, where: str, default=False):
    if key not in obj:
        return default
    val = obj[key]
    if not isinstance(val, bool):
        raise ConfigError(f"{where}: {key} must be true or false")
    return val


def _complex_entry(val, where: str) -> complex:
    if isinstance(val, bool):
        raise ConfigError(f"{where}: expected a number or [re, im] pair")
    if isinstance(val, (int, float)):
        return complex(val)
    if (isinstance(val, list) and len(val) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in val)):
        return complex(val[0], val[1])
    raise ConfigError(f"{where}: expected a number or [re, im] pair")


def _real_vector(obj: dict, key: str, where: str, min_len=1) -> np.ndarray:
    val = obj.get(key)
    if (not isinstance(val, list) or len(val) < min_len
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in val)):
        raise ConfigError(f"{where}: {key} must be a list of at least {min_len} numbers")
    return np.asarray(val, dtype=float)


def _complex_vector(obj: dict, key: str, where: str) -> np.ndarray:
    val = obj.get(key)
    if not isinstance(val, list) or not val:
        raise ConfigError(f"{where}: {key} must be a non-empty list")
    return np.asarray([_complex_entry(x, f"{where}: {key}") for x in val])


def _complex_matrix(obj: dict, key: str, where: str) -> np.ndarray:
    val = obj.get(key)
    if not isinstance(val, list) or not val or not all(isinstance(r, list) for r in val):
        raise ConfigError(f"{where}: {key} must be a list of rows")
    n = len(val)
    rows = []
    for i, row in enumerate(val):
        if len(row) != n:
            raise ConfigError(f"{where}: {key} must be square, row {i} has length {len(row)}")
        rows.append([_complex_entry(x, f"{where}: {key}") for x in row])
    return np.asarray(rows)


def _tolerances(obj: dict, command: str) -> dict[str, float]:
    defaults = dict(TOLERANCES[command])
    given = obj.get("tolerances", {})
    if not isinstance(given, dict):
        raise ConfigError("tolerances must be an object")
    for name, val in given.items():
        if name not in defaults:
            raise ConfigError(f"tolerances: unknown name {name!r} for {command}")
        if isinstance(val, bool) or not isinstance(val, (int, float)) or not val > 0:
            raise ConfigError(f"tolerances: {name} must be a positive number")
        defaults[name] = float(val)
    return defaults


def _system_spec(obj: dict, where: str) -> SystemSpec:
    val = obj.get("system")
    if not isinstance(val, dict):
        raise ConfigError(f"{where}: system must be an object")
    if "energies" in val:
        _check_keys(val, {"energies", "coefficients"}, set(), f"{where}: system")
        energies = _real_vector(val, "energies", f"{where}: system")
        coeff = _complex_vector(val, "coefficients", f"{where}: system")
        try:
            return SystemSpec.from_energies(energies, coeff)
        except ValueError as exc:
            raise ConfigError(f"{where}: system: {exc}") from exc
    if "hamiltonian" in val:
        _check_keys(val, {"hamiltonian"}, {"coefficients", "initial_state"}, f"{where}: system")
        ham = _complex_matrix(val, "hamiltonian", f"{where}: system")
        coeff = _complex_vector(val, "coefficients", f"{where}: system") if "coefficients" in val else None
        init = _complex_vector(val, "initial_state", f"{where}: system") if "initial_state" in val else None
        try:
            return SystemSpec.from_hamiltonian(ham, coefficients=coeff, initial_state=init)
        except ValueError as exc:
            raise ConfigError(f"{where}: system: {exc}") from exc
    raise ConfigError(f"{where}: system needs either energies or hamiltonian")


def parse_clock_verify(cfg: dict) -> dict:
    where = "clock verify"
    _check_keys(cfg, {"d_c", "deltaE"}, {"E0", "tau0", "tolerances"}, where)
    return {
        "d_c": _integer(cfg, "d_c", where, minimum=2),
        "delta_e": _number(cfg, "deltaE", where, positive=True),
        "e0": _number(cfg, "E0", where, default=0.0),
        "tau0": _number(cfg, "tau0", where, default=0.0),
        "tolerances": _tolerances(cfg, "clock-verify"),
    }


def parse_povm_verify(cfg: dict) -> dict:
    where = "povm verify"
    _check_keys(cfg, {"spectrum"}, {"max_denominator", "D", "alpha0", "tolerances"}, where)
    spectrum = _real_vector(cfg, "spectrum", where, min_len=2)
    if np.any(np.diff(spectrum) <= 0):
        raise ConfigError(f"{where}: spectrum must be strictly increasing")
    return {
        "spectrum": spectrum,
        "max_denominator": _integer(cfg, "max_denominator", where, default=4096, minimum=1),
        "n_states": _integer(cfg, "D", where, minimum=1),
        "alpha0": _number(cfg, "alpha0", where, default=0.0),
        "tolerances": _tolerances(cfg, "povm-verify"),
    }


def _parse_universe_common(cfg: dict, where: str, extra_required: set[str],
                           extra_optional: set[str], command: str) -> dict:
    _check_keys(cfg, {"clock_kind", "system"} | extra_required,
                {"d_c", "D", "t0", "max_denominator", "dim_ratio", "tolerances"} | extra_optional,
                where)
    kind = cfg.get("clock_kind")
    if kind not in (HERMITIAN_KIND, POVM_KIND):
        raise ConfigError(f"{where}: clock_kind must be '{HERMITIAN_KIND}' or '{POVM_KIND}'")
    n_states = _integer(cfg, "D", where, minimum=1)
    if kind == HERMITIAN_KIND and n_states is not None:
        raise ConfigError(f"{where}: D applies to povm clocks only")
    return {
        "clock_kind": kind,
        "system": _system_spec(cfg, where),
        "d_c": _integer(cfg, "d_c", where, minimum=2),
        "n_states": n_states,
        "t0": _number(cfg, "t0", where, default=0.0),
        "max_denominator": _integer(cfg, "max_denominator", where, default=4096, minimum=1),
        "dim_ratio": _integer(cfg, "dim_ratio", where, default=4, minimum=1),
        "tolerances": _tolerances(cfg, command),
    }


def parse_universe_evolve(cfg: dict) -> dict:
    return _parse_universe_common(cfg, "universe evolve", set(), set(), "universe-evolve")


def parse_universe_born(cfg: dict) -> dict:
    where = "universe born"
    params = _parse_universe_common(cfg, where, {"observable"}, set(), "universe-born")
    obs = _complex_matrix(cfg, "observable", where)
    if obs.shape[0] != params["system"].d_s:
        raise ConfigError(f"{where}: observable must match the system dimension {params['system'].d_s}")
    if linalg.hermiticity_defect(obs) > linalg.HERMITIAN_ATOL:
        raise ConfigError(f"{where}: observable must be Hermitian")
    params["observable"] = obs
    return params


def parse_arrow_entropy(cfg: dict) -> dict:
    where = "arrow entropy"
    _check_keys(cfg, {"system"},
                {"clock_kind", "d_c", "D", "t0", "max_denominator", "dim_ratio",
                 "mutual_information", "tolerances"}, where)
    sys_cfg = cfg.get("system")
    if not isinstance(sys_cfg, dict):
        raise ConfigError(f"{where}: system must be an object")
    if "demo" in sys_cfg:
        _check_keys(sys_cfg, {"demo"}, {"coupling", "local_fields"}, f"{where}: system")
        if sys_cfg["demo"] != "two-qubit-dephasing":
            raise ConfigError(f"{where}: unknown demo {sys_cfg['demo']!r}")
        fields = sys_cfg.get("local_fields", [2.0, 5.0])
        if (not isinstance(fields, list) or len(fields) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in fields)):
            raise ConfigError(f"{where}: system: local_fields must be two numbers")
        bip = diagonal_coupling_demo(
            coupling=_number(sys_cfg, "coupling", f"{where}: system", default=1.0),
            fields=(float(fields[0]), float(fields[1])))
    else:
        _check_keys(sys_cfg, {"d1", "d2", "hamiltonian", "psi1", "psi2"}, set(), f"{where}: system")
        try:
            bip = Bipartition(
                d1=_integer(sys_cfg, "d1", f"{where}: system", minimum=2),
                d2=_integer(sys_cfg, "d2", f"{where}: system", minimum=2),
                hamiltonian=_complex_matrix(sys_cfg, "hamiltonian", f"{where}: system"),
                psi1=_complex_vector(sys_cfg, "psi1", f"{where}: system"),
                psi2=_complex_vector(sys_cfg, "psi2", f"{where}: system"),
            )
        except ValueError as exc:
            raise ConfigError(f"{where}: system: {exc}") from exc
    kind = cfg.get("clock_kind", HERMITIAN_KIND)
    if kind not in (HERMITIAN_KIND, POVM_KIND):
        raise ConfigError(f"{where}: clock_kind must be '{HERMITIAN_KIND}' or '{POVM_KIND}'")
    n_states = _integer(cfg, "D", where, minimum=1)
    if kind == HERMITIAN_KIND and n_states is not None:
        raise ConfigError(f"{where}: D applies to povm clocks only")
    return {
        "bipartition": bip,
        "clock_kind": kind,
        "d_c": _integer(cfg, "d_c", where, minimum=2),
        "n_states": n_states,
        "t0": _number(cfg, "t0", where, default=0.0),
        "max_denominator": _integer(cfg, "max_denominator", where, default=4096, minimum=1),
        "dim_ratio": _integer(cfg, "dim_ratio", where, default=4, minimum=1),
        "mutual_information": _boolean(cfg, "mutual_information", where),
        "tolerances": _tolerances(cfg, "arrow-entropy"),
    }


def parse_continuum_check(cfg: dict) -> dict:
    where = "continuum check"
    _check_keys(cfg, {"spectrum", "coefficients"},
                {"max_denominator", "nodes", "alpha", "h0", "halvings", "tolerances"}, where)
    spectrum = _real_vector(cfg, "spectrum", where, min_len=2)
    if np.any(np.diff(spectrum) <= 0):
        raise ConfigError(f"{where}: spectrum must be strictly increasing")
    coeff = _complex_vector(cfg, "coefficients", where)
    if coeff.shape[0] != spectrum.shape[0]:
        raise ConfigError(f"{where}: coefficients must match the spectrum length")
    return {
        "spectrum": spectrum,
        "coefficients": coeff,
        "max_denominator": _integer(cfg, "max_denominator", where, default=4096, minimum=1),
        "nodes": _integer(cfg, "nodes", where, minimum=2),
        "alpha": _number(cfg, "alpha", where, default=0.0),
        "h0": _number(cfg, "h0", where, positive=True),
        "halvings": _integer(cfg, "halvings", where, default=4, minimum=2),
        "tolerances": _tolerances(cfg, "continuum-check"),
    }
