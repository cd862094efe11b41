# diracl2/config.py
"""
Configuration loader/saver backed by JSON, plus the validated RunConfig used by the CLI.
"""

from __future__ import annotations

import copy
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

from .errors import ConfigError
from .util.logger import get_logger

ROOT_DIR = Path(__file__).parent
CONFIG_FILE = ROOT_DIR / "config.json"

logger = get_logger("diracl2.config")

DEFAULT_CONFIG: Dict[str, Any] = {
    "algebra": {
        "max_n": 12,
        "sign_table_max_n": 8,  # 2^8 x 2^8 int8 table
    },
    "verify": {
        "max_n": 6,
        "trials": 1000,
        "seed": 0,
        "exhaustive_limit": 1_000_000,
        "coeff_bound": 9,
    },
    "grid": {
        "default_nodes": 33,
        "default_low": -1.0,
        "default_high": 1.0,
        "desk_caps": {"1": 257, "2": 49, "3": 17},
    },
    "bump": {
        "margin": 0.2,
    },
    "solver": {
        "tol": 1e-10,
        "max_iter": 0,  # 0 -> 10 * sqrt(unknowns)
        "bound_slack": 1e-3,
        "necessity_slack": 1e-2,
        "necessity_alphas": 20,
        "minimality_samples": 3,
    },
    "kernel": {
        "r_in": 0.25,
        "r_out": 0.75,
        "amplitude": 1.0,
        "defect_tolerance": 0.05,
    },
    "sweep": {
        "levels": 3,
        "points_per_unit": 8,
    },
    "report": {
        "csv_precision": 12,
    },
}


def _deep_merge_defaults(data: Dict[str, Any], defaults: Dict[str, Any]) -> Dict[str, Any]:
    out = copy.deepcopy(defaults)
    for k, v in (data or {}).items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _deep_merge_defaults(v, out[k])
        else:
            out[k] = v
    return out


def ensure_config_file(path: Path = CONFIG_FILE) -> None:
    """Create config file with defaults if it does not exist."""
    if not path.exists():
        save_config(DEFAULT_CONFIG, path)


def load_config(path: Optional[Path] = None) -> Dict[str, Any]:
    path = Path(path) if path is not None else CONFIG_FILE
    if path == CONFIG_FILE:
        ensure_config_file(path)
    with path.open("r", encoding="utf-8") as f:
        data = json.load(f)
    # missing keys fall back to defaults
    return _deep_merge_defaults(data, DEFAULT_CONFIG)


def save_config(data: Dict[str, Any], path: Path = CONFIG_FILE) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        json.dump(data, f, ensure_ascii=False, indent=2)


_CONFIG_CACHE = load_config()

MAX_N = int(_CONFIG_CACHE["algebra"]["max_n"])
SIGN_TABLE_MAX_N = int(_CONFIG_CACHE["algebra"]["sign_table_max_n"])
VERIFY_MAX_N = int(_CONFIG_CACHE["verify"]["max_n"])
COEFF_BOUND = int(_CONFIG_CACHE["verify"]["coeff_bound"])
EXHAUSTIVE_LIMIT = int(_CONFIG_CACHE["verify"]["exhaustive_limit"])
BOUND_SLACK = float(_CONFIG_CACHE["solver"]["bound_slack"])
NECESSITY_SLACK = float(_CONFIG_CACHE["solver"]["necessity_slack"])
DEFAULT_TOL = float(_CONFIG_CACHE["solver"]["tol"])
DEFAULT_MARGIN = float(_CONFIG_CACHE["bump"]["margin"])
DESK_CAPS = {int(k): int(v) for k, v in _CONFIG_CACHE["grid"]["desk_caps"].items()}


# ---------------------------------------------------------------------------
# flat key=value override files
# ---------------------------------------------------------------------------

def read_flat_file(path: Path) -> Dict[str, str]:
    """Parse a key=value file; '#' starts a comment, blank lines are ignored."""
    out: Dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        out[key] = value.strip()
    return out


def apply_dotted(settings: Dict[str, Any], key: str, raw: str) -> None:
    """Override a nested default such as 'solver.bound_slack' in place."""
    parts = key.split(".")
    node: Any = settings
    for part in parts[:-1]:
        if not isinstance(node, dict) or part not in node:
            raise ConfigError(f"unknown config key: {key}")
        node = node[part]
    leaf = parts[-1]
    if not isinstance(node, dict) or leaf not in node:
        raise ConfigError(f"unknown config key: {key}")
    current = node[leaf]
    try:
        if isinstance(current, bool):
            node[leaf] = raw.lower() in ("1", "true", "yes", "on")
        elif isinstance(current, int):
            node[leaf] = int(raw)
        elif isinstance(current, float):
            node[leaf] = float(raw)
        elif isinstance(current, dict):
            raise ConfigError(f"config key {key} names a section, not a value")
        else:
            node[leaf] = raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


# ---------------------------------------------------------------------------
# flag grammar
# ---------------------------------------------------------------------------

def parse_grid(text: str) -> Tuple[int, ...]:
    """'129,129' -> (129, 129)."""
    try:
        return tuple(int(tok) for tok in str(text).split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"bad --grid {text!r}: expected comma-separated node counts") from exc


def parse_domain(text: str) -> Tuple[Tuple[float, float], ...]:
    """'-1:1,-1:1' -> ((-1.0, 1.0), (-1.0, 1.0))."""
    out = []
    for tok in str(text).split(","):
        tok = tok.strip()
        if not tok:
            continue
        # highs never start with ':' so the last one separates the pair
        idx = tok.rfind(":")
        if idx <= 0:
            raise ConfigError(f"bad --domain entry {tok!r}: expected low:high")
        try:
            out.append((float(tok[:idx]), float(tok[idx + 1:])))
        except ValueError as exc:
            raise ConfigError(f"bad --domain entry {tok!r}") from exc
    return tuple(out)


def parse_floats(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in str(text).split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


def parse_rhs(text: str) -> Tuple[str, str]:
    """'bump:e12' -> ('bump', 'e12'); a bare family defaults to the e0 component."""
    family, _, comp = str(text).partition(":")
    family = family.strip().lower()
    comp = comp.strip() or "e0"
    if family not in ("bump", "zero"):
        raise ConfigError(f"unknown rhs family {family!r} (expected bump or zero)")
    return family, comp


# ---------------------------------------------------------------------------
# RunConfig
# ---------------------------------------------------------------------------

COMMANDS = ("verify", "solve", "kernel", "sweep")

# keys a flat config file may set directly on RunConfig
RUN_KEYS = (
    "n", "grid", "domain", "weight", "weight_params", "rhs", "rhs_scale", "rhs_center",
    "margin", "tol", "max_iter", "seed", "trials", "output", "levels", "radii",
)


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int
    grid: Tuple[int, ...]
    domain: Tuple[Tuple[float, float], ...]
    weight: str = "quadratic0"
    weight_params: Tuple[float, ...] = ()
    rhs: str = "bump:e0"
    rhs_scale: float = 1.0
    rhs_center: Optional[Tuple[float, ...]] = None
    margin: float = 0.2
    tol: float = 1e-10
    max_iter: int = 0
    seed: int = 0
    trials: int = 1000
    output: Optional[str] = None
    levels: int = 3
    radii: Tuple[float, ...] = ()
    settings: Dict[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def from_mapping(cls, command: str, values: Mapping[str, Any],
                     settings: Optional[Dict[str, Any]] = None) -> "RunConfig":
        """
        Build from already-merged raw values (strings from flags/files or typed values).
        Missing entries fall back to the settings defaults.
        """
        settings = _deep_merge_defaults(settings or {}, _CONFIG_CACHE)
        if command not in COMMANDS:
            raise ConfigError(f"unknown command {command!r}")
        try:
            n = int(values.get("n", 1))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad n: {values.get('n')!r}") from exc

        grid_raw = values.get("grid")
        if grid_raw is None or grid_raw == "":
            nodes = int(settings["grid"]["default_nodes"])
            cap = DESK_CAPS.get(n)
            if cap is not None:
                nodes = min(nodes, cap)
            grid = tuple([nodes] * (n + 1))
        elif isinstance(grid_raw, str):
            grid = parse_grid(grid_raw)
        else:
            grid = tuple(int(v) for v in grid_raw)

        dom_raw = values.get("domain")
        if dom_raw is None or dom_raw == "":
            lo = float(settings["grid"]["default_low"])
            hi = float(settings["grid"]["default_high"])
            domain = tuple([(lo, hi)] * (n + 1))
        elif isinstance(dom_raw, str):
            domain = parse_domain(dom_raw)
        else:
            domain = tuple((float(a), float(b)) for a, b in dom_raw)

        radii_raw = values.get("radii", ())
        radii = parse_floats(radii_raw) if isinstance(radii_raw, str) else tuple(float(v) for v in radii_raw)

        wp_raw = values.get("weight_params", ())
        weight_params = parse_floats(wp_raw) if isinstance(wp_raw, str) else tuple(float(v) for v in wp_raw)

        center_raw = values.get("rhs_center")
        if center_raw is None or center_raw == "":
            rhs_center = None
        elif isinstance(center_raw, str):
            rhs_center = parse_floats(center_raw)
        else:
            rhs_center = tuple(float(v) for v in center_raw)

        try:
            cfg = cls(
                command=command,
                n=n,
                grid=grid,
                domain=domain,
                weight=str(values.get("weight", "quadratic0")).lower(),
                weight_params=weight_params,
                rhs=str(values.get("rhs", "bump:e0")),
                rhs_scale=float(values.get("rhs_scale", 1.0)),
                rhs_center=rhs_center,
                margin=float(values.get("margin", settings["bump"]["margin"])),
                tol=float(values.get("tol", settings["solver"]["tol"])),
                max_iter=int(values.get("max_iter", settings["solver"]["max_iter"])),
                seed=int(values.get("seed", settings["verify"]["seed"])),
                trials=int(values.get("trials", settings["verify"]["trials"])),
                output=values.get("output") or None,
                levels=int(values.get("levels", settings["sweep"]["levels"])),
                radii=radii,
                settings=settings,
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad configuration value: {exc}") from exc
        cfg.validate()
        return cfg

    def validate(self) -> None:
        """All numeric parameters are checked here, before any computation."""
        max_n = int(self.settings.get("algebra", {}).get("max_n", MAX_N))
        if not 1 <= self.n <= max_n:
            raise ConfigError(f"n={self.n} outside supported range 1..{max_n}")
        if self.command == "verify":
            vmax = int(self.settings.get("verify", {}).get("max_n", VERIFY_MAX_N))
            if self.n > vmax:
                raise ConfigError(f"verify supports n <= {vmax}, got n={self.n}")
            if self.trials < 1:
                raise ConfigError("trials must be >= 1")
            return

        caps = {int(k): int(v) for k, v in self.settings.get("grid", {}).get("desk_caps", {}).items()}
        if self.n not in caps:
            raise ConfigError(f"{self.command} supports n in {sorted(caps)}, got n={self.n}")
        if len(self.grid) != self.n + 1:
            raise ConfigError(f"--grid needs {self.n + 1} node counts, got {len(self.grid)}")
        for N in self.grid:
            if N < 3:
                raise ConfigError(f"every axis needs at least 3 nodes, got {N}")
            if N > caps[self.n]:
                raise ConfigError(f"grid extent {N} exceeds desk cap {caps[self.n]} for n={self.n}")
        if len(self.domain) != self.n + 1:
            raise ConfigError(f"--domain needs {self.n + 1} intervals, got {len(self.domain)}")
        for lo, hi in self.domain:
            if not lo < hi:
                raise ConfigError(f"domain interval {lo}:{hi} is empty")
        if not 0.0 < self.margin < 0.5:
            raise ConfigError(f"margin must lie in (0, 0.5), got {self.margin}")
        if not self.tol > 0.0:
            raise ConfigError("tol must be > 0")
        if self.max_iter < 0:
            raise ConfigError("max_iter must be >= 0")
        if self.command == "sweep" and self.levels < 2:
            raise ConfigError("sweep needs at least 2 levels")
        if any(not r > 0.0 for r in self.radii):
            raise ConfigError("box radii must be > 0")
        if self.rhs_center is not None and len(self.rhs_center) != self.n + 1:
            raise ConfigError(f"rhs_center needs {self.n + 1} coordinates")
        if self.rhs_scale <= 0.0:
            raise ConfigError("rhs_scale must be > 0")
        parse_rhs(self.rhs)

    def to_dict(self) -> Dict[str, Any]:
        """Report view of the run; the output path is left out so reports do not depend on it."""
        d = asdict(self)
        d.pop("output", None)
        d["grid"] = list(self.grid)
        d["domain"] = [list(p) for p in self.domain]
        d["weight_params"] = list(self.weight_params)
        d["radii"] = list(self.radii)
        d["rhs_center"] = list(self.rhs_center) if self.rhs_center is not None else None
        return d


def resolve_run_config(command: str, flag_values: Mapping[str, Any],
                       config_path: Optional[str] = None) -> RunConfig:
    """
    Merge order: config.json defaults < --config file < explicit flags.
    """
    settings = copy.deepcopy(_CONFIG_CACHE)
    values: Dict[str, Any] = {}
    if config_path:
        for key, raw in read_flat_file(Path(config_path)).items():
            if "." in key:
                apply_dotted(settings, key, raw)
            elif key in RUN_KEYS:
                values[key] = raw
            else:
                raise ConfigError(f"unknown config key: {key}")
    for key, val in flag_values.items():
        if val is not None:
            values[key] = val
    cfg = RunConfig.from_mapping(command, values, settings)
    logger.info("resolved %s config: n=%s grid=%s weight=%s", command, cfg.n, cfg.grid, cfg.weight)
    return cfg
