import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from .errors import ParameterError
from .grid import Grid
from .scarf2 import Branch, PotentialParams

OUTPUT_FORMATS = ("csv", "json")


@dataclass
class ModelConfig:
    v1: float = 24.0
    v2: complex = 18.0
    m: int = 0
    branch: Optional[Branch] = None

    def params(self) -> PotentialParams:
        return PotentialParams(self.v1, self.v2)


@dataclass
class GridConfig:
    half_width: float = 12.0
    n_points: int = 1201

    def grid(self) -> Grid:
        return Grid(self.half_width, self.n_points)


@dataclass
class TableConfig:
    x_min: float = -5.0
    x_max: float = 5.0
    samples: int = 501


@dataclass
class OutputConfig:
    format: str = "csv"
    path: Optional[str] = None
    figures_dir: str = "figures"


@dataclass
class BrokenReferenceConfig:
    enabled: bool = True
    v1: float = 6.0
    v2: float = 8.0
    m: int = 0
    branch: Branch = Branch.MINUS
    grid: GridConfig = field(default_factory=lambda: GridConfig(30.0, 1201))
    level_tol: float = 1e-2


@dataclass
class VerificationConfig:
    m_values: List[int] = field(default_factory=lambda: [0, 1, 2])
    level_tol: float = 5e-3
    deletion_gap: float = 0.1
    match_tol: float = 0.5
    edge_tol: float = 1e-4
    residual_tol: float = 1e-8
    pt_tol: float = 1e-12
    closed_form_tol: float = 1e-10
    intertwining_tol: float = 1e-6
    block_tol: float = 1e-8
    operator_half_width: float = 6.0
    operator_step: float = 0.01
    bumps: int = 10
    bump_seed: int = 7
    richardson: bool = True
    convergence_grid: GridConfig = field(default_factory=lambda: GridConfig(8.0, 401))
    broken_reference: BrokenReferenceConfig = field(default_factory=BrokenReferenceConfig)


@dataclass
class LoggingConfig:
    log_dir: str = "logs"
    level: str = "INFO"
    name: str = "scarf"


@dataclass
class RunConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    table: TableConfig = field(default_factory=TableConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    verification: VerificationConfig = field(default_factory=VerificationConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    numeric: bool = False
    richardson: bool = False


def parse_coupling(value: Any) -> complex:
    """
    Real literals ("18", "-2.5") or imaginary ones ("3i", "0+3i", "2j").
    Mixed values are rejected here, before any model is built.
    """
    if isinstance(value, (int, float)):
        return complex(float(value))
    text = str(value).strip().replace(" ", "").replace("i", "j")
    try:
        number = complex(text)
    except ValueError as exc:
        raise ParameterError(f"cannot parse coupling {value!r}; use a real number or an a+bi literal") from exc
    if number.real != 0 and number.imag != 0:
        raise ParameterError(f"v2={value} mixes real and imaginary parts; it must be purely real or purely imaginary")
    return number


def parse_branch(value: Any) -> Optional[Branch]:
    if value is None or isinstance(value, Branch):
        return value
    text = str(value).lower()
    if text not in (Branch.PLUS.value, Branch.MINUS.value):
        raise ParameterError(f"branch must be 'plus' or 'minus', got {value!r}")
    return Branch(text)


def _parse_grid(cfg: Dict[str, Any], default: GridConfig) -> GridConfig:
    return GridConfig(
        half_width=float(cfg.get("half_width", default.half_width)),
        n_points=int(cfg.get("n_points", default.n_points)),
    )


def _parse_model(cfg: Dict[str, Any]) -> ModelConfig:
    return ModelConfig(
        v1=float(cfg.get("v1", 24.0)),
        v2=parse_coupling(cfg.get("v2", 18.0)),
        m=int(cfg.get("m", 0)),
        branch=parse_branch(cfg.get("branch")),
    )


def _parse_table(cfg: Dict[str, Any]) -> TableConfig:
    return TableConfig(
        x_min=float(cfg.get("x_min", -5.0)),
        x_max=float(cfg.get("x_max", 5.0)),
        samples=int(cfg.get("samples", 501)),
    )


def _parse_output(cfg: Dict[str, Any]) -> OutputConfig:
    return OutputConfig(
        format=str(cfg.get("format", "csv")).lower(),
        path=cfg.get("path"),
        figures_dir=cfg.get("figures_dir", "figures"),
    )


def _parse_broken(cfg: Dict[str, Any]) -> BrokenReferenceConfig:
    default = BrokenReferenceConfig()
    return BrokenReferenceConfig(
        enabled=bool(cfg.get("enabled", True)),
        v1=float(cfg.get("v1", default.v1)),
        v2=float(cfg.get("v2", default.v2)),
        m=int(cfg.get("m", default.m)),
        branch=parse_branch(cfg.get("branch", "minus")),
        grid=_parse_grid(cfg.get("grid", {}), default.grid),
        level_tol=float(cfg.get("level_tol", default.level_tol)),
    )


def _parse_verification(cfg: Dict[str, Any]) -> VerificationConfig:
    default = VerificationConfig()
    return VerificationConfig(
        m_values=[int(m) for m in cfg.get("m_values", default.m_values)],
        level_tol=float(cfg.get("level_tol", default.level_tol)),
        deletion_gap=float(cfg.get("deletion_gap", default.deletion_gap)),
        match_tol=float(cfg.get("match_tol", default.match_tol)),
        edge_tol=float(cfg.get("edge_tol", default.edge_tol)),
        residual_tol=float(cfg.get("residual_tol", default.residual_tol)),
        pt_tol=float(cfg.get("pt_tol", default.pt_tol)),
        closed_form_tol=float(cfg.get("closed_form_tol", default.closed_form_tol)),
        intertwining_tol=float(cfg.get("intertwining_tol", default.intertwining_tol)),
        block_tol=float(cfg.get("block_tol", default.block_tol)),
        operator_half_width=float(cfg.get("operator_half_width", default.operator_half_width)),
        operator_step=float(cfg.get("operator_step", default.operator_step)),
        bumps=int(cfg.get("bumps", default.bumps)),
        bump_seed=int(cfg.get("bump_seed", default.bump_seed)),
        richardson=bool(cfg.get("richardson", default.richardson)),
        convergence_grid=_parse_grid(cfg.get("convergence_grid", {}), default.convergence_grid),
        broken_reference=_parse_broken(cfg.get("broken_reference", {})),
    )


def _parse_logging(cfg: Dict[str, Any]) -> LoggingConfig:
    return LoggingConfig(
        log_dir=cfg.get("log_dir", "logs"),
        level=str(cfg.get("level", "INFO")).upper(),
        name=cfg.get("name", "scarf"),
    )


def validate(cfg: RunConfig) -> RunConfig:
    cfg.model.params()
    cfg.grid.grid()
    if cfg.table.samples < 2:
        raise ParameterError(f"table sample count must be >= 2, got {cfg.table.samples}")
    if not cfg.table.x_min < cfg.table.x_max:
        raise ParameterError(f"x-min must be below x-max, got [{cfg.table.x_min}, {cfg.table.x_max}]")
    if cfg.output.format not in OUTPUT_FORMATS:
        raise ParameterError(f"output format must be one of {OUTPUT_FORMATS}, got {cfg.output.format!r}")
    if cfg.model.m < 0:
        raise ParameterError(f"seed index m must be >= 0, got {cfg.model.m}")
    return cfg


def apply_env(cfg: RunConfig) -> RunConfig:
    cfg.logging.log_dir = os.getenv("SCARF_LOG_DIR", cfg.logging.log_dir)
    cfg.logging.level = os.getenv("SCARF_LOG_LEVEL", cfg.logging.level).upper()
    return cfg


def apply_overrides(cfg: RunConfig, args: Any) -> RunConfig:
    """Fold command-line flags (None means 'not given') over the file values."""

    def _given(name: str) -> bool:
        return getattr(args, name, None) is not None

    if _given("v1"):
        cfg.model.v1 = float(args.v1)
    if _given("v2"):
        cfg.model.v2 = parse_coupling(args.v2)
    if _given("m"):
        cfg.model.m = int(args.m)
        cfg.verification.m_values = [cfg.model.m]
    if _given("branch"):
        cfg.model.branch = parse_branch(args.branch)
    if _given("grid_l"):
        cfg.grid.half_width = float(args.grid_l)
    if _given("grid_n"):
        cfg.grid.n_points = int(args.grid_n)
    if _given("x_min"):
        cfg.table.x_min = float(args.x_min)
    if _given("x_max"):
        cfg.table.x_max = float(args.x_max)
    if _given("samples"):
        cfg.table.samples = int(args.samples)
    if _given("format"):
        cfg.output.format = args.format
    if _given("out"):
        cfg.output.path = args.out
    if getattr(args, "numeric", False):
        cfg.numeric = True
    if getattr(args, "richardson", False):
        cfg.numeric = True
        cfg.richardson = True
    return validate(cfg)


def load_config(path: Optional[str | Path]) -> RunConfig:
    if path is None:
        return apply_env(RunConfig())
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as exc:
        raise ParameterError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"config file {path} is not valid JSON: {exc}") from exc
    cfg = RunConfig(
        model=_parse_model(data.get("model", {})),
        grid=_parse_grid(data.get("grid", {}), GridConfig()),
        table=_parse_table(data.get("table", {})),
        output=_parse_output(data.get("output", {})),
        verification=_parse_verification(data.get("verification", {})),
        logging=_parse_logging(data.get("logging", {})),
        numeric=bool(data.get("numeric", False)),
        richardson=bool(data.get("richardson", False)),
    )
    return apply_env(cfg)
