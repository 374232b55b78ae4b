from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
from numpy.typing import NDArray

from .errors import ParameterError


@dataclass(frozen=True)
class Grid:
    """
    Uniform grid on [-L, L] with an odd node count, so 0 is a node and the node
    set is exactly symmetric (nodes are h*k for integer k).
    """

    half_width: float
    n_points: int

    def __post_init__(self) -> None:
        if not self.half_width > 0:
            raise ParameterError(f"grid half-width must be > 0, got {self.half_width}")
        if self.n_points < 5 or self.n_points % 2 == 0:
            raise ParameterError(f"grid node count must be odd and >= 5, got {self.n_points}")

    @classmethod
    def from_step(cls, half_width: float, step: float) -> "Grid":
        half_count = int(round(half_width / step))
        return cls(half_count * step, 2 * half_count + 1)

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / (self.n_points - 1)

    @property
    def nodes(self) -> NDArray[np.float64]:
        half_count = (self.n_points - 1) // 2
        return self.step * np.arange(-half_count, half_count + 1, dtype=float)

    @property
    def interior(self) -> NDArray[np.float64]:
        return self.nodes[1:-1]

    def refined(self) -> "Grid":
        return Grid(self.half_width, 2 * self.n_points - 1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "half_width": self.half_width,
            "n_points": self.n_points,
            "step": self.step,
        }

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> "Grid":
        return Grid(
            half_width=float(data.get("half_width", 12.0)),
            n_points=int(data.get("n_points", 1201)),
        )


@dataclass(frozen=True)
class SampledFunction:
    grid: Grid
    values: NDArray[np.complex128]

    def __post_init__(self) -> None:
        if len(self.values) != self.grid.n_points:
            raise ParameterError(
                f"sampled function has {len(self.values)} values for {self.grid.n_points} nodes"
            )
