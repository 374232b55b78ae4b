import numpy as np
from numpy.typing import ArrayLike, NDArray


def sech(x: ArrayLike) -> NDArray[np.float64]:
    # 2 e^{-|x|} / (1 + e^{-2|x|}) never overflows
    ax = np.abs(np.asarray(x, dtype=float))
    e = np.exp(-ax)
    return 2.0 * e / (1.0 + e * e)


def tanh(x: ArrayLike) -> NDArray[np.float64]:
    return np.tanh(np.asarray(x, dtype=float))


def sample_axis(x_min: float, x_max: float, samples: int) -> NDArray[np.float64]:
    """
    Evenly spaced samples; exactly antisymmetric when x_min == -x_max.
    """
    if samples < 2:
        raise ValueError("samples must be >= 2")
    mid = 0.5 * (x_min + x_max)
    half = 0.5 * (x_max - x_min)
    k = np.arange(samples, dtype=float)
    return mid + half * ((2.0 * k - (samples - 1)) / (samples - 1))


def format_number(value: float) -> str:
    return f"{value:.17g}"


def relative_sup(residual: ArrayLike, scale: ArrayLike) -> float:
    res = float(np.max(np.abs(residual)))
    ref = float(np.max(np.abs(scale)))
    if ref == 0.0:
        return res
    return res / ref
