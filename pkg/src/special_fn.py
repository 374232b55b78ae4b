"""
Complex special functions for the closed-form Scarf II eigenfunctions.

Everything here is a pure function of its inputs. Arguments named ``z``/``y``
accept a scalar or a numpy array; parameters (degree, ``b``, ``c``, ``alpha``,
``beta``) are scalars.
"""
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.special
from numpy.typing import ArrayLike, NDArray

from .errors import PoleError

ComplexOrArray = Union[complex, NDArray[np.complex128]]

POLE_TOL = 1e-12

_EXACT_FACTORIALS = tuple(float(math.factorial(k)) for k in range(21))


@dataclass(frozen=True)
class JacobiIndex:
    n: int
    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"Jacobi degree must be >= 0, got {self.n}")

    def shifted(self, k: int) -> "JacobiIndex":
        return JacobiIndex(self.n - k, self.alpha + k, self.beta + k)


def _wrap(values: NDArray[np.complex128], scalar: bool) -> ComplexOrArray:
    if scalar:
        return complex(values.reshape(-1)[0])
    return values


def gamma_complex(zc: complex) -> complex:
    """Gamma of a complex argument; poles raise PoleError instead of returning inf."""
    zc = complex(zc)
    if not (math.isfinite(zc.real) and math.isfinite(zc.imag)):
        raise PoleError(f"gamma argument is not finite: {zc}")
    nearest = round(zc.real)
    if nearest <= 0 and abs(zc - nearest) < POLE_TOL:
        raise PoleError(f"gamma pole at {zc} (nonpositive integer {nearest})")
    if zc.imag == 0.0 and zc.real == nearest and 0 < nearest <= len(_EXACT_FACTORIALS):
        return complex(_EXACT_FACTORIALS[nearest - 1])
    if zc.imag == 0.0:
        return complex(scipy.special.gamma(zc.real))
    return complex(scipy.special.gamma(zc))


def hyp2f1_terminating(m: int, b: complex, c: complex, z: ArrayLike) -> ComplexOrArray:
    """
    F(-m, b; c; z) as the finite sum over k = 0..m, accumulated with running
    Pochhammer ratios so no gamma function is ever evaluated.
    """
    if m < 0:
        raise ValueError(f"terminating series needs m >= 0, got {m}")
    b = complex(b)
    c = complex(c)
    for k in range(m):
        if abs(c + k) < POLE_TOL:
            raise PoleError(f"Pochhammer (c)_k vanishes: c={c}, k={k + 1}, m={m}")
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    term = np.ones_like(zz)
    total = np.ones_like(zz)
    for k in range(m):
        term = term * (((k - m) * (b + k)) / ((c + k) * (k + 1))) * zz
        total = total + term
    return _wrap(total, scalar)


def hyp2f1_terminating_derivative(m: int, b: complex, c: complex, z: ArrayLike) -> ComplexOrArray:
    """d/dz F(-m, b; c; z) = (-m b / c) F(-m+1, b+1; c+1; z)."""
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if m == 0:
        return _wrap(np.zeros_like(zz), scalar)
    if abs(complex(c)) < POLE_TOL:
        raise PoleError(f"derivative prefactor has c={c}")
    inner = np.asarray(hyp2f1_terminating(m - 1, b + 1, c + 1, zz))
    return _wrap((-m * complex(b) / complex(c)) * inner, scalar)


def jacobi_p(idx: JacobiIndex, y: ArrayLike) -> ComplexOrArray:
    """
    P_n^{alpha,beta}(y) = Gamma(n+alpha+1)/(n! Gamma(alpha+1)) F(-n, n+alpha+beta+1; alpha+1; (1-y)/2).
    """
    n, alpha, beta = idx.n, complex(idx.alpha), complex(idx.beta)
    scalar = np.ndim(y) == 0
    yy = np.atleast_1d(np.asarray(y, dtype=np.complex128))
    if n == 0:
        return _wrap(np.ones_like(yy), scalar)
    prefactor = gamma_complex(n + alpha + 1.0) / (math.factorial(n) * gamma_complex(alpha + 1.0))
    series = np.asarray(hyp2f1_terminating(n, n + alpha + beta + 1.0, alpha + 1.0, (1.0 - yy) / 2.0))
    return _wrap(prefactor * series, scalar)


def jacobi_p_derivative(idx: JacobiIndex, y: ArrayLike, order: int = 1) -> ComplexOrArray:
    """
    d^k/dy^k P_n^{alpha,beta}(y) = prod_{j=1..k} (n+alpha+beta+j)/2 * P_{n-k}^{alpha+k,beta+k}(y).
    """
    if order < 0:
        raise ValueError(f"derivative order must be >= 0, got {order}")
    scalar = np.ndim(y) == 0
    yy = np.atleast_1d(np.asarray(y, dtype=np.complex128))
    if order == 0:
        return _wrap(np.asarray(jacobi_p(idx, yy)), scalar)
    if order > idx.n:
        return _wrap(np.zeros_like(yy), scalar)
    factor = complex(1.0)
    s = idx.n + complex(idx.alpha) + complex(idx.beta)
    for j in range(1, order + 1):
        factor *= (s + j) / 2.0
    lowered = np.asarray(jacobi_p(idx.shifted(order), yy))
    return _wrap(factor * lowered, scalar)
