"""
The complexified Scarf II model

    V(x) = -v1 sech^2 x - i v2 sech x tanh x        (hbar = 2m = 1)

with its parameter derivation, PT regime classification and the analytic bound
states psi_n = N_n z^{-p} (z*)^{-q} P_n^{-2p-1/2, -2q-1/2}(i sinh x),
z = (1 - i sinh x)/2.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import LevelError, ParameterError, RegimeError
from .special_fn import JacobiIndex, gamma_complex, jacobi_p, jacobi_p_derivative
from .utils import sech, tanh

log = logging.getLogger(__name__)

ComplexFn = Callable[[ArrayLike], NDArray[np.complex128]]

# criterion n < re(p + q) compared with this slack so p + q = 4.0000000001 keeps 4 levels
_LEVEL_SLACK = 1e-12


class RegimeClass(str, Enum):
    UNBROKEN_PT = "UnbrokenPT"
    BROKEN_PT = "BrokenPT"
    REAL_POTENTIAL = "RealPotential"


class Branch(str, Enum):
    PLUS = "plus"
    MINUS = "minus"
    SINGLE = "single"
    SECOND = "second"


@dataclass(frozen=True)
class PotentialParams:
    v1: float
    v2: complex

    def __post_init__(self) -> None:
        v1 = float(self.v1)
        v2 = complex(self.v2)
        if not (math.isfinite(v1) and math.isfinite(v2.real) and math.isfinite(v2.imag)):
            raise ParameterError("v1 and v2 must be finite")
        if v1 <= 0:
            raise ParameterError(f"v1 > 0 required, got {v1}")
        if v2 == 0:
            raise ParameterError("v2 != 0 required")
        if v2.real != 0 and v2.imag != 0:
            raise ParameterError(
                f"v2 must be purely real or purely imaginary, got {v2} (a mixed v2 breaks PT invariance)"
            )
        object.__setattr__(self, "v1", v1)
        object.__setattr__(self, "v2", v2)

    @property
    def v2_is_real(self) -> bool:
        return self.v2.imag == 0


@dataclass(frozen=True)
class SpectralParams:
    t: float
    s: float
    p: complex
    q_plus: complex
    q_minus: complex
    n_max: int
    regime: RegimeClass
    # v2 < 0 in the broken regime: built from |v2| and evaluated at -x
    mirrored: bool = False

    def q(self, branch: Branch) -> complex:
        if self.regime == RegimeClass.UNBROKEN_PT or branch == Branch.PLUS:
            return self.q_plus
        if branch == Branch.MINUS:
            return self.q_minus
        raise RegimeError("broken regime needs an explicit plus/minus branch")

    def second_series_sum(self) -> float:
        """p + q for the series with the smaller of t, s taken negative: -1/2 + |t - s|/2."""
        return -0.5 + 0.5 * abs(self.t - self.s)

    def second_series_count(self) -> int:
        # at s = 0 both quasi-parities give the same levels
        if self.regime != RegimeClass.UNBROKEN_PT or self.s == 0.0:
            return 0
        return _count_levels(complex(self.second_series_sum()))

    def branches(self) -> List[Branch]:
        if self.regime == RegimeClass.BROKEN_PT:
            return [Branch.PLUS, Branch.MINUS]
        return [Branch.SINGLE]

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "t": self.t,
            "s": self.s,
            "p": _split(self.p),
            "q_plus": _split(self.q_plus),
            "q_minus": _split(self.q_minus),
            "n_max": self.n_max,
            "mirrored": self.mirrored,
            "second_series": self.second_series_count(),
        }


@dataclass(frozen=True)
class SpectrumEntry:
    n: int
    branch: Branch
    energy: complex


@dataclass(frozen=True)
class WaveFunction:
    n: int
    energy: complex
    value: ComplexFn
    deriv: ComplexFn
    deriv2: ComplexFn
    deriv3: Optional[ComplexFn] = None
    branch: Branch = Branch.SINGLE


def _split(value: complex) -> List[float]:
    return [value.real, value.imag]


def classify(params: PotentialParams) -> RegimeClass:
    if not params.v2_is_real:
        return RegimeClass.REAL_POTENTIAL
    if abs(params.v2.real) <= params.v1 + 0.25:
        return RegimeClass.UNBROKEN_PT
    return RegimeClass.BROKEN_PT


def _count_levels(p_plus_q: complex) -> int:
    bound = p_plus_q.real - _LEVEL_SLACK
    return max(0, math.ceil(bound))


def derive_params(params: PotentialParams) -> SpectralParams:
    regime = classify(params)
    if regime == RegimeClass.REAL_POTENTIAL:
        raise RegimeError("purely imaginary v2 gives a real potential; only classification is supported")
    v1 = params.v1
    v2 = params.v2.real
    if regime == RegimeClass.UNBROKEN_PT:
        t = math.sqrt(0.25 + v1 + v2)
        s = math.sqrt(max(0.0, 0.25 + v1 - v2))
        p = complex(-0.25 + t / 2.0)
        q = complex(-0.25 + s / 2.0)
        sp = SpectralParams(t, s, p, q, q, _count_levels(p + q), regime)
    else:
        mirrored = v2 < 0
        v2 = abs(v2)
        t = math.sqrt(0.25 + v1 + v2)
        s = math.sqrt(v2 - v1 - 0.25)
        p = complex(-0.25 + t / 2.0)
        q_plus = complex(-0.25, s / 2.0)
        q_minus = complex(-0.25, -s / 2.0)
        sp = SpectralParams(t, s, p, q_plus, q_minus, _count_levels(p + q_plus), regime, mirrored)
    log.debug("Derived spectral parameters for v1=%s v2=%s: %s", v1, params.v2, sp)
    return sp


def potential(params: PotentialParams, x: ArrayLike) -> NDArray[np.complex128]:
    sh = sech(x)
    return -params.v1 * sh * sh - 1j * params.v2 * sh * tanh(x)


def energy(sp: SpectralParams, n: int, branch: Branch = Branch.SINGLE) -> complex:
    if n < 0 or n >= sp.n_max:
        raise LevelError(f"level n={n} is not normalizable (n_max={sp.n_max})")
    return -((n - sp.p - sp.q(branch)) ** 2)


def conjugate_pair_shorthand(sp: SpectralParams, n: int, branch: Branch) -> complex:
    """
    Shorthand -mu_n^2 +/- i mu_n s for the broken regime, mu_n = n - p + 1/4.
    It omits the +s^2/4 carried by -(n - p - q)^2 and is kept only for comparison.
    """
    if sp.regime != RegimeClass.BROKEN_PT:
        raise RegimeError("conjugate-pair energies exist only in the broken regime")
    mu = n - sp.p.real + 0.25
    sign = 1.0 if branch == Branch.PLUS else -1.0
    return complex(-mu * mu, sign * mu * sp.s)


def second_series(sp: SpectralParams) -> List[SpectrumEntry]:
    """
    Levels -(n - p - q)^2 of the other quasi-parity, q -> -1/4 - s/2 (or p -> -1/4 - t/2
    when s > t). They exist only in the unbroken regime and are not seeds for partners.
    """
    total = sp.second_series_sum()
    return [
        SpectrumEntry(n, Branch.SECOND, complex(-((n - total) ** 2)))
        for n in range(sp.second_series_count())
    ]


def spectrum(sp: SpectralParams) -> List[SpectrumEntry]:
    return [
        SpectrumEntry(n, branch, energy(sp, n, branch))
        for branch in sp.branches()
        for n in range(sp.n_max)
    ]


def eigenfunction(
    params: PotentialParams, sp: SpectralParams, n: int, branch: Branch = Branch.SINGLE
) -> WaveFunction:
    e_n = energy(sp, n, branch)
    p = sp.p
    q = sp.q(branch)
    idx = JacobiIndex(n, -2.0 * p - 0.5, -2.0 * q - 0.5)
    norm = gamma_complex(n - 2.0 * p + 0.5) / (math.factorial(n) * gamma_complex(0.5 - 2.0 * p))
    plus, minus = p + q, p - q

    def _envelope(x: NDArray[np.float64]) -> NDArray[np.complex128]:
        ish = 1j * np.sinh(x)
        return np.exp(-p * np.log((1.0 - ish) / 2.0) - q * np.log((1.0 + ish) / 2.0))

    def _log_slopes(x: NDArray[np.float64]):
        # l = (log envelope)' and its first two derivatives
        sh, th = sech(x), tanh(x)
        ell = -plus * th + 1j * minus * sh
        ell1 = -plus * sh * sh - 1j * minus * sh * th
        ell2 = 2.0 * plus * sh * sh * th + 1j * minus * sh * (th * th - sh * sh)
        return ell, ell1, ell2

    def _poly_jets(x: NDArray[np.float64]):
        # Q(x) = P(y(x)), y = i sinh x; y' = y''' = i cosh x, y'' = i sinh x
        y = 1j * np.sinh(x)
        y1 = 1j * np.cosh(x)
        y2 = y
        p0 = np.asarray(jacobi_p(idx, y))
        p1 = np.asarray(jacobi_p_derivative(idx, y, 1))
        p2 = np.asarray(jacobi_p_derivative(idx, y, 2))
        p3 = np.asarray(jacobi_p_derivative(idx, y, 3))
        q1 = p1 * y1
        q2 = p2 * y1 * y1 + p1 * y2
        q3 = p3 * y1**3 + 3.0 * p2 * y1 * y2 + p1 * y1
        return p0, q1, q2, q3

    def _prepare(x: ArrayLike):
        xx = np.asarray(x, dtype=float)
        return xx, norm * _envelope(xx)

    def value(x: ArrayLike) -> NDArray[np.complex128]:
        xx, env = _prepare(x)
        return env * jacobi_p(idx, 1j * np.sinh(xx))

    def deriv(x: ArrayLike) -> NDArray[np.complex128]:
        xx, env = _prepare(x)
        ell, _, _ = _log_slopes(xx)
        q0, q1, _, _ = _poly_jets(xx)
        return env * (ell * q0 + q1)

    def deriv2(x: ArrayLike) -> NDArray[np.complex128]:
        xx, env = _prepare(x)
        ell, ell1, _ = _log_slopes(xx)
        q0, q1, q2, _ = _poly_jets(xx)
        return env * ((ell1 + ell * ell) * q0 + 2.0 * ell * q1 + q2)

    def deriv3(x: ArrayLike) -> NDArray[np.complex128]:
        xx, env = _prepare(x)
        ell, ell1, ell2 = _log_slopes(xx)
        q0, q1, q2, q3 = _poly_jets(xx)
        e3 = ell2 + 3.0 * ell * ell1 + ell**3
        e2 = ell1 + ell * ell
        return env * (e3 * q0 + 3.0 * e2 * q1 + 3.0 * ell * q2 + q3)

    wf = WaveFunction(n, e_n, value, deriv, deriv2, deriv3, branch)
    return _mirrored(wf) if sp.mirrored else wf


def _mirrored(wf: WaveFunction) -> WaveFunction:
    """psi(-x) with the derivative signs that go with it; V(x; -v2) = V(-x; v2)."""

    def flip(fn: ComplexFn, sign: float) -> ComplexFn:
        def at_minus_x(x: ArrayLike) -> NDArray[np.complex128]:
            return sign * np.asarray(fn(-np.asarray(x, dtype=float)))

        return at_minus_x

    return WaveFunction(
        wf.n,
        wf.energy,
        flip(wf.value, 1.0),
        flip(wf.deriv, -1.0),
        flip(wf.deriv2, 1.0),
        flip(wf.deriv3, -1.0) if wf.deriv3 is not None else None,
        wf.branch,
    )


@dataclass(frozen=True)
class ScarfModel:
    params: PotentialParams
    sp: SpectralParams = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "sp", derive_params(self.params))

    @classmethod
    def from_couplings(cls, v1: float, v2: complex) -> "ScarfModel":
        return cls(PotentialParams(v1, v2))

    @property
    def regime(self) -> RegimeClass:
        return self.sp.regime

    @property
    def n_max(self) -> int:
        return self.sp.n_max

    def default_branch(self) -> Branch:
        return Branch.MINUS if self.regime == RegimeClass.BROKEN_PT else Branch.SINGLE

    def resolve_branch(self, branch: Optional[Branch]) -> Branch:
        if self.regime != RegimeClass.BROKEN_PT:
            return Branch.SINGLE
        if branch is None or branch == Branch.SINGLE:
            return self.default_branch()
        return branch

    def potential(self, x: ArrayLike) -> NDArray[np.complex128]:
        return potential(self.params, x)

    def energy(self, n: int, branch: Optional[Branch] = None) -> complex:
        return energy(self.sp, n, self.resolve_branch(branch))

    def eigenfunction(self, n: int, branch: Optional[Branch] = None) -> WaveFunction:
        return eigenfunction(self.params, self.sp, n, self.resolve_branch(branch))

    def spectrum(self) -> List[SpectrumEntry]:
        return spectrum(self.sp)

    def second_series(self) -> List[SpectrumEntry]:
        return second_series(self.sp)

    def p_plus_q(self, branch: Optional[Branch] = None) -> complex:
        return self.sp.p + self.sp.q(self.resolve_branch(branch))
