"""Algebra of the loaded two-mode squeezed thermal state.

Each loaded signal/idler polarization pair ends up in a zero-mean Gaussian
state specified by two real numbers: the per-mode mean photon number ``nbar``
and the signed phase-sensitive correlation ``ntilde``.  Its anti-normally
ordered characteristic function is

    chi_A(zs, zi) = exp[-(1 + nbar) (|zs|^2 + |zi|^2) + 2 ntilde Re(zs zi)].

This module provides three independent views of that state:

* ``antinormal_characteristic`` evaluates chi_A directly;
* ``fock_element`` gives number-basis matrix elements in closed form, from
  the generating-function expansion of the state's Husimi function;
* ``fock_oracle`` rebuilds the full truncated density matrix by a separate
  route (two-mode squeezing applied to a symmetric thermal state, with the
  squeeze operator exponentiated numerically) and exists to certify the
  closed form before anything else relies on it.

All matrix elements are real for this state family (ntilde real, signed),
so everything is stored as float64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

__all__ = [
    "TwoModeSqueezedThermal",
    "TruncatedDensityMatrix",
    "TruncationError",
    "antinormal_characteristic",
    "fock_element",
    "reduced_vacuum_probability",
    "fock_oracle",
    "antinormal_characteristic_from_matrix",
]

# Factorials as exact-to-float64 values; 170! is the largest finite one.
_FACTORIALS: tuple[float, ...] = tuple(float(math.factorial(k)) for k in range(171))


def _factorial(n: int) -> float:
    try:
        return _FACTORIALS[n]
    except IndexError:
        raise ValueError(f"occupation number {n} exceeds the factorial table (max 170)") from None


class TruncationError(RuntimeError):
    """Raised when a truncated density matrix misses too much trace weight."""

    def __init__(self, deficit: float, tolerance: float, n_max: int):
        self.deficit = deficit
        self.tolerance = tolerance
        self.n_max = n_max
        super().__init__(
            f"trace deficit {deficit:.3e} exceeds tolerance {tolerance:.3e} at n_max={n_max}"
        )


@dataclass(frozen=True)
class TwoModeSqueezedThermal:
    """Two-mode squeezed thermal state: (nbar, signed ntilde).

    Physicality requires ntilde**2 <= nbar * (nbar + 1); equality is the pure
    two-mode squeezed vacuum.  The reduced state of either mode alone is
    thermal with mean nbar.
    """

    nbar: float
    ntilde_signed: float

    def __post_init__(self) -> None:
        if self.nbar < 0.0:
            raise ValueError(f"nbar must be non-negative, got {self.nbar}")
        bound = self.nbar * (self.nbar + 1.0)
        # slack covers sqrt round-off when callers construct the pure limit
        if self.ntilde_signed**2 > bound + 1e-12 * (1.0 + self.nbar) ** 2:
            raise ValueError(
                f"unphysical state: ntilde^2 = {self.ntilde_signed**2:.6e} exceeds "
                f"nbar*(nbar+1) = {bound:.6e}"
            )

    @property
    def ntilde_abs(self) -> float:
        return abs(self.ntilde_signed)

    def flipped(self) -> "TwoModeSqueezedThermal":
        """Same state with the sign of ntilde reversed (the partner pair)."""
        return TwoModeSqueezedThermal(self.nbar, -self.ntilde_signed)

    def thermal_squeeze_parameters(self) -> tuple[float, float]:
        """Decompose into (n_thermal, squeeze r).

        The state equals a two-mode squeeze, parameter r, applied to two
        uncorrelated thermal modes of mean n_thermal:
        nbar = n_th cosh(2r) + sinh(r)^2 and ntilde = (n_th + 1/2) sinh(2r),
        solved through the symplectic eigenvalue
        nu = sqrt((nbar + 1/2)^2 - ntilde^2).
        """
        nu = math.sqrt((self.nbar + 0.5) ** 2 - self.ntilde_signed**2)
        n_th = nu - 0.5
        r = 0.5 * math.asinh(self.ntilde_signed / nu)
        return n_th, r


def antinormal_characteristic(
    state: TwoModeSqueezedThermal, zeta_s: complex, zeta_i: complex
) -> float:
    """Anti-normally ordered characteristic function chi_A(zeta_s, zeta_i).

    Real and in (0, 1] for every argument; equals 1 at the origin.
    """
    zs = complex(zeta_s)
    zi = complex(zeta_i)
    exponent = (
        -(1.0 + state.nbar) * (abs(zs) ** 2 + abs(zi) ** 2)
        + 2.0 * state.ntilde_signed * (zs * zi).real
    )
    return math.exp(exponent)


def _dcs(state: TwoModeSqueezedThermal) -> tuple[float, float, float]:
    """Expansion coefficients of the number-basis generating function."""
    d = (1.0 + state.nbar) ** 2 - state.ntilde_signed**2
    c = (state.nbar * (1.0 + state.nbar) - state.ntilde_signed**2) / d
    s = state.ntilde_signed / d
    return d, c, s


def fock_element(
    state: TwoModeSqueezedThermal, n1: int, n2: int, m1: int, m2: int
) -> float:
    """Number-basis matrix element <m1 m2| rho |n1 n2>.

    Photon-number correlation enforces the selection rule
    n1 - m1 = n2 - m2; elements violating it are exactly zero.  Otherwise,
    with d = (1+nbar)^2 - ntilde^2, c = [nbar(1+nbar) - ntilde^2]/d and
    s = ntilde/d, the element is

        sqrt(n1! n2! m1! m2!) / d *
        sum over p+r=n1, q+r=n2, p+t=m1, q+t=m2 of
            c^(p+q) s^(r+t) / (p! q! r! t!).
    """
    if min(n1, n2, m1, m2) < 0:
        raise ValueError("occupation numbers must be non-negative")
    if n1 - m1 != n2 - m2:
        return 0.0
    d, c, s = _dcs(state)
    total = 0.0
    for r in range(max(0, n1 - m1), min(n1, n2) + 1):
        p = n1 - r
        q = n2 - r
        t = r - (n1 - m1)
        total += (
            c ** (p + q)
            * s ** (r + t)
            / (_factorial(p) * _factorial(q) * _factorial(r) * _factorial(t))
        )
    norm = math.sqrt(_factorial(n1) * _factorial(n2) * _factorial(m1) * _factorial(m2))
    return norm * total / d


def reduced_vacuum_probability(state: TwoModeSqueezedThermal) -> float:
    """P(one mode holds zero photons) = 1 / (1 + nbar), the thermal marginal."""
    return 1.0 / (1.0 + state.nbar)


@dataclass(frozen=True)
class TruncatedDensityMatrix:
    """Dense two-mode density matrix truncated at n_max photons per mode.

    ``elements`` is ((n_max+1)^2, (n_max+1)^2) with the flat index
    n1 * (n_max + 1) + n2; all entries are real.  ``trace_deficit`` is the
    probability weight lost to the truncation.
    """

    n_max: int
    elements: np.ndarray
    trace_deficit: float

    @property
    def dim(self) -> int:
        return self.n_max + 1

    def index(self, n1: int, n2: int) -> int:
        return n1 * self.dim + n2

    def element(self, n1: int, n2: int, m1: int, m2: int) -> float:
        """<m1 m2| rho |n1 n2>, same signature as :func:`fock_element`."""
        return float(self.elements[self.index(n1, n2), self.index(m1, m2)])

    def trace(self) -> float:
        return float(np.trace(self.elements))

    def reduced_vacuum_probability(self, mode: int) -> float:
        """Vacuum probability of one mode (0 = first slot, 1 = second)."""
        if mode == 0:
            return float(sum(self.element(0, k, 0, k) for k in range(self.dim)))
        if mode == 1:
            return float(sum(self.element(k, 0, k, 0) for k in range(self.dim)))
        raise ValueError(f"mode must be 0 or 1, got {mode}")


def _squeeze_thermal_truncated(
    n_th: float, r: float, n_max: int, work_max: int
) -> np.ndarray:
    """Truncated density matrix of squeeze(r) acting on thermal(n_th)^2.

    The squeeze generator a_S^dag a_I^dag - a_S a_I preserves the photon
    number difference n1 - n2, so it block-diagonalizes into tridiagonal
    sectors of fixed difference q.  Each sector is exponentiated in the
    working dimension (the guard band) and only the rows/columns within the
    requested cutoff are kept; the full working-size matrix never exists.
    """
    wdim = work_max + 1
    mdim = n_max + 1
    k = np.arange(wdim)
    if n_th <= 0.0:
        weights = np.zeros(wdim)
        weights[0] = 1.0
    else:
        weights = n_th**k / (1.0 + n_th) ** (k + 1)

    rho = np.zeros((mdim * mdim, mdim * mdim))
    for q in range(-n_max, n_max + 1):
        depth = abs(q)
        d = wdim - depth
        m = np.arange(d)
        if q >= 0:
            n1, n2 = m + depth, m
        else:
            n1, n2 = m, m + depth
        # generator restricted to the sector: real antisymmetric tridiagonal,
        # so its exponential is real orthogonal
        off = r * np.sqrt((m[:-1] + 1 + depth) * (m[:-1] + 1.0))
        generator = np.zeros((d, d))
        generator[np.arange(1, d), np.arange(d - 1)] = off
        generator[np.arange(d - 1), np.arange(1, d)] = -off
        squeeze = expm(generator)
        block = (squeeze * (weights[n1] * weights[n2])) @ squeeze.T
        keep = np.nonzero((n1 <= n_max) & (n2 <= n_max))[0]
        flat = n1[keep] * mdim + n2[keep]
        rho[np.ix_(flat, flat)] = block[np.ix_(keep, keep)]
    return rho


def fock_oracle(
    state: TwoModeSqueezedThermal,
    n_max: int | None = None,
    trace_tolerance: float = 1e-10,
) -> TruncatedDensityMatrix:
    """Truncated density matrix built independently of :func:`fock_element`.

    Decomposes the state as two-mode squeezing of a symmetric thermal state
    (see ``thermal_squeeze_parameters``), exponentiates the squeeze generator
    in a working space twice the requested cutoff (guard band against
    truncation back-action), then truncates to ``n_max``.

    With ``n_max=None`` the cutoff starts at 12 and doubles (up to 48) until
    the trace deficit drops below ``trace_tolerance``.  An explicitly
    requested cutoff that misses the tolerance raises
    :class:`TruncationError` carrying the achieved deficit.
    """
    n_th, r = state.thermal_squeeze_parameters()

    def build(cutoff: int) -> TruncatedDensityMatrix:
        truncated = _squeeze_thermal_truncated(n_th, r, cutoff, 2 * cutoff)
        deficit = 1.0 - float(np.trace(truncated))
        return TruncatedDensityMatrix(cutoff, truncated, deficit)

    if n_max is not None:
        if n_max < 2:
            raise ValueError(f"n_max must be at least 2, got {n_max}")
        result = build(n_max)
        if result.trace_deficit > trace_tolerance:
            raise TruncationError(result.trace_deficit, trace_tolerance, n_max)
        return result

    cutoff = 12
    while True:
        result = build(cutoff)
        if result.trace_deficit <= trace_tolerance:
            return result
        if cutoff >= 48:
            raise TruncationError(result.trace_deficit, trace_tolerance, cutoff)
        cutoff *= 2


def _displacement_antinormal(zeta: complex, dim: int) -> np.ndarray:
    """Single-mode operator e^(-zeta* a) e^(zeta a^dag) in the number basis."""
    annihilate = np.zeros((dim, dim), dtype=complex)
    create = np.zeros((dim, dim), dtype=complex)
    for m in range(dim):
        for n in range(dim):
            if n >= m:
                annihilate[m, n] = (
                    (-np.conj(zeta)) ** (n - m)
                    / _factorial(n - m)
                    * math.sqrt(_factorial(n) / _factorial(m))
                )
            if m >= n:
                create[m, n] = (
                    zeta ** (m - n)
                    / _factorial(m - n)
                    * math.sqrt(_factorial(m) / _factorial(n))
                )
    return annihilate @ create


def antinormal_characteristic_from_matrix(
    rho: TruncatedDensityMatrix, zeta_s: complex, zeta_i: complex
) -> float:
    """chi_A reconstructed from a truncated density matrix.

    Trace of rho against the anti-normally ordered displacement kernel,
    accurate for moderate |zeta| (the kernel's matrix elements decay
    factorially beyond the photon cutoff).
    """
    kernel = np.kron(
        _displacement_antinormal(zeta_s, rho.dim),
        _displacement_antinormal(zeta_i, rho.dim),
    )
    value = complex(np.trace(rho.elements @ kernel))
    return value.real
