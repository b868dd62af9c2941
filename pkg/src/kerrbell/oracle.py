"""Brute-force cross-check: the probe expanded in a truncated number basis.

Everything the pointer module does analytically is redone here the slow way:
the joint signal-probe state is held as explicit coefficients over
(occupation, probe photon number), the cross-Kerr coupling acts as a diagonal
phase, and the homodyne projection uses the number-basis quadrature
wavefunctions for X = c + c^dag.  Feasible only for small probe amplitudes,
which is exactly where it certifies the pointer algebra.

Phase conventions: the number-basis expansion of a coherent state yields
quadrature phases Im(beta)*(x - Re(beta)), whereas the analytic overlap used
in `pointer.x_overlap` carries Im(beta)*(x - 2*Re(beta)).  The two differ by
the constant Re(beta)*Im(beta) per branch — a coherent-state phase
convention, invisible in any density.  `full_fock_collapse` returns the
"analytic" convention by default so conditional states compare directly
against `pointer.collapse`; convention="fock" returns the raw expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, gammaln

from .errors import TruncationOverflow, ZeroDensity
from .fock_core import SpatialFockState

_TAIL_TOL = 1e-12


def default_n_max(alpha: float) -> int:
    return math.ceil(alpha * alpha + 10.0 * alpha + 20.0)


def poisson_tail(n_max: int, mean: float) -> float:
    """P(N > n_max) for N ~ Poisson(mean); the probe mass lost to truncation."""
    if mean == 0.0:
        return 0.0
    return float(gammainc(n_max + 1, mean))


@dataclass(frozen=True)
class OracleConfig:
    """Truncation and grid settings for the number-basis reference computation."""

    alpha: float
    theta: float
    n_max: int | None = None
    grid_step: float = 0.01
    grid_pad: float = 8.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.alpha <= 4.0):
            raise ValueError(
                f"number-basis reference is limited to alpha <= 4, got {self.alpha!r}"
            )
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        if self.grid_step <= 0.0 or self.grid_pad <= 0.0:
            raise ValueError("grid_step and grid_pad must be positive")
        tail = poisson_tail(self.resolved_n_max, self.alpha**2)
        if tail >= _TAIL_TOL:
            raise TruncationOverflow(
                f"probe tail mass {tail:.3e} beyond n_max={self.resolved_n_max} "
                f"exceeds {_TAIL_TOL}"
            )

    @property
    def resolved_n_max(self) -> int:
        return self.n_max if self.n_max is not None else default_n_max(self.alpha)


def quadrature_wavefunctions(xs: np.ndarray, n_max: int) -> np.ndarray:
    """Number-state wavefunctions <x|n> for X = c + c^dag, rows n = 0..n_max.

    <x|0> = (2*pi)**-0.25 * exp(-x**2/4), the beta = 0 limit of the coherent
    overlap; higher n follow the stable two-term recursion of the normalized
    Hermite functions evaluated at x/sqrt2.
    """
    xs = np.asarray(xs, dtype=float)
    z = xs / math.sqrt(2.0)
    psi = np.empty((n_max + 1, xs.size))
    psi[0] = (2.0 * math.pi) ** -0.25 * np.exp(-xs * xs / 4.0)
    if n_max >= 1:
        psi[1] = math.sqrt(2.0) * z * psi[0]
    for n in range(2, n_max + 1):
        psi[n] = math.sqrt(2.0 / n) * z * psi[n - 1] - math.sqrt((n - 1.0) / n) * psi[n - 2]
    return psi


def _coherent_coefficients(alpha: float, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1)
    if alpha == 0.0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    logs = n * math.log(alpha) - 0.5 * gammaln(n + 1) - alpha * alpha / 2.0
    return np.exp(logs)


def _net_weights(s: SpatialFockState, weights: tuple[int, ...]) -> tuple[list, np.ndarray]:
    if len(weights) != s.n_modes:
        raise ValueError(f"need {s.n_modes} weights, got {len(weights)}")
    occs, nets = [], []
    for occ, _ in s.items():
        occs.append(occ)
        nets.append(sum(w * n for w, n in zip(weights, occ)))
    return occs, np.asarray(nets)


def _joint_amplitudes(
    s: SpatialFockState,
    cfg: OracleConfig,
    weights: tuple[int, ...],
) -> tuple[list, np.ndarray, np.ndarray]:
    """Joint coefficients A[occ, n] after the diagonal cross-Kerr phases."""
    occs, nets = _net_weights(s, weights)
    c = _coherent_coefficients(cfg.alpha, cfg.resolved_n_max)
    n = np.arange(cfg.resolved_n_max + 1)
    amps = np.asarray([s.amplitude(occ) for occ in occs])
    phases = np.exp(1j * cfg.theta * np.outer(nets, n))
    return occs, nets, amps[:, None] * c[None, :] * phases


def _grid(cfg: OracleConfig, nets: np.ndarray) -> np.ndarray:
    centers = 2.0 * cfg.alpha * np.cos(cfg.theta * nets)
    lo = float(centers.min()) - cfg.grid_pad
    hi = float(centers.max()) + cfg.grid_pad
    count = max(2, math.ceil((hi - lo) / cfg.grid_step) + 1)
    return np.linspace(lo, hi, count)


def full_fock_density(
    s: SpatialFockState,
    cfg: OracleConfig,
    weights: tuple[int, ...],
) -> tuple[np.ndarray, np.ndarray]:
    """Exact homodyne density of the truncated joint state, tabulated on a grid."""
    occs, nets, joint = _joint_amplitudes(s, cfg, weights)
    xs = _grid(cfg, nets)
    psi = quadrature_wavefunctions(xs, cfg.resolved_n_max)
    branch_waves = joint @ psi.astype(complex)
    return xs, np.sum(np.abs(branch_waves) ** 2, axis=0)


def full_fock_collapse(
    s: SpatialFockState,
    cfg: OracleConfig,
    weights: tuple[int, ...],
    x: float,
    convention: str = "analytic",
) -> SpatialFockState:
    """Exact conditional signal state after measuring quadrature value x.

    convention="analytic" rotates each branch by exp(-i*Re(b)*Im(b)) with
    b = alpha*exp(i*theta*net_weight), matching the coherent-overlap phase
    convention of the pointer module; "fock" leaves the raw expansion.
    """
    if convention not in ("analytic", "fock"):
        raise ValueError(f"convention must be 'analytic' or 'fock', got {convention!r}")
    occs, nets, joint = _joint_amplitudes(s, cfg, weights)
    psi = quadrature_wavefunctions(np.asarray([float(x)]), cfg.resolved_n_max)
    amps = joint @ psi[:, 0].astype(complex)
    if convention == "analytic":
        amps = amps * np.exp(-0.5j * cfg.alpha**2 * np.sin(2.0 * cfg.theta * nets))
    nsq = float(np.sum(np.abs(amps) ** 2))
    if nsq < 1e-300:
        raise ZeroDensity(f"conditional density at x={x!r} is numerically zero")
    scale = 1.0 / math.sqrt(nsq)
    return SpatialFockState(
        {occ: complex(a) * scale for occ, a in zip(occs, amps)},
        max_total=s.max_total,
    )
