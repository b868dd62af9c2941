"""Signal-probe entanglement as a finite sum of Fock branches with coherent pointers.

A probe pulse prepared in a coherent state picks up one cross-Kerr phase per
signal occupation branch, so the exact joint state is a short list of
(occupation, signal amplitude, coherent pointer amplitude) triples.  This
stays exact at any probe amplitude — the probe is never expanded in a number
basis here — which is what makes the mean-photon-number ~1e4 operating points
tractable.

Quadrature convention: the homodyne observable is X = c + c^dag, with
coherent-state overlap

    <x|beta> = (2*pi)**-0.25 * exp(-Im(beta)**2 - (x - 2*beta)**2 / 4)

so a pointer at beta produces a unit-variance Gaussian centered on 2*Re(beta).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import ZeroDensity
from .fock_core import SpatialFockState

_ROOT4 = (2.0 * math.pi) ** -0.25
_GAUSS_NORM = 1.0 / math.sqrt(2.0 * math.pi)
_NORM_TOL = 1e-9


@dataclass(frozen=True)
class PointerBranch:
    """One signal occupation with its amplitude and coherent pointer."""

    occ: tuple[int, ...]
    d: complex
    beta: complex


class PointerDecomposition:
    """Branches with pairwise-distinct occupations; sum of |d|^2 equals 1."""

    __slots__ = ("_branches", "_max_total")

    def __init__(
        self,
        branches: list[PointerBranch] | tuple[PointerBranch, ...],
        max_total: int | None = None,
    ) -> None:
        merged: dict[tuple[int, ...], PointerBranch] = {}
        n_modes = None
        for br in branches:
            occ = tuple(int(n) for n in br.occ)
            if n_modes is None:
                n_modes = len(occ)
            elif len(occ) != n_modes:
                raise ValueError("occupation tuples differ in length")
            prev = merged.get(occ)
            if prev is None:
                merged[occ] = PointerBranch(occ, complex(br.d), complex(br.beta))
            else:
                # Duplicate occupations merge their signal amplitudes; the
                # pointers must already coincide (distinct coherent values on
                # the same occupation have no joint-state meaning here).
                if abs(prev.beta - br.beta) > 1e-12 * (1.0 + abs(prev.beta)):
                    raise ValueError(
                        f"cannot merge occupation {occ} with differing pointers"
                    )
                merged[occ] = PointerBranch(occ, prev.d + complex(br.d), prev.beta)
        if not merged:
            raise ValueError("decomposition needs at least one branch")
        nsq = sum(abs(br.d) ** 2 for br in merged.values())
        if abs(nsq - 1.0) > _NORM_TOL:
            raise ValueError(f"signal amplitudes are not normalized (|.|^2 = {nsq!r})")
        ordered = tuple(merged[occ] for occ in sorted(merged))
        self._branches = ordered
        if max_total is None:
            max_total = max(sum(br.occ) for br in ordered)
        self._max_total = int(max_total)

    @property
    def branches(self) -> tuple[PointerBranch, ...]:
        return self._branches

    @property
    def max_total(self) -> int:
        return self._max_total

    @property
    def n_modes(self) -> int:
        return len(self._branches[0].occ)

    def __repr__(self) -> str:
        terms = "; ".join(
            f"{br.occ}: d={br.d:.4g}, beta={br.beta:.6g}" for br in self._branches
        )
        return f"PointerDecomposition({terms})"


def attach_probe(s: SpatialFockState, alpha: float) -> PointerDecomposition:
    """Tensor a coherent probe of real amplitude alpha onto every signal branch."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    beta = complex(alpha)
    return PointerDecomposition(
        [PointerBranch(occ, amp, beta) for occ, amp in s.items()],
        max_total=s.max_total,
    )


def apply_cross_kerr(
    pd: PointerDecomposition,
    weights: tuple[int, ...],
    theta: float,
) -> PointerDecomposition:
    """Rotate each branch pointer by exp(i*theta * sum(weights * occupation)).

    Each weight is +1, -1 or 0: the sign of the per-photon cross-phase the
    corresponding signal mode imparts on the probe.  Signal amplitudes and
    pointer moduli are unchanged.
    """
    if len(weights) != pd.n_modes:
        raise ValueError(f"need {pd.n_modes} weights, got {len(weights)}")
    if any(w not in (-1, 0, 1) for w in weights):
        raise ValueError(f"weights must be -1, 0 or +1, got {weights!r}")
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    out = []
    for br in pd.branches:
        w = sum(wm * nm for wm, nm in zip(weights, br.occ))
        out.append(PointerBranch(br.occ, br.d, br.beta * cmath.exp(1j * theta * w)))
    return PointerDecomposition(out, max_total=pd.max_total)


def x_overlap(beta: complex, x: float) -> complex:
    """Quadrature amplitude <x|beta> of a coherent state.

    The squared term generates both the Gaussian envelope around 2*Re(beta)
    and an x-dependent phase Im(beta)*(x - 2*Re(beta)).
    """
    beta = complex(beta)
    w = x - 2.0 * beta
    return _ROOT4 * cmath.exp(-beta.imag**2 - w * w / 4.0)


def homodyne_density(pd: PointerDecomposition, x):
    """Probability density of the homodyne outcome x.

    Occupations are unique per branch, so the density is the incoherent sum
    sum_j |d_j|^2 * |<x|beta_j>|^2.  Accepts a scalar or an ndarray of x.
    """
    scalar = np.isscalar(x)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    total = np.zeros_like(xs)
    for br in pd.branches:
        u = xs - 2.0 * br.beta.real
        total += (abs(br.d) ** 2 * _GAUSS_NORM) * np.exp(-0.5 * u * u)
    return float(total[0]) if scalar else total


def density_grid(
    pd: PointerDecomposition,
    step: float = 0.01,
    pad: float = 8.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Uniform x grid spanning all pointer centers +/- pad, with its density."""
    centers = [2.0 * br.beta.real for br in pd.branches]
    lo, hi = min(centers) - pad, max(centers) + pad
    count = max(2, math.ceil((hi - lo) / step) + 1)
    xs = np.linspace(lo, hi, count)
    return xs, homodyne_density(pd, xs)


def sample_homodyne(
    pd: PointerDecomposition,
    rng: np.random.Generator,
    step: float = 0.01,
    pad: float = 8.0,
) -> float:
    """Draw one homodyne outcome by inverse-CDF on the density grid.

    The grid covers every Gaussian center +/- pad (default 8 standard
    deviations, < 1e-14 mass outside) at resolution <= step.  Deterministic
    for a given rng state.
    """
    xs, ps = density_grid(pd, step, pad)
    cdf = cumulative_trapezoid(ps, xs, initial=0.0)
    u = rng.random() * cdf[-1]
    return float(np.interp(u, cdf, xs))


def collapse(pd: PointerDecomposition, x: float) -> SpatialFockState:
    """Conditional signal state after measuring quadrature value x.

    Branch j keeps amplitude d_j * <x|beta_j>, then the state is renormalized:
    a Gaussian weight per pointer center plus the x-dependent branch phase
    Im(beta_j)*(x - 2*Re(beta_j)).
    """
    amps: dict[tuple[int, ...], complex] = {}
    nsq = 0.0
    for br in pd.branches:
        a = br.d * x_overlap(br.beta, x)
        amps[br.occ] = a
        nsq += abs(a) ** 2
    if nsq < 1e-300:
        raise ZeroDensity(f"homodyne density at x={x!r} is numerically zero")
    scale = 1.0 / math.sqrt(nsq)
    return SpatialFockState(
        {occ: a * scale for occ, a in amps.items()},
        max_total=pd.max_total,
    )
