"""Dispersion relation, energy gap and the phase boundary of the transition.

Fourier transforming the translation-invariant potential gives the symbol

    v(k) = omega(omega + 4 kappa N)
         + 2 N omega [ g1 cos kx + g2 cos ky
                       + 2^(-3/2) g2 (cos(kx+ky) + cos(kx-ky)) ]

whose square root is the normal-mode frequency.  The gap closes where
min_k v(k) = 0, which happens at k = (pi, pi) or (0, pi)/(pi, 0) depending on
the ratio g2 / g1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .model import DIAGONAL_FACTOR, CouplingParams, LatticeSpec, StabilityError, build_potential

SQRT2 = np.sqrt(2.0)


def _dispersion_raw(omega, kappa, n_atoms, g1, g2, kx, ky):
    kx = np.asarray(kx, dtype=float)
    ky = np.asarray(ky, dtype=float)
    bracket = (g1 * np.cos(kx) + g2 * np.cos(ky)
               + DIAGONAL_FACTOR * g2 * (np.cos(kx + ky) + np.cos(kx - ky)))
    return omega * (omega + 4.0 * kappa * n_atoms) + 2.0 * n_atoms * omega * bracket


def dispersion_value(params: CouplingParams, kx, ky):
    """Fourier symbol v(k) of the potential matrix; broadcasts over arrays."""
    return _dispersion_raw(params.omega, params.kappa, params.n_atoms,
                           params.g1, params.g2, kx, ky)


@dataclass(frozen=True)
class DispersionPoint:
    kx: float
    ky: float
    v_k: float
    omega_k: float | None  # defined only where v_k >= 0


def dispersion(params: CouplingParams, kx: float, ky: float) -> DispersionPoint:
    v = float(dispersion_value(params, kx, ky))
    return DispersionPoint(kx=float(kx), ky=float(ky), v_k=v,
                           omega_k=float(np.sqrt(v)) if v >= 0 else None)


def dispersion_grid(params: CouplingParams, side: int) -> np.ndarray:
    """v(k) on the discrete wavevector grid k = 2 pi (m, n) / M of a periodic lattice."""
    k = 2.0 * np.pi * np.arange(side) / side
    return dispersion_value(params, k[:, None], k[None, :])


def dispersion_grid_min(params: CouplingParams, side: int) -> float:
    return float(np.min(dispersion_grid(params, side)))


# For g1, g2 >= 0 the zone minimum always sits on the corner set below: v is
# linear in cos kx at fixed cos ky (and vice versa), so extrema lie at
# cos k = +-1 in each direction and (0, 0) is never the minimum.
_CANDIDATES = ((np.pi, np.pi), (0.0, np.pi), (np.pi, 0.0))


def zone_minimum(params: CouplingParams) -> tuple[float, tuple[float, float]]:
    """Minimum of v(k) over the full continuous zone and its minimizer.

    Analytic candidates first; a Nelder-Mead polish guards against parameter
    regimes where the minimum might migrate off the corner set.
    """
    best_k = min(_CANDIDATES, key=lambda k: dispersion_value(params, *k))
    best_v = float(dispersion_value(params, *best_k))
    res = minimize(lambda k: float(dispersion_value(params, k[0], k[1])), x0=np.array(best_k),
                   method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-12})
    if res.fun < best_v:
        best_v = float(res.fun)
        best_k = (float(res.x[0]), float(res.x[1]))
    return best_v, best_k


def energy_gap(params: CouplingParams, spec: LatticeSpec) -> float:
    """Lowest excitation energy sqrt(min v).

    Infinite mode minimizes over the continuous zone, finite periodic over
    the discrete grid, finite open over the dense eigenvalues of V.
    """
    if spec.infinite:
        vmin, _ = zone_minimum(params)
    elif spec.boundary == "periodic":
        vmin = dispersion_grid_min(params, spec.side)
    else:
        vmin = float(np.linalg.eigvalsh(build_potential(spec, params).matrix)[0])
    if vmin < 0:
        raise StabilityError(f"instability: beyond critical coupling (min v = {vmin:.6g})")
    return float(np.sqrt(vmin))


def critical_g_equal(params: CouplingParams) -> float:
    """Critical coupling on the equal-strength line g1 = g2 = g."""
    return (params.omega + 4.0 * params.kappa * params.n_atoms) / (params.n_atoms * (4.0 - SQRT2))


def phase_boundary_cases(params: CouplingParams, g1: float) -> tuple[float, float, float]:
    """The three closed-form expressions for the critical g2 at given g1.

    Returns (below, degenerate, above) where "below"/"above" refer to the
    critical point lying below or above the line g2 = sqrt(2) g1.  Only the
    self-consistent case is physical; see :func:`critical_g2`.
    """
    w_over_n = params.omega / params.n_atoms
    below = (4.0 * params.kappa - 2.0 * g1 + w_over_n) / (2.0 - SQRT2)
    degenerate = (4.0 * params.kappa + w_over_n) / 2.0
    above = (4.0 * params.kappa + 2.0 * g1 + w_over_n) / (2.0 + SQRT2)
    return below, degenerate, above


@dataclass(frozen=True)
class PhasePoint:
    g1: float
    g2_closed_form: float
    g2_numeric: float
    branch: str  # below | degenerate | above, relative to g2 = sqrt(2) g1
    min_wavevector: tuple[float, float]


def critical_g2_numeric(params: CouplingParams, g1: float, tol: float = 1e-10,
                        bracket: tuple[float, float] | None = None) -> float:
    """g2 closing the gap, by bisection on the corner values of v(k).

    The gap only ever closes at (pi, pi) or (0, pi), and the minimum of v
    over those two corners equals min_k v(k) for non-negative couplings (the
    (pi, 0) corner never undercuts (pi, pi) there).  That corner minimum is
    strictly decreasing in g2, so the root is unique.  Where g1 alone
    already closes the gap (g1 above the pure-horizontal critical value) the
    boundary continues at negative g2, marking the closing of the same
    corner mode.  Tolerance is absolute in units of kappa.
    """
    if g1 < 0:
        raise ValueError("g1 must be >= 0")
    lo, hi = bracket if bracket is not None else (-10.0 * params.kappa, 10.0 * params.kappa)

    def corner_min(g2):
        return min(float(_dispersion_raw(params.omega, params.kappa, params.n_atoms,
                                         g1, g2, kx, ky))
                   for kx, ky in ((np.pi, np.pi), (0.0, np.pi)))

    if corner_min(lo) <= 0 or corner_min(hi) > 0:
        raise ValueError(f"bracket [{lo}, {hi}] does not straddle the boundary")
    while hi - lo > tol * params.kappa:
        mid = 0.5 * (lo + hi)
        if corner_min(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def critical_g2(params: CouplingParams, g1: float, numeric_tol: float = 1e-10) -> PhasePoint:
    """Phase boundary point above a given g1: closed form, branch and the
    independently bisected numerical root."""
    if g1 < 0:
        raise ValueError("g1 must be >= 0")
    below, degenerate, above = phase_boundary_cases(params, g1)
    # Self-consistency picks the case: the "below" form is valid only where
    # it lands below sqrt(2) g1, the "above" form only above it.
    if below < SQRT2 * g1:
        g2c, branch, kmin = below, "below", (np.pi, np.pi)
    elif above > SQRT2 * g1:
        g2c, branch, kmin = above, "above", (0.0, np.pi)
    else:
        g2c, branch, kmin = degenerate, "degenerate", (np.pi, np.pi)
    numeric = critical_g2_numeric(params, g1, tol=numeric_tol)
    return PhasePoint(g1=float(g1), g2_closed_form=float(g2c), g2_numeric=float(numeric),
                      branch=branch, min_wavevector=kmin)


@dataclass(frozen=True)
class GapScalingFit:
    exponent: float
    prefactor: float
    n_samples: int


def gap_scaling_exponent(params: CouplingParams, g_window: tuple[float, float],
                         n_samples: int) -> GapScalingFit:
    """Least-squares fit of log(gap) vs log(g_c - g) on the equal-coupling line.

    The window must lie strictly below g_c; two samples are the minimum for
    a line.  Returns the fitted exponent and the prefactor exp(intercept).
    """
    gc = critical_g_equal(params)
    lo, hi = g_window
    if not (0 <= lo < hi):
        raise ValueError("need 0 <= g_lo < g_hi")
    if hi >= gc:
        raise ValueError(f"window touches or crosses the critical coupling g_c = {gc:.6g}")
    if n_samples < 2:
        raise ValueError("fit needs at least 2 samples")
    gs = np.linspace(lo, hi, n_samples)
    gaps = []
    for g in gs:
        p = CouplingParams(omega=params.omega, kappa=params.kappa,
                           n_atoms=params.n_atoms, g1=g, g2=g)
        gaps.append(energy_gap(p, LatticeSpec.infinite_lattice()))
    x = np.log(gc - gs)
    y = np.log(gaps)
    slope, intercept = np.polyfit(x, y, 1)
    return GapScalingFit(exponent=float(slope), prefactor=float(np.exp(intercept)),
                         n_samples=n_samples)
