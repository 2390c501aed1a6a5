"""Ground-state second moments <q_i q_j> and <p_i p_j>.

The ground state of H = (1/2) p.p + (1/2) q.V.q is Gaussian with

    Q = V^(-1/2) / 2      P = V^(1/2) / 2

and vanishing first moments.  Three interchangeable engines compute them:

* ``covariance_dense``     -- symmetric eigendecomposition of V (any boundary)
* ``covariance_pbc_fft``   -- circulant fast path for periodic lattices
* ``covariance_infinite``  -- Brillouin-zone quadrature in the M -> oo limit

The periodic/infinite engines return correlations as a function of the
displacement only (translation invariance); the dense engine returns the full
matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import CRITICAL_GUARD, CouplingParams, LatticeSpec, PotentialMatrix, StabilityError
from .spectrum import dispersion_grid, dispersion_value, zone_minimum


@dataclass(frozen=True)
class CovariancePair:
    """Full position/momentum covariance matrices of the Gaussian ground state."""

    Q: np.ndarray = field(repr=False)
    P: np.ndarray = field(repr=False)
    engine: str
    spec: LatticeSpec
    params: CouplingParams


@dataclass(frozen=True)
class CorrelationTable:
    """Translation-invariant correlations keyed by displacement.

    ``kind == "periodic"``: qq/pp are M x M arrays indexed by the displacement
    modulo M.  ``kind == "infinite"``: qq/pp are (D+1) x (D+1) quadrant arrays
    indexed by (|dx|, |dy|) -- the dispersion is even in each wavevector
    component separately, so correlations are too.
    """

    qq: np.ndarray = field(repr=False)
    pp: np.ndarray = field(repr=False)
    kind: str
    engine: str
    params: CouplingParams
    side: int | None = None  # periodic tables only

    def _lookup(self, table: np.ndarray, dx: int, dy: int) -> float:
        if self.kind == "periodic":
            return float(table[dx % self.side, dy % self.side])
        dx, dy = abs(dx), abs(dy)
        if dx >= table.shape[0] or dy >= table.shape[1]:
            raise ValueError(f"displacement ({dx}, {dy}) not in table "
                             f"(extent {table.shape[0] - 1})")
        return float(table[dx, dy])

    def qq_at(self, dx: int, dy: int) -> float:
        return self._lookup(self.qq, dx, dy)

    def pp_at(self, dx: int, dy: int) -> float:
        return self._lookup(self.pp, dx, dy)

    @property
    def max_displacement(self) -> int:
        if self.kind == "periodic":
            return self.side - 1
        return self.qq.shape[0] - 1


def _guard_softness(vmin: float, on_site: float) -> None:
    if vmin <= 0:
        raise StabilityError(f"beyond critical coupling (min v = {vmin:.6g})")
    if vmin < CRITICAL_GUARD * on_site:
        raise StabilityError(
            f"within {CRITICAL_GUARD:g} of criticality (min v / on-site = "
            f"{vmin / on_site:.3g}); matrix square roots are unreliable here")


def covariance_dense(V: PotentialMatrix) -> CovariancePair:
    """Q = V^(-1/2)/2 and P = V^(1/2)/2 by symmetric eigendecomposition."""
    w, U = np.linalg.eigh(V.matrix)
    _guard_softness(float(w[0]), V.params.on_site)
    Q = (U * (w ** -0.5)) @ U.T / 2.0
    P = (U * (w ** 0.5)) @ U.T / 2.0
    Q = 0.5 * (Q + Q.T)
    P = 0.5 * (P + P.T)
    Q.flags.writeable = False
    P.flags.writeable = False
    return CovariancePair(Q=Q, P=P, engine="dense", spec=V.spec, params=V.params)


def covariance_pbc_fft(spec: LatticeSpec, params: CouplingParams) -> CorrelationTable:
    """Periodic-lattice correlations via the circulant eigenvalue grid:

        <q_0 q_r> = (1 / 2 M^2) sum_k v(k)^(-1/2) cos(k.r)

    and the same with v^(+1/2) for momenta, evaluated with a fast transform.
    """
    if spec.infinite or spec.boundary != "periodic":
        raise ValueError("FFT engine requires a finite periodic lattice")
    v = dispersion_grid(params, spec.side)
    _guard_softness(float(np.min(v)), params.on_site)
    qq = 0.5 * np.real(np.fft.ifft2(v ** -0.5))
    pp = 0.5 * np.real(np.fft.ifft2(v ** 0.5))
    qq.flags.writeable = False
    pp.flags.writeable = False
    return CorrelationTable(qq=qq, pp=pp, kind="periodic", engine="fft",
                            params=params, side=spec.side)


@dataclass(frozen=True)
class QuadratureSpec:
    """Uniform product rule over the zone with adaptive grid doubling.

    The integrand is smooth and periodic away from criticality, so the
    uniform rule converges spectrally; successive doublings must agree to
    ``rel_tol`` per entry.  Sample points are offset by half a spacing so
    that no node ever lands exactly on the dispersion minimum.
    """

    base_points: int = 64
    rel_tol: float = 1e-10
    max_doublings: int = 8

    def __post_init__(self):
        if self.base_points < 16:
            raise ValueError("quadrature needs at least 16 points per dimension")
        if self.max_doublings < 1:
            raise ValueError("max_doublings must be >= 1")


class QuadratureConvergenceError(RuntimeError):
    """Grid doubling did not reach the requested tolerance.

    Carries the last two estimates; expected only for couplings within about
    1e-8 (relative) of the critical point, where the integrable cone in
    v^(-1/2) defeats uniform grids.
    """

    def __init__(self, message, last, previous):
        super().__init__(message)
        self.last = last
        self.previous = previous


def _zone_tables(params: CouplingParams, dmax: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    # cos(k.r) factorizes as cos(kx dx) cos(ky dy) on the sign-symmetric grid
    # (the odd sin terms cancel), so each table is two small matmuls.
    k = -np.pi + 2.0 * np.pi * (np.arange(n) + 0.5) / n
    d = np.arange(dmax + 1)
    cx = np.cos(np.outer(d, k))
    qq = np.zeros((dmax + 1, dmax + 1))
    pp = np.zeros_like(qq)
    chunk = max(16, (2 ** 22) // n)
    for s in range(0, n, chunk):
        ky = k[s:s + chunk]
        v = dispersion_value(params, k[:, None], ky[None, :])
        vmin = float(np.min(v))
        _guard_softness(vmin, params.on_site)
        cy = np.cos(np.outer(d, ky))
        qq += (cx @ (v ** -0.5)) @ cy.T
        pp += (cx @ (v ** 0.5)) @ cy.T
    return qq / (2.0 * n * n), pp / (2.0 * n * n)


def covariance_infinite(params: CouplingParams, displacements,
                        quad: QuadratureSpec | None = None) -> CorrelationTable:
    """Infinite-lattice correlations by zone quadrature:

        <q_0 q_r> = (1 / 2 (2 pi)^2) int v(k)^(-1/2) cos(k.r) d^2k

    ``displacements`` is an iterable of (dx, dy); the returned table covers
    the full quadrant up to the largest requested component.
    """
    quad = quad or QuadratureSpec()
    dmax = 0
    for dx, dy in displacements:
        dmax = max(dmax, abs(int(dx)), abs(int(dy)))
    vmin, _ = zone_minimum(params)
    _guard_softness(vmin, params.on_site)

    n = quad.base_points
    prev = _zone_tables(params, dmax, n)
    for _ in range(quad.max_doublings):
        n *= 2
        cur = _zone_tables(params, dmax, n)
        # per-entry relative agreement; entries below 1e-5 of the on-site
        # value are measured against that floor (they are exact-cancellation
        # residue, e.g. every off-site correlation of the decoupled lattice)
        floor_q = 1e-5 * np.max(np.abs(cur[0]))
        floor_p = 1e-5 * np.max(np.abs(cur[1]))
        err = max(
            float(np.max(np.abs(cur[0] - prev[0]) / np.maximum(np.abs(cur[0]), floor_q))),
            float(np.max(np.abs(cur[1] - prev[1]) / np.maximum(np.abs(cur[1]), floor_p))),
        )
        if err < quad.rel_tol:
            qq, pp = cur
            qq.flags.writeable = False
            pp.flags.writeable = False
            return CorrelationTable(qq=qq, pp=pp, kind="infinite", engine="infinite",
                                    params=params)
        prev = cur
    raise QuadratureConvergenceError(
        f"zone quadrature did not converge to {quad.rel_tol:g} within "
        f"{quad.max_doublings} doublings (n = {n}); last level error {err:.3g}",
        last=cur, previous=prev)


def excitation_density(params: CouplingParams, spec: LatticeSpec,
                       quad: QuadratureSpec | None = None) -> float:
    """Mean excitation number per atom, (omega <q^2> + <p^2>/omega - 1) / (2N).

    Small values validate the low-excitation reduction.  Open lattices use
    the center site's moments (they vary with position there).
    """
    if spec.infinite:
        table = covariance_infinite(params, [(0, 0)], quad=quad)
        q2, p2 = table.qq_at(0, 0), table.pp_at(0, 0)
    elif spec.boundary == "periodic":
        table = covariance_pbc_fft(spec, params)
        q2, p2 = table.qq_at(0, 0), table.pp_at(0, 0)
    else:
        from .model import build_potential

        cov = covariance_dense(build_potential(spec, params))
        c = spec.site_index(spec.side // 2, spec.side // 2)
        q2, p2 = float(cov.Q[c, c]), float(cov.P[c, c])
    n_exc = (params.omega * q2 + p2 / params.omega - 1.0) / 2.0
    return n_exc / params.n_atoms
