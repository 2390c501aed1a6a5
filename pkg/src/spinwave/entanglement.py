"""Block entropies and two-site entanglement of the Gaussian ground state.

A reduced block keeps the rows/columns of Q and P on its sites.  Its
symplectic eigenvalues are nu_i = sqrt(eig(4 Q_L P_L)); the factor 4 makes
the decoupled vacuum give nu = 1, the purity bound.  The block entropy in
bits is

    E = sum_i [ (nu_i+1)/2 log2 (nu_i+1)/2 - (nu_i-1)/2 log2 (nu_i-1)/2 ]

summed either over every eigenvalue (``count_all``) or with degenerate
values merged (``degenerate_once``, the default).

For a symmetric pair of sites, n = 2 sqrt(<q_i^2><p_i^2>) and
c = 2 sqrt(-<q_i q_j><p_i p_j>) define zeta = n - c; zeta < 1 certifies
entanglement and fixes the entanglement of formation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groundstate import (CorrelationTable, CovariancePair, QuadratureSpec,
                          covariance_dense, covariance_infinite, covariance_pbc_fft)
from .model import CouplingParams, LatticeSpec, build_potential

UNCERTAINTY_SLACK = 1e-9
DEFAULT_PAIRING_TOL = 1e-8


@dataclass(frozen=True)
class BlockRegion:
    """An L x L block of sites anchored at (x0, y0)."""

    x0: int
    y0: int
    side_length: int

    def __post_init__(self):
        if self.side_length < 1:
            raise ValueError("block side must be >= 1")

    @classmethod
    def centered(cls, side_length: int, lattice_side: int) -> "BlockRegion":
        a = (lattice_side - side_length) // 2
        return cls(x0=a, y0=a, side_length=side_length)

    def sites(self) -> list[tuple[int, int]]:
        L = self.side_length
        return [(self.x0 + i, self.y0 + j) for j in range(L) for i in range(L)]


def _submatrices(cov, sites) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(cov, CovariancePair):
        spec = cov.spec
        if spec.boundary == "open":
            for x, y in sites:
                if not (0 <= x < spec.side and 0 <= y < spec.side):
                    raise ValueError(f"site ({x}, {y}) outside the open lattice")
        idx = [spec.site_index(x, y) for x, y in sites]
        return cov.Q[np.ix_(idx, idx)].copy(), cov.P[np.ix_(idx, idx)].copy()
    if isinstance(cov, CorrelationTable):
        n = len(sites)
        Q = np.empty((n, n))
        P = np.empty((n, n))
        for a, (xa, ya) in enumerate(sites):
            for b, (xb, yb) in enumerate(sites):
                Q[a, b] = cov.qq_at(xa - xb, ya - yb)
                P[a, b] = cov.pp_at(xa - xb, ya - yb)
        return Q, P
    raise TypeError(f"unsupported covariance container: {type(cov).__name__}")


def reduce_block(cov, region: BlockRegion) -> tuple[np.ndarray, np.ndarray]:
    """Principal submatrices (Q_L, P_L) on the region's sites.

    Accepts a CovariancePair (any boundary) or a CorrelationTable; periodic
    regions wrap, open regions must fit inside the lattice.
    """
    if isinstance(cov, CovariancePair) and not cov.spec.infinite:
        M = cov.spec.side
        if region.side_length > M:
            raise ValueError("block larger than the lattice")
    if isinstance(cov, CorrelationTable) and cov.kind == "periodic":
        if region.side_length > cov.side:
            raise ValueError("block larger than the lattice")
    return _submatrices(cov, region.sites())


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Symplectic eigenvalues, sorted descending, clamped to >= 1."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values.flags.writeable = False

    def __len__(self):
        return len(self.values)

    def grouped(self, rel_tol: float = DEFAULT_PAIRING_TOL) -> list[tuple[float, int]]:
        """(value, multiplicity) with values merged at relative tolerance."""
        groups: list[list[float]] = []
        for v in self.values:
            if groups and abs(v - groups[-1][0]) <= rel_tol * abs(groups[-1][0]):
                groups[-1].append(v)
            else:
                groups.append([v])
        return [(g[0], len(g)) for g in groups]


def _spectrum_from_values(raw: np.ndarray) -> SymplecticSpectrum:
    if np.min(raw) < 1.0 - UNCERTAINTY_SLACK:
        raise ValueError(f"uncertainty violation: symplectic eigenvalue {np.min(raw):.12g} < 1")
    return SymplecticSpectrum(values=np.sort(np.maximum(raw, 1.0))[::-1])


def symplectic_spectrum(Q_L: np.ndarray, P_L: np.ndarray) -> SymplecticSpectrum:
    """nu_i = sqrt(eig(4 Q_L P_L)) via the symmetrized congruence
    4 sqrt(Q) P sqrt(Q), which keeps the problem symmetric in floating point."""
    Q_L = np.asarray(Q_L, dtype=float)
    P_L = np.asarray(P_L, dtype=float)
    if Q_L.ndim == 0:
        Q_L = Q_L.reshape(1, 1)
        P_L = P_L.reshape(1, 1)
    for name, A in (("Q", Q_L), ("P", P_L)):
        if not np.allclose(A, A.T, rtol=0, atol=1e-12 * np.max(np.abs(A))):
            raise ValueError(f"{name} block is not symmetric")
    w, U = np.linalg.eigh(Q_L)
    if w[0] <= 0:
        raise ValueError("Q block is not positive-definite")
    if np.linalg.eigvalsh(P_L)[0] <= 0:
        raise ValueError("P block is not positive-definite")
    S = (U * np.sqrt(w)) @ U.T
    prod = 4.0 * S @ P_L @ S
    ev = np.linalg.eigvalsh(0.5 * (prod + prod.T))
    return _spectrum_from_values(np.sqrt(np.clip(ev, 0.0, None)))


def _entropy_terms(nu: np.ndarray) -> np.ndarray:
    # nu = 1 contributes exactly zero: the (nu-1) term is defined as 0.
    out = np.zeros_like(nu)
    m = nu > 1.0
    up = (nu[m] + 1.0) / 2.0
    dn = (nu[m] - 1.0) / 2.0
    out[m] = up * np.log2(up) - dn * np.log2(dn)
    return out


def block_entropy(spectrum: SymplecticSpectrum, mode: str = "degenerate_once",
                  pairing_tol: float = DEFAULT_PAIRING_TOL) -> float:
    """Block von Neumann entropy in bits.

    ``count_all`` sums over every eigenvalue (the literal entropy of the
    reduced state); ``degenerate_once`` merges eigenvalues equal within
    ``pairing_tol`` (relative) and counts each merged value once.  Beware
    that on large blocks a loose tolerance can merge accidentally close
    values from different symmetry sectors.
    """
    nu = spectrum.values
    if mode == "count_all":
        return float(np.sum(_entropy_terms(nu)))
    if mode == "degenerate_once":
        reps = np.array([v for v, _ in spectrum.grouped(pairing_tol)])
        return float(np.sum(_entropy_terms(reps)))
    raise ValueError(f"unknown entropy mode {mode!r}")


def _covariances_for(params: CouplingParams, spec: LatticeSpec, engine: str | None,
                     max_displacement: int, quad: QuadratureSpec | None):
    engine = engine or ("infinite" if spec.infinite else
                        "fft" if spec.boundary == "periodic" else "dense")
    if engine == "dense":
        if spec.infinite:
            raise ValueError("dense engine needs a finite lattice")
        return covariance_dense(build_potential(spec, params))
    if engine == "fft":
        return covariance_pbc_fft(spec, params)
    if engine == "infinite":
        d = range(max_displacement + 1)
        return covariance_infinite(params, [(i, j) for i in d for j in d], quad=quad)
    raise ValueError(f"unknown engine {engine!r}")


def entropy_vs_L(params: CouplingParams, spec: LatticeSpec, L_list,
                 mode: str = "degenerate_once", engine: str | None = None,
                 quad: QuadratureSpec | None = None,
                 pairing_tol: float = DEFAULT_PAIRING_TOL) -> list[tuple[int, float]]:
    """Entropy of centered L x L blocks for each L, engine chosen per spec."""
    L_list = [int(L) for L in L_list]
    if any(b <= a for a, b in zip(L_list, L_list[1:])):
        raise ValueError("L_list must be strictly increasing")
    if not spec.infinite and L_list[-1] > spec.side:
        raise ValueError("largest block exceeds the lattice")
    cov = _covariances_for(params, spec, engine, L_list[-1] - 1, quad)
    lattice_side = spec.side if not spec.infinite else L_list[-1]
    out = []
    for L in L_list:
        region = BlockRegion.centered(L, lattice_side)
        QL, PL = _submatrices(cov, region.sites())
        out.append((L, block_entropy(symplectic_spectrum(QL, PL), mode, pairing_tol)))
    return out


@dataclass(frozen=True)
class TwoSiteParams:
    n: float
    c: float
    zeta: float
    eof: float
    separable: bool
    sign_anomaly: bool


def eof_symmetric(zeta: float) -> float:
    """Entanglement of formation (bits) of a symmetric pair, from zeta alone.

    Zero at and above the separability boundary zeta = 1; below it,
    f(zeta) = c+ log2 c+ - c- log2 c-  with  c+- = (zeta^(-1/2) +- zeta^(1/2))^2 / 4.
    """
    if zeta <= 0:
        raise ValueError("zeta must be positive for a physical state")
    if zeta >= 1.0:
        return 0.0
    cp = (zeta ** -0.5 + zeta ** 0.5) ** 2 / 4.0
    cm = (zeta ** -0.5 - zeta ** 0.5) ** 2 / 4.0
    val = cp * np.log2(cp)
    if cm > 0:
        val -= cm * np.log2(cm)
    return float(val)


def two_site_params(cov, site_i, site_j, sym_rel_tol: float = 1e-6) -> TwoSiteParams:
    """Entanglement parameters of the pair (site_i, site_j), given as (x, y).

    The pair must be symmetric: equal on-site moments within ``sym_rel_tol``
    (automatic for periodic/infinite engines).  If the q and p cross
    correlations share a sign, the state is outside the symmetric normal
    form; c is recorded as 0 and the anomaly flagged, which keeps the
    separability verdict conservative.
    """
    if tuple(site_i) == tuple(site_j):
        raise ValueError("two-site parameters need two distinct sites")
    (Q, P) = _submatrices(cov, [tuple(site_i), tuple(site_j)])
    qii, qjj, qij = Q[0, 0], Q[1, 1], Q[0, 1]
    pii, pjj, pij = P[0, 0], P[1, 1], P[0, 1]
    for a, b, label in ((qii, qjj, "<q^2>"), ((pii), (pjj), "<p^2>")):
        if abs(a - b) > sym_rel_tol * max(abs(a), abs(b)):
            raise ValueError(
                f"asymmetric pair: on-site {label} differ by more than {sym_rel_tol:g} "
                "(relative); center the pair in the lattice")
    n = 2.0 * (qii * pii * qjj * pjj) ** 0.25
    prod = qij * pij
    sign_anomaly = prod > 0
    c = 0.0 if sign_anomaly else 2.0 * np.sqrt(-prod)
    zeta = n - c
    return TwoSiteParams(n=float(n), c=float(c), zeta=float(zeta),
                         eof=eof_symmetric(zeta), separable=bool(zeta >= 1.0),
                         sign_anomaly=bool(sign_anomaly))
