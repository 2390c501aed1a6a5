import numpy as np
import pytest

from spinwave import CouplingParams


@pytest.fixture
def paper_params():
    """omega = 500 kappa, N = 1000, equal couplings g1 = g2 = 1.5 kappa."""
    return CouplingParams(omega=500.0, kappa=1.0, n_atoms=1000, g1=1.5, g2=1.5)


def params_at(g, g2=None, omega=500.0, n_atoms=1000):
    return CouplingParams(omega=omega, kappa=1.0, n_atoms=n_atoms,
                          g1=g, g2=g if g2 is None else g2)


def full_matrices(table, side):
    """Assemble full (Q, P) from a periodic correlation table, row-major sites."""
    n = side * side
    Q = np.empty((n, n))
    P = np.empty((n, n))
    for a in range(n):
        xa, ya = a % side, a // side
        for b in range(n):
            xb, yb = b % side, b // side
            Q[a, b] = table.qq_at(xa - xb, ya - yb)
            P[a, b] = table.pp_at(xa - xb, ya - yb)
    return Q, P
