"""Independent reference computations shared by the test modules."""
import numpy as np
from scipy.optimize import linear_sum_assignment


def socp_capacity(lam) -> float:
    """max Re sum(beta * lam) s.t. sum(beta) = 0, sum|beta| <= 1, by a conic solver.

    The objective is phase invariant (beta -> e^{ia} beta keeps feasibility),
    so maximizing the real part equals maximizing the modulus.
    """
    import cvxpy as cp

    lam = np.asarray(lam, dtype=complex)
    beta = cp.Variable(lam.size, complex=True)
    prob = cp.Problem(cp.Maximize(cp.real(lam @ beta)), [cp.sum(beta) == 0, cp.norm1(beta) <= 1])
    prob.solve()
    return float(prob.value)


def sampled_capacity(lam, samples=100_000, seed=0) -> float:
    """Best |sum beta lam| over random feasible beta; a lower bound on the capacity."""
    lam = np.asarray(lam, dtype=complex)
    rng = np.random.default_rng(seed)
    best = 0.0
    for chunk in range(0, samples, 10_000):
        size = min(10_000, samples - chunk)
        # sparse supports reach the extreme points far more often than dense draws
        beta = rng.standard_normal((size, lam.size)) + 1j * rng.standard_normal((size, lam.size))
        beta *= rng.random((size, lam.size)) < 3.0 / lam.size
        beta -= beta.mean(axis=1, keepdims=True)
        norm = np.abs(beta).sum(axis=1, keepdims=True)
        beta = beta[norm[:, 0] > 0] / norm[norm[:, 0] > 0]
        best = max(best, float(np.abs(beta @ lam).max(initial=0.0)))
    return best


def multiset_gap(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return np.inf
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def random_k(n, rng):
    """exp of a random element of the +1 eigenspace of the spin-flip involution."""
    from scipy.linalg import expm

    from ccd_lab.spinflip import pk_split

    dim = 2**n
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    x = (a - a.conj().T) / 2
    x -= np.trace(x) / dim * np.eye(dim)
    return expm(pk_split(x)[1])
