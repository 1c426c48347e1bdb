"""Upper bound on the detection error probability and error exponents.

For a tilt parameter ``b`` the bound objective is

    log A(b) = (n/2) * log((cosh 2b + cosh 2eps) / 2) + log Z(theta, -beta(b))
    beta(b)  = gamma + 0.5 * log(cosh(b - eps) / cosh(b + eps))

and ``log P_e <= min_b log A(b) - log Z(theta, -gamma) - n * log cosh(eps)``.
Dividing by ``-n`` gives the exponent lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .graph import Network
from .ising import CLOSED_FORMS, log_partition
from .optimize import NumericalDomainError, golden_section, grid_then_golden

B_HALF_WIDTH = 8.0
B_STEP = 0.05
B_TOL = 1e-10
DEFAULT_N_EVAL = 100

Topology = Union[Network, str]


@dataclass(frozen=True)
class BoundResult:
    log_pe_ub: float
    b_star: float
    beta_star: float
    evaluations: int
    n: int

    @property
    def pe_ub(self) -> float:
        return math.exp(self.log_pe_ub)


@dataclass(frozen=True)
class ExponentPoint:
    alpha: float
    alpha_raw: float
    clamped: bool
    topology_tag: str
    n_eval: Optional[int]
    theta: float
    gamma: float
    epsilon: float
    b_star: float = math.nan


def log_cosh(a):
    a = np.abs(a)
    return a + np.log1p(np.exp(-2.0 * a)) - math.log(2.0)


def beta_of_b(b, gamma: float, eps: float):
    out = gamma + 0.5 * (log_cosh(np.subtract(b, eps)) - log_cosh(np.add(b, eps)))
    return float(out) if np.ndim(out) == 0 else out


def log_cosh_mixture(b, eps: float):
    """log((cosh 2b + cosh 2eps) / 2), via cosh(b+eps) * cosh(b-eps)."""
    out = log_cosh(np.add(b, eps)) + log_cosh(np.subtract(b, eps))
    return float(out) if np.ndim(out) == 0 else out


def log_cosh_product(b: float, eps: float, x) -> float:
    """log prod_i cosh(b + eps * x_i), term by term."""
    x = np.asarray(x, dtype=np.float64)
    return float(np.sum(log_cosh(b + eps * x)))


def log_cosh_product_factored(b: float, eps: float, x) -> float:
    """Same product through the mixture / magnetisation factorisation."""
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    half_log_ratio = 0.5 * (log_cosh(b + eps) - log_cosh(b - eps))
    return 0.5 * n * math.log((math.cosh(2 * b) + math.cosh(2 * eps)) / 2) + half_log_ratio * x.sum()


def _log_z_fn(topology: Topology, n: Optional[int], theta: float) -> tuple[Callable, int, str]:
    if isinstance(topology, Network):
        g = topology
        return (lambda h: log_partition(g, theta, h)), g.n, g.topology_tag
    tag = "ring" if topology == "chain" else topology
    if tag not in CLOSED_FORMS:
        raise ValueError(f"topology {topology!r} has no closed form; pass a Network")
    if n is None:
        raise ValueError("node count required for a topology tag")
    fn = CLOSED_FORMS[tag]
    fn(n, theta, 0.0)  # validates n and theta
    return (lambda h: fn(n, theta, h)), n, tag


def _check_params(theta, gamma, eps):
    for name, v in (("theta", theta), ("gamma", gamma), ("epsilon", eps)):
        if not v >= 0:
            raise ValueError(f"{name} must be >= 0, got {v}")
        if math.isinf(v):
            raise NumericalDomainError(f"{name} must be finite for the bound, got {v}")


def log_objective_A(b, topology: Topology, theta: float, gamma: float, eps: float,
                    n: Optional[int] = None):
    """log A(b); vectorised over ``b``."""
    log_z, n, _ = _log_z_fn(topology, n, theta)
    beta = beta_of_b(b, gamma, eps)
    return 0.5 * n * log_cosh_mixture(b, eps) + log_z(-np.asarray(beta))


def pe_upper_bound(topology: Topology, theta: float, gamma: float, eps: float,
                   n: Optional[int] = None) -> BoundResult:
    _check_params(theta, gamma, eps)
    log_z, n, _ = _log_z_fn(topology, n, theta)

    def objective(b):
        return 0.5 * n * log_cosh_mixture(b, eps) + log_z(-np.asarray(beta_of_b(b, gamma, eps)))

    best = grid_then_golden(lambda b: float(objective(b)), objective,
                            half_width=B_HALF_WIDTH, step=B_STEP, tol=B_TOL)
    log_pe = best.fx - log_z(-gamma) - n * float(log_cosh(eps))
    if not math.isfinite(log_pe):
        raise NumericalDomainError("bound evaluated to a non-finite value")
    return BoundResult(float(log_pe), best.x, beta_of_b(best.x, gamma, eps), best.evaluations, n)


def exponent_lower_bound(topology: Topology, theta: float, gamma: float, eps: float,
                         n: Optional[int] = DEFAULT_N_EVAL) -> ExponentPoint:
    """Finite-n exponent ``-log(P_e,UB) / n``, clamped at zero."""
    _, n_used, tag = _log_z_fn(topology, n, theta)
    res = pe_upper_bound(topology, theta, gamma, eps, n_used)
    raw = -res.log_pe_ub / n_used
    return ExponentPoint(raw if raw > 0.0 else 0.0, raw, raw < 0.0, tag, n_used, theta, gamma, eps, res.b_star)


def exponent_iid(gamma: float, eps: float) -> ExponentPoint:
    """Exponent with no network: log cosh eps + log cosh gamma
    - 0.5 * log(cosh^2 eps + cosh^2 gamma - 1)."""
    _check_params(0.0, gamma, eps)
    val = (float(log_cosh(eps)) + float(log_cosh(gamma))
           - 0.5 * math.log(math.cosh(eps) ** 2 + math.sinh(gamma) ** 2))
    return ExponentPoint(val if val > 0.0 else 0.0, val, val < 0.0, "iid", None, 0.0, gamma, eps)


def chernoff_iid_oracle(gamma: float, eps: float) -> float:
    """Chernoff information between Bernoulli(q) and Bernoulli(1 - q).

    ``q`` is the probability that one observation agrees with the latent bit
    when nodes are independent.
    """
    q = math.cosh(gamma + eps) / (2.0 * math.cosh(gamma) * math.cosh(eps))
    r = 1.0 - q

    def log_mgf(s):
        return math.log(q ** s * r ** (1 - s) + r ** s * q ** (1 - s))

    return -golden_section(log_mgf, 0.0, 1.0, tol=1e-12).fx
