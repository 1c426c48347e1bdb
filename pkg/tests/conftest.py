import itertools
import math

import numpy as np
import pytest

from latsent.ising import ModelParams


def all_spins(n):
    return [np.array(s, dtype=np.int8) for s in itertools.product((1, -1), repeat=n)]


def oracle_log_z(g, theta, h):
    """Plain itertools enumeration; shares no code with the package kernels."""
    terms = []
    for x in all_spins(g.n):
        e = sum(int(x[i]) * int(x[j]) for i, j in g.edges)
        terms.append(theta * e + h * int(x.sum()))
    m = max(terms)
    return m + math.log(sum(math.exp(t - m) for t in terms))


def oracle_log_l(y, g, p):
    def ev(sign):
        terms = []
        for x in all_spins(g.n):
            e = sum(int(x[i]) * int(x[j]) for i, j in g.edges)
            terms.append(p.theta * e + p.epsilon * int(np.dot(y, x)) + sign * p.gamma * int(x.sum()))
        m = max(terms)
        return m + math.log(sum(math.exp(t - m) for t in terms))
    return ev(1) - ev(-1)


@pytest.fixture
def params():
    return ModelParams(0.5, 0.5, 0.5)
