"""Quadrature configuration, Gauss-Legendre grids and seeded Monte Carlo.

Everything here is deterministic given the full configuration: node
counts fix the Gauss grids, and Monte Carlo streams come from a PCG64
generator consumed in fixed-size blocks whose partial sums are reduced
in block order.
"""

from dataclasses import asdict, dataclass

import numpy as np


@dataclass(frozen=True)
class QuadratureConfig:
    gl_nodes: int = 64          # Gauss-Legendre nodes per ordinary dimension
    mc_samples: int = 200_000   # Monte Carlo samples for fiber integrals
    rng_seed: int = 20_260_809
    mc_block: int = 65_536      # samples per block; reduction is block-ordered

    def __post_init__(self):
        if self.gl_nodes < 2:
            raise ValueError("gl_nodes must be at least 2")
        if self.mc_samples < 1:
            raise ValueError("mc_samples must be at least 1")
        if self.mc_block < 1:
            raise ValueError("mc_block must be at least 1")

    def as_dict(self):
        return asdict(self)

    def with_nodes(self, gl_nodes):
        return QuadratureConfig(gl_nodes, self.mc_samples,
                                self.rng_seed, self.mc_block)


_GAUSS_CACHE = {}


def gauss_01(n):
    """Gauss-Legendre nodes and weights on [0, 1]."""
    if n not in _GAUSS_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GAUSS_CACHE[n] = ((x + 1.0) / 2.0, w / 2.0)
    return _GAUSS_CACHE[n]


def simplex_axis_weights(q, n):
    """Per-axis nodes and weights for the ordered simplex 0<=t_1<=...<=t_q<=1.

    Uses the substitution t_a = u_a * u_{a+1} * ... * u_q on [0,1]^q with
    Jacobian prod_a u_a^(a-1); the Jacobian folds into the axis weights.
    Returns (nodes, weights): lists of q arrays; axis a carries weight
    w * x**(a-1) (0-indexed a).
    """
    x, w = gauss_01(n)
    nodes = [x for _ in range(q)]
    weights = [w * x ** a for a in range(q)]
    return nodes, weights


def simplex_times(q, n):
    """Meshgrid arrays t_1..t_q over the ordered simplex.

    t_a has shape (n,)*(q-a+1) indexed by axes (u_a, ..., u_q); the full
    integrand lives on the q-dimensional u grid.
    """
    x, _ = gauss_01(n)
    times = []
    for a in range(q):
        t = x.copy()
        for _b in range(a + 1, q):
            t = np.multiply.outer(t, x)
        # t currently indexed (u_a, u_{a+1}, ..., u_q)
        times.append(t)
    return times


def mc_blocks(config, total=None):
    """Yield (generator-draw callable, block size) in deterministic order."""
    total = config.mc_samples if total is None else total
    rng = np.random.Generator(np.random.PCG64(config.rng_seed))
    done = 0
    while done < total:
        size = min(config.mc_block, total - done)
        yield rng, size
        done += size


def mc_mean(config, block_fn, total=None):
    """Blockwise Monte Carlo mean with standard error.

    ``block_fn(rng, size)`` returns an array of ``size`` sample values.
    Partial sums accumulate in block order, so results are bit-identical
    for a fixed configuration.
    """
    total = config.mc_samples if total is None else total
    acc = 0.0
    acc_sq = 0.0
    count = 0
    for rng, size in mc_blocks(config, total):
        values = block_fn(rng, size)
        acc += float(np.sum(values))
        acc_sq += float(np.sum(values * values))
        count += size
    mean = acc / count
    var = max(acc_sq / count - mean * mean, 0.0)
    return mean, (var / count) ** 0.5
