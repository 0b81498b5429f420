"""Parametric families of loops in configuration space.

A LinearLoopFamily moves every component of a link along perturbation
curves, linearly in the family parameters: component c at parameter u is

    K_c(t; u) = base_c(t) + sum_b u_b * pert_{b,c}(t).

These families realize faces of parameter cubes in the free loop space,
which is what the closedness checks integrate over: a form on the loop
space is closed iff its integral over every small cube boundary
vanishes.  The evaluators here pair word forms, the wedge-sum form and
explicit test forms with such families, using the same contraction and
interleave conventions as the cycle engine.
"""

import itertools

import numpy as np

from .chen import (CYCLIC_WEDGES, _SHUFFLES_22, _pair_contract, _perm_sign,
                   green_form_value, interleave_sign)
from .quadrature import gauss_01, simplex_times


class LinearLoopFamily:
    def __init__(self, base, perturbations):
        self.base = tuple(base)
        self.perturbations = tuple(tuple(p) for p in perturbations)
        for p in self.perturbations:
            if len(p) != len(self.base):
                raise ValueError("perturbation rows must cover all components")

    @property
    def ncomp(self):
        return len(self.base)

    @property
    def dim(self):
        return len(self.perturbations)

    def face(self, axis, side):
        """Restrict one parameter to 0 or 1; the rest stay in order."""
        base = [c.translated((0, 0, 0)) for c in self.base]
        if side:
            pert = self.perturbations[axis]
            base = [_sum_curves(b, p) for b, p in zip(base, pert)]
        rest = [self.perturbations[b] for b in range(self.dim) if b != axis]
        return LinearLoopFamily(base, rest)

    def positions(self, t, u_grids):
        """Component positions on the (t x u) product grid.

        t: (T,) array; u_grids: list of dim arrays.  Returns a list of
        arrays of shape (T, n_0, ..., n_{p-1}, 3).
        """
        shape = [len(t)] + [len(g) for g in u_grids]
        out = []
        for c in range(self.ncomp):
            pos = _expand(self.base[c].position(t), 0, shape)
            for b, grid in enumerate(u_grids):
                pos = pos + _expand(self.perturbations[b][c].position(t), 0, shape) \
                    * _expand(grid, b + 1, shape)[..., None]
            out.append(pos)
        return out

    def velocities(self, t, u_grids):
        shape = [len(t)] + [len(g) for g in u_grids]
        out = []
        for c in range(self.ncomp):
            vel = _expand(self.base[c].velocity(t), 0, shape)
            for b, grid in enumerate(u_grids):
                vel = vel + _expand(self.perturbations[b][c].velocity(t), 0, shape) \
                    * _expand(grid, b + 1, shape)[..., None]
            out.append(vel)
        return out

    def parameter_tangent(self, b, t, u_grids):
        """d(position)/du_b per component, on the same grid."""
        shape = [len(t)] + [len(g) for g in u_grids]
        return [_expand(self.perturbations[b][c].position(t), 0, shape)
                for c in range(self.ncomp)]


def _sum_curves(a, b):
    from .curves import CurveComponent
    k = max(a.harmonics, b.harmonics)

    def pad(m, rows):
        out = np.zeros((k, 3))
        out[:rows.shape[0]] = rows
        return out

    return CurveComponent(a.const + b.const,
                          pad(k, a.cos) + pad(k, b.cos),
                          pad(k, a.sin) + pad(k, b.sin))


def _expand(arr, axis, shape):
    """Put a (T,...,3) or (n,) array at position `axis` of the grid."""
    arr = np.asarray(arr)
    vector = arr.ndim > 1
    target = [1] * len(shape) + ([3] if vector else [])
    target[axis] = arr.shape[0]
    return arr.reshape(target)


def _stack_conf(arrays):
    """Per-component arrays (..., 3) -> configuration array (..., n, 3)."""
    return np.stack(arrays, axis=-2)


def word_form_on_family(words, family, config, min_norm=1e-6):
    """Pair sum_w coeff * (iterated word 2-form) with a 2-parameter family.

    Same conventions as the cycle engine: ordered time simplex, the
    alternating sum over leg assignments, and the interleave sign.
    """
    if family.dim != 2:
        raise ValueError("word forms of length 2 pair with 2-parameter families")
    n = config.gl_nodes
    x, w = gauss_01(n)
    times = simplex_times(2, n)
    t_flat0 = times[0].reshape(-1)
    t_flat1 = times[1]
    u_grids = [x, x]

    total = 0.0
    for coeff, word in words:
        if len(word) != 2:
            raise ValueError("only length-2 words pair with 2-parameter families")
        acc = 0.0
        for perm in itertools.permutations(range(2)):
            sgn = _perm_sign(perm)
            fs = []
            for a, pair in enumerate(word):
                t = t_flat0 if a == 0 else t_flat1
                pos = _stack_conf(family.positions(t, u_grids))
                vel = _stack_conf(family.velocities(t, u_grids))
                wleg = _stack_conf(family.parameter_tangent(perm[a], t, u_grids))
                fs.append(_pair_contract(pos, pair, vel, wleg, min_norm))
            f0 = fs[0].reshape(n, n, n, n)      # (u0, u1, s0, s1)
            f1 = fs[1]                          # (u1, s0, s1)
            acc += sgn * float(np.einsum(
                "abcd,bcd,a,b,c,d->", f0, f1, w, w * x, w, w))
        total += coeff * interleave_sign(2) * acc
    return total


def iterated_3form_on_family(form3, family, config):
    """Pair int(beta) with a 2-parameter family: integral over t and u of
    beta(gamma(t))(velocity, W_1, W_2)."""
    if family.dim != 2:
        raise ValueError("needs a 2-parameter family")
    n = config.gl_nodes
    x, w = gauss_01(n)
    u_grids = [x, x]
    pos = _stack_conf(family.positions(x, u_grids))
    vel = _stack_conf(family.velocities(x, u_grids))
    w1 = _stack_conf(family.parameter_tangent(0, x, u_grids))
    w2 = _stack_conf(family.parameter_tangent(1, x, u_grids))
    vals = form3(pos, vel, w1, w2)
    return float(np.einsum("abc,a,b,c->", vals, w, w, w))


def iterated_4form_on_cube(form4, family, config):
    """Pair int(alpha) with a 3-parameter family: integral over t and the
    cube of alpha(gamma(t))(velocity, W_1, W_2, W_3)."""
    if family.dim != 3:
        raise ValueError("needs a 3-parameter family")
    n = config.gl_nodes
    x, w = gauss_01(n)
    u_grids = [x, x, x]
    pos = _stack_conf(family.positions(x, u_grids))
    vel = _stack_conf(family.velocities(x, u_grids))
    ws = [_stack_conf(family.parameter_tangent(b, x, u_grids)) for b in range(3)]
    vals = form4(pos, vel, *ws)
    return float(np.einsum("abcd,a,b,c,d->", vals, w, w, w, w))


def wedge_sum_form4(pos, v0, v1, v2, v3, min_norm=1e-6):
    """The closed cyclic wedge-sum four-form contracted with four tangents."""
    total = 0.0
    vectors = (v0, v1, v2, v3)
    for csgn, pa, pb in CYCLIC_WEDGES:
        for (s1, s2), (s3, s4), sgn in _SHUFFLES_22:
            total = total + csgn * sgn \
                * _pair_contract(pos, pa, vectors[s1], vectors[s2], min_norm) \
                * _pair_contract(pos, pb, vectors[s3], vectors[s4], min_norm)
    return total


def cube_boundary_pairing(pair_with_face, family3):
    """Sum of face pairings with Stokes orientation signs.

    ``pair_with_face(face_family)`` evaluates the 2-form against one
    face; faces enter as sum_a (-1)^a (top - bottom).
    """
    total = 0.0
    for a in range(family3.dim):
        for side in (0, 1):
            sign = (-1.0) ** a * (1.0 if side else -1.0)
            total += sign * pair_with_face(family3.face(a, side))
    return total
