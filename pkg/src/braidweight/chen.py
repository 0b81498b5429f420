"""Numerical iterated integrals of Green forms over loop-space cycles.

The unit-sphere volume form, normalized so its sphere integral is 1,
contracts as

    omega(r)(u, v) = <r, u x v> / (4 pi |r|^3),

and the pair form for components (i, j) pulls tangent vectors through
the difference x_j - x_i.  A cycle is built from factors, each driving
one component with loop time while its passengers sit at cycle
parameters; multiple factors compose by time concatenation.  For a
length-q word paired against a q-dimensional cycle the evaluation
factorizes: each factor integrates its consecutive subword over an
ordered time simplex against its own passenger parameters, and the
factor values multiply, with the alternating sum over assignments of
parameter legs to letters and the global interleave sign
(-1)^(q(q-1)/2) from ordering (times, parameters).

Sign conventions the tests pin down numerically:
  * the artifact's linking-number orientation is fixed by the Hopf
    fixture;
  * C_PHI normalizes the fiber-integral three-form so that its exterior
    derivative equals the cyclic wedge sum (Stokes test on cells);
  * PHI_TERM_SIGN makes  sum-of-words + PHI_TERM_SIGN * phi-term  a
    closed form on the loop space (cube-boundary test), which is what
    makes the order-2 total isotopy invariant.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import SingularityError
from .quadrature import QuadratureConfig, gauss_01, mc_blocks, simplex_times

FOUR_PI = 4.0 * math.pi

# pinned by tests/test_calibration.py (cell Stokes and loop-cube closedness)
C_PHI = 1.0
PHI_TERM_SIGN = 1.0


def interleave_sign(q):
    return -1.0 if (q * (q - 1) // 2) % 2 else 1.0


# ----------------------------------------------------------------------
# Green form
# ----------------------------------------------------------------------

def green_form_value(r, u, v, min_norm=1e-9):
    """The normalized solid-angle form at r contracted with (u, v).

    Vectorized over leading axes; raises SingularityError if any |r|
    falls below min_norm.
    """
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    norms = np.sqrt(np.sum(r * r, axis=-1))
    if np.any(norms < min_norm):
        raise SingularityError(
            f"Green form evaluated {float(np.min(norms)):.3e} from the "
            f"diagonal (threshold {min_norm:.3e})")
    num = np.sum(r * np.cross(u, v), axis=-1)
    return num / (FOUR_PI * norms ** 3)


def sphere_form_integral(nodes=32):
    """Numerical integral of the normalized form over the unit sphere."""
    x, w = gauss_01(nodes)
    theta = np.pi * x
    phi = 2.0 * np.pi * x
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    st, ct = np.sin(th), np.cos(th)
    sp, cp = np.sin(ph), np.cos(ph)
    r = np.stack([st * cp, st * sp, ct], axis=-1)
    dth = np.stack([ct * cp, ct * sp, -st], axis=-1)
    dph = np.stack([-st * sp, st * cp, np.zeros_like(st)], axis=-1)
    vals = green_form_value(r, dth, dph)
    weight = np.multiply.outer(w * np.pi, w * 2.0 * np.pi)
    return float(np.sum(vals * weight))


# ----------------------------------------------------------------------
# Cycles
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CycleFactor:
    driver: int
    passengers: tuple

    def __post_init__(self):
        object.__setattr__(self, "passengers", tuple(self.passengers))
        if self.driver in self.passengers:
            raise ValueError("a factor's driver cannot also be a passenger")
        if len(set(self.passengers)) != len(self.passengers):
            raise ValueError("duplicate passenger in one factor")


@dataclass(frozen=True)
class CycleSpec:
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("a cycle needs at least one factor")

    @property
    def dim(self):
        return sum(len(f.passengers) for f in self.factors)

    def check_components(self, ncomp):
        for f in self.factors:
            for c in (f.driver,) + f.passengers:
                if not (1 <= c <= ncomp):
                    raise ValueError(
                        f"cycle references component {c} of a {ncomp}-component link")

    @classmethod
    def standard(cls, ncomp):
        """Driver 1, all other components as passengers in order."""
        return cls((CycleFactor(1, tuple(range(2, ncomp + 1))),))


@dataclass(frozen=True)
class IntegrandSpec:
    """Word terms sum_coeff int w_{i1j1}...w_{ikjk} plus phi correction terms."""

    words: tuple        # of (coeff, ((i,j), ...))
    phi_terms: tuple = ()   # of (coeff, (i,j,k))

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(
            (float(c), tuple(tuple(p) for p in w)) for c, w in self.words))
        object.__setattr__(self, "phi_terms", tuple(
            (float(c), tuple(t)) for c, t in self.phi_terms))

    def word_length(self):
        lengths = {len(w) for _, w in self.words}
        if len(lengths) > 1:
            raise ValueError("mixed word lengths in one integrand")
        return lengths.pop() if lengths else 0

    def check_components(self, ncomp):
        for _, w in self.words:
            for (i, j) in w:
                if not (1 <= i <= ncomp and 1 <= j <= ncomp) or i == j:
                    raise ValueError(f"bad pair ({i},{j}) for {ncomp} components")
        for _, (i, j, k) in self.phi_terms:
            if len({i, j, k}) != 3 or not all(1 <= c <= ncomp for c in (i, j, k)):
                raise ValueError(f"bad phi triple ({i},{j},{k})")


def order2_integrand():
    """The cyclic order-2 words with their phi correction on 3 components."""
    return IntegrandSpec(
        words=((1, ((1, 2), (2, 3))), (1, ((2, 3), (1, 3))), (1, ((1, 3), (1, 2)))),
        phi_terms=((1, (1, 2, 3)),))


# ----------------------------------------------------------------------
# Word integrals over cycles
# ----------------------------------------------------------------------

_AXIS_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _segment_value(link, factor, subword, slot_perm, config, min_norm):
    """One factor's simplex integral for one assignment of parameter legs.

    Letter a of the subword takes its time leg from the factor driver's
    velocity and its parameter leg from passenger slot slot_perm[a].
    Returns the scalar integral over (ordered times) x (parameter cube).
    """
    q = len(subword)
    d = factor.driver
    comps = link.components
    nt = config.gl_nodes
    times = simplex_times(q, nt)
    tx, tw = gauss_01(nt)
    sx, sw = gauss_01(nt)

    # axis labels: 0..q-1 the simplex axes, then one per passenger slot
    s_axis = {slot: q + slot for slot in range(len(factor.passengers))}
    passenger_pos = {c: comps[c - 1].position(sx) for c in factor.passengers}
    passenger_vel = {c: comps[c - 1].velocity(sx) for c in factor.passengers}
    slot_of = {c: i for i, c in enumerate(factor.passengers)}

    operands = []
    subscripts = []
    used_axes = set()
    for a, (i, j) in enumerate(subword):
        c = factor.passengers[slot_perm[a]]
        sign_t = (1 if j == d else 0) - (1 if i == d else 0)
        sign_s = (1 if j == c else 0) - (1 if i == c else 0)
        if sign_t == 0 or sign_s == 0:
            return 0.0
        t_axes = list(range(a, q))
        t_arr = times[a]
        # positions of the pair, with broadcastable axes
        letter_axes = list(t_axes)
        for comp in sorted({i, j} & set(factor.passengers)):
            letter_axes.append(s_axis[slot_of[comp]])

        def placed(arr, axes):
            # embed arr (whose axes are `axes` + xyz) into letter_axes + xyz;
            # axes always appear in letter_axes order, so a reshape suffices
            target = [arr.shape[axes.index(ax)] if ax in axes else 1
                      for ax in letter_axes] + [3]
            return np.asarray(arr).reshape(target)

        def pos_of(comp):
            if comp == d:
                return comps[comp - 1].position(t_arr), t_axes
            if comp in factor.passengers:
                return passenger_pos[comp], [s_axis[slot_of[comp]]]
            return comps[comp - 1].position(0.0), []

        pi, pi_axes = pos_of(i)
        pj, pj_axes = pos_of(j)
        r = placed(pj, pj_axes) - placed(pi, pi_axes)
        u_leg = placed(comps[d - 1].velocity(t_arr), t_axes)
        v_leg = placed(passenger_vel[c], [s_axis[slot_of[c]]])
        vals = (sign_t * sign_s) * green_form_value(r, u_leg, v_leg, min_norm)
        operands.append(vals)
        subscripts.append("".join(_AXIS_LETTERS[ax] for ax in letter_axes))
        used_axes.update(letter_axes)

    # per-axis weights: simplex jacobian folds into the time axes
    for ax in sorted(used_axes):
        if ax < q:
            operands.append(tw * tx ** ax)
        else:
            operands.append(sw)
        subscripts.append(_AXIS_LETTERS[ax])
    expr = ",".join(subscripts) + "->"
    return float(np.einsum(expr, *operands, optimize=True))


def word_integral(link, cyc, word, config, min_norm=None):
    """Pair one word's iterated integral with the cycle."""
    cyc.check_components(len(link))
    q = len(word)
    if q != cyc.dim:
        raise ValueError(
            f"word length {q} does not match cycle dimension {cyc.dim}")
    if min_norm is None:
        min_norm = link.clearance * 0.5
    total = interleave_sign(q)
    pos = 0
    for factor in cyc.factors:
        qf = len(factor.passengers)
        subword = word[pos:pos + qf]
        pos += qf
        if qf == 0:
            continue
        acc = 0.0
        for perm in itertools.permutations(range(qf)):
            sgn = _perm_sign(perm)
            acc += sgn * _segment_value(link, factor, subword, perm,
                                        config, min_norm)
        total *= acc
        if total == 0.0:
            return 0.0
    return total


def _perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def iterated_integral_over_cycle(ig, cyc, link, config, min_norm=None):
    """Evaluate an integrand's word part over the cycle.

    Phi correction terms are handled by the invariant drivers; this
    returns sum_w coeff * <int word, cycle>.  The empty word on a
    zero-dimensional cycle gives 1.
    """
    if isinstance(ig, IntegrandSpec):
        words = ig.words
        ig.check_components(len(link))
    else:
        words = tuple((float(c), tuple(w)) for c, w in ig)
    total = 0.0
    for coeff, word in words:
        if len(word) == 0:
            if cyc.dim != 0:
                raise ValueError("empty word against a positive-dimensional cycle")
            total += coeff
        else:
            total += coeff * word_integral(link, cyc, word, config, min_norm)
    return total


def linking_number(k1, k2, config, min_norm=None):
    """Gauss double integral; near an integer for embedded curves.

    Same orientation convention as the word engine, so the length-1 word
    (1,2) over the standard 2-component cycle agrees to roundoff.
    """
    from .curves import LinkEmbedding

    link = LinkEmbedding([k1, k2])
    if min_norm is None:
        min_norm = link.clearance * 0.5
    x, w = gauss_01(config.gl_nodes)
    p1 = k1.position(x)
    v1 = k1.velocity(x)
    p2 = k2.position(x)
    v2 = k2.velocity(x)
    r = p2[None, :, :] - p1[:, None, :]
    u = np.broadcast_to(-v1[:, None, :], r.shape)
    v = np.broadcast_to(v2[None, :, :], r.shape)
    vals = green_form_value(r, u, v, min_norm)
    return float(np.einsum("ts,t,s->", vals, w, w))


# ----------------------------------------------------------------------
# The fiber-integral three-form phi
# ----------------------------------------------------------------------

def _pair_partitions():
    """Splittings of 6 slots into 3 ordered pairs with shuffle signs."""
    out = []
    slots = (0, 1, 2, 3, 4, 5)
    for p1 in itertools.combinations(slots, 2):
        rest1 = [s for s in slots if s not in p1]
        for p2 in itertools.combinations(rest1, 2):
            p3 = tuple(s for s in rest1 if s not in p2)
            perm = p1 + p2 + p3
            out.append((p1, p2, p3, float(_perm_sign(perm))))
    return out


_PARTITIONS = _pair_partitions()
_PAIRS6 = list(itertools.combinations(range(6), 2))
_PAIR_INDEX = {p: i for i, p in enumerate(_PAIRS6)}
_PARTITION_IDX = [( _PAIR_INDEX[p1], _PAIR_INDEX[p2], _PAIR_INDEX[p3], sgn)
                  for p1, p2, p3, sgn in _PARTITIONS]


def _pairwise_max_distance(pts):
    """Max pairwise distance per configuration; pts (..., 3, 3)."""
    d = np.linalg.norm(pts[..., :, None, :] - pts[..., None, :, :], axis=-1)
    return d.reshape(d.shape[:-2] + (9,)).max(axis=-1)


def _sample_fiber(rng, size, points, scale):
    """Mixture sampler for the auxiliary point w.

    points: (..., 3, 3) with leading shape () or (size,).  Returns
    (w, pdf) with w (size, 3).  Components: a per-coordinate Cauchy
    stretch about the centroid (weight 1/2) and a 1/r^2-flattening ball
    around each of the three points (weight 1/6 each).
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 2:
        points = np.broadcast_to(points, (size, 3, 3))
    scale = np.broadcast_to(np.asarray(scale, dtype=float), (size,))
    centroid = points.mean(axis=1)

    choice = rng.random(size)
    rho = rng.random((size, 3))
    radial = rng.random(size)
    direction = rng.standard_normal((size, 3))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)

    others = [points[:, [b for b in range(3) if b != i], :] for i in range(3)]
    ball_r = np.stack([
        0.5 * np.linalg.norm(points[:, i, None, :] - others[i], axis=-1).min(axis=1)
        for i in range(3)], axis=1)                     # (size, 3)

    w = centroid + scale[:, None] * np.tan(np.pi * (rho - 0.5))
    for i in range(3):
        in_ball = (choice >= 0.5 + i / 6.0) & (choice < 0.5 + (i + 1) / 6.0)
        radius = np.maximum(radial * ball_r[:, i], 1e-12)
        w = np.where(in_ball[:, None],
                     points[:, i, :] + radius[:, None] * direction, w)

    # mixture density at the sampled w
    rel = (w - centroid) / scale[:, None]
    cauchy = np.prod(1.0 / (np.pi * scale[:, None] * (1.0 + rel * rel)), axis=1)
    pdf = 0.5 * cauchy
    for i in range(3):
        r = np.linalg.norm(w - points[:, i, :], axis=1)
        r = np.maximum(r, 1e-12)
        inside = r < ball_r[:, i]
        pdf = pdf + np.where(
            inside, 1.0 / (6.0 * FOUR_PI * ball_r[:, i] * r * r), 0.0)
    return w, pdf


def _phi_raw_block(points, legs, w):
    """Fiber integrand of the three-form at auxiliary points w.

    points: (S, 3, 3); legs: (S, 3, 3, 3) [leg, component, xyz];
    w: (S, 3).  Returns (S,) values of the triple-wedge contraction with
    the three legs followed by the fiber frame.
    """
    S = w.shape[0]
    # per form i, the six projected vectors: legs[k][i] and -e_j
    fiber = -np.eye(3)
    total = np.zeros(S)
    Ms = []
    lo = np.array([p[0] for p in _PAIRS6])
    hi = np.array([p[1] for p in _PAIRS6])
    for i in range(3):
        proj = np.concatenate(
            [legs[:, :, i, :], np.broadcast_to(fiber, (S, 3, 3))], axis=1)  # (S,6,3)
        a = points[:, i, :] - w                                           # (S,3)
        norms = np.linalg.norm(a, axis=1)
        norms = np.maximum(norms, 1e-12)
        cross = np.cross(proj[:, lo, :], proj[:, hi, :])                  # (S,15,3)
        M = np.einsum("sk,spk->sp", a, cross) / (FOUR_PI * norms ** 3)[:, None]
        Ms.append(M)
    for i1, i2, i3, sgn in _PARTITION_IDX:
        total += sgn * Ms[0][:, i1] * Ms[1][:, i2] * Ms[2][:, i3]
    return total


def phi123_value(x1, x2, x3, legs, config, raw=False):
    """Monte Carlo value of the correction three-form at one configuration.

    legs: (3, 3, 3) array, legs[k][c] the component-c part of the k-th
    tangent vector.  Returns (value, stderr); deterministic for a fixed
    config.  The normalization C_PHI is pinned by the Stokes test.
    """
    points = np.asarray([x1, x2, x3], dtype=float)
    if np.min([np.linalg.norm(points[i] - points[j])
               for i in range(3) for j in range(i + 1, 3)]) < 1e-9:
        raise SingularityError("phi requires three distinct points")
    legs = np.asarray(legs, dtype=float)
    scale = max(np.linalg.norm(points[i] - points[j])
                for i in range(3) for j in range(i + 1, 3))

    def block(rng, size):
        w, pdf = _sample_fiber(rng, size, points, scale)
        legs_b = np.broadcast_to(legs, (size, 3, 3, 3))
        pts_b = np.broadcast_to(points, (size, 3, 3))
        return _phi_raw_block(pts_b, legs_b, w) / pdf

    from .quadrature import mc_mean
    mean, err = mc_mean(config, block)
    factor = 1.0 if raw else C_PHI
    return factor * mean, abs(factor) * err


# ----------------------------------------------------------------------
# Wedge sums and Stokes cells
# ----------------------------------------------------------------------

# the closed cyclic combination w12^w23 + w23^w31 + w31^w12; for m = 3
# the flips w31 = -w13 make the last two terms enter with minus signs
# (this is the odd-m Arnold combination, the one that is exact)
CYCLIC_WEDGES = ((1.0, (1, 2), (2, 3)), (-1.0, (2, 3), (1, 3)),
                 (-1.0, (1, 3), (1, 2)))

_SHUFFLES_22 = (((0, 1), (2, 3), 1.0), ((0, 2), (1, 3), -1.0),
                ((0, 3), (1, 2), 1.0), ((1, 2), (0, 3), 1.0),
                ((1, 3), (0, 2), -1.0), ((2, 3), (0, 1), 1.0))


def _pair_contract(points, pair, va, vb, min_norm=1e-9):
    """omega_{ij} at a configuration, on two Conf tangents (..., 3, 3)."""
    i, j = pair
    r = points[..., j - 1, :] - points[..., i - 1, :]
    u = va[..., j - 1, :] - va[..., i - 1, :]
    v = vb[..., j - 1, :] - vb[..., i - 1, :]
    return green_form_value(r, u, v, min_norm)


def wedge_sum_4form(points, vectors, min_norm=1e-9):
    """The closed cyclic sum of wedge products, on four tangents.

    points (..., 3, 3); vectors: sequence of four (..., 3, 3) arrays.
    """
    total = 0.0
    for csgn, pa, pb in CYCLIC_WEDGES:
        for (s1, s2), (s3, s4), sgn in _SHUFFLES_22:
            total = total + csgn * sgn \
                * _pair_contract(points, pa, vectors[s1], vectors[s2], min_norm) \
                * _pair_contract(points, pb, vectors[s3], vectors[s4], min_norm)
    return total


@dataclass(frozen=True)
class Cell:
    """A 4-parallelepiped in the configuration space of three points."""

    origin: tuple   # (3, 3) nested
    edges: tuple    # (4, 3, 3) nested

    def arrays(self):
        return (np.asarray(self.origin, dtype=float),
                np.asarray(self.edges, dtype=float))


def integrate_wedge_sum_over_cell(cell, config, min_norm=1e-9):
    """Gauss-Legendre integral of the wedge-sum four-form over the cell."""
    x0, edges = cell.arrays()
    n = config.gl_nodes
    x, w = gauss_01(n)
    grids = np.meshgrid(*([x] * 4), indexing="ij")
    pts = x0[None, None, None, None, :, :] + sum(
        grids[a][..., None, None] * edges[a] for a in range(4))
    vecs = [np.broadcast_to(edges[a], pts.shape) for a in range(4)]
    vals = wedge_sum_4form(pts, vecs, min_norm)
    weight = np.einsum("a,b,c,d->abcd", w, w, w, w)
    return float(np.sum(vals * weight))


def integrate_phi_over_boundary(cell, config, raw=False):
    """Monte Carlo integral of phi over the cell boundary.

    Joint sampling over face coordinates and the fiber point; faces are
    oriented by the Stokes convention sum_a (-1)^a (top - bottom).
    Returns (value, stderr).
    """
    from .quadrature import mc_mean

    x0, edges = cell.arrays()
    factor = 1.0 if raw else C_PHI
    total = 0.0
    var = 0.0
    per_face = max(config.mc_samples // 8, 1)
    for a in range(4):
        others = [b for b in range(4) if b != a]
        legs = np.stack([edges[b] for b in others])      # (3, 3, 3)
        for side in (0.0, 1.0):
            sign = (-1.0) ** a * (1.0 if side == 1.0 else -1.0)

            def block(rng, size, _a=a, _side=side):
                u = rng.random((size, 3))
                pts = x0 + _side * edges[_a] + np.einsum(
                    "sb,bij->sij", u, np.stack([edges[b] for b in others]))
                scale = _pairwise_max_distance(pts)
                w, pdf = _sample_fiber(rng, size, pts, scale)
                legs_b = np.broadcast_to(legs, (size, 3, 3, 3))
                return _phi_raw_block(pts, legs_b, w) / pdf

            mean, err = mc_mean(config, block, total=per_face)
            total += sign * mean
            var += err * err
    return factor * total, abs(factor) * math.sqrt(var)


def stokes_defect(cell, config):
    """Compare the cell integral of the wedge sum with the boundary
    integral of phi.  Returns a dict with both sides and the defect."""
    lhs = integrate_wedge_sum_over_cell(cell, config)
    rhs, err = integrate_phi_over_boundary(cell, config)
    defect = abs(lhs - rhs)
    denom = max(abs(lhs), abs(rhs), 1e-300)
    return {
        "cell_integral": lhs,
        "boundary_integral": rhs,
        "boundary_stderr": err,
        "defect": defect,
        "relative_defect": defect / denom,
    }


def random_cell(rng, edge_scale=0.65, min_separation=0.4):
    """A generic 4-cell whose interior stays away from the diagonals.

    Each edge moves a single randomly chosen point in a random
    direction (that keeps the form contractions strong); rejection
    sampling guarantees min_separation between the three points over
    the whole cell, so the wedge integral carries signal well above
    Monte Carlo noise.
    """
    base0 = np.array([[0.0, 0.0, 0.0], [1.25, 0.1, -0.2], [0.4, 1.1, 0.85]])
    grid = np.linspace(0.0, 1.0, 5)
    mesh = np.stack(np.meshgrid(*([grid] * 4), indexing="ij"), axis=-1)
    while True:
        base = base0 + 0.1 * rng.standard_normal((3, 3))
        edges = np.zeros((4, 3, 3))
        for a in range(4):
            point = rng.integers(0, 3)
            direction = rng.standard_normal(3)
            direction *= edge_scale / np.linalg.norm(direction)
            edges[a, point] = direction
        pts = base + np.einsum("...a,aij->...ij", mesh, edges)
        sep = min(np.linalg.norm(pts[..., i, :] - pts[..., j, :], axis=-1).min()
                  for i in range(3) for j in range(i + 1, 3))
        if sep >= min_separation:
            return Cell(tuple(map(tuple, base.tolist())),
                        tuple(tuple(map(tuple, e)) for e in edges.tolist()))


def stokes_test_cells(rng, count, config, signal=3e-4):
    """Random cells whose wedge integral stands above Monte Carlo noise.

    The rejection uses only the cheap Gauss-Legendre side, so the
    boundary integral stays an honest prediction check.
    """
    cells = []
    while len(cells) < count:
        cell = random_cell(rng)
        if abs(integrate_wedge_sum_over_cell(cell, config)) >= signal:
            cells.append(cell)
    return cells


# ----------------------------------------------------------------------
# Order-2 invariant and the general driver
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class InvariantResult:
    value: float
    i1: float
    i2: float
    i1_error: float
    i2_stderr: float
    label: str
    config: QuadratureConfig

    @property
    def error_budget(self):
        """Quadrature estimate plus three Monte Carlo standard errors."""
        return self.i1_error + 3.0 * self.i2_stderr


def _phi_over_cycle(link, triple, config, sign=1.0):
    """Monte Carlo pairing of the phi term with the standard 2-cycle.

    Joint sampling over (t, s2, s3) and the fiber point.  The composite
    legs are the driver velocity and the two passenger velocities.
    """
    from .quadrature import mc_mean

    i, j, k = triple
    comps = link.components

    def block(rng, size):
        params = rng.random((size, 3))
        t, s2, s3 = params[:, 0], params[:, 1], params[:, 2]
        p1 = comps[0].position(t)
        p2 = comps[1].position(s2)
        p3 = comps[2].position(s3)
        pts = np.stack([p1, p2, p3], axis=1)[:, [i - 1, j - 1, k - 1], :]
        legs = np.zeros((size, 3, 3, 3))
        reorder = [i - 1, j - 1, k - 1]
        legs[:, 0, reorder.index(0), :] = comps[0].velocity(t)
        legs[:, 1, reorder.index(1), :] = comps[1].velocity(s2)
        legs[:, 2, reorder.index(2), :] = comps[2].velocity(s3)
        scale = _pairwise_max_distance(pts)
        w, pdf = _sample_fiber(rng, size, pts, scale)
        return _phi_raw_block(pts, legs, w) / pdf

    mean, err = mc_mean(config, block)
    return sign * C_PHI * mean, abs(C_PHI) * err


def order2_invariant(link, config, error_nodes=None):
    """The order-2 three-component invariant I1 + I2.

    I1 pairs the cyclic word sum with the standard 2-cycle; I2 adds the
    phi correction.  I1 alone is not an isotopy invariant; the sum is.
    """
    if len(link) != 3:
        raise ValueError("the order-2 invariant needs exactly 3 components")
    cyc = CycleSpec.standard(3)
    ig = order2_integrand()
    i1 = iterated_integral_over_cycle(ig, cyc, link, config)
    if error_nodes is None:
        error_nodes = max(2 * config.gl_nodes // 3, 8)
    i1_coarse = iterated_integral_over_cycle(
        ig, cyc, link, config.with_nodes(error_nodes))
    i2, i2_err = _phi_over_cycle(link, (1, 2, 3), config, sign=PHI_TERM_SIGN)
    return InvariantResult(
        value=i1 + i2, i1=i1, i2=i2,
        i1_error=abs(i1 - i1_coarse), i2_stderr=i2_err,
        label="invariant", config=config)


def check_four_term_functional(ig, ncomp):
    """Reject integrands whose coefficients violate the 4T relations.

    The word coefficients, read as a functional on degree-k chord
    monomials, must annihilate every padded relation generator; the
    first violation is reported with the offending generator's name.
    """
    from .algebra import (AlgebraElement, enumerate_monomials, format_element,
                          relation_generators, strand_pairs)

    k = ig.word_length()
    if k < 2 or ncomp < 3:
        return
    coeff = {}
    for c, w in ig.words:
        key = tuple(tuple(sorted(p)) for p in w)
        # a flipped pair (j, i) is the same Green form up to the odd-m
        # sign; fold it into the coefficient
        sign = 1.0
        for p in w:
            if p[0] > p[1]:
                sign = -sign
        coeff[key] = coeff.get(key, 0.0) + sign * c
    gens = relation_generators(ncomp, "even")
    pairs = strand_pairs(ncomp)
    for r in gens:
        for d1 in range(k - 1):
            for left in itertools.product(pairs, repeat=d1):
                for right in itertools.product(pairs, repeat=k - 2 - d1):
                    total = 0.0
                    for mono, cr in r.terms.items():
                        word = left + mono.chords + right
                        total += float(cr) * coeff.get(word, 0.0)
                    if abs(total) > 1e-12:
                        raise ValueError(
                            "coefficients violate the 4-term relations: "
                            f"pairing with {format_element(r)} "
                            f"(padding {d1} left, {k - 2 - d1} right) "
                            f"gives {total}")


def general_invariant(link, ig, cyc, config):
    """Evaluate a Theorem-style integrand over a cycle.

    Coefficients must satisfy the 4T functional condition.  For word
    length 2 with a phi term the result is an invariant; longer words
    evaluate leading terms only and are labeled accordingly.
    """
    if not isinstance(ig, IntegrandSpec):
        ig = IntegrandSpec(tuple(ig), ())
    ig.check_components(len(link))
    check_four_term_functional(ig, len(link))
    k = ig.word_length()
    i1 = iterated_integral_over_cycle(ig, cyc, link, config)
    i2 = 0.0
    i2_err = 0.0
    for c, triple in ig.phi_terms:
        if len(link) != 3 or cyc != CycleSpec.standard(3):
            raise ValueError(
                "phi terms are supported over the standard 2-cycle on "
                "3 components")
        val, err = _phi_over_cycle(link, triple, config, sign=PHI_TERM_SIGN)
        i2 += c * val
        i2_err += abs(c) * err
    coarse = iterated_integral_over_cycle(
        ig, cyc, link, config.with_nodes(max(2 * config.gl_nodes // 3, 8)))
    invariant = k <= 1 or len(link) == 2 or (k == 2 and ig.phi_terms)
    return InvariantResult(
        value=i1 + i2, i1=i1, i2=i2,
        i1_error=abs(i1 - coarse), i2_stderr=i2_err,
        label="invariant" if invariant else "leading-order (not invariant)",
        config=config)


# ----------------------------------------------------------------------
# Shuffle identity
# ----------------------------------------------------------------------

def shuffle_defect(k1, k2, config, min_norm=None):
    """|2 * iterated - plain^2| for the fiberwise linking one-form.

    a(t) = int_s omega-contraction(t, s) ds is a one-form on the loop
    parameter; Chen's shuffle identity makes twice its ordered double
    integral equal the square of its plain integral.  The two sides use
    the nested-simplex and tensor-product quadrature paths.
    """
    from .curves import LinkEmbedding

    link = LinkEmbedding([k1, k2])
    if min_norm is None:
        min_norm = link.clearance * 0.5
    n = config.gl_nodes
    x, w = gauss_01(n)

    def a_of(t):
        p1 = k1.position(t)
        v1 = k1.velocity(t)
        p2 = k2.position(x)
        v2 = k2.velocity(x)
        r = p2[None, :, :] - p1[..., None, :]
        u = np.broadcast_to(-v1[..., None, :], r.shape)
        v = np.broadcast_to(v2[None, :, :], r.shape)
        return green_form_value(r, u, v, min_norm) @ w

    plain = float(a_of(x) @ w)
    times = simplex_times(2, n)
    a1 = a_of(times[0].reshape(-1)).reshape(n, n)
    a2 = a_of(times[1])
    iterated = float(np.einsum("ab,b,a,b->", a1, a2, w, w * x))
    return {
        "plain": plain,
        "plain_squared": plain * plain,
        "iterated": iterated,
        "defect": abs(2.0 * iterated - plain * plain),
    }
