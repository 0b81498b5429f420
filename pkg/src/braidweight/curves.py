"""Closed curves in R^3 as truncated Fourier series, and link embeddings.

A component is position(t) = const + sum_h cos_h cos(2 pi h t)
+ sin_h sin(2 pi h t) for t in [0,1); velocities are the exact termwise
derivatives.  A LinkEmbedding checks at construction that distinct
components keep a positive clearance on a dense parameter grid.

The link file format is JSON:
    {"components": [{"const": [x,y,z], "cos": [[...],...], "sin": [[...],...]}, ...]}
"""

import json

import numpy as np

from .errors import SingularityError


class CurveComponent:
    def __init__(self, const, cos, sin):
        self.const = np.asarray(const, dtype=float).reshape(3)
        self.cos = np.atleast_2d(np.asarray(cos, dtype=float))
        self.sin = np.atleast_2d(np.asarray(sin, dtype=float))
        if self.cos.shape != self.sin.shape or self.cos.shape[1] != 3:
            raise ValueError("cos and sin must both be (K, 3) arrays")
        if self.cos.shape[0] < 1:
            raise ValueError("at least one harmonic is required")

    @property
    def harmonics(self):
        return self.cos.shape[0]

    def position(self, t):
        t = np.asarray(t, dtype=float)
        h = np.arange(1, self.harmonics + 1)
        phase = 2.0 * np.pi * np.multiply.outer(t, h)        # (..., K)
        return (self.const
                + np.cos(phase) @ self.cos
                + np.sin(phase) @ self.sin)

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        h = np.arange(1, self.harmonics + 1)
        phase = 2.0 * np.pi * np.multiply.outer(t, h)
        factor = 2.0 * np.pi * h
        return (-np.sin(phase) * factor) @ self.cos \
            + (np.cos(phase) * factor) @ self.sin

    def diameter(self, samples=256):
        pts = self.position(np.linspace(0.0, 1.0, samples, endpoint=False))
        return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))

    def translated(self, offset):
        return CurveComponent(self.const + np.asarray(offset, dtype=float),
                              self.cos, self.sin)

    def rotated(self, matrix):
        m = np.asarray(matrix, dtype=float).T
        return CurveComponent(self.const @ m, self.cos @ m, self.sin @ m)

    def reparametrized(self, shift):
        """t -> t + shift, expressed again as a Fourier series."""
        h = np.arange(1, self.harmonics + 1)
        c, s = np.cos(2 * np.pi * h * shift), np.sin(2 * np.pi * h * shift)
        cos = self.cos * c[:, None] + self.sin * s[:, None]
        sin = -self.cos * s[:, None] + self.sin * c[:, None]
        return CurveComponent(self.const, cos, sin)

    def to_dict(self):
        return {"const": self.const.tolist(),
                "cos": self.cos.tolist(), "sin": self.sin.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(data["const"], data["cos"], data["sin"])


class LinkEmbedding:
    """Ordered disjoint closed curves; an embedding of circles in R^3."""

    def __init__(self, components, clearance_factor=1e-3, grid=256):
        self.components = tuple(components)
        if not self.components:
            raise ValueError("a link needs at least one component")
        diam = max(c.diameter() for c in self.components)
        self.clearance = clearance_factor * diam
        ts = np.linspace(0.0, 1.0, grid, endpoint=False)
        pts = [c.position(ts) for c in self.components]
        self.min_distance = np.inf
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                d = np.linalg.norm(pts[i][:, None, :] - pts[j][None, :, :],
                                   axis=-1).min()
                self.min_distance = min(self.min_distance, float(d))
        if len(pts) > 1 and self.min_distance < self.clearance:
            raise SingularityError(
                f"components come within {self.min_distance:.3e} "
                f"(clearance {self.clearance:.3e})")

    def __len__(self):
        return len(self.components)

    def to_json(self):
        return json.dumps(
            {"components": [c.to_dict() for c in self.components]}, indent=1)

    @classmethod
    def from_json(cls, text, **kwargs):
        data = json.loads(text)
        return cls([CurveComponent.from_dict(d) for d in data["components"]],
                   **kwargs)

    @classmethod
    def load(cls, path, **kwargs):
        with open(path) as fh:
            return cls.from_json(fh.read(), **kwargs)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")


# ----------------------------------------------------------------------
# Stock links
# ----------------------------------------------------------------------

def circle(center=(0.0, 0.0, 0.0), radius=1.0, plane="xy"):
    cos = np.zeros((1, 3))
    sin = np.zeros((1, 3))
    axes = {"xy": (0, 1), "yz": (1, 2), "zx": (2, 0)}[plane]
    cos[0, axes[0]] = radius
    sin[0, axes[1]] = radius
    return CurveComponent(center, cos, sin)


def hopf_link():
    """K1 the unit circle in the xy plane, K2 a unit circle through it."""
    k1 = circle()
    k2 = CurveComponent((1.0, 0.0, 0.0),
                        [[1.0, 0.0, 0.0]], [[0.0, 0.0, 1.0]])
    return LinkEmbedding([k1, k2])


def torus_link_2_4(R=2.0, r=0.8):
    """The (2,4) torus link; the components have linking number +-2."""
    comps = []
    for sign in (1.0, -1.0):
        cos = np.zeros((3, 3))
        sin = np.zeros((3, 3))
        cos[0, 0] = R + sign * r / 2.0     # x: cos(theta)
        cos[2, 0] = sign * r / 2.0         # x: cos(3 theta)
        sin[0, 1] = R - sign * r / 2.0     # y: sin(theta)
        sin[2, 1] = sign * r / 2.0         # y: sin(3 theta)
        sin[1, 2] = sign * r               # z: sin(2 theta)
        comps.append(CurveComponent((0.0, 0.0, 0.0), cos, sin))
    return LinkEmbedding(comps)


def split_unlink(n=2, separation=8.0):
    """n unit circles far apart along the x axis."""
    return LinkEmbedding(
        [circle(center=(i * separation, 0.0, 0.0)) for i in range(n)])


def borromean_rings(a=1.0, b=0.5):
    """Three mutually perpendicular ellipses forming Borromean rings."""
    c1 = CurveComponent((0, 0, 0), [[a, 0, 0]], [[0, b, 0]])   # xy plane
    c2 = CurveComponent((0, 0, 0), [[0, a, 0]], [[0, 0, b]])   # yz plane
    c3 = CurveComponent((0, 0, 0), [[0, 0, a]], [[b, 0, 0]])   # zx plane
    return LinkEmbedding([c1, c2, c3])


def borromean_rings_deformed(a=1.0, b=0.5):
    """An isotopic reparametrization-plus-deformation of borromean_rings.

    The first ring is translated and given a second-harmonic wobble; the
    straight-line interpolation to the round ring keeps all components
    separated (checked in the tests), so the two embeddings are isotopic.
    """
    base = borromean_rings(a, b)
    c0 = base.components[0]
    cos = np.vstack([c0.cos, [[0.0, 0.0, 0.18]]])
    sin = np.vstack([c0.sin, [[0.12, 0.0, 0.0]]])
    deformed = CurveComponent(c0.const + np.array([0.22, 0.12, 0.08]), cos, sin)
    return LinkEmbedding([deformed, base.components[1], base.components[2]])


def random_closed_curve(rng, harmonics=3, scale=1.0, center=(0.0, 0.0, 0.0)):
    """Smooth random closed curve; decaying random Fourier coefficients."""
    decay = 1.0 / np.arange(1, harmonics + 1) ** 2
    cos = rng.standard_normal((harmonics, 3)) * scale * decay[:, None]
    sin = rng.standard_normal((harmonics, 3)) * scale * decay[:, None]
    cos[0] += np.array([scale, 0.0, 0.0])
    sin[0] += np.array([0.0, scale, 0.0])
    return CurveComponent(center, cos, sin)
