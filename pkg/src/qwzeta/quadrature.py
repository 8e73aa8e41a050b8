"""Tensor-product rules for averages over the unit torus [0, 2π)^d.

Two one-dimensional rules are used:

``periodic``
    Equispaced trapezoid on [0, 2π). Integrands here depend on each angle
    only through cos θ, so nodes θ and 2π - θ are folded together and only
    0 <= θ <= π is evaluated, with doubled weights.
``midpoint-halfangle``
    θ = 2φ with φ on the midpoint grid (j + 1/2)π/n of [0, π]. This is the
    continuum version of the k/(N+1) layer grid of the half-region walk.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

PERIODIC = "periodic"
HALFANGLE = "midpoint-halfangle"
RULES = (PERIODIC, HALFANGLE)

MIN_POINTS = 16
MAX_TOTAL_POINTS = 1 << 30
CHUNK_ELEMENTS = 1 << 20


def default_points(d: int) -> int:
    if d <= 2:
        return 4096
    if d == 3:
        return 512
    return 64


@dataclass(frozen=True)
class QuadratureSpec:
    d: int
    points: int
    rules: tuple[str, ...]

    def __post_init__(self):
        if self.points < MIN_POINTS:
            raise ValueError(f"need at least {MIN_POINTS} points per dimension, got {self.points}")
        if len(self.rules) != self.d:
            raise ValueError("one rule per dimension required")
        if any(r not in RULES for r in self.rules):
            raise ValueError(f"unknown rule in {self.rules}")
        if self.points**self.d > MAX_TOTAL_POINTS:
            raise ValueError(f"{self.points}^{self.d} quadrature points exceed the budget")

    @classmethod
    def periodic(cls, d: int, points: int | None = None) -> "QuadratureSpec":
        return cls(d, points or default_points(d), (PERIODIC,) * d)

    @classmethod
    def halfangle_last(cls, d: int, points: int | None = None) -> "QuadratureSpec":
        return cls(d, points or default_points(d), (PERIODIC,) * (d - 1) + (HALFANGLE,))

    def refined(self, factor: int = 2) -> "QuadratureSpec":
        return QuadratureSpec(self.d, self.points * factor, self.rules)

    def nodes(self, axis: int) -> tuple[np.ndarray, np.ndarray]:
        """Angles θ in [0, 2π) and weights (summing to 1) along one axis."""
        n = self.points
        if self.rules[axis] == PERIODIC:
            j = np.arange(n // 2 + 1)
            w = np.full(len(j), 2.0 / n)
            w[0] = 1.0 / n
            if n % 2 == 0:
                w[-1] = 1.0 / n
            return 2.0 * np.pi * j / n, w
        phi = (np.arange(n) + 0.5) * np.pi / n
        return 2.0 * phi, np.full(n, 1.0 / n)

    def metadata(self) -> dict:
        return {"d": self.d, "points": self.points, "rules": list(self.rules)}


def iterate(spec: QuadratureSpec) -> Iterator[tuple[list[np.ndarray], np.ndarray]]:
    """Yield (angles, weights) blocks covering the tensor grid.

    ``angles`` is a list of d arrays broadcastable to the block shape; the
    first axis is split into chunks to bound memory.
    """
    axes = [spec.nodes(i) for i in range(spec.d)]
    d = spec.d
    rest_w = np.ones(())
    for _, w in axes[1:]:
        rest_w = np.multiply.outer(rest_w, w)
    rest_theta = []
    for i, (th, _) in enumerate(axes[1:], start=1):
        shape = [1] * d
        shape[i] = len(th)
        rest_theta.append(th.reshape(shape))
    th0, w0 = axes[0]
    step = max(1, CHUNK_ELEMENTS // max(rest_w.size, 1))
    for start in range(0, len(th0), step):
        sl = slice(start, start + step)
        block = th0[sl].reshape((-1,) + (1,) * (d - 1))
        weights = np.multiply.outer(w0[sl], rest_w)
        yield [block] + rest_theta, weights


def tensor_mean(fn: Callable[[list[np.ndarray]], np.ndarray], spec: QuadratureSpec) -> tuple[complex | float, int]:
    """Weighted average of ``fn`` over the grid.

    Non-finite values are dropped and the remaining weights renormalized.
    Returns (mean, number of dropped points). Chunk partials are combined
    with ``math.fsum`` so the result does not depend on chunking.
    """
    re_parts, im_parts, w_parts = [], [], []
    dropped = 0
    is_complex = False
    for angles, w in iterate(spec):
        vals = np.broadcast_to(fn(angles), w.shape)
        ok = np.isfinite(vals)
        if not ok.all():
            dropped += int(ok.size - ok.sum())
            vals = np.where(ok, vals, 0)
            w = np.where(ok, w, 0.0)
        wv = w * vals
        if np.iscomplexobj(wv):
            is_complex = True
            re_parts.append(float(np.sum(wv.real)))
            im_parts.append(float(np.sum(wv.imag)))
        else:
            re_parts.append(float(np.sum(wv)))
        w_parts.append(float(np.sum(w)))
    total_w = math.fsum(w_parts)
    if total_w == 0.0:
        raise ArithmeticError("every quadrature point was excluded")
    re = math.fsum(re_parts) / total_w
    if is_complex:
        return complex(re, math.fsum(im_parts) / total_w), dropped
    return re, dropped


def safe_log(vals: np.ndarray) -> np.ndarray:
    """Real log when every value is positive real, principal complex log otherwise."""
    if not np.iscomplexobj(vals) and np.all(vals > 0):
        return np.log(vals)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(vals.astype(np.complex128))
