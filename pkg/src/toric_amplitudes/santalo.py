"""Santalo point: the minimizer of log Amp(U y + z) over the interior of P.

log Amp is the universal barrier of P, so a damped Newton method from the
vertex barycenter converges. Term data are exact; iterates are floats.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .amplitude import amplitude
from .config.errors import InvalidConfigValueError
from .config.manager import ConfigManager, resolve
from .errors import ConvergenceError, UnboundedError
from .polytope import HPolytope, is_bounded, normal_fan, require_irredundant, vertices

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SantaloResult:
    point: Tuple[float, ...]
    grad_norm: float
    iterations: int
    value: float


class UniversalBarrier:
    def __init__(self, p: HPolytope):
        fan = normal_fan(p)
        terms = amplitude(fan).terms
        self.p = p
        self.U = np.array([[float(x) for x in p.U.row(i)] for i in range(p.n)])
        self.z = np.array([float(x) for x in p.z])
        self.coefs = np.array([float(c) for c, _ in terms])
        self.cones: List[List[int]] = [list(cone) for _, cone in terms]

    def strictly_interior(self, y: np.ndarray) -> bool:
        "Exact check on the rationalized iterate"
        point = [Fraction(float(v)) for v in y]
        return all(s > 0 for s in self.p.slacks(point))

    def value(self, y: np.ndarray) -> float:
        s = self.U @ y + self.z
        total = sum(c / np.prod(s[cone]) for c, cone in zip(self.coefs, self.cones))
        return float(np.log(total))

    def derivatives(self, y: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray]:
        d = len(y)
        s = self.U @ y + self.z
        amp = 0.0
        grad = np.zeros(d)
        hess = np.zeros((d, d))
        for c, cone in zip(self.coefs, self.cones):
            t = c / np.prod(s[cone])
            rows = self.U[cone] / s[cone][:, None]
            g = rows.sum(axis=0)
            amp += t
            grad -= t * g
            hess += t * (np.outer(g, g) + rows.T @ rows)
        grad_log = grad / amp
        hess_log = hess / amp - np.outer(grad_log, grad_log)
        return float(np.log(amp)), grad_log, hess_log


def santalo_point(
    p: HPolytope, tol: Optional[float] = None, conf: Optional[ConfigManager] = None
) -> SantaloResult:
    conf = resolve(conf)
    if tol is None:
        tol = conf["santalo.tol"]
    if tol <= 0:
        raise InvalidConfigValueError("santalo.tol", "a positive number", tol)
    max_iterations = conf["santalo.max_iterations"]
    backtrack = conf["santalo.backtrack"]
    armijo = conf["santalo.armijo"]

    if not is_bounded(p):
        raise UnboundedError("the Santalo point needs a bounded polytope")
    require_irredundant(p)
    barrier = UniversalBarrier(p)
    points = np.array([[float(x) for x in v.point] for v in vertices(p)])
    y = points.mean(axis=0)

    for iteration in range(max_iterations):
        value, grad, hess = barrier.derivatives(y)
        step = -np.linalg.solve(hess, grad)
        decrement = float(np.sqrt(max(-grad @ step, 0.0)))
        logger.debug("iteration %d: y=%s decrement=%.3e", iteration, y, decrement)
        if decrement < tol:
            return SantaloResult(
                tuple(float(v) for v in y), float(np.linalg.norm(grad)), iteration, value
            )
        # inside the quadratic convergence region take full steps
        if decrement < 0.25 and barrier.strictly_interior(y + step):
            y = y + step
            continue
        alpha = 1.0
        while True:
            candidate = y + alpha * step
            if barrier.strictly_interior(candidate) and (
                barrier.value(candidate) <= value + armijo * alpha * (grad @ step)
            ):
                break
            alpha *= backtrack
            if alpha < 1e-14:
                raise ConvergenceError(iteration + 1, y.tolist())
        y = candidate
    raise ConvergenceError(max_iterations, y.tolist())
