# -*- coding: utf-8 -*-
# sobolev.py - Normas de E-Orlicz-Sobolev em intervalos 1-D
# As derivadas fracas são aproximadas por diferenças finitas de segunda ordem (numpy.gradient).

from __future__ import annotations

import math
import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from . import config
from .errors import GridTooSmallError, PreconditionError
from .exprlang import INF, ComposedFunction, ExtReal
from .measure import GridFunction, Interval, MeasureSpace, check_aligned, require_interval
from .norms import NormResult, lp_norm, luxemburg_norm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SobolevSpec:
    k: int
    psi: ComposedFunction
    m: Interval

    def __post_init__(self):
        if self.k < 0:
            raise PreconditionError(f"ordem k deve ser >= 0, recebeu {self.k}")
        require_interval(self.m)
        if self.k > 0 and self.m.nodes < max(3, self.k + 2):
            raise GridTooSmallError(f"ordem {self.k} exige ao menos {max(3, self.k + 2)} nós")


def weak_derivative(f: GridFunction, m: MeasureSpace, order: int) -> GridFunction:
    """
    Derivada de ordem 'order' por diferenças centrais no interior e estênceis
    unilaterais de segunda ordem nas bordas. O resultado pode ser negativo (signed).
    """
    if order < 0:
        raise PreconditionError(f"ordem da derivada deve ser >= 0, recebeu {order}")
    interval = require_interval(m)
    check_aligned(interval, f)
    if order == 0:
        return f

    minimum = max(3, order + 2)
    if interval.nodes < minimum:
        raise GridTooSmallError(f"derivada de ordem {order} exige ao menos {minimum} nós, a grade tem {interval.nodes}")

    values = np.asarray(f.values, dtype=float)
    for _ in range(order):
        values = np.gradient(values, interval.step, edge_order=2)
    return GridFunction(tuple(values.tolist()), signed=True)


def sobolev_terms(spec: SobolevSpec, f: GridFunction, tol: float = config.NORM_TOL) -> List[NormResult]:
    """ Normas de Luxemburg de |D^r f| para r = 0..k, em ordem. """
    terms = []
    for order in range(spec.k + 1):
        derivative = weak_derivative(f, spec.m, order).abs()
        terms.append(luxemburg_norm(spec.psi, spec.m, derivative, tol))
        logger.debug(f"Termo de ordem {order}: {terms[-1].value}")
    return terms


def sobolev_norm(spec: SobolevSpec, f: GridFunction, tol: float = config.NORM_TOL) -> ExtReal:
    values = [term.value for term in sobolev_terms(spec, f, tol)]
    if any(v == INF for v in values):
        return INF
    return math.fsum(values)


def sobolev_lp_norm(p: float, m: MeasureSpace, f: GridFunction, k: int) -> float:
    """ (soma_{r<=k} ||D^r f||_p)^(1/p), exatamente na forma do caso L_p (sem potências p internas). """
    if not p >= 1:
        raise PreconditionError(f"sobolev_lp_norm exige p >= 1, recebeu {p}")
    total = math.fsum(lp_norm(p, m, weak_derivative(f, m, r).abs()) for r in range(k + 1))
    if p == INF:
        return total
    return total ** (1.0 / p)
