# -*- coding: utf-8 -*-
# norms.py - Modular e norma de E-Luxemburg sobre um espaço de medida de bancada
# (mais a forma fechada L_p, usada como oráculo nos testes)

from __future__ import annotations

import math
import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from . import config
from .classify import CERTIFIED, INCONCLUSIVE, REFUTED, CheckConfig, Verdict, probe
from .errors import BracketOverflowError, IntegrationError, PreconditionError
from .exprlang import INF, ComposedFunction, ExtReal
from .measure import GridFunction, MeasureSpace, check_aligned, integrate_indexed, nodes

logger = logging.getLogger(__name__)


@dataclass
class NormResult:
    value: ExtReal
    iterations: int
    bracket: Tuple[float, float]
    modular_at_value: ExtReal

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "iterations": self.iterations,
            "bracket": list(self.bracket),
            "modular_at_value": self.modular_at_value,
        }


# =================================================================
# 1. PRÉ-CONDIÇÃO DE MONOTONIA
# =================================================================

def check_monotone(psi: ComposedFunction, t_samples: Sequence[float], cfg: Optional[CheckConfig] = None) -> Verdict:
    """ Psi(t, .) não decrescente em {0} U u_grid para cada t amostrado. """
    cfg = cfg or CheckConfig()
    error = None
    for t in t_samples:
        prev_u, prev_v = None, None
        for u in (0.0,) + tuple(cfg.u_grid):
            v, err = probe(psi, t, u)
            if err:
                error = error or {"t": t, "u": u, "error": err}
                continue
            if prev_v is not None:
                drop = (prev_v == INF and v != INF) or (
                    prev_v != INF and v < prev_v - cfg.tol_convex * max(1.0, abs(prev_v)))
                if drop:
                    return Verdict(REFUTED, [("Psi decresce em u", {
                        "t": t, "u1": prev_u, "u2": u, "psi_u1": prev_v, "psi_u2": v})])
            prev_u, prev_v = u, v
    if error:
        return Verdict(INCONCLUSIVE, [("erro de avaliação ao testar monotonia", error)])
    return Verdict(CERTIFIED, [("Psi não decrescente na grade", {
        "t_samples": len(t_samples), "tol": cfg.tol_convex, "grid_points": len(cfg.u_grid) + 1})])


def _monotone_samples(m: MeasureSpace) -> Tuple[float, ...]:
    ts = [t for t, _ in nodes(m)]
    if len(ts) <= config.MONOTONE_MAX_NODES:
        return tuple(ts)
    picks = np.unique(np.linspace(0, len(ts) - 1, config.MONOTONE_MAX_NODES).round().astype(int))
    return tuple(ts[i] for i in picks)


# =================================================================
# 2. MODULAR E NORMAS
# =================================================================

def modular(psi: ComposedFunction, m: MeasureSpace, f: GridFunction, workers: int = 1) -> ExtReal:
    """ Integral de Psi(t, f(t)) sobre m; erros de avaliação saem como IntegrationError com o índice do nó. """
    check_aligned(m, f)
    return integrate_indexed(m, lambda i, t: psi(t, f.values[i]), workers)


def luxemburg_norm(psi: ComposedFunction, m: MeasureSpace, f: GridFunction, tol: float = config.NORM_TOL,
                   cfg: Optional[CheckConfig] = None, workers: int = 1) -> NormResult:
    """
    ||f|| = inf{lambda > 0: modular(f / lambda) <= 1}.

    h(lambda) é não crescente; o intervalo é encontrado dobrando/dividindo a partir de
    lambda = 1 e refinado por bisseção até largura relativa <= tol. Devolve o extremo
    superior, que sempre satisfaz h <= 1. A dobra para em NORM_LAMBDA_MAX (último degrau
    truncado no teto); a divisão continua enquanto f / lambda for representável.

    Exige check_monotone certificado: monotonia refutada ou inconclusiva é PreconditionError.
    """
    check_aligned(m, f)
    if f.signed and any(v < 0 for v in f.values):
        raise PreconditionError("a norma exige f >= 0 (aplique abs() antes)")

    cfg = cfg or CheckConfig()
    monotone = check_monotone(psi, _monotone_samples(m), cfg)
    if monotone.status == REFUTED:
        raise PreconditionError("Psi não é monótona em u; a norma de Luxemburg não se aplica",
                                witness=monotone.evidence[0][1])
    if monotone.status == INCONCLUSIVE:
        raise PreconditionError("monotonia de Psi não certificada (erro de avaliação na grade)",
                                witness=monotone.evidence[0][1])

    if f.is_zero():
        return NormResult(0.0, 0, (0.0, 0.0), modular(psi, m, f, workers))

    def h(lam: float) -> ExtReal:
        return modular(psi, m, f.scaled(1.0 / lam), workers)

    cap = config.NORM_LAMBDA_MAX
    lam = 1.0
    if h(lam) <= 1.0:
        top = max(1.0, max(f.values))
        lo, hi = lam / 2.0, lam
        while h(lo) <= 1.0:
            hi, lo = lo, lo / 2.0
            # f / lo deixou de ser representável: Psi se anula em toda escala alcançável
            if top / lo > config.OVERFLOW_GUARD:
                raise BracketOverflowError(f"h(lambda) <= 1 até lambda = {lo:g}; intervalo inferior não encontrado")
    else:
        lo, hi = lam, min(lam * 2.0, cap)
        while h(hi) > 1.0:
            if hi >= cap:
                logger.info(f"h(lambda) > 1 até lambda = {cap:g}: f fora do espaço")
                return NormResult(INF, 0, (hi, INF), h(hi))
            lo, hi = hi, min(hi * 2.0, cap)
    logger.debug(f"Intervalo inicial da norma: [{lo}, {hi}]")

    iterations = 0
    while (hi - lo) / hi > tol and iterations < config.NORM_MAX_ITER:
        mid = (lo + hi) / 2.0
        if h(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        iterations += 1
    return NormResult(hi, iterations, (lo, hi), h(hi))


def is_member(psi: ComposedFunction, m: MeasureSpace, f: GridFunction) -> Verdict:
    """ f pertence ao espaço se modular(f / lambda) < inf para algum lambda em 1, 2, 4, ..., 1e12. """
    check_aligned(m, f)
    cap = config.NORM_LAMBDA_MAX
    lam = 1.0
    failure = None
    while True:
        try:
            value = modular(psi, m, f.scaled(1.0 / lam))
        except IntegrationError as e:
            failure = failure or {"lambda": lam, "error": str(e)}
            value = None
        if value is not None and value != INF:
            return Verdict(CERTIFIED, [("modular finito após escala", {"lambda": lam, "modular": value})])
        if lam >= cap:
            break
        lam = min(lam * 2.0, cap)
    if failure:
        return Verdict(INCONCLUSIVE, [("erro de avaliação no modular", failure)])
    return Verdict(REFUTED, [("modular = +inf para todo lambda testado", {"lambda_max": cap})])


def lp_norm(p: float, m: MeasureSpace, f: GridFunction) -> float:
    """ (soma w_i |f_i|^p)^(1/p); p = inf dá o supremo sobre nós de massa positiva. """
    if not p >= 1:
        raise PreconditionError(f"lp_norm exige p >= 1, recebeu {p}")
    check_aligned(m, f)
    weights = [w for _, w in nodes(m)]
    if p == INF:
        return max((abs(v) for v, w in zip(f.values, weights) if w > 0), default=0.0)
    total = math.fsum(w * abs(v) ** p for v, w in zip(f.values, weights))
    return total ** (1.0 / p)
