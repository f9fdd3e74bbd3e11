# -*- coding: utf-8 -*-
# classify.py - Verificação numérica (conservadora) das quatro classes E-convexas
# E-N, E-Young, E-strong-Young e E-Orlicz, mais os combinadores de fechamento.
#
# Cada condição devolve um Verdict tri-estado (certified / refuted / inconclusive);
# refutações sempre carregam uma testemunha numérica.

from __future__ import annotations

import math
import random
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from . import config
from .errors import EvalError, PreconditionError
from .exprlang import INF, BinOp, ComposedFunction, Expr, ExtReal, Num, compose, parse

logger = logging.getLogger(__name__)

CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

# Cadeia de implicações, da classe mais forte para a mais fraca
CLASS_CHAIN = ("E-N", "E-strong-Young", "E-Orlicz", "E-Young")

CLASS_CONDITIONS: Dict[str, Tuple[str, ...]] = {
    "E-N": ("convex", "even", "continuous", "positive", "ratio_limit_zero", "ratio_limit_inf"),
    "E-strong-Young": ("convex", "continuous", "zero_iff_zero", "value_limit_inf"),
    "E-Orlicz": ("convex", "value_at_zero", "value_limit_inf", "nondegenerate", "left_continuity"),
    "E-Young": ("convex", "value_limit_zero", "value_limit_inf"),
}

# =================================================================
# 1. TIPOS
# =================================================================


def default_u_grid() -> Tuple[float, ...]:
    return tuple(np.logspace(config.U_GRID_MIN_EXP, config.U_GRID_MAX_EXP, config.U_GRID_POINTS).tolist())


class CheckConfig(BaseModel):
    """ Parâmetros de amostragem e tolerâncias dos verificadores. """

    model_config = ConfigDict(frozen=True, extra="forbid")

    u_grid: Tuple[float, ...] = Field(default_factory=default_u_grid)
    t_samples: Tuple[float, ...] = (1.0,)
    ladder_ratio: float = config.LADDER_RATIO
    tol_convex: float = config.TOL_CONVEX
    tol_zero_limit: float = config.TOL_ZERO_LIMIT
    big_M: float = config.BIG_M
    max_ladder: int = config.MAX_LADDER
    u0: float = config.LADDER_U0
    random_pairs: int = config.RANDOM_PAIRS
    seed: int = config.DEFAULT_SEED
    workers: int = 1

    @field_validator("u_grid")
    @classmethod
    def _grid_increasing(cls, grid: Tuple[float, ...]) -> Tuple[float, ...]:
        if len(grid) < 3:
            raise ValueError("u_grid precisa de ao menos 3 pontos")
        if grid[0] <= 0 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("u_grid deve ser positiva e estritamente crescente")
        return grid

    @field_validator("t_samples")
    @classmethod
    def _t_finite(cls, samples: Tuple[float, ...]) -> Tuple[float, ...]:
        if any(not math.isfinite(t) for t in samples):
            raise ValueError("t_samples deve conter apenas reais finitos")
        return samples

    @field_validator("ladder_ratio")
    @classmethod
    def _ratio_above_one(cls, value: float) -> float:
        if value <= 1:
            raise ValueError("ladder_ratio deve ser > 1")
        return value

    @field_validator("tol_convex", "tol_zero_limit", "big_M", "u0")
    @classmethod
    def _positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("tolerâncias e limites devem ser positivos")
        return value

    @field_validator("max_ladder")
    @classmethod
    def _ladder_long_enough(cls, value: int) -> int:
        if value < config.CAUCHY_TAIL:
            raise ValueError(f"max_ladder deve ser >= {config.CAUCHY_TAIL}")
        return value

    @field_validator("random_pairs", "workers")
    @classmethod
    def _non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("valor não pode ser negativo")
        return value


@dataclass
class Verdict:
    status: str
    evidence: List[Tuple[str, Dict[str, Any]]] = field(default_factory=list)
    flags: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "evidence": [{"description": d, "values": v} for d, v in self.evidence],
            "flags": dict(self.flags),
        }


def _verdict(status: str, description: str, **values: Any) -> Verdict:
    return Verdict(status, [(description, values)])


@dataclass
class ClassificationReport:
    sources: Dict[str, Any]
    config: CheckConfig
    t_samples: Tuple[float, ...]
    conditions: List[Dict[str, Verdict]]
    classes: Dict[str, str]
    diagnostics: List[Dict[str, ExtReal]]
    inconsistencies: List[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.inconsistencies

    def status(self, class_name: str) -> str:
        return self.classes[class_name]

    def to_dict(self) -> Dict[str, Any]:
        per_class = {}
        for name in CLASS_CHAIN:
            per_class[name] = {
                "status": self.classes[name],
                "conditions": {
                    cond: [self.conditions[i][cond].status for i in range(len(self.t_samples))]
                    for cond in CLASS_CONDITIONS[name]
                },
            }
        return {
            "sources": self.sources,
            "config": self.config.model_dump(mode="python"),
            "t_samples": list(self.t_samples),
            "classes": per_class,
            "evidence": [
                {"t": t, "conditions": {k: v.to_dict() for k, v in self.conditions[i].items()}}
                for i, t in enumerate(self.t_samples)
            ],
            "diagnostics": self.diagnostics,
            "consistent": self.consistent,
            "inconsistencies": list(self.inconsistencies),
        }


# =================================================================
# 2. AMOSTRAGEM
# =================================================================

def probe(psi: ComposedFunction, t: float, u: float) -> Tuple[Optional[ExtReal], Optional[str]]:
    """ Avalia Psi(t, u); estouro acima de OVERFLOW_GUARD vira +inf e erros viram texto. """
    try:
        value = psi(t, u)
    except EvalError as e:
        return None, str(e)
    if value > config.OVERFLOW_GUARD:
        return INF, None
    return value, None


def _ladder(cfg: CheckConfig, descending: bool) -> List[float]:
    sign = -1 if descending else 1
    return [cfg.u0 * cfg.ladder_ratio ** (sign * k) for k in range(cfg.max_ladder + 1)]


def _ladder_meta(cfg: CheckConfig) -> Dict[str, Any]:
    return {"ladder_ratio": cfg.ladder_ratio, "max_ladder": cfg.max_ladder}


def _grid_meta(cfg: CheckConfig) -> Dict[str, Any]:
    return {"grid_points": len(cfg.u_grid), "u_min": cfg.u_grid[0], "u_max": cfg.u_grid[-1]}


def _stabilized(tail: Sequence[float]) -> bool:
    if any(v == INF for v in tail):
        return False
    spread = max(tail) - min(tail)
    return spread <= config.CAUCHY_SPREAD * max(1.0, max(abs(v) for v in tail))


def _nonincreasing(values: Sequence[float]) -> bool:
    return all(b <= a for a, b in zip(values, values[1:]))


def _nondecreasing(values: Sequence[float]) -> bool:
    return all(b >= a for a, b in zip(values, values[1:]))


def _strictly_decreasing(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def _strictly_increasing(values: Sequence[float]) -> bool:
    return all(b > a for a, b in zip(values, values[1:]))


def _sample_ladder(psi, t, us) -> Tuple[List[ExtReal], Optional[Tuple[float, str]]]:
    values = []
    for u in us:
        v, err = probe(psi, t, u)
        if err is not None:
            return values, (u, err)
        values.append(v)
    return values, None


def _snap(lo: float, hi: float) -> float:
    """ Decimal mais curto dentro de [lo, hi] (limiares como 1 são avaliados exatamente em 1). """
    middle = (lo + hi) / 2.0
    for digits in range(0, 16):
        candidate = round(middle, digits)
        if lo <= candidate <= hi:
            return candidate
    return middle


def _bisect_boundary(is_left: Callable[[float], bool], lo: float, hi: float) -> Tuple[float, float]:
    """ Bisseção na fronteira: is_left(lo) verdadeiro, is_left(hi) falso. """
    for _ in range(config.THRESHOLD_MAX_ITER):
        if hi - lo <= config.THRESHOLD_TOL:
            break
        mid = (lo + hi) / 2.0
        if is_left(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


# =================================================================
# 3. VERIFICADORES DE CONDIÇÕES
# =================================================================

def check_convex(psi: ComposedFunction, t: float, cfg: CheckConfig) -> Verdict:
    """
    Teste do ponto médio Psi((u1+u2)/2) <= (Psi(u1)+Psi(u2))/2 + tol*escala em pares
    adjacentes da grade (com u = 0) e em pares aleatórios (semente fixa).
    Lado direito +inf passa automaticamente.
    """
    points = (0.0,) + tuple(cfg.u_grid)
    pairs = [(points[i], points[i + 1]) for i in range(len(points) - 1)]
    pairs += [(points[i], points[i + 2]) for i in range(len(points) - 2)]

    rng = random.Random(cfg.seed)
    lo, hi = math.log10(cfg.u_grid[0]), math.log10(cfg.u_grid[-1])
    for _ in range(cfg.random_pairs):
        a = 0.0 if rng.random() < 0.1 else 10 ** rng.uniform(lo, hi)
        b = 10 ** rng.uniform(lo, hi)
        pairs.append((min(a, b), max(a, b)))

    first_error = None
    for u1, u2 in pairs:
        mid = (u1 + u2) / 2.0
        v1, e1 = probe(psi, t, u1)
        v2, e2 = probe(psi, t, u2)
        vm, em = probe(psi, t, mid)
        if e1 or e2 or em:
            if first_error is None:
                first_error = {"u1": u1, "u2": u2, "error": e1 or e2 or em}
            continue
        if v1 == INF or v2 == INF:
            continue
        rhs = 0.5 * v1 + 0.5 * v2
        scale = max(abs(v1), abs(v2), abs(vm))
        if vm == INF or vm > rhs + cfg.tol_convex * scale:
            return _verdict(REFUTED, "ponto médio viola a convexidade",
                            u1=u1, u2=u2, mid=mid, psi_mid=vm, rhs=rhs, tol=cfg.tol_convex)
    if first_error is not None:
        return _verdict(INCONCLUSIVE, "erro de avaliação em algum par", **first_error)
    return _verdict(CERTIFIED, "teste do ponto médio aprovado",
                    pairs=len(pairs), tol=cfg.tol_convex, grid_points=len(cfg.u_grid))


def check_even(psi: ComposedFunction, t: float, cfg: CheckConfig) -> Verdict:
    """ Compara Psi(t, u) com Psi(t, -u) na grade. """
    undefined = None
    for u in cfg.u_grid:
        a, err_a = probe(psi, t, u)
        b, err_b = probe(psi, t, -u)
        if err_a or err_b:
            if undefined is None:
                undefined = {"u": u, "error": err_a or err_b}
            continue
        if a == b:
            continue
        if a == INF or b == INF or abs(a - b) > cfg.tol_convex * max(abs(a), abs(b)):
            return _verdict(REFUTED, "Psi(t,u) != Psi(t,-u)", u=u, psi_u=a, psi_minus_u=b)
    if undefined is not None:
        return _verdict(INCONCLUSIVE, "Psi indefinida para u negativo; paridade não verificável", **undefined)
    return _verdict(CERTIFIED, "Psi(t,u) = Psi(t,-u) na grade", tol=cfg.tol_convex, **_grid_meta(cfg))


def check_positive(psi: ComposedFunction, t: float, cfg: CheckConfig) -> Verdict:
    """ Psi(t, u) > 0 para todo u > 0 da grade. """
    witness = None
    error = None
    for u in cfg.u_grid:
        v, err = probe(psi, t, u)
        if err:
            error = error or {"u": u, "error": err}
        elif v <= 0:
            witness = {"u": u, "psi": v}
    if witness:
        return _verdict(REFUTED, "Psi(t,u) <= 0 com u > 0", **witness)
    if error:
        return _verdict(INCONCLUSIVE, "erro de avaliação na grade", **error)
    return _verdict(CERTIFIED, "Psi > 0 na grade", **_grid_meta(cfg))


def check_value_at_zero(psi: ComposedFunction, t: float, cfg: CheckConfig) -> Verdict:
    v0, err = probe(psi, t, 0.0)
    if err:
        return _verdict(INCONCLUSIVE, "Psi(t,0) indefinida", error=err)
    if abs(v0) > cfg.tol_convex:
        return _verdict(REFUTED, "Psi(t,0) != 0", u=0.0, psi=v0)
    return _verdict(CERTIFIED, "Psi(t,0) = 0", psi=v0, tol=cfg.tol_convex)


def check_ratio_limit_zero(psi: ComposedFunction, t: float, cfg: CheckConfig) -> Verdict:
    """ lim_{u->0+} Psi/u = 0 pela escada u_k = u0 * r^-k. """
    us = _ladder(cfg, descending=True)
    values, failure = _sample_ladder(psi, t, us)
    if failure:
        return _verdict(INCONCLUSIVE, "erro de avaliação na escada", u=failure[0], error=failure[1])
    ratios = [INF if v == INF else v / u for u, v in zip(us, values)]
    tail = ratios[-config.CAUCHY_TAIL:]
    final = tail[-1]
    if any(r == INF for r in tail):
        return _verdict(REFUTED, "Psi/u diverge perto de 0", u=us[-1], ratio=final)
    if abs(final) < cfg.tol_zero_limit and _nonincreasing([abs(r) for r in tail]):
        return _verdict(CERTIFIED, "Psi/u decresce para 0", u=us[-1], ratio=final,
                        tol=cfg.tol_zero_limit, **_ladder_meta(cfg))
    if _stabilized(tail):
        return _verdict(REFUTED, "Psi/u estabiliza longe de 0", u=us[-1], limit_estimate=final)
    if _strictly_increasing(tail) and final > cfg.big_M:
        return _verdict(REFUTED, "Psi/u diverge perto de 0", u=us[-1], ratio=final)
    return _verdict(INCONCLUSIVE, "escada sem convergência decidível", u=us[-1], ratio=final)


def check_ratio_limit_inf(psi: ComposedFunction, t: float, cfg: CheckConfig) -> Verdict:
    """ lim_{u->inf} Psi/u = inf pela escada ascendente. """
    us = _ladder(cfg, descending=False)
    values, failure = _sample_ladder(psi, t, us)
    if failure:
        return _verdict(INCONCLUSIVE, "erro de avaliação na escada", u=failure[0], error=failure[1])
    for u, v in zip(us, values):
        if v == INF:
            return _verdict(CERTIFIED, "Psi atinge +inf com u finito", u=u, **_ladder_meta(cfg))
    ratios = [v / u for u, v in zip(us, values)]
    tail = ratios[-config.CAUCHY_TAIL:]
    final = tail[-1]
    if _nondecreasing(tail) and final > cfg.big_M:
        return _verdict(CERTIFIED, "Psi/u cresce além de big_M", u=us[-1], ratio=final, big_M=cfg.big_M,
                        **_ladder_meta(cfg))
    if _stabilized(tail):
        return _verdict(REFUTED, "Psi/u estabiliza em valor finito", u=us[-1], limit_estimate=final)
    if _strictly_decreasing(tail):
        return _verdict(REFUTED, "Psi/u decrescente no fim da escada", u=us[-1], ratio=final)
    return _verdict(INCONCLUSIVE, "escada sem convergência decidível", u=us[-1], ratio=final)


def check_value_limit_zero(psi: ComposedFunction, t: float, cfg: CheckConfig) -> Verdict:
    """ Psi(t,0) = lim_{u->0+} Psi(t,u) = 0. """
    v0, err = probe(psi, t, 0.0)
    if err:
        return _verdict(INCONCLUSIVE, "Psi(t,0) indefinida", error=err)
    if abs(v0) > cfg.tol_convex:
        return _verdict(REFUTED, "Psi(t,0) != 0", u=0.0, psi=v0)
    us = _ladder(cfg, descending=True)
    values, failure = _sample_ladder(psi, t, us)
    if failure:
        return _verdict(INCONCLUSIVE, "erro de avaliação na escada", u=failure[0], error=failure[1])
    tail = values[-config.CAUCHY_TAIL:]
    final = tail[-1]
    if any(v == INF for v in tail):
        return _verdict(REFUTED, "Psi = +inf perto de 0", u=us[-1], psi=final)
    if abs(final) < cfg.tol_zero_limit and _nonincreasing([abs(v) for v in tail]):
        return _verdict(CERTIFIED, "Psi(t,u) -> 0 quando u -> 0+", psi0=v0, u=us[-1], psi=final,
                        tol=cfg.tol_zero_limit, **_ladder_meta(cfg))
    if _stabilized(tail):
        return _verdict(REFUTED, "Psi estabiliza longe de 0", u=us[-1], limit_estimate=final)
    return _verdict(INCONCLUSIVE, "escada sem convergência decidível", u=us[-1], psi=final)


def check_value_limit_inf(psi: ComposedFunction, t: float, cfg: CheckConfig) -> Verdict:
    """ lim_{u->inf} Psi(t,u) = inf. """
    us = _ladder(cfg, descending=False)
    values, failure = _sample_ladder(psi, t, us)
    if failure:
        return _verdict(INCONCLUSIVE, "erro de avaliação na escada", u=failure[0], error=failure[1])
    for u, v in zip(us, values):
        if v == INF:
            return _verdict(CERTIFIED, "Psi atinge +inf com u finito", u=u, **_ladder_meta(cfg))
    tail = values[-config.CAUCHY_TAIL:]
    final = tail[-1]
    if _nondecreasing(tail) and final > cfg.big_M:
        return _verdict(CERTIFIED, "Psi cresce além de big_M", u=us[-1], psi=final, big_M=cfg.big_M,
                        **_ladder_meta(cfg))
    if _stabilized(tail):
        return _verdict(REFUTED, "Psi estabiliza em valor finito", u=us[-1], limit_estimate=final)
    if _strictly_decreasing(tail):
        return _verdict(REFUTED, "Psi decrescente no fim da escada", u=us[-1], psi=final)
    return _verdict(INCONCLUSIVE, "escada sem convergência decidível", u=us[-1], psi=final)


def check_zero_iff_zero(psi: ComposedFunction, t: float, cfg: CheckConfig) -> Verdict:
    """ Psi(t,u) = 0 se e somente se u = 0 (Psi(0) = 0 e Psi > 0 na grade). """
    v0, err = probe(psi, t, 0.0)
    if err:
        return _verdict(INCONCLUSIVE, "Psi(t,0) indefinida", error=err)
    if abs(v0) > cfg.tol_convex:
        return _verdict(REFUTED, "Psi(t,0) != 0", u=0.0, psi=v0)
    verdict = check_positive(psi, t, cfg)
    if verdict.status == REFUTED:
        verdict.evidence[0] = ("Psi(t,u) <= 0 com u > 0 (maior testemunha)", verdict.evidence[0][1])
    return verdict


def estimate_U_phi(psi: ComposedFunction, t: float, cfg: CheckConfig) -> ExtReal:
    """ U_Phi = sup{u > 0: Psi(t,u) < +inf}, por bisseção na fronteira finito/infinito. """

    def finite(u: float) -> bool:
        v, err = probe(psi, t, u)
        return err is None and v != INF

    if finite(cfg.u_grid[-1]):
        return INF
    index = next(i for i, u in enumerate(cfg.u_grid) if not finite(u))
    if index == 0:
        if not finite(0.0):
            return 0.0
        lo = 0.0
    else:
        lo = cfg.u_grid[index - 1]
    lo, hi = _bisect_boundary(finite, lo, cfg.u_grid[index])

    # Fronteira de estouro (Psi contínua crescendo até o guard) não é um limiar genuíno
    v_lo, _ = probe(psi, t, lo)
    if v_lo is not None and v_lo > config.OVERFLOW_ARTIFACT:
        return INF
    return _snap(lo, hi)


def estimate_a_phi(psi: ComposedFunction, t: float, cfg: CheckConfig) -> ExtReal:
    """ a_Phi = inf{u > 0: Psi(t,u) > 0}. """

    def not_positive(u: float) -> bool:
        v, err = probe(psi, t, u)
        return err is not None or v <= 0

    if not not_positive(cfg.u_grid[0]):
        return 0.0
    index = next((i for i, u in enumerate(cfg.u_grid) if not not_positive(u)), None)
    if index is None:
        return INF
    lo, hi = _bisect_boundary(not_positive, cfg.u_grid[index - 1], cfg.u_grid[index])
    return _snap(lo, hi)


def _left_limit(psi, t, U, cfg) -> Tuple[Optional[ExtReal], Optional[Dict[str, Any]]]:
    values = []
    for k in range(1, cfg.max_ladder + 1):
        u = U - U * cfg.ladder_ratio ** (-k)
        if u >= U:
            break
        v, err = probe(psi, t, u)
        if err:
            return None, {"u": u, "error": err}
        values.append(v)
    tail = values[-config.CAUCHY_TAIL:]
    if len(tail) < config.CAUCHY_TAIL:
        return None, {"error": "escada curta demais abaixo de U"}
    if all(v == INF for v in tail):
        return INF, None
    if _stabilized(tail):
        return tail[-1], None
    if _strictly_increasing(tail) and tail[-1] > cfg.big_M:
        return INF, None
    return None, {"error": "limite à esquerda não estabiliza", "last": tail[-1]}


def check_left_continuity_at(psi: ComposedFunction, t: float, U: ExtReal, cfg: CheckConfig) -> Verdict:
    """ Continuidade à esquerda de Psi em U_Phi; U = +inf é contínua por convenção. """
    if U == INF:
        return _verdict(CERTIFIED, "U_Phi = +inf (convenção)", U=U, **_grid_meta(cfg))
    if U <= 0.0:
        return _verdict(CERTIFIED, "U_Phi = 0: não há aproximação pela esquerda em (0, inf)", U=U,
                        **_grid_meta(cfg))
    psi_U, err = probe(psi, t, U)
    if err:
        return _verdict(INCONCLUSIVE, "Psi(U) indefinida", U=U, error=err)
    left, failure = _left_limit(psi, t, U, cfg)
    if failure:
        return _verdict(INCONCLUSIVE, "limite à esquerda indecidível", U=U, **failure)
    if left == INF and psi_U == INF:
        return _verdict(CERTIFIED, "Psi -> +inf = Psi(U)", U=U, **_ladder_meta(cfg))
    if left != INF and psi_U != INF and abs(left - psi_U) <= cfg.tol_zero_limit * max(1.0, abs(psi_U)):
        return _verdict(CERTIFIED, "limite à esquerda igual a Psi(U)", U=U, left_limit=left, psi_U=psi_U,
                        tol=cfg.tol_zero_limit, **_ladder_meta(cfg))
    return _verdict(REFUTED, "limite à esquerda diferente de Psi(U)", U=U, left_limit=left, psi_U=psi_U)


def check_continuous(psi: ComposedFunction, t: float, cfg: CheckConfig,
                     U: Optional[ExtReal] = None) -> Verdict:
    """ Continuidade à direita em 0 e à esquerda em U_Phi (no interior, convexidade já garante). """
    v0, err = probe(psi, t, 0.0)
    if err:
        return _verdict(INCONCLUSIVE, "Psi(t,0) indefinida", error=err)
    us = _ladder(cfg, descending=True)
    values, failure = _sample_ladder(psi, t, us)
    if failure:
        return _verdict(INCONCLUSIVE, "erro de avaliação na escada", u=failure[0], error=failure[1])
    final = values[-1]
    close = (final == v0) or (final != INF and v0 != INF
                              and abs(final - v0) <= cfg.tol_zero_limit * max(1.0, abs(v0)))
    if not close:
        if _stabilized(values[-config.CAUCHY_TAIL:]) or final == INF or v0 == INF:
            return _verdict(REFUTED, "salto em u = 0", psi0=v0, right_limit=final)
        return _verdict(INCONCLUSIVE, "limite à direita em 0 indecidível", psi0=v0, last=final)

    if U is None:
        U = estimate_U_phi(psi, t, cfg)
    left = check_left_continuity_at(psi, t, U, cfg)
    if left.status != CERTIFIED:
        return left
    return _verdict(CERTIFIED, "contínua em 0 e em U_Phi", psi0=v0, U=U,
                    tol=cfg.tol_zero_limit, **_ladder_meta(cfg))


def check_nondegenerate(psi: ComposedFunction, t: float, cfg: CheckConfig,
                        U: Optional[ExtReal] = None) -> Verdict:
    """
    Leitura de não-degenerescência: existe u com 0 < Psi < inf e Psi não é
    identicamente +inf. A leitura literal (0 < Psi < inf para todo u) vai em flags['strict'].
    """
    values = []
    error = None
    for u in cfg.u_grid:
        v, err = probe(psi, t, u)
        if err:
            error = error or {"u": u, "error": err}
        else:
            values.append((u, v))
    if not values:
        return _verdict(INCONCLUSIVE, "Psi indefinida em toda a grade", **(error or {}))
    if U is None:
        U = estimate_U_phi(psi, t, cfg)
    strict = U == INF and error is None and all(v > 0 for _, v in values)
    witness = next(((u, v) for u, v in values if 0 < v < INF), None)
    if witness:
        verdict = _verdict(CERTIFIED, "existe u com 0 < Psi < inf", u=witness[0], psi=witness[1],
                           **_grid_meta(cfg))
    elif all(v == INF for _, v in values):
        u, v = values[0]
        verdict = _verdict(REFUTED, "Psi degenerada (identicamente +inf)", u=u, psi=v, grid_points=len(values))
    else:
        # maior u com Psi <= 0
        u, v = next((u, v) for u, v in reversed(values) if v != INF)
        verdict = _verdict(REFUTED, "Psi degenerada (sem valores em (0, inf))", u=u, psi=v,
                           grid_points=len(values))
    verdict.flags["strict"] = strict
    return verdict


# =================================================================
# 4. CLASSIFICAÇÃO
# =================================================================

def _check_sample(psi: ComposedFunction, t: float, cfg: CheckConfig) -> Tuple[Dict[str, Verdict], Dict[str, Any]]:
    U = estimate_U_phi(psi, t, cfg)
    verdicts = {
        "convex": check_convex(psi, t, cfg),
        "even": check_even(psi, t, cfg),
        "continuous": check_continuous(psi, t, cfg, U),
        "positive": check_positive(psi, t, cfg),
        "ratio_limit_zero": check_ratio_limit_zero(psi, t, cfg),
        "ratio_limit_inf": check_ratio_limit_inf(psi, t, cfg),
        "value_at_zero": check_value_at_zero(psi, t, cfg),
        "value_limit_zero": check_value_limit_zero(psi, t, cfg),
        "value_limit_inf": check_value_limit_inf(psi, t, cfg),
        "zero_iff_zero": check_zero_iff_zero(psi, t, cfg),
        "nondegenerate": check_nondegenerate(psi, t, cfg, U),
        "left_continuity": check_left_continuity_at(psi, t, U, cfg),
    }
    diagnostics = {"t": t, "U_phi": U, "a_phi": estimate_a_phi(psi, t, cfg)}
    return verdicts, diagnostics


def aggregate(statuses: Sequence[str]) -> str:
    if any(s == REFUTED for s in statuses):
        return REFUTED
    if statuses and all(s == CERTIFIED for s in statuses):
        return CERTIFIED
    return INCONCLUSIVE


def chain_inconsistencies(classes: Dict[str, str]) -> List[str]:
    """ Uma classe mais forte certificada com uma mais fraca refutada contradiz a cadeia de implicações. """
    found = []
    for i, strong in enumerate(CLASS_CHAIN):
        for weak in CLASS_CHAIN[i + 1:]:
            if classes.get(strong) == CERTIFIED and classes.get(weak) == REFUTED:
                found.append(f"{strong} certificada mas {weak} refutada")
    return found


def classify_composed(psi: ComposedFunction, cfg: CheckConfig) -> ClassificationReport:
    if not cfg.t_samples:
        raise PreconditionError("t_samples não pode ser vazio")

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(lambda t: _check_sample(psi, t, cfg), cfg.t_samples))
    else:
        results = [_check_sample(psi, t, cfg) for t in cfg.t_samples]

    conditions = [verdicts for verdicts, _ in results]
    diagnostics = [diag for _, diag in results]
    classes = {
        name: aggregate([sample[cond].status for sample in conditions for cond in CLASS_CONDITIONS[name]])
        for name in CLASS_CHAIN
    }
    report = ClassificationReport(psi.sources(), cfg, tuple(cfg.t_samples), conditions, classes,
                                  diagnostics, chain_inconsistencies(classes))
    if not report.consistent:
        logger.warning(f"Relatório internamente inconsistente: {report.inconsistencies}")
    logger.debug(f"Classificação de {psi.sources()}: {classes}")
    return report


def classify(phi: Expr, e: Tuple[Expr, Expr], cfg: CheckConfig, p: Optional[float] = None) -> ClassificationReport:
    """ Roda todos os verificadores em cada t de t_samples e agrega por classe. """
    return classify_composed(compose(phi, e[0], e[1], p), cfg)


# =================================================================
# 5. COMBINADORES DE FECHAMENTO
# =================================================================

def identity_map() -> Tuple[Expr, Expr]:
    return parse("t"), parse("u")


def phi_sum(phi1: Expr, phi2: Expr) -> Expr:
    return BinOp("+", phi1, phi2)


def phi_scale(phi: Expr, c: float) -> Expr:
    if c < 0:
        raise PreconditionError(f"fator de escala deve ser >= 0, recebeu {c}")
    return BinOp("*", Num(float(c)), phi)


def e_sum(e1: Tuple[Expr, Expr], e2: Tuple[Expr, Expr]) -> Tuple[Expr, Expr]:
    return BinOp("+", e1[0], e2[0]), BinOp("+", e1[1], e2[1])


def e_scale(e: Tuple[Expr, Expr], c: float) -> Tuple[Expr, Expr]:
    if c < 0:
        raise PreconditionError(f"fator de escala deve ser >= 0, recebeu {c}")
    return BinOp("*", Num(float(c)), e[0]), BinOp("*", Num(float(c)), e[1])
