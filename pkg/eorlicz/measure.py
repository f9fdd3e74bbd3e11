# -*- coding: utf-8 -*-
# measure.py - Espaço de medida (Omega, Sigma, mu) em escala de bancada
# Átomos discretos com pesos ou intervalo com regra de quadratura (ponto médio / trapézio),
# funções de grade ||f(t)|| alinhadas aos nós e integração em reais estendidos.

from __future__ import annotations

import csv
import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Dict, List, Sequence, Tuple, Union

import numpy as np

from .errors import EvalError, IntegrationError, MeasureError
from .exprlang import INF, ExtReal, ext_mul

logger = logging.getLogger(__name__)

RULES = ("midpoint", "trapezoid")


@dataclass(frozen=True)
class Discrete:
    """ Medida atômica: lista de (t_i, w_i), w_i >= 0. """

    atoms: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        if not self.atoms:
            raise MeasureError("medida discreta sem átomos")
        for t, w in self.atoms:
            if not (math.isfinite(t) and math.isfinite(w)) or w < 0:
                raise MeasureError(f"átomo inválido ({t}, {w}): exige t finito e peso finito >= 0")
        if sum(w for _, w in self.atoms) <= 0:
            raise MeasureError("massa total deve ser positiva")

    @cached_property
    def node_weights(self) -> Tuple[Tuple[float, float], ...]:
        return tuple(sorted(((float(t), float(w)) for t, w in self.atoms), key=lambda a: a[0]))

    def to_descriptor(self) -> Dict[str, Any]:
        return {"type": "discrete", "atoms": [[t, w] for t, w in self.atoms]}


@dataclass(frozen=True)
class Interval:
    """ Intervalo [a, b] com regra de quadratura composta de 'nodes' nós. """

    a: float
    b: float
    nodes: int
    rule: str = "midpoint"

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or self.b <= self.a:
            raise MeasureError(f"intervalo inválido [{self.a}, {self.b}]")
        if self.rule not in RULES:
            raise MeasureError(f"regra desconhecida '{self.rule}' (use {', '.join(RULES)})")
        minimum = 2 if self.rule == "trapezoid" else 1
        if int(self.nodes) != self.nodes or self.nodes < minimum:
            raise MeasureError(f"regra {self.rule} exige ao menos {minimum} nó(s), recebeu {self.nodes}")

    @property
    def step(self) -> float:
        if self.rule == "midpoint":
            return (self.b - self.a) / self.nodes
        return (self.b - self.a) / (self.nodes - 1)

    @cached_property
    def node_weights(self) -> Tuple[Tuple[float, float], ...]:
        h = self.step
        if self.rule == "midpoint":
            t = self.a + (np.arange(self.nodes) + 0.5) * h
            w = np.full(self.nodes, h)
        else:
            t = np.linspace(self.a, self.b, self.nodes)
            w = np.full(self.nodes, h)
            w[0] = w[-1] = h / 2.0
        return tuple(zip(t.tolist(), w.tolist()))

    def to_descriptor(self) -> Dict[str, Any]:
        return {"type": "interval", "a": self.a, "b": self.b, "nodes": self.nodes, "rule": self.rule}


MeasureSpace = Union[Discrete, Interval]


def measure_from_descriptor(descriptor: Dict[str, Any]) -> MeasureSpace:
    """ Lê o descritor JSON: {"type": "discrete", "atoms": [[t, w], ...]} ou {"type": "interval", ...}. """
    kind = descriptor.get("type")
    try:
        if kind == "discrete":
            return Discrete(tuple((float(t), float(w)) for t, w in descriptor["atoms"]))
        if kind == "interval":
            return Interval(float(descriptor["a"]), float(descriptor["b"]), int(descriptor["nodes"]),
                            descriptor.get("rule", "midpoint"))
    except (KeyError, TypeError, ValueError) as e:
        raise MeasureError(f"descritor de medida inválido: {e}") from None
    raise MeasureError(f"tipo de medida desconhecido: {kind!r}")


def nodes(m: MeasureSpace) -> List[Tuple[float, float]]:
    """ Enumeração determinística (t, w) em ordem crescente de t. """
    return list(m.node_weights)


def total_mass(m: MeasureSpace) -> float:
    return math.fsum(w for _, w in m.node_weights)


# =================================================================
# FUNÇÕES DE GRADE
# =================================================================

@dataclass(frozen=True)
class GridFunction:
    """
    Amostras ||f(t)|| nos nós de uma medida. Valores são finitos e, salvo quando
    'signed' (saída de diferenças finitas), não negativos.
    """

    values: Tuple[float, ...]
    signed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        for i, v in enumerate(self.values):
            if not math.isfinite(v):
                raise MeasureError(f"valor não finito no nó {i}: {v}")
            if v < 0 and not self.signed:
                raise MeasureError(f"valor negativo no nó {i}: {v}")

    def __len__(self) -> int:
        return len(self.values)

    def abs(self) -> "GridFunction":
        return GridFunction(tuple(abs(v) for v in self.values))

    def scaled(self, c: float) -> "GridFunction":
        return GridFunction(tuple(c * v for v in self.values), self.signed or c < 0)

    def plus(self, other: "GridFunction") -> "GridFunction":
        if len(other) != len(self):
            raise MeasureError("funções de grade com tamanhos diferentes")
        return GridFunction(tuple(a + b for a, b in zip(self.values, other.values)),
                            self.signed or other.signed)

    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.values)

    @classmethod
    def from_function(cls, m: MeasureSpace, fn: Callable[[float], float]) -> "GridFunction":
        return cls(tuple(fn(t) for t, _ in m.node_weights))

    @classmethod
    def from_csv(cls, path: str, m: MeasureSpace) -> "GridFunction":
        """ Lê linhas 't,value' (cabeçalho opcional), casadas aos nós pela posição. """
        values: List[float] = []
        with open(path, "r", encoding="utf-8", newline="") as handle:
            for row_number, row in enumerate(csv.reader(handle), start=1):
                if not row or not "".join(row).strip():
                    continue
                try:
                    values.append(float(row[1] if len(row) > 1 else row[0]))
                except ValueError:
                    if row_number == 1:
                        continue  # cabeçalho
                    raise MeasureError(f"{path}:{row_number}: valor não numérico {row!r}") from None
        grid = cls(tuple(values))
        check_aligned(m, grid)
        return grid


def check_aligned(m: MeasureSpace, f: GridFunction) -> None:
    expected = len(m.node_weights)
    if len(f) != expected:
        raise MeasureError(f"função de grade com {len(f)} valores para {expected} nós")


# =================================================================
# INTEGRAÇÃO
# =================================================================

def integrate_values(m: MeasureSpace, values: Sequence[ExtReal]) -> ExtReal:
    """ Soma ponderada em ordem fixa; +inf em nó de peso positivo domina (0 * inf = 0). """
    terms = [ext_mul(w, v) for (_, w), v in zip(m.node_weights, values)]
    if any(term == INF for term in terms):
        return INF
    return math.fsum(terms)


def integrate(m: MeasureSpace, g: Callable[[float], ExtReal], workers: int = 1) -> ExtReal:
    """ Integra g sobre m. """
    return integrate_indexed(m, lambda index, t: g(t), workers)


def integrate_indexed(m: MeasureSpace, g: Callable[[int, float], ExtReal], workers: int = 1) -> ExtReal:
    """ Como integrate, mas g recebe (índice do nó, t). Nós podem ser avaliados em paralelo; a redução é sempre em ordem de índice. """
    points = [t for t, _ in m.node_weights]

    def at(index: int) -> ExtReal:
        try:
            return g(index, points[index])
        except EvalError as e:
            raise IntegrationError(index, e) from None

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(at, range(len(points))))
    else:
        values = [at(i) for i in range(len(points))]
    return integrate_values(m, values)


def require_interval(m: MeasureSpace) -> Interval:
    if not isinstance(m, Interval):
        raise MeasureError("derivadas fracas exigem uma medida do tipo intervalo (grade uniforme)")
    return m
