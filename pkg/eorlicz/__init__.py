# -*- coding: utf-8 -*-
# eorlicz - Funções E-convexas (E-N, E-Young, E-strong-Young, E-Orlicz),
# normas de E-Luxemburg e de E-Orlicz-Sobolev em escala de bancada.

from .classify import CheckConfig, ClassificationReport, Verdict, classify
from .exprlang import compose, compose_sources, evaluate, parse, unparse
from .measure import Discrete, GridFunction, Interval
from .norms import NormResult, is_member, lp_norm, luxemburg_norm, modular
from .sobolev import SobolevSpec, sobolev_lp_norm, sobolev_norm, weak_derivative

__all__ = [
    "CheckConfig", "ClassificationReport", "Verdict", "classify",
    "compose", "compose_sources", "evaluate", "parse", "unparse",
    "Discrete", "GridFunction", "Interval",
    "NormResult", "is_member", "lp_norm", "luxemburg_norm", "modular",
    "SobolevSpec", "sobolev_lp_norm", "sobolev_norm", "weak_derivative",
]
