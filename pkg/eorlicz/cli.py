# -*- coding: utf-8 -*-
# cli.py - Linha de comando: classify, norm, sobolev e catalog
#
# Entrada: arquivo de especificação JSON (+ CSV com ||f(t)|| nos nós).
# Saída: relatório JSON (stdout ou --report), chaves ordenadas, "+inf" para infinito.
# Códigos de saída:
#   classify: 0 = classes pedidas certificadas, 1 = alguma refutada, 2 = inconclusiva, 3 = erro de entrada
#   norm / sobolev: 0 = valor finito, 1 = +inf (fora do espaço), 3 = erro de entrada ou pré-condição
#   catalog: 0 = nenhum resultado inesperado, 3 = fixture desconhecida

import os
import sys
import json
import math
import argparse
import logging
import tempfile
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from . import config
from .catalog import run_all, run_closure_suite, run_fixture
from .classify import CERTIFIED, CLASS_CHAIN, REFUTED, CheckConfig, classify_composed
from .errors import EOrliczError, PreconditionError, SpecFileError
from .exprlang import INF, ComposedFunction, compose_sources
from .measure import GridFunction, MeasureSpace, measure_from_descriptor, require_interval
from .norms import luxemburg_norm
from .sobolev import SobolevSpec, sobolev_terms

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT_ERROR = 3


# =================================================================
# 1. ARQUIVO DE ESPECIFICAÇÃO
# =================================================================

class SpecFile(BaseModel):
    """ Especificação JSON de entrada. Chaves desconhecidas são rejeitadas. """

    model_config = ConfigDict(extra="forbid", frozen=True)

    phi: str
    E: Tuple[str, str] = ("t", "u")
    p: Optional[float] = None
    omega: Optional[Dict[str, Any]] = None
    t_samples: Optional[List[float]] = None
    sampling: Dict[str, Any] = Field(default_factory=dict)
    classes: Optional[List[str]] = None

    @field_validator("classes")
    @classmethod
    def _known_classes(cls, classes: Optional[List[str]]) -> Optional[List[str]]:
        if classes is not None:
            unknown = [c for c in classes if c not in CLASS_CHAIN]
            if unknown or not classes:
                raise ValueError(f"classes desconhecidas {unknown}; use {list(CLASS_CHAIN)}")
        return classes

    def composed(self) -> ComposedFunction:
        return compose_sources(self.phi, self.E, self.p)

    def measure(self) -> MeasureSpace:
        if self.omega is None:
            raise SpecFileError("a especificação não define 'omega' (espaço de medida)")
        return measure_from_descriptor(self.omega)

    def check_config(self, workers: int = 1) -> CheckConfig:
        overrides = dict(self.sampling)
        if self.t_samples is not None:
            overrides["t_samples"] = tuple(self.t_samples)
        overrides.setdefault("workers", workers)
        return CheckConfig(**overrides)


def load_spec(path: str) -> SpecFile:
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    logger.debug(f"Especificação lida de {path}: {data}")
    return SpecFile.model_validate(data)


# =================================================================
# 2. SAÍDA JSON
# =================================================================

def json_ready(value: Any) -> Any:
    """ Converte para tipos JSON: infinito vira "+inf", tuplas viram listas. """
    if isinstance(value, float):
        if value == INF:
            return "+inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, dict):
        return {str(k): json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_ready(v) for v in value]
    return value


def write_report(payload: Dict[str, Any], path: Optional[str] = None) -> None:
    text = json.dumps(json_ready(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if not path:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    # Escrita atômica: arquivo temporário no mesmo diretório + os.replace
    fd, tmp_path = tempfile.mkstemp(prefix=".report-", suffix=".json", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    logger.info(f"Relatório gravado em {path}")


# =================================================================
# 3. COMANDOS
# =================================================================

def cmd_classify(spec_path: str, report_path: Optional[str] = None, workers: int = 1) -> int:
    spec = load_spec(spec_path)
    report = classify_composed(spec.composed(), spec.check_config(workers))
    requested = spec.classes or list(CLASS_CHAIN)
    statuses = [report.status(name) for name in requested]

    payload = report.to_dict()
    payload["requested_classes"] = requested
    write_report(payload, report_path)

    if any(s == REFUTED for s in statuses):
        return EXIT_REFUTED
    if all(s == CERTIFIED for s in statuses):
        return EXIT_OK
    logger.warning(f"Classificação inconclusiva: {dict(zip(requested, statuses))}")
    return EXIT_INCONCLUSIVE


def _load_norm_inputs(spec_path: str, data_path: str):
    spec = load_spec(spec_path)
    m = spec.measure()
    f = GridFunction.from_csv(data_path, m)
    return spec, m, f


def cmd_norm(spec_path: str, data_path: str, tol: float = config.NORM_TOL,
             report_path: Optional[str] = None, workers: int = 1) -> int:
    spec, m, f = _load_norm_inputs(spec_path, data_path)
    result = luxemburg_norm(spec.composed(), m, f, tol, spec.check_config(workers), workers)
    payload = result.to_dict()
    payload.update({"sources": spec.composed().sources(), "omega": m.to_descriptor(), "tol": tol})
    write_report(payload, report_path)
    logger.info(f"Norma de Luxemburg: {result.value} ({result.iterations} iterações)")
    return EXIT_OK if result.value != INF else EXIT_REFUTED


def cmd_sobolev(spec_path: str, data_path: str, order: int, tol: float = config.NORM_TOL,
                report_path: Optional[str] = None, workers: int = 1) -> int:
    spec, m, f = _load_norm_inputs(spec_path, data_path)
    sobolev_spec = SobolevSpec(order, spec.composed(), require_interval(m))
    terms = sobolev_terms(sobolev_spec, f, tol)
    values = [term.value for term in terms]
    value = INF if INF in values else math.fsum(values)
    payload = {
        "value": value,
        "order": order,
        "terms": [term.to_dict() for term in terms],
        "sources": spec.composed().sources(),
        "omega": m.to_descriptor(),
        "tol": tol,
    }
    write_report(payload, report_path)
    logger.info(f"Norma de Sobolev (ordem {order}): {value}")
    return EXIT_OK if value != INF else EXIT_REFUTED


def cmd_catalog(fixture: Optional[str] = None, report_path: Optional[str] = None,
                workers: int = 1, closure: bool = False) -> int:
    if fixture:
        report = run_fixture(fixture, workers)
        payload = report.to_dict(full=True)
        ok = not report.unexpected
    else:
        catalog = run_all(workers)
        payload = catalog.to_dict()
        ok = not catalog.unexpected
    if closure:
        suite = run_closure_suite()
        payload["closure"] = suite.to_dict()
        ok = ok and suite.passed
    write_report(payload, report_path)
    return EXIT_OK if ok else EXIT_REFUTED


# =================================================================
# 4. PONTO DE ENTRADA
# =================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", help="grava o relatório JSON neste caminho (padrão: stdout)")
    common.add_argument("--log-file", help="arquivo de log adicional")
    common.add_argument("--workers", type=int, default=1, help="paralelismo interno (padrão: 1)")

    parser = argparse.ArgumentParser(prog="eorlicz", description="Classificação de funções E-convexas e normas E-Orlicz")
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", parents=[common], help="classifica Psi = Phi(E)")
    p_classify.add_argument("--spec", required=True)

    p_norm = sub.add_parser("norm", parents=[common], help="norma de E-Luxemburg de f")
    p_norm.add_argument("--spec", required=True)
    p_norm.add_argument("--data", required=True, help="CSV 't,value' alinhado aos nós de omega")
    p_norm.add_argument("--tol", type=float, default=config.NORM_TOL)

    p_sobolev = sub.add_parser("sobolev", parents=[common], help="norma de E-Orlicz-Sobolev de f")
    p_sobolev.add_argument("--spec", required=True)
    p_sobolev.add_argument("--data", required=True)
    p_sobolev.add_argument("--order", type=int, required=True)
    p_sobolev.add_argument("--tol", type=float, default=config.NORM_TOL)

    p_catalog = sub.add_parser("catalog", parents=[common], help="roda as fixtures dos exemplos")
    p_catalog.add_argument("--fixture", help="roda apenas esta fixture")
    p_catalog.add_argument("--closure", action="store_true", help="inclui a suíte de fechamento")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config.setup_logging(args.log_file)

    try:
        if args.command == "classify":
            return cmd_classify(args.spec, args.report, args.workers)
        if args.command == "norm":
            return cmd_norm(args.spec, args.data, args.tol, args.report, args.workers)
        if args.command == "sobolev":
            return cmd_sobolev(args.spec, args.data, args.order, args.tol, args.report, args.workers)
        return cmd_catalog(args.fixture, args.report, args.workers, args.closure)
    except PreconditionError as e:
        logger.error(f"Pré-condição violada: {e} (testemunha: {e.witness})")
    except ValidationError as e:
        logger.error(f"Especificação inválida: {e}")
    except json.JSONDecodeError as e:
        logger.error(f"JSON malformado: {e}")
    except (EOrliczError, OSError) as e:
        logger.error(f"Erro de entrada: {e}")
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
