# -*- coding: utf-8 -*-
# catalog.py - Catálogo dos exemplos trabalhados (fixtures), comparação observado x afirmado
# e a suíte de fechamento (somas, escalas, mapas e famílias-limite).

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple

from .classify import (
    CERTIFIED, CLASS_CHAIN, CLASS_CONDITIONS, INCONCLUSIVE, REFUTED, CheckConfig, ClassificationReport,
    chain_inconsistencies, classify, e_scale, e_sum, identity_map, phi_scale, phi_sum,
)
from .errors import UnknownFixtureError
from .exprlang import BinOp, Expr, Num, parse

logger = logging.getLogger(__name__)

CONFIRMED = "confirmed"
DISPUTED = "disputed"

# =================================================================
# 1. FIXTURES
# =================================================================


@dataclass(frozen=True)
class Fixture:
    """ Exemplo trabalhado: Phi, mapa E = (e_t, e_u), parâmetro p e a classificação afirmada. """

    name: str
    phi: str
    e_t: str
    e_u: str
    t_samples: Tuple[float, ...]
    claim: Dict[str, str]
    identity_claim: Dict[str, str] = field(default_factory=dict)
    p: Optional[float] = None
    known_dispute: bool = False
    note: str = ""

    @property
    def map_key(self) -> Tuple[str, str, Optional[float]]:
        return self.e_t, self.e_u, self.p

    def parsed(self) -> Tuple[Expr, Tuple[Expr, Expr]]:
        return parse(self.phi), (parse(self.e_t), parse(self.e_u))

    def check_config(self, workers: int = 1) -> CheckConfig:
        return CheckConfig(t_samples=self.t_samples, workers=workers)


FIXTURES: Tuple[Fixture, ...] = (
    Fixture("ex2.1.1", "t*u^2", "abs(t)", "u", (-2.0, -0.5, 0.5, 2.0),
            {"E-N": CERTIFIED}, {"E-N": REFUTED},
            note="Psi = |t| u^2; com E = id, t u^2 é côncava para t < 0"),
    Fixture("ex2.1.2", "(1-t)*u^2 + t*exp(u)", "t", "ln(u^2)", (0.5, 2.0),
            {"E-N": CERTIFIED}, {"E-N": REFUTED}, known_dispute=True,
            note="Psi = (1-t)(ln u^2)^2 + t u^2: Psi/u diverge quando u -> 0+ para t != 1 "
                 "(ex.: Psi(0.5, 1e-8) ~ 679); a afirmação E-N é refutada pela razão em 0"),
    Fixture("ex2.2.1", "exp(t+u)-1", "u", "u", (0.5, 1.0, 2.0),
            {"E-Young": CERTIFIED}, {"E-Young": REFUTED},
            note="Psi = e^(2u) - 1; com E = id, Phi(t, 0) = e^t - 1 != 0"),
    Fixture("ex2.2.2", "piecewise(u>1, t*ln(u), 0)", "-abs(t)", "u", (0.5, 1.0, 2.0),
            {"E-Young": CERTIFIED}, {"E-Young": REFUTED}, known_dispute=True,
            note="t complexo codificado por |t| real (só -|t| entra na composição); "
                 "Psi = -|t| ln u para u > 1 é decrescente com limite -inf"),
    Fixture("ex2.3.1", "exp(u^t)-1", "abs(t)", "u", (-2.0, -1.0, 1.0, 2.0),
            {"E-strong-Young": CERTIFIED}, {"E-strong-Young": REFUTED},
            note="amostras |t| >= 1: para 0 < |t| < 1, e^(u^|t|) - 1 não é convexa perto de 0"),
    Fixture("ex2.3.2", "cosh(t*exp(u))-1", "u", "0", (0.5, 1.0, 2.0),
            {"E-strong-Young": CERTIFIED}, {"E-strong-Young": REFUTED},
            note="Psi = cosh(u) - 1; com E = id, Phi(t, 0) = cosh(t) - 1 != 0"),
    Fixture("ex2.4.1", "-t+u", "0", "u^p", (0.5, 1.0, 2.0),
            {"E-Orlicz": CERTIFIED}, {"E-Orlicz": REFUTED}, p=2.0,
            note="Psi = u^p; com E = id, Phi(t, 0) = -t != 0"),
    Fixture("ex2.4.2", "t+u^(p/(1-t))", "0", "u", (-1.0, 0.5), {"E-Orlicz": CERTIFIED},
            {"E-Orlicz": REFUTED}, p=2.0,
            note="Psi = u^p; t = 1 (medida nula) fica fora das amostras"),
    Fixture("ex4.1", "exp(u^t)-1", "1", "u", (0.5, 1.0, 2.0),
            {"E-strong-Young": CERTIFIED, "E-N": REFUTED},
            note="Psi = e^u - 1: Psi/u -> 1 != 0"),
    Fixture("ex4.2", "piecewise(u<1, u-abs(t), u+abs(t)-2)", "u", "u", (-1.0, 0.5, 2.0),
            {"E-Orlicz": CERTIFIED, "E-strong-Young": REFUTED},
            note="Psi = max(0, 2u - 2): anula-se em [0, 1]"),
    Fixture("ex4.3", "piecewise(u<1, -log(u+abs(t)^(1/p)+1), inf)", "u^p", "u", (0.5, 1.0, 2.0),
            {"E-Young": CERTIFIED, "E-Orlicz": REFUTED}, p=2.0,
            note="Psi = -log(2u + 1) em [0, 1), +inf depois; limite à esquerda em U = 1 é -log 3"),
    Fixture("ex5.1", "exp(t+u)-1", "u", "u", (0.5, 1.0, 2.0), {"E-Young": CERTIFIED},
            note="mesmo Psi de ex2.2.1 (e^(2u) - 1), gerador do espaço de Luxemburg"),
    Fixture("ex5.2", "piecewise(u>1, t*ln(u), 0)", "piecewise(u>1, 1, 0)", "piecewise(u>1, inf, 0)",
            (0.5, 1.0, 2.0), {"E-Young": CERTIFIED},
            note="caso p = inf: E leva u > 1 a (1, +inf) para que Phi(E) = +inf; o mapa impresso "
                 "(1, 0) daria Phi(1, 0) = 0"),
    Fixture("ex5.2.p2", "piecewise(u>0, t*ln(u+1), 0)", "1", "exp(u^p)-1", (0.5, 1.0, 2.0),
            {"E-Young": CERTIFIED}, p=2.0,
            note="caso 1 <= p < inf com p = 2: E = (1, e^(u^p)) com o segundo componente deslocado "
                 "de 1 (Phi avaliada em u + 1), pois e^(u^p) arredonda para 1 com u pequeno; "
                 "Psi = u^p até e^(u^p) estourar (u^p > 709.78), +inf depois"),
)

EXPECTED_DISPUTES = frozenset(f.name for f in FIXTURES if f.known_dispute)

SEPARATIONS = {
    "N⇍strongYoung": "ex4.1",
    "strongYoung⇍Orlicz": "ex4.2",
    "Orlicz⇍Young": "ex4.3",
}


def list_fixtures() -> List[Fixture]:
    return list(FIXTURES)


def get_fixture(name: str) -> Fixture:
    for fixture in FIXTURES:
        if fixture.name == name:
            return fixture
    raise UnknownFixtureError(f"fixture desconhecida: '{name}' (disponíveis: {', '.join(f.name for f in FIXTURES)})")


# =================================================================
# 2. EXECUÇÃO DAS FIXTURES
# =================================================================

@dataclass
class FixtureReport:
    fixture: Fixture
    observed: ClassificationReport
    identity: ClassificationReport
    status: str
    mismatches: List[Dict[str, str]] = field(default_factory=list)

    @property
    def name(self) -> str:
        return self.fixture.name

    @property
    def expected_status(self) -> str:
        return DISPUTED if self.fixture.known_dispute else CONFIRMED

    @property
    def unexpected(self) -> bool:
        return self.status != self.expected_status

    def witnesses(self) -> List[Dict[str, Any]]:
        """ Primeira condição refutada de cada classe afirmada como certificada mas observada refutada. """
        found = []
        for item in self.mismatches:
            if item["observed"] != REFUTED:
                continue
            report = self.identity if item["map"] == "identity" else self.observed
            found.append({"class": item["class"], "map": item["map"], **_first_refutation(report, item["class"])})
        return found

    def to_dict(self, full: bool = False) -> Dict[str, Any]:
        payload = {
            "name": self.name,
            "status": self.status,
            "known_dispute": self.fixture.known_dispute,
            "note": self.fixture.note,
            "sources": self.observed.sources,
            "claim": self.fixture.claim,
            "identity_claim": self.fixture.identity_claim,
            "observed": dict(self.observed.classes),
            "identity_observed": dict(self.identity.classes),
            "mismatches": list(self.mismatches),
            "witnesses": self.witnesses(),
            "diagnostics": self.observed.diagnostics,
        }
        if full:
            payload["report"] = self.observed.to_dict()
            payload["identity_report"] = self.identity.to_dict()
        return payload


def _first_refutation(report: ClassificationReport, class_name: str) -> Dict[str, Any]:
    for t, verdicts in zip(report.t_samples, report.conditions):
        for condition in CLASS_CONDITIONS[class_name]:
            verdict = verdicts[condition]
            if verdict.status == REFUTED:
                description, values = verdict.evidence[0]
                return {"t": t, "condition": condition, "description": description, "values": values}
    return {}


def _compare(claims: Dict[str, str], observed: Dict[str, str], map_name: str) -> Tuple[List[Dict[str, str]], bool]:
    mismatches = []
    opposite = False
    for class_name, claimed in claims.items():
        seen = observed[class_name]
        if seen != claimed:
            mismatches.append({"class": class_name, "map": map_name, "claimed": claimed, "observed": seen})
            opposite = opposite or seen != INCONCLUSIVE
    return mismatches, opposite


def run_fixture(name: str, workers: int = 1) -> FixtureReport:
    """ Classifica a fixture com o seu E e com E = id e compara com a classificação afirmada. """
    fixture = get_fixture(name)
    logger.info(f"Fixture {name}: classificando Phi = {fixture.phi}, E = ({fixture.e_t}, {fixture.e_u})")
    phi, e = fixture.parsed()
    cfg = fixture.check_config(workers)
    observed = classify(phi, e, cfg, fixture.p)
    identity = classify(phi, identity_map(), cfg, fixture.p)

    mismatches, opposite = _compare(fixture.claim, observed.classes, "E")
    more, opposite_id = _compare(fixture.identity_claim, identity.classes, "identity")
    mismatches += more

    if opposite or opposite_id:
        status = DISPUTED
    elif mismatches:
        status = INCONCLUSIVE
    else:
        status = CONFIRMED

    report = FixtureReport(fixture, observed, identity, status, mismatches)
    if report.unexpected:
        logger.warning(f"Fixture {name}: status {status}, esperado {report.expected_status} ({mismatches})")
    else:
        logger.info(f"Fixture {name}: {status}")
    return report


@dataclass
class CatalogReport:
    fixtures: List[FixtureReport]
    summary: Dict[str, Any]

    @property
    def unexpected(self) -> List[str]:
        return self.summary["unexpected"]

    def to_dict(self, full: bool = False) -> Dict[str, Any]:
        return {"fixtures": [r.to_dict(full) for r in self.fixtures], "summary": self.summary}


def summarize(reports: List[FixtureReport]) -> Dict[str, Any]:
    by_name = {r.name: r for r in reports}
    inconsistencies = []
    for r in reports:
        if r.status == CONFIRMED:
            for problem in chain_inconsistencies(r.observed.classes) + chain_inconsistencies(r.identity.classes):
                inconsistencies.append(f"{r.name}: {problem}")
    return {
        "chain_consistent": not inconsistencies,
        "chain_inconsistencies": inconsistencies,
        "separations": {
            key: (name if name in by_name and by_name[name].status == CONFIRMED else None)
            for key, name in SEPARATIONS.items()
        },
        "confirmed": sorted(r.name for r in reports if r.status == CONFIRMED),
        "disputed": sorted(r.name for r in reports if r.status == DISPUTED),
        "inconclusive": sorted(r.name for r in reports if r.status == INCONCLUSIVE),
        "unexpected": sorted(r.name for r in reports if r.unexpected),
    }


def run_all(workers: int = 1, names: Optional[List[str]] = None) -> CatalogReport:
    names = names or [f.name for f in FIXTURES]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(run_fixture, names))
    else:
        reports = [run_fixture(name) for name in names]
    summary = summarize(reports)
    logger.info(f"Catálogo: {len(summary['confirmed'])} confirmadas, disputadas {summary['disputed']}, "
                f"inesperadas {summary['unexpected']}")
    return CatalogReport(reports, summary)


# =================================================================
# 3. SUÍTE DE FECHAMENTO
# =================================================================

SCALE_FACTORS = (0.5, 1.0, 2.0)
LADDER_STEPS = (1, 10, 100, 1000)
LADDER_FIXTURES = ("ex2.1.1", "ex4.1", "ex4.2", "ex5.1")
POOL_T_SAMPLES = (0.5, 1.0, 2.0)

# Phi linear com pares de mapas E
LINEAR_MAP_CASES = (
    ("-t+u", (("0", "u^p"), ("0", "u")), 2.0),
    ("u", (("t", "u"), ("t", "u^2")), None),
)


@dataclass
class Subject:
    label: str
    phi: Expr
    e: Tuple[Expr, Expr]
    p: Optional[float]
    t_samples: Tuple[float, ...]
    group: Tuple[str, str, Optional[float]]

    def run(self, phi: Optional[Expr] = None, e: Optional[Tuple[Expr, Expr]] = None,
            t_samples: Optional[Tuple[float, ...]] = None) -> Dict[str, str]:
        cfg = CheckConfig(t_samples=t_samples or self.t_samples)
        return dict(classify(phi or self.phi, e or self.e, cfg, self.p).classes)


@dataclass
class ClosureCase:
    kind: str
    subject: str
    expected: Dict[str, str]
    observed: Dict[str, str]
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "subject": self.subject, "expected": self.expected,
                "observed": self.observed, "passed": self.passed}


@dataclass
class ClosureReport:
    cases: List[ClosureCase]
    exceptions: List[Dict[str, Any]]
    ladders: List[Dict[str, Any]]

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases)

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "cases": [c.to_dict() for c in self.cases],
                "exceptions": self.exceptions, "ladders": self.ladders}


def _certified(classes: Dict[str, str]) -> List[str]:
    return [name for name in CLASS_CHAIN if classes[name] == CERTIFIED]


def _keeps(kind: str, label: str, classes: List[str], observed: Dict[str, str]) -> ClosureCase:
    expected = {name: CERTIFIED for name in classes}
    return ClosureCase(kind, label, expected, observed, all(observed[name] == CERTIFIED for name in classes))


def closure_subjects() -> List[Subject]:
    subjects = []
    for fixture in FIXTURES:
        phi, e = fixture.parsed()
        subjects.append(Subject(fixture.name, phi, e, fixture.p, fixture.t_samples, fixture.map_key))
    for source in ("u^2", "u^4"):
        subjects.append(Subject(source, parse(source), identity_map(), None, POOL_T_SAMPLES, ("t", "u", None)))
    return subjects


def _ladder_phi(phi: Expr, n: int) -> Expr:
    return phi_sum(phi, BinOp("/", parse("u^2"), Num(float(n))))


def _ladder_map(e: Tuple[Expr, Expr], n: int) -> Tuple[Expr, Expr]:
    return e_sum(e, e_scale(identity_map(), 1.0 / n))


def run_closure_suite() -> ClosureReport:
    """ Somas e escalas não negativas preservam a classe; famílias Phi + u^2/n e E + id/n aproximam o limite. """
    subjects = closure_subjects()
    base = {s.label: s.run() for s in subjects}
    cases: List[ClosureCase] = []
    exceptions: List[Dict[str, Any]] = []
    ladders: List[Dict[str, Any]] = []

    # (a) somas de Phi com o mesmo E, e escalas c * Phi
    for a, b in combinations(subjects, 2):
        if a.group != b.group:
            continue
        shared_t = tuple(t for t in a.t_samples if t in b.t_samples)
        shared = [name for name in _certified(base[a.label]) if base[b.label][name] == CERTIFIED]
        if not shared_t or not shared:
            continue
        observed = a.run(phi_sum(a.phi, b.phi), t_samples=shared_t)
        cases.append(_keeps("phi_sum", f"{a.label} + {b.label}", shared, observed))

    for s in subjects:
        kept = _certified(base[s.label])
        if not kept:
            continue
        for c in SCALE_FACTORS:
            cases.append(_keeps("phi_scale", f"{c:g} * {s.label}", kept, s.run(phi_scale(s.phi, c))))
        degenerate = s.run(phi_scale(s.phi, 0.0))
        lost = [name for name in kept if degenerate[name] != CERTIFIED]
        if lost:
            exceptions.append({"kind": "phi_scale", "subject": f"0 * {s.label}", "lost": lost,
                               "note": "c = 0 anula Psi; positividade e limites em infinito falham"})

    # (b) somas e escalas do mapa E com Phi linear
    for phi_source, maps, p in LINEAR_MAP_CASES:
        phi = parse(phi_source)
        parsed_maps = [(parse(et), parse(eu)) for et, eu in maps]
        subject = Subject(phi_source, phi, parsed_maps[0], p, POOL_T_SAMPLES, ("", "", p))
        per_map = [subject.run(e=e) for e in parsed_maps]
        shared = [name for name in _certified(per_map[0]) if per_map[1][name] == CERTIFIED]
        observed = subject.run(e=e_sum(parsed_maps[0], parsed_maps[1]))
        cases.append(_keeps("e_sum", f"Phi = {phi_source}, E1 + E2", shared, observed))
        for (et, eu), e, classes in zip(maps, parsed_maps, per_map):
            for c in (0.5, 2.0):
                cases.append(_keeps("e_scale", f"Phi = {phi_source}, {c:g} * ({et}, {eu})",
                                    _certified(classes), subject.run(e=e_scale(e, c))))

    # (c) famílias-limite
    for s in subjects:
        is_pool = s.group == ("t", "u", None) and s.label in ("u^2", "u^4")
        if not is_pool and s.label not in LADDER_FIXTURES:
            continue
        limit = base[s.label]
        for kind, build in (("phi_ladder", lambda n: s.run(phi=_ladder_phi(s.phi, n))),
                            ("e_ladder", lambda n: s.run(e=_ladder_map(s.e, n)))):
            steps = {n: build(n) for n in LADDER_STEPS}
            ladders.append({"kind": kind, "subject": s.label, "limit": limit,
                            "steps": {str(n): classes for n, classes in steps.items()}})
            if is_pool:
                for n, classes in steps.items():
                    cases.append(ClosureCase(kind, f"{s.label}, n = {n}", limit, classes, classes == limit))
                continue
            for name in CLASS_CHAIN:
                if all(classes[name] == CERTIFIED for classes in steps.values()) and limit[name] != CERTIFIED:
                    exceptions.append({"kind": kind, "subject": s.label, "lost": [name],
                                       "note": "certificada em toda a família mas não no limite "
                                               "(u^2/n converge uniformemente apenas em compactos)"})

    report = ClosureReport(cases, exceptions, ladders)
    failed = [c.subject for c in cases if not c.passed]
    if failed:
        logger.warning(f"Suíte de fechamento com falhas: {failed}")
    logger.info(f"Suíte de fechamento: {len(cases)} casos, {len(exceptions)} exceções registradas")
    return report
