# -*- coding: utf-8 -*-
# test_catalog.py - Fixtures dos exemplos, resumo do catálogo e suíte de fechamento

import math
import random

import pytest

from eorlicz.catalog import (
    CONFIRMED, DISPUTED, EXPECTED_DISPUTES, SEPARATIONS, get_fixture, list_fixtures, run_all,
    run_closure_suite, run_fixture,
)
from eorlicz.classify import CERTIFIED, CLASS_CHAIN, REFUTED
from eorlicz.errors import UnknownFixtureError
from eorlicz.exprlang import INF, compose
from eorlicz.measure import Discrete, GridFunction
from eorlicz.norms import lp_norm, luxemburg_norm


def _sinh2(x):
    return 2.0 * math.sinh(x / 2.0) ** 2


# Psi(t, u) = Phi(E(t, u)) em forma fechada
CLOSED_FORMS = {
    "ex2.1.1": lambda t, u: abs(t) * u ** 2,
    "ex2.1.2": lambda t, u: (1 - t) * (2 * math.log(u)) ** 2 + t * u ** 2,
    "ex2.2.1": lambda t, u: math.expm1(2 * u),
    "ex2.2.2": lambda t, u: -abs(t) * math.log(u) if u > 1 else 0.0,
    "ex2.3.1": lambda t, u: math.expm1(u ** abs(t)),
    "ex2.3.2": lambda t, u: _sinh2(u),
    "ex2.4.1": lambda t, u: u ** 2,
    "ex2.4.2": lambda t, u: u ** 2,
    "ex4.1": lambda t, u: math.expm1(u),
    "ex4.2": lambda t, u: max(0.0, 2 * u - 2),
    "ex4.3": lambda t, u: -math.log1p(2 * u) if u < 1 else INF,
    "ex5.1": lambda t, u: math.expm1(2 * u),
    "ex5.2": lambda t, u: INF if u > 1 else 0.0,
    "ex5.2.p2": lambda t, u: u ** 2,
}


@pytest.fixture(scope="module")
def catalog():
    return run_all()


@pytest.fixture(scope="module")
def closure():
    return run_closure_suite()


def test_fixture_list():
    names = [f.name for f in list_fixtures()]
    assert names == list(CLOSED_FORMS)
    assert EXPECTED_DISPUTES == {"ex2.1.2", "ex2.2.2"}
    assert get_fixture("ex4.3").claim == {"E-Young": CERTIFIED, "E-Orlicz": REFUTED}
    assert get_fixture("ex2.4.1").p == 2.0


def test_unknown_fixture():
    with pytest.raises(UnknownFixtureError):
        get_fixture("ex9.9")


@pytest.mark.parametrize("name", list(CLOSED_FORMS))
def test_compositions_match_closed_forms(name):
    fixture = get_fixture(name)
    phi, e = fixture.parsed()
    psi = compose(phi, e[0], e[1], fixture.p)
    rng = random.Random(name)
    for _ in range(100):
        t = rng.choice(fixture.t_samples)
        u = rng.uniform(0.01, 4.0)
        assert psi(t, u) == pytest.approx(CLOSED_FORMS[name](t, u), rel=1e-12, abs=1e-12)


def test_catalog_summary(catalog):
    summary = catalog.summary
    assert summary["disputed"] == ["ex2.1.2", "ex2.2.2"]
    assert summary["unexpected"] == []
    assert summary["inconclusive"] == []
    assert len(summary["confirmed"]) == 12
    assert summary["chain_consistent"] is True
    assert summary["separations"] == SEPARATIONS


def test_every_report_matches_its_expected_status(catalog):
    for report in catalog.fixtures:
        assert report.status == (DISPUTED if report.fixture.known_dispute else CONFIRMED)
        assert report.observed.consistent and report.identity.consistent


def test_disputed_fixture_carries_a_witness(catalog):
    report = next(r for r in catalog.fixtures if r.name == "ex2.1.2")
    witness = report.witnesses()[0]
    assert witness["class"] == "E-N"
    assert witness["map"] == "E"
    assert witness["condition"] == "ratio_limit_zero"


def test_decreasing_logarithm_dispute_carries_a_convexity_witness(catalog):
    report = next(r for r in catalog.fixtures if r.name == "ex2.2.2")
    witness = report.witnesses()[0]
    assert witness["class"] == "E-Young"
    assert witness["map"] == "E"
    assert witness["condition"] == "convex"
    # a testemunha se confirma reavaliando Psi
    phi, e = report.fixture.parsed()
    psi = compose(phi, e[0], e[1], report.fixture.p)
    values = witness["values"]
    t = witness["t"]
    rhs = (psi(t, values["u1"]) + psi(t, values["u2"])) / 2
    assert psi(t, values["mid"]) > rhs


def test_identity_map_breaks_the_claim(catalog):
    report = next(r for r in catalog.fixtures if r.name == "ex2.2.1")
    assert report.observed.status("E-Young") == CERTIFIED
    assert report.identity.status("E-Young") == REFUTED


def test_threshold_diagnostics(catalog):
    by_name = {r.name: r for r in catalog.fixtures}
    assert {d["U_phi"] for d in by_name["ex4.3"].observed.diagnostics} == {1.0}
    assert {d["U_phi"] for d in by_name["ex5.2"].observed.diagnostics} == {1.0}
    assert {d["a_phi"] for d in by_name["ex4.2"].observed.diagnostics} == {1.0}


def test_single_fixture_serialization():
    payload = run_fixture("ex4.1").to_dict(full=True)
    assert payload["status"] == CONFIRMED
    assert payload["observed"]["E-N"] == REFUTED
    assert set(payload["report"]["classes"]) == set(CLASS_CHAIN)


def test_closure_suite_passes(closure):
    failed = [case.subject for case in closure.cases if not case.passed]
    assert failed == []
    assert closure.passed


def test_closure_suite_covers_every_kind(closure):
    kinds = {case.kind for case in closure.cases}
    assert kinds == {"phi_sum", "phi_scale", "e_sum", "e_scale", "phi_ladder", "e_ladder"}


def test_zero_scale_is_recorded_as_an_exception(closure):
    zero = next(e for e in closure.exceptions if e["subject"] == "0 * u^2")
    assert zero["lost"] == list(CLASS_CHAIN)


def test_fixture_ladder_gains_positivity(closure):
    assert any(e["subject"] == "ex4.2" and e["lost"] == ["E-strong-Young"] for e in closure.exceptions)
    ladders = [entry for entry in closure.ladders if entry["subject"] == "u^2"]
    assert {entry["kind"] for entry in ladders} == {"phi_ladder", "e_ladder"}


def test_finite_p_fixture_is_young_and_gives_the_lp_norm(catalog):
    report = next(r for r in catalog.fixtures if r.name == "ex5.2.p2")
    assert report.status == CONFIRMED
    assert report.observed.status("E-Young") == CERTIFIED

    fixture = get_fixture("ex5.2.p2")
    phi, e = fixture.parsed()
    psi = compose(phi, e[0], e[1], fixture.p)
    assert psi(1.0, 1e-8) == pytest.approx(1e-16, rel=1e-12)
    m = Discrete(((0.0, 0.25), (1.0, 0.5), (2.0, 1.5)))
    f = GridFunction((0.5, 2.0, 3.0))
    assert luxemburg_norm(psi, m, f).value == pytest.approx(lp_norm(2, m, f), rel=1e-8)
