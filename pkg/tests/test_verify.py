import json

import pytest

from poscurves.errors import PreconditionError
from poscurves.fans import builtin
from poscurves.verify import CLAIMS, OUT_OF_SCOPE, PROPERTIES, Tolerances, coverage_audit, random_class, verify_suite


def test_suite_passes_on_every_fan(variety):
    report = verify_suite(variety, seed=0, count=3)
    failed = {k: v["failures"] for k, v in report.properties.items() if v["failed"]}
    assert not failed
    assert report.ok


def test_report_is_deterministic(monkeypatch):
    X = builtin("BlP2")
    props = ["mcal_positive_product_bijection", "zariski_certificates", "diskant_inequality"]
    a = verify_suite(X, seed=5, count=3, fan_id="BlP2", properties=props).dumps()
    monkeypatch.setenv("POSCURVES_THREADS", "4")
    b = verify_suite(X, seed=5, count=3, fan_id="BlP2", properties=props).dumps()
    assert a == b
    c = verify_suite(X, seed=6, count=3, fan_id="BlP2", properties=props).dumps()
    assert json.loads(c)["seed"] == 6


def test_bundle_fixture_property(bundle, p2):
    rep = verify_suite(bundle, count=1, properties=["bundle_fixture_relations"])
    assert rep.properties["bundle_fixture_relations"]["passed"] == 1
    rep = verify_suite(p2, count=1, properties=["bundle_fixture_relations"])
    assert rep.properties["bundle_fixture_relations"]["skipped"] == 1


def test_outside_movable_property(blp2):
    rep = verify_suite(blp2, count=5, properties=["volhat_positive_outside_movable"])
    assert rep.properties["volhat_positive_outside_movable"]["passed"] == 5


def test_coverage_audit():
    audit = coverage_audit()
    assert audit["ok"] and not audit["unclaimed_properties"]
    broken = dict(CLAIMS, **{"an extra claim": ["no_such_property"]})
    assert not coverage_audit(PROPERTIES, broken)["ok"]
    assert not coverage_audit(PROPERTIES, dict(CLAIMS, **{"unmapped claim": []}))["ok"]


def test_out_of_scope_entries(p2):
    topics = " ".join(e["topic"] for e in OUT_OF_SCOPE)
    assert "mobility" in topics
    rep = verify_suite(p2, count=1, properties=[]).to_json()
    assert rep["out_of_scope"] == OUT_OF_SCOPE


def test_failures_carry_replayable_witness(p2, monkeypatch):
    from poscurves import verify
    from poscurves.verify import Outcome

    monkeypatch.setitem(verify.PROPERTIES, "always_fails",
                        (lambda X, rng, tol: Outcome(False, 2.0, {"curve": ["1", "1", "1"]}), "each"))
    rep = verify_suite(p2, count=2, properties=["always_fails"])
    st = rep.properties["always_fails"]
    assert st["failed"] == 2 and st["worst_residual"] == 2.0
    assert st["failures"][0]["fan"] == p2.fan.to_json()
    assert not rep.ok and rep.theorem_violations == 2


def test_random_class_nef_p2_is_multiple_of_h(p2):
    for seed in range(5):
        L = random_class(p2, "nef", seed)
        assert p2.is_ample(L)
        assert L == p2.divisor([1, 0, 0]) * L.coords[0]


def test_random_class_trivial_cone(p2):
    from dataclasses import replace

    from poscurves.cones import ConeDescription

    X = replace(p2, cones=dict(p2.cones, nef_divisors=ConeDescription((), (), 1)))
    with pytest.raises(PreconditionError):
        random_class(X, "nef", 0)


def test_tolerance_defaults():
    t = Tolerances()
    assert (t.solver, t.volume, t.derivative) == (1e-8, 1e-5, 1e-3)
