"""Acceptance criteria, one test each, each printing a single PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` and read the ``ACCEPTANCE`` lines;
they bypass output capture so they appear even when everything passes.
"""
import contextlib
import time

import pytest

import props
from test_bounded import DEMO_KEPT, EX43, replay_first_entry
from test_ttg import TABLE, bound_cases, check_window
from tickbound import vehicle
from tickbound.automaton import product, trim
from tickbound.bounded import (
    MarkerCover,
    sup_btc,
    sup_btc_run,
    sup_cbtc,
    verify_bounded_time_nonblocking,
)
from tickbound.control import is_controllable, sup_c
from tickbound.events import TICK
from tickbound.oracles import InstanceParams, btc_oracle, membership_agrees, random_case
from tickbound.samples import counter_range_demo
from tickbound.ttg import build_ttg

N_RANDOM = 500
N_PROPS = 100


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run(number, title):
        info = {}
        try:
            yield info
        except BaseException as exc:
            with capsys.disabled():
                print(f"\nACCEPTANCE {number} FAIL  {title}: {exc!s:.200}")
            raise
        extra = " ".join(f"{k}={v}" for k, v in info.items())
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} PASS  {title}  {extra}".rstrip())

    return run


def test_1_vehicle_end_to_end(criterion):
    with criterion(1, "vehicle end to end") as info:
        t0 = time.perf_counter()
        model = vehicle.activity_model()
        assert len(model.events.activity_events) == 24
        got = {e: (b.lower, b.upper) for e, b in model.bounds.items()}
        assert got == TABLE
        g = build_ttg(model)
        specs = [vehicle.safety_spec(g.events), vehicle.temporal_spec(g.events)]
        sup = sup_c(trim(product(product(g, specs[0]), specs[1])), g)
        cover = MarkerCover.of(("service", {"Z1", "Z2"}, 5), ("charge", {"Z0"}, 9))

        verdict = verify_bounded_time_nonblocking(sup, cover)
        assert not verdict
        zone3 = [v for v in verdict.detail["violations"] if v.activity == "Z3"]
        assert zone3, "no violation from a zone-3 configuration"
        for v in zone3:
            replay_first_entry(sup, v, cover[v.cls].states(sup), cover[v.cls].budget)

        final, rep = sup_cbtc(g, specs, cover)
        assert not final.is_empty()
        assert is_controllable(final, g)
        assert verify_bounded_time_nonblocking(final, cover)
        elapsed = time.perf_counter() - t0
        assert elapsed < 5.0, f"{elapsed:.2f}s"
        info.update(sup_states=sup.n_states, zone3_witness=" ".join(zone3[0].suffix),
                    final_states=final.n_states, passes=rep.iterations, seconds=f"{elapsed:.2f}")


def test_2_example_string(criterion, plant, sup, cover):
    with criterion(2, "example string membership") as info:
        assert EX43 == (TICK,) * 5 + ("1", TICK, "2")
        assert sup.generates(EX43)
        out = sup_btc(plant, sup, cover["service"])
        assert not out.generates(EX43)
        info.update(string=" ".join(EX43), in_sup=True, in_supbtc=False)


def test_3_counter_range_demo(criterion):
    with criterion(3, "counter range transition set") as info:
        a, cls = counter_range_demo()
        assert cls.budget == 2
        run = sup_btc_run(a, a, cls)
        assert run.counter.labelled_transitions() == DEMO_KEPT
        assert run.dropped == (("(6,2)", TICK, "7", 3),)
        assert ("(2,1)", TICK, "(5,2)") in DEMO_KEPT and ("(3,1)", TICK, "(4,2)") in DEMO_KEPT
        info.update(kept=len(DEMO_KEPT), dropped="(6,2)-tick->(7,3)")


def test_4_differential_oracles(criterion):
    with criterion(4, "differential oracles") as info:
        t0 = time.perf_counter()
        verdicts = memberships = 0
        for seed in range(N_RANDOM):
            inst = random_case(InstanceParams(seed=seed, activities=(2, 8)))
            assert len(inst.model.activities) <= 8
            assert all(c.budget <= 5 for c in inst.cover)
            k = trim(product(inst.plant, inst.spec))
            for a in (inst.plant, k):
                if a.is_empty():
                    continue
                want = bool(btc_oracle(a, inst.cover))
                assert bool(verify_bounded_time_nonblocking(a, inst.cover)) == want, f"seed {seed}: verdicts differ"
                verdicts += 1
            for cls in inst.cover:
                v = membership_agrees(inst.plant, k, cls, sup_btc(inst.plant, k, cls), 10)
                assert v, f"seed {seed} class {cls.name}: {v.witness} {v.detail}"
                memberships += 1
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0, f"{elapsed:.1f}s"
        info.update(instances=N_RANDOM, verdicts=verdicts, memberships=memberships, seconds=f"{elapsed:.1f}")


def test_5_property_suites(criterion):
    with criterion(5, "property suites") as info:
        info["union"] = props.btc_union_closure(N_PROPS)
        info["btc"] = props.btc_idempotent_and_contained(N_PROPS)
        info["supc"] = props.supc_idempotent_and_contained(N_PROPS)
        info["cbtc"] = props.cbtc_idempotent_sound_contained(N_PROPS)
        info["monotone"] = props.budget_monotone(N_PROPS)
        info.update({k: str(v).replace(" ", "") for k, v in info.items()})


def test_6_compilation_windows(criterion):
    with criterion(6, "compilation windows") as info:
        cases = bound_cases()
        for lower, upper in cases:
            check_window(lower, upper)
        info.update(cases=len(cases))


def test_7_counter_bound(criterion, plant, sup, cover):
    with criterion(7, "counter state bound") as info:
        fill = props.counter_bound(N_PROPS)
        _, rep = sup_cbtc(plant, [vehicle.safety_spec(), vehicle.temporal_spec()], cover)
        runs = 0
        for p in rep.passes:
            for c in p.classes:
                assert c.visited <= c.bound, f"pass {p.index} {c.cls}: {c.visited} > {c.bound}"
                runs += 1
        for cls in cover:
            run = sup_btc_run(plant, sup, cls)
            assert run.visited <= run.bound == run.class_states * (cls.budget + 1)
            runs += 1
        info.update(vehicle_runs=runs, **fill)
