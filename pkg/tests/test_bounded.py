import pytest

import props
from conftest import case
from tickbound import vehicle
from tickbound.automaton import Automaton, language_equal, language_included, product, trim
from tickbound.bounded import (
    CoverClass,
    MarkerCover,
    restrict_marking,
    sup_btc,
    sup_btc_run,
    sup_cbtc,
    tick_profile,
    verify_bounded_time_nonblocking,
)
from tickbound.control import is_controllable, sup_c
from tickbound.errors import EmptyClassError, NotActivityLoopFree
from tickbound.events import TICK, EventTable
from tickbound.samples import counter_range_demo

EX43 = (TICK,) * 5 + ("1", TICK, "2")

# worked by hand from the counter rules on the demo automaton
DEMO_KEPT = {
    ("(0,0)", "a", "(1,0)"), ("(1,0)", TICK, "(2,1)"), ("(2,1)", TICK, "(5,2)"),
    ("(5,2)", "alpha", "(6,2)"), ("(6,2)", "beta", "(8,0)"), ("(8,0)", "b", "(0,0)"),
    ("(2,1)", "gamma", "(3,1)"), ("(3,1)", TICK, "(4,2)"), ("(4,2)", "delta", "(8,0)"),
}


@pytest.fixture(scope="module")
def final(plant, cover):
    return sup_cbtc(plant, [vehicle.safety_spec(), vehicle.temporal_spec()], cover)


def replay_first_entry(a, violation, target, budget):
    """Run a violation's string and check its suffix is an over-budget first entry."""
    q = a.run(violation.prefix)
    assert q is not None and a.labels[q] == violation.state
    ticks = 0
    for e in violation.suffix:
        assert q not in target, "suffix enters the class early"
        ticks += e == TICK
        q = a.step(q, e)
        assert q is not None
    assert q in target and ticks > budget


class TestCover:
    def test_budget_positive(self):
        with pytest.raises(ValueError):
            CoverClass("c", {"A"}, 0)

    def test_empty_selector(self):
        with pytest.raises(ValueError):
            CoverClass("c", set(), 1)

    def test_duplicate_names(self):
        with pytest.raises(ValueError):
            MarkerCover.of(("c", {"A"}, 1), ("c", {"B"}, 1))

    def test_resolve_vehicle(self, plant, cover):
        got = cover.resolve(plant)
        assert {plant.activity_of(q) for q in got["service"]} == {"Z1", "Z2"}
        assert {plant.activity_of(q) for q in got["charge"]} == {"Z0"}
        cover.check_covers(plant)
        assert cover.budget_product == 45

    def test_uncovered(self, plant):
        with pytest.raises(ValueError, match="outside every class"):
            MarkerCover.of(("service", {"Z1", "Z2"}, 5)).check_covers(plant)

    def test_empty_class(self, plant):
        with pytest.raises(EmptyClassError):
            MarkerCover.of(("x", {"Z3"}, 5)).resolve(plant)


class TestRestrictMarking:
    def test_all_marked_class(self, plant, sup):
        one = CoverClass("all", {"Z0", "Z1", "Z2"}, 3)
        assert language_equal(restrict_marking(sup, plant, one), sup)

    def test_class_outside_k(self, plant):
        k = trim(product(plant, Automaton.build(plant.events, ["x"], "x", ["x"],
                                                [("x", e, "x") for e in plant.events.names if e != "1"])))
        r = restrict_marking(k, plant, CoverClass("svc", {"Z1", "Z2"}, 5))
        assert not r.marked and trim(r).is_empty()
        assert sup_btc(plant, k, CoverClass("svc", {"Z1", "Z2"}, 5)).is_empty()

    def test_vehicle_service(self, plant, sup, cover):
        r = restrict_marking(sup, plant, cover["service"])
        assert {r.activity_of(q) for q in r.marked} == {"Z1", "Z2"}
        assert {r.activity_of(q) for q in sup.marked} == {"Z0", "Z1", "Z2"}


class TestVerify:
    def test_all_marked(self):
        t = EventTable.of(["a"])
        a = Automaton.build(t, ["x", "y"], "x", ["x", "y"], [("x", "a", "y"), ("y", TICK, "x")], {"x": "P", "y": "P"})
        for n in (1, 2, 7):
            assert verify_bounded_time_nonblocking(a, MarkerCover.of(("c", {"P"}, n)))

    def test_empty_automaton(self):
        e = Automaton.empty(EventTable.of([]))
        assert verify_bounded_time_nonblocking(e, MarkerCover.of(("c", {"P"}, 1)))

    def test_over_budget_witness(self):
        t = EventTable.of(["a"])
        a = Automaton.build(t, ["x", "y", "z"], "x", ["x"],
                            [("x", "a", "y"), ("y", TICK, "z"), ("z", TICK, "x")], {"x": "H"})
        cov = MarkerCover.of(("h", {"H"}, 1))
        v = verify_bounded_time_nonblocking(a, cov)
        assert not v and v.code == "over-budget"
        assert v.witness == ("a", TICK, TICK)
        assert v.detail["worst"] == {"h": 2}
        assert verify_bounded_time_nonblocking(a, MarkerCover.of(("h", {"H"}, 2)))
        for viol in v.detail["violations"]:
            replay_first_entry(a, viol, {0}, 1)

    def test_unbounded_and_dead(self):
        t = EventTable.of(["a", "b"])
        a = Automaton.build(t, ["x", "y", "w"], "x", ["x"],
                            [("x", "a", "y"), ("y", TICK, "y"), ("y", "b", "w"), ("w", TICK, "x")], {"x": "H"})
        v = verify_bounded_time_nonblocking(a, MarkerCover.of(("h", {"H"}, 9)))
        assert v.code == "unbounded"
        assert v.witness == ("a",) + (TICK,) * 10 + ("b", TICK)
        b = Automaton.build(t, ["x", "y"], "x", ["x"], [("x", "a", "y"), ("y", TICK, "y")], {"x": "H"})
        v = verify_bounded_time_nonblocking(b, MarkerCover.of(("h", {"H"}, 9)))
        assert v.code == "dead" and v.witness == ("a",)

    def test_loop_free_required(self):
        t = EventTable.of(["a"])
        a = Automaton.build(t, ["x"], "x", ["x"], [("x", "a", "x")], {"x": "H"})
        with pytest.raises(NotActivityLoopFree):
            verify_bounded_time_nonblocking(a, MarkerCover.of(("h", {"H"}, 1)))

    def test_nonblocking_supervisor_fails(self, sup, cover):
        v = verify_bounded_time_nonblocking(sup, cover)
        assert not v
        zone3 = [x for x in v.detail["violations"] if x.cls == "service" and x.activity == "Z3"]
        assert len(zone3) == 1
        w = zone3[0]
        assert w.kind == "unbounded"
        # the vehicle idles in zone 3 past the budget before heading for zone 1
        assert w.suffix[:6] == (TICK,) * 6
        target = cover["service"].states(sup)
        replay_first_entry(sup, w, target, 5)
        for x in v.detail["violations"]:
            replay_first_entry(sup, x, cover[x.cls].states(sup), cover[x.cls].budget)

    def test_tick_profile_on_demo(self):
        a, cls = counter_range_demo()
        prof = tick_profile(a, cls.states(a))
        by = {a.labels[q]: int(prof[q]) for q in range(a.n_states)}
        assert by["0"] == 0 and by["8"] == 0
        assert by["1"] == 4 and by["6"] == 2 and by["3"] == 1


class TestSupBtc:
    def test_counter_range(self):
        a, cls = counter_range_demo()
        run = sup_btc_run(a, a, cls)
        assert run.counter.labelled_transitions() == DEMO_KEPT
        assert run.dropped == (("(6,2)", TICK, "7", 3),)
        assert run.visited == 8 and run.bound == 27
        assert verify_bounded_time_nonblocking(run.automaton, MarkerCover((cls,)))

    def test_counter_range_fifo_same_language(self):
        a, cls = counter_range_demo()
        assert language_equal(sup_btc(a, a, cls, "fifo"), sup_btc(a, a, cls, "lifo"))
        with pytest.raises(ValueError):
            sup_btc(a, a, cls, "random")

    def test_wide_budget_keeps_everything(self):
        a, cls = counter_range_demo()
        wide = CoverClass(cls.name, cls.activities, 4)
        run = sup_btc_run(a, a, wide)
        assert run.dropped == ()
        assert language_equal(run.automaton, a)

    def test_example_string(self, plant, sup, cover):
        assert sup.generates(EX43)
        out = sup_btc(plant, sup, cover["service"])
        assert not out.generates(EX43)
        # five ticks of waiting already leave no completion within budget
        assert out.generates((TICK,) * 4 + ("1", TICK, "2"))
        assert not out.generates((TICK,) * 5)

    def test_already_bounded(self, plant, final, cover):
        k, _ = final
        for cls in cover:
            assert language_equal(sup_btc(plant, k, cls), k)

    def test_empty_input(self, plant, cover):
        assert sup_btc(plant, Automaton.empty(plant.events), cover["service"]).is_empty()

    def test_random_sound(self):
        for seed in range(40):
            inst, k = case(seed)
            for cls in inst.cover:
                out = sup_btc(inst.plant, k, cls)
                assert language_included(out, k)
                if not out.is_empty():
                    assert verify_bounded_time_nonblocking(out, MarkerCover((cls,)))


class TestSupCbtc:
    def test_vehicle(self, plant, final, cover):
        k, rep = final
        assert not k.is_empty()
        assert rep.controllable and rep.bounded
        assert is_controllable(k, plant)
        assert verify_bounded_time_nonblocking(k, cover)
        assert 1 <= rep.iterations <= rep.pass_bound

    def test_first_pass_shrinks_under_supc(self, plant, final):
        _, rep = final
        first = rep.passes[0]
        assert first.supc_states < first.classes[-1].states_out
        nk = sup_btc(plant, sup_btc(plant, rep.intermediates[0], vehicle.cover()["service"]),
                     vehicle.cover()["charge"])
        s = sup_c(nk, plant)
        assert language_included(s, nk) and not language_equal(s, nk)

    def test_below_nonblocking_supervisor(self, sup, final):
        assert language_included(final[0], sup)

    @pytest.mark.parametrize("n", [1, 2])
    def test_infeasible_budget(self, plant, cover, n):
        k, rep = sup_cbtc(plant, [vehicle.safety_spec(), vehicle.temporal_spec()], cover.with_budget("service", n))
        assert k.is_empty() and rep.passes[-1].empty
        assert not rep.controllable

    def test_rerun_is_one_pass(self, plant, final, cover):
        k, _ = final
        again, rep = sup_cbtc(plant, k, cover)
        assert rep.iterations == 1 and language_equal(again, k)

    def test_report_lines(self, final):
        _, rep = final
        lines = rep.lines()
        assert lines[0] == f"iterations={rep.iterations}"
        assert "controllable=true" in lines and "bounded_time_nonblocking=true" in lines

    def test_empty_start_records_a_pass(self):
        inst, k = case(0)
        assert k.is_empty()
        out, rep = sup_cbtc(inst.plant, inst.spec, inst.cover)
        assert out.is_empty() and rep.iterations == 1

    def test_cover_must_cover(self, plant):
        with pytest.raises(ValueError):
            sup_cbtc(plant, None, MarkerCover.of(("service", {"Z1", "Z2"}, 5)))


def test_random_properties_smoke():
    props.btc_union_closure(30)
    props.cbtc_idempotent_sound_contained(30)
    props.class_order_independent(30)
