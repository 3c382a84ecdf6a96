import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tickbound.automaton import (
    Automaton,
    coreachable,
    is_nonblocking,
    language_equal,
    language_included,
    product,
    reachable,
    strings,
    trim,
    union,
)
from tickbound.errors import AlphabetMismatch
from tickbound.events import TICK, EventTable, tick_count

T = EventTable.of(["a", "b", "c"], hib=["a"], force=["b"])


def chain(marked=("q2",)):
    return Automaton.build(T, ["q0", "q1", "q2"], "q0", marked, [("q0", "a", "q1"), ("q1", "b", "q2")])


@st.composite
def automata(draw, max_states=4, table=T):
    n = draw(st.integers(1, max_states))
    names = [f"s{i}" for i in range(n)]
    trans = []
    for s in names:
        for e in table.names:
            if draw(st.booleans()):
                trans.append((s, e, draw(st.sampled_from(names))))
    marked = [s for s in names if draw(st.booleans())]
    return Automaton.build(table, names, "s0", marked, trans)


class TestEventTable:
    def test_tick_is_last_and_controllable(self):
        assert T.names[-1] == TICK
        assert T.controllable == frozenset({"a", TICK})
        assert T.uncontrollable == frozenset({"b", "c"})

    def test_partition(self):
        assert T.controllable | T.uncontrollable == frozenset(T.names)
        assert not T.controllable & T.uncontrollable

    @pytest.mark.parametrize("bad", [dict(events=["a", "a"]), dict(events=["a"], hib=["z"]),
                                     dict(events=["a b"])])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            EventTable.of(bad["events"], bad.get("hib", ()))

    def test_tick_reserved(self):
        with pytest.raises(ValueError):
            EventTable(("a", TICK))
        assert EventTable.of(["a", TICK]).names == ("a", TICK)

    def test_undefined_event(self):
        with pytest.raises(KeyError):
            T.index("zz")

    @pytest.mark.parametrize("s, n", [((), 0), ((TICK, "a", TICK), 2),
                                       ((TICK,) * 5 + ("1", TICK, "2"), 6)])
    def test_tick_count(self, s, n):
        assert tick_count(s) == n


class TestReachability:
    def test_isolated_state_removed(self):
        a = Automaton.build(T, ["x", "y"], "x", [], [])
        assert reachable(a).n_states == 1

    def test_reachable_fixpoint(self):
        a = chain()
        assert reachable(a).labels == a.labels

    def test_coreachable(self):
        assert coreachable(chain()) == {0, 1, 2}
        assert coreachable(chain(marked=())) == frozenset()
        all_marked = chain(marked=("q0", "q1", "q2"))
        assert coreachable(all_marked) == {0, 1, 2}

    def test_trim_removes_sink(self):
        a = Automaton.build(T, ["q0", "q1", "sink"], "q0", ["q1"],
                            [("q0", "a", "q1"), ("q0", "b", "sink")])
        t = trim(a)
        assert t.labels == ("q0", "q1")
        assert not is_nonblocking(a)
        assert is_nonblocking(t)

    def test_blocking_witness(self):
        a = Automaton.build(T, ["q0", "q1", "sink"], "q0", ["q1"],
                            [("q0", "a", "q1"), ("q1", "c", "sink")])
        v = is_nonblocking(a)
        assert not v and v.witness == ("a", "c")

    def test_trim_empty(self):
        assert trim(chain(marked=())).is_empty()

    def test_plant_fully_reachable(self, plant):
        assert reachable(plant).n_states == plant.n_states

    @given(automata())
    def test_trim_idempotent(self, a):
        t = trim(a)
        assert language_equal(trim(t), t)
        assert trim(t).n_states == t.n_states

    @given(automata())
    def test_nonblocking_iff_reach_eq_coreach(self, a):
        r = reachable(a)
        assert bool(is_nonblocking(a)) == (coreachable(r) == frozenset(range(r.n_states)))


class TestProduct:
    def test_identity(self):
        univ = Automaton.build(T, ["u"], "u", ["u"], [("u", e, "u") for e in T.names])
        a = chain()
        p = product(a, univ)
        assert p.n_states == a.n_states
        assert language_equal(p, a)

    def test_disjoint(self):
        a = Automaton.build(T, ["x", "y"], "x", ["y"], [("x", "a", "y")])
        b = Automaton.build(T, ["x", "y"], "x", ["y"], [("x", "b", "y")])
        p = product(a, b)
        assert p.n_states == 1 and p.n_transitions == 0
        assert trim(p).is_empty()

    def test_alphabet_mismatch(self):
        other = Automaton.build(EventTable.of(["a"]), ["x"], "x", [], [])
        with pytest.raises(AlphabetMismatch):
            product(chain(), other)

    @settings(max_examples=60)
    @given(automata(), automata())
    def test_marked_language_is_intersection(self, a, b):
        p = product(a, b)
        assert strings(p, 6, marked_only=True) == strings(a, 6, True) & strings(b, 6, True)
        assert strings(p, 6) == strings(a, 6) & strings(b, 6)

    @settings(max_examples=60)
    @given(automata(), automata())
    def test_union_language(self, a, b):
        u = union(trim(a), trim(b))
        ta, tb = trim(a), trim(b)
        assert strings(u, 6, True) == strings(ta, 6, True) | strings(tb, 6, True)

    def test_vehicle_candidate_against_enumeration(self, plant):
        from tickbound import vehicle

        safety, temporal = vehicle.safety_spec(), vehicle.temporal_spec()
        k = product(product(plant, safety), temporal)
        expect = {s for s in strings(plant, 9, True) if safety.accepts(s) and temporal.accepts(s)}
        assert strings(k, 9, True) == expect


class TestLanguageEqual:
    def test_self(self):
        assert language_equal(chain(), chain())

    def test_marked_vs_unmarked_singleton(self):
        m = Automaton.build(T, ["x"], "x", ["x"], [])
        u = Automaton.build(T, ["x"], "x", [], [])
        v = language_equal(m, u)
        assert not v and v.witness == ()

    def test_shortest_lexicographic_witness(self):
        a = Automaton.build(T, ["x", "y"], "x", ["y"], [("x", "a", "y"), ("x", "b", "y"), ("y", "c", "y")])
        b = Automaton.build(T, ["x", "y"], "x", ["y"], [("x", "a", "y"), ("x", "b", "y")])
        assert language_equal(a, b).witness == ("a", "c")

    def test_inclusion(self):
        a = chain()
        b = Automaton.build(T, ["q0", "q1", "q2"], "q0", ["q2"],
                            [("q0", "a", "q1"), ("q1", "b", "q2"), ("q1", "c", "q2")])
        assert language_included(a, b)
        v = language_included(b, a)
        assert not v and v.witness == ("a", "c")

    @settings(max_examples=60)
    @given(automata(), automata())
    def test_agrees_with_enumeration(self, a, b):
        # four states each: any difference shows within depth 8
        same = strings(a, 8) == strings(b, 8) and strings(a, 8, True) == strings(b, 8, True)
        assert bool(language_equal(a, b)) == same


def test_determinism_rejected():
    with pytest.raises(ValueError):
        Automaton.build(T, ["x", "y"], "x", [], [("x", "a", "x"), ("x", "a", "y")])


def test_run_and_accept():
    a = chain()
    assert a.accepts(["a", "b"]) and not a.accepts(["a"])
    assert a.generates(["a"]) and not a.generates(["b"])
    assert a.run(itertools.chain(["a"], ["b"])) == 2
