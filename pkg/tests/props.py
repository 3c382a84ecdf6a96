"""Random-instance property suites shared by the unit and acceptance tests.

Each function checks one property over ``n`` seed-pinned instances, raises
``AssertionError`` naming the first failing seed, and returns counts worth
printing.
"""
import random
from collections import Counter

from conftest import case
from tickbound.automaton import language_equal, language_included, product, trim, union
from tickbound.bounded import MarkerCover, sup_btc, sup_btc_run, sup_cbtc, verify_bounded_time_nonblocking
from tickbound.control import is_controllable, sup_c
from tickbound.oracles import InstanceParams, random_spec

SPEC = InstanceParams(spec_states=(1, 3))


def _other_spec(inst, seed):
    return random_spec(random.Random(10_000 + seed), inst.plant.events, SPEC)


def btc_union_closure(n):
    nonempty = 0
    for seed in range(n):
        inst, k1 = case(seed)
        g = inst.plant
        k2 = trim(product(g, _other_spec(inst, seed)))
        for cls in inst.cover:
            one = MarkerCover((cls,))
            a, b = sup_btc(g, k1, cls), sup_btc(g, k2, cls)
            if a.is_empty() or b.is_empty():
                continue
            u = trim(union(a, b))
            assert verify_bounded_time_nonblocking(u, one), f"seed {seed}: union not bounded"
            assert language_included(u, sup_btc(g, trim(union(k1, k2)), cls)), f"seed {seed}: union not below sup"
            nonempty += 1
    return {"nonempty_pairs": nonempty}


def btc_idempotent_and_contained(n):
    nonempty = 0
    for seed in range(n):
        inst, k = case(seed)
        for cls in inst.cover:
            out = sup_btc(inst.plant, k, cls)
            assert language_included(out, k), f"seed {seed}: sup_btc not contained"
            assert language_equal(sup_btc(inst.plant, out, cls), out), f"seed {seed}: sup_btc not idempotent"
            if not out.is_empty():
                assert verify_bounded_time_nonblocking(out, MarkerCover((cls,))), f"seed {seed}: unsound"
                nonempty += 1
    return {"nonempty_outputs": nonempty}


def supc_idempotent_and_contained(n):
    nonempty = 0
    for seed in range(n):
        inst, k = case(seed)
        out = sup_c(k, inst.plant)
        assert language_included(out, k), f"seed {seed}: sup_c not contained"
        assert language_equal(sup_c(out, inst.plant), out), f"seed {seed}: sup_c not idempotent"
        nonempty += not out.is_empty()
    return {"nonempty_outputs": nonempty}


def cbtc_idempotent_sound_contained(n):
    """Also records the observed pass counts against the termination bound."""
    passes = Counter()
    nonempty = 0
    for seed in range(n):
        inst, k = case(seed)
        out, rep = sup_cbtc(inst.plant, inst.spec, inst.cover)
        assert 1 <= rep.iterations <= rep.pass_bound, f"seed {seed}: {rep.iterations} passes > {rep.pass_bound}"
        passes[rep.iterations] += 1
        assert language_included(out, k), f"seed {seed}: sup_cbtc not contained"
        if out.is_empty():
            continue
        nonempty += 1
        assert is_controllable(out, inst.plant), f"seed {seed}: not controllable"
        assert verify_bounded_time_nonblocking(out, inst.cover), f"seed {seed}: not bounded"
        again, rep2 = sup_cbtc(inst.plant, out, inst.cover)
        assert rep2.iterations == 1 and language_equal(again, out), f"seed {seed}: sup_cbtc not idempotent"
    return {"nonempty_outputs": nonempty, "passes": dict(sorted(passes.items()))}


def budget_monotone(n):
    strict = 0
    for seed in range(n):
        inst, k = case(seed)
        for cls in inst.cover:
            lo = sup_btc(inst.plant, k, cls)
            wider = MarkerCover.of((cls.name, cls.activities, cls.budget + 1)).classes[0]
            hi = sup_btc(inst.plant, k, wider)
            assert language_included(lo, hi), f"seed {seed}: budget not monotone"
            strict += not language_equal(lo, hi)
        looser = inst.cover.with_budget(inst.cover.classes[0].name, inst.cover.classes[0].budget + 1)
        a, _ = sup_cbtc(inst.plant, inst.spec, inst.cover)
        b, _ = sup_cbtc(inst.plant, inst.spec, looser)
        assert language_included(a, b), f"seed {seed}: sup_cbtc not monotone in budget"
    return {"strictly_larger": strict}


def class_order_independent(n):
    multi = 0
    for seed in range(n):
        inst, _ = case(seed)
        if len(inst.cover) < 2:
            continue
        multi += 1
        a, _ = sup_cbtc(inst.plant, inst.spec, inst.cover)
        b, _ = sup_cbtc(inst.plant, inst.spec, MarkerCover(tuple(reversed(inst.cover.classes))))
        assert language_equal(a, b), f"seed {seed}: class order changes the result"
    return {"multi_class_instances": multi}


def counter_bound(n):
    worst = 0.0
    for seed in range(n):
        inst, k = case(seed)
        for cls in inst.cover:
            run = sup_btc_run(inst.plant, k, cls)
            assert run.visited <= run.bound, f"seed {seed}: visited {run.visited} > {run.bound}"
            assert run.bound == run.class_states * (cls.budget + 1)
            if run.bound:
                worst = max(worst, run.visited / run.bound)
    return {"max_fill": round(worst, 3)}
