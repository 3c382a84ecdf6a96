"""Command-line entry points.

Exit codes: 0 success or property holds, 1 property violated (a witness is
printed), 2 usage, parse or input error.  Every command prints human text
followed by a ``key=value`` report; ``--report FILE`` also writes the
report on its own.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .automaton import Automaton, is_nonblocking, language_equal, product, trim
from .bounded import MarkerCover, sup_btc_run, sup_cbtc, verify_bounded_time_nonblocking
from .control import is_controllable, sup_c
from .dot import export_dot
from .errors import TdesError
from .textio import read_cover, read_model, read_project, serialize_model
from .ttg import ActivityModel, build_ttg, check_activity_loop_free


class _Out:
    def __init__(self, args):
        self.args = args
        self.text: list[str] = []
        self.report: list[tuple[str, object]] = []

    def say(self, line: str = ""):
        self.text.append(line)

    def kv(self, key: str, value):
        if isinstance(value, bool):
            value = str(value).lower()
        self.report.append((key, value))

    def flush(self, stream):
        body = "\n".join(f"{k}={v}" for k, v in self.report)
        for line in self.text:
            print(line, file=stream)
        if self.report:
            if self.text:
                print(file=stream)
            print(body, file=stream)
        if getattr(self.args, "report", None):
            Path(self.args.report).write_text(body + "\n")


def _plant(path) -> Automaton:
    m = read_model(path)
    if isinstance(m, ActivityModel):
        return trim(build_ttg(m))
    return m


def _automaton(path) -> Automaton:
    m = read_model(path)
    return build_ttg(m) if isinstance(m, ActivityModel) else m


def _write(out: _Out, a: Automaton, dest: str | None, what: str = "automaton"):
    if dest:
        Path(dest).write_text(serialize_model(a))
        out.say(f"wrote {what} to {dest}")
    dot = getattr(out.args, "dot", None)
    if dot:
        Path(dot).write_text(export_dot(a))
        out.say(f"wrote DOT to {dot}")


def _violations(out: _Out, verdict) -> None:
    for v in verdict.detail.get("violations", ()):
        ticks = "" if v.ticks is None else f" ticks={v.ticks}"
        out.say(f"  [{v.cls}] activity {v.activity}: {v.kind}{ticks} at {v.state}")
        out.say(f"    reach:   {' '.join(v.prefix) or '(initial)'}")
        if v.suffix:
            out.say(f"    then:    {' '.join(v.suffix)}")


def cmd_build_ttg(args, out: _Out) -> int:
    m = read_model(args.model)
    if not isinstance(m, ActivityModel):
        raise TdesError(f"{args.model}: expected an activity model")
    a = build_ttg(m)
    if args.trim:
        a = trim(a)
    loop = check_activity_loop_free(a)
    out.say(f"compiled {len(m.activities)} activities into {a.n_states} states, {a.n_transitions} transitions")
    out.kv("states", a.n_states)
    out.kv("transitions", a.n_transitions)
    out.kv("events", len(a.events))
    out.kv("activity_loop_free", loop.holds)
    out.kv("nonblocking", is_nonblocking(a).holds)
    if args.output:
        _write(out, a, args.output, "tick-automaton")
    elif not args.dot:
        out.say(serialize_model(a).rstrip())
    else:
        _write(out, a, None)
    if not loop:
        out.say("cycle of activity events: " + " ".join(loop.witness))
        return 1
    return 0


def cmd_verify(args, out: _Out) -> int:
    a = _automaton(args.automaton)
    cover = read_cover(args.cover)
    v = verify_bounded_time_nonblocking(a, cover)
    out.kv("states", a.n_states)
    for name, w in v.detail.get("worst", {}).items():
        out.kv(f"worst.{name}", w)
    out.kv("bounded_time_nonblocking", v.holds)
    if v:
        out.say("bounded-time nonblocking: holds")
        return 0
    vs = v.detail["violations"]
    out.kv("violations", len(vs))
    out.kv("violating_activities", ",".join(sorted({f"{x.cls}:{x.activity}" for x in vs})))
    out.say(f"bounded-time nonblocking: FAILS ({len(vs)} violating class/activity groups)")
    _violations(out, v)
    return 1


def cmd_supc(args, out: _Out) -> int:
    g = _plant(args.plant)
    k = g
    for s in args.specs:
        k = product(k, read_model(s))
    k = trim(k)
    sup = sup_c(k, g)
    out.kv("plant_states", g.n_states)
    out.kv("candidate_states", k.n_states)
    out.kv("states", sup.n_states)
    out.kv("transitions", sup.n_transitions)
    out.kv("empty", sup.is_empty())
    out.say(f"supremal controllable sublanguage: {sup.n_states} states")
    _write(out, sup, args.output)
    return 1 if sup.is_empty() else 0


def cmd_supbtc(args, out: _Out) -> int:
    g = _plant(args.plant)
    k = trim(_automaton(args.candidate))
    cover = read_cover(args.cover)
    classes = [cover[args.cls]] if args.cls else list(cover)
    if args.budget is not None:
        if len(classes) != 1:
            raise TdesError("--budget needs --class when the cover has several classes")
        cover = cover.with_budget(classes[0].name, args.budget)
        classes = [cover[classes[0].name]]
    cur = k
    for cls in classes:
        run = sup_btc_run(g, cur, cls, args.order)
        out.kv(f"{cls.name}.budget", cls.budget)
        out.kv(f"{cls.name}.visited", run.visited)
        out.kv(f"{cls.name}.bound", run.bound)
        out.kv(f"{cls.name}.dropped", len(run.dropped))
        out.kv(f"{cls.name}.states", run.automaton.n_states)
        for src, ev, dst, d in run.dropped[: args.show_dropped]:
            out.say(f"  [{cls.name}] cut {src} --{ev}--> ({dst},{d})")
        cur = run.automaton
    same = bool(language_equal(cur, k))
    out.kv("states", cur.n_states)
    out.kv("empty", cur.is_empty())
    out.kv("unchanged", same)
    out.say(f"supremal bounded-time completable sublanguage: {cur.n_states} states"
            + (" (input unchanged)" if same else ""))
    _write(out, cur, args.output)
    return 1 if cur.is_empty() else 0


def cmd_synthesize(args, out: _Out) -> int:
    t0 = time.perf_counter()
    proj = read_project(args.project)
    if proj.cover is None:
        raise TdesError("project names no cover")
    g = proj.plant
    if isinstance(g, ActivityModel):
        g = trim(build_ttg(g))
    order = args.order or proj.order
    sup, rep = sup_cbtc(g, proj.specs, proj.cover, order)
    out.kv("plant_states", g.n_states)
    for key_val in rep.lines() if proj.verbosity > 0 else rep.lines()[:3] + rep.lines()[-2:]:
        for item in key_val.split(" "):
            key, _, val = item.partition("=")
            out.kv(key, val)
    out.kv("states", sup.n_states)
    out.kv("transitions", sup.n_transitions)
    out.kv("empty", sup.is_empty())
    out.say(f"synthesized supervisor: {sup.n_states} states, {sup.n_transitions} transitions "
            f"after {rep.iterations} pass(es)")
    out.say(f"controllable: {rep.controllable}; bounded-time nonblocking: {rep.bounded}")
    if args.timing:
        out.say(f"elapsed: {time.perf_counter() - t0:.3f}s")
    _write(out, sup, args.output, "supervisor")
    return 1 if sup.is_empty() else 0


def cmd_oracle_check(args, out: _Out) -> int:
    from .oracles import InstanceParams, btc_oracle, membership_agrees, random_case

    verdict_bad = member_bad = 0
    for i in range(args.instances):
        inst = random_case(InstanceParams(seed=args.seed + i, activities=(2, args.max_activities),
                                          budget=(1, args.max_budget)))
        g = inst.plant
        k = trim(product(g, inst.spec))
        for a in (g, k):
            if bool(verify_bounded_time_nonblocking(a, inst.cover)) != bool(btc_oracle(a, inst.cover)):
                verdict_bad += 1
                out.say(f"verdict mismatch at seed {args.seed + i}")
        for cls in inst.cover:
            res = sup_btc_run(g, k, cls).automaton
            agree = membership_agrees(g, k, cls, res, args.depth)
            if not agree:
                member_bad += 1
                out.say(f"membership mismatch at seed {args.seed + i}, class {cls.name}: "
                        f"{' '.join(agree.witness) or '(empty string)'}")
            if not res.is_empty() and not verify_bounded_time_nonblocking(res, MarkerCover((cls,))):
                member_bad += 1
                out.say(f"unsound output at seed {args.seed + i}, class {cls.name}")
    out.kv("instances", args.instances)
    out.kv("verdict_mismatches", verdict_bad)
    out.kv("membership_mismatches", member_bad)
    ok = verdict_bad == 0 and member_bad == 0
    out.say(f"oracle check over {args.instances} instances: {'agree' if ok else 'DISAGREE'}")
    return 0 if ok else 1


def cmd_controllable(args, out: _Out) -> int:
    g = _plant(args.plant)
    k = _automaton(args.candidate)
    v = is_controllable(k, g)
    out.kv("controllable", v.holds)
    if v:
        out.say("controllable: holds")
        return 0
    out.say(f"controllable: FAILS, {v.detail['event']} disabled after: {' '.join(v.witness[:-1]) or '(initial)'}")
    return 1


def cmd_dot(args, out: _Out) -> int:
    a = _automaton(args.automaton)
    text = export_dot(a)
    if args.output:
        Path(args.output).write_text(text)
        out.say(f"wrote DOT to {args.output}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tickbound", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, output=True):
        sp.add_argument("--report", help="also write the key=value report to this file")
        if output:
            sp.add_argument("-o", "--output", help="write the resulting automaton here")
            sp.add_argument("--dot", help="write a DOT rendering here")

    s = sub.add_parser("build-ttg", help="compile an activity model into a tick-automaton")
    s.add_argument("model")
    s.add_argument("--trim", action="store_true", help="trim the compiled automaton")
    common(s)
    s.set_defaults(func=cmd_build_ttg)

    s = sub.add_parser("verify", help="check bounded-time nonblockingness against a cover")
    s.add_argument("automaton")
    s.add_argument("cover")
    common(s, output=False)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("controllable", help="check controllability of a candidate w.r.t. a plant")
    s.add_argument("plant")
    s.add_argument("candidate")
    common(s, output=False)
    s.set_defaults(func=cmd_controllable)

    s = sub.add_parser("supc", help="supremal controllable sublanguage of plant x specs")
    s.add_argument("plant")
    s.add_argument("specs", nargs="*")
    common(s)
    s.set_defaults(func=cmd_supc)

    s = sub.add_parser("supbtc", help="supremal bounded-time completable sublanguage")
    s.add_argument("plant")
    s.add_argument("candidate")
    s.add_argument("cover")
    s.add_argument("--class", dest="cls", help="only this cover class (default: all, in order)")
    s.add_argument("--budget", type=int, help="override the class budget")
    s.add_argument("--order", choices=("lifo", "fifo"), default="lifo")
    s.add_argument("--show-dropped", type=int, default=0, metavar="N",
                   help="list the first N transitions cut for exceeding the budget")
    common(s)
    s.set_defaults(func=cmd_supbtc)

    s = sub.add_parser("synthesize", help="controllable and bounded-time nonblocking supervisor")
    s.add_argument("project")
    s.add_argument("--order", choices=("lifo", "fifo"))
    s.add_argument("--timing", action="store_true")
    common(s)
    s.set_defaults(func=cmd_synthesize)

    s = sub.add_parser("oracle-check", help="differential run against the brute-force oracles")
    s.add_argument("--instances", type=int, default=500)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--depth", type=int, default=10)
    s.add_argument("--max-activities", type=int, default=8)
    s.add_argument("--max-budget", type=int, default=5)
    common(s, output=False)
    s.set_defaults(func=cmd_oracle_check)

    s = sub.add_parser("dot", help="render an automaton as Graphviz DOT")
    s.add_argument("automaton")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_dot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args)
    try:
        code = args.func(args, out)
    except (TdesError, ValueError, KeyError, OSError) as exc:
        out.flush(sys.stdout)
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"tickbound: error: {msg}", file=sys.stderr)
        return 2
    out.flush(sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
