"""Command line entry point: ``graphdef <subcommand> ...``.

Exit codes: 0 pass, 1 assertion failure, 2 usage error, 3 resource refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, constructions, emitters, games, generators, scenarios, strategies, wl
from .errors import GraphDefError, ResourceError
from .graph import metrics
from .graphio import convert, read_graph, to_graph6
from .logic import evaluate, measure, to_text
from .parser import parse
from .values import INF, to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

STOCHASTIC_FAMILIES = {"gnp", "random_labeled_tree"}


class UsageError(Exception):
    pass


def _text_arg(value: str) -> str:
    """Inline text, or the contents of a file when the value names one."""
    try:
        if Path(value).is_file():
            return Path(value).read_text()
    except OSError:
        pass
    return value


def _graph(value: str):
    return read_graph(_text_arg(value).strip())


def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"expected key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def _emit(obj, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
        return
    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, (dict, list)):
                value = json.dumps(value, sort_keys=True)
            out.write(f"{key}: {value}\n")
    else:
        out.write(f"{obj}\n")


def _value(v):
    return v.to_json() if isinstance(v, games.LowerBound) else to_json(v)


# subcommand handlers return (payload, exit code)


def cmd_gen(args):
    params = _params(args.param)
    if args.family in constructions.FAMILIES:
        if args.family == "unite_conquer" and isinstance(params.get("members"), str):
            params["members"] = params["members"].split(",")
        g, prov = constructions.construct(args.family, params)
        return {"graph6": to_graph6(g), "order": g.n, "size": g.size, "provenance": prov.to_json()}, EXIT_OK
    if args.family in STOCHASTIC_FAMILIES and args.seed is None:
        raise UsageError(f"family {args.family!r} is random: pass --seed")
    for key in ("graph",):
        if key in params:
            params[key] = _graph(str(params[key]))
    if "graphs" in params:
        params["graphs"] = [_graph(s) for s in str(params["graphs"]).split(",")]
    g = generators.generate(args.family, params, args.seed)
    return {"graph6": to_graph6(g), "order": g.n, "size": g.size,
            "family": args.family, "params": _params(args.param), "seed": args.seed}, EXIT_OK


def cmd_wl(args):
    g = _graph(args.g)
    h = _graph(args.h) if args.h else None
    if args.action == "run":
        col = wl.refine(g, h, args.k, args.version, args.rounds)
        return col.to_json(), EXIT_OK
    if args.action == "stab":
        return {"k": args.k, "version": args.version, "stab": wl.stab(g, args.k, args.version)}, EXIT_OK
    if h is None:
        raise UsageError("verdict needs two graphs")
    v = wl.verdict(g, h, args.k, args.version)
    return {"k": args.k, "version": args.version, **v.to_json()}, EXIT_OK


def _seed_pairs(text: str | None):
    if not text:
        return ()
    out = []
    for part in text.split(","):
        a, b = part.split(":")
        out.append((int(a), int(b)))
    return tuple(out)


def cmd_game(args):
    g, h = _graph(args.g), _graph(args.h)
    if args.action == "depth":
        return {"game": "depth", **games.depth_result(g, h).to_json()}, EXIT_OK
    if args.action == "pebble":
        return {"game": "pebble", "k": args.k, **games.pebble_depth_result(g, h, args.k).to_json()}, EXIT_OK
    if args.action == "width":
        res = games.width_result(g, h, args.max_pebbles)
        out = res.to_json()
        out["value"] = _value(res.value)
        return {"game": "width", **out}, EXIT_OK
    if args.action == "alt":
        a = INF if args.a in ("inf", "INF") else int(args.a)
        return {"game": "alternation", "a": to_json(a), **games.alt_depth_result(g, h, a).to_json()}, EXIT_OK
    sieve = None
    if args.strategy == "weak_sieve":
        sieve = analysis.weak_sieve(g).chosen
    out = strategies.play(g, h, args.strategy, _seed_pairs(args.pairs), args.cap, sieve=sieve)
    return {"game": "play", "strategy": args.strategy, **out.to_json()}, EXIT_OK


def cmd_define(args):
    kind = args.kind
    if kind == "generic":
        phi = emitters.generic_defining(_graph(args.graph))
    elif kind == "hintikka":
        phi = emitters.hintikka(_graph(args.graph), args.k)
    elif kind == "delta":
        phi = emitters.delta(args.n, args.style)
    elif kind == "path":
        phi = emitters.path_sentence(args.n, args.style)
    elif kind == "extension":
        phi = emitters.extension_sentence(args.k)
    else:
        phi = emitters.padding_sentence(emitters.generic_defining(_graph(args.graph)))
    return {"kind": kind, "formula": to_text(phi), "metrics": measure(phi).to_json()}, EXIT_OK


def cmd_check(args):
    phi = parse(_text_arg(args.formula).strip())
    if phi.free:
        raise UsageError(f"formula has free variables: {', '.join(sorted(phi.free))}")
    rows = []
    for item in args.graphs:
        text = _text_arg(item)
        for line in text.splitlines():
            line = line.strip()
            if line:
                rows.append({"graph6": to_graph6(read_graph(line)), "holds": evaluate(read_graph(line), phi)})
    code = EXIT_OK
    if args.expect is not None and any(r["holds"] != (args.expect == "true") for r in rows):
        code = EXIT_FAIL
    return {"formula": to_text(phi), "results": rows}, code


def cmd_analyze(args):
    what = args.what
    g = _graph(args.g) if args.g else None
    if what in ("identify", "sieve", "extension", "components", "two-switch", "metrics", "clone") and g is None:
        raise UsageError(f"analyze {what} needs a graph")
    if what == "identify":
        return analysis.identification(g, args.metric, args.k).to_json(), EXIT_OK
    if what == "sieve":
        return analysis.weak_sieve(g).to_json(), EXIT_OK
    if what == "extension":
        return {"k": args.k, "holds": analysis.extension_property(g, args.k)}, EXIT_OK
    if what == "components":
        return analysis.component_count_bound_check(g).to_json(), EXIT_OK
    if what == "two-switch":
        w = analysis.two_switch_witness(g)
        return ({"found": False} if w is None else {"found": True, **w.to_json()}), EXIT_OK
    if what == "metrics":
        return metrics(g).to_json(), EXIT_OK
    if what == "clone":
        cls = [int(v) for v in args.twin_class.split(",")]
        out = analysis.clone_twin(g, cls, args.m)
        return {"graph6": to_graph6(out), "order": out.n}, EXIT_OK
    if what in ("cd", "cw"):
        if not args.h:
            raise UsageError(f"analyze {what} needs --h")
        h = _graph(args.h)
        v = analysis.cd_pair(g, h, args.k or 1) if what == "cd" else analysis.cw_pair(g, h)
        return {what: _value(v)}, EXIT_OK
    if what == "probability":
        phi = parse(_text_arg(args.formula).strip())
        if args.samples:
            if args.seed is None:
                raise UsageError("sampling needs --seed")
            p = analysis.estimate_sentence_probability(phi, args.n, args.samples, args.seed)
            return {"n": args.n, "samples": args.samples, "seed": args.seed, "estimate": p}, EXIT_OK
        return {"n": args.n, "exact": analysis.exact_sentence_probability(phi, args.n)}, EXIT_OK
    if what == "conquer":
        if args.samples and args.seed is None:
            raise UsageError("sampling needs --seed")
        return scenarios.conquer_iteration(args.n, args.samples, args.seed or 0, args.max_depth), EXIT_OK
    return analysis.TowerTable.build().to_json(), EXIT_OK


def cmd_spectrum(args):
    phi = parse(_text_arg(args.sentence).strip())
    rep = analysis.bs_spectrum(phi, args.max_order)
    out = rep.to_json()
    out["satisfiable"] = analysis.bs_satisfiable(phi)
    return out, EXIT_OK


def cmd_convert(args):
    text = _text_arg(args.input)
    return {"output": convert(text.strip() if args.source == "graph6" else text, args.source, args.target)}, EXIT_OK


def _write_report(report, args):
    if args.out:
        Path(args.out).write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")


def cmd_run_scenario(args):
    report = scenarios.run_scenario(args.name, args.seed, args.jobs, args.config)
    _write_report(report, args)
    return report, EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_experiment(args):
    config, _ = scenarios.load_config(args.config)
    names = args.names or scenarios.scenario_names(config)
    rows = []
    for name in names:
        rep = scenarios.run_scenario(name, args.seed, args.jobs, args.config)
        rows.append({"scenario": name, "criterion": rep["criterion"], "passed": rep["passed"],
                     "runtime_ms": rep["runtime_ms"]})
    report = {"scenarios": rows, "passed": all(r["passed"] for r in rows)}
    _write_report(report, args)
    return report, EXIT_OK if report["passed"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="unsigned 64-bit seed")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for scenario fan-out")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--config", default=None, help="scenario configuration file")

    p = argparse.ArgumentParser(prog="graphdef", description="First-order definitions of small graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", parents=[common], help="generate a graph")
    s.add_argument("family", choices=sorted(set(generators.FAMILIES) | set(constructions.FAMILIES)))
    s.add_argument("--param", action="append", metavar="KEY=VALUE")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("wl", parents=[common], help="Weisfeiler-Leman refinement")
    s.add_argument("action", choices=("run", "stab", "verdict"))
    s.add_argument("g")
    s.add_argument("h", nargs="?")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--version", choices=(wl.STANDARD, wl.COUNT_FREE), default=wl.STANDARD)
    s.add_argument("--rounds", type=int, default=None)
    s.set_defaults(func=cmd_wl)

    s = sub.add_parser("game", parents=[common], help="Ehrenfeucht game values and strategy play")
    s.add_argument("action", choices=("depth", "pebble", "width", "alt", "play"))
    s.add_argument("g")
    s.add_argument("h")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--a", default="0", help="switch budget, or inf")
    s.add_argument("--max-pebbles", type=int, default=None)
    s.add_argument("--strategy", choices=("halving_distance", "tree_separator", "weak_sieve"),
                   default="tree_separator")
    s.add_argument("--pairs", default=None, help="seed pairs as g:h,g:h")
    s.add_argument("--cap", type=int, default=None)
    s.set_defaults(func=cmd_game)

    s = sub.add_parser("define", parents=[common], help="emit a defining formula")
    s.add_argument("kind", choices=("generic", "hintikka", "delta", "path", "extension", "padding"))
    s.add_argument("--graph")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--style", choices=("naive", "halving", "three_var"), default="naive")
    s.set_defaults(func=cmd_define)

    s = sub.add_parser("check", parents=[common], help="model-check a sentence against graphs")
    s.add_argument("formula", help="sentence text or a file holding it")
    s.add_argument("graphs", nargs="+", help="graph6 strings or files with one graph6 per line")
    s.add_argument("--expect", choices=("true", "false"), default=None)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("analyze", parents=[common], help="analysis helpers")
    s.add_argument("what", choices=("identify", "sieve", "extension", "components", "two-switch",
                                     "metrics", "clone", "cd", "cw", "probability", "tower", "conquer"))
    s.add_argument("g", nargs="?")
    s.add_argument("--h", default=None)
    s.add_argument("--metric", choices=("depth", "width", "cd", "cw"), default="depth")
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--twin-class", default="")
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--formula", default=None)
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--samples", type=int, default=0)
    s.add_argument("--max-depth", type=int, default=None, help="conquer pool depth threshold")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("spectrum", parents=[common], help="spectrum of a Bernays-Schoenfinkel sentence")
    s.add_argument("sentence")
    s.add_argument("--max-order", type=int, default=6)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("convert", parents=[common], help="convert between graph6 and edge-list")
    s.add_argument("input", help="text or a file")
    s.add_argument("--from", dest="source", choices=("graph6", "edge-list"), required=True)
    s.add_argument("--to", dest="target", choices=("graph6", "edge-list"), required=True)
    s.set_defaults(func=cmd_convert)

    s = sub.add_parser("run-scenario", parents=[common], help="run one named acceptance scenario")
    s.add_argument("name")
    s.add_argument("--out", default=None, help="also write the JSON report here")
    s.set_defaults(func=cmd_run_scenario)

    s = sub.add_parser("experiment", parents=[common], help="run several scenarios and summarise")
    s.add_argument("names", nargs="*")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.seed is not None and not 0 <= args.seed < 2**64:
        sys.stderr.write("error: --seed must be an unsigned 64-bit integer\n")
        return EXIT_USAGE
    try:
        payload, code = args.func(args)
    except ResourceError as exc:
        sys.stderr.write(f"resource refusal: {exc}\n")
        return EXIT_RESOURCE
    except (UsageError, GraphDefError, ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    if args.command == "convert" and args.format == "text":
        sys.stdout.write(payload["output"].rstrip("\n") + "\n")
    else:
        _emit(payload, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
