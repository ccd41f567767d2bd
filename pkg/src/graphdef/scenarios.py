"""Named, seeded experiment scenarios with pass/fail assertions.

All thresholds live in ``data/scenarios.json``; reports embed its hash.
Re-running a scenario with the same seed gives identical JSON apart from
``runtime_ms``.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from itertools import combinations
from pathlib import Path

from . import analysis, games, wl
from .canon import canonical_form, enumerate_graphs, enumerate_graphs_upto, iso
from .constructions import ConstructionProvenance, pad, unite_conquer
from .emitters import delta, generic_defining, hintikka, padding_sentence
from .errors import ParameterError
from .generators import complete, cycle, derive_seed, gnp, make_rng, path, random_labeled_tree
from .graph import Graph, is_twin_free
from .graphio import from_graph6, to_graph6
from .logic import compile_formula, evaluate, measure
from .strategies import halving_bound, play
from .trees import asym_rooted_codes, enumerate_trees, tree_code
from .values import is_finite, to_json


def load_config(path: str | Path | None = None) -> tuple[dict, str]:
    """Parsed config and the sha256 of its bytes."""
    if path is None:
        raw = resources.files("graphdef").joinpath("data/scenarios.json").read_bytes()
    else:
        raw = Path(path).read_bytes()
    return json.loads(raw), hashlib.sha256(raw).hexdigest()


def fan_out(func, items, jobs: int = 1):
    """Ordered map, optionally over worker processes."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (4 * jobs))))


# criterion runners: (params, seed, jobs) -> (passed, results)


def _oracle_triangle(params, seed, jobs):
    graphs = enumerate_graphs_upto(params["max_order"])
    discrepancies = []
    checked = 0
    for g in graphs:
        for h in graphs:
            if g is h:
                continue
            d = games.depth(g, h)
            for k in range(1, params["max_k"] + 1):
                phi = hintikka(g, k)
                agree = evaluate(h, phi)
                checked += 1
                if (d > k) != agree:
                    discrepancies.append([to_graph6(g), to_graph6(h), k])
    return not discrepancies, {"checked": checked, "discrepancies": discrepancies}


def _depth_task(pair):
    g6, h6 = pair
    return games.depth(from_graph6(g6), from_graph6(h6))


def _pvv_bound(params, seed, jobs):
    per_n = {}
    for n in range(1, params["max_order"] + 1):
        gs = enumerate_graphs(n)
        pairs = [(to_graph6(a), to_graph6(b)) for a, b in combinations(gs, 2)]
        vals = fan_out(_depth_task, pairs, jobs)
        per_n[str(n)] = {"pairs": len(pairs), "max_depth": max(vals) if vals else None,
                         "bound": (n + 3) / 2}
    top = per_n[str(params["max_order"])]["max_depth"]
    ok = top is not None and top <= params["max_at_top_order"]
    ok &= all(v["max_depth"] is None or v["max_depth"] <= v["bound"] for v in per_n.values())
    return ok, {"per_order": per_n}


def _complete_pairs(params, seed, jobs):
    rows = []
    ok = True
    for n in range(1, params["max_order"] + 1):
        for m in range(n + 1, params["max_order"] + 1):
            d = games.depth(complete(n), complete(m))
            rows.append({"n": n, "m": m, "depth": d})
            ok &= d == n + 1
    return ok, {"pairs": rows}


def _cf_task(pair):
    g, h = from_graph6(pair[0]), from_graph6(pair[1])
    sep = wl.verdict(g, h, 2, wl.COUNT_FREE).non_isomorphic
    d = games.pebble_depth_result(g, h, 3, check=False).value
    return sep, to_json(d), min(g.n, h.n)


def _countfree_pebble(params, seed, jobs):
    graphs = enumerate_graphs_upto(params["max_order"])
    pairs = [(to_graph6(a), to_graph6(b)) for a, b in combinations(graphs, 2)]
    out = fan_out(_cf_task, pairs, jobs)
    mismatch, bound_violations = [], []
    finite = 0
    for (g6, h6), (sep, d, n) in zip(pairs, out):
        fin = d != "inf"
        finite += fin
        if sep != fin:
            mismatch.append([g6, h6])
        if fin and d > n * n + 1:
            bound_violations.append([g6, h6, d])
    ok = not mismatch and not bound_violations
    return ok, {"pairs": len(pairs), "separated": finite, "mismatches": mismatch,
                "bound_violations": bound_violations}


def _tree_refinement(params, seed, jobs):
    trees = [t for n in range(1, params["max_order"] + 1) for t in enumerate_trees(n)]
    false_iso = []
    worst_cw = 0
    for a, b in combinations(trees, 2):
        if not wl.separates(a, b, 1):
            false_iso.append([to_graph6(a), to_graph6(b)])
        cw = analysis.cw_pair(a, b, max_k=1)
        worst_cw = max(worst_cw, cw if isinstance(cw, int) else 99)
    ok = not false_iso and worst_cw <= params["cw_bound"]
    return ok, {"trees": len(trees), "pairs": len(trees) * (len(trees) - 1) // 2,
                "false_isomorphism": false_iso, "max_cw": worst_cw}


def _double_swap(g: Graph, rng) -> Graph:
    edges = g.edges()
    for _ in range(50):
        if len(edges) < 2:
            break
        i, j = rng.choice(len(edges), size=2, replace=False)
        (a, b), (c, d) = edges[int(i)], edges[int(j)]
        if len({a, b, c, d}) < 4 or g.has_edge(a, d) or g.has_edge(c, b):
            continue
        adj = list(g.adj)
        for u, v in ((a, b), (c, d)):
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        for u, v in ((a, d), (c, b)):
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph(g.n, adj)
    return gnp(g.n, 0.5, int(rng.integers(0, 2**63)))


def _diag_chain(params, seed, jobs):
    rng = make_rng(derive_seed(seed, 6))
    k = params["k"]
    violations = []
    pairs = 0
    separated = 0
    attempt = 0
    while pairs < params["pairs"]:
        attempt += 1
        n = int(rng.integers(params["min_order"], params["max_order"] + 1))
        g = gnp(n, 0.5, int(rng.integers(0, 2**63)))
        h = _double_swap(g, rng) if attempt % 2 else gnp(n, 0.5, int(rng.integers(0, 2**63)))
        if iso(g, h):
            continue
        pairs += 1
        col = wl.refine(g, h, k, wl.STANDARD)
        last = col.rounds + k
        diag = [not wl.diag_compare(g, h, k, wl.STANDARD, r, col) for r in range(last + 1)]
        full = [not wl.full_compare(col, r) for r in range(last + 1)]
        separated += any(full)
        for r in range(last + 1):
            if diag[r] and not full[r]:
                violations.append({"pair": pairs, "round": r, "kind": "diag_without_full"})
            if full[r] and not any(diag[: min(r + 1, last) + 1]):
                violations.append({"pair": pairs, "round": r, "kind": "full_without_diag"})
    return not violations, {"pairs": pairs, "separated": separated, "violations": violations}


def _random_cd2(params, seed, jobs):
    n, samples = params["n"], params["samples"]
    discrete = 0
    witnesses = 0
    bad = []
    for i in range(samples):
        g = gnp(n, 0.5, derive_seed(seed, 7, i))
        if wl.discrete_rounds(g) <= params["discrete_rounds"]:
            discrete += 1
        w = analysis.two_switch_witness(g)
        if w is None:
            continue
        witnesses += 1
        cd = analysis.cd_pair(g, w.graph, 1)
        if not (w.certified and canonical_form(g) != canonical_form(w.graph)) or (
                is_finite(cd) and cd < params["cd_lower"]):
            bad.append(i)
    frac = discrete / samples
    wfrac = witnesses / samples
    ok = frac >= params["min_fraction"] and wfrac >= params["min_witness_fraction"] and not bad
    return ok, {"discrete_fraction": frac, "witness_fraction": wfrac, "bad_witnesses": bad}


def _extension_width(params, seed, jobs):
    n, k = params["n"], params["extension_k"]
    results = []
    i = 0
    while len(results) < params["pairs"]:
        g = gnp(n, 0.5, derive_seed(seed, 8, i, 0))
        h = gnp(n, 0.5, derive_seed(seed, 8, i, 1))
        i += 1
        if not (analysis.extension_property(g, k) and analysis.extension_property(h, k)) or iso(g, h):
            continue
        w = games.width(g, h, max_pebbles=params["width_lower"] - 1)
        lower = w.value if isinstance(w, games.LowerBound) else w
        results.append(lower)
    ok = all(v >= params["width_lower"] for v in results)
    return ok, {"pairs": len(results), "width_lower_bounds": results, "draws": i}


def _weak_sieve(params, seed, jobs):
    size_bad = []
    checked = 0
    for n in range(1, params["exhaustive_order"] + 1):
        for g in enumerate_graphs(n):
            if not is_twin_free(g):
                continue
            rep = analysis.weak_sieve(g)
            checked += 1
            if not rep.weak_sieve or rep.size > (n - 1) // 2:
                size_bad.append(to_graph6(g))
    n = params["sampled_order"]
    sampled = 0
    i = 0
    while sampled < params["samples"]:
        g = gnp(n, 0.5, derive_seed(seed, 9, i))
        i += 1
        if not is_twin_free(g):
            continue
        sampled += 1
        rep = analysis.weak_sieve(g)
        if not rep.weak_sieve or rep.size > (n - 1) // 2:
            size_bad.append(to_graph6(g))
    play_bad = []
    plays = 0
    worst_extra = 0
    worst_switch = 0
    for n in range(1, params["play_order"] + 1):
        gs = enumerate_graphs(n)
        for g in gs:
            rep = analysis.weak_sieve(g)
            if not rep.weak_sieve:
                continue
            for h in gs:
                if h == g:
                    continue
                out = play(g, h, "weak_sieve", sieve=rep.chosen)
                plays += 1
                if (not out.won or out.rounds > rep.size + params["extra_rounds"]
                        or out.switches > params["max_switches"]):
                    play_bad.append([to_graph6(g), to_graph6(h)])
                else:
                    worst_extra = max(worst_extra, out.rounds - rep.size)
                    worst_switch = max(worst_switch, out.switches)
    ok = not size_bad and not play_bad
    return ok, {"twin_free_checked": checked, "sampled": sampled, "size_violations": size_bad,
                "plays": plays, "play_violations": play_bad, "worst_extra_rounds": worst_extra,
                "worst_switches": worst_switch}


def _formula_metrics(params, seed, jobs):
    rows = []
    ok = True
    for n in range(1, params["max_order"] + 1):
        naive = measure(delta(n, "naive"))
        halv = delta(n, "halving")
        three = measure(delta(n, "three_var"))
        gens = [generic_defining(path(n)), generic_defining(gnp(n, 0.5, derive_seed(seed, 10, n)))]
        row = {
            "n": n,
            "naive_depth": naive.D, "naive_width": naive.W,
            "halving_depth": halv.depth,
            "three_var_width": three.W,
            "generic_depths": [f.depth for f in gens],
        }
        rows.append(row)
        ok &= naive.D == n - 1 and naive.W == n + 1
        ok &= halv.depth == math.ceil(math.log2(n)) and three.D == math.ceil(math.log2(n))
        ok &= three.W == (3 if n >= 2 else 2)
        ok &= all(d == n + 1 for d in row["generic_depths"])
    return ok, {"rows": rows}


def _padding(params, seed, jobs):
    rows = []
    ok = True
    for g6 in params["bases"]:
        base = from_graph6(g6)
        phi_g = generic_defining(base)
        phi = padding_sentence(phi_g)
        padded = pad(base)
        check = compile_formula(phi)
        upto = min(padded.n + 1, params["max_check_order"])
        wrong = []
        count = 0
        for n in range(1, upto + 1):
            for g in enumerate_graphs(n):
                count += 1
                if check(g) != (n == padded.n and iso(g, padded)):
                    wrong.append(to_graph6(g))
        expect = max(phi_g.depth, 4) + 1
        rows.append({"base": g6, "pad_order": padded.n, "depth": phi.depth, "expected_depth": expect,
                     "checked": count, "up_to_order": upto, "wrong": wrong})
        ok &= phi.depth == expect and not wrong
    return ok, {"bases": rows}


def _halving(params, seed, jobs):
    rows = []
    overruns = []
    for n in range(params["min_order"], params["max_order"] + 1):
        p, c = path(n), cycle(n)
        seeds = 0
        worst = Counter()
        for x in range(n):
            for x2 in range(n):
                if x == x2:
                    continue
                for y in range(n):
                    for y2 in range(n):
                        if y == y2 or p.has_edge(x, x2) != c.has_edge(y, y2):
                            continue
                        dp, dc = p.dist(x, x2), c.dist(y, y2)
                        if dp == dc:
                            continue
                        d = min(dp, dc)
                        out = play(p, c, "halving_distance", [(x, y), (x2, y2)])
                        seeds += 1
                        if not out.won or out.rounds > halving_bound(d):
                            overruns.append([n, x, x2, y, y2])
                        else:
                            worst[d] = max(worst[d], out.rounds)
        rows.append({"n": n, "seeds": seeds, "worst_extra_by_distance": {str(k): v for k, v in sorted(worst.items())}})
    return not overruns, {"orders": rows, "overruns": overruns}


def asymmetric_test_tree() -> Graph:
    """Path on 13 vertices plus a leaf on vertex 2: asymmetric, radius 6, 14 vertices."""
    return Graph.from_edges(14, [(i, i + 1) for i in range(12)] + [(2, 13)])


def conquer_pool(n: int, max_depth: int | None = None) -> list[Graph]:
    """Order-n graphs of diameter 2 whose identification depth is below the threshold.

    The exact membership test quantifies over all orders, so identification
    depth against same-order graphs stands in for it. The default threshold
    is log2(n), strict.
    """
    out = []
    for g in enumerate_graphs(n):
        if g.diameter() != 2:
            continue
        d = analysis.identification(g, "depth").value
        if (d < math.log2(n)) if max_depth is None else (d <= max_depth):
            out.append(g)
    return out


def conquer_iteration(n: int, samples: int, seed: int, max_depth: int | None = None) -> dict:
    """Build unite-and-conquer graphs G_S for random halves S of the filtered pool."""
    pool = conquer_pool(n, max_depth)
    rng = make_rng(seed)
    half = len(pool) // 2
    built = []
    if half >= 2:  # unite_conquer needs at least two members
        for _ in range(samples):
            idx = sorted(int(i) for i in rng.choice(len(pool), size=half, replace=False))
            members = [pool[i] for i in idx]
            g = unite_conquer(members)
            prov = ConstructionProvenance(
                "unite_conquer", {"members": [to_graph6(m) for m in members]},
                {"filter": "diameter 2 and same-order identification depth",
                 "threshold": "< log2(n)" if max_depth is None else f"<= {max_depth}"})
            built.append({"graph6": to_graph6(g), "order": g.n, "diameter": to_json(g.diameter()),
                          "provenance": prov.to_json()})
    return {"n": n, "pool": [to_graph6(g) for g in pool], "samples": built, "seed": seed}


def tree_samples(seed: int, random_count: int, perturbed_count: int, lo: int, hi: int) -> list[Graph]:
    base = asymmetric_test_tree()
    base_edges = base.edges()
    seen = {tree_code(base)}
    out = []
    i = 0
    while len(out) < random_count:
        n = lo + i % (hi - lo + 1)
        t = random_labeled_tree(n, derive_seed(seed, 13, i))
        i += 1
        code = tree_code(t)
        if code not in seen:
            seen.add(code)
            out.append(t)
    rng = make_rng(derive_seed(seed, 13, 10**6))
    while len(out) < random_count + perturbed_count:
        edges = [e for e in base_edges if e != (2, 13)]
        kind = int(rng.integers(0, 3))
        if kind == 0:
            edges.append((int(rng.integers(0, 13)), 13))
            n = 14
        else:
            edges.append((2, 13))
            extra = 1 if kind == 1 else 2
            for j in range(extra):
                edges.append((int(rng.integers(0, 14 + j)), 14 + j))
            n = 14 + extra
        t = Graph.from_edges(n, edges)
        code = tree_code(t)
        if code not in seen:
            seen.add(code)
            out.append(t)
    return out


def _asymmetric_tree(params, seed, jobs):
    t = asymmetric_test_tree()
    bound = t.radius() + 2
    samples = tree_samples(seed, params["random_samples"], params["perturbed_samples"],
                           params["min_order"], params["max_order"])
    rounds = []
    failures = []
    for s in samples:
        out = play(t, s, "tree_separator")
        rounds.append(out.rounds)
        if not out.won or out.rounds > bound:
            failures.append({"tree": to_graph6(s), "failure": out.failure})
    return not failures, {"radius": t.radius(), "bound": bound, "samples": len(samples),
                          "rounds": rounds, "failures": failures}


def _twin_groups(g: Graph):
    groups = {}
    for v in range(g.n):
        groups.setdefault(("open", g.adj[v]), []).append(v)
        groups.setdefault(("closed", g.adj[v] | (1 << v)), []).append(v)
    return [tuple(vs) for _, vs in sorted(groups.items()) if len(vs) >= 2]


def _bs_small_model(params, seed, jobs):
    counterexamples = []
    disagreements = []
    spectra = []
    for i in range(params["sentences"]):
        phi = analysis.random_bs_sentence(derive_seed(seed, 14, i), params["max_k"], params["max_l"])
        rep = analysis.bs_spectrum(phi, params["max_order"])
        k = rep.k
        spec = rep.spectrum
        small = any(n <= max(k, 1) for n in spec)
        if spec and not small:
            counterexamples.append(str(phi))
        if analysis.bs_satisfiable(phi) != bool(spec):
            disagreements.append(str(phi))
        spectra.append({"sentence": str(phi), "k": rep.k, "l": rep.l, "spectrum": spec})
    # cloning
    cloned = []
    failures = []
    j = 0
    while len(cloned) < params["clone_instances"] and j < 5000:
        phi = analysis.random_bs_sentence(derive_seed(seed, 14, 10**6 + j), params["max_k"], params["max_l"])
        j += 1
        _, l, _, _ = analysis._bs_parts(phi)
        if l == 0:
            continue
        found = None
        for n in range(2, params["clone_max_order"] + 1):
            for g in enumerate_graphs(n):
                groups = _twin_groups(g)
                if not groups:
                    continue
                wits = analysis.bs_witnesses(g, phi)
                for w in wits:
                    for cls in groups:
                        if len(cls) >= l and not set(cls) & set(w):
                            found = (g, cls)
                            break
                    if found:
                        break
                if found:
                    break
            if found:
                break
        if not found:
            continue
        g, cls = found
        for m in (1, 2):
            big = analysis.clone_twin(g, cls, m)
            if not evaluate(big, phi):
                failures.append({"sentence": str(phi), "graph": to_graph6(g), "class": list(cls), "m": m})
        cloned.append({"sentence": str(phi), "graph": to_graph6(g), "class": list(cls)})
    ok = not counterexamples and not disagreements and not failures and len(cloned) >= params["clone_instances"]
    return ok, {"sentences": len(spectra), "satisfiable": sum(1 for s in spectra if s["spectrum"]),
                "counterexamples": counterexamples, "decision_disagreements": disagreements,
                "spectra": spectra, "clone_instances": cloned, "clone_failures": failures}


def _enumeration_counts(params, seed, jobs):
    asym = [len(asym_rooted_codes(k)) for k in range(len(params["asym_heights"]))]
    classes = [len(enumerate_graphs(n)) for n in range(1, len(params["graph_classes"]) + 1)]
    ok = asym == params["asym_heights"] and classes == params["graph_classes"]
    return ok, {"asym_rooted_trees": asym, "graph_classes": classes}


RUNNERS = {
    1: _oracle_triangle,
    2: _pvv_bound,
    3: _complete_pairs,
    4: _countfree_pebble,
    5: _tree_refinement,
    6: _diag_chain,
    7: _random_cd2,
    8: _extension_width,
    9: _weak_sieve,
    10: _formula_metrics,
    11: _padding,
    12: _halving,
    13: _asymmetric_tree,
    14: _bs_small_model,
    15: _enumeration_counts,
}


def scenario_names(config: dict | None = None) -> list[str]:
    config = config or load_config()[0]
    return list(config["scenarios"])


def run_scenario(name: str, seed: int | None = None, jobs: int = 1, config_path=None) -> dict:
    """Run a registered scenario and return its JSON report (``passed`` holds the verdict)."""
    config, digest = load_config(config_path)
    if name not in config["scenarios"]:
        raise ParameterError(f"unknown scenario {name!r}; known: {', '.join(config['scenarios'])}")
    params = dict(config["scenarios"][name])
    seed = config["default_seed"] if seed is None else seed
    runner = RUNNERS[params["criterion"]]
    start = time.perf_counter()
    passed, results = runner(params, seed, jobs)
    elapsed = time.perf_counter() - start
    limit = params.get("time_limit_s")
    report = {
        "scenario": name,
        "criterion": params["criterion"],
        "params": params,
        "seed": seed,
        "config_sha256": digest,
        "passed": bool(passed),
        "results": results,
        "runtime_ms": round(elapsed * 1000),
    }
    if limit is not None:
        report["within_time_limit"] = elapsed <= limit
    return report
