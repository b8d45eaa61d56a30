"""The ``cfl`` command line: config-driven experiment runs with JSON reports.

Grammar::

    cfl <kind> --config PATH [--out DIR] [--seed N] [--threads N]
    cfl scan   --config PATH [--out DIR] [--seed N] [--threads N]
    cfl graph convert --from FMT --to FMT [--in PATH] [--out PATH]

Kinds: construct, alpha, tile, factor, cover, regcheck, drc, embed, absorb,
rtt, thresholds, bounds.  Exit codes: 0 success, 2 config error, 3 input
error, 4 resource cap hit (partial results written).  The environment
variable CFL_NODE_BUDGET overrides the node budget of every exact solver.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import absorption, bounds, constructions, embedding, graphs
from . import invariants, regularity, reports, tiling
from .config import Config, ConfigError, parse_vertex_list
from .graphs import Graph, GraphFormatError, VertexSet

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_CAP = 4

KINDS = ("construct", "alpha", "tile", "factor", "cover", "regcheck",
         "drc", "embed", "absorb", "rtt", "thresholds", "bounds")


class InputError(Exception):
    pass


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_graph(cfg: Config, section: str, key: str = "graph",
               seed: int = 0) -> Graph:
    """A graph parameter is either a readable file (edge list or graph6) or
    a generator spec like ``gnp:30,0.5`` / ``petersen``."""
    raw = cfg.get_str(section, key)
    looks_like_path = os.path.exists(raw) or os.sep in raw or raw.endswith(
        (".g6", ".el", ".edges", ".txt"))
    if looks_like_path:
        text = _read_file(raw)
        try:
            return graphs.parse_graph(text)
        except GraphFormatError as exc:
            raise InputError(f"{raw}: {exc}") from exc
    try:
        return constructions.graph_from_spec(raw, seed=seed)
    except (constructions.ConstructionError, ValueError) as exc:
        raise ConfigError(f"[{section}] {key}", str(exc)) from exc


def _vertex_set(cfg: Config, section: str, key: str, g: Graph) -> VertexSet:
    raw = cfg.get_str(section, key)
    vs = parse_vertex_list(raw, f"[{section}] {key}")
    bad = [v for v in vs if not 0 <= v < g.n]
    if bad:
        raise ConfigError(f"[{section}] {key}", f"vertex ids out of range: {bad}")
    return VertexSet.of(g, vs)


def _node_budget(cfg: Config) -> Optional[int]:
    env = os.environ.get("CFL_NODE_BUDGET")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError("CFL_NODE_BUDGET", f"expected integer, got {env!r}")
    if cfg.has("run", "node_budget"):
        return cfg.get_int("run", "node_budget")
    return None


# -- kind handlers: (config, seed, caps, outdir) -> (result, flags) ----------


def run_alpha(cfg, seed, caps, outdir):
    g = load_graph(cfg, "alpha", seed=seed)
    ell = cfg.get_int("alpha", "ell")
    mode = cfg.get_str("alpha", "mode", "exact")
    if mode == "exact":
        res = invariants.alpha_ell_exact(g, ell, node_cap=caps.get("node_budget"))
        flags = {"exhaustive": res.exact, "cap_hit": not res.exact}
    elif mode == "greedy":
        res = invariants.alpha_ell_greedy(g, ell, seed)
        flags = {"exhaustive": False, "cap_hit": False}
    else:
        raise ConfigError("[alpha] mode", f"expected exact|greedy, got {mode!r}")
    return {"value": res.value, "witness": res.witness, "exact": res.exact,
            "nodes_explored": res.nodes_explored, "ell": ell}, flags


def run_tile(cfg, seed, caps, outdir):
    g = load_graph(cfg, "tile", seed=seed)
    r = cfg.get_int("tile", "r")
    res = tiling.max_tiling(g, r, node_cap=caps.get("node_budget"))
    result = {"r": r, "tiles": [m for m in res.best.members],
              "count": len(res.best), "deficiency": res.deficiency,
              "optimal": res.optimal, "nodes_explored": res.nodes_explored,
              "valid": tiling.verify_tiling(g, res.best)}
    return result, {"exhaustive": res.optimal, "cap_hit": not res.optimal}


def run_factor(cfg, seed, caps, outdir):
    g = load_graph(cfg, "factor", seed=seed)
    r = cfg.get_int("factor", "r")
    res = tiling.has_factor(g, r, node_cap=caps.get("node_budget"))
    result = {"r": r, "status": res.status,
              "factor": [m for m in res.tiling.members] if res.tiling else None,
              "valid": tiling.verify_tiling(g, res.tiling) if res.tiling else None}
    return result, {"cap_hit": res.status == "cap"}


def run_cover(cfg, seed, caps, outdir):
    g = load_graph(cfg, "cover", seed=seed)
    v = cfg.get_int("cover", "vertex")
    r = cfg.get_int("cover", "r")
    forbidden = None
    if cfg.has("cover", "forbidden"):
        forbidden = _vertex_set(cfg, "cover", "forbidden", g)
    res = invariants.has_clique_cover(g, v, r, forbidden)
    return {"vertex": v, "r": r, "cover": res}, {"cap_hit": False}


def run_construct(cfg, seed, caps, outdir):
    family = cfg.get_str("construct", "family")
    section = "construct"
    flags = {"cap_hit": False}
    if family == "lower-bound":
        n = cfg.get_int(section, "n")
        r = cfg.get_int(section, "r")
        ell = cfg.get_int(section, "ell")
        inner = load_graph(cfg, section, "inner", seed=seed)
        if cfg.has(section, "clique_size"):
            spec = constructions.LowerBoundSpec.with_clique_size(
                n, r, ell, cfg.get_int(section, "clique_size"), inner)
        else:
            spec = constructions.LowerBoundSpec(
                n, r, ell, cfg.get_fraction(section, "eta"), inner)
        try:
            build = constructions.build_lower_bound_graph(spec)
        except constructions.ConstructionError as exc:
            raise ConfigError("[construct]", str(exc)) from exc
        result = {"family": family, "graph": build.graph,
                  "clique_part": build.clique_part, "inner_part": build.inner_part,
                  "min_degree": build.min_degree,
                  "tiling_size_limit": build.tiling_size_limit,
                  "nominal_uncovered_fraction": build.nominal_uncovered_fraction,
                  "alpha_audit": build.alpha_audit}
        built = build.graph
    elif family == "cover-threshold":
        n = cfg.get_int(section, "n")
        r = cfg.get_int(section, "r")
        ell = cfg.get_int(section, "ell")
        inner = load_graph(cfg, section, "inner", seed=seed)
        spec = constructions.CoverThresholdSpec(
            n, r, ell, cfg.get_fraction(section, "x"), inner)
        try:
            build = constructions.build_cover_threshold_graph(spec)
        except constructions.ConstructionError as exc:
            raise ConfigError("[construct]", str(exc)) from exc
        result = {"family": family, "graph": build.graph, "hub": build.hub,
                  "neighborhood": build.neighborhood,
                  "clique_part": build.clique_part,
                  "min_degree": build.min_degree,
                  "degree_breakdown": build.degree_breakdown}
        built = build.graph
    elif family == "sparse-klfree":
        n = cfg.get_int(section, "n")
        ell = cfg.get_int(section, "ell")
        gamma = cfg.get_float(section, "gamma")
        tries = cfg.get_int(section, "max_tries", 20)
        try:
            sample = constructions.sample_sparse_klfree(n, ell, gamma, seed,
                                                        max_tries=tries)
        except ValueError as exc:
            raise ConfigError("[construct]", str(exc)) from exc
        result = {"family": family, "accepted": sample.accepted,
                  "p": sample.p, "exponent": sample.exponent,
                  "alpha_target": sample.alpha_target,
                  "attempts": sample.attempts, "graph": sample.graph}
        flags["accepted"] = sample.accepted
        built = sample.graph
    elif family == "spec":
        built = load_graph(cfg, section, "graph", seed=seed)
        result = {"family": family, "graph": built,
                  "min_degree": built.min_degree(), "edges": built.edge_count}
    else:
        raise ConfigError("[construct] family",
                          f"expected lower-bound|cover-threshold|sparse-klfree|spec, "
                          f"got {family!r}")
    if cfg.has(section, "graph_out") and built is not None:
        path = cfg.get_str(section, "graph_out")
        if outdir:
            path = os.path.join(outdir, path)
        text = (graphs.format_graph6(built) + "\n" if path.endswith(".g6")
                else graphs.format_edgelist(built))
        reports.write_text_atomic(path, text)
        result["graph_path"] = path
    return result, flags


def run_regcheck(cfg, seed, caps, outdir):
    g = load_graph(cfg, "regcheck", seed=seed)
    ppath = cfg.get_str("regcheck", "partition")
    try:
        part = regularity.parse_partition(_read_file(ppath), g)
    except regularity.PartitionFormatError as exc:
        raise InputError(f"{ppath}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"{ppath}: {exc}") from exc
    eps = cfg.get_fraction("regcheck", "epsilon")
    d = cfg.get_fraction("regcheck", "d")
    samples = cfg.get_int("regcheck", "samples", 10_000)
    check_super = cfg.get_bool("regcheck", "super", False)
    m = part.cluster_size
    mode = "exhaustive" if m <= regularity.EXHAUSTIVE_SIDE_CAP else "sampled"
    pair_results = {}
    for i in range(part.k):
        for j in range(i + 1, part.k):
            if check_super:
                sv = regularity.is_super_regular(
                    g, part.clusters[i], part.clusters[j], eps, d,
                    mode=mode, samples=samples, seed=seed)
                pair_results[f"{i}-{j}"] = {
                    "density": part.density(i, j), "super_regular": sv.ok,
                    "reason": sv.reason, "mode": sv.regularity.mode}
            else:
                rv = regularity.is_regular_pair(
                    g, part.clusters[i], part.clusters[j], eps,
                    mode=mode, samples=samples, seed=seed)
                pair_results[f"{i}-{j}"] = {
                    "density": part.density(i, j), "regular": rv.regular,
                    "mode": rv.mode,
                    "violation": ([rv.violation[0], rv.violation[1]]
                                  if rv.violation else None)}
    red = regularity.reduced_graph(g, part, d)
    result = {"k": part.k, "cluster_size": m, "mode": mode,
              "pairs": pair_results,
              "reduced_edges": {f"{i}-{j}": w for (i, j), w in red.weights.items()},
              "reduced_min_degree": red.min_degree()}
    return result, {"exhaustive": mode == "exhaustive", "cap_hit": False}


def run_drc(cfg, seed, caps, outdir):
    g = load_graph(cfg, "drc", seed=seed)
    target = _vertex_set(cfg, "drc", "target", g)
    witness = _vertex_set(cfg, "drc", "witness", g)
    t = cfg.get_int("drc", "t")
    r = cfg.get_int("drc", "r")
    m = cfg.get_int("drc", "m")
    trials = cfg.get_int("drc", "trials", 8)
    out = embedding.drc_select(g, target, witness, t, r, m, seed=seed,
                               max_trials=trials)
    slack = bounds.drc_condition(len(target) + len(witness),
                                 2 * g.edge_count / max(1, g.n), t, r, m,
                                 a=len(out.selected))
    result = {"selected": out.selected, "size": len(out.selected),
              "certified": out.certified, "trials": out.trials,
              "deletions": out.deletions, "initial_size": out.initial_size,
              "condition_slack_at_size": slack}
    return result, {"cap_hit": False}


def run_embed(cfg, seed, caps, outdir):
    g = load_graph(cfg, "embed", seed=seed)
    class_specs = cfg.get_str("embed", "classes").split(";")
    classes = []
    for i, spec in enumerate(class_specs):
        vs = parse_vertex_list(spec, f"[embed] classes[{i}]")
        classes.append(VertexSet.of(g, vs))
    p = cfg.get_int("embed", "p")
    raw_ab = cfg.get_str("embed", "alpha_bound", "auto")
    if raw_ab == "auto":
        alpha_bound = max(invariants.alpha_ell_exact(g, max(2, p), within=c).value
                          for c in classes)
    else:
        alpha_bound = int(raw_ab)
    econf = embedding.EmbedConfig(
        s=cfg.get_int("embed", "s", 2),
        beta=cfg.get_float("embed", "beta", 0.1),
        trials=cfg.get_int("embed", "trials", 8))
    res = embedding.embed_clique_in_tuple(g, classes, p, alpha_bound,
                                          seed=seed, config=econf)
    result = {"success": res.success, "path": res.path, "stage": res.stage,
              "vertices": res.vertices, "per_class": res.per_class,
              "alpha_bound": alpha_bound, "trials_used": res.trials_used,
              "telemetry": res.telemetry}
    return result, {"cap_hit": False}


def run_absorb(cfg, seed, caps, outdir):
    task = cfg.get_str("absorb", "task")
    if task == "gadget":
        r = cfg.get_int("absorb", "r")
        gad = absorption.build_reachable_gadget(r)
        cert = absorption.certify_reachable(gad.graph, gad.u, gad.v,
                                            gad.reach_set, r)
        result = {"task": task, "r": r, "graph": gad.graph,
                  "u": gad.u, "v": gad.v, "reach_set": gad.reach_set,
                  "parts": gad.parts, "certified": cert is not None,
                  "factor_u": [m for m in cert.factor_u.members] if cert else None,
                  "factor_v": [m for m in cert.factor_v.members] if cert else None}
        return result, {"cap_hit": False}
    g = load_graph(cfg, "absorb", seed=seed)
    r = cfg.get_int("absorb", "r")
    if task == "absorber":
        s = _vertex_set(cfg, "absorb", "s_set", g)
        a = _vertex_set(cfg, "absorb", "a_set", g)
        t = cfg.get_int("absorb", "t")
        cert = absorption.certify_absorber(g, s, a, r, t)
        result = {"task": task, "certified": cert is not None,
                  "factor_of_a": [m for m in cert.factor_of_a.members] if cert else None,
                  "factor_of_a_union_s":
                      [m for m in cert.factor_of_a_union_s.members] if cert else None}
    elif task == "reachable":
        u = cfg.get_int("absorb", "u")
        v = cfg.get_int("absorb", "v")
        s = _vertex_set(cfg, "absorb", "s_set", g)
        cert = absorption.certify_reachable(g, u, v, s, r)
        result = {"task": task, "certified": cert is not None,
                  "factor_u": [m for m in cert.factor_u.members] if cert else None,
                  "factor_v": [m for m in cert.factor_v.members] if cert else None}
    elif task == "xi":
        a = _vertex_set(cfg, "absorb", "a_set", g)
        xi = cfg.get_fraction("absorb", "xi")
        mode = cfg.get_str("absorb", "mode", "exhaustive")
        samples = cfg.get_int("absorb", "samples", 2000)
        try:
            verdict = absorption.certify_xi_absorbing(g, a, r, xi, mode=mode,
                                                      samples=samples, seed=seed)
        except ValueError as exc:
            raise ConfigError("[absorb]", str(exc)) from exc
        result = {"task": task, "absorbing": verdict.absorbing,
                  "mode": verdict.mode, "checked": verdict.checked,
                  "witness_r": verdict.witness_r}
    elif task == "closedness":
        raw = cfg.get_str("absorb", "u_set", "all")
        u_set = (VertexSet(g, g.full_mask()) if raw == "all"
                 else VertexSet.of(g, parse_vertex_list(raw, "[absorb] u_set")))
        t = cfg.get_int("absorb", "t", 1)
        budget = cfg.get_int("absorb", "pair_budget", 64)
        inner = cfg.get_bool("absorb", "inner", False)
        limit = cfg.get_int("absorb", "limit", 8)
        rep = absorption.closedness_report(g, u_set, r, t, budget,
                                           inner=inner, per_pair_limit=limit,
                                           seed=seed)
        result = {"task": task, "report": rep}
    else:
        raise ConfigError("[absorb] task",
                          f"expected absorber|reachable|xi|closedness|gadget, "
                          f"got {task!r}")
    return result, {"cap_hit": False}


def run_rtt(cfg, seed, caps, outdir):
    n = cfg.get_int("rtt", "n")
    r = cfg.get_int("rtt", "r")
    ell = cfg.get_int("rtt", "ell")
    alpha_bound = cfg.get_int("rtt", "alpha_bound")
    tries = cfg.get_int("rtt", "tries", 2000)
    res = invariants.rtt_oracle(n, r, ell, alpha_bound, seed=seed, tries=tries)
    result = {"n": n, "r": r, "ell": ell, "alpha_bound": alpha_bound,
              "value": res.value, "witness": res.witness,
              "exhaustive": res.exhaustive, "degenerate": res.degenerate,
              "feasible": res.feasible, "graphs_scanned": res.graphs_scanned}
    return result, {"exhaustive": res.exhaustive, "degenerate": res.degenerate,
                    "cap_hit": False}


def run_thresholds(cfg, seed, caps, outdir):
    result: Dict[str, object] = {}
    if cfg.has("thresholds", "parts"):
        parts = cfg.get_int_list("thresholds", "parts")
        c = bounds.chi_cr(parts)
        result["parts"] = parts
        result["chi_cr"] = c
        result["chi_cr_degenerate"] = c == 0
        if c != 0:
            result["komlos_threshold"] = bounds.komlos_threshold(parts)
    if cfg.has("thresholds", "r") and cfg.has("thresholds", "ell"):
        r = cfg.get_int("thresholds", "r")
        ell = cfg.get_int("thresholds", "ell")
        n = cfg.get_int("thresholds", "n", 1)
        rho = cfg.get_fraction("thresholds", "rho_star", Fraction(0))
        try:
            dt = bounds.degree_thresholds(n, r, ell, rho)
        except ValueError as exc:
            raise ConfigError("[thresholds]", str(exc)) from exc
        result["degree_thresholds"] = {
            "tiling_term": dt.tiling_term, "cover_term": dt.cover_term,
            "threshold": dt.threshold, "scaled": dt.scaled, "rho_star": rho}
        if cfg.has("thresholds", "profile_c"):
            c = cfg.get_float("thresholds", "profile_c")
            npts = cfg.get_int("thresholds", "profile_n", n if n > 1 else 100)
            result["alpha_profile"] = {
                "c": c, "n": npts,
                "value": bounds.alpha_profile(npts, r, ell, c)}
    if not result:
        raise ConfigError("[thresholds]", "nothing to compute: give parts "
                          "and/or r, ell")
    return result, {"cap_hit": False}


def run_bounds(cfg, seed, caps, outdir):
    formula = cfg.get_str("bounds", "formula")
    if formula == "fkg":
        n = cfg.get_int("bounds", "n")
        ell = cfg.get_int("bounds", "ell")
        p = cfg.get_float("bounds", "p")
        log_lb = bounds.fkg_lower_bound(n, ell, p)
        result = {"formula": formula, "n": n, "ell": ell, "p": p,
                  "log_lower_bound": log_lb,
                  "lower_bound": 0.0 if log_lb == -float("inf")
                  else __import__("math").exp(log_lb)}
    elif formula == "janson":
        a = cfg.get_int("bounds", "a_size")
        ell = cfg.get_int("bounds", "ell")
        p = cfg.get_float("bounds", "p")
        rep = bounds.janson_bound(a, ell, p)
        result = {"formula": formula, "a_size": a, "ell": ell, "p": p,
                  "expected_x": rep.expected_x, "delta": rep.delta,
                  "log_upper_bound": rep.log_upper_bound,
                  "upper_bound": rep.upper_bound,
                  "delta_exact": bounds.janson_delta_exact(a, ell, p)}
    elif formula == "drc-condition":
        n = cfg.get_int("bounds", "n")
        d = cfg.get_float("bounds", "avg_degree")
        t = cfg.get_int("bounds", "t")
        r = cfg.get_int("bounds", "r")
        m = cfg.get_float("bounds", "m")
        a = cfg.get_float("bounds", "a")
        slack = bounds.drc_condition(n, d, t, r, m, a)
        result = {"formula": formula, "slack": slack, "holds": slack >= 0}
    else:
        raise ConfigError("[bounds] formula",
                          f"expected fkg|janson|drc-condition, got {formula!r}")
    return result, {"cap_hit": False}


HANDLERS = {
    "alpha": run_alpha,
    "tile": run_tile,
    "factor": run_factor,
    "cover": run_cover,
    "construct": run_construct,
    "regcheck": run_regcheck,
    "drc": run_drc,
    "embed": run_embed,
    "absorb": run_absorb,
    "rtt": run_rtt,
    "thresholds": run_thresholds,
    "bounds": run_bounds,
}


def _execute(kind: str, cfg: Config, seed: int, outdir: Optional[str]
             ) -> Tuple[dict, dict, dict]:
    caps = {"node_budget": _node_budget(cfg)}
    t0 = time.perf_counter()
    result, flags = HANDLERS[kind](cfg, seed, caps, outdir)
    timings = {"total_s": time.perf_counter() - t0}
    return result, {"caps": caps, "flags": flags}, timings


def _report_path(outdir: str, kind: str, digest: str, prefix: str = "report") -> str:
    return os.path.join(outdir, f"{prefix}-{kind}-{digest[:12]}.json")


def cmd_run(kind: str, args) -> int:
    cfg = Config.from_path(args.config)
    declared = cfg.get_str("run", "kind", kind)
    if declared != kind:
        raise ConfigError("[run] kind",
                          f"config declares {declared!r}, command line says {kind!r}")
    seed = args.seed if args.seed is not None else cfg.get_int("run", "seed", 0)
    result, meta, timings = _execute(kind, cfg, seed, args.out)
    report = reports.build_report(kind, seed, cfg.flat(), result,
                                  meta["flags"], meta["caps"], timings)
    if args.out:
        path = _report_path(args.out, kind, report["config_hash"])
        reports.write_report_atomic(path, report)
        print(path)
    else:
        sys.stdout.write(reports.dump_report(report))
    return EXIT_CAP if meta["flags"].get("cap_hit") else EXIT_OK


def cmd_scan(args) -> int:
    cfg = Config.from_path(args.config)
    kind = cfg.get_str("run", "kind")
    if kind not in HANDLERS:
        raise ConfigError("[run] kind", f"unknown kind {kind!r}")
    param = cfg.get_str("scan", "param")
    if "." not in param:
        raise ConfigError("[scan] param", "expected '<section>.<key>'")
    section, _, key = param.partition(".")
    raw_values = cfg.get_str("scan", "values", "")
    # semicolons separate values that themselves contain commas
    splitter = ";" if ";" in raw_values else ","
    values = [v.strip() for v in raw_values.split(splitter) if v.strip()]
    base_seed = args.seed if args.seed is not None else cfg.get_int("run", "seed", 0)
    outdir = args.out or "cfl-scan-out"
    os.makedirs(outdir, exist_ok=True)

    def one(idx_value):
        idx, value = idx_value
        text_parts = []
        parser = cfg._parser
        for sec in parser.sections():
            text_parts.append(f"[{sec}]")
            for k, v in parser.items(sec):
                if sec == section and k == key:
                    v = value
                elif sec == "scan":
                    continue
                text_parts.append(f"{k} = {v}")
            text_parts.append("")
        if not parser.has_section(section):
            raise ConfigError(f"[{section}]", "swept section missing")
        if not parser.has_option(section, key):
            text_parts.insert(text_parts.index(f"[{section}]") + 1,
                              f"{key} = {value}")
        point_cfg = Config.from_text("\n".join(text_parts))
        result, meta, timings = _execute(kind, point_cfg, base_seed, outdir)
        report = reports.build_report(kind, base_seed, point_cfg.flat(), result,
                                      meta["flags"], meta["caps"], timings)
        path = _report_path(outdir, kind, report["config_hash"],
                            prefix=f"point-{idx:03d}")
        reports.write_report_atomic(path, report)
        return idx, value, report

    rows = []
    if values:
        with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
            rows = list(pool.map(one, enumerate(values)))
    scalar_keys: List[str] = []
    for _, _, rep in rows:
        for k, v in rep["result"].items():
            if isinstance(v, (int, float, str, bool)) and k not in scalar_keys:
                scalar_keys.append(k)
    csv_rows = []
    for idx, value, rep in rows:
        csv_rows.append([idx, param, value]
                        + [rep["result"].get(k) for k in scalar_keys])
    csv_path = os.path.join(outdir, "scan.csv")
    reports.write_csv_atomic(csv_path,
                             ["index", "param", "param_value"] + scalar_keys,
                             csv_rows)
    print(csv_path)
    return EXIT_OK


def cmd_convert(args) -> int:
    formats = ("edgelist", "graph6")
    if args.from_fmt not in formats or args.to_fmt not in formats:
        raise ConfigError("--from/--to", f"formats are {formats}")
    text = _read_file(args.infile) if args.infile else sys.stdin.read()
    try:
        g = (graphs.parse_edgelist(text) if args.from_fmt == "edgelist"
             else graphs.parse_graph6(text))
    except GraphFormatError as exc:
        raise InputError(str(exc)) from exc
    out = (graphs.format_edgelist(g) if args.to_fmt == "edgelist"
           else graphs.format_graph6(g) + "\n")
    if args.outfile:
        reports.write_text_atomic(args.outfile, out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfl",
        description="clique-factor laboratory: config-driven experiments "
                    "with reproducible JSON reports")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_args(p):
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--out", default=None, help="report directory")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads (scan grid points)")

    for kind in KINDS:
        add_run_args(sub.add_parser(kind, help=f"run a {kind} experiment"))
    add_run_args(sub.add_parser("scan", help="sweep one parameter"))

    graph_p = sub.add_parser("graph", help="graph file utilities")
    graph_sub = graph_p.add_subparsers(dest="graph_command", required=True)
    conv = graph_sub.add_parser("convert", help="convert between formats")
    conv.add_argument("--from", dest="from_fmt", required=True)
    conv.add_argument("--to", dest="to_fmt", required=True)
    conv.add_argument("--in", dest="infile", default=None)
    conv.add_argument("--out", dest="outfile", default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "graph":
            return cmd_convert(args)
        if args.command == "scan":
            return cmd_scan(args)
        return cmd_run(args.command, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
