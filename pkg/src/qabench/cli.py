"""``qabench`` command-line entry point.

Human-readable summaries go to stdout, machine outputs only to ``--out``
targets. Each run that writes ``--out X`` also writes ``X.config.json`` with
the fully resolved arguments (including a drawn seed when none was given).
"""

from __future__ import annotations

import argparse
import json
import logging
import secrets
import sys
from dataclasses import fields
from pathlib import Path

from . import FORMAT_VERSION, __version__
from .bench import CampaignConfig, run_campaign
from .chimera import ChimeraSpec, build_chimera
from .community import (auto_solver, brute_solver, greedy_local_move, recursive_bipartition,
                        resolution_limit_bound, sa_solver, sqa_solver)
from .graph import Graph, graph_metrics, parse_edge_list, write_edge_list
from .ingest import grow_mention_graph, grow_path_graph, read_jsonl
from .instances import (chimera_spec_of, gen_mais, gen_mis, gen_planted, gen_random_ising,
                        gen_random_qubo, qubo_to_ising, read_instance, write_instance)
from .solvers import (AnnealSchedule, ProjectorParams, SpinDynamicsParams, brute_force,
                      exact_chimera_dp, metropolis_anneal, projector_sqa, spin_dynamics)
from .synthnet import MinorGenParams, format_chains, gen_erdos_renyi, generate_chimera_minor, utilization

log = logging.getLogger("qabench")

EXIT_USAGE, EXIT_RUNTIME = 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _sidecar(out: str | Path, args: argparse.Namespace, **extra) -> None:
    d = {k: v for k, v in vars(args).items() if k != "func"}
    d.update(extra)
    Path(f"{out}.config.json").write_text(json.dumps(d, indent=2, sort_keys=True) + "\n")


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(32)
        print(f"seed: {args.seed}")
    return args.seed


def _load_graph(path: str) -> Graph:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"no such file: {path}")
    text = p.read_text()
    if text.lstrip().startswith("{"):
        return read_instance(p).graph()
    if text.lstrip().startswith("chimera"):
        return build_chimera(ChimeraSpec.parse_header(text.splitlines()[0]))
    return parse_edge_list(text)


def _load_params(raw: str | None) -> dict:
    if raw is None:
        return {}
    p = Path(raw)
    text = p.read_text() if p.exists() else raw
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"--params is neither a JSON file nor a JSON object: {e}") from None
    if not isinstance(d, dict):
        raise UsageError("--params must be a JSON object")
    return d


def _dataclass(cls, params: dict):
    names = {f.name for f in fields(cls)}
    extra = set(params) - names
    if extra:
        raise UsageError(f"unknown {cls.__name__} parameters: {sorted(extra)}")
    return cls(**params)


# --- subcommands -----------------------------------------------------------------

def cmd_gen(args) -> int:
    seed = _seed(args)
    fam = args.family
    if fam == "er":
        if args.n is None:
            raise UsageError("--family er needs --n")
        g = gen_erdos_renyi(args.n, args.p, seed)
        write_edge_list(g, args.out)
        print(f"er: n={g.n} m={g.m}")
    else:
        if args.k is None:
            raise UsageError(f"--family {fam} needs --k")
        spec = ChimeraSpec.square(args.k)
        if fam == "minor":
            g, emb = generate_chimera_minor(spec, MinorGenParams(seed=seed))
            write_edge_list(g, args.out)
            Path(f"{args.out}.chains").write_text(format_chains(emb))
            print(f"minor: n={g.n} m={g.m} utilization={utilization(emb, spec):.3f}")
        else:
            if fam == "ising":
                inst = gen_random_ising(spec, seed)
            elif fam == "qubo":
                inst = qubo_to_ising(gen_random_qubo(spec, seed))
            elif fam == "mis":
                inst = gen_mis(spec, seed)
            elif fam == "mais":
                inst = gen_mais(spec, seed)
            else:
                inst = gen_planted(spec, args.C, args.loop_policy, seed)
            write_instance(inst, args.out)
            extra = f" planted_energy={inst.planted_energy}" if inst.planted_energy is not None else ""
            print(f"{fam}: n={inst.n} couplers={len(inst.J)}{extra}")
    _sidecar(args.out, args)
    return 0


def cmd_solve(args) -> int:
    if not Path(args.inp).exists():
        raise UsageError(f"no such file: {args.inp}")
    inst = read_instance(args.inp)
    params = _load_params(args.params)
    s = args.solver
    if s == "brute":
        res = brute_force(inst)
    elif s == "dp":
        spec = chimera_spec_of(inst)
        if spec is None:
            raise ValueError("dp needs an instance with Chimera topology")
        res = exact_chimera_dp(inst, spec)
    elif s == "sa":
        res = metropolis_anneal(inst, _dataclass(AnnealSchedule, params))
    elif s == "spin":
        mode = params.pop("mode", "steepest")
        res = spin_dynamics(inst, mode, _dataclass(SpinDynamicsParams, params))
    else:
        res = projector_sqa(inst, _dataclass(ProjectorParams, params))
    print(f"energy: {res.best_energy!r}")
    print(f"steps: {res.steps} proven_optimal: {res.optimality_proven}")
    if args.out:
        d = res.to_dict()
        d.pop("trace", None)
        Path(args.out).write_text(json.dumps(d, indent=1) + "\n")
        _sidecar(args.out, args, params=params)
    return 0


def cmd_bench(args) -> int:
    path = Path(args.config)
    if not path.exists():
        raise UsageError(f"no such config: {args.config}")
    try:
        raw = json.loads(path.read_text())
        cfg = CampaignConfig.from_dict(raw)
    except (json.JSONDecodeError, KeyError, ValueError) as e:
        raise UsageError(f"bad config: {e}") from None
    jobs = args.jobs or 1
    res = run_campaign(cfg, jobs=jobs)
    res.write(args.out)
    for a in res.aggregates:
        print(f"{a.solver:>8} n={a.n:<5} p_hat={a.mean_p_hat:.3f} "
              f"tts99={a.mean_tts99_us:.4g}us excluded={a.excluded}/{a.instances}")
    print(f"wrote {args.out}/records.csv")
    return 0


def cmd_community(args) -> int:
    g = _load_graph(args.inp)
    seed = _seed(args)
    if args.solver == "louvain":
        res = greedy_local_move(g, seed=seed)
    else:
        solver = {"auto": auto_solver, "brute": brute_solver, "sa": sa_solver(),
                  "sqa": sqa_solver()}[args.solver]
        res = recursive_bipartition(g, solver, seed=seed, refine=args.refine)
    sizes = sorted((len(c) for c in res.partition.communities()), reverse=True)
    print(f"communities: {res.partition.num_communities} Q={res.modularity:.6f} steps={res.steps}")
    print(f"sizes: {sizes[:10]}{' ...' if len(sizes) > 10 else ''}")
    print(f"resolution limit: {resolution_limit_bound(g.m):.4f} internal edges")
    if args.out:
        Path(args.out).write_text(res.format_partition())
        Path(f"{args.out}.trace").write_text(res.format_trace())
        _sidecar(args.out, args)
    return 0


def cmd_ingest(args) -> int:
    if not Path(args.inp).exists():
        raise UsageError(f"no such file: {args.inp}")
    lines = read_jsonl(args.inp)
    grow = grow_mention_graph if args.kind == "mention" else grow_path_graph
    res = grow(lines, args.start, args.end)
    write_edge_list(res.graph, args.out)
    Path(f"{args.out}.ids").write_text(res.format_id_map())
    _sidecar(args.out, args)
    print(f"{args.kind}: n={res.graph.n} m={res.graph.m} records={res.in_window} "
          f"skipped={res.skipped}")
    return 0


def cmd_metrics(args) -> int:
    g = _load_graph(args.inp)
    m = graph_metrics(g)
    for k, v in m.as_dict().items():
        print(f"{k}: {v}")
    return 0


def build_parser() -> _Parser:
    p = _Parser(prog="qabench", description="Ising benchmarking toolkit")
    p.add_argument("--version", action="version",
                   version=f"qabench {__version__} (format {FORMAT_VERSION})")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate an instance or graph")
    g.add_argument("--family", required=True,
                   choices=["ising", "qubo", "mis", "mais", "planted", "minor", "er"])
    g.add_argument("--k", type=int, help="Chimera side length")
    g.add_argument("--n", type=int, help="node count (er)")
    g.add_argument("--p", type=float, default=0.1, help="edge probability (er)")
    g.add_argument("--C", type=float, default=0.2, help="cycle density (planted)")
    g.add_argument("--loop-policy", default="any", choices=["any", "short4", "long"])
    g.add_argument("--seed", type=int)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("--solver", required=True, choices=["brute", "dp", "sa", "spin", "sqa"])
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--params", help="JSON object or file with solver parameters")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run a benchmark campaign")
    b.add_argument("--config", required=True)
    b.add_argument("--out", required=True, help="output directory")
    b.add_argument("--jobs", type=int, default=None)
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("community", help="modularity community detection")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--solver", default="auto", choices=["auto", "brute", "sa", "sqa", "louvain"])
    c.add_argument("--refine", action="store_true", help="polish with local moves")
    c.add_argument("--seed", type=int)
    c.add_argument("--out")
    c.set_defaults(func=cmd_community)

    i = sub.add_parser("ingest", help="grow a graph from JSON-lines records")
    i.add_argument("--kind", required=True, choices=["mention", "path"])
    i.add_argument("--from", dest="start")
    i.add_argument("--to", dest="end")
    i.add_argument("--in", dest="inp", required=True)
    i.add_argument("--out", required=True)
    i.set_defaults(func=cmd_ingest)

    m = sub.add_parser("metrics", help="structural metrics of a graph")
    m.add_argument("--in", dest="inp", required=True)
    m.set_defaults(func=cmd_metrics)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
        return args.func(args)
    except UsageError as e:
        print(f"qabench: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code or 0)
    except Exception as e:  # runtime failure after validation
        log.debug("runtime error", exc_info=True)
        print(f"qabench: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
