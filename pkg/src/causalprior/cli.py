"""Command-line front end.

Subcommands: sample, extract-priors, learn, eval, pipeline. Options can
also come from an INI file (``--config``) with a ``[common]`` section and
one section per subcommand; command-line flags win.

Exit codes: 0 ok, 1 usage, 2 data error, 3 endpoint error, 4 constraint conflict.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import datasets
from .constraints import ConstraintSet, format_constraints, from_statements, parse_constraints
from .errors import CausalPriorError, ConflictingConstraints, ConstraintError, DataError, EndpointFailure
from .evaluate import constraint_acceptance, edge_f1, format_json, format_text, metrics_dict, shd
from .ingest import forward_sample, load_dataset, parse_bif, read_graph, write_dataset, write_graph
from .llm import HttpChatClient, ReplayClient, TranscriptCache, format_edges, run_extraction
from .model import BayesNet, Dag
from .score import ScoreCache, ScoreFamily
from .search import SearchOptions, hard_search, hill_climb, soft_search

log = logging.getLogger("causalprior")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_ENDPOINT, EXIT_CONFLICT = 0, 1, 2, 3, 4

DEFAULTS = {
    "n": "1000",
    "seed": "0",
    "score": "bic",
    "ess": "1.0",
    "mode": "plain",
    "confidence": "0.99999",
    "restarts": "10",
    "max_indegree": "4",
    "max_iters": "1000",
    "tabu_len": "10",
    "threads": "1",
    "modes": "plain,hard,soft",
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    network: str | None = None
    data: str | None = None
    sizes: list[int] = field(default_factory=lambda: [1000])
    seed: int = 0
    family: ScoreFamily = field(default_factory=ScoreFamily)
    options: SearchOptions = field(default_factory=SearchOptions)
    constraints: str | None = None
    llm: str | None = None  # "replay" or "http"
    confidence: float = 0.99999
    mode: str = "plain"
    out: str | None = None

    def validate(self):
        if self.mode not in ("plain", "hard", "soft"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.mode != "plain" and (self.constraints is None) == (self.llm is None):
            raise UsageError(f"mode {self.mode} needs exactly one constraint source")
        if self.mode == "soft" and not 0.0 < self.confidence < 1.0:
            raise UsageError("soft confidence must lie in (0, 1)")


def resolve_network(spec: str) -> BayesNet:
    if spec in datasets.available():
        return datasets.load_network(spec)
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"network {spec!r} is neither a bundled name nor a file")
    return parse_bif(path.read_text(encoding="utf-8"))


def _add_common(p, *names):
    p.add_argument("--config", help="INI file with [common] and per-command sections")
    specs = {
        "network": dict(help="BIF file or bundled network name (cancer, asia)"),
        "n": dict(help="sample size(s), comma separated"),
        "seed": dict(type=int),
        "out": dict(help="output file"),
        "out_dir": dict(help="output directory"),
        "data": dict(help="dataset CSV"),
        "score": dict(choices=["bic", "bdeu"]),
        "ess": dict(type=float, help="BDeu equivalent sample size"),
        "mode": dict(choices=["plain", "hard", "soft"]),
        "constraints": dict(help="constraint file"),
        "confidence": dict(type=float, help="confidence attached to LLM statements in soft mode"),
        "conf_grid": dict(help="comma separated soft confidences, one report row each"),
        "restarts": dict(type=int),
        "max_indegree": dict(type=int),
        "max_iters": dict(type=int),
        "tabu_len": dict(type=int),
        "threads": dict(type=int, help="worker threads for search restarts"),
        "domain": dict(help="domain phrase for the prompts"),
        "replay": dict(help="fixture directory, or 'bundled' for the packaged fixtures"),
        "endpoint": dict(help="chat-completions URL"),
        "model": dict(help="model name sent to the endpoint"),
        "cache": dict(help="transcript cache directory"),
        "understanding": dict(help="file replacing the model's variable explanations"),
        "truth": dict(help="ground-truth BIF file or bundled name"),
        "learned": dict(help="learned graph file"),
        "json": dict(help="write the JSON report here"),
        "modes": dict(help="comma separated modes for pipeline"),
    }
    for name in names:
        p.add_argument("--" + name.replace("_", "-"), dest=name, default=None, **specs[name])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="causalprior", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    search = ("score", "ess", "restarts", "max_indegree", "max_iters", "tabu_len", "threads", "seed")
    llm = ("domain", "replay", "endpoint", "model", "cache", "understanding")
    _add_common(sub.add_parser("sample", help="forward-sample a dataset"), "network", "n", "seed", "out")
    _add_common(sub.add_parser("extract-priors", help="ask the LLM for causal statements"),
                "network", "out_dir", "confidence", *llm)
    _add_common(sub.add_parser("learn", help="learn a structure"),
                "network", "data", "mode", "constraints", "confidence", "out", *search, *llm)
    _add_common(sub.add_parser("eval", help="compare a learned graph with the truth"),
                "truth", "learned", "constraints", "json")
    _add_common(sub.add_parser("pipeline", help="sample, extract, learn in every mode, evaluate"),
                "network", "n", "out_dir", "modes", "confidence", "conf_grid", *search, *llm)
    return parser


def merged(args, command: str) -> dict:
    """Flags over config-file values over built-in defaults."""
    values = dict(DEFAULTS)
    if getattr(args, "config", None):
        cp = configparser.ConfigParser()
        if not cp.read(args.config):
            raise UsageError(f"cannot read config {args.config}")
        for section in ("common", command):
            if cp.has_section(section):
                values.update({k.replace("-", "_"): v for k, v in cp.items(section)})
    for k, v in vars(args).items():
        if v is not None:
            values[k] = v
    return values


def _search_config(v: dict) -> tuple[ScoreFamily, SearchOptions]:
    family = ScoreFamily(v["score"], float(v["ess"]))
    opts = SearchOptions(
        max_indegree=int(v["max_indegree"]),
        restarts=int(v["restarts"]),
        max_iters=int(v["max_iters"]),
        seed=int(v["seed"]),
        tabu_len=int(v["tabu_len"]),
        threads=int(v["threads"]),
    )
    return family, opts


def _client(v: dict):
    if v.get("replay"):
        if v.get("endpoint"):
            raise UsageError("give either --replay or --endpoint, not both")
        directory = v["replay"]
        if directory == "bundled":
            name = Path(v["network"]).stem if v.get("network") else ""
            directory = datasets.fixture_dir(name)
        return ReplayClient(directory, v.get("model") or datasets.FIXTURE_MODEL)
    if v.get("endpoint"):
        if not v.get("model"):
            raise UsageError("--endpoint needs --model")
        return HttpChatClient(v["endpoint"], v["model"])
    return None


def _domain(v: dict) -> str:
    if v.get("domain"):
        return v["domain"]
    name = v.get("network")
    if name in datasets.available():
        return datasets.network_domain(name)
    raise UsageError("--domain is required for networks without a bundled domain")


def _extract(v: dict, bn: BayesNet):
    client = _client(v)
    if client is None:
        raise UsageError("no LLM source: give --replay or --endpoint")
    cache = TranscriptCache(v["cache"]) if v.get("cache") else None
    understanding = Path(v["understanding"]).read_text(encoding="utf-8") if v.get("understanding") else None
    return run_extraction(client, _domain(v), bn.variables, cache=cache, understanding=understanding)


def _write(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def cmd_sample(v: dict) -> int:
    bn = resolve_network(v["network"] or "")
    data = forward_sample(bn, int(v["n"]), int(v["seed"]))
    text = write_dataset(data)
    if v.get("out"):
        _write(v["out"], text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_extract(v: dict) -> int:
    bn = resolve_network(v["network"] or "")
    result = _extract(v, bn)
    out = Path(v.get("out_dir") or ".")
    constraints = from_statements(result.statements, bn.variables, float(v["confidence"]))
    _write(out / "statements.txt", format_edges(result.statements) + "\n")
    _write(out / "proposed.txt", format_edges(result.proposed) + "\n")
    _write(out / "transcript.json", result.transcript.to_json())
    _write(out / "constraints.txt", format_constraints(constraints, bn.variables))
    for w in result.warnings:
        log.warning("ignored edge %r: %s", w.item, w.reason)
    print(f"{len(result.statements)} statements retained of {len(result.proposed)} proposed")
    return EXIT_OK


def _constraints_for(v: dict, bn: BayesNet, mode: str) -> ConstraintSet:
    # --confidence is the default; a [conf=...] suffix in a constraint file wins
    conf = float(v["confidence"]) if mode == "soft" else 1.0
    if v.get("constraints"):
        return parse_constraints(Path(v["constraints"]).read_text(encoding="utf-8"), bn.variables, conf)
    return from_statements(_extract(v, bn).statements, bn.variables, conf)


def learn(mode: str, family: ScoreFamily, data, constraints: ConstraintSet, opts: SearchOptions, cache=None):
    """Run one searcher; returns (dag, score, accepted-or-satisfied count)."""
    if mode == "plain":
        dag, score = hill_climb(family, data, opts, cache)
        return dag, score, None
    if mode == "hard":
        return tuple(hard_search(family, data, constraints, opts, cache))
    dag, score, accepted = soft_search(family, data, constraints, opts, cache)
    return dag, score, len(accepted)


def cmd_learn(v: dict) -> int:
    cfg = RunConfig(
        network=v.get("network"), data=v.get("data"), mode=v["mode"], constraints=v.get("constraints"),
        llm="replay" if v.get("replay") else ("http" if v.get("endpoint") else None),
        confidence=float(v["confidence"]),
    )
    cfg.validate()
    if not cfg.network or not cfg.data:
        raise UsageError("learn needs --network (for the variables) and --data")
    bn = resolve_network(cfg.network)
    data = load_dataset(Path(cfg.data).read_text(encoding="utf-8"), bn.variables)
    family, opts = _search_config(v)
    constraints = _constraints_for(v, bn, cfg.mode) if cfg.mode != "plain" else ConstraintSet()
    dag, score, extra = learn(cfg.mode, family, data, constraints, opts)
    text = write_graph(dag, bn.variables)
    if v.get("out"):
        _write(v["out"], text)
        log_doc = {"mode": cfg.mode, "family": str(family), "score": score, "constraints": len(constraints)}
        if extra is not None:
            log_doc["satisfied" if cfg.mode == "hard" else "accepted"] = extra
        _write(str(v["out"]) + ".log.json", json.dumps(log_doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)
    print(f"score: {score:.6f}", file=sys.stderr)
    return EXIT_OK


def cmd_eval(v: dict) -> int:
    if not v.get("truth") or not v.get("learned"):
        raise UsageError("eval needs --truth and --learned")
    bn = resolve_network(v["truth"])
    _, learned = read_graph(Path(v["learned"]).read_text(encoding="utf-8"), bn.variables)
    constraints = None
    if v.get("constraints"):
        constraints = parse_constraints(Path(v["constraints"]).read_text(encoding="utf-8"), bn.variables)
    report = metrics_dict(learned, bn.dag, constraints)
    sys.stdout.write(format_text(report))
    if v.get("json"):
        _write(v["json"], format_json(report))
    return EXIT_OK


def _row(label, n, conf, dag: Dag, truth: Dag, constraints: ConstraintSet | None):
    s = shd(dag, truth)
    f = edge_f1(dag, truth)
    row = {"method": label, "N": n, "conf": conf, "f1": round(f.f1, 6), "shd": s.delta,
           "extra": s.extra, "missing": s.missing, "reversed": s.reversed,
           "accept_precision": None, "accept_recall": None}
    if constraints:
        acc = constraint_acceptance(dag, constraints, truth)
        row["accept_precision"] = None if acc.precision is None else round(acc.precision, 6)
        row["accept_recall"] = None if acc.recall is None else round(acc.recall, 6)
    return row


def cmd_pipeline(v: dict) -> int:
    if not v.get("network"):
        raise UsageError("pipeline needs --network")
    bn = resolve_network(v["network"])
    family, opts = _search_config(v)
    sizes = [int(x) for x in str(v["n"]).split(",") if x.strip()]
    modes = [m.strip() for m in v["modes"].split(",") if m.strip()]
    for m in modes:
        RunConfig(mode=m, llm="llm", confidence=float(v["confidence"])).validate()
    grid = [float(x) for x in v["conf_grid"].split(",")] if v.get("conf_grid") else [float(v["confidence"])]
    for c in grid:
        if not 0.0 < c < 1.0:
            raise UsageError(f"soft confidence {c} outside (0, 1)")
    out = Path(v.get("out_dir") or "pipeline-out")

    extraction = _extract(v, bn)
    statements = extraction.statements
    hard_cs = from_statements(statements, bn.variables, 1.0)
    _write(out / "transcript.json", extraction.transcript.to_json())
    _write(out / "constraints.txt", format_constraints(hard_cs, bn.variables))
    true_count = sum(1 for c in hard_cs if _path(bn.dag, c.src, c.dst))

    rows = []
    try:
        llm_dag = Dag.from_edges(bn.dag.n, [(c.src, c.dst) for c in hard_cs])
        rows.append(_row("llm", None, None, llm_dag, bn.dag, hard_cs))
    except CausalPriorError:
        log.warning("LLM statements form a cycle; no LLM-only row")
    for n in sizes:
        data = forward_sample(bn, n, int(v["seed"]))
        _write(out / f"data_{n}.csv", write_dataset(data))
        cache = ScoreCache(family, data)
        for mode in modes:
            confs = grid if mode == "soft" else [None]
            for conf in confs:
                cs = hard_cs.with_confidence(conf) if mode == "soft" else hard_cs
                dag, _, _ = learn(mode, family, data, cs if mode != "plain" else ConstraintSet(), opts, cache)
                suffix = f"_{conf:g}" if conf is not None and len(confs) > 1 else ""
                _write(out / f"graph_{mode}{suffix}_{n}.txt", write_graph(dag, bn.variables))
                rows.append(_row(mode, n, conf, dag, bn.dag, hard_cs))

    summary = {
        "network": v["network"],
        "family": str(family),
        "seed": int(v["seed"]),
        "statements": {"proposed": len(extraction.proposed), "retained": len(statements), "true": true_count},
        "rows": rows,
    }
    _write(out / "report.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    text = _table(summary)
    _write(out / "report.txt", text)
    sys.stdout.write(text)
    return EXIT_OK


def _path(dag: Dag, a: int, b: int) -> bool:
    return b in dag.descendants(a)


def _table(summary: dict) -> str:
    st = summary["statements"]
    lines = [
        f"network: {summary['network']}",
        f"score: {summary['family']}",
        f"seed: {summary['seed']}",
        f"statements: {st['true']} true / {st['retained']} retained / {st['proposed']} proposed",
        "",
        f"{'method':<8}{'N':>7}{'conf':>9}{'F1':>8}{'SHD':>5}{'extra':>6}{'miss':>6}{'rev':>5}{'acc_p':>8}{'acc_r':>8}",
    ]

    def fmt(x, spec):
        return "-" if x is None else format(x, spec)

    for r in summary["rows"]:
        lines.append(
            f"{r['method']:<8}{fmt(r['N'], 'd'):>7}{fmt(r['conf'], 'g'):>9}{r['f1']:>8.3f}{r['shd']:>5d}"
            f"{r['extra']:>6d}{r['missing']:>6d}{r['reversed']:>5d}"
            f"{fmt(r['accept_precision'], '.2f'):>8}{fmt(r['accept_recall'], '.2f'):>8}"
        )
    return "\n".join(lines) + "\n"


COMMANDS = {
    "sample": cmd_sample,
    "extract-priors": cmd_extract,
    "learn": cmd_learn,
    "eval": cmd_eval,
    "pipeline": cmd_pipeline,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        values = merged(args, args.command)
        return COMMANDS[args.command](values)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConflictingConstraints as exc:
        symbols = None
        if values.get("network"):
            try:
                symbols = resolve_network(values["network"]).variables.symbols
            except (CausalPriorError, UsageError):
                pass
        print(f"constraint conflict: {exc.report.describe(symbols)}", file=sys.stderr)
        return EXIT_CONFLICT
    except ConstraintError as exc:
        print(f"constraint error: {exc}", file=sys.stderr)
        return EXIT_CONFLICT
    except EndpointFailure as exc:
        print(f"endpoint error: {exc}", file=sys.stderr)
        return EXIT_ENDPOINT
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except CausalPriorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
