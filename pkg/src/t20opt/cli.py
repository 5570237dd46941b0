"""Command-line interface: profiles build, evaluate, optimize, audit, serve.

Every command that produces results emits deterministic JSON (sorted keys,
no timestamps), so identical inputs and seeds give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Optional

from .audit import run_audit
from .batting import BattingSearchConfig, optimize_batting
from .bowling import SAConfig, optimize_bowling
from .engine.mc import simulate_batting, simulate_bowling
from .errors import T20OptError
from .profiles import ProfileStore, build_store
from .reporting import evaluate_payload, optimize_batting_payload, optimize_bowling_payload
from .scenarios import BATTING_KIND, LoadedScenario, load_scenario

STORE_ENV = "T20OPT_PROFILE_STORE"


def emit(payload: dict, out: Optional[str]) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def _load_store(path: Optional[str]) -> Optional[ProfileStore]:
    store_path = path or os.environ.get(STORE_ENV)
    if not store_path:
        return None
    return ProfileStore.load(store_path)


def _scenario_from_args(args) -> LoadedScenario:
    return load_scenario(args.scenario, store=_load_store(args.store))


def cmd_profiles_build(args) -> int:
    exclude = [m for m in (args.exclude or "").split(",") if m]
    store = build_store(args.corpus, exclude)
    store.save(args.out)
    emit(
        {
            "corpus_hash": store.corpus_hash,
            "excluded": sorted(store.excluded),
            "n_min": store.n_min,
            "batting_cells": len(store.batting),
            "bowling_cells": len(store.bowling),
            "out": str(args.out),
        },
        None,
    )
    return 0


def cmd_evaluate(args) -> int:
    loaded = _scenario_from_args(args)
    decision = None
    if args.order:
        decision = tuple(x.strip() for x in args.order.split(","))
    if args.plan:
        decision = tuple(x.strip() for x in args.plan.split(","))
    if decision is None:
        decision = loaded.actual_decision
    if decision is None:
        raise T20OptError(
            "nothing to evaluate: give --order/--plan or put actual_decision in the scenario"
        )
    if loaded.kind == BATTING_KIND:
        result = simulate_batting(loaded.scenario, decision, args.sims, args.seed)
    else:
        result = simulate_bowling(loaded.scenario, decision, args.sims, args.seed)
    emit(evaluate_payload(loaded, decision, result, args.sims, args.seed), args.out)
    return 0


def _batting_config(args) -> BattingSearchConfig:
    return BattingSearchConfig(n1=args.n1, k=args.top_k, n2=args.n2, seed=args.seed)


def _bowling_config(args) -> SAConfig:
    return SAConfig(
        t0=args.t0,
        steps=args.steps,
        n_fast=args.n_fast,
        n_refine=args.n_refine,
        top_k=args.top_k,
        seed=args.seed,
    )


def cmd_optimize_batting(args) -> int:
    loaded = _scenario_from_args(args)
    if loaded.kind != BATTING_KIND:
        raise T20OptError(f"optimize batting needs a batting scenario, got {loaded.kind!r}")
    config = _batting_config(args)
    ranked = optimize_batting(loaded.scenario, config)
    emit(optimize_batting_payload(loaded, ranked, asdict(config), args.seed), args.out)
    return 0


def cmd_optimize_bowling(args) -> int:
    loaded = _scenario_from_args(args)
    if loaded.kind == BATTING_KIND:
        raise T20OptError("optimize bowling needs a bowling scenario, got 'batting'")
    config = _bowling_config(args)
    ranked = optimize_bowling(loaded.scenario, config)
    emit(optimize_bowling_payload(loaded, ranked, asdict(config), args.seed), args.out)
    return 0


def cmd_audit(args) -> int:
    loaded = _scenario_from_args(args)
    config = _batting_config(args) if loaded.kind == BATTING_KIND else _bowling_config(args)
    report = run_audit(loaded, config)
    emit(report.as_dict(), args.out)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    ui = args.ui if args.ui and Path(args.ui).is_dir() else None
    fixtures = args.fixtures if args.fixtures and Path(args.fixtures).is_dir() else None
    app = create_app(
        store_path=args.store or os.environ.get(STORE_ENV),
        workers=args.workers,
        ui_dir=ui,
        fixtures_dir=fixtures,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _add_common(parser: argparse.ArgumentParser, sims: bool = False) -> None:
    parser.add_argument("--scenario", required=True, help="scenario JSON file")
    parser.add_argument("--seed", type=int, default=0, help="root seed (default 0)")
    parser.add_argument("--out", help="also write the JSON result to this file")
    parser.add_argument("--store", help=f"profile store directory (or ${STORE_ENV})")
    if sims:
        parser.add_argument("--sims", type=int, default=50_000, help="simulation count")


def _add_batting_opts(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n1", type=int, default=3_000, help="screening sims per order")
    parser.add_argument("--n2", type=int, default=20_000, help="refinement sims per order")


def _add_bowling_opts(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--steps", type=int, default=8_000, help="annealing steps")
    parser.add_argument("--t0", type=float, default=0.05, help="initial temperature")
    parser.add_argument("--n-fast", type=int, default=5_000, help="screening sims per proposal")
    parser.add_argument("--n-refine", type=int, default=30_000, help="refinement sims per plan")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="t20opt",
        description="T20 tactical decision engine: evaluate and optimize "
        "batting orders and bowling plans at an intervention point.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    profiles = sub.add_parser("profiles", help="profile store commands")
    psub = profiles.add_subparsers(dest="profiles_command", required=True)
    build = psub.add_parser("build", help="build a profile store from a ball-by-ball CSV")
    build.add_argument("--corpus", required=True, help="ball-by-ball CSV file")
    build.add_argument("--exclude", help="comma-separated match ids to exclude")
    build.add_argument("--out", required=True, help="output directory for the store")
    build.set_defaults(func=cmd_profiles_build)

    ev = sub.add_parser("evaluate", help="evaluate one order or plan")
    _add_common(ev, sims=True)
    ev.add_argument("--order", help="comma-separated batting order")
    ev.add_argument("--plan", help="comma-separated bowling plan, one bowler per slot")
    ev.set_defaults(func=cmd_evaluate)

    opt = sub.add_parser("optimize", help="search for the best decision")
    osub = opt.add_subparsers(dest="optimize_command", required=True)
    ob = osub.add_parser("batting", help="exhaustive two-pass batting order search")
    _add_common(ob)
    _add_batting_opts(ob)
    ob.add_argument("--top-k", type=int, default=10, help="orders refined in pass 2")
    ob.set_defaults(func=cmd_optimize_batting)
    ow = osub.add_parser("bowling", help="simulated-annealing bowling plan search")
    _add_common(ow)
    _add_bowling_opts(ow)
    ow.add_argument("--top-k", type=int, default=10, help="plans refined after the search")
    ow.set_defaults(func=cmd_optimize_bowling)

    audit = sub.add_parser("audit", help="optimal vs actual for a scenario with a recorded decision")
    _add_common(audit)
    _add_batting_opts(audit)
    _add_bowling_opts(audit)
    audit.add_argument("--top-k", type=int, default=10, help="candidates refined")
    audit.set_defaults(func=cmd_audit)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--store", help=f"profile store directory (or ${STORE_ENV})")
    serve.add_argument("--workers", type=int, default=2, help="optimization worker threads")
    serve.add_argument("--ui", default="frontend", help="serve this directory at /ui")
    serve.add_argument("--fixtures", default="fixtures", help="serve this directory at /fixtures")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except T20OptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
