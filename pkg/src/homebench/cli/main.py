"""Command-line surface: scene-gen, scene-validate, task-gen, task-verify,
run, replay, report, serve."""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .. import errors
from ..harness.episode import run_episode
from ..harness.llm import EndpointConfig, RemoteLLMPlanner
from ..harness.observation import NoiseConfig
from ..harness.policies import GreedyHeuristic, OraclePlanner, RandomAgent
from ..scene.generate import GeneratorConfig, generate_apartment
from ..scene.io import load_scene, save_scene
from ..scene.validate import validate_scene
from ..taskgen.solver import verify_feasibility
from ..taskgen.suite import SuiteConfig, build_suite
from ..tasks.spec import Tier, load_suite, save_suite
from .report import write_report
from .server import SessionServer
from .traces import replay_trace, write_trace

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2


def _fail(code: str, detail: str, exit_code: int = EXIT_ERROR) -> int:
    print(json.dumps({"error": code, "detail": detail}), file=sys.stderr)
    return exit_code


def _load_scenes(scene_dir: str) -> dict:
    paths = sorted(Path(scene_dir).glob("*.json"))
    if not paths:
        raise errors.InvalidScene(f"no scene files under {scene_dir}")
    return {p.stem: load_scene(p) for p in paths}


# -- scene commands --------------------------------------------------------

def cmd_scene_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        config = GeneratorConfig(seed=args.seed + i,
                                 room_count_range=(args.min_rooms, args.max_rooms),
                                 target_object_count=args.objects)
        scene = generate_apartment(config)
        path = out / f"apt_{i}.json"
        save_scene(scene, path)
        print(f"wrote {path} ({len(scene.rooms)} rooms, {len(scene.objects)} objects)")
    return EXIT_OK


def cmd_scene_validate(args) -> int:
    bad = 0
    for path in args.scenes:
        diagnostics = validate_scene(load_scene(path))
        if diagnostics:
            bad += 1
            for d in diagnostics:
                print(f"{path}: {d}")
        else:
            print(f"{path}: ok")
    return EXIT_OK if bad == 0 else EXIT_ERROR


# -- task commands ---------------------------------------------------------

def cmd_task_gen(args) -> int:
    scenes = _load_scenes(args.scenes)
    config = SuiteConfig()
    if args.per_tier:
        basic, reasoning, lh = args.per_tier
        config.tier_counts = {Tier.BASIC: basic, Tier.REASONING: reasoning,
                              Tier.LONG_HORIZON: lh}
    suite, verification = build_suite(sorted(scenes.items()), config, args.seed)
    save_suite(suite, args.out)
    log_path = Path(args.out).with_suffix(".verification.jsonl")
    with open(log_path, "w") as fh:
        for task_id in sorted(verification):
            fh.write(json.dumps({"task_id": task_id,
                                 **verification[task_id].to_dict()},
                                sort_keys=True) + "\n")
    print(f"wrote {len(suite.tasks)} tasks to {args.out} "
          f"(verification log: {log_path})")
    return EXIT_OK


def cmd_task_verify(args) -> int:
    scenes = _load_scenes(args.scenes)
    suite = load_suite(args.suite)
    infeasible = []
    for task in suite.tasks:
        scene = scenes.get(task.apartment)
        if scene is None:
            infeasible.append((task.task_id, "missing scene"))
            continue
        report = verify_feasibility(task, scene, task.start_room, task.budget)
        if not report.feasible:
            infeasible.append((task.task_id, ",".join(report.reasons)))
    print(f"verified {len(suite.tasks) - len(infeasible)}/{len(suite.tasks)} tasks feasible")
    for task_id, reason in infeasible:
        print(f"infeasible: {task_id} ({reason})")
    return EXIT_OK if not infeasible else EXIT_ERROR


# -- run / replay / report ---------------------------------------------------

def _build_policy(name: str, task, scene, endpoint_path: str | None, seed: int):
    if name == "oracle":
        return OraclePlanner(task)
    if name == "greedy":
        return GreedyHeuristic(task, scene.catalog, seed=seed)
    if name == "random":
        return RandomAgent(scene.catalog, seed=seed)
    if name == "llm":
        if not endpoint_path:
            raise errors.HomebenchError("--endpoint-config is required for the llm policy")
        return RemoteLLMPlanner(task, EndpointConfig.from_file(endpoint_path))
    raise errors.HomebenchError(f"unknown policy {name!r}")


def _run_one(payload: dict) -> dict:
    """Worker: executes one episode and writes its trace file."""
    from ..tasks.spec import TaskSpec  # local import keeps workers lean

    scene = load_scene(payload["scene_path"])
    task = TaskSpec.from_dict(payload["task"])
    policy = _build_policy(payload["policy"], task, scene,
                           payload.get("endpoint"), payload["seed"])
    noise = NoiseConfig(perception_drop=payload["perception_drop"],
                        memory_drop=payload["memory_drop"],
                        seed=payload["noise_seed"])
    record = run_episode(scene, task, policy, noise=noise, seed=payload["seed"],
                         policy_name=payload["policy"])
    write_trace(payload["trace_path"], record, task, scene)
    return {"task_id": task.task_id, "success": record.success,
            "steps": len(record.steps), "trace": payload["trace_path"]}


def cmd_run(args) -> int:
    scene_paths = {p.stem: p for p in sorted(Path(args.scenes).glob("*.json"))}
    suite = load_suite(args.suite)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tasks = suite.tasks
    if args.tasks:
        wanted = set(args.tasks.split(","))
        tasks = [t for t in tasks if t.task_id in wanted]
    if args.limit:
        tasks = tasks[:args.limit]
    jobs = []
    for task in tasks:
        if task.apartment not in scene_paths:
            return _fail("MissingScene", f"{task.apartment} not in {args.scenes}")
        for rep in range(args.repeats):
            seed = args.seed + rep
            jobs.append({
                "scene_path": str(scene_paths[task.apartment]),
                "task": task.to_dict(), "policy": args.policy,
                "endpoint": args.endpoint_config, "seed": seed,
                "noise_seed": args.seed,
                "perception_drop": args.perception_drop,
                "memory_drop": args.memory_drop,
                "trace_path": str(out / f"ep_{task.task_id}_s{seed}.jsonl"),
            })
    if args.parallel > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(job) for job in jobs]
    manifest = {"format_version": 1, "policy": args.policy, "seed": args.seed,
                "noise": {"perception_drop": args.perception_drop,
                          "memory_drop": args.memory_drop},
                "episodes": sorted(r["trace"] for r in results)}
    (out / "run_manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
    successes = sum(r["success"] for r in results)
    print(f"{successes}/{len(results)} episodes succeeded; traces in {out}")
    return EXIT_OK


def cmd_replay(args) -> int:
    paths = [Path(p) for p in args.traces]
    if args.run:
        paths += sorted(Path(args.run).glob("ep_*.jsonl"))
    mismatches = 0
    for path in paths:
        match, recorded, replayed = replay_trace(path)
        if match:
            print(f"{path}: ok ({recorded[:12]})")
        else:
            mismatches += 1
            print(json.dumps({"error": "HashMismatch", "trace": str(path),
                              "recorded": recorded, "replayed": replayed}),
                  file=sys.stderr)
    return EXIT_OK if mismatches == 0 else EXIT_MISMATCH


def cmd_report(args) -> int:
    result = write_report(args.run, args.out)
    print(result["table"])
    if result["skipped"]:
        print(f"skipped {len(result['skipped'])} truncated/malformed traces",
              file=sys.stderr)
    print(f"wrote metrics + {len(result['figures'])} figures under {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    scenes = _load_scenes(args.scenes)
    suite = load_suite(args.suite)
    server = SessionServer(scenes, suite, args.out)
    try:
        asyncio.run(server.serve_forever(args.host, args.port))
    except KeyboardInterrupt:
        pass
    return EXIT_OK


# -- argument wiring ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homebench",
        description="Deterministic household-world simulator and agent benchmark")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scene-gen", help="generate apartment scene files")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--min-rooms", type=int, default=4)
    p.add_argument("--max-rooms", type=int, default=8)
    p.add_argument("--objects", type=int, default=40)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scene_gen)

    p = sub.add_parser("scene-validate", help="check scene files against invariants")
    p.add_argument("scenes", nargs="+")
    p.set_defaults(func=cmd_scene_validate)

    p = sub.add_parser("task-gen", help="generate a solver-verified task suite")
    p.add_argument("--scenes", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-tier", type=int, nargs=3, metavar=("BASIC", "REASONING", "LONGHORIZON"))
    p.set_defaults(func=cmd_task_gen)

    p = sub.add_parser("task-verify", help="re-verify a suite's feasibility")
    p.add_argument("--scenes", required=True)
    p.add_argument("--suite", required=True)
    p.set_defaults(func=cmd_task_verify)

    p = sub.add_parser("run", help="run a policy over a suite, one trace per episode")
    p.add_argument("--scenes", required=True)
    p.add_argument("--suite", required=True)
    p.add_argument("--policy", choices=("oracle", "greedy", "random", "llm"),
                   default="greedy")
    p.add_argument("--endpoint-config", help="JSON endpoint config for --policy llm")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--perception-drop", type=float, default=0.0)
    p.add_argument("--memory-drop", type=float, default=0.0)
    p.add_argument("--parallel", type=int, default=8)
    p.add_argument("--limit", type=int)
    p.add_argument("--tasks", help="comma-separated task ids")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("replay", help="re-execute traces and check state hashes")
    p.add_argument("traces", nargs="*")
    p.add_argument("--run", help="replay every trace of a run directory")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("report", help="aggregate traces into metrics, tables, figures")
    p.add_argument("--run", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="serve interactive episodes over WebSocket")
    p.add_argument("--scenes", required=True)
    p.add_argument("--suite", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--out", default="sessions")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except errors.TraceError as exc:
        return _fail("TraceError", str(exc))
    except errors.DistributionUnachievable as exc:
        return _fail("DistributionUnachievable",
                     f"{exc} (achieved: {exc.achieved})")
    except errors.HomebenchError as exc:
        return _fail(type(exc).__name__, str(exc))
    except FileNotFoundError as exc:
        return _fail("FileNotFound", str(exc))


if __name__ == "__main__":
    sys.exit(main())
