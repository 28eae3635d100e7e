"""Command-line entry point; one subcommand per pipeline stage.

Every randomized command takes a --seed and echoes the effective value on
stderr, and any two runs with identical arguments and input files produce
byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

OUT_DIR_ENV = "MAZEKIT_OUT_DIR"

from .augment import AugmentConfig, augment_trace
from .bench import (
    DEFAULT_COMPOSITION,
    Difficulty,
    BenchEntry,
    BenchSuite,
    build_suite,
    evaluate_suite,
    fit_trendline,
    maze_id,
)
from .dataset import (
    DatasetRecord,
    RecordKind,
    SplitPlan,
    build_completion,
    build_splits,
    read_jsonl,
    validate_record,
    write_jsonl,
    write_records,
)
from .generate import GenConfig, generate_solved_maze, solve_shortest_path
from .rewards import group_advantages, total_reward
from .rng import derive_seed
from .tokens import ascii_preview, parse_maze_tokens, render_maze_tokens, render_move_tokens


def _echo_seed(seed: int) -> None:
    print(f"seed: {seed}", file=sys.stderr)


def _out(path: str) -> str:
    """Relative output paths land inside $MAZEKIT_OUT_DIR when it is set."""
    base = os.environ.get(OUT_DIR_ENV)
    if base and not os.path.isabs(path):
        os.makedirs(base, exist_ok=True)
        return os.path.join(base, path)
    return path


def _load_mazes(path: str) -> list:
    """Read mazes from any JSONL whose rows carry a maze_tokens field."""
    mazes = []
    for lineno, row in enumerate(read_jsonl(path), start=1):
        if "maze_tokens" not in row:
            raise ValueError(f"{path}: line {lineno}: row has no maze_tokens field")
        mazes.append(parse_maze_tokens(row["maze_tokens"]))
    return mazes


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def cmd_generate(args: argparse.Namespace) -> int:
    _echo_seed(args.seed)
    rows = []
    preview_done = False
    for i in range(args.count):
        cfg = GenConfig(
            width=args.width,
            height=args.height,
            seed=derive_seed(args.seed, i),
            min_steps=args.min_steps,
            max_steps=args.max_steps,
        )
        m = generate_solved_maze(cfg)
        steps = solve_shortest_path(m).steps
        rows.append(
            {
                "id": f"{i:06d}-{maze_id(m)}",
                "seed": cfg.seed,
                "maze_tokens": render_maze_tokens(m),
                "steps": steps,
            }
        )
        if args.preview and not preview_done:
            print(ascii_preview(m))
            preview_done = True
    out = _out(args.out)
    n = write_jsonl(out, rows)
    print(f"wrote {n} mazes to {out}", file=sys.stderr)
    return 0


def cmd_tokenize(args: argparse.Namespace) -> int:
    rows = read_jsonl(args.infile)
    if not 0 <= args.index < len(rows):
        raise ValueError(f"index {args.index} outside 0..{len(rows) - 1}")
    text = rows[args.index]["maze_tokens"]
    if args.out:
        out = _out(args.out)
        Path(out).write_text(text + "\n", encoding="utf-8")
        print(f"wrote maze {args.index} to {out}", file=sys.stderr)
    else:
        print(text)
    if args.preview:
        print(ascii_preview(parse_maze_tokens(text)), file=sys.stderr)
    return 0


def cmd_parse(args: argparse.Namespace) -> int:
    m = parse_maze_tokens(_read_text(args.infile))
    summary = {
        "width": m.width,
        "height": m.height,
        "origin": [m.origin.row, m.origin.col],
        "target": [m.target.row, m.target.col],
        "steps": solve_shortest_path(m).steps,
        "id": maze_id(m),
    }
    print(json.dumps(summary, sort_keys=True))
    if args.preview:
        print(ascii_preview(m), file=sys.stderr)
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    m = parse_maze_tokens(_read_text(args.infile))
    print(render_move_tokens(solve_shortest_path(m).moves))
    return 0


def cmd_augment(args: argparse.Namespace) -> int:
    _echo_seed(args.seed)
    records = []
    for i, m in enumerate(_load_mazes(args.infile)):
        solution = solve_shortest_path(m)
        cfg = AugmentConfig(max_n_steps=args.max_n_steps, seed=derive_seed(args.seed, i))
        trace = augment_trace(m, solution, cfg)
        kind = RecordKind.RETRY if trace.is_retry else RecordKind.STRAIGHT_SUCCESS
        tokens = render_maze_tokens(m)
        suffix = "retry" if kind is RecordKind.RETRY else "straight"
        record = DatasetRecord(
            id=f"{i:06d}-{maze_id(m)}-{suffix}",
            seed=cfg.seed,
            maze_tokens=tokens,
            steps=solution.steps,
            kind=kind,
            prompt=tokens,
            completion=build_completion(trace.render(), solution.moves),
        )
        if args.strict:
            validate_record(record, where=f"maze {i}")
        records.append(record)
    out = _out(args.out)
    n = write_records(records, out)
    retries = sum(r.kind is RecordKind.RETRY for r in records)
    print(f"wrote {n} records ({retries} retry) to {out}", file=sys.stderr)
    return 0


def cmd_build_dataset(args: argparse.Namespace) -> int:
    _echo_seed(args.seed)
    if args.scale is not None:
        plan = SplitPlan.scaled(args.scale)
    else:
        required = (args.pool, args.test, args.sft_straight, args.sft_retry, args.grpo)
        if any(v is None for v in required):
            raise ValueError("give --scale or all of --pool/--test/--sft-straight/--sft-retry/--grpo")
        plan = SplitPlan(
            total_pool=args.pool,
            test_count=args.test,
            sft_straight_count=args.sft_straight,
            sft_retry_count=args.sft_retry,
            grpo_count=args.grpo,
        )
    aug_seed = args.aug_seed if args.aug_seed is not None else args.seed
    splits = build_splits(
        plan,
        GenConfig(width=args.width, height=args.height, seed=args.seed),
        AugmentConfig(max_n_steps=args.max_n_steps, seed=aug_seed),
    )
    outdir = Path(_out(args.out))
    outdir.mkdir(parents=True, exist_ok=True)
    files = {
        "test": outdir / "test.jsonl",
        "sft": outdir / "sft.jsonl",
        "grpo": outdir / "grpo.jsonl",
    }
    write_records(splits.test, str(files["test"]))
    write_records(splits.sft, str(files["sft"]))
    write_records(splits.grpo, str(files["grpo"]))
    manifest = {
        "seed": args.seed,
        "aug_seed": aug_seed,
        "max_n_steps": args.max_n_steps,
        "width": args.width,
        "height": args.height,
        "plan": {
            "total_pool": plan.total_pool,
            "test_count": plan.test_count,
            "sft_straight_count": plan.sft_straight_count,
            "sft_retry_count": plan.sft_retry_count,
            "grpo_count": plan.grpo_count,
        },
        "records": {name: len(getattr(splits, name)) for name in ("test", "sft", "grpo")},
    }
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    for name, path in files.items():
        print(f"{name}: {manifest['records'][name]} records -> {path}", file=sys.stderr)
    return 0


def _suite_to_rows(suite: BenchSuite) -> list[dict]:
    return [
        {
            "id": e.id,
            "difficulty": e.difficulty.value,
            "steps": e.steps,
            "maze_tokens": render_maze_tokens(e.maze),
        }
        for e in suite.entries
    ]


def _suite_from_rows(rows: list[dict]) -> BenchSuite:
    entries = []
    for row in rows:
        entries.append(
            BenchEntry(
                id=row["id"],
                maze=parse_maze_tokens(row["maze_tokens"]),
                difficulty=Difficulty(row["difficulty"]),
                steps=row["steps"],
            )
        )
    return BenchSuite(entries=tuple(entries))


def cmd_bench_build(args: argparse.Namespace) -> int:
    _echo_seed(args.seed)
    pool = _load_mazes(args.pool)
    composition = {
        Difficulty.EASY: args.easy,
        Difficulty.MEDIUM: args.medium,
        Difficulty.HARD: args.hard,
    }
    suite = build_suite(pool, args.seed, composition)
    out = _out(args.out)
    write_jsonl(out, _suite_to_rows(suite))
    counts = suite.counts()
    print(
        f"suite: {counts[Difficulty.EASY]} easy / {counts[Difficulty.MEDIUM]} medium / "
        f"{counts[Difficulty.HARD]} hard -> {out}",
        file=sys.stderr,
    )
    return 0


def cmd_bench_run(args: argparse.Namespace) -> int:
    suite = _suite_from_rows(read_jsonl(args.suite))
    outputs: dict[str, str] = {}
    for lineno, row in enumerate(read_jsonl(args.outputs), start=1):
        if "id" not in row or "output" not in row:
            raise ValueError(f"{args.outputs}: line {lineno}: rows need id and output fields")
        outputs[row["id"]] = row["output"]
    report = evaluate_suite(suite, outputs)
    doc = {
        "overall": report.overall,
        "by_difficulty": {d.value: rate for d, rate in report.by_difficulty.items()},
        "verdicts": [
            {
                "id": v.id,
                "difficulty": v.difficulty.value,
                "steps": v.steps,
                "solved": v.solved,
                "reason": v.reason,
            }
            for v in report.verdicts
        ],
    }
    Path(_out(args.report)).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"overall: {report.overall}", file=sys.stderr)
    if args.scores_csv is not None:
        if args.step is None:
            raise ValueError("--scores-csv needs --step")
        with open(_out(args.scores_csv), "a", encoding="utf-8") as fh:
            fh.write(f"{args.step},{report.overall}\n")
    return 0


def cmd_reward(args: argparse.Namespace) -> int:
    rows_out = []
    rewards = []
    for lineno, row in enumerate(read_jsonl(args.pairs), start=1):
        if "maze_tokens" not in row or "output" not in row:
            raise ValueError(f"{args.pairs}: line {lineno}: rows need maze_tokens and output fields")
        m = parse_maze_tokens(row["maze_tokens"])
        breakdown = total_reward(m, row["output"])
        rewards.append(breakdown.total)
        out = {
            "correctness": breakdown.correctness,
            "integrity": breakdown.integrity,
            "thinking": breakdown.thinking,
            "total": breakdown.total,
        }
        if "id" in row:
            out = {"id": row["id"], **out}
        rows_out.append(out)
    if args.advantages:
        adv = group_advantages(rewards).advantages
        for out, a in zip(rows_out, adv):
            out["advantage"] = a
    out = _out(args.out)
    write_jsonl(out, rows_out)
    print(f"scored {len(rows_out)} outputs -> {out}", file=sys.stderr)
    return 0


def _read_points(path: str) -> list[tuple[float, float]]:
    points = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2:
                raise ValueError(f"{path}: line {lineno}: expected two comma-separated values")
            try:
                points.append((float(parts[0]), float(parts[1])))
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise ValueError(f"{path}: line {lineno}: values are not numeric") from None
    return points


def cmd_trend(args: argparse.Namespace) -> int:
    fit = fit_trendline(_read_points(args.points))
    print(
        json.dumps(
            {
                "slope": round(fit.slope, 6),
                "intercept": round(fit.intercept, 6),
                "residual_std": round(fit.residual_std, 6),
            },
            sort_keys=True,
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mazekit",
        description="Generate tokenized mazes, build datasets and benchmarks, score outputs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate solved mazes as JSONL")
    p.add_argument("--count", type=int, required=True, help="number of mazes")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--width", type=int, default=5)
    p.add_argument("--height", type=int, default=5)
    p.add_argument("--min-steps", type=int, default=None, help="lower bound on solution length")
    p.add_argument("--max-steps", type=int, default=None, help="upper bound on solution length")
    p.add_argument("--out", required=True, help="output JSONL path")
    p.add_argument("--preview", action="store_true", help="print an ASCII preview of the first maze")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("tokenize", help="extract one maze's token text from a JSONL file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--out", default=None, help="write here instead of stdout")
    p.add_argument("--preview", action="store_true")
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("parse", help="parse token text and print a summary")
    p.add_argument("--in", dest="infile", required=True, help="token text file")
    p.add_argument("--preview", action="store_true")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("solve", help="print the shortest solution as movement tokens")
    p.add_argument("--in", dest="infile", required=True, help="token text file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("augment", help="emit training records with retry traces")
    p.add_argument("--in", dest="infile", required=True, help="JSONL with maze_tokens rows")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n-steps", type=int, default=3)
    p.add_argument("--strict", action="store_true", help="revalidate every record before writing")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("build-dataset", help="build test/sft/grpo splits")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--aug-seed", type=int, default=None, help="augmentation seed (defaults to --seed)")
    p.add_argument("--scale", type=int, default=None, help="divide the full-scale plan by this factor")
    p.add_argument("--pool", type=int, default=None)
    p.add_argument("--test", type=int, default=None)
    p.add_argument("--sft-straight", type=int, default=None)
    p.add_argument("--sft-retry", type=int, default=None)
    p.add_argument("--grpo", type=int, default=None)
    p.add_argument("--width", type=int, default=5)
    p.add_argument("--height", type=int, default=5)
    p.add_argument("--max-n-steps", type=int, default=3)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_build_dataset)

    bench = sub.add_parser("bench", help="benchmark suite tools")
    bench_sub = bench.add_subparsers(dest="bench_command", required=True)

    p = bench_sub.add_parser("build", help="sample a stratified suite from a pool")
    p.add_argument("--pool", required=True, help="JSONL with maze_tokens rows")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--easy", type=int, default=DEFAULT_COMPOSITION[Difficulty.EASY])
    p.add_argument("--medium", type=int, default=DEFAULT_COMPOSITION[Difficulty.MEDIUM])
    p.add_argument("--hard", type=int, default=DEFAULT_COMPOSITION[Difficulty.HARD])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench_build)

    p = bench_sub.add_parser("run", help="score model outputs against a suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--outputs", required=True, help="JSONL with id and output fields")
    p.add_argument("--report", required=True, help="JSON report path")
    p.add_argument("--scores-csv", default=None, help="append step,score to this CSV")
    p.add_argument("--step", type=int, default=None, help="step label for --scores-csv")
    p.set_defaults(func=cmd_bench_run)

    p = sub.add_parser("reward", help="batch-score maze/output pairs")
    p.add_argument("--pairs", required=True, help="JSONL with maze_tokens and output fields")
    p.add_argument("--advantages", action="store_true", help="add group-normalized advantages")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reward)

    p = sub.add_parser("trend", help="fit an OLS trendline to x,y points")
    p.add_argument("--points", required=True, help="CSV of x,y pairs (header row allowed)")
    p.set_defaults(func=cmd_trend)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
