"""Deterministic dataset construction: generate, solve, augment, split, JSONL.

A split plan carves one seeded pool of solved mazes into a held-out test
set and three training collections:

    sft retry     mazes whose origin class yields wrong attempts, rendered
                  as retry completions (reasoning with RESET feedback)
    sft straight  mazes rendered as straight-success completions, drawn
                  from mazes not used for retry examples
    grpo          straight-success records from whatever the sft straight
                  selection left over, spilling into retry-selected mazes
                  when the pool is too small to keep all three disjoint

Test mazes never appear in any training collection; identity is a hash of
the wall grid plus endpoints, so even a duplicate maze generated under a
different seed cannot leak across the boundary.  Everything is a pure
function of the master seeds, which makes output files byte-reproducible.
"""

from __future__ import annotations

import gzip
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .augment import RESET_MARKER, AugmentConfig, augment_trace, render_trace
from .bench import maze_id
from .core import Maze, simulate_moves
from .generate import GenConfig, SolutionPath, generate_solved_maze, solve_shortest_path
from .rng import SplitMix64, derive_seed, mix64
from .tokens import extract_move_tokens, parse_maze_tokens, render_maze_tokens, render_move_tokens

_SHUFFLE_SALT = 0x0DD5_F00D_CAFE_1234

PAPER_COUNTS = {
    "total_pool": 530_000,
    "test_count": 30_000,
    "sft_straight_count": 250_000,
    "sft_retry_count": 250_000,
    "grpo_count": 150_000,
}


class DatasetError(ValueError):
    """A dataset file or record failed validation."""


class SplitShortfallError(RuntimeError):
    """A split quota cannot be met from the available mazes."""


class RecordKind(Enum):
    STRAIGHT_SUCCESS = "straight_success"
    RETRY = "retry"


@dataclass(frozen=True)
class DatasetRecord:
    """One conversation-formatted training example."""

    id: str
    seed: int
    maze_tokens: str
    steps: int
    kind: RecordKind
    prompt: str
    completion: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "seed": self.seed,
            "maze_tokens": self.maze_tokens,
            "steps": self.steps,
            "kind": self.kind.value,
            "prompt": self.prompt,
            "completion": self.completion,
        }


_RECORD_FIELDS = {
    "id": str,
    "seed": int,
    "maze_tokens": str,
    "steps": int,
    "kind": str,
    "prompt": str,
    "completion": str,
}


@dataclass(frozen=True)
class SplitPlan:
    total_pool: int
    test_count: int
    sft_straight_count: int
    sft_retry_count: int
    grpo_count: int
    scale_factor: Optional[int] = None

    def __post_init__(self) -> None:
        counts = (
            self.total_pool,
            self.test_count,
            self.sft_straight_count,
            self.sft_retry_count,
            self.grpo_count,
        )
        if any(c < 0 for c in counts):
            raise ValueError("split counts must be non-negative")
        if self.test_count > self.total_pool:
            raise ValueError("test_count exceeds total_pool")

    @classmethod
    def scaled(cls, factor: int) -> "SplitPlan":
        """Proportional replica of the full-scale plan, divided by factor."""
        if factor < 1:
            raise ValueError("scale factor must be at least 1")
        return cls(
            total_pool=PAPER_COUNTS["total_pool"] // factor,
            test_count=PAPER_COUNTS["test_count"] // factor,
            sft_straight_count=PAPER_COUNTS["sft_straight_count"] // factor,
            sft_retry_count=PAPER_COUNTS["sft_retry_count"] // factor,
            grpo_count=PAPER_COUNTS["grpo_count"] // factor,
            scale_factor=factor,
        )


@dataclass(frozen=True)
class DatasetSplits:
    test: tuple[DatasetRecord, ...]
    sft: tuple[DatasetRecord, ...]
    grpo: tuple[DatasetRecord, ...]


def build_completion(trace_text: str, moves) -> str:
    """Assemble a completion: think block first, answer move tokens after."""
    return f"<think>\n{trace_text}\n</think>\n{render_move_tokens(moves)}"


def _make_record(
    pool_index: int,
    seed: int,
    m: Maze,
    solution: SolutionPath,
    kind: RecordKind,
    trace_text: str,
) -> DatasetRecord:
    tokens = render_maze_tokens(m)
    suffix = "retry" if kind is RecordKind.RETRY else "straight"
    return DatasetRecord(
        id=f"{pool_index:06d}-{maze_id(m)}-{suffix}",
        seed=seed,
        maze_tokens=tokens,
        steps=solution.steps,
        kind=kind,
        prompt=tokens,
        completion=build_completion(trace_text, solution.moves),
    )


def build_splits(
    plan: SplitPlan,
    gen_cfg: GenConfig,
    aug_cfg: AugmentConfig,
    dedupe: bool = False,
) -> DatasetSplits:
    """Generate the pool and carve it into test, sft and grpo collections.

    Duplicate wall-grid/endpoint combinations are allowed in the pool by
    default; ``dedupe`` drops every copy after the first.  Raises
    SplitShortfallError with the deficit when a quota cannot be met, most
    commonly when the retry quota exceeds the number of mazes whose origin
    produces wrong attempts.
    """
    pool: list[Maze] = []
    seeds: list[int] = []
    for i in range(plan.total_pool):
        seed_i = derive_seed(gen_cfg.seed, i)
        cfg_i = GenConfig(
            width=gen_cfg.width,
            height=gen_cfg.height,
            seed=seed_i,
            min_steps=gen_cfg.min_steps,
            max_steps=gen_cfg.max_steps,
        )
        pool.append(generate_solved_maze(cfg_i))
        seeds.append(seed_i)
    solutions = [solve_shortest_path(m) for m in pool]
    ids = [maze_id(m) for m in pool]

    order = list(range(plan.total_pool))
    SplitMix64(mix64(gen_cfg.seed ^ _SHUFFLE_SALT)).shuffle(order)
    if dedupe:
        seen: set[str] = set()
        kept = []
        for i in order:
            if ids[i] not in seen:
                seen.add(ids[i])
                kept.append(i)
        order = kept
    test_indices = order[: plan.test_count]
    test_ids = {ids[i] for i in test_indices}
    train_indices = [i for i in order[plan.test_count :] if ids[i] not in test_ids]

    traces = {
        i: augment_trace(pool[i], solutions[i], AugmentConfig(aug_cfg.max_n_steps, derive_seed(aug_cfg.seed, i)))
        for i in train_indices
    }

    retry_sel: list[int] = []
    for i in train_indices:
        if len(retry_sel) == plan.sft_retry_count:
            break
        if traces[i].is_retry:
            retry_sel.append(i)
    if len(retry_sel) < plan.sft_retry_count:
        raise SplitShortfallError(
            f"retry quota shortfall: need {plan.sft_retry_count}, "
            f"only {len(retry_sel)} mazes produce wrong attempts"
        )
    retry_set = set(retry_sel)

    straight_sel = [i for i in train_indices if i not in retry_set][: plan.sft_straight_count]
    if len(straight_sel) < plan.sft_straight_count:
        raise SplitShortfallError(
            f"straight quota shortfall: need {plan.sft_straight_count}, "
            f"only {len(straight_sel)} mazes remain outside the retry selection"
        )
    straight_set = set(straight_sel)

    leftovers = [i for i in train_indices if i not in retry_set and i not in straight_set]
    spill = [i for i in retry_sel if i not in straight_set]
    grpo_sel = (leftovers + spill)[: plan.grpo_count]
    if len(grpo_sel) < plan.grpo_count:
        raise SplitShortfallError(
            f"grpo quota shortfall: need {plan.grpo_count}, only {len(grpo_sel)} mazes available"
        )

    def straight_record(i: int) -> DatasetRecord:
        text = render_trace(pool[i], [], solutions[i]).solution_text
        return _make_record(i, seeds[i], pool[i], solutions[i], RecordKind.STRAIGHT_SUCCESS, text)

    def retry_record(i: int) -> DatasetRecord:
        return _make_record(i, seeds[i], pool[i], solutions[i], RecordKind.RETRY, traces[i].render())

    test_records = tuple(straight_record(i) for i in sorted(test_indices))
    sft_records = tuple(
        retry_record(i) if i in retry_set else straight_record(i)
        for i in sorted(retry_sel + straight_sel)
    )
    grpo_records = tuple(straight_record(i) for i in sorted(grpo_sel))
    return DatasetSplits(test=test_records, sft=sft_records, grpo=grpo_records)


def _open_for_write(path: str):
    if str(path).endswith(".gz"):
        return gzip.open(path, "wt", encoding="utf-8", newline="\n")
    return open(path, "w", encoding="utf-8", newline="\n")


def _open_for_read(path: str):
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def write_jsonl(path: str, rows: Iterable[dict]) -> int:
    """Write one compact JSON object per line; returns the row count."""
    n = 0
    with _open_for_write(path) as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")
            n += 1
    return n


def read_jsonl(path: str) -> list[dict]:
    """Read raw JSONL rows; errors carry the 1-based line number."""
    rows = []
    with _open_for_read(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"{path}: line {lineno}: invalid JSON: {exc}") from exc
            if not isinstance(row, dict):
                raise DatasetError(f"{path}: line {lineno}: expected a JSON object")
            rows.append(row)
    return rows


def write_records(records: Iterable[DatasetRecord], path: str) -> int:
    """Serialize records as JSONL, preserving order; returns the count."""
    return write_jsonl(path, (r.to_dict() for r in records))


def record_from_dict(row: dict, where: str = "record") -> DatasetRecord:
    """Validate one raw row against the record schema."""
    for field, typ in _RECORD_FIELDS.items():
        if field not in row:
            raise DatasetError(f"{where}: missing field '{field}'")
        if not isinstance(row[field], typ) or isinstance(row[field], bool):
            raise DatasetError(f"{where}: field '{field}' must be {typ.__name__}")
    extra = set(row) - set(_RECORD_FIELDS)
    if extra:
        raise DatasetError(f"{where}: unknown fields {sorted(extra)}")
    try:
        kind = RecordKind(row["kind"])
    except ValueError:
        raise DatasetError(f"{where}: field 'kind' must be one of "
                           f"{[k.value for k in RecordKind]}, got {row['kind']!r}") from None
    return DatasetRecord(
        id=row["id"],
        seed=row["seed"],
        maze_tokens=row["maze_tokens"],
        steps=row["steps"],
        kind=kind,
        prompt=row["prompt"],
        completion=row["completion"],
    )


def validate_record(record: DatasetRecord, where: str = "record") -> None:
    """Strict semantic checks: the completion must solve its own maze and
    the kind flag must agree with the presence of RESET in the think block."""
    try:
        m = parse_maze_tokens(record.maze_tokens)
    except ValueError as exc:
        raise DatasetError(f"{where}: maze_tokens do not parse: {exc}") from exc
    moves = extract_move_tokens(record.completion)
    outcome = simulate_moves(m, m.origin, moves)
    if not outcome.solved:
        raise DatasetError(
            f"{where}: completion does not solve the maze ({outcome.status.value})"
        )
    has_reset = RESET_MARKER in record.completion
    if has_reset != (record.kind is RecordKind.RETRY):
        raise DatasetError(f"{where}: kind '{record.kind.value}' disagrees with RESET content")


def read_records(path: str, strict: bool = False) -> list[DatasetRecord]:
    """Read and schema-check records; strict mode revalidates completions."""
    records = []
    with _open_for_read(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            where = f"{path}: line {lineno}"
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"{where}: invalid JSON: {exc}") from exc
            if not isinstance(row, dict):
                raise DatasetError(f"{where}: expected a JSON object")
            record = record_from_dict(row, where)
            if strict:
                validate_record(record, where)
            records.append(record)
    return records
