"""Case records, boundary sweeps, the result cache and the reference tables.

Everything the command line prints goes through :class:`CaseRecord`, which
round-trips through both CSV and JSON.  Sweeps fan cases out to a process
pool and collect results in input order, so output never depends on the
number of workers.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from postulate.gfp import DEFAULT_PRIME, is_prime
from postulate.induction import Status, run_induction
from postulate.interpolation import (
    DEFAULT_TRIALS,
    PostulationReport,
    Verdict,
    check_postulation,
)
from postulate.schemes import FatPointScheme, boundary_triples, format_signature

CSV_COLUMNS = (
    "d", "x", "y", "z", "c5", "c4", "c3", "c2", "epsilon", "N", "deg",
    "rank", "defect", "verdict", "seed", "ms", "n", "points",
)
JOBS_ENV = "POSTULATE_JOBS"


@dataclass(frozen=True)
class CaseRecord:
    """One evaluated case.

    ``x, y, z`` are set for boundary-sweep cases, ``c5..c2`` for schemes
    of ``P^3`` with multiplicities at most 5; ``points`` always holds the
    full signature.  ``epsilon`` is ``N - deg``.
    """

    d: int
    x: int | None
    y: int | None
    z: int | None
    c5: int | None
    c4: int | None
    c3: int | None
    c2: int | None
    epsilon: int
    N: int
    deg: int
    rank: int
    defect: int
    verdict: str
    seed: int | None
    ms: float | None
    n: int = 3
    points: str = ""

    @property
    def good(self) -> bool:
        return self.verdict == Verdict.GOOD.value

    @classmethod
    def from_report(cls, report: PostulationReport, *, triple: tuple[int, int, int] | None = None,
                    ms: float | None = None) -> "CaseRecord":
        sig = dict(report.signature)
        x = y = z = c5 = c4 = c3 = c2 = None
        if triple is not None:
            x, y, z = triple
        elif report.n == 3 and all(m <= 5 for m in sig):
            c5, c4, c3, c2 = (sig.get(m, 0) for m in (5, 4, 3, 2))
        return cls(
            report.d, x, y, z, c5, c4, c3, c2, report.N - report.scheme_degree, report.N,
            report.scheme_degree, report.rank, report.defect, report.verdict.value,
            report.base_seed, ms, report.n, format_signature(report.signature),
        )

    def without_timing(self) -> "CaseRecord":
        return CaseRecord(**{**asdict(self), "ms": None})

    def to_row(self) -> list[str]:
        out = []
        for name in CSV_COLUMNS:
            value = getattr(self, name)
            if value is None:
                out.append("")
            elif name == "ms":
                out.append(f"{value:.3f}")
            else:
                out.append(str(value))
        return out

    @classmethod
    def from_row(cls, row: Sequence[str] | dict) -> "CaseRecord":
        if not isinstance(row, dict):
            row = dict(zip(CSV_COLUMNS, row))
        kw = {}
        for f in fields(cls):
            text = row[f.name]
            if f.name in ("verdict", "points"):
                kw[f.name] = text
            elif text == "" or text is None:
                kw[f.name] = None
            elif f.name == "ms":
                kw[f.name] = float(text)
            else:
                kw[f.name] = int(text)
        return cls(**kw)

    @classmethod
    def from_dict(cls, data: dict) -> "CaseRecord":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})


@dataclass(frozen=True)
class SweepConfig:
    d_min: int
    d_max: int
    prime: int = DEFAULT_PRIME
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    jobs: int = 1
    format: str = "csv"
    cache: Path | None = None
    timing: bool = True

    def __post_init__(self):
        if self.d_min < 0 or self.d_max < self.d_min:
            raise ValueError(f"bad degree range {self.d_min}..{self.d_max}")
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if self.prime <= self.d_max:
            raise ValueError(f"prime {self.prime} must exceed d_max = {self.d_max}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["cache"] = str(self.cache) if self.cache is not None else None
        return out


def resolve_jobs(jobs: int | None) -> int:
    """``jobs`` if given, else ``$POSTULATE_JOBS``, else 1."""
    if jobs is not None:
        return jobs
    text = os.environ.get(JOBS_ENV, "").strip()
    if not text:
        return 1
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"{JOBS_ENV}={text!r} is not an integer") from None


# ---------------------------------------------------------------- evaluation

@dataclass(frozen=True)
class CaseTask:
    d: int
    signature: tuple[tuple[int, int], ...]
    n: int = 3
    triple: tuple[int, int, int] | None = None

    def scheme(self) -> FatPointScheme:
        return FatPointScheme.general(self.n, self.signature)

    def cache_key(self, prime: int, trials: int, seed: int) -> str:
        payload = json.dumps([self.n, [list(s) for s in self.signature], self.d, prime, trials, seed])
        return hashlib.sha256(payload.encode()).hexdigest()


def triple_task(d: int, x: int, y: int, z: int) -> CaseTask:
    sig = tuple((m, k) for m, k in ((4, x), (3, y), (2, z)) if k)
    return CaseTask(d, sig, 3, (x, y, z))


def evaluate(task: CaseTask, prime: int = DEFAULT_PRIME, trials: int = DEFAULT_TRIALS,
             seed: int = 0) -> CaseRecord:
    start = time.perf_counter()
    report = check_postulation(task.scheme(), task.d, prime=prime, trials=trials, seed=seed)
    ms = (time.perf_counter() - start) * 1e3
    return CaseRecord.from_report(report, triple=task.triple, ms=ms)


def _evaluate_packed(args) -> CaseRecord:
    return evaluate(*args)


def evaluate_many(tasks: Sequence[CaseTask], prime: int, trials: int, seed: int,
                  jobs: int = 1) -> Iterator[CaseRecord]:
    """Yield records in the order of ``tasks``."""
    packed = [(t, prime, trials, seed) for t in tasks]
    if jobs <= 1 or len(packed) <= 1:
        yield from map(_evaluate_packed, packed)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_evaluate_packed, packed, chunksize=max(1, len(packed) // (8 * jobs)))


# --------------------------------------------------------------------- cache

class ResultCache:
    """Append-only JSON-lines store of case records, keyed by :meth:`CaseTask.cache_key`.

    A file that cannot be read back is discarded and started afresh; the
    first line of the new file is a warning record saying so.
    """

    def __init__(self, path: Path | str):
        self.path = Path(path)
        self.entries: dict[str, CaseRecord] = {}
        self.warnings: list[str] = []
        self._load()

    def _load(self):
        if not self.path.exists():
            return
        lineno = 0
        try:
            with self.path.open(encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    if not line.strip():
                        continue
                    item = json.loads(line)
                    if "warning" in item:
                        continue
                    self.entries[item["key"]] = CaseRecord.from_dict(item["record"])
        except (ValueError, KeyError, TypeError) as exc:
            message = f"cache {self.path} unreadable at line {lineno} ({exc}); rebuilt from scratch"
            self.entries.clear()
            self.warnings.append(message)
            with self.path.open("w", encoding="utf-8") as fh:
                fh.write(json.dumps({"warning": message}) + "\n")

    def get(self, key: str) -> CaseRecord | None:
        return self.entries.get(key)

    def put(self, key: str, record: CaseRecord):
        self.entries[key] = record
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps({"key": key, "record": asdict(record)}) + "\n")


# --------------------------------------------------------------------- sweep

@dataclass(frozen=True)
class Summary:
    total: int
    good: int
    defective: int
    ms: float

    @classmethod
    def of(cls, records: Iterable[CaseRecord]) -> "Summary":
        records = list(records)
        good = sum(r.good for r in records)
        ms = sum(r.ms or 0.0 for r in records)
        return cls(len(records), good, len(records) - good, round(ms, 3))


def sweep_tasks(d_min: int, d_max: int) -> list[CaseTask]:
    return [triple_task(d, *t) for d in range(d_min, d_max + 1) for t in boundary_triples(d)]


def run_sweep(config: SweepConfig, tasks: Sequence[CaseTask] | None = None) -> tuple[list[CaseRecord], list[str]]:
    """Evaluate every boundary triple of the configured range; returns records and warnings."""
    tasks = sweep_tasks(config.d_min, config.d_max) if tasks is None else list(tasks)
    cache = ResultCache(config.cache) if config.cache is not None else None
    keys = [t.cache_key(config.prime, config.trials, config.seed) for t in tasks]
    results: list[CaseRecord | None] = [cache.get(k) if cache else None for k in keys]
    todo = [i for i, r in enumerate(results) if r is None]
    fresh = evaluate_many([tasks[i] for i in todo], config.prime, config.trials, config.seed, config.jobs)
    for i, record in zip(todo, fresh):
        results[i] = record
        if cache is not None:
            cache.put(keys[i], record)
    records = [r if config.timing else r.without_timing() for r in results]
    return records, (cache.warnings if cache else [])


# ------------------------------------------------------------------- writers

def records_to_csv(records: Iterable[CaseRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.to_row())
    return buf.getvalue()


def records_from_csv(text: str) -> list[CaseRecord]:
    return [CaseRecord.from_row(row) for row in csv.DictReader(io.StringIO(text))]


def report_json(config: dict, records: Sequence[CaseRecord], warnings: Sequence[str] = ()) -> str:
    report = {
        "config": config,
        "cases": [asdict(r) for r in records],
        "summary": asdict(Summary.of(records)),
    }
    if warnings:
        report["warnings"] = list(warnings)
    return json.dumps(report, indent=2) + "\n"


def records_from_json(text: str) -> list[CaseRecord]:
    return [CaseRecord.from_dict(c) for c in json.loads(text)["cases"]]


# -------------------------------------------------------------------- tables

# multiplicity-5 schemes of P^3 as (d, (c5, c4, c3, c2), good)
MULTIPLICITY_5_TABLE = (
    (8, (5, 1, 0, 0), True),
    (8, (4, 2, 0, 0), False),
    (8, (3, 3, 0, 0), False),
    (8, (3, 4, 0, 0), True),
    (8, (2, 5, 0, 0), False),
    (8, (2, 6, 0, 0), True),
    (8, (1, 7, 0, 0), True),
    (8, (0, 9, 0, 0), False),
    (9, (7, 0, 0, 0), True),
    (9, (6, 2, 0, 0), True),
    (9, (5, 3, 0, 0), True),
    (9, (4, 5, 0, 0), True),
    (9, (3, 6, 0, 0), False),
    (9, (3, 7, 0, 0), True),
    (9, (6, 0, 1, 0), False),
    (9, (6, 0, 2, 0), True),
    (10, (9, 0, 0, 0), False),
    (10, (8, 1, 0, 0), False),
    (10, (7, 2, 0, 0), False),
    (10, (8, 2, 0, 0), True),
    (10, (7, 3, 0, 0), True),
    (10, (6, 4, 0, 0), True),
    (10, (6, 5, 0, 0), True),
    (10, (8, 0, 1, 0), False),
)

# quartic-type schemes (x, y, z) that fail in degree 8
DEGREE_8_COUNTEREXAMPLES = ((9, 0, 0), (8, 1, 0), (8, 0, 1), (8, 0, 2), (7, 2, 1))


@dataclass(frozen=True)
class TableRow:
    label: str
    expected_good: bool
    record: CaseRecord

    @property
    def matches(self) -> bool:
        return self.record.good == self.expected_good


def table_tasks() -> list[tuple[str, bool, CaseTask]]:
    out = []
    for d, counts, good in MULTIPLICITY_5_TABLE:
        sig = tuple((m, k) for m, k in zip((5, 4, 3, 2), counts) if k)
        out.append((f"d={d} c=({','.join(map(str, counts))})", good, CaseTask(d, sig)))
    for x, y, z in DEGREE_8_COUNTEREXAMPLES:
        out.append((f"d=8 xyz=({x},{y},{z})", False, triple_task(8, x, y, z)))
    return out


def run_tables(prime: int = DEFAULT_PRIME, trials: int = DEFAULT_TRIALS, seed: int = 0,
               jobs: int = 1) -> list[TableRow]:
    items = table_tasks()
    records = evaluate_many([t for _, _, t in items], prime, trials, seed, jobs)
    return [TableRow(label, good, rec) for (label, good, _), rec in zip(items, records)]


# ------------------------------------------------------------------ induction

@dataclass(frozen=True)
class TraceSummary:
    d: int
    total: int
    verified: int
    failures: tuple[tuple[int, int, int, str], ...]  # (x, y, z, first failed check)
    max_ms: float

    @property
    def ok(self) -> bool:
        return self.total == self.verified


def _trace_chunk(args) -> tuple[int, list[tuple[int, int, int, str]], float]:
    d, triples = args
    verified = 0
    failures = []
    worst = 0.0
    for x, y, z in triples:
        start = time.perf_counter()
        trace = run_induction(d, x, y, z)
        worst = max(worst, time.perf_counter() - start)
        if trace.status is Status.VERIFIED:
            verified += 1
        else:
            failures.append((x, y, z, trace.failure[1]))
    return verified, failures, worst * 1e3


def verify_boundary(d: int, triples: Sequence[tuple[int, int, int]] | None = None, jobs: int = 1,
                    progress=None) -> TraceSummary:
    """Run the induction tracer on every (or the given) boundary triple of ``d``."""
    triples = boundary_triples(d) if triples is None else list(triples)
    size = 2000
    chunks = [(d, triples[i:i + size]) for i in range(0, len(triples), size)]
    verified, failures, worst, done = 0, [], 0.0, 0
    if jobs <= 1:
        results = map(_trace_chunk, chunks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=jobs)
        results = pool.map(_trace_chunk, chunks)
    try:
        for (_, chunk), (v, f, w) in zip(chunks, results):
            verified += v
            failures.extend(f)
            worst = max(worst, w)
            done += len(chunk)
            if progress is not None:
                progress(done, len(triples))
    finally:
        if pool is not None:
            pool.shutdown()
    return TraceSummary(d, len(triples), verified, tuple(failures), worst)


def print_progress(done: int, total: int, stream=sys.stderr):
    print(f"\r{done}/{total}", end="" if done < total else "\n", file=stream, flush=True)

