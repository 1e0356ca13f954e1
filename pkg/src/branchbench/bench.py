"""Batch runner: manifests of instances, scheme sweeps, CSV results.

A manifest is a text file with one instance per line, either a path to an
instance file (resolved against the manifest's directory) or an inline
generator call:

    gen pigeons n=6
    gen randomb n=20 d=10 p1=40 p2=55 seed=3
    boards/hard-one.csp

Blank lines and `#` comments are skipped.  Each (instance, scheme) run gets
its own seed drawn from a single stream seeded by the global benchmark seed,
so a benchmark is reproducible end to end from one integer.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Optional, Sequence, Union

from .branching import Scheme
from .generators import GenSpec
from .instance_io import parse_instance
from .model import Problem
from .rng import Rng
from .search import Limits, solve

CSV_COLUMNS = (
    "instance",
    "scheme",
    "status",
    "nodes",
    "decisions",
    "wipeouts",
    "elapsed_ms",
    "seed",
)


@dataclass(frozen=True)
class RunRecord:
    instance: str
    scheme: str
    status: str
    nodes: int
    decisions: int
    wipeouts: int
    elapsed_ms: float
    seed: int


@dataclass(frozen=True)
class InstanceSource:
    """A named instance, backed by a file or by a generator call."""

    name: str
    path: Optional[str] = None
    genspec: Optional[GenSpec] = None

    def __post_init__(self):
        if (self.path is None) == (self.genspec is None):
            raise ValueError("exactly one of path or genspec must be given")

    def load(self) -> Problem:
        if self.genspec is not None:
            return self.genspec.build()
        return parse_instance(Path(self.path).read_text(encoding="utf-8"))


def parse_manifest(text: str, base_dir: Union[str, Path] = ".") -> list[InstanceSource]:
    base = Path(base_dir)
    sources = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gen "):
            spec = GenSpec.parse(line[4:])
            sources.append(InstanceSource(spec.name(), genspec=spec))
        else:
            path = base / line
            sources.append(InstanceSource(path.stem, path=str(path)))
    return sources


def _run_one(task) -> RunRecord:
    source, scheme, limits, run_seed = task
    problem = source.load()
    outcome = solve(problem, scheme, limits=limits, seed=run_seed)
    s = outcome.stats
    return RunRecord(
        instance=source.name,
        scheme=scheme.kind.value,
        status=outcome.status.value,
        nodes=s.nodes,
        decisions=s.decisions,
        wipeouts=s.wipeouts,
        elapsed_ms=s.elapsed_ms,
        seed=run_seed,
    )


def run_bench(
    sources: Sequence[InstanceSource],
    schemes: Sequence[Scheme],
    limits: Optional[Limits] = None,
    seed: int = 0,
    jobs: int = 1,
) -> list[RunRecord]:
    """Run every scheme on every instance; rows come back in task order."""
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    stream = Rng(seed)
    tasks = [
        (source, scheme, limits, stream.next_u64())
        for source in sources
        for scheme in schemes
    ]
    if jobs == 1 or len(tasks) <= 1:
        return [_run_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, tasks))


def write_csv(records: Iterable[RunRecord], out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(
            [
                r.instance,
                r.scheme,
                r.status,
                r.nodes,
                r.decisions,
                r.wipeouts,
                repr(r.elapsed_ms),
                r.seed,
            ]
        )


def read_csv(source: IO[str]) -> list[RunRecord]:
    reader = csv.reader(source)
    header = next(reader, None)
    if header != list(CSV_COLUMNS):
        raise ValueError(f"unexpected results header: {header!r}")
    records = []
    for row in reader:
        if not row:
            continue
        if len(row) != len(CSV_COLUMNS):
            raise ValueError(f"malformed results row: {row!r}")
        records.append(
            RunRecord(
                instance=row[0],
                scheme=row[1],
                status=row[2],
                nodes=int(row[3]),
                decisions=int(row[4]),
                wipeouts=int(row[5]),
                elapsed_ms=float(row[6]),
                seed=int(row[7]),
            )
        )
    return records
