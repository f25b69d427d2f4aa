"""One CSV file of episode records per bsuite_id.

Files are named ``bsuite_id_-_<name>_-_<index>.csv`` with header
``bsuite_id,episode,raw_return,regret,steps``; reals are written with 17
significant digits so they reload bit-for-bit.
"""

from __future__ import annotations

import logging
import os
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)

HEADER = "bsuite_id,episode,raw_return,regret,steps"
PREFIX = "bsuite_id_-_"
SEP = "_-_"


@dataclass(frozen=True)
class EpisodeRecord:
    bsuite_id: str
    episode: int
    raw_return: float
    regret: float
    steps: int

    def to_row(self) -> str:
        return f"{self.bsuite_id},{self.episode},{self.raw_return:.17g},{self.regret:.17g},{self.steps}"


def results_path(directory: str | os.PathLike, bsuite_id: str) -> Path:
    name, _, index = bsuite_id.partition("/")
    return Path(directory) / f"{PREFIX}{name}{SEP}{index}.csv"


class ResultsWriter:
    """Keeps one file open and flushes after each row."""

    def __init__(self, directory: str | os.PathLike, bsuite_id: str):
        self.path = results_path(directory, bsuite_id)
        self.bsuite_id = bsuite_id
        self._file = None
        self._last_episode = 0

    def append(self, record: EpisodeRecord) -> None:
        if record.bsuite_id != self.bsuite_id:
            raise ValueError(f"record for {record.bsuite_id} sent to the writer for {self.bsuite_id}")
        if record.episode <= self._last_episode:
            raise ValueError(f"episode {record.episode} after {self._last_episode} in {self.path}")
        if record.steps < 1:
            raise ValueError(f"episode with {record.steps} steps")
        try:
            if self._file is None:
                fresh = not self.path.exists()
                self._file = open(self.path, "a", encoding="utf-8", newline="\n")
                if fresh:
                    self._file.write(HEADER + "\n")
            self._file.write(record.to_row() + "\n")
            self._file.flush()
        except OSError as exc:
            raise OSError(f"cannot write results to {self.path}: {exc}") from exc
        self._last_episode = record.episode

    def close(self) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def append_episode(directory: str | os.PathLike, record: EpisodeRecord) -> None:
    """Append a single row, creating the file (with header) if needed."""
    path = results_path(directory, record.bsuite_id)
    try:
        fresh = not path.exists()
        with open(path, "a", encoding="utf-8", newline="\n") as f:
            if fresh:
                f.write(HEADER + "\n")
            f.write(record.to_row() + "\n")
            f.flush()
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc


@dataclass
class ResultsTable:
    records: dict[str, list[EpisodeRecord]] = field(default_factory=dict)
    skipped_rows: int = 0

    def __len__(self) -> int:
        return sum(len(v) for v in self.records.values())

    def ids(self) -> list[str]:
        return list(self.records)


def _parse_row(line: str) -> EpisodeRecord:
    bsuite_id, episode, raw_return, regret, steps = line.split(",")
    record = EpisodeRecord(bsuite_id, int(episode), float(raw_return), float(regret), int(steps))
    if record.steps < 1 or record.episode < 1:
        raise ValueError("episode and steps must be >= 1")
    return record


def load_results(directory: str | os.PathLike) -> ResultsTable:
    """Load every result file in ``directory``, sorted by (bsuite_id, episode).

    Malformed rows (including a partially written final line) are skipped and
    counted in ``skipped_rows``.
    """
    directory = Path(directory)
    grouped: dict[str, list[EpisodeRecord]] = defaultdict(list)
    skipped = 0
    for path in sorted(directory.glob(f"{PREFIX}*.csv")):
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise OSError(f"cannot read results file {path}: {exc}") from exc
        lines = text.split("\n")
        complete = text.endswith("\n")
        if complete:
            lines = lines[:-1]
        if not lines or lines[0] != HEADER:
            logger.warning("%s: missing or bad header, file skipped", path)
            skipped += max(len(lines) - 1, 1)
            continue
        for number, line in enumerate(lines[1:], start=2):
            if number == len(lines) and not complete:
                logger.warning("%s: truncated final line skipped", path)
                skipped += 1
                continue
            try:
                record = _parse_row(line)
            except ValueError:
                logger.warning("%s:%d: malformed row skipped", path, number)
                skipped += 1
                continue
            grouped[record.bsuite_id].append(record)
    records = {bid: sorted(rows, key=lambda r: r.episode) for bid, rows in sorted(grouped.items())}
    return ResultsTable(records, skipped)
