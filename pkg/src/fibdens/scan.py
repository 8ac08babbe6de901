"""Batch density computation over prime ranges, with checkpoint/resume."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .density import DEFAULT_MAX_E, dens, wall_exponent
from .errors import ExponentCapError, InvalidArgumentError
from .modfib import epsilon, fib_mod
from .primes import MAX_PRIME, primes_between

SCHEMA_VERSION = 1
CSV_COLUMNS = ["p", "dens_num", "dens_den", "dens_float", "e", "N", "Z", "alpha", "pi", "ms"]


@dataclass(frozen=True)
class ScanRecord:
    p: int
    dens: Fraction
    e: int
    N: int
    Z: int
    alpha: int
    pi: int
    elapsed: float | None = None  # seconds; None unless timing was requested

    def csv_row(self) -> list[str]:
        ms = "" if self.elapsed is None else f"{self.elapsed * 1000:.3f}"
        return [
            str(self.p),
            str(self.dens.numerator),
            str(self.dens.denominator),
            f"{float(self.dens):.15g}",
            str(self.e),
            str(self.N),
            str(self.Z),
            str(self.alpha),
            str(self.pi),
            ms,
        ]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "dens": f"{self.dens.numerator}/{self.dens.denominator}",
            "e": self.e,
            "N": self.N,
            "Z": self.Z,
            "alpha": self.alpha,
            "pi": self.pi,
            "ms": None if self.elapsed is None else round(self.elapsed * 1000, 3),
        }


def record_for(p: int, max_e: int = DEFAULT_MAX_E, timing: bool = False, cross_check: bool = False):
    """ScanRecord for p, or the ExponentCapError instance when p hits the cap."""
    start = time.perf_counter()
    try:
        rep = dens(p, max_e=max_e, cross_check=cross_check)
    except ExponentCapError as exc:
        return exc
    elapsed = time.perf_counter() - start if timing else None
    return ScanRecord(p, rep.dens, rep.e, rep.N, rep.Z, rep.alpha, rep.pi, elapsed)


# -- sinks ------------------------------------------------------------------


class MemorySink:
    """Collects records in a list; position is the record count."""

    def __init__(self):
        self.records: list[ScanRecord] = []

    def begin(self):
        self.records.clear()

    def write(self, rec: ScanRecord):
        self.records.append(rec)

    def flush(self):
        pass

    def position(self):
        return len(self.records)

    def restore(self, position):
        del self.records[position:]

    def close(self):
        pass


class StreamSink:
    """CSV to an already-open text stream (stdout). Not resumable."""

    def __init__(self, stream, fmt: str = "csv"):
        self.stream = stream
        self.fmt = fmt
        self._csv = csv.writer(stream, lineterminator="\n")

    def begin(self):
        if self.fmt == "csv":
            self._csv.writerow(CSV_COLUMNS)

    def write(self, rec: ScanRecord):
        if self.fmt == "csv":
            self._csv.writerow(rec.csv_row())
        else:
            self.stream.write(json.dumps(rec.to_dict(), sort_keys=True) + "\n")

    def flush(self):
        self.stream.flush()

    def position(self):
        return None

    def restore(self, position):
        raise InvalidArgumentError("a stream sink cannot be resumed")

    def close(self):
        self.flush()


class FileSink:
    """CSV and/or JSON-lines files, truncated back to the checkpoint on resume."""

    def __init__(self, csv_path=None, jsonl_path=None):
        if csv_path is None and jsonl_path is None:
            raise InvalidArgumentError("FileSink needs at least one output path")
        self.paths = {"csv": csv_path, "jsonl": jsonl_path}
        self.files: dict[str, io.BufferedWriter] = {}

    def _open(self, mode: str):
        for key, path in self.paths.items():
            if path is not None:
                self.files[key] = open(path, mode)

    def begin(self):
        self._open("wb")
        if "csv" in self.files:
            self.files["csv"].write((",".join(CSV_COLUMNS) + "\n").encode())

    def write(self, rec: ScanRecord):
        if "csv" in self.files:
            buf = io.StringIO()
            csv.writer(buf, lineterminator="\n").writerow(rec.csv_row())
            self.files["csv"].write(buf.getvalue().encode())
        if "jsonl" in self.files:
            self.files["jsonl"].write((json.dumps(rec.to_dict(), sort_keys=True) + "\n").encode())

    def flush(self):
        for f in self.files.values():
            f.flush()
            os.fsync(f.fileno())

    def position(self):
        return {key: f.tell() for key, f in self.files.items()}

    def restore(self, position):
        self._open("r+b")
        for key, f in self.files.items():
            f.truncate(position[key])
            f.seek(position[key])

    def close(self):
        for f in self.files.values():
            f.close()
        self.files.clear()


# -- checkpoints -------------------------------------------------------------


@dataclass
class ScanCheckpoint:
    lo: int
    hi: int
    last_completed_prime: int | None = None
    running_min: tuple[int, str] | None = None
    running_max: tuple[int, str] | None = None
    record_count: int = 0
    wss_hits: list[int] = field(default_factory=list)
    cap_errors: list[int] = field(default_factory=list)
    sink_position: object = None

    def save(self, path) -> None:
        data = {"schema_version": SCHEMA_VERSION, **asdict(self)}
        data["range"] = [data.pop("lo"), data.pop("hi")]
        tmp = Path(str(path) + ".tmp")
        with open(tmp, "w") as f:
            json.dump(data, f, sort_keys=True)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path) -> ScanCheckpoint:
        with open(path) as f:
            data = json.load(f)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise InvalidArgumentError(f"unsupported checkpoint schema {data.get('schema_version')!r}")
        lo, hi = data.pop("range")
        data.pop("schema_version")
        for key in ("running_min", "running_max"):
            if data[key] is not None:
                data[key] = tuple(data[key])
        return cls(lo=lo, hi=hi, **data)


@dataclass
class ScanSummary:
    lo: int
    hi: int
    count: int
    min: tuple[int, Fraction] | None
    max: tuple[int, Fraction] | None
    wss_hits: list[int]
    cap_errors: list[int]
    resumed_from: int | None = None

    def to_dict(self) -> dict:
        def fmt(entry):
            return None if entry is None else {"p": entry[0], "dens": f"{entry[1].numerator}/{entry[1].denominator}"}

        return {
            "range": [self.lo, self.hi],
            "count": self.count,
            "min": fmt(self.min),
            "max": fmt(self.max),
            "wss_hits": self.wss_hits,
            "cap_errors": self.cap_errors,
            "resumed_from": self.resumed_from,
        }


def _as_entry(pair):
    return None if pair is None else (pair[0], Fraction(pair[1]))


def _map(fn, items, workers):
    if workers <= 1 or len(items) < 2:
        return list(map(fn, items))
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


class _Task:
    def __init__(self, max_e, timing):
        self.max_e = max_e
        self.timing = timing

    def __call__(self, p):
        return record_for(p, self.max_e, self.timing)


def scan_range(
    lo: int,
    hi: int,
    sink,
    checkpoint_path=None,
    *,
    resume: bool = False,
    workers: int = 1,
    checkpoint_every: int = 256,
    max_e: int = DEFAULT_MAX_E,
    timing: bool = False,
    progress: Callable[[int, int], None] | None = None,
) -> ScanSummary:
    """Emit one ScanRecord per prime in [lo, hi], ascending.

    With ``checkpoint_path`` the state is saved atomically every
    ``checkpoint_every`` primes; ``resume=True`` continues from it and
    yields byte-identical output to an uninterrupted run.
    """
    if lo > hi:
        raise InvalidArgumentError(f"empty interval [{lo}, {hi}]")
    if hi >= MAX_PRIME:
        raise InvalidArgumentError("scan range must stay within 64 bits")
    primes = primes_between(lo, hi)
    state = ScanCheckpoint(lo, hi)
    resumed_from = None
    if resume:
        if checkpoint_path is None or not Path(checkpoint_path).exists():
            raise InvalidArgumentError("resume requested but no checkpoint file exists")
        state = ScanCheckpoint.load(checkpoint_path)
        if (state.lo, state.hi) != (lo, hi):
            raise InvalidArgumentError(
                f"checkpoint covers [{state.lo}, {state.hi}], not [{lo}, {hi}]"
            )
        sink.restore(state.sink_position)
        resumed_from = state.last_completed_prime
        if resumed_from is not None:
            primes = [p for p in primes if p > resumed_from]
    else:
        sink.begin()
        if checkpoint_path is not None:
            sink.flush()
            state.sink_position = sink.position()
            state.save(checkpoint_path)

    task = _Task(max_e, timing)
    done = state.record_count
    try:
        for start in range(0, len(primes), checkpoint_every):
            batch = primes[start : start + checkpoint_every]
            for p, result in zip(batch, _map(task, batch, workers)):
                if isinstance(result, ExponentCapError):
                    state.cap_errors.append(p)
                    continue
                sink.write(result)
                done += 1
                value = f"{result.dens.numerator}/{result.dens.denominator}"
                if state.running_min is None or result.dens < Fraction(state.running_min[1]):
                    state.running_min = (p, value)
                if state.running_max is None or result.dens > Fraction(state.running_max[1]):
                    state.running_max = (p, value)
                if result.e >= 2:
                    state.wss_hits.append(p)
            state.last_completed_prime = batch[-1]
            state.record_count = done
            sink.flush()
            if checkpoint_path is not None:
                state.sink_position = sink.position()
                state.save(checkpoint_path)
            if progress:
                progress(done, len(primes))
    finally:
        sink.flush()
    return ScanSummary(
        lo,
        hi,
        state.record_count,
        _as_entry(state.running_min),
        _as_entry(state.running_max),
        list(state.wss_hits),
        list(state.cap_errors),
        resumed_from,
    )


def _wss_candidate(p: int) -> bool:
    if p == 5:
        return False
    return fib_mod(p - epsilon(p), p * p) == 0


def wss_sweep(lo: int, hi: int, workers: int = 1, max_e: int = DEFAULT_MAX_E) -> list[int]:
    """Primes in [lo, hi] with nu_p(F(p - eps)) >= 2, each confirmed on every channel."""
    if lo > hi:
        raise InvalidArgumentError(f"empty interval [{lo}, {hi}]")
    if hi >= MAX_PRIME:
        raise InvalidArgumentError("sweep range must stay within 64 bits")
    primes = primes_between(lo, hi)
    hits = []
    for p, flagged in zip(primes, _map(_wss_candidate, primes, workers)):
        if not flagged:
            continue
        try:
            rec = wall_exponent(p, max_e)
        except ExponentCapError:
            hits.append(p)
            continue
        if rec.wall_sun_sun:
            hits.append(p)
    return hits
