"""Append-only, tab-separated class group cache.

Layout: a header line ``#ctl-cache v1`` then one record per line,
``D<TAB>h<TAB>d1,d2,...<TAB>W|N``. Writers take an exclusive flock and append
whole lines; readers ignore an unterminated final line.
"""

from __future__ import annotations

import fcntl
import os
from pathlib import Path
from typing import Iterable

from .classgroup import class_group
from .classgroup.structure import ClassGroup
from .errors import CacheCorruptionError, InvalidInputError

HEADER = "#ctl-cache v1"
_KIND = {"wide": "W", "narrow": "N"}
_KIND_BACK = {v: k for k, v in _KIND.items()}


def format_record(g: ClassGroup) -> str:
    return f"{g.D}\t{g.h}\t{','.join(map(str, g.divisors))}\t{_KIND[g.kind]}"


def parse_record(line: str, path="<cache>", lineno: int = 0) -> ClassGroup:
    parts = line.split("\t")
    try:
        if len(parts) != 4:
            raise ValueError("expected 4 fields")
        D, h = int(parts[0]), int(parts[1])
        divs = tuple(int(x) for x in parts[2].split(",")) if parts[2] else ()
        kind = _KIND_BACK[parts[3]]
        return ClassGroup(D, h, divs, kind)
    except (ValueError, KeyError, InvalidInputError):
        raise CacheCorruptionError(path, lineno, line) from None


class ClassGroupCache:
    def __init__(self, path):
        self.path = Path(path)
        self._records: dict[tuple[int, str], ClassGroup] = {}
        self._offset = 0
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, "r", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_SH)
            try:
                data = fh.read()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)
        if not data:
            return
        lines = data.split("\n")
        # a trailing fragment without newline is an in-progress write
        complete = lines[:-1]
        if not complete:
            return
        if complete[0] != HEADER:
            raise CacheCorruptionError(self.path, 1, complete[0])
        for lineno, line in enumerate(complete[1:], 2):
            if not line:
                continue
            g = parse_record(line, self.path, lineno)
            self._records[(g.D, g.kind)] = g

    def __len__(self) -> int:
        return len(self._records)

    def get(self, D: int, kind: str = "wide") -> ClassGroup | None:
        if D < 0:
            kind = "wide"
        return self._records.get((D, kind))

    def lookup(self, Ds: Iterable[int], kind: str = "wide") -> list[ClassGroup]:
        out = []
        for D in Ds:
            g = self.get(D, kind)
            if g is not None:
                out.append(g)
        return out

    def append(self, groups: Iterable[ClassGroup]) -> None:
        new = [g for g in groups if (g.D, g.kind) not in self._records]
        if not new:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a+", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.seek(0, os.SEEK_END)
                if fh.tell() == 0:
                    fh.write(HEADER + "\n")
                fh.write("".join(format_record(g) + "\n" for g in new))
                fh.flush()
                os.fsync(fh.fileno())
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)
        for g in new:
            self._records[(g.D, g.kind)] = g

    def get_or_compute(self, D: int, kind: str | None = None) -> ClassGroup:
        kind = "wide" if D < 0 else (kind or "wide")
        g = self.get(D, kind)
        if g is None:
            g = class_group(D, kind)
            self.append([g])
        return g


def cache_get_or_compute(D: int, path, kind: str | None = None) -> ClassGroup:
    return ClassGroupCache(path).get_or_compute(D, kind)
