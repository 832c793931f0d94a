"""Persistent JSON cache for c-values and V2 count tables.

The file is a single JSON object.  Keys:

* ``"j|d|g1,g2,..."`` -> c(j, d; gamma) as a decimal string
* ``"v2|l|a1,...,al|t"`` -> number of complexes in V2(l) with that alpha
  profile and facet count
* ``"v2|l|total"`` -> |V2(l)|; marks the table for l as complete
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

ENV_VAR = "ARRANGE_COUNT_CACHE"


def c_key(j: int, d: int, gamma) -> str:
    return f"{j}|{d}|{','.join(map(str, gamma))}"


def v2_key(l: int, alpha, t: int) -> str:
    return f"v2|{l}|{','.join(map(str, alpha))}|{t}"


class CountStore:
    def __init__(self):
        self.c: dict[tuple, int] = {}
        self.v2: dict[int, dict[tuple, int]] = {}
        self._lock = threading.Lock()

    def get_c(self, j, d, gamma):
        return self.c.get((j, d, tuple(gamma)))

    def put_c(self, j, d, gamma, value: int):
        key = (j, d, tuple(gamma))
        with self._lock:
            old = self.c.setdefault(key, value)
        if old != value:
            raise ValueError(f"conflicting cache entry for c{key}: {old} != {value}")

    def get_v2(self, l: int):
        return self.v2.get(l)

    def put_v2(self, l: int, table: dict):
        with self._lock:
            self.v2[l] = dict(table)

    def to_json(self) -> dict:
        out = {}
        for (j, d, gamma), v in sorted(self.c.items()):
            out[c_key(j, d, gamma)] = str(v)
        for l, table in sorted(self.v2.items()):
            total = 0
            for (alpha, t), v in sorted(table.items()):
                out[v2_key(l, alpha, t)] = str(v)
                total += v
            out[f"v2|{l}|total"] = str(total)
        return out

    def load(self, path) -> "CountStore":
        path = Path(path)
        if not path.exists():
            return self
        data = json.loads(path.read_text())
        v2_partial: dict[int, dict] = {}
        totals: dict[int, int] = {}
        for key, value in data.items():
            parts = key.split("|")
            if parts[0] == "v2":
                l = int(parts[1])
                if parts[2] == "total":
                    totals[l] = int(value)
                    continue
                alpha = tuple(int(x) for x in parts[2].split(",") if x != "")
                v2_partial.setdefault(l, {})[(alpha, int(parts[3]))] = int(value)
            else:
                j, d = int(parts[0]), int(parts[1])
                gamma = tuple(int(x) for x in parts[2].split(",") if x)
                self.put_c(j, d, gamma, int(value))
        for l, total in totals.items():
            table = v2_partial.get(l, {})
            # only complete tables are trusted
            if sum(table.values()) == total:
                self.put_v2(l, table)
        return self

    def save(self, path):
        path = Path(path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(self.to_json(), indent=0, sort_keys=True))
        os.replace(tmp, path)


_default = CountStore()


def default_store() -> CountStore:
    return _default


def cache_path_from_env():
    return os.environ.get(ENV_VAR) or None
