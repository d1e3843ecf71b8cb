"""Experiment specifications and the flat key=value config format.

A config file holds one ``key = value`` pair per line; ``#`` starts a
comment. List-valued keys take comma-separated entries, and an integer
entry may be written as a power such as ``2^12`` or ``10^6``.

    mode = verify-thm1
    N = 2^8, 2^10, 2^12
    Q = 2, 4, 8, 16
    k = 2, 3, 4
    eps = 0.05
    generator = random-unit, all-ones, single-spike
    count = 10
    seed = 1
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

MODES = (
    "verify-thm1",
    "verify-thm2",
    "verify-thm3",
    "verify-lemma1",
    "verify-lemma8",
    "delta-oracle",
    "regime-table",
    "farey-stats",
)
GENERATORS = ("all-ones", "random-unit", "random-complex", "single-spike")
RANDOM_GENERATORS = ("random-unit", "random-complex")


class ConfigError(ValueError):
    """Invalid configuration; the CLI maps it to exit code 2."""


@dataclass(frozen=True)
class ExperimentSpec:
    mode: str
    N: Tuple[int, ...]
    Q: Tuple[int, ...]
    k: Tuple[int, ...]
    epsilon: float = 0.05
    generator: Tuple[str, ...] = ("random-unit",)
    seed: int = 1
    count: int = 1
    M: int = 0
    c6: float = 1.0
    out: Optional[str] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; choose from {', '.join(MODES)}")
        for name in ("N", "Q", "k", "generator"):
            if not getattr(self, name):
                raise ConfigError(f"{name} must be a nonempty list")
        if min(self.N) < 1 or min(self.Q) < 1:
            raise ConfigError("N and Q values must be >= 1")
        if min(self.k) < 1:
            raise ConfigError("k values must be >= 1")
        bad = [g for g in self.generator if g not in GENERATORS]
        if bad:
            raise ConfigError(f"unknown generator {bad[0]!r}; choose from {', '.join(GENERATORS)}")
        if self.count < 1:
            raise ConfigError("count must be >= 1")
        if self.epsilon < 0:
            raise ConfigError("eps must be >= 0")


# defaults per mode, used for any key the file and the flags leave unset
DEFAULTS: Dict[str, Dict[str, object]] = {
    "verify-thm1": dict(N=(256, 1024), Q=(2, 4, 8), k=(2, 3), generator=("random-unit", "all-ones", "single-spike"), count=3),
    "verify-thm2": dict(N=(256, 1024), Q=(2, 4, 8, 16), k=(3,), generator=("random-unit", "all-ones", "single-spike"), count=3),
    "verify-thm3": dict(N=(256,), Q=(16, 64, 256), k=(2, 3)),
    "verify-lemma1": dict(N=(256, 1024), Q=(100, 1000), k=(3,), count=3),
    "verify-lemma8": dict(N=(1,), Q=(300,), k=(3,)),
    "delta-oracle": dict(N=(1,), Q=(500,), k=(2, 3)),
    "regime-table": dict(N=(10**6, 10**9, 10**12), Q=(1,), k=(3,), epsilon=0.0),
    "farey-stats": dict(N=(256, 1024), Q=(100, 500, 1000), k=(3,)),
}

_LIST_KEYS = {"N": int, "Q": int, "k": int, "generator": str}
_SCALAR_KEYS = {"mode": str, "epsilon": float, "seed": int, "count": int, "M": int, "c6": float, "out": str}
_ALIASES = {"eps": "epsilon", "Q0": "Q", "threads": None}


def parse_int(text: str) -> int:
    """Integer literal, also accepting ``b^e`` and ``b**e``."""
    t = text.strip().replace("**", "^")
    try:
        if "^" in t:
            b, e = t.split("^", 1)
            return int(b) ** int(e)
        return int(t)
    except ValueError:
        raise ConfigError(f"not an integer: {text!r}") from None


def _convert(key: str, raw: str):
    if key in _LIST_KEYS:
        typ = _LIST_KEYS[key]
        items = [s.strip() for s in raw.split(",") if s.strip()]
        return tuple(parse_int(s) if typ is int else s for s in items)
    typ = _SCALAR_KEYS[key]
    if typ is int:
        return parse_int(raw)
    if typ is float:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"not a number for {key}: {raw!r}") from None
    return raw.strip()


def canonical_key(key: str) -> Optional[str]:
    key = key.strip()
    key = _ALIASES.get(key, key)
    if key is None:
        return None
    if key not in _LIST_KEYS and key not in _SCALAR_KEYS:
        raise ConfigError(f"unknown config key {key!r}")
    return key


def parse_config_text(text: str) -> Dict[str, object]:
    out: Dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = line.split("=", 1)
        ck = canonical_key(key)
        if ck is not None:
            out[ck] = _convert(ck, raw)
    return out


def load_config(path: str) -> Dict[str, object]:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def build_spec(mode: Optional[str], file_values: Dict[str, object], overrides: Dict[str, object]) -> ExperimentSpec:
    """Merge mode defaults, then file values, then command-line overrides."""
    values = dict(file_values)
    values.update({k: v for k, v in overrides.items() if v is not None})
    if mode is not None:
        values["mode"] = mode
    m = values.get("mode")
    if m not in MODES:
        raise ConfigError(f"unknown mode {m!r}; choose from {', '.join(MODES)}")
    merged = dict(DEFAULTS[m])
    merged.update(values)
    return ExperimentSpec(**merged)


def with_out(spec: ExperimentSpec, out: Optional[str]) -> ExperimentSpec:
    return replace(spec, out=out)


def thread_count() -> int:
    """Worker threads from SIEVELAB_THREADS (default 1)."""
    raw = os.environ.get("SIEVELAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"SIEVELAB_THREADS must be an integer, got {raw!r}") from None
