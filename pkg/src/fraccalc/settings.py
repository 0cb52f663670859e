"""Process-wide numerical defaults, overridable from a key=value file."""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path


@dataclass
class Settings:
    ml_tol: float = 1e-16
    ml_max_terms: int = 10_000
    grid_points: int = 1024
    grid_levels: int = 3
    quad_tol: float = 1e-6
    gl_points: int = 4096
    laplace_panels: int = 400

    def update(self, **values) -> None:
        known = {f.name: f.type for f in fields(self)}
        for key, raw in values.items():
            if key not in known:
                raise KeyError(f"unknown setting {key!r}")
            current = getattr(self, key)
            setattr(self, key, type(current)(raw))


SETTINGS = Settings()


def parse_config(path: str | Path) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment, blank lines are skipped.

    Keys may be dotted (``grid.points``); dots become underscores.  Values may
    be quoted.
    """
    out: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        out[key.replace(".", "_").replace("-", "_")] = value.strip("'\"")
    return out


def load_config(path: str | Path, settings: Settings = SETTINGS) -> Settings:
    values = parse_config(path)
    # numbers like 1e3 for integer fields
    coerced = {}
    for k, v in values.items():
        current = getattr(settings, k, None)
        coerced[k] = int(float(v)) if isinstance(current, int) else v
    settings.update(**coerced)
    return settings
