"""Run configuration: everything that determines a CLI run."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .gallery import GroupSchemePreset, preset
from .jets import AffinePresentation, ProlongSeq, prolong_seq_make
from .poly import parse_poly
from .rings import BaseSetup


@dataclass(frozen=True)
class RunConfig:
    mode: str = "char-zero"
    p: int = 2
    e: int = 1
    K: int = 6
    n: int = 2
    scheme: str = "ga"
    point: str | None = None
    s_kind: str | None = None  # constant | canonical; None picks from the point
    trials: int = 100
    seed: int = 0
    cache_dir: str | None = None
    output: str = "human"

    def setup(self) -> BaseSetup:
        return BaseSetup(self.mode, self.p, self.e, self.K)

    def preset(self) -> GroupSchemePreset | None:
        try:
            return preset(self.scheme)
        except ValueError:
            if self.scheme.strip().startswith("vars"):
                return None
            raise

    def presentation(self, setup: BaseSetup) -> AffinePresentation:
        E = self.preset()
        if E is not None:
            E.check_discriminant(setup)
            return E.presentation(setup)
        return AffinePresentation.parse(self.scheme, setup)

    def point_values(self, setup: BaseSetup) -> tuple | None:
        if self.point is None:
            E = self.preset()
            return E.identity if E is not None and E.identity else None
        R = setup.ring
        out = []
        for t in self.point.split(","):
            c = parse_poly(t, R) if t.strip() else None
            if c is None or not c.is_constant():
                raise ValueError(f"point coordinate {t!r} is not a constant")
            out.append(c.constant_term())
        return tuple(out)

    def prolong_seq(self, setup: BaseSetup, X: AffinePresentation) -> ProlongSeq:
        kind = self.s_kind or ("constant" if self.point_values(setup) is not None else "canonical")
        if kind == "constant":
            pt = self.point_values(setup)
            if pt is None:
                raise ValueError("a constant prolongation sequence needs --point")
            return prolong_seq_make("constant", X, setup, point=pt)
        if kind == "canonical":
            return prolong_seq_make("canonical", X, setup)
        raise ValueError(f"unknown --s-kind {kind!r}")

    def instance(self) -> str:
        parts = [f"scheme={self.scheme}", f"n={self.n}", f"mode={self.mode}", f"p={self.p}",
                 f"e={self.e}", f"K={self.K}"]
        if self.point is not None:
            parts.append(f"point={self.point}")
        if self.s_kind:
            parts.append(f"s={self.s_kind}")
        return " ".join(parts)

    def to_json(self) -> dict:
        return asdict(self)


_INT_FIELDS = {f.name for f in fields(RunConfig) if f.type in ("int",)}


def load_config_file(path: str | Path) -> dict:
    """Flat ``key = value`` lines or a JSON object; keys use underscores or dashes."""
    text = Path(path).read_text()
    stripped = text.strip()
    if stripped.startswith("{"):
        raw = json.loads(stripped)
    else:
        raw = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            k, v = line.split("=", 1)
            raw[k.strip()] = v.strip()
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for k, v in raw.items():
        key = k.replace("-", "_")
        if key not in known:
            raise ValueError(f"unknown config key {k!r}")
        out[key] = int(v) if key in _INT_FIELDS and not isinstance(v, int) else v
    return out
