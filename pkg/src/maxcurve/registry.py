"""Bundled model registry: a line-oriented "key = value" file with [model <id>] sections."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .counting import PlaneCurve, QuadricNet
from .gf import FieldCtx, parse_field_spec
from .poly import MultiPoly, parse_poly

BUNDLED = Path(__file__).with_name("data") / "models.ini"

KINDS = {
    "plane-curve": ({"kind", "vars", "field", "equation"}, {"note"}),
    "quadric-net": ({"kind", "vars", "field", "q1", "q2", "q3"}, {"note"}),
    "weierstrass": ({"kind", "vars", "field", "equation"}, {"note"}),
    "rational-map": ({"kind", "vars", "field", "source", "target", "x-num", "x-den", "y-num", "y-den"}, {"note"}),
    "linear-map": ({"kind", "field", "matrix"}, {"note", "acts-on"}),
}

_HEADER = re.compile(r"^\[model\s+([A-Za-z0-9_.\-]+)\]$")


class RegistryError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass
class CurveModel:
    id: str
    kind: str
    payload: dict[str, str]
    line: int = 0
    ctx: FieldCtx | None = field(default=None, repr=False)

    @property
    def vars(self) -> list[str]:
        return [v.strip() for v in self.payload.get("vars", "").split(",") if v.strip()]

    def poly(self, key: str) -> MultiPoly:
        return parse_poly(self.payload[key], self.vars, self.ctx)

    # --- typed views -------------------------------------------------------------------

    def equation(self) -> MultiPoly:
        """Affine or homogeneous equation as written; Weierstrass 'lhs = rhs' becomes lhs - rhs."""
        text = self.payload["equation"]
        if "=" in text:
            lhs, rhs = text.split("=", 1)
            return parse_poly(lhs, self.vars, self.ctx) - parse_poly(rhs, self.vars, self.ctx)
        return self.poly("equation")

    def plane_curve(self) -> PlaneCurve:
        f = self.equation()
        if len(self.vars) == 2:
            f = f.homogenize()
        return PlaneCurve(f, self.id)

    def forms(self) -> list[MultiPoly]:
        return [self.poly(k) for k in ("q1", "q2", "q3")]

    def net(self) -> QuadricNet:
        from .pencil import gram

        return gram(self.forms())

    def matrix(self) -> list[list[int]]:
        rows = [r.split() for r in self.payload["matrix"].split(";")]
        return [[self.ctx.from_int(int(x)) for x in r] for r in rows]

    def linear_map(self):
        from .pencil import ProjLinearMap

        return ProjLinearMap.of(self.matrix(), self.ctx)

    def rational_map(self):
        from .cover import RationalMap

        comps = [(self.poly("x-num"), self.poly("x-den")), (self.poly("y-num"), self.poly("y-den"))]
        return RationalMap(comps, self.payload["source"], self.payload["target"])

    def validate(self) -> None:
        """Parse every payload entry and run the kind-specific arity checks."""
        try:
            if self.kind == "linear-map":
                M = self.matrix()
                if any(len(r) != len(M) for r in M):
                    raise ValueError("matrix must be square")
                self.linear_map()
            elif self.kind == "quadric-net":
                if len(self.vars) != 5:
                    raise ValueError("a net of quadrics needs 5 variables")
                if any(q.total_degree() != 2 or not q.is_homogeneous() for q in self.forms()):
                    raise ValueError("net members must be quadratic forms")
            elif self.kind == "rational-map":
                if len(self.vars) != 2:
                    raise ValueError("rational maps are written in 2 affine variables")
                self.rational_map()
            else:
                if len(self.vars) not in (2, 3):
                    raise ValueError("plane curves use 2 affine or 3 homogeneous variables")
                f = self.equation()
                if f.is_zero():
                    raise ValueError("equation is zero")
                if len(self.vars) == 3 and not f.is_homogeneous():
                    raise ValueError("3-variable equations must be homogeneous")
        except (ValueError, KeyError) as exc:
            raise RegistryError(f"model {self.id}: {exc}", self.line) from exc


class Registry(dict):
    def get_model(self, mid: str, kind: str | None = None) -> CurveModel:
        if mid not in self:
            raise KeyError(f"unknown model {mid!r}; known: {', '.join(sorted(self))}")
        m = self[mid]
        if kind is not None and m.kind != kind:
            raise KeyError(f"model {mid!r} is a {m.kind}, expected {kind}")
        return m


def registry_parse(text: str) -> Registry:
    reg = Registry()
    current: CurveModel | None = None
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            m = _HEADER.match(line)
            if not m:
                raise RegistryError(f"bad section header {line!r}", lineno)
            mid = m.group(1)
            if mid in reg:
                raise RegistryError(f"duplicate model id {mid!r}", lineno)
            current = CurveModel(mid, "", {}, lineno)
            reg[mid] = current
            seen = {}
            continue
        if current is None:
            raise RegistryError("entry outside a [model ...] section", lineno)
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise RegistryError(f"expected 'key = value', got {line!r}", lineno)
        if key in seen:
            raise RegistryError(f"duplicate key {key!r}", lineno)
        if key == "kind":
            if value not in KINDS:
                raise RegistryError(f"unknown kind {value!r}", lineno)
            current.kind = value
        seen[key] = lineno
        current.payload[key] = value
        if current.kind:
            required, optional = KINDS[current.kind]
            for k, ln in seen.items():
                if k not in required | optional:
                    raise RegistryError(f"unknown key {k!r} for kind {current.kind}", ln)
    for m in reg.values():
        if not m.kind:
            raise RegistryError(f"model {m.id} has no kind", m.line)
        missing = KINDS[m.kind][0] - set(m.payload)
        if missing:
            raise RegistryError(f"model {m.id} is missing {sorted(missing)}", m.line)
        try:
            m.ctx = parse_field_spec(m.payload["field"])
        except ValueError as exc:
            raise RegistryError(f"model {m.id}: {exc}", m.line) from exc
        m.validate()
    return reg


def registry_load(path: str | Path | None = None) -> Registry:
    path = Path(path) if path is not None else BUNDLED
    if not path.is_file():
        raise RegistryError(f"registry file not found: {path}")
    return registry_parse(path.read_text())
