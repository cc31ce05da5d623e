"""Morphisms of DF log structures as sparse integer exponent matrices.

A morphism ``f : X -> Y`` records, for every bundle ``y`` of Y, the exponents
``e[y][x]`` with f^* L_y = tensor of L_x^{e[y][x]}, and the pulled-back
section f^* s_y: ``None`` for the zero section, otherwise a monomial
``{x: m}`` in the source sections (the empty monomial is the unit section).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..errors import InternalConsistencyError, InvalidInput
from .structures import DIVISOR, UNIT, ZERO, Factor, Structure, add_into, key_str, product

DF, VIRTUAL = "df", "virtual"
_UNDEFINED = object()


@dataclass(eq=False)
class LogMorphism:
    source: Structure
    target: Structure
    rows: dict
    pulled: dict
    kind: str = DF
    label: str = field(default="", compare=False)

    def __post_init__(self):
        self.validate()

    @classmethod
    def trusted(cls, *args, **kw) -> "LogMorphism":
        """Build without validation; for results of operations on valid morphisms."""
        m = cls.__new__(cls)
        m.source, m.target, m.rows, m.pulled = args[:4]
        m.kind = args[4] if len(args) > 4 else kw.get("kind", DF)
        m.label = kw.get("label", "")
        return m

    def validate(self):
        if set(self.rows) != set(self.target.keys) or set(self.pulled) != set(self.target.keys):
            raise InvalidInput("need one row and one pulled section per target bundle")
        src = set(self.source.keys)
        for row in self.rows.values():
            if not set(row) <= src:
                raise InvalidInput("row refers to a bundle outside the source")

    def __eq__(self, other):
        return (
            isinstance(other, LogMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.rows == other.rows
            and self.pulled == other.pulled
        )

    def row_class(self, y) -> dict:
        """Divisor class of the pullback of bundle y, expanded in the source lattice."""
        acc = {}
        for x, e in self.rows[y].items():
            add_into(acc, self.source.bundle_class(x), e)
        return acc

    def to_json(self) -> dict:
        rows = []
        for y in self.target.keys:
            p = self.pulled[y]
            rows.append(
                {
                    "target": key_str(y),
                    "exponents": {key_str(x): e for x, e in sorted(self.rows[y].items(), key=lambda kv: key_str(kv[0]))},
                    "class": {key_str(k): v for k, v in sorted(self.row_class(y).items(), key=lambda kv: key_str(kv[0]))},
                    "pulled_section": "zero" if p is None else ({key_str(x): m for x, m in sorted(p.items(), key=lambda kv: key_str(kv[0]))} or "unit"),
                }
            )
        return {"kind": self.kind, "source": self.source.to_json(), "target": self.target.to_json(), "rows": rows}


def _section_monomial(structure: Structure, key):
    kind = structure.sections[key]
    if kind == ZERO:
        return None
    return {} if kind == UNIT else {key: 1}


def identity(structure: Structure) -> LogMorphism:
    return LogMorphism(
        structure,
        structure,
        {k: {k: 1} for k in structure.keys},
        {k: _section_monomial(structure, k) for k in structure.keys},
    )


def relabel_morphism(source: Structure, target: Structure, key_map: Mapping) -> LogMorphism:
    """Isomorphism sending each target key y to the source key key_map[y]."""
    rows, pulled = {}, {}
    for y in target.keys:
        x = key_map[y]
        if source.sections[x] != target.sections[y]:
            raise InvalidInput("relabelling must match section kinds")
        rows[y] = {x: 1}
        pulled[y] = _section_monomial(source, x)
    return LogMorphism(source, target, rows, pulled)


def retag(structure: Structure, mapping: Mapping) -> tuple:
    """(new structure, identity-like morphism old -> new) with factor tags renamed."""
    new = Structure(
        Factor(mapping.get(f.tag, f.tag), f.kind, f.labels, f.point_sections) for f in structure.factors
    )
    key_map = {(mapping.get(t, t), I): (t, I) for t, I in structure.keys}
    return new, relabel_morphism(structure, new, key_map)


def product_morphism(*ms: LogMorphism) -> LogMorphism:
    rows, pulled = {}, {}
    for m in ms:
        rows.update(m.rows)
        pulled.update(m.pulled)
    kind = VIRTUAL if any(m.kind == VIRTUAL for m in ms) else DF
    return LogMorphism.trusted(product(*(m.source for m in ms)), product(*(m.target for m in ms)), rows, pulled, kind)


def compose_morphisms(f: LogMorphism, g: LogMorphism) -> LogMorphism:
    """f after g; requires g.target == f.source."""
    if g.target != f.source:
        raise InvalidInput(f"cannot compose: {g.target!r} is not {f.source!r}")
    rows, pulled = {}, {}
    for z, frow in f.rows.items():
        acc = {}
        for y, e in frow.items():
            add_into(acc, g.rows[y], e)
        rows[z] = acc
        mono = f.pulled[z]
        if mono is None:
            pulled[z] = None
            continue
        out = {}
        for y, m in mono.items():
            sub = g.pulled[y]
            if sub is None:
                if m < 0:
                    raise InternalConsistencyError("negative power of a zero section")
                out = None
                break
            add_into(out, sub, m)
        pulled[z] = out
    kind = VIRTUAL if VIRTUAL in (f.kind, g.kind) else DF
    return LogMorphism.trusted(g.source, f.target, rows, pulled, kind)


def row_monomial(m: LogMorphism, y):
    """The product of source sections to the row's exponents."""
    out = {}
    for x, e in m.rows[y].items():
        kind = m.source.sections[x]
        if kind == ZERO:
            if e < 0:
                return _UNDEFINED
            return None
        if kind == DIVISOR:
            add_into(out, {x: e})
    return out


def _check(m: LogMorphism, exempt_zero: bool):
    for y in m.target.keys:
        if exempt_zero and m.pulled[y] is None:
            continue
        neg = [(x, e) for x, e in m.rows[y].items() if e < 0]
        if neg:
            x, e = min(neg, key=lambda xe: key_str(xe[0]))
            return False, (y, x, e)
        if row_monomial(m, y) != m.pulled[y]:
            return False, (y, None, "section mismatch")
    return True, None


def legality_df(m: LogMorphism):
    """(ok, witness) for the strict DF rules on every row."""
    return _check(m, exempt_zero=False)


def legality_virtual(m: LogMorphism):
    """(ok, witness); rows whose pulled-back section is zero are exempt."""
    return _check(m, exempt_zero=True)


def witness_json(w):
    if w is None:
        return None
    y, x, e = w
    return {"target": key_str(y), "source": None if x is None else key_str(x), "exponent": e}
