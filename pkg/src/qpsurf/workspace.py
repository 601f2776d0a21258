"""Reading and writing ``.qs`` workspace files.

A workspace names a surface and the objects computed with it::

    surface gates=2 ygens=1
    seed 7

    loop a
      turn in=1@1/3 out=2@1/3 y=""
    loop s
      singular y="y1 y2^-1"
    based c
      start y="y1"
      turn in=1@1/2 out=2@1/2 y=""
    fox d1
      d y1 = 1
    rep rho n=2 y1=[[1,1],[0,1]]

Generators missing from a ``fox`` section are sent to zero.
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .algebra import Alphabet, ParseError, format_coeff
from .foxcalc import FoxDerivative, format_fox, parse_fox
from .surface import (
    BasedGenericLoop,
    Crossing,
    GenericLoop,
    LoopError,
    QuasiSurface,
    Turn,
    validate_loop,
)
from .tracealg import RepresentationPoint, format_representation, parse_representation


class UnknownName(KeyError):
    pass


@dataclass
class Workspace:
    surface: QuasiSurface
    loops: Dict[str, GenericLoop] = field(default_factory=dict)
    based: Dict[str, BasedGenericLoop] = field(default_factory=dict)
    fox: Dict[str, FoxDerivative] = field(default_factory=dict)
    reps: Dict[str, RepresentationPoint] = field(default_factory=dict)
    seed: Optional[int] = None

    @property
    def alphabet(self) -> Alphabet:
        return self.surface.alphabet

    def _get(self, table: Dict, kind: str, name: str):
        try:
            return table[name]
        except KeyError:
            raise UnknownName(f"no {kind} named {name!r}") from None

    def loop(self, name: str) -> GenericLoop:
        return self._get(self.loops, "loop", name)

    def based_loop(self, name: str) -> BasedGenericLoop:
        return self._get(self.based, "based loop", name)

    def derivative(self, name: str) -> FoxDerivative:
        return self._get(self.fox, "fox derivative", name)

    def rep(self, name: str) -> RepresentationPoint:
        return self._get(self.reps, "representation", name)

    def names(self):
        return [*self.loops, *self.based, *self.fox, *self.reps]


# ---------------------------------------------------------------------------
# loops


def _parse_pos(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad position {text!r}") from None


def _fields(line: str) -> Tuple[str, Dict[str, str]]:
    try:
        parts = shlex.split(line)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    head, out = parts[0], {}
    for p in parts[1:]:
        key, sep, val = p.partition("=")
        if not sep:
            raise ParseError(f"expected KEY=VALUE, got {p!r}")
        out[key] = val
    return head, out


def _gate_at(text: str) -> Tuple[int, Fraction]:
    gate, sep, pos = text.partition("@")
    if not sep or not gate.isdigit():
        raise ParseError(f"expected GATE@POS, got {text!r}")
    return int(gate), _parse_pos(pos)


def _y(alpha: Alphabet, fields: Dict[str, str]) -> Tuple[int, ...]:
    text = fields.get("y", "")
    return alpha.parse_word(text) if text.strip() else ()


def parse_turn(alpha: Alphabet, line: str) -> Turn:
    head, f = _fields(line)
    if head != "turn" or "in" not in f or "out" not in f:
        raise ParseError(f"expected 'turn in=G@P out=G@P y=\"WORD\"', got {line!r}")
    gi, pi = _gate_at(f["in"])
    go, po = _gate_at(f["out"])
    try:
        return Turn(Crossing(gi, pi, 1), Crossing(go, po, -1), _y(alpha, f))
    except LoopError as exc:
        raise ParseError(str(exc)) from None


def format_turn(alpha: Alphabet, t: Turn) -> str:
    y = alpha.format_word(t.y_word) if t.y_word else ""
    return f'turn in={t.in_gate}@{t.entry.pos} out={t.out_gate}@{t.exit.pos} y="{y}"'


def format_loop(alpha: Alphabet, a: GenericLoop) -> List[str]:
    if a.is_singular:
        y = alpha.format_word(a.singular_class) if a.singular_class else ""
        return [f'singular y="{y}"']
    return [format_turn(alpha, t) for t in a.turns]


def format_based(alpha: Alphabet, a: BasedGenericLoop) -> List[str]:
    y = alpha.format_word(a.start) if a.start else ""
    return [f'start y="{y}"'] + [format_turn(alpha, t) for t in a.turns]


def _build_loop(X: QuasiSurface, kind: str, body: List[str]):
    alpha = X.alphabet
    if kind == "loop":
        if len(body) == 1 and body[0].split()[0] == "singular":
            head, f = _fields(body[0])
            loop = GenericLoop.singular(_y(alpha, f))
        else:
            if not body:
                raise ParseError("loop has no turns")
            loop = GenericLoop(tuple(parse_turn(alpha, line) for line in body))
    else:
        start = ()
        if body and body[0].split()[0] == "start":
            _, f = _fields(body[0])
            start = _y(alpha, f)
            body = body[1:]
        loop = BasedGenericLoop(start, tuple(parse_turn(alpha, line) for line in body))
    try:
        validate_loop(X, loop)
    except (LoopError, ValueError) as exc:
        raise ParseError(str(exc)) from None
    return loop


# ---------------------------------------------------------------------------
# whole files

_SURFACE_RE = re.compile(r"^surface\s+gates=(\d+)\s+ygens=(\d+)\s*$")
_SECTIONS = ("loop", "based", "fox", "rep")


def parse_workspace(text: str) -> Workspace:
    ws: Optional[Workspace] = None
    seed = None
    sections: List[Tuple[int, str, str, List[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word = line.split()[0]
        try:
            if word == "surface":
                m = _SURFACE_RE.match(line)
                if not m:
                    raise ParseError("expected 'surface gates=K ygens=m'")
                if ws is not None:
                    raise ParseError("surface declared twice")
                ws = Workspace(QuasiSurface(int(m.group(1)), int(m.group(2))))
            elif word == "seed":
                seed = int(line.split()[1])
            elif word in _SECTIONS:
                parts = line.split(None, 2)
                if len(parts) < 2:
                    raise ParseError(f"{word} section needs a name")
                sections.append((lineno, word, parts[1], [parts[2]] if len(parts) > 2 else []))
            elif sections:
                sections[-1][3].append(line)
            else:
                raise ParseError(f"unexpected line {line!r}")
        except (ParseError, ValueError) as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    if ws is None:
        raise ParseError("workspace has no 'surface gates=K ygens=m' line")
    ws.seed = seed
    seen = set()
    for lineno, kind, name, body in sections:
        try:
            if name in seen:
                raise ParseError(f"duplicate name {name!r}")
            seen.add(name)
            if kind in ("loop", "based"):
                table = ws.loops if kind == "loop" else ws.based
                table[name] = _build_loop(ws.surface, kind, body)
            elif kind == "fox":
                ws.fox[name] = parse_fox(ws.alphabet, body)
            else:
                ws.reps[name] = parse_representation(ws.alphabet, " ".join(body))
        except (ParseError, ValueError, KeyError) as exc:
            raise ParseError(f"section {kind} {name} (line {lineno}): {exc}") from None
    return ws


def load_workspace(path: Union[str, Path]) -> Workspace:
    return parse_workspace(Path(path).read_text())


def format_workspace(ws: Workspace) -> str:
    alpha = ws.alphabet
    out = [f"surface gates={ws.surface.gates} ygens={ws.surface.ygens}"]
    if ws.seed is not None:
        out.append(f"seed {ws.seed}")
    for name, a in ws.loops.items():
        out.append(f"loop {name}")
        out.extend("  " + line for line in format_loop(alpha, a))
    for name, a in ws.based.items():
        out.append(f"based {name}")
        out.extend("  " + line for line in format_based(alpha, a))
    for name, d in ws.fox.items():
        out.append(f"fox {name}")
        out.extend("  " + line for line in format_fox(alpha, d).splitlines())
    for name, rho in ws.reps.items():
        out.append(f"rep {name} " + format_representation(alpha, rho)[len("rep "):])
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# bracket results


def combination_records(alpha: Alphabet, x) -> List[Dict[str, str]]:
    """``[{class, coeff}]`` ordered by canonical class."""
    return [{"class": alpha.format_class(c), "coeff": format_coeff(r)} for c, r in x.sorted_items()]


def element_records(alpha: Alphabet, x) -> List[Dict[str, str]]:
    return [{"word": alpha.format_word(w), "coeff": format_coeff(r)} for w, r in x.sorted_items()]


def format_combination(alpha: Alphabet, x) -> str:
    if not x:
        return "0"
    return "\n".join(f"{format_coeff(r)}\t<{alpha.format_class(c)}>" for c, r in x.sorted_items())
