"""The problem-document format: a deterministic text encoding.

One self-contained document per problem.  Blocks appear in declaration
order; the first must be the ``space`` block.  Multi-line blocks close
with ``end``; ``desirset`` declarations are one-liners.  Numbers are
integers or ``p/q`` fractions; float literals are rejected outright.

    space
    omega h t
    prizes x
    worst z
    end

    gamble f
    -1 1
    end

    credal M
    constraint 1 -1
    constraint -1 1
    end

    desirset R1 strict M
    desirset R2 augmented M f

    lottery p
    1/2 1/4 1/4
    0 0 1
    end

    relation rel
    pair p q
    end

    event B
    states h
    end

Gambles and credal sets accept an ``on omega`` / ``on prizes`` suffix to
live on one factor; lotteries and relations accept a ``bare`` suffix for
the worst-outcome-free flavour.  Parsing and emission are exact inverses
on canonical documents: parse(emit(parse(text))) == parse(text), and
emit is the identity on its own output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cones import DesirSet
from .credal import CredalSet
from .errors import InputError
from .preferences import PreferenceRelation
from .spaces import (
    EventSet,
    Gamble,
    HorseLottery,
    Space,
    omega_factor_space,
    prizes_factor_space,
)

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_-]*$")
_NUMBER = re.compile(r"-?\d+(/\d+)?$")


def rat_str(x: Fraction) -> str:
    """Canonical answer form: lowest terms with explicit denominator."""
    return f"{x.numerator}/{x.denominator}"


def doc_num(x: Fraction) -> str:
    """Document form: bare integer when integral, else p/q."""
    return str(x.numerator) if x.denominator == 1 else rat_str(x)


class ParseError(InputError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _parse_number(token: str, line_no: int, line: str) -> Fraction:
    if not _NUMBER.match(token):
        col = line.find(token) + 1
        if "." in token or "e" in token.lower():
            raise ParseError(f"float literal {token!r} rejected", line_no, col)
        raise ParseError(f"bad number {token!r}", line_no, col)
    if "/" in token:
        num, den = token.split("/")
        if int(den) == 0:
            raise ParseError(f"zero denominator in {token!r}", line_no, 1)
        return Fraction(int(num), int(den))
    return Fraction(int(token))


@dataclass(frozen=True)
class DesirDecl:
    name: str
    kind: str  # fg | strict | augmented | vacuous
    refs: tuple[str, ...]


@dataclass
class ProblemDocument:
    space: Space
    gambles: dict[str, Gamble] = field(default_factory=dict)
    lotteries: dict[str, HorseLottery] = field(default_factory=dict)
    credals: dict[str, CredalSet] = field(default_factory=dict)
    desirsets: dict[str, DesirSet] = field(default_factory=dict)
    desir_decls: dict[str, DesirDecl] = field(default_factory=dict)
    relations: dict[str, PreferenceRelation] = field(default_factory=dict)
    relation_pairs: dict[str, tuple[tuple[str, str], ...]] = field(
        default_factory=dict
    )
    events: dict[str, EventSet] = field(default_factory=dict)
    order: list[tuple[str, str]] = field(default_factory=list)

    def lookup(self, kind: str, name: str):
        table = {
            "gamble": self.gambles,
            "lottery": self.lotteries,
            "credal": self.credals,
            "desirset": self.desirsets,
            "relation": self.relations,
            "event": self.events,
        }[kind]
        if name not in table:
            raise InputError(f"no {kind} named {name!r}")
        return table[name]


class _Lines:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    def next_content(self) -> Optional[tuple[int, str]]:
        while self.pos < len(self.lines):
            raw = self.lines[self.pos]
            self.pos += 1
            stripped = raw.strip()
            if stripped and not stripped.startswith("#"):
                return self.pos, stripped
        return None

    def body_until_end(self, opener_line: int) -> list[tuple[int, str]]:
        body = []
        while True:
            item = self.next_content()
            if item is None:
                raise ParseError("block is missing its 'end'", opener_line)
            if item[1] == "end":
                return body
            body.append(item)


def _space_for(doc_space: Space, factor: Optional[str]) -> Space:
    if factor is None:
        return doc_space
    if factor == "omega":
        return omega_factor_space(doc_space)
    if factor == "prizes":
        return prizes_factor_space(doc_space)
    raise InputError(f"unknown factor {factor!r}")


def _factor_of(doc_space: Space, space: Space) -> Optional[str]:
    if space == doc_space:
        return None
    if space == omega_factor_space(doc_space):
        return "omega"
    if space == prizes_factor_space(doc_space):
        return "prizes"
    raise InputError("object lives on a space foreign to this document")


def parse_document(text: str) -> ProblemDocument:
    lines = _Lines(text)
    first = lines.next_content()
    if first is None or first[1] != "space":
        raise ParseError("document must open with a 'space' block", 1)
    body = lines.body_until_end(first[0])
    omega = prizes = None
    worst = None
    for ln, content in body:
        tokens = content.split()
        if tokens[0] == "omega":
            omega = tuple(tokens[1:])
        elif tokens[0] == "prizes":
            prizes = tuple(tokens[1:])
        elif tokens[0] == "worst":
            if len(tokens) != 2:
                raise ParseError("worst takes exactly one label", ln)
            worst = tokens[1]
        else:
            raise ParseError(f"unknown space field {tokens[0]!r}", ln)
    if omega is None or prizes is None:
        raise ParseError("space block needs 'omega' and 'prizes'", first[0])
    doc = ProblemDocument(Space(omega, prizes, worst))

    while True:
        item = lines.next_content()
        if item is None:
            return doc
        ln, content = item
        tokens = content.split()
        kind = tokens[0]
        if kind == "gamble":
            _parse_gamble(doc, lines, ln, tokens)
        elif kind == "lottery":
            _parse_lottery(doc, lines, ln, tokens)
        elif kind == "credal":
            _parse_credal(doc, lines, ln, tokens)
        elif kind == "desirset":
            _parse_desirset(doc, ln, tokens)
        elif kind == "relation":
            _parse_relation(doc, lines, ln, tokens)
        elif kind == "event":
            _parse_event(doc, lines, ln, tokens)
        elif kind == "space":
            raise ParseError("only one space block is allowed", ln)
        else:
            raise ParseError(f"unknown block kind {kind!r}", ln)


def _declare(doc: ProblemDocument, kind: str, name: str, ln: int):
    if not _NAME.match(name):
        raise ParseError(f"bad name {name!r}", ln)
    table = {
        "gamble": doc.gambles,
        "lottery": doc.lotteries,
        "credal": doc.credals,
        "desirset": doc.desirsets,
        "relation": doc.relations,
        "event": doc.events,
    }[kind]
    if name in table:
        raise ParseError(f"duplicate {kind} name {name!r}", ln)
    doc.order.append((kind, name))


def _parse_factor_suffix(tokens: list[str], ln: int) -> Optional[str]:
    if len(tokens) == 2:
        return None
    if len(tokens) == 4 and tokens[2] == "on" and tokens[3] in ("omega", "prizes"):
        return tokens[3]
    raise ParseError("expected 'NAME' or 'NAME on omega|prizes'", ln)


def _read_table(lines: _Lines, ln: int, space: Space) -> Gamble:
    body = lines.body_until_end(ln)
    if len(body) != space.n_states:
        raise ParseError(
            f"table needs {space.n_states} row(s), found {len(body)}", ln
        )
    rows = []
    for row_ln, content in body:
        tokens = content.split()
        if len(tokens) != space.n_prizes:
            raise ParseError(
                f"row needs {space.n_prizes} entries, found {len(tokens)}", row_ln
            )
        rows.append([_parse_number(t, row_ln, content) for t in tokens])
    return Gamble.of(space, rows)


def _parse_gamble(doc, lines, ln, tokens):
    factor = _parse_factor_suffix(tokens, ln)
    name = tokens[1]
    _declare(doc, "gamble", name, ln)
    doc.gambles[name] = _read_table(lines, ln, _space_for(doc.space, factor))


def _parse_lottery(doc, lines, ln, tokens):
    bare = False
    if len(tokens) == 3 and tokens[2] == "bare":
        bare = True
    elif len(tokens) != 2:
        raise ParseError("expected 'lottery NAME [bare]'", ln)
    name = tokens[1]
    _declare(doc, "lottery", name, ln)
    width = doc.space.n_prizes + (0 if bare else 1)
    body = lines.body_until_end(ln)
    if len(body) != doc.space.n_states:
        raise ParseError(
            f"lottery needs {doc.space.n_states} row(s), found {len(body)}", ln
        )
    rows = []
    for row_ln, content in body:
        ts = content.split()
        if len(ts) != width:
            raise ParseError(
                f"lottery row needs {width} entries, found {len(ts)}", row_ln
            )
        rows.append([_parse_number(t, row_ln, content) for t in ts])
    doc.lotteries[name] = HorseLottery.of(doc.space, rows, includes_worst=not bare)


def _parse_credal(doc, lines, ln, tokens):
    factor = _parse_factor_suffix(tokens, ln)
    name = tokens[1]
    _declare(doc, "credal", name, ln)
    space = _space_for(doc.space, factor)
    body = lines.body_until_end(ln)
    constraints = []
    for row_ln, content in body:
        ts = content.split()
        if ts[0] != "constraint":
            raise ParseError("credal blocks hold 'constraint' lines", row_ln)
        vals = ts[1:]
        if len(vals) != space.n_cells:
            raise ParseError(
                f"constraint needs {space.n_cells} entries, found {len(vals)}",
                row_ln,
            )
        flat = [_parse_number(t, row_ln, content) for t in vals]
        rows = [
            flat[i * space.n_prizes : (i + 1) * space.n_prizes]
            for i in range(space.n_states)
        ]
        constraints.append(Gamble.of(space, rows))
    doc.credals[name] = CredalSet.from_constraints(space, tuple(constraints))


def _parse_desirset(doc, ln, tokens):
    if len(tokens) < 3:
        raise ParseError("expected 'desirset NAME KIND ...'", ln)
    name, kind = tokens[1], tokens[2]
    _declare(doc, "desirset", name, ln)
    refs = tuple(tokens[3:])
    if kind == "vacuous":
        if not refs:
            dset = DesirSet.vacuous(doc.space)
        elif len(refs) == 2 and refs[0] == "on":
            dset = DesirSet.vacuous(_space_for(doc.space, refs[1]))
        else:
            raise ParseError("expected 'vacuous' or 'vacuous on omega|prizes'", ln)
    elif kind == "fg":
        gens = [doc.lookup("gamble", r) for r in refs]
        spaces = {g.space for g in gens}
        if len(spaces) > 1:
            raise ParseError("generators live on different spaces", ln)
        dset = DesirSet.from_generators(
            spaces.pop() if spaces else doc.space, gens
        )
    elif kind == "strict":
        if len(refs) != 1:
            raise ParseError("strict desirsets take one credal reference", ln)
        dset = DesirSet.strict(doc.lookup("credal", refs[0]))
    elif kind == "augmented":
        if len(refs) < 2:
            raise ParseError(
                "augmented desirsets take a credal and border gamble names", ln
            )
        credal = doc.lookup("credal", refs[0])
        borders = [doc.lookup("gamble", r) for r in refs[1:]]
        dset = DesirSet.augmented(credal, borders)
    else:
        raise ParseError(f"unknown desirset kind {kind!r}", ln)
    doc.desirsets[name] = dset
    doc.desir_decls[name] = DesirDecl(name, kind, refs)


def _parse_relation(doc, lines, ln, tokens):
    bare = False
    if len(tokens) == 3 and tokens[2] == "bare":
        bare = True
    elif len(tokens) != 2:
        raise ParseError("expected 'relation NAME [bare]'", ln)
    name = tokens[1]
    _declare(doc, "relation", name, ln)
    body = lines.body_until_end(ln)
    pairs = []
    pair_names = []
    for row_ln, content in body:
        ts = content.split()
        if ts[0] != "pair" or len(ts) != 3:
            raise ParseError("relation blocks hold 'pair P Q' lines", row_ln)
        p = doc.lookup("lottery", ts[1])
        q = doc.lookup("lottery", ts[2])
        pairs.append((p, q))
        pair_names.append((ts[1], ts[2]))
    doc.relations[name] = PreferenceRelation.of(doc.space, pairs, bare=bare)
    doc.relation_pairs[name] = tuple(pair_names)


def _parse_event(doc, lines, ln, tokens):
    if len(tokens) != 2:
        raise ParseError("expected 'event NAME'", ln)
    name = tokens[1]
    _declare(doc, "event", name, ln)
    body = lines.body_until_end(ln)
    if len(body) != 1:
        raise ParseError("event blocks hold one 'states' or 'cells' line", ln)
    row_ln, content = body[0]
    ts = content.split()
    if ts[0] == "states":
        doc.events[name] = EventSet.from_states(doc.space, ts[1:])
    elif ts[0] == "cells":
        cells = []
        for t in ts[1:]:
            if ":" not in t:
                raise ParseError(f"cells are written state:prize, got {t!r}", row_ln)
            s, p = t.split(":", 1)
            cells.append((doc.space.state_index(s), doc.space.prize_index(p)))
        doc.events[name] = EventSet(doc.space, tuple(cells))
    else:
        raise ParseError("event blocks hold 'states' or 'cells'", row_ln)


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def emit_document(doc: ProblemDocument) -> str:
    out = ["space"]
    out.append("omega " + " ".join(doc.space.omega))
    out.append("prizes " + " ".join(doc.space.prizes))
    if doc.space.worst is not None:
        out.append("worst " + doc.space.worst)
    out.append("end")
    for kind, name in doc.order:
        out.append("")
        if kind == "gamble":
            g = doc.gambles[name]
            factor = _factor_of(doc.space, g.space)
            head = f"gamble {name}" + (f" on {factor}" if factor else "")
            out.append(head)
            for row in g.values:
                out.append(" ".join(doc_num(v) for v in row))
            out.append("end")
        elif kind == "lottery":
            lot = doc.lotteries[name]
            head = f"lottery {name}" + ("" if lot.includes_worst else " bare")
            out.append(head)
            for row in lot.masses:
                out.append(" ".join(doc_num(v) for v in row))
            out.append("end")
        elif kind == "credal":
            cs = doc.credals[name]
            factor = _factor_of(doc.space, cs.space)
            head = f"credal {name}" + (f" on {factor}" if factor else "")
            out.append(head)
            for g in cs.constraints or ():
                out.append("constraint " + " ".join(doc_num(v) for v in g.flat()))
            out.append("end")
        elif kind == "desirset":
            decl = doc.desir_decls[name]
            refs = (" " + " ".join(decl.refs)) if decl.refs else ""
            out.append(f"desirset {name} {decl.kind}{refs}")
        elif kind == "relation":
            rel = doc.relations[name]
            head = f"relation {name}" + (" bare" if rel.bare else "")
            out.append(head)
            for pn, qn in doc.relation_pairs[name]:
                out.append(f"pair {pn} {qn}")
            out.append("end")
        elif kind == "event":
            ev = doc.events[name]
            out.append(f"event {name}")
            if ev.is_state_cylinder():
                labels = " ".join(doc.space.omega[i] for i in ev.states())
                out.append("states " + labels)
            else:
                cells = " ".join(
                    f"{doc.space.omega[i]}:{doc.space.prizes[j]}" for i, j in ev.cells
                )
                out.append("cells " + cells)
            out.append("end")
    return "\n".join(out) + "\n"
