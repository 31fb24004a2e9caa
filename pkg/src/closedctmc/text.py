"""The ``.ctmc`` model language, and JSON reports.

Grammar, one statement per line, ``#`` comments to end of line::

    model  IDENT
    root   IDENT                      (optional, at most once)
    state  IDENT (up | down)
    rate   IDENT = POSITIVE-FLOAT
    trans  IDENT -> IDENT : (IDENT | POSITIVE-FLOAT)

States and named rates must be declared before a transition uses them;
``root`` may name a state declared later.  A literal rate on ``A -> B`` gets
the symbol ``rA_B``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Optional

from .model import ErrorKind, Model, ModelError, State, SteadyState, Transition

GRAMMAR = """\
model  IDENT
root   IDENT                      (optional, at most once; default: first state)
state  IDENT (up | down)
rate   IDENT = POSITIVE-FLOAT
trans  IDENT -> IDENT : (IDENT | POSITIVE-FLOAT)
IDENT := [A-Za-z_][A-Za-z0-9_]*     '#' starts a comment; blank lines ignored
A literal rate on 'trans A -> B' is named rA_B in derived expressions."""


class ParseError(ModelError):
    def __init__(self, kind: ErrorKind, line: int, column: int, message: str):
        super().__init__(kind, message)
        self.line = line
        self.column = column

    def __str__(self):
        return f"{self.line}:{self.column} {self.message}"


_TOKEN = re.compile(
    r"[ \t]*(?:(?P<arrow>->)"
    r"|(?P<num>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?![A-Za-z0-9_.])"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>[:=])"
    r"|(?P<bad>\S+))")


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(line: str, lineno: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None:  # only trailing blanks remain
            break
        kind = m.lastgroup
        if kind is None:
            break
        start = m.start(kind)
        if kind == "bad":
            raise ParseError(ErrorKind.Syntax, lineno, start + 1,
                             f"unexpected text '{m.group(kind)}'")
        kind = "punct" if kind in ("arrow", "punct") else kind
        toks.append(_Tok(kind, m.group(m.lastgroup), start + 1))
        pos = m.end()
    return toks


class _Line:
    def __init__(self, toks: list[_Tok], lineno: int, end_col: int):
        self.toks = toks
        self.i = 1
        self.lineno = lineno
        self.end_col = end_col

    def error(self, kind, message, col=None):
        return ParseError(kind, self.lineno, col if col is not None else self.end_col, message)

    def next(self, kind: str, text: Optional[str] = None, what: str = "") -> _Tok:
        want = what or (repr(text) if text else kind)
        if self.i >= len(self.toks):
            raise self.error(ErrorKind.Syntax, f"expected {want} at end of line")
        tok = self.toks[self.i]
        if tok.kind != kind or (text is not None and tok.text != text):
            raise self.error(ErrorKind.Syntax, f"expected {want}, got '{tok.text}'", tok.col)
        self.i += 1
        return tok

    def any(self, *kinds: str, what: str) -> _Tok:
        if self.i >= len(self.toks):
            raise self.error(ErrorKind.Syntax, f"expected {what} at end of line")
        tok = self.toks[self.i]
        if tok.kind not in kinds:
            raise self.error(ErrorKind.Syntax, f"expected {what}, got '{tok.text}'", tok.col)
        self.i += 1
        return tok

    def done(self):
        if self.i < len(self.toks):
            tok = self.toks[self.i]
            raise self.error(ErrorKind.Syntax, f"unexpected '{tok.text}'", tok.col)


def _positive(tok: _Tok, ln: _Line) -> float:
    value = float(tok.text)
    if math.isinf(value):
        raise ln.error(ErrorKind.Syntax, f"rate '{tok.text}' is out of range", tok.col)
    if not value > 0:
        raise ln.error(ErrorKind.NonPositiveRate,
                       f"rate must be positive, got {tok.text}", tok.col)
    return value


def parse_model(text: str) -> Model:
    """Parse model source; raises :class:`ParseError` at the first problem."""
    name = None
    model_loc = (1, 1)
    root_tok = None
    states: list[State] = []
    state_loc: list[tuple[int, int]] = []
    index: dict[str, int] = {}
    rates: dict[str, tuple[float, int, int]] = {}
    trans: list[Transition] = []
    trans_loc: list[tuple[int, int]] = []
    pairs: dict[tuple[int, int], int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokenize(line, lineno)
        if not toks:
            continue
        ln = _Line(toks, lineno, len(line.rstrip()) + 1)
        head = toks[0]
        if head.kind != "ident" or head.text not in ("model", "root", "state", "rate", "trans"):
            raise ln.error(ErrorKind.Syntax, f"unknown statement '{head.text}'", head.col)
        kw = head.text
        if name is None and kw != "model":
            raise ln.error(ErrorKind.Syntax, "expected 'model' statement first", head.col)

        if kw == "model":
            if name is not None:
                raise ln.error(ErrorKind.Syntax, "duplicate 'model' statement", head.col)
            name = ln.next("ident", what="model name").text
            model_loc = (lineno, head.col)
        elif kw == "root":
            if root_tok is not None:
                raise ln.error(ErrorKind.Syntax, "duplicate 'root' statement", head.col)
            tok = ln.next("ident", what="state name")
            root_tok = (tok.text, lineno, tok.col)
        elif kw == "state":
            tok = ln.next("ident", what="state name")
            flag = ln.next("ident", what="'up' or 'down'")
            if flag.text not in ("up", "down"):
                raise ln.error(ErrorKind.Syntax, f"expected 'up' or 'down', got '{flag.text}'",
                               flag.col)
            ln.done()
            if tok.text in index:
                raise ln.error(ErrorKind.DuplicateState, f"duplicate state '{tok.text}'", tok.col)
            index[tok.text] = len(states)
            states.append(State(len(states), tok.text, flag.text == "up"))
            state_loc.append((lineno, tok.col))
            continue
        elif kw == "rate":
            tok = ln.next("ident", what="rate name")
            ln.next("punct", "=")
            num = ln.next("num", what="positive number")
            value = _positive(num, ln)
            if tok.text in rates:
                raise ln.error(ErrorKind.DuplicateRate, f"duplicate rate '{tok.text}'", tok.col)
            rates[tok.text] = (value, lineno, tok.col)
        else:
            a = ln.next("ident", what="state name")
            ln.next("punct", "->")
            b = ln.next("ident", what="state name")
            ln.next("punct", ":")
            r = ln.any("ident", "num", what="rate name or positive number")
            ln.done()
            for end in (a, b):
                if end.text not in index:
                    raise ln.error(ErrorKind.UnknownState, f"unknown state '{end.text}'", end.col)
            if a.text == b.text:
                raise ln.error(ErrorKind.SelfLoop, f"self-loop on state '{a.text}'", b.col)
            key = (index[a.text], index[b.text])
            if key in pairs:
                raise ln.error(ErrorKind.DuplicateTransition,
                               f"duplicate transition '{a.text}' -> '{b.text}' "
                               f"(first on line {pairs[key]})", a.col)
            if r.kind == "ident":
                if r.text not in rates:
                    raise ln.error(ErrorKind.UnknownRate, f"unknown rate '{r.text}'", r.col)
                sym, value = r.text, rates[r.text][0]
            else:
                value = _positive(r, ln)
                sym = f"r{a.text}_{b.text}"
                if sym in rates and rates[sym][0] != value:
                    raise ln.error(ErrorKind.DuplicateRate,
                                   f"literal rate on '{a.text}' -> '{b.text}' conflicts with "
                                   f"rate '{sym}' from line {rates[sym][1]}", r.col)
                rates.setdefault(sym, (value, lineno, r.col))
            pairs[key] = lineno
            trans.append(Transition(key[0], key[1], sym, value))
            trans_loc.append((lineno, a.col))
            continue
        ln.done()

    if name is None:
        raise ParseError(ErrorKind.Syntax, 1, 1, "missing 'model' statement")
    if not states:
        raise ParseError(ErrorKind.NoRoot, *model_loc, "model declares no states")
    root = 0
    if root_tok is not None:
        rname, rl, rc = root_tok
        if rname not in index:
            raise ParseError(ErrorKind.UnknownState, rl, rc, f"unknown state '{rname}'")
        root = index[rname]
    try:
        return Model(name, tuple(states), tuple(trans), root)
    except ModelError as exc:
        if exc.state is not None:
            loc = state_loc[exc.state]
        elif exc.transition is not None:
            loc = trans_loc[exc.transition]
        else:
            loc = model_loc
        raise ParseError(exc.kind, *loc, exc.message) from None


def serialize_model(model: Model) -> str:
    """Canonical text: header, root, states, rates by name, transitions by (src, dst)."""
    names = model.names
    out = [f"model {model.name}", f"root {names[model.root]}"]
    out += [f"state {s.name} {'up' if s.up else 'down'}" for s in model.states]
    out += [f"rate {sym} = {value!r}" for sym, value in model.rates().items()]
    out += [f"trans {names[t.src]} -> {names[t.dst]} : {t.rate}" for t in model.transitions]
    return "\n".join(out) + "\n"


def format_number(x: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    return format(float(x), ".17g")


def json_object(pairs) -> str:
    """Render ``(key, rendered_value)`` pairs as a JSON object, preserving order."""
    return "{" + ", ".join(f"{json.dumps(k)}: {v}" for k, v in pairs) + "}"


def emit_json(ss: SteadyState, model: Model) -> str:
    pi = json_object((s.name, format_number(p)) for s, p in zip(model.states, ss.pi))
    return json_object([
        ("model", json.dumps(model.name)),
        ("pi", pi),
        ("availability", format_number(ss.availability)),
        ("residual", format_number(ss.residual)),
    ])
