"""Instance, trace and proof file formats.

Instance files are line oriented::

    # comment
    bool a b
    real x y
    a ~b
    x - 2*y < 3 | ~a ; b

Declarations list Boolean atoms and theory variables. Every other line holds
one or more clauses separated by ``;``. Literals are separated by whitespace
and optionally ``|``; ``false`` is the empty clause. Boolean negation is
written ``~a``, ``-a`` or ``¬a``. A linear literal is ``expr rel number``
with ``rel`` one of ``< <= = > >= !=``.

Trace and proof files are JSON lines: a header object, then one object per
rule application or proof step. The README documents every field.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .engine import StepAccount, Trace, TraceStep
from .proofcore import Clause, ClauseSet, Literal, boolean, canonicalize, linear
from .resstar import Input, Resolution, ResStarProof, TheoryDerivation
from .theory import Mode

TRACE_FORMAT = "mcsat-trace"
PROOF_FORMAT = "resstar-proof"
VERSION = 1


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
        self.message = message
        self.line = line
        self.column = column


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<num>\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_.\[\]]*)
  | (?P<rel><=|>=|!=|<|>|=)
  | (?P<op>[-+*~|;¬()])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    column: int


def tokenize(text: str, line: int = 0) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        if m.lastgroup != "ws":
            kind = m.lastgroup if m.lastgroup != "op" else m.group()
            out.append(Token(kind, m.group(), pos + 1))
        pos = m.end()
    return out


def _number(tok: Token, line: int) -> Fraction:
    try:
        return Fraction(tok.text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"malformed number {tok.text!r}", line, tok.column) from None


class _LiteralParser:
    """Recursive-descent parser for literal sequences.

    ``bools``/``reals`` restrict identifiers to declared names; ``None``
    means any identifier not followed by a linear operator is Boolean.
    """

    def __init__(self, tokens: list[Token], line: int, bools: set[str] | None, reals: set[str] | None):
        self.toks = tokens
        self.i = 0
        self.line = line
        self.bools = bools
        self.reals = reals

    def peek(self, offset: int = 0) -> Token | None:
        j = self.i + offset
        return self.toks[j] if j < len(self.toks) else None

    def error(self, message: str, tok: Token | None = None):
        col = tok.column if tok else (self.toks[-1].column + len(self.toks[-1].text) if self.toks else 1)
        raise ParseError(message, self.line, col)

    def take(self) -> Token:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of line")
        self.i += 1
        return tok

    def is_bool(self, name: str, tok: Token) -> bool:
        if self.bools is None:
            return True
        if name in self.bools:
            return True
        if self.reals is not None and name in self.reals:
            return False
        self.error(f"undeclared atom {name!r}", tok)

    def starts_linear(self) -> bool:
        """Whether the literal at the cursor is a linear constraint."""
        tok = self.peek()
        if tok is None:
            return False
        if tok.kind in ("num", "+"):
            return True
        j = 1 if tok.kind in ("-",) else 0
        ident = self.peek(j)
        if ident is None:
            return False
        if ident.kind == "num":
            return True
        if ident.kind != "ident":
            return False
        if self.bools is not None:
            if ident.text in self.bools:
                return False
            self.is_bool(ident.text, ident)
            return True
        nxt = self.peek(j + 1)
        return nxt is not None and nxt.kind in ("rel", "+", "-", "*")

    def literal(self) -> Literal:
        tok = self.peek()
        if tok.kind in ("~", "¬"):
            self.take()
            if self.peek() is not None and self.peek().kind == "(":
                self.take()
                inner = self.literal()
                close = self.take()
                if close.kind != ")":
                    self.error("expected ')'", close)
                return inner.neg()
            name = self.take()
            if name.kind != "ident":
                self.error("expected an atom name after negation", name)
            if not self.is_bool(name.text, name):
                self.error(f"{name.text!r} is a theory variable, not a Boolean atom", name)
            return boolean(name.text, False)
        if self.starts_linear():
            return self.linear()
        if tok.kind == "-":
            self.take()
            name = self.take()
            self.is_bool(name.text, name)
            return boolean(name.text, False)
        if tok.kind == "ident":
            self.take()
            self.is_bool(tok.text, tok)
            return boolean(tok.text)
        self.error(f"unexpected {tok.text!r}", tok)

    def linear(self) -> Literal:
        coeffs: list[tuple[str, Fraction]] = []
        start = self.peek()
        while True:
            sign = Fraction(1)
            while self.peek() is not None and self.peek().kind in ("+", "-"):
                if self.take().kind == "-":
                    sign = -sign
            coeff = Fraction(1)
            tok = self.take()
            if tok.kind == "num":
                coeff = _number(tok, self.line)
                star = self.take()
                if star.kind != "*":
                    self.error("expected '*' after coefficient", star)
                tok = self.take()
            if tok.kind != "ident":
                self.error(f"expected a variable, got {tok.text!r}", tok)
            if self.reals is not None and tok.text not in self.reals:
                if self.bools is not None and tok.text in self.bools:
                    self.error(f"Boolean atom {tok.text!r} used as a theory variable", tok)
                self.error(f"undeclared atom {tok.text!r}", tok)
            coeffs.append((tok.text, sign * coeff))
            nxt = self.peek()
            if nxt is None:
                self.error("expected a relation")
            if nxt.kind == "rel":
                break
            if nxt.kind not in ("+", "-"):
                self.error(f"unexpected {nxt.text!r} in linear expression", nxt)
        rel = self.take().text
        neg = False
        while self.peek() is not None and self.peek().kind in ("-", "+"):
            neg ^= self.take().kind == "-"
        tok = self.take()
        if tok.kind != "num":
            self.error(f"malformed constant {tok.text!r}", tok)
        bound = _number(tok, self.line)
        if self.peek() is not None and self.peek().kind in ("*", "num"):
            self.error("malformed coefficient", self.peek())
        try:
            return linear(coeffs, rel, -bound if neg else bound)
        except ValueError as exc:
            raise ParseError(str(exc), self.line, start.column) from None


def parse_literal(text: str) -> Literal:
    """Parse a single literal as written in trace and proof files."""
    toks = tokenize(text)
    p = _LiteralParser(toks, 0, None, None)
    if not toks:
        raise ParseError("empty literal")
    lit = p.literal()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek().text!r} in literal {text!r}")
    return lit


def parse_clause_literals(texts: Iterable[str]) -> Clause:
    return canonicalize(parse_literal(t) for t in texts)


@dataclass
class Instance:
    clauses: ClauseSet
    bools: list[str]
    reals: list[str]


def parse_instance(text: str) -> Instance:
    """Parse an instance file; clause order is kept and duplicates are merged."""
    bools: list[str] = []
    reals: list[str] = []
    clauses: list[Clause] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        words = line.split()
        if words[0] in ("bool", "real"):
            target, other = (bools, reals) if words[0] == "bool" else (reals, bools)
            for m in list(re.finditer(r"\S+", line))[1:]:
                w, col = m.group(), m.start() + 1
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_.\[\]]*", w) or w == "false":
                    raise ParseError(f"invalid name {w!r}", lineno, col)
                if w in other:
                    raise ParseError(f"{w!r} declared both bool and real", lineno, col)
                if w not in target:
                    target.append(w)
            continue
        toks = tokenize(line, lineno)
        groups: list[list[Token]] = [[]]
        for t in toks:
            if t.kind == ";":
                groups.append([])
            elif t.kind != "|":
                groups[-1].append(t)
        for group in groups:
            if not group:
                continue
            if len(group) == 1 and group[0].text == "false":
                clauses.append(Clause())
                continue
            p = _LiteralParser(group, lineno, set(bools), set(reals))
            lits = []
            while p.peek() is not None:
                lits.append(p.literal())
            clauses.append(canonicalize(lits))
    return Instance(ClauseSet(clauses), bools, reals)


def format_clause_line(clause: Clause) -> str:
    if clause.is_empty:
        return "false"
    sep = " | " if any(l.is_linear for l in clause) else " "
    return sep.join(str(l) for l in clause)


def format_instance(clauses: Iterable[Clause], comment: str = "") -> str:
    clauses = list(clauses)
    bools = sorted({l.atom.name for c in clauses for l in c if not l.is_linear})
    reals = sorted({v for c in clauses for l in c for v in l.atom.variables})
    lines = [f"# {comment}"] if comment else []
    if bools:
        lines.append("bool " + " ".join(bools))
    if reals:
        lines.append("real " + " ".join(reals))
    lines += [format_clause_line(c) for c in clauses]
    return "\n".join(lines) + "\n"


# -- JSON lines ----------------------------------------------------------------

def _clause_json(c: Clause) -> list[str]:
    return [str(l) for l in c]


def _dumps(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False)


def _account_json(acc: StepAccount) -> dict:
    return {"total": acc.total, "theory": acc.theory, "non_theory": acc.non_theory}


def dump_trace(trace: Trace) -> str:
    header = {
        "format": TRACE_FORMAT,
        "version": VERSION,
        "mode": trace.mode.value,
        "inputs": [_clause_json(c) for c in trace.inputs],
        "basis": [str(l) for l in trace.extra_basis],
    }
    lines = [_dumps(header)]
    acc = StepAccount()
    for i, s in enumerate(trace.steps):
        acc = acc.add(s.is_theory)
        rec: dict = {"step": i, "rule": s.rule}
        if s.literal is not None:
            rec["literal"] = str(s.literal)
        if s.clause is not None:
            rec["clause"] = _clause_json(s.clause)
        if s.var is not None:
            rec["var"] = s.var
        if s.value is not None:
            rec["value"] = str(Fraction(s.value))
        if s.position is not None:
            rec["position"] = s.position
        if s.basis_added:
            rec["basis_added"] = [str(l) for l in s.basis_added]
        rec["account"] = _account_json(acc)
        lines.append(_dumps(rec))
    return "\n".join(lines) + "\n"


def _records(text: str, kind: str) -> tuple[dict, list[tuple[int, dict]]]:
    lines = [(n, l) for n, l in enumerate(text.splitlines(), 1) if l.strip()]
    if not lines:
        raise ParseError(f"empty {kind} file")
    out = []
    for n, l in lines:
        try:
            out.append((n, json.loads(l)))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", n, exc.colno) from None
    header = out[0][1]
    if not isinstance(header, dict) or header.get("format") != kind:
        raise ParseError(f"not a {kind} file", out[0][0], 1)
    return header, out[1:]


def load_trace(text: str) -> Trace:
    header, recs = _records(text, TRACE_FORMAT)
    try:
        inputs = ClauseSet(parse_clause_literals(c) for c in header["inputs"])
        trace = Trace(inputs, Mode(header["mode"]),
                      tuple(parse_literal(l) for l in header.get("basis", [])))
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad trace header: {exc}", 1, 1) from None
    for n, r in recs:
        try:
            trace.steps.append(TraceStep(
                rule=r["rule"],
                literal=parse_literal(r["literal"]) if "literal" in r else None,
                clause=parse_clause_literals(r["clause"]) if "clause" in r else None,
                var=r.get("var"),
                value=Fraction(r["value"]) if "value" in r else None,
                position=r.get("position"),
                basis_added=tuple(parse_literal(l) for l in r.get("basis_added", [])),
            ))
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"bad trace record: {exc}", n, 1) from None
    return trace


def dump_proof(proof: ResStarProof) -> str:
    lines = [_dumps({"format": PROOF_FORMAT, "version": VERSION, "conclusion": proof.conclusion})]
    acc = StepAccount()
    for i, s in enumerate(proof.steps):
        if isinstance(s, Input):
            rec = {"index": i, "rule": "input", "clause": _clause_json(s.clause)}
        elif isinstance(s, Resolution):
            acc = acc.add(False)
            rec = {"index": i, "rule": "resolution", "left": s.left, "right": s.right,
                   "pivot": str(s.pivot), "clause": _clause_json(s.clause)}
        else:
            acc = acc.add(True)
            rec = {"index": i, "rule": "theory", "strength": s.strength, "clause": _clause_json(s.clause)}
        rec["account"] = _account_json(acc)
        lines.append(_dumps(rec))
    return "\n".join(lines) + "\n"


def load_proof(text: str) -> ResStarProof:
    header, recs = _records(text, PROOF_FORMAT)
    proof = ResStarProof(conclusion=header.get("conclusion"))
    for n, r in recs:
        try:
            clause = parse_clause_literals(r["clause"])
            rule = r["rule"]
            if rule == "input":
                proof.add(Input(clause))
            elif rule == "resolution":
                proof.add(Resolution(r["left"], r["right"], parse_literal(r["pivot"]), clause))
            elif rule == "theory":
                proof.add(TheoryDerivation(clause, r.get("strength", "strong")))
            else:
                raise ValueError(f"unknown rule {rule!r}")
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"bad proof record: {exc}", n, 1) from None
    return proof
