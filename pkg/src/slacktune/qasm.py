"""OpenQASM 2 subset: parse benchmark files in, serialize circuits out.

Supported grammar: the ``OPENQASM 2.0;`` header, an ignored qelib1 include,
one qreg (plus an optional creg), and statements over
x, y, z, h, s, sdg, sx, sxdg, rz(expr), cx, barrier, measure, and the
nonstandard timing extension ``delay[n] q[i];`` (n in dt units).  Angle
expressions support pi, rational multiples, and decimal literals.

Every parse failure is a QasmError carrying a 1-based SourceSpan; arbitrary
byte input never raises anything else.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .ir import Circuit, CircuitError, GateKind, Instruction


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"


class QasmError(ValueError):
    """Structured parse error with a source location."""

    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


_GATE_KINDS = {
    "x": GateKind.X, "y": GateKind.Y, "z": GateKind.Z, "h": GateKind.H,
    "s": GateKind.S, "sdg": GateKind.SDG, "sx": GateKind.SX, "sxdg": GateKind.SXDG,
}

_KEYWORDS = {"OPENQASM", "include", "qreg", "creg", "rz", "cx", "barrier",
             "delay", "measure", "pi", *_GATE_KINDS}


@dataclass(frozen=True)
class _Token:
    kind: str          # ident | number | string | symbol | eof
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        span = SourceSpan(line, col)
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], span))
            col += j - i
            i = j
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            tokens.append(_Token("number", text[i:j], span))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                raise QasmError("unterminated string literal", span)
            tokens.append(_Token("string", text[i + 1:j], span))
            col += j - i + 1
            i = j + 1
            continue
        if text.startswith("->", i):
            tokens.append(_Token("symbol", "->", span))
            i += 2
            col += 2
            continue
        if ch in ";,()[]*/+-":
            tokens.append(_Token("symbol", ch, span))
            i += 1
            col += 1
            continue
        raise QasmError(f"unexpected character {ch!r}", span)
    tokens.append(_Token("eof", "", SourceSpan(line, col)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            raise QasmError(f"expected {want!r}, found {tok.text!r}", tok.span)
        return tok

    # --- expression grammar: term (("*"|"/") term)* with leading sign;
    #     terms are pi, numbers, or parenthesised subexpressions.
    def parse_expr(self) -> float:
        value = self.parse_term()
        while self.peek().text in {"+", "-"} and self.peek().kind == "symbol":
            op = self.next().text
            rhs = self.parse_term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term(self) -> float:
        value = self.parse_factor()
        while self.peek().text in {"*", "/"} and self.peek().kind == "symbol":
            op = self.next().text
            rhs = self.parse_factor()
            if op == "*":
                value *= rhs
            else:
                if rhs == 0:
                    raise QasmError("division by zero in angle expression", self.peek().span)
                value /= rhs
        return value

    def parse_factor(self) -> float:
        tok = self.next()
        if tok.kind == "symbol" and tok.text == "-":
            return -self.parse_factor()
        if tok.kind == "symbol" and tok.text == "+":
            return self.parse_factor()
        if tok.kind == "symbol" and tok.text == "(":
            value = self.parse_expr()
            self.expect("symbol", ")")
            return value
        if tok.kind == "ident" and tok.text == "pi":
            return math.pi
        if tok.kind == "number":
            try:
                return float(tok.text)
            except ValueError:
                raise QasmError(f"malformed number {tok.text!r}", tok.span) from None
        raise QasmError(f"expected an angle expression, found {tok.text!r}", tok.span)

    def parse_int(self) -> int:
        tok = self.expect("number")
        try:
            value = int(tok.text)
        except ValueError:
            raise QasmError(f"expected an integer, found {tok.text!r}", tok.span) from None
        return value


def parse(text: str) -> Circuit:
    """Parse QASM source into a Circuit (qubit indices in declaration order)."""
    p = _Parser(_tokenize(text))

    tok = p.expect("ident", "OPENQASM")
    version = p.expect("number")
    if version.text != "2.0":
        raise QasmError(f"unsupported OPENQASM version {version.text}", version.span)
    p.expect("symbol", ";")

    qreg_name: str | None = None
    num_qubits = 0
    instructions: list[Instruction] = []

    def parse_qubit_operand() -> list[int]:
        """One operand: q[i] -> [i], bare q -> all indices (broadcast)."""
        tok = p.expect("ident")
        if qreg_name is None or tok.text != qreg_name:
            raise QasmError(f"unknown register {tok.text!r}", tok.span)
        if p.peek().text == "[":
            p.next()
            idx = p.parse_int()
            close = p.expect("symbol", "]")
            if idx >= num_qubits:
                raise QasmError(f"qubit index {idx} out of range", close.span)
            return [idx]
        return list(range(num_qubits))

    def skip_classical_operand() -> None:
        p.expect("ident")
        if p.peek().text == "[":
            p.next()
            p.parse_int()
            p.expect("symbol", "]")

    while p.peek().kind != "eof":
        tok = p.next()
        if tok.kind != "ident":
            raise QasmError(f"expected a statement, found {tok.text!r}", tok.span)
        name = tok.text

        if name == "include":
            target = p.expect("string")
            if target.text != "qelib1.inc":
                raise QasmError(f"unsupported include {target.text!r}", target.span)
            p.expect("symbol", ";")
        elif name == "qreg":
            if qreg_name is not None:
                raise QasmError("multiple qreg declarations are unsupported", tok.span)
            reg = p.expect("ident")
            p.expect("symbol", "[")
            size = p.parse_int()
            p.expect("symbol", "]")
            p.expect("symbol", ";")
            if size < 1:
                raise QasmError("qreg size must be positive", reg.span)
            qreg_name = reg.text
            num_qubits = size
        elif name == "creg":
            p.expect("ident")
            p.expect("symbol", "[")
            p.parse_int()
            p.expect("symbol", "]")
            p.expect("symbol", ";")
        elif name in _GATE_KINDS:
            for q in parse_qubit_operand():
                instructions.append(Instruction(_GATE_KINDS[name], (q,)))
            p.expect("symbol", ";")
        elif name == "rz":
            p.expect("symbol", "(")
            theta = p.parse_expr()
            p.expect("symbol", ")")
            for q in parse_qubit_operand():
                instructions.append(Instruction(GateKind.RZ, (q,), theta))
            p.expect("symbol", ";")
        elif name == "cx":
            ctl = parse_qubit_operand()
            p.expect("symbol", ",")
            tgt = parse_qubit_operand()
            if len(ctl) != 1 or len(tgt) != 1:
                raise QasmError("cx requires indexed operands", tok.span)
            try:
                instructions.append(Instruction(GateKind.CX, (ctl[0], tgt[0])))
            except CircuitError as exc:
                raise QasmError(str(exc), tok.span) from None
            p.expect("symbol", ";")
        elif name == "delay":
            p.expect("symbol", "[")
            dur = p.parse_int()
            p.expect("symbol", "]")
            for q in parse_qubit_operand():
                instructions.append(Instruction(GateKind.DELAY, (q,), dur))
            p.expect("symbol", ";")
        elif name == "barrier":
            qubits = parse_qubit_operand()
            while p.peek().text == ",":
                p.next()
                qubits.extend(parse_qubit_operand())
            for q in qubits:
                instructions.append(Instruction(GateKind.BARRIER, (q,)))
            p.expect("symbol", ";")
        elif name == "measure":
            qubits = parse_qubit_operand()
            if p.peek().text == "->":
                p.next()
                skip_classical_operand()   # classical mapping is ignored
            for q in qubits:
                instructions.append(Instruction(GateKind.MEASURE, (q,)))
            p.expect("symbol", ";")
        else:
            raise QasmError(f"unsupported gate {name!r}", tok.span)

    if qreg_name is None:
        raise QasmError("missing qreg declaration", p.peek().span)
    try:
        return Circuit(num_qubits, tuple(instructions))
    except CircuitError as exc:
        raise QasmError(str(exc), p.peek().span) from None


def serialize(c: Circuit) -> str:
    """Emit the subset grammar; parse(serialize(c)) reproduces c exactly."""
    lines = ["OPENQASM 2.0;", f"qreg q[{c.num_qubits}];"]
    if c.has_measurements:
        lines.append(f"creg c[{c.num_qubits}];")
    for ins in c.instructions:
        kind = ins.kind
        if kind is GateKind.RZ:
            lines.append(f"rz({ins.param:.17g}) q[{ins.qubits[0]}];")
        elif kind is GateKind.CX:
            lines.append(f"cx q[{ins.qubits[0]}],q[{ins.qubits[1]}];")
        elif kind is GateKind.DELAY:
            lines.append(f"delay[{int(ins.param)}] q[{ins.qubits[0]}];")
        elif kind is GateKind.MEASURE:
            q = ins.qubits[0]
            lines.append(f"measure q[{q}] -> c[{q}];")
        elif kind is GateKind.BARRIER:
            lines.append(f"barrier q[{ins.qubits[0]}];")
        else:
            lines.append(f"{kind.value} q[{ins.qubits[0]}];")
    return "\n".join(lines) + "\n"


def load(path) -> Circuit:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def save(c: Circuit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(c))
