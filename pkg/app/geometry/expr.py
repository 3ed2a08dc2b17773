"""Выражения компонент кривой: AST, парсер и канонический вывод.

Грамматика (от слабых связей к сильным)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          правоассоциативно
    atom   := number | pi | e | name | func '(' expr ')' | '(' expr ')'

Поэтому ``-x^2`` читается как ``-(x^2)``, а ``2^-1`` допустимо. Неявного
умножения нет.
"""
import math
import re
from typing import Annotated, Literal, NamedTuple, Union

from pydantic import BaseModel, ConfigDict, Field

from app.core.errors import ArityError, ExprSyntaxError, UnknownIdentifier

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "atan", "asin", "acos", "sinh", "cosh")
CONSTANTS = {"pi": math.pi, "e": math.e}


# --- AST ---

class _Node(BaseModel):
    model_config = ConfigDict(frozen=True)


class Num(_Node):
    kind: Literal["num"] = "num"
    value: float


class Const(_Node):
    kind: Literal["const"] = "const"
    name: Literal["pi", "e"]


class Var(_Node):
    kind: Literal["var"] = "var"
    name: str


class Neg(_Node):
    kind: Literal["neg"] = "neg"
    operand: "Expression"


class BinOp(_Node):
    kind: Literal["bin"] = "bin"
    op: Literal["+", "-", "*", "/", "^"]
    left: "Expression"
    right: "Expression"


class Call(_Node):
    kind: Literal["call"] = "call"
    func: str
    arg: "Expression"


Expression = Annotated[Union[Num, Const, Var, Neg, BinOp, Call], Field(discriminator="kind")]

for _model in (Neg, BinOp, Call):
    _model.model_rebuild()


# --- ПАРСЕР ---

_BINARY = {"+": (1, False), "-": (1, False), "*": (2, False), "/": (2, False), "^": (4, True)}
_UNARY_PREC = 3

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^(),]))"
)


class Token(NamedTuple):
    kind: str
    text: str
    offset: int


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.lastgroup is None:
            rest = text[pos:]
            stripped = rest.lstrip()
            if not stripped:
                break
            bad = pos + len(rest) - len(stripped)
            raise ExprSyntaxError(f"unexpected character {stripped[0]!r}", _byte_offset(text, bad))
        tokens.append(Token(m.lastgroup, m.group(m.lastgroup), _byte_offset(text, m.start(m.lastgroup))))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, variable: str | None):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.variable = variable

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ExprSyntaxError("unexpected end of input", len(self.text.encode("utf-8")))
        self.pos += 1
        return tok

    def expect(self, op: str) -> Token:
        tok = self.advance()
        if tok.text != op:
            raise ExprSyntaxError(f"expected '{op}', found '{tok.text}'", tok.offset)
        return tok

    def expression(self, min_prec: int):
        lhs = self.prefix()
        while (tok := self.peek()) is not None and tok.kind == "op" and tok.text in _BINARY:
            prec, right_assoc = _BINARY[tok.text]
            if prec < min_prec:
                break
            self.advance()
            rhs = self.expression(prec if right_assoc else prec + 1)
            lhs = BinOp(op=tok.text, left=lhs, right=rhs)
        return lhs

    def prefix(self):
        tok = self.advance()
        if tok.kind == "op":
            if tok.text == "-":
                return Neg(operand=self.expression(_UNARY_PREC))
            if tok.text == "(":
                inner = self.expression(0)
                self.expect(")")
                return inner
            raise ExprSyntaxError(f"unexpected '{tok.text}'", tok.offset)

        if tok.kind == "num":
            value = float(tok.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(f"number {tok.text} overflows", tok.offset)
            return Num(value=value)

        return self.name(tok)

    def name(self, tok: Token):
        nxt = self.peek()
        if nxt is not None and nxt.text == "(":
            if tok.text not in FUNCTIONS:
                raise UnknownIdentifier(tok.text, tok.offset)
            self.advance()
            args = [self.expression(0)]
            while (sep := self.advance()).text == ",":
                args.append(self.expression(0))
            if sep.text != ")":
                raise ExprSyntaxError(f"expected ')', found '{sep.text}'", sep.offset)
            if len(args) != 1:
                raise ArityError(f"{tok.text}() takes 1 argument, got {len(args)} (at byte {tok.offset})")
            return Call(func=tok.text, arg=args[0])

        if tok.text in FUNCTIONS:
            raise ArityError(f"{tok.text} needs an argument list (at byte {tok.offset})")
        if tok.text in CONSTANTS:
            return Const(name=tok.text)
        if self.variable is None:
            self.variable = tok.text
        elif tok.text != self.variable:
            raise UnknownIdentifier(tok.text, tok.offset)
        return Var(name=tok.text)


def parse(text: str, variable: str | None = None) -> Expression:
    """Разбирает `text`. При заданном `variable` другие свободные имена
    запрещены, иначе первое свободное имя становится переменной."""
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    parser = _Parser(text, variable)
    node = parser.expression(0)
    if (tok := parser.peek()) is not None:
        raise ExprSyntaxError(f"unexpected '{tok.text}'", tok.offset)
    return node


# --- ВЫВОД ---

def _precedence(node) -> int:
    match node:
        case BinOp(op=op):
            return _BINARY[op][0]
        case Neg():
            return _UNARY_PREC
        case _:
            return 5


def format_number(value: float) -> str:
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def to_text(node) -> str:
    """Канонический текст, его разбор возвращает равное AST."""
    match node:
        case Num(value=v):
            return format_number(v)
        case Const(name=name) | Var(name=name):
            return name
        case Call(func=func, arg=arg):
            return f"{func}({to_text(arg)})"
        case Neg(operand=operand):
            inner = to_text(operand)
            return f"-({inner})" if _precedence(operand) < _UNARY_PREC else f"-{inner}"
        case BinOp(op="^", left=left, right=right):
            lhs = to_text(left)
            rhs = to_text(right)
            if _precedence(left) <= 4:
                lhs = f"({lhs})"
            if isinstance(right, BinOp) and _precedence(right) < 4:
                rhs = f"({rhs})"
            return f"{lhs}^{rhs}"
        case BinOp(op=op, left=left, right=right):
            prec = _BINARY[op][0]
            lhs = to_text(left)
            rhs = to_text(right)
            if _precedence(left) < prec:
                lhs = f"({lhs})"
            if _precedence(right) <= prec:
                rhs = f"({rhs})"
            return f"{lhs} {op} {rhs}"
    raise TypeError(f"not an expression node: {node!r}")


def free_variables(node) -> set[str]:
    match node:
        case Var(name=name):
            return {name}
        case Neg(operand=operand):
            return free_variables(operand)
        case Call(arg=arg):
            return free_variables(arg)
        case BinOp(left=left, right=right):
            return free_variables(left) | free_variables(right)
    return set()


def evaluate(node, x: float) -> float:
    """Просто значение, без производных."""
    from app.geometry.jet import eval_jet

    return eval_jet(node, x).v
