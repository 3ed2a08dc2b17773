"""Струи третьего порядка: значение и три первые производные.

Арифметика - усечённые ряды Тейлора, вычисление выражения на
``Jet3.variable(t0)`` даёт производные, точные до округления.
"""
import math

from app.core.errors import DomainError
from app.geometry.expr import CONSTANTS, BinOp, Call, Const, Neg, Num, Var, to_text


class Jet3:
    __slots__ = ("v", "d1", "d2", "d3")

    def __init__(self, v: float, d1: float = 0.0, d2: float = 0.0, d3: float = 0.0):
        self.v = v
        self.d1 = d1
        self.d2 = d2
        self.d3 = d3

    @classmethod
    def constant(cls, value: float) -> "Jet3":
        return cls(value)

    @classmethod
    def variable(cls, value: float) -> "Jet3":
        return cls(value, 1.0)

    def __repr__(self):
        return f"Jet3({self.v!r}, {self.d1!r}, {self.d2!r}, {self.d3!r})"

    def astuple(self) -> tuple[float, float, float, float]:
        return self.v, self.d1, self.d2, self.d3

    def is_constant(self) -> bool:
        return self.d1 == 0.0 and self.d2 == 0.0 and self.d3 == 0.0

    def is_finite(self) -> bool:
        return all(math.isfinite(x) for x in self.astuple())

    @staticmethod
    def _lift(other) -> "Jet3":
        return other if isinstance(other, Jet3) else Jet3(float(other))

    def __neg__(self):
        return Jet3(-self.v, -self.d1, -self.d2, -self.d3)

    def __add__(self, other):
        o = self._lift(other)
        return Jet3(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Jet3(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2, self.d3 - o.d3)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        # правило Лейбница
        o = self._lift(other)
        a0, a1, a2, a3 = self.astuple()
        b0, b1, b2, b3 = o.astuple()
        return Jet3(
            a0 * b0,
            a1 * b0 + a0 * b1,
            a2 * b0 + 2 * a1 * b1 + a0 * b2,
            a3 * b0 + 3 * a2 * b1 + 3 * a1 * b2 + a0 * b3,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.v == 0.0:
            raise ZeroDivisionError("jet division by zero")
        # q = self / o по порядкам из self = q * o
        b0, b1, b2, b3 = o.astuple()
        q0 = self.v / b0
        q1 = (self.d1 - q0 * b1) / b0
        q2 = (self.d2 - 2 * q1 * b1 - q0 * b2) / b0
        q3 = (self.d3 - 3 * q2 * b1 - 3 * q1 * b2 - q0 * b3) / b0
        return Jet3(q0, q1, q2, q3)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def ipow(self, n: int) -> "Jet3":
        """Целая неотрицательная степень возведением в квадрат."""
        result = Jet3(1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def compose(self, f0: float, f1: float, f2: float, f3: float) -> "Jet3":
        """Цепное правило для внешней функции с производными f0..f3 в точке self.v."""
        u1, u2, u3 = self.d1, self.d2, self.d3
        return Jet3(
            f0,
            f1 * u1,
            f2 * u1 * u1 + f1 * u2,
            f3 * u1 ** 3 + 3 * f2 * u1 * u2 + f1 * u3,
        )


# --- ЭЛЕМЕНТАРНЫЕ ФУНКЦИИ: (f, f', f'', f''') в точке x ---

class _OutsideDomain(ValueError):
    pass


def _sin(x):
    s, c = math.sin(x), math.cos(x)
    return s, c, -s, -c


def _cos(x):
    s, c = math.sin(x), math.cos(x)
    return c, -s, -c, s


def _tan(x):
    if math.cos(x) == 0.0:
        raise _OutsideDomain("tan at a pole")
    t = math.tan(x)
    sec2 = 1.0 + t * t
    return t, sec2, 2 * t * sec2, 2 * sec2 * (1 + 3 * t * t)


def _exp(x):
    e = math.exp(x)
    return e, e, e, e


def _log(x):
    if x <= 0:
        raise _OutsideDomain("log of a non-positive number")
    return math.log(x), 1 / x, -1 / x ** 2, 2 / x ** 3


def _sqrt(x):
    if x <= 0:
        raise _OutsideDomain("sqrt of a non-positive number")
    r = math.sqrt(x)
    return r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x)


def _atan(x):
    q = 1 + x * x
    return math.atan(x), 1 / q, -2 * x / q ** 2, (6 * x * x - 2) / q ** 3


def _asin(x):
    if abs(x) >= 1:
        raise _OutsideDomain("asin outside (-1, 1)")
    q = 1 - x * x
    r = math.sqrt(q)
    return math.asin(x), 1 / r, x / (q * r), (1 + 2 * x * x) / (q * q * r)


def _acos(x):
    if abs(x) >= 1:
        raise _OutsideDomain("acos outside (-1, 1)")
    _, f1, f2, f3 = _asin(x)
    return math.acos(x), -f1, -f2, -f3


def _sinh(x):
    sh, ch = math.sinh(x), math.cosh(x)
    return sh, ch, sh, ch


def _cosh(x):
    sh, ch = math.sinh(x), math.cosh(x)
    return ch, sh, ch, sh


_TABLE = {
    "sin": _sin, "cos": _cos, "tan": _tan, "exp": _exp, "log": _log, "sqrt": _sqrt,
    "atan": _atan, "asin": _asin, "acos": _acos, "sinh": _sinh, "cosh": _cosh,
}


# --- ВЫЧИСЛЕНИЕ ---

def _power(base: Jet3, expo: Jet3, node) -> Jet3:
    if expo.is_constant() and float(expo.v).is_integer() and abs(expo.v) <= 2 ** 31:
        n = int(expo.v)
        if n >= 0:
            return base.ipow(n)
        if base.v == 0.0:
            raise DomainError("zero raised to a negative power", to_text(node))
        return Jet3(1.0) / base.ipow(-n)
    if base.v <= 0.0:
        raise DomainError("non-integer power of a non-positive base", to_text(node))
    exponent = expo * base.compose(*_log(base.v))
    return exponent.compose(*_exp(exponent.v))


def _eval(node, t0: float) -> Jet3:
    match node:
        case Num(value=v):
            return Jet3(v)
        case Const(name=name):
            return Jet3(CONSTANTS[name])
        case Var():
            return Jet3.variable(t0)
        case Neg(operand=operand):
            return -_eval(operand, t0)
        case Call(func=func, arg=arg):
            inner = _eval(arg, t0)
            try:
                return inner.compose(*_TABLE[func](inner.v))
            except (_OutsideDomain, OverflowError, ValueError) as exc:
                raise DomainError(str(exc) or f"{func} outside its domain", to_text(node)) from exc
        case BinOp(op=op, left=left, right=right):
            a = _eval(left, t0)
            b = _eval(right, t0)
            match op:
                case "+":
                    return a + b
                case "-":
                    return a - b
                case "*":
                    return a * b
                case "/":
                    if b.v == 0.0:
                        raise DomainError("division by zero", to_text(node))
                    return a / b
                case "^":
                    return _power(a, b, node)
    raise TypeError(f"not an expression node: {node!r}")


def eval_jet(e, t0: float) -> Jet3:
    """Значение и три первые производные `e` в точке `t0`."""
    try:
        jet = _eval(e, float(t0))
    except OverflowError as exc:
        raise DomainError("overflow", to_text(e)) from exc
    if not jet.is_finite():
        raise DomainError("non-finite result", to_text(e))
    return jet
