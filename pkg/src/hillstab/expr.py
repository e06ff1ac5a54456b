"""Small symbolic expression trees for piecewise-analytic coefficients.

The grammar is deliberately tiny: floating literals, ``x`` (and ``u`` for
nonlinear right-hand sides), ``pi``, ``+ - * / ^``, ``sin``, ``cos`` and
parentheses.  Trees support vectorized evaluation, exact differentiation
(needed to build coefficients of the form -u''/u from a closed-form u),
substitution of the variable by another expression, and round-trip
printing/parsing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError

MAX_DEPTH = 64


class Expression:
    """Base node.  Concrete nodes are the dataclasses below."""

    def eval(self, **env):
        raise NotImplementedError

    def diff(self, var: str = "x") -> "Expression":
        raise NotImplementedError

    def subs(self, var: str, repl: "Expression") -> "Expression":
        raise NotImplementedError

    def depth(self) -> int:
        raise NotImplementedError

    def __call__(self, **env):
        return self.eval(**env)

    def __str__(self) -> str:
        return to_string(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({to_string(self)!r})"


@dataclass(frozen=True, repr=False)
class Const(Expression):
    value: float

    def eval(self, **env):
        return self.value

    def diff(self, var="x"):
        return Const(0.0)

    def subs(self, var, repl):
        return self

    def depth(self):
        return 1


@dataclass(frozen=True, repr=False)
class Var(Expression):
    name: str = "x"

    def eval(self, **env):
        try:
            return env[self.name]
        except KeyError:
            raise ParseError(f"unbound variable {self.name!r}") from None

    def diff(self, var="x"):
        return Const(1.0 if self.name == var else 0.0)

    def subs(self, var, repl):
        return repl if self.name == var else self

    def depth(self):
        return 1


@dataclass(frozen=True, repr=False)
class _Binary(Expression):
    left: Expression
    right: Expression

    def depth(self):
        return 1 + max(self.left.depth(), self.right.depth())


class Add(_Binary):
    def eval(self, **env):
        return self.left.eval(**env) + self.right.eval(**env)

    def diff(self, var="x"):
        return add(self.left.diff(var), self.right.diff(var))

    def subs(self, var, repl):
        return add(self.left.subs(var, repl), self.right.subs(var, repl))


class Sub(_Binary):
    def eval(self, **env):
        return self.left.eval(**env) - self.right.eval(**env)

    def diff(self, var="x"):
        return sub(self.left.diff(var), self.right.diff(var))

    def subs(self, var, repl):
        return sub(self.left.subs(var, repl), self.right.subs(var, repl))


class Mul(_Binary):
    def eval(self, **env):
        return self.left.eval(**env) * self.right.eval(**env)

    def diff(self, var="x"):
        return add(mul(self.left.diff(var), self.right),
                   mul(self.left, self.right.diff(var)))

    def subs(self, var, repl):
        return mul(self.left.subs(var, repl), self.right.subs(var, repl))


class Div(_Binary):
    def eval(self, **env):
        num = self.left.eval(**env)
        den = self.right.eval(**env)
        with np.errstate(divide="ignore", invalid="ignore"):
            return num / den

    def diff(self, var="x"):
        # (f/g)' = (f'g - fg') / g^2
        num = sub(mul(self.left.diff(var), self.right),
                  mul(self.left, self.right.diff(var)))
        return Div(num, Pow(self.right, 2))

    def subs(self, var, repl):
        return Div(self.left.subs(var, repl), self.right.subs(var, repl))


@dataclass(frozen=True, repr=False)
class _Unary(Expression):
    arg: Expression

    def depth(self):
        return 1 + self.arg.depth()


class Neg(_Unary):
    def eval(self, **env):
        return -self.arg.eval(**env)

    def diff(self, var="x"):
        return Neg(self.arg.diff(var))

    def subs(self, var, repl):
        return Neg(self.arg.subs(var, repl))


class Sin(_Unary):
    def eval(self, **env):
        return np.sin(self.arg.eval(**env))

    def diff(self, var="x"):
        return mul(Cos(self.arg), self.arg.diff(var))

    def subs(self, var, repl):
        return Sin(self.arg.subs(var, repl))


class Cos(_Unary):
    def eval(self, **env):
        return np.cos(self.arg.eval(**env))

    def diff(self, var="x"):
        return mul(Neg(Sin(self.arg)), self.arg.diff(var))

    def subs(self, var, repl):
        return Cos(self.arg.subs(var, repl))


class Clamp(_Unary):
    """max(arg, 0); used for the positive part of a coefficient."""

    def eval(self, **env):
        return np.maximum(self.arg.eval(**env), 0.0)

    def diff(self, var="x"):
        raise ParseError("clamp node is not differentiable")

    def subs(self, var, repl):
        return Clamp(self.arg.subs(var, repl))


@dataclass(frozen=True, repr=False)
class Pow(Expression):
    base: Expression
    exponent: int

    def eval(self, **env):
        b = self.base.eval(**env)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.power(b, self.exponent) if self.exponent >= 0 else \
                1.0 / np.power(b, -self.exponent)

    def diff(self, var="x"):
        k = self.exponent
        if k == 0:
            return Const(0.0)
        return mul(mul(Const(float(k)), Pow(self.base, k - 1)),
                   self.base.diff(var))

    def subs(self, var, repl):
        return Pow(self.base.subs(var, repl), self.exponent)

    def depth(self):
        return 1 + self.base.depth()


# -- smart constructors with trivial constant folding -------------------------

def add(a: Expression, b: Expression) -> Expression:
    if isinstance(a, Const) and a.value == 0.0:
        return b
    if isinstance(b, Const) and b.value == 0.0:
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Add(a, b)


def sub(a: Expression, b: Expression) -> Expression:
    if isinstance(b, Const) and b.value == 0.0:
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    return Sub(a, b)


def mul(a: Expression, b: Expression) -> Expression:
    if isinstance(a, Const):
        if a.value == 0.0:
            return Const(0.0)
        if a.value == 1.0:
            return b
    if isinstance(b, Const):
        if b.value == 0.0:
            return Const(0.0)
        if b.value == 1.0:
            return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    return Mul(a, b)


def constant_value(e: Expression) -> float | None:
    """Value of a variable-free tree, or None if it references a variable."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return None
    if isinstance(e, _Binary):
        lv = constant_value(e.left)
        rv = constant_value(e.right)
        if lv is None or rv is None:
            return None
        return e.eval()
    if isinstance(e, (_Unary, Pow)):
        inner = e.arg if isinstance(e, _Unary) else e.base
        if constant_value(inner) is None:
            return None
        return e.eval()
    return None


def shift_var(e: Expression, offset: float, var: str = "x") -> Expression:
    """Substitute var -> var + offset."""
    if offset == 0.0:
        return e
    return e.subs(var, Add(Var(var), Const(offset)))


def reflect_var(e: Expression, center2: float, var: str = "x") -> Expression:
    """Substitute var -> center2 - var."""
    return e.subs(var, Sub(Const(center2), Var(var)))


# -- printing -----------------------------------------------------------------

def to_string(e: Expression) -> str:
    """Print in the parseable grammar (floats, x, u, pi, + - * / ^, sin, cos)."""
    if isinstance(e, Const):
        if e.value == math.pi:
            return "pi"
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Add):
        return f"({to_string(e.left)} + {to_string(e.right)})"
    if isinstance(e, Sub):
        return f"({to_string(e.left)} - {to_string(e.right)})"
    if isinstance(e, Mul):
        return f"({to_string(e.left)} * {to_string(e.right)})"
    if isinstance(e, Div):
        return f"({to_string(e.left)} / {to_string(e.right)})"
    if isinstance(e, Neg):
        return f"(-{to_string(e.arg)})"
    if isinstance(e, Sin):
        return f"sin({to_string(e.arg)})"
    if isinstance(e, Cos):
        return f"cos({to_string(e.arg)})"
    if isinstance(e, Clamp):
        return f"clamp({to_string(e.arg)})"
    if isinstance(e, Pow):
        return f"({to_string(e.base)} ^ {e.exponent})"
    raise TypeError(f"unknown node {e!r}")


# -- parsing ------------------------------------------------------------------

_FUNCTIONS = {"sin": Sin, "cos": Cos, "clamp": Clamp}


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.text = text
        self.pos = 0
        self.variables = variables

    def error(self, msg: str):
        raise ParseError(f"{msg} at position {self.pos} in {self.text!r}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def accept(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str):
        if not self.accept(ch):
            self.error(f"expected {ch!r}")

    def parse(self) -> Expression:
        e = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")
        if e.depth() > MAX_DEPTH:
            raise ParseError(f"expression deeper than {MAX_DEPTH}")
        return e

    def expr(self) -> Expression:
        e = self.term()
        while True:
            if self.accept("+"):
                e = Add(e, self.term())
            elif self.accept("-"):
                e = Sub(e, self.term())
            else:
                return e

    def term(self) -> Expression:
        e = self.factor()
        while True:
            if self.accept("*"):
                e = Mul(e, self.factor())
            elif self.accept("/"):
                e = Div(e, self.factor())
            else:
                return e

    def factor(self) -> Expression:
        e = self.unary()
        if self.accept("^"):
            e = Pow(e, self.integer())
        return e

    def unary(self) -> Expression:
        if self.accept("-"):
            return Neg(self.unary())
        return self.atom()

    def integer(self) -> int:
        self.skip_ws()
        sign = -1 if self.accept("-") else 1
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected integer exponent")
        return sign * int(self.text[start:self.pos])

    def atom(self) -> Expression:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        if ch.isdigit() or ch == ".":
            return Const(self.number())
        if ch.isalpha() or ch == "_":
            name = self.identifier()
            if name == "pi":
                return Const(math.pi)
            if name in _FUNCTIONS:
                self.expect("(")
                e = self.expr()
                self.expect(")")
                return _FUNCTIONS[name](e)
            if name in self.variables:
                return Var(name)
            self.error(f"unknown identifier {name!r}")
        self.error("expected expression")

    def identifier(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def number(self) -> float:
        self.skip_ws()
        start = self.pos
        seen_dot = seen_exp = False
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c.isdigit():
                self.pos += 1
            elif c == "." and not seen_dot and not seen_exp:
                seen_dot = True
                self.pos += 1
            elif c in "eE" and not seen_exp and self.pos > start:
                seen_exp = True
                self.pos += 1
                if self.pos < len(self.text) and self.text[self.pos] in "+-":
                    self.pos += 1
            else:
                break
        try:
            return float(self.text[start:self.pos])
        except ValueError:
            self.error("bad numeric literal")


def parse(text: str, variables: tuple[str, ...] = ("x",)) -> Expression:
    """Parse an expression string in the coefficient-file grammar."""
    return _Parser(text, variables).parse()
