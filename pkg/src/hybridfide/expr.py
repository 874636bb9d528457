"""A small expression language for the coefficient functions l, g and f.

Grammar, lowest precedence first::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          # right-associative
    atom    := NUMBER | 't' | 's' | 'e' | 'pi'
             | FUNC '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus, so ``-t^2`` is ``-(t^2)`` and
``2^3^2`` is ``2^(3^2)``.  Juxtaposition is not multiplication: write
``2*t``, not ``2t``.  Functions: exp, sin, cos, tan, log, sqrt, abs.

Parsed trees are immutable and callable::

    >>> f = parse("exp(t) - (t/4)*(exp(2)+1)")
    >>> f(0.0)
    1.0
"""

import math
import re
from dataclasses import dataclass

import numpy as np

VARIABLES = ("t", "s")
CONSTANTS = {"e": math.e, "pi": math.pi}
FUNCTIONS = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}


class ExprError(ValueError):
    pass


class ExprSyntaxError(ExprError):
    """Malformed source; ``offset`` is the byte position of the problem."""

    def __init__(self, message, src, offset):
        self.src = src
        self.offset = offset
        super().__init__(f"{message} at offset {offset}: {src!r}")


class EvaluationError(ExprError, ArithmeticError):
    """Non-finite result from finite inputs; ``binding`` names the point."""

    def __init__(self, message, binding):
        self.binding = binding
        where = ", ".join(f"{k}={v!r}" for k, v in binding.items())
        super().__init__(f"{message} at {where}")


class Expr:
    """Base node.  Subclasses are frozen dataclasses."""

    def __call__(self, t, s=None):
        return evaluate(self, t, s)

    def __str__(self):
        return to_source(self)

    @property
    def variables(self):
        return frozenset(_collect_vars(self))


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Const(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr


def _collect_vars(node):
    if isinstance(node, Var):
        yield node.name
    elif isinstance(node, Neg):
        yield from _collect_vars(node.operand)
    elif isinstance(node, BinOp):
        yield from _collect_vars(node.left)
        yield from _collect_vars(node.right)
    elif isinstance(node, Call):
        yield from _collect_vars(node.arg)


# -- tokenizer -------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
""", re.VERBOSE)


def _tokenize(src):
    pos = 0
    tokens = []
    while pos < len(src):
        match = _TOKEN.match(src, pos)
        if match is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", src, _byte(src, pos))
        kind = match.lastgroup
        if kind != "ws":
            tokens.append((kind, match.group(), pos))
        pos = match.end()
    tokens.append(("end", "", len(src)))
    return tokens


def _byte(src, pos):
    return len(src[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, src, variables):
        self.src = src
        self.variables = variables
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message, pos=None):
        pos = self.tok[2] if pos is None else pos
        return ExprSyntaxError(message, self.src, _byte(self.src, pos))

    def accept(self, text):
        if self.tok[0] == "op" and self.tok[1] == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok[1] or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def parse(self):
        if self.tok[0] == "end":
            raise self.error("empty expression")
        node = self.expr()
        if self.tok[0] != "end":
            raise self.error(f"unexpected {self.tok[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.tok[1]
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            op = self.tok[1]
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, text, pos = self.tok
        if kind == "num":
            self.i += 1
            return Num(float(text))
        if kind == "name":
            self.i += 1
            if text in FUNCTIONS:
                if not self.accept("("):
                    raise self.error(f"function {text!r} needs a parenthesized argument")
                arg = self.expr()
                if self.tok[1] == ",":
                    raise self.error(f"{text}() takes exactly one argument")
                self.expect(")")
                return Call(text, arg)
            if text in self.variables:
                return Var(text)
            if text in CONSTANTS:
                return Const(text)
            if text in VARIABLES:
                raise self.error(f"variable {text!r} is not allowed here", pos)
            raise self.error(f"unknown identifier {text!r}", pos)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        found = text or "end of input"
        raise self.error(f"unexpected {found!r}")


def parse(src, variables=VARIABLES):
    """Parse ``src`` into an expression tree.

    ``variables`` restricts which of ``t``/``s`` may appear; one-variable
    functions such as ``l`` and ``f`` are parsed with ``variables=("t",)``.
    """
    if not isinstance(src, str):
        raise TypeError(f"expression source must be str, got {type(src).__name__}")
    if not src.strip():
        raise ExprSyntaxError("empty expression", src, 0)
    return _Parser(src, tuple(variables)).parse()


# -- evaluation ------------------------------------------------------------

def evaluate(node, t, s=None):
    """Evaluate elementwise in IEEE double precision.

    ``t`` and ``s`` may be scalars or broadcastable arrays.  Scalar inputs
    give a Python float.
    """
    if s is None and "s" in node.variables:
        raise ExprError("expression references s but no s value was supplied")
    t_arr = np.asarray(t, dtype=float)
    s_arr = None if s is None else np.asarray(s, dtype=float)
    env = {"t": t_arr, "s": s_arr}
    with np.errstate(all="ignore"):
        out = _eval(node, env)
    shape = np.broadcast_shapes(t_arr.shape, () if s_arr is None else s_arr.shape)
    out = np.broadcast_to(out, shape)
    if out.ndim == 0:
        return float(out)
    return np.array(out)


def _check(result, operands, what, env):
    result = np.asarray(result, dtype=float)
    bad = ~np.isfinite(result)
    if not bad.any():
        return result
    for operand in operands:
        bad = bad & np.isfinite(operand)
    if bad.any():
        raise EvaluationError(f"{what} is undefined", _binding(bad, env))
    return result


def _binding(mask, env):
    arrays = [env["t"]] + ([env["s"]] if env["s"] is not None else [])
    shape = np.broadcast_shapes(mask.shape, *(a.shape for a in arrays))
    pos = np.unravel_index(np.flatnonzero(np.broadcast_to(mask, shape))[0], shape)
    binding = {"t": float(np.broadcast_to(env["t"], shape)[pos])}
    if env["s"] is not None:
        binding["s"] = float(np.broadcast_to(env["s"], shape)[pos])
    return binding


def _eval(node, env):
    if isinstance(node, Num):
        return np.float64(node.value)
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Const):
        return np.float64(CONSTANTS[node.name])
    if isinstance(node, Neg):
        return -_eval(node.operand, env)
    if isinstance(node, Call):
        arg = _eval(node.arg, env)
        return _check(FUNCTIONS[node.func](arg), [arg], f"{node.func}()", env)
    if isinstance(node, BinOp):
        a = _eval(node.left, env)
        b = _eval(node.right, env)
        if node.op == "+":
            res = a + b
        elif node.op == "-":
            res = a - b
        elif node.op == "*":
            res = a * b
        elif node.op == "/":
            res = a / b
        else:
            res = np.power(a, b)
        return _check(res, [a, b], f"operator {node.op!r}", env)
    raise TypeError(f"not an expression node: {node!r}")


# -- printing --------------------------------------------------------------

def to_source(node):
    """Fully parenthesized source text that parses back to the same tree."""
    if isinstance(node, Num):
        text = repr(float(node.value))
        return text if node.value >= 0 else f"({text})"
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    raise TypeError(f"not an expression node: {node!r}")
