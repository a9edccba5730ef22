"""Expression — a tiny arithmetic language for right-hand sides.

Grammar (Pratt / top-down operator precedence):

    expr   := prefix (infix)*
    prefix := number | name | name '(' args ')' | '(' expr ')' | '-' expr | '+' expr
    infix  := ('+' | '-' | '*' | '/' | '^') expr

``^`` is right-associative and binds tighter than unary minus, so
``-t^2`` is ``-(t^2)``.  Variables are ``t`` and ``u``; named constants
(``pi`` plus whatever the caller injects, e.g. ``alpha``) become literals,
and any sub-tree without variables is folded at parse time, which is how
``gammaf(2-alpha)`` turns into a number.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Union

import numpy as np

from core.errors import EvaluationError, ExpressionSyntaxError, UnknownIdentifierError
from core.special import gamma

VARIABLES = frozenset({"t", "u"})
BUILTIN_CONSTANTS: dict[str, float] = {"pi": math.pi}


# ── AST ──────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]
    position: int = 0


Node = Union[Num, Var, Unary, Binary, Call]


# ── Functions ────────────────────────────────────────────────────


def _log(x: Any) -> Any:
    if np.any(np.asarray(x) <= 0):
        raise EvaluationError("log of a non-positive argument")
    return np.log(x)


def _gammaf(x: Any) -> Any:
    if np.ndim(x) == 0:
        return gamma(float(x))
    return np.array([gamma(float(v)) for v in np.ravel(x)]).reshape(np.shape(x))


def _power(base: Any, exponent: Any) -> Any:
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.power(np.asarray(base, dtype=float), exponent)
    if np.any(np.isnan(out) & ~np.isnan(np.asarray(base, dtype=float))):
        raise EvaluationError("negative base raised to a non-integer power")
    if np.any(np.isinf(out) & np.isfinite(np.asarray(base, dtype=float))):
        raise EvaluationError("zero raised to a negative power")
    return out


FUNCTIONS: dict[str, tuple[int, Callable[..., Any]]] = {
    "sin": (1, np.sin),
    "cos": (1, np.cos),
    "exp": (1, np.exp),
    "log": (1, _log),
    "abs": (1, np.abs),
    "pow": (2, _power),
    "gammaf": (1, _gammaf),
}


# ── Tokens ───────────────────────────────────────────────────────

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # num | name | op | end
    text: str
    position: int


def tokenize(src: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            offset = pos + len(src[pos:]) - len(src[pos:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character '{src[offset]}'", offset)
        kind = m.lastgroup or "op"
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(src)))
    return tokens


# ── Parser ───────────────────────────────────────────────────────

_INFIX_BP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_PREFIX_BP = 25


class _Parser:
    def __init__(self, src: str, constants: Mapping[str, float]):
        self.tokens = tokenize(src)
        self.index = 0
        self.constants = constants

    @property
    def token(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.token
        if tok.text != text or tok.kind == "end":
            found = "end of input" if tok.kind == "end" else f"'{tok.text}'"
            raise ExpressionSyntaxError(f"expected '{text}', found {found}", tok.position)
        return self.advance()

    def expression(self, rbp: int = 0) -> Node:
        left = self.prefix(self.advance())
        while self.token.kind == "op" and rbp < _INFIX_BP.get(self.token.text, 0):
            op = self.advance().text
            right_bp = _INFIX_BP[op] - 1 if op == "^" else _INFIX_BP[op]
            left = Binary(op, left, self.expression(right_bp))
        return left

    def prefix(self, tok: Token) -> Node:
        if tok.kind == "num":
            return Num(float(tok.text))
        if tok.kind == "name":
            return self.name(tok)
        if tok.text == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        if tok.text in ("-", "+") and tok.kind == "op":
            operand = self.expression(_PREFIX_BP)
            return Unary("-", operand) if tok.text == "-" else operand
        found = "end of input" if tok.kind == "end" else f"'{tok.text}'"
        raise ExpressionSyntaxError(f"unexpected {found}", tok.position)

    def name(self, tok: Token) -> Node:
        if tok.text in FUNCTIONS:
            arity, _ = FUNCTIONS[tok.text]
            self.expect("(")
            args = [self.expression()]
            while self.token.text == "," and self.token.kind == "op":
                self.advance()
                args.append(self.expression())
            self.expect(")")
            if len(args) != arity:
                raise ExpressionSyntaxError(
                    f"{tok.text}() takes {arity} argument(s), got {len(args)}", tok.position
                )
            return Call(tok.text, tuple(args), tok.position)
        if tok.text in VARIABLES:
            return Var(tok.text)
        if tok.text in self.constants:
            return Num(float(self.constants[tok.text]))
        raise UnknownIdentifierError(tok.text, tok.position)


# ── Evaluation ───────────────────────────────────────────────────

# Used when singular values are expected (derivative stacks at t = a).
_LENIENT = {"log": np.log, "pow": np.power}


def _evaluate(node: Node, env: Mapping[str, Any], strict: bool = True) -> Any:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Unary):
        return -_evaluate(node.operand, env, strict)
    if isinstance(node, Call):
        fn = FUNCTIONS[node.name][1] if strict else _LENIENT.get(node.name, FUNCTIONS[node.name][1])
        return fn(*(_evaluate(arg, env, strict) for arg in node.args))

    left = _evaluate(node.left, env, strict)
    right = _evaluate(node.right, env, strict)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        if not strict:
            return np.divide(left, right)
        if np.any(np.asarray(right) == 0):
            raise EvaluationError("division by zero")
        return left / right
    if not strict:
        return np.power(np.asarray(left, dtype=float), right)
    return _power(left, right)


def free_variables(node: Node) -> frozenset[str]:
    if isinstance(node, Var):
        return frozenset({node.name})
    if isinstance(node, Unary):
        return free_variables(node.operand)
    if isinstance(node, Binary):
        return free_variables(node.left) | free_variables(node.right)
    if isinstance(node, Call):
        return frozenset().union(*(free_variables(a) for a in node.args))
    return frozenset()


def fold_constants(node: Node) -> Node:
    """Replace every variable-free sub-tree by its value."""
    if isinstance(node, (Num, Var)):
        return node
    if isinstance(node, Unary):
        node = Unary(node.op, fold_constants(node.operand))
    elif isinstance(node, Binary):
        node = Binary(node.op, fold_constants(node.left), fold_constants(node.right))
    else:
        node = Call(node.name, tuple(fold_constants(a) for a in node.args), node.position)
    if free_variables(node):
        return node
    return Num(float(_evaluate(node, {})))


# ── Differentiation ──────────────────────────────────────────────

_ZERO, _ONE = Num(0.0), Num(1.0)


def _add(a: Node, b: Node) -> Node:
    if a == _ZERO:
        return b
    if b == _ZERO:
        return a
    return Binary("+", a, b)


def _sub(a: Node, b: Node) -> Node:
    if b == _ZERO:
        return a
    if a == _ZERO:
        return Unary("-", b)
    return Binary("-", a, b)


def _mul(a: Node, b: Node) -> Node:
    if a == _ZERO or b == _ZERO:
        return _ZERO
    if a == _ONE:
        return b
    if b == _ONE:
        return a
    return Binary("*", a, b)


def _div(a: Node, b: Node) -> Node:
    if a == _ZERO:
        return _ZERO
    return a if b == _ONE else Binary("/", a, b)


def _d_power(base: Node, exponent: Node, var: str) -> Node:
    d_base = differentiate(base, var)
    if var not in free_variables(exponent):
        lowered = Binary("-", exponent, _ONE)
        return _mul(_mul(exponent, Binary("^", base, lowered)), d_base)
    # d(b^e) = b^e (e' log b + e b'/b)
    inner = _add(
        _mul(differentiate(exponent, var), Call("log", (base,))),
        _div(_mul(exponent, d_base), base),
    )
    return _mul(Binary("^", base, exponent), inner)


def differentiate(node: Node, var: str = "t") -> Node:
    """Symbolic d/d(var) of *node*; the result is not yet constant-folded."""
    if isinstance(node, Num):
        return _ZERO
    if isinstance(node, Var):
        return _ONE if node.name == var else _ZERO
    if isinstance(node, Unary):
        d = differentiate(node.operand, var)
        return _ZERO if d == _ZERO else Unary("-", d)
    if isinstance(node, Binary):
        left, right = node.left, node.right
        if node.op == "+":
            return _add(differentiate(left, var), differentiate(right, var))
        if node.op == "-":
            return _sub(differentiate(left, var), differentiate(right, var))
        if node.op == "*":
            return _add(_mul(differentiate(left, var), right), _mul(left, differentiate(right, var)))
        if node.op == "/":
            numerator = _sub(_mul(differentiate(left, var), right), _mul(left, differentiate(right, var)))
            return _div(numerator, Binary("^", right, Num(2.0)))
        return _d_power(left, right, var)

    if var not in free_variables(node):
        return _ZERO
    if node.name == "pow":
        return _d_power(node.args[0], node.args[1], var)
    arg = node.args[0]
    d_arg = differentiate(arg, var)
    if node.name == "sin":
        outer: Node = Call("cos", (arg,))
    elif node.name == "cos":
        outer = Unary("-", Call("sin", (arg,)))
    elif node.name == "exp":
        outer = node
    elif node.name == "log":
        return _div(d_arg, arg)
    elif node.name == "abs":
        outer = Binary("/", arg, Call("abs", (arg,)))
    else:
        raise EvaluationError(f"{node.name}() of a variable cannot be differentiated")
    return _mul(outer, d_arg)


# ── Public API ───────────────────────────────────────────────────


@dataclass(frozen=True)
class Expression:
    """Parsed expression; call as ``expr(t, u)`` with floats or arrays."""

    source: str
    ast: Node

    @property
    def variables(self) -> frozenset[str]:
        return free_variables(self.ast)

    @property
    def depends_on_u(self) -> bool:
        return "u" in self.variables

    def evaluate(self, t: Any, u: Any = 0.0, strict: bool = True) -> Any:
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            value = _evaluate(self.ast, {"t": t, "u": u}, strict)
        if np.ndim(t) > 0 or np.ndim(u) > 0:
            return np.broadcast_to(np.asarray(value, dtype=float), np.broadcast(t, u).shape).copy()
        return float(value)

    def __call__(self, t: Any, u: Any = 0.0) -> Any:
        return self.evaluate(t, u)

    def derivative(self, var: str = "t") -> "Expression":
        return Expression(source=f"d/d{var}({self.source})", ast=fold_constants(differentiate(self.ast, var)))

    def derivative_stack(self, n: int) -> Callable[[Any], list[Any]]:
        """t ↦ [u'(t), ..., u^(n)(t)]; singular points give inf/nan, not errors."""
        derivs = []
        current = self
        for _ in range(n):
            current = current.derivative("t")
            derivs.append(current)

        def stack(t: Any) -> list[Any]:
            return [d.evaluate(t, strict=False) for d in derivs]

        return stack


def parse_expression(src: str, constants: Mapping[str, float] | None = None) -> Expression:
    """Parse *src*; *constants* are extra names substituted as literals."""
    if not src or not src.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    names = {**BUILTIN_CONSTANTS, **(constants or {})}
    clash = VARIABLES.intersection(names) | set(FUNCTIONS).intersection(names)
    if clash:
        raise ExpressionSyntaxError(f"constant names shadow builtins: {sorted(clash)}", 0)

    parser = _Parser(src, names)
    ast = parser.expression()
    if parser.token.kind != "end":
        raise ExpressionSyntaxError(f"unexpected '{parser.token.text}'", parser.token.position)
    return Expression(source=src, ast=fold_constants(ast))
