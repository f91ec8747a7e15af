"""Guard expressions: tree, grammar and canonical rendering.

Guards are closed over integer constants, integer/boolean variables, the
comparisons ``< <= > >= == !=`` and the connectives ``not``, ``and``, ``or``.
Binding strength, tightest first: ``not``, comparisons, ``and``, ``or``.
"""

import operator
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Mapping, Union

import pyparsing as pp
import structlog

from .exceptions import StatechartSyntaxError, UnboundVariable

logger = structlog.get_logger(__name__)

Value = Union[int, bool]

COMPARATORS: Dict[str, Callable[[Value, Value], bool]] = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "==": operator.eq,
    "!=": operator.ne,
}

# Rendering precedence; higher binds tighter.
_PREC_OR = 1
_PREC_AND = 2
_PREC_CMP = 3
_PREC_NOT = 4
_PREC_ATOM = 5


class GuardExpr:
    """Base class of guard expression nodes."""

    precedence = _PREC_ATOM

    def evaluate(self, env: Mapping[str, Value]) -> Value:
        raise NotImplementedError

    def variables(self) -> FrozenSet[str]:
        raise NotImplementedError

    def constants(self) -> FrozenSet[int]:
        raise NotImplementedError

    def _wrap(self, child: "GuardExpr", minimum: int) -> str:
        text = str(child)
        return f"({text})" if child.precedence < minimum else text


@dataclass(frozen=True)
class Var(GuardExpr):
    name: str

    def evaluate(self, env: Mapping[str, Value]) -> Value:
        if self.name not in env:
            raise UnboundVariable(self.name)
        return env[self.name]

    def variables(self) -> FrozenSet[str]:
        return frozenset({self.name})

    def constants(self) -> FrozenSet[int]:
        return frozenset()

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const(GuardExpr):
    value: int

    def evaluate(self, env: Mapping[str, Value]) -> Value:
        return self.value

    def variables(self) -> FrozenSet[str]:
        return frozenset()

    def constants(self) -> FrozenSet[int]:
        return frozenset({self.value})

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Cmp(GuardExpr):
    op: str
    left: GuardExpr
    right: GuardExpr

    precedence = _PREC_CMP

    def evaluate(self, env: Mapping[str, Value]) -> Value:
        return COMPARATORS[self.op](self.left.evaluate(env), self.right.evaluate(env))

    def variables(self) -> FrozenSet[str]:
        return self.left.variables() | self.right.variables()

    def constants(self) -> FrozenSet[int]:
        return self.left.constants() | self.right.constants()

    def __str__(self) -> str:
        # comparisons are left-associative
        return f"{self._wrap(self.left, _PREC_CMP)} {self.op} {self._wrap(self.right, _PREC_CMP + 1)}"


@dataclass(frozen=True)
class Not(GuardExpr):
    operand: GuardExpr

    precedence = _PREC_NOT

    def evaluate(self, env: Mapping[str, Value]) -> Value:
        return not self.operand.evaluate(env)

    def variables(self) -> FrozenSet[str]:
        return self.operand.variables()

    def constants(self) -> FrozenSet[int]:
        return self.operand.constants()

    def __str__(self) -> str:
        return f"not {self._wrap(self.operand, _PREC_NOT)}"


@dataclass(frozen=True)
class And(GuardExpr):
    left: GuardExpr
    right: GuardExpr

    precedence = _PREC_AND

    def evaluate(self, env: Mapping[str, Value]) -> Value:
        return bool(self.left.evaluate(env)) and bool(self.right.evaluate(env))

    def variables(self) -> FrozenSet[str]:
        return self.left.variables() | self.right.variables()

    def constants(self) -> FrozenSet[int]:
        return self.left.constants() | self.right.constants()

    def __str__(self) -> str:
        return f"{self._wrap(self.left, _PREC_AND)} and {self._wrap(self.right, _PREC_AND + 1)}"


@dataclass(frozen=True)
class Or(GuardExpr):
    left: GuardExpr
    right: GuardExpr

    precedence = _PREC_OR

    def evaluate(self, env: Mapping[str, Value]) -> Value:
        return bool(self.left.evaluate(env)) or bool(self.right.evaluate(env))

    def variables(self) -> FrozenSet[str]:
        return self.left.variables() | self.right.variables()

    def constants(self) -> FrozenSet[int]:
        return self.left.constants() | self.right.constants()

    def __str__(self) -> str:
        return f"{self._wrap(self.left, _PREC_OR)} or {self._wrap(self.right, _PREC_OR + 1)}"


def _fold_not(tokens: pp.ParseResults) -> GuardExpr:
    group = tokens[0]
    node = group[-1]
    for _ in range(len(group) - 1):
        node = Not(node)
    return node


def _fold_cmp(tokens: pp.ParseResults) -> GuardExpr:
    group = tokens[0]
    node = group[0]
    for index in range(1, len(group), 2):
        node = Cmp(group[index], node, group[index + 1])
    return node


def _fold_binary(node_type: type) -> Callable[[pp.ParseResults], GuardExpr]:
    def fold(tokens: pp.ParseResults) -> GuardExpr:
        group = tokens[0]
        node = group[0]
        for index in range(2, len(group), 2):
            node = node_type(node, group[index])
        return node

    return fold


def _make_grammar() -> pp.ParserElement:
    keyword = pp.Keyword("and") | pp.Keyword("or") | pp.Keyword("not")
    identifier = pp.Word(pp.alphas + "_", pp.alphanums + "_")
    variable = (~keyword + identifier).set_parse_action(lambda t: Var(t[0]))
    integer = pp.Regex(r"-?\d+").set_parse_action(lambda t: Const(int(t[0])))
    operand = integer | variable
    comparison = pp.one_of("<= >= == != < >")

    return pp.infix_notation(
        operand,
        [
            (pp.Keyword("not"), 1, pp.OpAssoc.RIGHT, _fold_not),
            (comparison, 2, pp.OpAssoc.LEFT, _fold_cmp),
            (pp.Keyword("and"), 2, pp.OpAssoc.LEFT, _fold_binary(And)),
            (pp.Keyword("or"), 2, pp.OpAssoc.LEFT, _fold_binary(Or)),
        ],
    )


pp.ParserElement.enable_packrat()
_GRAMMAR = _make_grammar()


@lru_cache(maxsize=1024)
def parse_guard(text: str, line: int = 1, column: int = 1) -> GuardExpr:
    """Parse guard text into an expression tree.

    Args:
        text: Guard source without the surrounding brackets
        line: Line the guard starts on, for error spans
        column: Column of the first guard character, for error spans

    Raises:
        StatechartSyntaxError: If the text is not a guard expression
    """
    if not text.strip():
        raise StatechartSyntaxError("Empty guard expression", line=line, column=column)
    try:
        result = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise StatechartSyntaxError(
            f"Invalid guard expression: {e.msg}",
            line=line,
            column=column + e.loc,
            length=max(1, len(text) - e.loc),
        ) from None
    except RecursionError:
        raise StatechartSyntaxError("Guard expression is nested too deeply", line=line, column=column) from None
    return result[0]


def render_guard(expr: GuardExpr) -> str:
    """Return the canonical text of a guard (no surrounding brackets)."""
    return str(expr)


def canonical_guard(text: str) -> str:
    """Normalize guard text to its canonical spacing and parenthesization."""
    return render_guard(parse_guard(text))
