"""Benchmark initial data and a restricted evaluator for user expressions.

Custom phase/amplitude/potential profiles arrive as plain strings from config
files; they are compiled through an AST whitelist (arithmetic, a handful of
elementary functions, the variable x, pi) so configs stay data, not code.
"""

from __future__ import annotations

import ast
import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .flows import Potential, WkbState
from .grid import ComplexField, PeriodicGrid, RealField

_ALLOWED_FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "abs": np.abs,
}
_ALLOWED_NAMES = {"x", "pi"}
_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
_ALLOWED_UNARYOPS = (ast.USub, ast.UAdd)


def _validate_expression_node(node: ast.AST, text: str) -> None:
    if isinstance(node, ast.Expression):
        _validate_expression_node(node.body, text)
        return
    if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
        _validate_expression_node(node.left, text)
        _validate_expression_node(node.right, text)
        return
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, _ALLOWED_UNARYOPS):
        _validate_expression_node(node.operand, text)
        return
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        if isinstance(node.value, bool):
            raise ConfigError(f"expression {text!r} contains a boolean literal")
        return
    if isinstance(node, ast.Name) and node.id in _ALLOWED_NAMES:
        return
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in _ALLOWED_FUNCTIONS
        and not node.keywords
    ):
        for argument in node.args:
            _validate_expression_node(argument, text)
        return
    if isinstance(node, ast.Name):
        raise ConfigError(f"expression {text!r} uses unknown name {node.id!r}")
    raise ConfigError(
        f"expression {text!r} contains a disallowed construct "
        f"({type(node).__name__})"
    )


def parse_expression(text: str) -> ast.Expression:
    """Validate an expression string; returns its AST for later evaluation."""
    if not text or not text.strip():
        raise ConfigError("expression must be nonempty")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"expression {text!r} does not parse: {exc.msg}") from exc
    _validate_expression_node(tree, text)
    return tree


def evaluate_expression(text: str, x: np.ndarray) -> np.ndarray:
    """Evaluate a whitelisted expression of x on the given nodes."""
    tree = parse_expression(text)
    env = dict(_ALLOWED_FUNCTIONS)
    env["pi"] = np.pi
    env["x"] = x
    with np.errstate(all="ignore"):
        result = eval(compile(tree, "<expression>", "eval"), {"__builtins__": {}}, env)
    result = np.broadcast_to(np.asarray(result, dtype=np.float64), x.shape).copy()
    if not np.all(np.isfinite(result)):
        raise ConfigError(f"expression {text!r} is not finite on the grid")
    return result


@dataclass(frozen=True)
class ProblemData:
    """Initial phase/amplitude pair and potential, tagged for cache keys."""

    initial: WkbState
    potential: Potential
    tag: str

    @property
    def grid(self) -> PeriodicGrid:
        return self.initial.grid


def build_problem(
    grid: PeriodicGrid,
    selector: str = "paper41",
    s0_expression: str | None = None,
    a0_expression: str | None = None,
    v_expression: str | None = None,
) -> ProblemData:
    """Instantiate initial data on a grid, builtin or from expression strings."""
    x = grid.nodes
    if selector == "paper41":
        s0 = 0.5 * np.sin(x)
        a0 = np.sin(x).astype(np.complex128)
        v = np.sin(x) / (1.0 + np.cos(x) ** 2)
        tag = "paper41"
    elif selector == "expressions":
        missing = [
            name
            for name, expr in (
                ("s0", s0_expression),
                ("a0", a0_expression),
                ("v", v_expression),
            )
            if expr is None
        ]
        if missing:
            raise ConfigError(
                f"initial_data = expressions requires {', '.join(missing)}"
            )
        s0 = evaluate_expression(s0_expression, x)
        a0 = evaluate_expression(a0_expression, x).astype(np.complex128)
        v = evaluate_expression(v_expression, x)
        digest = hashlib.sha256(
            "|".join((s0_expression, a0_expression, v_expression)).encode()
        ).hexdigest()[:10]
        tag = f"custom{digest}"
    else:
        raise ConfigError(f"unknown initial data selector {selector!r}")

    return ProblemData(
        WkbState(RealField(grid, s0), ComplexField(grid, a0)),
        Potential(RealField(grid, v)),
        tag,
    )
