"""A small safe expression language for multipliers, weights and symbols.

Expressions are parsed with :mod:`ast` and only a whitelist of nodes is
accepted: numbers (including complex literals like ``2j``), ``pi``, the
variables ``x`` (alias of ``x1``), ``x1 .. xd`` and ``s``/``s1 .. sd``,
arithmetic ``+ - * / **``, and the functions ``sign step abs cos sin exp
sqrt min max re im conj``.  A nested list ``[[a, b], [c, d]]`` gives a block
multiplier.
"""

import ast
import re

import numpy as np

from .errors import DomainError
from .symbols import CHEBYSHEV1, CHEBYSHEV2, FourierCoeffTable, MultiplierSpec, SymbolSpec, WeightSpec

__all__ = [
    "ExpressionError",
    "compile_expression",
    "parse_multiplier",
    "parse_weight",
    "parse_symbol",
    "parse_test_function",
    "BUILTIN_SYMBOLS",
]


class ExpressionError(DomainError):
    def __init__(self, msg, line=None, col=None):
        self.line, self.col = line, col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(msg + where)


def _step(x):
    return np.where(np.asarray(x) >= 0, 1.0, 0.0)


_FUNCS = {
    "sign": np.sign,
    "step": _step,
    "abs": np.abs,
    "cos": np.cos,
    "sin": np.sin,
    "exp": np.exp,
    "sqrt": lambda x: np.sqrt(x + 0j) if np.any(np.real(x) < 0) else np.sqrt(x),
    "min": np.minimum,
    "max": np.maximum,
    "re": np.real,
    "im": np.imag,
    "conj": np.conj,
}
_CONSTS = {"pi": np.pi}
_BINOPS = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.true_divide,
    ast.Pow: np.power,
}
_VAR = re.compile(r"^(x|s)(\d*)$")


class _Compiler:
    def __init__(self, prefix):
        self.prefix = prefix
        self.max_var = 0

    def fail(self, node, msg):
        raise ExpressionError(msg, getattr(node, "lineno", None),
                              getattr(node, "col_offset", -1) + 1)

    def var_index(self, node, name):
        m = _VAR.match(name)
        if not m or m.group(1) != self.prefix:
            self.fail(node, f"unknown name {name!r}")
        k = int(m.group(2)) if m.group(2) else 1
        if k < 1:
            self.fail(node, f"variable index must start at 1 in {name!r}")
        self.max_var = max(self.max_var, k)
        return k - 1

    def build(self, node):
        """Return a function of the variable tuple."""
        if isinstance(node, ast.Expression):
            return self.build(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float, complex)):
                self.fail(node, f"unsupported literal {node.value!r}")
            v = node.value
            return lambda X: v
        if isinstance(node, ast.Name):
            if node.id in _CONSTS:
                v = _CONSTS[node.id]
                return lambda X: v
            k = self.var_index(node, node.id)
            return lambda X: X[k]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = self.build(node.operand)
            if isinstance(node.op, ast.USub):
                return lambda X: -inner(X)
            return inner
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            op = _BINOPS[type(node.op)]
            a, b = self.build(node.left), self.build(node.right)
            return lambda X: op(a(X), b(X))
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS:
                self.fail(node, "unknown function")
            if node.keywords:
                self.fail(node, "keyword arguments are not allowed")
            fn = _FUNCS[node.func.id]
            args = [self.build(a) for a in node.args]
            want = 2 if node.func.id in ("min", "max") else 1
            if len(args) != want:
                self.fail(node, f"{node.func.id} takes {want} argument(s)")
            return lambda X: fn(*[a(X) for a in args])
        self.fail(node, f"unsupported syntax {type(node).__name__}")


def compile_expression(text, prefix="x"):
    """Compile ``text`` to ``(func, n_vars, block_dims)``.

    ``func(*vars)`` broadcasts over arrays; block expressions return arrays
    with two trailing axes.
    """
    if not isinstance(text, str) or not text.strip():
        raise ExpressionError("empty expression")
    src = text.strip()
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        # errors at end of input come back with offset 0
        line = exc.lineno or 1
        col = exc.offset if exc.offset else len(src.splitlines()[line - 1]) + 1
        raise ExpressionError(f"syntax error: {exc.msg}", line, col) from None
    comp = _Compiler(prefix)
    body = tree.body
    if isinstance(body, ast.List):
        rows = body.elts
        if not rows or not all(isinstance(r, ast.List) for r in rows):
            comp.fail(body, "block literal must be a list of rows")
        q = len(rows[0].elts)
        if q == 0 or any(len(r.elts) != q for r in rows):
            comp.fail(body, "block rows differ in length")
        cells = [[comp.build(c) for c in r.elts] for r in rows]
        p = len(rows)

        def func(*X):
            shape = np.broadcast(*X).shape if X else ()
            out = np.empty(shape + (p, q), dtype=complex)
            for a in range(p):
                for b in range(q):
                    out[..., a, b] = np.broadcast_to(cells[a][b](X), shape)
            return out.real if not np.any(out.imag) else out

        return func, comp.max_var, (p, q)
    inner = comp.build(body)

    def func(*X):
        shape = np.broadcast(*X).shape if X else ()
        return np.broadcast_to(inner(X), shape)

    return func, comp.max_var, (1, 1)


def parse_multiplier(text, d=None, name=None):
    """Multiplier from an expression in ``x`` / ``x1 .. xd``.

    ``d`` defaults to the highest variable index used (at least 1).
    """
    func, used, (p, q) = compile_expression(text, "x")
    d = max(used, 1) if d is None else int(d)
    if used > d:
        raise ExpressionError(f"expression uses x{used} but only {d} level(s) are declared")
    return MultiplierSpec(func, dims=(d, p, q), name=name or text.strip())


def parse_weight(text):
    """``cheb1``, ``cheb2`` or ``custom:<expr in x>``."""
    t = text.strip().lower()
    if t in ("cheb1", "chebyshev1"):
        return CHEBYSHEV1
    if t in ("cheb2", "chebyshev2"):
        return CHEBYSHEV2
    if t.startswith("custom:"):
        expr = text.strip()[len("custom:"):]
        func, used, dims = compile_expression(expr, "x")
        if used > 1 or dims != (1, 1) or expr.strip().startswith("["):
            raise ExpressionError("custom weights are scalar functions of x")
        return WeightSpec("custom", w=lambda x: np.real(func(x)), name=f"custom:{expr}")
    raise ExpressionError(f"unknown weight {text!r} (use cheb1, cheb2 or custom:<expr>)")


BUILTIN_SYMBOLS = {
    "2-2cos": "2 - 2*cos(s)",
    "pi*cos": "pi*cos(s)",
    "exp(is)": "exp(1j*s)",
    "(2-2cos)^2": "(2 - 2*cos(s))**2",
}


# exact Fourier tables of the one-level builtins
_BUILTIN_TABLES = {
    "2-2cos": {0: 2.0, 1: -1.0, -1: -1.0},
    "pi*cos": {1: np.pi / 2, -1: np.pi / 2},
    "exp(is)": {1: 1.0 + 0j},
    "(2-2cos)^2": {0: 6.0, 1: -4.0, -1: -4.0, 2: 1.0, -2: 1.0},
}


def parse_symbol(text, d=None):
    """Periodic symbol by builtin name or expression in ``s`` / ``s1 .. sd``.

    One-level builtins carry their exact coefficient table.
    """
    key = text.strip()
    if key in _BUILTIN_TABLES and (d is None or int(d) == 1):
        entries = dict(_BUILTIN_TABLES[key])
        r = max(abs(k) for k in entries)
        entries = {k: entries.get(k, 0.0) for k in range(-r, r + 1)}
        table = FourierCoeffTable.from_dict(entries)
        return SymbolSpec.from_table(table, name=key)
    expr = BUILTIN_SYMBOLS.get(key, text)
    func, used, (p, q) = compile_expression(expr, "s")
    d = max(used, 1) if d is None else int(d)
    return SymbolSpec(func, dims=(d, p, q), name=text.strip())


def parse_test_function(text):
    """``t``, ``t2`` or ``indicator:a,b`` (indicator of the real interval ``[a, b]``)."""
    t = text.strip()
    if t == "t":
        def F(z):
            return z
    elif t == "t2":
        def F(z):
            return np.asarray(z) ** 2
    elif t.startswith("indicator:"):
        try:
            a, b = sorted(float(v) for v in t[len("indicator:"):].split(","))
        except ValueError:
            raise ExpressionError(f"indicator needs two numbers, got {t!r}") from None

        def F(z):
            z = np.asarray(z)
            return ((np.real(z) >= a) & (np.real(z) <= b)).astype(float)
    else:
        raise ExpressionError(f"unknown test function {text!r} (use t, t2 or indicator:a,b)")
    F.name = t
    return F
