"""Recursive-descent parser for rational-function expressions.

Grammar (whitespace insignificant, integer literals only):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' nat)*
    atom   := integer | name | '(' expr ')'

Precedence is ^ above unary minus above * / above + -, binary operators
left-associative. Exponents are literal naturals capped at 64 to bound
polynomial blowup. There is no implicit multiplication.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .poly import Poly, RationalFunction

MAX_EXPONENT = 64

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


@dataclass(frozen=True)
class ExprAst:
    kind: str  # num | var | add | sub | mul | div | pow | neg
    value: object = None  # int for num/pow, str for var
    args: tuple = ()


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, name, sym = m.groups()
        start = m.start(1) if num else m.start(2) if name else m.start(3)
        if num:
            tokens.append(("num", int(num), start))
        elif name:
            tokens.append(("name", name, start))
        elif sym.strip():
            tokens.append(("sym", sym, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, allowed_vars):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.allowed = set(allowed_vars)

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(f"{message} at offset {tok[2]}", offset=tok[2])

    def expect_sym(self, sym):
        kind, val, _ = self.peek()
        if kind != "sym" or val != sym:
            self.fail(f"expected '{sym}'")
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected trailing input")
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "+-":
                self.advance()
                rhs = self.term()
                node = ExprAst("add" if val == "+" else "sub", args=(node, rhs))
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "*/":
                self.advance()
                rhs = self.factor()
                node = ExprAst("mul" if val == "*" else "div", args=(node, rhs))
            else:
                return node

    def factor(self):
        kind, val, _ = self.peek()
        if kind == "sym" and val == "-":
            self.advance()
            return ExprAst("neg", args=(self.factor(),))
        return self.power()

    def power(self):
        node = self.atom()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val == "^":
                self.advance()
                ekind, exp, _ = self.peek()
                if ekind != "num":
                    self.fail("exponent must be a literal natural number")
                if exp > MAX_EXPONENT:
                    self.fail(f"exponent {exp} exceeds cap {MAX_EXPONENT}")
                self.advance()
                node = ExprAst("pow", value=exp, args=(node,))
            else:
                return node

    def atom(self):
        kind, val, _ = self.advance()
        if kind == "num":
            return ExprAst("num", value=val)
        if kind == "name":
            if val not in self.allowed:
                self.fail(f"unknown variable '{val}'", self.tokens[self.i - 1])
            return ExprAst("var", value=val)
        if kind == "sym" and val == "(":
            node = self.expr()
            self.expect_sym(")")
            return node
        self.fail("expected a number, variable or '('", self.tokens[self.i - 1])


def parse_expr(text, allowed_vars):
    """Parse text into an AST over the given variable names."""
    return _Parser(text, allowed_vars).parse()


_PRECEDENCE = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}


def ast_to_string(node):
    """Render an AST so that reparsing yields an equal AST."""
    if node.kind == "num":
        return str(node.value)
    if node.kind == "var":
        return node.value
    if node.kind == "neg":
        inner = _wrap(node.args[0], _PRECEDENCE["neg"])
        return f"-{inner}"
    if node.kind == "pow":
        base = _wrap(node.args[0], _PRECEDENCE["pow"] + 1)
        return f"{base}^{node.value}"
    op = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[node.kind]
    left = _wrap(node.args[0], _PRECEDENCE[node.kind])
    # left-associative: right child needs strictly higher binding
    right = _wrap(node.args[1], _PRECEDENCE[node.kind] + 1)
    return f"{left}{op}{right}"


def _wrap(node, min_prec):
    s = ast_to_string(node)
    prec = _PRECEDENCE.get(node.kind, 5)
    if prec < min_prec:
        return f"({s})"
    return s


def lower_to_ratfun(node, vars):
    """Deterministic lowering of an AST into a RationalFunction over Q."""
    vars = tuple(vars)
    if node.kind == "num":
        return RationalFunction.const(vars, Fraction(node.value))
    if node.kind == "var":
        return RationalFunction.variable(vars, node.value)
    if node.kind == "neg":
        return -lower_to_ratfun(node.args[0], vars)
    if node.kind == "pow":
        return lower_to_ratfun(node.args[0], vars) ** node.value
    a = lower_to_ratfun(node.args[0], vars)
    if node.kind == "add":
        return a + lower_to_ratfun(node.args[1], vars)
    if node.kind == "sub":
        return a - lower_to_ratfun(node.args[1], vars)
    if node.kind == "mul":
        return a * lower_to_ratfun(node.args[1], vars)
    if node.kind == "div":
        b = lower_to_ratfun(node.args[1], vars)
        if b.is_zero():
            raise ParseError("division by zero expression")
        return a / b
    raise ParseError(f"unknown node kind {node.kind}")


def parse_ratfun(text, vars):
    return lower_to_ratfun(parse_expr(text, vars), vars)


def parse_poly(text, vars):
    rf = parse_ratfun(text, vars)
    if not rf.is_poly():
        raise ParseError(f"expected a polynomial, got denominator {rf.den!r}")
    return rf.num.scale(1 / rf.den.const_value())


_RAT = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(-?\d+)\s*)?$")


def parse_rat(token):
    m = _RAT.match(token)
    if not m:
        raise ParseError(f"malformed rational '{token.strip()}'")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError(f"zero denominator in '{token.strip()}'")
    return Fraction(num, den)


def parse_rat_list(text):
    """Comma-separated integers or p/q tokens -> list of Fraction."""
    text = text.strip()
    if not text:
        return []
    return [parse_rat(tok) for tok in text.split(",")]


def parse_matrix_lines(lines, vars):
    """Rows of ';'-separated expressions -> matrix of RationalFunction."""
    rows = []
    for line in lines:
        if not line.strip():
            continue
        rows.append(tuple(parse_ratfun(cell, vars) for cell in line.split(";")))
    if not rows:
        raise ParseError("empty matrix")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ParseError("ragged matrix rows")
    return tuple(rows)


def parse_rat_matrix_blocks(text):
    """Blank-line-separated blocks of ';'-separated rational entries."""
    blocks = []
    current = []
    for line in text.splitlines() + [""]:
        if line.strip():
            current.append(tuple(parse_rat(tok) for tok in line.split(";")))
        elif current:
            blocks.append(tuple(current))
            current = []
    if not blocks:
        raise ParseError("no matrices found")
    for b in blocks:
        width = len(b[0])
        if any(len(r) != width for r in b):
            raise ParseError("ragged matrix rows")
    return blocks
