"""Recursive-descent parser producing fully desugared module ASTs.

Infix expressions are resolved by precedence climbing over the fixed operator
table; `[a, b, c]` list sugar becomes nested `:` applications ending in `[]`.
`div` and `mod` act as operators in operator position and as plain
identifiers in function position.
"""

from __future__ import annotations

from termbeat import ast_nodes as A
from termbeat.fixity import OPERATORS, Assoc
from termbeat.source import Diagnostic, SourceError, SourceRange, find_marker_line
from termbeat.tokens import Token, TokenKind, tokenize, with_end_sentinel

_ATOM_STARTS = (TokenKind.IDENT, TokenKind.CONID, TokenKind.INT, TokenKind.TEXT)


def _span(module: str, t: Token) -> SourceRange:
    return SourceRange(module, t.line, t.col, t.line, t.end_col)


def _merge(a: SourceRange, b: SourceRange) -> SourceRange:
    return SourceRange(a.module, a.start_line, a.start_col, b.end_line, b.end_col)


def _expr_range(e: A.Expression) -> SourceRange:
    return e.range


class _Parser:
    def __init__(self, module: str, tokens: list[Token]):
        self.module = module
        self.tokens = tokens
        self.pos = 0

    # basic machinery -----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind is not TokenKind.END:
            self.pos += 1
        return t

    def fail(self, message: str, at: Token | None = None) -> SourceError:
        t = at if at is not None else self.peek()
        return SourceError([Diagnostic(self.module, t.line, t.col, message)])

    def at_op(self, text: str) -> bool:
        t = self.peek()
        return t.kind is TokenKind.OP and t.text == text

    def expect_op(self, text: str) -> Token:
        if not self.at_op(text):
            raise self.fail(f"expected `{text}`")
        return self.advance()

    def _operator_here(self) -> str | None:
        """Spelling of an infix operator at the cursor, if any."""
        t = self.peek()
        if t.kind is TokenKind.OP and t.text in OPERATORS:
            return t.text
        if t.kind is TokenKind.IDENT and t.text in ("div", "mod"):
            return t.text
        return None

    # patterns -------------------------------------------------------------

    def parse_apat(self) -> A.Pattern:
        t = self.peek()
        if t.kind is TokenKind.IDENT:
            self.advance()
            if t.text == "_":
                return A.PWild(_span(self.module, t))
            return A.PVar(t.text, _span(self.module, t))
        if t.kind is TokenKind.INT:
            self.advance()
            return A.PInt(int(t.text), _span(self.module, t))
        if t.kind is TokenKind.CONID:
            self.advance()
            return A.PCon(t.text, (), _span(self.module, t))
        if self.at_op("["):
            open_t = self.advance()
            close_t = self.expect_op("]")
            return A.PCon("[]", (), _merge(_span(self.module, open_t), _span(self.module, close_t)))
        if self.at_op("("):
            self.advance()
            p = self.parse_pattern()
            self.expect_op(")")
            return p
        raise self.fail("expected pattern")

    def parse_pattern(self) -> A.Pattern:
        t = self.peek()
        if t.kind is TokenKind.CONID:
            self.advance()
            args: list[A.Pattern] = []
            while self._starts_apat():
                args.append(self.parse_apat())
            end = args[-1].range if args else _span(self.module, t)
            left: A.Pattern = A.PCon(t.text, tuple(args), _merge(_span(self.module, t), end))
        else:
            left = self.parse_apat()
        if self.at_op(":"):
            self.advance()
            right = self.parse_pattern()
            return A.PCon(":", (left, right), _merge(left.range, right.range))
        return left

    def _starts_apat(self) -> bool:
        t = self.peek()
        if t.kind in (TokenKind.IDENT, TokenKind.CONID, TokenKind.INT):
            return True
        return self.at_op("(") or self.at_op("[")

    # expressions ----------------------------------------------------------

    def parse_expr(self) -> A.Expression:
        if self.at_op("\\"):
            lam_t = self.advance()
            params = [self.parse_apat()]
            while self._starts_apat():
                params.append(self.parse_apat())
            self.expect_op("->")
            body = self.parse_expr()
            return A.Lam(tuple(params), body, _merge(_span(self.module, lam_t), body.range))
        return self.parse_op(0)

    def parse_op(self, min_prec: int) -> A.Expression:
        left = self.parse_app()
        while True:
            op = self._operator_here()
            if op is None:
                return left
            fix = OPERATORS[op]
            if fix.precedence < min_prec:
                return left
            op_t = self.advance()
            next_min = fix.precedence if fix.assoc is Assoc.RIGHT else fix.precedence + 1
            right = self.parse_op(next_min)
            if fix.assoc is Assoc.NON:
                follow = self._operator_here()
                if follow is not None and OPERATORS[follow].precedence == fix.precedence:
                    raise self.fail(f"`{op}` is non-associative and cannot be chained")
            op_range = _span(self.module, op_t)
            node: A.Expression
            node = A.Con(op, op_range) if op == ":" else A.Ident(op, op_range)
            whole = _merge(left.range, right.range)
            left = A.App(A.App(node, left, _merge(left.range, op_range)), right, whole)

    def parse_app(self) -> A.Expression:
        fun = self.parse_atom()
        while self._starts_atom():
            arg = self.parse_atom()
            fun = A.App(fun, arg, _merge(fun.range, arg.range))
        return fun

    def _starts_atom(self) -> bool:
        t = self.peek()
        if t.kind in _ATOM_STARTS:
            # div/mod after an operand sit in operator position
            return not (t.kind is TokenKind.IDENT and t.text in ("div", "mod"))
        return self.at_op("(") or self.at_op("[") or self.at_op("...")

    def parse_atom(self) -> A.Expression:
        t = self.peek()
        if t.kind is TokenKind.INT:
            self.advance()
            return A.IntLit(int(t.text), _span(self.module, t))
        if t.kind is TokenKind.TEXT:
            self.advance()
            return A.TextLit(t.text, _span(self.module, t))
        if t.kind is TokenKind.IDENT:
            self.advance()
            return A.Ident(t.text, _span(self.module, t))
        if t.kind is TokenKind.CONID:
            self.advance()
            return A.Con(t.text, _span(self.module, t))
        if self.at_op("..."):
            self.advance()
            return A.Hole(_span(self.module, t))
        if self.at_op("("):
            self.advance()
            op = self._operator_here()
            if op is not None and self.peek(1).kind is TokenKind.OP and self.peek(1).text == ")":
                op_t = self.advance()
                self.advance()
                r = _span(self.module, op_t)
                return A.Con(op, r) if op == ":" else A.Ident(op, r)
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if self.at_op("["):
            open_t = self.advance()
            whole_start = _span(self.module, open_t)
            elems: list[A.Expression] = []
            if not self.at_op("]"):
                elems.append(self.parse_expr())
                while self.at_op(","):
                    self.advance()
                    elems.append(self.parse_expr())
            close_t = self.expect_op("]")
            whole = _merge(whole_start, _span(self.module, close_t))
            out: A.Expression = A.Con("[]", whole)
            for e in reversed(elems):
                out = A.App(A.App(A.Con(":", whole), e, whole), out, whole)
            return out
        raise self.fail("expected expression")

    # declarations ----------------------------------------------------------

    def parse_declaration(self) -> A.Declaration:
        t = self.peek()
        name: str
        name_range: SourceRange
        patterns: list[A.Pattern]
        if t.kind is TokenKind.IDENT and self.peek(1).kind is TokenKind.OP and self.peek(1).text == "=":
            self.advance()
            name, name_range, patterns = t.text, _span(self.module, t), []
        else:
            first = self.parse_apat()
            op = self._operator_here()
            if op is not None:
                if op == ":":
                    raise self.fail("cannot define the list constructor `:`")
                op_t = self.advance()
                second = self.parse_apat()
                name, name_range, patterns = op, _span(self.module, op_t), [first, second]
            elif isinstance(first, A.PVar):
                name, name_range = first.name, first.range
                patterns = []
                while self._starts_apat():
                    patterns.append(self.parse_apat())
            else:
                raise self.fail("expected a function name or an infix definition", t)
        self.expect_op("=")
        body = self.parse_expr()
        self.expect_op(";")
        seen: dict[str, SourceRange] = {}
        for p in patterns:
            for v, r in _pattern_vars_ranged(p):
                if v in seen:
                    raise SourceError(
                        [Diagnostic(self.module, r.start_line, r.start_col, f"pattern variable `{v}` repeats in one equation")]
                    )
                seen[v] = r
        return A.Declaration(name, name_range, tuple(patterns), body)

    # module ----------------------------------------------------------------

    def parse_module(self, expected_name: str) -> A.ModuleAst:
        exports: tuple[A.NameAt, ...] | None = None
        if self.peek().kind is TokenKind.KW_MODULE:
            self.advance()
            name_t = self.peek()
            if name_t.kind is not TokenKind.CONID:
                raise self.fail("expected module name")
            self.advance()
            if name_t.text != expected_name:
                raise self.fail(
                    f"module header names `{name_t.text}` but the file is `{expected_name}`", name_t
                )
            if self.at_op("("):
                self.advance()
                items: list[A.NameAt] = []
                if not self.at_op(")"):
                    items.append(self._parse_export_item())
                    while self.at_op(","):
                        self.advance()
                        items.append(self._parse_export_item())
                self.expect_op(")")
                exports = tuple(items)
            if self.peek().kind is not TokenKind.KW_WHERE:
                raise self.fail("expected `where`")
            self.advance()
        imports: list[A.NameAt] = []
        while self.peek().kind is TokenKind.KW_IMPORT:
            self.advance()
            imp_t = self.peek()
            if imp_t.kind is not TokenKind.CONID:
                raise self.fail("expected imported module name")
            self.advance()
            self.expect_op(";")
            imports.append(A.NameAt(imp_t.text, imp_t.line, imp_t.col))
        decls: list[A.Declaration] = []
        while self.peek().kind is not TokenKind.END:
            decls.append(self.parse_declaration())
        return A.ModuleAst(expected_name, exports, tuple(imports), tuple(decls), None)

    def _parse_export_item(self) -> A.NameAt:
        t = self.peek()
        if t.kind is TokenKind.IDENT:
            self.advance()
            return A.NameAt(t.text, t.line, t.col)
        if self.at_op("("):
            self.advance()
            op = self._operator_here()
            if op is None:
                raise self.fail("expected operator name")
            op_t = self.advance()
            self.expect_op(")")
            return A.NameAt(op, op_t.line, op_t.col)
        raise self.fail("expected export item")


def _pattern_vars_ranged(p: A.Pattern) -> list[tuple[str, SourceRange]]:
    match p:
        case A.PVar(name=name, range=r):
            return [(name, r)]
        case A.PCon(args=args):
            out: list[tuple[str, SourceRange]] = []
            for a in args:
                out.extend(_pattern_vars_ranged(a))
            return out
        case _:
            return []


def parse_module(name: str, text: str) -> A.ModuleAst:
    """Parse one module; raises SourceError (all-or-nothing)."""
    tokens = with_end_sentinel(tokenize(text, name), text)
    ast = _Parser(name, tokens).parse_module(name)
    marker = find_marker_line(text)
    if marker is None:
        return ast
    return A.ModuleAst(ast.name, ast.exports, ast.imports, ast.declarations, marker + 1)


def parse_expression(text: str, module: str = "<expr>") -> A.Expression:
    """Parse a standalone expression (used by tests and the term renderer)."""
    tokens = with_end_sentinel(tokenize(text, module), text)
    p = _Parser(module, tokens)
    e = p.parse_expr()
    if p.peek().kind is not TokenKind.END:
        raise p.fail("unexpected trailing input")
    return e
