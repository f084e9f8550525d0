"""Permissive SQL tokenizer and recursive-descent parser.

Covers the MySQL-flavored subset that injection payloads exercise in a
string-literal context: SELECT/UNION statements, boolean and comparison
expressions, function calls, subqueries, hex literals, user variables, and
the three comment styles. The output is a rooted labeled ordered tree used
by the validity gate, the AST diversity metric, and the embedded executor.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import SqlParseError

# trailing space matters: in MySQL "--" starts a comment only before whitespace/EOL
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<linecomment>--(?=[ \t]|$|[\r\n])[^\r\n]*|\#[^\r\n]*)
  | (?P<blockcomment>/\*.*?\*/)
  | (?P<hex>0[xX][0-9a-fA-F]+)
  | (?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_$]*)
  | (?P<bident>`[^`]*`)
  | (?P<var>@@?[A-Za-z0-9_.$]+)
  | (?P<op><=>|<=|>=|<>|!=|\|\||&&|[=<>+\-*/%(),;.!~])
    """,
    re.VERBOSE | re.DOTALL,
)

_STRING_OPENERS = {"'", '"'}

KEYWORDS = {
    "select", "from", "where", "and", "or", "xor", "not", "like", "in",
    "between", "is", "null", "true", "false", "union", "all", "distinct",
    "as", "order", "group", "by", "having", "limit", "offset", "exists",
    "regexp", "rlike", "div", "mod",
}

# statements tolerated (as opaque token sprays) when stacked after a SELECT
GENERIC_STMT_KEYWORDS = {
    "insert", "update", "delete", "drop", "create", "alter", "truncate",
    "replace", "set", "show", "grant", "revoke", "call", "use", "describe",
    "explain",
}

# leading keywords typical of non-MySQL dialects; used for error classing
FOREIGN_DIALECT_RE = re.compile(
    r"\b(waitfor|dbcc|openrowset|xp_\w+|sp_\w+|pg_sleep|pg_catalog|dbms_\w+|utl_\w+|rownum)\b",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # STR NUM HEX IDENT VAR OP EOF
    text: str
    pos: int


def tokenize(sql: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(sql)
    while i < n:
        ch = sql[i]
        if ch in _STRING_OPENERS:
            value, i = _scan_string(sql, i)
            tokens.append(Token("STR", value, i))
            continue
        m = _TOKEN_RE.match(sql, i)
        if m is None:
            raise SqlParseError(f"unexpected character {ch!r}", i)
        i = m.end()
        kind = m.lastgroup
        if kind in ("ws", "linecomment", "blockcomment"):
            if kind == "blockcomment" and not m.group().endswith("*/"):
                raise SqlParseError("unterminated block comment", m.start())
            continue
        text = m.group()
        if kind == "hex":
            tokens.append(Token("HEX", text, m.start()))
        elif kind == "num":
            tokens.append(Token("NUM", text, m.start()))
        elif kind == "ident":
            tokens.append(Token("IDENT", text, m.start()))
        elif kind == "bident":
            tokens.append(Token("IDENT", text[1:-1], m.start()))
        elif kind == "var":
            tokens.append(Token("VAR", text, m.start()))
        else:
            tokens.append(Token("OP", text, m.start()))
    tokens.append(Token("EOF", "", n))
    return tokens


def _scan_string(sql: str, start: int) -> tuple[str, int]:
    quote = sql[start]
    out = []
    i = start + 1
    n = len(sql)
    while i < n:
        ch = sql[i]
        if ch == "\\" and i + 1 < n:
            out.append(sql[i + 1])
            i += 2
            continue
        if ch == quote:
            if i + 1 < n and sql[i + 1] == quote:  # doubled-quote escape
                out.append(quote)
                i += 2
                continue
            return "".join(out), i + 1
        out.append(ch)
        i += 1
    raise SqlParseError("unterminated string literal", start)


class Node:
    """Rooted labeled ordered tree node."""

    __slots__ = ("label", "children")

    def __init__(self, label: str, children: tuple["Node", ...] = ()):
        self.label = label
        self.children = tuple(children)

    def __repr__(self) -> str:
        if not self.children:
            return f"Node({self.label!r})"
        return f"Node({self.label!r}, {list(self.children)!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Node)
            and self.label == other.label
            and self.children == other.children
        )

    def __hash__(self) -> int:
        return hash((self.label, self.children))

    def node_count(self) -> int:
        return 1 + sum(c.node_count() for c in self.children)

    def iter_nodes(self):
        yield self
        for c in self.children:
            yield from c.iter_nodes()

    def find(self, label: str) -> "Node | None":
        for node in self.iter_nodes():
            if node.label == label:
                return node
        return None


MAX_NESTING_DEPTH = 64  # MySQL rejects deeper nesting with a stack error too


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0
        self.depth = 0

    def _enter(self) -> None:
        self.depth += 1
        if self.depth > MAX_NESTING_DEPTH:
            raise SqlParseError("expression nesting too deep", self.peek().pos)

    # --- token helpers ---------------------------------------------------
    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def at_kw(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "IDENT" and tok.text.lower() in words

    def eat_kw(self, *words: str) -> bool:
        if self.at_kw(*words):
            self.advance()
            return True
        return False

    def expect_kw(self, word: str) -> None:
        if not self.eat_kw(word):
            tok = self.peek()
            raise SqlParseError(f"expected {word.upper()}, found {tok.text!r}", tok.pos)

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == "OP" and tok.text in ops

    def eat_op(self, *ops: str) -> bool:
        if self.at_op(*ops):
            self.advance()
            return True
        return False

    def expect_op(self, op: str) -> None:
        if not self.eat_op(op):
            tok = self.peek()
            raise SqlParseError(f"expected {op!r}, found {tok.text!r}", tok.pos)

    # --- grammar ----------------------------------------------------------
    def parse_script(self) -> Node:
        statements = []
        while True:
            while self.eat_op(";"):
                pass
            if self.peek().kind == "EOF":
                break
            statements.append(self.parse_statement())
            if self.peek().kind == "EOF":
                break
            self.expect_op(";")
        if not statements:
            raise SqlParseError("empty statement", 0)
        if len(statements) == 1:
            return statements[0]
        return Node("script", tuple(statements))

    def parse_statement(self) -> Node:
        if self.at_kw("select") or self.at_op("("):
            return self.parse_select()
        tok = self.peek()
        if tok.kind == "IDENT" and tok.text.lower() in GENERIC_STMT_KEYWORDS:
            return self.parse_generic_stmt()
        raise SqlParseError(f"expected a statement, found {tok.text!r}", tok.pos)

    def parse_generic_stmt(self) -> Node:
        head = self.advance()
        toks = []
        while self.peek().kind != "EOF" and not self.at_op(";"):
            toks.append(self.advance())
        children = tuple(Node(f"tok:{t.text.lower()}") for t in toks)
        return Node(f"stmt:{head.text.lower()}", children)

    def parse_select(self) -> Node:
        left = self.parse_select_core()
        while self.at_kw("union"):
            self.advance()
            label = "union"
            if self.eat_kw("all"):
                label = "union_all"
            else:
                self.eat_kw("distinct")
            right = self.parse_select_core()
            left = Node(label, (left, right))
        return left

    def parse_select_core(self) -> Node:
        self._enter()
        try:
            return self._parse_select_core()
        finally:
            self.depth -= 1

    def _parse_select_core(self) -> Node:
        if self.eat_op("("):
            inner = self.parse_select()
            self.expect_op(")")
            return inner
        self.expect_kw("select")
        self.eat_kw("distinct") or self.eat_kw("all")
        children: list[Node] = [self.parse_select_item()]
        while self.eat_op(","):
            children.append(self.parse_select_item())
        if self.eat_kw("from"):
            tables = [self.parse_table_item()]
            while self.eat_op(","):
                tables.append(self.parse_table_item())
            children.append(Node("from", tuple(tables)))
        if self.eat_kw("where"):
            children.append(Node("where", (self.parse_expr(),)))
        if self.at_kw("group"):
            self.advance()
            self.expect_kw("by")
            exprs = [self.parse_expr()]
            while self.eat_op(","):
                exprs.append(self.parse_expr())
            children.append(Node("group_by", tuple(exprs)))
        if self.eat_kw("having"):
            children.append(Node("having", (self.parse_expr(),)))
        if self.at_kw("order"):
            self.advance()
            self.expect_kw("by")
            keys = [self.parse_order_key()]
            while self.eat_op(","):
                keys.append(self.parse_order_key())
            children.append(Node("order_by", tuple(keys)))
        if self.eat_kw("limit"):
            nums = [self.parse_expr()]
            if self.eat_op(","):
                nums.append(self.parse_expr())
            elif self.eat_kw("offset"):
                nums.append(self.parse_expr())
            children.append(Node("limit", tuple(nums)))
        return Node("select", tuple(children))

    def parse_select_item(self) -> Node:
        if self.at_op("*"):
            self.advance()
            return Node("star")
        expr = self.parse_expr()
        if self.eat_kw("as"):
            tok = self.advance()
            if tok.kind not in ("IDENT", "STR"):
                raise SqlParseError("expected alias name", tok.pos)
        elif self.peek().kind == "IDENT" and not self.at_kw(*KEYWORDS):
            self.advance()  # bare alias
        return expr

    def parse_table_item(self) -> Node:
        tok = self.advance()
        if tok.kind != "IDENT":
            raise SqlParseError(f"expected table name, found {tok.text!r}", tok.pos)
        name = tok.text.lower()
        if self.eat_op("."):
            part = self.advance()
            if part.kind != "IDENT":
                raise SqlParseError("expected identifier after '.'", part.pos)
            name = f"{name}.{part.text.lower()}"
        if self.eat_kw("as"):
            alias = self.advance()
            if alias.kind != "IDENT":
                raise SqlParseError("expected alias name", alias.pos)
        elif self.peek().kind == "IDENT" and not self.at_kw(*KEYWORDS):
            self.advance()
        return Node(f"table:{name}")

    def parse_order_key(self) -> Node:
        expr = self.parse_expr()
        if self.at_kw("asc", "desc"):
            direction = self.advance().text.lower()
            return Node(f"order:{direction}", (expr,))
        return Node("order:asc", (expr,))

    def parse_expr(self) -> Node:
        self._enter()
        try:
            return self.parse_or()
        finally:
            self.depth -= 1

    def parse_or(self) -> Node:
        left = self.parse_and()
        while True:
            if self.at_kw("or") or self.at_op("||"):
                self.advance()
                left = Node("or", (left, self.parse_and()))
            elif self.at_kw("xor"):
                self.advance()
                left = Node("xor", (left, self.parse_and()))
            else:
                return left

    def parse_and(self) -> Node:
        left = self.parse_not()
        while self.at_kw("and") or self.at_op("&&"):
            self.advance()
            left = Node("and", (left, self.parse_not()))
        return left

    def parse_not(self) -> Node:
        if self.at_kw("not") or self.at_op("!"):
            self.advance()
            return Node("not", (self.parse_not(),))
        return self.parse_predicate()

    def parse_predicate(self) -> Node:
        left = self.parse_additive()
        negate = False
        if self.at_kw("not"):
            nxt = self.peek(1)
            if nxt.kind == "IDENT" and nxt.text.lower() in ("like", "in", "between", "regexp", "rlike"):
                self.advance()
                negate = True
        if self.at_op("=", "<=>", "<>", "!=", "<", ">", "<=", ">="):
            op = self.advance().text
            if op == "<=>":
                op = "="
            right = self.parse_additive()
            return Node(f"cmp:{op}", (left, right))
        if self.at_kw("like"):
            self.advance()
            node = Node("like", (left, self.parse_additive()))
            return Node("not", (node,)) if negate else node
        if self.at_kw("regexp", "rlike"):
            self.advance()
            node = Node("regexp", (left, self.parse_additive()))
            return Node("not", (node,)) if negate else node
        if self.at_kw("in"):
            self.advance()
            self.expect_op("(")
            if self.at_kw("select"):
                items: tuple[Node, ...] = (self.parse_select(),)
            else:
                exprs = [self.parse_expr()]
                while self.eat_op(","):
                    exprs.append(self.parse_expr())
                items = tuple(exprs)
            self.expect_op(")")
            node = Node("in", (left,) + items)
            return Node("not", (node,)) if negate else node
        if self.at_kw("between"):
            self.advance()
            lo = self.parse_additive()
            self.expect_kw("and")
            hi = self.parse_additive()
            node = Node("between", (left, lo, hi))
            return Node("not", (node,)) if negate else node
        if self.at_kw("is"):
            self.advance()
            isnot = self.eat_kw("not")
            tok = self.advance()
            word = tok.text.lower() if tok.kind == "IDENT" else ""
            if word not in ("null", "true", "false"):
                raise SqlParseError(f"expected NULL/TRUE/FALSE after IS, found {tok.text!r}", tok.pos)
            label = f"is_not_{word}" if isnot else f"is_{word}"
            return Node(label, (left,))
        return left

    def parse_additive(self) -> Node:
        left = self.parse_term()
        while self.at_op("+", "-"):
            op = self.advance().text
            left = Node(f"add:{op}", (left, self.parse_term()))
        return left

    def parse_term(self) -> Node:
        left = self.parse_unary()
        while True:
            if self.at_op("*", "/", "%"):
                op = self.advance().text
                left = Node(f"mul:{op}", (left, self.parse_unary()))
            elif self.at_kw("div"):
                self.advance()
                left = Node("mul:/", (left, self.parse_unary()))
            elif self.at_kw("mod"):
                self.advance()
                left = Node("mul:%", (left, self.parse_unary()))
            else:
                return left

    def parse_unary(self) -> Node:
        if self.at_op("-"):
            self.advance()
            return Node("neg", (self.parse_unary(),))
        if self.at_op("+"):
            self.advance()
            return self.parse_unary()
        if self.at_op("~"):
            self.advance()
            return Node("bitnot", (self.parse_unary(),))
        return self.parse_primary()

    def parse_primary(self) -> Node:
        tok = self.peek()
        if tok.kind == "STR":
            self.advance()
            return Node(f"str:{tok.text}")
        if tok.kind == "NUM":
            self.advance()
            return Node(f"num:{tok.text}")
        if tok.kind == "HEX":
            self.advance()
            return Node(f"hex:{tok.text.lower()}")
        if tok.kind == "VAR":
            self.advance()
            return Node(f"var:{tok.text.lower()}")
        if tok.kind == "OP" and tok.text == "*":
            self.advance()
            return Node("star")
        if tok.kind == "OP" and tok.text == "(":
            self.advance()
            if self.at_kw("select"):
                inner = self.parse_select()
                self.expect_op(")")
                return Node("subquery", (inner,))
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if tok.kind == "IDENT":
            word = tok.text.lower()
            if word == "null":
                self.advance()
                return Node("null")
            if word == "true":
                self.advance()
                return Node("true")
            if word == "false":
                self.advance()
                return Node("false")
            if word == "exists":
                self.advance()
                self.expect_op("(")
                inner = self.parse_select()
                self.expect_op(")")
                return Node("exists", (inner,))
            if word == "select":
                raise SqlParseError("misplaced SELECT", tok.pos)
            self.advance()
            if self.at_op("("):
                self.advance()
                self.eat_kw("distinct")
                args: list[Node] = []
                if not self.at_op(")"):
                    args.append(self.parse_func_arg())
                    while self.eat_op(","):
                        args.append(self.parse_func_arg())
                self.expect_op(")")
                return Node(f"func:{word}", tuple(args))
            name = word
            if self.at_op(".") and self.peek(1).kind == "IDENT":
                self.advance()
                name = f"{name}.{self.advance().text.lower()}"
            return Node(f"ident:{name}")
        raise SqlParseError(f"unexpected token {tok.text!r}", tok.pos)

    def parse_func_arg(self) -> Node:
        if self.at_op("*"):
            self.advance()
            return Node("star")
        return self.parse_expr()


def parse_sql(sql: str) -> Node:
    """Parse SQL text into a labeled ordered tree; raises SqlParseError."""
    parser = _Parser(tokenize(sql))
    root = parser.parse_script()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise SqlParseError(f"trailing content {tok.text!r}", tok.pos)
    return root


def token_tree(text: str) -> Node:
    """Depth-1 fallback tree whose children are the raw lexical pieces.

    Used by the AST metric when a payload does not parse; splits on
    whitespace and punctuation boundaries without failing on anything.
    """
    pieces = re.findall(r"[A-Za-z0-9_$]+|[^A-Za-z0-9_$\s]", text)
    if not pieces:
        pieces = [text]
    return Node("tokens", tuple(Node(f"tok:{p.lower()}") for p in pieces))
