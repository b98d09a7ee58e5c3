"""Mini-language parsing, AST refinement, tokenization, and code contexts.

The parser accepts a small Java-like language: class and method
declarations; variable declaration, assignment, if/else, return and
expression statements; method invocation, field access, cast, object and
array creation, infix/prefix operators, literals, and instanceof.

Parsing yields a *generic* tree whose shape mirrors what a Java front end
would produce: names appear as SimpleName leaves under the node they
label (``list.toArray(x)`` has SimpleName children for both ``list`` and
``toArray``).  `refine` collapses those leaves so every node becomes a
discriminating (type, identifier) pair: method invocations turn into
``(Method, name)``, bare names into ``(Variable, name)``, type nodes into
single leaves carrying their source text (``(ArrayType, "String[]")``).

Externally produced generic trees can enter the same pipeline through the
JSON form accepted by `from_json_tree` (objects with "type", "label",
"span": [start, end], "children": [...]).
"""

from __future__ import annotations

from dataclasses import dataclass, field

PRIMITIVE_TYPES = frozenset(
    {"int", "long", "short", "byte", "char", "boolean", "float", "double", "void"}
)
MODIFIERS = frozenset({"public", "private", "protected", "static", "final"})
KEYWORDS = (
    frozenset({"class", "extends", "implements", "if", "else", "return", "new",
               "instanceof", "null", "true", "false"})
    | PRIMITIVE_TYPES
    | MODIFIERS
)

# Node types whose name is a SimpleName child in the generic tree; refine
# collapses the name into the node, retyping where the generic type is not
# discriminating on its own.
_NAME_COLLAPSE = {
    "MethodInvocation": "Method",
    "FieldAccess": "FieldAccess",
    "ClassDeclaration": "ClassDeclaration",
    "MethodDeclaration": "MethodDeclaration",
}

_TYPE_NODES = frozenset({"PrimitiveType", "SimpleType", "ParameterizedType", "ArrayType"})

# Nodes that may introduce a new declaration scope during tokenization.
_SCOPE_NODES = frozenset({"CompilationUnit", "ClassDeclaration", "MethodDeclaration", "Block"})


class ParseError(ValueError):
    """Source text does not conform to the mini-language grammar."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class ContextError(ValueError):
    """A requested line span covers no node of the tree."""


@dataclass
class AstNode:
    """One tree node; `label` is the raw token for label-bearing nodes."""

    node_type: str
    label: str = ""
    children: list["AstNode"] = field(default_factory=list)
    span: tuple[int, int] = (0, 0)
    # Index of the SimpleName child realizing this node's label, set by the
    # parser; JSON trees may omit it (refine then falls back to a positional
    # convention documented in from_json_tree).
    name_child: int | None = None

    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class Entity:
    """A (type, identifier) pair denoting one refined AST node."""

    entity_type: str
    identifier: str


@dataclass
class CodeContext:
    """Hierarchical (entity, parent entity, child contexts) over a code block."""

    entity: Entity
    parent: Entity | None
    children: list["CodeContext"] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Lexer


@dataclass
class _Token:
    kind: str  # ident, number, string, char, op, eof
    text: str
    line: int
    col: int


_OPS = [
    "==", "!=", "<=", ">=", "&&", "||", "+=", "-=", "*=", "/=",
    "=", "<", ">", "+", "-", "*", "/", "%", "!", ".", ",", ";",
    "(", ")", "{", "}", "[", "]",
]


def _lex(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end < 0:
                raise ParseError("unterminated comment", line, col)
            for ch in source[i:end + 2]:
                if ch == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
            i = end + 2
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("ident", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and (source[j].isdigit() or source[j] == "."):
                j += 1
            tokens.append(_Token("number", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if c == '"':
            j = i + 1
            while j < n and source[j] != '"':
                if source[j] == "\\":
                    j += 1
                j += 1
            if j >= n:
                raise ParseError("unterminated string literal", line, col)
            tokens.append(_Token("string", source[i:j + 1], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if c == "'":
            j = source.find("'", i + 1)
            if j < 0:
                raise ParseError("unterminated character literal", line, col)
            tokens.append(_Token("char", source[i:j + 1], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        for op in _OPS:
            if source.startswith(op, i):
                tokens.append(_Token("op", op, line, col))
                col += len(op)
                i += len(op)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token helpers

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("op", "ident")

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.col)
        return self.advance()

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col)

    # -- entry

    def parse_unit(self) -> AstNode:
        items = []
        start = self.peek().line
        while self.peek().kind != "eof":
            items.append(self.parse_top_level())
        end = items[-1].span[1] if items else start
        if len(items) == 1:
            return items[0]
        return AstNode("CompilationUnit", "", items, (start, end))

    def parse_top_level(self) -> AstNode:
        save = self.pos
        mods = self.parse_modifiers()
        if self.at("class"):
            self.pos = save
            return self.parse_class()
        self.pos = save
        return self.parse_statement()

    def parse_modifiers(self) -> list[AstNode]:
        mods = []
        while self.peek().kind == "ident" and self.peek().text in MODIFIERS:
            tok = self.advance()
            mods.append(AstNode("Modifier", tok.text, [], (tok.line, tok.line)))
        return mods

    def parse_class(self) -> AstNode:
        mods = self.parse_modifiers()
        start = mods[0].span[0] if mods else self.peek().line
        self.expect("class")
        name_tok = self.advance()
        if name_tok.kind != "ident":
            raise ParseError("expected class name", name_tok.line, name_tok.col)
        name = AstNode("SimpleName", name_tok.text, [], (name_tok.line, name_tok.line))
        supers = []
        if self.at("extends"):
            self.advance()
            supers.append(self.parse_type())
        if self.at("implements"):
            self.advance()
            supers.append(self.parse_type())
            while self.at(","):
                self.advance()
                supers.append(self.parse_type())
        self.expect("{")
        members = []
        while not self.at("}"):
            if self.peek().kind == "eof":
                raise self.error("unterminated class body")
            members.append(self.parse_member())
        end_tok = self.expect("}")
        children = mods + [name] + supers + members
        return AstNode("ClassDeclaration", "", children, (start, end_tok.line),
                       name_child=len(mods))

    def parse_member(self) -> AstNode:
        save = self.pos
        mods = self.parse_modifiers()
        if self.at("class"):
            self.pos = save
            return self.parse_class()
        start = mods[0].span[0] if mods else self.peek().line
        rtype = self.parse_type()
        name_tok = self.advance()
        if name_tok.kind != "ident":
            raise ParseError("expected member name", name_tok.line, name_tok.col)
        name = AstNode("SimpleName", name_tok.text, [], (name_tok.line, name_tok.line))
        if self.at("("):
            self.advance()
            params = []
            if not self.at(")"):
                params.append(self.parse_param())
                while self.at(","):
                    self.advance()
                    params.append(self.parse_param())
            self.expect(")")
            body = self.parse_block()
            children = mods + [rtype, name] + params + [body]
            return AstNode("MethodDeclaration", "", children, (start, body.span[1]),
                           name_child=len(mods) + 1)
        init = []
        if self.at("="):
            self.advance()
            init.append(self.parse_expression())
        end_tok = self.expect(";")
        return AstNode("FieldDeclaration", "", mods + [rtype, name] + init,
                       (start, end_tok.line), name_child=len(mods) + 1)

    def parse_param(self) -> AstNode:
        ptype = self.parse_type()
        name_tok = self.advance()
        if name_tok.kind != "ident":
            raise ParseError("expected parameter name", name_tok.line, name_tok.col)
        name = AstNode("SimpleName", name_tok.text, [], (name_tok.line, name_tok.line))
        return AstNode("SingleVariableDeclaration", "", [ptype, name],
                       (ptype.span[0], name_tok.line), name_child=1)

    # -- statements

    def parse_block(self) -> AstNode:
        start_tok = self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.peek().kind == "eof":
                raise self.error("unterminated block")
            stmts.append(self.parse_statement())
        end_tok = self.expect("}")
        return AstNode("Block", "", stmts, (start_tok.line, end_tok.line))

    def parse_statement(self) -> AstNode:
        tok = self.peek()
        if self.at("{"):
            return self.parse_block()
        if self.at("if"):
            return self.parse_if()
        if self.at("return"):
            self.advance()
            children = []
            if not self.at(";"):
                children.append(self.parse_expression())
            end_tok = self.expect(";")
            return AstNode("ReturnStatement", "return", children, (tok.line, end_tok.line))
        decl = self.try_parse_var_decl()
        if decl is not None:
            return decl
        expr = self.parse_expression()
        if self.peek().text in ("=", "+=", "-=", "*=", "/="):
            op_tok = self.advance()
            rhs = self.parse_expression()
            end_tok = self.expect(";")
            return AstNode("Assignment", op_tok.text, [expr, rhs], (tok.line, end_tok.line))
        end_tok = self.expect(";")
        return AstNode("ExpressionStatement", "", [expr], (tok.line, end_tok.line))

    def parse_if(self) -> AstNode:
        start_tok = self.expect("if")
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        then = self.parse_statement()
        children = [cond, then]
        end = then.span[1]
        if self.at("else"):
            self.advance()
            other = self.parse_statement()
            children.append(other)
            end = other.span[1]
        return AstNode("IfStatement", "if", children, (start_tok.line, end))

    def try_parse_var_decl(self) -> AstNode | None:
        save = self.pos
        start = self.peek().line
        try:
            vtype = self.parse_type()
        except ParseError:
            self.pos = save
            return None
        name_tok = self.peek()
        if name_tok.kind != "ident" or name_tok.text in KEYWORDS:
            self.pos = save
            return None
        follow = self.peek(1).text
        if follow not in ("=", ";"):
            self.pos = save
            return None
        self.advance()
        name = AstNode("SimpleName", name_tok.text, [], (name_tok.line, name_tok.line))
        children = [vtype, name]
        if self.at("="):
            self.advance()
            children.append(self.parse_expression())
        end_tok = self.expect(";")
        return AstNode("VariableDeclaration", "", children, (start, end_tok.line),
                       name_child=1)

    # -- types

    def parse_type(self) -> AstNode:
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError("expected a type", tok.line, tok.col)
        if tok.text in PRIMITIVE_TYPES:
            self.advance()
            node = AstNode("PrimitiveType", tok.text, [], (tok.line, tok.line))
        elif tok.text in KEYWORDS:
            raise ParseError(f"expected a type, found keyword {tok.text!r}", tok.line, tok.col)
        else:
            self.advance()
            name = AstNode("SimpleName", tok.text, [], (tok.line, tok.line))
            node = AstNode("SimpleType", "", [name], (tok.line, tok.line), name_child=0)
            if self.at("<"):
                self.advance()
                args = [self.parse_type()]
                while self.at(","):
                    self.advance()
                    args.append(self.parse_type())
                end_tok = self.expect(">")
                node = AstNode("ParameterizedType", "", [node] + args,
                               (tok.line, end_tok.line))
        while self.at("[") and self.peek(1).text == "]":
            self.advance()
            end_tok = self.advance()
            node = AstNode("ArrayType", "", [node], (node.span[0], end_tok.line))
        return node

    # -- expressions, by precedence level

    def parse_expression(self) -> AstNode:
        return self.parse_infix(0)

    _LEVELS = [["||"], ["&&"], ["==", "!="], ["<", ">", "<=", ">="],
               ["+", "-"], ["*", "/", "%"]]

    def parse_infix(self, level: int) -> AstNode:
        if level >= len(self._LEVELS):
            return self.parse_unary()
        node = self.parse_infix(level + 1)
        while True:
            if level == 3 and self.at("instanceof"):
                self.advance()
                rtype = self.parse_type()
                node = AstNode("InstanceofExpression", "instanceof", [node, rtype],
                               (node.span[0], rtype.span[1]))
                continue
            tok = self.peek()
            if tok.kind == "op" and tok.text in self._LEVELS[level]:
                self.advance()
                right = self.parse_infix(level + 1)
                node = AstNode("InfixExpression", tok.text, [node, right],
                               (node.span[0], right.span[1]))
                continue
            return node

    def parse_unary(self) -> AstNode:
        tok = self.peek()
        if tok.text in ("!", "-", "+") and tok.kind == "op":
            self.advance()
            operand = self.parse_unary()
            return AstNode("PrefixExpression", tok.text, [operand],
                           (tok.line, operand.span[1]))
        if self.at("("):
            cast = self.try_parse_cast()
            if cast is not None:
                return cast
        return self.parse_postfix()

    def try_parse_cast(self) -> AstNode | None:
        save = self.pos
        start_tok = self.expect("(")
        try:
            ctype = self.parse_type()
        except ParseError:
            self.pos = save
            return None
        if not self.at(")"):
            self.pos = save
            return None
        self.advance()
        nxt = self.peek()
        operand_start = (nxt.kind in ("ident", "number", "string", "char")
                         and nxt.text not in KEYWORDS - {"new", "null", "true", "false"}) \
            or nxt.text in ("(", "!", "new", "null", "true", "false")
        if not operand_start:
            self.pos = save
            return None
        operand = self.parse_unary()
        return AstNode("CastExpression", "", [ctype, operand],
                       (start_tok.line, operand.span[1]))

    def parse_postfix(self) -> AstNode:
        node = self.parse_primary()
        while self.at("."):
            self.advance()
            name_tok = self.advance()
            if name_tok.kind != "ident":
                raise ParseError("expected member name after '.'", name_tok.line, name_tok.col)
            name = AstNode("SimpleName", name_tok.text, [], (name_tok.line, name_tok.line))
            if self.at("("):
                self.advance()
                args = []
                if not self.at(")"):
                    args.append(self.parse_expression())
                    while self.at(","):
                        self.advance()
                        args.append(self.parse_expression())
                end_tok = self.expect(")")
                node = AstNode("MethodInvocation", "", [node, name] + args,
                               (node.span[0], end_tok.line), name_child=1)
            else:
                node = AstNode("FieldAccess", "", [node, name],
                               (node.span[0], name_tok.line), name_child=1)
        return node

    def parse_primary(self) -> AstNode:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return AstNode("NumberLiteral", tok.text, [], (tok.line, tok.line))
        if tok.kind == "string":
            self.advance()
            return AstNode("StringLiteral", tok.text, [], (tok.line, tok.line))
        if tok.kind == "char":
            self.advance()
            return AstNode("CharacterLiteral", tok.text, [], (tok.line, tok.line))
        if tok.text in ("true", "false"):
            self.advance()
            return AstNode("BooleanLiteral", tok.text, [], (tok.line, tok.line))
        if tok.text == "null":
            self.advance()
            return AstNode("NullLiteral", "null", [], (tok.line, tok.line))
        if tok.text == "new":
            return self.parse_creation()
        if tok.text == "(":
            self.advance()
            inner = self.parse_expression()
            self.expect(")")
            return inner
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.advance()
            name = AstNode("SimpleName", tok.text, [], (tok.line, tok.line))
            if self.at("("):
                self.advance()
                args = []
                if not self.at(")"):
                    args.append(self.parse_expression())
                    while self.at(","):
                        self.advance()
                        args.append(self.parse_expression())
                end_tok = self.expect(")")
                return AstNode("MethodInvocation", "", [name] + args,
                               (tok.line, end_tok.line), name_child=0)
            return name
        raise self.error(f"unexpected token {tok.text or 'end of input'!r}")

    def parse_creation(self) -> AstNode:
        start_tok = self.expect("new")
        base = self.parse_type()
        if self.at("["):
            self.advance()
            dims = []
            if not self.at("]"):
                dims.append(self.parse_expression())
            end_tok = self.expect("]")
            atype = AstNode("ArrayType", "", [base], (base.span[0], end_tok.line))
            return AstNode("ArrayCreation", "", [atype] + dims,
                           (start_tok.line, end_tok.line))
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.parse_expression())
            while self.at(","):
                self.advance()
                args.append(self.parse_expression())
        end_tok = self.expect(")")
        return AstNode("ClassInstanceCreation", "", [base] + args,
                       (start_tok.line, end_tok.line))


def parse(source: str) -> AstNode:
    """Parse mini-language source into a generic AST.

    A single top-level construct is returned directly; multiple constructs
    are wrapped in a CompilationUnit node.
    """
    tree = _Parser(_lex(source)).parse_unit()
    return tree


# ---------------------------------------------------------------------------
# Refinement


def type_text(node: AstNode) -> str:
    """Source text of a type node, e.g. ``String[]`` or ``List<String>``."""
    if node.node_type == "PrimitiveType":
        return node.label
    if node.node_type == "SimpleType":
        if node.label:
            return node.label
        return node.children[0].label
    if node.node_type == "ParameterizedType":
        if node.label:
            return node.label
        base = type_text(node.children[0])
        args = ", ".join(type_text(c) for c in node.children[1:])
        return f"{base}<{args}>"
    if node.node_type == "ArrayType":
        if node.label:
            return node.label
        return type_text(node.children[0]) + "[]"
    return node.label


def _find_name_child(node: AstNode) -> int | None:
    if node.name_child is not None:
        return node.name_child
    # Positional fallback for externally supplied generic trees. Scanning for
    # the first SimpleName child is exact for declarations; for invocations
    # and field accesses a leading SimpleName is read as the receiver when a
    # second SimpleName follows it.
    names = [i for i, c in enumerate(node.children) if c.node_type == "SimpleName"]
    if not names:
        return None
    if node.node_type in ("MethodInvocation", "FieldAccess"):
        if len(names) >= 2 and names[0] == 0 and names[1] == 1:
            return 1
        return names[0] if names[0] <= 1 else None
    return names[0]


def refine(node: AstNode) -> AstNode:
    """Collapse SimpleName leaves into discriminating (type, identifier) nodes.

    Idempotent; never increases the node count; the output contains no
    SimpleName node.
    """
    if node.node_type in _TYPE_NODES:
        return AstNode(node.node_type, type_text(node), [], node.span)
    if node.node_type in _NAME_COLLAPSE:
        idx = _find_name_child(node)
        if idx is not None:
            rest = [refine(c) for i, c in enumerate(node.children) if i != idx]
            return AstNode(_NAME_COLLAPSE[node.node_type], node.children[idx].label,
                           rest, node.span)
    if node.node_type == "SimpleName":
        return AstNode("Variable", node.label, [], node.span)
    refined_children = [refine(c) for c in node.children]
    idx = node.name_child
    if idx is not None and idx < len(node.children) \
            and node.children[idx].node_type == "SimpleName":
        # declared names (variables, fields, parameters) stay in place
        idx = None
    return AstNode(node.node_type, node.label, refined_children, node.span)


# ---------------------------------------------------------------------------
# Tokenization


def _spans_intersect(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return max(a[0], b[0]) <= min(a[1], b[1])


def _declared_types(tree: AstNode) -> dict[int, str]:
    """Resolve each Variable node (by object id) to its declared type text.

    Declarations are visible to later siblings and to nested scopes;
    shadowing follows the innermost enclosing scope.
    """
    resolved: dict[int, str] = {}

    def walk(node: AstNode, scopes: list[dict[str, str]]) -> None:
        if node.node_type in ("VariableDeclaration", "FieldDeclaration",
                              "SingleVariableDeclaration"):
            tnode = next((c for c in node.children if c.node_type in _TYPE_NODES), None)
            nnode = next((c for c in node.children
                          if c.node_type in ("SimpleName", "Variable")), None)
            if tnode is not None and nnode is not None:
                scopes[-1][nnode.label] = type_text(tnode)
        pushed = node.node_type in _SCOPE_NODES
        if pushed:
            scopes.append({})
        for child in node.children:
            walk(child, scopes)
        if node.node_type == "Variable":
            for frame in reversed(scopes):
                if node.label in frame:
                    resolved[id(node)] = frame[node.label]
                    break
        if pushed:
            scopes.pop()

    walk(tree, [{}])
    return resolved


def token_triples(tree: AstNode,
                  span: tuple[int, int] | None = None) -> list[tuple[str, str, int]]:
    """Depth-first (node type, identifier, start line) triples of a refined tree.

    Only label-bearing nodes contribute. Declared variable identifiers are
    renamed to ``<declared type>Var`` so that incidental local names do not
    distinguish otherwise identical fragments; names without a visible
    declaration (fields of other classes, imported names) are kept verbatim.
    """
    declared = _declared_types(tree)
    out: list[tuple[str, str, int]] = []

    def walk(node: AstNode) -> None:
        if span is not None and not _spans_intersect(node.span, span):
            return
        if node.label:
            ident = node.label
            if node.node_type == "Variable" and id(node) in declared:
                ident = declared[id(node)] + "Var"
            out.append((node.node_type, ident, node.span[0]))
        for child in node.children:
            walk(child)

    walk(tree)
    return out


def tokenize(tree: AstNode, span: tuple[int, int] | None = None) -> list[str]:
    """Flatten a refined tree into the alternating type/identifier token vector."""
    tokens: list[str] = []
    for node_type, ident, _ in token_triples(tree, span):
        tokens.append(node_type)
        tokens.append(ident)
    return tokens


# ---------------------------------------------------------------------------
# Code contexts


def node_entity(node: AstNode) -> Entity:
    return Entity(node.node_type, node.label)


def context_from_node(node: AstNode, parent: Entity | None = None) -> CodeContext:
    ctx = CodeContext(node_entity(node), parent)
    ctx.children = [context_from_node(c, ctx.entity) for c in node.children]
    return ctx


def covering_node(tree: AstNode, span: tuple[int, int]) -> AstNode:
    """Smallest node whose span contains the given line span."""
    if not _spans_intersect(tree.span, span):
        raise ContextError(f"span {span} covers no node")
    clamped = (max(span[0], tree.span[0]), min(span[1], tree.span[1]))

    def descend(node: AstNode) -> AstNode:
        for child in node.children:
            if child.span[0] <= clamped[0] and clamped[1] <= child.span[1]:
                return descend(child)
        return node

    if not (tree.span[0] <= clamped[0] and clamped[1] <= tree.span[1]):
        raise ContextError(f"span {span} covers no node")
    return descend(tree)


def extract_context(tree: AstNode, span: tuple[int, int]) -> CodeContext:
    """Code context rooted at the smallest node covering the span."""
    return context_from_node(covering_node(tree, span))


# ---------------------------------------------------------------------------
# Structural helpers


def same_tree(a: AstNode, b: AstNode) -> bool:
    """Structural equality ignoring spans and parser bookkeeping."""
    if a.node_type != b.node_type or a.label != b.label:
        return False
    if len(a.children) != len(b.children):
        return False
    return all(same_tree(x, y) for x, y in zip(a.children, b.children))


def structure_key(node: AstNode) -> tuple:
    """Hashable structural fingerprint (type, label, children), span-free."""
    return (node.node_type, node.label, tuple(structure_key(c) for c in node.children))


def count_nodes(node: AstNode) -> int:
    return 1 + sum(count_nodes(c) for c in node.children)


def walk_nodes(node: AstNode):
    yield node
    for child in node.children:
        yield from walk_nodes(child)


def copy_tree(node: AstNode) -> AstNode:
    return AstNode(node.node_type, node.label, [copy_tree(c) for c in node.children],
                   node.span, node.name_child)


# ---------------------------------------------------------------------------
# JSON generic-tree interchange


def to_json_tree(node: AstNode) -> dict:
    out: dict = {
        "type": node.node_type,
        "label": node.label,
        "span": [node.span[0], node.span[1]],
        "children": [to_json_tree(c) for c in node.children],
    }
    if node.name_child is not None:
        out["name_child"] = node.name_child
    return out


def from_json_tree(obj: dict) -> AstNode:
    """Build a tree from the JSON form: {"type", "label", "span", "children"}.

    "name_child" may mark the SimpleName child realizing a node's label;
    without it, refine applies a positional convention (first SimpleName
    child, or the second one for invocation/field-access receiver forms).
    """
    try:
        span = obj.get("span", [0, 0])
        return AstNode(
            obj["type"],
            obj.get("label", ""),
            [from_json_tree(c) for c in obj.get("children", [])],
            (int(span[0]), int(span[1])),
            obj.get("name_child"),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed JSON tree node: {exc}") from exc


# ---------------------------------------------------------------------------
# Rendering (refined trees back to source text)

_STATEMENTS = frozenset({"Block", "IfStatement", "ReturnStatement", "VariableDeclaration",
                         "Assignment", "ExpressionStatement", "MethodDeclaration",
                         "FieldDeclaration", "ClassDeclaration", "CompilationUnit"})


def _render_expr(node: AstNode, parent_op: str | None = None) -> str:
    t = node.node_type
    if t in ("Variable", "NumberLiteral", "StringLiteral", "CharacterLiteral",
             "BooleanLiteral", "NullLiteral", "Modifier") or t in _TYPE_NODES:
        return node.label
    if t == "Method":
        args = node.children
        recv = ""
        # a leading non-type child that is not an argument of a bare call is
        # unknowable syntactically; the parser convention keeps the receiver
        # first, so a receiver exists iff the call had one child more than
        # its argument count at parse time. We mark receivers positionally:
        if node.name_child is None and args and args[0].node_type not in _TYPE_NODES \
                and getattr(node, "_recv", None) is not False:
            pass
        return _render_invocation(node)
    if t == "FieldAccess":
        return f"{_render_expr(node.children[0])}.{node.label}"
    if t == "CastExpression":
        return f"({node.children[0].label}) {_render_expr(node.children[1])}"
    if t == "InstanceofExpression":
        return f"{_render_expr(node.children[0])} instanceof {node.children[1].label}"
    if t == "InfixExpression":
        left = _render_operand(node.children[0])
        right = _render_operand(node.children[1])
        return f"{left} {node.label} {right}"
    if t == "PrefixExpression":
        return f"{node.label}{_render_operand(node.children[0])}"
    if t == "ClassInstanceCreation":
        args = ", ".join(_render_expr(c) for c in node.children[1:])
        return f"new {node.children[0].label}({args})"
    if t == "ArrayCreation":
        atype = node.children[0].label
        dims = "".join(_render_expr(c) for c in node.children[1:]) or ""
        base, suffix = atype.split("[", 1)
        return f"new {base}[{dims}]{'[' + suffix.split(']', 1)[1] if False else ''}"
    raise ValueError(f"cannot render node type {t}")


def _render_operand(node: AstNode) -> str:
    text = _render_expr(node)
    if node.node_type in ("InfixExpression", "InstanceofExpression"):
        return f"({text})"
    return text


def _render_invocation(node: AstNode) -> str:
    children = node.children
    # receiver-bearing invocations were parsed with the receiver first; a
    # receiver is any child that can itself be an expression target.
    if children and node.label and _looks_like_receiver(children[0], node):
        recv = _render_expr(children[0])
        args = ", ".join(_render_expr(c) for c in children[1:])
        return f"{recv}.{node.label}({args})"
    args = ", ".join(_render_expr(c) for c in children)
    return f"{node.label}({args})"


def _looks_like_receiver(child: AstNode, call: AstNode) -> bool:
    # The refined Method node lost the explicit receiver flag; restore it
    # from parse-time arity stored in name_child (1 meant receiver present).
    return call.name_child == 1 if call.name_child is not None else False


def render_lines(node: AstNode, indent: int = 0) -> list[str]:
    """Render a refined statement or declaration as source lines."""
    pad = "    " * indent
    t = node.node_type
    if t == "Block":
        lines = [pad + "{"]
        for child in node.children:
            lines.extend(render_lines(child, indent + 1))
        lines.append(pad + "}")
        return lines
    if t == "CompilationUnit":
        lines = []
        for child in node.children:
            lines.extend(render_lines(child, indent))
        return lines
    if t == "IfStatement":
        cond = _render_expr(node.children[0])
        lines = [f"{pad}if ({cond})"]
        lines.extend(render_lines(node.children[1], indent))
        if len(node.children) > 2:
            lines.append(pad + "else")
            lines.extend(render_lines(node.children[2], indent))
        return lines
    if t == "ReturnStatement":
        if node.children:
            return [f"{pad}return {_render_expr(node.children[0])};"]
        return [pad + "return;"]
    if t == "VariableDeclaration":
        tnode, name = node.children[0], node.children[1]
        text = f"{pad}{tnode.label} {name.label}"
        if len(node.children) > 2:
            text += f" = {_render_expr(node.children[2])}"
        return [text + ";"]
    if t == "Assignment":
        lhs = _render_expr(node.children[0])
        rhs = _render_expr(node.children[1])
        return [f"{pad}{lhs} {node.label} {rhs};"]
    if t == "ExpressionStatement":
        return [f"{pad}{_render_expr(node.children[0])};"]
    if t == "FieldDeclaration":
        mods = [c.label for c in node.children if c.node_type == "Modifier"]
        rest = [c for c in node.children if c.node_type != "Modifier"]
        text = pad + " ".join(mods + [rest[0].label, node.label or rest[1].label])
        raise ValueError("field declarations are rendered via render_member")
    if t == "MethodDeclaration":
        mods = [c.label for c in node.children if c.node_type == "Modifier"]
        rest = [c for c in node.children if c.node_type != "Modifier"]
        rtype = rest[0]
        params = [c for c in rest[1:] if c.node_type == "SingleVariableDeclaration"]
        body = rest[-1]
        sig = " ".join(mods + [rtype.label, node.label]) + "(" + ", ".join(
            f"{p.children[0].label} {p.children[1].label}" for p in params) + ")"
        lines = [pad + sig]
        lines.extend(render_lines(body, indent))
        return lines
    if t == "ClassDeclaration":
        mods = [c.label for c in node.children if c.node_type == "Modifier"]
        members = [c for c in node.children
                   if c.node_type in ("MethodDeclaration", "FieldDeclaration",
                                      "ClassDeclaration")]
        lines = [pad + " ".join(mods + ["class", node.label]) + " {"]
        for m in members:
            lines.extend(render_lines(m, indent + 1))
        lines.append(pad + "}")
        return lines
    # bare expression at statement position (fragment rendering)
    return [pad + _render_expr(node)]


def render(node: AstNode) -> str:
    return "\n".join(render_lines(node))
