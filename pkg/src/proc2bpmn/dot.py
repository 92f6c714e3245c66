"""Minimal DOT parser used to validate emitted graph files.

Covers the subset of the DOT grammar the emitter produces: a single digraph
with node statements, edge statements, attribute assignments and (possibly
nested) subgraphs.  Quoted identifiers support backslash escapes.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field


class DotParseError(Exception):
    pass


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<quoted>"(?:[^"\\]|\\.)*")
  | (?P<arrow>->)
  | (?P<sym>[{}\[\];=,])
  | (?P<bare>[A-Za-z0-9_.+-]+)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DotParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        if m.lastgroup != "ws":
            tokens.append(m.group())
    return tokens


@dataclass
class DotGraph:
    name: str
    nodes: dict[str, dict] = field(default_factory=dict)
    edges: list[tuple[str, str, dict]] = field(default_factory=list)
    subgraphs: dict[str, "DotGraph"] = field(default_factory=dict)

    def all_nodes(self) -> dict[str, dict]:
        out = dict(self.nodes)
        for sg in self.subgraphs.values():
            out.update(sg.all_nodes())
        return out

    def all_edges(self) -> list[tuple[str, str, dict]]:
        out = list(self.edges)
        for sg in self.subgraphs.values():
            out.extend(sg.all_edges())
        return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise DotParseError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, value):
        tok = self.next()
        if tok != value:
            raise DotParseError(f"expected {value!r}, got {tok!r}")
        return tok

    @staticmethod
    def unquote(tok: str) -> str:
        if tok.startswith('"'):
            body = tok[1:-1]
            return re.sub(r"\\(.)", r"\1", body)
        return tok

    def parse(self) -> DotGraph:
        if self.next() != "digraph":
            raise DotParseError("expected 'digraph'")
        name = ""
        if self.peek() != "{":
            name = self.unquote(self.next())
        graph = DotGraph(name)
        self.expect("{")
        self.parse_body(graph)
        if self.peek() is not None:
            raise DotParseError(f"trailing tokens after graph body: {self.peek()!r}")
        return graph

    def parse_body(self, graph: DotGraph):
        while True:
            tok = self.peek()
            if tok is None:
                raise DotParseError("unterminated graph body")
            if tok == "}":
                self.next()
                return
            if tok == "subgraph":
                self.next()
                sub_name = ""
                if self.peek() != "{":
                    sub_name = self.unquote(self.next())
                sub = DotGraph(sub_name)
                self.expect("{")
                self.parse_body(sub)
                graph.subgraphs[sub_name] = sub
                continue
            first = self.unquote(self.next())
            nxt = self.peek()
            if nxt == "=":  # graph-level attribute, e.g. rankdir=LR
                self.next()
                self.unquote(self.next())
                if self.peek() == ";":
                    self.next()
                continue
            if nxt == "->":
                self.next()
                target = self.unquote(self.next())
                attrs = self.parse_attrs()
                graph.edges.append((first, target, attrs))
            elif first in ("node", "edge", "graph") and nxt == "[":
                self.parse_attrs()  # default attribute statement
            else:
                attrs = self.parse_attrs()
                graph.nodes[first] = attrs
            if self.peek() == ";":
                self.next()

    def parse_attrs(self) -> dict:
        attrs: dict[str, str] = {}
        if self.peek() != "[":
            return attrs
        self.next()
        while True:
            tok = self.next()
            if tok == "]":
                return attrs
            if tok == ",":
                continue
            key = self.unquote(tok)
            self.expect("=")
            attrs[key] = self.unquote(self.next())


def parse_dot(text: str) -> DotGraph:
    """Parse DOT text, raising DotParseError if it does not fit the grammar."""
    return _Parser(_tokenize(text)).parse()
