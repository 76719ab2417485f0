"""Text forms of feature graphs.

Inline form::

    [cat: np, case: acc]          complex
    [see(E,X,Y), Xlf | Rest]      term-set, optionally open
    see(e6,fatma,ayse)            term
    nom  2  +  none               atoms
    E  Xlf  _                     variables (capitalised or leading '_')

Block form is the indented ``label : value`` layout used for answer dumps;
long inline values may wrap onto following lines while brackets are open.
"""

from __future__ import annotations

import re

from .graph import (Arg, Atom, Cat, Complex, OrdFunctor, Term, TermSet, Var,
                    termset_items, walk)


class NotationError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


_TOKEN = re.compile(r"\s*(?:([A-Za-z0-9_+\-.]+)|(\S))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        out.append(m.group(1) or m.group(2))
        pos = m.end()
    return out


def _is_var(tok):
    return tok[0] == "_" or tok[0].isupper()


class _Reader:
    def __init__(self, text, scope, line=None):
        self.toks = _tokenize(text)
        self.i = 0
        self.scope = scope
        self.line = line

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise NotationError("unexpected end of input", self.line)
        if expected is not None and tok != expected:
            raise NotationError(f"expected {expected!r}, found {tok!r}", self.line)
        self.i += 1
        return tok

    def done(self):
        return self.i >= len(self.toks)

    def var(self, name):
        if name == "_":
            return Var("G")
        if name not in self.scope:
            self.scope[name] = Var(name.lstrip("_") or "G")
        return self.scope[name]

    def value(self):
        tok = self.take()
        if tok == "[":
            return self.bracket()
        if tok in "]),:|{}(":
            raise NotationError(f"unexpected {tok!r}", self.line)
        if _is_var(tok):
            return self.var(tok)
        if self.peek() == "(":
            self.take("(")
            args = []
            if self.peek() != ")":
                args.append(self.value())
                while self.peek() == ",":
                    self.take(",")
                    args.append(self.value())
            self.take(")")
            return Term(tok, tuple(args))
        return Atom(tok)

    def bracket(self):
        if self.peek() == "]":
            self.take("]")
            return TermSet()
        if self.peek(1) == ":" and self.peek() is not None and not _is_var(self.peek()):
            feats = {}
            while True:
                label = self.take()
                self.take(":")
                if label in feats:
                    raise NotationError(f"duplicate feature {label!r}", self.line)
                feats[label] = self.value()
                if self.peek() == ",":
                    self.take(",")
                    continue
                self.take("]")
                return Complex.of(feats)
        items = []
        tail = None
        if self.peek() != "|":
            items.append(self.value())
            while self.peek() == ",":
                self.take(",")
                items.append(self.value())
        if self.peek() == "|":
            self.take("|")
            tok = self.take()
            if not _is_var(tok):
                raise NotationError("term-set tail must be a variable", self.line)
            tail = self.var(tok)
        self.take("]")
        return TermSet(tuple(items), tail)


def parse_value(text, scope=None, line=None):
    """Parse one inline value.  ``scope`` maps variable names to Vars so
    that repeated names across calls denote the same node."""
    r = _Reader(text, {} if scope is None else scope, line)
    v = r.value()
    if not r.done():
        raise NotationError(f"trailing input {r.peek()!r}", line)
    return v


def _balance(s):
    return s.count("[") + s.count("(") - s.count("]") - s.count(")")


def parse_block(text, scope=None):
    """Parse the indented ``label : value`` layout into a Complex."""
    scope = {} if scope is None else scope
    logical = []  # (indent, text, lineno)
    pending = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        if pending is not None:
            pending[1] += " " + raw.strip()
            if _balance(pending[1]) <= 0:
                logical.append(tuple(pending))
                pending = None
            continue
        indent = len(raw) - len(raw.lstrip())
        entry = [indent, raw.strip(), lineno]
        if _balance(entry[1]) > 0:
            pending = entry
        else:
            logical.append(tuple(entry))
    if pending is not None:
        raise NotationError("unclosed bracket", pending[2])

    pos = 0

    def parse_level(min_indent):
        nonlocal pos
        feats = {}
        level = None
        while pos < len(logical):
            indent, body, lineno = logical[pos]
            if indent < min_indent or (level is not None and indent < level):
                break
            if level is None:
                level = indent
            elif indent > level:
                raise NotationError("unexpected indentation", lineno)
            label, sep, rest = body.partition(":")
            label = label.strip()
            if not sep or not label:
                raise NotationError(f"expected 'label : value', got {body!r}", lineno)
            if label in feats:
                raise NotationError(f"duplicate feature {label!r}", lineno)
            pos += 1
            rest = rest.strip()
            if rest:
                feats[label] = parse_value(rest, scope, lineno)
            else:
                if pos < len(logical) and logical[pos][0] > indent:
                    feats[label] = parse_level(logical[pos][0])
                else:
                    feats[label] = Var(label.capitalize())
        return Complex.of(feats)

    result = parse_level(0)
    if pos != len(logical):
        raise NotationError("inconsistent indentation", logical[pos][2])
    return result


# ---------------------------------------------------------------- printing

def inline(node, env=None, nested=False) -> str:
    env = env or {}
    node = walk(node, env)
    t = type(node)
    if t is Var:
        return repr(node)
    if t is Atom:
        return node.name
    if t is Term:
        return f"{node.pred}({','.join(inline(x, env, True) for x in node.args)})"
    if t is Complex:
        return "[" + ", ".join(f"{k}: {inline(v, env)}" for k, v in node.feats) + "]"
    if t is TermSet:
        items, tail = termset_items(node, env)
        sep = "," if nested else ", "
        body = sep.join(inline(x, env, True) for x in items)
        if tail is not None:
            body += f" | {tail!r}"
        return f"[{body}]"
    if t in (Cat, Arg, OrdFunctor):
        from .categories import short
        return short(node, env)
    raise TypeError(node)


def block(node, indent=0, env=None, step=2) -> str:
    """Render a Complex in the indented dump layout."""
    env = env or {}
    node = walk(node, env)
    pad = " " * indent
    lines = []
    for label, value in node.feats:
        value = walk(value, env)
        if type(value) is Complex and value.feats:
            lines.append(f"{pad}{label} :")
            lines.append(block(value, indent + step, env, step))
        else:
            lines.append(f"{pad}{label} : {inline(value, env)}")
    return "\n".join(lines)
