"""Feature graphs and their unification.

Graphs are immutable trees whose shared nodes are expressed through shared
:class:`Var` objects.  Unification never mutates its inputs: it threads a
bindings environment (a plain dict from Var to node) and returns a new
environment, which :func:`resolve` applies to produce the unified graph.

Node kinds:

``Atom``     a symbol (``nom``, ``s``, ``2``, ``+``, ``none``)
``Var``      an unbound variable; identity is object identity
``Complex``  a feature map, always open through its ``rest`` variable
``Term``     a semantic term such as ``see(e6,fatma,ayse)``
``TermSet``  an order-free multiset, optionally open via ``tail``
``Cat``      a {}-CCG functor ``result|{args}``
``Arg``      one member of a functor's argument multiset
``OrdFunctor`` / ``OrdArg``  ordering-category functors
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

Env = dict


class UnificationError(Exception):
    pass


_counter = itertools.count(1)


class Var:
    __slots__ = ("name", "id")

    def __init__(self, name: str = "G"):
        self.name = name
        self.id = next(_counter)

    def __repr__(self):
        return f"_{self.name}{self.id}"


@dataclass(frozen=True)
class Atom:
    name: str

    def __repr__(self):
        return self.name


NONE = Atom("none")


@dataclass(frozen=True)
class Term:
    pred: str
    args: tuple

    def __repr__(self):
        return f"{self.pred}({','.join(map(repr, self.args))})"


@dataclass(frozen=True, eq=False)
class Complex:
    feats: tuple  # ((label, node), ...) in insertion order
    rest: Var = field(default_factory=lambda: Var("R"))

    @classmethod
    def of(cls, mapping=None, **kw) -> "Complex":
        d = dict(mapping or {})
        d.update(kw)
        return cls(tuple(d.items()))

    def get(self, label, default=None):
        for k, v in self.feats:
            if k == label:
                return v
        return default

    def labels(self):
        return [k for k, _ in self.feats]

    def __repr__(self):
        return "[" + ", ".join(f"{k}: {v!r}" for k, v in self.feats) + "]"


@dataclass(frozen=True, eq=False)
class TermSet:
    items: tuple = ()
    tail: Optional[Var] = None

    def __repr__(self):
        body = ", ".join(map(repr, self.items))
        if self.tail is not None:
            body = f"{body} | {self.tail!r}" if body else f"| {self.tail!r}"
        return f"[{body}]"


@dataclass(frozen=True, eq=False)
class Arg:
    cat: object
    dir: object  # Atom('l') / Atom('r') / Var for "either"


@dataclass(frozen=True, eq=False)
class Cat:
    result: object
    args: TermSet


@dataclass(frozen=True, eq=False)
class OrdArg:
    cat: object
    dir: str  # '/' or '\\'
    optional: bool


@dataclass(frozen=True, eq=False)
class OrdFunctor:
    result: object
    args: tuple  # innermost argument last


Node = Union[Atom, Var, Complex, Term, TermSet, Arg, Cat, OrdFunctor]

LEFT = Atom("l")
RIGHT = Atom("r")


# ---------------------------------------------------------------- bindings

def walk(node, env: Env):
    while isinstance(node, Var) and node in env:
        node = env[node]
    return node


def _bind(var: Var, value, env: Env) -> Env:
    new = dict(env)
    new[var] = value
    return new


def complex_items(node: Complex, env: Env):
    """All features of an open complex, following bound rest variables."""
    feats = dict(node.feats)
    rest = walk(node.rest, env)
    while isinstance(rest, Complex):
        for k, v in rest.feats:
            feats.setdefault(k, v)
        rest = walk(rest.rest, env)
    return feats, rest


def termset_items(node: TermSet, env: Env):
    """Flatten a term-set through bound tails -> (items, open tail or None)."""
    items = list(node.items)
    tail = node.tail
    while tail is not None:
        t = walk(tail, env)
        if isinstance(t, TermSet):
            items.extend(t.items)
            tail = t.tail
        elif isinstance(t, Var):
            return items, t
        else:
            raise UnificationError(f"term-set tail bound to {t!r}")
    return items, None


# ---------------------------------------------------------------- unify

def unify_env(a, b, env: Env) -> Iterator[Env]:
    """Yield every environment extending ``env`` under which a = b."""
    a = walk(a, env)
    b = walk(b, env)
    if a is b:
        yield env
        return
    if isinstance(a, Var):
        yield _bind(a, b, env)
        return
    if isinstance(b, Var):
        yield _bind(b, a, env)
        return
    ta, tb = type(a), type(b)
    if ta is Atom:
        if tb is Atom and a.name == b.name:
            yield env
        return
    if ta is Term:
        if tb is Term and a.pred == b.pred and len(a.args) == len(b.args):
            yield from _unify_seq(a.args, b.args, env)
        return
    if ta is Cat or tb is Cat:
        yield from _unify_cat(a, b, env)
        return
    if ta is Complex:
        if tb is Complex:
            yield from _unify_complex(a, b, env)
        return
    if ta is TermSet:
        if tb is TermSet:
            ia, ra = termset_items(a, env)
            ib, rb = termset_items(b, env)
            yield from _match_sets(ia, ra, ib, rb, env)
        return
    if ta is Arg:
        if tb is Arg:
            yield from _unify_seq((a.cat, a.dir), (b.cat, b.dir), env)
        return
    if ta is OrdFunctor:
        if tb is OrdFunctor and len(a.args) == len(b.args):
            if all(x.dir == y.dir and x.optional == y.optional
                   for x, y in zip(a.args, b.args)):
                yield from _unify_seq(
                    (a.result,) + tuple(x.cat for x in a.args),
                    (b.result,) + tuple(y.cat for y in b.args), env)
        return


def _unify_seq(xs, ys, env):
    if not xs:
        yield env
        return
    for e in unify_env(xs[0], ys[0], env):
        yield from _unify_seq(xs[1:], ys[1:], e)


def _unify_cat(a, b, env):
    # X|{} and X are the same category (clean-up rule).
    if type(a) is Cat and type(b) is Cat:
        yield from _unify_seq((a.result, a.args), (b.result, b.args), env)
    elif type(a) is Cat:
        if type(b) in (Complex, Atom):
            yield from _unify_seq((a.result, a.args), (b, TermSet()), env)
    elif type(a) in (Complex, Atom):
        yield from _unify_seq((a, TermSet()), (b.result, b.args), env)


def _unify_complex(a: Complex, b: Complex, env):
    fa, ra = complex_items(a, env)
    fb, rb = complex_items(b, env)
    common = [k for k in fa if k in fb]
    only_a = {k: v for k, v in fa.items() if k not in fb}
    only_b = {k: v for k, v in fb.items() if k not in fa}

    def tails(e):
        if ra is rb:
            if only_a or only_b:
                return
            yield e
            return
        if not only_a and not only_b:
            yield _bind(ra, rb, e)
            return
        fresh = Var("R")
        e = _bind(ra, Complex(tuple(only_b.items()), fresh), e)
        e = _bind(rb, Complex(tuple(only_a.items()), fresh), e)
        yield e

    for e in _unify_seq([fa[k] for k in common], [fb[k] for k in common], env):
        yield from tails(e)


def _match_sets(ia, ra, ib, rb, env):
    """Multiset unification of two possibly open term-sets."""
    if not ia:
        if ra is None:
            if ib:
                return
            if rb is None:
                yield env
            else:
                yield _bind(rb, TermSet(), env)
            return
        if ra is rb:
            if not ib:
                yield env
            return
        yield _bind(ra, TermSet(tuple(ib), rb), env)
        return
    first, rest_a = ia[0], ia[1:]
    for j, item in enumerate(ib):
        for e in unify_env(first, item, env):
            yield from _match_sets(rest_a, ra, ib[:j] + ib[j + 1:], rb, e)
    if rb is not None and rb is not ra:
        fresh = Var("T")
        e = _bind(rb, TermSet((first,), fresh), env)
        yield from _match_sets(rest_a, ra, ib, fresh, e)


def unify_all(a, b, env: Optional[Env] = None) -> Iterator[Env]:
    return unify_env(a, b, {} if env is None else env)


def unify_first(a, b, env: Optional[Env] = None) -> Optional[Env]:
    return next(unify_all(a, b, env), None)


def unify(a, b):
    """Unify two graphs; return the unified graph or None on failure."""
    env = unify_first(a, b)
    if env is None:
        return None
    return resolve(a, env)


# ---------------------------------------------------------------- resolve

def resolve(node, env: Env):
    """Substitute bindings throughout ``node``, producing a fresh graph."""
    node = walk(node, env)
    t = type(node)
    if t is Var or t is Atom:
        return node
    if t is Term:
        return Term(node.pred, tuple(resolve(x, env) for x in node.args))
    if t is Complex:
        feats, rest = complex_items(node, env)
        return Complex(tuple((k, resolve(v, env)) for k, v in feats.items()), rest)
    if t is TermSet:
        items, tail = termset_items(node, env)
        return TermSet(tuple(resolve(x, env) for x in items), tail)
    if t is Arg:
        return Arg(resolve(node.cat, env), resolve(node.dir, env))
    if t is Cat:
        return cleanup(Cat(resolve(node.result, env), resolve(node.args, env)))
    if t is OrdFunctor:
        args = tuple(OrdArg(resolve(a.cat, env), a.dir, a.optional) for a in node.args)
        if not args:
            return resolve(node.result, env)
        return OrdFunctor(resolve(node.result, env), args)
    raise TypeError(f"not a graph node: {node!r}")


def cleanup(cat):
    """X|{} rewrites to X; anything else is returned unchanged."""
    if type(cat) is Cat and not cat.args.items and cat.args.tail is None:
        return cat.result
    return cat


def rename(node, mapping: Optional[dict] = None):
    """Copy ``node`` with every variable replaced by a fresh one."""
    if mapping is None:
        mapping = {}

    def fresh(v):
        if v not in mapping:
            mapping[v] = Var(v.name)
        return mapping[v]

    def go(n):
        t = type(n)
        if t is Var:
            return fresh(n)
        if t is Atom:
            return n
        if t is Term:
            return Term(n.pred, tuple(go(x) for x in n.args))
        if t is Complex:
            return Complex(tuple((k, go(v)) for k, v in n.feats), fresh(n.rest))
        if t is TermSet:
            return TermSet(tuple(go(x) for x in n.items),
                           None if n.tail is None else fresh(n.tail))
        if t is Arg:
            return Arg(go(n.cat), go(n.dir))
        if t is Cat:
            return Cat(go(n.result), go(n.args))
        if t is OrdFunctor:
            return OrdFunctor(go(n.result),
                              tuple(OrdArg(go(a.cat), a.dir, a.optional) for a in n.args))
        raise TypeError(f"not a graph node: {n!r}")

    return go(node)


# ---------------------------------------------------------------- queries

ABSENT = None


def deref(g, path, env: Optional[Env] = None):
    """Follow feature labels from ``g``; return the node or None."""
    env = env or {}
    node = walk(g, env)
    for label in path:
        if type(node) is Complex:
            feats, _ = complex_items(node, env)
            if label not in feats:
                return ABSENT
            node = walk(feats[label], env)
        elif type(node) is Cat and label in ("result", "args"):
            node = walk(getattr(node, label), env)
        elif type(node) is OrdFunctor and label == "result":
            node = walk(node.result, env)
        else:
            return ABSENT
    return node


def variables(node) -> list:
    """Unbound variables of a resolved graph, in first-occurrence order."""
    seen: dict = {}

    def go(n):
        t = type(n)
        if t is Var:
            seen.setdefault(n, None)
        elif t is Term:
            for x in n.args:
                go(x)
        elif t is Complex:
            for _, v in n.feats:
                go(v)
        elif t is TermSet:
            for x in n.items:
                go(x)
            if n.tail is not None:
                go(n.tail)
        elif t is Arg:
            go(n.cat)
            go(n.dir)
        elif t is Cat:
            go(n.result)
            go(n.args)
        elif t is OrdFunctor:
            go(n.result)
            for a in n.args:
                go(a.cat)

    go(node)
    return list(seen)


def canon(node) -> str:
    """Deterministic text for a resolved graph, variables numbered by
    first occurrence and term-set members sorted.  Two graphs are equal up
    to variable renaming iff their canonical strings match, modulo the
    ordering heuristic for term-sets containing variables."""
    names: dict = {}

    def go(n) -> str:
        t = type(n)
        if t is Var:
            if n not in names:
                names[n] = f"V{len(names)}"
            return names[n]
        if t is Atom:
            return n.name
        if t is Term:
            return f"{n.pred}({','.join(go(x) for x in n.args)})"
        if t is Complex:
            return "[" + ",".join(f"{k}:{go(v)}" for k, v in sorted(n.feats, key=lambda kv: kv[0])) + "]"
        if t is TermSet:
            parts = sorted(go(x) for x in n.items)
            tail = "" if n.tail is None else "|" + go(n.tail)
            return "{" + ",".join(parts) + tail + "}"
        if t is Arg:
            return f"<{go(n.dir)}>{go(n.cat)}"
        if t is Cat:
            return f"({go(n.result)}|{go(n.args)})"
        if t is OrdFunctor:
            return "(" + go(n.result) + "".join(
                f"{a.dir}{'?' if a.optional else ''}{go(a.cat)}" for a in n.args) + ")"
        raise TypeError(n)

    return go(node)


def equivalent(a, b) -> bool:
    """Equality up to variable renaming, checked by mutual subsumption."""
    return canon(a) == canon(b) or (_subsumes(a, b) and _subsumes(b, a))


def _subsumes(general, specific) -> bool:
    # Freeze the specific side's variables as atoms, then unify.
    frozen = {v: Atom(f"$frozen{v.id}") for v in variables(specific)}
    return unify_first(general, resolve(specific, frozen)) is not None


# ---------------------------------------------------------------- LF sets

def key_predicate(item) -> Optional[str]:
    if type(item) is Term:
        return item.pred
    if type(item) is Atom:
        return item.name
    return None


def flat_terms(node, env: Optional[Env] = None) -> list:
    """All terms of an LF, descending into nested term-sets."""
    env = env or {}
    node = walk(node, env)
    if type(node) is TermSet:
        out = []
        items, _ = termset_items(node, env)
        for x in items:
            out.extend(flat_terms(x, env))
        return out
    if type(node) in (Term, Atom):
        return [node]
    return []


def merge_lf_env(a, b, env: Env):
    """Merge two term-sets under ``env``; return (TermSet, env).

    Same-key terms whose arguments unify are merged (binding variables);
    terms that fail to unify are kept side by side."""
    ia, ta = termset_items(walk(a, env), env)
    ib, tb = termset_items(walk(b, env), env)
    out = list(ia)
    used = set()
    for item in ib:
        merged = False
        key = key_predicate(walk(item, env))
        for i, existing in enumerate(out):
            if i in used or i >= len(ia):
                continue
            if key is None or key_predicate(walk(existing, env)) != key:
                continue
            e = unify_first(existing, item, env)
            if e is not None:
                env = e
                used.add(i)
                merged = True
                break
        if not merged:
            out.append(item)
    if ta is not None and tb is not None and ta is not tb:
        env = _bind(tb, TermSet((), ta), env)
    tail = ta if ta is not None else tb
    return TermSet(tuple(out), tail), env


def merge_lf(a, b) -> TermSet:
    ts, env = merge_lf_env(a, b, {})
    return resolve(ts, env)
