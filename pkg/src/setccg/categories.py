"""{}-CCG categories: multiset application, composition, type-raising.

A functor is ``Cat(result, TermSet[Arg, ...])``.  Argument sets are
order-free; an open ``tail`` on the set is the rest variable written
``...`` in the rules.  Argument directions are ``l`` (found to the left of
the functor), ``r`` (to the right) or an unbound variable (either side).
"""

from __future__ import annotations

from typing import Iterator

from .graph import (LEFT, RIGHT, Arg, Atom, Cat, Complex, Env, TermSet, Var,
                    complex_items, resolve, termset_items,
                    unify_env, walk)

BACKWARD = "backward"  # argument on the left of the functor
FORWARD = "forward"    # argument on the right

_SIDE_DIR = {BACKWARD: LEFT, FORWARD: RIGHT}
_ALIASES = {"leftward": BACKWARD, "rightward": FORWARD, "<": BACKWARD, ">": FORWARD}


def _side(side):
    side = _ALIASES.get(side, side)
    if side not in _SIDE_DIR:
        raise ValueError(f"unknown direction {side!r}")
    return side


def is_functor(node, env=None) -> bool:
    node = walk(node, env or {})
    if type(node) is not Cat:
        return False
    items, tail = termset_items(node.args, env or {})
    return bool(items) or tail is not None


def functor_args(cat, env: Env):
    return termset_items(walk(cat.args, env), env)


def apply_env(functor, arg, side, env: Env) -> Iterator[tuple]:
    """Application: consume one member of the functor's argument set.

    Yields ``(env, result)`` for every member that unifies with ``arg`` in
    a compatible direction; results are clean-up-normalised on resolve."""
    side = _side(side)
    functor = walk(functor, env)
    if type(functor) is not Cat:
        return
    items, tail = functor_args(functor, env)
    want = _SIDE_DIR[side]
    for i, item in enumerate(items):
        item = walk(item, env)
        for e1 in unify_env(item.dir, want, env):
            for e2 in unify_env(item.cat, arg, e1):
                rest = TermSet(tuple(items[:i] + items[i + 1:]), tail)
                yield e2, Cat(functor.result, rest)


def compose_env(left, right, side, env: Env) -> Iterator[tuple]:
    """Composition.  Forward: X|{Y>, ...1} + Y|{...2} => X|{...1, ...2};
    backward is the mirror image with the head functor on the right."""
    side = _side(side)
    head, other = (left, right) if side == FORWARD else (right, left)
    head = walk(head, env)
    other = walk(other, env)
    if type(head) is not Cat or type(other) is not Cat:
        return
    h_items, h_tail = functor_args(head, env)
    o_items, o_tail = functor_args(other, env)
    if not o_items and o_tail is None:
        return
    if h_tail is not None and o_tail is not None:
        return
    want = _SIDE_DIR[side]
    for i, item in enumerate(h_items):
        item = walk(item, env)
        for e1 in unify_env(item.dir, want, env):
            for e2 in unify_env(item.cat, other.result, e1):
                # other's argument set may have grown through its rest variable
                o_now, o_tail_now = termset_items(walk(other.args, e2), e2)
                h_rest = h_items[:i] + h_items[i + 1:]
                tail = h_tail if h_tail is not None else o_tail_now
                if h_tail is not None and o_tail_now is not None:
                    continue
                yield e2, Cat(head.result, TermSet(tuple(h_rest + o_now), tail))


def apply(functor, arg, side):
    """All results of applying ``functor`` to ``arg``; [] on failure."""
    return [resolve(r, e) for e, r in apply_env(functor, arg, side, {})]


def compose(left, right, side):
    return [resolve(r, e) for e, r in compose_env(left, right, side, {})]


def type_raise(noun_cat, direction="rightward"):
    """Type-raising: N+case => (S|{...}) | (S|{N_case, ...}).

    ``rightward`` seeks the verb on its right, which in turn found the
    noun on its left; ``leftward`` is the postverbal variant.  The rest
    variable is shared, so the verb's remaining arguments survive."""
    side = _side(direction)
    outer, inner = (RIGHT, LEFT) if side == FORWARD else (LEFT, RIGHT)
    # the raised functor works over verbal categories only
    verb = Complex.of(syn=Complex.of(cat=Atom("s")))
    rest = Var("Rest")
    seeks = Cat(verb, TermSet((Arg(noun_cat, inner),), rest))
    return Cat(Cat(verb, TermSet((), rest)), TermSet((Arg(seeks, outer),)))


def innermost_result(cat, env=None):
    env = env or {}
    cat = walk(cat, env)
    while type(cat) is Cat:
        cat = walk(cat.result, env)
    return cat


# ---------------------------------------------------------------- notation

_CASE = {"nom": "Nn", "acc": "Na", "gen": "Ng", "dat": "Nd", "loc": "Nl"}


def _basic_label(node, env):
    node = walk(node, env)
    if type(node) is Var:
        return "X"
    if type(node) is Atom:
        return node.name
    if type(node) is not Complex:
        return "?"
    feats, _ = complex_items(node, env)
    syn = walk(feats.get("syn"), env)
    if type(syn) is not Complex:
        if "comp" in feats:
            comp = walk(feats["comp"], env)
            return comp.name.capitalize() if type(comp) is Atom else "Any"
        return "X"
    sf, _ = complex_items(syn, env)
    cat = walk(sf.get("cat"), env)
    case = walk(sf.get("case"), env)
    name = cat.name if type(cat) is Atom else "X"
    if name == "np":
        return _CASE.get(case.name, "N") if type(case) is Atom else "N"
    if name == "s":
        return "S_na" if type(case) is Atom and case.name == "acc" else "S"
    return name.capitalize() if name else "X"


def short(node, env=None) -> str:
    """Compact category notation, e.g. ``S|{Nn, Na}`` or ``(S|{...})|{>(S|{<Na, ...})}``.

    Direction marks: ``<`` left, ``>`` right, none when unconstrained."""
    from .graph import OrdFunctor
    env = env or {}
    node = walk(node, env)
    if type(node) is Cat:
        items, tail = termset_items(walk(node.args, env), env)
        parts = []
        for it in items:
            it = walk(it, env)
            d = walk(it.dir, env)
            mark = {"l": "<", "r": ">"}.get(d.name, "") if type(d) is Atom else ""
            sub = short(it.cat, env)
            if type(walk(it.cat, env)) is Cat:
                sub = f"({sub})"
            parts.append(mark + sub)
        if tail is not None:
            parts.append("...")
        res = short(node.result, env)
        if type(walk(node.result, env)) is Cat:
            res = f"({res})"
        return f"{res}|{{{', '.join(parts)}}}"
    if type(node) is OrdFunctor:
        out = "I"
        for a in node.args:
            lab = _basic_label(a.cat, env)
            out += f"{a.dir}({lab})" if a.optional else f"{a.dir}{lab}"
        return out
    return _basic_label(node, env)
