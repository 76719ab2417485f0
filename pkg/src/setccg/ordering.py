"""Ordering categories and the rewriting rules that gate every combination.

A basic ordering category is ``[comp: Label, payload: Props, unit: U]``;
``comp`` is one of topic/neutral/focus/background or a variable that fits
any slot.  ``unit`` separates phrases from completed clauses so the
identity rule never glues an NP onto a finished verb.  A verb's ordering
category is an :class:`OrdFunctor` whose arguments are slots
``[comp: topic, payload: T]`` etc., consumed innermost (last) first.
"""

from __future__ import annotations

from typing import Iterator

from .graph import (NONE, Atom, Complex, Env, OrdArg, OrdFunctor,
                    Var, complex_items, deref, merge_lf_env, resolve, unify_env,
                    walk)

TOPIC, NEUTRAL, FOCUS, BACKGROUND = "topic", "neutral", "focus", "background"
COMPONENTS = (TOPIC, NEUTRAL, FOCUS, BACKGROUND)

PHRASE = Atom("phrase")
CLAUSE = Atom("clause")


class OrderError(Exception):
    pass


def basic(comp, payload, unit=PHRASE):
    """A basic ordering category; ``comp=None`` gives the wildcard."""
    label = Var("C") if comp is None else Atom(comp)
    return Complex.of(comp=label, payload=payload, unit=unit)


def slot(comp, payload):
    return Complex.of(comp=Atom(comp), payload=payload)


def slot_payload(arg: OrdArg, env: Env):
    feats, _ = complex_items(walk(arg.cat, env), env)
    return feats["payload"]


def slot_label(arg: OrdArg, env: Env) -> str:
    feats, _ = complex_items(walk(arg.cat, env), env)
    return walk(feats["comp"], env).name


def verb_functor(info, lf, focus_optional=False):
    """I/([background: B])\\([topic: T])\\([neutral: N])\\([focus: F]).

    ``info`` is the verb's ``[theme, rheme, background]`` complex; the
    slot payloads are the very same variables, which is what links the
    ordering category to the information structure."""
    result = basic(None, lf, CLAUSE)
    return OrdFunctor(result, (
        OrdArg(slot(BACKGROUND, deref(info, ("background",))), "/", True),
        OrdArg(slot(TOPIC, deref(info, ("theme", "topic"))), "\\", True),
        OrdArg(slot(NEUTRAL, deref(info, ("theme", "neutral"))), "\\", True),
        OrdArg(slot(FOCUS, deref(info, ("rheme", "focus"))), "\\", focus_optional),
    ))


def verb_focus_functor(info, lf):
    """The variant where the verb itself is focused: I/([background: B])."""
    result = basic(None, lf, CLAUSE)
    return OrdFunctor(result, (
        OrdArg(slot(BACKGROUND, deref(info, ("background",))), "/", True),
    ))


def verb_order_categories(sign, focus_optional=False) -> list:
    """Both ordering categories of a verbal sign: the full template and
    the verb-focus variant.  Non-verbal signs have no info and get []."""
    result = sign.result if hasattr(sign, "result") else sign
    info = deref(result, ("info",))
    lf = deref(result, ("sem", "lf"))
    if type(info) is not Complex or lf is None:
        return []
    return [verb_functor(info, lf, focus_optional), verb_focus_functor(info, lf)]


# ---------------------------------------------------------------- rules

def _drop(functor: OrdFunctor, n: int):
    args = functor.args[:len(functor.args) - n]
    return OrdFunctor(functor.result, args) if args else functor.result


def skip_env(functor, env: Env):
    """Skip the innermost argument: bind its payload to ``none``."""
    functor = walk(functor, env)
    if type(functor) is not OrdFunctor:
        raise OrderError("only a functor has arguments to skip")
    arg = functor.args[-1]
    if not arg.optional:
        raise OrderError(f"{slot_label(arg, env)} is obligatory and cannot be skipped")
    for e in unify_env(slot_payload(arg, env), NONE, env):
        return e, _drop(functor, 1)
    return None


def skip_optional(functor, side=None):
    """Skipping an optional slot, as a unary rewrite.  ``side`` ('forward'/'backward'),
    when given, must match the direction of the argument being skipped."""
    functor = walk(functor, {})
    if type(functor) is not OrdFunctor:
        raise OrderError("only a functor has arguments to skip")
    if side is not None:
        want = "/" if side in ("forward", ">") else "\\"
        if functor.args[-1].dir != want:
            raise OrderError(f"innermost argument does not face {side}")
    res = skip_env(functor, {})
    if res is None:
        raise OrderError("skipped slot is already filled")
    e, out = res
    return resolve(out, e)


def close_env(node, env: Env):
    """Skip every remaining argument so the category becomes basic.
    Returns ``(env, basic, n_skipped)`` or None when an obligatory
    argument or an already-filled slot blocks it."""
    node = walk(node, env)
    n = 0
    while type(node) is OrdFunctor:
        try:
            res = skip_env(node, env)
        except OrderError:
            return None
        if res is None:
            return None
        env, node = res
        node = walk(node, env)
        n += 1
    return env, node, n


def _skips_then(functor: OrdFunctor, want_dir: str, env: Env):
    """Yield (env, index, n_skipped) for each argument of direction
    ``want_dir`` reachable by skipping optional inner arguments."""
    n = 0
    k = len(functor.args) - 1
    while k >= 0:
        arg = functor.args[k]
        if arg.dir == want_dir:
            yield env, k, n
        if not arg.optional:
            return
        e = next(unify_env(slot_payload(arg, env), NONE, env), None)
        if e is None:
            return
        env = e
        n += 1
        k -= 1


def _fill(functor, k, filler, env):
    filler_basic = close_env(filler, env)
    if filler_basic is None:
        return
    env, filler_node, n_closed = filler_basic
    for e in unify_env(functor.args[k].cat, filler_node, env):
        yield e, _drop(functor, len(functor.args) - k), n_closed


def ord_combine_env(left, right, env: Env) -> Iterator[tuple]:
    """Backward fill, forward fill and identity, with lazy skipping.  Yields ``(env, result, rule,
    n_skipped)``; ``rule`` is '<', '>' or '='."""
    L = walk(left, env)
    R = walk(right, env)
    if type(R) is OrdFunctor:
        for e, k, n in _skips_then(R, "\\", env):
            for e2, out, n2 in _fill(R, k, L, e):
                yield e2, out, "<", n + n2
    if type(L) is OrdFunctor:
        for e, k, n in _skips_then(L, "/", env):
            for e2, out, n2 in _fill(L, k, R, e):
                yield e2, out, ">", n + n2
    if type(L) is Complex and type(R) is Complex:
        fl, _ = complex_items(L, env)
        fr, _ = complex_items(R, env)
        if walk(fl.get("unit"), env) == CLAUSE or walk(fr.get("unit"), env) == CLAUSE:
            return
        for e in unify_env(fl["comp"], fr["comp"], env):
            for e2 in unify_env(fl.get("unit", PHRASE), fr.get("unit", PHRASE), e):
                payload, e3 = merge_lf_env(fl["payload"], fr["payload"], e2)
                yield e3, Complex.of(comp=fl["comp"], payload=payload,
                                     unit=fl.get("unit", PHRASE)), "=", 0


def ord_combine(left, right):
    return [resolve(out, e) for e, out, _, _ in ord_combine_env(left, right, {})]
