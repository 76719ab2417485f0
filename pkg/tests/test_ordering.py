import pytest

from setccg.graph import NONE, Atom, Complex, OrdFunctor, TermSet, canon, walk
from setccg.notation import parse_value
from setccg.ordering import (BACKGROUND, FOCUS, NEUTRAL, TOPIC, OrderError, basic,
                             close_env, ord_combine, ord_combine_env, skip_optional,
                             verb_focus_functor, verb_functor, verb_order_categories)


def info():
    return parse_value("[theme: [topic: T, neutral: N], rheme: [focus: F], background: B]")


def verb(focus_optional=False):
    return verb_functor(info(), parse_value("[read(E,X,Y)]"), focus_optional)


def np(comp, name):
    return basic(comp, TermSet((parse_value(f"one({name})"),)))


def slots(functor):
    return [canon(a.cat) for a in walk(functor, {}).args]


def test_backward_fill_consumes_innermost():
    (out,) = [o for e, o, r, n in ord_combine_env(np(None, "gazete"), verb(), {}) if n == 0]
    assert type(out) is OrdFunctor and len(out.args) == 3


def test_lazy_skip_reaches_outer_slot():
    results = list(ord_combine_env(np(TOPIC, "ayse"), verb(True), {}))
    # topic is two slots out: focus and neutral are skipped on the way
    assert [(r, n) for _, _, r, n in results] == [("<", 2)]


def test_topic_cannot_fill_obligatory_focus():
    assert list(ord_combine_env(np(TOPIC, "ayse"), verb(), {})) == []


def test_forward_fill_background():
    vf = verb_focus_functor(info(), parse_value("[go(E,X)]"))
    out = ord_combine(vf, np(BACKGROUND, "ali"))
    assert len(out) == 1 and type(out[0]) is Complex


def test_wrong_direction_fails():
    vf = verb_focus_functor(info(), parse_value("[go(E,X)]"))
    assert ord_combine(np(BACKGROUND, "ali"), vf) == []


def test_skip_optional_then_close():
    v = verb(True)
    v1 = skip_optional(v, "backward")
    assert len(v1.args) == 3
    res = close_env(v1, {})
    assert res is not None and res[2] == 3


def test_skip_obligatory_focus_raises():
    with pytest.raises(OrderError):
        skip_optional(verb())


def test_skip_direction_checked():
    with pytest.raises(OrderError):
        skip_optional(verb(True), "forward")


def test_skip_basic_raises():
    with pytest.raises(OrderError):
        skip_optional(np(TOPIC, "ali"))


def test_skip_binds_payload_to_none():
    inf = info()
    v = verb_functor(inf, parse_value("[go(E,X)]"), True)
    env, closed, n = close_env(v, {})
    from setccg.graph import deref, resolve
    assert resolve(deref(inf, ("rheme", "focus")), env) == NONE
    assert n == 4


def test_identity_merges_payloads():
    (out,) = ord_combine(np(None, "ali"), np(None, "veli"))
    assert canon(walk(out, {}).get("payload")) == "{one(ali),one(veli)}"


def test_identity_needs_same_component():
    assert ord_combine(np(TOPIC, "ali"), np(FOCUS, "veli")) == []


def test_identity_refused_for_clauses():
    clause = basic(None, TermSet(()), Atom("clause"))
    assert ord_combine(np(None, "ali"), clause) == []


@pytest.mark.parametrize("comps", [(None, None, None), (NEUTRAL, None, NEUTRAL)])
def test_identity_is_associative(comps):
    a, b, c = (np(k, n) for k, n in zip(comps, ("ali", "veli", "can")))
    left = [o for ab in ord_combine(a, b) for o in ord_combine(ab, c)]
    a, b, c = (np(k, n) for k, n in zip(comps, ("ali", "veli", "can")))
    right = [o for bc in ord_combine(b, c) for o in ord_combine(a, bc)]
    assert [canon(x.get("payload")) for x in left] == [canon(x.get("payload")) for x in right]


def test_functor_filler_is_closed_first():
    # a verb-phrase filler must be a closed clause before it fills a slot
    inner = verb(True)
    outs = list(ord_combine_env(inner, verb(True), {}))
    assert outs
    for _, out, rule, n in outs:
        assert n >= 4   # all four filler slots were skipped


def test_verb_order_categories(lex):
    (gaz,) = [s for s in lex.signs_for("gazeteyi") if s.variant == "base"][:1]
    assert verb_order_categories(gaz) == []
    verb_sign = lex.signs_for("okuyor")[0]
    cats = verb_order_categories(verb_sign)
    assert [len(c.args) for c in cats] == [4, 1]
    assert not cats[0].args[-1].optional
    assert verb_order_categories(verb_sign, focus_optional=True)[0].args[-1].optional
