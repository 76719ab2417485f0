import itertools
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from setccg.dialogue import (AppointmentConflict, Assistant, DiscourseModel,
                             FactBase, PlanningError, format_answer)
from setccg.graph import NONE, Atom, Term, canon, deref, flat_terms, unify_first
from setccg.notation import parse_block, parse_value
from setccg.parser import parse

DATA = Path(__file__).parent / "data"

DIALOGUES = [
    ["fatma ayseyi gorebilirmi?", "ikide kimi gorecek fatma?"],
    ["ahmet fatmayi gordu mu?"],
    ["fatma kimi gordu?"],
    ["ahmet ayseyi ne zaman gordu?"],
    ["fatma ayseyi gordu mu?", "ahmet kimi gordu?"],
]


def names(sign):
    return {t.args[0].name for t in flat_terms(sign.lf)
            if type(t) is Term and t.pred == "one" and type(t.args[0]) is Atom}


# ------------------------------------------------------------ discourse model

def test_update_marks_entities_given(lex):
    dm = DiscourseModel()
    dm.register("fatma")
    (s, *_) = parse("fatma ahmeti ariyor", lex, dm)
    assert not dm.is_given("ahmet")
    dm.update_discourse(s)
    assert dm.is_given("ahmet") and dm.is_given("fatma")
    assert "one(ahmet)" in canon(dm.entities["ahmet"])


def test_new_entity_restricted_to_focus_or_neutral(lex):
    dm = DiscourseModel()
    dm.register("fatma")
    for s in parse("fatma ahmeti ariyor", lex, dm):
        assert "ahmet" not in canon(s.info_slot("topic"))
        assert s.info_slot("background") == NONE


def test_empty_model_is_unchanged_without_utterances():
    dm = DiscourseModel()
    assert dm.entities == {} and dm.given == set() and dm.history == []
    assert dm.mentioned_before_last() == frozenset()


def test_history_records_mentions(lex):
    dm = DiscourseModel()
    for text in ("fatma ayseyi gordu", "ahmet gazeteyi okuyor"):
        dm.update_discourse(parse(text, lex)[0])
    assert len(dm.history) == 2
    assert "fatma" in dm.mentioned_before_last()


# ------------------------------------------------------------ fact base

def test_db_query_completing_time(db):
    assert [{k: canon(v) for k, v in b.items()} for b in
            db.db_query(parse_value("[see(E,fatma,ayse), time(E,T)]"))] == [{"E": "e6", "T": "2"}]


def test_db_query_who(db):
    (b,) = db.db_query(parse_value("[see(E,fatma,X), time(E,2)]"))
    assert b["X"] == Atom("ayse")


def test_db_query_unmatchable(db):
    assert db.db_query(parse_value("[see(E,ahmet,fatma)]")) == []


def test_entities_and_props(db):
    assert db.entities() == ["fatma", "ayse", "ahmet"]
    assert canon(db.props_of(Atom("ayse"))) == "{def(ayse,+),one(ayse)}"


def test_add_appointment_on_empty_db():
    fb = FactBase()
    ev = fb.add_appointment(["fatma", "ayse"], 2)
    assert ev == Atom("e1")
    assert sorted(canon(f) for f in fb.facts) == ["see(e1,fatma,ayse)", "time(e1,2)"]


def test_conflicting_appointment_is_refused(db):
    with pytest.raises(AppointmentConflict, match="fatma"):
        db.add_appointment(["fatma", "ahmet"], 2)
    assert db.add_appointment(["fatma", "ahmet"], 4) == Atom("e8")


AGENTS = ["fatma", "ayse", "ahmet", "ali"]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(list(itertools.combinations(AGENTS, 2))),
                          st.integers(1, 4)), max_size=12))
def test_no_double_booking(bookings):
    fb = FactBase()
    for agents, time in bookings:
        try:
            fb.add_appointment(list(agents), time)
        except AppointmentConflict:
            pass
    slots = set()
    for f in fb.facts:
        if f.pred == "see":
            (t,) = [g.args[1] for g in fb.facts if g.pred == "time" and g.args[0] == f.args[0]]
            for a in f.args[1:]:
                assert (a, t) not in slots
                slots.add((a, t))


def test_save_and_reload(tmp_path, db):
    p = tmp_path / "diary.db"
    db.add_appointment(["ali", "veli"], 5)
    db.save(p)
    again = FactBase.load(p)
    assert sorted(map(canon, again.facts)) == sorted(map(canon, db.facts))


def test_bad_fact_file():
    with pytest.raises(ValueError):
        FactBase.parse("see(e1,fatma\n")


# ------------------------------------------------------------ planning

def test_yes_no_validated_plan(lex, db):
    bot = Assistant(lex, db)
    r = bot.respond("fatma ayseyi gorebilirmi?")
    assert r.plan.particle == "evet"
    golden = parse_block((DATA / "run1.dag").read_text())
    assert canon(r.plan.gen_input) == canon(golden)


def test_wh_plan_matches_second_run(lex, db):
    bot = Assistant(lex, db)
    bot.respond("fatma ayseyi gorebilirmi?")
    r = bot.respond("ikide kimi gorecek fatma?")
    assert r.plan.particle is None
    assert canon(r.plan.gen_input) == canon(parse_block((DATA / "run2.dag").read_text()))


def test_failed_yes_no_swaps_focus(lex, db):
    r = Assistant(lex, db).respond("ahmet fatmayi gordu mu?")
    assert r.text == "hayir, ama ahmet ayseyi gordu."
    assert r.plan.particle == "hayir-ama"
    assert "one(ayse)" in canon(r.plan.focus)


def test_bare_negative_without_alternative(lex):
    fb = FactBase.parse("one(fatma).\none(ahmet).\n")
    r = Assistant(lex, fb).respond("ahmet fatmayi gordu mu?")
    assert r.text == "hayir."


def test_declarative_is_noted(lex, db):
    assert Assistant(lex, db).respond("fatma ayseyi gordu").text == "(noted)"


def test_no_analysis_is_a_planning_error(lex, db):
    with pytest.raises(PlanningError):
        Assistant(lex, db).respond("ayse fatma")


@pytest.mark.parametrize("turns", DIALOGUES)
def test_plan_invariants(lex, turns):
    bot = Assistant(lex, FactBase.load())
    for line in turns:
        r = bot.respond(line)
        plan = r.plan
        if plan is None or plan.gen_input is None:
            continue
        inp = plan.gen_input
        assert deref(inp, ("info", "rheme", "focus")) != NONE
        q_topic = r.question.info_slot("topic")
        if plan.particle is None and q_topic != NONE:   # wh-question
            assert unify_first(q_topic, deref(inp, ("info", "theme", "topic"))) is not None
        for slot in (("info", "theme", "topic"), ("info", "background")):
            for t in flat_terms(deref(inp, slot)):
                if type(t) is Term and t.pred in ("one", "many"):
                    assert bot.dm.is_given(t.args[0].name)


def test_planning_is_deterministic(lex):
    outs = []
    for _ in range(2):
        bot = Assistant(lex, FactBase.load())
        outs.append([bot.respond(q).text for q in DIALOGUES[0]])
    assert outs[0] == outs[1]


def test_format_answer():
    assert format_answer(["evet", "fatma gitti"]) == "evet, fatma gitti."
    assert format_answer(["hayir", "ama", "ahmet gitti"]) == "hayir, ama ahmet gitti."
    assert format_answer(["hayir"]) == "hayir."
