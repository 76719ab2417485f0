"""Discourse model, fact base and answer planning for the appointment
assistant.

Fact-base file format: one ground term per line, an optional trailing
full stop, ``#`` starts a comment::

    see(e6,fatma,ayse).
    time(e6,2).
    one(fatma).
    def(fatma,+).

Entity properties are the facts whose first argument is the entity;
event facts are the facts whose first argument is an event id.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from importlib import resources

from .graph import (NONE, Atom, Complex, Term, TermSet, Var, canon,
                    complex_items, deref, flat_terms, key_predicate, resolve,
                    termset_items, unify_env, variables, walk)
from .lexicon import GIVEN, NEW
from .notation import NotationError, inline, parse_value
from .sign import Sign, entity_of

log = logging.getLogger(__name__)


# ---------------------------------------------------------------- discourse

class DiscourseModel:
    """Entities with their properties and given/new status, plus the
    mention history (one set of mentions per utterance)."""

    def __init__(self):
        self.entities: dict = {}      # name -> props TermSet
        self.given: set = set()
        self.history: list = []       # [frozenset of mention keys]

    def __contains__(self, name):
        return name in self.given

    def is_given(self, name) -> bool:
        return name in self.given

    def register(self, name, props=None, given=True):
        if props is not None or name not in self.entities:
            self.entities[name] = props if props is not None else TermSet()
        if given:
            self.given.add(name)

    def familiarity_of(self, sign: Sign) -> str:
        """New for a nominal whose entity has not been mentioned yet;
        everything else (verbs, adjuncts, particles, wh-items) is given."""
        if sign.entry is None or sign.entry.cls != "noun":
            return GIVEN
        ent = deref(sign.lookup_result, ("sem", "entity"))
        if isinstance(ent, Atom):
            return GIVEN if ent.name in self.given else NEW
        return GIVEN

    def update_discourse(self, sign_or_result) -> "DiscourseModel":
        """Mark every entity in the LF as given and record the mentions."""
        result = sign_or_result.result if isinstance(sign_or_result, Sign) else sign_or_result
        lf = deref(result, ("sem", "lf"))
        mentions = set()
        for group in lf_groups(lf, main=deref(result, ("info", "rheme", "mainprop"))):
            key = group_key(group)
            if key is None:
                continue
            mentions.add(key)
            ent = entity_of(group)
            if isinstance(ent, Atom):
                self.register(ent.name, group)
        self.history.append(frozenset(mentions))
        return self

    def mentioned_before_last(self) -> frozenset:
        """Mentions of the utterance preceding the most recent one."""
        return self.history[-2] if len(self.history) >= 2 else frozenset()


def lf_groups(lf, main=None) -> list:
    """Top-level information groups of an LF: each nested property set,
    and each top-level term other than the main proposition."""
    items, _ = termset_items(walk(lf, {}), {}) if type(walk(lf, {})) is TermSet else ([], None)
    main_c = canon(main) if main is not None else None
    out = []
    mains_seen = False
    for x in items:
        x = walk(x, {})
        if type(x) is TermSet:
            out.append(x)
        elif type(x) is Term:
            if main_c is not None and canon(x) == main_c and not mains_seen:
                mains_seen = True
                continue
            if main_c is None and not mains_seen and len(x.args) >= 2:
                mains_seen = True
                continue
            out.append(TermSet((x,)))
    return out


def group_key(group):
    """Mention key: the entity name for a property set, otherwise the
    canonical text of the (ground) terms."""
    ent = entity_of(group)
    if isinstance(ent, Atom) and not _is_event_group(group):
        return ent.name
    if variables(group):
        return None
    return canon(group)


def _is_event_group(group):
    # adjunct terms such as time(e6,2) describe the event, not an entity
    ent = entity_of(group)
    return isinstance(ent, Atom) and re.fullmatch(r"e\d+", ent.name) is not None


# ---------------------------------------------------------------- facts

class AppointmentConflict(Exception):
    pass


class FactBase:
    def __init__(self, facts=(), path=None):
        self.facts: list = list(facts)
        self.path = path
        self.dirty = False

    @classmethod
    def parse(cls, text, source="<facts>"):
        facts = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.endswith("."):
                line = line[:-1].rstrip()
            try:
                term = parse_value(line, {}, lineno)
            except NotationError as exc:
                raise ValueError(f"{source}:{lineno}: {exc}") from None
            if type(term) not in (Term, Atom) or variables(term):
                raise ValueError(f"{source}:{lineno}: facts must be ground terms")
            facts.append(term)
        return cls(facts)

    @classmethod
    def load(cls, path=None):
        """Load a fact file; ``None`` loads the bundled demo facts."""
        if path is None:
            text = resources.files("setccg.data").joinpath("demo.db").read_text(encoding="utf-8")
            return cls.parse(text, "demo.db")
        fb = cls.parse(Path(path).read_text(encoding="utf-8"), str(path))
        fb.path = Path(path)
        return fb

    def dumps(self) -> str:
        return "".join(inline(f) + ".\n" for f in self.facts)

    def save(self, path=None):
        path = Path(path or self.path)
        path.write_text(self.dumps(), encoding="utf-8")
        self.dirty = False

    def __len__(self):
        return len(self.facts)

    def __contains__(self, term):
        return canon(term) in {canon(f) for f in self.facts}

    # ------------------------------------------------------------ queries

    def query_env(self, pattern, env=None):
        items = [walk(x, {}) for x in _pattern_items(pattern)]
        yield from self._solve(items, {} if env is None else env)

    def _solve(self, items, env):
        if not items:
            yield env
            return
        first = items[0]
        for fact in self.facts:
            if key_predicate(fact) != key_predicate(first):
                continue
            for e in unify_env(first, fact, env):
                yield from self._solve(items[1:], e)

    def db_query(self, pattern) -> list:
        """Every consistent binding of the pattern's variables, as dicts
        from variable name to value (first solution order, no repeats)."""
        vs = variables(resolve(TermSet(tuple(_pattern_items(pattern))), {}))
        out, seen = [], set()
        for env in self.query_env(pattern):
            b = {v.name: resolve(v, env) for v in vs}
            k = canon(TermSet(tuple(Term("b", (Atom(n), x)) for n, x in b.items())))
            if k not in seen:
                seen.add(k)
                out.append(b)
        return out

    def props_of(self, entity) -> TermSet:
        """Property facts about an entity (facts whose first argument it is)."""
        return TermSet(tuple(f for f in self.facts
                             if type(f) is Term and f.args and f.args[0] == entity))

    def entities(self) -> list:
        names = []
        for f in self.facts:
            if type(f) is Term and len(f.args) <= 2 and type(f.args[0]) is Atom:
                n = f.args[0].name
                if not re.fullmatch(r"e\d+", n) and n not in names:
                    names.append(n)
        return names

    def event_facts(self, event) -> list:
        return [f for f in self.facts if type(f) is Term and f.args and f.args[0] == event]

    def _events(self):
        return {f.args[0].name for f in self.facts
                if type(f) is Term and f.args and type(f.args[0]) is Atom
                and re.fullmatch(r"e\d+", f.args[0].name)}

    def fresh_event(self) -> Atom:
        nums = [int(e[1:]) for e in self._events()]
        return Atom(f"e{max(nums, default=0) + 1}")

    def add_appointment(self, agents, time, pred="see") -> Atom:
        """Book ``pred(E, agent1, agent2, ...)`` at ``time``; refuse when
        any agent already has an event at that time."""
        agents = [a if isinstance(a, Atom) else Atom(str(a)) for a in agents]
        time = time if isinstance(time, Atom) else Atom(str(time))
        for f in self.facts:
            if type(f) is Term and f.pred == "time" and f.args[1] == time:
                ev = f.args[0]
                for g in self.event_facts(ev):
                    if g.pred != "time" and any(a in g.args[1:] for a in agents):
                        busy = [a.name for a in agents if a in g.args[1:]]
                        raise AppointmentConflict(
                            f"{', '.join(busy)} already booked at {time.name} ({ev.name})")
        ev = self.fresh_event()
        self.facts.append(Term(pred, (ev,) + tuple(agents)))
        self.facts.append(Term("time", (ev, time)))
        self.dirty = True
        return ev


def _pattern_items(pattern):
    pattern = walk(pattern, {})
    if type(pattern) is TermSet:
        items, _ = termset_items(pattern, {})
        return items
    return list(pattern)


# ---------------------------------------------------------------- planning

class PlanningError(Exception):
    pass


@dataclass
class AnswerPlan:
    particle: str | None          # None, "evet", "hayir-ama" or "hayir"
    gen_input: object | None      # answer DAG, None for a bare negative
    bindings: dict = field(default_factory=dict)

    @property
    def focus(self):
        return deref(self.gen_input, ("info", "rheme", "focus"))


PARTICLE_LF = {"evet": ["yes"], "hayir-ama": ["no", "but"], "hayir": ["no"]}


def _get(node, *path):
    return deref(node, path)


def _flat_keys(node) -> set:
    return {canon(t) for t in flat_terms(node)}


def _covered(group, slot) -> bool:
    if slot is None or walk(slot, {}) == NONE or type(walk(slot, {})) is Var:
        return False
    keys = _flat_keys(slot)
    return all(canon(t) in keys for t in flat_terms(group))


def _merge(groups):
    if not groups:
        return NONE
    items = []
    for g in groups:
        items.extend(termset_items(g, {})[0])
    return TermSet(tuple(items))


def _answer(question_result, lf_items, focus, topic, neutral, background, env):
    syn = _get(question_result, "syn")
    event = _get(question_result, "sem", "event")
    main = _get(question_result, "info", "rheme", "mainprop")
    dag = Complex.of(
        syn=syn,
        sem=Complex.of(type=Atom("decl"), lf=TermSet(tuple(lf_items)), event=event),
        info=Complex.of(
            rheme=Complex.of(focus=focus, mainprop=main),
            theme=Complex.of(topic=topic, neutral=neutral),
            background=background))
    return resolve(dag, env)


def plan_answer(question, db: FactBase, dm: DiscourseModel, wh_predicates=("who", "when")) -> AnswerPlan:
    """Plan an answer to a parsed question.

    The discourse model is expected to contain the question already (the
    assistant updates it right after parsing); material mentioned in the
    utterance before the question is backgrounded, other non-topic,
    non-focus material is neutral."""
    result = question.result if isinstance(question, Sign) else question
    lf = _get(result, "sem", "lf")
    items, _ = termset_items(walk(lf, {}), {})
    qtype = _get(result, "sem", "type")
    wh_terms = [t for t in flat_terms(lf) if key_predicate(t) in set(wh_predicates)]
    if wh_terms:
        return _plan_wh(result, items, wh_terms, db, dm, set(wh_predicates))
    if qtype == Atom("quest"):
        return _plan_yes_no(result, items, db, dm)
    raise PlanningError("not a question")


def _distribute(result, groups, focus, topic, dm, env):
    prev = dm.mentioned_before_last()
    neutral, background = [], []
    for g in groups:
        g_res = resolve(g, env)
        if _covered(g_res, focus) or _covered(g_res, topic):
            continue
        key = group_key(g_res)
        (background if key is not None and key in prev else neutral).append(g_res)
    return _merge(neutral), _merge(background)


def _top_topic(result, env):
    topic = _get(result, "info", "theme", "topic")
    if topic is None or type(walk(topic, {})) is Var:
        return NONE
    return resolve(topic, env)


def _plan_wh(result, items, wh_terms, db, dm, wh_preds):
    main = _get(result, "info", "rheme", "mainprop")
    query = [x for x in items if type(walk(x, {})) is Term and key_predicate(x) not in wh_preds]
    found = next(db.query_env(query), None)
    if found is None:
        return AnswerPlan("hayir", None)
    env = found
    new_items, focus = [], None
    for x in items:
        x = walk(x, {})
        if type(x) is TermSet and any(key_predicate(t) in wh_preds for t in flat_terms(x)):
            ent = resolve(entity_of(x), env)
            props = _props(ent, db, dm)
            new_items.append(props)
            focus = props
        elif type(x) is Term and key_predicate(x) in wh_preds:
            continue
        else:
            new_items.append(x)
    if focus is None:
        # wh-adjunct such as "ne zaman": focus the terms sharing its variable
        wvars = {v for t in wh_terms for v in variables(t)}
        focus = TermSet(tuple(x for x in new_items if type(walk(x, {})) is Term
                              and set(variables(x)) & wvars and canon(x) != canon(main)))
    focus = resolve(focus, env)
    topic = _top_topic(result, env)
    groups = lf_groups(TermSet(tuple(new_items)), main)
    neutral, background = _distribute(result, groups, focus, topic, dm, env)
    dag = _answer(result, new_items, focus, topic, neutral, background, env)
    return AnswerPlan(None, dag, _names(env))


def _plan_yes_no(result, items, db, dm):
    main = _get(result, "info", "rheme", "mainprop")
    query = [x for x in items if type(walk(x, {})) is Term]
    env = next(db.query_env(query), None)
    if env is not None:
        event = resolve(_get(result, "sem", "event"), env)
        known = {canon(resolve(x, env)) for x in query}
        extra = [f for f in db.event_facts(event) if canon(f) not in known]
        focus = TermSet(tuple(extra)) if extra else TermSet((resolve(main, env),))
        new_items = list(extra) + list(items)
        topic = _top_topic(result, env)
        groups = lf_groups(TermSet(tuple(new_items)), main)
        neutral, background = _distribute(result, groups, focus, topic, dm, env)
        return AnswerPlan("evet", _answer(result, new_items, focus, topic, neutral,
                                          background, env), _names(env))
    # not validated: replace the focused entity by a variable and search again
    focus_q = walk(_get(result, "info", "rheme", "focus"), {})
    ent = entity_of(focus_q) if type(focus_q) is TermSet else None
    if not isinstance(ent, Atom):
        return AnswerPlan("hayir", None)
    x = Var("X")
    swap = {ent.name: x}
    new_query = [_replace_atom(q, swap) for q in query]
    env = next(db.query_env(new_query), None)
    if env is None or walk(x, env) == ent:
        return AnswerPlan("hayir", None)
    new_ent = walk(x, env)
    props = _props(new_ent, db, dm)
    fkeys = _flat_keys(focus_q)
    new_items = []
    for it in items:
        it = walk(it, {})
        if type(it) is TermSet and _flat_keys(it) == fkeys:
            new_items.append(props)
        else:
            new_items.append(_replace_atom(it, swap))
    new_result = _replace_in_result(result, swap)
    topic = _top_topic(result, env)
    groups = lf_groups(TermSet(tuple(new_items)), _get(new_result, "info", "rheme", "mainprop"))
    neutral, background = _distribute(new_result, groups, props, topic, dm, env)
    return AnswerPlan("hayir-ama", _answer(new_result, new_items, props, topic, neutral,
                                           background, env), _names(env))


def _props(entity, db, dm):
    props = db.props_of(entity)
    if not props.items and isinstance(entity, Atom) and entity.name in dm.entities:
        props = dm.entities[entity.name]
    if not props.items:
        raise PlanningError(f"no properties known for {inline(entity)}")
    return props


def _names(env):
    return {v.name: resolve(v, env) for v in env if isinstance(v, Var)
            and not variables(resolve(v, env))}


def _replace_atom(node, swap):
    node = walk(node, {})
    t = type(node)
    if t is Atom:
        return swap.get(node.name, node)
    if t is Term:
        return Term(node.pred, tuple(_replace_atom(a, swap) for a in node.args))
    if t is TermSet:
        items, tail = termset_items(node, {})
        return TermSet(tuple(_replace_atom(a, swap) for a in items), tail)
    if t is Complex:
        feats, rest = complex_items(node, {})
        return Complex(tuple((k, _replace_atom(v, swap)) for k, v in feats.items()), rest)
    return node


def _replace_in_result(result, swap):
    feats, rest = complex_items(walk(result, {}), {})
    out = dict(feats)
    out["info"] = _replace_atom(feats["info"], swap)
    return Complex(tuple(out.items()), rest)


# ---------------------------------------------------------------- session

@dataclass
class Response:
    text: str
    plan: AnswerPlan | None = None
    question: Sign | None = None
    answer: Sign | None = None


class Assistant:
    """One dialogue session: parse, update the discourse model, plan,
    realise the particle and the answer, update the model again."""

    def __init__(self, lexicon, db: FactBase, dm: DiscourseModel | None = None,
                 seed_given=True):
        self.lexicon = lexicon
        self.db = db
        if dm is None:
            dm = DiscourseModel()
            if seed_given:
                # the people the assistant keeps a diary for are shared knowledge
                for name in db.entities():
                    dm.register(name, db.props_of(Atom(name)))
        self.dm = dm

    def respond(self, line: str) -> Response:
        from .generator import generate_signs
        from .parser import parse

        signs = parse(line, self.lexicon, self.dm)
        if not signs:
            raise PlanningError("no analysis for that sentence")
        question = signs[0]
        self.dm.update_discourse(question)
        try:
            plan = plan_answer(question, self.db, self.dm, self.lexicon.wh_predicates)
        except PlanningError:
            return Response("(noted)", None, question)
        words = []
        if plan.particle is not None:
            for key in PARTICLE_LF[plan.particle]:
                inp = Complex.of(sem=Complex.of(lf=TermSet((Atom(key),))))
                words.append(" ".join(generate_signs(inp, self.lexicon, self.dm)[0].phon))
        answer = None
        if plan.gen_input is not None:
            answer = generate_signs(plan.gen_input, self.lexicon, self.dm)[0]
            self.dm.update_discourse(plan.gen_input)
            words.append(" ".join(answer.phon))
        return Response(format_answer(words), plan, question, answer)


def format_answer(parts) -> str:
    """'evet', 'fatma ...' -> 'evet, fatma ....'; the particle 'ama' is
    not followed by a comma."""
    text = ""
    for p in parts:
        if not text:
            text = p
        elif text.endswith("ama") and text.split()[-1] == "ama":
            text += " " + p
        else:
            text += ", " + p
    return text + "."
