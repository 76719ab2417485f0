"""Full-form lexicon: file format, lookup with lexical type-raising, and
familiarity-driven ordering categories.

File format (one record per entry, ``#`` comments)::

    entry ayseyi
      display Ayşe'yi
      class noun                 # verb | noun | adjunct | particle
      key one                    # key predicate, must occur in the LF
      syn [cat: np, case: acc]
      sem [entity: ayse, props: [one(ayse), def(ayse,+)]]
      postverbal yes             # also gets the leftward-raised variant
      roles topic background     # restrict the ordering components
      wh yes                     # item marks a constituent question
    end

Verbs list their arguments one per ``arg`` line, direction first
(``~`` either, ``<`` left, ``>`` right)::

      arg ~ [syn: [cat: np, case: nom], sem: [entity: X, props: Xlf]]

Variable names are scoped to their record.  The entry name may contain
spaces for multiword items (``entry ne zaman``).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .categories import type_raise
from .graph import (LEFT, NONE, RIGHT, Arg, Atom, Cat, Complex, TermSet, Var,
                    canon, complex_items, flat_terms, key_predicate, rename,
                    resolve, unify_first, walk)
from .notation import NotationError, parse_value
from .ordering import (BACKGROUND, COMPONENTS, FOCUS, NEUTRAL, TOPIC, basic,
                       verb_focus_functor, verb_functor)
from .sign import Sign

log = logging.getLogger(__name__)

CLASSES = ("verb", "noun", "adjunct", "particle")
NEW, GIVEN = "new", "given"
_DIRS = {"~": None, "<": LEFT, ">": RIGHT}


class LexiconError(ValueError):
    pass


@dataclass
class Entry:
    phon: str
    cls: str = ""
    key: str = ""
    display: str = ""
    syn: object = None
    sem: object = None
    args: list = field(default_factory=list)  # [(dir or None, graph)]
    roles: frozenset | None = None
    postverbal: bool = False
    wh: bool = False
    line: int = 0

    @property
    def lf_terms(self):
        if self.cls == "noun":
            return flat_terms(_feat(self.sem, "props"))
        return flat_terms(_feat(self.sem, "lf"))


def _feat(node, label):
    if type(node) is not Complex:
        return None
    feats, _ = complex_items(node, {})
    return feats.get(label)


def parse_lexicon(text: str, source: str = "<lexicon>") -> list:
    entries = []
    cur = None
    scope = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if word == "entry":
                if cur is not None:
                    raise NotationError("missing 'end'", lineno)
                if not rest:
                    raise NotationError("entry needs a phonological form", lineno)
                cur = Entry(phon=rest, display=rest, line=lineno)
                scope = {}
            elif cur is None:
                raise NotationError(f"{word!r} outside an entry", lineno)
            elif word == "end":
                entries.append(cur)
                cur = None
            elif word == "display":
                cur.display = rest
            elif word == "class":
                if rest not in CLASSES:
                    raise NotationError(f"unknown class {rest!r}", lineno)
                cur.cls = rest
            elif word == "key":
                cur.key = rest
            elif word in ("syn", "sem"):
                setattr(cur, word, parse_value(rest, scope, lineno))
            elif word == "arg":
                mark, _, graph = rest.partition(" ")
                if mark not in _DIRS:
                    raise NotationError(f"bad direction {mark!r}", lineno)
                cur.args.append((_DIRS[mark], parse_value(graph, scope, lineno)))
            elif word == "roles":
                roles = rest.split()
                if roles != ["any"]:
                    bad = [r for r in roles if r not in COMPONENTS]
                    if bad:
                        raise NotationError(f"unknown role {bad[0]!r}", lineno)
                    cur.roles = frozenset(roles)
            elif word in ("postverbal", "wh"):
                if rest not in ("yes", "no"):
                    raise NotationError(f"{word} takes yes/no", lineno)
                setattr(cur, word, rest == "yes")
            else:
                raise NotationError(f"unknown field {word!r}", lineno)
        except NotationError as exc:
            raise LexiconError(f"{source}:{exc.line or lineno}: {exc}") from None
    if cur is not None:
        raise LexiconError(f"{source}:{cur.line}: entry {cur.phon!r} has no 'end'")
    return entries


def _validate(entry: Entry, source: str):
    where = f"{source}:{entry.line}: entry {entry.phon!r}"
    if not entry.cls:
        raise LexiconError(f"{where}: missing class")
    if not entry.key:
        raise LexiconError(f"{where}: missing key predicate")
    if entry.sem is None:
        raise LexiconError(f"{where}: missing sem")
    if entry.cls in ("verb", "noun", "particle") and entry.syn is None:
        raise LexiconError(f"{where}: missing syn")
    if entry.cls == "verb" and not entry.args:
        raise LexiconError(f"{where}: a verb needs at least one arg")
    if entry.cls == "adjunct" and _feat(entry.sem, "event") is None:
        raise LexiconError(f"{where}: adjunct sem needs an event")
    if entry.key not in {key_predicate(t) for t in entry.lf_terms}:
        raise LexiconError(f"{where}: key predicate {entry.key!r} does not occur in its LF")


class Lexicon:
    def __init__(self, entries=(), focus_optional=False, source="<lexicon>"):
        self.focus_optional = focus_optional
        self.entries = []
        self.by_phon: dict = {}
        self.by_key: dict = {}
        seen = set()
        for e in entries:
            _validate(e, source)
            sig = (e.phon, canon(TermSet((Atom(e.cls), e.syn or NONE, e.sem,
                                          TermSet(tuple(g for _, g in e.args))))))
            if sig in seen:
                raise LexiconError(f"{source}:{e.line}: duplicate entry {e.phon!r}")
            seen.add(sig)
            self.entries.append(e)
            self.by_phon.setdefault(e.phon, []).append(e)
            self.by_key.setdefault(e.key, []).append(e)
        self.wh_predicates = frozenset(e.key for e in self.entries if e.wh)
        self.max_words = max((len(p.split()) for p in self.by_phon), default=1)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, phon):
        return phon in self.by_phon

    # ------------------------------------------------------------ signs

    def lookup(self, token: str) -> list:
        """Signs for a (possibly multiword) form, freshly renamed.

        Nominals and adjuncts come back with a wildcard ordering category
        plus their type-raised variants; verbs come back once per ordering
        category.  Unknown forms give []."""
        out = []
        for entry in self.by_phon.get(token, []):
            out.extend(self.entry_signs(entry))
        return out

    def entry_signs(self, entry: Entry) -> list:
        if entry.cls == "verb":
            return self._verb_signs(entry)
        if entry.cls == "adjunct":
            return self._adjunct_signs(entry)
        mapping = {}
        syn = rename(entry.syn, mapping)
        sem = rename(entry.sem, mapping)
        cat = Complex.of(syn=syn, sem=sem)
        phon = tuple(entry.phon.split())
        if entry.cls == "particle":
            return [Sign(phon, cat, basic(None, _feat(sem, "lf")), entry=entry, variant="base")]
        order = basic(None, _feat(sem, "props"))
        signs = [Sign(phon, cat, order, entry=entry, variant="base")]
        signs.append(Sign(phon, type_raise(cat, "rightward"), order, content=cat,
                          entry=entry, variant="raised>"))
        if entry.postverbal:
            signs.append(Sign(phon, type_raise(cat, "leftward"), order, content=cat,
                              entry=entry, variant="raised<"))
        return signs

    def _verb_signs(self, entry: Entry) -> list:
        mapping = {}
        syn = rename(entry.syn, mapping)
        sem = rename(entry.sem, mapping)
        args = []
        for d, g in entry.args:
            args.append(Arg(rename(g, mapping), d if d is not None else Var("D")))
        lf = _feat(sem, "lf")
        main = next(t for t in flat_terms(lf) if key_predicate(t) == entry.key)
        info = Complex.of(
            theme=Complex.of(topic=Var("T"), neutral=Var("N")),
            rheme=Complex.of(focus=Var("F"), mainprop=main),
            background=Var("B"))
        result = Complex.of(syn=syn, sem=sem, info=info)
        cat = Cat(result, TermSet(tuple(args)))
        phon = tuple(entry.phon.split())
        template = Sign(phon, cat, verb_functor(info, lf, self.focus_optional),
                        entry=entry, variant="verb")
        # verb-focus variant: main proposition is the focus, nothing preverbal
        theme, rheme = info.get("theme"), info.get("rheme")
        env = {theme.get("topic"): NONE, theme.get("neutral"): NONE,
               rheme.get("focus"): TermSet((main,))}
        m2 = {}
        vf_cat = rename(resolve(cat, env), m2)
        vf_order = rename(verb_focus_functor(resolve(info, env), lf), m2)
        verb_focus = Sign(phon, vf_cat, vf_order, entry=entry, variant="verb-focus")
        return [template, verb_focus]

    def _adjunct_signs(self, entry: Entry) -> list:
        mapping = {}
        sem = rename(entry.sem, mapping)
        event = _feat(sem, "event")
        terms = _feat(sem, "lf")
        syn = Complex.of(cat=Atom("s"))  # adjuncts modify verbal categories
        ty, info, lf = Var("Ty"), Var("I"), Var("L")
        sem_rest = Var("Rs")
        plain = Complex.of(syn=syn, sem=Complex((("type", ty), ("event", event), ("lf", lf)), sem_rest),
                           info=info)
        extended = Complex.of(
            syn=syn, info=info,
            sem=Complex((("type", ty), ("event", event),
                         ("lf", TermSet(walk(terms, {}).items, lf))), sem_rest))
        content = Complex.of(sem=sem)
        phon = tuple(entry.phon.split())
        order = basic(None, terms)
        signs = []
        dirs = [("raised>", RIGHT)] + ([("raised<", LEFT)] if entry.postverbal else [])
        for variant, d in dirs:
            rest = Var("Rest")
            cat = Cat(Cat(extended, TermSet((), rest)),
                      TermSet((Arg(Cat(plain, TermSet((), rest)), d),)))
            m = {}
            signs.append(Sign(phon, rename(cat, m), rename(order, m),
                              content=rename(content, m), entry=entry, variant=variant))
        return signs

    # ------------------------------------------------------------ order

    def assign_order(self, sign: Sign, familiarity: str = GIVEN) -> list:
        """Ordering categories by familiarity: discourse-new material may
        only be focus or neutral; given material gets a wildcard."""
        if sign.variant in ("verb", "verb-focus"):
            return [sign]
        roles = sign.entry.roles if sign.entry is not None else None
        if familiarity == NEW:
            allowed = [c for c in (FOCUS, NEUTRAL) if roles is None or c in roles]
        elif roles is None:
            return [sign]
        else:
            allowed = [c for c in (FOCUS, NEUTRAL, TOPIC, BACKGROUND) if c in roles]
        feats, _ = complex_items(sign.order, {})
        out = []
        for comp in allowed:
            env = unify_first(feats["comp"], Atom(comp))
            if env is None:
                continue
            m = {}
            out.append(sign.with_(cat=rename(resolve(sign.cat, env), m),
                                  order=rename(resolve(sign.order, env), m),
                                  content=None if sign.content is None
                                  else rename(resolve(sign.content, env), m)))
        return out

    def signs_for(self, token: str, discourse=None) -> list:
        """lookup + assign_order against a discourse model (None: all given)."""
        out = []
        for s in self.lookup(token):
            fam = GIVEN
            if discourse is not None:
                fam = discourse.familiarity_of(s)
            out.extend(self.assign_order(s, fam))
        return out


def load_lexicon(path=None, focus_optional=False) -> Lexicon:
    """Load a lexicon file; ``None`` loads the bundled demo lexicon."""
    if path is None:
        text = resources.files("setccg.data").joinpath("demo.lex").read_text(encoding="utf-8")
        source = "demo.lex"
    else:
        text = Path(path).read_text(encoding="utf-8")
        source = str(path)
    lex = Lexicon(parse_lexicon(text, source), focus_optional=focus_optional, source=source)
    log.debug("loaded %d entries from %s", len(lex), source)
    return lex
