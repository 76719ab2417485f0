"""Bottom-up chart parsing over signs.

Two constituents combine only when their {}-CCG categories combine by
application or composition *and* their ordering categories combine by the
ordering rules, in one shared bindings environment.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field

from .categories import BACKWARD, FORWARD, apply_env, compose_env, short
from .graph import (NONE, Atom, Cat, Complex, canon, complex_items,
                    flat_terms, key_predicate, resolve, unify_first, walk)
from .ordering import close_env, ord_combine_env
from .sign import Sign

log = logging.getLogger(__name__)


class ParseError(Exception):
    pass


class UnknownToken(ParseError):
    def __init__(self, token):
        self.token = token
        super().__init__(f"unknown word: {token!r}")


_SYN_RULES = (
    (">", lambda l, r, e: apply_env(l.cat, r.cat, FORWARD, e)),
    ("<", lambda l, r, e: apply_env(r.cat, l.cat, BACKWARD, e)),
    (">B", lambda l, r, e: compose_env(l.cat, r.cat, FORWARD, e)),
    ("<B", lambda l, r, e: compose_env(l.cat, r.cat, BACKWARD, e)),
)


def combine_env(left: Sign, right: Sign):
    """Yield (sign, syntactic rule, ordering rule, slots skipped) for every
    joint analysis."""
    phon = left.phon + right.phon
    for srule, fn in _SYN_RULES:
        for e1, cat in fn(left, right, {}):
            for e2, order, orule, n in ord_combine_env(left.order, right.order, e1):
                yield Sign(phon, resolve(cat, e2), resolve(order, e2)), srule, orule, n


def combine_signs(left: Sign, right: Sign) -> list:
    return [s for s, _, _, _ in combine_env(left, right)]


# ---------------------------------------------------------------- chart

@dataclass(eq=False)
class Edge:
    sign: Sign
    start: int
    end: int
    derivs: list = field(default_factory=list)  # [(rule, (left, right))] or [("lex", ())]

    @property
    def rule(self):
        return self.derivs[0][0]

    @property
    def children(self):
        return self.derivs[0][1]

    def derivations(self):
        """Every derivation tree below this edge, as nested tuples
        ``(rule, sign, children)``; leaves have rule 'lex'."""
        for rule, kids in self.derivs:
            if not kids:
                yield ("lex", self.sign, ())
                continue
            for l, r in itertools.product(kids[0].derivations(), kids[1].derivations()):
                yield (rule, self.sign, (l, r))


@dataclass(eq=False)
class Analysis:
    sign: Sign
    edge: Edge

    def derivations(self):
        return self.edge.derivations()


def tokenize(text: str) -> list:
    text = text.lower().replace("'", "").replace("’", "")
    return re.findall(r"[^\s.,?!]+", text)


def _finalize(sign: Sign, wh_predicates) -> Sign | None:
    """Close the ordering category and fix an open sentence type."""
    if type(sign.cat) is Cat:
        return None
    closed = close_env(sign.order, {})
    if closed is None:
        return None
    env, order, _ = closed
    result = resolve(sign.cat, env)
    syn = walk(_get(result, "syn"), {})
    if type(syn) is not Complex or _get(syn, "cat") != Atom("s"):
        return None
    sem = _get(result, "sem")
    ty = walk(_get(sem, "type"), {})
    if not isinstance(ty, Atom):
        is_wh = any(key_predicate(t) in wh_predicates for t in flat_terms(_get(sem, "lf")))
        e2 = unify_first(ty, Atom("quest" if is_wh else "decl"), env)
        env = e2
        result = resolve(result, env)
    return Sign(sign.phon, result, resolve(order, env))


def _get(node, label):
    node = walk(node, {})
    if type(node) is not Complex:
        return None
    feats, _ = complex_items(node, {})
    return walk(feats.get(label), {})


def default_rank(analysis: Analysis):
    """Fewer skipped information-structure slots first, then analyses
    with a filled topic."""
    s = getattr(analysis, "sign", analysis)
    return (s.skipped_slots(), s.info_slot("topic") == NONE)


class Chart:
    def __init__(self, lexicon, discourse=None, rank=default_rank):
        self.lexicon = lexicon
        self.discourse = discourse
        self.rank = rank
        self.cells: dict = {}
        self.tokens: list = []

    def edges(self, start, end):
        return list(self.cells.get((start, end), {}).values())

    def _add(self, sign, start, end, rule, kids):
        cell = self.cells.setdefault((start, end), {})
        k = sign.key()
        if k in cell:
            cell[k].derivs.append((rule, kids))
        else:
            cell[k] = Edge(sign, start, end, [(rule, kids)])

    def fill(self, tokens):
        self.tokens = list(tokens)
        n = len(self.tokens)
        covered = [False] * n
        for i in range(n):
            for j in range(i + 1, min(n, i + self.lexicon.max_words) + 1):
                phrase = " ".join(self.tokens[i:j])
                signs = self.lexicon.signs_for(phrase, self.discourse)
                for s in signs:
                    self._add(s, i, j, "lex", ())
                if signs:
                    covered[i:j] = [True] * (j - i)
        for i, ok in enumerate(covered):
            if not ok:
                raise UnknownToken(self.tokens[i])
        for length in range(2, n + 1):
            for i in range(0, n - length + 1):
                j = i + length
                for k in range(i + 1, j):
                    for le in self.edges(i, k):
                        for re_ in self.edges(k, j):
                            for sign, srule, orule, _ in combine_env(le.sign, re_.sign):
                                self._add(sign, i, j, f"{srule};{orule}", (le, re_))
        return self

    def analyses(self) -> list:
        n = len(self.tokens)
        found: dict = {}
        for edge in self.edges(0, n):
            final = _finalize(edge.sign, self.lexicon.wh_predicates)
            if final is None:
                continue
            k = final.key()
            if k not in found:
                found[k] = Analysis(final, edge)
        ranked = sorted(found.values(), key=self.rank)
        return ranked


def parse_chart(tokens, lexicon, discourse=None, rank=default_rank) -> Chart:
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    return Chart(lexicon, discourse, rank).fill(tokens)


def parse_analyses(tokens, lexicon, discourse=None, rank=default_rank) -> list:
    return parse_chart(tokens, lexicon, discourse, rank).analyses()


def parse(tokens, lexicon, discourse=None, rank=default_rank) -> list:
    """Ranked spanning sentence signs; [] when there is no analysis."""
    return [a.sign for a in parse_analyses(tokens, lexicon, discourse, rank)]


# ---------------------------------------------------------------- traces

def _label(sign: Sign) -> str:
    order = walk(sign.order, {})
    if type(order) is Complex:
        feats, _ = complex_items(order, {})
        comp = walk(feats.get("comp"), {})
        olab = comp.name.capitalize() if isinstance(comp, Atom) else "Any"
    else:
        olab = short(order)
    return f"{short(sign.cat)} ; {olab}"


def format_derivation(tree, indent=0) -> str:
    rule, sign, kids = tree
    pad = "  " * indent
    head = f"{pad}{sign.text():<{max(1, 30 - len(pad))}} {_label(sign)}"
    if rule == "lex":
        return f"{head}   [{sign.variant}]"
    lines = [f"{head}   ({rule})"]
    for k in kids:
        lines.append(format_derivation(k, indent + 1))
    return "\n".join(lines)


def first_derivation(edge: Edge):
    rule, kids = edge.derivs[0]
    if not kids:
        return ("lex", edge.sign, ())
    return (rule, edge.sign, tuple(first_derivation(k) for k in kids))


def derivation_rules(tree) -> list:
    """Syntactic rule labels of a derivation, bottom-up, left to right."""
    rule, _, kids = tree
    out = []
    for k in kids:
        out.extend(derivation_rules(k))
    if rule != "lex":
        out.append(rule)
    return out


def uses_raising(tree) -> bool:
    rule, sign, kids = tree
    if rule == "lex":
        return sign.variant.startswith("raised") and sign.entry is not None and sign.entry.cls == "noun"
    return any(uses_raising(k) for k in kids)


def describe_info(sign: Sign) -> dict:
    """Information-structure slots as printable strings."""
    from .notation import inline
    return {k: inline(sign.info_slot(k)) for k in ("topic", "neutral", "focus", "background")}


def lf_key(sign: Sign) -> str:
    """Canonical text of a sign's LF as a flat term multiset."""
    from .graph import TermSet
    return canon(TermSet(tuple(flat_terms(sign.lf))))
