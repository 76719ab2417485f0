"""Head-driven bottom-up realisation.

``find_lex_cat`` locates a head whose most embedded result unifies with
the input; ``bup_generate`` then walks the head's ordering slots from the
innermost out (focus, neutral, topic, background), realising the
constituents that fill each slot and combining them with the head through
the same joint {}-CCG + ordering rules the parser uses.  A branch succeeds
when the finished sign unifies with the input.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from .categories import functor_args
from .graph import (NONE, Cat, Complex, OrdFunctor, TermSet, Var, canon,
                    complex_items, deref, flat_terms, key_predicate, resolve,
                    unify_all, unify_first, variables, walk)
from .lexicon import GIVEN
from .ordering import skip_env, slot_payload
from .parser import combine_env, default_rank
from .sign import Sign

log = logging.getLogger(__name__)

_PREVERBAL = "\\"


class GenerationError(Exception):
    """No realisation exists; ``terms`` lists what could not be realised."""

    def __init__(self, message, terms=()):
        self.terms = list(terms)
        super().__init__(message)


class DepthLimitExceeded(GenerationError):
    pass


@dataclass
class Constituent:
    kind: str          # "arg" or "adjunct"
    graph: object      # argument category, or the adjunct's term-set
    props: object      # what the constituent contributes to an info slot
    signs: list = field(default_factory=list)

    def label(self):
        from .notation import inline
        return inline(self.props)


def _with_lf(node, lf):
    """Copy of a result complex with ``sem.lf`` replaced."""
    feats, rest = complex_items(node, {})
    sem_feats, sem_rest = complex_items(walk(feats["sem"], {}), {})
    sem_feats = dict(sem_feats, lf=lf)
    feats = dict(feats, sem=Complex(tuple(sem_feats.items()), sem_rest))
    return Complex(tuple(feats.items()), rest)


def _open_lf(node):
    lf = walk(deref(node, ("sem", "lf")), {})
    if type(lf) is not TermSet or lf.tail is not None:
        return node, None
    tail = Var("Adj")
    return _with_lf(node, TermSet(lf.items, tail)), tail


def _term_bag(node) -> list:
    return sorted(canon(t) for t in flat_terms(node))


def _input_keys(inp) -> list:
    keys = []
    for path in (("sem", "lf"), ("sem", "props")):
        for t in flat_terms(deref(inp, path)):
            k = key_predicate(t)
            if k is not None and k not in keys:
                keys.append(k)
    return keys


class Generator:
    def __init__(self, lexicon, discourse=None, rank=default_rank, max_depth=24,
                 on_order=None):
        self.lexicon = lexicon
        self.discourse = discourse
        self.rank = rank
        self.max_depth = max_depth
        self.on_order = on_order   # called as on_order(left, right) before ordering
        self.unrealised: list = []

    # ------------------------------------------------------------ lookup

    def _familiar_signs(self, entry):
        out = []
        for s in self.lexicon.entry_signs(entry):
            fam = GIVEN if self.discourse is None else self.discourse.familiarity_of(s)
            out.extend(self.lexicon.assign_order(s, fam))
        return out

    def find_lex_cat(self, inp) -> list:
        """Heads whose most embedded result unifies with ``inp``.

        Stage one keeps entries whose key predicate occurs in the input's
        LF (or property set); stage two unifies results.  A verb's LF is
        matched against the input with room to spare: whatever is left
        over must later be realised by adjuncts."""
        inp = walk(inp, {})
        found: dict = {}
        for key in _input_keys(inp):
            for entry in self.lexicon.by_key.get(key, []):
                for sign in self._familiar_signs(entry):
                    for head in self._match_head(sign, inp):
                        found.setdefault(head.key(), head)
        return list(found.values())

    def _match_head(self, sign, inp):
        target = sign.lookup_result
        if sign.entry.cls == "verb":
            opened, tail = _open_lf(target)
            inp_lf = walk(deref(inp, ("sem", "lf")), {})
            if tail is None or type(inp_lf) is not TermSet:
                return
            for env in unify_all(opened, inp):
                extra, _ = _resolved_items(tail, env)
                ids = {id(x) for x in extra}
                core = TermSet(tuple(x for x in inp_lf.items if id(x) not in ids))
                if len(core.items) + len(extra) != len(inp_lf.items):
                    continue
                for env2 in unify_all(target, _with_lf(inp, core)):
                    yield _resolve_sign(sign, env2)
            return
        for env in unify_all(target, inp):
            yield _resolve_sign(sign, env)

    # ------------------------------------------------------------ bup

    def generate_signs(self, inp) -> list:
        self.unrealised = []
        heads = self.find_lex_cat(inp)
        if not heads:
            raise GenerationError(
                "no lexical head unifies with the input (key predicates: "
                + ", ".join(_input_keys(inp) or ["none"]) + ")")
        results: dict = {}
        for head in heads:
            for sign in self.bup_generate(inp, head):
                results.setdefault(sign.phon, sign)
        if not results:
            terms = sorted(set(self.unrealised))
            msg = "cannot realise the input"
            if terms:
                msg += ": no realisation for " + "; ".join(terms)
            raise GenerationError(msg, terms)
        return sorted(results.values(), key=self.rank)

    def generate(self, inp) -> list:
        return [s.phon for s in self.generate_signs(inp)]

    def bup_generate(self, inp, head, depth=0):
        """Yield finished signs built bottom-up from ``head``."""
        pending = self._arg_constituents(head, depth)
        if pending is None:
            return
        leftover = self._leftover_terms(inp, head)
        for adjuncts in self._adjunct_partitions(leftover):
            yield from self._bup(inp, head, pending + adjuncts, depth)

    def _bup(self, inp, sign, pending, depth):
        if depth > self.max_depth:
            raise DepthLimitExceeded(f"generation exceeded depth {self.max_depth}")
        order = walk(sign.order, {})
        if type(order) is not OrdFunctor:
            # clause 1: nothing left to consume; the sign must match the input
            if pending or type(walk(sign.cat, {})) is Cat:
                return
            env = unify_first(sign.result, inp)
            if env is not None:
                yield _resolve_sign(sign, env)
            return
        arg = order.args[-1]
        payload = walk(slot_payload(arg, {}), {})
        if payload == NONE or (type(payload) is Var and arg.optional):
            skipped = self._skip(sign)
            if skipped is not None:
                yield from self._bup(inp, skipped, pending, depth + 1)
            if payload == NONE:
                return
        backward = arg.dir == _PREVERBAL
        want = None if type(payload) is Var or variables(payload) else _term_bag(payload)
        for size in range(1, len(pending) + 1):
            for idx in itertools.combinations(range(len(pending)), size):
                group = [pending[i] for i in idx]
                if want is not None and sorted(
                        sum((_term_bag(c.props) for c in group), [])) != want:
                    continue
                rest = [c for i, c in enumerate(pending) if i not in idx]
                for filler in self._groups(group, backward):
                    for new in self._attach(sign, filler, backward):
                        yield from self._bup(inp, new, rest, depth + 1)

    def _skip(self, sign):
        res = skip_env(walk(sign.order, {}), {})
        if res is None:
            return None
        env, order = res
        return Sign(sign.phon, resolve(sign.cat, env), resolve(order, env))

    def _attach(self, sign, filler, backward):
        left, right = (filler, sign) if backward else (sign, filler)
        want = "<" if backward else ">"
        if self.on_order is not None:
            self.on_order(left, right)
        for new, _, orule, skipped in combine_env(left, right):
            if orule == want and skipped == 0:
                yield new

    def _groups(self, group, backward):
        """Signs spanning every member of ``group`` in some order."""
        seen = set()
        for perm in itertools.permutations(group):
            choices = [self._member_signs(c, len(group) > 1, backward) for c in perm]
            for combo in itertools.product(*choices):
                for sign in self._fold(list(combo)):
                    if sign.key() not in seen:
                        seen.add(sign.key())
                        yield sign

    def _fold(self, signs):
        if len(signs) == 1:
            yield signs[0]
            return
        for first in self._fold(signs[:-1]):
            if self.on_order is not None:
                self.on_order(first, signs[-1])
            for new, _, orule, _ in combine_env(first, signs[-1]):
                if orule == "=":
                    yield new

    def _member_signs(self, con, grouped, backward):
        raised = "raised>" if backward else "raised<"
        out = []
        for s in con.signs:
            if s.entry is None:          # generated clause
                if not grouped:
                    out.append(s)
            elif s.entry.cls == "adjunct" or grouped:
                if s.variant == raised:
                    out.append(s)
            elif s.variant == "base":
                out.append(s)
        return out

    # ------------------------------------------------------------ constituents

    def _arg_constituents(self, head, depth):
        cat = walk(head.cat, {})
        if type(cat) is not Cat:
            return []
        items, _ = functor_args(cat, {})
        out = []
        for item in items:
            graph = walk(walk(item, {}).cat, {})
            props = deref(graph, ("sem", "props"))
            if props is None:
                props = deref(graph, ("sem", "lf"))
            signs = self._realise(graph, depth)
            if not signs:
                self.unrealised.extend(canon(t) for t in flat_terms(props) or [graph])
                return None
            out.append(Constituent("arg", graph, props, signs))
        return out

    def _realise(self, graph, depth):
        """Lexical signs for an NP argument, or generated clauses for a
        clausal one."""
        syn_cat = deref(graph, ("syn", "cat"))
        if syn_cat is not None and syn_cat != NONE and getattr(syn_cat, "name", "") == "s":
            out = []
            for head in self.find_lex_cat(graph):
                out.extend(self.bup_generate(graph, head, depth + 1))
            return out
        return [s for s in self.find_lex_cat(graph) if s.entry.cls == "noun"]

    def _leftover_terms(self, inp, head):
        if head.entry is None or head.entry.cls != "verb":
            return []
        inp_items, _ = _resolved_items(deref(inp, ("sem", "lf")), {})
        used = [canon(x) for x in _resolved_items(head.lf, {})[0]]
        left = []
        for x in inp_items:
            c = canon(x)
            if c in used:
                used.remove(c)
            else:
                left.append(x)
        return left

    def _adjunct_partitions(self, terms):
        """Ways of covering ``terms`` with adjunct entries."""
        if not terms:
            yield []
            return
        first, rest = terms[0], terms[1:]
        key = key_predicate(first)
        found = False
        for entry in self.lexicon.by_key.get(key, []):
            if entry.cls != "adjunct":
                continue
            n = len(entry.lf_terms)
            for others in itertools.combinations(range(len(rest)), n - 1):
                chosen = TermSet((first,) + tuple(rest[i] for i in others))
                remaining = [t for i, t in enumerate(rest) if i not in others]
                signs = self._adjunct_signs(entry, chosen)
                if not signs:
                    continue
                found = True
                con = Constituent("adjunct", chosen, chosen, signs)
                for tail in self._adjunct_partitions(remaining):
                    yield [con] + tail
        if not found:
            self.unrealised.append(canon(first))

    def _adjunct_signs(self, entry, terms):
        out = []
        for s in self._familiar_signs(entry):
            target = Complex.of(sem=Complex.of(lf=terms))
            for env in unify_all(s.content, target):
                out.append(_resolve_sign(s, env))
        return out


def _resolved_items(node, env):
    node = walk(node, env)
    if type(node) is not TermSet:
        return [], None
    from .graph import termset_items
    return termset_items(node, env)


def _resolve_sign(sign, env):
    return sign.with_(cat=resolve(sign.cat, env), order=resolve(sign.order, env),
                      content=None if sign.content is None else resolve(sign.content, env))


def find_lex_cat(inp, lexicon, discourse=None) -> list:
    return Generator(lexicon, discourse).find_lex_cat(inp)


def bup_generate(inp, head, lexicon, discourse=None) -> list:
    return [s.phon for s in Generator(lexicon, discourse).bup_generate(inp, head)]


def generate(inp, lexicon, discourse=None, **kw) -> list:
    """Ranked token sequences realising ``inp``; raises GenerationError."""
    return Generator(lexicon, discourse, **kw).generate(inp)


def generate_signs(inp, lexicon, discourse=None, **kw) -> list:
    return Generator(lexicon, discourse, **kw).generate_signs(inp)
