from __future__ import annotations

from dataclasses import dataclass, field, replace

from .categories import innermost_result
from .graph import Complex, NONE, Term, TermSet, canon, complex_items, deref, walk

INFO_PATHS = {
    "topic": ("info", "theme", "topic"),
    "neutral": ("info", "theme", "neutral"),
    "focus": ("info", "rheme", "focus"),
    "background": ("info", "background"),
}


@dataclass(frozen=True, eq=False)
class Sign:
    """Phonology + {}-CCG category + ordering category.

    ``content`` holds the nominal (or adjunct) category a type-raised sign
    was built from, so generation can find raised entries by their own
    semantics instead of by the verb-shaped result variable."""

    phon: tuple
    cat: object
    order: object
    content: object = None
    entry: object = None  # lexical Entry for leaves
    variant: str = ""
    _key: str = field(default="", compare=False, repr=False)

    def key(self) -> str:
        if not self._key:
            object.__setattr__(self, "_key", " ".join(self.phon) + " :: " + canon(
                TermSet((self.cat, self.order) + ((self.content,) if self.content is not None else ()))))
        return self._key

    @property
    def result(self):
        return innermost_result(self.cat)

    @property
    def lookup_result(self):
        return self.content if self.content is not None else self.result

    def feature(self, *path):
        return deref(self.result, path)

    @property
    def lf(self):
        return self.feature("sem", "lf")

    def info_slot(self, name):
        return deref(self.result, INFO_PATHS[name])

    def skipped_slots(self) -> int:
        return sum(1 for k in INFO_PATHS if self.info_slot(k) == NONE)

    def text(self) -> str:
        return " ".join(self.phon)

    def with_(self, **kw) -> "Sign":
        kw.setdefault("_key", "")
        return replace(self, **kw)


def entity_of(props):
    """The entity a property set describes: the shared first argument."""
    props = walk(props, {})
    if type(props) is not TermSet:
        return None
    firsts = {repr(t.args[0]) for t in props.items if type(t) is Term and t.args}
    if len(firsts) == 1:
        t = next(t for t in props.items if type(t) is Term and t.args)
        return t.args[0]
    return None


def info_of(result):
    if type(result) is not Complex:
        return None
    feats, _ = complex_items(result, {})
    return feats.get("info")
