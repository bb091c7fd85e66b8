"""Finite group presentations: parsing, abelianization, normal-closure
quotients, coset enumeration and weight certificates.

Text format::

    gens: a1 a2 a3
    rels: a1^2 a2^-1; (a1 a2)^3; A1 a3 a1 A3

Syllables are whitespace separated: ``g``, ``g^k`` or ``g^-k``.  A generator
name with its case swapped (``A1`` for ``a1``) means the inverse.  A
parenthesized group may carry an exponent and is expanded when parsed.
Relators are separated by ``;`` and may span lines; ``#`` starts a comment.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from typing import Iterable, Sequence

from .abelian import AbelianGroup
from .todd_coxeter import DEFAULT_CAP, CosetTable, coset_enumerate_letters

Syllable = tuple[str, int]
Word = tuple[Syllable, ...]


class PresentationParseError(ValueError):
    def __init__(self, message: str, text: str = "", offset: int | None = None):
        self.line = self.column = None
        if offset is not None:
            self.line = text.count("\n", 0, offset) + 1
            self.column = offset - (text.rfind("\n", 0, offset) + 1) + 1
            message = f"line {self.line}, column {self.column}: {message}"
        super().__init__(message)


def reduce_word(syllables: Iterable[Syllable]) -> Word:
    """Freely reduce, merging adjacent syllables in the same generator."""
    out: list[Syllable] = []
    for g, e in syllables:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            e += out.pop()[1]
            if e == 0:
                continue
        out.append((g, e))
    return tuple(out)


def invert_word(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def format_word(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(g if e == 1 else f"{g}^{e}" for g, e in w)


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator names")
        rels = tuple(reduce_word(tuple(s) for s in r) for r in self.relators)
        known = set(gens)
        for k, r in enumerate(rels):
            for g, _ in r:
                if g not in known:
                    raise ValueError(f"relator {k + 1} uses undeclared generator {g!r}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)

    def letters(self, w: Word) -> list[int]:
        """Expand a word to coset-table letters (2g for g, 2g+1 for g^-1)."""
        index = {g: i for i, g in enumerate(self.generators)}
        out: list[int] = []
        for g, e in w:
            x = 2 * index[g] + (e < 0)
            out.extend([x] * abs(e))
        return out

    def exponent_sums(self) -> list[list[int]]:
        index = {g: i for i, g in enumerate(self.generators)}
        rows = []
        for r in self.relators:
            row = [0] * len(self.generators)
            for g, e in r:
                row[index[g]] += e
            rows.append(row)
        return rows

    def format(self) -> str:
        return ("gens: " + " ".join(self.generators) + "\nrels: "
                + "; ".join(format_word(r) for r in self.relators))

    __str__ = format


_TOKEN = re.compile(r"\s+|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[()^])|(?P<int>[+-]?\d+)|(?P<bad>.)")


def parse_word(text: str, generators: Sequence[str], *, source: str | None = None,
               base: int = 0) -> Word:
    """Parse one word.  ``source``/``base`` place error positions inside a
    larger text."""
    source = text if source is None else source
    gens = set(generators)
    tokens = []
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        if kind is None:
            continue
        if kind == "bad":
            raise PresentationParseError(f"unexpected character {m.group()!r}", source, base + m.start())
        tokens.append((kind, m.group(), base + m.start()))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None, base + len(text))

    def exponent() -> int:
        nonlocal pos
        kind, val, off = peek()
        if kind != "op" or val != "^":
            return 1
        pos += 1
        kind, val, off = peek()
        if kind != "int":
            raise PresentationParseError("malformed exponent", source, off)
        pos += 1
        if int(val) == 0:
            raise PresentationParseError("exponent 0 is not allowed", source, off)
        return int(val)

    def sequence(closing: bool) -> list[Syllable]:
        nonlocal pos
        out: list[Syllable] = []
        while True:
            kind, val, off = peek()
            if kind is None:
                if closing:
                    raise PresentationParseError("missing ')'", source, off)
                return out
            if kind == "op" and val == ")":
                if not closing:
                    raise PresentationParseError("unbalanced ')'", source, off)
                pos += 1
                return out
            if kind == "op" and val == "(":
                pos += 1
                inner = list(reduce_word(sequence(True)))
                e = exponent()
                if e < 0:
                    inner = list(invert_word(tuple(inner)))
                out.extend(inner * abs(e))
            elif kind == "name":
                pos += 1
                if val in gens:
                    g, sign = val, 1
                elif val.swapcase() in gens:
                    g, sign = val.swapcase(), -1
                else:
                    raise PresentationParseError(f"unknown generator {val!r}", source, off)
                out.append((g, sign * exponent()))
            else:
                raise PresentationParseError(f"unexpected {val!r}", source, off)

    return reduce_word(sequence(False))


def parse_presentation(text: str) -> GroupPresentation:
    """Parse ``gens: ...`` followed by ``rels: ...``."""
    clean = re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)
    g = re.search(r"\bgens\s*:", clean)
    if g is None:
        raise PresentationParseError("missing 'gens:'", text, 0)
    r = re.search(r"\brels\s*:", clean[g.end():])
    if r is None:
        raise PresentationParseError("missing 'rels:'", text, len(text))
    gens_end = g.end() + r.start()
    rels_start = g.end() + r.end()
    if clean[:g.start()].strip():
        raise PresentationParseError("text before 'gens:'", text, 0)
    gens_text = clean[g.end():gens_end].strip().rstrip(";")
    names = gens_text.replace(",", " ").split()
    for name in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise PresentationParseError(f"bad generator name {name!r}", text, clean.index(name, g.end()))
    if len(set(names)) != len(names):
        raise PresentationParseError("duplicate generator names", text, g.end())
    for name in names:
        if name.swapcase() != name and name.swapcase() in names:
            raise PresentationParseError(
                f"generators {name!r} and {name.swapcase()!r} clash with the inverse convention",
                text, g.end())

    body = clean[rels_start:]
    relators: list[Word] = []
    if body.strip():
        pieces = body.split(";")
        if not pieces[-1].strip() and len(pieces) > 1:
            pieces.pop()           # a single trailing ';' is allowed
        offset = rels_start
        for piece in pieces:
            if not piece.strip():
                raise PresentationParseError("empty relator", text, offset)
            relators.append(parse_word(piece, names, source=text, base=offset))
            offset += len(piece) + 1
    return GroupPresentation(tuple(names), tuple(relators))


def word(text: str, P: GroupPresentation) -> Word:
    return parse_word(text, P.generators)


# ---------------------------------------------------------------------------

def kanenobu_presentation(n: int) -> GroupPresentation:
    """pi_1 of the double branched cover M_n of the Kanenobu knot K_n."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    template = resources.files("dehngraph.data").joinpath("kanenobu.txt").read_text()
    return parse_presentation(string.Template(template).substitute(e=10 * n, f=10 * n + 3))


def abelianization(P: GroupPresentation) -> AbelianGroup:
    return AbelianGroup.cokernel(P.exponent_sums(), len(P.generators))


def quotient_by_normal_closure(P: GroupPresentation, w: Word | str) -> GroupPresentation:
    if isinstance(w, str):
        w = word(w, P)
    return GroupPresentation(P.generators, P.relators + (reduce_word(w),))


def coset_enumerate(P: GroupPresentation, subgroup_words: Sequence[Word | str] = (),
                    cap: int = DEFAULT_CAP) -> CosetTable:
    subgroup = [P.letters(word(w, P) if isinstance(w, str) else w) for w in subgroup_words]
    return coset_enumerate_letters(len(P.generators), [P.letters(r) for r in P.relators],
                                   subgroup, cap)


def default_candidates(P: GroupPresentation) -> list[Word]:
    """Every generator, then every product g_i g_j with i < j."""
    gens = P.generators
    return [((g, 1),) for g in gens] + [((a, 1), (b, 1)) for a, b in combinations(gens, 2)]


@dataclass
class WeightReport:
    lower: int
    upper: int | None
    abelianization: AbelianGroup
    witness: Word | None
    notes: list[str]
    attempts: list[dict]

    @property
    def exact(self) -> int | None:
        return self.lower if self.upper == self.lower else None

    @property
    def verdict(self) -> str:
        if self.exact is not None:
            return f"weight exactly {self.exact}"
        if self.upper is not None:
            return f"weight between {self.lower} and {self.upper}"
        if self.lower >= 2:
            return f"weight >= {self.lower}"
        return "inconclusive"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "lower": self.lower,
            "upper": self.upper,
            "abelianization": self.abelianization.to_json(),
            "witness": None if self.witness is None else format_word(self.witness),
            "notes": self.notes,
            "attempts": self.attempts,
        }


def certify_weight_one(P: GroupPresentation, candidates: Sequence[Word | str] | None = None,
                       cap: int = DEFAULT_CAP) -> WeightReport:
    """Bound the weight (minimal number of normal generators) of P.

    Upper bound 1 if killing some candidate gives a coset table with one
    coset; upper bound 0 if P itself enumerates to one coset.  Lower bound
    is the minimal number of generators of the abelianization.
    """
    ab = abelianization(P)
    notes: list[str] = []
    attempts: list[dict] = []
    lower = ab.min_generators
    if lower >= 2:
        notes.append(f"abelianization {ab} is not cyclic: weight >= {lower}")
        return WeightReport(lower, None, ab, None, notes, attempts)
    elif lower == 1:
        notes.append(f"abelianization {ab} is nontrivial: weight >= 1")
    else:
        t = coset_enumerate(P, (), cap)
        attempts.append({"word": None, **t.to_json()})
        if t.index == 1:
            notes.append("the group itself enumerates to one coset: trivial group")
            return WeightReport(0, 0, ab, (), notes, attempts)
        notes.append("abelianization is trivial but the group was not shown trivial")
    if candidates is None:
        candidates = default_candidates(P)
    for c in candidates:
        w = word(c, P) if isinstance(c, str) else reduce_word(c)
        t = coset_enumerate(quotient_by_normal_closure(P, w), (), cap)
        attempts.append({"word": format_word(w), **t.to_json()})
        if t.index == 1:
            notes.append(f"weight <= 1 certified by {format_word(w)}")
            return WeightReport(min(lower, 1), 1, ab, w, notes, attempts)
    notes.append("no candidate certified weight <= 1")
    return WeightReport(lower, None, ab, None, notes, attempts)
