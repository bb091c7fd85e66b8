"""Todd-Coxeter coset enumeration, HLT strategy with lookahead.

Letters are column indices: generator ``g`` is column ``2g`` and its inverse
is ``2g + 1``, so ``x ^ 1`` inverts a letter.  Cosets are 0-based; coset 0 is
the subgroup itself.

References: Holt, Eick, O'Brien, *Handbook of Computational Group Theory*,
section 5.1 (HLT, coincidences) and 5.3 (lookahead).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

COMPLETE = "complete"
EXCEEDED_CAP = "exceeded-cap"

DEFAULT_CAP = 10**6


@dataclass
class CosetTable:
    """Result of an enumeration.

    ``rows[c][x]`` is the coset ``c . x`` for letter ``x``.  An
    ``exceeded-cap`` table proves nothing; its ``rows`` are empty.
    """

    status: str
    rows: list[list[int]]
    ngens: int
    peak_live: int
    total_defined: int
    lookaheads: int = 0
    cap: int = DEFAULT_CAP

    @property
    def complete(self) -> bool:
        return self.status == COMPLETE

    @property
    def index(self) -> int | None:
        return len(self.rows) if self.complete else None

    def permutation(self, letter: int) -> list[int]:
        return [row[letter] for row in self.rows]

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "index": self.index,
            "peak_live": self.peak_live,
            "total_defined": self.total_defined,
            "lookaheads": self.lookaheads,
            "cap": self.cap,
        }


class _Enumerator:
    def __init__(self, ngens: int, relators: Sequence[Sequence[int]], cap: int):
        self.nc = 2 * ngens
        self.ngens = ngens
        # Short relators first; ties broken by content for reproducibility.
        self.relators = sorted((tuple(r) for r in relators if r), key=lambda r: (len(r), r))
        self.cap = cap
        self.table: list[list[int]] = [[-1] * self.nc]
        self.parent = [0]
        self.live = 1
        self.peak = 1
        self.total = 1
        self.lookaheads = 0

    # -- union-find -------------------------------------------------------
    def rep(self, c: int) -> int:
        parent = self.parent
        r = c
        while parent[r] != r:
            r = parent[r]
        while parent[c] != r:
            parent[c], c = r, parent[c]
        return r

    def _merge(self, k: int, l: int, queue: list[int]) -> None:
        r, s = self.rep(k), self.rep(l)
        if r != s:
            if s < r:
                r, s = s, r
            self.parent[s] = r
            queue.append(s)
            self.live -= 1

    def coincidence(self, a: int, b: int) -> None:
        table, rep = self.table, self.rep
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            row = table[g]
            for x in range(self.nc):
                d = row[x]
                if d < 0:
                    continue
                xi = x ^ 1
                table[d][xi] = -1
                mu, nu = rep(g), rep(d)
                if table[mu][x] >= 0:
                    self._merge(nu, table[mu][x], queue)
                elif table[nu][xi] >= 0:
                    self._merge(mu, table[nu][xi], queue)
                else:
                    table[mu][x] = nu
                    table[nu][xi] = mu

    # -- definitions and scans -------------------------------------------
    def define(self, c: int, x: int) -> bool:
        if self.live >= self.cap:
            return False
        new = len(self.table)
        row = [-1] * self.nc
        row[x ^ 1] = c
        self.table.append(row)
        self.parent.append(new)
        self.table[c][x] = new
        self.live += 1
        self.total += 1
        if self.live > self.peak:
            self.peak = self.live
        return True

    def scan(self, alpha: int, w: tuple[int, ...], fill: bool) -> bool:
        """Scan ``w`` at ``alpha``; returns False only if a needed
        definition was refused by the cap."""
        table = self.table
        f = b = alpha
        i, j = 0, len(w) - 1
        while True:
            row = table[f]
            while i <= j and row[w[i]] >= 0:
                f = row[w[i]]
                row = table[f]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return True
            row = table[b]
            while j >= i and row[w[j] ^ 1] >= 0:
                b = row[w[j] ^ 1]
                row = table[b]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return True
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return True
            if not fill:
                return True
            if not self.define(f, w[i]):
                return False

    def lookahead(self) -> None:
        self.lookaheads += 1
        parent = self.parent
        for beta in range(len(self.table)):
            for w in self.relators:
                if parent[beta] != beta:
                    break
                self.scan(beta, w, fill=False)

    def compact(self, alpha: int) -> int:
        """Drop dead cosets, keeping order; returns the new index of the first
        live coset >= alpha (or the live count if none)."""
        old = self.table
        parent = self.parent
        keep = [c for c in range(len(old)) if parent[c] == c]
        new_index = {c: k for k, c in enumerate(keep)}
        self.table = [[new_index[d] if d >= 0 else -1 for d in old[c]] for c in keep]
        self.parent = list(range(len(keep)))
        return next((new_index[c] for c in keep if c >= alpha), len(keep))

    def _with_space(self, step) -> bool:
        """Run ``step`` until it succeeds, doing a lookahead whenever it needs
        a coset the cap refuses; False once lookahead stops freeing space."""
        while not step():
            before = self.live
            self.lookahead()
            if self.live >= before:
                return False
        return True

    def run(self, subgroup: Sequence[Sequence[int]]) -> str:
        for w in subgroup:
            if w and not self._with_space(lambda w=tuple(w): self.scan(0, w, True)):
                return EXCEEDED_CAP
        parent = self.parent
        alpha = 0
        while alpha < len(self.table):
            for w in self.relators:
                if parent[alpha] != alpha:
                    break
                if not self._with_space(
                        lambda: parent[alpha] != alpha or self.scan(alpha, w, True)):
                    return EXCEEDED_CAP
            for x in range(self.nc):
                if parent[alpha] != alpha:
                    break
                if not self._with_space(
                        lambda: parent[alpha] != alpha or self.table[alpha][x] >= 0
                        or self.define(alpha, x)):
                    return EXCEEDED_CAP
            alpha += 1
            # Dead rows are garbage; compact when they dominate the table.
            if len(self.table) > 2 * self.live + 1024:
                alpha = self.compact(alpha)
                parent = self.parent
        self.compact(0)
        return COMPLETE


def coset_enumerate_letters(ngens: int, relators: Sequence[Sequence[int]],
                            subgroup: Sequence[Sequence[int]] = (),
                            cap: int = DEFAULT_CAP) -> CosetTable:
    """Enumerate the cosets of the subgroup generated by ``subgroup`` in
    <generators | relators>.  ``cap`` bounds the number of live cosets."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    for w in list(relators) + list(subgroup):
        for x in w:
            if not 0 <= x < 2 * ngens:
                raise ValueError(f"letter {x} out of range for {ngens} generators")
    e = _Enumerator(ngens, relators, cap)
    status = e.run(subgroup)
    rows = e.table if status == COMPLETE else []
    return CosetTable(status, rows, ngens, e.peak, e.total, e.lookaheads, cap)
