"""Exact integer linear algebra: Smith normal form and finitely generated
abelian groups.

All arithmetic is on Python ints, so entries never overflow.  Matrices are
plain lists of lists; nothing here touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

if TYPE_CHECKING:
    from .surgery import SurgeryDescription

Matrix = list[list[int]]

MAX_DIMENSION = 512

_TRIAL_LIMIT = 10**6
# Deterministic Miller-Rabin witnesses for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(row[k] * B[k][j] for k in range(inner)) for j in range(cols)]
            for row in A]


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class SnfResult:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular."""

    D: Matrix
    U: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def smith_normal_form(A: Sequence[Sequence[int]]) -> SnfResult:
    """Smith normal form of a rectangular integer matrix.

    Pivoting always moves the smallest nonzero entry (in absolute value) of
    the remaining block into the pivot position, then reduces its row and
    column by Euclidean steps; every step strictly shrinks the pivot until it
    divides its row and column.  If some entry of the remaining block is not
    divisible by the pivot, that row is added to the pivot row and the
    reduction restarts, which enforces the divisibility chain.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if any(len(row) != n for row in A):
        raise ValueError("ragged matrix")
    if m > MAX_DIMENSION or n > MAX_DIMENSION:
        raise ValueError(f"matrix larger than {MAX_DIMENSION}x{MAX_DIMENSION}")
    D = [[int(x) for x in row] for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        D[dst] = [x + c * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in D:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = D[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            piv = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // piv))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // piv))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(D[i][j] % piv for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        elif D[t][t] == 0:
            break
    return SnfResult(D, U, V)


# ---------------------------------------------------------------------------
# primes and factoring

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` as ``{prime: exponent}``."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n and p <= _TRIAL_LIMIT:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
        else:
            f = _pollard_brent(m)
            stack.extend((f, m // f))
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# abelian groups

@dataclass(frozen=True)
class AbelianGroup:
    """Z^free_rank plus cyclic factors d1 | d2 | ... | dm, each di >= 2."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} is not >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"divisibility chain broken: {a} does not divide {b}")

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> AbelianGroup:
        """Direct sum of cyclic groups Z/d (d = 0 meaning Z), in any order."""
        free = 0
        powers: dict[int, list[int]] = {}
        for d in orders:
            d = abs(int(d))
            if d == 0:
                free += 1
            elif d > 1:
                for p, e in factorize(d).items():
                    powers.setdefault(p, []).append(p**e)
        length = max((len(v) for v in powers.values()), default=0)
        factors = [1] * length
        for v in powers.values():
            v.sort(reverse=True)
            for k, q in enumerate(v):
                factors[length - 1 - k] *= q
        return cls(free, tuple(factors))

    @staticmethod
    def cokernel(A: Sequence[Sequence[int]], ncols: int | None = None) -> AbelianGroup:
        """Z^ncols modulo the row span of ``A``."""
        if not A:
            return AbelianGroup(ncols or 0)
        snf = smith_normal_form(A)
        diag = snf.diagonal
        rank = sum(1 for d in diag if d)
        free = len(A[0]) - rank
        return AbelianGroup(free, tuple(d for d in diag if d > 1))

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        return math.prod(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def min_generators(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_cyclic(self) -> bool:
        return self.min_generators <= 1

    def primes(self) -> list[int]:
        """Primes dividing the torsion subgroup."""
        ps: set[int] = set()
        for d in self.torsion:
            ps.update(factorize(d))
        return sorted(ps)

    def primary_decomposition(self) -> list[int]:
        """Prime-power orders of the primary cyclic summands (torsion only)."""
        out = []
        for d in self.torsion:
            out.extend(p**e for p, e in factorize(d).items())
        return sorted(out)

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def p_rank(G: AbelianGroup, p: int) -> int:
    """Largest n with G surjecting onto (Z/p)^n."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return G.free_rank + sum(1 for d in G.torsion if d % p == 0)


def betti(G: AbelianGroup) -> int:
    return G.free_rank


def homology(d: SurgeryDescription) -> AbelianGroup:
    """First homology of the manifold presented by a surgery description."""
    from .surgery import presentation_matrix

    return AbelianGroup.cokernel(presentation_matrix(d), d.n)
