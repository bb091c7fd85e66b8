"""Gluing equations of ideal triangulations: residuals, Newton's method and
volume.

A row ``(a1, b1, ..., at, bt | c)`` encodes

    sum_i a_i log z_i + b_i log(1 - z_i) - c*pi*i = 0

with principal logarithms.  Because the c-column is tied to one choice of
branches, residuals are reported both raw and reduced mod 2*pi*i.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

import numpy as np

TWO_PI_I = 2j * math.pi


class DegenerateShape(ValueError):
    pass


@dataclass(frozen=True)
class GluingSystem:
    """Integer rows ``[a1, b1, ..., at, bt, c]``."""

    rows: tuple[tuple[int, ...], ...]
    ntet: int = field(init=False)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError(f"rows have differing widths {sorted(widths)}")
        w = widths.pop() if widths else 1
        if w % 2 != 1:
            raise ValueError(f"row width {w} is not 2t+1")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ntet", (w - 1) // 2)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ntet

    @property
    def A(self) -> np.ndarray:
        """Coefficients of log z_i."""
        return np.array([r[0:-1:2] for r in self.rows], dtype=float).reshape(len(self.rows), self.ntet)

    @property
    def B(self) -> np.ndarray:
        """Coefficients of log(1 - z_i)."""
        return np.array([r[1:-1:2] for r in self.rows], dtype=float).reshape(len(self.rows), self.ntet)

    @property
    def c(self) -> np.ndarray:
        return np.array([r[-1] for r in self.rows], dtype=float)

    def to_json(self) -> dict:
        return {"rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> GluingSystem:
        try:
            rows = data["rows"]
        except (KeyError, TypeError):
            raise ValueError("gluing file needs a 'rows' list") from None
        for k, r in enumerate(rows):
            if not isinstance(r, list) or not all(isinstance(x, int) for x in r):
                raise ValueError(f"rows[{k}] must be a list of integers")
        return cls(tuple(tuple(r) for r in rows))


def shapes_to_json(z: Sequence[complex]) -> dict:
    return {"shapes": [[complex(w).real, complex(w).imag] for w in z]}


def shapes_from_json(data: dict) -> np.ndarray:
    try:
        raw = data["shapes"]
    except (KeyError, TypeError):
        raise ValueError("shapes file needs a 'shapes' list") from None
    out = []
    for k, s in enumerate(raw):
        if not isinstance(s, list) or len(s) != 2:
            raise ValueError(f"shapes[{k}] must be a pair [re, im]")
        out.append(complex(float(s[0]), float(s[1])))
    return np.array(out, dtype=complex)


def load_t12060_system() -> GluingSystem:
    """The shipped 8x17 system of the census manifold t12060."""
    text = resources.files("dehngraph.data").joinpath("t12060_gluing.json").read_text()
    return GluingSystem.from_json(json.loads(text))


def load_t12060_shapes() -> np.ndarray:
    text = resources.files("dehngraph.data").joinpath("t12060_shapes.json").read_text()
    return shapes_from_json(json.loads(text))


def regular_shapes(t: int) -> np.ndarray:
    return np.full(t, complex(0.5, math.sqrt(3) / 2))


def _check_shapes(sys: GluingSystem, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex).reshape(-1)
    if len(z) != sys.ntet:
        raise ValueError(f"expected {sys.ntet} shapes, got {len(z)}")
    for i, w in enumerate(z):
        if w == 0 or w == 1:
            raise DegenerateShape(f"shape z_{i + 1} = {w} is degenerate")
    return z


@dataclass(frozen=True)
class Residual:
    raw: np.ndarray
    reduced: np.ndarray
    windings: np.ndarray       # raw = reduced + windings * 2*pi*i

    @property
    def max_raw(self) -> float:
        return float(np.max(np.abs(self.raw))) if len(self.raw) else 0.0

    @property
    def max_reduced(self) -> float:
        return float(np.max(np.abs(self.reduced))) if len(self.reduced) else 0.0


def _raw_residual(sys: GluingSystem, z: np.ndarray) -> np.ndarray:
    if not sys.rows:
        return np.zeros(0, dtype=complex)
    return sys.A @ np.log(z) + sys.B @ np.log(1 - z) - sys.c * (math.pi * 1j)


def residual(sys: GluingSystem, z) -> Residual:
    z = _check_shapes(sys, z)
    r = _raw_residual(sys, z)
    k = np.round(r.imag / (2 * math.pi))
    return Residual(r, r - k * TWO_PI_I, k.astype(int))


def jacobian(sys: GluingSystem, z) -> np.ndarray:
    """d r_k / d z_i = a_ki / z_i - b_ki / (1 - z_i)."""
    z = _check_shapes(sys, z)
    return sys.A / z - sys.B / (1 - z)


class NewtonFailure(RuntimeError):
    def __init__(self, message: str, trace: list[float], condition: float | None = None):
        super().__init__(message)
        self.trace = trace
        self.condition = condition


@dataclass
class NewtonResult:
    z: np.ndarray
    iterations: int
    trace: list[float]          # max |residual| before each step, then at the end
    windings: np.ndarray
    geometric: bool
    condition: float

    def to_json(self) -> dict:
        return {
            **shapes_to_json(self.z),
            "iterations": self.iterations,
            "residual_trace": self.trace,
            "windings": [int(w) for w in self.windings],
            "geometric": self.geometric,
            "condition": self.condition,
        }


def newton_solve(sys: GluingSystem, z0, tol: float = 1e-10, max_iter: int = 100,
                 max_condition: float = 1e12) -> NewtonResult:
    """Newton's method on the log equations, mod 2*pi*i.

    The residual is reduced mod 2*pi*i at every iterate; the branch offsets
    are locally constant, so the Jacobian is unaffected.
    """
    m, t = sys.shape
    if m != t:
        raise ValueError(f"system is {m}x{t}, not square")
    z = _check_shapes(sys, z0).copy()
    trace: list[float] = []
    cond = float("nan")
    for it in range(max_iter + 1):
        r = _raw_residual(sys, z)
        windings = np.round(r.imag / (2 * math.pi))
        r = r - windings * TWO_PI_I
        err = float(np.max(np.abs(r))) if m else 0.0
        trace.append(err)
        if not np.isfinite(err):
            raise NewtonFailure("residual is not finite", trace)
        if err < tol:
            return NewtonResult(z, it, trace, windings.astype(int),
                                bool(np.all(z.imag > 0)), cond)
        if it == max_iter:
            break
        J = jacobian(sys, z)
        cond = float(np.linalg.cond(J))
        if not np.isfinite(cond) or cond > max_condition:
            raise NewtonFailure(f"singular Jacobian (condition {cond:.3g})", trace, cond)
        z = z - np.linalg.solve(J, r)
        if np.any(z == 0) or np.any(z == 1):
            raise NewtonFailure("iterate hit a degenerate shape", trace, cond)
    raise NewtonFailure(f"no convergence after {max_iter} iterations", trace, cond)


# ---------------------------------------------------------------------------
# volume

_BERNOULLI_TERMS = 40


def _bernoulli_coefficients(count: int) -> list[float]:
    # B_n / (n+1)! for the series Li2(z) = sum_n B_n u^(n+1) / (n+1)!,
    # u = -log(1 - z).  B_1 = -1/2 convention.
    from fractions import Fraction

    B = [Fraction(1)]
    for n in range(1, count):
        B.append(-sum(math.comb(n + 1, k) * B[k] for k in range(n)) / (n + 1))
    return [float(B[n] / math.factorial(n + 1)) for n in range(count)]


_BCOEF = _bernoulli_coefficients(_BERNOULLI_TERMS)


def _li2_reduced(z: complex) -> complex:
    """Li2 on |z| <= 1, Re z <= 1/2, where |log(1 - z)| < 1.3."""
    u = -cmath.log(1 - z)
    total = 0j
    power = u
    for b in _BCOEF:
        total += b * power
        power *= u
    return total


def bloch_wigner(z: complex) -> float:
    """D(z) = Im Li2(z) + arg(1 - z) log|z|.

    Arguments are first moved into |z| <= 1, Re z <= 1/2 using
    D(z) = D(1 - 1/z) = D(1/(1 - z)) = -D(1/z) = -D(1 - z) = -D(z/(z-1)).
    """
    z = complex(z)
    if z.imag == 0:
        return 0.0
    sign = 1.0
    if abs(z) > 1:
        z = 1 / z
        sign = -sign
    if z.real > 0.5:
        # |z| <= 1 and Re z > 1/2 imply |1 - z| < 1.
        z = 1 - z
        sign = -sign
    li = _li2_reduced(z)
    return sign * (li.imag + cmath.phase(1 - z) * math.log(abs(z)))


def volume(z: Sequence[complex]) -> float:
    return float(sum(bloch_wigner(w) for w in z))
