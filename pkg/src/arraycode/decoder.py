"""Erasure recovery for both code families.

The fast path applies when the erased information columns can be matched
with an equal-sized run of contiguous surviving parity columns opening
right after some erased parity column (or right at the row-parity column
when no earlier parity column is lost).  Those window columns are
augmented, surviving information columns are subtracted off to leave one
syndrome polynomial per window column, and the resulting square
Vandermonde system is solved over R_p by the sparse LU elimination.
Recovered polynomials are shifted back and canonicalized modulo m_p(x);
lost parity columns are then re-encoded from the full information array.

Patterns without such a window, or patterns that lose the row-parity
column, take :func:`decode_fallback`: every surviving column is reduced
modulo m_p(x) and the erased information residues are solved by Cramer's
rule from any invertible subsystem of surviving parity equations.

Plans are pure data: :func:`plan` always returns the same plan for the
same inputs, choosing the smallest admissible window offset so that the
cheaper no-reduction case is used whenever available.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import codes
from .codes import (
    EVENODD,
    RDP,
    CodeParams,
    CodewordArray,
    augmented_parity_columns,
    encode_parity_column,
    stored_column_poly,
)
from .costmodel import CostBreakdown
from .errors import InputError, ParameterError, UnrecoverableErasureError
from .ring import (
    QuotientPoly,
    RingPoly,
    XorTally,
    parity_at_one,
    q_add,
    q_monomial,
    q_mul,
    reduce_mod_mp,
    residue,
    shift,
)
from .vandermonde import ExponentTuple, cramer_solve, solve_lu

__all__ = [
    "ErasureSpec",
    "DecodePlan",
    "plan",
    "erase",
    "syndromes_evenodd",
    "syndromes_rdp",
    "decode",
    "decode_evenodd",
    "decode_rdp",
    "decode_fallback",
    "reencode_parity",
]


@dataclass(frozen=True)
class ErasureSpec:
    """Erased column indices, split into information and parity parts."""

    info_erased: Tuple[int, ...]
    parity_erased: Tuple[int, ...]

    def __init__(self, info_erased, parity_erased=()):
        object.__setattr__(self, "info_erased", tuple(sorted(set(info_erased))))
        object.__setattr__(self, "parity_erased", tuple(sorted(set(parity_erased))))

    @property
    def gamma(self) -> int:
        return len(self.info_erased)

    @property
    def delta(self) -> int:
        return len(self.parity_erased)

    @classmethod
    def from_columns(cls, params: CodeParams, columns) -> "ErasureSpec":
        cols = sorted(set(columns))
        return cls(
            tuple(c for c in cols if c < params.k),
            tuple(c for c in cols if c >= params.k),
        )


@dataclass(frozen=True)
class DecodePlan:
    """Outcome of window planning.

    ``lam`` indexes the erased parity column the window opens after (0
    means the window starts at the row-parity column); ``window`` lists
    the parity columns feeding the syndromes.  ``needs_fallback`` marks
    patterns the windowed path cannot serve.
    """

    lam: Optional[int]
    window: Tuple[int, ...]
    survivors: Tuple[int, ...]
    needs_fallback: bool
    gamma: int
    delta: int


def _check_spec(params: CodeParams, spec: ErasureSpec) -> None:
    k, n = params.k, params.n
    for c in spec.info_erased:
        if not 0 <= c < k:
            raise ParameterError(f"{c} is not an information column")
    for c in spec.parity_erased:
        if not k <= c < n:
            raise ParameterError(f"{c} is not a parity column")


def plan(params: CodeParams, erasures: ErasureSpec) -> DecodePlan:
    """Choose the decode route for an erasure pattern.

    Raises :class:`UnrecoverableErasureError` when more than r columns are
    lost.  Returns a fallback plan when the row-parity column is down,
    when no window of gamma contiguous surviving parity columns exists,
    or when the erased columns' slope differences are not units mod p.
    """
    import math

    _check_spec(params, erasures)
    p, k, r = params.p, params.k, params.r
    gamma, delta = erasures.gamma, erasures.delta
    if gamma + delta > r:
        raise UnrecoverableErasureError(
            f"{gamma + delta} columns lost but only {r} parity columns exist"
        )
    survivors = tuple(j for j in range(k) if j not in erasures.info_erased)

    def fallback() -> DecodePlan:
        return DecodePlan(None, (), survivors, True, gamma, delta)

    if k in erasures.parity_erased:
        return fallback()
    if gamma == 0:
        return DecodePlan(0, (), survivors, False, gamma, delta)
    for e1, e2 in itertools.combinations(erasures.info_erased, 2):
        if math.gcd((params.g[e1] - params.g[e2]) % p, p) != 1:
            return fallback()

    fences = [k - 1] + list(erasures.parity_erased)
    for lam in range(delta + 1):
        start = fences[lam] + 1
        last = fences[lam] + gamma
        if last > params.n - 1:
            continue
        if lam < delta and last >= fences[lam + 1]:
            continue
        return DecodePlan(
            lam, tuple(range(start, last + 1)), survivors, False, gamma, delta
        )
    return fallback()


def erase(cw: CodewordArray, erasures: ErasureSpec) -> CodewordArray:
    """Damaged copy of a stripe with the erased columns zeroed out."""
    damaged = cw.copy()
    for c in erasures.info_erased + erasures.parity_erased:
        damaged.bits[:, c] = 0
    return damaged


def _tally(t: Optional[XorTally], n: int) -> None:
    if t is not None:
        t.add(n)


def _accumulate_shifted(
    acc: RingPoly, poly: RingPoly, d: int, t: Optional[XorTally]
) -> RingPoly:
    # The addend carries a structurally zero x^(p-1) coefficient before
    # shifting, so folding it in costs p - 1 XORs, not p.
    shifted = shift(poly, d)
    _tally(t, acc.p - 1)
    return RingPoly(acc.p, acc.bits ^ shifted.bits)


def _check_syndrome_parity(syndromes: Sequence[RingPoly]) -> None:
    parities = {parity_at_one(s) for s in syndromes}
    if len(parities) > 1:
        raise InputError(
            "syndrome term-count parities disagree: stripe is corrupt beyond "
            "the declared erasures"
        )


def syndromes_evenodd(
    params: CodeParams,
    pl: DecodePlan,
    window_polys: Sequence[RingPoly],
    info_polys: Dict[int, RingPoly],
    t: Optional[XorTally] = None,
) -> List[RingPoly]:
    """Subtract surviving information contributions from the augmented
    window columns; one syndrome per erased information column."""
    k, g = params.k, params.g
    out = []
    for c, base in zip(pl.window, window_polys):
        ell = c - k
        acc = base
        for i in pl.survivors:
            acc = _accumulate_shifted(acc, info_polys[i], ell * g[i], t)
        out.append(acc)
    _check_syndrome_parity(out)
    return out


def syndromes_rdp(
    params: CodeParams,
    pl: DecodePlan,
    window_polys: Sequence[RingPoly],
    info_polys: Dict[int, RingPoly],
    row_parity: RingPoly,
    t: Optional[XorTally] = None,
) -> List[RingPoly]:
    """RDP syndromes: diagonal window columns also shed the row-parity
    column's contribution (slope g[k]); the row-parity window column
    itself subtracts the plain information sum."""
    k, g = params.k, params.g
    out = []
    for c, base in zip(pl.window, window_polys):
        ell = c - k
        acc = base
        if ell > 0:
            acc = _accumulate_shifted(acc, row_parity, ell * g[k], t)
        for i in pl.survivors:
            acc = _accumulate_shifted(acc, info_polys[i], ell * g[i], t)
        out.append(acc)
    _check_syndrome_parity(out)
    return out


def reencode_parity(
    params: CodeParams,
    info: np.ndarray,
    which: Sequence[int],
    t: Optional[XorTally] = None,
    row_parity: Optional[np.ndarray] = None,
) -> Dict[int, np.ndarray]:
    """Re-encode the selected parity columns from a full information array.

    RDP diagonals need the row-parity column: it is taken from
    ``row_parity`` when supplied, re-encoded first when it is itself in
    ``which``, and recomputed (tallied) otherwise.
    """
    out: Dict[int, np.ndarray] = {}
    cols = sorted(set(which))
    k = params.k
    if params.family == RDP and any(c > k for c in cols):
        if k in cols:
            row_parity = encode_parity_column(params, info, k, t)
            out[k] = row_parity
        elif row_parity is None:
            row_parity = encode_parity_column(params, info, k, t)
    for c in cols:
        if c in out:
            continue
        out[c] = encode_parity_column(params, info, c, t, row_parity=row_parity)
    return out


def decode(
    params: CodeParams,
    damaged: CodewordArray,
    erasures: ErasureSpec,
    t: Optional[XorTally] = None,
    want_breakdown: bool = False,
    plan_override: Optional[DecodePlan] = None,
):
    """Repair a damaged stripe; bits in erased columns are never read.

    Returns the repaired :class:`CodewordArray`, or a pair of it and a
    :class:`CostBreakdown` when ``want_breakdown`` is set (the breakdown
    is None for patterns served by the Cramer fallback, whose cost is not
    modeled).  ``plan_override`` substitutes a caller-built plan, e.g. to
    drive a window that does not start at the smallest admissible offset.
    """
    pl = plan_override if plan_override is not None else plan(params, erasures)
    if pl.needs_fallback:
        out = decode_fallback(params, damaged, erasures)
        return (out, None) if want_breakdown else out
    if t is None:
        t = XorTally()
    bd = CostBreakdown()
    out = _decode_windowed(params, damaged, erasures, pl, t, bd)
    if want_breakdown:
        return out, bd
    return out


def decode_evenodd(
    params: CodeParams,
    damaged: CodewordArray,
    erasures: ErasureSpec,
    t: Optional[XorTally] = None,
    want_breakdown: bool = False,
):
    if params.family != EVENODD:
        raise ParameterError("decode_evenodd requires EVENODD parameters")
    return decode(params, damaged, erasures, t, want_breakdown)


def decode_rdp(
    params: CodeParams,
    damaged: CodewordArray,
    erasures: ErasureSpec,
    t: Optional[XorTally] = None,
    want_breakdown: bool = False,
):
    if params.family != RDP:
        raise ParameterError("decode_rdp requires RDP parameters")
    return decode(params, damaged, erasures, t, want_breakdown)


def _decode_windowed(
    params: CodeParams,
    damaged: CodewordArray,
    erasures: ErasureSpec,
    pl: DecodePlan,
    t: XorTally,
    bd: CostBreakdown,
) -> CodewordArray:
    p, k, g = params.p, params.k, params.g
    E = erasures.info_erased
    gamma = pl.gamma
    result = damaged.bits.copy()

    if gamma:
        mark = t.count
        window_polys = augmented_parity_columns(damaged, pl.window, t)
        bd.augment_cost = t.count - mark

        mark = t.count
        info_polys = {
            i: stored_column_poly(params, damaged.bits, i) for i in pl.survivors
        }
        if params.family == EVENODD:
            syn = syndromes_evenodd(params, pl, window_polys, info_polys, t)
        else:
            row_parity = stored_column_poly(params, damaged.bits, k)
            syn = syndromes_rdp(params, pl, window_polys, info_polys, row_parity, t)
        bd.syndrome_cost = t.count - mark

        mark = t.count
        if gamma == 1:
            u = [syn[0]]
        else:
            exps = ExponentTuple(p, tuple(g[e] for e in E))
            u = solve_lu(exps, syn, t)
        bd.solve_cost = t.count - mark

        # Shift each solved polynomial back to its column and canonicalize:
        # a set x^(p-1) coefficient marks an m_p(x) offset picked up by the
        # solver, removed here at p - 1 XORs (windows starting at the
        # row-parity column never pay this).
        mark = t.count
        w = pl.window[0] - k
        for idx, e in enumerate(E):
            rec = shift(u[idx], -(g[e] * w))
            rec = reduce_mod_mp(rec, t)
            for i in range(p - 1):
                result[i, e] = (rec.bits >> i) & 1
        bd.reduce_cost = t.count - mark

    if erasures.parity_erased:
        mark = t.count
        repaired = reencode_parity(
            params,
            result[:, :k],
            erasures.parity_erased,
            t,
            row_parity=result[:, k],
        )
        for c, col in repaired.items():
            result[:, c] = col
        bd.reencode_cost = t.count - mark

    return CodewordArray(params, result)


# ---------------------------------------------------------------------------
# Cramer fallback for patterns without a usable window
# ---------------------------------------------------------------------------


def _parity_residue(params: CodeParams, bits: np.ndarray, c: int) -> QuotientPoly:
    """Residue of a surviving parity column modulo m_p(x).

    EVENODD stored parity columns are canonical residues already.  RDP
    diagonal columns first regain their imaginary-row bit (their augmented
    column sums to zero), then reduce.
    """
    p, k = params.p, params.k
    if params.family == EVENODD or c == k:
        return residue(stored_column_poly(params, bits, c))
    top = int(bits[0, c])
    for i in range(1, p - 1):
        top ^= int(bits[i, c])
    packed = top << (p - 1)
    for i in range(p - 1):
        packed |= int(bits[i, c]) << i
    return residue(RingPoly(p, packed))


def decode_fallback(
    params: CodeParams, damaged: CodewordArray, erasures: ErasureSpec
) -> CodewordArray:
    """Generic repair through residues modulo m_p(x).

    Every surviving column maps to its residue; the erased information
    residues are solved by Cramer's rule from the first invertible
    gamma-subset of surviving parity equations (the row-parity column
    participates as the slope-0 equation).  Because stored information
    columns are canonical residues, the solution bits are the column bits.
    Erased parity columns are then re-encoded.
    """
    _check_spec(params, erasures)
    p, k, r, g = params.p, params.k, params.r, params.g
    E = erasures.info_erased
    gamma = len(E)
    if gamma + len(erasures.parity_erased) > r:
        raise UnrecoverableErasureError(
            f"{gamma + len(erasures.parity_erased)} columns lost but only "
            f"{r} parity columns exist"
        )
    result = damaged.bits.copy()
    surviving_parity = [
        c for c in range(k, params.n) if c not in erasures.parity_erased
    ]

    if gamma:
        survivors = [j for j in range(k) if j not in E]
        info_res = {
            j: residue(stored_column_poly(params, damaged.bits, j))
            for j in survivors
        }

        def coeff(e: int, ell: int) -> QuotientPoly:
            if params.family == EVENODD:
                return q_monomial(p, ell * g[e])
            if ell == 0:
                return q_monomial(p, 0)
            return q_add(q_monomial(p, ell * g[e]), q_monomial(p, ell * g[k]))

        equations = []
        for c in surviving_parity:
            ell = c - k
            rhs = _parity_residue(params, damaged.bits, c)
            for i in survivors:
                rhs = q_add(rhs, q_mul(coeff(i, ell), info_res[i]))
            equations.append(([coeff(e, ell) for e in E], rhs))

        solution = None
        for combo in itertools.combinations(range(len(equations)), gamma):
            matrix = [[equations[h][0][i] for h in combo] for i in range(gamma)]
            solution = cramer_solve(matrix, [equations[h][1] for h in combo])
            if solution is not None:
                break
        if solution is None:
            raise UnrecoverableErasureError(
                "no invertible parity subsystem covers the erased columns"
            )
        for e, res in zip(E, solution):
            for i in range(p - 1):
                result[i, e] = (res.bits >> i) & 1

    if erasures.parity_erased:
        row_parity = None if k in erasures.parity_erased else result[:, k]
        repaired = reencode_parity(
            params, result[:, :k], erasures.parity_erased, None, row_parity
        )
        for c, col in repaired.items():
            result[:, c] = col

    return CodewordArray(params, result)
