"""Closed-form XOR-cost evaluators and the decoder-comparison report.

Every formula is evaluated in exact rational arithmetic and asserted to
be an integer before returning; for odd p all of them are.  The solver
formula is an equality for the dispatch rule used by ``solve_lu``; the
windowed-decode formulas are equalities when the window opens at the
row-parity column and otherwise overcount by at most p - 1 (the final
canonicalization that may not fire).

The reference figures for the alternative decoder operating directly in
F2[x]/m_p(x) are formula-only: no such decoder exists here, so those
numbers are never measured.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List

from .errors import ParameterError

__all__ = [
    "CostBreakdown",
    "predict_lu",
    "predict_decode",
    "predict_blaum_roth",
    "ReportRow",
    "comparison_report",
]


@dataclass
class CostBreakdown:
    """Stage-by-stage XOR counts of one windowed decode."""

    augment_cost: int = 0
    syndrome_cost: int = 0
    solve_cost: int = 0
    reduce_cost: int = 0
    reencode_cost: int = 0

    @property
    def total(self) -> int:
        return (
            self.augment_cost
            + self.syndrome_cost
            + self.solve_cost
            + self.reduce_cost
            + self.reencode_cost
        )


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise AssertionError(f"cost formula produced a non-integer: {x}")
    return int(x)


def _check_family(family: str) -> None:
    if family not in ("evenodd", "rdp"):
        raise ParameterError(f"unknown family {family!r}")


def predict_lu(r: int, p: int) -> int:
    """XORs of one r x r Vandermonde solve: r(r-1)p + (r-1)(p-3) +
    (r-1)(r-2)(3p-5)/4.  Zero for r = 1."""
    if r < 1:
        raise ParameterError("r must be positive")
    if p < 3 or p % 2 == 0:
        raise ParameterError("p must be an odd integer >= 3")
    val = (
        Fraction(r * (r - 1) * p)
        + Fraction((r - 1) * (p - 3))
        + Fraction((r - 1) * (r - 2) * (3 * p - 5), 4)
    )
    return _as_int(val)


def predict_decode(
    family: str, p: int, k: int, gamma: int, delta: int, lambda_is_zero: bool
) -> int:
    """Total XORs of a windowed decode of gamma information and delta
    diagonal-parity columns.  With gamma = 0 only the re-encoding term
    remains."""
    _check_family(family)
    if gamma < 0 or delta < 0 or k < 1:
        raise ParameterError("gamma, delta must be >= 0 and k >= 1")
    F = Fraction
    g2 = gamma * gamma
    if family == "evenodd":
        reencode = F(delta * (k * p - k - 1))
        if gamma == 0:
            return _as_int(reencode)
        if lambda_is_zero:
            base = (
                F(p) * (gamma * k + F(3 * g2, 4) - F(gamma, 4) - F(1, 2))
                - gamma * k
                - F(g2, 4)
                - F(5 * gamma, 4)
                + F(1, 2)
            )
        else:
            base = (
                F(p) * (gamma * k + F(3 * g2, 4) - F(gamma, 4) + F(5, 2))
                - gamma * k
                - F(g2, 4)
                - F(5 * gamma, 4)
                - F(5, 2)
            )
        return _as_int(base + reencode)
    reencode = F(delta * k * (p - 2))
    if gamma == 0:
        return _as_int(reencode)
    if lambda_is_zero:
        base = (
            F(p) * (gamma * k + F(3 * g2, 4) - F(gamma, 4) - F(3, 2))
            - gamma * k
            - F(g2, 4)
            - F(9 * gamma, 4)
            + F(7, 2)
        )
    else:
        base = (
            F(p) * (gamma * k + F(3 * g2, 4) - F(gamma, 4) + F(3, 2))
            - gamma * k
            - F(g2, 4)
            - F(9 * gamma, 4)
            - F(1, 2)
        )
    return _as_int(base + reencode)


def predict_blaum_roth(
    family: str, p: int, k: int, gamma: int, delta: int, lambda_is_zero: bool
) -> int:
    """Reference cost of decoding the same erasures entirely in
    F2[x]/m_p(x); the RDP variants first rewrite window columns into
    EVENODD form.  Formula-only reference data."""
    _check_family(family)
    if gamma < 0 or delta < 0 or k < 1:
        raise ParameterError("gamma, delta must be >= 0 and k >= 1")
    F = Fraction
    g2 = gamma * gamma
    if family == "evenodd":
        reencode = F(delta * (k * p - k - 1))
        if gamma == 0:
            return _as_int(reencode)
        base = (
            F(gamma * (k + gamma) * p)
            + (3 * g2 + F(gamma, 2)) * p
            + g2
            - F(gamma, 2)
        )
        return _as_int(base + reencode)
    reencode = F(delta * (k * p - 2 * k))
    if gamma == 0:
        return _as_int(reencode)
    if lambda_is_zero:
        base = (
            F(gamma * (k + gamma) * p)
            + (3 * g2 + F(7 * gamma, 2) - 3) * p
            + g2
            - F(7 * gamma, 2)
            + 3
        )
    else:
        base = (
            F(gamma * (k + gamma) * p)
            + (3 * g2 + F(7 * gamma, 2)) * p
            + g2
            - F(gamma, 2)
            - 3
        )
    return _as_int(base + reencode)


@dataclass(frozen=True)
class ReportRow:
    """One point of the full-information-loss comparison sweep."""

    family: str
    p: int
    k: int
    gamma: int
    lu_xors: int
    blaum_roth_xors: int
    lu_normalized: float
    blaum_roth_normalized: float
    reduction_percent: float


def comparison_report(r: int, p_range: Iterable[int]) -> List[ReportRow]:
    """Sweep the widest codes (k = p for EVENODD, k = p - 1 for RDP) with
    all r information columns lost and no parity loss, for each p.

    Costs are normalized by the information-bit count k(p - 1);
    ``reduction_percent`` is how far the windowed-LU decode undercuts the
    reference decoder.
    """
    rows: List[ReportRow] = []
    for family in ("evenodd", "rdp"):
        for p in p_range:
            if p % 2 == 0:
                raise ParameterError(f"p values must be odd, got {p}")
            k = p if family == "evenodd" else p - 1
            lu = predict_decode(family, p, k, r, 0, lambda_is_zero=True)
            br = predict_blaum_roth(family, p, k, r, 0, lambda_is_zero=True)
            bits = k * (p - 1)
            rows.append(
                ReportRow(
                    family=family,
                    p=p,
                    k=k,
                    gamma=r,
                    lu_xors=lu,
                    blaum_roth_xors=br,
                    lu_normalized=lu / bits,
                    blaum_roth_normalized=br / bits,
                    reduction_percent=100.0 * (br - lu) / br,
                )
            )
    return rows
