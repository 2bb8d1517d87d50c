"""Square Vandermonde systems over R_p: sparse LU solver and Cramer oracle.

A system u * V = v with V[i][j] = x^(j * a_i) is solved two independent
ways:

* :func:`solve_lu` runs the bidiagonal-factor elimination directly on the
  r-vector (the factor matrices are never materialized on this path) and
  costs exactly r(r-1)p + (r-1)(p-3) + (r-1)(r-2)(3p-5)/4 XORs under the
  division dispatch rule implemented here.
* :func:`solve_cramer` solves the reduced system over F2[x]/m_p(x) by
  Cramer's rule with the determinant inverted through the extended
  Euclidean algorithm.  It is the ground-truth reference: any R_p solution
  reduces to it modulo m_p(x).

:func:`lu_factors` materializes the bidiagonal factors themselves; it
exists so the factorization identity can be checked entrywise in tests.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence

from .errors import InputError, ParameterError
from .ring import (
    QuotientPoly,
    RingPoly,
    XorTally,
    add,
    div_binomial,
    mul,
    parity_at_one,
    q_add,
    q_inv,
    q_monomial,
    q_mul,
    shift,
)

__all__ = [
    "ExponentTuple",
    "RingMatrix",
    "build_vandermonde",
    "lu_factors",
    "solve_lu",
    "solve_cramer",
    "cramer_solve",
    "residue_matrix_inverse",
]


class ExponentTuple:
    """Exponents (a_1, ..., a_r) defining V[i][j] = x^(j * a_i) over R_p.

    Entries are reduced mod p at construction; every pairwise difference
    must be nonzero and coprime to p, which makes the system solvable.
    """

    __slots__ = ("p", "a")

    def __init__(self, p: int, a: Sequence[int]):
        if p < 3 or p % 2 == 0:
            raise ParameterError(f"modulus p must be an odd integer >= 3, got {p}")
        reduced = tuple(x % p for x in a)
        if not reduced:
            raise ParameterError("exponent tuple must be non-empty")
        for i in range(len(reduced)):
            for j in range(i + 1, len(reduced)):
                d = (reduced[i] - reduced[j]) % p
                if d == 0:
                    raise ParameterError(
                        f"exponents {reduced[i]} and {reduced[j]} coincide mod {p}"
                    )
                if math.gcd(d, p) != 1:
                    raise ParameterError(
                        f"exponent difference {d} shares factor with p={p}"
                    )
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "a", reduced)

    def __setattr__(self, name, value):
        raise AttributeError("ExponentTuple is immutable")

    @property
    def r(self) -> int:
        return len(self.a)

    def __repr__(self) -> str:
        return f"ExponentTuple(p={self.p}, a={self.a})"


class RingMatrix:
    """Dense matrix of RingPoly entries sharing one modulus."""

    __slots__ = ("p", "rows", "cols", "entries")

    def __init__(self, p: int, entries: List[List[RingPoly]]):
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        for row in entries:
            if len(row) != cols:
                raise ParameterError("ragged matrix")
            for e in row:
                if e.p != p:
                    raise ParameterError("matrix entries must share one modulus")
        self.p = p
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def identity(cls, p: int, n: int) -> "RingMatrix":
        one = RingPoly.monomial(p, 0)
        zero = RingPoly(p)
        return cls(
            p, [[one if i == j else zero for j in range(n)] for i in range(n)]
        )

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        if self.cols != other.rows or self.p != other.p:
            raise ParameterError("incompatible matrix product")
        zero = RingPoly(self.p)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for m in range(self.cols):
                    acc = add(acc, mul(self.entries[i][m], other.entries[m][j]))
                row.append(acc)
            out.append(row)
        return RingMatrix(self.p, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RingMatrix)
            and self.p == other.p
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"RingMatrix({self.rows}x{self.cols}, p={self.p})"


def build_vandermonde(e: ExponentTuple) -> RingMatrix:
    """The r x r matrix with entry (i, j) = x^(j * a_i), exponents mod p."""
    p = e.p
    rows = [
        [RingPoly.monomial(p, (j * ai) % p) for j in range(e.r)] for ai in e.a
    ]
    return RingMatrix(p, rows)


def lu_factors(e: ExponentTuple):
    """Bidiagonal factorization of the square Vandermonde matrix.

    Returns (lowers, uppers) in multiplication order: the product
    lowers[0] @ ... @ lowers[-1] @ uppers[0] @ ... @ uppers[-1] equals
    :func:`build_vandermonde`.  ``lowers`` holds L(1)..L(r-1) and
    ``uppers`` holds U(r-1)..U(1).  For r = 1 both lists are empty.
    """
    p, r, a = e.p, e.r, e.a
    one = RingPoly.monomial(p, 0)

    def upper(ell: int) -> RingMatrix:
        m = RingMatrix.identity(p, r).entries
        base = r - ell - 1
        for s in range(ell):
            m[base + s][base + s + 1] = RingPoly.monomial(p, a[s])
        return RingMatrix(p, m)

    def lower(ell: int) -> RingMatrix:
        m = RingMatrix.identity(p, r).entries
        base = r - ell - 1
        for s in range(1, ell + 1):
            m[base + s][base + s - 1] = one
            diag = add(
                RingPoly.monomial(p, a[r - ell + s - 1]),
                RingPoly.monomial(p, a[r - ell - 1]),
            )
            m[base + s][base + s] = diag
        return RingMatrix(p, m)

    lowers = [lower(ell) for ell in range(1, r)]
    uppers = [upper(ell) for ell in range(r - 1, 0, -1)]
    return lowers, uppers


def _check_image_condition(v: Sequence[RingPoly]) -> None:
    parities = {parity_at_one(x) for x in v}
    if len(parities) > 1:
        raise InputError(
            "right-hand side is outside the image: term-count parities differ"
        )


def solve_lu(
    e: ExponentTuple, v: Sequence[RingPoly], t: Optional[XorTally] = None
) -> List[RingPoly]:
    """Solve u * V(a) = v over R_p through the bidiagonal factors.

    A forward sweep folds in the upper factors; a backward sweep divides
    by the binomials x^(a_j) + x^(a_(r-i)).  Divisions use the cheaper
    p - 3 routine exactly where its skewed output can no longer feed a
    later division (the final division of each backward round and the
    u_r update of the first), and the even-terms routine everywhere else.
    The last r - 1 output components carry a zero x^(p-1) coefficient.
    """
    p, r, a = e.p, e.r, e.a
    if len(v) != r:
        raise ParameterError(f"expected {r} right-hand components, got {len(v)}")
    for x in v:
        if x.p != p:
            raise ParameterError("right-hand side modulus mismatch")
    _check_image_condition(v)
    u = list(v)
    if r == 1:
        return u

    for i in range(1, r):
        for j in range(r - i + 1, r + 1):
            exp = a[i + j - r - 1]
            u[j - 1] = add(u[j - 1], shift(u[j - 2], exp), t)

    for i in range(r - 1, 0, -1):
        u[r - 1] = div_binomial(
            u[r - 1], a[r - 1], a[r - i - 1], even_required=(i != 1), t=t
        )
        for j in range(r - 1, r - i, -1):
            rhs = add(u[j - 1], u[j], t)
            u[j - 1] = div_binomial(
                rhs, a[j - 1], a[r - i - 1], even_required=(i + j != r + 1), t=t
            )
        u[r - i - 1] = add(u[r - i - 1], u[r - i], t)
    return u


# ---------------------------------------------------------------------------
# Cramer-rule reference solver over F2[x]/m_p(x).
# ---------------------------------------------------------------------------


def _determinant(m: List[List[QuotientPoly]], p: int) -> QuotientPoly:
    """Cofactor expansion along the first column (signs vanish over F2)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    acc = QuotientPoly(p)
    for i in range(n):
        if m[i][0].is_zero():
            continue
        minor = [row[1:] for r_, row in enumerate(m) if r_ != i]
        acc = q_add(acc, q_mul(m[i][0], _determinant(minor, p)))
    return acc


def cramer_solve(
    matrix: List[List[QuotientPoly]], v: Sequence[QuotientPoly]
) -> Optional[List[QuotientPoly]]:
    """Solve u * M = v over F2[x]/m_p(x) by Cramer's rule.

    ``matrix[i][j]`` multiplies unknown i in equation j.  Returns None when
    the determinant is not invertible modulo m_p(x).
    """
    n = len(matrix)
    if n == 0 or len(v) != n:
        raise ParameterError("square system required")
    p = v[0].p
    det = _determinant(matrix, p)
    det_inv = q_inv(det)
    if det_inv is None:
        return None
    out = []
    for i in range(n):
        replaced = [list(v) if r_ == i else matrix[r_] for r_ in range(n)]
        out.append(q_mul(_determinant(replaced, p), det_inv))
    return out


def residue_matrix_inverse(
    matrix: List[List[QuotientPoly]], p: int
) -> Optional[List[List[QuotientPoly]]]:
    """Inverse of a residue matrix via the adjugate, or None if singular.

    Used by the vectorized decoder, where one inverse is applied to many
    stripes at once.
    """
    n = len(matrix)
    det_inv = q_inv(_determinant(matrix, p))
    if det_inv is None:
        return None
    if n == 1:
        return [[det_inv]]
    inv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [matrix[r_][c_] for c_ in range(n) if c_ != j]
                for r_ in range(n)
                if r_ != i
            ]
            # adj[j][i] = cofactor(i, j); signs vanish over F2
            inv[j][i] = q_mul(_determinant(minor, p), det_inv)
    return inv


def solve_cramer(
    e: ExponentTuple, v: Sequence[QuotientPoly]
) -> List[QuotientPoly]:
    """Ground-truth solve of the Vandermonde system over F2[x]/m_p(x)."""
    p, r = e.p, e.r
    if len(v) != r:
        raise ParameterError(f"expected {r} right-hand components, got {len(v)}")
    matrix = [
        [q_monomial(p, (j * ai) % p) for j in range(r)] for ai in e.a
    ]
    out = cramer_solve(matrix, list(v))
    if out is None:
        # The exponent-tuple invariant guarantees invertibility, so a
        # singular determinant signals a broken tuple.
        raise ParameterError("Vandermonde determinant not invertible mod m_p(x)")
    return out
