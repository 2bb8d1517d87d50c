"""EVENODD and RDP array-code families: parameters, encoders, augmentation.

A stripe is a (p-1) x (k+r) bit grid whose columns model disks: k
information columns, one row-parity column (index k), and r-1 diagonal
parity columns.  Diagonal ell of family EVENODD sums information bits
along rising diagonals with per-column slopes ell*g(j) and folds a shared
adjuster bit into the stored column; family RDP runs its diagonals across
the row-parity column as well and needs no adjuster.

The p x (k+r) augmented form replaces every diagonal column by a pure sum
of cyclic column shifts, which is the polynomial view used by the decoder:
column j of the augmented array is a ring element a_j(x) and the parity
columns satisfy (a_k ... a_{k+r-1}) = (a_0 ... a_{k-1}) * V for the k x r
matrix V[j][ell] = x^(ell * g(j)).

XOR accounting matches the closed forms in :mod:`arraycode.costmodel`:
encoding the row-parity column costs (k-1)(p-1); an EVENODD diagonal
column costs kp-k-1 (for k >= 2) and an RDP diagonal column k(p-2), with
imaginary-row entries skipped and the adjuster (or first summand) copied
for free.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .errors import InputError, ParameterError
from .ring import (
    QuotientPoly,
    RingPoly,
    XorTally,
    add,
    q_add,
    q_monomial,
    q_mul,
    shift,
)

__all__ = [
    "EVENODD",
    "RDP",
    "CodeParams",
    "CodewordArray",
    "AugmentedArray",
    "make_params",
    "validate",
    "encode",
    "encode_evenodd",
    "encode_rdp",
    "encode_parity_column",
    "augment",
    "augment_evenodd",
    "augment_rdp",
    "augmented_parity_columns",
    "deaugment",
    "algebraic_encode",
    "shorten_check",
    "verify_parity",
    "MdsViolation",
    "find_mds_violation",
    "mds_check",
    "stored_column_poly",
    "augmented_column_poly",
]

EVENODD = "evenodd"
RDP = "rdp"


@dataclass(frozen=True)
class CodeParams:
    """Validated parameters of one code instance.

    ``g`` holds k diagonal slopes for EVENODD and k+1 for RDP (the extra
    entry drives the row-parity column through the diagonals).  With
    ``mds_mode`` the slopes are confined to the smallest usable range and
    all pairwise slope differences must be coprime to p, the regime in
    which every erasure pattern of weight <= r is repairable.
    """

    family: str
    p: int
    k: int
    r: int
    g: tuple
    mds_mode: bool = False

    @property
    def n(self) -> int:
        return self.k + self.r

    @property
    def g_len(self) -> int:
        return self.k + 1 if self.family == RDP else self.k


def make_params(
    family: str,
    p: int,
    k: int,
    r: int,
    g: Optional[Sequence[int]] = None,
    mds_mode: bool = False,
) -> CodeParams:
    """Build and validate a parameter set; g defaults to (0, 1, 2, ...)."""
    if g is None:
        g = tuple(range(k + 1 if family == RDP else k))
    params = CodeParams(family, p, k, r, tuple(g), mds_mode)
    return validate(params)


def validate(params: CodeParams) -> CodeParams:
    """Check every parameter constraint, naming the violated one."""
    import math

    f, p, k, r, g = params.family, params.p, params.k, params.r, params.g
    if f not in (EVENODD, RDP):
        raise ParameterError(f"unknown family {f!r}")
    if p < 3 or p % 2 == 0:
        raise ParameterError(f"p must be an odd integer >= 3, got {p}")
    if k < 1 or r < 1:
        raise ParameterError("k and r must be positive")
    if f == EVENODD and p < max(k, r):
        raise ParameterError(f"EVENODD needs p >= max(k, r); {p} < max({k}, {r})")
    if f == RDP and p < max(k + 1, r):
        raise ParameterError(f"RDP needs p >= max(k+1, r); {p} < max({k + 1}, {r})")
    if len(g) != params.g_len:
        raise ParameterError(
            f"{f} with k={k} needs {params.g_len} diagonal slopes, got {len(g)}"
        )
    for x in g:
        if not 0 <= x <= p - 1:
            raise ParameterError(f"slope {x} outside 0..{p - 1}")
    if len(set(g)) != len(g):
        raise ParameterError("diagonal slopes must be distinct")
    if params.mds_mode:
        bound = k if f == RDP else k - 1
        for x in g:
            if x > bound:
                raise ParameterError(
                    f"mds_mode restricts slopes to 0..{bound}, got {x}"
                )
        for a, b in itertools.combinations(g, 2):
            if math.gcd((a - b) % p, p) != 1:
                raise ParameterError(
                    f"mds_mode needs slope differences coprime to p: "
                    f"gcd({a}-{b}, {p}) > 1"
                )
    return params


def _as_bit_grid(bits, rows: int, cols: int) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.shape != (rows, cols):
        raise ParameterError(f"expected a {rows}x{cols} bit grid, got {arr.shape}")
    if arr.max(initial=0) > 1:
        raise ParameterError("grid entries must be 0 or 1")
    return arr


@dataclass
class CodewordArray:
    """Stored stripe: (p-1) x (k+r) bits."""

    params: CodeParams
    bits: np.ndarray

    def __post_init__(self):
        self.bits = _as_bit_grid(self.bits, self.params.p - 1, self.params.n)

    def copy(self) -> "CodewordArray":
        return CodewordArray(self.params, self.bits.copy())

    def same_bits(self, other: "CodewordArray") -> bool:
        return self.params == other.params and np.array_equal(self.bits, other.bits)


@dataclass
class AugmentedArray:
    """Analytical stripe: p x (k+r) bits, row p-1 zero through column k."""

    params: CodeParams
    bits: np.ndarray

    def __post_init__(self):
        self.bits = _as_bit_grid(self.bits, self.params.p, self.params.n)

    def copy(self) -> "AugmentedArray":
        return AugmentedArray(self.params, self.bits.copy())

    def same_bits(self, other: "AugmentedArray") -> bool:
        return self.params == other.params and np.array_equal(self.bits, other.bits)


def stored_column_poly(params: CodeParams, bits: np.ndarray, j: int) -> RingPoly:
    """Column j of a stored grid as a ring element (top coefficient zero)."""
    p = params.p
    packed = 0
    col = bits[:, j]
    for i in range(p - 1):
        packed |= int(col[i]) << i
    return RingPoly(p, packed)


def augmented_column_poly(params: CodeParams, bits: np.ndarray, j: int) -> RingPoly:
    """Column j of an augmented grid as a ring element (all p rows)."""
    p = params.p
    packed = 0
    col = bits[:, j]
    for i in range(p):
        packed |= int(col[i]) << i
    return RingPoly(p, packed)


def _poly_to_column(poly: RingPoly, rows: int) -> np.ndarray:
    return np.array([(poly.bits >> i) & 1 for i in range(rows)], dtype=np.uint8)


def _tally(t: Optional[XorTally], n: int) -> None:
    if t is not None:
        t.add(n)


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------


def _check_info(params: CodeParams, info) -> np.ndarray:
    return _as_bit_grid(info, params.p - 1, params.k)


def _row_parity_column(
    params: CodeParams, info: np.ndarray, t: Optional[XorTally]
) -> np.ndarray:
    p, k = params.p, params.k
    out = np.empty(p - 1, dtype=np.uint8)
    for i in range(p - 1):
        acc = int(info[i, 0])
        for j in range(1, k):
            acc ^= int(info[i, j])
        out[i] = acc
    _tally(t, (k - 1) * (p - 1))
    return out


def _evenodd_diagonal_column(
    params: CodeParams, info: np.ndarray, ell: int, t: Optional[XorTally]
) -> np.ndarray:
    """One stored EVENODD diagonal column.

    The adjuster bit (the diagonal sum landing on the imaginary row) seeds
    every accumulator, then each non-imaginary information bit costs one
    XOR; imaginary-row hits are skipped outright.
    """
    p, k, g = params.p, params.k, params.g
    xors = 0
    adj = 0
    seen_real = False
    for j in range(k):
        src = (p - 1 - ell * g[j]) % p
        if src == p - 1:
            continue
        if seen_real:
            adj ^= int(info[src, j])
            xors += 1
        else:
            adj = int(info[src, j])
            seen_real = True
    out = np.empty(p - 1, dtype=np.uint8)
    for i in range(p - 1):
        acc = adj
        for j in range(k):
            src = (i - ell * g[j]) % p
            if src == p - 1:
                continue
            acc ^= int(info[src, j])
            xors += 1
        out[i] = acc
    _tally(t, xors)
    return out


def _rdp_diagonal_column(
    params: CodeParams,
    info: np.ndarray,
    row_parity: np.ndarray,
    ell: int,
    t: Optional[XorTally],
) -> np.ndarray:
    """One stored RDP diagonal column; sums run across columns 0..k."""
    p, k, g = params.p, params.k, params.g

    def cell(row: int, col: int) -> int:
        return int(row_parity[row]) if col == k else int(info[row, col])

    xors = 0
    out = np.empty(p - 1, dtype=np.uint8)
    for i in range(p - 1):
        acc = 0
        seen = False
        for j in range(k + 1):
            src = (i - ell * g[j]) % p
            if src == p - 1:
                continue
            if seen:
                acc ^= cell(src, j)
                xors += 1
            else:
                acc = cell(src, j)
                seen = True
        out[i] = acc
    _tally(t, xors)
    return out


def encode_parity_column(
    params: CodeParams,
    info: np.ndarray,
    col: int,
    t: Optional[XorTally] = None,
    row_parity: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Encode a single parity column (index k..k+r-1) from information bits.

    RDP diagonals consume the row-parity column; pass it via ``row_parity``
    when it is already in hand, otherwise it is recomputed (and tallied).
    """
    k = params.k
    if not k <= col <= params.n - 1:
        raise ParameterError(f"column {col} is not a parity column")
    ell = col - k
    if ell == 0:
        return _row_parity_column(params, info, t)
    if params.family == EVENODD:
        return _evenodd_diagonal_column(params, info, ell, t)
    if row_parity is None:
        row_parity = _row_parity_column(params, info, t)
    return _rdp_diagonal_column(params, info, row_parity, ell, t)


def encode_evenodd(
    params: CodeParams, info, t: Optional[XorTally] = None
) -> CodewordArray:
    if params.family != EVENODD:
        raise ParameterError("encode_evenodd requires EVENODD parameters")
    return _encode(params, info, t)


def encode_rdp(params: CodeParams, info, t: Optional[XorTally] = None) -> CodewordArray:
    if params.family != RDP:
        raise ParameterError("encode_rdp requires RDP parameters")
    return _encode(params, info, t)


def encode(params: CodeParams, info, t: Optional[XorTally] = None) -> CodewordArray:
    """Family-dispatching encoder."""
    return _encode(params, info, t)


def _encode(params: CodeParams, info, t: Optional[XorTally]) -> CodewordArray:
    info = _check_info(params, info)
    p, k, r = params.p, params.k, params.r
    grid = np.zeros((p - 1, params.n), dtype=np.uint8)
    grid[:, :k] = info
    row_parity = _row_parity_column(params, info, t)
    grid[:, k] = row_parity
    for ell in range(1, r):
        if params.family == EVENODD:
            grid[:, k + ell] = _evenodd_diagonal_column(params, info, ell, t)
        else:
            grid[:, k + ell] = _rdp_diagonal_column(params, info, row_parity, ell, t)
    return CodewordArray(params, grid)


# ---------------------------------------------------------------------------
# Augmentation and its inverse
# ---------------------------------------------------------------------------


def _evenodd_checksum(cw: CodewordArray, t: Optional[XorTally]) -> int:
    """XOR of the stored row-parity column; p - 2 XORs."""
    p, k = cw.params.p, cw.params.k
    acc = int(cw.bits[0, k])
    for i in range(1, p - 1):
        acc ^= int(cw.bits[i, k])
    _tally(t, p - 2)
    return acc


def augmented_parity_columns(
    cw: CodewordArray, cols: Sequence[int], t: Optional[XorTally] = None
) -> List[RingPoly]:
    """Augmented forms of selected parity columns, as ring elements.

    EVENODD recovers the imaginary-row bit of a diagonal column from the
    identity top = sum(row-parity column) + sum(stored column), then folds
    it back into the stored bits: p - 2 XORs once for the row-parity
    checksum plus 2(p - 1) per diagonal column.  RDP tops are plain column
    sums (p - 2 each).  Column k passes through with a zero top at no cost.
    """
    params = cw.params
    p, k = params.p, params.k
    for c in cols:
        if not k <= c <= params.n - 1:
            raise ParameterError(f"column {c} is not a parity column")
    out = []
    if params.family == EVENODD:
        s_k = _evenodd_checksum(cw, t)
        for c in cols:
            if c == k:
                out.append(stored_column_poly(params, cw.bits, c))
                continue
            col_sum = int(cw.bits[0, c])
            for i in range(1, p - 1):
                col_sum ^= int(cw.bits[i, c])
            top = col_sum ^ s_k
            _tally(t, (p - 2) + 1)
            packed = top << (p - 1)
            for i in range(p - 1):
                packed |= (int(cw.bits[i, c]) ^ top) << i
            _tally(t, p - 1)
            out.append(RingPoly(p, packed))
    else:
        for c in cols:
            if c == k:
                out.append(stored_column_poly(params, cw.bits, c))
                continue
            top = int(cw.bits[0, c])
            for i in range(1, p - 1):
                top ^= int(cw.bits[i, c])
            _tally(t, p - 2)
            packed = top << (p - 1)
            for i in range(p - 1):
                packed |= int(cw.bits[i, c]) << i
            out.append(RingPoly(p, packed))
    return out


def augment_evenodd(cw: CodewordArray, t: Optional[XorTally] = None) -> AugmentedArray:
    if cw.params.family != EVENODD:
        raise ParameterError("augment_evenodd requires an EVENODD stripe")
    return _augment(cw, t)


def augment_rdp(cw: CodewordArray, t: Optional[XorTally] = None) -> AugmentedArray:
    if cw.params.family != RDP:
        raise ParameterError("augment_rdp requires an RDP stripe")
    return _augment(cw, t)


def augment(cw: CodewordArray, t: Optional[XorTally] = None) -> AugmentedArray:
    return _augment(cw, t)


def _augment(cw: CodewordArray, t: Optional[XorTally]) -> AugmentedArray:
    params = cw.params
    p, k, n = params.p, params.k, params.n
    grid = np.zeros((p, n), dtype=np.uint8)
    grid[: p - 1, : k + 1] = cw.bits[:, : k + 1]
    diag_cols = list(range(k + 1, n))
    if diag_cols:
        polys = augmented_parity_columns(cw, diag_cols, t)
        for c, poly in zip(diag_cols, polys):
            grid[:, c] = _poly_to_column(poly, p)
    return AugmentedArray(params, grid)


def deaugment(aug: AugmentedArray, t: Optional[XorTally] = None) -> CodewordArray:
    """Inverse of augmentation: back to the stored (p-1)-row stripe.

    EVENODD diagonal columns are reduced modulo m_p(x) columnwise (p - 1
    XORs whenever the imaginary-row bit is set); RDP just drops the last
    row.
    """
    params = aug.params
    p, k, n = params.p, params.k, params.n
    grid = aug.bits[: p - 1].copy()
    if params.family == EVENODD:
        for c in range(k + 1, n):
            top = int(aug.bits[p - 1, c])
            if top:
                grid[:, c] ^= 1
                _tally(t, p - 1)
    return CodewordArray(params, grid)


def algebraic_encode(params: CodeParams, info) -> AugmentedArray:
    """Encode through ring arithmetic: parity polynomials are Vandermonde
    combinations of the information polynomials.  Bit-identical to
    ``augment(encode(...))``; used as the cross-check route."""
    info = _check_info(params, info)
    p, k, r, g = params.p, params.k, params.r, params.g
    grid = np.zeros((p, params.n), dtype=np.uint8)
    grid[: p - 1, :k] = info
    info_polys = [stored_column_poly(params, info, j) for j in range(k)]
    if params.family == EVENODD:
        for ell in range(r):
            acc = RingPoly(p)
            for j in range(k):
                acc = add(acc, shift(info_polys[j], ell * g[j]))
            grid[:, k + ell] = _poly_to_column(acc, p)
    else:
        row_parity = RingPoly(p)
        for poly in info_polys:
            row_parity = add(row_parity, poly)
        grid[:, k] = _poly_to_column(row_parity, p)
        extended = info_polys + [row_parity]
        for ell in range(1, r):
            acc = RingPoly(p)
            for j in range(k + 1):
                acc = add(acc, shift(extended[j], ell * g[j]))
            grid[:, k + ell] = _poly_to_column(acc, p)
    return AugmentedArray(params, grid)


def verify_parity(params: CodeParams, bits: np.ndarray) -> List[int]:
    """Recompute all parity columns from the information columns and
    return the indices of columns that disagree."""
    grid = _as_bit_grid(bits, params.p - 1, params.n)
    fresh = _encode(params, grid[:, : params.k], None)
    return [
        c
        for c in range(params.k, params.n)
        if not np.array_equal(grid[:, c], fresh.bits[:, c])
    ]


# ---------------------------------------------------------------------------
# Shortening relationship between the two families
# ---------------------------------------------------------------------------


def shorten_check(
    evenodd_params: CodeParams, rdp_params: CodeParams, info
) -> bool:
    """Does shortening the wider EVENODD code reproduce the RDP array?

    The EVENODD code must have one more information column and share the
    slope tuple.  The extra column is forced to the row sums of the
    others, the augmented array is formed, and the (now zero) row-parity
    column is removed; the result is compared bit-for-bit against the
    augmented RDP encoding of the same information bits.
    """
    if evenodd_params.family != EVENODD or rdp_params.family != RDP:
        raise ParameterError("expected an (EVENODD, RDP) parameter pair")
    if (
        evenodd_params.p != rdp_params.p
        or evenodd_params.r != rdp_params.r
        or evenodd_params.k != rdp_params.k + 1
    ):
        raise ParameterError("incompatible shortening pair: need k_evenodd = k_rdp + 1")
    if evenodd_params.g != rdp_params.g:
        raise ParameterError("shortening pair must share the slope tuple")
    info = _check_info(rdp_params, info)
    k = rdp_params.k

    wide_info = np.zeros((rdp_params.p - 1, k + 1), dtype=np.uint8)
    wide_info[:, :k] = info
    for i in range(rdp_params.p - 1):
        acc = 0
        for j in range(k):
            acc ^= int(info[i, j])
        wide_info[i, k] = acc

    wide_aug = augment_evenodd(encode_evenodd(evenodd_params, wide_info))
    # The forced column makes the EVENODD row-parity column (index k+1)
    # identically zero; deleting it leaves the RDP augmented array.
    if wide_aug.bits[:, k + 1].any():
        return False
    shortened = np.delete(wide_aug.bits, k + 1, axis=1)

    rdp_aug = augment_rdp(encode_rdp(rdp_params, info))
    return np.array_equal(shortened, rdp_aug.bits)


# ---------------------------------------------------------------------------
# Brute-force MDS verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MdsViolation:
    """Witness of a non-MDS parameter set."""

    kind: str  # "singular_subsystem" or "decode_mismatch"
    info_columns: tuple
    info_exponents: tuple
    parity_exponents: tuple
    detail: str = ""


def _fallback_coeff(params: CodeParams, info_col: int, ell: int) -> QuotientPoly:
    """Residue multiplying information column ``info_col`` in the parity
    equation with diagonal index ``ell`` (0 = row parity)."""
    p, g = params.p, params.g
    if params.family == EVENODD:
        return q_monomial(p, ell * g[info_col])
    if ell == 0:
        return q_monomial(p, 0)
    return q_add(
        q_monomial(p, ell * g[info_col]), q_monomial(p, ell * g[params.k])
    )


def find_mds_violation(
    params: CodeParams,
    max_patterns: Optional[int] = None,
    stripes_per_pattern: int = 2,
    seed: int = 0,
) -> Optional[MdsViolation]:
    """Search for an erasure pattern the code cannot repair.

    Two sweeps: every square parity subsystem is tested for determinant
    invertibility modulo m_p(x) (an exact MDS characterization), and then
    random stripes are pushed through the generic decoder for every
    erasure pattern of full weight r (capped by ``max_patterns``).
    """
    from . import decoder  # local import; decoder depends on this module
    from .vandermonde import _determinant
    from .ring import q_inv

    p, k, r = params.p, params.k, params.r
    for gamma in range(1, r + 1):
        if gamma > k:
            break
        for E in itertools.combinations(range(k), gamma):
            for L in itertools.combinations(range(r), gamma):
                matrix = [
                    [_fallback_coeff(params, e, ell) for ell in L] for e in E
                ]
                if q_inv(_determinant(matrix, p)) is None:
                    return MdsViolation(
                        kind="singular_subsystem",
                        info_columns=E,
                        info_exponents=tuple(params.g[e] for e in E),
                        parity_exponents=L,
                        detail="parity subsystem determinant shares a factor "
                        "with m_p(x)",
                    )

    rng = np.random.default_rng(seed)
    patterns = itertools.combinations(range(params.n), r)
    if max_patterns is not None:
        patterns = itertools.islice(patterns, max_patterns)
    for pattern in patterns:
        info_erased = tuple(c for c in pattern if c < k)
        parity_erased = tuple(c for c in pattern if c >= k)
        spec = decoder.ErasureSpec(info_erased, parity_erased)
        for _ in range(stripes_per_pattern):
            info = rng.integers(0, 2, size=(p - 1, k), dtype=np.uint8)
            cw = _encode(params, info, None)
            damaged = cw.copy()
            for c in pattern:
                damaged.bits[:, c] = 0
            try:
                repaired = decoder.decode_fallback(params, damaged, spec)
            except Exception as exc:  # singular or unrecoverable
                return MdsViolation(
                    kind="decode_mismatch",
                    info_columns=info_erased,
                    info_exponents=tuple(params.g[e] for e in info_erased),
                    parity_exponents=tuple(c - k for c in parity_erased),
                    detail=f"decode failed: {exc}",
                )
            if not repaired.same_bits(cw):
                return MdsViolation(
                    kind="decode_mismatch",
                    info_columns=info_erased,
                    info_exponents=tuple(params.g[e] for e in info_erased),
                    parity_exponents=tuple(c - k for c in parity_erased),
                    detail="repaired stripe differs from the original",
                )
    return None


def mds_check(params: CodeParams, max_patterns: Optional[int] = None) -> bool:
    """True when no erasure pattern of weight <= r defeats the code."""
    return find_mds_violation(params, max_patterns=max_patterns) is None
