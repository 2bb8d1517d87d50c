"""Arithmetic in the binary cyclic ring R_p = F2[x]/(1 + x^p), p odd.

Elements are length-p coefficient vectors packed into Python ints (bit i
holds the coefficient of x^i).  The cost convention used throughout the
toolkit is counted here: adding two length-L bit sequences costs L XORs,
copies and cyclic shifts cost nothing.  Every operation that spends XORs
accepts an optional :class:`XorTally` so callers can audit bit-operation
budgets exactly.

Two sparse division routines solve (1 + x^d) g = f for d coprime to p and
f with an even number of nonzero terms:

* :func:`div_one_plus_xd_any` runs in exactly p - 3 XORs and returns the
  solution whose x^(p-1) coefficient is zero.
* :func:`div_one_plus_xd_even` runs in exactly (3p - 5)/2 XORs and returns
  the solution with an even number of nonzero terms.

The two results coincide or differ by exactly m_p(x) = 1 + x + ... +
x^(p-1).  Residues modulo m_p(x) are represented by :class:`QuotientPoly`
and back the Cramer-rule reference solver.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional

from .errors import InputError, ParameterError

__all__ = [
    "XorTally",
    "RingPoly",
    "QuotientPoly",
    "add",
    "shift",
    "mul",
    "parity_at_one",
    "reduce_mod_mp",
    "div_one_plus_xd_any",
    "div_one_plus_xd_even",
    "div_binomial",
    "residue",
    "q_add",
    "q_mul",
    "q_inv",
    "q_monomial",
]


class XorTally:
    """Monotone counter of bit-level XOR operations."""

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0

    def add(self, n: int) -> None:
        if n < 0:
            raise ValueError("tally increments must be non-negative")
        self.count += n

    def __repr__(self) -> str:
        return f"XorTally(count={self.count})"


def _tally(t: Optional[XorTally], n: int) -> None:
    if t is not None:
        t.add(n)


def _check_p(p: int) -> None:
    if p < 3 or p % 2 == 0:
        raise ParameterError(f"ring modulus p must be an odd integer >= 3, got {p}")


class RingPoly:
    """Element of R_p = F2[x]/(1 + x^p).

    ``bits`` packs the p coefficients; bit i is the coefficient of x^i.
    Instances are immutable value objects.
    """

    __slots__ = ("p", "bits")

    def __init__(self, p: int, bits: int = 0):
        _check_p(p)
        if bits < 0 or bits >> p:
            raise ParameterError(f"coefficient bits out of range for p={p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("RingPoly is immutable")

    @classmethod
    def from_coeffs(cls, p: int, coeffs: Iterable[int]) -> "RingPoly":
        cs = list(coeffs)
        if len(cs) != p:
            raise ParameterError(f"expected {p} coefficients, got {len(cs)}")
        bits = 0
        for i, c in enumerate(cs):
            if c not in (0, 1):
                raise ParameterError("coefficients must be 0 or 1")
            bits |= c << i
        return cls(p, bits)

    @classmethod
    def monomial(cls, p: int, e: int) -> "RingPoly":
        _check_p(p)
        return cls(p, 1 << (e % p))

    @classmethod
    def mp(cls, p: int) -> "RingPoly":
        """The all-ones polynomial m_p(x) = 1 + x + ... + x^(p-1)."""
        _check_p(p)
        return cls(p, (1 << p) - 1)

    @classmethod
    def parse(cls, p: int, text: str) -> "RingPoly":
        """Parse notation like ``"1 + x + x^4"`` (``"0"`` for zero)."""
        bits = 0
        for term in text.replace(" ", "").split("+"):
            if term == "0":
                continue
            if term == "1":
                e = 0
            elif term == "x":
                e = 1
            elif term.startswith("x^"):
                e = int(term[2:])
            else:
                raise ParameterError(f"cannot parse term {term!r}")
            bits ^= 1 << (e % p)
        return cls(p, bits)

    def coeff(self, i: int) -> int:
        return (self.bits >> (i % self.p)) & 1

    @property
    def coeffs(self) -> tuple:
        return tuple((self.bits >> i) & 1 for i in range(self.p))

    @property
    def top(self) -> int:
        """Coefficient of x^(p-1)."""
        return (self.bits >> (self.p - 1)) & 1

    def is_zero(self) -> bool:
        return self.bits == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RingPoly)
            and self.p == other.p
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.p, self.bits))

    def __add__(self, other: "RingPoly") -> "RingPoly":
        return add(self, other)

    def __mul__(self, other: "RingPoly") -> "RingPoly":
        return mul(self, other)

    def __repr__(self) -> str:
        if self.bits == 0:
            return f"RingPoly({self.p}, '0')"
        terms = []
        for i in range(self.p):
            if (self.bits >> i) & 1:
                terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
        return f"RingPoly({self.p}, '{'+'.join(terms)}')"


def _require_same_p(a: RingPoly, b: RingPoly) -> None:
    if a.p != b.p:
        raise ParameterError(f"mismatched ring moduli: {a.p} != {b.p}")


def add(a: RingPoly, b: RingPoly, t: Optional[XorTally] = None) -> RingPoly:
    """Coefficientwise XOR; costs p."""
    _require_same_p(a, b)
    _tally(t, a.p)
    return RingPoly(a.p, a.bits ^ b.bits)


def shift(a: RingPoly, d: int) -> RingPoly:
    """Multiply by x^d (cyclic shift); free of XORs."""
    p = a.p
    d %= p
    if d == 0:
        return a
    mask = (1 << p) - 1
    return RingPoly(p, ((a.bits << d) | (a.bits >> (p - d))) & mask)


def mul(a: RingPoly, b: RingPoly) -> RingPoly:
    """Schoolbook cyclic convolution.  Reference facility only: carries no
    tally and never sits on the decode fast path."""
    _require_same_p(a, b)
    p = a.p
    mask = (1 << p) - 1
    out = 0
    bb = b.bits
    i = 0
    abits = a.bits
    while abits:
        if abits & 1:
            out ^= ((bb << i) | (bb >> (p - i))) & mask if i else bb
        abits >>= 1
        i += 1
    return RingPoly(p, out)


def parity_at_one(a: RingPoly) -> int:
    """Evaluate a(1): the XOR of all coefficients."""
    return bin(a.bits).count("1") & 1


def reduce_mod_mp(a: RingPoly, t: Optional[XorTally] = None) -> RingPoly:
    """Canonical residue of a modulo m_p(x), within R_p.

    When the x^(p-1) coefficient is set, XOR it into the p - 1 lower
    coefficients (cost p - 1) and clear it; otherwise a is returned
    unchanged at zero cost.
    """
    p = a.p
    if (a.bits >> (p - 1)) & 1:
        _tally(t, p - 1)
        return RingPoly(p, a.bits ^ ((1 << p) - 1))
    return a


def _check_divisor(p: int, d: int) -> int:
    d %= p
    if d == 0:
        raise ParameterError("division by 1 + x^d requires d not divisible by p")
    if math.gcd(d, p) != 1:
        raise ParameterError(f"d={d} shares a factor with p={p}")
    return d


def _check_even_terms(f: RingPoly) -> None:
    if parity_at_one(f):
        raise InputError(
            "no solution: dividend must have an even number of nonzero terms"
        )


def div_one_plus_xd_any(
    f: RingPoly, d: int, t: Optional[XorTally] = None
) -> RingPoly:
    """Solve (1 + x^d) g = f in R_p; exactly p - 3 XORs.

    Recurrence: g_{p-1} = 0, g_{p-d-1} = f_{p-1}, g_{d-1} = f_{d-1}, then
    g_{p-(i+1)d-1} = f_{p-id-1} + g_{p-id-1} for i = 1..p-3 (indices mod p).
    The returned solution always has a zero x^(p-1) coefficient.
    """
    p = f.p
    d = _check_divisor(p, d)
    _check_even_terms(f)
    fb = f.bits
    g = 0
    # g_{p-1} = 0 implicitly; the two seed coefficients are copies.
    g |= ((fb >> (p - 1)) & 1) << ((p - d - 1) % p)
    g |= ((fb >> (d - 1)) & 1) << (d - 1)
    for i in range(1, p - 2):  # i = 1..p-3
        src = (p - i * d - 1) % p
        dst = (p - (i + 1) * d - 1) % p
        bit = ((fb >> src) & 1) ^ ((g >> src) & 1)
        g |= bit << dst
    _tally(t, p - 3)
    return RingPoly(p, g)


def div_one_plus_xd_even(
    f: RingPoly, d: int, t: Optional[XorTally] = None
) -> RingPoly:
    """Solve (1 + x^d) g = f in R_p; exactly (3p - 5)/2 XORs.

    g_0 = f_{2d} + f_{4d} + ... + f_{(p-1)d}, then g_{dl} = f_{dl} +
    g_{d(l-1)} for l = 1..p-1 (indices mod p).  The returned solution
    always has an even number of nonzero terms.
    """
    p = f.p
    d = _check_divisor(p, d)
    _check_even_terms(f)
    fb = f.bits
    g0 = 0
    for m in range(2, p, 2):
        g0 ^= (fb >> ((m * d) % p)) & 1
    g = g0
    prev = g0
    for ell in range(1, p):
        idx = (d * ell) % p
        cur = ((fb >> idx) & 1) ^ prev
        g |= cur << idx
        prev = cur
    _tally(t, (3 * p - 5) // 2)
    return RingPoly(p, g)


def div_binomial(
    f: RingPoly,
    a: int,
    b: int,
    even_required: bool,
    t: Optional[XorTally] = None,
) -> RingPoly:
    """Solve (x^a + x^b) g = f by factoring x^a + x^b = x^b (1 + x^(a-b)).

    The dividend is cyclically shifted by -b (free) and handed to the
    division routine selected by ``even_required``.
    """
    p = f.p
    d = (a - b) % p
    if d == 0:
        raise ParameterError("binomial divisor x^a + x^b needs a != b mod p")
    shifted = shift(f, -b)
    if even_required:
        return div_one_plus_xd_even(shifted, d, t)
    return div_one_plus_xd_any(shifted, d, t)


# ---------------------------------------------------------------------------
# Residues modulo m_p(x): the ground-truth arithmetic for the Cramer solver.
# ---------------------------------------------------------------------------


class QuotientPoly:
    """Canonical residue modulo m_p(x): degree < p - 1, bits packed."""

    __slots__ = ("p", "bits")

    def __init__(self, p: int, bits: int = 0):
        _check_p(p)
        if bits < 0 or bits >> (p - 1):
            raise ParameterError(f"residue bits out of range for p={p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("QuotientPoly is immutable")

    @property
    def coeffs(self) -> tuple:
        return tuple((self.bits >> i) & 1 for i in range(self.p - 1))

    def to_ring(self) -> RingPoly:
        return RingPoly(self.p, self.bits)

    def is_zero(self) -> bool:
        return self.bits == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QuotientPoly)
            and self.p == other.p
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash(("q", self.p, self.bits))

    def __add__(self, other: "QuotientPoly") -> "QuotientPoly":
        return q_add(self, other)

    def __mul__(self, other: "QuotientPoly") -> "QuotientPoly":
        return q_mul(self, other)

    def __repr__(self) -> str:
        return f"QuotientPoly(p={self.p}, bits={self.bits:#x})"


def residue(a: RingPoly) -> QuotientPoly:
    """Canonical residue of a ring element modulo m_p(x)."""
    r = reduce_mod_mp(a)
    return QuotientPoly(a.p, r.bits)


def _mp_int(p: int) -> int:
    return (1 << p) - 1


def _gf2_degree(a: int) -> int:
    return a.bit_length() - 1


def _gf2_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _gf2_mod(a: int, m: int) -> int:
    dm = _gf2_degree(m)
    while (da := _gf2_degree(a)) >= dm:
        a ^= m << (da - dm)
    return a


def _gf2_divmod(a: int, m: int) -> tuple:
    q = 0
    dm = _gf2_degree(m)
    while (da := _gf2_degree(a)) >= dm:
        q |= 1 << (da - dm)
        a ^= m << (da - dm)
    return q, a


def _gf2_inv_mod(a: int, m: int) -> Optional[int]:
    """Inverse of a modulo m over F2[x] via the extended Euclidean
    algorithm, or None when gcd(a, m) != 1."""
    if a == 0:
        return None
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1:
        q, rem = _gf2_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 ^ _gf2_mul(q, s1)
    if r0 != 1:
        return None
    return _gf2_mod(s0, m)


def q_add(a: QuotientPoly, b: QuotientPoly) -> QuotientPoly:
    if a.p != b.p:
        raise ParameterError("mismatched moduli")
    return QuotientPoly(a.p, a.bits ^ b.bits)


def q_mul(a: QuotientPoly, b: QuotientPoly) -> QuotientPoly:
    if a.p != b.p:
        raise ParameterError("mismatched moduli")
    prod = _gf2_mul(a.bits, b.bits)
    return QuotientPoly(a.p, _gf2_mod(prod, _mp_int(a.p)))


def q_inv(a: QuotientPoly) -> Optional[QuotientPoly]:
    """Multiplicative inverse modulo m_p(x), or None when the element is
    a zero divisor (its gcd with m_p(x) is nontrivial)."""
    inv = _gf2_inv_mod(a.bits, _mp_int(a.p))
    if inv is None:
        return None
    return QuotientPoly(a.p, inv)


def q_monomial(p: int, e: int) -> QuotientPoly:
    """Residue of x^e modulo m_p(x)."""
    e %= p
    if e == p - 1:
        # x^(p-1) = m_p(x) + (1 + x + ... + x^(p-2))
        return QuotientPoly(p, (1 << (p - 1)) - 1)
    return QuotientPoly(p, 1 << e)
