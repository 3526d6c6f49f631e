"""Exact rational arithmetic and multiplicative exponent-lattice algebra.

Everything downstream (interval endpoints, slopes, gap lengths) is an exact
``fractions.Fraction``; this module adds the pieces the stdlib does not have:
prime factorization of rationals, exponent vectors for the multiplicative
scale group of an IFS, and integer-kernel computations used to decide
multiplicative (in)commensurability.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional

Rational = Fraction

# Trial division is backed by a sieve of primes below this bound.  Inputs with
# a prime factor at or above the bound (desk-scale inputs never have one) are
# rejected rather than silently misfactored.
SIEVE_BOUND = 10**6

_sieve_primes: list[int] | None = None


class ExactError(ValueError):
    """Domain error in the arithmetic kernel."""


def _primes() -> list[int]:
    global _sieve_primes
    if _sieve_primes is None:
        flags = bytearray([1]) * SIEVE_BOUND
        flags[0] = flags[1] = 0
        for p in range(2, int(SIEVE_BOUND**0.5) + 1):
            if flags[p]:
                flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
        _sieve_primes = [i for i, f in enumerate(flags) if f]
    return _sieve_primes


def factorize_int(n: int) -> dict[int, int]:
    """Factor a positive integer into {prime: exponent}."""
    if n <= 0:
        raise ExactError(f"cannot factor non-positive integer {n}")
    out: dict[int, int] = {}
    for p in _primes():
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        # Remaining cofactor has no prime factor < SIEVE_BOUND, so it is
        # prime whenever it is < SIEVE_BOUND**2; beyond that we cannot
        # certify primality by trial division.
        if n >= SIEVE_BOUND * SIEVE_BOUND:
            raise ExactError(f"factor {n} exceeds the trial-division bound")
        out[n] = out.get(n, 0) + 1
    return out


def factorize(q: Rational) -> dict[int, int]:
    """Factor a positive rational into {prime: exponent}, exponents nonzero.

    The numerator and denominator are factored separately; denominators
    contribute negative exponents.  factorize(1) == {}.
    """
    q = Fraction(q)
    if q <= 0:
        raise ExactError(f"cannot factor non-positive rational {q}")
    exps = factorize_int(q.numerator)
    for p, e in factorize_int(q.denominator).items():
        exps[p] = exps.get(p, 0) - e
        if exps[p] == 0:
            del exps[p]
    return exps


def unfactorize(exps: dict[int, int]) -> Rational:
    """Inverse of :func:`factorize`."""
    num, den = 1, 1
    for p, e in exps.items():
        if e > 0:
            num *= p**e
        else:
            den *= p ** (-e)
    return Fraction(num, den)


@dataclass(frozen=True)
class ScaleElement:
    """Element of the multiplicative scale group of an IFS.

    Stores the integer exponent vector k; its value for ratios
    (l_0, ..., l_n) is the product of l_i**k_i.  Addition of exponent
    vectors corresponds to multiplication of values.
    """

    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))

    def __add__(self, other: "ScaleElement") -> "ScaleElement":
        if len(self.exponents) != len(other.exponents):
            raise ExactError("exponent vectors of different lengths")
        return ScaleElement(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __neg__(self) -> "ScaleElement":
        return ScaleElement(tuple(-a for a in self.exponents))

    def __sub__(self, other: "ScaleElement") -> "ScaleElement":
        return self + (-other)

    def __len__(self) -> int:
        return len(self.exponents)

    @staticmethod
    def zero(length: int) -> "ScaleElement":
        return ScaleElement((0,) * length)


def scale_value(ifs_ratios: Iterable[Rational], k: ScaleElement | Iterable[int]) -> Rational:
    """Value of the scale element: product of ratios[i] ** k[i], exactly."""
    ratios = [Fraction(r) for r in ifs_ratios]
    exps = list(k.exponents if isinstance(k, ScaleElement) else k)
    if len(ratios) != len(exps):
        raise ExactError(
            f"scale vector length {len(exps)} does not match {len(ratios)} ratios"
        )
    if any(r <= 0 for r in ratios):
        raise ExactError("ratios must be positive")
    value = Fraction(1)
    for r, e in zip(ratios, exps):
        value *= r**e
    return value


def _integer_left_kernel(rows: list[list[int]]) -> list[tuple[int, ...]]:
    """Basis of {x integer : x . rows == 0} by exact unimodular elimination.

    Rows are augmented with an identity block and reduced to row echelon form
    over the integers; rows whose matrix part vanishes carry a kernel basis in
    their identity part.
    """
    m = len(rows)
    if m == 0:
        return []
    k = len(rows[0])
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    r = 0
    for c in range(k):
        # Euclid on column c below row r until at most one nonzero survives.
        while True:
            nz = [i for i in range(r, m) if aug[i][c] != 0]
            if not nz:
                break
            pivot = min(nz, key=lambda i: abs(aug[i][c]))
            aug[r], aug[pivot] = aug[pivot], aug[r]
            done = True
            for i in range(r + 1, m):
                if aug[i][c] != 0:
                    q = aug[i][c] // aug[r][c]
                    aug[i] = [a - q * b for a, b in zip(aug[i], aug[r])]
                    if aug[i][c] != 0:
                        done = False
            if done:
                r += 1
                break
        if r == m:
            break
    return [tuple(row[k:]) for row in aug if all(v == 0 for v in row[:k])]


def _exponent_rows(values: list[Rational]) -> tuple[list[list[int]], list[int]]:
    facts = [factorize(v) for v in values]
    primes = sorted({p for f in facts for p in f})
    rows = [[f.get(p, 0) for p in primes] for f in facts]
    return rows, primes


def relation_lattice(values: Iterable[Rational]) -> list[tuple[int, ...]]:
    """Basis of the lattice of multiplicative relations among positive rationals.

    Returns integer vectors m such that the product of values[i]**m[i] is 1;
    every integer relation is in their span.  Empty list means the values are
    multiplicatively independent.
    """
    vals = [Fraction(v) for v in values]
    if any(v <= 0 for v in vals):
        raise ExactError("relation lattice requires positive rationals")
    rows, _ = _exponent_rows(vals)
    return _integer_left_kernel(rows)


def solve_exponent_product(values: Iterable[Rational], target: Rational) -> Optional[tuple[int, ...]]:
    """Integer vector k with product of values[i]**k[i] == target, or None."""
    vals = [Fraction(v) for v in values]
    target = Fraction(target)
    if any(v <= 0 for v in vals) or target <= 0:
        raise ExactError("exponent systems are solved over positive rationals")
    kernel = _integer_left_kernel(_exponent_rows(vals + [target])[0])
    # Seek a lattice vector whose last coordinate is -1: its head is then a
    # solution.  The last coordinates form a subgroup d*Z of Z.
    combo = None
    d = 0
    for vec in kernel:
        t = vec[len(vals)]
        if t == 0:
            continue
        if combo is None:
            combo, d = list(vec), t
        else:
            g, x, y = _xgcd(d, t)
            combo = [x * a + y * b for a, b in zip(combo, vec)]
            d = g
    if combo is None or abs(d) != 1:
        return None
    if d == 1:
        combo = [-a for a in combo]
    assert combo[len(vals)] == -1
    return tuple(combo[: len(vals)])


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, x, y with a*x + b*y == g == gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def in_lattice_span(vector: tuple[int, ...], basis: list[tuple[int, ...]]) -> bool:
    """Whether an integer vector lies in the integer span of a lattice basis."""
    if all(v == 0 for v in vector):
        return True
    if not basis:
        return False
    # x lies in the span iff the kernel of [basis; x] (as rows) contains a
    # vector whose last coordinate is +-1.
    rows = [list(b) for b in basis] + [list(vector)]
    kernel = _integer_left_kernel(rows)
    d = 0
    for vec in kernel:
        d = gcd(d, vec[len(basis)])
    return d == 1


def parse_rational(text: str) -> Rational:
    """Parse "p/q" or "p" into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ExactError(f"not a rational: {text!r}") from exc


def format_rational(q: Rational) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)
