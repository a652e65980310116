"""Exact arithmetic in Z[1/k]: factorization, full divisors, valuations and base-k digits.

Elements of Z[1/k] are plain :class:`fractions.Fraction` values; the helpers here
check and exploit the fact that every prime of the denominator divides ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

ZkRational = Fraction


class InvalidModulusError(ValueError):
    pass


class UnsupportedPrimeError(ValueError):
    pass


class NotInZkError(ValueError):
    pass


@dataclass(frozen=True)
class KFactorization:
    k: int
    primes: tuple[tuple[int, int], ...]
    cofactors: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "cofactors", tuple(self.k // p**m for p, m in self.primes)
        )

    @property
    def n(self) -> int:
        return len(self.primes)

    @property
    def prime_powers(self) -> tuple[int, ...]:
        """``p_i ** m_i`` for each prime, the multipliers of the generators ``t_i``."""
        return tuple(p**m for p, m in self.primes)

    def index_of(self, p: int) -> int:
        for i, (q, _) in enumerate(self.primes):
            if q == p:
                return i
        raise UnsupportedPrimeError(f"{p} is not a prime factor of {self.k}")


def factorize(k: int) -> KFactorization:
    """Trial-division factorization of ``k >= 2``."""
    if not isinstance(k, int) or k < 2:
        raise InvalidModulusError(f"k must be an integer >= 2, got {k!r}")
    primes = []
    rest, p = k, 2
    while p * p <= rest:
        if rest % p == 0:
            m = 0
            while rest % p == 0:
                rest //= p
                m += 1
            primes.append((p, m))
        p += 1
    if rest > 1:
        primes.append((rest, 1))
    return KFactorization(k, tuple(primes))


def full_divisors(fact: KFactorization) -> list[int]:
    out = []
    for mask in product((0, 1), repeat=fact.n):
        out.append(math.prod(q for q, bit in zip(fact.prime_powers, mask) if bit))
    return sorted(out)


def is_full_divisor(l: int, fact: KFactorization) -> bool:
    if l <= 0 or fact.k % l:
        return False
    return all(l % q == 0 for (p, _), q in zip(fact.primes, fact.prime_powers) if l % p == 0)


def _int_valuation(a: int, p: int) -> int:
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def in_zk(q: Fraction, fact: KFactorization) -> bool:
    d = Fraction(q).denominator
    for p, _ in fact.primes:
        while d % p == 0:
            d //= p
    return d == 1


def as_zk(q, fact: KFactorization) -> Fraction:
    """Coerce ``q`` to a Fraction and reject anything outside Z[1/k]."""
    x = Fraction(q)
    if not in_zk(x, fact):
        raise NotInZkError(f"{x} is not in Z[1/{fact.k}]")
    return x


def zk_add(x: Fraction, y: Fraction) -> Fraction:
    return x + y


def zk_mul(x: Fraction, y: Fraction) -> Fraction:
    return x * y


def zk_neg(x: Fraction) -> Fraction:
    return -x


def valuation(x: Fraction, p: int, fact: KFactorization | None = None) -> int | float:
    """p-adic valuation; ``math.inf`` for zero.

    When ``fact`` is given, ``p`` must be one of its primes.
    """
    if fact is not None:
        fact.index_of(p)
    x = Fraction(x)
    if x == 0:
        return math.inf
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


def k_exponent(x: Fraction, fact: KFactorization) -> int:
    """Smallest ``e >= 0`` with ``k**e * x`` an integer."""
    d = Fraction(x).denominator
    e = 0
    for (p, m) in fact.primes:
        v = _int_valuation(d, p)
        e = max(e, -(-v // m))
    return e


def zk_divisors(fact: KFactorization, exp: int) -> list[int]:
    """All divisors of ``k**exp``, i.e. the possible reduced denominators at that exponent."""
    ranges = [[p**j for j in range(m * exp + 1)] for p, m in fact.primes]
    return sorted(math.prod(c) for c in product(*ranges))


def enum_key(x: Fraction, fact: KFactorization):
    """Deterministic enumeration order: exponent, |numerator|, sign, denominator."""
    return (k_exponent(x, fact), abs(x.numerator), x < 0, x.denominator)


def enumerate_zk(fact: KFactorization, num: int, exp: int) -> list[Fraction]:
    """Every x in Z[1/k] with reduced |numerator| <= num and k-exponent <= exp."""
    out = []
    for d in zk_divisors(fact, exp):
        for a in range(-num, num + 1):
            if math.gcd(a, d) == 1 or (a == 0 and d == 1):
                out.append(Fraction(a, d))
    out.sort(key=lambda x: enum_key(x, fact))
    return out


# -- base-k expansions ---------------------------------------------------------


@dataclass(frozen=True)
class BaseKExpansion:
    sign: int  # -1, 0, +1
    int_digits: tuple[int, ...]
    frac_digits: tuple[int, ...]
    k: int

    def __post_init__(self):
        if self.int_digits and self.int_digits[0] == 0:
            raise ValueError("leading zero in integer digits")
        if self.frac_digits and self.frac_digits[-1] == 0:
            raise ValueError("trailing zero in fractional digits")
        if any(not 0 <= d < self.k for d in self.int_digits + self.frac_digits):
            raise ValueError(f"digit out of range for base {self.k}")
        if (self.sign == 0) != (not self.int_digits and not self.frac_digits):
            raise ValueError("sign inconsistent with digits")

    def format(self, delimiter: str = ":") -> str:
        sep = delimiter if self.k > 10 else ""
        head = sep.join(map(str, self.int_digits)) or "0"
        s = head
        if self.frac_digits:
            s += "." + sep.join(map(str, self.frac_digits))
        return ("-" if self.sign < 0 else "") + s

    def __str__(self):
        return self.format()


def to_base_k(x: Fraction, fact: KFactorization) -> BaseKExpansion:
    x = as_zk(x, fact)
    k = fact.k
    if x == 0:
        return BaseKExpansion(0, (), (), k)
    sign = 1 if x > 0 else -1
    x = abs(x)
    s = k_exponent(x, fact)
    scaled = x.numerator * (k**s // x.denominator)
    digits = []
    while scaled:
        scaled, d = divmod(scaled, k)
        digits.append(d)
    digits.reverse()  # most significant first; the last s are fractional
    if len(digits) < s:
        digits = [0] * (s - len(digits)) + digits
    ipart = digits[: len(digits) - s]
    fpart = digits[len(digits) - s:]
    while ipart and ipart[0] == 0:
        ipart.pop(0)
    return BaseKExpansion(sign, tuple(ipart), tuple(fpart), k)


def from_base_k(e: BaseKExpansion, fact: KFactorization | None = None) -> Fraction:
    k = e.k if fact is None else fact.k
    val = 0
    for d in e.int_digits + e.frac_digits:
        val = val * k + d
    return e.sign * Fraction(val, k ** len(e.frac_digits)) if e.sign else Fraction(0)


def parse_base_k(text: str, fact: KFactorization, delimiter: str = ":") -> BaseKExpansion:
    text = text.strip()
    sign = 1
    if text[:1] in "+-":
        sign = -1 if text[0] == "-" else 1
        text = text[1:]
    head, _, tail = text.partition(".")

    def digits(part: str) -> list[int]:
        if not part:
            return []
        if fact.k > 10:
            return [int(t) for t in part.split(delimiter)]
        return [int(c) for c in part]

    ipart, fpart = digits(head), digits(tail)
    while ipart and ipart[0] == 0:
        ipart.pop(0)
    while fpart and fpart[-1] == 0:
        fpart.pop()
    if not ipart and not fpart:
        sign = 0
    return BaseKExpansion(sign, tuple(ipart), tuple(fpart), fact.k)


def parse_zk(text: str, fact: KFactorization) -> Fraction:
    """Accept "a/b", integers, decimals-free rationals, or a base-k string prefixed ``k:``."""
    text = text.strip()
    if text.startswith("k:"):
        return from_base_k(parse_base_k(text[2:], fact), fact)
    return as_zk(Fraction(text), fact)


def format_zk(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def sample_zk(rng, fact: KFactorization, num: int = 10**6, exp: int = 6) -> Fraction:
    """A random element of Z[1/k]; numerator up to ``num``, k-exponent up to ``exp``."""
    den = 1
    for p, m in fact.primes:
        den *= p ** rng.randint(0, m * exp)
    return Fraction(rng.randint(-num, num), den)


def iter_box(n: int, radius: int) -> Iterator[tuple[int, ...]]:
    """Lattice points of ``[-radius, radius]^n`` ordered by sup-norm, then lexicographically."""
    pts = list(product(range(-radius, radius + 1), repeat=n))
    pts.sort(key=lambda z: (max(map(abs, z), default=0), z))
    return iter(pts)


def vec_add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def vec_neg(a: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in a)


def vec_scale(c: int, a: Sequence[int]) -> tuple[int, ...]:
    return tuple(c * x for x in a)
