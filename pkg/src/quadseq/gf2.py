"""Binary finite field GF(2^n) arithmetic with log/antilog tables.

Field elements are plain ints: bit i holds the coefficient of x^i of the
residue polynomial, so 0 and 1 are the additive and multiplicative
identities.  All tables are built once per field instance; n is capped at
20, which keeps the 2^n-sized tables cheap.
"""

from __future__ import annotations

import os

from .errors import ConfigurationError

MAX_DEGREE = 20

# Lexicographically smallest primitive polynomial of each degree, as a bit
# mask (bit i = coefficient of x^i).  Regenerated by brute-force search in
# the test suite for the lower degrees.
PRIMITIVE_POLY_MASKS: dict[int, int] = {
    2: 7,
    3: 11,
    4: 19,
    5: 37,
    6: 67,
    7: 131,
    8: 285,
    9: 529,
    10: 1033,
    11: 2053,
    12: 4179,
    13: 8219,
    14: 16427,
    15: 32771,
    16: 65581,
}

POLY_TABLE_ENV = "QUADSEQ_POLY_TABLE"


def coeffs_to_mask(coeffs) -> int:
    """Pack a constant-first 0/1 coefficient list into a bit mask."""
    mask = 0
    for i, c in enumerate(coeffs):
        if c not in (0, 1):
            raise ValueError(f"binary polynomial coefficient out of range: {c}")
        mask |= c << i
    return mask


def mask_to_coeffs(mask: int, degree: int) -> tuple[int, ...]:
    """Unpack a bit mask into a constant-first coefficient tuple."""
    return tuple((mask >> i) & 1 for i in range(degree + 1))


def parse_poly_table(text: str) -> dict[int, int]:
    """Parse a polynomial table override file.

    One polynomial per line, `n: c0,c1,...,cn` with binary coefficients,
    constant term first.  Blank lines and `#` comments are ignored.
    """
    table: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            left, right = line.split(":", 1)
            n = int(left)
            coeffs = [int(c) for c in right.split(",")]
        except ValueError as exc:
            raise ConfigurationError(f"polynomial table line {lineno}: {raw!r}") from exc
        if len(coeffs) != n + 1 or coeffs[n] != 1:
            raise ConfigurationError(
                f"polynomial table line {lineno}: need monic degree-{n} polynomial"
            )
        table[n] = coeffs_to_mask(coeffs)
    return table


def default_poly_table() -> dict[int, int]:
    """Built-in primitive polynomial table, with optional file override.

    The environment variable QUADSEQ_POLY_TABLE may name a file whose
    entries replace or extend the built-in table.
    """
    table = dict(PRIMITIVE_POLY_MASKS)
    path = os.environ.get(POLY_TABLE_ENV)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                table.update(parse_poly_table(fh.read()))
        except OSError as exc:
            raise ConfigurationError(f"cannot read polynomial table {path!r}: {exc}") from exc
    return table


def _factorize(m: int) -> list[int]:
    primes = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            primes.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.append(m)
    return primes


def _mulmod(a: int, b: int, poly: int, n: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> n) & 1:
            a ^= poly
    return r


def is_primitive(poly: int, n: int) -> bool:
    """Whether x generates the full multiplicative group mod (poly, 2)."""
    if poly >> n != 1 or not poly & 1:
        return False
    order = (1 << n) - 1

    def powx(exp: int) -> int:
        result, base = 1, 2
        while exp:
            if exp & 1:
                result = _mulmod(result, base, poly, n)
            base = _mulmod(base, base, poly, n)
            exp >>= 1
        return result

    if powx(order) != 1:
        return False
    return all(powx(order // q) != 1 for q in _factorize(order))


class GF2m:
    """GF(2^n) defined by a primitive polynomial, with exp/log tables."""

    def __init__(self, n: int, poly: int | None = None):
        if not 2 <= n <= MAX_DEGREE:
            raise ConfigurationError(f"field degree {n} outside supported range 2..{MAX_DEGREE}")
        if poly is None:
            table = default_poly_table()
            if n not in table:
                raise ConfigurationError(
                    f"no default primitive polynomial for degree {n}; supply one explicitly"
                )
            poly = table[n]
        if poly >> n != 1:
            raise ConfigurationError(f"modulus {poly:#x} is not monic of degree {n}")
        self.n = n
        self.poly = poly
        self.order = 1 << n
        size = self.order - 1
        exp = [0] * size
        log = [0] * self.order
        val = 1
        for k in range(size):
            exp[k] = val
            log[val] = k
            val = _mulmod(val, 2, poly, n)
            if val == 1 and k != size - 1:
                raise ConfigurationError(f"modulus {poly:#x} is not primitive over GF(2)")
        if val != 1:
            raise ConfigurationError(f"modulus {poly:#x} is not primitive over GF(2)")
        self.exp = exp
        self.log = log
        # Absolute trace is GF(2)-linear; fold it into a single mask so
        # tr(y) is a popcount parity.
        mask = 0
        for i in range(n):
            if self._trace_slow(1 << i):
                mask |= 1 << i
        self.trace_mask = mask

    # -- basic arithmetic ------------------------------------------------

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^n)")
        return self.exp[(-self.log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0 if k else 1
        return self.exp[(self.log[a] * k) % (self.order - 1)]

    def frobenius(self, a: int, k: int = 1) -> int:
        """a^(2^k); k may be any integer (negative = inverse Frobenius)."""
        if a == 0:
            return 0
        return self.exp[(self.log[a] << (k % self.n)) % (self.order - 1)]

    # -- traces ----------------------------------------------------------

    def _trace_slow(self, a: int) -> int:
        acc, cur = 0, a
        for _ in range(self.n):
            acc ^= cur
            cur = _mulmod(cur, cur, self.poly, self.n)
        if acc not in (0, 1):
            raise AssertionError("absolute trace escaped GF(2)")
        return acc

    def trace(self, a: int) -> int:
        """Absolute trace to GF(2), as 0/1."""
        return (a & self.trace_mask).bit_count() & 1

    def trace_to_subfield(self, a: int, e: int) -> int:
        """Relative trace onto GF(2^e) (requires e | n)."""
        if e <= 0 or self.n % e:
            raise ConfigurationError(f"trace target GF(2^{e}) is not a subfield of GF(2^{self.n})")
        acc, cur = 0, a
        for _ in range(self.n // e):
            acc ^= cur
            cur = self.frobenius(cur, e)
        return acc

    def trace_within(self, a: int, d: int) -> int:
        """Absolute trace of the subfield GF(2^d), for a already in it."""
        if d <= 0 or self.n % d:
            raise ConfigurationError(f"GF(2^{d}) is not a subfield of GF(2^{self.n})")
        if self.frobenius(a, d) != a:
            raise ValueError(f"element {a:#x} does not lie in GF(2^{d})")
        acc, cur = 0, a
        for _ in range(d):
            acc ^= cur
            cur = self.frobenius(cur, 1)
        if acc not in (0, 1):
            raise AssertionError("subfield trace escaped GF(2)")
        return acc

    def in_subfield(self, a: int, d: int) -> bool:
        """Whether a lies in the subfield GF(2^d) (requires d | n)."""
        if d <= 0 or self.n % d:
            raise ConfigurationError(f"GF(2^{d}) is not a subfield of GF(2^{self.n})")
        return d == self.n or self.frobenius(a, d) == a

    def elements(self) -> range:
        return range(self.order)

    def nonzero(self) -> range:
        return range(1, self.order)


def cyclotomic_coset(v: int, modulus: int) -> tuple[int, ...]:
    """Orbit of v under multiplication by 2 modulo `modulus`, sorted.

    The orbit size is the span contribution of a trace term with
    decimation exponent v; len() of the result gives the coset size.
    """
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if not 0 <= v < modulus:
        raise ValueError(f"value {v} outside [0, {modulus})")
    orbit = {v}
    cur = (v * 2) % modulus
    while cur != v:
        orbit.add(cur)
        cur = (cur * 2) % modulus
    return tuple(sorted(orbit))
