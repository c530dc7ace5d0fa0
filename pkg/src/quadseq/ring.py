"""Galois ring GR(4,n) arithmetic.

GR(4,n) = Z4[x]/(f) for a basic primitive f of degree n.  Elements are
tuples of n coefficients in {0,1,2,3}, constant term first, always fully
reduced; equality is plain tuple comparison.  A RingContext binds the
parameters (e, m, n = e*m) together with the lifted polynomial, the
Teichmüller table and the discrete-log tables of the residue field, and
is immutable after construction, so it can be shared freely between
workers.

The unit group contains a cyclic subgroup of order 2^n - 1 generated by
beta (the residue class of x); its union with 0 is the Teichmüller set T,
which maps bijectively onto GF(2^n) under coefficient-wise reduction
mod 2.  Every element has a unique decomposition x0 + 2*x1 with x0, x1
in T, which is how the Frobenius and trace maps are evaluated here.
"""

from __future__ import annotations

from .errors import ConfigurationError
from .gf2 import GF2m, default_poly_table, is_primitive, mask_to_coeffs

MAX_DEGREE = 20

RingElement = tuple[int, ...]


def lift_primitive_poly(g_coeffs) -> tuple[int, ...]:
    """Lift a primitive binary polynomial g to a basic primitive f over Z4.

    Uses the Graeffe-style product: f(x^2) := (-1)^n * g(x) * g(-x)
    (mod 4), which is monic for every degree and satisfies f mod 2 = g.

    Raises ConfigurationError if g is not primitive over GF(2).
    """
    g = tuple(int(c) for c in g_coeffs)
    n = len(g) - 1
    if n < 1 or g[n] != 1 or any(c not in (0, 1) for c in g):
        raise ConfigurationError("expected a monic binary coefficient list, constant term first")
    mask = sum(c << i for i, c in enumerate(g))
    if not is_primitive(mask, n):
        raise ConfigurationError(f"polynomial {list(g)} is not primitive over GF(2)")
    # h(x) = g(x) * g(-x) over Z4 has even-degree terms only.
    h = [0] * (2 * n + 1)
    for i, gi in enumerate(g):
        if not gi:
            continue
        for j, gj in enumerate(g):
            if gj:
                sign = -1 if j % 2 else 1
                h[i + j] = (h[i + j] + sign * gi * gj) % 4
    if n % 2:
        h = [(-c) % 4 for c in h]
    if any(h[k] for k in range(1, 2 * n + 1, 2)):
        raise AssertionError("Graeffe product has odd-degree terms")
    f = tuple(h[2 * j] for j in range(n + 1))
    if f[n] != 1 or any((fc - gc) % 2 for fc, gc in zip(f, g)):
        raise AssertionError("lift failed monicity or mod-2 consistency")
    return f


class RingContext:
    """Immutable description of one GR(4,n) instance (n = e*m, e,m >= 2)."""

    def __init__(self, e: int, m: int, g_mask: int | None = None):
        if e < 2 or m < 2:
            raise ConfigurationError(f"need e >= 2 and m >= 2, got e={e}, m={m}")
        n = e * m
        if n > MAX_DEGREE:
            raise ConfigurationError(f"n = {n} exceeds the supported cap {MAX_DEGREE}")
        if g_mask is None:
            table = default_poly_table()
            if n not in table:
                raise ConfigurationError(
                    f"no default primitive polynomial for n={n}; pass one explicitly"
                )
            g_mask = table[n]
        self.e = e
        self.m = m
        self.n = n
        self.g_mask = g_mask
        self.field = GF2m(n, g_mask)
        self.f = lift_primitive_poly(mask_to_coeffs(g_mask, n))

        # x^k mod f for k = n .. 2n-2, used by mul reduction.
        self._xpow: list[RingElement] = []
        cur = list(self.f[:n])
        cur = [(-c) % 4 for c in cur]  # x^n = -(f - x^n)
        self._xpow.append(tuple(cur))
        for _ in range(n - 2):
            top = cur[n - 1]
            cur = [0] + cur[: n - 1]  # multiply by x, dropping the new x^n term
            if top:
                cur = [(c + top * r) % 4 for c, r in zip(cur, self._xpow[0])]
            self._xpow.append(tuple(cur))

        self.zero: RingElement = (0,) * n
        self.one: RingElement = (1,) + (0,) * (n - 1)
        self.beta: RingElement = (0, 1) + (0,) * (n - 2) if n > 1 else (1,)

        # Teichmüller table: enumerate beta^k; this doubles as the order
        # check that makes f basic primitive.
        order = (1 << n) - 1
        teich: list[RingElement | None] = [None] * (1 << n)
        teich[0] = self.zero
        beta_pows: list[RingElement] = []
        cur_el = self.one
        for k in range(order):
            proj = self.project(cur_el)
            if teich[proj] is not None:
                raise ConfigurationError(
                    f"beta has order < 2^{n}-1; {list(self.f)} is not basic primitive"
                )
            teich[proj] = cur_el
            beta_pows.append(cur_el)
            cur_el = self.mul(cur_el, self.beta)
        if cur_el != self.one:
            raise ConfigurationError(f"beta^({order}) != 1 for f = {list(self.f)}")
        self.teich: tuple[RingElement, ...] = tuple(teich)  # indexed by field mask
        self.beta_pows: tuple[RingElement, ...] = tuple(beta_pows)

        # Absolute trace is Z4-linear: tabulate it on the monomial basis.
        self._basis_abs_trace = tuple(
            self._abs_trace_slow(self.monomial(i)) for i in range(n)
        )

    # -- construction helpers ---------------------------------------------

    def monomial(self, i: int) -> RingElement:
        return tuple(1 if j == i else 0 for j in range(self.n))

    def scalar(self, c: int) -> RingElement:
        return (c % 4,) + (0,) * (self.n - 1)

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: RingElement, b: RingElement) -> RingElement:
        return tuple((x + y) % 4 for x, y in zip(a, b))

    def sub(self, a: RingElement, b: RingElement) -> RingElement:
        return tuple((x - y) % 4 for x, y in zip(a, b))

    def neg(self, a: RingElement) -> RingElement:
        return tuple((-x) % 4 for x in a)

    def smul(self, c: int, a: RingElement) -> RingElement:
        return tuple((c * x) % 4 for x in a)

    def mul(self, a: RingElement, b: RingElement) -> RingElement:
        n = self.n
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        out = [c % 4 for c in prod[:n]]
        for k in range(n, 2 * n - 1):
            ck = prod[k] % 4
            if ck:
                red = self._xpow[k - n]
                out = [(o + ck * r) % 4 for o, r in zip(out, red)]
        return tuple(out)

    def pow(self, a: RingElement, k: int) -> RingElement:
        if k < 0:
            raise ValueError("negative powers are not defined for ring elements")
        result, base = self.one, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    # -- projection and Teichmüller structure -------------------------------

    def project(self, a: RingElement) -> int:
        """Coefficient-wise reduction mod 2, as a field bit mask."""
        return sum((c & 1) << i for i, c in enumerate(a))

    def teich_lift(self, mask: int) -> RingElement:
        """The Teichmüller representative projecting onto `mask`."""
        return self.teich[mask]

    def teich_decompose(self, a: RingElement) -> tuple[RingElement, RingElement]:
        """Unique (x0, x1) with a = x0 + 2*x1 and x0, x1 in T."""
        x0 = self.teich[self.project(a)]
        d = self.sub(a, x0)
        half = 0
        for i, c in enumerate(d):
            if c % 2:
                raise AssertionError("decomposition residue is not doubled")
            half |= ((c >> 1) & 1) << i
        return x0, self.teich[half]

    def _teich_pow2(self, t: RingElement, k: int) -> RingElement:
        # 2^k-th power of a Teichmüller element, via the field tables.
        return self.teich[self.field.frobenius(self.project(t), k)]

    def frobenius(self, a: RingElement, d: int | None = None) -> RingElement:
        """Frobenius x0^(2^d) + 2*x1^(2^d); d defaults to e.

        With d = e this generates the automorphism group of GR(4,n) over
        GR(4,e); d = 1 is the absolute Frobenius used for absolute traces.
        """
        if d is None:
            d = self.e
        x0, x1 = self.teich_decompose(a)
        return self.add(self._teich_pow2(x0, d), self.smul(2, self._teich_pow2(x1, d)))

    def trace_to_subring(self, a: RingElement, d: int | None = None) -> RingElement:
        """Frobenius-orbit sum mapping GR(4,n) onto GR(4,d); d defaults to e."""
        if d is None:
            d = self.e
        if d <= 0 or self.n % d:
            raise ConfigurationError(f"GR(4,{d}) is not a subring of GR(4,{self.n})")
        acc, cur = self.zero, a
        for _ in range(self.n // d):
            acc = self.add(acc, cur)
            cur = self.frobenius(cur, d)
        return acc

    def partial_frobenius_sum(self, a: RingElement, d: int) -> RingElement:
        """Sum of the first d absolute-Frobenius iterates of a.

        For a in the subring GR(4,d) this is its absolute trace (a Z4
        scalar); for other inputs the sum is returned unreduced.
        """
        acc, cur = self.zero, a
        for _ in range(d):
            acc = self.add(acc, cur)
            cur = self.frobenius(cur, 1)
        return acc

    def _abs_trace_slow(self, a: RingElement) -> int:
        val = self.partial_frobenius_sum(a, self.n)
        if any(val[1:]):
            raise AssertionError("absolute trace is not scalar")
        return val[0]

    def abs_trace(self, a: RingElement) -> int:
        """Absolute trace GR(4,n) -> Z4 (Frobenius-orbit sum, tabulated)."""
        return sum(c * t for c, t in zip(a, self._basis_abs_trace)) % 4

    def subring_abs_trace(self, a: RingElement, d: int) -> int:
        """Absolute trace of GR(4,d) applied to a member of that subring."""
        if d <= 0 or self.n % d:
            raise ConfigurationError(f"GR(4,{d}) is not a subring of GR(4,{self.n})")
        val = self.partial_frobenius_sum(a, d)
        if any(val[1:]):
            raise ValueError("element does not lie in the requested subring")
        return val[0]

    # -- element serialization ----------------------------------------------

    def element_to_str(self, a: RingElement) -> str:
        return ",".join(str(c) for c in a)

    def parse_element(self, text: str) -> RingElement:
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != self.n:
            raise ValueError(f"expected {self.n} coefficients, got {len(parts)}")
        coeffs = tuple(int(p) % 4 for p in parts)
        return coeffs

    def poly_to_str(self) -> str:
        return ",".join(str(c) for c in self.f)

    def __repr__(self) -> str:
        return f"RingContext(e={self.e}, m={self.m}, n={self.n}, f=[{self.poly_to_str()}])"


def build_ring_context(e: int, m: int, g=None) -> RingContext:
    """Assemble a RingContext from (e, m) and an optional binary modulus.

    `g` may be a bit mask or a constant-first 0/1 coefficient sequence.
    Without it, the built-in table of lexicographically smallest primitive
    polynomials is consulted (overridable via QUADSEQ_POLY_TABLE).
    """
    mask: int | None
    if g is None:
        mask = None
    elif isinstance(g, int):
        mask = g
    else:
        mask = sum(int(c) << i for i, c in enumerate(g))
    return RingContext(e, m, mask)
