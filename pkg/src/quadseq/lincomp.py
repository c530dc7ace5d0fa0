"""Shortest-LFSR synthesis over Z4 and closed-form span evaluators.

The synthesis oracle is deliberately structure-free: for a candidate
register length L it decides solvability of the Toeplitz system
s[k] + sum_i c_i s[k-i] = 0 (mod 4) exactly, and locates the minimal L by
a galloping search (solvability is monotone in L, since a shorter valid
register padded with a zero tap stays valid).  The Z4 systems are solved
by unit-pivot elimination followed by a GF(2) solve of the residual
even rows, which is complete over Z4 -- no heuristics, no lifting gaps.

Periodic complexity runs the oracle on two periods and confirms on
three, keeping it independent of the trace-term bookkeeping it is used
to check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StabilityError


def _solve_gf2(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Particular solution of a x = b over GF(2), or None (free vars -> 0)."""
    rows, cols = a.shape
    m = np.concatenate([a % 2, (b % 2).reshape(-1, 1)], axis=1).astype(np.int8)
    piv: list[tuple[int, int]] = []
    r = 0
    for c in range(cols):
        hit = np.nonzero(m[r:, c])[0]
        if hit.size == 0:
            continue
        i = r + hit[0]
        if i != r:
            m[[r, i]] = m[[i, r]]
        sel = np.nonzero(m[:, c])[0]
        sel = sel[sel != r]
        m[sel] ^= m[r]
        piv.append((r, c))
        r += 1
        if r == rows:
            break
    if np.any(m[r:, -1]):
        return None
    x = np.zeros(cols, dtype=np.int8)
    for pr, pc in piv:
        x[pc] = m[pr, -1]
    return x


def solve_mod4(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Particular solution of a x = b over Z4, or None if unsolvable.

    Phase 1 eliminates with odd (unit) pivots, fully clearing each pivot
    column; the rows left without pivots then have even coefficients
    everywhere, so phase 2 halves them into a GF(2) system over the free
    columns.  Together the phases decide solvability exactly.
    """
    a = np.asarray(a, dtype=np.int64) % 4
    b = np.asarray(b, dtype=np.int64) % 4
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return np.zeros(cols, dtype=np.int64) if not np.any(b % 4) else None
    m = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    piv: list[tuple[int, int]] = []
    r = 0
    for c in range(cols):
        odd = np.nonzero(m[r:, c] % 2 == 1)[0]
        if odd.size == 0:
            continue
        i = r + odd[0]
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * m[r, c]) % 4  # 1 and 3 are self-inverse mod 4
        factors = m[:, c].copy()
        factors[r] = 0
        m = (m - np.outer(factors, m[r])) % 4
        piv.append((r, c))
        r += 1
        if r == rows:
            break
    pivot_cols = {c for _, c in piv}
    free_cols = [c for c in range(cols) if c not in pivot_cols]
    residual = m[r:]
    if np.any(residual % 2):
        if np.any(residual[:, :-1] % 2):
            raise AssertionError("residual rows kept an odd coefficient")
        return None  # even left side cannot produce an odd right side
    x = np.zeros(cols, dtype=np.int64)
    if residual.shape[0]:
        half = (residual // 2) % 2
        if free_cols:
            sol2 = _solve_gf2(half[:, free_cols], half[:, -1])
            if sol2 is None:
                return None
            for c, v in zip(free_cols, sol2):
                x[c] = int(v)
        elif np.any(half[:, -1]):
            return None
    for pr, pc in piv:
        tail = int(m[pr, :-1] @ x) - int(m[pr, pc]) * int(x[pc])
        x[pc] = (int(m[pr, -1]) - tail) % 4
    if np.any((a @ x - b) % 4):
        raise AssertionError("solver produced a non-solution")
    return x % 4


@dataclass(frozen=True)
class LfsrResult:
    """Minimal register for a Z4 prefix.

    `connection` is the taps-plus-one vector [1, c1, ..., cL] with the
    register length L = `complexity`; the trailing tap may be zero when
    the length, not the polynomial degree, is what is minimal.
    `stabilized` reports agreement between the two- and three-period
    measurements for periodic inputs (single-shot synthesis sets it True).
    """

    complexity: int
    connection: tuple[int, ...]
    stabilized: bool = True


def _connection_for(seq: list[int], length: int) -> np.ndarray | None:
    n = len(seq)
    if length == 0:
        return np.zeros(0, dtype=np.int64) if not any(v % 4 for v in seq) else None
    rows = n - length
    if rows <= 0:
        return np.zeros(length, dtype=np.int64)
    a = np.empty((rows, length), dtype=np.int64)
    b = np.empty(rows, dtype=np.int64)
    for k in range(length, n):
        a[k - length] = [seq[k - i] for i in range(1, length + 1)]
        b[k - length] = (-seq[k]) % 4
    return solve_mod4(a, b)


def lfsr_synthesize(prefix) -> LfsrResult:
    """Shortest LFSR over Z4 reproducing the whole prefix.

    Galloping search on the register length, then a downward binary
    search; the returned taps are re-run against the prefix before the
    result is handed back.
    """
    seq = [int(v) % 4 for v in prefix]
    if not seq:
        raise ValueError("prefix must be nonempty")
    n = len(seq)

    solutions: dict[int, np.ndarray | None] = {}

    def feasible(length: int) -> bool:
        if length not in solutions:
            solutions[length] = _connection_for(seq, length)
        return solutions[length] is not None

    if feasible(0):
        hi = 0
    else:
        lo, hi = 0, 1
        while not feasible(hi):
            lo = hi
            if hi >= n:
                raise AssertionError("a full-length register is always feasible")
            hi = min(2 * hi, n)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if feasible(mid):
                hi = mid
            else:
                lo = mid

    taps = solutions[hi]
    connection = (1,) + tuple(int(t) for t in taps)
    _verify_reproduces(seq, connection)
    return LfsrResult(complexity=hi, connection=connection)


def _verify_reproduces(seq: list[int], connection: tuple[int, ...]) -> None:
    length = len(connection) - 1
    for k in range(length, len(seq)):
        acc = seq[k]
        for i in range(1, length + 1):
            acc += connection[i] * seq[k - i]
        if acc % 4:
            raise AssertionError("synthesized register fails to reproduce the prefix")


def linear_complexity_periodic(values, period: int | None = None) -> LfsrResult:
    """Complexity of a periodic Z4 sequence via 2-period + 3-period runs.

    Accepts a QuadSequence-like object (with .values/.period) or a raw
    value sequence plus explicit period.  Raises StabilityError when the
    two measurements disagree, which signals a malformed input or an
    implementation bug rather than a recoverable condition.
    """
    if period is None:
        period = values.period
        values = values.values
    vals = [int(v) % 4 for v in values]
    if len(vals) != period:
        raise ValueError("need exactly one period of values")
    two = lfsr_synthesize(vals * 2)
    three = lfsr_synthesize(vals * 3)
    stable = two.complexity == three.complexity and two.connection == three.connection
    if not stable:
        raise StabilityError(
            f"complexity did not stabilize: {two.complexity} on 2 periods, "
            f"{three.complexity} on 3"
        )
    return LfsrResult(three.complexity, three.connection, stabilized=True)


# ---------------------------------------------------------------------------
# closed-form spans
# ---------------------------------------------------------------------------

def span_formula_w(n: int, e: int, variant: str) -> int:
    """Span of family-W members: n(n+e)/(2e) for u, plus 2 for v."""
    if e <= 0 or n % e or (n // e) % 2:
        raise ValueError(f"need e | n with n/e even, got n={n}, e={e}")
    num = n * (n + e)
    if num % (2 * e):
        raise ValueError(f"span formula is not integral for n={n}, e={e}")
    base = num // (2 * e)
    if variant == "u":
        return base
    if variant == "v":
        return base + 2
    raise ValueError(f"variant must be 'u' or 'v', got {variant!r}")


def span_formula_l(n: int, e: int, m: int, rho: int, j: int, l: int) -> int:
    """Span of a family-L member in class (j, l), as an exact integer."""
    a_size = rho - 1 - (rho - 1) // e
    b_size = (rho - 1) // e
    if not (0 <= j <= a_size and 0 <= l <= b_size):
        raise ValueError(f"(j={j}, l={l}) outside 0..{a_size} x 0..{b_size}")
    if (n * (m - 1)) % 2:
        raise ValueError(f"n(m-1) must be even, got n={n}, m={m}")
    return n * (m - 1) // 2 + n * (rho - (rho - 1) // e - j - l)
