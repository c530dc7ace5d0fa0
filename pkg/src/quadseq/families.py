"""Quadriphase sequence families over GR(4,n).

Three families are provided, all built from trace terms of Teichmüller
powers and the quadratic-form function P:

* family L: 2^(n*rho) + 1 sequences of period 2^n - 1; the extra member
  is a doubled binary m-sequence,
* family V: the rho = 1, even-m special case of L,
* family W: 2^n sequences of period 2(2^n - 1), interleaving two phase
  classes (u and v variants differ by +2 at even positions).

Coefficient tuples range over T = G_C ∪ {0} indexed in the fixed order
(0, beta^0, beta^1, ..., beta^(2^n - 2)); member enumeration is row-major
over T^rho, so member indices are reproducible across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .errors import ConfigurationError
from .lincomp import span_formula_l
from .ring import RingContext, RingElement

FAMILY_KINDS = ("L", "V", "W")


# ---------------------------------------------------------------------------
# quadratic-form function P
# ---------------------------------------------------------------------------

def p_function(ring: RingContext, x: RingElement) -> int:
    """P(x) as a Z4 value, total on GR(4,n).

    For m = 2l this is the sum of the absolute traces of x^(2^(e*j)+1)
    for j = 1..l-1 plus the GR(4,le)-trace of x * sigma_1^(le)(x); the
    product form agrees with x^(2^(le)+1) on the Teichmüller set and
    keeps the final term inside GR(4,le) for every x.  For m = 2l+1 the
    sum runs over j = 1..l with no extra term.
    """
    e, m = ring.e, ring.m
    total = 0
    if m % 2 == 0:
        half = m // 2
        for j in range(1, half):
            total += ring.abs_trace(ring.pow(x, (1 << (e * j)) + 1))
        le = e * half
        cofactor = x
        for _ in range(le):
            cofactor = ring.frobenius(cofactor, 1)
        total += ring.subring_abs_trace(ring.mul(x, cofactor), le)
    else:
        half = (m - 1) // 2
        for j in range(1, half + 1):
            total += ring.abs_trace(ring.pow(x, (1 << (e * j)) + 1))
    return total % 4


def p_bar(ring: RingContext, ybar: int) -> int:
    """Reduction of P through projection: the GF(2)-valued form on GF(2^n)."""
    f = ring.field
    e, m = ring.e, ring.m
    acc = 0
    if m % 2 == 0:
        half = m // 2
        for j in range(1, half):
            acc ^= f.trace(f.pow(ybar, (1 << (e * j)) + 1))
        le = e * half
        acc ^= f.trace_within(f.pow(ybar, (1 << le) + 1), le)
    else:
        half = (m - 1) // 2
        for j in range(1, half + 1):
            acc ^= f.trace(f.pow(ybar, (1 << (e * j)) + 1))
    return acc


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def select_lambda(ring: RingContext, lambda_log: int | None = None) -> RingElement:
    """Teichmüller element of the subring GR(4,e) whose projection avoids {0,1}.

    Defaults to beta^((2^n-1)/(2^e-1)), a generator of the order-(2^e - 1)
    Teichmüller subgroup of GR(4,e).  An explicit discrete log may be
    supplied; it must keep the element inside GR(4,e) with projection
    outside {0,1}.
    """
    order = (1 << ring.n) - 1
    step = order // ((1 << ring.e) - 1)
    if lambda_log is None:
        lambda_log = step
    lambda_log %= order
    if lambda_log % step:
        raise ConfigurationError(
            f"lambda_log={lambda_log} leaves the GR(4,{ring.e}) Teichmüller subgroup "
            f"(must be a multiple of {step})"
        )
    if lambda_log == 0:
        raise ConfigurationError("lambda must project outside {0,1}")
    return ring.beta_pows[lambda_log]


class FamilyConfig:
    """Validated parameter bundle for one family instance."""

    def __init__(
        self,
        ring: RingContext,
        kind: str,
        rho: int = 1,
        lambda_log: int | None = None,
    ):
        if kind not in FAMILY_KINDS:
            raise ConfigurationError(f"unknown family kind {kind!r}")
        n = ring.n
        if kind == "L":
            if not 1 <= rho < n // 2:
                raise ConfigurationError(
                    f"family L needs 1 <= rho < floor(n/2) = {n // 2}, got rho={rho}"
                )
        elif kind == "V":
            if rho != 1:
                raise ConfigurationError("family V fixes rho = 1")
            if ring.m % 2:
                raise ConfigurationError("family V needs even m")
        else:  # W
            if rho != 1:
                raise ConfigurationError("family W takes no rho (leave it at 1)")
            if ring.m % 2:
                raise ConfigurationError("family W needs even m")
        self.ring = ring
        self.kind = kind
        self.rho = rho
        self.lam = select_lambda(ring, lambda_log)
        order = (1 << n) - 1
        self.lambda_log = ring.field.log[ring.project(self.lam)]
        self.base_period = order
        self.period = order if kind in ("L", "V") else 2 * order
        self.size = (1 << (n * rho)) + 1 if kind in ("L", "V") else 1 << n
        self._tables: _SeqTables | None = None

    def tables(self) -> "_SeqTables":
        if self._tables is None:
            self._tables = _SeqTables(self)
        return self._tables

    def __repr__(self) -> str:
        return (
            f"FamilyConfig(kind={self.kind}, n={self.ring.n}, e={self.ring.e}, "
            f"m={self.ring.m}, rho={self.rho}, lambda_log={self.lambda_log})"
        )


class _SeqTables:
    """Per-config lookup tables that make member generation O(period)."""

    def __init__(self, config: FamilyConfig):
        ring = config.ring
        f = ring.field
        order = config.base_period
        self.order = order
        self.alog = f.exp
        self.log = f.log
        self.trbit = tuple(f.trace(y) for y in range(f.order))
        self.t4 = tuple(ring.abs_trace(ring.beta_pows[t]) for t in range(order))
        lam_bar = f.exp[config.lambda_log]
        self.pbar = tuple(
            p_bar(ring, f.mul(lam_bar, f.exp[t])) for t in range(order)
        )


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadSequence:
    """One Z4-valued sequence (a single period) plus provenance metadata."""

    values: tuple[int, ...]
    period: int
    family: str
    index: int
    label: str
    coeffs: tuple[int, ...] | None = dc_field(default=None)

    def __post_init__(self):
        if len(self.values) != self.period:
            raise ValueError("sequence length differs from declared period")
        if any(v not in (0, 1, 2, 3) for v in self.values):
            raise ValueError("sequence values must lie in {0,1,2,3}")

    def shifted(self, tau: int) -> tuple[int, ...]:
        tau %= self.period
        return self.values[tau:] + self.values[:tau]


def teich_index_tuple(index: int, n: int, rho: int) -> tuple[int, ...]:
    """Row-major coefficient tuple (T-indices) of the 1-based member index."""
    width = 1 << n
    digits = []
    rem = index - 1
    for _ in range(rho):
        digits.append(rem % width)
        rem //= width
    if rem:
        raise ValueError(f"member index {index} out of range for rho={rho}")
    return tuple(reversed(digits))


def _tindex_field_mask(tables: _SeqTables, tindex: int) -> int:
    return 0 if tindex == 0 else tables.alog[tindex - 1]


def gen_member_L(config: FamilyConfig, index: int) -> QuadSequence:
    """Member `index` (1-based) of family L/V.

    Indices 1..2^(n*rho) carry coefficient tuples in row-major T-order;
    index 2^(n*rho) + 1 is the doubled binary m-sequence row.
    """
    if config.kind not in ("L", "V"):
        raise ConfigurationError("gen_member_L needs an L or V config")
    if not 1 <= index <= config.size:
        raise ValueError(f"member index {index} outside 1..{config.size}")
    tb = config.tables()
    order = tb.order
    if index == config.size:
        values = tuple(2 * tb.trbit[tb.alog[t]] for t in range(order))
        return QuadSequence(values, order, config.kind, index, f"s{index}", None)

    n, rho = config.ring.n, config.rho
    coeffs = teich_index_tuple(index, n, rho)
    lam0_mask = _tindex_field_mask(tb, coeffs[0])
    lam0_log = tb.log[lam0_mask] if lam0_mask else None
    kterms = []
    for k in range(1, rho):
        mask = _tindex_field_mask(tb, coeffs[k])
        if mask:
            kterms.append((tb.log[mask], ((1 << k) + 1) % order))
    values = []
    for t in range(order):
        bits = tb.pbar[t]
        if lam0_log is not None:
            bits ^= tb.trbit[tb.alog[(lam0_log + t) % order]]
        for clog, stride in kterms:
            bits ^= tb.trbit[tb.alog[(clog + t * stride) % order]]
        values.append((tb.t4[t] + 2 * bits) % 4)
    return QuadSequence(tuple(values), order, config.kind, index, f"s{index}", coeffs)


def gen_family_L(config: FamilyConfig) -> list[QuadSequence]:
    """All 2^(n*rho) + 1 members of family L (or V), in index order."""
    return [gen_member_L(config, i) for i in range(1, config.size + 1)]


def build_set_G(ring: RingContext) -> list[RingElement]:
    """The 2^(n-1) Teichmüller elements whose projections avoid S ∩ (S+1).

    Scans discrete logs in ascending order and keeps the first member seen
    of each {a, a+1} pair of GF(2^n), so beta^0 = 1 is always kept and
    every kept element has the smaller log of its pair.
    """
    f = ring.field
    chosen: list[RingElement] = []
    seen_pairs: set[int] = set()
    for k in range(f.order - 1):
        a = f.exp[k]
        pair = min(a, a ^ 1)
        if pair in seen_pairs:
            continue
        seen_pairs.add(pair)
        chosen.append(ring.teich[a])
    if len(chosen) != f.order // 2:
        raise AssertionError("index set G has the wrong size")
    return chosen


def gen_family_W(config: FamilyConfig) -> tuple[list[QuadSequence], list[QuadSequence]]:
    """The u- and v-halves of family W, each of size 2^(n-1).

    Even positions 2*t0 use beta^t0; odd positions use beta^(t0 + h) with
    h = 2^(n-1) (the square root of beta, since 2h = 1 mod 2^n - 1) and
    the index-set element bumped by one.  v differs from u by +2 at even
    positions only.  Flat member indices are u_i -> i, v_i -> 2^(n-1)+i.
    """
    if config.kind != "W":
        raise ConfigurationError("gen_family_W needs a W config")
    ring = config.ring
    tb = config.tables()
    order = tb.order
    half = 1 << (ring.n - 1)
    g_set = build_set_G(ring)
    us: list[QuadSequence] = []
    vs: list[QuadSequence] = []
    for i, eta in enumerate(g_set):
        eta_log = tb.log[ring.project(eta)]
        u_vals = []
        for t0 in range(order):
            even = (tb.t4[t0] + 2 * (tb.trbit[tb.alog[(eta_log + t0) % order]] ^ tb.pbar[t0])) % 4
            s = (t0 + half) % order
            odd_bits = tb.trbit[tb.alog[(eta_log + s) % order]] ^ tb.trbit[tb.alog[s]] ^ tb.pbar[s]
            odd = (tb.t4[s] + 2 * odd_bits) % 4
            u_vals.append(even)
            u_vals.append(odd)
        v_vals = [(v + 2) % 4 if t % 2 == 0 else v for t, v in enumerate(u_vals)]
        us.append(QuadSequence(tuple(u_vals), 2 * order, "W", i, f"u{i}", (i,)))
        vs.append(QuadSequence(tuple(v_vals), 2 * order, "W", half + i, f"v{i}", (i,)))
    return us, vs


def gen_family(config: FamilyConfig) -> list[QuadSequence]:
    """All members of the configured family as a flat list."""
    if config.kind == "W":
        us, vs = gen_family_W(config)
        return us + vs
    return gen_family_L(config)


# ---------------------------------------------------------------------------
# span classification (family L)
# ---------------------------------------------------------------------------

def span_index_sets(e: int, rho: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Partition of {1..rho-1} into non-multiples (A) and multiples (B) of e."""
    a = tuple(k for k in range(1, rho) if k % e)
    b = tuple(k for k in range(1, rho) if k % e == 0)
    return a, b


def classify_span(
    coeffs: tuple[int, ...],
    config: FamilyConfig,
    matching: str = "power",
) -> tuple[int, int, int]:
    """(j, l, span) for a family-L coefficient tuple.

    j counts zero entries at indices not divisible by e; l counts entries
    at multiples of e that hit the span-cancelling value.  That value is
    lambda^(2^k + 1) (`matching="power"`); `matching="plain"` compares
    against lambda itself instead.
    """
    ring = config.ring
    if len(coeffs) != config.rho:
        raise ValueError(f"expected a tuple of {config.rho} T-indices")
    a_set, b_set = span_index_sets(ring.e, config.rho)
    j = sum(1 for k in a_set if coeffs[k] == 0)
    f = ring.field
    lam_bar = f.exp[config.lambda_log]
    l = 0
    for k in b_set:
        if matching == "power":
            target = f.mul(f.frobenius(lam_bar, k), lam_bar)
        elif matching == "plain":
            target = lam_bar
        else:
            raise ValueError(f"unknown matching rule {matching!r}")
        if coeffs[k] == f.log[target] + 1:
            l += 1
    span = span_formula_l(ring.n, ring.e, ring.m, config.rho, j, l)
    return j, l, span


def count_span_class(config: FamilyConfig, j: int, l: int) -> int:
    """Number of family-L members in span class (j, l)."""
    n, e, rho = config.ring.n, config.ring.e, config.rho
    a_size = rho - 1 - (rho - 1) // e
    b_size = (rho - 1) // e
    if not (0 <= j <= a_size and 0 <= l <= b_size):
        raise ValueError(f"(j={j}, l={l}) outside 0..{a_size} x 0..{b_size}")
    return (
        math.comb(a_size, j)
        * math.comb(b_size, l)
        * (1 << n)
        * ((1 << n) - 1) ** (rho - 1 - j - l)
    )


# ---------------------------------------------------------------------------
# cyclic distinctness
# ---------------------------------------------------------------------------

def cyclic_distinctness(seqs: list[QuadSequence]) -> list[tuple[int, int, int]]:
    """Brute-force shift-coincidence scan; empty result means all distinct.

    Returns every (i, j, tau) with seqs[i] equal to seqs[j] shifted by tau,
    for i < j over all tau, plus self-coincidences (i, i, tau != 0).
    Positions index the input list.
    """
    if not seqs:
        return []
    period = seqs[0].period
    if any(s.period != period for s in seqs):
        raise ValueError("all sequences must share one period")
    raw = [bytes(s.values) for s in seqs]
    doubled = [r + r for r in raw]
    hits: list[tuple[int, int, int]] = []
    for i, needle in enumerate(raw):
        for j in range(i, len(raw)):
            hay = doubled[j]
            start = 1 if i == j else 0
            pos = hay.find(needle, start)
            while pos != -1 and pos < period:
                if not (i == j and pos == 0):
                    hits.append((i, j, pos))
                pos = hay.find(needle, pos + 1)
    return hits


# ---------------------------------------------------------------------------
# sequence file format
# ---------------------------------------------------------------------------

def family_header(config: FamilyConfig) -> str:
    ring = config.ring
    return (
        f"# family={config.kind} n={ring.n} e={ring.e} m={ring.m} "
        f"rho={config.rho} lambda_log={config.lambda_log} "
        f"period={config.period} count={config.size}"
    )


def write_family(path: str, config: FamilyConfig, seqs: list[QuadSequence]) -> None:
    """Write sequences in the one-line-per-member text format."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(family_header(config) + "\n")
        for s in seqs:
            fh.write(f"{s.index}:" + ",".join(str(v) for v in s.values) + "\n")


def read_family(path: str) -> tuple[dict, list[tuple[int, tuple[int, ...]]]]:
    """Parse a sequence file back into (header metadata, indexed value rows)."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("# "):
        raise ValueError(f"{path}: missing header line")
    meta: dict = {}
    for token in lines[0][2:].split():
        key, _, val = token.partition("=")
        meta[key] = val if key == "family" else int(val)
    rows: list[tuple[int, tuple[int, ...]]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            idx_text, _, vals_text = line.partition(":")
            idx = int(idx_text)
            values = tuple(int(v) for v in vals_text.split(","))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: malformed sequence line") from exc
        if len(values) != meta.get("period"):
            raise ValueError(f"{path}:{lineno}: expected {meta.get('period')} values")
        if any(v not in (0, 1, 2, 3) for v in values):
            raise ValueError(f"{path}:{lineno}: values must be in 0..3")
        rows.append((idx, values))
    return meta, rows
