"""Exact correlation analysis for quadriphase families.

Correlations are exponential sums sum_t omega^(a(t) - b(t+tau)) with
omega a primitive fourth root of unity, so every value is a Gaussian
integer and is kept exact; floating point enters only when reporting
magnitudes.  Alongside the batch spectrum driver this module carries the
predicted value sets and bounds for the shipped families, and the
brute-force counter for the kernel of the linearized shift equation.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

from .errors import ConfigurationError
from .families import FamilyConfig, QuadSequence
from .gf2 import GF2m
from .ring import RingElement


@dataclass(frozen=True)
class GaussianInt:
    """Exact complex integer re + im*omega with omega^2 = -1."""

    re: int
    im: int

    def __add__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianInt":
        return GaussianInt(-self.re, -self.im)

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def abs2(self) -> int:
        return self.re * self.re + self.im * self.im

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussianInt(0, 0)
_OMEGA_POW = (GaussianInt(1, 0), GaussianInt(0, 1), GaussianInt(-1, 0), GaussianInt(0, -1))


def omega_power(k: int) -> GaussianInt:
    return _OMEGA_POW[k % 4]


def correlate(a: QuadSequence, b: QuadSequence, tau: int) -> GaussianInt:
    """sum_t omega^(a(t) - b(t+tau)) over one shared period."""
    if a.period != b.period:
        raise ValueError(f"period mismatch: {a.period} vs {b.period}")
    period = a.period
    if not 0 <= tau < period:
        raise ValueError(f"shift {tau} outside 0..{period - 1}")
    counts = [0, 0, 0, 0]
    av, bv = a.values, b.values
    for t in range(period):
        counts[(av[t] - bv[(t + tau) % period]) % 4] += 1
    return GaussianInt(counts[0] - counts[2], counts[1] - counts[3])


class SpectrumEntry(NamedTuple):
    i: int
    j: int
    tau: int
    value: GaussianInt

    @property
    def trivial(self) -> bool:
        return self.i == self.j and self.tau == 0


@dataclass
class CorrelationReport:
    """All correlations of a family run, with histogram and peak statistics.

    r_max excludes only the in-phase autocorrelations (i = j, tau = 0);
    the histogram covers every computed entry.  r_max is None for a run
    with no nontrivial entries.
    """

    entries: list[SpectrumEntry]
    histogram: Counter
    labels: dict[int, str]
    period: int
    r_max_sq: int | None

    @property
    def r_max(self) -> float | None:
        return None if self.r_max_sq is None else self.r_max_sq ** 0.5

    def nontrivial(self) -> Iterable[SpectrumEntry]:
        return (e for e in self.entries if not e.trivial)

    def histogram_rows(self) -> list[dict]:
        rows = sorted(self.histogram.items(), key=lambda kv: (kv[0].re, kv[0].im))
        return [{"re": g.re, "im": g.im, "count": c} for g, c in rows]

    def csv_rows(self) -> Iterable[str]:
        yield "i,j,tau,re,im"
        for e in self.entries:
            yield f"{e.i},{e.j},{e.tau},{e.value.re},{e.value.im}"


def _pair_entries(args) -> list[tuple[int, int, int, int, int]]:
    ai, aj, avals, bvals, period = args
    out = []
    for tau in range(period):
        counts = [0, 0, 0, 0]
        for t in range(period):
            counts[(avals[t] - bvals[(t + tau) % period]) % 4] += 1
        out.append((ai, aj, tau, counts[0] - counts[2], counts[1] - counts[3]))
    return out


def full_spectrum(
    family: list[QuadSequence],
    pair_filter: Callable[[QuadSequence, QuadSequence], bool] | None = None,
    jobs: int = 1,
) -> CorrelationReport:
    """Correlations of every ordered pair passing the filter, at all shifts.

    Work is chunked by (i, j) pair; with jobs > 1 the chunks run in a
    process pool and are merged back in pair order, so the output is
    identical to the serial run.
    """
    if not family:
        raise ValueError("family must be nonempty")
    period = family[0].period
    if any(s.period != period for s in family):
        raise ValueError("family has mixed periods")
    pairs = [
        (a, b)
        for a in family
        for b in family
        if pair_filter is None or pair_filter(a, b)
    ]
    tasks = [(a.index, b.index, a.values, b.values, period) for a, b in pairs]
    if jobs > 1 and len(tasks) > 1:
        chunk = max(1, len(tasks) // (4 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_pair_entries, tasks, chunksize=chunk))
    else:
        results = [_pair_entries(t) for t in tasks]
    entries: list[SpectrumEntry] = []
    histogram: Counter = Counter()
    r_max_sq: int | None = None
    for rows in results:
        for i, j, tau, re, im in rows:
            value = GaussianInt(re, im)
            entry = SpectrumEntry(i, j, tau, value)
            entries.append(entry)
            histogram[value] += 1
            if not entry.trivial:
                a2 = value.abs2()
                if r_max_sq is None or a2 > r_max_sq:
                    r_max_sq = a2
    labels = {s.index: s.label for s in family}
    return CorrelationReport(entries, histogram, labels, period, r_max_sq)


def verify_value_set(
    report: CorrelationReport | Iterable[SpectrumEntry],
    allowed: Iterable[GaussianInt],
    exclude_trivial: bool = True,
) -> tuple[bool, list[SpectrumEntry]]:
    """Membership check of every (nontrivial) entry in the allowed set."""
    allowed_set = frozenset(allowed)
    entries = report.entries if isinstance(report, CorrelationReport) else report
    violations = [
        e
        for e in entries
        if not (exclude_trivial and e.trivial) and e.value not in allowed_set
    ]
    return (not violations, violations)


# ---------------------------------------------------------------------------
# predicted value sets and bounds
# ---------------------------------------------------------------------------

def _plus_minus(center: GaussianInt, mag: int) -> set[GaussianInt]:
    return {
        GaussianInt(center.re + mag, center.im),
        GaussianInt(center.re - mag, center.im),
        GaussianInt(center.re, center.im + mag),
        GaussianInt(center.re, center.im - mag),
    }


def family_v_value_set(n: int, e: int) -> frozenset[GaussianInt]:
    """Nontrivial correlation values of family V: -1 shifted by 0 or by
    +-2^(n/2) or +-2^((n+e)/2) along either axis."""
    if n % 2 or (n + e) % 2:
        raise ConfigurationError(
            f"exact value set needs even n and even e (got n={n}, e={e}); "
            "odd-e magnitudes are not Gaussian integers"
        )
    base = GaussianInt(-1, 0)
    values = {base}
    values |= _plus_minus(base, 1 << (n // 2))
    values |= _plus_minus(base, 1 << ((n + e) // 2))
    return frozenset(values)


def family_w_value_sets(n: int, e: int) -> dict[tuple[str, str], frozenset[GaussianInt]]:
    """Predicted value sets of family W by pair class and shift regime.

    Keys are (pair, regime) with pair in {"uu","vv","uv"} and regime in
    {"half", "zero_diag", "zero_off", "odd", "even"}; "half" is the shift
    2^n - 1 and u-v entries cover both orders (the sets are closed under
    conjugation).  Cross-class sets are purely imaginary and include 0,
    which the construction attains whenever the underlying exponential
    sum is real.
    """
    if n % 2 or (n + e) % 2:
        raise ConfigurationError(
            f"exact value sets need even n and even e (got n={n}, e={e})"
        )
    m1 = 1 << (n // 2 + 1)
    m2 = 1 << ((n + e) // 2 + 1)
    uu = frozenset({GaussianInt(-2, 0)} | _plus_minus(GaussianInt(-2, 0), m1) | _plus_minus(GaussianInt(-2, 0), m2))
    vv_odd = frozenset({GaussianInt(2, 0)} | _plus_minus(GaussianInt(2, 0), m1) | _plus_minus(GaussianInt(2, 0), m2))
    uv = frozenset(
        {ZERO, GaussianInt(0, m1), GaussianInt(0, -m1), GaussianInt(0, m2), GaussianInt(0, -m2)}
    )
    period = 2 * ((1 << n) - 1)
    return {
        ("uu", "half"): frozenset({GaussianInt(-2, 0)}),
        ("vv", "half"): frozenset({GaussianInt(2, 0)}),
        ("uv", "half"): frozenset({ZERO}),
        ("uu", "zero_diag"): frozenset({GaussianInt(period, 0)}),
        ("vv", "zero_diag"): frozenset({GaussianInt(period, 0)}),
        ("uu", "zero_off"): frozenset({GaussianInt(-2, 0)}),
        ("vv", "zero_off"): frozenset({GaussianInt(-2, 0)}),
        ("uv", "zero"): frozenset({ZERO}),
        ("uu", "odd"): uu,
        ("vv", "odd"): vv_odd,
        ("uv", "odd"): uv,
        ("uu", "even"): uu,
        ("vv", "even"): uu,
        ("uv", "even"): uv,
    }


def w_regime(period: int, tau: int) -> str:
    """Shift regime of a family-W correlation: half, zero, odd or even."""
    half_shift = period // 2
    if tau == half_shift:
        return "half"
    if tau == 0:
        return "zero"
    return "odd" if tau % 2 else "even"


def w_entry_key(entry: SpectrumEntry, period: int, half: int) -> tuple[str, str]:
    """(pair class, regime) lookup key of a family-W spectrum entry.

    Assumes the flat index convention of gen_family_W: u members occupy
    indices 0..half-1, v members half..2*half-1.
    """
    a = "u" if entry.i < half else "v"
    b = "u" if entry.j < half else "v"
    pc = a + b if a == b else "uv"
    regime = w_regime(period, entry.tau)
    if regime == "zero":
        if pc == "uv":
            return (pc, "zero")
        return (pc, "zero_diag" if entry.i == entry.j else "zero_off")
    return (pc, regime)


def w_value_violations(report: CorrelationReport, n: int, e: int, half: int) -> list[dict]:
    """Nontrivial family-W entries outside their class/regime value set."""
    sets = family_w_value_sets(n, e)
    out = []
    for entry in report.nontrivial():
        key = w_entry_key(entry, report.period, half)
        if entry.value not in sets[key]:
            out.append(
                {"i": entry.i, "j": entry.j, "tau": entry.tau,
                 "class": key[0], "regime": key[1],
                 "re": entry.value.re, "im": entry.value.im}
            )
    return out


def rmax_bound(n: int, e: int, rho: int) -> float:
    """Exclusive upper bound on the maximum correlation magnitude of
    family L: 1 + 2^((n + 2(rho-1) + 2e)/2)."""
    if rho < 1 or e < 2:
        raise ValueError(f"need rho >= 1 and e >= 2, got rho={rho}, e={e}")
    return 1.0 + 2.0 ** ((n + 2 * (rho - 1) + 2 * e) / 2)


def bound_sq_pair(n: int, e: int, rho: int) -> int:
    """Exact square of the |R+1| bound for two coefficient-tuple members."""
    return 1 << (n + 2 * (rho - 1) + 2 * e)


def bound_sq_mixed(n: int, e: int, rho: int) -> int:
    """Exact square of the |R+1| bound against the m-sequence row."""
    return 1 << (n + 2 * (rho - 1) + e)


def bound_sq_inphase(n: int, rho: int) -> int:
    """Exact square of the |R+1| bound at shift zero (distinct members)."""
    return 1 << (n + 2 * (rho - 1))


# ---------------------------------------------------------------------------
# kernel counting for the linearized shift equation
# ---------------------------------------------------------------------------

def count_L_kernel(
    field: GF2m,
    e: int,
    delta: int,
    lam: int,
    etas: tuple[int, ...] = (),
    interpretation: str = "literal",
) -> int:
    """Brute-force count of z in GF(2^n) with

        delta*tr(delta*z) + tr(z) + ((lam^2+1)(delta^2+1)/lam^2) z
          + (1/lam^2) * sum_k (eta_k^(-2^k) z^(-2^k) + eta_k z^(2^k)) = 0,

    tr being the trace onto GF(2^e).  The inverse powers are read either
    with field inverses on z != 0 (`literal`, z = 0 checked against the
    product form which vanishes there) or as the inverse-Frobenius powers
    z^(2^(n-k)) (`linearized`, the reading that keeps the map linear).
    """
    if interpretation not in ("literal", "linearized"):
        raise ValueError(f"unknown interpretation {interpretation!r}")
    if delta == 0:
        raise ValueError("delta must be nonzero")
    if lam in (0, 1):
        raise ValueError("lambda projection must avoid {0,1}")
    if not field.in_subfield(lam, e):
        raise ValueError("lambda projection must lie in GF(2^e)")
    if any(eta == 0 for eta in etas):
        raise ValueError("eta coefficients must be nonzero")
    n = field.n
    order = field.order - 1
    lam2 = field.mul(lam, lam)
    inv_lam2 = field.inv(lam2)
    zcoef = field.div(
        field.mul(field.add(lam2, 1), field.add(field.mul(delta, delta), 1)), lam2
    )
    count = 0
    for z in field.elements():
        val = field.mul(delta, field.trace_to_subfield(field.mul(delta, z), e))
        val ^= field.trace_to_subfield(z, e)
        val ^= field.mul(zcoef, z)
        eta_part = 0
        for k, eta in enumerate(etas, start=1):
            ez = field.mul(eta, z)
            if interpretation == "linearized":
                eta_part ^= field.frobenius(ez, n - k)
            elif z != 0:
                eta_part ^= field.pow(ez, (-(1 << k)) % order)
            # literal reading at z = 0: the pre-inverse product form vanishes
            eta_part ^= field.mul(eta, field.frobenius(z, k))
        val ^= field.mul(inv_lam2, eta_part)
        if val == 0:
            count += 1
    return count


def kernel_condition(field: GF2m, e: int, delta: int, lam: int) -> bool:
    """Whether tr(1/(1+delta)) equals (lam^2+1)/lam^2 (needs delta != 1).

    For rho = 1 this marks exactly the shifts whose kernel has 2^e
    elements instead of one.
    """
    if delta in (0, 1):
        raise ValueError("condition requires delta outside {0,1}")
    lam2 = field.mul(lam, lam)
    target = field.div(field.add(lam2, 1), lam2)
    return field.trace_to_subfield(field.inv(delta ^ 1), e) == target


# ---------------------------------------------------------------------------
# diagnostic exponential sum for family W
# ---------------------------------------------------------------------------

def varsigma(
    config: FamilyConfig,
    gamma1: RingElement,
    gamma2: RingElement,
    delta: RingElement,
) -> GaussianInt:
    """sum over x in G_C of omega^(Tr[(1+2*gamma1 - (1+2*gamma2)delta) x]
    + 2(P(lambda x) + P(lambda delta x))).

    Only the projections of gamma1/gamma2 enter (they appear doubled), so
    arbitrary ring elements are accepted; delta must lie in G_C.  Family-W
    correlations decompose into signed sums of two of these values: with
    delta = beta^(tau0 + 2^(n-1)) at odd shifts 2*tau0 + 1,

        R(u_i, u_j) = vs(eta_i, eta_j + 1) + vs(eta_i + 1, eta_j)
        R(u_i, v_j) = vs(eta_i, eta_j + 1) - vs(eta_i + 1, eta_j)

    and with delta = beta^tau0 at even shifts 2*tau0,

        R(u_i, u_j) = vs(eta_i, eta_j) + vs(eta_i + 1, eta_j + 1)
        R(u_i, v_j) = -vs(eta_i, eta_j) + vs(eta_i + 1, eta_j + 1).
    """
    ring = config.ring
    f = ring.field
    dmask = ring.project(delta)
    if dmask == 0 or ring.teich[dmask] != delta:
        raise ValueError("delta must be a nonzero Teichmüller element")
    dlog = f.log[dmask]
    tb = config.tables()
    order = tb.order
    g1, g2 = ring.project(gamma1), ring.project(gamma2)
    re = im = 0
    for t in range(order):
        s = (t + dlog) % order
        bits = tb.pbar[t] ^ tb.pbar[s]
        if g1:
            bits ^= tb.trbit[f.mul(g1, f.exp[t])]
        if g2:
            bits ^= tb.trbit[f.mul(g2, f.exp[s])]
        k = (tb.t4[t] - tb.t4[s] + 2 * bits) % 4
        if k == 0:
            re += 1
        elif k == 1:
            im += 1
        elif k == 2:
            re -= 1
        else:
            im -= 1
    return GaussianInt(re, im)
