"""Verification suites shared by the CLI runner and the test suite.

Each suite builds the objects it audits from scratch, runs an exhaustive
or seeded-sample check, and returns a plain dict:

    {"suite": str, "passed": bool, "params": {...}, "checked": int,
     "violations": [...], "notes": [...], "elapsed": float}

Violations are truncated to a handful of witnesses; `checked` always
counts the full run.  Sampled suites embed their seed in `params` so a
report is reproducible from its own metadata.
"""

from __future__ import annotations

import itertools
import random
import time
from collections import Counter

from . import analysis, families, lincomp
from .families import FamilyConfig
from .ring import RingContext, build_ring_context

SUITE_NAMES = (
    "identity",
    "values-v",
    "values-w",
    "distinctness",
    "span-w",
    "span-l",
    "kernel",
    "bounds",
)

MAX_WITNESSES = 10


def _result(suite: str, params: dict, checked: int, violations: list, notes: list, t0: float) -> dict:
    return {
        "suite": suite,
        "passed": not violations,
        "params": params,
        "checked": checked,
        "violations": violations[:MAX_WITNESSES],
        "violation_count": len(violations),
        "notes": notes,
        "elapsed": round(time.time() - t0, 3),
    }


def _ring(e: int, m: int) -> RingContext:
    return build_ring_context(e, m)


# ---------------------------------------------------------------------------

def run_identity_suite(e: int = 2, m: int = 2, pairs: int | None = None, seed: int = 0) -> dict:
    """2P(x) + 2P(y) + 2P(x+y) == 2Tr[y (x + Tr_rel(x))] over GR(4,n) pairs.

    Exhaustive when the pair count is at most ~2^16 or `pairs` is None at
    n = 4; larger rings are sampled with the given seed.
    """
    t0 = time.time()
    ring = _ring(e, m)
    n = ring.n
    elems = list(itertools.product(range(4), repeat=n))
    p_tab = {a: families.p_function(ring, a) for a in elems}
    w_tab = {a: ring.add(a, ring.trace_to_subring(a)) for a in elems}

    def check(x, y) -> bool:
        lhs = 2 * (p_tab[x] + p_tab[y] + p_tab[ring.add(x, y)]) % 4
        rhs = 2 * ring.abs_trace(ring.mul(y, w_tab[x])) % 4
        return lhs == rhs

    violations: list = []
    notes: list = []
    if pairs is None and len(elems) ** 2 <= 1 << 17:
        checked = 0
        for x in elems:
            for y in elems:
                checked += 1
                if not check(x, y):
                    violations.append({"x": list(x), "y": list(y)})
        notes.append(f"exhaustive over all {checked} pairs of GR(4,{n})")
    else:
        count = pairs or 100_000
        rng = random.Random(seed)
        checked = 0
        for _ in range(count):
            x = elems[rng.randrange(len(elems))]
            y = elems[rng.randrange(len(elems))]
            checked += 1
            if not check(x, y):
                violations.append({"x": list(x), "y": list(y)})
        notes.append(f"sampled {checked} pairs of GR(4,{n})")
    params = {"e": e, "m": m, "n": n, "pairs": pairs, "seed": seed}
    return _result("identity", params, checked, violations, notes, t0)


# ---------------------------------------------------------------------------

def run_values_v_suite(e: int = 2, m: int = 2, lambda_log: int | None = None, jobs: int = 1) -> dict:
    """Every nontrivial family-V correlation lies in the predicted set."""
    t0 = time.time()
    ring = _ring(e, m)
    config = FamilyConfig(ring, "V", lambda_log=lambda_log)
    fam = families.gen_family_L(config)
    report = analysis.full_spectrum(fam, jobs=jobs)
    allowed = analysis.family_v_value_set(ring.n, ring.e)
    passed, raw = analysis.verify_value_set(report, allowed)
    violations = [
        {"i": v.i, "j": v.j, "tau": v.tau, "value": str(v.value)} for v in raw
    ]
    checked = sum(1 for _ in report.nontrivial())
    notes = [
        f"r_max = {report.r_max:.4f}" if report.r_max is not None else "r_max undefined",
        "histogram: "
        + ", ".join(
            f"({analysis.GaussianInt(row['re'], row['im'])}) x{row['count']}"
            for row in report.histogram_rows()
        ),
    ]
    params = {
        "e": e, "m": m, "n": ring.n, "rho": 1,
        "lambda_log": config.lambda_log, "family_size": len(fam),
    }
    return _result("values-v", params, checked, violations, notes, t0)


def run_values_w_suite(e: int = 2, m: int = 2, lambda_log: int | None = None, jobs: int = 1) -> dict:
    """Family-W correlations match the per-class, per-regime value sets,
    including the exact half-period and zero-shift values."""
    t0 = time.time()
    ring = _ring(e, m)
    config = FamilyConfig(ring, "W", lambda_log=lambda_log)
    us, vs = families.gen_family_W(config)
    fam = us + vs
    half = len(us)
    report = analysis.full_spectrum(fam, jobs=jobs)
    violations = analysis.w_value_violations(report, ring.n, ring.e, half)
    checked = 0
    seen_regimes: Counter = Counter()
    for entry in report.nontrivial():
        checked += 1
        seen_regimes[analysis.w_entry_key(entry, report.period, half)] += 1
    notes = [f"entries by class/regime: {dict(sorted(seen_regimes.items()))}"]
    params = {
        "e": e, "m": m, "n": ring.n,
        "lambda_log": config.lambda_log, "family_size": len(fam),
    }
    return _result("values-w", params, checked, violations, notes, t0)


# ---------------------------------------------------------------------------

def run_distinctness_suite(cases=None) -> dict:
    """Cyclic distinctness, brute force over every pair and shift."""
    t0 = time.time()
    if cases is None:
        cases = [("V", 2, 2, 1), ("L", 2, 3, 1), ("W", 2, 2, 1)]
    violations: list = []
    notes: list = []
    checked = 0
    for kind, e, m, rho in cases:
        ring = _ring(e, m)
        config = FamilyConfig(ring, kind, rho=rho)
        fam = families.gen_family(config)
        hits = families.cyclic_distinctness(fam)
        pairs = len(fam) * (len(fam) + 1) // 2
        checked += pairs
        notes.append(f"{kind}(e={e},m={m},rho={rho}): {len(fam)} members, {pairs} pairs scanned")
        for i, j, tau in hits:
            violations.append({"family": kind, "e": e, "m": m, "rho": rho,
                               "i": i, "j": j, "tau": tau})
    params = {"cases": [list(c) for c in cases]}
    return _result("distinctness", params, checked, violations, notes, t0)


# ---------------------------------------------------------------------------

def run_span_w_suite(e: int = 2, m: int = 2, lambda_log: int | None = None) -> dict:
    """Measured complexity of every family-W member equals the closed form."""
    t0 = time.time()
    ring = _ring(e, m)
    config = FamilyConfig(ring, "W", lambda_log=lambda_log)
    us, vs = families.gen_family_W(config)
    violations: list = []
    checked = 0
    for variant, members in (("u", us), ("v", vs)):
        expected = lincomp.span_formula_w(ring.n, ring.e, variant)
        for s in members:
            measured = lincomp.linear_complexity_periodic(s).complexity
            checked += 1
            if measured != expected:
                violations.append(
                    {"label": s.label, "measured": measured, "expected": expected}
                )
    notes = [
        f"u span {lincomp.span_formula_w(ring.n, ring.e, 'u')}, "
        f"v span {lincomp.span_formula_w(ring.n, ring.e, 'v')}, {checked} members measured"
    ]
    params = {"e": e, "m": m, "n": ring.n, "lambda_log": config.lambda_log}
    return _result("span-w", params, checked, violations, notes, t0)


def sample_class_member(config: FamilyConfig, j: int, l: int, rng: random.Random,
                        matching: str = "power") -> int:
    """Random 1-based member index of family L lying in span class (j, l)."""
    ring = config.ring
    f = ring.field
    a_set, b_set = families.span_index_sets(ring.e, config.rho)
    if not (0 <= j <= len(a_set) and 0 <= l <= len(b_set)):
        raise ValueError(f"no class (j={j}, l={l}) for this configuration")
    width = 1 << ring.n
    lam_bar = f.exp[config.lambda_log]
    digits = [0] * config.rho
    digits[0] = rng.randrange(width)
    zero_at = set(rng.sample(a_set, j)) if a_set else set()
    match_at = set(rng.sample(b_set, l)) if b_set else set()
    for k in a_set:
        digits[k] = 0 if k in zero_at else rng.randrange(1, width)
    for k in b_set:
        if matching == "power":
            target = f.mul(f.frobenius(lam_bar, k), lam_bar)
        else:
            target = lam_bar
        t_idx = f.log[target] + 1
        if k in match_at:
            digits[k] = t_idx
        else:
            while True:
                cand = rng.randrange(width)
                if cand != t_idx:
                    digits[k] = cand
                    break
    index = 0
    for d in digits:
        index = index * width + d
    return index + 1


def run_span_l_suite(
    e: int = 2,
    m: int = 3,
    rho: int = 2,
    per_class: int = 100,
    seed: int = 20240810,
    lambda_log: int | None = None,
    matching: str = "power",
) -> dict:
    """Formula vs LFSR oracle over sampled family-L members of every class.

    Classes smaller than `per_class` are checked exhaustively; the doubled
    m-sequence row is always measured (its span must equal n).
    """
    t0 = time.time()
    ring = _ring(e, m)
    config = FamilyConfig(ring, "L", rho=rho, lambda_log=lambda_log)
    rng = random.Random(seed)
    a_set, b_set = families.span_index_sets(ring.e, rho)
    violations: list = []
    notes: list = []
    checked = 0
    for j in range(len(a_set) + 1):
        for l in range(len(b_set) + 1):
            class_size = families.count_span_class(config, j, l)
            quota = min(per_class, class_size)
            indices: set[int] = set()
            while len(indices) < quota:
                indices.add(sample_class_member(config, j, l, rng, matching))
            expected = lincomp.span_formula_l(ring.n, ring.e, ring.m, rho, j, l)
            for i in sorted(indices):
                s = families.gen_member_L(config, i)
                cj, cl, predicted = families.classify_span(s.coeffs, config, matching)
                measured = lincomp.linear_complexity_periodic(s).complexity
                checked += 1
                if (cj, cl) != (j, l) or predicted != expected or measured != expected:
                    violations.append(
                        {"index": i, "class": [j, l], "classified": [cj, cl],
                         "formula": expected, "measured": measured}
                    )
            mode = "exhaustive" if quota == class_size else f"{quota} sampled"
            notes.append(f"class (j={j},l={l}): size {class_size}, {mode}, span {expected}")
    row = families.gen_member_L(config, config.size)
    measured = lincomp.linear_complexity_periodic(row).complexity
    checked += 1
    if measured != ring.n:
        violations.append({"index": config.size, "class": "m-sequence row",
                           "formula": ring.n, "measured": measured})
    notes.append(f"m-sequence row span {measured} (expected {ring.n})")
    params = {"e": e, "m": m, "n": ring.n, "rho": rho, "per_class": per_class,
              "seed": seed, "matching": matching, "lambda_log": config.lambda_log}
    return _result("span-l", params, checked, violations, notes, t0)


# ---------------------------------------------------------------------------

def run_kernel_suite(e: int = 2, m: int = 2, lambda_log: int | None = None) -> dict:
    """Kernel dichotomy of the rho = 1 shift equation.

    For every delta outside {0,1} the brute-force solution count must be
    1 or 2^e, hitting 2^e exactly when tr(1/(1+delta)) equals
    (lam^2+1)/lam^2.  delta = 1 degenerates (the equation vanishes
    identically, giving a full kernel of 2^n solutions) and is reported
    as a note, not a violation.
    """
    t0 = time.time()
    ring = _ring(e, m)
    config = FamilyConfig(ring, "V" if m % 2 == 0 else "L", lambda_log=lambda_log)
    f = ring.field
    lam_bar = f.exp[config.lambda_log]
    violations: list = []
    histogram: Counter = Counter()
    checked = 0
    for delta in f.nonzero():
        if delta == 1:
            continue
        count = analysis.count_L_kernel(f, e, delta, lam_bar)
        cond = analysis.kernel_condition(f, e, delta, lam_bar)
        histogram[count] += 1
        checked += 1
        if count not in (1, 1 << e) or (count == 1 << e) != cond:
            violations.append({"delta_log": f.log[delta], "count": count, "condition": cond})
    full = analysis.count_L_kernel(f, e, 1, lam_bar)
    notes = [
        f"count histogram over delta outside {{0,1}}: {dict(sorted(histogram.items()))}",
        f"delta = 1 excluded: equation vanishes identically ({full} = 2^n solutions)",
    ]
    params = {"e": e, "m": m, "n": ring.n, "lambda_log": config.lambda_log}
    return _result("kernel", params, checked, violations, notes, t0)


# ---------------------------------------------------------------------------

def _bound_class(size_base: int, i: int, j: int, tau: int) -> str:
    mixed = (i == size_base + 1) != (j == size_base + 1)
    if mixed:
        return "mixed"
    if i == size_base + 1 and j == size_base + 1:
        return "mseq-self"
    return "inphase" if tau == 0 else "pair"


def run_bounds_suite(
    e: int = 2,
    m: int = 2,
    rho: int = 1,
    samples: int | None = None,
    seed: int = 20240810,
) -> dict:
    """|R+1| bounds per pair class, exhaustively or on seeded samples.

    Classes: "pair" (both members coefficient tuples, any nonzero shift),
    "inphase" (distinct tuples at shift 0), "mixed" (tuple against the
    m-sequence row), and "mseq-self" (the row against itself, exactly -1
    away from zero shift).  Bounds whose value exceeds the period are
    flagged as vacuous in the notes.
    """
    t0 = time.time()
    ring = _ring(e, m)
    config = FamilyConfig(ring, "L" if ring.m % 2 else "V", rho=rho) \
        if rho == 1 else FamilyConfig(ring, "L", rho=rho)
    n = ring.n
    period = config.period
    size_base = config.size - 1
    bound_sq = {
        "pair": analysis.bound_sq_pair(n, e, rho),
        "mixed": analysis.bound_sq_mixed(n, e, rho),
        "inphase": analysis.bound_sq_inphase(n, rho),
    }
    notes = []
    for name, b2 in sorted(bound_sq.items()):
        vac = " (vacuous: exceeds period)" if b2 > period * period else ""
        notes.append(f"{name}: |R+1|^2 <= {b2}{vac}")

    members: dict[int, families.QuadSequence] = {}

    def member(i: int) -> families.QuadSequence:
        if i not in members:
            members[i] = families.gen_member_L(config, i)
        return members[i]

    def check(i: int, j: int, tau: int) -> dict | None:
        r = analysis.correlate(member(i), member(j), tau)
        cls = _bound_class(size_base, i, j, tau)
        if cls == "mseq-self":
            ok = r == analysis.GaussianInt(-1, 0)
        else:
            shifted = analysis.GaussianInt(r.re + 1, r.im)
            ok = shifted.abs2() <= bound_sq[cls]
        if ok:
            return None
        return {"i": i, "j": j, "tau": tau, "class": cls, "value": str(r)}

    violations: list = []
    checked = 0
    exhaustive = samples is None and config.size ** 2 * period <= 200_000
    if exhaustive:
        for i in range(1, config.size + 1):
            for j in range(1, config.size + 1):
                for tau in range(period):
                    if i == j and tau == 0:
                        continue
                    checked += 1
                    v = check(i, j, tau)
                    if v:
                        violations.append(v)
        notes.append(f"exhaustive over {checked} correlations")
    else:
        total = samples or 10_000
        rng = random.Random(seed)
        strata = {
            "pair": total - total // 5,
            "mixed": total // 10,
            "inphase": total // 10,
        }
        for cls, quota in strata.items():
            done = 0
            while done < quota:
                if cls == "pair":
                    i = rng.randrange(1, size_base + 1)
                    j = rng.randrange(1, size_base + 1)
                    tau = rng.randrange(1, period)
                elif cls == "mixed":
                    i = rng.randrange(1, size_base + 1)
                    j = size_base + 1
                    if rng.random() < 0.5:
                        i, j = j, i
                    tau = rng.randrange(period)
                else:
                    i = rng.randrange(1, size_base + 1)
                    j = rng.randrange(1, size_base + 1)
                    if i == j:
                        continue
                    tau = 0
                done += 1
                checked += 1
                v = check(i, j, tau)
                if v:
                    violations.append(v)
        for tau in range(1, period):
            checked += 1
            v = check(size_base + 1, size_base + 1, tau)
            if v:
                violations.append(v)
        notes.append(f"stratified sample of {checked} correlations, seed {seed}")
    params = {"e": e, "m": m, "n": n, "rho": rho, "samples": samples, "seed": seed}
    return _result("bounds", params, checked, violations, notes, t0)


# ---------------------------------------------------------------------------

RUNNERS = {
    "identity": run_identity_suite,
    "values-v": run_values_v_suite,
    "values-w": run_values_w_suite,
    "distinctness": run_distinctness_suite,
    "span-w": run_span_w_suite,
    "span-l": run_span_l_suite,
    "kernel": run_kernel_suite,
    "bounds": run_bounds_suite,
}
