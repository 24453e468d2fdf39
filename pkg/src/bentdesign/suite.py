"""Regression suite: every acceptance criterion as a named, timed group of checks."""

import time
import traceback
from dataclasses import dataclass, field

import numpy as np

from .boolfn import (
    BooleanFunction,
    classify_plateaued,
    dual_of_bent,
    from_anf,
    is_bent,
    linear_structures,
    autocorrelation,
    parse_function,
    to_anf,
    walsh_transform,
    _butterfly_signed,
    AnfPolynomial,
)
from .codes import (
    code_from_dset,
    code_from_ints,
    contains_rm1,
    design_code,
    refute_code_equivalence,
    support_design,
    verify_code_equivalence_witness,
    weight_distribution,
)
from .constructions import (
    addition_design,
    addition_design_bent,
    lcd_design,
    mm_bent,
    polarization_design,
    quasi_symmetric_design,
    sum_pair_design,
    trace_bilinear_bent,
    translation_design,
)
from .equivalence import (
    AffineMap,
    EaWitness,
    automorphism_order,
    bilinear_polarization,
    lift_ea_to_design_iso,
    symplectic_order,
    verify_ea_witness,
)
from .gf2 import Gf2Field, Gf2Matrix, rank
from .incidence import (
    character_sum_conditions,
    check_dsdp,
    check_tsdp,
    complement,
    from_function_family,
    intersection_profile,
    is_simple,
    refute_isomorphism,
    two_rank,
    verify_2_design,
    verify_isomorphism_witness,
)

DEFAULT_FIELD = "gf2^4/13"
SEED = 20240601


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class CriterionResult:
    key: str
    title: str
    budget: float
    seconds: float = 0.0
    checks: list = field(default_factory=list)
    error: str | None = None

    @property
    def within_budget(self):
        return self.seconds < self.budget

    @property
    def passed(self):
        return self.error is None and all(c.ok for c in self.checks) and self.within_budget

    def to_dict(self):
        return {
            "key": self.key,
            "title": self.title,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "budget": self.budget,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
            "error": self.error,
        }


class _Recorder:
    def __init__(self):
        self.checks = []

    def __call__(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), str(detail)))
        return bool(ok)

    def equal(self, name, got, want):
        return self(name, got == want, f"got {got!r}, want {want!r}")


def _ab(m, x):
    return format(x, f"0{m}b")


def plateaued_pipeline(check, ctx):
    f = parse_function("x1*x3+x2*x4+x1*x2*x5")
    prof = classify_plateaued(f)
    check.equal("plateau level", prof.r if prof else None, 1)
    want_support = sorted((y << 1) | ((y >> 1) & y & 1) for y in range(16))
    check.equal("Walsh support", list(prof.support), want_support)
    g = parse_function("x1*x3+x2*x4", 5)
    check("sign function on support", all(prof.sign_at(a) == g(a) for a in prof.support))
    rep = addition_design(f)
    D = rep.design
    check.equal("design parameters", rep.observed.as_tuple() if rep.observed else None, (16, 6, 4, 32, 12))
    check("simple", is_simple(D))
    check("TSDP holds", check_tsdp(D).holds)
    d = check_dsdp(D)
    got = (not d.holds, [_ab(5, x) for x in d.labels], [_ab(5, x) for x in d.delta])
    check.equal("DSDP witness", got, (True, ["00000", "00001"], ["00111", "01111", "10111", "11111"]))
    check.equal("2-rank", two_rank(D), 7)
    check("RM(1,5) in the design code", contains_rm1(design_code(D), 5))


def _bent_fixtures():
    return [
        (4, mm_bent(2, [0, 1, 2, 3])),
        (6, mm_bent(3, [0, 3, 5, 6, 1, 2, 4, 7], parse_function("x1*x2*x3", 3))),
    ]


def bent_code_weights(check, ctx):
    for m, f in _bent_fixtures():
        C = design_code(addition_design(f).design)
        wd = weight_distribution(C).nonzero()
        h = 1 << (m // 2 - 1)
        want = {0: 1, (1 << (m - 1)) - h: 1 << m, 1 << (m - 1): (1 << (m + 1)) - 2, (1 << (m - 1)) + h: 1 << m, 1 << m: 1}
        check.equal(f"weights m={m}", wd, want)


def bent_support_designs(check, ctx):
    for m, f in _bent_fixtures():
        AD = addition_design(f).design
        C = design_code(AD)
        labels = [blk.label for blk in AD.blocks]
        h = 1 << (m // 2 - 1)
        target = addition_design(dual_of_bent(f)).design
        low = support_design(C, (1 << (m - 1)) - h, labels)
        high = support_design(C, (1 << (m - 1)) + h, labels)
        check(f"minimum weight supports m={m}", low.same_blockset(target))
        check(f"upper weight supports m={m}", high.same_blockset(complement(target)))


def quasi_symmetric(check, ctx):
    f = parse_function("x1*x2+x3*x4")
    rep = quasi_symmetric_design(f)
    D = rep.design
    check.equal("parameters", rep.observed.as_tuple() if rep.observed else None, (6, 4, 6, 15, 10))
    check.equal("intersection values", intersection_profile(D).values, (2, 3))
    check.equal("2-rank", two_rank(D), 5)
    C = code_from_dset(f)
    pts = f.support()
    check("middle weight supports", support_design(C, 4, pts).same_blockset(D))
    check("minimum weight supports", support_design(C, 2, pts).same_blockset(complement(D)))


def translation_tsdp(check, ctx):
    ident = list(range(16))
    for anf, ok in [("0", True), ("x1", True), ("x1*x2", True), ("x1*x2*x3", True), ("x1*x2*x3*x4", False)]:
        f = mm_bent(4, ident, parse_function(anf, 4))
        D = translation_design(f).design
        v = check_tsdp(D)
        rk = two_rank(D)
        if ok:
            check(f"g={anf}: TSDP and rank 10", v.holds and rk == 10, f"tsdp={v.holds} rank={rk}")
        else:
            check(
                f"g={anf}: TSDP fails with witness, rank > 10",
                not v.holds and len(v.labels) == 3 and rk > 10,
                f"witness={v.labels} rank={rk}",
            )


def trace_pair(check, ctx):
    F = Gf2Field.parse(ctx.get("field", DEFAULT_FIELD))
    g = trace_bilinear_bent(F, 1, 14)
    h = trace_bilinear_bent(F, F.alpha, 14)
    check("g, h, g+h bent", is_bent(g) and is_bent(h) and is_bent(g + h))
    check("dual of sum is sum of duals", dual_of_bent(g + h) == dual_of_bent(g) + dual_of_bent(h))
    rep = sum_pair_design(g, h)
    check.equal("parameters", rep.observed.as_tuple()[:3] if rep.observed else None, (256, 120, 56))
    check.equal("2-rank", two_rank(rep.design), 30)
    check.equal("translation design 2-rank", two_rank(translation_design(h).design), 30)
    fixture = addition_design(mm_bent(4, list(range(16)))).design
    ref = refute_isomorphism(rep.design, fixture)
    got = (ref.invariant, ref.left, ref.right) if ref else None
    check.equal("refuted by", got, ("2-rank", 30, 10))


def automorphism_count(check, ctx):
    f = parse_function("x1*x2+x3*x4")
    n = automorphism_order(f).count
    check.equal("order", n, 11520)
    check.equal("symplectic order times translations", symplectic_order(4) * 16, n)


def half_swap(check, ctx):
    f = mm_bent(3, list(range(8)))
    pi = bilinear_polarization(f)
    swap = tuple(1 << (5 - ((i + 3) % 6)) for i in range(6))
    check.equal("polarization map", pi.rows if pi else None, swap)
    fs = dual_of_bent(f)
    xs = np.arange(64)
    pib = pi.table()
    lhs = f.table[:, None] ^ fs.table[pib][None, :] ^ (np.bitwise_count(xs[:, None] & pib[None, :]) & 1)
    rhs = f.table[xs[:, None] ^ xs[None, :]]
    check("shift identity on all pairs", np.array_equal(lhs, rhs), f"{lhs.size} pairs")
    TD = translation_design(f).design
    AD = addition_design_bent(f).design
    ok = verify_isomorphism_witness(TD, AD, {x: x for x in TD.points}, {c: pi(c) for c in range(64)})
    check("translation and addition designs isomorphic, identity on points", ok)


def lcd_vs_polarization(check, ctx):
    C = code_from_ints([1, 2, 4, 8], 4)
    L = lcd_design(C)
    f = parse_function("x1*x2+x3*x4")
    P = polarization_design(f)
    check.equal("code design", L.observed.as_tuple()[:3] if L.observed else None, (15, 8, 4))
    check.equal("polarization design", P.observed.as_tuple()[:3] if P.observed else None, (15, 8, 4))
    pi = bilinear_polarization(f)
    ok = pi is not None and verify_isomorphism_witness(
        P.design, L.design, {x: x for x in P.design.points}, {b: pi(b) for b in range(1, 16)}
    )
    check("isomorphism with identity on points", ok)
    cubic = mm_bent(3, list(range(8)), parse_function("x1*x2*x3", 3))
    check("cubic bent has no linear polarization map", bilinear_polarization(cubic) is None)


def ea_lift_chain(check, ctx):
    f = parse_function("x1*x3+x2*x4+x1*x2*x5")
    g = f + parse_function("x1+x2+x3+x4", 5)
    check.equal("support sizes", (f.weight, g.weight), (12, 16))
    ref = refute_code_equivalence(code_from_dset(f), code_from_dset(g))
    check.equal("support codes refuted by", (ref.invariant, ref.left, ref.right) if ref else None, ("length", 12, 16))
    w = EaWitness(AffineMap.identity(5), 0b11110, 0)
    check("EA witness", verify_ea_witness(f, g, w))
    lift = lift_ea_to_design_iso(f, g, w)
    D1 = addition_design(f).design
    D2 = addition_design(g).design
    check("design isomorphism", verify_isomorphism_witness(D1, D2, lift.point_map, lift.block_map))
    perm = lift.coordinate_permutation([b.label for b in D1.blocks], [b.label for b in D2.blocks])
    check("code equivalence", verify_code_equivalence_witness(design_code(D1), design_code(D2), perm))


def _random_quadratic(rng, m):
    monos = [1 << i for i in range(m)] + [(1 << i) | (1 << j) for i in range(m) for j in range(i + 1, m)]
    pick = [mono for mono in monos if rng.random() < 0.5]
    if rng.random() < 0.5:
        pick.append(0)
    return from_anf(AnfPolynomial(m, frozenset(pick)))


def _intersection_formula_ok(f):
    prof = classify_plateaued(f)
    m, r = f.m, prof.r
    D = addition_design(f).design
    N = D.incidence_matrix().astype(np.int64)
    inter = N.T @ N
    C = autocorrelation(f)
    labels = [blk.label for blk in D.blocks]
    base = (1 << m) - (1 << ((m + r + 2) // 2))
    for i, a in enumerate(labels):
        for j in range(i + 1, len(labels)):
            b = labels[j]
            sign = 1 - 2 * (f(a) ^ f(b))
            if inter[i, j] << (r + 2) != base + sign * int(C[a ^ b]):
                return False
    return True


def _all_constructions():
    bent4 = parse_function("x1*x2+x3*x4")
    bent6 = _bent_fixtures()[1][1]
    plat5 = parse_function("x1*x3+x2*x4+x1*x2*x5")
    out = []
    for f in (bent4, bent4 + 1, bent6):
        out += [addition_design(f), addition_design_bent(f), translation_design(f)]
        out += [quasi_symmetric_design(f), polarization_design(f)]
    out.append(addition_design(plat5))
    out.append(lcd_design(code_from_ints([1, 2, 4, 8], 4)))
    return out


def _family_of(D):
    """Boolean functions on F_2^m reproducing each block of a design built on labels."""
    fam = []
    for i, blk in enumerate(D.blocks):
        t = np.zeros(1 << D.m, dtype=np.uint8)
        t[D.block_points(i)] = 1
        fam.append((blk.label, BooleanFunction(D.m, t)))
    return fam


def property_suites(check, ctx):
    rng = np.random.default_rng(ctx.get("seed", SEED))
    ok_wh = ok_par = ok_mob = True
    for _ in range(100):
        m = int(rng.integers(1, 9))
        f = BooleanFunction(m, rng.integers(0, 2, 1 << m))
        w = walsh_transform(f).values
        twice = _butterfly_signed(w)
        ok_wh &= np.array_equal(twice, (1 << m) * (1 - 2 * f.table.astype(np.int64)))
        ok_par &= int((w * w).sum()) == 1 << (2 * m)
        ok_mob &= from_anf(to_anf(f)) == f
    check("double transform scales by 2^m", ok_wh)
    check("Parseval", ok_par)
    check("Moebius involution", ok_mob)

    agree = comp = True
    for rep in _all_constructions():
        D = rep.design
        cs = character_sum_conditions(D.points, _family_of(D))
        params = verify_2_design(D)
        agree &= rep.matches and cs.params == params
        c = verify_2_design(complement(D))
        p = params
        comp &= c is not None and c.as_tuple()[:3] == (p.v, p.v - p.k, p.b - 2 * p.r + p.lam)
    for _ in range(100):
        m = int(rng.integers(2, 5))
        npts = int(rng.integers(2, (1 << m) + 1))
        P = sorted(rng.choice(1 << m, npts, replace=False).tolist())
        fam = [(b, BooleanFunction(m, rng.integers(0, 2, 1 << m))) for b in range(int(rng.integers(1, 9)))]
        D = from_function_family(P, fam, m)
        cs = character_sum_conditions(P, fam)
        agree &= cs.cond1 == (len(set(D.block_sizes())) == 1)
        agree &= cs.cond2 == (len(set(D.point_degrees())) == 1)
        agree &= cs.params == verify_2_design(D)
    for _ in range(20):
        k = int(rng.integers(2, 4))
        f = mm_bent(k, rng.permutation(1 << k), BooleanFunction(k, rng.integers(0, 2, 1 << k)))
        D = addition_design(f).design
        cs = character_sum_conditions(D.points, _family_of(D))
        agree &= cs.params is not None and cs.params == verify_2_design(D)
    check("character sums agree with direct counting", agree)
    check("complement parameters", comp)

    fixtures = [parse_function("x1*x3+x2*x4+x1*x2*x5"), parse_function("x1*x2+x3*x4"), _bent_fixtures()[1][1]]
    while len(fixtures) < 8:
        q = _random_quadratic(rng, int(rng.integers(4, 7)))
        prof = classify_plateaued(q)
        if prof is not None and not prof.is_affine:
            fixtures.append(q)
    check("intersection formula", all(_intersection_formula_ok(f) for f in fixtures))

    seen = 0
    simple_ok = True
    while seen < 50:
        q = _random_quadratic(rng, int(rng.integers(3, 7)))
        prof = classify_plateaued(q)
        if prof is None or prof.is_affine:
            continue
        seen += 1
        simple_ok &= is_simple(addition_design(q).design) == (len(linear_structures(q)) == 0)
    check("simple iff no linear structure", simple_ok)

    rank_ok = True
    for _ in range(40):
        m = int(rng.integers(2, 6))
        n = 1 << m
        sigma = rng.permutation(n)
        f = BooleanFunction(m, rng.integers(0, 2, n)) if rng.random() < 0.7 else BooleanFunction.linear(m, int(rng.integers(0, n)), int(rng.integers(0, 2)))
        rows = [(1 << n) - 1]
        for i in range(1, m + 1):
            rows.append(sum(1 << x for x in range(n) if sigma[x] >> (m - i) & 1))
        rows.append(sum(1 << x for x in range(n) if f(x)))
        rk = rank(Gf2Matrix.from_ints(rows, n))
        inv = np.argsort(sigma)
        h = f.compose(inv)
        rank_ok &= (rk == m + 2) == (to_anf(h).degree > 1)
    check("rank m+2 iff non-affine after relabeling", rank_ok)


CRITERIA = [
    ("plateaued-pipeline", "plateaued m=5: support, sign, design, TSDP/DSDP, rank, RM(1,5)", 1.0, plateaued_pipeline),
    ("bent-code-weights", "weight distribution of bent addition-design codes, m=4,6", 1.0, bent_code_weights),
    ("bent-support-designs", "support designs of bent addition-design codes, m=4,6", 5.0, bent_support_designs),
    ("quasi-symmetric", "quasi-symmetric design on D_f, m=4, and its support-design code", 1.0, quasi_symmetric),
    ("translation-tsdp", "translation designs of x·y+g(y), 2m=8: TSDP and rank by deg g", 30.0, translation_tsdp),
    ("trace-pair", "GF(16) trace pair, m=8: sum-pair design, ranks, refutation", 30.0, trace_pair),
    ("automorphism-order", "automorphism count of x1x2+x3x4 vs symplectic order", 60.0, automorphism_count),
    ("half-swap", "polarization of x·y, m=6: half swap, shift identity, AD ~ TD", 5.0, half_swap),
    ("lcd-polarization", "code design of F_2^4 vs polarization design; cubic has no map", 10.0, lcd_vs_polarization),
    ("ea-lift-chain", "EA witness m=5 lifted to design and code equivalence", 5.0, ea_lift_chain),
    ("property-suites", "randomized property suites", 120.0, property_suites),
]

KEYS = [c[0] for c in CRITERIA]


def run_criterion(key, ctx=None):
    ctx = ctx or {}
    for k, title, budget, fn in CRITERIA:
        if k == key:
            break
    else:
        raise KeyError(f"unknown criterion {key!r}; choose from {', '.join(KEYS)}")
    res = CriterionResult(key, title, budget)
    rec = _Recorder()
    t0 = time.perf_counter()
    try:
        fn(rec, ctx)
    except Exception as exc:  # a crash is a failed criterion, not a crashed run
        res.error = f"{type(exc).__name__}: {exc}"
        res.checks.append(Check("completed", False, traceback.format_exc(limit=3)))
    res.seconds = time.perf_counter() - t0
    res.checks = rec.checks + res.checks
    return res


def run_all(only=None, ctx=None):
    keys = KEYS if not only else [k for k in KEYS if k in set(only)]
    unknown = set(only or ()) - set(KEYS)
    if unknown:
        raise KeyError(f"unknown criterion {sorted(unknown)}; choose from {', '.join(KEYS)}")
    return [run_criterion(k, ctx) for k in keys]


def format_line(res):
    status = "PASS" if res.passed else "FAIL"
    return f"{status}  {res.key:<22} {res.seconds:7.2f}s / {res.budget:g}s  {res.title}"
