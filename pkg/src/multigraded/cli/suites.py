"""Verification suites over the corpus.

Every suite is a list of independent cases.  A case is a top-level
function plus picklable arguments, so cases can run in worker processes;
results come back in case order regardless of the worker count.  Each
result is a dict with ``case``, ``status`` (pass, fail, inconclusive or
skipped), ``details`` and, for failures, a ``witness``.
"""
import glob
import json
import os
from concurrent.futures import ProcessPoolExecutor
from itertools import product
from math import ceil

from ..cohomo.cech import CechOracle, Unstable, cech_oracle, monomial_data
from ..cohomo.depth import (Inconclusive, gamma_fg, gdepth, region_vertex, transform_nonzero,
                            vad_estimate, veronese_depth, veronese_gdepth)
from ..cohomo.local import cohomology
from ..cohomo.resolution import free_resolution
from ..lattice import ConeRegion, DegreeMatrix, box, cone_contains, phi_a, star, veronese_region
from ..modcat import (PreconditionFailed, WindowTooSmall, killed_by_irrelevant_power, veronese_presentation,
                      veronese_ring, vanishing_vertex_check)
from ..rees import CapTooSmall, rees_build, rees_veronese_depth, rees_veronese_depth_lc
from .parse import parse_input

SUITES = ("lattice", "cone-vanishing", "duality", "depth", "threetenors", "veronese-invariance",
          "asymptotic-depth", "rees")

INCONCLUSIVE_ERRORS = (Inconclusive, WindowTooSmall, CapTooSmall, Unstable)

# presentations of Veronese transforms are only built over rings this small, and their
# (cap-relative) gdepth uses a smaller power cap: its cost grows steeply with the cap
PRESENTATION_MAX_VARS = 5
PRESENTATION_POWER_CAP = 12
# Rees modules are resolved directly only over ambient rings this small
REES_RESOLUTION_MAX_VARS = 7


class UnknownSuite(ValueError):
    pass


def _result(case, ok, details, witness=None):
    out = {"case": case, "status": "pass" if ok else "fail", "details": details}
    if not ok and witness is not None:
        out["witness"] = witness
    return out


def _skipped(case, reason):
    return {"case": case, "status": "skipped", "details": {"reason": reason}}


def _load(path, options):
    return parse_input(path, options.get("field")).modules[0]


def _case_name(path):
    return os.path.splitext(os.path.basename(path))[0]


def corpus_modules(corpus_dir):
    return sorted(glob.glob(os.path.join(corpus_dir, "*.mod")))


def corpus_ideals(corpus_dir):
    return sorted(glob.glob(os.path.join(corpus_dir, "rees", "*.ideal")))


# -- lattice ------------------------------------------------------------------------------------

def lattice_case(r, diagonals=(1, 2, 3), top=4, reach=10):
    """Region bound check for every diagonal degree matrix of size r.

    For a diagonal matrix both the region bound and cone membership split
    into independent coordinates, so the r-dimensional statement over the
    full box holds exactly when every one-dimensional instance holds.  The
    one-dimensional instances are checked exhaustively and the split itself
    is checked on the r-dimensional matrices.
    """
    failures, checked = [], 0
    for g in diagonals:
        G1 = DegreeMatrix.diagonal((g,))
        for beta in range(top + 1):
            cone = ConeRegion((beta,), G1)
            for b in range(beta, top + 1):
                a = veronese_region((beta,), (b,), G1)
                for n in range(-reach, reach + 1):
                    checked += 1
                    v = star((phi_a(G1, a, (n,))[0] + b,))
                    if not cone_contains(cone, v):
                        failures.append({"gamma": g, "beta": beta, "b": b, "a": a[0], "n": n, "degree": v})
    split_errors = []
    for diag in product(diagonals, repeat=r):
        G = DegreeMatrix.diagonal(diag)
        for beta in box((0,) * r, (top,) * r):
            for b in box(beta, (top,) * r):
                a = veronese_region(beta, b, G)
                per = tuple(veronese_region((x,), (y,), DegreeMatrix.diagonal((g,)))[0]
                            for x, y, g in zip(beta, b, diag))
                if a != per:
                    split_errors.append({"gamma": diag, "beta": beta, "b": b, "a": a, "perCoordinate": per})
    pairs = (sum(1 for beta in range(top + 1) for _ in range(beta, top + 1))) ** r
    covered = len(diagonals) ** r * pairs * (2 * reach + 1) ** r
    ok = not failures and not split_errors
    details = {"r": r, "oneDimensionalChecks": checked, "coveredChecks": covered,
               "exceptions": len(failures) + len(split_errors)}
    witness = (failures or split_errors or [None])[0]
    return _result(f"r={r}", ok, details, witness)


def lattice_cases(corpus_dir, options):
    return [(lattice_case, (r,)) for r in (1, 2, 3)]


# -- cone vanishing -------------------------------------------------------------------------

def cone_vanishing_case(path, options):
    name = _case_name(path)
    M = _load(path, options)
    window = max(options.get("window") or 12, 12)
    u = next((u for u in (1, 2, 3) if killed_by_irrelevant_power(M, u)), None)
    if u is None:
        return _skipped(name, "not killed by S_++^u for u <= 3")
    beta, verdict = vanishing_vertex_check(M, u, window)
    details = {"u": u, "vertex": beta, "window": [-window, window], "checked": verdict.checked}
    witness = None
    if not verdict.holds:
        n = verdict.counterexample
        witness = {"degree": n, "expected": 0, "got": M.dim(n)}
    return _result(name, verdict.holds, details, witness)


def cone_vanishing_cases(corpus_dir, options):
    return [(cone_vanishing_case, (p, options)) for p in corpus_modules(corpus_dir)]


# -- duality against the Cech oracle ----------------------------------------------------------

def duality_case(path, options):
    name = _case_name(path)
    M = _load(path, options)
    G = M.ring.degree_matrix
    try:
        monomial_data(M)
    except ValueError as exc:
        return _skipped(name, str(exc))
    if G is None or G.r > 2 or M.ring.nvars > 4:
        return _skipped(name, "duality suite covers r <= 2 and at most 4 variables")
    window = options.get("window") or 8
    C = cohomology(M)
    oracle = CechOracle(M)
    checked = 0
    for i in range(C.mu + 1):
        for n in box((-window,) * G.r, (window,) * G.r):
            checked += 1
            got, want = C.lc_dim(i, n), cech_oracle(M, i, n, oracle=oracle)
            if got != want:
                return _result(name, False, {"checked": checked},
                               {"index": i, "degree": n, "expected": want, "got": got})
    return _result(name, True, {"checked": checked, "window": [-window, window],
                                "almostStandard": G.is_almost_standard})


def duality_cases(corpus_dir, options):
    return [(duality_case, (p, options)) for p in corpus_modules(corpus_dir)]


# -- depth consistency -------------------------------------------------------------------------

def depth_case(path, options):
    name = _case_name(path)
    M = _load(path, options)
    G = M.ring.degree_matrix
    window = options.get("window") or 8
    C = cohomology(M)
    res = free_resolution(M)
    try:
        res.verify()
    except AssertionError as exc:
        return _result(name, False, {"resolutionChecked": False}, {"reason": str(exc)})
    degs = box((-window,) * G.r, (window,) * G.r)
    first = next((i for i in range(C.mu + 1) if any(C.lc_dim(i, n) for n in degs)), C.mu + 1)
    details = {"depth": C.depth, "firstNonzeroIndex": first, "betti": res.betti_numbers(),
               "window": [-window, window], "resolutionChecked": True}
    witness = {"expected": C.depth, "got": first}
    return _result(name, first == C.depth, details, witness)


def depth_cases(corpus_dir, options):
    return [(depth_case, (p, options)) for p in corpus_modules(corpus_dir)]


# -- gamma-finite gradedness against gdepth -----------------------------------------------------

def threetenors_case(path, options):
    name = _case_name(path)
    M = _load(path, options)
    if not M.ring.degree_matrix.is_almost_standard:
        return _skipped(name, "grading is not almost standard")
    window = options.get("window") or 8
    f = gamma_fg(M, window)
    g = gdepth(M, options.get("power_cap") or 32)
    details = {"gammaFg": f.value, "gdepth": g.value, "depth": cohomology(M).depth, "mu": f.mu,
               "window": [-window, window]}
    witness = {"expected": g.value, "got": f.value}
    if f.witness is not None:
        witness["index"], witness["degree"], witness["dimension"] = f.witness
    return _result(name, f.value == g.value, details, witness)


def threetenors_cases(corpus_dir, options):
    return [(threetenors_case, (p, options)) for p in corpus_modules(corpus_dir)]


# -- Veronese invariance of gdepth -----------------------------------------------------------------

def _same_gdepth(v, w):
    return v.value == w.value or (v.infinite and w.infinite)


def veronese_invariance_case(path, options):
    name = _case_name(path)
    M = _load(path, options)
    r = M.ring.degree_matrix.r
    cap = options.get("power_cap") or 32
    base = gdepth(M, cap)
    exact = cohomology(M).exact
    rows, bad, vacuous = [], None, 0
    for a in box((1,) * r, (3,) * r):
        for b in box((0,) * r, (2,) * r):
            if not transform_nonzero(M, a, b):
                vacuous += 1
                continue
            row = {"a": a, "b": b}
            values = []
            if exact:
                v = veronese_gdepth(M, a, b)
                row["commutation"] = v.value
                values.append(v)
            if veronese_ring(M.ring, a)[0].nvars <= PRESENTATION_MAX_VARS:
                N = veronese_presentation(M, a, b)
                v = gdepth(N, min(cap, PRESENTATION_POWER_CAP), generic=not exact)
                row["presentation"] = v.value
                values.append(v)
            if not values:
                row["route"] = "none"
                continue
            rows.append(row)
            if bad is None and not all(_same_gdepth(v, base) for v in values):
                bad = {"a": a, "b": b, "expected": base.value, "got": [v.value for v in values]}
    details = {"gdepth": base.value, "mu": base.mu, "transforms": len(rows), "zeroTransforms": vacuous,
               "crossChecked": sum(1 for row in rows if len(row) == 4), "table": rows}
    if not rows:
        return _skipped(name, "no Veronese transform could be computed")
    return _result(name, bad is None, details, bad)


def veronese_invariance_cases(corpus_dir, options):
    return [(veronese_invariance_case, (p, options)) for p in corpus_modules(corpus_dir)]


# -- asymptotic depth -------------------------------------------------------------------------------

def asymptotic_depth_case(path, options):
    """Region constancy, net constancy and (for r = 1) the one-parameter bound."""
    name = _case_name(path)
    M = _load(path, options)
    G = M.ring.degree_matrix
    if not G.is_almost_standard:
        return _skipped(name, "the Veronese region bound needs an almost-standard grading")
    r = G.r
    window = options.get("window") or 4
    s = vad_estimate(M, window=window)
    beta = region_vertex(M, s)
    failures = []

    region, vacuous = [], 0
    for db in box((0,) * r, (2,) * r):
        b = tuple(x + y for x, y in zip(beta, db))
        a0 = veronese_region(beta, b, G)
        for step in (0, 1, 2):
            a = tuple(x + step for x in a0)
            if not transform_nonzero(M, a, b, window):
                vacuous += 1
                continue
            d = veronese_depth(M, a, b, window)
            region.append({"a": a, "b": b, "depth": d})
            if d != s:
                failures.append({"check": "region", "a": a, "b": b, "expected": s, "got": d})

    zero = (0,) * r
    witnesses = [a for a in box((1,) * r, (3,) * r) if transform_nonzero(M, a, zero, window)]
    net = []
    if witnesses:
        top = max(veronese_depth(M, a, zero, window) for a in witnesses)
        a_star = next(a for a in witnesses if veronese_depth(M, a, zero, window) == top)
        for lam in box((1,) * r, (3,) * r):
            a = tuple(x * y for x, y in zip(lam, a_star))
            if not transform_nonzero(M, a, zero, window):
                continue
            d = veronese_depth(M, a, zero, window)
            net.append({"a": a, "depth": d})
            if d != top:
                failures.append({"check": "net", "a": a, "b": zero, "expected": top, "got": d})
    else:
        top, a_star = None, None

    one_param = None
    if r == 1 and top is not None:
        # the one-parameter statement is about the b = 0 maximum and its own vanishing bound
        alpha = max(1, ceil(region_vertex(M, top)[0] / G.entry(0, 0)))
        one_param = {"alpha": alpha, "s": top, "depths": []}
        for a in range(alpha, alpha + 6):
            if not transform_nonzero(M, (a,), zero, window):
                continue
            d = veronese_depth(M, (a,), zero, window)
            one_param["depths"].append([a, d])
            if d != top:
                failures.append({"check": "one-parameter", "a": (a,), "b": zero, "expected": top, "got": d})

    samples = len(region) + vacuous
    details = {"s": s, "beta": beta, "window": [-window, window], "regionSamples": samples,
               "nonzeroSamples": len(region), "zeroTransforms": vacuous, "region": region, "netWitness": a_star, "netDepth": top,
               "net": net}
    if one_param is not None:
        details["oneParameter"] = one_param
    if samples < 9:
        failures.append({"check": "sample count", "expected": 9, "got": samples})
    return _result(name, not failures, details, failures[0] if failures else None)


def asymptotic_depth_cases(corpus_dir, options):
    return [(asymptotic_depth_case, (p, options)) for p in corpus_modules(corpus_dir)]


# -- Rees algebras --------------------------------------------------------------------------------

def rees_rows(path, options, max_a=None):
    """Depth table of R(I^a), a = 1.. up to two past the first a with constancy confirmed.

    Each a is computed from the local cohomology of R(I) and, where the
    ambient ring of R(I^a) is small enough, also by resolving R(I^a)
    directly; the two must agree.
    """
    parsed = parse_input(path, options.get("field"))
    ideals = parsed.ideals
    cap = options.get("relation_cap")
    base = rees_build(ideals, cap)
    r = len(ideals)
    rows = []
    a_hi = max_a or 6
    a = 1
    while a <= a_hi:
        power = (a,) * r
        lc = rees_veronese_depth_lc(base, power)
        row = {"a": a, "depth": lc, "routes": ["local-cohomology"]}
        nvars = ideals[0].nvars + sum(len(I.power(a).generators) for I in ideals)
        if nvars <= REES_RESOLUTION_MAX_VARS:
            ab = rees_veronese_depth(ideals, power, relation_cap=cap)
            row["routes"].append("resolution")
            if ab != lc:
                row["disagreement"] = {"resolution": ab, "localCohomology": lc}
        rows.append(row)
        if max_a is None:
            onset = _onset(rows)
            a_hi = min(6, onset + 3)
        a += 1
    return {"ideal": parsed.ideal_names[0], "generators": [list(g) for g in ideals[0].generators],
            "dimension": base.ring.q, "relations": len(base.relations),
            "relationCap": base.relation_cap, "fidelityWeight": base.fidelity_weight,
            "depth": rows[0]["depth"], "table": rows, "onset": _onset(rows)}


def _onset(rows):
    depths = [row["depth"] for row in rows]
    k = len(depths) - 1
    while k > 0 and depths[k - 1] == depths[-1]:
        k -= 1
    return rows[k]["a"]


def golden_dir(corpus_dir, options):
    """Frozen Rees tables live in golden/rees next to the corpus directory."""
    return options.get("golden_dir") or os.path.join(os.path.dirname(os.path.abspath(corpus_dir)), "golden", "rees")


def rees_case(path, golden, options):
    name = _case_name(path)
    try:
        with open(golden, encoding="utf-8") as fh:
            frozen = json.load(fh)
    except FileNotFoundError:
        return _result(name, False, {"golden": golden}, {"reason": "golden file missing"})
    got = rees_rows(path, options, max_a=frozen["table"][-1]["a"])
    failures = [{"a": row["a"], **row["disagreement"]} for row in got["table"] if "disagreement" in row]
    want = {row["a"]: row["depth"] for row in frozen["table"]}
    for row in got["table"]:
        if row["depth"] != want.get(row["a"]):
            failures.append({"a": row["a"], "expected": want.get(row["a"]), "got": row["depth"]})
    if got["onset"] != frozen["onset"]:
        failures.append({"check": "onset", "expected": frozen["onset"], "got": got["onset"]})
    tail = [row["depth"] for row in got["table"] if row["a"] >= got["onset"]]
    if got["onset"] + 3 > got["table"][-1]["a"] or len(set(tail)) != 1:
        failures.append({"check": "constant tail", "onset": got["onset"], "depths": tail})
    details = {k: got[k] for k in ("ideal", "dimension", "relations", "depth", "onset")}
    details["depthBelowDimension"] = got["depth"] < got["dimension"]
    details["table"] = [[row["a"], row["depth"], row["routes"]] for row in got["table"]]
    return _result(name, not failures, details, failures[0] if failures else None)


def rees_cases(corpus_dir, options):
    where = golden_dir(corpus_dir, options)
    return [(rees_case, (p, os.path.join(where, _case_name(p) + ".json"), options))
            for p in corpus_ideals(corpus_dir)]


# -- driver ------------------------------------------------------------------------------------------

_BUILDERS = {
    "lattice": lattice_cases,
    "cone-vanishing": cone_vanishing_cases,
    "duality": duality_cases,
    "depth": depth_cases,
    "threetenors": threetenors_cases,
    "veronese-invariance": veronese_invariance_cases,
    "asymptotic-depth": asymptotic_depth_cases,
    "rees": rees_cases,
}

# suite-level requirements: minimum number of passing cases
_MINIMUM_PASSING = {"cone-vanishing": 6, "duality": 5, "threetenors": 8}


def _run_one(job):
    fn, args = job
    try:
        return fn(*args)
    except INCONCLUSIVE_ERRORS as exc:
        case = _case_name(args[0]) if args and isinstance(args[0], str) else str(args)
        return {"case": case, "status": "inconclusive",
                "details": {"error": type(exc).__name__, "reason": str(exc)}}
    except PreconditionFailed as exc:
        case = _case_name(args[0]) if args and isinstance(args[0], str) else str(args)
        return _skipped(case, str(exc))


def _coverage(suite, results):
    passing = [r for r in results if r["status"] == "pass"]
    need = _MINIMUM_PASSING.get(suite)
    out = []
    if need is not None:
        ok = len(passing) >= need
        out.append(_result("coverage", ok, {"passing": len(passing), "required": need},
                           {"expected": need, "got": len(passing)}))
    if suite == "threetenors":
        depths = {r["details"]["depth"] for r in passing}
        top = max((r["details"]["mu"] for r in passing), default=0)
        missing = sorted(set(range(top + 1)) - depths)
        out.append(_result("depth span", not missing, {"depths": sorted(depths), "mu": top},
                           {"missingDepths": missing}))
    return out


def run_suite(suite, corpus_dir, options=None, jobs=1):
    """Results for every case of the suite, in case order, plus coverage checks."""
    if suite not in _BUILDERS:
        raise UnknownSuite(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    options = dict(options or {})
    cases = _BUILDERS[suite](corpus_dir, options)
    if jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, cases))
    else:
        results = [_run_one(c) for c in cases]
    return results + _coverage(suite, results)


def suite_status(results):
    """'fail' when any case failed, else 'inconclusive' when any was, else 'pass'."""
    statuses = {r["status"] for r in results}
    if "fail" in statuses:
        return "fail"
    if "inconclusive" in statuses:
        return "inconclusive"
    return "pass"
