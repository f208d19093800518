"""Command line front end: ``multigraded --input FILE --command NAME [options]``."""
import argparse
import sys
import time

from ..cohomo.depth import gamma_fg, gdepth, vad_estimate, veronese_depth
from ..cohomo.local import cohomology
from ..cohomo.resolution import free_resolution
from ..kernel.field import field_from_spec
from ..lattice import box
from ..modcat import PreconditionFailed
from ..rees import rees_build, rees_depth, rees_veronese_depth
from .emit import digest, emit, envelope
from .parse import ParseError, parse_input
from .suites import INCONCLUSIVE_ERRORS, SUITES, UnknownSuite, run_suite, suite_status

COMMANDS = ("hilbert", "resolve", "depth", "lc-table", "gdepth", "gamma-fg", "veronese-depth", "vad",
            "rees-depth", "verify")

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3

MIN_WINDOW = 4
DEFAULT_WINDOWS = {"hilbert": 4, "lc-table": 4, "gamma-fg": 8, "veronese-depth": 4, "vad": 4}
WINDOW_RELATIVE = "window-relative"


class InputError(ValueError):
    pass


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _window(text):
    value = _positive(text)
    if value < MIN_WINDOW:
        raise argparse.ArgumentTypeError(f"window must be at least {MIN_WINDOW}, got {value}")
    return value


def _vector(text):
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers separated by commas, got {text!r}") from None


def _field(text):
    try:
        field_from_spec(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def build_parser():
    p = argparse.ArgumentParser(prog="multigraded",
                                description="Depth and local cohomology of multigraded modules.")
    p.add_argument("--input", required=True, help="description file, or the corpus directory for verify")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--suite", choices=SUITES, help="suite to run with --command verify")
    p.add_argument("--window", type=_window, help=f"degree window half-width (at least {MIN_WINDOW})")
    p.add_argument("--power-cap", type=_positive, default=32, help="largest power tried in nilpotency tests")
    p.add_argument("--relation-cap", type=_positive, help="weight up to which Rees relations are collected")
    p.add_argument("--field", type=_field, help="coefficient field: q or p:<prime>")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--jobs", type=_positive, default=1, help="worker processes for verify")
    p.add_argument("--out", help="write the output here instead of stdout")
    p.add_argument("--a", type=_vector, help="Veronese index, e.g. 2,2")
    p.add_argument("--b", type=_vector, help="Veronese shift, e.g. 0,1")
    p.add_argument("--timing", action="store_true", help="record wall-clock seconds in the output")
    return p


def _label(M, k):
    return M.name or f"module {k + 1}"


def _window_box(r, w):
    return box((-w,) * r, (w,) * r)


def _check_vector(name, v, r, minimum):
    if v is None:
        raise InputError(f"--{name} is required for this command")
    if len(v) != r:
        raise InputError(f"--{name} needs {r} entries, got {len(v)}")
    if any(x < minimum for x in v):
        raise InputError(f"--{name} entries must be at least {minimum}")
    return v


# -- per-module commands ---------------------------------------------------------------------

def cmd_hilbert(M, args, w):
    r = M.ring.q
    dims = [[n, M.dim(n)] for n in _window_box(r, w) if M.dim(n)]
    return {"window": [-w, w], "nonzeroPieces": dims}, [WINDOW_RELATIVE]


def cmd_resolve(M, args, w):
    res = free_resolution(M)
    res.verify()
    return {"bettiNumbers": res.betti_numbers(), "bettiDegrees": res.betti_degrees(),
            "projDim": res.proj_dim, "exact": res.exact, "verified": True}, []


def cmd_depth(M, args, w):
    C = cohomology(M)
    return {"depth": C.depth, "projDim": C.proj_dim}, []


def cmd_lc_table(M, args, w):
    C = cohomology(M)
    degrees = _window_box(M.ring.q, w)
    rows = [{"i": i, "dims": [C.lc_dim(i, n) for n in degrees]} for i in range(C.mu + 1)]
    return {"grid": {"degrees": [n[0] if len(n) == 1 else n for n in degrees], "rows": rows},
            "window": [-w, w]}, [WINDOW_RELATIVE]


def cmd_gdepth(M, args, w):
    v = gdepth(M, args.power_cap)
    out = {"gdepth": v.value, "mu": v.mu, "infinite": v.infinite, "exact": v.exact,
           "powerCap": v.power_cap, "levels": v.levels}
    return out, [] if v.exact else [WINDOW_RELATIVE]


def cmd_gamma_fg(M, args, w):
    v = gamma_fg(M, w)
    out = {"gammaFg": v.value, "mu": v.mu, "infinite": v.infinite, "window": [-w, w],
           "cones": [{"level": i, "vertex": c} for i, c in sorted(v.cones.items())]}
    if v.witness is not None:
        i, n, d = v.witness
        out["witness"] = {"level": i, "degree": n, "dimension": d}
    return out, [WINDOW_RELATIVE]


def cmd_veronese_depth(M, args, w):
    r = M.ring.degree_matrix.r
    a = _check_vector("a", args.a, r, 1)
    b = _check_vector("b", args.b, r, 0) if args.b is not None else (0,) * r
    return {"a": a, "b": b, "veroneseDepth": veronese_depth(M, a, b, w), "window": [-w, w]}, [WINDOW_RELATIVE]


def cmd_vad(M, args, w):
    return {"vad": vad_estimate(M, window=w), "window": [-w, w],
            "samples": "a in [1,3]^r, b in [0,2]^r, zero transforms skipped"}, [WINDOW_RELATIVE]


MODULE_COMMANDS = {
    "hilbert": cmd_hilbert,
    "resolve": cmd_resolve,
    "depth": cmd_depth,
    "lc-table": cmd_lc_table,
    "gdepth": cmd_gdepth,
    "gamma-fg": cmd_gamma_fg,
    "veronese-depth": cmd_veronese_depth,
    "vad": cmd_vad,
}


def cmd_rees_depth(parsed, args):
    ideals = parsed.ideals
    if not ideals:
        raise InputError("rees-depth needs at least one [ideal] section")
    r = len(ideals)
    a = _check_vector("a", args.a, r, 1) if args.a is not None else (1,) * r
    b = _check_vector("b", args.b, r, 0) if args.b is not None else (0,) * r
    pres = rees_build(ideals, args.relation_cap, powers=a, twist=b)
    depth = rees_depth(pres) if a == (1,) * r and not any(b) else rees_veronese_depth(ideals, a, b, args.relation_cap)
    result = {"ideals": [n or f"ideal {k + 1}" for k, n in enumerate(parsed.ideal_names)], "a": a, "b": b,
              "depth": depth, "dimension": pres.ring.q, "relations": len(pres.relations),
              "relationCap": pres.relation_cap, "fidelityWeight": pres.fidelity_weight}
    return [result], [f"Hilbert fidelity checked up to weight {pres.fidelity_weight}"]


# -- driver ------------------------------------------------------------------------------------

def run(args):
    """(envelope, exit code) for parsed arguments."""
    parameters = {"window": args.window, "powerCap": args.power_cap, "relationCap": args.relation_cap,
                  "field": args.field or "q"}
    if args.a is not None:
        parameters["a"] = args.a
    if args.b is not None:
        parameters["b"] = args.b
    start = time.perf_counter()
    code = EXIT_OK
    if args.command == "verify":
        if not args.suite:
            raise InputError("--command verify needs --suite")
        parameters["suite"] = args.suite
        options = {"window": args.window, "power_cap": args.power_cap, "relation_cap": args.relation_cap,
                   "field": args.field}
        results = run_suite(args.suite, args.input, options, jobs=args.jobs)
        if not any(r["status"] != "skipped" for r in results):
            raise InputError(f"no corpus cases found under {args.input}")
        status = suite_status(results)
        code = {"pass": EXIT_OK, "fail": EXIT_FAILED, "inconclusive": EXIT_INCONCLUSIVE}[status]
        qualifiers = [f"suite {status}"]
    else:
        parsed = parse_input(args.input, args.field)
        if args.command == "rees-depth":
            results, qualifiers = cmd_rees_depth(parsed, args)
        else:
            if not parsed.modules:
                raise InputError("the input has no [module] section")
            w = args.window or DEFAULT_WINDOWS.get(args.command, 4)
            parameters["window"] = w if args.command in DEFAULT_WINDOWS else args.window
            results, qualifiers = [], []
            for k, M in enumerate(parsed.modules):
                out, quals = MODULE_COMMANDS[args.command](M, args, w)
                results.append({"module": _label(M, k), **out})
                qualifiers.extend(q for q in quals if q not in qualifiers)
    wall = time.perf_counter() - start if args.timing else None
    env = envelope(args.command, args.input, digest(args.input), parameters, results, qualifiers, wall)
    return env, code


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        env, code = run(args)
    except (ParseError, InputError, UnknownSuite, PreconditionFailed, FileNotFoundError,
            IsADirectoryError, NotADirectoryError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except INCONCLUSIVE_ERRORS as exc:
        print(f"inconclusive: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    data = emit(env, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
