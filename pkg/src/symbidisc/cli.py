"""Command-line interface: ``symbidisc {member,map,orbit,levi,verify}``.

Exit codes: 0 inside/pass, 1 outside/fail, 2 boundary, 64 usage,
65 domain or parameter error, 74 I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import os
import re
import sys
import tempfile

import numpy as np

from symbidisc import biholomorphisms as bh
from symbidisc.complex_core import DEFAULT, BranchCutError, DegenerateError, DomainError, ToleranceConfig, Tri
from symbidisc.isaev_domains import (
    IsaevParams,
    ProjPoint3,
    membership_d1,
    membership_d1_all,
    membership_d2_1,
    membership_dc,
    membership_ds_dst,
    membership_omega1,
    proj_residual,
)
from symbidisc.levi_analysis import leaf_point, levi_value
from symbidisc.symmetrized_bidisc import (
    leaf_index,
    membership_g,
    membership_g_all,
    membership_gc,
    rng_for,
    sample_disc,
    sym,
    sym_inverse,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BOUNDARY = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_IO = 74

ORBIT_HEADER = ("s_re", "s_im", "p_re", "p_im", "leaf_a")
ORBIT_STREAM = 2
TRI_EXIT = {Tri.INSIDE: EXIT_OK, Tri.OUTSIDE: EXIT_FAIL, Tri.BOUNDARY: EXIT_BOUNDARY}

DOMAINS = ("G", "D1", "Ds", "Dst", "Dc", "Gc", "Omega1", "D21")
MAPS = ("F", "Finv", "H", "Hinv", "J", "Jinv", "sym", "syminv", "symOmega1", "symD21")
_ARITY = {"D21": 4, "Jinv": 4, "symD21": 4}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_complex(token: str) -> complex:
    """Accept ``a+bi``, ``bi``, ``i``, ``-i`` or a plain real; ``j`` works as well."""
    t = token.strip().replace(" ", "").replace("j", "i")
    if not t or not re.fullmatch(r"[0-9eE.+\-i]+", t):
        raise UsageError(f"cannot parse {token!r} as a complex number")
    t = re.sub(r"(^|[+\-])i", r"\g<1>1i", t).replace("i", "j")
    try:
        z = complex(t)
    except ValueError:
        raise UsageError(f"cannot parse {token!r} as a complex number") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise UsageError(f"non-finite coordinate {token!r}")
    return z


def parse_point(tokens, arity: int) -> list[complex]:
    """``arity`` complex tokens, or ``2 * arity`` reals taken in (re, im) pairs."""
    if len(tokens) == arity:
        return [parse_complex(t) for t in tokens]
    if len(tokens) == 2 * arity:
        vals = [parse_complex(t) for t in tokens]
        if any(v.imag != 0 for v in vals):
            raise UsageError("paired-real syntax takes real numbers only")
        return [complex(vals[2 * k].real, vals[2 * k + 1].real) for k in range(arity)]
    raise UsageError(f"expected {arity} complex coordinates (or {2 * arity} reals), got {len(tokens)}")


# -- output -----------------------------------------------------------------

def _flat(report: dict) -> dict:
    out = {}
    for key, val in report.items():
        if isinstance(val, (complex, np.complexfloating)):
            out[f"{key}_re"] = float(val.real)
            out[f"{key}_im"] = float(val.imag)
        elif isinstance(val, dict):
            out.update({f"{key}_{k}": v for k, v in _flat(val).items()})
        elif isinstance(val, (np.floating, np.integer, np.bool_)):
            out[key] = val.item()
        else:
            out[key] = val
    return out


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


def emit(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    flat = _flat(report)
    if fmt == "json":
        stream.write(json.dumps(flat, sort_keys=False) + "\n")
    elif fmt == "csv":
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(flat.keys())
        w.writerow(_fmt(v) for v in flat.values())
    else:
        for k, v in flat.items():
            stream.write(f"{k}: {_fmt(v)}\n")


# -- commands ---------------------------------------------------------------

def _cfg(args) -> ToleranceConfig:
    try:
        return ToleranceConfig(
            eq_tol=args.eq_tol if args.eq_tol is not None else DEFAULT.eq_tol,
            boundary_band=args.boundary_band if args.boundary_band is not None else DEFAULT.boundary_band,
            fd_step=args.fd_step if args.fd_step is not None else DEFAULT.fd_step,
        )
    except ValueError as exc:
        raise DomainError(str(exc)) from None


def cmd_member(args) -> int:
    cfg = _cfg(args)
    domain = args.domain
    pt = parse_point(args.coords, _ARITY.get(domain, 2))
    report = {"domain": domain}
    breakdown = None
    if domain in ("G", "D1"):
        single = membership_g if domain == "G" else membership_d1
        everything = membership_g_all if domain == "G" else membership_d1_all
        if args.condition is not None:
            if args.condition not in range(1, 10):
                raise DomainError(f"condition must be 1..9, got {args.condition}")
            tri, margin = single(pt[0], pt[1], args.condition, cfg)
            report["condition"] = args.condition
        else:
            breakdown = everything(pt[0], pt[1], cfg)
            tri, margin = breakdown[1]
    elif domain == "Gc":
        tri, margin = membership_gc(pt[0], pt[1], _need(args.c, "--c"), cfg)
        report["c"] = args.c
    elif domain == "Dc":
        tri, margin = membership_dc(pt[0], pt[1], _need(args.c, "--c"), cfg)
        report["c"] = args.c
    elif domain in ("Ds", "Dst"):
        t = _need(args.t, "--t") if domain == "Dst" else None
        params = IsaevParams(_need(args.s, "--s"), t)
        tri, margin = membership_ds_dst(pt[0], pt[1], params, cfg)
        report["s"] = params.s
        if t is not None:
            report["t"] = t
    elif domain == "Omega1":
        tri, margin = membership_omega1(pt[0], pt[1], cfg)
    else:
        tri, margin = membership_d2_1(ProjPoint3(*pt), cfg)
    report.update({f"x{k}": z for k, z in enumerate(pt)})
    report["tri"] = Tri(tri).name
    report["margin"] = float(margin)
    if breakdown is not None:
        report["conditions"] = {
            str(k): f"{Tri(t).name}:{'%.17g' % float(m)}" for k, (t, m) in breakdown.items()
        }
    emit(report, args.format)
    return TRI_EXIT[Tri(tri)]


def _need(value, flag):
    if value is None:
        raise DomainError(f"{flag} is required for this domain")
    return value


def _apply_map(name, pt, cfg):
    if name == "F":
        return list(bh.map_F(pt[0], pt[1], cfg))
    if name == "Finv":
        return list(bh.map_F_inv(pt[0], pt[1], cfg))
    if name == "H":
        return list(bh.map_H(pt[0], pt[1], cfg))
    if name == "Hinv":
        return list(bh.map_H_inv(pt[0], pt[1], cfg))
    if name == "J":
        return list(bh.map_J(pt[0], pt[1], cfg))
    if name == "Jinv":
        return list(bh.map_J_inv(ProjPoint3(*pt), cfg))
    if name == "sym":
        return list(sym(pt[0], pt[1]))
    if name == "syminv":
        return list(sym_inverse(pt[0], pt[1], cfg))
    if name == "symOmega1":
        return list(bh.sym_omega1(pt[0], pt[1], cfg))
    return list(bh.sym_d2_1(ProjPoint3(*pt), cfg))


_INVERSE = {"F": "Finv", "Finv": "F", "H": "Hinv", "Hinv": "H", "J": "Jinv", "Jinv": "J", "sym": "syminv", "syminv": "sym"}


def _roundtrip_residual(name, pt, image, cfg) -> float:
    if name not in _INVERSE:
        raise DomainError(f"{name} is 2-to-1 and has no inverse to round-trip through")
    back = [complex(z) for z in _apply_map(_INVERSE[name], image, cfg)]
    if name == "Jinv":
        return proj_residual(ProjPoint3(*back), ProjPoint3(*pt))
    gaps = [max(abs(b - x) / (1 + max(abs(b), abs(x))) for b, x in zip(back, pt))]
    if name == "sym":
        gaps.append(max(abs(b - x) / (1 + max(abs(b), abs(x))) for b, x in zip(back[::-1], pt)))
    return min(gaps)


def cmd_map(args) -> int:
    cfg = _cfg(args)
    pt = parse_point(args.coords, _ARITY.get(args.name, 2))
    image = [complex(z) for z in _apply_map(args.name, pt, cfg)]
    report = {"map": args.name}
    report.update({f"x{k}": z for k, z in enumerate(pt)})
    report.update({f"y{k}": z for k, z in enumerate(image)})
    if args.roundtrip:
        report["roundtrip_residual"] = float(_roundtrip_residual(args.name, pt, image, cfg))
    emit(report, args.format)
    return EXIT_OK


def orbit_points(a: float, n: int, seed: int):
    """``n`` seeded points of the leaf ``a``: ``H_phi(a, 0)`` for random phi, ``(2z, z^2)`` when ``a = 0``."""
    rng = rng_for(seed, ORBIT_STREAM)
    if a == 0:
        # 26-bit coordinates make z*z exact, so the rows lie exactly on the royal variety
        z = sample_disc(rng, n)
        z = (np.trunc(z.real * 2.0**26) + 1j * np.trunc(z.imag * 2.0**26)) / 2.0**26
        return 2 * z, z * z
    theta = rng.uniform(-math.pi, math.pi, n)
    alpha = sample_disc(rng, n, 0.95)
    return sym(*leaf_point(a, theta, alpha))


def write_orbit_csv(stream, s, p, a: float) -> None:
    stream.write(",".join(ORBIT_HEADER) + "\n")
    for si, pi in zip(s, p):
        stream.write("%.17g,%.17g,%.17g,%.17g,%.17g\n" % (si.real, si.imag, pi.real, pi.imag, a))


def cmd_orbit(args) -> int:
    a, n = args.a, args.n
    if not 0 <= a < 1:
        raise DomainError(f"leaf index must lie in [0, 1), got {a}")
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    s, p = orbit_points(a, n, args.seed)
    err = float(np.max(np.abs(leaf_index(s, p, check=False) - a)))
    if err > 1e-9:
        print(f"leaf check failed: max |q - a| = {err!r}", file=sys.stderr)
        return EXIT_FAIL
    if args.out == "-":
        write_orbit_csv(sys.stdout, s, p, a)
        summary_stream = sys.stderr
    else:
        with open(args.out, "w", encoding="ascii", newline="") as fh:
            write_orbit_csv(fh, s, p, a)
        summary_stream = sys.stdout
    emit({"rows": n, "leaf_a": a, "seed": args.seed, "max_leaf_error": err, "out": args.out},
         args.format, summary_stream)
    return EXIT_OK


def cmd_levi(args) -> int:
    cfg = _cfg(args)
    a = args.a
    alpha = parse_complex(args.alpha)
    if not 0 < a < 1:
        raise DomainError(f"leaf index must lie in (0, 1), got {a}")
    if not abs(alpha) < 1:
        raise DomainError(f"|alpha| must be < 1, got {abs(alpha)}")
    z1, z2 = leaf_point(a, args.theta, alpha)
    rep = levi_value(z1, z2, a, cfg)
    report = rep.to_dict()
    report["agreement"] = abs(rep.levi_value - rep.closed_form_value)
    emit(report, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    from symbidisc import verify_harness as vh

    if args.suite != "all" and args.suite not in vh.REGISTRY:
        raise UsageError(f"unknown suite {args.suite!r}; known: all, {', '.join(vh.suite_names())}")
    if not args.scale > 0:
        raise UsageError("--scale must be positive")
    cfg = _cfg(args)
    names = vh.suite_names() if args.suite == "all" else [args.suite]
    out = open(args.out, "w", encoding="utf-8") if args.out else None
    ok = True
    try:
        for name in names:
            n = args.n if args.n is not None else vh.scaled_n(name, args.scale)
            result = vh.run_suite(name, n, args.seed, cfg)
            ok &= result.passed
            line = result.to_json(include_elapsed=args.timing) + "\n"
            (out or sys.stdout).write(line)
            if out:
                print(f"{name}: {'pass' if result.passed else 'FAIL'}", file=sys.stderr)
    finally:
        if out:
            out.close()
    return EXIT_OK if ok else EXIT_FAIL


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "plain"), default="plain")
    common.add_argument("--eq-tol", type=float)
    common.add_argument("--boundary-band", type=float)
    common.add_argument("--fd-step", type=float)

    parser = _Parser(prog="symbidisc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("member", parents=[common], help="domain membership")
    p.add_argument("domain", choices=DOMAINS)
    p.add_argument("coords", nargs="+")
    p.add_argument("--condition", type=int)
    p.add_argument("--c", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--t", type=float)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("map", parents=[common], help="evaluate a map")
    p.add_argument("name", choices=MAPS)
    p.add_argument("coords", nargs="+")
    p.add_argument("--roundtrip", action="store_true")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("orbit", parents=[common], help="export seeded leaf points as CSV")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("levi", parents=[common], help="Levi report at (phi(a), phi(0))")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--alpha", default="0")
    p.set_defaults(func=cmd_levi)

    p = sub.add_parser("verify", parents=[common], help="run property suites")
    p.add_argument("suite")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int)
    p.add_argument("--out")
    p.add_argument("--timing", action="store_true", help="include elapsed seconds (breaks byte reproducibility)")
    p.set_defaults(func=cmd_verify)
    return parser


def _shield_negatives(argv):
    # argparse reads "-i" or "-1e-3" as options; a leading space keeps them positional
    out = []
    for tok in argv:
        if re.fullmatch(r"-[0-9.ij][0-9eE.+\-ij]*", tok):
            out.append(" " + tok)
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_shield_negatives(argv))
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, DegenerateError, BranchCutError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


# -- contract self-check used by the verification harness ---------------------

_FLOAT_FIELD = re.compile(r"-?(?:\d+(?:\.\d*)?|\.\d+)(?:e[+-]\d+)?|-?inf|nan")


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue()


def contract_failures(seed: int = 0) -> list[str]:
    """Exercise the exit-code and output contracts in-process; returns what broke."""
    failures = []
    expected = [
        (["member", "G", "0", "0"], EXIT_OK),
        (["member", "G", "3", "0"], EXIT_FAIL),
        (["member", "G", "2", "1"], EXIT_BOUNDARY),
        (["member", "D1", "i", "0"], EXIT_OK),
        (["member", "Gc", "0", "0", "--c", "0.5"], EXIT_DATA),
        (["member", "G", "0"], EXIT_USAGE),
        (["member", "Nowhere", "0", "0"], EXIT_USAGE),
        (["map", "Finv", "-i", "0"], EXIT_DATA),
        (["verify", "no-such-suite"], EXIT_USAGE),
    ]
    for argv, code in expected:
        got, _ = _run(argv)
        if got != code:
            failures.append(f"{' '.join(argv)}: exit {got}, expected {code}")
    code, text = _run(["map", "F", "0", "0", "--format", "json"])
    try:
        rec = json.loads(text)
        if code != EXIT_OK or abs(complex(rec["y0_re"], rec["y0_im"]) - 1j) > 1e-15:
            failures.append("map F json report")
    except (ValueError, KeyError):
        failures.append("map F json does not parse")
    with tempfile.TemporaryDirectory() as tmp:
        paths = [os.path.join(tmp, f"orbit{k}.csv") for k in range(2)]
        for path in paths:
            code, _ = _run(["orbit", "--a", "0.5", "--n", "50", "--seed", str(seed), "--out", path])
            if code != EXIT_OK:
                failures.append(f"orbit exit {code}")
        blobs = []
        for path in paths:
            with open(path, "rb") as fh:
                blobs.append(fh.read())
        if blobs[0] != blobs[1]:
            failures.append("orbit CSV not reproducible")
        lines = blobs[0].decode("ascii").splitlines()
        if lines[0] != ",".join(ORBIT_HEADER) or len(lines) != 51:
            failures.append("orbit CSV header or row count")
        for line in lines[1:]:
            fields = line.split(",")
            if len(fields) != 5 or not all(_FLOAT_FIELD.fullmatch(f) for f in fields):
                failures.append(f"orbit CSV row {line!r}")
                break
            if any("%.17g" % float(f) != f for f in fields):
                failures.append(f"orbit CSV precision {line!r}")
                break
        code, _ = _run(["orbit", "--a", "0.5", "--n", "5", "--out", os.path.join(tmp, "missing", "x.csv")])
        if code != EXIT_IO:
            failures.append(f"orbit to a missing directory: exit {code}")
    return failures


if __name__ == "__main__":
    sys.exit(main())
