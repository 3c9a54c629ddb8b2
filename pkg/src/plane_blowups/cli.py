"""Command-line front end.

Every run prints one JSON report on stdout. Rationals are strings, keys are
sorted and nothing time-dependent goes into the report, so the same inputs
and seed give byte-identical output. Timing and progress go to stderr.

Exit codes: 0 for any mathematical answer (including "no"), 2 for bad input,
3 when two independent computations disagree.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from fractions import Fraction

from . import cones, fatpoints, lattice, seshadri
from .cones import UnsupportedConfiguration
from .fatpoints import FatPointError, FatPointScheme
from .lattice import DivisorClass, LatticeContext, LatticeError
from .linalg import DEFAULT_PRIME, FieldError, parse_field
from .seshadri import SeshadriError
from .surds import Surd

log = logging.getLogger("plane_blowups")

EXIT_OK, EXIT_INPUT, EXIT_INCONSISTENT = 0, 2, 3


class InputError(ValueError):
    code = "bad_input"


class Inconsistency(RuntimeError):
    pass


def _enc(x):
    if isinstance(x, DivisorClass):
        return x.to_json()
    if isinstance(x, (Fraction, Surd)):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _enc(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_enc(v) for v in x]
    if hasattr(x, "to_json"):
        return _enc(x.to_json())
    return x


def _parse_class(text: str, r: int | None) -> DivisorClass:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"class {text!r} is not JSON: {exc.msg}") from None
    if not isinstance(data, list) or not data:
        raise InputError("a class is a JSON list [d, m_1, ..., m_r]")
    c = DivisorClass.from_json([str(x) for x in data])
    if r is not None and c.r != r:
        raise InputError(f"class has {c.r} multiplicities, expected {r}")
    return c


def _parse_classes(text: str | None, r: int):
    if text is None:
        return None
    data = json.loads(text)
    if not isinstance(data, list) or not all(isinstance(v, list) for v in data):
        raise InputError("expected a JSON list of classes")
    return [_parse_class(json.dumps(v), r) for v in data]


def _tag(args):
    t = args.tag.replace("-", "_")
    if t == "generic" and args.r is not None and args.r >= 9:
        return ("generic", args.r)
    return cones.parse_tag(t, args.r)


def _scheme(args) -> FatPointScheme:
    fld = args.field
    if args.config:
        z = fatpoints.load_config(args.config)
    elif args.random_points:
        z = fatpoints.random_points(args.random_points, args.n, fld or {"Fp": DEFAULT_PRIME}, args.seed)
    elif args.coordinate_points:
        z = fatpoints.coordinate_points(args.n, args.coordinate_points, fld)
    else:
        raise InputError("give --config, --random-points or --coordinate-points")
    return z


# handlers: each returns a results dict


def cmd_lattice(args):
    ctx = LatticeContext(args.r)
    op = args.op
    if op == "canonical":
        return {"K": ctx.canonical()}
    if op == "pair":
        return {"value": _parse_class(args.a, args.r).dot(_parse_class(args.b, args.r))}
    c = _parse_class(args.c or args.a, args.r)
    if op == "genus":
        return {"genus": lattice.adjunction_genus(c, ctx)}
    if op == "chi":
        return {"chi": lattice.riemann_roch_chi(c, ctx)}
    if op == "average":
        return {"average": lattice.average_class(c, ctx)}
    if op == "abnormal":
        return {"abnormal": lattice.is_abnormal(c, ctx)}
    raise InputError(f"unknown lattice operation {op}")  # pragma: no cover


def cmd_cone(args):
    tag = _tag(args)
    if isinstance(tag, tuple):
        raise UnsupportedConfiguration("the effective cone is not finitely generated for 9 or more general points")
    if args.op == "gens":
        desc = cones.cone_generators(tag)
        return {
            "tag": str(tag),
            "eff_generators": list(desc.eff_generators),
            "nef_generators": list(desc.nef_generators),
            "nef_complete": desc.nef_complete,
        }
    c = _parse_class(args.c, tag.r)
    if args.op == "nef":
        out = {"nef": cones.is_nef(c, tag)}
        if not out["nef"]:
            bad = [g for g in cones.cone_generators(tag).eff_generators if c.dot(g) < 0]
            out["witness"] = bad[0] if bad else None
        return out
    cert = cones.decompose_effective(c, tag)
    return {"effective": cert is not None,
            "decomposition": None if cert is None else [[g, k] for g, k in cert]}


def cmd_seshadri(args):
    op = args.op
    if op == "exact":
        res = seshadri.epsilon_exact(_tag(args))
        out = res.to_json()
        out["epsilon"] = out.pop("value")
        if out["epsilon"] is None:
            del out["epsilon"]
        return out
    if op == "bound":
        return seshadri.epsilon_lower_unloading(args.n, args.search_bound).to_json()
    if op == "nagata":
        return cmd_nagata(args)
    return cmd_prove_nef(args)


def cmd_prove_nef(args):
    f = _parse_class(args.F, args.r)
    r = f.r
    proof = seshadri.prove_nef(
        f, r,
        hints=_parse_classes(args.hints, r),
        spanning_nef=_parse_classes(args.spanning, r),
        s=args.s,
        cap_classes=_parse_classes(args.cap, r) or (),
        sides=json.loads(args.sides) if args.sides else None,
        trials=args.trials,
        seed=args.seed,
        p=_prime(args),
    )
    return proof.to_json()


def cmd_nagata(args):
    return seshadri.nagata_search(args.r, args.degree_bound, args.trials, args.seed, _prime(args)).to_json()


def _prime(args) -> int:
    fld = parse_field(args.field) if args.field else None
    return DEFAULT_PRIME if fld is None or fld.characteristic == 0 else fld.p


def cmd_gamma(args):
    if args.tag:
        return seshadri.gamma_exact(_tag(args)).to_json()
    z = _scheme(args)
    est = fatpoints.waldschmidt_estimate(z, args.m_max, _epsilon(args))
    return {"lower": est.lower, "upper": est.upper, "gamma": est.value,
            "lower_sources": list(est.lower_sources),
            "sequence": [[m, d, q] for m, d, q in est.sequence]}


def cmd_alpha(args):
    z = _scheme(args)
    ms = range(1, args.m + 1) if args.all else [args.m]
    return {"alpha": {str(m): fatpoints.alpha_symbolic(z, m) for m in ms}}


def cmd_reg(args):
    z = _scheme(args)
    reg = fatpoints.regularity(z)
    return {"regularity": reg,
            "hilbert_function": [fatpoints.hilbert_function(z, t) for t in range(reg + 2)]}


def cmd_containment(args):
    z = _scheme(args)
    res = fatpoints.contains_symbolic_in_power(z, args.m, args.r)
    bh = fatpoints.bh_criteria(z, args.m, args.r)
    out = {"contained": res.contained, "rule": res.rule, "m": args.m, "r": args.r,
           "degrees_checked": list(res.degrees_checked), "failing_degree": res.failing_degree,
           "bh_criteria": {"verdict": bh.verdict, "alpha_m": bh.alpha_m, "alpha": bh.alpha,
                           "reg": bh.reg, "alpha_equals_reg": bh.alpha_equals_reg}}
    if (bh.verdict == "fails_by_alpha" and res.contained) or (bh.verdict == "holds_by_reg" and not res.contained):
        raise Inconsistency(f"direct check says contained={res.contained}, criteria say {bh.verdict}")
    return out


def cmd_resurgence(args):
    z = _scheme(args)
    est = fatpoints.waldschmidt_estimate(z, args.m_max, _epsilon(args))
    lo, hi = fatpoints.resurgence_bounds(z, (est.lower, est.upper))
    return {"lower": lo, "upper": hi, "rho": lo if lo == hi else None,
            "gamma_interval": [est.lower, est.upper]}


def _epsilon(args):
    if args.epsilon is None:
        return None
    try:
        eps = Fraction(args.epsilon)
    except ValueError:
        raise InputError(f"epsilon {args.epsilon!r} is not a rational number") from None
    if eps <= 0:
        raise InputError("epsilon must be positive")
    return eps


def cmd_frobenius(args):
    z = _scheme(args)
    n = z.n
    return {"q": args.q, "m": args.q * n - (n - 1), "contained": fatpoints.frobenius_containment_check(z, args.q)}


# parser


def _class_flags(p):
    p.add_argument("--r", type=int, default=None, help="number of points")


def _scheme_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--config", help="point-configuration JSON file")
    g.add_argument("--random-points", type=int, metavar="N", help="N random points over --field")
    g.add_argument("--coordinate-points", type=int, metavar="N", help="first N coordinate vertices")
    p.add_argument("--n", type=int, default=2, help="ambient dimension for generated points")


def _nef_flags(p):
    p.add_argument("--F", required=True, help="class as [d, m_1, ..., m_r]")
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--hints", help="JSON list of known prime classes")
    p.add_argument("--spanning", help="JSON list of nef classes bounding the search")
    p.add_argument("--cap", help="JSON list of nef classes used only to cap multiplicities")
    p.add_argument("--s", type=int, default=None, help="multiple of F known to be effective")
    p.add_argument("--sides", help='JSON list of "both", "lower" or "upper", one per spanning class')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--field", default=None, help='"Q", "Fp:p" or a prime')
    common.add_argument("--trials", type=int, default=3)
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="plane-blowups", parents=[common],
                                 description="Cones, Seshadri constants and fat-point invariants for blow-ups of the plane.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", parents=[common])
    p.add_argument("op", choices=["pair", "canonical", "genus", "chi", "average", "abnormal"])
    p.add_argument("--r", type=int, required=True, help="number of points")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--c")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("cone", parents=[common])
    p.add_argument("op", choices=["gens", "nef", "eff"])
    p.add_argument("--tag", required=True)
    _class_flags(p)
    p.add_argument("--c")
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("seshadri", parents=[common])
    ss = p.add_subparsers(dest="op", required=True)
    q = ss.add_parser("exact", parents=[common])
    q.add_argument("--tag", required=True)
    _class_flags(q)
    q = ss.add_parser("bound", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--search-bound", type=int, default=10)
    q = ss.add_parser("prove-nef", parents=[common])
    _nef_flags(q)
    q = ss.add_parser("nagata", parents=[common])
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--degree-bound", type=int, default=20)
    p.set_defaults(func=cmd_seshadri)

    p = sub.add_parser("prove-nef", parents=[common])
    _nef_flags(p)
    p.set_defaults(func=cmd_prove_nef)

    p = sub.add_parser("nagata", parents=[common])
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--degree-bound", type=int, default=20)
    p.set_defaults(func=cmd_nagata)

    p = sub.add_parser("gamma", parents=[common])
    p.add_argument("--tag")
    _class_flags(p)
    _scheme_flags(p)
    p.add_argument("--m-max", type=int, default=6)
    p.add_argument("--epsilon", help="certified Seshadri constant of the points, as a rational")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("alpha", parents=[common])
    _scheme_flags(p)
    p.add_argument("-m", type=int, default=1)
    p.add_argument("--all", action="store_true", help="report alpha for 1..m")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("reg", parents=[common])
    _scheme_flags(p)
    p.set_defaults(func=cmd_reg)

    p = sub.add_parser("containment", parents=[common])
    _scheme_flags(p)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.set_defaults(func=cmd_containment)

    p = sub.add_parser("resurgence", parents=[common])
    _scheme_flags(p)
    p.add_argument("--m-max", type=int, default=6)
    p.add_argument("--epsilon", help="certified Seshadri constant of the points, as a rational")
    p.set_defaults(func=cmd_resurgence)

    p = sub.add_parser("frobenius", parents=[common])
    _scheme_flags(p)
    p.add_argument("-q", type=int, required=True)
    p.set_defaults(func=cmd_frobenius)
    return ap


def _digest(args, argv) -> str:
    h = hashlib.sha256(json.dumps(argv).encode())
    cfg = getattr(args, "config", None)
    if cfg:
        with open(cfg, "rb") as fh:
            h.update(fh.read())
    return h.hexdigest()


def _emit(report, out) -> None:
    out.write(json.dumps(_enc(report), sort_keys=True, indent=2) + "\n")


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    report = {"command": argv, "seed": args.seed}
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        report["inputs_digest"] = _digest(args, argv)
        report["results"] = args.func(args)
    except Inconsistency as exc:
        report["error"] = {"code": "inconsistency", "message": str(exc)}
        code = EXIT_INCONSISTENT
    except UnsupportedConfiguration as exc:
        report["error"] = {"code": "unsupported_configuration", "message": str(exc)}
        code = EXIT_INPUT
    except (InputError, LatticeError, SeshadriError, FatPointError, FieldError, OSError,
            json.JSONDecodeError, ValueError) as exc:
        report["error"] = {"code": type(exc).__name__, "message": str(exc)}
        code = EXIT_INPUT
    print(f"{args.command}: {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    _emit(report, out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
