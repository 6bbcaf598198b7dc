"""Command-line interface: ``s3killing <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import coords, decomposition, integrability, ksvariety, oracle, staeckel
from .errors import KillingError
from .jsonio import (act_from_json, act_to_json, diagonal_to_json, dumps, ks_from_json,
                     ks_to_json, read_json, sym4_from_json)
from .samplers import random_diagonal
from .tolerances import ToleranceConfig

EXIT_OK = 0
EXIT_NO = 1
EXIT_INPUT = 2
EXIT_USAGE = 64


@dataclass(frozen=True)
class RunConfig:
    tol: ToleranceConfig = ToleranceConfig()
    seed: int | None = None
    fmt: str = "json"
    method: integrability.Method = integrability.Method.INVARIANTS


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


def _floats(text: str, count: int):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers") from exc
    if len(vals) != count:
        raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers")
    return vals


def _emit(cfg: RunConfig, payload: dict, text: str | None = None):
    if cfg.fmt == "text" and text is not None:
        print(text)
    else:
        print(dumps(payload))


def _blocks_json(b):
    return {"Wplus": b.Wplus, "Wminus": b.Wminus, "Tpm": b.Tpm, "s": b.s}


def cmd_decompose(args, cfg):
    r = act_from_json(read_json(args.tensor))
    parts = decomposition.ricci_decompose(r)
    out = {"blocks": _blocks_json(decomposition.hodge_blocks(r)),
           "ricci": {"T": parts.T, "s": parts.s, "weyl_norm": parts.W.norm()},
           "aligned": decomposition.is_aligned(r, cfg.tol.eq),
           "diagonalisable": decomposition.is_diagonalisable(r, cfg.tol.eq)}
    if out["diagonalisable"]:
        d, pair = decomposition.diagonalise(r, cfg.tol)
        out["diagonal"] = diagonal_to_json(d)
        out["rotations"] = {"Uplus": pair.Uplus, "Uminus": pair.Uminus}
    _emit(cfg, out)
    return EXIT_OK


def cmd_check(args, cfg):
    r = act_from_json(read_json(args.tensor))
    method = integrability.Method(args.method) if args.method else cfg.method
    report = integrability.is_integrable(r, cfg.tol, method)
    _emit(cfg, report.as_dict(), f"integrable: {report.verdict}")
    return EXIT_OK if report.verdict else EXIT_NO


def cmd_classify(args, cfg):
    spec = coords.Spectrum.of(args.Lambda, cfg.tol.grouping)
    kind = coords.classify_spectrum(spec)
    if kind == coords.NEEDS_LINE_DATA:
        if args.s2_ricci is None:
            _emit(cfg, {"type": kind, "multiplicities": spec.multiplicities},
                  "needs line data: pass --s2-ricci")
            return EXIT_NO
        kind = coords.classify_s2_ricci(args.s2_ricci)
    label, stratum = coords.associahedron_label(kind)
    _emit(cfg, {"type": kind.title, "bracket": label, "stratum": stratum}, f"{kind.title} {label}")
    return EXIT_OK


def cmd_orbit(args, cfg):
    m = ks_from_json(read_json(args.ks))
    out = {"orbit_size": len(ksvariety.orbit(m)),
           "canonical_form": ks_to_json(ksvariety.canonical_form(m)),
           "stabilizer_size": ksvariety.stabilizer_size(m)}
    _emit(cfg, out)
    return EXIT_OK


def _line_json(line):
    return {"base": ks_to_json(line.base), "second": ks_to_json(line.second),
            "kernel": line.kernel, "degenerate": line.degenerate}


def cmd_line(args, cfg):
    line = ksvariety.staeckel_line(ks_from_json(read_json(args.ks)))
    out = _line_json(line)
    try:
        out["type"] = coords.classify_line(line).title
    except KillingError:
        pass
    _emit(cfg, out)
    return EXIT_OK


def cmd_staeckel(args, cfg):
    system = staeckel.staeckel_system(ks_from_json(read_json(args.ks)), args.s)
    out = {"generators": [diagonal_to_json(g) for g in system.generators],
           "line": _line_json(system.line),
           "smallest_singular_value": system.smallest_singular_value()}
    _emit(cfg, out)
    return EXIT_OK


def cmd_benenti(args, cfg):
    fam = staeckel.benenti_family(sym4_from_json(read_json(args.h)))
    r = staeckel.benenti_eval(fam, args.lam)
    out = act_to_json(r)
    out["spans_staeckel"] = staeckel.spans_staeckel(fam, cfg.tol.grouping)
    _emit(cfg, out)
    return EXIT_OK


def cmd_commute(args, cfg):
    a = act_from_json(read_json(args.a))
    b = act_from_json(read_json(args.b))
    res = staeckel.commute_general(a, b)
    ok = res < cfg.tol.eq
    _emit(cfg, {"commute": ok, "residual": res}, f"commute: {ok}")
    return EXIT_OK if ok else EXIT_NO


def cmd_coords(args, cfg):
    spec = coords.Spectrum.of(args.Lambda, cfg.tol.grouping)
    x = np.asarray(args.point, dtype=float)
    if abs(np.linalg.norm(x) - 1.0) > 1e-12:
        raise ValueError("point must lie on the unit sphere")
    ev = coords.eigenvalues_at(spec, x)
    _emit(cfg, {"lambda": list(ev.values), "constant": list(ev.constant), "boundary": ev.boundary})
    return EXIT_OK


def cmd_verify(args, cfg):
    r = act_from_json(read_json(args.tensor))
    rng = np.random.default_rng(args.seed)
    algebraic = integrability.is_integrable(r, cfg.tol).verdict
    floor = args.floor
    frames = []
    for _ in range(args.frames):
        fr = oracle.TangentFrame.random(rng)
        res = oracle.nijenhuis_residual(r, fr, args.step)
        v = fr.e[0]
        frames.append({"x": fr.x, "killing_eq": res.killing_eq, "tns": list(res.tns),
                       "conservation": oracle.geodesic_conservation(r, fr.x, v, 64)})
    worst = max(max(f["tns"]) for f in frames)
    if worst < floor:
        numeric = True
    elif worst > 10 * floor:
        numeric = False
    else:
        numeric = None
    killing_ok = all(f["killing_eq"] < 1e-7 and f["conservation"] < 1e-10 for f in frames)
    consistent = killing_ok and numeric == algebraic
    _emit(cfg, {"algebraic_verdict": algebraic, "numeric_verdict": numeric,
                "consistent": consistent, "frames": frames})
    return EXIT_OK if consistent else EXIT_NO


def cmd_gen(args, cfg):
    rng = np.random.default_rng(args.seed)
    for _ in range(args.count):
        d = random_diagonal(rng, on_quadric=args.on_quadric)
        r = d.act()
        if args.conjugate:
            r = decomposition.so_action(r, decomposition.RotationPair.random(rng))
        print(dumps(act_to_json(r)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="s3killing",
                description="Integrability and separation coordinates for Killing tensors on S^3.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, fmt="json", **kw):
        s = _add(name, **kw)
        s.add_argument("--tol", type=float, default=1e-10, help="zero threshold for residuals")
        s.add_argument("--grouping", type=float, default=1e-8,
                       help="relative tolerance for equal eigenvalues")
        s.add_argument("--format", choices=("json", "text"), default=fmt, dest="fmt")
        return s

    sub.add_parser = add_parser

    s = sub.add_parser("decompose", help="Hodge blocks, Ricci parts and diagonal form")
    s.add_argument("tensor", help="act-v1 or diagonal JSON file, or - for stdin")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("check", help="decide integrability (exit 0 yes, 1 no, 2 bad input)")
    s.add_argument("tensor")
    s.add_argument("--method", choices=[m.value for m in integrability.Method])
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("classify", fmt="text", help="separation type from the parameters of L")
    s.add_argument("--lambda", dest="Lambda", required=True, type=lambda t: _floats(t, 4),
                   metavar="a,b,c,d")
    s.add_argument("--s2-ricci", type=lambda t: _floats(t, 3), metavar="p,q,r",
                   help="Ricci eigenvalues of the S^2 factor for triple spectra")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("orbit", help="octahedral orbit of a KS-matrix")
    s.add_argument("ks")
    s.set_defaults(func=cmd_orbit)

    s = sub.add_parser("line", help="Staeckel line through a KS-matrix")
    s.add_argument("ks")
    s.set_defaults(func=cmd_line)

    s = sub.add_parser("staeckel", help="three commuting generators of the Staeckel system")
    s.add_argument("ks")
    s.add_argument("--s", type=float, default=0.0, help="scalar part given to the generators")
    s.set_defaults(func=cmd_staeckel)

    s = sub.add_parser("benenti", help="evaluate the Benenti family of a symmetric h")
    s.add_argument("h", help='{"sym4": [[...]]} file')
    s.add_argument("--lambda", dest="lam", type=float, required=True)
    s.set_defaults(func=cmd_benenti)

    s = sub.add_parser("commute", help="do two Killing tensors commute (exit 0 yes, 1 no)")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_commute)

    s = sub.add_parser("coords", help="eigenvalue coordinates of a sphere point")
    s.add_argument("--lambda", dest="Lambda", required=True, type=lambda t: _floats(t, 4),
                   metavar="a,b,c,d")
    s.add_argument("--point", required=True, type=lambda t: _floats(t, 4), metavar="x0,x1,x2,x3")
    s.set_defaults(func=cmd_coords)

    s = sub.add_parser("verify", help="finite-difference cross-check of the verdict")
    s.add_argument("tensor")
    s.add_argument("--frames", type=int, default=5)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--step", type=float, default=1e-5)
    s.add_argument("--floor", type=float, default=1e-6, help="torsion floor for 'zero'")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("gen", help="random valid curvature tensors, one JSON per line")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--on-quadric", action="store_true", help="force integrable samples")
    s.add_argument("--conjugate", action="store_true", help="apply a random rotation pair")
    s.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    cfg = RunConfig(tol=ToleranceConfig(eq=args.tol, grouping=args.grouping), fmt=args.fmt,
                    seed=getattr(args, "seed", None))
    try:
        return args.func(args, cfg)
    except (KillingError, ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"s3killing: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
