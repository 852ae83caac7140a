"""Command-line front end.

Exit status: 0 success, 1 mathematical refusal, 2 malformed input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import category_a as ca
from . import dg_layer as dg
from . import diagram_sa as ds
from . import homotopy_calc as hc
from . import monoidal as mo
from .errors import MalformedInput, NotEffective, NotInA, WindowTooSmall


class Refused(Exception):
    """A computation finished with a negative mathematical verdict."""


# --------------------------------------------------------------------------
# inputs


def parse_window(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        lo, hi = int(a), int(b)
    except ValueError as exc:
        raise MalformedInput(f"window must look like a:b, got {text!r}", "--window") from exc
    if lo > hi:
        raise MalformedInput("window is empty", "--window")
    return lo, hi


def parse_nu(spec: str) -> dict[int, int]:
    nu = {}
    for part in filter(None, spec.split(",")):
        try:
            n, v = part.split("=")
            nu[int(n)] = int(v)
        except ValueError as exc:
            raise MalformedInput(f"bad sphere entry {part!r} (expected n=v)", "sphere") from exc
    return nu


def _load_json(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise MalformedInput(f"no such file or built-in name: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"line {exc.lineno} column {exc.colno}: {exc.msg}", path) from exc


def resolve_object(name: str) -> ca.EffObj:
    """Built-in names S0, sphere:1=1,3=-2, sigma:n, orbit:n, or a JSON file."""
    if name == "S0":
        return ca.unit()
    if name.startswith("sphere:"):
        return ca.sphere(parse_nu(name[7:]))
    if name.startswith("sigma:"):
        return ca.sigma(_int(name[6:], name))
    if name.startswith("orbit:"):
        return hc.pi_A(hc.Orbit(_int(name[6:], name)))
    data = _load_json(name)
    if "carrier" in data:
        data = data["carrier"]
    return ca.obj_from_json(data)


def resolve_dg(name: str) -> dg.DGObj:
    if not Path(name).exists():
        return dg.DGObj(resolve_object(name))
    data = _load_json(name)
    x = ca.obj_from_json(data.get("carrier", data))
    if "d" not in data:
        return dg.DGObj(x)
    return dg.DGObj(x, ca.mor_from_json({"degree": -1, **data["d"]}, x, x))


def resolve_spectrum(name: str) -> hc.SpectrumExpr:
    if name == "S0":
        return hc.S0()
    if name.startswith("sigma:"):
        return hc.Sigma(_int(name[6:], name))
    if name.startswith("orbit:"):
        return hc.Orbit(_int(name[6:], name))
    return hc.parse_spectrum(name)


def _int(s: str, locus: str) -> int:
    try:
        return int(s)
    except ValueError as exc:
        raise MalformedInput(f"expected an integer, got {s!r}", locus) from exc


def unique_map(x: ca.EffObj, y: ca.EffObj) -> ca.Mor:
    basis = ca.hom_group(x, y, (0, 0), with_basis=True).basis[0]
    if len(basis) != 1:
        raise MalformedInput(f"expected a unique degree-0 map up to scalar, found {len(basis)}")
    return basis[0]


# --------------------------------------------------------------------------
# rendering


def render_cgvs(g: ca.CGVS) -> str:
    return "\n".join(f"{d:>4} | {g.render_degree(d)}" for d in g.degrees())


def emit(args, table: str, data) -> None:
    if args.output == "json":
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(table)


# --------------------------------------------------------------------------
# verbs


def cmd_normalize(args):
    x = resolve_object(args.obj).pruned()
    emit(args, ca.describe(x), ca.obj_to_json(x))


def cmd_tensor(args):
    x = mo.tensor(resolve_object(args.a), resolve_object(args.b)).pruned()
    emit(args, ca.describe(x), ca.obj_to_json(x))


def cmd_hom(args):
    g = ca.hom_group(resolve_object(args.a), resolve_object(args.b), args.window)
    emit(args, render_cgvs(g), g.to_json())


def cmd_ext(args):
    g = hc.ext1(resolve_object(args.a), resolve_object(args.b), args.window)
    emit(args, render_cgvs(g), g.to_json())


def cmd_dual(args):
    x = mo.dual(resolve_object(args.obj)).pruned()
    emit(args, ca.describe(x), ca.obj_to_json(x))


def cmd_is_dualizable(args):
    w = mo.is_dualizable(resolve_object(args.obj))
    if isinstance(w, mo.Refusal):
        emit(args, f"not dualizable: {w.reason} (component {w.component}, degree {w.degree})",
             {"dualizable": False, "reason": w.reason, "component": w.component, "degree": w.degree,
              "probes": w.probes})
        raise Refused()
    emit(args, f"dualizable; dual = {ca.describe(w.dual.pruned())}; triangle identities exact: {w.exact()}",
         {"dualizable": True, "dual": ca.obj_to_json(w.dual.pruned()), "exact": w.exact(),
          "window": list(w.window)})


def cmd_homology(args):
    H = dg.homology(resolve_dg(args.obj)).pruned()
    emit(args, ca.describe(H), ca.obj_to_json(H))


def cmd_cone(args):
    x, y = resolve_dg(args.src), resolve_dg(args.tgt)
    f = unique_map(x.carrier, y.carrier)
    c = dg.cone(dg.DGMor(x, y, f))
    H = dg.homology(c.obj).pruned()
    emit(args, f"H(cone) = {ca.describe(H)}", {"homology": ca.obj_to_json(H)})


def cmd_maps(args):
    t = hc.maps_table(resolve_spectrum(args.x), resolve_spectrum(args.y), args.window)
    emit(args, t.render(), t.to_json())


def cmd_pia(args):
    e = resolve_spectrum(args.x)
    parts = hc.pi_A_summands(e)
    lines = [f"pi_A({e}) has {len(parts)} summand(s):"] + [f"  {ca.describe(p)}" for p in parts]
    emit(args, "\n".join(lines), {"expr": str(e), "summands": [ca.obj_to_json(p) for p in parts]})


def cmd_gamma(args):
    if Path(args.diag).exists():
        D = ds.diag_from_json(_load_json(args.diag))
    else:
        D = ds.l_star(resolve_object(args.diag))
    G = ds.gamma(D).carrier.pruned()
    emit(args, ca.describe(G), ca.obj_to_json(G))


def cmd_verify_cofibre(args):
    x, y, z = resolve_object(args.src), resolve_object(args.tgt), resolve_object(args.expected)
    f = ds.l_star_mor(unique_map(x, y))
    v = ds.verify_cofibre(f, ds.l_star(z), args.window)
    emit(args, f"window {args.window[0]}:{args.window[1]}: " + ("pass" if v.ok else f"fail {v.mismatches}"),
         {"window": list(v.window), "ok": v.ok, "mismatches": [list(map(str, m)) for m in v.mismatches]})
    if not v.ok:
        raise Refused()


def cmd_demo(args):
    from . import demos
    results = demos.run(args.suite, random.Random(args.seed))
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}" for name, ok in results]
    emit(args, "\n".join(lines), [{"item": n, "pass": ok} for n, ok in results])
    if not all(ok for _, ok in results):
        raise Refused()


VERBS = {
    "normalize": (cmd_normalize, ["obj"]),
    "tensor": (cmd_tensor, ["a", "b"]),
    "hom": (cmd_hom, ["a", "b"]),
    "ext": (cmd_ext, ["a", "b"]),
    "dual": (cmd_dual, ["obj"]),
    "is-dualizable": (cmd_is_dualizable, ["obj"]),
    "homology": (cmd_homology, ["obj"]),
    "cone": (cmd_cone, ["src", "tgt"]),
    "maps": (cmd_maps, ["x", "y"]),
    "pia": (cmd_pia, ["x"]),
    "gamma": (cmd_gamma, ["diag"]),
    "verify-cofibre": (cmd_verify_cofibre, ["src", "tgt", "expected"]),
    "demo": (cmd_demo, ["suite"]),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", type=str, default="-10:10", help="degree window a:b (inclusive)")
    common.add_argument("--output", choices=["table", "json"], default="table")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    p = argparse.ArgumentParser(prog="torusalg", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="verb", required=True)
    for verb, (_, params) in VERBS.items():
        sp = sub.add_parser(verb, parents=[common])
        for name in params:
            if verb == "demo":
                sp.add_argument(name, choices=["cofibre", "duals", "kunneth", "adams"])
            else:
                sp.add_argument(name)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # argparse reads "-2:2" as an option; glue it to its flag
    for i in range(len(argv) - 1, 0, -1):
        if argv[i - 1] == "--window":
            argv[i - 1:i + 1] = [f"--window={argv[i]}"]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        args.window = parse_window(args.window)
        VERBS[args.verb][0](args)
        return 0
    except MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except WindowTooSmall as exc:
        s = exc.suggested
        print(f"refused: {exc}; try --window {s[0]}:{s[1]}" if s else f"refused: {exc}", file=sys.stderr)
        return 1
    except (NotInA, NotEffective) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    except Refused:
        return 1


if __name__ == "__main__":
    sys.exit(main())


def entry() -> None:
    sys.exit(main())
