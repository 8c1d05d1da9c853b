"""Command-line front end.

Every subcommand prints one JSON report::

    {"core": {...}, "core_digest": "sha256:...", "timings": {...}}

``core`` holds the command echo, input digests, verdict, witnesses and
result; it is deterministic for identical inputs.  Exit codes: 0 positive
verdict, 1 negative verdict, 2 input or validation error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import metadata
from pathlib import Path

from . import closures, oracles
from .calibration import CalibrationError, calibrate
from .complexes import ModuleProfile, cohomology
from .corpus import stock_corpus
from .filtrations import FiltrationBySupports
from .koszul import ExceedsBound, prime_koszul, projective_dimension_probe
from .rings import RingDescriptor, UnsupportedOperation, ValidationError, is_regular
from .serialization import (JsonInputError, canonical_dumps, complex_from_json, complex_to_json,
                            digest, load_json, ring_from_json, tower_from_json)
from .spectrum import prime_from_json, prime_to_json

TOOL = "cotstr"


def _version() -> str:
    try:
        return metadata.version("cotstr")
    except metadata.PackageNotFoundError:
        return "0+unknown"


class _Ctx:
    def __init__(self, argv):
        self.argv = list(argv)
        self.inputs: dict = {}
        self.timings: dict = {}

    def load(self, path):
        obj, d = load_json(path)
        self.inputs[str(path)] = d
        return obj

    def load_dir(self, path) -> list[tuple[str, object]]:
        p = Path(path)
        if not p.is_dir():
            raise JsonInputError(str(p), "not a directory")
        return [(f.stem, self.load(f)) for f in sorted(p.glob("*.json"))]

    def timed(self, name, fn, *args, **kw):
        t = time.perf_counter()
        try:
            return fn(*args, **kw)
        finally:
            self.timings[name] = round(time.perf_counter() - t, 6)


def _ring_of(ctx, path):
    return ring_from_json(ctx.load(path), f"{path}")


def _filtration(ctx, path, R: RingDescriptor) -> FiltrationBySupports:
    obj = ctx.load(path)
    if isinstance(obj, dict) and "ring" in obj and ring_from_json(obj["ring"], f"{path}.ring") != R:
        raise JsonInputError(f"{path}.ring", "filtration ring differs from the complex's ring")
    try:
        return FiltrationBySupports.from_json(R, obj)
    except JsonInputError:
        raise
    except ValidationError as e:
        raise JsonInputError(str(path), str(e)) from None


def _complex(ctx, path, ring=None):
    return complex_from_json(ctx.load(path), str(path), ring=ring)


def _descriptor(ctx, path, R):
    obj = ctx.load(path)
    if isinstance(obj, dict) and "ring" in obj and ring_from_json(obj["ring"], f"{path}.ring") != R:
        raise JsonInputError(f"{path}.ring", "descriptor ring differs from the complex's ring")
    try:
        return oracles.CoTStructureDescriptor.from_json(R, obj)
    except ValidationError as e:
        raise JsonInputError(str(path), str(e)) from None


# ---------------------------------------------------------------------------
# subcommands: each returns (verdict: bool, witnesses: list, result: dict)


def cmd_koszul(a, ctx):
    R = _ring_of(ctx, a.ring)
    try:
        p = prime_from_json(R, json.loads(a.prime))
    except json.JSONDecodeError as e:
        raise JsonInputError("--prime", e.msg) from None
    except ValidationError as e:
        raise JsonInputError("--prime", str(e)) from None
    K = ctx.timed("koszul", prime_koszul, R, p)
    return True, [], {"prime": prime_to_json(R, p), "complex": complex_to_json(K)}


def cmd_cohomology(a, ctx):
    X = _complex(ctx, a.complex)
    H = ctx.timed("cohomology", cohomology, X)
    return True, [], {"cohomology": H.describe(), "acyclic": H.is_zero()}


def cmd_membership(a, ctx):
    X = _complex(ctx, a.complex)
    R = X.ring
    if a.cls in ("B", "Y"):
        if not a.filtration:
            raise JsonInputError("--filtration", "required for classes B and Y")
        phi = _filtration(ctx, a.filtration, R)
        fn = oracles.in_B_phi if a.cls == "B" else oracles.in_Y_phi
        res = ctx.timed("membership", fn, X, phi)
        wit = [res.witness.describe(R)] if res.witness else []
        return res.verdict, wit, {"class": a.cls}
    if a.n is None:
        raise JsonInputError("--n", f"required for class {a.cls}")
    fn = {"K_le": oracles.in_K_le, "K_ge": oracles.in_K_ge,
          "D_le": oracles.in_D_le, "D_ge": oracles.in_D_ge}[a.cls]
    v = ctx.timed("membership", fn, X, a.n)
    wit = [] if v else [{"cohomology": cohomology(X).describe()}]
    return v, wit, {"class": a.cls, "n": a.n}


def cmd_classify(a, ctx):
    R = _ring_of(ctx, a.ring)
    phi = _filtration(ctx, a.filtration, R)
    out = ctx.timed("classify", oracles.classify, R, phi)
    if isinstance(out, oracles.NotComponentUnion):
        return False, [{"kind": "NotComponentUnion", "index": out.index,
                        "value": out.value.describe(), "message": out.message}], {}
    return True, [], {"descriptor": out.to_json(), "descriptor_text": str(out)}


def cmd_approx(a, ctx):
    X = _complex(ctx, a.complex)
    D = _descriptor(ctx, a.descriptor, X.ring)
    ap = ctx.timed("approx", oracles.approximation_triangle, X, D)
    wit = [{"check": k} for k, v in ap.checks.items() if not v]
    return ap.ok, wit, {"descriptor": D.to_json(), "A": complex_to_json(ap.A),
                        "B": complex_to_json(ap.B), "checks": ap.checks}


def cmd_axioms(a, ctx):
    entries = ctx.load_dir(a.samples)
    if not entries:
        samples = []
        R = None
    else:
        samples = [complex_from_json(o, f"{a.samples}/{n}.json") for n, o in entries]
        R = samples[0].ring
        for (n, _), X in zip(entries, samples):
            if X.ring != R:
                raise JsonInputError(f"{a.samples}/{n}.json", "samples live on different rings")
    if R is None:
        rep = oracles.AxiomReport("co-t-structure", 0)
    else:
        D = _descriptor(ctx, a.descriptor, R)
        rep = ctx.timed("axioms", oracles.check_co_t_axioms, samples, D.in_A, D.in_B, (),
                        lambda X: oracles.approximation_triangle(X, D))
    body = rep.to_json()
    body["samples"] = [n for n, _ in entries]
    return rep.passed, rep.violations, body


def cmd_ext_verify(a, ctx):
    X = _complex(ctx, a.target)
    gens = {n: complex_from_json(o, f"{a.generators}/{n}.json", ring=X.ring)
            for n, o in ctx.load_dir(a.generators)}
    tower = tower_from_json(ctx.load(a.tower), X, gens, str(a.tower))
    res = ctx.timed("ext-verify", closures.verify_ext_certificate, X, list(gens.values()), tower)
    wit = [] if res.ok else [{"reason": res.reason, "step": res.step}]
    return res.ok, wit, {"steps": len(tower.steps), "generators": sorted(gens)}


def cmd_silting(a, ctx):
    S = _complex(ctx, a.complex)
    rep = ctx.timed("silting", closures.is_silting, S, a.window)
    wit = []
    if rep.witness:
        wit.append({"hom_nonvanishing": rep.witness})
    if not rep.generation:
        wit.append({"generation": "total support is not all of Spec R"})
    return rep.silting, wit, rep.to_json()


def _regular_evidence(F, bound):
    from .rings import IntegersMod
    if isinstance(F, IntegersMod) and F.k > 1:
        M = ModuleProfile(0, F, 0, (F.element(F.p),))
        probe = projective_dimension_probe(F, M, bound)
        kind = "ExceedsBound" if isinstance(probe, ExceedsBound) else "FiniteDim"
        return {"residue_field_pd": kind, "bound": bound, "resolution_ranks": list(probe.ranks)}
    return {"global_dimension_at_most": 1 if F.has_maximal_primes else 0}


def cmd_regular(a, ctx):
    R = _ring_of(ctx, a.ring)
    v = ctx.timed("regular", is_regular, R)
    per = [{"factor": i, "kind": F.to_json(), "regular": is_regular(RingDescriptor.of(F)),
            "evidence": _regular_evidence(F, a.bound)} for i, F in enumerate(R.factors)]
    wit = [p for p in per if not p["regular"]]
    return v, wit, {"factors": per}


def cmd_calibrate(a, ctx):
    if a.corpus:
        entries = ctx.load_dir(a.corpus)
        corpus = [complex_from_json(o, f"{a.corpus}/{n}.json") for n, o in entries]
    else:
        corpus = stock_corpus(_ring_of(ctx, a.ring))[0] if a.ring else []
    try:
        cal = ctx.timed("calibrate", calibrate, corpus)
    except CalibrationError as e:
        raise JsonInputError(str(a.corpus or "corpus"), str(e)) from None
    same = cal.offset == oracles.THRESHOLD_SHIFT_OFFSET
    wit = [] if same else [{"frozen": oracles.THRESHOLD_SHIFT_OFFSET, "found": cal.offset}]
    body = cal.to_json()
    body["frozen_offset"] = oracles.THRESHOLD_SHIFT_OFFSET
    return same, wit, body


# ---------------------------------------------------------------------------


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog=TOOL, description="Perfect complexes, torsion classes and "
                                "co-t-structures over concrete commutative rings.")
    p.add_argument("--no-timings", action="store_true", help="omit the timings section")
    # also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--no-timings", action="store_true", default=argparse.SUPPRESS,
                        help="omit the timings section")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("koszul", parents=[common], help="Koszul complex of a prime")
    s.add_argument("--ring", required=True)
    s.add_argument("--prime", required=True, help='e.g. \'{"factor":0,"gen":"2"}\'')
    s.set_defaults(fn=cmd_koszul)

    s = sub.add_parser("cohomology", parents=[common], help="cohomology profile of a complex")
    s.add_argument("--complex", required=True)
    s.set_defaults(fn=cmd_cohomology)

    s = sub.add_parser("membership", parents=[common], help="membership in B_Φ, Y_Φ, K^{≤n}, K^{≥n}, D^{≤n}, D^{≥n}")
    s.add_argument("--class", dest="cls", required=True,
                   choices=["B", "Y", "K_le", "K_ge", "D_le", "D_ge"])
    s.add_argument("--filtration")
    s.add_argument("--n", type=int)
    s.add_argument("--complex", required=True)
    s.set_defaults(fn=cmd_membership)

    s = sub.add_parser("classify", parents=[common], help="co-t-structure descriptor of a filtration")
    s.add_argument("--ring", required=True)
    s.add_argument("--filtration", required=True)
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("approx", parents=[common], help="approximation triangle by brutal truncation")
    s.add_argument("--descriptor", required=True)
    s.add_argument("--complex", required=True)
    s.set_defaults(fn=cmd_approx)

    s = sub.add_parser("axioms", parents=[common], help="sample-based co-t-structure axiom check")
    s.add_argument("--samples", required=True)
    s.add_argument("--descriptor", required=True)
    s.set_defaults(fn=cmd_axioms)

    s = sub.add_parser("ext-verify", parents=[common], help="verify an extension-tower certificate")
    s.add_argument("--target", required=True)
    s.add_argument("--generators", required=True)
    s.add_argument("--tower", required=True)
    s.set_defaults(fn=cmd_ext_verify)

    s = sub.add_parser("silting", parents=[common], help="silting check")
    s.add_argument("--complex", required=True)
    s.add_argument("--window", type=int, default=20)
    s.set_defaults(fn=cmd_silting)

    s = sub.add_parser("regular", parents=[common], help="regularity with projective-dimension evidence")
    s.add_argument("--ring", required=True)
    s.add_argument("--bound", type=int, default=10)
    s.set_defaults(fn=cmd_regular)

    s = sub.add_parser("calibrate", parents=[common], help="recover the threshold/shift offset")
    s.add_argument("--corpus", help="directory of complex JSON files")
    s.add_argument("--ring", help="use the built-in corpus over this ring")
    s.set_defaults(fn=cmd_calibrate)
    return p


def run(argv=None, stdout=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    ctx = _Ctx(argv)
    core = {"tool": TOOL, "version": _version(), "command": argv}
    code = 2
    try:
        a = parser.parse_args(argv)
        verdict, witnesses, result = a.fn(a, ctx)
        core.update(verdict="pass" if verdict else "fail", witnesses=witnesses, result=result)
        code = 0 if verdict else 1
    except _ArgError as e:
        core.update(verdict="error", error={"path": "argv", "message": str(e)})
    except JsonInputError as e:
        core.update(verdict="error", error={"path": e.path, "message": str(e)})
    except (ValidationError, UnsupportedOperation) as e:
        core.update(verdict="error", error={"path": None, "message": str(e)})
    core["inputs"] = dict(sorted(ctx.inputs.items()))
    report = {"core": core, "core_digest": digest(canonical_dumps(core))}
    if "--no-timings" not in argv:
        report["timings"] = ctx.timings
    stdout.write(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    return code


def main():
    sys.exit(run())
