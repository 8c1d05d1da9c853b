"""Regenerate fixtures/ and fixtures/MANIFEST from the built-in corpus.

    python scripts/make_fixtures.py [--check]

With --check nothing is written; the exit code says whether the files on
disk match what would be generated.
"""
import json
import sys
from pathlib import Path

from cotstr.closures import DerivedIsoWitness, ExtensionTower, Step
from cotstr.complexes import FreeComplex, direct_sum, shift, zero_map
from cotstr.corpus import stock_corpus
from cotstr.filtrations import FiltrationBySupports, constant_filtration, threshold_filtration
from cotstr.koszul import KoszulSpec, koszul_complex, prime_koszul
from cotstr.oracles import CoTStructureDescriptor
from cotstr.rings import Integers, IntegersMod, RingDescriptor
from cotstr.serialization import complex_to_json, digest, tower_to_json
from cotstr.spectrum import SpecSubset, prime

ROOT = Path(__file__).resolve().parent.parent / "fixtures"


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def files() -> dict:
    Z = RingDescriptor.of(Integers())
    Z6 = RingDescriptor.of(IntegersMod(2), IntegersMod(3))
    out = {
        "rings/Z.json": Z.to_json(),
        "rings/Z6.json": Z6.to_json(),
        "rings/Z4.json": RingDescriptor.of(IntegersMod(4)).to_json(),
        "filtrations/threshold0.json": threshold_filtration(Z, 0).to_json(),
        "filtrations/empty.json": constant_filtration(SpecSubset.empty(Z)).to_json(),
        "filtrations/prime2only.json": FiltrationBySupports(
            SpecSubset.closed_points(Z, [prime(Z, 0, "2")])).to_json(),
        "descriptors/shift0.json": CoTStructureDescriptor.canonical(Z, 0).to_json(),
    }
    for name, R in (("Z", Z), ("Z6", Z6)):
        xs, _ = stock_corpus(R)
        for k, X in enumerate(xs):
            out[f"complexes/{name}/x{k:02d}.json"] = complex_to_json(X)
    K2 = prime_koszul(Z, prime(Z, 0, "2"))
    K3 = prime_koszul(Z, prime(Z, 0, "3"))
    K6 = koszul_complex(Z, KoszulSpec(0, (6,)))
    out["ext/generators/k2.json"] = complex_to_json(K2)
    out["ext/generators/k3.json"] = complex_to_json(K3)
    out["ext/k6.json"] = complex_to_json(K6)
    out["ext/unit.json"] = complex_to_json(FreeComplex.unit(Z))
    tower = ExtensionTower(K2, (Step(K3, zero_map(shift(K3, -1), K2)),), DerivedIsoWitness())
    out["ext/tower_k6.json"] = tower_to_json(tower, [(K2, "k2"), (K3, "k3")])
    U = FreeComplex.unit(Z)
    out["silting/unit.json"] = complex_to_json(U)
    out["silting/split.json"] = complex_to_json(direct_sum(U, shift(U, 1)))
    return {k: dumps(v) for k, v in sorted(out.items())}


def manifest(fs: dict) -> str:
    return "".join(f"{digest(text)}  {path}\n" for path, text in fs.items())


def main(argv):
    fs = files()
    fs["MANIFEST"] = manifest(fs)
    if "--check" in argv:
        bad = [p for p, t in fs.items() if not (ROOT / p).exists() or (ROOT / p).read_text() != t]
        print("\n".join(bad) or "fixtures up to date")
        return 1 if bad else 0
    for p, t in fs.items():
        (ROOT / p).parent.mkdir(parents=True, exist_ok=True)
        (ROOT / p).write_text(t)
    print(f"wrote {len(fs)} files under {ROOT}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
