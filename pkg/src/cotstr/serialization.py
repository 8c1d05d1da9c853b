"""JSON wire format for complexes, chain maps, towers and descriptors.

Every exact value is a string in the factor's element syntax.  Complexes::

    {"ring": {"factors": [...]}, "lo": -1, "hi": 0,
     "ranks": {"-1": 1, "0": 1}, "diff": {"-1": [["2"]]}}

Over a ring with several factors each rank is a list (one per factor) and
each differential a list of matrices.  Input errors raise
:class:`JsonInputError` carrying a JSON path to the offending value.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .complexes import ChainMap, FactorComplex, FreeComplex, shift
from .linalg import Mat
from .rings import RingDescriptor, ValidationError


class JsonInputError(ValidationError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _wrap(path, fn, *args):
    try:
        return fn(*args)
    except JsonInputError:
        raise
    except (ValidationError, ValueError, TypeError, KeyError, ZeroDivisionError) as e:
        raise JsonInputError(path, str(e)) from None


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode()
    return "sha256:" + hashlib.sha256(data).hexdigest()


def load_json(path) -> tuple[object, str]:
    """``(parsed, digest of the raw bytes)``; errors name the file."""
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as e:
        raise JsonInputError(str(p), f"cannot read: {e.strerror}") from None
    try:
        return json.loads(raw), digest(raw)
    except json.JSONDecodeError as e:
        raise JsonInputError(f"{p}:{e.lineno}:{e.colno}", e.msg) from None


# ---------------------------------------------------------------------------
# rings


def ring_from_json(obj, path="$.ring") -> RingDescriptor:
    return _wrap(path, RingDescriptor.from_json, obj)


def ring_to_json(R: RingDescriptor) -> dict:
    return R.to_json()


# ---------------------------------------------------------------------------
# matrices


def _mat_to_json(F, M: Mat) -> list:
    return [[F.format(x) for x in row] for row in M.data]


def _mat_from_json(F, obj, shape, path) -> Mat:
    r, c = shape
    if not isinstance(obj, list) or len(obj) != r:
        raise JsonInputError(path, f"expected {r} rows")
    rows = []
    for a, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != c:
            raise JsonInputError(f"{path}[{a}]", f"expected {c} entries")
        out = []
        for b, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (str, int)):
                raise JsonInputError(f"{path}[{a}][{b}]", "entries must be strings")
            out.append(_wrap(f"{path}[{a}][{b}]", F.element, x))
        rows.append(tuple(out))
    return Mat(r, c, tuple(rows))


def _rank_entry(R, value, path) -> list:
    if len(R) == 1 and not isinstance(value, list):
        value = [value]
    if not isinstance(value, list) or len(value) != len(R):
        raise JsonInputError(path, f"expected one rank per factor ({len(R)})")
    return value


def _degree(key, path) -> int:
    try:
        return int(key)
    except (TypeError, ValueError):
        raise JsonInputError(path, f"degree key {key!r} is not an integer") from None


# ---------------------------------------------------------------------------
# complexes


def complex_to_json(X: FreeComplex) -> dict:
    R = X.ring
    one = len(R) == 1
    ranks = {}
    for n in X.degrees:
        r = X.rank(n)
        ranks[str(n)] = r[0] if one else list(r)
    diff = {}
    for n in X.degrees:
        if not any(n in P.diffs for P in X.parts):
            continue
        ms = [_mat_to_json(F, P.d(n)) for F, P in zip(R.factors, X.parts)]
        diff[str(n)] = ms[0] if one else ms
    return {"ring": R.to_json(), "lo": X.lo, "hi": X.hi, "ranks": ranks, "diff": diff}


def complex_from_json(obj, path="$", ring: RingDescriptor | None = None) -> FreeComplex:
    if not isinstance(obj, dict):
        raise JsonInputError(path, "complex must be an object")
    if "ring" in obj:
        R = ring_from_json(obj["ring"], f"{path}.ring")
        if ring is not None and R != ring:
            raise JsonInputError(f"{path}.ring", f"expected ring {ring}, got {R}")
    elif ring is not None:
        R = ring
    else:
        raise JsonInputError(path, "missing 'ring'")
    ranks_obj = obj.get("ranks", {})
    if not isinstance(ranks_obj, dict):
        raise JsonInputError(f"{path}.ranks", "must be an object {degree: rank}")
    per_ranks = [dict() for _ in R.factors]
    for key, v in ranks_obj.items():
        n = _degree(key, f"{path}.ranks")
        vs = _rank_entry(R, v, f"{path}.ranks.{key}")
        for i, r in enumerate(vs):
            if isinstance(r, bool) or not isinstance(r, int) or r < 0:
                raise JsonInputError(f"{path}.ranks.{key}", "ranks must be nonnegative integers")
            if r:
                per_ranks[i][n] = r
    degs = sorted({n for d in per_ranks for n in d})
    for name in ("lo", "hi"):
        bound = obj.get(name)
        if bound is None or not degs:
            continue
        if isinstance(bound, bool) or not isinstance(bound, int) or \
                (name == "lo" and degs[0] < bound) or (name == "hi" and degs[-1] > bound):
            raise JsonInputError(f"{path}.{name}", f"inconsistent with the ranks ({degs[0]}..{degs[-1]})")
    diff_obj = obj.get("diff", {})
    if not isinstance(diff_obj, dict):
        raise JsonInputError(f"{path}.diff", "must be an object {degree: matrix}")
    per_diffs = [dict() for _ in R.factors]
    for key, v in diff_obj.items():
        n = _degree(key, f"{path}.diff")
        if len(R) == 1:
            ms = [v]
        else:
            if not isinstance(v, list) or len(v) != len(R):
                raise JsonInputError(f"{path}.diff.{key}", f"expected one matrix per factor ({len(R)})")
            ms = v
        for i, (F, m) in enumerate(zip(R.factors, ms)):
            shape = (per_ranks[i].get(n + 1, 0), per_ranks[i].get(n, 0))
            sub = f"{path}.diff.{key}" + ("" if len(R) == 1 else f"[{i}]")
            if m in (None, []) and 0 in shape:
                continue
            per_diffs[i][n] = _mat_from_json(F, m, shape, sub)
    parts = tuple(_wrap(f"{path}.diff", FactorComplex, F, per_ranks[i], per_diffs[i], i)
                  for i, F in enumerate(R.factors))
    return FreeComplex(R, parts)


# ---------------------------------------------------------------------------
# chain maps


def map_components_to_json(f: ChainMap) -> dict:
    R = f.ring
    out = {}
    degs = sorted({n for c in f.components for n in c})
    for n in degs:
        ms = [_mat_to_json(F, f.at(i, n)) for i, F in enumerate(R.factors)]
        out[str(n)] = ms[0] if len(R) == 1 else ms
    return out


def map_components_from_json(obj, source: FreeComplex, target: FreeComplex, path="$") -> ChainMap:
    R = source.ring
    if not isinstance(obj, dict):
        raise JsonInputError(path, "map components must be an object {degree: matrix}")
    comps = [dict() for _ in R.factors]
    for key, v in obj.items():
        n = _degree(key, path)
        ms = [v] if len(R) == 1 else v
        if len(R) > 1 and (not isinstance(v, list) or len(v) != len(R)):
            raise JsonInputError(f"{path}.{key}", "expected one matrix per factor")
        for i, (F, m) in enumerate(zip(R.factors, ms)):
            shape = (target.parts[i].rank(n), source.parts[i].rank(n))
            if m in (None, []) and 0 in shape:
                continue
            comps[i][n] = _mat_from_json(F, m, shape, f"{path}.{key}")
    f = _wrap(path, ChainMap, source, target, tuple(comps))
    ok, where = f.commutes()
    if not ok:
        raise JsonInputError(path, f"not a chain map (factor {where[0]}, degree {where[1]})")
    return f


def chain_map_to_json(f: ChainMap) -> dict:
    return {"source": complex_to_json(f.source), "target": complex_to_json(f.target),
            "components": map_components_to_json(f)}


def chain_map_from_json(obj, path="$") -> ChainMap:
    if not isinstance(obj, dict) or not {"source", "target", "components"} <= set(obj):
        raise JsonInputError(path, "chain map needs source, target and components")
    S = complex_from_json(obj["source"], f"{path}.source")
    T = complex_from_json(obj["target"], f"{path}.target", ring=S.ring)
    return map_components_from_json(obj["components"], S, T, f"{path}.components")


# ---------------------------------------------------------------------------
# towers


def tower_to_json(tower, names: list | None = None) -> dict:
    """``names`` lists ``(complex, name)`` pairs for generators referenced by name."""
    from .closures import DerivedIsoWitness, IdentityWitness, QuasiIsoWitness, SummandWitness

    def obj_ref(X):
        for Y, name in names or ():
            if Y == X:
                return {"generator": name}
        return complex_to_json(X)

    R = tower.base.ring
    out = {"ring": R.to_json(),
           "base": "zero" if tower.base.is_zero_object() else obj_ref(tower.base),
           "steps": []}
    for s in tower.steps:
        step = {"V": obj_ref(s.V), "f": map_components_to_json(s.f)}
        if s.result is not None:
            step["result"] = complex_to_json(s.result)
        out["steps"].append(step)
    w = tower.witness
    if isinstance(w, IdentityWitness):
        out["witness"] = {"kind": "identity"}
    elif isinstance(w, DerivedIsoWitness):
        out["witness"] = {"kind": "derived_iso"}
    elif isinstance(w, QuasiIsoWitness):
        direction = "final_to_target" if w.map.source == tower.final else "target_to_final"
        out["witness"] = {"kind": "quasi_iso", "direction": direction,
                          "components": map_components_to_json(w.map)}
    elif isinstance(w, SummandWitness):
        out["witness"] = {"kind": "summand",
                          "section": map_components_to_json(w.section),
                          "retraction": map_components_to_json(w.retraction)}
    return out


def tower_from_json(obj, target: FreeComplex, generators: dict | None = None, path="$"):
    """Parse a tower; ``{"generator": name}`` references resolve via ``generators``."""
    from .closures import (DerivedIsoWitness, ExtensionTower, IdentityWitness, QuasiIsoWitness,
                           Step, SummandWitness)
    from .complexes import cone_object
    R = target.ring
    if not isinstance(obj, dict):
        raise JsonInputError(path, "tower must be an object")
    if "ring" in obj and ring_from_json(obj["ring"], f"{path}.ring") != R:
        raise JsonInputError(f"{path}.ring", "tower ring differs from the target's ring")
    generators = generators or {}

    def resolve(o, p):
        if isinstance(o, dict) and "generator" in o:
            name = o["generator"]
            if name not in generators:
                raise JsonInputError(p, f"unknown generator {name!r}")
            return generators[name]
        return complex_from_json(o, p, ring=R)

    base_obj = obj.get("base", "zero")
    base = FreeComplex.zero(R) if base_obj == "zero" else resolve(base_obj, f"{path}.base")
    U = base
    steps = []
    for k, s in enumerate(obj.get("steps", [])):
        p = f"{path}.steps[{k}]"
        if not isinstance(s, dict) or "V" not in s or "f" not in s:
            raise JsonInputError(p, "step needs V and f")
        V = resolve(s["V"], f"{p}.V")
        f = map_components_from_json(s["f"], shift(V, -1), U, f"{p}.f")
        result = complex_from_json(s["result"], f"{p}.result", ring=R) if "result" in s else None
        steps.append(Step(V, f, result))
        U = cone_object(f)
    w = obj.get("witness", {"kind": "identity"})
    p = f"{path}.witness"
    kind = w.get("kind") if isinstance(w, dict) else None
    if kind == "identity":
        witness = IdentityWitness()
    elif kind == "derived_iso":
        witness = DerivedIsoWitness()
    elif kind == "quasi_iso":
        if w.get("direction", "final_to_target") == "final_to_target":
            m = map_components_from_json(w.get("components", {}), U, target, f"{p}.components")
        else:
            m = map_components_from_json(w.get("components", {}), target, U, f"{p}.components")
        witness = QuasiIsoWitness(m)
    elif kind == "summand":
        sec = map_components_from_json(w.get("section", {}), target, U, f"{p}.section")
        ret = map_components_from_json(w.get("retraction", {}), U, target, f"{p}.retraction")
        witness = SummandWitness(sec, ret)
    else:
        raise JsonInputError(p, "witness kind must be identity, derived_iso, quasi_iso or summand")
    return ExtensionTower(base, tuple(steps), witness)
