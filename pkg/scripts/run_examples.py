#!/usr/bin/env python3
"""Reproduce the worked examples: degeneration, lattice change, regular decomposition.

    python3 scripts/run_examples.py [--k-budget 3] [--certify] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

from jetbound import formats, jets
from jetbound.bounds import Weights, seshadri_lower_bound, volume_upper_bound
from jetbound.cli import result_record
from jetbound.geometry import standard_simplex, unit_cube
from jetbound.methods import (
    decomposition_bound,
    degeneration_check,
    lattice_change_bound,
    lifting_function_exists,
    verify_lifting_witness,
)

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def load(name):
    return formats.load(str(INSTANCES / name)).obj


def degeneration(args) -> dict:
    s = load("thirteen_points.json")
    ideal = load("collision_ideal.json")
    rep = degeneration_check(s, ideal, (3, 1), certify=True)
    print(f"degeneration   #S={len(s)} colength={rep.colength} rank={rep.rank} separates={rep.separates}")
    print(f"               pattern from the collision library matches: {jets.collinear_collision_ideal((3, 1), 2) == ideal}")
    return {"colength": rep.colength, "rank": rep.rank, "separates": rep.separates}


def lattice_change(args) -> dict:
    delta = load("tetrahedron.json")
    lmap = load("tetra_map.json")
    res = lattice_change_bound(delta, lmap, Weights.of([1]), args.k_budget, certify=args.certify, seed=args.seed)
    print(f"lattice change degree={lmap.degree} lower={res.lower} upper={res.upper} exact={res.exact}")
    return result_record(res, "tetrahedron", Weights.of([1, 1]))


def decomposition(args) -> dict:
    d = load("triangle_fan.json")
    w = lifting_function_exists(d)
    ok, _ = verify_lifting_witness(d, w)
    ones = Weights.of([1])
    res = decomposition_bound(d.parent, d, [(i, ones) for i in range(len(d.cells))], args.k_budget,
                              certify=args.certify, seed=args.seed, witness=w)
    print(f"decomposition  witness verified={ok} (x7: {verify_lifting_witness(d, w.scaled(7))[0]})")
    print(f"               lower={res.lower} upper={res.upper} exact={res.exact}")
    pin = load("pinwheel.json")
    print(f"               pinwheel: {lifting_function_exists(pin).summary()}")
    return result_record(res, "triangle fan", Weights.of([1, 1, 1]))


def toric(args) -> dict:
    out = {}
    for label, p in [("simplex1", standard_simplex(1)), ("simplex2", standard_simplex(2)),
                     ("simplex3", standard_simplex(3)), ("square", unit_cube(2))]:
        res = seshadri_lower_bound(p, args.k_budget, certify=args.certify, seed=args.seed)
        print(f"toric          {label:9s} [{res.lower}, {res.upper}] exact={res.exact}")
        out[label] = result_record(res, label)
    ub = volume_upper_bound(unit_cube(3), Weights.of([1]))
    print(f"               unit 3-cube volume bound {ub} ~ {float(ub):.4f}")
    return out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-budget", type=int, default=3)
    ap.add_argument("--certify", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", default=None, help="write all records to this file")
    args = ap.parse_args()

    records = {}
    for name, fn in [("degeneration", degeneration), ("lattice_change", lattice_change),
                     ("decomposition", decomposition), ("toric", toric)]:
        t0 = time.perf_counter()
        records[name] = fn(args)
        print(f"               ({time.perf_counter() - t0:.2f}s)")
    if args.json:
        Path(args.json).write_text(json.dumps(records, indent=2))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
