"""Command-line front end: ``jetbound <subcommand> ...``.

Exit codes: 0 success, 1 input error, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from jetbound import bounds, jets, methods
from jetbound.bounds import BoundResult, Weights
from jetbound.cache import ENV_DIR, RankCache
from jetbound.formats import InputError, InstanceSpec, canonical_hash, frac_str, load
from jetbound.geometry import LatticePointSet, lattice_points, normalize_to_nonneg

ENV_SEED = "JETBOUND_SEED"


def _weights(text: str) -> Weights:
    try:
        vals = [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--weights: cannot parse {text!r}") from None
    try:
        return Weights.of(vals)
    except ValueError as e:
        raise InputError(f"--weights: {e}") from None


def _expect(spec: InstanceSpec, *kinds: str) -> None:
    if spec.kind not in kinds:
        raise InputError(f"{spec.name}: expected {' or '.join(kinds)}, got {spec.kind}")


def _seed(args, spec: InstanceSpec) -> int:
    if args.seed is not None:
        return args.seed
    if os.environ.get(ENV_SEED):
        return int(os.environ[ENV_SEED])
    return int(canonical_hash(spec)[:12], 16)


def _cache(args) -> RankCache | None:
    if getattr(args, "no_cache", False):
        return None
    if getattr(args, "cache_dir", None):
        return RankCache(args.cache_dir)
    return RankCache.from_env()


def _positive(args) -> None:
    if getattr(args, "k_budget", 1) <= 0:
        raise InputError("--k-budget must be positive")
    if getattr(args, "trials", 1) <= 0:
        raise InputError("--trials must be positive")


def result_record(res: BoundResult, instance: str, weights: Weights | None = None) -> dict:
    """Machine-readable bound; field order is fixed."""
    rec = {
        "instance": instance,
        "method": res.method,
        "weights": [frac_str(w) for w in weights.values] if weights else None,
        "lower": frac_str(res.lower),
        "upper": {"radicand": frac_str(res.upper.radicand), "root": res.upper.root},
        "upper_float": round(float(res.upper), 12),
        "exact": res.exact,
        "k_used": res.k_used,
        "m_achieved": list(res.m_achieved),
        "certified": res.certified,
        "notes": list(res.notes),
    }
    return rec


def _print_bound(res: BoundResult, instance: str, weights: Weights | None, as_json: bool) -> None:
    if as_json:
        print(json.dumps(result_record(res, instance, weights), indent=2))
        return
    label = "certified" if res.certified else "probabilistic rank screening"
    rows = [
        ("instance", instance),
        ("method", res.method),
        ("weights", ",".join(frac_str(w) for w in weights.values) if weights else "1"),
        ("lower bound", f"{res.lower}  ({label})"),
        ("upper bound", f"{res.upper}  (~{float(res.upper):.6f}, volume bound)"),
        ("k used", str(res.k_used)),
        ("jets achieved", ",".join(map(str, res.m_achieved)) or "-"),
    ]
    if res.exact:
        rows.append(("value", f"{res.lower} (lower bound meets upper bound)"))
    for note in res.notes:
        rows.append(("note", note))
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k.ljust(width)}  {v}")


def _point_set(spec: InstanceSpec) -> LatticePointSet:
    if spec.kind == "polytope":
        return lattice_points(normalize_to_nonneg(spec.obj)[0])
    return spec.obj


def cmd_jets(args) -> int:
    spec = load(args.file)
    _expect(spec, "polytope", "lattice-set")
    s, _ = _point_set(spec).normalized()
    if not s.points:
        raise InputError(f"{spec.name}: no lattice points")
    if args.ideal:
        ideal_spec = load(args.ideal)
        _expect(ideal_spec, "ideal")
        ideal = ideal_spec.obj
        if ideal.n != s.n:
            raise InputError("ideal and point set have different dimensions")
        rep = jets.is_full_jet_rank(s, ideal, certify=args.certify, rng=bounds.cell_rng("cli", _seed(args, spec)))
        out = {"points": len(s), "rows": rep.rows, "rank": rep.rank, "full": rep.full,
               "certificate": rep.certificate_polynomial() or None}
    else:
        m, _ = bounds.jet_order(s, args.certify, _seed(args, spec), _cache(args), args.m_max)
        out = {"points": len(s), "max_jet_order": m}
        nxt = m + 1
        if (args.m_max is None or nxt <= args.m_max) and math.comb(nxt + s.n, s.n) <= len(s):
            poly = jets.vanishing_polynomial(s, jets.phi_of_power(nxt, s.n))
            if poly:
                rep = jets.JetRankReport(False, 0, 0, True, poly)
                out["certificate"] = rep.certificate_polynomial()
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        for k, v in out.items():
            print(f"{k}: {v}")
    return 0


def _bound_common(args, spec):
    _positive(args)
    return dict(certify=args.certify, seed=_seed(args, spec), cache=_cache(args))


def cmd_seshadri(args) -> int:
    spec = load(args.file)
    _expect(spec, "polytope")
    common = _bound_common(args, spec)
    w = _weights(args.weights)
    if args.lattice_map:
        return _lattice_change(args, spec, w, load(args.lattice_map), common)
    if w.values == (1,):
        res = bounds.seshadri_lower_bound(spec.obj, args.k_budget, workers=args.workers, **common)
    else:
        res = bounds.multipoint_seshadri_lower(spec.obj, w, args.k_budget, args.trials, workers=args.workers, **common)
    _print_bound(res, spec.name, w, args.json)
    return 0


def cmd_multi(args) -> int:
    spec = load(args.file)
    _expect(spec, "polytope", "lattice-set")
    common = _bound_common(args, spec)
    w = _weights(args.weights)
    if spec.kind == "lattice-set":
        r = bounds.multipoint_jet_lower(spec.obj, w, args.trials, args.certify, common["seed"], cache=common["cache"])
        out = {"instance": spec.name, "weights": [frac_str(x) for x in w.values], "t_lower": frac_str(r.t),
               "jets": list(r.jets), "one_sided": r.one_sided}
        print(json.dumps(out, indent=2) if args.json else "\n".join(f"{k}: {v}" for k, v in out.items()))
        return 0
    res = bounds.multipoint_seshadri_lower(spec.obj, w, args.k_budget, args.trials, workers=args.workers, **common)
    _print_bound(res, spec.name, w, args.json)
    return 0


def _lattice_change(args, spec, w: Weights, map_spec: InstanceSpec, common) -> int:
    _expect(map_spec, "lattice-map")
    lmap = map_spec.obj
    d = lmap.degree
    if lmap.n != spec.obj.n:
        raise InputError("lattice map and polytope have different dimensions")
    if len(w) % d or w.values != w.values[: len(w) // d] * d:
        raise InputError(f"--weights must repeat one pattern {d} times (the degree of the map)")
    inner = Weights(w.values[: len(w) // d])
    res = methods.lattice_change_bound(spec.obj, lmap, inner, args.k_budget, args.trials, **common)
    _print_bound(res, spec.name, w, args.json)
    return 0


def cmd_lattice_change(args) -> int:
    spec = load(args.file)
    _expect(spec, "polytope")
    common = _bound_common(args, spec)
    w = _weights(args.weights)
    if args.map:
        return _lattice_change(args, spec, w, load(args.map), common)
    if not args.search_degree:
        raise InputError("give --map or --search-degree")
    d = args.search_degree
    if len(w) % d:
        raise InputError(f"--weights must repeat one pattern {d} times")
    found = methods.search_lattice_changes(spec.obj, Weights(w.values[: len(w) // d]), d, args.k_budget, args.trials,
                                           common["seed"])
    lmap, res = found
    _print_bound(res, spec.name, w, args.json)
    if not args.json:
        print(f"best map  {[list(r) for r in lmap.matrix]}")
    return 0


def _selection(args, d: methods.Decomposition):
    idx = [int(x) for x in args.cells.split(",")] if args.cells else list(range(len(d.cells)))
    if any(not 0 <= i < len(d.cells) for i in idx):
        raise InputError("--cells: index out of range")
    if args.weights_per_cell:
        groups = [g for g in args.weights_per_cell.split(";")]
        if len(groups) != len(idx):
            raise InputError("--weights-per-cell: need one weight group per selected cell")
        ws = [_weights(g) for g in groups]
    else:
        ws = [Weights.of([1]) for _ in idx]
    return list(zip(idx, ws))


def cmd_decompose(args) -> int:
    files = args.files
    if len(files) == 1:
        dspec = load(files[0])
        _expect(dspec, "decomposition")
        d = dspec.obj
        name = dspec.name
    elif len(files) == 2:
        pspec, dspec = load(files[0]), load(files[1])
        _expect(pspec, "polytope")
        _expect(dspec, "decomposition")
        d = methods.Decomposition(pspec.obj, dspec.obj.cells)
        name = pspec.name
    else:
        raise InputError("decompose takes PARENT CELLS or a single decomposition file")
    delta = load(args.delta).obj if args.delta else d.parent
    _positive(args)
    report = methods.validate_decomposition(d)
    if not report.valid:
        raise InputError(f"invalid decomposition: {report.violation}")
    witness = methods.lifting_function_exists(d)
    if isinstance(witness, methods.NonRegular):
        print(f"non-regular: {witness.summary()}")
        return 1
    sel = _selection(args, d)
    seed = _seed(args, dspec)
    res = methods.decomposition_bound(delta, d, sel, args.k_budget, args.trials, args.certify, seed, _cache(args),
                                      witness=witness)
    total = sel[0][1]
    for _, w in sel[1:]:
        total = total + w
    values = {}
    for u in lattice_points(d.parent).points:
        i = next(i for i, c in enumerate(d.cells) if c.contains(u))
        values[",".join(map(str, u))] = frac_str(witness.value(i, u))
    if args.json:
        rec = result_record(res, name, total)
        rec["lifting_values"] = values
        print(json.dumps(rec, indent=2))
    else:
        _print_bound(res, name, total, False)
        print("lifting function (integral values at lattice points):")
        for k, v in values.items():
            print(f"  ({k}) -> {v}")
    return 0


def cmd_cache(args) -> int:
    directory = args.cache_dir or os.environ.get(ENV_DIR)
    if not directory:
        raise InputError(f"no cache directory: set {ENV_DIR} or pass --cache-dir")
    cache = RankCache(directory)
    if args.action == "stats":
        print(f"{len(cache.entries())} records in {cache.dir} (engine version {cache.version})")
    elif args.action == "clear":
        print(f"removed {cache.clear()} records")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jetbound", description="Jet-separation bounds for Seshadri constants.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, weights="1"):
        sp.add_argument("--k-budget", type=int, default=bounds.DEFAULT_K_BUDGET)
        sp.add_argument("--trials", type=int, default=bounds.DEFAULT_TRIALS)
        sp.add_argument("--weights", default=weights, help="comma-separated positive rationals")
        sp.add_argument("--certify", action="store_true", help="exact ranks everywhere")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--cache-dir", default=None)
        sp.add_argument("--no-cache", action="store_true")

    sp = sub.add_parser("jets", help="maximal separated jet order of a point set")
    sp.add_argument("file")
    sp.add_argument("--m-max", type=int, default=None)
    sp.add_argument("--ideal", default=None, help="staircase ideal file; test that ideal instead")
    sp.add_argument("--certify", action="store_true")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--cache-dir", default=None)
    sp.add_argument("--no-cache", action="store_true")
    sp.set_defaults(func=cmd_jets)

    sp = sub.add_parser("seshadri", help="bounds for a polytope")
    sp.add_argument("file")
    sp.add_argument("--lattice-map", default=None)
    common(sp)
    sp.set_defaults(func=cmd_seshadri)

    sp = sub.add_parser("multi", help="several-point bounds by random multipoint ranks")
    sp.add_argument("file")
    common(sp, weights="1,1")
    sp.set_defaults(func=cmd_multi)

    sp = sub.add_parser("lattice-change", help="bound through a finite toric cover")
    sp.add_argument("file")
    sp.add_argument("--map", default=None)
    sp.add_argument("--search-degree", type=int, default=None)
    common(sp, weights="1,1")
    sp.set_defaults(func=cmd_lattice_change)

    sp = sub.add_parser("decompose", help="bound through a regular subdivision")
    sp.add_argument("files", nargs="+", metavar="FILE")
    sp.add_argument("--delta", default=None, help="polytope to bound (default: the parent)")
    sp.add_argument("--cells", default=None, help="comma-separated selected cell indices")
    sp.add_argument("--weights-per-cell", default=None, help='e.g. "1;1;1" or "1,1;2"')
    sp.add_argument("--k-budget", type=int, default=bounds.DEFAULT_K_BUDGET)
    sp.add_argument("--trials", type=int, default=bounds.DEFAULT_TRIALS)
    sp.add_argument("--certify", action="store_true")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--cache-dir", default=None)
    sp.add_argument("--no-cache", action="store_true")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("cache", help="inspect or clear the rank cache")
    sp.add_argument("action", choices=["stats", "clear"])
    sp.add_argument("--cache-dir", default=None)
    sp.set_defaults(func=cmd_cache)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, methods.MethodError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
