"""Command-line driver.

    hgprop verify-lemmas --group Z12 --trials 50 --seed 7
    hgprop period --group Z16 --delta 0.3 --instance injective --trials 100
    hgprop period-general --group D4 --delta 0.3 --instance periodic
    hgprop ccr --group Z8 --k 2 --t 1 --delta 0.3 --instance hidden-translation --u 4
    hgprop lowerbound --group Z4096 --q 8,256 --trials 2000
    hgprop gen-instance --group Z12 --instance periodic --H "gens=(4)" --out f.json

Exit codes: 0 success, 1 invariant violation, 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import experiments as ex
from . import groups as gr
from . import instances as inst

SCHEMA = 1

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hgprop", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, trials=1):
        sp.add_argument("--group", required=True, help="Z<n>(xZ<n>)*, D<n>, S3 or Q8")
        sp.add_argument("--trials", type=int, default=trials)
        sp.add_argument("--seed", type=int, default=0, help="master seed")
        sp.add_argument("--out", default="-", help="output path, - for stdout")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    def instance_args(sp, pair: bool):
        sp.add_argument("--instance", required=True,
                        help="instance kind, or a path to an instance JSON file")
        sp.add_argument("--s-count", type=int, default=None, help="size of the value set")
        if pair:
            sp.add_argument("--u", default=None, help="translation element, e.g. 4 or (1,0)")
        else:
            sp.add_argument("--K", default="gens=", help="known normal subgroup, gens=...")
            sp.add_argument("--H", default=None, help="period of a periodic instance")
            sp.add_argument("--distance", type=float, default=None,
                            help="perturbation distance for perturbed instances")

    sp = sub.add_parser("verify-lemmas", help="check the robustness identities on a group")
    common(sp, trials=50)
    sp.add_argument("--s-count", type=int, default=5)

    for name in ("period", "period-general"):
        sp = sub.add_parser(name, help="run the larger-period tester")
        common(sp, trials=100)
        sp.add_argument("--delta", type=float, required=True)
        instance_args(sp, pair=False)

    sp = sub.add_parser("ccr", help="run the common-coset-range tester")
    common(sp, trials=100)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--budget", type=int, default=gr.DEFAULT_TUPLE_BUDGET,
                    help="cap on closure computations in the subgroup search")
    instance_args(sp, pair=True)

    sp = sub.add_parser("lowerbound", help="classical cross-collision distinguisher on D1 vs D2")
    common(sp, trials=2000)
    sp.add_argument("--q", required=True, help="comma-separated query budgets")

    sp = sub.add_parser("gen-instance", help="write a replayable instance table")
    common(sp)
    instance_args(sp, pair=False)
    sp.add_argument("--u", default=None)
    sp.add_argument("--delta", type=float, default=0.3, help="target for far-from-LP")
    return p


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "format")}


def _load_instance(G, args, pair: bool) -> inst.Instance:
    kind = args.instance
    if os.path.exists(kind):
        with open(kind) as fh:
            obj = inst.Instance.from_json(json.load(fh))
        if obj.group != G:
            raise UsageError(f"instance file is on {obj.group}, not {G}")
        return obj
    kinds = inst.PAIR_KINDS if pair else inst.PERIOD_KINDS
    if kind not in kinds or kind == "custom-table":
        raise UsageError(f"unknown instance kind {kind!r}; expected one of {kinds} or a file")
    params = {"s_count": args.s_count}
    if pair:
        params["u"] = args.u
    else:
        params.update(K=args.K, H=args.H)
        if args.distance is not None:
            params["distance"] = args.distance
        if kind == "far-from-LP":
            params["delta"] = args.delta
    return inst.make_instance(G, kind, seed=ex.instance_seed(args.seed), **params)


def _emit(args, payload: dict, rows: list[dict] | None):
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    else:
        buf = io.StringIO()
        buf.write(f"# schema: {SCHEMA}\n")
        buf.write("# config: " + json.dumps(payload["config"], sort_keys=True) + "\n")
        for key in ("summary", "passed"):
            if key in payload:
                buf.write(f"# {key}: " + json.dumps(payload[key], sort_keys=True) + "\n")
        if rows:
            fields = list(dict.fromkeys(k for r in rows for k in r))
            w = csv.DictWriter(buf, fieldnames=fields, restval="", lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v)
                            for k, v in r.items()})
        text = buf.getvalue()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


def _run(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    try:
        G = gr.parse_group_spec(args.group)
    except gr.GroupSpecError as exc:
        raise UsageError(str(exc)) from None
    config = _config(args)
    payload = {"schema": SCHEMA, "config": config}
    status = EXIT_OK

    if args.command == "verify-lemmas":
        rep = ex.verify_lemmas(G, args.trials, args.seed, s_count=args.s_count)
        payload.update(rep)
        rows = [{"lemma": k, **v} for k, v in rep["results"].items()]
        status = EXIT_OK if rep["passed"] else EXIT_VIOLATION

    elif args.command in ("period", "period-general"):
        general = args.command == "period-general"
        if not general and not G.is_abelian:
            raise UsageError("period needs an abelian group; use period-general")
        K = gr.parse_subgroup(G, args.K)
        if not K.is_normal:
            raise UsageError("--K must be normal")
        instance = _load_instance(G, args, pair=False)
        res = ex.run_period(G, instance, K, args.delta, args.trials, args.seed, general=general)
        payload["instance"] = {"kind": instance.kind, "params": instance.params,
                               "seed": instance.seed}
        payload.update(res)
        rows = [{"trial": i, **{k: v for k, v in vj.items() if k != "samples"}}
                for i, vj in enumerate(res["verdicts"])]

    elif args.command == "ccr":
        instance = _load_instance(G, args, pair=True)
        res = ex.run_ccr(G, instance, args.k, args.t, args.delta, args.trials, args.seed,
                         budget=args.budget)
        payload["instance"] = {"kind": instance.kind, "params": instance.params,
                               "seed": instance.seed}
        payload.update(res)
        rows = [{"trial": i, **{k: v for k, v in vj.items() if k != "samples"}}
                for i, vj in enumerate(res["verdicts"])]

    elif args.command == "lowerbound":
        try:
            qs = [int(q) for q in args.q.split(",") if q.strip()]
        except ValueError:
            raise UsageError("--q takes comma-separated integers") from None
        if any(q < 0 for q in qs):
            raise UsageError("--q values must be >= 0")
        reports = [ex.lower_bound(G, q, args.trials, args.seed) for q in qs]
        payload["reports"] = reports
        rows = reports

    else:  # gen-instance
        kind = args.instance
        pair = kind in inst.PAIR_KINDS
        instance = _load_instance(G, args, pair=pair)
        payload["instance"] = instance.to_json()
        rows = [{"x": list(G.element(i)), **(
            {"f0": int(instance.oracle.f0.table[i]), "f1": int(instance.oracle.f1.table[i])}
            if pair else {"f": int(instance.oracle.table[i])})} for i in range(G.order)]

    _emit(args, payload, rows)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except inst.InstanceCheckFailed as exc:
        print(f"hgprop: instance check failed: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ValueError as exc:
        print(f"hgprop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except gr.BudgetExceeded as exc:
        print(f"hgprop: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
