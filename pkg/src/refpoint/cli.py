"""Command-line front end for batch experiments and the service.

Commands: `solve` one reference point against a model file, `sweep` the
two comparison procedures to CSV, `demo mdp` / `demo grid` to generate the
built-in study problems with their experiment outputs, `compare-explicit`
for the sampling-versus-projection experiment, and `serve` for the HTTP
session service. All CSV output carries a header row, comma separators
and `.` decimals.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import grid as gridmod
from . import mdp as mdpmod
from .model import ValidationError, from_json, to_json, validate
from .scalarize import (
    InfeasibleModelError,
    SolverConfig,
    UnboundedObjectiveError,
    criterion_bounds,
    solve_reference_point,
    sweep_reference_points,
    sweep_weights,
)
from .simplex import Tolerances


def _config(args) -> SolverConfig:
    return SolverConfig(tolerances=Tolerances(),
                        node_limit=getattr(args, "node_limit", 200_000))


def _load_model(path: str):
    data = Path(path).read_bytes()
    return from_json(data)


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _sweep_rows(model, n, method, config):
    header = ["method", "index"] + [f"C_{j + 1}" for j in range(model.num_objectives)]
    rows = []
    if method == "refpoint":
        for k, res in enumerate(sweep_reference_points(model, n, config=config)):
            rows.append([method, k, *[f"{v:.9g}" for v in res.outcome.criteria]])
    else:
        for k, out in enumerate(sweep_weights(model, n, config=config)):
            rows.append([method, k, *[f"{v:.9g}" for v in out.criteria]])
    return header, rows


def cmd_solve(args) -> int:
    model = _load_model(args.model)
    reference = [float(v) for v in args.ref.split(",") if v.strip() != ""]
    if len(reference) != model.num_objectives:
        print(f"error: model has {model.num_objectives} objectives, reference has "
              f"{len(reference)} values", file=sys.stderr)
        return 2
    config = _config(args)
    bounds = criterion_bounds(model, config)
    result = solve_reference_point(model, reference, bounds, config)
    print(json.dumps({
        "status": result.outcome.status.value,
        "reference": list(result.reference),
        "criteria": list(result.outcome.criteria),
        "achievement": result.achievement,
    }, indent=2))
    return 0


def cmd_sweep(args) -> int:
    model = _load_model(args.model)
    config = _config(args)
    header, rows = _sweep_rows(model, args.n, args.method, config)
    if args.out:
        _write_csv(args.out, header, rows)
        print(f"wrote {args.out}")
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
    return 0


def cmd_demo_mdp(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    mdp = mdpmod.generate_predator_prey(args.seed, states=args.states,
                                        actions=args.actions, horizon=args.horizon)
    model = mdpmod.build_mdp_model(mdp)
    (out / "model.json").write_bytes(to_json(model))
    config = _config(args)
    for method in ("weights", "refpoint"):
        header, rows = _sweep_rows(model, args.n, method, config)
        _write_csv(out / f"sweep_{method}.csv", header, rows)
    print(f"wrote {out}/model.json and sweep CSVs")
    return 0


def cmd_demo_grid(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    inst = gridmod.generate_instance(args.seed, args.rows, args.cols,
                                     budget=args.budget, cardinality=args.k)
    model = gridmod.build_grid_model(inst)
    (out / "model.json").write_bytes(to_json(model))
    config = _config(args)
    points = gridmod.explicit_baseline(inst, args.samples, args.keep, seed=args.seed)
    report = gridmod.project_and_gap(inst, points, config)
    names = [obj.name for obj in model.objectives]
    rows = []
    masks = out / "masks"
    masks.mkdir(exist_ok=True)
    for k, rec in enumerate(report.records):
        rows.append([k, "explicit", *[f"{v:.9g}" for v in rec.explicit], ""])
        rows.append([k, "refpoint", *[f"{v:.9g}" for v in rec.projected],
                     f"{rec.min_gap:.9g}"])
        decision = gridmod.decision_from_assignment(inst, rec.result.outcome.assignment)
        (masks / f"pair_{k:03d}.txt").write_text(
            "\n".join(gridmod.mask_lines(inst, decision)) + "\n")
    _write_csv(out / "compare.csv", ["pair", "method", *names, "min_gap"], rows)
    print(f"wrote {out}/model.json, compare.csv ({len(report.records)} pairs, "
          f"mean min gap {report.mean_min_gap:.4f}) and masks/")
    return 0


def cmd_compare_explicit(args) -> int:
    inst = gridmod.generate_instance(args.seed, args.rows, args.cols,
                                     budget=args.budget, cardinality=args.k)
    config = _config(args)
    points = gridmod.explicit_baseline(inst, args.samples, args.keep, seed=args.seed)
    report = gridmod.project_and_gap(inst, points, config)
    header = ["pair", "method", "wtt", "carbon", "species_1", "species_2", "species_3",
              "min_gap"]
    rows = []
    for k, rec in enumerate(report.records):
        rows.append([k, "explicit", *[f"{v:.9g}" for v in rec.explicit], ""])
        rows.append([k, "refpoint", *[f"{v:.9g}" for v in rec.projected],
                     f"{rec.min_gap:.9g}"])
    if args.out:
        _write_csv(args.out, header, rows)
        print(f"wrote {args.out}")
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"pairs: {len(report.records)}  mean min relative gap: "
          f"{report.mean_min_gap:.4f}")
    return 0


def cmd_validate(args) -> int:
    try:
        model = _load_model(args.model)
    except ValidationError as err:
        for violation in err.violations:
            print(violation, file=sys.stderr)
        return 1
    print(f"ok: {len(model.variables)} variables, {len(model.constraints)} constraints, "
          f"{model.num_objectives} objectives")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(state_dir=args.state, config=_config(args))
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="refpoint")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_node_limit(p):
        p.add_argument("--node-limit", type=int, default=200_000,
                       help="branch-and-bound node budget for binary models")

    p = sub.add_parser("solve", help="project one reference point")
    p.add_argument("--model", required=True)
    p.add_argument("--ref", required=True, help="comma-separated aspiration values")
    add_node_limit(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="run a comparison sweep, CSV out")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--method", choices=("refpoint", "weights"), default="refpoint")
    p.add_argument("--out")
    add_node_limit(p)
    p.set_defaults(func=cmd_sweep)

    demo = sub.add_parser("demo", help="generate the built-in study problems")
    demo_sub = demo.add_subparsers(dest="demo_kind", required=True)

    p = demo_sub.add_parser("mdp")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--states", type=int, default=10)
    p.add_argument("--actions", type=int, default=4)
    p.add_argument("--horizon", type=int, default=20)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--out", default="demo_mdp")
    add_node_limit(p)
    p.set_defaults(func=cmd_demo_mdp)

    p = demo_sub.add_parser("grid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rows", type=int, default=8)
    p.add_argument("--cols", type=int, default=8)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--budget", type=float, default=None)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--keep", type=int, default=10)
    p.add_argument("--out", default="demo_grid")
    add_node_limit(p)
    p.set_defaults(func=cmd_demo_grid)

    p = sub.add_parser("compare-explicit", help="sampling baseline vs projections")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rows", type=int, default=20)
    p.add_argument("--cols", type=int, default=20)
    p.add_argument("--k", type=int, default=12)
    p.add_argument("--budget", type=float, default=None)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--keep", type=int, default=300)
    p.add_argument("--out")
    add_node_limit(p)
    p.set_defaults(func=cmd_compare_explicit)

    p = sub.add_parser("validate", help="check a model document")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--state", default=None, help="state directory for persistence")
    add_node_limit(p)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, InfeasibleModelError, UnboundedObjectiveError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
