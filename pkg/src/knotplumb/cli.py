"""Command-line surface tying the pipeline together.

Subcommands: contfrac (negative continued fractions), graph (plumbing
construction), embed (lattice-embedding decision/enumeration), sweep
(parameter sweep to CSV) and audit (sweep verdicts against the expected
families).  Exit codes partition outcomes so scripts can branch on them:

    0  success (embed: embedding found; audit: perfect agreement)
    1  invalid input (bad fraction/spec/ranges, non-algebraic tower,
       not negative definite, bad config)
    2  graph --reduced on a spec with N < 0 (no negative definite form)
    3  embed: no embedding exists (exhaustive)
    4  embed: search budget exhausted, indeterminate
    5  audit: disagreements or indeterminate rows

Defaults may be supplied in a flat key=value config file (--config);
explicit flags override it, unknown keys are rejected.  The default
output directory is $KNOTPLUMB_OUT, falling back to the current
directory.
"""

import argparse
import json
import os
import sys

from . import hjcf
from .cabling import (
    CableTower,
    ReducibleBoundaryError,
    SurgerySpec,
    UnsupportedTowerError,
    closed_form_two_iter,
    raw_plumbing,
    reduced_plumbing,
)
from .classify import (
    DEFAULT_BUDGET,
    admissible_tuples,
    rows_to_csv,
    sweep,
    theorem_audit,
)
from .lattice import (
    SearchStatus,
    embedding_to_json_obj,
    enumerate_embeddings,
    find_embedding,
    render_vector,
)
from .plumbing import (
    NoNegativeDefiniteFormError,
    WeightedTree,
    det_exact,
    gram_matrix,
    is_negative_definite,
)

CONFIG_KEYS = {"out": str, "workers": int, "budget": int, "order": str, "timing": bool}


class CliError(Exception):
    def __init__(self, message, code=1):
        super().__init__(message)
        self.code = code


def load_config(path) -> dict:
    """Flat key=value file; '#' starts a comment; unknown keys are rejected."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in CONFIG_KEYS:
                raise CliError(f"{path}:{lineno}: unknown config key {key!r}")
            typ = CONFIG_KEYS[key]
            if typ is bool:
                if val.lower() not in ("0", "1", "true", "false"):
                    raise CliError(f"{path}:{lineno}: boolean expected for {key}")
                values[key] = val.lower() in ("1", "true")
            else:
                values[key] = typ(val)
    return values


def resolve(args, config, key, default):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    return default


def _parse_int_list(text):
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError:
        raise CliError(f"expected a comma-separated integer list, got {text!r}")


def _parse_spec(args) -> SurgerySpec:
    vals = _parse_int_list(args.pairs)
    if len(vals) % 2 != 0 or not vals:
        raise CliError(f"--pairs wants p1,a1[,p2,a2...], got {args.pairs!r}")
    pairs = tuple((vals[i], vals[i + 1]) for i in range(0, len(vals), 2))
    try:
        return SurgerySpec(CableTower(pairs), args.n)
    except ValueError as exc:
        raise CliError(str(exc))


# -- contfrac -----------------------------------------------------------------


def cmd_contfrac(args, config):
    out = {}
    if args.eval is not None:
        coeffs = tuple(_parse_int_list(args.eval))
        try:
            value = hjcf.eval_neg_cf(coeffs)
        except ValueError as exc:
            raise CliError(str(exc))
        out = {"coefficients": list(coeffs), "value": str(value)}
        text = str(value)
    else:
        if args.fraction is None:
            raise CliError("give a fraction like 7/2, or --eval coefficients")
        try:
            if "/" in args.fraction:
                num, _, den = args.fraction.partition("/")
                coeffs = hjcf.expand_neg_cf(int(num), int(den))
            else:
                coeffs = hjcf.expand_neg_cf(int(args.fraction), 1)
            value = hjcf.eval_neg_cf(coeffs)
        except ValueError as exc:
            raise CliError(str(exc))
        out = {"value": str(value), "coefficients": list(coeffs)}
        if args.dual:
            coeffs = hjcf.dual_point_rule(coeffs)
            out["dual"] = list(coeffs)
            out["dual_value"] = str(hjcf.eval_neg_cf(coeffs))
        if args.reverse:
            coeffs = tuple(reversed(coeffs))
            out["reversed"] = list(coeffs)
            out["reversed_value"] = str(hjcf.eval_neg_cf(coeffs))
        text = "[" + ",".join(str(a) for a in coeffs) + "]"
    print(json.dumps(out) if args.json else text)
    return 0


# -- graph --------------------------------------------------------------------


def _build_tree(spec, kind):
    try:
        if kind == "raw":
            return raw_plumbing(spec, with_roles=True)
        if kind == "closed-form":
            return closed_form_two_iter(spec, with_roles=True)
        tree = reduced_plumbing(spec)
        return tree, None
    except UnsupportedTowerError as exc:
        raise CliError(str(exc))
    except NoNegativeDefiniteFormError as exc:
        raise CliError(str(exc), code=2)
    except ReducibleBoundaryError as exc:
        raise CliError(str(exc), code=2)


def cmd_graph(args, config):
    spec = _parse_spec(args)
    kind = "reduced"
    if args.raw:
        kind = "raw"
    elif args.closed_form:
        kind = "closed-form"
    tree, roles = _build_tree(spec, kind)
    gram = gram_matrix(tree)
    det = det_exact(gram)
    negdef = is_negative_definite(gram)
    if args.dot:
        print(tree.to_dot(roles))
    elif args.json:
        obj = {
            "tree": json.loads(tree.to_json()),
            "rank": len(tree),
            "det": abs(det),
            "negative_definite": negdef,
        }
        if roles:
            obj["roles"] = {str(v): r for v, r in roles.items()}
        print(json.dumps(obj))
    else:
        print(f"rank {len(tree)}")
        print(f"det {abs(det)}")
        print(f"negative definite: {'yes' if negdef else 'no'}")
    return 0


# -- embed --------------------------------------------------------------------


def _embed_input(args):
    if args.graph_file:
        with open(args.graph_file) as fh:
            text = fh.read()
        obj = json.loads(text)
        if "tree" in obj:
            obj = obj["tree"]
        tree = WeightedTree.from_json(json.dumps(obj))
        name = os.path.splitext(os.path.basename(args.graph_file))[0]
        return tree, name
    if args.pairs is None or args.n is None:
        raise CliError("give a graph file, or --pairs and --n")
    spec = _parse_spec(args)
    tree, _ = _build_tree(spec, "reduced")
    name = "_".join(
        str(x) for pair in spec.knot.pairs for x in pair
    ) + f"_{spec.n}"
    return tree, name


def cmd_embed(args, config):
    tree, name = _embed_input(args)
    gram = gram_matrix(tree)
    if not is_negative_definite(gram):
        raise CliError("intersection form is not negative definite")
    rank = args.rank if args.rank is not None else len(gram)
    budget = resolve(args, config, "budget", DEFAULT_BUDGET)
    order = resolve(args, config, "order", "weight")
    out_dir = resolve(args, config, "out", os.environ.get("KNOTPLUMB_OUT", "."))
    if args.enumerate:
        classes = enumerate_embeddings(
            gram, rank=rank, locally_minimal_only=args.locally_minimal, order=order
        )
        print(f"{len(classes)} embedding class(es) into rank {rank}")
        for i, cls in enumerate(classes, start=1):
            print(f"class {i}:")
            for vec in cls:
                print(f"  {render_vector(vec)}")
        return 0
    result = find_embedding(gram, rank=rank, budget=budget, order=order)
    if result.status is SearchStatus.FOUND:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, f"witness_{name}.json")
        with open(path, "w") as fh:
            json.dump(embedding_to_json_obj(result.witness), fh)
        print(f"embedding found into rank {rank} ({result.nodes} nodes)")
        for vec in result.witness:
            print(f"  {render_vector(vec)}")
        print(f"witness written to {path}")
        return 0
    if result.status is SearchStatus.NONE:
        print(f"no embedding into rank {rank} (exhausted after {result.nodes} nodes)")
        return 3
    print(f"indeterminate: budget of {budget} nodes exhausted")
    return 4


# -- sweep and audit ----------------------------------------------------------


def _range_tuples(args):
    p1s = _parse_int_list(args.p1)
    k1s = _parse_int_list(args.k1)
    p2s = _parse_int_list(args.p2)
    ns = _parse_int_list(args.N)
    if args.k2_max < 1 or not p1s or not k1s or not p2s or not ns:
        raise CliError("invalid ranges")
    if any(p < 2 for p in p1s + p2s) or any(k < 1 for k in k1s):
        raise CliError("invalid ranges: p >= 2 and k1 >= 1 required")
    return admissible_tuples(p1s, k1s, p2s, args.k2_max, ns)


def _run_sweep(args, config):
    tuples = _range_tuples(args)
    budget = resolve(args, config, "budget", DEFAULT_BUDGET)
    workers = resolve(args, config, "workers", 1)
    order = resolve(args, config, "order", "weight")
    rows = sweep(tuples, budget=budget, order=order, workers=workers)
    out_dir = resolve(args, config, "out", os.environ.get("KNOTPLUMB_OUT", "."))
    witness_files = {}
    for row in rows:
        if row.witness is not None:
            os.makedirs(out_dir, exist_ok=True)
            path = os.path.join(
                out_dir, f"witness_{row.p1}_{row.a1}_{row.p2}_{row.a2}_{row.n}.json"
            )
            with open(path, "w") as fh:
                json.dump(embedding_to_json_obj(row.witness), fh)
            witness_files[row.key()] = path
    return rows, witness_files


def cmd_sweep(args, config):
    rows, witness_files = _run_sweep(args, config)
    timing = resolve(args, config, "timing", False)
    csv_text = rows_to_csv(rows, witness_files, timing=timing)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(csv_text)
        print(f"{len(rows)} rows written to {args.csv}")
    else:
        sys.stdout.write(csv_text)
    return 0


def cmd_audit(args, config):
    rows, witness_files = _run_sweep(args, config)
    report = theorem_audit(rows, family1_form=args.family_form)
    if args.csv:
        timing = resolve(args, config, "timing", False)
        with open(args.csv, "w") as fh:
            fh.write(rows_to_csv(rows, witness_files, timing=timing))
    print(json.dumps(report.to_json_obj(), indent=2))
    return 0 if report.perfect else 5


# -- wiring -------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="knotplumb",
        description="Plumbing graphs and the lattice-embedding obstruction "
        "for integral surgeries on algebraic iterated torus knots.",
    )
    parser.add_argument("--config", help="flat key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("contfrac", help="negative continued fractions")
    p.add_argument("fraction", nargs="?", help="rational like 7/2")
    p.add_argument("--eval", help="evaluate a comma-separated coefficient list")
    p.add_argument("--dual", action="store_true", help="apply the point rule")
    p.add_argument("--reverse", action="store_true", help="reverse the expansion")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_contfrac)

    p = sub.add_parser("graph", help="build a plumbing graph for a surgery")
    p.add_argument("--pairs", required=True, help="p1,a1[,p2,a2...]")
    p.add_argument("--n", type=int, required=True, help="surgery coefficient")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--raw", action="store_true")
    mode.add_argument("--reduced", action="store_true")
    mode.add_argument("--closed-form", dest="closed_form", action="store_true")
    p.add_argument("--dot", action="store_true", help="emit GraphViz")
    p.add_argument("--json", action="store_true", help="emit the tree as JSON")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("embed", help="decide lattice embeddability")
    p.add_argument("graph_file", nargs="?", help="plumbing JSON file")
    p.add_argument("--pairs", help="p1,a1[,p2,a2...] (build reduced graph)")
    p.add_argument("--n", type=int)
    p.add_argument("--rank", type=int, help="target rank (default: Gram dimension)")
    p.add_argument("--budget", type=int, help="search node budget")
    p.add_argument("--order", choices=("weight", "greedy", "input"),
                   help="vertex placement heuristic (default: weight)")
    p.add_argument("--enumerate", action="store_true", help="list all classes")
    p.add_argument(
        "--locally-minimal",
        action="store_true",
        help="with --enumerate, keep only embeddings using every coordinate",
    )
    p.add_argument("--out", help="output directory for witness files")
    p.set_defaults(func=cmd_embed)

    for name in ("sweep", "audit"):
        p = sub.add_parser(name, help=f"{name} over a tuple range")
        p.add_argument("--p1", default="2,3")
        p.add_argument("--k1", default="1,2,3")
        p.add_argument("--p2", default="2,3")
        p.add_argument("--k2-max", dest="k2_max", type=int, default=25)
        p.add_argument("--N", default="2,3,4,5,6")
        p.add_argument("--csv", help="write rows to this CSV file")
        p.add_argument("--workers", type=int)
        p.add_argument("--budget", type=int)
        p.add_argument("--order", choices=("weight", "greedy", "input"))
        p.add_argument("--timing", action="store_const", const=True, default=None,
                       help="fill the ms column (breaks byte-determinism)")
        p.add_argument("--out", help="output directory for witness files")
        if name == "audit":
            p.add_argument(
                "--family-form",
                choices=("derived", "printed"),
                default="derived",
                help="which printed/derived form of family 1 to audit against",
            )
            p.set_defaults(func=cmd_audit)
        else:
            p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config) if args.config else {}
        return args.func(args, config)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    raise SystemExit(main())
