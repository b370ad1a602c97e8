"""``norm1`` command line front end."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from importlib import resources

from . import __version__
from .errors import BudgetExceeded, EngineMismatch, Norm1Error

EXIT_OK, EXIT_USAGE, EXIT_ASSERT = 0, 1, 2
NAMED = {(1, 0, 0): "a", (0, 1, 0): "b", (0, 0, 1): "c"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--p expects an integer, got {text!r}")
    if p not in (3, 5, 7, 11, 13):
        raise argparse.ArgumentTypeError(f"--p must be an odd prime between 3 and 13, got {p}")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("markdown", "json"), default="markdown")
    common.add_argument("--plot-dir", metavar="DIR", help="write matplotlib figures here")
    common.add_argument("--dump-lattices", metavar="DIR", help="write lattice JSON files here")
    common.add_argument("--dump-cocycles", metavar="DIR", help="write cocycle JSON files here")
    common.add_argument("--dump-matrices", metavar="DIR", help="write coboundary matrix JSON files here")
    common.add_argument("--cache", metavar="DIR", help="content-addressed cache for command output")

    parser = _Parser(prog="norm1", description="Cohomology of E_p(p^3) and norm one tori.")
    parser.add_argument("--version", action="version", version=f"norm1 {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("info", parents=[common], help="group facts and subgroup classes")
    s.add_argument("--p", type=_prime, default=3)

    s = sub.add_parser("qz-kernels", parents=[common], help="restriction kernels on H^2(G,Q/Z)")
    s.add_argument("--p", type=_prime, default=3)

    s = sub.add_parser("jg-kernels", parents=[common], help="restriction kernels on H^2(G,J_{G/H})")
    s.add_argument("--p", type=_prime, default=3)
    s.add_argument("--stabilizer", choices=("1", "a"), default="1")
    s.add_argument("--engine", choices=("direct", "reduction", "both"), default="reduction")

    s = sub.add_parser("cohomology", parents=[common], help="one cohomology group H^n(H', M)")
    s.add_argument("--p", type=_prime, default=3)
    s.add_argument("--subgroup", required=True)
    s.add_argument("--coeff", choices=("Z", "ZGH", "J"), required=True)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--stabilizer", choices=("1", "a"), default="a")

    s = sub.add_parser("sha", parents=[common], help="Sha, A and tau for a place scenario")
    s.add_argument("--p", type=_prime, default=3)
    s.add_argument("--stabilizer", choices=("1", "a"), default="1")
    s.add_argument("--places", default="", help='e.g. "K0;G" or "gens:0,1,0/0,0,1"')
    s.add_argument("--no-cyclic", action="store_true", help="do not add every cyclic subgroup")

    s = sub.add_parser("sweep", parents=[common], help="adjudicate every ramified subset")
    s.add_argument("--p", type=_prime, default=3)
    s.add_argument("--stabilizer", choices=("1", "a", "both"), default="both")

    s = sub.add_parser("selftest", parents=[common], help="run the built-in checks")
    s.add_argument("--level", choices=("quick", "full"), default="quick")
    return parser


# ---------------------------------------------------------------------------
# schemas and output


def load_schema(name: str) -> dict:
    return json.loads(resources.files("norm1lab").joinpath("schemas", f"{name}.json").read_text())


def validate(doc, name: str) -> None:
    import jsonschema

    jsonschema.validate(doc, load_schema(name))


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _write_json(directory: str, name: str, doc) -> None:
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, name), "w") as fh:
        fh.write(doc if isinstance(doc, str) else _dumps(doc))


def lattice_dump(M) -> dict:
    gens = dict(M.generator_matrices)
    members = set(M.group.elements)
    for g in NAMED:
        if g in members:
            gens.setdefault(g, M.action(g))
    named = {NAMED.get(g, "a^{} b^{} c^{}".format(*g) if isinstance(g, tuple) else str(g)): m.tolist() for g, m in gens.items()}
    return {"name": M.name, "rank": M.rank, "labels": list(M.labels), "generators": named}


# ---------------------------------------------------------------------------
# commands return (json document, schema name, markdown, exit status)


def cmd_info(args):
    from .pipeline import subgroup_display, workspace

    heis = workspace(args.p).heis
    doc = heis.facts()
    classes = []
    for S in heis.subgroup_classes():
        classes.append({
            "label": S.label,
            "display": subgroup_display(S.label, args.p),
            "order": S.order,
            "generators": [list(g) for g in S.generators],
            "conjugates": heis.conjugacy_class_size(S),
            "normal": heis.is_normal(S),
        })
    doc["classes"] = classes
    lines = [
        f"# E_{args.p}({args.p}^3)",
        "",
        f"- order: {doc['order']}",
        f"- exponent: {doc['exponent']}",
        f"- center = derived subgroup: {len(doc['center'])} elements",
        f"- abelianization: {' + '.join(f'Z/{q}' for q in doc['abelianization'])}",
        "",
        "| label | subgroup | order | conjugates | normal |",
        "|---|---|---|---|---|",
    ]
    for c in classes:
        lines.append(f"| {c['label']} | {c['display']} | {c['order']} | {c['conjugates']} | {'yes' if c['normal'] else 'no'} |")
    return doc, "info", "\n".join(lines) + "\n", EXIT_OK


def cmd_qz(args):
    from .cochains import cocycle_json
    from .pipeline import qz_kernel_table, workspace

    t = qz_kernel_table(args.p)
    if args.dump_cocycles:
        ws = workspace(args.p)
        for name, f in zip(("f1", "f2"), ws.f1f2):
            _write_json(args.dump_cocycles, f"{name}_p{args.p}.json", cocycle_json(ws.G, 2, f.table, modulus=f.modulus))
    if args.plot_dir:
        from .plotting import write_figures

        write_figures(args.plot_dir, args.p, tables=[t])
    doc = {**t.to_json(), "engine": t.engine}
    return doc, "table", t.to_markdown(), EXIT_OK


def cmd_jg(args):
    from .cochains import cocycle_json
    from .pipeline import DirectEngine, lattice_kernel_table, workspace

    try:
        t = lattice_kernel_table(args.p, args.stabilizer, args.engine)
    except EngineMismatch as exc:
        return {"error": str(exc)}, None, f"engine disagreement: {exc}\n", EXIT_ASSERT
    ws = workspace(args.p)
    if args.dump_lattices:
        P, J = ws.lattices(args.stabilizer)
        _write_json(args.dump_lattices, f"P_p{args.p}_H{args.stabilizer}.json", lattice_dump(P))
        _write_json(args.dump_lattices, f"J_p{args.p}_H{args.stabilizer}.json", lattice_dump(J))
    if args.dump_cocycles and args.engine != "reduction":
        h2 = DirectEngine(args.p, args.stabilizer).h2
        for i, y in enumerate(h2.representatives):
            _write_json(args.dump_cocycles, f"h2_G_J_p{args.p}_H{args.stabilizer}_{i}.json",
                        cocycle_json(ws.G, 2, y, lattice=ws.lattices(args.stabilizer)[1].name))
    if args.plot_dir:
        from .plotting import write_figures

        write_figures(args.plot_dir, args.p, tables=[t])
    doc = {**t.to_json(), "engine": t.engine}
    md = t.to_markdown()
    if args.engine == "both":
        md += "\nengines agree on every row\n"
        doc["agreement"] = True
    return doc, "table", md, EXIT_OK


def cmd_cohomology(args):
    from .adjudicator import resolve_place
    from .cochains import boundary_matrix, cocycle_json
    from .pipeline import workspace

    if args.degree < 0:
        raise UsageError("--degree must be non-negative")
    label = resolve_place(args.subgroup, args.p)
    ws = workspace(args.p)
    h = ws.cohomology(label, args.coeff, args.degree, args.stabilizer)
    M = ws.lattice(args.coeff, args.stabilizer)
    S = ws.group_of(label)
    if M is not None and label != "G":
        from .lattice import restrict

        M = restrict(M, S)
    if args.dump_lattices and M is not None:
        _write_json(args.dump_lattices, f"{args.coeff}_{label}_p{args.p}.json", lattice_dump(M))
    if args.dump_cocycles:
        for i, y in enumerate(h.representatives):
            _write_json(args.dump_cocycles, f"H{args.degree}_{label}_{args.coeff}_{i}.json",
                        cocycle_json(S, args.degree, y, lattice=M.name if M is not None else "Z"))
    if args.dump_matrices:
        for n in sorted({max(args.degree - 1, 0), args.degree}):
            _write_json(args.dump_matrices, f"d{n}_{label}_{args.coeff}.json", boundary_matrix(S, M, n).to_json())
    doc = {**h.to_json(), "p": args.p, "subgroup": label, "text": str(h.structure)}
    coeff = {"Z": "Z", "ZGH": "Z[G/H]", "J": "J_{G/H}"}[args.coeff]
    if args.coeff != "Z":
        coeff += ", H=" + ("1" if args.stabilizer == "1" else "<a>")
    md = f"H^{args.degree}({label}, {coeff}) = {h.structure}\n"
    return doc, "cohomology", md, EXIT_OK


def cmd_sha(args):
    from .adjudicator import PlaceScenario, adjudicate

    s = PlaceScenario.parse(args.p, args.stabilizer, args.places, include_all_cyclic=not args.no_cyclic)
    rep = adjudicate(s)
    if args.plot_dir:
        from .plotting import write_figures

        write_figures(args.plot_dir, args.p, sweeps=[args.stabilizer])
    return rep.to_json(), "sha_report", rep.to_markdown(), EXIT_OK


def cmd_sweep(args):
    from .adjudicator import scenario_sweep

    stabs = ("1", "a") if args.stabilizer == "both" else (args.stabilizer,)
    results = [scenario_sweep(args.p, s) for s in stabs]
    if args.plot_dir:
        from .plotting import write_figures

        write_figures(args.plot_dir, args.p, sweeps=list(stabs))
    status = EXIT_OK if all(r.passed for r in results) else EXIT_ASSERT
    docs = [r.to_json() for r in results]
    doc = docs[0] if len(docs) == 1 else {"sweeps": docs}
    return doc, "sweep" if len(docs) == 1 else None, "\n".join(r.to_markdown() for r in results), status


def cmd_selftest(args):
    from .selftest import run_selftest

    checks = run_selftest(args.level)
    passed = all(c.passed for c in checks)
    doc = {"level": args.level, "passed": passed, "checks": [c.to_json() for c in checks]}
    lines = [f"# Self-test ({args.level})", "", "| check | result | detail |", "|---|---|---|"]
    for c in checks:
        lines.append(f"| {c.name} | {'PASS' if c.passed else 'FAIL'} | {c.detail} |")
    return doc, "selftest", "\n".join(lines) + "\n", EXIT_OK if passed else EXIT_ASSERT


COMMANDS = {
    "info": cmd_info,
    "qz-kernels": cmd_qz,
    "jg-kernels": cmd_jg,
    "cohomology": cmd_cohomology,
    "sha": cmd_sha,
    "sweep": cmd_sweep,
    "selftest": cmd_selftest,
}
SIDE_EFFECTS = ("plot_dir", "dump_lattices", "dump_cocycles", "dump_matrices", "cache")


def _cache_key(args) -> str:
    d = {k: v for k, v in sorted(vars(args).items()) if k not in SIDE_EFFECTS}
    d["version"] = __version__
    d["budget"] = os.environ.get("NORM1_BUDGET", "")
    return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    if not args.command:
        print("usage error: missing command (one of " + ", ".join(COMMANDS) + ")", file=err)
        return EXIT_USAGE

    cache_path = None
    uses_side_effects = any(getattr(args, k, None) for k in SIDE_EFFECTS if k != "cache")
    if args.cache and not uses_side_effects and args.command != "selftest":
        os.makedirs(args.cache, exist_ok=True)
        cache_path = os.path.join(args.cache, _cache_key(args) + ".json")
        if os.path.exists(cache_path):
            with open(cache_path) as fh:
                hit = json.load(fh)
            out.write(hit["text"])
            return hit["status"]

    try:
        doc, schema, md, status = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=err)
        return EXIT_USAGE
    except (EngineMismatch, AssertionError) as exc:
        print(f"assertion failed: {exc}", file=err)
        return EXIT_ASSERT
    except Norm1Error as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE

    if args.format == "json":
        if schema:
            validate(doc, schema)
        text = _dumps(doc)
    else:
        text = md
    out.write(text)
    if cache_path:
        with open(cache_path, "w") as fh:
            json.dump({"text": text, "status": status}, fh)
    return status


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
