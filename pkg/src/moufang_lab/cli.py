"""Command-line entry point.

Exit codes: 0 all outcomes as expected, 1 mathematical failure, 2 input or format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import _config
from .free_malcev import (
    DegreeCapExceeded,
    EngelBudgetExceeded,
    FreeMalcevEngine,
    totals,
    witt_multidegree,
)
from .moufang import check_moufang, loop_exponent
from .pipeline import (
    BUILTIN,
    EXAMPLES,
    FLEET,
    PipelineInputError,
    run_builtin,
    run_example,
    run_pipeline,
)
from .schemas import (
    SchemaError,
    canonical_dumps,
    group_to_dict,
    load_triality,
    loop_to_dict,
    triality_to_dict,
    write_json,
)
from .triality import TrialityError, moufang_from_triality, verify_triality

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _emit(args, obj, text: str):
    if args.json:
        sys.stdout.write(json.dumps(obj, sort_keys=True, indent=1) + "\n")
    else:
        print(text)


def cmd_check_triality(args) -> int:
    inp = load_triality(args.file)
    if inp.triality is None:
        raise SchemaError("check-triality needs a group-based triality file")
    T = inp.triality
    rep = verify_triality(T.G, T.rho, T.sigma)
    rep.details["seed"] = args.seed
    _emit(args, {"input": inp.name, "seed": args.seed, "report": rep.to_dict()}, f"{inp.name} (seed={args.seed})\n{rep}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_extract_loop(args) -> int:
    inp = load_triality(args.file)
    if inp.triality is None:
        raise SchemaError("extract-loop needs a group-based triality file")
    try:
        U = moufang_from_triality(inp.triality)
    except TrialityError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    rep = check_moufang(U, seed=args.seed)
    loop = loop_to_dict(U)
    if args.out:
        write_json(args.out, loop)
    obj = {"input": inp.name, "seed": args.seed, "loop": loop, "exponent": loop_exponent(U), "report": rep.to_dict()}
    text = f"{inp.name}: loop of order {U.order}, exponent {obj['exponent']} (seed={args.seed})\n{rep}"
    if args.out:
        text += f"\nloop table written to {args.out}"
    _emit(args, obj, text)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_pipeline(args) -> int:
    if args.builtin:
        reps = [run_builtin(name, args.p, args.n, seed=args.seed) for name in (FLEET if args.builtin == "all" else [args.builtin])]
    else:
        if not args.file:
            raise SchemaError("give a triality file or --builtin NAME")
        reps = [_run_file(Path(args.file), args.p, args.n, args.seed)]
    if args.json:
        out = [r.to_dict() for r in reps]
        sys.stdout.write(json.dumps(out if len(out) > 1 else out[0], sort_keys=True, indent=1) + "\n")
    else:
        print("\n\n".join(r.summary() for r in reps))
    return EXIT_OK if all(r.ok for r in reps) else EXIT_FAIL


def _run_file(path: Path, p=None, n=None, seed=0):
    inp = load_triality(path)
    if inp.example is not None:
        q, sign = inp.example
        return run_example(p or q, sign, seed=seed, name=inp.name)
    return run_pipeline(inp.triality, p or inp.p_hint, n, seed=seed, name=inp.name)


def cmd_free_malcev(args) -> int:
    m, d = args.m, args.max_degree
    free = FreeMalcevEngine(m, args.p).dims(d)
    obj = {"m": m, "p": args.p, "max_degree": d, "free": _table(free)}
    lines = [f"free Malcev algebra M({m}) over F_{args.p}, degrees 1..{d}"]
    lines += _format(free, {g: witt_multidegree(g) for g in free})
    ok = all(free[g] >= witt_multidegree(g) for g in free)
    if args.engel_p is not None:
        q = args.engel_p ** args.engel_n
        eng = FreeMalcevEngine(m, args.engel_p, engel_q=q).dims(d)
        top = [eng[g] for g in eng if sum(g) == d]
        obj["engel"] = {"p": args.engel_p, "n": args.engel_n, "dims": _table(eng), "top_degree_vanishes": not any(top)}
        lines.append(f"Engel quotient M({m}, {args.engel_p}^{args.engel_n})")
        lines += _format(eng, free, other_label="free")
        lines.append(f"  all components of degree {d} vanish: {not any(top)}")
        ok &= all(eng[g] <= free[g] for g in eng)
    obj["ok"] = ok
    _emit(args, obj, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def _table(dims):
    return {
        "by_multidegree": {",".join(map(str, g)): v for g, v in dims.items()},
        "by_degree": {str(k): v for k, v in totals(dims).items()},
    }


def _format(dims, other, other_label="witt"):
    lines = []
    for deg, total in totals(dims).items():
        cells = "  ".join(f"{g}:{dims[g]}" for g in dims if sum(g) == deg and (dims[g] or other[g]))
        ref = sum(other[g] for g in dims if sum(g) == deg)
        lines.append(f"  degree {deg}: {total:>4}  ({other_label} {ref})  {cells}")
    return lines


def cmd_verify_lemmas(args) -> int:
    if not args.all and not args.fleet:
        raise SchemaError("use --all (built-in fleet) and/or --fleet DIR")
    reports, errors = [], []
    if args.fleet:
        files = sorted(Path(args.fleet).glob("*.json")) if Path(args.fleet).is_dir() else []
        if not files:
            print(f"no inputs in {args.fleet}", file=sys.stderr)
            return EXIT_FAIL
        for f in files:
            try:
                reports.append(_run_file(f, seed=args.seed))
            except (SchemaError, PipelineInputError) as exc:
                errors.append((f.name, str(exc)))
    else:
        reports = [run_builtin(name, seed=args.seed) for name in FLEET]
    rows = [(r.input, v) for r in reports for v in r.verdicts]
    if args.json:
        obj = {
            "seed": args.seed,
            "rows": [{"input": i, **v.to_dict()} for i, v in rows],
            "errors": [{"file": f, "error": e} for f, e in errors],
        }
        for r in obj["rows"]:
            r.pop("report", None)
        sys.stdout.write(json.dumps(obj, sort_keys=True, indent=1) + "\n")
    else:
        wi = max((len(i) for i, _ in rows), default=5)
        wc = max((len(v.check) for _, v in rows), default=5)
        print(f"verify-lemmas (seed={args.seed})")
        for i, v in rows:
            print(f"{i:<{wi}}  {v.check:<{wc}}  {v.label():<22} {v.ref}")
        for f, e in errors:
            print(f"{f}: unreadable: {e}")
    if any(v.unexpected for _, v in rows):
        return EXIT_FAIL
    return EXIT_INPUT if errors else EXIT_OK


def cmd_dump_fleet(args) -> int:
    """Write the built-in fleet as input files (descriptors where tables are too large)."""
    out = Path(args.dir)
    out.mkdir(parents=True, exist_ok=True)
    from .groups import heisenberg, modular_group

    for name, make in BUILTIN.items():
        if name.startswith("double"):
            base = heisenberg(5) if "heis" in name else modular_group(5)
            obj = {"construction": "group_doubling", "base": group_to_dict(base), "p_hint": 5}
        else:
            T, p = make()
            obj = triality_to_dict(T, p)
        write_json(out / f"{name}.json", obj)
    for name, (p, sign) in EXAMPLES.items():
        write_json(out / f"{name}.json", {"construction": "example_4", "p": p, "sigma_sign": sign})
    print(f"wrote {len(BUILTIN) + len(EXAMPLES)} files to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="moufang-lab", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0, help="seed for every sampled check (default 0)")
    ap.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        return sp

    sp = add("check-triality", cmd_check_triality, "verify a group with triality")
    sp.add_argument("file")
    sp = add("extract-loop", cmd_extract_loop, "extract the Moufang loop of sigma-commutators")
    sp.add_argument("file")
    sp.add_argument("--out", help="write the loop table here")
    sp = add("burnside-pipeline", cmd_pipeline, "run the full pipeline on a triality p-group")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--builtin", choices=FLEET + ["all"])
    sp.add_argument("--p", type=int)
    sp.add_argument("--n", type=int)
    sp = add("free-malcev", cmd_free_malcev, "dimension tables of truncated free Malcev algebras")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--max-degree", type=int, required=True)
    sp.add_argument("--p", type=int, default=5, help="characteristic (default 5)")
    sp.add_argument("--engel-p", type=int)
    sp.add_argument("--engel-n", type=int, default=1)
    sp = add("verify-lemmas", cmd_verify_lemmas, "one row per (input, lemma) over a fleet")
    sp.add_argument("--all", action="store_true", help="run every check on the built-in fleet")
    sp.add_argument("--fleet", help="directory of input files")
    sp = add("dump-fleet", cmd_dump_fleet, "write the built-in fleet as input files")
    sp.add_argument("dir")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PipelineInputError as exc:
        print(f"not a triality p-group: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (DegreeCapExceeded, EngelBudgetExceeded) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
