"""Command-line front end.

Exit codes: 0 karoubi-equivalent (or success), 1 distinguished,
2 parse or validation error, 3 search budget exhausted.  A batch
comparison exits with the largest code among its pairs.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import covers, karoubi, presentation
from ._search import DEFAULT_BUDGET, Budget
from .corpus import generate_corpus
from .errors import BudgetExceeded, SoficError
from .invariants import analyze, compare_shifts, fd_preorder, kd_preorder, p_poset
from .presentation import ShiftHandle
from .semigroup import context_oracle, read_semigroup_table, shift_semigroup

EXIT_OK, EXIT_DISTINGUISHED, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _load(path: str, raw: bool):
    if raw or path.endswith(".sgp"):
        return read_semigroup_table(path)
    return ShiftHandle.from_file(path)


def _emit(obj, fmt: str, text_lines) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=2, ensure_ascii=False, default=_jsonable))
    else:
        print("\n".join(text_lines))


def _jsonable(o):
    if hasattr(o, "tolist"):
        return o.tolist()
    if hasattr(o, "item"):
        return o.item()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _write_dots(x, directory: str) -> None:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    s = shift_semigroup(x) if isinstance(x, ShiftHandle) else x
    (out / "karoubi.dot").write_text(karoubi.to_dot(karoubi.skeleton(karoubi.karoubi_envelope(s))))
    (out / "kd.dot").write_text(kd_preorder(x).to_dot("KD"))
    if isinstance(x, ShiftHandle):
        (out / "presentation.dot").write_text(presentation.to_dot(x.presentation, x.name))
        (out / "krieger.dot").write_text(covers.cover_to_dot(covers.krieger_cover(x)[0], "krieger"))
        (out / "p.dot").write_text(p_poset(x).to_dot("P"))
        try:
            (out / "fischer.dot").write_text(covers.cover_to_dot(covers.fischer_cover(x)[0], "fischer"))
            (out / "fd.dot").write_text(fd_preorder(x).to_dot("FD"))
        except SoficError:
            pass


def _oracle_check(h: ShiftHandle, bound: int) -> bool:
    """Every pair of distinct non-zero elements is separated by the context oracle."""
    s = shift_semigroup(h)
    words = [w for w in s.witnesses if w is not None]
    return all(not context_oracle(h.presentation, u, v, bound).equal
               for u, v in itertools.combinations(words, 2))


def cmd_analyze(args) -> int:
    x = _load(args.path, args.raw_semigroup)
    rep = analyze(x).to_json()
    if args.oracle_bound is not None and isinstance(x, ShiftHandle):
        rep["oracle_check"] = {"bound": args.oracle_bound, "separated": _oracle_check(x, args.oracle_bound)}
    lines = [f"{rep['name']}: |S| = {rep['semigroup']['order']}, "
             f"{len(rep['karoubi']['skeleton_objects'])} skeleton objects"]
    lines += [f"  {k} = {v}" for k, v in rep["flags"].items()]
    _emit(rep, args.format, lines)
    if args.dot:
        _write_dots(x, args.dot)
    return EXIT_OK


def _compare_pair(job):
    path_a, path_b, raw, budget, exhaustive = job
    try:
        v = compare_shifts(_load(path_a, raw), _load(path_b, raw), Budget(budget, "compare"), exhaustive)
    except BudgetExceeded as exc:
        return EXIT_BUDGET, {"a": path_a, "b": path_b, "error": str(exc)}
    except (SoficError, OSError) as exc:
        return EXIT_INVALID, {"a": path_a, "b": path_b, "error": f"{type(exc).__name__}: {exc}"}
    code = EXIT_DISTINGUISHED if v.distinguished else EXIT_OK
    return code, {"a": path_a, "b": path_b, **v.to_json()}


def _read_manifest(path: str):
    base = Path(path).parent
    pairs = []
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        toks = line.split("#", 1)[0].split()
        if not toks:
            continue
        if len(toks) != 2:
            raise SoficError(f"manifest line {n}: expected two paths")
        pairs.append(tuple(str(base / t) if not Path(t).is_absolute() else t for t in toks))
    return pairs


def cmd_batch(args) -> int:
    jobs = [(a, b, args.raw_semigroup, args.budget, args.exhaustive) for a, b in _read_manifest(args.batch)]
    if args.jobs == 1:
        results = [_compare_pair(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_compare_pair, jobs))
    codes = [c for c, _ in results]
    lines = [f"{r['a']} {r['b']}: " + r.get("verdict", r.get("error", "")) for _, r in results]
    _emit([r for _, r in results], args.format, lines)
    return max(codes, default=EXIT_OK)


def cmd_compare(args) -> int:
    if args.batch:
        if args.path_a or args.path_b:
            raise SoficError("--batch takes no positional paths")
        return cmd_batch(args)
    if not (args.path_a and args.path_b):
        raise SoficError("compare needs two paths or --batch")
    x1 = _load(args.path_a, args.raw_semigroup)
    x2 = _load(args.path_b, args.raw_semigroup)
    v = compare_shifts(x1, x2, Budget(args.budget, "compare"), args.exhaustive)
    lines = [f"verdict: {v.outcome}" + (f" (separated by {v.separator})" if v.separator else "")]
    lines += [f"  {r.name}: {r.status}" for r in v.rows]
    _emit(v.to_json(), args.format, lines)
    return EXIT_DISTINGUISHED if v.distinguished else EXIT_OK


def cmd_transform(args) -> int:
    if args.op == "induce":
        src = _load(args.path, args.raw_semigroup)
        s = shift_semigroup(src) if isinstance(src, ShiftHandle) else src
        p = presentation.induced_shift(s, s.letter_map)
    else:
        p = presentation.read_presentation(args.path)
        if args.op == "expand":
            if args.arg is None:
                raise SoficError("expand needs a letter")
            p = presentation.symbol_expansion(p, args.arg, args.diamond)
        else:
            try:
                n = int(args.arg)
            except (TypeError, ValueError):
                raise SoficError(f"{args.op} needs a positive integer") from None
            if n < 1:
                raise SoficError(f"{args.op} needs a positive integer")
            p = presentation.higher_block(p, n) if args.op == "block" else presentation.higher_power(p, n)
    text = presentation.dumps(p)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_corpus(args) -> int:
    out = Path(args.directory)
    out.mkdir(parents=True, exist_ok=True)
    for item in generate_corpus(args.seed, args.count):
        (out / f"{item.handle.name}.shift").write_text(
            f"# expandable letter: {item.letter}\n" + presentation.dumps(item.handle.presentation))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="search node budget")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--dot", metavar="DIR", help="write DOT renderings into DIR")
    common.add_argument("--raw-semigroup", action="store_true", help="inputs are semigroup tables")
    common.add_argument("--exhaustive", action="store_true", help="compute every comparison row")
    common.add_argument("--seed", type=int, default=2024, help="corpus generation seed")
    common.add_argument("--oracle-bound", type=_positive, help="word length bound for the context oracle check")

    parser = argparse.ArgumentParser(prog="soficinv", description="Flow-equivalence invariants of sofic shifts")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="report the invariants of one shift")
    p.add_argument("path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", parents=[common], help="compare two shifts")
    p.add_argument("path_a", nargs="?")
    p.add_argument("path_b", nargs="?")
    p.add_argument("--batch", metavar="MANIFEST", help="file of path pairs, one pair per line")
    p.add_argument("--jobs", type=_positive, default=1, help="worker processes for --batch")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("transform", parents=[common], help="rewrite a presentation")
    p.add_argument("path")
    p.add_argument("op", choices=("expand", "block", "power", "induce"))
    p.add_argument("arg", nargs="?")
    p.add_argument("--diamond", help="fresh letter used by expand")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("corpus", parents=[common], help="write the seeded random corpus")
    p.add_argument("directory")
    p.add_argument("--count", type=_positive, default=200)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SoficError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
