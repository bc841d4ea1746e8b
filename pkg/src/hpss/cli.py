"""Command-line front end.

    hpss validate    --example heis_ext --n 2
    hpss cohomology  --spec algebra.json
    hpss spectral    --example W4n6 --k 0 --lambda wt:1,1=1 --format json
    hpss degeneracy  --example heis_ext --n 1 --lambda wt:1,1=1
    hpss example-list
    hpss example-run heis_sum --m 1 --n 1 --lambda wt:1,2=1/2+i

Exit status: 0 success, 1 parse or contract error, 2 the bivector is not
holomorphic Poisson.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .calculus import Bivector, NotHolomorphicPoissonError
from .exact import GaussianRational
from .model import AlgebraSpec, builtin_example, example_catalog, validate
from .spectral import degeneracy_page, dolbeault_dims, max_pages

FAMILIES = ("heis_ext", "heis_sum", "W4n6", "P4n2")
_TOKEN = re.compile(r"^(wt|tt|ww):(\d+),(\d+)=(.+)$")


class InputError(Exception):
    """A user-facing parse or contract error (exit status 1)."""


# ---------------------------------------------------------------------------
# input


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read file: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def load_spec(args) -> AlgebraSpec:
    if args.spec and args.example:
        raise InputError("give either --spec or --example, not both")
    if args.spec:
        obj = _load_json(args.spec)
        try:
            return AlgebraSpec.from_json(obj)
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"{args.spec}:1:1: invalid algebra spec: {exc}") from exc
    if args.example:
        return _builtin(args.example, args)
    raise InputError("no algebra given: use --spec FILE or --example NAME")


def _builtin(name: str, args) -> AlgebraSpec:
    if name not in FAMILIES:
        raise InputError(f"unknown example {name!r}; choose from {', '.join(FAMILIES)}")
    sizes = {k: getattr(args, k) for k in ("n", "m", "k") if getattr(args, k, None) is not None}
    try:
        return builtin_example(name, **sizes)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def parse_lambda_tokens(spec: AlgebraSpec, tokens: list[str]) -> Bivector:
    """``wt:l,j=c`` on W_l∧T_j, ``tt:i,j=c`` on T_i∧T_j, ``ww:a,b=c`` on W_a∧W_b."""
    tables = {"wt": {}, "tt": {}, "ww": {}}
    bounds = {"wt": (spec.m, spec.n), "tt": (spec.n, spec.n), "ww": (spec.m, spec.m)}
    for pos, tok in enumerate(tokens, 1):
        match = _TOKEN.match(tok)
        if not match:
            raise InputError(f"--lambda token {pos} {tok!r} column 1: expected wt:l,j=c, tt:i,j=c or ww:a,b=c")
        kind, a, b, coeff = match.group(1), int(match.group(2)), int(match.group(3)), match.group(4)
        hi_a, hi_b = bounds[kind]
        if not (1 <= a <= hi_a and 1 <= b <= hi_b):
            raise InputError(f"--lambda token {pos} {tok!r} column 4: index ({a},{b}) outside 1..{hi_a} x 1..{hi_b}")
        try:
            value = GaussianRational.parse(coeff)
        except ValueError as exc:
            raise InputError(f"--lambda token {pos} {tok!r} column {match.start(4) + 1}: {exc}") from exc
        table = tables[kind]
        table[(a, b)] = table[(a, b)] + value if (a, b) in table else value
    return Bivector.from_coefficients(spec, tables["wt"], tables["tt"], tables["ww"])


def load_bivector(spec: AlgebraSpec, args) -> Bivector:
    """The ``--bivector`` file wins over ``--lambda`` tokens."""
    if getattr(args, "bivector", None):
        obj = _load_json(args.bivector)
        try:
            return Bivector.from_json(spec, obj)
        except (ValueError, KeyError, TypeError, IndexError) as exc:
            raise InputError(f"{args.bivector}:1:1: invalid bivector: {exc}") from exc
    return parse_lambda_tokens(spec, getattr(args, "lam", None) or [])


# ---------------------------------------------------------------------------
# output


def grid(dims: dict[tuple[int, int], int], N: int, title: str) -> str:
    """Grid with p increasing to the right and q increasing upward."""
    width = max([len(str(d)) for d in dims.values()] + [3])
    lines = [title]
    for q in range(N, -1, -1):
        cells = " ".join(str(dims.get((p, q), 0)).rjust(width) for p in range(N + 1))
        lines.append(f"q={q:<2}| {cells}")
    lines.append("    +" + "-" * ((width + 1) * (N + 1) + 1))
    lines.append("      " + " ".join(f"p={p}".rjust(width) for p in range(N + 1)))
    return "\n".join(lines)


def _matrix_rows(mat) -> list[str]:
    dense = mat.to_dense()
    cells = [[str(x) for x in row] for row in dense]
    width = max((len(c) for row in cells for c in row), default=1)
    return ["  [ " + " ".join(c.rjust(width) for c in row) + " ]" for row in cells]


def _differentials_json(pages) -> list[dict]:
    out = []
    for pg in pages:
        for (p, q), mat in sorted(pg.d_blocks.items()):
            if mat.is_zero():
                continue
            out.append(
                {
                    "r": pg.r,
                    "source": [p, q],
                    "target": [p + pg.r, q - pg.r + 1],
                    "shape": [mat.rows, mat.cols],
                    "entries": [[r, c, v.to_json()] for (r, c), v in sorted(mat.entries.items())],
                }
            )
    return out


def _report_table(spec: AlgebraSpec, rep, with_differentials: bool) -> str:
    lines = [f"algebra {spec.name or '(unnamed)'}: n={spec.n}, m={spec.m}"]
    for pg in rep.pages:
        lines.append("")
        lines.append(grid(pg.dims, spec.N, f"E_{pg.r}"))
        if with_differentials:
            for (p, q) in pg.nonzero_differentials():
                mat = pg.d_blocks[(p, q)]
                lines.append(f"d_{pg.r}: E_{pg.r}^({p},{q}) -> E_{pg.r}^({p + pg.r},{q - pg.r + 1})")
                lines.extend(_matrix_rows(mat))
    lines.append("")
    lines.append("H^n_Λ: " + ", ".join(f"n={n}:{d}" for n, d in sorted(rep.h_lambda.items())))
    lines.append(f"degeneracy page: {rep.page}" + ("" if rep.converged else " (page cap reached)"))
    for key, val in rep.checks.items():
        lines.append(f"  {key}: {_fmt(val)}")
    named = [(k, v) for k, v in rep.theorems.items() if v is not None]
    if named:
        lines.append("theorem checks: " + ", ".join(f"{k}={'ok' if v else 'FAILED'}" for k, v in named))
    return "\n".join(lines)


def _fmt(val) -> str:
    if val is None:
        return "n/a (needs m = 1)"
    if isinstance(val, bool):
        return "yes" if val else "no"
    return str(val)


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)


_FLAT = re.compile(r"\[\s+([^\[\]{}]*?)\s+\]")


def _dumps(obj) -> str:
    """Indented JSON with innermost scalar arrays kept on one line."""
    text = json.dumps(obj, indent=2)
    return _FLAT.sub(lambda mt: "[" + re.sub(r",\s+", ", ", mt.group(1)) + "]", text)


# ---------------------------------------------------------------------------
# verbs


def cmd_validate(args) -> int:
    spec = load_spec(args)
    rep = validate(spec)
    if args.format == "json":
        _emit(args, _dumps(rep.to_json()))
    else:
        lines = [f"algebra {spec.name or '(unnamed)'}: n={spec.n}, m={spec.m}", f"valid: {_fmt(rep.valid)}", f"m = 1: {_fmt(rep.m_is_1)}"]
        lines += [f"warning: {w}" for w in rep.warnings] or ["no warnings"]
        _emit(args, "\n".join(lines))
    return 0


def cmd_cohomology(args) -> int:
    spec = load_spec(args)
    table = dolbeault_dims(spec)
    if args.format == "json":
        _emit(args, _dumps({"name": spec.name, "n": spec.n, "m": spec.m, **table.to_json()}))
    else:
        _emit(args, grid(table.dims, spec.N, f"H^q(g^(p,0)) for {spec.name or '(unnamed)'}"))
    return 0


def _run_degeneracy(args, spec: AlgebraSpec, with_differentials: bool) -> int:
    lam = load_bivector(spec, args)
    pages = args.pages if args.pages is not None else max_pages(spec)
    rep = degeneracy_page(spec, lam, pages=pages, strict=False)
    if args.format == "json":
        obj = rep.to_json()
        if with_differentials:
            obj["differentials"] = _differentials_json(rep.pages)
        _emit(args, _dumps(obj))
    else:
        _emit(args, _report_table(spec, rep, with_differentials))
    return 0


def cmd_spectral(args) -> int:
    return _run_degeneracy(args, load_spec(args), with_differentials=True)


def cmd_degeneracy(args) -> int:
    return _run_degeneracy(args, load_spec(args), with_differentials=False)


def cmd_example_list(args) -> int:
    cat = example_catalog()
    if args.format == "json":
        _emit(args, _dumps(cat))
        return 0
    lines = []
    for item in cat:
        params = ", ".join(f"{k}: {v}" for k, v in item["parameters"].items())
        lines.append(f"{item['name']}({params})")
        lines.append(f"  {item['description']}")
        consts = ", ".join(
            f"E^{e['l']}_{e['k']}{e['j']} = {GaussianRational.from_json(e)}" for e in item["E"]
        )
        sizes = ", ".join(f"{k}={v}" for k, v in item["smallest"].items())
        lines.append(f"  at {sizes}: {consts}")
    _emit(args, "\n".join(lines))
    return 0


def cmd_example_run(args) -> int:
    return _run_degeneracy(args, _builtin(args.name, args), with_differentials=False)


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, source: bool = True, bivector: bool = False):
    if source:
        p.add_argument("--spec", help="algebra spec JSON file")
        p.add_argument("--example", help=f"built-in family: {', '.join(FAMILIES)}")
    p.add_argument("--n", type=int, help="size parameter n")
    p.add_argument("--m", type=int, help="size parameter m")
    p.add_argument("--k", type=int, help="block range 0..k (W4n6, P4n2)")
    if bivector:
        p.add_argument("--lambda", dest="lam", nargs="+", action="extend", metavar="TOKEN",
                       help="bivector tokens wt:l,j=c tt:i,j=c ww:a,b=c")
        p.add_argument("--bivector", help="bivector JSON file (overrides --lambda)")
        p.add_argument("--pages", type=int, help="page cap (default $HPSS_MAX_PAGES or n+m+1)")
        p.add_argument("--dump-bivector", help="also write the bivector as JSON to this path")
    p.add_argument("--dump-spec", help="also write the algebra spec as JSON to this path")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--output", help="write the report here instead of stdout")


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with status 1; status 2 is reserved for rejected bivectors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hpss", description="Holomorphic Poisson spectral sequences on nilmanifolds.")
    sub = parser.add_subparsers(dest="verb", required=True)
    _common(sub.add_parser("validate", help="check an algebra and report center warnings"))
    _common(sub.add_parser("cohomology", help="invariant Dolbeault dimensions H^q(g^(p,0))"))
    _common(sub.add_parser("spectral", help="all pages with their differentials"), bivector=True)
    _common(sub.add_parser("degeneracy", help="degeneracy page and theorem flags"), bivector=True)
    el = sub.add_parser("example-list", help="list the built-in families")
    el.add_argument("--format", choices=("table", "json"), default="table")
    el.add_argument("--output")
    run = sub.add_parser("example-run", help="degeneracy report for a built-in family")
    run.add_argument("name", choices=FAMILIES)
    _common(run, source=False, bivector=True)
    return parser


_VERBS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "spectral": cmd_spectral,
    "degeneracy": cmd_degeneracy,
    "example-list": cmd_example_list,
    "example-run": cmd_example_run,
}


def _dump_inputs(args):
    if getattr(args, "dump_spec", None) or getattr(args, "dump_bivector", None):
        spec = _builtin(args.name, args) if args.verb == "example-run" else load_spec(args)
        if args.dump_spec:
            Path(args.dump_spec).write_text(spec.dumps() + "\n")
        if getattr(args, "dump_bivector", None):
            Path(args.dump_bivector).write_text(_dumps(load_bivector(spec, args).to_json()) + "\n")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _dump_inputs(args)
        return _VERBS[args.verb](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NotHolomorphicPoissonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
