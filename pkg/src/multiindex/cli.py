"""Command-line front end: ``multiindex <command> <expr>... [options]``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import ode, ode_calculus, spde, spde_calculus
from .algebra import LinComb, Tensor2
from .errors import MultiIndexError, ParseError
from .oracles import LAWS, run_law_suite
from .textio import encode_json, parse, render, render_key, render_latex

COMMANDS = (
    "delta",
    "delta-minus",
    "star1",
    "star2",
    "insert",
    "adjoint-d",
    "adjoint-partial",
    "pair",
    "symmetry",
    "enumerate",
    "laws",
)

ERROR_CODES = {
    "NotPopulatedError": "not-populated",
    "EmptyInsertionError": "empty-insertion",
    "SizeMismatchError": "size-mismatch",
    "UndefinedInputError": "undefined-input",
    "KindMismatchError": "kind-mismatch",
    "UnknownLawError": "unknown-law",
    "ParseError": "syntax-error",
    "UsageError": "usage",
}


class UsageError(MultiIndexError):
    pass


@dataclass(frozen=True)
class Session:
    mode: str = "ode"
    dim: int = 1
    labels: tuple[str, ...] = ("l",)
    max_grade: int | None = None
    fmt: str = "text"
    seed: int | None = None

    def __post_init__(self):
        if self.mode not in ("ode", "spde"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.dim < 0:
            raise UsageError("dimension must be nonnegative")

    def grade(self) -> int:
        if self.max_grade is None:
            raise UsageError("grade bound required: pass --max-grade for SPDE coproducts")
        return self.max_grade


def _vector(text: str, session: Session) -> tuple[int, ...]:
    try:
        vec = tuple(int(x) for x in text.strip().strip("()").split(","))
    except ValueError as exc:
        raise ParseError(f"bad vector {text!r}") from exc
    if len(vec) != session.dim + 1:
        raise ParseError(f"dimension mismatch: vector {vec} needs {session.dim + 1} entries")
    return vec


def _check_labels(x: LinComb, session: Session) -> None:
    allowed = set(session.labels) | {spde.TRUNK_LABEL}

    def visit(key):
        if isinstance(key, spde.SpdeMultiIndex):
            for label in key.labels():
                if label not in allowed:
                    raise ParseError(f"unknown label {label!r}; configured labels: {', '.join(sorted(allowed))}")
        elif isinstance(key, Tensor2):
            visit(key.left)
            visit(key.right)
        elif isinstance(key, spde.SpdeForest):
            for m in key.members:
                visit(m)
        elif isinstance(key, spde.SpdePlainForest):
            for m in key:
                visit(m)

    for key in x:
        visit(key)


def read(text: str, session: Session) -> LinComb:
    x = parse(text, session.mode, session.dim if session.mode == "spde" else None)
    if session.mode == "spde":
        _check_labels(x, session)
    return x


def _as_forest(x: LinComb, session: Session) -> LinComb:
    """A multi-index where a forest is expected is read as the one-member forest."""
    if session.mode == "ode":
        return x.map_keys(lambda k: k if isinstance(k, ode.OdeForest) else ode.OdeForest([k]))
    return x.map_keys(lambda k: k if isinstance(k, spde.SpdePlainForest) else spde.SpdePlainForest([k]))


def _linear(fn, x: LinComb) -> LinComb:
    out = LinComb.zero()
    for key, c in x.items():
        out = out + c * fn(key)
    return out


def _bilinear(fn, x: LinComb, y: LinComb) -> LinComb:
    out = LinComb.zero()
    for kx, cx in x.items():
        for ky, cy in y.items():
            out = out + (cx * cy) * fn(kx, ky)
    return out


def _scalar(c: Fraction, fmt: str) -> str:
    c = Fraction(c)
    if fmt == "json":
        return json.dumps({"value": {"num": str(c.numerator), "den": str(c.denominator)}})
    if fmt == "latex" and c.denominator != 1:
        return f"\\frac{{{c.numerator}}}{{{c.denominator}}}"
    return str(c)


def _listing(keys: list, fmt: str) -> str:
    if fmt == "json":
        return "[" + ", ".join(encode_json(LinComb.single(k)) for k in keys) + "]"
    if fmt == "latex":
        return "\n".join(render_latex(k) for k in keys)
    return "\n".join(render_key(k) for k in keys)


# -- commands --------------------------------------------------------------------


def cmd_delta(args, s: Session) -> str:
    x = read(args.exprs[0], s)
    if s.mode == "ode":
        fn = ode_calculus.delta_primal if args.formula == "primal" else ode_calculus.delta_adjoint
        return render(_linear(fn, x), s.fmt)
    g = s.grade()
    fn = spde_calculus.delta_spde_primal if args.formula == "primal" else spde_calculus.delta_spde_adjoint
    return render(_linear(lambda k: fn(k, g), x), s.fmt)


def cmd_delta_minus(args, s: Session) -> str:
    x = read(args.exprs[0], s)
    if s.mode == "ode":
        fn = ode_calculus.delta_minus_primal if args.formula == "primal" else ode_calculus.delta_minus_adjoint
        return render(_linear(fn, x), s.fmt)
    g = s.grade()
    fn = spde_calculus.delta_minus_spde_primal if args.formula == "primal" else spde_calculus.delta_minus_spde_adjoint
    return render(_linear(lambda k: fn(k, g), x), s.fmt)


def cmd_star2(args, s: Session) -> str:
    f, m = read(args.exprs[0], s), read(args.exprs[1], s)
    if s.mode == "ode":
        return render(_bilinear(ode_calculus.star2, _as_forest(f, s), m), s.fmt)
    return render(_bilinear(spde_calculus.star2_spde, f, m), s.fmt)


def cmd_star1(args, s: Session) -> str:
    f, t = _as_forest(read(args.exprs[0], s), s), read(args.exprs[1], s)
    fn = ode_calculus.star1 if s.mode == "ode" else spde_calculus.star1_spde
    return render(_bilinear(fn, f, t), s.fmt)


def cmd_insert(args, s: Session) -> str:
    a, b = read(args.exprs[0], s), read(args.exprs[1], s)
    fn = ode_calculus.insert if s.mode == "ode" else spde_calculus.insert_spde
    return render(_bilinear(fn, a, b), s.fmt)


def cmd_adjoint_d(args, s: Session) -> str:
    x = read(args.exprs[0], s)
    if s.mode == "ode":
        return render(ode.adjoint_Dbar_power(x, args.power), s.fmt)
    if not args.letter:
        raise UsageError("adjoint-d in spde mode needs --letter")
    n = _vector(args.letter, s)
    for _ in range(args.power):
        x = spde.adjoint_Dn(x, n)
    return render(x, s.fmt)


def cmd_adjoint_partial(args, s: Session) -> str:
    if s.mode != "spde":
        raise UsageError("adjoint-partial is only defined in spde mode")
    if not args.k:
        raise UsageError("adjoint-partial needs --k")
    return render(spde.adjoint_partial_k(read(args.exprs[0], s), _vector(args.k, s)), s.fmt)


def cmd_pair(args, s: Session) -> str:
    a, b = read(args.exprs[0], s), read(args.exprs[1], s)
    return _scalar(ode.inner_product(a, b), s.fmt)


def cmd_symmetry(args, s: Session) -> str:
    x = read(args.exprs[0], s)
    if len(x) != 1 or next(iter(x.values())) != 1:
        raise UsageError("symmetry expects a single basis element")
    key = next(iter(x))
    if isinstance(key, Tensor2):
        raise UsageError("symmetry expects a multi-index or a forest")
    return _scalar(key.symmetry(), s.fmt)


def _single_key(text: str, s: Session):
    x = read(text, s)
    if len(x) != 1:
        raise UsageError("expected a single basis element")
    return next(iter(x))


def cmd_enumerate(args, s: Session) -> str:
    what = args.exprs[0]
    rest = args.exprs[1:]
    if what == "populated":
        if s.mode != "ode":
            raise UsageError("enumerate populated is an ODE enumerator")
        return _listing(ode_calculus.enumerate_populated(args.max_norm or 3), s.fmt)
    if not rest:
        raise UsageError(f"enumerate {what} needs an expression")
    key = _single_key(rest[0], s)
    if what == "splittings" and s.mode == "ode":
        return _listing([Tensor2(sp.parts, sp.remainder) for sp in ode_calculus.enumerate_splittings(key)], s.fmt)
    if what == "predecessors" and s.mode == "ode":
        return _listing(ode_calculus.enumerate_predecessors(key, args.power), s.fmt)
    if what == "configs":
        if s.mode == "ode":
            configs = ode_calculus.enumerate_insertion_configs(key)
        else:
            configs = spde_calculus.enumerate_spde_insertion_configs(key, s.grade())
        return _listing([Tensor2(c.forest, c.trunk) for c in configs], s.fmt)
    if what == "forests" and s.mode == "spde":
        return _listing(spde_calculus.enumerate_spde_forests(key, s.grade(), s.dim + 1), s.fmt)
    raise UsageError(f"unknown enumerator {what!r} for mode {s.mode}")


def cmd_laws(args, s: Session):
    names = sorted(LAWS) if args.exprs[0] == "all" else args.exprs
    bound = args.max_norm if args.max_norm is not None else s.max_grade
    reports = [run_law_suite(n, bound, **({} if s.seed is None else {"seed": s.seed})) for n in names]
    if s.fmt == "json":
        out = "[" + ", ".join(r.to_json() for r in reports) + "]"
    else:
        out = "\n".join(r.to_text() for r in reports)
    failed = any(not r.passed and not r.exploratory for r in reports)
    return out, (1 if failed else 0)


HANDLERS = {
    "delta": (cmd_delta, 1),
    "delta-minus": (cmd_delta_minus, 1),
    "star1": (cmd_star1, 2),
    "star2": (cmd_star2, 2),
    "insert": (cmd_insert, 2),
    "adjoint-d": (cmd_adjoint_d, 1),
    "adjoint-partial": (cmd_adjoint_partial, 1),
    "pair": (cmd_pair, 2),
    "symmetry": (cmd_symmetry, 1),
    "enumerate": (cmd_enumerate, None),
    "laws": (cmd_laws, None),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("ode", "spde"), default="ode")
    common.add_argument("--dim", type=int, default=1, help="d: letters are vectors in N^(d+1)")
    common.add_argument("--labels", default="l", help="comma-separated noise labels (0 is always present)")
    common.add_argument("--max-grade", type=int, default=None, help="truncation on the first bigrading component")
    common.add_argument("--format", dest="fmt", choices=("text", "latex", "json"), default="text")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--formula", choices=("primal", "adjoint"), default="primal")
    common.add_argument("--out", default=None, help="write the output to this file instead of stdout")
    common.add_argument("--max-norm", type=int, default=None)
    common.add_argument("--power", type=int, default=1)
    common.add_argument("--letter", default=None, help="letter n as a vector, e.g. 1,0")
    common.add_argument("--k", default=None, help="derivative multi-index k as a vector")

    parser = argparse.ArgumentParser(prog="multiindex", description="Exact multi-index Hopf-algebra calculus.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("exprs", nargs="+")
    return parser


def _fail(message: str, code: str, fmt: str) -> int:
    if fmt == "json":
        print(json.dumps({"error": {"code": code, "message": message}}), file=sys.stderr)
    else:
        print(f"error: {message}", file=sys.stderr)
    return 1 if code != "usage" else 2


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.fmt
    try:
        session = Session(
            mode=args.mode,
            dim=args.dim,
            labels=tuple(x.strip() for x in args.labels.split(",") if x.strip()),
            max_grade=args.max_grade,
            fmt=fmt,
            seed=args.seed,
        )
        handler, arity = HANDLERS[args.command]
        if arity is not None and len(args.exprs) != arity:
            raise UsageError(f"{args.command} takes {arity} expression(s), got {len(args.exprs)}")
        result = handler(args, session)
        status = 0
        if isinstance(result, tuple):
            result, status = result
    except MultiIndexError as exc:
        return _fail(str(exc), ERROR_CODES.get(type(exc).__name__, "invalid-input"), fmt)
    except ValueError as exc:
        return _fail(str(exc), "invalid-input", fmt)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(result + "\n")
    else:
        print(result)
    return status


if __name__ == "__main__":
    sys.exit(main())
