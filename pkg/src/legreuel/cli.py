"""Command-line front end.

Each subcommand other than ``run`` loads the declarations of a script (its
commands are skipped) and then evaluates one operation on named objects.
Object flags take either a declared name or an expression in the ring, so
``--f 'x*y*z'`` works as well as ``--f f``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

from . import __version__
from .errors import HypothesisViolation, LeGreuelError, ParseError
from .interpreter import Record, Session
from .parser import parse_script
from .pipeline import DEFAULT_RETRIES
from .stdbasis import Ideal

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_HYPOTHESIS = 3
EXIT_INTERNAL = 4

SEED_ENV = "LEGREUEL_SEED"


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _global_flags(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=_u64, default=d(None),
                   help=f"sampling seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--retries", type=_nonneg, default=d(DEFAULT_RETRIES),
                   help="resamples allowed per generic form")
    p.add_argument("--json", action="store_true", default=d(False),
                   help="print one JSON record instead of text")
    p.add_argument("--reduced-slice", metavar="FILE", default=d(None),
                   help="script that defines 'ideal slice' from the last form 'ell'")
    p.add_argument("--trace", action="store_true", default=d(False),
                   help="log standard basis statistics to stderr")


# subcommand -> (script command, [(flag, default, help)], repeated-flag)
_OPS = {
    "std": ("std", [("ideal", None, "ideal name (default: last declared)")], None),
    "vdim": ("vdim", [("ideal", None, "ideal name (default: last declared)")], None),
    "dim": ("dim", [("ideal", None, "ideal name (default: last declared)")], None),
    "mult": ("mult", [("ideal", None, "ideal name (default: last declared)")], None),
    "saturate": ("saturate", [("ideal", None, "ideal to saturate"),
                              ("f", "f", "polynomial to saturate by")], None),
    "intersect": ("intersect", [], ("ideal", "ideals to intersect (default: last two)")),
    "euler-diff": ("euler_diff", [("variety", "X", "ideal of the space"),
                                  ("f", "f", "the function"),
                                  ("g", "g", "the second function")], None),
    "chi": ("chi", [("variety", "X", "ideal of the space"), ("f", "f", "the function")],
            ("form", "fixed slicing form, outermost first (repeatable)")),
    "icis": ("icis", [], ("f", "defining functions in order (default: all declared polys)")),
    "curve-mu": ("curve_mu", [("variety", "X", "ideal of the total space"),
                              ("pi", "t", "smoothing parameter"),
                              ("fbar", "fbar", "function on the central curve")],
                 ("form", "fixed slicing form (repeatable)")),
    "ids": ("ids", [("F", "F", "matrix F"), ("A", "A", "constant deformation matrix"),
                    ("s", None, "rank bound s"), ("fbar", None, "optional function")], None),
    "gorenstein-mu": ("gorenstein_mu", [("variety", "X", "ideal of the total space"),
                                        ("pi", "t", "smoothing parameter")],
                      ("form", "fixed forms: the 3-fold cut, then the surface cut")),
    "pfaffian": ("pfaffian", [("matrix", "M", "skew-symmetric matrix")], None),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="legreuel",
        description="Exact Euler characteristic and Milnor number computations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="subcommand", required=True, metavar="COMMAND")
    r = sub.add_parser("run", help="execute every command of a script")
    r.add_argument("script")
    _global_flags(r, suppress=True)
    for name, (_, flags, many) in _OPS.items():
        s = sub.add_parser(name, help=f"{name} on objects declared in a script")
        s.add_argument("script")
        for flag, default, hlp in flags:
            s.add_argument(f"--{flag}", default=default, help=hlp)
        if many:
            s.add_argument(f"--{many[0]}", action="append", dest="many", help=many[1])
        _global_flags(s, suppress=True)
    return p


def _last(session: Session, kind) -> list[str]:
    return [k for k, v in session.env.items() if isinstance(v, kind)]


def _command_source(args, session: Session) -> tuple[str, str]:
    cmd, flags, many = _OPS[args.subcommand]
    vals = {f: getattr(args, f) for f, _, _ in flags}
    extra = list(getattr(args, "many", None) or [])
    ideals = _last(session, Ideal)
    if "ideal" in vals and vals["ideal"] is None:
        if not ideals:
            raise ParseError("the script declares no ideal")
        vals["ideal"] = ideals[-1]
    if args.subcommand == "intersect" and not extra:
        if len(ideals) < 2:
            raise ParseError("intersect needs two ideals")
        extra = ideals[-2:]
    if args.subcommand == "icis" and not extra:
        from .ring import Polynomial
        extra = _last(session, Polynomial)
    if args.subcommand == "ids":
        if vals["s"] is None:
            raise ParseError("ids needs --s")
        if vals["fbar"] is None:
            del vals["fbar"]
    if args.subcommand == "pfaffian":
        m = session.env.get(vals["matrix"])
        cmd = "pfaffian" if m is not None and getattr(m, "rows", 1) % 2 == 0 else "pfaffians"
    parts = [v for v in vals.values()] + extra
    return cmd, f"{cmd}(" + ", ".join(f"({p})" if not p.isidentifier() else p
                                       for p in parts) + ");"


def _fail(kind: str, message: str, span=None) -> dict:
    return {"kind": kind, "message": message, "span": list(span) if span else None}


def execute(args) -> tuple[int, dict, list[Record]]:
    """Run the parsed arguments; returns the exit code, the JSON record and the records."""
    seed = args.seed
    if seed is None:
        env = os.environ.get(SEED_ENV)
        seed = _u64(env) if env else 0
    out = {"command": args.subcommand, "script": args.script, "seed": seed}
    records: list[Record] = []
    try:
        try:
            with open(args.script, encoding="utf-8") as fh:
                src = fh.read()
            slice_src = None
            if args.reduced_slice:
                with open(args.reduced_slice, encoding="utf-8") as fh:
                    slice_src = fh.read()
        except OSError as exc:
            out.update(status="error", error=_fail("io_error", str(exc)))
            return EXIT_INPUT, out, records
        session = Session(seed=seed, retries=args.retries, slice_script=slice_src,
                          run_commands=args.subcommand == "run")
        session.run(parse_script(src))
        if args.subcommand == "run":
            records = session.records
            out["result"] = [r.as_dict() for r in records]
        else:
            _, line = _command_source(args, session)
            out["inputs"] = line
            session.run_commands = True
            records = session.run_source(line)
            rec = records[-1]
            out["result"] = rec.result
            if rec.report is not None:
                out["report"] = rec.report
        out["status"] = "ok"
        return EXIT_OK, out, records
    except ParseError as exc:
        out.update(status="error", error=_fail(exc.kind, exc.message, exc.span))
        return EXIT_INPUT, out, records
    except HypothesisViolation as exc:
        out.update(status="error", error=_fail(exc.kind, str(exc)))
        return EXIT_HYPOTHESIS, out, records
    except LeGreuelError as exc:
        out.update(status="error", error=_fail(exc.kind, str(exc)))
        return EXIT_INPUT, out, records
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        out.update(status="error", error=_fail("invalid_input", str(exc)))
        return EXIT_HYPOTHESIS, out, records
    except Exception as exc:  # noqa: BLE001 - reported, not swallowed
        logging.getLogger(__name__).debug("internal error", exc_info=True)
        out.update(status="error",
                   error=_fail("internal_error", f"{type(exc).__name__}: {exc}"))
        return EXIT_INTERNAL, out, records


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.trace else logging.WARNING,
        format="%(name)s: %(message)s", stream=sys.stderr)
    if not args.trace:
        logging.getLogger("legreuel").setLevel(logging.WARNING)
    code, out, records = execute(args)
    if args.json:
        sys.stdout.write(json.dumps(out, sort_keys=True, separators=(",", ":")) + "\n")
    elif code == EXIT_OK:
        if args.subcommand == "run":
            for r in records:
                print(f"{r.command}: " + r.text.replace("\n", "\n  "))
        else:
            print(records[-1].text)
    else:
        err = out["error"]
        where = f" (line {err['span'][0]}, column {err['span'][1]})" if err["span"] else ""
        print(f"error [{err['kind']}]{where}: {err['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
