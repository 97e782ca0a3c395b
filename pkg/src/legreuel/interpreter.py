"""Evaluation of parsed scripts."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable

from . import ideal_ops as ops
from . import pipeline as pl
from .errors import ParseError
from .parser import (
    BinOp,
    Call,
    Command,
    IdealDecl,
    MatrixDecl,
    Name,
    Neg,
    Num,
    PolyDecl,
    Pow,
    RingDecl,
    ScriptAST,
    parse_script,
)
from .ring import GLOBAL, LOCAL, PolyMatrix, Polynomial, RingSpec, minors
from .stdbasis import Ideal, ideal_contains, ideal_equal

log = logging.getLogger(__name__)


@dataclass
class Record:
    """Outcome of one command: a JSON-ready ``result`` plus a human rendering."""

    command: str
    inputs: list[str]
    result: Any
    text: str
    report: dict | None = None

    def as_dict(self) -> dict:
        out = {"command": self.command, "inputs": self.inputs, "result": self.result}
        if self.report is not None:
            out["report"] = self.report
        return out


@dataclass
class Saturation:
    ideal: Ideal
    k: int


def canonical_ideal(i: Ideal) -> list[str]:
    return sorted(str(g) for g in i.generators)


def _dim_value(v):
    return "infinite" if v == ops.INFINITE else int(v)


def describe(v) -> str:
    if isinstance(v, Ideal):
        return "ideal(" + ", ".join(canonical_ideal(v)) + ")"
    if isinstance(v, PolyMatrix):
        return "matrix" + str(v.to_rows())
    return str(v)


@dataclass
class Session:
    seed: int = 0
    retries: int = pl.DEFAULT_RETRIES
    # script text run once per final slicing form, with ``ell`` bound
    slice_script: str | None = None
    ring: RingSpec | None = None
    env: dict = field(default_factory=dict)
    records: list[Record] = field(default_factory=list)
    run_commands: bool = True

    # ---- declarations
    def known_names(self) -> dict[str, str]:
        out = {}
        if self.ring is not None:
            out["@ring"] = "ring"
            out.update({v: "var" for v in self.ring.variables})
        for k, v in self.env.items():
            out[k] = type(v).__name__
        return out

    def run(self, ast: ScriptAST) -> list[Record]:
        for st in ast.statements:
            self.execute(st)
        return self.records

    def run_source(self, src: str) -> list[Record]:
        return self.run(parse_script(src, self.known_names() or None))

    def execute(self, st):
        if isinstance(st, RingDecl):
            if self.ring is not None:
                raise ParseError("a script declares at most one ring", st.span)
            self.ring = RingSpec(st.names, LOCAL if st.order == "local" else GLOBAL)
        elif isinstance(st, PolyDecl):
            self.env[st.name] = self.poly(st.expr)
        elif isinstance(st, IdealDecl):
            self.env[st.name] = self.ideal_from(st.exprs)
        elif isinstance(st, MatrixDecl):
            self.env[st.name] = self.matrix_from(st)
        elif isinstance(st, Command):
            if self.run_commands:
                self.records.append(self.command(st))

    def ideal_from(self, exprs) -> Ideal:
        gens = []
        for e in exprs:
            v = self.value(e)
            if isinstance(v, Saturation):
                v = v.ideal
            if isinstance(v, Ideal):
                gens.extend(v.generators)
            elif isinstance(v, Polynomial):
                gens.append(v)
            else:
                raise ParseError(f"an ideal generator cannot be {type(v).__name__}", e.span)
        return Ideal(self.ring, gens)

    def matrix_from(self, st: MatrixDecl) -> PolyMatrix:
        if len(st.exprs) == 1 and isinstance(st.exprs[0], Call) and st.exprs[0].name == "skew":
            if st.rows != st.cols:
                raise ParseError("a skew matrix must be square", st.span)
            entries = [self.poly(a) for a in st.exprs[0].args]
            try:
                return pl.skew_matrix(st.rows, entries)
            except ValueError as exc:
                raise ParseError(str(exc), st.span) from None
        if len(st.exprs) != st.rows * st.cols:
            raise ParseError(
                f"matrix {st.name} needs {st.rows * st.cols} entries, got {len(st.exprs)}",
                st.span)
        entries = [self.poly(e) for e in st.exprs]
        return PolyMatrix(self.ring, st.rows, st.cols, entries)

    # ---- expressions
    def value(self, e):
        if isinstance(e, Name):
            if self.ring is not None and e.name in self.ring.variables:
                return self.ring.var(e.name)
            if e.name not in self.env:
                raise ParseError(f"{e.name!r} is used before it is declared", e.span)
            return self.env[e.name]
        if isinstance(e, Call):
            return self.call(e)
        return self.poly(e)

    def poly(self, e) -> Polynomial:
        if isinstance(e, Num):
            return self.ring.const(e.value)
        if isinstance(e, Neg):
            return -self.poly(e.operand)
        if isinstance(e, Pow):
            return self.poly(e.base) ** e.exponent
        if isinstance(e, BinOp):
            a, b = self.poly(e.left), self.poly(e.right)
            if e.op == "+":
                return a + b
            if e.op == "-":
                return a - b
            if e.op == "*":
                return a * b
            if not b.is_constant() or b.is_zero():
                raise ParseError("can only divide by a nonzero constant", e.span)
            return a * self.ring.const(1 / b.lead_coefficient())
        v = self.value(e)
        if not isinstance(v, Polynomial):
            raise ParseError(f"expected a polynomial, got {type(v).__name__}", e.span)
        return v

    def ideal(self, e) -> Ideal:
        v = self.value(e)
        if isinstance(v, Saturation):
            return v.ideal
        if isinstance(v, Polynomial):
            return Ideal(self.ring, [v])
        if not isinstance(v, Ideal):
            raise ParseError(f"expected an ideal, got {type(v).__name__}", e.span)
        return v

    def matrix(self, e) -> PolyMatrix:
        v = self.value(e)
        if not isinstance(v, PolyMatrix):
            raise ParseError(f"expected a matrix, got {type(v).__name__}", e.span)
        return v

    def integer(self, e) -> int:
        if isinstance(e, Num):
            return e.value
        raise ParseError("expected an integer literal", e.span)

    def variety(self, e) -> pl.VarietyPresentation:
        i = self.ideal(e)
        return pl.VarietyPresentation(i, ops.krull_dim(i))

    # ---- calls that produce values
    def call(self, c: Call):
        h = getattr(self, "_op_" + c.name, None)
        if h is None:
            raise ParseError(f"{c.name} does not produce a value", c.span)
        return h(c.args, c.span)

    def _op_std(self, a, span):
        i = self.ideal(a[0])
        return Ideal(i.ring, i.std().elements)

    def _op_saturate(self, a, span):
        return Saturation(*ops.ideal_saturate(self.ideal(a[0]), self.poly(a[1])))

    def _op_colon(self, a, span):
        return ops.ideal_colon(self.ideal(a[0]), self.poly(a[1]))

    def _op_intersect(self, a, span):
        out = self.ideal(a[0])
        for e in a[1:]:
            out = ops.ideal_intersect(out, self.ideal(e))
        return out

    def _op_eliminate(self, a, span):
        p = self.poly(a[1])
        if len(p.terms) != 1:
            raise ParseError("eliminate expects a product of variables", a[1].span)
        vars_ = [i for i, x in enumerate(p.lead_exponents()) if x]
        return ops.eliminate(self.ideal(a[0]), vars_)

    def _op_nf(self, a, span):
        return self.ideal(a[1]).std().normal_form(self.poly(a[0]))

    def _op_squarefree(self, a, span):
        return ops.squarefree_part(self.poly(a[0]))

    def _op_minors(self, a, span):
        return Ideal(self.ring, pl._dedupe(minors(self.matrix(a[0]), self.integer(a[1]))))

    def _op_jacobian_ideal(self, a, span):
        return pl.jacobian_ideal(self.variety(a[0]), [self.poly(e) for e in a[1:]])

    def _op_pfaffian(self, a, span):
        return pl.pfaffian(self.matrix(a[0]))

    def _op_pfaffians(self, a, span):
        return Ideal(self.ring, pl.pfaffians(self.matrix(a[0])))

    def _op_skew(self, a, span):
        raise ParseError("skew(...) is only allowed as a matrix initializer", span)

    # ---- commands
    def command(self, c: Command) -> Record:
        inputs = [describe(self.value(e)) if isinstance(e, Name) else _echo(e) for e in c.args]
        h = getattr(self, "_cmd_" + c.name, None)
        if h is not None:
            return h(c, inputs)
        v = self.call(Call(c.name, c.args, c.span))
        return self._record(c.name, inputs, v)

    def _record(self, name, inputs, v) -> Record:
        if isinstance(v, Saturation):
            return Record(name, inputs, {"ideal": canonical_ideal(v.ideal), "k": v.k},
                          f"{describe(v.ideal)}\nk = {v.k}")
        if isinstance(v, Ideal):
            return Record(name, inputs, canonical_ideal(v), describe(v))
        if isinstance(v, Polynomial):
            return Record(name, inputs, str(v), str(v))
        if isinstance(v, PolyMatrix):
            rows = [[str(p) for p in r] for r in v.to_rows()]
            return Record(name, inputs, rows, "\n".join(", ".join(r) for r in rows))
        if isinstance(v, bool):
            return Record(name, inputs, v, "true" if v else "false")
        if isinstance(v, pl.ComputationReport):
            return Record(name, inputs, v.value, str(v.value), v.as_dict())
        return Record(name, inputs, v, str(v))

    def _cmd_vdim(self, c, inputs):
        v = _dim_value(ops.vdim(self.ideal(c.args[0])))
        return Record("vdim", inputs, v, str(v))

    def _cmd_dim(self, c, inputs):
        v = ops.krull_dim(self.ideal(c.args[0]))
        return Record("dim", inputs, v, str(v))

    def _cmd_mult(self, c, inputs):
        v = ops.hilbert_multiplicity(self.ideal(c.args[0]))
        return Record("mult", inputs, v, str(v))

    def _cmd_contains(self, c, inputs):
        return self._record("contains", inputs,
                            ideal_contains(self.ideal(c.args[0]), self.poly(c.args[1])))

    def _cmd_equal(self, c, inputs):
        return self._record("equal", inputs,
                            ideal_equal(self.ideal(c.args[0]), self.ideal(c.args[1])))

    def _cmd_isolated(self, c, inputs):
        v = pl.check_isolated_singularity(self.variety(c.args[0]))
        return Record("isolated", inputs, v, str(v))

    def _cmd_print(self, c, inputs):
        vals = [self.value(e) for e in c.args]
        text = "\n".join(describe(v) for v in vals)
        return Record("print", inputs, [describe(v) for v in vals], text)

    def _cmd_euler_diff(self, c, inputs):
        X = self.variety(c.args[0])
        r = pl.euler_diff(X, self.poly(c.args[1]), self.poly(c.args[2]))
        return self._record("euler_diff", inputs, r)

    def slice_override(self) -> Callable[[Polynomial], Ideal] | None:
        if self.slice_script is None:
            return None
        src = self.slice_script

        def build(ell: Polynomial) -> Ideal:
            child = Session(self.seed, self.retries, None, self.ring, dict(self.env),
                            run_commands=False)
            child.env["ell"] = ell
            child.run_source(src)
            out = child.env.get("slice")
            if not isinstance(out, Ideal):
                raise ParseError("the reduced-slice script must declare 'ideal slice'")
            return out

        return build

    def _cmd_chi(self, c, inputs):
        X = self.variety(c.args[0])
        forms = [self.poly(e) for e in c.args[2:]] or None
        r = pl.chi_fiber(X, self.poly(c.args[1]), self.seed, self.slice_override(),
                         retries=self.retries, forms=forms)
        return self._record("chi", inputs, r)

    def _cmd_icis(self, c, inputs):
        fs = []
        for e in c.args:
            v = self.value(e)
            fs.extend(v.generators if isinstance(v, Ideal) else [self.poly(e)])
        v = pl.icis_legreuel(fs)
        return Record("icis", inputs, v, str(v))

    def _cmd_curve_mu(self, c, inputs):
        X = self.variety(c.args[0])
        forms = [self.poly(e) for e in c.args[3:]] or None
        r = pl.curve_invariants(X, self.poly(c.args[1]), self.poly(c.args[2]), self.seed,
                                retries=self.retries, forms=forms)
        res = {"mu_f": r.mu_f, "mu_X": r.mu_X, "deg_f": r.deg_f}
        return Record("curve_mu", inputs, res,
                      f"mu_f = {r.mu_f}\nmu_X = {r.mu_X}\ndeg_f = {r.deg_f}", r.report.as_dict())

    def _cmd_ids(self, c, inputs):
        F, A = self.matrix(c.args[0]), self.matrix(c.args[1])
        s = self.integer(c.args[2])
        fbar = self.poly(c.args[3]) if len(c.args) > 3 else None
        r = pl.ids_invariants(F, A, s, fbar, self.seed, retries=self.retries)
        res = {"nu_X": r.nu_X, "mu_f": r.mu_f, "nu_slice": r.nu_slice}
        text = f"nu_X = {r.nu_X}"
        if fbar is not None:
            text += f"\nmu_f = {r.mu_f}\nnu_slice = {r.nu_slice}"
        return Record("ids", inputs, res, text, r.report.as_dict())

    def _cmd_gorenstein_mu(self, c, inputs):
        X = self.variety(c.args[0])
        forms = [self.poly(e) for e in c.args[2:]] or None
        r = pl.gorenstein_mu(X, self.poly(c.args[1]), self.seed,
                             retries=self.retries, forms=forms)
        return self._record("gorenstein_mu", inputs, r)


def _echo(e) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Neg):
        return f"-({_echo(e.operand)})"
    if isinstance(e, Pow):
        return f"({_echo(e.base)})^{e.exponent}"
    if isinstance(e, BinOp):
        return f"({_echo(e.left)}){e.op}({_echo(e.right)})"
    return f"{e.name}(" + ", ".join(_echo(a) for a in e.args) + ")"
