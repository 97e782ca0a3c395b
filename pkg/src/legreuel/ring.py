"""Exact multivariate polynomials over the rationals.

Monomials are stored as two Python integers, both linear in the exponent
vector:

* the *order key*, an integer whose natural ordering is the ring's monomial
  order, and
* the *packed exponents*, fixed-width bit fields (one per variable, plus the
  total degree in the top field) that support divisibility tests with a
  single subtraction.

Because both maps are linear, the product of two monomials is the sum of
their keys and the sum of their packings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import gmpy2

from . import kernels as _k
from .errors import RingMismatch

Coefficient = type(gmpy2.mpq(0))
ExponentVector = tuple  # tuple[int, ...], one entry per ring variable

FIELD_BITS = 16
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1


def coeff(value) -> Coefficient:
    """Coerce ints, strings like ``"3/4"``, Fractions and mpq to a coefficient."""
    if isinstance(value, Coefficient):
        return value
    if isinstance(value, str):
        return gmpy2.mpq(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return gmpy2.mpq(int(value.numerator), int(value.denominator))
    return gmpy2.mpq(value)


# ---------------------------------------------------------------- orders

_KINDS = ("dp", "ds")


@dataclass(frozen=True)
class MonomialOrder:
    """A degree-reverse-lexicographic order, its local variant, or a block order.

    ``kind`` is ``"dp"`` (global degrevlex), ``"ds"`` (local negative
    degrevlex, where 1 is the largest monomial) or ``"block"``.  A block
    order lists ``(kind, size)`` spans that partition the variables in order;
    earlier blocks are compared first.
    """

    kind: str = "dp"
    blocks: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if self.kind == "block":
            if not self.blocks:
                raise ValueError("block order needs at least one block")
            for k, size in self.blocks:
                if k not in _KINDS or size <= 0:
                    raise ValueError(f"bad block ({k!r}, {size})")
        elif self.kind in _KINDS or self.kind == "hds":
            if self.blocks:
                raise ValueError("only block orders take spans")
        else:
            raise ValueError(f"unknown order kind {self.kind!r}")

    @classmethod
    def block(cls, spans: Iterable[tuple[str, int]]) -> "MonomialOrder":
        return cls("block", tuple((k, int(size)) for k, size in spans))

    def spans(self, nvars: int) -> list[tuple[str, int, int]]:
        """``(kind, start, size)`` for each block, for a ring of ``nvars`` variables."""
        if self.kind == "hds":
            return [("ds", 1, nvars - 1)] if nvars > 1 else []
        if self.kind != "block":
            return [(self.kind, 0, nvars)] if nvars else []
        out, start = [], 0
        for k, size in self.blocks:
            out.append((k, start, size))
            start += size
        if start != nvars:
            raise ValueError(f"block spans cover {start} variables, ring has {nvars}")
        return out

    @property
    def is_global(self) -> bool:
        if self.kind == "block":
            return all(k == "dp" for k, _ in self.blocks)
        return self.kind in ("dp", "hds")

    @property
    def is_local(self) -> bool:
        if self.kind == "block":
            return all(k == "ds" for k, _ in self.blocks)
        return self.kind == "ds"

    def __str__(self):
        if self.kind == "block":
            return "(" + ",".join(f"{k}({n})" for k, n in self.blocks) + ")"
        return self.kind


GLOBAL = MonomialOrder("dp")
LOCAL = MonomialOrder("ds")


# ---------------------------------------------------------------- rings


@dataclass(frozen=True)
class RingSpec:
    """Polynomial ring over Q with named variables and a monomial order.

    Two specs with equal fields are the same ring.
    """

    variables: tuple[str, ...]
    order: MonomialOrder = GLOBAL
    _weights: tuple = field(init=False, repr=False, compare=False)
    _shift: int = field(init=False, repr=False, compare=False)
    _guard: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = tuple(self.variables)
        object.__setattr__(self, "variables", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        spans = self.order.spans(len(names))
        W = FIELD_BITS
        weights = [0] * len(names)
        offset = 0
        for k, start, size in reversed(spans):
            sign = 1 if k == "dp" else -1
            for i in range(start, start + size):
                weights[i] = (sign * (1 << (size * W)) - (1 << ((i - start) * W))) << offset
            offset += (size + 2) * W
        if self.order.kind == "hds":
            big = 1 << ((len(names) + 1) * W)
            weights = [w + big for w in weights]
        object.__setattr__(self, "_weights", tuple(weights))
        object.__setattr__(self, "_shift", len(names) * W)
        guard = 0
        for i in range(len(names)):
            guard |= 1 << (i * W + W - 1)
        object.__setattr__(self, "_guard", guard)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a variable of {self}") from None

    # monomial encoding
    def mono(self, exps: Sequence[int]) -> tuple[int, int]:
        if len(exps) != len(self.variables):
            raise ValueError("exponent vector length does not match the ring")
        key = 0
        packed = 0
        deg = 0
        W = FIELD_BITS
        for i, e in enumerate(exps):
            if e:
                if e < 0 or e > MAX_EXPONENT:
                    raise ValueError(f"exponent {e} out of range")
                key += e * self._weights[i]
                packed |= e << (i * W)
                deg += e
        return key, packed | (deg << self._shift)

    def unpack(self, packed: int) -> ExponentVector:
        W = FIELD_BITS
        mask = (1 << W) - 1
        return tuple((packed >> (i * W)) & mask for i in range(len(self.variables)))

    def degree_of(self, packed: int) -> int:
        return packed >> self._shift

    def lcm(self, a: int, b: int) -> tuple[int, int]:
        ea, eb = self.unpack(a), self.unpack(b)
        return self.mono([x if x > y else y for x, y in zip(ea, eb)])

    def divides(self, a: int, b: int) -> bool:
        """Does the packed monomial ``a`` divide ``b``?"""
        g = self._guard
        return ((b | g) - a) & g == g

    def compare(self, a: Sequence[int], b: Sequence[int]) -> int:
        ka, kb = self.mono(a)[0], self.mono(b)[0]
        return (ka > kb) - (ka < kb)

    # constructors
    def zero(self) -> "Polynomial":
        return Polynomial(self, [])

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = coeff(c)
        return Polynomial(self, [(0, 0, c)] if c else [])

    def var(self, which) -> "Polynomial":
        i = which if isinstance(which, int) else self.index(which)
        exps = [0] * self.nvars
        exps[i] = 1
        k, e = self.mono(exps)
        return Polynomial(self, [(k, e, gmpy2.mpq(1))])

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], c=1) -> "Polynomial":
        c = coeff(c)
        if not c:
            return self.zero()
        k, e = self.mono(exps)
        return Polynomial(self, [(k, e, c)])

    def from_dict(self, d: dict) -> "Polynomial":
        acc: dict[int, list] = {}
        for exps, c in d.items():
            c = coeff(c)
            if not c:
                continue
            k, e = self.mono(exps)
            if k in acc:
                acc[k][1] += c
            else:
                acc[k] = [e, c]
        terms = [(k, v[0], v[1]) for k, v in acc.items() if v[1]]
        terms.sort(reverse=True, key=_key0)
        return Polynomial(self, terms)

    def with_order(self, order: MonomialOrder) -> "RingSpec":
        return RingSpec(self.variables, order)

    def __str__(self):
        return f"Q[{','.join(self.variables)}]/{self.order}"


def _key0(t):
    return t[0]


# ---------------------------------------------------------------- polynomials


class Polynomial:
    """Sparse polynomial; terms strictly decreasing under the ring order.

    Values are immutable.  Build them with :class:`RingSpec` constructors,
    :func:`legreuel.parser.parse_polynomial` or arithmetic.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: list):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # ---- inspection
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][1] == 0)

    def is_unit_in_ring(self) -> bool:
        """Is this polynomial a unit of the (localized) ring?

        Under a local order that means a nonzero constant term; under a
        global order only nonzero constants qualify.
        """
        return bool(self.terms) and self.terms[0][1] == 0

    def lead_exponents(self) -> ExponentVector:
        return self.ring.unpack(self.terms[0][1])

    def lead_coefficient(self) -> Coefficient:
        return self.terms[0][2]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return _k.max_degree(self.terms, self.ring._shift)

    def ecart(self) -> int:
        return self.total_degree() - self.ring.degree_of(self.terms[0][1])

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        s = self.ring._shift
        d = self.terms[0][1] >> s
        return all((t[1] >> s) == d for t in self.terms)

    def items(self) -> Iterator[tuple[Coefficient, ExponentVector]]:
        unpack = self.ring.unpack
        for _, e, c in self.terms:
            yield c, unpack(e)

    def to_dict(self) -> dict:
        unpack = self.ring.unpack
        return {unpack(e): c for _, e, c in self.terms}

    def variables_used(self) -> set[int]:
        used = set()
        for exps in (self.ring.unpack(e) for _, e, _ in self.terms):
            used.update(i for i, x in enumerate(exps) if x)
        return used

    # ---- arithmetic
    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatch(f"ring mismatch: {self.ring} vs {other.ring}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        return Polynomial(self.ring, _k.add_terms(self.terms, other.terms))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        return Polynomial(self.ring, _k.sub_terms(self.terms, other.terms))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Polynomial(self.ring, [(k, e, -c) for k, e, c in self.terms])

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = coeff(other)
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, [(k, e, c * v) for k, e, v in self.terms])
        self._check(other)
        if not self.terms or not other.terms:
            return self.ring.zero()
        return Polynomial(self.ring, _k.mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, exps: Sequence[int], c=1) -> "Polynomial":
        k, e = self.ring.mono(exps)
        return Polynomial(self.ring, _k.scale_shift_terms(self.terms, coeff(c), k, e))

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.terms[0][2]
        if lc == 1:
            return self
        inv = 1 / lc
        return Polynomial(self.ring, [(k, e, c * inv) for k, e, c in self.terms])

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Coefficient)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, tuple((k, c) for k, _, c in self.terms)))
        return self._hash

    # ---- calculus and substitutions
    def derivative(self, var) -> "Polynomial":
        ring = self.ring
        i = var if isinstance(var, int) else ring.index(var)
        if not 0 <= i < ring.nvars:
            raise IndexError(f"variable index {i} out of range")
        W = FIELD_BITS
        mask = (1 << W) - 1
        sh = i * W
        dk = ring._weights[i]
        de = (1 << sh) | (1 << ring._shift)
        out = []
        for k, e, c in self.terms:
            a = (e >> sh) & mask
            if a:
                out.append((k - dk, e - de, c * a))
        return Polynomial(ring, out)

    def evaluate(self, values: Sequence) -> Coefficient:
        vals = [coeff(v) for v in values]
        total = gmpy2.mpq(0)
        for c, exps in self.items():
            term = c
            for v, a in zip(vals, exps):
                if a:
                    term *= v**a
            total += term
        return total

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable ``i`` by ``images[i]`` (all in one target ring)."""
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        target = images[0].ring if images else self.ring
        result = target.zero()
        cache: dict[tuple[int, int], Polynomial] = {}
        for c, exps in self.items():
            term = target.const(c)
            for i, a in enumerate(exps):
                if a:
                    p = cache.get((i, a))
                    if p is None:
                        p = cache[(i, a)] = images[i] ** a
                    term = term * p
            result = result + term
        return result

    def map_to(self, ring: RingSpec, index_map: Sequence[int] | None = None) -> "Polynomial":
        """Re-encode in ``ring``; variable ``i`` goes to ``index_map[i]`` (default: by name)."""
        if index_map is None:
            index_map = [ring.index(v) for v in self.ring.variables]
        n = ring.nvars
        acc = []
        for c, exps in self.items():
            new = [0] * n
            for i, a in enumerate(exps):
                if a:
                    new[index_map[i]] += a
            k, e = ring.mono(new)
            acc.append((k, e, c))
        acc.sort(reverse=True, key=_key0)
        return Polynomial(ring, acc)

    def exact_div(self, f: "Polynomial") -> "Polynomial":
        """Quotient ``self / f``; raises ``ArithmeticError`` unless ``f`` divides exactly."""
        self._check(f)
        if not f.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        ring = self.ring
        if not self.terms:
            return self
        fk, fe, fc = f.terms[0]
        qmax = self.total_degree() - f.total_degree()
        inv = 1 / fc
        rem = self.terms
        quot = []
        while rem:
            k, e, c = rem[0]
            if not ring.divides(fe, e):
                raise ArithmeticError("polynomial division is not exact")
            qk, qe = k - fk, e - fe
            if ring.degree_of(qe) > qmax:
                raise ArithmeticError("polynomial division is not exact")
            qc = c * inv
            quot.append((qk, qe, qc))
            rem = _k.sub_mul_terms(rem, f.terms, qc, qk, qe)
        quot.sort(reverse=True, key=_key0)
        return Polynomial(ring, quot)

    # ---- printing
    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.variables
        parts = []
        for c, exps in self.items():
            mono = "*".join(
                name if a == 1 else f"{name}^{a}" for name, a in zip(names, exps) if a
            )
            neg = c < 0
            mag = -c if neg else c
            if not mono:
                body = _fmt_coeff(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_fmt_coeff(mag)}*{mono}"
            if parts:
                parts.append(("-" if neg else "+") + body)
            else:
                parts.append(("-" if neg else "") + body)
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({self})"


def _fmt_coeff(c: Coefficient) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if not isinstance(a, Polynomial) or not isinstance(b, Polynomial):
        raise TypeError("poly_arith expects two polynomials")
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def derivative(p: Polynomial, var_index: int) -> Polynomial:
    return p.derivative(var_index)


# ---------------------------------------------------------------- matrices


class PolyMatrix:
    """Dense row-major matrix of polynomials over one ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: RingSpec, rows: int, cols: int, entries: Sequence[Polynomial]):
        if rows <= 0 or cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        for p in entries:
            if p.ring != ring:
                raise RingMismatch("matrix entries must share the ring")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Polynomial]]) -> "PolyMatrix":
        if not rows or not rows[0]:
            raise ValueError("empty matrix")
        ring = rows[0][0].ring
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(ring, len(rows), width, [p for r in rows for p in r])

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Polynomial]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list[Polynomial]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(
            self.ring, self.cols, self.rows,
            [self[i, j] for j in range(self.cols) for i in range(self.rows)],
        )

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return PolyMatrix(self.ring, self.rows, self.cols,
                          [a + b for a, b in zip(self.entries, other.entries)])

    def scale(self, p) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.rows, self.cols, [p * a for a in self.entries])

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.entries)

    def is_skew_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            (self[i, j] + self[j, i]).is_zero()
            for i in range(self.rows) for j in range(i, self.cols)
        )

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.ring == other.ring
                and (self.rows, self.cols) == (other.rows, other.cols)
                and self.entries == other.entries)

    def __str__(self):
        return "[" + ", ".join(
            "[" + ", ".join(str(p) for p in self.row(i)) + "]" for i in range(self.rows)
        ) + "]"


def jacobian(fs: Sequence[Polynomial]) -> PolyMatrix:
    """Rows indexed by ``fs``, columns by ring variables."""
    fs = list(fs)
    if not fs:
        raise ValueError("jacobian of an empty list")
    ring = fs[0].ring
    for f in fs:
        if f.ring != ring:
            raise RingMismatch("jacobian inputs must share the ring")
    if ring.nvars == 0:
        raise ValueError("ring has no variables")
    return PolyMatrix(ring, len(fs), ring.nvars,
                      [f.derivative(j) for f in fs for j in range(ring.nvars)])


def minors(m: PolyMatrix, k: int) -> list[Polynomial]:
    """All k-by-k minors, rows and columns ascending, listed in lexicographic (rows, cols) order."""
    if not 1 <= k <= min(m.rows, m.cols):
        raise ValueError(f"minor size {k} out of range for a {m.rows}x{m.cols} matrix")
    cache: dict[tuple[tuple[int, ...], tuple[int, ...]], Polynomial] = {}
    zero = m.ring.zero()

    def det(rows: tuple[int, ...], cols: tuple[int, ...]) -> Polynomial:
        if len(rows) == 1:
            return m[rows[0], cols[0]]
        key = (rows, cols)
        hit = cache.get(key)
        if hit is not None:
            return hit
        r0, rest = rows[0], rows[1:]
        acc = zero
        for pos, c in enumerate(cols):
            a = m[r0, c]
            if a.is_zero():
                continue
            sub = det(rest, cols[:pos] + cols[pos + 1:])
            if sub.is_zero():
                continue
            acc = acc - a * sub if pos & 1 else acc + a * sub
        cache[key] = acc
        return acc

    return [det(rs, cs)
            for rs in combinations(range(m.rows), k)
            for cs in combinations(range(m.cols), k)]


def determinant(m: PolyMatrix) -> Polynomial:
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    return minors(m, m.rows)[0]
