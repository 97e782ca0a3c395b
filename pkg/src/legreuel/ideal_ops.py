"""Ideal-level algebra on top of standard bases.

All functions respect the ring's semantics: with a local order the answers
are about the localization at the origin, with a global order about the
polynomial ring itself.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Iterable, Sequence

from .errors import RingMismatch
from .ring import GLOBAL, MonomialOrder, Polynomial, RingSpec
from .stdbasis import Ideal, StdBasis, ideal_equal, std_basis

log = logging.getLogger(__name__)

INFINITE = float("inf")
_AUX = "@s"


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    if a.ring != b.ring:
        raise RingMismatch("ideal sum across rings")
    return Ideal(a.ring, a.generators + b.generators)


# ---------------------------------------------------------------- elimination


def _block_spans(order: MonomialOrder, nvars: int) -> list[tuple[str, int]]:
    return [(k, size) for k, _, size in order.spans(nvars)]


def _elimination_ring(ring: RingSpec, elim: Sequence[int]) -> tuple[RingSpec, list[int]]:
    """Ring with the ``elim`` variables first in a global block, the rest keeping their order.

    Returns the new ring and the old-to-new index map.
    """
    keep = [i for i in range(ring.nvars) if i not in set(elim)]
    names = [ring.variables[i] for i in elim] + [ring.variables[i] for i in keep]
    if ring.order.kind == "block":
        # keep the original block structure restricted to the surviving variables
        spans = []
        for k, start, size in ring.order.spans(ring.nvars):
            n = sum(1 for i in keep if start <= i < start + size)
            if n:
                spans.append((k, n))
    else:
        spans = [(ring.order.kind, len(keep))] if keep else []
    order = MonomialOrder.block([("dp", len(elim))] + spans)
    new_index = {old: pos for pos, old in enumerate(list(elim) + keep)}
    return RingSpec(tuple(names), order), [new_index[i] for i in range(ring.nvars)]


def eliminate(i: Ideal, vars: Iterable) -> Ideal:
    """Generators of ``i`` intersected with the subring free of ``vars``."""
    ring = i.ring
    elim = sorted({v if isinstance(v, int) else ring.index(v) for v in vars})
    if len(elim) >= ring.nvars:
        raise ValueError("cannot eliminate every variable")
    if not elim:
        return Ideal(ring, i.generators)
    ering, fwd = _elimination_ring(ring, elim)
    back = [0] * ring.nvars
    for old, new in enumerate(fwd):
        back[new] = old
    mapped = Ideal(ering, [g.map_to(ering, fwd) for g in i.generators])
    sb = mapped.std()
    nelim = len(elim)
    keep = []
    for p in sb.elements:
        if all(x == 0 for x in p.lead_exponents()[:nelim]):
            keep.append(p.map_to(ring, back))
    return Ideal(ring, keep)


def ideal_intersect(a: Ideal, b: Ideal) -> Ideal:
    """``a`` intersected with ``b``, by eliminating ``s`` from ``s*a + (1-s)*b``.

    Intersections commute with localization, so for local and mixed orders
    the elimination runs in the polynomial ring and the generators are read
    back in the original ring.
    """
    if a.ring != b.ring:
        raise RingMismatch("intersection across rings")
    ring = a.ring
    if not a.generators or not b.generators:
        return Ideal(ring, [])
    if not ring.order.is_global:
        glob = ring.with_order(GLOBAL)
        res = ideal_intersect(Ideal(glob, [p.map_to(glob) for p in a.generators]),
                              Ideal(glob, [p.map_to(glob) for p in b.generators]))
        return Ideal(ring, [p.map_to(ring) for p in res.generators])
    spans = [("dp", 1)] + _block_spans(ring.order, ring.nvars)
    aux = RingSpec((_AUX,) + ring.variables, MonomialOrder.block(spans))
    shift = list(range(1, ring.nvars + 1))
    s = aux.var(0)
    one_minus_s = aux.one() - s
    gens = [s * g.map_to(aux, shift) for g in a.generators]
    gens += [one_minus_s * g.map_to(aux, shift) for g in b.generators]
    sb = Ideal(aux, gens).std()
    back = [0] + list(range(ring.nvars))
    out = []
    for p in sb.elements:
        if p.lead_exponents()[0] == 0:
            # the s block is global and compared first, so the whole of p is s-free
            out.append(p.map_to(ring, back))
    return Ideal(ring, out)


# ---------------------------------------------------------------- colon / saturation


def _monomial_support(f: Polynomial) -> list[tuple[int, int]] | None:
    """``[(index, exponent), ...]`` when ``f`` is a constant times a monomial."""
    if len(f.terms) != 1:
        return None
    return [(i, a) for i, a in enumerate(f.lead_exponents()) if a]


def _bayer_applicable(i: Ideal, f: Polynomial) -> list[tuple[int, int]] | None:
    # homogeneous ideal, single degrevlex-type block, monomial divisor
    if i.ring.order.kind not in ("dp", "ds"):
        return None
    support = _monomial_support(f)
    if not support or not i.is_homogeneous():
        return None
    return support


def _bayer_basis(i: Ideal, var: int) -> tuple[RingSpec, list[int], list[Polynomial]]:
    """Homogeneous degrevlex basis of ``i`` with variable ``var`` moved last."""
    ring = i.ring
    order = [j for j in range(ring.nvars) if j != var] + [var]
    names = tuple(ring.variables[j] for j in order)
    gring = RingSpec(names, MonomialOrder("dp"))
    fwd = [0] * ring.nvars
    for pos, old in enumerate(order):
        fwd[old] = pos
    sb = Ideal(gring, [g.map_to(gring, fwd) for g in i.generators]).std()
    return gring, order, sb.elements


def _divide_last(gring: RingSpec, p: Polynomial, power: int) -> Polynomial:
    last = gring.nvars - 1
    v = min(a[last] for _, a in p.items())
    v = min(v, power)
    if not v:
        return p
    exps = [0] * gring.nvars
    exps[last] = v
    return p.exact_div(gring.monomial(exps))


def _drop_redundant(gring: RingSpec, basis: list[Polynomial]) -> list[Polynomial]:
    # the quotients still form a Groebner basis, so leading terms decide redundancy
    keep: list[Polynomial] = []
    for p in sorted(basis, key=lambda q: q.terms[0][0]):
        le = p.terms[0][1]
        if not any(gring.divides(q.terms[0][1], le) for q in keep):
            keep.append(p)
    return keep


def _bayer_colon(i: Ideal, var: int, power: int) -> Ideal:
    ring = i.ring
    gring, order, basis = _bayer_basis(i, var)
    quots = _drop_redundant(gring, [_divide_last(gring, g, power) for g in basis])
    return Ideal(ring, [q.map_to(ring, order) for q in quots])


def ideal_colon(i: Ideal, f: Polynomial) -> Ideal:
    """``i : (f)`` = ``(i ∩ (f)) / f``."""
    if f.ring != i.ring:
        raise RingMismatch("colon across rings")
    if f.is_zero():
        raise ValueError("colon by the zero polynomial")
    ring = i.ring
    if not i.generators:
        return Ideal(ring, [])
    if f.is_unit_in_ring():
        return Ideal(ring, i.generators)
    support = _bayer_applicable(i, f)
    if support is not None:
        for var, power in support:
            i = _bayer_colon(i, var, power)
        return i
    inter = ideal_intersect(i, Ideal(ring, [f]))
    return Ideal(ring, [g.exact_div(f) for g in inter.generators])


def ideal_saturate(i: Ideal, f: Polynomial) -> tuple[Ideal, int]:
    """``i : f^∞`` and the least ``k >= 1`` with ``i : f^k = i : f^(k+1)``."""
    if f.ring != i.ring:
        raise RingMismatch("saturation across rings")
    if f.is_zero():
        raise ValueError("saturation by the zero polynomial")
    ring = i.ring
    if f.is_unit_in_ring() or not i.generators:
        return Ideal(ring, i.generators), 1
    support = _bayer_applicable(i, f)
    if support is not None and len(support) == 1:
        return _bayer_saturate(i, support[0][0])
    prev = i
    m = 0
    while True:
        m += 1
        cur = ideal_colon(prev, f)
        if ideal_equal(cur, prev):
            log.debug("saturation stable after %d colon steps", m)
            return cur, max(1, m - 1)
        prev = cur


def _bayer_saturate(i: Ideal, var: int) -> tuple[Ideal, int]:
    ring = i.ring
    gring, order, basis = _bayer_basis(i, var)
    last = gring.nvars - 1
    vals = [min(a[last] for _, a in g.items()) for g in basis]
    leads = [g.lead_exponents() for g in basis]

    def lead_ideal(k):
        out = []
        for lm, v in zip(leads, vals):
            d = min(k, v)
            out.append(lm[:last] + (lm[last] - d,))
        return out

    k = 1
    top = max(vals) if vals else 0
    while k < top and not _monomial_ideals_equal(lead_ideal(k), lead_ideal(k + 1)):
        k += 1
    quots = _drop_redundant(gring, [_divide_last(gring, g, top) for g in basis])
    return Ideal(ring, [q.map_to(ring, order) for q in quots]), k


def _monomial_ideals_equal(a: list[tuple], b: list[tuple]) -> bool:
    def inside(m, gens):
        return any(all(x <= y for x, y in zip(g, m)) for g in gens)
    return all(inside(m, a) for m in b) and all(inside(m, b) for m in a)


# ---------------------------------------------------------------- dimensions


def _leading(i: Ideal) -> tuple[StdBasis, list[tuple[int, ...]]]:
    sb = i.std()
    return sb, _minimalize([tuple(e) for e in sb.leading_ideal])


def _minimalize(gens: list[tuple]) -> list[tuple]:
    gens = sorted(set(gens), key=lambda m: (sum(m), m))
    out = []
    for m in gens:
        if not any(all(x <= y for x, y in zip(g, m)) for g in out):
            out.append(m)
    return out


def monomial_krull_dim(gens: list[tuple], nvars: int) -> int:
    """Dimension of K[x]/M for the monomial ideal M: the largest independent variable set."""
    if any(sum(g) == 0 for g in gens):
        return -1
    supports = [frozenset(j for j, a in enumerate(g) if a) for g in gens]
    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def krull_dim(i: Ideal) -> int:
    """Krull dimension of the quotient; -1 for the unit ideal."""
    _, lead = _leading(i)
    return monomial_krull_dim(lead, i.ring.nvars)


def count_standard_monomials(gens: list[tuple], nvars: int) -> int | float:
    """Number of monomials outside the monomial ideal, or ``INFINITE``."""
    if any(sum(g) == 0 for g in gens):
        return 0
    bounds = []
    for j in range(nvars):
        pure = [g[j] for g in gens if g[j] and sum(g) == g[j]]
        if not pure:
            return INFINITE
        bounds.append(min(pure))
    memo: dict = {}

    def count(gs: tuple, j: int) -> int:
        # gs: minimal generators in variables j..n-1
        if any(sum(g) == 0 for g in gs):
            return 0
        if j == nvars:
            return 1
        key = (gs, j)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = 0
        for a in range(bounds[j]):
            sub = tuple(sorted({g[1:] for g in gs if g[0] <= a}))
            total += count(tuple(_minimalize(list(sub))), j + 1)
        memo[key] = total
        return total

    return count(tuple(_minimalize(gens)), 0)


def vdim(i: Ideal) -> int | float:
    """Vector-space dimension of the quotient, or ``INFINITE`` when positive-dimensional."""
    _, lead = _leading(i)
    return count_standard_monomials(lead, i.ring.nvars)


# ---------------------------------------------------------------- Hilbert series


@dataclass(frozen=True)
class HilbertSeries:
    """First Hilbert series ``numerator(t) / (1-t)^nvars`` with its dimension and degree."""

    numerator: tuple[int, ...]
    nvars: int
    dim: int
    degree: int


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def hilbert_numerator(gens: list[tuple], nvars: int) -> list[int]:
    """Numerator of the Hilbert series of K[x]/M by pivot splitting."""
    gens = _minimalize(gens)
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return [0]
    supports = [frozenset(j for j, a in enumerate(g) if a) for g in gens]
    if all(not (supports[p] & supports[q])
           for p in range(len(gens)) for q in range(p + 1, len(gens))):
        out = [1]
        for g in gens:
            d = sum(g)
            out = _poly_mul(out, [1] + [0] * (d - 1) + [-1])
        return out
    mixed = next(g for g in gens if sum(1 for a in g if a) > 1)
    counts = [sum(1 for g in gens if g[j]) for j in range(nvars)]
    var = max((j for j in range(nvars) if mixed[j]), key=lambda j: (counts[j], -j))
    e = min(g[var] for g in gens if g[var])
    pivot = tuple(e if j == var else 0 for j in range(nvars))
    with_pivot = hilbert_numerator(gens + [pivot], nvars)
    colon = [tuple(max(0, a - b) for a, b in zip(g, pivot)) for g in gens]
    shifted = [0] * e + hilbert_numerator(colon, nvars)
    return _poly_add(with_pivot, shifted)


def hilbert_series_of_monomials(gens: list[tuple], nvars: int) -> HilbertSeries:
    num = hilbert_numerator(gens, nvars)
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    if not any(num):
        return HilbertSeries((0,), nvars, -1, 0)
    q = list(num)
    order = 0
    while sum(q) == 0:
        # divide by (1 - t)
        out, carry = [], 0
        for c in q[:-1]:
            carry += c
            out.append(carry)
        q = out
        order += 1
    return HilbertSeries(tuple(num), nvars, nvars - order, sum(q))


def hilbert_series(i: Ideal) -> HilbertSeries:
    _, lead = _leading(i)
    return hilbert_series_of_monomials(lead, i.ring.nvars)


def hilbert_multiplicity(i: Ideal) -> int:
    """Degree of the leading monomial ideal (Hilbert-Samuel multiplicity for local orders)."""
    hs = hilbert_series(i)
    if hs.dim < 0:
        raise ValueError("multiplicity of the unit ideal")
    return hs.degree


# ---------------------------------------------------------------- squarefree part


def _coeffs_in(p: Polynomial, j: int) -> dict[int, Polynomial]:
    ring = p.ring
    groups: dict[int, dict] = {}
    for c, exps in p.items():
        a = exps[j]
        rest = exps[:j] + (0,) + exps[j + 1:]
        groups.setdefault(a, {})[rest] = c
    return {a: ring.from_dict(d) for a, d in groups.items()}


def _var_degree(p: Polynomial, j: int) -> int:
    return max((exps[j] for _, exps in p.items()), default=-1)


def _normalize(p: Polynomial) -> Polynomial:
    return p.monic() if p.terms else p


def _prem(a: Polynomial, b: Polynomial, j: int) -> Polynomial:
    ring = a.ring
    db = _var_degree(b, j)
    lcb = _coeffs_in(b, j)[db]
    r = a
    while not r.is_zero():
        dr = _var_degree(r, j)
        if dr < db:
            break
        lcr = _coeffs_in(r, j)[dr]
        exps = [0] * ring.nvars
        exps[j] = dr - db
        r = lcb * r - (lcr * b).mul_monomial(exps)
    return r


def _content(p: Polynomial, j: int) -> Polynomial:
    cs = list(_coeffs_in(p, j).values())
    return reduce(poly_gcd, cs[1:], cs[0])


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over Q by recursive primitive remainder sequences."""
    if a.ring != b.ring:
        raise RingMismatch("gcd across rings")
    ring = a.ring
    if a.is_zero():
        return _normalize(b)
    if b.is_zero():
        return _normalize(a)
    if a.is_constant() or b.is_constant():
        return ring.one()
    used = a.variables_used() | b.variables_used()
    j = max(used)
    if _var_degree(a, j) == 0 or _var_degree(b, j) == 0:
        # one of them is free of x_j: gcd divides every x_j-coefficient of the other
        free, other = (a, b) if _var_degree(a, j) == 0 else (b, a)
        return _normalize(reduce(poly_gcd, _coeffs_in(other, j).values(), free))
    ca, cb = _content(a, j), _content(b, j)
    g_cont = poly_gcd(ca, cb)
    pa, pb = a.exact_div(ca), b.exact_div(cb)
    if _var_degree(pa, j) < _var_degree(pb, j):
        pa, pb = pb, pa
    while not pb.is_zero():
        r = _prem(pa, pb, j)
        if r.is_zero():
            pa, pb = pb, r
            break
        if _var_degree(r, j) == 0:
            pa, pb = ring.one(), ring.zero()
            break
        pa, pb = pb, r.exact_div(_content(r, j))
    if _var_degree(pa, j) <= 0:
        pa = ring.one()
    else:
        pa = pa.exact_div(_content(pa, j))
    return _normalize(g_cont * pa)


def squarefree_part(f: Polynomial) -> Polynomial:
    """``f / gcd(f, df/dx_1, ..., df/dx_n)``: a generator of the radical of ``(f)``."""
    if f.is_zero():
        raise ValueError("squarefree part of zero")
    ring = f.ring
    if f.is_constant():
        return ring.one()
    g = f
    for j in range(ring.nvars):
        d = f.derivative(j)
        if not d.is_zero():
            g = poly_gcd(g, d)
    return _normalize(f.exact_div(g))
