"""Standard bases for global, local and mixed monomial orders.

Reduction is Mora's weak normal form (ecart-minimizing reducer choice, with
intermediate remainders admitted as later reducers).  Under a well-order the
ecart bookkeeping is skipped and it is ordinary top-reduction.  For the pure
local order, non-homogeneous input is homogenized first and handled by the
well-order code, because Mora reduction can grow long power-series tails on
such input.  Pairs go through the Gebauer-Moeller update
(product and chain criteria) and are selected by the normal strategy
(smallest lcm degree) or, on request, the sugar strategy.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import gmpy2

from . import kernels as _k
from .errors import RingMismatch
from .ring import FIELD_BITS, MonomialOrder, Polynomial, RingSpec

log = logging.getLogger(__name__)


class _Elem:
    __slots__ = ("terms", "lk", "le", "lexp", "ecart", "sugar")

    def __init__(self, ring: RingSpec, terms: list, sugar: int | None = None):
        lc = terms[0][2]
        if lc != 1:
            inv = 1 / lc
            terms = [(k, e, c * inv) for k, e, c in terms]
        self.terms = terms
        self.lk, self.le = terms[0][0], terms[0][1]
        self.lexp = ring.unpack(self.le)
        deg = _k.max_degree(terms, ring._shift)
        self.ecart = deg - ring.degree_of(self.le)
        self.sugar = deg if sugar is None else max(sugar, deg)


def _top_reduce(ring: RingSpec, h: list, reducers: list[_Elem], stats=None) -> list:
    """Mora weak normal form of the term list ``h`` with respect to ``reducers``."""
    guard = ring._guard
    if ring.order.is_global:
        packs = [r.le for r in reducers]
        find = _k.find_divisor
        sub_mul = _k.sub_mul_terms
        while h:
            k0, e0, c0 = h[0]
            idx = find(e0, packs, guard)
            if idx < 0:
                break
            g = reducers[idx]
            h = sub_mul(h, g.terms, c0, k0 - g.lk, e0 - g.le)
            if stats is not None:
                stats["steps"] += 1
        return h

    shift = ring._shift
    T = list(reducers)
    packs = [r.le for r in T]
    ecarts = [r.ecart for r in T]
    find = _k.find_min_ecart_divisor
    sub_mul = _k.sub_mul_terms
    maxdeg = _k.max_degree
    while h:
        k0, e0, c0 = h[0]
        idx = find(e0, packs, ecarts, guard)
        if idx < 0:
            break
        g = T[idx]
        eh = maxdeg(h, shift) - (e0 >> shift)
        if g.ecart > eh:
            # h joins the reducer set; later steps may use it (Mora's rule)
            el = _Elem(ring, h)
            T.append(el)
            packs.append(el.le)
            ecarts.append(el.ecart)
        h = sub_mul(h, g.terms, c0, k0 - g.lk, e0 - g.le)
        if stats is not None:
            stats["steps"] += 1
    return h


def _full_reduce(ring: RingSpec, h: list, reducers: list[_Elem]) -> list:
    """Reduce every term (well-orders only)."""
    out = []
    while h:
        h = _top_reduce(ring, h, reducers)
        if not h:
            break
        out.append(h[0])
        h = h[1:]
    return out


def mora_normal_form(p: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    """Weak normal form of ``p`` modulo ``basis``.

    Returns ``h`` with ``u*p - h`` in the ideal of ``basis`` for a unit ``u``
    of the order's ring (``u = 1`` for global orders) and ``h`` either zero or
    with a leading monomial not divisible by any leading monomial of
    ``basis``.
    """
    ring = p.ring
    reducers = []
    for b in basis:
        if b.ring != ring:
            raise RingMismatch("normal form inputs must share the ring")
        if b.terms:
            reducers.append(_Elem(ring, b.terms))
    return Polynomial(ring, _top_reduce(ring, p.terms, reducers))


def spoly(f: Polynomial, g: Polynomial) -> Polynomial:
    ring = f.ring
    lk, le = ring.lcm(f.terms[0][1], g.terms[0][1])
    fk, fe, fc = f.terms[0]
    gk, ge, gc = g.terms[0]
    a = _k.scale_shift_terms(f.terms, 1 / fc, lk - fk, le - fe)
    return Polynomial(ring, _k.sub_mul_terms(a, g.terms, 1 / gc, lk - gk, le - ge))


# ---------------------------------------------------------------- ideals


@dataclass
class StdBasis:
    """Minimal standard basis with monic elements.

    For well-orders the basis is also tail-reduced (the reduced Groebner
    basis); for local and mixed orders tails are left as computed.
    """

    ring: RingSpec
    elements: list[Polynomial]
    leading_ideal: list[tuple[int, ...]]
    stats: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def leading_packs(self) -> list[int]:
        return [p.terms[0][1] for p in self.elements]

    def is_unit(self) -> bool:
        return any(p.terms[0][1] == 0 for p in self.elements)

    def normal_form(self, p: Polynomial) -> Polynomial:
        if p.ring != self.ring:
            raise RingMismatch("ring mismatch")
        reducers = [_Elem(self.ring, q.terms) for q in self.elements]
        return Polynomial(self.ring, _top_reduce(self.ring, p.terms, reducers))


class Ideal:
    """Finitely generated ideal; the standard basis is computed once and cached."""

    __slots__ = ("ring", "generators", "_std")

    def __init__(self, ring: RingSpec, generators: Iterable[Polynomial] = ()):
        gens = []
        for g in generators:
            if g.ring != ring:
                raise RingMismatch(f"generator {g} is not in {ring}")
            if g.terms:
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self._std = None

    @classmethod
    def of(cls, *polys: Polynomial) -> "Ideal":
        if not polys:
            raise ValueError("need at least one polynomial to infer the ring")
        return cls(polys[0].ring, polys)

    def std(self) -> StdBasis:
        if self._std is None:
            self._std = std_basis(self)
        return self._std

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatch("ideal sum across rings")
        return Ideal(self.ring, self.generators + other.generators)

    def __contains__(self, p: Polynomial) -> bool:
        return ideal_contains(self, p)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    def __repr__(self):
        return f"Ideal{self}"


# ---------------------------------------------------------------- Buchberger


def _gm_update(ring, elems, active, pairs, new_idx, strategy, counter):
    """Gebauer-Moeller update after appending ``elems[new_idx]``."""
    h = elems[new_idx]
    he, hx = h.le, h.lexp
    divides = ring.divides
    mono = ring.mono

    cand = []
    for i in active:
        g = elems[i]
        gx = g.lexp
        lx = tuple(map(max, gx, hx))
        lk, le = mono(lx)
        coprime = le == g.le + he
        cand.append((i, lk, le, coprime))

    kept = []
    for pos, (i, lk, le, coprime) in enumerate(cand):
        if coprime:
            kept.append(cand[pos])
            continue
        dominated = False
        for j in range(pos + 1, len(cand)):
            if divides(cand[j][2], le):
                dominated = True
                break
        if not dominated:
            for c in kept:
                if divides(c[2], le):
                    dominated = True
                    break
        if not dominated:
            kept.append(cand[pos])

    survivors = []
    for entry in pairs:
        _, _, _, i, j, le = entry
        if i < 0:
            survivors.append(entry)
            continue
        if divides(he, le):
            lih = ring.lcm(elems[i].le, he)[1]
            ljh = ring.lcm(elems[j].le, he)[1]
            if lih != le and ljh != le:
                continue
        survivors.append(entry)
    if len(survivors) != len(pairs):
        heapq.heapify(survivors)

    shift = ring._shift
    for i, lk, le, coprime in kept:
        if coprime:
            continue
        deg = le >> shift
        if strategy == "sugar":
            g = elems[i]
            s = max(g.sugar + deg - (g.le >> shift), h.sugar + deg - (he >> shift))
            prio = (s, deg, -lk)
        else:
            prio = (deg, -lk)
        heapq.heappush(survivors, (prio, next(counter), "pair", i, new_idx, le))

    new_active = [i for i in active if not divides(he, elems[i].le)]
    new_active.append(new_idx)
    return new_active, survivors


def _staircase_top(gens: list[tuple], nvars: int) -> int:
    """Largest degree of a monomial outside the ideal generated by ``gens``.

    Assumes a pure power of every variable is among ``gens``.
    """
    @lru_cache(maxsize=None)
    def top(gs: tuple, j: int) -> int:
        if j == 0:
            return 0
        bound = min(g[j - 1] for g in gs if not any(g[:j - 1]))
        best = -1
        for e in range(bound):
            sub = tuple(sorted({g[:j - 1] for g in gs if g[j - 1] <= e}))
            best = max(best, e + top(sub, j - 1))
        return best

    return top(tuple(sorted(set(gens))), nvars)


class _Corner:
    """Highest-corner truncation for a homogenized local computation.

    Once the local leading monomials found so far contain every monomial of
    degree ``D``, Nakayama's lemma puts all of them in the localized ideal.
    They are added to the basis and every term of degree ``>= D`` in the
    original variables is dropped from then on.
    """

    def __init__(self, hring: RingSpec):
        self.ring = hring
        self.n = hring.nvars - 1
        self.bound: int | None = None
        self.mask = (1 << FIELD_BITS) - 1

    def trim(self, h: list) -> list:
        if self.bound is None:
            return h
        shift, mask, D = self.ring._shift, self.mask, self.bound
        return [t for t in h if (t[1] >> shift) - (t[1] & mask) < D]

    def update(self, elems: list, active: list[int]) -> list[list]:
        if self.n == 0:
            return []
        leads = [elems[i].lexp[1:] for i in active]
        have = [False] * self.n
        for m in leads:
            nz = [j for j, a in enumerate(m) if a]
            if len(nz) == 1:
                have[nz[0]] = True
        if not all(have):
            return []
        D = _staircase_top(leads, self.n) + 1
        if self.bound is not None and D >= self.bound:
            return []
        self.bound = D
        log.debug("local corner found: all monomials of degree %d lie in the ideal", D)
        out = []
        for ex in _monomials_of_degree(self.n, D):
            k, e = self.ring.mono((0,) + ex)
            out.append([(k, e, gmpy2.mpq(1))])
        return out


def _monomials_of_degree(n: int, d: int):
    if n == 1:
        yield (d,)
        return
    for a in range(d, -1, -1):
        for rest in _monomials_of_degree(n - 1, d - a):
            yield (a,) + rest


def _homogenized_std(ideal: Ideal, strategy: str) -> StdBasis:
    """Standard basis for the local order via homogenization.

    Generators are homogenized with a fresh first variable and a Groebner
    basis is taken under total degree refined by the local order; setting
    the new variable to 1 yields a standard basis of the localized ideal.
    This avoids the power-series growth Mora reduction can show on
    non-homogeneous input.
    """
    ring = ideal.ring
    n = ring.nvars
    name = "@h"
    while name in ring.variables:
        name += "'"
    hring = RingSpec((name,) + ring.variables, MonomialOrder("hds"))
    hgens = []
    for g in ideal.generators:
        d = max(sum(ex) for _, ex in g.items())
        hgens.append(hring.from_dict({(d - sum(ex),) + ex: c for c, ex in g.items()}))
    hb = std_basis(Ideal(hring, hgens), strategy, _corner=_Corner(hring))
    polys = []
    for q in hb.elements:
        acc: dict = {}
        for c, ex in q.items():
            acc[ex[1:]] = acc.get(ex[1:], 0) + c
        polys.append(ring.from_dict(acc))
    if any(p.terms[0][1] == 0 for p in polys):
        basis = [ring.one()]
    else:
        polys.sort(key=lambda p: p.terms[0][0], reverse=True)
        basis = []
        for p in polys:
            le = p.terms[0][1]
            if any(ring.divides(b.terms[0][1], le) for b in basis):
                continue
            basis = [b for b in basis if not ring.divides(le, b.terms[0][1])]
            basis.append(p.monic())
        basis.sort(key=lambda p: p.terms[0][0], reverse=True)
    stats = dict(hb.stats, homogenized=True)
    log.debug("std %s via homogenization: %d elements", ring, len(basis))
    return StdBasis(ring, basis, [p.lead_exponents() for p in basis], stats)


def std_basis(ideal: Ideal, strategy: str = "normal", method: str = "auto",
              _corner: _Corner | None = None) -> StdBasis:
    """Minimal standard basis of ``ideal`` (reduced when the order is a well-order).

    ``method="mora"`` forces Mora reduction for local orders; the default
    homogenizes non-homogeneous input under the pure local order.
    """
    if strategy not in ("normal", "sugar"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if method not in ("auto", "mora"):
        raise ValueError(f"unknown method {method!r}")
    ring = ideal.ring
    if method == "auto" and ring.order.kind == "ds" and not ideal.is_homogeneous():
        return _homogenized_std(ideal, strategy)
    counter = iter(range(1 << 62))
    stats = {"pairs": 0, "zero": 0, "steps": 0, "generators": len(ideal.generators)}
    shift = ring._shift

    queue: list = []
    inputs: list[list] = []
    for g in ideal.generators:
        inputs.append(g.terms)
        le = g.terms[0][1]
        deg = le >> shift
        prio = (_k.max_degree(g.terms, shift), deg, -g.terms[0][0]) if strategy == "sugar" \
            else (deg, -g.terms[0][0])
        heapq.heappush(queue, (prio, next(counter), "gen", -1, len(inputs) - 1, le))

    elems: list[_Elem] = []
    active: list[int] = []
    unit = False
    while queue and not unit:
        prio, _, what, i, j, _ = heapq.heappop(queue)
        if what == "gen":
            h = inputs[j]
            sugar = None
        else:
            stats["pairs"] += 1
            a, b = elems[i], elems[j]
            lk, le = ring.lcm(a.le, b.le)
            t = _k.scale_shift_terms(a.terms, 1, lk - a.lk, le - a.le)
            h = _k.sub_mul_terms(t, b.terms, 1, lk - b.lk, le - b.le)
            sugar = prio[0] if strategy == "sugar" else None
        if _corner is not None:
            h = _corner.trim(h)
        h = _top_reduce(ring, h, [elems[x] for x in active], stats)
        if _corner is not None and h:
            h = _corner.trim(h)
            while h:
                # trimming can expose a reducible leading term
                h2 = _corner.trim(_top_reduce(ring, h, [elems[x] for x in active], stats))
                if h2 == h:
                    break
                h = h2
        if not h:
            if what == "pair":
                stats["zero"] += 1
            continue
        elems.append(_Elem(ring, h, sugar))
        idx = len(elems) - 1
        if idx and idx % 50 == 0:
            log.debug("std %s: %d elements, %d queued, %s", ring, idx, len(queue), stats)
        if elems[idx].le == 0:
            unit = True
        active, queue = _gm_update(ring, elems, active, queue, idx, strategy, counter)
        if _corner is not None:
            for mono in _corner.update(elems, active):
                elems.append(_Elem(ring, mono))
                active, queue = _gm_update(ring, elems, active, queue, len(elems) - 1,
                                           strategy, counter)

    if unit:
        basis = [ring.one()]
    else:
        chosen = [elems[i] for i in active]
        chosen.sort(key=lambda el: el.lk, reverse=True)
        if ring.order.is_global:
            reduced = []
            for pos, el in enumerate(chosen):
                others = chosen[:pos] + chosen[pos + 1:]
                tail = _full_reduce(ring, el.terms[1:], others)
                reduced.append([el.terms[0]] + tail)
            basis = [Polynomial(ring, t) for t in reduced]
        else:
            basis = [Polynomial(ring, el.terms) for el in chosen]
    log.debug("std %s: %s -> %d elements", ring, stats, len(basis))
    return StdBasis(ring, basis, [p.lead_exponents() for p in basis], stats)


def _leading_set(i: Ideal) -> frozenset:
    return frozenset(i.std().leading_ideal)


def _contains_by_leading(big: Ideal, extra: Sequence[Polynomial]) -> bool:
    # big <= big + extra, so they agree iff their leading ideals agree
    return _leading_set(big) == _leading_set(Ideal(big.ring, big.generators + tuple(extra)))


def _avoid_reduction(i: Ideal, polys: Sequence[Polynomial]) -> bool:
    """Local non-homogeneous membership goes through leading ideals instead."""
    if i.ring.order.kind != "ds":
        return False
    return not (i.is_homogeneous() and all(p.is_homogeneous() for p in polys))


def ideal_contains(i: Ideal, p: Polynomial) -> bool:
    if p.ring != i.ring:
        raise RingMismatch("membership across rings")
    if not p.terms:
        return True
    if _avoid_reduction(i, [p]):
        return _contains_by_leading(i, [p])
    return i.std().normal_form(p).is_zero()


def ideal_subset(a: Ideal, b: Ideal) -> bool:
    """Is ``a`` contained in ``b``?"""
    if a.ring != b.ring:
        raise RingMismatch("comparing ideals of different rings")
    if _avoid_reduction(b, a.generators):
        return _contains_by_leading(b, a.generators)
    return all(ideal_contains(b, g) for g in a.generators)


def ideal_equal(a: Ideal, b: Ideal) -> bool:
    return ideal_subset(a, b) and ideal_subset(b, a)
