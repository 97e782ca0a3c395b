"""Pure-Python term-list kernels.

A term list is a Python list of ``(key, packed, coeff)`` triples sorted by
strictly decreasing ``key``.  ``key`` is the integer order key of the
monomial, ``packed`` the bit-packed exponent vector (with the total degree in
the topmost field) and ``coeff`` a nonzero rational.  Both integers are
linear in the exponent vector, so multiplying monomials is plain addition.

The compiled module ``_ckernels`` exports the same functions with the same
semantics; :mod:`legreuel.kernels` picks one at import time.
"""

from __future__ import annotations

__all__ = [
    "add_terms",
    "sub_terms",
    "sub_mul_terms",
    "mul_terms",
    "scale_shift_terms",
    "max_degree",
    "find_divisor",
    "find_min_ecart_divisor",
]


def add_terms(p, q):
    out = []
    append = out.append
    i = j = 0
    np_, nq = len(p), len(q)
    while i < np_ and j < nq:
        a = p[i]
        b = q[j]
        ka = a[0]
        kb = b[0]
        if ka > kb:
            append(a)
            i += 1
        elif ka < kb:
            append(b)
            j += 1
        else:
            c = a[2] + b[2]
            if c:
                append((ka, a[1], c))
            i += 1
            j += 1
    if i < np_:
        out.extend(p[i:])
    if j < nq:
        out.extend(q[j:])
    return out


def sub_terms(p, q):
    out = []
    append = out.append
    i = j = 0
    np_, nq = len(p), len(q)
    while i < np_ and j < nq:
        a = p[i]
        b = q[j]
        ka = a[0]
        kb = b[0]
        if ka > kb:
            append(a)
            i += 1
        elif ka < kb:
            append((kb, b[1], -b[2]))
            j += 1
        else:
            c = a[2] - b[2]
            if c:
                append((ka, a[1], c))
            i += 1
            j += 1
    if i < np_:
        out.extend(p[i:])
    while j < nq:
        b = q[j]
        append((b[0], b[1], -b[2]))
        j += 1
    return out


def sub_mul_terms(p, q, c, mk, me):
    """Return ``p - c * m * q`` where ``m`` has key ``mk`` and packing ``me``."""
    out = []
    append = out.append
    i = j = 0
    np_, nq = len(p), len(q)
    while i < np_ and j < nq:
        a = p[i]
        b = q[j]
        ka = a[0]
        kb = b[0] + mk
        if ka > kb:
            append(a)
            i += 1
        elif ka < kb:
            append((kb, b[1] + me, -c * b[2]))
            j += 1
        else:
            v = a[2] - c * b[2]
            if v:
                append((ka, a[1], v))
            i += 1
            j += 1
    if i < np_:
        out.extend(p[i:])
    while j < nq:
        b = q[j]
        append((b[0] + mk, b[1] + me, -c * b[2]))
        j += 1
    return out


def scale_shift_terms(p, c, mk, me):
    return [(k + mk, e + me, c * v) for k, e, v in p]


def mul_terms(p, q):
    if len(p) < len(q):
        p, q = q, p
    acc = {}
    get = acc.get
    for kb, eb, cb in q:
        for ka, ea, ca in p:
            k = ka + kb
            cur = get(k)
            if cur is None:
                acc[k] = [ea + eb, ca * cb]
            else:
                cur[1] += ca * cb
    out = [(k, v[0], v[1]) for k, v in acc.items() if v[1]]
    out.sort(reverse=True, key=_first)
    return out


def _first(t):
    return t[0]


def max_degree(p, shift):
    best = -1
    for t in p:
        d = t[1] >> shift
        if d > best:
            best = d
    return best


def find_divisor(e, lead_packs, guard):
    """Index of the first packed monomial in ``lead_packs`` dividing ``e``, or -1."""
    eg = e | guard
    for idx, m in enumerate(lead_packs):
        if (eg - m) & guard == guard:
            return idx
    return -1


def find_min_ecart_divisor(e, lead_packs, ecarts, guard):
    """Index of the dividing monomial with the smallest ecart (first on ties), or -1."""
    eg = e | guard
    best = -1
    best_ecart = 0
    for idx, m in enumerate(lead_packs):
        if (eg - m) & guard == guard:
            ec = ecarts[idx]
            if best < 0 or ec < best_ecart:
                best = idx
                best_ecart = ec
                if ec == 0:
                    break
    return best
