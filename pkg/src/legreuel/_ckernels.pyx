# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term-list kernels; same contract as ``_pykernels``.

Keys and packings stay Python integers (keys outgrow 64 bits in rings
with many variables), so the gain comes from typed loops and direct list
and tuple access.
"""

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


cpdef list add_terms(list p, list q):
    cdef list out = []
    cdef Py_ssize_t i = 0, j = 0, np_ = len(p), nq = len(q)
    cdef tuple a, b
    cdef object ka, kb, c
    while i < np_ and j < nq:
        a = <tuple>p[i]
        b = <tuple>q[j]
        ka = a[0]
        kb = b[0]
        if ka > kb:
            out.append(a)
            i += 1
        elif ka < kb:
            out.append(b)
            j += 1
        else:
            c = a[2] + b[2]
            if c:
                out.append((ka, a[1], c))
            i += 1
            j += 1
    if i < np_:
        out.extend(p[i:])
    if j < nq:
        out.extend(q[j:])
    return out


cpdef list sub_terms(list p, list q):
    cdef list out = []
    cdef Py_ssize_t i = 0, j = 0, np_ = len(p), nq = len(q)
    cdef tuple a, b
    cdef object ka, kb, c
    while i < np_ and j < nq:
        a = <tuple>p[i]
        b = <tuple>q[j]
        ka = a[0]
        kb = b[0]
        if ka > kb:
            out.append(a)
            i += 1
        elif ka < kb:
            out.append((kb, b[1], -b[2]))
            j += 1
        else:
            c = a[2] - b[2]
            if c:
                out.append((ka, a[1], c))
            i += 1
            j += 1
    if i < np_:
        out.extend(p[i:])
    while j < nq:
        b = <tuple>q[j]
        out.append((b[0], b[1], -b[2]))
        j += 1
    return out


cpdef list sub_mul_terms(list p, list q, object c, object mk, object me):
    """Return ``p - c * m * q`` where ``m`` has key ``mk`` and packing ``me``."""
    cdef list out = []
    cdef Py_ssize_t i = 0, j = 0, np_ = len(p), nq = len(q)
    cdef tuple a, b
    cdef object ka, kb, v
    while i < np_ and j < nq:
        a = <tuple>p[i]
        b = <tuple>q[j]
        ka = a[0]
        kb = b[0] + mk
        if ka > kb:
            out.append(a)
            i += 1
        elif ka < kb:
            out.append((kb, b[1] + me, -c * b[2]))
            j += 1
        else:
            v = a[2] - c * b[2]
            if v:
                out.append((ka, a[1], v))
            i += 1
            j += 1
    if i < np_:
        out.extend(p[i:])
    while j < nq:
        b = <tuple>q[j]
        out.append((b[0] + mk, b[1] + me, -c * b[2]))
        j += 1
    return out


cpdef list scale_shift_terms(list p, object c, object mk, object me):
    cdef list out = []
    cdef tuple t
    for t in p:
        out.append((t[0] + mk, t[1] + me, c * t[2]))
    return out


def _first(t):
    return t[0]


cpdef list mul_terms(list p, list q):
    cdef dict acc = {}
    cdef tuple a, b
    cdef object k, cur
    cdef list out
    if len(p) < len(q):
        p, q = q, p
    for b in q:
        for a in p:
            k = a[0] + b[0]
            cur = acc.get(k)
            if cur is None:
                acc[k] = [a[1] + b[1], a[2] * b[2]]
            else:
                (<list>cur)[1] = (<list>cur)[1] + a[2] * b[2]
    out = [(k, cur[0], cur[1]) for k, cur in acc.items() if cur[1]]
    out.sort(reverse=True, key=_first)
    return out


cpdef object max_degree(list p, object shift):
    cdef object best = -1, d
    cdef tuple t
    for t in p:
        d = t[1] >> shift
        if d > best:
            best = d
    return best


cpdef Py_ssize_t find_divisor(object e, list lead_packs, object guard):
    """Index of the first packed monomial in ``lead_packs`` dividing ``e``, or -1."""
    cdef object eg = e | guard
    cdef Py_ssize_t idx, n = len(lead_packs)
    for idx in range(n):
        if (eg - lead_packs[idx]) & guard == guard:
            return idx
    return -1


cpdef Py_ssize_t find_min_ecart_divisor(object e, list lead_packs, list ecarts, object guard):
    """Index of the dividing monomial with the smallest ecart (first on ties), or -1."""
    cdef object eg = e | guard
    cdef Py_ssize_t idx, best = -1, n = len(lead_packs)
    cdef long ec, best_ecart = 0
    for idx in range(n):
        if (eg - lead_packs[idx]) & guard == guard:
            ec = ecarts[idx]
            if best < 0 or ec < best_ecart:
                best = idx
                best_ecart = ec
                if ec == 0:
                    break
    return best
