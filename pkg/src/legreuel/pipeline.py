"""Euler-characteristic invariants of functions on isolated singularities.

Every invariant here is a signed sum of lengths

    dim O_X / ((f) + J_X(f, g) : f^inf)

where ``J_X(f, g)`` is the relative Jacobian ideal.  Generic linear forms are
drawn from a seeded generator and accepted only when every finiteness and
dimension precondition checks out on the sampled data; otherwise the form is
redrawn, up to a retry cap.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .errors import (
    CodimMismatch,
    ConsistencyViolation,
    DimensionMismatch,
    HypothesisViolation,
    InfiniteDimension,
    PolarDimensionTooHigh,
    RetriesExhausted,
    RingMismatch,
)
from .ideal_ops import (
    INFINITE,
    hilbert_multiplicity,
    ideal_saturate,
    krull_dim,
    vdim,
)
from .ring import MonomialOrder, PolyMatrix, Polynomial, RingSpec, coeff, jacobian, minors
from .stdbasis import Ideal, ideal_contains

log = logging.getLogger(__name__)

COEFF_BOUND = 97
DEFAULT_RETRIES = 8

SliceOverride = Union[Ideal, Callable[[Polynomial], Ideal]]


# ---------------------------------------------------------------- data


@dataclass(frozen=True)
class VarietyPresentation:
    """An ideal ``I_X`` in a local ring together with the caller's claims about ``X``.

    The pure dimension is checked against the Krull dimension on construction;
    the isolated-singularity claim is taken on trust (see
    :func:`check_isolated_singularity`).
    """

    ideal: Ideal
    pure_dim: int
    isolated_singularity_asserted: bool = True
    check_dimension: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not self.ring.order.is_local:
            raise HypothesisViolation(
                f"the ambient order must be local, got {self.ring.order}")
        if self.check_dimension:
            d = krull_dim(self.ideal)
            if d != self.pure_dim:
                raise DimensionMismatch(
                    f"ideal has dimension {d}, presentation claims {self.pure_dim}")

    @property
    def ring(self) -> RingSpec:
        return self.ideal.ring

    @property
    def ambient_dim(self) -> int:
        return self.ring.nvars

    def cut(self, *polys: Polynomial) -> "VarietyPresentation":
        """Intersect with hypersurfaces; each one must drop the dimension by one."""
        return VarietyPresentation(
            Ideal(self.ring, self.ideal.generators + tuple(polys)),
            self.pure_dim - len(polys),
            self.isolated_singularity_asserted,
        )

    @classmethod
    def ambient(cls, ring: RingSpec) -> "VarietyPresentation":
        return cls(Ideal(ring, []), ring.nvars, True, check_dimension=False)


@dataclass(frozen=True)
class LinearForm:
    coefficients: tuple
    seed: int | None = None
    attempt: int | None = None

    def __post_init__(self):
        if not any(self.coefficients):
            raise ValueError("the zero form is not a linear form")

    def polynomial(self, ring: RingSpec) -> Polynomial:
        if len(self.coefficients) != ring.nvars:
            raise ValueError("one coefficient per ring variable expected")
        p = ring.zero()
        for j, c in enumerate(self.coefficients):
            if c:
                p = p + ring.var(j) * c
        return p

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "LinearForm":
        if not p.is_homogeneous() or p.total_degree() != 1:
            raise ValueError(f"{p} is not a linear form")
        cs = [coeff(0)] * p.ring.nvars
        for c, exps in p.items():
            cs[exps.index(1)] = c
        return cls(tuple(cs))


@dataclass(frozen=True)
class SliceTerm:
    """One summand: the length of ``O/((f) + J(f, form) : f^inf)`` with its sign."""

    index: int
    form: str | None
    saturation_exponent: int | None
    length: int
    sign: int

    @property
    def value(self) -> int:
        return self.sign * self.length


@dataclass
class ComputationReport:
    value: int
    per_slice: list[SliceTerm] = field(default_factory=list)
    resamples: int = 0
    seed: int | None = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "per_slice": [
                {"index": t.index, "form": t.form, "k": t.saturation_exponent,
                 "vdim": t.length, "sign": t.sign}
                for t in self.per_slice
            ],
            "resamples": self.resamples,
            "seed": self.seed,
            "details": self.details,
        }


# ---------------------------------------------------------------- sampling


def sample_generic_linear(
    ring: RingSpec,
    seed: int,
    attempt: int,
    variables: Sequence[int] | None = None,
    exclude: Iterable[tuple] = (),
) -> LinearForm:
    """Deterministic pseudo-random linear form with integer coefficients in ``[-97, 97]``.

    Only ``variables`` (default: all) get nonzero coefficients.  Forms whose
    coefficient vector appears in ``exclude`` are skipped.
    """
    if seed < 0 or attempt < 0:
        raise ValueError("seed and attempt must be non-negative")
    support = range(ring.nvars) if variables is None else list(variables)
    if not support:
        raise ValueError("no variables to build a linear form from")
    rng = random.Random((seed << 32) | attempt)
    seen = set(exclude)
    while True:
        cs = [0] * ring.nvars
        for j in support:
            cs[j] = rng.randint(-COEFF_BOUND, COEFF_BOUND)
        key = tuple(cs)
        if any(cs) and key not in seen:
            return LinearForm(tuple(coeff(c) for c in cs), seed, attempt)


class _Sampler:
    """Hands out linear forms: explicit ones first, then seeded draws."""

    def __init__(self, ring, seed, retries, variables=None, forms=None):
        self.ring = ring
        self.seed = seed
        self.retries = retries
        self.variables = variables
        self.explicit = list(forms or [])
        self.attempt = 0
        self.used: set[tuple] = set()
        self.failures = 0

    def draw(self) -> Polynomial:
        if self.explicit:
            p = self.explicit.pop(0)
            if isinstance(p, LinearForm):
                p = p.polynomial(self.ring)
            return p
        form = sample_generic_linear(self.ring, self.seed, self.attempt,
                                     self.variables, self.used)
        self.attempt += 1
        self.used.add(tuple(int(c) for c in form.coefficients))
        return form.polynomial(self.ring)

    def with_retries(self, what: str, step: Callable[[Polynomial], object]):
        diagnostics = []
        for _ in range(self.retries + 1):
            ell = self.draw()
            try:
                return ell, step(ell)
            except HypothesisViolation as exc:
                if isinstance(exc, RetriesExhausted):
                    raise
                diagnostics.append(f"{ell}: {exc.kind}: {exc}")
                self.failures += 1
                log.info("%s: form %s rejected (%s)", what, ell, exc.kind)
        raise RetriesExhausted(f"{what}: no admissible linear form after "
                               f"{self.retries + 1} attempts", diagnostics)


def _default_variables(ring: RingSpec, pi: Polynomial | None) -> list[int] | None:
    """Forms on the smoothing's base space leave out the deformation variable."""
    if pi is None or len(pi.terms) != 1 or pi.total_degree() != 1:
        return None
    j = pi.lead_exponents().index(1)
    return [i for i in range(ring.nvars) if i != j]


# ---------------------------------------------------------------- core formula


def _dedupe(polys: Iterable[Polynomial]) -> list[Polynomial]:
    seen, out = set(), []
    for p in polys:
        if p.is_zero():
            continue
        m = p.monic()
        if m not in seen:
            seen.add(m)
            out.append(p)
    return out


def jacobian_ideal(X: VarietyPresentation, fs: Sequence[Polynomial]) -> Ideal:
    """``I_X`` plus the ``(N - d + r)``-minors of the Jacobian of (generators of I_X, fs)."""
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one function")
    ring = X.ring
    for f in fs:
        if f.ring != ring:
            raise ValueError("functions must live in the ambient ring")
    size = X.ambient_dim - X.pure_dim + len(fs)
    m = jacobian(list(X.ideal.generators) + fs)
    if size > min(m.rows, m.cols):
        raise ValueError(f"minor size {size} exceeds the {m.rows}x{m.cols} Jacobian")
    return Ideal(ring, list(X.ideal.generators) + _dedupe(minors(m, size)))


def _regular_on_minors(X: VarietyPresentation, J: Ideal, f: Polynomial, r: int) -> bool:
    """Whether ``f`` is a nonzerodivisor modulo ``J``, so that ``J : f^inf = J``.

    On the ambient space ``J`` is generated by the maximal minors of an
    ``r x N`` matrix, so ``dim J >= r - 1`` and ``dim (J + (f)) >= dim J - 1``.
    If ``J + (f)`` has dimension ``r - 2`` both bounds are sharp: ``J`` has
    the expected codimension, hence is Cohen-Macaulay, and ``f`` is a
    parameter on it, hence regular. Only the smaller ideal is ever computed.
    """
    if X.ideal.generators or r < 2:
        return False
    return krull_dim(Ideal(X.ring, J.generators + (f,))) == r - 2


def _polar_length(X: VarietyPresentation, f: Polynomial, g: Polynomial):
    """``(length, k)`` for ``O_X / ((f) + J_X(f, g) : f^inf)``, checking the hypotheses."""
    J = jacobian_ideal(X, [f, g])
    if _regular_on_minors(X, J, f, 2):
        # dimension is exactly 1 here, see above
        sat, k = J, 1
    else:
        sat, k = ideal_saturate(J, f)
        d = krull_dim(sat)
        if d > 1:
            raise PolarDimensionTooHigh(f"the polar locus has dimension {d}")
    length = vdim(Ideal(X.ring, sat.generators + (f,)))
    if length == INFINITE:
        raise InfiniteDimension(f"the critical locus of {g} relative to {f} is not isolated")
    return int(length), k


def euler_diff(X: VarietyPresentation, f: Polynomial, g: Polynomial) -> ComputationReport:
    """Difference of Euler characteristics of the Milnor fibre of ``f`` and its slice by ``g``."""
    n = X.pure_dim - 1
    if n < 0:
        raise DimensionMismatch("X must have positive dimension")
    length, k = _polar_length(X, f, g)
    sign = -1 if n & 1 else 1
    term = SliceTerm(n + 1, str(g), k, length, sign)
    return ComputationReport(term.value, [term])


def _slice_terms(X, f, sampler: _Sampler, lowest: int = 2):
    """Jacobian summands for slices of dimension ``X.pure_dim`` down to ``lowest``.

    Returns the terms, the final slice and the forms used (outermost first).
    """
    terms, forms = [], []
    cur = X
    for i in range(X.pure_dim, lowest - 1, -1):
        def step(ell, cur=cur):
            nxt = cur.cut(ell)
            length, k = _polar_length(cur, f, ell)
            return nxt, length, k
        ell, (nxt, length, k) = sampler.with_retries(f"slice {i}", step)
        sign = 1 if (i - 1) % 2 == 0 else -1
        terms.append(SliceTerm(i, str(ell), k, length, sign))
        forms.append(ell)
        cur = nxt
    return terms, cur, forms


def _resolve_slice(override: SliceOverride, ell: Polynomial, X1: VarietyPresentation) -> Ideal:
    slice_ideal = override(ell) if callable(override) else override
    if not isinstance(slice_ideal, Ideal):
        raise TypeError("the reduced slice must be an Ideal")
    if slice_ideal.ring != X1.ring:
        raise ValueError("reduced slice lives in a different ring")
    missing = [g for g in X1.ideal.generators if not ideal_contains(slice_ideal, g)]
    if missing:
        raise ValueError(f"reduced slice does not contain {missing[0]}; "
                         "it must contain the slice ideal X + (forms)")
    d = krull_dim(slice_ideal)
    if d != 1:
        raise DimensionMismatch(f"reduced slice has dimension {d}, expected 1")
    return slice_ideal


def chi_fiber(
    X: VarietyPresentation,
    f: Polynomial,
    rng_seed: int = 0,
    reduced_slice_override: SliceOverride | None = None,
    *,
    retries: int = DEFAULT_RETRIES,
    forms: Sequence | None = None,
) -> ComputationReport:
    """Euler characteristic of the Milnor fibre of ``f`` on ``X`` by successive generic slicing.

    ``forms`` fixes the slicing forms (outermost first) instead of sampling.
    ``reduced_slice_override`` replaces the final curve slice ``X_1`` by a
    reduced ideal: either a fixed Ideal or a function of the last form.
    """
    if X.pure_dim < 1:
        raise DimensionMismatch("X must have positive dimension")
    sampler = _Sampler(X.ring, rng_seed, retries, forms=forms)
    terms, X1, used = _slice_terms(X, f, sampler)
    base_ideal = X1.ideal
    if reduced_slice_override is not None:
        if not used:
            raise ValueError("a reduced slice only applies when X is sliced")
        base_ideal = _resolve_slice(reduced_slice_override, used[-1], X1)
    base = vdim(Ideal(X.ring, base_ideal.generators + (f,)))
    if base == INFINITE:
        raise InfiniteDimension(f"{f} vanishes on a component of the curve slice")
    terms.append(SliceTerm(1, None, None, int(base), 1))
    return ComputationReport(
        sum(t.value for t in terms), terms, sampler.failures, rng_seed,
        {"forms": [str(p) for p in used]},
    )


# ---------------------------------------------------------------- applications


def icis_legreuel(f_list: Sequence[Polynomial]) -> int:
    """``dim O/((f_1..f_{k-1}) + J_k(f_1..f_k))``, the sum of two consecutive ICIS Milnor numbers."""
    fs = list(f_list)
    if not fs:
        raise ValueError("need at least one function")
    ring = fs[0].ring
    if not ring.order.is_local:
        raise HypothesisViolation("an ICIS computation needs a local order")
    k = len(fs)
    m = jacobian(fs)
    if k > m.cols:
        raise ValueError("more equations than variables")
    ideal = Ideal(ring, fs[:-1] + _dedupe(minors(m, k)))
    v = vdim(ideal)
    if v == INFINITE:
        raise InfiniteDimension("input is not an isolated complete intersection")
    return int(v)


def _vanishing_sum(smoothing, pi, sampler, d):
    """Slice terms plus ``m_0 - 1`` for a smoothing of a ``d``-dimensional germ."""
    terms, _, used = _slice_terms(smoothing, pi, sampler)
    central = Ideal(smoothing.ring, smoothing.ideal.generators + (pi,))
    m0 = hilbert_multiplicity(central)
    total = sum(t.value for t in terms) + m0 - 1
    return total, terms, m0, used


def _check_smoothing(smoothing: VarietyPresentation, pi: Polynomial, dim: int):
    if smoothing.pure_dim != dim:
        raise DimensionMismatch(
            f"expected a {dim}-dimensional total space, got {smoothing.pure_dim}")
    if pi.ring != smoothing.ring:
        raise ValueError("smoothing parameter lives in a different ring")


@dataclass(frozen=True)
class CurveInvariants:
    mu_f: int
    mu_X: int
    deg_f: int
    report: ComputationReport


def curve_invariants(
    smoothing: VarietyPresentation,
    pi: Polynomial,
    fbar: Polynomial,
    rng_seed: int = 0,
    *,
    retries: int = DEFAULT_RETRIES,
    forms: Sequence | None = None,
) -> CurveInvariants:
    """Milnor numbers of a function on a smoothable space curve and of the curve itself."""
    _check_smoothing(smoothing, pi, 2)
    ring = smoothing.ring
    mu_f, k_f = _polar_length(smoothing, pi, fbar)
    deg_f = vdim(Ideal(ring, smoothing.ideal.generators + (pi, fbar)))
    if deg_f == INFINITE:
        raise InfiniteDimension(f"{fbar} is not finite on the central curve")
    deg_f = int(deg_f)

    sampler = _Sampler(ring, rng_seed, retries, _default_variables(ring, pi), forms)
    diagnostics = []
    for _ in range(retries + 1):
        total, terms, m0, used = _vanishing_sum(smoothing, pi, sampler, 1)
        mu_X = -total
        if mu_f == mu_X + deg_f - 1:
            report = ComputationReport(
                mu_X, terms, sampler.failures + len(diagnostics), rng_seed,
                {"mu_f": mu_f, "mu_f_k": k_f, "deg_f": deg_f, "m0": m0,
                 "forms": [str(p) for p in used]},
            )
            return CurveInvariants(mu_f, mu_X, deg_f, report)
        diagnostics.append(f"{used[0]}: mu_f={mu_f}, mu_X={mu_X}, deg={deg_f}")
        log.info("curve consistency failed with %s; resampling", used[0])
    raise ConsistencyViolation("mu(f) = mu(X) + deg(f) - 1 failed for every sampled form: "
                               + " | ".join(diagnostics))


def gorenstein_mu(
    smoothing: VarietyPresentation,
    pi: Polynomial,
    rng_seed: int = 0,
    *,
    retries: int = DEFAULT_RETRIES,
    forms: Sequence | None = None,
) -> ComputationReport:
    """Milnor number of a smoothable Gorenstein surface from a 3-dimensional smoothing."""
    _check_smoothing(smoothing, pi, 3)
    ring = smoothing.ring
    sampler = _Sampler(ring, rng_seed, retries, _default_variables(ring, pi), forms)
    total, terms, m0, used = _vanishing_sum(smoothing, pi, sampler, 2)
    return ComputationReport(total, terms, sampler.failures, rng_seed,
                             {"m0": m0, "forms": [str(p) for p in used]})


@dataclass(frozen=True)
class DeterminantalInvariants:
    nu_X: int
    mu_f: int | None
    nu_slice: int | None
    report: ComputationReport


def _fresh_name(names: Sequence[str], base: str = "t") -> str:
    name, n = base, 0
    while name in names:
        n += 1
        name = f"{base}{n}"
    return name


def determinantal_smoothing(F: PolyMatrix, A: PolyMatrix, s: int):
    """Ideal of ``s``-minors of ``F + t*A`` in the ring extended by ``t``, and ``t``."""
    if (F.rows, F.cols) != (A.rows, A.cols):
        raise ValueError("F and A must have the same shape")
    if not all(a.is_constant() for a in A.entries):
        raise ValueError("A must be a constant matrix")
    ring = F.ring
    if not ring.order.is_local:
        raise HypothesisViolation("determinantal computations need a local order")
    t_name = _fresh_name(ring.variables)
    big = RingSpec(ring.variables + (t_name,), MonomialOrder("ds"))
    t = big.var(t_name)
    shift = list(range(ring.nvars))
    entries = [f.map_to(big, shift) + t * a.map_to(big, shift)
               for f, a in zip(F.entries, A.entries)]
    M = PolyMatrix(big, F.rows, F.cols, entries)
    return Ideal(big, _dedupe(minors(M, s))), t


def ids_invariants(
    F: PolyMatrix,
    A: PolyMatrix,
    s: int,
    fbar: Polynomial | None = None,
    rng_seed: int = 0,
    *,
    retries: int = DEFAULT_RETRIES,
    forms: Sequence | None = None,
) -> DeterminantalInvariants:
    """Vanishing Euler characteristic of an isolated determinantal singularity.

    ``fbar`` (a polynomial in the ring of ``F``) adds the Milnor number of the
    function and the vanishing Euler characteristic of its zero fibre.
    """
    m, n = sorted((F.rows, F.cols))
    if not 1 <= s <= m:
        raise ValueError(f"s must lie in [1, {m}]")
    N = F.ring.nvars
    codim = (m - s + 1) * (n - s + 1)
    if A.is_zero():
        raise CodimMismatch("A = 0 gives the trivial deformation, not a smoothing")
    # below this bound a generic F + tA is known to be a smoothing; above it
    # we still compute, but the caller should check the fibres themselves
    generic_smoothing = s == 1 or N < (m - s + 2) * (n - s + 2)
    if not generic_smoothing:
        log.warning("N = %d reaches %d: F + tA need not be a smoothing for generic A",
                    N, (m - s + 2) * (n - s + 2))
    central = Ideal(F.ring, _dedupe(minors(F, s)))
    d = N - codim
    if d < 1 or krull_dim(central) != d:
        raise CodimMismatch(f"the {s}-minors of F do not cut out codimension {codim}")
    total_ideal, t = determinantal_smoothing(F, A, s)
    try:
        smoothing = VarietyPresentation(total_ideal, d + 1)
    except DimensionMismatch as exc:
        raise CodimMismatch(f"the deformation is not flat of the expected dimension: {exc}")
    ring = smoothing.ring
    sampler = _Sampler(ring, rng_seed, retries, _default_variables(ring, t), forms)
    total, terms, m0, used = _vanishing_sum(smoothing, t, sampler, d)
    nu = -total if d & 1 else total
    details = {"m0": m0, "dim": d, "forms": [str(p) for p in used],
               "smoothing_restriction": generic_smoothing}
    mu_f = nu_slice = None
    if fbar is not None:
        if fbar.ring == ring:
            fb = fbar
        elif fbar.ring == F.ring:
            fb = fbar.map_to(ring, list(range(N)))
        else:
            raise RingMismatch("fbar must live in the ring of F or of the smoothing")
        mu_f, k = _polar_length(smoothing, t, fb)
        nu_slice = mu_f - nu
        details.update({"mu_f": mu_f, "mu_f_k": k})
    report = ComputationReport(nu, terms, sampler.failures, rng_seed, details)
    return DeterminantalInvariants(nu, mu_f, nu_slice, report)


# ---------------------------------------------------------------- Pfaffians


def pfaffian(M: PolyMatrix) -> Polynomial:
    """Pfaffian of an even skew-symmetric matrix by expansion along the first row."""
    if not M.is_skew_symmetric():
        raise ValueError("matrix is not skew-symmetric")
    if M.rows % 2:
        raise ValueError("the Pfaffian needs an even size")
    return _pf(M, tuple(range(M.rows)), {})


def _pf(M: PolyMatrix, idx: tuple[int, ...], cache: dict) -> Polynomial:
    if not idx:
        return M.ring.one()
    hit = cache.get(idx)
    if hit is not None:
        return hit
    first, rest = idx[0], idx[1:]
    acc = M.ring.zero()
    for pos, j in enumerate(rest):
        a = M[first, j]
        if a.is_zero():
            continue
        sub = _pf(M, rest[:pos] + rest[pos + 1:], cache)
        acc = acc - a * sub if pos & 1 else acc + a * sub
    cache[idx] = acc
    return acc


def pfaffians(M: PolyMatrix) -> list[Polynomial]:
    """Pfaffians of ``M`` with row and column ``i`` removed, for each ``i``."""
    if not M.is_skew_symmetric():
        raise ValueError("matrix is not skew-symmetric")
    if M.rows % 2 == 0:
        raise ValueError("submaximal Pfaffians need an odd size")
    cache: dict = {}
    full = tuple(range(M.rows))
    return [_pf(M, full[:i] + full[i + 1:], cache) for i in range(M.rows)]


def skew_matrix(size: int, entries: Sequence[Polynomial]) -> PolyMatrix:
    """Skew-symmetric matrix with the upper triangle filled row by row from ``entries``."""
    need = size * (size - 1) // 2
    if len(entries) != need:
        raise ValueError(f"a {size}x{size} skew matrix needs {need} entries")
    ring = entries[0].ring
    rows = [[ring.zero()] * size for _ in range(size)]
    it = iter(entries)
    for i in range(size):
        for j in range(i + 1, size):
            e = next(it)
            rows[i][j] = e
            rows[j][i] = -e
    return PolyMatrix.from_rows(rows)


# ---------------------------------------------------------------- hypothesis check


def check_isolated_singularity(X: VarietyPresentation) -> int:
    """Length of ``O/(I_X + (N-d)-minors)``; finite iff the singular locus is at most the origin.

    Raises :class:`InfiniteDimension` otherwise.  Only meaningful for reduced
    presentations.
    """
    c = X.ambient_dim - X.pure_dim
    if c == 0:
        return 0
    m = jacobian(list(X.ideal.generators))
    if c > min(m.rows, m.cols):
        raise ValueError("fewer generators than the codimension")
    v = vdim(Ideal(X.ring, list(X.ideal.generators) + _dedupe(minors(m, c))))
    if v == INFINITE:
        raise InfiniteDimension("the singular locus is positive-dimensional")
    return int(v)
