"""Primal and dual optimal values for DC problems on the line.

The primal is inf over the feasible set of f - g, with f - g read as
+inf wherever x is outside dom f.  Four duals are computed exactly:

* the plain Lagrange dual (sup over multipliers of an unconstrained inf),
* its conjugate form (inner inf over the conjugate's domain), which can
  break weak duality when g is not evenly convex,
* a Fenchel-Lagrange dual and its conjugate form, restricted to a single
  constraint in the exact engine.

Sups over multipliers are reduced pattern by pattern: fixing which
multiplier entries are strictly positive fixes every domain and every
-inf trigger, and the inner value becomes a concave piecewise-affine
function of the multiplier maximized by an exact LP.  Attainment at a
pattern boundary is resolved by maximizing the minimum multiplier slack
over the LP's optimal face; a boundary-only optimum counts as a limit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .conjugate import (
    CConjugate,
    WPoint,
    c_conjugate,
    eco_hull,
    fenchel_conjugate,
)
from .extreal import (
    NEG_INF,
    POS_INF,
    ExtReal,
    RationalLike,
    as_rational,
    emax,
    finite,
    negate,
)
from .pwa import (
    DualValue,
    Interval,
    Multiplier,
    PointCand,
    PwaFunction,
    Region,
    combine_constraints,
    convexity_violation,
    feasible_set,
    infimum,
    negate_fn,
    pwa,
    refine,
    restrict,
    sub_dc,
    supremum_over_domain,
)
from .simplex import LpStatus, make_lp, solve_max


class ProblemValidationError(ValueError):
    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class FLNotExactError(ValueError):
    """Raised for constraint counts other than one; the grid oracle covers
    those instances."""


@dataclass(frozen=True)
class DCProblem:
    f: PwaFunction
    g: PwaFunction
    constraints: tuple[PwaFunction, ...]

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)


def make_problem(
    f: PwaFunction,
    g: PwaFunction,
    constraints: Sequence[PwaFunction],
    allow_improper: bool = False,
) -> DCProblem:
    """Validate properness and convexity; reject an improper f - g unless
    the caller opted into -inf reporting."""
    for name, fn in (("f", f), ("g", g)) + tuple(
        (f"h{t}", h) for t, h in enumerate(constraints)
    ):
        if not fn.is_proper():
            raise ProblemValidationError(f"{name} must be proper")
        viol = convexity_violation(fn)
        if viol is not None:
            raise ProblemValidationError(
                f"{name} is not convex: midpoint violation between "
                f"{viol.x0} and {viol.x1}",
                certificate=viol,
            )
    if not allow_improper and not sub_dc(f, g).is_proper():
        raise ProblemValidationError(
            "f - g takes -inf (dom f is not inside dom g); "
            "pass allow_improper=True to analyze it anyway"
        )
    return DCProblem(f, g, tuple(constraints))


# ---------------------------------------------------------------------------
# Cached per-problem derivations
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def dc_difference(P: DCProblem) -> PwaFunction:
    return sub_dc(P.f, P.g)


@lru_cache(maxsize=None)
def feasible_interval(P: DCProblem) -> Optional[Interval]:
    return feasible_set(P.constraints)


@lru_cache(maxsize=None)
def eco_g(P: DCProblem) -> PwaFunction:
    return eco_hull(P.g)


@lru_cache(maxsize=None)
def g_star(P: DCProblem) -> PwaFunction:
    return fenchel_conjugate(P.g)


@lru_cache(maxsize=None)
def g_star_star(P: DCProblem) -> PwaFunction:
    return fenchel_conjugate(g_star(P))


def _pointwise_difference(first: PwaFunction, second: PwaFunction) -> PwaFunction:
    """first - second on dom first; second must be finite there."""
    regions, points, missing = refine([first, second], domain="first")
    if missing:
        raise AssertionError("subtrahend must cover the first domain")
    return pwa(
        [
            (r.interval, r.slopes[0] - r.slopes[1], r.intercepts[0] - r.intercepts[1])
            for r in regions
        ],
        [(p.x, p.values[0] - p.values[1]) for p in points],
    )


def _pointwise_sum(first: PwaFunction, second: PwaFunction) -> PwaFunction:
    regions, points, _ = refine([first, second])
    return pwa(
        [
            (r.interval, r.slopes[0] + r.slopes[1], r.intercepts[0] + r.intercepts[1])
            for r in regions
        ],
        [(p.x, p.values[0] + p.values[1]) for p in points],
    )


@lru_cache(maxsize=None)
def f_minus_ecog(P: DCProblem) -> PwaFunction:
    return _pointwise_difference(P.f, eco_g(P))


@lru_cache(maxsize=None)
def f_minus_gss(P: DCProblem) -> PwaFunction:
    """f - g** on dom f (the conjugate-form inner values tilt this)."""
    return _pointwise_difference(P.f, g_star_star(P))


@lru_cache(maxsize=None)
def fg_conjugate(P: DCProblem) -> CConjugate:
    """(f-g)^c; requires a proper difference."""
    return c_conjugate(dc_difference(P))


# ---------------------------------------------------------------------------
# Primal values and per-multiplier inner values
# ---------------------------------------------------------------------------


def _inf_over_feasible(P: DCProblem, objective: PwaFunction) -> DualValue:
    A = feasible_interval(P)
    if A is None:
        return DualValue(POS_INF, False)
    clipped = restrict(objective, A)
    if clipped.neginf:
        return DualValue(NEG_INF, False)
    return infimum(clipped)


def primal_value(P: DCProblem) -> DualValue:
    """v(P): exact inf over the feasible set of f - g."""
    return _inf_over_feasible(P, dc_difference(P))


def primal_value_eco(P: DCProblem) -> DualValue:
    """The primal with g replaced by its evenly convex hull."""
    return _inf_over_feasible(P, f_minus_ecog(P))


def lagrange_inner(P: DCProblem, lam: Multiplier) -> DualValue:
    """inf over the line of f - g + lambda.h (zero entries drop out)."""
    if len(lam) != P.num_constraints:
        raise ValueError("multiplier length mismatch")
    fg = dc_difference(P)
    if fg.neginf:
        return DualValue(NEG_INF, False)
    return infimum(_pointwise_sum(fg, combine_constraints(P.constraints, lam)))


def cconj_inner(P: DCProblem, lam: Multiplier) -> DualValue:
    """inf over dom g^c of g^c - (f + lambda.h)^c, by the structural rule:
    -inf when dom(f + lambda.h) escapes dom g, or when some point of
    dom g* falls outside dom (f + lambda.h)*; otherwise an exact inf of
    g* - (f + lambda.h)* over dom g*."""
    if len(lam) != P.num_constraints:
        raise ValueError("multiplier length mismatch")
    flh = _pointwise_sum(P.f, combine_constraints(P.constraints, lam))
    if flh.domain_is_empty():
        return DualValue(POS_INF, False)
    if not P.g.domain_hull().contains_interval(flh.domain_hull()):
        return DualValue(NEG_INF, False)
    gs = g_star(P)
    flh_star = fenchel_conjugate(flh)
    if not flh_star.domain_hull().contains_interval(gs.domain_hull()):
        return DualValue(NEG_INF, False)
    inner = infimum(_pointwise_difference(gs, flh_star))
    if inner.attained:
        witness = WPoint(inner.witness_point, Fraction(0), Fraction(1))
        return DualValue(inner.value, True, witness_w=witness)
    return DualValue(inner.value, False)


# ---------------------------------------------------------------------------
# Pattern LP engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffForm:
    """const + coeffs . vars over the pattern's LP variables."""

    coeffs: tuple[Fraction, ...]
    const: Fraction

    def at(self, endpoint: Fraction, tau: "AffForm") -> "AffForm":
        """self*endpoint + tau (self read as a slope form)."""
        return AffForm(
            tuple(c * endpoint + t for c, t in zip(self.coeffs, tau.coeffs)),
            self.const * endpoint + tau.const,
        )

    def neg(self) -> "AffForm":
        return AffForm(tuple(-c for c in self.coeffs), -self.const)

    def plus(self, other: "AffForm") -> "AffForm":
        return AffForm(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
            self.const + other.const,
        )


@dataclass
class PatternModel:
    """Concave maximization of min(value_forms) over a polyhedron."""

    nvars: int  # multiplier variables first, then any extra free variables
    nonneg: tuple[bool, ...]
    strict: tuple[int, ...]  # variable indices required strictly positive
    value_forms: list[AffForm]
    le_zero: list[AffForm]  # constraints: form <= 0
    eq_zero: list[AffForm]  # constraints: form == 0
    dead: bool = False  # a lambda-independent -inf trigger fired


@dataclass(frozen=True)
class PatternOutcome:
    value: ExtReal
    attainable: bool
    witness: Optional[tuple[Fraction, ...]]


def _base_constraints(model: PatternModel) -> list:
    cons = []
    for fm in model.le_zero:
        cons.append((list(fm.coeffs) + [Fraction(0)], "<=", -fm.const))
    for fm in model.eq_zero:
        cons.append((list(fm.coeffs) + [Fraction(0)], "=", -fm.const))
    return cons


def _open_region_nonempty(model: PatternModel) -> bool:
    n = model.nvars
    obj = [Fraction(0)] * n + [Fraction(1)]
    cons = _base_constraints(model)
    for i in model.strict:
        row = [Fraction(0)] * (n + 1)
        row[i] = Fraction(-1)
        row[n] = Fraction(1)
        cons.append((row, "<=", Fraction(0)))  # s <= var_i
    cons.append(([Fraction(0)] * n + [Fraction(1)], "<=", Fraction(1)))
    out = solve_max(make_lp(obj, cons, list(model.nonneg) + [False]))
    return out.status is LpStatus.OPTIMAL and out.value > finite(0)


def _attained_at_level(
    model: PatternModel, level: Fraction
) -> tuple[bool, Optional[tuple[Fraction, ...]]]:
    """Is min(value_forms) >= level achievable with strict vars > 0?"""
    n = model.nvars
    obj = [Fraction(0)] * n + [Fraction(1)]
    cons = _base_constraints(model)
    for fm in model.value_forms:
        cons.append((list(fm.coeffs) + [Fraction(0)], ">=", level - fm.const))
    for i in model.strict:
        row = [Fraction(0)] * (n + 1)
        row[i] = Fraction(-1)
        row[n] = Fraction(1)
        cons.append((row, "<=", Fraction(0)))
    cons.append(([Fraction(0)] * n + [Fraction(1)], "<=", Fraction(1)))
    out = solve_max(make_lp(obj, cons, list(model.nonneg) + [False]))
    if out.status is not LpStatus.OPTIMAL:
        return False, None
    if out.value > finite(0):
        return True, out.witness[:n]
    return False, None


def _solve_pattern(model: PatternModel) -> Optional[PatternOutcome]:
    """None when the strictly-positive region is empty (or a dead trigger)."""
    if model.dead:
        return None
    if not _open_region_nonempty(model):
        return None
    n = model.nvars
    obj = [Fraction(0)] * n + [Fraction(1)]
    cons = _base_constraints(model)
    for fm in model.value_forms:
        row = [-c for c in fm.coeffs] + [Fraction(1)]
        cons.append((row, "<=", fm.const))  # z <= form
    out = solve_max(make_lp(obj, cons, list(model.nonneg) + [False]))
    assert out.status is not LpStatus.INFEASIBLE, "open region was nonempty"
    if out.status is LpStatus.UNBOUNDED:
        return PatternOutcome(POS_INF, False, None)
    zstar = out.value.finite_value()
    attained, witness = _attained_at_level(model, zstar)
    return PatternOutcome(finite(zstar), attained, witness)


def _feasible_at_level(model: PatternModel, level: Fraction) -> bool:
    if model.dead:
        return False
    return _attained_at_level(model, level)[0]


# ---------------------------------------------------------------------------
# Inner-infimum model assembly
# ---------------------------------------------------------------------------


def _slope_form(
    r: Region, base: Sequence[tuple[int, int]], h_idx: Sequence[int], n: int
) -> AffForm:
    coeffs = [Fraction(0)] * n
    const = Fraction(0)
    for k, sign in base:
        const += sign * r.slopes[k]
    for v, k in enumerate(h_idx):
        coeffs[v] += r.slopes[k]
    return AffForm(tuple(coeffs), const)


def _intercept_form(
    r: Region, base: Sequence[tuple[int, int]], h_idx: Sequence[int], n: int
) -> AffForm:
    coeffs = [Fraction(0)] * n
    const = Fraction(0)
    for k, sign in base:
        const += sign * r.intercepts[k]
    for v, k in enumerate(h_idx):
        coeffs[v] += r.intercepts[k]
    return AffForm(tuple(coeffs), const)


def _point_form(
    p: PointCand, base: Sequence[tuple[int, int]], h_idx: Sequence[int], n: int
) -> AffForm:
    coeffs = [Fraction(0)] * n
    const = Fraction(0)
    for k, sign in base:
        const += sign * p.values[k]
    for v, k in enumerate(h_idx):
        coeffs[v] += p.values[k]
    return AffForm(tuple(coeffs), const)


def _inf_side_forms(
    regions: Sequence[Region],
    points: Sequence[PointCand],
    base: Sequence[tuple[int, int]],
    h_idx: Sequence[int],
    n: int,
) -> tuple[list[AffForm], list[AffForm], list[AffForm]]:
    """Forms so min(value_forms) = inf of the assembled function, valid on
    the region cut out by the slope-sign conditions (outside it the inf
    is -inf)."""
    value_forms: list[AffForm] = []
    le_zero: list[AffForm] = []
    eq_zero: list[AffForm] = []
    for r in regions:
        sigma = _slope_form(r, base, h_idx, n)
        tau = _intercept_form(r, base, h_idx, n)
        lo, hi = r.interval.lo, r.interval.hi
        if lo.is_finite and hi.is_finite:
            value_forms.append(sigma.at(lo.value, tau))
            value_forms.append(sigma.at(hi.value, tau))
        elif hi.is_finite:  # unbounded below: finite inf needs sigma <= 0
            le_zero.append(sigma)
            value_forms.append(sigma.at(hi.value, tau))
        elif lo.is_finite:  # unbounded above: finite inf needs sigma >= 0
            le_zero.append(sigma.neg())
            value_forms.append(sigma.at(lo.value, tau))
        else:
            eq_zero.append(sigma)
            value_forms.append(tau)
    for p in points:
        value_forms.append(_point_form(p, base, h_idx, n))
    return value_forms, le_zero, eq_zero


def _sup_side_forms(
    regions: Sequence[Region],
    points: Sequence[PointCand],
    base: Sequence[tuple[int, int]],
    h_idx: Sequence[int],
    n: int,
) -> tuple[list[AffForm], list[AffForm], list[AffForm]]:
    """Forms so min(value_forms) = -(sup of the assembled function), valid
    where the sign conditions keep the sup finite (+inf outside)."""
    value_forms: list[AffForm] = []
    le_zero: list[AffForm] = []
    eq_zero: list[AffForm] = []
    for r in regions:
        sigma = _slope_form(r, base, h_idx, n)
        tau = _intercept_form(r, base, h_idx, n)
        lo, hi = r.interval.lo, r.interval.hi
        if lo.is_finite and hi.is_finite:
            value_forms.append(sigma.at(lo.value, tau).neg())
            value_forms.append(sigma.at(hi.value, tau).neg())
        elif hi.is_finite:  # unbounded below: finite sup needs sigma >= 0
            le_zero.append(sigma.neg())
            value_forms.append(sigma.at(hi.value, tau).neg())
        elif lo.is_finite:  # unbounded above: finite sup needs sigma <= 0
            le_zero.append(sigma)
            value_forms.append(sigma.at(lo.value, tau).neg())
        else:
            eq_zero.append(sigma)
            value_forms.append(tau.neg())
    for p in points:
        value_forms.append(_point_form(p, base, h_idx, n).neg())
    return value_forms, le_zero, eq_zero


def _support_patterns(m: int, cap: int = 10):
    if m > cap:
        raise ProblemValidationError(f"pattern enumeration is capped at {cap} constraints")
    for size in range(1, m + 1):
        yield from itertools.combinations(range(m), size)


def _multiplier_from(
    P: DCProblem, support: Sequence[int], values: Sequence[Fraction]
) -> Multiplier:
    entries = [Fraction(0)] * P.num_constraints
    for t, v in zip(support, values):
        entries[t] = v
    return Multiplier(tuple(entries))


@dataclass(frozen=True)
class _Candidate:
    value: ExtReal
    attainable: bool
    multiplier: Optional[Multiplier]
    wpoint: Optional[WPoint] = None


def _best_candidate(cands: Sequence[_Candidate]) -> DualValue:
    best = emax(*(c.value for c in cands)) if cands else NEG_INF
    for c in cands:
        if c.value == best and c.attainable and best.is_finite:
            return DualValue(
                best, True, witness_multiplier=c.multiplier, witness_w=c.wpoint
            )
    return DualValue(best, False)


# ---------------------------------------------------------------------------
# Lagrange dual
# ---------------------------------------------------------------------------


def _lagrange_model(P: DCProblem, support: Sequence[int]) -> Optional[PatternModel]:
    fg = dc_difference(P)
    hs = [P.constraints[t] for t in support]
    regions, points, _ = refine([fg] + hs)
    if not regions and not points:
        return None  # empty effective domain: the inner value is +inf
    n = len(support)
    vf, le0, eq0 = _inf_side_forms(
        regions, points, base=[(0, 1)], h_idx=range(1, n + 1), n=n
    )
    return PatternModel(
        nvars=n,
        nonneg=(True,) * n,
        strict=tuple(range(n)),
        value_forms=vf,
        le_zero=le0,
        eq_zero=eq0,
    )


def lagrange_dual_value(P: DCProblem) -> DualValue:
    """sup over nonnegative multipliers of the Lagrange inner value."""
    zero = Multiplier.zeros(P.num_constraints)
    v0 = lagrange_inner(P, zero)
    cands = [_Candidate(v0.value, v0.value.is_finite, zero)]
    for support in _support_patterns(P.num_constraints):
        model = _lagrange_model(P, support)
        if model is None:
            cands.append(_Candidate(POS_INF, False, None))
            continue
        out = _solve_pattern(model)
        if out is None:
            continue
        mult = (
            _multiplier_from(P, support, out.witness) if out.witness is not None else None
        )
        cands.append(_Candidate(out.value, out.attainable, mult))
    return _best_candidate(cands)


# ---------------------------------------------------------------------------
# Conjugate-form Lagrange dual
# ---------------------------------------------------------------------------


def _cconj_model(P: DCProblem, support: Sequence[int]) -> Optional[PatternModel]:
    """On a pattern the conjugate-form inner value is inf over E of
    f - g** + lambda.h (E the common domain), guarded by two containment
    conditions: E inside dom g (constraint-free for validated problems)
    and dom g* inside dom (f + lambda.h)*, which pins affine bounds on
    the extreme slopes of f + lambda.h when E is unbounded."""
    fmg = f_minus_gss(P)
    hs = [P.constraints[t] for t in support]
    regions, points, _ = refine([P.f, fmg] + hs)
    if not regions and not points:
        return None  # +inf on the whole pattern
    n = len(support)
    vf, le0, eq0 = _inf_side_forms(
        regions, points, base=[(1, 1)], h_idx=range(2, n + 2), n=n
    )
    model = PatternModel(
        nvars=n,
        nonneg=(True,) * n,
        strict=tuple(range(n)),
        value_forms=vf,
        le_zero=le0,
        eq_zero=eq0,
    )
    hull_lo = min(
        [r.interval.lo for r in regions] + [finite(p.x) for p in points],
        key=ExtReal._key,
    )
    hull_hi = max(
        [r.interval.hi for r in regions] + [finite(p.x) for p in points],
        key=ExtReal._key,
    )
    gdom = P.g.domain_hull()
    if hull_lo < gdom.lo or hull_hi > gdom.hi:
        model.dead = True  # escape from dom g (impossible once validated)
        return model
    gs_hull = g_star(P).domain_hull()
    if not hull_lo.is_finite:
        if not gs_hull.lo.is_finite:
            model.dead = True
            return model
        first = min(regions, key=lambda r: r.interval.lo._key())
        sigma = _slope_form(first, [(0, 1)], range(2, n + 2), n)
        # leftmost slope of f + lambda.h must be <= lo(dom g*)
        model.le_zero.append(AffForm(sigma.coeffs, sigma.const - gs_hull.lo.value))
    elif not gs_hull.lo.is_finite:
        model.dead = True
        return model
    if not hull_hi.is_finite:
        if not gs_hull.hi.is_finite:
            model.dead = True
            return model
        last = max(regions, key=lambda r: r.interval.hi._key())
        sigma = _slope_form(last, [(0, 1)], range(2, n + 2), n)
        # rightmost slope of f + lambda.h must be >= hi(dom g*)
        model.le_zero.append(
            AffForm(tuple(-c for c in sigma.coeffs), gs_hull.hi.value - sigma.const)
        )
    elif not gs_hull.hi.is_finite:
        model.dead = True
        return model
    return model


def cconj_dual_value(P: DCProblem) -> DualValue:
    """sup over multipliers of the conjugate-form inner value."""
    zero = Multiplier.zeros(P.num_constraints)
    v0 = cconj_inner(P, zero)
    cands = [_Candidate(v0.value, v0.value.is_finite, zero, wpoint=v0.witness_w)]
    for support in _support_patterns(P.num_constraints):
        model = _cconj_model(P, support)
        if model is None:
            cands.append(_Candidate(POS_INF, False, None))
            continue
        out = _solve_pattern(model)
        if out is None:
            continue
        mult = (
            _multiplier_from(P, support, out.witness) if out.witness is not None else None
        )
        cands.append(_Candidate(out.value, out.attainable, mult))
    return _best_candidate(cands)


def cconj_level_feasible(P: DCProblem, level: Fraction) -> bool:
    """Is there a multiplier whose conjugate-form inner value is >= level?"""
    v0 = cconj_inner(P, Multiplier.zeros(P.num_constraints))
    if v0.value >= finite(level):
        return True
    for support in _support_patterns(P.num_constraints):
        model = _cconj_model(P, support)
        if model is None:
            return True  # +inf inner value on the whole pattern
        if _feasible_at_level(model, level):
            return True
    return False


# ---------------------------------------------------------------------------
# Threshold of the plain-Lagrange ray set
# ---------------------------------------------------------------------------


def _omega_model(P: DCProblem, support: Sequence[int]) -> Optional[PatternModel]:
    """Maximize -(sup over dom g of g - f - lambda.h) on a pattern; since
    dom f sits inside dom g, the sup runs over the common effective domain
    (points of dom g outside it contribute -inf)."""
    fg = dc_difference(P)
    hs = [P.constraints[t] for t in support]
    regions, points, _ = refine([fg] + hs)
    if not regions and not points:
        return None  # the sup is -inf on the whole pattern
    n = len(support)
    # g - f - lambda.h has slope -(f-g) - sum lambda*h per region
    neg_regions = [
        Region(
            r.interval,
            tuple(-s for s in r.slopes),
            tuple(-b for b in r.intercepts),
        )
        for r in regions
    ]
    neg_points = [PointCand(p.x, tuple(-v for v in p.values)) for p in points]
    vf, le0, eq0 = _sup_side_forms(
        neg_regions, neg_points, base=[(0, 1)], h_idx=range(1, n + 1), n=n
    )
    return PatternModel(
        nvars=n,
        nonneg=(True,) * n,
        strict=tuple(range(n)),
        value_forms=vf,
        le_zero=le0,
        eq_zero=eq0,
    )


def omega_threshold(P: DCProblem) -> DualValue:
    """inf over multipliers of sup over dom g of (g - f - lambda.h); the
    attainment flag says some multiplier reaches the inf."""
    zero = Multiplier.zeros(P.num_constraints)
    fg = dc_difference(P)
    theta0 = supremum_over_domain(negate_fn(fg)).value if fg.is_proper() else POS_INF
    cands = [_Candidate(negate(theta0), theta0.is_finite, zero)]
    for support in _support_patterns(P.num_constraints):
        model = _omega_model(P, support)
        if model is None:
            cands.append(_Candidate(POS_INF, False, None))
            continue
        out = _solve_pattern(model)
        if out is None:
            continue
        mult = (
            _multiplier_from(P, support, out.witness) if out.witness is not None else None
        )
        cands.append(_Candidate(out.value, out.attainable, mult))
    best = _best_candidate(cands)
    # candidates carry -(theta); the threshold is the negation
    return DualValue(
        negate(best.value), best.attained, witness_multiplier=best.witness_multiplier
    )


# ---------------------------------------------------------------------------
# Fenchel-Lagrange duals (single constraint in the exact engine)
# ---------------------------------------------------------------------------


def _require_single_constraint(P: DCProblem) -> PwaFunction:
    if P.num_constraints != 1:
        raise FLNotExactError(
            "the exact Fenchel-Lagrange engine handles exactly one "
            "constraint; use the oracle for other index sets"
        )
    return P.constraints[0]


def _conj_value_forms(
    q: PwaFunction,
    u_sign: Fraction,
    u_var: int,
    lam_var: Optional[int],
    n: int,
) -> tuple[list[AffForm], list[AffForm]]:
    """Forms V with (mu q)*(u) = max V on the feasibility region, where
    u = u_sign * var[u_var] and mu = var[lam_var] (or 1 when None).

    Per endpoint e of a piece with slope m, intercept c:
        V = e*u - mu*(e*m + c),   escape conditions  u <=/>= mu*m.
    Returns (value_forms, le_zero)."""
    vf: list[AffForm] = []
    le0: list[AffForm] = []

    def u_form(scale: Fraction) -> AffForm:
        coeffs = [Fraction(0)] * n
        coeffs[u_var] = scale * u_sign
        return AffForm(tuple(coeffs), Fraction(0))

    def mu_form(amount: Fraction) -> AffForm:
        coeffs = [Fraction(0)] * n
        if lam_var is None:
            return AffForm(tuple(coeffs), amount)
        coeffs[lam_var] = amount
        return AffForm(tuple(coeffs), Fraction(0))

    for p in q.pieces:
        m, c = p.slope, p.intercept
        lo, hi = p.interval.lo, p.interval.hi
        for end in (lo, hi):
            if end.is_finite:
                vf.append(u_form(end.value).plus(mu_form(-(end.value * m + c))))
        if not lo.is_finite and not hi.is_finite:
            vf.append(mu_form(-c))
        if not hi.is_finite:  # finite only when u <= mu*m
            le0.append(u_form(Fraction(1)).plus(mu_form(-m)))
        if not lo.is_finite:  # finite only when u >= mu*m
            le0.append(u_form(Fraction(1)).plus(mu_form(-m)).neg())
    for x0, v in q.overrides:
        vf.append(u_form(x0).plus(mu_form(-v)))
    return vf, le0


def fl_dual_value(P: DCProblem) -> DualValue:
    """sup over multipliers and dual triples of
    -(f-g)^c(-xs,-ys,a) - (lambda.h)^c(xs,ys,a).  The half-space slots are
    always satisfiable (ys=0, a=1), so the value reduces to an exact LP
    over (lambda, xs) per support pattern."""
    h = _require_single_constraint(P)
    fg = dc_difference(P)
    fgstar = fenchel_conjugate(fg)
    v0 = negate(fgstar.eval(0))
    cands = [
        _Candidate(v0, v0.is_finite, Multiplier.zeros(1), wpoint=WPoint.of(0, 0, 1))
    ]
    n = 2  # vars: (lambda, xstar)
    a_vf, a_le = _conj_value_forms(fg, Fraction(-1), 1, None, n)
    b_vf, b_le = _conj_value_forms(h, Fraction(1), 1, 0, n)
    value_forms = [av.neg().plus(bv.neg()) for av in a_vf for bv in b_vf]
    model = PatternModel(
        nvars=n,
        nonneg=(True, False),
        strict=(0,),
        value_forms=value_forms,
        le_zero=a_le + b_le,
        eq_zero=[],
    )
    out = _solve_pattern(model)
    if out is not None:
        mult = Multiplier((out.witness[0],)) if out.witness is not None else None
        wp = (
            WPoint(out.witness[1], Fraction(0), Fraction(1))
            if out.witness is not None
            else None
        )
        cands.append(_Candidate(out.value, out.attainable, mult, wpoint=wp))
    return _best_candidate(cands)


def flbar_inner(P: DCProblem, xstar: RationalLike) -> ExtReal:
    """inf over dom g^c of g^c(u,v,c) - f^c(u - xstar, -ys, a) for any
    admissible (ys, a), computed as inf over dom f of f - g** + xstar*x."""
    xstar = as_rational(xstar)
    base = f_minus_gss(P)
    tilted = pwa(
        [(p.interval, p.slope + xstar, p.intercept) for p in base.pieces],
        [(x, v + xstar * x) for x, v in base.overrides],
    )
    return infimum(tilted).value


def _flbar_model(P: DCProblem) -> Optional[PatternModel]:
    """Active-multiplier pattern for the conjugate-form FL dual.

    Value forms encode  inner(xs) - (lambda h)*(xs)  with
    inner(xs) = min over f's elementary pieces of
    -g**(e) + e*xs + (e*m + b), guarded by shift conditions keeping
    dom g* inside xs + dom f*.  None when a -inf trigger is unavoidable."""
    h = _require_single_constraint(P)
    gss = g_star_star(P)
    gstar = g_star(P)
    gs_hull = gstar.domain_hull()
    n = 2  # vars: (lambda, xstar)
    a_vf: list[AffForm] = []
    a_le: list[AffForm] = []
    a_eq: list[AffForm] = []
    for p in P.f.pieces:
        m, b = p.slope, p.intercept
        lo, hi = p.interval.lo, p.interval.hi
        for end in (lo, hi):
            if end.is_finite:
                kappa = gss.eval(end.value)
                if not kappa.is_finite:
                    return None
                a_vf.append(
                    AffForm(
                        (Fraction(0), end.value),
                        end.value * m + b - kappa.finite_value(),
                    )
                )
        if not hi.is_finite:  # need xstar >= hi(dom g*) - m
            if not gs_hull.hi.is_finite:
                return None
            a_le.append(AffForm((Fraction(0), Fraction(-1)), gs_hull.hi.value - m))
        if not lo.is_finite:  # need xstar <= lo(dom g*) - m
            if not gs_hull.lo.is_finite:
                return None
            a_le.append(AffForm((Fraction(0), Fraction(1)), m - gs_hull.lo.value))
        if not lo.is_finite and not hi.is_finite:
            # f affine on the line: dom g* must be the point xstar + m
            if gs_hull.lo != gs_hull.hi:
                return None
            a_eq.append(AffForm((Fraction(0), Fraction(1)), m - gs_hull.lo.value))
            gsv = gstar.eval(gs_hull.lo.value)
            a_vf.append(AffForm((Fraction(0), Fraction(0)), gsv.finite_value() + b))
    for x0, v in P.f.overrides:
        kappa = gss.eval(x0)
        if not kappa.is_finite:
            return None
        a_vf.append(AffForm((Fraction(0), x0), v - kappa.finite_value()))
    b_vf, b_le = _conj_value_forms(h, Fraction(1), 1, 0, n)
    value_forms = [av.plus(bv.neg()) for av in a_vf for bv in b_vf]
    return PatternModel(
        nvars=n,
        nonneg=(True, False),
        strict=(0,),
        value_forms=value_forms,
        le_zero=a_le + b_le,
        eq_zero=a_eq,
    )


def fl_dual_value_bar(P: DCProblem) -> DualValue:
    """The conjugate-form Fenchel-Lagrange dual (single constraint)."""
    _require_single_constraint(P)
    v0 = flbar_inner(P, 0)
    cands = [
        _Candidate(v0, v0.is_finite, Multiplier.zeros(1), wpoint=WPoint.of(0, 0, 1))
    ]
    model = _flbar_model(P)
    if model is not None:
        out = _solve_pattern(model)
        if out is not None:
            mult = Multiplier((out.witness[0],)) if out.witness is not None else None
            wp = (
                WPoint(out.witness[1], Fraction(0), Fraction(1))
                if out.witness is not None
                else None
            )
            cands.append(_Candidate(out.value, out.attainable, mult, wpoint=wp))
    return _best_candidate(cands)


def flbar_level_feasible(P: DCProblem, level: Fraction) -> bool:
    """Is there (lambda, xstar) putting the conjugate-form FL value >= level?"""
    if flbar_inner(P, 0) >= finite(level):
        return True
    model = _flbar_model(P)
    if model is None:
        return False
    return _feasible_at_level(model, level)
