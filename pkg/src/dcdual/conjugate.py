"""Conjugation scheme on the line.

The coupling pairs a point x with a dual triple w = (xstar, ystar, alpha)
and returns x*xstar when x*ystar < alpha, +inf otherwise.  The resulting
conjugate of f splits into a plain Fenchel conjugate in the first dual
coordinate and an open-half-space containment test on the domain of f in
the remaining two; both parts are computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .extreal import (
    NEG_INF,
    POS_INF,
    ExtReal,
    Rational,
    RationalLike,
    as_rational,
    finite,
)
from .pwa import (
    EndPoint,
    Interval,
    Piece,
    PwaFunction,
    affine_on,
    empty_function,
    pwa,
    pwa_equal,
    restrict,
)


@dataclass(frozen=True)
class WPoint:
    """Dual triple (xstar, ystar, alpha)."""

    xstar: Fraction
    ystar: Fraction
    alpha: Fraction

    @staticmethod
    def of(xstar: RationalLike, ystar: RationalLike, alpha: RationalLike) -> "WPoint":
        return WPoint(as_rational(xstar), as_rational(ystar), as_rational(alpha))


@dataclass(frozen=True)
class SupCertificate:
    """sup of x*ystar over a domain, with exact attainment information."""

    sup_value: ExtReal
    attained: bool

    def __post_init__(self) -> None:
        if self.attained and not self.sup_value.is_finite:
            raise ValueError("an attained supremum must be finite")


def coupling_c(x: RationalLike, w: WPoint) -> ExtReal:
    """c(x, w) = x*xstar when x*ystar < alpha strictly, +inf otherwise."""
    x = as_rational(x)
    if x * w.ystar < w.alpha:
        return finite(x * w.xstar)
    return POS_INF


def sup_linear(f: PwaFunction, ystar: RationalLike) -> SupCertificate:
    """sup over dom f of x*ystar; needs a nonempty domain."""
    ystar = as_rational(ystar)
    if f.domain_is_empty():
        raise ValueError("sup_linear requires a nonempty domain")
    hull = f.domain_hull()
    if ystar == 0:
        return SupCertificate(finite(0), True)
    end = hull.upper if ystar > 0 else hull.lower
    if not end.value.is_finite:
        return SupCertificate(POS_INF, False)
    return SupCertificate(finite(end.value.value * ystar), end.closed)


def halfspace_contains_dom(
    f: PwaFunction, ystar: RationalLike, alpha: RationalLike
) -> bool:
    """dom f inside the open half-space {x : x*ystar < alpha}."""
    cert = sup_linear(f, ystar)
    alpha_e = finite(as_rational(alpha))
    return cert.sup_value < alpha_e or (cert.sup_value == alpha_e and not cert.attained)


def _hull_halfspace_ok(hull: Interval, ystar: Fraction, alpha: Fraction) -> bool:
    if ystar == 0:
        return alpha > 0
    end = hull.upper if ystar > 0 else hull.lower
    if not end.value.is_finite:
        return False
    sup = end.value.value * ystar
    return sup < alpha or (sup == alpha and not end.closed)


# ---------------------------------------------------------------------------
# Fenchel conjugate
# ---------------------------------------------------------------------------


def _elementary_conjugates(f: PwaFunction) -> list[PwaFunction]:
    """Per-piece/per-override conjugates whose pointwise max is f*."""
    out: list[PwaFunction] = []
    for p in f.pieces:
        lo, hi = p.interval.lo, p.interval.hi
        m, b = p.slope, p.intercept
        if lo.is_finite and hi.is_finite:
            out.append(
                pwa(
                    [
                        (
                            Interval(EndPoint(NEG_INF, False), EndPoint(finite(m), True)),
                            lo.value,
                            -(lo.value * m + b),
                        ),
                        (
                            Interval(EndPoint(finite(m), False), EndPoint(POS_INF, False)),
                            hi.value,
                            -(hi.value * m + b),
                        ),
                    ]
                )
            )
        elif hi.is_finite:  # lo = -inf
            out.append(
                pwa(
                    [
                        (
                            Interval(EndPoint(finite(m), True), EndPoint(POS_INF, False)),
                            hi.value,
                            -(hi.value * m + b),
                        )
                    ]
                )
            )
        elif lo.is_finite:  # hi = +inf
            out.append(
                pwa(
                    [
                        (
                            Interval(EndPoint(NEG_INF, False), EndPoint(finite(m), True)),
                            lo.value,
                            -(lo.value * m + b),
                        )
                    ]
                )
            )
        else:  # affine on the whole line: conjugate is finite only at m
            out.append(pwa([], [(m, -b)]))
    for x0, v in f.overrides:
        out.append(affine_on(Interval.real_line(), x0, -v))
    return out


def pwa_max(fs: Sequence[PwaFunction]) -> PwaFunction:
    """Exact pointwise maximum; +inf wins, so the domain is the intersection."""
    if not fs:
        raise ValueError("pwa_max needs at least one function")
    domain = Interval.real_line()
    for f in fs:
        if f.neginf:
            raise ValueError("pwa_max requires proper inputs")
        domain = domain.intersect(f.domain_hull())
        # connected-domain inputs only; hull == domain for those
    if domain.is_empty():
        return empty_function()
    cuts: set[Fraction] = set()
    for f in fs:
        for x in f.breakpoints():
            if domain.contains(x):
                cuts.add(x)
    # crossings of any two affine parts
    lines = [(p.slope, p.intercept) for f in fs for p in f.pieces]
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            s1, b1 = lines[i]
            s2, b2 = lines[j]
            if s1 != s2:
                x = (b2 - b1) / (s1 - s2)
                if domain.contains(x):
                    cuts.add(x)
    for e in (domain.lo, domain.hi):
        if e.is_finite:
            cuts.add(e.value)
    xs = sorted(cuts)

    def eval_max(x: Fraction) -> ExtReal:
        best = NEG_INF
        for f in fs:
            v = f.eval(x)
            if v is POS_INF or v > best:
                best = v
            if best is POS_INF:
                break
        return best

    def affine_at(x: Fraction) -> tuple[Fraction, Fraction]:
        best: Optional[tuple[Fraction, Fraction, Fraction]] = None
        for f in fs:
            for p in f.pieces:
                if p.interval.contains(x):
                    v = p.value_at(x)
                    if best is None or v > best[0]:
                        best = (v, p.slope, p.intercept)
        assert best is not None, "interior of the common domain must be covered"
        return best[1], best[2]

    pieces: list[tuple[Interval, Fraction, Fraction]] = []
    overrides: list[tuple[Fraction, Fraction]] = []
    if xs:
        bounds: list[Interval] = []
        first = Interval(domain.lower, EndPoint(finite(xs[0]), False)).intersect(domain)
        if not first.is_empty() and not first.is_degenerate():
            bounds.append(first)
        for a, c in zip(xs, xs[1:]):
            bounds.append(Interval.make(a, c, False, False))
        last = Interval(EndPoint(finite(xs[-1]), False), domain.upper).intersect(domain)
        if not last.is_empty() and not last.is_degenerate():
            bounds.append(last)
        for iv in bounds:
            mid = iv.interior_point()
            assert mid is not None
            s, b = affine_at(mid)
            pieces.append((iv, s, b))
        for x in xs:
            if domain.contains(x):
                v = eval_max(x)
                if v.is_finite:
                    overrides.append((x, v.value))
    else:
        mid = domain.interior_point()
        if mid is None:  # degenerate domain
            x = domain.lo.value
            v = eval_max(x)
            return pwa([], [(x, v.value)]) if v.is_finite else empty_function()
        s, b = affine_at(mid)
        pieces.append((domain, s, b))
    return pwa(pieces, overrides)


def fenchel_conjugate(f: PwaFunction) -> PwaFunction:
    """Exact f*(xstar) = sup_x {x*xstar - f(x)}; +inf-everywhere is the
    empty-domain function (no affine minorant)."""
    if not f.is_proper():
        raise ValueError("fenchel_conjugate requires a proper function")
    return pwa_max(_elementary_conjugates(f))


# ---------------------------------------------------------------------------
# Structured c-conjugate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CConjugate:
    """f^c as (f*, dom-hull certificate): value f*(xstar) when dom f sits
    in the open half-space given by (ystar, alpha), +inf otherwise."""

    fstar: PwaFunction
    dom_hull: Interval

    def eval(self, w: WPoint) -> ExtReal:
        if not _hull_halfspace_ok(self.dom_hull, w.ystar, w.alpha):
            return POS_INF
        return self.fstar.eval(w.xstar)

    def dom_contains(self, w: WPoint) -> bool:
        return self.eval(w).is_finite


def c_conjugate(f: PwaFunction) -> CConjugate:
    if not f.is_proper():
        raise ValueError("c_conjugate requires a proper function")
    return CConjugate(fenchel_conjugate(f), f.domain_hull())


def eval_c(cc: CConjugate, w: WPoint) -> ExtReal:
    return cc.eval(w)


# ---------------------------------------------------------------------------
# Biconjugate / evenly convex hull
# ---------------------------------------------------------------------------


class NoProperMinorantError(ValueError):
    """The function has no affine minorant, so the hull is identically -inf."""


def biconjugate_ccprime(f: PwaFunction) -> PwaFunction:
    """The c-then-c' biconjugate: +inf outside dom f, Fenchel biconjugate
    inside (intervals are their own evenly convex hulls)."""
    if not f.is_proper():
        raise ValueError("biconjugate requires a proper function")
    fstar = fenchel_conjugate(f)
    if fstar.domain_is_empty():
        raise NoProperMinorantError("no affine minorant exists")
    second = fenchel_conjugate(fstar)
    return restrict(second, f.domain_hull())


def eco_hull(f: PwaFunction) -> PwaFunction:
    """Largest evenly convex minorant (equals the biconjugate here)."""
    return biconjugate_ccprime(f)


def is_econvex_at(f: PwaFunction, x: RationalLike) -> bool:
    x = as_rational(x)
    try:
        hull = eco_hull(f)
    except NoProperMinorantError:
        return False
    return f.eval(x) == hull.eval(x)


def is_econvex(f: PwaFunction) -> bool:
    try:
        hull = eco_hull(f)
    except NoProperMinorantError:
        return False
    return pwa_equal(f, hull)
