"""Proper extended-real piecewise-affine functions on the real line.

A function is a finite list of affine pieces over pairwise-disjoint
intervals (open or closed endpoints), plus isolated point-value
overrides.  Overrides are what let a convex function jump above its
one-sided limit at a domain boundary point, which is exactly the
behaviour that separates evenly convex from lower-semicontinuous here.

Values are never -inf by construction; the one operation that can
produce -inf (the DC difference under the +inf-outside-dom-f rule)
records the offending region separately so properness stays checkable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence

from .extreal import (
    NEG_INF,
    POS_INF,
    ExtReal,
    Rational,
    RationalLike,
    as_rational,
    finite,
    format_rational,
)
from .extreal import negate as ext_negate


class EmptyFeasibleSetError(ValueError):
    """Raised when the constraint system has no feasible point."""


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EndPoint:
    value: ExtReal
    closed: bool

    def __post_init__(self) -> None:
        if not self.value.is_finite and self.closed:
            raise ValueError("infinite endpoints must be open")


def endpoint(value: RationalLike | ExtReal, closed: bool) -> EndPoint:
    if not isinstance(value, ExtReal):
        value = finite(as_rational(value))
    return EndPoint(value, closed)


@dataclass(frozen=True)
class Interval:
    """An interval of the line with open/closed finite endpoints."""

    lower: EndPoint
    upper: EndPoint

    @staticmethod
    def make(
        lo: RationalLike | ExtReal,
        hi: RationalLike | ExtReal,
        lo_closed: bool = True,
        hi_closed: bool = True,
    ) -> "Interval":
        lo_e = lo if isinstance(lo, ExtReal) else finite(as_rational(lo))
        hi_e = hi if isinstance(hi, ExtReal) else finite(as_rational(hi))
        return Interval(
            EndPoint(lo_e, lo_closed and lo_e.is_finite),
            EndPoint(hi_e, hi_closed and hi_e.is_finite),
        )

    @staticmethod
    def real_line() -> "Interval":
        return Interval(EndPoint(NEG_INF, False), EndPoint(POS_INF, False))

    @staticmethod
    def point(x: RationalLike) -> "Interval":
        return Interval.make(x, x, True, True)

    @property
    def lo(self) -> ExtReal:
        return self.lower.value

    @property
    def hi(self) -> ExtReal:
        return self.upper.value

    @property
    def lo_closed(self) -> bool:
        return self.lower.closed

    @property
    def hi_closed(self) -> bool:
        return self.upper.closed

    def is_empty(self) -> bool:
        if self.lo > self.hi:
            return True
        if self.lo == self.hi:
            if not self.lo.is_finite:
                return True
            return not (self.lo_closed and self.hi_closed)
        return False

    def is_degenerate(self) -> bool:
        return not self.is_empty() and self.lo == self.hi

    def contains(self, x: Rational) -> bool:
        xe = finite(x)
        if xe < self.lo or xe > self.hi:
            return False
        if xe == self.lo and not self.lo_closed:
            return False
        if xe == self.hi and not self.hi_closed:
            return False
        return True

    def contains_interval(self, other: "Interval") -> bool:
        if other.is_empty():
            return True
        if self.is_empty():
            return False
        if other.lo < self.lo or (other.lo == self.lo and other.lo_closed and not self.lo_closed):
            return False
        if other.hi > self.hi or (other.hi == self.hi and other.hi_closed and not self.hi_closed):
            return False
        return True

    def intersect(self, other: "Interval") -> "Interval":
        if self.lo > other.lo:
            lo = self.lower
        elif other.lo > self.lo:
            lo = other.lower
        else:
            lo = EndPoint(self.lo, self.lo_closed and other.lo_closed)
        if self.hi < other.hi:
            hi = self.upper
        elif other.hi < self.hi:
            hi = other.upper
        else:
            hi = EndPoint(self.hi, self.hi_closed and other.hi_closed)
        return Interval(lo, hi)

    def interior_point(self, avoid: Iterable[Rational] = ()) -> Optional[Rational]:
        """Some rational strictly between the endpoints, avoiding a finite set."""
        if self.is_empty() or self.is_degenerate():
            return None
        avoid_set = set(avoid)
        lo, hi = self.lo, self.hi
        if lo.is_finite and hi.is_finite:
            span = hi.value - lo.value
            for k in itertools.count(2):
                x = lo.value + span / k
                if x not in avoid_set:
                    return x
        elif lo.is_finite:
            for k in itertools.count(1):
                x = lo.value + k
                if x not in avoid_set:
                    return x
        elif hi.is_finite:
            for k in itertools.count(1):
                x = hi.value - k
                if x not in avoid_set:
                    return x
        else:
            for k in itertools.count(0):
                if Fraction(k) not in avoid_set:
                    return Fraction(k)
        raise AssertionError("unreachable")

    def __str__(self) -> str:
        lb = "[" if self.lo_closed else "("
        rb = "]" if self.hi_closed else ")"
        return f"{lb}{self.lo}, {self.hi}{rb}"


# ---------------------------------------------------------------------------
# Piecewise-affine functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    interval: Interval
    slope: Fraction
    intercept: Fraction

    def value_at(self, x: Rational) -> Fraction:
        return self.slope * x + self.intercept


@dataclass(frozen=True)
class PwaFunction:
    """Pieces + overrides; +inf off the domain; -inf regions flagged."""

    pieces: tuple[Piece, ...]
    overrides: tuple[tuple[Fraction, Fraction], ...] = ()
    neginf: tuple[Interval, ...] = ()

    def eval(self, x: RationalLike) -> ExtReal:
        x = as_rational(x)
        for ox, ov in self.overrides:
            if ox == x:
                return finite(ov)
        for piece in self.pieces:
            if piece.interval.contains(x):
                return finite(piece.value_at(x))
        for region in self.neginf:
            if region.contains(x):
                return NEG_INF
        return POS_INF

    def domain_components(self) -> list[Interval]:
        comps = [p.interval for p in self.pieces] + [r for r in self.neginf]
        comps += [Interval.point(x) for x, _ in self.overrides if not self._covered(x)]
        return sorted(comps, key=lambda i: (i.lo._key(), not i.lo_closed))

    def _covered(self, x: Rational) -> bool:
        return any(p.interval.contains(x) for p in self.pieces) or any(
            r.contains(x) for r in self.neginf
        )

    def domain_hull(self) -> Interval:
        """Hull of the effective domain; endpoint flags mean membership."""
        comps = self.domain_components()
        if not comps:
            return Interval.make(0, 0, False, False)  # empty
        lo = min((c.lo for c in comps), key=ExtReal._key)
        hi = max((c.hi for c in comps), key=ExtReal._key)
        lo_in = lo.is_finite and any(c.lo == lo and c.lo_closed for c in comps)
        hi_in = hi.is_finite and any(c.hi == hi and c.hi_closed for c in comps)
        return Interval(EndPoint(lo, bool(lo_in)), EndPoint(hi, bool(hi_in)))

    def domain_is_empty(self) -> bool:
        return not (self.pieces or self.overrides or self.neginf)

    def is_proper(self) -> bool:
        return not self.domain_is_empty() and not self.neginf

    def breakpoints(self) -> list[Fraction]:
        xs: set[Fraction] = set()
        for p in self.pieces:
            for e in (p.interval.lo, p.interval.hi):
                if e.is_finite:
                    xs.add(e.value)
        for r in self.neginf:
            for e in (r.lo, r.hi):
                if e.is_finite:
                    xs.add(e.value)
        for x, _ in self.overrides:
            xs.add(x)
        return sorted(xs)

    def __str__(self) -> str:
        parts = [
            f"{format_rational(p.slope)}*x+{format_rational(p.intercept)} on {p.interval}"
            for p in self.pieces
        ]
        parts += [f"({format_rational(x)} -> {format_rational(v)})" for x, v in self.overrides]
        parts += [f"-inf on {r}" for r in self.neginf]
        return "; ".join(parts) if parts else "(empty domain)"


def pwa(
    pieces: Sequence[tuple[Interval, RationalLike, RationalLike]] = (),
    overrides: Sequence[tuple[RationalLike, RationalLike]] = (),
    neginf: Sequence[Interval] = (),
) -> PwaFunction:
    """Build and canonicalize a PwaFunction.

    Canonical form: degenerate pieces become overrides, overrides that
    match an adjacent or covering piece value are absorbed, junction
    points of continuous adjacent pieces belong to the left piece, and
    adjacent pieces with identical affine parts are merged.
    """
    raw = [
        Piece(iv, as_rational(s), as_rational(b))
        for iv, s, b in pieces
        if not iv.is_empty()
    ]
    ovr: dict[Fraction, Fraction] = {}
    for x, v in overrides:
        x, v = as_rational(x), as_rational(v)
        if x in ovr and ovr[x] != v:
            raise ValueError(f"conflicting overrides at {x}")
        ovr[x] = v
    # degenerate pieces -> overrides
    kept = []
    for p in raw:
        if p.interval.is_degenerate():
            x = p.interval.lo.value
            v = p.value_at(x)
            if ovr.setdefault(x, v) != v:
                raise ValueError(f"conflicting values at {x}")
        else:
            kept.append(p)
    kept.sort(key=lambda p: p.interval.lo._key())
    for a, b in zip(kept, kept[1:]):
        bad = a.interval.hi > b.interval.lo or (
            a.interval.hi == b.interval.lo
            and a.interval.hi_closed
            and b.interval.lo_closed
        )
        if bad:
            raise ValueError(f"overlapping pieces at {a.interval} / {b.interval}")

    def piece_at(x: Fraction) -> Optional[Piece]:
        for p in kept:
            if p.interval.contains(x):
                return p
        return None

    # absorb overrides that equal a covering or adjacent piece value
    changed = True
    while changed:
        changed = False
        for x in list(ovr):
            v = ovr[x]
            cover = piece_at(x)
            if cover is not None:
                if cover.value_at(x) == v:
                    del ovr[x]
                    changed = True
                continue
            for i, p in enumerate(kept):
                iv = p.interval
                if iv.lo == finite(x) and not iv.lo_closed and p.value_at(x) == v:
                    kept[i] = Piece(
                        Interval(EndPoint(iv.lo, True), iv.upper), p.slope, p.intercept
                    )
                    del ovr[x]
                    changed = True
                    break
                if iv.hi == finite(x) and not iv.hi_closed and p.value_at(x) == v:
                    kept[i] = Piece(
                        Interval(iv.lower, EndPoint(iv.hi, True)), p.slope, p.intercept
                    )
                    del ovr[x]
                    changed = True
                    break
            if changed:
                break

    # continuous junctions: point belongs to the left piece
    for i in range(len(kept) - 1):
        a, b = kept[i], kept[i + 1]
        if a.interval.hi == b.interval.lo and a.interval.hi.is_finite:
            x = a.interval.hi.value
            if b.interval.lo_closed and not a.interval.hi_closed:
                if a.value_at(x) == b.value_at(x):
                    kept[i] = Piece(
                        Interval(a.interval.lower, EndPoint(a.interval.hi, True)),
                        a.slope,
                        a.intercept,
                    )
                    kept[i + 1] = Piece(
                        Interval(EndPoint(b.interval.lo, False), b.interval.upper),
                        b.slope,
                        b.intercept,
                    )

    # merge adjacent pieces with the same affine part
    merged: list[Piece] = []
    for p in kept:
        if merged:
            q = merged[-1]
            touching = q.interval.hi == p.interval.lo and (
                q.interval.hi_closed or p.interval.lo_closed
            )
            if touching and q.slope == p.slope and q.intercept == p.intercept:
                merged[-1] = Piece(
                    Interval(q.interval.lower, p.interval.upper), q.slope, q.intercept
                )
                continue
        merged.append(p)

    neg = tuple(sorted((r for r in neginf if not r.is_empty()), key=lambda r: r.lo._key()))
    return PwaFunction(
        tuple(merged),
        tuple(sorted(ovr.items())),
        neg,
    )


def affine_on(
    interval: Interval, slope: RationalLike, intercept: RationalLike
) -> PwaFunction:
    return pwa([(interval, slope, intercept)])


def zero_function() -> PwaFunction:
    return affine_on(Interval.real_line(), 0, 0)


def empty_function() -> PwaFunction:
    return PwaFunction(())


# ---------------------------------------------------------------------------
# Multipliers and optimal values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Multiplier:
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if any(e < 0 for e in self.entries):
            raise ValueError("multiplier entries must be nonnegative")

    @staticmethod
    def of(*entries: RationalLike) -> "Multiplier":
        return Multiplier(tuple(as_rational(e) for e in entries))

    @staticmethod
    def zeros(n: int) -> "Multiplier":
        return Multiplier((Fraction(0),) * n)

    def __len__(self) -> int:
        return len(self.entries)

    def support(self) -> frozenset[int]:
        return frozenset(i for i, e in enumerate(self.entries) if e > 0)


@dataclass(frozen=True)
class DualValue:
    """Optimal value with attainment flag and optional witnesses."""

    value: ExtReal
    attained: bool
    witness_point: Optional[Fraction] = None
    witness_multiplier: Optional[Multiplier] = None
    witness_w: Optional[Any] = None

    def __post_init__(self) -> None:
        if self.attained:
            if not self.value.is_finite:
                raise ValueError("attained optimal values must be finite")
            if (
                self.witness_point is None
                and self.witness_multiplier is None
                and self.witness_w is None
            ):
                raise ValueError("attained optimal values need a witness")


# ---------------------------------------------------------------------------
# Common refinement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """Open subinterval on which every participating function is affine."""

    interval: Interval
    slopes: tuple[Fraction, ...]
    intercepts: tuple[Fraction, ...]


@dataclass(frozen=True)
class PointCand:
    x: Fraction
    values: tuple[Fraction, ...]


def refine(
    parts: Sequence[PwaFunction],
    domain: str = "intersection",
    clip: Optional[Interval] = None,
) -> tuple[list[Region], list[PointCand], list[Any]]:
    """Split the line into elementary open intervals and points.

    Returns regions/points covering the requested domain (the
    intersection of all parts' domains, or the first part's domain when
    ``domain == "first"``).  The third element lists spots where the
    first part is defined but a later one is not (only possible with
    ``domain="first"``): pairs ``(interval_or_x, part_index)``.
    """
    cuts: set[Fraction] = set()
    for f in parts:
        cuts.update(f.breakpoints())
    if clip is not None:
        for e in (clip.lo, clip.hi):
            if e.is_finite:
                cuts.add(e.value)
    xs = sorted(cuts)
    elementary: list[Interval] = []
    if xs:
        elementary.append(Interval(EndPoint(NEG_INF, False), endpoint(xs[0], False)))
        for a, b in zip(xs, xs[1:]):
            elementary.append(Interval.make(a, b, False, False))
        elementary.append(Interval(endpoint(xs[-1], False), EndPoint(POS_INF, False)))
    else:
        elementary.append(Interval.real_line())

    def piece_over(f: PwaFunction, iv: Interval) -> Optional[Piece]:
        for p in f.pieces:
            if p.interval.contains_interval(iv):
                return p
        return None

    regions: list[Region] = []
    missing: list[Any] = []
    for iv in elementary:
        if clip is not None:
            iv = iv.intersect(clip)
            if iv.is_empty() or iv.is_degenerate():
                continue
        covers = [piece_over(f, iv) for f in parts]
        if covers[0] is None:
            continue
        if all(c is not None for c in covers):
            regions.append(
                Region(
                    iv,
                    tuple(c.slope for c in covers),
                    tuple(c.intercept for c in covers),
                )
            )
        elif domain == "first":
            for k, c in enumerate(covers):
                if c is None:
                    missing.append((iv, k))
                    break

    points: list[PointCand] = []
    for x in xs:
        if clip is not None and not clip.contains(x):
            continue
        vals = [f.eval(x) for f in parts]
        if vals[0] is POS_INF or not vals[0].is_finite:
            continue
        if all(v.is_finite for v in vals):
            points.append(PointCand(x, tuple(v.value for v in vals)))
        elif domain == "first":
            for k, v in enumerate(vals):
                if not v.is_finite:
                    missing.append((x, k))
                    break
    return regions, points, missing


def _assemble(
    regions: list[Region], points: list[PointCand], coeffs: Sequence[Fraction]
) -> PwaFunction:
    pieces = [
        (
            r.interval,
            sum(c * s for c, s in zip(coeffs, r.slopes)),
            sum(c * b for c, b in zip(coeffs, r.intercepts)),
        )
        for r in regions
    ]
    overrides = [
        (p.x, sum(c * v for c, v in zip(coeffs, p.values))) for p in points
    ]
    return pwa(pieces, overrides)


# ---------------------------------------------------------------------------
# Algebra
# ---------------------------------------------------------------------------


def add(f: PwaFunction, g: PwaFunction) -> PwaFunction:
    """Pointwise sum of proper functions; domain is the intersection."""
    for h in (f, g):
        if not h.is_proper():
            raise ValueError("add requires proper operands")
    regions, points, _ = refine([f, g])
    return _assemble(regions, points, [Fraction(1), Fraction(1)])


def scale_fn(f: PwaFunction, q: RationalLike) -> PwaFunction:
    """q * f for q > 0 (domains unchanged)."""
    q = as_rational(q)
    if q <= 0:
        raise ValueError("scale_fn requires a positive factor")
    return pwa(
        [(p.interval, p.slope * q, p.intercept * q) for p in f.pieces],
        [(x, v * q) for x, v in f.overrides],
        f.neginf,
    )


def negate_fn(f: PwaFunction) -> PwaFunction:
    if not f.is_proper():
        raise ValueError("negate_fn requires a proper function")
    return pwa(
        [(p.interval, -p.slope, -p.intercept) for p in f.pieces],
        [(x, -v) for x, v in f.overrides],
    )


def combine_constraints(hs: Sequence[PwaFunction], lam: Multiplier) -> PwaFunction:
    """lambda . h over the active entries; the zero multiplier gives 0 on R."""
    if len(hs) != len(lam):
        raise ValueError("multiplier length must match the constraint count")
    active = [(w, h) for w, h in zip(lam.entries, hs) if w > 0]
    if not active:
        return zero_function()
    out = scale_fn(active[0][1], active[0][0])
    for w, h in active[1:]:
        out = add(out, scale_fn(h, w))
    return out


def sub_dc(f: PwaFunction, g: PwaFunction) -> PwaFunction:
    """f - g with value +inf wherever x is outside dom f.

    On dom f, points where g is +inf produce -inf; the result is then
    improper, which ``is_proper`` reports.
    """
    for h in (f, g):
        if not h.is_proper():
            raise ValueError("sub_dc requires proper operands")
    regions, points, missing = refine([f, g], domain="first")
    base = _assemble(regions, points, [Fraction(1), Fraction(-1)])
    neg: list[Interval] = []
    for spot, _ in missing:
        if isinstance(spot, Interval):
            neg.append(spot)
        else:
            neg.append(Interval.point(spot))
    return pwa(
        [(p.interval, p.slope, p.intercept) for p in base.pieces],
        base.overrides,
        neg,
    )


def restrict(f: PwaFunction, window: Interval) -> PwaFunction:
    pieces = []
    for p in f.pieces:
        iv = p.interval.intersect(window)
        if not iv.is_empty():
            pieces.append((iv, p.slope, p.intercept))
    overrides = [(x, v) for x, v in f.overrides if window.contains(x)]
    neg = [r.intersect(window) for r in f.neginf]
    return pwa(pieces, overrides, [r for r in neg if not r.is_empty()])


# ---------------------------------------------------------------------------
# Feasible set and indicator
# ---------------------------------------------------------------------------


def _sublevel(h: PwaFunction) -> Interval:
    """{x : h(x) <= 0} for a proper convex h, as an interval."""
    parts: list[Interval] = []
    for p in h.pieces:
        iv = p.interval
        shadowed = [x for x, _ in h.overrides if iv.contains(x)]
        if p.slope == 0:
            sol = iv if p.intercept <= 0 else None
        else:
            root = -p.intercept / p.slope
            if p.slope > 0:
                sol = iv.intersect(Interval(EndPoint(NEG_INF, False), endpoint(root, True)))
            else:
                sol = iv.intersect(Interval(endpoint(root, True), EndPoint(POS_INF, False)))
        if sol is not None and not sol.is_empty():
            # a shadowing override with positive value can only sit at an
            # endpoint of the solution interval for convex h; open it there
            for x in shadowed:
                if sol.contains(x) and h.eval(x) > finite(0):
                    if sol.lo == finite(x):
                        sol = Interval(EndPoint(sol.lo, False), sol.upper)
                    elif sol.hi == finite(x):
                        sol = Interval(sol.lower, EndPoint(sol.hi, False))
            if not sol.is_empty():
                parts.append(sol)
    for x, v in h.overrides:
        if v <= 0 and not any(q.contains(x) for q in parts):
            parts.append(Interval.point(x))
    if not parts:
        return Interval.make(0, 0, False, False)
    parts.sort(key=lambda i: (i.lo._key(), not i.lo_closed))
    merged = parts[0]
    for nxt in parts[1:]:
        gap = merged.hi < nxt.lo or (
            merged.hi == nxt.lo and not merged.hi_closed and not nxt.lo_closed
        )
        if gap:
            raise AssertionError("sublevel set of a convex function must be connected")
        hi, hic = (
            (nxt.hi, nxt.hi_closed)
            if nxt.hi > merged.hi or (nxt.hi == merged.hi and nxt.hi_closed)
            else (merged.hi, merged.hi_closed)
        )
        merged = Interval(merged.lower, EndPoint(hi, hic))
    return merged


def feasible_set(hs: Sequence[PwaFunction]) -> Optional[Interval]:
    """A = the set where every constraint is <= 0; None when empty."""
    out = Interval.real_line()
    for h in hs:
        out = out.intersect(_sublevel(h))
        if out.is_empty():
            return None
    return out


def indicator(hs: Sequence[PwaFunction]) -> PwaFunction:
    """delta_A for the exact feasible set; raises on empty A."""
    A = feasible_set(hs)
    if A is None:
        raise EmptyFeasibleSetError("the feasible set is empty")
    return affine_on(A, 0, 0)


# ---------------------------------------------------------------------------
# Infimum / supremum
# ---------------------------------------------------------------------------


def infimum(f: PwaFunction) -> DualValue:
    """Exact infimum over the line with attainment and witness."""
    if f.neginf:
        return DualValue(NEG_INF, False)
    if f.domain_is_empty():
        return DualValue(POS_INF, False)
    override_xs = {x for x, _ in f.overrides}
    best: ExtReal = POS_INF
    best_witness: Optional[Fraction] = None
    for p in f.pieces:
        iv = p.interval
        if p.slope == 0:
            val = finite(p.intercept)
            wit = _free_point(iv, override_xs)
        elif p.slope > 0:
            if not iv.lo.is_finite:
                val, wit = NEG_INF, None
            else:
                val = finite(p.value_at(iv.lo.value))
                wit = iv.lo.value if iv.lo_closed and iv.lo.value not in override_xs else None
        else:
            if not iv.hi.is_finite:
                val, wit = NEG_INF, None
            else:
                val = finite(p.value_at(iv.hi.value))
                wit = iv.hi.value if iv.hi_closed and iv.hi.value not in override_xs else None
        if val < best or (val == best and best_witness is None and wit is not None):
            best, best_witness = val, wit
    for x, v in f.overrides:
        val = finite(v)
        if val < best or (val == best and best_witness is None):
            best, best_witness = val, x
    if best.is_finite and best_witness is not None:
        return DualValue(best, True, witness_point=best_witness)
    return DualValue(best, False)


def _free_point(iv: Interval, avoid: set[Fraction]) -> Optional[Fraction]:
    for e in (iv.lower, iv.upper):
        if e.closed and e.value.is_finite and e.value.value not in avoid:
            return e.value.value
    return iv.interior_point(avoid)


def supremum_over_domain(f: PwaFunction) -> DualValue:
    """sup of f over its effective domain (ignores +inf outside)."""
    if not f.is_proper():
        raise ValueError("supremum_over_domain requires a proper function")
    inner = infimum(negate_fn(f))
    value = ext_negate(inner.value)
    if inner.attained and value.is_finite:
        return DualValue(value, True, witness_point=inner.witness_point)
    return DualValue(value, False)


# ---------------------------------------------------------------------------
# Convexity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvexityViolation:
    """Three points witnessing f(mid) > (f(x0)+f(x1))/2 with mid the midpoint."""

    x0: Fraction
    x1: Fraction

    @property
    def mid(self) -> Fraction:
        return (self.x0 + self.x1) / 2

    def holds_against(self, f: PwaFunction) -> bool:
        fm = f.eval(self.mid)
        f0, f1 = f.eval(self.x0), f.eval(self.x1)
        if not (f0.is_finite and f1.is_finite):
            return False
        if not fm.is_finite:
            return True
        return fm.value * 2 > f0.value + f1.value


def convexity_violation(f: PwaFunction) -> Optional[ConvexityViolation]:
    """None when the epigraph is convex, else a midpoint-violation pair."""
    if not f.is_proper():
        raise ValueError("convexity is only checked for proper functions")
    comps = f.domain_components()
    for a, b in zip(comps, comps[1:]):
        gap = a.hi < b.lo or (a.hi == b.lo and not a.hi_closed and not b.lo_closed)
        if gap:
            return _gap_violation(a, b)
    hull = f.domain_hull()
    pieces = sorted(f.pieces, key=lambda p: p.interval.lo._key())
    for p, q in zip(pieces, pieces[1:]):
        if p.slope > q.slope:
            v = _probe_violation(f, q.interval.lo.value)
            if v is not None:
                return v
    # value consistency at breakpoints
    for x in f.breakpoints():
        val = f.eval(x)
        if not val.is_finite:
            continue
        left = _one_sided_limit(f, x, -1)
        right = _one_sided_limit(f, x, +1)
        if left is not None and right is not None:
            if left != right or val.value != left:
                v = _probe_violation(f, x)
                if v is not None:
                    return v
        else:
            limit = left if left is not None else right
            at_hull_end = (hull.lo == finite(x)) or (hull.hi == finite(x))
            if limit is not None and (
                val.value < limit or (val.value > limit and not at_hull_end)
            ):
                v = _probe_violation(f, x)
                if v is not None:
                    return v
    return None


def _one_sided_limit(f: PwaFunction, x: Fraction, side: int) -> Optional[Fraction]:
    """Limit of the piece values approaching x from below (side=-1) or above."""
    for p in f.pieces:
        iv = p.interval
        if side < 0 and iv.lo < finite(x) and iv.hi >= finite(x):
            return p.value_at(x)
        if side > 0 and iv.hi > finite(x) and iv.lo <= finite(x):
            return p.value_at(x)
    return None


def _gap_violation(a: Interval, b: Interval) -> ConvexityViolation:
    """x0 in a, x1 in b whose midpoint falls in the gap between them."""
    g0, g1 = a.hi.value, b.lo.value
    width = g1 - g0

    def step_limit(iv: Interval) -> Fraction:
        if iv.is_degenerate():
            return Fraction(0)
        room = []
        if iv.lo.is_finite and iv.hi.is_finite:
            room.append((iv.hi.value - iv.lo.value) / 2)
        room.append(width / 2 if width > 0 else Fraction(1, 2))
        return min(room)

    da = Fraction(0) if a.hi_closed else min(step_limit(a), Fraction(1, 2)) or Fraction(0)
    db = Fraction(0) if b.lo_closed else min(step_limit(b), Fraction(1, 2)) or Fraction(0)
    if width == 0:
        # single missing point; both sides must be open, use a symmetric step
        d = min(x for x in (da, db) if x > 0)
        return ConvexityViolation(g0 - d, g1 + d)
    return ConvexityViolation(g0 - da, g1 + db)


def _probe_violation(f: PwaFunction, x: Fraction) -> Optional[ConvexityViolation]:
    """Search shrinking symmetric/asymmetric pairs around x for a violation."""
    for k in range(1, 40):
        d = Fraction(1, 2**k)
        for x0, x1 in (
            (x - d, x + d),
            (x - d, x + 3 * d),
            (x - 3 * d, x + d),
            (x, x + 2 * d),
            (x - 2 * d, x),
        ):
            cand = ConvexityViolation(x0, x1)
            if cand.holds_against(f):
                return cand
    return None


def is_convex(f: PwaFunction) -> bool:
    return convexity_violation(f) is None


# ---------------------------------------------------------------------------
# Semantic equality
# ---------------------------------------------------------------------------


def pwa_equal(f: PwaFunction, g: PwaFunction) -> bool:
    """Pointwise equality, decided on the joint critical set."""
    xs = sorted(set(f.breakpoints()) | set(g.breakpoints()))
    samples: set[Fraction] = set(xs)
    grid: list[Fraction] = []
    if xs:
        grid = [xs[0] - 1, xs[-1] + 1]
        for a, b in zip(xs, xs[1:]):
            grid.append(a + (b - a) / 3)
            grid.append(a + (b - a) * 2 / 3)
        for a, b in zip(xs, xs[1:]):
            grid.append((a + b) / 2)
        grid += [xs[0] - 2, xs[-1] + 2]
    else:
        grid = [Fraction(k) for k in (-2, -1, 0, 1, 2)]
    samples.update(grid)
    return all(f.eval(x) == g.eval(x) for x in samples)
