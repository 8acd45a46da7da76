"""Dense exact-rational simplex with Bland's rule.

Small problems only (tens of variables): reduced costs are recomputed
from scratch every pivot, trading speed for obviousness.  Strict
inequalities never appear here; callers encode openness as attainment
metadata outside the LP.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .extreal import ExtReal, POS_INF, RationalLike, as_rational, finite


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: str  # "<=", ">=", "="
    rhs: Fraction


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective . x subject to the constraints; per-variable
    domain is x_j >= 0 when nonneg[j] else free."""

    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...]
    nonneg: tuple[bool, ...]

    def __post_init__(self) -> None:
        n = len(self.objective)
        if len(self.nonneg) != n:
            raise ValueError("nonneg flags must match the variable count")
        for c in self.constraints:
            if len(c.coeffs) != n:
                raise ValueError("constraint dimension mismatch")
            if c.relation not in ("<=", ">=", "="):
                raise ValueError(f"bad relation {c.relation!r}")


def make_lp(
    objective: Sequence[RationalLike],
    constraints: Sequence[tuple[Sequence[RationalLike], str, RationalLike]],
    nonneg: Sequence[bool],
) -> LinearProgram:
    return LinearProgram(
        tuple(as_rational(c) for c in objective),
        tuple(
            Constraint(tuple(as_rational(a) for a in coeffs), rel, as_rational(rhs))
            for coeffs, rel, rhs in constraints
        ),
        tuple(bool(b) for b in nonneg),
    )


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    value: ExtReal
    witness: Optional[tuple[Fraction, ...]]


def solve_max(lp: LinearProgram) -> LpOutcome:
    """Exact optimum; witness feasibility is re-verified before returning."""
    n_orig = len(lp.objective)
    # map original variables to standard (>= 0) columns
    col_of: list[tuple[int, Optional[int]]] = []
    ncols = 0
    for j in range(n_orig):
        if lp.nonneg[j]:
            col_of.append((ncols, None))
            ncols += 1
        else:
            col_of.append((ncols, ncols + 1))  # x = plus - minus
            ncols += 2

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for c in lp.constraints:
        coeffs = list(c.coeffs)
        rel = c.relation
        b = c.rhs
        if rel == ">=":
            coeffs = [-a for a in coeffs]
            b = -b
            rel = "<="
        row = [Fraction(0)] * ncols
        for j, a in enumerate(coeffs):
            pos, negc = col_of[j]
            row[pos] += a
            if negc is not None:
                row[negc] -= a
        if rel == "<=":
            row.append(Fraction(1))  # slack
            for r in rows:
                r.append(Fraction(0))
            ncols += 1
        rows.append(row)
        rhs.append(b)
    # pad rows created before later slacks
    for r in rows:
        r.extend([Fraction(0)] * (ncols - len(r)))
    # rhs >= 0
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-a for a in rows[i]]
            rhs[i] = -rhs[i]

    m = len(rows)
    n_struct = ncols
    # artificial variables, one per row
    for i in range(m):
        rows[i].extend(Fraction(1) if k == i else Fraction(0) for k in range(m))
    ncols += m
    basis = [n_struct + i for i in range(m)]

    cost1 = [Fraction(0)] * ncols
    for j in range(n_struct, ncols):
        cost1[j] = Fraction(-1)  # maximize -(sum of artificials)

    def run(cost: list[Fraction], allowed: int) -> Optional[str]:
        """Bland-rule simplex over columns [0, allowed); None or 'unbounded'."""
        while True:
            # reduced costs z_j = c_B . col_j - c_j
            entering = -1
            for j in range(allowed):
                if j in basis_set:
                    continue
                zj = sum(cost[basis[r]] * rows[r][j] for r in range(m)) - cost[j]
                if zj < 0:
                    entering = j
                    break
            if entering < 0:
                return None
            leave = -1
            best: Optional[Fraction] = None
            for r in range(m):
                a = rows[r][entering]
                if a > 0:
                    ratio = rhs[r] / a
                    if best is None or ratio < best or (
                        ratio == best and basis[r] < basis[leave]
                    ):
                        best = ratio
                        leave = r
            if leave < 0:
                return "unbounded"
            _pivot(rows, rhs, basis, leave, entering)
            basis_set.discard(basis[leave])
            basis_set.add(entering)
            basis[leave] = entering

    basis_set = set(basis)
    status = run(cost1, ncols)
    assert status is None, "phase 1 cannot be unbounded"
    infeas = sum(rhs[r] for r in range(m) if basis[r] >= n_struct)
    if infeas > 0:
        return LpOutcome(LpStatus.INFEASIBLE, POS_INF, None)
    # drive remaining artificials out of the basis
    r = 0
    while r < m:
        if basis[r] >= n_struct:
            piv = next((j for j in range(n_struct) if rows[r][j] != 0), None)
            if piv is None:
                del rows[r], rhs[r], basis[r]
                m -= 1
                continue
            _pivot(rows, rhs, basis, r, piv)
            basis_set.discard(basis[r])
            basis_set.add(piv)
            basis[r] = piv
        r += 1

    cost2 = [Fraction(0)] * ncols
    for j in range(n_orig):
        pos, negc = col_of[j]
        cost2[pos] += lp.objective[j]
        if negc is not None:
            cost2[negc] -= lp.objective[j]
    status = run(cost2, n_struct)
    if status == "unbounded":
        return LpOutcome(LpStatus.UNBOUNDED, POS_INF, None)

    x_std = [Fraction(0)] * n_struct
    for r in range(m):
        if basis[r] < n_struct:
            x_std[basis[r]] = rhs[r]
    witness = []
    for j in range(n_orig):
        pos, negc = col_of[j]
        witness.append(x_std[pos] - (x_std[negc] if negc is not None else Fraction(0)))
    value = sum(c * x for c, x in zip(lp.objective, witness))
    _check_feasible(lp, witness)
    return LpOutcome(LpStatus.OPTIMAL, finite(value), tuple(witness))


def _pivot(rows, rhs, basis, r, c) -> None:
    piv = rows[r][c]
    rows[r] = [a / piv for a in rows[r]]
    rhs[r] /= piv
    for i in range(len(rows)):
        if i != r and rows[i][c] != 0:
            factor = rows[i][c]
            rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
            rhs[i] -= factor * rhs[r]


def _check_feasible(lp: LinearProgram, x: Sequence[Fraction]) -> None:
    for j, nn in enumerate(lp.nonneg):
        if nn and x[j] < 0:
            raise AssertionError("simplex produced an infeasible witness")
    for c in lp.constraints:
        lhs = sum(a * v for a, v in zip(c.coeffs, x))
        ok = (
            lhs <= c.rhs
            if c.relation == "<="
            else lhs >= c.rhs
            if c.relation == ">="
            else lhs == c.rhs
        )
        if not ok:
            raise AssertionError("simplex produced an infeasible witness")
