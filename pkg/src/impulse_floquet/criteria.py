"""Sufficient stability tests, each reported condition by condition.

Seven criteria are implemented: three classical impulse-free tests (krein,
guseinov-kaymakcalan, wang), the impulse-aware pair (guseinov-zafer and its
equality-boundary variant), and the sharper exponential-weighted pair (main
and main-boundary). Every check reports each hypothesis with a signed margin
(positive means satisfied with room to spare), and certifies stability only
when all hypotheses hold clear of the strictness tolerance.

Pointwise hypotheses (b > 0 and the like) are decided by exact polynomial
minimization where the representation allows it, and by dense sampling with
local refinement otherwise. Ratio hypotheses guard against b approaching
zero and degrade to "undecidable" rather than guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as npoly

from .piecewise import (PiecewiseFunction, PolySegment, _chebyshev_nodes,
                        adaptive_integral, poly_min_on, sampled_min)
from .system import ImpulsiveSystem
from .tolerances import DEFAULT_TOLERANCES, Tolerances

SATISFIED = "satisfied"
VIOLATED = "violated"
MARGINAL = "marginal"
UNDECIDABLE = "undecidable"

CERTIFIED = "certified-stable"
INCONCLUSIVE = "inconclusive"
NOT_APPLICABLE = "not-applicable"

KREIN = "krein"
GUSEINOV_KAYMAKCALAN = "guseinov-kaymakcalan"
GUSEINOV_ZAFER = "guseinov-zafer"
GUSEINOV_ZAFER_BOUNDARY = "guseinov-zafer-boundary"
WANG = "wang"
MAIN = "main"
MAIN_BOUNDARY = "main-boundary"

CRITERION_ORDER = (KREIN, GUSEINOV_KAYMAKCALAN, GUSEINOV_ZAFER,
                   GUSEINOV_ZAFER_BOUNDARY, WANG, MAIN, MAIN_BOUNDARY)


@dataclass(frozen=True)
class Condition:
    label: str
    status: str
    margin: float | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {"label": self.label, "status": self.status, "margin": self.margin,
                **({"note": self.note} if self.note else {})}


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    conditions: tuple[Condition, ...]
    conclusion: str

    def to_json(self) -> dict:
        return {"criterion": self.criterion,
                "conditions": [c.to_json() for c in self.conditions],
                "conclusion": self.conclusion}

    def condition(self, label: str) -> Condition:
        for c in self.conditions:
            if c.label == label:
                return c
        raise KeyError(label)


@dataclass(frozen=True)
class ConditionCStatus:
    """Which branch of the degeneracy-exclusion alternative holds."""

    branch: str  # "C1" | "C2" | "C3" | "none" | "undecidable"
    detail: str = ""
    nonzero_beta_index: int | None = None
    max_expression: float | None = None


def _status_strict(margin: float, tol_eff: float) -> str:
    if margin > tol_eff:
        return SATISFIED
    if margin >= -tol_eff:
        return MARGINAL
    return VIOLATED


def _cond_upper(label: str, value: float, bound: float, tol: Tolerances) -> Condition:
    margin = bound - value
    return Condition(label, _status_strict(margin, tol.strict * max(1.0, abs(bound))), margin)


def _cond_positive(label: str, value: float, tol: Tolerances) -> Condition:
    return Condition(label, _status_strict(value, tol.strict), value)


def _cond_pointwise_positive(label: str, minval: float, at: float, tol: Tolerances) -> Condition:
    # a touch of zero genuinely breaks a strict pointwise inequality
    if minval <= 0.0:
        status = VIOLATED
    elif minval <= tol.strict:
        status = MARGINAL
    else:
        status = SATISFIED
    return Condition(label, status, minval, note=f"minimum at t={at:.6g}")


def _cond_pointwise_nonneg(label: str, minval: float, at: float, tol: Tolerances) -> Condition:
    if minval >= 0.0:
        status = SATISFIED
    elif minval >= -tol.strict:
        status = MARGINAL
    else:
        status = VIOLATED
    return Condition(label, status, minval, note=f"minimum at t={at:.6g}")


def _cond_equality(label: str, value: float, scale: float, tol: Tolerances) -> Condition:
    tol_eff = tol.equality * max(1.0, scale)
    if abs(value) <= tol_eff:
        status = SATISFIED
    elif abs(value) <= 10.0 * tol_eff:
        status = MARGINAL
    else:
        status = VIOLATED
    return Condition(label, status, value)


def _cond_undecidable(label: str, note: str) -> Condition:
    return Condition(label, UNDECIDABLE, None, note)


def _conclude(conditions: list[Condition]) -> str:
    return CERTIFIED if all(c.status == SATISFIED for c in conditions) else INCONCLUSIVE


class _Quantities:
    """Lazily computed per-system integrals, sums and pointwise extrema."""

    def __init__(self, system: ImpulsiveSystem, tol: Tolerances):
        self.system = system
        self.tol = tol

    def _integral(self, f: PiecewiseFunction, transform: str = "identity") -> float:
        return f.integrate(0.0, f.domain_end, transform, self.tol.quad_rel)

    @cached_property
    def int_abs_a(self) -> float:
        return self._integral(self.system.coeff_a, "abs")

    @cached_property
    def int_a(self) -> float:
        return self._integral(self.system.coeff_a)

    @cached_property
    def int_b(self) -> float:
        return self._integral(self.system.coeff_b)

    @cached_property
    def int_c(self) -> float:
        return self._integral(self.system.coeff_c)

    @cached_property
    def int_c_plus(self) -> float:
        return self._integral(self.system.coeff_c, "pos")

    @cached_property
    def int_abs_c(self) -> float:
        return self._integral(self.system.coeff_c, "abs")

    @cached_property
    def prod_alpha2(self) -> float:
        return self.system.schedule.alpha_sq_product

    @cached_property
    def sum_ratio(self) -> float:
        return self.system.schedule.ratio_sum()

    @cached_property
    def sum_ratio_plus(self) -> float:
        return self.system.schedule.ratio_sum(positive=True)

    @cached_property
    def sum_abs_ratio(self) -> float:
        return sum(abs(imp.ratio) for imp in self.system.schedule.impulses)

    @cached_property
    def impulse_free(self) -> bool:
        return all(imp.alpha == 1.0 and imp.beta == 0.0
                   for imp in self.system.schedule.impulses)

    @cached_property
    def min_b(self) -> tuple[float, float]:
        return _pointwise_min(self.system, "b")

    @cached_property
    def min_c(self) -> tuple[float, float]:
        return _pointwise_min(self.system, "c")

    @cached_property
    def min_bc_a2(self) -> tuple[float, float]:
        return _pointwise_min(self.system, "bc-a2")

    @cached_property
    def max_abs_bc_a2(self) -> float:
        return _pointwise_max_abs(self.system, "bc-a2")

    @cached_property
    def b_safe(self) -> bool:
        return self.min_b[0] > self.tol.strict

    @cached_property
    def int_a2_over_b(self) -> float | None:
        if not self.b_safe:
            return None
        total = 0.0
        rough = 0.0
        pieces = list(self.system.segment_triples())
        span = self.system.period
        for lo, hi, sa, sb, _ in pieces:
            def fn(ts, _sa=sa, _sb=sb):
                a = np.asarray(_sa(ts), dtype=float)
                b = np.asarray(_sb(ts), dtype=float)
                return a * a / b
            rough += abs(_rough_panel(fn, lo, hi))
        budget = self.tol.quad_rel * max(rough, 1e-3)
        for lo, hi, sa, sb, _ in pieces:
            def fn(ts, _sa=sa, _sb=sb):
                a = np.asarray(_sa(ts), dtype=float)
                b = np.asarray(_sb(ts), dtype=float)
                return a * a / b
            total += adaptive_integral(fn, lo, hi, budget * (hi - lo) / span)
        return total

    @cached_property
    def mean_condition_value(self) -> float | None:
        """int(c - a^2/b) + sum(beta/alpha), or None when b is not safely positive."""
        if self.int_a2_over_b is None:
            return None
        return self.int_c - self.int_a2_over_b + self.sum_ratio

    @cached_property
    def equality_scale(self) -> float:
        extra = self.int_a2_over_b if self.int_a2_over_b is not None else 0.0
        return self.int_abs_c + extra + self.sum_abs_ratio

    @cached_property
    def ratio_continuity(self) -> tuple[str, str]:
        """("satisfied"|"violated"|"undecidable", detail) for a/b being continuous."""
        if not self.b_safe:
            return (UNDECIDABLE, "b is not bounded away from zero")
        sys_ = self.system
        a, b = sys_.coeff_a, sys_.coeff_b
        ratios = []
        jumps = []
        for k in sys_.knots[1:-1]:
            rl = a.eval(k, "left") / b.eval(k, "left")
            rr = a.eval(k, "right") / b.eval(k, "right")
            ratios.extend((rl, rr))
            jumps.append((k, abs(rl - rr)))
        scale = 1.0 + max((abs(r) for r in ratios), default=0.0)
        for k, jump in jumps:
            if jump > self.tol.strict * scale:
                return (VIOLATED, f"a/b jumps by {jump:.3g} at t={k:.6g}")
        return (SATISFIED, "")

    @cached_property
    def condition_c(self) -> ConditionCStatus:
        return condition_C_status(self.system, self.tol, _pre=self)


def _rough_panel(fn, lo: float, hi: float) -> float:
    xs = np.linspace(lo, hi, 17)[1:-1]
    return float(np.mean(np.asarray(fn(xs), dtype=float))) * (hi - lo)


def _pointwise_min(system: ImpulsiveSystem, kind: str) -> tuple[float, float]:
    """Minimum of b, c or b*c - a^2 over the closed period, one-sided at knots."""
    best = math.inf
    best_at = 0.0
    for lo, hi, sa, sb, sc in system.segment_triples():
        if kind == "b":
            seg = sb
            polyable = isinstance(sb, PolySegment)
            coeffs = sb.coeffs if polyable else None
        elif kind == "c":
            seg = sc
            polyable = isinstance(sc, PolySegment)
            coeffs = sc.coeffs if polyable else None
        else:
            polyable = all(isinstance(s, PolySegment) for s in (sa, sb, sc))
            if polyable:
                coeffs = tuple(npoly.polysub(npoly.polymul(sb.coeffs, sc.coeffs),
                                             npoly.polymul(sa.coeffs, sa.coeffs)))

            def seg(ts, _sa=sa, _sb=sb, _sc=sc):
                a = np.asarray(_sa(ts), dtype=float)
                return np.asarray(_sb(ts), dtype=float) * np.asarray(_sc(ts), dtype=float) - a * a
        if polyable:
            val, at = poly_min_on(coeffs, lo, hi)
        else:
            val, at = sampled_min(seg, lo, hi)
        if val < best:
            best, best_at = val, at
    return best, best_at


def _pointwise_max_abs(system: ImpulsiveSystem, kind: str) -> float:
    assert kind == "bc-a2"
    best = 0.0
    for lo, hi, sa, sb, sc in system.segment_triples():
        polyable = all(isinstance(s, PolySegment) for s in (sa, sb, sc))
        if polyable:
            coeffs = tuple(npoly.polysub(npoly.polymul(sb.coeffs, sc.coeffs),
                                         npoly.polymul(sa.coeffs, sa.coeffs)))
            mn, _ = poly_min_on(coeffs, lo, hi)
            mx = -poly_min_on(tuple(-c for c in coeffs), lo, hi)[0]
            best = max(best, abs(mn), abs(mx))
        else:
            ts = _chebyshev_nodes(lo, hi, 129)
            a = np.asarray(sa(ts), dtype=float)
            vals = np.asarray(sb(ts), dtype=float) * np.asarray(sc(ts), dtype=float) - a * a
            best = max(best, float(np.max(np.abs(vals))))
    return best


# -- condition (C) ----------------------------------------------------------

def condition_C_status(system: ImpulsiveSystem, tolerances: Tolerances | None = None,
                       _pre: "_Quantities | None" = None) -> ConditionCStatus:
    """Branch of the alternative enabling the boundary criteria.

    C1: some impulse strength is nonzero. C2: all strengths vanish and a/b is
    not piecewise-smooth (a one-sided value or derivative mismatch of a/b at a
    breakpoint that is not an impulse time). C3: all strengths vanish, a/b is
    piecewise-smooth, and (a/b)' - c + a^2/b is not identically zero. The
    derivative tests require polynomial a and b; otherwise the status is
    undecidable.
    """
    tol = tolerances or DEFAULT_TOLERANCES
    q = _pre or _Quantities(system, tol)
    for i, imp in enumerate(system.schedule.impulses, start=1):
        if imp.beta != 0.0:
            return ConditionCStatus("C1", f"impulse {i} has nonzero strength",
                                    nonzero_beta_index=i)
    a, b = system.coeff_a, system.coeff_b
    if not (a.is_polynomial and b.is_polynomial):
        return ConditionCStatus(UNDECIDABLE, "a or b has non-polynomial segments")
    if not q.b_safe:
        return ConditionCStatus(UNDECIDABLE, "b is not bounded away from zero")

    def ratio_and_slope(t: float, side: str) -> tuple[float, float]:
        av, bv = a.eval(t, side), b.eval(t, side)
        ia = a.segment_index(t, side)
        ib = b.segment_index(t, side)
        ap = float(a.segments[ia].derivative()(t))
        bp = float(b.segments[ib].derivative()(t))
        return av / bv, (ap * bv - av * bp) / (bv * bv)

    samples = []
    for k in system.knots[1:-1]:
        samples.append((k, ratio_and_slope(k, "left"), ratio_and_slope(k, "right")))
    magnitudes = [abs(v) for _, lft, rgt in samples for v in (*lft, *rgt)]
    scale = 1.0 + (max(magnitudes) if magnitudes else 0.0)
    for k, (rl, sl), (rr, sr) in samples:
        if system.impulse_at(k) is not None:
            continue
        if abs(rl - rr) > tol.strict * scale or abs(sl - sr) > tol.strict * scale:
            return ConditionCStatus("C2", f"a/b not piecewise-smooth across t={k:.6g}")

    max_expr = 0.0
    max_inputs = 0.0
    for lo, hi, sa, sb, sc in system.segment_triples():
        ts = _chebyshev_nodes(lo, hi, 65)
        av = np.asarray(sa(ts), dtype=float)
        bv = np.asarray(sb(ts), dtype=float)
        cv = np.asarray(sc(ts), dtype=float)
        apv = np.asarray(sa.derivative()(ts), dtype=float)
        bpv = np.asarray(sb.derivative()(ts), dtype=float)
        slope = (apv * bv - av * bpv) / (bv * bv)
        expr = slope - cv + av * av / bv
        max_expr = max(max_expr, float(np.max(np.abs(expr))))
        max_inputs = max(max_inputs, float(np.max(np.abs(slope))),
                         float(np.max(np.abs(cv))), float(np.max(np.abs(av * av / bv))))
    if max_expr > tol.strict * (1.0 + max_inputs):
        return ConditionCStatus("C3", f"max |(a/b)' - c + a^2/b| = {max_expr:.3g}",
                                max_expression=max_expr)
    return ConditionCStatus("none", "expression vanishes and all strengths are zero",
                            max_expression=max_expr)


def _condition_c_condition(q: _Quantities) -> Condition:
    st = q.condition_c
    if st.branch in ("C1", "C2", "C3"):
        return Condition("condition C (C1/C2/C3)", SATISFIED, None, note=f"{st.branch}: {st.detail}")
    if st.branch == UNDECIDABLE:
        return _cond_undecidable("condition C (C1/C2/C3)", st.detail)
    return Condition("condition C (C1/C2/C3)", VIOLATED, st.max_expression, note=st.detail)


def _mean_condition(q: _Quantities, label: str, equality: bool) -> Condition:
    value = q.mean_condition_value
    if value is None:
        return _cond_undecidable(label, "a^2/b integral undecidable: b not bounded away from zero")
    if equality:
        return _cond_equality(label, value, q.equality_scale, q.tol)
    return _cond_positive(label, value, q.tol)


LBL_IMPULSE_FREE = "impulse-free"
LBL_B_NONNEG = "b(t) >= 0"
LBL_C_NONNEG = "c(t) >= 0"
LBL_BCA2_NONNEG = "b*c - a^2 >= 0"
LBL_B_POS = "b(t) > 0"
LBL_DET_INTEGRALS = "int(b)*int(c) - int(a)^2 > 0"
LBL_ROOT_SUM_PLAIN = "int|a| + sqrt(int(b)*int(c)) < 2"
LBL_BCA2_NONZERO = "b*c - a^2 not identically 0"
LBL_PROD_ALPHA = "prod(alpha_i^2) = 1"
LBL_MEAN_POS = "int(c - a^2/b) + sum(beta/alpha) > 0"
LBL_MEAN_ZERO = "int(c - a^2/b) + sum(beta/alpha) = 0"
LBL_ROOT_SUM_POS = "int|a| + sqrt(int(b)) * sqrt(int(c+) + sum((beta/alpha)+)) < 2"
LBL_EXP_PRODUCT = "exp(2*int|a|) * int(b) * (int(c+) + sum((beta/alpha)+)) < 4"
LBL_WANG_PRODUCT = "int(b) * int(c+) < 4*exp(-2*int|a|)"
LBL_RATIO_CONT = "a/b continuous on [0, T]"


def _impulse_precondition(q: _Quantities, criterion: str) -> CriterionReport | None:
    if q.impulse_free:
        return None
    cond = Condition(LBL_IMPULSE_FREE, VIOLATED, None,
                     note="criterion applies only without genuine impulses")
    return CriterionReport(criterion, (cond,), NOT_APPLICABLE)


def check_krein(system: ImpulsiveSystem, tolerances: Tolerances | None = None,
                _pre: _Quantities | None = None) -> CriterionReport:
    tol = tolerances or DEFAULT_TOLERANCES
    q = _pre or _Quantities(system, tol)
    na = _impulse_precondition(q, KREIN)
    if na is not None:
        return na
    conds = [
        _cond_pointwise_nonneg(LBL_B_NONNEG, *q.min_b, tol),
        _cond_pointwise_nonneg(LBL_C_NONNEG, *q.min_c, tol),
        _cond_pointwise_nonneg(LBL_BCA2_NONNEG, *q.min_bc_a2, tol),
        _cond_positive(LBL_DET_INTEGRALS, q.int_b * q.int_c - q.int_a ** 2, tol),
        _cond_upper(LBL_ROOT_SUM_PLAIN,
                    q.int_abs_a + math.sqrt(max(q.int_b * q.int_c, 0.0)), 2.0, tol),
    ]
    return CriterionReport(KREIN, tuple(conds), _conclude(conds))


def check_guseinov_kaymakcalan(system: ImpulsiveSystem, tolerances: Tolerances | None = None,
                               _pre: _Quantities | None = None) -> CriterionReport:
    tol = tolerances or DEFAULT_TOLERANCES
    q = _pre or _Quantities(system, tol)
    na = _impulse_precondition(q, GUSEINOV_KAYMAKCALAN)
    if na is not None:
        return na
    nz = q.max_abs_bc_a2
    nz_status = SATISFIED if nz > tol.strict * (1.0 + nz) else VIOLATED
    conds = [
        _cond_pointwise_positive(LBL_B_POS, *q.min_b, tol),
        _cond_pointwise_nonneg(LBL_C_NONNEG, *q.min_c, tol),
        _cond_pointwise_nonneg(LBL_BCA2_NONNEG, *q.min_bc_a2, tol),
        Condition(LBL_BCA2_NONZERO, nz_status, nz),
        _cond_upper(LBL_ROOT_SUM_PLAIN,
                    q.int_abs_a + math.sqrt(max(q.int_b * q.int_c, 0.0)), 2.0, tol),
    ]
    return CriterionReport(GUSEINOV_KAYMAKCALAN, tuple(conds), _conclude(conds))


def _prod_alpha_condition(q: _Quantities) -> Condition:
    return _cond_equality(LBL_PROD_ALPHA, q.prod_alpha2 - 1.0, 1.0, q.tol)


def _root_sum_value(q: _Quantities) -> float:
    inner = max(q.int_c_plus + q.sum_ratio_plus, 0.0)
    return q.int_abs_a + math.sqrt(max(q.int_b, 0.0)) * math.sqrt(inner)


def check_guseinov_zafer(system: ImpulsiveSystem, tolerances: Tolerances | None = None,
                         _pre: _Quantities | None = None) -> CriterionReport:
    tol = tolerances or DEFAULT_TOLERANCES
    q = _pre or _Quantities(system, tol)
    conds = [
        _prod_alpha_condition(q),
        _cond_pointwise_positive(LBL_B_POS, *q.min_b, tol),
        _mean_condition(q, LBL_MEAN_POS, equality=False),
        _cond_upper(LBL_ROOT_SUM_POS, _root_sum_value(q), 2.0, tol),
    ]
    return CriterionReport(GUSEINOV_ZAFER, tuple(conds), _conclude(conds))


def check_guseinov_zafer_boundary(system: ImpulsiveSystem, tolerances: Tolerances | None = None,
                                  _pre: _Quantities | None = None) -> CriterionReport:
    tol = tolerances or DEFAULT_TOLERANCES
    q = _pre or _Quantities(system, tol)
    cont_status, cont_detail = q.ratio_continuity
    cont = (Condition(LBL_RATIO_CONT, cont_status, None, note=cont_detail)
            if cont_status != UNDECIDABLE else _cond_undecidable(LBL_RATIO_CONT, cont_detail))
    conds = [
        _prod_alpha_condition(q),
        _cond_upper(LBL_ROOT_SUM_POS, _root_sum_value(q), 2.0, tol),
        cont,
        _cond_pointwise_positive(LBL_B_POS, *q.min_b, tol),
        _mean_condition(q, LBL_MEAN_ZERO, equality=True),
        _condition_c_condition(q),
    ]
    if cont_status == VIOLATED:
        return CriterionReport(GUSEINOV_ZAFER_BOUNDARY, tuple(conds), NOT_APPLICABLE)
    return CriterionReport(GUSEINOV_ZAFER_BOUNDARY, tuple(conds), _conclude(conds))


def check_wang(system: ImpulsiveSystem, tolerances: Tolerances | None = None,
               _pre: _Quantities | None = None) -> CriterionReport:
    tol = tolerances or DEFAULT_TOLERANCES
    q = _pre or _Quantities(system, tol)
    na = _impulse_precondition(q, WANG)
    if na is not None:
        return na
    bound = 4.0 * math.exp(-2.0 * q.int_abs_a)
    conds = [
        _cond_pointwise_positive(LBL_B_POS, *q.min_b, tol),
        _mean_condition(q, LBL_MEAN_POS, equality=False),
        _cond_upper(LBL_WANG_PRODUCT, q.int_b * q.int_c_plus, bound, tol),
    ]
    return CriterionReport(WANG, tuple(conds), _conclude(conds))


def _exp_product_value(q: _Quantities) -> float:
    return math.exp(2.0 * q.int_abs_a) * q.int_b * max(q.int_c_plus + q.sum_ratio_plus, 0.0)


def check_main(system: ImpulsiveSystem, tolerances: Tolerances | None = None,
               _pre: _Quantities | None = None) -> CriterionReport:
    tol = tolerances or DEFAULT_TOLERANCES
    q = _pre or _Quantities(system, tol)
    conds = [
        _prod_alpha_condition(q),
        _cond_pointwise_positive(LBL_B_POS, *q.min_b, tol),
        _mean_condition(q, LBL_MEAN_POS, equality=False),
        _cond_upper(LBL_EXP_PRODUCT, _exp_product_value(q), 4.0, tol),
    ]
    return CriterionReport(MAIN, tuple(conds), _conclude(conds))


def check_main_boundary(system: ImpulsiveSystem, tolerances: Tolerances | None = None,
                        _pre: _Quantities | None = None) -> CriterionReport:
    tol = tolerances or DEFAULT_TOLERANCES
    q = _pre or _Quantities(system, tol)
    cont_status, cont_detail = q.ratio_continuity
    cont = (Condition(LBL_RATIO_CONT, cont_status, None, note=cont_detail)
            if cont_status != UNDECIDABLE else _cond_undecidable(LBL_RATIO_CONT, cont_detail))
    conds = [
        _prod_alpha_condition(q),
        _cond_upper(LBL_EXP_PRODUCT, _exp_product_value(q), 4.0, tol),
        cont,
        _cond_pointwise_positive(LBL_B_POS, *q.min_b, tol),
        _mean_condition(q, LBL_MEAN_ZERO, equality=True),
        _condition_c_condition(q),
    ]
    if cont_status == VIOLATED:
        return CriterionReport(MAIN_BOUNDARY, tuple(conds), NOT_APPLICABLE)
    return CriterionReport(MAIN_BOUNDARY, tuple(conds), _conclude(conds))


_CHECKS = {
    KREIN: check_krein,
    GUSEINOV_KAYMAKCALAN: check_guseinov_kaymakcalan,
    GUSEINOV_ZAFER: check_guseinov_zafer,
    GUSEINOV_ZAFER_BOUNDARY: check_guseinov_zafer_boundary,
    WANG: check_wang,
    MAIN: check_main,
    MAIN_BOUNDARY: check_main_boundary,
}


def evaluate_all(system: ImpulsiveSystem,
                 tolerances: Tolerances | None = None) -> list[CriterionReport]:
    """All seven criteria, in fixed order, sharing one set of quantities."""
    tol = tolerances or DEFAULT_TOLERANCES
    q = _Quantities(system, tol)
    return [_CHECKS[name](system, tol, _pre=q) for name in CRITERION_ORDER]


def any_certified(reports) -> bool:
    return any(r.conclusion == CERTIFIED for r in reports)
