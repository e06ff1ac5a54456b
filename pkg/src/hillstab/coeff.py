"""T-periodic piecewise-defined coefficients with exact expression pieces.

A coefficient is a finite list of half-open intervals partitioning [0, T),
each carrying a closed-form expression in x.  Evaluation extends the
coefficient T-periodically to the whole line.  Norms are computed by
adaptive Simpson quadrature seeded at piece breakpoints, so two-plateau
potentials and boundary-layer witness families integrate to full accuracy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .errors import NonFiniteValue, ParseError, QuadratureFailure

#: absolute tolerance for quadrature
QUAD_TOL = 1e-10
#: evaluation budget for one quadrature call
QUAD_BUDGET = 1_000_000
#: half-width of the neighborhood excluded around a removable point
REMOVABLE_EPS = 1e-9
#: uniform samples per period used for a.e. dominance checks
DOMINANCE_SAMPLES = 1 << 14


@dataclass(frozen=True)
class DominanceReport:
    """Outcome of checking a(x) >= c almost everywhere."""

    holds_ae: bool
    strict_on_positive_measure: bool
    min_gap: float
    strict_fraction: float


@dataclass(frozen=True)
class PeriodicCoefficient:
    period: float
    pieces: tuple[tuple[float, float, ex.Expression], ...]
    removable_points: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        T = self.period
        if not (T > 0 and np.isfinite(T)):
            raise ParseError("period must be a positive finite real")
        if not self.pieces:
            raise ParseError("coefficient needs at least one piece")
        tol = 1e-9 * max(1.0, T)
        prev = 0.0
        for s, e, _ in self.pieces:
            if abs(s - prev) > tol:
                raise ParseError(f"pieces do not partition [0,T): gap/overlap at {s}")
            if e <= s:
                raise ParseError("empty piece interval")
            prev = e
        if abs(prev - T) > tol:
            raise ParseError("pieces do not cover [0,T)")

    # -- evaluation -----------------------------------------------------------

    def _reduce(self, x: float) -> float:
        y = x % self.period
        # guard against y == period from floating-point roundoff
        return 0.0 if y >= self.period else y

    def _piece_at(self, y: float):
        for s, e, piece in self.pieces:
            if s <= y < e or (e == self.period and y == e):
                return piece
        return self.pieces[-1][2]

    def eval(self, x: float) -> float:
        """T-periodic evaluation; removable points use the right-hand limit."""
        y = self._reduce(x)
        for p in self.removable_points:
            if abs(y - self._reduce(p)) <= 1e-12:
                y = self._reduce(p) + REMOVABLE_EPS
                break
        try:
            v = float(self._piece_at(y).eval(x=y))
        except (ZeroDivisionError, OverflowError) as err:
            raise NonFiniteValue(f"coefficient is not finite at x={x}") from err
        if not np.isfinite(v):
            raise NonFiniteValue(f"coefficient is not finite at x={x}")
        return v

    def __call__(self, x):
        if np.ndim(x) == 0:
            return self.eval(float(x))
        return np.array([self.eval(float(t)) for t in np.asarray(x).ravel()]
                        ).reshape(np.shape(x))

    # -- structure ------------------------------------------------------------

    def breakpoints(self) -> np.ndarray:
        """Piece boundaries in [0, T]."""
        bps = [s for s, _, _ in self.pieces] + [self.period]
        return np.array(bps)

    def is_constant_piece(self, i: int) -> float | None:
        return ex.constant_value(self.pieces[i][2])

    # -- transformations ------------------------------------------------------

    def shift(self, r: float) -> "PeriodicCoefficient":
        """The coefficient x -> a(r + x), same period."""
        T = self.period
        r = r % T
        if r < 1e-12 * T or T - r < 1e-12 * T:
            return self
        new_pieces = []
        for s, e, piece in self.pieces:
            ys = (s - r) % T
            ye = ys + (e - s)
            if ye <= T + 1e-15 * T:
                new_pieces.append((ys, min(ye, T), ex.shift_var(piece, s - ys)))
            else:
                new_pieces.append((ys, T, ex.shift_var(piece, s - ys)))
                new_pieces.append((0.0, ye - T, ex.shift_var(piece, s + T - ys)))
        new_pieces = [(s, e, p) for s, e, p in new_pieces
                      if e - s > 1e-12 * T]
        new_pieces.sort(key=lambda p: p[0])
        # snap tiny gaps from modular arithmetic
        snapped = []
        prev = 0.0
        for s, e, piece in new_pieces:
            snapped.append((prev, prev + (e - s), piece))
            prev += e - s
        if snapped:
            s0, _, p0 = snapped[-1]
            snapped[-1] = (s0, T, p0)
        removable = tuple(sorted((p - r) % T for p in self.removable_points))
        return PeriodicCoefficient(T, tuple(snapped), removable)

    def positive_part(self) -> "PeriodicCoefficient":
        """Pointwise max(a, 0)."""
        return PeriodicCoefficient(
            self.period,
            tuple((s, e, ex.Clamp(p)) for s, e, p in self.pieces),
            self.removable_points,
        )

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "pieces": [{"from": s, "to": e, "expr": str(p)}
                       for s, e, p in self.pieces],
            "removable": list(self.removable_points),
        }

    @staticmethod
    def from_dict(doc: dict) -> "PeriodicCoefficient":
        try:
            period = float(doc["period"])
            pieces = tuple(
                (float(p["from"]), float(p["to"]), ex.parse(p["expr"]))
                for p in doc["pieces"]
            )
            removable = tuple(float(v) for v in doc.get("removable", []))
        except (KeyError, TypeError, ValueError) as err:
            raise ParseError(f"bad coefficient document: {err}") from err
        return PeriodicCoefficient(period, pieces, removable)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @staticmethod
    def from_json(text: str) -> "PeriodicCoefficient":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise ParseError(f"bad JSON: {err}") from err
        return PeriodicCoefficient.from_dict(doc)


# -- constructors -------------------------------------------------------------

def constant(value: float, period: float) -> PeriodicCoefficient:
    return PeriodicCoefficient(period, ((0.0, period, ex.Const(float(value))),))


def step_function(period: float,
                  plateaus: list[tuple[float, float, float]]) -> PeriodicCoefficient:
    """Piecewise-constant coefficient from (start, end, value) plateaus."""
    pieces = tuple((s, e, ex.Const(float(v))) for s, e, v in plateaus)
    return PeriodicCoefficient(period, pieces)


def from_expression(text_or_expr, period: float) -> PeriodicCoefficient:
    e = ex.parse(text_or_expr) if isinstance(text_or_expr, str) else text_or_expr
    return PeriodicCoefficient(period, ((0.0, period, e),))


# -- quadrature ---------------------------------------------------------------

def _adaptive_simpson(f, a: float, b: float, tol: float, budget: list) -> float:
    fa, fm, fb = f(a), f((a + b) / 2), f(b)
    budget[0] -= 3
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    return _simpson_rec(f, a, b, fa, fm, fb, whole, tol, budget, 0)


def _simpson_rec(f, a, b, fa, fm, fb, whole, tol, budget, depth) -> float:
    if budget[0] <= 0:
        raise QuadratureFailure("quadrature evaluation budget exhausted")
    m = (a + b) / 2
    lm, rm = (a + m) / 2, (m + b) / 2
    flm, frm = f(lm), f(rm)
    budget[0] -= 2
    left = (m - a) / 6 * (fa + 4 * flm + fm)
    right = (b - m) / 6 * (fm + 4 * frm + fb)
    if depth > 2 and abs(left + right - whole) <= 15 * tol:
        return left + right + (left + right - whole) / 15
    if depth > 60:
        raise QuadratureFailure("quadrature did not converge (depth limit)")
    return (_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, budget, depth + 1)
            + _simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, budget, depth + 1))


def _integration_cells(a: PeriodicCoefficient, s: float, e: float) -> list:
    """Split [s, e] at piece breakpoints and removable-point neighborhoods."""
    T = a.period
    cuts = {s, e}
    k_lo = int(np.floor(s / T)) - 1
    k_hi = int(np.ceil(e / T)) + 1
    for k in range(k_lo, k_hi + 1):
        for b in a.breakpoints():
            t = b + k * T
            if s < t < e:
                cuts.add(t)
        for p in a.removable_points:
            for t in (p + k * T - REMOVABLE_EPS, p + k * T + REMOVABLE_EPS):
                if s < t < e:
                    cuts.add(t)
    pts = sorted(cuts)
    cells = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        mid = (lo + hi) / 2
        if any(abs(a._reduce(mid) - a._reduce(p)) < REMOVABLE_EPS
               for p in a.removable_points):
            continue  # measure-zero exclusion around removable points
        cells.append((lo, hi))
    return cells


def _integrate(a: PeriodicCoefficient, f, s: float, e: float,
               tol: float | None = None) -> float:
    if tol is None:
        tol = QUAD_TOL
    if e < s:
        raise ValueError("interval must satisfy s <= e")
    if e == s:
        return 0.0
    cells = _integration_cells(a, s, e)
    budget = [QUAD_BUDGET]
    per_cell_tol = tol / max(1, len(cells))
    return sum(_adaptive_simpson(f, lo, hi, per_cell_tol, budget)
               for lo, hi in cells)


def l1_distance(a: PeriodicCoefficient, c: float,
                interval: tuple[float, float]) -> float:
    """Integral of |a(x) - c| over the interval, absolute tolerance 1e-10."""
    s, e = interval
    return _integrate(a, lambda x: abs(a.eval(x) - c), s, e)


def integral(a: PeriodicCoefficient, interval: tuple[float, float]) -> float:
    """Signed integral of a over the interval."""
    s, e = interval
    return _integrate(a, a.eval, s, e)


def mean(a: PeriodicCoefficient) -> float:
    return integral(a, (0.0, a.period)) / a.period


def linf_norm(a: PeriodicCoefficient, interval: tuple[float, float],
              samples_per_piece: int = 4096) -> float:
    """Essential supremum of |a| on the interval via dense per-piece sampling."""
    s, e = interval
    if e <= s:
        raise ValueError("interval must be nonempty")
    best = 0.0
    for lo, hi in _integration_cells(a, s, e):
        xs = np.linspace(lo + 1e-12 * (hi - lo), hi - 1e-12 * (hi - lo),
                         samples_per_piece)
        vals = np.abs([a.eval(float(x)) for x in xs])
        best = max(best, float(np.max(vals)))
    return best


def dominates(a: PeriodicCoefficient, c: float) -> DominanceReport:
    """Check c <= a almost everywhere, with strictness on positive measure.

    Uniform sampling of 2^14 points per period plus piece endpoints offset
    by +-1e-9; "positive measure" means at least one uniform sample is
    strictly above c.
    """
    T = a.period
    xs = list(np.linspace(0.0, T, DOMINANCE_SAMPLES, endpoint=False))
    extra = []
    for b in a.breakpoints():
        extra.extend([b - 1e-9, b + 1e-9])
    vals_uniform = np.array([a.eval(x) - c for x in xs])
    vals_extra = np.array([a.eval(x) - c for x in extra])
    all_vals = np.concatenate([vals_uniform, vals_extra])
    min_gap = float(np.min(all_vals))
    holds_ae = bool(min_gap >= -1e-12)
    strict_fraction = float(np.mean(vals_uniform > 1e-12))
    strict = bool(holds_ae and strict_fraction >= 1.0 / DOMINANCE_SAMPLES)
    return DominanceReport(holds_ae, strict, min_gap, strict_fraction)
