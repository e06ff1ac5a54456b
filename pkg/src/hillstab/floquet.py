"""Ground-truth spectral engine for u'' + (mu + a(x)) u = 0.

Monodromy matrices are assembled piece by piece: constant pieces propagate
through exact trigonometric/hyperbolic blocks, anything else goes through a
high-order adaptive Runge-Kutta integrator.  Periodic and antiperiodic
eigenvalues are the roots of Delta(mu) = +-2 where Delta is the trace of the
monodromy matrix; double band edges show up as tangencies of Delta with +-2
and are detected by local maximization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, minimize_scalar

from . import coeff as cf
from . import expr as ex
from .errors import (DegenerateSolution, IntegrationFailure, NotAnEigenvalue,
                     RootSearchFailure)

#: tolerance on |Delta| - 2 below which mu counts as a band edge
TOL_BOUNDARY = 1e-7
#: bisection tolerance for eigenvalue refinement
TOL_ROOT = 1e-10
#: local ODE tolerance for non-constant pieces
ODE_TOL = 1e-12


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 fundamental-solution matrix mapping (u, u') at s to (u, u') at e."""

    m11: float
    m12: float
    m21: float
    m22: float

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def trace(self) -> float:
        return self.m11 + self.m22

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        a = self.as_array() @ other.as_array()
        return TransferMatrix(a[0, 0], a[0, 1], a[1, 0], a[1, 1])

    def apply(self, y: np.ndarray) -> np.ndarray:
        return self.as_array() @ y


class EigEntry(NamedTuple):
    index: int
    value: float
    multiplicity: int


@dataclass
class SpectrumSlice:
    """Ordered periodic (index from 0) and antiperiodic (from 1) eigenvalues."""

    periodic: list[EigEntry] = field(default_factory=list)
    antiperiodic: list[EigEntry] = field(default_factory=list)

    def periodic_values(self) -> np.ndarray:
        return np.array([e.value for e in self.periodic])

    def antiperiodic_values(self) -> np.ndarray:
        return np.array([e.value for e in self.antiperiodic])


@dataclass(frozen=True)
class StabilityVerdict:
    kind: str  # Stable | Unstable | BoundaryStable | BoundaryUnstable
    zone_index: int | None
    witness: tuple | None
    discriminant: float


# -- piecewise propagation ----------------------------------------------------

def _const_block(q: float, L: float) -> TransferMatrix:
    """Exact transfer matrix of u'' + q u = 0 over an interval of length L."""
    if q > 0:
        w = math.sqrt(q)
        c, s = math.cos(w * L), math.sin(w * L)
        return TransferMatrix(c, s / w, -w * s, c)
    if q < 0:
        w = math.sqrt(-q)
        ch, sh = math.cosh(w * L), math.sinh(w * L)
        return TransferMatrix(ch, sh / w, w * sh, ch)
    return TransferMatrix(1.0, L, 0.0, 1.0)


def _piece_matrix(a: cf.PeriodicCoefficient, mu: float, s: float, e: float,
                  piece: ex.Expression) -> TransferMatrix:
    cval = ex.constant_value(piece)
    if cval is not None:
        return _const_block(mu + cval, e - s)

    def rhs(x, y):
        q = mu + piece.eval(x=x)
        return [y[1], -q * y[0], y[3], -q * y[2]]

    sol = solve_ivp(rhs, (s, e), [1.0, 0.0, 0.0, 1.0], method="DOP853",
                    rtol=ODE_TOL, atol=ODE_TOL,
                    max_step=max((e - s) / 16, 1e-12))
    if not sol.success:
        raise IntegrationFailure(f"ODE solver failed on [{s}, {e}]: {sol.message}")
    y = sol.y[:, -1]
    return TransferMatrix(y[0], y[2], y[1], y[3])


def monodromy(a: cf.PeriodicCoefficient, mu: float) -> TransferMatrix:
    """Fundamental matrix of u'' + (mu + a(x)) u = 0 over one period."""
    M = TransferMatrix(1.0, 0.0, 0.0, 1.0)
    for s, e, piece in a.pieces:
        M = _piece_matrix(a, mu, s, e, piece) @ M
    return M


def discriminant(a: cf.PeriodicCoefficient, mu: float) -> float:
    """Trace of the monodromy matrix."""
    return monodromy(a, mu).trace


# -- dense trajectories -------------------------------------------------------

class _ConstSegment:
    def __init__(self, s, e, q, y0):
        self.s, self.e, self.q, self.y0 = s, e, q, np.asarray(y0, dtype=float)

    def __call__(self, x):
        B = _const_block(self.q, x - self.s)
        return B.apply(self.y0)


class _OdeSegment:
    def __init__(self, s, e, sol):
        self.s, self.e, self.sol = s, e, sol

    def __call__(self, x):
        return self.sol.sol(x)


class Trajectory:
    """Dense solution of u'' + (mu + a(x)) u = 0 on [0, T] from given data."""

    def __init__(self, a: cf.PeriodicCoefficient, mu: float, y0):
        self.a, self.mu = a, mu
        self.segments = []
        y = np.asarray(y0, dtype=float)
        for s, e, piece in a.pieces:
            cval = ex.constant_value(piece)
            if cval is not None:
                seg = _ConstSegment(s, e, mu + cval, y)
                y = seg(e)
            else:
                def rhs(x, yy, piece=piece):
                    q = mu + piece.eval(x=x)
                    return [yy[1], -q * yy[0]]

                sol = solve_ivp(rhs, (s, e), y, method="DOP853",
                                rtol=ODE_TOL, atol=ODE_TOL, dense_output=True,
                                max_step=max((e - s) / 16, 1e-12))
                if not sol.success:
                    raise IntegrationFailure(sol.message)
                seg = _OdeSegment(s, e, sol)
                y = sol.y[:, -1]
            self.segments.append(seg)
        self.y_end = y

    def state(self, x: float) -> np.ndarray:
        """(u, u') at x in [0, T]."""
        for seg in self.segments:
            if x <= seg.e + 1e-12:
                return seg(min(max(x, seg.s), seg.e))
        last = self.segments[-1]
        return last(last.e)

    def u(self, x: float) -> float:
        return float(self.state(x)[0])

    def du(self, x: float) -> float:
        return float(self.state(x)[1])

    def sample(self, n: int = 4096):
        xs = np.linspace(0.0, self.a.period, n)
        states = np.array([self.state(float(x)) for x in xs])
        return xs, states[:, 0], states[:, 1]


# -- eigenvalue search --------------------------------------------------------

def _mu_lo(a: cf.PeriodicCoefficient) -> float:
    return -cf.linf_norm(a, (0.0, a.period), samples_per_piece=256) - 1.0


def _polish_tangency(g, m: float, scale: float) -> float:
    """Refine a tangential double root by locating the zero of g'."""
    h = 1e-6 * max(1.0, scale)

    def dg(mu):
        return (g(mu + h) - g(mu - h)) / (2 * h)

    lo, hi = m - 20 * h, m + 20 * h
    try:
        if dg(lo) > 0 > dg(hi):
            return brentq(dg, lo, hi, xtol=TOL_ROOT)
        if dg(lo) < 0 < dg(hi):
            return brentq(dg, lo, hi, xtol=TOL_ROOT)
    except ValueError:
        pass
    return m


def _march_roots(g, mu_start: float, gap_scale, n_roots_needed: int,
                 first_is_simple_downcross: bool):
    """Collect roots of g along increasing mu.

    g is <= 0 between band-edge pairs and >= 0 inside them; simple edges are
    sign changes, coincident pairs are interior local maxima touching zero.
    When first_is_simple_downcross, the march starts in a g > 0 region whose
    single exit crossing is the lowest eigenvalue.
    """
    roots = []
    mu = mu_start
    g_prev = g(mu)
    if first_is_simple_downcross:
        # lowest eigenvalue: g goes + -> -
        guard = 0
        while g_prev <= 0:
            mu -= gap_scale(mu)
            g_prev = g(mu)
            guard += 1
            if guard > 200:
                raise RootSearchFailure("could not bracket the lowest eigenvalue")
        while True:
            step = gap_scale(mu) / 64
            mu_next = mu + step
            g_next = g(mu_next)
            if g_prev > 0 >= g_next:
                roots.append((brentq(g, mu, mu_next, xtol=TOL_ROOT), 1))
                mu, g_prev = mu_next, g_next
                break
            mu, g_prev = mu_next, g_next
            if mu > mu_start + 10000 * gap_scale(mu_start):
                raise RootSearchFailure("lowest eigenvalue not found")
    window = [mu]
    vals = [g_prev]
    while len(roots) < n_roots_needed:
        step = gap_scale(mu) / 64
        mu_next = mu + step
        g_next = g(mu_next)
        if g_prev <= 0 < g_next:
            r1 = brentq(g, mu, mu_next, xtol=TOL_ROOT)
            # follow until the down-crossing closes the pair
            m2, gp2 = mu_next, g_next
            while True:
                st2 = gap_scale(m2) / 64
                m3 = m2 + st2
                g3 = g(m3)
                if gp2 > 0 >= g3:
                    r2 = brentq(g, m2, m3, xtol=TOL_ROOT)
                    break
                m2, gp2 = m3, g3
            roots.append((r1, 1))
            roots.append((r2, 1))
            mu, g_prev = m3, g3
            window, vals = [mu], [g_prev]
            continue
        window.append(mu_next)
        vals.append(g_next)
        # interior local maximum of a non-positive stretch: tangency candidate
        if (len(vals) >= 3 and vals[-2] > vals[-3] and vals[-2] >= vals[-1]
                and vals[-2] > -1.0):
            lo, hi = window[-3], window[-1]
            res = minimize_scalar(lambda m: -g(m), bounds=(lo, hi),
                                  method="bounded",
                                  options={"xatol": TOL_ROOT / 10})
            gmax = -res.fun
            mmax = res.x
            if gmax > 1e-12:
                r1 = brentq(g, lo, mmax, xtol=TOL_ROOT)
                r2 = brentq(g, mmax, hi, xtol=TOL_ROOT)
                roots.append((r1, 1))
                roots.append((r2, 1))
                mu, g_prev = mu_next, g_next
                window, vals = [mu], [g_prev]
                continue
            if gmax > -TOL_BOUNDARY:
                mmax = _polish_tangency(g, mmax, gap_scale(mmax))
                roots.append((mmax, 2))
                roots.append((mmax, 2))
                mu, g_prev = mu_next, g_next
                window, vals = [mu], [g_prev]
                continue
        mu, g_prev = mu_next, g_next
        if len(window) > 100000:
            raise RootSearchFailure("eigenvalue scan exhausted")
    return roots


def periodic_eigenvalues(a: cf.PeriodicCoefficient, count: int) -> SpectrumSlice:
    """First `count` periodic eigenvalues (roots of Delta = 2), with multiplicity."""
    if count < 1:
        raise ValueError("count must be >= 1")
    T = a.period
    abar = cf.mean(a)

    def g(mu):
        return discriminant(a, mu) - 2.0

    def gap_scale(mu):
        # local spacing of the unperturbed band edges near mu
        j = max(1.0, T * math.sqrt(max(mu + abar, 1.0)) / math.pi)
        return max((2 * j + 1) * math.pi ** 2 / T ** 2, 0.5 * math.pi ** 2 / T ** 2)

    roots = _march_roots(g, _mu_lo(a), gap_scale, count,
                         first_is_simple_downcross=True)
    entries = [EigEntry(i, v, m) for i, (v, m) in enumerate(roots[:count])]
    return SpectrumSlice(periodic=entries)


def antiperiodic_eigenvalues(a: cf.PeriodicCoefficient, count: int) -> SpectrumSlice:
    """First `count` antiperiodic eigenvalues (roots of Delta = -2), indexed from 1."""
    if count < 1:
        raise ValueError("count must be >= 1")
    T = a.period
    abar = cf.mean(a)

    def g(mu):
        return -(discriminant(a, mu) + 2.0)

    def gap_scale(mu):
        j = max(1.0, T * math.sqrt(max(mu + abar, 1.0)) / math.pi)
        return max((2 * j + 1) * math.pi ** 2 / T ** 2, 0.5 * math.pi ** 2 / T ** 2)

    roots = _march_roots(g, _mu_lo(a), gap_scale, count,
                         first_is_simple_downcross=False)
    entries = [EigEntry(i + 1, v, m) for i, (v, m) in enumerate(roots[:count])]
    return SpectrumSlice(antiperiodic=entries)


def spectrum(a: cf.PeriodicCoefficient, n_periodic: int,
             n_antiperiodic: int) -> SpectrumSlice:
    s = SpectrumSlice()
    s.periodic = periodic_eigenvalues(a, n_periodic).periodic
    s.antiperiodic = antiperiodic_eigenvalues(a, n_antiperiodic).antiperiodic
    return s


def check_interlacing(s: SpectrumSlice, slack: float = 1e-9):
    """Verify lam0 < alam1 <= alam2 < lam1 <= lam2 < alam3 <= ...

    Returns (ok, first_violation_description).
    """
    lam = s.periodic_values()
    ala = s.antiperiodic_values()
    # merged sequence with strictness flags between consecutive entries
    seq = []
    i = j = 0
    # pattern: lam0, alam1, alam2, lam1, lam2, alam3, alam4, lam3, ...
    take_anti = False
    seq.append(("lam", 0))
    i = 1
    while i < len(lam) or j < len(ala):
        if take_anti is False:
            if j + 1 < len(ala):
                seq.append(("anti", j))
                seq.append(("anti", j + 1))
                j += 2
            elif j < len(ala):
                seq.append(("anti", j))
                j += 1
            else:
                break
            take_anti = True
        else:
            if i + 1 < len(lam):
                seq.append(("lam", i))
                seq.append(("lam", i + 1))
                i += 2
            elif i < len(lam):
                seq.append(("lam", i))
                i += 1
            else:
                break
            take_anti = False

    def value(tag):
        kind, k = tag
        return lam[k] if kind == "lam" else ala[k]

    for k in range(len(seq) - 1):
        v0, v1 = value(seq[k]), value(seq[k + 1])
        same_kind_pair = seq[k][0] == seq[k + 1][0]
        if same_kind_pair:
            if v1 < v0 - slack:
                return False, f"ordering violated between {seq[k]} and {seq[k + 1]}"
        else:
            if v1 <= v0 - slack:
                return False, f"strict ordering violated between {seq[k]} and {seq[k + 1]}"
    return True, None


def classify(a: cf.PeriodicCoefficient, mu: float,
             spec: SpectrumSlice | None = None) -> StabilityVerdict:
    """Stability verdict at mu from the discriminant, with boundary resolution.

    |Delta| < 2 - tol is Stable, |Delta| > 2 + tol Unstable; within tolerance
    of a band edge the verdict depends on whether the nearest eigenvalue pair
    coincides.  The zone index is filled in when a spectrum is available.
    """
    d = discriminant(a, mu)
    if abs(d) < 2.0 - TOL_BOUNDARY:
        zone = None
        witness = None
        if spec is not None:
            below = int(np.sum(spec.periodic_values() < mu - TOL_BOUNDARY)) + \
                int(np.sum(spec.antiperiodic_values() < mu - TOL_BOUNDARY))
            zone = below // 2
        return StabilityVerdict("Stable", zone, witness, d)
    if abs(d) > 2.0 + TOL_BOUNDARY:
        return StabilityVerdict("Unstable", None, None, d)
    # band edge: locate the nearest eigenvalue pair
    if spec is None:
        if d > 0:
            spec = periodic_eigenvalues(a, 9)
        else:
            spec = antiperiodic_eigenvalues(a, 8)
    vals = spec.periodic_values() if d > 0 else spec.antiperiodic_values()
    entries = spec.periodic if d > 0 else spec.antiperiodic
    if len(vals) == 0:
        return StabilityVerdict("BoundaryUnstable", None, None, d)
    k = int(np.argmin(np.abs(vals - mu)))
    if d > 0 and entries[k].index == 0:
        # mu = lam0: in the (-inf, lam0] instability range
        return StabilityVerdict("BoundaryUnstable", None, (entries[k],), d)
    # pair partner: indices (2j-1, 2j) for periodic, (2j-1, 2j) from 1 for anti
    idx = entries[k].index
    if d > 0:
        partner_idx = idx + 1 if idx % 2 == 1 else idx - 1
    else:
        partner_idx = idx + 1 if idx % 2 == 1 else idx - 1
    partner = next((e for e in entries if e.index == partner_idx), None)
    if partner is None:
        return StabilityVerdict("BoundaryUnstable", None, (entries[k],), d)
    if abs(partner.value - entries[k].value) <= TOL_BOUNDARY:
        return StabilityVerdict("BoundaryStable", None, (entries[k], partner), d)
    return StabilityVerdict("BoundaryUnstable", None, (entries[k], partner), d)


# -- eigenfunctions -----------------------------------------------------------

def eigenfunction(a: cf.PeriodicCoefficient, mu: float, bc: str,
                  n_samples: int = 4096):
    """Nontrivial solution at an eigenvalue, as a dense Trajectory.

    bc is "periodic" or "antiperiodic".  The initial data is the kernel
    direction of (M -+ I) from the monodromy matrix M.
    """
    sign = 1.0 if bc == "periodic" else -1.0
    M = monodromy(a, mu).as_array()
    A = M - sign * np.eye(2)
    _, svals, vt = np.linalg.svd(A)
    v = vt[-1]
    if np.linalg.norm(A @ v) > 1e-4:
        raise NotAnEigenvalue(
            f"mu={mu} is not a {bc} eigenvalue (defect {np.linalg.norm(A @ v):.2e})")
    return Trajectory(a, mu, v)
