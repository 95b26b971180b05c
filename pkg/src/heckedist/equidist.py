"""Equidistribution experiments on the supersingular locus.

Functions on the locus are real vectors; the invariant measure is the
automorphism mass, and the norm in which every Hecke matrix is
self-adjoint weights coordinate j by 1/w_j.  The normalized operator
T_m/deg contracts the orthogonal complement of the constants by exactly
max |nontrivial eigenvalue| / deg, which Deligne's bound caps at
prod 2 sqrt(l)/(l+1); the experiments here measure that contraction and
fit the decay rate of the error against m.

Matrices are exact integers; vectors and eigenvalues are double
precision with the tolerances stated on each operation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .number_field import factor_squarefree
from .supersingular import HeckeMatrix, ModularPolynomial, SupersingularLocus, hecke_matrix

IDENTITY_TOL = 1e-12
INEQUALITY_SLACK = 1e-9
SYMMETRIZATION_TOL = 1e-10
ERROR_FLOOR = 1e-14


@dataclass(frozen=True)
class StratumFunction:
    """Real-valued function on the locus points."""

    locus: SupersingularLocus
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.locus.size:
            raise ValueError("vector length does not match the locus")

    @classmethod
    def from_values(cls, locus, values) -> "StratumFunction":
        return cls(locus, np.asarray(values, dtype=float))

    @classmethod
    def indicator(cls, locus, index: int = 0) -> "StratumFunction":
        v = np.zeros(locus.size)
        v[index] = 1.0
        return cls(locus, v)

    @classmethod
    def random_unit(cls, locus, rng: np.random.Generator) -> "StratumFunction":
        v = rng.standard_normal(locus.size)
        return cls(locus, v / np.linalg.norm(v))


def component_labels(locus: SupersingularLocus) -> np.ndarray:
    """Connected-component label of each point.  Level 1 has a single
    component, so this is constant; the averaging below is fibre-wise over
    these labels so finer component structure would slot in unchanged."""
    return np.zeros(locus.size, dtype=np.int64)


def _mass_vector(locus: SupersingularLocus) -> np.ndarray:
    return np.array([float(m) for m in locus.masses])


def _weight_mu(locus: SupersingularLocus) -> np.ndarray:
    return 1.0 / np.asarray(locus.weights, dtype=float)


def mass_average(locus: SupersingularLocus, v: StratumFunction) -> StratumFunction:
    """Projection onto functions constant along each component, averaging
    against the automorphism mass; idempotent."""
    mass = _mass_vector(locus)
    labels = component_labels(locus)
    out = np.empty(locus.size)
    for lab in np.unique(labels):
        sel = labels == lab
        out[sel] = float(mass[sel] @ v.values[sel]) / float(mass[sel].sum())
    return StratumFunction(locus, out)


def apply_normalized(locus: SupersingularLocus, mat: HeckeMatrix, v: StratumFunction) -> StratumFunction:
    """(T_m v) / deg(T_m); fixes mass_average."""
    if mat.entries.shape != (locus.size, locus.size):
        raise ValueError("matrix dimension does not match the locus")
    return StratumFunction(locus, (mat.entries @ v.values) / mat.degree)


def error_norms(locus: SupersingularLocus, v: StratumFunction, w: StratumFunction) -> tuple[float, float]:
    """(sup norm, weighted-2 norm) of v - w; the weighted norm uses
    mu_j = 1/w_j, the inner product making the Hecke matrices self-adjoint."""
    if len(v.values) != len(w.values):
        raise ValueError("length mismatch")
    diff = v.values - w.values
    sup = float(np.max(np.abs(diff))) if len(diff) else 0.0
    w2 = math.sqrt(float(_weight_mu(locus) @ (diff * diff)))
    return sup, w2


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues of the symmetrized prime-level Hecke matrix."""

    p: int
    ell: int
    eigenvalues: tuple[float, ...]  # descending
    trivial: float  # ell + 1
    max_nontrivial: float | None
    bound: float  # 2 sqrt(ell)
    margin: float  # bound - max_nontrivial (inf for a 1x1 locus)

    def to_payload(self) -> dict:
        return {
            "schema": "spectrum-report",
            "p": str(self.p),
            "ell": str(self.ell),
            "trivial": repr(self.trivial),
            "maxNontrivial": None if self.max_nontrivial is None else repr(self.max_nontrivial),
            "bound": repr(self.bound),
            "margin": repr(self.margin),
            "eigenvalues": [repr(x) for x in self.eigenvalues],
        }


def spectrum(locus: SupersingularLocus, mat: HeckeMatrix) -> SpectrumReport:
    """Eigenvalues of D T D^{-1} with D = diag(w^{-1/2}), which is symmetric
    by the weighted-symmetry invariant; residual above 1e-10 means an
    upstream bug.  The top eigenvalue must be ell + 1 to 1e-9."""
    if len(mat.levels) != 1:
        raise ValueError("spectrum is defined for prime-level matrices")
    ell = mat.levels[0]
    d = np.asarray(locus.weights, dtype=float) ** -0.5
    sym = d[:, None] * mat.entries * (1.0 / d)[None, :]
    resid = float(np.max(np.abs(sym - sym.T)))
    if resid > SYMMETRIZATION_TOL * max(1.0, mat.degree):
        raise ArithmeticError(f"symmetrization residual {resid} too large")
    eig = np.linalg.eigvalsh((sym + sym.T) / 2.0)[::-1]
    trivial = ell + 1.0
    if abs(eig[0] - trivial) > 1e-9 * trivial:
        raise ArithmeticError(f"top eigenvalue {eig[0]} is not {trivial}")
    rest = eig[1:]
    max_nt = float(np.max(np.abs(rest))) if len(rest) else None
    bound = 2.0 * math.sqrt(ell)
    margin = math.inf if max_nt is None else bound - max_nt
    return SpectrumReport(locus.p, ell, tuple(float(x) for x in eig), trivial, max_nt, bound, margin)


@dataclass(frozen=True)
class ConvergenceRow:
    m: int
    degree: int
    error_sup: float
    error_weighted2: float
    bound: float  # N(T_m)/deg(T_m) = prod 2 sqrt(l)/(l+1)

    def to_payload(self) -> dict:
        return {
            "m": str(self.m),
            "degree": str(self.degree),
            "errorSup": repr(self.error_sup),
            "errorWeighted2": repr(self.error_weighted2),
            "bound": repr(self.bound),
        }


@dataclass(frozen=True)
class ConvergenceReport:
    p: int
    initial: str
    rows: tuple[ConvergenceRow, ...]
    slope: float | None
    intercept: float | None
    inequality_ok: bool
    degenerate: bool
    failures: tuple[int, ...] = ()
    fit_kind: str = "log-log"  # power experiment fits log error against the step

    def to_payload(self) -> dict:
        return {
            "schema": "convergence-report",
            "p": str(self.p),
            "initial": self.initial,
            "slope": None if self.slope is None else repr(self.slope),
            "intercept": None if self.intercept is None else repr(self.intercept),
            "inequalityOk": self.inequality_ok,
            "degenerate": self.degenerate,
            "failures": [str(m) for m in self.failures],
            "fitKind": self.fit_kind,
            "rows": [r.to_payload() for r in self.rows],
        }


def _ols(xs: list[float], ys: list[float]) -> tuple[float, float]:
    n = len(xs)
    xb, yb = sum(xs) / n, sum(ys) / n
    sxx = sum((x - xb) ** 2 for x in xs)
    if sxx == 0:
        raise ValueError("degenerate abscissae")
    slope = sum((x - xb) * (y - yb) for x, y in zip(xs, ys)) / sxx
    return slope, yb - slope * xb


def fit_rate(samples: list[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares slope/intercept of log(error) against log(x); samples
    with error <= 0 are dropped, at least 3 must remain."""
    usable = [(x, e) for x, e in samples if e > 0]
    if len(usable) < 3:
        raise ValueError("need at least 3 samples with positive error")
    return _ols([math.log(x) for x, _ in usable], [math.log(e) for _, e in usable])


def squarefree_moduli(primes: list[int]) -> list[int]:
    """All products of nonempty subsets of the given primes, ascending."""
    out = []
    for k in range(1, len(primes) + 1):
        for combo in itertools.combinations(primes, k):
            out.append(math.prod(combo))
    return sorted(out)


def prime_matrices(
    locus: SupersingularLocus,
    primes: list[int],
    library: dict[int, ModularPolynomial],
    cache: dict[int, HeckeMatrix] | None = None,
) -> dict[int, HeckeMatrix]:
    mats = dict(cache or {})
    for ell in primes:
        if ell not in mats:
            mats[ell] = hecke_matrix(locus, library[ell])
    return mats


def run_squarefree_experiment(
    locus: SupersingularLocus,
    primes: list[int],
    v: StratumFunction,
    library: dict[int, ModularPolynomial],
    initial: str = "custom",
    matrices: dict[int, HeckeMatrix] | None = None,
) -> ConvergenceReport:
    """Measure the deviation of T_m v / deg from the mass average over every
    squarefree m supported on `primes`, check each against the spectral
    bound prod 2 sqrt(l)/(l+1) (relative slack 1e-9, non-fatal), and fit the
    sup-norm decay rate."""
    p = locus.p
    if p in primes:
        raise ValueError("p must not occur in the prime set")
    mats = prime_matrices(locus, primes, library, matrices)
    avg = mass_average(locus, v)
    _, base_w2 = error_norms(locus, v, avg)
    degenerate = base_w2 <= ERROR_FLOOR

    rows: list[ConvergenceRow] = []
    failures: list[int] = []
    products: dict[tuple[int, ...], np.ndarray] = {}
    for m in squarefree_moduli(primes):
        combo = tuple(factor_squarefree(m))
        prev, mat = combo[:-1], mats[combo[-1]].entries
        acc = products[prev] @ mat if prev else mat
        products[combo] = acc
        degree = math.prod(ell + 1 for ell in combo)
        w = StratumFunction(locus, (acc @ v.values) / degree)
        err_sup, err_w2 = error_norms(locus, w, avg)
        bound = math.prod(2.0 * math.sqrt(ell) / (ell + 1) for ell in combo)
        if err_w2 > bound * base_w2 * (1.0 + INEQUALITY_SLACK):
            failures.append(m)
        rows.append(ConvergenceRow(m, degree, err_sup, err_w2, bound))

    slope = intercept = None
    if not degenerate:
        try:
            slope, intercept = fit_rate([(r.m, r.error_sup) for r in rows])
        except ValueError:
            pass
    return ConvergenceReport(
        p, initial, tuple(rows), slope, intercept, not failures, degenerate, tuple(failures)
    )


def run_power_experiment(
    locus: SupersingularLocus,
    ell: int,
    v: StratumFunction,
    count: int,
    library: dict[int, ModularPolynomial],
    initial: str = "custom",
    matrices: dict[int, HeckeMatrix] | None = None,
) -> ConvergenceReport:
    """Iterate w <- T_ell w / (ell+1) for `count` steps.  Step t must sit
    below (2 sqrt(ell)/(ell+1))^t times the initial deviation; the decay
    slope is fitted as log(error) against the step, ignoring steps below
    the 1e-14 relative floor."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if ell == locus.p:
        raise ValueError("Hecke level must differ from the characteristic")
    mats = prime_matrices(locus, [ell], library, matrices)
    t_ell = mats[ell]
    avg = mass_average(locus, v)
    _, base_w2 = error_norms(locus, v, avg)
    degenerate = base_w2 <= ERROR_FLOOR
    ratio = 2.0 * math.sqrt(ell) / (ell + 1)

    rows: list[ConvergenceRow] = []
    failures: list[int] = []
    w = v
    cumulative = 1.0
    degree = 1
    for step in range(1, count + 1):
        w = apply_normalized(locus, t_ell, w)
        degree *= ell + 1
        cumulative *= ratio
        err_sup, err_w2 = error_norms(locus, w, avg)
        if err_w2 > cumulative * base_w2 * (1.0 + INEQUALITY_SLACK) and err_w2 > ERROR_FLOOR * base_w2:
            failures.append(step)
        rows.append(ConvergenceRow(step, degree, err_sup, err_w2, cumulative))

    slope = intercept = None
    if not degenerate:
        pts = [
            (float(r.m), math.log(r.error_weighted2))
            for r in rows
            if r.error_weighted2 > ERROR_FLOOR * base_w2
        ]
        if len(pts) >= 3:
            slope, intercept = _ols([x for x, _ in pts], [y for _, y in pts])
    return ConvergenceReport(
        locus.p, initial, tuple(rows), slope, intercept, not failures, degenerate,
        tuple(failures), fit_kind="semilog",
    )


def contraction_factors(report: ConvergenceReport, base_error: float) -> list[tuple[int, float]]:
    """Per-step weighted-2 contraction factors of a power experiment,
    restricted to steps whose predecessor sits above the error floor."""
    out = []
    prev = base_error
    for row in report.rows:
        if prev > ERROR_FLOOR * max(base_error, 1.0):
            out.append((row.m, row.error_weighted2 / prev))
        prev = row.error_weighted2
    return out
