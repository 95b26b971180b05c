"""The supersingular locus at level 1 and its Hecke matrices.

Enumeration goes through the Legendre-parameter route: the roots of the
degree-(p-1)/2 Hasse polynomial (Deuring's criterion) all lie in F_{p^2},
and j = 256 (L^2 - L + 1)^3 / (L^2 (L - 1)^2) maps them onto the
supersingular j-invariants.  Points carry automorphism weights
w in {1, 2, 3} (w = #Aut/2: 3 at j = 0, 2 at j = 1728) and masses
1/(2w); the Eichler-Deuring mass formula sum(mass) = (p-1)/24 is enforced
at construction and doubles as a correctness certificate.

The ell-th Hecke matrix has entries M[i][j] = multiplicity of j_j among
the roots of Phi_ell(j_i, Y), where Phi_ell is the classical modular
polynomial ingested from a data file and validated against the Kronecker
congruence Phi_ell(X, Y) = (X^ell - Y)(X - Y^ell) mod ell.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .ffpoly import DensePoly, FiniteFieldSpec, is_prime, roots_in_field

DEFAULT_LEVELS = (2, 3, 5, 7, 11, 13)

# vectorized int64 paths are exact only while p^2 (and ns * residues) stay
# far from 2^63; desk-scale primes are orders of magnitude below this
_VECTOR_P_LIMIT = 1 << 20


class MassFormulaError(RuntimeError):
    """The Eichler-Deuring mass check failed; signals an implementation bug."""


class ModularPolynomialError(ValueError):
    """Malformed or corrupt modular polynomial data."""


class MissingDataError(FileNotFoundError):
    """A required modular polynomial data file is absent."""


@dataclass(frozen=True)
class SupersingularLocus:
    """Supersingular j-invariants of characteristic p with weights."""

    p: int
    field: FiniteFieldSpec  # F_{p^2} in the fixed basis
    points: tuple[tuple[int, int], ...]  # sorted by coordinate pair
    weights: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def masses(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(1, 2 * w) for w in self.weights)

    def index_of(self, point: tuple[int, int]) -> int:
        return self.points.index(point)

    def __repr__(self) -> str:
        return f"SupersingularLocus(p={self.p}, size={self.size})"


def hasse_polynomial(p: int) -> DensePoly:
    """sum_k C((p-1)/2, k)^2 L^k over F_p; its roots are the supersingular
    Legendre parameters (Deuring)."""
    if p < 5 or not is_prime(p):
        raise ValueError("p must be a prime >= 5")
    h = (p - 1) // 2
    field = FiniteFieldSpec.prime(p)
    coeffs = [0] * (h + 1)
    b = 1
    coeffs[0] = 1
    for k in range(1, h + 1):
        b = b * (h - k + 1) % p * pow(k, p - 2, p) % p
        coeffs[k] = b * b % p
    return DensePoly(field, tuple(coeffs))


def enumerate_locus(p: int, seed: int | None = None) -> SupersingularLocus:
    """Build the locus for p >= 5; fails hard if the mass formula breaks."""
    hasse = hasse_polynomial(p)
    f2 = FiniteFieldSpec.quadratic(p)
    lams = roots_in_field(hasse, f2, seed=seed)
    if len(lams) != hasse.degree():
        raise MassFormulaError(
            f"p={p}: found {len(lams)} Legendre roots in F_p^2, expected {hasse.degree()}"
        )

    counts: dict[tuple[int, int], int] = {}
    for lam in lams:
        den = f2.mul(lam, f2.sub(lam, f2.one()))
        if f2.is_zero(den):
            raise MassFormulaError(f"p={p}: degenerate Legendre parameter {lam}")
        num = f2.elt_pow(f2.add(f2.sub(f2.mul(lam, lam), lam), f2.one()), 3)
        j = f2.mul(f2.mul(num, f2.inv(f2.mul(den, den))), f2.coerce(256))
        counts[j] = counts.get(j, 0) + 1

    j_zero = (0, 0)
    j_1728 = (1728 % p, 0)
    points = sorted(counts)
    weights = []
    for j in points:
        w = 3 if j == j_zero else 2 if j == j_1728 else 1
        if counts[j] != 6 // w:
            raise MassFormulaError(
                f"p={p}: j={j} has {counts[j]} Legendre preimages, expected {6 // w}"
            )
        weights.append(w)

    mass = sum(Fraction(1, 2 * w) for w in weights)
    if mass != Fraction(p - 1, 24):
        raise MassFormulaError(f"p={p}: mass {mass} != (p-1)/24 = {Fraction(p - 1, 24)}")
    return SupersingularLocus(p, f2, tuple(points), tuple(weights))


# ---------------------------------------------------------------------------
# modular polynomials


@dataclass(frozen=True, eq=False)
class ModularPolynomial:
    """Symmetric Phi_ell(X, Y); coefficients stored once per pair i >= j."""

    level: int
    coeffs: dict  # {(i, j): int} with i >= j

    def coefficient(self, i: int, j: int) -> int:
        if i < j:
            i, j = j, i
        return self.coeffs.get((i, j), 0)

    def validate(self) -> None:
        ell = self.level
        if not is_prime(ell):
            raise ModularPolynomialError(f"level {ell} is not prime")
        deg = max(i for i, _ in self.coeffs)
        if deg != ell + 1:
            raise ModularPolynomialError(f"level {ell}: degree {deg} != {ell + 1}")
        if self.coefficient(ell + 1, 0) != 1:
            raise ModularPolynomialError(f"level {ell}: X^{ell + 1} coefficient must be 1")
        # Kronecker congruence: Phi = (X^ell - Y)(X - Y^ell) mod ell
        expected = {(ell + 1, 0): 1 % ell, (ell, ell): (-1) % ell, (1, 1): (-1) % ell}
        for key, c in self.coeffs.items():
            if c % ell != expected.get(key, 0):
                raise ModularPolynomialError(
                    f"level {ell}: Kronecker congruence fails at X^{key[0]} Y^{key[1]}"
                )
        for key, want in expected.items():
            if want != 0 and self.coefficient(*key) % ell != want:
                raise ModularPolynomialError(
                    f"level {ell}: Kronecker congruence fails at X^{key[0]} Y^{key[1]}"
                )

    def specialized_row(self, x, field: FiniteFieldSpec) -> list:
        """Coefficients of Phi(x, Y) over `field`, ascending in Y."""
        d = self.level + 1
        x = field.coerce(x)
        powers = [field.one()]
        for _ in range(d):
            powers.append(field.mul(powers[-1], x))
        out = []
        for v in range(d + 1):
            acc = field.zero()
            for u in range(d + 1):
                c = self.coefficient(u, v)
                if c:
                    acc = field.add(acc, field.mul(field.coerce(c), powers[u]))
            out.append(acc)
        return out


def load_modular_polynomial(source) -> ModularPolynomial:
    """Parse and validate one data file (header `MODPOLY ell=<l>`, then
    `i j coefficient` lines with i >= j; `#` comments allowed)."""
    path = Path(source)
    try:
        text = path.read_text()
    except FileNotFoundError as exc:
        raise MissingDataError(str(exc)) from exc
    level = None
    coeffs: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if level is None:
            if not line.startswith("MODPOLY"):
                raise ModularPolynomialError(f"{path}:{lineno}: missing MODPOLY header")
            try:
                level = int(line.split("ell=", 1)[1])
            except (IndexError, ValueError) as exc:
                raise ModularPolynomialError(f"{path}:{lineno}: bad header {line!r}") from exc
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ModularPolynomialError(f"{path}:{lineno}: expected `i j coefficient`")
        i, j, c = int(parts[0]), int(parts[1]), int(parts[2])
        if i < j or j < 0:
            raise ModularPolynomialError(f"{path}:{lineno}: indices must satisfy i >= j >= 0")
        if (i, j) in coeffs:
            raise ModularPolynomialError(f"{path}:{lineno}: duplicate entry for ({i}, {j})")
        coeffs[(i, j)] = c
    if level is None:
        raise ModularPolynomialError(f"{path}: empty file")
    phi = ModularPolynomial(level, coeffs)
    phi.validate()
    return phi


def packaged_data_dir() -> Path:
    return Path(resources.files("heckedist") / "data")


def load_library(levels=DEFAULT_LEVELS, data_dir=None) -> dict[int, ModularPolynomial]:
    """Load Phi_ell for the given prime levels from data_dir (default:
    the files shipped with the package)."""
    base = Path(data_dir) if data_dir is not None else packaged_data_dir()
    lib = {}
    for ell in levels:
        path = base / f"modpoly_ell{ell}.txt"
        if not path.exists():
            raise MissingDataError(f"no modular polynomial data for level {ell} ({path})")
        phi = load_modular_polynomial(path)
        if phi.level != ell:
            raise ModularPolynomialError(f"{path}: header level {phi.level} != {ell}")
        lib[ell] = phi
    return lib


# ---------------------------------------------------------------------------
# Hecke matrices


@dataclass(frozen=True, eq=False)
class HeckeMatrix:
    """Integer matrix of the degree-m Hecke correspondence on the locus."""

    levels: tuple[int, ...]
    degree: int  # row sum, prod(ell + 1)
    entries: np.ndarray

    @property
    def m(self) -> int:
        out = 1
        for ell in self.levels:
            out *= ell
        return out


def _weighted_symmetry_ok(locus: SupersingularLocus, mat: np.ndarray) -> bool:
    w = np.asarray(locus.weights, dtype=np.int64)
    return bool(np.array_equal(mat * w[None, :], (mat * w[None, :]).T))


def _hecke_rows_reference(locus: SupersingularLocus, phi: ModularPolynomial) -> np.ndarray:
    """Entry (i, k): multiplicity of j_k among the roots of Phi(j_i, Y)."""
    f2 = locus.field
    n = locus.size
    index = {pt: k for k, pt in enumerate(locus.points)}
    mat = np.zeros((n, n), dtype=np.int64)
    for i, j_i in enumerate(locus.points):
        row_poly = DensePoly.make(f2, phi.specialized_row(j_i, f2))
        for root in roots_in_field(row_poly, f2):
            k = index.get(root)
            if k is None:
                raise MassFormulaError(
                    f"p={locus.p}, ell={phi.level}: root {root} of row {i} "
                    "is outside the supersingular locus"
                )
            mat[i, k] += 1
    return mat


def _hecke_rows_vectorized(locus: SupersingularLocus, phi: ModularPolynomial) -> np.ndarray:
    """Same matrix via simultaneous evaluation of Phi(j_i, j_k) over the
    locus grid; multiplicities by synthetic division at the hits."""
    p = locus.p
    ns = locus.field.ns
    d = phi.level + 1
    pts_a = np.array([a for a, _ in locus.points], dtype=np.int64)
    pts_b = np.array([b for _, b in locus.points], dtype=np.int64)
    n = locus.size

    # powers of j_i, then Y-coefficient columns C[v][i] = sum_u c_uv j_i^u
    pow_a = [np.ones(n, dtype=np.int64)]
    pow_b = [np.zeros(n, dtype=np.int64)]
    for _ in range(d):
        a0, b0 = pow_a[-1], pow_b[-1]
        pow_a.append((a0 * pts_a + ns * (b0 * pts_b % p)) % p)
        pow_b.append((a0 * pts_b + b0 * pts_a) % p)
    coef_a = np.zeros((d + 1, n), dtype=np.int64)
    coef_b = np.zeros((d + 1, n), dtype=np.int64)
    for v in range(d + 1):
        acc_a = np.zeros(n, dtype=np.int64)
        acc_b = np.zeros(n, dtype=np.int64)
        for u in range(d + 1):
            c = phi.coefficient(u, v) % p
            if c:
                acc_a = (acc_a + c * pow_a[u]) % p
                acc_b = (acc_b + c * pow_b[u]) % p
        coef_a[v] = acc_a
        coef_b[v] = acc_b

    # Horner in Y across the whole grid: R[i, k] = Phi(j_i, j_k)
    ra = np.tile(coef_a[d][:, None], (1, n))
    rb = np.tile(coef_b[d][:, None], (1, n))
    ja, jb = pts_a[None, :], pts_b[None, :]
    for v in range(d - 1, -1, -1):
        ta = (ra * ja + ns * (rb * jb % p)) % p
        tb = (ra * jb + rb * ja) % p
        ra = (ta + coef_a[v][:, None]) % p
        rb = (tb + coef_b[v][:, None]) % p
    hits = (ra == 0) & (rb == 0)

    f2 = locus.field
    mat = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        row_coeffs = [(int(coef_a[v][i]), int(coef_b[v][i])) for v in range(d + 1)]
        for k in np.nonzero(hits[i])[0]:
            root = locus.points[int(k)]
            work = row_coeffs
            mult = 0
            while len(work) > 1:
                acc = f2.zero()
                quo = [f2.zero()] * (len(work) - 1)
                for idx in range(len(work) - 1, -1, -1):
                    acc = f2.add(f2.mul(acc, root), work[idx])
                    if idx > 0:
                        quo[idx - 1] = acc
                if not f2.is_zero(acc):
                    break
                mult += 1
                work = quo
            if mult == 0:
                raise MassFormulaError("grid hit was not an actual root")
            mat[i, int(k)] = mult
    return mat


def hecke_matrix(locus: SupersingularLocus, phi: ModularPolynomial) -> HeckeMatrix:
    """T_ell on the locus; rows must sum to ell + 1 and satisfy the weighted
    symmetry w_k M[i][k] = w_i M[k][i], both enforced."""
    ell = phi.level
    if ell == locus.p:
        raise ValueError("Hecke level must differ from the characteristic")
    if locus.p < _VECTOR_P_LIMIT:
        mat = _hecke_rows_vectorized(locus, phi)
    else:
        mat = _hecke_rows_reference(locus, phi)
    sums = mat.sum(axis=1)
    if not np.all(sums == ell + 1):
        bad = int(np.nonzero(sums != ell + 1)[0][0])
        raise MassFormulaError(
            f"p={locus.p}, ell={ell}: row {bad} sums to {int(sums[bad])}, "
            f"expected {ell + 1} (a root escaped the locus)"
        )
    if not _weighted_symmetry_ok(locus, mat):
        raise MassFormulaError(f"p={locus.p}, ell={ell}: weighted symmetry fails")
    return HeckeMatrix((ell,), ell + 1, mat)


def hecke_squarefree(
    locus: SupersingularLocus, m: int, library: dict[int, ModularPolynomial],
    prime_matrices: dict[int, HeckeMatrix] | None = None,
) -> HeckeMatrix:
    """T_m = prod of T_ell over ell | m (squarefree m coprime to p)."""
    from .number_field import factor_squarefree

    if m < 1:
        raise ValueError("m must be positive")
    primes = factor_squarefree(m)
    if m % locus.p == 0:
        raise ValueError(f"m = {m} is not coprime to p = {locus.p}")
    n = locus.size
    acc = np.eye(n, dtype=np.int64)
    levels: list[int] = []
    degree = 1
    for ell in primes:
        if prime_matrices is not None and ell in prime_matrices:
            t_ell = prime_matrices[ell]
        else:
            if ell not in library:
                raise MissingDataError(f"no modular polynomial loaded for level {ell}")
            t_ell = hecke_matrix(locus, library[ell])
        acc = acc @ t_ell.entries
        levels.append(ell)
        degree *= ell + 1
    # row sums multiply across the product; a mismatch would also expose
    # any int64 overflow in the accumulated entries
    if not np.all(acc.sum(axis=1) == degree):
        raise MassFormulaError(f"p={locus.p}, m={m}: product rows do not sum to {degree}")
    return HeckeMatrix(tuple(levels), degree, acc)


# ---------------------------------------------------------------------------
# cache


def save_cache(path, locus: SupersingularLocus, matrices: dict[int, HeckeMatrix]) -> None:
    doc = {
        "p": locus.p,
        "basis_ns": locus.field.ns,
        "points": [list(pt) for pt in locus.points],
        "weights": list(locus.weights),
        "matrices": {str(ell): m.entries.tolist() for ell, m in sorted(matrices.items())},
    }
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True))


def load_cache(path) -> tuple[SupersingularLocus, dict[int, HeckeMatrix]]:
    doc = json.loads(Path(path).read_text())
    p = int(doc["p"])
    f2 = FiniteFieldSpec.quadratic(p)
    if f2.ns != int(doc["basis_ns"]):
        raise ValueError(f"cache used basis ns={doc['basis_ns']}, expected {f2.ns}")
    locus = SupersingularLocus(
        p,
        f2,
        tuple((int(a), int(b)) for a, b in doc["points"]),
        tuple(int(w) for w in doc["weights"]),
    )
    if sum(locus.masses) != Fraction(p - 1, 24):
        raise MassFormulaError(f"cached locus for p={p} fails the mass formula")
    matrices = {}
    for key, rows in doc.get("matrices", {}).items():
        ell = int(key)
        matrices[ell] = HeckeMatrix((ell,), ell + 1, np.array(rows, dtype=np.int64))
    return locus, matrices
