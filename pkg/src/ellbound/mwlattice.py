"""Mordell-Weil lattice quantities: Gram matrix, regulator, Minkowski check."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .elliptic import CONFIG, Curve, CurvePoint, canonical_height_estimate, group_law, multiply, nt_pairing
from .errors import DomainError, NotPositiveDefinite
from .exactnum import det_exact


@dataclass(frozen=True)
class MWBasis:
    """Generators of the free part of E(K) with their Néron-Tate Gram matrix."""

    curve: Optional[Curve]
    generators: tuple
    heights: tuple
    gram: tuple
    entry_error: float = 0.0
    normalization: str = "x_over_2"

    def __post_init__(self):
        r = len(self.heights)
        if len(self.gram) != r or any(len(row) != r for row in self.gram):
            raise DomainError("gram must be r x r")
        for i in range(r):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise DomainError("gram must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.heights)

    @property
    def log_V(self) -> float:
        """max h(Q_i) (0 for rank 0)."""
        return max(self.heights, default=0.0)

    @classmethod
    def from_points(cls, curve: Curve, points: Sequence[CurvePoint], tol: float = 1e-6,
                    normalization: Optional[str] = None) -> "MWBasis":
        norm = normalization or CONFIG.normalization
        pts = tuple(points)
        heights = [canonical_height_estimate(P, tol, norm).value for P in pts]
        r = len(pts)
        gram = [[0.0] * r for _ in range(r)]
        for i in range(r):
            gram[i][i] = heights[i]
            for j in range(i + 1, r):
                gram[i][j] = gram[j][i] = nt_pairing(pts[i], pts[j], tol, norm)
        err = 3 * tol if r > 1 else tol
        return cls(curve, pts, tuple(heights), tuple(tuple(row) for row in gram), err, norm)

    @classmethod
    def from_gram(cls, gram, entry_error: float = 0.0, normalization: str = "x_over_2") -> "MWBasis":
        g = tuple(tuple(float(x) for x in row) for row in gram)
        heights = tuple(g[i][i] for i in range(len(g)))
        return cls(None, (), heights, g, entry_error, normalization)

    def change_basis(self, U) -> "MWBasis":
        """Generators sum_j U[i][j] Q_j (requires points)."""
        if not self.generators:
            raise DomainError("basis has no points to transform")
        new = []
        for row in U:
            P = self.curve.O
            for c, Q in zip(row, self.generators):
                if c:
                    P = group_law(P, multiply(Q, int(c)))
            new.append(P)
        tol = self.entry_error / 3 if self.rank > 1 else self.entry_error
        return MWBasis.from_points(self.curve, new, tol, self.normalization)

    def to_json(self) -> dict:
        return {
            "generators": [P.to_json() for P in self.generators],
            "heights": list(self.heights),
            "gram": [list(row) for row in self.gram],
            "entry_error": self.entry_error,
            "normalization": self.normalization,
        }


def minkowski_sort(basis: MWBasis) -> MWBasis:
    """Reorder so that heights are nondecreasing."""
    order = sorted(range(basis.rank), key=lambda i: basis.heights[i])
    gram = tuple(tuple(basis.gram[i][j] for j in order) for i in order)
    gens = tuple(basis.generators[i] for i in order) if basis.generators else ()
    return MWBasis(basis.curve, gens, tuple(basis.heights[i] for i in order), gram,
                   basis.entry_error, basis.normalization)


def leading_minors(gram) -> list[Fraction]:
    g = [[Fraction(x) for x in row] for row in gram]
    return [det_exact([row[:k] for row in g[:k]]) for k in range(1, len(g) + 1)]


def positive_definite_checks(gram) -> tuple[bool, bool]:
    """(all leading minors > 0, Cholesky succeeds)."""
    r = len(gram)
    if r == 0:
        return True, True
    by_minors = all(m > 0 for m in leading_minors(gram))
    try:
        np.linalg.cholesky(np.array(gram, dtype=float))
        by_chol = True
    except np.linalg.LinAlgError:
        by_chol = False
    return by_minors, by_chol


@dataclass(frozen=True)
class RegulatorResult:
    value: float
    error: float
    normalization: str

    def to_json(self) -> dict:
        return {"value": self.value, "error": self.error, "normalization": self.normalization}


def regulator(basis: MWBasis) -> RegulatorResult:
    """det of the Gram matrix with a propagated error bound r!·M^(r-1)·r·eps."""
    r = basis.rank
    if r == 0:
        return RegulatorResult(1.0, 0.0, basis.normalization)
    by_minors, by_chol = positive_definite_checks(basis.gram)
    if not by_minors:
        raise NotPositiveDefinite("Gram matrix is not positive definite (dependent or torsion generators?)")
    value = float(det_exact([[Fraction(x) for x in row] for row in basis.gram]))
    M = max(abs(x) for row in basis.gram for x in row) + basis.entry_error
    err = math.factorial(r) * M ** (r - 1) * r * basis.entry_error
    if value <= err:
        raise NotPositiveDefinite(f"regulator {value:.3g} is within its error bar {err:.3g}")
    return RegulatorResult(value, err, basis.normalization)


@dataclass(frozen=True)
class MinkowskiVerdict:
    product: float
    product_error: float
    bound: float
    bound_error: float
    holds: bool
    decided: bool
    slack_ratio: float

    def to_json(self) -> dict:
        return self.__dict__.copy()


def minkowski_check(basis: MWBasis) -> MinkowskiVerdict:
    """Compare prod h(Q_i) with (r!)^4 Reg."""
    r = basis.rank
    if r < 1:
        raise DomainError("Minkowski check needs rank >= 1")
    reg = regulator(basis)
    prod = math.prod(basis.heights)
    f4 = math.factorial(r) ** 4
    bound = f4 * reg.value
    if r == 1:
        # both sides are the same computed number, so the errors cancel
        return MinkowskiVerdict(prod, 0.0, bound, 0.0, prod <= bound, True, bound / prod if prod else math.inf)
    eps = basis.entry_error
    perr = sum(math.prod(h + eps for h in basis.heights[:i]) * eps * math.prod(basis.heights[i + 1:])
               for i in range(r))
    berr = f4 * reg.error
    decided = prod + perr < bound - berr or prod - perr > bound + berr
    holds = prod + perr < bound - berr
    return MinkowskiVerdict(prod, perr, bound, berr, holds, decided, bound / prod if prod else math.inf)


def masser_floor(d: float, kappa4: float) -> float:
    """kappa4 / (d^3 (log d)^2)."""
    if d < 2:
        raise DomainError("Masser's floor needs d >= 2")
    if not 0 < kappa4 <= 1:
        raise DomainError("kappa4 must lie in (0, 1]")
    return kappa4 / (d ** 3 * math.log(d) ** 2)


def regulator_from_bsd(L_star: float, sha: int, torsion_order: int, c_inf: float,
                       prod_cv: float, D_K: float) -> float:
    """Reg = L* |E_tors|^2 D_K^(1/2) / (|Sha| c_inf prod c_v)."""
    for name, v in (("L_star", L_star), ("sha", sha), ("torsion_order", torsion_order),
                    ("c_inf", c_inf), ("prod_cv", prod_cv), ("D_K", D_K)):
        if not v > 0:
            raise DomainError(f"{name} must be positive")
    return L_star * torsion_order ** 2 * math.sqrt(D_K) / (sha * c_inf * prod_cv)


def load_bases(path) -> list[tuple[dict, Curve, list[CurvePoint]]]:
    """Read a JSON list of {"curve": "A,B", "points": ["(x,y)", ...]} records."""
    with open(path) as fh:
        records = json.load(fh)
    out = []
    for rec in records:
        E = Curve.parse(rec["curve"])
        pts = [E.parse_point(s) for s in rec["points"]]
        out.append((rec, E, pts))
    return out
