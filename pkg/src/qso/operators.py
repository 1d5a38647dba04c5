"""Heredity tensors and their action on hyper-simplex distributions.

The central object is a coefficient family ``p[(mother, father), child]``
stored for female-first parent pairs only (symmetry in the parents is
implicit).  A tensor with the p:q property keeps the female:male mass
ratio at p:q forever; for the 1:1 case it can be reduced to an n-type
quadratic stochastic operator acting on the ordinary simplex via
``y_k = 2 * x_k``.

All types are immutable after construction and all operations are pure,
so everything here is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AsymmetricMeasure,
    ChildAsymmetry,
    DimensionMismatch,
    DistributionOutsideHyperSimplex,
    GenderAsymmetric,
    MissingPair,
    NotOneToOne,
    ZeroMassOffspringSet,
)
from .genotype import Genotype, GenotypeSpace, mendelian_offspring_set

MASS_TOL = 1e-9          # construction-time simplex/hyper-simplex tolerance
SYMMETRY_TOL = 1e-9      # gender-symmetry tolerance for measures
VALIDATE_TOL = 1e-6      # default tolerance of validate_pq


def _as_readonly(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if shape is not None and arr.shape != shape:
        raise DimensionMismatch(f"expected array of shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Distribution:
    """A probability distribution over all genotypes of a space, constrained
    to carry female mass p and male mass q.
    """

    space: GenotypeSpace
    values: np.ndarray
    p_ratio: tuple[float, float] = (0.5, 0.5)

    def __post_init__(self):
        vals = _as_readonly(self.values, (self.space.total,))
        object.__setattr__(self, "values", vals)
        p, q = self.p_ratio
        if not (0.0 < p < 1.0 and abs(p + q - 1.0) <= MASS_TOL):
            raise DistributionOutsideHyperSimplex(
                f"invalid sex ratio p={p}, q={q}: need 0 < p < 1 and p + q = 1"
            )
        if vals.min() < -1e-12:
            raise DistributionOutsideHyperSimplex(
                f"negative probability {vals.min()} at index {int(vals.argmin())}"
            )
        total = vals.sum()
        if abs(total - 1.0) > MASS_TOL:
            raise DistributionOutsideHyperSimplex(f"total mass {total} != 1")
        fem = vals[: self.space.m].sum()
        if abs(fem - p) > MASS_TOL:
            raise DistributionOutsideHyperSimplex(
                f"female mass {fem} != {p} (male mass {vals[self.space.m:].sum()})"
            )

    @classmethod
    def uniform(cls, space: GenotypeSpace) -> "Distribution":
        return cls(space, np.full(space.total, 1.0 / space.total))

    @property
    def female(self) -> np.ndarray:
        return self.values[: self.space.m]

    @property
    def male(self) -> np.ndarray:
        return self.values[self.space.m:]

    def gender_symmetric(self, tol: float = SYMMETRY_TOL) -> bool:
        return bool(np.abs(self.female - self.male).max() <= tol)


@dataclass(frozen=True, eq=False)
class MeasureFamily:
    """One child measure per (mother trait, father trait) parent pair.

    ``mu[i, j, s]`` is the mass that the pair (female of trait ``i``,
    male of trait ``j``) assigns to child genotype ``s``.  Rows of
    missing pairs are NaN; operators reject them with ``MissingPair``.
    """

    space: GenotypeSpace
    mu: np.ndarray

    def __post_init__(self):
        m = self.space.m
        object.__setattr__(self, "mu", _as_readonly(self.mu, (m, m, self.space.total)))

    @classmethod
    def uniform(cls, space: GenotypeSpace) -> "MeasureFamily":
        mu = np.full((space.m, space.m, space.total), 1.0 / space.total)
        return cls(space, mu)

    @classmethod
    def from_dict(cls, space: GenotypeSpace, rows: dict) -> "MeasureFamily":
        """Build from ``{(mother_trait_index, father_trait_index): row}``.

        Pairs absent from ``rows`` are marked missing (NaN).
        """
        mu = np.full((space.m, space.m, space.total), np.nan)
        for (i, j), row in rows.items():
            mu[i, j] = np.asarray(row, dtype=float)
        return cls(space, mu)

    def measure(self, mother_trait: int, father_trait: int) -> np.ndarray:
        return self.mu[mother_trait, father_trait]

    def missing_pairs(self) -> list[tuple[int, int]]:
        bad = np.isnan(self.mu).any(axis=2)
        return [(int(i), int(j)) for i, j in np.argwhere(bad)]

    def renormalized(self) -> "MeasureFamily":
        """Scale each pair's row to total mass exactly 1.

        Published tables are rounded to a few decimals; renormalization
        restores exact stochasticity without disturbing gender symmetry.
        """
        sums = self.mu.sum(axis=2, keepdims=True)
        if np.any(sums <= 0):
            raise ZeroMassOffspringSet("cannot renormalize a zero-mass measure row")
        return MeasureFamily(self.space, self.mu / sums)

    def validate(self, tol: float = 1e-3) -> list["Violation"]:
        """Report invariant violations: coverage, negativity, row sums,
        gender symmetry.
        """
        m = self.space.m
        out = []
        for i, j in self.missing_pairs():
            out.append(Violation("missing", (i, j), None, float("nan"),
                                 f"pair ({self._plabel(i, j)}) has no measure"))
        with np.errstate(invalid="ignore"):
            for i in range(m):
                for j in range(m):
                    row = self.mu[i, j]
                    if np.isnan(row).any():
                        continue
                    neg = row.min()
                    if neg < -tol:
                        out.append(Violation(
                            "negative", (i, j), int(row.argmin()), float(neg),
                            f"pair ({self._plabel(i, j)}) has negative value {neg}"))
                    total = row.sum()
                    if abs(total - 1.0) > tol:
                        out.append(Violation(
                            "normalization", (i, j), None, float(abs(total - 1.0)),
                            f"pair ({self._plabel(i, j)}) sums to {total}, expected 1"))
                    gap = np.abs(row[:m] - row[m:]).max()
                    if gap > tol:
                        out.append(Violation(
                            "gender-symmetry", (i, j), None, float(gap),
                            f"pair ({self._plabel(i, j)}) female/male children differ by {gap}"))
        return out

    def _plabel(self, i: int, j: int) -> str:
        return f"{self.space.trait_label(i)} x {self.space.trait_label(j)}"


@dataclass(frozen=True)
class Violation:
    kind: str
    pair: tuple[int, int] | None
    child: int | None
    magnitude: float
    message: str

    def __str__(self):
        return self.message


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    tol: float

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return f"ok (tolerance {self.tol:g})"
        lines = [f"{len(self.violations)} violation(s) at tolerance {self.tol:g}:"]
        lines += [f"  [{v.kind}] {v.message}" for v in self.violations]
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class HeredityTensor:
    """Coefficients ``p[(mother, father), child]`` for female-first pairs.

    ``coefficients[i, j, s]``: mother of trait ``i``, father of trait
    ``j``, child genotype index ``s``.  ``support`` (optional boolean
    mask of the same shape) records where coefficients are allowed to be
    nonzero; construction from offspring-set rules fills it in.
    """

    space: GenotypeSpace
    p_ratio: tuple[float, float]
    coefficients: np.ndarray
    support: np.ndarray | None = None

    def __post_init__(self):
        m = self.space.m
        object.__setattr__(
            self, "coefficients", _as_readonly(self.coefficients, (m, m, self.space.total))
        )
        if self.support is not None:
            sup = np.array(self.support, dtype=bool)
            if sup.shape != (m, m, self.space.total):
                raise DimensionMismatch("support mask shape mismatch")
            sup.setflags(write=False)
            object.__setattr__(self, "support", sup)
        p, q = self.p_ratio
        if not (0.0 < p < 1.0 and 0.0 < q < 1.0 and abs(p + q - 1.0) <= 1e-12):
            raise ValueError(f"invalid p:q ratio ({p}, {q})")

    @property
    def pair_sum(self) -> float:
        """Required per-pair coefficient total, 1/(2pq)."""
        p, q = self.p_ratio
        return 1.0 / (2.0 * p * q)

    def coefficient(self, mother: Genotype, father: Genotype, child: Genotype) -> float:
        if mother.gender != "f" or father.gender != "m":
            raise ValueError("canonical storage indexes (female, male) pairs")
        i = self.space.trait_index(mother.traits)
        j = self.space.trait_index(father.traits)
        return float(self.coefficients[i, j, self.space.index(child)])

    def full_coefficient(self, a: Genotype, b: Genotype, child: Genotype) -> float:
        """Coefficient for an arbitrary parent pair: zero for same-gender
        parents, otherwise the stored female-first value."""
        if a.gender == b.gender:
            return 0.0
        mother, father = (a, b) if a.gender == "f" else (b, a)
        return self.coefficient(mother, father, child)


def _require_symmetric_base(mu0: Distribution) -> None:
    if mu0.p_ratio != (0.5, 0.5):
        raise AsymmetricMeasure(
            f"base measure must live on the 1:1 hyper-simplex, got p:q = {mu0.p_ratio}"
        )
    if not mu0.gender_symmetric():
        gap = np.abs(mu0.female - mu0.male).max()
        raise AsymmetricMeasure(f"base measure female/male values differ by {gap}")


def mendelian_coefficients(space: GenotypeSpace, mu0: Distribution) -> HeredityTensor:
    """Heredity coefficients concentrated on the per-component offspring set.

    For a mixed pair the child ``s`` in the offspring set receives
    ``2 * mu0(s) / mu0(offspring set)``; everything else is zero.  Raises
    ``ZeroMassOffspringSet`` when a pair's offspring set carries no
    base-measure mass (the formula would divide by zero).
    """
    if mu0.space is not space and mu0.space != space:
        raise DimensionMismatch("base measure was built for a different space")
    _require_symmetric_base(mu0)
    m = space.m
    coeffs = np.zeros((m, m, space.total))
    support = np.zeros((m, m, space.total), dtype=bool)
    for i in range(m):
        mother = Genotype("f", space.traits_of(i))
        for j in range(m):
            father = Genotype("m", space.traits_of(j))
            members = sorted(mendelian_offspring_set(space, mother, father))
            mass = mu0.values[members].sum()
            if mass <= 0.0:
                raise ZeroMassOffspringSet(
                    f"offspring set of pair ({space.trait_label(i)} x "
                    f"{space.trait_label(j)}) has zero base-measure mass"
                )
            coeffs[i, j, members] = 2.0 * mu0.values[members] / mass
            support[i, j, members] = True
    return HeredityTensor(space, (0.5, 0.5), coeffs, support)


def nonmendelian_coefficients(space: GenotypeSpace, family: MeasureFamily) -> HeredityTensor:
    """Heredity coefficients ``2 * mu`` from a per-pair measure family.

    Mixed-gender pairs may produce any child genotype; the family must
    cover every pair and be gender-symmetric in the child.
    """
    if family.space is not space and family.space != space:
        raise DimensionMismatch("measure family was built for a different space")
    missing = family.missing_pairs()
    if missing:
        i, j = missing[0]
        raise MissingPair(
            f"no measure for pair ({space.trait_label(i)} x {space.trait_label(j)})"
            + (f" and {len(missing) - 1} more" if len(missing) > 1 else "")
        )
    m = space.m
    fem, mal = family.mu[:, :, :m], family.mu[:, :, m:]
    gap = np.abs(fem - mal).max()
    if gap > SYMMETRY_TOL:
        raise AsymmetricMeasure(f"family female/male child values differ by {gap}")
    sums = family.mu.sum(axis=2)
    worst = np.abs(sums - 1.0).max()
    if worst > 1e-3:
        raise ValueError(
            f"measure rows deviate from unit mass by {worst}; renormalize first"
        )
    return HeredityTensor(space, (0.5, 0.5), 2.0 * family.mu,
                          np.ones((m, m, space.total), dtype=bool))


def validate_pq(t: HeredityTensor, tol: float = VALIDATE_TOL) -> ValidationReport:
    """Report every violated p:q constraint: negativity, per-pair
    normalization to 1/(2pq), female:male child ratio (as cross-products),
    and support when the tensor declares one.
    """
    space = t.space
    m = space.m
    p, q = t.p_ratio
    out = []
    for i in range(m):
        for j in range(m):
            row = t.coefficients[i, j]
            label = f"{space.trait_label(i)} x {space.trait_label(j)}"
            neg = row.min()
            if neg < -tol:
                out.append(Violation(
                    "negative", (i, j), int(row.argmin()), float(neg),
                    f"pair ({label}) has negative coefficient {neg}"))
            total = row.sum()
            if abs(total - t.pair_sum) > tol:
                out.append(Violation(
                    "normalization", (i, j), None, float(abs(total - t.pair_sum)),
                    f"pair ({label}) sums to {total}, expected {t.pair_sum}"))
            cross = np.abs(q * row[:m] - p * row[m:])
            k = int(cross.argmax())
            if cross[k] > tol:
                out.append(Violation(
                    "ratio", (i, j), k, float(cross[k]),
                    f"pair ({label}) child {space.trait_label(k)} breaks the "
                    f"{p:g}:{q:g} ratio by {cross[k]}"))
            if t.support is not None:
                off = np.where(~t.support[i, j], np.abs(row), 0.0)
                s = int(off.argmax())
                if off[s] > tol:
                    out.append(Violation(
                        "support", (i, j), s, float(off[s]),
                        f"pair ({label}) has mass {row[s]} on excluded child "
                        f"{space.label(s)}"))
    return ValidationReport(tuple(out), tol)


def apply_canonical(t: HeredityTensor, lam: Distribution) -> Distribution:
    """One generation of the canonical p:q operator:
    ``lam'(s) = 2 * sum_{i,j} p[(i,j), s] * lam(f_i) * lam(m_j)``.
    """
    if lam.space != t.space:
        raise DimensionMismatch("distribution and tensor spaces differ")
    if abs(lam.p_ratio[0] - t.p_ratio[0]) > MASS_TOL:
        raise DistributionOutsideHyperSimplex(
            f"distribution has female mass {lam.p_ratio[0]}, tensor expects {t.p_ratio[0]}"
        )
    out = 2.0 * np.einsum("ijs,i,j->s", t.coefficients, lam.female, lam.male)
    return Distribution(t.space, out, t.p_ratio)


@dataclass(frozen=True, eq=False)
class ReducedQso:
    """Symmetric stochastic tensor ``p[i, j, k]`` driving
    ``y'_k = sum_{ij} p[i, j, k] y_i y_j`` on the (n-1)-simplex.
    """

    n: int
    p: np.ndarray

    def __post_init__(self):
        arr = _as_readonly(self.p, (self.n, self.n, self.n))
        object.__setattr__(self, "p", arr)
        if arr.min() < -1e-12:
            raise ValueError(f"negative reduced coefficient {arr.min()}")
        sym = np.abs(arr - arr.transpose(1, 0, 2)).max()
        if sym > 1e-12:
            raise ValueError(f"reduced tensor not symmetric in parents (max gap {sym})")
        stoch = np.abs(arr.sum(axis=2) - 1.0).max()
        if stoch > MASS_TOL:
            raise ValueError(
                f"reduced tensor rows deviate from unit sum by {stoch}; "
                "renormalize the source measures"
            )


@dataclass(frozen=True, eq=False)
class ReducedDistribution:
    """A point on the (n-1)-simplex."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise DimensionMismatch("reduced distribution must be a nonempty vector")
        if vals.min() < -1e-12:
            raise ValueError(f"negative probability {vals.min()}")
        if abs(vals.sum() - 1.0) > MASS_TOL:
            raise ValueError(f"total mass {vals.sum()} != 1")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def uniform(cls, n: int) -> "ReducedDistribution":
        return cls(np.full(n, 1.0 / n))

    @property
    def n(self) -> int:
        return self.values.size


def reduce(t: HeredityTensor) -> ReducedQso:
    """Collapse a 1:1, child-symmetric tensor to its n-type operator.

    Under ``y_k = 2 * lam(f_k)`` the canonical step at gender-symmetric
    states becomes ``y'_k = sum_{ij} p[i,j,k] y_i y_j`` with
    ``p[i,j,k] = (coeff[(i,j), f_k] + coeff[(j,i), f_k]) / 2``; the
    symmetrization is exact because a quadratic form only sees the
    symmetric part of its coefficient matrix.
    """
    if abs(t.p_ratio[0] - 0.5) > 1e-12:
        raise NotOneToOne(f"reduction is defined for p = q = 1/2, got p:q = {t.p_ratio}")
    m = t.space.m
    fem, mal = t.coefficients[:, :, :m], t.coefficients[:, :, m:]
    gap = np.abs(fem - mal).max()
    if gap > SYMMETRY_TOL:
        raise ChildAsymmetry(f"female/male child coefficients differ by {gap}")
    p = 0.5 * (fem + fem.transpose(1, 0, 2))
    return ReducedQso(m, p)


def apply_reduced(q: ReducedQso, y: ReducedDistribution) -> ReducedDistribution:
    """One step of the reduced operator (exact quadratic form, no renormalization)."""
    if y.n != q.n:
        raise DimensionMismatch(f"distribution has {y.n} types, operator expects {q.n}")
    return ReducedDistribution(reduced_step(q, y.values))


def reduced_step(q: ReducedQso, y: np.ndarray) -> np.ndarray:
    """Raw quadratic-form step on a plain vector (no simplex validation)."""
    return np.einsum("ijk,i,j->k", q.p, y, y)


def lift(space: GenotypeSpace, y: ReducedDistribution) -> Distribution:
    """Embed a reduced point into the 1:1 hyper-simplex, halving the mass
    between the two genders of each trait."""
    if y.n != space.m:
        raise DimensionMismatch(f"reduced point has {y.n} types, space has {space.m}")
    half = y.values / 2.0
    return Distribution(space, np.concatenate([half, half]))


def fold(space: GenotypeSpace, lam: Distribution) -> ReducedDistribution:
    """Inverse of :func:`lift` for gender-symmetric distributions:
    ``y_k = 2 * lam(f_k)``."""
    if lam.space != space:
        raise DimensionMismatch("distribution belongs to a different space")
    if not lam.gender_symmetric():
        gap = np.abs(lam.female - lam.male).max()
        raise GenderAsymmetric(f"female/male values differ by {gap}; cannot fold")
    return ReducedDistribution(2.0 * lam.female)
