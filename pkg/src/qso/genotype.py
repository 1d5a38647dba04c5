"""Genotype spaces over gendered trait components and offspring-set rules.

A genotype couples a gender (female or male) with one allele per trait
component.  Genotypes are enumerated deterministically: index
``g * m + t`` where ``g`` is the gender index (female block first),
``m`` the number of trait combinations, and ``t`` the lexicographic rank
of the allele-index vector.  The mirror map ``k -> (k + m) mod 2m``
exchanges the genders of otherwise identical genotypes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import DuplicateLabel, EmptyComponent

GENDERS = ("f", "m")


@dataclass(frozen=True)
class Genotype:
    """A gender plus one allele index per trait component."""

    gender: str
    traits: tuple[int, ...]

    def __post_init__(self):
        if self.gender not in GENDERS:
            raise ValueError(f"gender must be one of {GENDERS}, got {self.gender!r}")
        object.__setattr__(self, "traits", tuple(int(t) for t in self.traits))


@dataclass(frozen=True)
class GenotypeSpace:
    """Immutable enumeration of all genotypes over the given components.

    ``m`` is the number of trait combinations, ``total`` the number of
    genotypes (``2 * m``).  Safe to share across threads.
    """

    components: tuple[tuple[str, ...], ...]
    m: int = field(init=False)
    total: int = field(init=False)

    def __post_init__(self):
        comps = tuple(tuple(c) for c in self.components)
        if not comps:
            raise EmptyComponent("at least one trait component is required")
        for idx, comp in enumerate(comps):
            if not comp:
                raise EmptyComponent(f"component {idx} has no alleles")
            if len(set(comp)) != len(comp):
                raise DuplicateLabel(f"component {idx} repeats an allele label: {comp}")
        m = 1
        for comp in comps:
            m *= len(comp)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "total", 2 * m)

    # -- enumeration ---------------------------------------------------------

    def trait_index(self, traits: tuple[int, ...]) -> int:
        """Lexicographic rank of an allele-index vector."""
        if len(traits) != len(self.components):
            raise ValueError(
                f"expected {len(self.components)} trait entries, got {len(traits)}"
            )
        rank = 0
        for allele, comp in zip(traits, self.components):
            if not 0 <= allele < len(comp):
                raise ValueError(f"allele index {allele} out of range for {comp}")
            rank = rank * len(comp) + allele
        return rank

    def traits_of(self, trait_index: int) -> tuple[int, ...]:
        """Inverse of :meth:`trait_index`."""
        if not 0 <= trait_index < self.m:
            raise ValueError(f"trait index {trait_index} out of range")
        out = []
        for comp in reversed(self.components):
            out.append(trait_index % len(comp))
            trait_index //= len(comp)
        return tuple(reversed(out))

    def index(self, genotype: Genotype) -> int:
        """Genotype index: female block first, traits in lexicographic order."""
        return GENDERS.index(genotype.gender) * self.m + self.trait_index(genotype.traits)

    def genotype(self, index: int) -> Genotype:
        if not 0 <= index < self.total:
            raise ValueError(f"genotype index {index} out of range")
        return Genotype(GENDERS[index // self.m], self.traits_of(index % self.m))

    def mirror(self, index: int) -> int:
        """Index of the opposite-gender genotype with identical traits."""
        return (index + self.m) % self.total

    def is_female(self, index: int) -> bool:
        return index < self.m

    def trait_label(self, trait_index: int) -> str:
        """Human-readable label of a trait combination (alleles joined by '|')."""
        return "|".join(
            comp[a] for a, comp in zip(self.traits_of(trait_index), self.components)
        )

    def trait_index_of_label(self, label: str) -> int:
        parts = label.split("|")
        if len(parts) != len(self.components):
            raise ValueError(f"label {label!r} does not match component count")
        traits = []
        for part, comp in zip(parts, self.components):
            if part not in comp:
                raise ValueError(f"unknown allele {part!r} for component {comp}")
            traits.append(comp.index(part))
        return self.trait_index(tuple(traits))

    def label(self, index: int) -> str:
        g = self.genotype(index)
        return f"({g.gender},{self.trait_label(self.trait_index(g.traits))})"

    def genotypes(self):
        """All genotypes in enumeration order."""
        return [self.genotype(k) for k in range(self.total)]


def build_space(components) -> GenotypeSpace:
    """Build a :class:`GenotypeSpace` from a list of allele-label lists."""
    return GenotypeSpace(tuple(tuple(c) for c in components))


def _check_member(space: GenotypeSpace, g: Genotype) -> None:
    if len(g.traits) != len(space.components):
        raise ValueError(f"genotype {g} does not fit space with {len(space.components)} components")
    for allele, comp in zip(g.traits, space.components):
        if not 0 <= allele < len(comp):
            raise ValueError(f"allele index {allele} out of range for component {comp}")


def mendelian_offspring_set(space: GenotypeSpace, a: Genotype, b: Genotype) -> frozenset[int]:
    """Genotype indices a child of ``a`` and ``b`` may carry under per-component
    parental inheritance.

    Empty for same-gender parents.  Otherwise the child's allele at every
    component must equal one parent's allele there; both child genders are
    always included.
    """
    _check_member(space, a)
    _check_member(space, b)
    if a.gender == b.gender:
        return frozenset()
    per_component = [
        sorted({ai, bi}) for ai, bi in zip(a.traits, b.traits)
    ]
    indices = set()
    for combo in itertools.product(*per_component):
        t = space.trait_index(tuple(combo))
        indices.add(t)
        indices.add(t + space.m)
    return frozenset(indices)


def nonmendelian_offspring_set(space: GenotypeSpace, a: Genotype, b: Genotype) -> frozenset[int]:
    """Unrestricted offspring set: every genotype, unless parents share a gender."""
    _check_member(space, a)
    _check_member(space, b)
    if a.gender == b.gender:
        return frozenset()
    return frozenset(range(space.total))
