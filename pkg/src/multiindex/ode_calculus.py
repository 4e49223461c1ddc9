"""Products ``★₂``, ``▶``, ``★₁`` on ODE multi-indices and the two coproducts
dual to them: the grafting coproduct ``Δ`` and the extraction-contraction
coproduct ``Δ⁻``, each by a primal formula (derivations ``D``) and an adjoint
formula (``D̄``)."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod

from more_itertools import distinct_permutations

from .algebra import LinComb, Tensor2
from .errors import EmptyInsertionError, NotPopulatedError, SizeMismatchError
from .ode import (
    ONE,
    OdeForest,
    OdeMultiIndex,
    adjoint_Dbar_power,
    derivation_D_power,
    inner_product,
    is_populated,
    partial,
    s_ext,
)

__all__ = [
    "DELTA_BASIS",
    "DELTA_MINUS_BASIS",
    "InsertionConfig",
    "Splitting",
    "delta_adjoint",
    "delta_minus_adjoint",
    "delta_minus_primal",
    "delta_primal",
    "enumerate_insertion_configs",
    "enumerate_populated",
    "enumerate_predecessors",
    "enumerate_splittings",
    "insert",
    "multiset_decompositions",
    "star1",
    "star2",
]

DELTA_BASIS = "tensor(forest(ode-multiindex),ode-multiindex)"
DELTA_MINUS_BASIS = DELTA_BASIS


def _require_populated(m: OdeMultiIndex, what: str = "input") -> None:
    if not is_populated(m):
        raise NotPopulatedError(f"{what} {m!r} is not populated (degree {m.population_degree()})")


@dataclass(frozen=True)
class Splitting:
    """``β = β₁ + … + βₙ + β̂`` with populated, unordered parts."""

    parts: OdeForest
    remainder: OdeMultiIndex


@dataclass(frozen=True, order=True)
class InsertionConfig:
    """Multiset of pairs (populated member, insertion index k)."""

    pairs: tuple[tuple[OdeMultiIndex, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs, key=lambda p: (OdeForest.member_order(p[0]), p[1]))))

    @property
    def forest(self) -> OdeForest:
        return OdeForest(b for b, _ in self.pairs)

    @property
    def trunk(self) -> OdeMultiIndex:
        return OdeMultiIndex.from_letters(k for _, k in self.pairs)

    def multiplicity(self) -> int:
        """Number of k-assignments to the forest positions realising this multiset.

        ``∏_β r_β! / ∏_{(β,k)} mult(β,k)!``
        """
        members = Counter(b for b, _ in self.pairs)
        pairs = Counter(self.pairs)
        return prod(factorial(r) for r in members.values()) // prod(factorial(r) for r in pairs.values())


# -- enumerators --------------------------------------------------------------


def _partitions(n: int, largest: int | None = None):
    """Integer partitions of n as non-increasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        for rest in _partitions(n - part, part):
            yield (part,) + rest


def enumerate_populated(max_norm: int) -> list[OdeMultiIndex]:
    """All populated multi-indices of norm at most ``max_norm``.

    Population forces ``Σ_k k β(k) = |β| - 1``, so the nonzero indices form a
    partition of ``|β| - 1`` and the remaining letters are ``z_0``.
    """
    out = []
    for size in range(1, max_norm + 1):
        for lam in _partitions(size - 1):
            exps = Counter(lam)
            exps[0] = size - len(lam)
            out.append(OdeMultiIndex(exps))
    return sorted(out, key=OdeForest.member_order)


def populated_divisors(m: OdeMultiIndex) -> list[OdeMultiIndex]:
    return [p for p in m.sub_monomials() if p and is_populated(p)]


def enumerate_splittings(m: OdeMultiIndex) -> list[Splitting]:
    """Every multiset of populated divisors whose product divides ``m``.

    The splitting whose single part is ``m`` itself (empty remainder) is
    included; it is the one the primitive term ``m ⊗ z^0`` accounts for.
    """
    parts = populated_divisors(m)
    out: list[Splitting] = []

    def rec(start: int, chosen: list[OdeMultiIndex], rem: OdeMultiIndex):
        if chosen:
            out.append(Splitting(OdeForest(chosen), rem))
        for i in range(start, len(parts)):
            p = parts[i]
            if p.divides(rem):
                chosen.append(p)
                rec(i, chosen, rem / p)
                chosen.pop()

    rec(0, [], m)
    return out


def _lower_one(m: OdeMultiIndex) -> set[OdeMultiIndex]:
    return {m / OdeMultiIndex({k: 1}) * OdeMultiIndex({k - 1: 1}) for k, _ in m.items if k >= 1}


def enumerate_predecessors(target: OdeMultiIndex, n: int) -> list[OdeMultiIndex]:
    """Populated ``β̄`` with ``⟨Dⁿ z^β̄, target⟩ ≠ 0``.

    ``D`` has nonnegative coefficients, so the support of ``Dⁿ β̄`` is exactly
    what ``n`` unit index raisings reach; we walk that backwards.
    """
    level = {target}
    for _ in range(n):
        level = set().union(*(_lower_one(x) for x in level)) if level else set()
    return sorted(x for x in level if is_populated(x))


def multiset_decompositions(m: OdeMultiIndex):
    """Unordered factorisations of ``m`` into nonempty divisors."""
    divisors = [d for d in m.sub_monomials() if d]

    def rec(start, rem, chosen):
        if not rem:
            yield tuple(chosen)
            return
        for i in range(start, len(divisors)):
            d = divisors[i]
            if d.divides(rem):
                chosen.append(d)
                yield from rec(i, rem / d, chosen)
                chosen.pop()

    yield from rec(0, m, [])


def enumerate_insertion_configs(m: OdeMultiIndex) -> list[InsertionConfig]:
    """Candidate (member, k) multisets for ``Δ⁻ m``.

    ``D^k`` lowers the population degree by ``k``, so a factor ``β̂ᵢ`` of ``m``
    fixes ``kᵢ = 1 - [β̂ᵢ]``; members come from the predecessors of ``β̂ᵢ``.
    No ``k`` exceeds ``Σ_j j β(j)``.
    """
    configs: set[InsertionConfig] = set()
    for parts in multiset_decompositions(m):
        options = []
        for part in parts:
            k = 1 - part.population_degree()
            if k < 0:
                break
            options.append([(b, k) for b in enumerate_predecessors(part, k)])
        else:
            for choice in _product(options):
                configs.add(InsertionConfig(choice))
    return sorted(configs)


def _product(options):
    if not options:
        yield ()
        return
    head, *tail = options
    for h in head:
        for t in _product(tail):
            yield (h,) + t


# -- products -----------------------------------------------------------------


def star2(f: OdeForest, m: OdeMultiIndex) -> LinComb:
    """Grafting product ``∏̃ z^βᵢ ★₂ z^β = ∏ z^βᵢ · Dⁿ z^β``.

    Conventions: the empty forest acts as the identity; grafting onto the unit
    returns the forest itself (a one-member forest is identified with its member).
    """
    if not f:
        return LinComb.single(m)
    if not m:
        if len(f) == 1:
            return LinComb.single(f.members[0])
        return LinComb.single(f)
    return LinComb.single(f.product()) * derivation_D_power(m, len(f))


def insert(a: OdeMultiIndex, b: OdeMultiIndex) -> LinComb:
    """``a ▶ b = Σ_k (D^k a)(∂_{z_k} b)``: substitute ``D^k a`` for one ``z_k`` of ``b``."""
    if not a:
        raise EmptyInsertionError("the empty multi-index cannot be inserted")
    _require_populated(a, "inserted multi-index")
    _require_populated(b, "trunk")
    out = LinComb.zero(OdeMultiIndex.basis)
    for k, _ in b.items:
        out = out + derivation_D_power(a, k) * partial(b, k)
    return out


def star1(f: OdeForest, t: OdeMultiIndex) -> LinComb:
    """Simultaneous insertion of every member of ``f`` into a distinct letter of ``t``.

    ``Σ_{k₁..kₙ} (∏ D^{kᵢ} z^βᵢ) · (∏ ∂_{z_{kᵢ}}) z^α`` with ``n = |z^α|``; only
    the orderings of the letters of ``t`` survive the derivatives.
    """
    if len(f) != t.norm():
        raise SizeMismatchError(f"forest has {len(f)} members but trunk {t!r} has norm {t.norm()}")
    for b in f:
        if not b:
            raise EmptyInsertionError("the empty multi-index cannot be inserted")
        _require_populated(b, "forest member")
    _require_populated(t, "trunk")
    out = LinComb.zero(OdeMultiIndex.basis)
    for ks in distinct_permutations(t.letters()):
        derived = LinComb.single(t)
        for k in ks:
            derived = partial(derived, k)
        if not derived:
            continue
        term = derived
        for b, k in zip(f.members, ks):
            term = term * derivation_D_power(b, k)
        out = out + term
    return out


# -- Δ ------------------------------------------------------------------------


def _primitive(m: OdeMultiIndex) -> dict:
    return {Tensor2(OdeForest(), m): 1, Tensor2(OdeForest([m]), ONE): 1}


def delta_primal(m: OdeMultiIndex) -> LinComb:
    """Grafting coproduct from ``D``:

    ``Δβ = 1⊗β + β⊗1 + Σ S(β)/(S(F) S(β̄)) · ⟨Dⁿβ̄, β̂⟩/S(β̂) · F ⊗ β̄``
    over splittings ``β = F + β̂`` and populated ``β̄``.
    """
    _require_populated(m)
    terms: dict = _primitive(m)
    s_m = m.symmetry()
    for sp in enumerate_splittings(m):
        rem = sp.remainder
        if not rem:
            continue
        n = len(sp.parts)
        for bbar in enumerate_predecessors(rem, n):
            pairing = inner_product(derivation_D_power(bbar, n), LinComb.single(rem))
            coeff = Fraction(s_m, sp.parts.symmetry() * bbar.symmetry()) * pairing / rem.symmetry()
            key = Tensor2(sp.parts, bbar)
            terms[key] = terms.get(key, 0) + coeff
    return LinComb(terms, basis=DELTA_BASIS)


def delta_adjoint(m: OdeMultiIndex) -> LinComb:
    """Grafting coproduct from ``D̄``: ``Σ 1/S_ext(F) · F ⊗ D̄ⁿ β̂`` plus the primitive part."""
    _require_populated(m)
    out = LinComb(_primitive(m), basis=DELTA_BASIS)
    for sp in enumerate_splittings(m):
        if not sp.remainder:
            continue
        image = adjoint_Dbar_power(sp.remainder, len(sp.parts))
        weight = 1 / s_ext(sp.parts)
        out = out + LinComb(
            {Tensor2(sp.parts, b): weight * c for b, c in image.items() if is_populated(b)}
        )
    return out.with_basis(DELTA_BASIS)


# -- Δ⁻ -----------------------------------------------------------------------


def _ordered_factorisations(m: OdeMultiIndex, norms: list[int]):
    """Ordered tuples of divisors with the given norms whose product is ``m``."""
    if not norms:
        if not m:
            yield ()
        return
    head, *tail = norms
    for d in m.sub_monomials():
        if d.norm() == head:
            for rest in _ordered_factorisations(m / d, tail):
                yield (d,) + rest


def _trunk_factor(t: OdeMultiIndex) -> Fraction:
    """``α! / S(α)`` with ``α! = ∏_k α(k)!``."""
    return Fraction(prod(factorial(e) for _, e in t.items), t.symmetry())


def extraction_coefficient_primal(config: InsertionConfig, m: OdeMultiIndex) -> Fraction:
    """``E = Σ_{β = β̂₁+…+β̂ₙ} α! S(β)/(S(F) S(α)) ∏ ⟨D^{kᵢ}βᵢ, β̂ᵢ⟩ / S(β̂ᵢ)`` (ordered ``β̂ᵢ``)."""
    pairs = config.pairs
    images = [derivation_D_power(b, k) for b, k in pairs]
    total = Fraction(0)
    for parts in _ordered_factorisations(m, [b.norm() for b, _ in pairs]):
        term = Fraction(1)
        for image, part in zip(images, parts):
            term *= inner_product(image, LinComb.single(part)) / part.symmetry()
            if not term:
                break
        total += term
    return _trunk_factor(config.trunk) * Fraction(m.symmetry(), config.forest.symmetry()) * total


def extraction_coefficient_adjoint(config: InsertionConfig, m: OdeMultiIndex) -> Fraction:
    """``E = Σ α!/(S(α) S_ext(F)) ∏ ⟨βᵢ, D̄^{kᵢ} β̂ᵢ⟩ / S(βᵢ)`` (ordered ``β̂ᵢ``)."""
    pairs = config.pairs
    total = Fraction(0)
    for parts in _ordered_factorisations(m, [b.norm() for b, _ in pairs]):
        term = Fraction(1)
        for (b, k), part in zip(pairs, parts):
            term *= inner_product(LinComb.single(b), adjoint_Dbar_power(part, k)) / b.symmetry()
            if not term:
                break
        total += term
    return _trunk_factor(config.trunk) / s_ext(config.forest) * total


def _delta_minus(m: OdeMultiIndex, coefficient) -> LinComb:
    _require_populated(m)
    terms: dict = {}
    for config in enumerate_insertion_configs(m):
        e = coefficient(config, m)
        if e:
            key = Tensor2(config.forest, config.trunk)
            terms[key] = terms.get(key, 0) + config.multiplicity() * e
    return LinComb(terms, basis=DELTA_MINUS_BASIS)


def delta_minus_primal(m: OdeMultiIndex) -> LinComb:
    """Extraction-contraction coproduct via ``D``.

    Each configuration is a multiset of (member, k) pairs; its coefficient
    ``E`` is weighted by the number of k-assignments to the forest positions
    that realise it, so distinct assignments over equal members are kept once each.
    """
    return _delta_minus(m, extraction_coefficient_primal)


def delta_minus_adjoint(m: OdeMultiIndex) -> LinComb:
    """Extraction-contraction coproduct via ``D̄``; same configurations as the primal form."""
    return _delta_minus(m, extraction_coefficient_adjoint)
