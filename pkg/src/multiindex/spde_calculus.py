"""SPDE products ``★₂``, ``▶``, ``★₁`` and the coproducts ``Δ`` and ``Δ⁻``.

Both coproducts are infinite sums, so every entry point takes a bound on the
first bigrading component: left factors (for ``Δ``) or trunks (for ``Δ⁻``)
beyond it are dropped. The primitive part of ``Δ`` is always kept.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Iterable, Sequence

from more_itertools import distinct_permutations

from .algebra import LinComb, Tensor2
from .errors import EmptyInsertionError, MultiIndexError, NotPopulatedError, SizeMismatchError
from .ode import OdeForest, OdeMultiIndex
from .spde import (
    SPDE_ONE,
    TRUNK_LABEL,
    SpdeForest,
    SpdeMultiIndex,
    SpdePlainForest,
    SpdeVariable,
    Word,
    D_word,
    adjoint_D_word,
    adjoint_Dn,
    adjoint_partial_k,
    derivation_Dn,
    derivation_partial_k,
    grading,
    inner_product_spde,
    is_populated_spde,
    partial_variable,
    s_ext_spde,
    zero_vector,
)

__all__ = [
    "DELTA_SPDE_BASIS",
    "DELTA_MINUS_SPDE_BASIS",
    "GradeBound",
    "SpdeInsertionConfig",
    "delta_minus_spde_adjoint",
    "delta_minus_spde_primal",
    "delta_spde_adjoint",
    "delta_spde_primal",
    "embed_ode",
    "embed_ode_delta",
    "embed_ode_delta_minus",
    "embed_ode_forest",
    "enumerate_spde_forests",
    "enumerate_spde_insertion_configs",
    "insert_spde",
    "predecessors_spde",
    "primitive_left",
    "star1_spde",
    "star2_spde",
    "vectors_up_to",
]

DELTA_SPDE_BASIS = "tensor(spde-forest,spde-multiindex)"
DELTA_MINUS_SPDE_BASIS = "tensor(forest(spde-multiindex),spde-multiindex)"


@dataclass(frozen=True)
class GradeBound:
    """Truncation level on the first bigrading component."""

    max_first_grade: int

    def __post_init__(self):
        if self.max_first_grade < 0:
            raise ValueError("grade bound must be nonnegative")

    @classmethod
    def of(cls, g: "GradeBound | int") -> "GradeBound":
        return g if isinstance(g, GradeBound) else cls(int(g))


def _require_populated(m: SpdeMultiIndex, what: str = "input") -> None:
    if not is_populated_spde(m):
        raise NotPopulatedError(f"{what} {m!r} is not populated (degree {m.population_degree()})")


def _dim_of(m: SpdeMultiIndex) -> int:
    if not m:
        raise ValueError("cannot infer the dimension of the unit")
    return m.items[0][0].word.dim


def vectors_up_to(dim: int, max_norm: int) -> list[tuple[int, ...]]:
    """Vectors in ℕ^dim with entry sum at most ``max_norm``, graded then lexicographic."""
    out = [()]
    for _ in range(dim):
        out = [p + (j,) for p in out for j in range(max_norm - sum(p) + 1)]
    return sorted(out, key=lambda v: (sum(v), v))


def _populated_divisors(m: SpdeMultiIndex) -> list[SpdeMultiIndex]:
    return [p for p in m.sub_monomials() if p and is_populated_spde(p)]


def _member_multisets(m: SpdeMultiIndex):
    """Multisets of populated divisors whose product divides ``m`` (the empty one included)."""
    parts = _populated_divisors(m)

    def rec(start, chosen, rem):
        yield tuple(chosen)
        for i in range(start, len(parts)):
            p = parts[i]
            if p.divides(rem):
                chosen.append(p)
                yield from rec(i, chosen, rem / p)
                chosen.pop()

    yield from rec(0, [], m)


def primitive_left(m: SpdeMultiIndex) -> SpdeForest:
    """Left key of the primitive term ``z^β ⊗ z^0``: the member with a zero marker, ``k = 0``."""
    dim = _dim_of(m)
    return SpdeForest(zero_vector(dim), [(m, zero_vector(dim))])


# -- ★₂ and Δ ---------------------------------------------------------------------


def star2_spde(f: SpdeForest, m: SpdeMultiIndex) -> LinComb:
    """``∂^k ∏̃ z^{βᵢ} D^(𝐧ᵢ) ★₂ z^β = ∏ z^{βᵢ} · ∂^k ∏ D^(𝐧ᵢ) z^β``.

    The unit forest acts as the identity and grafting onto ``z^0`` returns the
    forest; a lone member with zero markers is identified with that member.
    """
    if not f:
        return LinComb.single(m)
    if not m:
        if len(f) == 1 and f == primitive_left(f.members[0]):
            return LinComb.single(f.members[0])
        return LinComb.single(f)
    image = LinComb.single(m)
    for n in f.markers:
        image = derivation_Dn(image, n)
    image = derivation_partial_k(image, f.k)
    return LinComb.single(f.product()) * image


def enumerate_spde_forests(m: SpdeMultiIndex, g: GradeBound | int, dim: int | None = None) -> list[SpdeForest]:
    """Every forest whose members are populated, multiply to a divisor of ``m``,
    and whose first grading is at most ``g``."""
    g = GradeBound.of(g).max_first_grade
    dim = _dim_of(m) if dim is None else dim
    out: set[SpdeForest] = set()
    for members in _member_multisets(m):
        budget = g - sum(b.letter_norm() for b in members)
        if budget < 0:
            continue

        def assign(i, left, markers):
            if i == len(members):
                for k in vectors_up_to(dim, left):
                    out.add(SpdeForest(k, zip(members, markers)))
                return
            for n in vectors_up_to(dim, left):
                assign(i + 1, left - sum(n), markers + [n])

        assign(0, budget, [])
    return sorted(out)


def _undo_partial(level: set[SpdeMultiIndex], i: int) -> set[SpdeMultiIndex]:
    out = set()
    for y_mono in level:
        for y, _ in y_mono.items:
            if y.word.u[i]:
                u = list(y.word.u)
                u[i] -= 1
                out.add(y_mono.replace(y, SpdeVariable(y.label, y.word.with_u(tuple(u)))))
    return out


def _undo_Dn(level: set[SpdeMultiIndex], n: tuple[int, ...]) -> set[SpdeMultiIndex]:
    out = set()
    for y_mono in level:
        for y, _ in y_mono.items:
            for letter in set(y.word.v):
                if all(a <= b for a, b in zip(letter, n)):
                    ell = tuple(b - a for a, b in zip(letter, n))
                    u = tuple(a + b for a, b in zip(y.word.u, ell))
                    out.add(y_mono.replace(y, SpdeVariable(y.label, y.word.remove_letter(letter).with_u(u))))
    return out


def _undo_word(target: SpdeMultiIndex, k: Sequence[int], markers: Iterable[Sequence[int]]) -> set[SpdeMultiIndex]:
    """Monomials whose image under ``∂^k ∏ D^(𝐧ⱼ)`` can contain ``target``.

    Both operators have nonnegative coefficients, so the support of the image is
    exactly what the inverse single steps reach; ``∂^k`` acts last, so it is undone first.
    """
    level = {target}
    for i, ki in enumerate(k):
        for _ in range(ki):
            level = _undo_partial(level, i)
    for n in markers:
        level = _undo_Dn(level, tuple(n))
    return level


def predecessors_spde(target: SpdeMultiIndex, f: SpdeForest) -> list[SpdeMultiIndex]:
    """Populated ``β̄`` with ``⟨∂^k ∏ D^(𝐧ᵢ) β̄, target⟩ ≠ 0``."""
    return sorted(x for x in _undo_word(target, f.k, f.markers) if is_populated_spde(x))


def _primitive(m: SpdeMultiIndex) -> dict:
    dim = _dim_of(m)
    return {Tensor2(SpdeForest(zero_vector(dim)), m): 1, Tensor2(primitive_left(m), SPDE_ONE): 1}


def delta_spde_primal(m: SpdeMultiIndex, g: GradeBound | int) -> LinComb:
    """``Δβ`` via ``D^(𝐧)`` and ``∂``, truncated to left factors of first grading ≤ g.

    Coefficient of ``F ⊗ β̄``: ``S(β)/(S(F) S(β̄)) · ⟨∂^k ∏ D^(𝐧ᵢ) β̄, β̂⟩ / S(β̂)``.
    """
    _require_populated(m)
    terms = _primitive(m)
    s_m = m.symmetry()
    for f in enumerate_spde_forests(m, g):
        if not f:
            continue
        rem = m / f.product()
        if not rem:
            continue
        target = LinComb.single(rem)
        for bbar in predecessors_spde(rem, f):
            image = LinComb.single(bbar)
            for n in f.markers:
                image = derivation_Dn(image, n)
            image = derivation_partial_k(image, f.k)
            pairing = inner_product_spde(image, target)
            if pairing:
                key = Tensor2(f, bbar)
                terms[key] = terms.get(key, 0) + Fraction(s_m, f.symmetry() * bbar.symmetry()) * pairing / rem.symmetry()
    return LinComb(terms, basis=DELTA_SPDE_BASIS)


def delta_spde_adjoint(m: SpdeMultiIndex, g: GradeBound | int) -> LinComb:
    """``Δβ`` via the adjoints: ``Σ 1/S_ext(F) · F ⊗ ∏ D̄^(𝐧ᵢ) ∂̄^k β̂`` plus the primitive part."""
    _require_populated(m)
    out = LinComb(_primitive(m), basis=DELTA_SPDE_BASIS)
    for f in enumerate_spde_forests(m, g):
        if not f:
            continue
        rem = m / f.product()
        if not rem:
            continue
        image = adjoint_partial_k(rem, f.k)
        for n in f.markers:
            image = adjoint_Dn(image, n)
        weight = 1 / s_ext_spde(f)
        out = out + LinComb({Tensor2(f, b): weight * c for b, c in image.items() if is_populated_spde(b)})
    return out.with_basis(DELTA_SPDE_BASIS)


# -- ▶, ★₁ and Δ⁻ -----------------------------------------------------------------


def _require_trunk(t: SpdeMultiIndex) -> None:
    if any(x.label != TRUNK_LABEL for x, _ in t.items):
        raise MultiIndexError(f"trunk {t!r} may only use label {TRUNK_LABEL!r} variables")
    _require_populated(t, "trunk")


def _require_member(a: SpdeMultiIndex) -> None:
    if not a:
        raise EmptyInsertionError("the empty multi-index cannot be inserted")
    _require_populated(a, "inserted multi-index")


def insert_spde(a: SpdeMultiIndex, t: SpdeMultiIndex) -> LinComb:
    """``a ▶ t = Σ_w (D^w a)(∂_{z_{(0,w)}} t)``; only the words of ``t`` contribute."""
    _require_member(a)
    _require_trunk(t)
    out = LinComb.zero(SpdeMultiIndex.basis)
    for x, _ in t.items:
        out = out + D_word(a, x.word) * partial_variable(t, x)
    return out.with_basis(SpdeMultiIndex.basis)


def star1_spde(f: SpdePlainForest | Iterable[SpdeMultiIndex], t: SpdeMultiIndex) -> LinComb:
    """Insert every member of ``f`` into a distinct variable of ``t``.

    Sums over the distinct orderings ``(w₁..wₙ)`` of the trunk's words of
    ``∏ D^{wᵢ} z^{βᵢ} · (∏ ∂_{z_{(0,wᵢ)}}) z^α``.
    """
    f = f if isinstance(f, SpdePlainForest) else SpdePlainForest(f)
    if len(f) != t.norm():
        raise SizeMismatchError(f"forest has {len(f)} members but trunk {t!r} has norm {t.norm()}")
    for b in f:
        _require_member(b)
    _require_trunk(t)
    out = LinComb.zero(SpdeMultiIndex.basis)
    for xs in distinct_permutations(t.variables()):
        derived = LinComb.single(t)
        for x in xs:
            derived = partial_variable(derived, x)
        term = derived
        for b, x in zip(f.members, xs):
            term = term * D_word(b, x.word)
        out = out + term
    return out.with_basis(SpdeMultiIndex.basis)


@dataclass(frozen=True, order=True)
class SpdeInsertionConfig:
    """Multiset of (populated member, word) pairs; the words build the trunk."""

    pairs: tuple[tuple[SpdeMultiIndex, Word], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs, key=lambda p: ((p[0].norm(), p[0].items), p[1]))))

    @property
    def forest(self) -> SpdePlainForest:
        return SpdePlainForest(b for b, _ in self.pairs)

    @property
    def trunk(self) -> SpdeMultiIndex:
        return SpdeMultiIndex((SpdeVariable(TRUNK_LABEL, w), 1) for _, w in self.pairs)

    def multiplicity(self) -> int:
        members = Counter(b for b, _ in self.pairs)
        pairs = Counter(self.pairs)
        return prod(factorial(r) for r in members.values()) // prod(factorial(r) for r in pairs.values())


def _decompositions(m: SpdeMultiIndex):
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


def _letter_multisets(dim: int, count: int, budget: int):
    """Sorted tuples of ``count`` letters with total norm at most ``budget``."""
    letters = vectors_up_to(dim, budget)

    def rec(start, left, chosen):
        if len(chosen) == count:
            yield tuple(chosen)
            return
        for i in range(start, len(letters)):
            if sum(letters[i]) <= left:
                chosen.append(letters[i])
                yield from rec(i, left - sum(letters[i]), chosen)
                chosen.pop()

    yield from rec(0, budget, [])


def _word_options(part: SpdeMultiIndex, dim: int, budget: int) -> list[tuple[SpdeMultiIndex, Word]]:
    """(member, word) pairs with ``⟨D^w member, part⟩ ≠ 0`` and word letter-norm ≤ budget.

    ``D^(𝐧)`` adds one letter and ``∂ᵢ`` none, which fixes the letter count; the
    b-count of ``w`` cannot exceed the b-mass of ``part``.
    """
    count = 1 - part.population_degree()
    if count < 0:
        return []
    out = []
    for u in vectors_up_to(dim, part.b_mass()):
        for v in _letter_multisets(dim, count, budget):
            w = Word(u, v)
            for b in _undo_word(part, w.u, w.v):
                if b and is_populated_spde(b):
                    out.append((b, w))
    return out


def enumerate_spde_insertion_configs(m: SpdeMultiIndex, g: GradeBound | int) -> list[SpdeInsertionConfig]:
    """Candidate configurations for ``Δ⁻ m`` with trunk first grading ≤ g."""
    g = GradeBound.of(g).max_first_grade
    dim = _dim_of(m)
    configs: set[SpdeInsertionConfig] = set()
    for parts in _decompositions(m):
        options = [_word_options(p, dim, g) for p in parts]

        def rec(i, budget, chosen):
            if i == len(parts):
                configs.add(SpdeInsertionConfig(tuple(chosen)))
                return
            for b, w in options[i]:
                cost = w.letter_norm()
                if cost <= budget:
                    chosen.append((b, w))
                    rec(i + 1, budget - cost, chosen)
                    chosen.pop()

        rec(0, g, [])
    return sorted(configs)


def _ordered_factorisations(m: SpdeMultiIndex, norms: list[int]):
    if not norms:
        if not m:
            yield ()
        return
    head, *tail = norms
    for d in m.sub_monomials():
        if d.norm() == head:
            for rest in _ordered_factorisations(m / d, tail):
                yield (d,) + rest


def _trunk_factor(t: SpdeMultiIndex) -> Fraction:
    """``α!/S(α)`` with ``α! = ∏ α(0, w)!``."""
    return Fraction(prod(factorial(e) for _, e in t.items), t.symmetry())


def _extraction_primal(config: SpdeInsertionConfig, m: SpdeMultiIndex) -> Fraction:
    pairs = config.pairs
    images = [D_word(b, w) for b, w in pairs]
    total = Fraction(0)
    for parts in _ordered_factorisations(m, [b.norm() for b, _ in pairs]):
        term = Fraction(1)
        for image, part in zip(images, parts):
            term *= inner_product_spde(image, LinComb.single(part)) / part.symmetry()
            if not term:
                break
        total += term
    return _trunk_factor(config.trunk) * Fraction(m.symmetry(), config.forest.symmetry()) * total


def _extraction_adjoint(config: SpdeInsertionConfig, m: SpdeMultiIndex) -> Fraction:
    pairs = config.pairs
    total = Fraction(0)
    for parts in _ordered_factorisations(m, [b.norm() for b, _ in pairs]):
        term = Fraction(1)
        for (b, w), part in zip(pairs, parts):
            term *= inner_product_spde(LinComb.single(b), adjoint_D_word(part, w)) / b.symmetry()
            if not term:
                break
        total += term
    return _trunk_factor(config.trunk) / s_ext_spde(config.forest) * total


def _delta_minus(m: SpdeMultiIndex, g, coefficient) -> LinComb:
    _require_populated(m)
    terms: dict = {}
    for config in enumerate_spde_insertion_configs(m, g):
        e = coefficient(config, m)
        if e:
            key = Tensor2(config.forest, config.trunk)
            terms[key] = terms.get(key, 0) + config.multiplicity() * e
    return LinComb(terms, basis=DELTA_MINUS_SPDE_BASIS)


def delta_minus_spde_primal(m: SpdeMultiIndex, g: GradeBound | int) -> LinComb:
    """``Δ⁻β`` from ``D^w``: ``E = Σ α! S(β)/(S(α) S(F)) ∏ ⟨D^{wᵢ}βᵢ, β̂ᵢ⟩/S(β̂ᵢ)`` over ordered ``β̂ᵢ``."""
    return _delta_minus(m, g, _extraction_primal)


def delta_minus_spde_adjoint(m: SpdeMultiIndex, g: GradeBound | int) -> LinComb:
    """``Δ⁻β`` from the adjoints: ``E = Σ α!/(S(α) S_ext(F)) ∏ ⟨βᵢ, D̄^{wᵢ}β̂ᵢ⟩/S(βᵢ)``."""
    return _delta_minus(m, g, _extraction_adjoint)


# -- ODE embedding ---------------------------------------------------------------


def embed_ode(m: OdeMultiIndex, letter: Sequence[int] = (0,), label: str = TRUNK_LABEL) -> SpdeMultiIndex:
    """``z_k ↦ z_{(label, L^k)}``: an ODE letter index becomes ``k`` copies of the
    u-derivative letter ``L``; words carry no b-letters."""
    letter = tuple(letter)
    u = zero_vector(len(letter))
    return SpdeMultiIndex((SpdeVariable(label, Word(u, (letter,) * k)), e) for k, e in m.items)


def embed_ode_forest(f: OdeForest, letter: Sequence[int] = (0,), label: str = TRUNK_LABEL) -> SpdeForest:
    """An ODE forest grafted through ``Dⁿ`` becomes one ``D^(L)`` marker per member."""
    letter = tuple(letter)
    return SpdeForest(zero_vector(len(letter)), [(embed_ode(b, letter, label), letter) for b in f])


def embed_ode_delta(x: LinComb, letter: Sequence[int] = (0,), label: str = TRUNK_LABEL) -> LinComb:
    """Image of an ODE ``Δ`` value; the primitive ``β ⊗ 1`` goes to the SPDE primitive key."""

    def key(t: Tensor2):
        right = embed_ode(t.right, letter, label)
        if not t.right and len(t.left) == 1:
            return Tensor2(primitive_left(embed_ode(t.left.members[0], letter, label)), right)
        return Tensor2(embed_ode_forest(t.left, letter, label), right)

    return x.map_keys(key, basis=DELTA_SPDE_BASIS)


def embed_ode_delta_minus(x: LinComb, letter: Sequence[int] = (0,), label: str = TRUNK_LABEL) -> LinComb:
    def key(t: Tensor2):
        left = SpdePlainForest(embed_ode(b, letter, label) for b in t.left)
        return Tensor2(left, embed_ode(t.right, letter, TRUNK_LABEL))

    return x.map_keys(key, basis=DELTA_MINUS_SPDE_BASIS)
