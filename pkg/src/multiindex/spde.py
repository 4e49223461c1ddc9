"""SPDE multi-indices over words ``w = u v``.

A word is a commutative block of letters ``b_i`` (recorded as the count
vector ``u ∈ ℕ^{d+1}``) followed by a multiset ``v`` of letters ``𝐧 ∈ ℕ^{d+1}``.
That is the normal form under ``b_i b_j = b_j b_i``, ``𝐧𝐦 = 𝐦𝐧`` and
``𝐧 b_i = b_i 𝐧 + (𝐧 - e_i)``. Variables ``z_{(𝔩, w)}`` carry a label; monomials in
them are the SPDE multi-indices. The label ``"0"`` is reserved for trunks.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from math import comb, factorial, prod
from typing import Iterable, Mapping, Sequence, Union

from .algebra import Forest, LinComb, linear
from .errors import KindMismatchError, UndefinedInputError
from .ode import inner_product as _pairing

__all__ = [
    "TRUNK_LABEL",
    "RawWord",
    "SpdeForest",
    "SpdeMultiIndex",
    "SpdePlainForest",
    "SpdeVariable",
    "Word",
    "D_word",
    "adjoint_D_word",
    "adjoint_Dn",
    "adjoint_partial",
    "adjoint_partial_k",
    "canonicalize",
    "derivation_Dn",
    "derivation_partial",
    "derivation_partial_k",
    "forest_symmetry_spde",
    "grading",
    "inner_product_spde",
    "is_populated_spde",
    "partial_variable",
    "population_degree_spde",
    "s_ext_spde",
    "symmetry_spde",
    "unit_vector",
    "var",
    "zero_vector",
]

TRUNK_LABEL = "0"

Vec = tuple[int, ...]


def zero_vector(dim: int) -> Vec:
    return (0,) * dim


def unit_vector(i: int, dim: int) -> Vec:
    return tuple(1 if j == i else 0 for j in range(dim))


def _leq(a: Vec, b: Vec) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def _vec_factorial(a: Vec) -> int:
    return prod(factorial(x) for x in a)


def _boxes(upper: Vec):
    """All vectors ``0 ≤ ℓ ≤ upper`` componentwise."""
    out = [()]
    for x in upper:
        out = [p + (j,) for p in out for j in range(x + 1)]
    return out


@dataclass(frozen=True, order=True)
class Word:
    """Canonical word: b-letter counts ``u`` and sorted 𝐧-letters ``v``."""

    u: Vec
    v: tuple[Vec, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "v", tuple(sorted(tuple(x) for x in self.v)))
        for letter in self.v:
            if len(letter) != len(self.u):
                raise ValueError(f"letter {letter} does not match dimension {len(self.u)}")
        if any(x < 0 for x in self.u) or any(x < 0 for letter in self.v for x in letter):
            raise ValueError("word entries must be natural numbers")

    @property
    def dim(self) -> int:
        return len(self.u)

    def __len__(self) -> int:
        """``|w|``: number of 𝐧-letters; the b-letters do not count."""
        return len(self.v)

    def factorial(self) -> int:
        """``w! = u! ∏ mult(𝐧)!``."""
        return _vec_factorial(self.u) * prod(factorial(r) for r in Counter(self.v).values())

    def letter_norm(self) -> int:
        return sum(sum(letter) for letter in self.v)

    def b_mass(self) -> int:
        return sum(self.u)

    def add_letter(self, letter: Vec) -> "Word":
        return Word(self.u, self.v + (tuple(letter),))

    def remove_letter(self, letter: Vec) -> "Word":
        v = list(self.v)
        v.remove(tuple(letter))
        return Word(self.u, v)

    def with_u(self, u: Vec) -> "Word":
        return Word(u, self.v)


@dataclass(frozen=True, order=True)
class SpdeVariable:
    """Abstract variable ``z_{(𝔩, w)}``."""

    label: str
    word: Word
    basis = "spde-variable"

    def symmetry(self) -> int:
        return self.word.factorial()

    def __repr__(self) -> str:
        from .textio import render_variable

        return render_variable(self)


def var(label: str, u: Sequence[int], v: Iterable[Sequence[int]] = ()) -> SpdeVariable:
    return SpdeVariable(str(label), Word(tuple(u), tuple(tuple(x) for x in v)))


@total_ordering
class SpdeMultiIndex:
    """Monomial in SPDE variables, stored as the sorted tuple of ``(variable, exponent)``."""

    __slots__ = ("items", "_hash")
    basis = "spde-multiindex"

    def __init__(self, exponents: Mapping[SpdeVariable, int] | Iterable[tuple[SpdeVariable, int]] = ()):
        pairs = exponents.items() if isinstance(exponents, Mapping) else exponents
        acc: dict[SpdeVariable, int] = {}
        for x, e in pairs:
            if e < 0:
                raise ValueError(f"negative exponent for {x!r}")
            acc[x] = acc.get(x, 0) + e
        self.items = tuple(sorted((x, e) for x, e in acc.items() if e))
        self._hash = hash(self.items)

    @classmethod
    def of(cls, *variables: SpdeVariable) -> "SpdeMultiIndex":
        return cls((x, 1) for x in variables)

    def __getitem__(self, x: SpdeVariable) -> int:
        for y, e in self.items:
            if y == x:
                return e
        return 0

    def variables(self) -> list[SpdeVariable]:
        """Variables with repetition, in canonical order."""
        return [x for x, e in self.items for _ in range(e)]

    def __eq__(self, other) -> bool:
        return isinstance(other, SpdeMultiIndex) and self.items == other.items

    def __lt__(self, other: "SpdeMultiIndex") -> bool:
        return self.items < other.items

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.items)

    def __mul__(self, other: "SpdeMultiIndex") -> "SpdeMultiIndex":
        return SpdeMultiIndex(self.items + other.items)

    def divides(self, other: "SpdeMultiIndex") -> bool:
        return all(other[x] >= e for x, e in self.items)

    def __truediv__(self, other: "SpdeMultiIndex") -> "SpdeMultiIndex":
        if not other.divides(self):
            raise ValueError(f"{other!r} does not divide {self!r}")
        out = dict(self.items)
        for x, e in other.items:
            out[x] -= e
        return SpdeMultiIndex(out)

    def replace(self, old: SpdeVariable, new: SpdeVariable) -> "SpdeMultiIndex":
        """Swap one factor ``old`` for ``new``."""
        return self / SpdeMultiIndex.of(old) * SpdeMultiIndex.of(new)

    def norm(self) -> int:
        return sum(e for _, e in self.items)

    def population_degree(self) -> int:
        return sum((1 - len(x.word)) * e for x, e in self.items)

    def symmetry(self) -> int:
        return prod(x.word.factorial() ** e for x, e in self.items)

    def letter_count(self) -> int:
        return sum(len(x.word) * e for x, e in self.items)

    def letter_norm(self) -> int:
        return sum(x.word.letter_norm() * e for x, e in self.items)

    def b_mass(self) -> int:
        return sum(x.word.b_mass() * e for x, e in self.items)

    def labels(self) -> set[str]:
        return {x.label for x, _ in self.items}

    def letters(self) -> list[Vec]:
        """All 𝐧-letters of all factors, with repetition."""
        return sorted(letter for x, e in self.items for _ in range(e) for letter in x.word.v)

    def sub_monomials(self) -> list["SpdeMultiIndex"]:
        out = [()]
        for x, e in self.items:
            out = [prev + ((x, j),) for prev in out for j in range(e + 1)]
        return sorted(SpdeMultiIndex(p) for p in out)

    def __repr__(self) -> str:
        from .textio import render_key

        return render_key(self)


SPDE_ONE = SpdeMultiIndex()


def _member_order(m: SpdeMultiIndex):
    return (m.norm(), m.items)


class SpdePlainForest(Forest):
    """Multiset of SPDE multi-indices (left factors of the extraction coproduct)."""

    __slots__ = ()
    member_basis = "spde-multiindex"
    member_order = staticmethod(_member_order)

    def product(self) -> SpdeMultiIndex:
        return SpdeMultiIndex(pair for m in self.members for pair in m.items)

    def norm(self) -> int:
        return sum(m.norm() for m in self.members)


@total_ordering
class SpdeForest:
    """``∂^k ∏̃ z^{βᵢ} D^(𝐧ᵢ)``: a global ``k`` and a multiset of (member, marker) pairs.

    Ordered by grading first, so truncated coproducts list terms as stable prefixes.
    """

    __slots__ = ("k", "items", "_hash")
    basis = "spde-forest"

    def __init__(self, k: Sequence[int], items: Iterable[tuple[SpdeMultiIndex, Sequence[int]]] = ()):
        self.k = tuple(k)
        pairs = [(m, tuple(n)) for m, n in items]
        for _, n in pairs:
            if len(n) != len(self.k):
                raise ValueError(f"marker {n} does not match dimension {len(self.k)}")
        self.items = tuple(sorted(pairs, key=lambda p: (_member_order(p[0]), p[1])))
        self._hash = hash((self.k, self.items))

    @property
    def dim(self) -> int:
        return len(self.k)

    @property
    def members(self) -> tuple[SpdeMultiIndex, ...]:
        return tuple(m for m, _ in self.items)

    @property
    def markers(self) -> tuple[Vec, ...]:
        return tuple(n for _, n in self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items) or any(self.k)

    def __eq__(self, other) -> bool:
        return isinstance(other, SpdeForest) and self.k == other.k and self.items == other.items

    def __hash__(self) -> int:
        return self._hash

    def _order_key(self):
        return (grading(self), self.k, tuple((_member_order(m), n) for m, n in self.items))

    def __lt__(self, other: "SpdeForest") -> bool:
        return self._order_key() < other._order_key()

    def product(self) -> SpdeMultiIndex:
        return SpdeMultiIndex(pair for m in self.members for pair in m.items)

    def symmetry(self) -> int:
        """``k! ∏ rⱼ! S(z^{βⱼ})^{rⱼ}``, multiplicities counted on (member, marker) pairs."""
        counts = Counter(self.items)
        return _vec_factorial(self.k) * prod(factorial(r) * m.symmetry() ** r for (m, _), r in counts.items())

    def __repr__(self) -> str:
        from .textio import render_key

        return render_key(self)


# -- scalar invariants ----------------------------------------------------------


def population_degree_spde(m: SpdeMultiIndex) -> int:
    """``Σ (1 - |w|) β(𝔩, w)``."""
    return m.population_degree()


def is_populated_spde(m: SpdeMultiIndex) -> bool:
    return m.population_degree() == 1


def symmetry_spde(m: SpdeMultiIndex) -> int:
    """``S(z^β) = ∏ (w!)^{β(𝔩, w)}``."""
    return m.symmetry()


def forest_symmetry_spde(f: SpdeForest | SpdePlainForest) -> int:
    return f.symmetry()


def s_ext_spde(f: SpdeForest | SpdePlainForest) -> Fraction:
    """Forest symmetry over the symmetry of the merged members."""
    if not f and not isinstance(f, SpdeForest):
        raise UndefinedInputError("S_ext is undefined on the empty forest")
    return Fraction(f.symmetry(), f.product().symmetry())


def inner_product_spde(a, b) -> Fraction:
    """``⟨a, b⟩ = S(a) δ_{a,b}`` on multi-indices or forests, bilinear on combinations."""
    return _pairing(a, b)


def grading(x) -> tuple[int, int]:
    """Bigrading ``(letter-norm mass, letters plus nodes)``.

    The first entry adds the norms of every 𝐧-letter, of every forest marker and
    of the global ``k``; the second counts 𝐧-letters, markers and variables.
    """
    if isinstance(x, SpdeMultiIndex):
        return (x.letter_norm(), x.letter_count() + x.norm())
    if isinstance(x, SpdeForest):
        first = sum(x.k) + sum(m.letter_norm() + sum(n) for m, n in x.items)
        second = sum(m.letter_count() + m.norm() + 1 for m, _ in x.items)
        return (first, second)
    if isinstance(x, SpdePlainForest):
        return (sum(m.letter_norm() for m in x), sum(m.letter_count() + m.norm() for m in x))
    if isinstance(x, SpdeVariable):
        return grading(SpdeMultiIndex.of(x))
    raise KindMismatchError(f"no grading for {type(x).__name__}")


# -- derivations ----------------------------------------------------------------


def _single_factor(m: SpdeMultiIndex, x: SpdeVariable, image: dict[SpdeVariable, Fraction | int]) -> dict:
    """Leibniz contribution of rewriting one factor ``x`` of ``m`` by ``image``."""
    e = m[x]
    rest = m / SpdeMultiIndex.of(x)
    return {rest * SpdeMultiIndex.of(y): e * c for y, c in image.items()}


def _leibniz(m: SpdeMultiIndex, per_variable) -> LinComb:
    out: dict = {}
    for x, _ in m.items:
        for key, c in _single_factor(m, x, per_variable(x)).items():
            out[key] = out.get(key, 0) + c
    return LinComb(out, basis=SpdeMultiIndex.basis)


def _Dn_variable(x: SpdeVariable, n: Vec) -> dict[SpdeVariable, int]:
    """``D^(𝐧) z_{(𝔩, uv)} = Σ_{ℓ ≤ u, ℓ ≤ 𝐧} binom(u, ℓ) z_{(𝔩, (u-ℓ)(𝐧-ℓ)v)}``."""
    u = x.word.u
    out: dict[SpdeVariable, int] = {}
    for ell in _boxes(tuple(min(a, b) for a, b in zip(u, n))):
        w = Word(_sub(u, ell), x.word.v + (_sub(n, ell),))
        y = SpdeVariable(x.label, w)
        out[y] = out.get(y, 0) + prod(comb(a, b) for a, b in zip(u, ell))
    return out


@linear
def derivation_Dn(m: SpdeMultiIndex, n: Sequence[int]) -> LinComb:
    """``D^(𝐧)``: prepend the letter 𝐧 to one word, expanded in canonical words."""
    n = tuple(n)
    return _leibniz(m, lambda x: _Dn_variable(x, n))


@linear
def derivation_partial(m: SpdeMultiIndex, i: int) -> LinComb:
    """``∂ᵢ``: prepend ``bᵢ`` to one word."""

    def image(x: SpdeVariable):
        u = list(x.word.u)
        u[i] += 1
        return {SpdeVariable(x.label, x.word.with_u(tuple(u))): 1}

    return _leibniz(m, image)


def derivation_partial_k(m, k: Sequence[int]) -> LinComb:
    """``∂^k = ∏ ∂ᵢ^{kᵢ}``."""
    out = m if isinstance(m, LinComb) else LinComb.single(m)
    for i, ki in enumerate(k):
        for _ in range(ki):
            out = derivation_partial(out, i)
    return out.with_basis(SpdeMultiIndex.basis)


def D_word(m, w: Word) -> LinComb:
    """``D^w = ∂^u ∘ ∏ D^(vⱼ)``: the 𝐧-letters act first, then the b-letters."""
    out = m if isinstance(m, LinComb) else LinComb.single(m)
    for letter in w.v:
        out = derivation_Dn(out, letter)
    return derivation_partial_k(out, w.u)


@linear
def partial_variable(m: SpdeMultiIndex, x: SpdeVariable) -> LinComb:
    """``∂_{z_x} z^β = β(x) z^{β - e_x}``."""
    e = m[x]
    if not e:
        return LinComb.zero(SpdeMultiIndex.basis)
    return LinComb.single(m / SpdeMultiIndex.of(x), e)


# -- adjoints -------------------------------------------------------------------


@linear
def adjoint_partial(m: SpdeMultiIndex, i: int) -> LinComb:
    """Adjoint of ``∂ᵢ``: strip one ``bᵢ`` from a factor ``y``, producing ``x``.

    Weight ``u_y[bᵢ] (β̂(x) + 1)``, the ``β̂(y)`` of the formula being absorbed by ``∂_{z_y}``.
    """
    out: dict = {}
    for y, _ in m.items:
        if y.word.u[i] == 0:
            continue
        u = list(y.word.u)
        u[i] -= 1
        x = SpdeVariable(y.label, y.word.with_u(tuple(u)))
        key = m.replace(y, x)
        out[key] = out.get(key, 0) + y.word.u[i] * (m[x] + 1)
    return LinComb(out, basis=SpdeMultiIndex.basis)


def adjoint_partial_k(m, k: Sequence[int]) -> LinComb:
    """``∂̄^k``: the single-direction adjoint applied ``kᵢ`` times per direction."""
    out = m if isinstance(m, LinComb) else LinComb.single(m)
    for i, ki in enumerate(k):
        for _ in range(ki):
            out = adjoint_partial(out, i)
    return out.with_basis(SpdeMultiIndex.basis)


@linear
def adjoint_Dn(m: SpdeMultiIndex, n: Sequence[int]) -> LinComb:
    """Adjoint of ``D^(𝐧)``.

    For a factor ``y = (u, v)`` and a letter ``𝐦 ∈ v`` with ``ℓ = 𝐧 - 𝐦 ≥ 0``, the
    factor becomes ``x = (u + ℓ, v - {𝐦})`` with weight ``v[𝐦] (β̂(x) + 1) / ℓ!``.
    """
    n = tuple(n)
    out: dict = {}
    for y, _ in m.items:
        for letter, mult in Counter(y.word.v).items():
            if not _leq(letter, n):
                continue
            ell = _sub(n, letter)
            w = y.word.remove_letter(letter).with_u(_add(y.word.u, ell))
            x = SpdeVariable(y.label, w)
            key = m.replace(y, x)
            out[key] = out.get(key, 0) + Fraction(mult * (m[x] + 1), _vec_factorial(ell))
    return LinComb(out, basis=SpdeMultiIndex.basis)


def adjoint_D_word(m, w: Word) -> LinComb:
    """Adjoint of ``D^w``: ``∏ D̄^(vⱼ) ∘ ∂̄^u`` (the b-letters are stripped first)."""
    out = adjoint_partial_k(m, w.u)
    for letter in w.v:
        out = adjoint_Dn(out, letter)
    return out.with_basis(SpdeMultiIndex.basis)


# -- raw words ------------------------------------------------------------------

Letter = Union[int, Vec]


@dataclass(frozen=True)
class RawWord:
    """Letters in arbitrary order: an ``int`` i stands for ``bᵢ``, a tuple for a letter 𝐧."""

    letters: tuple[Letter, ...]
    dim: int = field(default=0)

    def __post_init__(self):
        letters = tuple(a if isinstance(a, int) else tuple(a) for a in self.letters)
        object.__setattr__(self, "letters", letters)
        if not self.dim:
            dims = {len(a) for a in letters if isinstance(a, tuple)}
            if len(dims) > 1:
                raise ValueError("letters of different dimensions")
            if dims:
                object.__setattr__(self, "dim", dims.pop())
            else:
                object.__setattr__(self, "dim", max(letters, default=-1) + 1)


def _adjacencies(seq: tuple) -> list[int]:
    return [j for j in range(len(seq) - 1) if isinstance(seq[j], tuple) and isinstance(seq[j + 1], int)]


def canonicalize(rw: RawWord, label: str, strategy: str = "leftmost", seed: int | None = None) -> LinComb:
    """Normal form of ``z_{(𝔩, rw)}`` under the letter relations.

    Repeatedly rewrites one adjacency ``𝐧 bᵢ`` into ``bᵢ 𝐧 + (𝐧 - eᵢ)``, the second
    branch dropped when ``𝐧ᵢ = 0``. ``strategy`` (leftmost, rightmost, random)
    picks the adjacency; the result does not depend on it.
    """
    rng = random.Random(seed)
    pending: dict[tuple, int] = {rw.letters: 1}
    done: dict[SpdeVariable, int] = {}
    while pending:
        seq, c = pending.popitem()
        spots = _adjacencies(seq)
        if not spots:
            u = [0] * rw.dim
            v = []
            for a in seq:
                if isinstance(a, int):
                    u[a] += 1
                else:
                    v.append(a)
            x = SpdeVariable(str(label), Word(tuple(u), v))
            done[x] = done.get(x, 0) + c
            continue
        if strategy == "leftmost":
            j = spots[0]
        elif strategy == "rightmost":
            j = spots[-1]
        elif strategy == "random":
            j = rng.choice(spots)
        else:
            raise ValueError(f"unknown rewriting strategy {strategy!r}")
        letter, i = seq[j], seq[j + 1]
        swapped = seq[:j] + (i, letter) + seq[j + 2 :]
        pending[swapped] = pending.get(swapped, 0) + c
        if letter[i] >= 1:
            lowered = seq[:j] + (_sub(letter, unit_vector(i, len(letter))),) + seq[j + 2 :]
            pending[lowered] = pending.get(lowered, 0) + c
    return LinComb(done, basis=SpdeVariable.basis)
