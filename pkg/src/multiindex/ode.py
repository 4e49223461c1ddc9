"""ODE multi-indices ``z^β = ∏ z_k^{β(k)}``, their forests, symmetry factors,
the pairing, and the derivations ``D``, ``∂_{z_k}`` and the adjoint ``D̄``."""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from math import factorial, prod
from typing import Iterable, Mapping

from .algebra import Forest, LinComb, linear
from .errors import KindMismatchError, UndefinedInputError

__all__ = [
    "ONE",
    "OdeForest",
    "OdeMultiIndex",
    "adjoint_Dbar",
    "adjoint_Dbar_power",
    "derivation_D",
    "derivation_D_power",
    "forest_symmetry",
    "graft",
    "inner_product",
    "is_populated",
    "norm",
    "partial",
    "population_degree",
    "s_ext",
    "symmetry",
    "z",
]


@total_ordering
class OdeMultiIndex:
    """Monomial ``∏ z_k^{β(k)}`` stored as the sorted tuple of ``(k, β(k))`` with β(k) > 0."""

    __slots__ = ("items", "_hash")
    basis = "ode-multiindex"

    def __init__(self, exponents: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        pairs = exponents.items() if isinstance(exponents, Mapping) else exponents
        acc: dict[int, int] = {}
        for k, e in pairs:
            if k < 0 or e < 0:
                raise ValueError(f"negative index or exponent in ({k}, {e})")
            acc[k] = acc.get(k, 0) + e
        self.items = tuple(sorted((k, e) for k, e in acc.items() if e))
        self._hash = hash(self.items)

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> "OdeMultiIndex":
        """``∏ z_{k_i}`` for the given indices (repetition allowed)."""
        return cls((k, 1) for k in letters)

    def __getitem__(self, k: int) -> int:
        for kk, e in self.items:
            if kk == k:
                return e
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def letters(self) -> list[int]:
        """Indices with repetition, ascending."""
        return [k for k, e in self.items for _ in range(e)]

    def __eq__(self, other) -> bool:
        return isinstance(other, OdeMultiIndex) and self.items == other.items

    def __lt__(self, other: "OdeMultiIndex") -> bool:
        return self.items < other.items

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.items)

    def __mul__(self, other: "OdeMultiIndex") -> "OdeMultiIndex":
        return OdeMultiIndex(self.items + other.items)

    def divides(self, other: "OdeMultiIndex") -> bool:
        return all(other[k] >= e for k, e in self.items)

    def __truediv__(self, other: "OdeMultiIndex") -> "OdeMultiIndex":
        """Exact quotient; raises if ``other`` does not divide ``self``."""
        if not other.divides(self):
            raise ValueError(f"{other!r} does not divide {self!r}")
        out = self.as_dict()
        for k, e in other.items:
            out[k] -= e
        return OdeMultiIndex(out)

    def norm(self) -> int:
        return sum(e for _, e in self.items)

    def population_degree(self) -> int:
        return sum((1 - k) * e for k, e in self.items)

    def symmetry(self) -> int:
        return prod(factorial(k) ** e for k, e in self.items)

    def sub_monomials(self) -> list["OdeMultiIndex"]:
        """All divisors, including the unit and ``self``, in canonical order."""
        out = [()]
        for k, e in self.items:
            out = [prev + ((k, j),) for prev in out for j in range(e + 1)]
        return sorted(OdeMultiIndex(p) for p in out)

    def __repr__(self) -> str:
        if not self.items:
            return "z^0"
        return " ".join(f"z{k}" if e == 1 else f"z{k}^{e}" for k, e in self.items)


ONE = OdeMultiIndex()


def z(*exponents: int) -> OdeMultiIndex:
    """Dense constructor: ``z(2, 1, 1)`` is ``z0^2 z1 z2``."""
    return OdeMultiIndex(enumerate(exponents))


class OdeForest(Forest):
    """Multiset of ODE multi-indices; members sorted by (norm, canonical order)."""

    __slots__ = ()
    member_basis = "ode-multiindex"

    @staticmethod
    def member_order(m: OdeMultiIndex):
        return (m.norm(), m.items)

    def product(self) -> OdeMultiIndex:
        return OdeMultiIndex(pair for m in self.members for pair in m.items)

    def norm(self) -> int:
        return sum(m.norm() for m in self.members)


def population_degree(m: OdeMultiIndex) -> int:
    """``[β] = Σ (1-k) β(k)``."""
    return m.population_degree()


def is_populated(m: OdeMultiIndex) -> bool:
    return m.population_degree() == 1


def norm(x: OdeMultiIndex | OdeForest) -> int:
    return x.norm()


def symmetry(m: OdeMultiIndex) -> int:
    """``S(z^β) = ∏ (k!)^{β(k)}``."""
    return m.symmetry()


def forest_symmetry(f: OdeForest) -> int:
    return f.symmetry()


def s_ext(f: OdeForest):
    """Forest symmetry divided by the symmetry of the merged product."""
    if not f:
        raise UndefinedInputError("S_ext is undefined on the empty forest")
    return Fraction(f.symmetry(), f.product().symmetry())


def _pair_keys(a, b):
    if type(a) is not type(b):
        raise KindMismatchError(f"cannot pair {type(a).__name__} with {type(b).__name__}")
    return a.symmetry() if a == b else 0


def inner_product(a, b):
    """``⟨a, b⟩ = S(a) δ_{a,b}``, extended bilinearly to LinComb arguments.

    Works for any pair of keys of the same kind having a ``symmetry()``.
    """
    if isinstance(a, LinComb) or isinstance(b, LinComb):
        la = a if isinstance(a, LinComb) else LinComb.single(a)
        lb = b if isinstance(b, LinComb) else LinComb.single(b)
        total = Fraction(0)
        for k, c in la.items():
            cb = lb.coefficient(k)
            if cb:
                total += c * cb * k.symmetry()
        kinds_a = {type(k) for k in la}
        kinds_b = {type(k) for k in lb}
        if kinds_a and kinds_b and not kinds_a & kinds_b:
            raise KindMismatchError(f"cannot pair {kinds_a} with {kinds_b}")
        return total
    return Fraction(_pair_keys(a, b))


@linear
def partial(m: OdeMultiIndex, k: int) -> LinComb:
    """``∂_{z_k} z^β = β(k) z^{β - e_k}``."""
    e = m[k]
    if not e:
        return LinComb.zero(OdeMultiIndex.basis)
    return LinComb.single(m / OdeMultiIndex({k: 1}), e)


@linear
def derivation_D(m: OdeMultiIndex) -> LinComb:
    """``D = Σ_k z_{k+1} ∂_{z_k}``: raise one letter index, Leibniz over factors."""
    terms: dict[OdeMultiIndex, int] = {}
    for k, e in m.items:
        key = m / OdeMultiIndex({k: 1}) * OdeMultiIndex({k + 1: 1})
        terms[key] = terms.get(key, 0) + e
    return LinComb(terms, basis=OdeMultiIndex.basis)


def derivation_D_power(m, n: int) -> LinComb:
    x = m if isinstance(m, LinComb) else LinComb.single(m)
    for _ in range(n):
        x = derivation_D(x)
    return x.with_basis(OdeMultiIndex.basis)


@linear
def adjoint_Dbar(m: OdeMultiIndex) -> LinComb:
    """Adjoint of ``D`` for the symmetry pairing.

    ``D̄ z^β = Σ_{k≥1} k (β(k-1)+1)/β(k) · z_{k-1} ∂_{z_k} z^β``; the ``β(k)``
    cancels against ``∂_{z_k}``, leaving the integer weight ``k (β(k-1)+1)``.
    """
    terms: dict[OdeMultiIndex, int] = {}
    for k, _ in m.items:
        if k == 0:
            continue
        key = m / OdeMultiIndex({k: 1}) * OdeMultiIndex({k - 1: 1})
        terms[key] = terms.get(key, 0) + k * (m[k - 1] + 1)
    return LinComb(terms, basis=OdeMultiIndex.basis)


def adjoint_Dbar_power(m, n: int) -> LinComb:
    x = m if isinstance(m, LinComb) else LinComb.single(m)
    for _ in range(n):
        x = adjoint_Dbar(x)
    return x.with_basis(OdeMultiIndex.basis)


def graft(a: OdeMultiIndex, b: OdeMultiIndex) -> LinComb:
    """Novikov product ``a ▷ b = a · D(b)``."""
    return LinComb.single(a) * derivation_D(b)
