"""Exact formal linear combinations over ordered basis keys.

Every basis key type used in the library is hashable, totally ordered and
carries a class attribute ``basis`` naming its basis for serialisation.
Coefficients are :class:`fractions.Fraction`; floats are rejected.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import factorial, prod
from numbers import Rational
from typing import Any, Callable, Iterable, Iterator, Mapping, NamedTuple

__all__ = [
    "Forest",
    "LinComb",
    "Tensor2",
    "add",
    "as_rational",
    "basis_of",
    "coefficient_of",
    "linear",
    "scale",
    "tensor",
]


def as_rational(c) -> Fraction:
    """Coerce an exact scalar to a Fraction; floats are not exact and are refused."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, bool) or not isinstance(c, Rational):
        raise TypeError(f"coefficient must be an exact rational, got {type(c).__name__}")
    return Fraction(c)


def basis_of(key) -> str:
    return key.basis


class Tensor2(NamedTuple):
    """Elementary tensor ``left ⊗ right``; ordered componentwise."""

    left: Any
    right: Any

    @property
    def basis(self) -> str:
        return f"tensor({self.left.basis},{self.right.basis})"


class LinComb(Mapping):
    """Immutable finite sum ``Σ c_k · k`` with nonzero rational coefficients.

    Iteration follows the total order of the keys, so rendering is deterministic.
    """

    __slots__ = ("_terms", "_basis", "_order")

    def __init__(self, terms: Mapping | Iterable = (), basis: str | None = None):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            c = as_rational(c)
            if c:
                acc[key] = acc.get(key, 0) + c
        self._terms = {k: c for k, c in acc.items() if c}
        self._basis = basis
        self._order = None

    @classmethod
    def single(cls, key, coeff=1) -> "LinComb":
        return cls({key: coeff})

    @classmethod
    def zero(cls, basis: str | None = None) -> "LinComb":
        return cls((), basis=basis)

    @property
    def basis(self) -> str | None:
        if self._basis is None and self._terms:
            return next(iter(self._terms)).basis
        return self._basis

    def with_basis(self, basis: str | None) -> "LinComb":
        return LinComb(self._terms, basis=basis or self._basis)

    # Mapping protocol -------------------------------------------------------
    def __getitem__(self, key) -> Fraction:
        return self._terms[key]

    def __iter__(self) -> Iterator:
        if self._order is None:
            self._order = sorted(self._terms)
        return iter(self._order)

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, key) -> bool:
        return key in self._terms

    def coefficient(self, key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def support(self) -> list:
        return list(self)

    # Arithmetic -------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, LinComb):
            return self._terms == other._terms
        if isinstance(other, int) and other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: "LinComb") -> "LinComb":
        if not isinstance(other, LinComb):
            return NotImplemented
        merged = dict(self._terms)
        for k, c in other._terms.items():
            merged[k] = merged.get(k, 0) + c
        return LinComb(merged, basis=self._basis or other._basis)

    def __neg__(self) -> "LinComb":
        return LinComb({k: -c for k, c in self._terms.items()}, basis=self._basis)

    def __sub__(self, other: "LinComb") -> "LinComb":
        if not isinstance(other, LinComb):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, c) -> "LinComb":
        c = as_rational(c)
        return LinComb({k: c * v for k, v in self._terms.items()}, basis=self._basis)

    def __mul__(self, other):
        """Scalar multiple, or the bilinear extension of the key product ``*``."""
        if isinstance(other, LinComb):
            out: dict = {}
            for k1, c1 in self._terms.items():
                for k2, c2 in other._terms.items():
                    k = k1 * k2
                    out[k] = out.get(k, 0) + c1 * c2
            return LinComb(out, basis=self._basis or other._basis)
        return self.__rmul__(other)

    def apply(self, f: Callable[[Any], "LinComb"], basis: str | None = None) -> "LinComb":
        """Linear extension of ``f`` (key -> LinComb)."""
        out: dict = {}
        for k, c in self._terms.items():
            for k2, c2 in f(k)._terms.items():
                out[k2] = out.get(k2, 0) + c * c2
        return LinComb(out, basis=basis)

    def map_keys(self, f: Callable[[Any], Any], basis: str | None = None) -> "LinComb":
        out: dict = {}
        for k, c in self._terms.items():
            k2 = f(k)
            out[k2] = out.get(k2, 0) + c
        return LinComb(out, basis=basis)

    def filter(self, pred: Callable[[Any], bool]) -> "LinComb":
        return LinComb({k: c for k, c in self._terms.items() if pred(k)}, basis=self._basis)

    def __repr__(self) -> str:
        if not self._terms:
            return "LinComb(0)"
        body = " + ".join(f"{c}*{k!r}" for k, c in self.items())
        return f"LinComb({body})"


def add(a: LinComb, b: LinComb) -> LinComb:
    return a + b


def scale(c, a: LinComb) -> LinComb:
    return as_rational(c) * a


def coefficient_of(a: LinComb, key) -> Fraction:
    return a.coefficient(key)


def tensor(left: LinComb, right: LinComb) -> LinComb:
    """Bilinear tensor product of two combinations."""
    terms = {}
    for kl, cl in left.items():
        for kr, cr in right.items():
            terms[Tensor2(kl, kr)] = cl * cr
    basis = None
    if left.basis and right.basis:
        basis = f"tensor({left.basis},{right.basis})"
    return LinComb(terms, basis=basis)


def linear(fn):
    """Decorate ``fn(key, *args)`` so that a LinComb first argument is handled linearly."""

    def wrapper(x, *args, **kwargs):
        if isinstance(x, LinComb):
            return x.apply(lambda k: fn(k, *args, **kwargs))
        return fn(x, *args, **kwargs)

    wrapper.__name__ = fn.__name__
    wrapper.__qualname__ = fn.__qualname__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


class Forest:
    """Commutative multiset of basis keys (the forest product ⊙).

    ``member_order`` gives the member sort key; members must provide
    ``symmetry()``. The empty forest is the unit.
    """

    __slots__ = ("members", "_hash")
    member_basis = "unknown"

    def __init__(self, members: Iterable = ()):
        self.members = tuple(sorted(members, key=self.member_order))
        self._hash = hash((type(self).__name__, self.members))

    @staticmethod
    def member_order(m):
        return m

    @property
    def basis(self) -> str:
        return f"forest({self.member_basis})"

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __bool__(self) -> bool:
        return bool(self.members)

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and self.members == other.members

    def __hash__(self) -> int:
        return self._hash

    def _order_key(self):
        return tuple(self.member_order(m) for m in self.members)

    def __lt__(self, other) -> bool:
        return self._order_key() < other._order_key()

    def __le__(self, other) -> bool:
        return self._order_key() <= other._order_key()

    def __gt__(self, other) -> bool:
        return self._order_key() > other._order_key()

    def __mul__(self, other: "Forest") -> "Forest":
        return type(self)(self.members + other.members)

    def multiplicities(self) -> Counter:
        return Counter(self.members)

    def symmetry(self) -> int:
        """``∏ r! · S(member)^r`` over distinct members with multiplicity r."""
        return prod(factorial(r) * m.symmetry() ** r for m, r in self.multiplicities().items())

    def product(self):
        """Pointwise (commutative monomial) product of the members."""
        out = None
        for m in self.members:
            out = m if out is None else out * m
        return out

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self.members)!r})"
