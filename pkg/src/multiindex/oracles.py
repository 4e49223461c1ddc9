"""Brute-force oracles and the algebraic-law suites.

The oracles rebuild each coproduct from the duality with its product,
``coefficient(F ⊗ x) = ⟨F ★ x, β⟩ / (S(F) S(x))``, over a candidate set that
over-approximates the support. They use the products and the pairing, never
the coproduct formulae. SPDE candidates come from conservation laws alone:
derivations keep the number of variables, only ever add 𝐧-letters, and shift
the vector ``Σletters - Σu`` by exactly what they insert.
"""
from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable

from .algebra import LinComb, Tensor2
from .errors import KindMismatchError, UnknownLawError
from .ode import (
    ONE,
    OdeForest,
    OdeMultiIndex,
    adjoint_Dbar,
    derivation_D,
    graft,
    inner_product,
    is_populated,
)
from .ode_calculus import (
    delta_adjoint,
    delta_minus_adjoint,
    delta_minus_primal,
    delta_primal,
    enumerate_populated,
    insert,
    star1,
    star2,
)
from .spde import (
    SPDE_ONE,
    TRUNK_LABEL,
    RawWord,
    SpdeForest,
    SpdeMultiIndex,
    SpdePlainForest,
    SpdeVariable,
    Word,
    adjoint_Dn,
    adjoint_partial,
    canonicalize,
    derivation_Dn,
    derivation_partial,
    derivation_partial_k,
    grading,
    is_populated_spde,
    unit_vector,
)
from .spde_calculus import (
    delta_minus_spde_adjoint,
    delta_minus_spde_primal,
    delta_spde_adjoint,
    delta_spde_primal,
    embed_ode,
    embed_ode_delta,
    embed_ode_delta_minus,
    enumerate_spde_forests,
    star1_spde,
    star2_spde,
    vectors_up_to,
)

__all__ = [
    "LAWS",
    "LawReport",
    "ode_delta_candidates",
    "ode_delta_minus_candidates",
    "ode_multiindices",
    "oracle_delta",
    "oracle_delta_minus",
    "oracle_delta_minus_spde",
    "oracle_delta_spde",
    "run_law_suite",
    "spde_delta_candidates",
    "spde_delta_minus_candidates",
    "spde_multiindices",
]


def _pair(x: LinComb, m) -> Fraction:
    """Pairing that treats keys of another kind as orthogonal."""
    x = x.filter(lambda k: type(k) is type(m))
    return inner_product(x, LinComb.single(m))


# -- ODE candidate sets and oracles --------------------------------------------------


def ode_multiindices(max_norm: int, max_index: int | None = None) -> list[OdeMultiIndex]:
    """All multi-indices of norm ≤ max_norm with letter indices ≤ max_index."""
    top = max_norm - 1 if max_index is None else max_index
    out = [ONE]
    for size in range(1, max_norm + 1):
        out += [OdeMultiIndex.from_letters(c) for c in itertools.combinations_with_replacement(range(top + 1), size)]
    return sorted(out, key=lambda m: (m.norm(), m.items))


def _ode_forests(total: int, exact: bool) -> list[OdeForest]:
    pool = enumerate_populated(total)
    out = []
    for r in range(0, total + 1):
        for combo in itertools.combinations_with_replacement(pool, r):
            size = sum(m.norm() for m in combo)
            if size == total or (not exact and size <= total):
                out.append(OdeForest(combo))
    return out


def ode_delta_candidates(m: OdeMultiIndex) -> list[tuple[OdeForest, OdeMultiIndex]]:
    """Every (forest, β̄) with populated pieces whose norms fit inside ``m``."""
    n = m.norm()
    trunks = [ONE] + enumerate_populated(n)
    return [(f, b) for f in _ode_forests(n, exact=False) for b in trunks if f.norm() + b.norm() == n]


def ode_delta_minus_candidates(m: OdeMultiIndex) -> list[tuple[OdeForest, OdeMultiIndex]]:
    """Every (forest, α) with populated members of total norm ``|m|`` and ``|α|`` members."""
    n = m.norm()
    by_norm: dict[int, list[OdeMultiIndex]] = {}
    for t in enumerate_populated(n):
        by_norm.setdefault(t.norm(), []).append(t)
    return [(f, t) for f in _ode_forests(n, exact=True) if f for t in by_norm.get(len(f), [])]


def _weighted(terms: Iterable[tuple[Tensor2, Fraction]], basis: str) -> LinComb:
    return LinComb({k: c for k, c in terms if c}, basis=basis)


def oracle_delta(m: OdeMultiIndex, candidates=None) -> LinComb:
    """``Δm`` from ``⟨F ★₂ β̄, m⟩ / (S(F) S(β̄))``."""
    candidates = ode_delta_candidates(m) if candidates is None else candidates
    return _weighted(
        ((Tensor2(f, b), _pair(star2(f, b), m) / (f.symmetry() * b.symmetry())) for f, b in candidates),
        "tensor(forest(ode-multiindex),ode-multiindex)",
    )


def oracle_delta_minus(m: OdeMultiIndex, candidates=None) -> LinComb:
    """``Δ⁻m`` from ``⟨F ★₁ α, m⟩ / (S(F) S(α))``."""
    candidates = ode_delta_minus_candidates(m) if candidates is None else candidates
    return _weighted(
        ((Tensor2(f, t), _pair(star1(f, t), m) / (f.symmetry() * t.symmetry())) for f, t in candidates),
        "tensor(forest(ode-multiindex),ode-multiindex)",
    )


# -- SPDE candidate sets and oracles -------------------------------------------------


def _removals(variables: list[SpdeVariable], count: int):
    """Ways to delete ``count`` 𝐧-letters in total across the factor occurrences."""
    per = []
    for x in variables:
        subs = set()
        for r in range(len(x.word.v) + 1):
            subs.update(itertools.combinations(x.word.v, r))
        per.append(sorted(subs))

    def rec(i, left, chosen):
        if i == len(variables):
            if left == 0:
                yield tuple(chosen)
            return
        for s in per[i]:
            if len(s) <= left:
                chosen.append(s)
                yield from rec(i + 1, left - len(s), chosen)
                chosen.pop()

    yield from rec(0, count, [])


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _vector_distributions(total: tuple[int, ...], parts: int):
    per_axis = [list(_compositions(t, parts)) for t in total]
    for choice in itertools.product(*per_axis):
        yield [tuple(axis[j] for axis in choice) for j in range(parts)]


def conserving_preimages(target: SpdeMultiIndex, inserted_b, inserted_letters) -> set[SpdeMultiIndex]:
    """Monomials that a derivation word with b-part ``inserted_b`` and letters
    ``inserted_letters`` could map onto ``target``, judged by conservation only.

    ``D^(𝐧)`` shifts ``Σletters - Σu`` by ``𝐧`` and ``∂ᵢ`` shifts it by ``-eᵢ``.
    """
    variables = target.variables()
    dim = variables[0].word.dim
    base = [sum(x.word.u[i] for x in variables) for i in range(dim)]
    shift = [sum(n[i] for n in inserted_letters) - inserted_b[i] for i in range(dim)]
    out = set()
    for removal in _removals(variables, len(inserted_letters)):
        removed = [sum(n[i] for s in removal for n in s) for i in range(dim)]
        total = tuple(base[i] - removed[i] + shift[i] for i in range(dim))
        if any(t < 0 for t in total):
            continue
        for us in _vector_distributions(total, len(variables)):
            xs = []
            for x, s, u in zip(variables, removal, us):
                v = list(x.word.v)
                for n in s:
                    v.remove(n)
                xs.append(SpdeVariable(x.label, Word(u, v)))
            out.add(SpdeMultiIndex.of(*xs))
    return out


def spde_delta_candidates(m: SpdeMultiIndex, g: int) -> list[tuple[SpdeForest, SpdeMultiIndex]]:
    out = []
    for f in enumerate_spde_forests(m, g):
        rem = m / f.product()
        if not f:
            out.append((f, m))
            continue
        if not rem:
            out.append((f, SPDE_ONE))
            continue
        for b in sorted(conserving_preimages(rem, f.k, f.markers)):
            if is_populated_spde(b):
                out.append((f, b))
    return out


def oracle_delta_spde(m: SpdeMultiIndex, g: int, candidates=None) -> LinComb:
    candidates = spde_delta_candidates(m, g) if candidates is None else candidates
    return _weighted(
        ((Tensor2(f, b), _pair(star2_spde(f, b), m) / (f.symmetry() * b.symmetry())) for f, b in candidates),
        "tensor(spde-forest,spde-multiindex)",
    )


def _unordered_decompositions(m: SpdeMultiIndex):
    divisors = [d for d in m.sub_monomials() if d]

    def rec(start, rem, chosen):
        if not rem:
            yield tuple(chosen)
            return
        for i in range(start, len(divisors)):
            if divisors[i].divides(rem):
                chosen.append(divisors[i])
                yield from rec(i, rem / divisors[i], chosen)
                chosen.pop()

    yield from rec(0, m, [])


def spde_delta_minus_candidates(m: SpdeMultiIndex, g: int) -> list[tuple[SpdePlainForest, SpdeMultiIndex]]:
    """(forest, trunk) pairs with trunk first grading ≤ g that could pair with ``m``."""
    dim = m.items[0][0].word.dim
    letters = vectors_up_to(dim, g)
    found: set[tuple[SpdePlainForest, SpdeMultiIndex]] = set()
    for parts in _unordered_decompositions(m):
        options = []
        for part in parts:
            count = 1 - part.population_degree()
            opts = []
            if count >= 0:
                for u in vectors_up_to(dim, part.b_mass()):
                    for v in itertools.combinations_with_replacement(letters, count):
                        if sum(map(sum, v)) > g:
                            continue
                        for b in conserving_preimages(part, u, v):
                            if is_populated_spde(b):
                                opts.append((b, Word(u, v)))
            options.append(opts)
        for choice in itertools.product(*options):
            trunk = SpdeMultiIndex.of(*(SpdeVariable(TRUNK_LABEL, w) for _, w in choice))
            if grading(trunk)[0] <= g:
                found.add((SpdePlainForest(b for b, _ in choice), trunk))
    return sorted(found)


def oracle_delta_minus_spde(m: SpdeMultiIndex, g: int, candidates=None) -> LinComb:
    candidates = spde_delta_minus_candidates(m, g) if candidates is None else candidates
    return _weighted(
        ((Tensor2(f, t), _pair(star1_spde(f, t), m) / (f.symmetry() * t.symmetry())) for f, t in candidates),
        "tensor(forest(spde-multiindex),spde-multiindex)",
    )


# -- SPDE domains -------------------------------------------------------------------


def _spde_variables(dim: int, labels, max_grade: int, max_b: int, max_letters: int) -> list[SpdeVariable]:
    letters = vectors_up_to(dim, max_grade)
    out = []
    for label in labels:
        for u in vectors_up_to(dim, max_b):
            for r in range(max_letters + 1):
                for v in itertools.combinations_with_replacement(letters, r):
                    if sum(map(sum, v)) <= max_grade:
                        out.append(SpdeVariable(label, Word(u, v)))
    return sorted(out)


def spde_multiindices(
    dim: int = 2,
    labels=("l",),
    max_grade: int = 3,
    max_norm: int = 2,
    max_b: int = 1,
    max_letters: int = 2,
    populated: bool = False,
) -> list[SpdeMultiIndex]:
    """A finite box of SPDE multi-indices: first grading ≤ max_grade, at most
    ``max_norm`` variables, each with at most ``max_b`` b's and ``max_letters`` letters.

    ``dim`` is the vector length ``d + 1``.
    """
    pool = _spde_variables(dim, labels, max_grade, max_b, max_letters)
    out = []
    for size in range(0 if not populated else 1, max_norm + 1):
        for combo in itertools.combinations_with_replacement(pool, size):
            mono = SpdeMultiIndex.of(*combo)
            if grading(mono)[0] > max_grade:
                continue
            if populated and not is_populated_spde(mono):
                continue
            out.append(mono)
    return out


# -- reports ------------------------------------------------------------------------


@dataclass
class LawReport:
    name: str
    instances: int = 0
    failures: list = field(default_factory=list)
    exploratory: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, what, expected, actual) -> None:
        self.instances += 1
        if expected != actual:
            self.failures.append((what, expected, actual))

    def to_text(self, max_failures: int = 5) -> str:
        status = "PASS" if self.passed else "FAIL"
        tag = " (exploratory)" if self.exploratory else ""
        lines = [f"{self.name}{tag}: {status}  instances={self.instances}  failures={len(self.failures)}"]
        for what, expected, actual in self.failures[:max_failures]:
            lines.append(f"  input={what!r}  expected={expected!r}  actual={actual!r}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "law": self.name,
                "passed": self.passed,
                "exploratory": self.exploratory,
                "instances": self.instances,
                "failures": [{"input": repr(w), "expected": repr(e), "actual": repr(a)} for w, e, a in self.failures],
            }
        )


# -- ODE laws -------------------------------------------------------------------------


def _law_ode_adjointness(report: LawReport, bound: int, rng) -> None:
    domain = ode_multiindices(bound)
    for a in domain:
        da = derivation_D(a)
        for b in da:
            report.check((a, b), inner_product(da, b), inner_product(a, adjoint_Dbar(b)))
        dbar = adjoint_Dbar(a)
        for b in dbar:
            report.check((b, a), inner_product(derivation_D(b), a), inner_product(b, dbar))


def _law_symmetry_multiplicativity(report: LawReport, bound: int, rng) -> None:
    domain = ode_multiindices(bound, max_index=3)
    for a in domain:
        for b in domain:
            if a.norm() + b.norm() <= bound:
                report.check((a, b), a.symmetry() * b.symmetry(), (a * b).symmetry())
    n, m = (1, 0), (0, 1)
    box = spde_multiindices(dim=2, max_grade=2, max_norm=2, max_b=1, max_letters=2)
    for a, b in itertools.product(box[:60], repeat=2):
        report.check((a, b), a.symmetry() * b.symmetry(), (a * b).symmetry())


def _law_ode_leibniz(report: LawReport, bound: int, rng) -> None:
    domain = ode_multiindices(bound, max_index=3)
    for a in domain:
        for b in domain:
            if a.norm() + b.norm() <= bound:
                lhs = derivation_D(a * b)
                rhs = derivation_D(a) * LinComb.single(b) + LinComb.single(a) * derivation_D(b)
                report.check((a, b), lhs, rhs)


def _law_ode_population(report: LawReport, bound: int, rng) -> None:
    """``D`` keeps the norm and lowers ``[β]`` by one; ``D̄`` raises it back."""
    pool = enumerate_populated(bound)
    for a in ode_multiindices(bound):
        for op, shift in ((derivation_D, -1), (adjoint_Dbar, 1)):
            for key in op(a):
                report.check((op.__name__, a), (a.norm(), a.population_degree() + shift), (key.norm(), key.population_degree()))
    for a in pool:
        for b in pool:
            if a.norm() + b.norm() <= bound:
                for key in graft(a, b):
                    report.check(("graft", a, b), True, is_populated(key))
                for key in insert(a, b):
                    report.check(("insert", a, b), True, is_populated(key))


def _law_ode_formula_equivalence(report: LawReport, bound: int, rng) -> None:
    for m in enumerate_populated(bound):
        report.check(("delta", m), delta_primal(m), delta_adjoint(m))
        report.check(("delta-minus", m), delta_minus_primal(m), delta_minus_adjoint(m))


def _law_ode_duality(report: LawReport, bound: int, rng) -> None:
    for m in enumerate_populated(bound):
        for formula in (delta_primal, delta_adjoint):
            d = formula(m)
            cands = ode_delta_candidates(m)
            report.check(("support", formula.__name__, m), True, set(d) <= {Tensor2(f, b) for f, b in cands})
            for f, b in cands:
                lhs = _pair(star2(f, b), m)
                rhs = f.symmetry() * b.symmetry() * d.coefficient(Tensor2(f, b))
                report.check((formula.__name__, m, f, b), lhs, rhs)
    for m in enumerate_populated(min(bound, 4)):
        for formula in (delta_minus_primal, delta_minus_adjoint):
            d = formula(m)
            cands = ode_delta_minus_candidates(m)
            report.check(("support", formula.__name__, m), True, set(d) <= {Tensor2(f, t) for f, t in cands})
            for f, t in cands:
                lhs = _pair(star1(f, t), m)
                rhs = f.symmetry() * t.symmetry() * d.coefficient(Tensor2(f, t))
                report.check((formula.__name__, m, f, t), lhs, rhs)


def _law_ode_embedding(report: LawReport, bound: int, rng) -> None:
    letter = (0,)
    for m in enumerate_populated(bound):
        e = embed_ode(m, letter)
        report.check(("delta", m), embed_ode_delta(delta_primal(m), letter), delta_spde_primal(e, 0))
        report.check(("delta-adjoint", m), embed_ode_delta(delta_adjoint(m), letter), delta_spde_adjoint(e, 0))
        report.check(("delta-minus", m), embed_ode_delta_minus(delta_minus_primal(m), letter), delta_minus_spde_primal(e, 0))
        report.check(
            ("delta-minus-adjoint", m), embed_ode_delta_minus(delta_minus_adjoint(m), letter), delta_minus_spde_adjoint(e, 0)
        )
        report.check(("D", m), derivation_D(m).map_keys(lambda k: embed_ode(k, letter)), derivation_Dn(e, letter))
        report.check(("Dbar", m), adjoint_Dbar(m).map_keys(lambda k: embed_ode(k, letter)), adjoint_Dn(e, letter))


# -- SPDE laws ------------------------------------------------------------------------


def _single_variables(dim: int, bound: int, label: str = "l") -> list[SpdeMultiIndex]:
    """Single-variable multi-indices whose word has b-count plus letter norm ≤ bound."""
    out = []
    letters = vectors_up_to(dim, bound)
    for u in vectors_up_to(dim, bound):
        left = bound - sum(u)
        for r in range(left + 1):
            for v in itertools.combinations_with_replacement(letters, r):
                if sum(map(sum, v)) <= left:
                    out.append(SpdeMultiIndex.of(SpdeVariable(label, Word(u, v))))
    return sorted(set(out))


def _law_spde_noncommutation(report: LawReport, bound: int, rng) -> None:
    dim = 2
    for x in _single_variables(dim, bound):
        for n in vectors_up_to(dim, bound):
            for i in range(dim):
                lhs = derivation_Dn(derivation_partial(x, i), n) - derivation_partial(derivation_Dn(x, n), i)
                rhs = derivation_Dn(x, tuple(a - (j == i) for j, a in enumerate(n))) if n[i] else LinComb.zero()
                report.check((x, n, i), rhs, lhs)


def _law_spde_basis_expansion(report: LawReport, bound: int, rng) -> None:
    dim = 2
    bare = SpdeMultiIndex.of(SpdeVariable("l", Word((0,) * dim)))
    for u in vectors_up_to(dim, bound):
        for mvec in vectors_up_to(dim, bound):
            lhs = derivation_Dn(derivation_partial_k(bare, u), mvec)
            rhs = LinComb.zero()
            for ell in itertools.product(*(range(min(a, b) + 1) for a, b in zip(u, mvec))):
                c = 1
                for a, b in zip(u, ell):
                    c *= comb(a, b)
                rest = tuple(a - b for a, b in zip(u, ell))
                low = tuple(a - b for a, b in zip(mvec, ell))
                rhs = rhs + c * derivation_partial_k(derivation_Dn(bare, low), rest)
            raw = RawWord((mvec,) + tuple(i for i in range(dim) for _ in range(u[i])), dim=dim)
            rewritten = canonicalize(raw, "l").map_keys(SpdeMultiIndex.of)
            report.check((u, mvec, "expansion"), rhs, lhs)
            report.check((u, mvec, "rewriting"), rewritten, lhs)


def _law_spde_adjointness(report: LawReport, bound: int, rng) -> None:
    dim = 2
    box = spde_multiindices(dim=dim, max_grade=bound, max_norm=2, max_b=1, max_letters=bound)
    markers = vectors_up_to(dim, 2)
    for a in box:
        for i in range(dim):
            image = derivation_partial(a, i)
            for b in image:
                report.check(("partial", i, a, b), inner_product(image, b), inner_product(a, adjoint_partial(b, i)))
            back = adjoint_partial(a, i)
            for b in back:
                report.check(("partial*", i, b, a), inner_product(derivation_partial(b, i), a), inner_product(b, back))
        for n in markers:
            image = derivation_Dn(a, n)
            for b in image:
                report.check(("Dn", n, a, b), inner_product(image, b), inner_product(a, adjoint_Dn(b, n)))
            back = adjoint_Dn(a, n)
            for b in back:
                report.check(("Dn*", n, b, a), inner_product(derivation_Dn(b, n), a), inner_product(b, back))


def _spde_sample(rng, count: int, max_grade: int, max_norm: int = 3) -> list[SpdeMultiIndex]:
    pool = spde_multiindices(dim=2, max_grade=max_grade, max_norm=max_norm, max_b=1, max_letters=2, populated=True)
    return sorted(rng.sample(pool, min(count, len(pool))))


def _law_spde_formula_equivalence(report: LawReport, bound: int, rng) -> None:
    for m in _spde_sample(rng, 20, bound):
        report.check(("delta", m), delta_spde_primal(m, bound), delta_spde_adjoint(m, bound))
        report.check(("delta-minus", m), delta_minus_spde_primal(m, bound), delta_minus_spde_adjoint(m, bound))


def _law_spde_duality(report: LawReport, bound: int, rng) -> None:
    for m in _spde_sample(rng, 12, bound):
        d = delta_spde_primal(m, bound)
        cands = spde_delta_candidates(m, bound)
        report.check(("support", m), True, set(d) <= {Tensor2(f, b) for f, b in cands})
        report.check(("delta", m), oracle_delta_spde(m, bound, cands), d)
    for m in _spde_sample(rng, 8, min(bound, 2), max_norm=3):
        g = min(bound, 2)
        report.check(("delta-minus", m), oracle_delta_minus_spde(m, g), delta_minus_spde_primal(m, g))


def _law_spde_truncation(report: LawReport, bound: int, rng) -> None:
    for m in _spde_sample(rng, 10, bound):
        for g in range(bound):
            for low, high in (
                (delta_spde_primal(m, g), delta_spde_primal(m, g + 1)),
                (delta_spde_adjoint(m, g), delta_spde_adjoint(m, g + 1)),
            ):
                primitive = {k for k in low if not k.left or not k.right}
                kept = high.filter(lambda k: grading(k.left)[0] <= g or k in primitive)
                report.check(("delta", m, g), kept, low)
            low, high = delta_minus_spde_primal(m, g), delta_minus_spde_primal(m, g + 1)
            report.check(("delta-minus", m, g), high.filter(lambda k: grading(k.right)[0] <= g), low)


def _law_spde_confluence(report: LawReport, bound: int, rng) -> None:
    dim = 2
    letters = [v for v in vectors_up_to(dim, 2)]
    for _ in range(40 * bound):
        size = rng.randint(1, bound + 1)
        word = [rng.randrange(dim) if rng.randrange(2) else rng.choice(letters) for _ in range(size)]
        raw = RawWord(tuple(word), dim=dim)
        reference = canonicalize(raw, "l", "leftmost")
        report.check((word, "rightmost"), reference, canonicalize(raw, "l", "rightmost"))
        report.check((word, "random"), reference, canonicalize(raw, "l", "random", seed=rng.randrange(10**6)))
        for x in reference:
            report.check((word, "idempotent"), LinComb.single(x), canonicalize(_raw_of(x), "l"))


def _raw_of(x: SpdeVariable) -> RawWord:
    return RawWord(tuple(i for i, c in enumerate(x.word.u) for _ in range(c)) + x.word.v, dim=x.word.dim)


# -- exploratory ----------------------------------------------------------------------


def _forest_delta(f: OdeForest) -> LinComb:
    """Multiplicative extension of ``Δ`` to forests, right factors collected into a forest."""
    out = LinComb.single(Tensor2(OdeForest(), OdeForest()))
    for b in f:
        step = {}
        for (left, right), c in delta_primal(b).items():
            for (l0, r0), c0 in out.items():
                key = Tensor2(l0 * left, r0 * OdeForest([right] if right else []))
                step[key] = step.get(key, 0) + c * c0
        out = LinComb(step)
    return out


def _law_forest_coassociativity(report: LawReport, bound: int, rng) -> None:
    for m in enumerate_populated(bound):
        lhs: dict = {}
        rhs: dict = {}
        for (f, b), c in delta_primal(m).items():
            for (f1, f2), c1 in _forest_delta(f).items():
                key = (f1, f2, b)
                lhs[key] = lhs.get(key, 0) + c * c1
            if b:
                for (f2, b2), c2 in delta_primal(b).items():
                    key = (f, f2, b2)
                    rhs[key] = rhs.get(key, 0) + c * c2
            else:
                key = (f, OdeForest(), b)
                rhs[key] = rhs.get(key, 0) + c
        report.check(m, LinComb(lhs), LinComb(rhs))


LAWS: dict[str, tuple[Callable, int, bool]] = {
    "ode-adjointness": (_law_ode_adjointness, 5, False),
    "symmetry-multiplicativity": (_law_symmetry_multiplicativity, 8, False),
    "ode-leibniz": (_law_ode_leibniz, 6, False),
    "ode-population": (_law_ode_population, 5, False),
    "ode-formula-equivalence": (_law_ode_formula_equivalence, 5, False),
    "ode-duality": (_law_ode_duality, 5, False),
    "ode-embedding": (_law_ode_embedding, 4, False),
    "spde-noncommutation": (_law_spde_noncommutation, 4, False),
    "spde-basis-expansion": (_law_spde_basis_expansion, 3, False),
    "spde-adjointness": (_law_spde_adjointness, 3, False),
    "spde-formula-equivalence": (_law_spde_formula_equivalence, 3, False),
    "spde-duality": (_law_spde_duality, 3, False),
    "spde-truncation": (_law_spde_truncation, 2, False),
    "spde-canonicalize-confluence": (_law_spde_confluence, 4, False),
    "forest-coassociativity": (_law_forest_coassociativity, 4, True),
}

DEFAULT_SEED = 20240117


def run_law_suite(name: str, bound: int | None = None, seed: int = DEFAULT_SEED) -> LawReport:
    """Run one named law up to ``bound`` (its default when omitted)."""
    if name not in LAWS:
        raise UnknownLawError(f"unknown law {name!r}; known laws: {', '.join(sorted(LAWS))}")
    fn, default, exploratory = LAWS[name]
    report = LawReport(name, exploratory=exploratory)
    fn(report, default if bound is None else bound, random.Random(seed))
    return report
