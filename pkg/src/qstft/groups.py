"""Finite abelian groups as products of cyclic factors.

Elements are tuples of residues ``(x_1, ..., x_k)`` with ``0 <= x_j < n_j``.
The canonical element order is lexicographic, which is also row-major order
over the factors, so the index of an element is its mixed-radix value.

Measures are carried as exact :class:`fractions.Fraction` point weights. With
the defaults (counting measure on ``G``, ``H`` and ``G/H``) the Weil formula
holds with no scaling and the dual of ``G`` gets weight ``1/|G|``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import InvalidElementError, InvalidFactorsError, MismatchError

GroupElement = tuple  # tuple[int, ...]


def _as_weight(w) -> Fraction:
    w = Fraction(w)
    if w <= 0:
        raise InvalidFactorsError(f"point weight must be positive, got {w}")
    return w


@dataclass(frozen=True)
class FiniteGroup:
    factors: tuple
    point_weight: Fraction = Fraction(1)

    def __post_init__(self):
        factors = tuple(self.factors)
        for n in factors:
            if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
                raise InvalidFactorsError(f"factors must be positive integers, got {list(factors)}")
        object.__setattr__(self, "factors", tuple(int(n) for n in factors))
        object.__setattr__(self, "point_weight", _as_weight(self.point_weight))

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def total_mass(self) -> Fraction:
        return self.order * self.point_weight

    @cached_property
    def modulus(self) -> int:
        """Least common multiple of the factors; every character takes values in its roots of unity."""
        return math.lcm(*self.factors) if self.factors else 1

    @cached_property
    def strides(self) -> np.ndarray:
        s = np.ones(self.rank, dtype=np.int64)
        for j in range(self.rank - 2, -1, -1):
            s[j] = s[j + 1] * self.factors[j + 1]
        return s

    @cached_property
    def elements(self) -> np.ndarray:
        """All elements as an ``(order, rank)`` integer array in canonical order."""
        if self.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.factors, dtype=np.int64).reshape(self.rank, -1)
        return np.ascontiguousarray(grids.T)

    @property
    def identity(self) -> GroupElement:
        return (0,) * self.rank

    def validate(self, x) -> GroupElement:
        x = tuple(x)
        if len(x) != self.rank:
            raise InvalidElementError(f"element {x} has {len(x)} coordinates, group has {self.rank}")
        for xj, n in zip(x, self.factors):
            if isinstance(xj, bool) or not isinstance(xj, (int, np.integer)) or not 0 <= xj < n:
                raise InvalidElementError(f"element {x} out of range for factors {self.factors}")
        return tuple(int(v) for v in x)

    def reduce(self, x) -> GroupElement:
        return tuple(int(v) % n for v, n in zip(x, self.factors))

    def index(self, x) -> int:
        x = self.validate(x)
        return int(np.dot(np.asarray(x, dtype=np.int64), self.strides)) if self.rank else 0

    def indices_of(self, coords: np.ndarray) -> np.ndarray:
        """Canonical indices of an ``(m, rank)`` array of (already reduced) coordinates."""
        if self.rank == 0:
            return np.zeros(coords.shape[0], dtype=np.int64)
        return coords @ self.strides

    def element(self, i: int) -> GroupElement:
        return tuple(int(v) for v in self.elements[i])

    def add(self, x, y) -> GroupElement:
        return self.reduce(a + b for a, b in zip(x, y))

    def neg(self, x) -> GroupElement:
        return self.reduce(-a for a in x)

    def sub(self, x, y) -> GroupElement:
        return self.reduce(a - b for a, b in zip(x, y))

    @cached_property
    def sub_table(self) -> np.ndarray:
        """``sub_table[i, j]`` is the index of ``element(i) - element(j)``."""
        E = self.elements
        diff = (E[:, None, :] - E[None, :, :]) % np.asarray(self.factors, dtype=np.int64)
        return self.indices_of(diff.reshape(-1, self.rank)).reshape(self.order, self.order)

    def __repr__(self):
        body = "x".join(f"Z{n}" for n in self.factors) or "1"
        return f"FiniteGroup({body}, w={self.point_weight})"


def build_group(factors, point_weight=1) -> FiniteGroup:
    return FiniteGroup(tuple(factors), Fraction(point_weight))


@dataclass(frozen=True)
class DualGroup:
    """Character group of ``base``; the character ``k`` is ``x -> exp(2 pi i sum x_j k_j / n_j)``."""

    base: FiniteGroup
    point_weight: Fraction

    @property
    def factors(self):
        return self.base.factors

    @property
    def order(self) -> int:
        return self.base.order

    @property
    def elements(self) -> np.ndarray:
        return self.base.elements

    def index(self, k) -> int:
        return self.base.index(k)

    def element(self, i):
        return self.base.element(i)

    @property
    def sub_table(self):
        return self.base.sub_table


def dual_group(G: FiniteGroup) -> DualGroup:
    """Dual with the Plancherel weight ``1 / (|G| w_G)``."""
    return DualGroup(G, 1 / G.total_mass)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: tuple
    generators: tuple = ()
    point_weight: Fraction = Fraction(1)

    def __post_init__(self):
        elems = tuple(sorted(self.parent.validate(e) for e in self.elements))
        if len(set(elems)) != len(elems):
            raise InvalidElementError("subgroup elements must be distinct")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "generators", tuple(self.parent.validate(g) for g in self.generators))
        object.__setattr__(self, "point_weight", _as_weight(self.point_weight))
        members = set(elems)
        G = self.parent
        if G.identity not in members:
            raise MismatchError("subgroup must contain the identity")
        for a in elems:
            if G.neg(a) not in members:
                raise MismatchError(f"set is not closed under negation at {a}")
            for b in elems:
                if G.add(a, b) not in members:
                    raise MismatchError(f"set is not closed under addition at {a} + {b}")
        if G.order % len(elems):
            raise MismatchError("subgroup order does not divide group order")

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent == other.parent
            and self.elements == other.elements
            and self.point_weight == other.point_weight
        )

    def __hash__(self):
        return hash((self.parent, self.elements, self.point_weight))

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def indices(self) -> np.ndarray:
        return np.array([self.parent.index(e) for e in self.elements], dtype=np.int64)

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, x) -> bool:
        return tuple(x) in self._members


def generate_subgroup(G: FiniteGroup, generators) -> Subgroup:
    """Smallest subgroup of ``G`` containing ``generators`` (closure by repeated addition)."""
    gens = tuple(G.validate(g) for g in generators)
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = G.add(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return Subgroup(G, tuple(seen), gens)


@dataclass(frozen=True, eq=False)
class Quotient:
    parent: FiniteGroup
    subgroup: Subgroup
    reps: tuple
    coset_index: tuple
    point_weight: Fraction = Fraction(1)

    def __eq__(self, other):
        return (
            isinstance(other, Quotient)
            and self.parent == other.parent
            and self.subgroup.elements == other.subgroup.elements
            and self.point_weight == other.point_weight
        )

    def __hash__(self):
        return hash((self.parent, self.subgroup.elements, self.point_weight))

    @property
    def order(self) -> int:
        return len(self.reps)

    @cached_property
    def rep_indices(self) -> np.ndarray:
        return np.array([self.parent.index(r) for r in self.reps], dtype=np.int64)

    @cached_property
    def elements(self) -> np.ndarray:
        return self.parent.elements[self.rep_indices]

    @cached_property
    def coset_array(self) -> np.ndarray:
        return np.asarray(self.coset_index, dtype=np.int64)

    def coset_of(self, x) -> int:
        return self.coset_index[self.parent.index(x)]

    @cached_property
    def coset_diff(self) -> np.ndarray:
        """``coset_diff[x, z]`` is the coset of ``element(x) - reps[z]``, shape ``(|G|, |G/H|)``."""
        return self.coset_array[self.parent.sub_table[:, self.rep_indices]]

    @cached_property
    def sub_table(self) -> np.ndarray:
        """``sub_table[a, b]`` is the coset of ``reps[a] - reps[b]``."""
        return self.coset_diff[self.rep_indices, :]

    def __repr__(self):
        return f"Quotient({self.parent!r} / order {self.subgroup.order})"


def build_quotient(G: FiniteGroup, H: Subgroup) -> Quotient:
    if H.parent != G:
        raise MismatchError("subgroup was built over a different group")
    coset = [-1] * G.order
    reps = []
    E = G.elements
    Hc = np.array(H.elements, dtype=np.int64).reshape(H.order, G.rank)
    moduli = np.asarray(G.factors, dtype=np.int64)
    for i in range(G.order):
        if coset[i] >= 0:
            continue
        # scanning in canonical order, the first unassigned element is its coset's minimum
        members = G.indices_of((E[i][None, :] + Hc) % moduli) if G.rank else np.zeros(1, dtype=np.int64)
        for m in members:
            coset[int(m)] = len(reps)
        reps.append(G.element(i))
    return Quotient(G, H, tuple(reps), tuple(coset), G.point_weight / H.point_weight)


@dataclass(frozen=True, eq=False)
class QuotientDual:
    """Characters of ``G/H``, identified with the annihilator of ``H`` inside the dual of ``G``."""

    quotient: Quotient
    annihilator: Subgroup
    point_weight: Fraction = field(default=Fraction(1))

    @property
    def order(self) -> int:
        return self.annihilator.order

    @property
    def elements(self) -> np.ndarray:
        return self.quotient.parent.elements[self.annihilator.indices]

    def __eq__(self, other):
        return isinstance(other, QuotientDual) and self.quotient == other.quotient

    def __hash__(self):
        return hash(("dual", self.quotient))


def quotient_dual(Q: Quotient) -> QuotientDual:
    perp = annihilator(Q.parent, Q.subgroup)
    return QuotientDual(Q, perp, 1 / (Q.order * Q.point_weight))


def _phase(G: FiniteGroup, chars: np.ndarray, elems: np.ndarray) -> np.ndarray:
    L = G.modulus
    scale = np.array([L // n for n in G.factors], dtype=np.int64)
    if G.rank == 0:
        return np.zeros((chars.shape[0], elems.shape[0]), dtype=np.int64)
    return ((chars * scale) @ elems.T) % L


def phase_matrix(G: FiniteGroup, chars=None, elems=None) -> np.ndarray:
    """Exact integer phases: ``<x, chi_k> = exp(2 pi i phase[k, x] / G.modulus)``."""
    chars = G.elements if chars is None else np.asarray(chars, dtype=np.int64).reshape(-1, G.rank)
    elems = G.elements if elems is None else np.asarray(elems, dtype=np.int64).reshape(-1, G.rank)
    return _phase(G, chars, elems)


def annihilator(G: FiniteGroup, H: Subgroup) -> Subgroup:
    """Characters trivial on ``H``, found with integer arithmetic only."""
    if H.parent != G:
        raise MismatchError("subgroup was built over a different group")
    Hc = np.array(H.elements, dtype=np.int64).reshape(H.order, G.rank)
    ph = _phase(G, G.elements, Hc)
    keep = np.flatnonzero(np.all(ph == 0, axis=1))
    return Subgroup(G, tuple(G.element(int(i)) for i in keep))


def eval_character(G: FiniteGroup, k, x) -> complex:
    k = G.validate(k)
    x = G.validate(x)
    L = G.modulus
    m = sum(a * b * (L // n) for a, b, n in zip(k, x, G.factors)) % L
    if m == 0:
        return 1 + 0j
    return cmath.exp(2j * cmath.pi * m / L)
