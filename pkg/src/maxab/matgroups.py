"""2x2 matrices over Z/MZ and finite matrix-group machinery.

Groups are enumerated explicitly (breadth-first closure over generators)
and stored as sorted arrays of integer-encoded matrices.  All structural
questions (commutator subgroups, reduction maps, kernels, indices,
conjugacy) are answered by exhaustive computation on those element sets.
"""

from __future__ import annotations

import math
import os
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .errors import (
    BadTargetError,
    ModulusMismatchError,
    NotSubgroupError,
    SingularGeneratorError,
    SingularMatrixError,
    SizeLimitExceededError,
)
from .residues import inv_int

__all__ = [
    "Mat2",
    "FiniteMatGroup",
    "mat_mul",
    "mat_inv",
    "commutator",
    "closure",
    "derived_subgroup",
    "derived_subgroup_all_pairs",
    "reduce_group",
    "kernel_of_reduction",
    "subgroup_index",
    "abelianization_order",
    "is_abelian",
    "find_conjugator",
    "size_cap",
    "DEFAULT_SIZE_CAP",
]

DEFAULT_SIZE_CAP = 2_000_000
SIZE_CAP_ENV = "MAXAB_SIZE_CAP"


def size_cap() -> int:
    """Element cap for enumerations; MAXAB_SIZE_CAP overrides the default."""
    raw = os.environ.get(SIZE_CAP_ENV)
    if raw:
        return int(raw)
    return DEFAULT_SIZE_CAP


class Mat2(NamedTuple):
    """2x2 matrix over Z/(mod)Z with entries stored reduced.

    Tuple order (e11, e12, e21, e22, mod) doubles as the canonical
    lexicographic ordering used for deterministic element listings.
    """

    e11: int
    e12: int
    e21: int
    e22: int
    mod: int

    @classmethod
    def of(cls, e11: int, e12: int, e21: int, e22: int, mod: int) -> "Mat2":
        if mod < 2:
            raise ValueError("modulus must be >= 2")
        return cls(e11 % mod, e12 % mod, e21 % mod, e22 % mod, mod)

    @classmethod
    def identity(cls, mod: int) -> "Mat2":
        return cls.of(1, 0, 0, 1, mod)

    @classmethod
    def scalar(cls, a: int, mod: int) -> "Mat2":
        return cls.of(a, 0, 0, a, mod)

    def __mul__(self, other: "Mat2") -> "Mat2":  # type: ignore[override]
        if not isinstance(other, Mat2):
            return NotImplemented
        if self.mod != other.mod:
            raise ModulusMismatchError(f"{self.mod} != {other.mod}")
        a, b, c, d, m = self
        e, f, g, h = other.e11, other.e12, other.e21, other.e22
        return Mat2(
            (a * e + b * g) % m,
            (a * f + b * h) % m,
            (c * e + d * g) % m,
            (c * f + d * h) % m,
            m,
        )

    def det(self) -> int:
        return (self.e11 * self.e22 - self.e12 * self.e21) % self.mod

    def is_invertible(self) -> bool:
        return math.gcd(self.det(), self.mod) == 1

    def inv(self) -> "Mat2":
        d = self.det()
        if math.gcd(d, self.mod) != 1:
            raise SingularMatrixError(f"det {d} is not a unit mod {self.mod}")
        di = inv_int(d, self.mod)
        return Mat2.of(
            di * self.e22, -di * self.e12, -di * self.e21, di * self.e11, self.mod
        )

    def power(self, k: int) -> "Mat2":
        if k < 0:
            return self.inv().power(-k)
        out = Mat2.identity(self.mod)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def reduce_to(self, target: int) -> "Mat2":
        if target < 2 or self.mod % target != 0:
            raise BadTargetError(f"{target} does not divide {self.mod}")
        return Mat2.of(self.e11, self.e12, self.e21, self.e22, target)

    def is_identity(self) -> bool:
        return (self.e11, self.e12, self.e21, self.e22) == (1, 0, 0, 1)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.e11, self.e12, self.e21, self.e22)


def mat_mul(a: Mat2, b: Mat2) -> Mat2:
    return a * b


def mat_inv(a: Mat2) -> Mat2:
    return a.inv()


def commutator(a: Mat2, b: Mat2) -> Mat2:
    """A B A^-1 B^-1 (both matrices invertible, equal moduli)."""
    return a * b * a.inv() * b.inv()


# ---------------------------------------------------------------------------
# integer encoding; all bulk work runs on int64 codes
# ---------------------------------------------------------------------------


def _encode(m: Mat2) -> int:
    mod = m.mod
    return ((m.e11 * mod + m.e12) * mod + m.e21) * mod + m.e22


def _decode(code: int, mod: int) -> Mat2:
    e22 = code % mod
    code //= mod
    e21 = code % mod
    code //= mod
    e12 = code % mod
    e11 = code // mod
    return Mat2(e11, e12, e21, e22, mod)


def _decode_batch(codes: np.ndarray, mod: int):
    e22 = codes % mod
    rest = codes // mod
    e21 = rest % mod
    rest = rest // mod
    e12 = rest % mod
    e11 = rest // mod
    return e11, e12, e21, e22


def _encode_batch(e11, e12, e21, e22, mod: int) -> np.ndarray:
    return ((e11 * mod + e12) * mod + e21) * mod + e22


def _right_mul_batch(codes: np.ndarray, g: Mat2) -> np.ndarray:
    """Codes of X*g for every encoded X."""
    mod = g.mod
    a, b, c, d = _decode_batch(codes, mod)
    e, f, h, k = g.e11, g.e12, g.e21, g.e22
    return _encode_batch(
        (a * e + b * h) % mod,
        (a * f + b * k) % mod,
        (c * e + d * h) % mod,
        (c * f + d * k) % mod,
        mod,
    )


def _left_mul_batch(g: Mat2, codes: np.ndarray) -> np.ndarray:
    """Codes of g*X for every encoded X."""
    mod = g.mod
    e, f, h, k = _decode_batch(codes, mod)
    a, b, c, d = g.e11, g.e12, g.e21, g.e22
    return _encode_batch(
        (a * e + b * h) % mod,
        (a * f + b * k) % mod,
        (c * e + d * h) % mod,
        (c * f + d * k) % mod,
        mod,
    )


def _conj_batch(codes: np.ndarray, g: Mat2) -> np.ndarray:
    return _right_mul_batch(_left_mul_batch(g, codes), g.inv())


class FiniteMatGroup:
    """Enumerated subgroup of GL(2, Z/MZ).

    Immutable after construction.  ``elements`` is ordered lexicographically
    on (e11, e12, e21, e22), which makes every report deterministic.
    """

    __slots__ = ("modulus", "_codes", "_code_set", "_gens", "_elements")

    def __init__(
        self,
        modulus: int,
        codes: np.ndarray,
        generators: tuple[Mat2, ...] | None = None,
    ):
        self.modulus = modulus
        self._codes = np.unique(np.asarray(codes, dtype=np.int64))
        self._code_set = frozenset(int(c) for c in self._codes)
        self._gens = generators
        self._elements: tuple[Mat2, ...] | None = None

    # -- construction ------------------------------------------------------

    @classmethod
    def from_generators(
        cls, gens: Iterable[Mat2], modulus: int | None = None, cap: int | None = None
    ) -> "FiniteMatGroup":
        return closure(gens, modulus=modulus, cap=cap)

    @classmethod
    def from_element_codes(
        cls,
        modulus: int,
        codes: np.ndarray,
        generators: tuple[Mat2, ...] | None = None,
    ) -> "FiniteMatGroup":
        return cls(modulus, codes, generators)

    @classmethod
    def trivial(cls, modulus: int) -> "FiniteMatGroup":
        ident = Mat2.identity(modulus)
        return cls(modulus, np.array([_encode(ident)], dtype=np.int64), ())

    # -- basic queries -------------------------------------------------------

    @property
    def order(self) -> int:
        return int(self._codes.size)

    @property
    def codes(self) -> np.ndarray:
        return self._codes

    @property
    def generators(self) -> tuple[Mat2, ...]:
        if self._gens is None:
            self._gens = _greedy_generators(self)
        return self._gens

    @property
    def elements(self) -> tuple[Mat2, ...]:
        if self._elements is None:
            self._elements = tuple(_decode(int(c), self.modulus) for c in self._codes)
        return self._elements

    def iter_elements(self) -> Iterator[Mat2]:
        for c in self._codes:
            yield _decode(int(c), self.modulus)

    def __contains__(self, m: Mat2) -> bool:
        if not isinstance(m, Mat2) or m.mod != self.modulus:
            return False
        return _encode(m) in self._code_set

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteMatGroup):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(
            self._codes, other._codes
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.order, int(self._codes[0]), int(self._codes[-1])))

    def __repr__(self) -> str:
        return f"FiniteMatGroup(mod={self.modulus}, order={self.order})"

    def contains_codes(self, codes: np.ndarray) -> bool:
        return bool(np.all(np.isin(codes, self._codes, assume_unique=False)))


def closure(
    gens: Iterable[Mat2], modulus: int | None = None, cap: int | None = None
) -> FiniteMatGroup:
    """Smallest subgroup containing the generators, by breadth-first products.

    Finite ambient group, so right-multiplication by generators alone reaches
    every word in the generators and their inverses.
    """
    gens = tuple(gens)
    if not gens:
        if modulus is None:
            raise ValueError("closure of empty set needs an explicit modulus")
        return FiniteMatGroup.trivial(modulus)
    mod = gens[0].mod
    if modulus is not None and modulus != mod:
        raise ModulusMismatchError(f"{modulus} != {mod}")
    for g in gens:
        if g.mod != mod:
            raise ModulusMismatchError(f"{g.mod} != {mod}")
        if not g.is_invertible():
            raise SingularGeneratorError(f"generator {g.entries()} not invertible")
    limit = cap if cap is not None else size_cap()

    seen: set[int] = {_encode(Mat2.identity(mod))}
    frontier = []
    for g in gens:
        c = _encode(g)
        if c not in seen:
            seen.add(c)
            frontier.append(c)
    while frontier:
        batch = np.asarray(frontier, dtype=np.int64)
        frontier = []
        for g in gens:
            prods = _right_mul_batch(batch, g)
            for c in prods.tolist():
                if c not in seen:
                    seen.add(c)
                    frontier.append(c)
        if len(seen) > limit:
            raise SizeLimitExceededError(
                f"closure exceeded element cap {limit} at modulus {mod}"
            )
    codes = np.fromiter(seen, dtype=np.int64, count=len(seen))
    return FiniteMatGroup(mod, codes, gens)


def _greedy_generators(group: FiniteMatGroup) -> tuple[Mat2, ...]:
    """Small generating set found by greedy closure over canonical order."""
    mod = group.modulus
    gens: list[Mat2] = []
    span = FiniteMatGroup.trivial(mod)
    while span.order < group.order:
        missing = group._codes[~np.isin(group._codes, span._codes)]
        gens.append(_decode(int(missing[0]), mod))
        span = closure(gens, modulus=mod)
    return tuple(gens)


def is_abelian(group: FiniteMatGroup) -> bool:
    """True iff all generator pairs commute (hence the whole group does)."""
    gens = group.generators
    for a, b in combinations(gens, 2):
        if a * b != b * a:
            return False
    return True


def derived_subgroup(group: FiniteMatGroup, cap: int | None = None) -> FiniteMatGroup:
    """Commutator subgroup via the normal closure of generator commutators.

    Iterates conjugation by the group's generators to a fixpoint; agrees with
    the closure of all-pairs commutators (see derived_subgroup_all_pairs).
    """
    mod = group.modulus
    gens = group.generators
    seeds = [commutator(a, b) for a, b in combinations(gens, 2)]
    seeds = [s for s in seeds if not s.is_identity()]
    sub_gens: list[Mat2] = list(seeds)
    sub = closure(sub_gens, modulus=mod, cap=cap)
    changed = True
    while changed:
        changed = False
        for g in gens:
            conj = _conj_batch(sub._codes, g)
            missing = conj[~np.isin(conj, sub._codes)]
            if missing.size:
                sub_gens.extend(_decode(int(c), mod) for c in np.unique(missing))
                sub = closure(sub_gens, modulus=mod, cap=cap)
                changed = True
    return sub


def derived_subgroup_all_pairs(
    group: FiniteMatGroup, cap: int | None = None
) -> FiniteMatGroup:
    """Closure of {ABA^-1B^-1 : A, B in G}; brute-force oracle, O(|G|^2)."""
    mod = group.modulus
    codes = group._codes
    seen: set[int] = set()
    for a in group.iter_elements():
        # batch computes a * B * a^-1 * B^-1 over all B
        left = _left_mul_batch(a, codes)
        conj = _right_mul_batch(left, a.inv())
        e11, e12, e21, e22 = _decode_batch(conj, mod)
        b11, b12, b21, b22 = _decode_batch(codes, mod)
        det = (b11 * b22 - b12 * b21) % mod
        dinv = np.array([inv_int(int(d), mod) for d in det.tolist()], dtype=np.int64)
        i11 = (b22 * dinv) % mod
        i12 = (-b12 * dinv) % mod
        i21 = (-b21 * dinv) % mod
        i22 = (b11 * dinv) % mod
        seen.update(
            _encode_batch(
                (e11 * i11 + e12 * i21) % mod,
                (e11 * i12 + e12 * i22) % mod,
                (e21 * i11 + e22 * i21) % mod,
                (e21 * i12 + e22 * i22) % mod,
                mod,
            ).tolist()
        )
    gens = [_decode(c, mod) for c in sorted(seen)]
    return closure([g for g in gens if not g.is_identity()] or [], modulus=mod, cap=cap)


def reduce_group(group: FiniteMatGroup, target: int) -> FiniteMatGroup:
    """Image of the group under entrywise reduction to the target modulus."""
    if target < 2 or group.modulus % target != 0:
        raise BadTargetError(f"{target} does not divide {group.modulus}")
    e11, e12, e21, e22 = _decode_batch(group._codes, group.modulus)
    codes = _encode_batch(e11 % target, e12 % target, e21 % target, e22 % target, target)
    gens = None
    if group._gens is not None:
        seen: list[Mat2] = []
        for g in group._gens:
            r = g.reduce_to(target)
            if r not in seen and not r.is_identity():
                seen.append(r)
        gens = tuple(seen)
    return FiniteMatGroup(target, np.unique(codes), gens)


def kernel_of_reduction(group: FiniteMatGroup, target: int) -> FiniteMatGroup:
    """Subgroup of elements reducing to the identity mod target."""
    if target < 2 or group.modulus % target != 0:
        raise BadTargetError(f"{target} does not divide {group.modulus}")
    e11, e12, e21, e22 = _decode_batch(group._codes, group.modulus)
    mask = (
        (e11 % target == 1)
        & (e12 % target == 0)
        & (e21 % target == 0)
        & (e22 % target == 1)
    )
    return FiniteMatGroup(group.modulus, group._codes[mask])


def subgroup_index(sub: FiniteMatGroup, group: FiniteMatGroup) -> int:
    """|G| / |H| after verifying H is contained in G elementwise."""
    if sub.modulus != group.modulus:
        raise NotSubgroupError("modulus mismatch")
    if not group.contains_codes(sub._codes):
        raise NotSubgroupError("claimed subgroup has elements outside the group")
    return group.order // sub.order


def abelianization_order(group: FiniteMatGroup) -> int:
    return group.order // derived_subgroup(group).order


def _ambient_gl2_codes(mod: int) -> np.ndarray:
    r = np.arange(mod, dtype=np.int64)
    e11, e12, e21, e22 = np.meshgrid(r, r, r, r, indexing="ij")
    e11, e12, e21, e22 = (x.ravel() for x in (e11, e12, e21, e22))
    det = (e11 * e22 - e12 * e21) % mod
    mask = np.gcd(det, mod) == 1
    return _encode_batch(e11[mask], e12[mask], e21[mask], e22[mask], mod)


def find_conjugator(
    g: FiniteMatGroup, h: FiniteMatGroup, modulus_cap: int = 16
) -> Mat2 | None:
    """U in GL(2, Z/MZ) with U G U^-1 = H, or None.

    Exhaustive over the ambient GL; conjugating every generator of G into H
    already forces U G U^-1 = H when |G| = |H|, and the returned witness is
    re-verified elementwise anyway.
    """
    if g.modulus != h.modulus:
        raise ModulusMismatchError(f"{g.modulus} != {h.modulus}")
    if g.order != h.order:
        return None
    mod = g.modulus
    if mod > modulus_cap:
        raise SizeLimitExceededError(
            f"ambient GL(2, Z/{mod}) search capped at modulus {modulus_cap}"
        )
    if g == h:
        return Mat2.identity(mod)

    cand = np.sort(_ambient_gl2_codes(mod))
    for gen in g.generators:
        keep = []
        for chunk_start in range(0, cand.size, 1 << 16):
            chunk = cand[chunk_start : chunk_start + (1 << 16)]
            u11, u12, u21, u22 = _decode_batch(chunk, mod)
            det = (u11 * u22 - u12 * u21) % mod
            dinv = np.array(
                [inv_int(int(d), mod) for d in det.tolist()], dtype=np.int64
            )
            a, b, c, d = gen.e11, gen.e12, gen.e21, gen.e22
            # U * gen
            p11 = (u11 * a + u12 * c) % mod
            p12 = (u11 * b + u12 * d) % mod
            p21 = (u21 * a + u22 * c) % mod
            p22 = (u21 * b + u22 * d) % mod
            # ... * U^-1 with U^-1 = dinv * [[u22, -u12], [-u21, u11]]
            q11 = (p11 * u22 - p12 * u21) % mod * dinv % mod
            q12 = (-p11 * u12 + p12 * u11) % mod * dinv % mod
            q21 = (p21 * u22 - p22 * u21) % mod * dinv % mod
            q22 = (-p21 * u12 + p22 * u11) % mod * dinv % mod
            conj_codes = _encode_batch(q11, q12, q21, q22, mod)
            keep.append(chunk[np.isin(conj_codes, h._codes)])
        cand = np.concatenate(keep) if keep else np.array([], dtype=np.int64)
        if cand.size == 0:
            return None
    u = _decode(int(cand[0]), mod)
    moved = np.unique(_conj_batch(g._codes, u))
    if not np.array_equal(moved, h._codes):
        return None
    return u
