"""Subhypergroups, coset partitions, quotients and annihilators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import TOL, FiniteHypergroup, support_product, validate
from .duality import CharacterTable
from .errors import CapExceeded, EquivalenceFailure, NotAPartition, NotClosed

ENUMERATION_CAP = 20


@dataclass(frozen=True, eq=False)
class Subhypergroup:
    members: frozenset[int]
    parent: FiniteHypergroup

    def __post_init__(self):
        if not is_subhypergroup(self.parent, self.members):
            raise NotClosed(f"{sorted(self.members)} is not a subhypergroup of {self.parent!r}")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def __eq__(self, other) -> bool:
        if isinstance(other, Subhypergroup):
            return self.parent is other.parent and self.members == other.members
        return NotImplemented

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        return f"Subhypergroup({self.sorted()})"


@dataclass(frozen=True)
class CosetPartition:
    """``blocks[0]`` is H; ``representatives[b]`` is the smallest member of block b."""

    blocks: tuple[frozenset[int], ...]
    representatives: tuple[int, ...]
    block_mass: tuple[float, ...]

    def block_of(self, x: int) -> int:
        for b, blk in enumerate(self.blocks):
            if x in blk:
                return b
        raise KeyError(x)

    def labels(self) -> list[int]:
        out = [0] * sum(len(b) for b in self.blocks)
        for b, blk in enumerate(self.blocks):
            for x in blk:
                out[x] = b
        return out


def is_subhypergroup(K: FiniteHypergroup, members: Iterable[int]) -> bool:
    H = frozenset(int(x) for x in members)
    if 0 not in H or any(not 0 <= x < K.order for x in H):
        return False
    if any(K.involution[x] not in H for x in H):
        return False
    return support_product(K, H, H) <= H


def certify(K: FiniteHypergroup, members: Iterable[int]) -> Subhypergroup:
    return Subhypergroup(frozenset(int(x) for x in members), K)


def closure(K: FiniteHypergroup, generators: Iterable[int]) -> frozenset[int]:
    """Smallest subhypergroup containing ``generators``."""
    H = {0, *map(int, generators)}
    while True:
        grown = H | {K.involution[x] for x in H} | support_product(K, H, H)
        if grown == H:
            return frozenset(H)
        H = grown


def enumerate_subhypergroups(K: FiniteHypergroup, cap: int = ENUMERATION_CAP) -> list[Subhypergroup]:
    """All subhypergroups, sorted by (size, members).

    Every subhypergroup is reached from a smaller one by adjoining a single
    element and closing, so a search over closures is exhaustive.
    """
    if K.order > cap:
        raise CapExceeded(cap, K.order)
    start = closure(K, ())
    found = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for H in frontier:
            for x in range(K.order):
                if x in H:
                    continue
                G = closure(K, H | {x})
                if G not in found:
                    found.add(G)
                    nxt.append(G)
        frontier = nxt
    ordered = sorted(found, key=lambda s: (len(s), sorted(s)))
    return [Subhypergroup(s, K) for s in ordered]


def cosets(K: FiniteHypergroup, H: Subhypergroup) -> CosetPartition:
    blocks: list[frozenset[int]] = []
    for c in range(K.order):
        blk = support_product(K, {c}, H.members)
        if blk not in blocks:
            blocks.append(blk)
    covered: set[int] = set()
    for blk in blocks:
        if covered & blk:
            raise NotAPartition(f"cosets of {H!r} overlap: {sorted(covered & blk)}")
        covered |= blk
    if covered != set(range(K.order)):
        raise NotAPartition(f"cosets of {H!r} miss {sorted(set(range(K.order)) - covered)}")
    # block containing e first, then by smallest member
    blocks.sort(key=lambda b: (0 not in b, min(b)))
    if blocks[0] != H.members:
        raise NotAPartition(f"e*H = {sorted(blocks[0])} differs from H = {H.sorted()}")
    mass = tuple(float(K.haar[sorted(b)].sum()) for b in blocks)
    return CosetPartition(tuple(blocks), tuple(min(b) for b in blocks), mass)


def annihilator(K: FiniteHypergroup, table: CharacterTable, H: Subhypergroup, tol: float = TOL) -> list[int]:
    """Indices of characters identically 1 on H."""
    members = H.sorted()
    dev = np.abs(table.values[:, members] - 1.0).max(axis=1)
    return [int(r) for r in np.nonzero(dev <= tol)[0]]


def haar_transform_on(K: FiniteHypergroup, table: CharacterTable, H: Subhypergroup) -> np.ndarray:
    """``rho -> sum_{x in H} omega{x} rho(x) / omega(H)``, the transform of normalized Haar on H."""
    members = H.sorted()
    w = K.haar[members]
    return table.values[:, members] @ w / w.sum()


def quotient(K: FiniteHypergroup, H: Subhypergroup) -> FiniteHypergroup:
    """Coset hypergroup K/H from ``omega``-normalized block indicators."""
    part = cosets(K, H)
    M = len(part.blocks)
    block_of = np.array(part.labels())
    P = np.zeros((M, K.order))
    for b, blk in enumerate(part.blocks):
        idx = sorted(blk)
        P[b, idx] = K.haar[idx] / K.haar[idx].sum()
    conv = np.einsum("ai,bj,ijk->abk", P, P, K.constants)
    Q = np.zeros((M, M, M))
    for k in range(K.order):
        Q[:, :, block_of[k]] += conv[:, :, k]
    inv = [int(block_of[K.involution[r]]) for r in part.representatives]
    return validate(Q, inv, name=f"{K.name}/{H.sorted()}")


def restricted_hypergroup(K: FiniteHypergroup, H: Subhypergroup) -> FiniteHypergroup:
    """H with the restricted structure constants (indices follow ``H.sorted()``)."""
    members = H.sorted()
    n = K.constants[np.ix_(members, members, members)]
    rows = np.abs(n.sum(axis=2) - 1.0).max()
    if rows > TOL:
        raise NotClosed(f"restricted rows are not stochastic (residual {rows:.3g})")
    pos = {x: i for i, x in enumerate(members)}
    inv = [pos[K.involution[x]] for x in members]
    return validate(n, inv, name=f"{K.name}|{members}")


def restrict(K: FiniteHypergroup, table: CharacterTable, r: int, H: Subhypergroup) -> np.ndarray:
    """Values of character ``r`` on ``H.sorted()``, checked to be a character of H."""
    sub = restricted_hypergroup(K, H)
    values = table.values[r, H.sorted()]
    prod = np.einsum("xyz,z->xy", sub.constants, values)
    if np.abs(prod - np.outer(values, values)).max() > 1e-8:
        raise NotClosed(f"restriction of character {r} is not multiplicative on H")
    return values


def same_restriction(K: FiniteHypergroup, table: CharacterTable, r: int, s: int, H: Subhypergroup, tol: float = 1e-8) -> bool:
    return bool(np.abs(restrict(K, table, r, H) - restrict(K, table, s, H)).max() <= tol)


def dual_coset_members(K: FiniteHypergroup, table: CharacterTable, s: int, H: Subhypergroup, tol: float = 1e-8) -> set[int]:
    """Characters in the support of ``sigma * H^perp`` under the dual convolution."""
    from .duality import dual_structure_constants

    c = dual_structure_constants(K, table)
    perp = annihilator(K, table, H)
    return {int(t) for t in np.nonzero((c[s, perp, :] > tol).any(axis=0))[0]}


@dataclass(frozen=True)
class Lemma23Report:
    in_annihilator: tuple[bool, ...]
    every_coset_nonzero: tuple[bool, ...]
    some_coset_nonzero: tuple[bool, ...]
    offenders: tuple[tuple[int, int], ...]

    @property
    def equivalent(self) -> bool:
        return not self.offenders

    def to_dict(self) -> dict:
        return {
            "i": list(self.in_annihilator),
            "ii": list(self.every_coset_nonzero),
            "iii": list(self.some_coset_nonzero),
            "offenders": [list(p) for p in self.offenders],
        }


def coset_sums(K: FiniteHypergroup, table: CharacterTable, part: CosetPartition, conjugate: bool = False) -> np.ndarray:
    """``S[r, b] = sum_{m in block b} omega{m} rho_r(m)`` (or ``rho_r(mbar)``)."""
    S = np.zeros((len(table), len(part.blocks)), dtype=complex)
    inv = np.array(K.involution)
    for b, blk in enumerate(part.blocks):
        idx = np.array(sorted(blk))
        cols = inv[idx] if conjugate else idx
        S[:, b] = table.values[:, cols] @ K.haar[idx]
    return S


def lemma23_report(K: FiniteHypergroup, table: CharacterTable, H: Subhypergroup, tol: float = TOL) -> Lemma23Report:
    """Evaluate the three annihilator conditions for every character.

    ``(i)`` rho in H^perp; ``(ii)`` the ``rho(mbar)`` coset sum is nonzero on
    every coset; ``(iii)`` the ``rho(m)`` coset sum is nonzero on some coset.
    Nonzero means magnitude above ``tol * omega(c*H)``.
    """
    part = cosets(K, H)
    mass = np.array(part.block_mass)
    perp = set(annihilator(K, table, H, tol))
    ii_sums = np.abs(coset_sums(K, table, part, conjugate=True)) > tol * mass
    iii_sums = np.abs(coset_sums(K, table, part)) > tol * mass
    cond_i = tuple(r in perp for r in range(len(table)))
    cond_ii = tuple(bool(v) for v in ii_sums.all(axis=1))
    cond_iii = tuple(bool(v) for v in iii_sums.any(axis=1))
    offenders = []
    for r in range(len(table)):
        if not (cond_i[r] == cond_ii[r] == cond_iii[r]):
            bad = [b for b in range(len(part.blocks)) if ii_sums[r, b] != cond_i[r]]
            bad = bad or [b for b in range(len(part.blocks)) if iii_sums[r, b]]
            offenders.extend((r, part.representatives[b]) for b in bad)
    return Lemma23Report(cond_i, cond_ii, cond_iii, tuple(offenders))


def lemma23_check(K: FiniteHypergroup, table: CharacterTable, H: Subhypergroup, tol: float = TOL) -> Lemma23Report:
    """As :func:`lemma23_report` but raises :class:`EquivalenceFailure` on disagreement."""
    report = lemma23_report(K, table, H, tol)
    if not report.equivalent:
        raise EquivalenceFailure(list(report.offenders))
    return report
