"""Characters, Plancherel weights and the unitary Fourier matrix of a finite
commutative hypergroup, plus the dual structure (strongness test).

Characters are joint eigenvectors of the translation operators
``(T_i f)(y) = f(i * y)``.  In the ``omega``-weighted basis
``u = omega^{1/2} f`` these operators are normal, so the eigenproblem of a
generic real combination is well conditioned.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import TOL, FiniteHypergroup, validate
from .errors import (
    AxiomViolationError,
    CharacterDefect,
    NonOrthogonal,
    NotCommutative,
    NotStrong,
    NotUnitary,
)

CHARACTER_SEED = 0x5EED
MAX_RETRIES = 8
UNITARY_TOL = 1e-10
MULTIPLICATIVE_TOL = 1e-8
# character values agreeing to this many decimals are treated as equal when ordering
_ORDER_DECIMALS = 9


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """``values[r, x]`` is character ``r`` at element ``x``; row 0 is trivial."""

    values: np.ndarray
    plancherel: np.ndarray
    conjugate: tuple[int, ...]

    def __len__(self) -> int:
        return self.values.shape[0]

    def character(self, r: int) -> np.ndarray:
        return self.values[r]


def translation_operators(K: FiniteHypergroup, tol: float = TOL) -> list[np.ndarray]:
    """Left-translation matrices ``L[i][k, j] = n[i, j, k]`` (they act on measures)."""
    L = [np.ascontiguousarray(K.constants[i].T) for i in range(K.order)]
    worst = 0.0
    for a in range(K.order):
        for b in range(a + 1, K.order):
            worst = max(worst, float(np.abs(L[a] @ L[b] - L[b] @ L[a]).max()))
    if worst > tol:
        raise NotCommutative(f"translation operators fail to commute (residual {worst:.3g})")
    return L


def _weighted_operators(K: FiniteHypergroup) -> np.ndarray:
    # W[i] = D^{1/2} M_i D^{-1/2} with M_i[j, k] = n[i, j, k]
    s = np.sqrt(K.haar)
    return K.constants * s[None, :, None] / s[None, None, :]


def _candidates(K: FiniteHypergroup, W: np.ndarray, rng: np.random.Generator) -> np.ndarray | None:
    N = K.order
    t = rng.standard_normal(N)
    A = np.tensordot(t, W, axes=1)
    evals, vecs = np.linalg.eig(A)
    if N > 1:
        gaps = np.abs(evals[:, None] - evals[None, :])
        np.fill_diagonal(gaps, np.inf)
        scale = max(1.0, float(np.abs(evals).max()))
        if gaps.min() < 1e-6 * scale:
            return None
    # Rayleigh quotients against each W_i give rho(c_i) directly
    num = np.einsum("ar,iab,br->ri", vecs.conj(), W, vecs)
    den = np.einsum("ar,ar->r", vecs.conj(), vecs)
    rho = num / den[:, None]
    return rho / rho[:, :1]


def _check_characters(K: FiniteHypergroup, rho: np.ndarray) -> float:
    """Largest violation of the character axioms over all candidate rows."""
    n = K.constants
    products = np.einsum("xyz,rz->rxy", n, rho)
    mult = np.abs(products - rho[:, :, None] * rho[:, None, :]).max()
    inv = np.array(K.involution)
    conj = np.abs(rho[:, inv] - rho.conj()).max()
    bound = max(0.0, float(np.abs(rho).max() - 1.0))
    return float(max(mult, conj, bound))


def _canonical_order(rho: np.ndarray) -> list[int]:
    keys = []
    for r, row in enumerate(rho):
        key = []
        for value in row:
            key.append(round(float(value.real), _ORDER_DECIMALS) + 0.0)
            key.append(round(float(value.imag), _ORDER_DECIMALS) + 0.0)
        keys.append((tuple(key), r))
    trivial = [r for r, row in enumerate(rho) if np.abs(row - 1).max() <= 1e-6]
    if len(trivial) != 1:
        raise CharacterDefect(f"expected exactly one trivial character, found {len(trivial)}")
    rest = sorted((k for k in keys if k[1] != trivial[0]), reverse=True)
    return trivial + [r for _, r in rest]


def _clean(rho: np.ndarray) -> np.ndarray:
    out = np.array(rho, dtype=complex)
    out.real[np.abs(out.real) < 1e-14] = 0.0
    out.imag[np.abs(out.imag) < 1e-14] = 0.0
    if np.abs(out.imag).max() <= 1e-13:
        out = out.real.astype(complex)
    return out


def _conjugate_index(rho: np.ndarray) -> tuple[int, ...]:
    conj = []
    for row in rho:
        d = np.abs(rho - row.conj()).max(axis=1)
        conj.append(int(np.argmin(d)))
    return tuple(conj)


def character_table(K: FiniteHypergroup) -> CharacterTable:
    """Complete character table of a commutative hypergroup, canonically ordered.

    Trivial character first, the rest sorted descending on the per-element
    ``(Re, Im)`` value sequence.  Results are cached per instance.
    """
    return _character_table(K)


@lru_cache(maxsize=256)
def _character_table(K: FiniteHypergroup) -> CharacterTable:
    if not K.commutative:
        raise NotCommutative(f"{K!r} is not commutative")
    N = K.order
    W = _weighted_operators(K)
    rng = np.random.default_rng(CHARACTER_SEED)
    rho = None
    for _ in range(MAX_RETRIES + 1):
        rho = _candidates(K, W, rng)
        if rho is not None:
            break
    if rho is None:
        raise CharacterDefect(f"no generic split of the joint eigenspaces after {MAX_RETRIES} retries")
    residual = _check_characters(K, rho)
    if residual > MULTIPLICATIVE_TOL:
        raise CharacterDefect(f"character axioms violated (residual {residual:.3g})")
    distinct = []
    for row in rho:
        if all(np.abs(row - other).max() > 1e-6 for other in distinct):
            distinct.append(row)
    if len(distinct) != N:
        raise CharacterDefect(f"found {len(distinct)} distinct characters, expected {N}")
    rho = _clean(np.array(distinct)[_canonical_order(np.array(distinct))])
    rho.flags.writeable = False
    pi = plancherel(K, rho)
    pi.flags.writeable = False
    return CharacterTable(rho, pi, _conjugate_index(rho))


def plancherel(K: FiniteHypergroup, characters: np.ndarray, tol: float = TOL) -> np.ndarray:
    """``pi{rho} = 1 / sum_x omega{x} |rho(x)|^2`` after checking orthogonality."""
    rho = np.asarray(characters)
    gram = (rho * K.haar) @ rho.conj().T
    diag = np.real(np.diag(gram))
    off = np.abs(gram - np.diag(np.diag(gram)))
    scale = np.sqrt(np.outer(diag, diag))
    worst = float((off / scale).max()) if rho.shape[0] > 1 else 0.0
    if worst > tol:
        raise NonOrthogonal(f"characters are not orthogonal in l2(K, omega) (residual {worst:.3g})")
    return 1.0 / diag


def fourier_matrix(K: FiniteHypergroup, table: CharacterTable | None = None) -> np.ndarray:
    """Unitary transform in the weighted bases: ``F[r, x] = sqrt(omega{x} pi{r}) rho_r(x)``."""
    table = table or character_table(K)
    F = np.sqrt(np.outer(table.plancherel, K.haar)) * table.values
    res = unitarity_residual(F)
    if res > UNITARY_TOL:
        raise NotUnitary(f"Fourier matrix fails unitarity (residual {res:.3g})")
    return F


def unitarity_residual(F: np.ndarray) -> float:
    F = np.asarray(F)
    return float(np.abs(F @ F.conj().T - np.eye(F.shape[0])).max())


def tau(K: FiniteHypergroup, table: CharacterTable, x: int) -> float:
    """``(sum_rho |rho(x)|^2 pi{rho}^2)^{1/2}``."""
    return float(np.sqrt(np.sum(np.abs(table.values[:, x]) ** 2 * table.plancherel**2)))


def unprimed_transform(K: FiniteHypergroup, table: CharacterTable) -> np.ndarray:
    """Column ``x`` is ``tau(x)^{-1} sum_rho rho(x) pi{rho} |rho>``; not unitary in general."""
    taus = np.array([tau(K, table, x) for x in range(K.order)])
    return table.values * table.plancherel[:, None] / taus[None, :]


def fourier_of_measure(K: FiniteHypergroup, table: CharacterTable, mu) -> np.ndarray:
    """``mu^(rho) = sum_x rho(x) mu{x}``."""
    return table.values @ np.asarray(mu)


def fourier_of_function(K: FiniteHypergroup, table: CharacterTable, f) -> np.ndarray:
    """``f^(rho) = sum_x f(x) rho(x) omega{x}``."""
    return table.values @ (np.asarray(f) * K.haar)


def inverse_fourier(K: FiniteHypergroup, table: CharacterTable, k) -> np.ndarray:
    """``k^v(x) = sum_rho k(rho) rho(x) pi{rho}``.

    With the unconjugated forward transform the round trip maps ``f`` to
    ``x -> f(xbar)``, the identity on hermitian hypergroups.
    """
    return (np.asarray(k) * table.plancherel) @ table.values


def dual_structure_constants(K: FiniteHypergroup, table: CharacterTable | None = None) -> np.ndarray:
    """``c[r, s, t] = pi{t} sum_x omega{x} rho_r(x) rho_s(x) conj(rho_t(x))``.

    These expand the pointwise product ``rho_r rho_s`` in the character basis.
    """
    table = table or character_table(K)
    rho = table.values
    c = np.einsum("x,rx,sx,tx->rst", K.haar, rho, rho, rho.conj()) * table.plancherel[None, None, :]
    if np.abs(c.imag).max() > 1e-8:
        big = np.unravel_index(np.argmax(np.abs(c.imag)), c.shape)
        raise NotStrong(float(c.imag[big]), tuple(int(i) for i in big), "dual structure constants are not real")
    return c.real


def dual_hypergroup(K: FiniteHypergroup, table: CharacterTable | None = None, tol: float = TOL) -> FiniteHypergroup:
    """Hypergroup structure on the characters; raises :class:`NotStrong` otherwise."""
    table = table or character_table(K)
    c = dual_structure_constants(K, table)
    idx = np.unravel_index(np.argmin(c), c.shape)
    if c[idx] < -tol:
        raise NotStrong(float(c[idx]), tuple(int(i) for i in idx))
    try:
        return validate(np.where(c < 0, 0.0, c), table.conjugate, name=f"dual({K.name})", tol=1e-8)
    except AxiomViolationError as exc:
        raise NotStrong(0.0, (0, 0, 0), f"dual structure is not a hypergroup: {exc}") from exc


def is_strong(K: FiniteHypergroup) -> bool:
    try:
        dual_hypergroup(K)
    except NotStrong:
        return False
    return True


def match_permutation(A: np.ndarray, B: np.ndarray, tol: float = 1e-8) -> list[int] | None:
    """Permutation ``p`` with ``A[i] ~ B[p[i]]`` row-wise, or None."""
    perm = []
    used: set[int] = set()
    for row in A:
        d = np.abs(B - row).max(axis=1)
        j = int(np.argmin(d))
        if d[j] > tol or j in used:
            return None
        used.add(j)
        perm.append(j)
    return perm


def isomorphic_via(K1: FiniteHypergroup, K2: FiniteHypergroup, perm: Sequence[int], tol: float = 1e-8) -> bool:
    """True when ``x -> perm[x]`` carries the structure constants of K1 onto K2."""
    p = np.asarray(perm)
    return bool(np.abs(K1.constants - K2.constants[np.ix_(p, p, p)]).max() <= tol)


def find_isomorphism(K1: FiniteHypergroup, K2: FiniteHypergroup, tol: float = 1e-8) -> list[int] | None:
    """Brute-force search for an isomorphism fixing the identity (small orders only)."""
    import itertools

    if K1.order != K2.order:
        return None
    rest = range(1, K1.order)
    for tail in itertools.permutations(rest):
        perm = [0, *tail]
        if isomorphic_via(K1, K2, perm, tol):
            return perm
    return None


def double_dual_check(K: FiniteHypergroup, tol: float = 1e-8) -> bool:
    """Evaluation ``x -> (rho -> rho(x))`` is an isomorphism of K onto the double dual."""
    table = character_table(K)
    Kd = dual_hypergroup(K, table)
    dual_table = character_table(Kd)
    Kdd = dual_hypergroup(Kd, dual_table)
    evaluations = table.values.T  # row x is rho -> rho(x)
    perm = match_permutation(evaluations, dual_table.values, tol)
    if perm is None:
        return False
    return isomorphic_via(K, Kdd, perm, tol)
