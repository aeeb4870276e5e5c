"""Finite hypergroups as dense structure-constant tensors.

A hypergroup of order ``N`` is stored as an ``(N, N, N)`` array ``n`` with
``n[i, j, k]`` the mass that ``delta_i * delta_j`` puts on element ``k``.
Element 0 is always the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    AxiomViolation,
    AxiomViolationError,
    AxiomViolationReport,
    DegenerateHaar,
    DimensionError,
)

TOL = 1e-9
REGRESSION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteHypergroup:
    """A validated finite hypergroup.

    Instances are only produced by :func:`validate`; arrays are read-only.
    """

    constants: np.ndarray
    involution: tuple[int, ...]
    haar: np.ndarray
    name: str = ""

    @property
    def order(self) -> int:
        return self.constants.shape[0]

    @property
    def identity(self) -> int:
        return 0

    @cached_property
    def support(self) -> np.ndarray:
        """Boolean ``(N, N, N)`` array marking ``k in supp(delta_i * delta_j)``."""
        s = self.constants > TOL
        s.flags.writeable = False
        return s

    @cached_property
    def commutative(self) -> bool:
        return is_commutative(self)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<FiniteHypergroup{label} order={self.order}>"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


def _as_tensor(constants) -> np.ndarray:
    n = np.asarray(constants, dtype=float)
    if n.ndim != 3 or not (n.shape[0] == n.shape[1] == n.shape[2]) or n.shape[0] == 0:
        raise DimensionError(f"structure constants must be an (N, N, N) array, got {n.shape}")
    return n


def _as_involution(involution, order: int) -> tuple[int, ...]:
    inv = tuple(int(i) for i in involution)
    if len(inv) != order or sorted(inv) != list(range(order)):
        raise DimensionError(f"involution {inv} is not a permutation of 0..{order - 1}")
    return inv


def check_axioms(constants, involution, tol: float = TOL) -> AxiomViolationReport:
    """Run every axiom check and collect the violations (no exception)."""
    n = _as_tensor(constants)
    N = n.shape[0]
    inv = np.array(_as_involution(involution, N))
    report = AxiomViolationReport()
    add = report.violations.append

    for idx in zip(*np.nonzero(n < -tol)):
        add(AxiomViolation("Negativity", tuple(int(i) for i in idx), float(n[idx])))
    n = np.where(n < 0, 0.0, n)

    rows = n.sum(axis=2) - 1.0
    for i, j in zip(*np.nonzero(np.abs(rows) > tol)):
        add(AxiomViolation("RowSum", (int(i), int(j)), float(rows[i, j])))

    eye = np.eye(N)
    left = np.abs(n[0] - eye).max(axis=1)
    right = np.abs(n[:, 0, :] - eye).max(axis=1)
    for i in range(N):
        if left[i] > tol:
            add(AxiomViolation("Identity", (0, i), float(left[i])))
        if right[i] > tol:
            add(AxiomViolation("Identity", (i, 0), float(right[i])))

    if inv[0] != 0:
        add(AxiomViolation("InvolutionSupport", (0,), float(inv[0])))
    for i in range(N):
        if inv[inv[i]] != i:
            add(AxiomViolation("InvolutionSupport", (i,), float(inv[inv[i]] - i)))
    to_e = n[:, :, 0]
    for i in range(N):
        for j in range(N):
            if (to_e[i, j] > tol) != (inv[i] == j):
                add(AxiomViolation("InvolutionSupport", (i, j), float(to_e[i, j])))

    # (delta_i * delta_j)^- = delta_jbar * delta_ibar
    flipped = n[np.ix_(inv, inv, inv)].transpose(1, 0, 2)
    anti = np.abs(n - flipped)
    for idx in zip(*np.nonzero(anti > tol)):
        add(AxiomViolation("InvolutionAntihomomorphism", tuple(int(i) for i in idx), float(anti[idx])))

    lhs = np.tensordot(n, n, axes=([2], [0]))  # [i,j,k,l] = ((i*j)*k){l}
    rhs = np.tensordot(n, n, axes=([2], [1])).transpose(2, 0, 1, 3)  # i*(j*k)
    assoc = np.abs(lhs - rhs).max(axis=3)
    for idx in zip(*np.nonzero(assoc > tol)):
        add(AxiomViolation("Associativity", tuple(int(i) for i in idx), float(assoc[idx])))
    return report


def validate(constants, involution, name: str = "", tol: float = TOL) -> FiniteHypergroup:
    """Check the hypergroup axioms and return a frozen :class:`FiniteHypergroup`.

    Entries in ``(-tol, 0)`` are clamped to zero. Raises
    :class:`AxiomViolationError` carrying the full report on failure.
    """
    n = _as_tensor(constants)
    inv = _as_involution(involution, n.shape[0])
    report = check_axioms(n, inv, tol=tol)
    if report:
        raise AxiomViolationError(report)
    n = np.where(n < 0, 0.0, n)
    return FiniteHypergroup(_frozen(n), inv, _frozen(_haar_weights(n, inv, tol)), name)


def _haar_weights(n: np.ndarray, inv: Sequence[int], tol: float) -> np.ndarray:
    N = n.shape[0]
    back = np.array([n[inv[x], x, 0] for x in range(N)])
    bad = np.nonzero(back <= tol)[0]
    if bad.size:
        raise DegenerateHaar(f"(delta_xbar * delta_x){{e}} vanishes at x={int(bad[0])}")
    return 1.0 / back


def haar(K: FiniteHypergroup) -> np.ndarray:
    """Haar weights ``omega{x} = 1 / (delta_xbar * delta_x){e}``, with ``omega{e} = 1``."""
    return K.haar


def delta(K: FiniteHypergroup, x: int) -> np.ndarray:
    d = np.zeros(K.order)
    d[x] = 1.0
    return d


def _check_measure(K: FiniteHypergroup, mu) -> np.ndarray:
    mu = np.asarray(mu)
    if mu.shape != (K.order,):
        raise DimensionError(f"measure of shape {mu.shape} on hypergroup of order {K.order}")
    return mu


def convolve(K: FiniteHypergroup, mu, nu) -> np.ndarray:
    """``(mu * nu){z} = sum_{i,j} mu{i} nu{j} n[i, j, z]``."""
    mu = _check_measure(K, mu)
    nu = _check_measure(K, nu)
    return np.einsum("i,j,ijk->k", mu, nu, K.constants)


def support_product(K: FiniteHypergroup, A: Iterable[int], B: Iterable[int]) -> frozenset[int]:
    A = sorted(set(A))
    B = sorted(set(B))
    if not A or not B:
        return frozenset()
    hit = K.support[np.ix_(A, B)].any(axis=(0, 1))
    return frozenset(int(k) for k in np.nonzero(hit)[0])


def is_commutative(K: FiniteHypergroup, tol: float = TOL) -> bool:
    n = K.constants
    return bool(np.abs(n - n.transpose(1, 0, 2)).max() <= tol)


def is_hermitian(K: FiniteHypergroup) -> bool:
    return all(i == j for i, j in enumerate(K.involution))


def eval_translated(K: FiniteHypergroup, f: Callable[[int], complex] | Sequence[complex], x: int, y: int) -> complex:
    """``f(x * y) = sum_z f(z) (delta_x * delta_y){z}``."""
    if callable(f):
        values = np.array([f(z) for z in range(K.order)])
    else:
        values = np.asarray(f)
    return complex(K.constants[x, y] @ values)


def translation_invariance_residual(K: FiniteHypergroup) -> float:
    """``max_{i,k} |sum_j omega{j} n[i, j, k] - omega{k}|``."""
    shifted = np.einsum("j,ijk->ik", K.haar, K.constants)
    return float(np.abs(shifted - K.haar[None, :]).max())
