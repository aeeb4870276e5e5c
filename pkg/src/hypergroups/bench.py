"""Dense versus factorized Fourier application on product hypergroups.

For ``K = K1 x ... x Kk`` the Fourier matrix is the Kronecker product of the
factor matrices (rows in product-character order), so it can be applied one
tensor axis at a time instead of as one dense ``N x N`` matrix.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .constructions import direct_product, z2_theta
from .core import FiniteHypergroup
from .duality import fourier_matrix, match_permutation

VERIFY_MAX_ORDER = 64


def kron_fourier(factors: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, factors)


def apply_dense(F: np.ndarray, states: np.ndarray) -> np.ndarray:
    """``states`` has shape (batch, N)."""
    return states @ F.T


def apply_factorized(factors: Sequence[np.ndarray], states: np.ndarray) -> np.ndarray:
    dims = [f.shape[0] for f in factors]
    t = states.reshape(states.shape[0], *dims)
    for axis, f in enumerate(factors, start=1):
        t = np.moveaxis(np.tensordot(f, t, axes=([1], [axis])), 0, axis)
    return t.reshape(states.shape[0], -1)


def product_power(K: FiniteHypergroup, k: int) -> FiniteHypergroup:
    out = K
    for _ in range(k - 1):
        out = direct_product(out, K)
    return out


def kron_matches_product(K: FiniteHypergroup, k: int, tol: float = 1e-10) -> bool:
    """The Kronecker Fourier matrix equals the product's own matrix up to row order."""
    F = fourier_matrix(K)
    dense = fourier_matrix(product_power(K, k))
    return match_permutation(kron_fourier([F] * k), dense, tol) is not None


@dataclass
class BenchRow:
    k: int
    order: int
    dense_seconds: float
    factorized_seconds: float
    max_abs_diff: float

    @property
    def speedup(self) -> float:
        return self.dense_seconds / self.factorized_seconds if self.factorized_seconds else float("inf")


def _best_time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_bench(theta: float = 0.5, ks: Sequence[int] = range(1, 9), batch: int = 64, repeats: int = 5, seed: int = 0) -> list[BenchRow]:
    base = z2_theta(theta)
    F = fourier_matrix(base)
    rng = np.random.default_rng(seed)
    rows = []
    for k in ks:
        factors = [F] * k
        dense = kron_fourier(factors)
        N = dense.shape[0]
        states = rng.standard_normal((batch, N)) + 1j * rng.standard_normal((batch, N))
        diff = float(np.abs(apply_dense(dense, states) - apply_factorized(factors, states)).max())
        td = _best_time(lambda: apply_dense(dense, states), repeats)
        tf = _best_time(lambda: apply_factorized(factors, states), repeats)
        rows.append(BenchRow(k, N, td, tf, diff))
    return rows


def crossover(rows: Sequence[BenchRow]) -> int | None:
    """Smallest k from which the factorized path is faster for every larger k."""
    best = None
    for row in reversed(rows):
        if row.speedup > 1.0:
            best = row.k
        else:
            break
    return best


def write_csv(rows: Sequence[BenchRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("k,order,dense_seconds,factorized_seconds,speedup,max_abs_diff\n")
        for r in rows:
            fh.write(f"{r.k},{r.order},{r.dense_seconds:.6e},{r.factorized_seconds:.6e},{r.speedup:.4f},{r.max_abs_diff:.3e}\n")


def write_plot(rows: Sequence[BenchRow], path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    orders = [r.order for r in rows]
    ax.loglog(orders, [r.dense_seconds for r in rows], "o-", label="dense")
    ax.loglog(orders, [r.factorized_seconds for r in rows], "s-", label="factorized")
    ax.set_xlabel("order |K|")
    ax.set_ylabel("seconds per batch")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
