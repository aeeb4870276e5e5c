"""State-vector simulation of the hidden sub-hypergroup algorithm.

One iteration, on registers (element/character, label):

1. prepare ``|chi_0>'|0>``;
2. apply ``F^dagger`` to register 1;
3. apply the oracle ``|x>|y> -> |x>|y + f(x) mod L>`` and measure register 2;
4. apply ``F`` to register 1;
5. measure register 1 and record the character.

The label register is measured eagerly after step 3.  Amplitudes are exact
up to floating point; randomness only enters through the two measurements.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import FiniteHypergroup
from .duality import CharacterTable, character_table, fourier_matrix
from .errors import NormDrift, NotAPartition, NotClosed, Unresolved
from .subobjects import Subhypergroup, certify, cosets

NORM_TOL = 1e-8
RECONSTRUCT_TOL = 1e-6


class CosetOracle:
    """Black box constant on the cosets of a hidden subhypergroup.

    The solver only calls the oracle; ``hidden`` is kept for bookkeeping.
    """

    def __init__(self, labels: Sequence[int], hidden: Subhypergroup | None = None):
        self._labels = tuple(int(v) for v in labels)
        self.hidden = hidden
        self.queries = 0

    def __call__(self, x: int) -> int:
        self.queries += 1
        return self._labels[x]

    @property
    def num_labels(self) -> int:
        return max(self._labels) + 1

    @property
    def order(self) -> int:
        return len(self._labels)

    def table(self) -> tuple[int, ...]:
        """All labels at once (register-level oracle application)."""
        self.queries += len(self._labels)
        return self._labels


def make_coset_oracle(K: FiniteHypergroup, H: Subhypergroup) -> CosetOracle:
    return CosetOracle(cosets(K, H).labels(), hidden=H)


def oracle_from_labels(labels: Sequence[int]) -> CosetOracle:
    """Wrap an arbitrary label map, compacting label ids to ``0..L-1`` by first use."""
    ids: dict[int, int] = {}
    return CosetOracle([ids.setdefault(int(v), len(ids)) for v in labels])


@dataclass
class TwoRegisterState:
    """``amplitudes[i, l]``: register 1 index i (element or character), label l."""

    amplitudes: np.ndarray
    basis: str = "element"

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def check(self) -> None:
        drift = abs(self.norm() - 1.0)
        if drift > NORM_TOL:
            raise NormDrift(f"state norm drifted by {drift:.3g}")


class Simulator:
    """Circuit for one hypergroup and oracle; shots are vectorized."""

    def __init__(self, K: FiniteHypergroup, F: np.ndarray, oracle: CosetOracle):
        self.K = K
        self.F = F
        self.labels = np.array(oracle.table())
        self.L = int(self.labels.max()) + 1
        self._post_oracle = self._prepare()
        probs = np.sum(np.abs(self._post_oracle.amplitudes) ** 2, axis=0)
        self.label_probs = probs
        self.label_cdf = np.cumsum(probs)
        # register 1 after measuring label l and renormalizing
        collapsed = self._post_oracle.amplitudes.T / np.sqrt(np.where(probs > 0, probs, 1.0))[:, None]
        self.collapsed = collapsed
        out = collapsed @ F.T
        self.character_amps = out
        for l in range(self.L):
            if probs[l] > 0:
                drift = abs(np.linalg.norm(out[l]) - 1.0)
                if drift > NORM_TOL:
                    raise NormDrift(f"post-transform norm drifted by {drift:.3g} on label {l}")
        self.character_cdf = np.cumsum(np.abs(out) ** 2, axis=1)

    def _prepare(self) -> TwoRegisterState:
        N = self.K.order
        amps = np.zeros((N, self.L), dtype=complex)
        amps[0, 0] = 1.0
        state = TwoRegisterState(amps, "character")
        state.check()
        state = TwoRegisterState(self.F.conj().T @ state.amplitudes, "element")
        state.check()
        # |x>|y> -> |x>|y + f(x)>
        shifted = np.zeros_like(state.amplitudes)
        for x in range(N):
            shifted[x] = np.roll(state.amplitudes[x], self.labels[x])
        state = TwoRegisterState(shifted, "element")
        state.check()
        return state

    def run(self, uniforms: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Shots driven by ``uniforms[s] = (u_label, u_character)``."""
        u = np.atleast_2d(uniforms)
        labels = _inverse_cdf(self.label_cdf, u[:, 0])
        chars = _inverse_cdf(self.character_cdf[labels], u[:, 1])
        return labels, chars


def _inverse_cdf(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Row-wise inverse-CDF sampling; ``cdf`` broadcasts against ``u``.

    Picks the first outcome whose cumulative mass exceeds ``u * total``, so
    zero-probability outcomes are never returned for ``u < 1``.
    """
    cdf = np.broadcast_to(cdf, (u.shape[0], cdf.shape[-1]))
    target = u * cdf[:, -1]
    return np.minimum((cdf <= target[:, None]).sum(axis=1), cdf.shape[1] - 1)


def shot_uniforms(seed: int, first_shot: int, count: int) -> np.ndarray:
    """Uniforms for shots ``first_shot .. first_shot+count-1``, each from its own stream."""
    out = np.empty((count, 2))
    for s in range(count):
        out[s] = np.random.default_rng([int(seed), first_shot + s]).random(2)
    return out


def run_iteration(K: FiniteHypergroup, F: np.ndarray, oracle: CosetOracle, rng: np.random.Generator) -> tuple[int, int]:
    """One pass of the circuit; returns ``(label, character index)``."""
    labels, chars = Simulator(K, F, oracle).run(rng.random(2))
    return int(labels[0]), int(chars[0])


@dataclass(frozen=True)
class ExactDistribution:
    per_coset: np.ndarray  # [block, character]
    coset_probs: np.ndarray  # Pr[label = block]
    marginal: np.ndarray

    @property
    def support(self) -> list[int]:
        return [int(r) for r in np.nonzero(self.marginal > 1e-12)[0]]

    def coset_tv(self) -> float:
        """Largest total-variation distance between two per-coset distributions."""
        P = self.per_coset
        if P.shape[0] < 2:
            return 0.0
        return float(max(0.5 * np.abs(P[a] - P[b]).sum() for a in range(len(P)) for b in range(a + 1, len(P))))


def exact_distribution(K: FiniteHypergroup, table: CharacterTable, H: Subhypergroup) -> ExactDistribution:
    """Closed-form step-5 law: ``Pr[rho | c] = pi{rho} |sum_{m in c*H} omega{m} rho(m)|^2 / omega(c*H)``."""
    part = cosets(K, H)
    total = float(K.haar.sum())
    per = np.zeros((len(part.blocks), len(table)))
    for b, blk in enumerate(part.blocks):
        idx = sorted(blk)
        s = table.values[:, idx] @ K.haar[idx]
        per[b] = table.plancherel * np.abs(s) ** 2 / part.block_mass[b]
    coset_probs = np.array(part.block_mass) / total
    return ExactDistribution(per, coset_probs, coset_probs @ per)


def reconstruct(K: FiniteHypergroup, table: CharacterTable, samples: Sequence[int], tol: float = RECONSTRUCT_TOL) -> Subhypergroup:
    """``{x : |rho(x) - 1| <= tol for every sampled rho}``, certified closed."""
    if len(samples) == 0:
        raise ValueError("reconstruct needs at least one sample")
    rows = table.values[sorted(set(int(s) for s in samples))]
    members = np.nonzero((np.abs(rows - 1.0) <= tol).all(axis=0))[0]
    return certify(K, members)


def verify_against_oracle(K: FiniteHypergroup, candidate: Subhypergroup, oracle: Callable[[int], int]) -> bool:
    """f is constant on every coset of the candidate and distinct across cosets."""
    try:
        part = cosets(K, candidate)
    except NotAPartition:
        return False
    seen = set()
    for blk in part.blocks:
        values = {oracle(x) for x in sorted(blk)}
        if len(values) != 1:
            return False
        (v,) = values
        if v in seen:
            return False
        seen.add(v)
    return True


def default_batch_size(order: int) -> int:
    return 4 * math.ceil(math.log2(order)) + 8 if order > 1 else 8


@dataclass(frozen=True)
class Policy:
    batch_size: int | None = None
    max_batches: int = 16

    def batch_for(self, order: int) -> int:
        return self.batch_size or default_batch_size(order)


@dataclass
class HSHPRun:
    seed: int
    shots: int = 0
    observed: list[int] = field(default_factory=list)
    reconstructed: Subhypergroup | None = None
    verified: bool = False
    batches: int = 0
    trace: list[tuple[int, int]] = field(default_factory=list)
    failing_predicate: str = ""

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "shots": self.shots,
            "batches": self.batches,
            "observed": list(self.observed),
            "reconstructed": self.reconstructed.sorted() if self.reconstructed else None,
            "verified": self.verified,
            "trace": [list(t) for t in self.trace],
            "failing_predicate": self.failing_predicate,
        }


def solve_hshp(
    K: FiniteHypergroup,
    oracle: CosetOracle,
    seed: int = 0,
    policy: Policy | None = None,
    workers: int = 1,
    table: CharacterTable | None = None,
) -> HSHPRun:
    """Batch-and-verify driver; raises :class:`Unresolved` after ``max_batches``."""
    policy = policy or Policy()
    table = table or character_table(K)
    sim = Simulator(K, fourier_matrix(K, table), oracle)
    b = policy.batch_for(K.order)
    run = HSHPRun(seed=seed)
    for batch in range(policy.max_batches):
        first = batch * b
        u = _parallel_uniforms(seed, first, b, workers)
        labels, chars = sim.run(u)
        run.trace.extend(zip(labels.tolist(), chars.tolist()))
        run.observed.extend(chars.tolist())
        run.shots += b
        run.batches = batch + 1
        try:
            candidate = reconstruct(K, table, run.observed)
        except NotClosed:
            run.failing_predicate = "candidate not closed"
            continue
        run.reconstructed = candidate
        if verify_against_oracle(K, candidate, oracle):
            run.verified = True
            run.failing_predicate = ""
            return run
        run.failing_predicate = "oracle not constant/distinct on candidate cosets"
    raise Unresolved(
        f"no verified subhypergroup after {policy.max_batches} batches "
        f"(last candidate {run.reconstructed!r}: {run.failing_predicate})",
        run,
    )


def _parallel_uniforms(seed: int, first: int, count: int, workers: int) -> np.ndarray:
    if workers <= 1 or count < 2 * workers:
        return shot_uniforms(seed, first, count)
    edges = np.linspace(0, count, workers + 1).astype(int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(lambda ab: shot_uniforms(seed, first + ab[0], ab[1] - ab[0]), zip(edges[:-1], edges[1:]))
        return np.concatenate(list(parts))
