"""Example hypergroups: the order-2 and order-3 families, group-derived
hypergroups (groups, conjugacy classes, double cosets) and direct products.

The module-level :data:`PRESETS` registry is built eagerly on import.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import TOL, FiniteHypergroup, validate
from .errors import InvalidGroupTable, NotASubgroup, ParamOutOfRange

MAX_GROUP_ORDER = 48


@dataclass(frozen=True, eq=False)
class GroupTable:
    """Cayley table of a finite group with identity at index 0."""

    cayley: np.ndarray
    inverse: tuple[int, ...]
    name: str = ""

    @property
    def order(self) -> int:
        return self.cayley.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.cayley[a, b])

    @property
    def abelian(self) -> bool:
        return bool((self.cayley == self.cayley.T).all())


def group_table(cayley, name: str = "") -> GroupTable:
    """Validate a Cayley table (Latin square, identity 0, associativity)."""
    c = np.asarray(cayley, dtype=int)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] == 0:
        raise InvalidGroupTable(f"Cayley table must be square, got shape {c.shape}")
    N = c.shape[0]
    if N > MAX_GROUP_ORDER:
        raise InvalidGroupTable(f"group order {N} exceeds cap {MAX_GROUP_ORDER}")
    full = np.arange(N)
    for r in range(N):
        if not (np.array_equal(np.sort(c[r]), full) and np.array_equal(np.sort(c[:, r]), full)):
            raise InvalidGroupTable(f"row/column {r} is not a permutation")
    if not (np.array_equal(c[0], full) and np.array_equal(c[:, 0], full)):
        raise InvalidGroupTable("element 0 is not the identity")
    # (ab)c == a(bc) for all triples
    if not _associative(c):
        raise InvalidGroupTable("multiplication is not associative")
    inverse = tuple(int(np.nonzero(c[a] == 0)[0][0]) for a in range(N))
    c = c.copy()
    c.flags.writeable = False
    return GroupTable(c, inverse, name)


def _associative(c: np.ndarray) -> bool:
    # lhs[a, b, d] = (ab)d, rhs[a, b, d] = a(bd)
    lhs = c[c]
    rhs = c[np.arange(c.shape[0])[:, None, None], c[None, :, :]]
    return bool(np.array_equal(lhs, rhs))


def _from_elements(elements: Sequence, op: Callable, name: str) -> GroupTable:
    index = {g: i for i, g in enumerate(elements)}
    cayley = [[index[op(a, b)] for b in elements] for a in elements]
    return group_table(cayley, name)


def cyclic_group(n: int) -> GroupTable:
    if n < 1:
        raise ParamOutOfRange(f"cyclic group order must be >= 1, got {n}")
    return _from_elements(list(range(n)), lambda a, b: (a + b) % n, f"Z{n}")


def _compose(p, q):
    # (p q)(x) = p(q(x))
    return tuple(p[i] for i in q)


def symmetric_group(n: int) -> GroupTable:
    perms = sorted(itertools.permutations(range(n)))
    return _from_elements(perms, _compose, f"S{n}")


def dihedral_group(n: int) -> GroupTable:
    """Symmetries of the regular n-gon as pairs (rotation, flip)."""

    def op(a, b):
        r1, s1 = a
        r2, s2 = b
        return ((r1 + (-r2 if s1 else r2)) % n, s1 ^ s2)

    elements = [(r, s) for s in (0, 1) for r in range(n)]
    return _from_elements(elements, op, f"D{n}")


def quaternion_group() -> GroupTable:
    """Q8 as unit quaternions (w, x, y, z)."""

    def op(a, b):
        a1, b1, c1, d1 = a
        a2, b2, c2, d2 = b
        return (
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    units = [(1, 0, 0, 0), (-1, 0, 0, 0)]
    for axis in range(1, 4):
        for sign in (1, -1):
            v = [0, 0, 0, 0]
            v[axis] = sign
            units.append(tuple(v))
    return _from_elements(units, op, "Q8")


# ---------------------------------------------------------------------------
# Parametric families
# ---------------------------------------------------------------------------


def z2_theta(theta: float) -> FiniteHypergroup:
    """Order-2 hypergroup with ``delta_1 * delta_1 = theta delta_0 + (1 - theta) delta_1``."""
    if not 0 < theta <= 1:
        raise ParamOutOfRange(f"theta must lie in (0, 1], got {theta}")
    n = np.zeros((2, 2, 2))
    n[0, 0, 0] = n[0, 1, 1] = n[1, 0, 1] = 1.0
    n[1, 1] = (theta, 1.0 - theta)
    return validate(n, (0, 1), name=f"z2_theta({theta:g})")


def order3_hermitian_params(gamma1: float, omega1: float, omega2: float) -> dict[str, float]:
    """Derived multiplication-table parameters of the hermitian order-3 family."""
    checks = [
        (0 <= gamma1 <= 1, "0 <= gamma1 <= 1"),
        (omega1 >= 1, "omega1 >= 1"),
        (omega2 >= 1, "omega2 >= 1"),
        (1 + gamma1 * omega2 <= omega1 + TOL, "1 + gamma1*omega2 <= omega1"),
        (1 + (1 - gamma1) * omega1 <= omega2 + TOL, "1 + (1-gamma1)*omega1 <= omega2"),
    ]
    for ok, label in checks:
        if not ok:
            raise ParamOutOfRange(f"constraint violated: {label}")
    gamma2 = 1.0 - gamma1
    return {
        "gamma1": gamma1,
        "gamma2": gamma2,
        "omega1": omega1,
        "omega2": omega2,
        "beta1": gamma1 * omega2 / omega1,
        "beta2": gamma2 * omega1 / omega2,
        "alpha1": 1.0 - (1.0 + gamma1 * omega2) / omega1,
        "alpha2": 1.0 - (1.0 + gamma2 * omega1) / omega2,
    }


def order3_hermitian(gamma1: float, omega1: float, omega2: float) -> FiniteHypergroup:
    p = order3_hermitian_params(gamma1, omega1, omega2)
    n = np.zeros((3, 3, 3))
    for i in range(3):
        n[0, i, i] = n[i, 0, i] = 1.0
    n[1, 1] = (1.0 / omega1, p["alpha1"], p["beta1"])
    n[1, 2] = n[2, 1] = (0.0, gamma1, p["gamma2"])
    n[2, 2] = (1.0 / omega2, p["beta2"], p["alpha2"])
    return validate(n, (0, 1, 2), name=f"order3_hermitian({gamma1:g},{omega1:g},{omega2:g})")


def order3_hermitian_characters(gamma1: float, omega1: float, omega2: float, printed: bool = False) -> np.ndarray:
    """Closed-form character table rows ``(1, 1, 1), (1, x, z), (1, y, v)``.

    With ``printed=True`` the x and y values use the denominator ``2*omega2``
    exactly as typeset in the source table; the default uses ``2*omega1``,
    which is the reading that reproduces true characters.
    """
    p = order3_hermitian_params(gamma1, omega1, omega2)
    D = math.sqrt((1 + gamma1 * omega2 - p["gamma2"] * omega1) ** 2 + 4 * p["gamma2"] * omega1)
    xy_den = 2 * omega2 if printed else 2 * omega1
    x = (p["alpha1"] - gamma1) / 2 + D / xy_den
    y = (p["alpha1"] - gamma1) / 2 - D / xy_den
    z = (p["alpha2"] - p["gamma2"]) / 2 - D / (2 * omega2)
    v = (p["alpha2"] - p["gamma2"]) / 2 + D / (2 * omega2)
    return np.array([[1.0, 1.0, 1.0], [1.0, x, z], [1.0, y, v]])


def order3_hermitian_plancherel(gamma1: float, omega1: float, omega2: float, printed: bool = False) -> np.ndarray:
    """Plancherel weights ``s1/t, s2/t, s3/t`` from the closed-form characters.

    As typeset, s3 ends in ``1/omega1``; ``1/omega2`` is what matches the
    orthogonality weights, and ``printed=True`` keeps the typeset term.
    ``t`` vanishes on some instances (the Bose-Mesner square among them), where
    the closed form says nothing and ParamOutOfRange is raised.
    """
    _, (_, x, z), (_, y, v) = order3_hermitian_characters(gamma1, omega1, omega2)
    w1, w2 = omega1, omega2
    s1 = x * x * v * v + y * y / w2 + z * z / w1 - (y * y * z * z + x * x / w2 + v * v / w1)
    s2 = y * y + v * v / w1 + 1 / w2 - (v * v + y * y / w2 + 1 / w1)
    s3 = z * z + x * x / w2 + 1 / w1 - (x * x + z * z / w1 + 1 / (w1 if printed else w2))
    t = x * x * v * v + y * y + z * z - (x * x + y * y * z * z + v * v)
    if abs(t) < 1e-12:
        raise ParamOutOfRange(f"closed-form Plancherel weights are singular here (t = {t:.3g})")
    return np.array([s1, s2, s3]) / t


def order3_hermitian_D(gamma1: float, omega1: float, omega2: float) -> float:
    gamma2 = 1.0 - gamma1
    return math.sqrt((1 + gamma1 * omega2 - gamma2 * omega1) ** 2 + 4 * gamma2 * omega1)


def order3_nonhermitian(alpha: float) -> FiniteHypergroup:
    """Non-hermitian order-3 hypergroup; the involution swaps 1 and 2."""
    if not 0 < alpha <= 1:
        raise ParamOutOfRange(f"alpha must lie in (0, 1], got {alpha}")
    g = (1.0 - alpha) / 2.0
    n = np.zeros((3, 3, 3))
    for i in range(3):
        n[0, i, i] = n[i, 0, i] = 1.0
    n[1, 1] = (0.0, g, 1.0 - g)
    n[1, 2] = n[2, 1] = (alpha, g, g)
    n[2, 2] = (0.0, 1.0 - g, g)
    return validate(n, (0, 2, 1), name=f"order3_nonhermitian({alpha:g})")


def order3_nonhermitian_z(alpha: float) -> complex:
    return complex(-alpha, math.sqrt(alpha * alpha + 2 * alpha)) / 2


def order3_nonhermitian_plancherel(alpha: float) -> np.ndarray:
    """Plancherel weights ``s1/t, s2/t, s2/t`` with ``omega1 = 1/alpha``.

    s1, s2 and t share the factor ``1 - alpha``, so at the group corner the
    quotient is taken in its cancelled form ``(alpha, 1, 1) / (2 + alpha)``.
    """
    if not 0.0 < alpha <= 1.0:
        raise ParamOutOfRange(f"alpha must lie in (0, 1], got {alpha}")
    w1 = 1.0 / alpha
    s1 = 2 - w1 * (alpha * alpha + alpha)
    s2 = w1 - 1
    t = w1 * (2 - alpha * alpha - alpha)
    if abs(t) < 1e-12:
        return np.array([alpha, 1.0, 1.0]) / (2.0 + alpha)
    return np.array([s1 / t, s2 / t, s2 / t])


# ---------------------------------------------------------------------------
# Group-derived hypergroups
# ---------------------------------------------------------------------------


def group_hypergroup(G: GroupTable) -> FiniteHypergroup:
    N = G.order
    n = np.zeros((N, N, N))
    i, j = np.indices((N, N))
    n[i, j, G.cayley] = 1.0
    return validate(n, G.inverse, name=G.name)


def _block_hypergroup(G: GroupTable, blocks: list[list[int]], name: str) -> FiniteHypergroup:
    """Convolve uniform probability measures on blocks of G, aggregated by block."""
    N = G.order
    block_of = np.empty(N, dtype=int)
    for b, members in enumerate(blocks):
        block_of[members] = b
    M = len(blocks)
    n = np.zeros((M, M, M))
    for a, A in enumerate(blocks):
        for b, B in enumerate(blocks):
            targets = block_of[G.cayley[np.ix_(A, B)]].ravel()
            n[a, b] = np.bincount(targets, minlength=M) / (len(A) * len(B))
    inv = [int(block_of[G.inverse[blk[0]]]) for blk in blocks]
    return validate(n, inv, name=name)


def _ordered_blocks(blocks: Iterable[Iterable[int]]) -> list[list[int]]:
    return sorted((sorted(b) for b in blocks), key=lambda b: (len(b), b[0]))


def conjugacy_classes(G: GroupTable) -> list[list[int]]:
    seen: set[int] = set()
    classes = []
    for g in range(G.order):
        if g in seen:
            continue
        cls = {G.mul(G.mul(h, g), G.inverse[h]) for h in range(G.order)}
        seen |= cls
        classes.append(cls)
    return _ordered_blocks(classes)


def class_hypergroup(G: GroupTable) -> FiniteHypergroup:
    """The commutative hypergroup of conjugacy classes of G."""
    return _block_hypergroup(G, conjugacy_classes(G), f"class({G.name})")


def check_subgroup(G: GroupTable, H: Iterable[int]) -> list[int]:
    H = sorted(set(int(h) for h in H))
    if not H or H[0] != 0:
        raise NotASubgroup(f"{H} does not contain the identity")
    hs = set(H)
    for a in H:
        if G.inverse[a] not in hs or any(G.mul(a, b) not in hs for b in H):
            raise NotASubgroup(f"{H} is not closed under the group operation")
    return H


def double_cosets(G: GroupTable, H: Iterable[int]) -> list[list[int]]:
    H = check_subgroup(G, H)
    seen: set[int] = set()
    blocks = []
    for g in range(G.order):
        if g in seen:
            continue
        blk = {G.mul(G.mul(h1, g), h2) for h1 in H for h2 in H}
        seen |= blk
        blocks.append(blk)
    return _ordered_blocks(blocks)


def double_coset(G: GroupTable, H: Iterable[int]) -> FiniteHypergroup:
    """Double-coset hypergroup ``G//H``; commutativity is not required."""
    H = check_subgroup(G, H)
    label = ",".join(map(str, H))
    return _block_hypergroup(G, double_cosets(G, H), f"{G.name}//{{{label}}}")


def direct_product(K1: FiniteHypergroup, K2: FiniteHypergroup) -> FiniteHypergroup:
    """Product hypergroup; element ``(a, b)`` has index ``a * |K2| + b``."""
    N1, N2 = K1.order, K2.order
    n = np.einsum("ack,bdl->abcdkl", K1.constants, K2.constants).reshape(N1 * N2, N1 * N2, N1 * N2)
    inv = [K1.involution[a] * N2 + K2.involution[b] for a in range(N1) for b in range(N2)]
    return validate(n, inv, name=f"{K1.name} x {K2.name}")


def trivial_hypergroup() -> FiniteHypergroup:
    return validate(np.ones((1, 1, 1)), (0,), name="trivial")


# ---------------------------------------------------------------------------
# Random valid parameter draws
# ---------------------------------------------------------------------------


def random_z2_theta(rng: np.random.Generator) -> FiniteHypergroup:
    return z2_theta(float(rng.uniform(0.05, 1.0)))


def random_order3_hermitian_params(rng: np.random.Generator) -> tuple[float, float, float]:
    gamma1 = float(rng.uniform(0.0, 1.0))
    gamma2 = 1.0 - gamma1
    s1, s2 = rng.exponential(1.5, size=2)
    # omega1 = 1 + gamma1*omega2 + s1, omega2 = 1 + gamma2*omega1 + s2
    omega1 = (1 + gamma1 + gamma1 * s2 + s1) / (1 - gamma1 * gamma2)
    omega2 = 1 + gamma2 * omega1 + s2
    return gamma1, float(omega1), float(omega2)


def random_order3_hermitian(rng: np.random.Generator) -> FiniteHypergroup:
    return order3_hermitian(*random_order3_hermitian_params(rng))


def random_order3_nonhermitian(rng: np.random.Generator) -> FiniteHypergroup:
    return order3_nonhermitian(float(rng.uniform(0.05, 1.0)))


FAMILY_SAMPLERS: dict[str, Callable[[np.random.Generator], FiniteHypergroup]] = {
    "z2_theta": random_z2_theta,
    "order3_hermitian": random_order3_hermitian,
    "order3_nonhermitian": random_order3_nonhermitian,
}


def random_small_factor(rng: np.random.Generator) -> FiniteHypergroup:
    choice = int(rng.integers(5))
    if choice == 0:
        return random_z2_theta(rng)
    if choice == 1:
        return random_order3_hermitian(rng)
    if choice == 2:
        return random_order3_nonhermitian(rng)
    if choice == 3:
        return group_hypergroup(cyclic_group(int(rng.integers(2, 5))))
    return PRESETS["bose_mesner_square"]


def random_direct_product(rng: np.random.Generator, max_order: int = 16) -> FiniteHypergroup:
    while True:
        K1 = random_small_factor(rng)
        K2 = random_small_factor(rng)
        if K1.order * K2.order <= max_order:
            return direct_product(K1, K2)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


def _build_groups() -> dict[str, GroupTable]:
    groups = {f"Z{n}": cyclic_group(n) for n in range(2, 9)}
    groups["S3"] = symmetric_group(3)
    groups["D4"] = dihedral_group(4)
    groups["Q8"] = quaternion_group()
    return groups


GROUPS: dict[str, GroupTable] = _build_groups()


def _build_presets() -> dict[str, FiniteHypergroup]:
    p: dict[str, FiniteHypergroup] = {}
    p["trivial"] = trivial_hypergroup()
    for label, theta in (("1", 1.0), ("1/2", 0.5), ("1/3", 1 / 3), ("1/4", 0.25)):
        p[f"z2_theta_{label.replace('/', '_')}"] = z2_theta(theta)
    p["bose_mesner_square"] = order3_hermitian(0.0, 1.0, 2.0)
    p["order3_hermitian_0.5_3_3"] = order3_hermitian(0.5, 3.0, 3.0)
    p["nonhermitian_1_2"] = order3_nonhermitian(0.5)
    for n in range(2, 9):
        p[f"Z{n}"] = group_hypergroup(GROUPS[f"Z{n}"])
    S3, D4, Q8 = GROUPS["S3"], GROUPS["D4"], GROUPS["Q8"]
    p["class_S3"] = class_hypergroup(S3)
    p["class_D4"] = class_hypergroup(D4)
    p["class_Q8"] = class_hypergroup(Q8)
    p["S3//Z2"] = double_coset(S3, _order2_subgroup(S3))
    p["D4//reflection"] = double_coset(D4, [0, D4.order // 2])
    p["Q8//center"] = double_coset(Q8, [0, 1])
    half, third = p["z2_theta_1_2"], p["z2_theta_1_3"]
    p["z2(1/2)xz2(1/3)"] = direct_product(half, third)
    p["Z2xZ2"] = direct_product(p["Z2"], p["Z2"])
    p["bose_mesner x z2(1/2)"] = direct_product(p["bose_mesner_square"], half)
    p["nonhermitian x z2(1/2)"] = direct_product(p["nonhermitian_1_2"], half)
    p["bose_mesner^2"] = direct_product(p["bose_mesner_square"], p["bose_mesner_square"])
    p["z2(1/2)^4"] = direct_product(direct_product(half, half), direct_product(half, half))
    return p


def _order2_subgroup(G: GroupTable) -> list[int]:
    for g in range(1, G.order):
        if G.mul(g, g) == 0:
            return [0, g]
    raise NotASubgroup(f"{G.name} has no element of order 2")


PRESETS: dict[str, FiniteHypergroup] = _build_presets()


def presets() -> dict[str, FiniteHypergroup]:
    """Named instances; all of them are commutative."""
    return dict(PRESETS)
