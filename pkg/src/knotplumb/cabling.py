"""Iterated torus knot descriptors and plumbing graphs for their surgeries.

An iterated torus knot is described by cabling pairs (p_1, a_1), ...,
(p_k, a_k): each stage is the (p_i, a_i)-cable of the previous one,
starting from the unknot.  The tower is *algebraic* (a link of a plane
curve singularity) when a_{i+1} > p_i p_{i+1} a_i for every i, and
*super-algebraic* when the stronger ceil(a_{i+1}/p_{i+1}) - 1 >= p_i a_i
holds, which keeps vertices of weight below -2 from becoming adjacent in
the reduced graph.

For an n-surgery on an algebraic tower, raw_plumbing builds a plumbing
tree bounding the surgered manifold: one L-shaped hook per cabling pair
(a torso chain carrying the expansion of a_i/(a_i - p_i), a corner of
weight -1, and a leg carrying the expansion of a_i/p_i with its leading
coefficient dropped), consecutive hooks joined through a (-p_i a_i)
vertex and a (-1) vertex, and a final leaf of weight N = n - p_k a_k.
Contracting the junctions and flattening the leaf yields the reduced,
negative-definite graph whenever N >= 1; for two-iteration towers in the
a_1 = 1 (mod p_1), a_2 = +-1 (mod p_2) families the same graph is also
emitted directly in closed form, and the two construction paths are kept
as mutual oracles (|det| = n is checked against both).
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd

from .hjcf import ceil_div, expand_neg_cf, star_inverse
from .plumbing import (
    NoNegativeDefiniteFormError,
    WeightedTree,
    det_exact,
    gram_matrix,
    reduce_tree,
)


class UnsupportedTowerError(ValueError):
    """The tower is outside what the requested construction supports."""


class ReducibleBoundaryError(ValueError):
    """N = 0: the surgered manifold may split as a connected sum; no single
    negative-definite plumbing tree is produced for it."""


class TowerClass(Enum):
    NOT_ALGEBRAIC = "not-algebraic"
    ALGEBRAIC_ONLY = "algebraic-only"
    SUPER_ALGEBRAIC = "super-algebraic"


@dataclass(frozen=True)
class CableTower:
    """Cabling parameters ((p_1, a_1), ..., (p_k, a_k)) of an iterated torus knot."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple((int(p), int(a)) for p, a in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise ValueError("a tower needs at least one cabling pair")
        for p, a in pairs:
            if p < 2:
                raise ValueError(f"cabling multiplicity {p} must be >= 2")
            if a < 1:
                raise ValueError(f"cabling coefficient {a} must be >= 1")
            if gcd(p, a) != 1:
                raise ValueError(f"pair ({p},{a}) is not coprime")

    @property
    def iterations(self) -> int:
        return len(self.pairs)

    def is_algebraic(self) -> bool:
        return all(
            a2 > p1 * p2 * a1
            for (p1, a1), (p2, a2) in zip(self.pairs, self.pairs[1:])
        )

    def is_super_algebraic(self) -> bool:
        # a_{i+1}/p_{i+1} > p_i a_i + 1: strict, so the boundary case
        # ceil(a_{i+1}/p_{i+1}) = p_i a_i + 1 (where a vertex below -2
        # ends up adjacent to another one) counts as algebraic-only
        return all(
            ceil_div(a2, p2) - 1 >= p1 * a1 + 1
            for (p1, a1), (p2, a2) in zip(self.pairs, self.pairs[1:])
        )

    def classify(self) -> TowerClass:
        if not self.is_algebraic():
            return TowerClass.NOT_ALGEBRAIC
        if self.is_super_algebraic():
            return TowerClass.SUPER_ALGEBRAIC
        return TowerClass.ALGEBRAIC_ONLY


def from_newton_pairs(newton_pairs) -> CableTower:
    """Cabling parameters of the singularity link with the given Newton pairs.

    a_1 = q_1 and a_{i+1} = q_{i+1} + p_{i+1} p_i a_i; with all q_i > 0 the
    result is automatically algebraic.
    """
    pairs = []
    prev_p = prev_a = None
    for p, q in newton_pairs:
        p, q = int(p), int(q)
        if p <= 0 or q <= 0:
            raise ValueError(f"Newton pair ({p},{q}) must be positive")
        if gcd(p, q) != 1:
            raise ValueError(f"Newton pair ({p},{q}) is not coprime")
        a = q if prev_p is None else q + p * prev_p * prev_a
        pairs.append((p, a))
        prev_p, prev_a = p, a
    return CableTower(tuple(pairs))


@dataclass(frozen=True)
class SurgerySpec:
    """An integral surgery coefficient n on a cable tower; N = n - p_k a_k."""

    knot: CableTower
    n: int

    def __post_init__(self):
        if self.n == 0:
            raise ValueError("surgery coefficient must be nonzero")

    @property
    def reduced_framing(self) -> int:
        p, a = self.knot.pairs[-1]
        return self.n - p * a

    def to_json_obj(self) -> dict:
        return {"pairs": [list(pair) for pair in self.knot.pairs], "n": self.n}

    @classmethod
    def from_json_obj(cls, obj) -> "SurgerySpec":
        return cls(CableTower(tuple(tuple(p) for p in obj["pairs"])), int(obj["n"]))


def corner_weight(p: int, a: int) -> int:
    """Magnitude of the corner weight of a hook; always 1.

    Evaluates 1/(p*a) + (a-p)*/a + (p*ceil(a/p) - a)*/p exactly, where x*
    denotes the inverse of x in the given modulus, and checks that the sum
    is an integer in [1, 2).  Anything else means the surrounding
    construction is broken, so it aborts loudly.
    """
    if not (2 <= p < a):
        raise ValueError(f"need 2 <= p < a, got p={p}, a={a}")
    if gcd(p, a) != 1:
        raise ValueError(f"p={p}, a={a} are not coprime")
    total = (
        Fraction(1, p * a)
        + Fraction(star_inverse(a - p, a), a)
        + Fraction(star_inverse(p * ceil_div(a, p) - a, p), p)
    )
    if total.denominator != 1 or not 1 <= total < 2:
        raise AssertionError(f"corner sum {total} for (p,a)=({p},{a}) is not an integer in [1,2)")
    return int(total)


def _require_buildable(spec: SurgerySpec):
    if not spec.knot.is_algebraic():
        raise UnsupportedTowerError(f"tower {spec.knot.pairs} is not algebraic")
    for p, a in spec.knot.pairs:
        if a <= p:
            raise UnsupportedTowerError(
                f"pair ({p},{a}) has a <= p; write the cable in its a > p form"
            )


def raw_plumbing(spec: SurgerySpec, with_roles: bool = False):
    """Plumbing tree bounding the n-surgery on an algebraic tower, unreduced.

    Hook i contributes the path

        (-c_{i,2}) - ... - (-c_{i,s_i}) - (corner, -1)

    with the leg (-d_{i,t_i}) - ... - (-d_{i,2}) hanging off the corner,
    where [c_{i,2..s_i}] expands a_i/(a_i - p_i) and [d_{i,1..t_i}]
    expands a_i/p_i.  Consecutive corners are joined through a vertex of
    weight -p_i a_i followed by a -1 (the chain the contraction later
    blows down), and the last corner carries the leaf of weight N.

    The shape is pinned by its oracles rather than trusted: |det| of the
    intersection form equals n, and reduction reproduces the closed-form
    graph on the two-iteration congruence families.
    """
    _require_buildable(spec)
    weights = {}
    edges = []
    roles = {}
    next_id = 0

    def add(weight, role, attach=None):
        nonlocal next_id
        v = next_id
        next_id += 1
        weights[v] = weight
        roles[v] = role
        if attach is not None:
            edges.append((attach, v))
        return v

    prev = None  # vertex the next hook's torso attaches to
    for i, (p, a) in enumerate(spec.knot.pairs, start=1):
        torso = expand_neg_cf(Fraction(a, a - p))
        leg = expand_neg_cf(Fraction(a, p))
        for coeff in torso:
            prev = add(-coeff, f"torso{i}", prev)
        corner = add(-corner_weight(p, a), f"corner{i}", prev)
        hang = corner
        for coeff in reversed(leg[1:]):
            hang = add(-coeff, f"leg{i}", hang)
        if i < len(spec.knot.pairs):
            bridge = add(-p * a, f"junction{i}", corner)
            prev = add(-1, f"junction{i}", bridge)
        else:
            add(spec.reduced_framing, "leaf", corner)
    tree = WeightedTree(weights, edges)
    if abs(det_exact(gram_matrix(tree))) != abs(spec.n):
        raise AssertionError(
            f"raw plumbing determinant does not match surgery coefficient {spec.n}"
        )
    return (tree, roles) if with_roles else tree


def reduced_plumbing(spec: SurgerySpec) -> WeightedTree:
    """Negative-definite plumbing of the surgery, via the calculus.

    Requires N >= 1 (N >= 2 is the classification regime; N = 1 also
    reduces fine).  N < 0 admits no negative-definite plumbing tree at
    all, and N = 0 may be a connected sum; both raise.
    """
    n_red = spec.reduced_framing
    if n_red < 0:
        raise NoNegativeDefiniteFormError(
            f"N = {n_red} < 0: no negative-definite plumbing tree exists"
        )
    if n_red == 0:
        raise ReducibleBoundaryError("N = 0: boundary may be a nontrivial connected sum")
    reduced = reduce_tree(raw_plumbing(spec))
    if any(w > -2 for w in reduced.weights.values()):
        raise AssertionError("reduction of a raw surgery graph left a weight above -2")
    return reduced


def two_iter_parameters(spec: SurgerySpec) -> dict:
    """Derived quantities of a two-iteration spec in the +-1 congruence families.

    Returns p1, a1, k1, p2, a2, k2 (= ceil(a2/p2) - 1), the congruence sign
    of a2 modulo p2 (-1 is preferred when p2 = 2, where both hold), the
    reduced framing N, and l = k2 - 1 - p1*a1 (the number of -2's left at
    the head of Torso 2; l = -1 is the algebraic-only boundary case).
    """
    if spec.knot.iterations != 2:
        raise UnsupportedTowerError("closed form needs exactly two cabling pairs")
    (p1, a1), (p2, a2) = spec.knot.pairs
    if a1 % p1 != 1 or a1 <= p1:
        raise UnsupportedTowerError(f"a1 = {a1} must be 1 mod p1 = {p1} and exceed it")
    if a2 % p2 == p2 - 1:
        sign = -1
    elif a2 % p2 == 1:
        sign = +1
    else:
        raise UnsupportedTowerError(f"a2 = {a2} must be +-1 mod p2 = {p2}")
    k2 = ceil_div(a2, p2) - 1
    return {
        "p1": p1,
        "a1": a1,
        "k1": (a1 - 1) // p1,
        "p2": p2,
        "a2": a2,
        "k2": k2,
        "sign": sign,
        "N": spec.reduced_framing,
        "l": k2 - 1 - p1 * a1,
    }


def closed_form_two_iter(spec: SurgerySpec, with_roles: bool = False):
    """Reduced centipede graph of a two-iteration surgery, without the calculus.

    Spine, left to right: Torso 1 = (k1-1 twos, -(p1+1)); Node 1; Torso 2;
    Node 2 (-2); Tail (N-1 twos).  Leg 1 = (p1-1 twos) hangs off Node 1 and
    Leg 2 off Node 2.  In the super-algebraic case Node 1 is a -2 and
    Torso 2 carries l twos followed by -3 and (p2-2) twos when a2 = -1
    (mod p2), or l twos followed by -(p2+1) when a2 = +1; Leg 2 is the
    single vertex -p2, respectively (p2-1) twos.  In the boundary case
    l = -1 the low vertex of Torso 2 merges into Node 1.  Cross-validated
    against reduced_plumbing on the whole sweep range.
    """
    par = two_iter_parameters(spec)
    if not spec.knot.is_algebraic():
        raise UnsupportedTowerError(f"tower {spec.knot.pairs} is not algebraic")
    if par["N"] < 1:
        raise NoNegativeDefiniteFormError(f"N = {par['N']} < 1 has no reduced centipede")
    p1, k1, p2, sign, n_red, l = (
        par["p1"],
        par["k1"],
        par["p2"],
        par["sign"],
        par["N"],
        par["l"],
    )
    if sign == -1:
        torso2_weights = [-2] * l + [-3] + [-2] * (p2 - 2) if l >= 0 else [-2] * (p2 - 2)
        node1_weight = -2 if l >= 0 else -3
        leg2_weights = [-p2]
    else:
        torso2_weights = [-2] * l + [-(p2 + 1)] if l >= 0 else []
        node1_weight = -2 if l >= 0 else -(p2 + 1)
        leg2_weights = [-2] * (p2 - 1)

    weights = {}
    edges = []
    roles = {}
    next_id = 0

    def add(weight, role, attach=None):
        nonlocal next_id
        v = next_id
        next_id += 1
        weights[v] = weight
        roles[v] = role
        if attach is not None:
            edges.append((attach, v))
        return v

    prev = None
    for w in [-2] * (k1 - 1) + [-(p1 + 1)]:
        prev = add(w, "torso1", prev)
    node1 = add(node1_weight, "node1", prev)
    hang = node1
    for _ in range(p1 - 1):
        hang = add(-2, "leg1", hang)
    prev = node1
    for w in torso2_weights:
        prev = add(w, "torso2", prev)
    node2 = add(-2, "node2", prev)
    hang = node2
    for w in leg2_weights:
        hang = add(w, "leg2", hang)
    prev = node2
    for _ in range(n_red - 1):
        prev = add(-2, "tail", prev)

    tree = WeightedTree(weights, edges)
    if abs(det_exact(gram_matrix(tree))) != abs(spec.n):
        raise AssertionError("closed-form determinant does not match the surgery coefficient")
    return (tree, roles) if with_roles else tree
