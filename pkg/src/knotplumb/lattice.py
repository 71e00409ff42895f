"""Exhaustive lattice-embedding search into (Z^r, -Id).

A lattice embedding of a negative-definite Gram matrix G assigns to each
index i a vector v_i in Z^r with <v_i, v_j>_{-Id} = -(v_i . v_j) = G[i][j].
Existence of such an embedding at r = rank(G) is necessary for the
plumbed 4-manifold's boundary to bound a rational homology 4-ball, so a
completed search that finds nothing is a proof of obstruction.

The search is complete backtracking over candidate vectors of the right
norm, with symmetry breaking: after placing some vectors, coordinates of
the target whose placed columns agree are interchangeable (and coordinates
nobody has touched can also flip sign), so candidates are generated only
in canonical form with respect to that stabilizer subgroup -- entries
sorted within each column class, non-negative on untouched columns.  Any
embedding can be moved into this form step by step by self-isometries of
(Z^r, -Id) fixing the earlier vectors, so the pruning loses nothing; a
"none" answer is exhaustive.  A node budget turns an over-long search into
an explicit indeterminate outcome, never a wrong answer.

All arithmetic is on plain integers.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import isqrt


class SearchStatus(Enum):
    FOUND = "found"
    NONE = "none"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class SearchResult:
    status: SearchStatus
    witness: tuple | None
    nodes: int

    def __bool__(self):
        return self.status is SearchStatus.FOUND


class BudgetExceeded(Exception):
    pass


def verify_embedding(gram, vectors) -> bool:
    """Exact check that -(v_i . v_j) reproduces the Gram matrix entrywise."""
    n = len(gram)
    if len(vectors) != n:
        raise ValueError(f"{len(vectors)} vectors for a rank-{n} Gram matrix")
    r = len(vectors[0]) if vectors else 0
    if any(len(v) != r for v in vectors):
        raise ValueError("vectors of mixed lengths")
    for i in range(n):
        for j in range(i, n):
            dot = sum(a * b for a, b in zip(vectors[i], vectors[j]))
            if -dot != gram[i][j]:
                return False
    return True


@lru_cache(maxsize=None)
def square_decompositions(m: int) -> tuple:
    """All multisets of positive integers whose squares sum to m, nonincreasing."""
    if m < 1:
        raise ValueError("need a positive integer")

    def rec(remaining, cap):
        if remaining == 0:
            yield ()
            return
        for k in range(min(cap, isqrt(remaining)), 0, -1):
            for rest in rec(remaining - k * k, k):
                yield (k,) + rest

    return tuple(rec(m, isqrt(m)))


def _adjacency(gram):
    n = len(gram)
    return [
        frozenset(j for j in range(n) if j != i and gram[i][j] != 0)
        for i in range(n)
    ]


def _eccentricities(adj):
    # BFS per vertex; unreachable vertices (other components) are ignored
    n = len(adj)
    ecc = [0] * n
    for s in range(n):
        dist = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        ecc[s] = max(dist.values())
    return ecc


def vertex_order(gram, strategy: str = "weight") -> list:
    """Order in which the search places vertices.

    "weight": highest |diagonal| first, ties broken by centrality (small
    eccentricity in the adjacency graph) and then index.  Large norms have
    few square decompositions, so failures surface early.
    "greedy": same start, but each subsequent vertex maximises the number
    of already-placed neighbours before applying the weight/centrality key,
    which keeps chains connected.  Any complete order is correct; this
    knob only affects speed.
    "input": the given order.
    """
    n = len(gram)
    if strategy == "input":
        return list(range(n))
    adj = _adjacency(gram)
    ecc = _eccentricities(adj)
    key = lambda i: (-abs(gram[i][i]), ecc[i], i)
    if strategy == "weight":
        return sorted(range(n), key=key)
    if strategy == "greedy":
        order = [min(range(n), key=key)]
        placed = set(order)
        while len(order) < n:
            best = min(
                (i for i in range(n) if i not in placed),
                key=lambda i: (-len(adj[i] & placed),) + key(i),
            )
            order.append(best)
            placed.add(best)
        return order
    raise ValueError(f"unknown ordering strategy {strategy!r}")


def _sorted_tuples(size, budget, lo, hi):
    """Nonincreasing integer tuples of the given size with entries in
    [lo, hi] and sum of squares <= budget; yields (tuple, sum, sumsq)."""
    if size == 0:
        yield (), 0, 0
        return
    for x in range(hi, lo - 1, -1):
        sq = x * x
        if sq > budget:
            continue
        for rest, s, q in _sorted_tuples(size - 1, budget - sq, lo, min(hi, x)):
            yield (x,) + rest, s + x, q + sq


class _Searcher:
    def __init__(self, gram, rank, order, budget, collect=False):
        self.gram = gram
        self.n = len(gram)
        self.rank = rank
        self.order = order
        self.budget = budget
        self.collect = collect
        self.nodes = 0
        self.solutions = []
        self.witness = None

    def run(self):
        self._extend([])
        return self.solutions if self.collect else self.witness

    def _tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded

    def _extend(self, placed):
        depth = len(placed)
        if depth == self.n:
            rows = [None] * self.n
            for slot, vec in zip(self.order, placed):
                rows[slot] = vec
            if self.collect:
                self.solutions.append(tuple(rows))
                return False
            self.witness = tuple(rows)
            return True
        vertex = self.order[depth]
        norm = -self.gram[vertex][vertex]
        targets = [-self.gram[vertex][self.order[j]] for j in range(depth)]
        for vec in self._candidates(placed, norm, targets):
            self._tick()
            if self._extend(placed + [vec]):
                return True
        return False

    def _candidates(self, placed, norm, targets):
        # group target coordinates by their column of placed entries
        classes = {}
        for k in range(self.rank):
            sig = tuple(v[k] for v in placed)
            classes.setdefault(sig, []).append(k)
        items = sorted(classes.items(), key=lambda kv: kv[0], reverse=True)
        zero_sig = tuple([0] * len(placed))
        # untouched columns last: they take whatever norm is left over
        items.sort(key=lambda kv: kv[0] == zero_sig)
        sigs = [sig for sig, _ in items]
        coords = [cs for _, cs in items]
        sizes = [len(cs) for cs in coords]
        cap = isqrt(norm)
        m = len(targets)
        # suffix bound on how much each remaining class can still move a dot
        # product: |sum of entries| <= sqrt(size * budget) (Cauchy-Schwarz)
        out = []

        def rec(idx, budget, dots, chosen):
            if idx == len(sigs):
                if budget == 0 and all(d == t for d, t in zip(dots, targets)):
                    vec = [0] * self.rank
                    for cs, tup in zip(coords, chosen):
                        for k, x in zip(cs, tup):
                            vec[k] = x
                    out.append(tuple(vec))
                return
            sig = sigs[idx]
            size = sizes[idx]
            is_zero = sig == zero_sig
            lo = 0 if is_zero else -cap
            for tup, s, q in _sorted_tuples(size, budget, lo, cap):
                if is_zero and q != budget:
                    continue  # untouched columns must exactly finish the norm
                new_dots = [d + sig[j] * s for j, d in enumerate(dots)]
                feasible = True
                rem_budget = budget - q
                for j in range(m):
                    slack = sum(
                        abs(sigs[t][j]) * isqrt(sizes[t] * rem_budget)
                        for t in range(idx + 1, len(sigs))
                    )
                    if abs(targets[j] - new_dots[j]) > slack:
                        feasible = False
                        break
                if feasible:
                    rec(idx + 1, rem_budget, new_dots, chosen + [tup])

        rec(0, norm, [0] * m, [])
        return out


def find_embedding(gram, rank=None, budget=None, order="weight") -> SearchResult:
    """Decide embeddability of a negative-definite Gram matrix into (Z^r, -Id).

    Returns FOUND with a verified witness, NONE after exhausting the
    (symmetry-pruned but complete) search space, or INDETERMINATE when the
    node budget runs out.  rank defaults to the dimension of the matrix,
    the rank relevant to the rational-homology-ball obstruction.
    """
    _check_gram(gram)
    r = len(gram) if rank is None else int(rank)
    if r < 1:
        raise ValueError("rank must be positive")
    searcher = _Searcher(gram, r, vertex_order(gram, order), budget)
    try:
        witness = searcher.run()
    except BudgetExceeded:
        return SearchResult(SearchStatus.INDETERMINATE, None, searcher.nodes)
    if witness is None:
        return SearchResult(SearchStatus.NONE, None, searcher.nodes)
    assert verify_embedding(gram, witness)
    return SearchResult(SearchStatus.FOUND, witness, searcher.nodes)


def _check_gram(gram):
    from .plumbing import is_negative_definite

    n = len(gram)
    for i in range(n):
        if len(gram[i]) != n:
            raise ValueError("Gram matrix is not square")
    if not is_negative_definite(gram):
        # embeddings into -Id exist only for negative-definite forms, but a
        # caller handing us anything else has a bug upstream
        raise ValueError("Gram matrix is not negative definite")


def matrix_canonical_form(vectors) -> tuple:
    """Canonical representative under self-isometries of the target.

    Self-isometries of (Z^r, -Id) are signed permutations of coordinates,
    acting on the embedding matrix as column sign flips and column swaps:
    flip each column so its first nonzero entry is positive, then sort
    columns.  Rows (the vertices) stay put.
    """
    if not vectors:
        return ()
    cols = [tuple(v[k] for v in vectors) for k in range(len(vectors[0]))]
    normed = []
    for col in cols:
        lead = next((x for x in col if x != 0), 0)
        normed.append(tuple(-x for x in col) if lead < 0 else col)
    normed.sort(reverse=True)
    return tuple(tuple(col[i] for col in normed) for i in range(len(vectors)))


def is_locally_minimal(vectors) -> bool:
    """Every coordinate of the target is hit by some vector."""
    if not vectors:
        return True
    return all(any(v[k] != 0 for v in vectors) for k in range(len(vectors[0])))


def enumerate_embeddings(gram, rank=None, locally_minimal_only=False, order="weight") -> list:
    """All embeddings up to self-isometry of the target, canonically presented.

    Intended for small instances (the search collects every completion).
    The stepwise pruning already quotients by most of the symmetry; the
    final canonicalisation removes what it cannot see (columns that are
    negatives of each other), so the returned list has one entry per
    isometry class.
    """
    _check_gram(gram)
    r = len(gram) if rank is None else int(rank)
    searcher = _Searcher(gram, r, vertex_order(gram, order), None, collect=True)
    seen = {}
    for sol in searcher.run():
        if locally_minimal_only and not is_locally_minimal(sol):
            continue
        seen[matrix_canonical_form(sol)] = True
    return sorted(seen)


# -- presentation ------------------------------------------------------------


def render_vector(vec, symbol="e") -> str:
    """Human-readable form such as 'e1-e2+2e5'; the zero vector renders as '0'."""
    parts = []
    for k, x in enumerate(vec, start=1):
        if x == 0:
            continue
        mag = "" if abs(x) == 1 else str(abs(x))
        parts.append(("-" if x < 0 else ("+" if parts else "")) + mag + f"{symbol}{k}")
    return "".join(parts) if parts else "0"


def embedding_to_json_obj(vectors) -> dict:
    return {"rank": len(vectors[0]) if vectors else 0, "vectors": [list(v) for v in vectors]}


def embedding_from_json_obj(obj) -> tuple:
    rank = obj["rank"]
    vectors = tuple(tuple(int(x) for x in v) for v in obj["vectors"])
    if any(len(v) != rank for v in vectors):
        raise ValueError("vector length disagrees with declared rank")
    return vectors
