"""Weighted plumbing trees, their intersection forms, and calculus moves.

A plumbing tree is a finite tree with an integer weight on each vertex.  Its
intersection form is the symmetric matrix with the weights on the diagonal
and a 1 in entry (i, j) exactly when i and j are adjacent.  The moves
implemented here (blow-down of a (-1)-vertex of valence <= 2, its inverse
blow-ups, absorption of a 0-weighted valence-2 vertex, and the composite
move flattening a positive leaf next to a -1 into a chain of -2's) all
preserve the boundary 3-manifold and hence the absolute value of the
determinant of the intersection form.

Trees are immutable values: every move returns a new tree, so instances can
be shared freely between worker processes.  All linear algebra is exact
integer/rational arithmetic.
"""

import json
from fractions import Fraction


class InvalidMoveError(ValueError):
    """A calculus move was requested at a vertex where it does not apply."""


class WeightedTree:
    """Immutable finite tree with integer vertex weights.

    Vertices are identified by arbitrary integer ids.  The edge set must
    form a tree (connected and acyclic) on the vertex set; the empty tree
    is disallowed.
    """

    __slots__ = ("_weights", "_edges", "_adj")

    def __init__(self, weights, edges):
        w = dict(weights)
        if not w:
            raise ValueError("the empty tree is not a plumbing")
        for v, wt in w.items():
            if not isinstance(v, int) or not isinstance(wt, int):
                raise TypeError("vertex ids and weights must be integers")
        es = set()
        adj = {v: set() for v in w}
        for a, b in edges:
            if a not in w or b not in w:
                raise ValueError(f"edge ({a},{b}) references a missing vertex")
            if a == b:
                raise ValueError(f"loop edge at vertex {a}")
            e = (a, b) if a < b else (b, a)
            if e in es:
                raise ValueError(f"duplicate edge {e}")
            es.add(e)
            adj[a].add(b)
            adj[b].add(a)
        if len(es) != len(w) - 1:
            raise ValueError("edge count does not match a tree")
        # connectivity: |E| = |V| - 1 plus connectedness <=> tree
        seen = set()
        stack = [next(iter(w))]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(adj[v] - seen)
        if len(seen) != len(w):
            raise ValueError("graph is not connected")
        self._weights = w
        self._edges = frozenset(es)
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}

    # -- basic accessors ---------------------------------------------------

    @property
    def weights(self) -> dict:
        return dict(self._weights)

    @property
    def edges(self) -> frozenset:
        return self._edges

    def vertices(self) -> list:
        return sorted(self._weights)

    def weight(self, v: int) -> int:
        return self._weights[v]

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v]

    def valence(self, v: int) -> int:
        return len(self._adj[v])

    def __len__(self):
        return len(self._weights)

    def __eq__(self, other):
        return (
            isinstance(other, WeightedTree)
            and self._weights == other._weights
            and self._edges == other._edges
        )

    def __hash__(self):
        return hash((tuple(sorted(self._weights.items())), self._edges))

    def __repr__(self):
        ws = ", ".join(f"{v}:{w}" for v, w in sorted(self._weights.items()))
        return f"WeightedTree({{{ws}}}, {sorted(self._edges)})"

    def fresh_id(self) -> int:
        return max(self._weights) + 1

    def relabeled(self, mapping) -> "WeightedTree":
        """Copy with vertex ids renamed by the given injective mapping."""
        return WeightedTree(
            {mapping[v]: w for v, w in self._weights.items()},
            [(mapping[a], mapping[b]) for a, b in self._edges],
        )

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> str:
        obj = {
            "vertices": [{"id": v, "weight": self._weights[v]} for v in self.vertices()],
            "edges": [list(e) for e in sorted(self._edges)],
        }
        return json.dumps(obj)

    @classmethod
    def from_json(cls, text: str) -> "WeightedTree":
        obj = json.loads(text)
        return cls(
            {item["id"]: item["weight"] for item in obj["vertices"]},
            [tuple(e) for e in obj["edges"]],
        )

    def to_dot(self, roles=None) -> str:
        """GraphViz rendering with weights as labels.

        roles, if given, maps vertex ids to segment names (torso/leg/node/
        tail) which are attached as a node attribute.
        """
        lines = ["graph plumbing {", "  node [shape=circle];"]
        for v in self.vertices():
            attrs = [f'label="{self._weights[v]}"']
            if roles and v in roles:
                attrs.append(f'role="{roles[v]}"')
            lines.append(f"  {v} [{', '.join(attrs)}];")
        for a, b in sorted(self._edges):
            lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines)


# -- intersection form and exact linear algebra ----------------------------


def gram_matrix(tree: WeightedTree) -> list:
    """Intersection form of the plumbing, rows/columns in ascending vertex id."""
    order = tree.vertices()
    index = {v: i for i, v in enumerate(order)}
    n = len(order)
    m = [[0] * n for _ in range(n)]
    for i, v in enumerate(order):
        m[i][i] = tree.weight(v)
    for a, b in tree.edges:
        i, j = index[a], index[b]
        m[i][j] = 1
        m[j][i] = 1
    return m


def det_exact(matrix) -> int:
    """Exact determinant of an integer matrix by fraction-free (Bareiss) elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def leading_principal_minors(matrix) -> list:
    """Determinants of the leading k-by-k blocks, k = 1..n."""
    return [det_exact([row[: k + 1] for row in matrix[: k + 1]]) for k in range(len(matrix))]


def is_negative_definite(matrix) -> bool:
    """Sylvester test: (-1)^k times the k-th leading principal minor > 0 for all k."""
    n = len(matrix)
    for i in range(n):
        for j in range(n):
            if matrix[i][j] != matrix[j][i]:
                raise ValueError("matrix is not symmetric")
    for k, minor in enumerate(leading_principal_minors(matrix), start=1):
        if (minor if k % 2 == 0 else -minor) <= 0:
            return False
    return True


def signature(matrix) -> tuple:
    """(positive, zero, negative) inertia of a symmetric integer matrix.

    Symmetric congruence diagonalisation over the rationals; exact, so
    usable as an oracle for the index bookkeeping of the calculus moves.
    """
    n = len(matrix)
    m = [[Fraction(matrix[i][j]) for j in range(n)] for i in range(n)]
    pos = neg = zero = 0
    for k in range(n):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot is None:
                zero += 1
                continue
            if m[pivot][pivot] != 0:
                m[k], m[pivot] = m[pivot], m[k]
                for row in m:
                    row[k], row[pivot] = row[pivot], row[k]
            else:
                # both diagonals vanish but m[pivot][k] != 0: adding
                # row+column pivot into k makes m[k][k] = 2*m[pivot][k]
                for j in range(n):
                    m[k][j] += m[pivot][j]
                for i in range(n):
                    m[i][k] += m[i][pivot]
        d = m[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = m[i][k] / d
            if f == 0:
                continue
            for j in range(n):
                m[i][j] -= f * m[k][j]
            for j in range(n):
                m[j][i] -= f * m[j][k]
    return pos, zero, neg


# -- calculus moves ---------------------------------------------------------


def blow_down(tree: WeightedTree, v: int) -> WeightedTree:
    """Remove a (-1)-vertex of valence <= 2, raising its neighbours by one.

    If the vertex had two neighbours they become adjacent.  Preserves the
    boundary and |det| of the intersection form.
    """
    if tree.weight(v) != -1:
        raise InvalidMoveError(f"vertex {v} has weight {tree.weight(v)}, not -1")
    ns = sorted(tree.neighbors(v))
    if len(ns) > 2:
        raise InvalidMoveError(f"vertex {v} has valence {len(ns)} > 2")
    if len(tree) == 1:
        raise InvalidMoveError("cannot blow down the last vertex")
    weights = tree.weights
    del weights[v]
    for u in ns:
        weights[u] += 1
    edges = [e for e in tree.edges if v not in e]
    if len(ns) == 2:
        edges.append((ns[0], ns[1]))
    return WeightedTree(weights, edges)


def blow_up(tree: WeightedTree, site) -> WeightedTree:
    """Inverse of blow_down at a vertex or an edge.

    Vertex site v: attach a fresh (-1)-leaf to v and lower v's weight by 1.
    Edge site (a, b): replace the edge by a fresh (-1)-vertex adjacent to
    both ends, lowering each end's weight by 1.  A free blow-up would
    disconnect the tree and is rejected.
    """
    if site == "free":
        raise InvalidMoveError("free blow-ups are rejected: trees must stay connected")
    new = tree.fresh_id()
    weights = tree.weights
    if isinstance(site, int):
        if site not in weights:
            raise InvalidMoveError(f"no vertex {site}")
        weights[site] -= 1
        weights[new] = -1
        return WeightedTree(weights, list(tree.edges) + [(site, new)])
    a, b = site
    e = (a, b) if a < b else (b, a)
    if e not in tree.edges:
        raise InvalidMoveError(f"no edge {site}")
    weights[a] -= 1
    weights[b] -= 1
    weights[new] = -1
    edges = [x for x in tree.edges if x != e] + [(a, new), (b, new)]
    return WeightedTree(weights, edges)


def absorb_zero(tree: WeightedTree, v: int) -> WeightedTree:
    """Merge the two neighbours of a 0-weighted valence-2 vertex.

    The neighbours a, b are replaced by a single vertex (keeping the
    smaller id) of weight weight(a) + weight(b) inheriting all their other
    edges.  Drops one positive and one negative eigenvalue of the form.
    """
    if tree.weight(v) != 0:
        raise InvalidMoveError(f"vertex {v} has weight {tree.weight(v)}, not 0")
    ns = sorted(tree.neighbors(v))
    if len(ns) != 2:
        raise InvalidMoveError(f"vertex {v} has valence {len(ns)}, need 2")
    a, b = ns
    weights = tree.weights
    merged = weights[a] + weights[b]
    del weights[v], weights[b]
    weights[a] = merged
    edges = []
    for x, y in tree.edges:
        if v in (x, y):
            continue
        x = a if x == b else x
        y = a if y == b else y
        edges.append((x, y))
    return WeightedTree(weights, edges)


def flatten_positive_leaf(tree: WeightedTree, leaf: int) -> WeightedTree:
    """Trade a positive leaf next to a -1 for a chain of -2's.

    The configuration is a leaf of weight N >= 1 whose unique neighbour has
    weight -1.  The net effect of the blow-up/blow-down sequence is that
    the two vertices become a chain of N vertices of weight -2 hanging
    where the -1 was; the positive index of the form drops by exactly one
    and |det| is preserved.
    """
    n = tree.weight(leaf)
    if tree.valence(leaf) != 1 or n < 1:
        raise InvalidMoveError(f"vertex {leaf} is not a positive leaf")
    (nb,) = tree.neighbors(leaf)
    if tree.weight(nb) != -1:
        raise InvalidMoveError(f"neighbour of leaf {leaf} has weight {tree.weight(nb)}, not -1")
    weights = tree.weights
    del weights[leaf]
    weights[nb] = -2
    edges = [e for e in tree.edges if leaf not in e]
    prev = nb
    fresh = max(weights) + 1
    for _ in range(n - 1):
        weights[fresh] = -2
        edges.append((prev, fresh))
        prev = fresh
        fresh += 1
    return WeightedTree(weights, edges)


class NoNegativeDefiniteFormError(ValueError):
    """Reduction cannot reach a negative-definite normal form (the N < 0 regime)."""


def _flatten_sites(tree):
    return [
        v
        for v in tree.vertices()
        if tree.valence(v) == 1
        and tree.weight(v) >= 1
        and tree.weight(next(iter(tree.neighbors(v)))) == -1
    ]


def _blow_down_sites(tree):
    return [
        v
        for v in tree.vertices()
        if tree.weight(v) == -1
        and tree.valence(v) == 2
        and all(tree.weight(u) <= -1 for u in tree.neighbors(v))
    ]


def _absorb_sites(tree):
    return [v for v in tree.vertices() if tree.weight(v) == 0 and tree.valence(v) == 2]


def reduction_measure(tree: WeightedTree) -> int:
    """Vertex count plus total positive weight; strictly drops at each loop move."""
    return len(tree) + sum(w for w in tree.weights.values() if w > 0)


def reduce_tree(tree: WeightedTree) -> WeightedTree:
    """Apply calculus moves until none applies, deterministically.

    Strategy, repeated to a fixed point: flatten a positive leaf whose
    neighbour is a -1; else blow down a (-1)-vertex of valence exactly 2
    both of whose neighbours have negative weight; else absorb a
    0-weighted valence-2 vertex.  Within a move class the site is chosen
    by the canonical encoding of the tree rooted there (vertex id only as
    the final tiebreak), so the choice depends on the isomorphism class
    alone: sites with equal encodings are automorphic images of each other
    and yield isomorphic results, which makes the fixed point independent
    of the vertex labelling -- the normal form is a property of the graph,
    not of the order the moves happen to be found in.  On identical input
    the run is deterministic byte for byte.

    Termination: the measure reduction_measure (vertex count plus total
    positive weight) strictly decreases at every step.  Flattening a leaf
    of weight N adds N - 2 vertices but removes N of positive weight; a
    loop blow-down removes a vertex without pushing any weight above 0
    (that is what the negative-neighbour condition buys); an absorption
    removes two vertices and positive weight is subadditive under the
    merge.  The measure is asserted, not just documented.

    Blow-downs at valence 0/1 and at -1's with a non-negative neighbour
    are legal moves (see blow_down) but are left out of the loop: the
    surgery pipeline never needs them, and applying them eagerly can push
    weights positive and break the termination measure.

    Idempotent by construction.  The output for a raw surgery graph with
    N >= 1 has every weight <= -2; callers interpret other terminal shapes
    (see cabling.reduced_plumbing for the N <= 0 regimes).
    """
    t = tree
    measure = reduction_measure(t)
    while True:
        for finder, move in (
            (_flatten_sites, flatten_positive_leaf),
            (_blow_down_sites, blow_down),
            (_absorb_sites, absorb_zero),
        ):
            sites = finder(t)
            if sites:
                site = min(sites, key=lambda v: (_rooted_encoding(t, v, None), v))
                t = move(t, site)
                break
        else:
            return t
        new_measure = reduction_measure(t)
        assert new_measure < measure, "reduction measure failed to decrease"
        measure = new_measure


# -- canonical forms and isomorphism ----------------------------------------


def _rooted_encoding(tree, root, parent):
    children = sorted(
        _rooted_encoding(tree, c, root) for c in tree.neighbors(root) if c != parent
    )
    return (tree.weight(root), tuple(children))


def _centroids_bfs(tree):
    # a tree has one or two centroids; n here is small, so per-vertex BFS is fine
    best = None
    cents = []
    for v in tree.vertices():
        heaviest = 0
        for c in tree.neighbors(v):
            # size of the component of c in tree - v
            seen = {v, c}
            stack = [c]
            count = 1
            while stack:
                u = stack.pop()
                for w in tree.neighbors(u):
                    if w not in seen:
                        seen.add(w)
                        count += 1
                        stack.append(w)
            heaviest = max(heaviest, count)
        if best is None or heaviest < best:
            best = heaviest
            cents = [v]
        elif heaviest == best:
            cents.append(v)
    return cents


def canonical_form(tree: WeightedTree):
    """Label-independent encoding: equal iff trees are weight-isomorphic."""
    return min(_rooted_encoding(tree, c, None) for c in _centroids_bfs(tree))


def are_isomorphic(t1: WeightedTree, t2: WeightedTree) -> bool:
    """Weight-preserving tree isomorphism."""
    if len(t1) != len(t2):
        return False
    if sorted(t1.weights.values()) != sorted(t2.weights.values()):
        return False
    return canonical_form(t1) == canonical_form(t2)
