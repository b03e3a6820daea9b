"""Graphs, Cartan matrices, simply laced Dynkin classification and root combinatorics.

Weights are plain integer tuples indexed by the graph's vertex order.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from typing import Optional

from .errors import DimensionMismatch, GraphError, NotAffineType, NotFiniteType
from .exactalg import FieldSpec, Matrix, kernel_basis, rank, solve_in_span

Weight = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class SimpleGraph:
    vertices: tuple
    edges: frozenset  # of frozenset({a, b})
    _index: dict = dc_field(default=None, compare=False, hash=False, repr=False)
    _nbrs: dict = dc_field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex labels")
        if not verts:
            raise GraphError("graph has no vertices")
        index = {v: i for i, v in enumerate(verts)}
        nbrs = {v: set() for v in verts}
        for e in self.edges:
            if len(e) != 2:
                raise GraphError(f"loop or malformed edge {sorted(e)}")
            a, b = sorted(e)
            if a not in index or b not in index:
                raise GraphError(f"edge {a}-{b} uses an unknown vertex")
            nbrs[a].add(b)
            nbrs[b].add(a)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_nbrs", {v: frozenset(s) for v, s in nbrs.items()})
        if not self._connected():
            raise GraphError("graph must be connected")

    @classmethod
    def from_edges(cls, vertices, edges) -> "SimpleGraph":
        seen = set()
        for a, b in edges:
            a, b = str(a), str(b)
            if a == b:
                raise GraphError(f"loop at {a}")
            e = frozenset((a, b))
            if e in seen:
                raise GraphError(f"duplicate edge {a}-{b}")
            seen.add(e)
        return cls(tuple(str(v) for v in vertices), frozenset(seen))

    @classmethod
    def from_json(cls, text: str) -> "SimpleGraph":
        try:
            doc = json.loads(text)
            verts = doc["vertices"]
            edges = doc["edges"]
        except (ValueError, KeyError, TypeError) as exc:
            raise GraphError(f"bad graph document: {exc}") from None
        if any(not isinstance(e, (list, tuple)) or len(e) != 2 for e in edges):
            raise GraphError("edges must be pairs")
        return cls.from_edges(verts, edges)

    def to_json(self) -> str:
        edges = sorted(sorted(e, key=self.index) for e in self.edges)
        return json.dumps({"vertices": list(self.vertices), "edges": edges})

    def _connected(self) -> bool:
        start = self.vertices[0]
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in self._nbrs[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v) -> int:
        return self._index[v]

    def neighbours(self, v) -> frozenset:
        return self._nbrs[v]

    def adjacent(self, a, b) -> bool:
        return b in self._nbrs[a]

    def degree(self, v) -> int:
        return len(self._nbrs[v])

    def sorted_edges(self) -> list:
        """Edges as ordered pairs (earlier vertex first), in vertex order."""
        out = [tuple(sorted(e, key=self.index)) for e in self.edges]
        return sorted(out, key=lambda e: (self.index(e[0]), self.index(e[1])))

    def induced(self, keep) -> "SimpleGraph":
        keep = [v for v in self.vertices if v in set(keep)]
        ks = set(keep)
        return SimpleGraph(tuple(keep), frozenset(e for e in self.edges if e <= ks))

    def relabel(self, mapping: dict, order=None) -> "SimpleGraph":
        verts = [mapping[v] for v in self.vertices] if order is None else list(order)
        return SimpleGraph(tuple(verts), frozenset(frozenset(mapping[v] for v in e) for e in self.edges))

    def simple_root(self, v) -> Weight:
        w = [0] * self.n
        w[self.index(v)] = 1
        return tuple(w)

    def edge_weight(self, a, b) -> Weight:
        w = [0] * self.n
        w[self.index(a)] += 1
        w[self.index(b)] += 1
        return tuple(w)


def cartan_matrix(g: SimpleGraph) -> Matrix:
    rows = []
    for a in g.vertices:
        rows.append([2 if a == b else (-1 if g.adjacent(a, b) else 0) for b in g.vertices])
    return Matrix.from_rows(rows, FieldSpec.rationals())


def cartan_int(g: SimpleGraph) -> list:
    return [[2 if a == b else (-1 if g.adjacent(a, b) else 0) for b in g.vertices] for a in g.vertices]


def bilinear(g: SimpleGraph, a: Weight, b: Weight) -> int:
    if len(a) != g.n or len(b) != g.n:
        raise DimensionMismatch("weight length differs from vertex count")
    s = 0
    for i, ai in enumerate(a):
        if not ai:
            continue
        s += 2 * ai * b[i]
        for w in g.neighbours(g.vertices[i]):
            s -= ai * b[g.index(w)]
    return s


def pair_simple(g: SimpleGraph, x, b: Weight) -> int:
    """<alpha_x, b>."""
    i = g.index(x)
    s = 2 * b[i]
    for w in g.neighbours(x):
        s -= b[g.index(w)]
    return s


def height(w: Weight) -> int:
    return sum(w)


def wadd(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def wsub(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


# ---------------------------------------------------------------- classification

@dataclass(frozen=True)
class DynkinClass:
    family: str  # "A", "D", "E" or "Other"
    rank: Optional[int] = None
    affine: bool = False
    distinguished_vertex: Optional[str] = None

    @property
    def tag(self) -> str:
        if self.family == "Other":
            return "Other"
        return f"{'Affine' if self.affine else 'Finite'}{self.family}({self.rank})"

    @property
    def is_finite(self) -> bool:
        return self.family != "Other" and not self.affine

    @property
    def is_affine(self) -> bool:
        return self.family != "Other" and self.affine

    @property
    def is_dynkin(self) -> bool:
        return self.family != "Other"

    def __str__(self):
        return self.tag


def _arms(g: SimpleGraph, centre) -> list:
    """Lengths of the paths hanging off ``centre`` (only valid for trees)."""
    out = []
    for start in g.neighbours(centre):
        length, prev, cur = 1, centre, start
        while True:
            nxt = [w for w in g.neighbours(cur) if w != prev]
            if len(nxt) != 1:
                if nxt:
                    return []  # another branch point on this arm
                break
            prev, cur = cur, nxt[0]
            length += 1
        out.append(length)
    return sorted(out)


def _shape(g: SimpleGraph):
    n, m = g.n, len(g.edges)
    degs = [g.degree(v) for v in g.vertices]
    if m == n and n >= 3 and all(d == 2 for d in degs):
        return ("A", n - 1, True)
    if m != n - 1:
        return None
    branch = [v for v in g.vertices if g.degree(v) >= 3]
    if not branch:
        return ("A", n, False)
    if len(branch) == 1:
        c = branch[0]
        arms = _arms(g, c)
        if g.degree(c) == 4:
            return ("D", 4, True) if arms == [1, 1, 1, 1] else None
        if g.degree(c) != 3 or not arms:
            return None
        finite = {(1, 2, 2): ("E", 6), (1, 2, 3): ("E", 7), (1, 2, 4): ("E", 8)}
        affine = {(2, 2, 2): ("E", 6), (1, 3, 3): ("E", 7), (1, 2, 5): ("E", 8)}
        a = tuple(arms)
        if a[0] == 1 and a[1] == 1:
            return ("D", n, False)
        if a in finite:
            return finite[a] + (False,)
        if a in affine:
            return affine[a] + (True,)
        return None
    if len(branch) == 2 and all(g.degree(c) == 3 for c in branch):
        for c in branch:
            if sum(1 for w in g.neighbours(c) if g.degree(w) == 1) != 2:
                return None
        if all(d <= 3 for d in degs):
            return ("D", n - 1, True)
    return None


def classify(g: SimpleGraph) -> DynkinClass:
    shape = _shape(g)
    if shape is None:
        return DynkinClass("Other")
    family, r, affine = shape
    if not affine:
        return DynkinClass(family, r, False)
    delta = _primitive_kernel(g)
    x0 = next(v for v in g.vertices if delta[g.index(v)] == 1)
    return DynkinClass(family, r, True, x0)


def _primitive_kernel(g: SimpleGraph) -> Weight:
    ker = kernel_basis(cartan_matrix(g))
    if len(ker) != 1:
        raise NotAffineType(f"Cartan matrix kernel has dimension {len(ker)}")
    v = [Fraction(x) for x in ker[0]]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g_ = 0
    for x in ints:
        g_ = gcd(g_, abs(x))
    ints = [x // g_ for x in ints]
    if sum(ints) < 0:
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise NotAffineType("kernel vector is not positive")
    return tuple(ints)


def _require_finite(g: SimpleGraph) -> DynkinClass:
    c = classify(g)
    if not c.is_finite:
        raise NotFiniteType(f"{c.tag} is not of finite type")
    return c


def _require_affine(g: SimpleGraph) -> DynkinClass:
    c = classify(g)
    if not c.is_affine:
        raise NotAffineType(f"{c.tag} is not of affine type")
    return c


# ---------------------------------------------------------------- roots

def root_closure(g: SimpleGraph) -> list:
    """Close the simple roots under beta -> beta + alpha_x whenever <beta, alpha_x> < 0."""
    found = {g.simple_root(v) for v in g.vertices}
    frontier = list(found)
    while frontier:
        nxt = []
        for b in frontier:
            for x in g.vertices:
                if pair_simple(g, x, b) < 0:
                    c = wadd(b, g.simple_root(x))
                    if c not in found:
                        found.add(c)
                        nxt.append(c)
        frontier = nxt
    return sorted(found, key=lambda w: (height(w), w))


def positive_roots(g: SimpleGraph) -> list:
    """Positive roots of a finite-type diagram, sorted by (height, weight)."""
    _require_finite(g)
    return root_closure(g)


def highest_root(g: SimpleGraph) -> Weight:
    return max(positive_roots(g), key=lambda w: (height(w), w))


def is_positive_root(g: SimpleGraph, w: Weight, dclass: Optional[DynkinClass] = None) -> bool:
    """Membership in the positive roots of the Kac-Moody root system (Dynkin types only).

    Simply laced finite/affine: the real roots are exactly the norm-2 lattice
    vectors and the imaginary positive roots are the multiples of delta.
    """
    dclass = dclass or classify(g)
    if not dclass.is_dynkin:
        raise ValueError("root membership is only decided for Dynkin diagrams")
    if any(x < 0 for x in w) or not any(w):
        return False
    q = bilinear(g, w, w)
    if q == 2:
        return True
    if dclass.is_affine and q == 0:
        return True  # the radical of the affine form is Z*delta
    return False


def delta_and_coxeter(g: SimpleGraph):
    _require_affine(g)
    d = _primitive_kernel(g)
    return d, height(d)


@dataclass(frozen=True)
class AffineData:
    x0: str
    delta: Weight
    coxeter: int
    finite_graph: SimpleGraph
    theta: Weight  # embedded in Z^Pi, zero at x0
    theta_set: frozenset
    finite_positive: tuple  # embedded in Z^Pi


def _embed(g: SimpleGraph, g0: SimpleGraph, w0: Weight) -> Weight:
    out = [0] * g.n
    for v, c in zip(g0.vertices, w0):
        out[g.index(v)] = c
    return tuple(out)


def affine_data(g: SimpleGraph) -> AffineData:
    c = _require_affine(g)
    x0 = c.distinguished_vertex
    delta, h = delta_and_coxeter(g)
    g0 = g.induced([v for v in g.vertices if v != x0])
    pos = [_embed(g, g0, b) for b in positive_roots(g0)]
    top = max(pos, key=lambda w: (height(w), w))
    theta = tuple(-x for x in top)
    big = set(pos)
    big.update(wsub(delta, b) for b in pos)
    big.add(delta)
    return AffineData(x0, delta, h, g0, theta, frozenset(big), tuple(pos))


def theta_weights(g: SimpleGraph):
    """``(theta, Theta)``: lowest root of the finite part and the weight set of u."""
    a = affine_data(g)
    return a.theta, set(a.theta_set)


def is_very_real(g: SimpleGraph, beta: Weight) -> Optional[tuple]:
    """Witness word (x_d, ..., x_1) with every partial pairing equal to -1, or None."""
    if any(x < 0 for x in beta) or not any(beta):
        return None
    if height(beta) > 1 and bilinear(g, beta, beta) != 2:
        return None  # every very-real sum has norm 2
    dead = set()

    def search(s: Weight, word: list):
        if s == beta:
            return list(word)
        if s in dead:
            return None
        for x in g.vertices:
            i = g.index(x)
            if s[i] < beta[i] and pair_simple(g, x, s) == -1:
                word.append(x)
                found = search(wadd(s, g.simple_root(x)), word)
                if found is not None:
                    return found
                word.pop()
        dead.add(s)
        return None

    for x in g.vertices:
        if beta[g.index(x)]:
            found = search(g.simple_root(x), [x])
            if found is not None:
                return tuple(reversed(found))
    return None


@dataclass(frozen=True)
class CharacterReport:
    case: int
    edge_rank: int
    full_rank: int
    n_edges: int
    delta_coefficients: Optional[dict]  # edge pair -> Fraction, when delta is in the span

    def as_dict(self) -> dict:
        coeffs = None
        if self.delta_coefficients is not None:
            coeffs = {f"{a}-{b}": str(c) for (a, b), c in self.delta_coefficients.items()}
        return {
            "case": self.case,
            "edge_rank": self.edge_rank,
            "full_rank": self.full_rank,
            "edges": self.n_edges,
            "delta_in_edge_span": coeffs,
        }


def character_rank_analysis(g: SimpleGraph) -> CharacterReport:
    delta, _ = delta_and_coxeter(g)
    edges = g.sorted_edges()
    vecs = [g.edge_weight(a, b) for a, b in edges]
    Q = FieldSpec.rationals()
    er = rank(Matrix.from_rows(vecs, Q, cols=g.n))
    fr = rank(Matrix.from_rows(vecs + [delta], Q, cols=g.n))
    coeffs = solve_in_span(vecs, delta, Q)
    coeff_map = None if coeffs is None else {e: c for e, c in zip(edges, coeffs)}
    if er < len(edges):
        case = 3
    elif fr == len(edges) + 1:
        case = 1
    else:
        case = 2
    return CharacterReport(case, er, fr, len(edges), coeff_map)


# ---------------------------------------------------------------- named diagrams

def _path(labels):
    return [(labels[i], labels[i + 1]) for i in range(len(labels) - 1)]


def _finite_edges(family: str, n: int):
    lab = [str(i) for i in range(1, n + 1)]
    if family == "A":
        return lab, _path(lab)
    if family == "D":
        if n < 4:
            raise GraphError("D_n needs n >= 4")
        return lab, _path(lab[: n - 1]) + [(str(n - 2), str(n))]
    if family == "E":
        if n not in (6, 7, 8):
            raise GraphError("E_n needs n in 6..8")
        chain = ["1", "3", "4"] + [str(i) for i in range(5, n + 1)]
        return lab, _path(chain) + [("2", "4")]
    raise GraphError(f"unknown family {family}")


_AFFINE_HOOK = {"D": "2", "E6": "2", "E7": "1", "E8": "8"}


def named_diagram(name: str) -> SimpleGraph:
    """Built-in diagrams: ``A3``, ``D5``, ``E6``; a ``~`` suffix gives the affine extension."""
    m = re.fullmatch(r"\s*([ADE])(\d+)(~?)\s*", name)
    if not m:
        aliases = {"triangle": "A2~", "4-cycle": "A3~", "square": "A3~", "edge": "A2"}
        if name in aliases:
            return named_diagram(aliases[name])
        raise GraphError(f"unknown diagram name {name!r}")
    family, n, tilde = m.group(1), int(m.group(2)), bool(m.group(3))
    if n < 1:
        raise GraphError("rank must be positive")
    if not tilde:
        verts, edges = _finite_edges(family, n)
        return SimpleGraph.from_edges(verts, edges)
    if family == "A":
        if n < 2:
            raise GraphError("A1~ needs a double edge")
        verts = [str(i) for i in range(n + 1)]
        return SimpleGraph.from_edges(verts, _path(verts) + [(str(n), "0")])
    verts, edges = _finite_edges(family, n)
    hook = _AFFINE_HOOK["D"] if family == "D" else _AFFINE_HOOK[f"E{n}"]
    return SimpleGraph.from_edges(["0"] + verts, edges + [("0", hook)])
