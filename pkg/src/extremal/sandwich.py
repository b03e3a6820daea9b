"""The sandwich algebra L(0) of a connected graph, built degree by degree.

Degree ``d`` is spanned by symbols ``(x, j)`` standing for ``[x, b_j]`` with
``b_j`` a basis element of degree ``d - 1``.  For each weight the symbols are
cut down by the relation rows

* swap: ``[b_i, b_j] + [b_j, b_i]`` for basis elements of complementary weight;
* commute: ``[x,y]`` for ``x`` not adjacent to ``y`` (degree 2 only);
* Jacobi: ``[x,[y,c]] - [y,[x,c]] - [[x,y],c]`` for vertices ``x < y`` and basis ``c``;
* sandwich: ``[x,[x,c]]`` for basis ``c``.

Brackets ``[b_i, v]`` with ``b_i = [z, b']`` are unfolded as
``[z,[b',v]] - [b',[z,v]]``.  That unfolding already builds in the Jacobi
identity along the chosen bracketing of ``b_i``, so the Jacobi rows alone are
tautological whenever ``[x,y]`` is the basis word ``x y`` itself; the swap
rows carry the remaining information.

The non-pivot symbols after row reduction become the basis of that weight.
The row reduction (matrix, reduced form, transform) is kept per weight so that
the same rows can later be re-evaluated with non-zero parameters
(see :mod:`extremal.lfspace`).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

from .diagram import SimpleGraph, classify, is_positive_root, pair_simple, DynkinClass
from .errors import DegreeCapExceeded, NotDynkin, UnknownBasisElement
from .exactalg import FieldSpec, axpy, rref_rows

DEFAULT_DEGREE_CAP = 64


@dataclass(frozen=True)
class MonomialWord:
    """Left-normed bracket ``x_d ... x_1``; ``letters[0]`` is the outermost ``x_d``."""

    letters: tuple

    @property
    def degree(self) -> int:
        return len(self.letters)

    def weight(self, g: SimpleGraph) -> tuple:
        w = [0] * g.n
        for x in self.letters:
            w[g.index(x)] += 1
        return tuple(w)

    @classmethod
    def parse(cls, text: str) -> "MonomialWord":
        return cls(tuple(text.split(".")))

    def __str__(self):
        return ".".join(self.letters)


@dataclass(frozen=True)
class BasisElement:
    index: int
    word: MonomialWord
    weight: tuple
    head: str
    parent: Optional[int]  # b = [head, b_parent]; None in degree 1

    @property
    def degree(self) -> int:
        return self.word.degree


@dataclass(frozen=True)
class Relation:
    kind: str  # "swap", "commute", "jacobi", "sandwich"
    x: Optional[str] = None
    y: Optional[str] = None
    c: Optional[int] = None  # basis index of the inner element
    other: Optional[int] = None  # second basis index of a swap row

    def describe(self, basis) -> str:
        inner = "" if self.c is None else str(basis[self.c].word)
        if self.kind == "jacobi":
            return f"jacobi({self.x},{self.y};{inner})"
        if self.kind == "sandwich":
            return f"sandwich({self.x};{inner})"
        if self.kind == "swap":
            return f"swap({basis[self.c].word};{basis[self.other].word})"
        return f"{self.kind}({self.x},{self.y})"


@dataclass
class WeightLayer:
    """Row reduction of the relation system in one weight."""

    weight: tuple
    degree: int
    symbols: list  # (x, j) sorted by (vertex index, j)
    relations: list
    matrix: list  # relation rows over the symbols, in L(0)
    reduced: list
    pivots: list
    transform: list
    basis_of: dict  # symbol column -> basis index, for non-pivot columns
    pruned: frozenset = frozenset()  # columns dropped by the vanishing lemmas


# ---------------------------------------------------------------- vanishing lemmas

def vanishes_at_least_two(g: SimpleGraph, letters: tuple) -> bool:
    """Two consecutive occurrences of a letter with at most one neighbour of it in between."""
    last = {}
    for pos, x in enumerate(letters):
        if x in last:
            between = letters[last[x] + 1:pos]
            if sum(1 for y in between if g.adjacent(x, y)) <= 1:
                return True
        last[x] = pos
    return False


def vanishes_reduce(g: SimpleGraph, letters: tuple) -> bool:
    """``<alpha_{x_d}, weight(x_{d-1} ... x_1)> >= 0`` with ``d >= 2``."""
    if len(letters) < 2:
        return False
    w = [0] * g.n
    for y in letters[1:]:
        w[g.index(y)] += 1
    return pair_simple(g, letters[0], tuple(w)) >= 0


def word_vanishes(g: SimpleGraph, letters: tuple) -> bool:
    return vanishes_reduce(g, letters) or vanishes_at_least_two(g, letters)


# ---------------------------------------------------------------- evaluation

class Evaluator:
    """Brackets on the span of the basis, given the generator action ``rho``.

    ``rho[(x, j)]`` is the sparse vector of ``[x, b_j]``.  While degree
    ``d`` is under construction, ``[x, b_j]`` for ``deg b_j = d - 1`` is left
    as the formal symbol key ``(x, j)``.
    """

    def __init__(self, basis: list, rho: dict, one):
        self.basis = basis
        self.rho = rho
        self.one = one
        self.degree = None  # degree under construction; None once complete
        self.memo = {}
        self.front = {}

    def start_degree(self, d: int):
        self.degree = d
        self.front = {}

    def finish(self):
        self.degree = None
        self.front = {}

    def act(self, x, vec: dict) -> dict:
        out = {}
        top = None if self.degree is None else self.degree - 1
        for j, c in vec.items():
            if self.basis[j].degree == top:
                axpy(out, {(x, j): c})
            else:
                axpy(out, self.rho[(x, j)], c)
        return out

    def pair(self, i: int, j: int) -> dict:
        """``[b_i, b_j]``."""
        total = self.basis[i].degree + self.basis[j].degree
        store = self.memo
        if self.degree is not None:
            if total == self.degree:
                store = self.front
            elif total > self.degree:
                raise RuntimeError("bracket above the degree under construction")
        hit = store.get((i, j))
        if hit is not None:
            return hit
        b = self.basis[i]
        if b.parent is None:
            res = self.act(b.head, {j: self.one})
        else:
            z, p = b.head, b.parent
            res = self.act(z, self.pair(p, j))
            axpy(res, self.bracket(p, self.act(z, {j: self.one})), -1)
        store[(i, j)] = res
        return res

    def bracket(self, i: int, vec: dict) -> dict:
        out = {}
        for j, c in vec.items():
            axpy(out, self.pair(i, j), c)
        return out

    def bracket_vec(self, u: dict, v: dict) -> dict:
        out = {}
        for i, c in u.items():
            axpy(out, self.bracket(i, v), c)
        return out

    def evaluate(self, rel: Relation, gen_index: dict) -> dict:
        one = self.one
        if rel.kind == "swap":
            out = dict(self.pair(rel.c, rel.other))
            return axpy(out, self.pair(rel.other, rel.c))
        if rel.kind == "commute":
            return {(rel.x, gen_index[rel.y]): one}
        c = {rel.c: one}
        if rel.kind == "sandwich":
            return self.act(rel.x, self.act(rel.x, c))
        x, y = rel.x, rel.y
        out = self.act(x, self.act(y, c))
        axpy(out, self.act(y, self.act(x, c)), -1)
        axpy(out, self.bracket_vec(self.act(x, {gen_index[y]: one}), c), -1)
        return out


def split(vec: dict):
    """Separate symbol keys from basis-index keys."""
    sym, known = {}, {}
    for k, v in vec.items():
        (sym if isinstance(k, tuple) else known)[k] = v
    return sym, known


# ---------------------------------------------------------------- the algebra

@dataclass
class SandwichAlgebra:
    graph: SimpleGraph
    field: FieldSpec
    basis: list
    by_weight: dict  # weight -> list of basis indices
    expansion: dict  # (x, j) -> sparse vector: [x, b_j] in L(0)
    certificates: dict  # eliminated (x, j) -> tuple of (Relation, coefficient)
    layers: list
    certified: bool
    degree_cap: int
    _eval: Evaluator = dc_field(default=None, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def degrees(self) -> int:
        return max((b.degree for b in self.basis), default=0)

    @property
    def gen_index(self) -> dict:
        return {b.head: b.index for b in self.basis if b.parent is None}

    def multiplicities(self) -> dict:
        return {w: len(ix) for w, ix in self.by_weight.items() if ix}

    def basis_words(self) -> list:
        return [b.word for b in self.basis]

    def index_of(self, word) -> int:
        if isinstance(word, str):
            word = MonomialWord.parse(word)
        elif isinstance(word, tuple):
            word = MonomialWord(word)
        for b in self.basis:
            if b.word == word:
                return b.index
        raise UnknownBasisElement(f"{word} is not a basis word")

    def unit(self, i: int) -> dict:
        return {i: self.field.one}

    def pair(self, i: int, j: int) -> dict:
        return self._eval.pair(i, j)

    def report(self) -> dict:
        mults = sorted(self.multiplicities().items(), key=lambda kv: (sum(kv[0]), kv[0]))
        return {
            "dimension": self.dimension,
            "multiplicities": [{"weight": list(w), "count": k} for w, k in mults],
            "degrees": self.degrees,
        }


def _symbol_order(g: SimpleGraph):
    return lambda s: (g.index(s[0]), s[1])


def compute_sandwich(
    g: SimpleGraph,
    field: FieldSpec = FieldSpec(None),
    degree_cap: int = DEFAULT_DEGREE_CAP,
    prune: bool = False,
) -> SandwichAlgebra:
    """Compute L(0) for ``g`` over ``field``.

    With ``prune=True`` symbols killed by the vanishing lemmas, and (for
    Dynkin diagrams) all weights outside the positive roots, are discarded
    before row reduction.  The basis is the same either way; only the
    certificates of the discarded symbols are missing, so the result cannot
    feed the L(f) engine.
    """
    if degree_cap < 1:
        raise ValueError("degree_cap must be >= 1")
    one, zero = field.one, field.zero
    dclass = classify(g) if prune else None
    root_prune = prune and dclass.is_dynkin

    basis = []
    for v in g.vertices:
        basis.append(BasisElement(len(basis), MonomialWord((v,)), g.simple_root(v), v, None))
    by_weight = defaultdict(list)
    for b in basis:
        by_weight[b.weight].append(b.index)
    gen_index = {v: i for i, v in enumerate(g.vertices)}
    rho = {}
    certificates = {}
    layers = []
    ev = Evaluator(basis, rho, one)
    order = _symbol_order(g)

    d = 2
    while True:
        prev = [b for b in basis if b.degree == d - 1]
        if not prev:
            break
        if d > degree_cap + 1:
            raise DegreeCapExceeded(f"basis still non-empty in degree {d - 1} > cap {degree_cap}")
        ev.start_degree(d)
        groups = defaultdict(list)
        for b in prev:
            for x in g.vertices:
                w = list(b.weight)
                w[g.index(x)] += 1
                groups[tuple(w)].append((x, b.index))
        new_elems = []
        for mu in sorted(groups):
            symbols = sorted(groups[mu], key=order)
            if root_prune and not is_positive_root(g, mu, dclass):
                for s in symbols:
                    rho[s] = {}
                    certificates[s] = (("lemma", "roots"),)
                continue
            pruned = set()
            if prune:
                for col, (x, j) in enumerate(symbols):
                    if word_vanishes(g, (x,) + basis[j].word.letters):
                        pruned.add(col)
            rels = _relations(g, mu, d, by_weight)
            layer = _reduce_layer(ev, mu, d, symbols, rels, gen_index, pruned, zero, one)
            layers.append(layer)
            # record values of every symbol
            for col, s in enumerate(symbols):
                if col in pruned:
                    rho[s] = {}
                    certificates[s] = (("lemma", "vanishing"),)
            for col in range(len(symbols)):
                if col in pruned or col in layer.pivots:
                    continue
                x, j = symbols[col]
                idx = len(basis) + len(new_elems)
                elem = BasisElement(idx, MonomialWord((x,) + basis[j].word.letters), mu, x, j)
                new_elems.append(elem)
                layer.basis_of[col] = idx
            for k, pc in enumerate(layer.pivots):
                val = {}
                for q, bi in layer.basis_of.items():
                    c = layer.reduced[k][q]
                    if c:
                        val[bi] = -c
                rho[symbols[pc]] = val
                certificates[symbols[pc]] = tuple(
                    (rel, t) for rel, t in zip(layer.relations, layer.transform[k]) if t
                )
            for col, bi in layer.basis_of.items():
                rho[symbols[col]] = {bi: one}
        for e in new_elems:
            basis.append(e)
            by_weight[e.weight].append(e.index)
        ev.finish()
        d += 1

    return SandwichAlgebra(
        graph=g,
        field=field,
        basis=basis,
        by_weight=dict(by_weight),
        expansion=rho,
        certificates=certificates,
        layers=layers,
        certified=not prune,
        degree_cap=degree_cap,
        _eval=ev,
    )


def _relations(g: SimpleGraph, mu: tuple, d: int, by_weight: dict) -> list:
    rels = []
    verts = g.vertices
    for nu, left in by_weight.items():
        rest = tuple(a - b for a, b in zip(mu, nu))
        if min(rest) < 0 or rest not in by_weight:
            continue
        for i in left:
            for j in by_weight[rest]:
                if i <= j:
                    rels.append(Relation("swap", None, None, i, j))
    rels.sort(key=lambda r: (r.c, r.other))
    if d == 2:
        for a, x in enumerate(verts):
            for y in verts[a + 1:]:
                if mu == _sum(g, x, y) and not g.adjacent(x, y):
                    rels.append(Relation("commute", x, y))
        return rels
    for a, x in enumerate(verts):
        for y in verts[a + 1:]:
            nu = list(mu)
            nu[g.index(x)] -= 1
            nu[g.index(y)] -= 1
            for c in by_weight.get(tuple(nu), ()):
                rels.append(Relation("jacobi", x, y, c))
    for x in verts:
        nu = list(mu)
        nu[g.index(x)] -= 2
        for c in by_weight.get(tuple(nu), ()):
            rels.append(Relation("sandwich", x, None, c))
    return rels


def _sum(g, x, y):
    w = [0] * g.n
    w[g.index(x)] += 1
    w[g.index(y)] += 1
    return tuple(w)


def _reduce_layer(ev, mu, d, symbols, rels, gen_index, pruned, zero, one) -> WeightLayer:
    col = {s: i for i, s in enumerate(symbols)}
    n = len(symbols)
    matrix = []
    for rel in rels:
        sym, known = split(ev.evaluate(rel, gen_index))
        if known:
            raise AssertionError(f"inhomogeneous relation {rel} in L(0)")
        row = [zero] * n
        for s, v in sym.items():
            row[col[s]] = v
        matrix.append(row)
    keep = [i for i in range(n) if i not in pruned]
    work = [[r[i] for i in keep] for r in matrix]
    pivots_local, transform = rref_rows(work, len(keep), zero, one)
    # map back to full column indices
    reduced = []
    for r in work:
        full = [zero] * n
        for a, i in enumerate(keep):
            full[i] = r[a]
        reduced.append(full)
    pivots = [keep[p] for p in pivots_local]
    return WeightLayer(mu, d, symbols, rels, matrix, reduced, pivots, transform or [], {}, frozenset(pruned))


# ---------------------------------------------------------------- queries

def _check_element(alg: SandwichAlgebra, u: dict):
    for k in u:
        if not isinstance(k, int) or not 0 <= k < alg.dimension:
            raise UnknownBasisElement(f"{k!r} is not a basis index")


def bracket_in_L0(alg: SandwichAlgebra, u: dict, v: dict) -> dict:
    """Bracket of two elements given as sparse vectors over the basis."""
    _check_element(alg, u)
    _check_element(alg, v)
    return alg._eval.bracket_vec(u, v)


@dataclass
class SandwichReport:
    passed: bool
    dimension: int
    expected_dimension: int
    per_weight: list  # (weight, found, expected, ok)
    delta_multiplicity: Optional[int] = None

    def failures(self) -> list:
        return [p for p in self.per_weight if not p[3]]


def verify_sandwich_theorems(alg: SandwichAlgebra, dclass: Optional[DynkinClass] = None) -> SandwichReport:
    """Compare the weight multiplicities with n_+ (finite type) or n_+ |x g/n_+ (affine type)."""
    from .diagram import affine_data, positive_roots

    g = alg.graph
    dclass = dclass or classify(g)
    if not dclass.is_dynkin:
        raise NotDynkin(f"{dclass.tag} is not a Dynkin diagram")
    mults = alg.multiplicities()
    expected = {}
    delta_mult = None
    if dclass.is_finite:
        for b in positive_roots(g):
            expected[b] = 1
    else:
        a = affine_data(g)
        for w in a.theta_set:
            expected[w] = 1
        expected[a.delta] = g.n - 1
        delta_mult = mults.get(a.delta, 0)
    rows = []
    for w in sorted(set(expected) | set(mults), key=lambda w: (sum(w), w)):
        f, e = mults.get(w, 0), expected.get(w, 0)
        rows.append((w, f, e, f == e))
    exp_dim = sum(expected.values())
    ok = all(r[3] for r in rows) and alg.dimension == exp_dim
    return SandwichReport(ok, alg.dimension, exp_dim, rows, delta_mult)
