"""Chevalley algebras of simply laced type and the semidirect product n+ |x g/n+."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .diagram import SimpleGraph, affine_data, classify, pair_simple, positive_roots
from .errors import NotExtremal, NotFiniteType, NotAffineType
from .exactalg import EchelonSpan, FieldSpec, axpy


@dataclass
class StructureAlgebra:
    """A Lie algebra given by structure constants on a labelled basis.

    Elements are sparse dicts ``{basis index: scalar}``.
    """

    field: FieldSpec
    labels: list
    table: dict  # (i, j) -> sparse vector; missing pairs are zero
    grading: list  # weight tuple per basis element
    _index: dict = dc_field(default=None, repr=False)

    def __post_init__(self):
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        return self._index[label]

    def unit(self, label) -> dict:
        return {self._index[label]: self.field.one}

    def bracket(self, u: dict, v: dict) -> dict:
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                t = self.table.get((i, j))
                if t:
                    axpy(out, t, a * b)
        return out

    def ad_power(self, v: dict, w: dict, k: int = 2) -> dict:
        for _ in range(k):
            w = self.bracket(v, w)
        return w

    def dense(self, v: dict) -> list:
        out = [self.field.zero] * self.dimension
        for i, c in v.items():
            out[i] = c
        return out

    def sparse(self, row) -> dict:
        return {i: c for i, c in enumerate(row) if c}

    def jacobi_failures(self, limit: int = 10) -> list:
        n = self.dimension
        bad = []
        unit = [{i: self.field.one} for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                ij = self.bracket(unit[i], unit[j])
                for k in range(j + 1, n):
                    s = self.bracket(unit[i], self.table.get((j, k), {}))
                    axpy(s, self.bracket(unit[j], self.table.get((k, i), {})))
                    axpy(s, self.bracket(unit[k], ij))
                    if s:
                        bad.append((self.labels[i], self.labels[j], self.labels[k]))
                        if len(bad) >= limit:
                            return bad
        return bad

    def antisymmetry_failures(self) -> list:
        bad = []
        for (i, j), v in self.table.items():
            w = axpy(dict(v), self.table.get((j, i), {}))
            if w:
                bad.append((self.labels[i], self.labels[j]))
        return bad


@dataclass
class ChevalleyAlgebra(StructureAlgebra):
    graph: Optional[SimpleGraph] = None
    positive: tuple = ()

    def E(self, beta) -> dict:
        return self.unit(("E", tuple(beta)))

    def H(self, x) -> dict:
        return self.unit(("H", x))

    def H_of(self, beta) -> dict:
        """``H_beta = sum c_x H_x`` for ``beta = sum c_x alpha_x``."""
        out = {}
        for x, c in zip(self.graph.vertices, beta):
            if c:
                out[self.index(("H", x))] = self.field(c)
        return out


def asymmetry(g: SimpleGraph, a, b) -> int:
    """``(-1)^(a^T E b)`` with ``E`` the diagonal plus the forward edges of the vertex order."""
    s = 0
    verts = g.vertices
    for i, x in enumerate(verts):
        if a[i]:
            s += a[i] * b[i]
            for j in range(i + 1, len(verts)):
                if b[j] and g.adjacent(x, verts[j]):
                    s += a[i] * b[j]
    return -1 if s % 2 else 1


def build_chevalley(g0: SimpleGraph, field: FieldSpec = FieldSpec(None)) -> ChevalleyAlgebra:
    """Chevalley basis ``H_x, E_beta`` with ``[E_b, E_-b] = H_b`` and ``[H_x, E_b] = <alpha_x, b> E_b``.

    Constants come from the asymmetry function (Frenkel-Kac signs); negative
    root vectors are then rescaled by -1 so that ``[E_b, E_-b] = +H_b``.
    """
    dclass = classify(g0)
    if not dclass.is_finite:
        raise NotFiniteType(f"{dclass.tag} is not of finite type")
    pos = positive_roots(g0)
    neg = [tuple(-c for c in b) for b in pos]
    roots = pos + neg
    rootset = set(roots)
    labels = [("H", x) for x in g0.vertices] + [("E", b) for b in roots]
    idx = {lab: i for i, lab in enumerate(labels)}
    n = g0.n
    grading = [tuple([0] * n)] * n + list(roots)
    sign = {b: 1 for b in pos}
    sign.update({b: -1 for b in neg})
    F = field
    table = {}

    def put(i, j, vec):
        vec = {k: F(c) for k, c in vec.items() if F(c)}
        if vec:
            table[(i, j)] = vec
            table[(j, i)] = {k: -c for k, c in vec.items()}

    for x in g0.vertices:
        for b in roots:
            put(idx[("H", x)], idx[("E", b)], {idx[("E", b)]: pair_simple(g0, x, b)})
    for a_i, a in enumerate(roots):
        for b in roots[a_i + 1:]:
            s = tuple(p + q for p, q in zip(a, b))
            i, j = idx[("E", a)], idx[("E", b)]
            if not any(s):
                # [E_a, E_-a] = H_a up to the rescaling
                h = {idx[("H", x)]: c for x, c in zip(g0.vertices, a) if c}
                c = -sign[a] * sign[b]
                put(i, j, {k: c * v for k, v in h.items()})
            elif s in rootset:
                c = sign[a] * sign[b] * sign[s] * asymmetry(g0, a, b)
                put(i, j, {idx[("E", s)]: c})
    return ChevalleyAlgebra(F, labels, table, grading, graph=g0, positive=tuple(pos))


def is_extremal(alg: StructureAlgebra, v: dict) -> bool:
    if not v:
        return False
    span = EchelonSpan(alg.dimension, alg.field)
    span.add(alg.dense(v))
    for i in range(alg.dimension):
        w = alg.ad_power(v, {i: alg.field.one})
        if w and not span.contains(alg.dense(w)):
            return False
    return True


def proportionality(v: dict, w: dict):
    """Scalar ``c`` with ``w = c v``, or None."""
    if not w:
        return 0
    if set(w) - set(v):
        return None
    k = next(iter(v))
    if not w.get(k):
        return None
    c = w[k] / v[k]
    for i, a in v.items():
        if w.get(i, 0) != c * a:
            return None
    return c


def extremal_form(alg: StructureAlgebra, v: dict, w: dict):
    """``kappa(v, w)`` defined by ``[v,[v,w]] = kappa(v,w) v``."""
    c = proportionality(v, alg.ad_power(v, w))
    if c is None:
        raise NotExtremal("[v,[v,w]] is not a multiple of v")
    return alg.field(c)


def subalgebra_closure(alg: StructureAlgebra, generators) -> tuple:
    """Dimension and echelon basis of the subalgebra generated by ``generators``."""
    span = EchelonSpan(alg.dimension, alg.field)
    gens = [g for g in generators if g]
    queue = []
    for g in gens:
        if span.add(alg.dense(g)):
            queue.append(g)
    while queue:
        v = queue.pop()
        for g in gens:
            w = alg.bracket(g, v)
            if w and span.add(alg.dense(w)):
                queue.append(w)
    return len(span), [alg.sparse(r) for r in span.rows]


# ---------------------------------------------------------------- u = n+ |x g/n+

def semidirect_u(g: SimpleGraph, field: FieldSpec = FieldSpec(None)) -> StructureAlgebra:
    """``n+ |x g/n+`` for the finite part of the affine diagram ``g``, graded by ``Z^Pi``.

    The ``n+`` part keeps its root weights (zero at ``x0``); the image of
    ``g_beta`` in ``g/n+`` gets weight ``delta + beta``.  The second summand
    is abelian.
    """
    dclass = classify(g)
    if not dclass.is_affine:
        raise NotAffineType(f"{dclass.tag} is not of affine type")
    aff = affine_data(g)
    chev = build_chevalley(aff.finite_graph, field)
    fverts = aff.finite_graph.vertices

    def embed(w0):
        out = [0] * g.n
        for x, c in zip(fverts, w0):
            out[g.index(x)] = c
        return tuple(out)

    pos_idx = [chev.index(("E", b)) for b in chev.positive]
    quo_idx = [i for i in range(chev.dimension) if i not in set(pos_idx)]
    labels = [("N", chev.labels[i][1]) for i in pos_idx] + [("Q",) + chev.labels[i][1:] for i in quo_idx]
    to_new = {old: k for k, old in enumerate(pos_idx + quo_idx)}
    npos = len(pos_idx)
    grading = [embed(chev.grading[i]) for i in pos_idx]
    grading += [tuple(d + w for d, w in zip(aff.delta, embed(chev.grading[i]))) for i in quo_idx]
    table = {}
    for a in pos_idx:
        for b in pos_idx + quo_idx:
            v = chev.table.get((a, b))
            if not v:
                continue
            if b in pos_idx:
                out = {to_new[k]: c for k, c in v.items()}
            else:
                out = {to_new[k]: c for k, c in v.items() if to_new[k] >= npos}
            if out:
                table[(to_new[a], to_new[b])] = out
                table[(to_new[b], to_new[a])] = {k: -c for k, c in out.items()}
    return StructureAlgebra(field, labels, table, grading)
