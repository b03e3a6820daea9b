"""Generic realizations of L(f) inside Chevalley algebras.

Each generator is sent to an extremal element ``a^2 E + ab H - b^2 F`` of the
sl2-triple of its vertex.  Reading off the extremal form on all basis words
gives a parameter set; when the image generates a subalgebra of dimension
``dim L(0)``, L(f) is isomorphic to that subalgebra (it surjects onto it and
has the same dimension).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field as dc_field
from typing import Optional

from .chevalley import (
    StructureAlgebra,
    build_chevalley,
    extremal_form,
    is_extremal,
    subalgebra_closure,
)
from .diagram import SimpleGraph, affine_data, classify
from .errors import (
    BothZero,
    CertificateFailed,
    ConstraintUnsolvable,
    GenericityFailed,
    NotExtremal,
    NotFiniteType,
    NotProportional,
    PreconditionViolated,
    NotAffineType,
)
from .exactalg import FieldSpec, axpy
from .lfspace import ParameterSet, build_bracket, membership_in_X
from .sandwich import MonomialWord, SandwichAlgebra

MAX_RETRIES = 200


@dataclass
class GeneratorTuple:
    graph: SimpleGraph
    ambient: StructureAlgebra
    elements: dict  # vertex -> element of ambient
    provenance: dict = dc_field(default_factory=dict)
    generic: bool = True
    closure_dimension: Optional[int] = None

    def kappa(self, x, y):
        return extremal_form(self.ambient, self.elements[x], self.elements[y])


def sl2_extremal(a, b, triple) -> dict:
    """``a^2 E + ab H - b^2 F`` for an sl2-triple ``(E, H, F)`` of sparse elements."""
    if not a and not b:
        raise BothZero("(a, b) = (0, 0)")
    E, H, F = triple
    out = {}
    axpy(out, E, a * a)
    axpy(out, H, a * b)
    axpy(out, F, -(b * b))
    return out


def _draw_pair(F: FieldSpec, rng: random.Random):
    while True:
        a, b = F.random_element(rng), F.random_element(rng)
        if a or b:
            return a, b


def _check_commuting(gt: GeneratorTuple):
    g, amb = gt.graph, gt.ambient
    verts = g.vertices
    for i, x in enumerate(verts):
        for y in verts[i + 1:]:
            if not g.adjacent(x, y) and amb.bracket(gt.elements[x], gt.elements[y]):
                raise PreconditionViolated(f"G_{x} and G_{y} do not commute")


def _edge_forms_nonzero(gt: GeneratorTuple) -> bool:
    return all(gt.kappa(*sorted(e)) for e in gt.graph.edges)


def _finalize(gt: GeneratorTuple, target: int) -> GeneratorTuple:
    _check_commuting(gt)
    gt.closure_dimension = subalgebra_closure(gt.ambient, list(gt.elements.values()))[0]
    gt.generic = gt.closure_dimension == target and _edge_forms_nonzero(gt)
    return gt


def _retry(build, field: FieldSpec, seed: int, retries: int):
    rng = random.Random(seed)
    for attempt in range(retries):
        try:
            gt = build(rng)
        except ConstraintUnsolvable:
            continue
        if gt.generic:
            gt.provenance["attempt"] = attempt
            return gt
    raise GenericityFailed(f"no generic tuple over {field} after {retries} draws (seed {seed})")


# ---------------------------------------------------------------- finite type

def realize_finite(
    g0: SimpleGraph,
    field: FieldSpec = FieldSpec(None),
    seed: int = 0,
    ab: Optional[dict] = None,
    retries: int = MAX_RETRIES,
) -> GeneratorTuple:
    """Tuple ``G_x`` in the sl2 of ``alpha_x``.

    With explicit ``ab`` the tuple is returned as is, flagged by ``generic``;
    otherwise random pairs are drawn until the tuple generates a subalgebra
    of dimension ``|Phi+|`` with all edge forms non-zero.
    """
    dclass = classify(g0)
    if not dclass.is_finite:
        raise NotFiniteType(f"{dclass.tag} is not of finite type")
    chev = build_chevalley(g0, field)
    target = len(chev.positive)

    def triple(x):
        a = tuple(int(v == x) for v in g0.vertices)
        return chev.E(a), chev.H(x), chev.E(tuple(-c for c in a))

    def make(pairs):
        els = {x: sl2_extremal(field(a), field(b), triple(x)) for x, (a, b) in pairs.items()}
        gt = GeneratorTuple(g0, chev, els, {"ab": {x: (field(a), field(b)) for x, (a, b) in pairs.items()}})
        return _finalize(gt, target)

    if ab is not None:
        return make(ab)
    return _retry(lambda rng: make({x: _draw_pair(field, rng) for x in g0.vertices}), field, seed, retries)


# ---------------------------------------------------------------- affine type

def realize_affine(
    g: SimpleGraph,
    field: FieldSpec = FieldSpec(None),
    seed: int = 0,
    ab: Optional[dict] = None,
    retries: int = MAX_RETRIES,
) -> GeneratorTuple:
    """Tuple in the Chevalley algebra of the finite part; ``x0`` uses the triple on the lowest root."""
    dclass = classify(g)
    if not dclass.is_affine:
        raise NotAffineType(f"{dclass.tag} is not of affine type")
    aff = affine_data(g)
    g0 = aff.finite_graph
    chev = build_chevalley(g0, field)
    target = chev.dimension
    theta = tuple(aff.theta[g.index(v)] for v in g0.vertices)

    def triple(x):
        if x == aff.x0:
            return chev.E(theta), chev.H_of(theta), chev.E(tuple(-c for c in theta))
        a = tuple(int(v == x) for v in g0.vertices)
        return chev.E(a), chev.H(x), chev.E(tuple(-c for c in a))

    def make(pairs):
        els = {x: sl2_extremal(field(pairs[x][0]), field(pairs[x][1]), triple(x)) for x in g.vertices}
        gt = GeneratorTuple(g, chev, els, {"ab": {x: (field(a), field(b)) for x, (a, b) in pairs.items()}})
        return _finalize(gt, target)

    if ab is not None:
        return make(ab)
    return _retry(lambda rng: make({x: _draw_pair(field, rng) for x in g.vertices}), field, seed, retries)


def sl_matrix_algebra(n: int, field: FieldSpec = FieldSpec(None)) -> StructureAlgebra:
    """Trace-zero ``n x n`` matrices on the basis ``E_ij`` (i != j) and ``H_i = E_ii - E_(i+1)(i+1)``."""
    labels = [("E", i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    labels += [("H", i) for i in range(1, n)]
    alg = StructureAlgebra(field, labels, {}, [()] * len(labels))
    mats = [_basis_matrix(lab, n, field) for lab in labels]
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            c = _commutator(mats[i], mats[j], field)
            v = matrix_to_element(alg, c, n)
            if v:
                alg.table[(i, j)] = v
                alg.table[(j, i)] = {k: -x for k, x in v.items()}
    return alg


def _basis_matrix(lab, n, F):
    m = [[F.zero] * n for _ in range(n)]
    if lab[0] == "E":
        m[lab[1] - 1][lab[2] - 1] = F.one
    else:
        i = lab[1]
        m[i - 1][i - 1] = F.one
        m[i][i] = -F.one
    return m


def _commutator(a, b, F):
    n = len(a)
    ab = [[sum((a[i][k] * b[k][j] for k in range(n)), F.zero) for j in range(n)] for i in range(n)]
    ba = [[sum((b[i][k] * a[k][j] for k in range(n)), F.zero) for j in range(n)] for i in range(n)]
    return [[ab[i][j] - ba[i][j] for j in range(n)] for i in range(n)]


def matrix_to_element(alg: StructureAlgebra, m, n: int) -> dict:
    F = alg.field
    out = {}
    for i in range(n):
        for j in range(n):
            if i != j and m[i][j]:
                out[alg.index(("E", i + 1, j + 1))] = m[i][j]
    trace = sum((m[i][i] for i in range(n)), F.zero)
    if trace:
        raise ValueError("matrix is not trace-free")
    acc = F.zero
    for i in range(n - 1):
        acc = acc + m[i][i]
        if acc:
            out[alg.index(("H", i + 1))] = acc
    return out


def realize_affine_a_odd(
    n: int,
    field: FieldSpec = FieldSpec(None),
    seed: int = 0,
    c2=None,
    ab: Optional[dict] = None,
    retries: int = MAX_RETRIES,
    graph: Optional[SimpleGraph] = None,
) -> GeneratorTuple:
    """Tuple on the ``n``-cycle (``n`` even) in ``sl_n`` with the widened ``G_0``.

    ``G_i`` (``i >= 1``) carries the block ``[[ab, a^2], [-b^2, -ab]]`` in rows
    ``i, i+1``.  ``G_0`` is the rank-one matrix with first column
    ``a0 * w`` and last column ``b0 * w``, ``w = (-b0, c_2, ..., c_(n-1), a0)``,
    where ``c_(i+1) = -b_i c_i / a_i`` keeps ``G_0`` commuting with
    ``G_2, ..., G_(n-2)``.  ``c2=None`` draws ``c_2`` at random (non-zero);
    ``c2=0`` gives the plain tuple.
    """
    from .diagram import named_diagram

    if n < 4 or n % 2:
        raise ValueError("n must be even and at least 4")
    g = graph or named_diagram(f"A{n - 1}~")
    labels = list(g.vertices)  # cycle order 0, 1, ..., n-1
    alg = sl_matrix_algebra(n, field)
    F = field

    def make(pairs, c2v):
        a = {i: F(pairs[labels[i]][0]) for i in range(n)}
        b = {i: F(pairs[labels[i]][1]) for i in range(n)}
        c = {2: F(c2v)}
        for i in range(2, n - 1):
            if c[i] and not a[i]:
                raise ConstraintUnsolvable(f"a_{i} = 0 blocks the constraint chain")
            c[i + 1] = -(b[i] * c[i]) / a[i] if c[i] else F.zero
        els = {}
        for i in range(1, n):
            m = [[F.zero] * n for _ in range(n)]
            m[i - 1][i - 1] = a[i] * b[i]
            m[i - 1][i] = a[i] * a[i]
            m[i][i - 1] = -(b[i] * b[i])
            m[i][i] = -(a[i] * b[i])
            els[labels[i]] = matrix_to_element(alg, m, n)
        w = [-b[0]] + [c[k] for k in range(2, n)] + [a[0]]
        m = [[F.zero] * n for _ in range(n)]
        for r in range(n):
            m[r][0] = a[0] * w[r]
            m[r][n - 1] = b[0] * w[r]
        if not any(any(row) for row in m):
            raise BothZero("G_0 vanishes")
        els[labels[0]] = matrix_to_element(alg, m, n)
        prov = {"ab": {labels[i]: (a[i], b[i]) for i in range(n)}, "c": {k: v for k, v in c.items()}}
        gt = GeneratorTuple(g, alg, els, prov)
        return _finalize(gt, n * n - 1)

    def draw(rng):
        pairs = {x: _draw_pair(F, rng) for x in labels}
        c2v = c2 if c2 is not None else F.random_element(rng, nonzero=True)
        return make(pairs, c2v)

    if ab is not None:
        return make(ab, F.zero if c2 is None else c2)
    return _retry(draw, F, seed, retries)


def product_identity(gt: GeneratorTuple) -> tuple:
    """Both sides of ``k(G1,G2) k(G3,G4)...k(G_(n-1),G0) = k(G0,G1) k(G2,G3)...k(G_(n-2),G_(n-1))``."""
    v = list(gt.graph.vertices)
    n = len(v)
    F = gt.ambient.field
    lhs, rhs = F.one, F.one
    for i in range(1, n, 2):
        lhs = lhs * gt.kappa(v[i], v[(i + 1) % n])
    for i in range(0, n, 2):
        rhs = rhs * gt.kappa(v[i], v[i + 1])
    return lhs, rhs


# ---------------------------------------------------------------- parameters and certificates

def evaluate_word(gt: GeneratorTuple, letters) -> dict:
    amb = gt.ambient
    v = gt.elements[letters[-1]]
    for x in reversed(letters[:-1]):
        v = amb.bracket(gt.elements[x], v)
    return v


def realized_parameters(gt: GeneratorTuple, sand: SandwichAlgebra) -> ParameterSet:
    """``f_x(b) = kappa(G_x, b(G))`` on every vertex and basis word."""
    vals = {}
    for b in sand.basis:
        w = evaluate_word(gt, b.word.letters)
        for x in sand.graph.vertices:
            try:
                vals[(x, b.word)] = sand.field(extremal_form(gt.ambient, gt.elements[x], w))
            except NotExtremal as e:
                raise NotProportional(f"G_{x} is not extremal on {b.word}") from e
    return ParameterSet(sand.field, vals)


def realized_partial(gt: GeneratorTuple, sand: SandwichAlgebra, h: Optional[ParameterSet] = None):
    """Edge values and, for affine diagrams, the value at ``m_{x0}``."""
    g = sand.graph
    h = h or realized_parameters(gt, sand)
    edges = {}
    for e in g.edges:
        x, y = sorted(e, key=g.index)
        edges[e] = h.get(x, MonomialWord((y,)))
    dclass = classify(g)
    delta = None
    if dclass.is_affine:
        aff = affine_data(g)
        target = tuple(d - (1 if k == g.index(aff.x0) else 0) for k, d in enumerate(aff.delta))
        m = [b for b in sand.basis if b.weight == target]
        delta = h.get(aff.x0, m[0].word)
    return edges, delta


def _conclusion(g: SimpleGraph, dclass, d2: int) -> str:
    if dclass.is_affine:
        fin = classify(affine_data(g).finite_graph).tag
        return f"L(f) is isomorphic to the Chevalley algebra of type {fin} (dimension {d2})"
    if dclass.is_finite:
        return f"L(f) is isomorphic to the generated subalgebra of dimension {d2} = |Phi+|"
    return f"L(f) is isomorphic to the generated subalgebra of dimension {d2}"


def certify_generic_iso(g: SimpleGraph, gt: GeneratorTuple, sand: SandwichAlgebra) -> dict:
    """Dimension-plus-quotient certificate that L(f) is the subalgebra generated by the tuple."""
    h = realized_parameters(gt, sand)
    alg = build_bracket(sand, h)
    verdict = membership_in_X(alg)
    d1 = gt.closure_dimension
    if d1 is None:
        d1 = subalgebra_closure(gt.ambient, list(gt.elements.values()))[0]
    d2 = sand.dimension
    if not verdict.member:
        raise CertificateFailed(f"realized parameters fail membership: {verdict.witnesses[:2]}")
    if d1 != d2:
        raise CertificateFailed(f"closure dimension {d1} != dim L(0) = {d2}")
    dclass = classify(g)
    return {
        "graph": json.loads(g.to_json()),
        "d1": d1,
        "d2": d2,
        "verdict": "isomorphic",
        "conclusion": _conclusion(g, dclass, d2),
        "parameters": h,
    }


def recognize(ambient: StructureAlgebra, generators: dict, g: SimpleGraph, sand: SandwichAlgebra) -> dict:
    """Given extremal generators commuting on non-edges, identify the algebra as a quotient of L(f)."""
    for x in g.vertices:
        v = generators.get(x)
        if not v:
            raise PreconditionViolated(f"generator {x} is zero")
        if not is_extremal(ambient, v):
            raise PreconditionViolated(f"generator {x} is not extremal")
    gt = GeneratorTuple(g, ambient, dict(generators))
    _check_commuting(gt)
    h = realized_parameters(gt, sand)
    verdict = membership_in_X(build_bracket(sand, h))
    d1 = subalgebra_closure(ambient, list(generators.values()))[0]
    iso = verdict.member and d1 == sand.dimension
    return {
        "member": verdict.member,
        "quotient": verdict.member,
        "isomorphic": iso,
        "d1": d1,
        "d2": sand.dimension,
        "parameters": h,
        "witnesses": verdict.witnesses,
    }
