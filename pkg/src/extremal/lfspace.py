"""L(f): the bracket on the L(0) basis deformed by a parameter set.

Every relation row of the sandwich computation is evaluated again with the
deformed bracket.  Its top-degree part reproduces the L(0) row; the rest is a
lower-degree correction, plus ``h_x(c) x`` for a sandwich row ``[x,[x,c]]``.
The stored row reduction then expresses each eliminated symbol in the basis.
Transform rows that reduce to zero in L(0) must also vanish here; any that do
not are recorded as residuals, and they witness ``dim L(f) < dim L(0)``.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from typing import Optional

from .diagram import DynkinClass, affine_data, classify, pair_simple
from .errors import (
    CertificateFailed,
    MissingDeltaValue,
    MissingParameter,
    NonBasisWeight,
    NotDynkin,
    NotProportional,
    PreconditionViolated,
    UnknownBasisElement,
)
from .exactalg import FieldSpec, axpy, vscale
from .sandwich import Evaluator, MonomialWord, SandwichAlgebra, split


# ---------------------------------------------------------------- parameters

@dataclass
class ParameterSet:
    """Values ``h_x(b)`` for every vertex ``x`` and basis word ``b``."""

    field: FieldSpec
    values: dict  # (vertex, MonomialWord) -> scalar

    @classmethod
    def zero(cls, sand: SandwichAlgebra) -> "ParameterSet":
        z = sand.field.zero
        return cls(sand.field, {(x, b.word): z for x in sand.graph.vertices for b in sand.basis})

    def get(self, x, word: MonomialWord):
        try:
            return self.values[(x, word)]
        except KeyError:
            raise MissingParameter(f"no value for f_{x}({word})") from None

    def by_index(self, sand: SandwichAlgebra) -> dict:
        out = {}
        for (x, w), v in self.values.items():
            out[(x, sand.index_of(w))] = self.field(v)
        return out

    def to_json(self, sand: SandwichAlgebra) -> dict:
        fmt = self.field.format
        out = {}
        for x in sand.graph.vertices:
            out[x] = [
                {"word": str(b.word), "value": fmt(self.values[(x, b.word)])}
                for b in sand.basis
                if (x, b.word) in self.values
            ]
        return out

    @classmethod
    def from_json(cls, obj: dict, field: FieldSpec) -> "ParameterSet":
        vals = {}
        for x, entries in obj.items():
            for e in entries:
                vals[(x, MonomialWord.parse(e["word"]))] = field(e["value"])
        return cls(field, vals)

    def __eq__(self, other):
        if not isinstance(other, ParameterSet):
            return NotImplemented
        keys = set(self.values) | set(other.values)
        z = self.field.zero
        return all(self.values.get(k, z) == other.values.get(k, z) for k in keys)


@dataclass(frozen=True)
class ScalingVector:
    t: dict  # vertex -> nonzero scalar

    def __post_init__(self):
        for x, v in self.t.items():
            if not v:
                raise ValueError(f"scaling entry for {x} must be invertible")


def scale(t: ScalingVector, h: ParameterSet) -> ParameterSet:
    """``(t h)_x(b) = t_x^{-1} t^{-weight(b)} h_x(b)``."""
    one = h.field.one
    out = {}
    for (x, word), v in h.values.items():
        c = one / t.t[x]
        for y in word.letters:
            c = c / t.t[y]
        out[(x, word)] = c * v
    return ParameterSet(h.field, out)


def parse_edge_key(g, key) -> frozenset:
    if isinstance(key, (tuple, list, frozenset, set)):
        pair = frozenset(key)
    else:
        pair = None
        names = set(g.vertices)
        for i, ch in enumerate(key):
            if ch == "-" and key[:i] in names and key[i + 1:] in names:
                pair = frozenset((key[:i], key[i + 1:]))
                break
        if pair is None:
            raise PreconditionViolated(f"cannot read edge {key!r}")
    if pair not in g.edges:
        raise PreconditionViolated(f"{sorted(pair)} is not an edge")
    return pair


def read_partial(obj: dict, g, field: FieldSpec):
    """``{"edges": {"a-b": "3/2"}, "delta": "1"}`` -> (edge map, delta or None)."""
    edges = {parse_edge_key(g, k): field(v) for k, v in obj.get("edges", {}).items()}
    delta = obj.get("delta")
    return edges, (None if delta is None else field(delta))


def load_parameter_file(text: str, sand: SandwichAlgebra, dclass: Optional[DynkinClass] = None) -> ParameterSet:
    obj = json.loads(text)
    if "edges" in obj or "delta" in obj:
        edges, delta = read_partial(obj, sand.graph, sand.field)
        return complete_parameters(sand, dclass or classify(sand.graph), edges, delta)
    return ParameterSet.from_json(obj, sand.field)


# ---------------------------------------------------------------- the deformed bracket

class _Builder:
    """Replays the stored row reductions degree by degree with parameters."""

    def __init__(self, sand: SandwichAlgebra, lookup):
        if not sand.certified:
            raise PreconditionViolated("sandwich algebra was pruned; recompute with prune=False")
        self.sand = sand
        self.lookup = lookup  # (x, basis index) -> scalar
        self.rho = {}
        self.ev = Evaluator(sand.basis, self.rho, sand.field.one)
        self.residuals = []
        self.done = 1
        self.layers = defaultdict(list)
        for layer in sand.layers:
            self.layers[layer.degree].append(layer)
        self.top = max(self.layers, default=1)
        self.gen_index = sand.gen_index

    def advance_to(self, d: int):
        while self.done < min(d, self.top):
            self._degree(self.done + 1)
            self.done += 1

    def finish(self):
        self.advance_to(self.top)

    def _degree(self, d: int):
        one = self.sand.field.one
        ev = self.ev
        ev.start_degree(d)
        for layer in self.layers[d]:
            rhs = []
            for r, rel in enumerate(layer.relations):
                sym, known = split(ev.evaluate(rel, self.gen_index))
                expect = {layer.symbols[q]: v for q, v in enumerate(layer.matrix[r]) if v}
                if sym != expect:
                    raise CertificateFailed(f"top-degree part of {rel} differs from L(0) in weight {layer.weight}")
                g = vscale(known, -one)
                if rel.kind == "sandwich":
                    hv = self.lookup(rel.x, rel.c)
                    if hv:
                        axpy(g, {self.gen_index[rel.x]: hv})
                rhs.append(g)
            for k, t_row in enumerate(layer.transform):
                acc = {}
                for i, t in enumerate(t_row):
                    if t and rhs[i]:
                        axpy(acc, rhs[i], t)
                if k < len(layer.pivots):
                    for q, bi in layer.basis_of.items():
                        c = layer.reduced[k][q]
                        if c:
                            axpy(acc, {bi: -c})
                    self.rho[layer.symbols[layer.pivots[k]]] = acc
                elif acc:
                    combo = tuple(
                        (layer.relations[i].describe(self.sand.basis), t) for i, t in enumerate(t_row) if t
                    )
                    self.residuals.append((layer.weight, combo, acc))
            for q, bi in layer.basis_of.items():
                self.rho[layer.symbols[q]] = {bi: one}
        ev.finish()


@dataclass
class FilteredAlgebra:
    sand: SandwichAlgebra
    params: ParameterSet
    rho: dict
    residuals: list
    pi_cache: dict = dc_field(default_factory=dict)
    _eval: Evaluator = dc_field(default=None, repr=False)
    _values: dict = dc_field(default=None, repr=False)

    @property
    def basis(self):
        return self.sand.basis

    @property
    def field(self) -> FieldSpec:
        return self.sand.field

    @property
    def dimension(self) -> int:
        return self.sand.dimension

    def pair(self, i: int, j: int) -> dict:
        return self._eval.pair(i, j)

    def bracket(self, u: dict, v: dict) -> dict:
        return self._eval.bracket_vec(u, v)

    def act(self, x, v: dict) -> dict:
        return self._eval.act(x, v)

    def table(self) -> dict:
        n = self.dimension
        return {(i, j): self.pair(i, j) for i in range(n) for j in range(n)}

    def h(self, x, v: dict):
        """Linear extension of ``h_x`` to an element."""
        acc = self.field.zero
        for k, c in v.items():
            acc = acc + c * self._values[(x, k)]
        return acc


def _index_lookup(sand: SandwichAlgebra, h: ParameterSet) -> dict:
    vals = {}
    for x in sand.graph.vertices:
        for b in sand.basis:
            vals[(x, b.index)] = sand.field(h.get(x, b.word))
    return vals


def build_bracket(sand: SandwichAlgebra, h: ParameterSet) -> FilteredAlgebra:
    vals = _index_lookup(sand, h)
    b = _Builder(sand, lambda x, j: vals[(x, j)])
    b.finish()
    return FilteredAlgebra(sand, h, b.rho, b.residuals, _eval=b.ev, _values=vals)


def project(alg: FilteredAlgebra, w) -> dict:
    """Image in L(f) of the left-normed word ``w`` (string, tuple or MonomialWord)."""
    if isinstance(w, str):
        w = MonomialWord.parse(w)
    elif not isinstance(w, MonomialWord):
        w = MonomialWord(tuple(w))
    hit = alg.pi_cache.get(w)
    if hit is not None:
        return hit
    gi = alg.sand.gen_index
    for x in w.letters:
        if x not in gi:
            raise UnknownBasisElement(f"{x!r} is not a vertex")
    if w.degree == 1:
        res = {gi[w.letters[0]]: alg.field.one}
    else:
        res = alg.act(w.letters[0], project(alg, MonomialWord(w.letters[1:])))
    alg.pi_cache[w] = res
    return res


# ---------------------------------------------------------------- membership

@dataclass
class Verdict:
    member: bool
    witnesses: list
    checks: dict

    def __bool__(self):
        return self.member


def membership_in_X(alg: FilteredAlgebra, max_witnesses: int = 5) -> Verdict:
    """Check the closed conditions that characterise ``dim L(f) = dim L(0)``."""
    sand = alg.sand
    n = sand.dimension
    one = alg.field.one
    witnesses = []
    checks = {}

    def note(kind, detail):
        if len(witnesses) < max_witnesses:
            witnesses.append((kind, detail))

    checks["syzygy"] = not alg.residuals
    for weight, combo, acc in alg.residuals:
        note("syzygy", {"weight": list(weight), "relations": [c[0] for c in combo], "value": _fmt(alg, acc)})

    table = [[alg.pair(i, j) for j in range(n)] for i in range(n)]

    ok = True
    for i in range(n):
        for j in range(i, n):
            s = axpy(dict(table[i][j]), table[j][i])
            if s:
                ok = False
                note("antisymmetry", (str(sand.basis[i].word), str(sand.basis[j].word)))
    checks["antisymmetry"] = ok

    def br(i, v):
        out = {}
        row = table[i]
        for k, c in v.items():
            axpy(out, row[k], c)
        return out

    ok = True
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = br(i, table[j][k])
                axpy(s, br(j, table[k][i]))
                axpy(s, br(k, table[i][j]))
                if s:
                    ok = False
                    note("jacobi", tuple(str(sand.basis[t].word) for t in (i, j, k)))
    checks["jacobi"] = ok

    ok = True
    for b in sand.basis:
        if b.parent is None:
            continue
        v = {sand.gen_index[b.word.letters[-1]]: one}
        for x in reversed(b.word.letters[:-1]):
            v = br(sand.gen_index[x], v)
        if v != {b.index: one}:
            ok = False
            note("word", str(b.word))
    checks["words"] = ok

    ok = True
    for x in sand.graph.vertices:
        xi = sand.gen_index[x]
        for u in range(n):
            got = br(xi, table[xi][u])
            hv = alg._values[(x, u)]
            want = {xi: hv} if hv else {}
            if got != want:
                ok = False
                note("sandwich", (x, str(sand.basis[u].word)))
    checks["extremal"] = ok

    return Verdict(all(checks.values()), witnesses, checks)


def _fmt(alg, vec):
    return {str(alg.basis[k].word): alg.field.format(v) for k, v in sorted(vec.items())}


def extremal_form_lf(alg: FilteredAlgebra, u, v):
    """``kappa(u, v)`` from ``[u,[u,v]] = kappa(u,v) u``; ``u`` a vertex, ``v`` an element or basis index."""
    gi = alg.sand.gen_index
    if u not in gi:
        raise UnknownBasisElement(f"{u!r} is not a vertex")
    if isinstance(v, int):
        v = {v: alg.field.one}
    w = alg.act(u, alg.act(u, v))
    xi = gi[u]
    if not w:
        return alg.field.zero
    if set(w) != {xi}:
        raise NotProportional(f"[{u},[{u},v]] is not a multiple of {u}")
    return w[xi]


# ---------------------------------------------------------------- completion for Dynkin diagrams

def complete_parameters(
    sand: SandwichAlgebra,
    dclass: DynkinClass,
    edge_values: dict,
    delta_value=None,
) -> ParameterSet:
    """Extend edge values (and for affine diagrams the value at ``m_{x0}``) to all of ``Pi x basis``.

    For ``b = [z, b']`` associativity of the extremal form gives
    ``f_x(b) = kappa([x, z], b') = -f_z([x, b'])``, which vanishes unless
    ``x`` and ``z`` are adjacent.  For affine diagrams ``f_x(m_x)`` is moved
    onto ``x0`` by the same identity, peeling letters off the word until
    ``x0`` is reached.
    """
    g = sand.graph
    F = sand.field
    if not dclass.is_dynkin:
        raise NotDynkin(f"{dclass.tag} is not a Dynkin diagram")
    if dclass.is_finite and delta_value is not None:
        raise PreconditionViolated("finite type takes no delta value")
    if dclass.is_affine and delta_value is None:
        raise MissingDeltaValue("affine type needs f_{x0}(m_{x0})")
    edges = {}
    for k, v in edge_values.items():
        edges[parse_edge_key(g, k)] = F(v)
    for e in g.edges:
        if e not in edges:
            raise MissingParameter(f"no value for edge {sorted(e)}")

    aff = affine_data(g) if dclass.is_affine else None
    vals = {}

    def lookup(x, j):
        try:
            return vals[(x, j)]
        except KeyError:
            raise MissingParameter(f"f_{x}({sand.basis[j].word}) not yet known") from None

    builder = _Builder(sand, lookup)
    ev = builder.ev
    gi = sand.gen_index

    def f_of(x, vec):
        acc = F.zero
        for k, c in vec.items():
            acc = acc + c * lookup(x, k)
        return acc

    by_degree = defaultdict(list)
    for b in sand.basis:
        by_degree[b.degree].append(b)

    for d in sorted(by_degree):
        builder.advance_to(d)
        m_pairs = []
        for b in by_degree[d]:
            for x in g.vertices:
                if d == 1:
                    y = b.head
                    vals[(x, b.index)] = edges.get(frozenset((x, y)), F.zero) if x != y else F.zero
                    continue
                if aff is not None and _is_m_pair(g, aff, x, b.weight):
                    m_pairs.append((x, b))
                    continue
                if pair_simple(g, x, b.weight) < -1:
                    raise NonBasisWeight(f"pair ({x}, {b.word}) is neither reducible nor of the form (x, delta - alpha_x)")
                z = b.head
                if not g.adjacent(x, z):
                    vals[(x, b.index)] = F.zero
                else:
                    vals[(x, b.index)] = -f_of(z, ev.act(x, {b.parent: F.one}))
        if m_pairs:
            x0 = aff.x0
            for x, b in m_pairs:
                if x == x0:
                    vals[(x, b.index)] = F(delta_value)
            for x, b in m_pairs:
                if x != x0:
                    vals[(x, b.index)] = _transport(ev, gi, F, x, b, x0, f_of)
    builder.finish()
    out = {}
    for (x, j), v in vals.items():
        out[(x, sand.basis[j].word)] = v
    return ParameterSet(F, out)


def _is_m_pair(g, aff, x, weight) -> bool:
    i = g.index(x)
    return all(w == dv - (1 if k == i else 0) for k, (w, dv) in enumerate(zip(weight, aff.delta)))


def _transport(ev, gi, F, x, b, x0, f_of):
    """``f_x(m_x)`` for ``m_x = x_d ... x_1 x0 Y``: equals ``-f_{x0}([U, Y])`` with ``U = [..[x, x_d].., x_1]``."""
    letters = b.word.letters
    pos = letters.index(x0)
    prefix, tail = letters[:pos], letters[pos + 1:]
    u = {gi[x]: F.one}
    for z in prefix:
        u = vscale(ev.act(z, u), -F.one)  # [u, z] = -[z, u]
    if not tail:
        return f_of(x0, u)
    y = {gi[tail[-1]]: F.one}
    for z in reversed(tail[:-1]):
        y = ev.act(z, y)
    return -f_of(x0, ev.bracket_vec(u, y))
