import pytest
from hypothesis import given, strategies as st

from extremal.chevalley import (
    asymmetry,
    build_chevalley,
    extremal_form,
    is_extremal,
    proportionality,
    semidirect_u,
    subalgebra_closure,
)
from extremal.diagram import bilinear, named_diagram, positive_roots
from extremal.errors import NotAffineType, NotExtremal, NotFiniteType
from extremal.exactalg import FieldSpec

Q = FieldSpec(None)
F5 = FieldSpec(5)

_chev = {}


def chev(name, field=Q):
    if (name, field) not in _chev:
        _chev[(name, field)] = build_chevalley(named_diagram(name), field)
    return _chev[(name, field)]


def test_sl2():
    c = chev("A1")
    E, H, F = c.E((1,)), c.H("1"), c.E((-1,))
    assert c.bracket(E, F) == H
    assert c.bracket(H, E) == {k: 2 * v for k, v in E.items()}
    assert c.bracket(H, F) == {k: -2 * v for k, v in F.items()}
    assert extremal_form(c, E, F) == -2
    assert extremal_form(c, E, E) == 0


@pytest.mark.parametrize("name,dim", [("A1", 3), ("A2", 8), ("A3", 15), ("D4", 28), ("D5", 45), ("E6", 78)])
def test_dimensions(name, dim):
    assert chev(name).dimension == dim


@pytest.mark.parametrize("name", ["A2", "A3", "A4", "D4", "D5"])
@pytest.mark.parametrize("field", [Q, F5], ids=str)
def test_jacobi_and_antisymmetry(name, field):
    c = chev(name, field)
    assert c.antisymmetry_failures() == []
    assert c.jacobi_failures(limit=1) == []


def test_jacobi_e6():
    assert chev("E6").jacobi_failures(limit=1) == []


@pytest.mark.parametrize("name", ["A3", "D4", "E6"])
def test_cartan_action_and_coroots(name):
    c = chev(name)
    g = c.graph
    for b in c.positive:
        nb = tuple(-x for x in b)
        assert c.bracket(c.E(b), c.E(nb)) == c.H_of(b)
        for x in g.vertices:
            want = bilinear(g, g.simple_root(x), b)
            got = c.bracket(c.H(x), c.E(b))
            assert got == ({c.index(("E", b)): Q(want)} if want else {})


@pytest.mark.parametrize("name", ["A3", "D4"])
def test_killing_type_pairing(name):
    # kappa(E_a, E_b) is non-zero exactly when a = -b
    c = chev(name)
    roots = list(c.positive) + [tuple(-x for x in b) for b in c.positive]
    for a in roots:
        for b in roots:
            k = extremal_form(c, c.E(a), c.E(b))
            assert bool(k) == (tuple(-x for x in a) == b)


@pytest.mark.parametrize("name", ["A3", "D4", "E6"])
def test_asymmetry_is_bimultiplicative(name):
    g = named_diagram(name)
    roots = positive_roots(g)[:12]
    for a in roots:
        assert asymmetry(g, a, a) == (-1) ** (bilinear(g, a, a) // 2)
        for b in roots:
            s = tuple(x + y for x, y in zip(a, b))
            assert asymmetry(g, a, b) * asymmetry(g, b, a) == (-1) ** bilinear(g, a, b)
            for c in roots[:4]:
                bc = tuple(x + y for x, y in zip(b, c))
                assert asymmetry(g, a, bc) == asymmetry(g, a, b) * asymmetry(g, a, c)
                assert asymmetry(g, s, c) == asymmetry(g, a, c) * asymmetry(g, b, c)


def test_root_vectors_extremal():
    c = chev("A2")
    for b in c.positive:
        assert is_extremal(c, c.E(b))
    assert not is_extremal(c, c.H("1"))
    assert not is_extremal(c, {})
    with pytest.raises(NotExtremal):
        extremal_form(c, c.H("1"), c.E((1, 0)))


def test_proportionality():
    assert proportionality({0: Q(2), 3: Q(4)}, {0: Q(1), 3: Q(2)}) == Q("1/2")
    assert proportionality({0: Q(2)}, {1: Q(1)}) is None
    assert proportionality({0: Q(1), 1: Q(1)}, {0: Q(1), 1: Q(2)}) is None
    assert proportionality({0: Q(1)}, {}) == 0


@pytest.mark.parametrize("name,count", [("A2", 3), ("A3", 6), ("D4", 12)])
def test_closure_of_simple_root_vectors(name, count):
    c = chev(name)
    g = c.graph
    gens = [c.E(g.simple_root(x)) for x in g.vertices]
    assert subalgebra_closure(c, gens)[0] == count


def test_closure_of_sl2_triple_generators():
    c = chev("A2")
    d, rows = subalgebra_closure(c, [c.E((1, 0)), c.E((-1, 0))])
    assert d == 3 and len(rows) == 3


@pytest.mark.parametrize("name,dim,dmult", [("A2~", 8, 2), ("A3~", 15, 3), ("D4~", 28, 4)])
def test_semidirect_u(name, dim, dmult):
    g = named_diagram(name)
    u = semidirect_u(g)
    assert u.dimension == dim
    from extremal.diagram import affine_data

    delta = affine_data(g).delta
    assert sum(1 for w in u.grading if w == delta) == dmult
    assert u.antisymmetry_failures() == []
    assert u.jacobi_failures(limit=1) == []


def test_semidirect_u_matches_sandwich_multiplicities():
    from collections import Counter

    from extremal.sandwich import compute_sandwich

    for name in ["A2~", "A3~", "D4~"]:
        g = named_diagram(name)
        u = semidirect_u(g)
        assert dict(Counter(u.grading)) == compute_sandwich(g).multiplicities()


def test_type_errors():
    with pytest.raises(NotFiniteType):
        build_chevalley(named_diagram("triangle"))
    with pytest.raises(NotAffineType):
        semidirect_u(named_diagram("A3"))


@given(st.sampled_from(["A2", "A3", "D4"]), st.data())
def test_bracket_antisymmetric_on_random_elements(name, data):
    c = chev(name)
    n = c.dimension
    ints = st.integers(-4, 4)
    u = {i: Q(data.draw(ints)) for i in range(n)}
    v = {i: Q(data.draw(ints)) for i in range(n)}
    u = {k: x for k, x in u.items() if x}
    v = {k: x for k, x in v.items() if x}
    s = c.bracket(u, v)
    for k, x in c.bracket(v, u).items():
        s[k] = s.get(k, 0) + x
    assert not any(s.values())
