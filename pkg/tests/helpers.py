"""Shared fixtures: small cubical sets, semi-cubical sets, and maps.

Everything here is tiny enough to check by hand; homology values asserted in
the test modules were computed on paper from these presentations.
"""

from cubehom.boxcat import CubeMorphism, identity
from cubehom.catalg import FiniteCategory
from cubehom.coeff import (
    CovariantSystem,
    FiniteDiagram,
    SemiCubicalSystem,
    local_system,
)
from cubehom.cubset import (
    Cube,
    CubicalMap,
    PresentedCubicalSet,
    SemiCubicalSet,
    universal_from_semicubical,
)
from cubehom.zlinalg import IntMatrix, solve_exact


def point():
    return PresentedCubicalSet({"v": 0}, {})


def interval_semi():
    return SemiCubicalSet(
        [["a", "b"], ["e"]],
        {("e", 1, 0): "a", ("e", 1, 1): "b"},
    )


def interval():
    return universal_from_semicubical(interval_semi())


def circle_semi():
    return SemiCubicalSet(
        [["v"], ["e"]],
        {("e", 1, 0): "v", ("e", 1, 1): "v"},
    )


def circle():
    return universal_from_semicubical(circle_semi())


def wedge_semi():
    return SemiCubicalSet(
        [["v"], ["e1", "e2"]],
        {("e1", 1, 0): "v", ("e1", 1, 1): "v",
         ("e2", 1, 0): "v", ("e2", 1, 1): "v"},
    )


def torus_semi():
    """One vertex, two loops, one square with opposite faces equal."""
    return SemiCubicalSet(
        [["v"], ["a", "b"], ["t"]],
        {("a", 1, 0): "v", ("a", 1, 1): "v",
         ("b", 1, 0): "v", ("b", 1, 1): "v",
         ("t", 1, 0): "a", ("t", 1, 1): "a",
         ("t", 2, 0): "b", ("t", 2, 1): "b"},
    )


def torus():
    return universal_from_semicubical(torus_semi())


def twisted_square_semi():
    """One vertex, two loops x and y, one square gluing them with a flip.

    The square q has lower/upper faces in direction 1 equal to y and x, and
    in direction 2 equal to x and y, which makes the degree-1 homology pick
    up 2-torsion.
    """
    return SemiCubicalSet(
        [["v"], ["x", "y"], ["q"]],
        {("x", 1, 0): "v", ("x", 1, 1): "v",
         ("y", 1, 0): "v", ("y", 1, 1): "v",
         ("q", 1, 0): "y", ("q", 1, 1): "x",
         ("q", 2, 0): "x", ("q", 2, 1): "y"},
    )


def twisted_square():
    return universal_from_semicubical(twisted_square_semi())


def squashed_square():
    """A circle with a square attached along degenerate vertical faces.

    The square's direction-1 faces are both the loop e and its direction-2
    faces are both the degenerate edge on v, which is only expressible in a
    presented set, not a semi-cubical one.
    """
    sq = Cube("v", CubeMorphism(1, 0, ()))
    return PresentedCubicalSet(
        {"v": 0, "e": 1, "q": 2},
        {("e", 1, 0): Cube("v", identity(0)),
         ("e", 1, 1): Cube("v", identity(0)),
         ("q", 1, 0): Cube("e", identity(1)),
         ("q", 1, 1): Cube("e", identity(1)),
         ("q", 2, 0): sq,
         ("q", 2, 1): sq},
    )


def collapse_to_point(X):
    """The unique map from X to the one-vertex set."""
    target = point()
    assignment = {}
    for g, d in X.generators.items():
        assignment[g] = Cube("v", CubeMorphism(d, 0, ()))
    return CubicalMap(X, target, assignment)


def fold_wedge():
    """Identify both loops of the wedge onto the single circle loop."""
    src = universal_from_semicubical(wedge_semi())
    dst = circle()
    return CubicalMap(src, dst, {
        "v": Cube("v", identity(0)),
        "e1": Cube("e", identity(1)),
        "e2": Cube("e", identity(1)),
    })


def endpoint_inclusion():
    """The interval mapped onto the circle's loop."""
    return CubicalMap(interval(), circle(), {
        "a": Cube("v", identity(0)),
        "b": Cube("v", identity(0)),
        "e": Cube("e", identity(1)),
    })


def identity_map(X):
    return CubicalMap(X, X, {g: Cube(g, identity(d)) for g, d in X.generators.items()})


def random_unimodular(rng, r):
    """A small random determinant +-1 matrix built from row operations."""
    rows = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    for _ in range(3 * r):
        op = rng.randrange(3)
        if op == 0 and r >= 2:
            t, s = rng.sample(range(r), 2)
            q = rng.choice([-2, -1, 1, 2])
            rows[t] = [a + q * b for a, b in zip(rows[t], rows[s])]
        elif op == 1 and r >= 2:
            t, s = rng.sample(range(r), 2)
            rows[t], rows[s] = rows[s], rows[t]
        else:
            t = rng.randrange(r)
            rows[t] = [-a for a in rows[t]]
    return IntMatrix.from_rows(rows)


def inverse_unimodular(m):
    return solve_exact(m, IntMatrix.identity(m.rows))


def gauge_system(X, top, r, rng, variance="contravariant"):
    """A local system whose face matrices telescope through one unit per generator.

    Every relation instance reduces to a difference of endpoints, so the
    result is functorial no matter which units are drawn.
    """
    gamma = {g: random_unimodular(rng, r) for g in X.generators}
    gamma_inv = {g: inverse_unimodular(gamma[g]) for g in X.generators}
    mats = {}
    for (g, i, eps), c in X.faces.items():
        if variance == "contravariant":
            mats[(g, i, eps)] = gamma[c.gen] * gamma_inv[g]
        else:
            mats[(g, i, eps)] = gamma[g] * gamma_inv[c.gen]
    return local_system(X, top, r, mats, variance)


def monodromy_circle(top=2, variance="contravariant"):
    """Rank-1 system on the circle whose loop flips the sign."""
    plus = IntMatrix.from_rows([[1]])
    minus = IntMatrix.from_rows([[-1]])
    return local_system(circle(), top, 1,
                        {("e", 1, 0): plus, ("e", 1, 1): minus}, variance)


def uniform_local_covariant(base, u):
    """Covariant system with every face matrix u and every degeneracy its inverse.

    The operator identities all reduce to powers of u against powers of its
    inverse, so this is functorial on any table.
    """
    uinv = inverse_unimodular(u)
    r = u.rows
    ranks, faces, degens = {}, {}, {}
    for n in range(base.top + 1):
        for key in base.keys[n]:
            ranks[(n, key)] = r
    for n in range(1, base.top + 1):
        for i in range(1, n + 1):
            for eps in (0, 1):
                for key in base.keys[n]:
                    faces[(n, i, eps, key)] = u
    for m in range(base.top):
        for i in range(1, m + 2):
            for key in base.keys[m]:
                degens[(m, i, key)] = uinv
    return CovariantSystem(base, ranks, faces, degens)


def poset_category(objects, relation):
    """Finite poset as a category: one morphism x_y per related pair x <= y."""
    pairs = set(relation) | {(x, x) for x in objects}
    morphisms = {f"{x}_{y}": (x, y) for x, y in pairs}
    composition = {}
    for x, y in pairs:
        for y2, z in pairs:
            if y2 == y and (x, z) in pairs:
                composition[(f"{y}_{z}", f"{x}_{y}")] = f"{x}_{z}"
    identities = {x: f"{x}_{x}" for x in objects}
    return FiniteCategory(objects, morphisms, composition, identities)


def point_category():
    """One object, one identity."""
    return poset_category(["pt"], [])


def arrow_category():
    """Two objects and the single arrow between them."""
    return poset_category(["0", "1"], [("0", "1")])


def square_poset():
    """Four objects with a least and a greatest element, square shaped."""
    return poset_category(
        ["00", "01", "10", "11"],
        [("00", "01"), ("00", "10"), ("00", "11"), ("01", "11"), ("10", "11")])


def cyclic2_monoid():
    """One object carrying an involution g with g after g = e."""
    return FiniteCategory(
        ["o"],
        {"e": ("o", "o"), "g": ("o", "o")},
        {("e", "e"): "e", ("e", "g"): "g", ("g", "e"): "g", ("g", "g"): "e"},
        {"o": "e"})


def constant_diagram(C, rank=1):
    """Diagram with the same free group at every object, identities throughout."""
    eye = IntMatrix.identity(rank)
    return FiniteDiagram(C, {obj: rank for obj in C.objects},
                         {name: eye for name in C.morphisms})


def sign_diagram(C=None):
    """Rank-1 diagram on the involution monoid (or its opposite) with g = -1."""
    if C is None:
        C = cyclic2_monoid()
    return FiniteDiagram(C, {"o": 1},
                         {"e": IntMatrix.identity(1),
                          "g": IntMatrix.from_rows([[-1]])})


def codomain_diagram(C, fc, F):
    """Diagram on the decomposition category taking its values at codomains.

    A decomposition arrow "alpha|beta|u|v" goes to F(v), so the value at an
    object alpha is F(cod alpha); functoriality comes from v stacking.
    """
    ranks = {alpha: F.rank_of(C.morphisms[alpha][1]) for alpha in fc.objects}
    mats = {name: F.matrix(name.split("|")[3]) for name in fc.morphisms}
    return FiniteDiagram(fc, ranks, mats)


def weighted_torus_system():
    """A non-local rank-1 semi-cubical system on the torus.

    Face matrices scale by 2 in one direction; the commutation constraint
    2 * 1 = 1 * 2 holds, so it is functorial without being unimodular.
    """
    one = IntMatrix.from_rows([[1]])
    two = IntMatrix.from_rows([[2]])
    return SemiCubicalSystem(
        torus_semi(),
        {"v": 1, "a": 1, "b": 1, "t": 1},
        {("a", 1, 0): two, ("a", 1, 1): two,
         ("b", 1, 0): one, ("b", 1, 1): one,
         ("t", 1, 0): one, ("t", 1, 1): one,
         ("t", 2, 0): two, ("t", 2, 1): two},
    )
