"""Finite categories: string complexes, cubical nerves, factorization categories."""

from dataclasses import dataclass
from itertools import product as iter_product
from typing import Dict, List, Tuple

from .coeff import (FiniteDiagram, natural_system_via_d,
                    system_from_diagram_last_vertex)
from .cubset import CubesTable
from .homcalc import cohomology, homology
from .zlinalg import (FreeChainComplex, HomologyGroup, IntMatrix,
                      assemble_blocks, cohomology_of_cochain,
                      homology_of_complex)


class FiniteCategory:
    """A small category given by explicit object, morphism, and composition tables."""

    def __init__(self, objects, morphisms: Dict[str, Tuple[str, str]],
                 composition: Dict[Tuple[str, str], str],
                 identities: Dict[str, str]):
        self.objects = tuple(objects)
        self.morphisms = dict(morphisms)
        self.composition = dict(composition)
        self.identities = dict(identities)

    def source(self, name: str) -> str:
        return self.morphisms[name][0]

    def target(self, name: str) -> str:
        return self.morphisms[name][1]

    def identity_of(self, obj: str) -> str:
        if obj not in self.identities:
            raise KeyError(f"no identity recorded for object {obj!r}")
        return self.identities[obj]

    def compose(self, second: str, first: str) -> str:
        """Name of the composite (second after first)."""
        if self.morphisms[first][1] != self.morphisms[second][0]:
            raise ValueError(f"{second!r} after {first!r} is not composable")
        try:
            return self.composition[(second, first)]
        except KeyError:
            raise ValueError(f"composition table has no entry for "
                             f"{second!r} after {first!r}")

    def op(self) -> "FiniteCategory":
        """The opposite category: same names, endpoints and composition flipped."""
        flipped = {name: (dst, src) for name, (src, dst) in self.morphisms.items()}
        comp = {(first, second): h
                for (second, first), h in self.composition.items()}
        return FiniteCategory(self.objects, flipped, comp, self.identities)

    def validate(self) -> List[str]:
        """Structural problems: endpoints, totality, identity and associativity laws."""
        report = []
        if len(set(self.objects)) != len(self.objects):
            report.append("duplicate object names")
        for name, (src, dst) in self.morphisms.items():
            if src not in self.objects or dst not in self.objects:
                report.append(f"morphism {name} has unknown endpoint")
        for obj in self.objects:
            name = self.identities.get(obj)
            if name is None:
                report.append(f"object {obj} has no identity")
            elif self.morphisms.get(name) != (obj, obj):
                report.append(f"identity of {obj} is not an endomorphism of it")
        for (second, first), comp in self.composition.items():
            if first not in self.morphisms or second not in self.morphisms:
                report.append(f"composition entry ({second}, {first}) "
                              f"names unknown morphisms")
            elif self.morphisms[first][1] != self.morphisms[second][0]:
                report.append(f"composition entry ({second}, {first}) "
                              f"is not composable")
            elif comp not in self.morphisms:
                report.append(f"composite of ({second}, {first}) is unknown")
            elif self.morphisms[comp] != (self.morphisms[first][0],
                                          self.morphisms[second][1]):
                report.append(f"composite of ({second}, {first}) "
                              f"has wrong endpoints")
        for g, (gs, gd) in self.morphisms.items():
            for f, (fs, fd) in self.morphisms.items():
                if fd == gs and (g, f) not in self.composition:
                    report.append(f"composition table misses {g} after {f}")
        if report:
            return report
        for name, (src, dst) in self.morphisms.items():
            if self.compose(self.identity_of(dst), name) != name:
                report.append(f"left identity law fails on {name}")
            if self.compose(name, self.identity_of(src)) != name:
                report.append(f"right identity law fails on {name}")
        for h in self.morphisms:
            for g in self.morphisms:
                if self.morphisms[g][1] != self.morphisms[h][0]:
                    continue
                for f in self.morphisms:
                    if self.morphisms[f][1] != self.morphisms[g][0]:
                        continue
                    left = self.compose(self.compose(h, g), f)
                    right = self.compose(h, self.compose(g, f))
                    if left != right:
                        report.append(f"associativity fails on ({h}, {g}, {f})")
        return report


def composable_chains(C: FiniteCategory, n: int) -> List[Tuple[str, Tuple[str, ...]]]:
    """All length-n strings of composable morphisms as (start object, names)."""
    if n == 0:
        return [(obj, ()) for obj in sorted(C.objects)]
    out = []
    for start, arrows in composable_chains(C, n - 1):
        tail = C.morphisms[arrows[-1]][1] if arrows else start
        for name in sorted(C.morphisms):
            if C.morphisms[name][0] == tail:
                out.append((start, arrows + (name,)))
    return out


def chain_end(C: FiniteCategory, chain) -> str:
    """Final object of a composable string."""
    start, arrows = chain
    return C.morphisms[arrows[-1]][1] if arrows else start


def chain_face(C: FiniteCategory, chain, i: int):
    """Face i of a composable string: drop at the ends, compose inside."""
    start, arrows = chain
    n = len(arrows)
    if not 0 <= i <= n or n == 0:
        raise ValueError(f"face {i} undefined on a string of length {n}")
    if i == 0:
        return (C.morphisms[arrows[0]][1], arrows[1:])
    if i == n:
        return (start, arrows[:-1])
    merged = C.compose(arrows[i], arrows[i - 1])
    return (start, arrows[:i - 1] + (merged,) + arrows[i + 1:])


def bar_complex(C: FiniteCategory, F: FiniteDiagram, top: int) -> FreeChainComplex:
    """Chain complex of composable strings with values at the string's start.

    Face 0 pushes the value along the first arrow; the remaining faces leave
    it in place. Strings through identities are kept, no normalization here.
    """
    levels = [composable_chains(C, n) for n in range(top + 1)]
    ranks = [sum(F.rank_of(start) for start, _ in level) for level in levels]
    boundaries = []
    for n in range(1, top + 1):
        pos = {chain: i for i, chain in enumerate(levels[n - 1])}
        row_sizes = [F.rank_of(start) for start, _ in levels[n - 1]]
        col_sizes = [F.rank_of(start) for start, _ in levels[n]]
        blocks = {}

        def add(r, c, m):
            blocks[(r, c)] = blocks[(r, c)] + m if (r, c) in blocks else m

        for c, chain in enumerate(levels[n]):
            start, arrows = chain
            add(pos[chain_face(C, chain, 0)], c, F.matrix(arrows[0]))
            eye = IntMatrix.identity(F.rank_of(start))
            for i in range(1, n + 1):
                add(pos[chain_face(C, chain, i)], c, eye.scale((-1) ** i))
        boundaries.append(assemble_blocks(row_sizes, col_sizes, blocks))
    return FreeChainComplex(ranks, boundaries)


def cobar_complex(C: FiniteCategory, G: FiniteDiagram, top: int):
    """Cochain complex of composable strings with values at the string's end.

    The last face applies the diagram's matrix for the final arrow; all other
    faces keep the value in place. Returns (ranks, deltas).
    """
    levels = [composable_chains(C, n) for n in range(top + 1)]
    ranks = [sum(G.rank_of(chain_end(C, chain)) for chain in level)
             for level in levels]
    deltas = []
    for k in range(top):
        pos = {chain: i for i, chain in enumerate(levels[k])}
        row_sizes = [G.rank_of(chain_end(C, chain)) for chain in levels[k + 1]]
        col_sizes = [G.rank_of(chain_end(C, chain)) for chain in levels[k]]
        blocks = {}

        def add(r, c, m):
            blocks[(r, c)] = blocks[(r, c)] + m if (r, c) in blocks else m

        for r, chain in enumerate(levels[k + 1]):
            start, arrows = chain
            eye = IntMatrix.identity(G.rank_of(chain_end(C, chain)))
            for j in range(k + 1):
                add(r, pos[chain_face(C, chain, j)], eye.scale((-1) ** j))
            last = G.matrix(arrows[-1]).scale((-1) ** (k + 1))
            add(r, pos[chain_face(C, chain, k + 1)], last)
        deltas.append(assemble_blocks(row_sizes, col_sizes, blocks))
    return ranks, deltas


def category_homology(C: FiniteCategory, F: FiniteDiagram,
                      max_dim: int) -> Tuple[HomologyGroup, ...]:
    """Homology of the string complex in degrees 0..max_dim."""
    if max_dim < 0:
        raise ValueError("max_dim must be nonnegative")
    return homology_of_complex(bar_complex(C, F, max_dim + 1))


def category_cohomology(C: FiniteCategory, G: FiniteDiagram,
                        max_dim: int) -> Tuple[HomologyGroup, ...]:
    """Cohomology of the string cochain complex in degrees 0..max_dim."""
    if max_dim < 0:
        raise ValueError("max_dim must be nonnegative")
    ranks, deltas = cobar_complex(C, G, max_dim + 1)
    return cohomology_of_cochain(ranks, deltas)


def _points(n: int):
    return list(iter_product((0, 1), repeat=n))


def _cube_edges(n: int):
    out = []
    for p in _points(n):
        for j in range(n):
            if p[j] == 0:
                out.append((p, p[:j] + (1,) + p[j + 1:]))
    return out


def _bits(p) -> str:
    return "".join(str(b) for b in p)


class CubeFunctor:
    """A functor from the poset cube {0,1}^n to a finite category.

    Stored as an object per vertex and a morphism name per edge; every square
    face commutes, so composites along monotone paths are well defined.
    """

    def __init__(self, category: FiniteCategory, dim: int, vertices, edges):
        self.category = category
        self.dim = dim
        self.vertices = dict(vertices)
        self.edges = dict(edges)

    def vertex(self, point) -> str:
        return self.vertices[tuple(point)]

    def value_on_leq(self, p, q) -> str:
        """Name of the composite morphism from the image of p to the image of q."""
        p, q = tuple(p), tuple(q)
        if len(p) != self.dim or len(q) != self.dim:
            raise ValueError("points must have the cube's dimension")
        if any(a > b for a, b in zip(p, q)):
            raise ValueError(f"{p} is not below {q}")
        C = self.category
        cur = p
        result = C.identity_of(self.vertices[p])
        for i in range(self.dim):
            if cur[i] < q[i]:
                nxt = cur[:i] + (1,) + cur[i + 1:]
                result = C.compose(self.edges[(cur, nxt)], result)
                cur = nxt
        return result

    def face(self, i: int, eps: int) -> "CubeFunctor":
        """Restrict to the sub-cube with coordinate i frozen at eps."""
        def embed(p):
            return p[:i - 1] + (eps,) + p[i - 1:]
        m = self.dim - 1
        verts = {p: self.vertices[embed(p)] for p in _points(m)}
        edges = {(p, q): self.edges[(embed(p), embed(q))]
                 for p, q in _cube_edges(m)}
        return CubeFunctor(self.category, m, verts, edges)

    def degeneracy(self, i: int) -> "CubeFunctor":
        """Insert a collapsed coordinate at slot i."""
        def drop(p):
            return p[:i - 1] + p[i:]
        m = self.dim + 1
        verts = {p: self.vertices[drop(p)] for p in _points(m)}
        edges = {}
        for p, q in _cube_edges(m):
            j = next(a for a in range(m) if p[a] != q[a])
            if j == i - 1:
                edges[(p, q)] = self.category.identity_of(verts[p])
            else:
                edges[(p, q)] = self.edges[(drop(p), drop(q))]
        return CubeFunctor(self.category, m, verts, edges)

    def key(self) -> str:
        if self.dim == 0:
            return self.vertices[()]
        vs = ",".join(f"{_bits(p)}:{self.vertices[p]}"
                      for p in _points(self.dim))
        es = ",".join(f"{_bits(p)}-{_bits(q)}:{self.edges[(p, q)]}"
                      for p, q in _cube_edges(self.dim))
        return vs + ";" + es

    def _canonical(self):
        return (self.dim, tuple(sorted(self.vertices.items())),
                tuple(sorted(self.edges.items())))

    def __eq__(self, other):
        return (isinstance(other, CubeFunctor)
                and self._canonical() == other._canonical())

    def __hash__(self):
        return hash(self._canonical())

    def __repr__(self):
        return f"CubeFunctor({self.key()!r})"


def _functors(C: FiniteCategory, n: int) -> List[CubeFunctor]:
    """All functors from the n-cube poset to C, sorted by key."""
    pts = _points(n)
    edge_list = _cube_edges(n)
    epos = {e: k for k, e in enumerate(edge_list)}
    squares = []
    for p in pts:
        free = [j for j in range(n) if p[j] == 0]
        for x in range(len(free)):
            for y in range(x + 1, len(free)):
                a, b = free[x], free[y]
                pa = p[:a] + (1,) + p[a + 1:]
                pb = p[:b] + (1,) + p[b + 1:]
                pab = pa[:b] + (1,) + pa[b + 1:]
                squares.append((epos[(p, pa)], epos[(pa, pab)],
                                epos[(p, pb)], epos[(pb, pab)]))
    pending = [[] for _ in edge_list]
    for sq in squares:
        pending[max(sq)].append(sq)

    homs = {}
    for name in sorted(C.morphisms):
        homs.setdefault(C.morphisms[name], []).append(name)

    results = []
    vtx = {}
    lab: List = [None] * len(edge_list)

    def assign_edges(k):
        if k == len(edge_list):
            results.append(CubeFunctor(
                C, n, dict(vtx),
                {edge_list[i]: lab[i] for i in range(len(edge_list))}))
            return
        p, q = edge_list[k]
        for name in homs.get((vtx[p], vtx[q]), ()):
            lab[k] = name
            if all(C.composition[(lab[s2], lab[s1])]
                   == C.composition[(lab[s4], lab[s3])]
                   for s1, s2, s3, s4 in pending[k]):
                assign_edges(k + 1)
        lab[k] = None

    def assign_vertices(m):
        if m == len(pts):
            assign_edges(0)
            return
        p = pts[m]
        below = [p[:j] + (0,) + p[j + 1:] for j in range(n) if p[j] == 1]
        for obj in sorted(C.objects):
            if all(homs.get((vtx[q], obj)) for q in below):
                vtx[p] = obj
                assign_vertices(m + 1)
        vtx.pop(p, None)

    assign_vertices(0)
    results.sort(key=CubeFunctor.key)
    return results


def cubical_nerve(C: FiniteCategory, top: int) -> CubesTable:
    """Table of cube-shaped diagrams in C with precomposition operators."""
    if top > 3 and len(C.morphisms) > 2:
        raise ValueError("nerve truncation above dimension 3 is only supported "
                         "for categories with at most 2 morphisms")
    levels = [_functors(C, n) for n in range(top + 1)]
    keys = [[x.key() for x in level] for level in levels]
    pos = [{k: i for i, k in enumerate(level)} for level in keys]
    face = {}
    for n in range(1, top + 1):
        for i in range(1, n + 1):
            for eps in (0, 1):
                face[(n, i, eps)] = tuple(pos[n - 1][x.face(i, eps).key()]
                                          for x in levels[n])
    degen_map = {}
    for m in range(top):
        for i in range(1, m + 2):
            degen_map[(m, i)] = tuple(pos[m + 1][x.degeneracy(i).key()]
                                      for x in levels[m])
    degenerate = []
    for n, level in enumerate(levels):
        if n == 0:
            degenerate.append([False] * len(level))
            continue
        degenerate.append([any(x.face(i, 0).degeneracy(i) == x
                               for i in range(1, n + 1)) for x in level])
    return CubesTable(top, keys, levels, degenerate, face, degen_map)


def factorization_category(C: FiniteCategory) -> FiniteCategory:
    """Category of two-sided decompositions: objects are the morphisms of C.

    An arrow from alpha to beta is a pair (u, v) with beta = v . alpha . u,
    named "alpha|beta|u|v"; pairs compose by stacking on both sides. Morphism
    names of C must therefore avoid the bar character.
    """
    objects = sorted(C.morphisms)
    parts = {}
    morphisms = {}
    for alpha in objects:
        a_src, a_dst = C.morphisms[alpha]
        for beta in objects:
            b_src, b_dst = C.morphisms[beta]
            for u, (u_src, u_dst) in C.morphisms.items():
                if (u_src, u_dst) != (b_src, a_src):
                    continue
                for v, (v_src, v_dst) in C.morphisms.items():
                    if (v_src, v_dst) != (a_dst, b_dst):
                        continue
                    if C.compose(v, C.compose(alpha, u)) == beta:
                        name = f"{alpha}|{beta}|{u}|{v}"
                        morphisms[name] = (alpha, beta)
                        parts[name] = (u, v)
    identities = {}
    for alpha in objects:
        src, dst = C.morphisms[alpha]
        identities[alpha] = (f"{alpha}|{alpha}|{C.identity_of(src)}"
                             f"|{C.identity_of(dst)}")
    composition = {}
    for name1, (alpha, beta) in morphisms.items():
        u1, v1 = parts[name1]
        for name2, (beta2, gamma) in morphisms.items():
            if beta2 != beta:
                continue
            u2, v2 = parts[name2]
            composition[(name2, name1)] = (f"{alpha}|{gamma}|"
                                           f"{C.compose(u1, u2)}|"
                                           f"{C.compose(v2, v1)}")
    return FiniteCategory(objects, morphisms, composition, identities)


@dataclass
class ComparisonReport:
    """Groups from the cubical route next to groups from the string complex."""

    cubical: Tuple[HomologyGroup, ...]
    categorical: Tuple[HomologyGroup, ...]

    @property
    def equal(self) -> bool:
        return self.cubical == self.categorical


def bw_cohomology_cubical(C: FiniteCategory, G: FiniteDiagram,
                          max_dim: int) -> Tuple[HomologyGroup, ...]:
    """Nerve cohomology with coefficients pulled back along long diagonals."""
    nerve = cubical_nerve(C, max_dim + 1)
    system = natural_system_via_d(C, G, nerve)
    return cohomology(nerve, system, max_dim)


def bw_cohomology_oracle(C: FiniteCategory, G: FiniteDiagram,
                         max_dim: int) -> Tuple[HomologyGroup, ...]:
    """The same groups from the decomposition category's string complex."""
    return category_cohomology(factorization_category(C), G, max_dim)


def bw_comparison(C: FiniteCategory, G: FiniteDiagram,
                  max_dim: int) -> ComparisonReport:
    """Run both routes to the decomposition cohomology side by side."""
    return ComparisonReport(bw_cohomology_cubical(C, G, max_dim),
                            bw_cohomology_oracle(C, G, max_dim))


def nerve_vs_bar_comparison(C: FiniteCategory, F: FiniteDiagram,
                            max_dim: int) -> ComparisonReport:
    """Nerve homology with last-vertex coefficients against the string complex.

    F must be a diagram on the opposite category; the cubical side evaluates
    it at final vertices of nerve cubes, the other side is the string complex
    of the opposite category itself.
    """
    nerve = cubical_nerve(C, max_dim + 1)
    system = system_from_diagram_last_vertex(C, F, nerve)
    return ComparisonReport(homology(nerve, system, max_dim),
                            category_homology(C.op(), F, max_dim))
