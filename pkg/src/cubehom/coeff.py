"""Coefficient systems on cubical sets: free abelian values, integer matrices.

A system assigns a rank to every cube of a tabulated set and a matrix to
every face and degeneracy operator. Contravariant systems point from a cube
to its faces and degeneracies (that is the shape chain complexes eat);
covariant systems point the other way and feed cochain complexes.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from .cubset import (
    CubesTable,
    CubicalMap,
    PresentedCubicalSet,
    SemiCubicalSet,
    apply_with_events,
    universal_from_semicubical,
)
from .zlinalg import IntMatrix, assemble_blocks, det


class _TableSystem:
    """Common storage for both variances; matrices are keyed by cube key."""

    variance = "unset"

    def __init__(self, base: CubesTable,
                 ranks: Dict[Tuple[int, str], int],
                 face: Dict[Tuple[int, int, int, str], IntMatrix],
                 degen: Dict[Tuple[int, int, str], IntMatrix]):
        self.base = base
        self.ranks = dict(ranks)
        self.face = dict(face)
        self.degen = dict(degen)

    def rank_of(self, n: int, idx: int) -> int:
        return self.ranks[(n, self.base.key(n, idx))]

    def face_matrix(self, n: int, i: int, eps: int, idx: int) -> IntMatrix:
        return self.face[(n, i, eps, self.base.key(n, idx))]

    def degen_matrix(self, m: int, i: int, idx: int) -> IntMatrix:
        return self.degen[(m, i, self.base.key(m, idx))]


class ContravariantSystem(_TableSystem):
    """Face matrix at x maps the value on x to the value on the face."""

    variance = "contravariant"


class CovariantSystem(_TableSystem):
    """Face matrix at x maps the value on the face to the value on x."""

    variance = "covariant"


def _system_class(variance: str):
    if variance == "contravariant":
        return ContravariantSystem
    if variance == "covariant":
        return CovariantSystem
    raise ValueError(f"variance must be contravariant or covariant, got {variance!r}")


def constant_system(base: CubesTable, rank: int, variance: str = "contravariant"):
    """Rank r on every cube, identity on every operator."""
    if rank < 0:
        raise ValueError("rank must be nonnegative")
    eye = IntMatrix.identity(rank)
    ranks, faces, degens = {}, {}, {}
    for n in range(base.top + 1):
        for key in base.keys[n]:
            ranks[(n, key)] = rank
    for n in range(1, base.top + 1):
        for i in range(1, n + 1):
            for eps in (0, 1):
                for key in base.keys[n]:
                    faces[(n, i, eps, key)] = eye
    for m in range(base.top):
        for i in range(1, m + 2):
            for key in base.keys[m]:
                degens[(m, i, key)] = eye
    return _system_class(variance)(base, ranks, faces, degens)


def validate_functoriality(F) -> List[str]:
    """Check shapes and all operator identities instance by instance."""
    base = F.base
    report = []
    contra = F.variance == "contravariant"
    if not contra and F.variance != "covariant":
        return [f"unknown variance {F.variance!r}"]

    for n in range(base.top + 1):
        for key in base.keys[n]:
            if (n, key) not in F.ranks:
                report.append(f"missing rank for dim-{n} cube {key}")
            elif F.ranks[(n, key)] < 0:
                report.append(f"negative rank at {key}")

    def shape_ok(mat, src_rank, dst_rank, what):
        if contra:
            want = (dst_rank, src_rank)
        else:
            want = (src_rank, dst_rank)
        if (mat.rows, mat.cols) != want:
            report.append(f"{what} has shape {mat.rows}x{mat.cols}, expected {want[0]}x{want[1]}")
            return False
        return True

    shapes_fine = not report
    for n in range(1, base.top + 1):
        for i in range(1, n + 1):
            for eps in (0, 1):
                for idx, key in enumerate(base.keys[n]):
                    if (n, i, eps, key) not in F.face:
                        report.append(f"missing face matrix ({n},{i},{eps}) at {key}")
                        shapes_fine = False
                        continue
                    fk = base.key(n - 1, base.face_index(n, i, eps, idx))
                    if (n, key) in F.ranks and (n - 1, fk) in F.ranks:
                        ok = shape_ok(F.face[(n, i, eps, key)],
                                      F.ranks[(n, key)], F.ranks[(n - 1, fk)],
                                      f"face matrix ({n},{i},{eps}) at {key}")
                        shapes_fine = shapes_fine and ok
    for m in range(base.top):
        for i in range(1, m + 2):
            for idx, key in enumerate(base.keys[m]):
                if (m, i, key) not in F.degen:
                    report.append(f"missing degeneracy matrix ({m},{i}) at {key}")
                    shapes_fine = False
                    continue
                sk = base.key(m + 1, base.degeneracy_index(m, i, idx))
                if (m, key) in F.ranks and (m + 1, sk) in F.ranks:
                    ok = shape_ok(F.degen[(m, i, key)],
                                  F.ranks[(m, key)], F.ranks[(m + 1, sk)],
                                  f"degeneracy matrix ({m},{i}) at {key}")
                    shapes_fine = shapes_fine and ok
    if not shapes_fine:
        return report

    def fm(n, i, eps, idx):
        return F.face[(n, i, eps, base.key(n, idx))]

    def dm(m, i, idx):
        return F.degen[(m, i, base.key(m, idx))]

    # two faces commute
    for n in range(2, base.top + 1):
        for idx in range(base.size(n)):
            for i in range(1, n):
                for j in range(i + 1, n + 1):
                    for a in (0, 1):
                        for b in (0, 1):
                            fj = base.face_index(n, j, b, idx)
                            fi = base.face_index(n, i, a, idx)
                            if contra:
                                lhs = fm(n - 1, i, a, fj) * fm(n, j, b, idx)
                                rhs = fm(n - 1, j - 1, b, fi) * fm(n, i, a, idx)
                            else:
                                lhs = fm(n, j, b, idx) * fm(n - 1, i, a, fj)
                                rhs = fm(n, i, a, idx) * fm(n - 1, j - 1, b, fi)
                            if lhs != rhs:
                                report.append(
                                    f"face-face identity fails at dim {n} cube "
                                    f"{base.key(n, idx)} (i={i}, j={j}, alpha={a}, beta={b})")
    # two degeneracies commute
    for m in range(base.top - 1):
        for idx in range(base.size(m)):
            for j in range(1, m + 2):
                for i in range(1, j + 1):
                    sj = base.degeneracy_index(m, j, idx)
                    si = base.degeneracy_index(m, i, idx)
                    if contra:
                        lhs = dm(m + 1, i, sj) * dm(m, j, idx)
                        rhs = dm(m + 1, j + 1, si) * dm(m, i, idx)
                    else:
                        lhs = dm(m, j, idx) * dm(m + 1, i, sj)
                        rhs = dm(m, i, idx) * dm(m + 1, j + 1, si)
                    if lhs != rhs:
                        report.append(
                            f"degeneracy-degeneracy identity fails at dim {m} cube "
                            f"{base.key(m, idx)} (i={i}, j={j})")
    # face of a degeneracy
    for m in range(base.top):
        for idx in range(base.size(m)):
            for j in range(1, m + 2):
                sj = base.degeneracy_index(m, j, idx)
                for i in range(1, m + 2):
                    for eps in (0, 1):
                        if contra:
                            lhs = fm(m + 1, i, eps, sj) * dm(m, j, idx)
                        else:
                            lhs = dm(m, j, idx) * fm(m + 1, i, eps, sj)
                        if i == j:
                            r = F.ranks[(m, base.key(m, idx))]
                            rhs = IntMatrix.identity(r)
                        elif i < j:
                            fi = base.face_index(m, i, eps, idx)
                            if contra:
                                rhs = dm(m - 1, j - 1, fi) * fm(m, i, eps, idx)
                            else:
                                rhs = fm(m, i, eps, idx) * dm(m - 1, j - 1, fi)
                        else:
                            fi = base.face_index(m, i - 1, eps, idx)
                            if contra:
                                rhs = dm(m - 1, j, fi) * fm(m, i - 1, eps, idx)
                            else:
                                rhs = fm(m, i - 1, eps, idx) * dm(m - 1, j, fi)
                        if lhs != rhs:
                            report.append(
                                f"face-degeneracy identity fails at dim {m} cube "
                                f"{base.key(m, idx)} (i={i}, j={j}, eps={eps})")
    return report


def transpose_system(F):
    """Swap variance by transposing every matrix."""
    cls = CovariantSystem if F.variance == "contravariant" else ContravariantSystem
    return cls(F.base,
               dict(F.ranks),
               {k: m.transpose() for k, m in F.face.items()},
               {k: m.transpose() for k, m in F.degen.items()})


def is_local(F) -> bool:
    """True when every operator matrix is square with determinant +-1."""
    for m in list(F.face.values()) + list(F.degen.values()):
        if m.rows != m.cols or det(m) not in (1, -1):
            return False
    return True


def _compose_events(gen_mats, ranks_by_gen, start_gen, events, variance):
    total = IntMatrix.identity(ranks_by_gen[start_gen])
    for ev in events:
        m = gen_mats[ev]
        if variance == "contravariant":
            total = m * total
        else:
            total = total * m
    return total


def local_system(X: PresentedCubicalSet, top: int, rank: int,
                 gen_face_matrices: Dict[Tuple[str, int, int], IntMatrix],
                 variance: str = "contravariant"):
    """Rank-r system with unimodular face matrices given on generators.

    Degeneracy matrices are forced to the identity and face matrices on
    arbitrary cubes are composites of the generator matrices along the face
    lookups that resolve the operator. Raises if a matrix is not square of
    size rank or not unimodular, or if the result fails functoriality.
    """
    cls = _system_class(variance)
    expected = {(g, i, eps) for g, d in X.generators.items()
                for i in range(1, d + 1) for eps in (0, 1)}
    if set(gen_face_matrices) != expected:
        missing = expected - set(gen_face_matrices)
        extra = set(gen_face_matrices) - expected
        raise ValueError(f"face matrix keys do not match generators "
                         f"(missing {sorted(missing)}, extra {sorted(extra)})")
    for k, m in gen_face_matrices.items():
        if (m.rows, m.cols) != (rank, rank):
            raise ValueError(f"matrix at {k} is {m.rows}x{m.cols}, expected {rank}x{rank}")
        if det(m) not in (1, -1):
            raise ValueError(f"matrix at {k} has determinant {det(m)}, not a unit")
    base = X.expand(top)
    ranks_by_gen = {g: rank for g in X.generators}
    ranks, faces, degens = {}, {}, {}
    for n in range(top + 1):
        for key in base.keys[n]:
            ranks[(n, key)] = rank
    from .boxcat import face as face_morphism
    for n in range(1, top + 1):
        for i in range(1, n + 1):
            for eps in (0, 1):
                delta = face_morphism(n, i, eps)
                for idx, c in enumerate(base.elements[n]):
                    _, events = apply_with_events(X, delta, c)
                    faces[(n, i, eps, c.key())] = _compose_events(
                        gen_face_matrices, ranks_by_gen, c.gen, events, variance)
    eye = IntMatrix.identity(rank)
    for m in range(top):
        for i in range(1, m + 2):
            for key in base.keys[m]:
                degens[(m, i, key)] = eye
    out = cls(base, ranks, faces, degens)
    problems = validate_functoriality(out)
    if problems:
        raise ValueError("generator matrices are not functorial: " + "; ".join(problems[:3]))
    return out


def pullback_system(f: CubicalMap, F):
    """Restrict a system on the target of f along f; matrices are reused as is."""
    top = F.base.top
    tx = f.source.expand(top)
    tm = f.table_map(tx, F.base)
    ranks, faces, degens = {}, {}, {}
    for n in range(top + 1):
        for idx, key in enumerate(tx.keys[n]):
            ranks[(n, key)] = F.rank_of(n, tm[n][idx])
    for n in range(1, top + 1):
        for i in range(1, n + 1):
            for eps in (0, 1):
                for idx, key in enumerate(tx.keys[n]):
                    faces[(n, i, eps, key)] = F.face_matrix(n, i, eps, tm[n][idx])
    for m in range(top):
        for i in range(1, m + 2):
            for idx, key in enumerate(tx.keys[m]):
                degens[(m, i, key)] = F.degen_matrix(m, i, tm[m][idx])
    return type(F)(tx, ranks, faces, degens)


def direct_image(f: CubicalMap, F: ContravariantSystem):
    """Push a contravariant system forward along f by summing over fibers.

    The value on a target cube y is the direct sum of the values on all
    source cubes over y; operator matrices are block matrices with one block
    per fiber element, placed by where the operator sends it.
    """
    if F.variance != "contravariant":
        raise ValueError("direct image is only defined for contravariant systems")
    top = F.base.top
    tx = F.base
    ty = f.target.expand(top)
    tm = f.table_map(tx, ty)
    fibers: Dict[Tuple[int, int], List[int]] = {}
    for n in range(top + 1):
        for iy in range(ty.size(n)):
            fibers[(n, iy)] = []
        for ix in range(tx.size(n)):
            fibers[(n, tm[n][ix])].append(ix)
    ranks, faces, degens = {}, {}, {}
    for n in range(top + 1):
        for iy, key in enumerate(ty.keys[n]):
            ranks[(n, key)] = sum(F.rank_of(n, ix) for ix in fibers[(n, iy)])
    for n in range(1, top + 1):
        for i in range(1, n + 1):
            for eps in (0, 1):
                for iy, key in enumerate(ty.keys[n]):
                    col_fiber = fibers[(n, iy)]
                    fy = ty.face_index(n, i, eps, iy)
                    row_fiber = fibers[(n - 1, fy)]
                    row_pos = {ix: p for p, ix in enumerate(row_fiber)}
                    blocks = {}
                    for cpos, ix in enumerate(col_fiber):
                        fx = tx.face_index(n, i, eps, ix)
                        blocks[(row_pos[fx], cpos)] = F.face_matrix(n, i, eps, ix)
                    faces[(n, i, eps, key)] = assemble_blocks(
                        [F.rank_of(n - 1, ix) for ix in row_fiber],
                        [F.rank_of(n, ix) for ix in col_fiber],
                        blocks)
    for m in range(top):
        for i in range(1, m + 2):
            for iy, key in enumerate(ty.keys[m]):
                col_fiber = fibers[(m, iy)]
                sy = ty.degeneracy_index(m, i, iy)
                row_fiber = fibers[(m + 1, sy)]
                row_pos = {ix: p for p, ix in enumerate(row_fiber)}
                blocks = {}
                for cpos, ix in enumerate(col_fiber):
                    sx = tx.degeneracy_index(m, i, ix)
                    blocks[(row_pos[sx], cpos)] = F.degen_matrix(m, i, ix)
                degens[(m, i, key)] = assemble_blocks(
                    [F.rank_of(m + 1, ix) for ix in row_fiber],
                    [F.rank_of(m, ix) for ix in col_fiber],
                    blocks)
    return ContravariantSystem(ty, ranks, faces, degens)


class SemiCubicalSystem:
    """Ranks and face matrices on a semi-cubical set (no degeneracies)."""

    variance = "contravariant"

    def __init__(self, base: SemiCubicalSet,
                 ranks: Dict[str, int],
                 face: Dict[Tuple[str, int, int], IntMatrix]):
        self.base = base
        self.ranks = dict(ranks)
        self.face = dict(face)

    def validate(self) -> List[str]:
        report = []
        S = self.base
        for n, level in enumerate(S.levels):
            for name in level:
                if name not in self.ranks:
                    report.append(f"missing rank for {name}")
        expected = {(x, i, eps)
                    for n, level in enumerate(S.levels) if n >= 1
                    for x in level
                    for i in range(1, n + 1) for eps in (0, 1)}
        for k in expected - set(self.face):
            report.append(f"missing face matrix {k}")
        if report:
            return report
        for (x, i, eps), m in self.face.items():
            want = (self.ranks[S.face(x, i, eps)], self.ranks[x])
            if (m.rows, m.cols) != want:
                report.append(f"face matrix ({x},{i},{eps}) has shape "
                              f"{m.rows}x{m.cols}, expected {want[0]}x{want[1]}")
        if report:
            return report
        for n in range(2, S.top_dim + 1):
            for x in S.levels[n]:
                for i in range(1, n):
                    for j in range(i + 1, n + 1):
                        for a in (0, 1):
                            for b in (0, 1):
                                lhs = self.face[(S.face(x, j, b), i, a)] * self.face[(x, j, b)]
                                rhs = self.face[(S.face(x, i, a), j - 1, b)] * self.face[(x, i, a)]
                                if lhs != rhs:
                                    report.append(
                                        f"face-face identity fails at {x} "
                                        f"(i={i}, j={j}, alpha={a}, beta={b})")
        return report


def extend_semicubical(F: SemiCubicalSystem, top: int) -> ContravariantSystem:
    """Extend a semi-cubical system to the freely degenerated set.

    Values are copied from the underlying non-degenerate cube, degeneracy
    matrices are identities, and face matrices compose the given generator
    matrices along the lookups that resolve each operator.
    """
    X = universal_from_semicubical(F.base)
    base = X.expand(top)
    ranks, faces, degens = {}, {}, {}
    for n in range(top + 1):
        for c in base.elements[n]:
            ranks[(n, c.key())] = F.ranks[c.gen]
    from .boxcat import face as face_morphism
    for n in range(1, top + 1):
        for i in range(1, n + 1):
            for eps in (0, 1):
                delta = face_morphism(n, i, eps)
                for c in base.elements[n]:
                    _, events = apply_with_events(X, delta, c)
                    faces[(n, i, eps, c.key())] = _compose_events(
                        F.face, F.ranks, c.gen, events, "contravariant")
    for m in range(top):
        for i in range(1, m + 2):
            for c in base.elements[m]:
                degens[(m, i, c.key())] = IntMatrix.identity(F.ranks[c.gen])
    return ContravariantSystem(base, ranks, faces, degens)


class FiniteDiagram:
    """A functor from a finite category to free abelian groups.

    The category is anything with .objects, .morphisms (name -> (src, dst)),
    .identity_of(obj), and .compose(second, first).
    """

    def __init__(self, category, ranks: Dict[str, int], matrices: Dict[str, IntMatrix]):
        self.category = category
        self.ranks = dict(ranks)
        self.matrices = dict(matrices)

    def rank_of(self, obj: str) -> int:
        return self.ranks[obj]

    def matrix(self, morphism: str) -> IntMatrix:
        return self.matrices[morphism]

    def validate(self) -> List[str]:
        report = []
        C = self.category
        for obj in C.objects:
            if obj not in self.ranks:
                report.append(f"missing rank for object {obj}")
        for name, (src, dst) in C.morphisms.items():
            if name not in self.matrices:
                report.append(f"missing matrix for morphism {name}")
            elif src in self.ranks and dst in self.ranks:
                m = self.matrices[name]
                if (m.rows, m.cols) != (self.ranks[dst], self.ranks[src]):
                    report.append(f"matrix for {name} has shape {m.rows}x{m.cols}, "
                                  f"expected {self.ranks[dst]}x{self.ranks[src]}")
        if report:
            return report
        for obj in C.objects:
            if self.matrices[C.identity_of(obj)] != IntMatrix.identity(self.ranks[obj]):
                report.append(f"identity of {obj} is not the identity matrix")
        for g, (gs, gd) in C.morphisms.items():
            for h, (hs, hd) in C.morphisms.items():
                if gd != hs:
                    continue
                comp = C.compose(h, g)
                if self.matrices[comp] != self.matrices[h] * self.matrices[g]:
                    report.append(f"composition fails: {h} after {g} is {comp} "
                                  f"but matrices disagree")
        return report


def system_from_diagram_last_vertex(C, F: FiniteDiagram, N: CubesTable) -> ContravariantSystem:
    """Coefficients on a nerve table from a diagram on the opposite category.

    The value on a cube is the diagram's value at the cube's final vertex;
    a face matrix is the diagram's matrix for the connecting morphism from
    the face's final vertex up to the cube's, read in the opposite category.
    Degeneracies keep the final vertex, so their matrices are identities.
    """
    ranks, faces, degens = {}, {}, {}
    for n in range(N.top + 1):
        for idx, x in enumerate(N.elements[n]):
            ranks[(n, N.key(n, idx))] = F.rank_of(x.vertex((1,) * n))
    for n in range(1, N.top + 1):
        for i in range(1, n + 1):
            for eps in (0, 1):
                for idx, x in enumerate(N.elements[n]):
                    ones = (1,) * n
                    corner = ones[:i - 1] + (eps,) + ones[i:]
                    w = x.value_on_leq(corner, ones)
                    faces[(n, i, eps, N.key(n, idx))] = F.matrix(w)
    for m in range(N.top):
        for idx, x in enumerate(N.elements[m]):
            r = ranks[(m, N.key(m, idx))]
            for i in range(1, m + 2):
                degens[(m, i, N.key(m, idx))] = IntMatrix.identity(r)
    return ContravariantSystem(N, ranks, faces, degens)


def natural_system_via_d(C, G: FiniteDiagram, N: CubesTable) -> CovariantSystem:
    """Coefficients on a nerve table from a diagram on the factorization category.

    The value on a cube is the diagram's value at the cube's long diagonal;
    operators give two-sided factorizations of one diagonal through another,
    and the matrices are the diagram's matrices on those.
    """
    fc = G.category
    ranks, faces, degens = {}, {}, {}

    def diagonal(x, n):
        return x.value_on_leq((0,) * n, (1,) * n)

    for n in range(N.top + 1):
        for idx, x in enumerate(N.elements[n]):
            ranks[(n, N.key(n, idx))] = G.rank_of(diagonal(x, n))
    for n in range(1, N.top + 1):
        for i in range(1, n + 1):
            for eps in (0, 1):
                for idx, x in enumerate(N.elements[n]):
                    zeros, ones = (0,) * n, (1,) * n
                    lo = zeros[:i - 1] + (eps,) + zeros[i:]
                    hi = ones[:i - 1] + (eps,) + ones[i:]
                    u = x.value_on_leq(zeros, lo)
                    v = x.value_on_leq(hi, ones)
                    alpha = x.value_on_leq(lo, hi)
                    beta = diagonal(x, n)
                    faces[(n, i, eps, N.key(n, idx))] = G.matrix(
                        f"{alpha}|{beta}|{u}|{v}")
    for m in range(N.top):
        for idx, x in enumerate(N.elements[m]):
            d = diagonal(x, m)
            for i in range(1, m + 2):
                degens[(m, i, N.key(m, idx))] = G.matrix(fc.identity_of(d))
    return CovariantSystem(N, ranks, faces, degens)
