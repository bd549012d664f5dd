"""Chain and cochain complexes of tabulated cubical sets, and the drivers.

Boundary convention: d_k = sum over directions i of (-1)^i (lower face minus
upper face). Reported degrees are always strictly below the truncation of
the table, because the top-degree boundary out of unseen cubes is unknown.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .coeff import ContravariantSystem, constant_system, is_local
from .cubset import CubesTable, CubicalMap, SemiCubicalSet, pullback_fiber
from .zlinalg import (
    FreeChainComplex,
    HomologyGroup,
    IntMatrix,
    assemble_blocks,
    cohomology_of_cochain,
    cokernel_projection,
    homology_of_complex,
    kernel_basis,
    solve_exact,
    stack_rows,
)


def _check_base(X: CubesTable, F) -> None:
    if F.base is not X and F.base.keys != X.keys:
        raise ValueError("system is defined on a different table")


def _block_boundary(X: CubesTable, F, n: int) -> IntMatrix:
    """d_n on the raw chain level, one block per (face cube, cube) pair."""
    col_sizes = [F.rank_of(n, j) for j in range(X.size(n))]
    row_sizes = [F.rank_of(n - 1, j) for j in range(X.size(n - 1))]
    blocks = {}
    for j in range(X.size(n)):
        for i in range(1, n + 1):
            for eps in (0, 1):
                sign = (-1) ** i * (1 if eps == 0 else -1)
                r = X.face_index(n, i, eps, j)
                term = F.face_matrix(n, i, eps, j).scale(sign)
                if (r, j) in blocks:
                    blocks[(r, j)] = blocks[(r, j)] + term
                else:
                    blocks[(r, j)] = term
    return assemble_blocks(row_sizes, col_sizes, blocks)


def unnormalized_complex(X: CubesTable, F: ContravariantSystem) -> FreeChainComplex:
    """One summand per cube, degenerate ones included."""
    _check_base(X, F)
    if F.variance != "contravariant":
        raise ValueError("chain complexes take contravariant coefficients")
    ranks = [sum(F.rank_of(n, j) for j in range(X.size(n))) for n in range(X.top + 1)]
    boundaries = [_block_boundary(X, F, n) for n in range(1, X.top + 1)]
    return FreeChainComplex(ranks, boundaries)


@dataclass
class ComplexBuildReport:
    """A normalized complex plus the maps relating it to the raw one.

    projections[n] * sections[n] is the identity on the normalized degree n.
    degenerate_torsion[n] lists invariant factors killed in the quotient;
    the build refuses to continue when any appear, so on a finished report
    every entry is empty.
    """

    complex: FreeChainComplex
    projections: List[IntMatrix]
    sections: List[IntMatrix]
    degenerate_torsion: List[tuple]
    labels: Optional[List[List[str]]] = None


def _degeneracy_arrivals(X: CubesTable, n: int):
    """For each cube index z at dimension n, the list of (i, x) with s_i x = z."""
    arriving = [[] for _ in range(X.size(n))]
    for i in range(1, n + 1):
        col = X.degen_map[(n - 1, i)]
        for x, z in enumerate(col):
            arriving[z].append((i, x))
    return arriving


def normalized_complex(X: CubesTable, F: ContravariantSystem) -> ComplexBuildReport:
    """Quotient by the images of all degeneracy operators, block by block.

    Each degeneracy lands inside the summand of a single degenerate cube, so
    the quotient is a direct sum of small cokernels. The quotient must be
    free (it is, for functorial systems); torsion raises.
    """
    _check_base(X, F)
    if F.variance != "contravariant":
        raise ValueError("chain complexes take contravariant coefficients")
    projections, sections = [], []
    torsions = []
    ranks = []
    for n in range(X.top + 1):
        arriving = _degeneracy_arrivals(X, n) if n >= 1 else [[] for _ in range(X.size(n))]
        proj_blocks, sec_blocks = {}, {}
        quotient_sizes = []
        level_torsion = []
        for z in range(X.size(n)):
            r = F.rank_of(n, z)
            if not arriving[z]:
                proj_blocks[(z, z)] = IntMatrix.identity(r)
                sec_blocks[(z, z)] = IntMatrix.identity(r)
                quotient_sizes.append(r)
                continue
            span = stack_rows([F.degen_matrix(n - 1, i, x).transpose()
                               for i, x in arriving[z]]).transpose()
            pres = cokernel_projection(span)
            if pres.torsion:
                raise ValueError(
                    f"degenerate quotient at dim {n} cube {X.key(n, z)} has torsion "
                    f"{pres.torsion}; coefficient system is not functorial")
            proj_blocks[(z, z)] = pres.projection
            sec_blocks[(z, z)] = pres.section
            quotient_sizes.append(pres.projection.rows)
        cube_sizes = [F.rank_of(n, z) for z in range(X.size(n))]
        projections.append(assemble_blocks(quotient_sizes, cube_sizes, proj_blocks))
        sections.append(assemble_blocks(cube_sizes, quotient_sizes, sec_blocks))
        torsions.append(tuple(level_torsion))
        ranks.append(sum(quotient_sizes))
    boundaries = []
    for n in range(1, X.top + 1):
        d_raw = _block_boundary(X, F, n)
        # the boundary must carry degenerate chains to degenerate chains,
        # otherwise the quotient complex would be meaningless
        arriving = _degeneracy_arrivals(X, n)
        deg_cols = []
        for z in range(X.size(n)):
            for i, x in arriving[z]:
                deg_cols.append((z, i, x))
        if deg_cols:
            col_sizes = [F.rank_of(n - 1, x) for (_, _, x) in deg_cols]
            row_sizes = [F.rank_of(n, w) for w in range(X.size(n))]
            blocks = {}
            for c, (z, i, x) in enumerate(deg_cols):
                blocks[(z, c)] = F.degen_matrix(n - 1, i, x)
            deg_image = assemble_blocks(row_sizes, col_sizes, blocks)
            if not (projections[n - 1] * (d_raw * deg_image)).is_zero():
                raise ValueError(
                    f"boundary does not preserve degenerate chains at dimension {n}")
        boundaries.append(projections[n - 1] * (d_raw * sections[n]))
    cx = FreeChainComplex(ranks, boundaries)
    return ComplexBuildReport(cx, projections, sections, torsions)


def normalized_complex_local(X: CubesTable, F: ContravariantSystem) -> ComplexBuildReport:
    """Fast path for unimodular systems: restrict to non-degenerate cubes.

    When every degeneracy matrix is invertible over the integers its image
    is the whole summand of the degenerate cube, so the quotient is simply
    the non-degenerate part and the boundary is a submatrix.
    """
    _check_base(X, F)
    if F.variance != "contravariant":
        raise ValueError("chain complexes take contravariant coefficients")
    if not is_local(F):
        raise ValueError("local path requires a unimodular system")
    projections, sections, labels = [], [], []
    ranks = []
    keeps = []
    for n in range(X.top + 1):
        offs, total = [], 0
        for z in range(X.size(n)):
            offs.append(total)
            total += F.rank_of(n, z)
        keep = []
        level_labels = []
        for z in X.nondegenerate_indices(n):
            keep.extend(range(offs[z], offs[z] + F.rank_of(n, z)))
            level_labels.append(X.key(n, z))
        eye = IntMatrix.identity(total)
        projections.append(eye.take_rows(keep))
        sections.append(eye.take_cols(keep))
        keeps.append(keep)
        labels.append(level_labels)
        ranks.append(len(keep))
    boundaries = []
    for n in range(1, X.top + 1):
        d_raw = _block_boundary(X, F, n)
        boundaries.append(d_raw.take_rows(keeps[n - 1]).take_cols(keeps[n]))
    cx = FreeChainComplex(ranks, boundaries)
    return ComplexBuildReport(cx, projections, sections,
                              [() for _ in range(X.top + 1)], labels)


def _truncate(cx: FreeChainComplex, top: int) -> FreeChainComplex:
    if cx.top == top:
        return cx
    return FreeChainComplex(cx.ranks[:top + 1], cx.boundaries[:top])


def homology(X: CubesTable, F: ContravariantSystem, max_dim: int,
             path: str = "auto") -> Tuple[HomologyGroup, ...]:
    """Homology in degrees 0..max_dim; the table must extend one dimension past."""
    _check_base(X, F)
    if max_dim < 0:
        raise ValueError("max_dim must be nonnegative")
    if X.top < max_dim + 1:
        raise ValueError(
            f"computing H_0..H_{max_dim} needs cubes up to dimension {max_dim + 1}, "
            f"table stops at {X.top}")
    if path == "auto":
        path = "local" if is_local(F) else "generic"
    if path == "local":
        report = normalized_complex_local(X, F)
    elif path == "generic":
        report = normalized_complex(X, F)
    else:
        raise ValueError(f"path must be auto, local, or generic, got {path!r}")
    cx = _truncate(report.complex, max_dim + 1)
    return homology_of_complex(cx)


@dataclass
class CochainBuildReport:
    """A normalized cochain complex plus its inclusion into the raw one."""

    ranks: List[int]
    deltas: List[IntMatrix]
    inclusions: List[IntMatrix]


def cochain_complex(X: CubesTable, G) -> CochainBuildReport:
    """Normalized cochains: per cube, the joint kernel of its degeneracy maps."""
    _check_base(X, G)
    if G.variance != "covariant":
        raise ValueError("cochain complexes take covariant coefficients")
    inclusions = []
    kernels = []
    ranks = []
    for n in range(X.top + 1):
        arriving = _degeneracy_arrivals(X, n) if n >= 1 else [[] for _ in range(X.size(n))]
        level = []
        sizes = []
        for z in range(X.size(n)):
            r = G.rank_of(n, z)
            if not arriving[z]:
                level.append(IntMatrix.identity(r))
                sizes.append(r)
                continue
            stacked = stack_rows([G.degen_matrix(n - 1, i, x) for i, x in arriving[z]])
            kern = kernel_basis(stacked)
            level.append(kern)
            sizes.append(kern.cols)
        cube_sizes = [G.rank_of(n, z) for z in range(X.size(n))]
        blocks = {(z, z): level[z] for z in range(X.size(n))}
        inclusions.append(assemble_blocks(cube_sizes, sizes, blocks))
        kernels.append(level)
        ranks.append(sum(sizes))
    deltas = []
    for k in range(X.top):
        # The inclusion is block diagonal, so the coefficient solve that rewrites
        # the raw coboundary in kernel coordinates splits into one small solve
        # per (k+1)-cube.
        widths = [kernels[k][w].cols for w in range(X.size(k))]
        rows_out = []
        for z in range(X.size(k + 1)):
            acc = {}
            for i in range(1, k + 2):
                for eps in (0, 1):
                    sign = (-1) ** i * (1 if eps == 0 else -1)
                    w = X.face_index(k + 1, i, eps, z)
                    term = G.face_matrix(k + 1, i, eps, z).scale(sign)
                    acc[w] = acc[w] + term if w in acc else term
            row = assemble_blocks(
                [G.rank_of(k + 1, z)], widths,
                {(0, w): m * kernels[k][w] for w, m in acc.items()})
            rows_out.append(solve_exact(kernels[k + 1][z], row))
        if rows_out:
            deltas.append(stack_rows(rows_out))
        else:
            deltas.append(IntMatrix.zeros(0, sum(widths)))
    return CochainBuildReport(ranks, deltas, inclusions)


def cohomology(X: CubesTable, G, max_dim: int) -> Tuple[HomologyGroup, ...]:
    """Cohomology in degrees 0..max_dim; the table must extend one dimension past."""
    _check_base(X, G)
    if max_dim < 0:
        raise ValueError("max_dim must be nonnegative")
    if X.top < max_dim + 1:
        raise ValueError(
            f"computing H^0..H^{max_dim} needs cubes up to dimension {max_dim + 1}, "
            f"table stops at {X.top}")
    report = cochain_complex(X, G)
    ranks = report.ranks[:max_dim + 2]
    deltas = report.deltas[:max_dim + 1]
    return cohomology_of_cochain(ranks, deltas)


def semicubical_homology(S: SemiCubicalSet, F, max_dim: int) -> Tuple[HomologyGroup, ...]:
    """Homology of a semi-cubical set: no degeneracies, so no normalization."""
    if F.base is not S and getattr(F.base, "levels", None) != S.levels:
        raise ValueError("system is defined on a different semi-cubical set")
    if S.top_dim < max_dim + 1:
        raise ValueError(
            f"computing H_0..H_{max_dim} needs cubes up to dimension {max_dim + 1}, "
            f"set stops at {S.top_dim}")
    top = max_dim + 1
    ranks = [sum(F.ranks[x] for x in S.levels[n]) for n in range(top + 1)]
    boundaries = []
    for n in range(1, top + 1):
        row_index = {x: j for j, x in enumerate(S.levels[n - 1])}
        row_sizes = [F.ranks[x] for x in S.levels[n - 1]]
        col_sizes = [F.ranks[x] for x in S.levels[n]]
        blocks = {}
        for j, x in enumerate(S.levels[n]):
            for i in range(1, n + 1):
                for eps in (0, 1):
                    sign = (-1) ** i * (1 if eps == 0 else -1)
                    r = row_index[S.face(x, i, eps)]
                    term = F.face[(x, i, eps)].scale(sign)
                    if (r, j) in blocks:
                        blocks[(r, j)] = blocks[(r, j)] + term
                    else:
                        blocks[(r, j)] = term
        boundaries.append(assemble_blocks(row_sizes, col_sizes, blocks))
    return homology_of_complex(FreeChainComplex(ranks, boundaries))


@dataclass
class FiberRow:
    dim: int
    key: str
    groups: Tuple[HomologyGroup, ...]
    ok: bool


@dataclass
class FiberCriterionReport:
    passed: bool
    rows: Tuple[FiberRow, ...]


def _fiber_worker(args):
    f, n, key, y, max_dim, top = args
    fib = pullback_fiber(f, y, top)
    groups = homology(fib, constant_system(fib, 1), max_dim)
    expected = tuple(HomologyGroup(1 if d == 0 else 0, ()) for d in range(max_dim + 1))
    return FiberRow(n, key, groups, groups == expected)


def fiber_criterion(f: CubicalMap, max_dim: int, top: int) -> FiberCriterionReport:
    """Check that every fiber of f has the homology of a point.

    Every cube of the target's truncation at top is tested; fibers are
    truncated at top as well, so top must be at least max_dim + 1. The
    worker count is taken from CUBEHOM_MAX_WORKERS (default serial).
    """
    if top < max_dim + 1:
        raise ValueError("fiber truncation must exceed the requested degree")
    ty = f.target.expand(top)
    jobs = []
    for n in range(ty.top + 1):
        for idx, y in enumerate(ty.elements[n]):
            jobs.append((f, n, ty.key(n, idx), y, max_dim, top))
    workers = int(os.environ.get("CUBEHOM_MAX_WORKERS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(_fiber_worker, jobs))
    else:
        rows = tuple(_fiber_worker(j) for j in jobs)
    return FiberCriterionReport(all(r.ok for r in rows), rows)
