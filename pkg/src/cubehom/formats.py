"""Self-describing JSON documents for every entity the command line handles.

Each document is a JSON object with a "type" discriminator.  Parsers raise
FormatError when the document itself is malformed (wrong field types, unknown
names, matrices of the wrong shape); mathematical defects in a well-formed
document are left to the entity's own validate() so the caller can report
them as validation failures rather than parse errors.
"""

import json
from typing import Dict, List, Optional, Tuple

from .catalg import FiniteCategory
from .coeff import (ContravariantSystem, CovariantSystem, FiniteDiagram,
                    SemiCubicalSystem, constant_system, local_system)
from .cubset import CubesTable, CubicalMap, PresentedCubicalSet, SemiCubicalSet
from .zlinalg import HomologyGroup, IntMatrix


class FormatError(Exception):
    """A document failed to parse; the message names the offending field."""


def load_document(path: str) -> dict:
    """Read one JSON document from a file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: {e}") from None
    if not isinstance(data, dict):
        raise FormatError(f"{path}: top level must be a JSON object")
    return data


def dumps_document(data: dict) -> str:
    """Serialize a document with sorted keys so output is byte-reproducible."""
    return json.dumps(data, sort_keys=True, indent=1) + "\n"


def dump_document(data: dict, path: str) -> None:
    """Write one JSON document to a file."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_document(data))


def _check_type(data, expected: str):
    if not isinstance(data, dict):
        raise FormatError(f"a {expected} document must be a JSON object")
    t = data.get("type")
    if t != expected:
        raise FormatError(f"expected a {expected!r} document, got type {t!r}")


def _field(data: dict, name: str, kind, where: str):
    if name not in data:
        raise FormatError(f"{where}: missing field {name!r}")
    value = data[name]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise FormatError(f"{where}: field {name!r} must be a {kind.__name__}")
    return value


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{where}: expected an integer, got {value!r}")
    return value


def _str(value, where: str) -> str:
    if not isinstance(value, str):
        raise FormatError(f"{where}: expected a string, got {value!r}")
    return value


def _selector(text: str, parts: int, where: str) -> Tuple[int, ...]:
    """Parse a comma-separated integer selector such as "i,eps" or "n,i,eps"."""
    if not isinstance(text, str):
        raise FormatError(f"{where}: selector must be a string, got {text!r}")
    pieces = text.split(",")
    if len(pieces) != parts:
        raise FormatError(f"{where}: selector {text!r} needs {parts} integers")
    try:
        return tuple(int(p) for p in pieces)
    except ValueError:
        raise FormatError(f"{where}: selector {text!r} is not integers") from None


def _matrix(data, rows: int, cols: int, where: str) -> IntMatrix:
    """Parse a list of integer rows and enforce the expected shape."""
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise FormatError(f"{where}: a matrix is a list of rows")
    widths = {len(r) for r in data}
    if len(widths) > 1:
        raise FormatError(f"{where}: matrix rows have unequal lengths")
    for r in data:
        for x in r:
            if isinstance(x, bool) or not isinstance(x, int):
                raise FormatError(f"{where}: matrix entries must be integers")
    got_cols = widths.pop() if widths else cols
    if len(data) != rows or (rows > 0 and got_cols != cols):
        raise FormatError(f"{where}: matrix has shape {len(data)}x{got_cols}, "
                          f"expected {rows}x{cols}")
    return IntMatrix(rows, cols, data)


def _matrix_rows(m: IntMatrix) -> List[List[int]]:
    return [list(r) for r in m.data]


# ---------------------------------------------------------------- cube keys

def cube_key_dim(X: PresentedCubicalSet, key: str) -> int:
    """Dimension of the cube a key denotes, read off the degeneracy wire."""
    if "@" not in key:
        raise FormatError(f"cube key {key!r} has no '@' separator")
    gen, wire = key.rsplit("@", 1)
    try:
        k = X.generator_dim(gen)
    except ValueError as e:
        raise FormatError(str(e)) from None
    if wire.startswith("del:"):
        body = wire[len("del:"):]
        return k + (len(body.split(",")) if body else 0)
    return k


def resolve_cube_key(X: PresentedCubicalSet, key: str):
    """Turn a cube key into a cube of X, inferring the dimension."""
    n = cube_key_dim(X, key)
    try:
        return X.cube_from_key(n, key)
    except ValueError as e:
        raise FormatError(f"cube key {key!r}: {e}") from None


# ------------------------------------------------------------- cubical sets

def parse_cubical_set(data) -> PresentedCubicalSet:
    """Read a cubical-set document; face targets are cube keys."""
    _check_type(data, "cubical-set")
    gens_raw = _field(data, "generators", dict, "cubical-set")
    generators = {}
    for name, dim in gens_raw.items():
        generators[name] = _int(dim, f"generator {name!r}")
    stub = PresentedCubicalSet(generators, {})
    faces_raw = _field(data, "faces", dict, "cubical-set")
    faces = {}
    for gen, table in faces_raw.items():
        if gen not in generators:
            raise FormatError(f"faces listed for unknown generator {gen!r}")
        if not isinstance(table, dict):
            raise FormatError(f"faces of {gen!r} must map \"i,eps\" to cube keys")
        d = generators[gen]
        for ie, key in table.items():
            i, eps = _selector(ie, 2, f"face of {gen!r}")
            key = _str(key, f"face ({gen},{i},{eps})")
            try:
                faces[(gen, i, eps)] = stub.cube_from_key(d - 1, key)
            except ValueError as e:
                raise FormatError(f"face ({gen},{i},{eps}): {e}") from None
    return PresentedCubicalSet(generators, faces)


def cubical_set_to_data(X: PresentedCubicalSet) -> dict:
    faces: Dict[str, Dict[str, str]] = {}
    for (gen, i, eps), c in X.faces.items():
        faces.setdefault(gen, {})[f"{i},{eps}"] = c.key()
    return {"type": "cubical-set",
            "generators": dict(X.generators),
            "faces": faces}


def parse_semicubical_set(data) -> SemiCubicalSet:
    """Read a semicubical-set document: levels of names plus face lookups."""
    _check_type(data, "semicubical-set")
    levels_raw = _field(data, "levels", list, "semicubical-set")
    levels = []
    for n, level in enumerate(levels_raw):
        if not isinstance(level, list) or not all(isinstance(x, str) for x in level):
            raise FormatError(f"level {n} must be a list of cube names")
        levels.append(list(level))
    names = {x for level in levels for x in level}
    faces_raw = _field(data, "faces", dict, "semicubical-set")
    faces = {}
    for x, table in faces_raw.items():
        if x not in names:
            raise FormatError(f"faces listed for unknown cube {x!r}")
        if not isinstance(table, dict):
            raise FormatError(f"faces of {x!r} must map \"i,eps\" to cube names")
        for ie, y in table.items():
            i, eps = _selector(ie, 2, f"face of {x!r}")
            faces[(x, i, eps)] = _str(y, f"face ({x},{i},{eps})")
    return SemiCubicalSet(levels, faces)


def semicubical_set_to_data(S: SemiCubicalSet) -> dict:
    faces: Dict[str, Dict[str, str]] = {}
    for (x, i, eps), y in S.faces.items():
        faces.setdefault(x, {})[f"{i},{eps}"] = y
    return {"type": "semicubical-set",
            "levels": [list(l) for l in S.levels],
            "faces": faces}


def parse_cubical_map(data) -> CubicalMap:
    """Read a cubical-map document with inlined source and target sets."""
    _check_type(data, "cubical-map")
    source = parse_cubical_set(_field(data, "source", dict, "cubical-map"))
    target = parse_cubical_set(_field(data, "target", dict, "cubical-map"))
    assignment = {}
    for gen, key in _field(data, "assignment", dict, "cubical-map").items():
        if gen not in source.generators:
            raise FormatError(f"assignment for unknown generator {gen!r}")
        key = _str(key, f"assignment of {gen!r}")
        try:
            assignment[gen] = target.cube_from_key(source.generators[gen], key)
        except ValueError as e:
            raise FormatError(f"assignment of {gen!r}: {e}") from None
    return CubicalMap(source, target, assignment)


def cubical_map_to_data(f: CubicalMap) -> dict:
    return {"type": "cubical-map",
            "source": cubical_set_to_data(f.source),
            "target": cubical_set_to_data(f.target),
            "assignment": {g: c.key() for g, c in f.assignment.items()}}


# -------------------------------------------------------------- cube tables

def parse_cubes_table(data) -> CubesTable:
    """Read a cubes-table document with resolved index tables."""
    _check_type(data, "cubes-table")
    top = _field(data, "top", int, "cubes-table")
    if top < 0:
        raise FormatError(f"cubes-table: top is {top}, must be nonnegative")
    keys_raw = _field(data, "keys", list, "cubes-table")
    if len(keys_raw) != top + 1:
        raise FormatError(f"cubes-table: expected {top + 1} key levels, "
                          f"got {len(keys_raw)}")
    keys = []
    for n, level in enumerate(keys_raw):
        if not isinstance(level, list) or not all(isinstance(k, str) for k in level):
            raise FormatError(f"cubes-table: key level {n} must be a list of strings")
        keys.append(list(level))
    deg_raw = _field(data, "degenerate", list, "cubes-table")
    if len(deg_raw) != top + 1 or any(
            not isinstance(l, list) or len(l) != len(keys[n])
            or not all(isinstance(b, bool) for b in l)
            for n, l in enumerate(deg_raw)):
        raise FormatError("cubes-table: degenerate flags must mirror the key levels")
    degenerate = [list(l) for l in deg_raw]

    def index_list(raw, length, lower, where):
        if not isinstance(raw, list) or len(raw) != length:
            raise FormatError(f"cubes-table: {where} must list {length} indices")
        out = []
        for v in raw:
            v = _int(v, f"cubes-table: {where}")
            if not 0 <= v < lower:
                raise FormatError(f"cubes-table: {where} index {v} out of range")
            out.append(v)
        return tuple(out)

    face = {}
    faces_raw = _field(data, "faces", dict, "cubes-table")
    for sel, raw in faces_raw.items():
        n, i, eps = _selector(sel, 3, "cubes-table faces")
        if not (1 <= n <= top and 1 <= i <= n and eps in (0, 1)):
            raise FormatError(f"cubes-table: face selector {sel!r} out of range")
        face[(n, i, eps)] = index_list(raw, len(keys[n]), len(keys[n - 1]),
                                       f"face table {sel}")
    degen_map = {}
    degens_raw = _field(data, "degens", dict, "cubes-table")
    for sel, raw in degens_raw.items():
        m, i = _selector(sel, 2, "cubes-table degens")
        if not (0 <= m < top and 1 <= i <= m + 1):
            raise FormatError(f"cubes-table: degeneracy selector {sel!r} out of range")
        degen_map[(m, i)] = index_list(raw, len(keys[m]), len(keys[m + 1]),
                                       f"degeneracy table {sel}")
    elements = [list(level) for level in keys]
    return CubesTable(top, keys, elements, degenerate, face, degen_map)


def cubes_table_to_data(T: CubesTable) -> dict:
    return {"type": "cubes-table",
            "top": T.top,
            "keys": [list(level) for level in T.keys],
            "degenerate": [[bool(b) for b in level] for level in T.degenerate],
            "faces": {f"{n},{i},{eps}": list(col)
                      for (n, i, eps), col in T.face.items()},
            "degens": {f"{m},{i}": list(col)
                       for (m, i), col in T.degen_map.items()}}


# -------------------------------------------------------- coefficient systems

def parse_table_system(data, base: Optional[CubesTable] = None):
    """Read a table-system document; the base table is embedded or supplied.

    When both are present the embedded table must carry the same keys as the
    supplied one, so that documents cannot silently retarget a computation.
    """
    _check_type(data, "table-system")
    variance = _field(data, "variance", str, "table-system")
    if variance not in ("contravariant", "covariant"):
        raise FormatError(f"table-system: unknown variance {variance!r}")
    if "base" in data:
        embedded = parse_cubes_table(data["base"])
        if base is not None and embedded.keys != base.keys:
            raise ValueError("table-system base does not match the given table")
        base = embedded
    if base is None:
        raise FormatError("table-system: no base table embedded or supplied")

    known = {(n, key) for n in range(base.top + 1) for key in base.keys[n]}
    ranks = {}
    for ns, level in _field(data, "ranks", dict, "table-system").items():
        (n,) = _selector(ns, 1, "table-system ranks")
        if not isinstance(level, dict):
            raise FormatError(f"table-system: ranks[{ns!r}] must map keys to integers")
        for key, r in level.items():
            if (n, key) not in known:
                raise FormatError(f"table-system: rank for unknown dim-{n} cube {key!r}")
            ranks[(n, key)] = _int(r, f"rank of {key!r}")

    contra = variance == "contravariant"

    def expect(src_rank, dst_rank):
        return (dst_rank, src_rank) if contra else (src_rank, dst_rank)

    faces = {}
    for sel, level in _field(data, "faces", dict, "table-system").items():
        n, i, eps = _selector(sel, 3, "table-system faces")
        if not (1 <= n <= base.top and 1 <= i <= n and eps in (0, 1)):
            raise FormatError(f"table-system: face selector {sel!r} out of range")
        if not isinstance(level, dict):
            raise FormatError(f"table-system: faces[{sel!r}] must map keys to matrices")
        for key, rows in level.items():
            if (n, key) not in known:
                raise FormatError(f"table-system: face matrix for unknown cube {key!r}")
            fkey = base.key(n - 1, base.face_index(n, i, eps, base.index[n][key]))
            if (n, key) in ranks and (n - 1, fkey) in ranks:
                want = expect(ranks[(n, key)], ranks[(n - 1, fkey)])
                faces[(n, i, eps, key)] = _matrix(
                    rows, want[0], want[1], f"face matrix ({sel}) at {key!r}")
            else:
                raise FormatError(f"table-system: face matrix at {key!r} has no "
                                  f"ranks to check against")
    degens = {}
    for sel, level in _field(data, "degens", dict, "table-system").items():
        m, i = _selector(sel, 2, "table-system degens")
        if not (0 <= m < base.top and 1 <= i <= m + 1):
            raise FormatError(f"table-system: degeneracy selector {sel!r} out of range")
        if not isinstance(level, dict):
            raise FormatError(f"table-system: degens[{sel!r}] must map keys to matrices")
        for key, rows in level.items():
            if (m, key) not in known:
                raise FormatError(f"table-system: degeneracy matrix for unknown cube {key!r}")
            skey = base.key(m + 1, base.degeneracy_index(m, i, base.index[m][key]))
            if (m, key) in ranks and (m + 1, skey) in ranks:
                want = expect(ranks[(m, key)], ranks[(m + 1, skey)])
                degens[(m, i, key)] = _matrix(
                    rows, want[0], want[1], f"degeneracy matrix ({sel}) at {key!r}")
            else:
                raise FormatError(f"table-system: degeneracy matrix at {key!r} has "
                                  f"no ranks to check against")
    cls = ContravariantSystem if contra else CovariantSystem
    return cls(base, ranks, faces, degens)


def table_system_to_data(F) -> dict:
    ranks: Dict[str, Dict[str, int]] = {}
    for (n, key), r in F.ranks.items():
        ranks.setdefault(str(n), {})[key] = r
    faces: Dict[str, Dict[str, list]] = {}
    for (n, i, eps, key), m in F.face.items():
        faces.setdefault(f"{n},{i},{eps}", {})[key] = _matrix_rows(m)
    degens: Dict[str, Dict[str, list]] = {}
    for (m_, i, key), m in F.degen.items():
        degens.setdefault(f"{m_},{i}", {})[key] = _matrix_rows(m)
    return {"type": "table-system",
            "variance": F.variance,
            "base": cubes_table_to_data(F.base),
            "ranks": ranks,
            "faces": faces,
            "degens": degens}


def parse_local_system(data, X: PresentedCubicalSet, top: int):
    """Read a local-system document and build it on the expansion of X.

    Document-level defects raise FormatError; unimodularity and functoriality
    failures surface as the builder's ValueError.
    """
    _check_type(data, "local-system")
    rank = _field(data, "rank", int, "local-system")
    variance = _field(data, "variance", str, "local-system")
    if variance not in ("contravariant", "covariant"):
        raise FormatError(f"local-system: unknown variance {variance!r}")
    mats = {}
    for gen, table in _field(data, "faces", dict, "local-system").items():
        if gen not in X.generators:
            raise FormatError(f"local-system: face matrices for unknown generator {gen!r}")
        if not isinstance(table, dict):
            raise FormatError(f"local-system: faces of {gen!r} must map \"i,eps\" to matrices")
        for ie, rows in table.items():
            i, eps = _selector(ie, 2, f"local-system face of {gen!r}")
            mats[(gen, i, eps)] = _matrix(rows, rank, rank,
                                          f"face matrix of {gen!r} at ({i},{eps})")
    return local_system(X, top, rank, mats, variance)


def local_system_to_data(rank: int, variance: str,
                         gen_face_matrices: Dict[Tuple[str, int, int], IntMatrix]) -> dict:
    faces: Dict[str, Dict[str, list]] = {}
    for (gen, i, eps), m in gen_face_matrices.items():
        faces.setdefault(gen, {})[f"{i},{eps}"] = _matrix_rows(m)
    return {"type": "local-system", "rank": rank, "variance": variance,
            "faces": faces}


def parse_semicubical_system(data, S: SemiCubicalSet) -> SemiCubicalSystem:
    """Read a semicubical-system document against its carrier set."""
    _check_type(data, "semicubical-system")
    names = {x for level in S.levels for x in level}
    ranks = {}
    for name, r in _field(data, "ranks", dict, "semicubical-system").items():
        if name not in names:
            raise FormatError(f"semicubical-system: rank for unknown cube {name!r}")
        ranks[name] = _int(r, f"rank of {name!r}")
    face = {}
    for x, table in _field(data, "faces", dict, "semicubical-system").items():
        if x not in names:
            raise FormatError(f"semicubical-system: face matrices for unknown cube {x!r}")
        if not isinstance(table, dict):
            raise FormatError(f"semicubical-system: faces of {x!r} must map \"i,eps\" to matrices")
        for ie, rows in table.items():
            i, eps = _selector(ie, 2, f"semicubical-system face of {x!r}")
            try:
                y = S.face(x, i, eps)
            except ValueError:
                raise FormatError(f"semicubical-system: the set has no face "
                                  f"({x},{i},{eps})") from None
            if y not in ranks or x not in ranks:
                raise FormatError(f"semicubical-system: face matrix at {x!r} has no "
                                  f"ranks to check against")
            face[(x, i, eps)] = _matrix(rows, ranks[y], ranks[x],
                                        f"face matrix of {x!r} at ({i},{eps})")
    return SemiCubicalSystem(S, ranks, face)


def semicubical_system_to_data(F: SemiCubicalSystem) -> dict:
    faces: Dict[str, Dict[str, list]] = {}
    for (x, i, eps), m in F.face.items():
        faces.setdefault(x, {})[f"{i},{eps}"] = _matrix_rows(m)
    return {"type": "semicubical-system",
            "ranks": dict(F.ranks),
            "faces": faces}


def build_semicubical_system(data, S: SemiCubicalSet) -> SemiCubicalSystem:
    """Build a coefficient-system document against a semi-cubical carrier."""
    if not isinstance(data, dict):
        raise FormatError("a coefficient system document must be a JSON object")
    t = data.get("type")
    if t == "constant-system":
        rank = _field(data, "rank", int, "constant-system")
        if rank < 0:
            raise FormatError(f"constant-system: rank is {rank}, must be nonnegative")
        if data.get("variance", "contravariant") != "contravariant":
            raise ValueError("semi-cubical systems are contravariant")
        eye = IntMatrix.identity(rank)
        ranks = {x: rank for level in S.levels for x in level}
        face = {(x, i, eps): eye
                for n, level in enumerate(S.levels) if n >= 1
                for x in level
                for i in range(1, n + 1) for eps in (0, 1)}
        return SemiCubicalSystem(S, ranks, face)
    if t == "semicubical-system":
        return parse_semicubical_system(data, S)
    raise FormatError(f"not a semi-cubical coefficient document (type {t!r})")


def build_system(data, base: CubesTable,
                 presented: Optional[PresentedCubicalSet] = None):
    """Build whichever coefficient-system document this is against a carrier."""
    if not isinstance(data, dict):
        raise FormatError("a coefficient system document must be a JSON object")
    t = data.get("type")
    if t == "constant-system":
        rank = _field(data, "rank", int, "constant-system")
        variance = data.get("variance", "contravariant")
        if variance not in ("contravariant", "covariant"):
            raise FormatError(f"constant-system: unknown variance {variance!r}")
        if rank < 0:
            raise FormatError(f"constant-system: rank is {rank}, must be nonnegative")
        return constant_system(base, rank, variance)
    if t == "table-system":
        return parse_table_system(data, base)
    if t == "local-system":
        if presented is None:
            raise ValueError("a local-system document needs generator data; "
                             "a bare cubes table does not carry any")
        return parse_local_system(data, presented, base.top)
    raise FormatError(f"not a coefficient system document (type {t!r})")


# ---------------------------------------------------------------- categories

def parse_category(data) -> FiniteCategory:
    """Read a category document with explicit composition rows."""
    _check_type(data, "category")
    objects = _field(data, "objects", list, "category")
    if not all(isinstance(o, str) for o in objects):
        raise FormatError("category: objects must be strings")
    morphisms = {}
    for name, ends in _field(data, "morphisms", dict, "category").items():
        if (not isinstance(ends, list) or len(ends) != 2
                or not all(isinstance(e, str) for e in ends)):
            raise FormatError(f"category: morphism {name!r} needs [source, target]")
        morphisms[name] = (ends[0], ends[1])
    identities = {}
    for obj, name in _field(data, "identities", dict, "category").items():
        identities[obj] = _str(name, f"identity of {obj!r}")
    composition = {}
    for row in _field(data, "composition", list, "category"):
        if (not isinstance(row, list) or len(row) != 3
                or not all(isinstance(x, str) for x in row)):
            raise FormatError("category: composition rows are "
                              "[second, first, composite]")
        composition[(row[0], row[1])] = row[2]
    return FiniteCategory(objects, morphisms, composition, identities)


def category_to_data(C: FiniteCategory) -> dict:
    return {"type": "category",
            "objects": list(C.objects),
            "morphisms": {name: [src, dst]
                          for name, (src, dst) in C.morphisms.items()},
            "identities": dict(C.identities),
            "composition": sorted([second, first, result]
                                  for (second, first), result in C.composition.items())}


def parse_diagram(data, C: FiniteCategory) -> FiniteDiagram:
    """Read a diagram document against the category it lives on."""
    _check_type(data, "diagram")
    ranks = {}
    for obj, r in _field(data, "ranks", dict, "diagram").items():
        if obj not in C.objects:
            raise FormatError(f"diagram: rank for unknown object {obj!r}")
        ranks[obj] = _int(r, f"rank of {obj!r}")
    matrices = {}
    for name, rows in _field(data, "matrices", dict, "diagram").items():
        if name not in C.morphisms:
            raise FormatError(f"diagram: matrix for unknown morphism {name!r}")
        src, dst = C.morphisms[name]
        if src not in ranks or dst not in ranks:
            raise FormatError(f"diagram: matrix for {name!r} has no ranks "
                              f"to check against")
        matrices[name] = _matrix(rows, ranks[dst], ranks[src],
                                 f"matrix of {name!r}")
    return FiniteDiagram(C, ranks, matrices)


def diagram_to_data(F: FiniteDiagram) -> dict:
    return {"type": "diagram",
            "ranks": dict(F.ranks),
            "matrices": {name: _matrix_rows(m) for name, m in F.matrices.items()}}


# -------------------------------------------------------------------- groups

def parse_groups(data) -> Tuple[HomologyGroup, ...]:
    """Read a groups document back into graded group summaries."""
    _check_type(data, "groups")
    out = []
    for k, entry in enumerate(_field(data, "groups", list, "groups")):
        if not isinstance(entry, dict):
            raise FormatError(f"groups: entry {k} must be an object")
        betti = _field(entry, "betti", int, f"groups entry {k}")
        torsion_raw = _field(entry, "torsion", list, f"groups entry {k}")
        torsion = tuple(_int(d, f"groups entry {k} torsion") for d in torsion_raw)
        out.append(HomologyGroup(betti, torsion))
    return tuple(out)


def groups_to_data(groups, kind: str = "homology") -> dict:
    return {"type": "groups",
            "kind": kind,
            "groups": [{"betti": g.betti, "torsion": list(g.torsion)}
                       for g in groups]}


def format_groups(groups, kind: str = "homology") -> str:
    """One-line report: "H_0 = Z; H_1 = Z^2; H_2 = Z/3"."""
    mark = "H^" if kind == "cohomology" else "H_"
    return "; ".join(f"{mark}{k} = {g}" for k, g in enumerate(groups))
