"""Curve JSON and OBJ mesh formats."""

import json
import logging
from pathlib import Path

import numpy as np

from weakplateau.core.geometry import DiskMesh, JordanCurve, TriMesh
from weakplateau.core.meshing import boundary_loops
from weakplateau.errors import MalformedObj, SchemaError

log = logging.getLogger(__name__)

CURVE_FORMAT = "plateau-curve/1"


# Curves

def _line_of(text: str, key: str):
    at = text.find(f'"{key}"')
    return text.count("\n", 0, at) + 1 if at >= 0 else None


def curve_from_dict(data: dict, text: str = "") -> JordanCurve:
    if not isinstance(data, dict):
        raise SchemaError("top level must be an object", line=1)
    for key in ("format", "closed", "vertices"):
        if key not in data:
            raise SchemaError("missing required field", field=key, line=1)
    if data["format"] != CURVE_FORMAT:
        raise SchemaError(f"unsupported format {data['format']!r}", field="format", line=_line_of(text, "format"))
    if data["closed"] is not True:
        raise SchemaError("only closed curves are supported", field="closed", line=_line_of(text, "closed"))
    raw = data["vertices"]
    if not isinstance(raw, list):
        raise SchemaError("vertices must be a list", field="vertices", line=_line_of(text, "vertices"))
    base = _line_of(text, "vertices") or 1
    for i, v in enumerate(raw):
        ok = (
            isinstance(v, list)
            and len(v) == 3
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
        )
        if not ok:
            raise SchemaError("each vertex must be three numbers", field=f"vertices[{i}]", line=base + 1 + i)
    if len(raw) < 3:
        raise SchemaError("a curve needs at least 3 vertices", field="vertices", line=base)
    return JordanCurve(np.array(raw, dtype=float))


def read_curve(path) -> JordanCurve:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg}", line=e.lineno) from e
    return curve_from_dict(data, text)


def curve_to_text(curve: JordanCurve) -> str:
    """One vertex per line; floats in repr form so they round-trip exactly."""
    rows = ",\n".join(f"    [{x!r}, {y!r}, {z!r}]" for x, y, z in curve.vertices.tolist())
    return f'{{\n  "format": "{CURVE_FORMAT}",\n  "closed": true,\n  "vertices": [\n{rows}\n  ]\n}}\n'


def write_curve(path, curve: JordanCurve) -> Path:
    path = Path(path)
    path.write_text(curve_to_text(curve))
    return path


# Meshes

def write_mesh(path, mesh: TriMesh, header: dict = None) -> Path:
    """OBJ with a `#` comment header, %.17g coordinates and 1-based faces."""
    path = Path(path)
    lines = [f"# weakplateau mesh: {mesh.label or path.stem}"]
    for key, value in (header or {}).items():
        lines.append(f"# {key}: {json.dumps(value, sort_keys=True, default=str)}")
    lines += [f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in mesh.vertices.tolist()]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.triangles.tolist()]
    path.write_text("\n".join(lines) + "\n")
    return path


def _face_index(token: str, count: int, lineno: int) -> int:
    try:
        k = int(token.split("/")[0])
    except ValueError:
        raise MalformedObj(f"bad face index {token!r}", line=lineno)
    k = k - 1 if k > 0 else count + k
    if not 0 <= k < count:
        raise MalformedObj(f"face index {token} out of range", line=lineno)
    return k


def read_mesh(path):
    """Returns (TriMesh, header) where header holds the parsed `# key: value` comments."""
    path = Path(path)
    verts, faces, header = [], [], {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if sep and lineno > 1:
                try:
                    header[key.strip()] = json.loads(value)
                except json.JSONDecodeError:
                    header[key.strip()] = value.strip()
            continue
        tag, *rest = line.split()
        if tag == "v":
            if len(rest) < 3:
                raise MalformedObj("vertex needs three coordinates", line=lineno)
            try:
                verts.append([float(x) for x in rest[:3]])
            except ValueError:
                raise MalformedObj(f"bad vertex {raw!r}", line=lineno)
        elif tag == "f":
            if len(rest) != 3:
                raise MalformedObj(f"only triangles are supported, got a {len(rest)}-gon", line=lineno)
            faces.append([_face_index(t, len(verts), lineno) for t in rest])
        elif tag in ("vn", "vt", "o", "g", "s", "usemtl", "mtllib"):
            continue
        else:
            raise MalformedObj(f"unknown statement {tag!r}", line=lineno)
    if not faces:
        raise MalformedObj("no faces")
    label = path.stem
    return TriMesh(np.array(verts, dtype=float), np.array(faces, dtype=np.int64), label=label), header


def as_disk(mesh: TriMesh) -> DiskMesh:
    """The mesh as a DiskMesh when it has exactly one boundary loop."""
    loops = boundary_loops(mesh.triangles)
    if len(loops) != 1:
        raise MalformedObj(f"expected a disk with one boundary loop, found {len(loops)}")
    return DiskMesh(mesh.vertices, mesh.triangles, label=mesh.label, boundary_loop=np.asarray(loops[0]))
