"""Flat-file formats for points, lines, planes, and set systems.

All files are UTF-8 text, one object per line.  Geometry files start with
the header "# field p n"; elements are written as their decimal indices.

    points     "x,y" or "x,y,z" (or a single index for subsets of the field)
    lines      "N a b" for y = a*x + b, "V c" for x = c
    planes     "P n1 n2 n3 rhs"
    set system "ground N" header, then one member per line as
               space-separated sorted indices (an empty line is the empty set)

The (p, n) pair alone pins the field because the modulus choice in
make_field is deterministic.
"""

from pathlib import Path

from .errors import ToolkitError
from .ffield import FieldSpec, make_field
from .geom import Line2, Plane3
from .setsys import SetSystem


class FormatError(ToolkitError):
    pass


def _header(fs: FieldSpec) -> str:
    return f"# field {fs.p} {fs.n}"


def _parse_header(line: str, path) -> FieldSpec:
    parts = line.split()
    if len(parts) != 4 or parts[0] != "#" or parts[1] != "field":
        raise FormatError(f"{path}: expected header '# field p n'")
    return make_field(int(parts[2]), int(parts[3]))


def save_points(path, fs: FieldSpec, points) -> None:
    lines = [_header(fs)]
    for pt in points:
        if isinstance(pt, int):
            pt = (pt,)
        lines.append(",".join(str(c) for c in pt))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_points(path) -> tuple[FieldSpec, list[tuple[int, ...]]]:
    raw = Path(path).read_text(encoding="utf-8").splitlines()
    if not raw:
        raise FormatError(f"{path}: empty file")
    fs = _parse_header(raw[0], path)
    pts = []
    for ln in raw[1:]:
        if not ln.strip():
            continue
        coords = tuple(int(c) for c in ln.split(","))
        if len(coords) not in (1, 2, 3):
            raise FormatError(f"{path}: point {ln!r} has bad dimension")
        for c in coords:
            if not 0 <= c < fs.q:
                raise FormatError(f"{path}: coordinate {c} outside GF({fs.q})")
        pts.append(coords)
    return fs, pts


def save_lines(path, fs: FieldSpec, lines) -> None:
    out = [_header(fs)]
    for ln in lines:
        if ln.kind == "V":
            out.append(f"V {ln.a}")
        else:
            out.append(f"N {ln.a} {ln.b}")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def load_lines(path) -> tuple[FieldSpec, list[Line2]]:
    raw = Path(path).read_text(encoding="utf-8").splitlines()
    if not raw:
        raise FormatError(f"{path}: empty file")
    fs = _parse_header(raw[0], path)
    lines = []
    for ln in raw[1:]:
        parts = ln.split()
        if not parts:
            continue
        if parts[0] == "V" and len(parts) == 2:
            lines.append(Line2("V", int(parts[1]), 0))
        elif parts[0] == "N" and len(parts) == 3:
            lines.append(Line2("N", int(parts[1]), int(parts[2])))
        else:
            raise FormatError(f"{path}: bad line record {ln!r}")
    return fs, lines


def save_planes(path, fs: FieldSpec, planes) -> None:
    out = [_header(fs)]
    for pl in planes:
        n = pl.normal
        out.append(f"P {n[0]} {n[1]} {n[2]} {pl.rhs}")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def load_planes(path) -> tuple[FieldSpec, list[Plane3]]:
    raw = Path(path).read_text(encoding="utf-8").splitlines()
    if not raw:
        raise FormatError(f"{path}: empty file")
    fs = _parse_header(raw[0], path)
    planes = []
    for ln in raw[1:]:
        parts = ln.split()
        if not parts:
            continue
        if parts[0] != "P" or len(parts) != 5:
            raise FormatError(f"{path}: bad plane record {ln!r}")
        normal = (int(parts[1]), int(parts[2]), int(parts[3]))
        planes.append(Plane3(normal, int(parts[4]), False))
    return fs, planes


def save_setsystem(path, system: SetSystem) -> None:
    out = [f"ground {system.ground_size}"]
    for i in range(len(system.family)):
        out.append(" ".join(str(e) for e in system.member_elements(i)))
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def load_setsystem(path) -> SetSystem:
    raw = Path(path).read_text(encoding="utf-8").split("\n")
    if raw and raw[-1] == "":
        raw = raw[:-1]  # trailing newline, not an empty member
    if not raw:
        raise FormatError(f"{path}: empty file")
    head = raw[0].split()
    if len(head) != 2 or head[0] != "ground":
        raise FormatError(f"{path}: expected header 'ground N'")
    ground = int(head[1])
    members = [[int(e) for e in ln.split()] for ln in raw[1:]]
    return SetSystem.from_sets(ground, members)
