"""Face-list text format and JSON helpers.

One face per line as three whitespace-separated positive integers, ``#``
comments, blank lines ignored, and ``edge a b`` lines for bare edges.
"""

from __future__ import annotations

import json
from dataclasses import is_dataclass
from fractions import Fraction
from pathlib import Path

from .complex import Complex2, ComplexError, build_complex


class ParseError(ComplexError):
    def __init__(self, message: str, line: int, column: int = 1, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column


def _int_token(tok: str, line: int, col: int, source: str) -> int:
    try:
        val = int(tok)
    except ValueError:
        raise ParseError(f"expected a positive integer, got {tok!r}", line, col, source) from None
    if val <= 0:
        raise ParseError(f"vertex ids must be positive, got {val}", line, col, source)
    return val


def parse_complex_text(text: str, source: str = "<input>") -> Complex2:
    faces: list[tuple[int, int, int]] = []
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, ...]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        toks = line.split()
        col = raw.find(toks[0]) + 1
        if toks[0] == "edge":
            if len(toks) != 3:
                raise ParseError("edge line needs exactly two vertices", lineno, col, source)
            a, b = (_int_token(t, lineno, raw.find(t) + 1, source) for t in toks[1:])
            if a == b:
                raise ParseError(f"degenerate edge {a} {b}", lineno, col, source)
            edges.append((a, b))
            continue
        if len(toks) != 3:
            raise ParseError(f"expected three vertices, got {len(toks)} tokens", lineno, col, source)
        fc = tuple(_int_token(t, lineno, raw.find(t) + 1, source) for t in toks)
        if len(set(fc)) != 3:
            raise ParseError(f"degenerate face {' '.join(toks)}", lineno, col, source)
        key = tuple(sorted(fc))
        if key in seen:
            raise ParseError(f"duplicate face {' '.join(toks)}", lineno, col, source)
        seen.add(key)
        faces.append(fc)  # type: ignore[arg-type]
    return build_complex(faces, edges)


def read_complex(path) -> Complex2:
    if str(path) == "-":
        import sys

        return parse_complex_text(sys.stdin.read(), "<stdin>")
    p = Path(path)
    return parse_complex_text(p.read_text(), str(p))


def format_complex(S: Complex2) -> str:
    lines = [f"{a} {b} {c}" for a, b, c in S.faces]
    lines += [f"edge {a} {b}" for a, b in S.bare_edges()]
    return "".join(line + "\n" for line in lines)


def write_complex(S: Complex2, path) -> None:
    Path(path).write_text(format_complex(S))


def rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def to_jsonable(obj):
    """Recursively convert results to JSON-ready values; fractions become ``"p/q"``."""
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, Complex2):
        return {"v": obj.v, "e": obj.e, "f": obj.f, "faces": [list(fc) for fc in obj.faces]}
    if isinstance(obj, bytes):
        return obj.decode()
    if is_dataclass(obj) and not isinstance(obj, type):
        return {k: to_jsonable(getattr(obj, k)) for k in obj.__dataclass_fields__}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [to_jsonable(x) for x in obj]
        return sorted(items, key=repr) if isinstance(obj, (set, frozenset)) else items
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"



# -- forbidden list directories --------------------------------------------------

MANIFEST = "manifest.json"


def save_forbidden_list(flist, directory) -> Path:
    """Write members as face-list files plus a JSON manifest."""
    from . import __version__

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    entries = []
    groups = [("L1", flist.members_L1, [None] * len(flist.members_L1)),
              ("Lprime", flist.members_Lprime, flist.labels_Lprime),
              ("L2", flist.members_L2, flist.labels_L2)]
    for group, members, labels in groups:
        for i, (S, label) in enumerate(zip(members, labels)):
            name = f"{group}_{i:05d}.txt"
            write_complex(S, d / name)
            entry = {"group": group, "file": name, "v": S.v, "f": S.f}
            if label is not None:
                entry["label"] = label.decode()
                entry["provenance"] = flist.provenance.get(label, {})
            entries.append(entry)
    manifest = {
        "version": __version__,
        "parameters": {"degree_bound": flist.degree_bound, "face_cap": flist.face_cap,
                       "sphere_budget": flist.sphere_budget},
        "complete": flist.complete,
        "partial": flist.partial,
        "counts": {"L1": len(flist.members_L1), "Lprime": len(flist.members_Lprime),
                   "L2": len(flist.members_L2)},
        "members": entries,
    }
    (d / MANIFEST).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return d


def load_forbidden_list(directory):
    from .patterns import ForbiddenList

    d = Path(directory)
    manifest = json.loads((d / MANIFEST).read_text())
    params = manifest["parameters"]
    fl = ForbiddenList(params["degree_bound"], params["face_cap"], params["sphere_budget"],
                       [], [], [], complete=manifest["complete"], partial=manifest["partial"])
    for entry in manifest["members"]:
        S = read_complex(d / entry["file"])
        label = entry.get("label", "").encode() or None
        if entry["group"] == "L1":
            fl.members_L1.append(S)
        elif entry["group"] == "Lprime":
            fl.members_Lprime.append(S)
            fl.labels_Lprime.append(label)
        else:
            fl.members_L2.append(S)
            fl.labels_L2.append(label)
        if label is not None:
            fl.provenance[label] = entry.get("provenance", {})
    return fl
