"""File formats: lattice snapshots (JSON), series/curvature tables (CSV).

All floats in JSON are written with 17 significant digits, which round-trips
exactly; output bytes depend only on the data, never on wall time.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

import numpy as np

from .lattice import NeckpinchLattice

FORMAT_VERSION = 1


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def emit_json(obj) -> str:
    """Deterministic JSON with .17g floats; keys keep insertion order."""
    out = []
    _emit(obj, out)
    return "".join(out)


def _emit(obj, out: list) -> None:
    if isinstance(obj, dict):
        out.append("{")
        for j, (k, v) in enumerate(obj.items()):
            if j:
                out.append(", ")
            out.append(json.dumps(str(k)))
            out.append(": ")
            _emit(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for j, v in enumerate(obj):
            if j:
                out.append(", ")
            _emit(v, out)
        out.append("]")
    elif isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, (float, np.floating)):
        out.append(fmt_float(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    else:
        out.append(json.dumps(obj))


def atomic_write_text(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def lattice_to_dict(lattice: NeckpinchLattice, t: float = 0.0) -> dict:
    left, right = lattice.end_treatment
    ends = left if left == right else [left, right]
    return {
        "format": FORMAT_VERSION,
        "t": float(t),
        "label": lattice.lobe_label,
        "n": lattice.n,
        "s": lattice.s,
        "a": lattice.a,
        "end_treatment": ends,
    }


def lattice_from_dict(data: dict) -> NeckpinchLattice:
    ends = data.get("end_treatment", "cap")
    if isinstance(ends, list):
        ends = tuple(ends)
    return NeckpinchLattice(
        n=int(data["n"]),
        s=np.asarray(data["s"], dtype=float),
        a=np.asarray(data["a"], dtype=float),
        end_treatment=ends,
        lobe_label=str(data.get("label", "initial")),
    )


def write_lattice(path: str, lattice: NeckpinchLattice, t: float = 0.0) -> None:
    atomic_write_text(path, emit_json(lattice_to_dict(lattice, t)) + "\n")


def read_lattice(path: str) -> NeckpinchLattice:
    with open(path) as f:
        return lattice_from_dict(json.load(f))


def read_lattice_time(path: str) -> float:
    with open(path) as f:
        return float(json.load(f).get("t", 0.0))


SERIES_HEADER = "t,lobe,s_min,rho_min,argmin,volume,max_abs_rc"


def series_csv(rows) -> str:
    lines = [SERIES_HEADER]
    for t, lobe, s_min, rho_min, argmin, volume, max_rc in rows:
        lines.append(",".join((
            repr(float(t)), str(lobe), repr(float(s_min)), repr(float(rho_min)),
            str(int(argmin)), repr(float(volume)), repr(float(max_rc)),
        )))
    return "\n".join(lines) + "\n"


CURVATURE_HEADER = "class_type,index,multiplicity,length,eps,A_or_V,K,R,Rc"


def curvature_csv(rows) -> str:
    lines = [CURVATURE_HEADER]
    for row in rows:
        cells = [str(row[0]), str(row[1]), str(row[2])]
        for v in row[3:]:
            cells.append("" if v is None else repr(float(v)))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


MERIDIAN_HEADER = "i,z,rho,embeddable"

FORMAN_HEADER = "u,v,w,rc_f"

CORRESPONDENCE_HEADER = ("edge_type,edge_index,vertex,neighbor_type,neighbor_index,"
                         "count,cos_sq_theta,eps_neighbor,cossq_eps,area_neighbor,"
                         "rc_drf,rc_f_induced")


def correspondence_csv(rows) -> str:
    lines = [CORRESPONDENCE_HEADER]
    for (et, ei, vtx, nt, ni, cnt, c2, epsn, ce, an, rcd, rcf) in rows:
        lines.append(",".join((
            et, str(ei), str(vtx), nt, str(ni), str(cnt), repr(float(c2)),
            repr(float(epsn)), repr(float(ce)), repr(float(an)),
            repr(float(rcd)), repr(float(rcf)),
        )))
    return "\n".join(lines) + "\n"
