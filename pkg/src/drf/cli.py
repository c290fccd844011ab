"""Command-line driver.

Subcommands: init, evolve, curvature, resample, embed, forman, correspond.
Exit codes: 0 success, 1 domain error (machine-readable JSON on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .curvature import curvature_rows, ricci
from .embed import embed_meridian
from .errors import DrfError
from .flow import DEFAULT_PINCH_THRESHOLD, FlowConfig, evolve
from .forman import correspondence_rows, forman_all, graph_from_dict
from .lattice import build_lattice
from .profiles import ProfileSpec
from .remesh import resample
from . import io as dio


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="drf", description=__doc__)
    p.add_argument("--version", action="version", version=f"drf {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("init", help="generate an initial lattice from a profile")
    q.add_argument("--profile", required=True,
                   choices=["paper", "sphere", "cylinder", "table"])
    q.add_argument("--n", type=int, default=80, help="cross-section count (default 80)")
    q.add_argument("--r0", type=float, default=100.0, help="sphere radius (profile=sphere)")
    q.add_argument("--s", type=float, default=10.0, help="cylinder cross-section edge")
    q.add_argument("--a", type=float, default=1.0, help="cylinder axial edge")
    q.add_argument("--table", help="JSON file {'x': [...], 's': [...]} (profile=table)")
    q.add_argument("--ends", default="cap", choices=["cap", "mirror"],
                   help="end treatment (default cap)")
    q.add_argument("-o", "--output", required=True)

    q = sub.add_parser("evolve", help="run the flow with remeshing and surgery")
    q.add_argument("-i", "--input", required=True)
    q.add_argument("-o", "--outdir", required=True)
    q.add_argument("--dt", type=float, default=0.25)
    q.add_argument("--remesh-every", type=int, default=50)
    q.add_argument("--t-max", type=float, default=4000.0)
    q.add_argument("--step-max", type=int, default=200000)
    q.add_argument("--pinch-threshold", type=float, default=DEFAULT_PINCH_THRESHOLD,
                   help=f"waist edge length triggering surgery (default "
                        f"{DEFAULT_PINCH_THRESHOLD}, calibrated so the bundled "
                        f"dumbbell run pinches near t=183)")
    q.add_argument("--extinction-threshold", type=float, default=1.0,
                   help="stop a lobe once max edge length drops below this (default 1.0)")
    q.add_argument("--snapshot-every", type=int, default=100)
    q.add_argument("--threads", type=int, default=1,
                   help="deterministic parallel width for curvature assembly")
    q.add_argument("--surgery-method", default="icosa", choices=["icosa", "spherical"])
    q.add_argument("--stop-after-surgery", action="store_true")

    q = sub.add_parser("curvature", help="curvature field of a lattice, as CSV")
    q.add_argument("-i", "--input", required=True)
    q.add_argument("-o", "--output", required=True)
    q.add_argument("--threads", type=int, default=1)

    q = sub.add_parser("resample", help="spline-remesh a lattice")
    q.add_argument("-i", "--input", required=True)
    q.add_argument("--n", type=int, default=None, help="new section count (default: keep)")
    q.add_argument("-o", "--output", required=True)

    q = sub.add_parser("embed", help="meridian embedding (z, rho) as CSV")
    q.add_argument("-i", "--input", required=True)
    q.add_argument("-o", "--output", required=True)

    q = sub.add_parser("forman", help="Forman-Ricci curvature of a weighted graph")
    q.add_argument("-g", "--graph", required=True,
                   help="JSON: {'nodes': [{'id','w'}], 'edges': [{'u','v','w'}]}")
    q.add_argument("-o", "--output", required=True)

    q = sub.add_parser("correspond", help="flow-to-graph weight correspondence table")
    q.add_argument("-i", "--input", required=True)
    q.add_argument("-o", "--output", required=True)
    return p


def _cmd_init(args) -> int:
    if args.profile == "paper":
        spec = ProfileSpec.paper(n=args.n, end_treatment=args.ends)
    elif args.profile == "sphere":
        spec = ProfileSpec.round_sphere(args.r0, n=args.n, end_treatment=args.ends)
    elif args.profile == "cylinder":
        spec = ProfileSpec.cylinder(args.s, args.a, n=args.n, end_treatment=args.ends)
    else:
        with open(args.table) as f:
            tab = json.load(f)
        spec = ProfileSpec.table(tab["x"], tab["s"], n=args.n, end_treatment=args.ends)
    lat = build_lattice(spec)
    dio.write_lattice(args.output, lat, t=0.0)
    return 0


def _cmd_evolve(args) -> int:
    lat = dio.read_lattice(args.input)
    t0 = dio.read_lattice_time(args.input)
    if t0 != 0.0:
        # evolution time is measured from the snapshot's own clock
        pass
    config = FlowConfig(
        dt=args.dt, remesh_every=args.remesh_every, t_max=args.t_max,
        step_max=args.step_max, pinch_threshold=args.pinch_threshold,
        extinction_threshold=args.extinction_threshold,
        snapshot_every=args.snapshot_every, threads=args.threads,
        surgery_method=args.surgery_method,
        stop_after_surgery=args.stop_after_surgery,
    )
    started = time.time()
    result = evolve(lat, config)
    finished = time.time()

    os.makedirs(args.outdir, exist_ok=True)
    snapdir = os.path.join(args.outdir, "snapshots")
    os.makedirs(snapdir, exist_ok=True)
    dio.atomic_write_text(os.path.join(args.outdir, "series.csv"),
                          dio.series_csv(result.series))
    for snap in result.snapshots:
        d = dio.lattice_to_dict(snap["lattice"], t=snap["t"])
        d["reason"] = snap["reason"]
        dio.atomic_write_text(os.path.join(snapdir, f"{snap['seq']:04d}.json"),
                              dio.emit_json(d) + "\n")
    dio.atomic_write_text(os.path.join(args.outdir, "events.json"),
                          dio.emit_json({"format": dio.FORMAT_VERSION,
                                         "events": result.events}) + "\n")
    manifest = {
        "format": dio.FORMAT_VERSION,
        "tool_version": __version__,
        "config": {
            "dt": config.dt, "remesh_every": config.remesh_every,
            "t_max": config.t_max, "step_max": config.step_max,
            "pinch_threshold": config.pinch_threshold,
            "extinction_threshold": config.extinction_threshold,
            "snapshot_every": config.snapshot_every, "threads": config.threads,
            "surgery_method": config.surgery_method,
            "stop_after_surgery": config.stop_after_surgery,
        },
        "input_sha256": dio.sha256_file(args.input),
        "started_at": started,
        "finished_at": finished,
        "events_summary": {
            "surgeries": sum(1 for e in result.events if e["type"] == "surgery"),
            "remeshes": sum(1 for e in result.events if e["type"] == "remesh"),
            "extinctions": sum(1 for e in result.events if e["type"] == "extinction"),
            "aborts": sum(1 for e in result.events if e["type"] == "abort"),
            "lobe_steps": result.lobe_steps,
        },
    }
    dio.atomic_write_text(os.path.join(args.outdir, "manifest.json"),
                          dio.emit_json(manifest) + "\n")
    return 1 if any(e["type"] == "abort" for e in result.events) else 0


def _cmd_curvature(args) -> int:
    lat = dio.read_lattice(args.input)
    field = ricci(lat, threads=args.threads)
    dio.atomic_write_text(args.output, dio.curvature_csv(curvature_rows(field)))
    return 0


def _cmd_resample(args) -> int:
    lat = dio.read_lattice(args.input)
    t = dio.read_lattice_time(args.input)
    out = resample(lat, args.n)
    dio.write_lattice(args.output, out, t=t)
    return 0


def _cmd_embed(args) -> int:
    lat = dio.read_lattice(args.input)
    poly = embed_meridian(lat)
    lines = [dio.MERIDIAN_HEADER]
    emb = np.concatenate((poly.embeddable, [True]))  # per point: gap flag before it
    for i in range(lat.n):
        ok = bool(poly.embeddable[i - 1]) if i > 0 else True
        lines.append(f"{i + 1},{poly.z[i]!r},{poly.rho[i]!r},{int(ok)}")
    dio.atomic_write_text(args.output, "\n".join(lines) + "\n")
    return 0


def _cmd_forman(args) -> int:
    with open(args.graph) as f:
        graph = graph_from_dict(json.load(f))
    lines = [dio.FORMAN_HEADER]
    for u, v, w, rcf in forman_all(graph):
        lines.append(f"{u},{v},{w!r},{rcf!r}")
    dio.atomic_write_text(args.output, "\n".join(lines) + "\n")
    return 0


def _cmd_correspond(args) -> int:
    lat = dio.read_lattice(args.input)
    field = ricci(lat)
    dio.atomic_write_text(args.output,
                          dio.correspondence_csv(correspondence_rows(field)))
    return 0


_COMMANDS = {
    "init": _cmd_init,
    "evolve": _cmd_evolve,
    "curvature": _cmd_curvature,
    "resample": _cmd_resample,
    "embed": _cmd_embed,
    "forman": _cmd_forman,
    "correspond": _cmd_correspond,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return int(ex.code) if ex.code else 0
    try:
        return _COMMANDS[args.command](args)
    except DrfError as ex:
        sys.stderr.write(json.dumps(ex.payload()) + "\n")
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as ex:
        sys.stderr.write(json.dumps({"error": type(ex).__name__,
                                     "message": str(ex)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
