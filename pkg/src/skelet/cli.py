"""Command line entry point: ``skelet run <job.json>``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import SkeletError
from .jobs import dumps, parse_job_text, report_document, run_job, with_overrides
from .mesh import export_mesh


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skelet", description="Skeleta of hypersurfaces from star triangulations.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a job file and write a JSON report")
    r.add_argument("job", help="path to the job JSON file")
    r.add_argument("--out", help="report path (default: stdout)")
    r.add_argument("--rank-cap", type=int, help="largest torus rank to decompose")
    r.add_argument("--cellularization-rounds", type=int, help="refinement round cap")
    r.add_argument("--allow-nonregular", action="store_true", default=None,
                   help="continue on non-regular triangulations, with a warning")
    r.add_argument("--export-off", metavar="PATH", help="write an OFF mesh of the lowest-level model built")
    return p


def _emit(doc: dict, out: str | None) -> None:
    text = dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    job = None
    try:
        job = parse_job_text(Path(args.job).read_text())
        job = with_overrides(job, rank_cap=args.rank_cap, cellularization_rounds=args.cellularization_rounds,
                             allow_nonregular=args.allow_nonregular)
        result = run_job(job)
        if args.export_off:
            model = next((result.models[k] for k in ("quotient", "skeleton", "hatted") if k in result.models), None)
            if model is None:
                result.payload["warnings"].append("no model available for mesh export")
            else:
                mesh = export_mesh(model, args.export_off)
                result.payload["mesh"] = {"vertices": len(mesh.vertices), "edges": len(mesh.edges),
                                          "triangles": len(mesh.triangles), "euler": mesh.euler_characteristic}
        _emit(report_document(result.payload), args.out)
        return 0
    except SkeletError as e:
        payload = {"input": job.to_dict() if job is not None else None,
                   "error": {"type": type(e).__name__, "message": str(e), "exit_code": e.exit_code}}
        _emit(report_document(payload), args.out)
        print(f"skelet: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"skelet: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
