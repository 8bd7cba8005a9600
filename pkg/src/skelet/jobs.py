"""Job files and report documents.

Numbers are exact: integers beyond the 53-bit safe range travel as decimal
strings and rationals as ``"p/q"`` strings in lowest terms.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from typing import Any

import jsonschema

from . import __version__
from .degeneration import classify_divisors, overgraph_cone, restrict_polynomial
from .errors import JobParseError, NonRegularTriangulation, OriginMissing
from .homology import HomologyResult, homology
from .maps import DEFAULT_ROUNDS
from .polytope import DEFAULT_DIMENSION_CAP, LatticePolytope, RationalCone, normalized_volume
from .skeleton import build_hatted, build_quotient_skeleton, build_skeleton, euler_census, quotient_euler
from .torus import DEFAULT_RANK_CAP
from .triangulation import (
    FarkasWitness,
    StarTriangulation,
    generate_star_triangulation,
    validate_triangulation,
    verify_certificate,
)

SAFE = 2 ** 53
OUTPUTS = ("hatted", "skeleton", "quotient", "degeneration")
REPORT_FORMAT = "skelet-report/1"


def encode_int(n: int) -> int | str:
    return n if -SAFE < n < SAFE else str(n)


def encode_rational(q) -> int | str:
    q = Fraction(q)
    return encode_int(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def decode_int(x, where: str = "") -> int:
    if isinstance(x, bool):
        raise JobParseError(f"{where}: expected an integer, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip(), 10)
        except ValueError:
            pass
    raise JobParseError(f"{where}: expected an integer, got {x!r}")


def decode_rational(x, where: str = "") -> Fraction:
    if isinstance(x, str) and "/" in x:
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise JobParseError(f"{where}: malformed rational {x!r}") from None
    return Fraction(decode_int(x, where))


def _point(p, where: str) -> tuple[int, ...]:
    return tuple(decode_int(x, f"{where}[{i}]") for i, x in enumerate(p))


def _enc_point(p) -> list:
    return [encode_int(int(x)) for x in p]


def load_schema() -> dict:
    return json.loads(resources.files("skelet").joinpath("job.schema.json").read_text())


@dataclass(frozen=True)
class JobSpec:
    """A parsed job; ``to_dict`` gives the canonical JSON form."""

    lattice_rank: int
    polytope: tuple[tuple[int, ...], ...]
    points: tuple[tuple[int, ...], ...] = ()
    triangulation: tuple[tuple[tuple[int, ...], ...], ...] | None = None
    heights: str | tuple[tuple[tuple[int, ...], Fraction], ...] = "squared-norm"
    seed: int = 0
    cone: str | tuple[tuple[int, ...], ...] | None = None
    outputs: tuple[str, ...] = OUTPUTS
    degeneration_heights: tuple[tuple[tuple[int, ...], Fraction], ...] | None = None
    polynomial: tuple[tuple[tuple[int, ...], Fraction], ...] | None = None
    rank_cap: int = DEFAULT_RANK_CAP
    dimension_cap: int = DEFAULT_DIMENSION_CAP
    cellularization_rounds: int = DEFAULT_ROUNDS
    allow_nonregular: bool = False

    @classmethod
    def from_dict(cls, d: Any) -> "JobSpec":
        try:
            jsonschema.validate(d, load_schema())
        except jsonschema.ValidationError as e:
            path = "/".join(str(x) for x in e.absolute_path) or "<root>"
            raise JobParseError(f"field {path}: {e.message}") from None
        r = decode_int(d["lattice_rank"], "lattice_rank")
        poly = tuple(sorted({_point(p, f"polytope[{i}]") for i, p in enumerate(d["polytope"])}))
        pts = tuple(sorted({_point(p, f"points[{i}]") for i, p in enumerate(d.get("points", []))}))
        for name, group in (("polytope", poly), ("points", pts)):
            for p in group:
                if len(p) != r:
                    raise JobParseError(f"field {name}: point {list(p)} does not have {r} coordinates")
        tri = None
        if d.get("triangulation") is not None:
            simp = []
            for i, s in enumerate(d["triangulation"]):
                simp.append(tuple(sorted(_point(p, f"triangulation[{i}][{j}]") for j, p in enumerate(s))))
            tri = tuple(sorted(set(simp)))
        h = d.get("heights", "squared-norm")
        if not isinstance(h, str):
            h = _table(h, "heights", "point", "value")
        cone = d.get("cone")
        if isinstance(cone, dict):
            cone = tuple(sorted({_point(g, f"cone/generators[{i}]") for i, g in enumerate(cone["generators"])}))
        outs = d.get("outputs", "all")
        outs = OUTPUTS if outs == "all" else tuple(o for o in OUTPUTS if o in set(outs))
        deg = d.get("degeneration") or {}
        caps = d.get("caps") or {}
        flags = d.get("flags") or {}
        return cls(
            lattice_rank=r,
            polytope=poly,
            points=pts,
            triangulation=tri,
            heights=h,
            seed=decode_int(d.get("seed", 0), "seed"),
            cone=cone,
            outputs=outs,
            degeneration_heights=_table(deg["heights"], "degeneration/heights", "point", "value") if "heights" in deg else None,
            polynomial=_table(deg["polynomial"], "degeneration/polynomial", "exponent", "coefficient") if "polynomial" in deg else None,
            rank_cap=decode_int(caps.get("rank", DEFAULT_RANK_CAP), "caps/rank"),
            dimension_cap=decode_int(caps.get("dimension", DEFAULT_DIMENSION_CAP), "caps/dimension"),
            cellularization_rounds=decode_int(caps.get("cellularization_rounds", DEFAULT_ROUNDS), "caps/cellularization_rounds"),
            allow_nonregular=bool(flags.get("allow_nonregular", False)),
        )

    def to_dict(self) -> dict:
        def tab(t, k, v):
            return [{k: _enc_point(p), v: encode_rational(x)} for p, x in t]

        out: dict[str, Any] = {
            "lattice_rank": self.lattice_rank,
            "polytope": [_enc_point(p) for p in self.polytope],
            "points": [_enc_point(p) for p in self.points],
            "triangulation": None if self.triangulation is None else [[_enc_point(p) for p in s] for s in self.triangulation],
            "heights": self.heights if isinstance(self.heights, str) else tab(self.heights, "point", "value"),
            "seed": encode_int(self.seed),
            "cone": self.cone if self.cone is None or isinstance(self.cone, str)
            else {"generators": [_enc_point(g) for g in self.cone]},
            "outputs": list(self.outputs),
            "degeneration": {},
            "caps": {"rank": self.rank_cap, "dimension": self.dimension_cap,
                     "cellularization_rounds": self.cellularization_rounds},
            "flags": {"allow_nonregular": self.allow_nonregular},
        }
        if self.degeneration_heights is not None:
            out["degeneration"]["heights"] = tab(self.degeneration_heights, "point", "value")
        if self.polynomial is not None:
            out["degeneration"]["polynomial"] = tab(self.polynomial, "exponent", "coefficient")
        return out


def _table(rows, where, k, v):
    seen = {}
    for i, row in enumerate(rows):
        p = _point(row[k], f"{where}[{i}]/{k}")
        if p in seen:
            raise JobParseError(f"{where}[{i}]: duplicate entry for {list(p)}")
        seen[p] = decode_rational(row[v], f"{where}[{i}]/{v}")
    return tuple(sorted(seen.items()))


def parse_job_text(text: str) -> JobSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise JobParseError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    return JobSpec.from_dict(data)


def _homology_dict(C, H: HomologyResult) -> dict:
    return {
        "cells": list(C.counts()),
        "betti": list(H.betti),
        "torsion": [list(t.invariant_factors) for t in H.torsion],
        "euler": {"cells": C.euler_characteristic(), "homology": H.euler_characteristic},
    }


def _regularity_dict(T: StarTriangulation) -> dict:
    reg = T.regularity
    if isinstance(reg, FarkasWitness):
        return {
            "regular": False,
            "farkas_witness": {
                "variables": [_enc_point(p) for p in reg.variables],
                "constraints": [[encode_rational(x) for x in row] for row in reg.constraints],
                "multipliers": [encode_rational(y) for y in reg.multipliers],
                "verified": reg.verify(),
            },
        }
    return {
        "regular": True,
        "certificate": [{"point": _enc_point(p), "value": encode_int(v)} for p, v in reg.values],
        "margin": encode_rational(reg.margin),
        "verified": verify_certificate(T, reg),
    }


def build_triangulation(job: JobSpec) -> StarTriangulation:
    P = LatticePolytope(job.polytope, dimension_cap=job.dimension_cap)
    if job.triangulation is not None:
        T = StarTriangulation(P, job.triangulation)
        T.discarded = ()
    else:
        if not P.contains((0,) * job.lattice_rank):
            raise OriginMissing("the polytope does not contain the origin")
        h = job.heights if isinstance(job.heights, str) else dict(job.heights)
        T = generate_star_triangulation(P, h, points=job.points, seed=job.seed)
    return T


def resolve_cone(job: JobSpec, T: StarTriangulation) -> RationalCone:
    r = job.lattice_rank
    if job.cone == "positive-orthant":
        return RationalCone.positive_orthant(r)
    if job.cone == "full-space":
        return RationalCone.full_space(r)
    if job.cone is not None:
        return RationalCone(job.cone, r, dimension_cap=job.dimension_cap)
    if T.origin_interior:
        return RationalCone.full_space(r)
    # no cone given and 0 on the boundary: use the cone spanned by Δ
    return RationalCone(T.polytope.vertices, r, dimension_cap=job.dimension_cap)


@dataclass
class RunResult:
    payload: dict
    models: dict = field(default_factory=dict)


def run_job(job: JobSpec) -> RunResult:
    """Run the pipeline and return the deterministic report payload."""
    T = build_triangulation(job)
    rep = validate_triangulation(T)
    warnings: list[str] = []
    payload: dict[str, Any] = {"input": job.to_dict()}
    payload["polytope"] = {
        "vertices": [_enc_point(v) for v in T.polytope.vertices],
        "normalized_volume": encode_int(normalized_volume(T.polytope)),
        "origin": "interior" if T.origin_interior else "boundary",
    }
    payload["triangulation"] = {
        "source": "given" if job.triangulation is not None else "generated",
        "maximal_simplices": [[_enc_point(p) for p in T.coords(s)] for s in T.maximal],
        "boundary_simplices": [[_enc_point(p) for p in T.coords(s)] for s in T.boundary_facets],
        "discarded_points": [_enc_point(p) for p in getattr(T, "discarded", ())],
        "validation": {"volume": encode_int(rep.volume), "maximal_simplices": rep.maximal_simplices,
                       "boundary_simplices": rep.boundary_simplices},
    }
    payload["regularity"] = _regularity_dict(T)
    if not T.is_regular:
        if not job.allow_nonregular:
            raise NonRegularTriangulation("triangulation is not regular (pass --allow-nonregular to continue)")
        warnings.append("triangulation is not regular: homotopy-equivalence guarantee void")
    models: dict[str, Any] = {}
    built: dict[str, Any] = {}
    if "hatted" in job.outputs:
        Hm = build_hatted(T)
        d = _homology_dict(Hm.complex, homology(Hm.complex))
        d["euler"]["census"] = euler_census(T, "hatted")
        models["hatted"] = d
        built["hatted"] = Hm
    if "skeleton" in job.outputs:
        Sm = build_skeleton(T, rank_cap=job.rank_cap)
        d = _homology_dict(Sm.complex, homology(Sm.complex))
        d["euler"]["census"] = euler_census(T, "skeleton")
        d["fiber_classes"] = len(Sm.arrangement.classes)
        models["skeleton"] = d
        built["skeleton"] = Sm
    if "quotient" in job.outputs:
        K = resolve_cone(job, T)
        Qm = build_quotient_skeleton(T, K, rank_cap=job.rank_cap, rounds=job.cellularization_rounds)
        d = _homology_dict(Qm.complex, homology(Qm.complex))
        d["euler"]["census"] = quotient_euler(T, K)
        d["cone_generators"] = [_enc_point(g) for g in K.generators]
        d["cellularization_rounds"] = Qm.rounds
        d["quotient_map_verified"] = True
        models["quotient"] = d
        built["quotient"] = Qm
        warnings.extend(w for w in Qm.warnings if w not in warnings)
        if not T.origin_interior and job.cone is None:
            warnings.append("origin on the boundary and no cone given: quotient uses the cone spanned by the polytope")
    if "degeneration" in job.outputs:
        models["degeneration"] = _degeneration(job, T, warnings)
    payload["models"] = models
    payload["warnings"] = warnings
    return RunResult(payload, built)


def _degeneration(job: JobSpec, T: StarTriangulation, warnings: list[str]) -> dict:
    if job.degeneration_heights is not None:
        h = dict(job.degeneration_heights)
    elif T.is_regular:
        h = T.regularity
    else:
        warnings.append("degeneration skipped: no convex heights for a non-regular triangulation")
        return {"skipped": True}
    G = overgraph_cone(T, h)
    D = classify_divisors(G, T)
    out = {
        "heights": [{"point": _enc_point(p), "value": encode_int(v)} for p, v in G.heights],
        "facets": [{"normal": _enc_point(f.normal), "generators": [_enc_point(p) for p in f.generators],
                    "contains_t": f.contains_t} for f in G.facets],
        "vertical": [[_enc_point(p) for p in s] for s in D.vertical],
        "horizontal": [[_enc_point(p) for p in s] for s in D.horizontal],
    }
    if job.polynomial is not None:
        f = dict(job.polynomial)
        out["restricted_polynomials"] = []
        for s in T.cells:
            fp = restrict_polynomial(f, T, T.coords(s))
            out["restricted_polynomials"].append({
                "simplex": [_enc_point(p) for p in fp.simplex],
                "constant": encode_rational(fp.constant),
                "terms": [{"exponent": _enc_point(m), "coefficient": encode_rational(a)} for m, a in fp.terms],
            })
    msg = "genericity of the hypersurface is not checked"
    if msg not in warnings:
        warnings.append(msg)
    return out


def report_document(payload: dict) -> dict:
    return {"format": REPORT_FORMAT, "payload": payload, "meta": {"tool": "skelet", "version": __version__}}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def with_overrides(job: JobSpec, **kw) -> JobSpec:
    kw = {k: v for k, v in kw.items() if v is not None}
    return replace(job, **kw)
