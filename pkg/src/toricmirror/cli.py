"""Command line entry point: ``toricmirror {cohomology,amoeba,verify,trees}``."""
from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import cech, hms, simp, trees, tropical
from .catalog import CATALOG
from .chains import cohomology, cone_acyclic, verify_chain_map
from .lattice import FanError, ToricVariety, load_fan, polytope_from_support
from .svg import export_svg

OUTPUT_ENV = "TORICMIRROR_OUTPUT_DIR"
SCHEMA = 1


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    fan: Optional[str] = None
    bundles: list[tuple[int, ...]] = field(default_factory=list)
    box: Optional[int] = None
    format: str = "text"
    seed: int = 0
    output: Optional[str] = None
    psi: Optional[tuple[int, ...]] = None
    hms: bool = False
    model: bool = False
    samples: int = 100
    coeff_range: int = 2
    d: int = 4
    report: bool = False


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def load_variety(spec: str, psi: Optional[Sequence[int]] = None) -> ToricVariety:
    """A catalog name (``P2``, ``F1``, ...) or a path to a JSON fan file."""
    if spec in CATALOG and not Path(spec).exists():
        X = CATALOG[spec]()
        return X if psi is None else ToricVariety(X.fan, tuple(psi), X.name)
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"no fan file or catalog entry named {spec!r} "
                         f"(catalog: {', '.join(sorted(CATALOG))})")
    fan, file_psi = load_fan(path)
    return ToricVariety(fan, tuple(psi) if psi is not None else file_psi, path.stem)


def _output_path(name: str) -> Path:
    base = os.environ.get(OUTPUT_ENV)
    p = Path(name)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _emit(text: str, cfg: RunConfig, out) -> None:
    if cfg.output:
        _output_path(cfg.output).write_text(text)
    else:
        out.write(text)


# --- commands ----------------------------------------------------------------------

def _cohomology(cfg: RunConfig, out) -> int:
    X = load_variety(cfg.fan)
    if len(cfg.bundles) != 2:
        raise UsageError("cohomology needs exactly two --bundle arguments (source, target)")
    L0, L1 = cfg.bundles
    for L in (L0, L1):
        if len(L) != X.n_rays:
            raise UsageError(f"bundle {L} has {len(L)} entries; the fan has {X.n_rays} rays")
    certified = cfg.box is None
    if certified:
        gh = cech.graded_hom(X, L0, L1)
        pieces = gh.pieces
    else:
        pieces = {}
        for u in itertools.product(range(-cfg.box, cfg.box + 1), repeat=X.dim):
            h = cohomology(cech.cech_complex(X, L0, L1, u))
            if not h.is_zero:
                pieces[u] = h
    rows = [(u, k, pieces[u].rank(k), pieces[u].torsion_at(k))
            for u in sorted(pieces) for k in pieces[u].nonzero_degrees()]
    chi = sum(h.euler for h in pieces.values())
    if cfg.format == "json":
        doc = {
            "schema": SCHEMA,
            "variety": X.name,
            "source": list(L0),
            "target": list(L1),
            "certified": certified,
            "pieces": [{"weight": list(u), "degree": k, "rank": r, "torsion": list(t)}
                       for u, k, r, t in rows],
            "euler_characteristic": chi,
        }
        if certified:
            doc["certificate"] = [
                {"positive": sorted(c.positive), "feasible": c.feasible, "bounded": c.bounded,
                 "nonzero": c.nonzero, "lattice_points": c.points}
                for c in gh.certificate]
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", cfg, out)
        return 0
    lines = []
    if not certified:
        lines.append(f"WARNING: not certified; weights limited to the box [-{cfg.box}, {cfg.box}]^{X.dim}")
    lines.append(f"Hom({list(L0)}, {list(L1)}) on {X.name}")
    lines.append(f"{'weight':>16}  {'deg':>3}  {'rank':>4}  torsion")
    for u, k, r, t in rows:
        lines.append(f"{str(list(u)):>16}  {k:>3}  {r:>4}  {list(t) if t else '-'}")
    totals = {}
    for _, k, r, _t in rows:
        totals[k] = totals.get(k, 0) + r
    lines.append("total ranks: " + ", ".join(f"H^{k}={totals[k]}" for k in sorted(totals)) if totals
                 else "total ranks: all zero")
    lines.append(f"euler characteristic: {chi}")
    _emit("\n".join(lines) + "\n", cfg, out)
    return 0


def _amoeba(cfg: RunConfig, out) -> int:
    X = load_variety(cfg.fan, cfg.psi)
    W = tropical.mirror_polynomial(X.fan, X.psi)
    report = tropical.fano_diagnostic(X.fan, X.psi)
    fmt = cfg.format if cfg.format != "text" else "svg"
    if fmt == "svg":
        if X.dim != 2:
            raise UsageError("SVG output needs a two dimensional fan; use --format json")
        svg = export_svg(tropical.amoeba_skeleton_2d(W), polytope_from_support(X.fan, X.psi))
        target = cfg.output or f"{X.name}-amoeba.svg"
        path = _output_path(target)
        path.write_text(svg)
        out.write(f"wrote {path}\n")
    else:
        doc = tropical.regions_to_json(W)
        doc["diagnostic"] = {
            "verdict": report.verdict,
            "bounded_regions": [list(r.alpha) for r in report.bounded],
            "c0_equals_polytope": report.c0_equals_polytope,
            "maximal_subdivision": report.maximal,
            "warnings": report.warnings,
        }
        if X.dim == 2:
            sk = tropical.amoeba_skeleton_2d(W)
            doc["skeleton"] = {
                "vertices": [[str(x) for x in v] for v in sk.vertices],
                "edges": [[[str(x) for x in a], [str(x) for x in b]] for a, b, _ in sk.edges],
                "rays": [[[str(x) for x in p], list(dv)] for p, dv, _ in sk.rays],
            }
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", cfg, out)
    out.write(f"diagnostic: {report.verdict}\n")
    for w in report.warnings:
        out.write(f"warning: {w}\n")
    return 0


def _verify(cfg: RunConfig, out) -> int:
    X = load_variety(cfg.fan)
    run_hms = cfg.hms or not cfg.model
    run_model = cfg.model or not cfg.hms
    failures = 0
    if run_hms:
        zero = (0,) * X.n_rays
        rep = hms.ModelReport()
        r = cfg.coeff_range
        for c in itertools.product(range(-r, r + 1), repeat=X.n_rays):
            for u in cech.graded_hom(X, zero, c).weights():
                hms.compare_models(X, zero, c, u, report=rep)
                if not rep.exact:
                    break
            if not rep.exact:
                break
        out.write(f"compare_models: {rep.status} "
                  f"({', '.join(f'{k}={v}' for k, v in sorted(rep.checked.items()))})\n")
        failures += not rep.exact
        ax = hms.dg_axioms_check([X], cfg.samples, seed=cfg.seed)
        for name in hms.AXIOMS:
            out.write(f"  {name}: {ax.passed.get(name, 0)} passed, {ax.failed.get(name, 0)} failed\n")
        if ax.first_failure:
            out.write(f"  first failure: {ax.first_failure}\n")
        failures += not ax.ok
    if run_model:
        checks = []
        for d in range(4):
            checks.append((f"square Delta^{d}", simp.square_discrepancy(simp.standard_simplex(d))))
        for d in range(5):
            checks.append((f"trichotomy Delta^{d}", simp.trichotomy_discrepancy(d)))
        qb = simp.barycentric(X.poset)
        checks.append((f"square Q_b({X.name})", simp.square_discrepancy(qb)))
        f = simp.cell_to_simp_map(qb)
        ok = bool(verify_chain_map(f)) and cone_acyclic(f)
        checks.append((f"cell->simp {X.name}", None if ok else "not a quasi-isomorphism"))
        for name, msg in checks:
            out.write(f"{name}: {'ok' if msg is None else 'FAIL ' + msg}\n")
            failures += msg is not None
    out.write("verify: " + ("all checks passed" if not failures else f"{failures} failing suite(s)") + "\n")
    return 1 if failures else 0


def _trees(cfg: RunConfig, out) -> int:
    d = cfg.d
    tri = trees.enumerate_ribbon_trees(d)
    allt = trees.enumerate_ribbon_trees(d, trivalent_only=False)
    facets = trees.stasheff_facets(d)
    out.write(f"d = {d}\n")
    out.write(f"trivalent ribbon trees: {len(tri)} (Catalan({d - 1}) = {trees.catalan(d - 1)})\n")
    out.write(f"all stable ribbon trees: {len(allt)}\n")
    out.write(f"Stasheff facets: {len(facets)} (d(d-1)/2 - 1 = {d * (d - 1) // 2 - 1})\n")
    balance = all(trees.check_balance(t) for t in allt)
    out.write(f"edge-label balance: {'ok' if balance else 'FAIL'}\n")
    failures = not balance
    if d >= 3:
        walls = trees.wall_crossing_check(d)
        bad = [w for w in walls if not w.ok]
        out.write(f"wall crossing: {len(walls) - len(bad)}/{len(walls)} walls pass\n")
        failures = failures or bool(bad)
    if cfg.report:
        out.write("facets (d1, d2, i):\n")
        for f in facets:
            out.write(f"  {f}\n")
        out.write("shrub orientations (tree: sign, coordinate edges):\n")
        for t in tri:
            o = trees.shrub_orientation(t)
            out.write(f"  {_shape(t)}: {o.sign:+d} {list(o.spans)}\n")
        strata = trees.shrub_boundary_types(d)
        out.write("shrub boundary, horizontal: " + ", ".join(
            f"Part({d},{k})={len(v)}" for k, v in sorted(strata.horizontal.items()))
            + " + all-infinite section\n")
        out.write(f"shrub boundary, vertical: {[list(c) for c in strata.vertical]}\n")
    return 1 if failures else 0


def _shape(t) -> str:
    if trees.is_leaf(t):
        return "*"
    return "(" + " ".join(_shape(c) for c in t) + ")"


COMMANDS = {"cohomology": _cohomology, "amoeba": _amoeba, "verify": _verify, "trees": _trees}


def run(cfg: RunConfig, out=None) -> int:
    return COMMANDS[cfg.command](cfg, out or sys.stdout)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricmirror",
                                description="Combinatorial mirror symmetry for smooth toric varieties.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cohomology", help="graded Hom between two line bundles")
    c.add_argument("--fan", required=True, help="fan JSON file or catalog name")
    c.add_argument("--bundle", action="append", type=_ints, default=[], required=True,
                   help="support function coefficients, comma separated; give twice")
    c.add_argument("--box", type=int, help="scan weights in a box instead of the certified chambers")
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.add_argument("--output", help=f"write to this file (relative to ${OUTPUT_ENV} if set)")

    a = sub.add_parser("amoeba", help="tropical amoeba of the mirror and the Fano diagnostic")
    a.add_argument("--fan", required=True)
    a.add_argument("--psi", type=_ints, help="override the fan file's support function")
    a.add_argument("--format", choices=["svg", "json"], default="svg")
    a.add_argument("--output")

    v = sub.add_parser("verify", help="model comparison, DG axioms and local model suites")
    v.add_argument("--fan", required=True)
    v.add_argument("--hms", action="store_true", help="only the model comparison and DG axioms")
    v.add_argument("--model", action="store_true", help="only the local model suites")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--range", dest="coeff_range", type=int, default=2,
                   help="bundle coefficients range over [-R, R]")

    t = sub.add_parser("trees", help="ribbon tree counts and sign checks")
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--report", action="store_true")
    return p


def _glue_negative(argv: list[str]) -> list[str]:
    """Let ``--bundle -3,0`` through argparse as ``--bundle=-3,0``."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in ("--bundle", "--psi"):
            nxt = next(it, None)
            if nxt is not None and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == ","):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = _glue_negative(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items()
                       if k in RunConfig.__dataclass_fields__ and k != "bundles"})
    if args.command == "cohomology":
        cfg.bundles = list(args.bundle)
    try:
        return run(cfg)
    except (FanError, UsageError, trees.TreeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except cech.InconsistencyError as exc:
        print(f"inconsistent input: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
