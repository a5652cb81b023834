"""Command-line entry point: ``sciprofile <command> [options]``.

Exit status is 0 on success, 1 when the input fails validation or an analysis
precondition, 2 on usage errors. Files are only ever written inside the output
directory (``--out``, falling back to ``$SCIPROFILE_OUT``).
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import ingest, mds, pca, render, report
from .core import SCOPUS27, WORLD_CODE, ProfileMatrix, validate_profile, world_profile
from .ingest import LoadingTable, ParseError

SHORT_HEADS = dict(zip(SCOPUS27.areas, (
    "agri", "arte", "biochem", "business", "chem-eng", "chemistry", "computer", "decision",
    "dentistry", "earth", "economics", "energy", "engineering", "environmental", "health",
    "immunology", "material", "mathematics", "medicine", "multidisciplinary", "neuroscience",
    "nursing", "pharma", "physics", "psychology", "social", "veterinary")))


class InputError(Exception):
    """Input rejected; reported on stderr with exit status 1."""


# ----------------------------------------------------------------------------
# helpers shared by commands

def _load_source(args):
    if args.fixture:
        return ingest.load_fixture(args.fixture)
    if args.input:
        data = ingest.read_matrix(args.input, args.kind)
        if args.scheme and data.scheme.name != args.scheme:
            raise InputError(f"{args.input}: header matches scheme {data.scheme.name!r}, "
                             f"not {args.scheme!r}")
        return data
    raise InputError("no input: give --input PATH or --fixture NAME")


def _load_matrix(args) -> ProfileMatrix:
    data = _load_source(args)
    if not isinstance(data, ProfileMatrix):
        raise InputError(f"fixture {args.fixture!r} is not a profile matrix")
    report_ = validate_profile(data)
    if not report_.ok:
        raise InputError("input failed validation:\n" + "\n".join(report_.lines()))
    return data.to_shares()


def _out_dir(args, required=False) -> Path | None:
    out = getattr(args, "out", None) or os.environ.get("SCIPROFILE_OUT")
    if out is None:
        if required:
            raise InputError("no output directory: use --out or set SCIPROFILE_OUT")
        return None
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit(out: Path | None, name: str, text: str, written: list[str] | None = None):
    if out is None:
        sys.stdout.write(text)
        return
    target = out / name
    target.write_text(text, encoding="utf-8", newline="")
    if written is not None:
        written.append(name)


def align_to_origin(model: pca.FactorModel, origin: dict[str, int]) -> tuple[pca.FactorModel, int]:
    """Reorder factor columns to best match a known grouping of the countries.

    ``origin`` maps labels to 1-based group numbers. Returns the reordered
    model and how many countries have their largest loading on their own
    group's factor.
    """
    k = model.k
    labels = [lab for lab in model.labels if lab in origin]
    rows = [model.labels.index(lab) for lab in labels]
    assigned = model.loadings[rows].argmax(axis=1)
    truth = [origin[lab] - 1 for lab in labels]
    best, best_perm = -1, tuple(range(k))
    for perm in itertools.permutations(range(k)):
        # perm[column] = group index
        hits = sum(perm[a] == t for a, t in zip(assigned, truth))
        if hits > best:
            best, best_perm = hits, perm
    order = [best_perm.index(g) for g in range(k)]
    aligned = pca.FactorModel(model.mode, model.k, model.labels, model.eigenvalues,
                              model.explained, model.loadings[:, order], model.rotated)
    return aligned, best


def _fit(args, matrix: ProfileMatrix) -> pca.FactorModel:
    return pca.extract_factors(matrix.without_world(), k=args.k, mode=args.mode,
                               rotate=not args.no_rotate)


def _embed(args, matrix: ProfileMatrix, model: pca.FactorModel | None) -> mds.Embedding:
    body = matrix.without_world()
    if args.space == "loadings":
        model = model or _fit(args, matrix)
        if args.no_poles:
            rows, labels = model.loadings, model.labels
        else:
            rows, labels = mds.add_factor_poles(model, None)
    else:
        rows, labels = body.values, body.codes
    d = mds.distance_matrix(rows, labels, args.metric)
    if args.variant == "classical":
        return mds.classical_mds(d)
    return mds.smacof(d, init=args.init, seed=args.seed)


# ----------------------------------------------------------------------------
# commands

def cmd_validate(args) -> int:
    data = _load_source(args)
    if isinstance(data, LoadingTable):
        print(f"ok\t{len(data)} rows x {data.k} factors")
        return 0
    if not isinstance(data, ProfileMatrix):
        print("ok\tprinted table")
        return 0
    result = validate_profile(data)
    for line in result.lines():
        print(line)
    print(f"{'ok' if result.ok else 'rejected'}\t{len(data)} rows, scheme {data.scheme.name}, "
          f"{len(result.errors)} errors, {len(result.warnings)} warnings")
    return 0 if result.ok else 1


def cmd_pca(args) -> int:
    model = _fit(args, _load_matrix(args))
    out = _out_dir(args)
    top = min(args.top, model.explained.size)
    _emit(out, "variance.tsv", pca.variance_table(model, top).to_tsv())
    _emit(out, "model.json", pca.model_to_json(model))
    return 0


def cmd_report(args) -> int:
    out = _out_dir(args)
    data = _load_source(args)
    if isinstance(data, LoadingTable):
        table = data
    else:
        matrix = _load_matrix(args)
        model = _fit(args, matrix)
        table = model.loading_table()
    _emit(out, "rankings.tsv", report.rankings_table(table).to_tsv())
    _emit(out, "membership.tsv", report.membership_table(table, args.theta).to_tsv())
    if not isinstance(data, LoadingTable):
        codes = matrix.codes
        world = matrix.row(WORLD_CODE) if WORLD_CODE in codes else world_profile(matrix)
        for f in range(1, table.k + 1):
            members = [c for c, _ in report.membership(table, f, args.theta)]
            t = report.profile_table(matrix, members, world, f"Factor {f}", SHORT_HEADS
                                     if matrix.scheme == SCOPUS27 else None)
            _emit(out, f"profile_f{f}.tsv", t.to_tsv())
    return 0


def cmd_mds(args) -> int:
    matrix = _load_matrix(args)
    e = _embed(args, matrix, None)
    _emit(_out_dir(args), "embedding.csv", e.to_csv())
    for note in e.diagnostics:
        print(f"note: {note}", file=sys.stderr)
    return 0


def cmd_map(args) -> int:
    matrix = _load_matrix(args)
    e = _embed(args, matrix, None)
    regions = {r.iso2: r.region for r in matrix.rows}
    names = {r.iso2: r.name for r in matrix.rows}
    out = _out_dir(args)
    svg = render.render_svg(e, regions, names=names, title="Map of countries")
    if out is None:
        sys.stdout.write(render.render_ascii(e, args.cols, args.rows))
    else:
        _emit(out, "map.svg", svg)
        _emit(out, "map.txt", render.render_ascii(e, args.cols, args.rows))
    return 0


def _variance_source(src: str, args):
    if src in ingest.FIXTURES:
        data = ingest.load_fixture(src)
        if isinstance(data, ProfileMatrix):
            return pca.extract_factors(data.without_world(), k=3)
        return data
    path = Path(src)
    if path.suffix == ".json":
        return pca.model_from_json(path.read_text(encoding="utf-8"))
    return pca.extract_factors(ingest.read_matrix(path).without_world(), k=3)


def cmd_compare(args) -> int:
    a, b = (_variance_source(s, args) for s in args.sources)
    table = report.compare_schemes(a, b, args.top, names=tuple(args.names))
    out = _out_dir(args)
    if out is None:
        sys.stdout.write(table.to_text())
    else:
        _emit(out, "scheme_comparison.tsv", table.to_tsv())
        _emit(out, "scheme_comparison.txt", table.to_text())
    return 0


def reproduce(out: Path) -> list[str]:
    """Run every bundled-fixture analysis and write the tables and figures into ``out``."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    written: list[str] = []

    def put(name, text):
        _emit(out, name, text, written)

    table1 = ingest.load_fixture("table1_world")
    put("table1_world.tsv", "area\tshare\n" + "".join(
        f"{a}\t{s:.1f}%\n" for a, s in zip(table1.scheme.areas, table1.rows[0].shares)))

    sjr = ingest.load_fixture("table2_sjr_variance")
    esi = ingest.load_fixture("table3_esi_variance")
    put("table2_sjr_variance.tsv", sjr.to_tsv())
    put("table3_esi_variance.tsv", esi.to_tsv())
    comparison = report.compare_schemes(sjr, esi, 3, names=("SJR", "ESI"))
    put("scheme_comparison.tsv", comparison.to_tsv())
    put("scheme_comparison.txt", comparison.to_text())

    annex_a = ingest.load_fixture("annexA_loadings")
    put("annexA_rankings.tsv", report.rankings_table(annex_a).to_tsv())
    members = report.membership_table(annex_a)
    put("annexA_membership.tsv", members.to_tsv())
    put("annexA_membership.txt", members.to_text())

    for f in (1, 2, 3):
        fixture = ingest.load_fixture(f"annexB_f{f}")
        world = fixture.row(WORLD_CODE)
        title = f"Factor {f} - {report.FACTOR_NAMES[f]}"
        t = report.profile_table(fixture, fixture.without_world().codes, world, title,
                                 SHORT_HEADS)
        put(f"annexB_f{f}_profile.tsv", t.to_tsv())
        put(f"annexB_f{f}_profile.txt", t.to_text())

    combined = ingest.load_fixture("annexB_all")
    validation = validate_profile(combined)
    put("annexB_validation.txt", "\n".join(validation.lines()) + "\n")
    body = combined.without_world()
    model, agree = align_to_origin(pca.extract_factors(body, k=3), ingest.annex_b_origin())
    put("annexB_model.json", pca.model_to_json(model))
    put("annexB_variance.tsv", pca.variance_table(model, 3, "Annex B countries").to_tsv())
    origin = ingest.annex_b_origin()
    lines = ["iso2\torigin\tassigned\tf1\tf2\tf3\tcommunality"]
    for lab, row, h in zip(model.labels, model.loadings, model.communalities):
        lines.append("\t".join([lab, str(origin[lab]), str(int(np.argmax(row)) + 1),
                                *(f"{v:.5f}" for v in row), f"{h:.5f}"]))
    lines.append(f"# {agree} of {len(model.labels)} countries load highest on their own table's factor")
    put("annexB_loadings.tsv", "\n".join(lines) + "\n")
    put("annexB_membership.tsv", report.membership_table(model.loading_table()).to_tsv())

    rows, labels = mds.add_factor_poles(model, None)
    d = mds.distance_matrix(rows, labels)
    e = mds.smacof(d)
    regions = {r.iso2: r.region for r in body.rows}
    names = {r.iso2: r.name for r in body.rows}
    put("annexB_embedding.csv", e.to_csv())
    put("annexB_map.svg", render.render_svg(e, regions, names=names, title="MDS map of countries"))
    put("annexB_map.txt", render.render_ascii(e, 72, 28))

    poles = mds.classical_mds(mds.distance_matrix(np.eye(3), mds.POLE_LABELS))
    put("factor_triangle.svg", render.render_svg(poles, {}, title="Three factors triangle"))
    put("factor_triangle.txt", render.render_ascii(poles, 40, 20))
    return written


def cmd_reproduce(args) -> int:
    out = _out_dir(args, required=True)
    for name in reproduce(out):
        print(out / name)
    return 0


# ----------------------------------------------------------------------------

def _input_options(p, matrix_only=False):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input", "-i", metavar="PATH", help="matrix CSV file")
    src.add_argument("--fixture", "-f", choices=ingest.FIXTURES, help="bundled published table")
    p.add_argument("--kind", choices=("shares", "counts"), default="shares")
    p.add_argument("--scheme", choices=("scopus27", "esi22", "custom"),
                   help="require the header to match this subject scheme")


def _model_options(p):
    p.add_argument("--k", default="3",
                   help="factor count, 'kaiser', or a cumulative percent such as '90%%' (default 3)")
    p.add_argument("--mode", choices=pca.MODES, default="q_mode")
    p.add_argument("--no-rotate", action="store_true", help="skip varimax")


def _map_options(p):
    p.add_argument("--metric", choices=("euclidean", "cosine"), default="euclidean")
    p.add_argument("--space", choices=("loadings", "profile"), default="loadings",
                   help="distances between factor loadings (with poles) or raw share profiles")
    p.add_argument("--variant", choices=("smacof", "classical"), default="smacof")
    p.add_argument("--init", choices=("classical", "random"), default="classical")
    p.add_argument("--seed", type=int, default=0, help="seed for --init random")
    p.add_argument("--no-poles", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sciprofile",
        description="Country subject-profile analysis: factor loadings, rankings, maps.")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    p = sub.add_parser("validate", help="check a matrix and list errors and warnings")
    _input_options(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pca", help="factor model (JSON) and variance table")
    _input_options(p)
    _model_options(p)
    p.add_argument("--top", type=int, default=3, help="rows in the variance table")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_pca)

    p = sub.add_parser("report", help="rankings, membership and profile tables")
    _input_options(p)
    _model_options(p)
    p.add_argument("--theta", type=float, default=report.MEMBERSHIP_THRESHOLD)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("mds", help="2-D embedding as label,x,y CSV")
    _input_options(p)
    _model_options(p)
    _map_options(p)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_mds)

    p = sub.add_parser("map", help="SVG map plus text preview")
    _input_options(p)
    _model_options(p)
    _map_options(p)
    p.add_argument("--cols", type=int, default=72)
    p.add_argument("--rows", type=int, default=28)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("compare", help="side-by-side explained variance of two analyses")
    p.add_argument("sources", nargs="*", default=["table2_sjr_variance", "table3_esi_variance"],
                   help="two variance fixtures, model JSON files or matrix CSV files")
    p.add_argument("--names", nargs=2, default=["SJR", "ESI"])
    p.add_argument("--top", type=int, default=3)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("reproduce", help="write all fixture-based tables and figures")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_reproduce)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "compare" and len(args.sources) != 2:
        parser.error("compare takes exactly two sources")
    if not 0.0 <= getattr(args, "theta", 0.0) <= 1.0:
        parser.error(f"--theta must be within [0, 1], got {args.theta}")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except (InputError, ParseError, pca.PreconditionError, ValueError, KeyError,
            IndexError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"sciprofile {args.command}: {msg}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())
