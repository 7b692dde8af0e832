"""Command-line surface for the Nash blowup engine.

Matrices are read in the shared text format (one row per line, whitespace
separated, '#' comments); columns are the generators.  By default an
input matrix describes a cone sigma-dual in M (or, in nash mode, the
generators of a semigroup in M); pass --side N when the matrix lists
generators of sigma in N instead.
"""

import json
import sys

import click

from . import __version__
from .analysis import analyze as analyze_cone
from .blowup import (
    nash_children,
    nash_subdivision,
    normalized_nash_children,
    reeves_cone,
)
from .canonical import canonical_cone, canonical_semigroup
from .cones import Cone, dual_cone
from .digraph import (
    Complete,
    DigraphStore,
    export_dot,
    find_cycles,
    resolution_subgraph,
)
from .errors import NashToricError
from .linalg import IntMatrix, format_matrix, parse_matrix
from .sampling import sample_random
from .semigroups import AffineSemigroup, hilbert_basis, minimal_generators


def _read_matrix(path: str) -> IntMatrix:
    if path == "-":
        return parse_matrix(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def _cone_in_M(matrix: IntMatrix, side: str) -> Cone:
    cone = Cone(matrix)
    return dual_cone(cone) if side == "N" else cone


def _emit(as_json: bool, payload: dict, human: str) -> None:
    if as_json:
        click.echo(json.dumps(payload, sort_keys=True))
    else:
        click.echo(human)


def _load_or_create_store(path, mode, char, rank) -> DigraphStore:
    import os

    if path and os.path.exists(path):
        store = DigraphStore.load(path)
        if store.mode != mode or store.characteristic != char:
            raise NashToricError(
                f"store at {path} has mode={store.mode} characteristic="
                f"{store.characteristic}; flags disagree"
            )
        if rank is not None and store.rank != rank:
            raise NashToricError(f"store rank {store.rank} != input rank {rank}")
        return store
    return DigraphStore(mode, char, rank)


matrix_arg = click.argument("matrix_file", metavar="MATRIX")
side_opt = click.option(
    "--side",
    type=click.Choice(["M", "N"]),
    default="M",
    show_default=True,
    help="whether MATRIX generates sigma-dual in M or sigma in N",
)
char_opt = click.option(
    "--char", "characteristic", type=int, default=0, show_default=True,
    help="characteristic of the base field (0 or a prime)",
)
mode_opt = click.option(
    "--mode",
    type=click.Choice(["nash", "normalized"]),
    default="normalized",
    show_default=True,
)
json_opt = click.option("--json", "as_json", is_flag=True, help="machine output")


class _Cli(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except NashToricError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)


@click.group(cls=_Cli)
@click.version_option(version=__version__, prog_name="nashtoric")
def main():
    """Exact Nash blowups of affine toric varieties."""


@main.command()
@matrix_arg
@side_opt
@json_opt
def hilbert(matrix_file, side, as_json):
    """Hilbert basis of the cone generated by the columns of MATRIX."""
    C = _cone_in_M(_read_matrix(matrix_file), side)
    basis = hilbert_basis(C)
    M = IntMatrix.from_columns(basis)
    _emit(
        as_json,
        {"count": len(basis), "basis_columns": [list(b) for b in basis]},
        f"# {len(basis)} elements (columns)\n{format_matrix(M)}",
    )


@main.command()
@matrix_arg
@json_opt
def dual(matrix_file, as_json):
    """Extreme rays of the dual cone (columns)."""
    C = Cone(_read_matrix(matrix_file))
    D = dual_cone(C)
    M = IntMatrix.from_columns(D.rays)
    _emit(
        as_json,
        {"rays": [list(r) for r in D.rays]},
        format_matrix(M),
    )


@main.command()
@matrix_arg
@side_opt
@json_opt
@click.option(
    "--kind",
    type=click.Choice(["cone", "semigroup"]),
    default="cone",
    show_default=True,
    help="canonicalize the cone of the columns, or the semigroup they generate",
)
def canon(matrix_file, side, as_json, kind):
    """Canonical key modulo unimodular equivalence."""
    matrix = _read_matrix(matrix_file)
    if kind == "semigroup":
        key = canonical_semigroup(minimal_generators(matrix.columns()))
    else:
        key, _ = canonical_cone(_cone_in_M(matrix, side))
    _emit(
        as_json,
        {"key": key.serialization, "matrix": key.matrix.to_lists()},
        key.serialization,
    )


@main.command()
@matrix_arg
@side_opt
@mode_opt
@char_opt
@json_opt
def children(matrix_file, side, mode, characteristic, as_json):
    """One blowup step: the children of the cone or semigroup."""
    matrix = _read_matrix(matrix_file)
    if mode == "nash":
        if side == "N":
            raise NashToricError("nash mode takes semigroup generators in M")
        kids = nash_children(minimal_generators(matrix.columns()), characteristic)
        keys = [canonical_semigroup(k).serialization for k in kids]
        cols = [[list(g) for g in k.generators] for k in kids]
    else:
        kids = normalized_nash_children(_cone_in_M(matrix, side), characteristic)
        keys = [canonical_cone(k)[0].serialization for k in kids]
        cols = [[list(r) for r in k.rays] for k in kids]
    human = [f"# {len(kids)} children"]
    for key, c in zip(keys, cols):
        human.append(f"## {key}")
        human.append(format_matrix(IntMatrix.from_columns(c)))
    _emit(
        as_json,
        {"count": len(kids), "children": [{"key": k, "columns": c} for k, c in zip(keys, cols)]},
        "\n".join(human),
    )


@main.command()
@matrix_arg
@side_opt
@char_opt
@json_opt
def subdivide(matrix_file, side, characteristic, as_json):
    """Nash subdivision of sigma in N (maximal cones of the normal fan)."""
    matrix = _read_matrix(matrix_file)
    cone = Cone(matrix)
    sigma = cone if side == "N" else dual_cone(cone)
    fan = nash_subdivision(sigma, characteristic)
    human = [f"# {len(fan)} maximal cones"]
    for piece in fan:
        human.append("##")
        human.append(format_matrix(IntMatrix.from_columns(piece.rays)))
    _emit(
        as_json,
        {
            "count": len(fan),
            "maximal_cones": [[list(r) for r in piece.rays] for piece in fan],
        },
        "\n".join(human),
    )


@main.command()
@matrix_arg
@side_opt
@mode_opt
@char_opt
@json_opt
@click.option("--store", "store_path", type=click.Path(), default=None, help="persistent store file")
@click.option("--max-vertices", type=int, default=10**6, show_default=True)
@click.option("--max-seconds", type=float, default=86400.0, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
def explore(matrix_file, side, mode, characteristic, as_json, store_path, max_vertices, max_seconds, threads):
    """Breadth-first resolution subgraph of the input vertex."""
    matrix = _read_matrix(matrix_file)
    if mode == "nash":
        if side == "N":
            raise NashToricError("nash mode takes semigroup generators in M")
        start = minimal_generators(matrix.columns())
    else:
        start = _cone_in_M(matrix, side)
    store = _load_or_create_store(store_path, mode, characteristic, start.ambient_rank)
    status = resolution_subgraph(
        store,
        start,
        max_vertices=max_vertices,
        max_seconds=max_seconds,
        threads=threads,
    )
    if store_path:
        store.save(store_path)
    if isinstance(status, Complete):
        payload = {
            "status": "complete",
            "vertices": status.vertex_count,
            "edges": status.edge_count,
            "store_vertices": store.vertex_count(),
        }
        human = (
            f"complete: {status.vertex_count} vertices, {status.edge_count} edges"
            f" (store has {store.vertex_count()})"
        )
    else:
        payload = {
            "status": "budget-exhausted",
            "frontier": list(status.frontier),
            "store_vertices": store.vertex_count(),
        }
        human = f"budget exhausted: frontier of {len(status.frontier)} vertices"
    _emit(as_json, payload, human)


@main.command()
@click.option("--store", "store_path", type=click.Path(exists=True), required=True)
@click.option("--max-report", type=int, default=None)
@json_opt
def cycles(store_path, max_report, as_json):
    """Directed cycles (one per nontrivial SCC, epsilon loop excluded)."""
    store = DigraphStore.load(store_path)
    found = find_cycles(store, max_report)
    human = [f"# {len(found)} cycles"]
    for cyc in found:
        human.append(f"length {len(cyc)}: " + " -> ".join(cyc))
    _emit(as_json, {"count": len(found), "cycles": found}, "\n".join(human))


@main.command()
@matrix_arg
@side_opt
@json_opt
def analyze(matrix_file, side, as_json):
    """Singularity report of the cone generated by the columns of MATRIX."""
    C = _cone_in_M(_read_matrix(matrix_file), side)
    report = analyze_cone(C)
    d = report.to_dict()
    human = "\n".join(f"{k}: {v}" for k, v in d.items())
    _emit(as_json, d, human)


@main.command()
@click.argument("rank", type=int)
@click.argument("j", type=int)
@json_opt
def reeves(rank, j, as_json):
    """Generator matrix of the Reeves cone (columns)."""
    C = reeves_cone(rank, j)
    M = IntMatrix.from_columns(C.generators)
    _emit(as_json, {"columns": [list(c) for c in C.generators]}, format_matrix(M))


@main.command()
@mode_opt
@char_opt
@json_opt
@click.option("--rank", type=int, required=True)
@click.option("--count", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--entry-bound", type=int, default=5, show_default=True)
@click.option("--max-vertices", type=int, default=50_000, show_default=True)
@click.option("--max-seconds", type=float, default=600.0, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
def sample(mode, characteristic, as_json, rank, count, seed, entry_bound, max_vertices, max_seconds, threads):
    """Random sampling run; reports resolved / exhausted / cycle counts."""
    summary = sample_random(
        rank,
        mode,
        count,
        seed,
        entry_bound,
        characteristic=characteristic,
        max_vertices=max_vertices,
        max_seconds=max_seconds,
        threads=threads,
    )
    d = summary.to_dict()
    human = (
        f"sampled {summary.count} (mode={summary.mode}, p={summary.characteristic}, "
        f"rank={summary.rank}, seed={summary.seed}, bound={summary.entry_bound}): "
        f"{summary.resolved} resolved, {summary.budget_exhausted} budget-exhausted, "
        f"{summary.cycles_found} cycles"
    )
    _emit(as_json, d, human)


@main.command(name="export-dot")
@click.option("--store", "store_path", type=click.Path(exists=True), required=True)
@click.option("--output", "-o", type=click.Path(), default=None)
def export_dot_cmd(store_path, output):
    """DOT rendering of a stored digraph."""
    store = DigraphStore.load(store_path)
    text = export_dot(store)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
        click.echo(f"wrote {output}")
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
