"""Command-line interface: clustering runs, eigenpair dumps, benchmarks, server."""

from __future__ import annotations

import sys
from pathlib import Path

import click
import numpy as np

from . import bench as bench_mod
from .eigen import SolverConfig, batch_smallest
from .errors import EigenstepError
from .graph import UNNORMALIZED, VARIANTS, laplacian
from .incremental import sweep
from .ingest import erdos_renyi, knn_graph, load_edge_list, load_points_csv
from .lanczos import SmallestViaLanczos
from .session import Session, SessionConfig


def _load_graph(input_path, fmt, knn, kernel, sigma):
    if fmt in ("edgelist", "mtx"):
        return load_edge_list(input_path)
    if fmt == "points":
        return knn_graph(load_points_csv(input_path), knn, kernel, sigma)
    raise click.UsageError(f"unknown format {fmt!r}")


graph_options = [
    click.option("--input", "input_path", required=True, type=click.Path(exists=True)),
    click.option("--format", "fmt", default="edgelist",
                 type=click.Choice(["edgelist", "mtx", "points"])),
    click.option("--knn", default=8, show_default=True, help="k for points format"),
    click.option("--kernel", default="unit", type=click.Choice(["unit", "gaussian"])),
    click.option("--sigma", default=None, type=float, help="gaussian kernel width"),
]


def add_options(options):
    def wrap(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn
    return wrap


@click.group()
def main():
    """Incremental spectral clustering workbench."""


@main.command()
@add_options(graph_options)
@click.option("--variant", default=UNNORMALIZED, type=click.Choice(list(VARIANTS)))
@click.option("--steps", default=9, show_default=True, help="number of K increments")
@click.option("--seed", default=0, show_default=True)
@click.option("--allow-disconnected", is_flag=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--labels-out", default=None, type=click.Path(),
              help="write node,label CSV for the last K")
@click.option("--session-out", default=None, type=click.Path(),
              help="persist the session state file")
def cluster(input_path, fmt, knn, kernel, sigma, variant, steps, seed,
            allow_disconnected, out_path, labels_out, session_out):
    """Run the guided clustering loop for a fixed number of steps."""
    graph = _load_graph(input_path, fmt, knn, kernel, sigma)
    config = SessionConfig(
        variant=variant,
        allow_disconnected=allow_disconnected,
        solver_seed=seed,
        kmeans_seed=seed,
    )
    try:
        session = Session.create(graph, config)
        for _ in range(steps):
            report = session.step()
            click.echo(f"K={report.K}  mod={report.modularity:.6f}  "
                       f"snc={report.scaled_nc:.6f}")
    except EigenstepError as err:
        raise click.ClickException(str(err)) from err
    Path(out_path).write_text(session.metrics_csv())
    if labels_out:
        last = session.metrics_history()[-1]
        lines = ["node,label"] + [f"{i},{int(l)}" for i, l in enumerate(last.labels)]
        Path(labels_out).write_text("\n".join(lines) + "\n")
    if session_out:
        session.save(session_out)


@main.command()
@add_options(graph_options)
@click.option("--k", "k_pairs", required=True, type=int)
@click.option("--method", default="incremental",
              type=click.Choice(["incremental", "lanczos-io", "batch"]))
@click.option("--variant", default=UNNORMALIZED, type=click.Choice(list(VARIANTS)))
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--vectors-out", default=None, type=click.Path(),
              help="also dump eigenvectors, one column per pair")
def eig(input_path, fmt, knn, kernel, sigma, k_pairs, method, variant, seed,
        out_path, vectors_out):
    """Compute the K smallest Laplacian eigenpairs and dump values to CSV."""
    graph = _load_graph(input_path, fmt, knn, kernel, sigma)
    op = laplacian(graph, variant)
    cfg = SolverConfig(seed=seed)
    try:
        if method == "incremental":
            basis, _ = sweep(op, k_pairs, cfg)
            values = basis.eigenvalues(k_pairs)
            vectors = basis.eigenvector_matrix(k_pairs)
        elif method == "batch":
            pairs = batch_smallest(op, k_pairs, cfg)
            values = np.array([p.value for p in pairs])
            vectors = np.column_stack([p.vector for p in pairs])
        else:
            pairs = SmallestViaLanczos(op, seed=seed).compute(k_pairs)
            values = np.array([p.value for p in pairs])
            vectors = np.column_stack([p.vector for p in pairs])
    except EigenstepError as err:
        raise click.ClickException(str(err)) from err
    lines = ["index,value"] + [f"{i},{float(v)!r}" for i, v in enumerate(values)]
    Path(out_path).write_text("\n".join(lines) + "\n")
    if vectors_out:
        np.savetxt(vectors_out, vectors, delimiter=",")
    click.echo(f"wrote {len(values)} eigenvalues to {out_path}")


@main.command(name="bench")
@click.option("--n", default=1000, show_default=True)
@click.option("--p", default=0.1, show_default=True)
@click.option("--kmax", default=10, show_default=True)
@click.option("--trials", default=5, show_default=True)
@click.option("--methods", default="incremental,lanczos-io,batch", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--zaug", "zaug_values", multiple=True, type=int,
              help="run the Z_aug sensitivity sweep instead (repeatable)")
@click.option("--out", "out_path", required=True, type=click.Path())
def bench(n, p, kmax, trials, methods, seed, zaug_values, out_path):
    """Time the sequential K sweep on an Erdos-Renyi graph."""
    graph = erdos_renyi(n, p, seed=seed)
    tag = f"er-n{n}-p{p}"
    try:
        if zaug_values:
            records = bench_mod.zaug_sensitivity(
                graph, kmax, tuple(zaug_values), trials=trials, seed=seed, tag=tag
            )
        else:
            records = bench_mod.run_sweep(
                graph, tuple(methods.split(",")), k_max=kmax, trials=trials,
                seed=seed, tag=tag,
            )
    except EigenstepError as err:
        raise click.ClickException(str(err)) from err
    bench_mod.write_csv(records, out_path)
    click.echo(f"wrote {len(records)} records to {out_path}")


@main.command()
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--state-dir", default=None, type=click.Path())
def serve(port, host, state_dir):
    """Run the session service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(state_dir), host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
