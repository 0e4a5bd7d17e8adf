"""Command line interface.

Exit codes: 0 success, 2 usage or parameter validation, 3 numerical or
degenerate-input failures, 4 I/O and file-format failures.  All file
output is deterministic: identical flags produce byte-identical files.
"""

from __future__ import annotations

import sys
from contextlib import contextmanager
from pathlib import Path

import click
import numpy as np

from .calibration import calibrate_bandwidth, select_power
from .cluster import PipelineConfig, cluster_pipeline
from .data import (
    blob_centers,
    extract_windows,
    gen_blobs,
    gen_rings,
    load_pgm,
    load_points,
    save_points,
)
from .errors import (
    CalibrationError,
    DegenerateSpectrumError,
    NumericalError,
    ParameterError,
    ParseError,
    VanishingSelfAffinityError,
)
from .kernels import compose_kernel, gaussian_kernel
from .markov import diffusion_operator, transition_matrix, tv_matrix
from .reporting import (
    affinity_summary,
    clustering_payload,
    dumps,
    embedding_csv,
    fmt,
    matrix_csv,
    profile_csv,
    spectrum_csv,
    write_text,
)
from .spectral import degrees, eig_sym, embedding, normalized_operator, spectrum_report
from . import data as _data


@contextmanager
def _exit_codes():
    try:
        yield
    except ParameterError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except (CalibrationError, DegenerateSpectrumError,
            VanishingSelfAffinityError, NumericalError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    except (ParseError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(4)


def parse_generator(spec: str, seed) -> np.ndarray:
    """Build a dataset from a generator description.

    Grammar: ``blobs:k:n_per:center_sep:spread`` for k Gaussian blobs
    whose centers are mutually `center_sep` apart, or
    ``rings:r1,r2,...:n_per:noise`` for concentric noisy circles.
    """
    parts = spec.split(":")
    try:
        if parts[0] == "blobs":
            if len(parts) != 5:
                raise ValueError("expected blobs:k:n_per:center_sep:spread")
            k, n_per = int(parts[1]), int(parts[2])
            sep, spread = float(parts[3]), float(parts[4])
            return gen_blobs(blob_centers(k, sep), n_per, spread, seed)
        if parts[0] == "rings":
            if len(parts) != 4:
                raise ValueError("expected rings:r1,r2,...:n_per:noise")
            radii = [float(r) for r in parts[1].split(",")]
            return gen_rings(radii, int(parts[2]), float(parts[3]), seed)
        raise ValueError(f"unknown generator {parts[0]!r}")
    except ValueError as exc:
        raise ParameterError(f"bad generator spec {spec!r}: {exc}") from None


def _load_source(input_path, gen, pgm, window, stride, seed) -> np.ndarray:
    given = [x for x in (input_path, gen, pgm) if x is not None]
    if len(given) != 1:
        raise ParameterError("exactly one of --input, --gen, --pgm is required")
    if input_path is not None:
        return load_points(input_path)
    if gen is not None:
        return parse_generator(gen, seed)
    if window is None or stride is None:
        raise ParameterError("--pgm requires both --window and --stride")
    return extract_windows(load_pgm(pgm), window, stride)


def source_options(f):
    for option in reversed([
        click.option("--input", "input_path", type=click.Path(), default=None,
                     help="CSV of points, one row per point."),
        click.option("--gen", default=None,
                     help="Generator spec, e.g. blobs:3:100:10:0.15 or rings:1,3:150:0.05."),
        click.option("--pgm", type=click.Path(), default=None,
                     help="PGM image; used with --window/--stride."),
        click.option("--window", type=int, default=None, help="Window side for --pgm."),
        click.option("--stride", type=int, default=None,
                     help="Window stride for --pgm (must be < window)."),
        click.option("--seed", type=int, default=None,
                     help="Seed for generators and the random strategy."),
    ]):
        f = option(f)
    return f


def param_options(f):
    for option in reversed([
        click.option("--h", "h_targets", type=float, multiple=True,
                     help="Calibration target(s); repeat for per-level values. Default 0.005."),
        click.option("--sigma", type=float, default=0.001, show_default=True,
                     help="Degree floor."),
        click.option("--zeta", type=float, default=0.01, show_default=True,
                     help="Decay target for the p-th eigenvalue."),
        click.option("--p", type=int, default=7, show_default=True,
                     help="Upper estimate of the cluster count."),
        click.option("--compose-levels", type=int, default=0, show_default=True,
                     help="Kernel composition levels stacked on the base kernel (0-2)."),
    ]):
        f = option(f)
    return f


def _targets(h_targets) -> float | tuple:
    if not h_targets:
        return 0.005
    return h_targets[0] if len(h_targets) == 1 else tuple(h_targets)


def _config(h_targets, sigma, zeta, p, compose_levels, s=0.1,
            strategy="lowest-index", seed=None) -> PipelineConfig:
    return PipelineConfig(h=_targets(h_targets), sigma=sigma, zeta=zeta, p=p, s=s,
                          strategy=strategy, seed=seed, compose_levels=compose_levels)


@click.group()
def main():
    """Kernel spectral clustering with automatic cluster-count estimation."""


@main.command()
@source_options
@param_options
@click.option("--s", type=float, default=0.1, show_default=True,
              help="Greedy affinity threshold (inclusive).")
@click.option("--strategy", type=click.Choice(["lowest-index", "random"]),
              default="lowest-index", show_default=True, help="Greedy seed selection.")
@click.option("--out", type=click.Path(), default=".", show_default=True,
              help="Output directory.")
@click.option("--dump-kernel", type=click.Path(), default=None,
              help="Also write the final kernel matrix as CSV.")
def cluster(input_path, gen, pgm, window, stride, seed, h_targets, sigma, zeta, p,
            compose_levels, s, strategy, out, dump_kernel):
    """Cluster a point set; writes labels, spectrum, embedding, and a report."""
    with _exit_codes():
        points = _load_source(input_path, gen, pgm, window, stride, seed)
        cfg = _config(h_targets, sigma, zeta, p, compose_levels, s, strategy, seed)
        run = cluster_pipeline(points, cfg)

        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_text(out_dir / "clustering.json", dumps(clustering_payload(run)))
        table = spectrum_report(run.decomposition, run.m, min(p, run.decomposition.n))
        write_text(out_dir / "spectrum.csv", spectrum_csv(table))
        coords, _ = embedding(run.decomposition, run.m, min(2, run.decomposition.n))
        write_text(out_dir / "embedding.csv", embedding_csv(coords, run.clustering.labels))
        write_text(out_dir / "report.json", dumps(affinity_summary(run)))
        if dump_kernel is not None:
            write_text(dump_kernel, matrix_csv(run.kernel.entries))

        for note in run.warnings:
            click.echo(f"warning: {note}", err=True)
        click.echo(f"c={run.clustering.c} m={run.m} beta={fmt(run.kernel.beta)} out={out_dir}")


@main.command()
@source_options
@click.option("--h", type=float, default=0.005, show_default=True,
              help="Calibration target in (0, 1).")
@click.option("--trace", is_flag=True, help="Include the bisection history.")
def calibrate(input_path, gen, pgm, window, stride, seed, h, trace):
    """Solve for the kernel bandwidth that hits the pair-mean target."""
    with _exit_codes():
        points = _load_source(input_path, gen, pgm, window, stride, seed)
        d2 = _data.squared_distances(points)
        result = calibrate_bandwidth(d2, h, collect_trace=trace)
        payload = {
            "beta": result.beta,
            "achieved": result.achieved,
            "iterations": result.iterations,
        }
        if trace:
            payload["trace"] = [list(step) for step in result.trace]
        click.echo(dumps(payload))


@main.command()
@source_options
@param_options
@click.option("--out", type=click.Path(), default=None,
              help="Output CSV path (stdout when omitted).")
def spectrum(input_path, gen, pgm, window, stride, seed, h_targets, sigma, zeta, p,
             compose_levels, out):
    """Report leading eigenvalues before and after powering."""
    with _exit_codes():
        points = _load_source(input_path, gen, pgm, window, stride, seed)
        cfg = _config(h_targets, sigma, zeta, p, compose_levels, seed=seed)
        run = cluster_pipeline(points, cfg)
        table = spectrum_report(run.decomposition, run.m, min(p, run.decomposition.n))
        text = spectrum_csv(table)
        if out is None:
            click.echo(text, nl=False)
        else:
            write_text(out, text)
            click.echo(f"m={run.m} out={out}")


@main.command()
@source_options
@param_options
@click.option("--k", type=int, default=2, show_default=True, help="Embedding width.")
@click.option("--out", type=click.Path(), default=None,
              help="Output CSV path (stdout when omitted).")
def embed(input_path, gen, pgm, window, stride, seed, h_targets, sigma, zeta, p,
          compose_levels, k, out):
    """Write row-normalized spectral coordinates."""
    with _exit_codes():
        points = _load_source(input_path, gen, pgm, window, stride, seed)
        cfg = _config(h_targets, sigma, zeta, p, compose_levels, seed=seed)
        run = cluster_pipeline(points, cfg)
        coords, flagged = embedding(run.decomposition, run.m, min(k, run.decomposition.n))
        if np.any(flagged):
            click.echo(
                f"warning: {int(np.count_nonzero(flagged))} row(s) had vanishing "
                "norm and were left unnormalized", err=True)
        text = embedding_csv(coords)
        if out is None:
            click.echo(text, nl=False)
        else:
            write_text(out, text)
            click.echo(f"n={coords.shape[0]} k={coords.shape[1]} out={out}")


@main.command()
@click.option("--pgm", type=click.Path(), required=True, help="PGM image (P2 or P5).")
@click.option("--window", type=int, required=True, help="Window side.")
@click.option("--stride", type=int, required=True, help="Stride (must be < window).")
@click.option("--out", type=click.Path(), default=None,
              help="Output CSV path (stdout when omitted).")
def windows(pgm, window, stride, out):
    """Flatten overlapping image windows into a point-cloud CSV."""
    with _exit_codes():
        points = extract_windows(load_pgm(pgm), window, stride)
        if out is None:
            for row in points:
                click.echo(",".join(fmt(v) for v in row))
        else:
            save_points(out, points)
            click.echo(f"n={points.shape[0]} d={points.shape[1]} out={out}")


@main.command()
@source_options
@param_options
@click.option("--index", type=int, default=0, show_default=True, help="Start point.")
@click.option("--m", "m_override", type=int, default=None,
              help="Power override (default: the automatically selected value).")
@click.option("--out", type=click.Path(), default=".", show_default=True,
              help="Output directory.")
def diffuse(input_path, gen, pgm, window, stride, seed, h_targets, sigma, zeta, p,
            compose_levels, index, m_override, out):
    """Markov diagnostics: m-step profile of one point and all pairwise TV distances."""
    with _exit_codes():
        points = _load_source(input_path, gen, pgm, window, stride, seed)
        cfg = _config(h_targets, sigma, zeta, p, compose_levels, seed=seed)
        targets = cfg.targets()
        d2 = _data.squared_distances(points)
        kernel = gaussian_kernel(d2, calibrate_bandwidth(d2, targets[0]).beta)
        for level_target in targets[1:]:
            kernel, _ = compose_kernel(kernel, level_target)
        if m_override is not None:
            m = m_override
        else:
            dec = eig_sym(normalized_operator(kernel, degrees(kernel, sigma)))
            m = select_power(dec.eigenvalues, min(p, dec.n), zeta)
        P = transition_matrix(kernel)
        if not 0 <= index < P.shape[0]:
            raise ParameterError(f"--index must be in [0, {P.shape[0] - 1}], got {index}")
        all_profiles = diffusion_operator(P, m)

        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_text(out_dir / "profile.csv", profile_csv(all_profiles[index]))
        write_text(out_dir / "tv.csv", matrix_csv(tv_matrix(all_profiles)))
        click.echo(f"index={index} m={m} out={out_dir}")


@main.command()
@click.option("--gen", required=True, help="Generator spec (see cluster --help).")
@click.option("--seed", type=int, default=None, help="Generator seed.")
@click.option("--out", type=click.Path(), default=None,
              help="Output CSV path (stdout when omitted).")
def generate(gen, seed, out):
    """Write a synthetic dataset as a point-cloud CSV."""
    with _exit_codes():
        points = parse_generator(gen, seed)
        if out is None:
            for row in points:
                click.echo(",".join(fmt(v) for v in row))
        else:
            save_points(out, points)
            click.echo(f"n={points.shape[0]} d={points.shape[1]} out={out}")


if __name__ == "__main__":
    main()
