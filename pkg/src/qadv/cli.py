"""Command-line interface.

Exit codes: 0 success, 2 validation error, 3 cap exceeded, 4 solver
non-convergence.
"""

from __future__ import annotations

import math
import sys

import click

from .errors import ConvergenceError, QadvError, ValidationError
from .harness import (
    DEFAULT_EPSILON,
    load_pair,
    load_state,
    stein_experiment,
    verify_example1,
)
from .optimize import cq_informed_divergence, cq_pair_divergence, minimize_inf, minimize_informed
from .qobjects import CQChannel


def _fmt(value: float, bits: bool) -> str:
    if math.isinf(value):
        return "inf"
    if bits:
        value = value / math.log(2.0)
    return f"{value:.9g}"


def _build_pair(path: str):
    spec_a, spec_b = load_pair(path)
    return spec_a.build(), spec_b.build()


@click.group()
def main():
    """Divergences and adversarial-discrimination experiments for channels."""


@main.command()
@click.option("--pair", "pair_path", required=True, type=click.Path(exists=True))
@click.option(
    "--kind",
    required=True,
    type=click.Choice(["informed", "inf", "cq-informed", "cq-pair"]),
)
@click.option("--tol", default=1e-6, show_default=True)
@click.option("--bits", is_flag=True, help="report in bits instead of nats")
def divergence(pair_path, kind, tol, bits):
    """Channel divergence of a serialized channel pair."""
    first, second = _build_pair(pair_path)
    is_cq = isinstance(first, CQChannel)
    if kind.startswith("cq-") != is_cq:
        wanted = "cq" if kind.startswith("cq-") else "kraus/eb"
        raise ValidationError(f"--kind {kind} needs a {wanted} channel pair")
    gap = 0.0
    if kind == "informed":
        res = minimize_informed(first, second, tol)
        value, gap = res.value, res.gap
    elif kind == "inf":
        res = minimize_inf(first, second, tol)
        value, gap = res.value, res.gap
    elif kind == "cq-informed":
        value, symbol = cq_informed_divergence(first, second)
        click.echo(f"argmin symbol: {symbol}")
    else:
        res = cq_pair_divergence(first, second, tol)
        value, gap = res.value, res.gap
    click.echo(f"value: {_fmt(value, bits)} {'bits' if bits else 'nats'}")
    if math.isfinite(value) and gap > tol:
        raise ConvergenceError(f"solver gap {gap:.3e} above tolerance {tol:.3e}")


@main.command()
@click.option("--rho", "rho_path", required=True, type=click.Path(exists=True))
@click.option("--sigma", "sigma_path", required=True, type=click.Path(exists=True))
@click.option("--eps", default=DEFAULT_EPSILON, show_default=True)
@click.option("--bits", is_flag=True)
def beta(rho_path, sigma_path, eps, bits):
    """One-shot optimal type-II error between two serialized states."""
    from .divergences import beta_eps

    rho = load_state(rho_path)
    sigma = load_state(sigma_path)
    result = beta_eps(rho, sigma, eps)
    click.echo(f"beta: {result.beta:.12g}")
    click.echo(f"dh: {_fmt(result.dh, bits)} {'bits' if bits else 'nats'}")


@main.command()
@click.option("--pair", "pair_path", required=True, type=click.Path(exists=True))
@click.option("--setting", required=True, type=click.Choice(["informed", "noninformed"]))
@click.option("--inputs", required=True, type=click.Choice(["iid", "general"]))
@click.option("--eps", default=DEFAULT_EPSILON, show_default=True)
@click.option("--n", "n_spec", default="1,2,4", show_default=True, help="comma-separated copy counts")
@click.option("--out", "out_path", required=True, type=click.Path())
def stein(pair_path, setting, inputs, eps, n_spec, out_path):
    """Finite-n Stein-exponent table written as CSV."""
    first, second = _build_pair(pair_path)
    n_list = [int(tok) for tok in n_spec.split(",") if tok.strip()]
    rows = stein_experiment((first, second), setting, inputs, eps, n_list, out=out_path)
    for row in rows:
        click.echo(
            f"n={row.n} beta={row.beta:.6g} exponent={row.exponent_estimate:.6g} "
            f"target={row.target:.6g}"
        )
    click.echo(f"wrote {out_path}")


@main.command()
@click.argument("suite", type=click.Choice(["example1"]))
def verify(suite):
    """Run the named-instance verification suite."""
    ok = verify_example1(report=click.echo)
    if not ok:
        sys.exit(1)


def run():
    try:
        main(standalone_mode=False)
    except QadvError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except click.exceptions.Abort:
        sys.exit(1)


if __name__ == "__main__":
    run()
