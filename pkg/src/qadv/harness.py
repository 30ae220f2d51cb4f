"""Named channel instances, finite-copy experiments, and serialization.

The Stein-exponent experiment computes one-shot type-II errors at each copy
count and records them next to the single-letter divergence they should
approach.  Commuting instances are routed to an exact classical type-class
reduction so n can reach the hundreds; everything else uses the operator
machinery under hard dimension caps.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .divergences import beta_eps, set_beta_constraint
from .errors import CapExceededError, ConvergenceError, ValidationError
from .multicopy import TYPES_CAP, sequence_output, type_count
from .optimize import (
    cq_informed_divergence,
    cq_pair_divergence,
    minimize_inf,
    minimize_informed,
)
from .qobjects import (
    Channel,
    CQChannel,
    DensityMatrix,
    ProbDist,
    apply_matrix,
    channel_from_kraus,
    cq_channel,
    cq_to_eb_channel,
    density_from_matrix,
    eb_channel_build,
    maximally_mixed,
    state_power,
)

#: default type-I error level for experiments
DEFAULT_EPSILON = 0.3

#: Bloch-ball search grid: radial shells x sphere directions
BLOCH_SHELLS = 40
BLOCH_DIRECTIONS = 400

#: simplex grid step for binary alphabets
SIMPLEX_STEP = 1e-2

#: informed-vs-set equality asserted inside cq_informed_beta
CQ_SET_SIDE_ATOL = 5e-3

#: output matrices must commute this tightly for the exact classical path
COMMUTE_ATOL = 1e-10

#: explicit multi-copy operators are refused above these dimensions
EIGH_DIM_CAP = 256
SDP_DIM_CAP = 64

#: joint cells enumerated per classical Neyman-Pearson instance
CELLS_CAP = 500_000


# ---------------------------------------------------------------------------
# named instances
# ---------------------------------------------------------------------------


def example1_channels() -> tuple[Channel, Channel]:
    """The qubit pair with zero non-informed divergence but positive informed one.

    N1 keeps |0> and scrambles |1> to the maximally mixed state; N2 mirrors
    the roles.  Fixed Kraus sets make the construction reproducible.
    """
    s = 1.0 / math.sqrt(2.0)
    k1 = (
        np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex),
        np.array([[0.0, s], [0.0, 0.0]], dtype=complex),
        np.array([[0.0, 0.0], [0.0, s]], dtype=complex),
    )
    k2 = (
        np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex),
        np.array([[0.0, 0.0], [s, 0.0]], dtype=complex),
        np.array([[s, 0.0], [0.0, 0.0]], dtype=complex),
    )
    return channel_from_kraus(k1), channel_from_kraus(k2)


def example1_cq_channels() -> tuple[CQChannel, CQChannel]:
    """Classical-signal form of the same pair: 0 / 1 select the two branches."""
    zero = np.diag([1.0, 0.0]).astype(complex)
    one = np.diag([0.0, 1.0]).astype(complex)
    mixed = np.eye(2, dtype=complex) / 2.0
    w1 = cq_channel({"0": zero, "1": mixed})
    w2 = cq_channel({"0": mixed, "1": one})
    return w1, w2


def classical_cq_channels() -> tuple[CQChannel, CQChannel]:
    """A fully diagonal two-symbol instance used for classical cross-checks."""
    w1 = cq_channel({"0": np.diag([0.8, 0.2]), "1": np.diag([0.4, 0.6])})
    w2 = cq_channel({"0": np.diag([0.5, 0.5]), "1": np.diag([0.1, 0.9])})
    return w1, w2


def classical_eb_channels() -> tuple[Channel, Channel]:
    """Measure-and-prepare form of `classical_cq_channels`."""
    w1, w2 = classical_cq_channels()
    return cq_to_eb_channel(w1, False), cq_to_eb_channel(w2, False)


def constant_channels(tau1: DensityMatrix, tau2: DensityMatrix) -> tuple[Channel, Channel]:
    """Channels ignoring their input and emitting tau1 / tau2 (qubit input)."""

    def constant(tau: DensityMatrix) -> Channel:
        basis = [np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)]
        return eb_channel_build(basis, [tau, tau])

    return constant(tau1), constant(tau2)


# ---------------------------------------------------------------------------
# informed one-shot quantities
# ---------------------------------------------------------------------------


def bloch_grid(shells: int, directions: int) -> list[DensityMatrix]:
    """Radial-shell Fibonacci-sphere sample of the qubit state space."""
    golden_angle = math.pi * (3.0 - math.sqrt(5.0))
    points = [maximally_mixed(2)]
    for i in range(directions):
        z = 1.0 - 2.0 * (i + 0.5) / directions
        r = math.sqrt(max(0.0, 1.0 - z * z))
        phi = golden_angle * i
        nx, ny, nz = r * math.cos(phi), r * math.sin(phi), z
        for k in range(1, shells + 1):
            radius = k / shells
            m = 0.5 * np.array(
                [
                    [1.0 + radius * nz, radius * (nx - 1j * ny)],
                    [radius * (nx + 1j * ny), 1.0 - radius * nz],
                ]
            )
            points.append(density_from_matrix(m))
    return points


def informed_beta_channel(
    n1: Channel,
    n2: Channel,
    eps: float,
    grid_resolution: tuple[int, int] = (BLOCH_SHELLS, BLOCH_DIRECTIONS),
    candidates: list[DensityMatrix] | None = None,
) -> tuple[float, DensityMatrix]:
    """Worst-case one-shot type-II error over channel inputs, by grid search.

    max over candidate inputs rho of beta_eps(N1(rho), N2(rho)).  Qubit inputs
    get a Bloch-ball grid by default; other dimensions need an explicit
    candidate list.
    """
    if candidates is None:
        if n1.in_dim != 2:
            raise ValidationError("provide candidates for input dimension != 2")
        shells, directions = grid_resolution
        candidates = bloch_grid(shells, directions)
    best_beta = -1.0
    best_rho = candidates[0]
    for rho in candidates:
        out1 = apply_matrix(n1, rho.mat)
        out2 = apply_matrix(n2, rho.mat)
        beta = beta_eps(out1, out2, eps).beta
        if beta > best_beta:
            best_beta, best_rho = beta, rho
    return best_beta, best_rho


def _binary_simplex_grid(size: int, step: float) -> list[np.ndarray]:
    if size == 2:
        ticks = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
        return [np.array([t, 1.0 - t]) for t in ticks]
    # larger alphabets: vertices, uniform, and pairwise midpoints
    grid = [np.full(size, 1.0 / size)]
    for i in range(size):
        e = np.zeros(size)
        e[i] = 1.0
        grid.append(e)
        for j in range(i + 1, size):
            m = np.zeros(size)
            m[i] = m[j] = 0.5
            grid.append(m)
    return grid


def cq_informed_beta(
    w1: CQChannel,
    w2: CQChannel,
    eps: float,
    grid_step: float = SIMPLEX_STEP,
    check_set_side: bool = True,
) -> tuple[float, str]:
    """Worst-case one-shot type-II error for an informed receiver of CQ channels.

    Exactly max over symbols of beta_eps(rho_1x, rho_2x).  When
    `check_set_side` is on, the same quantity is recomputed as a
    set-discrimination problem over effective states on a simplex grid and
    the two are required to agree within 5e-3.
    """
    if w1.alphabet != w2.alphabet:
        raise ValidationError("CQ channels must share one alphabet")
    best_beta = -1.0
    best_sym = w1.alphabet[0]
    for sym, r1, r2 in zip(w1.alphabet, w1.outputs, w2.outputs):
        beta = beta_eps(r1, r2, eps).beta
        if beta > best_beta:
            best_beta, best_sym = beta, sym
    if check_set_side:
        from .qobjects import effective_apply

        grid = _binary_simplex_grid(len(w1.alphabet), grid_step)
        fam1 = [effective_apply(w1, ProbDist(w1.alphabet, p)).mat for p in grid]
        fam2 = [effective_apply(w2, ProbDist(w2.alphabet, p)).mat for p in grid]
        set_side = set_beta_constraint(fam1, fam2, eps).beta
        if abs(set_side - best_beta) > CQ_SET_SIDE_ATOL:
            raise ConvergenceError(
                f"set-discrimination side {set_side:.6f} disagrees with the "
                f"per-symbol maximum {best_beta:.6f}"
            )
    return best_beta, best_sym


# ---------------------------------------------------------------------------
# classical reductions for commuting instances
# ---------------------------------------------------------------------------


def _common_eigenbasis(mats: list[np.ndarray]) -> np.ndarray | None:
    """Shared eigenbasis of a commuting Hermitian family, or None."""
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            if float(np.max(np.abs(comm))) > COMMUTE_ATOL:
                return None
    rng = np.random.default_rng(12345)
    weights = rng.uniform(1.0, 2.0, size=len(mats))
    _, u = np.linalg.eigh(sum(w * m for w, m in zip(weights, mats)))
    for m in mats:
        t = u.conj().T @ m @ u
        if float(np.max(np.abs(t - np.diag(np.diag(t))))) > 1e-8:
            return None
    return u


def _classical_np_beta(mass_p: np.ndarray, mass_q: np.ndarray, eps: float) -> float:
    """Exact type-II optimum of the classical likelihood-ratio LP.

    min q.T x subject to p.T x >= 1 - eps, 0 <= x <= 1; greedy by likelihood
    ratio with a fractional boundary cell.
    """
    p = np.clip(np.asarray(mass_p, dtype=float), 0.0, None)
    q = np.clip(np.asarray(mass_q, dtype=float), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(p > 0.0, q / np.where(p > 0.0, p, 1.0), np.inf)
    order = np.argsort(ratio, kind="stable")
    need = 1.0 - eps
    accp = 0.0
    beta = 0.0
    for i in order:
        if p[i] <= 0.0:
            continue
        if accp + p[i] < need:
            accp += p[i]
            beta += q[i]
        else:
            beta += (need - accp) / p[i] * q[i]
            return float(beta)
    return float(beta)


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def _log_multinomial(counts) -> float:
    n = sum(counts)
    return math.lgamma(n + 1) - sum(math.lgamma(c + 1) for c in counts)


def _iid_type_masses(dist: np.ndarray, n: int) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """Type classes and their masses under an iid product of `dist`."""
    d = dist.size
    if type_count(d, n) > TYPES_CAP:
        raise CapExceededError(f"{type_count(d, n)} types exceed the cap {TYPES_CAP}")
    types = _compositions(n, d)
    logd = np.full(d, -np.inf)
    pos = dist > 0.0
    logd[pos] = np.log(dist[pos])
    masses = np.empty(len(types))
    for idx, t in enumerate(types):
        log_mass = _log_multinomial(t)
        dead = False
        for k, ld in zip(t, logd):
            if k == 0:
                continue
            if not np.isfinite(ld):
                dead = True
                break
            log_mass += k * ld
        masses[idx] = 0.0 if dead else math.exp(log_mass) if log_mass > -745 else 0.0
    return types, masses


def _diag_dist(u: np.ndarray, mat: np.ndarray) -> np.ndarray:
    return np.clip(np.real(np.diag(u.conj().T @ mat @ u)), 0.0, None)


def _np_beta_power(p: np.ndarray, q: np.ndarray, n: int, eps: float) -> float:
    """beta_eps between n-fold products of two classical distributions."""
    types, mass_p = _iid_type_masses(p, n)
    _, mass_q = _iid_type_masses(q, n)
    return _classical_np_beta(mass_p, mass_q, eps)


def _set_lp_beta(mass_rows_p: list[np.ndarray], mass_rows_q: list[np.ndarray], eps: float) -> float:
    """LP over classical tests: min max_q-row subject to every p-row >= 1-eps."""
    from scipy.optimize import linprog

    cells = mass_rows_p[0].size
    c = np.zeros(cells + 1)
    c[-1] = 1.0
    a_ub = []
    b_ub = []
    for row in mass_rows_p:
        a_ub.append(np.concatenate([-row, [0.0]]))
        b_ub.append(-(1.0 - eps))
    for row in mass_rows_q:
        a_ub.append(np.concatenate([row, [-1.0]]))
        b_ub.append(0.0)
    bounds = [(0.0, 1.0)] * cells + [(None, None)]
    res = linprog(c, A_ub=np.array(a_ub), b_ub=np.array(b_ub), bounds=bounds, method="highs")
    if not res.success:
        raise ConvergenceError(f"set LP failed: {res.message}")
    return float(res.x[-1])


# ---------------------------------------------------------------------------
# experiment rows
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExperimentRow:
    """One finite-n Stein estimate next to its single-letter target."""

    n: int
    epsilon: float
    setting: str
    inputs: str
    beta: float
    dh: float
    exponent_estimate: float
    target: float
    gap_to_target: float


def _make_row(n, epsilon, setting, inputs, beta, target) -> ExperimentRow:
    dh = math.inf if beta <= 0.0 else -math.log(beta)
    exponent = dh / n
    gap = exponent - target if math.isfinite(exponent) and math.isfinite(target) else math.nan
    return ExperimentRow(n, epsilon, setting, inputs, beta, dh, exponent, target, gap)


def _default_qq_candidates(in_dim: int) -> list[DensityMatrix]:
    if in_dim != 2:
        raise ValidationError("provide candidates for input dimension != 2")
    cands = [density_from_matrix(np.diag([a, 1.0 - a])) for a in np.linspace(0.0, 1.0, 21)]
    cands.extend(bloch_grid(4, 16))
    return cands


def _dedupe_output_pairs(pairs):
    seen = set()
    out = []
    for a, b in pairs:
        key = (np.round(a, 12).tobytes(), np.round(b, 12).tobytes())
        if key not in seen:
            seen.add(key)
            out.append((a, b))
    return out


def _qq_row_beta(n1, n2, setting, inputs, eps, n, candidates) -> float:
    pairs = [(apply_matrix(n1, c.mat), apply_matrix(n2, c.mat)) for c in candidates]
    pairs = _dedupe_output_pairs(pairs)
    outs = [m for pair in pairs for m in pair]
    basis = _common_eigenbasis(outs)

    if basis is not None:
        dists = [(_diag_dist(basis, a), _diag_dist(basis, b)) for a, b in pairs]
        if inputs == "general" and len(dists) > 1:
            # adversary may also hedge across two product branches
            mixture_rows = []
            for i in range(len(dists)):
                for j in range(i + 1, len(dists)):
                    mixture_rows.append((i, j))
        else:
            mixture_rows = []
        type_masses = [
            (_iid_type_masses(p, n)[1], _iid_type_masses(q, n)[1]) for p, q in dists
        ]
        rows_p = [mp for mp, _ in type_masses]
        rows_q = [mq for _, mq in type_masses]
        for i, j in mixture_rows:
            rows_p.append(0.5 * (rows_p[i] + rows_p[j]))
            rows_q.append(0.5 * (rows_q[i] + rows_q[j]))
        if setting == "informed":
            return max(_classical_np_beta(mp, mq, eps) for mp, mq in zip(rows_p, rows_q))
        return _set_lp_beta(rows_p, rows_q, eps)

    dim = n1.out_dim**n
    if setting == "informed":
        if dim > EIGH_DIM_CAP:
            raise CapExceededError(f"dimension {dim} exceeds the cap {EIGH_DIM_CAP}")
        powers = [
            (state_power(density_from_matrix(a), n), state_power(density_from_matrix(b), n))
            for a, b in pairs
        ]
        if inputs == "general" and len(powers) > 1:
            extra = []
            for i in range(len(powers)):
                for j in range(i + 1, len(powers)):
                    extra.append(
                        (
                            density_from_matrix(0.5 * (powers[i][0].mat + powers[j][0].mat)),
                            density_from_matrix(0.5 * (powers[i][1].mat + powers[j][1].mat)),
                        )
                    )
            powers.extend(extra)
        return max(beta_eps(a, b, eps).beta for a, b in powers)
    if dim > SDP_DIM_CAP:
        raise CapExceededError(f"dimension {dim} exceeds the SDP cap {SDP_DIM_CAP}")
    fam1 = [state_power(density_from_matrix(a), n).mat for a, _ in pairs]
    fam2 = [state_power(density_from_matrix(b), n).mat for _, b in pairs]
    if inputs == "general" and len(fam1) > 1:
        fam1.extend(
            0.5 * (fam1[i] + fam1[j]) for i in range(len(fam1)) for j in range(i + 1, len(fam1))
        )
        fam2.extend(
            0.5 * (fam2[i] + fam2[j]) for i in range(len(fam2)) for j in range(i + 1, len(fam2))
        )
    return set_beta_constraint(fam1, fam2, eps).beta


def _cq_informed_type_beta(w1, w2, basis, counts, eps) -> float:
    """Exact beta for one input type via joint (symbol, outcome) count cells."""
    m = w1.dim
    per_symbol = []
    cells_total = 1
    for tau_x in counts:
        comps = _compositions(tau_x, m)
        cells_total *= len(comps)
        if cells_total > CELLS_CAP:
            raise CapExceededError(f"cell count exceeds the cap {CELLS_CAP}")
        per_symbol.append(comps)
    p_dists = [_diag_dist(basis, s.mat) for s in w1.outputs]
    q_dists = [_diag_dist(basis, s.mat) for s in w2.outputs]

    def log_terms(dists):
        terms = []
        for dist in dists:
            logd = np.full(m, -np.inf)
            pos = dist > 0.0
            logd[pos] = np.log(dist[pos])
            terms.append(logd)
        return terms

    logp = log_terms(p_dists)
    logq = log_terms(q_dists)

    mass_p = []
    mass_q = []

    def rec(x, lp, lq):
        if x == len(counts):
            mass_p.append(math.exp(lp) if lp > -745 else 0.0)
            mass_q.append(math.exp(lq) if lq > -745 else 0.0)
            return
        for cell in per_symbol[x]:
            lmult = _log_multinomial(cell)
            dlp = lmult
            dlq = lmult
            for b, k in enumerate(cell):
                if k == 0:
                    continue
                dlp += k * logp[x][b]
                dlq += k * logq[x][b]
            rec(x + 1, lp + dlp, lq + dlq)

    rec(0, 0.0, 0.0)
    return _classical_np_beta(np.array(mass_p), np.array(mass_q), eps)


def _cq_row_beta(w1, w2, setting, inputs, eps, n, grid_step) -> float:
    outs = [s.mat for s in w1.outputs] + [s.mat for s in w2.outputs]
    basis = _common_eigenbasis(outs)
    d = len(w1.alphabet)

    if setting == "informed":
        if type_count(d, n) > TYPES_CAP:
            raise CapExceededError("too many input types")
        input_types = _compositions(n, d)
        if basis is not None:
            return max(_cq_informed_type_beta(w1, w2, basis, t, eps) for t in input_types)
        if w1.dim**n > EIGH_DIM_CAP:
            raise CapExceededError(f"dimension {w1.dim ** n} exceeds the cap {EIGH_DIM_CAP}")
        best = -1.0
        for t in input_types:
            seq = [sym for sym, c in zip(w1.alphabet, t) for _ in range(c)]
            a = sequence_output(w1, seq)
            b = sequence_output(w2, seq)
            best = max(best, beta_eps(a, b, eps).beta)
        return best

    grid = _binary_simplex_grid(d, grid_step if n == 1 else max(grid_step, 0.1))
    dists1 = [ProbDist(w1.alphabet, p) for p in grid]
    from .qobjects import cq_apply

    mix1 = [cq_apply(w1, p) for p in dists1]
    mix2 = [cq_apply(w2, p) for p in dists1]
    if basis is not None:
        rows_p = [_iid_type_masses(_diag_dist(basis, s.mat), n)[1] for s in mix1]
        rows_q = [_iid_type_masses(_diag_dist(basis, s.mat), n)[1] for s in mix2]
        return _set_lp_beta(rows_p, rows_q, eps)
    if w1.dim**n > SDP_DIM_CAP:
        raise CapExceededError(f"dimension {w1.dim ** n} exceeds the SDP cap {SDP_DIM_CAP}")
    fam1 = [state_power(s, n).mat for s in mix1]
    fam2 = [state_power(s, n).mat for s in mix2]
    return set_beta_constraint(fam1, fam2, eps).beta


def stein_experiment(
    pair,
    setting: str,
    inputs: str,
    epsilon: float,
    n_list,
    out: str | None = None,
    candidates: list[DensityMatrix] | None = None,
    tol: float = 1e-6,
) -> list[ExperimentRow]:
    """Finite-n exponent estimates against the matching single-letter target.

    `pair` is (Channel, Channel) or (CQChannel, CQChannel).  Rows carry no
    pass/fail judgment, only the gap to the target.  With `out`, rows are
    also written as CSV.
    """
    if setting not in ("informed", "noninformed"):
        raise ValidationError(f"unknown setting {setting!r}")
    if inputs not in ("iid", "general"):
        raise ValidationError(f"unknown inputs {inputs!r}")
    first, second = pair
    is_cq = isinstance(first, CQChannel)

    if is_cq:
        if setting == "informed":
            target, _ = cq_informed_divergence(first, second)
        else:
            target = cq_pair_divergence(first, second, tol).value
    else:
        if setting == "informed" and inputs == "iid":
            target = minimize_informed(first, second, tol).value
        else:
            # with general inputs both settings share the non-informed value
            target = minimize_inf(first, second, tol).value

    if not is_cq and candidates is None:
        candidates = _default_qq_candidates(first.in_dim)

    rows = []
    for n in n_list:
        n = int(n)
        if is_cq:
            beta = _cq_row_beta(first, second, setting, inputs, epsilon, n, SIMPLEX_STEP)
        else:
            beta = _qq_row_beta(first, second, setting, inputs, epsilon, n, candidates)
        rows.append(_make_row(n, epsilon, setting, inputs, beta, target))
    if out is not None:
        write_rows_csv(rows, out)
    return rows


CSV_COLUMNS = (
    "n",
    "epsilon",
    "setting",
    "inputs",
    "beta",
    "dh",
    "exponent_estimate",
    "target",
    "gap",
)


def rows_to_csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(
            [
                r.n,
                repr(r.epsilon),
                r.setting,
                r.inputs,
                repr(r.beta),
                "inf" if math.isinf(r.dh) else repr(r.dh),
                "inf" if math.isinf(r.exponent_estimate) else repr(r.exponent_estimate),
                "inf" if math.isinf(r.target) else repr(r.target),
                "nan" if math.isnan(r.gap_to_target) else repr(r.gap_to_target),
            ]
        )
    return buf.getvalue()


def write_rows_csv(rows, path: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv_text(rows))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _complex_to_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _matrix_to_json(m) -> list:
    return [[_complex_to_json(z) for z in row] for row in np.asarray(m, dtype=complex)]


def _json_to_matrix(rows) -> np.ndarray:
    return np.array([[complex(e[0], e[1]) for e in row] for row in rows], dtype=complex)


def _vector_to_json(v) -> list:
    return [_complex_to_json(z) for z in np.asarray(v, dtype=complex).reshape(-1)]


def _json_to_vector(entries) -> np.ndarray:
    return np.array([complex(e[0], e[1]) for e in entries], dtype=complex)


@dataclass(frozen=True, eq=False)
class ChannelSpec:
    """Serialized form of a channel: raw matrices plus the construction kind."""

    kind: str
    in_dim: int
    out_dim: int
    kraus: tuple | None = None
    alphabet: tuple[str, ...] | None = None
    basis: tuple | None = None
    outputs: tuple | None = None

    def build(self):
        if self.kind == "kraus":
            return channel_from_kraus(self.kraus)
        if self.kind == "eb":
            states = [density_from_matrix(m) for m in self.outputs]
            return eb_channel_build(self.basis, states)
        if self.kind == "cq":
            return cq_channel(
                {sym: m for sym, m in zip(self.alphabet, self.outputs)}
            )
        raise ValidationError(f"unknown channel kind {self.kind!r}")

    def to_jsonable(self) -> dict:
        obj = {"kind": self.kind, "inDim": self.in_dim, "outDim": self.out_dim}
        if self.kraus is not None:
            obj["kraus"] = [_matrix_to_json(k) for k in self.kraus]
        if self.alphabet is not None:
            obj["alphabet"] = list(self.alphabet)
        if self.basis is not None:
            obj["basis"] = [_vector_to_json(v) for v in self.basis]
        if self.outputs is not None:
            obj["outputs"] = {
                sym: _matrix_to_json(m) for sym, m in zip(self.alphabet, self.outputs)
            }
        return obj


def parse_channel_spec(obj: dict) -> ChannelSpec:
    try:
        kind = obj["kind"]
        in_dim = int(obj["inDim"])
        out_dim = int(obj["outDim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed channel spec: {exc}") from exc
    if kind == "kraus":
        if "kraus" not in obj:
            raise ValidationError("kraus spec needs a 'kraus' field")
        kraus = tuple(_json_to_matrix(k) for k in obj["kraus"])
        return ChannelSpec("kraus", in_dim, out_dim, kraus=kraus)
    if kind in ("eb", "cq"):
        if "alphabet" not in obj or "outputs" not in obj:
            raise ValidationError(f"{kind} spec needs 'alphabet' and 'outputs'")
        alphabet = tuple(str(x) for x in obj["alphabet"])
        missing = [sym for sym in alphabet if sym not in obj["outputs"]]
        if missing:
            raise ValidationError(f"outputs missing for symbols {missing}")
        outputs = tuple(_json_to_matrix(obj["outputs"][sym]) for sym in alphabet)
        basis = None
        if kind == "eb":
            if "basis" not in obj:
                raise ValidationError("eb spec needs a 'basis' field")
            basis = tuple(_json_to_vector(v) for v in obj["basis"])
        return ChannelSpec(kind, in_dim, out_dim, alphabet=alphabet, basis=basis, outputs=outputs)
    raise ValidationError(f"unknown channel kind {kind!r}")


def spec_from_channel(ch: Channel) -> ChannelSpec:
    return ChannelSpec("kraus", ch.in_dim, ch.out_dim, kraus=ch.kraus)


def spec_from_cq(w: CQChannel) -> ChannelSpec:
    return ChannelSpec(
        "cq",
        len(w.alphabet),
        w.dim,
        alphabet=w.alphabet,
        outputs=tuple(s.mat for s in w.outputs),
    )


def eb_spec_from_cq(w: CQChannel) -> ChannelSpec:
    """Computational-basis measure-and-prepare form as a serializable spec."""
    k = len(w.alphabet)
    basis = tuple(np.eye(k, dtype=complex)[:, i] for i in range(k))
    return ChannelSpec(
        "eb",
        k,
        w.dim,
        alphabet=w.alphabet,
        basis=basis,
        outputs=tuple(s.mat for s in w.outputs),
    )


def shipped_pair_specs() -> dict[str, tuple[ChannelSpec, ChannelSpec]]:
    """Serializable forms of every named instance, keyed by name."""
    n1, n2 = example1_channels()
    w1, w2 = example1_cq_channels()
    c1, c2 = classical_cq_channels()
    return {
        "example1": (spec_from_channel(n1), spec_from_channel(n2)),
        "example1-cq": (spec_from_cq(w1), spec_from_cq(w2)),
        "classical-eb": (eb_spec_from_cq(c1), eb_spec_from_cq(c2)),
    }


def serialize_pair(spec_a: ChannelSpec, spec_b: ChannelSpec) -> str:
    obj = {"channels": [spec_a.to_jsonable(), spec_b.to_jsonable()]}
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def parse_pair(text: str) -> tuple[ChannelSpec, ChannelSpec]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    channels = obj.get("channels") if isinstance(obj, dict) else None
    if not isinstance(channels, list) or len(channels) != 2:
        raise ValidationError("pair file must hold {'channels': [specA, specB]}")
    return parse_channel_spec(channels[0]), parse_channel_spec(channels[1])


def load_pair(path: str) -> tuple[ChannelSpec, ChannelSpec]:
    with open(path, encoding="utf-8") as fh:
        return parse_pair(fh.read())


def save_pair(spec_a: ChannelSpec, spec_b: ChannelSpec, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_pair(spec_a, spec_b))


def load_state(path: str) -> DensityMatrix:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ValidationError("state file must hold {'matrix': [[[re,im],...],...]}")
    return density_from_matrix(_json_to_matrix(obj["matrix"]))


# ---------------------------------------------------------------------------
# verification suite for the named instances
# ---------------------------------------------------------------------------


def verify_example1(report=print) -> bool:
    """Run the named-instance checks; True iff every check passes."""
    checks = []

    def record(name: str, ok: bool, detail: str):
        checks.append(ok)
        report(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")

    n1, n2 = example1_channels()
    inf_res = minimize_inf(n1, n2)
    record(
        "non-informed divergence vanishes",
        abs(inf_res.value) <= 1e-6,
        f"value={inf_res.value:.3e}",
    )

    grid = np.linspace(1e-9, 1.0 - 1e-9, 200001)
    profile = (1 + grid) / 2 * np.log((1 + grid) / grid) + (1 - grid) / 2 * np.log(
        (1 - grid) / (2 - grid)
    )
    oracle = float(profile.min())
    informed_res = minimize_informed(n1, n2)
    record(
        "informed divergence matches the diagonal-profile oracle",
        abs(informed_res.value - oracle) <= 2e-3,
        f"value={informed_res.value:.6f} oracle={oracle:.6f}",
    )

    w1, w2 = example1_cq_channels()
    val, sym = cq_informed_divergence(w1, w2)
    record(
        "informed CQ divergence is log 2",
        abs(val - math.log(2.0)) <= 1e-9 and sym == "0",
        f"value={val:.9f} at symbol {sym}",
    )
    pair_res = cq_pair_divergence(w1, w2)
    record(
        "non-informed CQ divergence vanishes",
        abs(pair_res.value) <= 1e-6,
        f"value={pair_res.value:.3e}",
    )
    beta, worst = cq_informed_beta(w1, w2, 0.25)
    record(
        "informed CQ beta at eps=0.25",
        abs(beta - 0.5) <= 1e-6 and worst == "1",
        f"beta={beta:.6f} at symbol {worst}",
    )

    eb1 = cq_to_eb_channel(w1, False)
    agree = True
    for a in np.linspace(0.0, 1.0, 11):
        rho = np.diag([a, 1.0 - a]).astype(complex)
        agree &= bool(
            np.allclose(apply_matrix(eb1, rho), apply_matrix(n1, rho), atol=1e-10)
        )
    record(
        "measure-and-prepare form reproduces the channel on diagonal inputs",
        agree,
        "checked 11 diagonal states",
    )
    record(
        "informed/non-informed separation is strict",
        val - pair_res.value > 0.5,
        f"gap={val - pair_res.value:.6f}",
    )
    return all(checks)
