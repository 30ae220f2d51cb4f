"""Scalar comparison quantities between states and families of operators.

Relative entropy, Petz-Renyi divergence, fidelity, the Chernoff overlap, the
quantum Neyman-Pearson test behind the one-shot hypothesis-testing quantities,
the two-family discrimination error, and the pairwise-overlap upper bound on
it.  All values are in nats; math.inf is the off-support sentinel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, ValidationError
from .linalg import (
    as_hermitian,
    clip_threshold,
    eigh,
    matrix_function,
    support_mask,
)

#: squared overlap with ker(sigma) above which D(rho||sigma) is +inf
SUPPORT_OVERLAP_ATOL = 1e-9

#: type-I error may exceed its level by at most this much
TYPE_I_SLACK = 1e-9

#: golden-section interval tolerance for 1-D overlap minimizations
OVERLAP_S_TOL = 1e-8

#: subgradient schedule for the group discrimination error
GROUP_ITERATIONS = 5000
GROUP_CERTIFICATE_SAMPLES = 2000

#: type-I feasibility required from the set-discrimination solver
SET_FEASIBILITY_ATOL = 1e-8

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _mat(x) -> np.ndarray:
    return as_hermitian(x)


def _check_same_dim(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")


def nats_to_bits(x: float) -> float:
    return x / math.log(2.0)


def _entropy_pair_raw(rm: np.ndarray, sm: np.ndarray) -> float:
    """Relative entropy of two already-Hermitian arrays, no revalidation."""
    slam, svec = np.linalg.eigh(sm)
    s_on = support_mask(slam)
    if not s_on.all():
        rlam, rvec = np.linalg.eigh(rm)
        r_on = support_mask(rlam)
        kernel = svec[:, ~s_on]
        overlap = np.abs(kernel.conj().T @ rvec[:, r_on]) ** 2
        if overlap.size and overlap.sum(axis=0).max() > SUPPORT_OVERLAP_ATOL:
            return math.inf
    else:
        rlam = np.linalg.eigvalsh(rm)
        r_on = support_mask(rlam)
    lam = rlam[r_on]
    plogp = float(np.sum(lam * np.log(lam)))
    sv = svec[:, s_on]
    log_sigma = (sv * np.log(slam[s_on])) @ sv.conj().T
    cross = float(np.real(np.einsum("ij,ji->", rm, log_sigma)))
    return plogp - cross


def relative_entropy(rho, sigma) -> float:
    """Umegaki relative entropy tr(rho log rho - rho log sigma) in nats.

    Returns math.inf when the support of rho leaks outside the support of
    sigma (squared overlap with ker(sigma) above 1e-9 for any populated
    eigenvector of rho).
    """
    rm, sm = _mat(rho), _mat(sigma)
    _check_same_dim(rm, sm)
    return _entropy_pair_raw(rm, sm)


def petz_renyi(rho, sigma, s: float) -> float:
    """Petz-Renyi divergence of order 1-s: -(1/s) log tr[rho^(1-s) sigma^s].

    Tends to the relative entropy as s -> 0 and never exceeds it on (0,1).
    """
    if not 0.0 < s < 1.0:
        raise ValidationError(f"s must lie strictly inside (0,1), got {s}")
    rm, sm = _mat(rho), _mat(sigma)
    _check_same_dim(rm, sm)
    q = _overlap_curve(rm, sm)(s)
    if q <= 0.0:
        return math.inf
    return -math.log(q) / s


def fidelity(a, b) -> float:
    """Fidelity of PSD operators: tr[(A^1/2 B A^1/2)^1/2]."""
    am, bm = _mat(a), _mat(b)
    _check_same_dim(am, bm)
    for name, m in (("A", am), ("B", bm)):
        w = np.linalg.eigvalsh(m)
        if w.min() < -clip_threshold(w):
            raise DomainError(f"{name} must be PSD, min eigenvalue {w.min():.3e}")
    root = matrix_function(am, "sqrt")
    inner = root @ bm @ root
    lam = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    return float(np.sqrt(np.clip(lam, 0.0, None)).sum())


def _golden_min(fn, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section minimum of a unimodal function on [lo, hi]."""
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fn(x1), fn(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fn(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fn(x2)
    x = x1 if f1 <= f2 else x2
    return x, min(f1, f2)


def _overlap_curve(a: np.ndarray, b: np.ndarray):
    """s -> tr[a^(1-s) b^s] with the on-support convention at the endpoints."""
    alam, avec = eigh(a)
    blam, bvec = eigh(b)
    a_on = support_mask(alam)
    b_on = support_mask(blam)
    cross = np.abs(avec[:, a_on].conj().T @ bvec[:, b_on]) ** 2
    la = alam[a_on]
    lb = blam[b_on]

    def q(s: float) -> float:
        if not la.size or not lb.size:
            return 0.0
        wa = la ** (1.0 - s)
        wb = lb**s
        return float(wa @ cross @ wb)

    return q


def chernoff_overlap(rho, sigma) -> tuple[float, float]:
    """Minimize tr[rho^(1-s) sigma^s] over s in [0,1].

    Returns (s_star, value).  Flat curves (identical states) break the tie at
    s = 1/2.
    """
    rm, sm = _mat(rho), _mat(sigma)
    _check_same_dim(rm, sm)
    q = _overlap_curve(rm, sm)
    s_star, val = _golden_min(q, 0.0, 1.0, OVERLAP_S_TOL)
    for s_cand in (0.0, 0.5, 1.0):
        v = q(s_cand)
        if v < val - 1e-15:
            s_star, val = s_cand, v
    if abs(q(0.5) - val) <= 1e-12:
        s_star, val = 0.5, q(0.5)
    return float(s_star), float(max(val, 0.0))


@dataclass(frozen=True, eq=False)
class BetaResult:
    """Outcome of a type-II error minimization at type-I level eps.

    `dh` is -log(beta) in nats (math.inf when beta is exactly zero).  For the
    Neyman-Pearson construction `threshold` and `boundary_weight` record the
    cut t and the randomization weight on the boundary eigenspace; set-valued
    problems leave them as None.
    """

    beta: float
    dh: float
    test: np.ndarray
    threshold: float | None = None
    boundary_weight: float | None = None


def _beta_result(beta: float, test: np.ndarray, threshold=None, weight=None) -> BetaResult:
    beta = float(min(max(beta, 0.0), 1.0 + 1e-12))
    dh = math.inf if beta <= 0.0 else -math.log(beta)
    return BetaResult(beta, dh, test, threshold, weight)


def _np_split(rho: np.ndarray, sigma: np.ndarray, t: float):
    """Spectral split of rho - t*sigma into strict-positive and boundary parts."""
    lam, u = eigh(rho - t * sigma)
    thr = clip_threshold(lam)
    pos = lam > thr
    bnd = np.abs(lam) <= thr
    p_pos = u[:, pos] @ u[:, pos].conj().T
    p_bnd = u[:, bnd] @ u[:, bnd].conj().T
    h = float(np.real(np.trace(rho @ p_pos)))
    a0 = float(np.real(np.trace(rho @ p_bnd)))
    b_pos = float(np.real(np.trace(sigma @ p_pos)))
    b0 = float(np.real(np.trace(sigma @ p_bnd)))
    return h, a0, b_pos, b0, p_pos, p_bnd


def beta_eps(rho, sigma, eps: float) -> BetaResult:
    """Smallest type-II error at type-I level eps (quantum Neyman-Pearson).

    The optimal test is the strictly positive part of rho - t*sigma plus a
    single randomization weight on the boundary eigenspace; t is located by
    bisection on the type-I error and the weight then solved exactly.
    """
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"eps must lie in (0,1), got {eps}")
    rm, sm = _mat(rho), _mat(sigma)
    _check_same_dim(rm, sm)
    need = 1.0 - eps

    slam, svec = eigh(sm)
    s_on = support_mask(slam)
    if not s_on.all():
        kernel = svec[:, ~s_on] @ svec[:, ~s_on].conj().T
        mass = float(np.real(np.trace(rm @ kernel)))
        if mass >= need - 1e-12:
            beta = float(np.real(np.trace(sm @ kernel)))
            return _beta_result(max(beta, 0.0), kernel, math.inf, 0.0)

    lam_max_rho = float(np.linalg.eigvalsh(rm).max())
    lam_min_sigma = float(slam[s_on].min())
    lo, hi = 0.0, lam_max_rho / lam_min_sigma + 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        h, a0, b_pos, b0, p_pos, p_bnd = _np_split(rm, sm, mid)
        if h > need + 1e-10:
            lo = mid
        elif h + a0 < need - 1e-10:
            hi = mid
        else:
            w = 0.0 if a0 <= 0.0 else min(max((need - h) / a0, 0.0), 1.0)
            test = p_pos + w * p_bnd
            return _beta_result(b_pos + w * b0, test, mid, w)
    h, a0, b_pos, b0, p_pos, p_bnd = _np_split(rm, sm, lo)
    w = 0.0 if a0 <= 0.0 else min(max((need - h) / a0, 0.0), 1.0)
    return _beta_result(b_pos + w * b0, p_pos + w * p_bnd, lo, w)


def _as_psd_family(items, name: str) -> list[np.ndarray]:
    mats = [_mat(x) for x in items]
    if not mats:
        raise ValidationError(f"{name} must be nonempty")
    dim = mats[0].shape
    for m in mats:
        if m.shape != dim:
            raise ValidationError(f"{name} members differ in dimension")
    return mats


def _project_interval(t: np.ndarray) -> np.ndarray:
    """Project a Hermitian matrix onto the operator interval [0, I]."""
    lam, u = eigh(t)
    lam = np.clip(lam, 0.0, 1.0)
    out = (u * lam) @ u.conj().T
    return 0.5 * (out + out.conj().T)


def _group_objective(t: np.ndarray, fam1, fam2):
    v1 = [float(np.real(np.trace(m @ (np.eye(t.shape[0]) - t)))) for m in fam1]
    v2 = [float(np.real(np.trace(m @ t))) for m in fam2]
    j = int(np.argmax(v1))
    k = int(np.argmax(v2))
    return v1[j] + v2[k], j, k


def _random_tests(dim: int, count: int, rng) -> list[np.ndarray]:
    tests = []
    for _ in range(count):
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, _ = np.linalg.qr(g)
        lam = rng.uniform(0.0, 1.0, size=dim)
        tests.append((q * lam) @ q.conj().T)
    return tests


def group_error_sum(s1, s2, iterations: int = GROUP_ITERATIONS, probes: int = GROUP_CERTIFICATE_SAMPLES):
    """Two-family discrimination error inf_T [max type-I + max type-II].

    Minimized by projected subgradient descent on the operator interval
    [0, I], warm-started at the positive-part projector of
    (sum S1 - sum S2) and restarted over a geometrically decaying step
    schedule (step mult/sqrt(k) within a phase).  The incumbent also sweeps
    the trivial tests and `probes` random feasible tests, so premature
    convergence is corrected rather than merely detected.  Inputs may be
    unnormalized PSD operators.

    Returns (value, test); the value is exactly the objective at the test.
    """
    fam1 = _as_psd_family(s1, "S1")
    fam2 = _as_psd_family(s2, "S2")
    _check_same_dim(fam1[0], fam2[0])
    dim = fam1[0].shape[0]
    eye = np.eye(dim)

    gap_op = sum(fam1) - sum(fam2)
    lam, u = eigh(gap_op)
    pos = lam > 0.0
    warm = u[:, pos] @ u[:, pos].conj().T

    best_t = warm
    best_val, _, _ = _group_objective(warm, fam1, fam2)
    for trivial in (np.zeros((dim, dim)), eye):
        val, _, _ = _group_objective(trivial, fam1, fam2)
        if val < best_val:
            best_val, best_t = val, trivial

    phases = 8
    per_phase = max(1, iterations // phases)
    for phase in range(phases):
        mult = 0.3**phase
        t = best_t
        val, j, k = _group_objective(t, fam1, fam2)
        for it in range(1, per_phase + 1):
            grad = fam2[k] - fam1[j]
            t = _project_interval(t - (mult / math.sqrt(it)) * grad)
            val, j, k = _group_objective(t, fam1, fam2)
            if val < best_val - 1e-15:
                best_val, best_t = val, t

    if probes > 0:
        rng = np.random.default_rng(0)
        for probe in _random_tests(dim, probes, rng):
            val, _, _ = _group_objective(probe, fam1, fam2)
            if val < best_val:
                best_val, best_t = val, probe
    return float(best_val), best_t


def set_beta_constraint(s1, s2, eps: float) -> BetaResult:
    """Worst-case type-II error of one test against two families.

    inf over 0 <= T <= I of max_{sigma in S2} tr(T sigma) subject to
    tr((I-T) rho) <= eps for every rho in S1.  Solved as a Hermitian
    semidefinite program; the returned test satisfies every type-I constraint
    within 1e-8.  T = I is always feasible, so infeasibility can only signal
    a solver failure.
    """
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"eps must lie in (0,1), got {eps}")
    fam1 = _as_psd_family(s1, "S1")
    fam2 = _as_psd_family(s2, "S2")
    _check_same_dim(fam1[0], fam2[0])
    import cvxpy as cp

    dim = fam1[0].shape[0]
    t_var = cp.Variable((dim, dim), hermitian=True)
    level = cp.Variable()
    constraints = [t_var >> 0, np.eye(dim) - t_var >> 0]
    for rho in fam1:
        constraints.append(cp.real(cp.trace(t_var @ rho)) >= 1.0 - eps)
    for sig in fam2:
        constraints.append(cp.real(cp.trace(t_var @ sig)) <= level)
    problem = cp.Problem(cp.Minimize(level), constraints)
    try:
        problem.solve(solver=cp.CLARABEL)
    except cp.error.SolverError as exc:
        raise ConvergenceError(f"conic solver failed: {exc}") from exc
    if t_var.value is None:
        raise ConvergenceError(f"set discrimination solve ended with {problem.status}")

    test = _project_interval(np.asarray(t_var.value))
    worst_violation = max(
        (1.0 - eps) - float(np.real(np.trace(test @ rho))) for rho in fam1
    )
    if worst_violation > 0.0:
        # blend toward the always-feasible T = I just far enough; for states
        # tr(((1-y)T + yI) rho) = (1-y) tr(T rho) + y
        theta = min(1.0, worst_violation / (eps + worst_violation) + 1e-12)
        test = (1.0 - theta) * test + theta * np.eye(dim)
        worst_violation = max(
            (1.0 - eps) - float(np.real(np.trace(test @ rho))) for rho in fam1
        )
    if worst_violation > SET_FEASIBILITY_ATOL:
        raise ConvergenceError(
            f"type-I constraints violated by {worst_violation:.3e} after polishing"
        )
    beta = max(float(np.real(np.trace(test @ sig))) for sig in fam2)
    return _beta_result(beta, test)


def am_upper_bound(s1, s2) -> float:
    """Pairwise-overlap upper bound on the two-family discrimination error.

    sum over pairs (rho, sigma) of min_s sqrt(2 tr[rho^(1-s) sigma^s]).
    """
    fam1 = _as_psd_family(s1, "S1")
    fam2 = _as_psd_family(s2, "S2")
    _check_same_dim(fam1[0], fam2[0])
    total = 0.0
    for rho in fam1:
        for sig in fam2:
            q = _overlap_curve(rho, sig)
            _, val = _golden_min(q, 0.0, 1.0, OVERLAP_S_TOL)
            val = min(val, q(0.0), q(0.5), q(1.0))
            total += math.sqrt(2.0 * max(val, 0.0))
    return float(total)
