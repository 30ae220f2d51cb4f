"""Convex minimization of output divergences over channel inputs.

A small Frank-Wolfe engine runs over products of density-matrix sets and
probability simplices; the linear minimization oracle is the bottom
eigenvector (states) or the most negative coordinate (simplices).  Divergence
arguments depend affinely on the inputs, so the line search works on blended
output matrices and never re-applies a channel.  Iterates falling into the
+inf region are pulled back toward the maximally mixed point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .divergences import _entropy_pair_raw, relative_entropy
from .errors import ValidationError
from .linalg import as_hermitian, frechet_log, matrix_function
from .qobjects import (
    Channel,
    CQChannel,
    DensityMatrix,
    ProbDist,
    apply_matrix,
    channel_adjoint_apply,
    support_projector,
)

#: Frank-Wolfe defaults
FW_TOL = 1e-6
FW_MAX_ITER = 10000
FW_PROBES = 1000
LINE_SEARCH_TOL = 1e-10

#: iterates with infinite objective are pulled this far toward the interior
INTERIOR_DELTA = 1e-3

#: refresh cached outputs from the actual blocks this often (float drift)
REFRESH_EVERY = 500

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class OptResult:
    """Value, witness, iteration count, and Frank-Wolfe gap certificate."""

    value: float
    argument: object
    iterations: int
    gap: float


# ---------------------------------------------------------------------------
# block primitives: a block is a density matrix ("state") or a simplex vector
# ---------------------------------------------------------------------------


def _block_vertex(kind: str, grad: np.ndarray) -> np.ndarray:
    if kind == "state":
        _, u = np.linalg.eigh(grad)
        v = u[:, 0]
        return np.outer(v, v.conj())
    e = np.zeros(grad.shape[0])
    e[int(np.argmin(grad))] = 1.0
    return e


def _block_mixed(kind: str, size: int) -> np.ndarray:
    if kind == "state":
        return np.eye(size, dtype=complex) / size
    return np.full(size, 1.0 / size)


def _block_inner(kind: str, grad: np.ndarray, delta: np.ndarray) -> float:
    if kind == "state":
        return float(np.real(np.trace(grad @ delta)))
    return float(grad @ delta)


def _block_random(kind: str, size: int, rng) -> np.ndarray:
    if kind == "state":
        g = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
        m = g @ g.conj().T
        return m / np.real(np.trace(m))
    return rng.dirichlet(np.ones(size))


def _blend(parts, others, gamma: float):
    return [(1.0 - gamma) * b + gamma * o for b, o in zip(parts, others)]


def _golden_gamma(fn, tol: float = LINE_SEARCH_TOL):
    """Golden-section minimum over [0, 1]; fn may return +inf."""
    a, b = 0.0, 1.0
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
    return (x1, f1) if f1 <= f2 else (x2, f2)


def _fw_minimize(blocks, obj, tol: float, max_iter: int = FW_MAX_ITER):
    """Vanilla Frank-Wolfe with exact line search over a product of blocks.

    `obj` provides kinds, outputs(blocks), value(outputs), and
    grads(blocks, outputs).  Returns (value, blocks-or-None, iterations, gap).
    """
    kinds = obj.kinds
    sizes = [b.shape[0] for b in blocks]
    outs = obj.outputs(blocks)
    val = obj.value(outs)
    if not math.isfinite(val):
        rng = np.random.default_rng(0)
        best_val, best_blocks = math.inf, None
        for _ in range(FW_PROBES):
            cand = [_block_random(k, s, rng) for k, s in zip(kinds, sizes)]
            v = obj.value(obj.outputs(cand))
            if v < best_val:
                best_val, best_blocks = v, cand
        if best_blocks is None:
            return math.inf, None, 0, math.inf
        blocks = best_blocks
        outs = obj.outputs(blocks)
        val = obj.value(outs)

    mixed = [_block_mixed(k, s) for k, s in zip(kinds, sizes)]
    mixed_outs = obj.outputs(mixed)
    gap = math.inf
    iterations = 0
    stall = 0
    for iterations in range(1, max_iter + 1):
        grads = obj.grads(blocks, outs)
        verts = [_block_vertex(k, g) for k, g in zip(kinds, grads)]
        gap = sum(
            _block_inner(k, g, b - v) for k, g, b, v in zip(kinds, grads, blocks, verts)
        )
        if gap <= tol:
            break
        vert_outs = obj.outputs(verts)

        def f_at(gamma: float) -> float:
            return obj.value(_blend(outs, vert_outs, gamma))

        gamma, f_gamma = _golden_gamma(f_at)
        f_one = f_at(1.0)
        if f_one < f_gamma:
            gamma, f_gamma = 1.0, f_one
        if f_gamma >= val - 1e-15:
            stall += 1
            if stall >= 50:
                break
        else:
            stall = 0
        blocks = _blend(blocks, verts, gamma)
        outs = _blend(outs, vert_outs, gamma)
        if iterations % REFRESH_EVERY == 0:
            outs = obj.outputs(blocks)
        val = obj.value(outs)
        tries = 0
        while not math.isfinite(val) and tries < 64:
            blocks = _blend(blocks, mixed, INTERIOR_DELTA)
            outs = _blend(outs, mixed_outs, INTERIOR_DELTA)
            val = obj.value(outs)
            tries += 1
        if not math.isfinite(val):
            break
    return val, blocks, iterations, gap


# ---------------------------------------------------------------------------
# divergence objectives and their gradients
# ---------------------------------------------------------------------------


def _informed_grad(n1: Channel, n2: Channel, out1: np.ndarray, out2: np.ndarray):
    log1 = matrix_function(out1, "log")
    log2 = matrix_function(out2, "log")
    eye = np.eye(n1.out_dim)
    lead = channel_adjoint_apply(n1, log1 - log2 + eye)
    tail = channel_adjoint_apply(n2, frechet_log(out2, out1))
    return lead - tail


class _InformedObjective:
    kinds = ["state"]

    def __init__(self, n1: Channel, n2: Channel):
        self.n1, self.n2 = n1, n2

    def outputs(self, blocks):
        (rho,) = blocks
        return [apply_matrix(self.n1, rho), apply_matrix(self.n2, rho)]

    def value(self, outs):
        return _entropy_pair_raw(outs[0], outs[1])

    def grads(self, blocks, outs):
        return [_informed_grad(self.n1, self.n2, outs[0], outs[1])]


class _PairObjective:
    kinds = ["state", "state"]

    def __init__(self, n1: Channel, n2: Channel):
        self.n1, self.n2 = n1, n2

    def outputs(self, blocks):
        rho, sigma = blocks
        return [apply_matrix(self.n1, rho), apply_matrix(self.n2, sigma)]

    def value(self, outs):
        return _entropy_pair_raw(outs[0], outs[1])

    def grads(self, blocks, outs):
        out1, out2 = outs
        log1 = matrix_function(out1, "log")
        log2 = matrix_function(out2, "log")
        eye = np.eye(self.n1.out_dim)
        g_rho = channel_adjoint_apply(self.n1, log1 - log2 + eye)
        g_sigma = -channel_adjoint_apply(self.n2, frechet_log(out2, out1))
        return [g_rho, g_sigma]


class _CQPairObjective:
    kinds = ["simplex", "simplex"]

    def __init__(self, states1, states2):
        self.stack1 = np.stack([s.mat for s in states1])
        self.stack2 = np.stack([s.mat for s in states2])

    def outputs(self, blocks):
        p, q = blocks
        return [
            np.tensordot(p, self.stack1, axes=1),
            np.tensordot(q, self.stack2, axes=1),
        ]

    def value(self, outs):
        return _entropy_pair_raw(outs[0], outs[1])

    def grads(self, blocks, outs):
        a, b = outs
        core = matrix_function(a, "log") - matrix_function(b, "log") + support_projector(a)
        g_p = np.real(np.einsum("xij,ji->x", self.stack1, core))
        dlog = frechet_log(b, a)
        g_q = -np.real(np.einsum("xij,ji->x", self.stack2, dlog))
        return [g_p, g_q]


class _FrozenBlock:
    """Adapter freezing all but one block of a two-block objective."""

    def __init__(self, base, fixed_blocks, free_index: int):
        self.base = base
        self.fixed = list(fixed_blocks)
        self.free = free_index
        self.kinds = [base.kinds[free_index]]

    def _full(self, blocks):
        full = list(self.fixed)
        full[self.free] = blocks[0]
        return full

    def outputs(self, blocks):
        return self.base.outputs(self._full(blocks))

    def value(self, outs):
        return self.base.value(outs)

    def grads(self, blocks, outs):
        return [self.base.grads(self._full(blocks), outs)[self.free]]


def grad_informed(n1: Channel, n2: Channel, rho) -> np.ndarray:
    """Gradient of rho -> D(N1(rho) || N2(rho)) at a full-support point.

    Only directional derivatives along trace-zero Hermitian directions are
    meaningful; the multiple of the identity carried by the formula does not
    affect them.
    """
    if n1.in_dim != n2.in_dim:
        raise ValidationError("channels must share the input dimension")
    rm = as_hermitian(rho, name="input state")
    out1 = apply_matrix(n1, rm)
    out2 = apply_matrix(n2, rm)
    if not math.isfinite(relative_entropy(out1, out2)):
        raise ValidationError("gradient undefined: outputs violate support containment")
    return _informed_grad(n1, n2, out1, out2)


def minimize_informed(
    n1: Channel,
    n2: Channel,
    tol: float = FW_TOL,
    start: DensityMatrix | None = None,
) -> OptResult:
    """inf over input states of D(N1(rho) || N2(rho)) by Frank-Wolfe.

    Starts from the maximally mixed state unless `start` overrides it.
    """
    if n1.in_dim != n2.in_dim:
        raise ValidationError("channels must share the input dimension")
    first = _block_mixed("state", n1.in_dim) if start is None else start.mat
    val, blocks, iterations, gap = _fw_minimize([first], _InformedObjective(n1, n2), tol)
    witness = None if blocks is None else DensityMatrix(blocks[0])
    return OptResult(val, witness, iterations, gap)


def minimize_inf(
    n1: Channel,
    n2: Channel,
    tol: float = FW_TOL,
    start: tuple[DensityMatrix, DensityMatrix] | None = None,
) -> OptResult:
    """inf over input pairs of D(N1(rho) || N2(sigma)), jointly convex."""
    if n1.in_dim != n2.in_dim:
        raise ValidationError("channels must share the input dimension")
    if start is None:
        blocks0 = [_block_mixed("state", n1.in_dim), _block_mixed("state", n2.in_dim)]
    else:
        blocks0 = [start[0].mat, start[1].mat]
    val, blocks, iterations, gap = _fw_minimize(blocks0, _PairObjective(n1, n2), tol)
    witness = None if blocks is None else (DensityMatrix(blocks[0]), DensityMatrix(blocks[1]))
    return OptResult(val, witness, iterations, gap)


def cq_informed_divergence(w1: CQChannel, w2: CQChannel) -> tuple[float, str]:
    """inf over symbols of D(rho_1x || rho_2x); first declared symbol wins ties."""
    if w1.alphabet != w2.alphabet:
        raise ValidationError("CQ channels must share one alphabet")
    best_val = math.inf
    best_sym = w1.alphabet[0]
    for sym, r1, r2 in zip(w1.alphabet, w1.outputs, w2.outputs):
        val = relative_entropy(r1, r2)
        if val < best_val:
            best_val, best_sym = val, sym
    return best_val, best_sym


def cq_pair_divergence(w1: CQChannel, w2: CQChannel, tol: float = FW_TOL) -> OptResult:
    """inf over distribution pairs of D(W1(p) || W2(p')).

    The alphabets may differ; only the output dimensions must match.
    Alternating sweeps over the two simplices warm-start a joint Frank-Wolfe
    polish; the objective is jointly convex so the split cannot get stuck.
    """
    if w1.dim != w2.dim:
        raise ValidationError("CQ channels must share the output dimension")
    obj = _CQPairObjective(w1.outputs, w2.outputs)
    p = _block_mixed("simplex", len(w1.alphabet))
    q = _block_mixed("simplex", len(w2.alphabet))

    for _ in range(2):
        for free in (0, 1):
            sub = _FrozenBlock(obj, [p, q], free)
            start = [p if free == 0 else q]
            _, blocks, _, _ = _fw_minimize(start, sub, max(tol, 1e-4), max_iter=300)
            if blocks is not None:
                if free == 0:
                    p = blocks[0]
                else:
                    q = blocks[0]

    val, blocks, iterations, gap = _fw_minimize([p, q], obj, tol)
    if blocks is None:
        return OptResult(math.inf, None, iterations, math.inf)
    witness = (ProbDist(w1.alphabet, blocks[0]), ProbDist(w2.alphabet, blocks[1]))
    return OptResult(val, witness, iterations, gap)
