"""States, channels, and classical-quantum channels.

Channels are kept in Kraus form throughout; Choi matrices are never stored.
All containers are frozen dataclasses validated at construction, so any value
that exists satisfies its invariants and can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .linalg import as_hermitian, eigh, support_mask

#: completeness defect allowed for a Kraus family, Frobenius norm
COMPLETENESS_ATOL = 1e-9

#: state defects: trace distance from 1, eigenvalue dip below 0
STATE_ATOL = 1e-10

#: probability vectors must sum to one this tightly
PROB_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace PSD Hermitian matrix."""

    mat: np.ndarray

    def __post_init__(self):
        m = as_hermitian(self.mat, name="state")
        w = np.linalg.eigvalsh(m)
        if w.min() < -STATE_ATOL:
            raise ValidationError(f"state has negative eigenvalue {w.min():.3e}")
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1.0) > STATE_ATOL:
            raise ValidationError(f"state trace is {tr!r}, expected 1")
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def density_from_matrix(m) -> DensityMatrix:
    """Validate a matrix as a density operator."""
    return DensityMatrix(np.asarray(m, dtype=complex))


def pure_state(vec) -> DensityMatrix:
    """Rank-one density matrix |v><v| from a (possibly unnormalized) vector."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValidationError("cannot build a state from the zero vector")
    v = v / n
    return DensityMatrix(np.outer(v, v.conj()))


def maximally_mixed(dim: int) -> DensityMatrix:
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True, eq=False)
class Channel:
    """Completely positive trace-preserving map in Kraus form."""

    kraus: tuple[np.ndarray, ...]
    in_dim: int = field(init=False)
    out_dim: int = field(init=False)

    def __post_init__(self):
        ks = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ks:
            raise ValidationError("a channel needs at least one Kraus operator")
        out_dim, in_dim = ks[0].shape
        for k in ks:
            if k.ndim != 2 or k.shape != (out_dim, in_dim):
                raise ValidationError("Kraus operators must share one shape")
        gram = sum(k.conj().T @ k for k in ks)
        defect = float(np.linalg.norm(gram - np.eye(in_dim)))
        if defect > COMPLETENESS_ATOL:
            raise ValidationError(
                f"Kraus completeness defect {defect:.3e} exceeds {COMPLETENESS_ATOL}"
            )
        object.__setattr__(self, "kraus", ks)
        object.__setattr__(self, "in_dim", in_dim)
        object.__setattr__(self, "out_dim", out_dim)


def channel_from_kraus(kraus) -> Channel:
    """Validate a list of matrices as the Kraus family of a channel."""
    return Channel(tuple(np.asarray(k, dtype=complex) for k in kraus))


def identity_channel(dim: int) -> Channel:
    return Channel((np.eye(dim, dtype=complex),))


def apply_matrix(channel: Channel, m: np.ndarray) -> np.ndarray:
    """Raw action sum_i K_i m K_i^dag without state validation."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (channel.in_dim, channel.in_dim):
        raise ValidationError(
            f"input dim {m.shape} does not match channel input {channel.in_dim}"
        )
    out = np.zeros((channel.out_dim, channel.out_dim), dtype=complex)
    for k in channel.kraus:
        out += k @ m @ k.conj().T
    return out


def channel_apply(channel: Channel, rho: DensityMatrix) -> DensityMatrix:
    """Apply the channel to a state; the output is validated."""
    return DensityMatrix(apply_matrix(channel, rho.mat))


def channel_adjoint_apply(channel: Channel, a) -> np.ndarray:
    """Adjoint action sum_i K_i^dag A K_i (unital: adjoint of I is I)."""
    am = as_hermitian(a, name="observable")
    if am.shape != (channel.out_dim, channel.out_dim):
        raise ValidationError(
            f"observable dim {am.shape} does not match channel output {channel.out_dim}"
        )
    out = np.zeros((channel.in_dim, channel.in_dim), dtype=complex)
    for k in channel.kraus:
        out += k.conj().T @ am @ k
    return 0.5 * (out + out.conj().T)


def channel_tensor(a: Channel, b: Channel) -> Channel:
    """Tensor product channel, Kraus family = all pairwise tensor products."""
    return Channel(tuple(np.kron(ka, kb) for ka in a.kraus for kb in b.kraus))


def channel_power(channel: Channel, copies: int) -> Channel:
    """n-fold tensor power of a channel."""
    if copies < 1:
        raise ValidationError("copies must be >= 1")
    out = channel
    for _ in range(copies - 1):
        out = channel_tensor(out, channel)
    return out


def eb_channel_build(basis, outputs) -> Channel:
    """Measure-and-prepare channel rho -> sum_x <v_x|rho|v_x> rho_x.

    `basis` is an orthonormal basis given as vectors, `outputs` the prepared
    state for each basis vector, in the same order.  Kraus operators are
    sqrt(mu) |e><v_x| over the eigenpairs (mu, e) of each rho_x.
    """
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in basis]
    if not vecs:
        raise ValidationError("basis must be nonempty")
    dim = vecs[0].size
    if len(vecs) != dim:
        raise ValidationError("basis must span the input space")
    v = np.column_stack(vecs)
    if float(np.max(np.abs(v.conj().T @ v - np.eye(dim)))) > 1e-10:
        raise ValidationError("basis is not orthonormal")
    states = list(outputs)
    if len(states) != len(vecs):
        raise ValidationError("need exactly one output state per basis vector")
    kraus = []
    for vx, rho_x in zip(vecs, states):
        rho_x = rho_x if isinstance(rho_x, DensityMatrix) else density_from_matrix(rho_x)
        lam, u = eigh(rho_x.mat)
        for mu, e in zip(lam, u.T):
            if mu <= 1e-14:
                continue
            kraus.append(np.sqrt(mu) * np.outer(e, vx.conj()))
    return Channel(tuple(kraus))


@dataclass(frozen=True, eq=False)
class CQChannel:
    """Map from a finite classical alphabet to quantum output states.

    Symbols are opaque strings; declaration order fixes the block layout of
    effective states and all tie-breaking downstream.
    """

    alphabet: tuple[str, ...]
    outputs: tuple[DensityMatrix, ...]

    def __post_init__(self):
        if not self.alphabet:
            raise ValidationError("alphabet must be nonempty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValidationError("alphabet symbols must be distinct")
        if len(self.outputs) != len(self.alphabet):
            raise ValidationError("need exactly one output per symbol")
        outputs = tuple(
            s if isinstance(s, DensityMatrix) else density_from_matrix(s)
            for s in self.outputs
        )
        dims = {s.dim for s in outputs}
        if len(dims) != 1:
            raise ValidationError("all outputs must share one dimension")
        object.__setattr__(self, "alphabet", tuple(str(x) for x in self.alphabet))
        object.__setattr__(self, "outputs", outputs)

    @property
    def dim(self) -> int:
        return self.outputs[0].dim

    def output(self, symbol: str) -> DensityMatrix:
        try:
            return self.outputs[self.alphabet.index(symbol)]
        except ValueError:
            raise ValidationError(f"unknown symbol {symbol!r}") from None


def cq_channel(mapping: dict) -> CQChannel:
    """CQChannel from an ordered symbol -> state mapping."""
    alphabet = tuple(str(x) for x in mapping)
    outputs = tuple(
        s if isinstance(s, DensityMatrix) else density_from_matrix(s)
        for s in mapping.values()
    )
    return CQChannel(alphabet, outputs)


@dataclass(frozen=True, eq=False)
class ProbDist:
    """Probability distribution over a finite ordered alphabet."""

    alphabet: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        alphabet = tuple(str(x) for x in self.alphabet)
        if w.size != len(alphabet):
            raise ValidationError("one weight per symbol required")
        if w.min() < -PROB_ATOL:
            raise ValidationError(f"negative weight {w.min():.3e}")
        if abs(w.sum() - 1.0) > PROB_ATOL:
            raise ValidationError(f"weights sum to {w.sum()!r}, expected 1")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "weights", np.clip(w, 0.0, None))


def point_mass(alphabet, symbol) -> ProbDist:
    alphabet = tuple(str(x) for x in alphabet)
    w = np.zeros(len(alphabet))
    w[alphabet.index(str(symbol))] = 1.0
    return ProbDist(alphabet, w)


def uniform_dist(alphabet) -> ProbDist:
    alphabet = tuple(str(x) for x in alphabet)
    return ProbDist(alphabet, np.full(len(alphabet), 1.0 / len(alphabet)))


def _check_alphabet(w: CQChannel, p: ProbDist):
    if w.alphabet != p.alphabet:
        raise ValidationError(
            f"alphabet mismatch: channel {w.alphabet} vs distribution {p.alphabet}"
        )


def cq_apply(w: CQChannel, p: ProbDist) -> DensityMatrix:
    """Averaged output sum_x p(x) rho_x."""
    _check_alphabet(w, p)
    out = np.zeros((w.dim, w.dim), dtype=complex)
    for weight, state in zip(p.weights, w.outputs):
        out += weight * state.mat
    return DensityMatrix(out)


def effective_apply(w: CQChannel, p: ProbDist) -> DensityMatrix:
    """Block-diagonal output sum_x p(x) |x><x| (x) rho_x.

    The classical register comes first; blocks follow declaration order.
    """
    _check_alphabet(w, p)
    d = w.dim
    k = len(w.alphabet)
    out = np.zeros((k * d, k * d), dtype=complex)
    for i, (weight, state) in enumerate(zip(p.weights, w.outputs)):
        out[i * d : (i + 1) * d, i * d : (i + 1) * d] = weight * state.mat
    return DensityMatrix(out)


def effective_cq_channel(w: CQChannel) -> CQChannel:
    """The CQ channel x -> |x><x| (x) rho_x seen by an informed receiver."""
    k = len(w.alphabet)
    outputs = []
    for i, state in enumerate(w.outputs):
        reg = np.zeros((k, k), dtype=complex)
        reg[i, i] = 1.0
        outputs.append(DensityMatrix(np.kron(reg, state.mat)))
    return CQChannel(w.alphabet, tuple(outputs))


def cq_to_eb_channel(w: CQChannel, keep_register: bool) -> Channel:
    """Quantum extension measuring the computational basis of C^|X|.

    With keep_register the prepared state is |x><x| (x) rho_x, so applying to
    diag(p) reproduces `effective_apply`; without it the map is
    sigma -> sum_x <x|sigma|x> rho_x and reproduces `cq_apply`.
    """
    k = len(w.alphabet)
    source = effective_cq_channel(w) if keep_register else w
    basis = [np.eye(k, dtype=complex)[:, i] for i in range(k)]
    return eb_channel_build(basis, source.outputs)


def partial_trace_register(m: np.ndarray, register_dim: int, block_dim: int) -> np.ndarray:
    """Trace out the leading classical register of a block matrix."""
    m = np.asarray(m, dtype=complex)
    out = np.zeros((block_dim, block_dim), dtype=complex)
    for i in range(register_dim):
        out += m[i * block_dim : (i + 1) * block_dim, i * block_dim : (i + 1) * block_dim]
    return out


def state_power(rho: DensityMatrix, copies: int) -> DensityMatrix:
    """n-fold tensor power of a state."""
    if copies < 1:
        raise ValidationError("copies must be >= 1")
    out = rho.mat
    for _ in range(copies - 1):
        out = np.kron(out, rho.mat)
    return DensityMatrix(out)


def support_projector(m) -> np.ndarray:
    """Projector onto the support (eigenvalues above the zero clip)."""
    lam, u = eigh(m)
    on = support_mask(lam)
    us = u[:, on]
    return us @ us.conj().T
