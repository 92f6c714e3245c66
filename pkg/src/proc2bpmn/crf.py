"""Linear-chain CRF numerics.

Sequences are packed into a sparse token-feature matrix plus padded index
grids so that the forward-backward recursions run batched over all sentences
at once.  All recursions are in log space.

Scoring model: score(y|x) = sum_t emissions[t, y_t] + sum_t trans[y_{t-1}, y_t];
boundary information enters through BOS/EOS emission features, there are no
separate start/end potentials.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import minimize


def _logsumexp(a: np.ndarray, axis: int) -> np.ndarray:
    m = np.max(a, axis=axis, keepdims=True)
    out = m + np.log(np.sum(np.exp(a - m), axis=axis, keepdims=True))
    return np.squeeze(out, axis=axis)


@dataclass
class PackedData:
    """A batch of labeled (or unlabeled) feature-indexed sequences."""

    X: sp.csr_matrix            # (n_tokens, n_features) feature values
    lengths: np.ndarray         # (B,)
    seq_starts: np.ndarray      # (B,) row offset of each sequence in X
    token_index: np.ndarray     # (B, Tmax) global row ids, 0-padded
    mask: np.ndarray            # (B, Tmax) validity
    labels_flat: np.ndarray | None  # (n_tokens,) tag indices
    labels_padded: np.ndarray | None  # (B, Tmax), 0-padded
    n_tags: int

    @property
    def n_tokens(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]


def pack(
    indexed_seqs: list[list[tuple[np.ndarray, np.ndarray]]],
    label_seqs: list[list[int]] | None,
    n_features: int,
    n_tags: int,
) -> PackedData:
    """Pack per-token (feature index, value) pairs into batch arrays.

    ``indexed_seqs[b][t]`` is a pair of aligned arrays (indices, values) for
    one token.
    """
    rows, cols, vals = [], [], []
    lengths = np.array([len(s) for s in indexed_seqs], dtype=np.int64)
    if len(lengths) == 0 or lengths.min() < 1:
        raise ValueError("sequences must be non-empty")
    row = 0
    for seq in indexed_seqs:
        for idx, val in seq:
            rows.extend([row] * len(idx))
            cols.extend(idx)
            vals.extend(val)
            row += 1
    n_tokens = row
    X = sp.csr_matrix(
        (np.asarray(vals, dtype=np.float64),
         (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(n_tokens, n_features),
    )
    B, Tmax = len(lengths), int(lengths.max())
    seq_starts = np.concatenate([[0], np.cumsum(lengths)[:-1]])
    token_index = np.zeros((B, Tmax), dtype=np.int64)
    mask = np.zeros((B, Tmax), dtype=bool)
    for b, (start, L) in enumerate(zip(seq_starts, lengths)):
        token_index[b, :L] = np.arange(start, start + L)
        mask[b, :L] = True
    labels_flat = labels_padded = None
    if label_seqs is not None:
        labels_flat = np.concatenate([np.asarray(s, dtype=np.int64) for s in label_seqs])
        if labels_flat.shape[0] != n_tokens:
            raise ValueError("label/feature sequence length mismatch")
        labels_padded = np.zeros((B, Tmax), dtype=np.int64)
        labels_padded[mask] = labels_flat
    return PackedData(X, lengths, seq_starts, token_index, mask,
                      labels_flat, labels_padded, n_tags)


def emission_scores(packed: PackedData, W: np.ndarray) -> np.ndarray:
    """(n_tokens, n_tags) emission score matrix."""
    return np.asarray(packed.X @ W)


def _padded_scores(packed: PackedData, emis: np.ndarray) -> np.ndarray:
    scores = emis[packed.token_index]
    scores[~packed.mask] = 0.0
    return scores


def forward_log_z(scores: np.ndarray, mask: np.ndarray, trans: np.ndarray) -> np.ndarray:
    """log Z per sequence via the forward recursion (used standalone in tests)."""
    alphas = _forward(scores, mask, trans)
    return _logsumexp(alphas[:, -1, :], axis=1)


def backward_log_z(scores: np.ndarray, mask: np.ndarray, trans: np.ndarray) -> np.ndarray:
    betas = _backward(scores, mask, trans)
    return _logsumexp(scores[:, 0, :] + betas[:, 0, :], axis=1)


def _forward(scores, mask, trans):
    B, T, Y = scores.shape
    alphas = np.empty((B, T, Y))
    la = scores[:, 0, :].copy()
    alphas[:, 0] = la
    for t in range(1, T):
        cand = scores[:, t, :] + _logsumexp(la[:, :, None] + trans[None, :, :], axis=1)
        la = np.where(mask[:, t, None], cand, la)
        alphas[:, t] = la
    return alphas


def _backward(scores, mask, trans):
    B, T, Y = scores.shape
    betas = np.zeros((B, T, Y))
    lb = np.zeros((B, Y))
    for t in range(T - 2, -1, -1):
        nxt = scores[:, t + 1, :] + lb
        cand = _logsumexp(trans[None, :, :] + nxt[:, None, :], axis=2)
        lb = np.where(mask[:, t + 1, None], cand, lb)
        betas[:, t] = lb
    return betas


def objective(params: np.ndarray, packed: PackedData, lam: float) -> tuple[float, np.ndarray]:
    """Regularized negative log-likelihood and its gradient.

    NLL = -sum_seq [score(y|x) - log Z(x)] + (lam/2) * ||w||^2 where w spans
    both emission and transition weights; the gradient is model-expected
    minus empirical feature counts plus lam * w.
    """
    F, Y = packed.n_features, packed.n_tags
    W = params[: F * Y].reshape(F, Y)
    trans = params[F * Y :].reshape(Y, Y)

    emis = emission_scores(packed, W)
    scores = _padded_scores(packed, emis)
    alphas = _forward(scores, packed.mask, trans)
    betas = _backward(scores, packed.mask, trans)
    log_z = _logsumexp(alphas[:, -1, :], axis=1)

    n = packed.n_tokens
    gold_emit = emis[np.arange(n), packed.labels_flat].sum()
    pair_mask = packed.mask[:, 1:]
    prev_lab = packed.labels_padded[:, :-1][pair_mask]
    next_lab = packed.labels_padded[:, 1:][pair_mask]
    gold_trans_score = trans[prev_lab, next_lab].sum()
    nll = log_z.sum() - (gold_emit + gold_trans_score)
    nll += 0.5 * lam * float(params @ params)

    # unary marginals
    log_marg = alphas + betas - log_z[:, None, None]
    marg = np.exp(log_marg)
    marg[~packed.mask] = 0.0
    marg_flat = np.empty((n, Y))
    marg_flat[packed.token_index[packed.mask]] = marg[packed.mask]
    diff = marg_flat
    diff[np.arange(n), packed.labels_flat] -= 1.0
    grad_W = np.asarray(packed.X.T @ diff)

    # pairwise transition expectations
    right = scores[:, 1:, :] + betas[:, 1:, :]
    pair_log = (
        alphas[:, :-1, :, None]
        + trans[None, None, :, :]
        + right[:, :, None, :]
        - log_z[:, None, None, None]
    )
    pair = np.exp(pair_log)
    pair[~pair_mask] = 0.0
    exp_trans = pair.sum(axis=(0, 1))
    gold_trans = np.zeros((Y, Y))
    np.add.at(gold_trans, (prev_lab, next_lab), 1.0)
    grad_trans = exp_trans - gold_trans

    grad = np.concatenate([grad_W.ravel(), grad_trans.ravel()]) + lam * params
    return float(nll), grad


def viterbi(emis: np.ndarray, trans: np.ndarray) -> tuple[list[int], float]:
    """Highest-scoring tag path for one sequence.

    Ties resolve to the lowest tag index (np.argmax picks the first maximum),
    which realizes the fixed tag-enumeration tie-break order.
    """
    T, Y = emis.shape
    delta = emis[0].copy()
    back = np.zeros((T, Y), dtype=np.int64)
    for t in range(1, T):
        cand = delta[:, None] + trans
        back[t] = np.argmax(cand, axis=0)
        delta = emis[t] + np.max(cand, axis=0)
    best_last = int(np.argmax(delta))
    score = float(delta[best_last])
    path = [best_last]
    for t in range(T - 1, 0, -1):
        path.append(int(back[t, path[-1]]))
    path.reverse()
    return path, score


def path_score(emis: np.ndarray, trans: np.ndarray, labels: list[int]) -> float:
    s = float(emis[np.arange(len(labels)), labels].sum())
    for a, b in zip(labels[:-1], labels[1:]):
        s += float(trans[a, b])
    return s


@dataclass
class TrainResult:
    params: np.ndarray
    final_nll: float
    iterations: int
    converged: bool
    accepted_nlls: list[float]


def minimize_objective(
    packed: PackedData,
    lam: float,
    max_iter: int,
    tol: float,
    optimizer: str = "lbfgs",
) -> TrainResult:
    n_params = packed.n_features * packed.n_tags + packed.n_tags ** 2
    x0 = np.zeros(n_params)
    fun = lambda x: objective(x, packed, lam)
    if optimizer == "lbfgs":
        return _minimize_lbfgs(fun, x0, max_iter, tol)
    if optimizer == "gd":
        return _minimize_gd(fun, x0, max_iter, tol)
    raise ValueError(f"unknown optimizer {optimizer!r}; expected 'lbfgs' or 'gd'")


def _minimize_lbfgs(fun, x0, max_iter, tol) -> TrainResult:
    last = {"f": None}
    accepted = []

    def wrapped(x):
        f, g = fun(x)
        if not np.isfinite(f):
            raise FloatingPointError("non-finite objective during training")
        last["f"] = f
        return f, g

    def callback(_xk):
        accepted.append(last["f"])

    res = minimize(
        wrapped,
        x0,
        jac=True,
        method="L-BFGS-B",
        callback=callback,
        options={"maxiter": max_iter, "gtol": tol, "ftol": 1e-14},
    )
    return TrainResult(res.x, float(res.fun), int(res.nit),
                       bool(res.success), accepted)


def _minimize_gd(fun, x0, max_iter, tol) -> TrainResult:
    """Plain gradient descent with multiplicative step adaptation.

    Steps that would increase the objective are rejected and retried with a
    smaller step, so the accepted-NLL sequence is non-increasing.
    """
    x = x0
    f, g = fun(x)
    if not np.isfinite(f):
        raise FloatingPointError("non-finite objective during training")
    step = 1.0
    accepted = [f]
    it = 0
    converged = False
    for it in range(1, max_iter + 1):
        gnorm = float(np.linalg.norm(g, ord=np.inf))
        if gnorm <= tol:
            converged = True
            break
        improved = False
        while step > 1e-14:
            x_new = x - step * g
            f_new, g_new = fun(x_new)
            if np.isfinite(f_new) and f_new <= f:
                x, f, g = x_new, f_new, g_new
                accepted.append(f)
                step *= 1.3
                improved = True
                break
            step *= 0.5
        if not improved:
            break
    return TrainResult(x, f, it, converged, accepted)
