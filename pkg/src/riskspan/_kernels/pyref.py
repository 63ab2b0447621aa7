"""Pure-numpy kernels: per-document encoder forward and backward.

This is the fallback backend and the readable reference for the compiled
extension. Both backends implement the same two entry points:

    forward(kind, params, ids)                      -> (H, h, p_span, p_cls)
    backward(kind, params, grads, ids, tags, y,
             lam, cls_weight, scale)                -> (l_span, l_cls)

``kind`` is 0 (window-mean encoder) or 1 (single-head self-attention).
``params``/``grads`` are same-shaped float64 array lists in canonical order:

    window:    [E, P, W1, W2, Ws, bs, Wc, bc]
    attention: [E, P, Wq, Wk, Wv, Wo, W1, W2, Ws, bs, Wc, bc]

``backward`` accumulates ``scale * d(l_total)/d(theta)`` into ``grads`` and
returns the document's span and classification losses (the latter already
multiplied by ``cls_weight``).
"""

from __future__ import annotations

import numpy as np

NAME = "python"

KIND_WINDOW = 0
KIND_ATTENTION = 1

#: Probabilities are clamped here before log; the losses are undefined at 0.
LOG_EPS = 1e-12

#: Window-mean encoder averages x over token positions [i-2, i+2].
WINDOW_RADIUS = 2


def _softmax_rows(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _window_mean(x: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    prefix = np.zeros((n + 1, x.shape[1]))
    np.cumsum(x, axis=0, out=prefix[1:])
    lo = np.maximum(np.arange(n) - WINDOW_RADIUS, 0)
    hi = np.minimum(np.arange(n) + WINDOW_RADIUS + 1, n)
    return (prefix[hi] - prefix[lo]) / (hi - lo)[:, None]


def _window_mean_backward(dm: np.ndarray) -> np.ndarray:
    # j lands in window(i) iff i lands in window(j), so spreading dm/count
    # back over x reuses the same clipped-window sum.
    n = dm.shape[0]
    lo = np.maximum(np.arange(n) - WINDOW_RADIUS, 0)
    hi = np.minimum(np.arange(n) + WINDOW_RADIUS + 1, n)
    w = dm / (hi - lo)[:, None]
    prefix = np.zeros((n + 1, dm.shape[1]))
    np.cumsum(w, axis=0, out=prefix[1:])
    return prefix[hi] - prefix[lo]


def _encode_window(params: list[np.ndarray], ids: np.ndarray):
    E, P, W1, W2 = params[0], params[1], params[2], params[3]
    x = E[ids] + P[: len(ids)]
    m = _window_mean(x)
    t = np.tanh(m @ W1.T)
    H = t @ W2.T
    return x, m, t, H


def _encode_attention(params: list[np.ndarray], ids: np.ndarray):
    E, P, Wq, Wk, Wv, Wo, W1, W2 = params[:8]
    x = E[ids] + P[: len(ids)]
    q = x @ Wq.T
    k = x @ Wk.T
    v = x @ Wv.T
    scores = (q @ k.T) / np.sqrt(Wq.shape[0])
    A = _softmax_rows(scores)
    attn = A @ v
    u = x + attn @ Wo.T
    t = np.tanh(u @ W1.T)
    H = u + t @ W2.T
    return x, q, k, v, A, attn, u, t, H


def _heads(params: list[np.ndarray], H: np.ndarray):
    Ws, bs, Wc, bc = params[-4], params[-3], params[-2], params[-1]
    h = H.mean(axis=0)
    p_span = _softmax_rows(H @ Ws.T + bs)
    p_cls = _softmax_rows(Wc @ h + bc)
    return h, p_span, p_cls


def forward(kind: int, params: list[np.ndarray], ids: np.ndarray):
    """Per-token representations, pooled vector, and both head distributions."""
    if kind == KIND_WINDOW:
        H = _encode_window(params, ids)[-1]
    elif kind == KIND_ATTENTION:
        H = _encode_attention(params, ids)[-1]
    else:
        raise ValueError(f"unknown encoder kind {kind}")
    h, p_span, p_cls = _heads(params, H)
    return H, h, p_span, p_cls


def backward(
    kind: int,
    params: list[np.ndarray],
    grads: list[np.ndarray],
    ids: np.ndarray,
    tags: np.ndarray,
    y: int,
    lam: float,
    cls_weight: float,
    scale: float,
) -> tuple[float, float]:
    """Accumulate scaled gradients of one document's combined loss."""
    n = len(ids)
    if kind == KIND_WINDOW:
        x, m, t, H = _encode_window(params, ids)
    elif kind == KIND_ATTENTION:
        x, q, k, v, A, attn, u, t, H = _encode_attention(params, ids)
    else:
        raise ValueError(f"unknown encoder kind {kind}")
    Ws, bs, Wc, bc = params[-4], params[-3], params[-2], params[-1]
    h, p_span, p_cls = _heads(params, H)

    picked = p_span[np.arange(n), tags]
    l_span = float(-np.log(np.clip(picked, LOG_EPS, 1.0)).mean())
    l_cls = float(-cls_weight * np.log(max(p_cls[y], LOG_EPS)))

    gWs, gbs, gWc, gbc = grads[-4], grads[-3], grads[-2], grads[-1]

    # Softmax + cross-entropy at both heads: gradient is (p - onehot).
    dlogits_cls = (1.0 - lam) * cls_weight * p_cls
    dlogits_cls[y] -= (1.0 - lam) * cls_weight
    gWc += scale * np.outer(dlogits_cls, h)
    gbc += scale * dlogits_cls
    dH = np.broadcast_to((Wc.T @ dlogits_cls) / n, H.shape).copy()

    dlogits_span = (lam / n) * p_span
    dlogits_span[np.arange(n), tags] -= lam / n
    gWs += scale * (dlogits_span.T @ H)
    gbs += scale * dlogits_span.sum(axis=0)
    dH += dlogits_span @ Ws

    if kind == KIND_WINDOW:
        E, P, W1, W2 = params[:4]
        gE, gP, gW1, gW2 = grads[:4]
        gW2 += scale * (dH.T @ t)
        dz = (dH @ W2) * (1.0 - t * t)
        gW1 += scale * (dz.T @ m)
        dm = dz @ W1
        dx = _window_mean_backward(dm)
    else:
        E, P, Wq, Wk, Wv, Wo, W1, W2 = params[:8]
        gE, gP, gWq, gWk, gWv, gWo, gW1, gW2 = grads[:8]
        gW2 += scale * (dH.T @ t)
        dz = (dH @ W2) * (1.0 - t * t)
        gW1 += scale * (dz.T @ u)
        du = dH + dz @ W1  # residual around the feed-forward block
        gWo += scale * (du.T @ attn)
        dattn = du @ Wo
        dA = dattn @ v.T
        dv = A.T @ dattn
        dscores = A * (dA - np.sum(A * dA, axis=1, keepdims=True))
        dscores /= np.sqrt(Wq.shape[0])
        dq = dscores @ k
        dk = dscores.T @ q
        gWv += scale * (dv.T @ x)
        gWq += scale * (dq.T @ x)
        gWk += scale * (dk.T @ x)
        dx = du + dv @ Wv + dq @ Wq + dk @ Wk  # residual around attention

    np.add.at(gE, ids, scale * dx)
    gP[:n] += scale * dx
    return l_span, l_cls
