"""Small numpy layers with hand-written backward passes.

Every layer keeps its parameters in ``params`` and, after ``backward``, the
matching gradients in ``grads`` (same keys, same shapes).  Forward passes
cache whatever the backward pass needs, so a layer handles one forward /
backward pair at a time.
"""

from __future__ import annotations

from typing import Callable, Mapping

import numpy as np

EPSILON = 1e-7


def sigmoid(z):
    # split by sign so exp never overflows
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def relu(z):
    return np.maximum(z, 0.0)


ACTIVATIONS = {
    "relu": relu,
    "sigmoid": sigmoid,
    "identity": lambda z: np.asarray(z, dtype=np.float64),
}


def bce_loss(p, y, eps: float = EPSILON):
    """Binary cross-entropy with `p` clamped into [eps, 1 - eps]."""
    p = np.clip(np.asarray(p, dtype=np.float64), eps, 1.0 - eps)
    y = np.asarray(y, dtype=np.float64)
    return -(y * np.log(p) + (1.0 - y) * np.log1p(-p))


# -- initializers -------------------------------------------------------------

def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def orthogonal(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    a = rng.standard_normal((max(rows, cols), min(rows, cols)))
    q, r = np.linalg.qr(a)
    q *= np.sign(np.diag(r))
    return np.ascontiguousarray(q if rows >= cols else q.T)


# -- layers -------------------------------------------------------------------

class Embedding:
    """Lookup table; row 0 is padding, stays zero and never gets gradient."""

    def __init__(self, vocab_size: int, dim: int = 50, rng: np.random.Generator | None = None):
        rng = rng or np.random.default_rng(0)
        weights = rng.uniform(-0.05, 0.05, size=(vocab_size, dim))
        weights[0] = 0.0
        self.params = {"weights": weights}
        self.grads = {"weights": np.zeros_like(weights)}
        self._ids = None

    @property
    def dim(self) -> int:
        return self.params["weights"].shape[1]

    def forward(self, ids: np.ndarray) -> np.ndarray:
        self._ids = np.asarray(ids)
        return self.params["weights"][self._ids]

    def backward(self, dout: np.ndarray) -> None:
        g = np.zeros_like(self.params["weights"])
        np.add.at(g, self._ids.ravel(), dout.reshape(-1, g.shape[1]))
        g[0] = 0.0
        self.grads["weights"] = g


class Dense:
    def __init__(self, n_in: int, n_out: int, activation: str = "identity",
                 rng: np.random.Generator | None = None):
        if activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {activation!r}")
        rng = rng or np.random.default_rng(0)
        self.activation = activation
        self.params = {"W": glorot_uniform(rng, n_in, n_out), "b": np.zeros(n_out)}
        self.grads = {k: np.zeros_like(v) for k, v in self.params.items()}
        self._x = self._out = None

    @property
    def n_in(self) -> int:
        return self.params["W"].shape[0]

    @property
    def n_out(self) -> int:
        return self.params["W"].shape[1]

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.n_in:
            raise ValueError(f"dense layer expects width {self.n_in}, got {x.shape[-1]}")
        self._x = x
        self._out = ACTIVATIONS[self.activation](x @ self.params["W"] + self.params["b"])
        return self._out

    def backward(self, dout: np.ndarray, pre_activation: bool = False) -> np.ndarray:
        """Backpropagate `dout`; with `pre_activation` it is already dL/dz."""
        dz = dout
        if not pre_activation:
            if self.activation == "relu":
                dz = dout * (self._out > 0)
            elif self.activation == "sigmoid":
                dz = dout * self._out * (1.0 - self._out)
        x2 = self._x.reshape(-1, self.n_in)
        dz2 = dz.reshape(-1, self.n_out)
        self.grads["W"] = x2.T @ dz2
        self.grads["b"] = dz2.sum(axis=0)
        return dz @ self.params["W"].T


def dense_forward(x, layer: Dense) -> np.ndarray:
    return layer.forward(x)


class LSTM:
    """Single-layer LSTM; gate order [input, forget, candidate, output].

    Recurrent dropout multiplies the previous hidden state by a per-sequence
    mask inside the recurrent term only.  The layer returns the hidden state
    after each sequence's last real (non-pad) step.
    """

    def __init__(self, n_in: int, hidden: int, recurrent_dropout: float = 0.0,
                 rng: np.random.Generator | None = None):
        if not 0.0 <= recurrent_dropout < 1.0:
            raise ValueError("recurrent_dropout must lie in [0, 1)")
        rng = rng or np.random.default_rng(0)
        b = np.zeros(4 * hidden)
        b[hidden:2 * hidden] = 1.0
        self.hidden = hidden
        self.recurrent_dropout = recurrent_dropout
        self.params = {
            "Wx": glorot_uniform(rng, n_in, 4 * hidden),
            "Wh": orthogonal(rng, hidden, 4 * hidden),
            "b": b,
        }
        self.grads = {k: np.zeros_like(v) for k, v in self.params.items()}
        self._cache = None

    def sample_mask(self, batch: int, rng: np.random.Generator) -> np.ndarray:
        rate = self.recurrent_dropout
        if rate == 0.0:
            return np.ones((batch, self.hidden))
        keep = rng.random((batch, self.hidden)) >= rate
        return keep / (1.0 - rate)

    def step(self, x_t, h, c, mask=None):
        """One timestep; returns (h', c', gate activations)."""
        if mask is None:
            mask = 1.0
        H = self.hidden
        z = x_t @ self.params["Wx"] + (h * mask) @ self.params["Wh"] + self.params["b"]
        i = sigmoid(z[..., :H])
        f = sigmoid(z[..., H:2 * H])
        g = np.tanh(z[..., 2 * H:3 * H])
        o = sigmoid(z[..., 3 * H:])
        c_new = f * c + i * g
        h_new = o * np.tanh(c_new)
        return h_new, c_new, (i, f, g, o)

    def forward(self, x: np.ndarray, lengths: np.ndarray | None = None,
                mask: np.ndarray | None = None) -> np.ndarray:
        """Run over x of shape (batch, time, n_in); return final hidden states."""
        x = np.asarray(x, dtype=np.float64)
        n, T, _ = x.shape
        if lengths is None:
            lengths = np.full(n, T)
        lengths = np.asarray(lengths)
        if mask is None:
            mask = np.ones((n, self.hidden))
        steps = int(lengths.max()) if n else 0
        hs = np.zeros((steps + 1, n, self.hidden))
        cs = np.zeros_like(hs)
        gates = []
        for t in range(steps):
            hs[t + 1], cs[t + 1], gt = self.step(x[:, t], hs[t], cs[t], mask)
            gates.append(gt)
        self._cache = (x, lengths, mask, hs, cs, gates)
        return hs[lengths, np.arange(n)]

    def backward(self, dh_final: np.ndarray) -> np.ndarray:
        x, lengths, mask, hs, cs, gates = self._cache
        n, T, _ = x.shape
        H = self.hidden
        Wx, Wh = self.params["Wx"], self.params["Wh"]
        dWx, dWh, db = np.zeros_like(Wx), np.zeros_like(Wh), np.zeros(4 * H)
        dx = np.zeros_like(x)
        dh = np.zeros((n, H))
        dc = np.zeros((n, H))
        for t in range(len(gates) - 1, -1, -1):
            # inject the output gradient at each sequence's last real step
            dh = dh + dh_final * (lengths == t + 1)[:, None]
            i, f, g, o = gates[t]
            tc = np.tanh(cs[t + 1])
            dc = dc + dh * o * (1.0 - tc * tc)
            dz = np.concatenate([
                dc * g * i * (1.0 - i),
                dc * cs[t] * f * (1.0 - f),
                dc * i * (1.0 - g * g),
                dh * tc * o * (1.0 - o),
            ], axis=1)
            h_in = hs[t] * mask
            dWx += x[:, t].T @ dz
            dWh += h_in.T @ dz
            db += dz.sum(axis=0)
            dx[:, t] = dz @ Wx.T
            dh = (dz @ Wh.T) * mask
            dc = dc * f
        self.grads = {"Wx": dWx, "Wh": dWh, "b": db}
        return dx


def lstm_step(x_t, h, c, cell: LSTM, rec_mask=None):
    """Single LSTM step on plain vectors; returns (h', c')."""
    args = [np.asarray(a, dtype=np.float64) for a in (x_t, h, c)]
    if not all(np.all(np.isfinite(a)) for a in args):
        raise ValueError("lstm_step received non-finite input")
    h_new, c_new, _ = cell.step(*args, mask=rec_mask)
    return h_new, c_new


def mean_pool(x: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Average over the first `lengths[b]` steps of x (batch, time, dim)."""
    valid = (np.arange(x.shape[1])[None, :] < lengths[:, None]).astype(np.float64)
    denom = np.maximum(lengths, 1)[:, None]
    return (x * valid[..., None]).sum(axis=1) / denom


def mean_pool_backward(dout: np.ndarray, lengths: np.ndarray, T: int) -> np.ndarray:
    valid = (np.arange(T)[None, :] < lengths[:, None]).astype(np.float64)
    denom = np.maximum(lengths, 1)[:, None]
    return (dout / denom)[:, None, :] * valid[..., None]


# -- optimization ---------------------------------------------------------------

class Adam:
    """Adam with bias correction; one state entry per named parameter."""

    def __init__(self, lr: float = 0.001, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-7):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.step_count = 0
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}

    def step(self, params: Mapping[str, np.ndarray], grads: Mapping[str, np.ndarray]) -> None:
        """Update `params` in place."""
        self.step_count += 1
        t = self.step_count
        for name, p in params.items():
            g = grads[name]
            if g.shape != p.shape:
                raise ValueError(f"gradient for {name} has shape {g.shape}, expected {p.shape}")
            m = self.m.setdefault(name, np.zeros_like(p))
            v = self.v.setdefault(name, np.zeros_like(p))
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            m_hat = m / (1.0 - self.beta1 ** t)
            v_hat = v / (1.0 - self.beta2 ** t)
            p -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def optimizer_step(params, grads, state: Adam) -> None:
    state.step(params, grads)


# -- verification -------------------------------------------------------------

def grad_check(loss_fn: Callable[[], float], params: Mapping[str, np.ndarray],
               grads: Mapping[str, np.ndarray], eps: float = 1e-5,
               max_coords: int | None = None,
               rng: np.random.Generator | None = None) -> float:
    """Largest relative error between analytic and central-difference gradients.

    `loss_fn` re-evaluates the loss reading the arrays in `params`, which are
    perturbed in place and restored.  With `max_coords`, at most that many
    coordinates per parameter are sampled.
    """
    worst = 0.0
    for name, p in params.items():
        flat = p.reshape(-1)
        if not np.shares_memory(flat, p):
            raise ValueError(f"parameter {name} must be contiguous")
        coords = np.arange(flat.size)
        if max_coords is not None and flat.size > max_coords:
            coords = (rng or np.random.default_rng(0)).choice(flat.size, max_coords, replace=False)
        analytic = np.asarray(grads[name]).reshape(-1)
        for k in coords:
            orig = flat[k]
            flat[k] = orig + eps
            up = loss_fn()
            flat[k] = orig - eps
            down = loss_fn()
            flat[k] = orig
            numeric = (up - down) / (2.0 * eps)
            a = analytic[k]
            err = abs(a - numeric) / max(1e-8, abs(a) + abs(numeric))
            worst = max(worst, err)
    return worst
