"""Check the hand-written LSTM backward pass against finite differences."""

import numpy as np

from moff.nn import LSTM, Dense, bce_loss, grad_check

rng = np.random.default_rng(0)
n, steps, dim, hidden = 4, 3, 5, 8
x = rng.normal(size=(n, steps, dim))
lengths = np.array([3, 1, 2, 3])       # ragged: the LSTM reads the state at the true end
y = np.array([0.0, 1.0, 1.0, 0.0])

lstm = LSTM(dim, hidden, 0.2, rng)
head = Dense(hidden, 1, "sigmoid", rng)
mask = lstm.sample_mask(n, rng)        # one dropout mask per sequence, held fixed


def loss():
    return float(bce_loss(head.forward(lstm.forward(x, lengths, mask))[:, 0], y).mean())


p = head.forward(lstm.forward(x, lengths, mask))[:, 0]
dh = head.backward(((p - y) / n)[:, None], pre_activation=True)
lstm.backward(dh)

params = {**{f"lstm.{k}": v for k, v in lstm.params.items()},
          **{f"head.{k}": v for k, v in head.params.items()}}
grads = {**{f"lstm.{k}": v for k, v in lstm.grads.items()},
         **{f"head.{k}": v for k, v in head.grads.items()}}
print("max relative error:", grad_check(loss, params, grads))
