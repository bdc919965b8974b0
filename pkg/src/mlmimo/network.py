"""Unrolled detector network with multi-plateau sigmoid activation.

One iteration mirrors a projected-gradient step on ||y - zG||^2 with
learned per-component step sizes. With row vectors and per-iteration
weight blocks:

    xi_k    = h( z_k W1a^T + (yG^T) W1b^T + (z_k GG^T) W1c^T + v_k W1d^T + bi1 )
    z_{k+1} = sigma_c( xi_k W2^T + bias2 )
    v_{k+1} = xi_k W3^T + bias3

h is sigma_c by default (a standard logistic sigmoid is available as an
ablation switch). An estimate is available after every iteration; the
training loss supervises all of them, which keeps gradients alive across
the activation plateaus. The hidden-variable map v consumes xi_k rather
than z_k: only an (n x xi) map reproduces the per-iteration weight count
6*xi*n (= 42n^2 at xi=7n, 24n^2 at xi=4n).

The one-hot head replaces each level-valued output neuron by M neurons
normalized per group with softmax; the estimate fed to the next
iteration is then the probability-weighted mean level, and training uses
cross-entropy instead of squared error.

backward() is exact reverse-mode differentiation of these equations; the
finite-difference check in the test suite is the anchor for this module.
"""

import numpy as np

from .channel import ChannelModel, Constellation
from .detectors import DetectionResult, slice_levels
from .errors import DimensionMismatch

DEFAULT_LEVEL_SCALE = 10.0


def stable_sigmoid(t):
    t = np.asarray(t, dtype=np.float64)
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    et = np.exp(t[~pos])
    out[~pos] = et / (1.0 + et)
    return out


class MultilevelSigmoid:
    """Sum of shifted logistic sigmoids plus a constant offset.

    Plateaus sit at consecutive integers from `offset` up to
    `offset + len(shifts)`; consecutive plateau centers are level_scale
    apart on the input axis.
    """

    def __init__(self, shifts, offset, level_scale=DEFAULT_LEVEL_SCALE):
        shifts = tuple(float(s) for s in shifts)
        if any(b <= a for a, b in zip(shifts, shifts[1:])):
            raise ValueError(f"shifts must be strictly increasing, got {shifts}")
        self.shifts = shifts
        self.offset = float(offset)
        self.level_scale = float(level_scale)
        self._shift_arr = np.array(shifts)

    def __repr__(self):
        return f"MultilevelSigmoid(shifts={self.shifts}, offset={self.offset})"

    def value(self, t):
        t = np.asarray(t, dtype=np.float64)
        s = stable_sigmoid(t[..., None] - self._shift_arr)
        return s.sum(axis=-1) + self.offset

    def derivative(self, t):
        t = np.asarray(t, dtype=np.float64)
        s = stable_sigmoid(t[..., None] - self._shift_arr)
        return (s * (1.0 - s)).sum(axis=-1)

    __call__ = value

    @property
    def lower(self):
        return self.offset

    @property
    def upper(self):
        return self.offset + len(self.shifts)


class _PlainSigmoid:
    """Standard logistic sigmoid with the same interface (hidden-layer ablation)."""

    def value(self, t):
        return stable_sigmoid(t)

    def derivative(self, t):
        s = stable_sigmoid(t)
        return s * (1.0 - s)

    __call__ = value


def default_activation(c: Constellation, level_scale=DEFAULT_LEVEL_SCALE) -> MultilevelSigmoid:
    """Activation whose plateaus are the constellation levels.

    Generic rule: M-1 sigmoids shifted to the scaled midpoints between
    consecutive levels, offset = lowest level. The centered M=5 set gets
    one extra top sigmoid at level_scale*(hi + 1/2), which reproduces
    sigma(t+15)+sigma(t+5)+sigma(t-5)+sigma(t-15)+sigma(t-25)-2 exactly.
    """
    if c.m < 2:
        raise ValueError("need at least two levels for an activation")
    shifts = [level_scale * (lv + 0.5) for lv in c.levels[:-1]]
    if c.m == 5 and c.lo == -2:
        shifts.append(level_scale * (c.hi + 0.5))
    return MultilevelSigmoid(shifts, float(c.lo), level_scale)


_BLOCK_FIELDS = ("W1_a", "W1_b", "W1_c", "W1_d", "bi1", "W2", "bias2", "W3", "bias3")


class IterationBlock:
    """Weights of one unrolled iteration."""

    __slots__ = ("w1a", "w1b", "w1c", "w1d", "bi1", "w2", "bias2", "w3", "bias3")

    def __init__(self, w1a, w1b, w1c, w1d, bi1, w2, bias2, w3, bias3):
        self.w1a = w1a
        self.w1b = w1b
        self.w1c = w1c
        self.w1d = w1d
        self.bi1 = bi1
        self.w2 = w2
        self.bias2 = bias2
        self.w3 = w3
        self.bias3 = bias3

    def arrays(self):
        return (self.w1a, self.w1b, self.w1c, self.w1d, self.bi1,
                self.w2, self.bias2, self.w3, self.bias3)


def _xavier(rng, rows, cols):
    limit = np.sqrt(6.0 / (rows + cols))
    return (2.0 * rng.uniform((rows, cols)) - 1.0) * limit


class DetectorNetwork:
    """K unrolled iterations of the learned detector."""

    def __init__(self, n, k_iter, xi_size, levels, blocks, activation,
                 head="multilevel", hidden="multilevel", init_policy="zf", seed=0):
        if head not in ("multilevel", "one_hot"):
            raise ValueError(f"unknown head {head!r}")
        if hidden not in ("multilevel", "sigmoid"):
            raise ValueError(f"unknown hidden activation {hidden!r}")
        if init_policy not in ("zf", "random"):
            raise ValueError(f"unknown init policy {init_policy!r}")
        if len(blocks) != k_iter:
            raise ValueError("block count != K")
        self.n = int(n)
        self.k_iter = int(k_iter)
        self.xi_size = int(xi_size)
        self.levels = tuple(int(v) for v in levels)
        self.blocks = list(blocks)
        self.activation = activation
        self.head = head
        self.hidden = hidden
        self.init_policy = init_policy
        self.seed = int(seed)
        out_dim = self.n * len(self.levels) if head == "one_hot" else self.n
        for b in self.blocks:
            shapes = [a.shape for a in b.arrays()]
            want = [(self.xi_size, self.n)] * 4 + [
                (self.xi_size,), (out_dim, self.xi_size), (out_dim,),
                (self.n, self.xi_size), (self.n,)]
            if shapes != want:
                raise ValueError(f"block shapes {shapes} != expected {want}")

    @classmethod
    def initialize(cls, rng, n, k_iter, xi_size, c: Constellation,
                   head="multilevel", hidden="multilevel", init_policy="zf"):
        """Xavier-uniform weights, zero biases."""
        out_dim = n * c.m if head == "one_hot" else n
        blocks = []
        for _ in range(k_iter):
            blocks.append(IterationBlock(
                _xavier(rng, xi_size, n), _xavier(rng, xi_size, n),
                _xavier(rng, xi_size, n), _xavier(rng, xi_size, n),
                np.zeros(xi_size),
                _xavier(rng, out_dim, xi_size), np.zeros(out_dim),
                _xavier(rng, n, xi_size), np.zeros(n),
            ))
        return cls(n, k_iter, xi_size, c.levels, blocks, default_activation(c),
                   head=head, hidden=hidden, init_policy=init_policy, seed=rng.seed)

    # -- parameter access ------------------------------------------------

    def parameters(self):
        """(name, array) pairs, ordered block0..block{K-1}."""
        out = []
        for k, b in enumerate(self.blocks):
            for field, arr in zip(_BLOCK_FIELDS, b.arrays()):
                out.append((f"block{k}.{field}", arr))
        return out

    def count_parameters(self):
        """(weights_only, with_biases); reproduces K*6*xi*n weights for
        the multilevel head."""
        weights = 0
        biases = 0
        for name, arr in self.parameters():
            if name.split(".")[1].startswith(("bi", "bias")):
                biases += arr.size
            else:
                weights += arr.size
        return weights, weights + biases

    @property
    def constellation(self) -> Constellation:
        return Constellation(self.levels)

    def _hidden_act(self):
        return self.activation if self.hidden == "multilevel" else _PlainSigmoid()

    # -- forward ---------------------------------------------------------

    def run_cached(self, y, model: ChannelModel, z0, v0=None):
        """Forward pass keeping every intermediate (for backward)."""
        y = np.atleast_2d(np.asarray(y, dtype=np.float64))
        z0 = np.atleast_2d(np.asarray(z0, dtype=np.float64))
        if y.shape[1] != self.n or model.n != self.n:
            raise DimensionMismatch(
                f"y has {y.shape[1]} components, network n={self.n}, channel n={model.n}")
        if z0.shape != y.shape:
            raise DimensionMismatch(f"z0 shape {z0.shape} != y shape {y.shape}")
        if v0 is None:
            v0 = np.zeros_like(y)
        else:
            v0 = np.atleast_2d(np.asarray(v0, dtype=np.float64))
        hidden = self._hidden_act()
        levels = np.array(self.levels, dtype=np.float64)
        p = y @ model.gt
        cache = {"p": p, "z": [z0], "v": [v0], "zc": [], "a": [], "xi": [],
                 "b": [], "probs": []}
        z, v = z0, v0
        for blk in self.blocks:
            zc = z @ model.ggt
            a = z @ blk.w1a.T + p @ blk.w1b.T + zc @ blk.w1c.T + v @ blk.w1d.T + blk.bi1
            xi = hidden.value(a)
            b = xi @ blk.w2.T + blk.bias2
            if self.head == "one_hot":
                logits = b.reshape(b.shape[0], self.n, len(levels))
                shifted = logits - logits.max(axis=-1, keepdims=True)
                ex = np.exp(shifted)
                probs = ex / ex.sum(axis=-1, keepdims=True)
                z_next = probs @ levels
                cache["probs"].append(probs)
            else:
                z_next = self.activation.value(b)
            v_next = xi @ blk.w3.T + blk.bias3
            cache["zc"].append(zc)
            cache["a"].append(a)
            cache["xi"].append(xi)
            cache["b"].append(b)
            cache["z"].append(z_next)
            cache["v"].append(v_next)
            z, v = z_next, v_next
        return cache

    def forward(self, y, model: ChannelModel, z0, v0=None):
        """Per-iteration estimates z_1..z_K (level-valued for both heads)."""
        squeeze = np.asarray(y).ndim == 1
        ests = self.run_cached(y, model, z0, v0)["z"][1:]
        return [e[0] if squeeze else e for e in ests]

    def forward_probs(self, y, model: ChannelModel, z0, v0=None):
        """Per-iteration per-component probability tensors (one_hot head)."""
        if self.head != "one_hot":
            raise ValueError("forward_probs requires the one_hot head")
        squeeze = np.asarray(y).ndim == 1
        probs = self.run_cached(y, model, z0, v0)["probs"]
        return [p[0] if squeeze else p for p in probs]

    def decide(self, y, model: ChannelModel, z0) -> np.ndarray:
        """Hard decisions for a (B, n) batch."""
        cache = self.run_cached(y, model, z0)
        if self.head == "one_hot":
            idx = np.argmax(cache["probs"][-1], axis=-1)
            return np.array(self.levels, dtype=np.int64)[idx]
        return slice_levels(cache["z"][-1], self.constellation)

    def detect(self, y, model: ChannelModel, z0) -> DetectionResult:
        cache = self.run_cached(y, model, z0)
        if self.head == "one_hot":
            idx = np.argmax(cache["probs"][-1], axis=-1)
            z_hat = np.array(self.levels, dtype=np.int64)[idx][0]
            return DetectionResult(z_hat, z_hat.astype(np.float64))
        z_soft = cache["z"][-1][0]
        return DetectionResult(slice_levels(z_soft, self.constellation), z_soft)


def _loss_from_cache(net: DetectorNetwork, cache, labels):
    labels = np.atleast_2d(np.asarray(labels, dtype=np.float64))
    batch = labels.shape[0]
    k = net.k_iter
    if net.head == "one_hot":
        idx = (labels - net.levels[0]).astype(np.int64)
        total = 0.0
        for probs in cache["probs"]:
            picked = np.take_along_axis(probs, idx[:, :, None], axis=-1)[:, :, 0]
            total += float(-np.log(np.maximum(picked, 1e-300)).sum())
        return total / (batch * k * net.n)
    total = 0.0
    for z_est in cache["z"][1:]:
        r = z_est - labels
        total += float((r * r).sum())
    return total / (batch * k)


def loss(net: DetectorNetwork, y, labels, model: ChannelModel, z0, v0=None) -> float:
    """Batch-mean, iteration-averaged training loss: squared error on the
    level-valued estimates (multilevel head) or cross-entropy (one_hot)."""
    return _loss_from_cache(net, net.run_cached(y, model, z0, v0), labels)


def backward(net: DetectorNetwork, y, labels, model: ChannelModel, z0, v0=None):
    """Exact gradients of loss() w.r.t. every weight and bias.

    Returns (loss_value, dict name -> gradient array).
    """
    cache = net.run_cached(y, model, z0, v0)
    labels = np.atleast_2d(np.asarray(labels, dtype=np.float64))
    batch = labels.shape[0]
    k_iter = net.k_iter
    hidden = net._hidden_act()
    levels = np.array(net.levels, dtype=np.float64)
    ggt = model.ggt
    p = cache["p"]

    grads = {name: np.zeros_like(arr) for name, arr in net.parameters()}
    d_z_next = np.zeros_like(labels)  # dL/dz_{k+1} from later blocks
    d_v_next = np.zeros_like(labels)  # dL/dv_{k+1} from later blocks

    if net.head == "one_hot":
        idx = (labels - net.levels[0]).astype(np.int64)
        onehot = np.zeros((batch, net.n, len(levels)))
        np.put_along_axis(onehot, idx[:, :, None], 1.0, axis=-1)
        ce_coef = 1.0 / (batch * k_iter * net.n)
    else:
        mse_coef = 2.0 / (batch * k_iter)

    for k in range(k_iter - 1, -1, -1):
        blk = net.blocks[k]
        name = f"block{k}"
        z_k = cache["z"][k]
        v_k = cache["v"][k]
        xi = cache["xi"][k]
        if net.head == "one_hot":
            probs = cache["probs"][k]
            d_logits = ce_coef * (probs - onehot)
            if np.any(d_z_next):
                # z_{k+1} = probs @ levels, through the softmax Jacobian
                d_probs = d_z_next[:, :, None] * levels[None, None, :]
                d_logits = d_logits + probs * (
                    d_probs - (d_probs * probs).sum(axis=-1, keepdims=True))
            d_b = d_logits.reshape(batch, -1)
        else:
            d_z_out = d_z_next + mse_coef * (cache["z"][k + 1] - labels)
            d_b = d_z_out * net.activation.derivative(cache["b"][k])
        grads[f"{name}.W2"] += d_b.T @ xi
        grads[f"{name}.bias2"] += d_b.sum(axis=0)
        d_xi = d_b @ blk.w2 + d_v_next @ blk.w3
        grads[f"{name}.W3"] += d_v_next.T @ xi
        grads[f"{name}.bias3"] += d_v_next.sum(axis=0)
        d_a = d_xi * hidden.derivative(cache["a"][k])
        grads[f"{name}.W1_a"] += d_a.T @ z_k
        grads[f"{name}.W1_b"] += d_a.T @ p
        grads[f"{name}.W1_c"] += d_a.T @ cache["zc"][k]
        grads[f"{name}.W1_d"] += d_a.T @ v_k
        grads[f"{name}.bi1"] += d_a.sum(axis=0)
        d_z_next = d_a @ blk.w1a + (d_a @ blk.w1c) @ ggt.T
        d_v_next = d_a @ blk.w1d

    return _loss_from_cache(net, cache, labels), grads
