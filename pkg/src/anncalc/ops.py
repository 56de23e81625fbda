"""The network algebra: composition, powers, extensions, parallelization,
sums, and identity-mediated concatenation.

Every operation returns a new network whose weight/bias layout is fully
determined, so structural laws (dimension vectors, depths, parameter counts)
hold exactly, not just up to realization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .network import (
    Activation,
    Layer,
    Network,
    RELU,
    ShapeError,
    affine,
    dims,
    realize,
)

__all__ = [
    "IdentityEmulator",
    "compose",
    "concat_identity",
    "extend",
    "identity_net",
    "parallel_equal",
    "parallel_general",
    "power",
    "relu_identity",
    "sum_equal",
    "sum_general",
]


def compose(phi1: Network, phi2: Network) -> Network:
    """Composition realizing ``phi1`` after ``phi2``.

    Copies the interior layers of both operands and fuses the interface into
    the single layer (W_{1,1} W_{2,L2}, W_{1,1} B_{2,L2} + B_{1,1}).
    """
    if phi1.input_dim != phi2.output_dim:
        raise ShapeError(
            f"composition interface mismatch: left network consumes {phi1.input_dim} "
            f"components, right produces {phi2.output_dim} "
            f"(dims {dims(phi1).dims} vs {dims(phi2).dims})"
        )
    first = phi1.layers[0]
    last = phi2.layers[-1]
    fused = Layer(first.weights @ last.weights, first.weights @ last.bias + first.bias)
    return Network(phi2.layers[:-1] + (fused,) + phi1.layers[1:])


def power(phi: Network, n: int) -> Network:
    """n-fold composition of ``phi`` with itself; n = 0 gives (I, 0)."""
    if n < 0:
        raise ShapeError(f"power needs n >= 0, got {n}")
    if phi.input_dim != phi.output_dim:
        raise ShapeError(
            f"power needs a square network, got I={phi.input_dim}, O={phi.output_dim}"
        )
    result = affine(np.eye(phi.output_dim))
    for _ in range(n):
        result = compose(phi, result)
    return result


def identity_net(d: int) -> Network:
    """One-hidden-layer net computing x = max(x,0) - max(-x,0) under ReLU.

    Dimension vector (d, 2d, d); parameter count 4d^2 + 3d.
    """
    if d < 1:
        raise ShapeError(f"identity_net needs d >= 1, got {d}")
    eye = np.eye(d)
    w1 = np.vstack([eye, -eye])
    w2 = np.hstack([eye, -eye])
    return Network((Layer(w1, np.zeros(2 * d)), Layer(w2, np.zeros(d))))


_PROBE = np.array([-2.0, -0.5, 0.0, 0.3, 1.0, 2.5])


@dataclass(frozen=True, eq=False)
class IdentityEmulator:
    """A one-hidden-layer network realizing the identity on R^dim.

    Construction checks the shape pattern (dim, i, dim) and verifies the
    identity realization on a fixed probe grid under the declared activation.
    """

    net: Network
    dim: int
    activation: Activation = RELU

    def __post_init__(self):
        d = dims(self.net)
        if d.depth != 2 or d.inputs != self.dim or d.outputs != self.dim:
            raise ShapeError(
                f"identity emulator needs dims (d, i, d) with d={self.dim}, got {d.dims}"
            )
        probe = np.stack([np.roll(np.resize(_PROBE, self.dim), k) for k in range(6)])
        out = realize(self.net, self.activation, probe)
        if not np.allclose(out, probe, rtol=1e-12, atol=1e-12):
            raise ShapeError("network does not realize the identity under its activation")

    @property
    def width(self) -> int:
        """Hidden width, the i in dims (d, i, d)."""
        return dims(self.net)[1]


def relu_identity(d: int) -> IdentityEmulator:
    """The canonical ReLU identity emulator of width 2d."""
    return IdentityEmulator(identity_net(d), d, RELU)


def extend(L: int, emulator: IdentityEmulator, phi: Network) -> Network:
    """Pad ``phi`` to depth ``L`` by composing with emulator powers on top."""
    if L < phi.depth:
        raise ShapeError(f"cannot extend a depth-{phi.depth} network to depth {L}")
    if phi.output_dim != emulator.dim:
        raise ShapeError(
            f"extension emulator acts on {emulator.dim} components but the network "
            f"produces {phi.output_dim}"
        )
    return compose(power(emulator.net, L - phi.depth), phi)


def _block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def parallel_equal(nets: Sequence[Network]) -> Network:
    """Block-diagonal stacking of equal-depth networks; realizes the tuple map."""
    if not nets:
        raise ShapeError("parallelization needs at least one network")
    depths = [net.depth for net in nets]
    if len(set(depths)) != 1:
        raise ShapeError(f"parallelization needs equal depths, got {depths}")
    layers = []
    for k in range(depths[0]):
        w = _block_diag([net.layers[k].weights for net in nets])
        b = np.concatenate([net.layers[k].bias for net in nets])
        layers.append(Layer(w, b))
    return Network(tuple(layers))


def parallel_general(
    nets: Sequence[Network], ids: Sequence[IdentityEmulator] | None = None
) -> Network:
    """Parallelization of mixed-depth networks.

    Each network is padded to the maximum depth with its own emulator, then
    stacked block-diagonally.  With ``ids=None`` canonical ReLU emulators are
    supplied automatically.
    """
    if not nets:
        raise ShapeError("parallelization needs at least one network")
    if ids is None:
        ids = [relu_identity(net.output_dim) for net in nets]
    if len(ids) != len(nets):
        raise ShapeError(f"got {len(nets)} networks but {len(ids)} emulators")
    for j, (net, emu) in enumerate(zip(nets, ids)):
        if net.output_dim != emu.dim:
            raise ShapeError(
                f"network {j} produces {net.output_dim} components but its emulator "
                f"acts on {emu.dim}"
            )
    L = max(net.depth for net in nets)
    return parallel_equal([extend(L, emu, net) for net, emu in zip(nets, ids)])


def _fan_layers(n_copies: int, in_dim: int, out_dim: int, h: Sequence[float]):
    """Fan-out (A2) duplicating the input and fan-in (A1) combining with weights h."""
    a1 = np.hstack([float(hm) * np.eye(out_dim) for hm in h])
    a2 = np.vstack([np.eye(in_dim)] * n_copies)
    return affine(a1), affine(a2)


def sum_equal(nets: Sequence[Network], h: Sequence[float] | None = None) -> Network:
    """Weighted sum of networks with identical dimension vectors."""
    if not nets:
        raise ShapeError("sum needs at least one network")
    if h is None:
        h = [1.0] * len(nets)
    if len(h) != len(nets):
        raise ShapeError(f"got {len(nets)} networks but {len(h)} weights")
    ds = [dims(net).dims for net in nets]
    if len(set(ds)) != 1:
        raise ShapeError(f"sum_equal needs identical dims, got {ds}")
    a1, a2 = _fan_layers(len(nets), nets[0].input_dim, nets[0].output_dim, h)
    return compose(a1, compose(parallel_equal(nets), a2))


def sum_general(
    nets: Sequence[Network],
    emulator: IdentityEmulator | None = None,
    h: Sequence[float] | None = None,
) -> Network:
    """Weighted sum of networks sharing only input and output dimensions."""
    if not nets:
        raise ShapeError("sum needs at least one network")
    if h is None:
        h = [1.0] * len(nets)
    if len(h) != len(nets):
        raise ShapeError(f"got {len(nets)} networks but {len(h)} weights")
    d_in = {net.input_dim for net in nets}
    d_out = {net.output_dim for net in nets}
    if len(d_in) != 1 or len(d_out) != 1:
        raise ShapeError(
            f"sum_general needs a common interface, got inputs {sorted(d_in)} "
            f"and outputs {sorted(d_out)}"
        )
    out_dim = d_out.pop()
    if emulator is None:
        emulator = relu_identity(out_dim)
    if emulator.dim != out_dim:
        raise ShapeError(
            f"sum emulator acts on {emulator.dim} components but the networks produce {out_dim}"
        )
    a1, a2 = _fan_layers(len(nets), d_in.pop(), out_dim, h)
    stacked = parallel_general(nets, [emulator] * len(nets))
    return compose(a1, compose(stacked, a2))


def concat_identity(phi1: Network, emulator: IdentityEmulator, phi2: Network) -> Network:
    """Composition routed through an artificial identity between the operands.

    Keeps every layer of both operands (depth adds exactly) at the price of
    the emulator's interface width.
    """
    if phi1.input_dim != emulator.dim:
        raise ShapeError(
            f"left network consumes {phi1.input_dim} components but the emulator "
            f"produces {emulator.dim}"
        )
    if phi2.output_dim != emulator.dim:
        raise ShapeError(
            f"right network produces {phi2.output_dim} components but the emulator "
            f"consumes {emulator.dim}"
        )
    return compose(phi1, compose(emulator.net, phi2))
