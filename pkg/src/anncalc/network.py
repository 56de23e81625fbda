"""Feedforward networks as explicit stacks of affine layers.

A network here is pure data: a non-empty sequence of ``(W, b)`` pairs with
chaining shapes.  What function it computes is decided only when an
activation is supplied to :func:`realize`; the same network can be realized
under ReLU, the identity, or any other scalar activation.  All scalars are
64-bit floats, all matrices dense and row-major, and every value is
immutable, so structural identities can be checked by exact comparison.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Activation",
    "Dims",
    "DomainError",
    "IDENTITY",
    "Layer",
    "Network",
    "ParseError",
    "RELU",
    "ShapeError",
    "affine",
    "deserialize",
    "dims",
    "forward_states",
    "load_network",
    "networks_equal",
    "param_count",
    "realize",
    "save_network",
    "serialize",
]


class ShapeError(ValueError):
    """Shapes do not chain or violate an operation's interface contract."""


class DomainError(ValueError):
    """A scalar parameter lies outside its admissible range."""


class ParseError(ValueError):
    """A serialized network document is malformed."""


def _frozen_matrix(values) -> np.ndarray:
    a = np.array(values, dtype=np.float64, order="C")
    if a.ndim != 2:
        raise ShapeError(f"weight matrix must be 2-d, got shape {a.shape}")
    a.setflags(write=False)
    return a


def _frozen_vector(values) -> np.ndarray:
    a = np.array(values, dtype=np.float64, order="C")
    if a.ndim != 1:
        raise ShapeError(f"bias must be 1-d, got shape {a.shape}")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Layer:
    """One affine map ``x -> W x + b`` with ``W`` of shape (rows, cols)."""

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weights", _frozen_matrix(self.weights))
        object.__setattr__(self, "bias", _frozen_vector(self.bias))
        if self.weights.shape[0] != self.bias.shape[0]:
            raise ShapeError(
                f"weight rows {self.weights.shape[0]} != bias length {self.bias.shape[0]}"
            )
        if min(self.weights.shape) < 1:
            raise ShapeError(f"layer dimensions must be positive, got {self.weights.shape}")

    @property
    def rows(self) -> int:
        return self.weights.shape[0]

    @property
    def cols(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True)
class Dims:
    """The dimension vector (l_0, ..., l_L) of a network, with derived counts."""

    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.dims) < 2:
            raise ShapeError(f"dimension vector needs at least 2 entries, got {self.dims}")
        if any(d < 1 for d in self.dims):
            raise ShapeError(f"dimension entries must be positive, got {self.dims}")

    @property
    def depth(self) -> int:
        """Number of affine layers L."""
        return len(self.dims) - 1

    @property
    def hidden(self) -> int:
        """Number of hidden layers, L - 1."""
        return self.depth - 1

    @property
    def inputs(self) -> int:
        return self.dims[0]

    @property
    def outputs(self) -> int:
        return self.dims[-1]

    @property
    def params(self) -> int:
        """Total scalar count sum_k l_k (l_{k-1} + 1)."""
        d = self.dims
        return sum(d[k] * (d[k - 1] + 1) for k in range(1, len(d)))

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)

    def __getitem__(self, k):
        return self.dims[k]


@dataclass(frozen=True, eq=False)
class Network:
    """A non-empty tuple of affine layers with chaining shapes."""

    layers: tuple[Layer, ...]

    def __post_init__(self):
        layers = tuple(
            layer if isinstance(layer, Layer) else Layer(*layer) for layer in self.layers
        )
        object.__setattr__(self, "layers", layers)
        if not layers:
            raise ShapeError("a network needs at least one layer")
        for k in range(1, len(layers)):
            if layers[k].cols != layers[k - 1].rows:
                raise ShapeError(
                    f"layer {k} expects {layers[k].cols} inputs but layer {k - 1} "
                    f"produces {layers[k - 1].rows}"
                )

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def hidden(self) -> int:
        return len(self.layers) - 1

    @property
    def input_dim(self) -> int:
        return self.layers[0].cols

    @property
    def output_dim(self) -> int:
        return self.layers[-1].rows

    def dims(self) -> Dims:
        return dims(self)

    def __repr__(self):
        return f"Network(dims={dims(self).dims})"


@dataclass(frozen=True)
class Activation:
    """A scalar activation applied componentwise; tagged for serialization."""

    kind: str
    fn: Callable[[np.ndarray], np.ndarray]


RELU = Activation("relu", lambda z: np.maximum(z, 0.0))
IDENTITY = Activation("identity", lambda z: z)


def affine(weights, bias=None) -> Network:
    """Single-layer network for the affine map x -> W x + b (b defaults to 0)."""
    w = _frozen_matrix(weights)
    if bias is None:
        bias = np.zeros(w.shape[0])
    return Network((Layer(w, bias),))


def dims(net: Network) -> Dims:
    """Read the dimension vector off the layer shapes."""
    return Dims((net.layers[0].cols,) + tuple(layer.rows for layer in net.layers))


def param_count(net: Network) -> int:
    """Number of stored scalars, sum_k l_k (l_{k-1} + 1)."""
    return dims(net).params


def _prepare_input(net: Network, x) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[np.newaxis, :]
    if x.ndim != 2 or x.shape[1] != net.input_dim:
        raise ShapeError(
            f"input has shape {np.asarray(x).shape} but the network expects "
            f"{net.input_dim} components"
        )
    return x, single


def realize(net: Network, act: Activation, x) -> np.ndarray:
    """Evaluate the network at ``x``: activation after every layer but the last.

    ``x`` may be a single point of length I or a batch of shape (n, I);
    the result has shape (O,) or (n, O) accordingly.
    """
    z, single = _prepare_input(net, x)
    for layer in net.layers[:-1]:
        z = act.fn(z @ layer.weights.T + layer.bias)
    last = net.layers[-1]
    z = z @ last.weights.T + last.bias
    return z[0] if single else z


def forward_states(net: Network, act: Activation, x) -> list[np.ndarray]:
    """All intermediate states [x_0, x_1, ..., x_L] of one evaluation."""
    z, single = _prepare_input(net, x)
    states = [z]
    for k, layer in enumerate(net.layers):
        z = z @ layer.weights.T + layer.bias
        if k < len(net.layers) - 1:
            z = act.fn(z)
        states.append(z)
    return [s[0] for s in states] if single else states


def networks_equal(a: Network, b: Network) -> bool:
    """Structural equality: identical shapes and bit-identical scalars."""
    if a.depth != b.depth:
        return False
    for la, lb in zip(a.layers, b.layers):
        if la.weights.shape != lb.weights.shape:
            return False
        if not (np.array_equal(la.weights, lb.weights) and np.array_equal(la.bias, lb.bias)):
            return False
    return True


def serialize(net: Network) -> bytes:
    """JSON document with row-major weights, full double precision."""
    doc = {
        "layers": [
            {"weights": layer.weights.tolist(), "bias": layer.bias.tolist()}
            for layer in net.layers
        ]
    }
    return json.dumps(doc).encode("utf-8")


def deserialize(data: bytes | str) -> Network:
    """Parse a serialized network, reporting the offending layer on failure."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "layers" not in doc:
        raise ParseError("document has no 'layers' field")
    raw_layers = doc["layers"]
    if not isinstance(raw_layers, list) or not raw_layers:
        raise ParseError("'layers' must be a non-empty list")
    layers = []
    for k, raw in enumerate(raw_layers):
        if not isinstance(raw, dict) or "weights" not in raw or "bias" not in raw:
            raise ParseError(f"layer {k}: missing 'weights' or 'bias'")
        try:
            layers.append(Layer(raw["weights"], raw["bias"]))
        except (ShapeError, ValueError) as exc:
            raise ParseError(f"layer {k}: {exc}") from exc
    try:
        return Network(tuple(layers))
    except ShapeError as exc:
        raise ParseError(str(exc)) from exc


def save_network(net: Network, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize(net))


def load_network(path) -> Network:
    with open(path, "rb") as fh:
        return deserialize(fh.read())
