"""Network representations of perturbed Euler schemes and their bounds.

A residual step turns networks for f and g into one for g + f(g) by running
f in parallel with a chain of identity emulators that carries g's value
forward.  Iterating the step represents every Euler iterate
Y_{n+1} = Y_n + A_{n+1} mu(Y_n) + y_{n+1} exactly as a network, and pairing
those spatial networks with hat-function time interpolators through a
scalar-vector product yields one network in (t, x) for the whole polygonal
Euler path.  The discrete Gronwall estimate supplies the a priori norm
bounds that the error contracts are phrased in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .constructors import ApproxSpec, hat_net, scalar_vector_product
from .network import (
    DomainError,
    Network,
    RELU,
    ShapeError,
    affine,
    dims,
    param_count,
    realize,
)
from .ops import (
    IdentityEmulator,
    compose,
    concat_identity,
    parallel_equal,
    parallel_general,
    power,
    relu_identity,
    sum_general,
)

__all__ = [
    "EulerSpec",
    "GrowthBoundInputs",
    "euler_nodes",
    "euler_oracle",
    "euler_space_net",
    "gronwall_bound",
    "perturbed_iterates",
    "product_param_budget",
    "residual_chain",
    "residual_step",
    "scaling_constant",
    "scaling_bounds",
    "spacetime_net",
    "spacetime_param_bound",
    "time_hat_nets",
]


@dataclass(frozen=True, eq=False)
class EulerSpec:
    """A perturbed Euler scheme on the uniform grid t_n = n T / N.

    drift: network with matching input/output dimension d, realized under
        ReLU as the vector field.
    y: the N perturbation vectors in R^d.
    epsilon, q: accuracy parameters for the space-time approximation.
    """

    drift: Network
    T: float
    N: int
    y: tuple
    epsilon: float = 1.0
    q: float = 3.0

    def __post_init__(self):
        if self.drift.input_dim != self.drift.output_dim:
            raise ShapeError(
                f"drift must map R^d to R^d, got I={self.drift.input_dim}, "
                f"O={self.drift.output_dim}"
            )
        if self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N}")
        if not self.T > 0.0:
            raise DomainError(f"T must be positive, got {self.T}")
        if not 0.0 < self.epsilon <= 1.0:
            raise DomainError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if not self.q > 2.0:
            raise DomainError(f"q must exceed 2, got {self.q}")
        y = tuple(np.array(v, dtype=np.float64) for v in self.y)
        if len(y) != self.N:
            raise ShapeError(f"need N={self.N} perturbation vectors, got {len(y)}")
        for k, v in enumerate(y):
            if v.shape != (self.d,):
                raise ShapeError(f"perturbation {k} has shape {v.shape}, expected ({self.d},)")
            v.setflags(write=False)
        object.__setattr__(self, "y", y)

    @property
    def d(self) -> int:
        return self.drift.input_dim

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.N + 1)


def residual_step(phi1: Network, phi2: Network, emulator: IdentityEmulator) -> Network:
    """Network realizing x -> g(x) + f(g(x)) for f, g realized by phi1, phi2.

    phi1 runs in parallel with a depth-matched emulator chain that forwards
    phi2's value, and a fan-in adds the two; phi1 needs depth >= 2 so the
    chain has at least one identity hop.
    """
    d = emulator.dim
    for name, net in (("phi1", phi1), ("phi2", phi2)):
        if net.input_dim != d or net.output_dim != d:
            raise ShapeError(
                f"{name} must map R^{d} to R^{d}, got I={net.input_dim}, O={net.output_dim}"
            )
    if phi1.depth < 2:
        raise ShapeError(f"residual_step needs depth(phi1) >= 2, got {phi1.depth}")
    eye = np.eye(d)
    fan_in = affine(np.hstack([eye, eye]))
    fan_out = affine(np.vstack([eye, eye]))
    carried = power(emulator.net, phi1.depth - 1)
    stacked = parallel_equal([phi1, carried])
    return compose(fan_in, compose(compose(stacked, fan_out), phi2))


def _absorb_affine_step(phi: Network, psi: Network) -> Network:
    """Depth-1 residual step: fold x -> A x + b into x -> (A + I) x + b."""
    layer = phi.layers[0]
    absorbed = affine(layer.weights + np.eye(layer.rows), layer.bias)
    return compose(absorbed, psi)


def residual_chain(
    psi: Network,
    phis: Sequence[Network],
    emulator: IdentityEmulator,
    n: int,
) -> Network:
    """n-fold residual recursion f_{k+1} = f_k + phi_k o f_k started at psi.

    All phis must share one depth L; depth-1 phis route through affine
    absorption and leave the dimension vector of psi unchanged, deeper ones
    append their hidden layers widened by the emulator width.
    """
    d = emulator.dim
    i = emulator.width
    if n < 0 or n > len(phis):
        raise ShapeError(f"chain length {n} not in [0, {len(phis)}]")
    if psi.input_dim != d or psi.output_dim != d:
        raise ShapeError(
            f"psi must map R^{d} to R^{d}, got I={psi.input_dim}, O={psi.output_dim}"
        )
    if n == 0:
        return psi
    active = list(phis[:n])
    depths = sorted({phi.depth for phi in active})
    if len(depths) != 1:
        raise ShapeError(f"chain networks must share one depth, got {depths}")
    L = depths[0]
    for k, phi in enumerate(active):
        if phi.input_dim != d or phi.output_dim != d:
            raise ShapeError(
                f"chain network {k} must map R^{d} to R^{d}, got "
                f"I={phi.input_dim}, O={phi.output_dim}"
            )
    if not 2 <= i <= 2 * d:
        raise ShapeError(f"emulator width violates 2 <= i <= 2d: i={i}, d={d}")
    if L >= 2:
        ell = dims(psi)[-2]
        first = dims(active[0])[-2]
        if ell > first + i:
            raise ShapeError(
                "psi's second-to-last width exceeds the first chain network's "
                f"plus the emulator width: {ell} > {first} + {i}"
            )
        for k in range(n - 1):
            a = dims(active[k])[-2]
            b = dims(active[k + 1])[-2]
            if a > b:
                raise ShapeError(
                    "chain second-to-last widths must be non-decreasing: "
                    f"network {k} has {a} > {b} of network {k + 1}"
                )
    result = psi
    for phi in active:
        if L == 1:
            result = _absorb_affine_step(phi, result)
        else:
            result = residual_step(phi, result, emulator)
    return result


def euler_space_net(
    spec: EulerSpec,
    n: int,
    matrices: Sequence[np.ndarray] | None = None,
    emulator: IdentityEmulator | None = None,
) -> Network:
    """Network realizing the n-th perturbed Euler iterate x -> Y_n^{x,y}.

    Step matrices default to (T/N) I_d; each step k composes the affine map
    (A_k, y_k) onto the drift and feeds the residual chain started at the
    identity emulator.
    """
    d = spec.d
    if not 0 <= n <= spec.N:
        raise DomainError(f"step index {n} not in [0, {spec.N}]")
    if matrices is None:
        matrices = [(spec.T / spec.N) * np.eye(d)] * spec.N
    if len(matrices) < n:
        raise ShapeError(f"need {n} step matrices, got {len(matrices)}")
    if emulator is None:
        emulator = relu_identity(d)
    steps = [compose(affine(matrices[k], spec.y[k]), spec.drift) for k in range(n)]
    return residual_chain(emulator.net, steps, emulator, n)


def perturbed_iterates(
    mu: Callable[[np.ndarray], np.ndarray],
    matrices: Sequence[np.ndarray],
    y: Sequence[np.ndarray],
    x: np.ndarray,
) -> list[np.ndarray]:
    """Direct recursion Y_0 = x, Y_{k+1} = Y_k + A_{k+1} mu(Y_k) + y_{k+1}."""
    out = [np.asarray(x, dtype=np.float64)]
    for a, v in zip(matrices, y):
        cur = out[-1]
        out.append(cur + np.asarray(a) @ np.asarray(mu(cur)) + np.asarray(v))
    return out


def _drift_fn(spec: EulerSpec) -> Callable[[np.ndarray], np.ndarray]:
    return lambda v: realize(spec.drift, RELU, v)


def euler_nodes(spec: EulerSpec, x, times: np.ndarray | None = None) -> list[np.ndarray]:
    """Euler iterates Y_0 ... Y_N of the scheme at the grid nodes."""
    if times is None:
        times = spec.times()
    matrices = [dt * np.eye(spec.d) for dt in np.diff(times)]
    return perturbed_iterates(_drift_fn(spec), matrices, spec.y, x)


def euler_oracle(spec: EulerSpec, t: float, x, times: np.ndarray | None = None) -> np.ndarray:
    """Ground truth for the space-time nets: the polygonal Euler path at (t, x).

    Iterates the scheme to the grid nodes and interpolates linearly on the
    enclosing interval; a non-uniform increasing grid with t_0 = 0 and
    t_N = T may be supplied.
    """
    if times is None:
        times = spec.times()
    times = np.asarray(times, dtype=np.float64)
    if times.shape != (spec.N + 1,) or times[0] != 0.0 or not np.all(np.diff(times) > 0):
        raise DomainError("times must be an increasing grid of N + 1 points starting at 0")
    if not 0.0 <= t <= times[-1]:
        raise DomainError(f"t={t} lies outside [0, {times[-1]}]")
    nodes = euler_nodes(spec, x, times)
    n = min(int(np.searchsorted(times, t, side="right")) - 1, spec.N - 1)
    n = max(n, 0)
    dt = times[n + 1] - times[n]
    lam = (t - times[n]) / dt
    mu = _drift_fn(spec)
    return nodes[n] + lam * (dt * mu(nodes[n]) + spec.y[n])


def time_hat_nets(T: float, N: int) -> list[Network]:
    """Hat interpolators for the uniform grid, one per node, unit height.

    Node n's hat is supported on ((n-1)T/N, (n+1)T/N); the phantom nodes at
    -T/N and (N+1)T/N make the boundary hats equal 1 at t = 0 and t = T.
    """
    step = T / N
    return [hat_net((n - 1) * step, n * step, (n + 1) * step, 1.0) for n in range(N + 1)]


def spacetime_net(spec: EulerSpec) -> Network:
    """One ReLU network (t, x) -> approximate Euler path value in R^d.

    Each node n contributes a scalar-vector product of the node's hat weight
    and its spatial Euler network; hats vanish off neighbouring intervals
    and the product annihilates at scalar 0, so at any t only two summands
    are active.
    """
    d = spec.d
    gamma = scalar_vector_product(ApproxSpec(spec.epsilon, spec.q, d))
    hats = time_hat_nets(spec.T, spec.N)
    id_1 = relu_identity(1)
    id_d = relu_identity(d)
    id_joint = relu_identity(d + 1)
    summands = []
    for n in range(spec.N + 1):
        spatial = euler_space_net(spec, n, emulator=id_d)
        pair = parallel_general([hats[n], spatial], [id_1, id_d])
        summands.append(concat_identity(gamma, id_joint, pair))
    return sum_general(summands, id_d)


def product_param_budget(epsilon: float, q: float) -> float:
    """Per-d^2 parameter budget dominating twice the scalar-vector net."""
    return (720.0 * q / (q - 2.0)) * (math.log2(1.0 / epsilon) + q + 1.0) - 504.0


def spacetime_param_bound(spec: EulerSpec) -> float:
    """Closed-form upper bound for param_count(spacetime_net(spec))."""
    d, N = spec.d, spec.N
    H = spec.drift.hidden
    P = param_count(spec.drift)
    budget = product_param_budget(spec.epsilon, spec.q)
    inner = 23.0 + 6.0 * N * H + 7.0 * d**2 + N * (4.0 * d**2 + P) ** 2
    return 0.5 * (6.0 * d**2 * N**2 * H + 3.0 * N * (d**2 * budget + inner**2)) ** 2


@dataclass(frozen=True)
class GrowthBoundInputs:
    """Everything the a priori iterate bound needs.

    C, c: affine growth constants of the drift, ||mu(x)|| <= C + c ||x||.
    step_norms: operator norms of the step matrices A_1 ... A_N.
    y_partial_max: entry n is max over m <= n of ||sum_{k<=m} y_k||.
    """

    C: float
    c: float
    step_norms: tuple[float, ...]
    y_partial_max: tuple[float, ...]

    def __post_init__(self):
        if self.C < 0.0 or self.c < 0.0:
            raise DomainError(f"growth constants must be non-negative, got C={self.C}, c={self.c}")
        if any(a < 0.0 for a in self.step_norms):
            raise DomainError("operator norms must be non-negative")
        if len(self.y_partial_max) != len(self.step_norms) + 1:
            raise ShapeError(
                f"need {len(self.step_norms) + 1} partial-sum maxima, "
                f"got {len(self.y_partial_max)}"
            )

    @classmethod
    def from_steps(cls, C, c, matrices, y) -> "GrowthBoundInputs":
        norms = tuple(float(np.linalg.norm(a, ord=2)) for a in matrices)
        maxima = [0.0]
        if len(y):
            partial = np.zeros_like(np.asarray(y[0], dtype=np.float64))
            for v in y:
                partial = partial + np.asarray(v, dtype=np.float64)
                maxima.append(max(maxima[-1], float(np.linalg.norm(partial))))
        return cls(float(C), float(c), norms, tuple(maxima))


def gronwall_bound(inputs: GrowthBoundInputs, x_norm: float, n: int) -> float:
    """A priori bound on ||Y_n|| for drifts with ||mu(x)|| <= C + c ||x||:

        (||x|| + C sum_{k<=n} |||A_k||| + max_{m<=n} ||sum_{k<=m} y_k||)
            * exp(c sum_{k<=n} |||A_k|||).
    """
    if not 0 <= n <= len(inputs.step_norms):
        raise DomainError(f"step index {n} not in [0, {len(inputs.step_norms)}]")
    s = float(sum(inputs.step_norms[:n]))
    return (x_norm + inputs.C * s + inputs.y_partial_max[n]) * math.exp(inputs.c * s)


def scaling_constant(growth_c: float, T: float) -> float:
    """The constant the headline bounds are phrased with:
    max(exp(cT), unit-accuracy product budget at q = 3, 62 + 6c(c+1))."""
    return max(
        math.exp(growth_c * T),
        product_param_budget(1.0, 3.0),
        62.0 + 6.0 * growth_c * (growth_c + 1.0),
    )


def scaling_bounds(
    growth_c: float, size_exp: float, T: float, d: int, N: int, epsilon: float
) -> dict[str, float]:
    """Headline bound values for a drift family with ||mu(x)|| <= c(1+||x||)
    and param_count <= c d^size_exp, at growth exponent q = 3.

    error / growth are coefficients of (1 + ||x||^3 + ||y||^3) and
    (1 + ||x||^2 + ||y||^2) respectively; params bounds the exact count.
    """
    c = scaling_constant(growth_c, T)
    return {
        "error": 20.0 * c**6 * math.sqrt(d) * N**1.5 * epsilon,
        "growth": 18.0 * c**4 * math.sqrt(d) * N,
        "params": 54.0 * c**4 * N**6 * float(d) ** (16.0 + 8.0 * size_exp)
        * (1.0 + math.log(epsilon) ** 2),
    }
