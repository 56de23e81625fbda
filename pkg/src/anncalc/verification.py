"""Executable checks: every structural identity exactly, every analytic
bound against an independent oracle, collected into tabular reports.

Conventions: analytic inequality checks pass when
measured <= bound + 1e-9 (the headroom absorbs rounding in evaluating the
bound itself); realization identities are held to 1e-12; integer and
structural identities are exact.  Reports are deterministic functions of
(suite, seed) and serialize byte-identically across reruns.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .constructors import (
    ApproxSpec,
    product_net,
    scalar_vector_product,
    square_refinement_level,
    square_real,
    square_unit,
    tent_f,
    tent_g,
)
from .euler import (
    EulerSpec,
    GrowthBoundInputs,
    euler_nodes,
    euler_oracle,
    euler_space_net,
    gronwall_bound,
    perturbed_iterates,
    residual_chain,
    residual_step,
    scaling_bounds,
    spacetime_net,
    spacetime_param_bound,
    time_hat_nets,
)
from .network import (
    Dims,
    DomainError,
    Network,
    RELU,
    affine,
    dims,
    forward_states,
    networks_equal,
    param_count,
    realize,
)
from .ops import (
    compose,
    concat_identity,
    extend,
    parallel_equal,
    parallel_general,
    power,
    relu_identity,
    sum_equal,
    sum_general,
)

__all__ = [
    "ABS_TOL",
    "BoundEntry",
    "BoundReport",
    "REALIZE_TOL",
    "SUITES",
    "check_structural",
    "halton",
    "run_suite",
    "scaling_report",
    "sup_error_on_grid",
]

ABS_TOL = 1e-9
REALIZE_TOL = 1e-12


@dataclass(frozen=True)
class BoundEntry:
    name: str
    measured: float
    bound: float
    margin: float
    passed: bool


@dataclass
class BoundReport:
    """Measured quantity vs bound, one row per check."""

    metadata: dict = field(default_factory=dict)
    entries: list[BoundEntry] = field(default_factory=list)

    def check(self, name: str, measured: float, bound: float, headroom: float = ABS_TOL):
        measured = float(measured)
        bound = float(bound)
        self.entries.append(
            BoundEntry(name, measured, bound, bound - measured, measured <= bound + headroom)
        )

    def check_identity(self, name: str, error: float, tol: float = REALIZE_TOL):
        """Identity check: the deviation must not exceed tol, no headroom."""
        self.check(name, error, tol, headroom=0.0)

    def check_exact(self, name: str, mismatches: int):
        """Exact structural check: the mismatch count must be zero."""
        self.check(name, float(mismatches), 0.0, headroom=0.0)

    @property
    def all_pass(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> list[BoundEntry]:
        return [e for e in self.entries if not e.passed]

    def to_csv(self) -> str:
        lines = ["quantity,measured,bound,margin,pass"]
        for e in self.entries:
            lines.append(f"{e.name},{e.measured!r},{e.bound!r},{e.margin!r},{e.passed}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "metadata": self.metadata,
                "entries": [
                    {
                        "quantity": e.name,
                        "measured": e.measured,
                        "bound": e.bound,
                        "margin": e.margin,
                        "pass": e.passed,
                    }
                    for e in self.entries
                ],
            },
            indent=2,
        )


def sup_error_on_grid(f, g, grid, weight=None) -> float:
    """max over the grid of ||f(p) - g(p)|| / weight(p).

    f and g act on the whole grid array at once; point values may be scalar
    or vector.  With weight=None the plain sup norm is returned.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise DomainError("sup_error_on_grid needs a non-empty grid")
    fv = np.asarray(f(grid), dtype=np.float64)
    gv = np.asarray(g(grid), dtype=np.float64)
    diff = fv - gv
    err = np.abs(diff) if diff.ndim == 1 else np.linalg.norm(diff, axis=-1)
    if weight is not None:
        err = err / np.asarray(weight(grid), dtype=np.float64)
    return float(np.max(err))


def check_structural(net: Network, expected) -> BoundReport:
    """Exact comparison of a network's dimension data against expectations.

    ``expected`` is a Dims, a dimension tuple, or a dict with any of the
    keys dims / depth / hidden / inputs / outputs / params.
    """
    report = BoundReport(metadata={"check": "structural"})
    d = dims(net)
    if isinstance(expected, (Dims, tuple, list)):
        expected = {"dims": tuple(expected)}
    for key, want in expected.items():
        if key == "dims":
            report.check_exact("dims", 0 if d.dims == tuple(want) else 1)
        elif key == "depth":
            report.check_exact("depth", 0 if d.depth == want else 1)
        elif key == "hidden":
            report.check_exact("hidden", 0 if d.hidden == want else 1)
        elif key == "inputs":
            report.check_exact("inputs", 0 if d.inputs == want else 1)
        elif key == "outputs":
            report.check_exact("outputs", 0 if d.outputs == want else 1)
        elif key == "params":
            report.check_exact("params", 0 if d.params == want else 1)
        else:
            raise DomainError(f"unknown structural expectation {key!r}")
    return report


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def halton(n: int, d: int) -> np.ndarray:
    """First n points of the unscrambled Halton sequence in [0, 1)^d."""
    if d > len(_PRIMES):
        raise DomainError(f"halton supports up to {len(_PRIMES)} dimensions")
    out = np.empty((n, d))
    for j in range(d):
        base = _PRIMES[j]
        for i in range(n):
            k, f, r = i + 1, 1.0, 0.0
            while k > 0:
                f /= base
                k, digit = divmod(k, base)
                r += digit * f
            out[i, j] = r
    return out


def _rel_err(got, want) -> float:
    got = np.asarray(got, dtype=np.float64)
    want = np.asarray(want, dtype=np.float64)
    scale = max(1.0, float(np.max(np.abs(want))) if want.size else 1.0)
    return float(np.max(np.abs(got - want))) / scale


def _random_net(rng, d_in, d_out, depth, width_hi=5, scale=1.0) -> Network:
    widths = [d_in] + [int(rng.integers(1, width_hi + 1)) for _ in range(depth - 1)] + [d_out]
    layers = []
    for k in range(1, len(widths)):
        w = scale * rng.standard_normal((widths[k], widths[k - 1])) / math.sqrt(widths[k - 1])
        b = scale * rng.standard_normal(widths[k]) * 0.5
        layers.append((w, b))
    return Network(tuple(layers))


def _mixed_parallel_bound(nets, ids) -> float:
    """Parameter bound for mixed-depth parallelization with per-net emulators."""
    L = max(net.depth for net in nets)
    extended = same = pad = 0.0
    for net, emu in zip(nets, ids):
        P = param_count(net)
        i, o = emu.width, net.output_dim
        if net.depth < L:
            extended += max(1.0, i / o) * P
            pad += (L - net.depth - 1) * i * (i + 1) + o * (i + 1)
        else:
            same += P
    return 0.5 * (extended + pad + same) ** 2


# ---------------------------------------------------------------------------
# calculus suite


def _suite_calculus(seed: int, instances: int = 200) -> BoundReport:
    rng = np.random.default_rng(seed)
    report = BoundReport(
        metadata={"suite": "calculus", "seed": seed, "grid": f"{instances} random instances/law"}
    )
    xbatch = lambda d: rng.standard_normal((8, d))

    # composition laws
    dims_bad = depth_bad = hidden_bad = pident_bad = placement_bad = 0
    pbound_viol = -math.inf
    realize_err = 0.0
    for _ in range(instances):
        d0, d1, d2 = (int(rng.integers(1, 5)) for _ in range(3))
        b = _random_net(rng, d0, d1, int(rng.integers(1, 4)))
        a = _random_net(rng, d1, d2, int(rng.integers(1, 4)))
        c = compose(a, b)
        da, db, dc = dims(a).dims, dims(b).dims, dims(c).dims
        if dc != db[:-1] + da[1:]:
            dims_bad += 1
        if (c.depth - 1) != (a.depth - 1) + (b.depth - 1):
            depth_bad += 1
        if dims(c).hidden != dims(a).hidden + dims(b).hidden:
            hidden_bad += 1
        l11, l2last = da[1], db[-2]
        exact = (
            param_count(a)
            + param_count(b)
            + l11 * (l2last + 1)
            - l11 * (da[0] + 1)
            - db[-1] * (l2last + 1)
        )
        if param_count(c) != exact:
            pident_bad += 1
        pbound_viol = max(
            pbound_viol, param_count(c) - (param_count(a) + param_count(b) + l11 * l2last)
        )
        x = xbatch(d0)
        realize_err = max(
            _rel_err(realize(c, RELU, x), realize(a, RELU, realize(b, RELU, x))), realize_err
        )
        # layer placement: copied interiors bit-equal, interface fused
        for j in range(b.depth - 1):
            if not np.array_equal(c.layers[j].weights, b.layers[j].weights):
                placement_bad += 1
                break
        fw = a.layers[0].weights @ b.layers[-1].weights
        fb = a.layers[0].weights @ b.layers[-1].bias + a.layers[0].bias
        if not (
            np.array_equal(c.layers[b.depth - 1].weights, fw)
            and np.array_equal(c.layers[b.depth - 1].bias, fb)
        ):
            placement_bad += 1
        for j in range(1, a.depth):
            if not np.array_equal(c.layers[b.depth - 1 + j].weights, a.layers[j].weights):
                placement_bad += 1
                break
    report.check_exact("compose_dims_law", dims_bad)
    report.check_exact("compose_depth_law", depth_bad)
    report.check_exact("compose_hidden_additivity", hidden_bad)
    report.check_exact("compose_param_identity", pident_bad)
    report.check("compose_param_bound_excess", pbound_viol, 0.0, headroom=0.0)
    report.check_identity("compose_realization_rel_err", realize_err)
    report.check_exact("compose_layer_placement", placement_bad)

    # associativity
    assoc_bad = 0
    assoc_affine_err = 0.0
    for _ in range(instances):
        d0, d1, d2, d3 = (int(rng.integers(1, 5)) for _ in range(4))
        c3 = _random_net(rng, d0, d1, int(rng.integers(1, 4)))
        c2 = _random_net(rng, d1, d2, int(rng.integers(2, 4)))
        c1 = _random_net(rng, d2, d3, int(rng.integers(1, 4)))
        if not networks_equal(compose(compose(c1, c2), c3), compose(c1, compose(c2, c3))):
            assoc_bad += 1
        # a depth-1 middle factor re-associates the fused products; all other
        # layers stay bit-copied, so only the triply-fused layer is compared,
        # entrywise relative to the accumulated magnitude |A||B||C|
        mid = _random_net(rng, d1, d2, 1)
        lhs = compose(compose(c1, mid), c3)
        rhs = compose(c1, compose(mid, c3))
        k = c3.depth - 1
        natural = (
            np.abs(c1.layers[0].weights)
            @ np.abs(mid.layers[0].weights)
            @ np.abs(c3.layers[-1].weights)
        )
        diff = np.abs(lhs.layers[k].weights - rhs.layers[k].weights)
        assoc_affine_err = max(
            assoc_affine_err, float(np.max(diff / np.maximum(natural, 1e-300)))
        )
    report.check_exact("associativity_bit_exact", assoc_bad)
    report.check_identity("associativity_affine_middle_rel_err", assoc_affine_err, 1e-15)

    # affine composition parameter bounds
    left_viol = right_viol = -math.inf
    for _ in range(instances):
        d0, d1 = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        phi = _random_net(rng, d0, d1, int(rng.integers(1, 4)))
        front = affine(rng.standard_normal((int(rng.integers(1, 5)), d1)))
        back = affine(rng.standard_normal((d0, int(rng.integers(1, 5)))))
        left_viol = max(
            left_viol,
            param_count(compose(front, phi))
            - max(1.0, front.output_dim / phi.output_dim) * param_count(phi),
        )
        right_viol = max(
            right_viol,
            param_count(compose(phi, back))
            - max(1.0, (back.input_dim + 1) / (phi.input_dim + 1)) * param_count(phi),
        )
    report.check("affine_front_param_bound_excess", left_viol, 0.0)
    report.check("affine_back_param_bound_excess", right_viol, 0.0)

    # powers and extensions
    power_dims_bad = 0
    power_err = extend_err = 0.0
    extend_depth_bad = 0
    extend_viol = -math.inf
    for _ in range(instances):
        d = int(rng.integers(1, 5))
        emu = relu_identity(d)
        n = int(rng.integers(0, 4))
        pw = power(emu.net, n)
        want = (d, d) if n == 0 else (d,) + (2 * d,) * n + (d,)
        if dims(pw).dims != want:
            power_dims_bad += 1
        x = xbatch(d)
        power_err = max(power_err, _rel_err(realize(pw, RELU, x), x))
        phi = _random_net(rng, int(rng.integers(1, 5)), d, int(rng.integers(1, 4)))
        L = phi.depth + int(rng.integers(0, 3))
        ext = extend(L, emu, phi)
        if ext.depth != L:
            extend_depth_bad += 1
        x2 = xbatch(phi.input_dim)
        extend_err = max(extend_err, _rel_err(realize(ext, RELU, x2), realize(phi, RELU, x2)))
        i = emu.width
        if L == phi.depth:
            bound = param_count(phi)
        else:
            bound = max(1.0, i / d) * param_count(phi) + ((L - phi.depth - 1) * i + d) * (i + 1)
        extend_viol = max(extend_viol, param_count(ext) - bound)
    report.check_exact("power_dims_law", power_dims_bad)
    report.check_identity("power_identity_rel_err", power_err)
    report.check_exact("extend_depth_law", extend_depth_bad)
    report.check("extend_param_bound_excess", extend_viol, 0.0)
    report.check_identity("extend_realization_rel_err", extend_err)

    # parallelization, equal length
    par_dims_bad = 0
    par_err = 0.0
    par_half_viol = par_square_viol = -math.inf
    for _ in range(instances):
        n = int(rng.integers(1, 4))
        depth = int(rng.integers(1, 4))
        nets = [
            _random_net(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4)), depth)
            for _ in range(n)
        ]
        par = parallel_equal(nets)
        want = tuple(sum(dims(net)[k] for net in nets) for k in range(depth + 1))
        if dims(par).dims != want:
            par_dims_bad += 1
        xs = [xbatch(net.input_dim) for net in nets]
        got = realize(par, RELU, np.hstack(xs))
        wanted = np.hstack([realize(net, RELU, x) for net, x in zip(nets, xs)])
        par_err = max(par_err, _rel_err(got, wanted))
        par_half_viol = max(
            par_half_viol,
            param_count(par) - 0.5 * sum(param_count(net) for net in nets) ** 2,
        )
        copies = parallel_equal([nets[0]] * n)
        par_square_viol = max(
            par_square_viol, param_count(copies) - n**2 * param_count(nets[0])
        )
    report.check_exact("parallel_dims_entrywise_sum", par_dims_bad)
    report.check_identity("parallel_tuple_realization_rel_err", par_err)
    report.check("parallel_param_half_square_excess", par_half_viol, 0.0)
    report.check("parallel_identical_param_bound_excess", par_square_viol, 0.0)

    # parallelization, mixed lengths
    gp_err = 0.0
    gp_viol = -math.inf
    for _ in range(instances):
        n = int(rng.integers(1, 4))
        nets = [
            _random_net(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4)),
                        int(rng.integers(1, 4)))
            for _ in range(n)
        ]
        ids = [relu_identity(net.output_dim) for net in nets]
        par = parallel_general(nets, ids)
        xs = [xbatch(net.input_dim) for net in nets]
        got = realize(par, RELU, np.hstack(xs))
        wanted = np.hstack([realize(net, RELU, x) for net, x in zip(nets, xs)])
        gp_err = max(gp_err, _rel_err(got, wanted))
        gp_viol = max(gp_viol, param_count(par) - _mixed_parallel_bound(nets, ids))
    report.check_identity("parallel_general_realization_rel_err", gp_err)
    report.check("parallel_general_param_bound_excess", gp_viol, 0.0)

    # sums
    sum_eq_err = sum_gen_err = 0.0
    sum_eq_viol = sum_gen_viol = -math.inf
    for _ in range(instances):
        m = int(rng.integers(1, 4))
        d_in, d_out = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        depth = int(rng.integers(1, 4))
        base = _random_net(rng, d_in, d_out, depth)
        same = [base] + [
            Network(
                tuple(
                    (rng.standard_normal(l.weights.shape), rng.standard_normal(l.bias.shape))
                    for l in base.layers
                )
            )
            for _ in range(m - 1)
        ]
        h = rng.standard_normal(m)
        s = sum_equal(same, h)
        x = xbatch(d_in)
        want = sum(hm * realize(net, RELU, x) for hm, net in zip(h, same))
        sum_eq_err = max(sum_eq_err, _rel_err(realize(s, RELU, x), want))
        sum_eq_viol = max(sum_eq_viol, param_count(s) - m**2 * param_count(same[0]))

        mixed = [
            _random_net(rng, d_in, d_out, int(rng.integers(1, 4))) for _ in range(m)
        ]
        emu = relu_identity(d_out)
        sg = sum_general(mixed, emu, h)
        want = sum(hm * realize(net, RELU, x) for hm, net in zip(h, mixed))
        sum_gen_err = max(sum_gen_err, _rel_err(realize(sg, RELU, x), want))
        sum_gen_viol = max(
            sum_gen_viol, param_count(sg) - _mixed_parallel_bound(mixed, [emu] * m)
        )
    report.check_identity("sum_equal_realization_rel_err", sum_eq_err)
    report.check("sum_equal_param_bound_excess", sum_eq_viol, 0.0)
    report.check_identity("sum_general_realization_rel_err", sum_gen_err)
    report.check("sum_general_param_bound_excess", sum_gen_viol, 0.0)

    # identity-mediated concatenation
    cc_dims_bad = cc_depth_bad = 0
    cc_err = 0.0
    cc_viol = -math.inf
    for _ in range(instances):
        d = int(rng.integers(1, 4))
        emu = relu_identity(d)
        p2 = _random_net(rng, int(rng.integers(1, 4)), d, int(rng.integers(1, 4)))
        p1 = _random_net(rng, d, int(rng.integers(1, 4)), int(rng.integers(1, 4)))
        cc = concat_identity(p1, emu, p2)
        want = dims(p2).dims[:-1] + (emu.width,) + dims(p1).dims[1:]
        if dims(cc).dims != want:
            cc_dims_bad += 1
        if cc.depth != p1.depth + p2.depth:
            cc_depth_bad += 1
        x = xbatch(p2.input_dim)
        cc_err = max(
            cc_err, _rel_err(realize(cc, RELU, x), realize(p1, RELU, realize(p2, RELU, x)))
        )
        factor = max(1.0, emu.width / d)
        cc_viol = max(
            cc_viol, param_count(cc) - factor * (param_count(p1) + param_count(p2))
        )
    report.check_exact("concat_dims_law", cc_dims_bad)
    report.check_exact("concat_depth_additivity", cc_depth_bad)
    report.check_identity("concat_realization_rel_err", cc_err)
    report.check("concat_param_bound_excess", cc_viol, 0.0)
    return report


# ---------------------------------------------------------------------------
# square suite


def _suite_square(seed: int) -> BoundReport:
    report = BoundReport(
        metadata={"suite": "square", "seed": seed, "grid": "1e5 uniform on [0,1]"}
    )
    grid = np.linspace(0.0, 1.0, 100_000)

    # tent-map oracle identities
    ident_err = 0.0
    tgrid = np.linspace(0.0, 1.0, 10_000)
    for n in range(1, 11):
        acc = tgrid.copy()
        for m in range(1, n + 1):
            acc = acc - np.ldexp(tent_g(m, tgrid), -2 * m)
        ident_err = max(ident_err, float(np.max(np.abs(tent_f(n, tgrid) - acc))))
    report.check_identity("tent_interpolant_series_identity", ident_err)
    gap_err = 0.0
    for n in range(0, 11):
        mids = (2.0 * np.arange(2**n) + 1.0) / 2.0 ** (n + 1)
        gap = tent_f(n, mids) - mids**2
        gap_err = max(gap_err, float(np.max(np.abs(gap - 2.0 ** (-2 * n - 2)))))
    report.check_identity("tent_midpoint_gap_exact", gap_err, 1e-14)

    outside = np.concatenate([np.linspace(-3.0, 0.0, 500, endpoint=False),
                              np.linspace(1.0, 3.0, 500)[1:]])
    for eps in (1.0, 2.0**-4, 2.0**-10, 2.0**-20):
        M = square_refinement_level(eps)
        net = square_unit(eps)
        tag = f"square_unit_eps_2^{math.log2(eps):+.0f}" if eps != 1.0 else "square_unit_eps_1"
        vals = realize(net, RELU, grid[:, None])[:, 0]
        report.check(f"{tag}_sup_error", float(np.max(np.abs(vals - grid**2))), eps)
        report.check_exact(f"{tag}_param_exact_20M-27", int(param_count(net) != 20 * M - 27))
        report.check(
            f"{tag}_param_bound",
            param_count(net),
            max(10.0 * math.log2(1.0 / eps) - 7.0, 13.0),
        )
        report.check_exact(f"{tag}_depth_is_M", int(net.depth != M))
        report.check(
            f"{tag}_depth_bound", net.depth, max(0.5 * math.log2(1.0 / eps) + 1.0, 2.0)
        )
        out_vals = realize(net, RELU, outside[:, None])[:, 0]
        report.check_identity(
            f"{tag}_outside_equals_relu",
            float(np.max(np.abs(out_vals - np.maximum(outside, 0.0)))),
        )
        report.check_identity(
            f"{tag}_matches_interpolant",
            float(np.max(np.abs(vals - tent_f(M - 1, grid)))),
        )

    # internal channel identities of the deepest construction
    net = square_unit(2.0**-20)
    M = square_refinement_level(2.0**-20)
    sample = np.linspace(0.0, 1.0, 257)[:, None]
    states = forward_states(net, RELU, sample)
    chan_err = 0.0
    for k in range(1, M):
        r = states[k]
        tent = 2.0 * r[:, 0] - 4.0 * r[:, 1] + 2.0 * r[:, 2]
        chan_err = max(chan_err, float(np.max(np.abs(tent - tent_g(k, sample[:, 0])))))
        chan_err = max(
            chan_err, float(np.max(np.abs(r[:, 3] - tent_f(k - 1, sample[:, 0]))))
        )
    report.check_identity("square_unit_channel_identities", chan_err)

    # square on the whole line
    eps, q = 1e-2, 3.0
    net = square_real(ApproxSpec(eps, q))
    report.check_identity("square_real_zero_at_zero", abs(float(realize(net, RELU, [0.0])[0])))
    line = np.linspace(-5.0, 5.0, 10_001)
    vals = realize(net, RELU, line[:, None])[:, 0]
    weight = np.maximum(1.0, np.abs(line) ** q)
    report.check("square_real_weighted_error", float(np.max(np.abs(vals - line**2) / weight)), eps)
    report.check("square_real_lower_bound_excess", float(np.max(-vals)), 0.0)
    report.check("square_real_growth_excess", float(np.max(vals - (eps + line**2))), 0.0)
    report.check(
        "square_real_param_bound",
        param_count(net),
        max(40.0 * q / (q - 2.0) * math.log2(1.0 / eps) + 80.0 / (q - 2.0) - 28.0, 52.0),
    )
    report.check(
        "square_real_depth_bound",
        net.depth,
        max(q / (2.0 * (q - 2.0)) * math.log2(1.0 / eps) + 1.0 / (q - 2.0) + 1.0, 2.0),
    )
    return report


# ---------------------------------------------------------------------------
# product / scalar-vector suites


def _suite_product(seed: int) -> BoundReport:
    report = BoundReport(
        metadata={"suite": "product", "seed": seed, "grid": "201x201 on [-3,3]^2"}
    )
    eps, q = 1e-2, 3.0
    net = product_net(ApproxSpec(eps, q))
    axis = np.linspace(-3.0, 3.0, 201)
    xx, yy = np.meshgrid(axis, axis)
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    vals = realize(net, RELU, pts)[:, 0]
    target = pts[:, 0] * pts[:, 1]
    weight = np.maximum.reduce([np.ones(len(pts)), np.abs(pts[:, 0]) ** q, np.abs(pts[:, 1]) ** q])
    report.check("product_weighted_error", float(np.max(np.abs(vals - target) / weight)), eps)
    zero_rows = np.column_stack([axis, np.zeros_like(axis)])
    zero_cols = np.column_stack([np.zeros_like(axis), axis])
    ann = max(
        float(np.max(np.abs(realize(net, RELU, zero_rows)[:, 0]))),
        float(np.max(np.abs(realize(net, RELU, zero_cols)[:, 0]))),
    )
    report.check_identity("product_annihilation", ann)
    growth = np.abs(vals) - (1.0 + 2.0 * pts[:, 0] ** 2 + 2.0 * pts[:, 1] ** 2)
    report.check("product_growth_excess", float(np.max(growth)), 0.0)
    report.check(
        "product_param_bound",
        param_count(net),
        360.0 * q / (q - 2.0) * (math.log2(1.0 / eps) + q + 1.0) - 252.0,
    )
    report.check(
        "product_depth_bound", net.depth, q / (q - 2.0) * (math.log2(1.0 / eps) + q)
    )
    swapped = realize(net, RELU, pts[:, ::-1])[:, 0]
    report.check_identity("product_symmetry_observed", float(np.max(np.abs(vals - swapped))))
    return report


def _suite_scalvec(seed: int) -> BoundReport:
    report = BoundReport(
        metadata={"suite": "scalvec", "seed": seed, "grid": "1e4 Halton points"}
    )
    eps, q = 1e-2, 3.0
    prod = product_net(ApproxSpec(eps, q))
    for d in (1, 2, 4):
        net = scalar_vector_product(ApproxSpec(eps, q, d))
        pts = halton(10_000, d + 1)
        pts = np.column_stack([2.0 * pts[:, 0], 4.0 * pts[:, 1:] - 2.0])  # t in [0,2], x in [-2,2]^d
        t, x = pts[:, 0], pts[:, 1:]
        vals = realize(net, RELU, pts)
        err = np.linalg.norm(vals - t[:, None] * x, axis=1)
        weight = math.sqrt(d) * np.maximum(1.0, np.abs(t) ** q) + np.linalg.norm(x, axis=1) ** q
        report.check(f"scalvec_d{d}_weighted_error", float(np.max(err / weight)), eps)
        growth = np.linalg.norm(vals, axis=1) - (
            math.sqrt(d) * (1.0 + 2.0 * t**2) + 2.0 * np.linalg.norm(x, axis=1) ** 2
        )
        report.check(f"scalvec_d{d}_growth_excess", float(np.max(growth)), 0.0)
        tz = np.column_stack([np.linspace(-2.0, 2.0, 41), np.zeros((41, d))])
        xz = np.column_stack([np.zeros(41), np.linspace(-2.0, 2.0, 41)[:, None] * np.ones(d)])
        ann = max(
            float(np.max(np.abs(realize(net, RELU, tz)))),
            float(np.max(np.abs(realize(net, RELU, xz)))),
        )
        report.check_identity(f"scalvec_d{d}_annihilation", ann)
        report.check(
            f"scalvec_d{d}_param_bound",
            param_count(net),
            d**2 * (360.0 * q / (q - 2.0)) * (math.log2(1.0 / eps) + q + 1.0) - 252.0 * d**2,
        )
        report.check(f"scalvec_d{d}_param_vs_d2_product", param_count(net),
                     d**2 * param_count(prod), headroom=0.0)
        report.check(
            f"scalvec_d{d}_depth_bound", net.depth, q / (q - 2.0) * (math.log2(1.0 / eps) + q)
        )
    return report


# ---------------------------------------------------------------------------
# euler suite


def _drift_growth_constant(net: Network) -> float:
    """Certified c with ||realized drift(x)|| <= c (1 + ||x||): the value at 0
    plus the product of spectral norms dominates both value and slope."""
    at_zero = float(np.linalg.norm(realize(net, RELU, np.zeros(net.input_dim))))
    lip = 1.0
    for layer in net.layers:
        lip *= float(np.linalg.norm(layer.weights, ord=2))
    return max(at_zero, lip)


def _suite_euler(seed: int) -> BoundReport:
    rng = np.random.default_rng(seed)
    report = BoundReport(metadata={"suite": "euler", "seed": seed, "grid": "100 random specs"})

    exact_err = 0.0
    adapted_net_bad = adapted_val_bad = 0
    continuity_bad = 0
    for _ in range(100):
        d = int(rng.integers(1, 6))
        N = int(rng.integers(1, 17))
        depth = int(rng.integers(1, 4))
        drift = _random_net(rng, d, d, depth, width_hi=4, scale=0.6)
        y = 0.3 * rng.standard_normal((N, d))
        spec = EulerSpec(drift, 1.0, N, tuple(y))
        x = rng.standard_normal(d)
        nodes = euler_nodes(spec, x)
        for n in (N, int(rng.integers(0, N + 1))):
            net = euler_space_net(spec, n)
            got = realize(net, RELU, x)
            scale = max(1.0, float(np.linalg.norm(nodes[n])))
            exact_err = max(exact_err, float(np.linalg.norm(got - nodes[n])) / scale)
        if N >= 2:
            n = int(rng.integers(0, N - 1))
            z = y.copy()
            z[n + 1 :] += rng.standard_normal((N - n - 1, d))
            other = EulerSpec(drift, 1.0, N, tuple(z))
            net_y = euler_space_net(spec, n)
            net_z = euler_space_net(other, n)
            if not networks_equal(net_y, net_z):
                adapted_net_bad += 1
            if not np.array_equal(realize(net_y, RELU, x), realize(net_z, RELU, x)):
                adapted_val_bad += 1
        # continuity in y by a shrinking finite perturbation
        direction = rng.standard_normal((N, d))
        direction /= np.linalg.norm(direction)
        base_net = euler_space_net(spec, N)
        base_val = realize(base_net, RELU, x)
        deltas = []
        for step in (1e-2, 1e-4, 1e-6):
            pert = EulerSpec(drift, 1.0, N, tuple(y + step * direction))
            val = realize(euler_space_net(pert, N), RELU, x)
            deltas.append(float(np.linalg.norm(val - base_val)))
        monotone = deltas[0] + 1e-12 >= deltas[1] and deltas[1] + 1e-12 >= deltas[2]
        if not (monotone and deltas[2] <= 1e-3):
            continuity_bad += 1
    report.check_identity("euler_space_exactness_rel_err", exact_err, 1e-11)
    report.check_exact("euler_space_adaptedness_networks", adapted_net_bad)
    report.check_exact("euler_space_adaptedness_values", adapted_val_bad)
    report.check_exact("euler_space_continuity_in_y", continuity_bad)

    # residual step laws
    step_err = 0.0
    step_dims_bad = step_param_bad = 0
    step_bound_viol = -math.inf
    for _ in range(50):
        d = int(rng.integers(1, 4))
        emu = relu_identity(d)
        i = emu.width
        L1 = int(rng.integers(2, 4))
        phi1 = _random_net(rng, d, d, L1, width_hi=4)
        phi2 = _random_net(rng, d, d, int(rng.integers(1, 4)), width_hi=4)
        psi = residual_step(phi1, phi2, emu)
        x = rng.standard_normal((8, d))
        f2 = realize(phi2, RELU, x)
        want = f2 + realize(phi1, RELU, f2)
        step_err = max(step_err, _rel_err(realize(psi, RELU, x), want))
        d1, d2 = dims(phi1).dims, dims(phi2).dims
        want_dims = d2[:-1] + tuple(l + i for l in d1[1:-1]) + (d1[-1],)
        if dims(psi).dims != want_dims:
            step_dims_bad += 1
        exact = (
            param_count(phi1)
            + param_count(phi2)
            + (i - d) * (d2[-2] + 1)
            + d1[1] * (d2[-2] - d)
            + (L1 - 2) * i * (i + 1)
            + i * sum(d1[2:])
            + i * sum(d1[1 : L1 - 1])
        )
        if param_count(psi) != exact:
            step_param_bad += 1
        if d2[-2] <= d1[-2] + i:
            bound = param_count(phi2) + (0.5 * param_count(emu.net) + param_count(phi1)) ** 2
            step_bound_viol = max(step_bound_viol, param_count(psi) - bound)
    report.check_identity("residual_step_realization_rel_err", step_err)
    report.check_exact("residual_step_dims_law", step_dims_bad)
    report.check_exact("residual_step_param_identity", step_param_bad)
    report.check("residual_step_param_bound_excess", step_bound_viol, 0.0)

    # residual chains
    chain_err = 0.0
    chain_affine_bad = 0
    for _ in range(30):
        d = 3
        emu = relu_identity(d)
        # hypothesis: second-to-last widths non-decreasing along the chain
        widths = sorted(int(rng.integers(1, 5)) for _ in range(4))
        phis = [
            Network(
                (
                    (0.6 * rng.standard_normal((w, d)) / math.sqrt(d),
                     0.3 * rng.standard_normal(w)),
                    (0.6 * rng.standard_normal((d, w)) / math.sqrt(w),
                     0.3 * rng.standard_normal(d)),
                )
            )
            for w in widths
        ]
        chain = residual_chain(emu.net, phis, emu, 4)
        x = rng.standard_normal((4, d))
        want = x
        for phi in phis:
            want = want + realize(phi, RELU, want)
        chain_err = max(chain_err, _rel_err(realize(chain, RELU, x), want))
        aff = [_random_net(rng, d, d, 1) for _ in range(3)]
        achain = residual_chain(emu.net, aff, emu, 3)
        if dims(achain).dims != dims(emu.net).dims:
            chain_affine_bad += 1
    probe = _random_net(rng, 2, 2, 2)
    if residual_chain(probe, [], relu_identity(2), 0) is not probe:
        chain_affine_bad += 1
    report.check_identity("residual_chain_recursion_rel_err", chain_err)
    report.check_exact("residual_chain_affine_dims_preserved", chain_affine_bad)

    # a priori iterate bound
    gron_viol = -math.inf
    for _ in range(100):
        d = int(rng.integers(1, 5))
        N = int(rng.integers(1, 11))
        m = 0.4 * rng.standard_normal((d, d))
        v = rng.standard_normal(d)
        C = float(np.linalg.norm(v))
        c = float(np.linalg.norm(m, ord=2))
        mats = [0.3 * rng.standard_normal((d, d)) for _ in range(N)]
        y = [0.5 * rng.standard_normal(d) for _ in range(N)]
        x = rng.standard_normal(d)
        iterates = perturbed_iterates(lambda z: m @ z + v, mats, y, x)
        inputs = GrowthBoundInputs.from_steps(C, c, mats, y)
        for n, val in enumerate(iterates):
            gron_viol = max(
                gron_viol,
                float(np.linalg.norm(val)) - gronwall_bound(inputs, float(np.linalg.norm(x)), n),
            )
    report.check("gronwall_iterate_bound_excess", gron_viol, 0.0)
    zero_inputs = GrowthBoundInputs.from_steps(
        0.0, 0.0, [np.eye(2)] * 3, [np.ones(2), -np.ones(2), np.ones(2)]
    )
    want = 1.5 + zero_inputs.y_partial_max[3]
    report.check_exact(
        "gronwall_zero_growth_exact",
        int(gronwall_bound(zero_inputs, 1.5, 3) != want),
    )
    return report


# ---------------------------------------------------------------------------
# spacetime suite


def _demo_drift(seed: int, d: int) -> Network:
    """Seeded two-layer drift with moderate growth, shared across suites."""
    rng = np.random.default_rng(seed + 1000 * d)
    return _random_net(rng, d, d, 2, width_hi=3, scale=0.7)


def _x_points(d: int, count: int) -> np.ndarray:
    if d == 1:
        return np.linspace(-2.0, 2.0, count)[:, None]
    return 4.0 * halton(count, d) - 2.0


def _spacetime_config_checks(report, spec, growth_c, tgrid, xpts, tag):
    d, N = spec.d, spec.N
    net = spacetime_net(spec)
    times = spec.times()
    inputs = GrowthBoundInputs.from_steps(growth_c, growth_c, [
        (spec.T / N) * np.eye(d)] * N, spec.y)
    err_ratio = growth_ratio = 0.0
    for x in xpts:
        xn = float(np.linalg.norm(x))
        pts = np.column_stack([tgrid, np.tile(x, (len(tgrid), 1))])
        vals = realize(net, RELU, pts)
        for t, val in zip(tgrid, vals):
            n = min(int(np.searchsorted(times, t, side="right")) - 1, N - 1)
            n = max(n, 0)
            truth = euler_oracle(spec, float(t), x)
            gn = gronwall_bound(inputs, xn, n)
            gn1 = gronwall_bound(inputs, xn, n + 1)
            err_bound = spec.epsilon * (2.0 * math.sqrt(d) + gn**spec.q + gn1**spec.q)
            growth_bound = 6.0 * math.sqrt(d) + 2.0 * (gn**2 + gn1**2)
            err_ratio = max(err_ratio, float(np.linalg.norm(val - truth)) / err_bound)
            growth_ratio = max(growth_ratio, float(np.linalg.norm(val)) / growth_bound)
    report.check(f"{tag}_error_vs_bound_ratio", err_ratio, 1.0)
    report.check(f"{tag}_growth_vs_bound_ratio", growth_ratio, 1.0)
    report.check(f"{tag}_param_bound", param_count(net), spacetime_param_bound(spec))
    return net


def _suite_spacetime(seed: int) -> BoundReport:
    rng = np.random.default_rng(seed)
    report = BoundReport(
        metadata={"suite": "spacetime", "seed": seed, "grid": "21 t x 21 x points, 3 y draws"}
    )
    T = 1.0
    tgrid = np.linspace(0.0, T, 21)
    for d in (1, 2):
        drift = _demo_drift(seed, d)
        growth_c = _drift_growth_constant(drift)
        xpts = _x_points(d, 21)
        for N in (2, 4):
            for eps in (1e-1, 1e-2):
                for rep in range(3):
                    y = tuple(0.4 * rng.standard_normal((N, d)))
                    spec = EulerSpec(drift, T, N, y, eps, 3.0)
                    tag = f"spacetime_d{d}_N{N}_eps{eps:g}_y{rep}"
                    _spacetime_config_checks(report, spec, growth_c, tgrid, xpts, tag)

    # structural and interpolation laws on one representative spec
    d, N, eps = 2, 4, 1e-1
    drift = _demo_drift(seed, d)
    y = tuple(0.4 * rng.standard_normal((N, d)))
    spec = EulerSpec(drift, T, N, y, eps, 3.0)
    gamma = scalar_vector_product(ApproxSpec(eps, 3.0, d))
    id_1, id_d, id_joint = relu_identity(1), relu_identity(d), relu_identity(d + 1)
    hats = time_hat_nets(T, N)
    depth_bad = 0
    for n in range(N + 1):
        summand = concat_identity(
            gamma, id_joint, parallel_general([hats[n], euler_space_net(spec, n)], [id_1, id_d])
        )
        if summand.depth != gamma.depth + 2 + n * drift.hidden:
            depth_bad += 1
    report.check_exact("spacetime_summand_depth_law", depth_bad)

    step = T / N
    interior = np.linspace(0.0, T, 41)
    hat_vals = np.column_stack(
        [realize(h, RELU, interior[:, None])[:, 0] for h in hats]
    )
    def hat_formula(n, t):
        lo, mid, hi = (n - 1) * step, n * step, (n + 1) * step
        rising = (t - lo) / (mid - lo) * ((t > lo) & (t <= mid))
        falling = (hi - t) / (hi - mid) * ((t > mid) & (t < hi))
        return rising + falling
    interp_err = max(
        float(np.max(np.abs(hat_vals[:, n] - hat_formula(n, interior)))) for n in range(N + 1)
    )
    report.check_identity("spacetime_hat_matches_interp_weights", interp_err)
    report.check_identity(
        "spacetime_partition_of_unity", float(np.max(np.abs(hat_vals.sum(axis=1) - 1.0)))
    )

    # adaptedness: future perturbations are invisible before their interval
    net_y = spacetime_net(spec)
    z = tuple(np.array(v) for v in y)
    z = z[:2] + tuple(v + rng.standard_normal(d) for v in z[2:])
    net_z = spacetime_net(EulerSpec(drift, T, N, z, eps, 3.0))
    early = np.column_stack(
        [np.linspace(0.0, 2 * step, 9), np.tile(_x_points(d, 9)[0], (9, 1))]
    )
    adapt = _rel_err(realize(net_z, RELU, early), realize(net_y, RELU, early))
    report.check_identity("spacetime_adaptedness_before_t_n", adapt)
    return report


# ---------------------------------------------------------------------------
# headline scaling suite


def scaling_report(
    spec: EulerSpec, growth_c: float, size_exp: float, seed: int = 7, tag: str = "scaling"
) -> BoundReport:
    """Measure one space-time network against the headline a priori bounds.

    growth_c must certify ||drift(x)|| <= growth_c (1 + ||x||) and
    param_count(drift) <= growth_c * d^size_exp; both are rechecked on
    samples / exactly.  Requires q = 3.
    """
    if spec.q != 3.0:
        raise DomainError("the headline bounds are stated for q = 3")
    report = BoundReport(
        metadata={"suite": tag, "seed": seed, "grid": "11 t x 11 x points"}
    )
    d, N = spec.d, spec.N
    probe = np.vstack([np.zeros(d), 3.0 * halton(64, d) - 1.5])
    drift_vals = realize(spec.drift, RELU, probe)
    drift_excess = np.linalg.norm(drift_vals, axis=1) - growth_c * (
        1.0 + np.linalg.norm(probe, axis=1)
    )
    report.check(f"{tag}_drift_growth_certified", float(np.max(drift_excess)), 0.0)
    report.check(
        f"{tag}_drift_size_certified",
        param_count(spec.drift),
        growth_c * float(d) ** size_exp,
        headroom=0.0,
    )
    bounds = scaling_bounds(growth_c, size_exp, spec.T, d, N, spec.epsilon)
    net = spacetime_net(spec)
    y_norm = float(np.linalg.norm(np.concatenate(spec.y)))
    tgrid = np.linspace(0.0, spec.T, 11)
    err_ratio = growth_ratio = 0.0
    for x in _x_points(d, 11):
        xn = float(np.linalg.norm(x))
        pts = np.column_stack([tgrid, np.tile(x, (len(tgrid), 1))])
        vals = realize(net, RELU, pts)
        for t, val in zip(tgrid, vals):
            truth = euler_oracle(spec, float(t), x)
            err_weight = 1.0 + xn**3 + y_norm**3
            growth_weight = 1.0 + xn**2 + y_norm**2
            err_ratio = max(
                err_ratio, float(np.linalg.norm(val - truth)) / (bounds["error"] * err_weight)
            )
            growth_ratio = max(
                growth_ratio, float(np.linalg.norm(val)) / (bounds["growth"] * growth_weight)
            )
    report.check(f"{tag}_error_vs_bound_ratio", err_ratio, 1.0)
    report.check(f"{tag}_growth_vs_bound_ratio", growth_ratio, 1.0)
    report.check(f"{tag}_param_bound", param_count(net), bounds["params"])
    return report


def _suite_thm1(seed: int) -> BoundReport:
    rng = np.random.default_rng(seed)
    report = BoundReport(
        metadata={"suite": "thm1", "seed": seed, "grid": "criterion-7 sweep + N slope"}
    )
    size_exp = 2.0
    for d in (1, 2):
        drift = _demo_drift(seed, d)
        growth_c = max(
            _drift_growth_constant(drift), param_count(drift) / float(d) ** size_exp
        )
        for N in (2, 4):
            for eps in (1e-1, 1e-2):
                for rep in range(3):
                    y = tuple(0.4 * rng.standard_normal((N, d)))
                    spec = EulerSpec(drift, 1.0, N, y, eps, 3.0)
                    sub = scaling_report(
                        spec, growth_c, size_exp, seed,
                        tag=f"thm1_d{d}_N{N}_eps{eps:g}_y{rep}",
                    )
                    report.entries.extend(sub.entries)

    # parameter count scaling in N: log-log slope over N in {1,2,4,8}
    drift = _demo_drift(seed, 1)
    counts = []
    for N in (1, 2, 4, 8):
        y = tuple(np.zeros((N, 1)))
        spec = EulerSpec(drift, 1.0, N, y, 1e-2, 3.0)
        counts.append(param_count(spacetime_net(spec)))
    slope = float(np.polyfit(np.log([1, 2, 4, 8]), np.log(counts), 1)[0])
    report.check("thm1_param_slope_in_N", slope, 6.0 + 0.1, headroom=0.0)
    report.metadata["param_counts_N_1_2_4_8"] = counts
    return report


SUITES = {
    "calculus": _suite_calculus,
    "square": _suite_square,
    "product": _suite_product,
    "scalvec": _suite_scalvec,
    "euler": _suite_euler,
    "spacetime": _suite_spacetime,
    "thm1": _suite_thm1,
}


def run_suite(name: str, seed: int = 7) -> BoundReport:
    """Execute one named property battery; deterministic in (name, seed)."""
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed)
