"""Command line front end.

Exit codes: 0 on success, 1 on numeric failure (a structured JSON message goes
to stderr), 2 on usage errors (argparse's convention).  All numbers are
printed with 12 significant digits and no locale dependence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

import numpy as np

from . import catalog, dynamics, phasespace
from .fock import (DensityMatrix, TruncationLeakError, apply_displacement,
                   apply_rotation)
from .lowrank import measure_lowrank
from .measure import (ConvergenceError, measure_char_quadrature, measure_operator,
                      measure_wigner_grid)


def _sig12(x):
    if isinstance(x, float):
        return float(f"{x + 0.0:.12g}")  # + 0.0 folds -0.0 into 0.0
    if isinstance(x, dict):
        return {k: _sig12(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_sig12(v) for v in x]
    return x


def _emit_json(payload, stream=None):
    print(json.dumps(_sig12(payload)), file=stream or sys.stdout)


# ---------------------------------------------------------------------------
# state construction from flags

STATE_NAMES = ("fock", "coherent", "scs", "mixture-scs", "decohered-scs",
               "squeezed", "gaussian", "thermal", "thermal-scs", "ghz", "noon",
               "dur", "maximally-mixed")


def _add_state_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", required=True, choices=STATE_NAMES)
    p.add_argument("--n", type=int, help="photon number (fock, noon)")
    p.add_argument("--alpha", type=float, help="coherent amplitude")
    p.add_argument("--tau", type=float, help="damping time (decohered-scs)")
    p.add_argument("--s", type=float, help="squeezing parameter")
    p.add_argument("--A", type=float, help="Gaussian width, real axis")
    p.add_argument("--B", type=float, help="Gaussian width, imaginary axis")
    p.add_argument("--nbar", type=float, help="thermal occupation")
    p.add_argument("--V", type=float, help="thermal broadening (thermal-scs)")
    p.add_argument("--d", type=float, help="branch displacement (thermal-scs)")
    p.add_argument("--n-modes", type=int, help="mode count (ghz, dur)")
    p.add_argument("--epsilon", type=float, help="branch angle (dur)")
    p.add_argument("--dim", type=int, help="dimension (maximally-mixed)")
    p.add_argument("--cutoff", type=int,
                   help="Fock cutoff; defaults to MACROQ_DEFAULT_CUTOFF or a "
                        "per-state heuristic")


def _need(parser, args, names):
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            parser.error(f"--state {args.state} requires --{name}")


class StateSpec:
    """What the chosen state supports, resolved from parsed flags."""

    def __init__(self, label, default_route, dense=None, lowrank=None,
                 closed=None, char=None):
        self.label = label
        self.default_route = default_route
        self._dense = dense
        self.lowrank = lowrank
        self.closed = closed
        self._char = char

    def dense(self) -> DensityMatrix:
        if self._dense is None:
            raise ValueError(f"state {self.label} has no Fock-space form")
        return self._dense()

    def char(self):
        if self._char is not None:
            return self._char()
        return phasespace.char_of(self.dense())


def _resolve_cutoff(args) -> int | None:
    """Explicit flag, then the environment override, then None (per-state default)."""
    if args.cutoff is not None:
        return args.cutoff
    env = os.environ.get("MACROQ_DEFAULT_CUTOFF")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"MACROQ_DEFAULT_CUTOFF={env!r} is not an integer")
    return None


def build_state(parser, args) -> StateSpec:
    cut = _resolve_cutoff(args)
    name = args.state
    if name == "fock":
        _need(parser, args, ["n"])
        return StateSpec(f"fock n={args.n}", "operator",
                         dense=lambda: catalog.make_fock(args.n, cut))
    if name == "coherent":
        _need(parser, args, ["alpha"])
        return StateSpec(f"coherent alpha={args.alpha:g}", "operator",
                         dense=lambda: catalog.make_coherent(args.alpha, cut))
    if name == "scs":
        _need(parser, args, ["alpha"])
        return StateSpec(f"scs alpha={args.alpha:g}", "operator",
                         dense=lambda: catalog.make_scs(args.alpha, cut),
                         closed=lambda: catalog.closed_form_scs(args.alpha))
    if name == "mixture-scs":
        _need(parser, args, ["alpha"])
        return StateSpec(f"mixture-scs alpha={args.alpha:g}", "closed-form",
                         dense=lambda: catalog.make_mixture_scs(args.alpha, cut),
                         closed=lambda: catalog.mixture_scs_measure(args.alpha))
    if name == "decohered-scs":
        _need(parser, args, ["alpha", "tau"])
        return StateSpec(f"decohered-scs alpha={args.alpha:g} tau={args.tau:g}",
                         "closed-form",
                         dense=lambda: catalog.make_decohered_scs(args.alpha, args.tau, cut),
                         closed=lambda: catalog.closed_form_decohered_scs(args.alpha, args.tau))
    if name == "squeezed":
        _need(parser, args, ["s"])
        return StateSpec(f"squeezed s={args.s:g}", "operator",
                         dense=lambda: catalog.make_squeezed(args.s, cut),
                         closed=lambda: catalog.gaussian_measure(
                             *catalog.squeezed_char_params(args.s)))
    if name == "gaussian":
        _need(parser, args, ["A", "B"])
        return StateSpec(f"gaussian A={args.A:g} B={args.B:g}", "closed-form",
                         closed=lambda: catalog.gaussian_measure(args.A, args.B),
                         char=lambda: catalog.GaussianChar(args.A, args.B))
    if name == "thermal":
        _need(parser, args, ["nbar"])
        return StateSpec(f"thermal nbar={args.nbar:g}", "closed-form",
                         dense=lambda: catalog.make_thermal(args.nbar, cut),
                         closed=lambda: catalog.thermal_measure(args.nbar),
                         char=lambda: catalog.GaussianChar(2 * args.nbar + 1,
                                                           2 * args.nbar + 1))
    if name == "thermal-scs":
        _need(parser, args, ["V", "d"])
        return StateSpec(f"thermal-scs V={args.V:g} d={args.d:g}", "closed-form",
                         dense=lambda: catalog.make_thermal_scs(args.V, args.d, cut),
                         closed=lambda: catalog.thermal_scs_measure(args.V, args.d),
                         char=lambda: catalog.ThermalSCSChar(args.V, args.d))
    if name == "ghz":
        _need(parser, args, ["n-modes"])
        return StateSpec(f"ghz n_modes={args.n_modes}", "low-rank",
                         lowrank=lambda: catalog.make_ghz(args.n_modes),
                         dense=lambda: catalog.make_ghz(args.n_modes).to_dense())
    if name == "noon":
        _need(parser, args, ["n"])
        return StateSpec(f"noon n={args.n}", "low-rank",
                         lowrank=lambda: catalog.make_noon(args.n),
                         dense=lambda: catalog.make_noon(args.n).to_dense())
    if name == "dur":
        _need(parser, args, ["n-modes", "epsilon"])
        return StateSpec(f"dur n_modes={args.n_modes} epsilon={args.epsilon:g}",
                         "low-rank",
                         lowrank=lambda: catalog.make_dur(args.n_modes, args.epsilon),
                         dense=lambda: catalog.make_dur(args.n_modes, args.epsilon).to_dense(),
                         closed=lambda: catalog.dur_measure(args.n_modes, args.epsilon))
    if name == "maximally-mixed":
        _need(parser, args, ["dim"])
        return StateSpec(f"maximally-mixed dim={args.dim}", "operator",
                         dense=lambda: catalog.make_maximally_mixed(args.dim))
    parser.error(f"unknown state {name!r}")


def _run_route(parser, args, spec: StateSpec):
    route = args.route or spec.default_route
    if route == "closed-form":
        if spec.closed is None:
            parser.error(f"state {spec.label} has no closed form")
        return spec.closed()
    if route == "low-rank":
        if spec.lowrank is None:
            parser.error(f"state {spec.label} is not a low-rank product state")
        return measure_lowrank(spec.lowrank())
    if route == "operator":
        return measure_operator(spec.dense())
    if route == "char-quadrature":
        chi = spec.char()
        if hasattr(chi, "state") and chi.state.cutoffs.modes != 1:
            parser.error("char-quadrature handles single-mode states")
        return measure_char_quadrature(chi, radial_cut=None)
    if route == "wigner-grid":
        return measure_wigner_grid(phasespace.wigner_of(spec.dense()))
    parser.error(f"unknown route {route!r}")


# ---------------------------------------------------------------------------
# subcommands

def cmd_measure(parser, args) -> int:
    spec = build_state(parser, args)
    res = _run_route(parser, args, spec)
    _emit_json(res.as_dict())
    return 0


def _csv_line(*cells) -> str:
    out = []
    for c in cells:
        out.append(f"{c + 0.0:.12g}" if isinstance(c, float) else str(c))
    return ",".join(out)


def cmd_sweep(parser, args) -> int:
    lines = ["param,axis_value,I,mean_n,purity"]
    n = args.samples
    if args.preset == "fig1a":
        for alpha in (2.0, 4.0, 6.0, 27.3):
            for r in np.linspace(0.0, 1.0, n):
                x = 1.0 - r * r
                tau = np.inf if x == 0.0 else -np.log(x)
                res = catalog.closed_form_decohered_scs(alpha, tau)
                lines.append(_csv_line(f"alpha={alpha:g}", float(r), res.value,
                                       res.mean_n, res.purity))
    elif args.preset == "fig1b":
        for s in (1.5, 2.1, 2.5, 7.0):
            a0, b0 = catalog.squeezed_char_params(s)
            for r in np.linspace(0.0, 1.0, n):
                x = 1.0 - r * r
                tau = np.inf if x == 0.0 else -np.log(x)
                a, b = catalog.gaussian_decohere(a0, b0, tau)
                res = catalog.gaussian_measure(a, b)
                lines.append(_csv_line(f"s={s:g}", float(r), res.value,
                                       res.mean_n, res.purity))
    elif args.preset == "thermal-limit":
        for v in np.geomspace(1.0, 1e4, n):
            res = catalog.thermal_scs_measure(float(v), 0.0)
            lines.append(_csv_line("d=0", float(v), res.value, res.mean_n, res.purity))
    else:
        parser.error(f"unknown preset {args.preset!r}")
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_emit_wigner(parser, args) -> int:
    spec = build_state(parser, args)
    state = spec.dense()
    if state.cutoffs.modes != 1:
        parser.error("Wigner grids are single-mode")
    axes = {}
    if args.half_width is not None:
        ax = phasespace.Axis(-args.half_width, args.half_width, args.points)
        axes = {"x_axis": ax, "p_axis": ax}
    grid = phasespace.wigner_of(state, points=args.points, **axes)
    grid.meta["state"] = spec.label
    phasespace.save_wigner(grid, args.output)
    return 0


def cmd_score_wigner(parser, args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        grid = phasespace.load_wigner(args.input,
                                      strict_normalization=args.strict_normalization)
        res = measure_wigner_grid(grid)
    payload = res.as_dict()
    notes = [str(w.message) for w in caught]
    if notes:
        payload["warnings"] = payload.get("warnings", []) + notes
    _emit_json(payload)
    return 0


def cmd_evolve(parser, args) -> int:
    spec = build_state(parser, args)
    state = spec.dense()
    times = np.linspace(0.0, args.t_max, args.samples)
    traj = dynamics.evolve(state, times, step=args.step)
    lines = ["tau,I,purity,mean_n"]
    for pt in traj:
        lines.append(_csv_line(pt.tau, pt.value, pt.purity, pt.mean_n))
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_check(parser, args) -> int:
    rng = np.random.default_rng(args.seed)
    sign = -1.0 if args.inject_fault else 1.0
    rows = []

    def record(name, ok, margin):
        rows.append((name, bool(ok), float(margin)))

    dim = 6
    results = []
    for _ in range(args.ensemble):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        rho = g @ g.conj().T
        state = DensityMatrix((dim,), rho)
        results.append(measure_operator(state, _exchange_sign=sign))
    # a pure state with a nonzero field average: the flipped exchange term
    # overshoots the occupation here, so an injected fault cannot hide
    results.append(measure_operator(catalog.make_coherent(1.0, 25),
                                    _exchange_sign=sign))
    slack = [r.mean_n - r.value for r in results]
    record("occupation-bound", min(slack) >= -1e-9, min(slack))

    mixed = [s for s, r in zip(slack, results) if r.purity < 1.0 - 1e-6]
    record("strict-bound-when-mixed", bool(mixed) and min(mixed) > 0.0,
           min(mixed) if mixed else np.nan)

    gaps = [abs(measure_operator(catalog.make_fock(n)).value - n) for n in range(6)]
    cat = measure_operator(catalog.make_scs(1.2))
    gaps.append(abs(cat.value - cat.mean_n))
    record("pure-zero-overlap-equality", max(gaps) <= 1e-8, max(gaps))

    base = catalog.make_scs(1.0, 40)
    i0 = measure_operator(base).value
    moved = apply_displacement(base, [1.0 + 0.5j])
    record("displacement-invariance",
           abs(measure_operator(moved).value - i0) <= 1e-5,
           abs(measure_operator(moved).value - i0))
    turned = apply_rotation(base, [0.37])
    record("rotation-invariance",
           abs(measure_operator(turned).value - i0) <= 1e-10,
           abs(measure_operator(turned).value - i0))

    coh = catalog.make_coherent(1.0, 25)
    r_op = measure_operator(coh).value
    r_ch = measure_char_quadrature(phasespace.char_of(coh), radial_cut=None).value
    r_wg = measure_wigner_grid(phasespace.wigner_of(coh)).value
    spread = max(r_op, r_ch, r_wg) - min(r_op, r_ch, r_wg)
    record("route-triangle", spread <= 1e-3, spread)

    resid = dynamics.purity_rate_residuals(catalog.make_scs(1.0, 30), [0.2])
    record("purity-rate-identity", resid[0] <= 1e-5, resid[0])

    left = catalog.make_coherent(0.8, 12)
    right = catalog.make_thermal(0.5, 16)
    both = DensityMatrix((12, 16), np.kron(left.data, right.data))
    i_two = measure_operator(both).value
    i_parts = (measure_operator(left).value * right.purity()
               + measure_operator(right).value * left.purity())
    record("product-additivity", abs(i_two - i_parts) <= 1e-8, abs(i_two - i_parts))

    ok_all = True
    for name, ok, margin in rows:
        ok_all &= ok
        print(f"{'PASS' if ok else 'FAIL'} {name} margin={margin:.3e}")
    print(f"{sum(ok for _, ok, _ in rows)}/{len(rows)} properties hold")
    return 0 if ok_all else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="macroq",
                                     description="Interference-based macroscopicity "
                                                 "of bosonic states")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="evaluate I for a named state")
    _add_state_flags(p)
    p.add_argument("--route", choices=("operator", "char-quadrature", "wigner-grid",
                                       "closed-form", "low-rank"))
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("sweep", help="closed-form decoherence curves as CSV")
    p.add_argument("--preset", required=True,
                   choices=("fig1a", "fig1b", "thermal-limit"))
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("emit-wigner", help="sample a state's Wigner function to a file")
    _add_state_flags(p)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--half-width", type=float)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_emit_wigner)

    p = sub.add_parser("score-wigner", help="evaluate I from a WIGNER-GRID file")
    p.add_argument("--input", required=True)
    p.add_argument("--strict-normalization", action="store_true")
    p.set_defaults(func=cmd_score_wigner)

    p = sub.add_parser("evolve", help="amplitude-damping trajectory as CSV")
    _add_state_flags(p)
    p.add_argument("--t-max", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=11)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--output")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("check", help="self-test the measure's defining properties")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--ensemble", type=int, default=50)
    p.add_argument("--inject-fault", action="store_true",
                   help="flip one Lindblad term to prove the checks can fail")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except ConvergenceError as exc:
        payload = {"error": "convergence", "message": str(exc)}
        if exc.partial is not None:
            payload["partial"] = exc.partial.as_dict()
        _emit_json(payload, stream=sys.stderr)
        return 1
    except (TruncationLeakError, ValueError, RuntimeError, OSError) as exc:
        _emit_json({"error": type(exc).__name__, "message": str(exc)},
                   stream=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
