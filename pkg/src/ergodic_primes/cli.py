"""Command-line entry point: ``ergodic-primes <subcommand> ...``.

Exit codes: 0 success, 1 validation or usage failure, 2 resource error.
"""
from __future__ import annotations

import argparse
import ast
import inspect
import math
import sys
from fractions import Fraction

import numpy as np

from . import circle, expsums, harness, operators, seminorms
from .errors import ErgodicPrimesError, ParameterError, ResourceError
from .lattice import GammaSet, ball, cube, ellipsoid, make_config
from .primes import sieve_primes
from .signals import format_signal, read_signal


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def fmt(x) -> str:
    """10 significant digits: fixed notation in the usual range, exponent form outside it."""
    x = float(x)
    if x == 0 or 1e-4 <= abs(x) < 1e10:
        return f"{x:.10f}"
    if not math.isfinite(x):
        return str(x)
    return f"{x:.9e}"


def fmt_complex(z) -> str:
    z = complex(z)
    return f"{fmt(z.real)} {fmt(z.imag)}"


# ---------------------------------------------------------------------------
# argument helpers


def parse_list(text, conv=float):
    return [conv(x) for x in text.replace(" ", "").split(",") if x]


def parse_gamma(text, k):
    """'2' -> ((2,)), '1;2' -> ((1,), (2,)), '0,1;1,0' -> ((0,1), (1,0))."""
    idx = [tuple(int(e) for e in part.split(",")) for part in text.replace(" ", "").split(";") if part]
    return GammaSet.from_indices(k, idx)


def _number(text):
    """A real number or an exact fraction 'a/q'."""
    return Fraction(text) if "/" in text else float(text)


def _config(args):
    k = args.k
    kpp = args.k_double_prime
    if args.k_prime is not None and args.k_prime + kpp != k:
        raise ParameterError("need k' + k'' = k")
    gamma = parse_gamma(args.gamma_only, k) if args.gamma_only else None
    return make_config(k, kpp, args.gamma_degree, gamma)


def _region(args, k):
    if args.region == "ball":
        return ball(k, args.c_omega)
    if args.region == "cube":
        return cube(k)
    axes = parse_list(args.axes) if args.axes else [1.0] * k
    if len(axes) != k:
        raise ParameterError("ellipsoid needs one axis per coordinate")
    return ellipsoid(axes)


def _kernel(args, k):
    return operators.riesz_kernel(k, args.kernel_j, normalized=not args.raw_kernel)


def _plan(args, gamma):
    return circle.ParameterPlan.for_gamma(
        gamma, p=args.p, tau=args.tau, chi=args.chi, rho=args.rho, beta=args.beta,
        u=args.u, p0=args.p0, delta=args.delta, kappa_rule=args.kappa_rule,
    )


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_sieve(args):
    table = sieve_primes(args.limit)
    if args.count:
        print(len(table))
    else:
        print(" ".join(str(p) for p in table))
    return 0


def cmd_gauss(args):
    cfg = _config(args)
    if args.a is None:
        print(f"max_modulus {fmt(expsums.max_gauss_modulus(args.q, cfg))}")
        return 0
    a = parse_list(args.a, int)
    if len(a) == 1:
        a = a * len(cfg.gamma)
    if len(a) != len(cfg.gamma):
        raise ParameterError(f"need {len(cfg.gamma)} numerators")
    G = expsums.gauss_sum(expsums.ReducedFraction(tuple(a), args.q), cfg)
    print(f"value {fmt_complex(G)}")
    print(f"modulus {fmt(abs(G))}")
    return 0


def cmd_weyl(args):
    cfg = _config(args)
    region = _region(args, cfg.k)
    xi = parse_list(args.xi, _number)
    if len(xi) != len(cfg.gamma):
        raise ParameterError(f"need {len(cfg.gamma)} frequency components")
    phi = "log" if args.log_weights else None
    S = expsums.weyl_sum(xi, cfg, region, args.t, phi=phi)
    print(f"value {fmt_complex(S)}")
    print(f"modulus {fmt(abs(S))}")
    return 0


def cmd_operator(args):
    cfg = _config(args)
    region = _region(args, cfg.k)
    f = read_signal(args.signal)
    if f.dim != len(cfg.gamma):
        raise ParameterError(f"signal lives in Z^{f.dim}, Gamma has {len(cfg.gamma)} indices")
    if args.command == "average":
        if args.fft:
            m = expsums.DiscreteMultiplier(args.t, cfg, region)
            out = operators.apply_multiplier(f, m, radius=m.radius)
        else:
            out = operators.average_A(f, args.t, cfg, region)
    elif args.command == "cotlar":
        K = _kernel(args, cfg.k)
        if args.fft:
            m = expsums.DiscreteMultiplier(args.t, cfg, region, "cotlar", K)
            out = operators.apply_multiplier(f, m, radius=m.radius)
        else:
            out = operators.cotlar_H(f, args.t, K, cfg, region)
    else:
        R = _twist(args.poly, cfg.k)
        out = operators.twisted_average(f, args.t, R, cfg, region)
    _emit(format_signal(out, "{:.10g}"), args.out)
    return 0


def _twist(text, k):
    """'i,j:c;...' (one exponent per coordinate) or 'i:c' when k = 1."""
    coeffs = {}
    for part in text.replace(" ", "").split(";"):
        if not part:
            continue
        mono, c = part.split(":")
        g = tuple(int(e) for e in mono.split(","))
        coeffs[g] = coeffs.get(g, 0.0) + float(c)
    return operators.RealPolynomial.from_dict(k, coeffs)


def cmd_seminorm(args):
    if args.family:
        M = np.loadtxt(args.family, dtype=complex, ndmin=2, converters=complex)
        if args.mode == "variation":
            raise ParameterError("variation acts on a single curve; use --values")
        if args.mode == "oscillation" and M.shape[1] > seminorms.EXHAUSTIVE_GRID:
            # past the exhaustive limit the sup is a sampled lower bound
            if args.seed is None:
                raise ParameterError(f"oscillation over more than {seminorms.EXHAUSTIVE_GRID} times is sampled and needs --seed")
            bound = seminorms.oscillation_seminorm(M, args.p, rng=np.random.default_rng(args.seed))
            print(f"{fmt(bound.value)} lower-bound")
            return 0
        print(fmt(seminorms.seminorm_S_p(M, args.p, args.mode)))
        return 0
    if not args.values:
        raise ParameterError("give --values or --family")
    vals = parse_list(args.values, complex)
    times = parse_list(args.times) if args.times else None
    curve = seminorms.SampledCurve(vals, times)
    if args.mode == "variation":
        print(fmt(seminorms.variation(curve, args.r)))
    elif args.mode == "jump":
        if args.lam is not None:
            print(seminorms.jump_count(curve, args.lam))
        else:
            print(fmt(seminorms.jump_functional(curve)))
    else:
        if not args.sequence:
            raise ParameterError("oscillation of a single curve needs --sequence")
        I = parse_list(args.sequence)
        print(fmt(seminorms.oscillation(curve, I, right_closed=args.right_closed)))
    return 0


def cmd_arcs(args):
    cfg = _config(args)
    gamma = cfg.gamma
    if args.action == "fractions":
        if args.level is not None:
            fr = circle.fractions_annulus(args.level, args.u or 1, gamma)
        elif args.leq is not None:
            fr = circle.fractions_leq(args.leq, gamma)
        else:
            raise ParameterError("fractions need --level or --leq")
        print(f"count {len(fr)}")
        print(f"moduli {' '.join(str(q) for q in fr.moduli)}")
        if args.list:
            for a, q in sorted(fr.keys(), key=lambda m: (m[1], m[0])):
                print(f"{','.join(str(x) for x in a)}/{q}")
        return 0
    plan = _plan(args, gamma)
    if args.action == "plan":
        for key, val in plan.to_dict().items():
            print(f"{key} {fmt(val) if isinstance(val, float) else val}")
        return 0
    if args.action == "support":
        rep = circle.support_radius_check(plan, args.level, gamma)
        for key, val in rep.to_dict().items():
            print(f"{key} {fmt(val) if isinstance(val, float) else val}")
        return 0
    xi = np.array(parse_list(args.xi or ",".join(["0"] * len(gamma))), dtype=float)
    if len(xi) != len(gamma):
        raise ParameterError(f"need {len(gamma)} frequency components")
    if args.action == "bump":
        level = "leq" if args.level is None else args.level
        print(fmt(circle.annuli_multiplier(args.j, level, plan, gamma, xi)))
        return 0
    if args.action == "multiplier":
        region = _region(args, cfg.k)
        mode = "psi" if args.theta == "psi" else "phi"
        theta = circle.ThetaCache(region, gamma, mode, _kernel(args, cfg.k) if mode == "psi" else None)
        level = args.level if args.level is not None else 1 << plan.u
        val = circle.composite_multiplier(args.variant, args.j, level, plan, cfg, theta, xi)
        print(fmt_complex(val))
        return 0
    raise ParameterError(f"unknown arcs action {args.action!r}")


def cmd_verify(args):
    name = args.experiment
    if name not in harness.EXPERIMENTS:
        raise ParameterError(f"unknown experiment {name!r}; choose from {', '.join(harness.EXPERIMENTS)}")
    kwargs = {}
    if name in harness.RANDOMIZED:
        if args.seed is None:
            raise ParameterError(f"{name} is randomized and needs --seed")
        kwargs["seed"] = args.seed
    if name == "jump_boundedness":
        kwargs["threads"] = args.threads
    for item in args.set or ():
        key, sep, val = item.partition("=")
        if not sep or key in ("seed", "threads"):
            raise ParameterError(f"--set wants key=value for an experiment parameter, got {item!r}")
        try:
            kwargs[key.replace("-", "_")] = ast.literal_eval(val)
        except (ValueError, SyntaxError):
            kwargs[key.replace("-", "_")] = val
    runner = harness.EXPERIMENTS[name][0]
    unknown = set(kwargs) - set(inspect.signature(runner).parameters)
    if unknown:
        raise ParameterError(f"{name} has no parameter(s) {', '.join(sorted(unknown))}")
    report = harness.run_experiment(name, timing=args.timing, **kwargs)
    text = report.to_json() if args.format == "json" else report.to_tsv()
    _emit(text, args.out)
    for v in report.verdicts:
        status = "PASS" if v["pass"] else "FAIL"
        print(f"{status} {v['criterion']} observed={fmt(v['observed'])} tolerance={fmt(v['tolerance'])}", file=sys.stderr)
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# parser


def _lattice_opts():
    p = _Parser(add_help=False)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--k-prime", type=int, default=None, help="integer coordinates (checked against k - k'')")
    p.add_argument("--k-double-prime", type=int, default=0, help="prime coordinates")
    p.add_argument("--gamma-degree", type=int, default=1)
    p.add_argument("--gamma-only", default=None, help="explicit multi-indices, e.g. '2', '1;2' or '0,1;1,0'")
    return p


def _region_opts():
    p = _Parser(add_help=False)
    p.add_argument("--region", choices=("ball", "cube", "ellipsoid"), default="ball")
    p.add_argument("--c-omega", type=float, default=0.5)
    p.add_argument("--axes", default=None, help="ellipsoid semi-axes, comma separated")
    return p


def _kernel_opts():
    p = _Parser(add_help=False)
    p.add_argument("--kernel-j", type=int, default=0, help="Riesz component")
    p.add_argument("--raw-kernel", action="store_true", help="drop the Riesz normalising constant")
    return p


def _plan_opts():
    p = _Parser(add_help=False)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--p0", type=float, default=None)
    p.add_argument("--tau", type=float, default=0.4)
    p.add_argument("--chi", type=float, default=0.05)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--u", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--kappa-rule", choices=("floor", "literal"), default="floor")
    return p


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", default=None, help="key=value file of defaults; flags override it")
    parser = _Parser(prog="ergodic-primes", description="Prime-weighted polynomial averages and circle-method multipliers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    lat, reg, ker, pln = _lattice_opts(), _region_opts(), _kernel_opts(), _plan_opts()
    subs = {}

    s = sub.add_parser("sieve", parents=[common], help="list primes up to a limit")
    s.add_argument("--limit", type=int, required=True)
    s.add_argument("--count", action="store_true")
    subs["sieve"] = s

    s = sub.add_parser("gauss", parents=[common, lat], help="Gaussian sums G(a/q)")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--a", default=None, help="numerators (one, or one per index); omit for the max over units")
    subs["gauss"] = s

    s = sub.add_parser("weyl", parents=[common, lat, reg], help="Weyl sums over Omega_t")
    s.add_argument("--xi", required=True, help="frequency components, floats or a/q")
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--log-weights", action="store_true")
    subs["weyl"] = s

    for name, helptext in (("average", "apply A_t"), ("cotlar", "apply H_t"), ("twisted", "apply the twisted average")):
        parents = [common, lat, reg] + ([ker] if name == "cotlar" else [])
        s = sub.add_parser(name, parents=parents, help=f"{helptext} to a signal file")
        s.add_argument("--signal", required=True)
        s.add_argument("--t", type=float, required=True)
        s.add_argument("--out", default=None)
        if name == "twisted":
            s.add_argument("--poly", required=True, help="twist polynomial 'i,j:c;...'")
        else:
            s.add_argument("--fft", action="store_true", help="use the Fourier multiplier path")
        subs[name] = s

    s = sub.add_parser("seminorm", parents=[common], help="variation, jump and oscillation seminorms")
    s.add_argument("--mode", choices=("jump", "oscillation", "variation"), default="jump")
    s.add_argument("--values", default=None, help="curve values (complex allowed, e.g. 1+2j)")
    s.add_argument("--times", default=None)
    s.add_argument("--family", default=None, help="whitespace table: one row per point, one column per time")
    s.add_argument("--p", type=float, default=2.0)
    s.add_argument("--r", type=float, default=2.0)
    s.add_argument("--lam", type=float, default=None)
    s.add_argument("--sequence", default=None)
    s.add_argument("--right-closed", action="store_true")
    s.add_argument("--seed", type=int, default=None, help="sampling seed, required for oscillation families past the exhaustive size")
    subs["seminorm"] = s

    s = sub.add_parser("arcs", parents=[common, lat, reg, ker, pln], help="fraction sets, bumps, composite multipliers")
    s.add_argument("action", choices=("fractions", "plan", "support", "bump", "multiplier"))
    s.add_argument("--level", type=int, default=None, help="annulus level s (a power of 2^u)")
    s.add_argument("--leq", type=int, default=None)
    s.add_argument("--list", action="store_true")
    s.add_argument("--xi", default=None)
    s.add_argument("--j", type=int, default=1)
    s.add_argument("--variant", choices=("v", "Lambda", "w", "Pi", "omega", "Delta"), default="v")
    s.add_argument("--theta", choices=("phi", "psi"), default="phi")
    subs["arcs"] = s

    s = sub.add_parser("verify", parents=[common], help="run a harness experiment")
    s.add_argument("experiment")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--format", choices=("json", "tsv"), default="json")
    s.add_argument("--out", default=None)
    s.add_argument("--timing", action="store_true", help="record wall-clock time (breaks byte-identity)")
    s.add_argument("--set", action="append", metavar="KEY=VALUE", help="override an experiment parameter, e.g. --set curves=50")
    subs["verify"] = s
    return parser, subs


def read_config(path):
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key=value")
            key, val = (x.strip() for x in line.split("=", 1))
            out[key.lstrip("-").replace("-", "_")] = val
    return out


def _apply_config(sub, path, argv, parser):
    values = read_config(path)
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, val in values.items():
        action = known.get(key)
        if action is None or key in ("help", "config"):
            raise ParameterError(f"config key {key!r} is not an option of this subcommand")
        if action.nargs == 0:
            defaults[key] = val.lower() in ("1", "true", "yes", "on")
        else:
            conv = action.type or str
            if action.choices is not None and val not in action.choices:
                raise ParameterError(f"config value {val!r} not allowed for {key}")
            defaults[key] = conv(val)
        action.required = False
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


HANDLERS = {
    "sieve": cmd_sieve,
    "gauss": cmd_gauss,
    "weyl": cmd_weyl,
    "average": cmd_operator,
    "cotlar": cmd_operator,
    "twisted": cmd_operator,
    "seminorm": cmd_seminorm,
    "arcs": cmd_arcs,
    "verify": cmd_verify,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser, subs = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except UsageError:
            # a config file may supply required options; retry with its defaults
            if "--config" not in argv:
                raise
            pos = argv.index("--config")
            cmd = argv[0] if argv and argv[0] in subs else None
            if cmd is None or pos + 1 >= len(argv):
                raise
            args = _apply_config(subs[cmd], argv[pos + 1], argv, parser)
        else:
            if args.config:
                args = _apply_config(subs[args.command], args.config, argv, parser)
        return HANDLERS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(str(exc))
        return 1
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 2
    except (ErgodicPrimesError, ValueError, TypeError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
