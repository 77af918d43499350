"""Command-line front end.

Exit codes: 0 ok, 2 parse or config error, 3 unsupported combination,
4 enumeration or dimension budget exceeded.  All numbers are printed as exact
rationals; an enclosure is printed as "lo hi".
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .axioms import check, enumerate_discrete, enumerate_l1
from .cantor import (Bernoulli, BudgetExceeded, XorAction, image_measure, image_union, lower_image,
                     measure, parse_union, serialize_union)
from .crossed import CrossedProduct, LInfinityBase
from .findim import DimensionBudget, takesaki_check
from .groups import GroupError, UnsupportedGroup, cyclic
from .l1group import L1DiscretePresentation, L1RealPresentation, convolve, l1_norm
from .parsing import (ConfigError, ParseError, WorkbenchConfig, load_config, parse_crossed,
                      parse_discrete, parse_piecewise)

EXIT_OK, EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_BUDGET = 0, 2, 3, 4


def default_config() -> WorkbenchConfig:
    """Z/2 flipping the first coordinate of Cantor space with Bernoulli(1/2)."""
    z2 = cyclic(2)
    m = Bernoulli(Fraction(1, 2))
    return WorkbenchConfig(z2, "measure", measure=m, action=XorAction(z2, {"s": "1"}, m))


def interval_text(iv) -> str:
    return f"{iv.lo} {iv.hi}"


def _crossed_product(cfg: WorkbenchConfig) -> CrossedProduct:
    if cfg.base_kind == "measure":
        return CrossedProduct(LInfinityBase(cfg.measure, cfg.action, budget=cfg.budget))
    if cfg.base_kind == "findim":
        return CrossedProduct(cfg.findim)
    raise UnsupportedGroup("crossed products need a measure or findim base")


def cmd_normalize(cfg, args, out):
    cp = _crossed_product(cfg)
    nf = cp.normalize(parse_crossed(args.expr, cfg.group), method=args.method,
                      strategy=args.strategy, seed=args.seed)
    print(cp.format(nf), file=out)


def cmd_norm(cfg, args, out):
    cp = _crossed_product(cfg)
    nf = cp.normalize(parse_crossed(args.expr, cfg.group))
    k = cfg.precision if args.precision is None else args.precision
    iv = cp.sharp_norm(nf, k) if args.sharp else cp.norm2(nf, k)
    print(interval_text(iv), file=out)


def _measure_of(cfg):
    if cfg.base_kind != "measure":
        raise UnsupportedGroup("measure queries need a measure base")
    return cfg.measure


def cmd_measure(cfg, args, out):
    m = _measure_of(cfg)
    k = cfg.precision if args.precision is None else args.precision
    print(interval_text(measure(m, parse_union(args.union), k)), file=out)


def cmd_act(cfg, args, out):
    m = _measure_of(cfg)
    k = cfg.precision if args.precision is None else args.precision
    try:
        g = cfg.group.parse(args.element)
    except GroupError as exc:
        raise ParseError(str(exc)) from None
    U = parse_union(args.union)
    exact = image_union(cfg.action, g, U)
    if exact is not None:
        print(f"image {serialize_union(exact)}", file=out)
    else:
        low, gap = lower_image(cfg.action, m, g, U, k, cfg.budget)
        print(f"image-lower {serialize_union(low)} gap {gap}", file=out)
    print(interval_text(image_measure(cfg.action, m, g, U, k, cfg.budget)), file=out)


def cmd_duality(cfg, args, out):
    if cfg.base_kind != "findim":
        raise UnsupportedGroup("duality checks need a findim base")
    report = takesaki_check(cfg.findim)
    print(str(report), file=out)
    return EXIT_OK if report.passed else 1


def cmd_axioms(cfg, args, out):
    budget = args.budget if args.budget is not None else 10
    if cfg.base_kind == "l1":
        pres = L1DiscretePresentation(cfg.group) if cfg.l1 == "discrete" else L1RealPresentation()
        sentences = enumerate_l1(pres, budget)
    else:
        sentences = enumerate_discrete(cfg.group, budget)
    for s in sentences:
        if args.check:
            if cfg.base_kind != "findim":
                raise UnsupportedGroup("--check needs a findim base")
            print(f"{check(s, cfg.findim, args.samples, args.seed or 0)} {s.to_text()}", file=out)
        else:
            print(s.to_text(), file=out)


def _l1_parse(cfg, text):
    if cfg is not None and cfg.base_kind == "l1" and cfg.l1 == "discrete":
        return parse_discrete(text, cfg.group)
    return parse_piecewise(text)


def cmd_l1(cfg, args, out):
    l1cfg = cfg if cfg.base_kind == "l1" else None
    if args.l1cmd == "conv":
        print(convolve(_l1_parse(l1cfg, args.f), _l1_parse(l1cfg, args.g)).to_text(), file=out)
    else:
        k = cfg.precision if args.precision is None else args.precision
        print(interval_text(l1_norm(_l1_parse(l1cfg, args.f), k)), file=out)


def _common_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global flags with suppressed defaults, so a flag
    # given before the subcommand is not reset by the subparser
    kw = {"default": argparse.SUPPRESS} if suppress else {"default": None}
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML workbench configuration", **kw)
    common.add_argument("--precision", type=int, help="output width < 2^-K", **kw)
    common.add_argument("--budget", type=int, help="enumeration budget / number of sentences", **kw)
    common.add_argument("--seed", type=int, **kw)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags(suppress=True)
    p = argparse.ArgumentParser(prog="crossprod", parents=[_common_flags(suppress=False)],
                                description="Exact computations in crossed products and group actions.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("normalize", parents=[common], help="normal form sum pi(a_g) u[g]")
    s.add_argument("expr")
    s.add_argument("--method", choices=["bottom_up", "expand"], default="bottom_up")
    s.add_argument("--strategy", choices=["leftmost", "random"], default="leftmost")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("norm", parents=[common], help="enclosure of the trace 2-norm")
    s.add_argument("expr")
    s.add_argument("--sharp", action="store_true", help="use the symmetrized sharp norm")
    s.set_defaults(func=cmd_norm)

    s = sub.add_parser("measure", parents=[common], help="measure of a cylinder union")
    s.add_argument("union", help='comma-separated words, e.g. "01,001"')
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("act", parents=[common], help="image of a cylinder union under g")
    s.add_argument("element")
    s.add_argument("union")
    s.set_defaults(func=cmd_act)

    s = sub.add_parser("duality", parents=[common], help="Takesaki duality check on a findim model")
    s.set_defaults(func=cmd_duality)

    s = sub.add_parser("axioms", parents=[common], help="enumerate axiom sentences")
    s.add_argument("--check", action="store_true", help="prefix each sentence with its defect")
    s.add_argument("--samples", type=int, default=8)
    s.set_defaults(func=cmd_axioms)

    s = sub.add_parser("l1", parents=[common], help="L^1 convolution and norms")
    l1 = s.add_subparsers(dest="l1cmd", required=True)
    c = l1.add_parser("conv", parents=[common])
    c.add_argument("f")
    c.add_argument("g")
    c.set_defaults(func=cmd_l1)
    n = l1.add_parser("norm", parents=[common])
    n.add_argument("f")
    n.set_defaults(func=cmd_l1)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config) if args.config else default_config()
        if args.budget is not None and args.command != "axioms":
            cfg.budget = args.budget
        code = args.func(cfg, args, out)
        return EXIT_OK if code is None else code
    except (ConfigError, ParseError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    except UnsupportedGroup as exc:
        print(f"unsupported: {exc}", file=err)
        return EXIT_UNSUPPORTED
    except (BudgetExceeded, DimensionBudget) as exc:
        print(f"budget exceeded: {exc}", file=err)
        return EXIT_BUDGET
    except (GroupError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
