"""Command-line interface.

Subcommands: dims, nf, closure, decorated-nf, lk, order2, shuffle-test,
stokes-test, cache.  Numeric results are emitted as JSON records that
echo the full quadrature configuration; without the config echo a
result is not reproducible and is considered invalid.

Exit codes: 0 success, 2 validation or parse error, 3 singularity
(clearance violation), 4 capacity limit.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .algebra import build_relation_basis, dim_quotient, format_element, normal_form
from .basis_cache import clear_cache, list_cache, resolve_cache_dir
from .chen import (
    CycleSpec,
    linking_number,
    order2_invariant,
    shuffle_defect,
    stokes_defect,
    stokes_test_cells,
)
from .circles import closure, format_diagram, push_forward
from .curves import LinkEmbedding
from .decorated import decorated_normal_form, format_decorated
from .errors import CapacityError, SingularityError
from .expressions import GRAMMAR_HELP, parse_decorated_element, parse_element
from .quadrature import QuadratureConfig

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SINGULARITY = 3
EXIT_CAPACITY = 4


def _parse_perm(text, n):
    if text is None:
        return None
    parts = text.replace(",", " ").split()
    values = [int(p) for p in parts]
    if len(values) != n:
        raise ValueError(f"permutation needs {n} entries, got {len(values)}")
    return {i + 1: v for i, v in enumerate(values)}


def _quad_config(args):
    return QuadratureConfig(
        gl_nodes=args.nodes, mc_samples=args.mc_samples,
        rng_seed=args.seed, mc_block=args.block)


def _emit(record, args):
    text = json.dumps(record, indent=1, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def validate_result(record):
    """Schema check for emitted JSON records."""
    if not isinstance(record, dict):
        raise ValueError("result must be a JSON object")
    if "command" not in record:
        raise ValueError("result must name its command")
    if record.get("command") in ("lk", "order2", "shuffle-test", "stokes-test"):
        config = record.get("config")
        if not isinstance(config, dict):
            raise ValueError("numeric results must echo their configuration")
        for key in ("gl_nodes", "mc_samples", "rng_seed", "mc_block"):
            if key not in config:
                raise ValueError(f"config echo is missing {key}")
    return True


# ----------------------------------------------------------------------
# handlers
# ----------------------------------------------------------------------

def run_dims(args):
    cache_dir = resolve_cache_dir(args.cache_dir)
    from .basis_cache import cache_path
    import os

    dims = []
    cache_notes = []
    for k in range(args.kmax + 1):
        hit = os.path.exists(cache_path(cache_dir, args.n, args.parity, k))
        dims.append(dim_quotient(args.n, args.parity, k, cache_dir=cache_dir))
        cache_notes.append("hit" if hit else "miss")
    print(f"dim A_{args.n}^k ({args.parity} parity), k = 0..{args.kmax}:")
    for k, (d, note) in enumerate(zip(dims, cache_notes)):
        print(f"  k={k}: {d}  [cache {note}]")
    print(" ".join(str(d) for d in dims))
    record = {"command": "dims", "n": args.n, "parity": args.parity,
              "kmax": args.kmax, "dims": dims, "cache": cache_notes,
              "cache_dir": cache_dir}
    if args.out:
        _emit(record, args)
    return EXIT_OK


def run_nf(args):
    cache_dir = resolve_cache_dir(args.cache_dir)
    element = parse_element(args.expression, args.n, args.parity)
    reduced = normal_form(element, cache_dir=cache_dir)
    print(format_element(reduced))
    if args.out:
        _emit({"command": "nf", "n": args.n, "parity": args.parity,
               "input": args.expression, "normal_form": format_element(reduced)},
              args)
    return EXIT_OK


def run_closure(args):
    element = parse_element(args.expression, args.n, "even")
    perm = _parse_perm(args.perm, args.n)
    pushed = push_forward(element, perm)
    blocks = []
    for diagram, coeff in sorted(pushed.items(), key=lambda kv: kv[0].circles):
        blocks.append(f"# coefficient {coeff}")
        blocks.append(format_diagram(diagram))
    text = "\n".join(blocks) if blocks else "0"
    print(text)
    if args.out:
        _emit({"command": "closure", "n": args.n, "perm": args.perm,
               "input": args.expression, "diagrams": text}, args)
    return EXIT_OK


def run_decorated_nf(args):
    element = parse_decorated_element(args.expression, args.n, args.rank)
    reduced = decorated_normal_form(element, L=args.bound)
    print(format_decorated(reduced))
    if args.out:
        _emit({"command": "decorated-nf", "n": args.n, "rank": args.rank,
               "bound": args.bound, "input": args.expression,
               "normal_form": format_decorated(reduced)}, args)
    return EXIT_OK


def _load_link(path, expect=None):
    link = LinkEmbedding.load(path)
    if expect is not None and len(link) != expect:
        raise ValueError(
            f"this command needs a {expect}-component link, "
            f"file has {len(link)}")
    return link


def run_lk(args):
    link = _load_link(args.link, expect=2)
    config = _quad_config(args)
    value = linking_number(link.components[0], link.components[1], config)
    refined = linking_number(link.components[0], link.components[1],
                             config.with_nodes(max(config.gl_nodes // 2, 8)))
    record = {"command": "lk", "link_file": args.link, "value": value,
              "nearest_integer": round(value),
              "quadrature_estimate": abs(value - refined),
              "config": config.as_dict()}
    _emit(record, args)
    return EXIT_OK


def run_order2(args):
    link = _load_link(args.link, expect=3)
    config = _quad_config(args)
    res = order2_invariant(link, config)
    record = {"command": "order2", "link_file": args.link,
              "total": res.value, "i1": res.i1, "i2": res.i2,
              "i1_error": res.i1_error, "i2_stderr": res.i2_stderr,
              "error_budget": res.error_budget, "label": res.label,
              "config": config.as_dict()}
    _emit(record, args)
    return EXIT_OK


def run_shuffle_test(args):
    link = _load_link(args.link, expect=2)
    config = _quad_config(args)
    result = shuffle_defect(link.components[0], link.components[1], config)
    record = {"command": "shuffle-test", "link_file": args.link,
              "config": config.as_dict()}
    record.update(result)
    _emit(record, args)
    return EXIT_OK


def run_stokes_test(args):
    config = _quad_config(args)
    rng = np.random.default_rng(config.rng_seed)
    cells = stokes_test_cells(rng, args.cells, config)
    results = [stokes_defect(cell, config) for cell in cells]
    record = {"command": "stokes-test", "cells": len(cells),
              "results": results,
              "worst_relative_defect": max(r["relative_defect"] for r in results),
              "config": config.as_dict()}
    _emit(record, args)
    return EXIT_OK


def run_cache(args):
    cache_dir = resolve_cache_dir(args.cache_dir)
    if args.action == "list":
        for name in list_cache(cache_dir):
            print(name)
    else:
        removed = clear_cache(cache_dir)
        print(f"removed {removed} cache file(s) from {cache_dir}")
    return EXIT_OK


# ----------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="braidweight",
        description="Horizontal chord-diagram algebras modulo 4T relations "
                    "and numerical Chen-integral link invariants.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_quadrature(p):
        p.add_argument("--nodes", type=int, default=64,
                       help="Gauss-Legendre nodes per dimension")
        p.add_argument("--mc-samples", type=int, default=200_000,
                       help="Monte Carlo samples for fiber integrals")
        p.add_argument("--seed", type=int, default=20_260_809,
                       help="random seed (results are deterministic given it)")
        p.add_argument("--block", type=int, default=65_536,
                       help="Monte Carlo block size (fixed reduction order)")
        p.add_argument("--out", help="write the JSON record here instead of stdout")

    p = sub.add_parser("dims", help="quotient dimension table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--parity", choices=("even", "odd"), default="even")
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--cache-dir", help="relation-basis cache directory "
                   "(default $BRAIDWEIGHT_CACHE or ./cache)")
    p.add_argument("--out")
    p.set_defaults(func=run_dims)

    p = sub.add_parser(
        "nf", help="normal form of an expression",
        epilog=GRAMMAR_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("expression")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--parity", choices=("even", "odd"), default="even")
    p.add_argument("--cache-dir")
    p.add_argument("--out")
    p.set_defaults(func=run_nf)

    p = sub.add_parser("closure", help="close a horizontal element to "
                       "circle diagrams (even parity)")
    p.add_argument("expression")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perm", help="images of 1..n, e.g. '2 3 1'; "
                   "default is the full cycle")
    p.add_argument("--out")
    p.set_defaults(func=run_closure)

    p = sub.add_parser(
        "decorated-nf", help="normal form in the decorated algebra",
        epilog=GRAMMAR_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("expression")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rank", type=int, required=True,
                   help="free-group rank of the decorations")
    p.add_argument("--bound", type=int, default=None,
                   help="decoration-length bound L (default: the input's)")
    p.add_argument("--out")
    p.set_defaults(func=run_decorated_nf)

    p = sub.add_parser("lk", help="Gauss linking number of a 2-component link")
    p.add_argument("link", help="link JSON file")
    add_quadrature(p)
    p.set_defaults(func=run_lk)

    p = sub.add_parser("order2", help="order-2 invariant of a 3-component link")
    p.add_argument("link")
    add_quadrature(p)
    p.set_defaults(func=run_order2)

    p = sub.add_parser("shuffle-test", help="Chen shuffle identity check")
    p.add_argument("link")
    add_quadrature(p)
    p.set_defaults(func=run_shuffle_test)

    p = sub.add_parser("stokes-test", help="phi Stokes calibration check")
    p.add_argument("--cells", type=int, default=5)
    add_quadrature(p)
    p.set_defaults(func=run_stokes_test)

    p = sub.add_parser("cache", help="manage the relation-basis cache")
    p.add_argument("action", choices=("list", "clear"))
    p.add_argument("--cache-dir")
    p.set_defaults(func=run_cache)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SingularityError as exc:
        print(f"singularity error: {exc}", file=sys.stderr)
        return EXIT_SINGULARITY
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
