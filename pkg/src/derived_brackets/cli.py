"""Command line interface.

Exit codes: 0 when every identity holds, 1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Sequence

from .core.linear import Vector
from .core.series import FormalSeries
from .gauge import build_M, build_U, integrate_flow, transport_mc
from .instances import (Instance, InstanceError, dump_instance, fixture, fixture_names,
                        load_instance, random_incidence, random_poisson)
from .linfty import derived_brackets, words_for
from .pipelines import all_ok, bracket_reports, flow_reports, validate_instance

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _word_name(inst: Instance, w: tuple) -> str:
    return ", ".join(inst.V.name(x) for x in w)


def _order_split(v: Vector, order: int) -> list[tuple[int, Vector]]:
    if not any(isinstance(c, FormalSeries) for _, c in v.items()):
        return [(0, v)] if v else []
    return [(k, v.t_coefficient(k)) for k in range(order + 1) if v.t_coefficient(k)]


def _table(out, inst: Instance, title: str, family, words, order: int | None = None):
    out.write(f"{title}\n")
    for w in words:
        v = family.raw(w)
        parts = _order_split(v, order) if order is not None else ([(None, v)] if v else [])
        for k, coeff in parts:
            tag = f" [t^{k}]" if k is not None else ""
            out.write(f"  {family.label}^{len(w)}({_word_name(inst, w)}){tag} = "
                      f"{inst.V.gla.format(coeff)}\n")


def _reports(out, reports) -> bool:
    for r in reports:
        out.write(r.render() + "\n")
    return all_ok(reports)


def run_validate(inst: Instance, out) -> bool:
    out.write(f"== validate {inst.name}\n")
    return _reports(out, validate_instance(inst))


def run_brackets(inst: Instance, nmax: int, out, tables: bool = True) -> bool:
    out.write(f"== brackets {inst.name} (nmax={nmax})\n")
    if tables:
        _table(out, inst, "derived brackets", derived_brackets(inst.V, inst.E),
               words_for(inst.V, nmax))
    return _reports(out, bracket_reports(inst, nmax))


def run_flow(inst: Instance, nmax: int, order: int, out, tables: bool = True) -> bool:
    out.write(f"== flow {inst.name} (N={order}, nmax={nmax})\n")
    if tables:
        V = inst.V
        m = inst.time_derivation(order)
        flow = integrate_flow(m, V)
        E_t = transport_mc(inst.E, flow)
        words = words_for(V, nmax)
        _table(out, inst, "transported brackets D(E_t)", derived_brackets(V, E_t), words, order)
        _table(out, inst, "M(t)", build_M(V, m), words, order)
        _table(out, inst, "U(t)", build_U(V, flow), words_for(V, nmax, 1), order)
    return _reports(out, flow_reports(inst, nmax, order))


def run_poisson(inst: Instance, nmax: int, order: int, out, tables: bool = True) -> bool:
    if not inst.is_poisson:
        raise InstanceError("the poisson command needs an instance with a 'poisson' section")
    ok = run_validate(inst, out)
    ok = run_brackets(inst, nmax, out, tables) and ok
    return run_flow(inst, nmax, order, out, tables) and ok


def run_random(seed: int, count: int, nmax: int, order: int, out) -> bool:
    rng = random.Random(seed)
    ok = True
    for i in range(count):
        kind = i % 4
        if kind == 0:
            inst = random_incidence(rng, mc=True, name=f"random-incidence-mc-{i}")
        elif kind == 1:
            inst = random_incidence(rng, mc=False, name=f"random-incidence-{i}")
        else:
            inst = random_poisson(rng, codim=i % 3, name=f"random-poisson-{i}")
        mc = inst.is_poisson or kind == 0
        out.write(f"== random {inst.name}\n")
        reports = bracket_reports(inst, nmax)
        if not mc:
            reports = [r for r in reports if r.name in ("JD", "JD2", "pr Q^2 = J", "D symmetry")]
        elif inst.flow:
            reports += flow_reports(inst, nmax, order)
        ok = _reports(out, reports) and ok
    return ok


def _instances(args) -> list[Instance]:
    if args.fixtures:
        return [fixture(n) for n in fixture_names()]
    if args.fixture:
        return [fixture(args.fixture)]
    if not args.file:
        raise InstanceError("give an instance file, --fixture NAME or --fixtures")
    return [load_instance(args.file)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="derived-brackets",
                                     description="Higher derived brackets and their gauge invariance, "
                                                 "checked in exact arithmetic.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, nmax=True, tmax=False):
        p.add_argument("file", nargs="?", help="instance file (JSON)")
        p.add_argument("--fixture", choices=fixture_names(), help="use a shipped fixture")
        p.add_argument("--fixtures", action="store_true", help="run every shipped fixture")
        if nmax:
            p.add_argument("--nmax", type=int, default=3, help="largest word length checked")
        if tmax:
            p.add_argument("--tmax", type=int, default=3, help="truncation order N in t")
        p.add_argument("--no-tables", action="store_true", help="print check lines only")

    common(sub.add_parser("validate", help="check the algebra, the splitting and E"), nmax=False)
    common(sub.add_parser("brackets", help="derived brackets and their Jacobiators"))
    common(sub.add_parser("flow", help="gauge flow, U(t) and the identities it satisfies"), tmax=True)
    common(sub.add_parser("poisson", help="full pipeline on a Poisson instance"), tmax=True)
    p = sub.add_parser("random", help="randomized batch of generated instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--tmax", type=int, default=2)
    p = sub.add_parser("emit", help="print a fixture as an instance file")
    p.add_argument("fixture", choices=fixture_names())
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        for name in ("nmax", "tmax", "count"):
            if getattr(args, name, 0) < 0:
                raise InstanceError(f"--{name} must be non-negative")
        if args.command == "emit":
            out.write(dump_instance(fixture(args.fixture)))
            return EXIT_OK
        if args.command == "random":
            ok = run_random(args.seed, args.count, args.nmax, args.tmax, out)
            return EXIT_OK if ok else EXIT_FAIL
        ok = True
        tables = not args.no_tables
        for inst in _instances(args):
            if args.command == "validate":
                ok = run_validate(inst, out) and ok
            elif args.command == "brackets":
                ok = run_brackets(inst, args.nmax, out, tables) and ok
            elif args.command == "flow":
                ok = run_flow(inst, args.nmax, args.tmax, out, tables) and ok
            else:
                ok = run_poisson(inst, args.nmax, args.tmax, out, tables) and ok
    except InstanceError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except ValueError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
