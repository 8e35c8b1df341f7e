"""Command-line front end.

Commands: gen (emit an inequality system), vertices (emit a point set),
verify (completeness report, exit 0 iff complete), lift (section
enforcement report, exit 0 iff no counterexample), separate (block
inequality for a point, exit 1 when one is violated), hoffman
(circulation feasibility, exit 0 iff feasible).

All numeric output is rendered as exact "num/den" strings and JSON keys
are sorted, so identical configurations produce byte-identical output.
Exit codes: 0 success, 1 verification failure, 2 usage/parse error,
3 internal invariant breach. POLYLIFT_SEED overrides the configured
seed when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .circulation import CapacityBounds, find_circulation, hoffman_feasible_flow, hoffman_feasible_subsets
from .descriptions import (
    blossom_system,
    edge_polytope_system,
    small_clique_system,
    vande_vate_system,
    qxy_system,
    qxyz_system,
)
from .errors import InternalInvariantError, PolyliftError
from .exactnum import ExtendedRational, format_rat
from .families import (
    VRep,
    enum_edge_vertices,
    enum_matchings,
    enum_path_sets,
    enum_small_cliques,
)
from .graphcore import Digraph, Graph, parse_instance
from .lifting import (
    check_section_enforcing,
    matching_family,
    orbisack_family,
    pathset_family,
    qxy_family,
    smallclique_family,
)
from .orbisack import (
    enum_orbisack_vertices,
    flat_from_matrix,
    lift_xy,
    lift_xyz,
    matrix_from_flat,
    orbisack_system,
    separate_block,
)
from .verify import check_completeness

GRAPH_FAMILIES = ("matching", "smallclique", "edgepoly")
P_FAMILIES = ("orbisack", "qxy", "qxyz")
FAMILIES = GRAPH_FAMILIES + ("pathset",) + P_FAMILIES

CLI_AMBIENT_CAP = 24


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    instance: str | None = None
    p: int | None = None
    irredundant: bool = False
    drop_redundant: bool = False
    samples: int = 25
    seed: int = 0
    point: str | None = None
    capacities: str | None = None
    method: str = "flow"
    output: str | None = None


class UsageError(Exception):
    pass


def _load_graph(cfg: RunConfig) -> Graph:
    if not cfg.instance:
        raise UsageError("this family needs --instance FILE")
    with open(cfg.instance, "r", encoding="utf-8") as fh:
        inst = parse_instance(fh.read())
    if inst.directed:
        raise UsageError("expected an undirected graph instance")
    return inst.graph


def _load_pathset(cfg: RunConfig):
    if not cfg.instance:
        raise UsageError("the pathset family needs --instance FILE")
    with open(cfg.instance, "r", encoding="utf-8") as fh:
        inst = parse_instance(fh.read())
    if not inst.directed:
        raise UsageError("expected a directed instance")
    if inst.st is None:
        raise UsageError("pathset instances need an 'st s t' line")
    return inst.digraph, inst.st[0], inst.st[1]


def _load_digraph(cfg: RunConfig) -> Digraph:
    if not cfg.instance:
        raise UsageError("this command needs --instance FILE")
    with open(cfg.instance, "r", encoding="utf-8") as fh:
        inst = parse_instance(fh.read())
    if not inst.directed:
        raise UsageError("expected a directed instance")
    return inst.digraph


def _need_p(cfg: RunConfig) -> int:
    if cfg.p is None or cfg.p < 1:
        raise UsageError("this family needs --p P with P >= 1")
    return cfg.p


def _system_for(cfg: RunConfig):
    family = cfg.family
    if family == "matching":
        return blossom_system(_load_graph(cfg))
    if family == "pathset":
        return vande_vate_system(*_load_pathset(cfg))
    if family == "smallclique":
        return small_clique_system(_load_graph(cfg), irredundant=cfg.irredundant)
    if family == "edgepoly":
        return edge_polytope_system(_load_graph(cfg))
    if family == "orbisack":
        return orbisack_system(_need_p(cfg), drop_redundant=cfg.drop_redundant)
    if family == "qxy":
        return qxy_system(_need_p(cfg))
    if family == "qxyz":
        return qxyz_system(_need_p(cfg))
    raise UsageError(f"unknown family {family!r}")


def _lifted_vrep(p: int, which: str) -> VRep:
    from .descriptions import qxy_vars, qxyz_vars

    base = enum_orbisack_vertices(p)
    points = []
    for point in base.sorted_points:
        x = matrix_from_flat(point, p)
        if which == "qxy":
            mat, y = lift_xy(x)
            points.append(flat_from_matrix(mat) + y)
        else:
            xt, y, z = lift_xyz(x)
            points.append(flat_from_matrix(xt) + y + z)
    vars_ = qxy_vars(p) if which == "qxy" else qxyz_vars(p)
    return VRep.build(vars_, points)


def _vrep_for(cfg: RunConfig) -> VRep:
    family = cfg.family
    if family == "matching":
        return enum_matchings(_load_graph(cfg))
    if family == "pathset":
        return enum_path_sets(*_load_pathset(cfg))
    if family == "smallclique":
        return enum_small_cliques(_load_graph(cfg))
    if family == "edgepoly":
        return enum_edge_vertices(_load_graph(cfg))
    if family == "orbisack":
        return enum_orbisack_vertices(_need_p(cfg))
    if family in ("qxy", "qxyz"):
        return _lifted_vrep(_need_p(cfg), family)
    raise UsageError(f"unknown family {family!r}")


def _family_for_lift(cfg: RunConfig):
    family = cfg.family
    if family == "matching":
        return matching_family(_load_graph(cfg))
    if family == "pathset":
        return pathset_family(*_load_pathset(cfg))
    if family == "smallclique":
        return smallclique_family(_load_graph(cfg))
    if family == "orbisack":
        return orbisack_family(_need_p(cfg))
    if family == "qxy":
        return qxy_family(_need_p(cfg))
    raise UsageError(f"family {family!r} has no lifting command")


def _parse_point(text: str) -> list:
    try:
        return [Fraction(tok.strip()) for tok in text.split(",") if tok.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad point string: {exc}") from exc


def _parse_capacities(d: Digraph, path: str) -> CapacityBounds:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    lower = {}
    upper = {}
    for kind, target in (("lower", lower), ("upper", upper)):
        for key, value in data[kind].items():
            u_s, v_s = key.split("->")
            arc = (int(u_s), int(v_s))
            target[arc] = ExtendedRational.parse(value)
    return CapacityBounds.build(d, lower, upper)


def _dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def run(cfg: RunConfig) -> tuple:
    """Execute one command; returns (exit code, output text)."""
    if cfg.command == "gen":
        return 0, _dumps(_system_for(cfg).to_json_dict())
    if cfg.command == "vertices":
        return 0, _dumps(_vrep_for(cfg).to_json_dict())
    if cfg.command == "verify":
        system = _system_for(cfg)
        vrep = _vrep_for(cfg)
        report = check_completeness(system, vrep, ambient_cap=CLI_AMBIENT_CAP)
        return (0 if report.complete else 1), _dumps(report.to_json_dict())
    if cfg.command == "lift":
        family = _family_for_lift(cfg)
        candidate = _system_for(cfg)
        report = check_section_enforcing(
            family,
            candidate,
            samples=cfg.samples,
            seed=cfg.seed,
            ambient_cap=CLI_AMBIENT_CAP,
        )
        return (0 if report.passed else 1), _dumps(report.to_json_dict())
    if cfg.command == "separate":
        if cfg.family != "orbisack":
            raise UsageError("separation is available for the orbisack family only")
        if not cfg.point:
            raise UsageError("separate needs --point \"a/b,c/d,...\"")
        values = _parse_point(cfg.point)
        p = cfg.p if cfg.p is not None else len(values) // 2
        x = matrix_from_flat(values, p)
        block = separate_block(x)
        if block is None:
            return 0, _dumps({"violated": False, "block": None})
        return 1, _dumps({"violated": True, "block": block.to_json_dict()})
    if cfg.command == "hoffman":
        d = _load_digraph(cfg)
        if not cfg.capacities:
            raise UsageError("hoffman needs --capacities FILE")
        cb = _parse_capacities(d, cfg.capacities)
        if cfg.method == "subsets":
            verdict = hoffman_feasible_subsets(d, cb)
        else:
            verdict = hoffman_feasible_flow(d, cb)
        payload = {
            "feasible": verdict.feasible,
            "method": cfg.method,
            "witness": sorted(verdict.witness) if verdict.witness is not None else None,
            "circulation": None,
        }
        if verdict.feasible:
            circ = find_circulation(d, cb)
            payload["circulation"] = {
                f"{u}->{v}": format_rat(circ.flow[(u, v)]) for u, v in d.arc_list
            }
        return (0 if verdict.feasible else 1), _dumps(payload)
    raise UsageError(f"unknown command {cfg.command!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polylift",
        description="Exact derived descriptions, liftings and verification "
        "for matching, path-set, small-clique and lex-matrix polytopes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("gen", "vertices", "verify", "lift", "separate", "hoffman"):
        cmd = sub.add_parser(name)
        if name != "hoffman":
            cmd.add_argument("--family", required=True, choices=FAMILIES)
        cmd.add_argument("--instance", help="graph/digraph instance file")
        cmd.add_argument("--p", type=int, help="row count for lex-matrix families")
        cmd.add_argument("--seed", type=int, default=0)
        cmd.add_argument("--output", help="write output here instead of stdout")
        if name in ("gen", "verify", "lift"):
            cmd.add_argument("--irredundant", action="store_true",
                             help="filter the small-clique system to facets")
            cmd.add_argument("--drop-redundant", action="store_true",
                             help="omit the two implied lex-matrix bounds")
        if name == "lift":
            cmd.add_argument("--samples", type=int, default=25)
        if name == "separate":
            cmd.add_argument("--point", help="row-major num/den values, comma separated")
        if name == "hoffman":
            cmd.add_argument("--capacities", help="JSON file with lower/upper maps")
            cmd.add_argument("--method", choices=("flow", "subsets"), default="flow")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        family=getattr(args, "family", None),
        instance=args.instance,
        p=args.p,
        irredundant=getattr(args, "irredundant", False),
        drop_redundant=getattr(args, "drop_redundant", False),
        samples=getattr(args, "samples", 25),
        seed=args.seed,
        point=getattr(args, "point", None),
        capacities=getattr(args, "capacities", None),
        method=getattr(args, "method", "flow"),
        output=args.output,
    )
    env_seed = os.environ.get("POLYLIFT_SEED")
    if env_seed is not None:
        try:
            cfg.seed = int(env_seed)
        except ValueError:
            print(f"polylift: bad POLYLIFT_SEED {env_seed!r}", file=sys.stderr)
            return 2
    try:
        code, text = run(cfg)
    except (UsageError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"polylift: {exc}", file=sys.stderr)
        return 2
    except InternalInvariantError as exc:
        print(f"polylift: internal invariant breach: {exc}", file=sys.stderr)
        return 3
    except PolyliftError as exc:
        print(f"polylift: {exc}", file=sys.stderr)
        return 2
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
