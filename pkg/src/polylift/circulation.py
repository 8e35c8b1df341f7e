"""Capacity-bounded circulations with exact rational arithmetic.

Feasibility is decided two ways: a ground-truth oracle that checks the
cut condition l(in(W)) <= u(out(W)) on every node subset, and a
production path that reduces to max-flow with a super source/sink.
Both report a violating node set as the witness when infeasible, and
``find_circulation`` reconstructs an explicit exact circulation on the
feasible instances. Infinite capacities are handled natively; no big-M
substitutions occur anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import InternalInvariantError, SizeLimitExceeded
from .exactnum import (
    F0,
    NEG_INF,
    POS_INF,
    ExtendedRational,
    as_extended,
)
from .graphcore import Digraph

DEFAULT_SUBSET_NODE_LIMIT = 20


@dataclass(frozen=True, eq=False)
class CapacityBounds:
    """Lower and upper arc capacities; lower may be -inf, upper +inf."""

    lower: dict
    upper: dict

    @classmethod
    def build(cls, d: Digraph, lower: Mapping, upper: Mapping) -> "CapacityBounds":
        lo = {}
        up = {}
        for arc in d.arc_list:
            if arc not in lower or arc not in upper:
                raise ValueError(f"missing capacity for arc {arc!r}")
            l = as_extended(lower[arc])
            u = as_extended(upper[arc])
            if l == POS_INF:
                raise ValueError(f"lower capacity +inf on arc {arc!r}")
            if u == NEG_INF:
                raise ValueError(f"upper capacity -inf on arc {arc!r}")
            if u < l:
                raise ValueError(f"lower exceeds upper on arc {arc!r}")
            lo[arc] = l
            up[arc] = u
        if len(lower) != len(d.arc_list) or len(upper) != len(d.arc_list):
            raise ValueError("capacities given for arcs not in the digraph")
        return cls(lo, up)

    def with_pinned(self, pins: Mapping) -> "CapacityBounds":
        """Copy with l = u = value on the given arcs."""
        lo = dict(self.lower)
        up = dict(self.upper)
        for arc, value in pins.items():
            if arc not in lo:
                raise ValueError(f"cannot pin unknown arc {arc!r}")
            pinned = as_extended(value)
            lo[arc] = pinned
            up[arc] = pinned
        return CapacityBounds(lo, up)


@dataclass(frozen=True, eq=False)
class Circulation:
    """An arc flow with exact conservation at every node."""

    flow: dict

    def value(self, arc) -> Fraction:
        return self.flow[arc]

    def satisfies(self, d: Digraph, cb: CapacityBounds) -> bool:
        for v in d.nodes:
            out_sum = sum((self.flow[a] for a in d.out_arcs(v)), F0)
            in_sum = sum((self.flow[a] for a in d.in_arcs(v)), F0)
            if out_sum != in_sum:
                return False
        for arc in d.arc_list:
            y = ExtendedRational(self.flow[arc])
            if y < cb.lower[arc] or cb.upper[arc] < y:
                return False
        return True


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: frozenset | None  # node set violating the cut condition

    def __bool__(self):
        return self.feasible


def _cut_sums(d: Digraph, cb: CapacityBounds, W: frozenset):
    """(sum of lower over arcs into W, sum of upper over arcs out of W)."""
    lin = ExtendedRational(0)
    uout = ExtendedRational(0)
    for arc in d.arc_list:
        tail_in = arc[0] in W
        head_in = arc[1] in W
        if head_in and not tail_in:
            lin = lin + cb.lower[arc]
        elif tail_in and not head_in:
            uout = uout + cb.upper[arc]
    return lin, uout


def hoffman_feasible_subsets(
    d: Digraph, cb: CapacityBounds, *, node_limit: int = DEFAULT_SUBSET_NODE_LIMIT
) -> FeasibilityResult:
    """Ground-truth feasibility: check the cut condition on all 2^n subsets.

    Returns the first violating subset (in bitmask order over the node
    list) as the witness.
    """
    n = len(d.nodes)
    if n > node_limit:
        raise SizeLimitExceeded(
            f"{n} nodes exceeds the subset-enumeration cap of {node_limit}; "
            "use hoffman_feasible_flow"
        )
    arcs = []
    for arc in d.arc_list:
        lo = cb.lower[arc]
        up = cb.upper[arc]
        arcs.append(
            (
                d.index[arc[0]],
                d.index[arc[1]],
                None if not lo.is_finite else lo.finite,
                None if not up.is_finite else up.finite,
            )
        )
    for mask in range(1 << n):
        lower_in = F0
        lower_unbounded = False
        upper_out = F0
        upper_unbounded = False
        for ti, hi, lo, up in arcs:
            tail_in = (mask >> ti) & 1
            head_in = (mask >> hi) & 1
            if head_in and not tail_in:
                if lo is None:
                    lower_unbounded = True  # -inf: this cut cannot violate
                    break
                lower_in += lo
            elif tail_in and not head_in:
                if up is None:
                    upper_unbounded = True
                else:
                    upper_out += up
        if lower_unbounded or upper_unbounded:
            continue
        if lower_in > upper_out:
            witness = frozenset(
                v for i, v in enumerate(d.nodes) if (mask >> i) & 1
            )
            return FeasibilityResult(False, witness)
    return FeasibilityResult(True, None)


# ---------------------------------------------------------------------------
# Max-flow reduction. Each arc is shifted so remaining flow is nonnegative:
#   l finite:            f = y - l   on (u, v), capacity u_cap - l
#   l = -inf, u finite:  f = u_cap - y reversed onto (v, u), capacity +inf
#   l = -inf, u = +inf:  free pair (u, v) and (v, u), both capacity +inf
# Fixed parts create node imbalances served by a super source/sink.


class _MaxFlow:
    def __init__(self, num_nodes: int):
        self.head = []
        self.cap = []
        self.flow = []
        self.adj = [[] for _ in range(num_nodes)]

    def add_arc(self, u: int, v: int, cap: ExtendedRational) -> int:
        idx = len(self.head)
        self.head.append(v)
        self.cap.append(cap)
        self.flow.append(F0)
        self.adj[u].append(idx)
        self.head.append(u)
        self.cap.append(ExtendedRational(0))
        self.flow.append(F0)
        self.adj[v].append(idx + 1)
        return idx

    def residual(self, idx: int) -> ExtendedRational:
        return self.cap[idx] - self.flow[idx]

    def max_flow(self, s: int, t: int) -> Fraction:
        total = F0
        while True:
            parent_arc = [-1] * len(self.adj)
            parent_arc[s] = -2
            queue = [s]
            qi = 0
            while qi < len(queue) and parent_arc[t] == -1:
                v = queue[qi]
                qi += 1
                for idx in self.adj[v]:
                    w = self.head[idx]
                    if parent_arc[w] == -1 and F0 < self.residual(idx):
                        parent_arc[w] = idx
                        queue.append(w)
            if parent_arc[t] == -1:
                return total
            bottleneck = POS_INF
            v = t
            while v != s:
                idx = parent_arc[v]
                r = self.residual(idx)
                if r < bottleneck:
                    bottleneck = r
                v = self.head[idx ^ 1]
            if not bottleneck.is_finite:
                raise InternalInvariantError("unbounded augmenting path")
            delta = bottleneck.finite
            v = t
            while v != s:
                idx = parent_arc[v]
                self.flow[idx] += delta
                self.flow[idx ^ 1] -= delta
                v = self.head[idx ^ 1]
            total += delta

    def reachable(self, s: int) -> set:
        seen = {s}
        queue = [s]
        while queue:
            v = queue.pop()
            for idx in self.adj[v]:
                w = self.head[idx]
                if w not in seen and F0 < self.residual(idx):
                    seen.add(w)
                    queue.append(w)
        return seen


def _reduce_to_flow(d: Digraph, cb: CapacityBounds):
    n = len(d.nodes)
    net = _MaxFlow(n + 2)
    source, sink = n, n + 1
    imbalance = [F0] * n  # fixed inflow minus fixed outflow per node
    recipes = {}  # arc -> (base, [(flow arc idx, sign), ...])
    for arc in d.arc_list:
        u_i = d.index[arc[0]]
        v_i = d.index[arc[1]]
        lo = cb.lower[arc]
        up = cb.upper[arc]
        if lo.is_finite:
            idx = net.add_arc(u_i, v_i, up - lo)
            base = lo.finite
            recipes[arc] = (base, [(idx, 1)])
            imbalance[v_i] += base
            imbalance[u_i] -= base
        elif up.is_finite:
            idx = net.add_arc(v_i, u_i, POS_INF)
            base = up.finite
            recipes[arc] = (base, [(idx, -1)])
            imbalance[v_i] += base
            imbalance[u_i] -= base
        else:
            fwd = net.add_arc(u_i, v_i, POS_INF)
            bwd = net.add_arc(v_i, u_i, POS_INF)
            recipes[arc] = (F0, [(fwd, 1), (bwd, -1)])
    supply = F0
    for i in range(n):
        if imbalance[i] > 0:
            net.add_arc(source, i, ExtendedRational(imbalance[i]))
            supply += imbalance[i]
        elif imbalance[i] < 0:
            net.add_arc(i, sink, ExtendedRational(-imbalance[i]))
    return net, source, sink, supply, recipes


def _solve_flow(d: Digraph, cb: CapacityBounds):
    net, source, sink, supply, recipes = _reduce_to_flow(d, cb)
    value = net.max_flow(source, sink)
    if value == supply:
        return True, net, recipes, None
    reach = net.reachable(source)
    witness = frozenset(v for v in d.nodes if d.index[v] in reach)
    lin, uout = _cut_sums(d, cb, witness)
    if not (uout < lin):
        raise InternalInvariantError("extracted cut does not violate the condition")
    return False, net, recipes, witness


def hoffman_feasible_flow(d: Digraph, cb: CapacityBounds) -> FeasibilityResult:
    """Max-flow-based feasibility; agrees with the subset oracle.

    The witness cut is read off the residual network of a maximum flow.
    """
    feasible, _, _, witness = _solve_flow(d, cb)
    return FeasibilityResult(feasible, witness)


def find_circulation(d: Digraph, cb: CapacityBounds) -> Circulation | None:
    """An exact feasible circulation, or None precisely when infeasible."""
    feasible, net, recipes, _ = _solve_flow(d, cb)
    if not feasible:
        return None
    flow = {}
    for arc in d.arc_list:
        base, terms = recipes[arc]
        y = base
        for idx, sign in terms:
            y += sign * net.flow[idx]
        flow[arc] = y
    circ = Circulation(flow)
    if not circ.satisfies(d, cb):
        raise InternalInvariantError("reconstructed circulation violates bounds")
    return circ
