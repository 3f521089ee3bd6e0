"""Explicit-state verification of a controller tuple against all fair wardens.

Configurations are packed into Python integers.  From the least significant
end a code holds: visited bits (``n * r`` of them, only when the visited
ledger is tracked), control-state digits, room-state digits and finally the
declaring prisoner plus one (0 while undeclared).

Two exact exploration modes are offered:

``track_visited=True``
    The reachable graph carries the visited ledger.  An unsafe declaration
    is a declared node whose ledger is incomplete.

``track_visited=False``
    The ledger is projected away.  A declaration is unsafe iff some
    (prisoner, room) pair can be avoided all the way to it, so safety is
    decided by one avoiding BFS per pair.

Fair non-termination is the same question in both modes: some strongly
connected set of undeclared nodes whose internal edges use every
(prisoner, room) label.  Visited bits never clear, so every cycle keeps its
ledger constant and the two modes agree.
"""
from __future__ import annotations

import os
from array import array
from collections import deque
from dataclasses import dataclass, field
from itertools import count

from .errors import BudgetExceeded, ConfigurationError
from .semantics import (
    Configuration,
    ScheduleEvent,
    Trace,
    TraceStep,
    apply_event,
    initial_configuration,
    run_events,
)

DEFAULT_BUDGET = 10**8
BUDGET_ENV = "LIGHTSWITCH_BUDGET"


def default_budget():
    value = os.environ.get(BUDGET_ENV)
    return int(value) if value else DEFAULT_BUDGET


class Encoding:
    """Mixed-radix packing of configurations."""

    def __init__(self, n, r, q, controllers, track_visited):
        self.n, self.r, self.q = n, r, q
        self.track_visited = track_visited
        self.sizes = [c.num_states for c in controllers]
        mul = 1 << (n * r) if track_visited else 1
        self.ctrl_mul = []
        for s in self.sizes:
            self.ctrl_mul.append(mul)
            mul *= s
        self.room_mul = []
        for _ in range(r):
            self.room_mul.append(mul)
            mul *= q
        self.decl_mul = mul

    def encode(self, rooms, ctrls, visited=None, declared_by=None):
        code = 0
        if self.track_visited:
            for p, row in enumerate(visited):
                code |= row << (p * self.r)
        for p, c in enumerate(ctrls):
            code += c * self.ctrl_mul[p]
        for j, s in enumerate(rooms):
            code += s * self.room_mul[j]
        if declared_by is not None:
            code += (declared_by + 1) * self.decl_mul
        return code

    def decode(self, code):
        n, r, q = self.n, self.r, self.q
        rooms = tuple((code // m) % q for m in self.room_mul)
        ctrls = tuple((code // m) % s for m, s in zip(self.ctrl_mul, self.sizes))
        visited = None
        if self.track_visited:
            mask = (1 << r) - 1
            visited = tuple((code >> (p * r)) & mask for p in range(n))
        d = code // self.decl_mul
        return rooms, ctrls, visited, (d - 1 if d else None)

    def canonical(self, code):
        """Sort rooms by (state, visited column); returns (code, permutation).

        ``perm[i]`` is the original room placed at canonical position ``i``.
        """
        rooms, ctrls, visited, decl = self.decode(code)
        n, r = self.n, self.r
        cols = [tuple((visited[p] >> j) & 1 for p in range(n)) for j in range(r)]
        perm = sorted(range(r), key=lambda j: (rooms[j], cols[j]))
        new_rooms = tuple(rooms[j] for j in perm)
        new_visited = tuple(
            sum(((visited[p] >> perm[i]) & 1) << i for i in range(r)) for p in range(n)
        )
        return self.encode(new_rooms, ctrls, new_visited, decl), perm


@dataclass
class ReachGraph:
    """Reachable configurations with labelled, deterministic edges.

    Node ids are assigned in BFS order from ``root`` (id 0).  For node ``u``
    and label ``k = prisoner * r + room``, ``succ[u * n * r + k]`` is the
    successor id, or -1 when ``u`` is a declared (unexpanded) node.
    """

    n: int
    r: int
    q: int
    controllers: tuple
    init: tuple
    encoding: Encoding
    track_visited: bool
    symmetry: bool
    nodes: list
    succ: array
    declared: bytearray
    parent: array
    parent_label: array
    root: int = 0

    @property
    def num_nodes(self):
        return len(self.nodes)

    @property
    def num_labels(self):
        return self.n * self.r

    def label(self, k):
        return divmod(k, self.r)

    def successor(self, u, k):
        return self.succ[u * self.n * self.r + k]

    def edges(self):
        """Yield (source, (prisoner, room), target) for every stored edge."""
        L = self.num_labels
        for u in range(self.num_nodes):
            if self.declared[u]:
                continue
            for k in range(L):
                yield u, divmod(k, self.r), self.succ[u * L + k]

    def decode(self, u):
        return self.encoding.decode(self.nodes[u])

    def configuration(self, u):
        rooms, ctrls, visited, decl = self.decode(u)
        if visited is None:
            visited = (0,) * self.n
        return Configuration(self.n, self.r, self.q, rooms, ctrls, visited, decl)

    def path_labels(self, u):
        """Labels of the BFS-tree path from the root to ``u``."""
        out = []
        while u != self.root:
            out.append(self.parent_label[u])
            u = self.parent[u]
        out.reverse()
        return out

    def initial_configuration(self):
        return initial_configuration(self.n, self.r, self.q, self.init, self.controllers)


def explore(controllers, n, r, q, init=None, *, track_visited=True, symmetry=False, budget=None):
    """Build the graph of every configuration reachable under any schedule.

    Expansion stops at declared nodes.  ``symmetry`` canonicalises rooms up to
    permutations preserving (room state, visited column); it requires
    ``track_visited``.  Raises :class:`BudgetExceeded` rather than truncating.
    """
    controllers = tuple(controllers)
    if len(controllers) != n:
        raise ConfigurationError(f"expected {n} controllers, got {len(controllers)}")
    for c in controllers:
        if c.q != q:
            raise ConfigurationError(f"controller {c.name!r} has q={c.q}, expected {q}")
    if init is None:
        init = (0,) * r
    init = tuple(init)
    initial_configuration(n, r, q, init)  # validates
    if symmetry and not track_visited:
        raise ValueError("room-symmetry reduction needs the visited ledger")
    budget = default_budget() if budget is None else budget

    enc = Encoding(n, r, q, controllers, track_visited)
    tables = [c.table for c in controllers]
    sizes = enc.sizes
    ctrl_mul, room_mul, decl_mul = enc.ctrl_mul, enc.room_mul, enc.decl_mul
    L = n * r
    vis_bit = [1 << k for k in range(L)] if track_visited else [0] * L

    root_code = enc.encode(init, [c.initial for c in controllers], (0,) * n)
    if symmetry:
        root_code = enc.canonical(root_code)[0]
    nodes = [root_code]
    index = {root_code: 0}
    succ = array("q")
    declared = bytearray(1)
    parent = array("q", [-1])
    parent_label = array("q", [-1])
    canonical = enc.canonical
    queue = deque([0])
    while queue:
        u = queue.popleft()
        x = nodes[u]
        if x >= decl_mul:
            declared[u] = 1
            succ.extend([-1] * L)
            continue
        obs = [(x // m) % q for m in room_mul]
        k = 0
        row = []
        for p in range(n):
            cm = ctrl_mul[p]
            c = (x // cm) % sizes[p]
            tab = tables[p]
            base = c * q
            for j in range(r):
                o = obs[j]
                w, nxt, dec = tab[base + o]
                y = x + (w - o) * room_mul[j] + (nxt - c) * cm
                y |= vis_bit[k]
                if dec:
                    y += (p + 1) * decl_mul
                if symmetry:
                    y = canonical(y)[0]
                v = index.get(y)
                if v is None:
                    v = len(nodes)
                    if v >= budget:
                        raise BudgetExceeded(budget, v)
                    index[y] = v
                    nodes.append(y)
                    declared.append(0)
                    parent.append(u)
                    parent_label.append(k)
                    queue.append(v)
                row.append(v)
                k += 1
        succ.extend(row)
    for u in range(len(nodes)):
        if nodes[u] >= decl_mul:
            declared[u] = 1
    return ReachGraph(
        n, r, q, controllers, init, enc, track_visited, symmetry,
        nodes, succ, declared, parent, parent_label,
    )


# -- verdicts ---------------------------------------------------------------


@dataclass
class Win:
    nodes: int = 0
    kind = "win"


@dataclass
class Unsafe:
    trace: Trace
    nodes: int = 0
    kind = "unsafe"


@dataclass
class WardenFairLoop:
    prefix: Trace
    cycle: list = field(default_factory=list)
    nodes: int = 0
    kind = "fairloop"


def _labels_to_trace(g, labels):
    """Turn a label path from the root into a concrete Trace.

    Under symmetry reduction each label is relative to the canonical room
    order of its source node; it is mapped back to a real room by replaying.
    """
    cfg = g.initial_configuration()
    events = []
    if not g.symmetry:
        events = [divmod(k, g.r) for k in labels]
        return run_events(cfg, events, g.controllers)
    trace = Trace(cfg)
    enc = g.encoding
    for k in labels:
        p, j_canon = divmod(k, g.r)
        code = enc.encode(cfg.room_states, cfg.ctrl_states, cfg.visited)
        _, perm = enc.canonical(code)
        j = perm[j_canon]
        ev = ScheduleEvent(cfg.time, p, j)
        obs = cfg.room_states[j]
        cfg = apply_event(cfg, ev, g.controllers)
        trace.steps.append(TraceStep(ev, obs, cfg.room_states[j], cfg.declared_by is not None))
    return trace


def check_safety(g):
    """Shortest trace ending in a declaration with an incomplete ledger, or None."""
    if g.track_visited:
        full = (1 << g.r) - 1
        for u in range(g.num_nodes):
            if not g.declared[u]:
                continue
            _, _, visited, _ = g.decode(u)
            if any(row != full for row in visited):
                return _labels_to_trace(g, g.path_labels(u))
        return None
    best = None
    for avoid in range(g.num_labels):
        labels = _avoiding_path_to_declaration(g, avoid)
        if labels is not None and (best is None or len(labels) < len(best)):
            best = labels
    return None if best is None else _labels_to_trace(g, best)


def _avoiding_path_to_declaration(g, avoid):
    L = g.num_labels
    succ, declared = g.succ, g.declared
    prev = {g.root: (-1, -1)}
    queue = deque([g.root])
    while queue:
        u = queue.popleft()
        if declared[u]:
            labels = []
            while u != g.root:
                u, k = prev[u]
                labels.append(k)
            labels.reverse()
            return labels
        base = u * L
        for k in range(L):
            if k == avoid:
                continue
            v = succ[base + k]
            if v not in prev:
                prev[v] = (u, k)
                queue.append(v)
    return None


def strongly_connected_components(num_nodes, neighbours, allowed):
    """Iterative Tarjan over nodes with ``allowed[u]`` true.

    ``neighbours(u)`` yields successor ids; successors outside ``allowed``
    are ignored.  Returns a component id per node (-1 if not allowed).
    """
    index = [-1] * num_nodes
    low = [0] * num_nodes
    on_stack = bytearray(num_nodes)
    comp = [-1] * num_nodes
    stack = []
    counter = count()
    comp_counter = count()
    for start in range(num_nodes):
        if not allowed[start] or index[start] != -1:
            continue
        i = next(counter)
        index[start] = low[start] = i
        stack.append(start)
        on_stack[start] = 1
        work = [(start, iter(neighbours(start)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if not allowed[w]:
                    continue
                if index[w] == -1:
                    i = next(counter)
                    index[w] = low[w] = i
                    stack.append(w)
                    on_stack[w] = 1
                    work.append((w, iter(neighbours(w))))
                    advanced = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                cid = next(comp_counter)
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp[w] = cid
                    if w == v:
                        break
    return comp


def fair_components(g, allowed=None):
    """Component ids whose internal edges carry every label.

    Returns ``(comp, fair_ids)``; ``allowed`` defaults to the undeclared nodes.
    """
    N, L = g.num_nodes, g.num_labels
    succ = g.succ
    if allowed is None:
        allowed = [not d for d in g.declared]

    def neighbours(u):
        base = u * L
        return succ[base:base + L]

    comp = strongly_connected_components(N, neighbours, allowed)
    full = (1 << L) - 1
    cover = {}
    for u in range(N):
        cu = comp[u]
        if cu < 0:
            continue
        base = u * L
        mask = cover.get(cu, 0)
        if mask == full:
            continue
        for k in range(L):
            v = succ[base + k]
            if comp[v] == cu:
                mask |= 1 << k
        cover[cu] = mask
    fair = sorted(c for c, m in cover.items() if m == full)
    return comp, fair


def _lasso(g, comp, cid):
    L = g.num_labels
    succ = g.succ
    members = [u for u in range(g.num_nodes) if comp[u] == cid]
    start = min(members)  # smallest BFS id: shortest prefix
    prefix = g.path_labels(start)

    def internal(u):
        base = u * L
        for k in range(L):
            v = succ[base + k]
            if comp[v] == cid:
                yield k, v

    needed = set(range(L))
    cycle = []
    cur = start
    while needed:
        # BFS inside the component to the nearest node with an uncovered edge
        prev = {cur: None}
        queue = deque([cur])
        target = None
        while queue and target is None:
            u = queue.popleft()
            for k, v in internal(u):
                if k in needed:
                    target = (u, k, v)
                    break
                if v not in prev:
                    prev[v] = (u, k)
                    queue.append(v)
        u, k, v = target
        path = []
        node = u
        while prev[node] is not None:
            node, lab = prev[node]
            path.append(lab)
        path.reverse()
        path.append(k)
        # replay path to collect covered labels
        node = cur
        for lab in path:
            needed.discard(lab)
            cycle.append(lab)
            node = succ[node * L + lab]
        cur = node
    if cur != start:
        prev = {cur: None}
        queue = deque([cur])
        while start not in prev:
            u = queue.popleft()
            for k, v in internal(u):
                if v not in prev:
                    prev[v] = (u, k)
                    queue.append(v)
        path = []
        node = start
        while prev[node] is not None:
            node, lab = prev[node]
            path.append(lab)
        path.reverse()
        cycle.extend(path)
    return prefix, cycle


def _fairloop_from(g, prefix_labels, cycle_labels, nodes=0):
    prefix = _labels_to_trace(g, prefix_labels)
    t0 = len(prefix)
    if g.symmetry:  # pragma: no cover - liveness never runs on a quotient
        raise ValueError("fair loops are extracted from unreduced graphs only")
    cycle = [ScheduleEvent(t0 + i, *divmod(k, g.r)) for i, k in enumerate(cycle_labels)]
    return WardenFairLoop(prefix, cycle, nodes)


def check_fair_liveness(g, allowed=None):
    """A fair, non-declaring lasso, or None.

    Some infinite schedule eventually stays inside one strongly connected
    component; a fair one uses every label infinitely often, so all labels
    must be internal to that component.  Conversely such a component lets the
    warden cycle through every label forever without a declaration.
    """
    if g.symmetry:
        raise ValueError("fair-loop detection needs an unreduced graph")
    comp, fair = fair_components(g, allowed)
    if not fair:
        return None
    first = {}
    for u in range(g.num_nodes):
        cu = comp[u]
        if cu >= 0 and cu not in first:
            first[cu] = u
    best = min(fair, key=first.__getitem__)
    prefix, cycle = _lasso(g, comp, best)
    return _fairloop_from(g, prefix, cycle, g.num_nodes)


def verdict(controllers, n, r, q, init=None, *, track_visited=False, symmetry=False, budget=None):
    """Win iff no unsafe declaration is reachable and no fair loop exists.

    With ``symmetry`` the safety half runs on the room-symmetry quotient of
    the ledger-tracking graph and the liveness half on the unreduced
    projected graph.
    """
    if symmetry:
        g = explore(controllers, n, r, q, init, track_visited=True, symmetry=True, budget=budget)
        bad = check_safety(g)
        if bad is not None:
            return Unsafe(bad, g.num_nodes)
        lg = explore(controllers, n, r, q, init, track_visited=False, budget=budget)
        loop = check_fair_liveness(lg)
        if loop is not None:
            loop.nodes = g.num_nodes
            return loop
        return Win(g.num_nodes)
    g = explore(controllers, n, r, q, init, track_visited=track_visited, budget=budget)
    bad = check_safety(g)
    if bad is not None:
        return Unsafe(bad, g.num_nodes)
    loop = check_fair_liveness(g)
    if loop is not None:
        return loop
    return Win(g.num_nodes)


def verdict_to_json(v):
    out = {"verdict": v.kind, "nodes": v.nodes, "counterexample": None}
    if isinstance(v, Unsafe):
        out["counterexample"] = {"steps": [_step_dict(s) for s in v.trace.steps]}
    elif isinstance(v, WardenFairLoop):
        out["counterexample"] = {
            "prefix": [_step_dict(s) for s in v.prefix.steps],
            "cycle": [{"t": e.time, "prisoner": e.prisoner, "room": e.room} for e in v.cycle],
        }
    return out


def _step_dict(s):
    return {
        "t": s.event.time,
        "prisoner": s.event.prisoner,
        "room": s.event.room,
        "observed": s.observed,
        "written": s.written,
        "declared": s.declared,
    }


# -- label-count properties ---------------------------------------------------


@dataclass
class CountReport:
    label: str
    expected: int
    max_seen: int
    exceeded: Trace | None
    short_loop: WardenFairLoop | None
    monotone: bool
    nodes: int

    @property
    def holds(self):
        return self.exceeded is None and self.short_loop is None and self.monotone


def label_counts(g, label):
    """Number of prisoners whose control state carries ``label``, per node."""
    flags = [tuple(label in lab for lab in c.labels) for c in g.controllers]
    out = []
    for u in range(g.num_nodes):
        _, ctrls, _, _ = g.decode(u)
        out.append(sum(flags[p][c] for p, c in enumerate(ctrls)))
    return out


def check_eventually_exactly(g, label, expected):
    """Does every fair run end with exactly ``expected`` prisoners labelled?

    Checks that labels are never dropped, that no reachable node has more
    than ``expected`` labelled prisoners, and that no fair loop stays below
    ``expected``.
    """
    flags = [tuple(label in lab for lab in c.labels) for c in g.controllers]
    counts = []
    per_node = []
    for u in range(g.num_nodes):
        _, ctrls, _, _ = g.decode(u)
        f = tuple(flags[p][c] for p, c in enumerate(ctrls))
        per_node.append(f)
        counts.append(sum(f))
    monotone = True
    for u, _, v in g.edges():
        if any(a and not b for a, b in zip(per_node[u], per_node[v])):
            monotone = False
            break
    exceeded = None
    for u in range(g.num_nodes):
        if counts[u] > expected:
            exceeded = _labels_to_trace(g, g.path_labels(u))
            break
    allowed = [not g.declared[u] and counts[u] < expected for u in range(g.num_nodes)]
    short = check_fair_liveness(g, allowed)
    return CountReport(label, expected, max(counts), exceeded, short, monotone, g.num_nodes)
