"""Finite crystal graphs: breadth-first closure, axiom checks, isomorphism,
JSON and DOT export.

A :class:`CrystalGraph` stores nodes with cached statistics and the f-edges
between them (an e-edge is the reverse of an f-edge). Besides the edges, every
*expanded* node keeps its full operator table: the image of every e_i and
f_i, i in I, even when the image lies outside the graph. That is what lets
the axiom checker work on truncated graphs: a clause is only evaluated where
all the operator images it needs are known.

Edge labels are the integers 1..n−1 and −1 for the odd index 1̄.
"""
import itertools as it
import json
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import graphviz

from qcrystals.config import DEFAULT_ISO_NODE_CAP, GuardExceeded, default_max_nodes
from qcrystals.crystal import (
    CrystalElement, FiniteElement, LimitElement, TensorElement, element_from_json,
)
from qcrystals.finite import ODD, OperatorLabel, index_set as full_index_set
from qcrystals.weights import NEG_INF, ExtInt, WeightVector, ext_from_json, ext_to_json, simple_root

logger = logging.getLogger(__name__)


class _Outside:
    """An operator image known to exist but not stored in the graph."""

    def __repr__(self) -> str:
        return "OUTSIDE"


OUTSIDE = _Outside()


@dataclass
class Node:
    id: int
    key: Hashable
    element: Any
    weight: WeightVector
    eps: Dict[int, ExtInt]
    phi: Dict[int, ExtInt]
    depth: int = 0


@dataclass(frozen=True, order=True)
class Edge:
    src: int
    label: int
    dst: int


@dataclass
class CrystalGraph:
    n: int
    nodes: List[Node]
    edges: List[Edge]
    generators: List[int]
    truncated: bool = False
    depth: Optional[int] = None
    kind: str = "mixed"
    ops: Dict[Hashable, Dict[OperatorLabel, Any]] = field(default_factory=dict)

    def __post_init__(self):
        self._by_key = {node.key: node for node in self.nodes}
        self._out: Dict[int, Dict[int, List[int]]] = {node.id: {} for node in self.nodes}
        self._in: Dict[int, Dict[int, List[int]]] = {node.id: {} for node in self.nodes}
        for e in self.edges:
            self._out[e.src].setdefault(e.label, []).append(e.dst)
            self._in[e.dst].setdefault(e.label, []).append(e.src)

    # ------------------------------------------------------------ access

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def node(self, key: Hashable) -> Optional[Node]:
        return self._by_key.get(key)

    def out_edges(self, node_id: int) -> Dict[int, List[int]]:
        return self._out[node_id]

    def in_edges(self, node_id: int) -> Dict[int, List[int]]:
        return self._in[node_id]

    def elements(self) -> List[Any]:
        return [node.element for node in self.nodes]

    def labels(self) -> Tuple[int, ...]:
        return full_index_set(self.n)

    def image(self, key: Hashable, op: OperatorLabel) -> Tuple[bool, Any]:
        """(known, image key or None for ⊥) of an operator at a node."""
        if key is None:
            return True, None
        table = self.ops.get(key)
        if table is None or op not in table:
            return False, None
        value = table[op]
        if value is OUTSIDE:
            return False, None
        return True, value

    def image_word(self, key: Hashable, ops: Sequence[OperatorLabel]) -> Tuple[bool, Any]:
        """Apply ops in order (first acts first) through the operator tables."""
        for op in ops:
            known, key = self.image(key, op)
            if not known:
                return False, None
            if key is None:
                return True, None
        return True, key

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        seen = {self.nodes[0].id}
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for nbrs in it.chain(self._out[v].values(), self._in[v].values()):
                for w in nbrs:
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
        return len(seen) == len(self.nodes)

    # ------------------------------------------------------------ export

    def to_json(self) -> dict:
        ids = {node.key: node.id for node in self.nodes}

        def ref(value):
            if value is None:
                return None
            if value is OUTSIDE or value not in ids:
                return "outside"
            return ids[value]

        nodes = []
        for node in self.nodes:
            element = node.element.to_json() if isinstance(node.element, CrystalElement) else node.element
            entry = {
                "id": node.id,
                "element": element,
                "wt": node.weight.to_json(),
                "eps": {str(i): ext_to_json(v) for i, v in sorted(node.eps.items())},
                "phi": {str(i): ext_to_json(v) for i, v in sorted(node.phi.items())},
                "depth": node.depth,
            }
            table = self.ops.get(node.key)
            if table is not None:
                entry["ops"] = {str(op): ref(v) for op, v in sorted(table.items())}
            nodes.append(entry)
        return {
            "n": self.n,
            "kind": self.kind,
            "nodes": nodes,
            "edges": [{"src": e.src, "label": e.label, "dst": e.dst} for e in self.edges],
            "generators": list(self.generators),
            "truncated": self.truncated,
            "depth": self.depth,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "CrystalGraph":
        """Restore a graph; node keys become the node ids."""
        nodes, ops = [], {}
        for entry in data["nodes"]:
            node_id = int(entry["id"])
            nodes.append(Node(
                id=node_id,
                key=node_id,
                element=entry.get("element"),
                weight=WeightVector(tuple(entry["wt"])),
                eps={int(i): ext_from_json(v) for i, v in entry["eps"].items()},
                phi={int(i): ext_from_json(v) for i, v in entry["phi"].items()},
                depth=int(entry.get("depth", 0)),
            ))
            if "ops" in entry:
                table = {}
                for label, value in entry["ops"].items():
                    table[OperatorLabel.parse(label)] = OUTSIDE if value == "outside" else value
                ops[node_id] = table
        edges = [Edge(int(e["src"]), int(e["label"]), int(e["dst"])) for e in data["edges"]]
        return cls(n=int(data["n"]), nodes=nodes, edges=edges,
                   generators=[int(g) for g in data.get("generators", [])],
                   truncated=bool(data.get("truncated", False)),
                   depth=data.get("depth"), kind=data.get("kind", "mixed"), ops=ops)

    def to_graphviz(self, filename: Optional[str] = None, format: str = "png",
                    view: bool = False) -> graphviz.Digraph:
        """DOT rendering: nodes labeled by their element, 1̄-edges dashed."""
        dot = graphviz.Digraph(engine='dot')
        generators = set(self.generators)
        for node in self.nodes:
            label = str(node.element) if isinstance(node.element, CrystalElement) \
                else json.dumps(node.element, sort_keys=True)
            if node.id in generators:
                dot.node(str(node.id), label=label, shape='box', style='filled', fillcolor='lightblue')
            else:
                dot.node(str(node.id), label=label, shape='box')
        for e in self.edges:
            if e.label == ODD:
                dot.edge(str(e.src), str(e.dst), label="-1", style='dashed', color='red')
            else:
                dot.edge(str(e.src), str(e.dst), label=str(e.label))
        if filename is not None:
            dot.render(filename=filename, format=format, view=view)
        return dot

    def to_dot(self) -> str:
        return self.to_graphviz().source

    def to_networkx(self, weight_mode: str = "exact"):
        """A networkx MultiDiGraph with node attribute ``sig`` and edge
        attribute ``label``."""
        try:
            import networkx as nx
        except ImportError as e:
            raise ImportError("to_networkx requires networkx (pip install qcrystals[graphs])") from e
        graph = nx.MultiDiGraph()
        for node in self.nodes:
            graph.add_node(node.id, sig=_signature(self, node, weight_mode))
        for e in self.edges:
            graph.add_edge(e.src, e.dst, label=e.label)
        return graph

    def __repr__(self) -> str:
        trunc = f", truncated at depth {self.depth}" if self.truncated else ""
        return f"CrystalGraph(n={self.n}, {self.num_nodes} nodes, {self.num_edges} edges{trunc})"


# ====================================================================
# Breadth-first closure
# ====================================================================

def _graph_kind(elements: Iterable[CrystalElement]) -> str:
    kinds = {type(x) for x in elements}
    if kinds == {FiniteElement}:
        return "finite"
    if kinds == {LimitElement}:
        return "limit"
    if kinds == {TensorElement}:
        return "tensor"
    return "mixed"


def bfs_subcrystal(generators: Sequence[CrystalElement], dirs: Sequence[str] = ("e", "f"),
                   index_set: Optional[Sequence[int]] = None, depth: Optional[int] = None,
                   max_nodes: Optional[int] = None) -> CrystalGraph:
    """Breadth-first closure of ``generators`` under the requested operators.

    :param dirs: any of ``"e"``, ``"f"``
    :param index_set: labels to follow (default all of I)
    :param depth: stop expanding at this distance from the generators
    :param max_nodes: node guard (default :func:`qcrystals.config.default_max_nodes`)
    """
    generators = list(generators)
    if not generators:
        raise ValueError("at least one generator is required")
    n = generators[0].n
    labels = tuple(index_set) if index_set is not None else full_index_set(n)
    follow = [OperatorLabel(kind, i) for kind in dirs for i in labels]
    table_ops = [OperatorLabel(kind, i) for kind in ("e", "f") for i in full_index_set(n)]
    cap = max_nodes if max_nodes is not None else default_max_nodes()

    depth_of: Dict[CrystalElement, int] = {}
    queue = deque()
    for g in generators:
        if g not in depth_of:
            depth_of[g] = 0
            queue.append(g)
    tables: Dict[CrystalElement, Dict[OperatorLabel, Any]] = {}
    truncated = False
    while queue:
        x = queue.popleft()
        d = depth_of[x]
        if depth is not None and d >= depth:
            if not truncated and any((y := x.apply(op)) is not None and y not in depth_of
                                     for op in follow):
                truncated = True
            continue
        table = {op: x.apply(op) for op in table_ops}
        tables[x] = table
        for op in follow:
            y = table[op]
            if y is not None and y not in depth_of:
                if len(depth_of) >= cap:
                    raise GuardExceeded("max_nodes", cap, f"BFS from {len(generators)} generator(s)")
                depth_of[y] = d + 1
                queue.append(y)
        if len(tables) % 1000 == 0:
            logger.debug("bfs: %d expanded, %d discovered", len(tables), len(depth_of))

    ordered = sorted(depth_of, key=lambda x: x.sort_key())
    ids = {x: k for k, x in enumerate(ordered)}
    nodes = []
    for x in ordered:
        eps = {i: x.epsilon(i) for i in full_index_set(n)}
        phi = {i: x.phi(i) for i in full_index_set(n)}
        nodes.append(Node(ids[x], x, x, x.weight(), eps, phi, depth_of[x]))
    edges = set()
    for x, table in tables.items():
        for op, y in table.items():
            if y is None or y not in ids:
                continue
            if op.kind == "f":
                edges.add(Edge(ids[x], op.index, ids[y]))
            else:
                edges.add(Edge(ids[y], op.index, ids[x]))
    graph = CrystalGraph(n=n, nodes=nodes, edges=sorted(edges),
                         generators=sorted(ids[g] for g in set(generators)),
                         truncated=truncated, depth=depth, kind=_graph_kind(ordered), ops=tables)
    logger.info("bfs_subcrystal: %r", graph)
    return graph


# ====================================================================
# Axioms
# ====================================================================

@dataclass(frozen=True)
class AxiomViolation:
    clause: str
    nodes: Tuple[int, ...]
    message: str

    def to_json(self) -> dict:
        return {"clause": self.clause, "nodes": list(self.nodes), "message": self.message}


@dataclass
class AxiomReport:
    level: str
    violations: List[AxiomViolation] = field(default_factory=list)
    checked_nodes: int = 0
    exempt: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, clause: str, nodes: Sequence[int], message: str):
        self.violations.append(AxiomViolation(clause, tuple(nodes), message))

    def to_json(self) -> dict:
        return {"level": self.level, "ok": self.ok, "checked_nodes": self.checked_nodes,
                "exempt": list(self.exempt),
                "violations": [v.to_json() for v in self.violations]}


def _string_length(G: CrystalGraph, key: Hashable, op: OperatorLabel) -> Optional[int]:
    """Length of the op-string through the operator tables, None if unknown."""
    k = 0
    seen = set()
    while True:
        known, key = G.image(key, op)
        if not known:
            return None
        if key is None:
            return k
        if key in seen:
            return None
        seen.add(key)
        k += 1


def check_axioms(G: CrystalGraph, level: str = "q", seminormal: bool = False,
                 nonnegative_weights: Optional[bool] = None) -> AxiomReport:
    """Check the abstract 𝔤𝔩(n)-crystal axioms, and for ``level="q"`` the 𝔮(n)
    clauses, on every node where the needed data is available.

    :param seminormal: also require ε_i, φ_i to be the string lengths
    :param nonnegative_weights: require wt in Z^n_{>=0}; defaults to True for
        graphs of finite tableaux only (limit weights live in Q⁺)
    """
    if level not in ("gl", "q"):
        raise ValueError(f"level must be 'gl' or 'q', got {level!r}")
    n = G.n
    report = AxiomReport(level)
    by_id = {node.id: node for node in G.nodes}
    even = tuple(range(1, n))

    if nonnegative_weights is None:
        nonnegative_weights = G.kind == "finite"
    if level == "q" and not nonnegative_weights:
        report.exempt.append("nonnegative weights")

    # edge-local clauses
    for e in G.edges:
        if e.label == ODD and level != "q":
            continue
        x, y = by_id[e.src], by_id[e.dst]
        if y.weight != x.weight - simple_root(n, e.label):
            report.add("weight", (x.id, y.id),
                       f"f{e.label}: wt {x.weight} -> {y.weight} is not a step by -alpha")
        if e.label == ODD:
            continue
        i = e.label
        if x.phi[i] is NEG_INF or y.phi[i] is NEG_INF:
            report.add("neg-inf", (x.id, y.id), f"f{i} defined although phi_{i} = -inf")
            continue
        if y.eps[i] != x.eps[i] + 1 or y.phi[i] != x.phi[i] - 1:
            report.add("ladder", (x.id, y.id),
                       f"f{i}: (eps, phi) ({x.eps[i]},{x.phi[i]}) -> ({y.eps[i]},{y.phi[i]})")

    labels = full_index_set(n) if level == "q" else even
    for node in G.nodes:
        report.checked_nodes += 1
        for i in even:
            eps, phi = node.eps[i], node.phi[i]
            if (eps is NEG_INF) != (phi is NEG_INF):
                report.add("phi-eps", (node.id,), f"exactly one of eps_{i}, phi_{i} is -inf")
            elif eps is not NEG_INF and phi != eps + node.weight.wt_i(i):
                report.add("phi-eps", (node.id,),
                           f"phi_{i} = {phi} != eps_{i} + wt_{i} = {eps + node.weight.wt_i(i)}")
        for label in labels:
            outs = G.out_edges(node.id).get(label, [])
            ins = G.in_edges(node.id).get(label, [])
            if len(outs) > 1 or len(ins) > 1:
                report.add("pairing", (node.id,), f"label {label}: {len(outs)} out, {len(ins)} in")

        if seminormal:
            for i in labels:
                if i == ODD:
                    continue
                for kind, stat in (("e", node.eps), ("f", node.phi)):
                    length = _string_length(G, node.key, OperatorLabel(kind, i))
                    if length is not None and length != stat[i]:
                        report.add("seminormal", (node.id,),
                                   f"{kind}{i}-string has length {length}, statistic says {stat[i]}")

        if level == "q" and nonnegative_weights and any(c < 0 for c in node.weight.coords):
            report.add("nonnegative", (node.id,), f"weight {node.weight} has a negative entry")

        if level == "q":
            _check_odd_commutation(G, node, report)
    return report


def _check_odd_commutation(G: CrystalGraph, node: Node, report: AxiomReport):
    """e_1̄, f_1̄ commute with e_i, f_i and preserve ε_i, φ_i for 3 <= i <= n−1."""
    n = G.n
    for i in range(3, n):
        for g_kind, h_kind in it.product("ef", "ef"):
            g, h = OperatorLabel(g_kind, ODD), OperatorLabel(h_kind, i)
            known_l, lhs = G.image_word(node.key, (h, g))
            known_r, rhs = G.image_word(node.key, (g, h))
            if known_l and known_r and lhs != rhs:
                report.add("odd-commutation", (node.id,), f"{g}{h} != {h}{g}")
        for g_kind in "ef":
            known, y = G.image(node.key, OperatorLabel(g_kind, ODD))
            target = G.node(y) if known and y is not None else None
            if target is not None and (target.eps[i] != node.eps[i] or target.phi[i] != node.phi[i]):
                report.add("odd-preserves", (node.id, target.id),
                           f"{g_kind}-1 changes (eps_{i}, phi_{i})")


# ====================================================================
# Isomorphism
# ====================================================================

@dataclass
class IsomorphismResult:
    isomorphic: bool
    mapping: Dict[int, int] = field(default_factory=dict)
    reason: str = ""

    def __bool__(self) -> bool:
        return self.isomorphic

    def to_json(self) -> dict:
        return {"isomorphic": self.isomorphic, "reason": self.reason,
                "mapping": {str(k): v for k, v in sorted(self.mapping.items())}}


def _weight_signature(G: CrystalGraph, node: Node, weight_mode: str):
    if weight_mode == "exact":
        return node.weight.coords
    if weight_mode == "mod_ones":
        return tuple(node.weight.wt_i(i) for i in range(1, G.n))
    raise ValueError(f"weight_mode must be 'exact' or 'mod_ones', got {weight_mode!r}")


def _signature(G: CrystalGraph, node: Node, weight_mode: str):
    return (_weight_signature(G, node, weight_mode),
            tuple(sorted((k, len(v)) for k, v in G.out_edges(node.id).items())),
            tuple(sorted((k, len(v)) for k, v in G.in_edges(node.id).items())))


def _consistent_shift(G: CrystalGraph, H: CrystalGraph, mapping: Dict[int, int]) -> bool:
    g_nodes = {node.id: node for node in G.nodes}
    h_nodes = {node.id: node for node in H.nodes}
    shifts = {(h_nodes[h].weight - g_nodes[g].weight).coords for g, h in mapping.items()}
    if len(shifts) > 1:
        return False
    shift = next(iter(shifts), None)
    return shift is None or all(c == shift[0] for c in shift)


def _propagate(G: CrystalGraph, H: CrystalGraph, g0: int, h0: int,
               sig_g: Dict[int, Any], sig_h: Dict[int, Any]) -> Optional[Dict[int, int]]:
    mapping = {g0: h0}
    used = {h0}
    queue = deque([g0])
    while queue:
        g = queue.popleft()
        h = mapping[g]
        for g_adj, h_adj in ((G.out_edges(g), H.out_edges(h)), (G.in_edges(g), H.in_edges(h))):
            for label, targets in g_adj.items():
                h_targets = h_adj.get(label, [])
                if len(targets) != 1 or len(h_targets) != 1:
                    return None
                g2, h2 = targets[0], h_targets[0]
                if g2 in mapping:
                    if mapping[g2] != h2:
                        return None
                    continue
                if h2 in used or sig_g[g2] != sig_h[h2]:
                    return None
                mapping[g2] = h2
                used.add(h2)
                queue.append(g2)
    return mapping


def labeled_isomorphic(G: CrystalGraph, H: CrystalGraph, weight_mode: str = "exact",
                       node_cap: int = DEFAULT_ISO_NODE_CAP) -> IsomorphismResult:
    """Edge-label preserving isomorphism that also matches weights, exactly or
    up to a global shift by a multiple of (1, ..., 1).

    Connected crystal graphs have at most one edge per label and direction at
    every node, so a bijection is determined by the image of one node; each
    candidate image of an anchor is tried and propagated. Other inputs fall
    back to networkx's backtracking matcher.
    """
    if G.n != H.n:
        return IsomorphismResult(False, reason=f"rank {G.n} vs {H.n}")
    if G.num_nodes != H.num_nodes:
        return IsomorphismResult(False, reason=f"{G.num_nodes} vs {H.num_nodes} nodes")
    if G.num_edges != H.num_edges:
        return IsomorphismResult(False, reason=f"{G.num_edges} vs {H.num_edges} edges")
    if Counter(e.label for e in G.edges) != Counter(e.label for e in H.edges):
        return IsomorphismResult(False, reason="edge label counts differ")
    sig_g = {node.id: _signature(G, node, weight_mode) for node in G.nodes}
    sig_h = {node.id: _signature(H, node, weight_mode) for node in H.nodes}
    if Counter(sig_g.values()) != Counter(sig_h.values()):
        return IsomorphismResult(False, reason="node signatures differ")
    if G.num_nodes == 0:
        return IsomorphismResult(True, {}, "empty graphs")

    functional = all(len(v) == 1 for adj in (G._out, G._in) for node in adj.values() for v in node.values())
    if G.is_connected() and H.is_connected() and functional:
        counts = Counter(sig_g.values())
        anchor = min(sig_g, key=lambda g: (counts[sig_g[g]], g))
        for h0 in sorted(h for h, s in sig_h.items() if s == sig_g[anchor]):
            mapping = _propagate(G, H, anchor, h0, sig_g, sig_h)
            if mapping is None or len(mapping) != G.num_nodes:
                continue
            if weight_mode == "mod_ones" and not _consistent_shift(G, H, mapping):
                continue
            return IsomorphismResult(True, mapping, f"anchored at node {anchor}")
        return IsomorphismResult(False, reason="no anchor image propagates to a bijection")

    if G.num_nodes > node_cap:
        raise GuardExceeded("iso_node_cap", node_cap, "backtracking isomorphism on disconnected graphs")
    logger.warning("labeled_isomorphic: falling back to backtracking (%d nodes)", G.num_nodes)
    try:
        from networkx.algorithms import isomorphism as nxiso
    except ImportError as e:
        raise ImportError("isomorphism of disconnected graphs requires networkx "
                          "(pip install qcrystals[graphs])") from e
    matcher = nxiso.MultiDiGraphMatcher(
        G.to_networkx(weight_mode), H.to_networkx(weight_mode),
        node_match=lambda a, b: a["sig"] == b["sig"],
        edge_match=nxiso.categorical_multiedge_match("label", None))
    for mapping in matcher.isomorphisms_iter():
        if weight_mode != "mod_ones" or _consistent_shift(G, H, mapping):
            return IsomorphismResult(True, dict(mapping), "backtracking")
    return IsomorphismResult(False, reason="no label-preserving bijection")
