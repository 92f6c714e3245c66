"""BPMN graph assembly and rendering.

Mentions, relations and coreference clusters become a directed graph of
tasks, gateways, actors, data objects and annotations.  Condition
specifications sitting on a flow chain gateway -> condition -> activity are
contracted into labeled sequence edges.  A closure heuristic inserts join
gateways where split branches reconverge, addressing the common failure of
extracted models that open gateways but never close them.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum

from .corpus import DataError, Mention, MentionType, Relation, RelationType
from .resolve import EntityCluster


class NodeKind(str, Enum):
    TASK = "Task"
    XOR_GATEWAY = "XorGateway"
    AND_GATEWAY = "AndGateway"
    ACTOR = "Actor"
    DATA_OBJECT = "DataObject"
    ANNOTATION = "Annotation"
    START_EVENT = "StartEvent"
    END_EVENT = "EndEvent"


class EdgeKind(str, Enum):
    SEQUENCE_FLOW = "SequenceFlow"
    PERFORMER = "Performer"
    RECIPIENT = "Recipient"
    DATA_USE = "DataUse"
    SPECIFICATION = "Specification"


GATEWAY_KINDS = (NodeKind.XOR_GATEWAY, NodeKind.AND_GATEWAY)
FLOW_NODE_KINDS = GATEWAY_KINDS + (NodeKind.TASK, NodeKind.START_EVENT, NodeKind.END_EVENT)


@dataclass(frozen=True)
class BpmnNode:
    node_id: str
    kind: NodeKind
    label: str
    mentions: tuple[int, ...] = ()


@dataclass(frozen=True)
class BpmnEdge:
    source: str
    target: str
    kind: EdgeKind
    label: str = ""
    mentions: tuple[int, ...] = ()


@dataclass
class BpmnGraph:
    nodes: list[BpmnNode] = field(default_factory=list)
    edges: list[BpmnEdge] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    def node_map(self) -> dict[str, BpmnNode]:
        return {n.node_id: n for n in self.nodes}

    def unconnected(self) -> list[str]:
        """Node ids with no incident connecting edge.

        Actors count Performer/Recipient edges as connections; all other
        kinds count SequenceFlow/DataUse/Specification edges.
        """
        incident: dict[str, set[EdgeKind]] = {n.node_id: set() for n in self.nodes}
        for e in self.edges:
            incident[e.source].add(e.kind)
            incident[e.target].add(e.kind)
        out = []
        for n in self.nodes:
            if n.kind is NodeKind.ACTOR:
                connecting = {EdgeKind.PERFORMER, EdgeKind.RECIPIENT}
            else:
                connecting = {EdgeKind.SEQUENCE_FLOW, EdgeKind.DATA_USE,
                              EdgeKind.SPECIFICATION}
            if not (incident[n.node_id] & connecting):
                out.append(n.node_id)
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "nodes": [
                    {
                        "id": n.node_id,
                        "kind": n.kind.value,
                        "label": n.label,
                        "mentions": list(n.mentions),
                    }
                    for n in self.nodes
                ],
                "edges": [
                    {
                        "source": e.source,
                        "target": e.target,
                        "kind": e.kind.value,
                        "label": e.label,
                        "mentions": list(e.mentions),
                    }
                    for e in self.edges
                ],
                "diagnostics": self.diagnostics,
            },
            indent=2,
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "BpmnGraph":
        try:
            payload = json.loads(text)
            nodes = [
                BpmnNode(n["id"], NodeKind(n["kind"]), n["label"],
                         tuple(n.get("mentions", ())))
                for n in payload["nodes"]
            ]
            edges = [
                BpmnEdge(e["source"], e["target"], EdgeKind(e["kind"]),
                         e.get("label", ""), tuple(e.get("mentions", ())))
                for e in payload["edges"]
            ]
        except (KeyError, ValueError, TypeError) as exc:
            raise DataError(f"invalid graph JSON: {exc}") from None
        return BpmnGraph(nodes, edges, list(payload.get("diagnostics", [])))


class _UnionFind:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def assemble_graph(
    mentions: list[Mention],
    relations: list[Relation],
    clusters: list[EntityCluster],
    *,
    events: bool = True,
    contract_conditions: bool = True,
) -> BpmnGraph:
    """Build the process graph from extraction output.

    Relations with endpoint types illegal for their kind are dropped with a
    diagnostic; assembly always completes.
    """
    by_id = {m.mention_id: m for m in mentions}
    graph = BpmnGraph()
    diag = graph.diagnostics

    def order_key(mid):
        m = by_id[mid]
        return (m.sentence_id, m.token_start)

    # merge gateway mentions linked by SameGateway
    gateway_ids = [
        m.mention_id
        for m in mentions
        if m.type in (MentionType.XOR_GATEWAY, MentionType.AND_GATEWAY)
    ]
    uf = _UnionFind(gateway_ids)
    for r in relations:
        if r.type is not RelationType.SAME_GATEWAY:
            continue
        src, tgt = by_id.get(r.source), by_id.get(r.target)
        if (
            src is None
            or tgt is None
            or src.type not in (MentionType.XOR_GATEWAY, MentionType.AND_GATEWAY)
            or tgt.type is not src.type
        ):
            diag.append(f"SameGateway({r.source},{r.target}): endpoints are not "
                        "gateways of one kind; dropped")
            continue
        uf.union(r.source, r.target)

    node_of: dict[int, str] = {}  # mention id -> node id

    gateway_groups: dict[int, list[int]] = {}
    for mid in gateway_ids:
        gateway_groups.setdefault(uf.find(mid), []).append(mid)
    for root, group in sorted(gateway_groups.items()):
        group.sort(key=order_key)
        rep = group[0]
        m = by_id[rep]
        prefix = "xor" if m.type is MentionType.XOR_GATEWAY else "and"
        node_id = f"{prefix}_m{rep}"
        kind = (NodeKind.XOR_GATEWAY if m.type is MentionType.XOR_GATEWAY
                else NodeKind.AND_GATEWAY)
        graph.nodes.append(BpmnNode(node_id, kind, m.text, tuple(sorted(group))))
        for mid in group:
            node_of[mid] = node_id

    for m in sorted(mentions, key=lambda m: m.mention_id):
        if m.type is MentionType.ACTIVITY:
            node_id = f"task_m{m.mention_id}"
            graph.nodes.append(BpmnNode(node_id, NodeKind.TASK, m.text, (m.mention_id,)))
            node_of[m.mention_id] = node_id
        elif m.type is MentionType.FURTHER_SPECIFICATION:
            node_id = f"ann_m{m.mention_id}"
            graph.nodes.append(
                BpmnNode(node_id, NodeKind.ANNOTATION, m.text, (m.mention_id,))
            )
            node_of[m.mention_id] = node_id

    cluster_of: dict[int, EntityCluster] = {}
    for c in clusters:
        for mid in c.members:
            cluster_of[mid] = c
    for c in clusters:
        if c.entity_type is MentionType.ACTOR:
            node_id = f"actor_m{c.canonical}"
            kind = NodeKind.ACTOR
        elif c.entity_type is MentionType.ACTIVITY_DATA:
            node_id = f"data_m{c.canonical}"
            kind = NodeKind.DATA_OBJECT
        else:
            continue
        graph.nodes.append(BpmnNode(node_id, kind, by_id[c.canonical].text, c.members))
        for mid in c.members:
            node_of[mid] = node_id
    # actors/data not covered by any cluster become singleton nodes
    for m in sorted(mentions, key=lambda m: m.mention_id):
        if m.mention_id in node_of:
            continue
        if m.type is MentionType.ACTOR:
            node_id = f"actor_m{m.mention_id}"
            graph.nodes.append(BpmnNode(node_id, NodeKind.ACTOR, m.text, (m.mention_id,)))
            node_of[m.mention_id] = node_id
        elif m.type is MentionType.ACTIVITY_DATA:
            node_id = f"data_m{m.mention_id}"
            graph.nodes.append(
                BpmnNode(node_id, NodeKind.DATA_OBJECT, m.text, (m.mention_id,))
            )
            node_of[m.mention_id] = node_id

    condition_ids = {
        m.mention_id for m in mentions
        if m.type is MentionType.CONDITION_SPECIFICATION
    }

    def is_flow_capable(mid):
        return by_id[mid].type in (
            MentionType.ACTIVITY, MentionType.XOR_GATEWAY, MentionType.AND_GATEWAY
        )

    flows = [r for r in relations if r.type is RelationType.FLOW]
    flows_in: dict[int, list[Relation]] = {}
    flows_out: dict[int, list[Relation]] = {}
    for r in flows:
        flows_in.setdefault(r.target, []).append(r)
        flows_out.setdefault(r.source, []).append(r)

    consumed_flows: set[int] = set()
    edges_seen: set[tuple] = set()

    def add_edge(edge: BpmnEdge):
        key = (edge.source, edge.target, edge.kind, edge.label)
        if key not in edges_seen:
            edges_seen.add(key)
            graph.edges.append(edge)

    # condition specifications: contract, attach, or leave standalone
    for cid in sorted(condition_ids, key=order_key):
        cond = by_id[cid]
        ins = [r for r in flows_in.get(cid, []) if r.source not in condition_ids
               and is_flow_capable(r.source)]
        outs = [r for r in flows_out.get(cid, []) if r.target not in condition_ids
                and is_flow_capable(r.target)]
        if contract_conditions and ins and outs:
            for rin in ins:
                for rout in outs:
                    add_edge(BpmnEdge(node_of[rin.source], node_of[rout.target],
                                      EdgeKind.SEQUENCE_FLOW, cond.text, (cid,)))
                    consumed_flows.add(id(rout))
                consumed_flows.add(id(rin))
        else:
            node_id = f"cond_m{cid}"
            graph.nodes.append(
                BpmnNode(node_id, NodeKind.ANNOTATION, cond.text, (cid,))
            )
            node_of[cid] = node_id
            for rin in ins:
                add_edge(BpmnEdge(node_of[rin.source], node_id,
                                  EdgeKind.SPECIFICATION, "", (cid,)))
                consumed_flows.add(id(rin))
            for rout in outs:
                add_edge(BpmnEdge(node_of[rout.target], node_id,
                                  EdgeKind.SPECIFICATION, "", (cid,)))
                consumed_flows.add(id(rout))

    legal = {
        RelationType.USES: (
            (MentionType.ACTIVITY,), (MentionType.ACTIVITY_DATA,), EdgeKind.DATA_USE
        ),
        RelationType.ACTOR_PERFORMER: (
            (MentionType.ACTIVITY,), (MentionType.ACTOR,), EdgeKind.PERFORMER
        ),
        RelationType.ACTOR_RECIPIENT: (
            (MentionType.ACTIVITY,), (MentionType.ACTOR,), EdgeKind.RECIPIENT
        ),
        RelationType.FURTHER_SPECIFICATION: (
            (MentionType.ACTIVITY,), (MentionType.FURTHER_SPECIFICATION,),
            EdgeKind.SPECIFICATION
        ),
    }

    for r in relations:
        if r.type is RelationType.SAME_GATEWAY:
            continue
        if r.source not in by_id or r.target not in by_id:
            diag.append(f"{r.type.value}({r.source},{r.target}): unknown mention; dropped")
            continue
        if r.type is RelationType.FLOW:
            if id(r) in consumed_flows:
                continue
            if r.source in condition_ids or r.target in condition_ids:
                # condition end without a usable counterpart was handled above;
                # whatever remains is a malformed chain (e.g. condition->condition)
                diag.append(
                    f"Flow({r.source},{r.target}): unresolvable condition chain; dropped"
                )
                continue
            if not (is_flow_capable(r.source) and is_flow_capable(r.target)):
                diag.append(
                    f"Flow({r.source},{r.target}): endpoint type "
                    f"{by_id[r.source].type.value}->{by_id[r.target].type.value} "
                    "is not flow-capable; dropped"
                )
                continue
            add_edge(BpmnEdge(node_of[r.source], node_of[r.target],
                              EdgeKind.SEQUENCE_FLOW, "", ()))
        else:
            src_types, tgt_types, kind = legal[r.type]
            if by_id[r.source].type not in src_types or by_id[r.target].type not in tgt_types:
                diag.append(
                    f"{r.type.value}({r.source},{r.target}): endpoint type "
                    f"{by_id[r.source].type.value}->{by_id[r.target].type.value} "
                    "is illegal; dropped"
                )
                continue
            add_edge(BpmnEdge(node_of[r.source], node_of[r.target], kind, "", ()))

    if events:
        flow_targets = {e.target for e in graph.edges if e.kind is EdgeKind.SEQUENCE_FLOW}
        flow_sources = {e.source for e in graph.edges if e.kind is EdgeKind.SEQUENCE_FLOW}
        behavioral = [
            n for n in graph.nodes
            if n.kind in (NodeKind.TASK,) + GATEWAY_KINDS
        ]
        if behavioral:
            starts = [n for n in behavioral if n.node_id not in flow_targets]
            ends = [n for n in behavioral if n.node_id not in flow_sources]
            if starts:
                graph.nodes.append(BpmnNode("start", NodeKind.START_EVENT, "", ()))
                for n in starts:
                    add_edge(BpmnEdge("start", n.node_id, EdgeKind.SEQUENCE_FLOW, "", ()))
            if ends:
                graph.nodes.append(BpmnNode("end", NodeKind.END_EVENT, "", ()))
                for n in ends:
                    add_edge(BpmnEdge(n.node_id, "end", EdgeKind.SEQUENCE_FLOW, "", ()))

    return graph


def close_gateways(graph: BpmnGraph) -> BpmnGraph:
    """Insert join gateways where split branches reconverge.

    For every gateway with two or more outgoing sequence flows, find the
    first common descendant of its branches by BFS; unless that node is
    itself a gateway (an existing join), insert a join gateway of the split's
    kind immediately before it and reroute the converging edges.  Passes
    repeat until quiescent, so the operation is idempotent and preserves
    reachability.
    """
    out = BpmnGraph(list(graph.nodes), list(graph.edges), list(graph.diagnostics))
    guard = 0
    while _close_pass(out):
        guard += 1
        if guard > len(out.nodes) + 8:  # defensive; one insertion per gateway pair
            out.diagnostics.append("close_gateways: pass limit reached")
            break
    return out


def _flow_adjacency(graph: BpmnGraph) -> dict[str, list[str]]:
    adj: dict[str, list[str]] = {n.node_id: [] for n in graph.nodes}
    for e in graph.edges:
        if e.kind is EdgeKind.SEQUENCE_FLOW:
            adj[e.source].append(e.target)
    return adj


def _bfs_depths(adj, start) -> dict[str, int]:
    depths = {start: 0}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nxt in adj[node]:
            if nxt not in depths:
                depths[nxt] = depths[node] + 1
                queue.append(nxt)
    return depths


def _close_pass(graph: BpmnGraph) -> bool:
    kinds = {n.node_id: n.kind for n in graph.nodes}
    changed = False
    for gateway in sorted(graph.nodes, key=lambda n: n.node_id):
        if gateway.kind not in GATEWAY_KINDS:
            continue
        adj = _flow_adjacency(graph)
        branches = sorted(set(adj[gateway.node_id]))
        if len(branches) < 2:
            continue
        depth_maps = {b: _bfs_depths(adj, b) for b in branches}
        candidates = {}
        for node_id in kinds:
            if node_id == gateway.node_id:
                continue
            reaching = [b for b in branches if node_id in depth_maps[b]]
            if len(reaching) >= 2:
                candidates[node_id] = max(depth_maps[b][node_id] for b in reaching)
        if not candidates:
            continue
        meet = min(candidates, key=lambda n: (candidates[n], n))
        if kinds[meet] in GATEWAY_KINDS:
            continue  # an existing gateway already joins the branches
        reaching = [b for b in branches if meet in depth_maps[b]]
        reachable_union = set()
        for b in reaching:
            reachable_union.update(depth_maps[b])
        converging = [
            e for e in graph.edges
            if e.kind is EdgeKind.SEQUENCE_FLOW and e.target == meet
            and (e.source in reachable_union
                 or (e.source == gateway.node_id and meet in branches))
        ]
        if len(converging) < 2:
            continue
        join_id = f"join_{gateway.node_id}_{meet}"
        if join_id in kinds:
            continue
        graph.nodes.append(BpmnNode(join_id, gateway.kind, "", ()))
        for e in converging:
            graph.edges.remove(e)
            graph.edges.append(replace(e, target=join_id))
        graph.edges.append(BpmnEdge(join_id, meet, EdgeKind.SEQUENCE_FLOW, "", ()))
        changed = True
        kinds[join_id] = gateway.kind
    return changed


_NODE_STYLE = {
    NodeKind.TASK: 'shape=box, style=rounded',
    NodeKind.XOR_GATEWAY: 'shape=diamond, label="X"',
    NodeKind.AND_GATEWAY: 'shape=diamond, label="+"',
    NodeKind.ACTOR: "shape=ellipse",
    NodeKind.DATA_OBJECT: "shape=note",
    NodeKind.ANNOTATION: "shape=plaintext",
    NodeKind.START_EVENT: 'shape=circle, label=""',
    NodeKind.END_EVENT: 'shape=doublecircle, label=""',
}

# performer/recipient edge colors are fixed but arbitrary; non-constraining
# so actor placement never distorts the flow layout
_EDGE_STYLE = {
    EdgeKind.SEQUENCE_FLOW: "",
    EdgeKind.PERFORMER: "color=blue, constraint=false",
    EdgeKind.RECIPIENT: "color=darkgreen, constraint=false",
    EdgeKind.DATA_USE: "style=dashed",
    EdgeKind.SPECIFICATION: "style=dotted, arrowhead=none",
}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", " ") + '"'


def emit_dot(graph: BpmnGraph) -> str:
    """Deterministic DOT text: nodes sorted by id, unconnected nodes grouped
    in a subgraph ranked first so they render at the top left."""
    lines = ["digraph bpmn {", "  rankdir=LR;"]
    unconnected = set(graph.unconnected())
    nodes = sorted(graph.nodes, key=lambda n: n.node_id)

    def node_line(n: BpmnNode, indent: str) -> str:
        style = _NODE_STYLE[n.kind]
        if "label=" not in style:
            style += f", label={_quote(n.label)}"
        return f"{indent}{_quote(n.node_id)} [{style}];"

    if unconnected:
        lines.append("  subgraph unconnected {")
        lines.append("    rank=min;")
        for n in nodes:
            if n.node_id in unconnected:
                lines.append(node_line(n, "    "))
        lines.append("  }")
    for n in nodes:
        if n.node_id not in unconnected:
            lines.append(node_line(n, "  "))
    for e in sorted(graph.edges, key=lambda e: (e.source, e.target, e.kind.value, e.label)):
        style = _EDGE_STYLE[e.kind]
        attrs = []
        if e.label:
            attrs.append(f"label={_quote(e.label)}")
        if style:
            attrs.append(style)
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_quote(e.source)} -> {_quote(e.target)}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"
