"""Typed static dependency graph and efferent-neighbor derivation.

Relation-to-site mapping (all kinds contribute uniformly, no weights):

* call      -- method/constructor invocation (body)
* create    -- object instantiation expression (body)
* contain   -- member and nested-type containment (declaration)
* cast      -- cast expression to a resolvable type (body)
* use       -- field read/write, local/field declaration types, and any type
               reference not covered by a more specific kind
* throws    -- declared thrown type
* return    -- declared return type
* parameter -- declared parameter type
* extend    -- superclass / superinterface extension (implicit root for
               classes without an explicit supertype)
* implement -- interface implementation

Body-level edges originate from the enclosing method/constructor;
declaration-level edges from the declaring member; extend/implement (and
initializer blocks) from the type itself.  Edges to artifacts outside the
corpus are kept but tagged external.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .bodyscan import BodyFacts, scan_expression, scan_initializer, scan_member_body
from .model import (
    ArtifactId,
    ArtifactKind,
    MethodDecl,
    RelationKind,
    SourceCorpus,
    TypeDecl,
)
from .resolve import Resolver


@dataclass(frozen=True, order=True)
class DependencyEdge:
    relation: RelationKind
    source: ArtifactId
    target: ArtifactId
    site_count: int = 1

    @property
    def external(self) -> bool:
        return self.target.is_external


class DomainError(ValueError):
    pass


@dataclass
class DependencyGraph:
    edges: list[DependencyEdge] = field(default_factory=list)
    by_source: dict[ArtifactId, list[DependencyEdge]] = field(default_factory=dict)
    by_target: dict[ArtifactId, list[DependencyEdge]] = field(default_factory=dict)

    def finalize(self) -> None:
        self.edges.sort()
        self.by_source.clear()
        self.by_target.clear()
        for e in self.edges:
            self.by_source.setdefault(e.source, []).append(e)
            self.by_target.setdefault(e.target, []).append(e)

    def internal_edges(self) -> list[DependencyEdge]:
        return [e for e in self.edges if not e.external]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["relation", "source_kind", "source", "target_kind", "target", "site_count"])
            for e in self.edges:
                w.writerow([
                    e.relation.value, e.source.kind.value, str(e.source),
                    e.target.kind.value, str(e.target), e.site_count,
                ])


class _EdgeAccumulator:
    def __init__(self) -> None:
        self.counts: dict[tuple[RelationKind, ArtifactId, ArtifactId], int] = {}

    def add(self, relation: RelationKind, source: ArtifactId, target: ArtifactId | None, n: int = 1) -> None:
        if target is None:
            return
        key = (relation, source, target)
        self.counts[key] = self.counts.get(key, 0) + n

    def build(self) -> DependencyGraph:
        g = DependencyGraph(
            edges=[DependencyEdge(rel, src, tgt, n) for (rel, src, tgt), n in self.counts.items()]
        )
        g.finalize()
        return g


def extract_dependencies(
    corpus: SourceCorpus,
) -> tuple[DependencyGraph, dict[ArtifactId, BodyFacts]]:
    """Extract all edges plus per-member body facts for the metric suite."""
    resolver = Resolver(corpus)
    acc = _EdgeAccumulator()
    facts: dict[ArtifactId, BodyFacts] = {}
    for top in corpus.types:
        for t in top.own_and_nested():
            _type_edges(resolver, acc, t, facts)
    return acc.build(), facts


def _type_edges(
    resolver: Resolver,
    acc: _EdgeAccumulator,
    t: TypeDecl,
    facts: dict[ArtifactId, BodyFacts],
) -> None:
    tid = t.id
    if not t.is_interface and t.superclass is not None:
        acc.add(RelationKind.EXTEND, tid, t.superclass)
    for iface in t.interfaces:
        kind = RelationKind.EXTEND if t.is_interface else RelationKind.IMPLEMENT
        acc.add(kind, tid, iface)
    for nested in t.nested_types:
        acc.add(RelationKind.CONTAIN, tid, nested.id)
    for f in t.fields:
        acc.add(RelationKind.CONTAIN, tid, f.id)
        acc.add(RelationKind.USE, f.id, resolver.resolve_type_name(f.type_name, t))
        for arg in f.type_args:
            acc.add(RelationKind.USE, f.id, resolver.resolve_type_name(arg, t))
        if f.initializer:
            init_facts = scan_expression(resolver, t, f.initializer)
            for relation, target in init_facts.sites:
                acc.add(relation, f.id, target)
    for m in list(t.methods) + list(t.constructors):
        acc.add(RelationKind.CONTAIN, tid, m.id)
        _member_edges(resolver, acc, t, m, facts)
    for init_tokens in t.initializers:
        init_facts = scan_initializer(resolver, t, init_tokens)
        for relation, target in init_facts.sites:
            acc.add(relation, tid, target)


def _member_edges(
    resolver: Resolver,
    acc: _EdgeAccumulator,
    t: TypeDecl,
    m: MethodDecl,
    facts: dict[ArtifactId, BodyFacts],
) -> None:
    tp = frozenset(m.type_params)
    if not m.is_constructor and m.return_type:
        acc.add(RelationKind.RETURN, m.id, resolver.resolve_type_name(m.return_type, t, tp))
    for arg in m.return_type_args:
        acc.add(RelationKind.USE, m.id, resolver.resolve_type_name(arg, t, tp))
    for raw_type, _name in m.params:
        acc.add(RelationKind.PARAMETER, m.id, resolver.resolve_type_name(raw_type, t, tp))
    for arg in m.param_type_args:
        acc.add(RelationKind.USE, m.id, resolver.resolve_type_name(arg, t, tp))
    for thrown in m.throws:
        acc.add(RelationKind.THROWS, m.id, resolver.resolve_type_name(thrown, t, tp))
    body_facts = scan_member_body(resolver, t, m)
    facts[m.id] = body_facts
    for relation, target in body_facts.sites:
        acc.add(relation, m.id, target)


def efferent_neighbors(
    graph: DependencyGraph, corpus: SourceCorpus, focal: ArtifactId
) -> set[ArtifactId]:
    """Distinct internal top-level types the focal class depends on.

    Set semantics: many edges into one neighbor count once.  The focal class
    itself and external artifacts are excluded; interfaces count when
    targeted.
    """
    if focal.kind != ArtifactKind.CLASS or focal.is_external:
        raise DomainError(f"focal artifact must be an internal class: {focal}")
    decl = corpus.type_decl(focal.qualified_name)
    if decl.is_interface or decl.enclosing is not None:
        raise DomainError(f"focal artifact must be a top-level class: {focal}")
    out: set[ArtifactId] = set()
    for e in graph.edges:
        if e.external:
            continue
        if corpus.enclosing_class(e.source) != focal:
            continue
        target_class = corpus.enclosing_class(e.target)
        if target_class != focal:
            out.add(target_class)
    return out


def neighbors_by_class(graph: DependencyGraph, corpus: SourceCorpus) -> dict[ArtifactId, set[ArtifactId]]:
    """Efferent neighbor sets for every top-level class, one graph pass."""
    out: dict[ArtifactId, set[ArtifactId]] = {
        t.id: set() for t in corpus.top_level_classes() if t.enclosing is None
    }
    for e in graph.edges:
        if e.external:
            continue
        src = corpus.enclosing_class(e.source)
        if src not in out:
            continue
        tgt = corpus.enclosing_class(e.target)
        if tgt != src:
            out[src].add(tgt)
    return out
