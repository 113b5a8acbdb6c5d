"""Quivers internal to finite G-sets, with relations, morphisms, base change
and restriction."""

from __future__ import annotations

from dataclasses import dataclass

from .gsets import C2, FiniteGroup, GSet, Subgroup, equivariant_maps, induce


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple  # (name, ok, witness) triples
    flags: tuple = ()

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self):
        return [(n, w) for n, ok, w in self.checks if not ok]


class RationalQuiver:
    """Vertices and edges as G-sets over a common group, with src/tgt maps
    and relations given as pairs of paths (edge sequences in traversal
    order: path (e1, e2) means e1 first, composite phi_e2 o phi_e1)."""

    def __init__(self, vertices: GSet, edges: GSet, src, tgt, relations=()):
        if vertices.group != edges.group:
            raise ValueError("vertices and edges must share one group")
        src = tuple(src)
        tgt = tuple(tgt)
        if len(src) != edges.size or len(tgt) != edges.size:
            raise ValueError("src/tgt must assign a vertex to every edge")
        for v in src + tgt:
            if not 0 <= v < vertices.size:
                raise ValueError("src/tgt out of range")
        self.group = vertices.group
        self.vertices = vertices
        self.edges = edges
        self.src = src
        self.tgt = tgt
        self.relations = tuple((tuple(p), tuple(q)) for p, q in relations)

    def path_endpoints(self, path):
        if not path:
            raise ValueError("paths must be nonempty")
        for a, b in zip(path, path[1:]):
            if self.tgt[a] != self.src[b]:
                return None
        return self.src[path[0]], self.tgt[path[-1]]

    def act_path(self, g: int, path):
        return tuple(self.edges.apply(g, e) for e in path)

    def __eq__(self, other):
        return (isinstance(other, RationalQuiver)
                and self.vertices == other.vertices and self.edges == other.edges
                and self.src == other.src and self.tgt == other.tgt
                and set(map(_rel_key, self.relations)) == set(map(_rel_key, other.relations)))

    def __repr__(self):
        return (f"RationalQuiver(|V|={self.vertices.size}, |E|={self.edges.size}, "
                f"|G|={self.group.order}, relations={len(self.relations)})")


def _rel_key(rel):
    p, q = rel
    return frozenset((tuple(p), tuple(q)))


@dataclass(frozen=True)
class QuiverMorphism:
    vertex_map: tuple
    edge_map: tuple


def validate(q: RationalQuiver) -> ValidationReport:
    checks = []
    ok = True
    witness = ""
    for g in q.group.elements():
        for e in range(q.edges.size):
            ge = q.edges.apply(g, e)
            if q.src[ge] != q.vertices.apply(g, q.src[e]):
                ok, witness = False, f"src(g*e) != g*src(e) at g={g}, e={e}"
                break
            if q.tgt[ge] != q.vertices.apply(g, q.tgt[e]):
                ok, witness = False, f"tgt(g*e) != g*tgt(e) at g={g}, e={e}"
                break
        if not ok:
            break
    checks.append(("equivariance", ok, witness))

    ok, witness = True, ""
    for p, qq in q.relations:
        ends_p = q.path_endpoints(p)
        ends_q = q.path_endpoints(qq)
        if ends_p is None or ends_q is None:
            ok, witness = False, f"non-composable path in relation {(p, qq)}"
            break
        if ends_p != ends_q:
            ok, witness = False, f"relation paths {(p, qq)} have different endpoints"
            break
    checks.append(("relation-endpoints", ok, witness))

    ok, witness = True, ""
    keys = {_rel_key(r) for r in q.relations}
    for g in q.group.elements():
        for p, qq in q.relations:
            image = (q.act_path(g, p), q.act_path(g, qq))
            if _rel_key(image) not in keys:
                ok, witness = False, f"g={g} maps relation {(p, qq)} outside the list"
                break
        if not ok:
            break
    checks.append(("relation-stability", ok, witness))

    flags = []
    if all(q.vertices.apply(g, x) == x for g in q.group.elements()
           for x in range(q.vertices.size)) and \
       all(q.edges.apply(g, e) == e for g in q.group.elements()
           for e in range(q.edges.size)):
        flags.append("split")
    return ValidationReport(tuple(checks), tuple(flags))


def base_change(q: RationalQuiver, sub: Subgroup) -> RationalQuiver:
    """Same quiver, Galois action restricted to the subgroup."""
    if sub.parent != q.group:
        raise ValueError("subgroup of a different group")
    return RationalQuiver(q.vertices.restrict_to(sub), q.edges.restrict_to(sub),
                          q.src, q.tgt, q.relations)


def restrict(q: RationalQuiver, sub: Subgroup) -> RationalQuiver:
    """Induce a quiver over the subgroup (as its own group) up to the parent.

    q must live over sub.as_group()[0]; vertices and edges are induced via the
    balanced product and src/tgt componentwise; relations are pushed through
    the unit and closed under the parent action.
    """
    hgrp, _ = sub.as_group()
    if q.group != hgrp:
        raise ValueError("quiver is not over the given subgroup")
    g = sub.parent
    verts, vunit = induce(q.vertices, sub)
    edges, eunit = induce(q.edges, sub)
    # the induced edge class of (a, e) has endpoints the classes of (a, s(e)), (a, t(e))
    src = [None] * edges.size
    tgt = [None] * edges.size
    for e in range(q.edges.size):
        e0 = eunit[e]
        s0 = vunit[q.src[e]]
        t0 = vunit[q.tgt[e]]
        for a in g.elements():
            src[edges.apply(a, e0)] = verts.apply(a, s0)
            tgt[edges.apply(a, e0)] = verts.apply(a, t0)
    relations = []
    seen = set()
    for p, qq in q.relations:
        base = (tuple(eunit[e] for e in p), tuple(eunit[e] for e in qq))
        for a in g.elements():
            img = (tuple(edges.apply(a, e) for e in base[0]),
                   tuple(edges.apply(a, e) for e in base[1]))
            if _rel_key(img) not in seen:
                seen.add(_rel_key(img))
                relations.append(img)
    return RationalQuiver(verts, edges, src, tgt, relations)


def _morphism_ok(q1, q2, fv, fe, with_relations=True):
    for e in range(q1.edges.size):
        if q2.src[fe[e]] != fv[q1.src[e]] or q2.tgt[fe[e]] != fv[q1.tgt[e]]:
            return False
    if with_relations:
        keys = {_rel_key(r) for r in q2.relations}
        for p, qq in q1.relations:
            ip = tuple(fe[e] for e in p)
            iq = tuple(fe[e] for e in qq)
            if ip == iq:
                continue
            if _rel_key((ip, iq)) not in keys:
                return False
    return True


def quiver_homs(q1: RationalQuiver, q2: RationalQuiver, with_relations=True):
    """Exhaustive list of equivariant quiver morphisms q1 -> q2."""
    if q1.group != q2.group:
        raise ValueError("quivers over different groups")
    out = []
    for fv in equivariant_maps(q1.vertices, q2.vertices):
        for fe in equivariant_maps(q1.edges, q2.edges):
            if _morphism_ok(q1, q2, fv, fe, with_relations):
                out.append(QuiverMorphism(fv, fe))
    return out


def is_isomorphism(q1: RationalQuiver, q2: RationalQuiver, m: QuiverMorphism) -> bool:
    return (len(set(m.vertex_map)) == q1.vertices.size == q2.vertices.size
            and len(set(m.edge_map)) == q1.edges.size == q2.edges.size
            and _morphism_ok(q1, q2, m.vertex_map, m.edge_map, with_relations=False))


def adjunction_forward(q_sub: RationalQuiver, sub: Subgroup, q_parent: RationalQuiver,
                       morphism: QuiverMorphism) -> QuiverMorphism:
    """Hom_G(restrict(q_sub), q_parent) -> Hom_H(q_sub, base_change(q_parent)):
    precompose with the unit maps."""
    _, vunit = induce(q_sub.vertices, sub)
    _, eunit = induce(q_sub.edges, sub)
    fv = tuple(morphism.vertex_map[vunit[v]] for v in range(q_sub.vertices.size))
    fe = tuple(morphism.edge_map[eunit[e]] for e in range(q_sub.edges.size))
    return QuiverMorphism(fv, fe)


def adjunction_backward(q_sub: RationalQuiver, sub: Subgroup, q_parent: RationalQuiver,
                        morphism: QuiverMorphism) -> QuiverMorphism:
    """Extend an H-morphism equivariantly over the classes [(a, x)]."""
    g = sub.parent
    verts, vunit = induce(q_sub.vertices, sub)
    edges, eunit = induce(q_sub.edges, sub)
    fv = [None] * verts.size
    fe = [None] * edges.size
    for x in range(q_sub.vertices.size):
        for a in g.elements():
            fv[verts.apply(a, vunit[x])] = q_parent.vertices.apply(a, morphism.vertex_map[x])
    for e in range(q_sub.edges.size):
        for a in g.elements():
            fe[edges.apply(a, eunit[e])] = q_parent.edges.apply(a, morphism.edge_map[e])
    return QuiverMorphism(tuple(fv), tuple(fe))


# ----------------------------------------------------------------- fixtures

def gelfand_quiver() -> RationalQuiver:
    """Three vertices (0 = star, 1 = plus, 2 = minus), edges a+ a- b+ b-,
    conjugation swaps the signed data, relation a- b- = a+ b+."""
    vertices = GSet(C2, 3, [[0, 1, 2], [0, 2, 1]])
    edges = GSet(C2, 4, [[0, 1, 2, 3], [1, 0, 3, 2]])
    src = (1, 2, 0, 0)   # a+: + -> star, a-: - -> star, b+: star -> +, b-: star -> -
    tgt = (0, 0, 1, 2)
    relations = (((3, 1), (2, 0)),)  # b- then a-  =  b+ then a+
    return RationalQuiver(vertices, edges, src, tgt, relations)


GELFAND_STAR, GELFAND_PLUS, GELFAND_MINUS = 0, 1, 2
GELFAND_A_PLUS, GELFAND_A_MINUS, GELFAND_B_PLUS, GELFAND_B_MINUS = 0, 1, 2, 3


def cyclic_quiver() -> RationalQuiver:
    """Two vertices (0 = plus, 1 = minus), a: - -> +, b: + -> -, conjugation
    swaps vertices and edges; no relations."""
    vertices = GSet(C2, 2, [[0, 1], [1, 0]])
    edges = GSet(C2, 2, [[0, 1], [1, 0]])
    return RationalQuiver(vertices, edges, src=(1, 0), tgt=(0, 1))


CYCLIC_PLUS, CYCLIC_MINUS = 0, 1
CYCLIC_A, CYCLIC_B = 0, 1


def split_loop_quiver(group: FiniteGroup = C2) -> RationalQuiver:
    vertices = GSet.trivial(group, 1)
    edges = GSet.trivial(group, 1)
    return RationalQuiver(vertices, edges, src=(0,), tgt=(0,))


def two_loop_quiver() -> RationalQuiver:
    """Restriction of the one-loop quiver: two swapped vertices with a loop each."""
    vertices = GSet(C2, 2, [[0, 1], [1, 0]])
    edges = GSet(C2, 2, [[0, 1], [1, 0]])
    return RationalQuiver(vertices, edges, src=(0, 1), tgt=(0, 1))
