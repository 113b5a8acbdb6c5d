"""Etale species dual to rational quivers, and the anti-equivalence round trips.

A species is stored Galois-dually: each vertex field is the fixed field of a
subgroup H_i (via the Galois correspondence), and each bimodule is a list of
summands (H_eps, twist_src, twist_tgt) where the twists are the group-element
representatives of the cosets recording the two structure embeddings.  The
summand's coset space G/H_eps reproduces the original edge orbit, with
  src(t H_eps) = t . twist_src . H_i,   tgt(t H_eps) = t . twist_tgt . H_j.
Twist representatives are canonical: the minimal element of their coset.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gsets import FiniteGroup, GSet, Subgroup
from .quiver import RationalQuiver, base_change as quiver_base_change, restrict as quiver_restrict


class IsoSearchFailed(RuntimeError):
    """A round-trip witness failed verification; indicates a construction bug."""


@dataclass(frozen=True)
class BimoduleSummand:
    subgroup: Subgroup
    twist_src: int
    twist_tgt: int


class EtaleSpecies:
    """Index set 0..n-1 with vertex subgroups and bimodule summand lists."""

    def __init__(self, group: FiniteGroup, vertex_subgroups, bimodules):
        self.group = group
        self.vertex_subgroups = tuple(vertex_subgroups)
        for h in self.vertex_subgroups:
            if h.parent != group:
                raise ValueError("vertex subgroup of a different group")
        bims = {}
        for (i, j), summands in bimodules.items():
            summands = tuple(summands)
            for s in summands:
                hi = self.vertex_subgroups[i]
                hj = self.vertex_subgroups[j]
                if not (s.subgroup.elements <= hi.conjugate(s.twist_src).elements
                        and s.subgroup.elements <= hj.conjugate(s.twist_tgt).elements):
                    raise ValueError(
                        f"summand subgroup not compatible with vertex fields at ({i},{j})")
            if summands:
                bims[(i, j)] = summands
        self.bimodules = bims

    @property
    def n_indices(self) -> int:
        return len(self.vertex_subgroups)

    def summands(self, i: int, j: int):
        return self.bimodules.get((i, j), ())

    def is_quadratic(self) -> bool:
        return self.group.order == 2

    def realized_field(self, i: int) -> str:
        """'K' when the vertex subgroup is the full (quadratic) group, else 'L'."""
        if not self.is_quadratic():
            raise ValueError("realizations only exist in the quadratic case")
        return "K" if self.vertex_subgroups[i].order == 2 else "L"

    def summand_field(self, s: BimoduleSummand) -> str:
        if not self.is_quadratic():
            raise ValueError("realizations only exist in the quadratic case")
        return "K" if s.subgroup.order == 2 else "L"

    def __eq__(self, other):
        return (isinstance(other, EtaleSpecies) and self.group == other.group
                and self.vertex_subgroups == other.vertex_subgroups
                and self.bimodules == other.bimodules)

    def __repr__(self):
        total = sum(len(v) for v in self.bimodules.values())
        return f"EtaleSpecies(indices={self.n_indices}, summands={total})"


def _min_transporter(gset: GSet, x: int, y: int) -> int:
    ts = gset.transporter(x, y)
    if not ts:
        raise ValueError("points not in the same orbit")
    return ts[0]


def _canonical_coset_rep(group: FiniteGroup, g: int, sub: Subgroup) -> int:
    return min(group.mul(g, h) for h in sub.elements)


@dataclass(frozen=True)
class QuiverConventions:
    """Chosen orbit representatives and twists behind a species_of_quiver call."""
    vertex_reps: tuple        # v_i per index
    vertex_orbit_of: tuple    # vertex -> index
    edge_reps: tuple          # sorted ((i, j), (e_eps, ...)) pairs, summand order

    def edge_reps_of(self, i: int, j: int) -> tuple:
        for key, reps in self.edge_reps:
            if key == (i, j):
                return reps
        return ()


def species_of_quiver(q: RationalQuiver, with_conventions=False):
    """The species dual to a rational quiver.

    Indices are vertex orbits ordered by minimal vertex, fields are the
    stabilizers of the minimal-index representatives, and every edge orbit of
    E_ij contributes one summand whose twists transport the representatives
    to the edge endpoints.
    """
    g = q.group
    orbs = q.vertices.orbits()
    vertex_reps = tuple(o[0] for o in orbs)
    orbit_of = [None] * q.vertices.size
    for i, o in enumerate(orbs):
        for v in o:
            orbit_of[v] = i
    vertex_subgroups = [q.vertices.stabilizer(v) for v in vertex_reps]

    edge_orbs = q.edges.orbits()
    bims = {}
    edge_reps = {}
    for orb in edge_orbs:
        e = orb[0]
        i = orbit_of[q.src[e]]
        j = orbit_of[q.tgt[e]]
        h_eps = q.edges.stabilizer(e)
        sigma = _min_transporter(q.vertices, vertex_reps[i], q.src[e])
        tau = _min_transporter(q.vertices, vertex_reps[j], q.tgt[e])
        sigma = _canonical_coset_rep(g, sigma, vertex_subgroups[i])
        tau = _canonical_coset_rep(g, tau, vertex_subgroups[j])
        bims.setdefault((i, j), []).append(BimoduleSummand(h_eps, sigma, tau))
        edge_reps.setdefault((i, j), []).append(e)
    species = EtaleSpecies(g, vertex_subgroups, bims)
    if with_conventions:
        reps = tuple(sorted((key, tuple(v)) for key, v in edge_reps.items()))
        return species, QuiverConventions(vertex_reps, tuple(orbit_of), reps)
    return species


@dataclass(frozen=True)
class SpeciesQuiverLayout:
    """How quiver_of_species laid out its points.

    vertex_cosets[i] lists, per index, the cosets of H_i in order; the quiver
    vertex of coset c in block i is vertex_offset[i] + position.  Same for
    edge blocks, in the iteration order of the species' bimodule summands.
    """
    vertex_offsets: tuple
    vertex_cosets: tuple
    edge_offsets: tuple
    edge_cosets: tuple
    edge_blocks: tuple  # (i, j, summand) per block


def quiver_of_species(s: EtaleSpecies, with_layout=False):
    g = s.group
    vertex_offsets = []
    vertex_cosets = []
    total_v = 0
    for h in s.vertex_subgroups:
        cosets = h.left_cosets()
        vertex_offsets.append(total_v)
        vertex_cosets.append(tuple(cosets))
        total_v += len(cosets)
    v_action = []
    for a in g.elements():
        row = []
        for i, cosets in enumerate(vertex_cosets):
            index = {c: k for k, c in enumerate(cosets)}
            for c in cosets:
                row_target = frozenset(g.mul(a, x) for x in c)
                row.append(vertex_offsets[i] + index[row_target])
        v_action.append(row)
    vertices = GSet(g, total_v, v_action)

    edge_offsets = []
    edge_cosets = []
    edge_blocks = []
    total_e = 0
    for (i, j), summands in sorted(s.bimodules.items()):
        for summand in summands:
            cosets = summand.subgroup.left_cosets()
            edge_offsets.append(total_e)
            edge_cosets.append(tuple(cosets))
            edge_blocks.append((i, j, summand))
            total_e += len(cosets)
    e_action = []
    for a in g.elements():
        row = []
        for b, cosets in enumerate(edge_cosets):
            index = {c: k for k, c in enumerate(cosets)}
            for c in cosets:
                row.append(edge_offsets[b] + index[frozenset(g.mul(a, x) for x in c)])
        e_action.append(row)
    edges = GSet(g, total_e, e_action)

    src = [None] * total_e
    tgt = [None] * total_e
    for b, (i, j, summand) in enumerate(edge_blocks):
        vi_cosets = {c: k for k, c in enumerate(vertex_cosets[i])}
        vj_cosets = {c: k for k, c in enumerate(vertex_cosets[j])}
        hi = s.vertex_subgroups[i]
        hj = s.vertex_subgroups[j]
        for k, c in enumerate(edge_cosets[b]):
            t = min(c)
            src_coset = frozenset(g.mul(g.mul(t, summand.twist_src), h) for h in hi.elements)
            tgt_coset = frozenset(g.mul(g.mul(t, summand.twist_tgt), h) for h in hj.elements)
            src[edge_offsets[b] + k] = vertex_offsets[i] + vi_cosets[src_coset]
            tgt[edge_offsets[b] + k] = vertex_offsets[j] + vj_cosets[tgt_coset]
    q = RationalQuiver(vertices, edges, src, tgt)
    if with_layout:
        return q, SpeciesQuiverLayout(tuple(vertex_offsets), tuple(vertex_cosets),
                                      tuple(edge_offsets), tuple(edge_cosets),
                                      tuple(edge_blocks))
    return q


@dataclass(frozen=True)
class QuiverRoundtripWitness:
    vertex_bijection: tuple
    edge_bijection: tuple


def roundtrip_quiver(q: RationalQuiver) -> QuiverRoundtripWitness:
    """Explicit iso q -> quiver_of_species(species_of_quiver(q)).

    Vertex v = t . v_i goes to the coset t H_i in block i, and edge
    e = t . e_eps to the coset t H_eps; this commutes with src/tgt and the
    Galois action by construction, which is verified before returning.
    """
    g = q.group
    s, conv = species_of_quiver(q, with_conventions=True)
    q2, layout = quiver_of_species(s, with_layout=True)

    fv = [None] * q.vertices.size
    for v in range(q.vertices.size):
        i = conv.vertex_orbit_of[v]
        t = _min_transporter(q.vertices, conv.vertex_reps[i], v)
        coset = frozenset(g.mul(t, h) for h in s.vertex_subgroups[i].elements)
        fv[v] = layout.vertex_offsets[i] + layout.vertex_cosets[i].index(coset)

    fe = [None] * q.edges.size
    position = {}
    for b, (i, j, summand) in enumerate(layout.edge_blocks):
        # recover which original edge orbit this summand came from:
        # layout blocks run through sorted (i, j) keys in summand order,
        # matching the per-key representative lists in the conventions
        k = position.get((i, j), 0)
        position[(i, j)] = k + 1
        e_eps = conv.edge_reps_of(i, j)[k]
        for e in q.edges.orbit_of(e_eps):
            t = _min_transporter(q.edges, e_eps, e)
            coset = frozenset(g.mul(t, h) for h in summand.subgroup.elements)
            fe[e] = layout.edge_offsets[b] + layout.edge_cosets[b].index(coset)

    if None in fv or None in fe or len(set(fv)) != q2.vertices.size \
            or len(set(fe)) != q2.edges.size:
        raise IsoSearchFailed("round-trip maps are not bijections")
    for e in range(q.edges.size):
        if q2.src[fe[e]] != fv[q.src[e]] or q2.tgt[fe[e]] != fv[q.tgt[e]]:
            raise IsoSearchFailed(f"round-trip witness breaks src/tgt at edge {e}")
    for a in g.elements():
        for v in range(q.vertices.size):
            if fv[q.vertices.apply(a, v)] != q2.vertices.apply(a, fv[v]):
                raise IsoSearchFailed("round-trip witness is not equivariant on vertices")
        for e in range(q.edges.size):
            if fe[q.edges.apply(a, e)] != q2.edges.apply(a, fe[e]):
                raise IsoSearchFailed("round-trip witness is not equivariant on edges")
    return QuiverRoundtripWitness(tuple(fv), tuple(fe))


@dataclass(frozen=True)
class SpeciesRoundtripWitness:
    index_bijection: tuple
    field_isos: tuple      # per index: identity of subgroups (checked)
    summand_matching: tuple


def roundtrip_species(s: EtaleSpecies) -> SpeciesRoundtripWitness:
    """Explicit iso s -> species_of_quiver(quiver_of_species(s)).

    With minimal-index conventions the recomputed species is literally equal:
    block i of the coset quiver is one orbit whose minimal point is the coset
    of the identity, so the recomputed stabilizer is H_i itself and the twist
    cosets canonicalize to the stored representatives.
    """
    q = quiver_of_species(s)
    s2 = species_of_quiver(q)
    if s2.n_indices != s.n_indices:
        raise IsoSearchFailed("index sets differ after round trip")
    index_bij = tuple(range(s.n_indices))
    for i in range(s.n_indices):
        if s2.vertex_subgroups[i] != s.vertex_subgroups[i]:
            raise IsoSearchFailed(f"vertex field mismatch at index {i}")
    matching = []
    for (i, j), summands in sorted(s.bimodules.items()):
        other = s2.summands(i, j)
        if len(other) != len(summands):
            raise IsoSearchFailed(f"summand count mismatch at ({i},{j})")
        for k, summand in enumerate(summands):
            cand = other[k]
            if (cand.subgroup != summand.subgroup
                    or cand.twist_src != summand.twist_src
                    or cand.twist_tgt != summand.twist_tgt):
                raise IsoSearchFailed(f"summand data mismatch at ({i},{j})[{k}]")
            matching.append(((i, j, k), (i, j, k)))
    return SpeciesRoundtripWitness(index_bij, tuple(index_bij), tuple(matching))


def species_base_change(s: EtaleSpecies, sub: Subgroup) -> EtaleSpecies:
    """Base change along the fixed field of the subgroup.

    Computed by transporting through the associated quiver: the vertex-field
    decomposition L_i (x) N = prod L'_j corresponds exactly to the H-orbit
    decomposition of the coset space G/H_i.
    """
    return species_of_quiver(quiver_base_change(quiver_of_species(s), sub))


def species_restrict(s: EtaleSpecies, sub: Subgroup) -> EtaleSpecies:
    """Restriction to the base field, via the associated quiver."""
    return species_of_quiver(quiver_restrict(quiver_of_species(s), sub))


def species_hom_count(s1: EtaleSpecies, s2: EtaleSpecies) -> int:
    """Number of species morphisms s1 -> s2 (contravariantly, quiver homs
    of the associated quivers in the opposite direction)."""
    from .quiver import quiver_homs

    return len(quiver_homs(quiver_of_species(s2), quiver_of_species(s1)))


def species_adjunction_check(s_sub: EtaleSpecies, sub: Subgroup,
                             s_parent: EtaleSpecies):
    """Verify the restriction/base-change adjunction by enumeration.

    Through the anti-equivalence the quiver-side bijection
    Hom(restrict q_E, q_K) = Hom(q_E, base_change q_K) becomes
    Hom(s_K, restrict s_E) = Hom(base_change s_K, s_E); both counts are
    enumerated on the quiver side and returned as (lhs, rhs)."""
    lhs = species_hom_count(s_parent, species_restrict(s_sub, sub))
    rhs = species_hom_count(species_base_change(s_parent, sub), s_sub)
    return lhs, rhs
