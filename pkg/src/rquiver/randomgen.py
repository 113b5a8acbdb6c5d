"""Seeded generators of random quivers, species representations and
nilpotent rational representations, used by the property suites."""

from __future__ import annotations

from fractions import Fraction

from .exact import QuadElement, QuadMatrix, inverse, rank
from .gsets import C2, FiniteGroup, GSet, Subgroup
from .quiver import RationalQuiver, cyclic_quiver, gelfand_quiver
from .reps import QuiverRep, SpeciesRep, summand_domain_cols


def random_quad(rng, span=3, d=-1):
    return QuadElement(Fraction(rng.randint(-span, span)),
                       Fraction(rng.randint(-span, span)), d)


def random_matrix(rng, rows, cols, rational=False, span=3, d=-1):
    ent = []
    for _ in range(rows * cols):
        if rational:
            ent.append(QuadElement(Fraction(rng.randint(-span, span)), 0, d))
        else:
            ent.append(random_quad(rng, span, d))
    return QuadMatrix(rows, cols, ent, d)


def random_invertible(rng, n, span=2, rational=False, d=-1):
    while True:
        m = random_matrix(rng, n, n, rational, span, d)
        if rank(m) == n:
            return m


def strictly_upper(rng, n, span=2, rational=False, d=-1):
    zero = QuadElement(0, 0, d)
    ent = []
    for i in range(n):
        for j in range(n):
            if j > i:
                ent.append(QuadElement(Fraction(rng.randint(-span, span)),
                                       0 if rational else Fraction(rng.randint(-span, span)),
                                       d))
            else:
                ent.append(zero)
    return QuadMatrix(n, n, ent, d)


def random_unimodular(rng, n, span=2, rational=False, d=-1):
    """Invertible by construction: unit lower times unit upper triangular."""
    def unit(lower):
        ent = []
        for i in range(n):
            for j in range(n):
                if i == j:
                    ent.append(QuadElement(1, 0, d))
                elif (j < i) == lower:
                    ent.append(QuadElement(
                        Fraction(rng.randint(-span, span)),
                        0 if rational else Fraction(rng.randint(-span, span)), d))
                else:
                    ent.append(QuadElement(0, 0, d))
        return QuadMatrix(n, n, ent, d)

    return unit(True) * unit(False)


def random_nilpotent(rng, n, span=2, rational=False, d=-1, fast=False):
    g = (random_unimodular if fast else random_invertible)(rng, n, span, rational, d)
    return g * strictly_upper(rng, n, span, rational, d) * inverse(g)


def random_c2_quiver(rng, max_v=4, max_e=6):
    """Random quiver over C2: fixed/swapped orbits with equivariant endpoints."""
    while True:
        n_fixed_v = rng.randint(0, max_v // 2)
        n_swap_v = rng.randint(0 if n_fixed_v else 1, max_v // 2)
        nv = n_fixed_v + 2 * n_swap_v
        if nv == 0:
            continue
        perm = list(range(n_fixed_v))
        for k in range(n_swap_v):
            perm += [n_fixed_v + 2 * k + 1, n_fixed_v + 2 * k]
        vertices = GSet(C2, nv, [list(range(nv)), perm])
        n_fixed_e = rng.randint(0, max_e // 2)
        n_swap_e = rng.randint(0, max_e // 2)
        ne = n_fixed_e + 2 * n_swap_e
        eperm = list(range(n_fixed_e))
        for k in range(n_swap_e):
            eperm += [n_fixed_e + 2 * k + 1, n_fixed_e + 2 * k]
        edges = GSet(C2, ne, [list(range(ne)), eperm])
        src = [None] * ne
        tgt = [None] * ne
        ok = True
        for orb in edges.orbits():
            e = orb[0]
            stab = edges.stabilizer(e)
            cand = [v for v in range(nv)
                    if all(vertices.apply(h, v) == v for h in stab.elements)]
            if not cand:
                ok = False
                break
            s, t = rng.choice(cand), rng.choice(cand)
            for g in C2.elements():
                src[edges.apply(g, e)] = vertices.apply(g, s)
                tgt[edges.apply(g, e)] = vertices.apply(g, t)
        if ok:
            return RationalQuiver(vertices, edges, src, tgt)


def _all_subgroups(group):
    from itertools import combinations

    found = []
    for r in range(1, group.order + 1):
        if group.order % r:
            continue
        for combo in combinations(range(group.order), r):
            if group.identity not in combo:
                continue
            try:
                found.append(Subgroup(group, combo))
            except ValueError:
                continue
    return found


def random_group_quiver(rng, group: FiniteGroup, max_v=4, max_e=6):
    """Random quiver over an arbitrary finite group, as unions of coset spaces."""
    pool = _all_subgroups(group)

    def coset_union(blocks):
        cosets_all = [s.left_cosets() for s in blocks]
        size = sum(len(c) for c in cosets_all)
        action = []
        for a in group.elements():
            row = []
            off = 0
            for cs in cosets_all:
                index = {c: k for k, c in enumerate(cs)}
                for c in cs:
                    row.append(off + index[frozenset(group.mul(a, x) for x in c)])
                off += len(cs)
            action.append(row)
        return GSet(group, size, action)

    while True:
        v_blocks = [rng.choice(pool) for _ in range(rng.randint(1, 2))]
        e_blocks = [rng.choice(pool) for _ in range(rng.randint(0, 2))]
        verts = coset_union(v_blocks)
        edges = coset_union(e_blocks)
        if verts.size > max_v or edges.size > max_e:
            continue
        src = [None] * edges.size
        tgt = [None] * edges.size
        ok = True
        for orb in edges.orbits():
            e = orb[0]
            stab = edges.stabilizer(e)
            cand = [v for v in range(verts.size)
                    if all(verts.apply(h, v) == v for h in stab.elements)]
            if not cand:
                ok = False
                break
            s, t = rng.choice(cand), rng.choice(cand)
            for a in group.elements():
                src[edges.apply(a, e)] = verts.apply(a, s)
                tgt[edges.apply(a, e)] = verts.apply(a, t)
        if ok:
            return RationalQuiver(verts, edges, src, tgt)


def random_species_rep(rng, species, max_dim=3, d=-1):
    dims = [rng.randint(0, max_dim) for _ in range(species.n_indices)]
    maps = {}
    for (i, j), summands in species.bimodules.items():
        mats = []
        for summand in summands:
            cols = summand_domain_cols(species, i, j, summand, dims[i])
            rational = species.realized_field(j) == "K"
            mats.append(random_matrix(rng, dims[j], cols, rational, d=d))
        maps[(i, j)] = mats
    return SpeciesRep(species, dims, maps, d)


def change_basis(r: QuiverRep, gs) -> QuiverRep:
    """Transport a representation along invertible per-vertex maps g_v."""
    q = r.quiver
    edges = [gs[q.tgt[e]] * r.edge_maps[e] * inverse(gs[q.src[e]])
             for e in range(q.edges.size)]
    rho = None
    if q.group.order == 2:
        rho = [gs[q.vertices.apply(1, v)] * r.rho[v] * inverse(gs[v]).conj()
               for v in range(q.vertices.size)]
    return QuiverRep(q, r.dims, edges, rho, r.d)


def _nilpotent_factorization(rng, ds, dp, span=2, d=-1):
    """Rational P (ds x dp), Q (dp x ds) with P Q strictly upper triangular."""
    r = rng.randint(0, min(ds, dp, max(ds - 1, 0)))
    zero = QuadElement(0, 0, d)
    p_ent = [[zero] * dp for _ in range(ds)]
    q_ent = [[zero] * ds for _ in range(dp)]
    for i in range(r):
        p_ent[i][i] = QuadElement(1, 0, d)
        q_ent[i][i + 1] = QuadElement(Fraction(rng.randint(1, span)), 0, d)
    # free extra columns of P keep the factors generic without changing P Q
    for i in range(ds):
        for j in range(r, dp):
            p_ent[i][j] = QuadElement(Fraction(rng.randint(-span, span)), 0, d)
    p = QuadMatrix(ds, dp, [x for row in p_ent for x in row], d)
    q = QuadMatrix(dp, ds, [x for row in q_ent for x in row], d)
    return p, q


def random_gelfand_rep(rng, max_dim=3, d=-1) -> QuiverRep:
    """Random nilpotent rational representation of the Gelfand quiver.

    Built in the standard gauge (entrywise-conjugation rational structure),
    where the relation forces the star cycle composite to be a rational
    nilpotent matrix; the composite is prescribed by a strictly triangular
    factorization and then everything is moved to a random basis.
    """
    q = gelfand_quiver()
    ds = rng.randint(0, max_dim)
    dp = rng.randint(0, max_dim)
    p, qq = _nilpotent_factorization(rng, ds, dp, d=d)
    s = random_invertible(rng, ds, rational=True, d=d) if ds else QuadMatrix.zeros(0, 0, d)
    t = random_invertible(rng, dp, d=d) if dp else QuadMatrix.zeros(0, 0, d)
    b_a = s * p * t                      # M(+) -> M(star)
    b_b = inverse(t) * qq * inverse(s) if dp and ds else QuadMatrix.zeros(dp, ds, d)
    if not (ds and dp):
        b_a = QuadMatrix.zeros(ds, dp, d)
    edges = [None] * 4
    edges[0] = b_a            # a+
    edges[1] = b_a.conj()     # a-
    edges[2] = b_b            # b+
    edges[3] = b_b.conj()     # b-
    rho = [QuadMatrix.identity(ds, d), QuadMatrix.identity(dp, d),
           QuadMatrix.identity(dp, d)]
    rep = QuiverRep(q, (ds, dp, dp), edges, rho, d)
    gs = [random_invertible(rng, ds, d=d) if ds else QuadMatrix.zeros(0, 0, d),
          random_invertible(rng, dp, d=d) if dp else QuadMatrix.zeros(0, 0, d),
          random_invertible(rng, dp, d=d) if dp else QuadMatrix.zeros(0, 0, d)]
    return change_basis(rep, gs)


def random_cyclic_rep(rng, max_dim=3, d=-1) -> QuiverRep:
    """Random nilpotent rational representation of the cyclic quiver."""
    q = cyclic_quiver()
    n = rng.randint(0, max_dim)
    if n == 0:
        z = QuadMatrix.zeros(0, 0, d)
        return QuiverRep(q, (0, 0), (z, z), (z, z), d)
    p = random_invertible(rng, n, d=d)
    j = strictly_upper(rng, n, rational=True, d=d)
    b_a = p * j * inverse(p.conj())
    b_b = b_a.conj()
    rho = [QuadMatrix.identity(n, d), QuadMatrix.identity(n, d)]
    rep = QuiverRep(q, (n, n), (b_a, b_b), rho, d)
    gs = [random_invertible(rng, n, d=d), random_invertible(rng, n, d=d)]
    return change_basis(rep, gs)
