"""Finite groups by multiplication table and finite G-sets.

Points are dense integer indices; orbit representatives are always the
minimal index, and coset spaces list cosets sorted by their minimal element,
so every derived structure is deterministic.
"""

from __future__ import annotations

from itertools import product


class FiniteGroup:
    """Group on elements 0..n-1 given by an explicit multiplication table."""

    def __init__(self, table, generators=None):
        table = tuple(tuple(row) for row in table)
        n = len(table)
        for row in table:
            if len(row) != n or sorted(row) != list(range(n)):
                raise ValueError("table rows must be permutations of 0..n-1")
        identity = None
        for e in range(n):
            if all(table[e][x] == x and table[x][e] == x for x in range(n)):
                identity = e
                break
        if identity is None:
            raise ValueError("no identity element")
        for a, b, c in product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise ValueError("table is not associative")
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if table[a][b] == identity:
                    inv[a] = b
                    break
            if inv[a] is None:
                raise ValueError(f"element {a} has no inverse")
        self.table = table
        self.order = n
        self.identity = identity
        self.inverse_table = tuple(inv)
        self.generators = tuple(generators) if generators is not None else self._minimal_generators()

    def _minimal_generators(self):
        gens = []
        span = {self.identity}
        for g in range(self.order):
            if g in span:
                continue
            gens.append(g)
            frontier = set(span) | {g}
            closure = set(span)
            while frontier:
                closure |= frontier
                frontier = {self.mul(a, b) for a in closure for b in closure} - closure
            span = closure
            if len(span) == self.order:
                break
        return tuple(gens)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse_table[a]

    def elements(self):
        return range(self.order)

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"

    @staticmethod
    def trivial() -> "FiniteGroup":
        return FiniteGroup([[0]], generators=())

    @staticmethod
    def cyclic(n: int) -> "FiniteGroup":
        table = [[(i + j) % n for j in range(n)] for i in range(n)]
        return FiniteGroup(table, generators=(1,) if n > 1 else ())

    @staticmethod
    def symmetric(n: int) -> "FiniteGroup":
        from itertools import permutations

        perms = sorted(permutations(range(n)))
        index = {p: i for i, p in enumerate(perms)}
        table = [[index[tuple(p[q[k]] for k in range(n))] for q in perms] for p in perms]
        return FiniteGroup(table)


C2 = FiniteGroup.cyclic(2)


class Subgroup:
    """Subset of a FiniteGroup closed under multiplication and inverse."""

    def __init__(self, parent: FiniteGroup, elements):
        elements = frozenset(elements)
        if parent.identity not in elements:
            raise ValueError("subgroup must contain the identity")
        for a in elements:
            if parent.inv(a) not in elements:
                raise ValueError("subgroup not closed under inverse")
            for b in elements:
                if parent.mul(a, b) not in elements:
                    raise ValueError("subgroup not closed under multiplication")
        self.parent = parent
        self.elements = elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self.elements

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.parent == other.parent
                and self.elements == other.elements)

    def __hash__(self):
        return hash((self.parent, self.elements))

    def __repr__(self):
        return f"Subgroup({sorted(self.elements)})"

    def __le__(self, other: "Subgroup") -> bool:
        return self.parent == other.parent and self.elements <= other.elements

    def left_cosets(self):
        """Left cosets gH sorted by minimal element; the coset of 1 is first."""
        g = self.parent
        seen = set()
        cosets = []
        for a in g.elements():
            if a in seen:
                continue
            coset = frozenset(g.mul(a, h) for h in self.elements)
            seen |= coset
            cosets.append(coset)
        return sorted(cosets, key=min)

    def conjugate(self, g: int) -> "Subgroup":
        p = self.parent
        return Subgroup(p, {p.mul(p.mul(g, h), p.inv(g)) for h in self.elements})

    def as_group(self):
        """(FiniteGroup on the sorted elements, embedding list into the parent)."""
        embed = sorted(self.elements)
        pos = {g: i for i, g in enumerate(embed)}
        table = [[pos[self.parent.mul(a, b)] for b in embed] for a in embed]
        return FiniteGroup(table), embed

    @staticmethod
    def full(group: FiniteGroup) -> "Subgroup":
        return Subgroup(group, range(group.order))

    @staticmethod
    def trivial_in(group: FiniteGroup) -> "Subgroup":
        return Subgroup(group, {group.identity})


class GSet:
    """Finite set 0..size-1 with a left action of a FiniteGroup."""

    def __init__(self, group: FiniteGroup, size: int, action):
        action = tuple(tuple(row) for row in action)
        if len(action) != group.order:
            raise ValueError("action must have one row per group element")
        for row in action:
            if len(row) != size or sorted(row) != list(range(size)):
                raise ValueError("each group element must act by a permutation")
        e = group.identity
        for x in range(size):
            if action[e][x] != x:
                raise ValueError("identity must act trivially")
        for g in group.elements():
            for h in group.elements():
                gh = group.mul(g, h)
                for x in range(size):
                    if action[g][action[h][x]] != action[gh][x]:
                        raise ValueError("action is not compatible with the group law")
        self.group = group
        self.size = size
        self.action = action

    def apply(self, g: int, x: int) -> int:
        return self.action[g][x]

    def orbit_of(self, x: int) -> tuple:
        return tuple(sorted({self.apply(g, x) for g in self.group.elements()}))

    def orbits(self) -> list:
        seen = set()
        out = []
        for x in range(self.size):
            if x in seen:
                continue
            orb = self.orbit_of(x)
            seen |= set(orb)
            out.append(orb)
        return out

    def stabilizer(self, p: int) -> Subgroup:
        return Subgroup(self.group,
                        {g for g in self.group.elements() if self.apply(g, p) == p})

    def transporter(self, x: int, y: int):
        """Sorted list of g with g.x = y (a coset of the stabilizer)."""
        return sorted(g for g in self.group.elements() if self.apply(g, x) == y)

    def restrict_to(self, sub: Subgroup) -> "GSet":
        """Same points, action restricted to the subgroup (as its own group)."""
        hgrp, embed = sub.as_group()
        action = [self.action[embed[h]] for h in range(hgrp.order)]
        return GSet(hgrp, self.size, action)

    def __eq__(self, other):
        return (isinstance(other, GSet) and self.group == other.group
                and self.size == other.size and self.action == other.action)

    def __hash__(self):
        return hash((self.group, self.size, self.action))

    def __repr__(self):
        return f"GSet(|G|={self.group.order}, size={self.size})"

    @staticmethod
    def trivial(group: FiniteGroup, size: int) -> "GSet":
        return GSet(group, size, [list(range(size))] * group.order)

    @staticmethod
    def from_generator_perms(group: FiniteGroup, size: int, perms) -> "GSet":
        """Action given by one permutation per designated generator."""
        if len(perms) != len(group.generators):
            raise ValueError("need one permutation per generator")
        known = {group.identity: tuple(range(size))}
        for g, p in zip(group.generators, perms):
            known[g] = tuple(p)
        changed = True
        while changed and len(known) < group.order:
            changed = False
            for g in list(known):
                for h in list(known):
                    gh = group.mul(g, h)
                    if gh not in known:
                        known[gh] = tuple(known[g][known[h][x]] for x in range(size))
                        changed = True
        if len(known) < group.order:
            raise ValueError("generators do not generate the group")
        return GSet(group, size, [known[g] for g in group.elements()])

    @staticmethod
    def coset_space(sub: Subgroup) -> "GSet":
        """G acting on the left cosets of the subgroup."""
        g = sub.parent
        cosets = sub.left_cosets()
        index = {c: i for i, c in enumerate(cosets)}
        action = [[index[frozenset(g.mul(a, x) for x in c)] for c in cosets]
                  for a in g.elements()]
        return GSet(g, len(cosets), action)


def orbits(x: GSet) -> list:
    return x.orbits()


def stabilizer(x: GSet, p: int) -> Subgroup:
    return x.stabilizer(p)


def induce(x: GSet, sub: Subgroup):
    """Balanced product G x_H X for the H-set x, H embedded in G via sub.

    Returns (induced G-set, unit map X -> induced sending p to [(1, p)]).
    Classes are ordered by their minimal (g, p) pair, so [(1, p)] classes
    come first in p-order.
    """
    hgrp, embed = sub.as_group()
    if x.group != hgrp:
        raise ValueError("x must be a set over the given subgroup")
    g = sub.parent
    pairs = [(a, p) for a in g.elements() for p in range(x.size)]
    # (a * emb(h), p) ~ (a, h.p)
    parent = {pr: pr for pr in pairs}

    def find(pr):
        while parent[pr] != pr:
            parent[pr] = parent[parent[pr]]
            pr = parent[pr]
        return pr

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for a in g.elements():
        for p in range(x.size):
            for h in range(hgrp.order):
                union((g.mul(a, embed[h]), p), (a, x.apply(h, p)))
    reps = sorted({find(pr) for pr in pairs})
    index = {r: i for i, r in enumerate(reps)}
    size = len(reps)
    expected = (g.order // sub.order) * x.size
    if size != expected:
        raise AssertionError("balanced product has wrong cardinality")
    action = [[index[find((g.mul(b, a), p))] for (a, p) in reps] for b in g.elements()]
    unit = [index[find((g.identity, p))] for p in range(x.size)]
    return GSet(g, size, action), unit


def equivariant_maps(x: GSet, y: GSet) -> list:
    """All G-maps x -> y, each as a tuple of point images."""
    if x.group != y.group:
        raise ValueError("G-sets over different groups")
    g = x.group
    orbs = x.orbits()
    choices = []
    for orb in orbs:
        rep = orb[0]
        stab = x.stabilizer(rep)
        targets = [q for q in range(y.size)
                   if all(y.apply(h, q) == q for h in stab.elements)]
        choices.append((rep, targets))
    maps = []
    for picks in product(*(t for _, t in choices)):
        f = [None] * x.size
        ok = True
        for (rep, _), q in zip(choices, picks):
            for a in g.elements():
                xx, yy = x.apply(a, rep), y.apply(a, q)
                if f[xx] is None:
                    f[xx] = yy
                elif f[xx] != yy:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            maps.append(tuple(f))
    return maps
