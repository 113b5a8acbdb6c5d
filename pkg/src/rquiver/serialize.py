"""JSON interchange for every value the CLI reads or writes.

Every document carries "version": 1 and is rejected otherwise.  Elements of
Q(sqrt(d)) are 4-tuples [a_num, a_den, b_num, b_den] under a field header
{"d": [num, den]}; matrices are {"rows", "cols", "entries"}; G-sets are
{"size", "action"} with one permutation per canonical group generator.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import QuadElement, QuadMatrix
from .gsets import FiniteGroup, GSet, Subgroup
from .quiver import RationalQuiver
from .reps import QuiverRep, SpeciesRep
from .species import BimoduleSummand, EtaleSpecies

SCHEMA_VERSION = 1


class ParseError(ValueError):
    pass


def _check_version(data):
    if not isinstance(data, dict) or data.get("version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported or missing schema version "
                         f"(expected {SCHEMA_VERSION})")


def dump_fraction(x) -> list:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def load_fraction(data) -> Fraction:
    return Fraction(int(data[0]), int(data[1]))


def dump_element(x: QuadElement) -> list:
    return [x.a.numerator, x.a.denominator, x.b.numerator, x.b.denominator]


def load_element(data, d) -> QuadElement:
    return QuadElement(Fraction(int(data[0]), int(data[1])),
                       Fraction(int(data[2]), int(data[3])), d)


def dump_matrix(m: QuadMatrix) -> dict:
    return {"rows": m.rows, "cols": m.cols,
            "entries": [dump_element(x) for x in m.entries]}


def load_matrix(data, d) -> QuadMatrix:
    return QuadMatrix(int(data["rows"]), int(data["cols"]),
                      [load_element(e, d) for e in data["entries"]], d)


def dump_group(g: FiniteGroup) -> dict:
    return {"order": g.order, "table": [list(row) for row in g.table]}


def load_group(data) -> FiniteGroup:
    return FiniteGroup(data["table"])


def dump_gset(x: GSet) -> dict:
    canonical = FiniteGroup(x.group.table)  # canonical generators
    return {"size": x.size,
            "action": [list(x.action[g]) for g in canonical.generators]}


def load_gset(data, group: FiniteGroup) -> GSet:
    canonical = FiniteGroup(group.table)
    return GSet.from_generator_perms(canonical, int(data["size"]),
                                     [list(p) for p in data["action"]])


def dump_quiver(q: RationalQuiver) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "group": dump_group(q.group),
        "vertices": dump_gset(q.vertices),
        "edges": dump_gset(q.edges),
        "src": list(q.src),
        "tgt": list(q.tgt),
        "relations": [[list(p), list(qq)] for p, qq in q.relations],
    }


def load_quiver(data) -> RationalQuiver:
    _check_version(data)
    group = load_group(data["group"])
    vertices = load_gset(data["vertices"], group)
    edges = load_gset(data["edges"], group)
    return RationalQuiver(vertices, edges, data["src"], data["tgt"],
                          [(tuple(p), tuple(qq)) for p, qq in data["relations"]])


def dump_species(s: EtaleSpecies) -> dict:
    fields = []
    for i, h in enumerate(s.vertex_subgroups):
        entry = {"subgroup": sorted(h.elements)}
        if s.is_quadratic():
            entry["realization"] = "Q" if s.realized_field(i) == "K" else "Q(sqrt d)"
        else:
            entry["realization"] = None
        fields.append(entry)
    bims = []
    for (i, j), summands in sorted(s.bimodules.items()):
        bims.append({
            "from": i, "to": j,
            "summands": [{"subgroup": sorted(x.subgroup.elements),
                          "twist_src": x.twist_src, "twist_tgt": x.twist_tgt}
                         for x in summands],
        })
    return {"version": SCHEMA_VERSION, "group": dump_group(s.group),
            "indices": s.n_indices, "fields": fields, "bimodules": bims}


def load_species(data) -> EtaleSpecies:
    _check_version(data)
    group = load_group(data["group"])
    subs = [Subgroup(group, f["subgroup"]) for f in data["fields"]]
    bims = {}
    for b in data["bimodules"]:
        bims[(int(b["from"]), int(b["to"]))] = [
            BimoduleSummand(Subgroup(group, x["subgroup"]),
                            int(x["twist_src"]), int(x["twist_tgt"]))
            for x in b["summands"]]
    return EtaleSpecies(group, subs, bims)


def dump_rep(r: QuiverRep) -> dict:
    out = {
        "version": SCHEMA_VERSION,
        "d": dump_fraction(r.d),
        "quiver": dump_quiver(r.quiver),
        "dims": list(r.dims),
        "edges": [dump_matrix(m) for m in r.edge_maps],
    }
    if r.rho is not None:
        out["semilinear"] = [dump_matrix(m) for m in r.rho]
    return out


def load_rep(data) -> QuiverRep:
    _check_version(data)
    d = load_fraction(data["d"])
    quiver = load_quiver(data["quiver"])
    edges = [load_matrix(m, d) for m in data["edges"]]
    rho = None
    if "semilinear" in data:
        rho = [load_matrix(m, d) for m in data["semilinear"]]
    return QuiverRep(quiver, data["dims"], edges, rho, d)


def dump_species_rep(w: SpeciesRep) -> dict:
    maps = []
    for (i, j), mats in sorted(w.maps.items()):
        maps.append({"from": i, "to": j,
                     "matrices": [dump_matrix(m) for m in mats]})
    return {"version": SCHEMA_VERSION, "d": dump_fraction(w.d),
            "species": dump_species(w.species), "dims": list(w.dims),
            "maps": maps}


def load_species_rep(data) -> SpeciesRep:
    _check_version(data)
    d = load_fraction(data["d"])
    species = load_species(data["species"])
    maps = {}
    for entry in data["maps"]:
        maps[(int(entry["from"]), int(entry["to"]))] = [
            load_matrix(m, d) for m in entry["matrices"]]
    return SpeciesRep(species, data["dims"], maps, d)


def dump_hc(m) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "d": dump_fraction(m.d),
        "ell": m.ell,
        "epsilon": m.epsilon,
        "window": m.window,
        "spaces": {str(w): m.spaces[w] for w in sorted(m.spaces)},
        "X": {str(w): dump_matrix(m.x_maps[w]) for w in sorted(m.x_maps)},
        "Y": {str(w): dump_matrix(m.y_maps[w]) for w in sorted(m.y_maps)},
        "rational": {str(w): dump_matrix(m.rat[w]) for w in sorted(m.rat)},
        "tails": {"plus": dump_matrix(m.phi_plus),
                  "minus": dump_matrix(m.phi_minus)},
    }


def load_hc(data):
    from .hc import HCModule

    _check_version(data)
    d = load_fraction(data["d"])
    return HCModule(
        int(data["ell"]), int(data["epsilon"]), int(data["window"]),
        {int(w): int(v) for w, v in data["spaces"].items()},
        {int(w): load_matrix(m, d) for w, m in data["X"].items()},
        {int(w): load_matrix(m, d) for w, m in data["Y"].items()},
        {int(w): load_matrix(m, d) for w, m in data["rational"].items()},
        load_matrix(data["tails"]["plus"], d),
        load_matrix(data["tails"]["minus"], d),
        d,
    )


def dump_matrix_file(m: QuadMatrix, gamma=None) -> dict:
    out = {"version": SCHEMA_VERSION, "d": dump_fraction(m.d),
           "matrix": dump_matrix(m)}
    if gamma is not None:
        out["gamma"] = dump_fraction(gamma)
    return out


def load_matrix_file(data):
    _check_version(data)
    d = load_fraction(data["d"])
    gamma = load_fraction(data["gamma"]) if "gamma" in data else None
    return load_matrix(data["matrix"], d), gamma


def dump_stabilization(p) -> dict:
    return {"version": SCHEMA_VERSION, "d": dump_fraction(p.phi_plus.d),
            "phi_plus": dump_matrix(p.phi_plus),
            "phi_minus": dump_matrix(p.phi_minus), "tau": p.tau}


def load_stabilization(data):
    from .unipotent import StabilizationProblem

    _check_version(data)
    d = load_fraction(data["d"])
    return StabilizationProblem(load_matrix(data["phi_plus"], d),
                                load_matrix(data["phi_minus"], d),
                                int(data.get("tau", 1)))
