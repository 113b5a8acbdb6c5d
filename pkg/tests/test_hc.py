import math
import random
from fractions import Fraction

import pytest

from rquiver.exact import QuadMatrix, nilpotency_exponent
from rquiver.hc import (
    BadParity,
    HCModule,
    NotApplicable,
    OutOfWindow,
    build_example,
    casimir_matrix,
    functor_E,
    hc_hom_space,
    inverse_E,
    normalizations,
    power_product_identity,
    roundtrip_hc,
    validate_hc,
)
from rquiver.quiver import (
    GELFAND_A_MINUS,
    GELFAND_A_PLUS,
    GELFAND_B_MINUS,
    GELFAND_B_PLUS,
    GELFAND_MINUS,
    GELFAND_PLUS,
    GELFAND_STAR,
    gelfand_quiver,
)
from rquiver.randomgen import random_cyclic_rep, random_gelfand_rep
from rquiver.reps import QuiverRep, validate_rep


def pp_ext_rep(ell):
    """Self-extension-like rep: all spaces L^2, b = 1, a = nilpotent."""
    q = gelfand_quiver()
    one = QuadMatrix.identity(2)
    nil = QuadMatrix.from_rows([[0, 1], [0, 0]])
    edges = [None] * 4
    edges[GELFAND_A_PLUS] = nil
    edges[GELFAND_A_MINUS] = nil
    edges[GELFAND_B_PLUS] = one
    edges[GELFAND_B_MINUS] = one
    rep = QuiverRep(q, (2, 2, 2), edges, (one, one, one))
    assert validate_rep(rep).ok
    return rep


# ---------------------------------------------------------------- fixtures

@pytest.mark.parametrize("kind,ell", [
    ("finite", 1), ("finite", 2), ("finite", 3),
    ("discrete", 0), ("discrete", 1), ("discrete", 2),
    ("principal", 1), ("principal", 2), ("principal", 3),
    ("principal_dual", 1), ("principal_dual", 2), ("principal_dual", 3),
])
def test_fixtures_validate(kind, ell):
    m = build_example(kind, ell)
    assert validate_hc(m).ok


def test_finite_dimension_pattern():
    m = build_example("finite", 2)
    assert m.dim(-1) == 1 and m.dim(1) == 1
    assert m.dim(-3) == 0 and m.dim(3) == 0
    assert casimir_matrix(m, 1) == QuadMatrix.identity(1).scale(4)


def test_bad_parity_rejected():
    with pytest.raises(BadParity):
        build_example("principal", 1, epsilon=1)
    build_example("principal", 1, epsilon=0)
    with pytest.raises(NotApplicable):
        build_example("finite", 0)


def test_validator_catches_bracket_break():
    # scale an interior ladder map whose partner is nonzero
    m = build_example("finite", 3)
    broken = HCModule(m.ell, m.epsilon, m.window, m.spaces,
                      {**m.x_maps, 0: m.x_maps[0].scale(2)},
                      m.y_maps, m.rat, m.phi_plus, m.phi_minus)
    rep = validate_hc(broken)
    assert not rep.ok
    assert any(name == "bracket" for name, _ in rep.failures())


def test_validator_catches_zeroed_boundary_map():
    # zeroing b_+ inside the principal module breaks the conjugation swap
    m = build_example("principal", 2)
    broken = HCModule(m.ell, m.epsilon, m.window, m.spaces,
                      {**m.x_maps, 1: m.x_maps[1].scale(0)},
                      m.y_maps, m.rat, m.phi_plus, m.phi_minus)
    rep = validate_hc(broken)
    assert not rep.ok
    assert any(name == "conjugation-swap" for name, _ in rep.failures())


def test_validator_catches_conjugation_break():
    m = build_example("principal", 2)
    bad_rat = dict(m.rat)
    bad_rat[1] = bad_rat[1].scale(QuadMatrix.identity(1).entries[0] * 2)
    broken = HCModule(m.ell, m.epsilon, m.window, m.spaces, m.x_maps,
                      m.y_maps, bad_rat, m.phi_plus, m.phi_minus)
    rep = validate_hc(broken)
    assert not rep.ok


# ---------------------------------------------------------------- casimir

def test_casimir_scalar_on_irreducibles():
    for kind in ("finite", "discrete"):
        for ell in (1, 2, 3):
            m = build_example(kind, ell)
            for w in m.weights():
                if m.dim(w):
                    assert casimir_matrix(m, w) == \
                        QuadMatrix.identity(m.dim(w)).scale(Fraction(ell * ell))


def test_casimir_nilpotent_part_on_extension():
    ell = 2
    m = inverse_E(pp_ext_rep(ell), ell)
    lam = QuadMatrix.identity(2).scale(Fraction(ell * ell))
    seen_nonzero = False
    for w in m.weights():
        dev = casimir_matrix(m, w) - lam
        e = nilpotency_exponent(dev)
        assert e is not None and e <= 2
        if not dev.is_zero():
            seen_nonzero = True
    assert seen_nonzero


def test_casimir_out_of_window():
    m = build_example("finite", 2)
    with pytest.raises(OutOfWindow):
        casimir_matrix(m, m.window + 2)


# ---------------------------------------------------------------- powers

def test_power_product_constants():
    # scalar = prod (ell^2 - (k-2j)^2) = 4^(ell-1) ((ell-1)!)^2 at k = ell-2
    for ell in (1, 2, 3, 4, 5):
        m = build_example("principal", ell)
        ok, scalar, lhs, rhs = power_product_identity(m, ell - 1, ell - 2)
        assert ok
        assert scalar == Fraction(4 ** (ell - 1)) * math.factorial(ell - 1) ** 2
    m = build_example("principal", 2)
    ok, scalar, _, _ = power_product_identity(m, 1, 0)
    assert ok and scalar == 4
    m = build_example("principal", 3)
    ok, scalar, _, _ = power_product_identity(m, 2, 1)
    assert ok and scalar == 64
    ok, scalar, lhs, rhs = power_product_identity(m, 0, 1)
    assert ok and scalar == 1 and lhs.is_identity()


def test_power_product_on_extension():
    ell = 2
    m = inverse_E(pp_ext_rep(ell), ell)
    ok, _, _, _ = power_product_identity(m, 1, 0)
    assert ok


# ---------------------------------------------------------------- norms

def test_normalizations_gamma():
    for ell in (1, 2, 3, 4):
        m = build_example("principal", ell)
        norms = normalizations(m)
        assert norms.gamma_star == math.factorial(ell - 1)


def test_normalizations_finite_exact_identity():
    for ell in (1, 2, 3):
        m = build_example("finite", ell)
        norms = normalizations(m)
        assert (norms.x_star * norms.y_star).is_identity()


def test_normalizations_t_unipotent_with_nilpotent_part():
    ell = 2
    m = inverse_E(pp_ext_rep(ell), ell)
    norms = normalizations(m)
    dev = norms.t_minus - QuadMatrix.identity(2)
    assert not dev.is_zero()
    assert nilpotency_exponent(dev) is not None


def test_normalizations_not_applicable():
    m = build_example("discrete", 0)
    with pytest.raises(NotApplicable):
        normalizations(m)


# ---------------------------------------------------------------- functor E

def test_E_finite():
    for ell in (1, 2, 3):
        m = build_example("finite", ell)
        res = functor_E(m)
        r = res.rep
        assert r.dims[GELFAND_PLUS] == 0 and r.dims[GELFAND_MINUS] == 0
        assert r.dims[GELFAND_STAR] == 1
        # phi_star = c o X* with X* = identity here
        assert r.rho[GELFAND_STAR] == res.x_star
        assert r.rho[GELFAND_STAR].is_identity()


def test_E_discrete():
    for ell in (1, 2):
        m = build_example("discrete", ell)
        r = functor_E(m).rep
        assert r.dims[GELFAND_STAR] == 0
        assert r.rho[GELFAND_PLUS].is_identity()   # phi_+- = c
        assert r.rho[GELFAND_MINUS].is_identity()
        assert all(mat.is_zero() for mat in r.edge_maps)


def test_E_discrete_cyclic_block():
    m = build_example("discrete", 0)
    r = functor_E(m).rep
    assert r.dims == (1, 1)
    assert all(mat.is_zero() for mat in r.edge_maps)
    assert r.rho[0].is_identity() and r.rho[1].is_identity()


def test_E_principal_pattern():
    from rquiver.exact import rank

    for ell in (1, 2, 3):
        r = functor_E(build_example("principal", ell)).rep
        assert r.edge_maps[GELFAND_A_PLUS].is_zero()
        assert r.edge_maps[GELFAND_A_MINUS].is_zero()
        assert rank(r.edge_maps[GELFAND_B_PLUS]) == 1
        assert rank(r.edge_maps[GELFAND_B_MINUS]) == 1
        assert r.rho[GELFAND_PLUS].is_identity()
        assert r.rho[GELFAND_STAR].is_identity()
        dual = functor_E(build_example("principal_dual", ell)).rep
        assert dual.edge_maps[GELFAND_B_PLUS].is_zero()
        assert dual.edge_maps[GELFAND_B_MINUS].is_zero()
        assert rank(dual.edge_maps[GELFAND_A_PLUS]) == 1
        assert rank(dual.edge_maps[GELFAND_A_MINUS]) == 1


def test_E_output_relation_and_nilpotency():
    # outputs always satisfy the literal relation and nilpotency
    rng = random.Random(123)
    for _ in range(10):
        v = random_gelfand_rep(rng, max_dim=2)
        m = inverse_E(v, 2)
        r = functor_E(m).rep
        rep = validate_rep(r)
        assert rep.ok  # includes literal relation, cocycle, nilpotency


def test_E_stabilization_nontrivial_on_extension():
    ell = 2
    m = inverse_E(pp_ext_rep(ell), ell)
    res = functor_E(m)
    assert res.iterations >= 1
    assert validate_rep(res.rep).ok


# ---------------------------------------------------------------- inverse

def test_inverse_E_discrete_shape():
    ell = 2
    d_rep = functor_E(build_example("discrete", ell)).rep
    m = inverse_E(d_rep, ell)
    for w in m.weights():
        if abs(w) <= ell - 1:
            assert m.dim(w) == 0
        else:
            assert m.dim(w) == 1


def test_inverse_E_zero_rep():
    q = gelfand_quiver()
    z = QuadMatrix.zeros(0, 0)
    r = QuiverRep(q, (0, 0, 0), (z, z, z, z), (z, z, z))
    m = inverse_E(r, 1)
    assert all(m.dim(w) == 0 for w in m.weights())


def test_inverse_E_bracket_across_window():
    rng = random.Random(5)
    v = random_gelfand_rep(rng, max_dim=2)
    m = inverse_E(v, 3)
    for w in m.weights():
        lhs = (m.x_at(w - 2) * m.y_at(w) - m.y_at(w + 2) * m.x_at(w)).scale(4)
        assert lhs == QuadMatrix.identity(m.dim(w)).scale(Fraction(4 * w))


def test_E_then_inverse_E_window_identity_on_fixtures():
    for kind in ("finite", "discrete", "principal", "principal_dual"):
        for ell in (1, 2):
            m = build_example(kind, ell)
            r = functor_E(m).rep
            back = inverse_E(r, ell)
            assert back.spaces == m.spaces
            assert back.x_maps == m.x_maps
            assert back.y_maps == m.y_maps
            assert back.rat == m.rat


# ---------------------------------------------------------------- roundtrip

def test_roundtrip_fixtures_constructive():
    for kind in ("finite", "discrete", "principal", "principal_dual"):
        for ell in (1, 2, 3):
            if kind == "discrete" and ell == 0:
                continue
            v = functor_E(build_example(kind, ell)).rep
            rt = roundtrip_hc(v, ell)
            assert rt.path == "constructive"


def test_roundtrip_random_gelfand():
    rng = random.Random(31)
    for _ in range(8):
        ell = rng.randint(1, 3)
        v = random_gelfand_rep(rng, max_dim=2)
        rt = roundtrip_hc(v, ell)
        assert rt.path.startswith("constructive")


def test_roundtrip_random_cyclic():
    rng = random.Random(41)
    for _ in range(8):
        v = random_cyclic_rep(rng, max_dim=3)
        rt = roundtrip_hc(v, 0)
        assert rt.path == "constructive"


# ---------------------------------------------------------------- hom

def test_hc_hom_dimensions():
    ell = 2
    mods = {k: build_example(k, ell) for k in
            ("finite", "discrete", "principal", "principal_dual")}
    dim = {}
    for a in mods:
        for b in mods:
            k, l, _ = hc_hom_space(mods[a], mods[b])
            assert k == l
            dim[(a, b)] = k
    assert dim[("finite", "finite")] == 1
    assert dim[("discrete", "discrete")] == 2  # endomorphisms by Q(sqrt(-1))
    assert dim[("principal", "finite")] == 1   # the quotient map
    assert dim[("finite", "principal")] == 0
    assert dim[("discrete", "principal")] == 2  # one inclusion per summand
    assert dim[("principal", "discrete")] == 0
    assert dim[("finite", "principal_dual")] == 1
    assert dim[("principal_dual", "discrete")] == 2
    assert dim[("discrete", "principal_dual")] == 0
    assert dim[("principal", "principal")] == 1
    assert dim[("principal", "principal_dual")] == 1
    assert dim[("principal_dual", "principal")] == 2


def test_hc_hom_matches_quiver_hom():
    from rquiver.reps import hom_space

    ell = 2
    kinds = ("finite", "discrete", "principal", "principal_dual")
    mods = {k: build_example(k, ell) for k in kinds}
    reps = {k: functor_E(mods[k]).rep for k in kinds}
    for a in kinds:
        for b in kinds:
            hc_dim = hc_hom_space(mods[a], mods[b])[0]
            quiver_dim = hom_space(reps[a], reps[b]).dim_K
            assert hc_dim == quiver_dim, (a, b)
