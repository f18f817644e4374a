"""Loop invariant, Johnson maps, twist formulas, and the Goldman-side action."""

import random

import pytest

from twistlog.cyclic import cyclic_n, is_nu_invariant
from twistlog.derivation import apply as dapply, graded_component
from twistlog.expansion import (
    Expansion,
    build_symplectic,
    evaluate,
    exponential_expansion,
    fixture_genus1,
    fixture_massuyeau_partial,
    log_evaluate,
)
from twistlog.johnson import (
    certificate_to_json,
    conjugated_curve,
    curve_twist,
    curve_word,
    describe_curve,
    homology_action,
    johnson_component,
    l_invariant,
    l_invariant_tensor,
    nonsep_curve,
    sep_curve,
    separating_tau_formula,
    sigma_act,
    sigma_act_log_square,
    total_johnson,
    verify_dehn_twist_formula,
    verify_nilpotent_dependence,
    verify_operator_identities,
)
from twistlog.lie import bracket, is_lie
from twistlog.rationals import Rat
from twistlog.tensor import (
    AlgebraContext,
    basis_tensor,
    graded_part,
    monomial_tensor,
    symplectic_form,
    truncate,
)
from twistlog.words import (
    GroupWord,
    apply_automorphism,
    commutator,
    compose,
    concat,
    conjugate,
    generator_word,
    handle_word,
    invert,
    invert_automorphism,
    twist_nonseparating,
    twist_separating,
    word_from_string,
)


@pytest.fixture(scope="module")
def theta25():
    return build_symplectic(2, 5)


@pytest.fixture(scope="module")
def theta15():
    return build_symplectic(1, 5)


def random_word(rng, genus, length):
    return GroupWord(
        genus, [(rng.randrange(2 * genus), rng.choice((1, -1))) for _ in range(length)]
    )


def test_l_invariant_tensor_shape(theta25):
    w = word_from_string(2, "a1 b2 A1")
    t = l_invariant_tensor(theta25, w)
    assert is_nu_invariant(t)
    # one degree of headroom beyond the expansion truncation
    assert t.ctx.truncation == 6
    assert t.degrees()[0] >= 2
    L = l_invariant(theta25, w)
    assert L.ctx == theta25.ctx
    for v in L.values:
        assert is_lie(v)
    assert dapply(L, symplectic_form(theta25.ctx)) == 0


def test_l_invariant_degree_two_is_class_squared(theta25):
    ctx = theta25.ctx
    w = word_from_string(2, "a1 b2")
    t = l_invariant_tensor(theta25, w)
    cls = basis_tensor(ctx, 0) + basis_tensor(ctx, 3)
    ext = AlgebraContext(ctx.genus, ctx.truncation + 1)
    assert graded_part(t, 2) == truncate(cls * cls, ext)


def test_genus1_low_components():
    theta = fixture_genus1()
    ctx = theta.ctx
    a, b = basis_tensor(ctx, 0), basis_tensor(ctx, 1)
    t = l_invariant_tensor(theta, generator_word(1, 0))
    ext = AlgebraContext(1, 6)
    assert graded_part(t, 2) == monomial_tensor(ext, (0, 0))
    assert graded_part(t, 3) == 0
    # degree 4 of the naming tensor: (1/24) N([A,B][A,B])
    omega_sq = truncate(symplectic_form(ext) * symplectic_form(ext), ext)
    assert graded_part(t, 4) == cyclic_n(omega_sq).scale(Rat(1, 24))
    # the corresponding derivation values; these pin the duality scale
    L = l_invariant(theta, generator_word(1, 0))
    l4 = graded_component(L, 4)
    assert l4.values[0] == bracket(a, bracket(a, b)).scale(Rat(-1, 12))
    assert l4.values[1] == bracket(b, bracket(a, b)).scale(Rat(-1, 12))
    assert not graded_component(L, 3)


def test_partial_fixture_matches_genus1_components():
    # the partial fixture's first handle gives the same degree-4 values
    theta = fixture_massuyeau_partial()
    ctx = theta.ctx
    a, b = basis_tensor(ctx, 0), basis_tensor(ctx, 1)
    L = l_invariant(theta, generator_word(2, 0))
    l4 = graded_component(L, 4)
    assert l4.values[0] == bracket(a, bracket(a, b)).scale(Rat(-1, 12))
    assert l4.values[1] == bracket(b, bracket(a, b)).scale(Rat(-1, 12))
    assert not graded_component(L, 3)


def test_l_invariance_under_conjugation_and_inversion(theta25):
    rng = random.Random(1729)
    checked = 0
    while checked < 20:
        w = random_word(rng, 2, rng.randint(1, 6))
        if not w:
            continue
        y = random_word(rng, 2, rng.randint(1, 4))
        base = l_invariant_tensor(theta25, w)
        assert l_invariant_tensor(theta25, conjugate(w, y)) == base
        assert l_invariant_tensor(theta25, invert(w)) == base
        checked += 1


def test_nilpotent_dependence_certificates(theta25):
    a1 = generator_word(2, 0)
    moved = conjugate(a1, word_from_string(2, "b1 a2"))
    cert = verify_nilpotent_dependence(theta25, a1, moved, k=5)
    assert cert.passed
    # a depth-3 commutator correction shifts nothing below L_4
    deep = commutator(commutator(a1, generator_word(2, 1)), generator_word(2, 2))
    w2 = concat(a1, deep)
    assert verify_nilpotent_dependence(theta25, a1, w2, k=2).passed
    cert = verify_nilpotent_dependence(theta25, a1, w2, k=3)
    assert not cert.passed and cert.witness == "L_4 differs"
    cert = verify_nilpotent_dependence(theta25, a1, w2, k=5)
    assert not cert.passed and "L_4 differs" in cert.witness
    # a homologically different word already fails at L_2
    cert = verify_nilpotent_dependence(theta25, a1, word_from_string(2, "a1 b1"), k=1)
    assert not cert.passed and cert.witness == "L_2 differs"
    with pytest.raises(ValueError):
        verify_nilpotent_dependence(theta25, a1, moved, k=6)


def test_curve_words_and_twists():
    assert curve_word(2, nonsep_curve()) == generator_word(2, 0)
    assert curve_word(2, sep_curve(1)) == handle_word(2, 1)
    assert curve_twist(2, nonsep_curve()) == twist_nonseparating(2)
    assert curve_twist(2, sep_curve(2)) == twist_separating(2, 2)
    phi = twist_separating(2, 1)
    conj = conjugated_curve(phi, nonsep_curve())
    assert curve_word(2, conj) == apply_automorphism(phi, generator_word(2, 0))
    expected = compose(compose(phi, twist_nonseparating(2)), invert_automorphism(phi))
    assert curve_twist(2, conj) == expected
    with pytest.raises(ValueError):
        conjugated_curve(phi, conj)


def test_describe_curve():
    assert describe_curve(nonsep_curve()) == "nonsep"
    assert describe_curve(sep_curve(2)) == "sep:2"
    label = describe_curve(conjugated_curve(twist_separating(2, 1), nonsep_curve()))
    assert label == "conj(sep1^1):nonsep"


def test_homology_action_transvection():
    ctx = AlgebraContext(2, 2)
    action = homology_action(twist_nonseparating(2), ctx)
    # b1 -> b1 a1 on homology is B1 + A1; everything else is fixed
    assert action[1] == basis_tensor(ctx, 1) + basis_tensor(ctx, 0)
    for j in (0, 2, 3):
        assert action[j] == basis_tensor(ctx, j)


def test_total_johnson_intertwines(theta25):
    rng = random.Random(2601)
    phi = compose(twist_separating(2, 1), twist_nonseparating(2))
    tj = total_johnson(theta25, phi)
    for _ in range(8):
        w = random_word(rng, 2, rng.randint(0, 4))
        assert tj.apply(evaluate(theta25, w)) == evaluate(
            theta25, apply_automorphism(phi, w)
        )
    with pytest.raises(ValueError):
        total_johnson(theta25, twist_nonseparating(1))


def test_johnson_component_range(theta25):
    with pytest.raises(ValueError):
        johnson_component(theta25, twist_nonseparating(2), 0)
    with pytest.raises(ValueError):
        johnson_component(theta25, twist_nonseparating(2), 5)
    with pytest.raises(ValueError):
        separating_tau_formula(theta25, 1, 5)


def test_separating_twist_low_components(theta25):
    tg = twist_separating(2, 1)
    # tau_1 of a separating twist vanishes
    tau1 = johnson_component(theta25, tg, 1)
    assert not tau1
    assert separating_tau_formula(theta25, 1, 1) == tau1
    # tau_2 agrees with the closed formula, which here is -L_4
    tau2 = johnson_component(theta25, tg, 2)
    assert separating_tau_formula(theta25, 1, 2) == tau2
    L = l_invariant(theta25, handle_word(2, 1))
    l4 = graded_component(L, 4)
    for j in range(theta25.ctx.dim):
        assert tau2.values[j] == -dapply(l4, basis_tensor(theta25.ctx, j))


def test_sigma_requires_symplectic():
    theta = exponential_expansion(2, 4)
    a1, a2 = generator_word(2, 0), generator_word(2, 2)
    with pytest.raises(ValueError):
        sigma_act(theta, a1, a2)
    with pytest.raises(ValueError):
        sigma_act_log_square(theta, a1, a2)


def test_disjoint_support_annihilated(theta25):
    # the invariant of a1 kills everything supported on the other handle,
    # and a1's own expansion values; sigma_act sees the same vanishing but
    # only below the top degree, where theta(u) is undetermined
    a1 = generator_word(2, 0)
    L = l_invariant(theta25, a1)
    sub = AlgebraContext(2, 4)
    for other in ("a1", "a2", "b2"):
        w = word_from_string(2, other)
        assert dapply(L, evaluate(theta25, w)) == 0
        assert dapply(L, log_evaluate(theta25, w)) == 0
        assert truncate(sigma_act(theta25, a1, w), sub) == 0


def test_sigma_geometric_cross_check(theta25, theta15):
    # sigma(a1) b1 = b1 a1 in the group ring; through theta this is exact
    # below the top degree (the top needs theta(a1) one degree further out)
    for theta in (theta15, theta25):
        genus = theta.genus
        a1, b1 = generator_word(genus, 0), generator_word(genus, 1)
        lhs = sigma_act(theta, a1, b1)
        rhs = evaluate(theta, concat(b1, a1))
        sub = AlgebraContext(genus, theta.truncation - 1)
        assert truncate(lhs, sub) == truncate(rhs, sub)
        assert lhs != rhs  # the top-degree caveat is real


def test_sigma_key_formula(theta15):
    # the squared-log action is exact to full degree: it goes through the
    # extended invariant rather than through theta(u)
    a1, b1 = generator_word(1, 0), generator_word(1, 1)
    lhs = sigma_act_log_square(theta15, a1, b1)
    theta_b1 = evaluate(theta15, b1)
    assert lhs == (theta_b1 * log_evaluate(theta15, a1)).scale(2)
    L = l_invariant(theta15, a1)
    assert lhs == dapply(L, theta_b1).scale(-2)


def test_dehn_twist_certificates(theta15):
    cert = verify_dehn_twist_formula(theta15, nonsep_curve())
    assert cert.passed and cert.witness is None
    obj = certificate_to_json(cert)
    assert obj == {
        "check": "dehn_twist_formula",
        "params": {"curve": "nonsep", "genus": 1, "truncation": 5},
        "status": "pass",
    }
    cert = verify_dehn_twist_formula(theta15, sep_curve(1))
    assert cert.passed


def test_dehn_twist_formula_needs_a_good_jet():
    # perturbing a log in the top degree keeps the expansion symplectic at
    # this truncation but destroys extendability: the twist formula then
    # fails exactly in the top degree.  This is the phenomenon that forces
    # the builder to run one corrective pass beyond its target degree.
    fx = fixture_genus1()
    ctx = fx.ctx
    a, b = basis_tensor(ctx, 0), basis_tensor(ctx, 1)
    pert = bracket(a, bracket(a, bracket(a, bracket(a, b))))
    logs = [fx.logs[0] + pert, fx.logs[1]]
    bad = Expansion(ctx, logs, kind="user")
    from twistlog.expansion import is_symplectic

    assert is_symplectic(bad)
    cert = verify_dehn_twist_formula(bad, nonsep_curve())
    assert not cert.passed
    assert "degree 5" in cert.witness


def test_operator_identities_certificate(theta25):
    cert = verify_operator_identities(theta25, nonsep_curve())
    assert cert.passed
    with pytest.raises(ValueError):
        verify_operator_identities(theta25, sep_curve(1))


def test_twist_formula_respects_conjugation(theta25):
    # oracle: T(phi) T(t_C) T(phi)^-1 images versus the conjugated curve route
    phi = twist_separating(2, 1)
    conj = conjugated_curve(phi, nonsep_curve())
    tc = curve_twist(2, conj)
    direct = compose(compose(phi, twist_nonseparating(2)), invert_automorphism(phi))
    assert tc == direct
    cert = verify_dehn_twist_formula(theta25, conj)
    assert cert.passed
