"""The certificate suite: one named check per acceptance-level claim.

Every check returns a Certificate; the CLI ``verify`` subcommand and the
acceptance tests both run these, so there is exactly one implementation of
each verdict.  Expensive expansions are memoized per process, except where
a check's own timing is part of its verdict, in which case it does the work
itself and then donates the result to the cache.
"""

from __future__ import annotations

import random
import time

from .cyclic import cyclic_n, necklace_bracket
from .derivation import (
    Derivation,
    OmegaIdealContext,
    apply as apply_derivation,
    commutator,
    exp_derivation,
    from_tensor,
    graded_component,
    omega_ideal_equal,
    omega_ideal_reduce,
    to_tensor,
)
from .expansion import (
    Expansion,
    boundary_log,
    build_symplectic,
    connecting_automorphism,
    evaluate,
    fixture_genus1,
    fixture_genus2,
    is_group_like,
    is_symplectic,
    log_evaluate,
)
from .johnson import (
    Certificate,
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
    sigma_act_log_square,
    total_johnson,
    verify_dehn_twist_formula,
    verify_operator_identities,
)
from .lie import is_lie
from .rationals import Rat
from .tensor import (
    AlgebraContext,
    Tensor,
    antisymmetrize,
    basis_tensor,
    filtration_degree,
    intersection,
    symplectic_form,
    zero_tensor,
)
from .words import (
    GroupWord,
    compose,
    conjugate,
    generator_word,
    handle_word,
    invert,
    twist_nonseparating,
    twist_separating,
    word_from_string,
)

_BUILT = {}
_VARIANT = {}


def built_expansion(genus: int, truncation: int) -> Expansion:
    key = (genus, truncation)
    if key not in _BUILT:
        _BUILT[key] = build_symplectic(genus, truncation)
    return _BUILT[key]


def variant_expansion(genus: int, truncation: int) -> Expansion:
    """A second symplectic expansion, distinct from the built one: push the
    built expansion through the algebra automorphism exp(D) with
    D = L(gamma_1).  D is Lie-valued, kills omega, and raises degree by at
    least two, so group-likeness, the boundary condition, and the degree-1
    normalization all survive while the logs genuinely change."""
    key = (genus, truncation)
    if key not in _VARIANT:
        theta = built_expansion(genus, truncation)
        d = l_invariant(theta, handle_word(genus, 1))
        logs = [exp_derivation(d, t) for t in theta.logs]
        _VARIANT[key] = Expansion(theta.ctx, logs, kind="user")
    return _VARIANT[key]


def _cert(check: str, params: dict, failures: list) -> Certificate:
    if failures:
        return Certificate(check, params, "fail", "; ".join(failures))
    return Certificate(check, params, "pass")


# -- the checks, in acceptance order ------------------------------------------


def check_fixture_genus1() -> Certificate:
    t0 = time.perf_counter()
    theta = fixture_genus1()
    group_like = is_group_like(theta)
    boundary_ok = boundary_log(theta) == symplectic_form(theta.ctx)
    seconds = time.perf_counter() - t0
    failures = []
    if not group_like:
        failures.append("a generator log is not Lie")
    if not boundary_ok:
        failures.append("ell(zeta) != omega")
    if seconds >= 1.0:
        failures.append(f"runtime {seconds:.3f}s exceeded 1s")
    params = {"genus": 1, "truncation": theta.truncation, "seconds": round(seconds, 4)}
    return _cert("fixture-genus1", params, failures)


def check_fixture_genus2() -> Certificate:
    t0 = time.perf_counter()
    theta = fixture_genus2()
    group_like = is_group_like(theta)
    boundary_ok = boundary_log(theta) == symplectic_form(theta.ctx)
    seconds = time.perf_counter() - t0
    failures = []
    if not group_like:
        failures.append("a generator log is not Lie")
    if not boundary_ok:
        failures.append("ell(zeta) != omega")
    if seconds >= 1.0:
        failures.append(f"runtime {seconds:.3f}s exceeded 1s")
    params = {"genus": 2, "truncation": theta.truncation, "seconds": round(seconds, 4)}
    return _cert("fixture-genus2", params, failures)


def check_builder() -> Certificate:
    failures = []
    params = {"truncation": 6}
    for genus in (1, 2, 3):
        t0 = time.perf_counter()
        theta = build_symplectic(genus, 6)
        seconds = time.perf_counter() - t0
        _BUILT.setdefault((genus, 6), theta)
        params[f"genus{genus}_seconds"] = round(seconds, 3)
        if not is_symplectic(theta):
            failures.append(f"build({genus}, 6) is not symplectic")
        if genus == 3 and seconds >= 60.0:
            failures.append(f"genus-3 build took {seconds:.1f}s, budget 60s")
    return _cert("builder", params, failures)


def _conjugated_curves(genus: int) -> list:
    tg1 = twist_separating(genus, 1)
    tboundary = twist_separating(genus, genus)
    return [
        conjugated_curve(tg1, nonsep_curve()),
        conjugated_curve(compose(tg1, tg1), nonsep_curve()),
        conjugated_curve(tboundary, nonsep_curve()),
    ]


def check_dehn_twist() -> Certificate:
    curves = [nonsep_curve(), sep_curve(1)] + _conjugated_curves(2)
    expansions = [("built", built_expansion(2, 5)), ("fixture", fixture_genus2())]
    failures = []
    for label, theta in expansions:
        for curve in curves:
            cert = verify_dehn_twist_formula(theta, curve)
            if not cert.passed:
                failures.append(
                    f"{label} N={theta.truncation} {describe_curve(curve)}: {cert.witness}"
                )
    params = {
        "genus": 2,
        "curves": [describe_curve(c) for c in curves],
        "expansions": [f"{label} N={theta.truncation}" for label, theta in expansions],
    }
    return _cert("dehn-twist", params, failures)


def check_transvection() -> Certificate:
    failures = []
    for genus in (1, 2, 3):
        ctx = AlgebraContext(genus, 2)
        a1 = basis_tensor(ctx, 0)
        action = homology_action(twist_nonseparating(genus), ctx)
        for j in range(ctx.dim):
            expected = basis_tensor(ctx, j) - a1.scale(intersection(ctx, j, 0))
            if action[j] != expected:
                failures.append(f"genus {genus} nonsep on {ctx.basis_name(j)}")
        for h in range(1, genus + 1):
            action = homology_action(twist_separating(genus, h), ctx)
            for j in range(ctx.dim):
                if action[j] != basis_tensor(ctx, j):
                    failures.append(f"genus {genus} sep:{h} on {ctx.basis_name(j)}")
    return _cert("transvection", {"genera": [1, 2, 3]}, failures)


def _tau_formula_failures(label: str, theta: Expansion) -> list:
    ctx = theta.ctx
    tc = twist_nonseparating(ctx.genus)
    L = l_invariant(theta, generator_word(ctx.genus, 0))
    l2 = graded_component(L, 2)
    l3 = graded_component(L, 3)
    l4 = graded_component(L, 4)
    tau1 = johnson_component(theta, tc, 1)
    tau2 = johnson_component(theta, tc, 2)
    failures = []
    for j in range(ctx.dim):
        x = basis_tensor(ctx, j)
        name = ctx.basis_name(j)
        l2x, l3x, l4x = (
            apply_derivation(l2, x),
            apply_derivation(l3, x),
            apply_derivation(l4, x),
        )
        if tau1.values[j] != -l3x:
            failures.append(f"{label}: tau_1 != -L3 on {name}")
        rhs = (
            -l4x
            + (apply_derivation(l2, l4x) - apply_derivation(l4, l2x)).scale(Rat(1, 2))
            + apply_derivation(l3, l3x).scale(Rat(1, 2))
        )
        if tau2.values[j] != rhs:
            failures.append(f"{label}: tau_2 formula fails on {name}")
    return failures


def check_tau_formulas() -> Certificate:
    first = built_expansion(2, 5)
    second = variant_expansion(2, 5)
    failures = []
    if first == second:
        failures.append("the two expansions coincide; premise broken")
    if not is_symplectic(second):
        failures.append("variant expansion is not symplectic; premise broken")
    failures += _tau_formula_failures("built", first)
    failures += _tau_formula_failures("variant", second)
    params = {"genus": 2, "truncation": 5, "expansions": ["built", "variant"]}
    return _cert("tau-formulas", params, failures)


def check_separating_series() -> Certificate:
    theta = built_expansion(2, 6)
    tg = twist_separating(2, 1)
    L = l_invariant(theta, handle_word(2, 1))
    l4 = graded_component(L, 4)
    failures = []
    for k in range(1, 5):
        direct = johnson_component(theta, tg, k)
        formula = separating_tau_formula(theta, 1, k)
        if direct != formula:
            failures.append(f"k={k} mismatch")
        if k == 2:
            morita = [-apply_derivation(l4, basis_tensor(theta.ctx, j)) for j in range(theta.ctx.dim)]
            if list(direct.values) != morita:
                failures.append("k=2 does not equal -L4")
    params = {"genus": 2, "truncation": 6, "h": 1, "k": [1, 2, 3, 4]}
    return _cert("separating-series", params, failures)


def _random_nu_invariant(rng: random.Random, ctx: AlgebraContext, degree: int) -> Tensor:
    acc = zero_tensor(ctx)
    for _ in range(rng.randint(1, 2)):
        mono = tuple(rng.randrange(ctx.dim) for _ in range(degree))
        coeff = Rat(rng.randint(-3, 3), rng.randint(1, 3))
        if coeff:
            acc = acc + Tensor(ctx, {mono: coeff})
    return cyclic_n(acc)


def check_necklace_oracle() -> Certificate:
    rng = random.Random(853835)
    failures = []
    checked = 0
    while checked < 100 and not failures:
        genus = rng.choice((1, 2))
        ctx = AlgebraContext(genus, 5)
        du = rng.randint(1, 4)
        dv = rng.randint(1, 5 - du)
        u = _random_nu_invariant(rng, ctx, du)
        v = _random_nu_invariant(rng, ctx, dv)
        if not u or not v:
            continue
        direct = from_tensor(necklace_bracket(u, v))
        oracle = commutator(from_tensor(u), from_tensor(v))
        if direct != oracle:
            failures.append(f"pair {checked}: degrees ({du},{dv}), genus {genus}")
        checked += 1
    params = {"pairs": checked, "max_total_degree": 5, "seed": 853835}
    return _cert("necklace-oracle", params, failures)


def _random_word(rng: random.Random, genus: int, length: int) -> GroupWord:
    letters = [
        (rng.randrange(2 * genus), rng.choice((1, -1))) for _ in range(length)
    ]
    return GroupWord(genus, letters)


def check_l_invariance() -> Certificate:
    theta = built_expansion(2, 5)
    rng = random.Random(911)
    failures = []
    checked = 0
    while checked < 100 and not failures:
        w = _random_word(rng, 2, rng.randint(1, 8))
        if not w:
            continue
        y = _random_word(rng, 2, rng.randint(1, 4))
        base = l_invariant_tensor(theta, w)
        if l_invariant_tensor(theta, conjugate(w, y)) != base:
            failures.append(f"conjugation broke invariance at word {checked}")
        if l_invariant_tensor(theta, invert(w)) != base:
            failures.append(f"inversion broke invariance at word {checked}")
        checked += 1
    params = {"words": checked, "max_length": 8, "genus": 2, "truncation": 5, "seed": 911}
    return _cert("l-invariance", params, failures)


def check_sigma_key_formula() -> Certificate:
    failures = []
    for genus in (1, 2):
        theta = built_expansion(genus, 5)
        a1 = generator_word(genus, 0)
        b1 = generator_word(genus, 1)
        theta_b1 = evaluate(theta, b1)
        ell_a1 = log_evaluate(theta, a1)
        lhs = sigma_act_log_square(theta, a1, b1)
        if lhs != (theta_b1 * ell_a1).scale(2):
            failures.append(f"genus {genus}: key formula fails")
        L = l_invariant(theta, a1)
        lb = apply_derivation(L, theta_b1)
        if lb != -(theta_b1 * ell_a1):
            failures.append(f"genus {genus}: L(a1) theta(b1) != -theta(b1) ell(a1)")
        if lhs != lb.scale(-2):
            failures.append(f"genus {genus}: sigma and -2 L disagree")
    params = {"genera": [1, 2], "truncation": 5}
    return _cert("sigma-key-formula", params, failures)


def check_disjointness() -> Certificate:
    theta = built_expansion(2, 5)
    L = l_invariant(theta, generator_word(2, 0))
    failures = []
    for name in ("a1", "a2", "b2"):
        w = word_from_string(2, name)
        if apply_derivation(L, evaluate(theta, w)):
            failures.append(f"L(a1) theta({name}) != 0")
        if apply_derivation(L, log_evaluate(theta, w)):
            failures.append(f"L(a1) ell({name}) != 0")
    params = {"genus": 2, "truncation": 5, "words": ["a1", "a2", "b2"]}
    return _cert("disjointness", params, failures)


def check_operator_identities() -> Certificate:
    first = built_expansion(2, 6)
    second = variant_expansion(2, 6)
    failures = []
    if first == second:
        failures.append("the two expansions coincide; premise broken")
    if not is_symplectic(second):
        failures.append("variant expansion is not symplectic; premise broken")
    for label, theta in (("built", first), ("variant", second)):
        cert = verify_operator_identities(theta, nonsep_curve())
        if not cert.passed:
            failures.append(f"{label}: {cert.witness}")
    params = {"genus": 2, "truncation": 6, "expansions": ["built", "variant"]}
    return _cert("operator-identities", params, failures)


def check_omega_ideal() -> Certificate:
    theta = fixture_genus2()
    ctx = theta.ctx
    ideal = OmegaIdealContext(ctx)
    omega = symplectic_form(ctx)
    failures = []
    for curve in (nonsep_curve(), sep_curve(1)):
        word = curve_word(ctx.genus, curve)
        tc = curve_twist(ctx.genus, curve)
        L = l_invariant(theta, word)
        if apply_derivation(L, omega):
            failures.append(f"{describe_curve(curve)}: L does not kill omega")
        tj = total_johnson(theta, tc)
        minus_l = -L
        for i in range(ctx.dim):
            reduced = omega_ideal_reduce(
                evaluate(theta, generator_word(ctx.genus, i)), ideal
            )
            lhs = exp_derivation(minus_l, reduced)
            if not omega_ideal_equal(lhs, tj.images[i], ideal):
                failures.append(
                    f"{describe_curve(curve)}: twist formula fails mod the ideal "
                    f"on generator {i}"
                )
    params = {"genus": 2, "truncation": 4, "curves": ["nonsep", "sep:1"]}
    return _cert("omega-ideal", params, failures)


def _connecting_failures(
    label: str, theta1: Expansion, theta2: Expansion, require_nontrivial: bool = False
) -> list:
    ctx = theta1.ctx
    U = connecting_automorphism(theta1, theta2)
    failures = []
    for i in range(ctx.dim):
        gen = generator_word(ctx.genus, i)
        if U.apply(evaluate(theta1, gen)) != evaluate(theta2, gen):
            failures.append(f"{label}: U theta1 != theta2 on generator {i}")
    logs = U.log_h_values()
    if require_nontrivial and not any(logs):
        failures.append(f"{label}: U is the identity; vacuous pair")
    for j, w in enumerate(logs):
        if w and filtration_degree(w) < 2:
            failures.append(f"{label}: (log U)(X_{j}) does not raise filtration")
        if not is_lie(w):
            failures.append(f"{label}: (log U)(X_{j}) is not a Lie element")
    if apply_derivation(Derivation(ctx, logs), symplectic_form(ctx)):
        failures.append(f"{label}: (log U)|_H does not kill omega")
    u1 = U.u_component(1)
    t = to_tensor(Derivation(ctx, u1))
    if antisymmetrize(t) != t:
        failures.append(f"{label}: u_1 is not in Lambda^3 H")
    return failures


def check_connecting() -> Certificate:
    theta = built_expansion(1, 5)
    failures = _connecting_failures("built/fixture", theta, fixture_genus1())
    failures += _connecting_failures(
        "built/variant", theta, variant_expansion(1, 5), require_nontrivial=True
    )
    params = {
        "genus": 1,
        "truncation": 5,
        "pairs": ["built/fixture", "built/variant"],
    }
    return _cert("connecting", params, failures)


SUITE = (
    ("fixture-genus1", check_fixture_genus1),
    ("fixture-genus2", check_fixture_genus2),
    ("builder", check_builder),
    ("dehn-twist", check_dehn_twist),
    ("transvection", check_transvection),
    ("tau-formulas", check_tau_formulas),
    ("separating-series", check_separating_series),
    ("necklace-oracle", check_necklace_oracle),
    ("l-invariance", check_l_invariance),
    ("sigma-key-formula", check_sigma_key_formula),
    ("disjointness", check_disjointness),
    ("operator-identities", check_operator_identities),
    ("omega-ideal", check_omega_ideal),
    ("connecting", check_connecting),
)


def suite_names() -> list:
    return [name for name, _ in SUITE]


def run_check(name: str) -> Certificate:
    for key, fn in SUITE:
        if key == name:
            return fn()
    raise ValueError(f"unknown check {name!r}; known: {', '.join(suite_names())}")


def run_suite(names=None) -> list:
    if names is None:
        return [fn() for _, fn in SUITE]
    return [run_check(name) for name in names]
