"""Lie structure: bracketing map, membership test, exp/log, BCH, Lyndon form."""

import random

import pytest

from twistlog.lie import (
    bch,
    bracket,
    bracket_tree_tensor,
    exp,
    format_bracket_tree,
    is_lie,
    log,
    lyndon_bracket_form,
    phi,
)
from twistlog.rationals import Rat
from twistlog.tensor import (
    AlgebraContext,
    basis_tensor,
    graded_part,
    monomial_tensor,
    one_tensor,
    scalar_tensor,
    symplectic_form,
    zero_tensor,
)


def random_lie(rng, ctx, brackets=3):
    """Random span of iterated brackets of basis vectors."""
    out = zero_tensor(ctx)
    for _ in range(brackets):
        t = basis_tensor(ctx, rng.randrange(ctx.dim))
        for _ in range(rng.randint(0, ctx.truncation - 1)):
            t = bracket(basis_tensor(ctx, rng.randrange(ctx.dim)), t)
        out = out + t.scale(Rat(rng.randint(-3, 3), rng.randint(1, 4)))
    return out


def test_bracket_antisymmetry_and_jacobi():
    rng = random.Random(1202)
    ctx = AlgebraContext(2, 5)
    for _ in range(10):
        x, y, z = (random_lie(rng, ctx, brackets=2) for _ in range(3))
        assert bracket(x, y) == -bracket(y, x)
        jac = (
            bracket(x, bracket(y, z))
            + bracket(y, bracket(z, x))
            + bracket(z, bracket(x, y))
        )
        assert jac == 0


def test_phi_on_monomials():
    ctx = AlgebraContext(1, 3)
    a, b = basis_tensor(ctx, 0), basis_tensor(ctx, 1)
    assert phi(a) == a
    assert phi(a * b) == bracket(a, b)
    # right-nested: Phi(XYZ) = [X,[Y,Z]]
    assert phi(a * b * a) == bracket(a, bracket(b, a))
    with pytest.raises(ValueError):
        phi(one_tensor(ctx))


def test_is_lie():
    ctx = AlgebraContext(2, 4)
    assert is_lie(symplectic_form(ctx))
    assert is_lie(zero_tensor(ctx))
    a, b = basis_tensor(ctx, 0), basis_tensor(ctx, 1)
    assert is_lie(a + bracket(a, bracket(a, b)).scale(Rat(3, 7)))
    assert not is_lie(a * b)
    assert not is_lie(one_tensor(ctx))
    rng = random.Random(88)
    for _ in range(10):
        assert is_lie(random_lie(rng, ctx))


def test_exp_log_inverse():
    rng = random.Random(314)
    ctx = AlgebraContext(2, 4)
    for _ in range(10):
        t = random_lie(rng, ctx)
        assert log(exp(t)) == t
    u = one_tensor(ctx) + basis_tensor(ctx, 0) + monomial_tensor(ctx, (1, 1), Rat(2, 3))
    assert exp(log(u)) == u


def test_exp_log_validation():
    ctx = AlgebraContext(1, 2)
    with pytest.raises(ValueError):
        exp(one_tensor(ctx))
    with pytest.raises(ValueError):
        log(basis_tensor(ctx, 0))
    with pytest.raises(ValueError):
        log(scalar_tensor(ctx, 2) + basis_tensor(ctx, 0))


def test_bch_classical_coefficients():
    # the BCH kernel computes log(exp exp); the tabulated low-degree
    # coefficients come out rather than going in
    ctx = AlgebraContext(1, 4)
    a, b = basis_tensor(ctx, 0), basis_tensor(ctx, 1)
    w = bch(a, b)
    assert graded_part(w, 1) == a + b
    assert graded_part(w, 2) == bracket(a, b).scale(Rat(1, 2))
    deg3 = bracket(a, bracket(a, b)).scale(Rat(1, 12)) + bracket(
        b, bracket(b, a)
    ).scale(Rat(1, 12))
    assert graded_part(w, 3) == deg3
    assert graded_part(w, 4) == bracket(b, bracket(a, bracket(a, b))).scale(Rat(-1, 24))


def test_bch_group_law():
    rng = random.Random(2718)
    ctx = AlgebraContext(2, 4)
    for _ in range(5):
        x, y = random_lie(rng, ctx, 2), random_lie(rng, ctx, 2)
        z = bch(x, y)
        assert is_lie(z)
        assert exp(z) == exp(x) * exp(y)
    assert bch(x, -x) == 0


def test_bch_rejects_non_lie():
    ctx = AlgebraContext(1, 3)
    a, b = basis_tensor(ctx, 0), basis_tensor(ctx, 1)
    with pytest.raises(ValueError):
        bch(a * b, a)
    with pytest.raises(ValueError):
        bch(a, a * b)


def test_lyndon_bracket_form_round_trip():
    rng = random.Random(555)
    ctx = AlgebraContext(2, 4)
    for _ in range(10):
        t = random_lie(rng, ctx)
        rebuilt = zero_tensor(ctx)
        for coeff, tree in lyndon_bracket_form(t):
            rebuilt = rebuilt + bracket_tree_tensor(ctx, tree).scale(coeff)
        assert rebuilt == t


def test_lyndon_bracket_form_rejects_non_lie():
    ctx = AlgebraContext(1, 3)
    a, b = basis_tensor(ctx, 0), basis_tensor(ctx, 1)
    with pytest.raises(ValueError):
        lyndon_bracket_form(a * b)


def test_format_bracket_tree():
    ctx = AlgebraContext(2, 3)
    t = bracket(basis_tensor(ctx, 0), bracket(basis_tensor(ctx, 1), basis_tensor(ctx, 2)))
    ((coeff, tree),) = lyndon_bracket_form(t)
    assert coeff == 1
    assert format_bracket_tree(ctx, tree) == "[A1,[B1,A2]]"
