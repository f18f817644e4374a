"""Cyclic symmetrization operators and the necklace bracket.

nu rotates a monomial one step to the left (X_1 X_2 ... X_p -> X_2 ... X_p X_1),
N sums the p rotations of a degree-p monomial (and kills degree 0), and
N-hat is the degreewise normalization (1/p) N, so N-hat restricts to the
identity on the image of N.  The image of N inside T-hat_1 is exactly the
nu-invariant part, and under the duality of the derivation module it is the
algebra of derivations killing the symplectic form; the necklace bracket below
writes the derivation commutator directly on nu-invariant tensors.
"""

from __future__ import annotations

from .rationals import Rat
from .tensor import AlgebraContext, Tensor, intersection


def nu(t: Tensor) -> Tensor:
    """Left rotation, monomial-wise; identity on degrees 0 and 1."""
    out = {}
    for mono, coeff in t.terms.items():
        key = mono[1:] + mono[:1] if len(mono) > 1 else mono
        acc = out.get(key)
        out[key] = coeff if acc is None else acc + coeff
    return Tensor._make(t.ctx, {m: c for m, c in out.items() if c})


def cyclic_n(t: Tensor) -> Tensor:
    """N: degree-p part goes to the sum of its p rotations; degree 0 dies."""
    out = {}
    for mono, coeff in t.terms.items():
        p = len(mono)
        if p == 0:
            continue
        doubled = mono + mono
        for shift in range(p):
            key = doubled[shift : shift + p]
            acc = out.get(key)
            out[key] = coeff if acc is None else acc + coeff
    return Tensor._make(t.ctx, {m: c for m, c in out.items() if c})


def cyclic_n_hat(t: Tensor) -> Tensor:
    """N-hat: degreewise (1/p) N; the identity on the image of N."""
    out = {}
    for mono, coeff in t.terms.items():
        p = len(mono)
        if p == 0:
            continue
        share = coeff / p
        doubled = mono + mono
        for shift in range(p):
            key = doubled[shift : shift + p]
            acc = out.get(key)
            out[key] = share if acc is None else acc + share
    return Tensor._make(t.ctx, {m: c for m, c in out.items() if c})


def is_nu_invariant(t: Tensor) -> bool:
    return nu(t) == t


def necklace_bracket(u: Tensor, v: Tensor) -> Tensor:
    """Bracket of nu-invariant tensors, by the cyclic double-sum formula

        [N(x), N(y)] = - sum_{i,j} (x_i . y_j)
                         N(x_{i+1}..x_n x_1..x_{i-1} y_{j+1}..y_m y_1..y_{j-1})

    extended bilinearly over homogeneous parts (u = N(u_p / p) degreewise).
    Inputs must be nu-invariant in every degree; degree-1 inputs are allowed
    and give degree-lowering derivations.  Equals the commutator of the
    corresponding derivations, which the tests use as an oracle.
    """
    if u.ctx != v.ctx:
        raise ValueError("context mismatch")
    ctx = u.ctx
    for name, t in (("first", u), ("second", v)):
        if t.coefficient(()):
            raise ValueError(f"necklace_bracket: {name} input has a constant term")
        if not is_nu_invariant(t):
            raise ValueError(f"necklace_bracket: {name} input is not nu-invariant")
    cap = ctx.truncation
    out = {}
    for x, cx in u.terms.items():
        n = len(x)
        for y, dy in v.terms.items():
            m = len(y)
            if n + m - 2 > cap:
                continue
            weight = (cx * dy) / (n * m)
            for i in range(n):
                xi = x[i]
                # partner index under the symplectic pairing: A_k <-> B_k
                partner = xi ^ 1
                x_rest = x[i + 1 :] + x[:i]
                for j in range(m):
                    if y[j] != partner:
                        continue
                    pairing = intersection(ctx, xi, y[j])
                    word = x_rest + y[j + 1 :] + y[:j]
                    p = len(word)
                    if p == 0:
                        continue  # N kills degree 0
                    coeff = -pairing * weight
                    doubled = word + word
                    for shift in range(p):
                        key = doubled[shift : shift + p]
                        acc = out.get(key)
                        out[key] = coeff if acc is None else acc + coeff
    return Tensor._make(ctx, {k: c for k, c in out.items() if c})
