"""Lie structure on the truncated tensor algebra.

The free Lie algebra sits inside the tensor algebra as the span of iterated
brackets [u,v] = uv - vu.  Membership is decided by the Dynkin-Specht-Wever
criterion: a homogeneous degree-n tensor u is Lie iff Phi(u) = n*u, where
Phi sends a monomial X_1...X_n to the nested bracket [X_1,[...[X_{n-1},X_n]]].
exp and log are the truncated mutually inverse series between T-hat_1 and
1 + T-hat_1, and the BCH product is computed as log(exp(u)exp(v)) -- never
from tabulated coefficients, so the classical low-degree coefficients are a
test of this module instead of an input to it.
"""

from __future__ import annotations

from .rationals import ONE, Rat
from .tensor import (
    Tensor,
    basis_tensor,
    graded_part,
    one_tensor,
    scalar_tensor,
    zero_tensor,
)


def bracket(t1: Tensor, t2: Tensor) -> Tensor:
    return t1 * t2 - t2 * t1


def _phi_monomial(mono: tuple, cache: dict) -> dict:
    """Expansion of Phi on one monomial as a map monomial -> integer coeff.

    Phi(X w) = [X, Phi(w)]; suffixes repeat heavily across a tensor, so they
    are memoized."""
    hit = cache.get(mono)
    if hit is not None:
        return hit
    if len(mono) == 1:
        out = {mono: 1}
    else:
        head = mono[:1]
        out = {}
        for sub, c in _phi_monomial(mono[1:], cache).items():
            left = head + sub
            out[left] = out.get(left, 0) + c
            right = sub + head
            out[right] = out.get(right, 0) - c
    cache[mono] = out
    return out


def phi(t: Tensor, _cache: dict | None = None) -> Tensor:
    """Bracketing map Phi(X_1...X_n) = [X_1,[...[X_{n-1},X_n]...]], linear
    extension; the identity on degree 1.  Errors on a nonzero constant term
    (Phi has no sensible value there)."""
    if t.coefficient(()):
        raise ValueError("phi: nonzero constant term")
    cache = _cache if _cache is not None else {}
    out = {}
    for mono, coeff in t.terms.items():
        for m2, c2 in _phi_monomial(mono, cache).items():
            acc = out.get(m2)
            val = coeff * c2
            out[m2] = val if acc is None else acc + val
    return Tensor._make(t.ctx, {m: c for m, c in out.items() if c})


def is_lie(t: Tensor) -> bool:
    """Dynkin-Specht-Wever test, degreewise: Phi(u_n) = n*u_n for every
    homogeneous component, and no constant term."""
    if t.coefficient(()):
        return False
    scaled = Tensor._make(t.ctx, {m: c * len(m) for m, c in t.terms.items()})
    return phi(t) == scaled


def exp(t: Tensor) -> Tensor:
    """exp(u) = sum u^n / n!; requires zero constant term, so the series
    terminates at the truncation."""
    if t.coefficient(()):
        raise ValueError("exp: nonzero constant term")
    out = one_tensor(t.ctx)
    power = one_tensor(t.ctx)
    factorial = 1
    for n in range(1, t.ctx.truncation + 1):
        power = power * t
        if not power:
            break
        factorial *= n
        out = out + power.scale(Rat(1, factorial))
    return out


def log(t: Tensor) -> Tensor:
    """log(u) = sum (-1)^{n-1}/n (u-1)^n; requires constant term exactly 1."""
    if t.coefficient(()) != ONE:
        raise ValueError("log: constant term must be 1")
    u = t - one_tensor(t.ctx)
    out = zero_tensor(t.ctx)
    power = one_tensor(t.ctx)
    for n in range(1, t.ctx.truncation + 1):
        power = power * u
        if not power:
            break
        out = out + power.scale(Rat(1 if n % 2 else -1, n))
    return out


def bch(u: Tensor, v: Tensor) -> Tensor:
    """Baker-Campbell-Hausdorff product log(exp(u)exp(v)).  Inputs must be
    Lie; the result is re-certified rather than assumed."""
    if not is_lie(u):
        raise ValueError("bch: first argument is not a Lie element")
    if not is_lie(v):
        raise ValueError("bch: second argument is not a Lie element")
    result = log(exp(u) * exp(v))
    if not is_lie(result):  # cannot happen; guards against kernel bugs
        raise ArithmeticError("bch result failed the Lie certification")
    return result


# -- Lyndon-basis display form ----------------------------------------------


def _lyndon_words(dim: int, n: int) -> list:
    """Duval's algorithm: all Lyndon words of length n over 0..dim-1."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == n:
            out.append(tuple(w))
        while len(w) < n:
            w.append(w[-m])
        while w and w[-1] == dim - 1:
            w.pop()
    return out


def _lyndon_bracketing(word: tuple) -> object:
    """Standard bracketing: split a Lyndon word at its longest proper Lyndon
    suffix; returns a nested (left, right) tree with int leaves."""
    if len(word) == 1:
        return word[0]
    for cut in range(1, len(word)):
        suffix = word[cut:]
        if all(suffix < suffix[k:] + suffix[:k] for k in range(1, len(suffix))):
            return (_lyndon_bracketing(word[:cut]), _lyndon_bracketing(suffix))
    raise ValueError(f"not a Lyndon word: {word}")


def bracket_tree_tensor(ctx, tree) -> Tensor:
    """Expand a nested bracket tree (int leaves) into its tensor."""
    if isinstance(tree, int):
        return basis_tensor(ctx, tree)
    left, right = tree
    return bracket(bracket_tree_tensor(ctx, left), bracket_tree_tensor(ctx, right))


def lyndon_bracket_form(t: Tensor) -> list:
    """Rewrite a Lie tensor as [(coeff, bracket-tree), ...] over the Lyndon
    basis.  Works degreewise by peeling the lexicographically least monomial,
    which for a Lie element is always a Lyndon word with the same coefficient
    as its standard bracketing.  Raises ValueError on non-Lie input."""
    out = []
    rem = t
    guard = 0
    while rem:
        mono = min(rem.terms)
        if not mono:
            raise ValueError("constant term is not Lie")
        coeff = rem.terms[mono]
        tree = _lyndon_bracketing(mono)  # raises if mono is not Lyndon
        out.append((coeff, tree))
        rem = rem - bracket_tree_tensor(t.ctx, tree).scale(coeff)
        guard += 1
        if guard > 10000:
            raise ValueError("bracket rewrite did not terminate; input not Lie?")
    return out


def format_bracket_tree(ctx, tree) -> str:
    if isinstance(tree, int):
        return ctx.basis_name(tree)
    left, right = tree
    return f"[{format_bracket_tree(ctx, left)},{format_bracket_tree(ctx, right)}]"
