"""Derivations of the truncated tensor algebra, and the omega-ideal quotient.

A derivation is determined by its values on H and extended by the Leibniz
rule.  Poincare duality identifies H with its dual, so a tensor t with zero
constant term also names a derivation: the monomial X u acts by
Y -> (Y . X) u, summed over the terms of t.  Both views are kept exactly:
``values`` is the source of truth, the defining tensor round-trips through
to_tensor / from_tensor without loss.

The omega-ideal machinery reduces tensors modulo the two-sided ideal
generated by omega, degree by degree, against a row-reduced basis with
lexicographically least pivots; residuals are canonical representatives of
the quotient.
"""

from __future__ import annotations

import heapq
from itertools import product

from .rationals import ONE, Rat
from .tensor import (
    AlgebraContext,
    Tensor,
    basis_tensor,
    graded_part,
    symplectic_form,
    tensor_from_json,
    tensor_to_json,
    zero_tensor,
)

_FACTORIALS = [1]


def _factorial(n: int) -> int:
    while len(_FACTORIALS) <= n:
        _FACTORIALS.append(_FACTORIALS[-1] * len(_FACTORIALS))
    return _FACTORIALS[n]


class Derivation:
    """Derivation of the tensor algebra, stored by its values on H."""

    __slots__ = ("ctx", "values")

    def __init__(self, ctx: AlgebraContext, values):
        values = tuple(values)
        if len(values) != ctx.dim:
            raise ValueError(f"expected {ctx.dim} values on H")
        for v in values:
            if v.ctx != ctx:
                raise ValueError("context mismatch in derivation values")
        self.ctx = ctx
        self.values = values

    def __eq__(self, other):
        return (
            isinstance(other, Derivation)
            and self.ctx == other.ctx
            and self.values == other.values
        )

    def __bool__(self):
        return any(self.values)

    def __add__(self, other):
        self._check_same(other)
        return Derivation(self.ctx, [u + v for u, v in zip(self.values, other.values)])

    def __sub__(self, other):
        self._check_same(other)
        return Derivation(self.ctx, [u - v for u, v in zip(self.values, other.values)])

    def __neg__(self):
        return Derivation(self.ctx, [-v for v in self.values])

    def scale(self, scalar):
        return Derivation(self.ctx, [v.scale(scalar) for v in self.values])

    def _check_same(self, other):
        if not isinstance(other, Derivation) or other.ctx != self.ctx:
            raise ValueError("derivation context mismatch")

    def __repr__(self):
        return f"Derivation(genus={self.ctx.genus}, truncation={self.ctx.truncation})"


def from_tensor(t: Tensor) -> Derivation:
    """Derivation named by a tensor: X u acts as Y -> (Y . X) u.

    Only the partner basis vector pairs with a monomial's first letter: a
    leading A_i contributes to the value on B_i with sign (B_i.A_i) = -1,
    a leading B_i to the value on A_i with sign (A_i.B_i) = +1.
    """
    if t.coefficient(()):
        raise ValueError("derivation tensor must have zero constant term")
    ctx = t.ctx
    buckets = [{} for _ in range(ctx.dim)]
    for mono, coeff in t.terms.items():
        first, tail = mono[0], mono[1:]
        target = first ^ 1
        buckets[target][tail] = -coeff if first % 2 == 0 else coeff
    return Derivation(ctx, [Tensor._make(ctx, b) for b in buckets])


def to_tensor(d: Derivation) -> Tensor:
    """Inverse of from_tensor: sum_i B_i D(A_i) - A_i D(B_i)."""
    ctx = d.ctx
    out = {}
    for i in range(ctx.genus):
        a, b = 2 * i, 2 * i + 1
        for mono, coeff in d.values[a].terms.items():
            if len(mono) + 1 <= ctx.truncation:
                out[(b,) + mono] = coeff
        for mono, coeff in d.values[b].terms.items():
            if len(mono) + 1 <= ctx.truncation:
                out[(a,) + mono] = -coeff
    return Tensor._make(ctx, out)


def graded_component(d: Derivation, k: int) -> Derivation:
    """The part of d raising degree by exactly k - 1 (tensor view degree k)."""
    if k < 1:
        raise ValueError(f"derivation component {k} out of range")
    if k - 1 > d.ctx.truncation:
        return Derivation(d.ctx, [zero_tensor(d.ctx)] * d.ctx.dim)
    return Derivation(d.ctx, [graded_part(v, k - 1) for v in d.values])


def apply(d: Derivation, t: Tensor) -> Tensor:
    """Extend d to the whole algebra by the Leibniz rule; constants die,
    products above the truncation are dropped."""
    if t.ctx != d.ctx:
        raise ValueError("context mismatch")
    cap = d.ctx.truncation
    values = d.values
    out = {}
    for mono, coeff in t.terms.items():
        for k, letter in enumerate(mono):
            prefix, suffix = mono[:k], mono[k + 1 :]
            room = cap - len(mono) + 1
            for vmono, vc in values[letter].terms.items():
                if len(vmono) > room:
                    continue
                key = prefix + vmono + suffix
                acc = out.get(key)
                val = coeff * vc
                out[key] = val if acc is None else acc + val
    return Tensor._make(d.ctx, {m: c for m, c in out.items() if c})


def commutator(d1: Derivation, d2: Derivation) -> Derivation:
    """[d1, d2] = d1 d2 - d2 d1, again a derivation, via values on H."""
    d1._check_same(d2)
    values = [
        apply(d1, d2.values[j]) - apply(d2, d1.values[j]) for j in range(d1.ctx.dim)
    ]
    return Derivation(d1.ctx, values)


def is_symplectic_derivation(d: Derivation) -> bool:
    """True iff d kills the symplectic form."""
    return not apply(d, symplectic_form(d.ctx))


def exp_derivation(d: Derivation, t: Tensor, max_terms: int | None = None) -> Tensor:
    """sum_k d^k(t) / k!, accumulated until a term vanishes exactly.

    Termination is certified at runtime, never assumed: a derivation with a
    degree-preserving part need not be nilpotent, so after ``max_terms``
    nonzero terms (default (N+1)(N+2), beyond the worst case for twist
    invariants) the sum is abandoned with an error.
    """
    if t.ctx != d.ctx:
        raise ValueError("context mismatch")
    if max_terms is None:
        n = d.ctx.truncation
        max_terms = (n + 1) * (n + 2)
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    out = t
    term = t
    for k in range(1, max_terms + 1):
        term = apply(d, term)
        if not term:
            return out
        out = out + term.scale(Rat(1, _factorial(k)))
    raise ArithmeticError(
        f"exp_derivation did not terminate within {max_terms} terms"
    )


# -- the omega ideal ----------------------------------------------------------


class OmegaIdealContext:
    """Row-reduced bases, one per degree, of the two-sided ideal generated
    by omega.  Rows are sparse monomial->coefficient maps normalized to a
    unit coefficient at their lexicographically least monomial; reduction
    eliminates pivot monomials in increasing order, and every monomial a
    row introduces is strictly greater than its pivot, so the sweep
    terminates with a canonical residual.
    """

    __slots__ = ("ctx", "pivots")

    def __init__(self, ctx: AlgebraContext):
        self.ctx = ctx
        omega = symplectic_form(ctx).terms
        self.pivots = {}
        indices = range(ctx.dim)
        for n in range(2, ctx.truncation + 1):
            table = {}
            for p in range(n - 1):
                q = n - 2 - p
                for u in product(indices, repeat=p):
                    for v in product(indices, repeat=q):
                        row = {u + w + v: c for w, c in omega.items()}
                        self._insert(table, row)
            self.pivots[n] = table

    @staticmethod
    def _insert(table: dict, row: dict) -> None:
        row = _eliminate(table, row)
        if not row:
            return
        pivot = min(row)
        inv = ONE / row[pivot]
        table[pivot] = {m: c * inv for m, c in row.items()}


def _eliminate(table: dict, vec: dict) -> dict:
    vec = dict(vec)
    heap = sorted(vec)
    queued = set(heap)
    while heap:
        mono = heapq.heappop(heap)
        coeff = vec.get(mono)
        if not coeff:
            continue
        row = table.get(mono)
        if row is None:
            continue
        del vec[mono]
        for m2, c2 in row.items():
            if m2 == mono:
                continue
            acc = vec.get(m2)
            val = -coeff * c2 if acc is None else acc - coeff * c2
            if val:
                vec[m2] = val
                if m2 not in queued:
                    queued.add(m2)
                    heapq.heappush(heap, m2)
            elif acc is not None:
                del vec[m2]
    return vec


def omega_ideal_reduce(t: Tensor, ideal: OmegaIdealContext) -> Tensor:
    """Canonical representative of t modulo the omega ideal."""
    if t.ctx != ideal.ctx:
        raise ValueError("context mismatch")
    out = {}
    for n, table in ideal.pivots.items():
        part = {m: c for m, c in t.terms.items() if len(m) == n}
        if part:
            out.update(_eliminate(table, part))
    for mono, coeff in t.terms.items():
        if len(mono) < 2:
            out[mono] = coeff
    return Tensor._make(t.ctx, out)


def omega_ideal_equal(t1: Tensor, t2: Tensor, ideal: OmegaIdealContext) -> bool:
    return not omega_ideal_reduce(t1 - t2, ideal)


# -- serialization ------------------------------------------------------------


def derivation_to_json(d: Derivation) -> dict:
    """Tensor-view JSON.  Exact whenever the defining tensor fits the
    truncation, which holds for every derivation built by from_tensor."""
    obj = tensor_to_json(to_tensor(d))
    obj["view"] = "tensor"
    return obj


def derivation_from_json(obj: dict, ctx: AlgebraContext | None = None) -> Derivation:
    if not isinstance(obj, dict) or obj.get("view") != "tensor":
        raise ValueError('derivation JSON must be tagged {"view": "tensor"}')
    rest = {k: v for k, v in obj.items() if k != "view"}
    return from_tensor(tensor_from_json(rest, ctx))
