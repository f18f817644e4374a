"""Truncated tensor algebra over the first homology of a genus-g surface.

H carries the symplectic basis A_1, B_1, ..., A_g, B_g, flat-indexed by the
fixed convention 2i-2 <-> A_i and 2i-1 <-> B_i.  A Tensor is a finite sparse
table mapping monomials (tuples of basis indices) to exact rationals; the
completed algebra is modelled by truncating every product at a hard degree
bound N carried by the ambient context.  Tensors are immutable values and
every operation is a pure function, so concurrent evaluation needs no
coordination.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterable

from .rationals import ONE, Rat, rat_from_string, rat_to_string

Monomial = tuple  # tuple of basis indices; length is the tensor degree


class AlgebraContext:
    """Genus, truncation bound, and the symplectic intersection form."""

    __slots__ = ("genus", "truncation", "dim")

    def __init__(self, genus: int, truncation: int):
        if genus < 1:
            raise ValueError(f"genus must be >= 1, got {genus}")
        if truncation < 2:
            raise ValueError(f"truncation must be >= 2, got {truncation}")
        self.genus = genus
        self.truncation = truncation
        self.dim = 2 * genus

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraContext)
            and self.genus == other.genus
            and self.truncation == other.truncation
        )

    def __hash__(self):
        return hash((self.genus, self.truncation))

    def __repr__(self):
        return f"AlgebraContext(genus={self.genus}, truncation={self.truncation})"

    def basis_name(self, index: int) -> str:
        self.check_index(index)
        letter = "A" if index % 2 == 0 else "B"
        return f"{letter}{index // 2 + 1}"

    def basis_index(self, name: str) -> int:
        kind, num = name[:1], name[1:]
        if kind not in ("A", "B") or not num.isdigit():
            raise ValueError(f"unknown basis vector {name!r}")
        i = int(num)
        if not 1 <= i <= self.genus:
            raise ValueError(f"basis vector {name!r} out of range for genus {self.genus}")
        return 2 * i - 2 + (1 if kind == "B" else 0)

    def check_index(self, index: int) -> None:
        if not 0 <= index < self.dim:
            raise ValueError(f"basis index {index} out of range for genus {self.genus}")


def intersection(ctx: AlgebraContext, x: int, y: int):
    """Intersection pairing on basis vectors: (A_i . B_i) = 1, antisymmetric,
    zero on all other basis pairs."""
    ctx.check_index(x)
    ctx.check_index(y)
    if x ^ 1 != y:  # not a partner pair A_i/B_i
        return Rat(0)
    return ONE if x % 2 == 0 else -ONE


class Tensor:
    """Element of the tensor algebra truncated at the context's degree bound.

    ``terms`` maps monomials to nonzero rationals.  Tensors interoperate only
    when genus and truncation agree; arithmetic silently drops every product
    monomial of degree above the truncation.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraContext, terms: dict | None = None):
        self.ctx = ctx
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                mono = tuple(mono)
                if len(mono) > ctx.truncation:
                    raise ValueError(
                        f"monomial of degree {len(mono)} exceeds truncation {ctx.truncation}"
                    )
                for idx in mono:
                    ctx.check_index(idx)
                coeff = coeff if isinstance(coeff, type(ONE)) else Rat(coeff)
                if coeff:
                    clean[mono] = coeff
        self.terms = clean

    @classmethod
    def _make(cls, ctx: AlgebraContext, terms: dict) -> "Tensor":
        # trusted constructor: terms already pruned, monomials already tuples
        t = object.__new__(cls)
        t.ctx = ctx
        t.terms = terms
        return t

    # -- queries ----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            if other == 0:
                return not self.terms
            other = scalar_tensor(self.ctx, other)
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def coefficient(self, mono: Iterable[int]):
        return self.terms.get(tuple(mono), Rat(0))

    def degrees(self):
        return sorted({len(m) for m in self.terms})

    # -- arithmetic --------------------------------------------------------

    def _check_same(self, other: "Tensor") -> None:
        if self.ctx != other.ctx:
            raise ValueError(f"context mismatch: {self.ctx} vs {other.ctx}")

    def __add__(self, other):
        if not isinstance(other, Tensor):
            other = scalar_tensor(self.ctx, other)
        self._check_same(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = out.get(mono)
            if acc is None:
                out[mono] = coeff
            else:
                acc = acc + coeff
                if acc:
                    out[mono] = acc
                else:
                    del out[mono]
        return Tensor._make(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Tensor._make(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Tensor):
            other = scalar_tensor(self.ctx, other)
        return self + (-other)

    def __rsub__(self, other):
        return scalar_tensor(self.ctx, other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Tensor):
            return self.scale(other)
        self._check_same(other)
        cap = self.ctx.truncation
        buckets = {}
        for mono, coeff in other.terms.items():
            buckets.setdefault(len(mono), []).append((mono, coeff))
        degrees = sorted(buckets)
        out = {}
        get = out.get
        for m1, c1 in self.terms.items():
            room = cap - len(m1)
            for deg in degrees:
                if deg > room:
                    break
                for m2, c2 in buckets[deg]:
                    key = m1 + m2
                    acc = get(key)
                    out[key] = c1 * c2 if acc is None else acc + c1 * c2
        return Tensor._make(self.ctx, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        # scalars commute; Tensor*Tensor never reaches here
        return self.scale(other)

    def scale(self, scalar):
        scalar = scalar if isinstance(scalar, type(ONE)) else Rat(scalar)
        if not scalar:
            return Tensor._make(self.ctx, {})
        return Tensor._make(self.ctx, {m: c * scalar for m, c in self.terms.items()})

    def __truediv__(self, scalar):
        return self.scale(ONE / Rat(scalar))

    def __repr__(self):
        if not self.terms:
            return "Tensor(0)"
        bits = []
        for mono in sorted(self.terms):
            name = "1" if not mono else "".join(self.ctx.basis_name(i) for i in mono)
            bits.append(f"{rat_to_string(self.terms[mono])}*{name}")
        return "Tensor(" + " + ".join(bits) + ")"


# -- constructors ----------------------------------------------------------


def zero_tensor(ctx: AlgebraContext) -> Tensor:
    return Tensor._make(ctx, {})


def scalar_tensor(ctx: AlgebraContext, value) -> Tensor:
    value = value if isinstance(value, type(ONE)) else Rat(value)
    return Tensor._make(ctx, {(): value} if value else {})


def one_tensor(ctx: AlgebraContext) -> Tensor:
    return scalar_tensor(ctx, 1)


def basis_tensor(ctx: AlgebraContext, index: int) -> Tensor:
    ctx.check_index(index)
    return Tensor._make(ctx, {(index,): ONE})


def monomial_tensor(ctx: AlgebraContext, mono: Iterable[int], coeff=1) -> Tensor:
    return Tensor(ctx, {tuple(mono): coeff})


def symplectic_form(ctx: AlgebraContext) -> Tensor:
    """omega = sum_i A_i B_i - B_i A_i, the degree-2 dual of the intersection
    form; it is a Lie element ([A_i, B_i] summed over handles)."""
    terms = {}
    for i in range(ctx.genus):
        a, b = 2 * i, 2 * i + 1
        terms[(a, b)] = ONE
        terms[(b, a)] = -ONE
    return Tensor._make(ctx, terms)


# -- grading ---------------------------------------------------------------


def graded_part(t: Tensor, m: int) -> Tensor:
    if not 0 <= m <= t.ctx.truncation:
        raise ValueError(f"degree {m} out of range [0, {t.ctx.truncation}]")
    return Tensor._make(t.ctx, {k: c for k, c in t.terms.items() if len(k) == m})


def filtration_degree(t: Tensor) -> int:
    """Least degree with a nonzero term; N+1 for the zero tensor."""
    if not t.terms:
        return t.ctx.truncation + 1
    return min(len(m) for m in t.terms)


def truncate(t: Tensor, ctx: AlgebraContext) -> Tensor:
    """Re-home ``t`` in another context of the same genus, dropping degrees
    above the new truncation.  Raising the truncation is allowed; the extra
    degrees are simply absent."""
    if ctx.genus != t.ctx.genus:
        raise ValueError("genus mismatch")
    if ctx == t.ctx:
        return t
    cap = ctx.truncation
    return Tensor._make(ctx, {m: c for m, c in t.terms.items() if len(m) <= cap})


# -- antisymmetrization ----------------------------------------------------

_SIGNS = {}


def _perm_signs(k: int):
    cached = _SIGNS.get(k)
    if cached is None:
        cached = []
        for perm in permutations(range(k)):
            inv = sum(
                1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j]
            )
            cached.append((perm, -ONE if inv % 2 else ONE))
        _SIGNS[k] = cached
    return cached


def wedge_embed(vectors, k: int | None = None) -> Tensor:
    """Embed X_1 ^ ... ^ X_k into H^{tensor k} by full antisymmetrization:
    sum over permutations of sign(s) X_{s(1)} ... X_{s(k)}.  In particular
    X ^ Y = [X, Y]."""
    vectors = list(vectors)
    if k is None:
        k = len(vectors)
    if k != len(vectors):
        raise ValueError(f"expected {k} vectors, got {len(vectors)}")
    if not vectors:
        raise ValueError("empty wedge")
    ctx = vectors[0].ctx
    if k > ctx.truncation:
        raise ValueError(f"wedge degree {k} exceeds truncation {ctx.truncation}")
    for v in vectors:
        if v.ctx != ctx:
            raise ValueError("context mismatch in wedge")
        if any(len(m) != 1 for m in v.terms):
            raise ValueError("wedge_embed inputs must be homogeneous of degree 1")
    out = zero_tensor(ctx)
    for perm, sign in _perm_signs(k):
        prod = scalar_tensor(ctx, sign)
        for p in perm:
            prod = prod * vectors[p]
        out = out + prod
    return out


def antisymmetrize(t: Tensor) -> Tensor:
    """Degreewise projector onto the image of wedge_embed:
    (1/k!) sum over permutations of sign(s) . (permuted monomial)."""
    out = {}
    for mono, coeff in t.terms.items():
        k = len(mono)
        if k <= 1:
            out[mono] = out.get(mono, Rat(0)) + coeff
            continue
        signs = _perm_signs(k)
        share = coeff / len(signs)
        for perm, sign in signs:
            key = tuple(mono[p] for p in perm)
            out[key] = out.get(key, Rat(0)) + sign * share
    return Tensor._make(t.ctx, {m: c for m, c in out.items() if c})


# -- serialization ---------------------------------------------------------


def tensor_to_json(t: Tensor) -> dict:
    """Canonical JSON form: monomials sorted lexicographically, coefficients
    as reduced 'p/q' strings, no zero terms."""
    return {
        "genus": t.ctx.genus,
        "truncation": t.ctx.truncation,
        "terms": [
            {"mono": list(map(int, mono)), "coeff": rat_to_string(t.terms[mono])}
            for mono in sorted(t.terms)
        ],
    }


def tensor_from_json(obj: dict, ctx: AlgebraContext | None = None) -> Tensor:
    if not isinstance(obj, dict):
        raise ValueError("tensor JSON must be an object")
    for field in ("genus", "truncation", "terms"):
        if field not in obj:
            raise ValueError(f"tensor JSON missing field {field!r}")
    parsed = AlgebraContext(obj["genus"], obj["truncation"])
    if ctx is not None and ctx != parsed:
        raise ValueError(f"tensor JSON context {parsed} does not match expected {ctx}")
    terms = {}
    for entry in obj["terms"]:
        mono = tuple(entry["mono"])
        if mono in terms:
            raise ValueError(f"duplicate monomial {list(mono)} in tensor JSON")
        coeff = rat_from_string(entry["coeff"])
        if not coeff:
            raise ValueError(f"zero coefficient stored for monomial {list(mono)}")
        terms[mono] = coeff
    return Tensor(parsed, terms)


# free-function aliases for the operator methods
def add(t1: Tensor, t2: Tensor) -> Tensor:
    return t1 + t2


def multiply(t1: Tensor, t2: Tensor) -> Tensor:
    if not isinstance(t2, Tensor):
        raise ValueError("multiply expects two tensors")
    return t1 * t2
