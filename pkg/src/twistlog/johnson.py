"""The loop invariant, total Johnson maps and their components, the
algebraic Goldman-side action, and certificate-producing verifiers.

Curves are symbolic: the adapted non-separating curve (underlying a1), the
adapted separating curves gamma_h, and twist-conjugates of either.  The
invariant L(w) = (1/2) N(ell(w) ell(w)) names a derivation; for a simple
closed curve word it is the logarithm of the corresponding Dehn twist, and
the verifiers below check exactly that against independently computed twist
actions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclic import cyclic_n
from .derivation import (
    Derivation,
    _factorial,
    apply as apply_derivation,
    exp_derivation,
    from_tensor,
    graded_component,
    to_tensor,
)
from .endomorphism import Endomorphism, solve_generator_images
from .expansion import Expansion, evaluate, is_symplectic, log_evaluate
from .rationals import Rat
from .tensor import (
    AlgebraContext,
    Tensor,
    basis_tensor,
    filtration_degree,
    graded_part,
    one_tensor,
    truncate,
    zero_tensor,
)
from .words import (
    FreeAutomorphism,
    GroupWord,
    apply_automorphism,
    compose,
    gen_name,
    generator_word,
    handle_word,
    invert_automorphism,
    twist_nonseparating,
    twist_separating,
    word_to_string,
)


def l_invariant_tensor(theta: Expansion, w: GroupWord) -> Tensor:
    """The naming tensor (1/2) N(ell(w) ell(w)), one degree above the
    expansion truncation.

    The square's degree-(N+1) part only involves factors of degree <= N, so
    it is exactly determined by ell mod degree N+1; keeping it makes the
    derivation view complete on the truncated algebra (a degree-(N+1)
    monomial still acts nontrivially, sending degree 1 to degree N).
    """
    ctx = theta.ctx
    ext = AlgebraContext(ctx.genus, ctx.truncation + 1)
    ell = truncate(log_evaluate(theta, w), ext)
    return cyclic_n(ell * ell).scale(Rat(1, 2))


def l_invariant(theta: Expansion, w: GroupWord) -> Derivation:
    """L(w): the derivation named by (1/2) N(ell(w) ell(w))."""
    ctx = theta.ctx
    d = from_tensor(l_invariant_tensor(theta, w))
    return Derivation(ctx, [truncate(v, ctx) for v in d.values])


# -- curves -------------------------------------------------------------------


@dataclass(frozen=True)
class Curve:
    """Symbolic simple closed curve: an adapted one, or a mapping-class
    conjugate of an adapted one."""

    kind: str  # "nonsep" | "sep" | "conj"
    h: int | None = None
    phi: FreeAutomorphism | None = None
    base: "Curve | None" = None


def nonsep_curve() -> Curve:
    return Curve("nonsep")


def sep_curve(h: int) -> Curve:
    return Curve("sep", h=h)


def conjugated_curve(phi: FreeAutomorphism, base: Curve) -> Curve:
    if base.kind == "conj":
        raise ValueError("conjugate an adapted curve, not another conjugate")
    return Curve("conj", phi=phi, base=base)


def curve_word(genus: int, curve: Curve) -> GroupWord:
    """A based loop word in the free homotopy class of the curve."""
    if curve.kind == "nonsep":
        return generator_word(genus, 0)
    if curve.kind == "sep":
        return handle_word(genus, curve.h)
    if curve.kind == "conj":
        return apply_automorphism(curve.phi, curve_word(genus, curve.base))
    raise ValueError(f"unknown curve kind {curve.kind!r}")


def curve_twist(genus: int, curve: Curve) -> FreeAutomorphism:
    """The Dehn twist along the curve, as a free-group automorphism."""
    if curve.kind == "nonsep":
        return twist_nonseparating(genus)
    if curve.kind == "sep":
        return twist_separating(genus, curve.h)
    if curve.kind == "conj":
        inner = curve_twist(genus, curve.base)
        return compose(compose(curve.phi, inner), invert_automorphism(curve.phi))
    raise ValueError(f"unknown curve kind {curve.kind!r}")


def describe_curve(curve: Curve) -> str:
    if curve.kind == "nonsep":
        return "nonsep"
    if curve.kind == "sep":
        return f"sep:{curve.h}"
    fact = curve.phi.factorization
    if fact is not None:
        twists = ",".join(
            f"{kind}{h if h is not None else ''}^{power}" for kind, h, power in fact
        )
    else:
        twists = "user"
    return f"conj({twists}):{describe_curve(curve.base)}"


# -- total Johnson maps --------------------------------------------------------


class TotalJohnsonMap:
    """T(phi), the algebra automorphism with T(theta(x_i)) = theta(phi(x_i)).

    Generator images are stored outright; the action on arbitrary tensors
    is recovered by the triangular change of generators, solved on demand.
    """

    __slots__ = ("theta", "phi", "images", "_endo")

    def __init__(self, theta: Expansion, phi: FreeAutomorphism):
        if theta.genus != phi.genus:
            raise ValueError("genus mismatch between expansion and automorphism")
        self.theta = theta
        self.phi = phi
        self.images = tuple(
            evaluate(theta, apply_automorphism(phi, generator_word(theta.genus, i)))
            for i in range(theta.ctx.dim)
        )
        self._endo = None

    @property
    def ctx(self) -> AlgebraContext:
        return self.theta.ctx

    def _solve(self, cap: int | None = None) -> Endomorphism:
        if cap is None and self._endo is not None:
            return self._endo
        ctx = self.ctx
        one = one_tensor(ctx)
        sources = [
            evaluate(self.theta, generator_word(ctx.genus, i)) - one
            for i in range(ctx.dim)
        ]
        targets = [im - one for im in self.images]
        endo = Endomorphism(ctx, solve_generator_images(ctx, sources, targets, cap=cap))
        if cap is None:
            self._endo = endo
        return endo

    def endomorphism(self) -> Endomorphism:
        return self._solve()

    def apply(self, t: Tensor) -> Tensor:
        return self._solve().apply(t)


def total_johnson(theta: Expansion, phi: FreeAutomorphism) -> TotalJohnsonMap:
    return TotalJohnsonMap(theta, phi)


def homology_action(phi: FreeAutomorphism, ctx: AlgebraContext) -> list:
    """[phi(x_j)] for each generator, as degree-1 tensors."""
    out = []
    for im in phi.images:
        counts = {}
        for g, s in im.letters:
            counts[g] = counts.get(g, 0) + s
        out.append(
            Tensor._make(ctx, {(g,): Rat(c) for g, c in counts.items() if c})
        )
    return out


def _homology_inverse(phi: FreeAutomorphism, ctx: AlgebraContext) -> list:
    """|phi|^{-1} on the basis of H, by exact Gauss-Jordan elimination."""
    n = ctx.dim
    mat = [[Rat(0)] * n for _ in range(n)]
    for j, im in enumerate(phi.images):
        for g, s in im.letters:
            mat[g][j] = mat[g][j] + s
    inv = [[Rat(1) if i == j else Rat(0) for j in range(n)] for i in range(n)]
    for c in range(n):
        pivot = next(r for r in range(c, n) if mat[r][c])
        if pivot != c:
            mat[c], mat[pivot] = mat[pivot], mat[c]
            inv[c], inv[pivot] = inv[pivot], inv[c]
        scale = Rat(1) / mat[c][c]
        mat[c] = [x * scale for x in mat[c]]
        inv[c] = [x * scale for x in inv[c]]
        for r in range(n):
            if r != c and mat[r][c]:
                f = mat[r][c]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[c])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[c])]
    return [
        Tensor._make(ctx, {(i,): inv[i][j] for i in range(n) if inv[i][j]})
        for j in range(n)
    ]


class JohnsonComponent:
    """Values of tau_k on the basis of H: homogeneous degree-(k+1) tensors."""

    __slots__ = ("ctx", "k", "values")

    def __init__(self, ctx: AlgebraContext, k: int, values):
        values = tuple(values)
        if len(values) != ctx.dim:
            raise ValueError(f"expected {ctx.dim} values")
        for v in values:
            if v.ctx != ctx:
                raise ValueError("context mismatch in component values")
            if any(len(m) != k + 1 for m in v.terms):
                raise ValueError(f"component {k} values must be homogeneous of degree {k + 1}")
        self.ctx = ctx
        self.k = k
        self.values = values

    def __eq__(self, other):
        return (
            isinstance(other, JohnsonComponent)
            and self.ctx == other.ctx
            and self.k == other.k
            and self.values == other.values
        )

    def __bool__(self):
        return any(self.values)

    def __repr__(self):
        return f"JohnsonComponent(k={self.k}, genus={self.ctx.genus})"


def johnson_component(theta: Expansion, phi: FreeAutomorphism, k: int) -> JohnsonComponent:
    """tau_k(phi): degree-(k+1) part of T(phi) o |phi|^{-1} on H.

    The change-of-generators solve is capped at degree k+1; components never
    pay for the full truncation.
    """
    ctx = theta.ctx
    if not 1 <= k <= ctx.truncation - 1:
        raise ValueError(f"component {k} out of range at truncation {ctx.truncation}")
    tj = TotalJohnsonMap(theta, phi)
    values = tj._solve(cap=k + 1).h_values
    inv = _homology_inverse(phi, ctx)
    out = []
    for j in range(ctx.dim):
        acc = zero_tensor(ctx)
        for (i,), c in inv[j].terms.items():
            acc = acc + values[i].scale(c)
        out.append(graded_part(acc, k + 1))
    return JohnsonComponent(ctx, k, out)


def _compositions(total: int, n: int, minimum: int):
    """Ordered n-tuples of integers >= minimum summing to total."""
    if n == 1:
        if total >= minimum:
            yield (total,)
        return
    for first in range(minimum, total - minimum * (n - 1) + 1):
        for rest in _compositions(total - first, n - 1, minimum):
            yield (first,) + rest


def separating_tau_formula(theta: Expansion, h: int, k: int) -> JohnsonComponent:
    """The closed-form tau_k of the twist along gamma_h:
    sum over 1 <= n <= k/2 of ((-1)^n / n!) sum L_{m_1}...L_{m_n} with every
    m_i >= 4 and m_1 + ... + m_n = 2n + k.  Computed from the invariant
    alone, independently of johnson_component.
    """
    ctx = theta.ctx
    if not 1 <= k <= ctx.truncation - 1:
        raise ValueError(f"component {k} out of range at truncation {ctx.truncation}")
    out = [zero_tensor(ctx)] * ctx.dim
    if k < 2:
        return JohnsonComponent(ctx, k, out)
    # the top term L_{k+2} exists for every k <= N-1: the invariant keeps
    # its complete degree-(N+1) component
    L = l_invariant(theta, handle_word(ctx.genus, h))
    parts = {m: graded_component(L, m) for m in range(4, k + 3)}
    for n in range(1, k // 2 + 1):
        coeff = Rat((-1) ** n, _factorial(n))
        for comp in _compositions(2 * n + k, n, 4):
            for j in range(ctx.dim):
                acc = basis_tensor(ctx, j)
                for m in reversed(comp):
                    acc = apply_derivation(parts[m], acc)
                if acc:
                    out[j] = out[j] + acc.scale(coeff)
    return JohnsonComponent(ctx, k, out)


# -- the Goldman-side action ---------------------------------------------------


def _require_symplectic(theta: Expansion) -> None:
    if not is_symplectic(theta):
        raise ValueError("operation requires a symplectic expansion")


def sigma_act(theta: Expansion, u: GroupWord, v: GroupWord) -> Tensor:
    """Action of the free loop u on v, pushed through theta:
    -(N(theta(u) - 1)) acting as a derivation on theta(v).

    The degree-(N+1) part of theta(u) is not determined at this truncation,
    so the result's top degree omits its contribution; degrees below the
    truncation degree are exact.
    """
    _require_symplectic(theta)
    lam = from_tensor(cyclic_n(evaluate(theta, u) - one_tensor(theta.ctx)))
    return -apply_derivation(lam, evaluate(theta, v))


def sigma_act_log_square(theta: Expansion, x: GroupWord, v: GroupWord) -> Tensor:
    """Action of (log x)^2, pushed through theta: the loop-ring element maps
    to ell(x)^2, so the acting derivation is -N(ell(x) ell(x)) = -2 L(x)."""
    _require_symplectic(theta)
    return apply_derivation(l_invariant(theta, x), evaluate(theta, v)).scale(-2)


# -- certificates ---------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    check: str
    params: dict
    status: str
    witness: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def certificate_to_json(cert: Certificate) -> dict:
    obj = {"check": cert.check, "params": cert.params, "status": cert.status}
    if cert.witness is not None:
        obj["witness"] = cert.witness
    return obj


def _passfail(check: str, params: dict, failures: list) -> Certificate:
    if failures:
        return Certificate(check, params, "fail", "; ".join(failures))
    return Certificate(check, params, "pass")


def verify_dehn_twist_formula(theta: Expansion, curve: Curve) -> Certificate:
    """exp(-L(C)) versus the twist action theta(t_C(x_i)), per generator."""
    _require_symplectic(theta)
    ctx = theta.ctx
    params = {
        "curve": describe_curve(curve),
        "genus": ctx.genus,
        "truncation": ctx.truncation,
    }
    word = curve_word(ctx.genus, curve)
    tc = curve_twist(ctx.genus, curve)
    minus_l = -l_invariant(theta, word)
    failures = []
    for i in range(ctx.dim):
        gen = generator_word(ctx.genus, i)
        lhs = exp_derivation(minus_l, evaluate(theta, gen))
        rhs = evaluate(theta, apply_automorphism(tc, gen))
        if lhs != rhs:
            degree = filtration_degree(lhs - rhs)
            failures.append(f"generator {gen_name(i)} first differs in degree {degree}")
            break
    return _passfail("dehn_twist_formula", params, failures)


def verify_nilpotent_dependence(
    theta: Expansion, w1: GroupWord, w2: GroupWord, k: int
) -> Certificate:
    """L_i(w1) = L_i(w2) for 2 <= i <= k+1; meaningful when the caller knows
    w1 and w2 agree modulo the (k+1)-st lower central subgroup up to
    conjugacy and inversion."""
    ctx = theta.ctx
    if k + 1 > ctx.truncation + 1:
        raise ValueError(f"k={k} needs degree {k + 1}, beyond truncation {ctx.truncation}")
    params = {
        "w1": word_to_string(w1),
        "w2": word_to_string(w2),
        "k": k,
        "genus": ctx.genus,
        "truncation": ctx.truncation,
    }
    t1 = l_invariant_tensor(theta, w1)
    t2 = l_invariant_tensor(theta, w2)
    failures = []
    for i in range(2, k + 2):
        if graded_part(t1, i) != graded_part(t2, i):
            failures.append(f"L_{i} differs")
    return _passfail("nilpotent_dependence", params, failures)


def verify_operator_identities(theta: Expansion, curve: Curve) -> Certificate:
    """The nilpotency and composition identities of the low components of
    L(C) for non-separating C, plus the closed formulas for tau_1, tau_2:

      L2 L2 = L2 L3 = L3 L2 = 0                     on H
      L2 L2 L2 L4 = L2 L2 L4 L2 = 0                 on H
      2 L2 L4 L2 = L2 L2 L4                         on H
      tau_1(t_C) = -L3
      tau_2(t_C) = -L4 + (1/2)[L2, L4] + (1/2) L3 L3
    """
    _require_symplectic(theta)
    base_kind = curve.base.kind if curve.kind == "conj" else curve.kind
    if base_kind != "nonsep":
        raise ValueError("operator identities hold along non-separating curves")
    ctx = theta.ctx
    params = {
        "curve": describe_curve(curve),
        "genus": ctx.genus,
        "truncation": ctx.truncation,
    }
    word = curve_word(ctx.genus, curve)
    tc = curve_twist(ctx.genus, curve)
    L = l_invariant(theta, word)
    l2 = graded_component(L, 2)
    l3 = graded_component(L, 3)
    l4 = graded_component(L, 4)

    def l2_(t):
        return apply_derivation(l2, t)

    def l3_(t):
        return apply_derivation(l3, t)

    def l4_(t):
        return apply_derivation(l4, t)

    tau1 = johnson_component(theta, tc, 1)
    tau2 = johnson_component(theta, tc, 2)
    failures = []
    for j in range(ctx.dim):
        x = basis_tensor(ctx, j)
        name = ctx.basis_name(j)
        l2x, l3x, l4x = l2_(x), l3_(x), l4_(x)
        if l2_(l2x):
            failures.append(f"L2 L2 {name} != 0")
        if l2_(l3x):
            failures.append(f"L2 L3 {name} != 0")
        if l3_(l2x):
            failures.append(f"L3 L2 {name} != 0")
        if l2_(l2_(l2_(l4x))):
            failures.append(f"L2 L2 L2 L4 {name} != 0")
        if l2_(l2_(l4_(l2x))):
            failures.append(f"L2 L2 L4 L2 {name} != 0")
        if l2_(l4_(l2x)).scale(2) != l2_(l2_(l4x)):
            failures.append(f"2 L2 L4 L2 {name} != L2 L2 L4 {name}")
        if tau1.values[j] != -l3x:
            failures.append(f"tau_1 {name} != -L3 {name}")
        rhs = (
            -l4x
            + (l2_(l4x) - l4_(l2x)).scale(Rat(1, 2))
            + l3_(l3x).scale(Rat(1, 2))
        )
        if tau2.values[j] != rhs:
            failures.append(f"tau_2 {name} formula mismatch")
    return _passfail("operator_identities", params, failures)
