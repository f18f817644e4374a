"""Magnus expansions: evaluation, fixtures, the symplectic builder, and
connecting automorphisms.

An expansion is stored through the logarithms of its generator values, one
Lie-or-general tensor per free-group generator.  Storing logs makes the
homomorphism condition structural: evaluation is a product of exponentials.
A ``None`` log marks a generator the expansion does not determine, which
happens only for the shipped partial fixture.

The builder turns any group-like seed into a symplectic expansion one degree
at a time: at degree m it measures the defect of the boundary condition,
rewrites the defect through the bracketing map, and pushes each term into a
degree-(m-1) correction of one generator log.  Corrections are brackets, so
group-likeness is preserved by construction, and every higher-order side
effect of a correction lands strictly above m, which is what makes the sweep
converge.
"""

from __future__ import annotations

import json
import os
from importlib import resources

from .endomorphism import Endomorphism, solve_generator_images
from .lie import bracket, exp, is_lie, log, _phi_monomial
from .rationals import Rat, rat_from_string
from .tensor import (
    AlgebraContext,
    Tensor,
    basis_tensor,
    graded_part,
    one_tensor,
    symplectic_form,
    tensor_from_json,
    tensor_to_json,
    truncate,
    zero_tensor,
)
from .words import GroupWord, boundary_word, gen_name

EXPANSION_KINDS = (
    "standard",
    "exponential",
    "fixture-genus1",
    "fixture-genus2",
    "fixture-massuyeau-partial",
    "built",
    "user",
)


class Expansion:
    """Magnus expansion given by the log of its value on each generator.

    logs[i] is ell(x_i) for the generator with flat index i (a1, b1, a2, ...);
    the degree-0 part must vanish and the degree-1 part must be the
    generator's own homology class.
    """

    __slots__ = ("ctx", "kind", "logs", "_exp_cache")

    def __init__(self, ctx: AlgebraContext, logs, kind: str = "user"):
        if kind not in EXPANSION_KINDS:
            raise ValueError(f"unknown expansion kind {kind!r}")
        logs = tuple(logs)
        if len(logs) != ctx.dim:
            raise ValueError(f"expected {ctx.dim} generator logs, got {len(logs)}")
        for i, t in enumerate(logs):
            if t is None:
                continue
            if t.ctx != ctx:
                raise ValueError(f"log of {gen_name(i)} lives in the wrong context")
            if t.coefficient(()):
                raise ValueError(f"log of {gen_name(i)} has a nonzero constant term")
            if graded_part(t, 1) != basis_tensor(ctx, i):
                raise ValueError(
                    f"log of {gen_name(i)} must have degree-1 part equal to its homology class"
                )
        self.ctx = ctx
        self.kind = kind
        self.logs = logs
        self._exp_cache = {}

    @property
    def genus(self) -> int:
        return self.ctx.genus

    @property
    def truncation(self) -> int:
        return self.ctx.truncation

    @property
    def partial(self) -> bool:
        return any(t is None for t in self.logs)

    def log_of(self, index: int) -> Tensor:
        t = self.logs[index]
        if t is None:
            raise ValueError(
                f"partial expansion does not determine the generator {gen_name(index)}"
            )
        return t

    def _exp_letter(self, index: int, sign: int) -> Tensor:
        key = (index, sign)
        cached = self._exp_cache.get(key)
        if cached is None:
            t = self.log_of(index)
            cached = exp(t if sign == 1 else -t)
            self._exp_cache[key] = cached
        return cached

    def __eq__(self, other):
        return (
            isinstance(other, Expansion)
            and self.ctx == other.ctx
            and self.logs == other.logs
        )

    def __repr__(self):
        return f"Expansion(kind={self.kind!r}, genus={self.genus}, truncation={self.truncation})"


def evaluate(theta: Expansion, w: GroupWord) -> Tensor:
    """theta(w): product over the letters of exp(+-log), an element of
    1 + T-hat_1."""
    if w.genus != theta.genus:
        raise ValueError(f"word genus {w.genus} != expansion genus {theta.genus}")
    out = one_tensor(theta.ctx)
    for index, sign in w.letters:
        out = out * theta._exp_letter(index, sign)
    return out


def log_evaluate(theta: Expansion, w: GroupWord) -> Tensor:
    """ell(w) = log theta(w)."""
    return log(evaluate(theta, w))


def is_group_like(theta: Expansion) -> bool:
    """True iff every determined generator log is a Lie element; values on
    the whole group then follow by Baker-Campbell-Hausdorff."""
    return all(t is None or is_lie(t) for t in theta.logs)


def boundary_log(theta: Expansion) -> Tensor:
    """ell(zeta) for the boundary word zeta = prod [a_i, b_i]."""
    return log_evaluate(theta, boundary_word(theta.genus))


def is_symplectic(theta: Expansion) -> bool:
    """Group-like and ell(zeta) = omega, both exact at the truncation."""
    if theta.partial:
        raise ValueError("partial expansion: the boundary value is undetermined")
    if not is_group_like(theta):
        return False
    return boundary_log(theta) == symplectic_form(theta.ctx)


# -- built-in expansions -----------------------------------------------------


def standard_expansion(genus: int, truncation: int) -> Expansion:
    """theta(x_i) = 1 + X_i; not group-like."""
    ctx = AlgebraContext(genus, truncation)
    logs = [log(one_tensor(ctx) + basis_tensor(ctx, i)) for i in range(ctx.dim)]
    return Expansion(ctx, logs, kind="standard")


def exponential_expansion(genus: int, truncation: int) -> Expansion:
    """theta(x_i) = exp(X_i); group-like but not symplectic for N >= 3."""
    ctx = AlgebraContext(genus, truncation)
    logs = [basis_tensor(ctx, i) for i in range(ctx.dim)]
    return Expansion(ctx, logs, kind="exponential")


_FIXTURE_FILES = {
    "fixture-genus1": "genus1.json",
    "fixture-genus2": "genus2.json",
    "fixture-massuyeau-partial": "massuyeau_partial.json",
}


def _data_text(filename: str) -> str:
    override = os.environ.get("TWISTLOG_DATA_DIR")
    if override:
        with open(os.path.join(override, filename), "r", encoding="utf-8") as fh:
            return fh.read()
    return resources.files("twistlog.data").joinpath(filename).read_text("utf-8")


def _tree_tensor(ctx: AlgebraContext, tree) -> Tensor:
    # a tree is a basis name ("A1") or a two-element list [left, right]
    if isinstance(tree, str):
        return basis_tensor(ctx, ctx.basis_index(tree))
    if isinstance(tree, (list, tuple)) and len(tree) == 2:
        return bracket(_tree_tensor(ctx, tree[0]), _tree_tensor(ctx, tree[1]))
    raise ValueError(f"malformed bracket tree: {tree!r}")


def fixture_trusted_degree(kind: str) -> int:
    payload = json.loads(_data_text(_FIXTURE_FILES[kind]))
    return payload["max_trusted_degree"]


def load_fixture(kind: str, truncation: int | None = None, genus: int | None = None) -> Expansion:
    """Load a shipped expansion from its bracket-form data file.

    The data determines the expansion modulo degree ``max_trusted_degree``,
    so the largest honest truncation is one less; asking beyond that is an
    error, never a silent extrapolation.  ``genus`` is only free for the
    partial fixture, whose data is genus-independent.
    """
    if kind not in _FIXTURE_FILES:
        raise ValueError(f"unknown fixture {kind!r}")
    payload = json.loads(_data_text(_FIXTURE_FILES[kind]))
    trusted_cap = payload["max_trusted_degree"] - 1
    if truncation is None:
        truncation = trusted_cap
    if truncation > trusted_cap:
        raise ValueError(
            f"fixture {kind} is only trusted up to truncation {trusted_cap}, "
            f"requested {truncation}"
        )
    file_genus = payload["genus"]
    if file_genus is None:
        genus = 2 if genus is None else genus
    elif genus is None:
        genus = file_genus
    elif genus != file_genus:
        raise ValueError(f"fixture {kind} has genus {file_genus}, requested {genus}")
    ctx = AlgebraContext(genus, truncation)
    logs = [None] * ctx.dim
    for name, entries in payload["generators"].items():
        index = 2 * int(name[1:]) - 2 + (1 if name[0] == "b" else 0)
        acc = zero_tensor(ctx)
        for coeff, tree in entries:
            term = _tree_tensor(ctx, tree)
            if term:  # brackets above the truncation vanish entirely
                acc = acc + term.scale(rat_from_string(coeff))
        logs[index] = acc
    return Expansion(ctx, logs, kind=kind)


def fixture_genus1(truncation: int | None = None) -> Expansion:
    return load_fixture("fixture-genus1", truncation)


def fixture_genus2(truncation: int | None = None) -> Expansion:
    return load_fixture("fixture-genus2", truncation)


def fixture_massuyeau_partial(genus: int = 2, truncation: int | None = None) -> Expansion:
    return load_fixture("fixture-massuyeau-partial", truncation, genus=genus)


# -- the symplectic builder --------------------------------------------------


def _boundary_value(ctx: AlgebraContext, logs) -> Tensor:
    """theta(zeta) from raw logs, grouped handle by handle."""
    out = one_tensor(ctx)
    for i in range(ctx.genus):
        ea = exp(logs[2 * i])
        eb = exp(logs[2 * i + 1])
        handle = ea * eb * exp(-logs[2 * i]) * exp(-logs[2 * i + 1])
        out = out * handle
    return out


def build_symplectic(genus: int, truncation: int, seed: Expansion | None = None) -> Expansion:
    """Deterministic symplectic expansion of the given genus and truncation.

    Starting from a group-like seed (default: the exponential expansion),
    each degree pass m cancels the degree-m defect ell(zeta) - omega by
    bracket corrections to the degree-(m-1) parts of the generator logs.

    Passes run through degree N+1, one beyond the requested truncation: the
    degree-(N+1) defect is already determined by the N-jet (a degree-(N+1)
    log term moves the boundary log only in degrees >= N+2), so cancelling
    it is what makes the result the N-jet of a genuine symplectic expansion
    of the full group.  Identities that are exact mod degree N+1, such as
    the Dehn twist formula, hold for jets but can fail at the top degree
    for merely-truncated data.  A seed that is itself such a jet comes back
    unchanged, and restricting a build to a lower truncation agrees with
    building there directly.
    """
    ctx = AlgebraContext(genus, truncation)
    work_ctx = AlgebraContext(genus, truncation + 1)
    if seed is None:
        seed = exponential_expansion(genus, truncation)
    if seed.genus != genus:
        raise ValueError(f"seed genus {seed.genus} != requested genus {genus}")
    if seed.partial:
        raise ValueError("partial expansion cannot seed the builder")
    logs = [truncate(t, work_ctx) for t in seed.logs]
    for i, t in enumerate(logs):
        if not is_lie(t):
            raise ValueError(f"seed is not group-like: log of {gen_name(i)} is not Lie")
    omega = symplectic_form(work_ctx)
    phi_cache = {}
    for m in range(3, truncation + 2):
        pass_ctx = AlgebraContext(genus, m)
        defect = log(_boundary_value(pass_ctx, [truncate(t, pass_ctx) for t in logs]))
        defect = defect - truncate(omega, pass_ctx)
        if any(len(mono) < m for mono in defect.terms):
            # the previous passes cancelled every lower degree; a leftover
            # means the kernel miscomputed, not that the input was bad
            raise ArithmeticError(f"defect below degree {m} survived pass {m}")
        if not defect:
            continue
        corrections = {}
        check = {}
        for mono in sorted(defect.terms):
            coeff = defect.terms[mono]
            first, tail = mono[0], mono[1:]
            # [first, Phi(tail)] summed with weight coeff/m rebuilds the
            # defect (Dynkin); each term is cancelled through the partner
            # generator of its first letter
            factor = coeff / Rat(m)
            target = first + 1 if first % 2 == 0 else first - 1
            sign = -1 if first % 2 == 0 else 1
            bucket = corrections.setdefault(target, {})
            for sub, c in _phi_monomial(tail, phi_cache).items():
                acc = bucket.get(sub)
                val = factor * (sign * c)
                bucket[sub] = val if acc is None else acc + val
            for sub, c in _phi_monomial(mono, phi_cache).items():
                check[sub] = check.get(sub, 0) + coeff * c
        # Dynkin certificate: Phi(defect) = m * defect for Lie input
        if Tensor(pass_ctx, check) != defect.scale(m):
            raise ArithmeticError(f"degree-{m} defect failed the Lie certificate")
        for target, bucket in corrections.items():
            logs[target] = logs[target] + Tensor._make(
                work_ctx, {mono: c for mono, c in bucket.items() if c}
            )
    return Expansion(ctx, [truncate(t, ctx) for t in logs], kind="built")


# -- connecting automorphisms ------------------------------------------------


class ConnectingAutomorphism:
    """The filtered algebra automorphism U with U(theta1(x)) = theta2(x).

    Stored through its values on H (a substitution endomorphism); both the
    per-degree components u_k and the logarithm restricted to H read off
    from those values.
    """

    __slots__ = ("endo",)

    def __init__(self, endo: Endomorphism):
        self.endo = endo

    @property
    def ctx(self) -> AlgebraContext:
        return self.endo.ctx

    def apply(self, t: Tensor) -> Tensor:
        return self.endo.apply(t)

    def h_values(self) -> tuple:
        return self.endo.h_values

    def u_component(self, k: int) -> list:
        """u_k(X_j) for each basis vector: the degree-(k+1) part of U on H."""
        if not 1 <= k + 1 <= self.ctx.truncation:
            raise ValueError(f"component {k} out of range")
        return [graded_part(v, k + 1) for v in self.endo.h_values]

    def log_h_values(self) -> list:
        return self.endo.log_h_values()

    def is_identity(self) -> bool:
        return all(
            v == basis_tensor(self.ctx, j) for j, v in enumerate(self.endo.h_values)
        )


def connecting_automorphism(theta1: Expansion, theta2: Expansion) -> ConnectingAutomorphism:
    """Solve U o theta1 = theta2 on generators for U's values on H."""
    if theta1.ctx != theta2.ctx:
        raise ValueError("expansions must share genus and truncation")
    if theta1.partial or theta2.partial:
        raise ValueError("partial expansions have no connecting automorphism")
    ctx = theta1.ctx
    one = one_tensor(ctx)
    sources = [evaluate(theta1, _generator(ctx, i)) - one for i in range(ctx.dim)]
    targets = [evaluate(theta2, _generator(ctx, i)) - one for i in range(ctx.dim)]
    values = solve_generator_images(ctx, sources, targets)
    return ConnectingAutomorphism(Endomorphism(ctx, values))


def _generator(ctx: AlgebraContext, index: int) -> GroupWord:
    return GroupWord(ctx.genus, [(index, 1)])


# -- serialization -----------------------------------------------------------


def expansion_to_json(theta: Expansion) -> dict:
    return {
        "genus": theta.genus,
        "truncation": theta.truncation,
        "kind": theta.kind,
        "generators": [
            {"name": gen_name(i), "log": tensor_to_json(t)}
            for i, t in enumerate(theta.logs)
            if t is not None
        ],
    }


def expansion_from_json(obj: dict) -> Expansion:
    if not isinstance(obj, dict):
        raise ValueError("expansion JSON must be an object")
    for field in ("genus", "truncation", "kind", "generators"):
        if field not in obj:
            raise ValueError(f"expansion JSON missing field {field!r}")
    ctx = AlgebraContext(obj["genus"], obj["truncation"])
    kind = obj["kind"]
    logs = [None] * ctx.dim
    seen = set()
    for entry in obj["generators"]:
        name = entry.get("name")
        index = _gen_index(ctx, name)
        if index in seen:
            raise ValueError(f"duplicate generator {name!r} in expansion JSON")
        seen.add(index)
        logs[index] = tensor_from_json(entry["log"], ctx)
    return Expansion(ctx, logs, kind=kind)


def _gen_index(ctx: AlgebraContext, name) -> int:
    if not isinstance(name, str) or len(name) < 2 or name[0] not in ("a", "b"):
        raise ValueError(f"unknown generator name {name!r}")
    try:
        i = int(name[1:])
    except ValueError:
        raise ValueError(f"unknown generator name {name!r}") from None
    if not 1 <= i <= ctx.genus:
        raise ValueError(f"generator {name!r} out of range for genus {ctx.genus}")
    return 2 * i - 2 + (1 if name[0] == "b" else 0)
