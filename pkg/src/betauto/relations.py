"""Relation automaton of an affine numeration semigroup.

The semigroup is generated by the maps x -> beta*x + t over a finite digit
set.  Two equal-length digit words u, v represent the same map iff
sum_i (t_{u_i} - t_{v_i}) * beta^(n-i) = 0; the automaton built here
recognizes exactly the set of such pairs, read synchronously from the left.

States are exact field elements (the accumulated difference); the start and
the unique final state are 0.  Reachability is explored breadth-first, with
certified pruning of states that can provably never return to 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import numfield as nf
from .automata import Automaton, PairLetter, trim
from .numfield import (
    ALGEBRAIC,
    TRANSCENDENTAL,
    BetaContext,
    FieldElem,
    NumFieldError,
    fe_add,
    fe_sub,
    mahler_measure,
    poly_deg,
)


class CapExceeded(RuntimeError):
    """A state or depth cap was hit before the exploration closed."""

    def __init__(self, message: str, stats: dict | None = None):
        super().__init__(message)
        self.stats = stats or {}


class Blocked(RuntimeError):
    """The context has a certified unit-circle conjugate; termination of the
    exploration cannot be guaranteed (pass force=True to run under caps)."""


@dataclass
class RelAutomaton:
    """Relation automaton together with its exact state values."""

    automaton: Automaton
    context: BetaContext
    state_elems: list  # FieldElem per automaton state
    stats: dict = field(default_factory=dict)

    @property
    def n_states(self) -> int:
        return self.automaton.n_states


def _transcendental_prune_data(ctx: BetaContext) -> tuple[int, list[int]]:
    """Degree cap D and per-coefficient caps S for co-reachable states.

    A state q co-reachable to 0 satisfies q = -sum_{j>=1} X^(-j) e_j with
    e_j in A - A, so deg q < max deg(A - A) and the coefficient of X^i is
    bounded by the tail sums of the difference coefficient maxima.
    """
    diffs = [d.coeffs for d in ctx.digit_diffs()]
    deg = max((poly_deg(d) for d in diffs), default=-1)
    if deg <= 0:
        # constant digits: only the zero state can return to 0
        return 0, []
    maxc = [max(abs(d[i]) if i < len(d) else 0 for d in diffs) for i in range(deg + 1)]
    tails = []
    run = 0
    for i in range(deg, -1, -1):
        run += maxc[i]
        tails.append(run)
    tails.reverse()  # tails[i] = sum_{j >= i} maxc[j]
    return deg, tails


class _Pruner:
    """Decides whether a candidate state can provably never return to 0."""

    def __init__(self, ctx: BetaContext):
        self.ctx = ctx
        self.refinements = 0
        self.undecided_keeps = 0
        if ctx.mode == TRANSCENDENTAL:
            self.deg_cap, self.coeff_caps = _transcendental_prune_data(ctx)
        else:
            self._bounds = None

    def _prune_bounds(self) -> dict:
        if self._bounds is None:
            self._bounds = {i: self.ctx.prune_bound(i) for i in self.ctx.expanding_indices()}
        return self._bounds

    def prune(self, x: FieldElem) -> bool:
        if x.is_zero():
            return False
        if self.ctx.mode == TRANSCENDENTAL:
            if x.degree() >= self.deg_cap:
                return True
            return any(abs(c) > s for c, s in zip(x.coeffs, self.coeff_caps))
        while True:
            undecided = False
            for i, (blo, bhi) in self._prune_bounds().items():
                lo, hi = self.ctx.abs_at(x, i)
                if lo > bhi:
                    return True
                if hi > blo:
                    undecided = True
            if not undecided:
                return False
            try:
                self.ctx.refine()
            except NumFieldError:
                # cannot decide at maximal precision: keep (safe, may be
                # removed by the co-accessibility pass)
                self.undecided_keeps += 1
                return False
            self.refinements += 1
            self._bounds = None


def build_relation_automaton(
    ctx: BetaContext,
    max_states: int = 1_000_000,
    max_depth: int = 10_000,
    force: bool = False,
) -> RelAutomaton:
    """Breadth-first construction of the relation automaton.

    Raises ``Blocked`` for a context with a certified unit-circle conjugate
    unless ``force`` is set, and ``CapExceeded`` when a cap is hit."""
    if ctx.blocked and not force:
        raise Blocked(
            "base has a certified conjugate on the unit circle; "
            "exploration may not terminate (use force to run under caps)")

    letters = [
        (gi, hi, PairLetter(ctx.digit_names[gi], ctx.digit_names[hi]))
        for gi in range(len(ctx.digits))
        for hi in range(len(ctx.digits))
    ]
    pruner = _Pruner(ctx)

    zero = ctx.zero()
    elems = [zero]
    index = {zero.coeffs: 0}
    depth = [0]
    transitions = []
    pruned = 0
    head = 0
    while head < len(elems):
        q = elems[head]
        if depth[head] > max_depth:
            raise CapExceeded(
                f"depth cap {max_depth} exceeded",
                {"states": len(elems), "depth": depth[head], "pruned": pruned})
        shifted = ctx.mul_base(q)
        for gi, hi, letter in letters:
            nxt = fe_add(shifted, fe_sub(ctx.digits[gi], ctx.digits[hi]))
            j = index.get(nxt.coeffs)
            if j is None:
                if pruner.prune(nxt):
                    pruned += 1
                    continue
                j = len(elems)
                if j >= max_states:
                    raise CapExceeded(
                        f"state cap {max_states} exceeded",
                        {"states": j, "depth": depth[head], "pruned": pruned})
                index[nxt.coeffs] = j
                elems.append(nxt)
                depth.append(depth[head] + 1)
            transitions.append((head, letter, j))
        head += 1

    raw = Automaton(
        tuple(l for _, _, l in letters), len(elems), transitions, [0], [0],
        [str(e) for e in elems])

    # co-accessibility pass: drop states with no path back to 0
    bwd = {p: set() for p in range(raw.n_states)}
    for (p, _, q) in raw.transitions:
        bwd[q].add(p)
    keep = {0}
    stack = [0]
    while stack:
        for p in bwd[stack.pop()]:
            if p not in keep:
                keep.add(p)
                stack.append(p)
    order = sorted(keep)
    remap = {s: i for i, s in enumerate(order)}
    aut = Automaton(
        raw.alphabet, len(order),
        [(remap[p], x, remap[q]) for (p, x, q) in raw.transitions
         if p in remap and q in remap],
        [0], [0], [raw.labels[s] for s in order])

    stats = {
        "states_explored": len(elems),
        "states": aut.n_states,
        "pruned": pruned,
        "dropped_coaccessibility": len(elems) - len(order),
        "precision_refinements": pruner.refinements,
        "undecided_keeps": pruner.undecided_keeps,
        "max_depth_reached": max(depth) if depth else 0,
    }
    return RelAutomaton(aut, ctx, [elems[s] for s in order], stats)


# ---------------------------------------------------------------------------
# freeness tests


def is_free(rel: RelAutomaton) -> bool:
    """The semigroup is free iff the only relations are the trivial u = u,
    i.e. the trimmed relation automaton is the single state 0 with its
    diagonal loops."""
    t = trim(rel.automaton)
    return t.n_states == 1 and all(x.left == x.right for (_, x, _) in t.transitions)


def quick_free_sufficient(ctx: BetaContext) -> bool:
    """Cheap sufficient criterion: at some expanding conjugate, every nonzero
    digit difference already exceeds the return bound, so no nonzero state is
    co-accessible and the semigroup is free.  ``False`` means unknown."""
    if ctx.mode == TRANSCENDENTAL:
        pruner = _Pruner(ctx)
        return all(d.is_zero() or pruner.prune(d) for d in ctx.digit_diffs())
    for i in ctx.expanding_indices():
        blo, bhi = ctx.prune_bound(i)
        ok = True
        for d in ctx.digit_diffs():
            if d.is_zero():
                continue
            lo, _ = ctx.abs_at(d, i)
            if lo <= bhi:
                ok = False
                break
        if ok:
            return True
    return False


def mahler_nonfree_check(ctx: BetaContext) -> bool:
    """For a two-digit set: if the Mahler measure of the base is certified
    below 2, the semigroup has a relation (is not free).  ``False`` means
    the test is inconclusive, not that the semigroup is free."""
    if len(ctx.digits) != 2:
        raise ValueError("the Mahler measure criterion needs exactly two digits")
    _, hi = mahler_measure(ctx)
    return hi < 2.0


def kenyon_criterion(p: int, q: int) -> bool:
    """Freeness of the three-map system with slope 1/3 and translations
    0, p/q, 1: free iff p + q is divisible by 3.  Requires 0 < p < q coprime."""
    import math

    if not (0 < p < q) or math.gcd(p, q) != 1:
        raise ValueError("need 0 < p < q with gcd(p, q) = 1")
    return (p + q) % 3 == 0


# ---------------------------------------------------------------------------
# direct verification


def _digit_index(ctx: BetaContext, g) -> int:
    if isinstance(g, int):
        if not 0 <= g < len(ctx.digits):
            raise ValueError(f"digit index {g} out of range")
        return g
    try:
        return ctx.digit_names.index(str(g))
    except ValueError:
        raise ValueError(f"unknown digit {g!r}") from None


def verify_relation(ctx: BetaContext, u, v) -> bool:
    """Exact check that the two equal-length digit words define the same map
    (digits given by index or by display name)."""
    u = [_digit_index(ctx, g) for g in u]
    v = [_digit_index(ctx, g) for g in v]
    if len(u) != len(v):
        raise ValueError("words must have equal length")
    val = ctx.zero()
    for gi, hi in zip(u, v):
        val = fe_add(ctx.mul_base(val), fe_sub(ctx.digits[gi], ctx.digits[hi]))
    return val.is_zero()


def verify_power_identity(ctx: BetaContext, terms, rhs_coeffs) -> bool:
    """Exact check of sum_k sign_k * beta^(-k) == R(beta) where ``terms`` is
    a list of (sign, k) with k >= 0 and ``rhs_coeffs`` are the integer
    coefficients of R (constant first).  Both sides are multiplied by
    beta^max(k), so no inverses are needed."""
    if ctx.mode != ALGEBRAIC or ctx.inverted:
        raise ValueError("power identities need a direct algebraic base")
    kmax = max((k for _, k in terms), default=0)
    lhs = ctx.zero()
    for sign, k in terms:
        t = ctx.from_int_poly([0] * (kmax - k) + [1])
        lhs = fe_add(lhs, t if sign > 0 else nf.fe_neg(t))
    rhs = ctx.from_int_poly([0] * kmax + [int(c) for c in rhs_coeffs])
    return fe_sub(lhs, rhs).is_zero()
