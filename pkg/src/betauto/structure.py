"""Automatic structure: reduced words, multiplier automata, growth.

A word is *reduced* when no equivalent word of the same length precedes it
in the chosen order.  Reduced words biject with semigroup elements, so the
counting series of the reduced automaton is the growth series of the
semigroup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .automata import (
    Automaton,
    append_letter,
    char_poly,
    complement,
    count_series,
    determinize,
    dominant_eigenvalue,
    intersect,
    lex_pair_automaton,
    minimize,
    product,
    project,
    trim,
)
from .numfield import BetaContext, FieldElem, fe_add, poly_divmod, poly_trim
from .relations import RelAutomaton


def build_reduced_automaton(rel: RelAutomaton, order: str = "lex") -> Automaton:
    """Minimal DFA of the reduced words.

    ``order`` ranks digits by their position in the digit list (``lex``) or
    by the reverse position (``revlex``).  A word is removed when some
    order-smaller word of the same length defines the same map, i.e. when it
    is the second component of an accepted pair of (smaller, equivalent).
    """
    names = list(rel.context.digit_names)
    if order == "lex":
        ranked = names
    elif order == "revlex":
        ranked = list(reversed(names))
    else:
        raise ValueError(f"unknown order {order!r} (expected 'lex' or 'revlex')")
    smaller = intersect(lex_pair_automaton(ranked), rel.automaton)
    reducible = project(smaller, side=2, alphabet=tuple(names))
    return minimize(complement(minimize(reducible)))


def build_multiplier(rel: RelAutomaton, reduced: Automaton, g) -> Automaton:
    """Minimal automaton of the pairs (u, v) of reduced words with
    v equivalent to u followed by the digit ``g``."""
    if g not in reduced.alphabet:
        raise ValueError(f"unknown digit {g!r}")
    pairs = product(append_letter(reduced, g), reduced)
    return minimize(intersect(pairs, rel.automaton))


@dataclass
class AutomaticStructure:
    """Reduced-word automaton plus one multiplier per digit."""

    rel: RelAutomaton
    order: str
    reduced: Automaton
    multipliers: dict = field(default_factory=dict)  # digit name -> Automaton


def build_structure(rel: RelAutomaton, order: str = "lex") -> AutomaticStructure:
    reduced = build_reduced_automaton(rel, order)
    mults = {g: build_multiplier(rel, reduced, g) for g in rel.context.digit_names}
    return AutomaticStructure(rel, order, reduced, mults)


# ---------------------------------------------------------------------------
# growth


def _float_down(x: Fraction) -> float:
    f = float(x)
    return f if Fraction(f) <= x else math.nextafter(f, -math.inf)


def _float_up(x: Fraction) -> float:
    f = float(x)
    return f if Fraction(f) >= x else math.nextafter(f, math.inf)


def _poly_eval(coeffs, x: Fraction) -> Fraction:
    v = Fraction(0)
    for c in reversed(coeffs):
        v = v * x + c
    return v


@dataclass
class GrowthReport:
    counts: list  # big integers, lengths 0..N
    char_poly: tuple  # exact, constant term first
    lam_lo: Fraction
    lam_hi: Fraction
    candidate_pi: tuple | None = None
    pi_check: dict | None = None

    def to_json(self) -> dict:
        doc = {
            "counts": [str(c) for c in self.counts],
            "char_poly": [int(c) for c in self.char_poly],
            "lambda": {"lo": _float_down(self.lam_lo), "hi": _float_up(self.lam_hi)},
        }
        if self.pi_check is not None:
            doc["pi_check"] = self.pi_check
        return doc


def growth(reduced: Automaton, N: int = 20, candidate_pi=None,
           tol: float = 1e-10) -> GrowthReport:
    """Growth data of the reduced automaton: exact counting series, exact
    characteristic polynomial of the trimmed adjacency matrix, and a
    certified enclosure of the growth rate (its largest real root).

    When ``candidate_pi`` is given (integer coefficients, constant first) the
    report records whether it divides the characteristic polynomial exactly
    and changes sign across the enclosure, which certifies the growth rate
    is a root of the candidate."""
    t = trim(reduced)
    counts = count_series(reduced, N)
    cp = char_poly(t)
    lo, hi = dominant_eigenvalue(t, tol=tol)
    report = GrowthReport(counts, cp, lo, hi)
    if candidate_pi is not None:
        cand = poly_trim([int(c) for c in candidate_pi])
        q, r = poly_divmod(cp, cand)
        divides = (r == () and all(x.denominator == 1 for x in q))
        llo, lhi = lo, hi
        sign_change = False
        cur_tol = tol
        for _ in range(4):
            a, b = _poly_eval(cand, llo), _poly_eval(cand, lhi)
            if a * b <= 0:
                sign_change = True
                break
            cur_tol /= 1000.0
            llo, lhi = dominant_eigenvalue(t, tol=cur_tol)
        report.candidate_pi = cand
        report.pi_check = {
            "candidate": [int(c) for c in cand],
            "divides": divides,
            "sign_change": sign_change,
            "ok": divides and sign_change,
        }
    return report


# ---------------------------------------------------------------------------
# brute-force oracle


def count_elements_bruteforce(ctx: BetaContext, n: int, cap: int = 7) -> list:
    """Number of distinct maps represented by digit words of each length
    0..n, by direct enumeration (exponential; small n only)."""
    if n > cap:
        raise ValueError(f"bruteforce length {n} exceeds cap {cap}")
    counts = [1]
    layer = {ctx.zero().coeffs}
    for _ in range(n):
        nxt = set()
        for coeffs in layer:
            v = FieldElem(ctx.digits[0].mode, coeffs)
            shifted = ctx.mul_base(v)
            for d in ctx.digits:
                nxt.add(fe_add(shifted, d).coeffs)
        layer = nxt
        counts.append(len(layer))
    return counts
