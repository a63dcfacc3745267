"""Finite-automaton algebra over arbitrary finite alphabets.

States are indices with optional display labels; letters are opaque hashable
tokens (pair letters are ``PairLetter`` named tuples).  All operations return
new automata; nothing is mutated after construction.  Counting uses exact
big integers, spectral data is certified via the exact characteristic
polynomial of the adjacency count matrix.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable, NamedTuple

from sympy import ZZ, Poly, Symbol
from sympy.polys.matrices import DomainMatrix

from .numfield import poly_trim


class PairLetter(NamedTuple):
    """Letter of a pair alphabet; ``None`` is the padding symbol."""

    left: object
    right: object

    def __str__(self) -> str:
        l = "e" if self.left is None else str(self.left)
        r = "e" if self.right is None else str(self.right)
        return f"{l},{r}"


class AlphabetMismatch(ValueError):
    pass


class Automaton:
    """(alphabet, states, transitions, initials, finals) with opaque letters."""

    def __init__(self, alphabet, n_states, transitions, initials, finals, labels=None):
        self.alphabet = tuple(alphabet)
        self.n_states = n_states
        self.transitions = frozenset(transitions)
        self.initials = frozenset(initials)
        self.finals = frozenset(finals)
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n_states))
        for (p, a, q) in self.transitions:
            if not (0 <= p < n_states and 0 <= q < n_states):
                raise ValueError("transition endpoint out of range")
        if not (self.initials <= set(range(n_states)) and self.finals <= set(range(n_states))):
            raise ValueError("initial/final state out of range")

    # convenience views -----------------------------------------------------

    def delta(self) -> dict:
        """(state, letter) -> set of targets."""
        d = {}
        for (p, a, q) in self.transitions:
            d.setdefault((p, a), set()).add(q)
        return d

    def ddelta(self) -> dict:
        """(state, letter) -> unique target; requires determinism."""
        d = {}
        for (p, a, q) in self.transitions:
            if (p, a) in d:
                raise ValueError("automaton is not deterministic")
            d[(p, a)] = q
        return d

    @property
    def deterministic(self) -> bool:
        if len(self.initials) != 1:
            return False
        seen = set()
        for (p, a, _) in self.transitions:
            if (p, a) in seen:
                return False
            seen.add((p, a))
        return True

    def __repr__(self):
        return (f"Automaton({self.n_states} states, {len(self.alphabet)} letters, "
                f"{len(self.transitions)} transitions)")


# ---------------------------------------------------------------------------
# core constructions


def transpose(a: Automaton) -> Automaton:
    return Automaton(a.alphabet, a.n_states,
                     [(q, x, p) for (p, x, q) in a.transitions],
                     a.finals, a.initials, a.labels)


def trim(a: Automaton) -> Automaton:
    """Restrict to states on some path from an initial to a final state."""
    fwd = {p: set() for p in range(a.n_states)}
    bwd = {p: set() for p in range(a.n_states)}
    for (p, _, q) in a.transitions:
        fwd[p].add(q)
        bwd[q].add(p)

    def reach(sources, adj):
        seen = set(sources)
        stack = list(sources)
        while stack:
            for q in adj[stack.pop()]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return seen

    keep = sorted(reach(a.initials, fwd) & reach(a.finals, bwd))
    idx = {s: i for i, s in enumerate(keep)}
    return Automaton(
        a.alphabet, len(keep),
        [(idx[p], x, idx[q]) for (p, x, q) in a.transitions if p in idx and q in idx],
        [idx[s] for s in a.initials if s in idx],
        [idx[s] for s in a.finals if s in idx],
        [a.labels[s] for s in keep])


def determinize(a: Automaton) -> Automaton:
    """Subset construction; states are reachable nonempty subsets in BFS order."""
    start = frozenset(a.initials)
    if not start:
        return Automaton(a.alphabet, 0, [], [], [])
    lidx = {x: i for i, x in enumerate(a.alphabet)}
    tgt = [[None] * len(a.alphabet) for _ in range(a.n_states)]
    for (p, x, q) in a.transitions:
        cell = tgt[p][lidx[x]]
        if cell is None:
            cell = tgt[p][lidx[x]] = set()
        cell.add(q)
    order = {start: 0}
    subsets = [start]
    transitions = []
    head = 0
    while head < len(subsets):
        s = subsets[head]
        for i, x in enumerate(a.alphabet):
            acc = set()
            for p in s:
                cell = tgt[p][i]
                if cell:
                    acc |= cell
            if not acc:
                continue
            t = frozenset(acc)
            j = order.get(t)
            if j is None:
                j = order[t] = len(order)
                subsets.append(t)
            transitions.append((head, x, j))
        head += 1
    finals = [i for i, s in enumerate(subsets) if s & a.finals]
    labels = ["{" + ",".join(sorted(a.labels[q] for q in s)) + "}"
              if len(s) <= 6 else f"#{i}"
              for i, s in enumerate(subsets)]
    return Automaton(a.alphabet, len(subsets), transitions, [0], finals, labels)


def _moore_classes(a: Automaton) -> list[int]:
    """Partition refinement on a (partial) DFA; missing targets are a sink."""
    cls = [1 if s in a.finals else 0 for s in range(a.n_states)]
    lidx = {x: i for i, x in enumerate(a.alphabet)}
    tgt = [[-1] * len(a.alphabet) for _ in range(a.n_states)]
    seen = set()
    for (p, x, q) in a.transitions:
        if (p, x) in seen:
            raise ValueError("automaton is not deterministic")
        seen.add((p, x))
        tgt[p][lidx[x]] = q
    while True:
        sigs = {}
        new = []
        for s in range(a.n_states):
            sig = (cls[s], tuple(cls[t] if t >= 0 else -1 for t in tgt[s]))
            new.append(sigs.setdefault(sig, len(sigs)))
        if new == cls:
            return cls
        cls = new


def _canonical_relabel(a: Automaton) -> Automaton:
    """BFS renumbering from the initial state in alphabet order (canonical
    form for a trimmed DFA)."""
    if a.n_states == 0:
        return a
    d = a.ddelta()
    (init,) = a.initials
    order = {init: 0}
    queue = [init]
    head = 0
    while head < len(queue):
        s = queue[head]
        head += 1
        for x in a.alphabet:
            q = d.get((s, x))
            if q is not None and q not in order:
                order[q] = len(order)
                queue.append(q)
    # trimmed DFAs are initial-connected, so every state is ordered
    labels = [None] * len(order)
    for s, i in order.items():
        labels[i] = a.labels[s]
    return Automaton(
        a.alphabet, len(order),
        [(order[p], x, order[q]) for (p, x, q) in a.transitions],
        [0], sorted(order[s] for s in a.finals), labels)


def minimize(a: Automaton) -> Automaton:
    """Canonical minimal partial DFA; language-equal inputs give identical
    results.  Determinizes by double reversal (Brzozowski), which avoids the
    forward subset blowup on the relation-projection languages handled here,
    then canonicalizes with Moore refinement and a BFS relabel."""
    if not a.deterministic:
        a = determinize(transpose(determinize(transpose(trim(a)))))
    b = trim(determinize(a))
    if b.n_states == 0:
        return b
    cls = _moore_classes(b)
    k = max(cls) + 1
    reps = {}
    for s in range(b.n_states):
        reps.setdefault(cls[s], s)
    labels = [b.labels[reps[c]] for c in range(k)]
    merged = Automaton(
        b.alphabet, k,
        {(cls[p], x, cls[q]) for (p, x, q) in b.transitions},
        {cls[s] for s in b.initials},
        {cls[s] for s in b.finals}, labels)
    return _canonical_relabel(trim(merged))


def complement(a: Automaton) -> Automaton:
    """Complete the determinized automaton with a sink, then swap finals."""
    d = determinize(a)
    n = d.n_states
    if n == 0:
        # empty language over this alphabet: complement is the full language
        return Automaton(a.alphabet, 1, [(0, x, 0) for x in a.alphabet], [0], [0], ["all"])
    dd = d.ddelta()
    transitions = list(d.transitions)
    sink = n
    need_sink = False
    for s in range(n):
        for x in d.alphabet:
            if (s, x) not in dd:
                transitions.append((s, x, sink))
                need_sink = True
    if need_sink:
        transitions += [(sink, x, sink) for x in d.alphabet]
        n += 1
    finals = [s for s in range(n) if s not in d.finals]
    return Automaton(d.alphabet, n, transitions, d.initials, finals,
                     list(d.labels) + (["sink"] if need_sink else []))


def intersect(a: Automaton, b: Automaton) -> Automaton:
    if set(a.alphabet) != set(b.alphabet):
        raise AlphabetMismatch("intersect needs a shared alphabet")
    da, db = a.delta(), b.delta()
    starts = [(p, q) for p in a.initials for q in b.initials]
    order = {s: i for i, s in enumerate(starts)}
    queue = list(starts)
    transitions = []
    head = 0
    while head < len(queue):
        (p, q) = s = queue[head]
        head += 1
        for x in a.alphabet:
            for p2 in da.get((p, x), ()):
                for q2 in db.get((q, x), ()):
                    t = (p2, q2)
                    if t not in order:
                        order[t] = len(order)
                        queue.append(t)
                    transitions.append((order[s], x, order[t]))
    finals = [i for (p, q), i in order.items() if p in a.finals and q in b.finals]
    labels = [None] * len(order)
    for (p, q), i in order.items():
        labels[i] = f"{a.labels[p]}|{b.labels[q]}"
    return Automaton(a.alphabet, len(order), transitions,
                     [order[s] for s in starts], finals, labels)


def union(a: Automaton, b: Automaton) -> Automaton:
    if set(a.alphabet) != set(b.alphabet):
        raise AlphabetMismatch("union needs a shared alphabet")
    off = a.n_states
    return Automaton(
        a.alphabet, a.n_states + b.n_states,
        list(a.transitions) + [(p + off, x, q + off) for (p, x, q) in b.transitions],
        list(a.initials) + [s + off for s in b.initials],
        list(a.finals) + [s + off for s in b.finals],
        list(a.labels) + list(b.labels))


def product(a: Automaton, b: Automaton) -> Automaton:
    """Synchronous product: language {(u_i, v_i)_i : u in L(a), v in L(b)}."""
    alphabet = tuple(PairLetter(x, y) for x in a.alphabet for y in b.alphabet)
    da, db = a.delta(), b.delta()
    starts = [(p, q) for p in a.initials for q in b.initials]
    order = {s: i for i, s in enumerate(starts)}
    queue = list(starts)
    transitions = []
    head = 0
    while head < len(queue):
        (p, q) = s = queue[head]
        head += 1
        for x in a.alphabet:
            for p2 in da.get((p, x), ()):
                for y in b.alphabet:
                    for q2 in db.get((q, y), ()):
                        t = (p2, q2)
                        if t not in order:
                            order[t] = len(order)
                            queue.append(t)
                        transitions.append((order[s], PairLetter(x, y), order[t]))
    finals = [i for (p, q), i in order.items() if p in a.finals and q in b.finals]
    return Automaton(alphabet, len(order), transitions,
                     [order[s] for s in starts], finals)


def append_letter(a: Automaton, letter) -> Automaton:
    """Automaton for L(a) concatenated with the single letter."""
    if letter not in a.alphabet:
        raise AlphabetMismatch(f"letter {letter!r} not in alphabet")
    f = a.n_states
    transitions = list(a.transitions) + [(q, letter, f) for q in a.finals]
    return Automaton(a.alphabet, f + 1, transitions, a.initials, [f],
                     list(a.labels) + ["+"])


def project(a: Automaton, side: int, alphabet=None) -> Automaton:
    """Component projection of a pair-letter automaton; padding components
    project to the empty word (epsilon transitions eliminated)."""
    if side not in (1, 2):
        raise ValueError("side must be 1 or 2")
    eps = {p: {p} for p in range(a.n_states)}
    edges = []
    for (p, x, q) in a.transitions:
        if not isinstance(x, tuple) or len(x) != 2:
            raise AlphabetMismatch("project needs a pair alphabet")
        c = x[0] if side == 1 else x[1]
        if c is None:
            eps[p].add(q)
        else:
            edges.append((p, c, q))
    # epsilon closure (transitive)
    changed = True
    while changed:
        changed = False
        for p in eps:
            add = set().union(*(eps[q] for q in eps[p]))
            if not add <= eps[p]:
                eps[p] |= add
                changed = True
    if alphabet is None:
        alphabet = tuple(sorted({c for (_, c, _) in edges}, key=str))
    transitions = set()
    for p in range(a.n_states):
        for r in eps[p]:
            for (pp, c, q) in edges:
                if pp == r:
                    transitions.add((p, c, q))
    finals = {p for p in range(a.n_states) if eps[p] & a.finals}
    return Automaton(alphabet, a.n_states, transitions, a.initials, finals, a.labels)


def lex_pair_automaton(alphabet: Iterable) -> Automaton:
    """Pairs (u, v) of equal-length words with u strictly below v in the
    lexicographic order induced by the alphabet list order."""
    sigma = tuple(alphabet)
    rank = {x: i for i, x in enumerate(sigma)}
    pairs = tuple(PairLetter(x, y) for x in sigma for y in sigma)
    transitions = []
    for (x, y) in pairs:
        if rank[x] == rank[y]:
            transitions.append((0, PairLetter(x, y), 0))
        elif rank[x] < rank[y]:
            transitions.append((0, PairLetter(x, y), 1))
        else:
            transitions.append((0, PairLetter(x, y), 2))
        transitions.append((1, PairLetter(x, y), 1))
        transitions.append((2, PairLetter(x, y), 2))
    return Automaton(pairs, 3, transitions, [0], [1], ["=", "<", ">"])


# ---------------------------------------------------------------------------
# queries


def accepts(a: Automaton, word: Iterable) -> bool:
    d = a.delta()
    cur = set(a.initials)
    for x in word:
        cur = set().union(*(d.get((p, x), set()) for p in cur)) if cur else set()
        if not cur:
            return False
    return bool(cur & a.finals)


def enumerate_words(a: Automaton, max_len: int):
    """All accepted words of length <= max_len (exponential; test oracle)."""
    out = []
    for n in range(max_len + 1):
        for w in iproduct(a.alphabet, repeat=n):
            if accepts(a, w):
                out.append(w)
    return out


def adjacency(a: Automaton) -> list[list[int]]:
    m = [[0] * a.n_states for _ in range(a.n_states)]
    for (p, _, q) in a.transitions:
        m[p][q] += 1
    return m


def count_words(a: Automaton, n: int) -> int:
    return count_series(a, n)[n]

def count_series(a: Automaton, n_max: int) -> list[int]:
    """Number of accepted words of each length 0..n_max (big integers).
    Determinizes first so that paths and words coincide."""
    if not a.deterministic:
        a = determinize(a)
    m = adjacency(a)
    v = [1 if s in a.initials else 0 for s in range(a.n_states)]
    out = [sum(v[s] for s in a.finals)]
    for _ in range(n_max):
        v = [sum(v[p] * m[p][q] for p in range(a.n_states)) for q in range(a.n_states)]
        out.append(sum(v[s] for s in a.finals))
    return out


def char_poly(a: Automaton) -> tuple[int, ...]:
    """Exact characteristic polynomial det(xI - M) of the adjacency count
    matrix, constant term first."""
    n = a.n_states
    if n == 0:
        return (1,)
    dm = DomainMatrix([[ZZ(v) for v in row] for row in adjacency(a)], (n, n), ZZ)
    coeffs = dm.charpoly()  # leading first
    return poly_trim([int(c) for c in reversed(coeffs)])


def _real_root_intervals(coeffs, eps: Fraction):
    """Isolating rational intervals for the real roots of the squarefree part."""
    from sympy import Rational

    x = Symbol("x")
    p = Poly(list(reversed(poly_trim(coeffs))), x, domain="QQ")
    p = p.quo(p.gcd(p.diff(x)))
    return [(Fraction(iv[0][0].p, iv[0][0].q), Fraction(iv[0][1].p, iv[0][1].q))
            for iv in p.intervals(eps=Rational(eps.numerator, eps.denominator))]


def dominant_eigenvalue(a: Automaton, tol: float = 1e-10) -> tuple[Fraction, Fraction]:
    """Certified rational enclosure of the Perron root of the trimmed
    automaton's adjacency matrix (largest real root of its characteristic
    polynomial)."""
    t = trim(a)
    if t.n_states == 0:
        return (Fraction(0), Fraction(0))
    cp = char_poly(t)
    eps = Fraction(tol) / 4  # exact: a positive float is a dyadic rational
    ivs = _real_root_intervals(cp, eps)
    if not ivs:
        return (Fraction(0), Fraction(0))
    return max(ivs, key=lambda iv: iv[1])


def is_codeterministic(a: Automaton) -> bool:
    return transpose(a).deterministic


def equivalent(a: Automaton, b: Automaton) -> bool:
    """Language equality via identity of canonical minimal forms."""
    ma, mb = minimize(a), minimize(b)
    return (ma.n_states == mb.n_states and ma.initials == mb.initials
            and ma.finals == mb.finals and ma.transitions == mb.transitions)


# ---------------------------------------------------------------------------
# serialization


def _letter_to_str(x) -> str:
    return str(x)


def _letter_from_str(s: str):
    if "," in s:
        l, r = s.split(",", 1)
        return PairLetter(None if l == "e" else l, None if r == "e" else r)
    return s


def to_json(a: Automaton) -> dict:
    return {
        "alphabet": [_letter_to_str(x) for x in a.alphabet],
        "states": [{"label": lbl} for lbl in a.labels],
        "initials": sorted(a.initials),
        "finals": sorted(a.finals),
        "transitions": sorted(
            [p, a.alphabet.index(x), q] for (p, x, q) in a.transitions),
    }


def from_json(doc: dict) -> Automaton:
    try:
        alphabet = tuple(_letter_from_str(s) for s in doc["alphabet"])
        labels = [s["label"] for s in doc["states"]]
        transitions = [(p, alphabet[i], q) for (p, i, q) in doc["transitions"]]
        return Automaton(alphabet, len(labels), transitions,
                         doc["initials"], doc["finals"], labels)
    except (KeyError, TypeError, IndexError) as e:
        raise ValueError(f"malformed automaton document: {e}") from e


def to_dot(a: Automaton, name: str = "A") -> str:
    """DOT output; initial states bold, final states doubled, one edge per
    state pair with comma-joined letter labels."""
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for s in range(a.n_states):
        shape = "doublecircle" if s in a.finals else "circle"
        style = ', style=bold' if s in a.initials else ""
        lines.append(f'  {s} [label="{a.labels[s]}", shape={shape}{style}];')
    grouped = {}
    for (p, x, q) in sorted(a.transitions, key=lambda t: (t[0], t[2], str(t[1]))):
        grouped.setdefault((p, q), []).append(str(x))
    for (p, q), letters in grouped.items():
        lbl = " ; ".join(letters)
        lines.append(f'  {p} -> {q} [label="{lbl}"];')
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# random instances (shared by the property-test suites)


def random_automaton(rng: random.Random, max_states: int = 5, alphabet=("a", "b")) -> Automaton:
    n = rng.randint(1, max_states)
    transitions = set()
    for _ in range(rng.randint(0, 3 * n)):
        transitions.add((rng.randrange(n), rng.choice(alphabet), rng.randrange(n)))
    initials = {s for s in range(n) if rng.random() < 0.4} or {0}
    finals = {s for s in range(n) if rng.random() < 0.4}
    return Automaton(alphabet, n, transitions, initials, finals)
