"""Empirical, windowed checks of automatic-structure axioms.

A regular language over a finite alphabet maps into a group through letter
images.  Everything here is checked exhaustively inside a finite window
(all accepted words up to a length bound, all group elements inside a
metric ball) and reported with concrete witnesses:

  * how many language words hit each group element (uniform finiteness),
  * whether close-by words fellow-travel, and with what constant,
  * how far accepted words are from geodesics,
  * stable translation lengths estimated from power norms.

The point of the window is honesty: nothing is extrapolated.  A property
that fails inside the window fails, full stop, and the witness replays;
a property that holds inside the window is reported with the window size.

Two pairing rules are supported for the fellow traveller check.  The
"classical" rule pairs words u, v when they start together and end at
distance at most 1, or when v ends exactly at s*end(u) for a generator s
and the u path is compared after translation by s.  The "simultaneous"
rule allows both a start offset of at most 1 and an end offset of at most
1 in the same pair.  The two rules genuinely differ: on the x-then-y
normal forms of Z^2 the classical constant is 2 while the simultaneous
rule already forces 3 (translate x^2y^2 by one x and compare with y^2).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction


class UnknownLetter(ValueError):
    """A word uses a letter outside the automaton's alphabet."""


class OutOfWindow(RuntimeError):
    """The computation needs a group element beyond the precomputed ball."""


class Fsa:
    """A finite-state automaton over named letters.

    States are integers 0..num_states-1.  Nondeterminism (several initial
    states or repeated (state, letter) transitions) is allowed; determinize()
    produces an equivalent deterministic automaton.
    """

    def __init__(self, alphabet, num_states, initial, accepting, transitions):
        self.alphabet = tuple(alphabet)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate letters in alphabet")
        self.num_states = int(num_states)
        if isinstance(initial, int):
            initial = (initial,)
        self.initial = tuple(sorted(set(initial)))
        self.accepting = frozenset(accepting)
        self._delta: dict[tuple[int, str], tuple[int, ...]] = {}
        letters = set(self.alphabet)
        for src, letter, dst in transitions:
            if letter not in letters:
                raise UnknownLetter(f"transition letter {letter!r} not in alphabet")
            if not (0 <= src < self.num_states and 0 <= dst < self.num_states):
                raise ValueError("transition endpoint out of range")
            key = (src, letter)
            self._delta[key] = tuple(sorted(set(self._delta.get(key, ()) + (dst,))))

    @property
    def is_deterministic(self) -> bool:
        return len(self.initial) == 1 and all(
            len(ds) == 1 for ds in self._delta.values()
        )

    def transitions(self):
        for (src, letter), dsts in sorted(self._delta.items()):
            for dst in dsts:
                yield src, letter, dst

    def step(self, states, letter):
        if letter not in set(self.alphabet):
            raise UnknownLetter(f"letter {letter!r} not in alphabet")
        out = set()
        for s in states:
            out.update(self._delta.get((s, letter), ()))
        return frozenset(out)

    def accepts(self, word) -> bool:
        states = frozenset(self.initial)
        for letter in word:
            states = self.step(states, letter)
            if not states:
                return False
        return bool(states & self.accepting)

    def determinize(self) -> "Fsa":
        start = frozenset(self.initial)
        numbering = {start: 0}
        order = [start]
        trans = []
        qi = 0
        while qi < len(order):
            subset = order[qi]
            qi += 1
            for letter in self.alphabet:
                nxt = self.step(subset, letter)
                if not nxt:
                    continue
                if nxt not in numbering:
                    numbering[nxt] = len(order)
                    order.append(nxt)
                trans.append((numbering[subset], letter, numbering[nxt]))
        accepting = [i for i, sub in enumerate(order) if sub & self.accepting]
        return Fsa(self.alphabet, len(order), 0, accepting, trans)

    def trim(self) -> "Fsa":
        """Drop states that are unreachable or cannot reach acceptance."""
        fwd = {s: set() for s in range(self.num_states)}
        bwd = {s: set() for s in range(self.num_states)}
        for src, _, dst in self.transitions():
            fwd[src].add(dst)
            bwd[dst].add(src)

        def closure(seeds, edges):
            seen = set(seeds)
            queue = deque(seeds)
            while queue:
                s = queue.popleft()
                for nxt in edges[s]:
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
            return seen

        reach = closure(self.initial, fwd)
        coacc = closure(self.accepting, bwd)
        keep = sorted(reach & coacc)
        if not keep:
            return Fsa(self.alphabet, 1, 0, (), ())
        renum = {s: i for i, s in enumerate(keep)}
        return Fsa(
            self.alphabet,
            len(keep),
            [renum[s] for s in self.initial if s in renum],
            [renum[s] for s in self.accepting if s in renum],
            [
                (renum[a], letter, renum[b])
                for a, letter, b in self.transitions()
                if a in renum and b in renum
            ],
        )

    def words_up_to(self, max_len: int):
        """Yield all accepted words of length <= max_len (letter tuples),
        shortest first, pruning branches that cannot reach acceptance."""
        live = self.trim()
        frontier = [((), frozenset(live.initial))]
        if frontier[0][1] & live.accepting:
            yield ()
        for _ in range(max_len):
            nxt = []
            for word, states in frontier:
                for letter in live.alphabet:
                    after = live.step(states, letter)
                    if not after:
                        continue
                    w2 = word + (letter,)
                    if after & live.accepting:
                        yield w2
                    nxt.append((w2, after))
            frontier = nxt

    def to_json(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "num_states": self.num_states,
            "initial": list(self.initial),
            "accepting": sorted(self.accepting),
            "transitions": [[a, letter, b] for a, letter, b in self.transitions()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Fsa":
        return cls(
            data["alphabet"],
            data["num_states"],
            data["initial"],
            data["accepting"],
            data["transitions"],
        )


def parse_letters(text: str, alphabet) -> tuple[str, ...]:
    """Read a word: star-separated tokens, or one character per letter when
    every alphabet entry is a single character.  Case matters."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    names = set(alphabet)
    if "*" in text:
        out = tuple(text.split("*"))
    elif all(len(n) == 1 for n in names):
        out = tuple(text)
    else:
        out = (text,)
    for letter in out:
        if letter not in names:
            raise UnknownLetter(f"letter {letter!r} not in alphabet")
    return out


class GroupModel:
    """Concrete group with hashable elements and named letter images."""

    def __init__(self, letter_images: dict, mul, inv, identity):
        self.letter_images = dict(letter_images)
        self.mul = mul
        self.inv = inv
        self.identity = identity

    def evaluate(self, word):
        g = self.identity
        for letter in word:
            try:
                g = self.mul(g, self.letter_images[letter])
            except KeyError:
                raise UnknownLetter(f"letter {letter!r} has no image") from None
        return g

    def path(self, word, start=None):
        g = start if start is not None else self.identity
        pts = [g]
        for letter in word:
            g = self.mul(g, self.letter_images[letter])
            pts.append(g)
        return pts


class BallOracle:
    """Word-metric ball around the identity, computed once by BFS over the
    letter images.  Norms and distances outside the ball raise OutOfWindow."""

    def __init__(self, model: GroupModel, radius: int):
        self.model = model
        self.radius = radius
        self._norm = {model.identity: 0}
        frontier = [model.identity]
        for r in range(1, radius + 1):
            nxt = []
            for g in frontier:
                for img in model.letter_images.values():
                    h = model.mul(g, img)
                    if h not in self._norm:
                        self._norm[h] = r
                        nxt.append(h)
            frontier = nxt

    def __len__(self):
        return len(self._norm)

    def norm(self, g) -> int:
        try:
            return self._norm[g]
        except KeyError:
            raise OutOfWindow(
                f"element outside the radius-{self.radius} ball"
            ) from None

    def dist(self, g, h) -> int:
        return self.norm(self.model.mul(self.model.inv(g), h))

    def elements_of_norm_at_most(self, r: int):
        return [g for g, n in self._norm.items() if n <= r]


@dataclass(frozen=True)
class FiniteToOneReport:
    bound: int
    witness_element: object
    witness_words: tuple
    surjective: bool
    missing: tuple
    window: int

    @property
    def ok(self) -> bool:
        return self.bound >= 1 and self.surjective


@dataclass(frozen=True)
class FellowWitness:
    """A replayable record of the worst separation found: translate the
    path of u by the shift letter (if any) and compare with the path of v
    at the given time."""

    u: tuple
    v: tuple
    shift: str | None
    time: int
    separation: int


@dataclass(frozen=True)
class FellowReport:
    pair_rule: str
    zeta: int
    pairs_checked: int
    witness: FellowWitness | None
    window: int
    cap: int | None

    @property
    def ok(self) -> bool:
        return self.cap is None or self.zeta <= self.cap


@dataclass(frozen=True)
class QuasiGeodesicReport:
    multiplicative: Fraction
    additive: int
    window: int


@dataclass(frozen=True)
class TauEstimate:
    value: Fraction
    stabilized: bool
    norms: tuple


@dataclass(frozen=True)
class StructureReport:
    radius: int
    finite_to_one: FiniteToOneReport
    fellow: FellowReport
    quasigeodesic: QuasiGeodesicReport

    @property
    def ok(self) -> bool:
        return self.finite_to_one.ok and self.fellow.ok


class WindowedLanguage:
    """All accepted words of length <= radius, indexed by group element."""

    def __init__(self, fsa: Fsa, model: GroupModel, radius: int):
        for letter in fsa.alphabet:
            if letter not in model.letter_images:
                raise UnknownLetter(f"no image for letter {letter!r}")
        self.fsa = fsa
        self.model = model
        self.radius = radius
        # paths of two radius-length words can separate by at most 2*radius,
        # plus 1 for a shift letter; the ball covers every distance we take
        self.ball = BallOracle(model, 2 * radius + 2)
        self.words_by_element: dict = {}
        for w in fsa.words_up_to(radius):
            g = model.evaluate(w)
            self.words_by_element.setdefault(g, []).append(w)

    # -- uniform finiteness -------------------------------------------------

    def check_finite_to_one(self) -> FiniteToOneReport:
        """Multiplicity bound over the window, plus surjectivity onto the
        half-radius ball (words up to twice as long as the norm get a
        chance to represent each element)."""
        bound, element, words = 0, None, ()
        for g, ws in self.words_by_element.items():
            if len(ws) > bound:
                bound, element, words = len(ws), g, tuple(ws)
        missing = tuple(
            g
            for g in self.ball.elements_of_norm_at_most(self.radius // 2)
            if g not in self.words_by_element
        )
        return FiniteToOneReport(
            bound=bound,
            witness_element=element,
            witness_words=words,
            surjective=not missing,
            missing=missing,
            window=self.radius,
        )

    # -- fellow traveller ----------------------------------------------------

    def _padded(self, pts, t):
        return pts[t] if t < len(pts) else pts[-1]

    def check_fellow_traveller(
        self, pair_rule: str = "classical", cap: int | None = None
    ) -> FellowReport:
        if pair_rule not in ("classical", "simultaneous"):
            raise ValueError(f"unknown pair rule {pair_rule!r}")
        mul, inv = self.model.mul, self.model.inv
        shifts = [(None, self.model.identity)]
        shifts += sorted(self.model.letter_images.items())
        zeta, witness, pairs = 0, None, 0
        for u_words in self.words_by_element.values():
            for u in u_words:
                pu = self.model.path(u)
                end_u = pu[-1]
                for shift_name, s in shifts:
                    shifted = (
                        pu if shift_name is None else [mul(s, p) for p in pu]
                    )
                    target = shifted[-1]
                    if pair_rule == "classical":
                        if shift_name is None:
                            # right multiplication: same start, ends <= 1 apart
                            near = [target] + [
                                mul(target, img)
                                for img in self.model.letter_images.values()
                            ]
                        else:
                            # left multiplication: shifted start, equal ends
                            near = [target]
                    else:
                        near = [target] + [
                            mul(target, img)
                            for img in self.model.letter_images.values()
                        ]
                    seen = set()
                    for h in near:
                        if h in seen:
                            continue
                        seen.add(h)
                        for v in self.words_by_element.get(h, ()):
                            pv = self.model.path(v)
                            pairs += 1
                            for t in range(max(len(shifted), len(pv))):
                                d = self.ball.dist(
                                    self._padded(shifted, t), self._padded(pv, t)
                                )
                                if d > zeta:
                                    zeta = d
                                    witness = FellowWitness(
                                        u=u,
                                        v=v,
                                        shift=shift_name,
                                        time=t,
                                        separation=d,
                                    )
        return FellowReport(
            pair_rule=pair_rule,
            zeta=zeta,
            pairs_checked=pairs,
            witness=witness,
            window=self.radius,
            cap=cap,
        )

    # -- geodesics -------------------------------------------------------------

    def quasigeodesic(self) -> QuasiGeodesicReport:
        worst = Fraction(1)
        additive = 0
        for g, ws in self.words_by_element.items():
            n = self.ball.norm(g)
            for w in ws:
                if n == 0:
                    additive = max(additive, len(w))
                elif len(w) > n:
                    worst = max(worst, Fraction(len(w), n))
        return QuasiGeodesicReport(
            multiplicative=worst, additive=additive, window=self.radius
        )

    # -- stable lengths -----------------------------------------------------------

    def _language_lengths(self) -> dict:
        """Shortest accepted-word length per element, by breadth-first search
        on the product of the automaton with the ball.  A word of length k
        never leaves the radius-k ball, so searching to the ball radius finds
        every element whose language length fits the window."""
        best: dict = {}
        seen = {(s, self.model.identity) for s in self.fsa.initial}
        frontier = list(seen)
        accepting = self.fsa.accepting
        for depth in range(self.ball.radius + 1):
            for state, elem in frontier:
                if state in accepting and elem not in best:
                    best[elem] = depth
            if depth == self.ball.radius:
                break
            nxt = []
            for state, elem in frontier:
                for letter in self.fsa.alphabet:
                    for s2 in self.fsa.step((state,), letter):
                        e2 = self.model.mul(
                            elem, self.model.letter_images[letter]
                        )
                        node = (s2, e2)
                        if node not in seen:
                            seen.add(node)
                            nxt.append(node)
            frontier = nxt
        return best

    def ell(self, g) -> int:
        """Length of the shortest accepted word representing g."""
        if not hasattr(self, "_ell_cache"):
            self._ell_cache = self._language_lengths()
        try:
            return self._ell_cache[g]
        except KeyError:
            raise OutOfWindow(
                "no accepted word for the element inside the window"
            ) from None

    def power_norms(self, g, max_power: int = 6) -> tuple:
        out = []
        acc = self.model.identity
        for _ in range(max_power):
            acc = self.model.mul(acc, g)
            out.append(self.ell(acc))
        return tuple(out)

    def tau_estimate(self, g, max_power: int = 6) -> TauEstimate:
        """Stable word length lim ell(g^n)/n over the accepted language.

        When the last three increments agree the growth has gone linear in
        the window and the common increment is reported as the exact value;
        otherwise the best available quotient is returned unstabilized.
        """
        norms = self.power_norms(g, max_power)
        incs = [b - a for a, b in zip((0,) + norms, norms)]
        if len(incs) >= 3 and incs[-1] == incs[-2] == incs[-3]:
            return TauEstimate(Fraction(incs[-1]), True, norms)
        return TauEstimate(Fraction(norms[-1], len(norms)), False, norms)

    def conjugacy_tau(self, g, conj_norm: int = 2, max_power: int = 6) -> TauEstimate:
        """Minimum stabilized estimate over conjugates h*g*h^-1 with small h;
        the stable length is a conjugacy invariant, so conjugating can only
        help the window converge."""
        mul, inv = self.model.mul, self.model.inv
        best = None
        for h in self.ball.elements_of_norm_at_most(conj_norm):
            cand = mul(h, mul(g, inv(h)))
            try:
                est = self.tau_estimate(cand, max_power)
            except OutOfWindow:
                continue
            if est.stabilized and (best is None or est.value < best.value):
                best = est
        if best is None:
            raise OutOfWindow("no conjugate stabilized inside the window")
        return best

    def analyze(
        self, pair_rule: str = "classical", cap: int | None = None
    ) -> StructureReport:
        return StructureReport(
            radius=self.radius,
            finite_to_one=self.check_finite_to_one(),
            fellow=self.check_fellow_traveller(pair_rule, cap),
            quasigeodesic=self.quasigeodesic(),
        )


def replay_fellow_witness(witness: FellowWitness, model: GroupModel) -> int:
    """Recompute the separation recorded in a witness from scratch."""
    pu = model.path(witness.u)
    if witness.shift is not None:
        s = model.letter_images[witness.shift]
        pu = [model.mul(s, p) for p in pu]
    pv = model.path(witness.v)
    at = lambda pts, t: pts[t] if t < len(pts) else pts[-1]
    a, b = at(pu, witness.time), at(pv, witness.time)
    ball = BallOracle(model, len(witness.u) + len(witness.v) + 2)
    return ball.dist(a, b)


# ---------------------------------------------------------------------------
# built-in languages


def z2_model() -> GroupModel:
    return GroupModel(
        letter_images={"x": (1, 0), "X": (-1, 0), "y": (0, 1), "Y": (0, -1)},
        mul=lambda a, b: (a[0] + b[0], a[1] + b[1]),
        inv=lambda a: (-a[0], -a[1]),
        identity=(0, 0),
    )


def z2_normal_form_fsa() -> Fsa:
    """x-run then y-run: the unique normal form x^m y^n for each (m, n)."""
    # states: 0 start, 1 positive x-run, 2 negative x-run, 3 y+, 4 y-
    trans = [
        (0, "x", 1),
        (0, "X", 2),
        (0, "y", 3),
        (0, "Y", 4),
        (1, "x", 1),
        (2, "X", 2),
        (1, "y", 3),
        (1, "Y", 4),
        (2, "y", 3),
        (2, "Y", 4),
        (3, "y", 3),
        (4, "Y", 4),
    ]
    return Fsa(("x", "X", "y", "Y"), 5, 0, (0, 1, 2, 3, 4), trans)


def z2_parity_fsa() -> Fsa:
    """An adversarial normal form: x-run first when |m| + |n| is even,
    y-run first when odd.  Still one word per element and still geodesic,
    but the words for (k, k) and (k - 1, k) head off in opposite directions,
    so no fellow traveller constant works: the separation grows linearly
    with the window radius.
    """
    # state 0: start
    # 1..4:   initial x-run, (sign, parity) in (+even? no: (+,odd), (+,even), (-,odd), (-,even))
    # 5..8:   y-run after x-run, accepting when total parity is even
    # 9..12:  initial y-run
    # 13..16: x-run after y-run, accepting when total parity is odd
    def xrun(sign, parity):
        return 1 + (0 if sign > 0 else 2) + (0 if parity else 1)

    def yafter(sign, parity):
        return 5 + (0 if sign > 0 else 2) + (0 if parity else 1)

    def yrun(sign, parity):
        return 9 + (0 if sign > 0 else 2) + (0 if parity else 1)

    def xafter(sign, parity):
        return 13 + (0 if sign > 0 else 2) + (0 if parity else 1)

    trans = []
    trans += [(0, "x", xrun(1, 1)), (0, "X", xrun(-1, 1))]
    trans += [(0, "y", yrun(1, 1)), (0, "Y", yrun(-1, 1))]
    for p in (0, 1):
        q = 1 - p
        trans += [(xrun(1, p), "x", xrun(1, q)), (xrun(-1, p), "X", xrun(-1, q))]
        for s in (1, -1):
            trans += [
                (xrun(s, p), "y", yafter(1, q)),
                (xrun(s, p), "Y", yafter(-1, q)),
            ]
        trans += [
            (yafter(1, p), "y", yafter(1, q)),
            (yafter(-1, p), "Y", yafter(-1, q)),
        ]
        trans += [(yrun(1, p), "y", yrun(1, q)), (yrun(-1, p), "Y", yrun(-1, q))]
        for s in (1, -1):
            trans += [
                (yrun(s, p), "x", xafter(1, q)),
                (yrun(s, p), "X", xafter(-1, q)),
            ]
        trans += [
            (xafter(1, p), "x", xafter(1, q)),
            (xafter(-1, p), "X", xafter(-1, q)),
        ]
    accepting = [0]
    for s in (1, -1):
        # a pure x-run is the even form x^m y^0 or the odd form y^0 x^m;
        # either way the word itself is accepted, and likewise pure y-runs
        accepting += [xrun(s, 0), xrun(s, 1), yrun(s, 0), yrun(s, 1)]
        accepting += [yafter(s, 0), xafter(s, 1)]
    return Fsa(("x", "X", "y", "Y"), 17, 0, sorted(set(accepting)), trans)


def two_words_fsa() -> Fsa:
    """Accepts exactly the two words xy and yx: the smallest language where
    some element is hit twice."""
    trans = [(0, "x", 1), (0, "y", 2), (1, "y", 3), (2, "x", 3)]
    return Fsa(("x", "X", "y", "Y"), 4, 0, (3,), trans)


BUILTIN_LANGUAGES = {
    "z2-normal": (z2_normal_form_fsa, z2_model),
    "z2-adversarial": (z2_parity_fsa, z2_model),
    "two-words": (two_words_fsa, z2_model),
}
