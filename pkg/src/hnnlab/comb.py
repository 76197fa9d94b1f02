"""Free group words, finite presentations, Dehn reduction for metric small
cancellation presentations, and coset enumeration carrying subgroup
decorations.

Words over a named alphabet are tuples of nonzero integers: letter g > 0
stands for generator number g-1 of the alphabet and -g for its inverse.
Two text grammars are supported.  The compact grammar writes one letter
per character with inverses uppercase ("tDaacBCT") and only applies when
every generator name is a single lowercase character.  The verbose
grammar joins tokens with "*" and allows exponents ("t*d^-1*a^2*t^-1");
it works for any generator names, in particular subgroup alphabets like
u1, ..., u26.

The enumerator is the modified Todd-Coxeter procedure: every edge
alpha^x = beta of the coset graph carries a word P over the subgroup
generators with

    rep(alpha) * x = P * rep(beta)     in the group,

so a finished table doubles as a rewriting machine sending any word that
lies in the subgroup to a word in the subgroup generators.
"""

from __future__ import annotations

from dataclasses import dataclass

Word = tuple[int, ...]


class NotInSubgroup(ValueError):
    """A word expected to lie in the enumerated subgroup does not."""


class NotDehnPresentation(ValueError):
    """The symmetrized relators fail the metric condition C'(1/6)."""


class CapExceeded(RuntimeError):
    """Coset enumeration defined more cosets than the configured cap."""

    def __init__(self, cap: int):
        super().__init__(f"more than {cap} cosets defined; raise the cap")
        self.cap = cap


# ---------------------------------------------------------------------------
# words


def free_reduce(word) -> Word:
    out: list[int] = []
    for g in word:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def cyclic_reduce(word) -> Word:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def invert_word(word) -> Word:
    return tuple(-g for g in reversed(word))


def _concat(*words) -> Word:
    out: list[int] = []
    for w in words:
        for g in w:
            if out and out[-1] == -g:
                out.pop()
            else:
                out.append(g)
    return tuple(out)


def _validate_word(word, ngens: int) -> Word:
    w = tuple(word)
    for g in w:
        if not isinstance(g, int) or g == 0 or abs(g) > ngens:
            raise ValueError(f"letter {g!r} outside alphabet of size {ngens}")
    return w


def parse_word(text: str, alphabet) -> Word:
    """Parse either grammar; the empty word is '' or '1'."""
    names = {name: idx + 1 for idx, name in enumerate(alphabet)}
    text = text.strip()
    if text in ("", "1"):
        return ()
    if text.isalpha() and all(len(n) == 1 for n in names):
        out = []
        for ch in text:
            base = ch.lower()
            if base not in names:
                raise ValueError(f"unknown generator {base!r}")
            out.append(names[base] if ch.islower() else -names[base])
        return tuple(out)
    out = []
    for token in text.replace(" ", "").split("*"):
        if not token:
            raise ValueError("empty token in word")
        name, _, exp_text = token.partition("^")
        if name not in names:
            raise ValueError(f"unknown generator {name!r}")
        exp = int(exp_text) if exp_text else 1
        letter = names[name] if exp >= 0 else -names[name]
        out.extend([letter] * abs(exp))
    return tuple(out)


def render_word(word, alphabet, style: str = "compact") -> str:
    if not word:
        return "1"
    if style == "compact":
        if any(len(n) != 1 or not n.islower() for n in alphabet):
            raise ValueError("compact rendering needs single-character names")
        return "".join(
            alphabet[g - 1] if g > 0 else alphabet[-g - 1].upper() for g in word
        )
    if style != "verbose":
        raise ValueError(f"unknown style {style!r}")
    parts = []
    run_letter, run = word[0], 0
    for g in list(word) + [0]:
        if g == run_letter:
            run += 1
            continue
        name = alphabet[abs(run_letter) - 1]
        exp = run if run_letter > 0 else -run
        parts.append(name if exp == 1 else f"{name}^{exp}")
        run_letter, run = g, 1
    return "*".join(parts)


def evaluate_word(word, images, identity):
    """Fold a word through group element images (needs * and .inverse())."""
    acc = identity
    for g in word:
        acc = acc * (images[g - 1] if g > 0 else images[-g - 1].inverse())
    return acc


class Presentation:
    """A finite presentation; relators are stored freely reduced."""

    def __init__(self, generators, relators=()):
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        rels = []
        for r in relators:
            w = parse_word(r, self.generators) if isinstance(r, str) else tuple(r)
            rels.append(free_reduce(_validate_word(w, len(self.generators))))
        self.relators = tuple(rels)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def parse(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def render(self, word, style: str = "compact") -> str:
        return render_word(word, self.generators, style)

    def __repr__(self):
        return f"Presentation({self.generators!r}, {len(self.relators)} relators)"


# ---------------------------------------------------------------------------
# Dehn reduction


def symmetrized_relators(presentation: Presentation) -> tuple[Word, ...]:
    """All cyclic permutations of the cyclically reduced relators and their
    inverses, deduplicated and sorted."""
    out = set()
    for r in presentation.relators:
        w0 = cyclic_reduce(r)
        if not w0:
            continue
        for w in (w0, invert_word(w0)):
            for k in range(len(w)):
                out.add(w[k:] + w[:k])
    return tuple(sorted(out))


def _common_prefix_len(u: Word, v: Word) -> int:
    n = 0
    for x, y in zip(u, v):
        if x != y:
            break
        n += 1
    return n


def max_piece_length(symmetrized) -> int:
    best = 0
    for i, r in enumerate(symmetrized):
        for s in symmetrized[i + 1 :]:
            best = max(best, _common_prefix_len(r, s))
    return best


def is_metric_sixth(symmetrized) -> bool:
    """C'(1/6): every piece is strictly shorter than a sixth of each relator
    it sits inside.  Since the set is closed under cyclic permutation, every
    piece shows up as a common prefix of two distinct members."""
    for i, r in enumerate(symmetrized):
        for s in symmetrized[i + 1 :]:
            if 6 * _common_prefix_len(r, s) >= min(len(r), len(s)):
                return False
    return True


def dehn_reduce(word, presentation: Presentation) -> Word:
    """Dehn's algorithm: repeatedly replace a subword matching strictly more
    than half of a symmetrized relator by the shorter complement, taking the
    leftmost match and the longest match there.  Under C'(1/6) the result is
    empty exactly when the word represents the identity (Greendlinger).
    """
    sym = symmetrized_relators(presentation)
    if not sym or not is_metric_sixth(sym):
        raise NotDehnPresentation("relators do not satisfy C'(1/6)")
    w = free_reduce(word)
    while True:
        replaced = False
        for i in range(len(w)):
            best_k, best_r = 0, None
            for r in sym:
                k = _common_prefix_len(w[i:], r)
                if 2 * k > len(r) and k > best_k:
                    best_k, best_r = k, r
            if best_r is not None:
                w = _concat(w[:i], invert_word(best_r[best_k:]), w[i + best_k :])
                replaced = True
                break
        if not replaced:
            return w


# ---------------------------------------------------------------------------
# modified Todd-Coxeter


def _col(letter: int) -> int:
    return 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1


def _letter_of_col(col: int) -> int:
    return col // 2 + 1 if col % 2 == 0 else -(col // 2 + 1)


class _Enumerator:
    """Working state of the modified Todd-Coxeter enumeration (HLT style).

    Decorations live alongside the table: deco[a][col] is a word over the
    subgroup alphabet with  rep(a) * letter = deco * rep(b).  Both
    directions of an edge are always stored together, with mirrored
    (inverse) decorations, so backward scans can read decorations straight
    from the table.
    """

    def __init__(self, ncols: int, cap: int):
        self.ncols = ncols
        self.cap = cap
        self.table: list[list[int | None]] = []
        self.deco: list[list[Word | None]] = []
        self.parent: dict[int, tuple[int, Word]] = {}
        self.dead: set[int] = set()
        self.pending: list[tuple[int, int, Word]] = []
        self.new_coset()

    def new_coset(self) -> int:
        if len(self.table) >= self.cap:
            raise CapExceeded(self.cap)
        self.table.append([None] * self.ncols)
        self.deco.append([None] * self.ncols)
        return len(self.table) - 1

    def find(self, a: int) -> tuple[int, Word]:
        """Root r and word w with rep(a) = w * rep(r)."""
        entry = self.parent.get(a)
        if entry is None:
            return a, ()
        root, up = self.find(entry[0])
        w = _concat(entry[1], up)
        self.parent[a] = (root, w)
        return root, w

    def set_edge(self, a: int, letter: int, b: int, p: Word) -> None:
        ca, cb = _col(letter), _col(-letter)
        assert self.table[a][ca] is None and self.table[b][cb] is None
        self.table[a][ca] = b
        self.deco[a][ca] = p
        self.table[b][cb] = a
        self.deco[b][cb] = invert_word(p)

    def coincidence(self, lam: int, mu: int, omega: Word) -> None:
        """Record rep(lam) = omega * rep(mu) and process to completion."""
        self.pending.append((lam, mu, omega))
        while self.pending:
            l, m, w = self.pending.pop()
            lr, lw = self.find(l)
            mr, mw = self.find(m)
            if lr == mr:
                continue  # yields a relation among subgroup generators
            # rep(l) = w*rep(m):  lw*rep(lr) = w*mw*rep(mr)
            if lr < mr:
                keep, gone = lr, mr
                u = _concat(invert_word(mw), invert_word(w), lw)
            else:
                keep, gone = mr, lr
                u = _concat(invert_word(lw), w, mw)
            # rep(gone) = u * rep(keep)
            self.parent[gone] = (keep, u)
            self.dead.add(gone)
            row = self.table[gone]
            drow = self.deco[gone]
            self.table[gone] = [None] * self.ncols
            self.deco[gone] = [None] * self.ncols
            for c in range(self.ncols):
                beta = row[c]
                if beta is None:
                    continue
                # drop the mirror entry pointing back at the dead coset
                if beta != gone and self.table[beta][_col(-_letter_of_col(c))] == gone:
                    mc = _col(-_letter_of_col(c))
                    self.table[beta][mc] = None
                    self.deco[beta][mc] = None
                br, bw = self.find(beta)
                # rep(gone)*x = p*rep(beta):  rep(keep)*x = u^-1*p*bw*rep(br)
                q = _concat(invert_word(u), drow[c], bw)
                x = _letter_of_col(c)
                target = self.table[keep][c]
                if target is not None:
                    # rep(keep)*x also equals deco*rep(target)
                    self.pending.append(
                        (target, br, _concat(invert_word(self.deco[keep][c]), q))
                    )
                    continue
                back = self.table[br][_col(-x)]
                if back is not None:
                    # some coset already maps to br under x
                    pb = self.deco[br][_col(-x)]
                    # rep(br)*x^-1 = pb*rep(back) => rep(back)*x = pb^-1*rep(br)
                    self.pending.append((keep, back, _concat(q, pb)))
                    continue
                self.set_edge(keep, x, br, q)

    def scan_and_fill(self, alpha: int, word: Word, value: Word) -> None:
        """Trace  rep(alpha)*word = value*rep(alpha), defining cosets for
        gaps, deducing the final missing edge, or merging on disagreement."""
        k = len(word)
        while True:
            if alpha in self.dead:
                return  # the scan at the surviving root covers this one
            f, F, i = alpha, (), 0
            while i < k:
                nxt = self.table[f][_col(word[i])]
                if nxt is None:
                    break
                F = _concat(F, self.deco[f][_col(word[i])])
                f = nxt
                i += 1
            if i == k:
                if f == alpha:
                    return
                self.coincidence(f, alpha, _concat(invert_word(F), value))
                continue
            b, B, j = alpha, (), k
            while j > i:
                prev = self.table[b][_col(-word[j - 1])]
                if prev is None:
                    break
                B = _concat(self.deco[prev][_col(word[j - 1])], B)
                b = prev
                j -= 1
            if j == i:
                if f == b:
                    return
                self.coincidence(
                    f, b, _concat(invert_word(F), value, invert_word(B))
                )
                continue
            if j == i + 1:
                p = _concat(invert_word(F), value, invert_word(B))
                self.set_edge(f, word[i], b, p)
                return
            beta = self.new_coset()
            self.set_edge(f, word[i], beta, ())

    def verify(self, relators, subgroup_words) -> None:
        for a in range(len(self.table)):
            if a in self.dead:
                continue
            for c in range(self.ncols):
                b = self.table[a][c]
                if b is None:
                    raise RuntimeError("incomplete table after enumeration")
                if self.table[b][_col(-_letter_of_col(c))] != a:
                    raise RuntimeError("mirror inconsistency in coset table")
            for r in relators:
                if self._trace(a, r) != a:
                    raise RuntimeError("relator fails to close at a coset")
        for h in subgroup_words:
            if self._trace(0, h) != 0:
                raise RuntimeError("subgroup generator leaves coset 0")

    def _trace(self, a: int, word: Word) -> int | None:
        for g in word:
            nxt = self.table[a][_col(g)]
            if nxt is None:
                return None
            a = nxt
        return a


@dataclass(frozen=True)
class CosetTable:
    """A finished, standardized coset table with subgroup decorations.

    Cosets are numbered in breadth-first discovery order from coset 0
    (the subgroup itself), scanning columns g0, g0^-1, g1, g1^-1, ...;
    two enumerations of the same action therefore agree entry by entry.
    """

    generators: tuple[str, ...]
    subgroup_names: tuple[str, ...]
    subgroup_words: tuple[Word, ...]
    table: tuple[tuple[int, ...], ...]
    decorations: tuple[tuple[Word, ...], ...]
    representatives: tuple[Word, ...]

    @property
    def index(self) -> int:
        return len(self.table)

    def follow(self, coset: int, word) -> int:
        for g in word:
            coset = self.table[coset][_col(g)]
        return coset

    def rewrite(self, word) -> Word:
        """Rewrite a word lying in the subgroup over the subgroup alphabet.

        Chains the decorations along the scan from coset 0:
        rep(0) * word = result * rep(end), and rep(0) is empty, so the
        scan must end back at coset 0 for word to lie in the subgroup.
        """
        a, acc = 0, ()
        for g in word:
            acc = _concat(acc, self.decorations[a][_col(g)])
            a = self.table[a][_col(g)]
        if a != 0:
            raise NotInSubgroup(f"word ends at coset {a}, not at the subgroup")
        return acc

    def expand_subgroup_word(self, word) -> Word:
        """Substitute each subgroup letter by its defining ambient word."""
        parts = []
        for g in word:
            w = self.subgroup_words[abs(g) - 1]
            parts.append(w if g > 0 else invert_word(w))
        return _concat(*parts)

    def to_json(self) -> dict:
        columns = []
        for c in range(2 * len(self.generators)):
            g = _letter_of_col(c)
            name = self.generators[abs(g) - 1]
            columns.append(name if g > 0 else f"{name}^-1")
        return {
            "generators": list(self.generators),
            "columns": columns,
            "index": self.index,
            "subgroup_generators": {
                name: render_word(w, self.generators, "verbose")
                for name, w in zip(self.subgroup_names, self.subgroup_words)
            },
            "table": [list(row) for row in self.table],
            "decorations": [
                [render_word(p, self.subgroup_names, "verbose") for p in row]
                for row in self.decorations
            ],
            "representatives": [
                render_word(r, self.generators, "verbose")
                for r in self.representatives
            ],
        }


def _standardize(table, deco):
    """Renumber cosets in BFS order (columns scanned in order) and read off
    breadth-first representative words."""
    n = len(table)
    ncols = len(table[0]) if table else 0
    order = [0]
    new_of_old = {0: 0}
    reps: list[Word] = [()]
    qi = 0
    while qi < len(order):
        a = order[qi]
        qi += 1
        for c in range(ncols):
            b = table[a][c]
            if b not in new_of_old:
                new_of_old[b] = len(order)
                order.append(b)
                reps.append(reps[new_of_old[a]] + (_letter_of_col(c),))
    if len(order) != n:
        raise RuntimeError("coset graph is not connected")
    new_table = tuple(
        tuple(new_of_old[table[a][c]] for c in range(ncols)) for a in order
    )
    new_deco = tuple(tuple(deco[a][c] for c in range(ncols)) for a in order)
    return new_table, new_deco, tuple(reps)


def todd_coxeter(
    presentation: Presentation,
    subgroup_generators,
    *,
    cap: int = 1_000_000,
    subgroup_names=None,
) -> CosetTable:
    """Enumerate the cosets of the subgroup generated by the given words,
    returning the standardized decorated table.

    subgroup_generators may be words or strings in either grammar.  The
    subgroup alphabet defaults to h1, h2, ...
    """
    words = []
    for h in subgroup_generators:
        w = presentation.parse(h) if isinstance(h, str) else tuple(h)
        words.append(free_reduce(_validate_word(w, presentation.ngens)))
    if subgroup_names is None:
        subgroup_names = tuple(f"h{m+1}" for m in range(len(words)))
    else:
        subgroup_names = tuple(subgroup_names)
        if len(subgroup_names) != len(words):
            raise ValueError("one name per subgroup generator required")

    enum = _Enumerator(2 * presentation.ngens, cap)
    for m, h in enumerate(words):
        enum.scan_and_fill(0, h, (m + 1,))
    alpha = 0
    while alpha < len(enum.table):
        if alpha not in enum.dead:
            for r in presentation.relators:
                if alpha in enum.dead:
                    break
                enum.scan_and_fill(alpha, r, ())
        if alpha not in enum.dead:
            for c in range(enum.ncols):
                if alpha in enum.dead:
                    break
                if enum.table[alpha][c] is None:
                    beta = enum.new_coset()
                    enum.set_edge(alpha, _letter_of_col(c), beta, ())
        alpha += 1
    enum.verify(presentation.relators, words)

    live = [a for a in range(len(enum.table)) if a not in enum.dead]
    compact_of = {a: i for i, a in enumerate(live)}
    table = [
        [compact_of[enum.table[a][c]] for c in range(enum.ncols)] for a in live
    ]
    deco = [[enum.deco[a][c] for c in range(enum.ncols)] for a in live]
    std_table, std_deco, reps = _standardize(table, deco)
    return CosetTable(
        generators=presentation.generators,
        subgroup_names=subgroup_names,
        subgroup_words=tuple(words),
        table=std_table,
        decorations=std_deco,
        representatives=reps,
    )


# ---------------------------------------------------------------------------
# arithmetic Schreier graph


@dataclass(frozen=True)
class SchreierGraph:
    """Coset action computed from concrete group elements and a membership
    oracle, numbered in the same breadth-first order as CosetTable."""

    table: tuple[tuple[int, ...], ...]
    representatives: tuple[Word, ...]

    @property
    def index(self) -> int:
        return len(self.table)


def schreier_graph_arith(membership, images, identity, cap: int = 10_000) -> SchreierGraph:
    """Enumerate right cosets H*g by arithmetic: two elements x, y sit in the
    same coset exactly when x * y^-1 passes the membership oracle."""
    elems = [identity]
    words: list[Word] = [()]
    rows: list[list[int]] = []
    ncols = 2 * len(images)
    i = 0
    while i < len(elems):
        row = []
        for c in range(ncols):
            g = _letter_of_col(c)
            step = images[g - 1] if g > 0 else images[-g - 1].inverse()
            cand = elems[i] * step
            for j, other in enumerate(elems):
                if membership(cand * other.inverse()):
                    row.append(j)
                    break
            else:
                if len(elems) >= cap:
                    raise CapExceeded(cap)
                elems.append(cand)
                words.append(words[i] + (g,))
                row.append(len(elems) - 1)
        rows.append(row)
        i += 1
    return SchreierGraph(
        table=tuple(tuple(r) for r in rows), representatives=tuple(words)
    )


# ---------------------------------------------------------------------------
# abelianization


def smith_invariants(rows) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    out: list[int] = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing submatrix into position (t, t)
        pos = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (pos is None or abs(a[i][j]) < abs(a[pos[0]][pos[1]])):
                    pos = (i, j)
        if pos is None:
            break
        while True:
            i0, j0 = pos
            a[t], a[i0] = a[i0], a[t]
            for row in a:
                row[t], row[j0] = row[j0], row[t]
            if a[t][t] < 0:
                a[t] = [-v for v in a[t]]
            dirty = False
            for i in range(t + 1, m):
                q = a[i][t] // a[t][t]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = a[t][j] // a[t][t]
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if dirty:
                pos = min(
                    ((i, j) for i in range(t, m) for j in range(t, n) if a[i][j]),
                    key=lambda ij: abs(a[ij[0]][ij[1]]),
                )
                continue
            # pivot must divide the rest of the submatrix
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
            pos = (t, t)
        out.append(a[t][t])
        t += 1
    return out


@dataclass(frozen=True)
class AbelianStructure:
    betti: int
    torsion: tuple[int, ...]

    def __str__(self):
        parts = ["Z"] * self.betti + [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "trivial"


def abelianization(presentation: Presentation) -> AbelianStructure:
    """Invariants of the abelianized group from the relator exponent matrix."""
    rows = []
    for r in presentation.relators:
        row = [0] * presentation.ngens
        for g in r:
            row[abs(g) - 1] += 1 if g > 0 else -1
        rows.append(row)
    if not rows:
        return AbelianStructure(presentation.ngens, ())
    inv = smith_invariants(rows)
    return AbelianStructure(
        betti=presentation.ngens - len(inv),
        torsion=tuple(d for d in inv if d != 1),
    )


def genus_from_index(genus: int, index: int) -> int:
    """Genus of an index-n subgroup of a genus-g surface group, by
    multiplicativity of the Euler characteristic: 2 - 2g' = n*(2 - 2g)."""
    if genus < 2 or index < 1:
        raise ValueError("need genus >= 2 and index >= 1")
    return index * (genus - 1) + 1
