"""The built-in lattice: an arithmetic genus-2 surface group extended by an
infinite-order elliptic conjugator, presented as an HNN extension.

The vertex group is the unit group of a maximal order in the rational
quaternion algebra with i^2 = 2, j^2 = 13 (a cocompact genus-2 Fuchsian
group on generators a, b, c, d).  The stable letter t conjugates an
index-12 subgroup H = <u1..u26> onto an index-12 subgroup K = <v1..v26>:

    t * u_i * t^-1 = v_i.

Every question about the extension is answered along two independent
routes and cross-checked: exact 2x2 matrices over Q(sqrt(2)) on one side,
decorated coset tables over the one-relator surface presentation on the
other.  A disagreement raises OracleDisagreement instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .comb import (
    CosetTable,
    Presentation,
    Word,
    _concat,
    dehn_reduce,
    evaluate_word,
    free_reduce,
    invert_word,
    schreier_graph_arith,
    todd_coxeter,
)
from .exact import ProjMat
from .quat import SubgroupOracles, phi, standard_generators, standard_oracles


class OracleDisagreement(RuntimeError):
    """The matrix route and the coset-table route returned different answers."""


SURFACE_RELATOR = "AdcbCaBD"

# (u_i, v_i) with t * u_i * t^-1 = v_i; words over a, b, c, d
STABLE_PAIRS = (
    ("DaacBC", "d"),
    ("DaacAd", "aaC"),
    ("DaacbDAd", "acB"),
    ("DadCDadcAAd", "babA"),
    ("DadCAd", "bbC"),
    ("DadbCaBCdbAcAcBC", "bdCB"),
    ("bbCAAd", "cbDA"),
    ("DDaaDAd", "ccc"),
    ("DaBDad", "cdC"),
    ("DadcbbAAdcDAd", "AbCB"),
    ("DadcbADAd", "Acb"),
    ("DaadcDAd", "AdB"),
    ("DadcBCAdAAd", "BaBA"),
    ("DadcBBAAd", "BcbA"),
    ("DadcBCbAAd", "BdbA"),
    ("DaddbAcBBCDAd", "Caa"),
    ("DadAAdbADAd", "Cbb"),
    ("DaaDaCabCAAd", "abaDA"),
    ("DaaDcBBCDAd", "abba"),
    ("DaaDaBBBCDAd", "abca"),
    ("DaaDaCBCDAd", "abda"),
    ("DaacBAdbAdbAcAcBC", "adaCB"),
    ("DaacBBCDaaDAd", "adbc"),
    ("DaaCdbADAd", "aBab"),
    ("DadCDacBAcBC", "bcaB"),
    ("DadCDaDadbAd", "bcbAC"),
)

T_LETTER = 5  # index of t in the ambient alphabet (a, b, c, d, t)


@dataclass(frozen=True)
class BrittonForm:
    """word = segments[0] * t^exponents[0] * segments[1] * ... ; segments are
    t-free and freely reduced, and no pinch t*g*t^-1 (g in H) or t^-1*g*t
    (g in K) remains."""

    segments: tuple[Word, ...]
    exponents: tuple[int, ...]

    @property
    def t_count(self) -> int:
        return len(self.exponents)

    def to_word(self) -> Word:
        out = list(self.segments[0])
        for e, seg in zip(self.exponents, self.segments[1:]):
            out.append(T_LETTER if e > 0 else -T_LETTER)
            out.extend(seg)
        return free_reduce(out)

    def render(self, alphabet=("a", "b", "c", "d", "t")) -> str:
        from .comb import render_word

        return render_word(self.to_word(), alphabet, "compact")


@dataclass(frozen=True)
class RelationCheck:
    index: int
    relator: str
    holds: bool


@dataclass(frozen=True)
class VerificationReport:
    relations: tuple[RelationCheck, ...]
    pair_memberships_ok: bool
    source_index: int
    target_index: int
    mutants_detected: int
    mutants_total: int

    @property
    def all_hold(self) -> bool:
        return (
            all(r.holds for r in self.relations)
            and self.pair_memberships_ok
            and self.mutants_detected == self.mutants_total
        )


class HnnGroup:
    """The HNN extension with its exact matrix model and decorated tables."""

    def __init__(
        self,
        vertex: Presentation,
        ambient: Presentation,
        pairs,
        images,
        oracles: SubgroupOracles,
        source_table: CosetTable,
        target_table: CosetTable,
    ):
        self.vertex = vertex
        self.ambient = ambient
        self.pairs = tuple(pairs)
        self.images = list(images)
        self.oracles = oracles
        self.source_table = source_table
        self.target_table = target_table
        self._identity = ProjMat.identity(2)

    # -- words and matrices ------------------------------------------------

    def as_word(self, w) -> Word:
        return self.ambient.parse(w) if isinstance(w, str) else tuple(w)

    def evaluate(self, w) -> ProjMat:
        return evaluate_word(self.as_word(w), self.images, self._identity)

    # -- dual membership oracles --------------------------------------------

    def _dual_membership(self, g: Word, table: CosetTable, arith) -> bool:
        if any(abs(x) == T_LETTER for x in g):
            raise ValueError("membership test needs a word in a, b, c, d")
        by_matrix = arith(self.evaluate(g))
        by_table = table.follow(0, g) == 0
        if by_matrix != by_table:
            raise OracleDisagreement(
                f"membership of {self.vertex.render(g)}: matrices say "
                f"{by_matrix}, coset table says {by_table}"
            )
        return by_matrix

    def in_source_subgroup(self, g) -> bool:
        """Is the t-free word in H = <u1..u26>?  Both routes must agree."""
        return self._dual_membership(
            self.as_word(g), self.source_table, self.oracles.in_source_subgroup
        )

    def in_target_subgroup(self, g) -> bool:
        """Is the t-free word in K = <v1..v26>?  Both routes must agree."""
        return self._dual_membership(
            self.as_word(g), self.target_table, self.oracles.in_target_subgroup
        )

    # -- the defining isomorphism H -> K -------------------------------------

    def conjugate_into_target(self, g) -> Word:
        """t * g * t^-1 as a word over a..d, for g in H.

        The u-letter rewriting of g is reinterpreted over the v-letters:
        the defining isomorphism matches them up index by index.
        """
        sub = self.source_table.rewrite(self.as_word(g))
        return self.target_table.expand_subgroup_word(sub)

    def conjugate_into_source(self, g) -> Word:
        """t^-1 * g * t as a word over a..d, for g in K."""
        sub = self.target_table.rewrite(self.as_word(g))
        return self.source_table.expand_subgroup_word(sub)

    # -- Britton reduction ----------------------------------------------------

    def britton_reduce(self, w) -> BrittonForm:
        """Remove pinches t*g*t^-1 (g in H) and t^-1*g*t (g in K) leftmost
        innermost until none remain."""
        word = free_reduce(self.as_word(w))
        segs: list[Word] = [()]
        exps: list[int] = []
        seg: list[int] = []
        for g in word:
            if abs(g) == T_LETTER:
                segs[-1] = tuple(seg)
                seg = []
                exps.append(1 if g > 0 else -1)
                segs.append(())
            else:
                seg.append(g)
        segs[-1] = tuple(seg)

        changed = True
        while changed:
            changed = False
            for j in range(len(exps) - 1):
                if exps[j] != -exps[j + 1]:
                    continue
                g = segs[j + 1]
                if exps[j] == 1:
                    if not self.in_source_subgroup(g):
                        continue
                    repl = self.conjugate_into_target(g)
                else:
                    if not self.in_target_subgroup(g):
                        continue
                    repl = self.conjugate_into_source(g)
                segs[j : j + 3] = [_concat(segs[j], repl, segs[j + 2])]
                del exps[j : j + 2]
                changed = True
                break
        return BrittonForm(tuple(segs), tuple(exps))

    # -- word problem -----------------------------------------------------------

    def is_trivial(self, w) -> bool:
        """Word problem along both routes; they must agree.

        A reduced form with surviving stable letters is never trivial
        (Britton's lemma); a t-free remainder is decided by Dehn's
        algorithm in the one-relator vertex presentation.
        """
        word = self.as_word(w)
        by_matrix = self.evaluate(word).is_identity()
        form = self.britton_reduce(word)
        if form.exponents:
            if by_matrix:
                raise OracleDisagreement(
                    "matrix evaluates to the identity but stable letters survive"
                )
            return False
        by_comb = dehn_reduce(form.segments[0], self.vertex) == ()
        if by_comb != by_matrix:
            raise OracleDisagreement(
                f"word problem: matrices say {by_matrix}, Dehn says {by_comb}"
            )
        return by_comb

    # -- the tree -----------------------------------------------------------------

    def tree_neighbors(self) -> tuple[Word, ...]:
        """Words moving the base vertex to each of its neighbors.

        One neighbor s*t per coset of K (the forward direction) and one
        neighbor s*t^-1 per coset of H, so the valence is 12 + 12 = 24.
        s*t and s'*t reach the same vertex exactly when s^-1*s' lies in K,
        so s must run over left coset representatives: the inverses of the
        table's right coset representatives.
        """
        forward = [
            invert_word(r) + (T_LETTER,) for r in self.target_table.representatives
        ]
        backward = [
            invert_word(r) + (-T_LETTER,) for r in self.source_table.representatives
        ]
        return tuple(forward + backward)

    def tree_distance(self, w, other=None) -> int:
        """Distance in the tree between the vertices reached by two words
        (the base vertex when other is omitted): the number of stable
        letters surviving Britton reduction."""
        word = self.as_word(w)
        if other is not None:
            word = _concat(invert_word(word), self.as_word(other))
        return self.britton_reduce(word).t_count

    def same_vertex(self, w1, w2) -> bool:
        return self.tree_distance(w1, w2) == 0

    # -- presentation checks -----------------------------------------------------

    def verify_presentation(self) -> VerificationReport:
        checks = []
        for idx, r in enumerate(self.ambient.relators, start=1):
            checks.append(
                RelationCheck(
                    index=idx,
                    relator=self.ambient.render(r, "compact"),
                    holds=self.evaluate(r).is_identity(),
                )
            )
        memberships = True
        for u, v in self.pairs:
            u_w, v_w = self.vertex.parse(u), self.vertex.parse(v)
            if not (self.in_source_subgroup(u_w) and self.in_target_subgroup(v_w)):
                memberships = False
        detected = 0
        for r in self.ambient.relators:
            mutant = free_reduce(r + (1,))
            if not self.evaluate(mutant).is_identity():
                detected += 1
        return VerificationReport(
            relations=tuple(checks),
            pair_memberships_ok=memberships,
            source_index=self.source_table.index,
            target_index=self.target_table.index,
            mutants_detected=detected,
            mutants_total=len(self.ambient.relators),
        )

    def schreier_graph(self, side: str):
        """The coset action recomputed purely arithmetically, for comparison
        with the decorated tables (same breadth-first numbering)."""
        if side == "source":
            member = self.oracles.in_source_subgroup
        elif side == "target":
            member = self.oracles.in_target_subgroup
        else:
            raise ValueError("side must be 'source' or 'target'")
        return schreier_graph_arith(member, self.images[:4], self._identity)


def _ambient_presentation(vertex: Presentation) -> Presentation:
    relators: list[Word] = [vertex.parse(SURFACE_RELATOR) ]
    for u, v in STABLE_PAIRS:
        r = (
            (T_LETTER,)
            + vertex.parse(u)
            + (-T_LETTER,)
            + invert_word(vertex.parse(v))
        )
        relators.append(r)
    return Presentation("abcdt", relators)


@lru_cache(maxsize=1)
def load_builtin_group() -> HnnGroup:
    """Construct the built-in group and run its startup self-checks."""
    vertex = Presentation("abcd", [SURFACE_RELATOR])
    ambient = _ambient_presentation(vertex)
    gens = standard_generators()
    images = [ProjMat(phi(gens[n])) for n in "abcd"] + [ProjMat(phi(gens["t"]))]

    identity = ProjMat.identity(2)
    for r in ambient.relators:
        if not evaluate_word(r, images, identity).is_identity():
            raise RuntimeError(
                f"defining relation fails in the matrix model: "
                f"{ambient.render(r, 'compact')}"
            )

    u_words = [w for w, _ in STABLE_PAIRS]
    v_words = [w for _, w in STABLE_PAIRS]
    source_table = todd_coxeter(
        vertex,
        u_words,
        subgroup_names=[f"u{i+1}" for i in range(len(u_words))],
    )
    target_table = todd_coxeter(
        vertex,
        v_words,
        subgroup_names=[f"v{i+1}" for i in range(len(v_words))],
    )
    if source_table.index != 12 or target_table.index != 12:
        raise RuntimeError(
            f"subgroup indices {source_table.index}, {target_table.index} != 12"
        )
    return HnnGroup(
        vertex=vertex,
        ambient=ambient,
        pairs=STABLE_PAIRS,
        images=images,
        oracles=standard_oracles(),
        source_table=source_table,
        target_table=target_table,
    )
