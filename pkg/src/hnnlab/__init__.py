"""Exact computations in a surface-by-tree lattice.

The package builds one specific group three ways at once: as matrices over
a real quadratic field (through a quaternion algebra), as an HNN extension
of a genus-2 surface group with decorated coset tables for the edge
subgroups, and as a group acting on its dual tree.  Every structural claim
is checked in at least two of the three models.

Layers, bottom up:

  exact   rational quadratic extensions, 2x2 matrices, PSL(2) classes
  quat    the rational quaternion algebra, its maximal order, unit groups
  isom    isometry classification and exact translation lengths
  comb    words, small cancellation, decorated coset enumeration, homology
  hnn     the built-in lattice with dual membership oracles
  biauto  windowed checks of automatic-structure axioms
  cli     the hnn-lab command line tool
"""

from .biauto import (
    BallOracle,
    Fsa,
    GroupModel,
    OutOfWindow,
    StructureReport,
    UnknownLetter,
    WindowedLanguage,
    replay_fellow_witness,
)
from .comb import (
    AbelianStructure,
    CapExceeded,
    CosetTable,
    NotInSubgroup,
    Presentation,
    abelianization,
    dehn_reduce,
    genus_from_index,
    parse_word,
    render_word,
    schreier_graph_arith,
    smith_invariants,
    todd_coxeter,
)
from .exact import (
    Mat2,
    MismatchedField,
    NotUnimodular,
    ProjMat,
    QuadExt,
)
from .hnn import (
    BrittonForm,
    HnnGroup,
    OracleDisagreement,
    VerificationReport,
    load_builtin_group,
)
from .isom import (
    Dependent,
    EllipticFinite,
    EllipticInfinite,
    Hyperbolic,
    Identity,
    IndependentCertified,
    IndependentUpTo,
    NotHyperbolic,
    Parabolic,
    TransLength,
    classify,
    length_ratio_independent,
    translation_length,
)
from .quat import (
    Quaternion,
    phi,
    phi_inverse,
    ring_closure,
    standard_generators,
    standard_oracles,
    standard_order,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianStructure",
    "BallOracle",
    "BrittonForm",
    "CapExceeded",
    "CosetTable",
    "Dependent",
    "EllipticFinite",
    "EllipticInfinite",
    "Fsa",
    "GroupModel",
    "HnnGroup",
    "Hyperbolic",
    "Identity",
    "IndependentCertified",
    "IndependentUpTo",
    "Mat2",
    "MismatchedField",
    "NotHyperbolic",
    "NotInSubgroup",
    "NotUnimodular",
    "OracleDisagreement",
    "OutOfWindow",
    "Parabolic",
    "Presentation",
    "ProjMat",
    "QuadExt",
    "Quaternion",
    "StructureReport",
    "TransLength",
    "UnknownLetter",
    "VerificationReport",
    "WindowedLanguage",
    "abelianization",
    "classify",
    "dehn_reduce",
    "genus_from_index",
    "length_ratio_independent",
    "load_builtin_group",
    "parse_word",
    "phi",
    "phi_inverse",
    "render_word",
    "replay_fellow_witness",
    "ring_closure",
    "schreier_graph_arith",
    "smith_invariants",
    "standard_generators",
    "standard_oracles",
    "standard_order",
    "todd_coxeter",
    "translation_length",
]
