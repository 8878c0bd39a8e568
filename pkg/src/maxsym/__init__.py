"""Exact symbolic engine for linear ODEs with maximal symmetry algebras.

Submodules:

- diffalg: the exact differential-polynomial ring everything computes in
- odeforms: canonical forms and the coefficient characterization
- invariants: weight grading, semi-invariants, equivalence action
- generators: symmetry / equivalence vector fields and verification
- solutions: superposition basis and exact power-series checks
- parsing / rendering / cli: the text interface
"""

from .diffalg import (
    DiffAlgError,
    DiffPoly,
    DiffRatio,
    DivisionByZero,
    Rational,
    SingularSystem,
    ZeroPolynomial,
    normalize_integer,
    solve_linear,
    substitute,
)
from .odeforms import (
    CharacterizingSet,
    LinearODE,
    OrderTooLow,
    StructureError,
    a_of_coefficients,
    characterize,
    exp_shift,
    general_maxsym_form,
    is_max_symmetry,
    iterate_psi,
    normal_to_standard,
    source_constant,
    sym_power_normal,
    to_a_parameter,
)
from .invariants import (
    EquivalenceMap,
    NonCoefficientSymbol,
    SemiInvariant,
    j_defect,
    semi_invariant,
    transform_coefficients,
    verify_transform_law,
    weight,
)
from .generators import (
    VectorField,
    act_on_invariant,
    gen_laguerre,
    gen_normal,
    gen_standard,
    prolong,
    specialize_maxsym,
    verify_induced_tangency,
    verify_symmetry,
)
from .solutions import (
    MonomialSolution,
    TruncatedSeries,
    TruncationTooLow,
    series_check,
    superposition_basis,
    verify_annihilation,
)
from .parsing import OdeDocument, ParseError, UnknownSymbol, parse, parse_value
from .rendering import render, render_ode

__version__ = "0.1.0"
