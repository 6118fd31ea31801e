"""Commutators in finite Omega-groups: Higgins, Huq, Smith and ternary."""
from .core import (
    AlgebraError,
    AlgebraValidationError,
    BoundExceeded,
    FiniteAlgebra,
    Hom,
    NotAnIdeal,
    Operation,
    Signature,
    SignatureError,
    Subset,
    ValidationReport,
    check_hom,
    validate_distributivity,
    validate_group_laws,
)
from .subobjects import (
    IdealWitness,
    enumerate_ideals,
    enumerate_subalgebras,
    is_ideal,
    is_subalgebra,
    normal_closure,
    subalgebra_generate,
)
from .commutators import (
    NotDistributive,
    TernaryRecipeIncomplete,
    cooperates,
    higgins,
    huq,
    huq_via_lattice_oracle,
    sh_nh_instance_check,
    ternary_higgins,
)
from .congruences import Congruence, smith_commutator, smith_normalization

__version__ = "0.1.0"
