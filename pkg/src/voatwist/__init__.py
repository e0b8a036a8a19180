"""Exact constructions of twisted modules over affine current algebras.

The package keeps every computation in closed form: scalars are rationals
or small cyclotomic combinations, module vectors are finite sums of PBW
monomials, and vertex-operator series are finite collections of
coefficients trusted inside an explicit exponent window.  Nothing is
floated and nothing is sampled, so an equality reported by the check
suite is an identity of the printed coefficients, not an approximation.
"""

from .errors import (
    ConfigError,
    CriticalLevel,
    DomainError,
    InvalidSymmetry,
    NeedsFieldExtension,
    NotFixed,
    NotIntertwining,
    NotQuasiPrimary,
    NotSemisimple,
    NotUnipotent,
    Unsupported,
    UnsupportedAlgebra,
    VoatwistError,
)
from .scalars import Cyc, fmt_rational, fmt_scalar, parse_rational
from .series import (
    LogSeries,
    branch_shift,
    series_combine,
    series_derivative,
    series_eq,
)
from .lie import (
    AutomorphismData,
    GAutomorphism,
    LieAlgebra,
    LieElt,
    build_simple_lie,
    diagram_automorphism,
)
from .fock import (
    InducedModule,
    PBWVector,
    QuotientModule,
    build_module,
    monomial_weight,
)
from .delta import DeltaOperator, delta_apply, delta_apply_series, make_delta
from .twist import (
    ExternalTwistedModule,
    ModuleMap,
    TwistedModule,
    export_twisted,
    functor_on_map,
    load_twisted,
    make_twisted,
    mode_table_entry,
    transport_tau,
    untwisted_as_twisted,
)
from .verify import CheckReport, format_monomial, format_vector

__version__ = "0.1.0"

__all__ = [
    "AutomorphismData",
    "CheckReport",
    "ConfigError",
    "CriticalLevel",
    "Cyc",
    "DeltaOperator",
    "DomainError",
    "ExternalTwistedModule",
    "GAutomorphism",
    "InducedModule",
    "InvalidSymmetry",
    "LieAlgebra",
    "LieElt",
    "LogSeries",
    "ModuleMap",
    "NeedsFieldExtension",
    "NotFixed",
    "NotIntertwining",
    "NotQuasiPrimary",
    "NotSemisimple",
    "NotUnipotent",
    "PBWVector",
    "QuotientModule",
    "TwistedModule",
    "Unsupported",
    "UnsupportedAlgebra",
    "VoatwistError",
    "branch_shift",
    "build_module",
    "build_simple_lie",
    "delta_apply",
    "delta_apply_series",
    "diagram_automorphism",
    "export_twisted",
    "fmt_rational",
    "fmt_scalar",
    "format_monomial",
    "format_vector",
    "functor_on_map",
    "load_twisted",
    "make_delta",
    "make_twisted",
    "mode_table_entry",
    "monomial_weight",
    "parse_rational",
    "series_combine",
    "series_derivative",
    "series_eq",
    "transport_tau",
    "untwisted_as_twisted",
    "__version__",
]
