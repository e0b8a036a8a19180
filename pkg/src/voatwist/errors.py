"""Exception hierarchy shared across the package.

Every library error derives from VoatwistError so callers (and the CLI)
can map failures to stable machine-readable codes.
"""


class VoatwistError(Exception):
    """Base class for all library errors."""


class DomainError(VoatwistError):
    """An operation left its mathematical domain (integrating x^-1, say)."""


class UnsupportedAlgebra(VoatwistError):
    """Requested Lie algebra family or rank is not implemented."""


class NeedsFieldExtension(VoatwistError):
    """A computation requires eigenvalues outside the rationals."""


class NotSemisimple(VoatwistError):
    """An element that must act semisimply does not."""


class InvalidSymmetry(VoatwistError):
    """A proposed generator permutation does not preserve the Cartan matrix."""


class NotUnipotent(VoatwistError):
    """Logarithm requested of an operator that is not unipotent."""


class CriticalLevel(VoatwistError):
    """The level equals minus the dual Coxeter number, so no conformal vector."""


class Unsupported(VoatwistError):
    """The input is outside the supported fragment (a documented limitation)."""


class NotQuasiPrimary(VoatwistError):
    """The twisting vector is not a weight-one current killed by L(1)."""


class NotFixed(VoatwistError):
    """The twisting vector is not fixed by the automorphism already acting."""


class NotIntertwining(VoatwistError):
    """A map declared to intertwine module structures fails to do so."""


class ConfigError(VoatwistError):
    """A run configuration is malformed or internally inconsistent."""
