"""Exact toric amplitudes, universal adjoints and their singular loci."""
from .amplitude import adjoint, amplitude, evaluate_amplitude, warren_adjoint  # noqa
from .errors import ToricError  # noqa
from .fan import SimplicialFan  # noqa
from .polytope import HPolytope, normal_fan  # noqa
