"""Higher derived brackets, their L-infinity relations and gauge invariance,
verified in exact rational arithmetic."""

from .gauge import (FlowAutomorphism, TimeDerivation, build_M, build_U, integrate_flow,
                    integrate_U, transport_mc)
from .instances import Instance, InstanceError, fixture, fixture_names, parse_instance
from .lie import DerivationSpec, GradedLieAlgebra, TableGLA, VAlgebra
from .linfty import BracketFamily, CoalgMorphism, Coderivation, derived_brackets, jacobiator
from .poisson import (SchoutenAlgebra, SubmanifoldContext, build_valgebra, coisotropy_obstruction,
                      is_coisotropic, is_flat, pinfty_brackets)
from .report import Report

__version__ = "0.1.0"
