"""Stationary quasibound states and S-matrix resonance poles for a delta well
in a uniform field, a leaky spherical well and twin rectangular barriers."""

from .errors import (BranchError, ContractError, ConvergenceError, DegenerateMatchingError, DomainError,
                     EvaluationError, QuasiboundError, RangeError, RegimeError, SingularPointError)
from .models import (CriticalWidth, DeltaWellInField, EnergyRoot, LeakySphericalWell, PhysicalUnits,
                     TwinBarrier, bound_reference, reference_well, solve, waveform)
from .resonance import ComplexPole, matching_determinant, pole_find, resonance_scan
from .waves import Region, Waveform

__version__ = "0.1.0"
