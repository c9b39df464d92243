"""Spectral Galerkin simulator for regularized Ericksen-Leslie nematic flow."""

from .integrator import Model, SimState, StepperConfig, run, step
from .oseen_frank import FrankConstants, OneConstant
from .regularized import EnergyBreakdown, RegularizationParams
from .spectral import SpectralDirector, SpectralVelocity, TorusGrid
from .stresses import LeslieCoefficients

__version__ = "0.1.0"
