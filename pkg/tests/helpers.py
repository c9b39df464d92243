"""Shared builders for simulation tests."""

import numpy as np

from elsim.initial import make_initial
from elsim.integrator import Model, SimState
from elsim.oseen_frank import FrankConstants
from elsim.regularized import RegularizationParams
from elsim.spectral import TorusGrid
from elsim.stresses import LeslieCoefficients

PARODI = LeslieCoefficients(mu1=1.0, mu2=0.1, mu3=0.4, mu4=1.0, mu5=0.6, mu6=0.65, lam=0.5)


def smooth_state(N=16, delta=0.1, seed=0, schedule="linear", split="min_split", forcing=None):
    g = TorusGrid(N)
    ini = make_initial("random_smooth", seed, g)
    model = Model(FrankConstants(1.0, 0.8, 1.2, split), PARODI,
                  RegularizationParams(delta, schedule))
    return SimState(0.0, ini.v, ini.d, model, forcing)


def flat(state):
    return np.concatenate([state.v.values.ravel(), state.d.values.ravel()])
