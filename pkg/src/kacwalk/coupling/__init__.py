"""Couplings of two Kac walks."""

from .arcsine import (
    ArcsineParams,
    CoupledDraw,
    arcsine_cdf,
    arcsine_overlap,
    arcsine_pdf,
    maximal_arcsine_coupling,
    maximal_arcsine_coupling_batch,
)
from .blocks import arcsine_block_params
from .nonmarkovian import (
    CouplingOutcome,
    CouplingTuning,
    nonmarkovian_coupling_run,
    phase_one_done,
    two_phase_coupling,
)
from .proportional import (
    CoupledPair,
    contraction_factor,
    proportional_step,
    proportional_step_batch,
)
