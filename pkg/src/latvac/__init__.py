"""latvac: exact invariants of lattices, their vertex algebra orbifolds and pointed modular categories."""

from .errors import LatvacError
from .lattice import Lattice, LatticeAutomorphism
from .discform import FinQuadForm, from_gram, gauss_sum_gamma2, is_split
from .qseries import QSeries, module_character, theta_series
from .neighbors import classify_Lb, neighbor, neighbor_search
from .orbifold import automorphism_type, orbifold_report
from .heisenberg import schur_indicator_involution
from .modcat import AbCocycle, cocycle_from_form, verify_abelian_cocycle, verlinde

__version__ = "0.1.0"
