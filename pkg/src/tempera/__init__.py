"""Jacquet-module bookkeeping for square integrable and tempered representations of classical groups."""

from .symbols import (Catalog, ClassicalCuspidal, GLCuspidal, HalfInt, Parity, TemperaError, half,
                      a_max, cuspidal_reducibility_exponent, j1_satisfied, link_duals)
from .multiseg import (Multisegment, Segment, M_star, M_star_GL, M_star_pipeline, delta, m_star, ms,
                       segment, supp)
from .jordan import (AdmissibleTriple, EpsilonMap, JordanBlocks, Reducibility, add_pair, cuspidal_triple,
                     deform_down, deform_up, delta_b_reduces, jord_transfer, point_reduces, remove_pair,
                     segment_irreducible, validate_triple)

__version__ = "0.1.0"
