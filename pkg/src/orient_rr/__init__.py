"""Divisor theory on multigraphs through partial orientations.

Submodules: ``graph_core`` (graphs, divisors, Euler characteristics),
``divisors`` (reduced forms, rank), ``orientations`` (partial orientations and
moves), ``reversal_engine`` (Dhar/unfurl/construction algorithms), ``flows``
(max flow, orientability, break divisors), ``oracle`` (brute force) and
``cli``.
"""

from .divisors import is_winnable, linearly_equivalent, rank, reduce, rr_verify
from .errors import OrientRRError
from .flows import break_divisor, is_orientable, is_partially_orientable, max_flow, torsor_act
from .graph_core import Divisor, Multigraph, canonical_divisor, chi_global, load_divisor, load_graph
from .orientations import MoveCertificate, PartialOrientation, apply_move, classify, replay
from .reversal_engine import (
    construct_orientation,
    equivalent,
    modified_unfurl,
    oriented_dhar,
    rank_via_path_reversals,
    to_q_connected,
    unfurl,
)

__version__ = "0.1.0"
