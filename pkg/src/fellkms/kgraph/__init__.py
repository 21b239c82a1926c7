"""Finite k-graphs, their path groupoids, Perron measures and KMS_1 data."""

from .cocycle import (Cell, CoboundaryCocycle, DegreeCocycle, KGraphCocycle, TableCocycle, disjoint_cover_check,
                      kms1_report, minimal_witness, omega_c, partition_assign, rotation_cocycle,
                      rtilde_phase, sample_composable, sigma_c, sigma_c_detail,
                      validate_kgraph_cocycle)
from .graph import (FiniteKGraph, KPath, bouquet, cycle_graph, fibonacci_graph, one_graph,
                    rotation_graph, single_vertex_2graph, validate_kgraph)
from .paths import EventuallyPeriodicPath, PathGroupoidElement, find_cycle, random_ep_path
from .periodicity import periodicity_group, window_criterion
from .spectra import (additivity_certificate, adjacency_spectra, measure_M, measure_table,
                      preferred_cocycle)
