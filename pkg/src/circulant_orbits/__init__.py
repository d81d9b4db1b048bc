"""Orbit counting and coefficient-variance statistics on directed circulant graphs."""

from .counting import (NonIntegerResultError, binom_or_zero, max_n_2encounters,
                       mobius, po_count_family1, po_count_family2,
                       po_count_general, pso0_family2, pso_count_family1,
                       psoN_family2)
from .graph import (Bond, CirculantGraph, GraphError, LoopError,
                    MultiEdgeError, TooSmallError, adjacency_matrix,
                    bond_passes, is_connected, make_graph, walk_sum)
from .orbits import (Circuit, EncounterProfile, PeriodicOrbit, PreconditionError,
                     PseudoOrbit, classify, enumerate_circuits,
                     enumerate_primitive_pos, enumerate_primitive_psos,
                     format_pseudo_orbit, is_primitive, parse_pseudo_orbit,
                     pseudo_orbits_from_bonds, trace_po_oracle)
from .quantum import (DEFAULT_K_MAX, DEFAULT_SEED, BondScattering, McVariance,
                      MetricGraph, VarianceReport, bond_index,
                      build_scattering, build_variance_report,
                      char_poly_coeffs, mc_variance, variance_formula,
                      variance_fractions)

__version__ = "0.1.0"
