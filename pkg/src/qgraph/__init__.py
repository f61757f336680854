"""Metric-graph spectral engine and spectrum-driven evolution."""

from .errors import (DegenerateLeadingCoefficient, InsufficientRange,
                     InvalidGraph, NoLegalMove, ParseError, QGraphError,
                     RefinementFailure, StepFailure, UnboundParameter, ZeroGap)
from .evolution import (EvolutionStep, MovePolicy, RunConfig, RunLog,
                        are_isomorphic, candidates, detect_cycle, run, step)
from .goals import (EigenvalueStop, Goal, MaximizeLambda1, MaximizeRatio,
                    MinimizeDistance, MinimizeLambda1, Program, ProgramPhase,
                    Score, StepCountStop, TargetSpectrum, score,
                    spectral_distance)
from .graph import (BondBasis, Edge, MetricGraph, ParamLength,
                    RationalStructure, Violation, bind, bonds, canonical,
                    degree, load_graph, normalize, rational_structure,
                    save_graph, total_length, validate)
from .oracle import oracle_roots
from .secular import (SecularEvaluator, edge_scattering_matrix,
                      vertex_scattering_block, vertex_scattering_matrix)
from .spectrum import (RootSearchOptions, Spectrum, compute_spectrum,
                       find_roots_rational, find_roots_scan,
                       spectrum_with_count, weyl_check)

__version__ = "0.1.0"
