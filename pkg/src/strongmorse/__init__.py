"""Simplicial complex reduction via strong collapses and vertex-level Morse
matchings, verified against an integer-homology oracle."""

from .complexes import (ComplexError, DuplicateVertexInFacet, EmptyFacet, Simplex,
                        SimplicialComplex, UnknownSimplex, UnknownVertex, cone,
                        retract_simplex)
from .homology import (BoundaryMatrix, HomologyProfile, VerificationReport,
                       boundary_matrices, homology, rational_rank, smith_normal_form,
                       verify_reduction)
from .morse import (IllegalCollapseStep, InvalidMorseFunction, Matching, MatchingReport,
                    VertexClass, classify_vertices, critical_simplices, descending_link,
                    descending_star, is_discrete_morse, matching_from_collapse_sequence,
                    matching_from_morse, matching_from_vertex_function,
                    morse_from_matching, sublevel_complex, validate_matching)
from .posets import (CriticalSimplexWasMatched, FinitePoset, InvalidMatching,
                     MatchingNotAcyclic, NotGraded, PosetCycleError, SizeLimitExceeded,
                     ThinnessReport, are_isomorphic, critical_subposet, face_poset,
                     is_thin_with_bottom, localization, order_complex)
from .reduce import (CoreResult, CriticalRemoval, FacetRemoval, ReductionTrace,
                     ReplayError, Rng, StrongCollapse, UnsupportedTrace, WeakCollapse,
                     combined_reduction, minimal_strong_core, minimal_weak_core,
                     reduce_complex, replay_trace, strong_internal_core,
                     strong_morse_reduction, vertex_function_from_trace)

__version__ = "0.1.0"
