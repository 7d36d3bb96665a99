"""Combinatorial doodles and blobs in a foliated strip, their invariants and moves."""

from .diagram import (B, D, X, BaseSpace, BlobDiagram, Event, StrandDiagram, Violation,
                      boundary, checkerboard, compose_star, compose_uplus, face_multiplicities,
                      fiber_patterns, from_json, negate, to_json, trace_components, validate)
from .errors import *  # noqa: F401,F403
from .invariants import (classify_crossings_blob, classify_crossings_doodle, classify_tangencies,
                         complexity, in_M, invariant_J, invariant_report, iota_rho, parity_audit,
                         rho, rotation_number, topology_report)
from .rewriting import (Move, MoveTrace, apply_move, bounded_equivalence, enumerate_moves, kidney,
                        normalize_embedded, scramble)

__version__ = "0.1.0"
