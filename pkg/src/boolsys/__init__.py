"""Boolean dynamical systems: closures, cycles, simplicity, K-theory and the tight semigroup."""
from .boolean_core import BoolElem, FiniteAtoms, FiniteCofinite
from .dynamics import KILL, BooleanDynamicalSystem, Shift, TailAction, finite_system, validate_system
from .invariants import hs_closure, hs_lattice, is_simple, quotient_system
from .ktheory import k_groups
from .presets import from_directed_graph, from_labelled_graph, from_partial_homeo, from_sft, parse_sft
from .topograph import build_graph, graph_ktheory_oracle

__all__ = [
    "BoolElem", "FiniteAtoms", "FiniteCofinite", "KILL", "BooleanDynamicalSystem", "Shift", "TailAction",
    "finite_system", "validate_system", "hs_closure", "hs_lattice", "is_simple", "quotient_system",
    "k_groups", "from_directed_graph", "from_labelled_graph", "from_partial_homeo", "from_sft", "parse_sft",
    "build_graph", "graph_ktheory_oracle",
]
