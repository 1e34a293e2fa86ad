"""Enriched purity workbench over finite metric spaces, posets and chain complexes."""
from .base import EnrichedBase, FactorizationSystem, Map, hom_guard, set_hom_guard
from .dgab import DG, FinComplex, chain_map, cone_complex, disk_map, shift
from .errors import CapabilityError, PurityError, Unsupported, ValidationError
from .instances import load_instance, parse_instance
from .omega_cpo import CPO, FinPoset, poset
from .pp_logic import PPFormula, interpret, is_elementary, psi_g
from .props import SUITES, run_suite
from .purity import (
    is_barely_E_pure,
    is_E_injective,
    is_E_pure,
    is_E_split,
    is_orthogonal,
    three_way,
    weakly_pure,
    weakly_pure_at,
)
from .qmet import QMET, QMetSpace, q_pushout, space, two_point
from .quantale import INF, LAWVERE, ULTRAMETRIC, FiniteQuantale, chain_quantale
from .verdict import PurityVerdict

__version__ = "0.1.0"
