"""Perfect complexes over concrete commutative noetherian rings, Koszul
membership oracles for torsion classes, and the classification of
co-t-structures on perfect complexes by component-union filtrations."""

from .rings import (Integers, IntegersMod, PolyOverPrimeField, PrimeField, Rationals,
                    RingDescriptor, UnsupportedOperation, ValidationError, is_hereditary,
                    is_regular)
from .spectrum import PrimeIdeal, SpecSubset, prime
from .complexes import (ChainMap, FreeComplex, Triangle, brutal_truncation, chain_map,
                        cohomology, cone, derived_hom_group, derived_iso_test, direct_sum, dual,
                        hom_complex, quasi_iso_check, shift, tensor)
from .koszul import koszul_complex, prime_koszul, projective_dimension_probe, total_support
from .filtrations import FiltrationBySupports, from_component_thresholds, threshold_filtration
from .oracles import (THRESHOLD_SHIFT_OFFSET, CoTStructureDescriptor, NotComponentUnion,
                      approximation_triangle, check_co_t_axioms, check_t_axioms, classify,
                      in_B_phi, in_D_ge, in_D_le, in_K_ge, in_K_le, in_Y_phi,
                      support_complement_check)
from .closures import ExtensionTower, is_silting, reassociate, verify_ext_certificate

__all__ = [name for name in dir() if not name.startswith("_")]
