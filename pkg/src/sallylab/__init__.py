"""Reduction numbers, Hilbert-Samuel coefficients, Sally modules and special
fiber multiplicities of m-primary ideals in local rings k[x]_(x)/J, computed
exactly over prime fields."""
from .config import DEFAULT_CONFIG, Config
from .constructions import (CatalogError, ConstructionError, Instance, IntegralityResult, catalog,
                            catalog_ids, fitting_ideal_I1, is_integral_over, northcott_ideal)
from .groebner import Ideal, colon, contains, groebner_basis, ideal_equal, ideal_power, ideal_product
from .invariants import (NOT_FOUND, FitError, InstanceInvariants, InvariantRecord, compute_record,
                         find_minimal_reduction, fit_binomial, hilbert_coefficients, hilbert_samuel_table,
                         is_reduction, sally_multiplicity)
from .localring import INFINITE, LengthError, LengthResult, RingSpec, local_length, quotient_length
from .poly import ParseError, PolyError, PolyRing, Polynomial
from .verify import CHECKS, CheckContext, Verdict, check

__version__ = "0.1.0"
