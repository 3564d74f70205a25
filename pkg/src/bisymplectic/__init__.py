"""Recursion operators of pairs and triples of symplectic forms.

Exact (rational) linear algebra on a fixed frame classifies pairs and triples
of 2-forms by their recursion operators, builds the induced metrics, and a
small floating-point engine integrates simultaneous Moser isotopies on flat
tori.
"""

from .catalog import ExampleCatalogEntry, builtin_example, catalog_names, negate, product
from .documents import InputDocument, InputError, parse_input, parse_text, shipped_path
from .exterior import (KForm, contract, form_matrix, matrix_form, pfaffian, rank_2form, restrict,
                       signature, wedge)
from .lie import (LieAlgebra, LieAlgebraError, LieReport, Subspace, abelian, ce_differential,
                  direct_sum, is_closed, nijenhuis, validate_lie)
from .moser import (FormFamily, FormField, PairFamily, TrigPoly, convergence_study, integrate_flow,
                    intertwining_check, moser_vector_field, sample_points, t2_family, t4_pair_family)
from .recursion import (DegenerateFormError, PairClassification, PairTag, classify_pair,
                        complex_kernel_check, couple_conditions, eta_symmetry_check,
                        recursion_operator)
from .triples import (CyclicIdentityError, MetricReport, TripleClassification, TripleTag,
                      classify_triple, triple_operators)

__version__ = "0.1.0"
