"""Numerical verification: sampling, probabilistic ideal tests and brute-force oracles."""

from .checks import (OracleReport, Verdict, achievable_rank_oracle, batch_jacobian_codim,
                     batch_membership, cayley_hamilton_certificate, containment_test,
                     enumerate_representations, independent_subset, jacobian_codim,
                     maximal_rank_sequences, membership_test, random_translate_span, same_span,
                     span_dimension, translate)
from .sampling import (CompiledPolynomials, Layout, SampleConfig, SamplingError,
                       compile_generators, sample_batch, sample_point, schwartz_zippel_bound)
from .structure import (endomorphism_dim, is_schur, is_semistable_bruteforce,
                        subrepresentation_dims, subspaces)

__all__ = [
    "CompiledPolynomials", "Layout", "OracleReport", "SampleConfig", "SamplingError", "Verdict",
    "achievable_rank_oracle", "batch_jacobian_codim", "batch_membership",
    "cayley_hamilton_certificate", "compile_generators", "containment_test",
    "endomorphism_dim", "enumerate_representations", "independent_subset", "is_schur",
    "is_semistable_bruteforce", "jacobian_codim", "maximal_rank_sequences", "membership_test",
    "random_translate_span", "same_span", "sample_batch", "sample_point",
    "schwartz_zippel_bound", "span_dimension", "subrepresentation_dims", "subspaces", "translate",
]
