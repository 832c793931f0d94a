"""Exact counting for intersection lattices of arrangements generated by generic points."""

from .charpoly import CharPolyResult, char_poly, mu_hat1, mu_of_type
from .counting import c_value, lambda_direct, lambda_via_c
from .disc import char_poly_disc, enumerate_v2, lambda_disc, v2_count_table, v2_size
from .errors import BudgetExceeded, VerificationError
from .exact import IntegerPolynomial, Partition, binomial, partitions_of, partitions_up_to

__all__ = [
    "BudgetExceeded", "CharPolyResult", "IntegerPolynomial", "Partition", "VerificationError",
    "binomial", "c_value", "char_poly", "char_poly_disc", "enumerate_v2", "lambda_direct",
    "lambda_disc", "lambda_via_c", "mu_hat1", "mu_of_type", "partitions_of", "partitions_up_to",
    "v2_count_table", "v2_size",
]
