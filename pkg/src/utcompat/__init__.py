"""Exact computations with compatible products on strictly upper triangular matrices.

Modules:

* :mod:`utcompat.scalars`   exact arithmetic over Q and F_p
* :mod:`utcompat.utalg`     the algebra UT_n(K), products, linear maps
* :mod:`utcompat.idspace`   identity residuals and kernel solver
* :mod:`utcompat.families`  explicit product families spanning each kernel
* :mod:`utcompat.classify3` normal forms of structures on UT_3(K)
* :mod:`utcompat.cli`       command-line front end
"""

from .scalars import QQ, PrimeField, Scalar, field_from_spec
from .utalg import (Element, LinearMap, Product, associator, basis, canonical_product,
                    evaluate, is_associative, pushforward, opposite_pushforward)
from .idspace import IdentityKind, assemble, dimension, kernel, membership, residual, solve
from .families import FamilyId, expected_count, family_basis, make_family, product_from_triple
from .classify3 import (Aut3Params, CanonicalClass, LambdaVector, canonical_form,
                        lambda_to_product, orbit_census, product_to_lambda, transform_lambda)

__version__ = "0.1.0"

__all__ = [
    "QQ", "PrimeField", "Scalar", "field_from_spec",
    "Element", "LinearMap", "Product", "associator", "basis", "canonical_product",
    "evaluate", "is_associative", "pushforward", "opposite_pushforward",
    "IdentityKind", "assemble", "dimension", "kernel", "membership", "residual", "solve",
    "FamilyId", "expected_count", "family_basis", "make_family", "product_from_triple",
    "Aut3Params", "CanonicalClass", "LambdaVector", "canonical_form", "lambda_to_product",
    "orbit_census", "product_to_lambda", "transform_lambda",
]
