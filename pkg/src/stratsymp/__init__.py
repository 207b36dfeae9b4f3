"""Exact symplectic exterior calculus on model charts and stratified spaces."""
from .coeffring import AlgebraPresentation, Poly, parse_poly, poly_partial, poly_reduce, smooth_eval, smooth_invert
from .exterior import Form, ModelChart, contract_bivector, d, parse_form, wedge
from .symplectic import (
    A,
    L,
    Lstar,
    PoissonPresentation,
    SymplecticModel,
    delta,
    delta_commutator,
    delta_formula,
    delta_via_star,
    poisson_bracket,
    star,
)
from .lefschetz import is_harmonic, is_primitive, lef_decompose, lefschetz_constant
from .models import load_builtin, load_model

__all__ = [
    "AlgebraPresentation",
    "Poly",
    "parse_poly",
    "poly_partial",
    "poly_reduce",
    "smooth_eval",
    "smooth_invert",
    "Form",
    "ModelChart",
    "contract_bivector",
    "d",
    "parse_form",
    "wedge",
    "A",
    "L",
    "Lstar",
    "PoissonPresentation",
    "SymplecticModel",
    "delta",
    "delta_commutator",
    "delta_formula",
    "delta_via_star",
    "poisson_bracket",
    "star",
    "is_harmonic",
    "is_primitive",
    "lef_decompose",
    "lefschetz_constant",
    "load_builtin",
    "load_model",
]

__version__ = "0.1.0"
