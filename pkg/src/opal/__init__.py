"""Operator precedence automata on finite and infinite words."""

from .closures import complement, concat, includes, intersect, union
from .corpus import Fixture, load_fixture
from .errors import CompatibilityError, InputError, OpalError, ParseError, ValidationError
from .omega import (BuchiEmptyStack, BuchiFinal, Lasso, Muller, OmegaOpa, accepts_lasso,
                    make_lasso, parse_lasso, to_buchi_final, universe)
from .opa import Opa, accepts_finite, accepts_variant, enumerate_language
from .opm import EQ, GT, LT, Opm, Relation
from .pds import is_empty_finite, is_empty_omega

__version__ = "0.1.0"
