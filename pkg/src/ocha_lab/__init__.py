"""Exact verification and construction of A-infinity, L-infinity and
open-closed homotopy algebras on finite-dimensional graded spaces."""

from .errors import (ArgumentError, OchaLabError, PreconditionError,
                     UnstableTruncationError)
from .signs import (chi_sign, compose, identity, inverse, koszul_sign,
                    perm_sign, shuffles, unshuffles)
from .spaces import GradedSpace, canonicalize_wedge, direct_sum
from .coalgebra import (Pair, deconcatenate, mixed_coproduct, shuffle_product,
                        symmetrize_chi, xi, xi_left_inverse)
from .coderivations import (ComponentMap, Coderivation, apply, bracket,
                            decompose, is_coderivation, lift_closed,
                            lift_closed_general, lift_open, lift_tensor,
                            tabulate)
from .structures import (AInfinityStructure, LInfinityStructure,
                         LinearOchaMorphism, OchaStructure, Verdict,
                         check_ainfinity, check_linear_ocha_morphism,
                         check_linfinity, check_ocha, symmetrize_ainfinity)
from .extensions import (ExtensionSequence, SplitAInfinity,
                         check_ainfinity_ideal, check_extension,
                         check_ocha_constraint, oc_from_extension)

from .trees import FreeAInfinity, free_ainfinity
from .enveloping import (enveloping, enveloping_extension_check,
                         induced_extension_morphism, linf_enveloping)

__version__ = "0.1.0"

__all__ = [n for n in dir() if not n.startswith("_")]
