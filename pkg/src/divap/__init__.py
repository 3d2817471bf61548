"""divap: a numerical verification workbench for divisor sums in
arithmetic progressions and the exponential-sum, character-sum and
L-function machinery behind their level-of-distribution estimates."""

from .arith import (
    FactoredInteger,
    NonInvertibleError,
    PrimeModulus,
    ResidueClass,
    euler_phi,
    gcd3,
    inverse_mod,
    is_prime,
    mobius,
    mod_inverse,
    primitive_root,
    tau2,
)
from .characters import DirichletCharacter, char_value, gauss_sum, get_group
from .expsums import (
    RootsOfUnityTable,
    e_q,
    hyper_kloosterman,
    kloosterman,
    ramanujan_sum,
    weil_bound_check,
)
from .kernels import BACKEND
from .specfun import (
    PoleError,
    check_L_fe,
    check_zeta_fe,
    dirichlet_L,
    gamma,
    hurwitz_zeta,
    riemann_zeta,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DirichletCharacter",
    "FactoredInteger",
    "NonInvertibleError",
    "PoleError",
    "PrimeModulus",
    "ResidueClass",
    "RootsOfUnityTable",
    "char_value",
    "check_L_fe",
    "check_zeta_fe",
    "dirichlet_L",
    "e_q",
    "euler_phi",
    "gamma",
    "gauss_sum",
    "gcd3",
    "get_group",
    "hurwitz_zeta",
    "hyper_kloosterman",
    "inverse_mod",
    "is_prime",
    "kloosterman",
    "mobius",
    "mod_inverse",
    "primitive_root",
    "ramanujan_sum",
    "riemann_zeta",
    "tau2",
    "weil_bound_check",
]
