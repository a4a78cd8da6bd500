"""pfk — Pfaffian circuits: tensors, Pfaffians, certified networks,
change-of-basis ideals and a small Groebner engine."""

from .errors import *  # noqa: F401,F403
from .scalars import I, QI, get_eps, parse_scalar, format_scalar
from .tensor import (BasisMatrix, Tensor, apply_basis_change,
                     apply_inverse_basis_change, coefficient, complement,
                     complement_invariant, contract, parse_tensor, format_tensor)
from .pfaffian import (SkewMatrix, direct_sum_ordered, pfaffian, sign_flip,
                       sub_pfaffian, sub_pfaffian_dual)
from .network import (CertifiedNetwork, Network, RotationSystem,
                      brute_force_value, planar_spanning_tree_edge_order,
                      pfaffian_value)

__version__ = "0.1.0"
