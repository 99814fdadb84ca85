"""Exact numerics for Bridgeland stability conditions on K3 and abelian surfaces.

Everything is rational (or, after normalisation, in a real quadratic field):
Mukai lattice arithmetic, central charges and phase comparison, region
membership, certified root enumeration, wall loci on tube-domain slices,
lattice isometries, tilted hearts and large-volume asymptotics.
"""

__version__ = "0.1.0"

from .charge import (
    ComplexMukaiVector,
    GaussianRational,
    Order,
    PhaseToken,
    TubeDomainPoint,
    arg_compare,
    central_charge,
    charge_star,
    phase_compare,
    tube_point,
)
from .errors import (
    ConfigError,
    DegenerateChargeError,
    DomainError,
    EnumerationCapError,
    NonTerminationError,
    NoQRepresentativeError,
    StabError,
)
from .lattice import (
    MukaiVector,
    SurfaceConfig,
    SurfaceType,
    degree_2n_k3,
    elliptic_k3_with_section,
    euler_form,
    exp_class,
    is_primitive,
    is_spherical,
    mukai_pairing,
    principally_polarized_abelian,
    twist_by_exp,
)
