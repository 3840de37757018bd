"""Exact computations for covering the plane by finitely many rotated strips."""

from .certcheck import check_certificate
from .config import (
    Configuration,
    ParseError,
    UnitVector,
    build,
    build_cube_roots,
    build_pythagorean,
    build_section3,
    load_config,
    parse_config,
    serialize_config,
)
from .cover import (
    CoversCertified,
    Enclosure,
    UncoveredWitness,
    UnknownVerdict,
    UnsupportedDimension,
    covering_radius_enclosure,
    covering_radius_exact,
    is_covering,
)
from .density import Dense, DensityUnknown, NotDense, density_test, epsilon0_bound, uncovered_region
from .explorer import SweepRecord, sweep_pythagorean
from .prover import Empty, Nonempty, Unknown, prove_empty
from .relations import classify_quadratic, period_lattice, relation_lattice, subgroup_param
from .witness import PeriodicWitness, periodic_witness, verify_point

__version__ = "0.1.0"

__all__ = [
    "build",
    "build_cube_roots",
    "build_pythagorean",
    "build_section3",
    "check_certificate",
    "classify_quadratic",
    "Configuration",
    "covering_radius_enclosure",
    "covering_radius_exact",
    "CoversCertified",
    "Dense",
    "density_test",
    "DensityUnknown",
    "Empty",
    "Enclosure",
    "epsilon0_bound",
    "is_covering",
    "load_config",
    "Nonempty",
    "NotDense",
    "parse_config",
    "ParseError",
    "period_lattice",
    "periodic_witness",
    "PeriodicWitness",
    "prove_empty",
    "relation_lattice",
    "serialize_config",
    "subgroup_param",
    "sweep_pythagorean",
    "SweepRecord",
    "uncovered_region",
    "UncoveredWitness",
    "UnitVector",
    "Unknown",
    "UnknownVerdict",
    "UnsupportedDimension",
    "verify_point",
]
