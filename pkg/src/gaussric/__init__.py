"""Numerical verification of Grassmannian distances, Pluecker embeddings,
and Gauss-map pullback identities on minimal submanifolds."""

from .grassmann import (
    MultiVector,
    OrientedPlane,
    PrincipalCosines,
    canonical_distance,
    curve_speed_pair,
    embedded_sphere_distance,
    hodge_complement,
    multivector_inner,
    orthonormalize,
    overlap_matrix,
    pluecker_embed,
    principal_cosines,
    random_plane,
    spherical_distance,
    wedge_vectors,
)
from .immersion import (
    FundamentalData,
    ParametrizedImmersion,
    RicciTensor,
    fundamental_data,
    gauss_map,
    gauss_map_differential,
    gauss_map_differential_fd,
    gauss_pullback_metric,
    ricci_extrinsic,
    ricci_intrinsic,
    tangent_frame,
)
from .spherical import (
    NestedImmersion,
    SecondFormPair,
    normal_space_frame,
    second_gauss_map,
    second_gauss_pullback_metric,
    second_gauss_pullback_predicted,
    split_second_form,
)
from .catalog import CatalogEntry, Grid, UnknownEntryError, get, list_entries, register
from .report import VerificationReport
from .suites import (
    fuzz_grassmann,
    scan_ricci,
    verify_grassmann_image,
    verify_minimal_euclidean,
    verify_minimal_spherical,
)

__version__ = "0.1.0"
