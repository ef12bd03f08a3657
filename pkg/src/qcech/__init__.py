"""Cech cohomology of finite semicartesian quantales."""

from .abgroups import FgAbGroup, GroupHom, IntComplex, Subquotient, TRIVIAL, Z, smith_normal_form, subquotient
from .cech import (
    Cover,
    RefinementWitness,
    common_refinement,
    cover_cohomology,
    element_cohomology,
    enumerate_covers,
    find_refinement,
    homotopy_uniqueness_check,
    induced_cohomology_map,
    make_cover,
    refinement_map,
)
from .errors import QcechError, SizeCapExceeded, ValidationError
from .lattice import Quantale, approximation_map, idem_locale, product_quantale, validate_quantale
from .morphisms import MonotoneMap, certify_geometric, direct_image_preserves, right_adjoint
from .presheaf import (
    AbPresheaf,
    constant_presheaf,
    locally_constant_on_locale,
    locally_constant_sheaf,
    pullback_presheaf,
    sheaf_check,
)
from .sources import (
    FiniteRing,
    FiniteSpace,
    discrete_space,
    function_ring,
    ideal_quantale,
    ideals_of_zmod,
    locale_of_space,
    pseudocircle,
    tau_theta,
    zmod_ring,
)
from .theorems import (
    TheoremReport,
    verify_change_of_base,
    verify_cover_iso,
    verify_main_iso,
    verify_quotient_direct_image,
    verify_tau_theta,
)

__version__ = "0.1.0"

__all__ = [
    "AbPresheaf",
    "Cover",
    "FgAbGroup",
    "FiniteRing",
    "FiniteSpace",
    "GroupHom",
    "IntComplex",
    "MonotoneMap",
    "QcechError",
    "Quantale",
    "RefinementWitness",
    "SizeCapExceeded",
    "Subquotient",
    "TRIVIAL",
    "TheoremReport",
    "ValidationError",
    "Z",
    "approximation_map",
    "certify_geometric",
    "common_refinement",
    "constant_presheaf",
    "cover_cohomology",
    "direct_image_preserves",
    "discrete_space",
    "element_cohomology",
    "enumerate_covers",
    "find_refinement",
    "function_ring",
    "homotopy_uniqueness_check",
    "ideal_quantale",
    "ideals_of_zmod",
    "idem_locale",
    "induced_cohomology_map",
    "locale_of_space",
    "locally_constant_on_locale",
    "locally_constant_sheaf",
    "make_cover",
    "product_quantale",
    "pseudocircle",
    "pullback_presheaf",
    "refinement_map",
    "right_adjoint",
    "sheaf_check",
    "smith_normal_form",
    "subquotient",
    "tau_theta",
    "validate_quantale",
    "verify_change_of_base",
    "verify_cover_iso",
    "verify_main_iso",
    "verify_quotient_direct_image",
    "verify_tau_theta",
    "zmod_ring",
]
