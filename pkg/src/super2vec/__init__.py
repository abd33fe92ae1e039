"""Exact-arithmetic classification of super 2-vector bundles.

Super algebras and bimodules over Q and Q(i), Brauer-Wall arithmetic via
Clifford algebras, crossed-module Cech cohomology over combinatorial
nerves, classification triples of 2-vector bundles, and lifting gerbes of
central group extensions.  All computations are exact; randomness only
drives search order and sampling, never correctness.
"""

from .backend import BACKEND
from .bimodule import (
    SuperBimodule,
    Intertwiner,
    certify_invertible,
    dual_module,
    external_tensor,
    hom_twist,
    left_module,
    parity_flip,
    regular_bimodule,
    rel_tensor,
)
from .bundles import (
    BundleError,
    BundleMorphism,
    ClassTriple,
    TwistedModuleBundle,
    TwoVectorBundle,
    algebra_bundle,
    bundle_direct_sum,
    end_descent,
    extract_cocycle,
    gerbe_bundle,
    identity_morphism,
    identity_triple,
    invariant_triple,
    reconstruct,
    refine,
    tensor,
    triple_inverse,
    triple_product,
    triples_equal,
    trivial_bundle,
    validate_bundle,
    validate_morphism,
    validate_twisted_module,
)
from .clifford import (
    BWClass,
    bw_class,
    clifford,
    complex_clifford,
    morita_trivial,
    standard_clifford,
)
from .crossedmodule import (
    ButterflyRealization,
    CMCocycle,
    CSAInvariants,
    TransportError,
    UnitCochain,
    ValidationReport,
    apply_coboundary,
    aut_crossed_module,
    butterfly_transport,
    csa_butterfly,
    csa_invariants,
    homogeneous_witness,
    morita_butterfly,
    scalar_crossed_module,
    tensor_cocycles,
    trivial_cocycle,
    validate_cocycle,
    verify_coboundary,
)
from .lifting import (
    CanonicalMorphismResult,
    CentralExtension,
    ExtensionError,
    Implementation,
    LiftingGerbe,
    associated_algebra_bundle,
    canonical_morphism,
    lifting_gerbe,
    make_extension,
    murray_lift,
    pin_extension_d1,
    pin_implementation_d1,
    split_extension,
    validate_group_cocycle,
    validate_implementation,
)
from .nerve import (
    AbelianCochain,
    Nerve,
    bockstein,
    circle_nerve,
    cohomology,
    cup_product,
    rp2_nerve,
    sphere_nerve,
    torus_nerve,
)
from .picard import (
    PicardSurjectification,
    PicardWitness,
    decompose_projectives,
    endomorphism_algebra,
    hull_bimodule,
    picard_surjectify,
    picard_witness,
)
from .scalars import QI, QQ
from .superalgebra import (
    AlgebraHom,
    SuperAlgebra,
    UnitElement,
    direct_sum,
    dual_numbers,
    end_algebra,
    graded_opposite,
    graded_tensor,
    ground_field,
    hh1,
    is_central_simple,
    make_algebra,
    parity_hom,
    tensor_hom,
)
from .supervect import GradedMap, SuperVectorSpace
from .workspace import Workspace, WorkspaceError, emit, parse_file, parse_text

__version__ = "0.1.0"
