"""Vacuum-fluctuation fields near the focal line of a parabolic cylinder.

Interfering reflected rays concentrate vacuum fluctuations near the focal
line of a parabolic cylindrical mirror: the mean squared scalar and electric
fields grow as inverse powers of the distance from the line, with
finite-part integrals over ray pairs supplying the coefficients.  This
package carries the full pipeline: the mirror's ray map and partner-angle
structure, Hadamard finite-part quadrature by two independent
prescriptions, the assembled fields with closed-form anchors and validity
estimators, a Kirchhoff strip-diffraction check on the geometric-optics
error, and the atom-scale observables the fields would produce.
"""

from .diffraction import (
    DiffractionSetup,
    InsufficientRangeError,
    NoSpecularPathError,
    diffraction_residual,
    fit_power_law_exponent,
    geometric_wave,
    hankel_h0,
    residual_scaling_exponent,
    strip_scattered_wave,
)
from .fields import (
    E2_PREFACTOR,
    PHI2_PREFACTOR,
    FieldResult,
    ValidityReport,
    cusp_e,
    cusp_phi,
    e_squared,
    e_squared_perp_exact,
    phi_squared,
    phi_squared_perp_exact,
    run_validation_suites,
    singular_directions,
    validity_report,
)
from .geometry import (
    TWO_RAY_LIMIT,
    DegenerateExtremumError,
    FocalPoint,
    MirrorGeometry,
    PairFamily,
    PartnerMultiplicityError,
    RayPair,
    SingularPartnerDerivativeError,
    critical_angles,
    edge_shift,
    incident_map,
    incident_map_derivative,
    pair_domain,
    partner_angle,
    partner_derivative,
    partner_series,
    path_difference_factor,
    ray_pair,
)
from .observables import (
    SODIUM_MASS_GRAMS,
    SODIUM_POLARIZABILITY_CM3,
    AtomParams,
    ObservableInputs,
    beam_deflection,
    casimir_polder_potential,
    interferometer_phase,
    lambda_coefficient,
    trap_temperature,
)
from .quadrature import (
    CutoffKernelParams,
    EdgeSingularIntervalError,
    QuadratureNonconvergenceError,
    QuadResult,
    SingularIntegralSpec,
    WindowTooLargeError,
    adaptive_integrate,
    cutoff_kernel_g2,
    cutoff_kernel_g4,
    finite_part_power,
    integrate_by_parts_log,
    integrate_series_window,
)

__version__ = "0.1.0"
