"""Quadratic stochastic operators for two-gender trait transmission.

Build heredity-coefficient tensors from base measures or per-pair
measure families, validate the sex-ratio structure, act on hyper-simplex
distributions, reduce to n-type operators on the ordinary simplex, and
study their dynamics (trajectories, fixed points, stability).  Includes
embedded Rh and ABO blood-group transmission models and CSV ingestion of
raw parent/child frequency counts.
"""

from .dynamics import (
    FAlphaAnalysis,
    FixedPointReport,
    Quadratic1dAnalysis,
    RegularityReport,
    Trajectory,
    analyze_f_alpha,
    analyze_quadratic_1d,
    f_alpha,
    find_fixed_point,
    iterate,
    jacobian,
    regularity_check,
    tangent_spectral_radius,
)
from .genotype import (
    GENDERS,
    Genotype,
    GenotypeSpace,
    build_space,
    mendelian_offspring_set,
    nonmendelian_offspring_set,
)
from .ingest import (
    CountRow,
    CountsTable,
    estimate_measures,
    load_counts,
    load_measure_family,
    read_measure_family,
    save_counts,
    save_measure_family,
)
from .models import (
    ModelDescriptor,
    abo_measure_family,
    abo_model,
    export_table,
    mendelian_trait,
    multi_allele,
    rh_measure_family,
    rh_model,
    trait_base_measure,
    trait_space,
)
from .operators import (
    Distribution,
    HeredityTensor,
    MeasureFamily,
    ReducedDistribution,
    ReducedQso,
    ValidationReport,
    Violation,
    apply_canonical,
    apply_reduced,
    fold,
    lift,
    mendelian_coefficients,
    nonmendelian_coefficients,
    reduce,
    validate_pq,
)

__version__ = "0.1.0"
