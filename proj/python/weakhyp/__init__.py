from ._core import (
    EigenField,
    EnergyQuantities,
    HyperbolicityError,
    InadmissibleOrder,
    ReducedSystem,
    RegularizedEigenField,
    SingularPointError,
    SystemSpec,
    WeightInfeasible,
    builtin_scenarios,
    char_poly,
    compute_eigenvalues,
    energy_quantities,
    estimate_holder,
    eval_expr,
    eval_expr_derivative,
    eval_system,
    gamma_exponent,
    gevrey_threshold,
    mollify,
    parse_system,
    run_pipeline,
    system_to_text,
    threshold_rows,
    to_block_sylvester,
)

__all__ = [
    "EigenField",
    "EnergyQuantities",
    "HyperbolicityError",
    "InadmissibleOrder",
    "ReducedSystem",
    "RegularizedEigenField",
    "SingularPointError",
    "SystemSpec",
    "WeightInfeasible",
    "builtin_scenarios",
    "char_poly",
    "compute_eigenvalues",
    "energy_quantities",
    "estimate_holder",
    "eval_expr",
    "eval_expr_derivative",
    "eval_system",
    "gamma_exponent",
    "gevrey_threshold",
    "mollify",
    "parse_system",
    "run_pipeline",
    "system_to_text",
    "threshold_rows",
    "to_block_sylvester",
]
