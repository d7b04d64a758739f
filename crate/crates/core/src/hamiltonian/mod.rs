//! The model operator `H` in the Hermite-mode representation: quadratic forms and
//! their bounds, discrete eigenvalues below the threshold `1/2`, and eigenvalue
//! counting through the Jacobi operators.

mod forms;
mod hermite;
mod spectrum;

pub use forms::{
    evaluate_forms, lower_bound_constant, project_beta0, random_admissible_trial, random_trial, saturating_trial,
    FormValues, Mode, ModeTrialFunction, BETA0_CONSTRAINT_TOL,
};
pub use hermite::{hermite_all, hermite_eval};
pub use spectrum::{
    count_asymptotics_curve, count_asymptotics_row, count_below_epsilon, default_lambda_min, discrete2_check,
    h_eigenvalues_below_threshold, nu, predicted_count, AsymptoticsRow, Discrete2Report, HEigenvalue, HSpectrumOptions,
    HSpectrumResult, Truncation, THRESHOLD, TOP_GAP,
};
