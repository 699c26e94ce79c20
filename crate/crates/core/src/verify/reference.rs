//! Published decimal values the computed constants are compared against,
//! each at its printed precision.

/// `ν_k`, `k = 1..=20`.
pub const NU: [&str; 20] = [
    "2.61497e-1", "-5.62153e-1", "3.05978e-1", "2.62973e-2", "-6.44501e-2",
    "3.64064e-2", "-4.70865e-3", "-4.33984e-4", "1.5085e-3", "-1.83548e-4",
    "1.49365e-4", "4.99174e-5", "1.82657e-5", "1.30241e-5", "5.52779e-6",
    "2.90194e-6", "1.45075e-6", "7.19861e-7", "3.61606e-7", "1.80517e-7",
];

/// `ν*_k`, `k = 1..=10`.
pub const NU_STAR: [&str; 10] = [
    "2.61497e-1", "-1.01440e0", "1.87717e-1", "3.44297e-1", "-1.86153e-1",
    "-1.50297e-2", "4.29836e-2", "-1.30388e-2", "-1.57532e-3", "2.17630e-3",
];

pub const BETA_2: &str = "0.1893475";
pub const ALPHA_1: &str = "1.332582";
pub const X0_TWO: &str = "10.5998";

/// The `α_j` table used by the ratio check.
pub const ALPHA_TABLE: &str = include_str!("../../data/alpha_table.txt");
