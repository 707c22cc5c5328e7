//! Reference values the solver is compared against, as printed.

/// Pulse, `N = 100..400`: `L_inf(2.5)` and `L_inf(5)` at `lambda = 0`, the
/// optimal `lambda` and the errors reported with it.
pub struct PulseErrorRow {
    pub n: usize,
    pub linf_2_5: f64,
    pub lambda_opt: f64,
    pub linf_2_5_opt: f64,
    pub linf_5: f64,
    pub linf_5_opt: f64,
}

pub const PULSE_ERRORS: [PulseErrorRow; 4] = [
    PulseErrorRow {
        n: 100,
        linf_2_5: 3.2726e-5,
        lambda_opt: -0.00840,
        linf_2_5_opt: 1.2330e-5,
        linf_5: 5.22606e-5,
        linf_5_opt: 2.2789e-5,
    },
    PulseErrorRow {
        n: 200,
        linf_2_5: 2.0537e-5,
        lambda_opt: -0.00280,
        linf_2_5_opt: 1.4819e-5,
        linf_5: 1.91604e-5,
        linf_5_opt: 1.9119e-5,
    },
    PulseErrorRow {
        n: 300,
        linf_2_5: 1.4428e-5,
        lambda_opt: -0.00094,
        linf_2_5_opt: 1.2509e-5,
        linf_5: 1.70403e-5,
        linf_5_opt: 1.6944e-5,
    },
    PulseErrorRow {
        n: 400,
        linf_2_5: 1.4452e-5,
        lambda_opt: -0.00178,
        linf_2_5_opt: 1.4440e-5,
        linf_5: 1.61150e-5,
        linf_5_opt: 1.5872e-5,
    },
];

/// Initial invariants and relative changes at the final time.
pub struct ConservationRow {
    /// Grid size, or output time for the generation run.
    pub key: f64,
    pub m0: f64,
    pub e0: f64,
    pub h0: f64,
    pub c_m: f64,
    pub c_e: f64,
    pub c_h: f64,
}

pub const PULSE_CONSERVATION: [ConservationRow; 4] = [
    ConservationRow {
        key: 100.0,
        m0: 1.0445,
        e0: 0.0601,
        h0: 0.0040,
        c_m: 5.4748e-6,
        c_e: 3.8176e-8,
        c_h: 1.5233e-6,
    },
    ConservationRow {
        key: 200.0,
        m0: 1.0445,
        e0: 0.0601,
        h0: 0.0040,
        c_m: 3.2669e-6,
        c_e: 5.1126e-8,
        c_h: 1.7003e-6,
    },
    ConservationRow {
        key: 300.0,
        m0: 1.0445,
        e0: 0.0601,
        h0: 0.0040,
        c_m: 2.4190e-7,
        c_e: 2.1767e-8,
        c_h: 2.8351e-6,
    },
    ConservationRow {
        key: 400.0,
        m0: 1.0445,
        e0: 0.0601,
        h0: 0.0040,
        c_m: 1.3753e-6,
        c_e: 2.0910e-10,
        c_h: 3.3939e-6,
    },
];

/// Kink: `L_inf(4)` and `L_inf(12)` at `lambda = 0` and at the reported optimum.
pub struct KinkErrorRow {
    pub n: usize,
    pub linf_4: f64,
    pub lambda_opt: f64,
    pub linf_4_opt: f64,
    pub linf_12: f64,
    pub linf_12_opt: f64,
}

pub const KINK_ERRORS: [KinkErrorRow; 5] = [
    KinkErrorRow {
        n: 100,
        linf_4: 8.4150e-6,
        lambda_opt: -0.01850,
        linf_4_opt: 3.8974e-6,
        linf_12: 2.3158e-5,
        linf_12_opt: 1.2330e-5,
    },
    KinkErrorRow {
        n: 200,
        linf_4: 2.1207e-6,
        lambda_opt: -0.00574,
        linf_4_opt: 1.0194e-6,
        linf_12: 5.9956e-6,
        linf_12_opt: 2.9662e-6,
    },
    KinkErrorRow {
        n: 400,
        linf_4: 5.3296e-7,
        lambda_opt: -0.00115,
        linf_4_opt: 2.5440e-7,
        linf_12: 1.5016e-6,
        linf_12_opt: 7.7413e-7,
    },
    KinkErrorRow {
        n: 600,
        linf_4: 2.2377e-7,
        lambda_opt: -0.00057,
        linf_4_opt: 1.1335e-7,
        linf_12: 6.6655e-7,
        linf_12_opt: 3.3921e-7,
    },
    KinkErrorRow {
        n: 800,
        linf_4: 1.4601e-7,
        lambda_opt: -0.00024,
        linf_4_opt: 6.3749e-8,
        linf_12: 5.2835e-6,
        linf_12_opt: 5.2779e-6,
    },
];

pub const KINK_CONSERVATION: [ConservationRow; 5] = [
    ConservationRow {
        key: 100.0,
        m0: 16.1599,
        e0: 3.0129,
        h0: 0.0979,
        c_m: 4.9504e-3,
        c_e: 5.3104e-3,
        c_h: 5.4423e-3,
    },
    ConservationRow {
        key: 200.0,
        m0: 16.0799,
        e0: 2.9969,
        h0: 0.0974,
        c_m: 4.9751e-3,
        c_e: 5.3388e-3,
        c_h: 5.4721e-3,
    },
    ConservationRow {
        key: 400.0,
        m0: 16.0399,
        e0: 2.9889,
        h0: 0.0972,
        c_m: 4.9875e-3,
        c_e: 5.3531e-3,
        c_h: 5.4871e-3,
    },
    ConservationRow {
        key: 600.0,
        m0: 16.0266,
        e0: 2.9862,
        h0: 0.0971,
        c_m: 4.9916e-3,
        c_e: 5.3578e-3,
        c_h: 5.4922e-3,
    },
    ConservationRow {
        key: 800.0,
        m0: 16.0199,
        e0: 2.9849,
        h0: 0.0970,
        c_m: 4.9938e-3,
        c_e: 5.3603e-3,
        c_h: 4.9481e-3,
    },
];

/// Generation run, keyed by output time.
pub const GENERATION_CONSERVATION: [ConservationRow; 3] = [
    ConservationRow {
        key: 5.0,
        m0: 5.2255,
        e0: 1.5033,
        h0: 1.5994,
        c_m: 8.0719e-7,
        c_e: 3.0588e-5,
        c_h: 1.2886e-3,
    },
    ConservationRow {
        key: 10.0,
        m0: 5.2255,
        e0: 1.5033,
        h0: 1.5994,
        c_m: 2.7652e-6,
        c_e: 4.1342e-5,
        c_h: 1.8485e-3,
    },
    ConservationRow {
        key: 15.0,
        m0: 5.2255,
        e0: 1.5033,
        h0: 1.5994,
        c_m: 7.0380e-6,
        c_e: 6.1132e-4,
        c_h: 2.1571e-3,
    },
];

/// Invariants are printed to four decimals, some truncated and some rounded;
/// a computed value matches when it is within one unit of the last digit.
pub const PRINTED_DIGIT: f64 = 1e-4;

pub fn matches_printed(computed: f64, printed: f64) -> bool {
    (computed - printed).abs() <= PRINTED_DIGIT * (1.0 + 1e-9)
}
