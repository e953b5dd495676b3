//! The curves used throughout the examples and the reproduction suite.

use crate::curve::{CurveError, CurveFile, PlaneCurve};

pub const G_CHAR2: &str = include_str!("../curves/g_char2.curve");
pub const G_CHAR2_F4: &str = include_str!("../curves/g_char2_f4.curve");
pub const H_CHAR3: &str = include_str!("../curves/h_char3.curve");
pub const H_CHAR3_T0: &str = include_str!("../curves/h_char3_t0.curve");
pub const FERMAT4_F5: &str = include_str!("../curves/fermat4_f5.curve");
pub const FERMAT4_F625: &str = include_str!("../curves/fermat4_f625.curve");
pub const FERMAT5_F7: &str = include_str!("../curves/fermat5_f7.curve");
pub const OCTIC_D_CHAR3: &str = include_str!("../curves/octic_d_char3.curve");

/// `(file stem, contents)` of every bundled curve file.
pub const ALL: [(&str, &str); 8] = [
    ("g_char2", G_CHAR2),
    ("g_char2_f4", G_CHAR2_F4),
    ("h_char3", H_CHAR3),
    ("h_char3_t0", H_CHAR3_T0),
    ("fermat4_f5", FERMAT4_F5),
    ("fermat4_f625", FERMAT4_F625),
    ("fermat5_f7", FERMAT5_F7),
    ("octic_d_char3", OCTIC_D_CHAR3),
];

pub fn load(text: &str) -> Result<PlaneCurve, CurveError> {
    CurveFile::parse(text)?.build()
}

/// A bundled curve by file stem.
pub fn by_name(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
