//! Machine-readable verification records.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::{Scalar, SerializedScalar};

/// One identity check. `passed` holds exactly when `rel_err <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_name: String,
    pub parameters: BTreeMap<String, String>,
    pub lhs: SerializedScalar,
    pub rhs: SerializedScalar,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// `|lhs - rhs| / max(|lhs|, |rhs|)`, zero when both sides vanish.
pub fn relative_error(lhs: Scalar, rhs: Scalar) -> f64 {
    let abs = (lhs - rhs).norm();
    if abs == 0.0 {
        return 0.0;
    }
    abs / lhs.norm().max(rhs.norm())
}

impl VerificationReport {
    pub fn new(
        identity_name: impl Into<String>,
        parameters: BTreeMap<String, String>,
        lhs: Scalar,
        rhs: Scalar,
        tolerance: f64,
    ) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = relative_error(lhs, rhs);
        VerificationReport {
            identity_name: identity_name.into(),
            parameters,
            lhs: lhs.into(),
            rhs: rhs.into(),
            abs_err,
            rel_err,
            tolerance,
            passed: rel_err <= tolerance,
        }
    }

    /// A residual check: `lhs` is the (already scaled) residual, `rhs` is
    /// zero, and the residual itself is the relative error.
    pub fn from_error(
        identity_name: impl Into<String>,
        parameters: BTreeMap<String, String>,
        err: f64,
        tolerance: f64,
    ) -> Self {
        VerificationReport {
            identity_name: identity_name.into(),
            parameters,
            lhs: Scalar::new(err, 0.0).into(),
            rhs: Scalar::new(0.0, 0.0).into(),
            abs_err: err,
            rel_err: err,
            tolerance,
            passed: err <= tolerance,
        }
    }

    /// A check that could not be evaluated; it fails with infinite error.
    pub fn failed(identity_name: impl Into<String>, mut parameters: BTreeMap<String, String>, reason: String) -> Self {
        parameters.insert("error".into(), reason);
        let nan = Scalar::new(f64::NAN, 0.0);
        VerificationReport {
            identity_name: identity_name.into(),
            parameters,
            lhs: nan.into(),
            rhs: nan.into(),
            abs_err: f64::INFINITY,
            rel_err: f64::INFINITY,
            tolerance: 0.0,
            passed: false,
        }
    }
}

/// Build a parameter map from `(name, value)` pairs.
pub fn params_map<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_iff_within_tolerance() {
        let r = VerificationReport::new(
            "x",
            BTreeMap::new(),
            Scalar::new(2.0, 0.0),
            Scalar::new(2.0 + 1e-13, 0.0),
            1e-12,
        );
        assert!(r.passed);
        let r = VerificationReport::new(
            "x",
            BTreeMap::new(),
            Scalar::new(2.0, 0.0),
            Scalar::new(2.1, 0.0),
            1e-12,
        );
        assert!(!r.passed);
        assert!((r.rel_err - 0.1 / 2.1).abs() < 1e-15);
    }

    #[test]
    fn residual_reports_use_the_residual() {
        let r = VerificationReport::from_error("x", BTreeMap::new(), 0.0, 0.0);
        assert!(r.passed);
        let r = VerificationReport::from_error("x", BTreeMap::new(), 1e-20, 0.0);
        assert!(!r.passed);
        assert_eq!(relative_error(Scalar::new(0.0, 0.0), Scalar::new(0.0, 0.0)), 0.0);
    }

    #[test]
    fn nan_never_passes() {
        let r = VerificationReport::new(
            "x",
            BTreeMap::new(),
            Scalar::new(f64::NAN, 0.0),
            Scalar::new(1.0, 0.0),
            1.0,
        );
        assert!(!r.passed);
    }

    #[test]
    fn serializes_with_string_scalars() {
        let r = VerificationReport::new(
            "x",
            params_map([("q", "0.5".into())]),
            Scalar::new(1.0, 0.0),
            Scalar::new(1.0, 0.0),
            1e-12,
        );
        let json = serde_json::to_value(&r).unwrap();
        assert!(json["lhs"]["re"].is_string());
        assert_eq!(json["parameters"]["q"], "0.5");
    }
}
