//! The `k:re,im;k:re,im;...` mini-format for test functions.

use std::fmt;

use repelcircle_core::statistics::FourierTestFunction;
use rustfft::num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSpecError {
    pub token: String,
    /// Byte offset of the token in the input.
    pub position: usize,
    pub reason: String,
}

impl fmt::Display for GSpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid g-spec token {:?} at position {}: {}",
            self.token, self.position, self.reason
        )
    }
}

impl std::error::Error for GSpecError {}

/// Parses `k:re,im` terms separated by `;`. Only k ≥ 0 is written; the
/// negative modes follow by conjugate symmetry. `1:0.5,0` is cos θ.
pub fn g_spec_parse(text: &str) -> Result<FourierTestFunction, GSpecError> {
    let mut terms = Vec::new();
    let mut offset = 0;
    for raw in text.split(';') {
        let position = offset + (raw.len() - raw.trim_start().len());
        offset += raw.len() + 1;
        let token = raw.trim();
        if token.is_empty() {
            continue;
        }
        let err = |reason: &str| GSpecError {
            token: token.to_string(),
            position,
            reason: reason.to_string(),
        };
        let (k, value) = token.split_once(':').ok_or_else(|| err("expected k:re,im"))?;
        let k: usize = k.trim().parse().map_err(|_| err("mode must be a nonnegative integer"))?;
        let (re, im) = value.split_once(',').ok_or_else(|| err("expected re,im after ':'"))?;
        let re: f64 = re.trim().parse().map_err(|_| err("real part is not a number"))?;
        let im: f64 = im.trim().parse().map_err(|_| err("imaginary part is not a number"))?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(err("coefficient must be finite"));
        }
        if k == 0 && im != 0.0 {
            return Err(err("c_0 must be real"));
        }
        if terms.iter().any(|&(kk, _)| kk == k) {
            return Err(err("mode given twice"));
        }
        terms.push((k, Complex64::new(re, im)));
    }
    if terms.is_empty() {
        return Err(GSpecError {
            token: text.to_string(),
            position: 0,
            reason: "no terms".into(),
        });
    }
    FourierTestFunction::new(terms).map_err(|e| GSpecError {
        token: text.to_string(),
        position: 0,
        reason: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c = g_spec_parse("0:1,0").unwrap();
        assert_eq!(c.eval(1.3), 1.0);
        let cos = g_spec_parse("1:0.5,0").unwrap();
        let sin = g_spec_parse("1:0,-0.5").unwrap();
        for t in [0.2, 2.5] {
            assert!((cos.eval(t) - f64::cos(t)).abs() < 1e-15);
            assert!((sin.eval(t) - f64::sin(t)).abs() < 1e-15);
        }
    }

    #[test]
    fn multiple_terms_and_spaces() {
        let g = g_spec_parse(" 0:2,0 ; 3:0.1,0.2;").unwrap();
        assert_eq!(g.coefficients().len(), 2);
    }

    #[test]
    fn errors_name_token_and_position() {
        let e = g_spec_parse("1:0.5,0;x:1,0").unwrap_err();
        assert_eq!(e.token, "x:1,0");
        assert_eq!(e.position, 8);
        assert!(g_spec_parse("1:0.5").is_err());
        assert!(g_spec_parse("0:1,1").is_err());
        assert!(g_spec_parse("-1:1,0").is_err());
        assert!(g_spec_parse("1:1,0;1:2,0").is_err());
        assert!(g_spec_parse("").is_err());
    }
}
