use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; the coefficient field for every symbolic
/// object in the crate. `BigRational` keeps the denominator positive and the
/// fraction reduced after each operation.
pub type ExactScalar = BigRational;

pub(crate) fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
pub(crate) fn ratio(n: i64, d: i64) -> ExactScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn to_f64(q: &ExactScalar) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators overflow the direct conversion.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Canonical `num/den` text form used by the JSON serializers.
pub fn format_scalar(q: &ExactScalar) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `n`, `n/d` or a finite decimal such as `-0.125` exactly.
pub fn parse_scalar(text: &str) -> Result<ExactScalar> {
    let bad = |msg: &str| Error::Parse {
        pos: 0,
        msg: format!("{msg}: `{text}`"),
    };
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad("bad numerator"))?;
        let d: BigInt = d.trim().parse().map_err(|_| bad("bad denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let w: BigInt = match whole.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            s => s.parse().map_err(|_| bad("bad decimal"))?,
        };
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad("bad decimal"));
        }
        let f: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().map_err(|_| bad("bad decimal"))?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = BigRational::new(w * &scale + f, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let n: BigInt = t.parse().map_err(|_| bad("bad number"))?;
    Ok(BigRational::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_scalar("3").unwrap(), int(3));
        assert_eq!(parse_scalar("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_scalar("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_scalar("-.5").unwrap(), ratio(-1, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("abc").is_err());
    }

    #[test]
    fn canonical_form_is_reduced() {
        assert_eq!(format_scalar(&ratio(4, -6)), "-2/3");
        assert_eq!(format_scalar(&int(0)), "0/1");
    }
}
