//! Text renderings shared by reports, CSV output and the CLI.

use num_rational::BigRational;

use crate::exact::rational_to_f64;

/// `"a/b"` in lowest terms; integers keep the explicit `/1`.
pub fn rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Shortest decimal string that parses back to the same `f64`.
///
/// Plain positional notation between `1e-5` and `1e16`, scientific otherwise.
pub fn real(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// `"a/b (decimal)"`, e.g. `"9/25 (0.36)"`.
pub fn exact_with_decimal(q: &BigRational) -> String {
    format!("{} ({})", rational(q), real(rational_to_f64(q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders_examples() {
        let q = BigRational::new(9.into(), 25.into());
        assert_eq!(exact_with_decimal(&q), "9/25 (0.36)");
        assert_eq!(rational(&BigRational::from_integer(1.into())), "1/1");
        assert_eq!(real(0.75), "0.75");
        assert_eq!(real(7.6e-24), "7.6e-24");
        assert_eq!(real(0.0), "0");
    }

    proptest! {
        #[test]
        fn real_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            prop_assert_eq!(real(x).parse::<f64>().unwrap(), x);
        }

        #[test]
        fn rational_round_trips(a in 0u64..1_000_000, b in 1u64..1_000_000) {
            let q = BigRational::new(a.into(), b.into());
            prop_assert_eq!(crate::exact::parse_rational(&rational(&q)).unwrap(), q);
        }
    }
}
