//! Logit agreement functions.
//!
//! Both functions multiply a bounded "confidence" term by the sum of the two
//! logits: agreeing logits are amplified, opposing logits cancel.

use libm::exp;

/// Logistic sigmoid.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + exp(-x))
}

/// Sigmoid rescaled to `(-1, 1)`: `2 sigmoid(x) - 1`.
#[inline]
pub fn sigmoid_rescaled(x: f64) -> f64 {
    2.0 * sigmoid(x) - 1.0
}

/// Part/semantic agreement: `(s'(a) + s'(b)) * (a + b)` with the rescaled
/// sigmoid `s'`.
#[inline]
pub fn agreement_part_sem(a: f64, b: f64) -> f64 {
    (sigmoid_rescaled(a) + sigmoid_rescaled(b)) * (a + b)
}

/// Semantic/instance agreement: `(s(a) + s(b)) * (a + b)` with the plain
/// sigmoid.
#[inline]
pub fn agreement_sem_inst(a: f64, b: f64) -> f64 {
    (sigmoid(a) + sigmoid(b)) * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // tanh(x/2) from the exponential definition, independent of `sigmoid`.
    fn half_tanh(x: f64) -> f64 {
        let e = (x).exp();
        (e - 1.0) / (e + 1.0)
    }

    #[test]
    fn rescaled_sigmoid_values() {
        assert_eq!(sigmoid_rescaled(0.0), 0.0);
        assert!((sigmoid_rescaled(2.0) - 0.761_594_2).abs() < 1e-7);
        assert!((sigmoid_rescaled(-2.0) + 0.761_594_2).abs() < 1e-7);
        assert!((sigmoid_rescaled(2.0) - half_tanh(2.0)).abs() < 1e-12);
    }

    #[test]
    fn part_sem_values() {
        assert_eq!(agreement_part_sem(2.0, -2.0), 0.0);
        assert!((agreement_part_sem(2.0, 2.0) - 6.092_753_4).abs() < 1e-6);
        assert!((agreement_part_sem(3.0, 2.0) - 8.333_712_7).abs() < 1e-6);
        assert!((agreement_part_sem(1.0, 3.0) - 5.469_061_6).abs() < 1e-6);
        assert!((agreement_part_sem(1.0, -3.0) - 0.886_062_2).abs() < 1e-6);
    }

    #[test]
    fn sem_inst_values() {
        assert_eq!(agreement_sem_inst(0.0, 0.0), 0.0);
        assert_eq!(agreement_sem_inst(1.0, -1.0), 0.0);
        assert!((agreement_sem_inst(2.0, 2.0) - 7.046_376_6).abs() < 1e-6);
        assert!((agreement_sem_inst(4.0, 4.0) - 15.712_22).abs() < 1e-4);
    }

    #[test]
    fn literal_formula_is_not_sign_corrected() {
        // f(a, 0) = a * s'(a) >= 0 even for negative a
        assert!(agreement_part_sem(-5.0, 0.0) > 4.9);
    }

    fn d_rescaled(a: f64) -> f64 {
        let s = sigmoid(a);
        2.0 * s * (1.0 - s)
    }

    #[test]
    fn partial_derivative_matches_finite_differences_on_orthant() {
        let h = 1e-4;
        for i in 0..=40 {
            for j in 0..=40 {
                let a = f64::from(i) * 0.25;
                let b = f64::from(j) * 0.25;
                let fd = (agreement_part_sem(a + h, b) - agreement_part_sem(a - h, b)) / (2.0 * h);
                let analytic = d_rescaled(a) * (a + b) + sigmoid_rescaled(a) + sigmoid_rescaled(b);
                assert!((fd - analytic).abs() < 1e-6, "a={a} b={b} fd={fd} an={analytic}");
                assert!(analytic >= 0.0);
            }
        }
    }

    proptest! {
        #[test]
        fn symmetric(a in -50.0f64..50.0, b in -50.0f64..50.0) {
            prop_assert!((agreement_part_sem(a, b) - agreement_part_sem(b, a)).abs() <= 1e-12);
            prop_assert!((agreement_sem_inst(a, b) - agreement_sem_inst(b, a)).abs() <= 1e-12);
        }

        #[test]
        fn opposing_logits_cancel(a in -50.0f64..50.0) {
            prop_assert!(agreement_part_sem(a, -a).abs() < 1e-9);
        }

        #[test]
        fn self_agreement_grows_with_magnitude(a in 0.0f64..30.0, d in 0.0f64..5.0) {
            let f = |x: f64| agreement_part_sem(x, x);
            prop_assert!(f(a) >= 0.0);
            prop_assert!(f(a + d) >= f(a));
            prop_assert!(f(-(a + d)) >= f(-a));
            prop_assert!((f(a) - 4.0 * a * sigmoid_rescaled(a)).abs() < 1e-9);
        }

        #[test]
        fn rescaled_is_odd_and_increasing(x in -30.0f64..30.0, d in 1e-3f64..1.0) {
            prop_assert!((sigmoid_rescaled(x) + sigmoid_rescaled(-x)).abs() < 1e-12);
            prop_assert!(sigmoid_rescaled(x + d) > sigmoid_rescaled(x) || sigmoid_rescaled(x) == 1.0);
        }
    }
}
