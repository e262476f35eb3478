//! Small numerical helpers shared by the analytic and witness code.

use num_complex::Complex64 as C64;

/// Neumaier-compensated sum of real terms, accumulated in descending
/// magnitude order.
pub fn compensated_sum(terms: &mut [f64]) -> f64 {
    terms.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &t in terms.iter() {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Componentwise [`compensated_sum`] for complex terms.
pub fn compensated_sum_c(terms: &[C64]) -> C64 {
    let mut re: Vec<f64> = terms.iter().map(|z| z.re).collect();
    let mut im: Vec<f64> = terms.iter().map(|z| z.im).collect();
    C64::new(compensated_sum(&mut re), compensated_sum(&mut im))
}

/// Relative deviation with an absolute floor, used for every
/// analytic-vs-oracle comparison: `|a - b| / max(|a|, |b|)`, or zero when
/// both sides sit below `floor`.
pub fn rel_dev(a: C64, b: C64, floor: f64) -> f64 {
    let diff = (a - b).norm();
    if diff <= floor {
        return 0.0;
    }
    diff / a.norm().max(b.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut t = vec![1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(&mut t), 2.0);
    }

    #[test]
    fn rel_dev_floor() {
        assert_eq!(rel_dev(C64::new(1e-17, 0.0), C64::new(-1e-17, 0.0), 1e-13), 0.0);
        let d = rel_dev(C64::new(1.0, 0.0), C64::new(1.0 + 1e-6, 0.0), 1e-13);
        assert!((d - 1e-6).abs() < 1e-11);
    }
}
