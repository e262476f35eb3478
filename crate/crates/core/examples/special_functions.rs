//! Laguerre polynomials, Stirling numbers and the normal-ordering weights.

use photon_ecs::specfn::{assoc_laguerre, double_factorial, ordering_coeffs, squeezing_threshold, stirling2};

fn main() {
    println!("L_n^k(x) at x = 0.5");
    for k in 0..3 {
        let row: Vec<String> = (0..6).map(|n| format!("{:>9.5}", assoc_laguerre(n, k, 0.5))).collect();
        println!("  k={k}: {}", row.join(" "));
    }

    println!("\nStirling numbers of the second kind S(r, n)");
    for r in 0..8 {
        let row: Vec<String> = (0..=r).map(|n| format!("{:>5}", stirling2(r, n))).collect();
        println!("  r={r}: {}", row.join(""));
    }

    println!("\na^2 a†^3 = sum_k w_k a†^(3-k) a^(2-k)");
    for (k, w) in &ordering_coeffs(2, 3).coeffs {
        println!("  k={k}: w={w}");
    }

    println!("\n(2i-1)!! and squeezing thresholds");
    for l in [2u32, 4, 6, 8] {
        println!(
            "  l={l}: ({})!! = {}, threshold = {:.6}",
            l - 1,
            double_factorial(l as i64 - 1).unwrap(),
            squeezing_threshold(l).unwrap()
        );
    }
}
