//! Property tests across the generating-function and elliptic routes.

use proptest::prelude::*;
use ulam_core::bounds::bonferroni_bracket;
use ulam_core::elliptic::{
    a1_closed, a1_residue, a2_pi_combination, a2_quadrature, alpha_closed, elliptic_k, elliptic_pi, q1_roots,
    q2_roots,
};
use ulam_core::genfun::{alpha_contour, ContourSpec};

/// Feasible `(x, w)` with a margin from `4x + w² = 1`.
fn point() -> impl Strategy<Value = (f64, f64)> {
    (0.01f64..0.22, 0.0f64..1.0).prop_map(|(x, t)| (x, t * 0.9 * (1.0 - 4.0 * x).sqrt()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn root_ordering_chain((x, w) in point()) {
        let [c1, c2, d1, d2] = q1_roots(x).unwrap().roots;
        let [a1, a2, b1, b2] = q2_roots(x, w).unwrap().roots;
        let chain = [0.0, a1, c1, c2, a2, 1.0, b1, d1, d2, b2];
        if w > 0.0 {
            prop_assert!(chain.windows(2).all(|p| p[0] < p[1]), "{chain:?}");
        }
        prop_assert!((a1 * b2 - 1.0).abs() < 1e-12 && (c2 * d1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contour_agrees_with_closed_form((x, w) in point()) {
        let c = alpha_contour(w, x, &ContourSpec::default()).unwrap();
        let a = alpha_closed(w, x).unwrap();
        prop_assert!((c - a).abs() < 1e-9 * a, "x={x} w={w}: {c} vs {a}");
    }

    #[test]
    fn residue_forms_agree((x, w) in point()) {
        prop_assume!(w > 1e-3);
        let r = a1_residue(x, w).unwrap();
        let c = a1_closed(x, w).unwrap();
        prop_assert!(((r - c) / c).abs() < 1e-10);
    }

    #[test]
    fn pi_combination_agrees((x, w) in point()) {
        prop_assume!(w > 1e-3);
        let p = a2_pi_combination(x, w).unwrap();
        prop_assert!((p.value - a2_quadrature(x, w).unwrap()).abs() < 1e-8);
        prop_assert!(p.terms.len() <= 4 && p.terms.iter().all(|t| t.1.abs() < 1.0));
    }

    #[test]
    fn alpha_increases_in_w(x in 0.01f64..0.2, t in 0.0f64..0.8) {
        let wmax = (1.0 - 4.0 * x).sqrt();
        let (w0, w1) = (t * wmax, (t + 0.1) * wmax);
        prop_assert!(alpha_closed(w1, x).unwrap() > alpha_closed(w0, x).unwrap());
    }

    #[test]
    fn pi_even_part_reduces_to_k_at_zero(k in 0.0f64..0.95) {
        let s = elliptic_pi(k, 0.0).unwrap();
        prop_assert!((s - elliptic_k(k).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn bonferroni_brackets_hold(n in 2usize..7, kk in 1usize..7, r in 1u64..4, lo in 0u64..6, hi in 0u64..6) {
        prop_assume!(kk <= n);
        let b = bonferroni_bracket(n, kk, r, r + 2 * lo + 1, r + 2 * hi).unwrap();
        prop_assert!(b.holds());
    }
}
