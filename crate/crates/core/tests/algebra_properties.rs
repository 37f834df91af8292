use essmod::algebra::{
    calculus, closed_subideal, ideal_from_projection, ideal_support_projection, is_essential_right_ideal,
    lower_approximants, spectral_projection, AlgebraElement, AlgebraShape,
};
use essmod::numeric::{herm_eig, is_psd, op_norm, CMatrix, C64};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn matrix(n: usize, m: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * m)
        .prop_map(move |v| CMatrix::from_fn(n, m, |r, c| C64::new(v[r * m + c].0, v[r * m + c].1)))
}

fn hermitian(n: usize) -> impl Strategy<Value = CMatrix> {
    matrix(n, n).prop_map(|a| a.hermitian_part())
}

fn element(dims: Vec<usize>) -> impl Strategy<Value = AlgebraElement> {
    let shape = AlgebraShape::new(dims.clone()).unwrap();
    dims.into_iter()
        .map(|n| matrix(n, n))
        .collect::<Vec<_>>()
        .prop_map(move |blocks| AlgebraElement::from_blocks(shape.clone(), blocks).unwrap())
}

fn shape_dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=4, 1..=3)
}

fn to_nalgebra(a: &CMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(a.rows(), a.cols(), |r, c| a[(r, c)])
}

fn svd_rank(a: &CMatrix, tol: f64) -> usize {
    to_nalgebra(a).svd(false, false).singular_values.iter().filter(|&&s| s > tol).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(a in (1usize..=6).prop_flat_map(hermitian)) {
        let eig = herm_eig(&a, 1e-10).unwrap();
        let back = eig.reassemble(|t| t);
        let err = (&back - &a).frobenius_norm();
        prop_assert!(err <= 1e-10 * (1.0 + op_norm(&a)), "error {err}");
        let oracle = to_nalgebra(&a).symmetric_eigen().eigenvalues;
        let mut oracle: Vec<f64> = oracle.iter().copied().collect();
        oracle.sort_by(f64::total_cmp);
        for (x, y) in eig.values.iter().zip(&oracle) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn norm_is_submultiplicative(
        (a, b) in (1usize..=5).prop_flat_map(|n| (matrix(n, n), matrix(n, n)))
    ) {
        prop_assert!(op_norm(&(&a * &b)) <= op_norm(&a) * op_norm(&b) + 1e-10);
    }

    #[test]
    fn psd_both_ways_means_tiny(a in (1usize..=5).prop_flat_map(hermitian), s in 0.0f64..1e-12) {
        let small = a.scale_real(s);
        let tol = 1e-10;
        if is_psd(&small, tol).unwrap() && is_psd(&small.scale_real(-1.0), tol).unwrap() {
            prop_assert!(op_norm(&small) <= 2.0 * tol);
        }
    }

    #[test]
    fn calculus_is_multiplicative(a in shape_dims().prop_flat_map(element)) {
        let h = a.add(&a.adjoint()).scale(C64::new(0.5, 0.0));
        let f = |t: f64| t * t - 1.0;
        let g = |t: f64| 2.0 * t + 0.5;
        let fg = calculus(&h, &|t: f64| f(t) * g(t)).unwrap();
        let prod = calculus(&h, &f).unwrap().mul(&calculus(&h, &g).unwrap());
        prop_assert!(fg.approx_eq(&prod, 1e-9));
    }

    #[test]
    fn ramp_approximants_increase(a in shape_dims().prop_flat_map(element)) {
        let h = a.add(&a.adjoint()).scale(C64::new(0.5, 0.0));
        let eps = h.norm() / 2.0;
        let Ok(chi) = spectral_projection(&h, eps) else { return Ok(()) };
        let mut prev = lower_approximants(&h, eps, 1).unwrap();
        let mut prev_err = prev.sub(&chi).norm();
        for n in [2u64, 4, 16, 256, 1 << 16] {
            let next = lower_approximants(&h, eps, n).unwrap();
            for b in next.sub(&prev).blocks() {
                prop_assert!(is_psd(b, 1e-12).unwrap());
            }
            let err = next.sub(&chi).norm();
            prop_assert!(err <= prev_err + 1e-12);
            prev = next;
            prev_err = err;
        }
    }

    #[test]
    fn subideal_rank_matches_svd(x in shape_dims().prop_flat_map(element), cut in 0usize..3) {
        // lower the rank of the first block to exercise non-full ranges
        let n0 = x.shape().block_dims()[0];
        let keep = n0.saturating_sub(cut).max(1);
        let mask = CMatrix::from_fn(n0, n0, |r, c| if r == c && r < keep { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
        let mut blocks = x.blocks().to_vec();
        blocks[0] = &blocks[0] * &mask;
        let x = AlgebraElement::from_blocks(x.shape().clone(), blocks).unwrap();
        let k = closed_subideal(&x).unwrap();
        prop_assert!(k.verified(1e-9, 1e-8));
        let oracle: usize = x.blocks().iter().map(|b| svd_rank(b, 1e-8)).sum();
        prop_assert_eq!(k.ideal.rank(), oracle);
    }

    #[test]
    fn projection_roundtrip(x in shape_dims().prop_flat_map(element)) {
        let a = x.mul(&x.adjoint());
        let Ok(p) = spectral_projection(&a, a.norm() / 3.0) else { return Ok(()) };
        let ideal = ideal_from_projection(&p).unwrap();
        let again = ideal_support_projection(&ideal.spanning_set()).unwrap();
        prop_assert!(again.support_projection().approx_eq(&p, 1e-8));
    }

    #[test]
    fn essentiality_matches_rank_one_falsifier(x in shape_dims().prop_flat_map(element), cut in 0usize..2) {
        let n0 = x.shape().block_dims()[0];
        let mask = CMatrix::from_fn(n0, n0, |r, c| if r == c && r + cut < n0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
        let mut blocks = x.blocks().to_vec();
        blocks[0] = &blocks[0] * &mask;
        let gens = vec![AlgebraElement::from_blocks(x.shape().clone(), blocks).unwrap()];
        let j = ideal_support_projection(&gens).unwrap();
        let decision = is_essential_right_ideal(&j);
        // any rank-one qA with q = vv* on a complement vector misses J
        let falsified = j.ranges().iter().enumerate().any(|(b, r)| {
            if r.is_full() { return false; }
            let v = r.complement().basis()[0].clone();
            let q = CMatrix::from_fn(v.len(), v.len(), |i, k| v[i] * v[k].conj());
            let w = ideal_from_projection(&AlgebraElement::single_block(j.shape(), b, q).unwrap()).unwrap();
            j.intersection_dim(&w) == 0
        });
        prop_assert_eq!(decision.essential, !falsified);
    }
}

#[test]
fn zero_ideal_is_not_essential() {
    let s = AlgebraShape::new(vec![2, 1]).unwrap();
    let j = ideal_support_projection(&[AlgebraElement::zero(&s)]).unwrap();
    assert!(j.is_zero());
    assert!(!is_essential_right_ideal(&j).essential);
}
