//! Property-based invariants: the algebra laws of the vector/tuple
//! operations, order consistency between the partial-sum tests and the
//! feasibility solver, and the structural identities tying the monotone
//! families together.

use proptest::prelude::*;

use majorize::lp::{phase_one, Feasibility, LpOutcome};
use majorize::majorization::{
    bistochastic_majorizes, hlp_majorizes, matrix_majorizes, modified_majorizes, submajorizes,
};
use majorize::monotones::{
    f_alpha, kl_divergence, log_matrix_f, matrix_derivation, matrix_divergence, matrix_f,
    renyi_divergence, renyi_entropy, AlphaTuple,
};
use majorize::stochastic::StochasticMatrix;
use majorize::tuple::{tuple_boxplus, tuple_boxtimes, tuple_equiv, MatrixTuple};
use majorize::vector::{direct_sum, equiv, kron, tensor_power, NonNegVector, ProbVector};

fn nonneg(max_len: usize) -> impl Strategy<Value = NonNegVector> {
    prop::collection::vec(0.0f64..1.0, 1..=max_len)
        .prop_filter("needs some mass", |v| v.iter().sum::<f64>() > 0.05)
        .prop_map(|v| NonNegVector::new(v).unwrap())
}

fn prob(max_len: usize) -> impl Strategy<Value = ProbVector> {
    nonneg(max_len).prop_map(|v| v.normalized().unwrap())
}

fn full_support_prob(len: usize) -> impl Strategy<Value = ProbVector> {
    prop::collection::vec(0.05f64..1.0, len..=len)
        .prop_map(|v| NonNegVector::new(v).unwrap().normalized().unwrap())
}

fn dichotomy(len: usize) -> impl Strategy<Value = MatrixTuple> {
    (full_support_prob(len), full_support_prob(len)).prop_map(|(a, b)| {
        MatrixTuple::new(vec![a.into_nonneg(), b.into_nonneg()]).unwrap()
    })
}

/// Convex mix of the identity and two seeded permutation matrices.
fn bistochastic(len: usize) -> impl Strategy<Value = StochasticMatrix> {
    (
        prop::collection::vec(0..len, len..=len),
        prop::collection::vec(0..len, len..=len),
        0.0f64..1.0,
        0.0f64..1.0,
    )
        .prop_map(move |(swap_a, swap_b, wa, wb)| {
            let perm_from = |swaps: &[usize]| {
                let mut p: Vec<usize> = (0..len).collect();
                for (i, &j) in swaps.iter().enumerate() {
                    p.swap(i, j.min(len - 1));
                }
                p
            };
            let pa = perm_from(&swap_a);
            let pb = perm_from(&swap_b);
            let (wa, wb) = (wa / 3.0, wb / 3.0);
            let wi = 1.0 - wa - wb;
            let mut data = vec![0.0f64; len * len];
            for i in 0..len {
                data[i * len + i] += wi;
                data[pa[i] * len + i] += wa;
                data[pb[i] * len + i] += wb;
            }
            StochasticMatrix::new(len, len, data).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sort_preserves_multiset(x in nonneg(8)) {
        prop_assert!(equiv(&x.sorted_desc(), &x));
    }

    #[test]
    fn norm_laws_over_sum_and_product(x in nonneg(6), y in nonneg(6)) {
        let s = direct_sum(&x, &y);
        prop_assert!((s.sum() - (x.sum() + y.sum())).abs() < 1e-12);
        let k = kron(&x, &y);
        prop_assert!((k.sum() - x.sum() * y.sum()).abs() < 1e-9);
        prop_assert_eq!(s.support_size(), x.support_size() + y.support_size());
        prop_assert_eq!(k.support_size(), x.support_size() * y.support_size());
    }

    #[test]
    fn sum_and_product_commute_up_to_equiv(x in nonneg(6), y in nonneg(6)) {
        prop_assert!(equiv(&direct_sum(&x, &y), &direct_sum(&y, &x)));
        prop_assert!(equiv(&kron(&x, &y), &kron(&y, &x)));
    }

    #[test]
    fn product_associates_up_to_equiv(x in nonneg(4), y in nonneg(4), z in nonneg(4)) {
        let lhs = kron(&kron(&x, &y), &z);
        let rhs = kron(&x, &kron(&y, &z));
        prop_assert!(equiv(&lhs, &rhs));
    }

    #[test]
    fn tensor_square_is_self_product(p in prob(5)) {
        let sq = tensor_power(&p, 2).unwrap();
        let kk = kron(&p, &p);
        prop_assert!(equiv(&sq, &kk));
    }

    #[test]
    fn hlp_agrees_with_bistochastic_feasibility(p in prob(6), q in prob(6)) {
        let expected = hlp_majorizes(&p, &q);
        let lp = bistochastic_majorizes(p.as_nonneg(), q.as_nonneg()).unwrap();
        prop_assert_eq!(expected, lp.feasible);
    }

    #[test]
    fn mixing_is_always_majorized(p in prob(5), t in bistochastic(5)) {
        let q = ProbVector::new(t.apply_vector(&p.padded(5)).unwrap()).unwrap();
        prop_assert!(hlp_majorizes(&p, &q));
        // Schur direction of the power sums
        for alpha in [0.25, 0.5, 0.75] {
            prop_assert!(f_alpha(&q, alpha) >= f_alpha(&p, alpha) - 1e-9);
        }
        for alpha in [2.0, 3.0, 6.0] {
            prop_assert!(f_alpha(&q, alpha) <= f_alpha(&p, alpha) + 1e-9);
        }
    }

    #[test]
    fn submajorization_agrees_with_slack_lp(p in prob(4), q in prob(4)) {
        // bistochastic T and slack s with T q - s = p, all on 4 coordinates
        let len = 4usize;
        let pp = p.padded(len);
        let qp = q.padded(len);
        let mut cols = Vec::new();
        for i in 0..len {
            for j in 0..len {
                let mut col = vec![(j, 1.0), (len + i, 1.0)];
                if qp.entries()[j] != 0.0 {
                    col.push((2 * len + i, qp.entries()[j]));
                }
                cols.push(col);
            }
        }
        for i in 0..len {
            cols.push(vec![(2 * len + i, -1.0)]);
        }
        let mut rhs = vec![1.0; 2 * len];
        rhs.extend_from_slice(pp.entries());
        let outcome = phase_one(&Feasibility { nrows: 3 * len, cols, rhs }).unwrap();
        let lp_says = matches!(outcome, LpOutcome::Feasible(_));
        prop_assert_eq!(submajorizes(&pp, &qp), lp_says);
    }

    #[test]
    fn modified_order_refines_the_lp_verdict(p in prob(4), q in prob(4)) {
        let expected = bistochastic_majorizes(p.as_nonneg(), q.as_nonneg()).unwrap().feasible
            && p.support_size() == q.support_size();
        prop_assert_eq!(modified_majorizes(&p, &q), expected);
    }

    #[test]
    fn renyi_entropy_consistency_identity(p in prob(6)) {
        // H_alpha(p) = ln |supp p| - D_alpha(p || uniform on supp p)
        let len = p.len();
        let u = ProbVector::uniform_on(&p.support(), len).unwrap();
        for alpha in [0.0, 0.5, 1.0, 2.0, 5.0, f64::INFINITY] {
            let lhs = renyi_entropy(&p, alpha);
            let rhs = (p.support_size() as f64).ln() - renyi_divergence(&p, &u, alpha).as_f64();
            prop_assert!((lhs - rhs).abs() < 1e-9, "alpha={}: {} vs {}", alpha, lhs, rhs);
        }
    }

    #[test]
    fn matrix_order_is_stable_under_sum_and_product(
        p in dichotomy(2), q in dichotomy(2), r in dichotomy(2)
    ) {
        let one_shot = matrix_majorizes(&p, &q).unwrap();
        if one_shot.feasible {
            let ps = tuple_boxplus(&p, &r).unwrap();
            let qs = tuple_boxplus(&q, &r).unwrap();
            prop_assert!(matrix_majorizes(&ps, &qs).unwrap().feasible);
            let pt = tuple_boxtimes(&p, &r).unwrap();
            let qt = tuple_boxtimes(&q, &r).unwrap();
            prop_assert!(matrix_majorizes(&pt, &qt).unwrap().feasible);
        }
    }

    #[test]
    fn feasibility_implies_ordered_monotones(p in dichotomy(3), q in dichotomy(3)) {
        let res = matrix_majorizes(&p, &q).unwrap();
        if res.feasible {
            for values in [vec![0.5, 0.5], vec![0.25, 0.75], vec![2.0, -1.0], vec![-0.5, 1.5]] {
                let a = AlphaTuple::new(values).unwrap();
                let dp = matrix_divergence(&p, &a).unwrap();
                let dq = matrix_divergence(&q, &a).unwrap();
                prop_assert!(dp >= dq - 1e-8, "alpha={:?}: {} < {}", a.values(), dp, dq);
            }
            for k in 0..2 {
                let mut gamma = vec![0.0; 2];
                gamma[1 - k] = 1.0;
                let dp = matrix_derivation(&p, k, &gamma).unwrap();
                let dq = matrix_derivation(&q, k, &gamma).unwrap();
                prop_assert!(dp >= dq - 1e-8);
            }
        }
    }

    #[test]
    fn boxtimes_multiplies_the_power_sums(p in dichotomy(3), q in dichotomy(2)) {
        let a = AlphaTuple::new(vec![0.3, 0.7]).unwrap();
        let prod = tuple_boxtimes(&p, &q).unwrap();
        let lhs = log_matrix_f(&prod, &a).unwrap();
        let rhs = log_matrix_f(&p, &a).unwrap() + log_matrix_f(&q, &a).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn boxplus_adds_the_power_sums(p in dichotomy(3), q in dichotomy(2)) {
        for values in [vec![0.3, 0.7], vec![1.5, -0.5]] {
            let a = AlphaTuple::new(values).unwrap();
            let stacked = tuple_boxplus(&p, &q).unwrap();
            let lhs = matrix_f(&stacked, &a).unwrap();
            let rhs = matrix_f(&p, &a).unwrap() + matrix_f(&q, &a).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-9 * rhs.max(1.0));
        }
    }

    #[test]
    fn kl_divergence_is_nonnegative_on_common_support(p in full_support_prob(4), q in full_support_prob(4)) {
        let v = kl_divergence(&p, &q).as_f64();
        prop_assert!(v >= -1e-12);
    }

    #[test]
    fn boxplus_input_order_is_irrelevant(p in dichotomy(3), q in dichotomy(2)) {
        prop_assert!(tuple_equiv(
            &tuple_boxplus(&p, &q).unwrap(),
            &tuple_boxplus(&q, &p).unwrap()
        ));
    }
}
