//! One-off stress sweep of the approximate-catalytic pipeline on random
//! full-support instances at d = 2 and 3.

use majorize::criteria::{CheckConfig, SpectrumGrid, Verdict};
use majorize::majorization::{exact_matrix_majorizes, matrix_majorizes};
use majorize::oracle::{random_tuple, RandomSpec};
use majorize::tuple::MatrixTuple;
use majorize::witness::{approx_catalytic_search, CatalyticOutcome};

fn sm64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn dyadic_prob(state: &mut u64, parts: usize) -> Vec<f64> {
    const DENOM: u64 = 1 << 12;
    let free = DENOM - parts as u64;
    let mut cuts: Vec<u64> = (0..parts - 1).map(|_| sm64(state) % (free + 1)).collect();
    cuts.sort_unstable();
    let mut vals = Vec::with_capacity(parts);
    let mut prev = 0u64;
    for &c in &cuts {
        vals.push(c - prev + 1);
        prev = c;
    }
    vals.push(free - prev + 1);
    vals.into_iter().map(|k| k as f64 / DENOM as f64).collect()
}

fn agreement_sweep() {
    let mut state = 0xC0FFEE_u64;
    let mut feasible = 0usize;
    let mut bad = 0usize;
    for trial in 0..5000u64 {
        let d = 1 + (sm64(&mut state) % 3) as usize;
        let n = 2 + (sm64(&mut state) % 5) as usize;
        let m = 1 + (sm64(&mut state) % 6) as usize;
        let dup = sm64(&mut state) % 4 == 0;
        let mut pcols: Vec<Vec<f64>> = (0..d).map(|_| dyadic_prob(&mut state, n)).collect();
        if dup && n >= 3 {
            for c in pcols.iter_mut() {
                c[1] = c[0];
            }
        }
        let p = MatrixTuple::from_columns(&pcols).unwrap();
        let q = if sm64(&mut state) % 2 == 0 {
            let t: Vec<Vec<f64>> = (0..n).map(|_| dyadic_prob(&mut state, m)).collect();
            let cols: Vec<Vec<f64>> = (0..d)
                .map(|k| {
                    (0..m)
                        .map(|i| (0..n).map(|j| t[j][i] * p.entry(j, k)).sum())
                        .collect()
                })
                .collect();
            MatrixTuple::from_columns(&cols).unwrap()
        } else {
            MatrixTuple::from_columns(
                &(0..d).map(|_| dyadic_prob(&mut state, m)).collect::<Vec<_>>(),
            )
            .unwrap()
        };
        let float = match matrix_majorizes(&p, &q) {
            Ok(r) => r,
            Err(e) => {
                println!("agreement trial {trial}: FLOAT ERROR {e}");
                bad += 1;
                continue;
            }
        };
        let exact = exact_matrix_majorizes(&p, &q).unwrap();
        if float.feasible != exact.feasible {
            println!("agreement trial {trial}: DISAGREEMENT");
            bad += 1;
        }
        if float.feasible {
            feasible += 1;
            if float.residual > 1e-8 {
                println!("agreement trial {trial}: RESIDUAL {}", float.residual);
                bad += 1;
            }
        }
    }
    println!("agreement sweep: 5000 trials, {feasible} feasible, {bad} problems");
}

fn main() {
    agreement_sweep();
    let cfg = CheckConfig::default();
    let mut found = [0usize; 2];
    let mut refused = [0usize; 2];
    let mut capped = [0usize; 2];
    let mut errors = 0usize;
    let mut orders = std::collections::BTreeMap::<usize, usize>::new();
    for d in [2usize, 3] {
        let grid = SpectrumGrid::default_for_d(d).unwrap();
        for seed in 0..400u64 {
            let rows = 2 + (seed % 3) as usize;
            let p = random_tuple(&RandomSpec { seed: 7000 + seed * 2, rows, out_rows: rows, d, sparsity: 0.0 }).unwrap();
            let q = random_tuple(&RandomSpec { seed: 7001 + seed * 2, rows, out_rows: rows, d, sparsity: 0.0 }).unwrap();
            match approx_catalytic_search(&p, &q, 0.05, 6, Some(d - 1), &grid, &cfg) {
                Ok(CatalyticOutcome::Found(w)) => {
                    found[d - 2] += 1;
                    *orders.entry(w.order).or_default() += 1;
                    assert!(w.residual <= 1e-8, "seed {seed}: residual {}", w.residual);
                    assert_eq!(w.q_eps.column(d - 1).entries(), q.column(d - 1).entries());
                    for k in 0..d {
                        let drift: f64 = (0..rows)
                            .map(|i| (w.q_eps.entry(i, k) - q.entry(i, k)).abs())
                            .sum();
                        assert!(drift <= 0.05 + 1e-12);
                    }
                }
                Ok(CatalyticOutcome::NecessaryViolated(r)) => {
                    refused[d - 2] += 1;
                    assert_eq!(r.verdict, Verdict::Violated);
                }
                Ok(CatalyticOutcome::NotFoundBelowCap { .. }) => capped[d - 2] += 1,
                Err(e) => {
                    errors += 1;
                    println!("seed {seed} d={d}: ERROR {e}");
                }
            }
        }
    }
    println!("d=2: found {} refused {} capped {}", found[0], refused[0], capped[0]);
    println!("d=3: found {} refused {} capped {}", found[1], refused[1], capped[1]);
    println!("order histogram: {orders:?}; errors {errors}");
}
