use majorize::criteria::{check_matrix_necessary, CheckConfig, SpectrumGrid};
use majorize::majorization::matrix_majorizes;
use majorize::oracle::{random_tuple, RandomSpec};
use majorize::tuple::{tuple_boxtimes, tuple_tensor_power};
use majorize::vector::ProbVector;
use majorize::witness::{build_catalyst_tuple, noise_mix};

fn main() {
    let (d, seed) = (2usize, 170u64);
    let rows = 2 + (seed % 3) as usize;
    let p = random_tuple(&RandomSpec { seed: 7000 + seed * 2, rows, out_rows: rows, d, sparsity: 0.0 }).unwrap();
    let q = random_tuple(&RandomSpec { seed: 7001 + seed * 2, rows, out_rows: rows, d, sparsity: 0.0 }).unwrap();
    eprintln!("rows={rows}");
    eprintln!("p: {:?}\n   {:?}", p.column(0).entries(), p.column(1).entries());
    eprintln!("q: {:?}\n   {:?}", q.column(0).entries(), q.column(1).entries());
    let grid = SpectrumGrid::default_for_d(d).unwrap();
    let cfg = CheckConfig::default();
    let nec = check_matrix_necessary(&p, &q, &grid, &cfg).unwrap();
    eprintln!("necessary: {:?} margin {:.3e}", nec.verdict, nec.margin);
    let w = ProbVector::new(q.column(d - 1).clone()).unwrap();
    let q_eps = noise_mix(&q, &w, 0.05).unwrap();
    for n in 1..=4 {
        let pn = tuple_tensor_power(&p, n).unwrap();
        let qn = tuple_tensor_power(&q_eps, n).unwrap();
        eprint!("power {n} ({} x {} rows, vars {}): ", pn.rows(), qn.rows(), pn.rows()*qn.rows());
        match matrix_majorizes(&pn, &qn) {
            Ok(r) => eprintln!("feasible={}", r.feasible),
            Err(e) => { eprintln!("ERROR {e}"); 
                if n < 6 { continue } }
        }
        if n >= 2 { 
            let cat = build_catalyst_tuple(&p, &q_eps, n).unwrap();
            let r = cat.as_tuple().unwrap();
            let pr = tuple_boxtimes(&p, &r).unwrap();
            let qr = tuple_boxtimes(&q_eps, &r).unwrap();
            eprintln!("  catalytic at n={n}: {} x {} rows", pr.rows(), qr.rows());
        }
    }
}
