//! Brute-force regeneration of the corpus oracle constants and known minima.
//!
//! For every entry, the analytic gradient and Hessian are evaluated on a dense
//! grid (at least 10^6 points; stratified for n > 4) and the observed extremes are
//! printed next to the shipped closed-form intervals. Known minima are recomputed
//! by a grid scan followed by damped Newton refinement.
//!
//!     cargo run --release -p lipbound --example corpus_oracles

use lipbound::corpus::{corpus_list, CorpusEntry};
use lipbound::estimation::{sample_points, EstimationConfig};

fn dense_points(e: &CorpusEntry) -> Vec<Vec<f64>> {
    let n = e.bx.dim();
    let per_axis = ((1.0e6f64).powf(1.0 / n as f64).ceil() as usize).max(2);
    let per_axis = if n == 1 { 1_000_001 } else { per_axis + 1 };
    let cfg = EstimationConfig {
        grid_points_per_axis: per_axis,
        max_samples: 1_000_000,
        ..EstimationConfig::default()
    };
    sample_points(&e.bx, &cfg).expect("grid")
}

fn newton_refine(e: &CorpusEntry, mut x: Vec<f64>) -> Vec<f64> {
    let n = x.len();
    for _ in 0..100 {
        let g = e.model.analytic_grad(&x).unwrap().unwrap();
        let h = e.model.analytic_hess(&x).unwrap().unwrap();
        // solve H s = g by Gaussian elimination with partial pivoting
        let mut a: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut row: Vec<f64> = (0..n).map(|j| h.get(i, j)).collect();
                row.push(g[i]);
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).max_by(|&r, &s| a[r][c].abs().total_cmp(&a[s][c].abs())).unwrap();
            a.swap(c, p);
            if a[c][c].abs() < 1e-300 {
                return x;
            }
            for r in (c + 1)..n {
                let f = a[r][c] / a[c][c];
                for k in c..=n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
        let mut s = vec![0.0; n];
        for r in (0..n).rev() {
            let acc: f64 = ((r + 1)..n).map(|k| a[r][k] * s[k]).sum();
            s[r] = (a[r][n] - acc) / a[r][r];
        }
        let f0 = e.model.eval(&x).unwrap();
        let mut t = 1.0;
        loop {
            let cand: Vec<f64> = x
                .iter()
                .zip(&s)
                .enumerate()
                .map(|(i, (xi, si))| (xi - t * si).clamp(e.bx.lower()[i], e.bx.upper()[i]))
                .collect();
            if e.model.eval(&cand).unwrap() <= f0 || t < 1e-12 {
                x = cand;
                break;
            }
            t *= 0.5;
        }
    }
    x
}

fn main() {
    for e in corpus_list() {
        let pts = dense_points(&e);
        let n = e.bx.dim();
        let mut glo = vec![f64::INFINITY; n];
        let mut ghi = vec![f64::NEG_INFINITY; n];
        let mut hlo = vec![f64::INFINITY; n * n];
        let mut hhi = vec![f64::NEG_INFINITY; n * n];
        let mut best = (f64::INFINITY, Vec::new());
        for p in &pts {
            let g = e.model.analytic_grad(p).unwrap().unwrap();
            for i in 0..n {
                glo[i] = glo[i].min(g[i]);
                ghi[i] = ghi[i].max(g[i]);
            }
            let h = e.model.analytic_hess(p).unwrap().unwrap();
            for (k, &v) in h.as_slice().iter().enumerate() {
                hlo[k] = hlo[k].min(v);
                hhi[k] = hhi[k].max(v);
            }
            let f = e.model.eval(p).unwrap();
            if f < best.0 {
                best = (f, p.clone());
            }
        }
        println!("== {} ({} grid points)", e.name, pts.len());
        for i in 0..n {
            println!(
                "  kappa[{}]  grid [{:+.12}, {:+.12}]  oracle [{:+.12}, {:+.12}]",
                i + 1,
                glo[i],
                ghi[i],
                e.kappa_oracle.lo()[i],
                e.kappa_oracle.hi()[i]
            );
        }
        for i in 0..n {
            for j in i..n {
                let k = i * n + j;
                println!(
                    "  M[{}][{}]    grid [{:+.12}, {:+.12}]  oracle [{:+.12}, {:+.12}]",
                    i + 1,
                    j + 1,
                    hlo[k],
                    hhi[k],
                    e.m_oracle.lo().get(i, j),
                    e.m_oracle.hi().get(i, j)
                );
            }
        }
        let refined = newton_refine(&e, best.1.clone());
        let value = e.model.eval(&refined).unwrap();
        println!("  grid min {:+.12} at {:?}", best.0, best.1);
        println!("  refined  {:+.16} at {:?}", value, refined);
        if let Some(km) = &e.known_min {
            println!("  shipped  {:+.16} at {:?}", km.value, km.point.coords());
        }
    }
}
