use nalgebra::DMatrix;
use std::time::Instant;

fn main() {
    for &n in &[512usize, 1024, 2048] {
        let mut a = DMatrix::<f64>::zeros(n, n);
        let mut s: u64 = 12345;
        for i in 0..n {
            for j in 0..=i {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let v = (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        let t = Instant::now();
        let se = a.clone().symmetric_eigen();
        println!("symmetric_eigen n={} took {:?} (ev0={:.3})", n, t.elapsed(), se.eigenvalues[0]);
        let t = Instant::now();
        let svd = a.svd(false, false);
        println!("svd(no uv) n={} took {:?} (sv0={:.3})", n, t.elapsed(), svd.singular_values[0]);
    }
}
