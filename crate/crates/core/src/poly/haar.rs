use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Haar-distributed orthogonal `m x m` matrix, deterministic in `seed`.
pub fn haar_sample_orthogonal(m: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_sample_with_rng(m, &mut rng)
}

/// Gaussian matrix, QR factorization, then the sign of each column of `Q`
/// flipped to make `diag(R)` positive. Without the sign fix the result is
/// not Haar distributed.
pub fn haar_sample_with_rng<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DMatrix<f64> {
    assert!(m >= 1, "dimension must be positive");
    let z = DMatrix::<f64>::from_fn(m, m, |_, _| rng.sample(StandardNormal));
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_and_deterministic() {
        for m in 1..6 {
            let q = haar_sample_orthogonal(m, 42 + m as u64);
            let defect = (q.transpose() * &q - DMatrix::identity(m, m)).abs().max();
            assert!(defect <= 1e-12, "m={m} defect={defect}");
            assert_eq!(q, haar_sample_orthogonal(m, 42 + m as u64));
        }
        assert_ne!(haar_sample_orthogonal(3, 1), haar_sample_orthogonal(3, 2));
    }

    #[test]
    fn first_column_second_moment() {
        // E[(Q e1)_1^2] = 1/m on the sphere
        let m = 4;
        let n = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let xs: Vec<f64> = (0..n)
            .map(|_| haar_sample_with_rng(m, &mut rng)[(0, 0)].powi(2))
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - 0.25).abs() < 3.0 * se, "mean={mean} se={se}");
    }
}
