use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// One independent random stream, identified by `(master_seed, stream_id)`.
///
/// Backed by ChaCha8 keyed with `seed_from_u64(master_seed)` and the stream
/// selected through ChaCha's 64-bit stream counter, so stream `k` never
/// overlaps stream `j`. Normals come from `rand_distr`'s ziggurat sampler.
/// Both crates are pinned to exact versions; changing either changes every
/// golden output.
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        Self { master_seed, stream_id, rng }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform integer in `[low, high]`.
    pub fn uniform_int(&mut self, low: u32, high: u32) -> u32 {
        self.rng.random_range(low..=high)
    }
}

/// Two standard normals with correlation `rho`: `z_c` is drawn first, then an
/// independent `z_perp`, and `z_v = rho z_c + sqrt(1 - rho^2) z_perp`.
pub fn correlated_pair(rng: &mut RngStream, rho: f64) -> (f64, f64) {
    debug_assert!(rho.abs() <= 1.0, "|rho| > 1");
    let z_c = rng.normal();
    let z_perp = rng.normal();
    (z_c, rho * z_c + (1.0 - rho * rho).max(0.0).sqrt() * z_perp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_correlation(seed: u64, rho: f64, n: usize) -> f64 {
        let mut rng = RngStream::new(seed, 0);
        let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let (x, y) = correlated_pair(&mut rng, rho);
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
        }
        let n = n as f64;
        let cov = sxy / n - sx / n * sy / n;
        cov / ((sxx / n - (sx / n).powi(2)) * (syy / n - (sy / n).powi(2))).sqrt()
    }

    #[test]
    fn same_seed_and_stream_repeat_exactly() {
        let mut a = RngStream::new(42, 7);
        let mut b = RngStream::new(42, 7);
        for _ in 0..1000 {
            assert_eq!(a.normal().to_bits(), b.normal().to_bits());
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = RngStream::new(42, 0);
        let mut b = RngStream::new(42, 1);
        let xs: Vec<f64> = (0..8).map(|_| a.uniform()).collect();
        let ys: Vec<f64> = (0..8).map(|_| b.uniform()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn perfect_correlation_copies_z_c() {
        let mut rng = RngStream::new(1, 0);
        for _ in 0..100 {
            let (c, v) = correlated_pair(&mut rng, 1.0);
            assert_eq!(c, v);
        }
    }

    #[test]
    fn pair_consumes_two_normals_z_c_first() {
        let mut a = RngStream::new(3, 2);
        let mut b = RngStream::new(3, 2);
        let (c, v) = correlated_pair(&mut a, 0.6);
        let z1 = b.normal();
        let z2 = b.normal();
        assert_eq!(c, z1);
        assert_eq!(v, 0.6 * z1 + 0.8 * z2);
        assert_eq!(a.normal(), b.normal());
    }

    #[test]
    fn sample_correlation_matches_rho() {
        for rho in [0.0, 0.6] {
            let r = sample_correlation(2024, rho, 1_000_000);
            assert!((r - rho).abs() < 0.005, "rho {rho}: {r}");
        }
    }

    #[test]
    fn negating_rho_negates_sample_correlation() {
        let a = sample_correlation(5, 0.6, 200_000);
        let b = sample_correlation(5, -0.6, 200_000);
        assert!((a + b).abs() < 0.01, "{a} {b}");
    }

    #[test]
    fn uniform_int_is_inclusive() {
        let mut rng = RngStream::new(9, 0);
        let mut seen = [false; 4];
        for _ in 0..1000 {
            let a = rng.uniform_int(2, 5);
            seen[(a - 2) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
