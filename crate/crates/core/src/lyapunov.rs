//! Monte Carlo estimates of the Lyapunov exponents of the zero-holonomy
//! cocycle along random continued-fraction expansions.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::monodromy::MonodromyPair;

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovConfig {
    /// Total digit-steps, split evenly over the trials.
    pub iterations: u64,
    pub trials: usize,
    pub seed: u64,
    pub digit_cap: u32,
    pub reorthonormalize_every: usize,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        Self { iterations: 1_000_000, trials: 32, seed: 0x5eed, digit_cap: 100, reorthonormalize_every: 1 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovEstimate {
    /// Nonnegative half of the spectrum, descending.
    pub exponents: Vec<f64>,
    pub standard_errors: Vec<f64>,
    /// The other half, descending; mirrors `exponents` for a symplectic cocycle.
    pub negative_exponents: Vec<f64>,
    /// Both exponents of the tautological block after normalization.
    pub tautological: [f64; 2],
    pub iterations: u64,
    pub trials: usize,
    pub seed: u64,
    pub digit_cap: u32,
    pub reorthonormalize_every: usize,
}

/// Continued-fraction digits of a uniformly random slope, sampled from the
/// exact conditional law given the previous denominators.
struct DigitProcess {
    /// `q_{n-1} / q_n`
    ratio: f64,
    cap: u32,
}

impl DigitProcess {
    fn new(cap: u32) -> Self {
        Self { ratio: 0.0, cap }
    }

    fn next(&mut self, rng: &mut impl Rng) -> u32 {
        let u: f64 = rng.gen();
        let t = u / (1.0 + self.ratio * (1.0 - u));
        let a = if t > 0.0 { (1.0 / t).floor().min(self.cap as f64) as u32 } else { self.cap };
        let a = a.clamp(1, self.cap);
        self.ratio = 1.0 / (a as f64 + self.ratio);
        a
    }
}

fn to_f64(m: &IntMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), &m.to_f64())
}

fn powers(m: &IntMatrix, cap: u32) -> Vec<DMatrix<f64>> {
    let mut out = Vec::with_capacity(cap as usize + 1);
    let mut acc = IntMatrix::identity(m.rows());
    out.push(to_f64(&acc));
    for _ in 0..cap {
        acc = &acc * m;
        out.push(to_f64(&acc));
    }
    out
}

/// Replaces `frame` by the `Q` of its QR decomposition (with positive
/// diagonal `R`) and adds `log R_ii` to `acc`.
fn reorthonormalize(frame: &mut DMatrix<f64>, acc: &mut [f64]) {
    let qr = frame.clone().qr();
    let r = qr.r();
    let mut q = qr.q();
    for i in 0..acc.len() {
        let d = r[(i, i)];
        acc[i] += d.abs().ln();
        if d < 0.0 {
            q.column_mut(i).neg_mut();
        }
    }
    *frame = q;
}

struct Trial {
    exponents: Vec<f64>,
    tautological: [f64; 2],
}

fn run_trial(
    gens: &[Vec<DMatrix<f64>>; 2],
    taut: &[Vec<DMatrix<f64>>; 2],
    steps: u64,
    cfg: &LyapunovConfig,
    stream: u64,
) -> Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let n = gens[0][0].nrows();
    let mut frame = DMatrix::<f64>::identity(n, n);
    let mut tframe = DMatrix::<f64>::identity(2, 2);
    let mut acc = vec![0.0; n];
    let mut tacc = [0.0; 2];
    let mut digits = DigitProcess::new(cfg.digit_cap);
    let every = cfg.reorthonormalize_every.max(1) as u64;
    for k in 0..steps {
        let a = digits.next(&mut rng) as usize;
        let side = (k % 2) as usize;
        frame = &gens[side][a] * &frame;
        tframe = &taut[side][a] * &tframe;
        if (k + 1) % every == 0 || k + 1 == steps {
            reorthonormalize(&mut frame, &mut acc);
            reorthonormalize(&mut tframe, &mut tacc);
        }
    }
    let top = tacc[0];
    let mut exponents: Vec<f64> = acc.iter().map(|x| x / top).collect();
    exponents.sort_by(|a, b| b.total_cmp(a));
    Trial { exponents, tautological: [1.0, tacc[1] / top] }
}

/// Neumaier-compensated sum.
fn compensated_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Exponents of the cocycle generated by `t` and `s` (acting on column
/// vectors), normalized by the tautological block `[[1,1],[0,1]]`,
/// `[[1,0],[1,1]]` driven by the same digits.
pub fn estimate_with_generators(t: &IntMatrix, s: &IntMatrix, cfg: &LyapunovConfig) -> Result<LyapunovEstimate> {
    if cfg.iterations == 0 || cfg.trials == 0 {
        return Err(Error::DomainError("iterations and trials must be positive".into()));
    }
    if cfg.digit_cap == 0 {
        return Err(Error::DomainError("digit cap must be positive".into()));
    }
    if !t.is_square() || t.rows() != s.rows() || t.rows() % 2 != 0 || t.rows() == 0 {
        return Err(Error::ShapeMismatch("generators must be square of equal even size".into()));
    }
    let steps = (cfg.iterations / cfg.trials as u64).max(1);
    let gens = [powers(t, cfg.digit_cap), powers(s, cfg.digit_cap)];
    let taut = [
        powers(&IntMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]), cfg.digit_cap),
        powers(&IntMatrix::from_i64_rows(&[&[1, 0], &[1, 1]]), cfg.digit_cap),
    ];
    let trials: Vec<Trial> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(&gens, &taut, steps, cfg, i))
        .collect();
    let n = t.rows();
    let k = trials.len() as f64;
    let mean: Vec<f64> = (0..n).map(|i| compensated_sum(trials.iter().map(|t| t.exponents[i])) / k).collect();
    let se: Vec<f64> = (0..n)
        .map(|i| {
            if trials.len() < 2 {
                return 0.0;
            }
            let var = compensated_sum(trials.iter().map(|t| (t.exponents[i] - mean[i]).powi(2))) / (k - 1.0);
            (var / k).sqrt()
        })
        .collect();
    let second = compensated_sum(trials.iter().map(|t| t.tautological[1])) / k;
    Ok(LyapunovEstimate {
        exponents: mean[..n / 2].to_vec(),
        standard_errors: se[..n / 2].to_vec(),
        negative_exponents: mean[n / 2..].to_vec(),
        tautological: [1.0, second],
        iterations: steps * cfg.trials as u64,
        trials: cfg.trials,
        seed: cfg.seed,
        digit_cap: cfg.digit_cap,
        reorthonormalize_every: cfg.reorthonormalize_every,
    })
}

pub fn estimate_exponents(mp: &MonodromyPair, cfg: &LyapunovConfig) -> Result<LyapunovEstimate> {
    if mp.split.dim() == 0 {
        return Err(Error::DomainError("zero-holonomy part is trivial".into()));
    }
    estimate_with_generators(&mp.restricted_t, &mp.restricted_s, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn small() -> LyapunovConfig {
        LyapunovConfig { iterations: 40_000, trials: 4, ..Default::default() }
    }

    #[test]
    fn deterministic() {
        let g = fixtures::generators();
        let a = estimate_with_generators(&g.alpha_t, &g.alpha_s, &small()).unwrap();
        let b = estimate_with_generators(&g.alpha_t, &g.alpha_s, &small()).unwrap();
        assert_eq!(a.exponents, b.exponents);
        assert_eq!(a.standard_errors, b.standard_errors);
    }

    #[test]
    fn spectrum_shape() {
        let g = fixtures::generators();
        let e = estimate_with_generators(&g.alpha_t, &g.alpha_s, &small()).unwrap();
        assert!(e.exponents.windows(2).all(|w| w[0] >= w[1]));
        assert!((e.tautological[1] + 1.0).abs() < 1e-3);
        for (p, q) in e.exponents.iter().zip(e.negative_exponents.iter().rev()) {
            assert!((p + q).abs() < 0.05, "{p} vs {q}");
        }
    }

    #[test]
    fn torus_block_is_tautological() {
        let t = IntMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
        let s = IntMatrix::from_i64_rows(&[&[1, 0], &[1, 1]]);
        let e = estimate_with_generators(&t, &s, &small()).unwrap();
        assert!((e.exponents[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_zero() {
        let g = fixtures::generators();
        let cfg = LyapunovConfig { iterations: 0, ..Default::default() };
        assert!(estimate_with_generators(&g.alpha_t, &g.alpha_s, &cfg).is_err());
    }
}
