//! Monte Carlo simulation of the receiver SNR and eavesdropper SINR.
//!
//! Trials are split into fixed chunks of [`CHUNK_TRIALS`]. Chunk `j` of the
//! receiver link draws from word offset `2j` of the configured stream and
//! chunk `j` of the eavesdropper from offset `2j + 1`, so results do not
//! depend on how chunks are scheduled across threads. Per-chunk moments are
//! merged in chunk order.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fading::{DksmSampler, DoubleKappaMuShadowedParams, GammaSnrParams, GammaSnrSampler, RicianShadowedParams, RicianShadowedSampler, SamplerSeed};
use crate::secrecy::{secrecy_capacity, NetworkGeometry};

/// Trials per independently seeded chunk.
pub const CHUNK_TRIALS: u64 = 1 << 16;

/// Per-antenna fading law of one link; the mean SNR comes from the geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum FadingSpec {
    Dksm { c: f64, s: f64, mu: f64, kappa: f64 },
    Gamma { m: f64 },
    RicianShadowed { m: f64, xi: f64, sigma2: f64 },
}

impl FadingSpec {
    pub fn dksm(&self, mean_snr: f64) -> Result<DoubleKappaMuShadowedParams> {
        match *self {
            FadingSpec::Dksm { c, s, mu, kappa } => DoubleKappaMuShadowedParams::new(c, s, mu, kappa, mean_snr),
            _ => Err(domain("not a double kappa-mu shadowed link")),
        }
    }

    pub fn gamma(&self, mean_snr: f64) -> Result<GammaSnrParams> {
        match *self {
            FadingSpec::Gamma { m } => GammaSnrParams::from_mean(m, mean_snr),
            _ => Err(domain("not a Gamma link")),
        }
    }

    /// For Rician shadowed links `mean_snr` is the scale applied to the
    /// unit-noise channel power, as in [`RicianShadowedParams`].
    pub fn rician(&self, mean_snr: f64) -> Result<RicianShadowedParams> {
        match *self {
            FadingSpec::RicianShadowed { m, xi, sigma2 } => RicianShadowedParams::new(m, xi, sigma2, mean_snr),
            _ => Err(domain("not a Rician shadowed link")),
        }
    }

    pub fn sampler(&self, mean_snr: f64) -> Result<LinkSampler> {
        Ok(match self {
            FadingSpec::Dksm { .. } => LinkSampler::Dksm(self.dksm(mean_snr)?.sampler()),
            FadingSpec::Gamma { .. } => LinkSampler::Gamma(self.gamma(mean_snr)?.sampler()),
            FadingSpec::RicianShadowed { .. } => LinkSampler::Rician(self.rician(mean_snr)?.sampler()),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub enum LinkSampler {
    Dksm(DksmSampler),
    Gamma(GammaSnrSampler),
    Rician(RicianShadowedSampler),
}

impl LinkSampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            LinkSampler::Dksm(s) => s.draw(rng),
            LinkSampler::Gamma(s) => s.draw(rng),
            LinkSampler::Rician(s) => s.draw(rng),
        }
    }
}

/// Fading of one link: LOS law with probability `p_los`, NLOS law otherwise.
/// The state is drawn once per trial and shared by all antennas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkFading {
    pub p_los: f64,
    pub los: FadingSpec,
    pub nlos: FadingSpec,
}

impl LinkFading {
    pub fn single(spec: FadingSpec) -> Self {
        Self { p_los: 1.0, los: spec, nlos: spec }
    }

    fn sampler(&self, mean_snr: f64) -> Result<MixtureSampler> {
        if !(0.0..=1.0).contains(&self.p_los) {
            return Err(domain(format!("p_los must lie in [0, 1], got {}", self.p_los)));
        }
        Ok(MixtureSampler { p_los: self.p_los, los: self.los.sampler(mean_snr)?, nlos: self.nlos.sampler(mean_snr)? })
    }
}

#[derive(Debug, Clone, Copy)]
struct MixtureSampler {
    p_los: f64,
    los: LinkSampler,
    nlos: LinkSampler,
}

impl MixtureSampler {
    fn draw_sum<R: Rng + ?Sized>(&self, rng: &mut R, antennas: u32) -> f64 {
        let link = if self.p_los >= 1.0 || rng.random::<f64>() < self.p_los { &self.los } else { &self.nlos };
        (0..antennas).map(|_| link.draw(rng)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: SamplerSeed,
    pub geometry: NetworkGeometry,
    pub receiver: LinkFading,
    pub eve_source: LinkFading,
    pub jammer: LinkFading,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Usage("trials must be >= 1".into()));
        }
        self.geometry.validate()
    }

    fn chunks(&self) -> Vec<(u64, u64)> {
        let full = self.trials / CHUNK_TRIALS;
        let rest = self.trials % CHUNK_TRIALS;
        let mut out: Vec<(u64, u64)> = (0..full).map(|j| (j, CHUNK_TRIALS)).collect();
        if rest > 0 {
            out.push((full, rest));
        }
        out
    }

    fn receiver_sampler(&self) -> Result<MixtureSampler> {
        self.receiver.sampler(self.geometry.receiver_mean_snr()?)
    }

    fn eve_samplers(&self) -> Result<(MixtureSampler, Option<MixtureSampler>)> {
        let source = self.eve_source.sampler(self.geometry.eve_mean_snr()?)?;
        let jammer = if self.geometry.is_jammed() {
            Some(self.jammer.sampler(self.geometry.jammer_mean_inr()?)?)
        } else {
            None
        };
        Ok((source, jammer))
    }

    fn receiver_chunk(&self, chunk: u64) -> ChaCha8Rng {
        self.seed.chunk_rng(2 * chunk)
    }

    fn eve_chunk(&self, chunk: u64) -> ChaCha8Rng {
        self.seed.chunk_rng(2 * chunk + 1)
    }
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: u64,
}

impl Estimate {
    pub fn half_width_95(&self) -> f64 {
        1.96 * self.std_error
    }
}

/// Count, mean and centred second moment, mergeable in any grouping.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let mean = self.mean + d * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64 / n as f64);
        Moments { n, mean, m2 }
    }

    pub fn estimate(&self) -> Result<Estimate> {
        if self.n == 0 {
            return Err(Error::Usage("cannot estimate from an empty sample".into()));
        }
        let var = if self.n > 1 { (self.m2 / (self.n - 1) as f64).max(0.0) } else { 0.0 };
        Ok(Estimate { value: self.mean, std_error: (var / self.n as f64).sqrt(), trials: self.n })
    }
}

/// Capacity and outage moments of one link.
#[derive(Debug, Clone, Default, PartialEq)]
struct LinkMoments {
    capacity: Moments,
    outage: Vec<Moments>,
}

impl LinkMoments {
    fn new(thresholds: usize) -> Self {
        Self { capacity: Moments::default(), outage: vec![Moments::default(); thresholds] }
    }

    fn push(&mut self, g: f64, thresholds: &[f64]) {
        self.capacity.push(g.ln_1p() / std::f64::consts::LN_2);
        for (m, &th) in self.outage.iter_mut().zip(thresholds) {
            m.push(if g < th { 1.0 } else { 0.0 });
        }
    }

    fn merge(self, other: LinkMoments) -> LinkMoments {
        LinkMoments {
            capacity: self.capacity.merge(other.capacity),
            outage: self.outage.into_iter().zip(other.outage).map(|(a, b)| a.merge(b)).collect(),
        }
    }
}

/// Streaming estimates for one link: capacity and outage at each threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkEstimates {
    pub capacity: Estimate,
    pub outage: Vec<Estimate>,
}

impl LinkMoments {
    fn finish(&self) -> Result<LinkEstimates> {
        Ok(LinkEstimates {
            capacity: self.capacity.estimate()?,
            outage: self.outage.iter().map(Moments::estimate).collect::<Result<_>>()?,
        })
    }
}

fn run_chunks<F>(cfg: &SimConfig, thresholds: &[f64], draw_chunk: F) -> Result<LinkEstimates>
where
    F: Fn(u64, u64, &mut LinkMoments) + Sync,
{
    let parts: Vec<LinkMoments> = cfg
        .chunks()
        .into_par_iter()
        .map(|(chunk, n)| {
            let mut m = LinkMoments::new(thresholds.len());
            draw_chunk(chunk, n, &mut m);
            m
        })
        .collect();
    parts.into_iter().fold(LinkMoments::new(thresholds.len()), LinkMoments::merge).finish()
}

/// Receiver capacity and outage estimates without storing samples.
pub fn estimate_receiver(cfg: &SimConfig, thresholds: &[f64]) -> Result<LinkEstimates> {
    cfg.validate()?;
    let sampler = cfg.receiver_sampler()?;
    let n_ant = cfg.geometry.n;
    run_chunks(cfg, thresholds, |chunk, n, m| {
        let mut rng = cfg.receiver_chunk(chunk);
        for _ in 0..n {
            m.push(sampler.draw_sum(&mut rng, n_ant), thresholds);
        }
    })
}

/// Eavesdropper capacity and outage estimates without storing samples.
pub fn estimate_eve(cfg: &SimConfig, thresholds: &[f64]) -> Result<LinkEstimates> {
    cfg.validate()?;
    let (source, jammer) = cfg.eve_samplers()?;
    let (n_ant, k_ant) = (cfg.geometry.n, cfg.geometry.k);
    run_chunks(cfg, thresholds, |chunk, n, m| {
        let mut rng = cfg.eve_chunk(chunk);
        for _ in 0..n {
            m.push(eve_trial(&source, jammer.as_ref(), n_ant, k_ant, &mut rng), thresholds);
        }
    })
}

fn eve_trial<R: Rng + ?Sized>(source: &MixtureSampler, jammer: Option<&MixtureSampler>, n: u32, k: u32, rng: &mut R) -> f64 {
    let gi = source.draw_sum(rng, n);
    let gj = jammer.map_or(0.0, |j| j.draw_sum(rng, k));
    gi / (1.0 + gj)
}

/// Average secrecy capacity `max(C_R - C_E, 0)` from independent receiver
/// and eavesdropper estimates.
pub fn estimate_secrecy(receiver: &Estimate, eve: &Estimate) -> Estimate {
    Estimate {
        value: secrecy_capacity(receiver.value, eve.value),
        std_error: receiver.std_error.hypot(eve.std_error),
        trials: receiver.trials.min(eve.trials),
    }
}

fn collect_samples<F>(cfg: &SimConfig, draw: F) -> Vec<f64>
where
    F: Fn(u64, u64) -> Vec<f64> + Sync,
{
    let parts: Vec<Vec<f64>> = cfg.chunks().into_par_iter().map(|(chunk, n)| draw(chunk, n)).collect();
    parts.concat()
}

/// Per-trial receiver SNR: the sum of `N` per-antenna draws.
pub fn simulate_receiver_snr(cfg: &SimConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let sampler = cfg.receiver_sampler()?;
    let n_ant = cfg.geometry.n;
    Ok(collect_samples(cfg, |chunk, n| {
        let mut rng = cfg.receiver_chunk(chunk);
        (0..n).map(|_| sampler.draw_sum(&mut rng, n_ant)).collect()
    }))
}

/// Per-trial eavesdropper SINR `gamma_I / (1 + gamma_J)`.
pub fn simulate_eve_sinr(cfg: &SimConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let (source, jammer) = cfg.eve_samplers()?;
    let (n_ant, k_ant) = (cfg.geometry.n, cfg.geometry.k);
    Ok(collect_samples(cfg, |chunk, n| {
        let mut rng = cfg.eve_chunk(chunk);
        (0..n).map(|_| eve_trial(&source, jammer.as_ref(), n_ant, k_ant, &mut rng)).collect()
    }))
}

/// Fraction of samples strictly below `gamma_th`.
pub fn estimate_outage(samples: &[f64], gamma_th: f64) -> Result<Estimate> {
    let mut m = Moments::default();
    for &g in samples {
        m.push(if g < gamma_th { 1.0 } else { 0.0 });
    }
    m.estimate()
}

/// Sample mean of `log2(1 + gamma)`.
pub fn estimate_capacity(samples: &[f64]) -> Result<Estimate> {
    let mut m = Moments::default();
    for &g in samples {
        m.push(g.ln_1p() / std::f64::consts::LN_2);
    }
    m.estimate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometry(n: u32, k: u32) -> NetworkGeometry {
        NetworkGeometry {
            n,
            k,
            r_sr: 1.0,
            r_se: 1.0,
            r_je: 1.0,
            delta: 2.0,
            p_s: 1.0,
            p_j: 1.0,
            noise_var_r: 1.0,
            noise_var_e: 1.0,
        }
    }

    fn config(trials: u64, n: u32, k: u32) -> SimConfig {
        let gamma = LinkFading::single(FadingSpec::Gamma { m: 1.0 });
        SimConfig {
            trials,
            seed: SamplerSeed::new(42, 0),
            geometry: geometry(n, k),
            receiver: LinkFading::single(FadingSpec::Dksm { c: 3.0, s: 4.0, mu: 2.0, kappa: 1.5 }),
            eve_source: gamma,
            jammer: gamma,
        }
    }

    #[test]
    fn estimator_examples() {
        let e = estimate_outage(&[2.0, 3.0, 4.0], 1.0).unwrap();
        assert_eq!((e.value, e.std_error), (0.0, 0.0));
        let c = estimate_capacity(&[1.0; 10]).unwrap();
        assert_eq!((c.value, c.std_error), (1.0, 0.0));
        assert!(estimate_capacity(&[]).is_err());
        assert!(estimate_outage(&[], 1.0).is_err());
        assert!((c.half_width_95() - 0.0).abs() < 1e-300);
    }

    #[test]
    fn moments_merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut all = Moments::default();
        xs.iter().for_each(|&x| all.push(x));
        let (a, b) = xs.split_at(317);
        let mut ma = Moments::default();
        let mut mb = Moments::default();
        a.iter().for_each(|&x| ma.push(x));
        b.iter().for_each(|&x| mb.push(x));
        let merged = ma.merge(mb);
        assert!((merged.mean - all.mean).abs() < 1e-12);
        assert!((merged.m2 - all.m2).abs() < 1e-9);
    }

    #[test]
    fn streaming_and_materialized_agree() {
        let cfg = config(150_000, 1, 1);
        let samples = simulate_eve_sinr(&cfg).unwrap();
        let a = estimate_capacity(&samples).unwrap();
        let b = estimate_eve(&cfg, &[]).unwrap().capacity;
        assert!((a.value - b.value).abs() < 1e-12);
        assert_eq!(a.trials, 150_000);
        let r = simulate_receiver_snr(&cfg).unwrap();
        let o = estimate_outage(&r, 0.5).unwrap();
        let s = estimate_receiver(&cfg, &[0.5]).unwrap();
        assert!((o.value - s.outage[0].value).abs() < 1e-12);
    }

    #[test]
    fn reproducible_across_thread_counts() {
        let cfg = config(200_000, 2, 2);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| simulate_eve_sinr(&cfg).unwrap());
        let b = four.install(|| simulate_eve_sinr(&cfg).unwrap());
        assert_eq!(a, b);
        let a = one.install(|| estimate_receiver(&cfg, &[1.0]).unwrap());
        let b = four.install(|| estimate_receiver(&cfg, &[1.0]).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn two_antennas_double_the_mean() {
        let one = simulate_receiver_snr(&config(200_000, 1, 1)).unwrap();
        let two = simulate_receiver_snr(&config(200_000, 2, 1)).unwrap();
        let mut m1 = Moments::default();
        let mut m2 = Moments::default();
        one.iter().for_each(|&x| m1.push(x));
        two.iter().for_each(|&x| m2.push(x));
        let (e1, e2) = (m1.estimate().unwrap(), m2.estimate().unwrap());
        let se = (4.0 * e1.std_error * e1.std_error + e2.std_error * e2.std_error).sqrt();
        assert!((e2.value - 2.0 * e1.value).abs() < 3.0 * se);
    }

    #[test]
    fn no_jammer_means_source_only() {
        let mut cfg = config(50_000, 1, 0);
        let unjammed = simulate_eve_sinr(&cfg).unwrap();
        cfg.geometry.k = 1;
        cfg.geometry.p_j = 0.0;
        assert_eq!(simulate_eve_sinr(&cfg).unwrap(), unjammed);
        assert!(SimConfig { trials: 0, ..cfg }.validate().is_err());
    }
}
