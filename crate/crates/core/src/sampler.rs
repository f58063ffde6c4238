//! Seeded Monte Carlo realizations of the FTR channel.
//!
//! Each realization draws `zeta ~ Gamma(m, 1/m)`, two independent uniform
//! phases and a complex Gaussian diffuse term with `sigma = 1/sqrt 2` per
//! dimension, so `E|V_r|^2 = 1 + K`. The SNR is `|V_r|^2 * gamma_bar/(1+K)`.
//!
//! Work is split into fixed chunks of [`CHUNK`] realizations; chunk `c` uses
//! ChaCha8 stream `c` of the seed. Output is therefore identical for any
//! thread count.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{params_to_geometry, FtrParams, SpecularGeometry};

/// Realizations per RNG stream.
pub const CHUNK: usize = 1 << 16;

/// Magic bytes of the binary dump.
pub const BINARY_MAGIC: &[u8; 8] = b"FTRSMP01";

/// Diffuse standard deviation per dimension used by the sampler.
pub const SIGMA: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleConfig {
    pub seed: u64,
    pub n_samples: usize,
    /// Common offset added to both specular phases.
    pub phase_offset: f64,
}

impl SampleConfig {
    pub fn new(seed: u64, n_samples: usize) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::invalid("n_samples must be at least 1"));
        }
        Ok(SampleConfig { seed, n_samples, phase_offset: 0.0 })
    }

    pub fn with_phase_offset(mut self, offset: f64) -> Self {
        self.phase_offset = offset;
        self
    }
}

/// Symbol-energy-to-noise scaling that gives mean SNR `gamma_bar` with the
/// sampler's `sigma`: `gamma_bar / (2 sigma^2 (1+K))`.
pub fn es_over_n0(p: &FtrParams<f64>) -> f64 {
    p.gamma_bar() / (2.0 * SIGMA * SIGMA * (1.0 + p.k()))
}

/// SNR and envelope `|V_r|` per realization.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SampleBatch {
    pub snr: Vec<f64>,
    pub envelope: Vec<f64>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.snr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snr.is_empty()
    }

    pub fn mean_snr(&self) -> f64 {
        self.snr.iter().sum::<f64>() / self.len() as f64
    }
}

#[derive(Clone, Copy)]
enum Fluctuation {
    Common,
    Independent,
}

/// Realizations with one Gamma fluctuation shared by both specular waves.
pub fn sample_ftr(p: &FtrParams<f64>, cfg: &SampleConfig) -> Result<SampleBatch> {
    sample(p, cfg, Fluctuation::Common)
}

/// Realizations with independent fluctuations on the two specular waves.
pub fn sample_independent(p: &FtrParams<f64>, cfg: &SampleConfig) -> Result<SampleBatch> {
    sample(p, cfg, Fluctuation::Independent)
}

fn sample(p: &FtrParams<f64>, cfg: &SampleConfig, mode: Fluctuation) -> Result<SampleBatch> {
    if cfg.n_samples == 0 {
        return Err(Error::invalid("n_samples must be at least 1"));
    }
    let geo = params_to_geometry(p, SIGMA)?;
    let gamma = Gamma::new(p.m(), 1.0 / p.m()).map_err(|e| Error::invalid(e.to_string()))?;
    let scale = es_over_n0(p);
    let mut batch = SampleBatch { snr: vec![0.0; cfg.n_samples], envelope: vec![0.0; cfg.n_samples] };
    batch
        .snr
        .par_chunks_mut(CHUNK)
        .zip(batch.envelope.par_chunks_mut(CHUNK))
        .enumerate()
        .for_each(|(chunk, (snr, env))| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(chunk as u64);
            for (g, r) in snr.iter_mut().zip(env.iter_mut()) {
                let v2 = draw(&mut rng, &geo, &gamma, cfg.phase_offset, mode);
                *g = scale * v2;
                *r = v2.sqrt();
            }
        });
    Ok(batch)
}

/// One `|V_r|^2`.
#[inline]
fn draw(rng: &mut ChaCha8Rng, geo: &SpecularGeometry<f64>, gamma: &Gamma<f64>, offset: f64, mode: Fluctuation) -> f64 {
    let z1: f64 = gamma.sample(rng);
    let z2 = match mode {
        Fluctuation::Common => z1,
        Fluctuation::Independent => gamma.sample(rng),
    };
    let tau = std::f64::consts::TAU;
    let phi1 = rng.random::<f64>() * tau + offset;
    let phi2 = rng.random::<f64>() * tau + offset;
    let x: f64 = StandardNormal.sample(rng);
    let y: f64 = StandardNormal.sample(rng);
    let (a1, a2) = (z1.sqrt() * geo.v1(), z2.sqrt() * geo.v2());
    let (s1, c1) = phi1.sin_cos();
    let (s2, c2) = phi2.sin_cos();
    let re = a1 * c1 + a2 * c2 + SIGMA * x;
    let im = a1 * s1 + a2 * s2 + SIGMA * y;
    re * re + im * im
}

/// Sample mean of `exp(s * snr)` and its standard error, `s <= 0`.
pub fn empirical_mgf(batch: &SampleBatch, s: f64) -> Result<(f64, f64)> {
    if !(s <= 0.0) {
        return Err(Error::domain(format!("empirical_mgf needs s <= 0, got {s}")));
    }
    if batch.is_empty() {
        return Err(Error::invalid("empty sample batch"));
    }
    if s == 0.0 {
        return Ok((1.0, 0.0));
    }
    let n = batch.len() as f64;
    let (sum, sum_sq) = batch
        .snr
        .par_iter()
        .map(|&g| {
            let e = (s * g).exp();
            (e, e * e)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let mean = sum / n;
    let var = ((sum_sq / n - mean * mean) * n / (n - 1.0).max(1.0)).max(0.0);
    Ok((mean, (var / n).sqrt()))
}

/// Writes `snr,envelope` rows with a header.
pub fn write_csv<W: Write>(batch: &SampleBatch, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["snr", "envelope"])?;
    for (g, r) in batch.snr.iter().zip(&batch.envelope) {
        w.write_record([format!("{g:.16e}"), format!("{r:.16e}")])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the CSV written by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<SampleBatch> {
    let mut rd = csv::Reader::from_reader(input);
    let mut batch = SampleBatch::default();
    for row in rd.records() {
        let row = row?;
        let field = |i: usize| -> Result<f64> {
            row.get(i)
                .ok_or_else(|| Error::Io("short CSV row".into()))?
                .trim()
                .parse()
                .map_err(|e| Error::Io(format!("bad number in CSV: {e}")))
        };
        batch.snr.push(field(0)?);
        batch.envelope.push(field(1)?);
    }
    Ok(batch)
}

/// Columnar little-endian dump: magic, `n: u64`, `seed: u64`, `n` SNR values,
/// then `n` envelope values.
pub fn write_binary<W: Write>(batch: &SampleBatch, seed: u64, mut out: W) -> Result<()> {
    out.write_all(BINARY_MAGIC)?;
    out.write_all(&(batch.len() as u64).to_le_bytes())?;
    out.write_all(&seed.to_le_bytes())?;
    for column in [&batch.snr, &batch.envelope] {
        for v in column.iter() {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads a dump written by [`write_binary`], returning the batch and seed.
pub fn read_binary<R: Read>(mut input: R) -> Result<(SampleBatch, u64)> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != BINARY_MAGIC {
        return Err(Error::Io("not an FTR sample dump".into()));
    }
    let mut word = [0u8; 8];
    input.read_exact(&mut word)?;
    let n = u64::from_le_bytes(word) as usize;
    input.read_exact(&mut word)?;
    let seed = u64::from_le_bytes(word);
    let mut column = || -> Result<Vec<f64>> {
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            input.read_exact(&mut word)?;
            v.push(f64::from_le_bytes(word));
        }
        Ok(v)
    };
    let snr = column()?;
    let envelope = column()?;
    Ok((SampleBatch { snr, envelope }, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rayleigh_mean() {
        let p = FtrParams::new(0.0, 0.0, 1.0, 2.5).unwrap();
        let b = sample_ftr(&p, &SampleConfig::new(3, 200_000).unwrap()).unwrap();
        // exponential: std = mean
        assert!((b.mean_snr() - 2.5).abs() < 4.0 * 2.5 / (200_000f64).sqrt());
    }

    #[test]
    fn deterministic() {
        let p = FtrParams::new(4.0, 0.5, 2.0, 1.0).unwrap();
        let cfg = SampleConfig::new(11, CHUNK + 17).unwrap();
        assert_eq!(sample_ftr(&p, &cfg).unwrap(), sample_ftr(&p, &cfg).unwrap());
        let other = sample_ftr(&p, &SampleConfig::new(12, CHUNK + 17).unwrap()).unwrap();
        assert_ne!(sample_ftr(&p, &cfg).unwrap(), other);
    }

    #[test]
    fn envelope_and_snr_consistent() {
        let p = FtrParams::new(4.0, 0.5, 2.0, 3.0).unwrap();
        let b = sample_ftr(&p, &SampleConfig::new(1, 1000).unwrap()).unwrap();
        for (g, r) in b.snr.iter().zip(&b.envelope) {
            assert!((g - es_over_n0(&p) * r * r).abs() <= 1e-12 * g.max(1.0));
        }
    }

    #[test]
    fn empirical_mgf_edges() {
        let b = SampleBatch { snr: vec![0.5, 1.0, 2.0], envelope: vec![0.0; 3] };
        assert_eq!(empirical_mgf(&b, 0.0).unwrap(), (1.0, 0.0));
        assert!(empirical_mgf(&b, 0.1).is_err());
    }

    #[test]
    fn csv_and_binary_round_trip() {
        let p = FtrParams::new(4.0, 0.5, 2.0, 3.0).unwrap();
        let b = sample_ftr(&p, &SampleConfig::new(5, 257).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_csv(&b, &mut buf).unwrap();
        assert!(buf.starts_with(b"snr,envelope\n"));
        assert_eq!(read_csv(&buf[..]).unwrap(), b);
        let mut bin = Vec::new();
        write_binary(&b, 5, &mut bin).unwrap();
        assert_eq!(bin.len(), 24 + 2 * 8 * 257);
        assert_eq!(read_binary(&bin[..]).unwrap(), (b, 5));
        assert!(read_binary(&b"NOTMAGIC"[..]).is_err());
    }
}
