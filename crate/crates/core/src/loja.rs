//! Sampling points of a variety near the origin and estimating the best
//! exponent `k` in `|φ| ≤ C |a|^k` by a log–log fit.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Values below this are treated as underflow and the point is dropped.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;
/// Relative residual a sampled point must meet on its defining equation.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// RMS residual (natural-log units) above which an estimate is unreliable.
pub const RELIABILITY_THRESHOLD: f64 = 0.25;

/// How points are produced.
#[derive(Clone, Debug)]
pub enum SamplerKind {
    /// `t ↦ (Σ c t^e, …)`, one list of `(e, c)` per coordinate.
    Parametrized(Vec<Vec<(u32, f64)>>),
    /// Zeros of `equation`, solving for coordinate `solve_for` after the
    /// others are drawn at the sampling radius.
    Hypersurface {
        equation: Polynomial,
        solve_for: usize,
    },
}

#[derive(Clone, Debug)]
pub struct VarietySampler {
    pub kind: SamplerKind,
    /// Decreasing radii in `(0, 1]`.
    pub radii: Vec<f64>,
    pub samples_per_radius: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplePoint {
    pub radius: f64,
    pub index: usize,
    #[serde(serialize_with = "serialize_coords")]
    pub coords: Vec<Complex64>,
}

fn serialize_coords<S: serde::Serializer>(
    c: &[Complex64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(c.len()))?;
    for z in c {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

/// `count` radii from `hi` down to `lo`, evenly spaced in log scale.
pub fn geometric_radii(hi: f64, lo: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![hi];
    }
    let (a, b) = (hi.ln(), lo.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

impl VarietySampler {
    pub fn parametrized(
        components: Vec<Vec<(u32, f64)>>,
        radii: Vec<f64>,
        samples: usize,
        seed: u64,
    ) -> Self {
        VarietySampler {
            kind: SamplerKind::Parametrized(components),
            radii,
            samples_per_radius: samples,
            seed,
        }
    }

    /// The monomial curve `t ↦ (t^{c_1}, …, t^{c_n})`.
    pub fn monomial_curve(exponents: &[u32], radii: Vec<f64>, samples: usize, seed: u64) -> Self {
        let comps = exponents.iter().map(|&e| vec![(e, 1.0)]).collect();
        Self::parametrized(comps, radii, samples, seed)
    }

    pub fn hypersurface(
        equation: Polynomial,
        solve_for: usize,
        radii: Vec<f64>,
        samples: usize,
        seed: u64,
    ) -> Self {
        VarietySampler {
            kind: SamplerKind::Hypersurface {
                equation,
                solve_for,
            },
            radii,
            samples_per_radius: samples,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.radii.is_empty() || self.samples_per_radius == 0 {
            return Err(Error::Validation("sampler needs radii and samples".into()));
        }
        if self.radii.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
            return Err(Error::Validation("radii must lie in (0, 1]".into()));
        }
        if self.radii.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Validation(
                "radii must be strictly decreasing".into(),
            ));
        }
        Ok(())
    }
}

/// Points on the variety, grouped by radius in the given order and indexed
/// within each radius. The same seed yields the same points.
///
/// The parameter (or free coordinates) is drawn with uniformly random
/// argument at the weighted radius: `|t| = ρ^{1/c}`, `c` the smallest
/// positive exponent (or weight), so the point has size about `ρ`.
pub fn sample_variety(s: &VarietySampler) -> Result<Vec<SamplePoint>> {
    s.validate()?;
    let mut out = Vec::with_capacity(s.radii.len() * s.samples_per_radius);
    for (ri, &rho) in s.radii.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        rng.set_stream(ri as u64);
        for index in 0..s.samples_per_radius {
            let coords = match &s.kind {
                SamplerKind::Parametrized(comps) => sample_param(comps, rho, &mut rng)?,
                SamplerKind::Hypersurface {
                    equation,
                    solve_for,
                } => sample_hypersurface(equation, *solve_for, rho, &mut rng)?,
            };
            out.push(SamplePoint {
                radius: rho,
                index,
                coords,
            });
        }
    }
    Ok(out)
}

fn random_phase(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn sample_param(
    comps: &[Vec<(u32, f64)>],
    rho: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Complex64>> {
    let c = comps
        .iter()
        .flatten()
        .map(|&(e, _)| e)
        .filter(|&e| e > 0)
        .min()
        .ok_or_else(|| Error::Sampling("parametrization is constant".into()))?;
    let t = random_phase(rng) * rho.powf(1.0 / c as f64);
    Ok(comps
        .iter()
        .map(|terms| terms.iter().map(|&(e, k)| t.powu(e) * k).sum())
        .collect())
}

fn sample_hypersurface(
    f: &Polynomial,
    solve_for: usize,
    rho: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Complex64>> {
    let ring = f.ring();
    let n = ring.nvars();
    if solve_for >= n {
        return Err(Error::Validation("solve variable out of range".into()));
    }
    let weights = ring.weights();
    let wmin = (0..n)
        .filter(|&i| i != solve_for)
        .map(|i| weights[i])
        .min()
        .unwrap_or(1);
    let tau = rho.powf(1.0 / wmin as f64);
    let mut point = vec![Complex64::new(0.0, 0.0); n];
    for (i, x) in point.iter_mut().enumerate() {
        if i != solve_for {
            *x = random_phase(rng) * tau.powi(weights[i] as i32);
        }
    }
    // Coefficients of the univariate polynomial in the solved variable.
    let mut coeffs: Vec<Complex64> = Vec::new();
    for (e, c) in f.terms() {
        let k = e[solve_for] as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Complex64::new(0.0, 0.0));
        }
        let mut v = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        for (i, &p) in e.as_slice().iter().enumerate() {
            if i != solve_for && p > 0 {
                v *= point[i].powu(p);
            }
        }
        coeffs[k] += v;
    }
    while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(Error::Sampling(format!(
            "no branch: the equation does not involve {} at this point",
            ring.names()[solve_for]
        )));
    }
    let roots = durand_kerner(&coeffs);
    let root = roots
        .into_iter()
        .min_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("degree at least one");
    point[solve_for] = root;
    let (val, scale) = eval_with_scale(f, &point);
    // Written so that a NaN residual also fails.
    let within = val.norm() <= RESIDUAL_TOLERANCE * scale.max(f64::MIN_POSITIVE);
    if !within {
        return Err(Error::Sampling(format!(
            "root solve missed tolerance: residual {:e} against scale {:e}",
            val.norm(),
            scale
        )));
    }
    Ok(point)
}

/// All complex roots of `Σ c_k x^k` (ascending coefficients, nonzero top).
fn durand_kerner(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lead = c[d];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let bound = 1.0 + monic[..d].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * bound).collect();
    let eval = |x: Complex64| {
        monic
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &k| acc * x + k)
    };
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-300, 0.0);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / z[i].norm().max(1e-300));
        }
        if delta < 1e-15 {
            break;
        }
    }
    // Newton polish for the smallest roots, where relative error matters.
    let dmonic: Vec<Complex64> = (1..=d).map(|k| monic[k] * k as f64).collect();
    let deval = |x: Complex64| {
        dmonic
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &k| acc * x + k)
    };
    for r in z.iter_mut() {
        for _ in 0..20 {
            let dv = deval(*r);
            if dv.norm() == 0.0 {
                break;
            }
            let step = eval(*r) / dv;
            *r -= step;
            if step.norm() <= 1e-17 * r.norm() {
                break;
            }
        }
    }
    z
}

/// Value of `p` at a complex point.
pub fn eval_complex(p: &Polynomial, point: &[Complex64]) -> Complex64 {
    eval_with_scale(p, point).0
}

/// Value and `Σ |term|`, the natural scale for relative residuals.
fn eval_with_scale(p: &Polynomial, point: &[Complex64]) -> (Complex64, f64) {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (e, c) in p.terms() {
        let mut v = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        for (i, &k) in e.as_slice().iter().enumerate() {
            if k > 0 {
                v *= point[i].powu(k);
            }
        }
        scale += v.norm();
        acc += v;
    }
    (acc, scale)
}

/// Largest relative residual of the points on the given equations.
pub fn max_residual(points: &[SamplePoint], equations: &[Polynomial]) -> f64 {
    points
        .iter()
        .flat_map(|pt| {
            equations.iter().map(move |f| {
                let (v, s) = eval_with_scale(f, &pt.coords);
                if s == 0.0 {
                    v.norm()
                } else {
                    v.norm() / s
                }
            })
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LojaEstimate {
    pub slope: f64,
    /// Fitted `log C`.
    pub intercept: f64,
    /// RMS deviation of the fit, natural-log units.
    pub residual: f64,
    pub n_points: usize,
    pub radii_range: (f64, f64),
    pub reliable: bool,
    /// `(log |a|, log |φ|)` for each point used.
    #[serde(skip)]
    pub pairs: Vec<(f64, f64)>,
}

impl LojaEstimate {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("log_a,log_phi\n");
        for (x, y) in &self.pairs {
            s.push_str(&format!("{x:.17e},{y:.17e}\n"));
        }
        s
    }
}

/// Least-squares slope of `log |φ|` against `log Σ_j |a_j|` over the points.
///
/// Needs at least 20 points over at least 3 radii; points where either side
/// is below [`UNDERFLOW_FLOOR`] are dropped, and at least half must remain.
pub fn loja_exponent_estimate(
    phi: &Polynomial,
    a: &[Polynomial],
    points: &[SamplePoint],
) -> Result<LojaEstimate> {
    if a.is_empty() {
        return Err(Error::Validation("the ideal a needs a generator".into()));
    }
    let mut radii: Vec<f64> = points.iter().map(|p| p.radius).collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    if points.len() < 20 || radii.len() < 3 {
        return Err(Error::Validation(format!(
            "need at least 20 points over 3 radii, got {} over {}",
            points.len(),
            radii.len()
        )));
    }
    let mut pairs = Vec::with_capacity(points.len());
    let mut used_radii: Vec<f64> = Vec::new();
    for pt in points {
        let phi_abs = eval_complex(phi, &pt.coords).norm();
        let a_abs: f64 = a.iter().map(|g| eval_complex(g, &pt.coords).norm()).sum();
        if phi_abs > UNDERFLOW_FLOOR && a_abs > UNDERFLOW_FLOOR {
            pairs.push((a_abs.ln(), phi_abs.ln()));
            used_radii.push(pt.radius);
        }
    }
    if pairs.len() * 2 < points.len() {
        return Err(Error::Estimation(format!(
            "phi or a vanishes on {} of {} points",
            points.len() - pairs.len(),
            points.len()
        )));
    }
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 1e-12 * n * (1.0 + mx * mx) {
        return Err(Error::Estimation("|a| is constant over the sample".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pairs
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    if !slope.is_finite() {
        return Err(Error::Estimation("non-finite slope".into()));
    }
    let lo = used_radii.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = used_radii.iter().copied().fold(0.0, f64::max);
    Ok(LojaEstimate {
        slope,
        intercept,
        residual,
        n_points: pairs.len(),
        radii_range: (lo, hi),
        reliable: residual <= RELIABILITY_THRESHOLD,
        pairs,
    })
}
