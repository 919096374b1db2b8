//! Closed-form diameter bounds and numeric verifiers for the recursions
//! behind them. Every evaluator returns a [`BoundReport`] that can be
//! recomputed from its recorded inputs.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub inputs: BTreeMap<String, f64>,
    pub value: f64,
    pub inequality: String,
    pub satisfied: Option<bool>,
    /// Secondary quantities computed along the way.
    pub details: BTreeMap<String, f64>,
}

impl BoundReport {
    fn new(name: &str, inputs: &[(&str, f64)], value: f64, inequality: impl Into<String>) -> Self {
        BoundReport {
            name: name.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
            inequality: inequality.into(),
            satisfied: None,
            details: BTreeMap::new(),
        }
    }

    fn detail(mut self, key: &str, v: f64) -> Self {
        self.details.insert(key.to_string(), v);
        self
    }

    /// Re-evaluates from the recorded inputs.
    pub fn recompute(&self) -> Result<BoundReport> {
        evaluate(&self.name, &self.inputs)
    }
}

fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// Distance to the stratum where a curve of length `L` is pinched.
pub fn wolpert_pinch_length(l: f64) -> Result<f64> {
    if !(l >= 0.0) {
        return domain(format!("curve length must be non-negative, got {l}"));
    }
    Ok((2.0 * PI * l).sqrt())
}

/// Bers constant bound for an `n`-punctured sphere.
pub fn bers_sphere_bound(n: u64) -> Result<f64> {
    if n < 4 {
        return domain(format!("need n >= 4, got {n}"));
    }
    Ok(30.0 * (2.0 * PI * (n - 2) as f64).sqrt())
}

/// The Ricci constant `C(eps)`. The bracket `1 - sech(eps/2)^6` is evaluated
/// as `t^2 (3 - 3t^2 + t^4)` with `t = tanh(eps/2)` to stay accurate as
/// `eps -> 0`.
pub fn teo_ricci_constant(eps: f64) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return domain(format!("need eps > 0, got {eps}"));
    }
    let t = (eps / 2.0).tanh();
    let t2 = t * t;
    let bracket = t2 * (3.0 - 3.0 * t2 + t2 * t2);
    Ok((4.0 * PI / 3.0 * bracket).powf(-0.5))
}

/// Direct transcription of the constant, for cross-checking.
pub fn teo_ricci_constant_direct(eps: f64) -> f64 {
    let e = eps.exp();
    let s = 4.0 * e / ((e + 1.0) * (e + 1.0));
    (4.0 * PI / 3.0 * (1.0 - s * s * s)).powf(-0.5)
}

/// Ricci lower bound `-2 C(eps)^2`.
pub fn teo_ricci_lower_bound(eps: f64) -> Result<f64> {
    let c = teo_ricci_constant(eps)?;
    Ok(-2.0 * c * c)
}

pub const LAMBDA_GRID: usize = 31;
pub const SPHERE_BASE_MAX: usize = 3;
pub const SPHERE_BAND_FROM: usize = 256;

#[derive(Clone, Debug, Serialize)]
pub struct SphereRecursion {
    pub n_max: usize,
    pub base: f64,
    /// Smallest `C` with `F(n) <= C sqrt(n)` for every `n`.
    pub closing_c: f64,
    /// Range of `F(n)/sqrt(n)` on `[SPHERE_BAND_FROM, n_max]`.
    pub band: (f64, f64),
    /// Share of `n` in the band range whose maximizing split is a grid end.
    pub endpoint_share: f64,
    /// Largest relative shortfall of the better grid end against the best
    /// split, over the band range.
    pub endpoint_gap: f64,
    /// Whether `G(n, x) + G(n, 1 - x)` is maximal at `x = 1/3` and has its
    /// only interior minimum at `x = 1/2`, on the grid, for all sampled `n`.
    pub g_profile_ok: bool,
    #[serde(skip)]
    pub profile: Vec<f64>,
}

fn lambda_grid() -> Vec<f64> {
    (0..LAMBDA_GRID)
        .map(|i| 1.0 / 3.0 + i as f64 / (3.0 * (LAMBDA_GRID - 1) as f64))
        .collect()
}

/// `G(n, x) = ((nx + 1)^{1/2} - (nx + 1)^{1/3})^2`.
pub fn g_profile(n: f64, x: f64) -> f64 {
    let y = n * x + 1.0;
    (y.sqrt() - y.cbrt()).powi(2)
}

fn g_profile_shape(n: f64) -> bool {
    let grid = lambda_grid();
    let sums: Vec<f64> = grid.iter().map(|&x| g_profile(n, x) + g_profile(n, 1.0 - x)).collect();
    let mid = LAMBDA_GRID / 2;
    let max_at_end = sums.iter().all(|&s| s <= sums[0] * (1.0 + 1e-12));
    let decreasing = (0..mid).all(|i| sums[i + 1] < sums[i]);
    let increasing = (mid..LAMBDA_GRID - 1).all(|i| sums[i + 1] > sums[i]);
    max_at_end && decreasing && increasing
}

/// Pointwise-maximal monotone `F` with
/// `F(n) = max over the split grid of sqrt(F(a)^2 + F(b)^2) + n^{1/4}`,
/// where `a = floor(lambda n) + 1`, `b = floor((1 - lambda) n) + 1`.
pub fn verify_sphere_recursion(n_max: usize, base: f64) -> Result<SphereRecursion> {
    if n_max < 16 {
        return domain(format!("need n_max >= 16, got {n_max}"));
    }
    let grid = lambda_grid();
    let mut f = vec![base; n_max + 1];
    let mut endpoint_hits = 0usize;
    let mut endpoint_gap = 0.0f64;
    for n in SPHERE_BASE_MAX + 1..=n_max {
        let nf = n as f64;
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0;
        let mut ends = 0.0f64;
        for (i, &lam) in grid.iter().enumerate() {
            let a = ((lam * nf).floor() as usize + 1).min(n - 1);
            let b = (((1.0 - lam) * nf).floor() as usize + 1).min(n - 1);
            let v = f[a].hypot(f[b]);
            if v > best {
                best = v;
                arg = i;
            }
            if i == 0 || i == LAMBDA_GRID - 1 {
                ends = ends.max(v);
            }
        }
        f[n] = (best + nf.powf(0.25)).max(f[n - 1]);
        if n >= SPHERE_BAND_FROM {
            if arg == 0 || arg == LAMBDA_GRID - 1 {
                endpoint_hits += 1;
            }
            endpoint_gap = endpoint_gap.max((best - ends) / best);
        }
    }
    let ratio = |n: usize| f[n] / (n as f64).sqrt();
    let closing_c = (1..=n_max).map(ratio).fold(0.0, f64::max);
    let band_from = SPHERE_BAND_FROM.min(n_max);
    let band = (band_from..=n_max).map(ratio).fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
    let samples = (band_from..=n_max).count().max(1);
    let mut g_ok = true;
    let mut n = 16.0;
    while n <= n_max as f64 {
        g_ok &= g_profile_shape(n);
        n *= 2.0;
    }
    Ok(SphereRecursion {
        n_max,
        base,
        closing_c,
        band,
        endpoint_share: endpoint_hits as f64 / samples as f64,
        endpoint_gap,
        g_profile_ok: g_ok,
        profile: f,
    })
}

pub const GENUS_BASE_MAX: usize = 4;
pub const GENUS_BAND_FROM: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct GenusRecursion {
    pub n_max: usize,
    pub d: f64,
    pub base: f64,
    /// Smallest `C` with `F(n) <= C sqrt(n) ln(n)` for `n >= 3`.
    pub closing_c: f64,
    /// Range of `F(n)/(sqrt(n) ln n)` on `[GENUS_BAND_FROM, n_max]`.
    pub band: (f64, f64),
    /// `F(n)/(sqrt(n) ln n)` at `n_max`.
    pub tail_ratio: f64,
    /// Whether `sqrt(n/2+1) ln(n/2+1) + sqrt(n) <= sqrt(n) ln(n)` held for
    /// every `n` in `(13, n_max]`.
    pub induction_step_ok: bool,
    #[serde(skip)]
    pub profile: Vec<f64>,
}

/// The inductive step of the genus recursion at `n`.
pub fn genus_induction_step(n: f64) -> (f64, f64) {
    let h = n / 2.0 + 1.0;
    (h.sqrt() * h.ln() + n.sqrt(), n.sqrt() * n.ln())
}

/// Pointwise-maximal monotone `F` with
/// `F(n) = sqrt(2) F(floor(n/2) + 1) + D sqrt(n)`.
pub fn verify_genus_recursion(n_max: usize, d: f64, base: f64) -> Result<GenusRecursion> {
    if !(d >= 0.0) {
        return domain(format!("need D >= 0, got {d}"));
    }
    if n_max < GENUS_BAND_FROM {
        return domain(format!("need n_max >= {GENUS_BAND_FROM}, got {n_max}"));
    }
    let mut f = vec![base; n_max + 1];
    for n in GENUS_BASE_MAX + 1..=n_max {
        let v = std::f64::consts::SQRT_2 * f[n / 2 + 1] + d * (n as f64).sqrt();
        f[n] = v.max(f[n - 1]);
    }
    let ratio = |n: usize| f[n] / ((n as f64).sqrt() * (n as f64).ln());
    let closing_c = (3..=n_max).map(ratio).fold(0.0, f64::max);
    let band = (GENUS_BAND_FROM..=n_max).map(ratio).fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
    let induction_step_ok = (14..=n_max).all(|n| {
        let (lhs, rhs) = genus_induction_step(n as f64);
        lhs <= rhs
    });
    Ok(GenusRecursion {
        n_max,
        d,
        base,
        closing_c,
        band,
        tail_ratio: ratio(n_max),
        induction_step_ok,
        profile: f,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StrataBound {
    /// `(b / sqrt 2) sqrt(n - 4)`.
    pub linear: f64,
    /// `sqrt(floor((n - 4)/2)) b`, from iterating `F(n+2) >= sqrt(F(n)^2 + b^2)`.
    pub telescoped: f64,
}

/// Lower bound on the diameter for `n` punctures from `b`, the diameter in
/// the four-punctured case.
pub fn lower_bound_from_strata(b: f64, n: u64) -> Result<StrataBound> {
    if !(b > 0.0) {
        return domain(format!("need b > 0, got {b}"));
    }
    if n < 4 {
        return domain(format!("need n >= 4, got {n}"));
    }
    Ok(StrataBound {
        linear: b / std::f64::consts::SQRT_2 * ((n - 4) as f64).sqrt(),
        telescoped: (((n - 4) / 2) as f64).sqrt() * b,
    })
}

/// Iterates the strata recursion step by step from `F(4) = F(5) = 0`.
pub fn strata_iterated(b: f64, n: u64) -> f64 {
    let mut f = 0.0f64;
    let mut m = 4 + (n % 2);
    while m + 2 <= n {
        f = f.hypot(b);
        m += 2;
    }
    f
}

/// The linear form that the telescoped bound dominates: it uses `n - 4` for
/// even `n` and `n - 5` for odd `n`.
pub fn strata_linear_floor(b: f64, n: u64) -> f64 {
    let even = n - 4 - (n % 2);
    b / std::f64::consts::SQRT_2 * (even as f64).sqrt()
}

/// `ln` of `2 pi^{N/2} / Gamma(N/2) * ((N - 1)/alpha)^{(N-1)/2}`.
pub fn log_ball_prefactor(dim: u64, alpha: f64) -> f64 {
    let nf = dim as f64;
    LN_2 + nf / 2.0 * PI.ln() - ln_gamma(nf / 2.0) + (nf - 1.0) / 2.0 * ((nf - 1.0) / alpha).ln()
}

/// The prefactor without logarithms; overflows for large `N`.
pub fn ball_prefactor_direct(dim: u64, alpha: f64) -> f64 {
    let nf = dim as f64;
    2.0 * PI.powf(nf / 2.0) / gamma(nf / 2.0) * ((nf - 1.0) / alpha).powf((nf - 1.0) / 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BishopGromov {
    pub dim: u64,
    pub alpha: f64,
    pub log_prefactor: f64,
    /// Lower bound on the diameter.
    pub d: f64,
    /// `D / (sqrt(g) ln g)`.
    pub ratio: f64,
    /// `sqrt(6) D / (v_eps sqrt(g) ln g)`.
    pub normalized: f64,
}

/// Diameter lower bound from a volume lower bound and the Ricci bound:
/// `D >= [ln(lambda) + log_vol - ln(prefactor)] / sqrt(alpha (N - 1))`
/// with `N = 6g - 6`, `alpha = v_eps^{-2}`.
pub fn bishop_gromov_diameter_lb(g: u64, log_vol: f64, lambda: f64, v_eps: f64) -> Result<BishopGromov> {
    if g < 2 {
        return domain(format!("need g >= 2, got {g}"));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return domain(format!("lambda must lie in (0, 1), got {lambda}"));
    }
    if !(v_eps > 0.0) {
        return domain(format!("need v_eps > 0, got {v_eps}"));
    }
    let dim = 6 * g - 6;
    let alpha = v_eps.powi(-2);
    let log_prefactor = log_ball_prefactor(dim, alpha);
    let d = (lambda.ln() + log_vol - log_prefactor) / (alpha * (dim - 1) as f64).sqrt();
    let gf = g as f64;
    let ratio = d / (gf.sqrt() * gf.ln());
    Ok(BishopGromov {
        dim,
        alpha,
        log_prefactor,
        d,
        ratio,
        normalized: 6f64.sqrt() * ratio / v_eps,
    })
}

/// The volume surrogate `2 g ln g`.
pub fn log_volume_surrogate(g: u64) -> f64 {
    let gf = g as f64;
    2.0 * gf * gf.ln()
}

/// Band for `D(g)/(sqrt(g) ln g)` over `g` in
/// [`BISHOP_GROMOV_G_RANGE`] with the volume surrogate, `lambda = 1/2` and
/// `v_eps = 1`. Calibrated by scanning the range; the bound is vacuous
/// (negative) below `g` of about 70 and the ratio increases throughout.
pub const BISHOP_GROMOV_BAND: (f64, f64) = (-0.60, 0.50);
pub const BISHOP_GROMOV_G_RANGE: (u64, u64) = (10, 10_000);

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitTransfer {
    /// `diam_0n + 2 sqrt(2 pi g A_g) n^{1/4}`.
    pub upper: f64,
    /// `2 sqrt(2 pi g A_g) n^{-1/4}`, the correction to `diam/sqrt(n)`.
    pub correction: f64,
    /// `sqrt(k) diam_0n`, the lower bound for the diameter at `k n`.
    pub product_lower: f64,
}

pub fn limit_transfer_check(g: u64, n: u64, a_g: f64, diam_0n: f64, k: u64) -> Result<LimitTransfer> {
    if g == 0 || n == 0 || k == 0 || !(a_g > 0.0) || !(diam_0n >= 0.0) {
        return domain("limit transfer inputs must be positive");
    }
    let nf = n as f64;
    let scale = 2.0 * (2.0 * PI * g as f64 * a_g).sqrt();
    Ok(LimitTransfer {
        upper: diam_0n + scale * nf.powf(0.25),
        correction: scale * nf.powf(-0.25),
        product_lower: (k as f64).sqrt() * diam_0n,
    })
}

/// Length of a short curve on a closed surface of genus `g + 1`,
/// `4 ln(8 pi g)`.
pub fn cusp_curve_length(g: u64) -> Result<f64> {
    if g == 0 {
        return domain("need g >= 1");
    }
    Ok(4.0 * (8.0 * PI * g as f64).ln())
}

/// Cost of pinching that curve at both ends, `2 sqrt(2 pi ln(8 pi g))`.
pub fn cusp_pinch_cost(g: u64) -> Result<f64> {
    if g == 0 {
        return domain("need g >= 1");
    }
    Ok(2.0 * (2.0 * PI * (8.0 * PI * g as f64).ln()).sqrt())
}

pub const BOUND_NAMES: &[&str] = &[
    "wolpert",
    "bers",
    "teo",
    "sphere_recursion",
    "genus_recursion",
    "strata",
    "bishop_gromov",
    "limit_transfer",
    "cusp",
];

fn param(params: &BTreeMap<String, f64>, key: &str, default: Option<f64>) -> Result<f64> {
    match (params.get(key), default) {
        (Some(&v), _) => Ok(v),
        (None, Some(d)) => Ok(d),
        (None, None) => domain(format!("missing parameter {key}")),
    }
}

fn int_param(params: &BTreeMap<String, f64>, key: &str, default: Option<f64>) -> Result<u64> {
    let v = param(params, key, default)?;
    if v < 0.0 || v.fract() != 0.0 || v > 1e15 {
        return domain(format!("parameter {key} must be a non-negative integer, got {v}"));
    }
    Ok(v as u64)
}

/// Evaluates a bound by name. Parameter names follow the formulas: `L`,
/// `n`, `eps`, `n_max`, `base`, `D`, `b`, `g`, `log_vol`, `lambda`, `v_eps`,
/// `A_g`, `diam`, `k`, `tol`.
pub fn evaluate(name: &str, params: &BTreeMap<String, f64>) -> Result<BoundReport> {
    let report = match name {
        "wolpert" => {
            let l = param(params, "L", None)?;
            BoundReport::new(name, &[("L", l)], wolpert_pinch_length(l)?, "d(X, S_gamma) <= sqrt(2 pi L)")
        }
        "bers" => {
            let n = int_param(params, "n", None)?;
            BoundReport::new(name, &[("n", n as f64)], bers_sphere_bound(n)?, "B_{0,n} <= 30 sqrt(2 pi (n - 2))")
        }
        "teo" => {
            let eps = param(params, "eps", None)?;
            let c = teo_ricci_constant(eps)?;
            BoundReport::new(name, &[("eps", eps)], c, "Ric >= -2 C(eps)^2")
                .detail("ricci_lower", -2.0 * c * c)
                .detail("asymptote_ratio", c * PI.sqrt() * eps)
        }
        "sphere_recursion" => {
            let n_max = int_param(params, "n_max", Some(1e5))?;
            let base = param(params, "base", Some(1.0))?;
            let r = verify_sphere_recursion(n_max as usize, base)?;
            let mut rep = BoundReport::new(
                name,
                &[("n_max", n_max as f64), ("base", base)],
                r.closing_c,
                "F(n) <= C sqrt(n)",
            )
            .detail("band_low", r.band.0)
            .detail("band_high", r.band.1)
            .detail("endpoint_share", r.endpoint_share)
            .detail("endpoint_gap", r.endpoint_gap);
            rep.satisfied = Some(r.closing_c.is_finite() && r.g_profile_ok);
            rep
        }
        "genus_recursion" => {
            let n_max = int_param(params, "n_max", Some(1e5))?;
            let d = param(params, "D", Some(1.0))?;
            let base = param(params, "base", Some(1.0))?;
            let r = verify_genus_recursion(n_max as usize, d, base)?;
            let mut rep = BoundReport::new(
                name,
                &[("n_max", n_max as f64), ("D", d), ("base", base)],
                r.closing_c,
                "F(n) <= C sqrt(n) ln(n)",
            )
            .detail("band_low", r.band.0)
            .detail("band_high", r.band.1)
            .detail("tail_ratio", r.tail_ratio);
            rep.satisfied = Some(r.closing_c.is_finite() && r.induction_step_ok);
            rep
        }
        "strata" => {
            let b = param(params, "b", None)?;
            let n = int_param(params, "n", None)?;
            let s = lower_bound_from_strata(b, n)?;
            let mut rep = BoundReport::new(name, &[("b", b), ("n", n as f64)], s.telescoped, "F(n + 2) >= sqrt(F(n)^2 + b^2)")
                .detail("linear", s.linear)
                .detail("linear_floor", strata_linear_floor(b, n));
            rep.satisfied = Some(s.telescoped >= strata_linear_floor(b, n));
            rep
        }
        "bishop_gromov" => {
            let g = int_param(params, "g", None)?;
            let log_vol = param(params, "log_vol", Some(log_volume_surrogate(g)))?;
            let lambda = param(params, "lambda", Some(0.5))?;
            let v_eps = param(params, "v_eps", Some(1.0))?;
            let r = bishop_gromov_diameter_lb(g, log_vol, lambda, v_eps)?;
            BoundReport::new(
                name,
                &[("g", g as f64), ("log_vol", log_vol), ("lambda", lambda), ("v_eps", v_eps)],
                r.d,
                "lambda Vol <= prefactor * exp(sqrt(alpha (N - 1)) D)",
            )
            .detail("log_prefactor", r.log_prefactor)
            .detail("ratio", r.ratio)
            .detail("normalized", r.normalized)
        }
        "limit_transfer" => {
            let g = int_param(params, "g", None)?;
            let n = int_param(params, "n", None)?;
            let a_g = param(params, "A_g", None)?;
            let diam = param(params, "diam", Some((n as f64).sqrt()))?;
            let k = int_param(params, "k", Some(2.0))?;
            let tol = param(params, "tol", Some(1.0))?;
            let r = limit_transfer_check(g, n, a_g, diam, k)?;
            let mut rep = BoundReport::new(
                name,
                &[("g", g as f64), ("n", n as f64), ("A_g", a_g), ("diam", diam), ("k", k as f64), ("tol", tol)],
                r.correction,
                "diam(M_{g,n}) <= diam(M_{0,n}) + 2 sqrt(2 pi g A_g) n^{1/4}",
            )
            .detail("upper", r.upper)
            .detail("product_lower", r.product_lower);
            rep.satisfied = Some(r.correction < tol);
            rep
        }
        "cusp" => {
            let g = int_param(params, "g", None)?;
            BoundReport::new(name, &[("g", g as f64)], cusp_curve_length(g)?, "systole <= 4 ln(8 pi g)")
                .detail("pinch_cost", cusp_pinch_cost(g)?)
        }
        other => return domain(format!("unknown bound {other}; known: {}", BOUND_NAMES.join(", "))),
    };
    Ok(report)
}

/// CSV of `evaluate(name, ...)` over values of one parameter.
pub fn sweep(name: &str, base: &BTreeMap<String, f64>, key: &str, values: &[f64]) -> Result<String> {
    let mut out = format!("{key},value,satisfied\n");
    for &v in values {
        let mut params = base.clone();
        params.insert(key.to_string(), v);
        let r = evaluate(name, &params)?;
        let sat = r.satisfied.map_or(String::new(), |s| s.to_string());
        out.push_str(&format!("{v},{},{sat}\n", r.value));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn wolpert_values() {
        assert_eq!(wolpert_pinch_length(0.0).unwrap(), 0.0);
        assert!(close(wolpert_pinch_length(2.0 * PI).unwrap(), 2.0 * PI, 1e-12));
        assert!(close(wolpert_pinch_length(1.0).unwrap(), 2.5066282746310002, 1e-12));
        assert!(wolpert_pinch_length(-1.0).is_err());
    }

    #[test]
    fn bers_values() {
        assert!(close(bers_sphere_bound(4).unwrap(), 30.0 * (4.0 * PI).sqrt(), 1e-12));
        assert!(bers_sphere_bound(2).is_err());
        assert!((4..100).all(|n| bers_sphere_bound(n + 1).unwrap() > bers_sphere_bound(n).unwrap()));
    }

    #[test]
    fn teo_forms_agree() {
        for eps in [0.1, 0.5, 1.0, 2.0] {
            assert!(close(teo_ricci_constant(eps).unwrap(), teo_ricci_constant_direct(eps), 1e-10));
        }
        let c1 = teo_ricci_constant(1.0).unwrap();
        assert!((c1 - 0.6818).abs() < 5e-5, "{c1}");
        assert!(teo_ricci_constant(0.0).is_err());
    }

    #[test]
    fn strata_small_cases() {
        let s = lower_bound_from_strata(1.0, 6).unwrap();
        assert_eq!(s.telescoped, 1.0);
        assert_eq!(lower_bound_from_strata(1.0, 4).unwrap().telescoped, 0.0);
        for n in 4..200 {
            assert!(close(strata_iterated(1.5, n), lower_bound_from_strata(1.5, n).unwrap().telescoped, 1e-12) || n < 6);
        }
    }

    #[test]
    fn reports_recompute() {
        let mut p = BTreeMap::new();
        p.insert("g".to_string(), 50.0);
        let r = evaluate("bishop_gromov", &p).unwrap();
        assert_eq!(r.recompute().unwrap(), r);
        assert!(evaluate("nope", &p).is_err());
    }
}
