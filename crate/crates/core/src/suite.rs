//! The regression matrix over all fixtures, its report and plot data.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fixtures::{self, FixtureTag, MultiFixture};
use crate::geometry::{
    dist_point_set, hausdorff, kuratowski_dist, stereo_lift, stereo_project, PointSet, TOL_POLE, TOL_PT,
};
use crate::lojafit::{
    check_g_bounded, check_star_condition, check_star_values, fit_exponent, fit_pairs, value_pair_cloud,
    FitConfig, PairSample, PowerLawFit, DEFAULT_BOUND_PROBE, DEFAULT_C_GAP, DEFAULT_EPS_STAR,
};
use crate::medial::{
    check_closed, closest_points, m_multifunction, m_preimage_rounds, medial_axis, medial_loja, n_preimage_rounds,
    n_region, n_region_rounds, ClosedSetSample, ClosedVerdict, MedialKind, MedialLojaOptions, NRound, ResolvedSet,
};
use crate::multifun::{
    classify_semicontinuity, default_radii, multifun_loja_fit, multifun_pairs, preimage, PreimageKind,
    SampledMultifunction, SetMetric, DEFAULT_TOL_LIM,
};
use crate::zeroset::{gamma_zero_set, DEFAULT_DELTA, DEFAULT_EPS};

pub const SCHEMA: u32 = 1;

pub const CRITERIA: [&str; 13] = [
    "metric axioms",
    "stereographic round trips",
    "empty-set convention",
    "envelope fit correctness",
    "ex4_9 falsification",
    "ex3_8 detection",
    "ex3_9 detection",
    "preimage lattice",
    "ex5_14 / ex5_16 / ex5_18 reproduction",
    "multifunction inequality instances",
    "closedness matrix",
    "medial axis",
    "determinism",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureReport {
    pub tag: FixtureTag,
    pub params: BTreeMap<String, f64>,
    pub reproduced: bool,
    pub detail: Value,
}

/// Tidy `(x, y, series)` rows for external plotting.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PlotData {
    pub envelope: Vec<(f64, f64, String)>,
    pub axis: Vec<(f64, f64, String)>,
    pub cloud: Vec<(f64, f64, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: Vec<String>,
    pub seed: u64,
    pub pass: bool,
    pub criteria: Vec<CriterionResult>,
    pub fixtures: Vec<FixtureReport>,
    pub plots: PlotData,
    /// Wall-clock seconds per step; the only nondeterministic field.
    pub timings: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn to_json(&self, with_timings: bool) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if !with_timings {
            if let Value::Object(m) = &mut v {
                m.remove("timings");
            }
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }

    pub fn failed(&self) -> Vec<usize> {
        self.criteria.iter().filter(|c| !c.pass).map(|c| c.id).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub only: Option<FixtureTag>,
    pub params: BTreeMap<String, f64>,
    pub command: Vec<String>,
    pub cfg: FitConfig,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            only: None,
            params: BTreeMap::new(),
            command: Vec::new(),
            cfg: FitConfig::default(),
        }
    }
}

fn fit_json(fit: &PowerLawFit) -> Value {
    json!({
        "alpha": fit.alpha,
        "C": fit.c,
        "feasible": fit.feasible,
        "degenerate": fit.degenerate,
        "n_samples": fit.n_samples,
        "min_residual": fit.min_residual,
    })
}

fn verdict_json(v: &ClosedVerdict) -> Value {
    match v.witness() {
        None => json!("consistent-with-closed"),
        Some(p) => json!({ "witness": p }),
    }
}

/// `dist_H(S, [lo, hi])` for a finite `S ⊂ R`.
pub fn hausdorff_to_interval(s: &[f64], lo: f64, hi: f64) -> f64 {
    if s.is_empty() {
        return f64::INFINITY;
    }
    let mut v = s.to_vec();
    v.sort_by(f64::total_cmp);
    let outside = v.iter().map(|x| (lo - x).max(x - hi).max(0.0)).fold(0.0, f64::max);
    let mut cover = (v[0] - lo).max(hi - v[v.len() - 1]).max(0.0);
    for w in v.windows(2) {
        cover = cover.max(0.5 * (w[1] - w[0]));
    }
    outside.max(cover)
}

fn random_set(rng: &mut ChaCha8Rng, min: usize, max: usize) -> PointSet {
    let n = rng.gen_range(min..=max);
    let pts = (0..n)
        .map(|_| vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)])
        .collect();
    PointSet::new(2, pts).expect("points in R^2")
}

fn c1_metric_axioms(seed: u64) -> Result<CriterionResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_h = f64::NEG_INFINITY;
    let mut worst_k = f64::NEG_INFINITY;
    let mut asym = 0usize;
    let mut empties = 0usize;
    for _ in 0..1000 {
        let (a, b, c) = (random_set(&mut rng, 1, 5), random_set(&mut rng, 1, 5), random_set(&mut rng, 1, 5));
        let (ab, ba) = (hausdorff(&a, &b)?, hausdorff(&b, &a)?);
        let (bc, ac) = (hausdorff(&b, &c)?, hausdorff(&a, &c)?);
        asym += usize::from(ab != ba);
        worst_h = worst_h.max(ac - ab - bc);

        let (a, b, c) = (random_set(&mut rng, 0, 4), random_set(&mut rng, 0, 4), random_set(&mut rng, 0, 4));
        empties += [&a, &b, &c].iter().filter(|s| s.is_empty()).count();
        let (ab, ba) = (kuratowski_dist(&a, &b)?, kuratowski_dist(&b, &a)?);
        let (bc, ac) = (kuratowski_dist(&b, &c)?, kuratowski_dist(&a, &c)?);
        asym += usize::from(ab != ba);
        worst_k = worst_k.max(ac - ab - bc);
    }
    Ok(CriterionResult {
        id: 1,
        title: CRITERIA[0],
        pass: asym == 0 && worst_h <= 1e-9 && worst_k <= 1e-9 && empties > 0,
        detail: json!({
            "triples": 1000,
            "asymmetric_pairs": asym,
            "worst_triangle_excess_hausdorff": worst_h,
            "worst_triangle_excess_kuratowski": worst_k,
            "empty_sets_drawn": empties,
        }),
    })
}

fn c2_stereo(seed: u64) -> Result<CriterionResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
    let mut err_plane: f64 = 0.0;
    let mut err_sphere: f64 = 0.0;
    for _ in 0..5000 {
        let y = vec![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        let back = stereo_project(&stereo_lift(&y))?;
        err_plane = err_plane.max(y.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    let mut n = 0;
    while n < 5000 {
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(0.1..=1.0).contains(&r) {
            continue;
        }
        let x: Vec<f64> = v.iter().map(|c| c / r).collect();
        if x[2] >= 1.0 - 1e-3 {
            continue;
        }
        let back = stereo_lift(&stereo_project(&x)?);
        err_sphere = err_sphere.max(x.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        n += 1;
    }
    let south = stereo_project(&[0.0, 0.0, -1.0])?;
    let south_ok = south.iter().all(|c| *c == 0.0);
    let lift_origin = stereo_lift(&[0.0, 0.0]);
    Ok(CriterionResult {
        id: 2,
        title: CRITERIA[1],
        pass: err_plane <= 1e-12 && err_sphere <= 1e-12 && south_ok && lift_origin == [0.0, 0.0, -1.0],
        detail: json!({
            "points": 10_000,
            "max_err_project_lift": err_plane,
            "max_err_lift_project": err_sphere,
            "south_pole_image": south,
            "pole_tolerance": TOL_POLE,
        }),
    })
}

fn c3_empty() -> Result<CriterionResult> {
    let d = kuratowski_dist(&PointSet::empty(1), &PointSet::from_scalars(&[0.0]))?;
    Ok(CriterionResult {
        id: 3,
        title: CRITERIA[2],
        pass: d == 3.0,
        detail: json!({ "kuratowski_empty_vs_origin": d }),
    })
}

fn c4_envelope(seed: u64, plots: &mut PlotData) -> Result<CriterionResult> {
    let d = Domain::interval(0.0, 1.0)?;
    let f: crate::expr::PiecewiseFn = "x1".parse()?;
    let mut rows = Vec::new();
    let mut pass = true;
    for k in 1..=3u32 {
        let g: crate::expr::PiecewiseFn = format!("x1^{k}").parse()?;
        let fit = fit_exponent(&f, &g, &d, 10_000, seed)?;
        let target = 1.0 / k as f64;
        let ok = fit.feasible && (fit.alpha - target).abs() <= 0.05 * target && (fit.c - 1.0).abs() <= 0.05;
        pass &= ok;
        if k == 2 {
            let data = PairSample::evaluate(&f, &g, &d, 10_000, seed, Exec::auto())?;
            for i in (0..data.len()).step_by(10) {
                if data.f[i] > 0.0 && data.g[i] > 0.0 {
                    let lg = data.g[i].ln();
                    plots.envelope.push((lg, data.f[i].ln(), "samples".into()));
                    plots.envelope.push((lg, fit.c.ln() + fit.alpha * lg, "fit".into()));
                }
            }
        }
        rows.push(json!({ "k": k, "expected_alpha": target, "fit": fit_json(&fit), "pass": ok }));
    }
    Ok(CriterionResult {
        id: 4,
        title: CRITERIA[3],
        pass,
        detail: json!({ "samples": 10_000, "fits": rows }),
    })
}

fn ex4_9_fit(m: usize, seed: u64, cfg: &FitConfig) -> Result<PowerLawFit> {
    let p = fixtures::ex4_9(m)?;
    let data = PairSample::evaluate(&p.f, &p.g, &p.domain, 2000 * m, seed, Exec::auto())?;
    Ok(fit_pairs(&data, cfg, Exec::auto()))
}

fn c5_ex4_9(seed: u64, cfg: &FitConfig) -> Result<CriterionResult> {
    let mut alphas = Vec::new();
    let mut rows = Vec::new();
    for m in [3usize, 5, 8, 12] {
        let fit = ex4_9_fit(m, seed, cfg)?;
        alphas.push(if fit.feasible { fit.alpha } else { f64::INFINITY });
        rows.push(json!({ "M": m, "fit": fit_json(&fit) }));
    }
    let increasing = alphas.windows(2).all(|w| w[0] < w[1]);
    let last = alphas[3];
    Ok(CriterionResult {
        id: 5,
        title: CRITERIA[4],
        pass: increasing && last > 6.0 && last.is_finite(),
        detail: json!({ "fits": rows, "strictly_increasing": increasing }),
    })
}

fn c6_ex3_8(seed: u64) -> Result<CriterionResult> {
    let p = fixtures::ex3_8();
    let bounded = check_g_bounded(&p.g, &p.domain, 10_000, seed, DEFAULT_BOUND_PROBE)?;
    let star = check_star_condition(&p.f, &p.g, &p.domain, 10_000, seed, DEFAULT_C_GAP)?;
    Ok(CriterionResult {
        id: 6,
        title: CRITERIA[5],
        pass: !bounded.pass && bounded.sup_g > 1e6 && star.pass,
        detail: json!({ "g_bounded": bounded, "star_condition": star }),
    })
}

fn c7_ex3_9(seed: u64) -> Result<CriterionResult> {
    let p = fixtures::ex3_9();
    let star = check_star_condition(&p.f, &p.g, &p.domain, 10_000, seed, DEFAULT_C_GAP)?;
    let near0 = star.witness.as_ref().is_some_and(|w| w[0].abs() <= 1e-2);
    let mut zero = Vec::new();
    let mut zs_ok = true;
    for (name, h) in [("f", &p.f), ("g", &p.g)] {
        let est = gamma_zero_set(h, &p.domain, DEFAULT_EPS, DEFAULT_DELTA, 10_000, seed)?;
        let xs: Vec<f64> = est.candidates.iter().map(|c| c[0]).collect();
        let d = hausdorff_to_interval(&xs, 0.0, 1.0);
        let ok = d <= est.delta + est.pitch;
        zs_ok &= ok;
        zero.push(json!({
            "fn": name,
            "candidates": est.candidates.len(),
            "hausdorff_to_unit_interval": d,
            "bound": est.delta + est.pitch,
            "contains_zero": est.candidates.contains(&[0.0], TOL_PT),
        }));
    }
    Ok(CriterionResult {
        id: 7,
        title: CRITERIA[6],
        pass: !star.pass && near0 && zs_ok,
        detail: json!({ "star_condition": star, "zero_sets": zero }),
    })
}

fn lattice_holds(f: &SampledMultifunction, a: &[f64]) -> Result<bool> {
    let s = preimage(f, a, PreimageKind::Strong)?;
    let l = preimage(f, a, PreimageKind::Lower)?;
    let u = preimage(f, a, PreimageKind::Upper)?;
    let w = preimage(f, a, PreimageKind::Weak)?;
    let strong_ok = s.is_subset_of(&l, TOL_PT) && s.is_subset_of(&u, TOL_PT);
    let weak_ok = l.is_subset_of(&w, TOL_PT) && u.is_subset_of(&w, TOL_PT);
    let has_a = [&s, &l, &u, &w].iter().all(|p| p.contains(a, TOL_PT));
    Ok(strong_ok && weak_ok && has_a)
}

fn random_multifunction(rng: &mut ChaCha8Rng) -> Result<(SampledMultifunction, Vec<f64>)> {
    let n = rng.gen_range(10..=40);
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let vals: Vec<Vec<f64>> = (0..4)
            .filter(|_| rng.gen_bool(0.5))
            .map(|v| vec![v as f64])
            .collect();
        samples.push((vec![i as f64 / 10.0], PointSet::new(1, vals)?));
    }
    let a_idx = rng.gen_range(0..n);
    if samples[a_idx].1.is_empty() {
        samples[a_idx].1 = PointSet::from_scalars(&[rng.gen_range(0..4) as f64]);
    }
    let a = samples[a_idx].0.clone();
    Ok((SampledMultifunction::new(1, 1, samples)?, a))
}

struct Fixtures {
    f: MultiFixture,
    g: MultiFixture,
    h: MultiFixture,
}

impl Fixtures {
    fn build() -> Result<Self> {
        Ok(Self {
            f: fixtures::ex5_14(1001)?,
            g: fixtures::ex5_16(701)?,
            h: fixtures::ex5_18(1001)?,
        })
    }
}

fn two_point_m(k: &Domain, per_axis: usize) -> Result<SampledMultifunction> {
    let x = fixtures::ex6_4();
    m_multifunction(&x, k.grid(per_axis)?, x.default_tol_med(), Exec::auto())
}

fn c8_lattice(seed: u64, fx: &Fixtures) -> Result<CriterionResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1A77);
    let mut random_fail = 0;
    for _ in 0..100 {
        let (mf, a) = random_multifunction(&mut rng)?;
        random_fail += usize::from(!lattice_holds(&mf, &a)?);
    }
    let m = two_point_m(&Domain::interval(-1.0, 2.0)?, 301)?;
    let cases: Vec<(&str, &SampledMultifunction, f64)> = vec![
        ("ex5_14", &fx.f.mf, 1.0),
        ("ex5_14", &fx.f.mf, 4.0),
        ("ex5_16", &fx.g.mf, 0.0),
        ("ex5_16", &fx.g.mf, 4.0),
        ("ex5_18", &fx.h.mf, 1.0),
        ("ex5_18", &fx.h.mf, 0.0),
        ("ex6_4", &m, 0.25),
        ("ex6_4", &m, 0.5),
    ];
    let mut rows = Vec::new();
    let mut fixture_fail = 0;
    for (name, mf, a) in cases {
        let ok = lattice_holds(mf, &[a])?;
        fixture_fail += usize::from(!ok);
        rows.push(json!({ "fixture": name, "a": a, "holds": ok }));
    }
    Ok(CriterionResult {
        id: 8,
        title: CRITERIA[7],
        pass: random_fail == 0 && fixture_fail == 0,
        detail: json!({ "random_multifunctions": 100, "random_failures": random_fail, "fixtures": rows }),
    })
}

/// The H multifunction on `(−1, 1]` with the sequence `−1 + 1/n` added, and
/// its star check for `dist_H(H(x), H(1))` against `d(x, H⁻¹(H(1)))`.
fn h_star(fx: &Fixtures) -> Result<Value> {
    let gen = fx.h.mf.generator().cloned().ok_or(Error::Invalid("generator".into()))?;
    let xs = fixtures::ex5_18_points(1001, 10_000)?;
    let mf = SampledMultifunction::generate(1, 1, xs, gen, Exec::auto())?;
    let k = Domain::interval(-1.0, 1.0)?;
    let data = multifun_pairs(&mf, &[1.0], &k, PreimageKind::Strong, SetMetric::Hausdorff, Exec::auto())?;
    let star = check_star_values(&data, DEFAULT_C_GAP, DEFAULT_EPS_STAR)?;
    Ok(serde_json::to_value(star)?)
}

fn c9_section5(fx: &Fixtures) -> Result<CriterionResult> {
    let radii = default_radii();
    let pf = fx.f.domain.pitch(1001);
    let fa = preimage(&fx.f.mf, &[1.0], PreimageKind::Strong)?;
    let d_f = dist_point_set(&[4.0], &fa)?;
    let (cls_f, _) = classify_semicontinuity(&fx.f.mf, &[4.0], &radii, DEFAULT_TOL_LIM)?;

    let pg = fx.g.domain.pitch(701);
    let ga = preimage(&fx.g.mf, &[0.0], PreimageKind::Strong)?;
    let d_g = dist_point_set(&[4.0], &ga)?;
    let (cls_g, _) = classify_semicontinuity(&fx.g.mf, &[4.0], &radii, DEFAULT_TOL_LIM)?;

    let ph = fx.h.domain.pitch(1001);
    let one = PointSet::from_scalars(&[1.0]);
    let mut h_rows = Vec::new();
    let mut h_ok = true;
    for kind in PreimageKind::ALL {
        let p = preimage(&fx.h.mf, &[1.0], kind)?;
        let d = hausdorff(&p, &one)?;
        h_ok &= d <= ph;
        h_rows.push(json!({
            "kind": kind.to_string(),
            "points": p.iter().map(|x| x[0]).collect::<Vec<_>>(),
            "hausdorff_to_{1}": d,
        }));
    }
    let star = h_star(fx)?;
    let star_fails = star["pass"] == json!(false);

    let f_ok = (d_f - 3.0).abs() <= pf && cls_f.upper;
    let g_ok = (d_g - 4.0).abs() <= pg && cls_g.lower;
    Ok(CriterionResult {
        id: 9,
        title: CRITERIA[8],
        pass: f_ok && g_ok && h_ok && star_fails,
        detail: json!({
            "F": { "d_4_strong_F1": d_f, "pitch": pf, "flags_at_4": cls_f.flags() },
            "G": { "d_4_strong_G0": d_g, "pitch": pg, "flags_at_4": cls_g.flags() },
            "H": { "preimages_at_1": h_rows, "pitch": ph, "all_equal_{1}": h_ok, "star_condition": star },
        }),
    })
}

fn c10_instances(seed: u64, fx: &Fixtures, cfg: &FitConfig) -> Result<CriterionResult> {
    let x = fixtures::ex6_4();
    let opts = MedialLojaOptions {
        samples: 1001,
        seed,
        cfg: *cfg,
        ..MedialLojaOptions::default()
    };
    let mut rows = Vec::new();
    let mut pass = true;
    let mut push = |name: &str, fit: PowerLawFit| {
        let ok = fit.feasible && (fit.c > 0.0 || fit.degenerate);
        pass &= ok;
        rows.push(json!({ "instance": name, "fit": fit_json(&fit), "pass": ok }));
    };
    push(
        "upper preimage, two-point m, a = 0.5, K = [0.3, 0.7]",
        medial_loja(&x, &[0.5], &Domain::interval(0.3, 0.7)?, MedialKind::M, SetMetric::Hausdorff, &opts)?,
    );
    push(
        "upper preimage, two-point m, a = 0.25, K = [0, 0.45]",
        medial_loja(&x, &[0.25], &Domain::interval(0.0, 0.45)?, MedialKind::M, SetMetric::Hausdorff, &opts)?,
    );
    let k_f = Domain::interval(3.5, 4.5)?;
    push(
        "upper preimage, ex5_14, a = 4, K = [3.5, 4.5]",
        multifun_loja_fit(&fx.f.mf, &[4.0], &k_f, PreimageKind::Upper, SetMetric::Hausdorff, cfg)?,
    );
    let k_h = Domain::interval(-0.5, 1.0)?;
    let h = SampledMultifunction::generate(
        1,
        1,
        k_h.grid(1001)?,
        fx.h.mf.generator().cloned().ok_or(Error::Invalid("generator".into()))?,
        Exec::auto(),
    )?;
    push(
        "strong preimage, ex5_18, a = 1, K = [-0.5, 1]",
        multifun_loja_fit(&h, &[1.0], &k_h, PreimageKind::Strong, SetMetric::Hausdorff, cfg)?,
    );
    Ok(CriterionResult {
        id: 10,
        title: CRITERIA[9],
        pass,
        detail: json!({ "samples": 1001, "instances": rows }),
    })
}

struct ClosedCase {
    name: String,
    verdict: ClosedVerdict,
    expect: Option<Vec<f64>>,
    pitch: f64,
}

impl ClosedCase {
    fn new(name: impl Into<String>, rounds: &[ResolvedSet], expect: Option<Vec<f64>>) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            verdict: check_closed(rounds)?,
            expect,
            pitch: rounds.last().map_or(0.0, |r| r.pitch),
        })
    }

    fn ok(&self) -> bool {
        match (&self.expect, self.verdict.witness()) {
            (None, None) => true,
            (Some(e), Some(w)) => crate::geometry::dist(e, w) <= 2.0 * self.pitch,
            _ => false,
        }
    }

    fn json(&self) -> Value {
        json!({
            "case": self.name,
            "verdict": verdict_json(&self.verdict),
            "expected_witness": self.expect,
            "finest_pitch": self.pitch,
            "pass": self.ok(),
        })
    }
}

fn circle_rounds(base: usize, rounds: usize) -> Result<Vec<NRound>> {
    (0..rounds)
        .map(|k| {
            let x = fixtures::prop6_circle(base << k)?;
            let pitch = x.pitch().unwrap_or(TOL_PT);
            Ok(NRound {
                x,
                window: Domain::parse("-2,2;-2,2")?,
                pitch,
            })
        })
        .collect()
}

fn exact_rounds(x: &ClosedSetSample, window: &str, rounds: usize) -> Result<Vec<NRound>> {
    let window = Domain::parse(window)?;
    Ok((0..rounds)
        .map(|_| NRound {
            x: x.clone(),
            window: window.clone(),
            pitch: TOL_PT,
        })
        .collect())
}

fn closedness_cases() -> Result<Vec<ClosedCase>> {
    let line = Domain::interval(-1.0, 2.0)?;
    let plane = Domain::parse("-2,2;-2,2")?;
    let two = fixtures::ex6_4();
    let tp = fixtures::twopoint();
    let circle = fixtures::prop6_circle(64)?;
    let mut cases = Vec::new();

    let m_cases: Vec<(&str, &ClosedSetSample, Vec<f64>, &Domain, usize)> = vec![
        ("ex6_4", &two, vec![0.25], &line, 13),
        ("ex6_4", &two, vec![0.5], &line, 13),
        ("twopoint", &tp, vec![-0.5, 0.3], &plane, 9),
        ("twopoint", &tp, vec![0.0, 0.5], &plane, 9),
        ("prop6_circle", &circle, vec![0.5, 0.0], &plane, 9),
    ];
    for (name, x, a, d, base) in &m_cases {
        let tol = x.default_tol_med();
        for (kind, label) in [(PreimageKind::Upper, "m_*(m(a))"), (PreimageKind::Weak, "m^#(m(a))")] {
            let rounds = m_preimage_rounds(x, a, kind, d, *base, 4, tol)?;
            cases.push(ClosedCase::new(format!("{label} {name} a={a:?}"), &rounds, None)?);
        }
    }
    let strong = m_preimage_rounds(&two, &[0.25], PreimageKind::Strong, &line, 13, 4, TOL_PT)?;
    cases.push(ClosedCase::new("m^-1(m(a)) ex6_4 a=[0.25]", &strong, Some(vec![0.5]))?);

    let n_cases: Vec<(&str, &ClosedSetSample, Vec<f64>, &Domain, usize)> = vec![
        ("ex6_4", &two, vec![0.0], &line, 13),
        ("ex6_4", &two, vec![1.0], &line, 13),
        ("twopoint", &tp, vec![1.0, 0.0], &plane, 9),
        ("prop6_circle", &circle, vec![1.0, 0.0], &plane, 9),
    ];
    for (name, x, a, d, base) in &n_cases {
        let rounds = n_region_rounds(x, a, d, *base, 4, x.default_tol_med())?;
        cases.push(ClosedCase::new(format!("N(a) {name} a={a:?}"), &rounds, None)?);
    }

    let lower: Vec<(String, Vec<NRound>, Vec<f64>)> = vec![
        ("ex6_4".into(), exact_rounds(&two, "-2,3", 3)?, vec![0.0]),
        ("twopoint".into(), exact_rounds(&tp, "-3,3;-3,3", 3)?, vec![1.0, 0.0]),
        ("prop6_circle".into(), circle_rounds(32, 3)?, vec![1.0, 0.0]),
        (
            "ex6_6".into(),
            (0..3).map(|k| fixtures::ex6_6(11, k)).collect::<Result<_>>()?,
            vec![0.0, 0.0],
        ),
    ];
    for (name, rounds, a) in &lower {
        let tol = rounds[0].x.default_tol_med();
        let rs = n_preimage_rounds(rounds, a, PreimageKind::Lower, 41, tol)?;
        cases.push(ClosedCase::new(format!("N_*(N(a)) {name} a={a:?}"), &rs, None)?);
    }

    let weak_1d: Vec<(String, Vec<NRound>, Vec<f64>)> = vec![
        ("ex6_4".into(), exact_rounds(&two, "-2,3", 3)?, vec![0.0]),
        ("gap_segment".into(), gap_rounds(4)?, vec![0.0]),
        ("gap_segment".into(), gap_rounds(4)?, vec![1.0]),
    ];
    for (name, rounds, a) in &weak_1d {
        let rs = n_preimage_rounds(rounds, a, PreimageKind::Weak, 41, TOL_PT)?;
        cases.push(ClosedCase::new(format!("N^#(N(a)) {name} a={a:?}"), &rs, None)?);
    }

    let parabola: Vec<NRound> = (0..4).map(|k| fixtures::ex6_6(11, k)).collect::<Result<_>>()?;
    let rs = n_preimage_rounds(&parabola, &[0.0, 0.0], PreimageKind::Weak, 41, TOL_PT)?;
    cases.push(ClosedCase::new("N^#(N(a)) ex6_6 a=[0.0, 0.0]", &rs, Some(vec![1.0, 0.0]))?);
    Ok(cases)
}

fn gap_rounds(rounds: usize) -> Result<Vec<NRound>> {
    (0..rounds)
        .map(|k| {
            let x = fixtures::gap_segment(11, k)?;
            let pitch = x.pitch().unwrap_or(TOL_PT);
            Ok(NRound {
                x,
                window: Domain::interval(-2.0, 4.0)?,
                pitch,
            })
        })
        .collect()
}

fn c11_closedness() -> Result<CriterionResult> {
    let cases = closedness_cases()?;
    Ok(CriterionResult {
        id: 11,
        title: CRITERIA[10],
        pass: cases.iter().all(ClosedCase::ok),
        detail: json!({ "cases": cases.iter().map(ClosedCase::json).collect::<Vec<_>>() }),
    })
}

fn c12_medial(seed: u64, plots: &mut PlotData) -> Result<CriterionResult> {
    let x = fixtures::twopoint();
    let d = Domain::parse("-2,2;-2,2")?;
    let per_axis = 81;
    let est = medial_axis(&x, &d, per_axis * per_axis, seed, x.default_tol_med())?;
    let pitch = est.pitch;
    let outside = est.axis.iter().filter(|p| p[0].abs() > pitch).count();
    let grid = d.grid(per_axis)?;
    let missing = grid
        .iter()
        .filter(|p| p[0].abs() <= 0.5 * pitch && !est.axis.contains(p, 0.0))
        .count();
    for p in est.axis.iter() {
        plots.axis.push((p[0], p[1], "twopoint".into()));
    }
    Ok(CriterionResult {
        id: 12,
        title: CRITERIA[11],
        pass: outside == 0 && missing == 0 && !est.axis.is_empty(),
        detail: json!({
            "axis_points": est.axis.len(),
            "pitch": pitch,
            "points_beyond_pitch": outside,
            "central_grid_points_missing": missing,
        }),
    })
}

fn run_criterion(
    id: usize,
    timings: &mut BTreeMap<String, f64>,
    f: impl FnOnce() -> Result<CriterionResult>,
) -> CriterionResult {
    let t = Instant::now();
    let r = f().unwrap_or_else(|e| CriterionResult {
        id,
        title: CRITERIA[id - 1],
        pass: false,
        detail: json!({ "error": e.to_string() }),
    });
    timings.insert(format!("criterion_{id:02}"), t.elapsed().as_secs_f64());
    r
}

fn fixture_report(tag: FixtureTag, opts: &SuiteOptions, fx: &Fixtures) -> Result<FixtureReport> {
    let seed = opts.seed;
    let mut params = BTreeMap::new();
    let (reproduced, detail) = match tag {
        FixtureTag::Ex3_8 => {
            let p = fixtures::ex3_8();
            let fit = fit_exponent(&p.f, &p.g, &p.domain, 10_000, seed)?;
            let b = check_g_bounded(&p.g, &p.domain, 10_000, seed, DEFAULT_BOUND_PROBE)?;
            let s = check_star_condition(&p.f, &p.g, &p.domain, 10_000, seed, DEFAULT_C_GAP)?;
            (
                !b.pass && s.pass,
                json!({
                    "fit": fit_json(&fit),
                    "g_bounded": if b.pass { "pass" } else { "fail" },
                    "sup_g": b.sup_g,
                    "star_condition": if s.pass { "pass" } else { "fail" },
                }),
            )
        }
        FixtureTag::Ex3_9 => {
            let c = c7_ex3_9(seed)?;
            (c.pass, c.detail)
        }
        FixtureTag::Ex4_9 => {
            let m = opts.params.get("M").copied().unwrap_or(12.0);
            if !(m >= 1.0 && m.fract() == 0.0) {
                return Err(Error::Invalid(format!("M must be a positive integer, got {m}")));
            }
            params.insert("M".into(), m);
            let m = m as usize;
            let fit = ex4_9_fit(m, seed, &opts.cfg)?;
            let floor = (m as f64 - 1.0) * (1.0 - 2.0 * opts.cfg.rel_prec);
            (
                fit.feasible && fit.alpha >= floor,
                json!({ "fit": fit_json(&fit), "expected_min_alpha": m as f64 - 1.0 }),
            )
        }
        FixtureTag::Ex5_14 => {
            let pre = preimage(&fx.f.mf, &[1.0], PreimageKind::Strong)?;
            let d = dist_point_set(&[4.0], &pre)?;
            let (cls, lim) = classify_semicontinuity(&fx.f.mf, &[4.0], &default_radii(), DEFAULT_TOL_LIM)?;
            (
                (d - 3.0).abs() <= fx.f.domain.pitch(1001) && cls.upper,
                json!({ "d_4_strong_F1": d, "flags_at_4": cls.flags(), "limits_at_4": lim }),
            )
        }
        FixtureTag::Ex5_16 => {
            let pre = preimage(&fx.g.mf, &[0.0], PreimageKind::Strong)?;
            let d = dist_point_set(&[4.0], &pre)?;
            let (cls, lim) = classify_semicontinuity(&fx.g.mf, &[4.0], &default_radii(), DEFAULT_TOL_LIM)?;
            (
                (d - 4.0).abs() <= fx.g.domain.pitch(701) && cls.lower,
                json!({ "d_4_strong_G0": d, "flags_at_4": cls.flags(), "limits_at_4": lim }),
            )
        }
        FixtureTag::Ex5_18 => {
            let mut pre = BTreeMap::new();
            for kind in PreimageKind::ALL {
                let p = preimage(&fx.h.mf, &[1.0], kind)?;
                pre.insert(kind.to_string(), p.iter().map(|x| x[0]).collect::<Vec<_>>());
            }
            let star = h_star(fx)?;
            (
                star["pass"] == json!(false),
                json!({ "preimages_at_1": pre, "star_condition": star }),
            )
        }
        FixtureTag::Ex6_4 => {
            let x = fixtures::ex6_4();
            let m = two_point_m(&Domain::interval(-1.0, 2.0)?, 301)?;
            let (cls, _) = classify_semicontinuity(&m, &[0.5], &default_radii(), DEFAULT_TOL_LIM)?;
            let line = Domain::interval(-1.0, 2.0)?;
            let strong = check_closed(&m_preimage_rounds(&x, &[0.25], PreimageKind::Strong, &line, 13, 4, TOL_PT)?)?;
            let upper = check_closed(&m_preimage_rounds(&x, &[0.25], PreimageKind::Upper, &line, 13, 4, TOL_PT)?)?;
            let region = n_region(&x, &[0.0], &line, 301, seed, TOL_PT)?;
            let hi = region.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            (
                cls.upper && !cls.lower && strong.witness() == Some(&[0.5][..]) && upper.witness().is_none(),
                json!({
                    "m_at_0.5": closest_points(&x, &[0.5], TOL_PT)?,
                    "flags_at_0.5": cls.flags(),
                    "strong_preimage_at_0.25": verdict_json(&strong),
                    "upper_preimage_at_0.25": verdict_json(&upper),
                    "n_region_of_0_sup": hi,
                }),
            )
        }
        FixtureTag::Ex6_6 => {
            let rounds: Vec<NRound> = (0..4).map(|k| fixtures::ex6_6(11, k)).collect::<Result<_>>()?;
            let rs = n_preimage_rounds(&rounds, &[0.0, 0.0], PreimageKind::Weak, 41, TOL_PT)?;
            let case = ClosedCase::new("weak preimage of N at the origin", &rs, Some(vec![1.0, 0.0]))?;
            (case.ok(), case.json())
        }
        FixtureTag::Prop6Circle => {
            let x = fixtures::prop6_circle(512)?;
            let tol = x.default_tol_med();
            let d = Domain::parse("-0.9,0.9;-0.9,0.9")?;
            let axis = medial_axis(&x, &d, 41 * 41, seed, tol)?;
            let radius = axis.axis.iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
            let plane = Domain::parse("-2,2;-2,2")?;
            let off_ray = |region: &PointSet| {
                region
                    .iter()
                    .map(|p| if p[0] >= 0.0 { p[1].abs() } else { p[0].hypot(p[1]) })
                    .fold(0.0, f64::max)
            };
            let tight = n_region(&x, &[1.0, 0.0], &plane, 81 * 81, seed, TOL_PT)?;
            let wide = n_region(&x, &[1.0, 0.0], &plane, 81 * 81, seed, tol)?;
            let grid_pitch = plane.pitch(81);
            let arc = Domain::parse("0.9,1.1;-0.1,0.1")?;
            let opts_n = MedialLojaOptions {
                seed,
                cfg: opts.cfg,
                ..MedialLojaOptions::default()
            };
            let fit = medial_loja(&x, &[1.0, 0.0], &arc, MedialKind::N, SetMetric::Kuratowski, &opts_n)?;
            (
                axis.axis.contains(&[0.0, 0.0], TOL_PT)
                    && radius <= 1.0 / 9.0 + axis.pitch
                    && off_ray(&tight) <= grid_pitch
                    && fit.feasible,
                json!({
                    "samples_of_X": 512,
                    "tol_med": tol,
                    "axis_points": axis.axis.len(),
                    "axis_radius": radius,
                    "axis_pitch": axis.pitch,
                    "n_region_pitch": grid_pitch,
                    "n_region_offset_from_ray_at_tol_pt": off_ray(&tight),
                    "n_region_offset_from_ray_at_tol_med": off_ray(&wide),
                    "medial_loja_N": fit_json(&fit),
                }),
            )
        }
        FixtureTag::Twopoint => {
            let mut scratch = PlotData::default();
            let c = c12_medial(seed, &mut scratch)?;
            (c.pass, c.detail)
        }
    };
    Ok(FixtureReport {
        tag,
        params,
        reproduced,
        detail,
    })
}

fn cloud_plot(seed: u64, plots: &mut PlotData) -> Result<()> {
    let f: crate::expr::PiecewiseFn = "x1".parse()?;
    let g: crate::expr::PiecewiseFn = "x1^2".parse()?;
    let cloud = value_pair_cloud(&f, &g, &Domain::interval(0.0, 1.0)?, 201, seed)?;
    for (s, t) in &cloud.pairs {
        plots.cloud.push((*s, *t, "x_vs_x2".into()));
    }
    Ok(())
}

/// Runs the regression matrix (criteria 1–12) and every fixture report, or
/// only the report of `opts.only`.
pub fn run_paper_suite(opts: &SuiteOptions) -> RunReport {
    let seed = opts.seed;
    let mut timings = BTreeMap::new();
    let mut plots = PlotData::default();
    let mut criteria = Vec::new();
    let fx = Fixtures::build();
    if opts.only.is_none() {
        criteria.push(run_criterion(1, &mut timings, || c1_metric_axioms(seed)));
        criteria.push(run_criterion(2, &mut timings, || c2_stereo(seed)));
        criteria.push(run_criterion(3, &mut timings, c3_empty));
        criteria.push(run_criterion(4, &mut timings, || c4_envelope(seed, &mut plots)));
        criteria.push(run_criterion(5, &mut timings, || c5_ex4_9(seed, &opts.cfg)));
        criteria.push(run_criterion(6, &mut timings, || c6_ex3_8(seed)));
        criteria.push(run_criterion(7, &mut timings, || c7_ex3_9(seed)));
        criteria.push(run_criterion(8, &mut timings, || c8_lattice(seed, fx.as_ref().map_err(Clone::clone)?)));
        criteria.push(run_criterion(9, &mut timings, || c9_section5(fx.as_ref().map_err(Clone::clone)?)));
        criteria.push(run_criterion(10, &mut timings, || {
            c10_instances(seed, fx.as_ref().map_err(Clone::clone)?, &opts.cfg)
        }));
        criteria.push(run_criterion(11, &mut timings, c11_closedness));
        criteria.push(run_criterion(12, &mut timings, || c12_medial(seed, &mut plots)));
        if let Err(e) = cloud_plot(seed, &mut plots) {
            timings.insert(format!("cloud_error: {e}"), 0.0);
        }
    }
    let tags: Vec<FixtureTag> = match opts.only {
        Some(t) => vec![t],
        None => FixtureTag::ALL.to_vec(),
    };
    let mut fixtures_out = Vec::new();
    for tag in tags {
        let t = Instant::now();
        let r = fx
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|fx| fixture_report(tag, opts, fx))
            .unwrap_or_else(|e| FixtureReport {
                tag,
                params: BTreeMap::new(),
                reproduced: false,
                detail: json!({ "error": e.to_string() }),
            });
        timings.insert(format!("fixture_{tag}"), t.elapsed().as_secs_f64());
        fixtures_out.push(r);
    }
    let pass = criteria.iter().all(|c| c.pass) && fixtures_out.iter().all(|f| f.reproduced);
    RunReport {
        schema: SCHEMA,
        command: opts.command.clone(),
        seed,
        pass,
        criteria,
        fixtures: fixtures_out,
        plots,
        timings,
    }
}

/// Tidy CSV with header `x,y,series` for `envelope`, `axis` or `cloud`.
pub fn emit_plot_data(report: &RunReport, what: &str) -> Result<String> {
    let rows = match what {
        "envelope" => &report.plots.envelope,
        "axis" => &report.plots.axis,
        "cloud" => &report.plots.cloud,
        _ => return Err(Error::Invalid(format!("unknown plot selector `{what}`"))),
    };
    if rows.is_empty() {
        return Err(Error::Invalid(format!("the report holds no `{what}` data")));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "y", "series"])?;
    for (x, y, s) in rows {
        w.write_record([x.to_string(), y.to_string(), s.clone()])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_distance_oracle() {
        assert_eq!(hausdorff_to_interval(&[0.0, 1.0], 0.0, 1.0), 0.5);
        assert_eq!(hausdorff_to_interval(&[0.5], 0.0, 1.0), 0.5);
        assert_eq!(hausdorff_to_interval(&[0.0, 0.5, 1.0, 1.25], 0.0, 1.0), 0.25);
    }

    #[test]
    fn unknown_selector_is_an_error() {
        let r = run_paper_suite(&SuiteOptions {
            only: Some(FixtureTag::Ex3_8),
            ..SuiteOptions::default()
        });
        assert!(emit_plot_data(&r, "nope").is_err());
        assert!(emit_plot_data(&r, "axis").is_err());
        assert!(r.fixtures[0].reproduced);
    }
}
