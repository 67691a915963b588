use std::collections::BTreeMap;
use std::fs;
use std::io::Write;

use loja::domain::Domain;
use loja::exec::Exec;
use loja::fixtures::FixtureTag;
use loja::geometry::{hausdorff, kuratowski_dist, read_points, PointSet};
use loja::lojafit::{
    check_g_bounded, check_star_values, fit_pairs, reverse_fit_pairs, FitConfig, PairSample,
    DEFAULT_BOUND_PROBE, DEFAULT_C_GAP, DEFAULT_EPS_STAR,
};
use loja::medial::{medial_axis, medial_loja, n_region, MedialKind, MedialLojaOptions};
use loja::multifun::{classify_semicontinuity, default_radii, multifun_loja_fit, preimage, PreimageKind, SetMetric};
use loja::suite::{emit_plot_data, run_paper_suite, SuiteOptions};
use loja::zeroset::{gamma_zero_set, DEFAULT_SAMPLES};
use loja::{Error, Result};
use serde_json::{json, Value};

use crate::{input, Cli, Command, Common, Format};

pub struct Output {
    pub json: Value,
    /// Tabular form, when the result has one.
    pub csv: Option<String>,
    pub pass: bool,
    /// Emit the tabular form whatever `--format` says.
    pub csv_only: bool,
}

impl Output {
    fn ok(json: Value) -> Self {
        Self {
            json,
            csv: None,
            pass: true,
            csv_only: false,
        }
    }

    pub fn emit(&self, common: &Common) -> Result<()> {
        let format = if self.csv_only { Format::Csv } else { common.format };
        let text = match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)?;
                s.push('\n');
                s
            }
            Format::Csv => match &self.csv {
                Some(c) => c.clone(),
                None => scalars_csv(&self.json)?,
            },
        };
        match &common.out {
            Some(path) => fs::write(path, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn scalars_csv(v: &Value) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).map_err(csv_err)?;
    if let Value::Object(m) = v {
        for (k, x) in m {
            let cell = match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            w.write_record([k.as_str(), cell.as_str()]).map_err(csv_err)?;
        }
    }
    finish_csv(w)
}

fn points_csv(pts: &PointSet, extra: &[(&str, Vec<String>)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=pts.dim()).map(|i| format!("x{i}")).collect();
    header.extend(extra.iter().map(|(h, _)| h.to_string()));
    w.write_record(&header).map_err(csv_err)?;
    for (i, p) in pts.iter().enumerate() {
        let mut row: Vec<String> = p.iter().map(f64::to_string).collect();
        row.extend(extra.iter().map(|(_, col)| col[i].clone()));
        w.write_record(&row).map_err(csv_err)?;
    }
    finish_csv(w)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

fn check_label(c: Option<bool>) -> &'static str {
    match c {
        None => "skipped",
        Some(true) => "pass",
        Some(false) => "fail",
    }
}

pub fn run(cli: &Cli, argv: &[String]) -> Result<Output> {
    let common = &cli.common;
    let seed = common.seed;
    let samples = |default: usize| common.samples.unwrap_or(default);
    let cfg = FitConfig::from_env();
    match &cli.command {
        Command::Parse { source, arity } => {
            let mut f = input::function(source)?;
            if let Some(n) = arity {
                f = loja::expr::parse_with_arity(&f.to_string(), *n)?;
            }
            Ok(Output::ok(json!({
                "canonical": f.to_string(),
                "arity": f.arity(),
                "branches": f.branches().len(),
                "piecewise": f.is_piecewise(),
            })))
        }
        Command::Eval { source, at } => {
            let f = input::function(source)?;
            let x = input::point(at)?;
            Ok(Output::ok(json!({ "x": x, "value": f.eval(&x)? })))
        }
        Command::Zeroset { source, domain, eps, delta } => {
            let f = input::function(source)?;
            let d = Domain::parse(domain)?;
            let est = gamma_zero_set(&f, &d, *eps, *delta, samples(DEFAULT_SAMPLES), seed)?;
            let abs_f = est.witnesses.iter().map(|w| w.abs_f.to_string()).collect();
            Ok(Output {
                csv: Some(points_csv(&est.candidates, &[("abs_f", abs_f)])?),
                json: serde_json::to_value(&est)?,
                pass: true,
                csv_only: false,
            })
        }
        Command::Fit { f, g, domain, reverse, check_star, check_bounded } => {
            let (f, g) = (input::function(f)?, input::function(g)?);
            let d = Domain::parse(domain)?;
            let n = samples(DEFAULT_SAMPLES);
            let data = PairSample::evaluate(&f, &g, &d, n, seed, Exec::auto())?;
            let fit = if *reverse {
                reverse_fit_pairs(&data, &cfg)
            } else {
                fit_pairs(&data, &cfg, Exec::auto())
            };
            let star = if *check_star {
                Some(check_star_values(&data, DEFAULT_C_GAP, DEFAULT_EPS_STAR)?)
            } else {
                None
            };
            let bounded = if *check_bounded {
                Some(check_g_bounded(&g, &d, n, seed, DEFAULT_BOUND_PROBE)?)
            } else {
                None
            };
            let star_ok = star.as_ref().map(|s| s.pass);
            let bounded_ok = bounded.as_ref().map(|b| b.pass);
            let pass = fit.feasible && star_ok != Some(false) && bounded_ok != Some(false);
            let mut json = serde_json::to_value(&fit)?;
            json["star_condition"] = json!(check_label(star_ok));
            json["g_bounded"] = json!(check_label(bounded_ok));
            json["sup_g"] = json!(bounded.as_ref().map(|b| b.sup_g));
            if let Some(s) = &star {
                json["star_detail"] = serde_json::to_value(s)?;
            }
            Ok(Output {
                json,
                csv: None,
                pass,
                csv_only: false,
            })
        }
        Command::Classify { source, at, tol_lim } => {
            let a = input::point(at)?;
            let mf = input::multifunction(source, &a, samples(2001), seed)?;
            let (c, lim) = classify_semicontinuity(&mf, &a, &default_radii(), *tol_lim)?;
            Ok(Output::ok(json!({
                "at": a,
                "flags": c.flags(),
                "classification": c,
                "limits": lim,
            })))
        }
        Command::Preimage { source, at, kind } => {
            let a = input::point(at)?;
            let kind: PreimageKind = kind.parse()?;
            let mf = input::multifunction(source, &a, samples(2001), seed)?;
            let pre = preimage(&mf, &a, kind)?;
            Ok(Output {
                csv: Some(points_csv(&pre, &[])?),
                json: json!({ "at": a, "kind": kind, "points": pre.points() }),
                pass: true,
                csv_only: false,
            })
        }
        Command::Mfloja { source, at, kind, metric, domain } => {
            let a = input::point(at)?;
            let kind: PreimageKind = kind.parse()?;
            let metric: SetMetric = metric.parse()?;
            let k = Domain::parse(domain)?;
            let mf = input::multifunction(source, &a, samples(2001), seed)?;
            let fit = multifun_loja_fit(&mf, &a, &k, kind, metric, &cfg)?;
            Ok(Output {
                pass: fit.feasible,
                json: serde_json::to_value(&fit)?,
                csv: None,
                csv_only: false,
            })
        }
        Command::Hausdorff { a, b } => {
            let (a, b) = (read_points(a, None)?, read_points(b, None)?);
            Ok(Output::ok(json!({ "distance": hausdorff(&a, &b)? })))
        }
        Command::Kuratowski { a, b } => {
            let (a, b) = (read_points(a, None)?, read_points(b, None)?);
            Ok(Output::ok(json!({ "distance": kuratowski_dist(&a, &b)? })))
        }
        Command::Medial { x, domain } => {
            let set = input::closed_set(x)?;
            let tol = input::tol_med(x, &set);
            let est = medial_axis(&set, &Domain::parse(domain)?, samples(DEFAULT_SAMPLES), seed, tol)?;
            let mult = est.multiplicity.iter().map(usize::to_string).collect();
            let gap = est.gap.iter().map(f64::to_string).collect();
            Ok(Output {
                csv: Some(points_csv(&est.axis, &[("multiplicity", mult), ("gap", gap)])?),
                json: serde_json::to_value(&est)?,
                pass: true,
                csv_only: false,
            })
        }
        Command::Nregion { x, at, domain } => {
            let set = input::closed_set(x)?;
            let a = input::point(at)?;
            let tol = input::tol_med(x, &set);
            let region = n_region(&set, &a, &Domain::parse(domain)?, samples(DEFAULT_SAMPLES), seed, tol)?;
            Ok(Output {
                csv: Some(points_csv(&region, &[])?),
                json: json!({ "at": a, "tol_med": tol, "points": region.points() }),
                pass: true,
                csv_only: false,
            })
        }
        Command::Medloja { x, at, kind, metric, domain, window } => {
            let set = input::closed_set(x)?;
            let a = input::point(at)?;
            let kind: MedialKind = kind.parse()?;
            let metric = match metric {
                Some(m) => m.parse()?,
                None => kind.default_metric(),
            };
            let opts = MedialLojaOptions {
                samples: samples(1000),
                seed,
                tol_med: x.tol,
                window: window.as_deref().map(Domain::parse).transpose()?,
                cfg,
                ..MedialLojaOptions::default()
            };
            let fit = medial_loja(&set, &a, &Domain::parse(domain)?, kind, metric, &opts)?;
            let mut json = serde_json::to_value(&fit)?;
            json["kind"] = json!(kind.to_string());
            json["metric"] = json!(metric);
            Ok(Output {
                pass: fit.feasible,
                json,
                csv: None,
                csv_only: false,
            })
        }
        Command::PaperSuite { only, params, plot } => {
            let only = only.as_deref().map(str::parse::<FixtureTag>).transpose()?;
            let mut map = BTreeMap::new();
            for p in params {
                let (k, v) = p
                    .split_once('=')
                    .ok_or_else(|| Error::Invalid(format!("parameter `{p}` is not NAME=VALUE")))?;
                let v: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Invalid(format!("parameter `{p}` has a bad value")))?;
                map.insert(k.trim().to_string(), v);
            }
            let opts = SuiteOptions {
                seed,
                only,
                params: map,
                command: argv.to_vec(),
                cfg,
            };
            let report = run_paper_suite(&opts);
            let csv = match plot {
                Some(sel) => Some(emit_plot_data(&report, sel)?),
                None => None,
            };
            let json: Value = serde_json::from_str(&report.to_json(true)?)?;
            Ok(Output {
                json,
                csv_only: csv.is_some(),
                csv,
                pass: report.pass,
            })
        }
    }
}
