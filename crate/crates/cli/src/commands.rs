use std::path::{Path, PathBuf};

use inlinescope::analysis::{inlining_cdf, rank_features, render_cdf_svg, CdfSeries, FeatureTable};
use inlinescope::cost_model::{decide, CallSiteDescription, InlineParams, OptLevel, ParityCase};
use inlinescope::features::{features_from_text, FeatureError, FeatureRegistry};
use inlinescope::ground_truth::{compute_inlining_report, delta_flow, InliningReport};
use inlinescope::remarks::{parse_remark_stream_detailed, reconcile, summarize, to_json};
use inlinescope::sweep::{
    all_failed, emit_report, enumerate_variants, preset, run_sweep, run_variant, search_extreme, variant_flags,
    ReportOptions, SweepConfig, SweepError, PRESETS,
};
use inlinescope::Execution;

use crate::output::{emit, Artifact};
use crate::{Cli, CliError, Command, ReportCommand};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let artifacts = match &cli.command {
        Command::GroundTruth { binaries, baseline } => ground_truth(binaries, baseline.as_deref())?,
        Command::Remarks { stream, binary } => remarks(stream, binary.as_deref())?,
        Command::Simulate {
            site,
            params,
            profile,
            opt,
        } => simulate(site, params.as_deref(), profile, opt.as_deref())?,
        Command::Features { listing } => features(listing, &cli.registry_version)?,
        Command::Sweep {
            config,
            dry_run,
            no_timings,
            preset,
            search,
            parallelism,
            list_presets,
        } => {
            if *list_presets {
                vec![Artifact::text("presets.txt", presets_table())]
            } else {
                let config = config.as_deref().expect("clap requires a config");
                let opts = SweepOpts {
                    dry_run: *dry_run,
                    timings: !*no_timings,
                    preset: preset.as_deref(),
                    search: *search,
                    parallelism: *parallelism,
                };
                sweep(config, &opts)?
            }
        }
        Command::Report(ReportCommand::Drift { a, b, k }) => drift(a, b, *k, &cli.registry_version, cli.json)?,
        Command::Report(ReportCommand::Cdf { sweeps, title }) => cdf(sweeps, title)?,
    };
    emit(&artifacts, cli.out.as_deref(), cli.json)
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| "out".into(), |n| n.to_string_lossy().into_owned())
}

fn report_for(path: &Path) -> Result<InliningReport, CliError> {
    let bytes = read(path)?;
    Ok(compute_inlining_report(&bytes, &path.display().to_string())?)
}

fn ground_truth(binaries: &[PathBuf], baseline: Option<&Path>) -> Result<Vec<Artifact>, CliError> {
    let base = baseline.map(report_for).transpose()?;
    let mut out = Vec::new();
    for path in binaries {
        let report = report_for(path)?;
        for w in &report.warnings {
            log::warn!("{}: {w}", path.display());
        }
        out.push(Artifact::json(format!("{}.report.json", stem(path)), report.to_json()));
        if let Some(base) = &base {
            let flow = delta_flow(base, &report);
            out.push(Artifact::json(format!("{}.flow.json", stem(path)), pretty(&flow)));
        }
    }
    Ok(out)
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

fn remarks(stream: &Path, binary: Option<&Path>) -> Result<Vec<Artifact>, CliError> {
    let parsed = parse_remark_stream_detailed(&read_text(stream)?);
    if !parsed.unparsed.is_empty() {
        log::warn!("{} remark-shaped line(s) did not parse", parsed.unparsed.len());
    }
    let name = stem(stream);
    let mut out = vec![
        Artifact::json(format!("{name}.remarks.json"), to_json(&parsed.remarks)),
        Artifact::json(format!("{name}.summary.json"), pretty(&summarize(&parsed.remarks))),
    ];
    if let Some(binary) = binary {
        let d = reconcile(&parsed.remarks, &report_for(binary)?);
        out.push(Artifact::json(format!("{name}.discrepancy.json"), pretty(&d)));
    }
    Ok(out)
}

fn simulate(site: &Path, params: Option<&Path>, profile: &str, opt: Option<&str>) -> Result<Vec<Artifact>, CliError> {
    let bad = |e: serde_json::Error| CliError::Config(format!("{}: {e}", site.display()));
    let doc: serde_json::Value = serde_json::from_str(&read_text(site)?).map_err(bad)?;
    // A parity case wraps the site and carries its own level.
    let (site_doc, case_level) = if doc.get("site").is_some() {
        let case: ParityCase = serde_json::from_value(doc).map_err(bad)?;
        (case.site, Some(case.opt_level))
    } else {
        (serde_json::from_value::<CallSiteDescription>(doc).map_err(bad)?, None)
    };
    let params = match params {
        Some(p) => serde_json::from_str::<InlineParams>(&read_text(p)?)
            .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?,
        None => InlineParams::by_name(profile)
            .ok_or_else(|| CliError::Config(format!("unknown parameter profile '{profile}' (default, clang14)")))?,
    };
    params.validate().map_err(CliError::Config)?;
    let level: OptLevel = match (opt, case_level) {
        (Some(o), _) => o.parse().map_err(CliError::Config)?,
        (None, Some(l)) => l,
        (None, None) => OptLevel::O2,
    };
    let decision = decide(&site_doc, level, &params).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(vec![Artifact::json(
        format!("{}.decision.json", stem(site)),
        decision.to_json(),
    )])
}

fn features(listing: &Path, version: &str) -> Result<Vec<Artifact>, CliError> {
    let set = features_from_text(&read_text(listing)?, version, Execution::Sequential).map_err(|e| match e {
        FeatureError::UnknownRegistryVersion(_) => CliError::Config(e.to_string()),
        other => CliError::Format(format!("{}: {other}", listing.display())),
    })?;
    for w in &set.warnings {
        log::warn!("{w}");
    }
    Ok(vec![Artifact::text(
        format!("{}.features.csv", stem(listing)),
        set.to_csv(),
    )])
}

fn presets_table() -> String {
    PRESETS
        .iter()
        .map(|p| format!("{}\t{}\t{}\n", p.name, p.recipe(), p.description))
        .collect()
}

struct SweepOpts<'a> {
    dry_run: bool,
    timings: bool,
    preset: Option<&'a str>,
    search: Option<usize>,
    parallelism: Option<usize>,
}

fn sweep_error(e: SweepError) -> CliError {
    match e {
        SweepError::Io(m) => CliError::Io(m),
        SweepError::NoSuccessfulBuild => CliError::AllBuildsFailed,
        other => CliError::Config(other.to_string()),
    }
}

fn sweep(path: &Path, opts: &SweepOpts<'_>) -> Result<Vec<Artifact>, CliError> {
    let mut config = SweepConfig::load(path).map_err(sweep_error)?;
    if let Some(name) = opts.preset {
        preset(name).ok_or_else(|| CliError::Config(format!("unknown preset '{name}'")))?;
        config.preset = Some(name.to_string());
    }
    if let Some(n) = opts.parallelism {
        config.parallelism = n;
    }
    config.validate().map_err(sweep_error)?;
    let name = path
        .file_stem()
        .map_or_else(|| "sweep".into(), |s| s.to_string_lossy().into_owned());

    let variants = if config.axes.is_empty() {
        vec![vec![]]
    } else {
        enumerate_variants(&config).map_err(sweep_error)?
    };
    if opts.dry_run {
        let grid: String = variants
            .iter()
            .enumerate()
            .map(|(i, a)| format!("{i}\t{}\n", variant_flags(&config, a).join(" ")))
            .collect();
        return Ok(vec![Artifact::text(format!("{name}.grid.txt"), grid)]);
    }
    if let Some(budget) = opts.search {
        let outcome = search_extreme(&config, budget).map_err(sweep_error)?;
        return Ok(vec![Artifact::json(format!("{name}.search.json"), pretty(&outcome))]);
    }
    let results = if config.axes.is_empty() {
        vec![run_variant(&config, 0, &[])]
    } else {
        run_sweep(&config, Execution::Parallel).map_err(sweep_error)?
    };
    let csv = emit_report(&results, ReportOptions { timings: opts.timings });
    if all_failed(&results) {
        for r in &results {
            log::error!(
                "variant {}: {}",
                r.variant_index,
                r.cause.as_deref().unwrap_or("failed")
            );
        }
        return Err(CliError::AllBuildsFailed);
    }
    Ok(vec![Artifact::text(format!("{name}.sweep.csv"), csv)])
}

fn drift(a: &Path, b: &Path, k: usize, version: &str, json: bool) -> Result<Vec<Artifact>, CliError> {
    let registry = FeatureRegistry::load(version).map_err(|e| CliError::Config(e.to_string()))?;
    let table = |p: &Path| {
        FeatureTable::from_csv(&read_text(p)?, version).map_err(|e| CliError::Format(format!("{}: {e}", p.display())))
    };
    let report = rank_features(&table(a)?, &table(b)?, k, &registry, Execution::Sequential)
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(vec![if json {
        Artifact::json("drift.json", report.to_json())
    } else {
        Artifact::text("drift.csv", report.to_csv())
    }])
}

// Ratios of successful rows in a sweep report.
fn sweep_ratios(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = read_text(path)?;
    let bad = |m: String| CliError::Format(format!("{}: {m}", path.display()));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let col = reader
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .position(|h| h == "ratio")
        .ok_or_else(|| bad("no ratio column".into()))?;
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| bad(e.to_string()))?;
        match row.get(col).unwrap_or("") {
            "" => {}
            v => out.push(v.parse().map_err(|_| bad(format!("bad ratio {v:?}")))?),
        }
    }
    Ok(out)
}

fn cdf(sweeps: &[PathBuf], title: &str) -> Result<Vec<Artifact>, CliError> {
    let mut series: Vec<CdfSeries> = Vec::new();
    let mut out = Vec::new();
    for path in sweeps {
        let label = path
            .file_stem()
            .map_or_else(|| "series".into(), |s| s.to_string_lossy().into_owned());
        let s = inlining_cdf(&label, &sweep_ratios(path)?).map_err(|e| CliError::Format(format!("{label}: {e}")))?;
        log::info!("{label}: {}", s.summary);
        out.push(Artifact::text(format!("{label}.cdf.csv"), s.to_csv()));
        series.push(s);
    }
    out.push(Artifact::text("cdf.svg", render_cdf_svg(title, &series)));
    Ok(out)
}
