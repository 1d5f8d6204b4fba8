use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use besovlab::exec::with_workers;
use besovlab::hedgehog::{
    counterexample_sequence, hedgehog_verdict, levy_measure_conditions, CoefficientRule,
    CounterexampleOptions, HedgehogSpec, NormRule, Sequence, DEFAULT_HEDGEHOG_BUDGET,
};
use besovlab::levy::TauMethod;
use besovlab::region::{classify_point, render_svg, triebel_grid, write_grid_csv, Plane};
use besovlab::sampler::{
    divergence_diagnostic, simulate_norm_curve, SimulationConfig, SimulationModel,
};
use besovlab::stable::{
    geometric_grid, stable_verdict, upsilon_n, FunctionalCurve, StableRun, DEFAULT_INDEX_BUDGET,
    DEFAULT_MC_SAMPLES,
};
use besovlab::{BesovParams, Execution};

use crate::config::Config;
use crate::record::{write_output, OutputFile};
use crate::CliError;

pub struct Context {
    pub out: PathBuf,
    pub workers: usize,
}

#[derive(Default)]
pub struct Outcome {
    pub stdout: String,
    pub outputs: Vec<OutputFile>,
    pub verdicts: BTreeMap<String, String>,
}

impl Outcome {
    fn verdict(&mut self, key: &str, value: impl ToString) {
        self.verdicts.insert(key.to_string(), value.to_string());
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.stdout.push_str(text.as_ref());
        self.stdout.push('\n');
    }
}

pub const COMMANDS: [&str; 6] = [
    "classify",
    "analyze stable",
    "analyze hedgehog",
    "analyze tau",
    "simulate",
    "diagram",
];

pub fn run(command: &str, cfg: &mut Config, ctx: &Context) -> Result<Outcome, CliError> {
    match command {
        "classify" => classify(cfg),
        "analyze stable" => analyze_stable(cfg, ctx),
        "analyze hedgehog" => analyze_hedgehog(cfg, ctx),
        "analyze tau" => analyze_tau(cfg, ctx),
        "simulate" => simulate(cfg, ctx),
        "diagram" => diagram(cfg, ctx),
        other => Err(CliError::Usage(format!("unknown command `{other}`"))),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn classify(cfg: &mut Config) -> Result<Outcome, CliError> {
    let params = cfg.params()?;
    let v = classify_point(&params)?;
    let mut out = Outcome::default();
    out.line(format!(
        "p = {}, s = {}, w = {}, d = {}",
        params.p, params.s, params.w, params.d
    ));
    let rows = [
        ("E_p", v.in_e_p, v.margins.e_p, v.boundary_flags.e_p),
        ("R_p", v.in_r_p, v.margins.r_p, v.boundary_flags.r_p),
        (
            "R_p^(p)",
            v.in_r_p_p,
            v.margins.r_p_p,
            v.boundary_flags.r_p_p,
        ),
        (
            "gaussian",
            v.in_gaussian_region,
            v.margins.gaussian,
            v.boundary_flags.gaussian,
        ),
    ];
    for (label, member, margin, boundary) in rows {
        let tag = if boundary { " (boundary)" } else { "" };
        out.line(format!("{label}: {}{tag}  margin {margin}", yes_no(member)));
        out.verdict(label, member);
    }
    if v.boundary_flags.embedding_mismatch {
        out.line("note: membership in E_p and the embedding of L^2 disagree at this point");
    }
    out.verdict("embedding_mismatch", v.boundary_flags.embedding_mismatch);
    Ok(out)
}

fn curve_output(
    ctx: &Context,
    name: &str,
    kind: &str,
    curve: &FunctionalCurve,
) -> Result<OutputFile, CliError> {
    write_output(&ctx.out, &format!("{name}_{kind}.csv"), &curve.to_csv())
}

fn analyze_stable(cfg: &mut Config, ctx: &Context) -> Result<Outcome, CliError> {
    let params = cfg.params()?;
    let alpha = cfg.alpha()?;
    let verdict = stable_verdict(&params, alpha)?;
    let enumeration = cfg.enumeration(params.d)?;
    let budget = cfg.budget(DEFAULT_INDEX_BUDGET);
    let samples = *cfg.samples.get_or_insert(DEFAULT_MC_SAMPLES);
    let radius = *cfg.radius.get_or_insert(1.0);
    let with_ups = *cfg.upsilon.get_or_insert(false);
    if with_ups && params.p < 2.0 {
        return Err(CliError::Usage(format!("upsilon needs p >= 2, got {}", params.p)));
    }
    let name = cfg.name("stable");
    let run = StableRun::new(alpha, params, enumeration, budget)?
        .with_samples(samples)
        .with_seed(cfg.seed())
        .with_execution(Execution::Parallel);
    let stats = with_workers(ctx.workers, || run.sphere_statistics())?;

    let mut out = Outcome::default();
    out.line(format!(
        "verdict: {} ({})",
        if verdict.induced {
            "induced"
        } else {
            "not induced"
        },
        verdict.reason
    ));
    out.verdict("induced", verdict.induced);
    if params.p > alpha {
        let sigma = stats.sigma()?;
        if let Some(last) = sigma.last() {
            out.line(format!(
                "sigma_n at n = {}: {} ± {}",
                last.n, last.value, last.mc_stderr
            ));
            out.verdict("sigma_last", last.value);
        }
        if let Some(change) = sigma.last_relative_change() {
            out.verdict("sigma_last_relative_change", change);
        }
        out.outputs.push(curve_output(ctx, &name, "sigma", &sigma)?);
    }
    if params.p > 1.0 && params.p < 2.0 {
        let lambda = stats.lambda()?;
        if let Some(last) = lambda.last() {
            out.line(format!(
                "lambda_n at n = {}: {} ± {}",
                last.n, last.value, last.mc_stderr
            ));
            out.verdict("lambda_last", last.value);
        }
        out.outputs
            .push(curve_output(ctx, &name, "lambda", &lambda)?);
    }
    let tail = stats.tail(radius)?;
    out.outputs
        .push(curve_output(ctx, &name, "tail", &tail.direct)?);
    if with_ups {
        let ups = with_workers(ctx.workers, || upsilon_n(&run))?;
        if let Some(last) = ups.last() {
            out.line(format!(
                "upsilon_n at n = {}: {} ± {}",
                last.n, last.value, last.mc_stderr
            ));
        }
        out.outputs.push(curve_output(ctx, &name, "upsilon", &ups)?);
    }
    Ok(out)
}

fn hedgehog_spec(
    cfg: &mut Config,
    params: &BesovParams,
) -> Result<(HedgehogSpec, Vec<(String, String)>), CliError> {
    let mode = cfg.mode.get_or_insert_with(|| "abstract".into()).clone();
    let default_budget = if mode == "counterexample" {
        CounterexampleOptions::default().budget
    } else {
        DEFAULT_HEDGEHOG_BUDGET
    };
    let budget = cfg.budget(default_budget);
    let mut extra = Vec::new();
    let spec = match mode.as_str() {
        "counterexample" => {
            let alpha = cfg.alpha()?;
            cfg.measure = Some("stable".into());
            let opts = CounterexampleOptions {
                theta: cfg.theta,
                budget,
                truncation: None,
            };
            let ce = counterexample_sequence(params, alpha, &opts)?;
            cfg.theta = Some(ce.theta);
            extra.push(("lr_exponent".into(), ce.lr_exponent.to_string()));
            extra.push(("lr_partial".into(), ce.lr_partial.to_string()));
            extra.push(("lr_bound".into(), ce.lr_bound.to_string()));
            extra.push((
                "divergence_lower_bound".into(),
                ce.divergence_lower_bound.to_string(),
            ));
            ce.to_spec()?
        }
        "abstract" | "inverse_weight" | "positional" => {
            let rho = cfg.measure()?;
            let seq = Sequence::power_decay(Config::required(cfg.gamma, "gamma")?);
            let rule = match mode.as_str() {
                "abstract" => NormRule::Abstract {
                    norms: seq,
                    coefficients: cfg.coef_gamma.map(Sequence::power_decay),
                },
                "inverse_weight" => NormRule::Wavelet {
                    enumeration: cfg.enumeration(params.d)?,
                    coefficients: CoefficientRule::InverseWeight(seq),
                },
                _ => NormRule::Wavelet {
                    enumeration: cfg.enumeration(params.d)?,
                    coefficients: CoefficientRule::Positional(seq),
                },
            };
            HedgehogSpec::new(rho, rule)?.with_budget(budget)
        }
        other => return Err(CliError::Usage(format!("unknown hedgehog mode `{other}`"))),
    };
    Ok((spec, extra))
}

fn analyze_hedgehog(cfg: &mut Config, ctx: &Context) -> Result<Outcome, CliError> {
    let params = cfg.params()?;
    let (spec, extra) = hedgehog_spec(cfg, &params)?;
    let name = cfg.name("hedgehog");
    let v = hedgehog_verdict(&spec, &params)?;
    let dg = v.diagnostics;
    let mut out = Outcome::default();
    out.line(format!("outcome: {:?}", v.outcome));
    if let Some(b) = v.branch {
        out.line(format!("branch: {}", b.label()));
    }
    out.line(format!(
        "q_min = {} ± {} ({:?}), tau_upper = {}, tau_lower = {}",
        dg.q_min, dg.q_min_uncertainty, dg.q_min_method, dg.tau_upper, dg.tau_lower
    ));
    let mut rows: Vec<(String, String)> = vec![
        ("outcome".into(), format!("{:?}", v.outcome)),
        (
            "branch".into(),
            v.branch.map(|b| b.label().to_string()).unwrap_or_default(),
        ),
        ("q_min".into(), dg.q_min.to_string()),
        ("q_min_uncertainty".into(), dg.q_min_uncertainty.to_string()),
        ("q_min_method".into(), format!("{:?}", dg.q_min_method)),
        ("tau_upper".into(), dg.tau_upper.to_string()),
        ("tau_lower".into(), dg.tau_lower.to_string()),
        ("in_e_p".into(), dg.in_e_p.to_string()),
        ("in_r_p".into(), dg.in_r_p.to_string()),
    ];
    rows.extend(extra);
    let mut csv = String::from("key,value\n");
    for (k, val) in &rows {
        let _ = writeln!(csv, "{k},{val}");
        out.verdict(k, val);
    }
    out.outputs.push(write_output(
        &ctx.out,
        &format!("{name}_verdict.csv"),
        &csv,
    )?);

    let wavelet = matches!(spec.rule, NormRule::Wavelet { .. });
    if *cfg.conditions.get_or_insert(false) {
        if !wavelet {
            return Err(CliError::Usage(
                "conditions need a wavelet-basis mode".into(),
            ));
        }
        let report = with_workers(ctx.workers, || levy_measure_conditions(&spec, &params))?;
        let mut csv = String::from("condition,n,partial_sum\n");
        for c in &report.conditions {
            for (n, v) in &c.partial_sums {
                let _ = writeln!(csv, "{},{n},{v}", c.kind.label());
            }
            out.line(format!(
                "condition {}: {} ({:?})",
                c.kind.label(),
                c.value,
                c.trend
            ));
            out.verdict(
                &format!("condition_{}", c.kind.label()),
                format!("{:?}", c.trend),
            );
        }
        out.outputs.push(write_output(
            &ctx.out,
            &format!("{name}_conditions.csv"),
            &csv,
        )?);
    }
    Ok(out)
}

fn analyze_tau(cfg: &mut Config, ctx: &Context) -> Result<Outcome, CliError> {
    let rho = cfg.measure()?;
    let q = Config::required(cfg.q, "q")?;
    let method = match cfg.method.get_or_insert_with(|| "analytic".into()).as_str() {
        "analytic" => TauMethod::Analytic,
        "numeric" => TauMethod::NumericGrid,
        other => {
            return Err(CliError::Usage(format!(
                "unknown tau method `{other}` (analytic or numeric)"
            )))
        }
    };
    let name = cfg.name("tau");
    let t = rho.tau_indices(q, method)?;
    let mut out = Outcome::default();
    out.line(format!("{},{}", t.tau_upper, t.tau_lower));
    if t.ambiguous {
        out.line(format!(
            "warning: the log-log fit is poor (residual {})",
            t.residual
        ));
    }
    out.verdict("tau_upper", t.tau_upper);
    out.verdict("tau_lower", t.tau_lower);
    out.verdict("ambiguous", t.ambiguous);
    let csv = format!(
        "tau_upper,tau_lower,q,method,uncertainty,residual,ambiguous\n{},{},{},{:?},{},{},{}\n",
        t.tau_upper, t.tau_lower, t.q, t.method, t.uncertainty, t.residual, t.ambiguous
    );
    out.outputs
        .push(write_output(&ctx.out, &format!("{name}_tau.csv"), &csv)?);
    Ok(out)
}

fn simulate(cfg: &mut Config, ctx: &Context) -> Result<Outcome, CliError> {
    let params = cfg.params()?;
    let model_tag = cfg.model.get_or_insert_with(|| "stable".into()).clone();
    let mut out = Outcome::default();
    let model = match model_tag.as_str() {
        "stable" => {
            let alpha = cfg.alpha()?;
            if let Ok(v) = stable_verdict(&params, alpha) {
                out.verdict("analytic_induced", v.induced);
                out.line(format!(
                    "analytic: {} ({})",
                    if v.induced { "induced" } else { "not induced" },
                    v.reason
                ));
            }
            SimulationModel::CanonicalStable { alpha }
        }
        "hedgehog" => {
            let (spec, _) = hedgehog_spec(cfg, &params)?;
            if let Ok(v) = hedgehog_verdict(&spec, &params) {
                out.verdict("analytic_outcome", format!("{:?}", v.outcome));
                out.line(format!("analytic: {:?}", v.outcome));
            }
            SimulationModel::Hedgehog(spec)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown model `{other}` (stable or hedgehog)"
            )))
        }
    };
    let enumeration = cfg.enumeration(params.d)?;
    let budget = cfg.budget(1 << 16);
    let replicas = *cfg.replicas.get_or_insert(400);
    let name = cfg.name("simulate");
    let sim = SimulationConfig {
        params,
        enumeration,
        grid: geometric_grid(&enumeration, budget),
        replicas,
        seed: cfg.seed(),
        execution: Execution::Parallel,
    };
    let curve = with_workers(ctx.workers, || simulate_norm_curve(&model, &sim))?;
    out.outputs.push(write_output(
        &ctx.out,
        &format!("{name}_norms.csv"),
        &curve.to_csv(),
    )?);
    match divergence_diagnostic(&curve) {
        Ok(dg) => {
            out.line(format!("diagnostic: {:?} (slope {})", dg.verdict, dg.slope));
            out.verdict("diagnostic", format!("{:?}", dg.verdict));
            out.verdict("slope", dg.slope);
        }
        Err(e) => {
            out.line(format!("diagnostic: unavailable ({e})"));
            out.verdict("diagnostic", "Unavailable");
        }
    }
    Ok(out)
}

fn diagram(cfg: &mut Config, ctx: &Context) -> Result<Outcome, CliError> {
    let d = *cfg.d.get_or_insert(1);
    let p_min = *cfg.p_min.get_or_insert(1.05);
    let p_max = *cfg.p_max.get_or_insert(20.0);
    let lo = *cfg.window_min.get_or_insert(-1.5 * d as f64);
    let hi = *cfg.window_max.get_or_insert(0.5);
    let res = *cfg.resolution.get_or_insert(200);
    let name = cfg.name("diagram");
    let grid = triebel_grid((p_min, p_max), (lo, hi), d, (res, res))?;
    let mut out = Outcome::default();
    for (plane, tag) in [(Plane::S, "s_plane"), (Plane::W, "w_plane")] {
        let mut buf = Vec::new();
        write_grid_csv(&grid, plane, &mut buf).map_err(|e| CliError::Io(e.to_string()))?;
        let text = String::from_utf8(buf).map_err(|e| CliError::Io(e.to_string()))?;
        out.outputs
            .push(write_output(&ctx.out, &format!("{name}_{tag}.csv"), &text)?);
    }
    out.outputs.push(write_output(
        &ctx.out,
        &format!("{name}.svg"),
        &render_svg(&grid),
    )?);
    out.verdict("cells_per_plane", grid.nx * grid.ny);
    for o in &out.outputs {
        out.stdout
            .push_str(&format!("wrote {}\n", o.path.display()));
    }
    Ok(out)
}
