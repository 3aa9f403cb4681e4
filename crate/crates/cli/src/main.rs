use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ribbon_core::algebra::{
    betti_alpha, check_mean_invariance, express_vertex, extract_generators, point_mass,
    ribbon_amenability_witness, uniform_mean, FiniteAbelianGroup, WITNESS_CHECK_ORDER,
};
use ribbon_core::conjugacy::{check_conjugacy, ConjugacyError, ConjugacyMode, ConjugacyWitness};
use ribbon_core::dynamics::{check_continuity, classify};
use ribbon_core::elemset::{Carrier, ElemSet};
use ribbon_core::harness::{
    export_dot, generate_document, parse, render, AnalysisReport, Document, GenConfig, GenProbe,
};
use ribbon_core::proximity::{
    check_axioms, AxiomFamily, AxiomStatus, Budget, Mode, ProbeTable, ProximitySpace,
};
use ribbon_core::scalar::Scalar;

#[derive(Parser)]
#[command(
    name = "ribbon",
    version,
    about = "Descriptive proximity, ribbon complexes and fixed-set dynamics"
)]
struct Cli {
    /// Seed for sampled checks and generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Samples per check when a carrier is too large for exhaustive search.
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Spatial,
    Descriptive,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Spatial => Mode::Spatial,
            ModeArg::Descriptive => Mode::Descriptive,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConjugacyArg {
    Strict,
    Descriptive,
    Weak,
    WeakDescriptive,
}

impl From<ConjugacyArg> for ConjugacyMode {
    fn from(m: ConjugacyArg) -> ConjugacyMode {
        match m {
            ConjugacyArg::Strict => ConjugacyMode::Strict,
            ConjugacyArg::Descriptive => ConjugacyMode::Descriptive,
            ConjugacyArg::Weak => ConjugacyMode::Weak,
            ConjugacyArg::WeakDescriptive => ConjugacyMode::WeakDescriptive,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbeKindArg {
    None,
    Pointwise,
    Holistic,
}

#[derive(Subcommand)]
enum Command {
    /// Check proximity axioms on the space of an instance file.
    CheckAxioms {
        file: PathBuf,
        /// cech, descriptive_cech or lodato; all applicable families by default.
        #[arg(long)]
        family: Option<AxiomFamily>,
        #[arg(long)]
        probe: Option<String>,
    },
    /// Check that the cells form a valid planar CW complex.
    CwCheck { file: PathBuf },
    /// Betti number 2k + n of every ribbon.
    Betti { file: PathBuf },
    /// Generators of each ribbon's group representation.
    Generators {
        file: PathBuf,
        #[arg(long)]
        ribbon: Option<String>,
    },
    /// Write ribbon vertices as multiples of their nearest generator.
    Express {
        file: PathBuf,
        #[arg(long)]
        ribbon: String,
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Check invariance of a mean on a finite Abelian group.
    MeanCheck {
        /// Instance file, used with --ribbon.
        file: Option<PathBuf>,
        #[arg(long)]
        ribbon: Option<String>,
        /// Cyclic factor orders, e.g. `3,4` for Z3 x Z4.
        #[arg(long, value_delimiter = ',')]
        orders: Vec<u64>,
        /// `uniform` or `point:<index>`.
        #[arg(long, default_value = "uniform")]
        mean: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Classify subsets as fixed, eventually fixed or almost fixed.
    FixedSets {
        file: PathBuf,
        #[arg(long)]
        map: String,
        /// Ribbon or cycle name, or an id list such as `{a, b}`; every
        /// ribbon by default.
        #[arg(long)]
        set: Vec<String>,
        #[arg(long)]
        probe: Option<String>,
        #[arg(long, default_value_t = ribbon_core::dynamics::DEFAULT_ORBIT_CAP)]
        cap: usize,
    },
    /// Check spatial and descriptive continuity of a map.
    Continuity {
        file: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long)]
        probe: Option<String>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Check that h conjugates f to g, and transport of iterates.
    Conjugacy {
        file: PathBuf,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long, value_enum, default_value_t = ConjugacyArg::Strict)]
        mode: ConjugacyArg,
        #[arg(long)]
        probe: Option<String>,
        #[arg(long, default_value_t = 5)]
        powers: usize,
    },
    /// Generate a random valid instance.
    Generate {
        /// Ranges are `n` or `min:max`.
        #[arg(long, default_value = "1:2")]
        ribbons: String,
        #[arg(long, default_value = "6:10")]
        outer: String,
        #[arg(long, default_value = "4:8")]
        inner: String,
        #[arg(long, default_value = "0:2")]
        bridges: String,
        #[arg(long, default_value = "0:2")]
        intersections: String,
        #[arg(long, value_enum, default_value_t = ProbeKindArg::Pointwise)]
        probe: ProbeKindArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graphviz DOT rendering of a complex.
    ExportDot {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Errors that map to exit code 2.
#[derive(Debug)]
struct UsageError(anyhow::Error);

struct Outcome {
    report: AnalysisReport,
    text: String,
}

fn load(path: &Path) -> Result<Document> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn names(c: &Carrier, s: &ElemSet) -> Value {
    json!(c.names(s))
}

fn probe_name<'a>(doc: &'a Document, probe: &'a Option<String>) -> Option<&'a str> {
    probe.as_deref().or_else(|| doc.default_probe())
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>> {
    let (a, b) = s.split_once(':').unwrap_or((s, s));
    let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("empty range `{s}`");
    }
    Ok(a..=b)
}

fn status_word(s: AxiomStatus) -> &'static str {
    match s {
        AxiomStatus::Holds => "holds",
        AxiomStatus::Violated => "violated",
        AxiomStatus::NotApplicable => "not applicable",
    }
}

fn check_axioms_cmd(
    doc: &Document,
    family: Option<AxiomFamily>,
    probe: Option<&str>,
    budget: &Budget,
) -> Result<Outcome> {
    let space = doc.space(probe)?;
    let families = match family {
        Some(f) => vec![f],
        None if space.probe().is_some() => vec![
            AxiomFamily::Cech,
            AxiomFamily::Lodato,
            AxiomFamily::DescriptiveCech,
        ],
        None => vec![AxiomFamily::Cech, AxiomFamily::Lodato],
    };
    let mut text = String::new();
    let mut results = Vec::new();
    let mut passed = true;
    for fam in families {
        let (reports, carrier) = if fam == AxiomFamily::DescriptiveCech {
            let lifted = match space.probe().map(|p| &p.table) {
                Some(ProbeTable::Holistic(_)) => space.lift_holistic()?,
                Some(ProbeTable::Pointwise(_)) => space.clone(),
                None => bail!("descriptive axioms need a probe"),
            };
            let view = lifted.descriptive()?;
            (check_axioms(&view, fam, budget), lifted.carrier().clone())
        } else {
            (
                check_axioms(&space.spatial(), fam, budget),
                space.carrier().clone(),
            )
        };
        for r in reports {
            passed &= r.status != AxiomStatus::Violated;
            let mode = if r.exhaustive {
                "exhaustive"
            } else {
                "sampled"
            };
            write!(text, "{:<7} {}", r.axiom.to_string(), status_word(r.status))?;
            let witness: Option<Vec<Value>> = r
                .counterexample
                .as_ref()
                .map(|sets| sets.iter().map(|s| names(&carrier, s)).collect());
            if let Some(sets) = &r.counterexample {
                let shown: Vec<String> = sets.iter().map(|s| carrier.format_set(s)).collect();
                write!(text, ": {}", shown.join(", "))?;
            }
            writeln!(text, " ({mode}, {} checked)", r.checked)?;
            results.push(json!({
                "axiom": r.axiom,
                "status": r.status,
                "counterexample": witness,
                "exhaustive": r.exhaustive,
                "checked": r.checked,
            }));
        }
    }
    Ok(Outcome {
        report: AnalysisReport::new("check-axioms", None, passed, json!({ "axioms": results })),
        text,
    })
}

fn cw_check_cmd(doc: &Document) -> Result<Outcome> {
    let report = doc.complex.cw_check();
    let mut text = String::new();
    if report.is_empty() {
        writeln!(
            text,
            "ok: {} vertices, {} edges, {} cycles",
            doc.complex.vertices().len(),
            doc.complex.edges().len(),
            doc.complex.cycles().len()
        )?;
    }
    for v in &report.violations {
        writeln!(text, "violation: {v}")?;
    }
    Ok(Outcome {
        report: AnalysisReport::new(
            "cw-check",
            None,
            report.is_empty(),
            json!({ "violations": report.violations }),
        ),
        text,
    })
}

fn betti_cmd(doc: &Document) -> Result<Outcome> {
    let mut text = String::from("ribbon bridges intersections beta_alpha\n");
    let mut rows = Vec::new();
    for r in doc.complex.ribbons() {
        let beta = betti_alpha(r);
        writeln!(
            text,
            "{} {} {} {}",
            r.name,
            r.bridge_count(),
            r.intersection_count(),
            beta
        )?;
        rows.push(json!({
            "ribbon": r.name,
            "bridges": r.bridge_count(),
            "intersections": r.intersection_count(),
            "beta_alpha": beta,
        }));
    }
    Ok(Outcome {
        report: AnalysisReport::new("betti", None, true, json!({ "ribbons": rows })),
        text,
    })
}

fn generators_cmd(doc: &Document, ribbon: Option<&str>) -> Result<Outcome> {
    let mut text = String::new();
    let mut rows = Vec::new();
    for r in doc.complex.ribbons() {
        if ribbon.is_some_and(|name| name != r.name) {
            continue;
        }
        let gs = extract_generators(r);
        writeln!(text, "{}: {}", r.name, gs.as_slice().join(" "))?;
        rows.push(json!({ "ribbon": r.name, "generators": gs }));
    }
    if let (Some(name), true) = (ribbon, rows.is_empty()) {
        bail!("unknown ribbon `{name}`");
    }
    Ok(Outcome {
        report: AnalysisReport::new("generators", None, true, json!({ "ribbons": rows })),
        text,
    })
}

fn express_cmd(doc: &Document, ribbon: &str, vertex: Option<&str>) -> Result<Outcome> {
    let r = doc
        .complex
        .ribbon(ribbon)
        .ok_or_else(|| anyhow!("unknown ribbon `{ribbon}`"))?;
    let gs = extract_generators(r);
    let targets: Vec<String> = match vertex {
        Some(v) => vec![v.to_string()],
        None => r.vertex_ids().into_iter().collect(),
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for v in &targets {
        let e = express_vertex(r, &gs, v)?;
        writeln!(text, "{}", e.render())?;
        rows.push(serde_json::to_value(&e)?);
    }
    Ok(Outcome {
        report: AnalysisReport::new(
            "express",
            None,
            true,
            json!({ "ribbon": ribbon, "expressions": rows }),
        ),
        text,
    })
}

fn mean_check_cmd(
    doc: Option<&Document>,
    ribbon: Option<&str>,
    orders: &[u64],
    mean: &str,
    trials: usize,
    seed: u64,
) -> Result<Outcome> {
    let group = match (doc, ribbon) {
        (Some(doc), Some(name)) => {
            let r = doc
                .complex
                .ribbon(name)
                .ok_or_else(|| anyhow!("unknown ribbon `{name}`"))?;
            ribbon_amenability_witness(r)?.group
        }
        (None, None) if !orders.is_empty() => FiniteAbelianGroup::new(orders.to_vec())?,
        _ => bail!("give --orders, or a file with --ribbon"),
    };
    if group.order() > WITNESS_CHECK_ORDER {
        bail!("group of order {} is too large to check", group.order());
    }
    let mu = match mean.split_once(':') {
        None if mean == "uniform" => uniform_mean(&group),
        Some(("point", at)) => {
            let at: usize = at.parse().context("point mass index")?;
            if at >= group.order() {
                bail!(
                    "point mass index {at} is outside a group of order {}",
                    group.order()
                );
            }
            point_mass(&group, at)
        }
        _ => bail!("unknown mean `{mean}` (uniform or point:<index>)"),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut failures, mut first) = (0, None);
    for trial in 0..trials {
        let theta: Vec<Scalar> = (0..group.order())
            .map(|_| Scalar::new(rng.random_range(-50..=50), rng.random_range(1..=6)))
            .collect();
        let r = check_mean_invariance(&group, &mu, &theta)?;
        if !r.all_hold() {
            failures += 1;
            first.get_or_insert((trial, r));
        }
    }
    let show = |w: Option<usize>| w.map_or("none".to_string(), |i| i.to_string());
    let factors: Vec<String> = group.factors().iter().map(|m| format!("Z{m}")).collect();
    let mut text = format!(
        "group {} (order {}), {} mean, {trials} trials: ",
        factors.join(" x "),
        group.order(),
        mean
    );
    match &first {
        None => text.push_str("bounded and invariant on every trial\n"),
        Some((trial, r)) => writeln!(
            text,
            "{failures} failures; first at trial {trial} (bounds {}, left witness {}, right witness {})",
            r.bounds_ok,
            show(r.left_witness),
            show(r.right_witness)
        )?,
    }
    Ok(Outcome {
        report: AnalysisReport::new(
            "mean-check",
            None,
            failures == 0,
            json!({
                "group": group.factors(),
                "mean": mean,
                "trials": trials,
                "failures": failures,
                "first_failure": first.map(|(t, r)| json!({ "trial": t, "report": r })),
            }),
        ),
        text,
    })
}

fn fixed_sets_cmd(
    doc: &Document,
    map: &str,
    sets: &[String],
    probe: Option<&str>,
    cap: usize,
) -> Result<Outcome> {
    let space = doc.space(probe)?;
    let f = doc.map(map)?;
    let carrier = space.carrier().clone();
    let specs: Vec<String> = if sets.is_empty() {
        doc.complex
            .ribbons()
            .iter()
            .map(|r| r.name.clone())
            .collect()
    } else {
        sets.to_vec()
    };
    if specs.is_empty() {
        bail!("no --set given and the file has no ribbons");
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    for spec in &specs {
        let a = doc.resolve_set(spec)?;
        let r = classify(&f, &space, &a, cap)?;
        writeln!(text, "{spec} {}", carrier.format_set(&a))?;
        let orbit = match (r.orbit.preperiod, r.orbit.period) {
            (Some(t), Some(p)) => format!("preperiod {t}, period {p}"),
            _ => format!("truncated after {cap} steps"),
        };
        writeln!(text, "  spatial: {} ({orbit})", r.spatial)?;
        writeln!(
            text,
            "  almost_fixed: {}, invariant: {}",
            r.almost_fixed, r.spatial_invariant
        )?;
        if let Some(d) = &r.descriptive {
            writeln!(
                text,
                "  descriptive: {} (description {})",
                d.class, d.description
            )?;
            let show = |t: Option<usize>| t.map_or("none".to_string(), |t| t.to_string());
            writeln!(
                text,
                "  eventual_return: {}, eventual_iterate_fixed: {}, almost: {}, amiable: {}, invariant: {}",
                show(d.eventual_return),
                show(d.eventual_iterate_fixed),
                d.almost,
                d.amiable,
                d.invariant
            )?;
        }
        let mut row = serde_json::to_value(&r)?;
        row["set"] = json!(spec);
        row["elements"] = names(&carrier, &a);
        rows.push(row);
    }
    Ok(Outcome {
        report: AnalysisReport::new(
            "fixed-sets",
            None,
            true,
            json!({ "map": map, "sets": rows }),
        ),
        text,
    })
}

fn continuity_cmd(
    doc: &Document,
    map: &str,
    probe: Option<&str>,
    mode: Option<ModeArg>,
    budget: &Budget,
) -> Result<Outcome> {
    let space = doc.space(probe)?;
    let f = doc.map(map)?;
    let modes = match mode {
        Some(m) => vec![Mode::from(m)],
        None if space.probe().is_some() => vec![Mode::Spatial, Mode::Descriptive],
        None => vec![Mode::Spatial],
    };
    let c = space.carrier();
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut passed = true;
    for m in modes {
        let v = check_continuity(&f, &space, &space, m, budget)?;
        passed &= v.continuous;
        let how = if v.exhaustive {
            "exhaustive"
        } else {
            "sampled"
        };
        match &v.counterexample {
            None => writeln!(text, "{m}: continuous ({how}, {} pairs)", v.checked)?,
            Some((a, b)) => writeln!(
                text,
                "{m}: not continuous: {} is near {} but their images {} and {} are not",
                c.format_set(a),
                c.format_set(b),
                c.format_set(&f.apply(a)),
                c.format_set(&f.apply(b))
            )?,
        }
        if let Some(note) = &v.note {
            writeln!(text, "  {note}")?;
        }
        rows.push(json!({
            "mode": m,
            "continuous": v.continuous,
            "counterexample": v.counterexample.map(|(a, b)| vec![names(c, &a), names(c, &b)]),
            "note": v.note,
            "exhaustive": v.exhaustive,
            "checked": v.checked,
        }));
    }
    Ok(Outcome {
        report: AnalysisReport::new(
            "continuity",
            None,
            passed,
            json!({ "map": map, "modes": rows }),
        ),
        text,
    })
}

#[allow(clippy::too_many_arguments)]
fn conjugacy_cmd(
    doc: &Document,
    f: &str,
    g: &str,
    h: &str,
    mode: ConjugacyMode,
    probe: Option<&str>,
    powers: usize,
    budget: &Budget,
) -> Result<Outcome> {
    let space: ProximitySpace = doc.space(probe)?;
    let (fm, gm, hm) = (doc.map(f)?, doc.map(g)?, doc.map(h)?);
    let c = space.carrier().clone();
    let mut text = String::new();
    let verdict = match check_conjugacy(&fm, &gm, &hm, &space, &space, mode, budget) {
        Ok(v) => v,
        Err(e @ (ConjugacyError::NotAnIsomorphism(_) | ConjugacyError::NotBijective)) => {
            writeln!(text, "{mode}: not conjugate: {e}")?;
            return Ok(Outcome {
                report: AnalysisReport::new(
                    "conjugacy",
                    None,
                    false,
                    json!({ "mode": mode, "holds": false, "failure": e.to_string() }),
                ),
                text,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let mut powers_json = Vec::new();
    let mut passed = verdict.holds;
    if verdict.holds {
        writeln!(
            text,
            "{mode}: {h} conjugates {f} to {g} ({} subsets checked)",
            verdict.checked
        )?;
        let w = ConjugacyWitness::establish(fm, gm, hm, space.clone(), space, mode, budget)?;
        for n in 1..=powers {
            let p = w.transport_power(n, budget)?;
            passed &= p.holds;
            match p.counterexample {
                None => writeln!(text, "  n={n}: holds")?,
                Some(a) => writeln!(text, "  n={n}: fails on {}", c.format_set(&a))?,
            }
            powers_json.push(json!({
                "n": n,
                "holds": p.holds,
                "counterexample": p.counterexample.map(|a| names(&c, &a)),
            }));
        }
    } else {
        match (&verdict.counterexample, &verdict.failure) {
            (Some(a), _) => writeln!(
                text,
                "{mode}: not conjugate: relation fails on {}",
                c.format_set(a)
            )?,
            (None, Some(why)) => writeln!(text, "{mode}: not conjugate: {why}")?,
            (None, None) => writeln!(text, "{mode}: not conjugate")?,
        }
    }
    let mut results = serde_json::to_value(&verdict)?;
    results["counterexample"] = json!(verdict.counterexample.map(|a| names(&c, &a)));
    results["powers"] = json!(powers_json);
    Ok(Outcome {
        report: AnalysisReport::new("conjugacy", None, passed, results),
        text,
    })
}

fn write_or_return(out: Option<&Path>, body: String) -> Result<String> {
    match out {
        Some(path) => {
            std::fs::write(path, &body)
                .with_context(|| format!("cannot write {}", path.display()))?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(body),
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let mut budget = Budget {
        seed: cli.seed,
        ..Budget::default()
    };
    if let Some(samples) = cli.budget {
        budget.samples = samples;
    }
    let with_input = |mut o: Outcome, path: &Path| {
        o.report.input = Some(path.display().to_string());
        o
    };
    let usage = |e: anyhow::Error| anyhow::Error::new(UsageError(e));
    match &cli.command {
        Command::CheckAxioms {
            file,
            family,
            probe,
        } => {
            let doc = load(file).map_err(usage)?;
            Ok(with_input(
                check_axioms_cmd(&doc, *family, probe_name(&doc, probe), &budget)?,
                file,
            ))
        }
        Command::CwCheck { file } => {
            Ok(with_input(cw_check_cmd(&load(file).map_err(usage)?)?, file))
        }
        Command::Betti { file } => Ok(with_input(betti_cmd(&load(file).map_err(usage)?)?, file)),
        Command::Generators { file, ribbon } => {
            let doc = load(file).map_err(usage)?;
            Ok(with_input(
                generators_cmd(&doc, ribbon.as_deref()).map_err(usage)?,
                file,
            ))
        }
        Command::Express {
            file,
            ribbon,
            vertex,
        } => {
            let doc = load(file).map_err(usage)?;
            Ok(with_input(
                express_cmd(&doc, ribbon, vertex.as_deref()).map_err(usage)?,
                file,
            ))
        }
        Command::MeanCheck {
            file,
            ribbon,
            orders,
            mean,
            trials,
        } => {
            let doc = file.as_deref().map(load).transpose().map_err(usage)?;
            let o = mean_check_cmd(
                doc.as_ref(),
                ribbon.as_deref(),
                orders,
                mean,
                *trials,
                cli.seed,
            )
            .map_err(usage)?;
            Ok(match file {
                Some(f) => with_input(o, f),
                None => o,
            })
        }
        Command::FixedSets {
            file,
            map,
            set,
            probe,
            cap,
        } => {
            let doc = load(file).map_err(usage)?;
            Ok(with_input(
                fixed_sets_cmd(&doc, map, set, probe_name(&doc, probe), *cap).map_err(usage)?,
                file,
            ))
        }
        Command::Continuity {
            file,
            map,
            probe,
            mode,
        } => {
            let doc = load(file).map_err(usage)?;
            Ok(with_input(
                continuity_cmd(&doc, map, probe_name(&doc, probe), *mode, &budget)
                    .map_err(usage)?,
                file,
            ))
        }
        Command::Conjugacy {
            file,
            f,
            g,
            h,
            mode,
            probe,
            powers,
        } => {
            let doc = load(file).map_err(usage)?;
            Ok(with_input(
                conjugacy_cmd(
                    &doc,
                    f,
                    g,
                    h,
                    (*mode).into(),
                    probe_name(&doc, probe),
                    *powers,
                    &budget,
                )
                .map_err(usage)?,
                file,
            ))
        }
        Command::Generate {
            ribbons,
            outer,
            inner,
            bridges,
            intersections,
            probe,
            out,
        } => {
            let cfg = GenConfig {
                seed: cli.seed,
                ribbons: parse_range(ribbons).map_err(usage)?,
                outer_len: parse_range(outer).map_err(usage)?,
                inner_len: parse_range(inner).map_err(usage)?,
                bridges: parse_range(bridges).map_err(usage)?,
                intersections: parse_range(intersections).map_err(usage)?,
                probe: match probe {
                    ProbeKindArg::None => GenProbe::None,
                    ProbeKindArg::Pointwise => GenProbe::Pointwise {
                        arity: 1,
                        values: 0..=3,
                    },
                    ProbeKindArg::Holistic => GenProbe::Holistic {
                        arity: 1,
                        values: 0..=3,
                    },
                },
            };
            let doc = generate_document(&cfg)?;
            let body = render(&doc);
            let results = json!({ "instance": body });
            Ok(Outcome {
                text: write_or_return(out.as_deref(), body)?,
                report: AnalysisReport::new("generate", None, true, results),
            })
        }
        Command::ExportDot { file, out } => {
            let doc = load(file).map_err(usage)?;
            let dot = export_dot(&doc.complex);
            let results = json!({ "dot": dot });
            Ok(with_input(
                Outcome {
                    text: write_or_return(out.as_deref(), dot)?,
                    report: AnalysisReport::new("export-dot", None, true, results),
                },
                file,
            ))
        }
    }
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(o) => {
            match format {
                Format::Text => print!("{}", o.text),
                Format::Structured => println!("{}", o.report.to_json()),
            }
            if o.report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
