//! `toric-ihc`: validate fans, list contractible classes, count lines and
//! verify that curve classes on complete intersections are generated by
//! rational curves.

use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use toric_ihc::arith::Int;
use toric_ihc::chern::ChernVerdict;
use toric_ihc::chow::GradedRing;
use toric_ihc::contraction::{build_contraction, enumerate_candidates, CandidateStatus};
use toric_ihc::corpus::{self, parse_divisor};
use toric_ihc::json as js;
use toric_ihc::pipeline::{
    decompose_effective, ihc_verdict, ClassReport, Decomposition, DecompositionOutcome, GenerationVerdict, IHCReport,
    SCHEMA_VERSION,
};
use toric_ihc::{validate_fan, CurveClass, DivisorClass, Fan, FanError, ToricVariety};

#[derive(Parser)]
#[command(name = "toric-ihc", version, about = "Lines on complete intersections in smooth projective toric varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check smoothness, completeness and projectivity (exit 1 if not all hold)
    Validate(Common),
    /// List contractible curve classes with their bundle structure
    Classes(Common),
    /// Full report; exit 0 iff the curve lattice is generated by rational curves
    Verify(Common),
    /// Number of lines in each contractible class (or positive-dimensional)
    CountLines(Common),
    /// Decompose effective curve classes into certified contractible classes
    Decompose(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// `corpus:NAME`, `random:N` or a path to a JSON fan
    fan: String,
    /// Hypersurface class: a coefficient vector or terms like `5H-2E` (repeatable)
    #[arg(short = 'H', long = "hypersurface", allow_hyphen_values = true)]
    hypersurfaces: Vec<String>,
    /// Add the anticanonical hypersurface
    #[arg(long)]
    anticanonical: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for per-class verification (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed for `random:N` fans
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Curve class selector: an index into the contractible classes or a vector
    #[arg(long = "class", allow_hyphen_values = true)]
    classes: Vec<String>,
    /// Curve class to decompose (repeatable)
    #[arg(long = "target", allow_hyphen_values = true)]
    targets: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// A resolved job: the fan with its divisor vocabulary and hypersurfaces.
struct Job {
    source: String,
    fan: Fan,
    generators: Vec<(String, DivisorClass)>,
    default_hypersurfaces: Vec<DivisorClass>,
    opts: Common,
}

/// Exit 2: unreadable input, as opposed to a negative answer.
#[derive(Debug)]
struct InputError(anyhow::Error);

fn input<T>(r: Result<T>) -> std::result::Result<T, InputError> {
    r.map_err(InputError)
}

fn load(opts: &Common) -> Result<Job> {
    let spec = opts.fan.as_str();
    if let Some(name) = spec.strip_prefix("corpus:") {
        let entry = corpus::lookup(name).ok_or_else(|| {
            let names: Vec<_> = corpus::entries().iter().map(|e| e.name).collect();
            anyhow!("unknown corpus entry `{name}` (known: {})", names.join(", "))
        })?;
        return Ok(Job {
            source: spec.to_string(),
            fan: entry.fan,
            generators: entry.generators,
            default_hypersurfaces: Vec::new(),
            opts: opts.clone(),
        });
    }
    if let Some(n) = spec.strip_prefix("random:") {
        let index: u64 = n.parse().with_context(|| format!("bad random index `{n}`"))?;
        let inst = corpus::random_instance(opts.seed, index);
        return Ok(Job {
            source: format!("{spec} (seed {}, {})", opts.seed, inst.name),
            fan: inst.fan,
            generators: Vec::new(),
            default_hypersurfaces: inst.hypersurfaces,
            opts: opts.clone(),
        });
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("cannot read `{spec}`"))?;
    let fan = Fan::from_json(&text).map_err(|e| match e {
        FanError::Parse(_) => anyhow!("{spec}: {e}"),
        e => anyhow::Error::new(e).context(spec.to_string()),
    })?;
    Ok(Job {
        source: spec.to_string(),
        fan,
        generators: Vec::new(),
        default_hypersurfaces: Vec::new(),
        opts: opts.clone(),
    })
}

impl Job {
    fn hypersurfaces(&self) -> Result<Vec<DivisorClass>> {
        let mut out = Vec::new();
        for h in &self.opts.hypersurfaces {
            out.push(parse_divisor(h, self.fan.n_rays(), &self.generators).map_err(|e| anyhow!("divisor `{h}`: {e}"))?);
        }
        if self.opts.anticanonical {
            out.push(DivisorClass::anticanonical(self.fan.n_rays()));
        }
        if out.is_empty() {
            out = self.default_hypersurfaces.clone();
        }
        Ok(out)
    }

    fn required_hypersurfaces(&self) -> Result<Vec<DivisorClass>> {
        let hs = self.hypersurfaces()?;
        if hs.is_empty() {
            bail!("no hypersurfaces given: use -H or --anticanonical");
        }
        Ok(hs)
    }

    fn curve(&self, text: &str) -> Result<CurveClass> {
        let v = parse_vector(text)?;
        CurveClass::checked(v, &self.fan).map_err(|e| anyhow!("curve class `{text}`: {e}"))
    }
}

fn parse_vector(text: &str) -> Result<Vec<Int>> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']');
    t.split(',')
        .map(|x| x.trim().parse::<Int>().map_err(|_| anyhow!("`{text}` is not an integer vector")))
        .collect()
}

fn emit(format: Format, value: &impl Serialize, text: impl FnOnce() -> String) -> Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Text => print!("{}", text()),
    }
    Ok(())
}

fn vec_str(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

// -- validate

fn cmd_validate(job: &Job) -> Result<u8> {
    let report = validate_fan(&job.fan);
    let valid = report.is_valid();
    let out = json!({
        "schema": SCHEMA_VERSION,
        "command": "validate",
        "fan": job.source,
        "dim": job.fan.dim(),
        "rays": job.fan.n_rays(),
        "max_cones": job.fan.max_cones().len(),
        "valid": valid,
        "report": report,
    });
    emit(job.opts.format, &out, || {
        format!(
            "{}: dim {}, {} rays, {} maximal cones\nsmooth: {}\ncomplete: {}\nprojective: {}\n{}\n",
            job.source,
            job.fan.dim(),
            job.fan.n_rays(),
            job.fan.max_cones().len(),
            report.smooth,
            report.complete,
            report.projective,
            if valid { "valid" } else { "invalid" }
        )
    })?;
    Ok(if valid { 0 } else { 1 })
}

// -- classes

#[derive(Serialize)]
struct ClassEntry {
    #[serde(serialize_with = "js::curve")]
    curve_class: CurveClass,
    status: CandidateStatus,
    extremal: bool,
    e: usize,
    r: usize,
    #[serde(serialize_with = "js::ints")]
    multiplicities: Vec<Int>,
    #[serde(skip_serializing_if = "Option::is_none")]
    structure: Option<Value>,
}

fn cmd_classes(job: &Job) -> Result<u8> {
    let variety = match ToricVariety::new(job.fan.clone()) {
        Ok(v) if v.is_projective() => v,
        Ok(_) => return fail_line(job, "fan is not projective"),
        Err(e) => return fail_line(job, &e.to_string()),
    };
    let mut contractible = Vec::new();
    let mut candidate_only = Vec::new();
    for c in enumerate_candidates(&variety)? {
        let structure = if c.verified {
            let s = build_contraction(&variety, &c)?;
            let (dim_e, dim_b) = s.dims();
            Some(json!({
                "kind": s.kind,
                "dim_e": dim_e,
                "dim_b": dim_b,
                "fiber_dim": s.fiber_dim(),
                "zeta_ray": s.zeta_ray,
                "exceptional_rays": s.exc_rays,
                "base_fan": s.base_fan.to_json(),
                "chern_of_v": s.chern_of_v.iter().map(|x| s.base_ring.named_terms(x)).collect::<Vec<_>>(),
            }))
        } else {
            None
        };
        let entry = ClassEntry {
            multiplicities: c.negative_rays.iter().map(|(_, a)| a.clone()).collect(),
            curve_class: c.curve_class.clone(),
            status: c.status(),
            extremal: c.extremal,
            e: c.e,
            r: c.r,
            structure,
        };
        if c.status() == CandidateStatus::CandidateOnly {
            candidate_only.push(entry);
        } else {
            contractible.push(entry);
        }
    }
    let out = json!({
        "schema": SCHEMA_VERSION,
        "command": "classes",
        "fan": job.source,
        "classes": contractible,
        "candidate_only": candidate_only,
    });
    emit(job.opts.format, &out, || {
        let mut s = format!("{}: {} contractible classes\n", job.source, contractible.len());
        for c in &contractible {
            let st = c.structure.as_ref();
            let _ = writeln!(
                s,
                "  {} {} e={} r={} {} dim E = {}, dim B = {}",
                vec_str(c.curve_class.entries()),
                status_name(c.status),
                c.e,
                c.r,
                st.map(|v| v["kind"].as_str().unwrap_or("").to_string()).unwrap_or_default(),
                st.map(|v| v["dim_e"].to_string()).unwrap_or_default(),
                st.map(|v| v["dim_b"].to_string()).unwrap_or_default(),
            );
        }
        for c in &candidate_only {
            let _ = writeln!(s, "  {} candidate-only (not contractible)", vec_str(c.curve_class.entries()));
        }
        s
    })?;
    Ok(0)
}

fn fail_line(job: &Job, msg: &str) -> Result<u8> {
    let out = json!({"schema": SCHEMA_VERSION, "fan": job.source, "error": msg});
    emit(job.opts.format, &out, || format!("{}: {msg}\n", job.source))?;
    Ok(1)
}

fn status_name(s: CandidateStatus) -> &'static str {
    match s {
        CandidateStatus::VerifiedContractible => "verified-contractible",
        CandidateStatus::ExtremalContractible => "extremal-contractible",
        CandidateStatus::CandidateOnly => "candidate-only",
    }
}

// -- verify

fn verdict_text(c: &ClassReport) -> String {
    match c.verdict() {
        Some(ChernVerdict::Count { value }) => format!("{value} lines"),
        Some(ChernVerdict::PositiveDimensional) => "positive-dimensional family of lines".into(),
        Some(ChernVerdict::RankOverflow) => "rank exceeds dimension, no certificate".into(),
        Some(ChernVerdict::Zero) => "top Chern class vanishes".into(),
        None => c.note.clone().unwrap_or_else(|| "not computed".into()),
    }
}

fn decomposition_text(d: &Decomposition) -> String {
    match &d.outcome {
        DecompositionOutcome::Found { terms } => {
            let parts: Vec<String> = terms
                .iter()
                .map(|t| format!("{} x {}", t.multiplicity, vec_str(t.class.entries())))
                .collect();
            format!("{} = {}", vec_str(d.target.entries()), if parts.is_empty() { "0".into() } else { parts.join(" + ") })
        }
        DecompositionOutcome::NotFound { bound } => format!("{}: none with multiplicities <= {bound}", vec_str(d.target.entries())),
        DecompositionOutcome::NotEffective => format!("{}: not effective", vec_str(d.target.entries())),
    }
}

fn report_text(job: &Job, r: &IHCReport) -> String {
    let h = &r.hypotheses;
    let mut s = String::new();
    let hs: Vec<String> = r.hypersurfaces.iter().map(|d| vec_str(d.coeffs())).collect();
    let _ = writeln!(s, "{}: dim {}, hypersurfaces {}", job.source, h.dim_y, hs.join(" "));
    let _ = writeln!(
        s,
        "hypotheses: fan valid {}, ample {}, dim X = {}, -K_X nef {}",
        h.fan_valid, h.all_ample, h.dim_x, h.minus_kx_nef
    );
    for c in &r.classes {
        let _ = write!(s, "class {} {}", vec_str(c.curve_class.entries()), status_name(c.status));
        if let Some(st) = &c.structure {
            let _ = write!(s, ", E dim {} over B dim {}", st.dim_e, st.dim_b);
        }
        let _ = writeln!(
            s,
            ", degrees {}, -K_X.C = {}: {}{}",
            vec_str(&c.degrees),
            c.minus_kx_degree,
            verdict_text(c),
            if c.certified { " [certified]" } else { "" }
        );
    }
    match &r.verdict {
        GenerationVerdict::GeneratedByRationalCurves => {
            let _ = writeln!(s, "verdict: generated by rational curves");
        }
        GenerationVerdict::Inconclusive { reasons, .. } => {
            let _ = writeln!(s, "verdict: inconclusive ({})", reasons.join("; "));
        }
    }
    if let Some(sg) = &r.semigroup {
        let _ = writeln!(s, "wall classes decompose into certified classes: {}", sg.generated);
    }
    for d in &r.decompositions {
        let _ = writeln!(s, "{}", decomposition_text(d));
    }
    s
}

fn cmd_verify(job: &Job) -> std::result::Result<u8, InputError> {
    let hs = input(job.required_hypersurfaces())?;
    let targets = input(job.opts.targets.iter().map(|t| job.curve(t)).collect::<Result<Vec<_>>>())?;
    let r = input(ihc_verdict(&job.fan, &hs, &targets).map_err(anyhow::Error::from))?;
    input(emit(job.opts.format, &r, || report_text(job, &r)))?;
    Ok(if r.is_generated() { 0 } else { 1 })
}

// -- count-lines

#[derive(Serialize)]
struct LineCount {
    #[serde(serialize_with = "js::curve")]
    curve_class: CurveClass,
    #[serde(serialize_with = "js::ints")]
    degrees: Vec<Int>,
    lines: Value,
    expected_fano_dim: Option<i64>,
}

fn lines_value(c: &ClassReport) -> Value {
    match c.verdict() {
        Some(ChernVerdict::Count { .. }) => Value::Number(js::number(c.count().expect("count"))),
        Some(ChernVerdict::PositiveDimensional) => "positive-dimensional".into(),
        Some(ChernVerdict::RankOverflow) => "rank-overflow".into(),
        Some(ChernVerdict::Zero) => Value::Number(0.into()),
        None => "not-contractible".into(),
    }
}

fn select<'a>(job: &Job, r: &'a IHCReport) -> Result<Vec<&'a ClassReport>> {
    let contractible: Vec<&ClassReport> = r.classes.iter().filter(|c| c.status != CandidateStatus::CandidateOnly).collect();
    if job.opts.classes.is_empty() {
        return Ok(contractible);
    }
    let mut out = Vec::new();
    for sel in &job.opts.classes {
        if let Ok(i) = sel.parse::<usize>() {
            out.push(*contractible.get(i).ok_or_else(|| anyhow!("class index {i} out of range ({} classes)", contractible.len()))?);
        } else {
            let c = job.curve(sel)?;
            out.push(r.classes.iter().find(|x| x.curve_class == c).ok_or_else(|| anyhow!("`{sel}` is not a wall class"))?);
        }
    }
    Ok(out)
}

fn cmd_count_lines(job: &Job) -> std::result::Result<u8, InputError> {
    let hs = input(job.required_hypersurfaces())?;
    let r = input(ihc_verdict(&job.fan, &hs, &[]).map_err(anyhow::Error::from))?;
    if !r.hypotheses.fan_valid {
        input(fail_line(job, "fan is not smooth, complete and projective"))?;
        return Ok(1);
    }
    let selected = input(select(job, &r))?;
    let counts: Vec<LineCount> = selected
        .iter()
        .map(|c| LineCount {
            curve_class: c.curve_class.clone(),
            degrees: c.degrees.clone(),
            lines: lines_value(c),
            expected_fano_dim: c.expected_fano_dim,
        })
        .collect();
    let out = json!({"schema": SCHEMA_VERSION, "command": "count-lines", "fan": job.source, "counts": counts});
    input(emit(job.opts.format, &out, || {
        let mut s = String::new();
        for c in &counts {
            let lines = match &c.lines {
                Value::String(x) => x.clone(),
                v => v.to_string(),
            };
            let _ = writeln!(s, "{} {}", vec_str(c.curve_class.entries()), lines);
        }
        s
    }))?;
    Ok(0)
}

// -- decompose

fn cmd_decompose(job: &Job) -> std::result::Result<u8, InputError> {
    if job.opts.targets.is_empty() {
        return Err(InputError(anyhow!("no targets given: use --target")));
    }
    let targets = input(job.opts.targets.iter().map(|t| job.curve(t)).collect::<Result<Vec<_>>>())?;
    let hs = input(job.hypersurfaces())?;
    let variety = match ToricVariety::new(job.fan.clone()) {
        Ok(v) if v.is_projective() => v,
        _ => {
            input(fail_line(job, "fan is not smooth, complete and projective"))?;
            return Ok(1);
        }
    };
    // with hypersurfaces, only classes certified on X; otherwise every
    // verified contractible class of Y
    let generators: Vec<CurveClass> = if hs.is_empty() {
        input(enumerate_candidates(&variety).map_err(anyhow::Error::from))?
            .into_iter()
            .filter(|c| c.verified)
            .map(|c| c.curve_class)
            .collect()
    } else {
        input(ihc_verdict(&job.fan, &hs, &[]).map_err(anyhow::Error::from))?.certified_classes()
    };
    let ds: Vec<Decomposition> = input(
        targets
            .iter()
            .map(|t| decompose_effective(&variety, t, &generators))
            .collect::<std::result::Result<_, _>>()
            .map_err(anyhow::Error::from),
    )?;
    let all_found = ds.iter().all(|d| d.terms().is_some());
    let out = json!({
        "schema": SCHEMA_VERSION,
        "command": "decompose",
        "fan": job.source,
        "generators": generators.iter().map(|g| js::numbers(g.entries())).collect::<Vec<_>>(),
        "decompositions": ds,
    });
    input(emit(job.opts.format, &out, || {
        ds.iter().map(|d| decomposition_text(d) + "\n").collect()
    }))?;
    Ok(if all_found { 0 } else { 1 })
}

fn run(cli: Cli) -> std::result::Result<u8, InputError> {
    let (opts, which) = match &cli.command {
        Command::Validate(o) => (o, 0),
        Command::Classes(o) => (o, 1),
        Command::Verify(o) => (o, 2),
        Command::CountLines(o) => (o, 3),
        Command::Decompose(o) => (o, 4),
    };
    let job = match load(opts) {
        Ok(j) => j,
        // a structurally broken fan is an invalid fan, not unreadable input
        Err(e) if which == 0 && e.downcast_ref::<FanError>().is_some() => {
            return input(fail_line_src(&opts.fan, opts.format, &e.to_string()));
        }
        Err(e) => return Err(InputError(e)),
    };
    let go = || match which {
        0 => input(cmd_validate(&job)),
        1 => input(cmd_classes(&job)),
        2 => cmd_verify(&job),
        3 => cmd_count_lines(&job),
        _ => cmd_decompose(&job),
    };
    match opts.jobs {
        Some(n) => {
            let pool = input(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(anyhow::Error::from),
            )?;
            pool.install(go)
        }
        None => go(),
    }
}

fn fail_line_src(source: &str, format: Format, msg: &str) -> Result<u8> {
    let out = json!({"schema": SCHEMA_VERSION, "fan": source, "valid": false, "error": msg});
    emit(format, &out, || format!("{source}: invalid: {msg}\n"))?;
    Ok(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
