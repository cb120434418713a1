//! Jobs run by the command-line tool and the reports they emit.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::base_change::{
    check_ascent, check_descent, counterexample_exhibits, push_complex, spectral_compare,
    validate_exhibit, AscentReport, DescentReport, DescentStatus, ExhibitKind, ExhibitReport,
    SpectralReport,
};
use crate::error::InputError;
use crate::harness::{run_properties, HarnessConfig, HarnessReport};
use crate::hom::{classify_hom, HomClassification};
use crate::json::{complex_to_json, parse_input, ComplexJson, Input};
use crate::module::{cokernel, in_d_sigma, in_gen, in_t_sigma, CanonicalForm, TwoTermComplex};
use crate::oracle::{oracle_filter, oracle_silting, OracleReport};
use crate::ring::Ideal;
use crate::silting::{
    gabriel_filter, is_silting, thomason_set, ComponentFilter, DecisionReport,
    GabrielFilterDescription, ThomasonSet, Verdict, Witness,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Check,
    Spectrum,
    Filter,
    Basechange,
    Proptest,
    Oracle,
    Exhibit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub config: HarnessConfig,
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    Violation = 1,
    InputError = 2,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: ExitStatus,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleMembership {
    pub module: CanonicalForm,
    pub in_d_sigma: bool,
    pub in_gen: bool,
    pub in_t_sigma: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    #[serde(flatten)]
    pub decision: DecisionReport,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<ModuleMembership>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseChangeReport {
    pub hom: String,
    pub classification: HomClassification,
    pub push: ComplexJson,
    pub source_verdict: Verdict,
    pub push_report: DecisionReport,
    /// Present when the source complex is silting.
    pub ascent: Option<AscentReport>,
    pub descent: DescentReport,
    /// Present when the map is faithfully flat.
    pub spectral: Option<SpectralReport>,
    pub violation: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCommandReport {
    pub engine_verdict: Verdict,
    pub oracle: OracleReport,
    pub agrees: bool,
    /// Present when the engine says silting.
    pub engine_filter: Option<Vec<Ideal>>,
    pub oracle_filter: Option<Vec<Ideal>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhibitEntry {
    pub complex: ComplexJson,
    #[serde(flatten)]
    pub report: ExhibitReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhibitListReport {
    pub exhibits: Vec<ExhibitEntry>,
}

fn input_error(msg: String) -> Outcome {
    Outcome {
        status: ExitStatus::InputError,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    }
}

fn read_input(job: &JobSpec) -> Result<Input, String> {
    let path = job
        .input
        .as_ref()
        .ok_or_else(|| "this command needs --input PATH".to_string())?;
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_input(&text).map_err(|e| match e {
        InputError::Json { .. } => format!("{}: {e}", path.display()),
        InputError::Field { .. } => format!("{}: {e}", path.display()),
    })
}

fn need_complex(input: &Input) -> Result<TwoTermComplex, String> {
    input
        .complex
        .clone()
        .ok_or_else(|| "input has no \"complex\" field".to_string())
}

fn emit<T: Serialize>(job: &JobSpec, value: &T, text: impl FnOnce() -> String) -> String {
    if job.json {
        let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
        s.push('\n');
        s
    } else {
        text()
    }
}

pub fn run(job: &JobSpec) -> Outcome {
    match run_inner(job) {
        Ok((status, stdout)) => Outcome {
            status,
            stdout,
            stderr: String::new(),
        },
        Err(msg) => input_error(msg),
    }
}

fn run_inner(job: &JobSpec) -> Result<(ExitStatus, String), String> {
    if job.config.iters == 0 || job.config.bound == 0 {
        return Err("--iters and --bound must be positive".into());
    }
    match job.command {
        Command::Check => {
            let input = read_input(job)?;
            let sigma = need_complex(&input)?;
            let t = cokernel(&sigma);
            let modules = input
                .modules
                .iter()
                .map(|m| ModuleMembership {
                    module: m.canonical(),
                    in_d_sigma: in_d_sigma(&sigma, m).expect("same ring"),
                    in_gen: in_gen(&t, m).expect("same ring"),
                    in_t_sigma: in_t_sigma(&sigma, m).expect("same ring"),
                })
                .collect();
            let report = CheckReport {
                decision: is_silting(&sigma),
                modules,
            };
            Ok((ExitStatus::Ok, emit(job, &report, || render_check(&report))))
        }
        Command::Spectrum => {
            let sigma = need_complex(&read_input(job)?)?;
            let v = thomason_set(&sigma);
            Ok((ExitStatus::Ok, emit(job, &v, || format!("V_sigma = {v}\n"))))
        }
        Command::Filter => {
            let sigma = need_complex(&read_input(job)?)?;
            let f = gabriel_filter(&sigma);
            Ok((ExitStatus::Ok, emit(job, &f, || render_filter(&f))))
        }
        Command::Basechange => {
            let input = read_input(job)?;
            let sigma = need_complex(&input)?;
            let lambda = input
                .hom
                .clone()
                .ok_or_else(|| "input has no \"hom\" field".to_string())?;
            let classification = classify_hom(&lambda).map_err(|e| e.to_string())?;
            let push = push_complex(&sigma, &lambda).map_err(|e| e.to_string())?;
            let source_verdict = is_silting(&sigma).verdict;
            let ascent = (source_verdict == Verdict::Silting)
                .then(|| check_ascent(&sigma, &lambda).expect("silting source"));
            let descent = check_descent(&sigma, &lambda).map_err(|e| e.to_string())?;
            let spectral = classification
                .faithfully_flat
                .then(|| spectral_compare(&sigma, &lambda).expect("faithfully flat"));
            let violation = ascent.as_ref().is_some_and(|a| a.violation)
                || descent.status == DescentStatus::Violation
                || spectral.as_ref().is_some_and(|s| s.violation);
            let report = BaseChangeReport {
                hom: lambda.to_string(),
                classification,
                push: complex_to_json(&push),
                source_verdict,
                push_report: is_silting(&push),
                ascent,
                descent,
                spectral,
                violation,
            };
            Ok((status_of(!violation), emit(job, &report, || render_basechange(&report))))
        }
        Command::Proptest => {
            let input = match &job.input {
                Some(_) => Some(read_input(job)?),
                None => None,
            };
            let report = run_properties(
                input.as_ref().map(|i| &i.ring),
                input.as_ref().and_then(|i| i.hom.as_ref()),
                &job.config,
            );
            Ok((status_of(report.passed()), emit(job, &report, || render_harness(&report))))
        }
        Command::Oracle => {
            let sigma = need_complex(&read_input(job)?)?;
            if !sigma.ring().is_finite() {
                return Err("the oracle needs a finite ring".into());
            }
            let engine_verdict = is_silting(&sigma).verdict;
            let oracle = oracle_silting(&sigma, job.config.bound).map_err(|e| e.to_string())?;
            let silting = engine_verdict == Verdict::Silting;
            let (engine_filter, oracle_filter) = if silting {
                (
                    gabriel_filter(&sigma).ideals,
                    Some(oracle_filter(&sigma, job.config.bound).map_err(|e| e.to_string())?),
                )
            } else {
                (None, None)
            };
            let agrees = silting == oracle.consistent && engine_filter == oracle_filter;
            let report = OracleCommandReport {
                engine_verdict,
                oracle,
                agrees,
                engine_filter,
                oracle_filter,
            };
            Ok((status_of(agrees), emit(job, &report, || render_oracle(&report))))
        }
        Command::Exhibit => {
            let exhibits = [ExhibitKind::DescentNeedsFaithful, ExhibitKind::AscentAnyHom]
                .into_iter()
                .flat_map(counterexample_exhibits)
                .map(|ex| {
                    Ok(ExhibitEntry {
                        complex: complex_to_json(&ex.sigma),
                        report: validate_exhibit(&ex).map_err(|e| e.to_string())?,
                    })
                })
                .collect::<Result<Vec<_>, String>>()?;
            let report = ExhibitListReport { exhibits };
            let ok = report.exhibits.iter().all(|e| e.report.validated);
            Ok((status_of(ok), emit(job, &report, || render_exhibits(&report))))
        }
    }
}

fn status_of(ok: bool) -> ExitStatus {
    if ok {
        ExitStatus::Ok
    } else {
        ExitStatus::Violation
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Silting => "silting",
        Verdict::PartialNotSilting => "partial silting, not silting",
        Verdict::NotPartialSilting => "not partial silting",
    }
}

fn render_form(f: &CanonicalForm) -> String {
    let parts: Vec<String> = f
        .components
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let mut s: Vec<String> = d.torsion.iter().map(|t| format!("R/{t}")).collect();
            if d.free_rank > 0 {
                s.push(format!("R^{}", d.free_rank));
            }
            if s.is_empty() {
                s.push("0".into());
            }
            format!("[{i}] {}", s.join(" + "))
        })
        .collect();
    parts.join(", ")
}

fn render_filter(f: &GabrielFilterDescription) -> String {
    let mut out = String::new();
    for (i, c) in f.components.iter().enumerate() {
        let desc = match c {
            ComponentFilter::AllIdeals => "all ideals".to_string(),
            ComponentFilter::UnitOnly => "unit ideal only".to_string(),
            ComponentFilter::ComaximalWith { d } => format!("ideals (a) with gcd(a, {d}) = 1"),
        };
        let _ = writeln!(out, "filter on component {i}: {desc}");
    }
    if let Some(ideals) = &f.ideals {
        let gens: Vec<String> = ideals.iter().map(|i| format!("{:?}", i.generators)).collect();
        let _ = writeln!(out, "ideals: {}", gens.join(" "));
    }
    out
}

fn render_decision(d: &DecisionReport, out: &mut String) {
    let _ = writeln!(out, "verdict: {}", verdict_name(d.verdict));
    match &d.witness {
        Witness::None => {}
        Witness::Defect { defect } => {
            let _ = writeln!(out, "witness: Def(T) = {}", render_form(defect));
        }
        Witness::Fiber { fiber } => {
            let _ = writeln!(
                out,
                "witness: sigma is an isomorphism on the fiber at {} (dim ker {}, dim coker {})",
                fiber.prime, fiber.dim_ker, fiber.dim_coker
            );
        }
    }
    let _ = writeln!(out, "V_sigma = {}", d.thomason);
    out.push_str(&render_filter(&d.filter));
}

fn render_check(r: &CheckReport) -> String {
    let mut out = String::from("complex of finitely generated projectives\n");
    render_decision(&r.decision, &mut out);
    for m in &r.modules {
        let _ = writeln!(
            out,
            "module {}: in D_sigma {}, in Gen(T) {}, in T_sigma {}",
            render_form(&m.module),
            m.in_d_sigma,
            m.in_gen,
            m.in_t_sigma
        );
    }
    out
}

fn render_basechange(r: &BaseChangeReport) -> String {
    let mut out = String::new();
    let c = &r.classification;
    let _ = writeln!(out, "hom: {}", r.hom);
    let _ = writeln!(
        out,
        "surjective {}, flat {}, faithfully flat {}",
        c.surjective, c.flat, c.faithfully_flat
    );
    let _ = writeln!(out, "push: {}", serde_json::to_string(&r.push).expect("serializes"));
    let _ = writeln!(out, "source verdict: {}", verdict_name(r.source_verdict));
    let _ = writeln!(out, "push verdict: {}", verdict_name(r.push_report.verdict));
    match &r.ascent {
        Some(a) => {
            let _ = writeln!(
                out,
                "ascent: push silting {}, criterion {}{}",
                a.push_verdict == Verdict::Silting,
                a.criterion,
                if a.violation { "  THEOREM VIOLATION" } else { "" }
            );
        }
        None => {
            let _ = writeln!(out, "ascent: source not silting, no claim");
        }
    }
    let status = match r.descent.status {
        DescentStatus::Verified => "verified",
        DescentStatus::HypothesisNotMet => "push not silting, no claim",
        DescentStatus::NotApplicable => "hypotheses not applicable (map not faithfully flat)",
        DescentStatus::Violation => "THEOREM VIOLATION",
    };
    let _ = writeln!(out, "descent: {status}");
    if let Some(s) = &r.spectral {
        let _ = writeln!(
            out,
            "spectral: V_sigma = {}, image of V(push) = {}{}",
            s.source_set,
            s.image,
            if s.violation { "  THEOREM VIOLATION" } else { "" }
        );
    }
    out
}

fn render_harness(r: &HarnessReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "rng: {}", r.rng);
    let _ = writeln!(out, "seed {:#x}, iters {}, bound {}", r.seed, r.iters, r.bound);
    for p in &r.properties {
        let _ = writeln!(
            out,
            "{} {} [{}]: {} trials, {} violations",
            if p.passed() { "PASS" } else { "FAIL" },
            p.property,
            p.context,
            p.trials,
            p.violations
        );
        for e in &p.examples {
            let _ = writeln!(out, "    {e}");
        }
    }
    out
}

fn render_oracle(r: &OracleCommandReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "engine: {}", verdict_name(r.engine_verdict));
    let _ = writeln!(
        out,
        "oracle (bound {}, {} modules): {}, T in D_sigma {}",
        r.oracle.bound,
        r.oracle.family_size,
        if r.oracle.consistent { "consistent" } else { "inconsistent" },
        r.oracle.t_in_d_sigma
    );
    for d in &r.oracle.discrepancies {
        let _ = writeln!(
            out,
            "  discrepancy {}: in D_sigma {}, in Gen(T) {}",
            render_form(&d.module),
            d.in_d_sigma,
            d.in_gen
        );
    }
    if let (Some(e), Some(o)) = (&r.engine_filter, &r.oracle_filter) {
        let _ = writeln!(out, "filters agree: {}", e == o);
    }
    let _ = writeln!(out, "{}", if r.agrees { "agreement" } else { "MISMATCH" });
    out
}

fn render_exhibits(r: &ExhibitListReport) -> String {
    let mut out = String::new();
    for e in &r.exhibits {
        let x = &e.report;
        let kind = match x.kind {
            ExhibitKind::DescentNeedsFaithful => "descent-needs-faithful",
            ExhibitKind::AscentAnyHom => "ascent-any-hom",
        };
        let _ = writeln!(out, "{kind}: {}", x.hom);
        let _ = writeln!(out, "  complex: {}", serde_json::to_string(&e.complex).expect("serializes"));
        let _ = writeln!(
            out,
            "  flat {}, faithfully flat {}; source {}; push {}; {}",
            x.classification.flat,
            x.classification.faithfully_flat,
            verdict_name(x.source_verdict),
            verdict_name(x.push_verdict),
            if x.validated { "validated" } else { "NOT VALIDATED" }
        );
    }
    out
}

/// Parses a report emitted with `--json` back into its type.
pub fn parse_report<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, serde_json::Error> {
    serde_json::from_str(text)
}

pub type SpectrumReport = ThomasonSet;
pub type FilterReport = GabrielFilterDescription;
