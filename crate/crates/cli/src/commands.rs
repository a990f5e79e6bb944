use std::fs;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DVector;
use serde::Serialize;

use hardy_embed::blaschke_eq::{
    frostman_transform, sample_regular_value, solve_blaschke_equation, FrostmanResult, PreimageSet,
    DEFAULT_RESIDUAL_TOL,
};
use hardy_embed::decisions::{
    decide_composition, decide_lfm, decide_polynomial_toeplitz, decide_toeplitz, realize, Construction,
    EmbeddabilityReport, RealizeOptions,
};
use hardy_embed::hardy::{wold_decompose, MatrixMeta, WoldOptions};
use hardy_embed::semigroups::{OperatorSemigroupSample, Semiflow};
use hardy_embed::symbols::schema::{parse, CompositionSymbol, OperatorKind, Problem, SymbolFile};
use hardy_embed::symbols::{BlaschkeProduct, SymbolRef};
use hardy_embed::verify::fixtures::{fixture_pairs, FixturePair};
use hardy_embed::verify::{
    check_isometry, check_noncompactness_proxy, check_semigroup_law, check_strong_continuity,
    check_wold_reconstruction, VerificationRecord,
};
use hardy_embed::C64;

use crate::output::{
    csv_complex, emit, json, read_input, write_file, Failure, EXIT_CHECK_FAILED, EXIT_NO_CONSTRUCTION,
};
use crate::{Common, Format};

type CmdResult = Result<u8, Failure>;

pub const LAW_TOL: f64 = 1e-8;
pub const ISOMETRY_TOL: f64 = 1e-6;
pub const NONCOMPACT_TOL: f64 = 1e-6;
pub const NONCOMPACT_MAX_INDEX: usize = 8;
pub const CONTINUITY_TOL: f64 = 0.2;
/// Continuity is judged only when the smallest positive time is at most this.
pub const CONTINUITY_MAX_FINAL_TIME: f64 = 1.0 / 16.0;
pub const WOLD_TOL: f64 = 1e-8;
/// Round-trip tolerance for conjugated shift embeddings.
pub const CONJUGATION_TOL: f64 = 1e-6;

const TRAJECTORY_POINTS: [(f64, f64); 5] = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (-0.5, 0.0), (0.3, -0.3)];

#[derive(Serialize)]
struct Config<'a> {
    #[serde(rename = "N")]
    n: usize,
    tol: f64,
    seed: u64,
    times: &'a [f64],
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    operator: Option<OperatorKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    symbol_hash: Option<String>,
    config: Config<'a>,
    result: T,
}

fn envelope<'a, T: Serialize>(
    command: &'static str,
    file: Option<&SymbolFile>,
    c: &'a Common,
    result: T,
) -> Envelope<'a, T> {
    Envelope {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        operator: file.map(SymbolFile::kind),
        symbol_hash: file.map(SymbolFile::hash),
        config: Config {
            n: c.n,
            tol: c.tol,
            seed: c.seed,
            times: &c.times,
        },
        result,
    }
}

fn load(c: &Common) -> Result<(Problem, SymbolFile), Failure> {
    let text = read_input(c.input.as_deref())?;
    Ok(parse(&text)?)
}

fn decide(problem: &Problem, tol: f64) -> Result<EmbeddabilityReport, Failure> {
    Ok(match problem {
        Problem::Toeplitz {
            symbol,
            declared_infinite_blaschke,
        } => decide_toeplitz(symbol, *declared_infinite_blaschke)?,
        Problem::PolynomialToeplitz(p) => decide_polynomial_toeplitz(p, tol)?,
        Problem::Composition(sym) => decide_composition(sym, tol)?,
        Problem::LinearFractional(m) => decide_lfm(m, tol)?,
    })
}

fn composition_symbol(problem: &Problem) -> Option<SymbolRef> {
    match problem {
        Problem::Composition(CompositionSymbol::Blaschke(b)) => Some(Arc::new(b.clone())),
        Problem::Composition(CompositionSymbol::Mobius(m)) => Some(Arc::new(*m)),
        Problem::Composition(CompositionSymbol::Singular(s)) => Some(Arc::new(s.clone())),
        Problem::LinearFractional(m) => Some(Arc::new(*m)),
        _ => None,
    }
}

fn blaschke_of(problem: &Problem) -> Result<BlaschkeProduct, Failure> {
    match problem {
        Problem::Composition(CompositionSymbol::Blaschke(b)) => Ok(b.clone()),
        Problem::Toeplitz { symbol, .. } if symbol.singular.is_trivial() && !symbol.outer.has_factors() => {
            if (symbol.outer.constant_factor() - C64::new(1.0, 0.0)).norm() > 1e-15 {
                return Err(Failure::parse("outer constant must be 1 for a Blaschke product input"));
            }
            Ok(symbol.blaschke.clone())
        }
        _ => Err(Failure::parse("input must describe a finite Blaschke product")),
    }
}

pub fn analyze(c: &Common) -> CmdResult {
    let (problem, file) = load(c)?;
    let report = decide(&problem, c.tol)?;
    let text = match c.format {
        Format::Json => json(&envelope("analyze", Some(&file), c, &report)),
        Format::Csv => {
            let construction = match &report.construction {
                None => "none".to_string(),
                Some(Construction::ToeplitzFlow { flow }) => format!("toeplitz_flow: {}", flow.describe()),
                Some(Construction::CompositionFlow { flow }) => format!("composition_flow: {}", flow.describe()),
                Some(Construction::ShiftEmbedding { fixed_point }) => {
                    format!("shift_embedding: {fixed_point}")
                }
            };
            let rows = [
                ("verdict", format!("{:?}", report.verdict)),
                ("governing_result", report.governing_result.clone()),
                ("existence_only", report.existence_only.to_string()),
                ("construction", construction),
                ("citation", report.citation.clone()),
            ];
            let mut s = String::from("field,value\n");
            for (k, v) in rows {
                s.push_str(&format!("{k},\"{}\"\n", v.replace('"', "\"\"")));
            }
            s
        }
    };
    emit(c.out.as_deref(), &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct SemigroupResult {
    analysis: EmbeddabilityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    construction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    resolved_dim: Option<usize>,
    checks: Vec<VerificationRecord>,
    files: Vec<String>,
}

fn law_pairs(times: &[f64]) -> Vec<(f64, f64)> {
    let pos: Vec<f64> = times.iter().copied().filter(|&t| t > 0.0).collect();
    let mut pairs = Vec::new();
    for (i, &t) in pos.iter().enumerate() {
        for &s in &pos[i..] {
            if times.iter().any(|&u| (u - (t + s)).abs() <= 1e-12 * (t + s).max(1.0)) {
                pairs.push((t, s));
            }
        }
    }
    pairs
}

fn unit(n: usize, k: usize) -> DVector<C64> {
    DVector::from_fn(n, |i, _| C64::new(if i == k { 1.0 } else { 0.0 }, 0.0))
}

fn sample_checks(sample: &OperatorSemigroupSample) -> Result<Vec<VerificationRecord>, Failure> {
    let mut out = Vec::new();
    let pairs = law_pairs(&sample.times);
    if !pairs.is_empty() {
        out.push(check_semigroup_law(sample, &pairs, LAW_TOL)?);
    }
    out.push(check_isometry(sample, ISOMETRY_TOL));
    out.push(check_noncompactness_proxy(sample, NONCOMPACT_MAX_INDEX, NONCOMPACT_TOL));
    let smallest = sample
        .times
        .iter()
        .copied()
        .filter(|&t| t > 0.0)
        .fold(f64::INFINITY, f64::min);
    if smallest <= CONTINUITY_MAX_FINAL_TIME && sample.resolved.is_none() {
        let n = sample.n();
        out.push(check_strong_continuity(sample, &[unit(n, 0), unit(n, 1)], CONTINUITY_TOL));
    }
    Ok(out)
}

fn trajectory_csv(flow: &Semiflow, times: &[f64]) -> Result<String, Failure> {
    let mut s = String::from("t,z_re,z_im,phi_re,phi_im\n");
    for &t in times {
        let f = flow.at(t)?;
        for (re, im) in TRAJECTORY_POINTS {
            let z = C64::new(re, im);
            s.push_str(&format!("{t},{},{}\n", csv_complex(z), csv_complex(f.eval(z))));
        }
    }
    Ok(s)
}

fn realize_options(c: &Common) -> RealizeOptions {
    RealizeOptions {
        n: c.n,
        tol: CONJUGATION_TOL,
        ..RealizeOptions::default()
    }
}

/// Builds the sample for an embeddable symbol, or reports the missing
/// construction with exit 3.
fn build_sample(
    c: &Common,
    problem: &Problem,
    report: &EmbeddabilityReport,
) -> Result<OperatorSemigroupSample, Failure> {
    let Some(construction) = &report.construction else {
        return Err(Failure {
            code: EXIT_NO_CONSTRUCTION,
            message: format!(
                "no construction for verdict {:?} ({}): {}",
                report.verdict, report.governing_result, report.citation
            ),
        });
    };
    let phi = composition_symbol(problem);
    Ok(realize(construction, phi.as_ref(), &c.times, &realize_options(c))?)
}

fn time_label(t: f64) -> String {
    format!("t{t}")
}

pub fn semigroup(c: &Common) -> CmdResult {
    let (problem, file) = load(c)?;
    let report = decide(&problem, c.tol)?;
    let sample = match build_sample(c, &problem, &report) {
        Ok(s) => s,
        Err(f) if f.code == EXIT_NO_CONSTRUCTION => {
            let result = SemigroupResult {
                analysis: report,
                construction: None,
                resolved_dim: None,
                checks: Vec::new(),
                files: Vec::new(),
            };
            let doc = json(&envelope("semigroup", Some(&file), c, result));
            match c.out.as_deref() {
                Some(dir) => write_dir_file(dir, "report.json", &doc)?,
                None => emit(None, &doc)?,
            }
            return Err(f);
        }
        Err(f) => return Err(f),
    };
    let checks = sample_checks(&sample)?;

    let mut files = Vec::new();
    if let Some(dir) = c.out.as_deref() {
        fs::create_dir_all(dir).map_err(|e| Failure::numeric(format!("{}: {e}", dir.display())))?;
        let hash = file.hash();
        for (t, op) in sample.times.iter().zip(&sample.operators) {
            let stem = format!("V_{}", time_label(*t));
            let meta = MatrixMeta {
                n: op.n(),
                symbol_hash: hash.clone(),
                tolerance: c.tol,
                time: Some(*t),
            };
            write_dir_file(dir, &format!("{stem}.csv"), &op.to_csv())?;
            write_dir_file(dir, &format!("{stem}.json"), &json(&meta))?;
            files.push(format!("{stem}.csv"));
            files.push(format!("{stem}.json"));
        }
        let flow = match &report.construction {
            Some(Construction::ToeplitzFlow { flow }) | Some(Construction::CompositionFlow { flow }) => Some(flow),
            _ => None,
        };
        if let Some(flow) = flow {
            write_dir_file(dir, "trajectory.csv", &trajectory_csv(flow, &sample.times)?)?;
            files.push("trajectory.csv".into());
        }
        write_dir_file(dir, "sample.json", &json(&sample))?;
        files.push("sample.json".into());
    }

    let result = SemigroupResult {
        analysis: report,
        construction: Some(sample.construction.clone()),
        resolved_dim: sample.resolved.as_ref().map(Vec::len),
        checks,
        files,
    };
    let doc = json(&envelope("semigroup", Some(&file), c, result));
    match c.out.as_deref() {
        Some(dir) => write_dir_file(dir, "report.json", &doc)?,
        None => emit(None, &doc)?,
    }
    Ok(0)
}

fn write_dir_file(dir: &Path, name: &str, content: &str) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::numeric(format!("{}: {e}", dir.display())))?;
    write_file(&dir.join(name), content)
}

pub fn solve(c: &Common, beta: Option<C64>) -> CmdResult {
    let (problem, file) = load(c)?;
    let b = blaschke_of(&problem)?;
    let beta = match beta {
        Some(v) => v,
        None => sample_regular_value(&b, c.seed)?,
    };
    let pre: PreimageSet = solve_blaschke_equation(&b, beta, DEFAULT_RESIDUAL_TOL)?;
    let text = match c.format {
        Format::Json => json(&envelope("solve", Some(&file), c, &pre)),
        Format::Csv => {
            let mut s = String::from("re,im,multiplicity,residual\n");
            for r in &pre.solutions.roots {
                let res = (hardy_embed::symbols::Analytic::eval(&b, r.value) - beta).norm();
                s.push_str(&format!("{},{},{res:e}\n", csv_complex(r.value), r.multiplicity));
            }
            s
        }
    };
    emit(c.out.as_deref(), &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct FrostmanReport {
    lambda: C64,
    #[serde(flatten)]
    result: FrostmanResult,
}

pub fn frostman(c: &Common, lambda: Option<C64>) -> CmdResult {
    let (problem, file) = load(c)?;
    let b = blaschke_of(&problem)?;
    let lambda = match lambda {
        Some(v) => v,
        None => sample_regular_value(&b, c.seed)?,
    };
    let result = frostman_transform(&b, lambda, c.tol.max(DEFAULT_RESIDUAL_TOL))?;
    let text = match c.format {
        Format::Json => json(&envelope("frostman", Some(&file), c, FrostmanReport { lambda, result })),
        Format::Csv => {
            let mut s = String::from("re,im,multiplicity\n");
            let p = &result.product;
            if p.origin_order() > 0 {
                s.push_str(&format!("{},{}\n", csv_complex(C64::new(0.0, 0.0)), p.origin_order()));
            }
            for z in p.zeros() {
                s.push_str(&format!("{},{}\n", csv_complex(z.alpha), z.multiplicity));
            }
            s
        }
    };
    emit(c.out.as_deref(), &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct LevelEntry {
    level: usize,
    wandering_index: usize,
    /// Monomial degrees carrying coefficients above `1e-9`.
    support: Vec<usize>,
    vector: Vec<C64>,
}

#[derive(Serialize)]
struct WoldListing {
    #[serde(rename = "N")]
    n: usize,
    unitary_dim: usize,
    wandering_dim: usize,
    resolved: usize,
    residual_dim: usize,
    orthonormality_defect: f64,
    levels: Vec<LevelEntry>,
}

pub fn wold(c: &Common) -> CmdResult {
    let (problem, file) = load(c)?;
    let psi = composition_symbol(&problem).ok_or_else(|| Failure::parse("wold needs a composition symbol"))?;
    let w = wold_decompose(psi.as_ref(), c.n, &WoldOptions::default())?;
    let levels: Vec<LevelEntry> = w
        .levels
        .iter()
        .enumerate()
        .flat_map(|(level, lv)| {
            lv.iter().map(move |v| LevelEntry {
                level,
                wandering_index: v.wandering_index,
                support: (0..v.vector.len()).filter(|&k| v.vector[k].norm() > 1e-9).collect(),
                vector: v.vector.clone(),
            })
        })
        .collect();
    let listing = WoldListing {
        n: w.n,
        unitary_dim: w.unitary_basis.len(),
        wandering_dim: w.wandering_basis.len(),
        resolved: w.resolved_count(),
        residual_dim: w.residual_dim,
        orthonormality_defect: w.orthonormality_defect(),
        levels,
    };
    let text = match c.format {
        Format::Json => json(&envelope("wold", Some(&file), c, &listing)),
        Format::Csv => {
            let mut s = String::from("level,wandering_index,support\n");
            for e in &listing.levels {
                let sup: Vec<String> = e.support.iter().map(usize::to_string).collect();
                s.push_str(&format!("{},{},{}\n", e.level, e.wandering_index, sup.join(" ")));
            }
            s
        }
    };
    emit(c.out.as_deref(), &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyResult {
    source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    analysis: Option<EmbeddabilityReport>,
    checks: Vec<VerificationRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    fixture_pairs: Vec<FixturePair>,
    failed: usize,
}

pub fn verify(c: &Common) -> CmdResult {
    let (result, file) = match c.input.as_deref() {
        None => {
            let pairs = fixture_pairs()?;
            let failed = pairs.iter().filter(|p| !p.sound()).count();
            let r = VerifyResult {
                source: "self_test",
                analysis: None,
                checks: Vec::new(),
                fixture_pairs: pairs,
                failed,
            };
            (r, None)
        }
        Some(path) => {
            let text = read_input(Some(path))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Failure::parse(format!("line {}: {e}", e.line())))?;
            if value.get("operators").is_some() {
                let sample: OperatorSemigroupSample =
                    serde_json::from_value(value).map_err(|e| Failure::parse(format!("sample: {e}")))?;
                if sample.operators.len() != sample.times.len() || sample.operators.is_empty() {
                    return Err(Failure::parse("sample: times and operators differ in length"));
                }
                let checks = sample_checks(&sample)?;
                (
                    VerifyResult {
                        source: "sample",
                        analysis: None,
                        failed: checks.iter().filter(|r| r.failed()).count(),
                        checks,
                        fixture_pairs: Vec::new(),
                    },
                    None,
                )
            } else {
                let (problem, file) = parse(&text)?;
                let report = decide(&problem, c.tol)?;
                let sample = build_sample(c, &problem, &report)?;
                let mut checks = sample_checks(&sample)?;
                if let Some(Construction::ShiftEmbedding { fixed_point }) = &report.construction {
                    if fixed_point.norm() == 0.0 {
                        let psi = composition_symbol(&problem).expect("composition problem");
                        checks.push(check_wold_reconstruction(psi.as_ref(), c.n, WOLD_TOL)?);
                    }
                }
                (
                    VerifyResult {
                        source: "symbol",
                        analysis: Some(report),
                        failed: checks.iter().filter(|r| r.failed()).count(),
                        checks,
                        fixture_pairs: Vec::new(),
                    },
                    Some(file),
                )
            }
        }
    };
    let failed = result.failed;
    emit(c.out.as_deref(), &json(&envelope("verify", file.as_ref(), c, result)))?;
    Ok(if failed > 0 { EXIT_CHECK_FAILED } else { 0 })
}
