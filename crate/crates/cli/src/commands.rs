use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use talabounds_core::bounds::{
    bound_report, hatami_disproof, hatami_ratio_closed_form, hatami_ratio_exact,
};
use talabounds_core::hyper::{level4_search_with, symmetrization_all, Level4Search};
use talabounds_core::io::{
    measure_from_json, measure_to_json, spectrum_from_json, spectrum_to_json, table_from_json,
    table_to_json,
};
use talabounds_core::montecarlo::{mc_delta_norms, mc_sensitivity, mc_variance, FamilyOracle};
use talabounds_core::{
    forward_transform, inverse_transform, Error, Estimate, Family, FamilyName, HatamiDisproof,
    LetterBasis, Measure, OrthonormalBasis,
};

use crate::error::CliError;
use crate::output::{sibling_measure_path, table_csv, write_report, write_text, Inputs};
use crate::GlobalOpts;

type CmdResult = Result<(), CliError>;

fn load_measure(inputs: &mut Inputs, path: &Path) -> Result<Measure, CliError> {
    Ok(measure_from_json(&inputs.file(path)?)?)
}

fn check_k(what: &str, k: usize, m: &Measure) -> Result<(), CliError> {
    if k != m.k() {
        return Err(Error::DimensionMismatch(format!(
            "{what} has k = {k}, measure has k = {}",
            m.k()
        ))
        .into());
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Function table file.
    #[arg(long)]
    function: PathBuf,
    /// Measure file.
    #[arg(long)]
    measure: PathBuf,
}

pub fn analyze(a: &AnalyzeArgs, g: &GlobalOpts) -> CmdResult {
    let mut inputs = Inputs::new("analyze");
    let f = table_from_json(&inputs.file(&a.function)?)?;
    let m = load_measure(&mut inputs, &a.measure)?;
    check_k("function", f.k(), &m)?;
    let report = bound_report(&f, &m)?;
    write_report(g.out.as_deref(), g.csv, inputs.envelope(report))
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Function table file, or a spectrum file with --inverse.
    #[arg(long)]
    function: PathBuf,
    /// Measure file.
    #[arg(long)]
    measure: PathBuf,
    /// Map coefficients back to function values.
    #[arg(long)]
    inverse: bool,
}

pub fn transform(a: &TransformArgs, g: &GlobalOpts) -> CmdResult {
    let mut inputs = Inputs::new("transform");
    let text = inputs.file(&a.function)?;
    let m = load_measure(&mut inputs, &a.measure)?;
    let b = OrthonormalBasis::gram_schmidt(&m)?;
    let out = if a.inverse {
        let s = spectrum_from_json(&text)?;
        check_k("spectrum", s.shape().k(), &m)?;
        let f = inverse_transform(&s, &b)?;
        if g.csv {
            table_csv(f.shape(), f.values(), 'x')?
        } else {
            table_to_json(&f)
        }
    } else {
        let f = table_from_json(&text)?;
        check_k("function", f.k(), &m)?;
        let s = forward_transform(&f, &b)?;
        if g.csv {
            table_csv(s.shape(), s.coeffs(), 'y')?
        } else {
            spectrum_to_json(&s)
        }
    };
    write_text(g.out.as_deref(), &out)
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    /// Measure file.
    #[arg(long)]
    measure: PathBuf,
}

#[derive(Debug, Serialize)]
struct BasisPayload {
    k: usize,
    p: Vec<f64>,
    /// `rows[l][j] = c_l(j)`.
    rows: Vec<Vec<f64>>,
    theta: f64,
    gram_deviation: f64,
    p_min: f64,
    p_med: Option<f64>,
}

pub fn basis(a: &BasisArgs, g: &GlobalOpts) -> CmdResult {
    let mut inputs = Inputs::new("basis");
    let m = load_measure(&mut inputs, &a.measure)?;
    let b = OrthonormalBasis::gram_schmidt(&m)?;
    let payload = BasisPayload {
        k: m.k(),
        p: m.probs().to_vec(),
        rows: (0..m.k()).map(|l| b.row(l).to_vec()).collect(),
        theta: b.theta(),
        gram_deviation: b.gram_deviation(),
        p_min: m.p_min(),
        p_med: m.p_med().ok(),
    };
    write_report(g.out.as_deref(), g.csv, inputs.envelope(payload))
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// dictator, parity, majority3, all-equal, corner or random.
    #[arg(long)]
    name: FamilyName,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    /// Weight of letter 0 for all-equal, in (0, 1/k).
    #[arg(long)]
    q: Option<f64>,
    /// Where to write the family's measure; defaults to `<out stem>.measure.json`
    /// for all-equal when --out is given.
    #[arg(long)]
    measure_out: Option<PathBuf>,
}

pub fn family(a: &FamilyArgs, g: &GlobalOpts) -> CmdResult {
    let fam = Family::from_name(a.name, a.q, Some(g.seed))?;
    let f = fam.table(a.k, a.n)?;
    let measure_path = match (&a.measure_out, &g.out) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(out)) if a.name == FamilyName::AllEqual => Some(sibling_measure_path(out)),
        _ => None,
    };
    let text = if g.csv {
        table_csv(f.shape(), f.values(), 'x')?
    } else {
        table_to_json(&f)
    };
    write_text(g.out.as_deref(), &text)?;
    match measure_path {
        Some(p) => write_text(Some(&p), &measure_to_json(&fam.measure(a.k)?))?,
        None if a.name == FamilyName::AllEqual => {
            eprintln!("note: measure not written; pass --measure-out or --out to save it")
        }
        None => {}
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct HyperArgs {
    /// Measure file; the basis is the one adapted to it.
    #[arg(long, conflicts_with = "characters")]
    measure: Option<PathBuf>,
    /// Use the characters of Z_k under the uniform measure (needs --k).
    #[arg(long, requires = "k")]
    characters: bool,
    /// Alphabet size for --characters.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: usize,
    /// Level to probe; every level 1..=n when absent.
    #[arg(long)]
    level: Option<usize>,
    /// Random coefficient draws per level.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
}

#[derive(Debug, Serialize)]
struct HyperPayload {
    k: usize,
    n: usize,
    basis: &'static str,
    seed: u64,
    searches: Vec<Level4Search>,
}

pub fn hyper(a: &HyperArgs, g: &GlobalOpts) -> CmdResult {
    let mut inputs = Inputs::new("hyper");
    let (letters, kind) = match (&a.measure, a.characters, a.k) {
        (Some(path), false, _) => {
            let m = load_measure(&mut inputs, path)?;
            if let Some(k) = a.k {
                check_k("--k", k, &m)?;
            }
            (
                LetterBasis::from_orthonormal(&OrthonormalBasis::gram_schmidt(&m)?),
                "measure",
            )
        }
        (None, true, Some(k)) => (LetterBasis::characters(k)?, "characters"),
        _ => {
            return Err(CliError::Usage(
                "hyper needs --measure, or --characters with --k".into(),
            ))
        }
    };
    let levels: Vec<usize> = match a.level {
        Some(l) if l > a.n => {
            return Err(CliError::Usage(format!("--level {l} exceeds --n {}", a.n)))
        }
        Some(l) => vec![l],
        None => (1..=a.n).collect(),
    };
    let inputs = inputs
        .param("basis", kind)
        .param("k", letters.k())
        .param("n", a.n)
        .param("levels", format!("{levels:?}"))
        .param("trials", a.trials)
        .param("seed", g.seed);
    let searches = levels
        .iter()
        .map(|&l| level4_search_with(&letters, a.n, l, a.trials, g.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let payload = HyperPayload {
        k: letters.k(),
        n: a.n,
        basis: kind,
        seed: g.seed,
        searches,
    };
    write_report(g.out.as_deref(), g.csv, inputs.envelope(payload))
}

#[derive(Debug, Args)]
pub struct SymcheckArgs {
    /// Measure file.
    #[arg(long)]
    measure: PathBuf,
    #[arg(long)]
    n: usize,
}

#[derive(Debug, Serialize)]
struct FrequencyError {
    y: Vec<usize>,
    error: f64,
}

#[derive(Debug, Serialize)]
struct SymcheckPayload {
    k: usize,
    n: usize,
    max_error: f64,
    frequencies: Vec<FrequencyError>,
}

pub fn symcheck(a: &SymcheckArgs, g: &GlobalOpts) -> CmdResult {
    let mut inputs = Inputs::new("symcheck");
    let m = load_measure(&mut inputs, &a.measure)?;
    let inputs = inputs.param("n", a.n);
    let b = OrthonormalBasis::gram_schmidt(&m)?;
    let frequencies: Vec<FrequencyError> = symmetrization_all(&b, a.n)?
        .into_iter()
        .map(|(y, error)| FrequencyError { y, error })
        .collect();
    let payload = SymcheckPayload {
        k: m.k(),
        n: a.n,
        max_error: frequencies.iter().map(|r| r.error).fold(0.0, f64::max),
        frequencies,
    };
    write_report(g.out.as_deref(), g.csv, inputs.envelope(payload))
}

#[derive(Debug, Args)]
pub struct HatamiArgs {
    /// Largest alphabet size to enumerate exactly.
    #[arg(long, default_value_t = 64)]
    kmax: usize,
}

#[derive(Debug, Serialize)]
struct HatamiRow {
    k: usize,
    exact: f64,
    closed_form: f64,
    abs_diff: f64,
}

#[derive(Debug, Serialize)]
struct HatamiPayload {
    rows: Vec<HatamiRow>,
    max_abs_diff: f64,
    threshold: HatamiDisproof,
    method: &'static str,
}

const HATAMI_METHOD: &str = "corner indicator 1{x1 = x2 = 0} on Z_k^2 under the uniform measure; \
    ratios enumerated exactly for k <= kmax, threshold located on the closed form (1 + 1/k) ln(k) / 20";

pub fn hatami(a: &HatamiArgs, g: &GlobalOpts) -> CmdResult {
    if a.kmax < 2 {
        return Err(CliError::Usage(format!(
            "--kmax must be at least 2, got {}",
            a.kmax
        )));
    }
    let inputs = Inputs::new("hatami").param("kmax", a.kmax);
    let rows = (2..=a.kmax)
        .map(|k| {
            let exact = hatami_ratio_exact(k)?;
            let closed_form = hatami_ratio_closed_form(k as f64);
            Ok(HatamiRow {
                k,
                exact,
                closed_form,
                abs_diff: (exact - closed_form).abs(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let payload = HatamiPayload {
        max_abs_diff: rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max),
        rows,
        threshold: hatami_disproof(),
        method: HATAMI_METHOD,
    };
    write_report(g.out.as_deref(), g.csv, inputs.envelope(payload))
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// Builtin family to sample.
    #[arg(long)]
    family: FamilyName,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    /// Weight of letter 0 for all-equal.
    #[arg(long)]
    q: Option<f64>,
    /// Comma-separated list of variance, delta1:i, delta2:i, sens:i
    /// (coordinates i counted from 1).
    #[arg(long, value_delimiter = ',', required = true)]
    what: Vec<Quantity>,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// Measure file; the family's own measure when absent.
    #[arg(long)]
    measure: Option<PathBuf>,
}

/// One requested estimate; coordinates are 1-based as on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Variance,
    DeltaL1(usize),
    DeltaL2Sq(usize),
    Sensitivity(usize),
}

impl std::str::FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "variance" {
            return Ok(Quantity::Variance);
        }
        let (kind, coord) = s
            .split_once(':')
            .ok_or_else(|| format!("expected variance, delta1:i, delta2:i or sens:i, got '{s}'"))?;
        let i: usize = coord
            .parse()
            .map_err(|_| format!("bad coordinate in '{s}'"))?;
        if i == 0 {
            return Err(format!("coordinates start at 1 in '{s}'"));
        }
        match kind {
            "delta1" => Ok(Quantity::DeltaL1(i)),
            "delta2" => Ok(Quantity::DeltaL2Sq(i)),
            "sens" => Ok(Quantity::Sensitivity(i)),
            _ => Err(format!("unknown quantity '{kind}'")),
        }
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::Variance => write!(f, "variance"),
            Quantity::DeltaL1(i) => write!(f, "delta1:{i}"),
            Quantity::DeltaL2Sq(i) => write!(f, "delta2:{i}"),
            Quantity::Sensitivity(i) => write!(f, "sens:{i}"),
        }
    }
}

#[derive(Debug, Serialize)]
struct McEstimate {
    quantity: String,
    estimate: Estimate,
}

#[derive(Debug, Serialize)]
struct McPayload {
    family: &'static str,
    k: usize,
    n: usize,
    q: Option<f64>,
    estimates: Vec<McEstimate>,
}

pub fn mc(a: &McArgs, g: &GlobalOpts) -> CmdResult {
    let fam = Family::from_name(a.family, a.q, Some(g.seed))?;
    fam.check(a.k, a.n)?;
    let mut inputs = Inputs::new("mc");
    let m = match &a.measure {
        Some(path) => load_measure(&mut inputs, path)?,
        None => fam.measure(a.k)?,
    };
    check_k("family", a.k, &m)?;
    let what = a
        .what
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let inputs = inputs
        .param("family", a.family.as_str())
        .param("k", a.k)
        .param("n", a.n)
        .param("q", format!("{:?}", a.q))
        .param("what", &what)
        .param("samples", a.samples)
        .param("seed", g.seed);
    let oracle = FamilyOracle {
        family: fam,
        k: a.k,
    };
    let coordinate = |i: usize| {
        if i > a.n {
            Err(CliError::Usage(format!(
                "coordinate {i} exceeds n = {}",
                a.n
            )))
        } else {
            Ok(i - 1)
        }
    };
    let mut estimates = Vec::with_capacity(a.what.len());
    for &q in &a.what {
        let estimate = match q {
            Quantity::Variance => mc_variance(&oracle, &m, a.n, a.samples, g.seed)?,
            Quantity::DeltaL1(i) => {
                mc_delta_norms(&oracle, &m, a.n, coordinate(i)?, a.samples, g.seed)?.l1
            }
            Quantity::DeltaL2Sq(i) => {
                mc_delta_norms(&oracle, &m, a.n, coordinate(i)?, a.samples, g.seed)?.l2sq
            }
            Quantity::Sensitivity(i) => {
                mc_sensitivity(&oracle, &m, a.n, coordinate(i)?, a.samples, g.seed)?
            }
        };
        estimates.push(McEstimate {
            quantity: q.to_string(),
            estimate,
        });
    }
    let payload = McPayload {
        family: a.family.as_str(),
        k: a.k,
        n: a.n,
        q: a.q,
        estimates,
    };
    write_report(g.out.as_deref(), g.csv, inputs.envelope(payload))
}
