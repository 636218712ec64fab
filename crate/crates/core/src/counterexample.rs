//! The sharpness family (all-ones matrix with top-left entry `1 + p^l`,
//! `l = 2 ord_p(n)`) and randomized verification campaigns.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charpoly::{char_poly, newton_polygon, root_valuations, CharPoly, NewtonPolygon, RootValuation, Slope};
use crate::error::{Error, Result};
use crate::field::{is_prime, Exact, FieldContext, FieldKind, FpPoly, RatFunc, Valuation};
use crate::linalg::{MatrixJson, RationalMatrix};
use crate::perron::{analyze_with, certify_strict_max, check_hypothesis, AnalyzeOptions, PerronReport, Status};

/// Parameters of one member of the family; `l = 2 ord_p(n)` is forced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CounterexampleSpec {
    pub p: u64,
    pub n: usize,
    pub ell: i64,
}

impl CounterexampleSpec {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 || !(n as u64).is_multiple_of(p) {
            return Err(Error::InvalidCounterexample(format!("p = {p} must divide n = {n}")));
        }
        let mut o = 0;
        let mut m = n as u64;
        while m.is_multiple_of(p) {
            m /= p;
            o += 1;
        }
        Ok(Self { p, n, ell: 2 * o })
    }

    pub fn p_to_ell(&self) -> BigInt {
        BigInt::from(self.p).pow(self.ell as u32)
    }

    /// `c_{n-1} = -(n + p^l)`
    pub fn expected_c_top(&self) -> BigInt {
        -(BigInt::from(self.n) + self.p_to_ell())
    }

    /// `c_{n-2} = (n - 1) p^l`
    pub fn expected_c_next(&self) -> BigInt {
        BigInt::from(self.n - 1) * self.p_to_ell()
    }

    pub fn expected_root_ord(&self) -> i64 {
        self.ell / 2
    }

    fn context(&self) -> FieldContext {
        FieldContext::p_adic(self.p, 16).expect("p was checked prime")
    }
}

/// The `n x n` all-ones matrix with top-left entry `1 + p^l`.
pub fn build_counterexample(spec: &CounterexampleSpec) -> RationalMatrix {
    let ctx = spec.context();
    let corner = Exact::Rational((BigInt::from(1) + spec.p_to_ell()).into());
    RationalMatrix::from_fn(spec.n, |i, j| {
        if i == 0 && j == 0 {
            corner.clone()
        } else {
            Exact::one(&ctx)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub spec: CounterexampleSpec,
    pub matrix: MatrixJson,
    pub charpoly: Vec<String>,
    pub quadratic_polygon: NewtonPolygon,
    pub root_valuations: Vec<RootValuation>,
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

/// Check the closed-form coefficients, the root valuations of the quadratic
/// factor, the failure of strict maximality and the zero hypothesis margin.
pub fn verify_counterexample(spec: &CounterexampleSpec) -> CounterexampleReport {
    let ctx = spec.context();
    let a = build_counterexample(spec);
    let f = char_poly(&a);
    let n = spec.n;
    let int = |b: BigInt| Exact::Rational(b.into());
    let mut checks = Vec::new();

    let top = f.coeff(n - 1);
    let next = f.coeff(n - 2);
    let lower_zero = (0..n - 2).all(|j| f.coeff(j).is_zero());
    checks.push(Check::new(
        "coefficients",
        *top == int(spec.expected_c_top()) && *next == int(spec.expected_c_next()) && lower_zero,
        format!(
            "c_(n-1) = {top} (expected {}), c_(n-2) = {next} (expected {}), lower coefficients zero: {lower_zero}",
            spec.expected_c_top(),
            spec.expected_c_next()
        ),
    ));

    let g = CharPoly::from_coeffs(vec![next.clone(), top.clone(), Exact::one(&ctx)]).expect("monic");
    let pg = newton_polygon(&g, &ctx);
    let rv = root_valuations(&pg);
    let want = vec![RootValuation {
        valuation: Slope(spec.expected_root_ord().into()),
        count: 2,
    }];
    checks.push(Check::new(
        "root-valuations",
        rv == want,
        format!("quadratic factor has root valuations {}", describe_roots(&rv)),
    ));

    let disc = &(top * top) - &(&Exact::from_int(4, &ctx) * next);
    checks.push(Check::new(
        "distinct-roots",
        !disc.is_zero(),
        format!("discriminant of the quadratic factor is {disc}"),
    ));

    let sm = certify_strict_max(&newton_polygon(&f, &ctx), &ctx, n);
    checks.push(Check::new("no-strict-max", !sm.simple_dominant, sm.explanation.clone()));

    let h = check_hypothesis(&a, &ctx);
    checks.push(Check::new(
        "zero-margin",
        h.ell == Some(Valuation::Finite(spec.ell)) && h.margin == Some(Valuation::Finite(0)) && !h.satisfied,
        format!(
            "l = {}, ord n = {}, margin = {}",
            h.ell.map_or("none".into(), |l| l.to_string()),
            h.ord_n,
            h.margin.map_or("none".into(), |m| m.to_string())
        ),
    ));

    let all_passed = checks.iter().all(|c| c.passed);
    CounterexampleReport {
        spec: *spec,
        matrix: a.to_wire(),
        charpoly: f.coeffs().iter().map(|c| c.to_string()).collect(),
        quadratic_polygon: pg,
        root_valuations: rv,
        checks,
        all_passed,
    }
}

fn describe_roots(rv: &[RootValuation]) -> String {
    let parts: Vec<String> = rv.iter().map(|r| format!("({}, {})", r.valuation, r.count)).collect();
    format!("{{{}}}", parts.join(", "))
}

/// How a campaign picks `l` relative to `o = ord(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EllPolicy {
    /// `l = 2o + 1`
    Minimal,
    /// `l = 2o + 2`
    MinimalPlusOne,
    /// `l` uniform in `[2o + 1, 2o + 4]`
    RandomInRange,
}

impl EllPolicy {
    pub fn pick(&self, ord_n: i64, rng: &mut impl Rng) -> i64 {
        let base = 2 * ord_n + 1;
        match self {
            EllPolicy::Minimal => base,
            EllPolicy::MinimalPlusOne => base + 1,
            EllPolicy::RandomInRange => rng.random_range(base..=base + 3),
        }
    }
}

impl fmt::Display for EllPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EllPolicy::Minimal => "minimal",
            EllPolicy::MinimalPlusOne => "minimal-plus-one",
            EllPolicy::RandomInRange => "random-in-range",
        })
    }
}

impl FromStr for EllPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimal" => Ok(EllPolicy::Minimal),
            "minimal-plus-one" => Ok(EllPolicy::MinimalPlusOne),
            "random-in-range" => Ok(EllPolicy::RandomInRange),
            _ => Err(Error::Parse(format!("unknown l-policy {s:?}"))),
        }
    }
}

/// A random matrix with entries `1 + pi^l a_ij`, `a_ij` uniform modulo
/// `pi^(N - l)` (at least one digit).
pub fn sample_matrix(rng: &mut impl Rng, ctx: &FieldContext, n: usize, ell: i64) -> Result<RationalMatrix> {
    let ord_n = ctx.ord_of_integer(n as i64);
    if n == 0 || ell < 1 || Valuation::Finite(ell) <= ord_n.times(2) {
        return Err(Error::HypothesisViolation(format!(
            "l = {ell} does not exceed 2 ord(n) = {} for n = {n}",
            ord_n.times(2)
        )));
    }
    let digits = (i64::from(ctx.precision()) - ell).max(1) as usize;
    let p = ctx.p();
    let entry = |rng: &mut dyn RngCore| -> Exact {
        let a: Vec<u32> = (0..digits).map(|_| rng.random_range(0..p)).collect();
        match ctx.kind() {
            FieldKind::PAdic => {
                let pb = BigInt::from(p);
                let a = a.iter().rev().fold(BigInt::from(0), |acc, &d| acc * &pb + d);
                let pl = pb.pow(ell as u32);
                Exact::Rational((BigInt::from(1) + pl * a).into())
            }
            FieldKind::Laurent => {
                let poly = FpPoly::new(p, a).shift_up(ell as usize).add(&FpPoly::constant(p, 1));
                Exact::Function(RatFunc::from_poly(poly))
            }
        }
    };
    Ok(RationalMatrix::from_fn(n, |_, _| entry(rng)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub field: FieldKind,
    pub primes: Vec<u64>,
    pub max_dimension: usize,
    pub trials: usize,
    pub seed: u64,
    pub ell_policy: EllPolicy,
    pub precision: u32,
    pub max_squarings: u32,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            field: FieldKind::PAdic,
            primes: vec![3, 5, 7],
            max_dimension: 6,
            trials: 100,
            seed: 42,
            ell_policy: EllPolicy::MinimalPlusOne,
            precision: 32,
            max_squarings: crate::perron::DEFAULT_MAX_SQUARINGS,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(Error::InvalidCounterexample("campaign needs at least one prime".into()));
        }
        if let Some(&p) = self.primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::NotPrime(p));
        }
        if self.max_dimension == 0 {
            return Err(Error::DimensionMismatch("max dimension must be positive".into()));
        }
        FieldContext::new(self.field, self.primes[0], self.precision)?;
        Ok(())
    }
}

/// One sampled matrix and everything checked about it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub index: usize,
    pub seed: u64,
    pub p: u64,
    pub n: usize,
    pub ell: i64,
    pub matrix: RationalMatrix,
    pub report: PerronReport,
    /// Failed coefficient/determinant/trace certificates.
    pub lemma_failures: Vec<String>,
    /// Failed dominant-eigenpair conclusions (discs, strict maximum, projection).
    pub theorem_failures: Vec<String>,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        self.lemma_failures.is_empty() && self.theorem_failures.is_empty()
    }

    pub fn failed_check(&self) -> Option<String> {
        let all: Vec<&str> = self
            .lemma_failures
            .iter()
            .chain(&self.theorem_failures)
            .map(String::as_str)
            .collect();
        (!all.is_empty()).then(|| all.join("; "))
    }
}

/// Run the pipeline on a hypothesis-satisfying matrix and check every
/// lemma certificate and theorem conclusion.
pub fn evaluate(a: &RationalMatrix, ctx: &FieldContext, opts: &AnalyzeOptions) -> Result<(PerronReport, Vec<String>, Vec<String>)> {
    let report = analyze_with(a, ctx, opts)?;
    let lemma: Vec<String> = report
        .certificates
        .iter()
        .filter(|c| !c.holds)
        .map(|c| format!("{} (observed {}, required {})", c.claim, c.observed, c.required))
        .collect();
    let mut theorem = Vec::new();
    if !report.hypothesis.satisfied {
        theorem.push("hypothesis not satisfied".to_string());
    }
    if report.status != Status::Certified {
        theorem.push(format!("status {:?}", report.status));
    }
    if !report.strict_max.certified {
        theorem.push("strict maximality".to_string());
    }
    if let Some(me) = &report.lambda_max {
        if me.valuation != report.hypothesis.ord_n {
            theorem.push(format!("ord lambda_max = {} != ord n", me.valuation));
        }
        if !me.disc.as_ref().is_some_and(|d| d.result.is_yes()) {
            theorem.push("lambda_max in D(n, |pi|^l/|n|)".to_string());
        }
    }
    if let Some(eig) = &report.eigenvector {
        if eig.discs.is_empty() || eig.discs.iter().any(|d| !d.result.is_yes()) {
            theorem.push("eigenvector components in D(1, |pi|^l/|n|)".to_string());
        }
        if !eig.residual.certainly_at_least(i64::from(ctx.precision())) {
            theorem.push(format!("eigen equation residual {}", eig.residual));
        }
    }
    if let Some(pr) = &report.projection {
        let c = pr.certified_precision;
        let d = &pr.diagnostics;
        for (name, r) in [("P^2 - P", d.idempotency), ("AP - lambda P", d.eigen_right), ("tr P - 1", d.trace)] {
            if !r.certainly_at_least(c) || c < i64::from(ctx.precision()) {
                theorem.push(format!("ord({name}) = {r} below certified precision {c}"));
            }
        }
    }
    Ok((report, lemma, theorem))
}

fn trial_params(cfg: &CampaignConfig, rng: &mut ChaCha8Rng) -> Result<(FieldContext, usize, i64)> {
    let p = cfg.primes[rng.random_range(0..cfg.primes.len())];
    let ctx = FieldContext::new(cfg.field, p, cfg.precision)?;
    let lo = if cfg.max_dimension >= 2 { 2 } else { 1 };
    let candidates: Vec<usize> = (lo..=cfg.max_dimension)
        .filter(|&n| !ctx.ord_of_integer(n as i64).is_infinite())
        .collect();
    let n = if candidates.is_empty() { 1 } else { candidates[rng.random_range(0..candidates.len())] };
    let o = ctx.ord_of_integer(n as i64).finite().unwrap_or(0);
    Ok((ctx, n, cfg.ell_policy.pick(o, rng)))
}

/// Re-run trial `index` of a campaign from its seed.
pub fn run_trial(cfg: &CampaignConfig, index: usize, seed: u64) -> Result<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (ctx, n, ell) = trial_params(cfg, &mut rng)?;
    let matrix = sample_matrix(&mut rng, &ctx, n, ell)?;
    run_on(index, seed, &ctx, ell, matrix, cfg.max_squarings)
}

fn run_on(index: usize, seed: u64, ctx: &FieldContext, ell: i64, matrix: RationalMatrix, max_squarings: u32) -> Result<TrialOutcome> {
    let (report, lemma_failures, theorem_failures) = evaluate(&matrix, ctx, &AnalyzeOptions { max_squarings })?;
    Ok(TrialOutcome {
        index,
        seed,
        p: u64::from(ctx.p()),
        n: matrix.n(),
        ell,
        matrix,
        report,
        lemma_failures,
        theorem_failures,
    })
}

/// Per-trial seeds, drawn from a generator seeded with the campaign seed.
pub fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| master.next_u64()).collect()
}

/// `count` matrices for one fixed `(p, n, l)` cell, analyzed in parallel.
pub fn run_cell(ctx: &FieldContext, n: usize, ell: i64, count: usize, seed: u64, max_squarings: u32) -> Result<Vec<TrialOutcome>> {
    trial_seeds(seed, count)
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let matrix = sample_matrix(&mut rng, ctx, n, ell)?;
            run_on(i, s, ctx, ell, matrix, max_squarings)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignFailure {
    pub seed: u64,
    pub matrix: MatrixJson,
    pub failed_check: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub passes: usize,
    pub failures: Vec<CampaignFailure>,
}

/// Independent trials in parallel; results are aggregated in trial order, so
/// the report depends only on the configuration.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    if cfg.trials > 0 {
        cfg.validate()?;
    }
    let outcomes: Vec<TrialOutcome> = trial_seeds(cfg.seed, cfg.trials)
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| run_trial(cfg, i, s))
        .collect::<Result<_>>()?;
    let mut report = CampaignReport {
        config: cfg.clone(),
        passes: 0,
        failures: Vec::new(),
    };
    for t in outcomes {
        match t.failed_check() {
            None => report.passes += 1,
            Some(failed_check) => report.failures.push(CampaignFailure {
                seed: t.seed,
                matrix: t.matrix.to_wire(),
                failed_check,
            }),
        }
    }
    Ok(report)
}
