//! The dominant eigenpair of a matrix with entries near 1: hypothesis check,
//! Newton polygon certificate, lift of `lambda_max`, normalized eigenvector
//! and the limit projection `lim (A / lambda_max)^k`.

use serde::{Deserialize, Serialize};

use crate::charpoly::{
    char_poly, check_coeff_bounds, check_det_bound, closeness_to_one, newton_polygon, root_valuations,
    BoundCertificate, CharPoly, NewtonPolygon, RootValuation,
};
use crate::error::{Error, Result};
use crate::field::{Certainty, Disc, Exact, FieldContext, OrdReading, Valuation, ValuedElement};
use crate::linalg::{solve_kernel, RationalMatrix, ValMatrix, ValVector};

pub const DEFAULT_MAX_SQUARINGS: u32 = 64;

/// Whether `A` has all entries in `D(1, |pi|^l)` for some `l > 2 ord(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// `min ord(a_ij - 1)` when it is positive, `None` when some entry lies outside `D(1, |pi|)`.
    pub ell: Option<Valuation>,
    pub ord_n: Valuation,
    pub satisfied: bool,
    /// `l - 2 ord(n)`, when both sides are meaningful.
    pub margin: Option<Valuation>,
}

impl HypothesisReport {
    /// `l` as a usable integer: an infinite `l` (every entry exactly 1) is
    /// capped just above what the working precision can observe.
    pub fn effective_ell(&self, precision: u32) -> Option<i64> {
        match self.ell? {
            Valuation::Finite(l) => Some(l),
            Valuation::Infinite => {
                let o = self.ord_n.finite().unwrap_or(0).max(0);
                Some(i64::from(precision) + 2 * o + 1)
            }
        }
    }
}

pub fn check_hypothesis(a: &RationalMatrix, ctx: &FieldContext) -> HypothesisReport {
    let ord_n = ctx.ord_of_integer(a.n() as i64);
    let ell = match closeness_to_one(a, ctx) {
        Valuation::Finite(l) if l <= 0 => None,
        v => Some(v),
    };
    let margin = match (ell, ord_n) {
        (Some(Valuation::Finite(l)), Valuation::Finite(o)) => Some(Valuation::Finite(l - 2 * o)),
        (Some(Valuation::Infinite), Valuation::Finite(_)) => Some(Valuation::Infinite),
        _ => None,
    };
    let satisfied = matches!(margin, Some(m) if m > Valuation::Finite(0));
    HypothesisReport {
        ell,
        ord_n,
        satisfied,
        margin,
    }
}

/// Newton polygon evidence for a simple eigenvalue of strictly maximal absolute value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrictMaxCertificate {
    /// The rightmost segment has length 1 (its slope is the largest by convexity).
    pub simple_dominant: bool,
    /// `-slope` of the rightmost segment: the valuation of the dominant root.
    pub dominant_valuation: Option<Valuation>,
    pub valuation_matches_n: bool,
    /// `ord c_i > ord(n) (n - i)` for `0 <= i <= n - 2`; `None` when `ord n` is infinite.
    pub line_l_holds: Option<bool>,
    /// Simple, dominant and of valuation `ord n`.
    pub certified: bool,
    pub explanation: String,
}

pub fn certify_strict_max(pg: &NewtonPolygon, ctx: &FieldContext, n: usize) -> StrictMaxCertificate {
    let ord_n = ctx.ord_of_integer(n as i64);
    let slopes: Vec<String> = pg.segments.iter().map(|s| s.slope.to_string()).collect();
    let last = pg.segments.last();
    let simple_dominant = last.is_some_and(|s| s.length == 1);
    let dominant_valuation = last
        .filter(|s| s.length == 1)
        .map(|s| Valuation::Finite(-s.slope.0.to_integer()));
    let valuation_matches_n = dominant_valuation == Some(ord_n);
    let line_l_holds = ord_n.finite().map(|o| {
        pg.points
            .iter()
            .filter(|pt| pt.0 <= n as i64 - 2)
            .all(|pt| pt.1 > o * (n as i64 - pt.0))
    });
    let explanation = match last {
        None => "all roots are 0: no strictly maximal eigenvalue".to_string(),
        Some(s) if s.length == 1 => format!(
            "slopes {}; the rightmost segment has length 1, so the root of valuation {} is simple and strictly dominant",
            slopes.join(" < "),
            -s.slope.0
        ),
        Some(s) => format!(
            "slopes {}; the rightmost segment has length {}, so {} roots share the largest absolute value: no strictly maximal eigenvalue",
            slopes.join(" < "),
            s.length,
            s.length
        ),
    };
    StrictMaxCertificate {
        simple_dominant,
        dominant_valuation,
        valuation_matches_n,
        line_l_holds,
        certified: simple_dominant && valuation_matches_n,
        explanation,
    }
}

/// Membership of a computed value in a disc, with the disc spelled out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscCheck {
    pub disc: Disc,
    pub result: Certainty,
}

/// The lifted dominant eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxEigen {
    pub lambda: ValuedElement,
    /// Exact approximant from the last Newton step.
    pub approximation: Exact,
    pub start: Exact,
    pub valuation: Valuation,
    pub certified_simple: bool,
    /// `ord f(approximation)`, infinite when the approximant is an exact root.
    pub residual_ord: Valuation,
    /// Lower bound for `ord(approximation - lambda_max)`.
    pub error_ord: Valuation,
    pub newton_steps: usize,
    /// `lambda_max ∈ D(n, |pi|^l / |n|)`, checked when the hypothesis holds.
    pub disc: Option<DiscCheck>,
}

fn dominant_valuation(f: &CharPoly, ctx: &FieldContext) -> Result<i64> {
    let pg = newton_polygon(f, ctx);
    match pg.segments.last() {
        Some(s) if s.length == 1 => Ok(-s.slope.0.to_integer()),
        _ => Err(Error::CertificationFailure(
            "the Newton polygon does not certify a simple dominant root".into(),
        )),
    }
}

/// Round `x` to absolute precision `abs` (its canonical representative).
fn truncate_exact(x: &Exact, ctx: &FieldContext, abs: i64) -> Exact {
    match x.ord_in(ctx) {
        Valuation::Finite(v) if v < abs => {
            ValuedElement::embed_with_precision(x, ctx, (abs - v) as u32).to_exact()
        }
        _ => x.zero_like(),
    }
}

/// Newton iteration `x <- x - f(x)/f'(x)` from `x0 = n`, run until `lambda_max`
/// is known to `N` significant digits.
pub fn lift_lambda_max(f: &CharPoly, ctx: &FieldContext) -> Result<MaxEigen> {
    let v = dominant_valuation(f, ctx)?;
    let x0 = ctx.integer(f.degree() as i64);
    lift_from(f, ctx, &x0, v + i64::from(ctx.precision()))
}

/// Newton iteration from `x0` until `ord(x - lambda_max) >= target_abs`.
///
/// Every step must strictly increase `ord f(x_k)`. Once `x` is closer to
/// `lambda_max` than to any other root, `ord(x - lambda_max) = ord f(x) - ord f'(x)`.
pub fn lift_from(f: &CharPoly, ctx: &FieldContext, x0: &Exact, target_abs: i64) -> Result<MaxEigen> {
    let v = dominant_valuation(f, ctx)?;
    let max_steps = 2 * usize::try_from(target_abs.max(1)).unwrap_or(1) + 64;
    let mut x = x0.clone();
    let mut fx = f.eval(&x);
    let ord_f_start = fx.ord_in(ctx);
    let ord_df_start = f.eval_derivative(&x).ord_in(ctx);
    let mut steps = 0;
    let error_ord = loop {
        if fx.is_zero() {
            break Valuation::Infinite;
        }
        let dfx = f.eval_derivative(&x);
        let ord_df = dfx.ord_in(ctx);
        let err = fx.ord_in(ctx).finite().zip(ord_df.finite()).map(|(a, b)| a - b);
        if let Some(e) = err {
            if e > v && e >= target_abs {
                break Valuation::Finite(e);
            }
        }
        if steps == max_steps {
            return Err(Error::PrecisionExhausted(format!(
                "Newton iteration did not reach ord {target_abs} within {max_steps} steps"
            )));
        }
        let step = fx.checked_div(&dfx).ok_or(Error::NonContracting {
            step: steps + 1,
            previous: fx.ord_in(ctx),
            current: fx.ord_in(ctx),
            ord_f_start,
            ord_df_start,
        })?;
        let next = truncate_exact(&(&x - &step), ctx, target_abs);
        let f_next = f.eval(&next);
        steps += 1;
        if f_next.ord_in(ctx) <= fx.ord_in(ctx) {
            return Err(Error::NonContracting {
                step: steps,
                previous: fx.ord_in(ctx),
                current: f_next.ord_in(ctx),
                ord_f_start,
                ord_df_start,
            });
        }
        x = next;
        fx = f_next;
    };
    let rel = (target_abs - v).max(1) as u32;
    let lambda = ValuedElement::embed_with_precision(&x, ctx, rel);
    let valuation = x.ord_in(ctx);
    Ok(MaxEigen {
        lambda,
        approximation: x,
        start: x0.clone(),
        valuation,
        certified_simple: true,
        residual_ord: fx.ord_in(ctx),
        error_ord,
        newton_steps: steps,
        disc: None,
    })
}

/// A dominant eigenvector normalized as `x = (lambda_max / v) v`, `v = Σ v_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerronEigenvector {
    /// Kernel vector of `A - lambda_max I` with `‖v‖ = 1`.
    pub kernel: ValVector,
    /// `Σ v_i`
    pub sum: ValuedElement,
    /// The applied factor `lambda_max / Σ v_i` (1 when the sum vanishes).
    pub factor: ValuedElement,
    pub x: ValVector,
    /// `ord ‖A x - lambda_max x‖`
    pub residual: OrdReading,
    /// Per-component membership in `D(1, |pi|^l / |n|)` when the hypothesis holds.
    pub discs: Vec<DiscCheck>,
}

/// Kernel of `A - lambda I`, normalized to `‖v‖ = 1` and rescaled by `lambda / Σ v_i`.
///
/// With `ell = Some(l)` the hypothesis is assumed: `ord Σ v_i` must equal
/// `ord n` and every component is checked against `D(1, |pi|^(l - ord n))`.
pub fn dominant_eigenvector(a: &ValMatrix, me: &MaxEigen, ell: Option<i64>) -> Result<PerronEigenvector> {
    let ctx = *a.context();
    let shifted = a.sub_scalar(&me.lambda)?;
    let kernel = solve_kernel(&shifted)?;
    let sum = kernel.sum();
    let n = a.n() as i64;
    let ord_n = ctx.ord_of_integer(n);
    let (factor, discs) = match ell {
        Some(l) => {
            if sum.ord() != ord_n {
                return Err(Error::CertificationFailure(format!(
                    "component sum of the eigenvector has ord {} (reading {}), expected ord n = {ord_n}",
                    sum.ord(),
                    sum.ord_reading()
                )));
            }
            let o = ord_n.finite().expect("hypothesis forces a finite ord n");
            let factor = me.lambda.checked_div(&sum)?;
            let x = kernel.scale(&factor);
            let discs = x
                .entries()
                .iter()
                .map(|xi| {
                    let disc = Disc::new(ValuedElement::one(&ctx), l - o);
                    DiscCheck {
                        result: disc.contains(xi),
                        disc,
                    }
                })
                .collect();
            (factor, discs)
        }
        None if !sum.is_zero() => (me.lambda.checked_div(&sum)?, vec![]),
        None => (ValuedElement::one(&ctx), vec![]),
    };
    let x = kernel.scale(&factor);
    let ax = a.mul_vec(&x)?;
    let residual = ax.checked_sub(&x.scale(&me.lambda))?.norm();
    Ok(PerronEigenvector {
        kernel,
        sum,
        factor,
        x,
        residual,
        discs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjectionDiagnostics {
    /// `ord(P^2 - P)`
    pub idempotency: OrdReading,
    /// `ord(AP - lambda P)`
    pub eigen_right: OrdReading,
    /// `ord(PA - lambda P)`
    pub eigen_left: OrdReading,
    /// `ord(tr P - 1)`
    pub trace: OrdReading,
}

impl ProjectionDiagnostics {
    pub fn min(&self) -> OrdReading {
        self.idempotency.min(self.eigen_right).min(self.eigen_left).min(self.trace)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionResult {
    pub p: ValMatrix,
    pub squarings: u32,
    /// Requested absolute precision.
    pub target: i64,
    /// Smallest absolute precision of the entries of `P` and of the diagnostics.
    pub certified_precision: i64,
    pub diagnostics: ProjectionDiagnostics,
    pub trace: ValuedElement,
    /// `ord(M_{k+1} - M_k)` after each squaring.
    pub contraction: Vec<OrdReading>,
}

/// `P = lim (A / lambda)^k` by repeated squaring of `M = A / lambda`, stopped
/// when `M^2 ≡ M` modulo `pi^target`.
///
/// `a` and `me.lambda` should carry guard digits beyond `target`; see
/// [`guard_digits`].
pub fn projection_limit(a: &ValMatrix, me: &MaxEigen, target: i64, max_squarings: u32) -> Result<ProjectionResult> {
    let lambda_inv = me.lambda.inv()?;
    let mut m = a.scale(&lambda_inv)?;
    let mut contraction = Vec::new();
    let mut squarings = 0;
    loop {
        if squarings == max_squarings {
            return Err(Error::NoStabilization { cap: max_squarings });
        }
        let s = m.mat_mul(&m)?;
        squarings += 1;
        let d = s.checked_sub(&m)?;
        let gap = d.mat_norm();
        contraction.push(gap);
        m = s;
        if d.entries().iter().all(|e| e.ord_reading().certainly_at_least(target)) {
            break;
        }
        if let Some(e) = d.entries().iter().find(|e| e.is_zero() && e.abs_precision() < target) {
            return Err(Error::PrecisionExhausted(format!(
                "M^2 - M is only known modulo pi^{} after {squarings} squarings, target {target}",
                e.abs_precision()
            )));
        }
    }
    let p = m;
    let ctx = *p.context();
    let lp = p.scale(&me.lambda)?;
    let idempotency = p.mat_mul(&p)?.checked_sub(&p)?.mat_norm();
    let eigen_right = a.mat_mul(&p)?.checked_sub(&lp)?.mat_norm();
    let eigen_left = p.mat_mul(a)?.checked_sub(&lp)?.mat_norm();
    let trace = p.trace();
    let trace_defect = (&trace - &ValuedElement::one(&ctx)).ord_reading();
    let diagnostics = ProjectionDiagnostics {
        idempotency,
        eigen_right,
        eigen_left,
        trace: trace_defect,
    };
    let certified_precision = p.min_abs_precision().min(diagnostics.min().lower_bound());
    if certified_precision < target {
        return Err(Error::CertificationFailure(format!(
            "projection certified only modulo pi^{certified_precision}, target {target}"
        )));
    }
    Ok(ProjectionResult {
        p,
        squarings,
        target,
        certified_precision,
        diagnostics,
        trace,
        contraction,
    })
}

/// Extra digits for the squaring loop: `M = A / lambda` has norm
/// `|pi|^-(v - ord ‖A‖)`, and each squaring may lose twice that. Entries of
/// negative valuation also need `-ord ‖A‖` more relative digits to be known
/// modulo `pi^N`.
pub fn guard_digits(a: &RationalMatrix, ctx: &FieldContext, lambda_valuation: i64, max_squarings: u32) -> u32 {
    let norm = a
        .entries()
        .iter()
        .filter_map(|e| e.ord_in(ctx).finite())
        .min()
        .unwrap_or(lambda_valuation);
    let d = (lambda_valuation - norm).max(0);
    u32::try_from(2 * i64::from(max_squarings) * d + (-norm).max(0)).unwrap_or(u32::MAX / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub max_squarings: u32,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            max_squarings: DEFAULT_MAX_SQUARINGS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "kebab-case")]
pub enum Status {
    /// Hypothesis satisfied, every conclusion certified.
    Certified,
    /// Hypothesis not satisfied, but the polygon certifies a simple dominant root.
    PolygonOnly,
    /// No simple root of strictly maximal absolute value.
    NoStrictMax(String),
    /// The pipeline could not certify a conclusion it should have.
    CertificationFailed(String),
}

impl Status {
    pub fn is_failure(&self) -> bool {
        matches!(self, Status::CertificationFailed(_))
    }
}

/// Everything `analyze` learns about a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerronReport {
    pub context: FieldContext,
    pub matrix: RationalMatrix,
    pub hypothesis: HypothesisReport,
    pub charpoly: CharPoly,
    pub polygon: NewtonPolygon,
    pub root_valuations: Vec<RootValuation>,
    pub certificates: Vec<BoundCertificate>,
    pub strict_max: StrictMaxCertificate,
    pub status: Status,
    pub lambda_max: Option<MaxEigen>,
    pub eigenvector: Option<PerronEigenvector>,
    pub projection: Option<ProjectionResult>,
}

impl PerronReport {
    /// True when the matrix has a certified dominant eigenpair and projection.
    pub fn is_complete(&self) -> bool {
        matches!(self.status, Status::Certified | Status::PolygonOnly)
    }
}

pub fn analyze(a: &RationalMatrix, ctx: &FieldContext) -> Result<PerronReport> {
    analyze_with(a, ctx, &AnalyzeOptions::default())
}

/// Run the whole pipeline. Errors are reserved for unusable input; every
/// mathematical outcome, including failed certification, is a report state.
pub fn analyze_with(a: &RationalMatrix, ctx: &FieldContext, opts: &AnalyzeOptions) -> Result<PerronReport> {
    if !a.belongs_to(ctx) {
        return Err(Error::Parse(format!("matrix entries are not scalars of {ctx}")));
    }
    let n = a.n();
    let hypothesis = check_hypothesis(a, ctx);
    let charpoly = char_poly(a);
    let polygon = newton_polygon(&charpoly, ctx);
    let rv = root_valuations(&polygon);
    let ell = hypothesis.effective_ell(ctx.precision());
    let mut certificates = Vec::new();
    if let Some(l) = ell {
        certificates.push(check_det_bound(a, ctx, l)?);
        certificates.extend(check_coeff_bounds(&charpoly, ctx, l, n));
    }
    let strict_max = certify_strict_max(&polygon, ctx, n);
    let mut report = PerronReport {
        context: *ctx,
        matrix: a.clone(),
        hypothesis,
        charpoly,
        polygon,
        root_valuations: rv,
        certificates,
        strict_max,
        status: Status::Certified,
        lambda_max: None,
        eigenvector: None,
        projection: None,
    };
    if !report.strict_max.simple_dominant {
        report.status = Status::NoStrictMax(report.strict_max.explanation.clone());
        return Ok(report);
    }
    if let Err(e) = dominant_pipeline(&mut report, opts) {
        report.status = Status::CertificationFailed(e.to_string());
    }
    Ok(report)
}

fn dominant_pipeline(report: &mut PerronReport, opts: &AnalyzeOptions) -> Result<()> {
    let ctx = report.context;
    let a = &report.matrix;
    let n = a.n() as i64;
    let f = &report.charpoly;
    let satisfied = report.hypothesis.satisfied;
    if satisfied && !report.strict_max.certified {
        return Err(Error::CertificationFailure(format!(
            "hypothesis holds but the polygon does not certify a dominant root of valuation ord n: {}",
            report.strict_max.explanation
        )));
    }
    if let Some(bad) = report.certificates.iter().find(|c| !c.holds) {
        return Err(Error::CertificationFailure(format!(
            "{} fails: observed {}, required {}",
            bad.claim, bad.observed, bad.required
        )));
    }
    let v = dominant_valuation(f, &ctx)?;
    let target = i64::from(ctx.precision());
    let work = ctx.with_precision(ctx.precision() + guard_digits(a, &ctx, v, opts.max_squarings));
    let x0 = if satisfied { ctx.integer(n) } else { -f.coeff(f.degree() - 1) };
    let mut me = lift_from(f, &work, &x0, v + i64::from(work.precision()))?;
    let ell = if satisfied { report.hypothesis.effective_ell(ctx.precision()) } else { None };
    if let Some(l) = ell {
        let o = report.hypothesis.ord_n.finite().expect("finite when satisfied");
        let disc = Disc::new(ValuedElement::embed(&ctx.integer(n), &work), l - o);
        me.disc = Some(DiscCheck {
            result: disc.contains(&me.lambda),
            disc,
        });
        me.certified_simple = report.strict_max.certified;
    }
    let aw = a.embed(&work);
    let eig = dominant_eigenvector(&aw, &me, ell)?;
    let proj = projection_limit(&aw, &me, target, opts.max_squarings)?;
    if let Some(d) = &me.disc {
        if !d.result.is_yes() {
            return Err(Error::CertificationFailure(format!(
                "lambda_max not certified in D(n, |pi|^{})",
                d.disc.radius
            )));
        }
    }
    if eig.discs.iter().any(|d| !d.result.is_yes()) {
        return Err(Error::CertificationFailure(
            "an eigenvector component is not certified in D(1, |pi|^l / |n|)".into(),
        ));
    }
    report.status = if satisfied { Status::Certified } else { Status::PolygonOnly };
    report.lambda_max = Some(me);
    report.eigenvector = Some(eig);
    report.projection = Some(proj);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(ctx: &FieldContext, rows: &[&[&str]]) -> RationalMatrix {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        RationalMatrix::from_strings(&rows, ctx).unwrap()
    }

    fn q(ctx: &FieldContext, s: &str) -> ValuedElement {
        ValuedElement::embed(&Exact::parse(s, ctx).unwrap(), ctx)
    }

    #[test]
    fn hypothesis_examples() {
        let q3 = FieldContext::p_adic(3, 20).unwrap();
        let h = check_hypothesis(&mat(&q3, &[&["4", "-5"], &["1", "10"]]), &q3);
        assert_eq!(h.ell, Some(Valuation::Finite(1)));
        assert_eq!(h.ord_n, Valuation::Finite(0));
        assert!(h.satisfied);
        assert_eq!(h.margin, Some(Valuation::Finite(1)));

        let q2 = FieldContext::p_adic(2, 20).unwrap();
        let h = check_hypothesis(&mat(&q2, &[&["5/3", "1"], &["1", "7/3"]]), &q2);
        assert_eq!((h.ell, h.ord_n, h.satisfied), (Some(Valuation::Finite(1)), Valuation::Finite(1), false));

        let h = check_hypothesis(&mat(&q2, &[&["5", "1"], &["1", "1"]]), &q2);
        assert_eq!((h.ell, h.satisfied, h.margin), (Some(Valuation::Finite(2)), false, Some(Valuation::Finite(0))));

        let h = check_hypothesis(&mat(&q3, &[&["2", "1"], &["1", "1"]]), &q3);
        assert_eq!((h.ell, h.satisfied), (None, false));
    }

    #[test]
    fn strict_max_examples() {
        let q3 = FieldContext::p_adic(3, 20).unwrap();
        let f = char_poly(&mat(&q3, &[&["4", "-5"], &["1", "10"]]));
        let c = certify_strict_max(&newton_polygon(&f, &q3), &q3, 2);
        assert!(c.certified && c.simple_dominant);
        assert_eq!(c.line_l_holds, Some(true));

        let q2 = FieldContext::p_adic(2, 20).unwrap();
        let f = char_poly(&mat(&q2, &[&["5/3", "1"], &["1", "7/3"]]));
        let c = certify_strict_max(&newton_polygon(&f, &q2), &q2, 2);
        assert!(!c.simple_dominant && !c.certified);
        assert!(c.explanation.contains("no strictly maximal eigenvalue"));
    }

    #[test]
    fn lifts_example_eigenvalues() {
        let q3 = FieldContext::p_adic(3, 20).unwrap();
        let f = char_poly(&mat(&q3, &[&["4", "-5"], &["1", "10"]]));
        let me = lift_lambda_max(&f, &q3).unwrap();
        assert!(me.lambda.agrees_to(&q(&q3, "5"), 20));

        let q7 = FieldContext::p_adic(7, 30).unwrap();
        let f = char_poly(&mat(&q7, &[&["8", "1"], &["1", "1"]]));
        let me = lift_lambda_max(&f, &q7).unwrap();
        assert!(me.lambda.agrees_to(&q(&q7, "2"), 1));
        assert!(f.eval(&me.approximation).ord_in(&q7) >= Valuation::Finite(30));

        let q5 = FieldContext::p_adic(5, 20).unwrap();
        let f = char_poly(&mat(&q5, &[&["6", "1", "-4"], &["1", "-4", "6"], &["-4", "6", "1"]]));
        let me = lift_lambda_max(&f, &q5).unwrap();
        assert!(me.lambda.agrees_to(&q(&q5, "3"), 20));
    }

    #[test]
    fn eigenvector_of_example() {
        let q3 = FieldContext::p_adic(3, 20).unwrap();
        let a = mat(&q3, &[&["4", "-5"], &["1", "10"]]);
        let f = char_poly(&a);
        let me = lift_lambda_max(&f, &q3).unwrap();
        let eig = dominant_eigenvector(&a.embed(&q3), &me, Some(1)).unwrap();
        // x = (5 / (1 - 1/5)) (1, -1/5) = (25/4, -5/4)
        assert!(eig.x.get(0).agrees_to(&q(&q3, "25/4"), 15));
        assert!(eig.x.get(1).agrees_to(&q(&q3, "-5/4"), 15));
        assert!(eig.discs.iter().all(|d| d.result.is_yes()));

        let one = mat(&q3, &[&["7"]]);
        let me = lift_lambda_max(&char_poly(&one), &q3).unwrap();
        let eig = dominant_eigenvector(&one.embed(&q3), &me, Some(1)).unwrap();
        // v = (1), so x = (lambda / 1)(1) = (7), which lies in D(1, |3|)
        assert!(eig.x.get(0).agrees_to(&q(&q3, "7"), 20));
        assert!(eig.discs[0].result.is_yes());
    }

    #[test]
    fn projection_of_example() {
        let q3 = FieldContext::p_adic(3, 20).unwrap();
        let a = mat(&q3, &[&["4", "-5"], &["1", "10"]]);
        let me = lift_lambda_max(&char_poly(&a), &q3).unwrap();
        let pr = projection_limit(&a.embed(&q3), &me, 20, 64).unwrap();
        let expected = mat(&q3, &[&["5/4", "5/4"], &["-1/4", "-1/4"]]).embed(&q3);
        for (x, y) in pr.p.entries().iter().zip(expected.entries()) {
            assert!(x.agrees_to(y, 20));
        }
        assert!(pr.certified_precision >= 20);
    }

    #[test]
    fn rank_one_projection_is_a_fixed_point() {
        let q3 = FieldContext::p_adic(3, 10).unwrap();
        // 2 * [[1, 0], [0, 0]] has lambda 2 and is already 2 P
        let a = mat(&q3, &[&["2", "0"], &["0", "0"]]);
        let me = lift_lambda_max(&char_poly(&a), &q3).unwrap();
        let pr = projection_limit(&a.embed(&q3), &me, 10, 64).unwrap();
        assert_eq!(pr.squarings, 1);
    }

    #[test]
    fn analyze_reports_states() {
        let q3 = FieldContext::p_adic(3, 20).unwrap();
        let r = analyze(&mat(&q3, &[&["4", "-5"], &["1", "10"]]), &q3).unwrap();
        assert_eq!(r.status, Status::Certified);
        assert!(r.certificates.iter().all(|c| c.holds));

        let q2 = FieldContext::p_adic(2, 20).unwrap();
        let r = analyze(&mat(&q2, &[&["5/3", "1"], &["1", "7/3"]]), &q2).unwrap();
        assert!(matches!(r.status, Status::NoStrictMax(_)));
        assert!(!r.hypothesis.satisfied);

        // hypothesis fails (entries not near 1) but the polygon certifies a dominant root
        let q5 = FieldContext::p_adic(5, 16).unwrap();
        let r = analyze(&mat(&q5, &[&["2", "5"], &["5", "10"]]), &q5).unwrap();
        assert_eq!(r.status, Status::PolygonOnly);
        assert!(r.projection.is_some());
    }

    #[test]
    fn laurent_smoke() {
        let f3 = FieldContext::laurent(3, 16).unwrap();
        let a = mat(&f3, &[&["1 + t", "1"], &["1 + 2*t^2", "1 + t^3"]]);
        let r = analyze(&a, &f3).unwrap();
        assert_eq!(r.status, Status::Certified, "{:?}", r.status);
        let lambda = &r.lambda_max.unwrap().lambda;
        assert!(lambda.agrees_to(&ValuedElement::from_int(2, &f3), 1));
    }
}
