//! JSON wire format for analysis reports.
//!
//! Every struct here derives both `Serialize` and `Deserialize`, and
//! serialization is deterministic, so `parse -> serialize` reproduces a
//! report byte for byte.

use serde::{Deserialize, Serialize};

use crate::charpoly::{BoundCertificate, NewtonPolygon, RootValuation};
use crate::error::{Error, Result};
use crate::field::{Certainty, FieldContext, FieldKind, FpPoly, OrdReading, UnitPart, Valuation, ValuedElement};
use crate::linalg::{MatrixJson, ValMatrix, ValVector};
use crate::perron::{
    DiscCheck, HypothesisReport, MaxEigen, PerronEigenvector, PerronReport, ProjectionDiagnostics, ProjectionResult,
    StrictMaxCertificate, Status,
};

/// `unit * pi^val`, known modulo `pi^precision`. A zero at precision has
/// unit `"0"` and val `"inf"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElementJson {
    pub unit: String,
    pub val: Valuation,
    pub precision: i64,
}

impl From<&ValuedElement> for ElementJson {
    fn from(x: &ValuedElement) -> Self {
        let p = x.context().p();
        let unit = match x.unit() {
            None => "0".to_string(),
            Some(UnitPart::Integer(u)) => u.to_string(),
            Some(UnitPart::Series(s)) => FpPoly::new(p, s.clone()).to_string(),
        };
        Self {
            unit,
            val: x.ord(),
            precision: x.abs_precision(),
        }
    }
}

impl ElementJson {
    pub fn to_element(&self, ctx: &FieldContext) -> Result<ValuedElement> {
        let val = match self.val {
            Valuation::Infinite => return Ok(ValuedElement::zero_at(ctx, self.precision)),
            Valuation::Finite(v) => v,
        };
        let rel = u32::try_from(self.precision - val)
            .ok()
            .filter(|&r| r > 0)
            .ok_or_else(|| Error::Parse(format!("precision {} does not exceed val {val}", self.precision)))?;
        let unit = match ctx.kind() {
            FieldKind::PAdic => UnitPart::Integer(
                self.unit
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad unit {:?}", self.unit)))?,
            ),
            FieldKind::Laurent => UnitPart::Series(FpPoly::parse(&self.unit, ctx.p())?.coeffs().to_vec()),
        };
        ValuedElement::from_unit(ctx, unit, val, rel)
    }
}

fn vector(v: &ValVector) -> Vec<ElementJson> {
    v.entries().iter().map(ElementJson::from).collect()
}

fn matrix(m: &ValMatrix) -> Vec<Vec<ElementJson>> {
    m.rows().map(|r| r.iter().map(ElementJson::from).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiscJson {
    pub center: ElementJson,
    /// The disc is `{x : ord(x - center) >= radius}`.
    pub radius: i64,
    pub result: Certainty,
}

impl From<&DiscCheck> for DiscJson {
    fn from(d: &DiscCheck) -> Self {
        Self {
            center: (&d.disc.center).into(),
            radius: d.disc.radius,
            result: d.result,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LambdaJson {
    #[serde(flatten)]
    pub value: ElementJson,
    pub approximation: String,
    pub newton_start: String,
    pub newton_steps: usize,
    pub residual_ord: Valuation,
    pub error_ord: Valuation,
    pub certified_simple: bool,
    /// Membership in `D(n, |pi|^l / |n|)`, absent when the hypothesis fails.
    pub disc_certified: Option<Certainty>,
    pub disc: Option<DiscJson>,
}

impl From<&MaxEigen> for LambdaJson {
    fn from(m: &MaxEigen) -> Self {
        Self {
            value: (&m.lambda).into(),
            approximation: m.approximation.to_string(),
            newton_start: m.start.to_string(),
            newton_steps: m.newton_steps,
            residual_ord: m.residual_ord,
            error_ord: m.error_ord,
            certified_simple: m.certified_simple,
            disc_certified: m.disc.as_ref().map(|d| d.result),
            disc: m.disc.as_ref().map(DiscJson::from),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EigenvectorJson {
    pub x: Vec<ElementJson>,
    pub kernel: Vec<ElementJson>,
    pub sum: ElementJson,
    /// `ord(Ax - lambda x)`
    pub residual: OrdReading,
    pub discs: Vec<DiscJson>,
}

impl From<&PerronEigenvector> for EigenvectorJson {
    fn from(e: &PerronEigenvector) -> Self {
        Self {
            x: vector(&e.x),
            kernel: vector(&e.kernel),
            sum: (&e.sum).into(),
            residual: e.residual,
            discs: e.discs.iter().map(DiscJson::from).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjectionJson {
    pub entries: Vec<Vec<ElementJson>>,
    pub squarings: u32,
    pub target: i64,
    pub certified_precision: i64,
    pub diagnostics: ProjectionDiagnostics,
    pub trace: ElementJson,
    /// `ord(M^2 - M)` after each squaring.
    pub contraction: Vec<OrdReading>,
}

impl From<&ProjectionResult> for ProjectionJson {
    fn from(r: &ProjectionResult) -> Self {
        Self {
            entries: matrix(&r.p),
            squarings: r.squarings,
            target: r.target,
            certified_precision: r.certified_precision,
            diagnostics: r.diagnostics,
            trace: (&r.trace).into(),
            contraction: r.contraction.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContextJson {
    pub field: FieldKind,
    pub p: u32,
    pub precision: u32,
}

impl From<&FieldContext> for ContextJson {
    fn from(c: &FieldContext) -> Self {
        Self {
            field: c.kind(),
            p: c.p(),
            precision: c.precision(),
        }
    }
}

impl ContextJson {
    pub fn to_context(&self) -> Result<FieldContext> {
        FieldContext::new(self.field, u64::from(self.p), self.precision)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub context: ContextJson,
    pub matrix: MatrixJson,
    pub status: Status,
    pub hypothesis: HypothesisReport,
    /// `c_0, ..., c_n`
    pub charpoly: Vec<String>,
    pub polygon: NewtonPolygon,
    pub root_valuations: Vec<RootValuation>,
    pub certificates: Vec<BoundCertificate>,
    pub strict_max: StrictMaxCertificate,
    pub lambda_max: Option<LambdaJson>,
    pub eigenvector: Option<EigenvectorJson>,
    pub projection: Option<ProjectionJson>,
}

impl From<&PerronReport> for ReportJson {
    fn from(r: &PerronReport) -> Self {
        Self {
            context: (&r.context).into(),
            matrix: r.matrix.to_wire(),
            status: r.status.clone(),
            hypothesis: r.hypothesis,
            charpoly: r.charpoly.coeffs().iter().map(|c| c.to_string()).collect(),
            polygon: r.polygon.clone(),
            root_valuations: r.root_valuations.clone(),
            certificates: r.certificates.clone(),
            strict_max: r.strict_max.clone(),
            lambda_max: r.lambda_max.as_ref().map(LambdaJson::from),
            eigenvector: r.eigenvector.as_ref().map(EigenvectorJson::from),
            projection: r.projection.as_ref().map(ProjectionJson::from),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
