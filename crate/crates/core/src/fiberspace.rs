//! Fibre spaces `f : X → Y` with general fibre `F`, fibre-type flags, and
//! the subadditivity checks run on them.
//!
//! Two shapes are supported: products of toric varieties, and an abstract
//! surface fibred over a curve. On a fibre-type flag the valuation vector of
//! `X` lists the `dim Y` base coordinates first and the fibre coordinates
//! after them.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::invariants::{Flag, SurfaceFlag, VarietyModel};
use crate::polytope::Polytope;
use crate::rational::{dot, format_q, q, serde_q, serde_qmat, serde_qs, Q};
use crate::toric::{factorial, ProductFibration};

/// Names accepted by [`run_check`], in report order.
pub const CHECKS: [&str; 6] = [
    "thm1_3",
    "cor3_5",
    "thm1_1",
    "thm1_2",
    "lemma3_1",
    "remark3_6",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Holds,
    Strict,
    Fails,
    HypothesesNotMet,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Strict => "strict",
            Verdict::Fails => "fails",
            Verdict::HypothesesNotMet => "hypotheses-not-met",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Holds | Verdict::Strict => 0,
            Verdict::Fails => 1,
            Verdict::HypothesesNotMet => 2,
        }
    }

    fn parse(s: &str) -> Option<Verdict> {
        [
            Verdict::Holds,
            Verdict::Strict,
            Verdict::Fails,
            Verdict::HypothesesNotMet,
        ]
        .into_iter()
        .find(|v| v.as_str() == s)
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Verdict, D::Error> {
        let s = String::deserialize(d)?;
        Verdict::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown verdict {s:?}")))
    }
}

/// Variation of the fibration, when known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variation {
    Value(u32),
    Unknown,
}

impl Serialize for Variation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Variation::Value(v) => s.serialize_u32(*v),
            Variation::Unknown => s.serialize_str("unknown"),
        }
    }
}

impl<'de> Deserialize<'de> for Variation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Variation, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Variation::Value(v)),
            Raw::Word(w) if w == "unknown" => Ok(Variation::Unknown),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "var_f must be an integer or \"unknown\", got {w:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Decomposition {
    #[serde(rename = "D", with = "serde_qs")]
    pub d: Vec<Q>,
    #[serde(rename = "D_Y", with = "serde_qs")]
    pub d_y: Vec<Q>,
    #[serde(rename = "R", with = "serde_qs")]
    pub r: Vec<Q>,
}

/// Declared hypotheses that are not decidable from numerical data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hypotheses {
    pub weakly_positive: bool,
    pub isotrivial: bool,
    pub var_f: Variation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iitaka_degree_on_fiber: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmpleClasses {
    #[serde(with = "serde_qs")]
    pub total: Vec<Q>,
    #[serde(with = "serde_qs")]
    pub base: Vec<Q>,
    #[serde(with = "serde_qs")]
    pub fiber: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFlags {
    pub base: Flag,
    pub fiber: Flag,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Unchecked {
    name: String,
    base: VarietyModel,
    fiber: VarietyModel,
    total: VarietyModel,
    #[serde(with = "serde_qmat")]
    pullback: Vec<Vec<Q>>,
    #[serde(with = "serde_qmat")]
    restriction: Vec<Vec<Q>>,
    decomposition: Decomposition,
    hypotheses: Hypotheses,
    flags: InstanceFlags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ample: Option<AmpleClasses>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nakayama_in_fiber: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    expect: BTreeMap<String, Verdict>,
}

/// A validated fibre space with a chosen decomposition `D ≡ f*D_Y + R`.
///
/// `pullback` has one column per base class, `restriction` one row per
/// fibre class. `expect` records the verdicts a fixture is known to give.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Unchecked", into = "Unchecked")]
pub struct FiberSpaceInstance {
    pub name: String,
    pub base: VarietyModel,
    pub fiber: VarietyModel,
    pub total: VarietyModel,
    pub pullback: Vec<Vec<Q>>,
    pub restriction: Vec<Vec<Q>>,
    pub decomposition: Decomposition,
    pub hypotheses: Hypotheses,
    pub flags: InstanceFlags,
    pub ample: Option<AmpleClasses>,
    pub nakayama_in_fiber: Option<usize>,
    pub expect: BTreeMap<String, Verdict>,
    total_flag: Flag,
}

impl From<FiberSpaceInstance> for Unchecked {
    fn from(f: FiberSpaceInstance) -> Unchecked {
        Unchecked {
            name: f.name,
            base: f.base,
            fiber: f.fiber,
            total: f.total,
            pullback: f.pullback,
            restriction: f.restriction,
            decomposition: f.decomposition,
            hypotheses: f.hypotheses,
            flags: f.flags,
            ample: f.ample,
            nakayama_in_fiber: f.nakayama_in_fiber,
            expect: f.expect,
        }
    }
}

impl TryFrom<Unchecked> for FiberSpaceInstance {
    type Error = Error;

    fn try_from(u: Unchecked) -> Result<FiberSpaceInstance> {
        let mut fs = FiberSpaceInstance {
            name: u.name,
            base: u.base,
            fiber: u.fiber,
            total: u.total,
            pullback: u.pullback,
            restriction: u.restriction,
            decomposition: u.decomposition,
            hypotheses: u.hypotheses,
            flags: u.flags,
            ample: u.ample,
            nakayama_in_fiber: u.nakayama_in_fiber,
            expect: u.expect,
            total_flag: Flag::Curve(Default::default()),
        };
        fs.validate()?;
        Ok(fs)
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidModel(msg.into())
}

fn mat_vec(m: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    m.iter().map(|row| dot(row, x)).collect()
}

fn check_shape(m: &[Vec<Q>], rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(invalid(format!("{what} must be a {rows}×{cols} matrix")));
    }
    Ok(())
}

/// Fibre-type flag: the first `dim Y` members are preimages of the base
/// flag, the rest lie in the fibre over the base flag point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberTypeFlag {
    pub base_flag: Flag,
    pub fiber_flag: Flag,
    pub total: Flag,
}

/// Builds the fibre-type flag of `fs` from flags on the base and fibre.
pub fn fiber_type_flag(
    fs: &FiberSpaceInstance,
    base_flag: &Flag,
    fiber_flag: &Flag,
) -> Result<FiberTypeFlag> {
    fs.base.check_flag(base_flag)?;
    fs.fiber.check_flag(fiber_flag)?;
    let total = match (&fs.total, &fs.base, &fs.fiber, base_flag, fiber_flag) {
        (
            VarietyModel::Toric(_),
            VarietyModel::Toric(y),
            VarietyModel::Toric(f),
            Flag::Toric(bf),
            Flag::Toric(ff),
        ) => Flag::Toric(ProductFibration::new(y.clone(), f.clone()).composite_flag(bf, ff)?),
        (VarietyModel::Surface(s), VarietyModel::Curve(_), VarietyModel::Curve(_), _, _) => {
            let phi: Vec<Q> = fs.pullback.iter().map(|r| r[0].clone()).collect();
            let curve = s
                .effective_generators()
                .iter()
                .position(|g| *g == phi)
                .ok_or_else(|| invalid("the fibre class is not among the effective generators"))?;
            Flag::Surface(SurfaceFlag { curve })
        }
        _ => {
            return Err(invalid(
                "fibre spaces must be toric products or surfaces over curves",
            ))
        }
    };
    Ok(FiberTypeFlag {
        base_flag: base_flag.clone(),
        fiber_flag: fiber_flag.clone(),
        total,
    })
}

impl FiberSpaceInstance {
    fn validate(&mut self) -> Result<()> {
        let (nx, ny, nf) = (
            self.total.class_len(),
            self.base.class_len(),
            self.fiber.class_len(),
        );
        check_shape(&self.pullback, nx, ny, "pullback")?;
        check_shape(&self.restriction, nf, nx, "restriction")?;
        if self.total.dim() != self.base.dim() + self.fiber.dim() {
            return Err(invalid("dim X must equal dim Y + dim F"));
        }
        for j in 0..ny {
            let col: Vec<Q> = self.pullback.iter().map(|r| r[j].clone()).collect();
            if mat_vec(&self.restriction, &col)
                .iter()
                .any(|x| !x.is_zero())
            {
                return Err(invalid(
                    "pulled-back classes must restrict to zero on the fibre",
                ));
            }
        }
        let dec = &self.decomposition;
        self.total.check_divisor(&dec.d)?;
        self.base.check_divisor(&dec.d_y)?;
        self.total.check_divisor(&dec.r)?;
        if let Some(a) = &self.ample {
            self.total.check_divisor(&a.total)?;
            self.base.check_divisor(&a.base)?;
            self.fiber.check_divisor(&a.fiber)?;
        }
        match (&self.total, &self.base, &self.fiber) {
            (VarietyModel::Toric(x), VarietyModel::Toric(y), VarietyModel::Toric(f)) => {
                let p = ProductFibration::new(y.clone(), f.clone());
                if p.total != *x {
                    return Err(invalid(
                        "total fan must be the product of the base and fibre fans",
                    ));
                }
                if p.pullback_matrix() != self.pullback
                    || p.restriction_matrix() != self.restriction
                {
                    return Err(invalid(
                        "pullback and restriction must be the product-fan maps",
                    ));
                }
            }
            (VarietyModel::Surface(s), VarietyModel::Curve(_), VarietyModel::Curve(g)) => {
                let phi: Vec<Q> = self.pullback.iter().map(|r| r[0].clone()).collect();
                let row: Vec<Q> = (0..nx)
                    .map(|i| {
                        let mut e = vec![Q::zero(); nx];
                        e[i] = Q::one();
                        s.intersect(&e, &phi)
                    })
                    .collect();
                if self.restriction[0] != row {
                    return Err(invalid(
                        "restriction must be intersection with the fibre class",
                    ));
                }
                if s.intersect(s.canonical_class(), &phi) != g.canonical_class()[0] {
                    return Err(invalid("K_X·F must equal the degree of K_F"));
                }
            }
            _ => {
                return Err(invalid(
                    "fibre spaces must be toric products or surfaces over curves",
                ))
            }
        }
        self.total_flag = fiber_type_flag(self, &self.flags.base, &self.flags.fiber)?.total;
        if let (Some(deg), VarietyModel::Surface(s), Flag::Surface(f)) = (
            self.hypotheses.iitaka_degree_on_fiber,
            &self.total,
            &self.total_flag,
        ) {
            if s.iitaka_degree_on(f.curve) != Some(deg) {
                return Err(invalid(
                    "iitaka_degree_on_fiber disagrees with the surface abundance data",
                ));
            }
        }
        for name in self.expect.keys() {
            if !CHECKS.contains(&name.as_str()) && name != "scaling" {
                return Err(invalid(format!("unknown check {name:?} in expect")));
            }
        }
        Ok(())
    }

    pub fn total_flag(&self) -> &Flag {
        &self.total_flag
    }

    pub fn pull_back(&self, d_y: &[Q]) -> Vec<Q> {
        mat_vec(&self.pullback, d_y)
    }

    pub fn restrict(&self, d: &[Q]) -> Vec<Q> {
        mat_vec(&self.restriction, d)
    }

    /// `Δ_Y × {0}^{dim F}`.
    pub fn embed_base(&self, body: &Polytope) -> Polytope {
        body.embed(0, self.fiber.dim())
    }

    /// `{0}^{dim Y} × Δ_F`.
    pub fn embed_fiber(&self, body: &Polytope) -> Polytope {
        body.embed(self.base.dim(), 0)
    }

    /// `D ≡ f*D_Y + R` in the class group of the total model.
    pub fn decomposition_holds(&self) -> Result<bool> {
        let dec = &self.decomposition;
        let rhs: Vec<Q> = self
            .pull_back(&dec.d_y)
            .iter()
            .zip(&dec.r)
            .map(|(a, b)| a + b)
            .collect();
        self.total.equivalent(&dec.d, &rhs)
    }

    fn ample_total(&self) -> Result<Vec<Q>> {
        self.ample
            .as_ref()
            .map_or_else(|| self.total.default_ample(), |a| Ok(a.total.clone()))
    }

    fn ample_base(&self) -> Result<Vec<Q>> {
        self.ample
            .as_ref()
            .map_or_else(|| self.base.default_ample(), |a| Ok(a.base.clone()))
    }

    fn ample_fiber(&self) -> Result<Vec<Q>> {
        self.ample
            .as_ref()
            .map_or_else(|| self.fiber.default_ample(), |a| Ok(a.fiber.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BodySummary {
    pub ambient_dim: usize,
    /// `-1` for the empty body.
    pub dim: i64,
    pub vertices: Vec<Vec<String>>,
    /// Volume in its own dimension; absent when the affine hull is not a
    /// coordinate subspace.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume: Option<String>,
}

impl BodySummary {
    pub fn of(p: &Polytope) -> BodySummary {
        BodySummary {
            ambient_dim: p.ambient_dim(),
            dim: p.dim_signed(),
            vertices: p.vertex_strings(),
            volume: p.intrinsic_volume().ok().map(|v| format_q(&v)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gate {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub instance: String,
    pub inputs_digest: String,
    pub verdict: Verdict,
    pub margin: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_body: Option<BodySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_body: Option<BodySummary>,
    pub hypotheses: Vec<Gate>,
    pub dims: BTreeMap<String, i64>,
    pub volumes: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(check: &str, fs: &FiberSpaceInstance, params: serde_json::Value) -> CheckReport {
        let payload = serde_json::json!({ "check": check, "instance": fs, "params": params });
        let bytes = serde_json::to_vec(&payload).expect("instance serializes");
        let digest: String = Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        CheckReport {
            check: check.to_string(),
            instance: fs.name.clone(),
            inputs_digest: digest,
            verdict: Verdict::HypothesesNotMet,
            margin: "0".into(),
            lhs_body: None,
            rhs_body: None,
            hypotheses: Vec::new(),
            dims: BTreeMap::new(),
            volumes: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Records a hypothesis; errors while deciding it count as failure.
    fn gate(&mut self, name: &str, outcome: Result<bool>) -> bool {
        let (ok, detail) = match outcome {
            Ok(ok) => (ok, String::new()),
            Err(e) => (false, e.to_string()),
        };
        self.hypotheses.push(Gate {
            name: name.into(),
            ok,
            detail,
        });
        ok
    }

    fn gates_ok(&self) -> bool {
        self.hypotheses.iter().all(|g| g.ok)
    }

    /// Marks the report gated on a computation that could not be carried out.
    fn blocked(mut self, what: &str, e: Error) -> CheckReport {
        self.hypotheses.push(Gate {
            name: what.into(),
            ok: false,
            detail: e.to_string(),
        });
        self.verdict = Verdict::HypothesesNotMet;
        self
    }

    fn set_inclusion(&mut self, lhs: &Polytope, rhs: &Polytope) {
        let (verdict, margin) = inclusion(lhs, rhs);
        self.verdict = verdict;
        self.margin = format_q(&margin);
        self.lhs_body = Some(BodySummary::of(lhs));
        self.rhs_body = Some(BodySummary::of(rhs));
    }

    /// Downgrades the verdict to `fails`.
    fn fail(&mut self, note: String) {
        self.verdict = Verdict::Fails;
        self.notes.push(note);
    }
}

/// `holds` for equal bodies, `strict` for a proper inclusion `rhs ⊊ lhs`.
pub fn inclusion(lhs: &Polytope, rhs: &Polytope) -> (Verdict, Q) {
    let c = lhs.contains(rhs);
    let verdict = if !c.contained {
        Verdict::Fails
    } else if lhs == rhs {
        Verdict::Holds
    } else {
        Verdict::Strict
    };
    (verdict, c.margin)
}

fn qs_json(x: &[Q]) -> serde_json::Value {
    serde_json::Value::Array(
        x.iter()
            .map(|c| serde_json::Value::String(format_q(c)))
            .collect(),
    )
}

fn is_psef(m: &VarietyModel, d: &[Q]) -> Result<bool> {
    Ok(m.cone_tests(d)?.is_psef)
}

fn is_big(m: &VarietyModel, d: &[Q]) -> Result<bool> {
    Ok(m.cone_tests(d)?.is_big)
}

fn nakayama_gate(report: &mut CheckReport, name: &str, m: &VarietyModel, d: &[Q], flag: &Flag) {
    match m.nakayama_member(d, flag) {
        Ok(Some((k, how))) => {
            report.hypotheses.push(Gate {
                name: name.into(),
                ok: true,
                detail: format!("codimension {k}, {how}"),
            });
        }
        Ok(None) => {
            report.gate(name, Ok(false));
        }
        Err(e) => {
            report.gate(name, Err(e));
        }
    }
}

fn positive_volume_gate(
    report: &mut CheckReport,
    name: &str,
    m: &VarietyModel,
    d: &[Q],
    flag: &Flag,
    a: &[Q],
) {
    let out = m.positive_volume_member(d, flag, a);
    match out {
        Ok(Some(k)) => {
            report.hypotheses.push(Gate {
                name: name.into(),
                ok: true,
                detail: format!("codimension {k}"),
            });
        }
        other => {
            report.gate(name, other.map(|_| false));
        }
    }
}

/// The five gates shared by the valuative inclusion checks.
fn decomposition_gates(report: &mut CheckReport, fs: &FiberSpaceInstance, need_big_base: bool) {
    let dec = &fs.decomposition;
    let r_f = fs.restrict(&dec.r);
    report.gate("decomposition D = f*D_Y + R", fs.decomposition_holds());
    report.gate(
        "weakly positive (declared)",
        Ok(fs.hypotheses.weakly_positive),
    );
    report.gate("R|_F pseudoeffective", is_psef(&fs.fiber, &r_f));
    if need_big_base {
        report.gate("D_Y big", is_big(&fs.base, &dec.d_y));
    } else {
        report.gate("D_Y pseudoeffective", is_psef(&fs.base, &dec.d_y));
    }
    if report.gates_ok() {
        nakayama_gate(
            report,
            "Nakayama member for D_Y in the base flag",
            &fs.base,
            &dec.d_y,
            &fs.flags.base,
        );
        nakayama_gate(
            report,
            "Nakayama member for R|_F in the fibre flag",
            &fs.fiber,
            &r_f,
            &fs.flags.fiber,
        );
    }
}

/// `Δ^val(D + f*A_Y) ⊇ Δ^val(D_Y) × {0} + {0} × Δ^val(R|_F)`.
pub fn check_thm_1_3(fs: &FiberSpaceInstance, a_y: Option<&[Q]>) -> Result<CheckReport> {
    let a_y = match a_y {
        Some(a) => a.to_vec(),
        None => fs.ample_base()?,
    };
    fs.base.check_divisor(&a_y)?;
    let mut report = CheckReport::new("thm1_3", fs, serde_json::json!({ "A_Y": qs_json(&a_y) }));
    decomposition_gates(&mut report, fs, false);
    report.gate("A_Y ample", fs.base.cone_tests(&a_y).map(|c| c.is_ample));
    if !report.gates_ok() {
        return Ok(report);
    }
    let dec = &fs.decomposition;
    let padded: Vec<Q> = dec
        .d
        .iter()
        .zip(fs.pull_back(&a_y))
        .map(|(a, b)| a + b)
        .collect();
    let bodies = (|| {
        let lhs = fs.total.body_val(&padded, fs.total_flag())?;
        let by = fs.base.body_val(&dec.d_y, &fs.flags.base)?;
        let bf = fs.fiber.body_val(&fs.restrict(&dec.r), &fs.flags.fiber)?;
        Ok::<_, Error>((lhs, by, bf))
    })();
    let (lhs, by, bf) = match bodies {
        Ok(b) => b,
        Err(e) => return Ok(report.blocked("valuative bodies computable", e)),
    };
    let rhs = fs.embed_base(&by).minkowski_sum(&fs.embed_fiber(&bf))?;
    report.set_inclusion(&lhs, &rhs);
    report.dims.insert("dim lhs".into(), lhs.dim_signed());
    report.dims.insert("dim Δ(D_Y)".into(), by.dim_signed());
    report.dims.insert("dim Δ(R|_F)".into(), bf.dim_signed());
    let slice = lhs.slice_prefix_zero(fs.base.dim())?;
    let fib = fs.embed_fiber(&bf);
    report.notes.push(format!(
        "slice over the base flag point {} the fibre body",
        if slice == fib {
            "equals"
        } else {
            "differs from"
        }
    ));
    Ok(report)
}

/// `Δ^val(D) ⊇ Δ^val(D_Y) × {0} + {0} × Δ^val(R|_F)` for big `D_Y`, with
/// `κ(D) ≥ κ(D_Y) + κ(R|_F)` read off the body dimensions.
pub fn check_cor_3_5(fs: &FiberSpaceInstance) -> Result<CheckReport> {
    let mut report = CheckReport::new("cor3_5", fs, serde_json::json!({}));
    decomposition_gates(&mut report, fs, true);
    if !report.gates_ok() {
        return Ok(report);
    }
    let dec = &fs.decomposition;
    let bodies = (|| {
        let lhs = fs.total.body_val(&dec.d, fs.total_flag())?;
        let by = fs.base.body_val(&dec.d_y, &fs.flags.base)?;
        let bf = fs.fiber.body_val(&fs.restrict(&dec.r), &fs.flags.fiber)?;
        Ok::<_, Error>((lhs, by, bf))
    })();
    let (lhs, by, bf) = match bodies {
        Ok(b) => b,
        Err(e) => return Ok(report.blocked("valuative bodies computable", e)),
    };
    let rhs = fs.embed_base(&by).minkowski_sum(&fs.embed_fiber(&bf))?;
    report.set_inclusion(&lhs, &rhs);
    let (kx, ky, kf) = (lhs.dim_signed(), by.dim_signed(), bf.dim_signed());
    report.dims.insert("κ(D)".into(), kx);
    report.dims.insert("κ(D_Y)".into(), ky);
    report.dims.insert("κ(R|_F)".into(), kf);
    if kx < ky + kf {
        report.fail(format!("κ superadditivity fails: {kx} < {ky} + {kf}"));
    }
    Ok(report)
}

/// Limiting inclusion and `ν` superadditivity for canonical classes, plus
/// the volume product inequality when the `ν` add up and `K_F` is big.
pub fn check_thm_1_1(fs: &FiberSpaceInstance) -> Result<CheckReport> {
    let (a, a_y, a_f) = (fs.ample_total()?, fs.ample_base()?, fs.ample_fiber()?);
    let params =
        serde_json::json!({ "A": qs_json(&a), "A_Y": qs_json(&a_y), "A_F": qs_json(&a_f) });
    let mut report = CheckReport::new("thm1_1", fs, params);
    let (kx, ky, kf) = (
        fs.total.canonical_class(),
        fs.base.canonical_class(),
        fs.fiber.canonical_class(),
    );
    report.gate("K_Y pseudoeffective", is_psef(&fs.base, &ky));
    report.gate("K_F pseudoeffective", is_psef(&fs.fiber, &kf));
    report.gate("K_X pseudoeffective", is_psef(&fs.total, &kx));
    if !report.gates_ok() {
        return Ok(report);
    }
    positive_volume_gate(
        &mut report,
        "positive volume member for K_X",
        &fs.total,
        &kx,
        fs.total_flag(),
        &a,
    );
    positive_volume_gate(
        &mut report,
        "positive volume member for K_Y",
        &fs.base,
        &ky,
        &fs.flags.base,
        &a_y,
    );
    positive_volume_gate(
        &mut report,
        "positive volume member for K_F",
        &fs.fiber,
        &kf,
        &fs.flags.fiber,
        &a_f,
    );
    if !report.gates_ok() {
        return Ok(report);
    }
    let computed = (|| {
        let lhs = fs.total.body_lim(&kx, fs.total_flag(), &a, None)?;
        let by = fs.base.body_lim(&ky, &fs.flags.base, &a_y, None)?;
        let bf = fs.fiber.body_lim(&kf, &fs.flags.fiber, &a_f, None)?;
        let nus = (
            fs.total.dims(&kx, &a)?.nu_bdpp,
            fs.base.dims(&ky, &a_y)?.nu_bdpp,
            fs.fiber.dims(&kf, &a_f)?.nu_bdpp,
        );
        Ok::<_, Error>((lhs, by, bf, nus))
    })();
    let (lhs, by, bf, (nx, ny, nf)) = match computed {
        Ok(c) => c,
        Err(e) => return Ok(report.blocked("limiting bodies computable", e)),
    };
    let rhs = fs.embed_base(&by).minkowski_sum(&fs.embed_fiber(&bf))?;
    report.set_inclusion(&lhs, &rhs);
    report.dims.insert("ν(K_X)".into(), nx as i64);
    report.dims.insert("ν(K_Y)".into(), ny as i64);
    report.dims.insert("ν(K_F)".into(), nf as i64);
    if nx < ny + nf {
        report.fail(format!("ν superadditivity fails: {nx} < {ny} + {nf}"));
        return Ok(report);
    }
    if nx > ny + nf {
        report.verdict = Verdict::Strict;
        report
            .notes
            .push(format!("ν strictly superadditive: {nx} > {ny} + {nf}"));
        return Ok(report);
    }
    if !is_big(&fs.fiber, &kf)? {
        report
            .notes
            .push("K_F not big: volume product inequality not evaluated".into());
        return Ok(report);
    }
    let (cx, cy) = (fs.total.dim() - nx, fs.base.dim() - ny);
    let lhs_vol = fs
        .total
        .restricted_volume_plus(&kx, fs.total_flag(), cx, &a)?
        / factorial(nx);
    let base_vol = fs
        .base
        .restricted_volume_plus(&ky, &fs.flags.base, cy, &a_y)?
        / factorial(ny);
    let fib_vol = fs.fiber.volume(&kf)? / factorial(fs.fiber.dim());
    let rhs_vol = &base_vol * &fib_vol;
    report
        .volumes
        .insert("vol⁺(K_X)/ν!".into(), format_q(&lhs_vol));
    report
        .volumes
        .insert("vol⁺(K_Y)/ν!".into(), format_q(&base_vol));
    report
        .volumes
        .insert("vol(K_F)/dim F!".into(), format_q(&fib_vol));
    report.volumes.insert("product".into(), format_q(&rhs_vol));
    if lhs_vol < rhs_vol {
        report.fail(format!(
            "volume product inequality fails: {} < {}",
            format_q(&lhs_vol),
            format_q(&rhs_vol)
        ));
    } else if lhs_vol == rhs_vol {
        report.notes.push(format!(
            "volume product equality {} = {}; equality forces birational isotriviality (declared isotrivial: {})",
            format_q(&lhs_vol),
            format_q(&rhs_vol),
            fs.hypotheses.isotrivial
        ));
    } else {
        report.notes.push(format!(
            "volume product inequality strict: {} > {}",
            format_q(&lhs_vol),
            format_q(&rhs_vol)
        ));
    }
    Ok(report)
}

/// Iitaka dimension from a declaration or the valuative body; `-1` for no
/// sections.
fn kappa_of(m: &VarietyModel, d: &[Q], flag: &Flag) -> Result<i64> {
    if let VarietyModel::Surface(s) = m {
        if let Some(k) = s.declared_kappa(d) {
            return Ok(k);
        }
    }
    Ok(m.kappa_via_body(d, flag)?.map_or(-1, |k| k as i64))
}

/// Valuative inclusion for canonical classes with big `K_Y`, and
/// `κ(K_X) = κ(K_Y) + κ(K_F)` against the bound `κ(K_X) ≤ dim Y + κ(K_F)`.
pub fn check_thm_1_2(fs: &FiberSpaceInstance) -> Result<CheckReport> {
    let mut report = CheckReport::new("thm1_2", fs, serde_json::json!({}));
    let (kx, ky, kf) = (
        fs.total.canonical_class(),
        fs.base.canonical_class(),
        fs.fiber.canonical_class(),
    );
    report.gate("K_Y big", is_big(&fs.base, &ky));
    report.gate(
        "K_F effective",
        kappa_of(&fs.fiber, &kf, &fs.flags.fiber).map(|k| k >= 0),
    );
    if !report.gates_ok() {
        return Ok(report);
    }
    let computed = (|| {
        let lhs = fs.total.body_val(&kx, fs.total_flag())?;
        let by = fs.base.body_val(&ky, &fs.flags.base)?;
        let bf = fs.fiber.body_val(&kf, &fs.flags.fiber)?;
        let ks = (
            kappa_of(&fs.total, &kx, fs.total_flag())?,
            kappa_of(&fs.base, &ky, &fs.flags.base)?,
            kappa_of(&fs.fiber, &kf, &fs.flags.fiber)?,
        );
        Ok::<_, Error>((lhs, by, bf, ks))
    })();
    let (lhs, by, bf, (cx, cy, cf)) = match computed {
        Ok(c) => c,
        Err(e) => return Ok(report.blocked("valuative bodies computable", e)),
    };
    let rhs = fs.embed_base(&by).minkowski_sum(&fs.embed_fiber(&bf))?;
    report.set_inclusion(&lhs, &rhs);
    report.dims.insert("κ(K_X)".into(), cx);
    report.dims.insert("κ(K_Y)".into(), cy);
    report.dims.insert("κ(K_F)".into(), cf);
    let bound = fs.base.dim() as i64 + cf;
    report.dims.insert("dim Y + κ(K_F)".into(), bound);
    if cx > bound {
        report.fail(format!("κ(K_X) = {cx} exceeds dim Y + κ(K_F) = {bound}"));
    } else if cx != cy + cf {
        report.fail(format!("κ additivity fails: {cx} ≠ {cy} + {cf}"));
    }
    Ok(report)
}

/// `vol_{X|N}(D) = vol_{F|N}(R|_F)` for a Nakayama member `N` of `R|_F` in
/// the fibre flag, both sides read from restricted series on toric models.
/// `codim_in_fiber` defaults to the instance's choice, then to the Nakayama
/// member of the fibre flag.
pub fn check_lemma_3_1(
    fs: &FiberSpaceInstance,
    codim_in_fiber: Option<usize>,
) -> Result<CheckReport> {
    let dec = &fs.decomposition;
    let r_f = fs.restrict(&dec.r);
    let mut report = CheckReport::new("lemma3_1", fs, serde_json::json!({ "N": codim_in_fiber }));
    let (
        VarietyModel::Toric(x),
        VarietyModel::Toric(y),
        VarietyModel::Toric(f),
        Flag::Toric(bf),
        Flag::Toric(ff),
    ) = (
        &fs.total,
        &fs.base,
        &fs.fiber,
        &fs.flags.base,
        &fs.flags.fiber,
    )
    else {
        return Ok(report.blocked(
            "toric instance",
            Error::Unsupported("restricted series need a toric instance".into()),
        ));
    };
    report.gate("D_Y big", is_big(&fs.base, &dec.d_y));
    report.gate("decomposition D = f*D_Y + R", fs.decomposition_holds());
    report.gate("R|_F pseudoeffective", is_psef(&fs.fiber, &r_f));
    if !report.gates_ok() {
        return Ok(report);
    }
    let member = fs.fiber.nakayama_member(&r_f, &fs.flags.fiber)?;
    let k = match (codim_in_fiber.or(fs.nakayama_in_fiber), member) {
        (Some(k), _) => {
            let ok = fs.fiber.is_nakayama(&r_f, &fs.flags.fiber, k);
            if !report.gate(
                &format!("fibre flag member of codimension {k} is Nakayama for R|_F"),
                ok.map(|v| v == crate::invariants::NakayamaVerdict::Certified),
            ) {
                return Ok(report);
            }
            k
        }
        (None, Some((k, _))) => {
            report.hypotheses.push(Gate {
                name: "Nakayama member for R|_F".into(),
                ok: true,
                detail: format!("codimension {k}"),
            });
            k
        }
        (None, None) => {
            report.gate("Nakayama member for R|_F", Ok(false));
            return Ok(report);
        }
    };
    let p = ProductFibration {
        base: y.clone(),
        fiber: f.clone(),
        total: x.clone(),
    };
    let off = y.num_rays();
    let mut total_stratum = p.fiber_stratum(bf);
    total_stratum.extend(ff.ray_order[..k].iter().map(|i| i + off));
    let fiber_stratum = &ff.ray_order[..k];
    let lhs = x.restricted_volume(
        &crate::toric::ToricDivisor::new(dec.d.clone()),
        &total_stratum,
    )?;
    let rhs = f.restricted_volume(&crate::toric::ToricDivisor::new(r_f.clone()), fiber_stratum)?;
    report.volumes.insert("vol_{X|N}(D)".into(), format_q(&lhs));
    report
        .volumes
        .insert("vol_{F|N}(R|_F)".into(), format_q(&rhs));
    report.dims.insert("dim N".into(), (f.dim() - k) as i64);
    let levels: Vec<u32> = (1..=12).collect();
    let denom_ok = levels.iter().all(|&m| {
        let mq = q(i64::from(m));
        dec.d.iter().chain(&r_f).all(|c| (c * &mq).is_integer())
    });
    if denom_ok {
        let sx = x.restricted_series(
            &crate::toric::ToricDivisor::new(dec.d.clone()),
            &total_stratum,
            &levels,
        )?;
        let sf = f.restricted_series(
            &crate::toric::ToricDivisor::new(r_f.clone()),
            fiber_stratum,
            &levels,
        )?;
        let counts = |s: &crate::toric::GradedSeries| {
            levels
                .iter()
                .map(|&m| s.dim_at(m).unwrap_or(0).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        report.notes.push(format!(
            "restricted series sizes on X, m = 1..12: {}",
            counts(&sx)
        ));
        report.notes.push(format!(
            "restricted series sizes on F, m = 1..12: {}",
            counts(&sf)
        ));
    }
    if lhs == rhs {
        report.verdict = Verdict::Holds;
    } else {
        report.verdict = Verdict::Fails;
        report.margin = format_q(&(&lhs - &rhs).abs());
    }
    Ok(report)
}

/// `κ_vol(D) ≥ κ_vol(D_Y) + κ_vol(R|_F)`.
pub fn check_remark_3_6(fs: &FiberSpaceInstance) -> Result<CheckReport> {
    let (a, a_y, a_f) = (fs.ample_total()?, fs.ample_base()?, fs.ample_fiber()?);
    let params =
        serde_json::json!({ "A": qs_json(&a), "A_Y": qs_json(&a_y), "A_F": qs_json(&a_f) });
    let mut report = CheckReport::new("remark3_6", fs, params);
    let dec = &fs.decomposition;
    let r_f = fs.restrict(&dec.r);
    report.gate("decomposition D = f*D_Y + R", fs.decomposition_holds());
    report.gate("D pseudoeffective", is_psef(&fs.total, &dec.d));
    report.gate("D_Y pseudoeffective", is_psef(&fs.base, &dec.d_y));
    report.gate("R|_F pseudoeffective", is_psef(&fs.fiber, &r_f));
    if !report.gates_ok() {
        return Ok(report);
    }
    let computed = (|| {
        Ok::<_, Error>((
            fs.total.dims(&dec.d, &a)?.kappa_vol,
            fs.base.dims(&dec.d_y, &a_y)?.kappa_vol,
            fs.fiber.dims(&r_f, &a_f)?.kappa_vol,
        ))
    })();
    let (vx, vy, vf) = match computed {
        Ok(c) => c,
        Err(e) => return Ok(report.blocked("κ_vol computable", e)),
    };
    report.dims.insert("κ_vol(D)".into(), vx as i64);
    report.dims.insert("κ_vol(D_Y)".into(), vy as i64);
    report.dims.insert("κ_vol(R|_F)".into(), vf as i64);
    report.verdict = match vx.cmp(&(vy + vf)) {
        std::cmp::Ordering::Equal => Verdict::Holds,
        std::cmp::Ordering::Greater => Verdict::Strict,
        std::cmp::Ordering::Less => Verdict::Fails,
    };
    report.margin = if vx < vy + vf {
        ((vy + vf - vx) as i64).to_string()
    } else {
        "0".into()
    };
    Ok(report)
}

/// Runs a named check with default parameters.
pub fn run_check(fs: &FiberSpaceInstance, name: &str) -> Result<CheckReport> {
    match name {
        "thm1_3" => check_thm_1_3(fs, None),
        "cor3_5" => check_cor_3_5(fs),
        "thm1_1" => check_thm_1_1(fs),
        "thm1_2" => check_thm_1_2(fs),
        "lemma3_1" => check_lemma_3_1(fs, None),
        "remark3_6" => check_remark_3_6(fs),
        _ => Err(Error::Unsupported(format!(
            "unknown check {name:?}; expected one of {}",
            CHECKS.join(", ")
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalingReport {
    pub instance: String,
    #[serde(with = "serde_q")]
    pub step: Q,
    #[serde(with = "serde_q")]
    pub bound: Q,
    pub total_body: BodySummary,
    pub base_body: BodySummary,
    pub fiber_body: BodySummary,
    /// Triples `(α, β, γ)` with `αΔ(K_X) ⊇ βΔ(K_Y) × {0} + γ{0} × Δ(K_F)`.
    pub feasible: Vec<[String; 3]>,
    /// Least grid `α` feasible with `β = γ = 1`.
    pub min_alpha_unit: Option<String>,
    /// Comparison `Δ(K_X)` against `Δ(K_Y) × {0} + {0} × Δ(K_F)`.
    pub unit_verdict: Verdict,
    /// Whether instead the sum strictly contains `Δ(K_X)`.
    pub reverse_strict: bool,
}

impl ScalingReport {
    pub fn is_feasible(&self, alpha: &Q, beta: &Q, gamma: &Q) -> bool {
        let key = [format_q(alpha), format_q(beta), format_q(gamma)];
        self.feasible.contains(&key)
    }
}

/// Grid scan of the scalings relating the three canonical valuative bodies;
/// dilations are about the origin.
pub fn scaling_search(
    fs: &FiberSpaceInstance,
    step: Option<Q>,
    bound: Option<Q>,
) -> Result<ScalingReport> {
    let step = step.unwrap_or_else(|| Q::new(1.into(), 4.into()));
    let bound = bound.unwrap_or_else(|| q(4));
    if !step.is_positive() || !bound.is_positive() {
        return Err(Error::NegativeScale(format!(
            "grid step {} and bound {}",
            format_q(&step),
            format_q(&bound)
        )));
    }
    let bx = fs
        .total
        .body_val(&fs.total.canonical_class(), fs.total_flag())?;
    let by = fs.embed_base(
        &fs.base
            .body_val(&fs.base.canonical_class(), &fs.flags.base)?,
    );
    let bf = fs.embed_fiber(
        &fs.fiber
            .body_val(&fs.fiber.canonical_class(), &fs.flags.fiber)?,
    );
    let mut grid = Vec::new();
    let mut t = step.clone();
    while t <= bound {
        grid.push(t.clone());
        t += &step;
    }
    let mut feasible = Vec::new();
    for alpha in &grid {
        let hs: Vec<_> = bx
            .to_hrep()
            .iter()
            .map(|h| (h.normal.clone(), &h.offset * alpha))
            .collect();
        for beta in &grid {
            for gamma in &grid {
                let ok = by.vertices().iter().all(|u| {
                    bf.vertices().iter().all(|w| {
                        let p = &u.scaled(beta) + &w.scaled(gamma);
                        hs.iter().all(|(n, b)| &p.dot(&n.0) <= b)
                    })
                });
                if ok && !bx.is_empty() {
                    feasible.push([format_q(alpha), format_q(beta), format_q(gamma)]);
                }
            }
        }
    }
    let one = format_q(&Q::one());
    let min_alpha_unit = feasible
        .iter()
        .find(|t| t[1] == one && t[2] == one)
        .map(|t| t[0].clone());
    let sum = by.minkowski_sum(&bf)?;
    let (unit_verdict, _) = inclusion(&bx, &sum);
    let reverse_strict = matches!(inclusion(&sum, &bx).0, Verdict::Strict);
    Ok(ScalingReport {
        instance: fs.name.clone(),
        step,
        bound,
        total_body: BodySummary::of(&bx),
        base_body: BodySummary::of(&by),
        fiber_body: BodySummary::of(&bf),
        feasible,
        min_alpha_unit,
        unit_verdict,
        reverse_strict,
    })
}

/// Instances shipped as fixtures, also built in code for the tests.
pub mod instances {
    use std::collections::BTreeMap;

    use super::*;
    use crate::curve::CurveModel;
    use crate::surface::models;
    use crate::toric::{fans, ToricFlag};

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn expect(pairs: &[(&str, Verdict)]) -> BTreeMap<String, Verdict> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn build(u: Unchecked) -> FiberSpaceInstance {
        FiberSpaceInstance::try_from(u).expect("shipped instance is valid")
    }

    fn hyp(isotrivial: bool, var_f: Variation, iitaka: Option<u32>) -> Hypotheses {
        Hypotheses {
            weakly_positive: true,
            isotrivial,
            var_f,
            iitaka_degree_on_fiber: iitaka,
        }
    }

    fn toric(
        name: &str,
        base: crate::toric::ToricVariety,
        fiber: crate::toric::ToricVariety,
        d_y: &[i64],
        r: &[i64],
    ) -> Unchecked {
        let p = ProductFibration::new(base, fiber);
        let d_y = v(d_y);
        let r = v(r);
        let d: Vec<Q> = p
            .pullback(&crate::toric::ToricDivisor::new(d_y.clone()))
            .coeffs
            .iter()
            .zip(&r)
            .map(|(a, b)| a + b)
            .collect();
        let tflag = |order: Vec<usize>| {
            Flag::Toric(ToricFlag {
                cone: 0,
                ray_order: order,
            })
        };
        let (nb, nf) = (p.base.dim(), p.fiber.dim());
        Unchecked {
            name: name.into(),
            pullback: p.pullback_matrix(),
            restriction: p.restriction_matrix(),
            base: VarietyModel::Toric(p.base),
            fiber: VarietyModel::Toric(p.fiber),
            total: VarietyModel::Toric(p.total),
            decomposition: Decomposition { d, d_y, r },
            hypotheses: hyp(true, Variation::Value(0), None),
            flags: InstanceFlags {
                base: tflag(fans_order(nb)),
                fiber: tflag(fans_order(nf)),
            },
            ample: None,
            nakayama_in_fiber: None,
            expect: BTreeMap::new(),
        }
    }

    fn fans_order(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    /// `ℙ¹ × ℙ¹ → ℙ¹` with `D = f*(2H) + 3F₂`.
    pub fn quadric_product() -> FiberSpaceInstance {
        let mut u = toric(
            "quadric_product",
            fans::line(),
            fans::line(),
            &[0, 2],
            &[0, 0, 0, 3],
        );
        u.expect = expect(&[
            ("thm1_3", Verdict::Strict),
            ("cor3_5", Verdict::Holds),
            ("thm1_1", Verdict::HypothesesNotMet),
            ("thm1_2", Verdict::HypothesesNotMet),
            ("lemma3_1", Verdict::Holds),
            ("remark3_6", Verdict::Holds),
        ]);
        build(u)
    }

    /// `ℙ¹ × ℙ¹ → ℙ¹` with `R = 0`.
    pub fn quadric_trivial_fiber() -> FiberSpaceInstance {
        let mut u = toric(
            "quadric_trivial_fiber",
            fans::line(),
            fans::line(),
            &[0, 2],
            &[0, 0, 0, 0],
        );
        u.expect = expect(&[
            ("thm1_3", Verdict::Strict),
            ("cor3_5", Verdict::Holds),
            ("lemma3_1", Verdict::Holds),
            ("remark3_6", Verdict::Holds),
        ]);
        build(u)
    }

    /// `ℙ² × ℙ¹ → ℙ²` with `R` carrying a vertical part.
    pub fn plane_line() -> FiberSpaceInstance {
        let mut u = toric(
            "plane_line",
            fans::plane(),
            fans::line(),
            &[0, 0, 2],
            &[1, 0, 0, 0, 3],
        );
        u.expect = expect(&[
            ("thm1_3", Verdict::Strict),
            ("cor3_5", Verdict::Strict),
            ("lemma3_1", Verdict::Holds),
            ("remark3_6", Verdict::Holds),
        ]);
        build(u)
    }

    /// `ℙ¹ × ℙ¹ → ℙ¹` with `D_Y = 0`, standing in for a base whose class is
    /// not big.
    pub fn quadric_surrogate() -> FiberSpaceInstance {
        let mut u = toric(
            "quadric_surrogate",
            fans::line(),
            fans::line(),
            &[0, 0],
            &[0, 0, 0, 2],
        );
        u.expect = expect(&[
            ("thm1_3", Verdict::Strict),
            ("cor3_5", Verdict::HypothesesNotMet),
            ("lemma3_1", Verdict::HypothesesNotMet),
            ("remark3_6", Verdict::Holds),
        ]);
        build(u)
    }

    /// A decomposition that does not add up.
    pub fn quadric_bad_decomposition() -> FiberSpaceInstance {
        let mut u = toric(
            "quadric_bad_decomposition",
            fans::line(),
            fans::line(),
            &[0, 2],
            &[0, 0, 0, 3],
        );
        u.decomposition.d_y = v(&[1, 0]);
        u.expect = expect(&[
            ("thm1_3", Verdict::HypothesesNotMet),
            ("cor3_5", Verdict::HypothesesNotMet),
            ("lemma3_1", Verdict::HypothesesNotMet),
            ("remark3_6", Verdict::HypothesesNotMet),
        ]);
        build(u)
    }

    /// The fibre class is the first basis vector.
    fn over_curve(
        name: &str,
        s: crate::surface::SurfaceLattice,
        g_base: u32,
        g_fiber: u32,
        d: &[i64],
        d_y: &[i64],
        r: &[i64],
    ) -> Unchecked {
        let fiber_row = s.gram()[0].clone();
        Unchecked {
            name: name.into(),
            base: VarietyModel::Curve(CurveModel::new(g_base)),
            fiber: VarietyModel::Curve(CurveModel::new(g_fiber)),
            total: VarietyModel::Surface(s),
            pullback: vec![v(&[1]), v(&[0])],
            restriction: vec![fiber_row],
            decomposition: Decomposition {
                d: v(d),
                d_y: v(d_y),
                r: v(r),
            },
            hypotheses: hyp(true, Variation::Value(0), None),
            flags: InstanceFlags {
                base: Flag::Curve(Default::default()),
                fiber: Flag::Curve(Default::default()),
            },
            ample: None,
            nakayama_in_fiber: None,
            expect: BTreeMap::new(),
        }
    }

    /// `C × C'` over `C` for two genus-2 curves, `D = K`.
    pub fn genus2_product() -> FiberSpaceInstance {
        let s = models::curve_product(2, 2, Some(2), Some(1));
        let mut u = over_curve("genus2_product", s, 2, 2, &[2, 2], &[2], &[0, 2]);
        u.expect = expect(&[
            ("thm1_1", Verdict::Holds),
            ("thm1_2", Verdict::Holds),
            ("thm1_3", Verdict::Strict),
            ("cor3_5", Verdict::Holds),
            ("lemma3_1", Verdict::HypothesesNotMet),
            ("remark3_6", Verdict::Holds),
        ]);
        build(u)
    }

    /// Genus-2 base, elliptic fibre, `D = K`.
    pub fn genus2_elliptic() -> FiberSpaceInstance {
        let s = models::curve_product(2, 1, Some(1), Some(1));
        let mut u = over_curve("genus2_elliptic", s, 2, 1, &[2, 0], &[2], &[0, 0]);
        u.expect = expect(&[
            ("thm1_1", Verdict::HypothesesNotMet),
            ("thm1_2", Verdict::Holds),
            ("thm1_3", Verdict::Strict),
            ("cor3_5", Verdict::Holds),
            ("remark3_6", Verdict::Holds),
        ]);
        build(u)
    }

    /// Surface of general type fibred over an elliptic curve in genus-2
    /// curves, `D = K`.
    pub fn general_type_over_elliptic() -> FiberSpaceInstance {
        let s = models::general_type_over_elliptic();
        let mut u = over_curve(
            "general_type_over_elliptic",
            s,
            1,
            2,
            &[1, 1],
            &[0],
            &[1, 1],
        );
        u.expect = expect(&[
            ("thm1_1", Verdict::Strict),
            ("thm1_2", Verdict::HypothesesNotMet),
            ("thm1_3", Verdict::Strict),
            ("cor3_5", Verdict::HypothesesNotMet),
            ("remark3_6", Verdict::Strict),
        ]);
        build(u)
    }

    /// Surface with `κ = 1` fibred over an elliptic curve in genus-2 curves,
    /// its Iitaka map of degree 2 on the fibres; `D = K`.
    pub fn kodaira_one_over_elliptic() -> FiberSpaceInstance {
        let s = models::kodaira_one_over_elliptic();
        let mut u = over_curve("kodaira_one_over_elliptic", s, 1, 2, &[0, 1], &[0], &[0, 1]);
        u.hypotheses.iitaka_degree_on_fiber = Some(2);
        u.expect = expect(&[
            ("thm1_1", Verdict::Holds),
            ("thm1_2", Verdict::HypothesesNotMet),
            ("thm1_3", Verdict::Strict),
            ("cor3_5", Verdict::HypothesesNotMet),
            ("remark3_6", Verdict::Holds),
        ]);
        build(u)
    }

    /// Product of two elliptic curves, `K = 0`.
    pub fn elliptic_product() -> FiberSpaceInstance {
        let s = models::curve_product(1, 1, Some(0), None);
        let mut u = over_curve("elliptic_product", s, 1, 1, &[0, 0], &[0], &[0, 0]);
        u.expect = expect(&[
            ("thm1_1", Verdict::Holds),
            ("thm1_2", Verdict::HypothesesNotMet),
            ("thm1_3", Verdict::HypothesesNotMet),
            ("remark3_6", Verdict::Holds),
        ]);
        build(u)
    }

    pub fn all() -> Vec<FiberSpaceInstance> {
        vec![
            quadric_product(),
            quadric_trivial_fiber(),
            plane_line(),
            quadric_surrogate(),
            quadric_bad_decomposition(),
            genus2_product(),
            genus2_elliptic(),
            general_type_over_elliptic(),
            kodaira_one_over_elliptic(),
            elliptic_product(),
        ]
    }
}
