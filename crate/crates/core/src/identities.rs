//! Numerical audit of the identities satisfied, or claimed to be satisfied,
//! by the extended gamma and beta k-functions.
//!
//! Every check produces an [`IdentityReport`]. Checks marked `asserted` are
//! expected to hold; the rest are probes of printed claims that are known or
//! suspected to be misprinted, and their verdicts are recorded only.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::extfun::{
    evaluator, extended_beta_with, extended_gamma_closed_form_claimed, extended_gamma_magnitude, extended_gamma_strip,
    extended_gamma_with, ExtBetaArgs, Trap,
};
use crate::kcore::{k_beta, GammaMode, MLParams, MittagLeffler};
use crate::quad::{integrate_0inf, EvalResult, HalfLine, QuadConfig};
use crate::repr::{eval_representation_with, paper_literal_representation_with, Representation};
use crate::special::{gamma, ln_beta, ln_gamma, ln_rising, rgamma, CompensatedSum};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    /// `β(s, t+k) + β(s+k, t) = β(s, t)`.
    FunctionalRelation,
    /// The same relation with unit shifts, as printed; holds only at `k = 1`.
    FunctionalRelationUnitShift,
    /// `β(s, t) = β(t, s)`.
    Symmetry,
    /// Mellin transform in `v` against `β_k(s−k²g, t−k²g)·Γ^{p,q}_{k,r}(s)`.
    MellinLiteral,
    /// Mellin transform in `v` against `β_k(s−k²g, t−k²g)·Γ^{p,q}_{k,r}(g)`.
    MellinCorrected,
    /// Extended gamma against the printed closed form.
    ClosedFormClaim,
    /// Extended gamma at `q = r = 1` against its independent Mellin closed form.
    GammaReduction,
    /// Extended beta at `q = r = 1` against termwise integration of the series.
    BetaSeriesReduction,
    /// Extended beta at `v = 0` against `β_k(s, t) / G(q)`.
    BetaZeroV,
    /// Extended beta at `p = q = r = 1`, `v = 0` against `β_k(s, t)`.
    BetaUnitReduction,
    /// An alternative representation against the defining integral.
    ReprEquivalence(Representation),
    /// A representation against the same form with other free parameters.
    ReprInvariance(Representation),
    /// A representation as originally printed against the defining integral.
    ReprLiteral(Representation),
}

impl IdentityId {
    pub fn family(&self) -> &'static str {
        use IdentityId::*;
        match self {
            FunctionalRelation => "functional_relation",
            FunctionalRelationUnitShift => "functional_relation_unit_shift",
            Symmetry => "symmetry",
            MellinLiteral => "mellin_literal",
            MellinCorrected => "mellin_corrected",
            ClosedFormClaim => "closed_form_claim",
            GammaReduction => "gamma_reduction",
            BetaSeriesReduction => "beta_series_reduction",
            BetaZeroV => "beta_zero_v",
            BetaUnitReduction => "beta_unit_reduction",
            ReprEquivalence(_) => "repr_equivalence",
            ReprInvariance(_) => "repr_invariance",
            ReprLiteral(_) => "repr_literal",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityId::ReprEquivalence(r) | IdentityId::ReprInvariance(r) | IdentityId::ReprLiteral(r) => {
                write!(f, "{}:{r}", self.family())
            }
            _ => f.write_str(self.family()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InputValue {
    Num(f64),
    Text(String),
}

impl Serialize for InputValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            InputValue::Num(x) => sig17(x, s),
            InputValue::Text(t) => s.serialize_str(t),
        }
    }
}

impl fmt::Display for InputValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputValue::Num(x) => f.write_str(&fmt17(*x)),
            InputValue::Text(t) => f.write_str(t),
        }
    }
}

pub type Inputs = BTreeMap<String, InputValue>;

/// 17 significant digits, or `null` for non-finite values.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn sig17<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw = serde_json::value::RawValue::from_string(fmt17(*x)).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    #[serde(serialize_with = "display")]
    pub identity_id: IdentityId,
    pub inputs: Inputs,
    #[serde(serialize_with = "sig17")]
    pub lhs: f64,
    #[serde(serialize_with = "sig17")]
    pub rhs: f64,
    #[serde(serialize_with = "sig17")]
    pub abs_diff: f64,
    #[serde(serialize_with = "sig17")]
    pub rel_diff: f64,
    pub verdict: Verdict,
    #[serde(serialize_with = "sig17")]
    pub lhs_error: f64,
    #[serde(serialize_with = "sig17")]
    pub rhs_error: f64,
    #[serde(serialize_with = "sig17")]
    pub tolerance: f64,
    pub asserted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn display<T: fmt::Display, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// One side of an identity: a value with its error estimate, or the reason
/// it could not be evaluated.
type Side = Result<EvalResult>;

impl IdentityReport {
    pub fn new(id: IdentityId, inputs: Inputs, lhs: Side, rhs: Side, tol: f64, asserted: bool) -> Self {
        let mut note = None;
        let mut side = |r: Side, name: &str| match r {
            Ok(e) => {
                if !e.converged && note.is_none() {
                    note = Some(format!("{name} did not converge: {:?}", e.diagnostics));
                }
                (e.value, e.error_estimate, e.converged)
            }
            Err(err) => {
                if note.is_none() {
                    note = Some(format!("{name}: {err}"));
                }
                (f64::NAN, f64::NAN, false)
            }
        };
        let (lhs, lhs_error, lok) = side(lhs, "lhs");
        let (rhs, rhs_error, rok) = side(rhs, "rhs");
        let abs_diff = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let rel_diff = if abs_diff == 0.0 { 0.0 } else { abs_diff / scale };
        let verdict = if !(lok && rok && rel_diff.is_finite()) {
            Verdict::Inconclusive
        } else if rel_diff <= tol {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        Self {
            identity_id: id,
            inputs,
            lhs,
            rhs,
            abs_diff,
            rel_diff,
            verdict,
            lhs_error,
            rhs_error,
            tolerance: tol,
            asserted,
            note,
        }
    }

    /// Measures the discrepancy against `magnitude` when it exceeds both
    /// sides, so that identities whose value cancels to zero are judged on
    /// the scale of the integrand rather than on rounding noise.
    fn relative_to(mut self, magnitude: Result<f64>) -> Self {
        let Ok(m) = magnitude else { return self };
        if m.is_finite() && m > self.lhs.abs().max(self.rhs.abs()) {
            self.rel_diff = self.abs_diff / m;
            if self.verdict != Verdict::Inconclusive {
                self.verdict = if self.rel_diff <= self.tolerance { Verdict::Holds } else { Verdict::Fails };
            }
        }
        self
    }
}

/// Per-identity tolerances on the relative discrepancy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub symmetry: f64,
    pub functional_relation: f64,
    pub repr_equivalence: f64,
    pub repr_invariance: f64,
    pub beta_zero_v: f64,
    pub reductions: f64,
    pub mellin: f64,
    pub probes: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symmetry: 1e-10,
            functional_relation: 1e-9,
            repr_equivalence: 1e-7,
            repr_invariance: 1e-8,
            beta_zero_v: 1e-11,
            reductions: 1e-10,
            mellin: 1e-6,
            probes: 1e-6,
        }
    }
}

/// The Mellin variable `g` of a transform in `v`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MellinQuery {
    pub g: f64,
}

/// Evaluation context for one Mittag-Leffler parameter set.
pub struct Checker {
    ml: MittagLeffler,
    qcfg: QuadConfig,
    tol: Tolerances,
}

fn base_inputs(params: &MLParams) -> Inputs {
    let mut m = Inputs::new();
    m.insert("k".into(), InputValue::Num(params.k()));
    m.insert("p".into(), InputValue::Num(params.p()));
    m.insert("q".into(), InputValue::Num(params.q()));
    m.insert("r".into(), InputValue::Num(params.r()));
    m.insert("mode".into(), InputValue::Text(params.mode().name().into()));
    m
}

fn with(mut m: Inputs, pairs: &[(&str, f64)]) -> Inputs {
    for (k, v) in pairs {
        m.insert((*k).into(), InputValue::Num(*v));
    }
    m
}

fn beta_inputs(params: &MLParams, a: &ExtBetaArgs) -> Inputs {
    with(base_inputs(params), &[("s", a.s), ("t", a.t), ("v", a.v)])
}

fn exact(r: Result<f64>) -> Side {
    r.map(EvalResult::exact)
}

impl Checker {
    pub fn new(params: &MLParams, qcfg: QuadConfig, tol: Tolerances) -> Result<Self> {
        qcfg.validate()?;
        Ok(Self { ml: evaluator(params)?, qcfg, tol })
    }

    pub fn params(&self) -> &MLParams {
        self.ml.params()
    }

    fn beta(&self, s: f64, t: f64, v: f64) -> Side {
        extended_beta_with(ExtBetaArgs::new(s, t, v)?, &self.ml, &self.qcfg)
    }

    fn sum(a: Side, b: Side) -> Side {
        Ok(a?.plus(&b?))
    }

    pub fn functional_relation(&self, a: ExtBetaArgs) -> IdentityReport {
        let k = self.params().k();
        let lhs = Self::sum(self.beta(a.s, a.t + k, a.v), self.beta(a.s + k, a.t, a.v));
        let rhs = self.beta(a.s, a.t, a.v);
        let inputs = beta_inputs(self.params(), &a);
        IdentityReport::new(IdentityId::FunctionalRelation, inputs, lhs, rhs, self.tol.functional_relation, true)
    }

    pub fn functional_relation_unit_shift(&self, a: ExtBetaArgs) -> IdentityReport {
        let lhs = Self::sum(self.beta(a.s, a.t + 1.0, a.v), self.beta(a.s + 1.0, a.t, a.v));
        let rhs = self.beta(a.s, a.t, a.v);
        let inputs = beta_inputs(self.params(), &a);
        let id = IdentityId::FunctionalRelationUnitShift;
        IdentityReport::new(id, inputs, lhs, rhs, self.tol.functional_relation, false)
    }

    pub fn symmetry(&self, a: ExtBetaArgs) -> IdentityReport {
        let lhs = self.beta(a.s, a.t, a.v);
        let rhs = self.beta(a.t, a.s, a.v);
        let inputs = beta_inputs(self.params(), &a);
        IdentityReport::new(IdentityId::Symmetry, inputs, lhs, rhs, self.tol.symmetry, true)
    }

    pub fn repr_equivalence(&self, rep: Representation, a: ExtBetaArgs) -> IdentityReport {
        let lhs = eval_representation_with(rep, a, &self.ml, &self.qcfg);
        let rhs = self.beta(a.s, a.t, a.v);
        let id = IdentityId::ReprEquivalence(rep);
        IdentityReport::new(id, beta_inputs(self.params(), &a), lhs, rhs, self.tol.repr_equivalence, true)
    }

    /// Compares `rep` against `reference`, another member of its family.
    pub fn repr_invariance(&self, rep: Representation, reference: Representation, a: ExtBetaArgs) -> IdentityReport {
        let lhs = eval_representation_with(rep, a, &self.ml, &self.qcfg);
        let rhs = eval_representation_with(reference, a, &self.ml, &self.qcfg);
        let mut inputs = beta_inputs(self.params(), &a);
        inputs.insert("reference".into(), InputValue::Text(reference.to_string()));
        let id = IdentityId::ReprInvariance(rep);
        IdentityReport::new(id, inputs, lhs, rhs, self.tol.repr_invariance, true)
    }

    pub fn repr_literal(&self, rep: Representation, a: ExtBetaArgs) -> IdentityReport {
        let lhs = paper_literal_representation_with(rep, a, &self.ml, &self.qcfg);
        let rhs = self.beta(a.s, a.t, a.v);
        let id = IdentityId::ReprLiteral(rep);
        IdentityReport::new(id, beta_inputs(self.params(), &a), lhs, rhs, self.tol.probes, false)
    }

    pub fn beta_zero_v(&self, s: f64, t: f64) -> IdentityReport {
        let p = self.params();
        let lhs = self.beta(s, t, 0.0);
        let rhs = exact(k_beta(s, t, p.k()).and_then(|b| Ok(b / p.denominator_gamma(p.q())?)));
        let inputs = with(base_inputs(p), &[("s", s), ("t", t), ("v", 0.0)]);
        IdentityReport::new(IdentityId::BetaZeroV, inputs, lhs, rhs, self.tol.beta_zero_v, true)
    }

    /// Only the classical-gamma denominator makes this reduction exact, so
    /// it is asserted in that mode alone.
    pub fn beta_unit_reduction(&self, s: f64, t: f64) -> IdentityReport {
        let p = self.params();
        let lhs = self.beta(s, t, 0.0);
        let rhs = exact(k_beta(s, t, p.k()));
        let inputs = with(base_inputs(p), &[("s", s), ("t", t), ("v", 0.0)]);
        let asserted = p.mode() == GammaMode::ClassicalGamma;
        IdentityReport::new(IdentityId::BetaUnitReduction, inputs, lhs, rhs, self.tol.beta_zero_v, asserted)
    }

    pub fn beta_series_reduction(&self, a: ExtBetaArgs) -> IdentityReport {
        let lhs = self.beta(a.s, a.t, a.v);
        let rhs = series_extended_beta(a, &self.ml);
        let id = IdentityId::BetaSeriesReduction;
        IdentityReport::new(id, beta_inputs(self.params(), &a), lhs, rhs, self.tol.reductions, true)
    }

    pub fn gamma_reduction(&self, s: f64) -> IdentityReport {
        let lhs = extended_gamma_with(s, &self.ml, &self.qcfg);
        let rhs = exact(mellin_closed_form(s, &self.ml));
        let inputs = with(base_inputs(self.params()), &[("s", s)]);
        IdentityReport::new(IdentityId::GammaReduction, inputs, lhs, rhs, self.tol.reductions, true)
            .relative_to(self.gamma_magnitude(s))
    }

    pub fn closed_form_claim(&self, s: f64) -> IdentityReport {
        let lhs = extended_gamma_with(s, &self.ml, &self.qcfg);
        let rhs = exact(extended_gamma_closed_form_claimed(s, self.params()));
        let inputs = with(base_inputs(self.params()), &[("s", s)]);
        IdentityReport::new(IdentityId::ClosedFormClaim, inputs, lhs, rhs, self.tol.probes, false)
    }

    /// The literal and corrected Mellin reports, in that order.
    pub fn mellin(&self, s: f64, t: f64, query: MellinQuery) -> [IdentityReport; 2] {
        let k = self.params().k();
        let g = query.g;
        let inputs = with(base_inputs(self.params()), &[("s", s), ("t", t), ("g", g)]);
        let magnitude = shifted_beta(s, t, g, k).and_then(|b| Ok(b * self.gamma_magnitude(g)?));
        let oracle = self.mellin_oracle(s, t, g, magnitude.as_ref().ok().copied());
        let shifted = || shifted_beta(s, t, g, k);
        let literal = shifted().and_then(|b| Ok(extended_gamma_with(s, &self.ml, &self.qcfg)?.scaled(b)));
        let corrected = shifted().and_then(|b| Ok(extended_gamma_with(g, &self.ml, &self.qcfg)?.scaled(b)));
        [
            IdentityReport::new(
                IdentityId::MellinLiteral,
                inputs.clone(),
                oracle.clone(),
                literal,
                self.tol.mellin,
                false,
            ),
            IdentityReport::new(IdentityId::MellinCorrected, inputs, oracle, corrected, self.tol.mellin, true)
                .relative_to(magnitude),
        ]
    }

    fn gamma_magnitude(&self, s: f64) -> Result<f64> {
        let loose = QuadConfig { rel_tol: 1e-6, abs_tol: 1e-9, ..self.qcfg };
        Ok(extended_gamma_magnitude(s, &self.ml, &loose)?.value)
    }

    /// `∫₀^∞ v^{g−1} β(s, t, v) dv` by nested quadrature.
    ///
    /// For large `v`, `β(s,t,v) = O(v^{−c})` with `c = min(d, s/k², t/k²)`,
    /// where `E(−m) = O(m^{−d})`; the outer tail uses that exponent.
    /// `magnitude` bounds the absolute accuracy requested from the outer
    /// quadrature when the transform itself cancels to near zero.
    fn mellin_oracle(&self, s: f64, t: f64, g: f64, magnitude: Option<f64>) -> Side {
        let k = self.params().k();
        let d = extended_gamma_strip(&self.ml)?.unwrap_or(f64::INFINITY);
        let c = d.min(s / (k * k)).min(t / (k * k));
        if !(g > 0.0 && g < c) {
            return Err(Error::Divergent(format!("Mellin transform diverges for g = {g} (needs 0 < g < {c})")));
        }
        let inner = self.qcfg.tightened(1e-2);
        // the outer integrand carries the inner quadrature noise
        let outer = QuadConfig {
            abs_tol: self.qcfg.abs_tol.max(1e-10).max(1e-8 * magnitude.unwrap_or(0.0)),
            rel_tol: self.qcfg.rel_tol.max(1e-8),
            ..self.qcfg
        };
        let trap = Trap::default();
        let shape = HalfLine { origin_exponent: g - 1.0, decay: Some(1.0 - g + c) };
        let r = integrate_0inf(
            |v| trap.catch(extended_beta_with(ExtBetaArgs { s, t, v }, &self.ml, &inner).map(|e| e.value)),
            shape,
            &outer,
        );
        trap.finish(r)
    }
}

/// `β_k(s − k²g, t − k²g)`.
fn shifted_beta(s: f64, t: f64, g: f64, k: f64) -> Result<f64> {
    if !(g > 0.0 && s - k * k * g > 0.0 && t - k * k * g > 0.0) {
        return Err(Error::Domain(format!(
            "Mellin variable g = {g} needs g > 0 and s, t > k²g = {}",
            k * k * g
        )));
    }
    k_beta(s - k * k * g, t - k * k * g, k)
}

/// `∫₀^∞ m^{s−1} E(−m) dm` from the Mellin transform of the Prabhakar
/// function, valid for `0 < s < r/k`.
pub fn mellin_closed_form(s: f64, ml: &MittagLeffler) -> Result<f64> {
    let n = ml.prabhakar();
    if !(s > 0.0 && s < n.gamma) {
        return Err(Error::Domain(format!("closed form needs 0 < s < {}", n.gamma)));
    }
    Ok(n.prefactor * n.scale.powf(-s) * gamma(s) * gamma(n.gamma - s) / gamma(n.gamma)
        * rgamma(n.beta - n.alpha * s))
}

/// Extended beta by termwise integration of the Mittag-Leffler series:
/// `(1/k) Σ_j c_j (−v)^j B(s/k + kj, t/k + kj)`.
pub fn series_extended_beta(a: ExtBetaArgs, ml: &MittagLeffler) -> Side {
    let n = ml.prabhakar();
    let k = ml.params().k();
    let (sa, tb) = (a.s / k, a.t / k);
    if a.v == 0.0 {
        return Ok(EvalResult::exact(ml.at_zero() * ln_beta(sa, tb).exp() / k));
    }
    let lv = (n.scale * a.v).ln();
    let mut sum = CompensatedSum::new();
    let mut abs_sum = 0.0;
    let mut small = 0;
    for j in 0..2000usize {
        let jf = j as f64;
        let ln_mag = ln_rising(n.gamma, jf) + jf * lv - ln_gamma(jf + 1.0) - ln_gamma(n.alpha * jf + n.beta)
            + ln_beta(sa + k * jf, tb + k * jf);
        let term = if j % 2 == 0 { ln_mag.exp() } else { -ln_mag.exp() };
        sum.add(term);
        abs_sum += term.abs();
        if term.abs() <= 1e-17 * sum.value().abs() {
            small += 1;
            if small == 2 {
                let scale = n.prefactor / k;
                let mut r = EvalResult::exact(sum.value() * scale);
                r.error_estimate = 4.0 * f64::EPSILON * abs_sum * scale;
                return Ok(r);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Convergence { partial: sum.value(), terms: 2000 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckFamily {
    Symmetry,
    FunctionalRelation,
    ReprEquivalence,
    ReprInvariance,
    ReprLiteral,
    Reductions,
    ClosedForm,
    Mellin,
}

impl CheckFamily {
    pub const ALL: [CheckFamily; 8] = [
        CheckFamily::Symmetry,
        CheckFamily::FunctionalRelation,
        CheckFamily::ReprEquivalence,
        CheckFamily::ReprInvariance,
        CheckFamily::ReprLiteral,
        CheckFamily::Reductions,
        CheckFamily::ClosedForm,
        CheckFamily::Mellin,
    ];
}

/// Sub-grid for the Mellin checks; `p`, `q`, `r` come from the main grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MellinGrid {
    pub ks: Vec<f64>,
    pub gs: Vec<f64>,
    pub ss: Vec<f64>,
    pub ts: Vec<f64>,
    pub modes: Vec<GammaMode>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub ks: Vec<f64>,
    pub ss: Vec<f64>,
    pub ts: Vec<f64>,
    pub vs: Vec<f64>,
    pub ps: Vec<f64>,
    pub qs: Vec<f64>,
    pub rs: Vec<f64>,
    pub modes: Vec<GammaMode>,
    pub mellin: MellinGrid,
    pub families: Vec<CheckFamily>,
}

impl GridSpec {
    pub fn default_grid() -> Self {
        let pqr = vec![0.75, 1.0, 1.5];
        Self {
            ks: vec![0.5, 1.0, 2.0],
            ss: vec![0.6, 1.0, 2.5],
            ts: vec![0.6, 1.0, 2.5],
            vs: vec![0.0, 0.5, 2.0],
            ps: pqr.clone(),
            qs: pqr.clone(),
            rs: pqr,
            modes: vec![GammaMode::ClassicalGamma, GammaMode::KDeformedGamma],
            mellin: MellinGrid {
                ks: vec![1.0],
                gs: vec![0.25, 0.5],
                ss: vec![2.0, 3.0],
                ts: vec![2.0, 3.0],
                // both denominator modes coincide at k = 1
                modes: vec![GammaMode::ClassicalGamma],
            },
            families: CheckFamily::ALL.to_vec(),
        }
    }

    pub fn empty() -> Self {
        Self {
            ks: vec![],
            ss: vec![],
            ts: vec![],
            vs: vec![],
            ps: vec![],
            qs: vec![],
            rs: vec![],
            modes: vec![],
            mellin: MellinGrid { ks: vec![], gs: vec![], ss: vec![], ts: vec![], modes: vec![] },
            families: CheckFamily::ALL.to_vec(),
        }
    }

    /// The same grid restricted to the given check families.
    pub fn only(mut self, families: &[CheckFamily]) -> Self {
        self.families = families.to_vec();
        self
    }

    fn has(&self, f: CheckFamily) -> bool {
        self.families.contains(&f)
    }

    fn param_sets(&self, ks: &[f64], modes: &[GammaMode]) -> Vec<MLParams> {
        let mut out = Vec::new();
        for &mode in modes {
            for &k in ks {
                for &p in &self.ps {
                    for &q in &self.qs {
                        for &r in &self.rs {
                            if let Ok(m) = MLParams::new(k, p, q, r, mode) {
                                out.push(m);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditConfig {
    pub grid: GridSpec,
    pub quad: QuadConfig,
    pub tolerances: Tolerances,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub total: usize,
    pub holds: usize,
    pub fails: usize,
    pub inconclusive: usize,
    pub asserted: usize,
    pub asserted_holding: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub config: AuditConfig,
    pub checks: Vec<IdentityReport>,
    pub summary: BTreeMap<String, Counts>,
}

fn checks_for(params: &MLParams, grid: &GridSpec, qcfg: &QuadConfig, tol: &Tolerances) -> Vec<IdentityReport> {
    let checker = match Checker::new(params, *qcfg, *tol) {
        Ok(c) => c,
        Err(_) => return vec![],
    };
    let mut out = Vec::new();
    let unit = params.p() == 1.0 && params.q() == 1.0 && params.r() == 1.0;
    let q_r_one = params.q() == 1.0 && params.r() == 1.0;
    for &s in &grid.ss {
        for &t in &grid.ts {
            for &v in &grid.vs {
                let Ok(a) = ExtBetaArgs::new(s, t, v) else { continue };
                if grid.has(CheckFamily::Symmetry) {
                    out.push(checker.symmetry(a));
                }
                if grid.has(CheckFamily::FunctionalRelation) {
                    out.push(checker.functional_relation(a));
                    out.push(checker.functional_relation_unit_shift(a));
                }
                if grid.has(CheckFamily::ReprEquivalence) {
                    for rep in Representation::alternatives() {
                        out.push(checker.repr_equivalence(rep, a));
                    }
                }
                if grid.has(CheckFamily::ReprInvariance) {
                    for family in Representation::parameter_families() {
                        for &rep in &family[1..] {
                            out.push(checker.repr_invariance(rep, family[0], a));
                        }
                    }
                }
                if grid.has(CheckFamily::ReprLiteral) {
                    for rep in Representation::alternatives() {
                        out.push(checker.repr_literal(rep, a));
                    }
                }
                if grid.has(CheckFamily::Reductions) {
                    if v == 0.0 {
                        out.push(checker.beta_zero_v(s, t));
                        if unit {
                            out.push(checker.beta_unit_reduction(s, t));
                        }
                    }
                    if q_r_one {
                        out.push(checker.beta_series_reduction(a));
                    }
                }
            }
        }
    }
    let strip = extended_gamma_strip(&checker.ml).ok();
    for &s in &grid.ss {
        // gamma-type checks only where the defining integral converges
        let Some(strip) = strip else { break };
        if s >= strip.unwrap_or(f64::INFINITY) {
            continue;
        }
        if grid.has(CheckFamily::Reductions) && q_r_one && s < checker.ml.prabhakar().gamma {
            out.push(checker.gamma_reduction(s));
        }
        if grid.has(CheckFamily::ClosedForm) {
            out.push(checker.closed_form_claim(s));
        }
    }
    out
}

fn mellin_checks(params: &MLParams, grid: &GridSpec, qcfg: &QuadConfig, tol: &Tolerances) -> Vec<IdentityReport> {
    let Ok(checker) = Checker::new(params, *qcfg, *tol) else { return vec![] };
    let mut out = Vec::new();
    for &g in &grid.mellin.gs {
        for &s in &grid.mellin.ss {
            for &t in &grid.mellin.ts {
                out.extend(checker.mellin(s, t, MellinQuery { g }));
            }
        }
    }
    out
}

/// Runs every selected check over the grid. Results are ordered by the grid
/// regardless of how the work is scheduled.
pub fn run_audit(grid: &GridSpec, qcfg: &QuadConfig, tol: &Tolerances) -> Result<AuditReport> {
    qcfg.validate()?;
    let main = grid.param_sets(&grid.ks, &grid.modes);
    let mut checks: Vec<IdentityReport> =
        main.par_iter().map(|p| checks_for(p, grid, qcfg, tol)).collect::<Vec<_>>().concat();
    if grid.has(CheckFamily::Mellin) {
        let sub = grid.param_sets(&grid.mellin.ks, &grid.mellin.modes);
        let mellin: Vec<_> = sub.par_iter().map(|p| mellin_checks(p, grid, qcfg, tol)).collect();
        checks.extend(mellin.concat());
    }
    let mut summary: BTreeMap<String, Counts> = BTreeMap::new();
    for c in &checks {
        let e = summary.entry(c.identity_id.to_string()).or_default();
        e.total += 1;
        match c.verdict {
            Verdict::Holds => e.holds += 1,
            Verdict::Fails => e.fails += 1,
            Verdict::Inconclusive => e.inconclusive += 1,
        }
        if c.asserted {
            e.asserted += 1;
            if c.verdict == Verdict::Holds {
                e.asserted_holding += 1;
            }
        }
    }
    Ok(AuditReport {
        config: AuditConfig { grid: grid.clone(), quad: *qcfg, tolerances: *tol },
        checks,
        summary,
    })
}

impl AuditReport {
    /// Whether every asserted check holds; probes never affect this.
    pub fn asserted_all_hold(&self) -> bool {
        self.checks.iter().all(|c| !c.asserted || c.verdict == Verdict::Holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("audit report serializes")
    }

    /// Sorted union of the input keys over all checks.
    pub fn input_keys(&self) -> Vec<String> {
        let mut keys: Vec<String> = self.checks.iter().flat_map(|c| c.inputs.keys().cloned()).collect();
        keys.sort();
        keys.dedup();
        keys
    }

    /// CSV with columns `identity_id`, the input keys in sorted order, `lhs`,
    /// `rhs`, `abs_diff`, `rel_diff`, `verdict`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let keys = self.input_keys();
        let mut header = vec!["identity_id".to_string()];
        header.extend(keys.iter().cloned());
        header.extend(["lhs", "rhs", "abs_diff", "rel_diff", "verdict"].map(String::from));
        writeln!(w, "{}", header.join(","))?;
        for c in &self.checks {
            let mut row = vec![csv_field(&c.identity_id.to_string())];
            for k in &keys {
                row.push(c.inputs.get(k).map(|v| csv_field(&v.to_string())).unwrap_or_default());
            }
            for x in [c.lhs, c.rhs, c.abs_diff, c.rel_diff] {
                row.push(if x.is_finite() { fmt17(x) } else { String::new() });
            }
            row.push(format!("{:?}", c.verdict).to_lowercase());
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checker(k: f64, p: f64, q: f64, r: f64, mode: GammaMode) -> Checker {
        let params = MLParams::new(k, p, q, r, mode).unwrap();
        Checker::new(&params, QuadConfig::default(), Tolerances::default()).unwrap()
    }

    fn unit() -> Checker {
        checker(1.0, 1.0, 1.0, 1.0, GammaMode::ClassicalGamma)
    }

    #[test]
    fn functional_relation_examples() {
        let c = unit();
        let r = c.functional_relation(ExtBetaArgs::new(1.0, 1.0, 0.0).unwrap());
        assert_eq!(r.verdict, Verdict::Holds);
        assert!((r.rhs - 1.0).abs() < 1e-14);
        let r = c.functional_relation(ExtBetaArgs::new(1.0, 1.0, 1.0).unwrap());
        assert_eq!(r.verdict, Verdict::Holds);
        // the unit shift only holds at k = 1
        let c = checker(2.0, 1.0, 1.0, 1.0, GammaMode::ClassicalGamma);
        let a = ExtBetaArgs::new(1.0, 2.5, 0.5).unwrap();
        assert_eq!(c.functional_relation(a).verdict, Verdict::Holds);
        assert_eq!(c.functional_relation_unit_shift(a).verdict, Verdict::Fails);
    }

    #[test]
    fn symmetry_examples() {
        let c = checker(2.0, 1.0, 1.0, 1.0, GammaMode::ClassicalGamma);
        assert_eq!(c.symmetry(ExtBetaArgs::new(1.5, 2.5, 1.0).unwrap()).verdict, Verdict::Holds);
        let c = checker(0.5, 1.5, 0.75, 1.0, GammaMode::ClassicalGamma);
        assert_eq!(c.symmetry(ExtBetaArgs::new(0.6, 3.0, 2.0).unwrap()).verdict, Verdict::Holds);
        let r = c.symmetry(ExtBetaArgs::new(1.3, 1.3, 2.0).unwrap());
        assert_eq!(r.abs_diff, 0.0);
    }

    #[test]
    fn mellin_examples() {
        let c = unit();
        let [lit, cor] = c.mellin(2.0, 2.0, MellinQuery { g: 0.5 });
        let expect = gamma(0.5) * crate::special::beta(1.5, 1.5);
        assert!((cor.lhs - expect).abs() < 1e-9, "{}", cor.lhs);
        assert_eq!(cor.verdict, Verdict::Holds);
        assert_eq!(lit.verdict, Verdict::Fails);
        assert!(!lit.asserted);
        let [_, cor] = c.mellin(3.0, 2.0, MellinQuery { g: 1.0 });
        assert_eq!(cor.verdict, Verdict::Holds, "{cor:?}");
        let [lit, cor] = c.mellin(2.0, 2.0, MellinQuery { g: 2.5 });
        assert_eq!(cor.verdict, Verdict::Inconclusive);
        assert_eq!(lit.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn closed_form_claim_is_a_failing_probe() {
        let c = unit();
        let r = c.closed_form_claim(0.5);
        assert_eq!(r.verdict, Verdict::Fails);
        assert!((r.lhs - gamma(0.5)).abs() < 1e-10);
        assert!(!r.asserted);
        assert_eq!(c.closed_form_claim(1.0).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn reductions() {
        let c = unit();
        let r = c.beta_unit_reduction(2.0, 3.0);
        assert_eq!(r.verdict, Verdict::Holds);
        assert!((r.rhs - 1.0 / 12.0).abs() < 1e-15);
        let c = checker(2.0, 1.0, 1.0, 1.0, GammaMode::ClassicalGamma);
        let r = c.beta_unit_reduction(2.0, 2.0);
        assert_eq!(r.verdict, Verdict::Holds);
        assert!((r.lhs - 0.5).abs() < 1e-13);
        let c = checker(2.0, 1.0, 1.0, 1.0, GammaMode::KDeformedGamma);
        let r = c.beta_unit_reduction(2.0, 2.0);
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(!r.asserted);
        assert_eq!(c.beta_zero_v(2.0, 2.0).verdict, Verdict::Holds);
        for &(k, p, mode) in &[(0.5, 0.75, GammaMode::ClassicalGamma), (2.0, 1.5, GammaMode::KDeformedGamma)] {
            let c = checker(k, p, 1.0, 1.0, mode);
            let r = c.beta_series_reduction(ExtBetaArgs::new(0.6, 2.5, 2.0).unwrap());
            assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
        }
        let c = checker(0.5, 0.75, 1.0, 1.0, GammaMode::KDeformedGamma);
        let r = c.gamma_reduction(0.6);
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
    }

    #[test]
    fn small_audit_is_deterministic_and_serializes() {
        let mut grid = GridSpec::default_grid();
        grid.ks = vec![1.0];
        grid.ps = vec![1.0];
        grid.qs = vec![1.0];
        grid.rs = vec![0.75, 1.0];
        grid.ss = vec![0.6, 2.5];
        grid.ts = vec![1.0];
        grid.vs = vec![0.0, 2.0];
        grid.mellin.gs = vec![0.5];
        grid.mellin.ss = vec![2.0];
        grid.mellin.ts = vec![3.0];
        let a = run_audit(&grid, &QuadConfig::default(), &Tolerances::default()).unwrap();
        let b = run_audit(&grid, &QuadConfig::default(), &Tolerances::default()).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.asserted_all_hold(), "{:#?}", a.checks.iter().filter(|c| c.asserted && c.verdict != Verdict::Holds).collect::<Vec<_>>());
        let json: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
        assert!(json["checks"].as_array().unwrap().len() == a.checks.len());
        let mut csv = Vec::new();
        a.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().count(), a.checks.len() + 1);
        assert!(text.starts_with("identity_id,g,k,mode,p,q,r,reference,s,t,v,lhs"));
    }

    #[test]
    fn empty_audit() {
        let a = run_audit(&GridSpec::empty(), &QuadConfig::default(), &Tolerances::default()).unwrap();
        assert!(a.checks.is_empty());
        assert!(a.asserted_all_hold());
    }
}
