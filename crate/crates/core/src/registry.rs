//! Declarative theorem registry and the verification engine.
//!
//! Identities stated concretely in one place live in the versioned registry
//! file `registry/identities.sexp`, so each transcription can be reviewed
//! side-by-side with its source. The parametric lemma families (the
//! V - qU difference lemmas, the Chan-lemma instantiations, the pentagonal
//! X/Y product evaluations, the shift identities, and the g/h product
//! expansions) are instantiated here at every parameter value the theorem
//! proofs use.
//!
//! Every verification compares all coefficients at exponents `<= depth + 5`;
//! the margin guards the boundary reading of a stated bound.

use crate::bailey;
use crate::expr::{
    parse_forms, CyclotomicEvaluator, EvalError, Expr, RationalEvaluator,
};
use crate::number::{int_mod, Frac, Int};
use crate::ring::{CyclotomicRing, RingTag};
use crate::series::{CompareOutcome, LaurentSeries, SeriesError};
use crate::Ring;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

/// Extra coefficients checked above every requested depth.
pub const DEPTH_MARGIN: i64 = 5;

/// Working precision headroom for intermediate Laurent shifts; doubled and
/// retried if an evaluation still comes up short.
const BASE_SLACK: i64 = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremSpec {
    pub id: String,
    pub ring: RingTag,
    pub default_depth: i64,
    pub certificate_depth: i64,
    pub tags: Vec<String>,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl TheoremSpec {
    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepthProfile {
    Quick,
    Certificate,
}

impl DepthProfile {
    pub fn parse(s: &str) -> Option<DepthProfile> {
        match s {
            "quick" => Some(DepthProfile::Quick),
            "certificate" => Some(DepthProfile::Certificate),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Witness {
    pub exponent: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail { witness: Witness },
    Error { message: String },
}

impl Outcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VerificationReport {
    pub id: String,
    /// Inclusive exponent bound actually compared (requested depth + margin).
    pub depth: i64,
    #[serde(flatten)]
    pub outcome: Outcome,
    /// Number of coefficient slots compared.
    pub coefficients: u64,
    pub ms: u128,
}

#[derive(Clone, Debug, PartialEq)]
pub enum VerifyError {
    UnknownTheorem(String),
    Parse(String),
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::UnknownTheorem(id) => write!(f, "unknown theorem id '{}'", id),
            VerifyError::Parse(msg) => write!(f, "registry parse error: {}", msg),
        }
    }
}

impl std::error::Error for VerifyError {}

pub struct Registry {
    entries: Vec<TheoremSpec>,
}

const REGISTRY_TEXT: &str = include_str!("../registry/identities.sexp");

impl Registry {
    /// The full built-in registry: the transcribed identity file plus the
    /// parametric lemma instantiations.
    pub fn builtin() -> Registry {
        let mut entries =
            Self::parse(REGISTRY_TEXT).expect("bundled registry file parses");
        entries.extend(parametric_entries());
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        Registry { entries }
    }

    /// Load a registry from an external file (no parametric entries added).
    pub fn from_file(path: &std::path::Path) -> Result<Registry, VerifyError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| VerifyError::Parse(format!("{}: {}", path.display(), e)))?;
        let mut entries = Self::parse(&text)?;
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(Registry { entries })
    }

    /// Parse registry text into theorem specs.
    pub fn parse(text: &str) -> Result<Vec<TheoremSpec>, VerifyError> {
        let forms = parse_forms(text).map_err(|e| VerifyError::Parse(e.to_string()))?;
        let mut entries = Vec::new();
        for form in forms {
            let fields = form
                .theorem_fields()
                .map_err(|e| VerifyError::Parse(e.to_string()))?;
            let id = fields.id.clone();
            let missing = |what: &str| VerifyError::Parse(format!("{}: missing {}", id, what));
            let depth = fields.depth.ok_or_else(|| missing("depth"))?;
            entries.push(TheoremSpec {
                id: fields.id,
                ring: fields.ring.ok_or_else(|| missing("ring"))?,
                default_depth: depth,
                certificate_depth: fields.certificate.unwrap_or(depth),
                tags: fields.tags,
                lhs: fields.lhs.ok_or_else(|| missing("lhs"))?,
                rhs: fields.rhs.ok_or_else(|| missing("rhs"))?,
            });
        }
        Ok(entries)
    }

    pub fn entries(&self) -> &[TheoremSpec] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&TheoremSpec> {
        self.entries.iter().find(|t| t.id == id)
    }

    /// Ids matching a substring filter.
    pub fn matching(&self, filter: &str) -> Vec<&TheoremSpec> {
        self.entries
            .iter()
            .filter(|t| t.id.contains(filter))
            .collect()
    }

    /// Verify one registered identity. `depth_override` replaces the
    /// profile-selected depth.
    pub fn verify(
        &self,
        id: &str,
        profile: DepthProfile,
        depth_override: Option<i64>,
    ) -> Result<VerificationReport, VerifyError> {
        let spec = self
            .get(id)
            .ok_or_else(|| VerifyError::UnknownTheorem(id.to_string()))?;
        Ok(verify_spec(spec, profile, depth_override))
    }

    /// Run a set of entries (all, or those matching `filter`), skipping
    /// `deep`-tagged entries unless requested. Reports come back sorted by id.
    pub fn run_all(
        &self,
        profile: DepthProfile,
        filter: Option<&str>,
        include_deep: bool,
    ) -> Vec<VerificationReport> {
        use rayon::prelude::*;
        let selected: Vec<&TheoremSpec> = self
            .entries
            .iter()
            .filter(|t| filter.map(|f| t.id.contains(f)).unwrap_or(true))
            .filter(|t| include_deep || !t.has_tag("deep"))
            .collect();
        let mut reports: Vec<VerificationReport> = selected
            .par_iter()
            .map(|spec| verify_spec(spec, profile, None))
            .collect();
        reports.sort_by(|a, b| a.id.cmp(&b.id));
        reports
    }
}

/// Verify a spec at the profile depth (or an override), with margin.
pub fn verify_spec(
    spec: &TheoremSpec,
    profile: DepthProfile,
    depth_override: Option<i64>,
) -> VerificationReport {
    let depth = depth_override.unwrap_or(match profile {
        DepthProfile::Quick => spec.default_depth,
        DepthProfile::Certificate => spec.certificate_depth,
    });
    let compare_depth = depth + DEPTH_MARGIN;
    let start = Instant::now();
    let mut slack = BASE_SLACK;
    let (outcome, coefficients) = loop {
        let eval_depth = compare_depth + 1 + slack;
        let result = match &spec.ring {
            RingTag::Cyclotomic(l) => run_compare_cyclotomic(spec, *l, eval_depth, compare_depth),
            _ => run_compare_rational(spec, eval_depth, compare_depth),
        };
        match result {
            Ok(pair) => break pair,
            Err(CompareError::Insufficient) if slack < 8 * BASE_SLACK => {
                slack *= 8;
            }
            Err(CompareError::Insufficient) => {
                break (
                    Outcome::Error {
                        message: "internal precision exhausted before the requested depth"
                            .into(),
                    },
                    0,
                )
            }
            Err(CompareError::Eval(e)) => {
                break (
                    Outcome::Error {
                        message: e.to_string(),
                    },
                    0,
                )
            }
            Err(CompareError::Coset(side)) => {
                break (
                    Outcome::Error {
                        message: format!(
                            "{} is not supported on a single exponent coset mod 1",
                            side
                        ),
                    },
                    0,
                )
            }
        }
    };
    VerificationReport {
        id: spec.id.clone(),
        depth: compare_depth,
        outcome,
        coefficients,
        ms: start.elapsed().as_millis(),
    }
}

enum CompareError {
    Eval(EvalError),
    Insufficient,
    Coset(&'static str),
}

impl From<EvalError> for CompareError {
    fn from(e: EvalError) -> Self {
        CompareError::Eval(e)
    }
}

fn finish_compare<R: Ring>(
    ring: &R,
    lhs: &LaurentSeries<R>,
    rhs: &LaurentSeries<R>,
    compare_depth: i64,
) -> Result<(Outcome, u64), CompareError> {
    // the fractional prefactors of every summand must have agreed
    if !lhs.single_coset_mod_1() {
        return Err(CompareError::Coset("lhs"));
    }
    if !rhs.single_coset_mod_1() {
        return Err(CompareError::Coset("rhs"));
    }
    match lhs.compare_to_depth(rhs, Frac::from_int(compare_depth)) {
        Ok(CompareOutcome::Pass { compared }) => Ok((Outcome::Pass, compared)),
        Ok(CompareOutcome::Fail { exponent, lhs, rhs }) => Ok((
            Outcome::Fail {
                witness: Witness {
                    exponent: exponent.to_string(),
                    lhs: ring.format_elem(&lhs),
                    rhs: ring.format_elem(&rhs),
                },
            },
            0,
        )),
        Err(SeriesError::InsufficientTruncation { .. }) => Err(CompareError::Insufficient),
        Err(e) => Err(CompareError::Eval(EvalError::Series(e))),
    }
}

fn run_compare_rational(
    spec: &TheoremSpec,
    eval_depth: i64,
    compare_depth: i64,
) -> Result<(Outcome, u64), CompareError> {
    let mut ev = RationalEvaluator::new();
    let lhs = ev.eval(&spec.lhs, eval_depth)?;
    let rhs = ev.eval(&spec.rhs, eval_depth)?;
    finish_compare(&crate::RationalRing, &lhs, &rhs, compare_depth)
}

fn run_compare_cyclotomic(
    spec: &TheoremSpec,
    order: i64,
    eval_depth: i64,
    compare_depth: i64,
) -> Result<(Outcome, u64), CompareError> {
    let ring = CyclotomicRing::new(order)
        .map_err(|e| CompareError::Eval(EvalError::RingContext(e.to_string())))?;
    let mut ev = CyclotomicEvaluator::new(ring.clone());
    let lhs = ev.eval(&spec.lhs, eval_depth)?;
    let rhs = ev.eval(&spec.rhs, eval_depth)?;
    finish_compare(&ring, &lhs, &rhs, compare_depth)
}

// ---------------------------------------------------------------------------
// Parametric lemma entries
// ---------------------------------------------------------------------------

fn euler_sq(base: i64) -> Expr {
    Expr::pow(Expr::Euler(base), 2)
}

fn jac(gs: &[i64], base: i64) -> Expr {
    Expr::Jac(gs.to_vec(), base)
}

fn q(e: i64) -> Expr {
    Expr::QMono(e)
}

/// `V^3_l(3b+2) - q^{b+1} U^3_l(3b+4)` as products plus one h value.
fn lemma_3b2(l: i64, b: i64) -> TheoremSpec {
    let base = 3 * l * l;
    let lhs = Expr::sub(
        Expr::V(3, l, 3 * b + 2),
        Expr::mul(vec![q(b + 1), Expr::U(3, l, 3 * b + 4)]),
    );
    let mut terms = vec![Expr::H(3 * l * l - 3 * b * l - 2 * l, base)];
    for k in 1..l {
        terms.push(Expr::mul(vec![
            q(3 * k * k + 2 * k + 3 * b * k),
            Expr::div(
                Expr::mul(vec![
                    euler_sq(base),
                    jac(&[3 * l * l - 3 * b * l - 6 * k * l - 2 * l], base),
                ]),
                jac(&[3 * l * k, 3 * l * l - 3 * b * l - 3 * k * l - 2 * l], base),
            ),
        ]));
    }
    TheoremSpec {
        id: format!("lemma-3b2-l{}-b{}", l, b),
        ring: RingTag::Rational,
        default_depth: 60,
        certificate_depth: 150,
        tags: vec!["lemma".into(), "uv-reduction".into()],
        lhs,
        rhs: Expr::add(terms),
    }
}

/// The pentagonal product evaluation X used inside the 6b+1 lemma.
fn pentagonal_x_sides(l: i64, b: i64) -> (Expr, Expr) {
    let base = 3 * l * l;
    let mut sum = Vec::new();
    for k in 0..l {
        sum.push(Expr::mul(vec![
            q(6 * b * k + 6 * k * k + k - 3 * l),
            Expr::div(
                jac(&[(3 * l * l + l) / 2 + 6 * k * l + 3 * b * l], base),
                jac(&[(3 * l * l + 13 * l) / 2 + 3 * b * l], base),
            ),
        ]));
    }
    let lhs = Expr::neg(Expr::add(sum));
    let sign = if (b + 1) % 2 == 0 { 1 } else { -1 };
    let rhs = Expr::mul(vec![
        Expr::int(sign),
        q(-(3 * b * b + b) / 2 - 3 * l),
        Expr::div(
            Expr::Euler(1),
            Expr::mul(vec![
                Expr::Euler(base),
                jac(&[(3 * l * l + 13 * l) / 2 + 3 * b * l], base),
            ]),
        ),
    ]);
    (lhs, rhs)
}

fn pentagonal_x(l: i64, b: i64) -> TheoremSpec {
    let (lhs, rhs) = pentagonal_x_sides(l, b);
    TheoremSpec {
        id: format!("pentagonal-x-l{}-b{}", l, b),
        ring: RingTag::Rational,
        default_depth: 60,
        certificate_depth: 150,
        tags: vec!["lemma".into(), "pentagonal".into()],
        lhs,
        rhs,
    }
}

/// The pentagonal product evaluation Y used inside the 6b+4 lemma.
fn pentagonal_y_sides(l: i64, b: i64) -> (Expr, Expr) {
    let base = 3 * l * l;
    let mut sum = Vec::new();
    for k in 0..l {
        sum.push(Expr::mul(vec![
            q(6 * k * k + 4 * k + 6 * b * k - 3 * k * l + 3 * l),
            Expr::div(
                jac(&[3 * b * l + 6 * k * l + 2 * l], base),
                jac(&[3 * b * l + 8 * l], base),
            ),
        ]));
    }
    let lhs = Expr::add(sum);
    let sign = if ((l - 1) / 2 + b) % 2 == 0 { 1 } else { -1 };
    let exponent = 4 * l + (3 * b * l - 3 * b * b) / 2 - 2 * b - (3 * l * l + 5) / 8;
    let rhs = Expr::mul(vec![
        Expr::int(sign),
        q(exponent),
        Expr::div(
            Expr::Euler(1),
            Expr::mul(vec![Expr::Euler(base), jac(&[3 * b * l + 8 * l], base)]),
        ),
    ]);
    (lhs, rhs)
}

fn pentagonal_y(l: i64, b: i64) -> TheoremSpec {
    let (lhs, rhs) = pentagonal_y_sides(l, b);
    TheoremSpec {
        id: format!("pentagonal-y-l{}-b{}", l, b),
        ring: RingTag::Rational,
        default_depth: 60,
        certificate_depth: 150,
        tags: vec!["lemma".into(), "pentagonal".into()],
        lhs,
        rhs,
    }
}

/// `V^6_l(6b+1) - q^{2b+1} U^6_l(6b+5)` as products, one g value, and an
/// S-series pair weighted by the pentagonal X.
fn lemma_6b1(l: i64, b: i64) -> TheoremSpec {
    let base = 3 * l * l;
    let lhs = Expr::sub(
        Expr::V(6, l, 6 * b + 1),
        Expr::mul(vec![q(2 * b + 1), Expr::U(6, l, 6 * b + 5)]),
    );
    let mut terms = vec![Expr::neg(Expr::G((3 * l * l + l) / 2 + 3 * b * l, base))];
    for k in 2..l {
        terms.push(Expr::neg(Expr::mul(vec![
            q(6 * b * k + 6 * k * k + k - 3 * k * l),
            Expr::div(
                Expr::mul(vec![
                    euler_sq(base),
                    jac(
                        &[
                            3 * k * l - 3 * l,
                            (3 * l * l + 7 * l) / 2 + 3 * b * l + 3 * k * l,
                            (3 * l * l + l) / 2 + 6 * k * l + 3 * b * l,
                        ],
                        base,
                    ),
                ]),
                jac(
                    &[
                        -3 * l,
                        (3 * l * l + 7 * l) / 2 + 3 * b * l,
                        -3 * k * l,
                        (3 * l * l + l) / 2 + 3 * k * l + 3 * b * l,
                    ],
                    base,
                ),
            ),
        ])));
    }
    terms.push(Expr::mul(vec![
        q((3 * l * l + l) / 2 + 3 * b * l),
        Expr::div(
            Expr::mul(vec![
                euler_sq(base),
                jac(
                    &[-6 * b * l - 4 * l, (-3 * l * l + 5 * l) / 2 - 3 * b * l],
                    base,
                ),
            ]),
            jac(
                &[3 * l, (3 * l * l - 7 * l) / 2 - 3 * b * l, -6 * b * l - l],
                base,
            ),
        ),
    ]));
    let (_, x) = pentagonal_x_sides(l, b);
    terms.push(Expr::mul(vec![
        x,
        Expr::sub(
            Expr::S(-3 * l, -3 * l * l - 6 * b * l - 13 * l, base),
            Expr::mul(vec![
                q(3 * l * l + 6 * b * l + 13 * l),
                Expr::S(
                    (3 * l * l + 7 * l) / 2 + 3 * b * l,
                    3 * l * l + 6 * b * l + 13 * l,
                    base,
                ),
            ]),
        ),
    ]));
    TheoremSpec {
        id: format!("lemma-6b1-l{}-b{}", l, b),
        ring: RingTag::Rational,
        default_depth: 60,
        certificate_depth: 150,
        tags: vec!["lemma".into(), "uv-reduction".into()],
        lhs,
        rhs: Expr::add(terms),
    }
}

/// `V^6_l(6b+4) - q^{2b+2} U^6_l(6b+8)` as products, one g value, and an
/// S-series pair weighted by the pentagonal Y.
fn lemma_6b4(l: i64, b: i64) -> TheoremSpec {
    let base = 3 * l * l;
    let lhs = Expr::sub(
        Expr::V(6, l, 6 * b + 4),
        Expr::mul(vec![q(2 * b + 2), Expr::U(6, l, 6 * b + 8)]),
    );
    let mut terms = vec![Expr::G(3 * l * l - 3 * b * l - 2 * l, base)];
    for k in 2..l {
        terms.push(Expr::mul(vec![
            q(6 * k * k + 4 * k + 6 * b * k),
            Expr::div(
                Expr::mul(vec![
                    euler_sq(base),
                    jac(
                        &[
                            -3 * k * l + 3 * l,
                            3 * l * l - 3 * b * l - 3 * k * l - 5 * l,
                            3 * l * l - 3 * b * l - 6 * k * l - 2 * l,
                        ],
                        base,
                    ),
                ]),
                jac(
                    &[
                        3 * l,
                        3 * l * l - 3 * b * l - 5 * l,
                        3 * k * l,
                        3 * l * l - 3 * k * l - 3 * b * l - 2 * l,
                    ],
                    base,
                ),
            ),
        ]));
    }
    terms.push(Expr::neg(Expr::div(
        Expr::mul(vec![
            euler_sq(base),
            jac(
                &[3 * l * l - 3 * b * l + l, 6 * l * l - 6 * b * l - 7 * l],
                base,
            ),
        ]),
        jac(
            &[
                3 * l,
                3 * l * l - 3 * b * l - 5 * l,
                6 * l * l - 6 * b * l - 4 * l,
            ],
            base,
        ),
    )));
    let (_, y) = pentagonal_y_sides(l, b);
    terms.push(Expr::mul(vec![
        y,
        Expr::sub(
            Expr::S(3 * l, 6 * b * l + 16 * l - 6 * l * l, base),
            Expr::mul(vec![
                q(6 * l * l - 6 * b * l - 16 * l),
                Expr::S(
                    3 * l * l - 3 * b * l - 5 * l,
                    6 * l * l - 6 * b * l - 16 * l,
                    base,
                ),
            ]),
        ),
    ]));
    TheoremSpec {
        id: format!("lemma-6b4-l{}-b{}", l, b),
        ring: RingTag::Rational,
        default_depth: 60,
        certificate_depth: 150,
        tags: vec!["lemma".into(), "uv-reduction".into()],
        lhs,
        rhs: Expr::add(terms),
    }
}

/// Four-term specialization of Chan's identity (the r = 0, s = 4 case).
fn chan_four_term(suffix: &str, betas: [i64; 4], c: i64) -> TheoremSpec {
    let sum: i64 = betas.iter().sum();
    let lhs = Expr::div(euler_sq(c), jac(&betas, c));
    let mut terms = Vec::new();
    for i in 0..4 {
        let bi = betas[i];
        let others: Vec<i64> = (0..4)
            .filter(|&j| j != i)
            .map(|j| betas[j] - bi)
            .collect();
        terms.push(Expr::mul(vec![
            Expr::pow(jac(&others, c), -1),
            Expr::S(bi, 4 * bi - sum, c),
        ]));
    }
    TheoremSpec {
        id: format!("chan-four-term-{}", suffix),
        ring: RingTag::Rational,
        default_depth: 100,
        certificate_depth: 150,
        tags: vec!["lemma".into(), "chan".into()],
        lhs,
        rhs: Expr::add(terms),
    }
}

/// Two-term specialization of Chan's identity (the r = 0, s = 2 case).
fn chan_two_term(suffix: &str, b1: i64, b2: i64, c: i64) -> TheoremSpec {
    let lhs = Expr::div(
        Expr::mul(vec![euler_sq(c), jac(&[b2 - b1], c)]),
        jac(&[b1, b2], c),
    );
    let rhs = Expr::sub(
        Expr::T(b1, b1 - b2, c),
        Expr::mul(vec![q(b2 - b1), Expr::T(b2, b2 - b1, c)]),
    );
    TheoremSpec {
        id: format!("chan-two-term-{}", suffix),
        ring: RingTag::Rational,
        default_depth: 60,
        certificate_depth: 150,
        tags: vec!["lemma".into(), "chan".into()],
        lhs,
        rhs,
    }
}

fn simple_lemma(id: &str, depth: i64, certificate: i64, lhs: Expr, rhs: Expr) -> TheoremSpec {
    TheoremSpec {
        id: id.into(),
        ring: RingTag::Rational,
        default_depth: depth,
        certificate_depth: certificate,
        tags: vec!["lemma".into()],
        lhs,
        rhs,
    }
}

fn parametric_entries() -> Vec<TheoremSpec> {
    let mut out = Vec::new();
    // every (l, b) the theorem proofs instantiate
    for (l, b) in [
        (5, 0),
        (5, 1),
        (5, 2),
        (5, 3),
        (5, 4),
        (7, 0),
        (7, 1),
        (7, 2),
        (7, 3),
        (7, 4),
        (7, 5),
    ] {
        out.push(lemma_3b2(l, b));
    }
    for (l, b) in [(3, 0), (3, 1), (5, 0), (5, 1)] {
        out.push(lemma_6b1(l, b));
        out.push(pentagonal_x(l, b));
    }
    for (l, b) in [(3, 0), (5, 0), (5, 1)] {
        out.push(lemma_6b4(l, b));
        out.push(pentagonal_y(l, b));
    }
    // Chan instantiations: the tuples arising inside the 6b+1 / 6b+4 proofs
    // at (l, b, k) = (5, 0, 2), plus one generic small tuple
    out.push(chan_four_term("a", [-15, 55, -30, 70], 75));
    out.push(chan_four_term("b", [15, 50, 30, 35], 75));
    out.push(chan_four_term("c", [1, 2, 3, 5], 12));
    // two-term tuples from the 3b+2 reduction at (5,0,1) and (7,0,1)
    out.push(chan_two_term("a", 15, 50, 75));
    out.push(chan_two_term("b", 21, 112, 147));
    out.push(chan_two_term("c", 1, 3, 5));

    // shift identities at z = q^2 over the base q^5
    out.push(simple_lemma(
        "g-shift-multiplicative",
        60,
        150,
        Expr::sub(Expr::G(2, 5), Expr::G(7, 5)),
        Expr::int(2),
    ));
    out.push(simple_lemma(
        "g-shift-reflection",
        60,
        150,
        Expr::add(vec![Expr::G(2, 5), Expr::G(3, 5)]),
        Expr::int(1),
    ));
    out.push(simple_lemma(
        "h-shift-multiplicative",
        60,
        150,
        Expr::sub(Expr::H(2, 5), Expr::H(7, 5)),
        Expr::int(1),
    ));
    out.push(simple_lemma(
        "h-shift-reflection",
        60,
        150,
        Expr::add(vec![Expr::H(2, 5), Expr::H(3, 5)]),
        Expr::int(0),
    ));
    // h(q^{2s}, q^c) = g(q^s, q^c) - 1 at (s, c) = (5, 75)
    out.push(simple_lemma(
        "h-from-g",
        60,
        150,
        Expr::H(10, 75),
        Expr::sub(Expr::G(5, 75), Expr::int(1)),
    ));
    // g via its defining S-series combination vs the Lambert form, z = q^2, base q^15
    out.push(simple_lemma(
        "g-s-definition-consistency",
        40,
        100,
        Expr::add(vec![
            Expr::neg(Expr::mul(vec![q(4), Expr::S(2, 4, 15)])),
            Expr::mul(vec![
                Expr::div(jac(&[2], 15), jac(&[6], 15)),
                Expr::S(2, -33, 15),
            ]),
            Expr::mul(vec![
                q(10),
                Expr::div(jac(&[2], 15), jac(&[6], 15)),
                Expr::S(4, 12, 15),
            ]),
            Expr::SStar(-4, 15),
        ]),
        Expr::G(2, 15),
    ));
    // 3 - 2g(z,q) - g(z^2,q) + g(z^4,q) as a single product, z = q^2, base q^5
    out.push(simple_lemma(
        "g-three-term-product",
        60,
        150,
        Expr::add(vec![
            Expr::int(3),
            Expr::neg(Expr::mul(vec![Expr::int(2), Expr::G(2, 5)])),
            Expr::neg(Expr::G(4, 5)),
            Expr::G(8, 5),
        ]),
        Expr::div(
            Expr::mul(vec![Expr::pow(jac(&[12], 5), 2), euler_sq(5)]),
            Expr::mul(vec![Expr::pow(jac(&[4], 5), 2), jac(&[16], 5)]),
        ),
    ));
    // 4g(z,q) - 2g(z^2,q) into two products, z = q^2, base q^15
    out.push(simple_lemma(
        "g-two-term-products",
        60,
        120,
        Expr::sub(
            Expr::mul(vec![Expr::int(4), Expr::G(2, 15)]),
            Expr::mul(vec![Expr::int(2), Expr::G(4, 15)]),
        ),
        Expr::add(vec![
            Expr::int(3),
            Expr::neg(Expr::mul(vec![
                q(4),
                Expr::div(
                    Expr::mul(vec![euler_sq(15), jac(&[4, 16], 15)]),
                    Expr::mul(vec![Expr::pow(jac(&[8], 15), 2), jac(&[12], 15)]),
                ),
            ])),
            Expr::neg(Expr::div(
                Expr::mul(vec![euler_sq(15), Expr::pow(jac(&[8], 15), 3)]),
                Expr::mul(vec![Expr::pow(jac(&[4], 15), 3), jac(&[12], 15)]),
            )),
        ]),
    ));
    // 4h(z,q) - 2h(z^2,q) into two products, z = q^2, base q^15
    out.push(simple_lemma(
        "h-two-term-products",
        60,
        120,
        Expr::sub(
            Expr::mul(vec![Expr::int(4), Expr::H(2, 15)]),
            Expr::mul(vec![Expr::int(2), Expr::H(4, 15)]),
        ),
        Expr::add(vec![
            Expr::int(1),
            Expr::neg(Expr::mul(vec![
                q(2),
                Expr::div(
                    Expr::mul(vec![euler_sq(15), jac(&[2, 8], 15)]),
                    Expr::mul(vec![Expr::pow(jac(&[4], 15), 2), jac(&[6], 15)]),
                ),
            ])),
            Expr::neg(Expr::div(
                Expr::mul(vec![euler_sq(15), Expr::pow(jac(&[4], 15), 3)]),
                Expr::mul(vec![Expr::pow(jac(&[2], 15), 3), jac(&[6], 15)]),
            )),
        ]),
    ));
    // telescoped product expansions against the Lambert forms
    out.push(simple_lemma(
        "g-product-expansion-l5",
        40,
        100,
        Expr::GProd(5, 8),
        Expr::G(40, 75),
    ));
    out.push(simple_lemma(
        "g-product-expansion-l3",
        40,
        100,
        Expr::GProd(3, 1),
        Expr::G(3, 27),
    ));
    out.push(simple_lemma(
        "h-product-expansion-l5",
        40,
        100,
        Expr::HProd(5, 1),
        Expr::H(5, 75),
    ));
    out
}

// ---------------------------------------------------------------------------
// Congruence scanning
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceInstance {
    pub n: i64,
    /// Decimal value of pp_family(n).
    pub value: String,
    pub residue: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceScan {
    pub family: u8,
    pub modulus: i64,
    pub residue: i64,
    pub n_max: i64,
    pub instances: Vec<CongruenceInstance>,
    pub all_divisible: bool,
    /// Depth of the root-of-unity coefficient-vanishing check, when run.
    pub vanishing_depth: Option<i64>,
    pub vanishing_holds: Option<bool>,
}

/// Check `pp_family(modulus * n + residue) ≡ 0` for all arguments `<= n_max`
/// through the z = 1 series; optionally also check the vanishing of the
/// corresponding coefficients of `PP_family(zeta, q)` to `vanishing_depth`.
pub fn congruence_scan(
    family: u8,
    modulus: i64,
    residue: i64,
    n_max: i64,
    vanishing_depth: Option<i64>,
) -> CongruenceScan {
    assert!((1..=4).contains(&family) && modulus >= 2 && n_max >= 1);
    let series = bailey::pp_one_variable(family, n_max + 1);
    let mut instances = Vec::new();
    let mut all_divisible = true;
    let mut arg = residue.rem_euclid(modulus);
    if arg == 0 {
        arg = modulus;
    }
    while arg <= n_max {
        let value = series
            .coeff_at(Frac::from_int(arg))
            .unwrap_or_default();
        let rem = int_mod(&value, modulus);
        if rem != 0 {
            all_divisible = false;
        }
        instances.push(CongruenceInstance {
            n: arg,
            value: value.to_string(),
            residue: rem,
        });
        arg += modulus;
    }
    let supported = bailey::bracket_terms(family, modulus).is_ok();
    let (vanishing_depth, vanishing_holds) = match (supported, vanishing_depth) {
        (true, Some(depth)) => {
            let ok = root_coefficients_vanish(family, modulus, residue, depth);
            (Some(depth), Some(ok))
        }
        _ => (None, None),
    };
    CongruenceScan {
        family,
        modulus,
        residue,
        n_max,
        instances,
        all_divisible,
        vanishing_depth,
        vanishing_holds,
    }
}

/// True if `[q^{modulus*k + residue}] PP_family(zeta, q) = 0` for all
/// exponents `<= depth`.
pub fn root_coefficients_vanish(family: u8, modulus: i64, residue: i64, depth: i64) -> bool {
    let Ok(series) = bailey::pp_uv_at_root(family, modulus, depth + 1) else {
        return false;
    };
    let ring = CyclotomicRing::new(modulus).expect("prime modulus");
    let mut e = residue.rem_euclid(modulus);
    if e == 0 {
        e = modulus;
    }
    while e <= depth {
        if series.coeff_at(Frac::from_int(e)) != Some(ring.zero()) {
            return false;
        }
        e += modulus;
    }
    true
}

/// Class sums `M_family(k, modulus, n)` for `k = 0..modulus-1`, read from the
/// bivariate series.
pub fn residue_class_sums(
    f: &crate::bivariate::BivariateSeries<crate::ring::IntegerRing>,
    modulus: i64,
    n: i64,
) -> Vec<Int> {
    let mut sums = vec![Int::default(); modulus as usize];
    if let Some(col) = f.column(n) {
        for (&m, c) in col {
            sums[m.rem_euclid(modulus) as usize] += c;
        }
    }
    sums
}

/// Histogram comparison for the crank commands: enumeration vs series.
pub fn histogram_matches_series(family: u8, n: i64) -> (BTreeMap<i64, Int>, bool) {
    let hist = crate::partitions::crank_histogram(family, n);
    let f = bailey::pp_direct_bivariate(family, n + 1);
    let col = f.column(n).cloned().unwrap_or_default();
    let mut ok = true;
    for (&m, c) in &col {
        if hist.get(&m).cloned().unwrap_or_default() != *c {
            ok = false;
        }
    }
    for (m, h) in &hist {
        if col.get(m).cloned().unwrap_or_default() != *h {
            ok = false;
        }
    }
    (hist, ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_parses_and_contains_core_entries() {
        let reg = Registry::builtin();
        for id in [
            "crank-dissection-3",
            "crank-dissection-5",
            "crank-dissection-7",
            "dissection-pp1-3",
            "dissection-pp3-7",
            "pp1-zeta3",
            "pp3-zeta7",
            "eta-pp1-3",
            "eta-pp3-7-c",
            "uv-bracket-pp1-zeta3",
            "route-pp1-zeta3",
            "lemma-3b2-l5-b0",
            "lemma-6b1-l3-b1",
            "lemma-6b4-l5-b1",
            "pentagonal-x-l3-b0",
            "pentagonal-y-l5-b1",
            "chan-four-term-a",
            "chan-two-term-b",
            "h-display-q5-q75",
            "g-product-expansion-l5",
        ] {
            assert!(reg.get(id).is_some(), "missing registry entry {}", id);
        }
        // unknown ids are an error
        assert!(matches!(
            reg.verify("nope", DepthProfile::Quick, None),
            Err(VerifyError::UnknownTheorem(_))
        ));
    }

    #[test]
    fn quick_verification_of_small_entries() {
        let reg = Registry::builtin();
        for id in [
            "vchi1-from-g",
            "vchi1-from-h",
            "vchi1-from-g-negative",
            "g-shift-multiplicative",
            "g-shift-reflection",
            "h-shift-multiplicative",
            "h-shift-reflection",
            "h-from-g",
        ] {
            let report = reg.verify(id, DepthProfile::Quick, Some(30)).unwrap();
            assert!(report.outcome.is_pass(), "{}: {:?}", id, report.outcome);
        }
    }

    #[test]
    fn corrupted_entry_fails_with_witness() {
        // clone an entry and break one coefficient: the report must carry
        // a reproducible first-mismatch witness
        let reg = Registry::builtin();
        let mut spec = reg.get("vchi1-from-g").unwrap().clone();
        spec.rhs = Expr::sub(Expr::G(1, 3), Expr::ratio(4, 6));
        let report = verify_spec(&spec, DepthProfile::Quick, Some(20));
        match report.outcome {
            Outcome::Fail { witness } => {
                assert_eq!(witness.exponent, "0");
                assert_eq!(witness.lhs, "1/6");
            }
            other => panic!("expected failure, got {:?}", other),
        }
    }

    #[test]
    fn congruence_scan_small() {
        let scan = congruence_scan(3, 5, 4, 60, Some(30));
        assert!(scan.all_divisible);
        assert_eq!(scan.vanishing_holds, Some(true));
        assert!(scan.instances.iter().all(|inst| inst.residue == 0));
        // pp_2(1) = 0 is the degenerate first instance of (2, 5, 1)
        let scan2 = congruence_scan(2, 5, 1, 20, None);
        assert_eq!(scan2.instances[0].n, 1);
        assert_eq!(scan2.instances[0].value, "0");
        assert!(scan2.all_divisible);
        // an exploratory scan of a non-theorem progression reports honestly
        let scan3 = congruence_scan(1, 5, 0, 40, None);
        assert!(!scan3.all_divisible);
    }

    #[test]
    fn run_all_with_unmatched_filter_is_empty() {
        let reg = Registry::builtin();
        let reports = reg.run_all(DepthProfile::Quick, Some("zzz-no-such-id"), false);
        assert!(reports.is_empty());
    }

    #[test]
    fn report_serialization_roundtrip() {
        let report = VerificationReport {
            id: "x".into(),
            depth: 45,
            outcome: Outcome::Fail {
                witness: Witness {
                    exponent: "5".into(),
                    lhs: "1".into(),
                    rhs: "2".into(),
                },
            },
            coefficients: 0,
            ms: 12,
        };
        let json = serde_json::to_string(&report).unwrap();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
        assert!(json.contains("\"outcome\":\"fail\""));
    }
}
